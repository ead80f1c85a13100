from spheretrack.commands import cli

# Entry point for the command line: `python run.py verify --p 2 --q 1 --suite no-3-cycles`
if __name__ == "__main__":
    cli()
