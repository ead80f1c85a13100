import sys
import os

# --- Path Block ---
script_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.join(script_dir, '..')
sys.path.insert(0, project_root)

from spheretrack import create_app
from spheretrack.errors import SphereTrackError
from spheretrack.utils import lens_parameters, seed_presets

# Presets are generated for every lens space with p up to this bound.
MAX_P = 8
# Budgets whose disk sets are cached alongside the presets.
MAX_WEIGHTS = (4, 6)


def seed_presets_database():
    """
    Seeds the cache with the diagram of every L(p, q), p <= MAX_P, and the
    disk sets of both handlebodies at each budget in MAX_WEIGHTS.
    """
    app = create_app()
    presets = lens_parameters(MAX_P)
    print(f"Seeding {len(presets)} presets into {app.config['DATA_FOLDER']}...")
    try:
        count = seed_presets(app, MAX_P, MAX_WEIGHTS)
    except SphereTrackError as exc:
        print(f"Error: {exc}. Aborting.")
        return
    print(f"Success! {count} presets and their disk sets at budgets {list(MAX_WEIGHTS)} are cached.")


if __name__ == '__main__':
    seed_presets_database()
