import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from spheretrack.errors import PreconditionError, WordOverflowError
from spheretrack.words import (WORD_LENGTH_CAP, FreeWord, abelianization, apply_automorphism,
                               canonical, cyclic_reduce, is_primitive, is_primitive_vector,
                               is_trivial, primitive_canonical_form, reduce,
                               whitehead_automorphisms, whitehead_minimize,
                               whitehead_orbit_search)

letters = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=10)


def test_parse_and_print():
    word = FreeWord.parse("xxYxX")
    assert str(word) == "xxY"
    assert len(word) == 3
    assert str(FreeWord.parse("")) == ""
    assert repr(FreeWord()) == "<FreeWord 1>"


def test_parse_rejects_unknown_letters():
    with pytest.raises(ValueError):
        FreeWord.parse("xz")


def test_reduce_enforces_the_cap():
    with pytest.raises(WordOverflowError):
        reduce([1] * (WORD_LENGTH_CAP + 1))
    assert len(reduce([1] * (WORD_LENGTH_CAP + 1), cap=None)) == WORD_LENGTH_CAP + 1
    assert len(reduce([1, -1] * WORD_LENGTH_CAP)) == 0


def test_cyclic_reduce_and_canonical():
    assert str(cyclic_reduce(FreeWord.parse("yxY"))) == "x"
    assert str(canonical(FreeWord.parse("YX"))) == "xy"
    assert is_trivial(FreeWord.parse("xyYX"))


def test_abelianization():
    assert abelianization(FreeWord.parse("xxYxy")) == (3, 0)
    assert abelianization(FreeWord.parse("XXy")) == (-2, 1)


@pytest.mark.parametrize("text, expected", [
    ("x", True),
    ("Y", True),
    ("xy", True),
    ("xxy", True),
    ("xyxxy", True),
    ("", False),
    ("xx", False),
    ("xyXY", False),
    ("xxyy", False),
])
def test_is_primitive_on_known_words(text, expected):
    assert is_primitive(FreeWord.parse(text)) is expected
    assert whitehead_orbit_search(FreeWord.parse(text)) is expected


def test_twelve_whitehead_automorphisms():
    automorphisms = whitehead_automorphisms()
    assert len(automorphisms) == 12
    assert len({name for name, _ in automorphisms}) == 12


def test_automorphisms_preserve_primitivity():
    word = FreeWord.parse("xxy")
    for _, images in whitehead_automorphisms():
        assert is_primitive(apply_automorphism(word, images))


def test_whitehead_minimize_reaches_a_letter_for_primitives():
    assert len(whitehead_minimize(FreeWord.parse("xyxxyxy"))) == 1


@pytest.mark.parametrize("a, b", [(2, 3), (1, 0), (0, -1), (-3, 5), (5, 2)])
def test_primitive_canonical_form(a, b):
    word = primitive_canonical_form(a, b)
    assert abelianization(word) == (a, b)
    assert len(word) == abs(a) + abs(b)
    assert is_primitive(word)


def test_primitive_canonical_form_rejects_non_primitive_vectors():
    assert not is_primitive_vector(2, 4)
    with pytest.raises(PreconditionError):
        primitive_canonical_form(2, 4)


@given(letters, st.integers(0, 20))
@settings(max_examples=100)
def test_canonical_is_invariant_under_rotation_and_inversion(seq, shift):
    word = cyclic_reduce(FreeWord(tuple(seq)))
    assume(len(word) > 0)
    shift %= len(word)
    rotated = FreeWord(word.letters[shift:] + word.letters[:shift])
    assert canonical(rotated) == canonical(word)
    assert canonical(word.inverse()) == canonical(word)


@given(letters)
@settings(max_examples=60, deadline=None)
def test_descent_agrees_with_orbit_search(seq):
    word = FreeWord(tuple(seq))
    assert is_primitive(word) == whitehead_orbit_search(word)


@given(letters, letters)
@settings(max_examples=60)
def test_multiplication_reduces(first, second):
    u, v = FreeWord(tuple(first)), FreeWord(tuple(second))
    assert is_trivial(u * u.inverse())
    assert abelianization(u * v) == tuple(x + y for x, y in zip(abelianization(u), abelianization(v)))


def cyclic_words(max_len):
    """One canonical representative of every non-trivial cyclic word up to max_len letters."""
    found = set()
    stack = [()]
    while stack:
        seq = stack.pop()
        if seq and (len(seq) == 1 or seq[0] != -seq[-1]):
            found.add(canonical(FreeWord(seq), cap=None))
        if len(seq) < max_len:
            stack.extend(seq + (letter,) for letter in (1, -1, 2, -2) if not seq or letter != -seq[-1])
    return sorted(found, key=lambda word: (len(word), word.letters))


def test_cyclic_word_census():
    words = cyclic_words(2)
    assert [str(w) for w in words if len(w) == 1] == ["x", "y"]
    assert len(words) == 2 + 4


@pytest.mark.parametrize("max_len", [6])
def test_descent_agrees_with_orbit_search_on_every_short_word(max_len):
    for word in cyclic_words(max_len):
        assert is_primitive(word) == whitehead_orbit_search(word), str(word)


@pytest.mark.slow
def test_descent_agrees_with_orbit_search_up_to_length_ten():
    for word in cyclic_words(10):
        assert is_primitive(word) == whitehead_orbit_search(word), str(word)
