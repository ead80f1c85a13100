"""
Words in the free group of rank 2 on the generators x and y.

Reduction and automorphism images are computed with sympy's free groups;
FreeWord adds the cyclic canonical form, the x/X/y/Y serialization and the
length cap used across the package. Primitivity is decided by Whitehead
descent, with an exhaustive orbit search kept as an independent check.
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from sympy.combinatorics.free_groups import free_group

from .errors import PreconditionError, WordOverflowError

logger = logging.getLogger(__name__)

WORD_LENGTH_CAP = 64

GROUP, X, Y = free_group("x, y")
_SYMBOL_X, _SYMBOL_Y = GROUP.symbols
_GENERATOR = {1: X, 2: Y}
_LETTER_OF = {_SYMBOL_X: 1, -_SYMBOL_X: -1, _SYMBOL_Y: 2, -_SYMBOL_Y: -2}
_CHARS = {1: "x", -1: "X", 2: "y", -2: "Y"}
_FROM_CHAR = {ch: letter for letter, ch in _CHARS.items()}
# canonical forms compare letters in the order x < X < y < Y
_ORDER = {1: 0, -1: 1, 2: 2, -2: 3}


def _element(letters):
    word = GROUP.identity
    for letter in letters:
        word = word * _GENERATOR[abs(letter)] ** (1 if letter > 0 else -1)
    return word


def _letters(element):
    return tuple(_LETTER_OF[symbol] for symbol in element.letter_form)


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word; letters are 1, -1, 2, -2 for x, X, y, Y."""
    letters: tuple = ()

    def __post_init__(self):
        letters = tuple(int(letter) for letter in self.letters)
        if any(letter not in _CHARS for letter in letters):
            raise ValueError(f"letters must be among {sorted(_CHARS)}: {letters}")
        object.__setattr__(self, "letters", _letters(_element(letters)))

    @classmethod
    def parse(cls, text):
        """Reads a word written over x, X, y, Y; the empty string is the identity."""
        try:
            return cls(tuple(_FROM_CHAR[ch] for ch in text.strip()))
        except KeyError as exc:
            raise ValueError(f"unexpected letter {exc.args[0]!r} in word {text!r}") from None

    @property
    def element(self):
        return _element(self.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return "".join(_CHARS[letter] for letter in self.letters)

    def __repr__(self):
        return f"<FreeWord {self or '1'}>"

    def __mul__(self, other):
        return FreeWord(self.letters + other.letters)

    def inverse(self):
        return FreeWord(tuple(-letter for letter in reversed(self.letters)))

    def to_dict(self):
        return {"word": str(self), "length": len(self), "abelian": list(abelianization(self))}


def reduce(letters, cap=WORD_LENGTH_CAP):
    """
    Freely reduces a letter sequence into a FreeWord.

    Raises WordOverflowError when the reduced word is longer than `cap`.
    """
    word = letters if isinstance(letters, FreeWord) else FreeWord(tuple(letters))
    if cap is not None and len(word) > cap:
        raise WordOverflowError(f"word of length {len(word)} exceeds the cap of {cap} letters")
    return word


def cyclic_reduce(word, cap=WORD_LENGTH_CAP):
    """Removes cancelling letters at the two ends of a freely reduced word."""
    word = reduce(word, cap)
    return FreeWord(_letters(word.element.cyclic_reduction()))


def canonical(word, cap=WORD_LENGTH_CAP):
    """
    Canonical representative of the unoriented cyclic word.

    The least rotation, in the letter order x < X < y < Y, of the cyclic
    reduction of the word or of its inverse.
    """
    reduced = cyclic_reduce(word, cap).letters
    if not reduced:
        return FreeWord()
    inverse = tuple(-letter for letter in reversed(reduced))
    rotations = [seq[i:] + seq[:i] for seq in (reduced, inverse) for i in range(len(seq))]
    return FreeWord(min(rotations, key=lambda seq: [_ORDER[letter] for letter in seq]))


def is_trivial(word):
    return len(reduce(word, cap=None)) == 0


def abelianization(word):
    """Exponent sums (of x, of y)."""
    element = reduce(word, cap=None).element
    return (int(element.exponent_sum(X)), int(element.exponent_sum(Y)))


def is_primitive_vector(a, b):
    return gcd(abs(a), abs(b)) == 1


def whitehead_automorphisms():
    """
    The twelve non-trivial Whitehead automorphisms of the rank-2 free group.

    For a multiplier m among x, X, y, Y and the other generator z, each
    one sends z to z m, to m^-1 z or to m^-1 z m and fixes m. Returned as
    (name, images) with images keyed by generator symbol.
    """
    automorphisms = []
    for multiplier in (1, -1, 2, -2):
        m = _element((multiplier,))
        other = 2 if abs(multiplier) == 1 else 1
        z = _GENERATOR[other]
        fixed = _GENERATOR[abs(multiplier)]
        for kind, image in (("right", z * m), ("left", m ** -1 * z), ("both", m ** -1 * z * m)):
            images = {GROUP.symbols[abs(multiplier) - 1]: fixed, GROUP.symbols[other - 1]: image}
            automorphisms.append((f"{_CHARS[multiplier]}:{kind}", images))
    return automorphisms


_AUTOMORPHISMS = whitehead_automorphisms()


def apply_automorphism(word, images):
    """Image of a word under the endomorphism sending each generator to `images[symbol]`."""
    result = GROUP.identity
    for symbol, exponent in word.element.array_form:
        result = result * images[symbol] ** exponent
    return FreeWord(_letters(result))


@lru_cache(maxsize=65536)
def _descend(letters):
    current = cyclic_reduce(FreeWord(letters), cap=None)
    while len(current) > 1:
        for _, images in _AUTOMORPHISMS:
            image = cyclic_reduce(apply_automorphism(current, images), cap=None)
            if len(image) < len(current):
                current = image
                break
        else:
            break
    return current


def whitehead_minimize(word):
    """Applies the first length-reducing Whitehead automorphism until none reduces further."""
    return _descend(reduce(word, cap=None).letters)


def is_primitive(word):
    """
    True when the word belongs to a free basis of the rank-2 free group.

    Words whose exponent sums are not coprime are rejected at once; the rest
    are decided by Whitehead descent, which reaches a single letter exactly
    for primitive words.
    """
    word = reduce(word, cap=None)
    if not is_primitive_vector(*abelianization(word)):
        return False
    return len(whitehead_minimize(word)) == 1


def whitehead_orbit_search(word):
    """
    Exhaustive primitivity check used to cross-check is_primitive.

    Explores every cyclic word reachable by Whitehead automorphisms without
    exceeding the starting length and reports whether a single letter is
    reached.
    """
    start = canonical(word, cap=None)
    if len(start) == 1:
        return True
    if len(start) == 0:
        return False
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for _, images in _AUTOMORPHISMS:
            image = canonical(apply_automorphism(current, images), cap=None)
            if len(image) == 1:
                return True
            if len(image) <= len(start) and image not in seen:
                seen.add(image)
                queue.append(image)
    return False


def primitive_canonical_form(a, b):
    """
    The standard primitive word with exponent sums (a, b).

    Letter k of the positive word is x when floor(k|b|/n) does not move from
    k - 1 to k, with n = |a| + |b|; negative sums invert the generator.

    Raises:
        PreconditionError: when (a, b) is not a primitive vector.
    """
    if not is_primitive_vector(a, b):
        raise PreconditionError(f"({a}, {b}) is not a primitive vector")
    n, nb = abs(a) + abs(b), abs(b)
    sign_x, sign_y = (1 if a >= 0 else -1), (1 if b >= 0 else -1)
    letters = [sign_x * 1 if (k * nb) // n == ((k - 1) * nb) // n else sign_y * 2
               for k in range(1, n + 1)]
    return FreeWord(tuple(letters))
