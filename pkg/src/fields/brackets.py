"""
Formal bracket words over a family's generators and their evaluation.

A word is either a generator index or a pair (left, right) standing for the
bracket [left, right].
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from ..geometry.manifold import ManifoldSpec, Point, TangentVector, coords_of
from ..utils.error_handler import DimensionMismatchError
from .families import ControlFamily
from .symbolic import SymbolicField

logger = logging.getLogger(__name__)

Word = Union[int, Tuple["Word", "Word"]]


def word_length(word: Word) -> int:
    """Number of generator leaves."""
    if isinstance(word, tuple):
        return word_length(word[0]) + word_length(word[1])
    return 1


def word_label(word: Word, family: ControlFamily) -> str:
    if isinstance(word, tuple):
        return f"[{word_label(word[0], family)},{word_label(word[1], family)}]"
    return family.labels[word]


def ad_chain(x: Word, y: Word, m: int) -> Word:
    """The word ad_x^m y = [x, [x, ... [x, y]]]."""
    if m < 0:
        raise ValueError("ad power must be non-negative")
    word = y
    for _ in range(m):
        word = (x, word)
    return word


def enumerate_words(r: int, depth: int) -> List[Word]:
    """
    All bracket trees with at most ``depth`` leaves over r generators.

    Trees [w, w] vanish identically and are skipped; no other symmetry
    reduction is applied.
    """
    if depth < 1:
        raise ValueError("bracket depth must be at least 1")
    by_length: List[List[Word]] = [[], list(range(r))]
    for n in range(2, depth + 1):
        level: List[Word] = []
        for k in range(1, n):
            for left in by_length[k]:
                for right in by_length[n - k]:
                    if left != right:
                        level.append((left, right))
        by_length.append(level)
    return [w for level in by_length for w in level]


def field_for(family: ControlFamily, word: Word) -> SymbolicField:
    """Symbolic field of a word, cached on the family."""
    cache = family._cache.setdefault("words", {})
    if word in cache:
        return cache[word]
    if isinstance(word, tuple):
        result = field_for(family, word[0]).bracket(field_for(family, word[1]))
    else:
        family.check_index(word)
        result = family.generators[word]
    cache[word] = result
    return result


@dataclass(frozen=True)
class FieldHandle:
    """A generator or bracket word of a family, evaluable like any field."""

    family: ControlFamily
    word: Word

    def __post_init__(self):
        _check_word(self.word, self.family.r)

    @property
    def field(self) -> SymbolicField:
        return field_for(self.family, self.word)

    @property
    def label(self) -> str:
        return word_label(self.word, self.family)

    def value(self, z: np.ndarray) -> np.ndarray:
        return self.field.value(z)

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        return self.field.jacobian(z)


def _check_word(word: Word, r: int) -> None:
    if isinstance(word, tuple):
        if len(word) != 2:
            raise ValueError("bracket words are binary trees")
        _check_word(word[0], r)
        _check_word(word[1], r)
    elif not 0 <= int(word) < r:
        raise DimensionMismatchError(f"generator index {word} out of range 0..{r - 1}")


def _manifold_of(field) -> Optional[ManifoldSpec]:
    if isinstance(field, FieldHandle):
        return field.family.manifold
    return None


def lie_bracket(X, Y, x, manifold: Optional[ManifoldSpec] = None) -> TangentVector:
    """
    Numerical bracket [X, Y](x) = DY(x) X(x) - DX(x) Y(x).

    X and Y are anything exposing ``value`` and ``jacobian`` (generators,
    handles, symbolic or analytic ambient fields).
    """
    mx, my = _manifold_of(X), _manifold_of(Y)
    if mx is not None and my is not None and mx != my:
        raise DimensionMismatchError(
            "fields live on different manifolds", left=mx.kind.value, right=my.kind.value
        )
    manifold = manifold or mx or my
    if isinstance(x, Point):
        manifold = manifold or x.manifold
    coords = coords_of(x, manifold)
    if manifold is None:
        manifold = ManifoldSpec.euclidean(coords.shape[-1])
    point = x if isinstance(x, Point) else Point(manifold, coords)
    z = point.coords
    value = Y.jacobian(z) @ X.value(z) - X.jacobian(z) @ Y.value(z)
    return TangentVector(point, value)


def bracket_field(X: SymbolicField, Y: SymbolicField) -> SymbolicField:
    """Exact symbolic bracket of two fields on the same coordinates."""
    return X.bracket(Y)
