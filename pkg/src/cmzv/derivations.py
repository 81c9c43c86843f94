"""The derivations delta_m, partial_m and s on Q<x,y>, and the words built from them.

Derivations are data (:class:`DerivationOp`) interpreted by :func:`apply`, so
commutators and linear combinations compare structurally and print cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import X, Y, NcPoly, ShapeError, in_hC0, linear_map, word_z
from .products import inner_harmonic, inner_shuffle

_x = NcPoly.word(X)
_y = NcPoly.word(Y)
_z = _x + _y


@dataclass(frozen=True)
class DerivationOp:
    """A derivation of Q<x,y>.

    ``kind`` is one of ``"delta"``, ``"partial"``, ``"s"`` (generator-defined),
    ``"commutator"`` (``args = (A, B)``) or ``"sum"`` (``args`` a tuple of
    ``(coefficient, op)`` pairs).
    """

    kind: str
    m: int = 0
    args: tuple = ()

    def __post_init__(self):
        if self.kind in ("delta", "partial") and self.m < 1:
            raise ValueError(f"{self.kind}_m needs m >= 1, got {self.m}")

    def __call__(self, a: NcPoly) -> NcPoly:
        return apply(self, a)

    def __str__(self) -> str:
        if self.kind in ("delta", "partial"):
            return f"{self.kind}_{self.m}"
        if self.kind == "s":
            return "s"
        if self.kind == "commutator":
            return f"[{self.args[0]}, {self.args[1]}]"
        return " + ".join(f"{c}*{op}" for c, op in self.args)


def Delta(m: int) -> DerivationOp:
    return DerivationOp("delta", m)


def Partial(m: int) -> DerivationOp:
    return DerivationOp("partial", m)


S = DerivationOp("s")


def Commutator(a: DerivationOp, b: DerivationOp) -> DerivationOp:
    return DerivationOp("commutator", args=(a, b))


def LinearCombination(*pairs: tuple[int | Fraction, DerivationOp]) -> DerivationOp:
    return DerivationOp("sum", args=tuple((Fraction(c), op) for c, op in pairs))


@lru_cache(maxsize=None)
def generator_image(op: DerivationOp, letter: str) -> NcPoly:
    if op.kind == "delta":
        return NcPoly.zero() if letter == X else NcPoly.word(word_z(op.m)) * _z
    if op.kind == "partial":
        core = _y * _z ** (op.m - 1) * _x
        return core if letter == X else -core
    if op.kind == "s":
        # s(x) = x^2 and s(x + y) = (x + y)^2
        return _x * _x if letter == X else _z * _z - _x * _x
    raise ValueError(f"{op.kind} is not generator-defined")


@lru_cache(maxsize=None)
def _leibniz_word(op: DerivationOp, w: str) -> NcPoly:
    acc = NcPoly.zero()
    for i, letter in enumerate(w):
        img = generator_image(op, letter)
        if img:
            acc = acc + NcPoly.word(w[:i]) * img * NcPoly.word(w[i + 1 :])
    return acc


def apply(op: DerivationOp, a: NcPoly) -> NcPoly:
    if op.kind in ("delta", "partial", "s"):
        return linear_map(lambda w: _leibniz_word(op, w), a)
    if op.kind == "commutator":
        p, q = op.args
        return apply(p, apply(q, a)) - apply(q, apply(p, a))
    if op.kind == "sum":
        acc = NcPoly.zero()
        for c, sub in op.args:
            acc = acc + apply(sub, a).scale(c)
        return acc
    raise ValueError(f"unknown derivation kind {op.kind!r}")


def delta(m: int, a: NcPoly) -> NcPoly:
    return apply(Delta(m), a)


def partial(m: int, a: NcPoly) -> NcPoly:
    return apply(Partial(m), a)


def s_op(a: NcPoly) -> NcPoly:
    return apply(S, a)


def commutator(d1: DerivationOp, d2: DerivationOp, a: NcPoly) -> NcPoly:
    return apply(Commutator(d1, d2), a)


def ones_word(m: int) -> str:
    """y^m, the word of the index (1, ..., 1)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return Y * m


def ones_star(m: int) -> NcPoly:
    """1 for m = 0, else y (x + y)^(m-1): all indices of weight m."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return NcPoly.one()
    return _y * _z ** (m - 1)


def F(w: NcPoly, m: int) -> NcPoly:
    """ones_star(m) inner-harmonic (y inner-shuffle w) - (m+1) ones_star(m+1) inner-harmonic w.

    Its image under the MZV map vanishes for every w in h_C^0.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if not in_hC0(w):
        raise ShapeError("F(w, m) needs w in h_C^0")
    return inner_harmonic(ones_star(m), inner_shuffle(_y, w)) - inner_harmonic(ones_star(m + 1), w).scale(m + 1)


def G(m: int, w: NcPoly) -> NcPoly:
    """Alternating sum of F(y^(i-1) inner-harmonic w, m - i) over i = 1..m."""
    if m < 1:
        raise ValueError("G_m needs m >= 1")
    acc = NcPoly.zero()
    for i in range(1, m + 1):
        arg = inner_harmonic(NcPoly.word(ones_word(i - 1)), w)
        term = F(arg, m - i)
        acc = acc + (term if i % 2 else -term)
    return acc
