"""Truncated series, region indicators and low-dimensional quadrature.

Every series is a sum of ``prod n_j^-e_j`` over integer chains
``n_1 ? n_2 ? ... ? n_R`` where each ``?`` is one of ``<``, ``<=``, ``>=``,
``>`` and an optional wrap relation ties ``n_R`` back to ``n_1``.  Truncation
keeps every variable in ``1..N``, so set decompositions of the summation
regions hold exactly at each cutoff.

The chain is summed by a transfer pass (prefix / suffix sums) rather than
by enumerating lattice points: ``O(R N)`` without wrap and ``O(R N^2)`` with
it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .algebra import X, Y
from .cyclic import CyclicIndex, Index, Symbol, is_admissible, is_admissible_cyclic, wrapped


class DivergentError(ValueError):
    """The requested symbol has a non-admissible index."""


@dataclass(frozen=True)
class TruncationSpec:
    """All summation variables run over 1..cutoff.

    ``mode="exact"`` returns a Fraction; ``mode="float"`` returns a float
    (double precision, error grows by about one ulp per accumulated term).
    """

    cutoff: int
    mode: str = "float"

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be positive")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"mode must be 'exact' or 'float', got {self.mode!r}")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


def _as_spec(t: TruncationSpec | int, mode: str | None = None) -> TruncationSpec:
    if isinstance(t, TruncationSpec):
        return t
    return TruncationSpec(int(t), mode or "float")


# -- chain sums ---------------------------------------------------------------

_RELATIONS = ("<", "<=", ">=", ">")


def _holds(a: int, rel: str, b: int) -> bool:
    if rel == "<":
        return a < b
    if rel == "<=":
        return a <= b
    if rel == ">=":
        return a >= b
    return a > b


def _step_exact(vec: list[Fraction], rel: str, weights: list[Fraction]) -> list[Fraction]:
    """new[m] = weights[m] * sum of vec[n] over n with (n rel m)."""
    n = len(vec)
    out = [Fraction(0)] * n
    if rel in ("<", "<="):
        run = Fraction(0)
        for m in range(n):
            if rel == "<=":
                run += vec[m]
            if run:
                out[m] = run * weights[m]
            if rel == "<":
                run += vec[m]
    else:
        run = Fraction(0)
        for m in range(n - 1, -1, -1):
            if rel == ">=":
                run += vec[m]
            if run:
                out[m] = run * weights[m]
            if rel == ">":
                run += vec[m]
    return out


def _step_float(mat: np.ndarray, rel: str, weights: np.ndarray) -> np.ndarray:
    if rel in ("<", "<="):
        run = np.cumsum(mat, axis=-1)
        if rel == "<":
            run = np.concatenate([np.zeros_like(run[..., :1]), run[..., :-1]], axis=-1)
    else:
        run = np.cumsum(mat[..., ::-1], axis=-1)[..., ::-1]
        if rel == ">":
            run = np.concatenate([run[..., 1:], np.zeros_like(run[..., :1])], axis=-1)
    return run * weights


@lru_cache(maxsize=64)
def _float_weights(e: int, cutoff: int) -> np.ndarray:
    return np.arange(1, cutoff + 1, dtype=float) ** (-float(e))


@lru_cache(maxsize=256)
def _exact_weights(e: int, cutoff: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, n**e) for n in range(1, cutoff + 1))


def chain_sum(
    exponents: Sequence[int],
    relations: Sequence[str],
    wrap: str | None,
    spec: TruncationSpec,
) -> Fraction | float:
    """Sum of prod n_j^-e_j over 1 <= n_j <= N with n_j relations[j] n_{j+1} and n_R wrap n_1."""
    exps = tuple(exponents)
    if len(relations) != len(exps) - 1 or any(r not in _RELATIONS for r in relations):
        raise ValueError("need one relation from <, <=, >=, > between consecutive variables")
    if wrap is not None and wrap not in _RELATIONS:
        raise ValueError(f"bad wrap relation {wrap!r}")
    N = spec.cutoff
    if spec.exact:
        return _chain_exact(exps, tuple(relations), wrap, N)
    return _chain_float(exps, tuple(relations), wrap, N)


def _chain_exact(exps, rels, wrap, N) -> Fraction:
    ws = [list(_exact_weights(e, N)) for e in exps]
    if wrap is None:
        vec = list(ws[0])
        for rel, w in zip(rels, ws[1:]):
            vec = _step_exact(vec, rel, w)
        return sum(vec, Fraction(0))
    total = Fraction(0)
    for a in range(N):
        vec = [Fraction(0)] * N
        vec[a] = ws[0][a]
        for rel, w in zip(rels, ws[1:]):
            vec = _step_exact(vec, rel, w)
        total += sum((v for m, v in enumerate(vec) if _holds(m, wrap, a)), Fraction(0))
    return total


_FLOAT_BLOCK = 1 << 22


def _chain_float(exps, rels, wrap, N) -> float:
    ws = [_float_weights(e, N) for e in exps]
    if wrap is None:
        vec = ws[0].copy()
        for rel, w in zip(rels, ws[1:]):
            vec = _step_float(vec, rel, w)
        return math.fsum(vec)
    values = np.arange(N)
    partials = []
    rows = max(1, _FLOAT_BLOCK // N)
    for start in range(0, N, rows):
        firsts = values[start : start + rows]
        mat = np.zeros((len(firsts), N))
        mat[np.arange(len(firsts)), firsts] = ws[0][firsts]
        for rel, w in zip(rels, ws[1:]):
            mat = _step_float(mat, rel, w)
        m, a = values[None, :], firsts[:, None]
        mask = {"<": m < a, "<=": m <= a, ">=": m >= a, ">": m > a}[wrap]
        partials.extend(np.where(mask, mat, 0.0).sum(axis=1))
    return math.fsum(partials)


# -- the series ---------------------------------------------------------------


def _cyclic_chain(k: CyclicIndex) -> tuple[list[int], list[str]]:
    exps: list[int] = []
    rels: list[str] = []
    for i, block in enumerate(k.blocks):
        if i:
            rels.append(">=")
        exps.extend(block)
        rels.extend(["<"] * (len(block) - 1))
    return exps, rels


def eval_mzv(k: Index, t: TruncationSpec | int, mode: str | None = None):
    """Truncated zeta(k_1, ..., k_r): 0 < n_1 < ... < n_r <= N."""
    spec = _as_spec(t, mode)
    if not is_admissible(tuple(k)):
        raise DivergentError(f"zeta{tuple(k)} diverges")
    return chain_sum(k, ["<"] * (len(k) - 1), None, spec)


def eval_mzsv(k: Index, t: TruncationSpec | int, mode: str | None = None):
    """Truncated zeta-star(k_1, ..., k_r): 0 < n_1 <= ... <= n_r <= N."""
    spec = _as_spec(t, mode)
    if not is_admissible(tuple(k)):
        raise DivergentError(f"zeta*{tuple(k)} diverges")
    return chain_sum(k, ["<="] * (len(k) - 1), None, spec)


def eval_cyc(k: CyclicIndex, t: TruncationSpec | int, mode: str | None = None):
    """Truncated cyclic MZV: blocks increase strictly inside, step down (>=) between, and wrap."""
    spec = _as_spec(t, mode)
    if not is_admissible_cyclic(k):
        raise DivergentError(f"{k} is not an admissible cyclic index")
    exps, rels = _cyclic_chain(k)
    return chain_sum(exps, rels, ">=", spec)


def eval_ribbon(k: CyclicIndex, t: TruncationSpec | int, mode: str | None = None):
    """Truncated ribbon Schur MZV: the cyclic chain without the wrap condition."""
    spec = _as_spec(t, mode)
    if k.blocks[0] == (1,):
        raise ValueError("the ribbon value needs a first block other than (1)")
    if not is_admissible_cyclic(k):
        raise DivergentError(f"{k} is not an admissible cyclic index")
    exps, rels = _cyclic_chain(k)
    return chain_sum(exps, rels, None, spec)


def eval_symbol(sym: Symbol, t: TruncationSpec | int, mode: str | None = None):
    if sym.kind == "cyc":
        return eval_cyc(sym.index, t, mode)
    if sym.kind == "mzv":
        return eval_mzv(sym.index, t, mode)
    return eval_mzsv(sym.index, t, mode)


def tail_estimate(sym: Symbol, spec: TruncationSpec) -> float:
    """Contribution of the last shell (value at N minus value at N-1); a heuristic, not a bound."""
    if spec.cutoff < 2:
        return float(eval_symbol(sym, spec))
    prev = TruncationSpec(spec.cutoff - 1, spec.mode)
    return float(eval_symbol(sym, spec)) - float(eval_symbol(sym, prev))


def evaluation_record(sym: Symbol, spec: TruncationSpec) -> dict:
    """The JSON-ready evaluation result for the CLI."""
    value = eval_symbol(sym, spec)
    text = (f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)) if spec.exact else repr(float(value))
    return {
        "kind": sym.kind,
        "index": sym.to_dict()["index"],
        "cutoff": spec.cutoff,
        "mode": spec.mode,
        "value": text,
        "error_bound": None,
        "tail_estimate": repr(tail_estimate(sym, TruncationSpec(spec.cutoff, "float"))),
    }


# -- region indicators ----------------------------------------------------------


def _check_arity(expected: int, point: Sequence) -> None:
    if len(point) != expected:
        raise ValueError(f"expected a point with {expected} coordinates, got {len(point)}")


def _chain_holds(point: Sequence, rels: Sequence[str]) -> bool:
    return all(_holds(a, r, b) for a, r, b in zip(point, rels, point[1:]))


def indicator_Sprime(k: CyclicIndex, point: Sequence[int]) -> bool:
    _check_arity(k.depth, point)
    _, rels = _cyclic_chain(k)
    return all(n >= 1 for n in point) and _chain_holds(point, rels)


def indicator_S(k: CyclicIndex, point: Sequence[int]) -> bool:
    return indicator_Sprime(k, point) and point[-1] >= point[0]


def _integral_chain(k: CyclicIndex) -> list[str]:
    rels: list[str] = []
    for i, block in enumerate(k.blocks):
        if i:
            rels.append(">")
        rels.extend(["<"] * (sum(block) - 1))
    return rels


def indicator_Dprime(k: CyclicIndex, point: Sequence[float]) -> bool:
    _check_arity(k.weight, point)
    return all(0 < t < 1 for t in point) and _chain_holds(point, _integral_chain(k))


def indicator_D(k: CyclicIndex, point: Sequence[float]) -> bool:
    return indicator_Dprime(k, point) and point[-1] > point[0]


def integrand_letters(k: CyclicIndex) -> str:
    """One letter per integration variable: y for dt/(1-t), x for dt/t."""
    return "".join(Y + X * (p - 1) for block in k.blocks for p in block)


def _blocks_of(k: CyclicIndex, point: Sequence, sizes: Sequence[int]) -> list[tuple]:
    out, pos = [], 0
    for size in sizes:
        out.append(tuple(point[pos : pos + size]))
        pos += size
    return out


def wrap_permutation(k: CyclicIndex, point: Sequence, integral: bool) -> tuple:
    """Reorder a point of k so the last block's variables come first (the wrapped shape's order)."""
    sizes = [sum(b) for b in k.blocks] if integral else [len(b) for b in k.blocks]
    parts = _blocks_of(k, point, sizes)
    return tuple(parts[-1]) + tuple(v for part in parts[:-1] for v in part)


def check_Sprime_decomposition(k: CyclicIndex, point: Sequence[int]) -> bool:
    """S' = S ⊔ (wrapped-shape S, reordered) holds at this lattice point."""
    lhs = indicator_Sprime(k, point)
    if k.s == 1:
        return lhs == indicator_S(k, point)
    rhs = int(indicator_S(k, point)) + int(indicator_S(wrapped(k), wrap_permutation(k, point, False)))
    return int(lhs) == rhs


def check_Dprime_decomposition(k: CyclicIndex, point: Sequence[float]) -> bool:
    """D' = D ⊔ (wrapped-shape D, reordered) off the tie set, with matching integrands."""
    if k.s == 1:
        return indicator_Dprime(k, point) == indicator_D(k, point)
    perm = wrap_permutation(k, point, True)
    letters = integrand_letters(k)
    if "".join(wrap_permutation(k, letters, True)) != integrand_letters(wrapped(k)):
        return False
    lhs = indicator_Dprime(k, point)
    rhs = int(indicator_D(k, point)) + int(indicator_D(wrapped(k), perm))
    return int(lhs) == rhs


# -- E indicator identities ---------------------------------------------------------


def E_discrete(p: int, q: int, n: int) -> int:
    if p > q:
        raise ValueError(f"E(p, q, n) needs p <= q, got ({p}, {q})")
    return int(p <= n <= q)


def E_cont(s: float, s2: float, t: float) -> int:
    if s > s2:
        raise ValueError(f"E(s, s', t) needs s <= s', got ({s}, {s2})")
    return int(s <= t <= s2)


def _block_ends(point: Sequence, sizes: Sequence[int]) -> list[tuple]:
    ends, pos = [], 0
    for size in sizes:
        ends.append((point[pos], point[pos + size - 1]))
        pos += size
    return ends


def _E_sides(ends, probe, E) -> tuple[int, int]:
    s = len(ends)
    own = sum(E(first, last, probe) for first, last in ends)
    shifted = sum(E(ends[(i + 1) % s][0], ends[i][1], probe) for i in range(s))
    return own, shifted


def check_E_identity_discrete(k: CyclicIndex, point: Sequence[int], N: int) -> bool:
    """Sum_i E(n_i1, n_ir, n) == Sum_i E(n_(i+1)1, n_ir, n) for every 1 <= n <= N."""
    if not indicator_S(k, point):
        raise ValueError(f"{tuple(point)} is not in the region S of {k}")
    ends = _block_ends(point, [len(b) for b in k.blocks])
    return all(_E_sides(ends, n, E_discrete)[0] == _E_sides(ends, n, E_discrete)[1] for n in range(1, N + 1))


def check_E_identity_cont(k: CyclicIndex, point: Sequence[float], probes: Sequence[float]) -> bool:
    """The continuous analogue on D, checked at each probe value t in (0, 1)."""
    if not indicator_D(k, point):
        raise ValueError(f"point is not in the region D of {k}")
    ends = _block_ends(point, [sum(b) for b in k.blocks])
    for t in probes:
        own, shifted = _E_sides(ends, t, E_cont)
        if own != shifted:
            return False
    return True


# -- quadrature ------------------------------------------------------------------------

MAX_QUAD_WEIGHT = 4
_MAX_QUAD_POINTS = 2_000_000


@lru_cache(maxsize=16)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _form(letter: str, t: np.ndarray) -> np.ndarray:
    return 1.0 / t if letter == X else 1.0 / (1.0 - t)


def _logit_form(letter: str, t: np.ndarray) -> np.ndarray:
    # after t = 1/(1+e^-u): dt/t = (1-t) du and dt/(1-t) = t du
    return 1.0 - t if letter == X else t


def ordered_integral(letters: str, lo: float, hi: float, nodes: int = 40, logit: bool = False) -> float:
    """Integral of prod a_i(t_i) over lo < t_1 < ... < t_k < hi (1 for no letters).

    Nested Gauss-Legendre on the ordered simplex, each variable mapped onto
    (lower variable, hi).  With ``logit=True`` the nesting runs in logit
    coordinates, which removes the 1/t and 1/(1-t) endpoint singularities.
    """
    if not 0 <= lo < hi <= 1:
        raise ValueError("need 0 <= lo < hi <= 1")
    if not letters:
        return 1.0
    # the nesting evaluates nodes^k points; keep that below a few million
    nodes = min(nodes, int(_MAX_QUAD_POINTS ** (1.0 / len(letters))))
    x, w = _gauss_legendre(nodes)
    if logit:
        a, b = math.log(lo / (1 - lo)), math.log(hi / (1 - hi))
        to_t = lambda u: 1.0 / (1.0 + np.exp(-u))  # noqa: E731
        form = _logit_form
    else:
        a, b = lo, hi
        to_t = lambda u: u  # noqa: E731
        form = _form

    def inner(j: int, upper: np.ndarray) -> np.ndarray:
        # integral over a < u_1 < ... < u_j < upper of the first j forms
        if j == 0:
            return np.ones_like(upper)
        half = (upper[..., None] - a) / 2.0
        u = a + half * (x + 1.0)
        vals = form(letters[j - 1], to_t(u)) * inner(j - 1, u)
        return (vals * w * half).sum(axis=-1)

    return float(inner(len(letters), np.array(b)))


def _fixed_end_integral(word: str, p: float, q: float, nodes: int) -> float:
    if len(word) < 2:
        return 0.0
    ends = float(_form(word[0], np.array(p)) * _form(word[-1], np.array(q)))
    return ends * ordered_integral(word[1:-1], p, q, nodes)


def quad_iterated(word: str, p: float, q: float, nodes: int = 30) -> tuple[float, float]:
    """The endpoint-pinned iterated integral of a word with t_1 = p and t_k = q.

    Returns ``(value, error_estimate)``; the estimate compares ``nodes`` and
    ``2 * nodes`` Gauss-Legendre points.  Single letters integrate to 0.
    """
    if len(word) > MAX_QUAD_WEIGHT:
        raise ValueError(f"quadrature is capped at weight {MAX_QUAD_WEIGHT}")
    if not 0 < p < q < 1:
        raise ValueError("need 0 < p < q < 1")
    coarse = _fixed_end_integral(word, p, q, nodes)
    fine = _fixed_end_integral(word, p, q, 2 * nodes)
    return fine, abs(fine - coarse)


def quad_pinned(poly, p: float, q: float, nodes: int = 30) -> tuple[float, float]:
    """quad_iterated extended linearly over an NcPoly."""
    total, err = 0.0, 0.0
    for w, c in poly.items():
        v, e = quad_iterated(w, p, q, nodes)
        total += float(c) * v
        err += abs(float(c)) * e
    return total, err


def mzv_integral(word: str, eps0: float = 0.05, levels: int = 8, nodes: int = 120) -> tuple[float, float]:
    """The full-interval iterated integral of an admissible word (y ... x) over 0 < t_1 < ... < t_k < 1.

    The integral over (eps, 1 - eps) is computed in logit coordinates for
    eps = eps0 / 2^j and extrapolated to eps -> 0 by least squares on the
    basis {1} ∪ {eps^p log(eps)^i : p = 1, 2; i = 0 .. k-1}.  Returns
    ``(value, error_estimate)`` where the estimate is the change from
    dropping the coarsest level.
    """
    if len(word) > MAX_QUAD_WEIGHT:
        raise ValueError(f"quadrature is capped at weight {MAX_QUAD_WEIGHT}")
    if len(word) < 2 or word[0] != Y or word[-1] != X:
        raise DivergentError(f"{word!r} is not an admissible word")
    k = len(word)
    eps = eps0 / 2.0 ** np.arange(levels)
    vals = np.array([ordered_integral(word, e, 1 - e, nodes, logit=True) for e in eps])

    def extrapolate(es, vs):
        cols = [np.ones_like(es)]
        for p in (1, 2):
            for i in range(k):
                cols.append(es**p * np.log(es) ** i)
        design = np.stack(cols, axis=1)
        coef, *_ = np.linalg.lstsq(design, vs, rcond=None)
        return float(coef[0])

    best = extrapolate(eps, vals)
    alt = extrapolate(eps[1:], vals[1:])
    return best, abs(best - alt)
