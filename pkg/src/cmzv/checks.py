"""Identity checks shared by ``cmzv selftest`` and the test-suite.

Each check returns a :class:`CheckResult`; ``passed`` is exact equality for
symbolic and cutoff identities.  Checks that sample points take a
``numpy.random.Generator`` so a fixed seed reproduces the report byte for
byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator

import numpy as np

from .algebra import X, Y, NcPoly, compositions, index_to_word, word_z, words_up_to
from .cyclic import CyclicIndex, is_admissible, is_admissible_cyclic, rotate, wrapped
from .derivations import (
    Commutator,
    Delta,
    LinearCombination,
    Partial,
    S,
    G,
    apply,
    delta,
    ones_star,
    ones_word,
    partial,
)
from .evaluator import (
    TruncationSpec,
    check_Dprime_decomposition,
    check_E_identity_cont,
    check_E_identity_discrete,
    eval_cyc,
    eval_mzsv,
    eval_mzv,
    eval_ribbon,
    indicator_Dprime,
    indicator_D,
)
from .products import f_pq_harmonic, harmonic, inner_harmonic, strict_chain_sum
from .relations import (
    admissible_compositions,
    cyclic_sum_direct,
    cyclic_sum_via_cyc1,
    derivation_via_F,
    gen_derivation,
    hC0_words,
    sum_formula_word_identity,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<24} {self.detail}"


def _run(name: str, cases: Iterator[tuple[object, bool]], what: str) -> CheckResult:
    count, failures = 0, []
    for label, ok in cases:
        count += 1
        if not ok:
            failures.append(label)
    if failures:
        return CheckResult(name, False, f"{len(failures)}/{count} {what} failed, first: {failures[0]}")
    return CheckResult(name, True, f"{count} {what}")


# -- bases ---------------------------------------------------------------------------


def basis_words(max_weight: int) -> list[str]:
    return list(words_up_to(max_weight, 1))


def hC1_words(max_weight: int) -> list[str]:
    return [w for w in words_up_to(max_weight, 1) if w[0] == Y]


def hC0_basis(max_weight: int) -> list[str]:
    return [w for n in range(2, max_weight + 1) for w in hC0_words(n)]


def admissible_indices(weight: int) -> list[tuple[int, ...]]:
    return [c for c in compositions(weight) if is_admissible(c)]


def cyclic_indices(max_weight: int, max_s: int | None = None, min_weight: int = 2) -> list[CyclicIndex]:
    """All admissible cyclic indices in the weight / block-count envelope, in a fixed order."""
    out = []
    for w in range(min_weight, max_weight + 1):
        for block_weights in compositions(w):
            if max_s is not None and len(block_weights) > max_s:
                continue
            choices = [[(1,)] if b == 1 else admissible_indices(b) for b in block_weights]
            for blocks in product(*choices):
                k = CyclicIndex(blocks)
                if is_admissible_cyclic(k):
                    out.append(k)
    return out


def _P(w: str) -> NcPoly:
    return NcPoly.word(w)


# -- derivation calculus ----------------------------------------------------------------


def check_two_derivation(max_m: int, max_weight: int) -> CheckResult:
    """sum_{j<m} [delta_j, partial_{m-j}] = (m - 1)(partial_m + delta_m) on the word basis."""

    def cases():
        for m in range(1, max_m + 1):
            lhs = LinearCombination(*[(1, Commutator(Delta(j), Partial(m - j))) for j in range(1, m)])
            rhs = LinearCombination((m - 1, Partial(m)), (m - 1, Delta(m)))
            for w in basis_words(max_weight):
                yield (m, w), apply(lhs, _P(w)) == apply(rhs, _P(w))

    return _run("two_derivation", cases(), "(m, word) cases")


def check_s_commutators(max_m: int, max_weight: int) -> CheckResult:
    """[s, delta_m] = m delta_{m+1} and [s, partial_m] = m partial_{m+1}."""

    def cases():
        for m in range(1, max_m + 1):
            for w in basis_words(max_weight):
                a = _P(w)
                yield ("delta", m, w), apply(Commutator(S, Delta(m)), a) == delta(m + 1, a).scale(m)
                yield ("partial", m, w), apply(Commutator(S, Partial(m)), a) == partial(m + 1, a).scale(m)

    return _run("s_commutators", cases(), "cases")


def check_delta_harmonic(max_m: int, max_weight: int) -> CheckResult:
    """delta_m(w) = z_m * w - w z_m = z_m inner-harmonic w + z_m w on h_C^1."""

    def cases():
        for m in range(1, max_m + 1):
            zm = _P(word_z(m))
            for w in hC1_words(max_weight):
                a = _P(w)
                d = delta(m, a)
                yield (m, w, "harmonic"), d == harmonic(zm, a) - a * zm
                yield (m, w, "inner"), d == inner_harmonic(zm, a) + zm * a

    return _run("delta_m", cases(), "cases")


def check_eq1(max_m: int) -> CheckResult:
    """m ones_star(m) = sum_i z_i * ones_star(m - i)."""

    def cases():
        for m in range(1, max_m + 1):
            rhs = NcPoly.zero()
            for i in range(1, m + 1):
                rhs = rhs + harmonic(_P(word_z(i)), ones_star(m - i))
            yield m, ones_star(m).scale(m) == rhs

    return _run("eq1", cases(), "values of m")


def check_eq2(max_m: int) -> CheckResult:
    """m y^m = sum_i (-1)^(i-1) z_i * y^(m-i)."""

    def cases():
        for m in range(1, max_m + 1):
            rhs = NcPoly.zero()
            for i in range(1, m + 1):
                rhs = rhs + harmonic(_P(word_z(i)), _P(ones_word(m - i))).scale((-1) ** (i - 1))
            yield m, _P(ones_word(m)).scale(m) == rhs

    return _run("eq2", cases(), "values of m")


def check_eq3(max_m: int) -> CheckResult:
    """sum_i (-1)^i ones_star(m - i) * y^i is 1 for m = 0 and 0 otherwise."""

    def cases():
        for m in range(0, max_m + 1):
            total = NcPoly.zero()
            for i in range(m + 1):
                total = total + harmonic(ones_star(m - i), _P(ones_word(i))).scale((-1) ** i)
            yield m, total == (NcPoly.one() if m == 0 else NcPoly.zero())

    return _run("eq3", cases(), "values of m")


def check_weighted_sum(max_m: int) -> CheckResult:
    """sum_{i<m} (-1)^i (m - i) ones_star(m - i) * y^i = z_m."""

    def cases():
        for m in range(1, max_m + 1):
            total = NcPoly.zero()
            for i in range(m):
                total = total + harmonic(ones_star(m - i), _P(ones_word(i))).scale((-1) ** i * (m - i))
            yield m, total == _P(word_z(m))

    return _run("weighted_sum", cases(), "values of m")


def check_der_z_sum(max_m: int) -> CheckResult:
    """sum_{j<m} partial_{m-j}(z_j) = -(m - 1) z_m."""

    def cases():
        for m in range(1, max_m + 1):
            total = NcPoly.zero()
            for j in range(1, m):
                total = total + partial(m - j, _P(word_z(j)))
            yield m, total == _P(word_z(m)).scale(-(m - 1))

    return _run("der_z_sum", cases(), "values of m")


def check_der_z_1(max_m: int, max_weight: int) -> CheckResult:
    """G_m(w) = partial_m(w) on the h_C^0 basis."""

    def cases():
        for m in range(1, max_m + 1):
            for w in hC0_basis(max_weight):
                yield (m, w), G(m, _P(w)) == partial(m, _P(w))

    return _run("der_z_1", cases(), "(m, word) cases")


def check_partial_preserves_h0(max_m: int, max_weight: int) -> CheckResult:
    from .algebra import in_h0

    def cases():
        for m in range(1, max_m + 1):
            for w in hC0_basis(max_weight):
                yield (m, w), in_h0(partial(m, _P(w)))

    return _run("partial_preserves_h0", cases(), "cases")


def check_leibniz(max_weight: int) -> CheckResult:
    """D(vw) = D(v) w + v D(w) for delta_1..3, partial_1..3 and s over all splittings."""
    ops = [Delta(1), Delta(2), Delta(3), Partial(1), Partial(2), Partial(3), S]

    def cases():
        for w in basis_words(max_weight):
            for cut in range(1, len(w)):
                v, u = _P(w[:cut]), _P(w[cut:])
                for op in ops:
                    yield (str(op), w, cut), apply(op, v * u) == apply(op, v) * u + v * apply(op, u)

    return _run("leibniz", cases(), "cases")


# -- products ------------------------------------------------------------------------------


def check_sum_formula_words(max_k: int) -> CheckResult:
    def cases():
        for k in range(2, max_k + 1):
            for r in range(1, k):
                yield (k, r), sum_formula_word_identity(k, r)

    return _run("sum_formula_words", cases(), "(k, r) pairs")


def check_inner_harmonic_fpq(max_q: int, left_weight: int, right_weight: int) -> CheckResult:
    """f_pq(a inner-harmonic w) = f_pq(w) * (sum over p <= n_1 < ... < n_r <= q) for z-words a."""
    lefts = [c for n in range(1, left_weight + 1) for c in compositions(n)]
    rights = hC1_words(right_weight)

    def cases():
        for k in lefts:
            a = _P(index_to_word(k))
            for w in rights:
                prod = inner_harmonic(a, _P(w))
                for q in range(1, max_q + 1):
                    for p in range(1, q + 1):
                        lhs = f_pq_harmonic(prod, p, q)
                        rhs = f_pq_harmonic(_P(w), p, q) * strict_chain_sum(k, p, q)
                        yield (k, w, p, q), lhs == rhs

    return _run("inner_harmonic_fpq", cases(), "(a, w, p, q) cases")


# -- relation constructions ----------------------------------------------------------------


def check_cyclic_sum_construction(max_total: int) -> CheckResult:
    def cases():
        for total in range(2, max_total + 1):
            for ks in compositions(total):
                if sum(ks) > len(ks):
                    yield ks, cyclic_sum_direct(ks) == cyclic_sum_via_cyc1(ks)

    return _run("cyclic_sum_construction", cases(), "tuples")


def check_derivation_paths(max_weight: int) -> CheckResult:
    def cases():
        for n in range(3, max_weight + 1):
            for m in range(1, n - 1):
                for w in hC0_words(n - m):
                    a, b = gen_derivation(w, m), derivation_via_F(w, m)
                    yield (w, m), a.to_json() == b.to_json()

    return _run("derivation_paths", cases(), "(w, m) pairs")


# -- cutoff identities ---------------------------------------------------------------------


def check_ribbon_decomposition(max_weight: int, max_s: int, cutoff: int) -> CheckResult:
    spec = TruncationSpec(cutoff, "exact")

    def cases():
        for k in cyclic_indices(max_weight, max_s):
            if k.blocks[0] == (1,):
                continue
            rib = eval_ribbon(k, spec)
            rest = eval_cyc(wrapped(k), spec) if k.s > 1 else 0
            yield str(k), rib == eval_cyc(k, spec) + rest

    return _run("ribbon_decomposition", cases(), "indices")


def check_single_block_reduction(max_weight: int, cutoff: int) -> CheckResult:
    spec = TruncationSpec(cutoff, "exact")

    def cases():
        for w in range(2, max_weight + 1):
            power_sum = sum((Fraction(1, n**w) for n in range(1, cutoff + 1)), Fraction(0))
            for ks in compositions(w):
                if all(k == 1 for k in ks):
                    continue
                yield ("depth-one", ks), eval_cyc(CyclicIndex([(k,) for k in ks]), spec) == power_sum
            for ks in compositions(w):
                if len(ks) < 2 or ks[-1] < 2:
                    continue
                # ks = (l, k_1, ..., k_s)
                l, rest = ks[0], ks[1:]
                k = CyclicIndex([(l, rest[-1])] + [(r,) for r in reversed(rest[:-1])])
                yield ("star", ks), eval_cyc(k, spec) == eval_mzsv(ks, spec) - eval_mzv((w,), spec)

    return _run("single_block_reduction", cases(), "cases")


def check_rotation(max_weight: int, cutoff: int) -> CheckResult:
    spec = TruncationSpec(cutoff, "exact")

    def cases():
        for k in cyclic_indices(max_weight):
            base = eval_cyc(k, spec)
            for j in range(1, k.s):
                yield (str(k), j), eval_cyc(rotate(k, j), spec) == base

    return _run("rotation_invariance", cases(), "(index, shift) cases")


# -- pointwise region checks ---------------------------------------------------------------


def lattice_points_S(k: CyclicIndex, bound: int) -> Iterator[tuple[int, ...]]:
    """All points of S for k with entries <= bound, by depth-first extension of the chain."""
    from .evaluator import indicator_S

    rels = []
    for i, block in enumerate(k.blocks):
        if i:
            rels.append(">=")
        rels.extend(["<"] * (len(block) - 1))

    def extend(prefix):
        if len(prefix) == k.depth:
            if indicator_S(k, prefix):
                yield tuple(prefix)
            return
        for n in range(1, bound + 1):
            if prefix:
                rel, last = rels[len(prefix) - 1], prefix[-1]
                if rel == "<" and not last < n:
                    continue
                if rel == ">=" and not last >= n:
                    continue
            yield from extend(prefix + [n])

    yield from extend([])


def check_E_discrete(max_weight: int, bound: int) -> CheckResult:
    def cases():
        for k in cyclic_indices(max_weight):
            for pt in lattice_points_S(k, bound):
                yield (str(k), pt), check_E_identity_discrete(k, pt, bound)

    return _run("E_identity_discrete", cases(), "(index, point) cases")


def sample_region(k: CyclicIndex, rng: np.random.Generator, count: int, region: Callable) -> list[tuple]:
    """``count`` tie-free uniform points of (0,1)^weight lying in ``region`` (rejection sampling)."""
    out: list[tuple] = []
    dim = k.weight
    while len(out) < count:
        batch = rng.random((4096, dim))
        for row in batch:
            pt = tuple(float(v) for v in row)
            if len(set(pt)) == dim and region(k, pt):
                out.append(pt)
                if len(out) == count:
                    break
    return out


def sample_cube(k: CyclicIndex, rng: np.random.Generator, count: int) -> list[tuple]:
    out: list[tuple] = []
    while len(out) < count:
        row = rng.random(k.weight)
        if len(set(row.tolist())) == k.weight:
            out.append(tuple(float(v) for v in row))
    return out


def _share(total: int, n: int) -> list[int]:
    return [total // n + (i < total % n) for i in range(n)]


def check_E_continuous(shapes: list[CyclicIndex], rng: np.random.Generator, total_points: int, probes: int) -> CheckResult:
    def cases():
        for k, per in zip(shapes, _share(total_points, len(shapes))):
            for pt in sample_region(k, rng, per, indicator_D):
                ts = rng.random(probes).tolist() + list(pt)
                yield (str(k), pt), check_E_identity_cont(k, pt, ts)

    return _run("E_identity_continuous", cases(), "points")


def check_Dprime_split(shapes: list[CyclicIndex], rng: np.random.Generator, total_points: int) -> CheckResult:
    """Half the points from D', half uniform in the cube."""
    def cases():
        for k, per in zip(shapes, _share(total_points, len(shapes))):
            pts = sample_region(k, rng, per // 2, indicator_Dprime) + sample_cube(k, rng, per - per // 2)
            for pt in pts:
                yield (str(k), pt), check_Dprime_decomposition(k, pt)

    return _run("Dprime_decomposition", cases(), "points")
