"""Generators for the relation families, numeric verification and exact rank.

A :class:`Relation` is a formal Q-linear combination of value symbols that is
asserted to vanish.  Generators work at the symbol level only; numbers enter
through :func:`verify_numeric`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .algebra import (
    Y,
    NcPoly,
    ShapeError,
    compositions,
    format_fraction,
    in_h0,
    in_hC0,
    index_to_word,
    word_to_index,
    word_z,
)
from .cyclic import (
    CyclicIndex,
    Symbol,
    TensorElem,
    check_tensor_word,
    rotate,
    tensor_to_cyclic_index,
    tensor_weight,
)
from .derivations import F, partial
from .evaluator import DivergentError, TruncationSpec, eval_symbol
from .products import inner_harmonic, inner_shuffle

FAMILIES = ("CYC1", "CYC2", "CyclicSum", "Derivation", "SumFormula", "Fwm")

# relations from these families hold term by term at every box cutoff
EXACT_AT_CUTOFF = frozenset({"CYC2"})


@dataclass(frozen=True)
class Relation:
    family: str
    terms: Mapping[Symbol, Fraction]
    provenance: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        clean = {s: Fraction(c) for s, c in self.terms.items() if c}
        object.__setattr__(self, "terms", clean)

    def items(self) -> list[tuple[Symbol, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].text())

    def is_trivial(self) -> bool:
        return not self.terms

    def weights(self) -> set[int]:
        return {s.weight for s in self.terms}

    @property
    def weight(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError(f"relation is not weight-homogeneous: weights {sorted(ws)}")
        return ws.pop()

    def same_terms(self, other: Relation) -> bool:
        return self.terms == other.terms

    def scaled(self, c: int | Fraction) -> Relation:
        return Relation(self.family, {s: c * v for s, v in self.terms.items()}, self.provenance)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "provenance": dict(self.provenance),
            "terms": [{"coeff": format_fraction(c), "symbol": s.to_dict()} for s, c in self.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> Relation:
        terms: dict[Symbol, Fraction] = {}
        for term in data["terms"]:
            sym = Symbol.from_dict(term["symbol"])
            terms[sym] = terms.get(sym, Fraction(0)) + Fraction(term["coeff"])
        return cls(data["family"], terms, data.get("provenance", {}))

    def __str__(self) -> str:
        if not self.terms:
            return "0 = 0"
        return " + ".join(f"{format_fraction(c)}*{s}" for s, c in self.items()) + " = 0"


def _add(acc: dict[Symbol, Fraction], sym: Symbol, c: Fraction | int) -> None:
    acc[sym] = acc.get(sym, Fraction(0)) + c


def mzv_symbols(w: NcPoly, kind: str = "mzv") -> dict[Symbol, Fraction]:
    """Z on h^0 at the symbol level: each z-word becomes an MZV symbol."""
    if not in_h0(w):
        raise ShapeError("expected an element of h^0")
    out: dict[Symbol, Fraction] = {}
    for word, c in w.items():
        if not word:
            raise ShapeError("constant term has no MZV symbol")
        _add(out, Symbol(kind, word_to_index(word)), c)
    return out


def _tensor_symbols(t: TensorElem, sign: int, acc: dict[Symbol, Fraction]) -> None:
    for k, c in t.symbols().items():
        _add(acc, Symbol.cyc(k), sign * c)


def _insertion_relation(family: str, t: Sequence[str], inner, inserted: str, provenance) -> Relation:
    """Sum_i Z(.. inner(u_i) ..) - Sum_i Z(.. u_i ⊗ inserted ..)."""
    t = check_tensor_word(t)
    acc: dict[Symbol, Fraction] = {}
    for i, u in enumerate(t):
        image = inner(NcPoly.word(u))
        for w, c in image.items():
            new = t[:i] + (w,) + t[i + 1 :]
            _add(acc, Symbol.cyc(tensor_to_cyclic_index(new)), c)
    for i in range(len(t)):
        new = t[: i + 1] + (inserted,) + t[i + 1 :]
        _add(acc, Symbol.cyc(tensor_to_cyclic_index(new)), -1)
    return Relation(family, acc, provenance)


def gen_cyc1(t: Sequence[str]) -> Relation:
    """y inner-shuffled into each component, minus y inserted after each component."""
    y = NcPoly.word(Y)
    return _insertion_relation(
        "CYC1", t, lambda u: inner_shuffle(y, u), Y, {"tensor": list(check_tensor_word(t))}
    )


def gen_cyc2(t: Sequence[str], k: int) -> Relation:
    """z_k inner-harmonic-multiplied into each component, minus z_k inserted after each."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    zk = NcPoly.word(word_z(k))
    return _insertion_relation(
        "CYC2", t, lambda u: inner_harmonic(zk, u), word_z(k), {"tensor": list(check_tensor_word(t)), "k": k}
    )


# -- cyclic sum formula ------------------------------------------------------------


def reduce_cyclic_symbol(k: CyclicIndex) -> dict[Symbol, Fraction]:
    """Rewrite a cyclic symbol of depth-one blocks (at most one depth-two block) into MZV/MZSV symbols.

    [(k_1), ..., (k_s)] -> zeta(k_1 + ... + k_s); a rotation of
    [(l, a), (b_2), ..., (b_s)] -> zeta*(l, b_s, ..., b_2, a) - zeta(weight).
    """
    long = [i for i, b in enumerate(k.blocks) if len(b) > 1]
    if not long:
        return {Symbol.mzv(k.weight): Fraction(1)}
    if len(long) > 1 or len(k.blocks[long[0]]) != 2:
        raise ValueError(f"{k} is outside the reducible shapes")
    r = rotate(k, long[0])
    (l, a), rest = r.blocks[0], [b[0] for b in r.blocks[1:]]
    if a < 2:
        raise ValueError(f"{k}: the depth-two block must end in a part >= 2")
    return {Symbol.mzsv(l, *reversed(rest), a): Fraction(1), Symbol.mzv(k.weight): Fraction(-1)}


def cyclic_sum_direct(ks: Sequence[int]) -> dict[Symbol, Fraction]:
    ks = tuple(ks)
    s, total = len(ks), sum(ks)
    acc: dict[Symbol, Fraction] = {}
    for i in range(s):
        rest = ks[i + 1 :] + ks[:i]
        for j in range(1, ks[i]):
            _add(acc, Symbol.mzsv(ks[i] - j, *rest, j + 1), 1)
    _add(acc, Symbol.mzv(total + 1), -total)
    return {sym: c for sym, c in acc.items() if c}


def cyclic_sum_via_cyc1(ks: Sequence[int]) -> dict[Symbol, Fraction]:
    """CYC1 on z_{k_s} ⊗ ... ⊗ z_{k_1}, then each cyclic symbol reduced to MZV / MZSV symbols."""
    tensor = tuple(word_z(k) for k in reversed(ks))
    rel = gen_cyc1(tensor)
    acc: dict[Symbol, Fraction] = {}
    for sym, c in rel.terms.items():
        for red, d in reduce_cyclic_symbol(sym.index).items():
            _add(acc, red, c * d)
    return {sym: c for sym, c in acc.items() if c}


def gen_cyclic_sum(ks: Sequence[int]) -> Relation:
    """Sum_i Sum_j zeta*(k_i - j, k_{i+1}, ..., k_{i-1}, j + 1) - k zeta(k + 1)."""
    ks = tuple(int(k) for k in ks)
    if not ks or any(k < 1 for k in ks):
        raise ValueError("need positive integers")
    if sum(ks) <= len(ks):
        raise ValueError("the cyclic sum formula needs some k_i >= 2")
    direct = cyclic_sum_direct(ks)
    derived = cyclic_sum_via_cyc1(ks)
    if direct != derived:
        raise AssertionError(f"cyclic sum constructions disagree for {ks}")
    return Relation("CyclicSum", direct, {"ks": list(ks)})


# -- derivation relation and F(w, m) ----------------------------------------------


def _check_derivation_argument(w: NcPoly) -> None:
    if not in_hC0(w):
        raise ShapeError("the derivation relation needs w in h_C^0")


def gen_derivation(w: NcPoly | str, m: int) -> Relation:
    """Z(partial_m(w)) = 0 as MZV symbols."""
    w = NcPoly.word(w) if isinstance(w, str) else w
    _check_derivation_argument(w)
    if m < 1:
        raise ValueError("m must be positive")
    image = partial(m, w)
    return Relation("Derivation", mzv_symbols(image), {"w": str(w), "m": m})


def derivation_via_F(w: NcPoly | str, m: int) -> Relation:
    """The same relation assembled from the F(y^(i-1) inner-harmonic w, m - i) combination."""
    w = NcPoly.word(w) if isinstance(w, str) else w
    _check_derivation_argument(w)
    acc = NcPoly.zero()
    for i in range(1, m + 1):
        arg = inner_harmonic(NcPoly.word(Y * (i - 1)), w)
        if not in_hC0(arg):
            raise ShapeError(f"y^{i - 1} inner-harmonic w left h_C^0")
        term = F(arg, m - i)
        acc = acc + (term if i % 2 else -term)
    return Relation("Derivation", mzv_symbols(acc), {"w": str(w), "m": m})


def gen_fwm(w: NcPoly | str, m: int) -> Relation:
    """Z(F(w, m)) = 0 as MZV symbols."""
    w = NcPoly.word(w) if isinstance(w, str) else w
    return Relation("Fwm", mzv_symbols(F(w, m)), {"w": str(w), "m": m})


# -- sum formula ----------------------------------------------------------------------


def admissible_compositions(k: int, r: int) -> Iterator[tuple[int, ...]]:
    return (c for c in compositions(k, r) if c[-1] >= 2)


def sum_formula_word_identity(k: int, r: int) -> bool:
    """y^(r-1) inner-shuffle z_{k-r+1} equals the sum of all admissible z-words of weight k, depth r."""
    lhs = inner_shuffle(NcPoly.word(Y * (r - 1)), NcPoly.word(word_z(k - r + 1)))
    rhs = NcPoly.sum_of(index_to_word(c) for c in admissible_compositions(k, r))
    return lhs == rhs


def gen_sum_formula(k: int, r: int) -> Relation:
    """Sum of zeta over admissible indices of weight k and depth r, minus zeta(k)."""
    if not k > r >= 1:
        raise ValueError(f"the sum formula needs k > r >= 1, got k={k}, r={r}")
    expansion = inner_shuffle(NcPoly.word(Y * (r - 1)), NcPoly.word(word_z(k - r + 1)))
    if not sum_formula_word_identity(k, r):
        raise AssertionError(f"sum-formula word identity fails at k={k}, r={r}")
    terms = mzv_symbols(expansion)
    _add(terms, Symbol.mzv(k), -1)
    return Relation("SumFormula", terms, {"k": k, "r": r})


# -- numeric verification --------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    relation: Relation
    cutoff: int
    mode: str
    residual: Fraction | float
    tolerance: float
    passed: bool
    guarantee: str
    divergent: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        res = self.residual
        return {
            "family": self.relation.family,
            "provenance": dict(self.relation.provenance),
            "cutoff": self.cutoff,
            "mode": self.mode,
            "residual": format_fraction(res) if isinstance(res, Fraction) else repr(res),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "guarantee": self.guarantee,
            "divergent": list(self.divergent),
        }


def verify_numeric(rel: Relation, t: TruncationSpec | int, tol: float = 1e-2) -> VerificationReport:
    """Evaluate the combination at the cutoff and compare |residual| with ``tol``.

    For families that hold at every cutoff (``EXACT_AT_CUTOFF``) in exact
    mode, passing means the residual is exactly 0.
    """
    spec = t if isinstance(t, TruncationSpec) else TruncationSpec(int(t))
    exact_family = rel.family in EXACT_AT_CUTOFF
    guarantee = "exact-at-cutoff" if exact_family else "asymptotic"
    bad = tuple(s.text() for s, _ in rel.items() if not s.is_convergent())
    if bad:
        return VerificationReport(rel, spec.cutoff, spec.mode, float("nan"), tol, False, guarantee, bad)
    total: Fraction | float = Fraction(0) if spec.exact else 0.0
    terms = []
    for sym, c in rel.items():
        try:
            value = eval_symbol(sym, spec)
        except DivergentError:
            return VerificationReport(rel, spec.cutoff, spec.mode, float("nan"), tol, False, guarantee, (sym.text(),))
        terms.append(c * value if spec.exact else float(c) * value)
    if spec.exact:
        total = sum(terms, Fraction(0))
        passed = total == 0 if exact_family else abs(float(total)) < tol
    else:
        import math

        total = math.fsum(terms)
        passed = abs(total) < tol
    return VerificationReport(rel, spec.cutoff, spec.mode, total, tol, passed, guarantee)


# -- exact rank -----------------------------------------------------------------------------


@dataclass
class RelationMatrix:
    columns: list[Symbol]
    rows: list[list[Fraction]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([c.text() for c in self.columns])
        for row in self.rows:
            writer.writerow([format_fraction(v) for v in row])
        return buf.getvalue()


def relation_matrix(rels: Iterable[Relation], weight: int | None = None) -> RelationMatrix:
    rels = list(rels)
    for rel in rels:
        if rel.is_trivial():
            continue
        if weight is not None and rel.weight != weight:
            raise ValueError(f"relation of weight {rel.weight} in a weight-{weight} set")
    nontrivial = [r for r in rels if not r.is_trivial()]
    weights = {r.weight for r in nontrivial}
    if len(weights) > 1:
        raise ValueError(f"mixed weights {sorted(weights)}")
    columns = sorted({s for r in nontrivial for s in r.terms}, key=lambda s: s.text())
    nontrivial.sort(key=lambda r: json.dumps([[s.text(), format_fraction(c)] for s, c in r.items()]))
    rows = [[r.terms.get(c, Fraction(0)) for c in columns] for r in nontrivial]
    return RelationMatrix(columns, rows)


def row_reduce_rank(rows: list[list[Fraction]]) -> int:
    """Rank by exact Gaussian elimination, pivoting on the first nonzero column."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col]:
                f = rows[i][col] / p[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], p)]
        rank += 1
    return rank


def rank_over_Q(rels: Iterable[Relation], weight: int) -> int:
    return row_reduce_rank(relation_matrix(rels, weight).rows)


# -- enumeration of generator parameters -------------------------------------------------

CLI_FAMILIES = {
    "cyc1": "CYC1",
    "cyc2": "CYC2",
    "cyclic-sum": "CyclicSum",
    "derivation": "Derivation",
    "sum-formula": "SumFormula",
    "fwm": "Fwm",
}


def hC0_words(weight: int) -> list[str]:
    """Monomials of h_C^0 of the given weight: y ... x."""
    if weight < 2:
        return []
    from .algebra import words_of_length

    return [Y + mid + "x" for mid in words_of_length(weight - 2)]


def tensor_words(weight: int, max_s: int) -> list[tuple[str, ...]]:
    """All tensor words of h^cyc with the given total weight and at most max_s components."""
    out = []
    for s in range(1, max_s + 1):
        for parts in compositions(weight, s):
            if all(p == 1 for p in parts):
                continue
            choices = [[Y] if p == 1 else hC0_words(p) for p in parts]
            out.extend(_product(choices))
    return out


def _product(choices: list[list[str]]) -> Iterator[tuple[str, ...]]:
    from itertools import product

    return product(*choices)


def family_relations(family: str, weight: int, max_s: int = 3, max_k: int = 3) -> list[Relation]:
    """Every generated relation of the family whose symbols have the given weight, in a fixed order.

    Trivial (identically zero) relations are dropped.
    """
    fam = CLI_FAMILIES.get(family, family)
    rels: list[Relation] = []
    if fam == "CYC1":
        rels = [gen_cyc1(t) for t in tensor_words(weight - 1, max_s)]
    elif fam == "CYC2":
        for k in range(1, max_k + 1):
            rels.extend(gen_cyc2(t, k) for t in tensor_words(weight - k, max_s))
    elif fam == "CyclicSum":
        rels = [gen_cyclic_sum(ks) for s in range(1, weight) for ks in compositions(weight - 1, s) if sum(ks) > s]
    elif fam == "Derivation":
        for m in range(1, weight - 1):
            rels.extend(gen_derivation(w, m) for w in hC0_words(weight - m))
    elif fam == "Fwm":
        for m in range(0, weight - 2):
            rels.extend(gen_fwm(w, m) for w in hC0_words(weight - m - 1))
    elif fam == "SumFormula":
        rels = [gen_sum_formula(weight, r) for r in range(2, weight)]
    else:
        raise ValueError(f"unknown family {family!r}")
    return [r for r in rels if not r.is_trivial()]
