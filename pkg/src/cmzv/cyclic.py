"""Cyclic indices, tensors of words, and the symbol map from tensors to cyclic indices."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .algebra import Y, NcPoly, ShapeError, format_fraction, in_hC0, index_to_word, word_to_index

Index = tuple[int, ...]


def make_index(parts: Iterable[int]) -> Index:
    k = tuple(int(p) for p in parts)
    if not k or any(p < 1 for p in k):
        raise ValueError(f"an index is a nonempty tuple of positive integers, got {k}")
    return k


def is_admissible(k: Index) -> bool:
    return len(k) >= 1 and k[-1] >= 2


@dataclass(frozen=True)
class CyclicIndex:
    """A sequence of blocks [k_1, ..., k_s]; rotations are distinct symbols."""

    blocks: tuple[Index, ...]

    def __init__(self, blocks: Iterable[Iterable[int]]):
        bs = tuple(make_index(b) for b in blocks)
        if not bs:
            raise ValueError("a cyclic index needs at least one block")
        object.__setattr__(self, "blocks", bs)

    @property
    def s(self) -> int:
        return len(self.blocks)

    @property
    def weight(self) -> int:
        return sum(sum(b) for b in self.blocks)

    @property
    def depth(self) -> int:
        return sum(len(b) for b in self.blocks)

    def is_admissible(self) -> bool:
        return is_admissible_cyclic(self)

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"CyclicIndex({to_text(self)!r})"


def is_admissible_cyclic(k: CyclicIndex) -> bool:
    """Every block admissible or (1), and not all blocks (1)."""
    return all(is_admissible(b) or b == (1,) for b in k.blocks) and any(b != (1,) for b in k.blocks)


def rotate(k: CyclicIndex, by: int) -> CyclicIndex:
    """Rotate blocks left by ``by``: block ``by+1`` becomes first."""
    j = by % k.s
    return CyclicIndex(k.blocks[j:] + k.blocks[:j])


def concat_blocks(ks: Index, k1: Index) -> Index:
    return tuple(ks) + tuple(k1)


def wrapped(k: CyclicIndex) -> CyclicIndex:
    """[k_s k_1, k_2, ..., k_{s-1}]: the last block merged in front of the first."""
    if k.s < 2:
        raise ValueError("wrapping needs at least two blocks")
    return CyclicIndex((concat_blocks(k.blocks[-1], k.blocks[0]),) + k.blocks[1:-1])


# -- text / JSON forms -------------------------------------------------------

_TEXT_RE = re.compile(r"^\[\((\d+(?:,\d+)*)\)(?:,\((\d+(?:,\d+)*)\))*\]$")


def to_text(k: CyclicIndex) -> str:
    return "[" + ",".join("(" + ",".join(map(str, b)) + ")" for b in k.blocks) + "]"


def from_text(text: str) -> CyclicIndex:
    compact = re.sub(r"\s+", "", text)
    if not _TEXT_RE.match(compact):
        raise ValueError(f"cannot parse cyclic index {text!r}")
    return CyclicIndex(tuple(int(p) for p in b.split(",")) for b in re.findall(r"\(([\d,]+)\)", compact))


def to_json(k: CyclicIndex) -> str:
    return json.dumps({"blocks": [list(b) for b in k.blocks]}, separators=(", ", ": "))


def from_json(text: str | Mapping) -> CyclicIndex:
    data = json.loads(text) if isinstance(text, str) else text
    return CyclicIndex(data["blocks"])


# -- tensors ------------------------------------------------------------------

TensorWord = tuple[str, ...]


def _check_component(u: str) -> None:
    if u != Y and not in_hC0(NcPoly.word(u)):
        raise ShapeError(f"tensor component {u or '1'!r} is not in h_C^0 ∪ {{y}}")


def check_tensor_word(t: Sequence[str]) -> TensorWord:
    t = tuple(t)
    if not t:
        raise ShapeError("empty tensor")
    for u in t:
        _check_component(u)
    if all(u == Y for u in t):
        raise ShapeError("a tensor with every component y is not in h^cyc")
    return t


def tensor_to_cyclic_index(t: Sequence[str]) -> CyclicIndex:
    t = check_tensor_word(t)
    return CyclicIndex(word_to_index(u) for u in t)


def cyclic_index_to_tensor(k: CyclicIndex) -> TensorWord:
    return tuple(index_to_word(b) for b in k.blocks)


def tensor_weight(t: Sequence[str]) -> int:
    return sum(len(u) for u in t)


class TensorElem:
    """A Q-linear combination of tensor words in h^cyc."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Sequence[str], int | Fraction] | None = None):
        acc: dict[TensorWord, Fraction] = {}
        for t, c in (terms or {}).items():
            t = check_tensor_word(t)
            acc[t] = acc.get(t, Fraction(0)) + Fraction(c)
        self._terms = {t: c for t, c in acc.items() if c}

    @classmethod
    def of(cls, *components: str) -> TensorElem:
        return cls({tuple(components): 1})

    def items(self) -> Iterator[tuple[TensorWord, Fraction]]:
        for t in sorted(self._terms, key=lambda t: (len(t), tuple((len(u), u) for u in t))):
            yield t, self._terms[t]

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TensorElem) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: TensorElem) -> TensorElem:
        acc = dict(self._terms)
        for t, c in other._terms.items():
            acc[t] = acc.get(t, 0) + c
        return TensorElem(acc)

    def __neg__(self) -> TensorElem:
        return TensorElem({t: -c for t, c in self._terms.items()})

    def __sub__(self, other: TensorElem) -> TensorElem:
        return self + (-other)

    def scale(self, c: int | Fraction) -> TensorElem:
        return TensorElem({t: c * v for t, v in self._terms.items()})

    def symbols(self) -> dict[CyclicIndex, Fraction]:
        """Z_cyc at the symbol level: each tensor word becomes its cyclic index."""
        out: dict[CyclicIndex, Fraction] = {}
        for t, c in self._terms.items():
            k = tensor_to_cyclic_index(t)
            out[k] = out.get(k, 0) + c
        return {k: c for k, c in out.items() if c}

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{format_fraction(c)} " + "⊗".join(t) for t, c in self.items())

    def __repr__(self) -> str:
        return f"TensorElem({str(self)!r})"


def _splice(t: TensorElem, i: int, u: NcPoly, replace: bool) -> TensorElem:
    acc: dict[TensorWord, Fraction] = {}
    for tw, c in t._terms.items():
        if not 0 <= i <= len(tw) or (replace and not 1 <= i <= len(tw)):
            raise IndexError(f"position {i} out of range for a tensor of length {len(tw)}")
        for w, d in u.items():
            new = tw[: i - 1] + (w,) + tw[i:] if replace else tw[:i] + (w,) + tw[i:]
            _check_component(w)
            acc[new] = acc.get(new, 0) + c * d
    return TensorElem(acc)


def insert_block(t: TensorElem, i: int, u: NcPoly) -> TensorElem:
    """Insert ``u`` after component ``i`` (``i = 0`` prepends), linearly in ``u``."""
    return _splice(t, i, u, replace=False)


def replace_block(t: TensorElem, i: int, u: NcPoly) -> TensorElem:
    """Replace component ``i`` (1-based) by ``u``, linearly in ``u``."""
    return _splice(t, i, u, replace=True)


# -- value symbols -------------------------------------------------------------

SYMBOL_KINDS = ("cyc", "mzv", "mzsv")
_KIND_WORDS = {"cyc": "cyc", "mzv": "zeta", "mzsv": "zetastar"}
_WORD_KINDS = {v: k for k, v in _KIND_WORDS.items()}


@dataclass(frozen=True, order=False)
class Symbol:
    """A CMZV, MZV or MZSV symbol, e.g. ``cyc [(2),(1)]`` or ``zeta 1,2``."""

    kind: str
    index: CyclicIndex | Index

    def __post_init__(self):
        if self.kind not in SYMBOL_KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind == "cyc":
            if not isinstance(self.index, CyclicIndex):
                object.__setattr__(self, "index", CyclicIndex(self.index))
        else:
            object.__setattr__(self, "index", make_index(self.index))

    @classmethod
    def cyc(cls, blocks) -> Symbol:
        return cls("cyc", blocks if isinstance(blocks, CyclicIndex) else CyclicIndex(blocks))

    @classmethod
    def mzv(cls, *index: int) -> Symbol:
        return cls("mzv", index)

    @classmethod
    def mzsv(cls, *index: int) -> Symbol:
        return cls("mzsv", index)

    @property
    def weight(self) -> int:
        return self.index.weight if self.kind == "cyc" else sum(self.index)

    def is_convergent(self) -> bool:
        if self.kind == "cyc":
            return is_admissible_cyclic(self.index)
        return is_admissible(self.index)

    def text(self) -> str:
        if self.kind == "cyc":
            return f"cyc {to_text(self.index)}"
        return f"{_KIND_WORDS[self.kind]} {','.join(map(str, self.index))}"

    def to_dict(self) -> dict:
        if self.kind == "cyc":
            return {"kind": "cyc", "index": [list(b) for b in self.index.blocks]}
        return {"kind": self.kind, "index": list(self.index)}

    @classmethod
    def from_dict(cls, data: Mapping) -> Symbol:
        return cls(data["kind"], data["index"])

    @classmethod
    def parse(cls, text: str) -> Symbol:
        """Parse ``"zeta 1,2"``, ``"zetastar 1,2"`` or ``"cyc [(2),(1)]"``."""
        head, _, rest = text.strip().partition(" ")
        kind = _WORD_KINDS.get(head)
        if kind is None or not rest.strip():
            raise ValueError(f"cannot parse symbol {text!r}")
        if kind == "cyc":
            return cls("cyc", from_text(rest))
        rest = re.sub(r"\s+", "", rest).strip("()")
        if not re.fullmatch(r"\d+(,\d+)*", rest):
            raise ValueError(f"cannot parse index {rest!r}")
        return cls(kind, tuple(int(p) for p in rest.split(",")))

    def __str__(self) -> str:
        return self.text()
