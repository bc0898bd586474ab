"""Bracket structure on indecomposable classes in the degenerate product.

Setting T = 1 in the interpolated polynomials turns the counting product into
integer structure constants; the commutator of two indecomposable classes is
again a combination of indecomposable classes (decomposable contributions
cancel pairwise, and this cancellation is asserted on every computed pair).
The closed-form bracket table is encoded in expected_bracket and compared
entrywise when a table is built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InternalInvariantError, InterpolationError
from .gf import first_primes
from .hall_core import DEFAULT_DIM_CEILING
from .hall_poly import interpolate_hall_poly
from .quiver_rep import (
    IndecLabel,
    all_labels,
    check_label,
    label_dims,
    multiset_to_str,
    multisets_with_dims,
)

# the interval family W(i,j) needs j <= n-1, so closed-form ranges written
# up to n are clipped to that bound when instantiated
RANGE_NOTE = "interval labels stop at n-1; ranges touching n are clipped"


@dataclass(frozen=True)
class LabelCombo:
    """Integer combination of indecomposable labels, sorted and zero-free."""

    terms: tuple[tuple[IndecLabel, int], ...]

    @classmethod
    def from_dict(cls, data: dict[IndecLabel, int]) -> "LabelCombo":
        items = [(lab, c) for lab, c in data.items() if c != 0]
        items.sort(key=lambda item: item[0].sort_key())
        return cls(tuple(items))

    def as_dict(self) -> dict[IndecLabel, int]:
        return dict(self.terms)

    def coefficient(self, label: IndecLabel) -> int:
        for lab, c in self.terms:
            if lab == label:
                return c
        return 0

    def is_zero(self) -> bool:
        return not self.terms

    def __neg__(self) -> "LabelCombo":
        return LabelCombo(tuple((lab, -c) for lab, c in self.terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for lab, c in self.terms:
            body = str(lab) if abs(c) == 1 else f"{abs(c)}*{lab}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


ZERO_COMBO = LabelCombo(())


def bracket(
    x: IndecLabel,
    y: IndecLabel,
    n: int,
    primes: Sequence[int] | None = None,
    *,
    dim_ceiling: int | None = None,
) -> LabelCombo:
    """Commutator of two indecomposable classes at T = 1.

    Interpolates both products over all candidate composites with the forced
    dimension vector; a prime list that turns out too short for some composite
    is retried with one sized to its dimension.  Any nonzero coefficient on a
    decomposable composite is a fatal invariant breach, not a result.
    """
    check_label(x, n)
    check_label(y, n)
    if x == y:
        return ZERO_COMBO
    plist = list(primes) if primes is not None else first_primes(6)
    dims = tuple(a + b for a, b in zip(label_dims(x, n), label_dims(y, n)))
    ceiling = dim_ceiling if dim_ceiling is not None else max(sum(dims), DEFAULT_DIM_CEILING)
    out: dict[IndecLabel, int] = {}
    for ms in multisets_with_dims(n, dims):
        try:
            pxy = interpolate_hall_poly(x, y, ms, n, plist, dim_ceiling=ceiling)
            pyx = interpolate_hall_poly(y, x, ms, n, plist, dim_ceiling=ceiling)
        except InterpolationError:
            retry = first_primes(sum(dims) + 2)
            pxy = interpolate_hall_poly(x, y, ms, n, retry, dim_ceiling=ceiling)
            pyx = interpolate_hall_poly(y, x, ms, n, retry, dim_ceiling=ceiling)
        c = pxy.evaluate(1) - pyx.evaluate(1)
        if len(ms) != 1:
            if c != 0:
                raise InternalInvariantError(
                    f"decomposable class {multiset_to_str(ms)} carries "
                    f"coefficient {c} in the bracket of {x} and {y}"
                )
        elif c:
            out[ms[0]] = c
    return LabelCombo.from_dict(out)


def _expected_direct(x: IndecLabel, y: IndecLabel) -> LabelCombo | None:
    if x.kind == "W":
        i, j = x.i, x.j
        out: dict[IndecLabel, int] = {}
        if y.kind == "W":
            l, m = y.i, y.j
            if j + 1 == l:
                out[IndecLabel("W", i, m)] = out.get(IndecLabel("W", i, m), 0) + 1
            if m + 1 == i:
                out[IndecLabel("W", l, j)] = out.get(IndecLabel("W", l, j), 0) - 1
            return LabelCombo.from_dict(out)
        if y.kind == "V":
            if y.i == j + 1:
                out[IndecLabel("V", i)] = 1
            return LabelCombo.from_dict(out)
        if y.kind == "U":
            l, m = y.i, y.j
            if j + 1 == m:
                out[IndecLabel("U", l, i)] = out.get(IndecLabel("U", l, i), 0) + 1
            if j + 1 == l:
                out[IndecLabel("U", i, m)] = out.get(IndecLabel("U", i, m), 0) + 1
            return LabelCombo.from_dict(out)
    if x.kind == "V" and y.kind == "V":
        out = {}
        key = IndecLabel("U", y.i, x.i)
        out[key] = out.get(key, 0) + 1
        key = IndecLabel("U", x.i, y.i)
        out[key] = out.get(key, 0) - 1
        return LabelCombo.from_dict(out)
    return None


def expected_bracket(x: IndecLabel, y: IndecLabel, n: int) -> LabelCombo:
    """Closed-form bracket: four delta-function families, zero elsewhere.

    Pairs listed in the opposite order come out by negation, which is the
    antisymmetry convention rather than a separate formula.
    """
    check_label(x, n)
    check_label(y, n)
    direct = _expected_direct(x, y)
    if direct is not None:
        return direct
    swapped = _expected_direct(y, x)
    if swapped is not None:
        return -swapped
    return ZERO_COMBO


@dataclass(frozen=True)
class BracketTable:
    """All brackets at one n, stored once per unordered pair (x before y)."""

    n: int
    primes: tuple[int, ...]
    entries: tuple[tuple[IndecLabel, IndecLabel, LabelCombo], ...]
    mismatches: tuple[tuple[IndecLabel, IndecLabel, LabelCombo, LabelCombo], ...]
    notes: tuple[str, ...]
    _index: dict = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        for x, y, combo in self.entries:
            self._index[(x, y)] = combo

    def get(self, x: IndecLabel, y: IndecLabel) -> LabelCombo:
        if x == y:
            return ZERO_COMBO
        combo = self._index.get((x, y))
        if combo is not None:
            return combo
        combo = self._index.get((y, x))
        if combo is not None:
            return -combo
        raise KeyError(f"pair ({x}, {y}) not in the table")


def build_bracket_table(
    n: int,
    primes: Sequence[int] | None = None,
    *,
    dim_ceiling: int | None = None,
) -> BracketTable:
    """Bracket every unordered pair and compare against the closed forms."""
    if n < 2:
        raise ValueError("need n >= 2")
    plist = list(primes) if primes is not None else first_primes(6)
    labels = all_labels(n)
    entries = []
    mismatches = []
    for idx, x in enumerate(labels):
        for y in labels[idx + 1 :]:
            got = bracket(x, y, n, plist, dim_ceiling=dim_ceiling)
            exp = expected_bracket(x, y, n)
            entries.append((x, y, got))
            if got != exp:
                mismatches.append((x, y, got, exp))
    return BracketTable(
        n, tuple(plist), tuple(entries), tuple(mismatches), (RANGE_NOTE,)
    )


@dataclass(frozen=True)
class LieAxiomReport:
    """Axiom check outcome over a full table."""

    n: int
    diagonal_ok: bool
    antisymmetry_ok: bool
    jacobi_ok: bool
    grading_ok: bool
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (
            self.diagonal_ok
            and self.antisymmetry_ok
            and self.jacobi_ok
            and self.grading_ok
        )


def _bracket_into(table: BracketTable, x: IndecLabel, combo: dict[IndecLabel, int], acc: dict[IndecLabel, int], sign: int) -> None:
    for lab, c in combo.items():
        for lab2, c2 in table.get(x, lab).terms:
            acc[lab2] = acc.get(lab2, 0) + sign * c * c2


def verify_lie_axioms(table: BracketTable) -> LieAxiomReport:
    """Antisymmetry, Jacobi, zero diagonal, and grading, all over the table.

    Nested brackets expand through table lookups with integer linearity, so
    the Jacobi check is exact.
    """
    labels = all_labels(table.n)
    violations: list[str] = []
    diagonal_ok = True
    for x in labels:
        if not table.get(x, x).is_zero():
            diagonal_ok = False
            violations.append(f"nonzero diagonal at {x}")
    antisymmetry_ok = True
    for x in labels:
        for y in labels:
            if table.get(x, y) != -table.get(y, x):
                antisymmetry_ok = False
                violations.append(f"antisymmetry fails on ({x}, {y})")
    grading_ok = True
    for x, y, combo in table.entries:
        want = tuple(
            a + b for a, b in zip(label_dims(x, table.n), label_dims(y, table.n))
        )
        for lab, _ in combo.terms:
            if label_dims(lab, table.n) != want:
                grading_ok = False
                violations.append(f"entry ({x}, {y}) term {lab} off the grading")
    jacobi_ok = True
    for ix, x in enumerate(labels):
        for iy in range(ix + 1, len(labels)):
            y = labels[iy]
            for iz in range(iy + 1, len(labels)):
                z = labels[iz]
                acc: dict[IndecLabel, int] = {}
                _bracket_into(table, x, table.get(y, z).as_dict(), acc, 1)
                _bracket_into(table, y, table.get(z, x).as_dict(), acc, 1)
                _bracket_into(table, z, table.get(x, y).as_dict(), acc, 1)
                if any(c != 0 for c in acc.values()):
                    jacobi_ok = False
                    violations.append(f"Jacobi fails on ({x}, {y}, {z})")
    return LieAxiomReport(
        table.n, diagonal_ok, antisymmetry_ok, jacobi_ok, grading_ok, tuple(violations)
    )


def bracket_table_to_tsv(table: BracketTable) -> str:
    lines = [f"# n: {table.n}", f"# primes: {','.join(str(p) for p in table.primes)}"]
    lines.extend(f"# note: {note}" for note in table.notes)
    lines.append("x\ty\tbracket")
    for x, y, combo in table.entries:
        fields = [str(x), str(y)]
        fields.extend(f"{lab}:{c}" for lab, c in combo.terms)
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def bracket_table_to_json(table: BracketTable) -> str:
    payload = {
        "n": table.n,
        "primes": list(table.primes),
        "notes": list(table.notes),
        "entries": [
            {
                "x": str(x),
                "y": str(y),
                "bracket": [[str(lab), c] for lab, c in combo.terms],
            }
            for x, y, combo in table.entries
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _label_latex(label: IndecLabel) -> str:
    if label.kind == "V":
        return f"V_{{{label.i}}}"
    return f"{label.kind}_{{{label.i},{label.j}}}"


def _combo_latex(combo: LabelCombo) -> str:
    if combo.is_zero():
        return "0"
    parts: list[str] = []
    for lab, c in combo.terms:
        body = _label_latex(lab) if abs(c) == 1 else f"{abs(c)}{_label_latex(lab)}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def bracket_table_to_latex(table: BracketTable) -> str:
    lines = [
        "\\begin{tabular}{lll}",
        "x & y & [x,y] \\\\",
        "\\hline",
    ]
    for x, y, combo in table.entries:
        lines.append(f"{_label_latex(x)} & {_label_latex(y)} & {_combo_latex(combo)} \\\\")
    lines.append("\\end{tabular}")
    return "\n".join(lines) + "\n"
