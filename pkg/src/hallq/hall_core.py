"""Hall numbers by exhaustive submodule enumeration, Hall products in the
isoclass basis, and product-expansion identity checks.

The public enumeration walks vertices 1..n depth first, growing each vertex
space over the image of the previous one. The counting engine used by
hall_number adds three layers on top: a hom-count prune that rejects
impossible (quotient, sub, total) triples before any enumeration, per-vertex
rank screens that cut subtrees whose partial witness already disagrees with
the required summands, and a profile shortcut that accepts leaves without
classification whenever the rank profile pins the isomorphism class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import CeilingError, HypothesisError
from .gf import SubspaceBasis, echelon_supersets, matrix_rank, row_reduce
from .hom_decomp import DecompositionMultiset, hom_dim_raw, hom_table
from .quiver_rep import (
    AlgebraContext,
    IndecLabel,
    Representation,
    SubmoduleWitness,
    all_labels,
    check_label,
    check_relation,
    label_dims,
    make_indec,
    multiset_dims,
    multiset_to_str,
    multisets_with_dims,
    rep_of_multiset,
)

DEFAULT_DIM_CEILING = 12

LabelSet = IndecLabel | DecompositionMultiset | Iterable[IndecLabel]


def as_multiset(obj: LabelSet, n: int) -> tuple[IndecLabel, ...]:
    """Normalize a label, multiset object, or label iterable to sorted form."""
    if isinstance(obj, IndecLabel):
        labels: tuple[IndecLabel, ...] = (obj,)
    elif isinstance(obj, DecompositionMultiset):
        labels = obj.as_labels()
    else:
        labels = tuple(obj)
    for l in labels:
        if not isinstance(l, IndecLabel):
            raise TypeError(f"expected IndecLabel entries, got {l!r}")
        check_label(l, n)
    return tuple(sorted(labels, key=IndecLabel.sort_key))


def enumerate_submodules(m: Representation) -> Iterator[SubmoduleWitness]:
    """Yield every submodule of m exactly once.

    Depth first over vertices 1..n: vertex 1 ranges over all subspaces, each
    later vertex over subspaces containing the arrow image of the previous
    choice, and the last vertex keeps only loop-invariant spaces.
    """
    if not check_relation(m):
        raise ValueError("enumerate_submodules needs a valid representation")
    n, p = m.ctx.n, m.ctx.p
    loop = m.loop.entries
    chosen: list[SubspaceBasis] = [SubspaceBasis.zero(p, d) for d in m.dims]

    def rec(v: int, lower: SubspaceBasis) -> Iterator[SubmoduleWitness]:
        free = m.dims[v] - lower.dim
        for r in range(free + 1):
            for rows, pivots in echelon_supersets(
                m.dims[v], p, lower.row_basis, lower.pivots, r
            ):
                space = SubspaceBasis(p, m.dims[v], rows, pivots)
                if v == n - 1:
                    stable = all(
                        space.contains_vector(
                            [sum(a * b for a, b in zip(row, vec)) % p for row in loop]
                        )
                        for vec in rows
                    )
                    if not stable:
                        continue
                    chosen[v] = space
                    yield SubmoduleWitness(m, tuple(chosen))
                else:
                    chosen[v] = space
                    arr = m.arrow[v].entries
                    imgs = [
                        [sum(a * b for a, b in zip(row, vec)) % p for row in arr]
                        for vec in rows
                    ]
                    red, _, red_pivs = row_reduce(imgs, p, ncols=m.dims[v + 1])
                    yield from rec(v + 1, SubspaceBasis(p, m.dims[v + 1], red, red_pivs))

    yield from rec(0, SubspaceBasis.zero(p, m.dims[0]))


# --- cached per-(n, p) structural data -------------------------------------


def _identity_entries(d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def _raw_mul(
    a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], bcols: int, p: int
) -> tuple[tuple[int, ...], ...]:
    # like gf.mat_mul but keeps row width bcols even when b has no rows
    if not a:
        return ()
    if not b:
        return tuple((0,) * bcols for _ in a)
    bt = list(zip(*b))
    if not bt:
        return tuple((0,) * bcols for _ in a)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) for row in a
    )


def _raw_rep(ms: tuple[IndecLabel, ...], ctx: AlgebraContext):
    rep = rep_of_multiset(ms, ctx)
    return rep.dims, tuple(a.entries for a in rep.arrow), rep.loop.entries


@lru_cache(maxsize=None)
def _probe_rep(n: int, p: int, label: IndecLabel):
    return _raw_rep((label,), AlgebraContext(n, p))


@lru_cache(maxsize=None)
def _label_stats(n: int, p: int, label: IndecLabel):
    dims, arrows, loop = _probe_rep(n, p, label)
    comp = _composites(dims, arrows, loop, p)
    fwd = tuple(
        tuple(matrix_rank(comp.path[v][w], p) for w in range(v + 1, n))
        for v in range(n)
    )
    loopfwd = tuple(matrix_rank(comp.loop_path[v], p) for v in range(n))
    return dims, fwd, loopfwd


@lru_cache(maxsize=None)
def _multiset_stats(n: int, p: int, ms: tuple[IndecLabel, ...]):
    dims = [0] * n
    fwd = [[0] * (n - 1 - v) for v in range(n)]
    loopfwd = [0] * n
    for label in ms:
        d, f, lf = _label_stats(n, p, label)
        for v in range(n):
            dims[v] += d[v]
            loopfwd[v] += lf[v]
            for t in range(n - 1 - v):
                fwd[v][t] += f[v][t]
    return tuple(dims), tuple(tuple(row) for row in fwd), tuple(loopfwd)


@lru_cache(maxsize=None)
def _target_profile(n: int, p: int, ms: tuple[IndecLabel, ...]) -> tuple[int, ...]:
    # hom_dim(L, ms) over all labels L, additive over summands
    table = hom_table(n, p)
    return tuple(sum(table[(l, y)] for y in ms) for l in all_labels(n))


@lru_cache(maxsize=None)
def _source_profile(n: int, p: int, ms: tuple[IndecLabel, ...]) -> tuple[int, ...]:
    table = hom_table(n, p)
    return tuple(sum(table[(y, l)] for y in ms) for l in all_labels(n))


@dataclass(frozen=True)
class _Composites:
    path: tuple  # path[v][w] = composite matrix vertex v -> w, w >= v
    loop_path: tuple  # loop_path[v] = loop . path[v][n-1]


def _composites(dims, arrows, loop, p: int) -> _Composites:
    n = len(dims)
    path = [[None] * n for _ in range(n)]
    for v in range(n):
        path[v][v] = _identity_entries(dims[v])
        for w in range(v + 1, n):
            path[v][w] = _raw_mul(arrows[w - 1], path[v][w - 1], dims[v], p)
    loop_path = tuple(_raw_mul(loop, path[v][n - 1], dims[v], p) for v in range(n))
    return _Composites(tuple(tuple(r) for r in path), loop_path)


def _colspace(mat, nrows: int, ncols: int, p: int):
    # row basis of the column space, with pivots, as (rows, pivots, rank)
    cols = [tuple(mat[r][c] for r in range(nrows)) for c in range(ncols)]
    rows, rank, pivots = row_reduce(cols, p, ncols=nrows)
    return rows, pivots, rank


@dataclass(frozen=True)
class _ModuleData:
    dims: tuple[int, ...]
    arrows: tuple
    loop: tuple
    path: tuple
    loop_path: tuple
    col: tuple  # col[u][v] = (rows, pivots, rank) of im(path u -> v), u < v
    loop_col: tuple  # loop_col[u] over all u


@lru_cache(maxsize=256)
def _module_data(n: int, p: int, ms: tuple[IndecLabel, ...]) -> _ModuleData:
    dims, arrows, loop = _raw_rep(ms, AlgebraContext(n, p))
    comp = _composites(dims, arrows, loop, p)
    col = tuple(
        tuple(
            _colspace(comp.path[u][v], dims[v], dims[u], p) if u < v else None
            for v in range(n)
        )
        for u in range(n)
    )
    loop_col = tuple(
        _colspace(comp.loop_path[u], dims[n - 1], dims[u], p) for u in range(n)
    )
    return _ModuleData(dims, arrows, loop, comp.path, comp.loop_path, col, loop_col)


@dataclass(frozen=True)
class _SideSpec:
    ms: tuple[IndecLabel, ...]
    dims: tuple[int, ...]
    fwd: tuple
    loopfwd: tuple
    auto: bool  # rank profile alone pins the class among equal-dims multisets
    discriminators: tuple  # ((probe_raw, expected_hom), ...) when not auto


@lru_cache(maxsize=None)
def _side_spec(n: int, p: int, ms: tuple[IndecLabel, ...]) -> _SideSpec:
    dims, fwd, loopfwd = _multiset_stats(n, p, ms)
    rivals = [
        alt
        for alt in multisets_with_dims(n, dims)
        if alt != ms and _multiset_stats(n, p, alt) == (dims, fwd, loopfwd)
    ]
    if not rivals:
        return _SideSpec(ms, dims, fwd, loopfwd, True, ())
    table = hom_table(n, p)
    labels = all_labels(n)
    discs: dict[IndecLabel, int] = {}
    for alt in rivals:
        probe = next(
            (
                l
                for l in labels
                if l.kind == "U"
                and sum(table[(l, y)] for y in ms) != sum(table[(l, y)] for y in alt)
            ),
            None,
        )
        if probe is None:
            # cannot happen: the hom-count matrix separates isoclasses
            raise AssertionError(f"no separating hom count for {ms} vs {alt}")
        discs[probe] = sum(table[(probe, y)] for y in ms)
    pack = tuple((_probe_rep(n, p, l), exp) for l, exp in sorted(discs.items(), key=lambda kv: kv[0].sort_key()))
    return _SideSpec(ms, dims, fwd, loopfwd, False, pack)


# --- the counting engine ----------------------------------------------------


def _count_witnesses(n: int, p: int, md: _ModuleData, yspec: _SideSpec, xspec: _SideSpec) -> int:
    dims_m = md.dims
    ky = yspec.dims
    count = 0
    chosen_rows: list = [None] * n
    chosen_pivs: list = [None] * n

    def in_span(vec, rows, pivs) -> bool:
        v = list(vec)
        for row, piv in zip(rows, pivs):
            f = v[piv]
            if f:
                for j2 in range(piv, len(v)):
                    v[j2] = (v[j2] - f * row[j2]) % p
        return not any(v)

    def image_rank(mat, rows) -> int:
        imgs = [
            tuple(sum(a * b for a, b in zip(mrow, vec)) % p for mrow in mat)
            for vec in rows
        ]
        return matrix_rank(imgs, p)

    def extra_rank_over(rows0, pivs0, rows) -> int:
        # rank of rows modulo the space spanned by the echelon rows0
        acc: list = []
        acc_piv: list = []
        added = 0
        for vec in rows:
            v = list(vec)
            for row, piv in zip(rows0, pivs0):
                f = v[piv]
                if f:
                    for j2 in range(piv, len(v)):
                        v[j2] = (v[j2] - f * row[j2]) % p
            for row, piv in zip(acc, acc_piv):
                f = v[piv]
                if f:
                    for j2 in range(piv, len(v)):
                        v[j2] = (v[j2] - f * row[j2]) % p
            piv = next((j2 for j2, x in enumerate(v) if x), None)
            if piv is not None:
                inv = pow(v[piv], p - 2, p) if v[piv] != 1 else 1
                if inv != 1:
                    v = [x * inv % p for x in v]
                acc.append(v)
                acc_piv.append(piv)
                added += 1
        return added

    def screens_ok(v: int, rows) -> bool:
        # sub-side ranks anchored at v (depend only on this choice)
        if image_rank(md.loop_path[v], rows) != yspec.loopfwd[v]:
            return False
        exp = yspec.fwd[v]
        for t in range(n - 2 - v, -1, -1):
            if image_rank(md.path[v][v + 1 + t], rows) != exp[t]:
                return False
        # quotient-side ranks into v
        kv = len(rows)
        for u in range(v):
            rows0, pivs0, r0 = md.col[u][v]
            want = xspec.fwd[u][v - u - 1] + kv
            if r0 + extra_rank_over(rows0, pivs0, rows) != want:
                return False
        if v == n - 1:
            for u in range(n):
                rows0, pivs0, r0 = md.loop_col[u]
                want = xspec.loopfwd[u] + kv
                if r0 + extra_rank_over(rows0, pivs0, rows) != want:
                    return False
        return True

    def sub_matrices():
        arrows = []
        for v in range(n - 1):
            cols = []
            for vec in chosen_rows[v]:
                img = [
                    sum(a * b for a, b in zip(mrow, vec)) % p for mrow in md.arrows[v]
                ]
                cols.append(tuple(img[piv] for piv in chosen_pivs[v + 1]))
            arrows.append(
                tuple(zip(*cols)) if cols else tuple(() for _ in range(ky[v + 1]))
            )
        cols = []
        for vec in chosen_rows[n - 1]:
            img = [sum(a * b for a, b in zip(mrow, vec)) % p for mrow in md.loop]
            cols.append(tuple(img[piv] for piv in chosen_pivs[n - 1]))
        loop = tuple(zip(*cols)) if cols else tuple(() for _ in range(ky[n - 1]))
        return tuple(arrows), loop

    def quot_matrices():
        compl = [
            [c for c in range(dims_m[v]) if c not in set(chosen_pivs[v])]
            for v in range(n)
        ]

        def induced(mat, v_src, v_tgt):
            cols = []
            t_rows = chosen_rows[v_tgt]
            t_pivs = chosen_pivs[v_tgt]
            for c in compl[v_src]:
                img = [mrow[c] for mrow in mat]
                for row, piv in zip(t_rows, t_pivs):
                    f = img[piv]
                    if f:
                        for j2 in range(piv, len(img)):
                            img[j2] = (img[j2] - f * row[j2]) % p
                cols.append(tuple(img[c2] for c2 in compl[v_tgt]))
            return (
                tuple(zip(*cols))
                if cols
                else tuple(() for _ in range(len(compl[v_tgt])))
            )

        dims_q = tuple(len(compl[v]) for v in range(n))
        arrows = tuple(induced(md.arrows[v], v, v + 1) for v in range(n - 1))
        loop = induced(md.loop, n - 1, n - 1)
        return dims_q, arrows, loop

    def leaf_ok() -> bool:
        if not yspec.auto:
            arrows_s, loop_s = sub_matrices()
            for (pd, pa, pl), expect in yspec.discriminators:
                if hom_dim_raw(n, p, pd, pa, pl, ky, arrows_s, loop_s) != expect:
                    return False
        if not xspec.auto:
            dims_q, arrows_q, loop_q = quot_matrices()
            for (pd, pa, pl), expect in xspec.discriminators:
                if hom_dim_raw(n, p, pd, pa, pl, dims_q, arrows_q, loop_q) != expect:
                    return False
        return True

    def rec(v: int, lower_rows, lower_pivs) -> None:
        nonlocal count
        r = ky[v] - len(lower_rows)
        if r < 0:
            return
        last = v == n - 1
        for rows, pivs in echelon_supersets(dims_m[v], p, lower_rows, lower_pivs, r):
            if last and any(
                not in_span(
                    [sum(a * b for a, b in zip(mrow, vec)) % p for mrow in md.loop],
                    rows,
                    pivs,
                )
                for vec in rows
            ):
                continue
            if not screens_ok(v, rows):
                continue
            chosen_rows[v] = rows
            chosen_pivs[v] = pivs
            if last:
                if leaf_ok():
                    count += 1
            else:
                imgs = [
                    [sum(a * b for a, b in zip(mrow, vec)) % p for mrow in md.arrows[v]]
                    for vec in rows
                ]
                red, _, red_pivs = row_reduce(imgs, p, ncols=dims_m[v + 1])
                rec(v + 1, red, red_pivs)

    rec(0, (), ())
    return count


def hall_number(
    x: LabelSet,
    y: LabelSet,
    m: LabelSet,
    ctx: AlgebraContext,
    dim_ceiling: int = DEFAULT_DIM_CEILING,
) -> int:
    """Number of submodules of M isomorphic to y with quotient isomorphic
    to x, counted over F_p by filtered exhaustive enumeration."""
    n, p = ctx.n, ctx.p
    xs = as_multiset(x, n)
    ys = as_multiset(y, n)
    ms = as_multiset(m, n)
    dm = multiset_dims(ms, n)
    total = sum(dm)
    if total > dim_ceiling:
        raise CeilingError(
            f"total dimension {total} of the ambient module exceeds the ceiling "
            f"{dim_ceiling}; raise dim_ceiling to allow this enumeration"
        )
    dx = multiset_dims(xs, n)
    dy = multiset_dims(ys, n)
    if tuple(a + b for a, b in zip(dx, dy)) != dm:
        return 0
    if not ys:
        return int(xs == ms)
    if not xs:
        return int(ys == ms)
    ty, tm, tx = (
        _target_profile(n, p, ys),
        _target_profile(n, p, ms),
        _target_profile(n, p, xs),
    )
    sy, sm, sx = (
        _source_profile(n, p, ys),
        _source_profile(n, p, ms),
        _source_profile(n, p, xs),
    )
    for i in range(len(tm)):
        if ty[i] > tm[i] or sx[i] > sm[i]:
            return 0
        if tm[i] > tx[i] + ty[i] or sm[i] > sx[i] + sy[i]:
            return 0
    return _count_witnesses(
        n, p, _module_data(n, p, ms), _side_spec(n, p, ys), _side_spec(n, p, xs)
    )


@dataclass(frozen=True)
class IsoClassCombo:
    """Integer combination of isoclasses, the value of a Hall product."""

    terms: tuple[tuple[DecompositionMultiset, int], ...]

    @classmethod
    def from_dict(cls, d: dict[DecompositionMultiset, int]) -> IsoClassCombo:
        kept = [(ms, c) for ms, c in d.items() if c]
        kept.sort(key=lambda mc: tuple(t for l, m in mc[0].items for t in (*l.sort_key(), m)))
        return cls(tuple(kept))

    def coefficient(self, ms: DecompositionMultiset) -> int:
        for k, c in self.terms:
            if k == ms:
                return c
        return 0

    def as_dict(self) -> dict[DecompositionMultiset, int]:
        return dict(self.terms)

    def __len__(self) -> int:
        return len(self.terms)


def hall_product(
    n1: LabelSet,
    n2: LabelSet,
    ctx: AlgebraContext,
    dim_ceiling: int = DEFAULT_DIM_CEILING,
) -> IsoClassCombo:
    """[n1] . [n2] = sum over M of F^M_{n1,n2} [M], with M ranging over all
    label multisets whose dimension vector is dims(n1) + dims(n2)."""
    n = ctx.n
    a = as_multiset(n1, n)
    b = as_multiset(n2, n)
    dims = tuple(
        x + y for x, y in zip(multiset_dims(a, n), multiset_dims(b, n))
    )
    if sum(dims) > dim_ceiling:
        raise CeilingError(
            f"product dimension {sum(dims)} exceeds the ceiling {dim_ceiling}"
        )
    out: dict[DecompositionMultiset, int] = {}
    for m in multisets_with_dims(n, dims):
        coeff = hall_number(a, b, m, ctx, dim_ceiling=dim_ceiling)
        if coeff:
            out[DecompositionMultiset.from_labels(m)] = coeff
    return IsoClassCombo.from_dict(out)


@dataclass(frozen=True)
class ExpansionCheck:
    holds: bool
    lhs: int
    rhs: Fraction


def verify_hall_identity(
    x: LabelSet,
    terms: Sequence[tuple[int | Fraction, LabelSet, LabelSet]],
    y: LabelSet,
    m: LabelSet,
    ctx: AlgebraContext,
    dim_ceiling: int = DEFAULT_DIM_CEILING,
) -> ExpansionCheck:
    """Check F^M_{X,Y} = sum_k c_k sum_Z F^M_{L_k,Z} F^Z_{R_k,Y} given that
    [X] = sum_k c_k [L_k] . [R_k] holds in the Hall algebra at this prime.

    A failure of the hypothesis raises HypothesisError; the conclusion is
    reported in the returned value. A term's right factor may be the empty
    multiset (the unit), for which the inner sum collapses to F^M_{L_k,Y}.
    """
    n = ctx.n
    xs = as_multiset(x, n)
    ys = as_multiset(y, n)
    ms = as_multiset(m, n)
    norm = [
        (Fraction(c), as_multiset(left, n), as_multiset(right, n))
        for c, left, right in terms
    ]
    combo: dict[DecompositionMultiset, Fraction] = {}
    for c, left, right in norm:
        if c == 0:
            continue
        prod = hall_product(left, right, ctx, dim_ceiling=dim_ceiling)
        for key, coeff in prod.terms:
            combo[key] = combo.get(key, Fraction(0)) + c * coeff
    combo = {k: v for k, v in combo.items() if v}
    want = {DecompositionMultiset.from_labels(xs): Fraction(1)}
    if combo != want:
        raise HypothesisError(
            f"[{multiset_to_str(xs)}] does not equal the stated combination "
            f"of products at p={ctx.p}"
        )
    lhs = hall_number(xs, ys, ms, ctx, dim_ceiling=dim_ceiling)
    dm = multiset_dims(ms, n)
    rhs = Fraction(0)
    for c, left, right in norm:
        if c == 0:
            continue
        dl = multiset_dims(left, n)
        z_dims = tuple(a - b for a, b in zip(dm, dl))
        if any(d < 0 for d in z_dims):
            continue
        for z in multisets_with_dims(n, z_dims):
            f1 = hall_number(left, z, ms, ctx, dim_ceiling=dim_ceiling)
            if not f1:
                continue
            f2 = hall_number(right, ys, z, ctx, dim_ceiling=dim_ceiling)
            if f2:
                rhs += c * f1 * f2
    return ExpansionCheck(Fraction(lhs) == rhs, lhs, rhs)


def verify_compo_instance(
    x: LabelSet,
    x1: LabelSet,
    x2: LabelSet,
    x3: LabelSet,
    x4: LabelSet,
    a: int | Fraction,
    b: int | Fraction,
    y: LabelSet,
    m: LabelSet,
    ctx: AlgebraContext,
    dim_ceiling: int = DEFAULT_DIM_CEILING,
) -> bool:
    """Two-term form of verify_hall_identity:
    F^M_{XY} = a sum_Z F^M_{X1,Z} F^Z_{X2,Y} + b sum_Z F^M_{X3,Z} F^Z_{X4,Y}."""
    terms = [(a, x1, x2), (b, x3, x4)]
    return verify_hall_identity(x, terms, y, m, ctx, dim_ceiling=dim_ceiling).holds
