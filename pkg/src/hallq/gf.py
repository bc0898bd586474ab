"""Exact linear algebra and subspace combinatorics over prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

SUPPORTED_PRIMES: tuple[int, ...] = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
)
_SUPPORTED = frozenset(SUPPORTED_PRIMES)


def is_supported_prime(p: int) -> bool:
    return p in _SUPPORTED


def first_primes(k: int) -> tuple[int, ...]:
    """The first k supported primes, starting at 2."""
    if not 0 <= k <= len(SUPPORTED_PRIMES):
        raise ValueError(f"can supply between 0 and {len(SUPPORTED_PRIMES)} primes, not {k}")
    return SUPPORTED_PRIMES[:k]


@lru_cache(maxsize=None)
def _inverses(p: int) -> tuple[int, ...]:
    # index a -> a^-1 mod p, with a junk 0 at index 0
    return tuple(0 if a == 0 else pow(a, p - 2, p) for a in range(p))


def matrix_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of a tuple-of-rows matrix with entries already reduced mod p."""
    m = [list(r) for r in rows]
    nr = len(m)
    if nr == 0 or not m[0]:
        return 0
    nc = len(m[0])
    inv = _inverses(p)
    rank = 0
    for c in range(nc):
        piv = -1
        for r in range(rank, nr):
            if m[r][c]:
                piv = r
                break
        if piv < 0:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        mi = inv[prow[c]]
        if mi != 1:
            for j in range(c, nc):
                prow[j] = prow[j] * mi % p
        for r in range(rank + 1, nr):
            f = m[r][c]
            if f:
                rr = m[r]
                for j in range(c, nc):
                    rr[j] = (rr[j] - f * prow[j]) % p
        rank += 1
        if rank == nr:
            break
    return rank


def row_reduce(
    rows: Sequence[Sequence[int]], p: int, ncols: int | None = None
) -> tuple[tuple[tuple[int, ...], ...], int, tuple[int, ...]]:
    """Full reduced row-echelon form.

    Returns (nonzero rows of the RREF, rank, pivot columns). Zero rows are
    dropped so the first component doubles as a canonical basis of the row
    space. Pass ncols when rows may be empty.
    """
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else (ncols or 0)
    if nr == 0 or nc == 0:
        return (), 0, ()
    inv = _inverses(p)
    rank = 0
    pivots: list[int] = []
    for c in range(nc):
        piv = -1
        for r in range(rank, nr):
            if m[r][c]:
                piv = r
                break
        if piv < 0:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        mi = inv[prow[c]]
        if mi != 1:
            for j in range(c, nc):
                prow[j] = prow[j] * mi % p
        for r in range(nr):
            if r == rank:
                continue
            f = m[r][c]
            if f:
                rr = m[r]
                for j in range(c, nc):
                    rr[j] = (rr[j] - f * prow[j]) % p
        pivots.append(c)
        rank += 1
        if rank == nr:
            break
    return tuple(tuple(m[i]) for i in range(rank)), rank, tuple(pivots)


def mat_mul(
    a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int
) -> tuple[tuple[int, ...], ...]:
    """Product of two tuple-of-rows matrices mod p."""
    if a and b:
        assert len(a[0]) == len(b), "inner dimensions must agree"
    bt = tuple(zip(*b)) if b else ()
    out = []
    for row in a:
        out.append(tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt))
    return tuple(out)


def mat_vec(a: Sequence[Sequence[int]], v: Sequence[int], p: int) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in a)


class PrimeFieldMatrix:
    """Immutable matrix over F_p; entries are residues in [0, p).

    The shape is carried explicitly so degenerate matrices (0 rows, or 0
    columns) keep their other dimension.
    """

    __slots__ = ("p", "rows", "cols", "entries")

    def __init__(
        self,
        p: int,
        entries: tuple[tuple[int, ...], ...],
        shape: tuple[int, int] | None = None,
    ) -> None:
        if p not in _SUPPORTED:
            raise ValueError(f"modulus must be a prime in [2, 97], got {p}")
        if shape is None:
            shape = (len(entries), len(entries[0]) if entries else 0)
        rows, cols = shape
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError(f"entries do not match shape {rows}x{cols}")
        for r in entries:
            for x in r:
                if not 0 <= x < p:
                    raise ValueError(f"entry {x} not reduced mod {p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("PrimeFieldMatrix is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimeFieldMatrix):
            return NotImplemented
        return (self.p, self.rows, self.cols, self.entries) == (
            other.p,
            other.rows,
            other.cols,
            other.entries,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"PrimeFieldMatrix(p={self.p}, {self.rows}x{self.cols}, {self.entries!r})"

    @classmethod
    def from_rows(
        cls, p: int, rows: Sequence[Sequence[int]], cols: int | None = None
    ) -> PrimeFieldMatrix:
        entries = tuple(tuple(x % p for x in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(p, entries, shape=(len(entries), cols))

    @classmethod
    def zero(cls, p: int, rows: int, cols: int) -> PrimeFieldMatrix:
        return cls(p, tuple((0,) * cols for _ in range(rows)), shape=(rows, cols))

    @classmethod
    def identity(cls, p: int, n: int) -> PrimeFieldMatrix:
        return cls(p, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __matmul__(self, other: PrimeFieldMatrix) -> PrimeFieldMatrix:
        if self.p != other.p:
            raise ValueError("mixed moduli")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return PrimeFieldMatrix(
            self.p, mat_mul(self.entries, other.entries, self.p), shape=(self.rows, other.cols)
        )

    def transpose(self) -> PrimeFieldMatrix:
        flipped = tuple(zip(*self.entries)) if self.entries else tuple(() for _ in range(self.cols))
        return PrimeFieldMatrix(self.p, flipped, shape=(self.cols, self.rows))

    def rank(self) -> int:
        return matrix_rank(self.entries, self.p)


def rref(m: PrimeFieldMatrix) -> tuple[PrimeFieldMatrix, int, list[int]]:
    """Reduced row-echelon form of m, keeping the original shape.

    Returns (reduced, rank, pivot column indices).
    """
    reduced, rank, pivots = row_reduce(m.entries, m.p, ncols=m.cols)
    padded = reduced + tuple((0,) * m.cols for _ in range(m.rows - rank))
    return PrimeFieldMatrix(m.p, padded, shape=(m.rows, m.cols)), rank, list(pivots)


def solve_intertwiner_dim(constraint: PrimeFieldMatrix) -> int:
    """Dimension of the solution space of constraint @ x = 0."""
    return constraint.cols - matrix_rank(constraint.entries, constraint.p)


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of F_p^d in canonical form.

    row_basis holds the reduced row-echelon basis (one row per vector), which
    makes equality of subspaces a plain tuple comparison. The column-echelon
    matrix is its transpose, exposed as .basis.
    """

    p: int
    ambient_dim: int
    row_basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...] = field(compare=False)

    @classmethod
    def from_rows(cls, p: int, ambient_dim: int, rows: Sequence[Sequence[int]]) -> SubspaceBasis:
        reduced = tuple(tuple(x % p for x in r) for r in rows)
        for r in reduced:
            if len(r) != ambient_dim:
                raise ValueError(f"vector length {len(r)} != ambient dimension {ambient_dim}")
        basis, _, pivots = row_reduce(reduced, p, ncols=ambient_dim)
        return cls(p, ambient_dim, basis, pivots)

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> SubspaceBasis:
        return cls(p, ambient_dim, (), ())

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> SubspaceBasis:
        rows = tuple(tuple(1 if i == j else 0 for j in range(ambient_dim)) for i in range(ambient_dim))
        return cls(p, ambient_dim, rows, tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.row_basis)

    @property
    def basis(self) -> PrimeFieldMatrix:
        flipped = (
            tuple(zip(*self.row_basis))
            if self.row_basis
            else tuple(() for _ in range(self.ambient_dim))
        )
        return PrimeFieldMatrix(self.p, flipped, shape=(self.ambient_dim, self.dim))

    def contains_vector(self, vec: Sequence[int]) -> bool:
        v = [x % self.p for x in vec]
        for row, piv in zip(self.row_basis, self.pivots):
            f = v[piv]
            if f:
                for j in range(piv, self.ambient_dim):
                    v[j] = (v[j] - f * row[j]) % self.p
        return not any(v)

    def contains(self, other: SubspaceBasis) -> bool:
        return all(self.contains_vector(r) for r in other.row_basis)


def _echelon_row_sets(m: int, r: int, p: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    # all r x m reduced row-echelon matrices of full rank r
    for pivots in combinations(range(m), r):
        pivot_set = set(pivots)
        free_slots = [
            (i, j) for i in range(r) for j in range(pivots[i] + 1, m) if j not in pivot_set
        ]
        for values in product(range(p), repeat=len(free_slots)):
            rows = [[0] * m for _ in range(r)]
            for i in range(r):
                rows[i][pivots[i]] = 1
            for (i, j), v in zip(free_slots, values):
                rows[i][j] = v
            yield tuple(tuple(row) for row in rows)


def echelon_supersets(
    d: int,
    p: int,
    lower_rows: tuple[tuple[int, ...], ...],
    lower_pivots: tuple[int, ...],
    extra_rank: int,
) -> Iterator[tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]]:
    """Raw form of superspace enumeration: yield (rref rows, pivots) of every
    subspace of F_p^d that contains the given echelon space and exceeds its
    dimension by exactly extra_rank.

    The lower space must already be in reduced row-echelon form. Enumerates
    echelon bases of the quotient space and pulls them back along the
    complement coordinates.
    """
    compl = [j for j in range(d) if j not in set(lower_pivots)]
    m = len(compl)
    if extra_rank < 0 or extra_rank > m:
        return
    for quot_rows in _echelon_row_sets(m, extra_rank, p):
        lifted = []
        for u in quot_rows:
            vec = [0] * d
            for t, c in enumerate(compl):
                vec[c] = u[t]
            lifted.append(vec)
        # clear lower-bound entries at the lifted pivot columns; the stack
        # is then the RREF of the combined span without a fresh elimination
        lift_pivots = [compl[next(t for t in range(m) if u[t])] for u in quot_rows]
        adjusted = []
        for row in lower_rows:
            new = list(row)
            for lp, lrow in zip(lift_pivots, lifted):
                f = new[lp]
                if f:
                    for j in range(d):
                        new[j] = (new[j] - f * lrow[j]) % p
            adjusted.append(new)
        merged = sorted(
            list(zip(lower_pivots, adjusted)) + list(zip(lift_pivots, lifted))
        )
        yield (
            tuple(tuple(row) for _, row in merged),
            tuple(piv for piv, _ in merged),
        )


def enumerate_subspaces(
    ambient_dim: int, p: int, lower_bound: SubspaceBasis
) -> Iterator[SubspaceBasis]:
    """Yield every subspace of F_p^ambient_dim containing lower_bound.

    Each subspace appears exactly once, in canonical echelon form, ordered by
    ascending dimension.
    """
    if lower_bound.ambient_dim != ambient_dim:
        raise ValueError("lower_bound lives in a different ambient space")
    if lower_bound.p != p:
        raise ValueError("lower_bound uses a different modulus")
    free = ambient_dim - lower_bound.dim
    for r in range(free + 1):
        for rows, pivots in echelon_supersets(
            ambient_dim, p, lower_bound.row_basis, lower_bound.pivots, r
        ):
            yield SubspaceBasis(p, ambient_dim, rows, pivots)


def gaussian_binomial(d: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^d, exactly."""
    if k > d:
        raise ValueError(f"subspace dimension {k} exceeds ambient dimension {d}")
    if k < 0 or d < 0:
        raise ValueError("dimensions must be nonnegative")
    num = 1
    den = 1
    for i in range(k):
        num *= p ** (d - i) - 1
        den *= p ** (i + 1) - 1
    assert num % den == 0
    return num // den
