import itertools

import pytest

from hallq.gf import (
    PrimeFieldMatrix,
    SubspaceBasis,
    enumerate_subspaces,
    first_primes,
    gaussian_binomial,
    is_supported_prime,
    matrix_rank,
    rref,
    solve_intertwiner_dim,
)


def spans_by_brute_force(d: int, k: int, p: int) -> set[frozenset[tuple[int, ...]]]:
    # independent oracle: a subspace is its full set of vectors
    vectors = list(itertools.product(range(p), repeat=d))
    spans = set()
    for gens in itertools.product(vectors, repeat=k):
        span = set()
        for coeffs in itertools.product(range(p), repeat=k):
            v = tuple(
                sum(c * g[i] for c, g in zip(coeffs, gens)) % p for i in range(d)
            )
            span.add(v)
        if len(span) == p**k:
            spans.add(frozenset(span))
    return spans


def test_rref_identity():
    m = PrimeFieldMatrix.identity(3, 2)
    reduced, rank, pivots = rref(m)
    assert reduced == m
    assert rank == 2
    assert pivots == [0, 1]


def test_rref_zero():
    m = PrimeFieldMatrix.zero(2, 3, 2)
    reduced, rank, pivots = rref(m)
    assert reduced == m
    assert rank == 0
    assert pivots == []


def test_rref_dependent_rows():
    # second row is twice the first mod 5
    m = PrimeFieldMatrix.from_rows(5, [[1, 2], [2, 4]])
    _, rank, _ = rref(m)
    assert rank == 1


def test_rref_idempotent(rng):
    for _ in range(50):
        p = rng.choice([2, 3, 5])
        rows = rng.randrange(1, 5)
        cols = rng.randrange(1, 5)
        m = PrimeFieldMatrix.from_rows(
            p, [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]
        )
        once, rank, pivots = rref(m)
        twice, rank2, pivots2 = rref(once)
        assert twice == once
        assert (rank2, pivots2) == (rank, pivots)


def test_solve_intertwiner_dim():
    assert solve_intertwiner_dim(PrimeFieldMatrix.zero(2, 3, 4)) == 4
    assert solve_intertwiner_dim(PrimeFieldMatrix.identity(5, 3)) == 0
    assert solve_intertwiner_dim(PrimeFieldMatrix.from_rows(2, [[1, 1], [0, 0]])) == 1


def test_rank_plus_nullity(rng):
    for _ in range(50):
        p = rng.choice([2, 3, 5, 7])
        rows = rng.randrange(0, 5)
        cols = rng.randrange(1, 5)
        m = PrimeFieldMatrix.from_rows(
            p,
            [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)],
            cols=cols,
        )
        assert solve_intertwiner_dim(m) + matrix_rank(m.entries, p) == cols


def test_matmul_shape_check():
    a = PrimeFieldMatrix.zero(2, 2, 3)
    b = PrimeFieldMatrix.zero(2, 2, 3)
    with pytest.raises(ValueError):
        a @ b


def test_matrix_validation():
    with pytest.raises(ValueError):
        PrimeFieldMatrix(4, ((0,),))
    with pytest.raises(ValueError):
        PrimeFieldMatrix(3, ((0, 5),))
    with pytest.raises(ValueError):
        PrimeFieldMatrix(3, ((0, 1), (0,)))


def test_subspace_canonical_form():
    a = SubspaceBasis.from_rows(5, 3, [[1, 2, 3], [0, 1, 4]])
    b = SubspaceBasis.from_rows(5, 3, [[2, 4, 6], [1, 3, 2]])
    assert a == b
    assert a.dim == 2
    assert a.basis.cols == 2
    assert a.basis.rows == 3


def test_subspace_contains():
    s = SubspaceBasis.from_rows(2, 3, [[1, 1, 0]])
    assert s.contains_vector([1, 1, 0])
    assert not s.contains_vector([1, 0, 0])
    assert s.contains(SubspaceBasis.zero(2, 3))
    assert SubspaceBasis.full(2, 3).contains(s)


def test_enumerate_subspaces_small_counts():
    zero2 = SubspaceBasis.zero(2, 2)
    found = list(enumerate_subspaces(2, 2, zero2))
    assert len(found) == 5
    assert len(set(found)) == 5

    zero3 = SubspaceBasis.zero(3, 2)
    assert len(list(enumerate_subspaces(2, 3, zero3))) == 6

    full = SubspaceBasis.full(2, 3)
    assert list(enumerate_subspaces(3, 2, full)) == [full]


def test_enumerate_matches_gaussian_binomial():
    for p in (2, 3, 5):
        for d in range(5):
            seen = list(enumerate_subspaces(d, p, SubspaceBasis.zero(p, d)))
            assert len(seen) == len(set(seen))
            by_dim: dict[int, int] = {}
            for s in seen:
                by_dim[s.dim] = by_dim.get(s.dim, 0) + 1
            for k in range(d + 1):
                assert by_dim.get(k, 0) == gaussian_binomial(d, k, p)


def test_enumerate_ascending_dimension():
    dims = [s.dim for s in enumerate_subspaces(3, 2, SubspaceBasis.zero(2, 3))]
    assert dims == sorted(dims)


def test_enumerate_with_lower_bound(rng):
    for _ in range(10):
        p = rng.choice([2, 3])
        d = rng.randrange(1, 5)
        k = rng.randrange(0, d + 1)
        lower = SubspaceBasis.from_rows(
            p, d, [[rng.randrange(p) for _ in range(d)] for _ in range(k)]
        )
        seen = list(enumerate_subspaces(d, p, lower))
        assert len(seen) == len(set(seen))
        expected = sum(
            gaussian_binomial(d - lower.dim, r, p) for r in range(d - lower.dim + 1)
        )
        assert len(seen) == expected
        for s in seen:
            assert s.contains(lower)
            # canonical form must agree with re-reduction from scratch
            assert s == SubspaceBasis.from_rows(p, d, s.row_basis)


def test_gaussian_binomial_values():
    assert gaussian_binomial(3, 0, 7) == 1
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(4, 2, 2) == 35
    assert len(spans_by_brute_force(4, 2, 2)) == 35
    assert len(spans_by_brute_force(2, 1, 3)) == 4
    with pytest.raises(ValueError):
        gaussian_binomial(2, 3, 2)


def test_prime_helpers():
    assert is_supported_prime(2)
    assert is_supported_prime(97)
    assert not is_supported_prime(4)
    assert not is_supported_prime(101)
    assert first_primes(6) == (2, 3, 5, 7, 11, 13)
    with pytest.raises(ValueError):
        first_primes(26)
