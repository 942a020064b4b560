from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mcgauge.exactalg import (
    Echelon,
    Matrix,
    NotAComplexError,
    Q,
    fmt,
    homology,
    kernel,
    rank,
    rank_of_vectors,
    solve_linear,
)

scalars = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(scalars, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_zero_system_has_full_kernel():
    sol = solve_linear(Matrix.zero(2, 2), {})
    assert sol.consistent and not sol.particular
    assert len(sol.kernel_basis) == 2


def test_identity_system():
    b = {0: Fraction(1), 1: Fraction(1, 2), 2: Fraction(-2)}
    sol = solve_linear(Matrix.identity(3), b)
    assert sol.particular == b
    assert sol.kernel_basis == []


def test_inconsistent_system():
    M = Matrix.from_dense([[1, 1], [1, 1]])
    assert not solve_linear(M, {0: Fraction(1)}).consistent


def test_homology_examples():
    z = Matrix.zero(2, 0)
    assert homology(z, Matrix.zero(0, 2))[0] == 2
    one = Matrix.identity(1)
    assert homology(Matrix.zero(1, 0), one)[0] == 0
    assert homology(one, Matrix.zero(0, 1))[0] == 0
    assert homology(Matrix.from_dense([[1], [0]]), Matrix.zero(0, 2))[0] == 1


def test_homology_rejects_non_complex():
    with pytest.raises(NotAComplexError):
        homology(Matrix.identity(1), Matrix.identity(1))


def test_scalar_parsing():
    assert Q("3/6") == Fraction(1, 2)
    assert Q(" -2 ") == -2
    with pytest.raises(ZeroDivisionError):
        Q("1/0")
    assert fmt(Fraction(4, 2)) == "2" and fmt(Fraction(-1, 3)) == "-1/3"


@given(scalars)
def test_fmt_round_trip(q):
    assert Q(fmt(q)) == q


@given(matrices())
def test_rank_nullity(rows):
    M = Matrix.from_dense(rows)
    K = kernel(M)
    assert rank(M) + len(K) == M.cols
    for v in K:
        assert not M.apply(v)


@given(matrices(), st.lists(scalars, min_size=4, max_size=4))
def test_solutions_solve(rows, xs):
    M = Matrix.from_dense(rows)
    x = {i: c for i, c in enumerate(xs[:M.cols]) if c}
    b = M.apply(x)
    sol = solve_linear(M, b)
    assert sol.consistent
    assert M.apply(sol.particular) == b
    assert M.apply(sol.point([1] * len(sol.kernel_basis))) == b


@given(matrices())
def test_rank_is_transpose_invariant(rows):
    M = Matrix.from_dense(rows)
    T = Matrix.from_dense([list(r) for r in zip(*rows)])
    assert rank(M) == rank(T) == rank_of_vectors(M.column_vectors())


@given(st.lists(st.lists(scalars, min_size=3, max_size=3), max_size=5))
def test_echelon_membership(vectors):
    E = Echelon()
    vs = [{i: c for i, c in enumerate(v) if c} for v in vectors]
    for v in vs:
        E.add(v)
    for v in vs:
        assert E.contains(v)
    if len(vs) >= 2:
        s = dict(vs[0])
        for i, c in vs[1].items():
            s[i] = s.get(i, 0) + 3 * c
        assert E.contains({i: c for i, c in s.items() if c})
