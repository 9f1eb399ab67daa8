import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpquiver.exactla import (
    ExactMatrix,
    FieldSpec,
    cokernel_projection,
    complement_coordinates,
    image_basis,
    inverse,
    kernel_basis,
    kron,
    left_inverse,
    rank,
    rref,
    solve,
)

F3 = FieldSpec(3)
F101 = FieldSpec(101)
Q = FieldSpec.rationals()

small_ints = st.integers(-3, 3)


def int_matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


# oracles first


def brute_kernel_size(rows, p):
    """Count solutions of ``M v = 0`` over F_p by enumeration."""
    M = np.array(rows, dtype=int)
    n = M.shape[1]
    return sum(1 for v in itertools.product(range(p), repeat=n) if not (M @ np.array(v) % p).any())


@settings(max_examples=60, deadline=None)
@given(int_matrices(4, 4))
def test_kernel_over_f3_matches_enumeration(rows):
    M = ExactMatrix.from_rows(F3, rows)
    K = kernel_basis(M)
    assert 3 ** K.cols == brute_kernel_size(rows, 3)
    assert (M @ K).is_zero()


@settings(max_examples=80, deadline=None)
@given(int_matrices(6, 6))
def test_rational_rank_matches_float_rank(rows):
    # entries are tiny integers so the floating point rank is reliable
    expected = np.linalg.matrix_rank(np.array(rows, dtype=float))
    assert rank(ExactMatrix.from_rows(Q, rows)) == expected


def test_known_rank_drop_mod_p():
    rows = [[1, 2], [3, 6 + 101]]
    assert rank(ExactMatrix.from_rows(Q, rows)) == 2
    assert rank(ExactMatrix.from_rows(F101, rows)) == 1


# properties


@pytest.mark.parametrize("field", [F3, F101, Q])
@settings(max_examples=40, deadline=None)
@given(rows=int_matrices())
def test_rank_nullity(field, rows):
    M = ExactMatrix.from_rows(field, rows)
    assert rank(M) + kernel_basis(M).cols == M.cols
    assert image_basis(M).cols == rank(M)


@pytest.mark.parametrize("field", [F101, Q])
@settings(max_examples=40, deadline=None)
@given(rows=int_matrices(), data=st.data())
def test_solve_consistent_system(field, rows, data):
    M = ExactMatrix.from_rows(field, rows)
    x = data.draw(st.lists(small_ints, min_size=M.cols, max_size=M.cols))
    b = M @ ExactMatrix.from_rows(field, [[v] for v in x])
    sol = solve(M, b)
    assert sol is not None and M @ sol == b


def test_solve_inconsistent_returns_none():
    M = ExactMatrix.from_rows(Q, [[1, 1], [2, 2]])
    assert solve(M, ExactMatrix.from_rows(Q, [[1], [3]])) is None


@settings(max_examples=40, deadline=None)
@given(int_matrices(5, 5))
def test_rref_is_reduced(rows):
    R, piv = rref(ExactMatrix.from_rows(F101, rows))
    for i, c in enumerate(piv):
        col = R.a[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
    assert piv == sorted(piv)


@settings(max_examples=40, deadline=None)
@given(int_matrices(5, 5))
def test_cokernel_projection(rows):
    M = ExactMatrix.from_rows(Q, rows)
    proj, d = cokernel_projection(M)
    assert (proj @ M).is_zero()
    assert d == M.rows - rank(M) == rank(proj)


@settings(max_examples=40, deadline=None)
@given(int_matrices(5, 3))
def test_complement_and_left_inverse(rows):
    M = image_basis(ExactMatrix.from_rows(F101, rows))
    extra = complement_coordinates(M)
    assert M.cols + len(extra) == M.rows
    full = ExactMatrix(F101, np.concatenate([M.a, np.eye(M.rows, dtype=np.int64)[:, extra]], axis=1))
    assert rank(full) == M.rows
    if M.cols:
        assert left_inverse(M) @ M == ExactMatrix.identity(F101, M.cols)


def test_inverse_and_singular():
    M = ExactMatrix.from_rows(Q, [[2, 1], [1, 1]])
    assert inverse(M) @ M == ExactMatrix.identity(Q, 2)
    with pytest.raises(ZeroDivisionError):
        inverse(ExactMatrix.from_rows(Q, [[1, 2], [2, 4]]))


def test_kron_shape_and_entries():
    x = ExactMatrix.from_rows(F101, [[1, 2], [0, 1]])
    y = ExactMatrix.from_rows(F101, [[3]])
    assert kron(x, y) == x.scale(3)


def test_field_parsing_and_scalars():
    assert FieldSpec.parse("Fp:5") == FieldSpec(5)
    assert FieldSpec.parse("Q").is_rational
    assert F101.scalar("1/2") * 2 % 101 == 1
    assert Q.scalar("1/2") == Fraction(1, 2)
    assert F3.scalar(-1) == 2
    with pytest.raises(ValueError):
        FieldSpec(4)
    with pytest.raises(ValueError):
        FieldSpec.parse("GF(7)")
    with pytest.raises(ZeroDivisionError):
        FieldSpec(5).scalar("1/5")


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        ExactMatrix.identity(F3, 2) @ ExactMatrix.identity(Q, 2)
