import itertools
import random

import pytest
from hypothesis import given, strategies as st

from uqglmn.graded_tensor import (
    GradedMatrix,
    ParityStructure,
    TildeDirection,
    embed,
    graded_kron,
    kron,
    matrix_unit,
    perm_matrix,
    plain_perm_matrix,
    theta_matrix,
    tilde_toggle,
)
from uqglmn.rmatrix import build_r, build_rtilde
from uqglmn.scalar_field import var

CASES = [(1, 1), (1, 2), (2, 1), (2, 2)]


def rows(M):
    return [[M.entry(r, c) for c in range(M.dim)] for r in range(M.dim)]




def apply(M, i):
    """M v_i as a dict index -> coefficient."""
    return {r: v for (r, c), v in M.nonzero() if c == i}


def test_parity_structure_rejects_empty_sector():
    with pytest.raises(ValueError):
        ParityStructure(0, 1)


def test_even_blocks_give_ordinary_kron():
    ps = ParityStructure(2, 1)
    A = matrix_unit(ps, 0, 1)
    B = matrix_unit(ps, 1, 0) + matrix_unit(ps, 0, 0)
    assert graded_kron(A, B) == kron(A, B)


def test_odd_units_pick_up_the_koszul_sign():
    ps = ParityStructure(1, 1)
    E = matrix_unit(ps, 0, 1)  # odd
    I = GradedMatrix.identity(ps.parities)
    # (a (x) b)(c (x) d) = (-1)^{[b][c]} ac (x) bd: the sign appears when E passes E
    assert graded_kron(I, E) @ graded_kron(E, I) == -graded_kron(E, E)
    assert graded_kron(E, I) @ graded_kron(I, E) == graded_kron(E, E)


def test_action_on_basis_vectors_all_units():
    """(A (x) B)(v_j (x) v_l) = (-1)^{[B][j]} A v_j (x) B v_l for all 16 gl(1|1) pairs of units."""
    ps = ParityStructure(1, 1)
    N = ps.dim
    p = ps.parities
    for a, b, c, d in itertools.product(range(N), repeat=4):
        A, B = matrix_unit(ps, a, b), matrix_unit(ps, c, d)
        M = graded_kron(A, B)
        for j, l in itertools.product(range(N), repeat=2):
            got = apply(M, j * N + l)
            if j == a and l == c:
                sign = -1 if (p[c] + p[d]) % 2 and p[j] else 1
                assert got == {b * N + d: sign}
            else:
                assert not got


def test_graded_permutation_gl11():
    P = perm_matrix(ParityStructure(1, 1))
    assert rows(P) == [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]]


@pytest.mark.parametrize("mn", CASES)
def test_involutions(mn):
    ps = ParityStructure(*mn)
    I2 = GradedMatrix.identity(ps.tensor_parities(2))
    assert perm_matrix(ps) @ perm_matrix(ps) == I2
    assert theta_matrix(ps) @ theta_matrix(ps) == I2
    I = GradedMatrix.identity(ps.parities)
    assert graded_kron(I, I) == I2


def test_ungraded_permutation_is_plain_flip():
    ps = ParityStructure(1, 1, graded=False)
    assert perm_matrix(ps) == plain_perm_matrix(ps)


def test_theta_gl11_and_gl21():
    assert rows(theta_matrix(ParityStructure(1, 1))) == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]
    T = theta_matrix(ParityStructure(2, 1))
    minus = [i for i in range(9) if T.entry(i, i) == -1]
    assert minus == [2 * 3 + 2]


def test_tilde_toggle():
    ps = ParityStructure(1, 1)
    R = build_r(ps).matrix
    assert tilde_toggle(tilde_toggle(R, ps), ps, TildeDirection.FROM_TILDE) == R
    Rt = build_rtilde(ps).matrix
    assert R.entry(3, 3) == -Rt.entry(3, 3)
    ps21 = ParityStructure(2, 1)
    R, Rt = build_r(ps21).matrix, build_rtilde(ps21).matrix
    even = [a * 3 + b for a in range(2) for b in range(2)]
    for r in even:
        for c in range(9):
            assert R.entry(r, c) == Rt.entry(r, c)


def test_embed_adjacent_and_distant():
    ps = ParityStructure(1, 1)
    R = build_r(ps).matrix
    I = GradedMatrix.identity(ps.parities)
    assert embed(R, ps, (1, 2), 3) == graded_kron(R, I)
    P23 = embed(perm_matrix(ps), ps, (2, 3), 3)
    assert embed(R, ps, (1, 3), 3) == P23 @ embed(R, ps, (1, 2), 3) @ P23
    with pytest.raises(ValueError):
        embed(R, ps, (0, 2), 3)


def test_r21_is_conjugation_by_p():
    ps = ParityStructure(1, 1)
    from uqglmn.rmatrix import r_terms, swap_slots
    z, w = var("z"), var("w")
    R = build_r(ps)
    P = perm_matrix(ps)
    assert P @ R.matrix @ P == swap_slots(ps, r_terms(ps, z, w, False))


def test_embed_preserves_invertibility():
    ps = ParityStructure(1, 1)
    R = build_r(ps).matrix
    E = embed(R, ps, (1, 3), 3)
    assert E @ E.inverse() == GradedMatrix.identity(E.parities)


# -- the multiplication-rule contract on random homogeneous matrices ---------------


def random_homogeneous(ps, parity, rng):
    N = ps.dim
    p = ps.parities
    ent = {}
    for r in range(N):
        for c in range(N):
            if (p[r] + p[c]) % 2 == parity and rng.random() < 0.6:
                ent[(r, c)] = rng.randint(-3, 3)
    return GradedMatrix(ps.parities, ent)


@pytest.mark.parametrize("mn", [(1, 1), (2, 1)])
def test_kron_contract_seeded(mn):
    ps = ParityStructure(*mn)
    rng = random.Random(1234 + sum(mn))
    for _ in range(100):
        pa, pb, pc, pd = (rng.randint(0, 1) for _ in range(4))
        A, B, C, D = (random_homogeneous(ps, x, rng) for x in (pa, pb, pc, pd))
        lhs = graded_kron(A, B) @ graded_kron(C, D)
        rhs = graded_kron(A @ C, B @ D)
        assert lhs == (-rhs if pb * pc else rhs)


@given(st.integers(0, 2 ** 32), st.sampled_from([(1, 1), (2, 1), (1, 2)]))
def test_kron_contract_property(seed, mn):
    ps = ParityStructure(*mn)
    rng = random.Random(seed)
    pa, pb, pc, pd = (rng.randint(0, 1) for _ in range(4))
    A, B, C, D = (random_homogeneous(ps, x, rng) for x in (pa, pb, pc, pd))
    lhs = graded_kron(A, B) @ graded_kron(C, D)
    rhs = graded_kron(A @ C, B @ D)
    assert lhs == (-rhs if pb * pc else rhs)


@given(st.integers(0, 2 ** 32))
def test_ungraded_kron_is_plain(seed):
    ps = ParityStructure(1, 2, graded=False)
    rng = random.Random(seed)
    A, B = random_homogeneous(ps, 0, rng), random_homogeneous(ps, 0, rng)
    assert graded_kron(A, B) == kron(A, B)
