import pytest
from hypothesis import given, strategies as st

from conftest import SAMPLE, currents
from uqglmn.distributions import default_window
from uqglmn.gauss_currents import (
    RelationChecker,
    build_currents,
    check_definition_gl11,
    check_definition_glmn,
    check_delta_support,
    gauss_decompose,
    negative_check_grading_off,
    quasi_minor_decompose,
)
from uqglmn.graded_tensor import GradedMatrix, ParityStructure
from uqglmn.report import Status
from uqglmn.rll_evaluation import eval_rep, fuse, trivial_rep
from uqglmn.scalar_field import var

MN = [(1, 1), (2, 1), (1, 2)]


def two_point(ps):
    return fuse(eval_rep(ps, "a"), eval_rep(ps, "b"))


@pytest.mark.parametrize("mn", MN + [(2, 2)])
def test_reconstruction(mn):
    ps = ParityStructure(*mn)
    L = eval_rep(ps) if mn == (2, 2) else two_point(ps)
    assert gauss_decompose(L).check_reconstruction().passed


def test_gl11_block_form():
    g = gauss_decompose(two_point(ParityStructure(1, 1)))
    k1, k2, e, f = g.k(1), g.k(2), g.e(1), g.f(1)
    L = g.L
    assert L[0, 0] == k1
    assert L[0, 1] == k1 @ f
    assert L[1, 0] == e @ k1
    assert L[1, 1] == k2 + e @ k1 @ f


def test_identity_decomposes_trivially():
    ps = ParityStructure(2, 1)
    g = gauss_decompose(trivial_rep(ps))
    I = GradedMatrix.identity(g.K[0].parities)
    assert all(k == I for k in g.K)
    assert all(g.e(i).is_zero() and g.f(i).is_zero() for i in (1, 2))


@pytest.mark.parametrize("mn", MN)
def test_uniqueness_against_quasi_minors(mn):
    L = two_point(ParityStructure(*mn))
    g, h = gauss_decompose(L), quasi_minor_decompose(L)
    N = sum(mn)
    assert all(g.k(j) == h.k(j) for j in range(1, N + 1))
    assert all(g.e(i) == h.e(i) and g.f(i) == h.f(i) for i in range(1, N))


@pytest.mark.parametrize("mn", MN)
def test_currents_are_delta_supported(mn):
    assert all(o.passed for o in check_delta_support(currents(*mn, sampled=True)))


@pytest.mark.parametrize("mn", MN + [(2, 2)])
def test_odd_node_parity(mn):
    C = build_currents(ParityStructure(*mn), ("a",), N=4)
    assert [C.parity(i) for i in range(1, sum(mn))] == [int(i == mn[0]) for i in range(1, sum(mn))]


def test_gl11_k1_leading_coefficients():
    C = build_currents(ParityStructure(1, 1), ("a",), N=4)
    q = var("q")
    assert C.k("+", 1).coefficient((0,)) == GradedMatrix.diagonal([q ** 0, q], (0, 1))
    assert C.k("-", 1).coefficient((0,)) == GradedMatrix.diagonal([q ** 0, 1 / q], (0, 1))
    assert C.k("+", 1).coefficient((-1,)).is_zero()


def test_window_is_centred():
    assert default_window(6) == (-3, 2)
    assert default_window(8) == (-4, 3)
    assert default_window(5) == (-2, 2)


def test_definition_gl11_window_8():
    outs = check_definition_gl11(N=8, values=SAMPLE)
    assert outs and all(o.passed for o in outs)
    fams = {o.relation.split(".")[1] for o in outs}
    assert {"k-k", "k-X", "X-X", "X+X-"} <= fams


def test_definition_gl11_symbolic():
    outs = check_definition_gl11(N=6)
    assert all(o.passed for o in outs)


def test_definition_gl12_all_pass():
    outs = check_definition_glmn(ParityStructure(1, 2), currents=currents(1, 2, sampled=True))
    assert all(o.passed for o in outs)


def test_definition_gl21_sole_mismatch_is_even_node_commutator():
    outs = check_definition_glmn(ParityStructure(2, 1), currents=currents(2, 1, sampled=True))
    bad = [o for o in outs if not o.passed]
    assert [(o.relation, o.status) for o in bad] == [("D3.X+X-.commutator.X+1.X-1", Status.MISMATCH)]
    assert "opposite overall sign" in bad[0].detail


@pytest.mark.parametrize("mn", [(1, 1), (2, 1)])
def test_window_stability(mn):
    def verdicts(N):
        C = build_currents(ParityStructure(*mn), N=N, values=SAMPLE)
        rc = RelationChecker(C, "D2" if mn == (1, 1) else "D3")
        return {o.relation: o.status for o in rc.kk() + rc.kx() + rc.xx() + rc.pm()}
    assert verdicts(6) == verdicts(10)


def test_point_order_invariance():
    def verdicts(points):
        C = build_currents(ParityStructure(1, 1), points, N=6, values=SAMPLE)
        rc = RelationChecker(C, "D2")
        return [(o.relation, o.status) for o in rc.kk() + rc.xx() + rc.pm()]
    assert verdicts(("a", "b")) == verdicts(("b", "a"))


def test_serre_gl21():
    outs = RelationChecker(currents(2, 1, sampled=True), "D3").serre()
    names = {o.relation for o in outs}
    assert {"D3.serre1.X+.i1", "D3.serre1.X-.i1", "D3.serre3.X+", "D3.serre3.X-"} <= names
    assert all(o.passed for o in outs)


@pytest.mark.parametrize("mn", [(1, 1), (2, 1)])
def test_grading_off_pattern(mn):
    outs = negative_check_grading_off(ParityStructure(*mn), N=6, values=SAMPLE)
    assert all(o.passed for o in outs), [o for o in outs if not o.passed]
    anti = [o for o in outs if ".X-X.anticommutator." in o.relation]
    assert anti and all("ungraded=fail" in o.detail and "graded=pass" in o.detail for o in anti)
    comm = [o for o in outs if ".X-X.commutator-counterpart." in o.relation]
    assert comm and all("ungraded=pass" in o.detail for o in comm)


def test_grading_off_breaks_the_anticommutator_directly():
    rc = RelationChecker(currents(1, 1, graded=False, sampled=True), "D2")
    xx = {o.relation: o for o in rc.xx()}
    assert any(not o.passed for r, o in xx.items() if "anticommutator" in r)


@given(st.fractions(min_value=2, max_value=9, max_denominator=5),
       st.fractions(min_value=1, max_value=7, max_denominator=4))
def test_gl11_pm_relation_at_random_points(qv, av):
    vals = {"q": qv, "a": av, "b": av * qv ** 7 + 1}
    C = build_currents(ParityStructure(1, 1), N=4, values=vals)
    assert all(o.passed for o in RelationChecker(C, "D2").pm())
