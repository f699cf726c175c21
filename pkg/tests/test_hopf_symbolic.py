import pytest
from hypothesis import given, strategies as st

from conftest import SAMPLE
from uqglmn.graded_tensor import ParityStructure
from uqglmn.hopf_symbolic import (
    Atom,
    CurrentExpr,
    Delta,
    Normalizer,
    TensorExpr,
    antipode,
    apply_antipode,
    apply_coproduct,
    apply_counit,
    check_antipode_square,
    check_counit_degeneration,
    check_homomorphism_gl11,
    check_hopf_axioms,
    coproduct,
    counit,
    gen,
    generators,
    merge,
    rep_homomorphism_check,
    scalar,
    tensor,
)
from uqglmn.report import Status
from uqglmn.scalar_field import ONE, var

PS = ParityStructure(1, 1)
z, w, q = var("z"), var("w"), var("q")
qc, qc1, qc2, qc3 = var("qc"), var("qc1"), var("qc2"), var("qc3")


def pure(ps, *words, c=ONE, deltas=()):
    cls = CurrentExpr if len(words) == 1 else TensorExpr
    return cls(ps, len(words), {(tuple(deltas), tuple(tuple(w) for w in words)): c})


BASIC = Normalizer(PS, ("cancel", "cartan-sort"))


def test_coproduct_of_k_plus():
    D = coproduct(gen(PS, "k+", 1))
    assert D == pure(PS, [Atom("k+", 1, z * qc2)], [Atom("k+", 1, z / qc1)])


def test_coproduct_of_central_element():
    assert coproduct(scalar(PS, qc ** 2)) == scalar(PS, qc1 ** 2 * qc2 ** 2, slots=2)


def test_counit_on_either_slot_returns_x_plus():
    g = gen(PS, "X+", 1)
    D = coproduct(g)
    for slot in (1, 2):
        assert BASIC.normalize(apply_counit(D, slot)) == g


def test_counit_examples():
    assert counit(scalar(PS)) == ONE
    assert counit(gen(PS, "psi", 1)) == ONE
    assert counit(gen(PS, "X+", 1) * gen(PS, "k+", 2, "w")) == 0
    assert counit(scalar(PS, qc ** 2) * gen(PS, "k-", 1, power=-1)) == ONE


def test_antipode_of_psi():
    assert BASIC.normalize(antipode(gen(PS, "psi", 1))) == gen(PS, "psi", 1, power=-1)


def test_antipode_odd_product_sign():
    a, b = gen(PS, "X+", 1, "z"), gen(PS, "X+", 1, "w")
    assert antipode(a * b) == -(antipode(b) * antipode(a))
    e = ParityStructure(2, 1)
    a, b = gen(e, "X+", 1, "z"), gen(e, "X+", 1, "w")
    assert antipode(a * b) == antipode(b) * antipode(a)


def test_merge_of_unit_slot():
    g = gen(PS, "X-", 1) * gen(PS, "k+", 2, z * qc)
    assert merge(tensor(g, scalar(PS))) == g
    assert merge(tensor(scalar(PS), g)) == g


def test_merge_after_antipode_on_k_plus():
    t = apply_antipode(coproduct(gen(PS, "k+", 1)), 1)
    m = merge(t)
    # S inverts slot 1's charge first, so both factors land on the same shifted argument
    assert m == pure(PS, [Atom("k+", 1, z * qc, -1), Atom("k+", 1, z * qc)])
    assert BASIC.normalize(m) == scalar(PS)


def test_cross_sign_paid_at_multiplication():
    left = tensor(gen(PS, "X+", 1, "z"), scalar(PS))
    right = tensor(scalar(PS), gen(PS, "X+", 1, "w"))
    both = pure(PS, [Atom("X+", 1, z)], [Atom("X+", 1, w)])
    assert left * right == both
    assert right * left == -both
    assert merge(left * right) == gen(PS, "X+", 1, "z") * gen(PS, "X+", 1, "w")


def test_antipode_axiom_on_x_plus_term_by_term():
    m = merge(apply_antipode(coproduct(gen(PS, "X+", 1)), 1))
    shifted = pure(PS, [Atom("psi", 1, z / qc, -1), Atom("X+", 1, z / qc ** 2)])
    assert antipode(gen(PS, "X+", 1)) == -shifted
    assert m == antipode(gen(PS, "X+", 1)) + shifted
    assert m.is_zero()


def test_coassociativity_of_k_plus_explicit():
    D = coproduct(gen(PS, "k+", 1))
    want = pure(PS, [Atom("k+", 1, z * qc2 * qc3)], [Atom("k+", 1, z * qc3 / qc1)], [Atom("k+", 1, z / (qc1 * qc2))])
    assert apply_coproduct(D, 1) == want
    assert apply_coproduct(D, 2) == want


def test_right_counit_on_x_minus():
    g = gen(PS, "X-", 1)
    assert BASIC.normalize(apply_counit(coproduct(g), 2)) == g


def test_delta_is_symmetric():
    assert Delta(w / z * qc ** 2) == Delta(z / w / qc ** 2)
    assert Delta(w / z) != Delta(w * z)


def test_atoms_reject_bad_input():
    with pytest.raises(ValueError):
        Atom("X+", 1, z, -1)
    with pytest.raises(ValueError):
        Atom("Y", 1, z)
    with pytest.raises(ValueError):
        Normalizer(ParityStructure(2, 1), ("cartan-x",))


@pytest.mark.parametrize("mn", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_hopf_axioms(mn):
    outs = check_hopf_axioms(ParityStructure(*mn))
    assert outs and all(o.passed for o in outs), [o for o in outs if not o.passed][:3]
    kinds = {o.relation.split(".")[1] for o in outs}
    assert kinds == {"counit-left", "counit-right", "antipode-left", "antipode-right", "coassociativity",
                     "parity", "antipode-square", "coproduct-consistency"}


def test_axiom_checker_catches_a_wrong_antipode(monkeypatch):
    import uqglmn.hopf_symbolic as H
    real = H._atom_antipode

    def wrong(ps, a, qc):
        out = real(ps, a, qc)
        return -out if a.kind == "X-" else out

    monkeypatch.setattr(H, "_atom_antipode", wrong)
    bad = [o.relation for o in check_hopf_axioms(PS) if not o.passed]
    assert "hopf.antipode-left.X-1" in bad and "hopf.antipode-right.X-1" in bad


def test_antipode_square_is_a_shift_and_stable():
    for ps in (PS, ParityStructure(2, 1)):
        for name, g in generators(ps):
            a, b = check_antipode_square(ps, name, g), check_antipode_square(ps, name, g)
            assert a.passed and a.detail == b.detail
    # for gl(1|1) psi and phi commute with X, so the shifts cancel completely
    assert check_antipode_square(PS, "X+1", gen(PS, "X+", 1)).detail == "(1)*[X+_1(z)]"
    assert check_antipode_square(PS, "X-1", gen(PS, "X-", 1)).detail == "(1)*[X-_1(z)]"


EXPECTED_CHAINS = [
    "T2.delta.anticommutator.X+X+.regrouped", "T2.delta.anticommutator.X+X+",
    "T2.delta.anticommutator.X-X-.regrouped", "T2.delta.anticommutator.X-X-",
    "T2.delta.k+2k-2", "T2.delta.k+2k-2.printed-middle", "T2.delta.k+1k-2", "T2.delta.k-1k+2",
    "T2.delta.psi-X+", "T2.delta.psi-X-", "T2.delta.phi-X+", "T2.delta.phi-X-",
    "T2.delta.X+X-", "T2.delta.X+X-.printed-penultimate", "T2.antipode.X+X-", "T2.antipode.X+X-.printed-final",
]


def test_gl11_chains():
    outs = check_homomorphism_gl11()
    assert [o.relation for o in outs] == EXPECTED_CHAINS
    assert all(o.passed for o in outs)


@pytest.mark.parametrize("seed", [1, 7, 2024])
def test_chains_confluent_under_random_rule_order(seed):
    assert [(o.relation, o.status) for o in check_homomorphism_gl11(seed)] == [
        (r, Status.PASS) for r in EXPECTED_CHAINS]


CARTAN = st.tuples(st.sampled_from(["k+", "k-", "psi", "phi"]), st.sampled_from([1, 2]),
                   st.sampled_from(["z", "w"]), st.sampled_from([1, -1]))


def _word(ps, letters):
    out = scalar(ps)
    for kind, i, v, p in letters:
        if kind in ("psi", "phi"):
            i = 1
        out = out * gen(ps, kind, i, v, p)
    return out


@given(st.lists(CARTAN, max_size=6), st.integers(0, 2 ** 32))
def test_normal_form_independent_of_rewrite_order(letters, seed):
    e = _word(PS, letters)
    rules = ("cancel", "cartan-sort", "psi-phi")
    assert Normalizer(PS, rules, seed).normalize(e) == Normalizer(PS, rules).normalize(e)


@given(st.lists(CARTAN, max_size=4), st.lists(CARTAN, max_size=4), st.booleans())
def test_counit_is_multiplicative(s1, s2, with_x):
    x, y = _word(PS, s1), _word(PS, s2)
    if with_x:
        y = y * gen(PS, "X-", 1, "w")
    assert counit(x * y) == counit(x) * counit(y)


@pytest.mark.parametrize("mn", [(1, 1), (2, 1)])
def test_parity_is_preserved(mn):
    ps = ParityStructure(*mn)
    for _, g in generators(ps):
        par = {sum(p) % 2 for p in g.parities()}
        assert {sum(p) % 2 for p in coproduct(g).parities()} <= par
        assert {p[0] for p in antipode(g).parities()} <= par


def test_rep_check_gl11_symbolic():
    outs = rep_homomorphism_check(PS, N=6)
    assert all(o.passed for o in outs), [o for o in outs if not o.passed]
    names = {o.relation for o in outs}
    assert {"pi.D3.X-X.anticommutator.X+1", "pi.D3.X-X.anticommutator.X-1"} <= names
    assert {"pi.pole-form.X+1", "pi.pole-form.X-1"} <= names


def test_rep_check_gl21_mirrors_single_point_result():
    outs = rep_homomorphism_check(ParityStructure(2, 1), N=6, values=SAMPLE)
    bad = [(o.relation, o.status) for o in outs if not o.passed]
    assert bad == [("pi.D3.X+X-.commutator.X+1.X-1", Status.MISMATCH)]
    assert any(o.relation.startswith("pi.D3.serre") for o in outs)


@pytest.mark.parametrize("mn", [(1, 1), (2, 1)])
def test_counit_degeneration(mn):
    outs = check_counit_degeneration(ParityStructure(*mn), N=6, values=SAMPLE)
    assert len(outs) == 2 * (sum(mn) - 1) + 2 * sum(mn)
    assert all(o.passed for o in outs)
