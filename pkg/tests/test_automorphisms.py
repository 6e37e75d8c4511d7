from gmpy2 import mpq
import pytest

from crjet.automorphisms import (
    FormalCheckError,
    OutOfChartError,
    evaluate_system,
    formal_to_convergent,
    lie_dim,
    lie_dim_sweep,
    reconstruct,
    required_normal_form,
    verify_map,
)
from crjet.dsl import parse_map, parse_point
from crjet.hypersurface import load_hypersurface
from crjet.jets import JetGroupElement, eta, jet_compose, jet_invert
from crjet.parametrization import fit
from crjet.series import GaussianRational, Precision

from conftest import data, engine, nf


def g(re, im=0):
    return GaussianRational(mpq(re), mpq(im))


def test_verify_dilations_of_cubic():
    M = nf("cubic.hyp")
    for text in ("(2z, 8w)", "(-z, -w)", "(1/3 z, 1/27 w)"):
        rep = verify_map(parse_map(text), M, M, 8, 4)
        assert rep.verified and rep.residual_degree is None
        assert rep.jet.k == 4 and rep.jet.in_G0
    bad = verify_map(parse_map("(i z, w)"), M, M, 8, 4)
    assert not bad.verified and bad.residual_degree == 3 and bad.jet is not None
    assert bad.to_json()["tangency_residual_degree"] == 3


def test_verify_reports_invertibility():
    M = nf("sphere.hyp")
    rep = verify_map(parse_map("(0, w)"), M, M, 6, 2)
    assert not rep.invertible and not rep.verified


def test_verify_quartic_models():
    M = nf("quartic_re.hyp")
    assert verify_map(parse_map("(-z, w)"), M, M, 8).verified
    rep = verify_map(parse_map("(i z, w)"), M, M, 8)
    assert not rep.verified and rep.residual_degree <= 4
    M4 = nf("quartic.hyp")
    assert verify_map(parse_map("((3+4i)/5 z, w)"), M4, M4, 10).verified
    assert not verify_map(parse_map("((3+4i)/5 z + z^2, w)"), M4, M4, 10).verified


def test_evaluate_identity_and_rotation():
    e = engine("quartic.hyp", D=10)
    assert evaluate_system(e, JetGroupElement.identity(1, 2)).zero
    rot = eta(parse_map("((3+4i)/5 z, w)"), 2)
    assert evaluate_system(e, rot).zero
    vals = dict(rot.values)
    vals[(0, (1, 1))] = vals[(0, (1, 1))] + 1
    rep = evaluate_system(e, JetGroupElement(1, 2, vals))
    assert not rep.zero and sum(rep.counts.values()) > 0


def test_out_of_chart():
    e = engine("sphere.hyp", D=6)
    vals = dict(JetGroupElement.identity(1, 2).values)
    vals[(0, (1, 0))] = g(0)
    with pytest.raises(OutOfChartError):
        evaluate_system(e, JetGroupElement(1, 2, vals))


@pytest.mark.parametrize("src,tgt,text", [
    ("quartic_re.hyp", None, "(-z, w)"),
    ("m11.hyp", "m21.hyp", "(2z, 8w)"),
    ("sphere.hyp", None, "(z, w)"),
])
def test_reconstruct_exact(src, tgt, text):
    e = engine(src, tgt)
    H = parse_map(text)
    K = reconstruct(e, eta(H, 2 * e.k0))
    assert all(fit(h, Precision(e.D)).equal_terms(k) for h, k in zip(H, K))


def test_reconstruct_refuses_non_members():
    e = engine("quartic_re.hyp")
    with pytest.raises(FormalCheckError):
        reconstruct(e, eta(parse_map("(i z, w)"), 2))


def test_reconstruct_from_symbolic_system():
    sp = engine("sphere.hyp", D=4)
    sym = sp.run(JetGroupElement.symbolic(sp.space))
    H = parse_map("(z + z w + z w^2 + z w^3, w + w^2 + w^3 + w^4)")
    K = reconstruct(sym, eta(H, 2))
    assert all(fit(h, Precision(4)).equal_terms(k) for h, k in zip(H, K))


@pytest.mark.parametrize("name,D,dim", [
    ("sphere.hyp", 6, 5),
    ("m11.hyp", 8, 0),
    ("quartic_re.hyp", 8, 0),
    ("cubic.hyp", 8, 1),
    ("quartic.hyp", 10, 1),
])
def test_lie_dim(name, D, dim):
    rep = lie_dim(engine(name, D=D))
    assert rep.dim_hol0 == dim
    assert rep.slots == 2 * len(engine(name, D=D).space)


def test_lie_dim_from_symbolic_system():
    sp = engine("sphere.hyp", D=4)
    assert lie_dim(sp.run(JetGroupElement.symbolic(sp.space))).dim_hol0 == 5


def test_sweeps():
    cubic = load_hypersurface(data("cubic.hyp"))
    reps = lie_dim_sweep(cubic, [parse_point("0, 0"), parse_point("1, i"), parse_point("1, 0")])
    assert [r.dim_hol0 for r in reps] == [1, 0, -1]
    assert reps[2].error and "does not lie on M" in reps[2].error
    sphere = load_hypersurface(data("sphere.hyp"))
    assert [r.dim_hol0 for r in lie_dim_sweep(sphere, [parse_point("0, 0"), parse_point("1, i")])] == [5, 5]
    quartic = load_hypersurface(data("quartic.hyp"))
    reps = lie_dim_sweep(quartic, [parse_point("0, 0"), parse_point("1/2, 5i/16")], D=10)
    assert [r.dim_hol0 for r in reps] == [1, 0]


def test_required_normal_form_is_exact_for_examples():
    assert required_normal_form(load_hypersurface(data("cubic.hyp")), parse_point("1, i"), 6).Q.prec.exact


def test_formal_check():
    e = engine("cubic.hyp")
    trunc = parse_map("(2z, 8w)")
    K = formal_to_convergent(trunc, e)
    assert all(h.equal_terms(k) for h, k in zip(trunc, K))
    with pytest.raises(FormalCheckError) as info:
        formal_to_convergent(parse_map("(2z + z^5, 8w)"), e)
    assert info.value.report is not None


def test_formal_check_sees_disagreement_beyond_the_jet():
    # tangent to order 4 only; the jet part is the identity
    sp = engine("sphere.hyp", D=6)
    with pytest.raises(FormalCheckError):
        formal_to_convergent(parse_map("(z + z^5, w)"), sp)


@pytest.mark.parametrize("name,D,texts", [
    ("quartic_re.hyp", 8, ["(-z, w)"]),
    ("cubic.hyp", 8, ["(2z, 8w)", "(-z, -w)", "(1/3 z, 1/27 w)"]),
    ("quartic.hyp", 10, ["((3+4i)/5 z, w)", "((5-12i)/13 z, w)"]),
])
def test_group_closure_on_jets(name, D, texts):
    e = engine(name, D=D)
    jets = [eta(parse_map(t), 2 * e.k0) for t in texts]
    for a in jets:
        assert evaluate_system(e, jet_invert(a)).zero
        for b in jets:
            assert evaluate_system(e, jet_compose(a, b)).zero
    if name == "quartic_re.hyp":
        sq = jet_compose(jets[0], jets[0])
        assert sq == JetGroupElement.identity(1, 2)
        assert evaluate_system(e, sq).zero
