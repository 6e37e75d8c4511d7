from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from crjet.dsl import Coords
from crjet.hypersurface import (
    HypersurfaceError,
    involution_residual,
    nondegeneracy,
    normal_coordinates,
    parse_hypersurface,
    recenter,
)
from crjet.series import GaussianRational, Precision, TruncatedSeries, conjugate_series, substitute

from conftest import data, nf

QV = Coords(1).Q_vars


def Q_of(terms):
    return TruncatedSeries(QV, terms)


def g(re, im=0):
    return GaussianRational(mpq(re), mpq(im))


def test_sphere_normal_form():
    Q = nf("sphere.hyp").Q
    assert Q.prec.exact
    assert Q == Q_of({(0, 0, 1): 1, (1, 1, 0): g(0, 2)})


def test_cubic_normal_form():
    Q = nf("cubic.hyp").Q
    assert Q == Q_of({(0, 0, 1): 1, (2, 1, 0): g(0, 1), (1, 2, 0): g(0, 1)})


def test_nondegeneracy_orders():
    assert nondegeneracy(nf("sphere.hyp")).k0 == 1
    rep = nondegeneracy(nf("cubic.hyp"))
    assert rep.k0 == 2 and rep.witness == ((2,),)
    at = normal_coordinates(parse_hypersurface(open(data("cubic.hyp")).read()), (g(1), g(0, 1)))
    assert nondegeneracy(at).k0 == 1


def test_degenerate_report():
    # a Levi-flat hyperplane
    rep = nondegeneracy(normal_coordinates(parse_hypersurface("Im w = 0"), D=5))
    assert rep.degenerate and rep.to_json()["k0"] == "degenerate-to-order-4"
    with pytest.raises(ValueError):
        nondegeneracy(nf("sphere.hyp"), k_max=9)


def test_two_variable_levi_form():
    Nf = normal_coordinates(parse_hypersurface("Im w = |z1|^2 - |z2|^2"), D=4)
    rep = nondegeneracy(Nf)
    assert rep.k0 == 1 and rep.witness == ((0, 1), (1, 0))


def test_recenter_and_point_checks():
    df = parse_hypersurface("Im w = |z|^2")
    assert recenter(df, (g(0), g(0))) is df
    with pytest.raises(HypersurfaceError):
        recenter(df, (g(1), g(0)))
    with pytest.raises(HypersurfaceError):
        normal_coordinates(df, (g(1), g(0, 2)))


def test_half_point_of_quartic():
    # p = (1/2, 5i/16) lies on Im w = |z|^2 + |z|^4; its normal form is the model M_{1/2}
    at = nf("quartic.hyp", (g(mpq(1, 2)), g(0, mpq(5, 16))))
    assert at.Q.prec.exact
    assert at.Q == nf("m_half.hyp").Q


def test_sphere_points_stay_levi_nondegenerate():
    df = parse_hypersurface("Im w = |z|^2")
    for z in (g(1), g(2, -3), g(mpq(1, 3), 1)):
        Nf = normal_coordinates(df, (z, g(mpq(7, 5), z.norm2())), D=5)
        assert nondegeneracy(Nf).k0 == 1


def back_substitution(Nf, df, point):
    """rho(p + orig(z, Q), conj) restricted to w = Q(z, chi, tau) over the Q variables."""
    c = Nf.coords
    prec = Nf.Q.prec if not Nf.Q.prec.exact else Precision(Nf.degree)
    base = recenter(df, point).rho
    assign = {v: TruncatedSeries.variable(QV, v, prec) for v in ("z", "chi", "tau")}
    assign["w"] = Nf.Q.relabel_precision(prec) if Nf.Q.prec.exact else Nf.Q
    img = {}
    for name, f in zip(c.Z, Nf.to_original):
        fx = f if not f.prec.exact else f.relabel_precision(prec)
        img[name] = substitute(fx, {v: assign[v] for v in c.Z}, QV, prec)
        fb = conjugate_series(fx, {"z": "chi", "w": "tau"}, ("chi", "tau"))
        img[{"z": "chi", "w": "tau"}[name]] = fb.rebase(QV, prec)
    return substitute(base, img, QV, prec)


small = st.integers(-3, 3)


@settings(max_examples=1000, deadline=None)
@given(small, small, small, small, small, small, small, st.integers(-2, 2), st.integers(-2, 2), small)
def test_normal_form_identities(a, b1, b2, c, d, e, f, zr, zi, s):
    # Im w = F(z, zbar, Re w) so that on-M points are explicit
    F = (f"{a}*|z|^2 + Re(({b1}+{b2}*i)*z)*|z|^2 + {c}*|z|^4"
         f" + {d}*Re(z^2)*Re(w) + {e}*Re(w)^2 + {f}*Re(z)*Re(w)")
    df = parse_hypersurface("Im w = " + F)
    z = g(zr, zi)
    sw = mpq(s, 2)
    zz, re2 = z.norm2(), (z * z).re
    imw = a * zz + (g(b1, b2) * z).re * zz + c * zz * zz + d * re2 * sw + e * sw * sw + f * z.re * sw
    point = (z, g(sw, imw))
    Nf = normal_coordinates(df, point, D=6)
    # normal_coordinates raises if the checks fail; assert them anyway
    assert Nf.check() == {"normal_chi": True, "normal_z": True, "involution": True}
    assert involution_residual(Nf).is_zero()
    assert back_substitution(Nf, df, point).is_zero()
    # the coordinate change fixes the base point and is a local diffeomorphism
    orig = Nf.to_original
    assert all(not h.constant_term() for h in orig)
    assert orig[0].coeff((1, 0)) and orig[1].coeff((0, 1))
