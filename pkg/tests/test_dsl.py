from gmpy2 import mpq
import pytest

from crjet.dsl import Coords, ParseError, parse_equation, parse_expression, parse_map, parse_point
from crjet.hypersurface import HypersurfaceError, parse_hypersurface
from crjet.series import GaussianRational, TruncatedSeries

C1 = Coords(1)
HALF_I = GaussianRational(0, mpq(1, 2))


def rho_of(terms):
    return TruncatedSeries(C1.all, terms)


def test_sphere_rho():
    rho = parse_hypersurface("Im w = |z|^2").rho
    assert rho == rho_of({(0, 1, 0, 0): -HALF_I, (0, 0, 0, 1): HALF_I, (1, 0, 1, 0): -1})


def test_cubic_rho():
    # (w - tau)/(2i) - (z + chi)/2 * z chi
    rho = parse_hypersurface("Im w = Re(z)*|z|^2").rho
    half = mpq(-1, 2)
    assert rho == rho_of({(0, 1, 0, 0): -HALF_I, (0, 0, 0, 1): HALF_I,
                          (2, 0, 1, 0): half, (1, 0, 2, 0): half})


def test_quartic_rho():
    rho = parse_hypersurface("Im w = |z|^2 + |z|^4").rho
    assert rho == rho_of({(0, 1, 0, 0): -HALF_I, (0, 0, 0, 1): HALF_I, (1, 0, 1, 0): -1, (2, 0, 2, 0): -1})


def test_rho_form_and_conj():
    a, _ = parse_equation("rho = (w - conj(w))/(2*i) - z*conj(z)")
    b, _ = parse_equation("Im w = |z|^2")
    assert a == b


def test_two_variables_detected():
    rho, c = parse_equation("Im w = |z1|^2 - |z2|^2")
    assert c.n == 2 and c.zs == ("z1", "z2")
    assert rho.vars == ("z1", "z2", "w", "chi1", "chi2", "tau")


def test_non_real_equation_rejected():
    with pytest.raises(HypersurfaceError):
        parse_hypersurface("Im w = z")
    with pytest.raises(HypersurfaceError):
        parse_hypersurface("Im w = i*|z|^2")


@pytest.mark.parametrize("text", ["Im w = |z|^2 +", "Im w = q", "Im w |z|^2", "Im w = (z"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_hypersurface(text)


def test_literals():
    e = parse_expression("3/4 - 2i/5 * z^2", C1)
    assert e.coeff((0, 0, 0, 0)) == GaussianRational(mpq(3, 4))
    assert e.coeff((2, 0, 0, 0)) == GaussianRational(0, mpq(-2, 5))


def test_map_and_point():
    H = parse_map("(2z, 8w)")
    assert len(H) == 2 and H[0].vars == ("z", "w")
    assert H[1].coeff((0, 1)) == GaussianRational(8)
    with pytest.raises(ParseError):
        parse_map("(z, conj(w))")
    with pytest.raises(ParseError):
        parse_map("2z, 8w")
    assert parse_point("1/2, 5i/16") == (GaussianRational(mpq(1, 2)), GaussianRational(0, mpq(5, 16)))
    with pytest.raises(ParseError):
        parse_point("z, 0")
