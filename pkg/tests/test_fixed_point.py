"""T fixed point on verified jets of the model examples, randomized over the families."""
from functools import lru_cache

from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from crjet.automorphisms import evaluate_system, verify_map
from crjet.hypersurface import normal_coordinates, parse_hypersurface
from crjet.jets import eta
from crjet.parametrization import Parametrization
from crjet.series import GaussianRational, SeriesTuple, TruncatedSeries

from conftest import engine, nf

# (a, b) for the targets Im w = a|z|^2 + Re(b z)|z|^2
PAIRS = [
    (mpq(2), (1, 0)), (mpq(1), (2, 0)), (mpq(3), (1, 1)), (mpq(1), (0, 1)),
    (mpq(1, 2), (3, 0)), (mpq(2), (1, -2)), (mpq(5, 2), (2, -3)), (mpq(1), (-1, 0)),
]


@lru_cache(maxsize=None)
def pair_engine(k):
    a, (br, bi) = PAIRS[k]
    text = f"Im w = {a.numerator}/{a.denominator}*|z|^2 + Re(({br}+{bi}*i)*z)*|z|^2"
    target = normal_coordinates(parse_hypersurface(text), D=8)
    return Parametrization(nf("m11.hyp"), target, 8)


def linear_map(c, d):
    Z = ("z", "w")
    return SeriesTuple((TruncatedSeries(Z, {(1, 0): c}), TruncatedSeries(Z, {(0, 1): d})))


def check_fixed_point(e, H):
    assert verify_map(H, e.source, e.target, e.D).verified
    j = eta(H, 2 * e.k0)
    assert evaluate_system(e, j).zero
    assert e.T(j.conj()) == j


nonzero_q = st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(lambda q: q != 0)


@settings(max_examples=1000, deadline=None)
@given(nonzero_q)
def test_T_fixes_cubic_dilations(t):
    t = GaussianRational(mpq(t.numerator, t.denominator))
    check_fixed_point(engine("cubic.hyp"), linear_map(t, t ** 3))


@settings(max_examples=1000, deadline=None)
@given(st.fractions(min_value=-20, max_value=20, max_denominator=20))
def test_T_fixes_quartic_rotations(s):
    # rational points of the unit circle
    s = mpq(s.numerator, s.denominator)
    u = GaussianRational(1 - s * s, 2 * s) / (1 + s * s)
    check_fixed_point(engine("quartic.hyp", D=10), linear_map(u, GaussianRational(1)))


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, len(PAIRS) - 1), st.sampled_from([1, -1]))
def test_T_fixes_model_equivalences(k, sign):
    a, (br, bi) = PAIRS[k]
    e = pair_engine(k)
    a = GaussianRational(a)
    b = GaussianRational(br, bi)
    c = a / b
    check_fixed_point(e, linear_map(c, a * c * c.conj()))
    if sign == -1:
        # the reflection of the quartic model is its only nontrivial automorphism
        check_fixed_point(engine("quartic_re.hyp"), linear_map(GaussianRational(-1), GaussianRational(1)))
