from crjet.automorphisms import lie_dim

from conftest import engine
from oracle import isotropy_dimension


def test_oracle_sphere_has_five():
    assert isotropy_dimension(lambda z, zb: z * zb) == 5


def test_oracle_quartic_has_rotations_only():
    assert isotropy_dimension(lambda z, zb: z * zb + (z * zb) ** 2) == 1


def test_lie_dim_agrees_with_oracle_on_sphere():
    assert lie_dim(engine("sphere.hyp", D=6)).dim_hol0 == isotropy_dimension(lambda z, zb: z * zb)
