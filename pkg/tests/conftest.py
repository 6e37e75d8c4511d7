import os
from functools import lru_cache

from crjet.hypersurface import load_hypersurface, normal_coordinates
from crjet.parametrization import Parametrization

DATA = os.path.join(os.path.dirname(__file__), "data")


def data(name):
    return os.path.join(DATA, name)


@lru_cache(maxsize=None)
def nf(name, point=None, D=8):
    return normal_coordinates(load_hypersurface(data(name)), point, D=D)


@lru_cache(maxsize=None)
def engine(source, target=None, D=8):
    return Parametrization(nf(source, D=D), nf(target or source, D=D), D)
