"""Truncated power series over exact coefficient rings."""
from .algorithms import (
    Division,
    MeromorphicElement,
    linear_change,
    regularize,
    solve_implicit,
    solve_matrix,
    weierstrass_divide,
    z1_order,
)
from .core import (
    EXACT,
    Precision,
    PrecisionError,
    SeriesError,
    SeriesTuple,
    TruncatedSeries,
    conjugate_series,
    format_series,
    invert_unit,
    mul_trunc,
    relabel_series,
    substitute,
    taylor_derivative,
)
from .rings import (
    DUAL,
    DUAL_RING,
    I,
    NUMERIC,
    NUMERIC_RING,
    ONE,
    SYMBOLIC,
    ZERO,
    Dual,
    GaussianRational,
    RingError,
    Symbolic,
    SymbolicRing,
    gaussian,
)

__all__ = [name for name in dir() if not name.startswith("_")]
