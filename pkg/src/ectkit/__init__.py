"""Exact Euler characteristic and Euler-Radon transforms of PL and cubical shapes."""
from .curves import CurveError, PiecewiseLinearCurve, StepCurve
from .euler import IntervalQuery, chi_preimage, euler_integral, total_chi
from .geometry import (CellConstFunction, CubicalComplex, GeometryError, PLFunction,
                       SimplicialComplex, build_cubical_complex, build_simplicial_complex,
                       sample_directions)
from .homology import betti_curve, betti_numbers, sublevel_subcomplex
from .transforms import (TransformBundle, ect_constructible, ect_shape, ert,
                         euler_integral_fc, invert_sect, invert_sert, lect, sect,
                         select, sert, transform_bundle)

__version__ = "0.1.0"
