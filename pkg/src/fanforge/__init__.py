"""fanforge: exact-arithmetic canonical desingularization of conical complexes."""

from .cones import Cone, SingRegSplit
from .complexes import (CCone, ComplexMap, ConicalComplex, StarCenter,
                        complex_from_doc, complex_to_doc, fan_complex,
                        single_cone_complex)
from .marking import Marking, MarkedComplex
from .relative import RelativeComplex, resolve_relative
from .resolve import SubdivisionTrace, det_polynomial, push_trace, resolve

__version__ = "0.1.0"

__all__ = [
    "CCone", "ComplexMap", "Cone", "ConicalComplex", "Marking",
    "MarkedComplex", "RelativeComplex", "SingRegSplit", "StarCenter",
    "SubdivisionTrace", "complex_from_doc", "complex_to_doc",
    "det_polynomial", "fan_complex", "push_trace", "resolve",
    "resolve_relative", "single_cone_complex",
]
