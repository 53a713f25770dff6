"""Symplectic-quadrangle incidence systems as LDPC codes."""

from lu3q.fields import GF, build_field, field_for_order
from lu3q.formulas import predict, predict_even, predict_odd
from lu3q.geometry import Quadrangle, enumerate_quadrangle
from lu3q.gf2 import BitMatrix, Subspace, nullspace, rank2
from lu3q.incidence import build_incidence, build_kim_matrix
from lu3q.ldpc import ChannelSpec, LdpcCode, simulate

__all__ = [
    "GF",
    "BitMatrix",
    "ChannelSpec",
    "LdpcCode",
    "Quadrangle",
    "Subspace",
    "build_field",
    "build_incidence",
    "build_kim_matrix",
    "enumerate_quadrangle",
    "field_for_order",
    "nullspace",
    "predict",
    "predict_even",
    "predict_odd",
    "rank2",
    "simulate",
]
__version__ = "0.1.0"
