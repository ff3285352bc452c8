"""Exact-arithmetic tools for the Cayley-Bacharach condition on point sets and fibers."""

from .fields import GF, QQ, ExtensionField, PrimeField, RationalField, field_from_spec
from .projective import HomogeneousForm, PointSet, ProjectivePoint
from .cb import CbReport, cb_check, cb_check_oracle, cb_check_orbits, max_cb_degree

__version__ = "0.1.0"
SCHEMA = "cbkit/1"
