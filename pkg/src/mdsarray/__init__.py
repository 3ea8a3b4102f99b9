"""MDS array codes with optimal repair/access for multiple repair degrees."""

from .arraycode import ArrayCode
from .backend import backend_name
from .gf import Field, build_field
from .linalg import MatrixGF
from .transform import DegreeSet, build_part_schedule, lift_code, upgrade_all_nodes
from .vbk import build_vbk

__version__ = "0.1.0"

__all__ = [
    "ArrayCode",
    "DegreeSet",
    "Field",
    "MatrixGF",
    "backend_name",
    "build_field",
    "build_part_schedule",
    "build_vbk",
    "lift_code",
    "upgrade_all_nodes",
    "__version__",
]
