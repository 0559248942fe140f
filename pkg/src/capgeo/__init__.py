"""Capacity geometry: simplices, quasigroup distortions, modified braids, toric counts."""
from .errors import CapgeoError, DomainError, InputError
from .magma import Leaf, Node, TMap, Translation, distort, format_word, parse_word, to_dyck, from_dyck
from .mpab import BraidCombination, ModifiedBraid, compose, embed_pab, inverse
from .quasigroup import LatinSquare, code_point, read_latin
from .simplex import FinDist, ProjPoint, check_algebra, flatten, hypercube_diagram, pushforward, segre, unit
from .toric import (
    CountSpec,
    ExponentialFamily,
    ProductOfP1,
    ProjectiveSpace,
    count_points,
    kernel_lattice,
    manin_fit,
)

__version__ = "0.1.0"
