"""Octahedron recurrence: packings, tetrahedron excavation, and the lozenge-tiling form."""

from .excavation import (
    TetrahedronField,
    excavate,
    excavate_field,
    inverse_excavate,
    inverse_excavate_field,
)
from .packing import (
    ConsistencyError,
    PackedPair,
    SquareFunction,
    default_gap_constant,
    dumps_square,
    loads_square,
    gt_pair_to_square,
    pack_lower,
    pack_upper,
    staircase_gamma,
    unpack_lower,
    unpack_to_augmented,
    unpack_upper,
)
from .tilings import (
    BORDER_SIGN,
    BorderTriangle,
    EnumerationOverflow,
    Hexagon,
    Lozenge,
    LozengeTiling,
    build_hexagon,
    calibrate_border_sign,
    enumerate_tilings,
    is_valid_tiling,
    speyer_square,
    speyer_value,
    standard_tiling,
    tiling_coefficients,
    tiling_functionals,
    tiling_weight,
    tiling_weight_alt,
)


def oct_map(g1, g2, G: float | None = None, tol: float | None = None):
    """GT pair -> augmented hive: pack, excavate, unpack."""
    packed = gt_pair_to_square(g1, g2, G)
    return unpack_to_augmented(excavate(packed.square), packed.sum_gamma, tol)
