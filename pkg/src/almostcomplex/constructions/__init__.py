"""Explicit almost complex structures and their pseudo-holomorphic submanifolds."""

from .octonion import (
    CP1Report, Octonion, StereographicStructure, cp1_in_s6, fibonacci_sphere, left_mul_matrix,
    multiplication_table, octonion_mul, s6_acs, stereographic_pushforward, structure_constants, table_csv,
)
from .quaternion import J1, J2, J3, FrameExperiment, conjugating_frame, quaternion_frame_experiment
from .torus import (
    TauSpec, angle_chart, base_coframe_4n, build_j_lambda, jlambda_pullback_errors, product_torus,
    torus_coframe, torus_embedding, torus_f,
)

__all__ = [
    "CP1Report", "Octonion", "StereographicStructure", "cp1_in_s6", "fibonacci_sphere", "left_mul_matrix",
    "multiplication_table", "octonion_mul", "s6_acs", "stereographic_pushforward", "structure_constants",
    "table_csv", "J1", "J2", "J3", "FrameExperiment", "conjugating_frame", "quaternion_frame_experiment",
    "TauSpec", "angle_chart", "base_coframe_4n", "build_j_lambda", "jlambda_pullback_errors",
    "product_torus", "torus_coframe", "torus_embedding", "torus_f",
]
