"""Triangle-map continued fractions and the partition function Z_N(alpha, beta, s)."""

from .classify import (
    DiophantineFit,
    DivergenceReport,
    Theorem2Report,
    diophantine_check,
    fibonacci,
    fibonacci_bound,
    theorem1_witness,
    theorem2_experiment,
)
from .construct import Enclosure, Theorem1Config, pair_from_digits, refine, theorem1_digits
from .convergents import (
    ConvergentTable,
    c_vectors,
    convergent_table,
    d_values,
    digits_from_d,
    lemma_bound,
    nested_triangle,
    word_column_identity,
    x_vectors,
)
from .errors import (
    DegenerateTriangle,
    DepthOverflow,
    ExactZero,
    OutOfDomain,
    Pole,
    PrecisionExhausted,
    Terminated,
    TriThermoError,
    ZeroLeadCoordinate,
    ZeroX,
)
from .linalg import (
    IntMat3,
    IntVec3,
    RationalPoint2,
    farey_sum,
    generator,
    hat,
    hs_product,
    projective_triangle_area,
    word_product,
)
from .pairs import DigitPair, Interval, RationalPair, RealPair, cubic_fixed_point, parse_pair
from .partition import FreeEnergyTrace, PartitionResult, distinguished_term, free_energy_trace, z_value
from .trimap import DigitSequence, apply_T, orbit, sector_index, triangle_sequence

__version__ = "0.1.0"
