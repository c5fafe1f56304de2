"""qsynth: exact-arithmetic single-qubit synthesis over Clifford+T and Clifford+V_p.

Exact synthesis via canonical forms, optimal ε-approximation G-counts,
optimal probabilistic (mixed-unitary) synthesis, and scaling experiments.
"""

from .approx import BudgetExhausted, best_at_level, gcount_approx
from .exact_synth import (
    NotUnitaryError,
    TUnitary,
    VUnitary,
    exact_overlap,
    recognize_t,
    recognize_v,
    t_count,
    v_count,
)
from .gates import (
    GateSequence,
    GateSet,
    clifford_channels,
    evaluate,
    ma_normal_form,
    parse_sequence,
    v_synthesize,
    vp_representatives,
)
from .lattice import (
    PointDatabase,
    build_db,
    covering_radius,
    enumerate_sz,
    enumerate_szroot2,
    query_nearest,
    uncovered_fraction,
)
from .prob_synth import MixedChannel, diamond_mixed, optimize_mixture, prob_gcount
from .rings import (
    Denominated,
    QRoot2,
    ZI,
    ZOmega,
    ZRoot2,
    embed,
    galois_conj,
    height,
    lde,
)
from .su2 import (
    QuaternionPoint,
    UnitaryChannel,
    channel_from_point,
    compose,
    diamond_distance,
    haar_sample,
    inverse,
    rz,
)

__version__ = "0.1.0"
