"""Majorization, entropy, and entropy-preserving quantum channels at finite dimension."""

__version__ = "0.1.0"

from .seqmaj import (
    MajorizationVerdict,
    PrefixViolation,
    ProbVector,
    is_majorized,
    random_majorized_pair,
    shannon_entropy,
    sort_desc,
    tail_group,
)
from .xfer import (
    BirkhoffDecomposition,
    DoublyStochasticMatrix,
    OrthogonalMatrix,
    TransferChain,
    TTransform,
    apply_t_transform,
    birkhoff_decompose,
    chain_to_doubly_stochastic,
    find_transfer_chain,
    orthostochastic_of,
    schur_horn_orthogonal,
)
from .densop import (
    DensityMatrix,
    SpectralDecomposition,
    eig_hermitian,
    haar_unitary,
    ky_fan_sum,
    l1_equivalent,
    pure_state,
    random_density,
    spectrum,
    state_majorized,
    trace_distance,
    von_neumann_entropy,
)
from .qchan import (
    EntropyProbeResult,
    FixedPointReport,
    IsometryReport,
    KrausChannel,
    MixedUnitaryTransfer,
    PinchRow,
    StructureReport,
    adjoint_apply,
    apply_channel,
    apply_raw,
    choi_matrix,
    choi_of_linear_map,
    compose_channels,
    depolarizing_channel,
    detect_isometry,
    entropy_probe,
    fixed_point_commutant_check,
    identity_channel,
    mixed_unitary_channel,
    mixed_unitary_uhlmann,
    phase_averaging_channel,
    pinch_convergence_experiment,
    pinching_channel,
    random_bistochastic_channel,
    random_isometric_conjugation_channel,
    random_isometry,
    structure_checks,
    uhlmann_channel,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    MajorizationFailed,
    MatchingFailed,
    NotDoublyStochastic,
    NotHermitian,
    NotOrthogonal,
    NotTracePreserving,
    NotUnitary,
    NotUnitVector,
    SchemaError,
)
