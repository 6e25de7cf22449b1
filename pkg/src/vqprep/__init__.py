"""Variational preparation of entangled states on a dense statevector simulator."""

__version__ = "0.1.0"

from .statevector import (  # noqa: F401
    CapacityError,
    ProbabilityVector,
    ShotCounts,
    StateVector,
    ValidationError,
    apply_controlled_rotation,
    apply_hadamard,
    apply_multi_controlled_z,
    apply_single_qubit_rotation,
    fidelity,
    inner_product,
    new_zero_state,
    probabilities,
    sample_counts,
)
from .circuits import (  # noqa: F401
    BoundCircuit,
    Circuit,
    GateSpec,
    adjoint,
    bind,
    dag_depth,
    dense_unitary,
    execute,
)
from .ansatz import (  # noqa: F401
    AnsatzConfig,
    AnsatzKind,
    build_ansatz,
    expected_parameter_count,
    graph_state_reference,
    table1_depth,
)
from .targets import (  # noqa: F401
    TargetState,
    TargetUnitary,
    ame3_state,
    completed_unitary,
    ghz_circuit,
    ghz_state,
    w_state,
)
from .cost import (  # noqa: F401
    CostContext,
    EvaluationMode,
    cost,
    fubini_study_metric,
    gradient,
    gradient_variance,
    overlap_probability,
)
from .noise import (  # noqa: F401
    CalibrationMatrix,
    MitigationError,
    ReadoutNoiseModel,
    apply_readout_noise,
    build_calibration_matrix,
    mitigate,
)
from .optimizers import AdamConfig, AdamState, QngConfig, TrainingTrace, adam_step, qng_step, train  # noqa: F401
