"""Bell-inequality certification of imperfect quantum cloning."""
from .bell import (
    DeterministicStrategy,
    InequalitySpec,
    chsh_spec,
    even_spec,
    lhv_max,
    lhv_value,
    odd_spec,
    quantum_value,
)
from .certify import (
    InequalityKind,
    ViolationReport,
    certify_no_cloning,
    chsh_max,
    chsh_value,
    fig1_surface,
    optimize_violation,
    theorem1_settings,
    theorem1_threshold,
    theorem1_value,
    theorem2_settings,
    theorem2_threshold,
    theorem2_value,
)
from .correlators import (
    NO_MEASUREMENT,
    Direction,
    SettingTable,
    correlation_closed_form,
    correlation_oracle,
    observable_from_direction,
)
from .kernels import BACKEND_NAME
from .qstate import (
    CapacityError,
    CatParams,
    DensityMatrix,
    NoisyCloneSpec,
    StateVector,
    apply_clone_map,
    bloch_vector,
    colored_noise_density,
    make_cat_state,
    materialize_density,
    tensor_power,
    trace_distance,
)

__version__ = "0.1.0"
