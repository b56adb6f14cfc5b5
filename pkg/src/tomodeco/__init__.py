"""Decoherence from universal tomographic measurements on an N-level system."""

__version__ = "0.1.0"

from .su_algebra import (  # noqa: E402
    DimensionError,
    GeneratorSet,
    StructureConstants,
    completeness_map,
    generate_su_generators,
    structure_constants,
)
from .states import (  # noqa: E402
    InvalidStateError,
    MCEstimate,
    bloch_decode,
    bloch_encode,
    fs_integrate,
    haar_sample,
    haar_samples,
    husimi,
    min_husimi,
    random_density_matrix,
)
from .channel import (  # noqa: E402
    ChannelIterate,
    sample_outcome,
    sample_outcomes,
    tomographic_iterate,
    tomographic_step,
    tomographic_step_mc,
)
from .quasiprob import QuasiprobSpec, evaluate_w, min_w, sw_kernel, w_after_k_steps, w_min_formula  # noqa: E402
from .lindblad import (  # noqa: E402
    LindbladParams,
    Trajectory,
    evolve_closed_form,
    evolve_rk4,
    evolve_w,
    interpolation_time,
    lindblad_rhs_full,
    lindblad_rhs_reduced,
)
from .classicality import (  # noqa: E402
    FigureTable,
    ThresholdResult,
    bisect_classicality_time,
    figure1a_data,
    figure1b_data,
    k_star,
    sigma_eff,
    t_star,
)
