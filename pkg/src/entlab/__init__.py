"""Entanglement measures, unilocal channels and entanglement-induced state
ordering for small multi-qubit systems."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .channels import (
    KrausChannel,
    apply,
    choi,
    depolarizing,
    identity_channel,
    is_entanglement_breaking,
    selective_check_channel,
    unilocal,
    unitary_channel,
    validate_cptp,
)
from .dynamics import channel_at, trajectory, tsep_analytic, tsep_numeric
from .measures import (
    MeasureKind,
    concurrence,
    delta_measure,
    eof,
    linear_entropy,
    negativity,
    pure_entanglement,
    tangle,
    von_neumann_entropy,
)
from .ordering import (
    find_violation,
    four_qubit_counterexample,
    max_entangled_equivalence,
    scan_diagram,
)
from .states import (
    DensityMatrix,
    PureState,
    ghz,
    max_entangled,
    p_plus,
    random_density,
    random_pure,
    schmidt_pure,
    werner,
)
