"""Link-level simulator for multi-LED visible-light links with an
eavesdropper: Lambertian channel geometry, amplitude-constrained M-PAM,
secrecy metrics by numerical quadrature, and a tabular Q-learning
controller that jointly adapts the modulation order and the precoder."""

from .experiment import (
    Adaptive,
    FixedBoth,
    FixedOrder,
    MetricsEngine,
    RunConfig,
    Scenario,
    TimeSlotLog,
    run_baseline,
    run_episode,
    summarize,
)
from .geometry import Luminaire, Receiver, Vec3, channel_vector, los_gain
from .metrics import (
    MetricRecord,
    QuadratureConfig,
    UtilityWeights,
    mutual_information,
    pam_ber,
    secrecy_capacity,
    utility,
)
from .pam import DriveParams, PamConstellation, build_constellation, effective_gain
from .qlearn import (
    Action,
    ActionSpace,
    BinsConfig,
    LearnerConfig,
    QTable,
    StateKey,
    enumerate_actions,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ActionSpace",
    "Adaptive",
    "BinsConfig",
    "DriveParams",
    "FixedBoth",
    "FixedOrder",
    "LearnerConfig",
    "Luminaire",
    "MetricRecord",
    "MetricsEngine",
    "PamConstellation",
    "QTable",
    "QuadratureConfig",
    "Receiver",
    "RunConfig",
    "Scenario",
    "StateKey",
    "TimeSlotLog",
    "UtilityWeights",
    "Vec3",
    "build_constellation",
    "channel_vector",
    "effective_gain",
    "enumerate_actions",
    "los_gain",
    "mutual_information",
    "pam_ber",
    "run_baseline",
    "run_episode",
    "secrecy_capacity",
    "summarize",
    "utility",
    "__version__",
]
