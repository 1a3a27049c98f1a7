"""Entanglement entropy from full counting statistics of a switched point contact."""

from .entropy import (
    EntropyEstimate,
    entropy_from_cumulants,
    entropy_gaussian,
    series_convergence_report,
)
from .errors import ConfigError, DataIntegrityError, DomainError, NumericalError
from .models import (
    BernoulliSet,
    Gaussian,
    ImperfectTransmission,
    lambda_star,
    log_chi,
    model_cumulants,
)
from .schedule import (
    PulseTrain,
    SwitchingSchedule,
    c2_from_schedule,
    effective_temperature,
    entropy_rate,
    g_factor,
    noise_power,
    pulse_train_c2,
)
from .series import (
    BernoulliTable,
    CountingStatistics,
    FormalSeries,
    alpha_closed_form,
    alpha_via_integral,
    bernoulli,
    binary_entropy,
    cumulants_from_log_series,
)
from .spectral import (
    SpectralMeasure,
    entropy_from_measure,
    mu_from_chi,
    mu_imperfect,
    rescaling_factor,
    support_edges,
)

__version__ = "0.1.0"
