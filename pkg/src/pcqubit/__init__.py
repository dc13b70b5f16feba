"""Continuous measurement of a double-dot qubit by a point-contact detector."""
from .core import (DerivedRates, QubitState, RabiFrequency, SystemParams, derive_rates,
                   rabi_frequency, rates_from_microscopic)
from .errors import (AliasingError, BracketMissError, ConfigError, DegenerateQubitError,
                     PhysicsError, StepSizeUnderflow, TruncationError)
from .ladder import (CountingDistribution, LadderTrajectory, NumberLadder, choose_n_max,
                     counting_field_distribution, electron_distribution, evolve_ladder)
from .limit import (ErrorCurve, PrecisionLimit, backaction_error, closed_form_weak,
                    closed_form_zeno, error_curve, optimize_measurement_time,
                    single_run_visibility, total_error_sq)
from .moments import (MomentState, MomentTrajectory, current_dispersion, evolve_moments,
                      mean_and_variance)
from .reduced import (QubitTrajectory, average_current, evolve_reduced, sigma11_aligned_closed,
                      zeno_sigma11)

__version__ = "0.1.0"
