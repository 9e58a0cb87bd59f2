"""renewalspec: second-order theory, exact simulation and inference for
renewal-sampled continuous-time long-memory Gaussian processes."""

from .quadrature import (Integrand, QuadratureResult, QuadratureError,
                         IntegrandEvaluationError, QuadratureConvergenceError,
                         integrate_semiaxis, integrate_symmetric)
from .spectral_models import (SpectralModel, CovarianceDecomposition,
                              covariance_tail_constant, exponential_model,
                              rational_model, model_from_config, MODEL_NAMES,
                              CovarianceTable, covariance_table,
                              VarianceEstimate, var_sigma_x_at_poisson_times)
from .sampling import (SamplingScheme, TimeGrid, exponential_scheme,
                       gamma_scheme, deterministic_scheme, sample_grid,
                       scheme_from_config, SCHEME_KINDS)
from .sampled_spectrum import SampledSpectrum, LimitConstants, limit_constants
from .simulate import (PathBatch, FactorizationError, conditional_covariance,
                       factor_covariance, simulate_batch, simulate_mean_statistic)
from .periodogram import (PeriodogramFrame, TrigComponents, periodogram,
                          RatioMomentsResult, ratio_moments)
from .estimators import (WhittleFit, LongRunVarianceEstimate,
                         sample_autocovariance, whittle_loss, whittle_fit,
                         long_run_variance)
from .cumulants import (CumulantEstimate, BoxSumEstimate, cumulant4,
                        cumulant_double_sum, cumulant_triple_sum,
                        path_moment_cumulant4)
from .montecarlo import derive_rng, run_replicates

__version__ = "0.1.0"
