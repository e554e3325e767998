"""Continuous-time birth-death-mutation MCMC for trans-dimensional inference.

The compiled extension carries the sampler; this package re-exports its
surface.
"""

try:
    from . import _samsara as _impl
except ImportError:  # in-tree builds put the extension directly on sys.path
    import _samsara as _impl

__all__ = [
    "AnalyticTargetConfig",
    "ChainStore",
    "SamsaraError",
    "acf",
    "correlation_length",
    "empirical_cmf",
    "generate_benchmark",
    "log_poisson_pmf",
    "lorentzian_template",
    "mc_test_w",
    "memory_estimates",
    "mutation_acceptance",
    "number_posterior",
    "pairwise_u",
    "psrf",
    "rb_estimate",
    "run_ini",
    "sine_template",
    "split_mutation_rates",
    "z_factor_gmm",
]

for _name in __all__:
    globals()[_name] = getattr(_impl, _name)
del _name, _impl
