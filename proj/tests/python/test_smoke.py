"""Smoke tests for the python bindings."""

import math

import pytest

import samsara

CONFIG = """
[run]
n_gen = 3000
seed = 5

[target]
kind = analytic
nbar = 5.0

[species.theta]
params = t1, t2
bounds_t1 = -5, 4
bounds_t2 = -8, 4
sigma = 0.05, 0.05
rates = fixed_birth:1.0
"""


def test_templates_and_densities():
    assert samsara.sine_template(0.0, [0.3, -5.0, -9.0, 0.0]) == pytest.approx(math.exp(0.3))
    assert samsara.lorentzian_template(2500.0, [1e-21, 500.0, 2000.0]) == pytest.approx(0.5e-21)
    cfg = samsara.AnalyticTargetConfig.reference(5.0)
    assert cfg.log_mixture_density(-3.0, 0.0) > cfg.log_mixture_density(3.0, -7.0)


def test_rate_primitives():
    assert samsara.mutation_acceptance(-10.0, -10.0, 0.0, 0.0) == 1.0
    assert samsara.split_mutation_rates(0.25, 1.0) == (0.25, 0.75)
    assert samsara.z_factor_gmm(1, 0.5) == pytest.approx(1.0)
    assert samsara.z_factor_gmm(0, 0.9) == 1.0


def test_diagnostics_surface():
    assert samsara.acf([1.0, -1.0, 1.0, -1.0], 1) == pytest.approx(-1.0)
    length, truncated = samsara.correlation_length([1.0, -1.0] * 32)
    assert length == 5 and not truncated
    assert samsara.empirical_cmf([0.1, 0.2, 0.3], 0.2) == pytest.approx(2.0 / 3.0)
    x = [[[0.0, 1.0, 2.0]], [[0.0, 1.0, 2.0]]]
    assert samsara.pairwise_u(x) == 0.0
    max_psrf, per_ref = samsara.psrf(x)
    assert max_psrf == pytest.approx(math.sqrt(2.0 / 3.0))
    assert len(per_ref) == 1


def test_memory_estimates():
    full, opt = samsara.memory_estimates(1e8, [1e3], [10.0], 0.5)
    assert full == pytest.approx(8e12)
    assert opt == pytest.approx(1e8 * 0.5 * 26.0)


def test_run_store_roundtrip(tmp_path):
    dirs = samsara.run_ini(CONFIG, str(tmp_path / "run"))
    assert len(dirs) == 1
    store = samsara.ChainStore.load(dirs[0])
    assert store.n_gen == 3000
    assert store.species_names == ["theta"]
    assert store.tau(0) > 0.0
    pmf = samsara.number_posterior(store, 0, 0.2, 1)
    assert sum(pmf.values()) == pytest.approx(1.0)
    society = store.society(store.n_gen)
    assert len(society) == 1  # one species
    for individual in society[0]:
        assert len(individual) == 2

    # determinism: the same config gives bit-identical waiting times
    dirs2 = samsara.run_ini(CONFIG, str(tmp_path / "run2"))
    store2 = samsara.ChainStore.load(dirs2[0])
    assert [store.tau(g) for g in range(0, 3001, 97)] == [
        store2.tau(g) for g in range(0, 3001, 97)
    ]


def test_config_errors_carry_details():
    with pytest.raises(samsara.SamsaraError):
        samsara.run_ini("[run]\nn_gen = -1\n", "/tmp/never")
