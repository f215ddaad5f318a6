import itertools
import math

import numpy as np
import pytest

from mixtrace.errors import TooLarge
from mixtrace.model import DataSet, ModelParams, stat_n_e
from mixtrace.oracle import (DiscreteInstance, SnappedKernel, brute_min, enumerate_gibbs,
                             random_instance)
from mixtrace.sampler import SamplerParams, Window

W3 = Window(0.0, 3.0, 0.0, 3.0)
DATA = DataSet([(0.7, 0.8), (2.2, 0.6), (1.4, 2.3), (1.6, 1.2)])


def inst(theta, g=3, n_max=3, data=DATA, window=W3):
    return DiscreteInstance(window, g, n_max, data, ModelParams.from_theta(theta, 1.0))


def test_grid_points_and_state_count():
    i = inst((0,) * 5)
    assert i.grid_points.shape == (9, 2)
    np.testing.assert_allclose(i.grid_points[0], [0.5, 0.5])
    # index = column * g + row
    np.testing.assert_allclose(i.grid_points[5], [1.5, 2.5])
    assert i.n_states() == 9 + 36 + 84
    assert len(list(i.configurations())) == 129


def test_zero_theta_is_uniform():
    p = enumerate_gibbs(inst((0,) * 5))
    vals = np.array(list(p.values()))
    np.testing.assert_allclose(vals, 1 / 129, rtol=1e-12)


def test_high_temperature_near_uniform():
    p = enumerate_gibbs(inst((1, 0.5, -1, 0.8, 0.6)), T=1e6)
    assert max(abs(v - 1 / 129) for v in p.values()) < 1e-3


def test_theta4_ln2_closed_form():
    i = inst((0, 0, 0, math.log(2), 0), g=4)
    p = enumerate_gibbs(i)
    by_n = {}
    for key, v in p.items():
        by_n[len(key)] = by_n.get(len(key), 0.0) + v
    w = {k: math.comb(16, k) * 2.0 ** -k for k in (1, 2, 3)}
    z = sum(w.values())
    for k in (1, 2, 3):
        assert by_n[k] == pytest.approx(w[k] / z, rel=1e-12)


def test_probabilities_sum_to_one():
    p = enumerate_gibbs(random_instance(np.random.default_rng(0), g=4))
    assert abs(sum(p.values()) - 1.0) < 1e-12


def test_too_large():
    big = DiscreteInstance(Window(0, 20, 0, 20), 20, 3, DATA, ModelParams.from_theta((0,) * 5, 1))
    with pytest.raises(TooLarge):
        enumerate_gibbs(big)
    with pytest.raises(TooLarge):
        brute_min(big)


def test_brute_min_theta4_only_picks_lowest_single():
    key, u = brute_min(inst((0, 0, 0, 1.0, 0)))
    assert key == (0,) and u == 1.0


def test_brute_min_dominant_enclosure():
    # data on three grid points; enclosing them outweighs everything else
    i = inst((0.01, 0.01, -100.0, 0.01, 0.01),
             data=DataSet([(0.5, 0.5), (2.5, 0.5), (1.5, 2.5)]))
    key, _ = brute_min(i)
    assert stat_n_e(i.grid_points[list(key)], i.data) == 3


@pytest.mark.parametrize("seed", range(5))
def test_brute_min_matches_independent_rescan(seed):
    i = random_instance(np.random.default_rng(seed), g=4)
    key, u = brute_min(i)
    # reverse iteration order, then take the smallest key among minimisers
    allkeys = [c for k in (3, 2, 1) for c in itertools.combinations(range(15, -1, -1), k)]
    allkeys = [tuple(sorted(c)) for c in allkeys]
    us = {c: i.energy_of(c).u_total for c in allkeys}
    best = min(us.values())
    assert u == best
    assert key == min(c for c, v in us.items() if v == best)
    rng = np.random.default_rng(seed + 100)
    for j in rng.integers(0, len(allkeys), 1000):
        assert u <= us[allkeys[j]]


def test_snapped_kernel_stencil():
    i = inst((0,) * 5)
    k = SnappedKernel(i, SamplerParams(r_c=1.5))
    assert sorted(k.offsets) == sorted(
        (a, b) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0))
    assert len(SnappedKernel(i, SamplerParams(r_c=1.0)).offsets) == 4
    assert SnappedKernel(i, SamplerParams(r_c=0.5)).offsets == []
    assert k.birth_measure == 9.0


def test_snapped_chain_stays_on_grid_and_within_n_max():
    i = inst((0, 0, 0, 0, 0), n_max=2)
    k = SnappedKernel(i, SamplerParams(r_c=1.5))
    rng = np.random.default_rng(1)
    s = k.init_state(k.random_init(rng), rng)
    for _ in range(3000):
        s = k.step(s, 1.0)
        key = k.key(s.config)
        assert 1 <= len(key) <= 2 and len(set(key)) == len(key)


def test_snapped_energy_cache_matches_direct():
    i = random_instance(np.random.default_rng(2))
    k = SnappedKernel(i, SamplerParams(r_c=1.5))
    for key in [(0,), (1, 4), (2, 5, 8)]:
        c = k.config_of(key)
        assert k.energy(c) == i.energy_of(key)
        assert k.energy(c) is k.energy(c)
