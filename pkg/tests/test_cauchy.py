import random
from fractions import Fraction

import pytest

from tricomplete.rmodule import RModule, Ring, free_module, zero_module
from tricomplete.complexes import (
    PreconditionError,
    cohomology,
    cone,
    identity_chain_map,
    module_complex,
)
from tricomplete.metric import metric_i, metric_ii, metric_iii, object_length
from tricomplete.cauchy import (
    Tower,
    colimit,
    constant_tower,
    is_cauchy,
    prefix_tower,
    truncation_tower,
)
from tricomplete.randomgen import Sampler

R22 = Ring(2, 2)
R23 = Ring(2, 3)
K = RModule(R22, (1,))


def test_truncation_tower_of_zero_is_constant_zero():
    t = truncation_tower(zero_module(R22))
    for k in (1, 2, 5):
        assert t.complex_at(k).is_zero()
    cert = is_cauchy(t, metric_i(), horizon=6, levels=4)
    assert cert.is_cauchy and cert.conclusive
    assert all(cert.thresholds[n] == 1 for n in range(1, 5))


def test_truncation_tower_of_free_module_constant():
    R = free_module(R22, 1)
    t = truncation_tower(R)
    for k in (1, 3):
        assert t.complex_at(k) == module_complex(R, 0)
    cert = is_cauchy(t, metric_i(), horizon=6, levels=4)
    assert cert.is_cauchy
    assert all(cert.thresholds[n] == 1 for n in range(1, 5))


def test_truncation_tower_of_k_shape():
    t = truncation_tower(K)
    for k in (1, 2, 4):
        x = t.complex_at(k)
        assert x.degrees == list(range(-k, 1))
        for i in x.degrees:
            assert x.component(i) == free_module(R22, 1)
    # connecting maps are the subcomplex inclusions
    f = t.map_at(2)
    assert f.source == t.complex_at(2) and f.target == t.complex_at(3)


def test_truncation_tower_lengths_closed_form_vs_harness():
    # measured cone lengths must be exactly 1/(i+1), independent of j
    t = truncation_tower(K)
    m = metric_i()
    for i in range(1, 5):
        for j in range(i + 1, 6):
            z = cone(t.composite(i, j)).z
            assert object_length(z, m) == Fraction(1, i + 1), (i, j)
    cert = is_cauchy(t, m, horizon=8, levels=6)
    for i in range(1, 9):
        assert cert.sup_lengths[i] == Fraction(1, i + 1)


def test_truncation_tower_cauchy_metric_i_with_threshold_n():
    cert = is_cauchy(truncation_tower(K), metric_i(), horizon=20, levels=10)
    assert cert.is_cauchy and cert.conclusive
    for n in range(1, 11):
        assert cert.thresholds[n] == n


def test_truncation_tower_not_cauchy_metric_ii():
    cert = is_cauchy(truncation_tower(K), metric_ii(), horizon=10, levels=4)
    assert cert.verdict == "not_cauchy"
    n, i, j, ln = cert.violation
    assert ln >= Fraction(1, n)
    # the reported composite really is that long
    if j != "inf":
        t = truncation_tower(K)
        z = cone(t.composite(i, j)).z
        assert object_length(z, metric_ii()) == ln


def test_truncation_tower_cauchy_metric_iii():
    cert = is_cauchy(truncation_tower(K), metric_iii(), horizon=12, levels=6)
    assert cert.is_cauchy
    for n in range(1, 7):
        assert cert.thresholds[n] == n


def test_certificate_thresholds_monotone():
    for m in (metric_i(), metric_iii()):
        cert = is_cauchy(truncation_tower(RModule(R23, (2, 1))), m, horizon=14, levels=8)
        assert cert.is_cauchy
        for n in range(1, 8):
            assert cert.thresholds[n] <= cert.thresholds[n + 1]


def test_constant_tower_cauchy_every_metric():
    rng = random.Random(3)
    s = Sampler(R22, rng)
    x = s.complex(-2, 1, max_blocks=2)
    t = constant_tower(x)
    for m in (metric_i(), metric_ii(), metric_iii()):
        cert = is_cauchy(t, m, horizon=6, levels=5)
        assert cert.is_cauchy and cert.conclusive
        assert all(cert.thresholds[n] == 1 for n in range(1, 6))


def test_prefix_tower_inconclusive():
    t = truncation_tower(K)
    entries = [t.complex_at(k) for k in range(1, 5)]
    maps = [t.map_at(k) for k in range(1, 4)]
    p = prefix_tower(entries, maps)
    cert = is_cauchy(p, metric_i(), horizon=10, levels=3)
    assert cert.verdict == "inconclusive"
    assert not cert.conclusive
    # measured data still matches the closed form within the prefix
    # (the last entry sees no j > i inside the horizon, so only i < 4)
    for i in range(1, 4):
        assert cert.sup_lengths[i] == Fraction(1, i + 1)


def test_horizon_too_small_is_inconclusive_not_wrong():
    cert = is_cauchy(truncation_tower(K), metric_i(), horizon=3, levels=8)
    assert cert.verdict == "inconclusive"
    assert "horizon" in cert.note


def test_prefix_validation():
    t = truncation_tower(K)
    with pytest.raises(PreconditionError):
        Tower(R22, prefix=[t.complex_at(2)], tail=t.tail)  # entry 1 must match the rule


# -- colimits -------------------------------------------------------------------


def test_colimit_of_truncation_tower_k():
    t = truncation_tower(K)
    cert = is_cauchy(t, metric_i(), horizon=10, levels=5)
    table = colimit(t, (-3, 2), 10, cert)
    assert table.conclusive
    assert table.module_at(0) == K
    for i in (-3, -2, -1, 1, 2):
        assert table.module_at(i).is_zero()
    assert table.support() == [0]


def test_colimit_of_truncation_tower_R():
    R = free_module(R22, 1)
    t = truncation_tower(R)
    cert = is_cauchy(t, metric_i(), horizon=8, levels=4)
    table = colimit(t, (-2, 1), 8, cert)
    assert table.conclusive
    assert table.module_at(0) == R
    assert table.support() == [0]


def test_colimit_of_constant_tower_is_cohomology():
    rng = random.Random(8)
    s = Sampler(R23, rng)
    x = s.complex(-2, 2, max_blocks=2)
    t = constant_tower(x)
    cert = is_cauchy(t, metric_i(), horizon=6, levels=3)
    table = colimit(t, (-3, 3), 6, cert)
    assert table.conclusive
    for i in range(-3, 4):
        assert table.module_at(i) == cohomology(x, i)


def test_colimit_requires_cauchy_provenance():
    t = truncation_tower(K)
    cert = is_cauchy(t, metric_ii(), horizon=8, levels=3)
    with pytest.raises(PreconditionError):
        colimit(t, (-2, 2), 8, cert)


def test_colimit_stabilization_indices_truncation():
    t = truncation_tower(RModule(R23, (1,)))
    cert = is_cauchy(t, metric_i(), horizon=12, levels=4)
    table = colimit(t, (-4, 1), 12, cert)
    assert table.conclusive
    for i in range(-4, 2):
        mod, k_i = table.entries[i]
        assert k_i <= abs(i) + 1 if i <= 0 else k_i == 1


def test_colimit_invariant_under_levelwise_contractible_inflation():
    # same tower with a contractible summand glued on levelwise
    from tricomplete.complexes import direct_sum_complex

    t = truncation_tower(K)
    c = cone(identity_chain_map(module_complex(free_module(R22, 1), 0))).z
    entries, maps = [], []
    for k in range(1, 7):
        xk, injs, projs = direct_sum_complex([t.complex_at(k), c], R22)
        entries.append(xk)
    for k in range(1, 6):
        xk, xk1 = entries[k - 1], entries[k]
        # connecting map: tower map on the first summand, identity on the second
        _, injs1, projs1 = direct_sum_complex([t.complex_at(k), c], R22)
        _, injs2, projs2 = direct_sum_complex([t.complex_at(k + 1), c], R22)
        from tricomplete.complexes import identity_chain_map as icm

        f = (injs2[0] @ t.map_at(k) @ projs1[0]) + (injs2[1] @ icm(c) @ projs1[1])
        maps.append(f)
    p = prefix_tower(entries, maps)
    cert = is_cauchy(p, metric_i(), horizon=6, levels=2)
    table = colimit(p, (-2, 1), 6, cert)
    tref = colimit(truncation_tower(K), (-2, 1), 6,
                   is_cauchy(truncation_tower(K), metric_i(), 6, 2))
    for i in range(-2, 2):
        assert table.module_at(i) == tref.module_at(i)
