"""Linear sieve function tables, evaluators, residuals, main terms."""

import io
import math

import pytest

from sievekit.arith import EULER_MASCHERONI
from sievekit.errors import DomainError
from sievekit.sieve_functions import (
    DHR_KAPPA2_POSITIVITY_THRESHOLD,
    TWO_E_GAMMA,
    build_function_table,
    dde_residuals,
    linear_F,
    linear_f,
    main_term,
    write_table_csv,
)


def simpson(g, a, b, panels=2000):
    """Plain Simpson rule; the tests' own integrator."""
    h = (b - a) / (2 * panels)
    total = g(a) + g(b)
    for i in range(1, 2 * panels):
        total += g(a + i * h) * (4 if i % 2 else 2)
    return total * h / 3


def closed_f(s):
    return TWO_E_GAMMA * math.log(s - 1) / s if s > 2 else 0.0


def test_closed_form_values():
    assert linear_F(1) == TWO_E_GAMMA
    assert abs(linear_F(2) - math.exp(EULER_MASCHERONI)) <= 1e-15
    assert linear_f(2) == 0.0
    assert abs(linear_f(3) - TWO_E_GAMMA * math.log(2) / 3) <= 1e-15
    assert TWO_E_GAMMA == 2 * math.exp(EULER_MASCHERONI)


def test_evaluators_reject_below_one():
    with pytest.raises(DomainError):
        linear_F(0.5)
    with pytest.raises(DomainError):
        linear_f(0.999)


def test_integrated_F4_against_independent_quadrature():
    # s*F is 2e^gamma at 3 plus the integral of f over the delayed range
    want = (TWO_E_GAMMA + simpson(closed_f, 2.0, 3.0)) / 4.0
    assert abs(linear_F(4) - want) <= 1e-8


def test_integrated_f5_against_independent_quadrature():
    def P_exact(v):
        return TWO_E_GAMMA + simpson(closed_f, 2.0, v - 1.0, panels=400)

    q5 = TWO_E_GAMMA * math.log(3.0) + simpson(lambda v: P_exact(v) / v, 3.0, 4.0, panels=200)
    assert abs(linear_f(5) - q5 / 5.0) <= 1e-7


def test_far_values_approach_one():
    assert 1 < linear_F(10) < 1.001
    assert 0.999 < linear_f(10) < 1


def test_table_monotonicity_and_ordering():
    t = build_function_table()
    for a, b in zip(t.F_values, t.F_values[1:]):
        assert b <= a
    for a, b in zip(t.f_values, t.f_values[1:]):
        assert b >= a
    for s, F, fv in zip(t.s_values[:-1], t.F_values[:-1], t.f_values[:-1]):
        assert fv < 1.0 < F


def test_table_pinching_on_middle_range():
    t = build_function_table()
    i2 = round(1.0 / t.step)
    i10 = round(9.0 / t.step)
    diffs = [F - fv for F, fv in zip(t.F_values[i2 : i10 + 1], t.f_values[i2 : i10 + 1])]
    for a, b in zip(diffs, diffs[1:]):
        assert b <= a


def test_continuity_at_range_joins():
    t = build_function_table()
    assert abs(t.F_at(3.0) - t.F_at(3.0 + 1e-12)) < 1e-9
    assert abs(t.f_at(4.0) - t.f_at(4.0 + 1e-12)) < 1e-9


def test_interpolation_exact_at_grid_nodes():
    t = build_function_table()
    for i in (3500, 5000, 9999):
        assert abs(t.F_at(t.s_values[i]) - t.F_values[i]) <= 1e-10
        assert abs(t.f_at(t.s_values[i]) - t.f_values[i]) <= 1e-10


def test_dde_residuals_meet_target():
    t = build_function_table()
    r_F, r_f = dde_residuals(t, t.step / 10)
    assert r_F < 1e-6
    assert r_f < 1e-6


def test_dde_residual_closed_region():
    t = build_function_table()
    _, r_f = dde_residuals(t, 1e-4, s_lo=2.0, s_hi=3.0)
    assert r_f < 1e-6


def test_dde_constant_region_is_exactly_zero():
    t = build_function_table(s_max=4.0)
    r_F, _ = dde_residuals(t, t.step / 10, s_lo=1.1, s_hi=2.9)
    assert r_F == 0.0


def test_dde_rejects_coarse_h():
    t = build_function_table(s_max=4.0)
    with pytest.raises(DomainError):
        dde_residuals(t, t.step / 2)


def test_method_tags_partition():
    t = build_function_table(s_max=5.0)
    tag = {round((s - 1) / t.step): m for s, m in zip(t.s_values, t.method_tags)}
    npu = round(1 / t.step)
    assert tag[2 * npu] == "closed_form"
    assert tag[2 * npu + 1] == "mixed"
    assert tag[3 * npu] == "mixed"
    assert tag[3 * npu + 1] == "integrated"


def test_build_rejects_misaligned_grids():
    with pytest.raises(DomainError):
        build_function_table(step=0.0003)  # does not divide the unit delay
    with pytest.raises(DomainError):
        build_function_table(s_max=2.0005)
    with pytest.raises(DomainError):
        build_function_table(step=0.2)
    with pytest.raises(DomainError):
        build_function_table(s_max=1.0)


def test_main_term_examples():
    assert main_term(0, 0.5, 2, "upper") == 0.0
    up = main_term(100, 0.3125, 2, "upper", 0)
    assert up == 100 * 0.3125 * linear_F(2)
    assert abs(up - 55.658) <= 1e-3
    assert main_term(100, 0.3125, 2, "lower", 0) == 0.0


def test_main_term_lower_floors_at_zero():
    assert main_term(100, 0.5, 3, "lower", eps=10.0) == 0.0
    v = main_term(100, 0.5, 3, "lower", eps=0.1)
    assert v == 100 * 0.5 * (linear_f(3) - 0.1)


def test_main_term_rejects_bad_arguments():
    with pytest.raises(DomainError):
        main_term(-1, 0.5, 2, "upper")
    with pytest.raises(DomainError):
        main_term(1, 0.0, 2, "upper")
    with pytest.raises(DomainError):
        main_term(1, 1.5, 2, "upper")
    with pytest.raises(DomainError):
        main_term(1, 0.5, 2, "sideways")
    with pytest.raises(DomainError):
        main_term(1, 0.5, 2, "upper", eps=-0.1)


def test_positivity_threshold_constant():
    assert DHR_KAPPA2_POSITIVITY_THRESHOLD == 4.267


def test_table_csv_shape():
    t = build_function_table(s_max=2.0, step=0.1)
    buf = io.StringIO()
    write_table_csv(t, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "s,F,f,method"
    assert len(lines) == len(t.s_values) + 1
    assert lines[1].split(",")[3] == "closed_form"
