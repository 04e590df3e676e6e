"""Linear sieve functions F and f: closed forms on their initial ranges,
delay-differential continuation beyond, residual checks, and main-term
assembly."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .arith import EULER_MASCHERONI
from .errors import DomainError

TWO_E_GAMMA = 2.0 * math.exp(EULER_MASCHERONI)

# Positivity threshold of the lower kappa=2 companion function; its
# integration is out of scope, only the threshold is carried.
DHR_KAPPA2_POSITIVITY_THRESHOLD = 4.267


def _closed_F(s):
    # valid on [1, 3]
    return TWO_E_GAMMA / s


def _closed_f(s):
    # valid on [2, 4]; 0 below 2
    if s <= 2.0:
        return 0.0
    return TWO_E_GAMMA * math.log(s - 1.0) / s


@dataclass
class SieveFunctionTable:
    """Fixed-step table of F and f on [1, s_max].

    method_tags[i] says how the pair at node i was produced:
    closed_form (both closed forms), mixed (F integrated, f still
    closed), or integrated (both continued numerically).
    """

    s_max: float
    step: float
    s_values: list
    F_values: list
    f_values: list
    method_tags: list

    @property
    def s_min(self):
        return 1.0

    def _cubic(self, values, s, lo=0):
        # 4-point Lagrange interpolation; exact at the grid nodes. lo
        # keeps the stencil from reaching across a piecewise join, where
        # the curvature jump would put a wiggle into the fit.
        n = len(values)
        pos = (s - 1.0) / self.step
        i0 = int(pos) - 1
        if i0 < lo:
            i0 = lo
        if i0 > n - 4:
            i0 = n - 4
        if i0 < 0:
            i0 = 0
        u = pos - i0
        l0 = (u - 1.0) * (u - 2.0) * (u - 3.0) / -6.0
        l1 = u * (u - 2.0) * (u - 3.0) / 2.0
        l2 = u * (u - 1.0) * (u - 3.0) / -2.0
        l3 = u * (u - 1.0) * (u - 2.0) / 6.0
        return (
            l0 * values[i0]
            + l1 * values[i0 + 1]
            + l2 * values[i0 + 2]
            + l3 * values[i0 + 3]
        )

    def F_at(self, s):
        s = float(s)
        if s < 1.0:
            raise DomainError(f"s = {s} is below 1")
        if s <= 3.0:
            return _closed_F(s)
        if s >= self.s_values[-1]:
            return self.F_values[-1]
        return self._cubic(self.F_values, s, lo=round(2.0 / self.step))

    def f_at(self, s):
        s = float(s)
        if s < 1.0:
            raise DomainError(f"s = {s} is below 1")
        if s <= 4.0:
            return _closed_f(s)
        if s >= self.s_values[-1]:
            return self.f_values[-1]
        return self._cubic(self.f_values, s, lo=round(3.0 / self.step))


def build_function_table(s_max=12.0, step=1e-3):
    """Tabulate F and f on the grid 1, 1+step, ..., s_max.

    The products P = s*F and Q = s*f obey P' = f(s-1) and Q' = F(s-1),
    so past the closed-form ranges both are continued by a fixed-step
    trapezoid with a Gregory endpoint correction (the correction brings
    the error down to where it no longer disturbs monotonicity).
    """
    s_max = float(s_max)
    step = float(step)
    if step <= 0:
        raise DomainError("step must be positive")
    npu = round(1.0 / step)
    if npu < 10 or abs(npu * step - 1.0) > 1e-9:
        raise DomainError(f"step {step} must evenly divide the unit delay")
    n_steps = round((s_max - 1.0) / step)
    if n_steps < 1 or abs(1.0 + n_steps * step - s_max) > 1e-9:
        raise DomainError(f"s_max {s_max} must sit on the step grid above 1")

    N = n_steps
    h = step
    s = [1.0 + i * h for i in range(N + 1)]
    i3 = min(2 * npu, N)
    i4 = min(3 * npu, N)

    F = [0.0] * (N + 1)
    f = [0.0] * (N + 1)
    for i in range(i3 + 1):
        F[i] = _closed_F(s[i])
    for i in range(npu, i4 + 1):
        f[i] = _closed_f(s[i])

    P3 = TWO_E_GAMMA  # s*F is constant on [1, 3]
    Q4 = TWO_E_GAMMA * math.log(3.0)  # s*f at s = 4

    def g_P(j):
        return f[j - npu]

    def g_Q(j):
        return F[j - npu]

    tp_P = 0.0
    tp_Q = 0.0
    for i in range(i3 + 1, N + 1):
        tp_P += 0.5 * h * (g_P(i - 1) + g_P(i))
        val = P3 + tp_P
        if i >= i3 + 2:
            back = 3.0 * g_P(i) - 4.0 * g_P(i - 1) + g_P(i - 2)
            front = -3.0 * g_P(i3) + 4.0 * g_P(i3 + 1) - g_P(i3 + 2)
            val -= h / 24.0 * (back - front)
        F[i] = val / s[i]
        if i > i4:
            tp_Q += 0.5 * h * (g_Q(i - 1) + g_Q(i))
            val = Q4 + tp_Q
            if i >= i4 + 2:
                back = 3.0 * g_Q(i) - 4.0 * g_Q(i - 1) + g_Q(i - 2)
                front = -3.0 * g_Q(i4) + 4.0 * g_Q(i4 + 1) - g_Q(i4 + 2)
                val -= h / 24.0 * (back - front)
            f[i] = val / s[i]

    tags = []
    for i in range(N + 1):
        if i <= i3:
            tags.append("closed_form")
        elif i <= i4:
            tags.append("mixed")
        else:
            tags.append("integrated")
    return SieveFunctionTable(
        s_max=s_max, step=step, s_values=s, F_values=F, f_values=f, method_tags=tags
    )


_DEFAULT_TABLE = None


def _default_table():
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = build_function_table()
    return _DEFAULT_TABLE


def linear_F(s):
    """Upper sieve function F(s); closed form on [1, 3], table beyond."""
    return _default_table().F_at(s)


def linear_f(s):
    """Lower sieve function f(s); 0 on [1, 2], closed on [2, 4], table beyond."""
    return _default_table().f_at(s)


def _f_delayed(table, s):
    # delayed argument may fall below the table's domain; f vanishes there
    if s < 2.0:
        return 0.0
    return table.f_at(s)


def _P_at(table, s):
    # s*F(s) without the closed-form round trip: constant on [1, 3]
    if s <= 3.0:
        return TWO_E_GAMMA
    return s * table.F_at(s)


def _Q_at(table, s):
    # s*f(s); closed form is a bare log on [2, 4]
    if s <= 2.0:
        return 0.0
    if s <= 4.0:
        return TWO_E_GAMMA * math.log(s - 1.0)
    return s * table.f_at(s)


def dde_residuals(table: SieveFunctionTable, h, s_lo=None, s_hi=None):
    """Worst central-difference defects of the two delay identities.

    r_F checks d/ds[s*F(s)] = f(s-1), r_f checks d/ds[s*f(s)] = F(s-1),
    at every grid node whose difference stencil stays inside the table
    and does not straddle a join of the piecewise definition (s = 3 for
    F; s = 2 and 4 for f), where the one-sided curvature jump would
    swamp the defect being measured. Optional s_lo/s_hi restrict the
    scanned window.
    """
    h = float(h)
    if h > table.step / 10.0 + 1e-15:
        raise DomainError(f"h = {h} too coarse; need h <= step/10 = {table.step / 10}")
    lo = 1.0 if s_lo is None else float(s_lo)
    hi = table.s_values[-1] if s_hi is None else float(s_hi)

    def straddles(sv, knot):
        return sv - h < knot < sv + h

    r_F = 0.0
    r_f = 0.0
    for sv in table.s_values:
        if sv < lo or sv > hi:
            continue
        if sv - h < 1.0 or sv + h > table.s_values[-1]:
            continue
        if not straddles(sv, 3.0):
            lhs = (_P_at(table, sv + h) - _P_at(table, sv - h)) / (2.0 * h)
            r_F = max(r_F, abs(lhs - _f_delayed(table, sv - 1.0)))
        if sv >= 2.0 and not (straddles(sv, 2.0) or straddles(sv, 4.0)):
            lhs = (_Q_at(table, sv + h) - _Q_at(table, sv - h)) / (2.0 * h)
            r_f = max(r_f, abs(lhs - table.F_at(sv - 1.0)))
    return r_F, r_f


def main_term(X, Vz, s, side, eps=0.0):
    """X * V(z) * (F(s) + eps) for the upper side; f-based, floored at 0,
    for the lower."""
    X = float(X)
    Vz = float(Vz)
    eps = float(eps)
    if X < 0:
        raise DomainError("X must be nonnegative")
    if not 0.0 < Vz <= 1.0:
        raise DomainError(f"Vz = {Vz} outside (0, 1]")
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    if side == "upper":
        return X * Vz * (linear_F(s) + eps)
    if side == "lower":
        return max(0.0, X * Vz * (linear_f(s) - eps))
    raise DomainError(f"side must be upper or lower, not {side!r}")


def write_table_csv(table: SieveFunctionTable, fileobj):
    """Rows (s, F, f, method) at 15 significant digits."""
    w = csv.writer(fileobj)
    w.writerow(["s", "F", "f", "method"])
    for sv, Fv, fv, tag in zip(
        table.s_values, table.F_values, table.f_values, table.method_tags
    ):
        w.writerow(["%.15g" % sv, "%.15g" % Fv, "%.15g" % fv, tag])
