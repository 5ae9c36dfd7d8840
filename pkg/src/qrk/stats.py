"""Binomial z-tests, Hoeffding shot budgets and Bonferroni correction."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

# two-sided critical values for the significance levels the harness exposes
_Z_TWO_SIDED = {0.05: 1.95996, 0.01: 2.57583}


def inverse_normal_cdf(p: float) -> float:
    """Standard normal quantile by Acklam's rational approximation.

    Relative error below 1.15e-9 over (0, 1); one Halley step on ``erfc``
    tightens it to near machine precision.
    """
    if not 0.0 < p < 1.0:
        raise ValidationError(f"probability must lie in (0, 1), got {p}")
    a = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
         1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
    b = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
         6.680131188771972e+01, -1.328068155288572e+01)
    c = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
         -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
    d = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
         3.754408661907416e+00)
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2 * math.log(p))
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1)
    elif p <= 1 - p_low:
        q = p - 0.5
        r = q * q
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1)
    else:
        q = math.sqrt(-2 * math.log(1 - p))
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1)
    e = 0.5 * math.erfc(-x / math.sqrt(2)) - p
    u = e * math.sqrt(2 * math.pi) * math.exp(x * x / 2)
    return x - u / (1 + x * u / 2)


def z_critical(alpha: float, two_sided: bool = True) -> float:
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    if two_sided and alpha in _Z_TWO_SIDED:
        return _Z_TWO_SIDED[alpha]
    tail = alpha / 2 if two_sided else alpha
    return inverse_normal_cdf(1 - tail)


@dataclass(frozen=True)
class TestOutcome:
    observed: float
    expected: float
    z: float
    alpha: float
    passed: bool

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        return {"observed": self.observed, "expected": self.expected,
                "z": self.z if math.isfinite(self.z) else None,
                "alpha": self.alpha, "pass": self.passed}


def binomial_ztest(successes: int, shots: int, expected_p: float, alpha: float) -> TestOutcome:
    """Two-sided normal-approximation test of ``successes / shots`` against ``expected_p``.

    At ``expected_p`` of exactly 0 or 1 the test passes only on an exact match.
    """
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    if not 0.0 <= expected_p <= 1.0:
        raise ValidationError(f"expected_p must lie in [0, 1], got {expected_p}")
    if not 0 <= successes <= shots:
        raise ValidationError(f"successes {successes} outside [0, {shots}]")
    observed = successes / shots
    if expected_p in (0.0, 1.0):
        match = observed == expected_p
        z = 0.0 if match else math.copysign(math.inf, observed - expected_p)
        return TestOutcome(observed, expected_p, z, alpha, match)
    sigma = math.sqrt(expected_p * (1 - expected_p) / shots)
    z = (observed - expected_p) / sigma
    return TestOutcome(observed, expected_p, z, alpha, abs(z) <= z_critical(alpha))


def required_shots(tolerance: float, alpha: float) -> int:
    """Hoeffding shot count keeping a proportion within ``tolerance`` w.p. >= 1 - alpha."""
    if not 0.0 < tolerance < 1.0:
        raise ValidationError(f"tolerance must lie in (0, 1), got {tolerance}")
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    return max(1, math.ceil(math.log(2 / alpha) / (2 * tolerance ** 2)))


def bonferroni(alpha: float, m_tests: int) -> float:
    if m_tests < 1:
        raise ValidationError(f"m_tests must be >= 1, got {m_tests}")
    return alpha / m_tests
