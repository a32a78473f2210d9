"""The GB2 income-distribution family and its derived functionals.

Four kinds are supported: the generalized beta of the second kind
(GB2) with parameters (a, b, p, q), and its three nested special cases
Dagum (q = 1), Singh-Maddala (p = 1), and Beta2 (a = 1).  ``b`` is a
scale in income units; the rest are dimensionless shapes.

Everything downstream (CDF via the regularized incomplete beta, moment
distribution functions, Lorenz curves) is expressed through a common
GB2-equivalent parameterization, with closed-form shortcuts for the
Burr-type special cases where those are cheaper or better conditioned.
Densities are assembled in log space and exponentiated last.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError
from .specfun import inv_reg_inc_beta, log_gamma, reg_inc_beta


class Kind(enum.Enum):
    """Distribution family member."""

    GB2 = "gb2"
    DAGUM = "dagum"
    SINGH_MADDALA = "sm"
    BETA2 = "beta2"


# Number of free parameters per kind, in declaration order.
PARAM_NAMES = {
    Kind.GB2: ("a", "b", "p", "q"),
    Kind.DAGUM: ("a", "b", "p"),
    Kind.SINGH_MADDALA: ("a", "b", "q"),
    Kind.BETA2: ("b", "p", "q"),
}

# Index of the scale parameter b within each kind's value vector.
SCALE_INDEX = {
    Kind.GB2: 1,
    Kind.DAGUM: 1,
    Kind.SINGH_MADDALA: 1,
    Kind.BETA2: 0,
}


@dataclass(frozen=True)
class ParameterVector:
    """A concrete member of the family: kind plus positive parameters."""

    kind: Kind
    values: tuple

    def __post_init__(self):
        names = PARAM_NAMES.get(self.kind)
        if names is None:
            raise UsageError(f"unknown distribution kind: {self.kind!r}")
        vals = tuple(float(v) for v in self.values)
        if len(vals) != len(names):
            raise DomainError(
                f"{self.kind.value} takes {len(names)} parameters "
                f"{names}, got {len(vals)}"
            )
        for name, v in zip(names, vals):
            if not np.isfinite(v) or v <= 0.0:
                raise DomainError(
                    f"{self.kind.value} parameter {name} must be a finite "
                    f"positive real, got {v!r}"
                )
        object.__setattr__(self, "values", vals)

    def gb2_values(self):
        """Equivalent (a, b, p, q) with nested kinds filled in."""
        if self.kind is Kind.GB2:
            return self.values
        if self.kind is Kind.DAGUM:
            a, b, p = self.values
            return (a, b, p, 1.0)
        if self.kind is Kind.SINGH_MADDALA:
            a, b, q = self.values
            return (a, b, 1.0, q)
        b, p, q = self.values
        return (1.0, b, p, q)


@dataclass(frozen=True)
class MomentExistence:
    """Whether the mean exists, with the margin of the strict condition.

    The margin is a*q - 1 in GB2-equivalent parameters; the mean exists
    exactly when it is positive.  It is reported so callers can see how
    close a parameter draw sits to nonexistence.
    """

    mean_exists: bool
    condition_margin: float


def gb2(a, b, p, q):
    return ParameterVector(Kind.GB2, (a, b, p, q))


def dagum(a, b, p):
    return ParameterVector(Kind.DAGUM, (a, b, p))


def singh_maddala(a, b, q):
    return ParameterVector(Kind.SINGH_MADDALA, (a, b, q))


def beta2(b, p, q):
    return ParameterVector(Kind.BETA2, (b, p, q))


def _validate_income(y):
    y = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(y)) or np.any(y <= 0.0):
        raise DomainError("income values must be finite and positive")
    return y


def _log_beta_fn(p, q):
    return log_gamma(p) + log_gamma(q) - log_gamma(p + q)


def logpdf(params, y):
    """Log-density at ``y`` (scalar or array)."""
    y = _validate_income(y)
    a, b, p, q = params.gb2_values()
    s = a * (np.log(y) - np.log(b))
    # log [1 + (y/b)^a] without overflow for large s.
    log1p_pow = np.logaddexp(0.0, s)
    if params.kind is Kind.DAGUM:
        out = (
            np.log(a)
            + np.log(p)
            + (a * p - 1.0) * np.log(y)
            - a * p * np.log(b)
            - (p + 1.0) * log1p_pow
        )
    elif params.kind is Kind.SINGH_MADDALA:
        out = (
            np.log(a)
            + np.log(q)
            + (a - 1.0) * np.log(y)
            - a * np.log(b)
            - (1.0 + q) * log1p_pow
        )
    else:
        out = (
            np.log(a)
            + (a * p - 1.0) * np.log(y)
            - a * p * np.log(b)
            - _log_beta_fn(p, q)
            - (p + q) * log1p_pow
        )
    return float(out) if out.ndim == 0 else out


def pdf(params, y):
    """Density at ``y``; computed in log space, exponentiated last."""
    out = np.exp(logpdf(params, y))
    return float(out) if np.ndim(out) == 0 else out


def _beta_coordinate(params, y):
    """w(y) = (y/b)^a / (1 + (y/b)^a), the incomplete-beta argument."""
    a, b, _, _ = params.gb2_values()
    s = a * (np.log(y) - np.log(b))
    # w = sigmoid(s), stable on both tails.
    return np.where(s >= 0.0, 1.0 / (1.0 + np.exp(-s)), np.exp(s) / (1.0 + np.exp(s)))


def cdf(params, y):
    """Distribution function at ``y``."""
    y = _validate_income(y)
    a, b, p, q = params.gb2_values()
    if params.kind is Kind.DAGUM:
        # Closed Burr III form [1 + (y/b)^(-a)]^(-p)
        s = -a * (np.log(y) - np.log(b))
        out = np.exp(-p * np.logaddexp(0.0, s))
    elif params.kind is Kind.SINGH_MADDALA:
        # Closed Burr XII form 1 - [1 + (y/b)^a]^(-q)
        s = a * (np.log(y) - np.log(b))
        out = -np.expm1(-q * np.logaddexp(0.0, s))
    else:
        out = reg_inc_beta(_beta_coordinate(params, y), p, q)
    return float(out) if np.ndim(out) == 0 else out


def quantile(params, u):
    """Quantile function, inverse of ``cdf`` on (0, 1)."""
    u = np.asarray(u, dtype=float)
    if np.any(~np.isfinite(u)) or np.any(u <= 0.0) or np.any(u >= 1.0):
        raise DomainError("quantile requires 0 < u < 1")
    a, b, p, q = params.gb2_values()
    if params.kind is Kind.DAGUM:
        out = b * (u ** (-1.0 / p) - 1.0) ** (-1.0 / a)
    elif params.kind is Kind.SINGH_MADDALA:
        out = b * ((1.0 - u) ** (-1.0 / q) - 1.0) ** (1.0 / a)
    else:
        x = inv_reg_inc_beta(u, p, q)
        x = np.clip(x, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
        out = b * (x / (1.0 - x)) ** (1.0 / a)
    return float(out) if np.ndim(out) == 0 else out


def moment_existence(params, k=1):
    """Existence of the k-th moment with its strict-inequality margin."""
    a, _, _, q = params.gb2_values()
    margin = a * q - float(k)
    return MomentExistence(mean_exists=margin > 0.0, condition_margin=margin)


def mean(params):
    """(MomentExistence, mean or None).

    The mean is b * Gamma(p + 1/a) Gamma(q - 1/a) / (Gamma(p) Gamma(q))
    in GB2-equivalent parameters and exists when q > 1/a.
    """
    a, b, p, q = params.gb2_values()
    existence = moment_existence(params, k=1)
    if not existence.mean_exists:
        return existence, None
    value = b * np.exp(
        log_gamma(p + 1.0 / a)
        + log_gamma(q - 1.0 / a)
        - log_gamma(p)
        - log_gamma(q)
    )
    return existence, float(value)


def _moment_names(params):
    a, _, _, q = params.gb2_values()
    if params.kind is Kind.GB2:
        return f"k < a*q = {a * q:g}"
    if params.kind is Kind.DAGUM:
        return f"k < a = {a:g}"
    if params.kind is Kind.SINGH_MADDALA:
        return f"k < a*q = {a * q:g}"
    return f"k < q = {q:g}"


def moment_cdf(params, k, y):
    """k-th moment distribution function F^(k) at ``y``.

    F^(k)(y) is the normalized partial k-th moment; F^(0) is the plain
    distribution function.  In GB2-equivalent parameters it is the
    regularized incomplete beta at w(y) with shifted shapes
    (p + k/a, q - k/a).
    """
    if int(k) != k or k < 0:
        raise DomainError("moment order k must be a nonnegative integer")
    k = int(k)
    if k == 0:
        return cdf(params, y)
    y = _validate_income(y)
    a, b, p, q = params.gb2_values()
    if moment_existence(params, k).condition_margin <= 0.0:
        raise DomainError(
            f"moment of order {k} does not exist; requires {_moment_names(params)}"
        )
    out = reg_inc_beta(_beta_coordinate(params, y), p + k / a, q - k / a)
    return float(out) if np.ndim(out) == 0 else out


def _lorenz_beta_argument(params, u):
    """x_u with L(u) = I_{x_u}(p + 1/a, q - 1/a); closed forms for the
    Burr cases, inverse incomplete beta otherwise."""
    _, _, p, q = params.gb2_values()
    if params.kind is Kind.DAGUM:
        return u ** (1.0 / p)
    if params.kind is Kind.SINGH_MADDALA:
        return -np.expm1(np.log1p(-u) / q)
    return inv_reg_inc_beta(u, p, q)


def lorenz(params, u):
    """Lorenz curve L(u): income share of the poorest fraction ``u``."""
    u = np.asarray(u, dtype=float)
    if np.any(~np.isfinite(u)) or np.any(u < 0.0) or np.any(u > 1.0):
        raise DomainError("lorenz requires u in [0, 1]")
    existence = moment_existence(params, k=1)
    if not existence.mean_exists:
        raise DomainError(
            "Lorenz curve undefined: mean does not exist "
            f"(condition margin {existence.condition_margin:g})"
        )
    a, _, p, q = params.gb2_values()
    x = _lorenz_beta_argument(params, u)
    out = reg_inc_beta(x, p + 1.0 / a, q - 1.0 / a)
    return float(out) if np.ndim(out) == 0 else out


def gen_lorenz(params, u):
    """Generalized Lorenz curve: mean times the Lorenz curve."""
    _, mu = mean(params)
    if mu is None:
        raise DomainError("generalized Lorenz curve undefined: mean does not exist")
    out = mu * lorenz(params, u)
    return float(out) if np.ndim(out) == 0 else out


def mode(params):
    """Interior mode of the density, or 0.0 when the density is
    decreasing on (0, inf).  Diagnostic only."""
    a, b, p, q = params.gb2_values()
    if a * p <= 1.0:
        return 0.0
    return float(b * ((a * p - 1.0) / (a * q + 1.0)) ** (1.0 / a))


def sample(params, n, rng):
    """``n`` iid draws by inverse-transform sampling."""
    if int(n) != n or n < 1:
        raise UsageError("sample size n must be a positive integer")
    u = rng.random(int(n))
    # Guard the open-interval requirement of the quantile function.
    u = np.clip(u, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    return quantile(params, u)
