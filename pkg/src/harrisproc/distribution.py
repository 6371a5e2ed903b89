"""Harris distribution and its relatives.

The Harris law is the discrete distribution concentrated on
``{1, 1+k, 1+2k, ...}`` with probability generating function

    P(s) = s / (m - (m - 1) * s**k) ** (1/k),      m > 1, k >= 1 integer,

and probability mass function

    P(X = 1 + n*k) = C(1/k + n - 1, n) * (1/m)**(1/k) * (1 - 1/m)**n

for n = 0, 1, 2, ..., where C is the generalized binomial coefficient.
Equivalently, X = 1 + k*I where I follows the negative binomial law
NB(1/k, 1/m) on {0, 1, 2, ...}; for k = 1 the law reduces to the
decapitated (1-shifted) geometric with parameter 1/m.

All probabilities are computed in log space via log-gamma so that deep
tail terms neither overflow nor lose normalization.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import ResourceLimitError

__all__ = [
    "HarrisParams",
    "SupportPoint",
    "PmfTable",
    "log_binom",
    "harris_pmf",
    "harris_pgf",
    "harris_mean_var",
    "nb_pmf",
    "decap_geometric_pmf",
    "pmf_table",
    "truncation_index",
    "tail_bound_after",
]


def _validate_step(k) -> int:
    if isinstance(k, bool) or not isinstance(k, numbers.Integral):
        raise ValueError(f"step parameter k must be a positive integer, got {k!r}")
    k = int(k)
    if k < 1:
        raise ValueError(f"step parameter k must be >= 1, got {k}")
    return k


def _as_counts(n):
    """Validate nonnegative integer count index; scalar or array."""
    arr = np.asarray(n)
    if not np.issubdtype(arr.dtype, np.integer):
        if not (np.issubdtype(arr.dtype, np.floating) and np.all(arr == np.floor(arr))):
            raise ValueError(f"count index must be integral, got {n!r}")
        arr = arr.astype(np.int64)
    if np.any(arr < 0):
        raise ValueError(f"count index must be nonnegative, got {n!r}")
    return arr, np.ndim(n) == 0


@dataclass(frozen=True)
class HarrisParams:
    """Parameters (m, k) of the Harris law with index 1/k.

    m is the scale parameter (also the mean), strictly greater than 1;
    k is the positive-integer step between support points.
    """

    m: float
    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", _validate_step(self.k))
        m = float(self.m)
        if not m > 1.0:
            raise ValueError(f"scale parameter m must be > 1, got {self.m!r}")
        object.__setattr__(self, "m", m)

    @property
    def index(self) -> float:
        """The distribution index r = 1/k (never stored, always derived)."""
        return 1.0 / self.k

    def support_value(self, n):
        """Support point x = 1 + n*k for count index n (scalar or array)."""
        if np.ndim(n) == 0:
            return 1 + int(n) * self.k
        return 1 + np.asarray(n) * self.k

    def support_values(self):
        """Yield the support 1, 1+k, 1+2k, ... indefinitely."""
        x = 1
        while True:
            yield x
            x += self.k


@dataclass(frozen=True)
class SupportPoint:
    """One lattice point: count index n and support value x = 1 + n*k."""

    n: int
    x: int

    def __post_init__(self):
        if self.n < 0 or self.x < 1:
            raise ValueError(f"invalid support point (n={self.n}, x={self.x})")


@dataclass(frozen=True)
class PmfTable:
    """Materialized truncation of a Harris p.m.f.

    ``entries`` lists (support point, probability) for n = 0 .. n_stop;
    ``tail_mass`` is a certified upper bound on the probability mass
    beyond the last entry, so sum(entries) + tail_mass brackets 1.
    """

    params: HarrisParams
    entries: tuple = field(repr=False)
    tail_mass: float = 0.0

    def __post_init__(self):
        k = self.params.k
        for point, prob in self.entries:
            if point.x != 1 + point.n * k:
                raise ValueError(f"support point {point} inconsistent with k={k}")
            if not 0.0 <= prob <= 1.0:
                raise ValueError(f"probability {prob!r} outside [0, 1]")

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([prob for _, prob in self.entries])

    @property
    def total(self) -> float:
        return float(self.probabilities.sum()) + self.tail_mass


def log_binom(r: float, n) -> float:
    """Log of the generalized binomial coefficient C(r + n - 1, n).

    Equals log( Gamma(r+n) / (Gamma(r) * n!) ); requires r > 0.
    Accepts a scalar or array of nonnegative integers n.
    """
    r = float(r)
    if not r > 0.0:
        raise ValueError(f"coefficient parameter r must be > 0, got {r!r}")
    arr, scalar = _as_counts(n)
    out = gammaln(r + arr) - gammaln(r) - gammaln(arr + 1.0)
    return float(out) if scalar else out


def _nb_logpmf(r: float, p: float, arr):
    # shared log-space path: Harris and NB probabilities are the same formula
    return log_binom(r, arr) + r * math.log(p) + arr * math.log1p(-p)


def nb_pmf(r: float, p: float, n) -> float:
    """Negative binomial p.m.f. C(r+n-1, n) * p**r * (1-p)**n on {0, 1, 2, ...}.

    r > 0 is the index, p in (0, 1) the success probability, n the
    failure count (scalar or array).
    """
    r = float(r)
    p = float(p)
    if not r > 0.0:
        raise ValueError(f"index r must be > 0, got {r!r}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"success probability must lie in (0, 1), got {p!r}")
    arr, scalar = _as_counts(n)
    out = np.exp(_nb_logpmf(r, p, arr))
    return float(out) if scalar else out


def harris_pmf(params: HarrisParams, n) -> float:
    """P(X = 1 + n*k) for X Harris distributed with parameters (m, k).

    Identical to nb_pmf(1/k, 1/m, n) by the affine coupling X = 1 + k*I.
    Accepts a scalar or array count index n.
    """
    arr, scalar = _as_counts(n)
    out = np.exp(_nb_logpmf(params.index, 1.0 / params.m, arr))
    return float(out) if scalar else out


def harris_pgf(params: HarrisParams, s: float) -> float:
    """Probability generating function s / (m - (m-1) s**k)**(1/k).

    Defined for s >= 0 wherever the denominator base stays positive;
    the probabilistic contract is s in [0, 1], and values slightly
    above 1 are admitted so derivatives at 1 can be taken numerically.
    """
    s = float(s)
    if s < 0.0:
        raise ValueError(f"pgf argument must be >= 0, got {s!r}")
    base = params.m - (params.m - 1.0) * s**params.k
    if base <= 0.0:
        raise ValueError(
            f"pgf undefined at s={s!r}: m - (m-1)*s**k = {base!r} is not positive"
        )
    return s / base ** params.index


def harris_mean_var(params: HarrisParams) -> tuple:
    """Mean m and variance k*m*(m-1) of the Harris law."""
    m, k = params.m, params.k
    return m, k * m * (m - 1.0)


def decap_geometric_pmf(q: float, n) -> float:
    """Decapitated geometric p.m.f. q*(1-q)**(n-1) on {1, 2, 3, ...}.

    This is the k = 1 Harris law with q = 1/m (support starts at 1).
    """
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ValueError(f"parameter q must lie in (0, 1), got {q!r}")
    arr = np.asarray(n)
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValueError(f"support value must be integral, got {n!r}")
    if np.any(arr < 1):
        raise ValueError(f"support starts at 1, got {n!r}")
    out = q * (1.0 - q) ** (arr - 1)
    return float(out) if np.ndim(n) == 0 else out


def tail_bound_after(params: HarrisParams, n: int) -> float:
    """Certified upper bound on the Harris mass strictly beyond index n.

    Successive p.m.f. ratios are q*(r+j)/(j+1) <= q with q = 1 - 1/m
    (the index r = 1/k never exceeds 1), so the tail after n is at most
    pmf(n) * q / (1 - q).
    """
    q = 1.0 - 1.0 / params.m
    return harris_pmf(params, n) * q / (1.0 - q)


def truncation_index(params: HarrisParams, tail_bound: float,
                     max_terms: int = 1_000_000) -> int:
    """Smallest n whose certified remaining tail is below tail_bound."""
    if not 0.0 < tail_bound < 1.0:
        raise ValueError(f"tail bound must lie in (0, 1), got {tail_bound!r}")
    r = params.index
    q = 1.0 - 1.0 / params.m
    ratio = q / (1.0 - q)
    p = params.m ** (-r)
    n = 0
    while p * ratio >= tail_bound:
        p *= q * (r + n) / (n + 1)
        n += 1
        if n > max_terms:
            raise ResourceLimitError(
                f"support truncation exceeded {max_terms} terms for {params}"
            )
    return n


def pmf_table(params: HarrisParams, tail_bound: float = 1e-12,
              max_terms: int = 1_000_000) -> PmfTable:
    """Tabulate the p.m.f. until the certified tail drops below tail_bound."""
    n_stop = truncation_index(params, tail_bound, max_terms=max_terms)
    ns = np.arange(n_stop + 1)
    probs = harris_pmf(params, ns)
    entries = tuple(
        (SupportPoint(int(n), 1 + int(n) * params.k), float(p))
        for n, p in zip(ns, probs)
    )
    return PmfTable(params, entries, tail_mass=tail_bound_after(params, n_stop))
