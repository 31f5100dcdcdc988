"""Closed forms and quadratures for PCF on rooted d-ary trees.

Conditioned on staying warm, a cluster at time t is a bond-percolation
cluster with edge probability ``open_prob(alpha, t)``.  Integrating over the
freezing time of the root gives

    P(root cluster = C) = alpha * int_0^{1/(1+alpha)} p^a (1-p)^b (1-(1+alpha)p)^(-1/(1+alpha)) dp

with ``a = |C| - 1`` edges and ``b`` closed boundary edges.  The substitution
``s = (1-(1+alpha)p)^(alpha/(1+alpha))`` absorbs the endpoint singularity and
the weight, leaving ``int_0^1 p(s)^a (1-p(s))^b ds`` on a smooth integrand.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate, optimize
from scipy.special import erfc, gammaln

from . import _kernels
from .errors import BracketError, DomainError, NumericError, ParameterError, SizeError

QUAD_RTOL = 1e-12
EXACT_COUNT_LIMIT = 10_000
# below this d*k the log count is taken from the exact integer
EXACT_LOG_LIMIT = 256


@dataclass(frozen=True)
class TreeParams:
    d: int
    alpha: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ParameterError("d must be an integer >= 2")
        if not self.alpha > 0:
            raise ParameterError("alpha must be positive")


def open_prob(alpha: float, t: float) -> float:
    """Edge-open probability of a warm cluster at time ``t``:
    ``(1 - exp(-(1+alpha) t)) / (1+alpha)``."""
    if alpha < 0 or t < 0:
        raise ParameterError("need alpha >= 0 and t >= 0")
    r = 1.0 + alpha
    if math.isinf(t):
        return 1.0 / r
    return -math.expm1(-r * t) / r


def percolation_time(alpha: float, t: float) -> float:
    """Time at which plain percolation reaches ``open_prob(alpha, t)``."""
    return -math.log1p(-open_prob(alpha, t))


def meanfield_time(alpha: float, t: float) -> float:
    """Complete-graph rescaling ``(1 - exp(-alpha t)) / alpha``; equals ``t`` at alpha=0."""
    if alpha < 0 or t < 0:
        raise ParameterError("need alpha >= 0 and t >= 0")
    if alpha == 0:
        return float(t)
    if math.isinf(t):
        return 1.0 / alpha
    return -math.expm1(-alpha * t) / alpha


def critical_alpha(d: int) -> float:
    if d < 2:
        raise ParameterError("d must be >= 2")
    return float(d - 1)


def critical_time(d: int, alpha: float) -> float:
    """First time infinite clusters appear, the solution of ``open_prob(alpha, t) = 1/d``.

    Equals ``log(d / (d - 1 - alpha)) / (1 + alpha)``.
    """
    if d < 2:
        raise ParameterError("d must be >= 2")
    if not 0 < alpha < d - 1:
        raise DomainError(f"no critical time unless 0 < alpha < {d - 1}")
    return math.log(d / (d - 1.0 - alpha)) / (1.0 + alpha)


def log_cluster_prob(alpha: float, edge_count: int, boundary_count: int) -> float:
    """Natural log of :func:`cluster_prob`, safe for counts in the thousands."""
    if not alpha > 0:
        raise ParameterError("alpha must be positive")
    a, b = int(edge_count), int(boundary_count)
    if a < 0 or b < 0:
        raise ParameterError("counts must be non-negative")
    if a == 0 and b == 0:
        return 0.0
    r = 1.0 + alpha
    q = 1.0 / r
    expo = r / alpha
    # peak of p^a (1-p)^b on [0, q]; subtract it so the integrand is <= 1
    p_star = min(a / (a + b), q)
    log_peak = (a * math.log(p_star) if a else 0.0) + (b * math.log1p(-p_star) if b else 0.0)
    s_star = (1.0 - r * p_star) ** (alpha / r) if p_star < q else 0.0

    points = [s_star] if 0.0 < s_star < 1.0 else None
    val, err, info = integrate.quad(_kernels.cluster_integrand, 0.0, 1.0,
                                    args=(float(a), float(b), log_peak, expo, q),
                                    points=points, epsabs=0.0, epsrel=QUAD_RTOL, limit=400,
                                    full_output=1)[:3]
    if not val > 0 or err > 1e-10 * val:
        raise NumericError(f"quadrature failed for a={a}, b={b}, alpha={alpha}: "
                           f"value={val!r}, error={err!r}, evaluations={info['neval']}")
    return log_peak + math.log(val)


def cluster_prob(alpha: float, edge_count: int, boundary_count: int) -> float:
    """Probability that a given tree cluster with ``edge_count`` edges and
    ``boundary_count`` outer edges is the root's final cluster.

    With ``boundary_count = 0`` this is the probability that the final root
    cluster contains the given cluster.  The branching factor does not enter.
    """
    return math.exp(log_cluster_prob(alpha, edge_count, boundary_count))


def count_subtrees(d: int, k: int) -> int:
    """Number of k-vertex rooted subtrees of the d-ary tree, ``binom(dk, k-1) / k``.

    Exact integer for ``d*k <= 10^4``; beyond that the value is huge and
    :func:`log_count_subtrees` should be used instead.
    """
    if d < 2 or k < 1:
        raise ParameterError("need d >= 2 and k >= 1")
    if d * k > EXACT_COUNT_LIMIT:
        raise SizeError(f"d*k = {d * k} exceeds {EXACT_COUNT_LIMIT}; use log_count_subtrees")
    return math.comb(d * k, k - 1) // k


def log_count_subtrees(d: int, k) -> np.ndarray | float:
    """Natural log of :func:`count_subtrees`, via log-gamma except for small
    ``d*k``.  Accepts arrays of ``k``."""
    ks = np.asarray(k)
    if np.any(ks < 1) or d < 2:
        raise ParameterError("need d >= 2 and k >= 1")
    out = np.empty(ks.shape, dtype=float)
    flat_k, flat_out = ks.reshape(-1), out.reshape(-1)
    for i, kk in enumerate(flat_k.tolist()):
        if d * kk <= EXACT_LOG_LIMIT:
            flat_out[i] = math.log(count_subtrees(d, kk))
        else:
            flat_out[i] = (gammaln(d * kk + 1) - gammaln(kk + 1)
                           - gammaln((d - 1) * kk + 2))
    return float(out) if np.ndim(k) == 0 else out


@dataclass
class ClusterSizePmf:
    """Root-cluster size distribution ``p[i] = P(|C| = k[i])``.

    ``k`` may be sparse (e.g. log-spaced for tail fits); the mass fields are
    only filled when ``k`` is the full range ``1..k_max``.
    """

    d: int
    alpha: float
    k: np.ndarray
    log_p: np.ndarray
    mass_deficit: float | None = None
    extrapolated_deficit: float | None = None
    tail_model: str | None = None
    meta: dict = field(default_factory=dict)

    @property
    def p(self) -> np.ndarray:
        return np.exp(self.log_p)

    @property
    def k_max(self) -> int:
        return int(self.k[-1])

    def p_k(self, k: int) -> float:
        i = np.searchsorted(self.k, k)
        if i >= len(self.k) or self.k[i] != k:
            raise KeyError(k)
        return float(np.exp(self.log_p[i]))

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "p_k", "log_p_k"])
            for kk, lp in zip(self.k.tolist(), self.log_p.tolist()):
                w.writerow([kk, repr(math.exp(lp)), repr(lp)])


def log_root_cluster_prob(d: int, alpha: float, k: int) -> float:
    """``log P(|C_root| = k)``: subtree count times the probability of one
    cluster with ``k-1`` edges and ``(d-1)k+1`` boundary edges."""
    return log_count_subtrees(d, k) + log_cluster_prob(alpha, k - 1, (d - 1) * k + 1)


def root_cluster_size_pmf(params: TreeParams, k_max: int, ks=None) -> ClusterSizePmf:
    """Exact root-cluster PMF for ``k = 1..k_max`` (or the given ``ks``).

    With the full range the tail beyond ``k_max`` is extrapolated:
    geometrically when ``alpha > d-1`` (subcritical) and with a fitted
    power law otherwise.
    """
    d, alpha = params.d, params.alpha
    if k_max < 1:
        raise ParameterError("k_max must be >= 1")
    full = ks is None
    k = np.arange(1, k_max + 1) if full else np.unique(np.asarray(ks, dtype=np.int64))
    if k.size == 0 or k[0] < 1 or k[-1] > k_max:
        raise ParameterError("ks must lie in 1..k_max")
    log_p = np.array([log_root_cluster_prob(d, alpha, int(kk)) for kk in k])
    pmf = ClusterSizePmf(d, alpha, k, log_p)
    if full:
        _fill_mass(pmf)
    return pmf


def _fill_mass(pmf: ClusterSizePmf) -> None:
    p = pmf.p
    deficit = 1.0 - math.fsum(p.tolist())
    pmf.mass_deficit = deficit
    n = len(p)
    if n < 20:
        return
    if pmf.alpha > pmf.d - 1:
        ratio = p[-1] / p[-2]
        tail = p[-1] * ratio / (1.0 - ratio)
        pmf.tail_model = "geometric"
        pmf.meta["ratio"] = float(ratio)
    else:
        lo = max(10, n // 10)
        fit = fit_tail_exponent(pmf, lo, n)
        gamma = fit.exponent
        # integral of C x^-gamma from k_max + 1/2 to infinity
        c = math.exp(fit.intercept)
        tail = c * (n + 0.5) ** (1.0 - gamma) / (gamma - 1.0) if gamma > 1 else math.inf
        pmf.tail_model = "power"
        pmf.meta["exponent"] = gamma
    pmf.meta["tail"] = float(tail)
    pmf.extrapolated_deficit = deficit - tail


@dataclass(frozen=True)
class TailFit:
    exponent: float
    intercept: float
    k_range: tuple[int, int]
    residual: float
    points: int


def fit_tail_exponent(pmf: ClusterSizePmf, k_lo: int = 100, k_hi: int | None = None) -> TailFit:
    """Least-squares slope of ``log p_k`` against ``log k`` on ``[k_lo, k_hi]``;
    ``exponent`` is minus the slope."""
    k_hi = pmf.k_max if k_hi is None else k_hi
    if k_lo < 10 or k_hi <= k_lo or k_hi > pmf.k_max:
        raise DomainError(f"need 10 <= k_lo < k_hi <= {pmf.k_max}")
    sel = (pmf.k >= k_lo) & (pmf.k <= k_hi)
    if sel.sum() < 2:
        raise DomainError("fewer than two PMF points in the fit range")
    lp = pmf.log_p[sel]
    if not np.all(np.isfinite(lp)):
        raise DomainError("zero or negative masses in the fit range")
    x = np.log(pmf.k[sel].astype(float))
    slope, intercept = np.polyfit(x, lp, 1)
    resid = float(np.max(np.abs(lp - (slope * x + intercept))))
    return TailFit(float(-slope), float(intercept), (int(k_lo), int(k_hi)), resid, int(sel.sum()))


def fit_from_values(k, values, k_lo: int, k_hi: int) -> TailFit:
    """:func:`fit_tail_exponent` for raw ``(k, p_k)`` arrays."""
    v = np.asarray(values, dtype=float)
    if np.any(v <= 0):
        raise DomainError("zero or negative masses in the fit range")
    pmf = ClusterSizePmf(0, 0.0, np.asarray(k), np.log(v))
    return fit_tail_exponent(pmf, k_lo, k_hi)


def star_open_bound(degree: int, alpha: float) -> float:
    """``P(Exp(alpha) > min of degree iid Gamma(1/2, 1))``.

    With ``y = u^2`` the minimum has density
    ``degree * (2/sqrt(pi)) exp(-u^2) erfc(u)^(degree-1)`` in ``u``, so the
    bound is a smooth one-dimensional integral of that against ``exp(-alpha u^2)``.
    """
    if degree < 1:
        raise ParameterError("degree must be >= 1")
    if not alpha > 0:
        raise ParameterError("alpha must be positive")
    c = degree * 2.0 / math.sqrt(math.pi)
    # integrand <= c exp(-(1+alpha) u^2); beyond u_max it is below c e^-60
    u_max = math.sqrt(60.0 / (1.0 + alpha))

    def f(u):
        return c * math.exp(-(1.0 + alpha) * u * u) * erfc(u) ** (degree - 1)

    val, err = integrate.quad(f, 0.0, u_max, epsabs=0.0, epsrel=1e-13, limit=200)
    if err > 1e-10 * val:
        raise NumericError(f"star bound quadrature error {err!r} for alpha={alpha}")
    return val


def alpha_star(d: int, p_c_site: float, bracket=(1e-8, 1e8)) -> float:
    """Largest alpha with ``star_open_bound(2d, alpha) >= p_c_site`` (bisection
    in log alpha; the bound is strictly decreasing)."""
    if not 0 < p_c_site < 1:
        raise ParameterError("p_c_site must lie in (0, 1)")
    lo, hi = math.log(bracket[0]), math.log(bracket[1])

    def g(x):
        return star_open_bound(2 * d, math.exp(x)) - p_c_site

    glo, ghi = g(lo), g(hi)
    if glo < 0 or ghi > 0:
        raise BracketError(f"f_d does not cross {p_c_site} on alpha in {bracket}: "
                           f"f(lo)-p={glo:.3g}, f(hi)-p={ghi:.3g}")
    x = optimize.bisect(g, lo, hi, xtol=1e-12, maxiter=200)
    return math.exp(x)
