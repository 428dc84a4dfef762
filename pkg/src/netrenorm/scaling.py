"""Scaling fits: N(l_B) curve forms, degree exponents, hub-hub correlations.

Curve fits are ordinary least squares on linearized data:

* power law   ``N = A * l_B**(-d_B)``  ->  log N vs log l_B, exponent d_B,
* exponential ``N = A * exp(-l_B/l_0)`` ->  log N vs l_B, exponent 1/l_0.

The topology verdict goes to whichever linearization has the larger r^2.
"""
from dataclasses import dataclass, field, asdict
import enum
import math

import numpy as np
from scipy import optimize, special

from .errors import DomainError

AMBIGUITY_MARGIN = 0.01


class FitKind(str, enum.Enum):
    POWER_LAW = "power_law"
    EXPONENTIAL = "exponential"


class Verdict(str, enum.Enum):
    FRACTAL = "fractal"
    SMALL_WORLD = "small_world"
    AMBIGUOUS = "ambiguous"


class Region(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class FitResult:
    kind: FitKind
    exponent: float
    intercept: float
    r_squared: float
    points_used: int
    aic: float = float("nan")

    def to_dict(self):
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


@dataclass(frozen=True)
class ScalingClass:
    verdict: Verdict
    power_fit: FitResult
    exp_fit: FitResult
    margin: float
    window: tuple = ()

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "margin": self.margin,
            "window": list(self.window),
            "power_fit": self.power_fit.to_dict(),
            "exp_fit": self.exp_fit.to_dict(),
        }


def fit_window(series):
    """(l_B, N) points used by the curve fits.

    l_B runs from 2 up to the largest l_B whose N still exceeds
    max(3, components); saturated tails would bias both fits.
    """
    floor = max(3, series.n_components)
    pts = [(lb, n) for lb, n in series.entries if lb >= 2 and n > 1]
    above = [lb for lb, n in pts if n > floor]
    if not above:
        return []
    top = max(above)
    return [(lb, n) for lb, n in pts if lb <= top]


def _ols(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    rss = float(resid @ resid)
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - rss / tss if tss > 0 else 1.0
    r2 = min(max(r2, 0.0), 1.0)
    aic = n * math.log(rss / n) + 4 if rss > 0 else -math.inf
    return float(slope), float(intercept), r2, aic


def _window_or_raise(series, window):
    pts = fit_window(series) if window is None else list(window)
    if len(pts) < 3:
        raise DomainError(f"need >= 3 usable (l_B, N) points with l_B >= 2, got {len(pts)}")
    return pts


def fit_power_law_curve(series, window=None):
    pts = _window_or_raise(series, window)
    lb = np.array([p[0] for p in pts], dtype=float)
    nb = np.array([p[1] for p in pts], dtype=float)
    slope, intercept, r2, aic = _ols(np.log(lb), np.log(nb))
    return FitResult(FitKind.POWER_LAW, -slope, intercept, r2, len(pts), aic)


def fit_exponential_curve(series, window=None):
    pts = _window_or_raise(series, window)
    lb = np.array([p[0] for p in pts], dtype=float)
    nb = np.array([p[1] for p in pts], dtype=float)
    slope, intercept, r2, aic = _ols(lb, np.log(nb))
    return FitResult(FitKind.EXPONENTIAL, -slope, intercept, r2, len(pts), aic)


def classify_topology(series, window=None):
    pts = _window_or_raise(series, window)
    pf = fit_power_law_curve(series, pts)
    ef = fit_exponential_curve(series, pts)
    margin = abs(pf.r_squared - ef.r_squared)
    if margin < AMBIGUITY_MARGIN:
        verdict = Verdict.AMBIGUOUS
    elif pf.r_squared > ef.r_squared:
        verdict = Verdict.FRACTAL
    else:
        verdict = Verdict.SMALL_WORLD
    return ScalingClass(verdict, pf, ef, margin, (pts[0][0], pts[-1][0]))


# -- degree exponent ---------------------------------------------------------

@dataclass(frozen=True)
class DegreeExponent:
    gamma: float
    xmin: int
    ks_statistic: float
    n_tail: int
    n_total: int = 0

    def to_dict(self):
        return asdict(self)


def _discrete_mle(tail, xmin):
    """Exact discrete power-law MLE over a tail with fixed xmin."""
    n = len(tail)
    slog = float(np.log(tail).sum())
    guess = 1.0 + n / float(np.log(tail / (xmin - 0.5)).sum())

    def nll(a):
        return n * math.log(special.zeta(a, xmin)) + a * slog

    lo, hi = 1.0 + 1e-6, max(guess * 2.0, 6.0)
    res = optimize.minimize_scalar(nll, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-7})
    return float(res.x)


def _ks_distance(tail, xmin, gamma):
    vals, counts = np.unique(tail, return_counts=True)
    emp = np.cumsum(counts) / len(tail)
    # model CDF P(X <= v) = 1 - zeta(gamma, v + 1) / zeta(gamma, xmin)
    model = 1.0 - special.zeta(gamma, vals + 1.0) / special.zeta(gamma, xmin)
    emp_before = np.concatenate([[0.0], emp[:-1]])
    model_before = 1.0 - special.zeta(gamma, vals) / special.zeta(gamma, xmin)
    return float(max(np.abs(emp - model).max(), np.abs(emp_before - model_before).max()))


def fit_degree_exponent(values, min_tail=50, max_candidates=200):
    """Discrete power-law fit with xmin chosen by minimum KS distance.

    For each candidate xmin (distinct observed values leaving at least
    ``min_tail`` points in the tail, capped at ``max_candidates``) gamma is
    the exact discrete maximum-likelihood estimate; the xmin giving the
    smallest KS distance wins.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or len(x) < 50:
        raise DomainError(f"need >= 50 values, got {len(x)}")
    if np.any(x < 1) or np.any(x != np.floor(x)):
        raise DomainError("values must be positive integers")
    x = np.sort(x)
    distinct = np.unique(x)
    if len(distinct) < 10:
        raise DomainError(f"need >= 10 distinct values, got {len(distinct)}")
    best = None
    for xmin in distinct[:max_candidates]:
        tail = x[np.searchsorted(x, xmin):]
        if len(tail) < min_tail or len(np.unique(tail)) < 2:
            break
        gamma = _discrete_mle(tail, xmin)
        ks = _ks_distance(tail, xmin, gamma)
        if best is None or ks < best.ks_statistic:
            best = DegreeExponent(gamma, int(xmin), ks, len(tail), len(x))
    if best is None:
        raise DomainError("no admissible xmin candidate")
    return best


def sample_discrete_power_law(gamma, n, xmin=1, rng=None, table_size=1_000_000):
    """Draw ``n`` samples of P(x) ~ x**-gamma on integers x >= xmin.

    Inverse CDF against an exact tabulated pmf; the (tiny) mass beyond the
    table is drawn from the continuous approximation.
    """
    rng = np.random.default_rng(rng)
    support = np.arange(xmin, xmin + table_size, dtype=float)
    norm = special.zeta(gamma, xmin)
    cdf = np.cumsum(support ** -gamma) / norm
    u = rng.random(n)
    idx = np.searchsorted(cdf, u, side="left")
    out = np.empty(n, dtype=np.int64)
    inside = idx < table_size
    out[inside] = support[idx[inside]].astype(np.int64)
    k = int((~inside).sum())
    if k:
        top = xmin + table_size - 0.5
        tail_u = rng.random(k)
        out[~inside] = np.floor(top * (1 - tail_u) ** (-1.0 / (gamma - 1)) + 0.5).astype(np.int64)
    return out


# -- hub-hub correlation scaling ----------------------------------------------

def epsilon_from_slope(gamma, slope):
    """Correlation exponent from E_b(k) ~ k**-(epsilon - gamma)."""
    return gamma - slope


def phase_region(gamma, epsilon):
    """I: epsilon < gamma - 1; II: gamma - 1 <= epsilon <= 2; III: epsilon > 2."""
    if gamma <= 1:
        raise DomainError("gamma must exceed 1")
    if epsilon < gamma - 1:
        return Region.I
    if epsilon <= 2:
        return Region.II
    return Region.III


@dataclass
class HubCorrelation:
    b: float
    gamma: float
    curve: list
    slope: float
    intercept: float
    epsilon: float
    region: Region
    reference: str = "node"
    flagged: list = field(default_factory=list)

    def to_dict(self):
        return {
            "b": self.b,
            "gamma": self.gamma,
            "slope": self.slope,
            "intercept": self.intercept,
            "epsilon": self.epsilon,
            "region": self.region.value,
            "reference": self.reference,
            "curve": [[k, e] for k, e in self.curve],
            "flagged_k": self.flagged,
        }


def hub_attraction_curve(g, b=3.0, reference="node"):
    """E_b(k) per distinct degree k, as ([(k, E_b)], [k with undefined E_b]).

    The numerator is the fraction of a degree-k node's links that end at
    degree >= b*k; the denominator is the fraction of nodes (``reference``
    ="node") or link ends (``reference="edge"``) with degree >= b*k.
    """
    if b <= 1:
        raise DomainError("b must exceed 1")
    deg = g.degrees()
    src = np.repeat(np.arange(g.n_nodes), deg)
    k_src = deg[src]
    k_dst = deg[g.indices]
    if reference == "node":
        ref = np.sort(deg[deg > 0])
    elif reference == "edge":
        ref = np.sort(k_src)
    else:
        raise DomainError(f"unknown reference {reference!r}")
    curve, flagged = [], []
    for k in np.unique(k_src):
        thr = b * k
        den = 1.0 - np.searchsorted(ref, thr, side="left") / len(ref)
        mine = k_dst[k_src == k]
        num = float((mine >= thr).mean())
        if den <= 0 or num <= 0:
            flagged.append(int(k))
            continue
        curve.append((int(k), float(num / den)))
    return curve, flagged


def hub_attraction(g, b=3.0, gamma=None, reference="node", min_edges=100):
    if g.n_edges < min_edges:
        raise DomainError(f"need >= {min_edges} edges, got {g.n_edges}")
    if gamma is None or gamma <= 1:
        raise DomainError("gamma must be given and exceed 1")
    curve, flagged = hub_attraction_curve(g, b, reference)
    if len(curve) < 3:
        raise DomainError(f"only {len(curve)} degrees with defined E_b(k); need >= 3")
    k = np.array([c[0] for c in curve], dtype=float)
    e = np.array([c[1] for c in curve], dtype=float)
    slope, intercept = np.polyfit(np.log(k), np.log(e), 1)
    eps = epsilon_from_slope(gamma, float(slope))
    return HubCorrelation(b, gamma, curve, float(slope), float(intercept), eps,
                          phase_region(gamma, eps), reference, flagged)
