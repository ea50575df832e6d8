"""Asymptotic rate bounds for locally repairable codes.

Closed forms (rate cap, Singleton and Plotkin types, the automorphism
construction bound, the two earlier construction bounds, and the two
parity-augmentation bounds) are evaluated directly.  The linear
programming bound and the locality-aware Gilbert-Varshamov bound carry an
inner one-dimensional minimization: the LP bound over the puncturing
fraction tau, the GV bound over s in (0, 1].

The GV inner function

    h(s) = log_q((1+(q-1)s)^(r+1) + (q-1)(1-s)^(r+1)) / (r+1) - delta log_q(s)

is evaluated in the log domain (two-term log-sum-exp) so q up to 2^64 and
very large r never overflow.  h is unimodal, so the minimum is found by
golden-section search seeded near s = 1/(q-1), guarded by a composite
dense-grid scan over the whole interval; `find_s0` locates the critical
point independently by bisection on the sign of h'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt, log, log1p, sqrt

import numpy as np

from .errors import ConvergenceFailure, DomainError, InvariantViolation, NotAdmissible

BOUND_IDS = (
    "rate_cap",
    "singleton_asym",
    "plotkin",
    "lp",
    "gv",
    "main",
    "btv1",
    "btv2",
    "naive_gv",
    "naive_tvz",
)

#: bounds whose formulas require q to be a perfect square
_SQUARE_IDS = frozenset({"main", "btv1", "btv2", "naive_tvz"})
#: bounds defined only for delta <= 1 - 1/q
_GV_RANGE_IDS = frozenset({"plotkin", "gv", "lp", "naive_gv"})

#: strict-comparison tolerance for "bound A exceeds bound B" decisions
BEATS_TOL = 1e-9

_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class BoundQuery:
    """One bound evaluation request; `value()` validates and dispatches."""

    bound_id: str
    q: float
    r: int
    delta: float

    def value(self) -> float:
        return evaluate(self.bound_id, self.q, self.r, self.delta)


@dataclass(frozen=True)
class CurveRow:
    delta: float
    bound_id: str
    value: float


def _check_q(q: float) -> float:
    q = float(q)
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    return q


def _sqrt_q(q: float) -> int:
    """Integer square root of q; DomainError unless q is a perfect square."""
    if q != int(q):
        raise DomainError(f"q = {q} is not a perfect square")
    rt = isqrt(int(q))
    if rt * rt != int(q):
        raise DomainError(f"q = {q} is not a perfect square")
    return rt


def entropy(q: float, x: float) -> float:
    """q-ary entropy x log_q(q-1) - x log_q(x) - (1-x) log_q(1-x).

    Defined on [0, 1 - 1/q] with the 0 log 0 = 0 convention; arguments
    within 1e-12 beyond an endpoint are clamped to it.
    """
    q = _check_q(q)
    hi = 1.0 - 1.0 / q
    if x < -_DOMAIN_SLACK or x > hi + _DOMAIN_SLACK:
        raise DomainError(f"x = {x} outside [0, {hi}]")
    x = min(max(x, 0.0), hi)
    lnq = log(q)
    out = x * log(q - 1.0) / lnq if x > 0.0 else 0.0
    if 0.0 < x:
        out -= x * log(x) / lnq
    if x < 1.0:
        out -= (1.0 - x) * log1p(-x) / lnq
    return out


def singleton_finite(n: int, k: int, r: int) -> int:
    """Largest minimum distance permitted: n - k - ceil(k/r) + 2."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 1 <= r <= k:
        raise DomainError(f"need 1 <= r <= k, got r={r}, k={k}")
    return n - k - (-(-k // r)) + 2


def _check_delta(q: float, delta: float, bound_id: str) -> float:
    if bound_id in _GV_RANGE_IDS:
        hi = 1.0 - 1.0 / q
        if delta < -_DOMAIN_SLACK or delta > hi + _DOMAIN_SLACK:
            raise DomainError(
                f"{bound_id} needs delta in [0, {hi}], got {delta}"
            )
        return min(max(delta, 0.0), hi)
    if delta < -_DOMAIN_SLACK or delta > 1.0 + _DOMAIN_SLACK:
        raise DomainError(f"delta = {delta} outside [0, 1]")
    return min(max(delta, 0.0), 1.0)


def closed_bound(bound_id: str, q: float, r: int, delta: float) -> float:
    """Evaluate one closed-form bound; values may be negative (callers clamp
    for display only)."""
    q = _check_q(q)
    if r < 1:
        raise DomainError(f"locality must be >= 1, got {r}")
    delta = _check_delta(q, delta, bound_id)
    frac = r / (r + 1.0)
    if bound_id == "rate_cap":
        return frac
    if bound_id == "singleton_asym":
        return frac * (1.0 - delta)
    if bound_id == "plotkin":
        return frac * (1.0 - q * delta / (q - 1.0))
    if bound_id == "naive_gv":
        return frac - entropy(q, delta)
    if bound_id in _SQUARE_IDS:
        rt = _sqrt_q(q)
        if bound_id == "main":
            return frac * (1.0 - delta - (rt + r - 1.0) / (q - rt))
        if bound_id == "naive_tvz":
            return frac - delta - 1.0 / (rt - 1.0)
        if bound_id == "btv1":
            if r != rt - 1:
                raise NotAdmissible(f"btv1 requires r = sqrt(q) - 1 = {rt - 1}")
            return frac * (1.0 - delta - 3.0 / (rt + 1.0))
        if bound_id == "btv2":
            if (rt + 1) % (r + 1) != 0:
                raise NotAdmissible(
                    f"btv2 requires (r+1) | (sqrt(q)+1) = {rt + 1}"
                )
            return frac * (1.0 - delta - (rt + r) / (q - 1.0))
    raise DomainError(f"unknown closed-form bound id {bound_id!r}")


# -- LP bound ----------------------------------------------------------------

def lp_inner(q: float, x: float) -> float:
    """f_q(x) = H_q((sqrt((q-1)(1-x)) - sqrt(x))^2 / q) for x in [0, 1]."""
    q = _check_q(q)
    if x < -_DOMAIN_SLACK or x > 1.0 + _DOMAIN_SLACK:
        raise DomainError(f"f_q argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    arg = (sqrt((q - 1.0) * (1.0 - x)) - sqrt(x)) ** 2 / q
    return entropy(q, arg)


_INVPHI = (sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - sqrt(5.0)) / 2.0


def _golden(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of f on [a, b] to interval width <= tol."""
    dist = b - a
    c = a + _INVPHI2 * dist
    d = a + _INVPHI * dist
    yc, yd = f(c), f(d)
    for _ in range(400):
        if dist <= tol:
            break
        if yc < yd:
            b, d, yd = d, c, yc
            dist *= _INVPHI
            c = a + _INVPHI2 * dist
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            dist *= _INVPHI
            d = a + _INVPHI * dist
            yd = f(d)
    best = min((yc, c), (yd, d), (f(a), a), (f(b), b))
    return best[1], best[0]


def lp_bound(q: float, r: int, delta: float) -> float:
    """Linear-programming upper bound: minimize over the puncturing fraction.

    tau ranges over [0, (1-delta)/(r+1)] so the f_q argument stays in [0, 1];
    dense 2^12 grid, then golden-section refinement to |dtau| <= 1e-12.
    """
    q = _check_q(q)
    if r < 1:
        raise DomainError(f"locality must be >= 1, got {r}")
    delta = _check_delta(q, delta, "lp")

    def objective(tau: float) -> float:
        rem = 1.0 - tau * (r + 1.0)
        if rem <= 0.0:
            return tau * r
        return tau * r + rem * lp_inner(q, min(delta / rem, 1.0))

    tau_max = (1.0 - delta) / (r + 1.0)
    if tau_max <= 0.0:
        return objective(0.0)
    n_grid = 1 << 12
    step = tau_max / n_grid
    best_i = min(range(n_grid + 1), key=lambda i: objective(i * step))
    lo = max(0.0, (best_i - 1) * step)
    hi = min(tau_max, (best_i + 1) * step)
    _, val = _golden(objective, lo, hi, 1e-12)
    return min(val, objective(0.0), objective(tau_max))


# -- GV bound ----------------------------------------------------------------

def _h(q: float, r: int, delta: float, s: float) -> float:
    """The GV inner function, via two-term log-sum-exp."""
    lnq = log(q)
    a = (r + 1.0) * log1p((q - 1.0) * s)
    b = -math.inf if s >= 1.0 else log(q - 1.0) + (r + 1.0) * log1p(-s)
    m = max(a, b)
    lse = m + log(math.exp(a - m) + math.exp(b - m))
    return lse / ((r + 1.0) * lnq) - delta * log(s) / lnq


def _h_grid(q: float, r: int, delta: float, grid) -> np.ndarray:
    """Vectorized _h over a numpy grid."""
    lnq = log(q)
    a = (r + 1.0) * np.log1p((q - 1.0) * grid)
    with np.errstate(divide="ignore"):
        b = log(q - 1.0) + (r + 1.0) * np.log1p(-np.minimum(grid, 1.0))
    lse = np.logaddexp(a, b)
    return lse / ((r + 1.0) * lnq) - delta * np.log(grid) / lnq


def _gv_domain(q: float, r: int, delta: float) -> tuple[float, float]:
    q = _check_q(q)
    if r < 1:
        raise DomainError(f"locality must be >= 1, got {r}")
    hi = 1.0 - 1.0 / q
    if delta <= 0.0 or delta > hi + _DOMAIN_SLACK:
        raise DomainError(f"gv needs delta in (0, {hi}], got {delta}")
    return q, min(delta, hi)


def gv_bound(q: float, r: int, delta: float) -> float:
    """Locality-aware Gilbert-Varshamov rate bound 1 - min_{0<s<=1} h(s).

    Golden-section on the seed window near 1/(q-1) plus a composite
    dense-grid fallback over the whole interval; the better of the two wins.
    """
    q, delta = _gv_domain(q, r, delta)

    def f(s: float) -> float:
        return _h(q, r, delta, s)

    lo = 1.0 / (q - 1.0)
    eps = 2.0 ** (-r) if r < 1074 else 0.0
    seed_hi = min(1.0, lo + eps + 1e-3)
    _, v1 = _golden(f, lo, seed_hi, 1e-14 * lo)

    # the critical point satisfies s0 >= delta/(q-1)
    glo = max(delta / (2.0 * (q - 1.0)), 1e-280)
    grid = np.unique(
        np.concatenate([np.geomspace(glo, 1.0, 2048), np.linspace(glo, 1.0, 2048)])
    )
    vals = _h_grid(q, r, delta, grid)
    i = int(np.argmin(vals))
    a = float(grid[max(0, i - 1)])
    b = float(grid[min(len(grid) - 1, i + 1)])
    _, v2 = _golden(f, a, b, 1e-14 * max(a, glo))

    return 1.0 - min(v1, v2)


def gv_derivative_sign(q: float, r: int, delta: float, s: float) -> int:
    """Sign of h'(s) from the numerator in its cancelled two-term form

        (1+(q-1)s)^r [(1-delta)(q-1)s - delta]
            - (q-1)(1-s)^r [delta + (1-delta)s],

    which keeps the leading powers from swamping the sign near s = 1/(q-1)
    (at delta = 1/2 this is the usual derivative display, where the bracket
    vanishes at that point).  Both terms are compared in the log domain.
    """
    if s <= 0.0:
        raise DomainError(f"s must be positive, got {s}")
    if s > 1.0:
        raise DomainError(f"s must be <= 1, got {s}")
    a_factor = (1.0 - delta) * (q - 1.0) * s - delta
    b_factor = delta + (1.0 - delta) * s  # > 0 throughout (0, 1]
    log_b = (
        -math.inf
        if s >= 1.0
        else log(q - 1.0) + r * log1p(-s) + log(b_factor)
    )
    if a_factor <= 0.0:
        return -1 if log_b > -math.inf or a_factor < 0.0 else 0
    log_a = r * log1p((q - 1.0) * s) + log(a_factor)
    if log_a > log_b:
        return 1
    if log_a < log_b:
        return -1
    return 0


def find_s0(q: float, r: int, delta: float) -> float:
    """The unique critical point of h, by bisection on the sign of h'.

    For delta = 1/2 the result is checked against the window
    (1/(q-1), 1/(q-1) + 2^-r).
    """
    q, delta = _gv_domain(q, r, delta)
    hi = 1.0
    if gv_derivative_sign(q, r, delta, hi) < 0:
        # h decreasing on all of (0, 1]: minimum sits at the right endpoint
        return 1.0
    lo = 1.0 / (q - 1.0)
    tries = 0
    while gv_derivative_sign(q, r, delta, lo) > 0:
        lo /= 2.0
        tries += 1
        if tries > 1100:
            raise ConvergenceFailure("could not bracket a sign change of h'")
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if gv_derivative_sign(q, r, delta, mid) < 0:
            lo = mid
        else:
            hi = mid
    s0 = 0.5 * (lo + hi)
    if delta == 0.5:
        # window check, when (left, left + 2^-r) is resolvable in doubles
        left = 1.0 / (q - 1.0)
        eps = 2.0 ** (-r) if r < 1074 else 0.0
        if eps >= 4.0 * math.ulp(left) and not left < s0 < left + eps:
            raise InvariantViolation(
                f"s0 = {s0} outside ({left}, {left + eps})"
            )
    return s0


# -- comparisons and sweeps ---------------------------------------------------

def evaluate(bound_id: str, q: float, r: int, delta: float) -> float:
    """Evaluate any bound id, dispatching to the closed forms, lp or gv."""
    if bound_id == "lp":
        return lp_bound(q, r, delta)
    if bound_id == "gv":
        return gv_bound(q, r, delta)
    if bound_id in BOUND_IDS:
        return closed_bound(bound_id, q, r, delta)
    raise DomainError(f"unknown bound id {bound_id!r}")


def _prime_power(q: int) -> tuple[int, int]:
    n = int(q)
    if n < 2:
        raise DomainError(f"q = {q} is not a prime power")
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        p = n
    w = 0
    while n % p == 0:
        n //= p
        w += 1
    if n != 1:
        raise DomainError(f"q = {q} is not a prime power")
    return p, w


def admissible_localities(q: int) -> list[int]:
    """All admissible localities r = u p^v - 1 for the square prime power q."""
    from . import galois, tower

    p, w = _prime_power(q)
    if w % 2:
        raise DomainError(f"q = {q} is not a square")
    spec = galois.field_create(p, w)
    return [r for (_, _, r) in tower.admissible_params(spec)]


def beats_gv_localities(q: int, delta: float, candidates) -> set[int]:
    """Candidates r whose construction bound strictly exceeds the GV bound.

    Strict comparison with tolerance: main > gv + 1e-9.  Every candidate
    must be admissible for q.
    """
    admissible = set(admissible_localities(q))
    bad = [r for r in candidates if r not in admissible]
    if bad:
        raise NotAdmissible(f"candidates {bad} are not admissible for q = {q}")
    out = set()
    for r in candidates:
        if closed_bound("main", q, r, delta) > gv_bound(q, r, delta) + BEATS_TOL:
            out.add(r)
    return out


def crossover_delta_naive(q: float, r: int) -> float:
    """delta above which the parity-augmentation bound drops below the
    construction bound: (r(r-1) - sqrt(q)) / (q - sqrt(q))."""
    q = _check_q(q)
    rt = _sqrt_q(q)
    if r < 1:
        raise DomainError(f"locality must be >= 1, got {r}")
    return (r * (r - 1.0) - rt) / (q - rt)


def sweep(ids, q: float, r: int, delta_grid) -> list[CurveRow]:
    """One CurveRow per (delta, id), delta-major; out-of-domain rows carry NaN.

    Structural errors (unknown id, inadmissible btv query) propagate.
    """
    grid = list(delta_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("delta grid must be strictly increasing")
    for bound_id in ids:
        if bound_id not in BOUND_IDS:
            raise DomainError(f"unknown bound id {bound_id!r}")
    rows = []
    for delta in grid:
        for bound_id in ids:
            try:
                value = evaluate(bound_id, q, r, delta)
            except DomainError:
                value = math.nan
            rows.append(CurveRow(float(delta), bound_id, value))
    return rows


def rows_to_csv(rows) -> str:
    """CSV with header delta,bound_id,value; round-trip floats, LF endings."""
    lines = ["delta,bound_id,value"]
    for row in rows:
        lines.append(f"{row.delta!r},{row.bound_id},{row.value!r}")
    return "\n".join(lines) + "\n"
