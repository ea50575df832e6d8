import math
import random

import numpy as np
import pytest

from lrctower import bounds
from lrctower.errors import DomainError, NotAdmissible

# ---------------------------------------------------------------------------
# independent oracles: dense grids with their own log-sum-exp, no reuse of
# the library's search code
# ---------------------------------------------------------------------------

def gv_grid_oracle(q, r, delta, points=10**6):
    glo = max(delta / (2.0 * (q - 1.0)), 1e-280)
    s = np.geomspace(glo, 1.0, points)
    lnq = math.log(q)
    a = (r + 1.0) * np.log1p((q - 1.0) * s)
    with np.errstate(divide="ignore"):
        b = math.log(q - 1.0) + (r + 1.0) * np.log1p(-np.minimum(s, 1.0))
    h = np.logaddexp(a, b) / ((r + 1.0) * lnq) - delta * np.log(s) / lnq
    return 1.0 - float(h.min()), s, h


def gv_zoomed_oracle(q, r, delta):
    """Two-stage pure-grid minimum, fine enough for 1e-10 value agreement."""
    _, s, h = gv_grid_oracle(q, r, delta, points=200_000)
    i = int(np.argmin(h))
    lo, hi = s[max(0, i - 2)], s[min(len(s) - 1, i + 2)]
    s2 = np.linspace(lo, hi, 200_000)
    lnq = math.log(q)
    a = (r + 1.0) * np.log1p((q - 1.0) * s2)
    with np.errstate(divide="ignore"):
        b = math.log(q - 1.0) + (r + 1.0) * np.log1p(-np.minimum(s2, 1.0))
    h2 = np.logaddexp(a, b) / ((r + 1.0) * lnq) - delta * np.log(s2) / lnq
    return 1.0 - float(h2.min())


def lp_grid_oracle(q, r, delta, points=10**6):
    tau_max = (1.0 - delta) / (r + 1.0)
    tau = np.linspace(0.0, tau_max, points)
    rem = 1.0 - tau * (r + 1.0)
    x = np.where(rem > 0, np.minimum(delta / np.where(rem > 0, rem, 1.0), 1.0), 0.0)
    inner = (np.sqrt((q - 1.0) * (1.0 - x)) - np.sqrt(x)) ** 2 / q
    lnq = math.log(q)
    with np.errstate(divide="ignore", invalid="ignore"):
        hq = (
            inner * math.log(q - 1.0) / lnq
            - np.where(inner > 0, inner * np.log(np.maximum(inner, 1e-320)), 0.0) / lnq
            - np.where(inner < 1, (1 - inner) * np.log1p(-np.minimum(inner, 1.0)), 0.0) / lnq
        )
    vals = tau * r + np.where(rem > 0, rem * hq, 0.0)
    return float(vals.min())


# -- entropy ------------------------------------------------------------------

def test_entropy_binary_maximum():
    assert bounds.entropy(2, 0.5) == 1.0


@pytest.mark.parametrize("q", [2, 3, 4, 9, 64, 256])
def test_entropy_at_zero(q):
    assert bounds.entropy(q, 0.0) == 0.0


@pytest.mark.parametrize("q", [4, 9, 256])
def test_entropy_gv_corner(q):
    assert bounds.entropy(q, 1 - 1 / q) == pytest.approx(1.0, abs=1e-12)


def test_entropy_domain():
    with pytest.raises(DomainError):
        bounds.entropy(4, 0.8)
    with pytest.raises(DomainError):
        bounds.entropy(4, -0.1)


# -- finite Singleton ----------------------------------------------------------

def test_singleton_finite_examples():
    assert bounds.singleton_finite(12, 4, 2) == 8
    for n, k in [(10, 4), (31, 11), (6, 6)]:
        assert bounds.singleton_finite(n, k, k) == n - k + 1
        assert bounds.singleton_finite(n, k, 1) == n - 2 * k + 2


def test_singleton_finite_domain():
    with pytest.raises(DomainError):
        bounds.singleton_finite(4, 5, 2)
    with pytest.raises(DomainError):
        bounds.singleton_finite(6, 4, 5)


# -- closed forms ----------------------------------------------------------------

def test_main_example_value():
    assert bounds.closed_bound("main", 256, 2, 0.5) == pytest.approx(103 / 360, abs=1e-15)


def test_btv1_example_value():
    assert bounds.closed_bound("btv1", 256, 15, 0.5) == pytest.approx(165 / 544, abs=1e-15)


def test_naive_tvz_example_value():
    assert bounds.closed_bound("naive_tvz", 256, 3, 0.5) == pytest.approx(11 / 60, abs=1e-15)


def test_singleton_asym_zero_rate_endpoint():
    for q in (4, 9, 256):
        assert bounds.closed_bound("singleton_asym", q, 3, 1.0) == 0.0


def test_btv_admissibility():
    with pytest.raises(NotAdmissible):
        bounds.closed_bound("btv1", 256, 3, 0.5)
    assert bounds.closed_bound("btv2", 256, 16, 0.5) < 1  # 17 | 17
    with pytest.raises(NotAdmissible):
        bounds.closed_bound("btv2", 256, 2, 0.5)


def test_square_requirement():
    with pytest.raises(DomainError):
        bounds.closed_bound("main", 5, 2, 0.5)


# -- LP bound ---------------------------------------------------------------------

def test_lp_bounded_by_endpoint():
    for (q, r, d) in [(4, 2, 0.3), (9, 3, 0.5), (64, 2, 0.7), (16, 5, 0.2)]:
        assert bounds.lp_bound(q, r, d) <= bounds.lp_inner(q, d) + 1e-12


def test_lp_against_dense_grid_oracle():
    for (q, r, d) in [(4, 2, 0.0), (4, 2, 0.4), (9, 2, 0.5), (16, 3, 0.25)]:
        assert bounds.lp_bound(q, r, d) == pytest.approx(
            lp_grid_oracle(q, r, d), abs=1e-8
        )


def test_lp_at_gv_corner():
    q, r = 4, 2
    d = 1 - 1 / q
    assert bounds.lp_bound(q, r, d) == pytest.approx(lp_grid_oracle(q, r, d), abs=1e-8)


# -- GV bound ---------------------------------------------------------------------

def test_gv_small_delta_limit():
    for (q, r) in [(4, 1), (9, 2), (256, 3)]:
        assert bounds.gv_bound(q, r, 1e-12) == pytest.approx(r / (r + 1), abs=1e-9)


def test_gv_h_at_one_is_one():
    # h(1) = log_q(q^{r+1})/(r+1) - delta log_q(1) = 1, so gv >= 0
    for (q, r) in [(4, 1), (9, 2), (64, 5), (2**16, 32)]:
        assert bounds._h(q, r, 0.5, 1.0) == pytest.approx(1.0, abs=1e-12)
        assert bounds._h(q, r, 0.3, 1.0) == pytest.approx(1.0, abs=1e-12)
        assert bounds.gv_bound(q, r, 0.5) >= 0.0


def test_gv_below_main_in_the_listed_region():
    assert bounds.gv_bound(729, 2, 0.5) < bounds.closed_bound("main", 729, 2, 0.5)


def test_gv_beats_main_for_small_localities():
    # main is worse than GV at (r=3, q=64) and (r=2, q=81)
    for (q, r) in [(64, 3), (81, 2)]:
        assert (
            bounds.closed_bound("main", q, r, 0.5) <= bounds.gv_bound(q, r, 0.5) + 1e-9
        )


def test_gv_matches_grid_oracle_spot_checks():
    rng = random.Random(2024)
    for _ in range(12):
        j = rng.randint(2, 64)
        q = float(j * j)
        r = rng.randint(1, 32)
        d = rng.uniform(0.05, min(0.9, 1 - 1 / q))
        oracle, _, _ = gv_grid_oracle(q, r, d)
        assert bounds.gv_bound(q, r, d) == pytest.approx(oracle, abs=1e-9)


def test_gv_huge_q_no_overflow():
    v = bounds.gv_bound(2.0**64, 128, 0.5)
    assert 0.0 < v < 1.0
    v2 = bounds.gv_bound(2.0**40, 2**20, 0.25)
    assert 0.0 < v2 < 1.0


def test_gv_monotone_in_delta():
    rng = random.Random(5)
    for _ in range(20):
        j = rng.randint(2, 40)
        q = float(j * j)
        r = rng.randint(1, 24)
        grid = np.linspace(1e-6, 1 - 1 / q, 100)
        vals = [bounds.gv_bound(q, r, d) for d in grid]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_gv_domain_errors():
    with pytest.raises(DomainError):
        bounds.gv_bound(9, 2, 0.0)
    with pytest.raises(DomainError):
        bounds.gv_bound(9, 2, 0.95)


# -- the critical point -------------------------------------------------------------

def test_derivative_sign_pattern():
    # r capped so the (1/(q-1), 1/(q-1)+2^-r) window stays wide in doubles
    rng = random.Random(11)
    for _ in range(25):
        j = rng.randint(2, 100)
        q = float(j * j)
        r = rng.randint(1, 48)
        assert bounds.gv_derivative_sign(q, r, 0.5, 1.0 / (q - 1.0)) < 0
        assert bounds.gv_derivative_sign(q, r, 0.5, 1.0) > 0


def test_find_s0_window_for_half():
    for (q, r) in [(4, 1), (9, 2), (256, 2), (2**16, 32)]:
        s0 = bounds.find_s0(q, r, 0.5)
        lo = 1.0 / (q - 1.0)
        assert lo < s0 < lo + 2.0 ** (-r)


def test_find_s0_value_matches_zoomed_grid():
    for (q, r, d) in [(9, 2, 0.5), (64, 3, 0.5), (729, 2, 0.5), (81, 2, 0.4)]:
        s0 = bounds.find_s0(q, r, d)
        via_s0 = 1.0 - bounds._h(q, r, d, s0)
        assert via_s0 == pytest.approx(gv_zoomed_oracle(q, r, d), abs=1e-10)


def test_find_s0_boundary_delta():
    q = 16.0
    s0 = bounds.find_s0(q, 2, 1 - 1 / q)
    assert s0 == pytest.approx(1.0, abs=1e-9)


# -- comparisons ----------------------------------------------------------------------

def test_beats_gv_reproducible_lists():
    # the four configurations where the inequality itself carves the set
    expected = {
        2**8: {1, 2},
        2**10: {1, 3, 7, 15, 30, 31},
        3**6: {1, 2, 5, 8, 12, 17, 25, 26},
        5**4: {1, 2, 3, 4, 5, 7, 9, 11, 19, 23, 24},
    }
    for q, want in expected.items():
        got = bounds.beats_gv_localities(q, 0.5, bounds.admissible_localities(q))
        assert got == want


def test_beats_gv_supersets():
    # the remaining published sets are strict subsets of what the inequality
    # admits: every published r passes, and known extras pass too
    published = {
        2**12: {1, 2, 3, 6, 7, 8, 11, 15, 20, 31, 47, 55, 62, 63},
        3**8: {1, 2, 3, 4, 5, 7, 8, 9, 15, 17, 19, 26, 35, 39, 53, 71, 79, 80},
        5**6: {1, 3, 4, 9, 19, 24, 30, 49, 61},
        5**8: {1, 2, 3, 4, 5, 7, 9, 11, 12, 15, 19, 23, 24, 25, 38, 47, 49, 51},
    }
    extras = {2**12: {191}, 3**8: {161, 323, 404}, 5**6: {99, 124}, 5**8: {74, 77}}
    for q, want in published.items():
        got = bounds.beats_gv_localities(q, 0.5, bounds.admissible_localities(q))
        assert got >= want
        assert extras[q] <= got


def test_beats_gv_rejects_inadmissible_candidates():
    with pytest.raises(NotAdmissible):
        bounds.beats_gv_localities(256, 0.5, [1, 2, 5])


# -- crossover --------------------------------------------------------------------------

def test_crossover_example_values():
    assert bounds.crossover_delta_naive(256, 4) == pytest.approx(-1 / 60, abs=1e-15)
    assert bounds.crossover_delta_naive(256, 17) > 1 - 1 / 256


def test_crossover_sign_identity():
    rng = random.Random(31337)
    for _ in range(100):
        j = rng.randint(2, 100)
        q = float(j * j)
        r = rng.randint(1, 3 * j)
        d = rng.uniform(0.0, 0.99)
        cross = bounds.crossover_delta_naive(q, r)
        naive = bounds.closed_bound("naive_tvz", q, r, d)
        main = bounds.closed_bound("main", q, r, d)
        if abs(naive - main) < 1e-12:
            continue
        assert (naive > main) == (d < cross)


def test_naive_tvz_beats_btv1_on_square_grid():
    for j in range(7, 101):
        q = float(j * j)
        r = j - 1
        for d in (0.0, 0.25, 0.5, 1 - 1 / q):
            naive = bounds.closed_bound("naive_tvz", q, r, d)
            btv1 = bounds.closed_bound("btv1", q, r, d)
            assert naive >= btv1 - 1e-12


# -- ordering chain -------------------------------------------------------------------

def test_bound_ordering_chain():
    rng = random.Random(424242)
    for _ in range(250):
        j = rng.randint(2, 64)
        q = float(j * j)
        r = rng.randint(1, 48)
        d = rng.uniform(1e-3, (1 - 1 / q) * 0.999)
        gv = bounds.gv_bound(q, r, d)
        assert gv <= bounds.closed_bound("rate_cap", q, r, d) + 1e-9
        assert (
            bounds.closed_bound("plotkin", q, r, d)
            <= bounds.closed_bound("singleton_asym", q, r, d) + 1e-12
        )
        assert (
            bounds.closed_bound("main", q, r, d)
            <= bounds.closed_bound("singleton_asym", q, r, d) + 1e-12
        )
        assert bounds.closed_bound("naive_gv", q, r, d) <= gv + 1e-9


# -- sweeps -----------------------------------------------------------------------------

def test_sweep_shape_and_order():
    grid = [i / 100 for i in range(0, 67)]
    rows = bounds.sweep(["main", "gv"], 729, 2, grid)
    assert len(rows) == 2 * len(grid)
    deltas = [row.delta for row in rows]
    assert deltas == sorted(deltas)
    at_half = {row.bound_id: row.value for row in rows if row.delta == 0.5}
    assert at_half["main"] > at_half["gv"]


def test_sweep_singleton_endpoint():
    rows = bounds.sweep(["singleton_asym"], 729, 2, [0.5, 1.0])
    assert rows[-1].value == 0.0


def test_sweep_out_of_domain_marker():
    rows = bounds.sweep(["plotkin"], 4, 2, [0.5, 0.9])
    assert not math.isnan(rows[0].value)
    assert math.isnan(rows[1].value)  # 0.9 > 1 - 1/4


def test_sweep_requires_increasing_grid():
    with pytest.raises(DomainError):
        bounds.sweep(["main"], 729, 2, [0.5, 0.4])


def test_sweep_gv_at_zero_marker():
    rows = bounds.sweep(["gv"], 9, 2, [0.0, 0.5])
    assert math.isnan(rows[0].value)  # gv needs delta > 0
    assert rows[1].value > 0


def test_csv_round_trip():
    rows = bounds.sweep(["main", "gv"], 729, 2, [0.1, 0.5])
    text = bounds.rows_to_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "delta,bound_id,value"
    assert len(lines) == 5
    for line, row in zip(lines[1:], rows):
        d, b, v = line.split(",")
        assert float(d) == row.delta and b == row.bound_id
        assert float(v) == row.value  # exact round trip
