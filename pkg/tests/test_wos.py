import dataclasses
import math

import numpy as np
import pytest

from combslope.comb import DROP_TOOTH, SEAL_GAP, assign_widths, build_comb, plan_forward, pseudo_strip, surgery
from combslope.errors import EstimationError
from combslope.exact import strip_upper_measure
from combslope.wos import (
    RNG_ALGORITHM,
    MeasureEstimate,
    WosParams,
    _mix64,
    _uniform_angles,
    derive_seed,
    estimate_profile,
    estimate_to_dict,
    estimate_upper_measure,
    profile_to_csv,
)


class TestStream:
    """The angle stream is versioned; these values must never change."""

    def test_frozen_mix64(self):
        assert _mix64(0) == 0
        assert _mix64(1) == 6238072747940578789

    def test_frozen_derive_seed(self):
        assert derive_seed(0, 0) == 16294208416658607535
        assert derive_seed(42, 7) == 14769051326987775908

    def test_frozen_angles(self):
        ids = np.arange(4, dtype=np.uint64)
        got = _uniform_angles(_mix64(1), ids, 3)
        want = [
            0.2165345885196064,
            2.5548394035497424,
            4.275552244433822,
            0.5971527570685436,
        ]
        assert got == pytest.approx(want, abs=0.0)

    def test_angles_depend_only_on_walker_and_step(self):
        # batching must not matter: a sub-slice sees identical values
        ids = np.arange(100, dtype=np.uint64)
        all_angles = _uniform_angles(_mix64(9), ids, 17)
        sub = _uniform_angles(_mix64(9), ids[40:50], 17)
        assert np.array_equal(all_angles[40:50], sub)

    def test_angle_range(self):
        ids = np.arange(10_000, dtype=np.uint64)
        a = _uniform_angles(_mix64(3), ids, 0)
        assert a.min() >= 0.0 and a.max() < 2 * math.pi
        assert abs(a.mean() - math.pi) < 0.05

    def test_algorithm_name_pinned(self):
        assert RNG_ALGORITHM == "splitmix64-angles-v1"


class TestParams:
    def test_validation(self):
        with pytest.raises(EstimationError):
            WosParams(walkers=0)
        with pytest.raises(EstimationError):
            WosParams(epsilon_shell=0.0)
        with pytest.raises(EstimationError):
            WosParams(max_steps=0)
        with pytest.raises(EstimationError):
            WosParams(radius_cap=-1.0)


class TestEstimator:
    def test_pseudo_strip_three_quarters(self):
        dom = pseudo_strip(1.0, 3.0, 32.0)
        est = estimate_upper_measure(dom, 0j, 0.0, WosParams(walkers=20_000, seed=2))
        assert abs(est.mean - 0.75) < max(0.01, 3 * est.stderr)
        assert est.stderr == pytest.approx(
            math.sqrt(est.mean * (1 - est.mean) / est.walkers_used)
        )
        assert est.valid

    def test_symmetric_half(self):
        dom = pseudo_strip(2.0, 2.0, 40.0)
        est = estimate_upper_measure(dom, 0j, 0.0, WosParams(walkers=20_000, seed=3))
        assert abs(est.mean - 0.5) < 4 * est.stderr

    def test_matches_exact_ratio_for_other_proportions(self):
        dom = pseudo_strip(2.0, 1.0, 30.0)
        est = estimate_upper_measure(dom, 0j, 0.0, WosParams(walkers=20_000, seed=4))
        assert abs(est.mean - strip_upper_measure(2.0, 1.0)) < max(0.01, 3 * est.stderr)

    def test_deterministic_repeat(self):
        dom = pseudo_strip(1.0, 3.0, 16.0)
        p = WosParams(walkers=5_000, seed=5)
        a = estimate_upper_measure(dom, 0j, 0.0, p)
        b = estimate_upper_measure(dom, 0j, 0.0, p)
        assert (a.mean, a.stderr, a.walkers_used, a.lost) == (
            b.mean,
            b.stderr,
            b.walkers_used,
            b.lost,
        )

    def test_seed_changes_result(self):
        dom = pseudo_strip(1.0, 3.0, 16.0)
        a = estimate_upper_measure(dom, 0j, 0.0, WosParams(walkers=5_000, seed=5))
        b = estimate_upper_measure(dom, 0j, 0.0, WosParams(walkers=5_000, seed=6))
        assert a.mean != b.mean

    def test_rescale_invariance_of_scaled_domain(self):
        # the same geometry at 1000x scale gives the identical estimate
        a = estimate_upper_measure(
            pseudo_strip(1.0, 3.0, 24.0), 0j, 0.0, WosParams(walkers=2_000, seed=8)
        )
        b = estimate_upper_measure(
            pseudo_strip(1000.0, 3000.0, 24000.0), 0j, 0.0, WosParams(walkers=2_000, seed=8)
        )
        assert a.mean == b.mean

    def test_reference_height_splits_classification(self):
        dom = pseudo_strip(1.0, 1.0, 30.0)
        p = WosParams(walkers=5_000, seed=9)
        above = estimate_upper_measure(dom, 0j, -3.0, p)  # everything is "upper"
        assert above.mean == 1.0

    def test_start_too_close_to_boundary(self):
        dom = pseudo_strip(1.0, 1.0, 20.0)
        # absolute-units check: under rescale the shell is relative to the
        # starting distance, so only an exact boundary point is rejected
        with pytest.raises(EstimationError):
            estimate_upper_measure(
                dom, 10 + 0.9999999j, 0.0, WosParams(walkers=10, seed=0, rescale=False)
            )
        with pytest.raises(EstimationError):
            estimate_upper_measure(dom, 3 + 1j, 0.0, WosParams(walkers=10, seed=0))

    def test_lost_walkers_reported_not_dropped(self):
        dom = pseudo_strip(1.0, 3.0, 8.0)
        p = WosParams(walkers=2_000, seed=1, max_steps=12, max_lost_fraction=1e-3)
        est = estimate_upper_measure(dom, 0j, 0.0, p)
        assert est.lost > 0
        assert est.walkers_used + est.lost == 2_000
        assert not est.valid  # lost fraction above the threshold is flagged
        assert est.lost_fraction == est.lost / 2_000

    def test_all_lost_raises(self):
        dom = pseudo_strip(1.0, 3.0, 8.0)
        with pytest.raises(EstimationError):
            estimate_upper_measure(dom, 0j, 0.0, WosParams(walkers=50, seed=1, max_steps=1))

    def test_unbiased_at_symmetry_across_seeds(self):
        dom = pseudo_strip(1.5, 1.5, 30.0)
        hits = 0
        for seed in range(20):
            est = estimate_upper_measure(dom, 0j, 0.0, WosParams(walkers=4_000, seed=seed))
            if abs(est.mean - 0.5) < 4 * est.stderr:
                hits += 1
        assert hits >= 19

    def test_uncapped_radius_matches_physics(self):
        dom = pseudo_strip(1.0, 3.0, 32.0)
        est = estimate_upper_measure(
            dom, 0j, 0.0, WosParams(walkers=10_000, seed=12, radius_cap=None)
        )
        assert abs(est.mean - 0.75) < max(0.015, 4 * est.stderr)


class TestSurgeryOrdering:
    def test_bracketing_at_one_point(self):
        plan = assign_widths(
            plan_forward(-math.pi / 4, math.pi / 6, 6.0, 2), [200, 1200, 2600, 7000]
        )
        domain = build_comb(plan)
        sealed = surgery(domain, SEAL_GAP, 1)
        dropped = surgery(domain, DROP_TOOTH, 1)
        t = complex(400.0, 0.0)
        p = WosParams(walkers=8_000, seed=21)
        base = estimate_upper_measure(domain, t, 0.0, p)
        hi = estimate_upper_measure(sealed, t, 0.0, dataclasses.replace(p, seed=22))
        lo = estimate_upper_measure(dropped, t, 0.0, dataclasses.replace(p, seed=23))
        band = 3 * math.hypot(base.stderr, hi.stderr) + 3 * math.hypot(base.stderr, lo.stderr)
        assert lo.mean - band <= base.mean <= hi.mean + band


class TestProfile:
    def test_empty(self):
        assert estimate_profile(pseudo_strip(1, 1, 10), []) == []

    def test_per_point_seeds_differ(self):
        dom = pseudo_strip(1.0, 1.0, 30.0)
        entries = estimate_profile(dom, [0.0, 0.0], 0.0, WosParams(walkers=2_000, seed=5))
        assert entries[0].estimate.mean != entries[1].estimate.mean

    def test_failures_reported_per_entry(self):
        dom = pseudo_strip(1.0, 1.0, 30.0)
        entries = estimate_profile(
            dom, [0.0, 15.0 + 0.0], 0.0, WosParams(walkers=500, seed=5)
        )
        assert entries[0].error is None
        # t = 15 sits exactly on the anchor abscissa at height 0, interior;
        # force a failure with an off-boundary point instead
        entries = estimate_profile(dom, [0.0], 1.0, WosParams(walkers=10, seed=0))
        # height 1 is on the upper tooth far from its tip: boundary point
        assert entries[0].error is not None
        assert entries[0].estimate is None

    def test_deterministic(self):
        dom = pseudo_strip(1.0, 2.0, 30.0)
        p = WosParams(walkers=1_000, seed=33)
        a = estimate_profile(dom, [0.0, 1.0, 2.0], 0.0, p)
        b = estimate_profile(dom, [0.0, 1.0, 2.0], 0.0, p)
        assert [e.estimate.mean for e in a] == [e.estimate.mean for e in b]


class TestSerialization:
    def test_csv_header_names_rng_and_seed(self):
        dom = pseudo_strip(1.0, 1.0, 20.0)
        p = WosParams(walkers=500, seed=77)
        entries = estimate_profile(dom, [0.0, 2.0], 0.0, p)
        text = profile_to_csv(entries, p)
        head, cols = text.splitlines()[:2]
        assert "splitmix64-angles-v1" in head and "seed 77" in head
        assert cols == "t,mean,stderr,walkers,lost"
        assert len(text.splitlines()) == 4

    def test_csv_deterministic(self):
        dom = pseudo_strip(1.0, 1.0, 20.0)
        p = WosParams(walkers=500, seed=78)
        a = profile_to_csv(estimate_profile(dom, [0.0], 0.0, p), p)
        b = profile_to_csv(estimate_profile(dom, [0.0], 0.0, p), p)
        assert a == b

    def test_estimate_dict_omits_elapsed(self):
        est = MeasureEstimate(0.5, 0.01, 100, 0, 1.23, True)
        d = estimate_to_dict(est)
        assert "elapsed" not in d
        assert d["mean"] == 0.5 and d["valid"] is True
