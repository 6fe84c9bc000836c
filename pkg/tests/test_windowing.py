import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from emolysis.errors import ValidationError
from emolysis.model import TimeInterval
from emolysis.windowing import TickGrid, plan_windows, to_tick, window_weights


def oracle_plan(duration, window=15.0, stride=7.5):
    """Independent enumeration of the window rule: emit start k*stride
    for every k with k*stride + stride < duration, clamp ends, fall back
    to a single full window when nothing is emitted."""
    ks = [
        k
        for k in range(int(duration / stride) + 2)
        if k * stride + stride < duration
    ]
    wins = [(k * stride, min(k * stride + window, duration)) for k in ks]
    return wins or [(0.0, duration)]


class TestPlanWindows:
    def test_duration_30(self):
        plan = plan_windows(30.0)
        assert [(w.start_s, w.end_s) for w in plan.windows] == [
            (0.0, 15.0),
            (7.5, 22.5),
            (15.0, 30.0),
        ]

    def test_duration_10_single_clamped(self):
        plan = plan_windows(10.0)
        assert [(w.start_s, w.end_s) for w in plan.windows] == [(0.0, 10.0)]

    def test_duration_5_fallback(self):
        plan = plan_windows(5.0)
        assert [(w.start_s, w.end_s) for w in plan.windows] == [(0.0, 5.0)]

    def test_matches_oracle_on_random_durations(self):
        rng = np.random.default_rng(7)
        for duration in rng.uniform(0.1, 3600.0, 500):
            got = [(w.start_s, w.end_s) for w in plan_windows(duration).windows]
            assert got == oracle_plan(duration), duration

    def test_preconditions(self):
        with pytest.raises(ValidationError):
            plan_windows(0.0)
        with pytest.raises(ValidationError):
            plan_windows(10.0, window_s=5.0, stride_s=6.0)
        with pytest.raises(ValidationError):
            plan_windows(10.0, stride_s=0.0)

    @given(st.floats(0.1, 3600.0))
    def test_determinism_and_monotone_starts(self, duration):
        a = plan_windows(duration)
        b = plan_windows(duration)
        assert a == b
        starts = [w.start_s for w in a.windows]
        assert starts == sorted(starts)
        assert len(set(starts)) == len(starts)

    @given(st.floats(0.1, 3600.0))
    def test_coverage_dense_sample(self, duration):
        plan = plan_windows(duration)
        for t in np.linspace(0.0, duration, 50, endpoint=False):
            assert any(w.contains(t) for w in plan.windows), (duration, t)

    @given(st.floats(0.1, 3600.0))
    def test_overlap_bound_at_half_stride(self, duration):
        # stride = window/2: no instant is inside more than 2 windows.
        plan = plan_windows(duration)
        for t in np.linspace(0.0, duration, 50, endpoint=False):
            assert sum(w.contains(t) for w in plan.windows) <= 2


class TestWindowWeights:
    def test_single_window_contains(self):
        plan = plan_windows(30.0)
        assert window_weights(plan, 1.0) == [(0, 1.0)]

    def test_overlap_split(self):
        plan = plan_windows(30.0)
        assert window_weights(plan, 10.0) == [(0, 0.5), (1, 0.5)]

    def test_out_of_range(self):
        plan = plan_windows(30.0)
        with pytest.raises(ValidationError):
            window_weights(plan, 30.0)
        with pytest.raises(ValidationError):
            window_weights(plan, -0.1)

    @given(st.floats(0.1, 600.0), st.floats(0.0, 1.0, exclude_max=True))
    def test_weights_sum_to_one(self, duration, frac):
        plan = plan_windows(duration)
        weights = window_weights(plan, duration * frac)
        assert weights
        assert sum(w for _, w in weights) == pytest.approx(1.0, abs=1e-12)


class TestTickGrid:
    def test_counts(self):
        assert TickGrid.for_duration(30.0).ticks == 120
        assert TickGrid.for_duration(30.1).ticks == 121
        assert TickGrid.for_duration(0.1).ticks == 1

    def test_to_tick(self):
        grid = TickGrid.for_duration(30.0)
        assert to_tick(TimeInterval(0.0, 15.0), grid) == (0, 60)
        assert to_tick(TimeInterval(7.5, 22.5), grid) == (30, 90)

    def test_to_tick_covers_interval(self):
        grid = TickGrid.for_duration(100.0)
        interval = TimeInterval(3.3, 7.7)
        lo, hi = to_tick(interval, grid)
        for t in np.linspace(interval.start_s, interval.end_s, 23, endpoint=False):
            k = int(t / grid.tick_s)
            assert lo <= k < hi
