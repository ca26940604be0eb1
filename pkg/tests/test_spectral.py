from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from verlinde_kit import DomainError, RegularityError, TorusTwisting, circle_flow, torus_class_census, torus_flow
from verlinde_kit.spectral import census_record, kernel_points, torus_kernel_dim


def test_circle_examples():
    assert circle_flow([0, 1]).net_flow == 1
    assert circle_flow([0, 0]).net_flow == 0
    assert circle_flow([0, 3]).net_flow == 3
    assert circle_flow([1, 0]).net_flow == -1
    assert circle_flow([0, 2.5, 0.5, 3]).net_flow == 3


def test_circle_spectrum_exact():
    rec = circle_flow([0.25, 0.25], N=4)
    assert np.allclose(np.sort(rec.eigenvalue_tracks[0]), np.arange(-4, 5) + 0.25)


@settings(max_examples=30, deadline=None)
@given(end=st.integers(-5, 5), mid=st.floats(-4, 4), fine=st.integers(2, 60))
def test_flow_homotopy_invariance(end, mid, fine):
    coarse = circle_flow([0, mid, end]).net_flow
    dense = circle_flow(list(np.linspace(0, mid, fine)) + list(np.linspace(mid, end, fine))).net_flow
    assert coarse == dense == end


def test_window_guard():
    with pytest.raises(DomainError):
        circle_flow([0, 9], N=8)


def test_census_examples():
    assert torus_class_census(TorusTwisting(1, [[3]])) == 3
    assert torus_class_census(TorusTwisting(2, [[1, 0], [0, 1]])) == 1
    assert torus_class_census(TorusTwisting(2, [[2, 0], [0, 3]])) == 6
    assert census_record(TorusTwisting(2, [[2, 0], [0, 4]]))["invariant_factors"] == [2, 4]


def test_singular_rejected():
    tw = TorusTwisting(2, [[1, 2], [2, 4]])
    assert not tw.regular
    for f in (torus_class_census, torus_flow, kernel_points):
        with pytest.raises(RegularityError):
            f(tw)


kappas = st.integers(1, 2).flatmap(
    lambda n: st.lists(st.integers(-4, 4), min_size=n * n, max_size=n * n).map(lambda v: TorusTwisting(n, [v[i * n:(i + 1) * n] for i in range(n)]))
).filter(lambda tw: tw.regular)


@settings(max_examples=40, deadline=None)
@given(tw=kappas)
def test_census_is_det_and_kernel_classes(tw):
    c = torus_class_census(tw)
    assert c == abs(round(np.linalg.det(tw.matrix.astype(float))))
    assert len(kernel_points(tw)) == c


def test_torus_flow_examples():
    tw = TorusTwisting(1, [[2]])
    r0 = torus_flow(tw, None, [0, 1])
    assert r0.net_flow == 2
    assert torus_flow(tw, None, [0.3, 0.3]).net_flow == 0
    r1 = torus_flow(tw, [1], [0, 1])
    assert r1.net_flow == 2
    # spectrum n + 2 xi + 1: every track crosses half a period earlier
    s0 = {t: s for t, s, _ in r0.crossings}
    s1 = {t: s for t, s, _ in r1.crossings}
    shared = set(s0) & set(s1)
    assert shared
    for t in shared:
        assert abs(r0.path[s0[t], 0] - r1.path[s1[t], 0] - 0.5) < 0.1


@pytest.mark.parametrize("kappa", [[[2, 1], [1, 3]], [[1, -2], [3, 1]], [[2, 0], [0, 3]]])
def test_torus_flow_per_loop(kappa):
    tw = TorusTwisting(2, kappa)
    k = np.array(kappa)
    for j in range(2):
        end = [0.0, 0.0]
        end[j] = 1.0
        rec = torus_flow(tw, None, [[0, 0], end])
        assert list(rec.axis_flows) == list(k[:, j])
        assert rec.net_flow == k[:, j].sum()


def test_kernel_appears_exactly_at_kernel_points():
    tw = TorusTwisting(2, [[2, 1], [1, 3]])
    pts = kernel_points(tw, [1, 0])
    assert len(pts) == 5
    for p in pts:
        assert torus_kernel_dim(tw, [1, 0], [float(x) for x in p], N=4) > 0
    assert torus_kernel_dim(tw, [1, 0], [0.123, 0.456], N=4) == 0


def test_kernel_points_exact():
    assert kernel_points(TorusTwisting(1, [[3]])) == [(Fraction(0),), (Fraction(1, 3),), (Fraction(2, 3),)]


def test_tracks_csv():
    text = circle_flow([0, 0.5], N=2).tracks_csv()
    lines = text.splitlines()
    assert lines[0] == "sample_index,track_index,value"
    assert lines[1] == "0,0,-2.000000000000e+00"
