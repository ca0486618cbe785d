import numpy as np
import pytest

from dispersionRelation import DispersionRelation
from frequencyLattice import (
    FAIL, INCONCLUSIVE, PASS, CountingReport, FrequencyLattice, annulus_count_bound, annulus_vertical_extent,
    beurling_ratio_curve, graph_circle_crossing, max_vertical_extent, sublinearity_curve,
)
from labErrors import LabDomainError, PreconditionError

SCHRODINGER = DispersionRelation("schrodinger")
TRANSPORT = DispersionRelation("transport", c=1.0)
KDV = DispersionRelation("kdv_linear")


def test_points_are_sorted_graph():
    lattice = FrequencyLattice(SCHRODINGER, 3)
    assert len(lattice) == 7
    assert list(lattice.points[:, 0]) == [-3, -2, -1, 0, 1, 2, 3]
    assert list(lattice.points[:, 1]) == [9, 4, 1, 0, 1, 4, 9]


def test_separation_examples():
    assert FrequencyLattice(DispersionRelation("transport", c=0.0), 3).separation() == pytest.approx(1.0)
    assert FrequencyLattice(TRANSPORT, 3).separation() == pytest.approx(np.sqrt(2))
    assert FrequencyLattice(SCHRODINGER, 3).separation() == pytest.approx(np.sqrt(2))


@pytest.mark.parametrize("rel", [SCHRODINGER, TRANSPORT, KDV, DispersionRelation("gravity_capillary", g=1.0, S=0.0, H=1.0)])
def test_lattice_is_regular(rel):
    assert FrequencyLattice(rel, 50).separation() >= 1.0


def test_separation_needs_two_points():
    with pytest.raises(PreconditionError):
        FrequencyLattice(SCHRODINGER, 0).separation()


def test_count_in_ball_examples():
    assert FrequencyLattice(SCHRODINGER, 10).count_in_ball((0.0, 0.0), 2.5) == 3
    assert FrequencyLattice(SCHRODINGER, 10).count_in_ball((0.5, 0.37), 1e-10) == 0
    assert FrequencyLattice(TRANSPORT, 10).count_in_ball((0.0, 0.0), 3.0) == 5


def test_count_is_invariant_under_mirroring():
    lattice = FrequencyLattice(KDV, 20)
    mirror = lattice.mirrored()
    assert mirror.sign_convention == -1
    for center in [(3.0, -27.0), (-4.5, 80.0), (10.0, -1000.0)]:
        for r in [1.0, 5.0, 40.0]:
            assert lattice.count_in_ball(center, r) == mirror.count_in_ball((center[0], -center[1]), r)


def test_counting_function_on_the_diagonal():
    assert FrequencyLattice(TRANSPORT, 200).counting_function(10.0, 400.0) == 15


def test_counting_function_on_a_parabola_is_small():
    lattice = FrequencyLattice(SCHRODINGER, 200)
    assert lattice.counting_function(10.0, lattice.extent()) <= 4


def test_counting_function_below_half_separation():
    lattice = FrequencyLattice(TRANSPORT, 50)
    assert lattice.counting_function(0.5, lattice.extent()) <= 1


def test_counting_function_window_checks():
    lattice = FrequencyLattice(TRANSPORT, 10)
    with pytest.raises(PreconditionError):
        lattice.counting_function(1.0, 5.0)
    with pytest.raises(PreconditionError):
        lattice.counting_function(100.0, 10.0)


def test_counting_function_uses_workers():
    lattice = FrequencyLattice(TRANSPORT, 200)
    assert lattice.counting_function(10.0, 400.0, workers=2) == 15


@pytest.mark.slow
@pytest.mark.parametrize("rel", [SCHRODINGER, KDV])
def test_beurling_pass_for_superlinear_symbols(rel):
    report = beurling_ratio_curve(rel, 4096, [10, 40, 160])
    assert report.verdict == PASS
    assert report.ratios[-1] < 0.5 * report.ratios[0]


@pytest.mark.slow
def test_beurling_fail_for_transport():
    report = beurling_ratio_curve(TRANSPORT, 4096, [10, 40, 160])
    assert report.verdict == FAIL
    assert report.ratios[-1] == pytest.approx(np.sqrt(2), rel=0.05)
    assert report.ratios[1] == pytest.approx(np.sqrt(2), rel=0.05)


def test_beurling_ratio_curve_preconditions():
    with pytest.raises(PreconditionError):
        beurling_ratio_curve(SCHRODINGER, 64, [10, 5])
    with pytest.raises(PreconditionError):
        beurling_ratio_curve(SCHRODINGER, 64, [10, 40])


def test_counting_report_verdicts():
    assert CountingReport(SCHRODINGER, 100, [10, 40, 160], [1, 1, 1], 1e4).verdict == PASS
    assert CountingReport(TRANSPORT, 100, [10, 40, 160], [15, 57, 227], 1e4).verdict == FAIL
    assert CountingReport(TRANSPORT, 100, [10, 40, 160], [10, 30, 200], 1e4).verdict == INCONCLUSIVE
    assert CountingReport(TRANSPORT, 100, [10], [15], 1e4).verdict == INCONCLUSIVE


def test_counting_report_ratios_and_metadata():
    report = CountingReport(TRANSPORT, 100, [10, 40], [15, 57], 141.0)
    assert report.ratios == [15 / 10, 57 / 40]
    assert report.center_grid_fraction == 0.25
    assert report.center_grid_step == [2.5, 10.0]
    assert report.metadata()["center_grid_step"] == [2.5, 10.0]
    assert report.rows()[1] == [40.0, 57, 57 / 40]
    assert report.metadata()["center_window"] == 141.0


def test_annulus_vertical_extent_examples():
    assert annulus_vertical_extent(10, 1, 0) == pytest.approx(2.0)
    assert annulus_vertical_extent(10, 1, 9 / np.sqrt(2)) == pytest.approx(np.sqrt(80.5) - np.sqrt(40.5))
    assert annulus_vertical_extent(10, 1, 9) == pytest.approx(np.sqrt(40))
    with pytest.raises(LabDomainError):
        annulus_vertical_extent(10, 1, 9.5)


def test_max_vertical_extent_examples():
    assert max_vertical_extent(10, 1) == pytest.approx(np.sqrt(80.5) - np.sqrt(40.5), rel=1e-12)
    assert max_vertical_extent(10, 1) == pytest.approx(2.6082, abs=1e-4)
    assert max_vertical_extent(1000, 1) == pytest.approx(np.sqrt(8), abs=1e-2)
    # The first correction to the limit is -2 sqrt(2) r^2 / |x|.
    assert max_vertical_extent(1000, 5) == pytest.approx(5 * np.sqrt(8), abs=1e-1)


def test_max_vertical_extent_is_the_maximum_above_the_diagonal():
    x_abs, r = 25.0, 2.0
    k = np.linspace(0, (x_abs - r) / np.sqrt(2), 200001)
    assert np.max(annulus_vertical_extent(x_abs, r, k)) == pytest.approx(max_vertical_extent(x_abs, r), abs=1e-9)


def test_max_vertical_extent_grows_to_its_limit():
    extents = [max_vertical_extent(x, 1.0) for x in [10, 100, 1000]]
    assert extents[0] < extents[1] < extents[2] < np.sqrt(8)


def test_max_vertical_extent_is_scale_invariant():
    assert max_vertical_extent(40, 2) / 2 == pytest.approx(max_vertical_extent(20, 1), rel=1e-12)


def test_graph_circle_crossing():
    k = graph_circle_crossing(SCHRODINGER, 10.0)
    assert np.hypot(k, k * k) == pytest.approx(10.0, rel=1e-12)
    assert graph_circle_crossing(TRANSPORT, np.sqrt(2) * 3) == pytest.approx(3.0, rel=1e-12)


@pytest.mark.parametrize("rel", [SCHRODINGER, TRANSPORT, KDV])
@pytest.mark.parametrize("x_abs", [10.0, 50.0, 300.0])
def test_annulus_count_is_bounded(rel, x_abs):
    lattice = FrequencyLattice(rel, 400)
    assert lattice.annulus_count(x_abs, 2.0) <= annulus_count_bound(rel, x_abs, 2.0)


def test_annulus_count_on_the_diagonal():
    # k sqrt(2) in [8, 12] for k = 6, 7, 8
    assert FrequencyLattice(TRANSPORT, 20).annulus_count(10.0, 2.0) == 3


def test_sublinearity_curve_decays_for_superlinear_symbols():
    ratios = sublinearity_curve(SCHRODINGER, 100.0, [10.0, 100.0, 1000.0])
    assert ratios == sorted(ratios, reverse=True)
    assert ratios[-1] == pytest.approx(np.sqrt(1100.0) / 1000.0, rel=1e-9)
