import numpy as np
import pytest
from hypothesis import assume, given, settings as hyp_settings, strategies as st

from src.config.settings import settings
from src.models.measure import SimMeasure
from src.models.similitude import Similitude
from src.models.subspace import Subspace
from src.services.measure import MeasureService
from src.services.satcon import KVService, MeasureSubspaceService, PredicateService, ordered_map
from src.services.similitude import SimilitudeService
from src.services.subspace import SubspaceGeometryService
from src.utils.helpers import CascadeDegenerateError, NonIsometryError, ResolutionError

measure_service = MeasureService()
property_predicates = PredicateService(measure_service.lattice_service, SubspaceGeometryService())
property_subspaces = MeasureSubspaceService(
    property_predicates,
    SubspaceGeometryService(),
    measure_service.moment_service,
)
property_kv = KVService(measure_service.lattice_service, measure_service.convolution_service)


def random_lattice(seed, d, L, size):
    rng = np.random.default_rng(seed)
    cells = rng.integers(0, 2 ** L, size=(size, d))
    return measure_service.from_cells(cells, rng.uniform(0.1, 1.0, size), L)


# Predicates

def test_full_space_always_concentrates(predicates, build, rng):
    mu = random_lattice(int(rng.integers(1 << 30)), 2, 6, 40)

    assert predicates.is_concentrated(mu, Subspace.full(2), 0.01)[0]
    assert predicates.is_concentrated(build.uniform_cube(2, 5), Subspace.full(2), 0.01)[0]


def test_point_mass_concentrates_on_the_zero_subspace(predicates, build):
    mu = build.point_mass(2, 6, [0.3, 0.7])

    concentrated, witness = predicates.is_concentrated(mu, Subspace.zero(2), 0.01)

    assert concentrated
    assert witness == pytest.approx(mu.centers()[0])


def test_uniform_square_is_not_near_a_line(predicates, build):
    mu = build.uniform_cube(2, 8)

    concentrated, _ = predicates.is_concentrated(mu, Subspace.axes(2, [0]), 0.1)
    mass, _ = predicates.best_translate(mu, Subspace.axes(2, [0]), 0.1)

    assert not concentrated
    assert mass == pytest.approx(0.2, abs=0.01)


def test_uniformity(predicates, build):
    uniform = build.uniform_cube(2, 5)
    point = build.point_mass(2, 5)

    assert predicates.is_uniform(uniform, Subspace.full(2), 0.1, 5)
    assert predicates.is_uniform(point, Subspace.zero(2), 0.1, 5)
    assert not predicates.is_uniform(point, Subspace.axes(2, [0]), 0.5, 5)


def test_saturation(predicates, build, rng):
    mu = random_lattice(int(rng.integers(1 << 30)), 2, 6, 30)
    uniform = build.uniform_cube(2, 5)
    point = build.point_mass(2, 5)

    assert predicates.is_saturated(mu, Subspace.zero(2), 1e-6, 6)
    assert predicates.is_saturated(uniform, Subspace.full(2), 1e-6, 5)
    assert not predicates.is_saturated(point, Subspace.axes(2, [0]), 0.5, 5)


def test_saturation_above_resolution(predicates, build):
    with pytest.raises(ResolutionError):
        predicates.is_saturated(build.uniform_cube(1, 3), Subspace.full(1), 0.1, 4)


@hyp_settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.integers(1, 5))
def test_saturation_passes_to_coordinate_subspaces(seed, d, m):
    mu = random_lattice(seed, d, 5, 30)
    chains = [(Subspace.full(d), Subspace.axes(d, [0])), (Subspace.axes(d, [0, 1]), Subspace.axes(d, [1]))]

    for V, W in chains:
        gap_V = property_predicates.saturation_gap(mu, V, m)
        gap_W = property_predicates.saturation_gap(mu, W, m)

        assert gap_W >= gap_V - 1e-9


@hyp_settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(5, 40))
def test_missing_saturation_forces_growth(seed, size):
    eps, m = 0.1, 5
    line = Subspace.axes(2, [0])
    mu = random_lattice(seed, 2, m, size)
    nu = measure_service.construction_service.segment(2, m)
    assume(not property_predicates.is_saturated(mu, line, 2 * eps, m))

    assert property_predicates.is_saturated(nu, line, eps, m)
    before = measure_service.normalized_entropy(mu, m)
    after = measure_service.normalized_entropy(measure_service.convolve(mu, nu), m)

    assert after > before + eps


def test_repeated_convolution_saturates_along_the_segment(measures, predicates, build):
    segment = build.segment(2, 12, cells_long=2 ** 12)
    line = Subspace.axes(2, [0])

    power = measures.self_convolve(segment, 8, method="dense")
    fraction = measures.component_probability(power, range(5), lambda comp: predicates.is_saturated(comp, line, 0.1, 8))

    assert fraction > 0.9


# Measure subspaces

def test_concentration_subspace_examples(measure_subspaces, build):
    point, _ = measure_subspaces.concentration_subspace(build.point_mass(2, 8), 1e-8)
    segment, _ = measure_subspaces.concentration_subspace(build.segment(2, 8), 1e-8)
    square, achieved = measure_subspaces.concentration_subspace(build.uniform_cube(2, 8), 0.01, cascade=False)

    assert point.k == 0
    assert segment.k == 1
    assert np.allclose(segment.projector(), np.diag([1.0, 0.0]))
    assert square.k == 2
    assert achieved == 0.01


def test_concentration_cascade_degenerates(measure_subspaces, build):
    with pytest.raises(CascadeDegenerateError):
        measure_subspaces.concentration_subspace(build.uniform_cube(2, 4), 0.01)


def grid_directions(step_degrees, d):
    azimuths = np.radians(np.arange(0.0, 180.0, step_degrees))
    if d == 2:
        return np.stack((np.cos(azimuths), np.sin(azimuths)), axis=1)
    polar = np.radians(np.arange(0.0, 180.0 + step_degrees, step_degrees))
    theta, phi = np.meshgrid(polar, azimuths, indexing="ij")
    grid = np.stack((np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)), axis=-1)
    return grid.reshape(-1, 3)


def window_mass(y, weights, eps):
    order = np.argsort(y)
    ys, cumulative = y[order], np.concatenate(([0.0], np.cumsum(weights[order])))
    ends = np.searchsorted(ys, ys + 2.0 * eps, side="right")
    return float(np.max(cumulative[ends] - cumulative[:-1]))


def grid_concentration_dim(mu, eps, step_degrees):
    """Least k with a grid translate of dimension k holding mass 1 - eps within eps"""
    points, weights, d = mu.centers(), mu.weights, mu.d
    centered = points - weights @ points
    target = 1.0 - eps - 1e-9
    if weights[np.linalg.norm(centered, axis=1) <= eps].sum() >= target:
        return 0
    directions = grid_directions(step_degrees, d)
    if d == 3:
        along = centered @ directions.T
        radial = np.sqrt(np.clip(np.sum(centered ** 2, axis=1)[:, None] - along ** 2, 0.0, None))
        if np.max(weights @ (radial <= eps)) >= target:
            return 1
    if max(window_mass(centered @ normal, weights, eps) for normal in directions) >= target:
        return d - 1
    return d


def shaped_sample(rng, d, shape):
    center = np.full(d, 0.5)
    frame = np.linalg.qr(rng.normal(size=(d, d)))[0]
    if shape == "cluster":
        return center + rng.uniform(-0.01, 0.01, (200, d))
    if shape == "line":
        return center + np.outer(rng.uniform(-0.35, 0.35, 200), frame[:, 0]) + rng.uniform(-0.005, 0.005, (200, d))
    if shape == "plane":
        spread = rng.uniform(-0.3, 0.3, (200, 2)) @ frame[:, :2].T
        return center + spread + np.outer(rng.uniform(-0.005, 0.005, 200), frame[:, 2])
    return rng.uniform(0.1, 0.9, (200, d))


@pytest.mark.parametrize("d, step_degrees, shapes", [
    (2, 1.0, ["cluster", "line", "blob"]),
    (3, 5.0, ["cluster", "line", "plane", "blob"]),
])
def test_concentration_subspace_matches_a_grid_search(measure_subspaces, rng, d, step_degrees, shapes):
    eps = 0.1

    for case in range(100):
        shape = shapes[case % len(shapes)]
        mu = measure_service.make_lattice(shaped_sample(rng, d, shape), None, 10)

        V, _ = measure_subspaces.concentration_subspace(mu, eps, cascade=False)

        assert V.k == grid_concentration_dim(mu, eps, step_degrees)
        assert V.k == (d if shape == "blob" else shapes.index(shape))


def test_saturation_subspace_examples(measure_subspaces, build):
    uniform, _ = measure_subspaces.saturation_subspace(build.uniform_cube(2, 4), 4)
    point, _ = measure_subspaces.saturation_subspace(build.point_mass(2, 4), 4)
    product, _ = measure_subspaces.saturation_subspace(build.segment(2, 6), 6)

    assert uniform.k == 2
    assert point.k == 0
    assert product.k == 1
    assert np.allclose(product.projector(), np.diag([1.0, 0.0]))


def test_covariance_check_examples(measure_subspaces, build):
    on_line = measure_subspaces.covariance_concentration_check(build.segment(2, 8), 1)
    square = measure_subspaces.covariance_concentration_check(build.uniform_cube(2, 6), 2)

    assert on_line.holds
    assert on_line.epsilon_used == pytest.approx(0.0, abs=1e-6)
    assert square.holds
    assert square.subspace.k == 2


def test_covariance_check_uses_the_codimension_factor(measure_subspaces, measures, build):
    square = build.uniform_cube(2, 6)
    lam = measures.mean_cov(square).eigenvalue(1)

    check = measure_subspaces.covariance_concentration_check(square, 0)

    assert check.holds
    assert check.subspace.k == 0
    assert check.epsilon_used == pytest.approx((2 * lam) ** (1 / 3))


@hyp_settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.integers(2, 40))
def test_covariance_concentration_always_holds(seed, d, size):
    mu = random_lattice(seed, d, 5, size)

    for r in range(d + 1):
        assert property_subspaces.covariance_concentration_check(mu, r).holds


# Iterated convolution bound

def test_kv_with_a_point_mass(kv, build, rng):
    mu = random_lattice(int(rng.integers(1 << 30)), 1, 8, 20)
    delta = build.point_mass(1, 8)

    report = kv.kv_check(mu, delta, 3, 8)

    assert report.lhs == pytest.approx(measure_service.normalized_entropy(mu, 8))
    assert report.slack == pytest.approx(settings.kv_constant(1) * 3 / 8)


def test_kv_increments_decrease_for_coin_flips(kv, lattice):
    coin = lattice.from_cells([[0], [1]], None, 8)

    report = kv.kv_check(coin, coin, 2, 8)

    assert report.deltas == pytest.approx([0.5, 1.811278124459133 - 1.5])
    assert report.deltas_monotone


def test_kv_argument_checks(kv, build):
    mu = build.uniform_cube(1, 4)

    with pytest.raises(ValueError):
        kv.kv_check(mu, mu, 0, 4)
    with pytest.raises(ResolutionError):
        kv.kv_check(mu, mu, 1, 5)


@hyp_settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(1, 4))
def test_kv_slack_is_non_negative(seed_mu, seed_nu, k):
    mu = random_lattice(seed_mu, 1, 6, 8)
    nu = random_lattice(seed_nu, 1, 6, 5)

    report = property_kv.kv_check(mu, nu, k, 6)

    assert report.slack >= 0.0, (mu.to_json(), nu.to_json())


@hyp_settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_kv_increments_decrease_at_full_resolution(seed_mu, seed_nu):
    mu = random_lattice(seed_mu, 1, 5, 6)
    nu = random_lattice(seed_nu, 1, 5, 4)

    report = property_kv.kv_check(mu, nu, 4, 5)

    assert report.deltas_monotone, (mu.to_json(), nu.to_json())


# Affine structure

def test_measure_on_a_line_is_affine(affine, build):
    report = affine.non_affine_check(build.segment(2, 6), 0.3, 0.05)

    assert not report.holds_over_candidates
    assert report.worst_mass == pytest.approx(1.0)


def test_uniform_square_is_non_affine(affine, build):
    report = affine.non_affine_check(build.uniform_cube(2, 8), 0.3, 0.05)

    assert report.holds_over_candidates
    assert report.worst_mass < 0.3
    assert report.candidates > 0


def test_non_affine_candidates_come_from_the_heaviest_atoms(affine, rng):
    mu = random_lattice(int(rng.integers(1 << 30)), 2, 8, 100)
    pool = min(settings.NON_AFFINE_ATOMS, mu.size)

    report = affine.non_affine_check(mu, 0.3, 0.05)

    # points and lines through pooled atoms, then the two covariance eigenspaces
    assert report.candidates == pool + pool * (pool - 1) // 2 + 2


def test_sigma_independence(affine):
    triangle = [[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]]

    assert affine.sigma_independent(triangle, 0.4)
    assert not affine.sigma_independent(triangle, 0.9)
    assert affine.sigma_independent([[0.2, 0.2]], 5.0)


# Verdicts

def test_ordered_map_keeps_order():
    items = list(range(25))

    assert ordered_map(lambda x: x * x, items, 4) == [x * x for x in items]


def test_inverse_verdict_with_a_point_mass(verdicts, build, rng):
    mu = random_lattice(int(rng.integers(1 << 30)), 1, 10, 30)
    delta = build.point_mass(1, 10)

    verdict = verdicts.inverse_verdict(mu, delta, 4, 0.1, 4)

    assert verdict.growth == pytest.approx(0.0, abs=1e-12)
    assert verdict.dims == [0] * 5
    assert verdict.passed


def test_inverse_verdict_for_uniform_measures(verdicts, build):
    uniform = build.uniform_cube(1, 10)

    verdict = verdicts.inverse_verdict(uniform, uniform, 4, 0.1, 4)

    assert verdict.dims == [1] * 5
    assert verdict.sat_fraction == pytest.approx(1.0)
    assert verdict.passed


def test_inverse_verdict_for_a_two_scale_progression(verdicts, build):
    # 64 clusters of 64 points: dense, then clustered, then dense again, then atoms
    mu = build.ap_cascade([64, 64], [2 ** -6, 2 ** -18], L=20)

    verdict = verdicts.inverse_verdict(mu, mu, 18, 0.2, 2)

    assert verdict.dims == [1] * 6 + [0] * 6 + [1] * 6 + [0]
    assert verdict.conc_fraction == pytest.approx(1.0)
    assert verdict.sat_fraction == pytest.approx(17 / 19)
    assert verdict.growth < 0.1
    assert verdict.passed


def test_inverse_verdict_is_thread_independent(verdicts, build, rng):
    mu = random_lattice(int(rng.integers(1 << 30)), 2, 7, 40)
    nu = build.segment(2, 7)

    serial = verdicts.inverse_verdict(mu, nu, 3, 0.2, 3, threads=1)
    parallel = verdicts.inverse_verdict(mu, nu, 3, 0.2, 3, threads=3)

    assert serial.to_json() == parallel.to_json()


def test_inverse_verdict_argument_checks(verdicts, build):
    mu = build.uniform_cube(1, 4)

    with pytest.raises(ValueError):
        verdicts.inverse_verdict(mu, mu, 2, 1.5, 1)
    with pytest.raises(ResolutionError):
        verdicts.inverse_verdict(mu, mu, 5, 0.1, 1)


def test_isometry_verdict_with_the_identity(verdicts, build):
    mu = build.circle(8, 64)
    identity = SimMeasure.from_atoms([(Similitude.identity(2), 1.0)])

    verdict = verdicts.isometry_verdict(identity, mu, 2, 4, 0.1, 2)

    assert verdict.growth == pytest.approx(0.0, abs=1e-12)
    assert verdict.pass_rate == pytest.approx(1.0)
    assert all(V.k == 0 for pair in verdict.pairs for V in pair.subspaces)


def test_isometry_verdict_stabilizer(verdicts, build):
    sim = SimilitudeService()
    mu = build.point_mass(2, 10, [0.5, 0.5])
    center = mu.centers()[0]
    turns = SimMeasure.from_atoms([(sim.rotation(2 * np.pi * j / 64, center), 1.0) for j in range(64)])

    verdict = verdicts.isometry_verdict(turns, mu, 2, 4, 0.1, 2)

    assert verdict.growth < 0.01
    assert verdict.group_entropy > 0.5
    assert verdict.mean_dim == pytest.approx(0.0)
    assert all(V.k == 0 for pair in verdict.pairs if pair.verdict.passed for V in pair.subspaces)


def test_isometry_verdict_for_rotations_of_a_circle(verdicts, build, geometry):
    sim = SimilitudeService()
    mu = build.circle(10, 128)
    turns = SimMeasure.from_atoms([(sim.rotation(2 * np.pi * j / 128, [0.5, 0.5]), 1.0) for j in range(128)])

    verdict = verdicts.isometry_verdict(turns, mu, 2, 6, 0.1, 2)
    lines = [V for pair in verdict.pairs for V in pair.subspaces if V.k == 1]

    assert verdict.growth == pytest.approx(0.0, abs=0.1)
    assert lines
    assert max(geometry.sub_distance(lines[0], V) for V in lines) > 0.5


def test_isometry_verdict_rejects_contractions(verdicts, build):
    shrink = SimMeasure.from_atoms([(Similitude.from_ratio(0.5, np.eye(2), [0.0, 0.0]), 1.0)])

    with pytest.raises(NonIsometryError):
        verdicts.isometry_verdict(shrink, build.uniform_cube(2, 4), 1, 2, 0.1, 1)
