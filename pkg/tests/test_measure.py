import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from src.models.measure import LatticeMeasure, SimMeasure
from src.models.similitude import Similitude
from src.services.measure import MeasureService
from src.services.similitude import SimilitudeService
from src.utils.numerics import dyadic_floor
from src.utils.helpers import DimensionMismatchError, EmptyMeasureError, ResolutionError, ZeroMassError

service = MeasureService()

sparse_measures = st.lists(
    st.tuples(st.integers(0, 63), st.floats(0.05, 1.0)), min_size=1, max_size=12
).map(lambda atoms: service.from_cells([[c] for c, _ in atoms], [w for _, w in atoms], 6))


def test_make_lattice_snapping(lattice):
    single = lattice.make_lattice(np.zeros((1, 3)), None, 5)
    split = lattice.make_lattice(np.array([[0.0], [0.5]]), [1.0, 1.0], 1)
    merged = lattice.make_lattice(np.array([[0.1], [0.2]]), [1.0, 1.0], 2)

    assert single.cells.tolist() == [[0, 0, 0]]
    assert single.weights.tolist() == [1.0]
    assert split.cells.tolist() == [[0], [1]]
    assert split.weights == pytest.approx([0.5, 0.5])
    assert merged.cells.tolist() == [[0]]
    assert merged.weights.tolist() == [1.0]


@hyp_settings(max_examples=50, deadline=None)
@given(sparse_measures, sparse_measures, st.floats(0.05, 0.95), st.integers(0, 5))
def test_entropy_identities(mu, nu, alpha, m):
    lattice = service.lattice_service
    mixed = lattice.mixture([mu, nu], [alpha, 1.0 - alpha])
    binary = -alpha * np.log2(alpha) - (1.0 - alpha) * np.log2(1.0 - alpha)

    for n in range(m, 7):
        assert lattice.entropy(mu, n) == pytest.approx(lattice.entropy(mu, m) + lattice.conditional_entropy(mu, n, m), abs=1e-9)
    for n in range(6):
        assert lattice.entropy(mu, n) <= lattice.entropy(mu, n + 1) + 1e-9
    low = alpha * lattice.entropy(mu, 6) + (1.0 - alpha) * lattice.entropy(nu, 6)
    assert low - 1e-9 <= lattice.entropy(mixed, 6) <= low + binary + 1e-9


def test_components_average_back_to_the_measure(lattice, rng):
    cells = rng.integers(0, 2 ** 7, size=(40, 2))
    mu = lattice.from_cells(cells, rng.uniform(0.1, 1.0, 40), 7)

    for i in (0, 3, 7):
        total = {}
        for _, mass, comp in lattice.components(mu, i, rescaled=False):
            for cell, weight in zip(comp.cells.tolist(), comp.weights.tolist()):
                total[tuple(cell)] = total.get(tuple(cell), 0.0) + mass * weight
        expected = {tuple(c): w for c, w in zip(mu.cells.tolist(), mu.weights.tolist())}

        assert total.keys() == expected.keys()
        for cell, weight in expected.items():
            assert total[cell] == pytest.approx(weight)


def test_make_lattice_rejects_bad_input(lattice):
    with pytest.raises(EmptyMeasureError):
        lattice.make_lattice(np.zeros((0, 2)), None, 3)
    with pytest.raises(ValueError):
        lattice.make_lattice(np.array([[np.nan]]), None, 3)
    with pytest.raises(ValueError):
        lattice.make_lattice(np.array([[0.1], [0.2]]), [1.0, -1.0], 3)


def test_weights_must_sum_to_one():
    with pytest.raises(ValueError):
        LatticeMeasure(d=1, L=2, cells=[[0], [1]], weights=[0.5, 0.6])


def test_entropy_of_uniform_and_point_masses(lattice, build):
    uniform = build.uniform_cube(1, 6)
    point = build.point_mass(2, 6, [0.3, 0.3])

    for n in range(7):
        assert lattice.entropy(uniform, n) == pytest.approx(n)
        assert lattice.entropy(point, n) == 0.0
    assert lattice.normalized_entropy(uniform, 6) == pytest.approx(1.0)


def test_conditional_entropy_chain_rule(lattice):
    mu = lattice.make_lattice(np.array([[0.0], [0.25], [0.5], [0.75]]), None, 2)

    suite = lattice.entropy_suite(mu, 2, 1)

    assert suite.H == pytest.approx(2.0)
    assert suite.H_n == pytest.approx(1.0)
    assert suite.H_cond == pytest.approx(1.0)


def test_entropy_above_resolution_fails(lattice, build):
    with pytest.raises(ResolutionError):
        lattice.entropy_suite(build.uniform_cube(1, 4), 5)


def test_coarsen_keeps_entropy(lattice, build):
    mu = build.uniform_cube(2, 5)

    coarse = lattice.coarsen(mu, 3)

    assert coarse.L == 3
    assert lattice.entropy(coarse, 3) == pytest.approx(lattice.entropy(mu, 3))


def test_component_of_a_measure_inside_one_cell(lattice):
    mu = lattice.make_lattice(np.array([[0.1], [0.2]]), [1.0, 3.0], 6)

    comp = lattice.component(mu, [0], 2, rescaled=False)

    assert comp.cells.tolist() == mu.cells.tolist()
    assert comp.weights == pytest.approx(mu.weights)


def test_rescaled_component_of_uniform_is_uniform(lattice, build):
    comp = lattice.component(build.uniform_cube(1, 6), [0], 1)

    assert comp.L == 5
    assert comp.size == 32
    assert lattice.entropy(comp, 5) == pytest.approx(5.0)


def test_raw_component_of_heavy_cell(lattice):
    mu = lattice.from_cells([[0], [1]], [0.75, 0.25], 1)

    comp = lattice.component(mu, [0], 1, rescaled=False)

    assert comp.cells.tolist() == [[0]]
    assert comp.weights.tolist() == [1.0]


def test_zero_mass_component(lattice):
    mu = lattice.from_cells([[0]], None, 1)

    with pytest.raises(ZeroMassError):
        lattice.component(mu, [1], 1)


def test_component_expectation(lattice, build):
    uniform = build.uniform_cube(1, 8)

    ones = lattice.component_expectation(uniform, range(4), lambda comp: 1.0)
    local = lattice.component_expectation(uniform, range(4), lambda comp: lattice.normalized_entropy(comp, 4))

    assert ones == pytest.approx(1.0)
    assert local == pytest.approx(1.0)
    assert lattice.average_component_entropy(uniform, range(4), 4) == pytest.approx(1.0)


def test_convolution_examples(measures, lattice):
    coin = lattice.from_cells([[0], [1]], None, 3)
    mu = lattice.from_cells([[2], [5], [7]], [0.2, 0.3, 0.5], 3)
    delta = lattice.from_cells([[0]], None, 3)

    assert measures.convolve(mu, delta).cells.tolist() == mu.cells.tolist()
    assert measures.convolve(coin, coin).weights == pytest.approx([0.25, 0.5, 0.25])
    cubed = measures.self_convolve(coin, 3)
    assert cubed.cells.ravel().tolist() == [0, 1, 2, 3]
    assert cubed.weights == pytest.approx(np.array([1, 3, 3, 1]) / 8)


def test_dense_and_sparse_convolution_agree(measures, lattice, rng):
    mu = lattice.from_cells(rng.integers(0, 40, size=(30, 2)), rng.uniform(0.1, 1.0, 30), 6)
    nu = lattice.from_cells(rng.integers(0, 40, size=(25, 2)), rng.uniform(0.1, 1.0, 25), 6)

    sparse = measures.convolve(mu, nu, method="sparse")
    dense = measures.convolve(mu, nu, method="dense")

    assert sparse.cells.tolist() == dense.cells.tolist()
    assert sparse.weights == pytest.approx(dense.weights, abs=1e-12)


def test_self_convolve_zero_is_point_mass(measures, build):
    result = measures.self_convolve(build.uniform_cube(2, 3), 0)

    assert result.cells.tolist() == [[0, 0]]


def test_convolution_dimension_mismatch(measures, build):
    with pytest.raises(DimensionMismatchError):
        measures.convolve(build.uniform_cube(1, 3), build.uniform_cube(2, 3))


@hyp_settings(max_examples=50, deadline=None)
@given(sparse_measures, sparse_measures)
def test_convolution_is_commutative_and_never_lowers_entropy(mu, nu):
    forward = service.convolve(mu, nu)
    backward = service.convolve(nu, mu)

    assert forward.cells.tolist() == backward.cells.tolist()
    assert forward.weights == pytest.approx(backward.weights)
    assert forward.weights.sum() == pytest.approx(1.0)
    assert service.entropy(forward, 6) >= max(service.entropy(mu, 6), service.entropy(nu, 6)) - 1e-9


def test_pushforward_examples(measures, lattice, build):
    sim = SimilitudeService()
    mu = build.uniform_cube(1, 4)
    single = lattice.from_cells([[0]], None, 1)

    same = measures.pushforward(Similitude.identity(1), mu, 4)
    doubled = measures.pushforward(sim.scale_map(1), single, 1)
    shifted = measures.pushforward(sim.translation([1.0]), mu, 4)

    assert same.cells.tolist() == mu.cells.tolist()
    assert doubled.cells.tolist() == [[1]]
    assert shifted.cells.ravel().tolist() == (mu.cells.ravel() + 16).tolist()


def test_group_action_of_identity_and_half_turns(measures, build):
    sim = SimilitudeService()
    mu = build.circle(6, 16)
    identity = SimMeasure.from_atoms([(Similitude.identity(2), 1.0)])
    turns = SimMeasure.from_atoms([(sim.rotation(0.0), 1.0), (sim.rotation(np.pi), 1.0)])

    acted = measures.group_action(identity, mu, 6)
    orbit = measures.orbit(turns, np.array([1.0, 0.0]), 4)

    assert acted.cells.tolist() == mu.cells.tolist()
    assert orbit.cells.tolist() == [[-16, 0], [16, 0]]
    assert orbit.weights == pytest.approx([0.5, 0.5])


def test_group_action_of_a_single_map_is_a_pushforward(measures, build):
    g = Similitude.from_ratio(0.5, [[0.0, -1.0], [1.0, 0.0]], [0.25, 0.125])
    mu = build.uniform_cube(2, 4)

    acted = measures.group_action(SimMeasure.from_atoms([(g, 1.0)]), mu, 4)
    pushed = measures.pushforward(g, mu, 4)

    assert acted.cells.tolist() == pushed.cells.tolist()
    assert acted.weights == pytest.approx(pushed.weights)


def test_entropy_on_G(measures):
    sim = SimilitudeService()
    single = SimMeasure.from_atoms([(sim.translation([0.1, 0.1]), 1.0)])
    apart = SimMeasure.from_atoms([(sim.translation([0.1, 0.1]), 1.0), (sim.translation([0.6, 0.1]), 1.0)])
    rotated = SimMeasure.from_atoms([(sim.rotation(0.0), 1.0), (sim.rotation(np.pi), 1.0)])

    assert measures.entropy_on_G(single, 4) == 0.0
    assert measures.entropy_on_G(apart, 4) == pytest.approx(1.0)
    # both rotations fix the origin: same translation cell, different rotation cells
    assert measures.entropy_on_G(rotated, 2, conditional_on_translation=True) == pytest.approx(1.0)


def test_mean_cov(measures, build):
    point = measures.mean_cov(build.point_mass(2, 6))
    segment = measures.mean_cov(build.segment(2, 10))

    assert np.allclose(point.sigma, 0.0)
    assert point.eigenvalues.tolist() == [0.0, 0.0]
    assert segment.eigenvalue(1) == pytest.approx(1.0 / 12.0, abs=2 ** -10)
    assert segment.eigenvalue(2) == pytest.approx(0.0, abs=1e-12)
    assert abs(segment.eigenvectors[0, 0]) == pytest.approx(1.0)
    assert segment.eigenvalue(0) == 2.0
    assert segment.eigenvalue(3) == 0.0


def test_ap_cascade_local_to_global(measures, build):
    mu = build.ap_cascade([4, 4, 4, 4], [1 / 4, 1 / 64, 1 / 1024, 1 / 16384], L=56)

    report = measures.local_to_global(mu, 48, 8)

    assert mu.size == 256
    assert report.global_entropy == pytest.approx(8 / 48)
    assert report.holds


@hyp_settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 16))
def test_local_to_global_for_random_measures(seed, size):
    rng = np.random.default_rng(seed)
    mu = service.make_lattice(rng.uniform(0.0, 1.0, size=(size, 1)), rng.uniform(0.1, 1.0, size), 28)

    report = service.local_to_global(mu, 20, 4)

    assert report.holds, mu.to_json()


def test_local_to_global_argument_checks(measures, build):
    mu = build.uniform_cube(1, 10)

    with pytest.raises(ValueError):
        measures.local_to_global(mu, 4, 4)
    with pytest.raises(ResolutionError):
        measures.local_to_global(mu, 8, 4)


def test_conv_growth_row(measures, build):
    coin = build.segment(1, 4, cells_long=2)

    row = measures.conv_growth(coin, coin, 4)

    assert row["H_mu"] == pytest.approx(0.25)
    assert row["H_conv"] == pytest.approx(1.5 / 4)
    assert row["growth"] == pytest.approx(row["H_conv"] - row["H_mu"])


def test_dyadic_floor_snaps_float_error_to_the_upper_cell():
    values = np.array([1.0 - 1e-12, 1.0 - 1e-8, 0.375, -1e-12])

    cells = dyadic_floor(values, 3)

    assert cells.tolist() == [8, 7, 3, 0]
