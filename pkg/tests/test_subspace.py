import numpy as np
import pytest
from hypothesis import assume, given, settings as hyp_settings, strategies as st

from src.models.measure import CovSummary
from src.models.subspace import AffineSubspace, Subspace
from src.services.subspace import SubspaceGeometryService, SubspaceSelectorService, cascade_epsilon, common_delta
from src.utils.helpers import DimensionMismatchError

geometry = SubspaceGeometryService()
property_selector = SubspaceSelectorService(geometry)

# small enough for the common-subspace constant of R^2 to stay below 1
TINY_EPS = 1e-50


def line(theta):
    return Subspace.span([[np.cos(theta), np.sin(theta)]], 2)


def random_subspace(seed):
    rng = np.random.default_rng(seed)
    d = 3
    k = int(rng.integers(0, d + 1))
    return Subspace.span(rng.normal(size=(k, d)), d) if k else Subspace.zero(d)


subspaces = st.integers(0, 10 ** 6).map(random_subspace)


def test_span_drops_dependent_vectors():
    V = Subspace.span([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 3)

    assert V.k == 2
    assert Subspace.span([[0.0, 0.0]], 2).k == 0


def test_json_keeps_the_projector():
    V = Subspace.span([[1.0, 1.0, 0.0]], 3)

    restored = Subspace.from_json(V.to_json())

    assert np.allclose(restored.projector(), V.projector())


@hyp_settings(max_examples=60, deadline=None)
@given(subspaces)
def test_respanning_a_frame_gives_the_same_subspace(V):
    W = Subspace.span(V.frame.T, V.d)

    assert W.k == V.k
    assert np.allclose(W.projector(), V.projector(), atol=1e-12)


@hyp_settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(1e-6, 1e-2))
def test_span_of_nearly_contained_vectors_stays_near(seed, size):
    rng = np.random.default_rng(seed)
    V = Subspace.span(rng.normal(size=(2, 3)), 3)
    vectors = (V.frame @ rng.normal(size=(2, 2))).T + size * rng.uniform(-1.0, 1.0, (2, 3))
    vectors = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    eps = max(np.linalg.norm(v - V.projector() @ v) for v in vectors)
    independence = np.linalg.norm(vectors[1] - (vectors[1] @ vectors[0]) * vectors[0])
    assume(independence > 0.05)

    spanned = Subspace.span(vectors, 3)

    assert spanned.k == 2
    assert geometry.deviation(spanned, V) <= 4 * np.sqrt(3) * eps / independence + 1e-12


def test_sub_distance_examples():
    e1, e2 = Subspace.axes(2, [0]), Subspace.axes(2, [1])

    assert geometry.sub_distance(e1, e1) == 0.0
    assert geometry.sub_distance(e1, e2) == pytest.approx(1.0)


@pytest.mark.parametrize("theta", [0.05, 0.4, 1.0, np.pi / 2])
def test_lines_at_an_angle(theta):
    V, W = line(0.0), line(theta)

    distance = geometry.sub_distance(V, W)
    angle = geometry.angle(V, W)

    assert distance == pytest.approx(np.sin(theta))
    assert angle == pytest.approx(2 * np.sin(theta / 2))
    assert angle <= np.sqrt(2) * distance + 1e-12


def test_angle_of_nested_subspaces_is_zero():
    plane = Subspace.axes(3, [0, 1])

    assert geometry.angle(Subspace.axes(3, [0]), plane) == 0.0


def test_angle_ignores_the_common_part():
    plane = Subspace.axes(3, [0, 1])
    tilted = Subspace.span([[1.0, 0.0, 0.0], [0.0, np.cos(0.3), np.sin(0.3)]], 3)

    assert geometry.intersection(plane, tilted).k == 1
    assert geometry.angle(plane, tilted) == pytest.approx(2 * np.sin(0.15))


def test_in_neighborhood():
    plane = Subspace.axes(3, [0, 1])
    e1, e2 = Subspace.axes(2, [0]), Subspace.axes(2, [1])

    assert geometry.in_neighborhood(Subspace.axes(3, [0]), plane, 0.0)
    assert not geometry.in_neighborhood(e1, e2, 0.99)
    assert geometry.in_neighborhood(e1, e2, 1.0)


def test_mismatched_dimensions():
    with pytest.raises(DimensionMismatchError):
        geometry.sub_distance(Subspace.full(2), Subspace.full(3))


@hyp_settings(max_examples=80, deadline=None)
@given(subspaces, subspaces, subspaces)
def test_sub_distance_is_a_bounded_metric(U, V, W):
    d_uv = geometry.sub_distance(U, V)

    assert 0.0 <= d_uv <= 1.0
    assert d_uv == pytest.approx(geometry.sub_distance(V, U))
    assert d_uv <= geometry.sub_distance(U, W) + geometry.sub_distance(W, V) + 1e-9


def test_top_eigenspace():
    flat = CovSummary(mean=[0.5, 0.0], sigma=np.diag([1 / 12, 0.0]), eigenvalues=[1 / 12, 0.0],
                      eigenvectors=np.eye(2))
    round_ = CovSummary(mean=[0.0, 0.0], sigma=np.eye(2), eigenvalues=[1.0, 1.0], eigenvectors=np.eye(2))

    assert geometry.top_eigenspace(flat, 0).k == 0
    assert np.allclose(geometry.top_eigenspace(flat, 1).projector(), np.diag([1.0, 0.0]))
    assert geometry.top_eigenspace(round_, 1).k == 2


def test_orthogonal_complement_of_axes_uses_axes():
    V = Subspace.axes(3, [1])

    perp = geometry.orthogonal_complement(V)

    assert geometry.axis_indices(perp) == [0, 2]


def test_cascade_constants():
    assert cascade_epsilon(1e-8, 0) == pytest.approx(1e-8)
    assert cascade_epsilon(1e-8, 2) == pytest.approx(4e-2)
    assert common_delta(TINY_EPS, 2) < 1.0


def test_minimal_engulfing_of_a_single_member(selector):
    W0 = line(0.6)

    V, eps_d = selector.minimal_engulfing([W0], 1e-6)

    assert geometry.sub_distance(V, W0) < 1e-9
    assert eps_d == pytest.approx(cascade_epsilon(1e-6, 2))


def test_minimal_engulfing_of_orthogonal_lines_is_the_plane(selector):
    V, _ = selector.minimal_engulfing([Subspace.axes(2, [0]), Subspace.axes(2, [1])], 1e-6)

    assert V.k == 2


def test_minimal_engulfing_of_close_lines_is_a_line(selector):
    W_list = [line(0.3), line(0.3 + 1e-4)]

    V, eps_d = selector.minimal_engulfing(W_list, 1e-6)

    assert V.k == 1
    assert all(geometry.deviation(W, V) <= eps_d for W in W_list)


def test_minimal_engulfing_of_a_line_inside_a_plane(selector):
    plane = Subspace.axes(3, [0, 1])
    inner = Subspace.span([[1.0, 1.0, 0.0]], 3)

    V, _ = selector.minimal_engulfing([plane, inner], 1e-12)

    assert V.k == 2
    assert geometry.sub_distance(V, plane) < 1e-9


def test_maximal_common_examples(selector):
    W0 = line(0.6)
    e1, e2 = Subspace.axes(2, [0]), Subspace.axes(2, [1])

    single, witnesses, _ = selector.maximal_common([W0], TINY_EPS)
    crossing, crossing_witnesses, _ = selector.maximal_common([e1, e2], TINY_EPS)
    everything, _, _ = selector.maximal_common([Subspace.full(2)], TINY_EPS)

    assert geometry.sub_distance(single, W0) < 1e-9
    assert len(witnesses) == 1
    assert crossing.k == 0
    assert len(crossing_witnesses) == 2
    assert everything.k == 2


def test_maximal_common_with_a_large_tolerance_returns_the_space(selector):
    V, witnesses, delta = selector.maximal_common([Subspace.axes(2, [0])], 0.1)

    assert delta >= 1.0
    assert V.k == 2
    assert witnesses == []


def test_selectors_need_members(selector):
    with pytest.raises(ValueError):
        selector.minimal_engulfing([], 0.1)


def grid_directions(step_degrees, d):
    azimuths = np.radians(np.arange(0.0, 180.0, step_degrees))
    if d == 2:
        return np.stack((np.cos(azimuths), np.sin(azimuths)), axis=1)
    polar = np.radians(np.arange(0.0, 180.0 + step_degrees, step_degrees))
    theta, phi = np.meshgrid(polar, azimuths, indexing="ij")
    grid = np.stack((np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)), axis=-1)
    return grid.reshape(-1, 3)


def grid_fit(vectors, step_degrees):
    """Smallest worst deviation of the lines along vectors from a grid line and from a grid hyperplane"""
    dots = np.abs(grid_directions(step_degrees, vectors.shape[1]) @ vectors.T)
    line_fit = np.min(np.max(np.sqrt(np.clip(1.0 - dots ** 2, 0.0, None)), axis=1))
    hyperplane_fit = np.min(np.max(dots, axis=1))
    return line_fit, hyperplane_fit


def grid_engulfing_dim(vectors, tol, step_degrees):
    line_fit, hyperplane_fit = grid_fit(vectors, step_degrees)
    if line_fit <= tol:
        return 1
    if vectors.shape[1] == 3 and hyperplane_fit <= tol:
        return 2
    return vectors.shape[1]


def unit_rows(vectors):
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def test_minimal_engulfing_matches_a_grid_search_in_the_plane(selector, rng):
    eps = 1e-4

    for case in range(100):
        theta = rng.uniform(0.0, np.pi)
        if case % 2:
            offsets = rng.uniform(-0.01, 0.01, 3)
        else:
            offsets = np.array([-0.03, rng.uniform(-0.03, 0.03), 0.03])
        vectors = np.stack((np.cos(theta + offsets), np.sin(theta + offsets)), axis=1)

        V, _ = selector.minimal_engulfing([Subspace.span([v], 2) for v in vectors], eps)

        assert V.k == grid_engulfing_dim(vectors, cascade_epsilon(eps, 1), 1.0)
        assert V.k == (1 if case % 2 else 2)


def test_minimal_engulfing_matches_a_grid_search_in_space(selector, rng):
    # cascade_epsilon(0.2, 3) >= 1, so every dimension is tested at 0.2
    eps = 0.2

    for case in range(100):
        frame = np.linalg.qr(rng.normal(size=(3, 3)))[0]
        if case % 3 == 0:
            vectors = frame[:, 0] + 0.02 * rng.uniform(-1.0, 1.0, (3, 3))
        elif case % 3 == 1:
            alpha = rng.uniform(0.6, 1.5)
            vectors = np.stack((frame[:, 0], np.cos(alpha) * frame[:, 0] + np.sin(alpha) * frame[:, 1]))
        else:
            vectors = frame.T + 0.03 * rng.uniform(-1.0, 1.0, (3, 3))
        vectors = unit_rows(vectors)

        V, _ = selector.minimal_engulfing([Subspace.span([v], 3) for v in vectors], eps)

        assert V.k == grid_engulfing_dim(vectors, eps, 5.0)
        assert V.k == case % 3 + 1


def test_maximal_common_matches_a_grid_search_in_the_plane(selector, rng):
    delta = common_delta(TINY_EPS, 2)

    for case in range(100):
        theta = rng.uniform(0.0, np.pi)
        if case % 2:
            offsets = rng.uniform(-0.15, 0.15, 3)
        else:
            offsets = np.array([-0.5, rng.uniform(-0.5, 0.5), 0.5])
        vectors = np.stack((np.cos(theta + offsets), np.sin(theta + offsets)), axis=1)
        W_list = [Subspace.span([v], 2) for v in vectors]

        V, witnesses, _ = selector.maximal_common(W_list, TINY_EPS)

        line_fit, _ = grid_fit(vectors, 1.0)
        assert V.k == (1 if line_fit <= delta else 0)
        assert all(geometry.deviation(V, W) <= delta + 1e-12 for W in W_list)
        assert len(witnesses) <= 2 - V.k


def test_maximal_common_in_space_keeps_the_whole_space(selector, rng):
    for _ in range(100):
        W_list = [random_subspace(int(seed)) for seed in rng.integers(0, 10 ** 6, size=3)]

        V, witnesses, delta = selector.maximal_common(W_list, TINY_EPS)

        assert delta >= 1.0
        assert V.k == 3
        assert witnesses == []
        assert all(geometry.deviation(V, W) <= delta for W in W_list)


@hyp_settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.0, np.pi), min_size=1, max_size=4))
def test_selectors_are_monotone_in_eps(angles):
    W_list = [line(theta) for theta in angles]

    engulfing = [property_selector.minimal_engulfing(W_list, eps)[0].k for eps in (1e-8, 1e-6, 1e-4, 1e-3)]
    common = [property_selector.maximal_common(W_list, eps)[0].k for eps in (1e-60, 1e-55, 1e-50, 1e-45, 1e-40)]

    assert engulfing == sorted(engulfing, reverse=True)
    assert common == sorted(common)


def test_affine_distances():
    A = AffineSubspace(point=[0.0, 1.0], direction=Subspace.axes(2, [0]))

    assert A.distances(np.array([[5.0, 1.0], [0.0, 3.0]])) == pytest.approx([0.0, 2.0])
