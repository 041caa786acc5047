"""Unit tests for eigenfunction sampling, normalization, and origin checks."""

import math

import numpy as np
import pytest

from deltaho.errors import InsufficientDomainError
from deltaho.spectrum import EigenSolution, SolverConfig, full_spectrum, solve_even
from deltaho.wavefunction import (
    GridFunction,
    GridSpec,
    _simpson_weights,
    eval_even,
    eval_odd,
    jump_check,
    normalize,
    orthogonality,
    sample_state,
)

COUPLINGS = [-5.0, -2.5, -1.0, -0.25, 0.25, 1.0, 2.5, 5.0]


def _count_sign_changes(values):
    signs = np.sign(values)
    signs = signs[signs != 0]
    return int(np.sum(signs[:-1] * signs[1:] < 0))


def _center_jump(f):
    # one-sided difference quotients around the origin sample
    c = (f.n_points - 1) // 2
    dy = f.delta_y
    right = (f.values[c + 1] - f.values[c]) / dy
    left = (f.values[c] - f.values[c - 1]) / dy
    return right - left


# ---------------------------------------------------------------------------
# pointwise evaluation


def test_even_evaluation_spot_values():
    assert eval_even(0.0, 0.0) == pytest.approx(1.0, rel=1e-14)
    # U(-1, 1/2, 1) = 1/2, so the sample is exp(-1/2)/2
    assert eval_even(2.0, 1.0) == pytest.approx(0.5 * math.exp(-0.5), rel=1e-13)


def test_even_evaluation_is_symmetric():
    for nu in (0.39274404530895262, -0.84241894678128868, -12.990027623650626):
        for y in (0.3, 1.7, 3.0):
            assert eval_even(nu, -y) == eval_even(nu, y)


def test_odd_evaluation_spot_values():
    assert eval_odd(1, 0.0) == 0.0
    assert eval_odd(1, 1.0) == pytest.approx(2.0 * math.exp(-0.5), rel=1e-14)


def test_odd_evaluation_is_antisymmetric():
    for n in (1, 3, 5):
        for y in (0.4, 1.2, 2.9):
            assert eval_odd(n, -y) == -eval_odd(n, y)


def test_odd_evaluation_rejects_bad_order():
    for bad in (2, 0, -3, 1.5):
        with pytest.raises(ValueError):
            eval_odd(bad, 1.0)


def test_far_tail_is_flushed_to_zero():
    assert eval_even(0.39274404530895262, 27.0) == 0.0
    assert eval_odd(3, -27.0) == 0.0
    # the floor must cut in before the polynomial factor can overflow
    assert eval_odd(9, 1e60) == 0.0


# ---------------------------------------------------------------------------
# grid containers and quadrature


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(2.0, -2.0, 101)
    with pytest.raises(ValueError):
        GridSpec(-2.0, 2.0, 2)


def test_grid_function_validation():
    with pytest.raises(ValueError):
        GridFunction(-1.0, 1.0, 5, np.zeros(4))
    with pytest.raises(ValueError):
        GridFunction(1.0, -1.0, 3, np.zeros(3))


def test_grid_function_values_are_immutable():
    f = GridFunction(-1.0, 1.0, 5, np.ones(5))
    with pytest.raises(ValueError):
        f.values[0] = 2.0


def test_symmetric_grid_has_exact_center_and_mirror():
    f = GridFunction(-10.0, 10.0, 2001, np.zeros(2001))
    pts = f.points()
    assert pts[1000] == 0.0
    assert np.all(pts == -pts[::-1])


def test_simpson_is_exact_for_quadratics():
    pts = GridFunction(-1.0, 1.0, 11, np.zeros(11)).points()
    w = _simpson_weights(11, 0.2)
    assert float(w @ (pts * pts)) == pytest.approx(2.0 / 3.0, rel=1e-14)


def test_simpson_rejects_even_point_count():
    with pytest.raises(ValueError):
        _simpson_weights(10, 0.1)


# ---------------------------------------------------------------------------
# normalization


def test_normalize_recovers_oscillator_ground_state():
    spec = GridSpec(-8.0, 8.0, 1601)
    state = sample_state(EigenSolution("even", 0.0, 0), spec)
    pts = state.points()
    closed_form = math.pi**-0.25 * np.exp(-0.5 * pts * pts)
    assert np.max(np.abs(state.values - closed_form)) < 1e-12
    w = _simpson_weights(state.n_points, state.delta_y)
    assert float(w @ (state.values**2)) == pytest.approx(1.0, abs=1e-8)


def test_normalize_returns_original_norm():
    # raw ground state has norm (integral of exp(-y^2))^(1/2) = pi^(1/4)
    n = 1601
    pts = (np.arange(n) - (n - 1) // 2) * (16.0 / (n - 1))
    raw = GridFunction(-8.0, 8.0, n, np.exp(-0.5 * pts * pts))
    _, norm = normalize(raw)
    assert norm == pytest.approx(math.pi**0.25, rel=1e-10)


def test_normalize_rejects_degenerate_input():
    with pytest.raises(InsufficientDomainError):
        normalize(GridFunction(-5.0, 5.0, 11, np.zeros(11)))


def test_normalize_rejects_truncated_tails():
    n = 401
    pts = (np.arange(n) - (n - 1) // 2) * (4.0 / (n - 1))
    raw = GridFunction(-2.0, 2.0, n, np.exp(-0.5 * pts * pts))
    with pytest.raises(InsufficientDomainError):
        normalize(raw)


def test_norm_is_stable_under_grid_halving():
    nu = solve_even(1.0, SolverConfig(n_states=1))[0].nu
    norms = []
    for n in (1001, 2001, 4001):
        pts = (np.arange(n) - (n - 1) // 2) * (20.0 / (n - 1))
        vals = np.array([eval_even(nu, y) for y in pts])
        norms.append(normalize(GridFunction(-10.0, 10.0, n, vals))[1])
    assert norms[1] == pytest.approx(norms[0], rel=1e-8)
    assert norms[2] == pytest.approx(norms[1], rel=1e-8)
    assert norms[1] == pytest.approx(1.1691971363523952, rel=1e-10)


def test_normalized_state_passes_rectangle_rule_check():
    state = sample_state(EigenSolution("odd", 3.0, 3))
    assert float(np.sum(state.values**2) * state.delta_y) == pytest.approx(
        1.0, abs=1e-6
    )
    # the kink at the origin puts an O(dy^2 * g * psi(0)^2) correction
    # (~9e-6 at the default spacing) between rectangle rule and Simpson
    state = sample_state(EigenSolution("even", 0.39274404530895262, 0))
    assert float(np.sum(state.values**2) * state.delta_y) == pytest.approx(
        1.0, abs=1e-4
    )


# ---------------------------------------------------------------------------
# origin diagnostics


@pytest.mark.parametrize("g", COUPLINGS)
def test_jump_residual_vanishes_at_solved_roots(g):
    for sol in solve_even(g):
        assert jump_check(sol.nu, g) < 1e-10


def test_jump_residual_away_from_roots():
    assert jump_check(0.5, 1.0) == pytest.approx(0.46866801718515334, rel=1e-12)
    assert jump_check(0.5, 1.0) > 0.05


def test_jump_residual_unperturbed_even_state():
    assert jump_check(2.0, 0.0) == 0.0


def test_kink_jump_matches_coupling():
    """The sampled one-sided slope jump reproduces 2 g psi(0) to O(dy)."""
    for g in (1.0, 2.5, 5.0):
        state = sample_state(solve_even(g, SolverConfig(n_states=1))[0])
        center = (state.n_points - 1) // 2
        target = 2.0 * g * state.values[center]
        jump = _center_jump(state)
        assert jump > 0.5
        assert jump == pytest.approx(target, rel=5e-2)


def test_no_kink_without_coupling():
    state = sample_state(EigenSolution("even", 2.0, 2))
    assert abs(_center_jump(state)) < 0.05


# ---------------------------------------------------------------------------
# sampled states


def test_schrodinger_residual_away_from_origin():
    """-psi'' + y^2 psi = (2 nu + 1) psi off-origin, checked with a 5-point stencil.

    The deep bound state is checked on a shorter range: past y ~ 2.5 its
    tail falls below the cancellation noise of the confluent evaluation
    and second differences of noise dominate.
    """
    cases = []
    for g in (1.0, -1.0, 2.5, -2.5, 5.0):
        cases.extend(("even", s.nu, 4.0) for s in solve_even(g, SolverConfig(n_states=3)))
    cases.extend(("odd", float(n), 4.0) for n in (1, 3, 5))
    cases.append(("even", solve_even(-5.0, SolverConfig(n_states=1))[0].nu, 2.5))
    h = 0.01
    for kind, nu, y_hi in cases:
        if kind == "even":
            f = lambda y: eval_even(nu, y)
        else:
            f = lambda y: eval_odd(int(nu), y)
        peak = max(abs(f(y)) for y in np.linspace(0.0, 4.0, 161))
        for y in np.arange(0.5, y_hi + h / 2, 4 * h):
            samples = [f(y + k * h) for k in (-2, -1, 0, 1, 2)]
            d2 = (
                -samples[0] + 16 * samples[1] - 30 * samples[2]
                + 16 * samples[3] - samples[4]
            ) / (12 * h * h)
            residual = abs(-d2 + y * y * samples[2] - (2.0 * nu + 1.0) * samples[2])
            assert residual <= 1e-4 * peak, (kind, nu, y, residual, peak)


def test_sample_state_parity_structure():
    odd = sample_state(EigenSolution("odd", 1.0, 1))
    center = (odd.n_points - 1) // 2
    assert odd.values[center] == 0.0
    assert np.all(odd.values == -odd.values[::-1])

    even = sample_state(solve_even(1.0, SolverConfig(n_states=1))[0])
    assert np.all(even.values == even.values[::-1])


def test_sample_state_sign_convention():
    # raw H3 has negative slope at the origin; orientation must flip it
    for sol in (EigenSolution("odd", 3.0, 3),
                solve_even(1.0, SolverConfig(n_states=1))[0]):
        state = sample_state(sol)
        center = (state.n_points - 1) // 2
        first_nonzero = next(v for v in state.values[center + 1 :] if v != 0.0)
        assert first_nonzero > 0.0


def test_sample_state_validates_grid():
    sol = EigenSolution("odd", 1.0, 1)
    with pytest.raises(ValueError):
        sample_state(sol, GridSpec(-9.0, 10.0, 2001))
    with pytest.raises(ValueError):
        sample_state(sol, GridSpec(-10.0, 10.0, 2000))


def test_sample_state_widens_for_spread_out_states():
    """A nu ~ 24 state does not fit in [-10, 10]; spacing must survive widening."""
    high = solve_even(1.0, SolverConfig(n_states=13))[12]
    state = sample_state(high)
    assert state.y_max == pytest.approx(15.0, abs=1e-12)
    assert state.n_points == 3001
    assert state.delta_y == pytest.approx(0.01, rel=1e-12)
    w = _simpson_weights(state.n_points, state.delta_y)
    assert float(w @ (state.values**2)) == pytest.approx(1.0, abs=1e-12)


def test_sample_state_contains_deep_bound_state():
    state = sample_state(solve_even(-5.0, SolverConfig(n_states=1))[0])
    assert state.y_max == 10.0 and state.n_points == 2001
    center = (state.n_points - 1) // 2
    assert state.values[center] > 2.0
    w = _simpson_weights(state.n_points, state.delta_y)
    assert float(w @ (state.values**2)) == pytest.approx(1.0, abs=1e-12)


def test_even_state_node_counts():
    for g in (1.0, 2.5):
        for k, sol in enumerate(solve_even(g, SolverConfig(n_states=4))):
            state = sample_state(sol)
            assert _count_sign_changes(state.values) == 2 * k


def test_odd_state_node_counts():
    for n in (1, 3, 5):
        state = sample_state(EigenSolution("odd", float(n), n))
        assert _count_sign_changes(state.values) == n


def test_zero_coupling_even_state_matches_hermite_form():
    state = sample_state(EigenSolution("even", 2.0, 2))
    pts = state.points()
    scale = 1.0 / math.sqrt(8.0 * math.sqrt(math.pi))
    # orientation flips the raw sample, whose origin value is negative
    expected = -scale * (4.0 * pts * pts - 2.0) * np.exp(-0.5 * pts * pts)
    assert np.max(np.abs(state.values - expected)) < 1e-7


# ---------------------------------------------------------------------------
# overlaps


def test_orthogonality_requires_matching_grids():
    a = sample_state(EigenSolution("odd", 1.0, 1), GridSpec(-10.0, 10.0, 2001))
    b = sample_state(EigenSolution("odd", 1.0, 1), GridSpec(-10.0, 10.0, 1001))
    with pytest.raises(ValueError):
        orthogonality(a, b)


def test_opposite_parity_overlap_is_machine_zero():
    even = sample_state(solve_even(1.0, SolverConfig(n_states=1))[0])
    odd = sample_state(EigenSolution("odd", 1.0, 1))
    assert abs(orthogonality(even, odd)) < 1e-14


def test_gram_matrix_of_six_lowest_states():
    states = [sample_state(s) for s in full_spectrum(1.0, SolverConfig(n_states=6))]
    gram = np.array([[orthogonality(a, b) for b in states] for a in states])
    assert np.max(np.abs(gram - np.eye(6))) < 1e-7


def test_probability_densities_converge_with_coupling():
    """|psi|^2 of the second even state approaches the odd n=3 density as g grows."""
    odd_density = sample_state(EigenSolution("odd", 3.0, 3)).values ** 2
    previous = math.inf
    for g in (1.0, 2.5, 5.0, 10.0):
        even = sample_state(solve_even(g, SolverConfig(n_states=2))[1])
        rms = math.sqrt(float(np.mean((even.values**2 - odd_density) ** 2)))
        assert rms < previous
        previous = rms
    assert previous < 0.05
