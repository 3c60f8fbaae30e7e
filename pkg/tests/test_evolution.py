import numpy as np
import pytest

from qwalk.coins import CoinField, fractional_swap, hadamard, random_su2, tensor, unitarity_check
from qwalk.evolution import (
    MAX_MATRIX_DIM,
    DefectMap,
    WalkSpec,
    apply_step_1d,
    apply_step_2d,
    build_step_matrix,
    evolve,
    run_walk,
)
from qwalk.statespace import WalkerState, localized_state, symmetric_coin

from oracles import brute_force_walk_1d, distribution_1d

H = hadamard()
H2 = tensor(H, H)


def probs(state):
    return (np.abs(state.amplitudes) ** 2).sum(axis=-1)


# ---------------------------------------------------------------- 1D steps


def test_one_step_hadamard():
    s = localized_state(1, 2, 0, [1, 0])
    s = apply_step_1d(s, H)
    p = probs(s)
    assert p[3] == pytest.approx(0.5)  # x = +1
    assert p[1] == pytest.approx(0.5)  # x = -1


def test_two_step_hadamard_distribution():
    s = localized_state(1, 2, 0, [1, 0])
    for _ in range(2):
        s = apply_step_1d(s, H)
    p = probs(s)
    np.testing.assert_allclose(p, [0.25, 0, 0.5, 0, 0.25], atol=1e-12)


def test_two_step_matches_brute_force_oracle():
    amps = brute_force_walk_1d(2, hadamard(), [1, 0])
    oracle = distribution_1d(amps, 2)
    s = localized_state(1, 2, 0, [1, 0])
    for _ in range(2):
        s = apply_step_1d(s, H)
    np.testing.assert_allclose(probs(s), oracle, atol=1e-13)


def test_zero_steps_identity():
    spec = WalkSpec(1, 0, H, initial_coin=[1, 0])
    assert list(evolve(spec)) == []
    final = run_walk(spec)
    np.testing.assert_array_equal(final.amplitudes, spec.initial_state().amplitudes)


# ---------------------------------------------------------------- 2D steps


def test_one_step_2d_uniform_quarter():
    s = localized_state(2, 1, (0, 0), symmetric_coin(2))
    s = apply_step_2d(s, H2)
    p = probs(s)
    for xi, yi in [(0, 0), (0, 2), (2, 0), (2, 2)]:
        assert p[xi, yi] == pytest.approx(0.25, abs=1e-12)
    assert p[1, 1] == 0


def test_first_step_cross_defect_phase_is_global():
    a = localized_state(2, 1, (0, 0), symmetric_coin(2))
    plain = apply_step_2d(a, H2)
    defected = apply_step_2d(a, H2, DefectMap.cross_xy(1.234))
    np.testing.assert_allclose(probs(plain), probs(defected), atol=1e-14)


def test_cross_defect_at_origin_is_double_phase():
    # e^{i phi (dx0 + dy0)} at (0,0) fires both deltas; phi = pi gives +1
    grid = DefectMap.cross_xy(np.pi).phase_grid(2, 2)
    assert grid[2, 2] == pytest.approx(1.0, abs=1e-12)
    assert grid[2, 0] == pytest.approx(-1.0, abs=1e-12)
    assert grid[0, 2] == pytest.approx(-1.0, abs=1e-12)


def test_point_defect_only_origin():
    grid = DefectMap.point(0.7).phase_grid(2, 2)
    assert grid[2, 2] == pytest.approx(np.exp(0.7j))
    off = np.delete(grid.reshape(-1), [2 * 5 + 2])
    np.testing.assert_allclose(off, 1.0)


def test_line_defect_requires_2d():
    with pytest.raises(ValueError):
        DefectMap.line_y(0.3).validate(1)
    with pytest.raises(ValueError):
        WalkSpec(1, 3, H, DefectMap.cross_xy(0.3))


def test_custom_defect_bounds_and_keys():
    with pytest.raises(IndexError):
        DefectMap.custom({(5, 0): 0.1}).phase_grid(2, 2)
    with pytest.raises(ValueError):
        DefectMap.custom({(1, 2): 0.1}).validate(1)


# ------------------------------------------------------------- evolve


def test_evolve_reports_and_norms():
    spec = WalkSpec(2, 10, H2, DefectMap.cross_xy(np.pi))
    reports = list(evolve(spec))
    assert [r.step for r in reports] == list(range(1, 11))
    assert all(r.norm_residual < 1e-12 for r in reports)
    assert reports[-1].state.norm() == pytest.approx(1.0, abs=1e-12)


def test_evolve_matches_repeated_apply_step():
    spec = WalkSpec(2, 6, H2, DefectMap.line_y(0.9))
    manual = spec.initial_state()
    for report in evolve(spec):
        manual = apply_step_2d(manual, H2, spec.defect)
        np.testing.assert_allclose(
            report.state.amplitudes, manual.amplitudes, atol=1e-13
        )


def test_evolve_windowed_matches_full_grid():
    # oversized lattice exercises the light-cone window; a small one the
    # full sweep; results must agree
    base = WalkSpec(2, 5, H2, DefectMap.cross_xy(0.8), halfwidth=9)
    windowed = run_walk(base)
    manual = base.initial_state()
    for _ in range(5):
        manual = apply_step_2d(manual, H2, base.defect)
    np.testing.assert_allclose(windowed.amplitudes, manual.amplitudes, atol=1e-13)


def test_evolve_off_center_start():
    spec = WalkSpec(2, 3, H2, initial_position=(2, -1), halfwidth=6)
    final = run_walk(spec)
    manual = spec.initial_state()
    for _ in range(3):
        manual = apply_step_2d(manual, H2)
    np.testing.assert_allclose(final.amplitudes, manual.amplitudes, atol=1e-13)
    assert final.norm() == pytest.approx(1.0, abs=1e-12)


def test_off_center_start_near_edge_falls_back():
    # light cone exceeds the lattice, so the full-grid path runs; with an
    # inward-moving coin the amplitude never actually hits the edge
    eye = np.eye(2, dtype=complex)
    spec = WalkSpec(1, 3, eye, initial_position=2, halfwidth=4, initial_coin=[0, 1])
    final = run_walk(spec)
    manual = spec.initial_state()
    for _ in range(3):
        manual = apply_step_1d(manual, eye)
    np.testing.assert_allclose(final.amplitudes, manual.amplitudes, atol=1e-13)


def test_off_center_start_escaping_raises():
    # same geometry but spreading amplitude does cross the edge
    spec = WalkSpec(1, 3, H, initial_position=2, halfwidth=4, initial_coin=[1, 0])
    with pytest.raises(IndexError):
        run_walk(spec)


def test_spec_validation():
    with pytest.raises(ValueError):
        WalkSpec(1, -1, H)
    with pytest.raises(ValueError):
        WalkSpec(3, 1, H)
    with pytest.raises(ValueError):
        WalkSpec(1, 5, H, halfwidth=3)  # open boundary needs L >= t
    with pytest.raises(ValueError):
        WalkSpec(1, 2, H, boundary="reflecting")
    WalkSpec(1, 5, H, halfwidth=3, boundary="periodic")  # fine when periodic


def test_open_edge_raises():
    s = localized_state(1, 1, 1, [1, 0])  # on the right edge, moving +1
    with pytest.raises(IndexError):
        apply_step_1d(s, np.eye(2, dtype=complex))


def test_norm_preserved_random_coins_and_defects():
    rng = np.random.default_rng(42)
    defects = [
        DefectMap.none(),
        DefectMap.line_y(rng.uniform(0, np.pi)),
        DefectMap.cross_xy(rng.uniform(0, np.pi)),
        DefectMap.point(rng.uniform(0, np.pi)),
        DefectMap.custom({(0, 1): 0.4, (-2, 2): -1.1}),
    ]
    for defect in defects:
        coin = tensor(random_su2(rng), random_su2(rng)) @ fractional_swap(rng.uniform())
        for report in evolve(WalkSpec(2, 6, coin, defect)):
            assert report.norm_residual < 1e-12


def test_defect_none_equals_custom_all_zero():
    table = {(x, y): 0.0 for x in range(-2, 3) for y in range(-2, 3)}
    a = run_walk(WalkSpec(2, 4, H2, DefectMap.none()))
    b = run_walk(WalkSpec(2, 4, H2, DefectMap.custom(table)))
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)


def test_reflection_symmetry_of_symmetric_runs():
    for defect in (DefectMap.cross_xy(2.2), DefectMap.point(1.1)):
        for report in evolve(WalkSpec(2, 8, H2, defect)):
            p = probs(report.state)
            np.testing.assert_allclose(p, p.T, atol=1e-12)


def test_periodic_shift_only_walk_returns():
    # identity coin: a pure conditional shift; one full wrap per ring
    L = 2
    n = 2 * L + 1
    spec = WalkSpec(
        2, 2 * n, np.eye(4, dtype=complex), boundary="periodic", halfwidth=L
    )
    final = run_walk(spec)
    np.testing.assert_array_equal(final.amplitudes, spec.initial_state().amplitudes)


def test_site_dependent_coin_field():
    rng = np.random.default_rng(1)
    special = tensor(random_su2(rng), random_su2(rng))
    fld = CoinField(2, H2, {(0, 0): special})
    final = run_walk(WalkSpec(2, 3, fld))
    # first step from the origin uses the special coin
    manual = localized_state(2, 3, (0, 0), symmetric_coin(2))
    manual = apply_step_2d(manual, special)
    manual = apply_step_2d(manual, fld)
    manual = apply_step_2d(manual, fld)
    np.testing.assert_allclose(final.amplitudes, manual.amplitudes, atol=1e-13)


# ------------------------------------------------------- step matrices


def test_step_matrix_pure_shift_is_permutation():
    U = build_step_matrix(1, 1, np.eye(2, dtype=complex))
    assert U.shape == (6, 6)
    assert np.array_equal(np.abs(U) > 0, np.abs(U) == 1)
    assert (np.abs(U).sum(axis=0) == 1).all()
    assert (np.abs(U).sum(axis=1) == 1).all()


def test_step_matrix_is_unitary_2d():
    U = build_step_matrix(2, 1, H2, DefectMap.cross_xy(0.7))
    assert U.shape == (36, 36)
    assert unitarity_check(U) < 1e-12


@pytest.mark.parametrize("dim,L", [(1, 2), (1, 3), (2, 1), (2, 2), (2, 3)])
def test_step_matrix_matches_apply_step(dim, L):
    rng = np.random.default_rng(100 + dim * 10 + L)
    for _ in range(5):
        if dim == 1:
            coin = random_su2(rng)
            defect = DefectMap.custom({0: rng.uniform(0, np.pi)})
        else:
            coin = tensor(random_su2(rng), random_su2(rng)) @ fractional_swap(
                rng.uniform()
            )
            defect = DefectMap.cross_xy(rng.uniform(0, np.pi))
        U = build_step_matrix(dim, L, coin, defect)
        n = 2 * L + 1
        shape = (n, 2) if dim == 1 else (n, n, 4)
        amps = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        amps = (amps / np.linalg.norm(amps)).astype(complex)
        state = WalkerState(dim, L, amps)
        step = apply_step_1d if dim == 1 else apply_step_2d
        direct = step(state, coin, defect, boundary="periodic")
        via_matrix = U @ state.packed()
        np.testing.assert_allclose(
            via_matrix, direct.packed(), atol=1e-13
        )


def test_step_matrix_dimension_cap():
    with pytest.raises(ValueError):
        build_step_matrix(2, 40, H2)
    assert MAX_MATRIX_DIM == 16384


def test_step_matrix_rejects_open_boundary():
    with pytest.raises(ValueError):
        build_step_matrix(1, 2, H, boundary="open")
