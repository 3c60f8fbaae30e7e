"""Equivalence of two coin-sharing 1D walkers and one 2D walker.

Two 1D walkers with a shared 4x4 coin step simultaneously: walker one
moves by +/-1 in x, walker two by +/-1 in y.  A single 2D walker with the
same coin takes unit steps along one axis per step, the axis and sign
selected by the coin pair.  The two step operators are *identical
matrices* after relabeling positions with the pair map

    (x, y)  ->  (x + y, x - y).

The pair map doubles coordinate ranges and fixes parity on the infinite
lattice, so on finite lattices the relabeling needs a normalization.  On
the periodic lattice of odd size n = 2L+1 the map is a lattice
automorphism once composed with halving (2 is invertible mod n, with
2^{-1} = (n+1)/2), giving the label bijection

    (x, y)  ->  (2^{-1} (x + y) mod n,  2^{-1} (x - y) mod n).

Under this bijection the simultaneous two-walker shift maps exactly onto
unit axis moves: coin (0,0) -> x+1, (0,1) -> y+1, (1,0) -> y-1,
(1,1) -> x-1.  The verification here is numeric and exact: both step
matrices are built independently and compared entry by entry after
conjugation by the basis permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .analysis import Distribution
from .coins import (
    IDENTITY2,
    IDENTITY4,
    PAULI_Z,
    CoinField,
    as_coin_field,
    fractional_swap,
    random_su2,
    su4_compose,
    tensor,
)
from .evolution import MAX_MATRIX_DIM, DefectMap, build_step_matrix
from .statespace import WalkerState, as_coin_state, state_dimension

__all__ = [
    "coordinate_forward",
    "BasisPermutation",
    "build_two_walker_matrix",
    "transformed_step_matrix",
    "transform_defect",
    "verify_isomorphism",
    "check_translation_equivalence",
    "check_decomposition_claims",
    "random_shared_coin",
    "axis_walk_state",
    "map_two_walker_distribution",
]

PairMap = Callable[[int, int], tuple[int, int]]


def coordinate_forward(x: int, y: int) -> tuple[int, int]:
    """The pair map (x, y) -> (x+y, x-y).

    Image coordinates always share parity (their sum 2x is even); on
    [-L, L]^2 the image lies in the even-parity sublattice of [-2L, 2L]^2.
    """
    return x + y, x - y


def _wrap(v: int, halfwidth: int) -> int:
    n = 2 * halfwidth + 1
    return (v + halfwidth) % n - halfwidth


@dataclass(frozen=True)
class BasisPermutation:
    """Relabeling of the two-walker packed basis onto the 2D packed basis.

    ``indices[j]`` is the 2D packed index of two-walker packed index j;
    coin labels pass through unchanged.  Built from a pair map normalized
    to the odd periodic lattice (see module docstring), so it is a true
    permutation: exactly one 1 per row and column of :meth:`matrix`.
    """

    halfwidth: int
    indices: NDArray[np.int64]

    @classmethod
    def build(cls, halfwidth: int, pair_map: PairMap | None = None) -> "BasisPermutation":
        """Permutation for the given halfwidth.

        ``pair_map`` defaults to :func:`coordinate_forward`; its output is
        normalized by the mod-n halving, so passing a deliberately wrong
        map yields a valid permutation that fails the equivalence checks.
        """
        L = halfwidth
        n = 2 * L + 1
        inv2 = (n + 1) // 2
        fwd = pair_map or coordinate_forward
        idx = np.empty(4 * n * n, dtype=np.int64)
        for x in range(-L, L + 1):
            for y in range(-L, L + 1):
                u, v = fwd(x, y)
                X = _wrap(inv2 * u, L)
                Y = _wrap(inv2 * v, L)
                src = ((x + L) * n + (y + L)) * 4
                dst = ((X + L) * n + (Y + L)) * 4
                for k in range(4):
                    idx[src + k] = dst + k
        if len(np.unique(idx)) != idx.size:
            raise ValueError("pair map does not induce a bijection on the lattice")
        return cls(L, idx)

    def matrix(self) -> NDArray[np.int64]:
        """Explicit permutation matrix (integer 0/1)."""
        dim = self.indices.size
        P = np.zeros((dim, dim), dtype=np.int64)
        P[self.indices, np.arange(dim)] = 1
        return P

    def conjugate(self, matrix_2d: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """P^dagger M P: express a 2D-basis operator in the two-walker basis."""
        return matrix_2d[np.ix_(self.indices, self.indices)]

    def site_image(self, x: int, y: int) -> tuple[int, int]:
        """2D site carrying the two-walker site (x, y)."""
        L = self.halfwidth
        n = 2 * L + 1
        k = self.indices[((x + L) * n + (y + L)) * 4] // 4
        return k // n - L, k % n - L


def _check_cap(halfwidth: int) -> None:
    dim = state_dimension(2, halfwidth)
    if dim > MAX_MATRIX_DIM:
        raise ValueError(f"matrix dimension {dim} exceeds cap {MAX_MATRIX_DIM}")


def build_two_walker_matrix(
    halfwidth: int,
    coin4: NDArray[np.complex128] | CoinField,
    defect: DefectMap | None = None,
) -> NDArray[np.complex128]:
    """One joint step of two 1D walkers sharing a 4x4 coin.

    The shared coin acts on the (c, d) pair, then each walker shifts by
    its own coin bit, periodic on [-L, L].  This is the same operator as
    the single-step 2D walk matrix, which is exactly the point of the
    equivalence.
    """
    _check_cap(halfwidth)
    return build_step_matrix(2, halfwidth, coin4, defect, "periodic")


# Post-coin (c,d) -> unit axis move of the single 2D walker.
_AXIS_MOVES = {0: (1, 0), 1: (0, 1), 2: (0, -1), 3: (-1, 0)}


def transformed_step_matrix(
    halfwidth: int,
    coin4: NDArray[np.complex128] | CoinField,
    defect: DefectMap | None = None,
) -> NDArray[np.complex128]:
    """One step of the single 2D walker with unit axis moves, periodic.

    ``defect`` here is a phase table over the *2D* coordinates (use
    :func:`transform_defect` to carry a two-walker defect across).  A
    site-dependent ``CoinField`` is likewise keyed by 2D coordinates.
    """
    _check_cap(halfwidth)
    fld = as_coin_field(coin4, 2)
    grid = (defect or DefectMap.none()).phase_grid(halfwidth, 2)
    L = halfwidth
    n = 2 * L + 1
    dim = 4 * n * n
    U = np.zeros((dim, dim), dtype=np.complex128)
    for X in range(-L, L + 1):
        for Y in range(-L, L + 1):
            cmat = fld.at((X, Y))
            phase = 1.0 if grid is None else grid[X + L, Y + L]
            col0 = ((X + L) * n + (Y + L)) * 4
            for kp, (dX, dY) in _AXIS_MOVES.items():
                Xp = _wrap(X + dX, L)
                Yp = _wrap(Y + dY, L)
                row0 = ((Xp + L) * n + (Yp + L)) * 4
                for k in range(4):
                    U[row0 + kp, col0 + k] = phase * cmat[kp, k]
    return U


def transform_defect(defect: DefectMap | None, halfwidth: int) -> DefectMap:
    """Carry a two-walker defect to the 2D side of the equivalence.

    Positions move with the basis permutation; a line defect on y = 0
    becomes a phase table along the image of that line (the diagonal,
    up to the lattice normalization).
    """
    if defect is None or defect.kind == "none":
        return DefectMap.none()
    grid = defect.phase_grid(halfwidth, 2)
    assert grid is not None
    perm = BasisPermutation.build(halfwidth)
    L = halfwidth
    table: dict[tuple[int, int], float] = {}
    for x in range(-L, L + 1):
        for y in range(-L, L + 1):
            f = grid[x + L, y + L]
            if f != 1.0:
                table[perm.site_image(x, y)] = float(np.angle(f))
    return DefectMap.custom(table)


def verify_isomorphism(
    halfwidth: int,
    coin4: NDArray[np.complex128] | CoinField,
    defect: DefectMap | None = None,
) -> float:
    """Max elementwise deviation between the two-walker step matrix and the
    permutation-conjugated 2D step matrix.

    Zero (to floating-point identity) whenever the relabeling is correct,
    for any shared coin.
    """
    u_two = build_two_walker_matrix(halfwidth, coin4, defect)
    u_2d = transformed_step_matrix(
        halfwidth, coin4, transform_defect(defect, halfwidth)
    )
    perm = BasisPermutation.build(halfwidth)
    return float(np.abs(u_two - perm.conjugate(u_2d)).max())


def check_translation_equivalence(
    halfwidth: int, pair_map: PairMap | None = None
) -> float:
    """Compare the two shift operators (identity coin) as permutation
    matrices after relabeling; 0.0 means exact equality."""
    u_two = build_two_walker_matrix(halfwidth, IDENTITY4)
    u_2d = transformed_step_matrix(halfwidth, IDENTITY4)
    perm = BasisPermutation.build(halfwidth, pair_map)
    return float(np.abs(u_two - perm.conjugate(u_2d)).max())


def random_shared_coin(rng: np.random.Generator) -> NDArray[np.complex128]:
    """Random shared coin: a tensor product, a fractional swap, or a
    product of both."""
    kind = rng.integers(3)
    if kind == 0:
        return tensor(random_su2(rng), random_su2(rng))
    if kind == 1:
        return fractional_swap(float(rng.uniform(0.0, 1.0)))
    return tensor(random_su2(rng), random_su2(rng)) @ fractional_swap(
        float(rng.uniform(0.0, 1.0))
    )


def _best_global_phase_deviation(
    a: NDArray[np.complex128], b: NDArray[np.complex128]
) -> float:
    """min over unit phases w of max |a - w b|."""
    overlap = np.vdot(b, a)
    if abs(overlap) < 1e-30:
        return float(np.abs(a).max())
    w = overlap / abs(overlap)
    return float(np.abs(a - w * b).max())


def check_decomposition_claims(
    trials: int = 100,
    seed: int = 7,
    taus: NDArray[np.float64] | None = None,
    tol: float = 1e-12,
) -> dict:
    """Numerically probe two parameter points of the three-swap composition.

    Separable point: with all swap exponents zero the composition equals
    (u1 v1) (x) (u2 v2); checked over random unitary factors.

    Shared-coin point: ``su4_compose(1,1,1,1, tau, -1, -1)`` is compared
    against ``fractional_swap(tau)`` exactly, up to a global phase, and up
    to a fixed -(Z (x) Z) factor.  (Algebraically the bracket evaluates to
    -(Z (x) Z) fractional_swap(tau); the check reports, it does not
    assume.)  The report is informational: findings, not pass/fail.
    """
    rng = np.random.default_rng(seed)
    sep_max = 0.0
    for _ in range(trials):
        u1, u2, v1, v2 = (random_su2(rng) for _ in range(4))
        composed = su4_compose(u1, u2, v1, v2, 0.0, 0.0, 0.0)
        direct = tensor(u1 @ v1, u2 @ v2)
        sep_max = max(sep_max, float(np.abs(composed - direct).max()))

    if taus is None:
        taus = np.concatenate([np.linspace(0.0, 1.0, 11), rng.uniform(0, 1, 5)])
    zz = -tensor(PAULI_Z, PAULI_Z)
    dev_exact = dev_phase = dev_zz = 0.0
    for tau in taus:
        composed = su4_compose(
            IDENTITY2, IDENTITY2, IDENTITY2, IDENTITY2, float(tau), -1.0, -1.0
        )
        target = fractional_swap(float(tau))
        dev_exact = max(dev_exact, float(np.abs(composed - target).max()))
        dev_phase = max(dev_phase, _best_global_phase_deviation(composed, target))
        dev_zz = max(dev_zz, float(np.abs(composed - zz @ target).max()))

    if dev_exact <= tol:
        finding = "matches fractional_swap(tau) exactly"
    elif dev_phase <= tol:
        finding = "matches fractional_swap(tau) up to a global phase"
    elif dev_zz <= tol:
        finding = "matches -(Z x Z) @ fractional_swap(tau) exactly"
    else:
        finding = "matches none of the three candidates"

    bracket_at_zero = su4_compose(
        IDENTITY2, IDENTITY2, IDENTITY2, IDENTITY2, 0.0, -1.0, -1.0
    )
    dev_identity = float(np.abs(bracket_at_zero - IDENTITY4).max())

    return {
        "separable": {
            "trials": trials,
            "max_deviation": sep_max,
            "confirmed": sep_max <= tol,
        },
        "entangled": {
            "taus": [float(t) for t in taus],
            "max_deviation_exact": dev_exact,
            "max_deviation_global_phase": dev_phase,
            "max_deviation_zz_factor": dev_zz,
            "finding": finding,
        },
        "tau_zero_bracket": {
            "deviation_from_identity": dev_identity,
            "equals_identity": dev_identity <= tol,
        },
    }


def axis_walk_state(
    steps: int,
    coin4: NDArray[np.complex128],
    initial_coin,
    halfwidth: int | None = None,
) -> WalkerState:
    """State of the unit-axis-move 2D walk after ``steps`` steps from the
    origin, open boundary.

    This is the transformed side of the equivalence at state-vector level;
    the plain 2D walk in :mod:`qwalk.evolution` moves diagonally instead.
    """
    L = halfwidth if halfwidth is not None else max(steps, 1)
    if L < steps:
        raise ValueError(f"halfwidth {L} < steps {steps}")
    coin = np.asarray(coin4, dtype=np.complex128)
    vec = as_coin_state(initial_coin, 2)
    n = 2 * L + 1
    amps = np.zeros((n, n, 4), dtype=np.complex128)
    amps[L, L, :] = vec
    for _ in range(steps):
        mixed = (amps.reshape(-1, 4) @ coin.T).reshape(n, n, 4)
        out = np.zeros_like(mixed)
        out[1:, :, 0] = mixed[:-1, :, 0]   # (0,0): x+1
        out[:, 1:, 1] = mixed[:, :-1, 1]   # (0,1): y+1
        out[:, :-1, 2] = mixed[:, 1:, 2]   # (1,0): y-1
        out[:-1, :, 3] = mixed[1:, :, 3]   # (1,1): x-1
        amps = out
    return WalkerState(2, L, amps)


def map_two_walker_distribution(dist: Distribution) -> Distribution:
    """Push a two-walker position distribution through the pair map.

    Output site (X, Y) = ((x+y)/2, (x-y)/2) on the same halfwidth; the
    simultaneous shifts keep x and y of equal parity for origin-started
    walks, so the halving is exact on the support.
    """
    if dist.dimensionality != 2:
        raise ValueError("expected a 2D joint distribution")
    L = dist.halfwidth
    out = np.zeros_like(dist.probs)
    for xi in range(2 * L + 1):
        for yi in range(2 * L + 1):
            p = dist.probs[xi, yi]
            if p == 0.0:
                continue
            x, y = xi - L, yi - L
            if (x + y) % 2 != 0:
                raise ValueError(
                    f"probability {p} on odd-parity site ({x}, {y}); "
                    "not an origin-started two-walker distribution"
                )
            X, Y = (x + y) // 2, (x - y) // 2
            out[X + L, Y + L] += p
    return Distribution(out, L)
