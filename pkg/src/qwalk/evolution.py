"""Single-step and multi-step walk evolution with position-dependent
phase defects, plus dense step-matrix builders for small lattices.

Step structure, fixed across the package:

1. coin unitary on the coin subspace at each site,
2. multiplication by the defect phase of the *source* site,
3. coin-conditioned shift.

Steps 1 and 2 commute (the phase is diagonal in position, the coin acts
only on the coin subspace); applying the phase before or after the shift
does not, and the source-site choice is part of the contract.

Shift convention: coin bit 0 moves its axis by +1, coin bit 1 by -1; the
first coin bit steers x, the second steers y.

Boundaries: ``"open"`` requires halfwidth >= steps so an origin-started
walker never touches the edge (a step that would push amplitude past the
edge raises IndexError).  ``"periodic"`` identifies site L+1 with -L per
axis and exists mainly for matrix-level checks at small halfwidth.

Multi-step evolution sweeps only the walker's light cone (radius = step
count around the start site), which keeps the per-step cost at O(occupied
sites) and makes 500-step 2D runs practical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Literal, Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

from .coins import CoinField, as_coin_field
from .statespace import (
    WalkerState,
    as_coin_state,
    localized_state,
    state_dimension,
    symmetric_coin,
)

__all__ = [
    "Boundary",
    "DefectMap",
    "WalkSpec",
    "StepReport",
    "apply_step_1d",
    "apply_step_2d",
    "evolve",
    "run_walk",
    "build_step_matrix",
    "MAX_MATRIX_DIM",
    "STEP_NORM_TOL",
]

Boundary = Literal["open", "periodic"]

# A step whose norm drifts past this indicates a broken operator, not noise.
STEP_NORM_TOL = 1e-10

# Dense step matrices are capped at this total dimension.
MAX_MATRIX_DIM = 16384


@dataclass(frozen=True)
class DefectMap:
    """Position -> unit-modulus phase factor; encodes the lattice disorder.

    Variants
    --------
    none
        Factor 1 everywhere.
    line_y(phi)
        Factor e^{i phi} on the line y = 0 (2D only).
    cross_xy(phi)
        Factor e^{i phi} on each of the lines x = 0 and y = 0; the origin
        sits on both and picks up e^{2 i phi}.  (2D only.)
    point(phi)
        Factor e^{i phi} at the origin site only.
    custom(table)
        Explicit phase table in radians: ``{x: phase}`` for 1D,
        ``{(x, y): phase}`` for 2D; unlisted sites get phase 0.
    """

    kind: Literal["none", "line_y", "cross_xy", "point", "custom"]
    phi: float = 0.0
    table: Mapping[int, float] | Mapping[tuple[int, int], float] | None = None

    @classmethod
    def none(cls) -> "DefectMap":
        return cls("none")

    @classmethod
    def line_y(cls, phi: float) -> "DefectMap":
        return cls("line_y", float(phi))

    @classmethod
    def cross_xy(cls, phi: float) -> "DefectMap":
        return cls("cross_xy", float(phi))

    @classmethod
    def point(cls, phi: float) -> "DefectMap":
        return cls("point", float(phi))

    @classmethod
    def custom(
        cls, table: Mapping[int, float] | Mapping[tuple[int, int], float]
    ) -> "DefectMap":
        return cls("custom", 0.0, dict(table))

    def validate(self, dimensionality: int) -> None:
        if self.kind in ("line_y", "cross_xy") and dimensionality != 2:
            raise ValueError(f"defect {self.kind!r} is only defined for 2D walks")
        if self.kind == "custom":
            for key in self.table or {}:
                if dimensionality == 1 and not isinstance(key, (int, np.integer)):
                    raise ValueError(f"1D custom defect key must be an int, got {key!r}")
                if dimensionality == 2 and (
                    not isinstance(key, tuple) or len(key) != 2
                ):
                    raise ValueError(
                        f"2D custom defect key must be an (x, y) tuple, got {key!r}"
                    )

    def phase_grid(
        self, halfwidth: int, dimensionality: int
    ) -> NDArray[np.complex128] | None:
        """Dense per-site phase factors, or None when trivially 1."""
        self.validate(dimensionality)
        L = halfwidth
        n = 2 * L + 1
        if self.kind == "none":
            return None
        f = np.exp(1j * self.phi)
        if dimensionality == 1:
            grid = np.ones(n, dtype=np.complex128)
            if self.kind == "point":
                grid[L] = f
            elif self.kind == "custom":
                for x, theta in (self.table or {}).items():  # type: ignore[union-attr]
                    if abs(int(x)) > L:
                        raise IndexError(f"custom defect site x={x} outside [-{L}, {L}]")
                    grid[int(x) + L] = np.exp(1j * theta)
            else:
                raise ValueError(f"defect {self.kind!r} is only defined for 2D walks")
            return grid
        grid2 = np.ones((n, n), dtype=np.complex128)
        if self.kind == "line_y":
            grid2[:, L] *= f
        elif self.kind == "cross_xy":
            grid2[L, :] *= f
            grid2[:, L] *= f
        elif self.kind == "point":
            grid2[L, L] = f
        elif self.kind == "custom":
            for key, theta in (self.table or {}).items():
                x, y = key  # type: ignore[misc]
                if abs(x) > L or abs(y) > L:
                    raise IndexError(f"custom defect site {key} outside [-{L}, {L}]^2")
                grid2[x + L, y + L] = np.exp(1j * theta)
        return grid2


# A phase applier mutates the post-coin array in place.  The two trailing
# arguments give the array coordinates of the window origin so the same
# applier serves full-lattice and windowed sweeps; line/cross/point
# defects touch only their slices, keeping everything else bitwise
# untouched.
_Applier = Callable[[NDArray[np.complex128], int, int], None]


def _phase_applier(
    defect: DefectMap | None, halfwidth: int, dimensionality: int
) -> _Applier | None:
    if defect is None or defect.kind == "none":
        return None
    defect.validate(dimensionality)
    L = halfwidth
    f = np.exp(1j * defect.phi)
    if dimensionality == 1:
        if defect.kind == "point":
            def apply_point1(m, x0, _y0):
                i = L - x0
                if 0 <= i < m.shape[0]:
                    m[i, :] *= f
            return apply_point1
        grid = defect.phase_grid(L, 1)
        assert grid is not None

        def apply_custom1(m, x0, _y0):
            m *= grid[x0 : x0 + m.shape[0], None]
        return apply_custom1
    if defect.kind == "line_y":
        def apply_line(m, _x0, y0):
            j = L - y0
            if 0 <= j < m.shape[1]:
                m[:, j, :] *= f
        return apply_line
    if defect.kind == "cross_xy":
        def apply_cross(m, x0, y0):
            i = L - x0
            if 0 <= i < m.shape[0]:
                m[i, :, :] *= f
            j = L - y0
            if 0 <= j < m.shape[1]:
                m[:, j, :] *= f
        return apply_cross
    if defect.kind == "point":
        def apply_point2(m, x0, y0):
            i, j = L - x0, L - y0
            if 0 <= i < m.shape[0] and 0 <= j < m.shape[1]:
                m[i, j, :] *= f
        return apply_point2
    grid2 = defect.phase_grid(L, 2)
    assert grid2 is not None

    def apply_custom2(m, x0, y0):
        m *= grid2[x0 : x0 + m.shape[0], y0 : y0 + m.shape[1], None]
    return apply_custom2


class _Stepper:
    """Full-lattice single-step kernel: coin mix, defect phase, shift."""

    def __init__(
        self,
        dimensionality: int,
        halfwidth: int,
        coin: NDArray[np.complex128] | CoinField,
        defect: DefectMap | None,
        boundary: Boundary,
    ):
        if boundary not in ("open", "periodic"):
            raise ValueError(f"boundary must be 'open' or 'periodic', got {boundary!r}")
        self.dim = dimensionality
        self.halfwidth = halfwidth
        self.boundary = boundary
        fld = as_coin_field(coin, dimensionality)
        # Uniform coins go through one GEMM; per-site fields use einsum.
        self.coin_t: NDArray[np.complex128] | None = (
            fld.default.T.copy() if fld.is_uniform else None
        )
        self.stacked: NDArray[np.complex128] | None = (
            None if fld.is_uniform else fld.stacked(halfwidth)
        )
        self.applier = _phase_applier(defect, halfwidth, dimensionality)

    def _mixed(self, amps: NDArray[np.complex128]) -> NDArray[np.complex128]:
        if self.coin_t is not None:
            k = amps.shape[-1]
            mixed = (amps.reshape(-1, k) @ self.coin_t).reshape(amps.shape)
        elif self.dim == 1:
            mixed = np.einsum("xij,xj->xi", self.stacked, amps)
        else:
            mixed = np.einsum("xyij,xyj->xyi", self.stacked, amps)
        if self.applier is not None:
            self.applier(mixed, 0, 0)
        return mixed

    def step(self, amps: NDArray[np.complex128]) -> NDArray[np.complex128]:
        m = self._mixed(amps)
        if self.dim == 1:
            return self._shift_1d(m)
        return self._shift_2d(m)

    def _shift_1d(self, m: NDArray[np.complex128]) -> NDArray[np.complex128]:
        if self.boundary == "periodic":
            out = np.empty_like(m)
            out[:, 0] = np.roll(m[:, 0], 1)
            out[:, 1] = np.roll(m[:, 1], -1)
            return out
        if m[-1, 0] != 0 or m[0, 1] != 0:
            raise IndexError(
                "step would shift amplitude past the open lattice edge; "
                "use halfwidth >= steps"
            )
        out = np.zeros_like(m)
        out[1:, 0] = m[:-1, 0]
        out[:-1, 1] = m[1:, 1]
        return out

    def _shift_2d(self, m: NDArray[np.complex128]) -> NDArray[np.complex128]:
        if self.boundary == "periodic":
            out = np.empty_like(m)
            out[:, :, 0] = np.roll(m[:, :, 0], (1, 1), axis=(0, 1))
            out[:, :, 1] = np.roll(m[:, :, 1], (1, -1), axis=(0, 1))
            out[:, :, 2] = np.roll(m[:, :, 2], (-1, 1), axis=(0, 1))
            out[:, :, 3] = np.roll(m[:, :, 3], (-1, -1), axis=(0, 1))
            return out
        edges = (
            np.any(m[-1, :, 0]) or np.any(m[:, -1, 0])
            or np.any(m[-1, :, 1]) or np.any(m[:, 0, 1])
            or np.any(m[0, :, 2]) or np.any(m[:, -1, 2])
            or np.any(m[0, :, 3]) or np.any(m[:, 0, 3])
        )
        if edges:
            raise IndexError(
                "step would shift amplitude past the open lattice edge; "
                "use halfwidth >= steps"
            )
        out = np.zeros_like(m)
        out[1:, 1:, 0] = m[:-1, :-1, 0]   # (c,d)=(0,0): x+1, y+1
        out[1:, :-1, 1] = m[:-1, 1:, 1]   # (0,1): x+1, y-1
        out[:-1, 1:, 2] = m[1:, :-1, 2]   # (1,0): x-1, y+1
        out[:-1, :-1, 3] = m[1:, 1:, 3]   # (1,1): x-1, y-1
        return out


class _WindowedStepper:
    """Light-cone sweep for open-boundary walks started from a single site.

    ``step(a, out, r_in)`` reads the window of radius ``r_in`` around the
    start site in ``a`` and fully determines the radius ``r_in + 1``
    window of ``out`` (interior shifted in, per-component rims zeroed).
    The caller guarantees the output window fits inside the lattice and
    that ``out`` is zero outside it.
    """

    def __init__(
        self,
        dimensionality: int,
        halfwidth: int,
        center: tuple[int, ...],
        coin: NDArray[np.complex128] | CoinField,
        defect: DefectMap | None,
    ):
        self.dim = dimensionality
        self.halfwidth = halfwidth
        self.center = center
        fld = as_coin_field(coin, dimensionality)
        self.coin_t = fld.default.T.copy() if fld.is_uniform else None
        self.stacked = None if fld.is_uniform else fld.stacked(halfwidth)
        self.applier = _phase_applier(defect, halfwidth, dimensionality)
        self._scratch: NDArray[np.complex128] | None = None

    def _mix(self, win: NDArray[np.complex128]) -> NDArray[np.complex128]:
        k = win.shape[-1]
        size = win.size
        if self._scratch is None or self._scratch.size < size:
            full = state_dimension(self.dim, self.halfwidth)
            self._scratch = np.empty(min(max(size * 4, 1024), full), np.complex128)
        m = self._scratch[:size].reshape(win.shape)
        if self.coin_t is not None:
            src = win.reshape(-1, k)
            np.matmul(src, self.coin_t, out=m.reshape(-1, k))
        elif self.dim == 1:
            x0 = self.center[0] - (win.shape[0] - 1) // 2
            np.einsum(
                "xij,xj->xi", self.stacked[x0 : x0 + win.shape[0]], win, out=m
            )
        else:
            x0 = self.center[0] - (win.shape[0] - 1) // 2
            y0 = self.center[1] - (win.shape[1] - 1) // 2
            np.einsum(
                "xyij,xyj->xyi",
                self.stacked[x0 : x0 + win.shape[0], y0 : y0 + win.shape[1]],
                win,
                out=m,
            )
        return m

    def step(
        self,
        a: NDArray[np.complex128],
        out: NDArray[np.complex128],
        r_in: int,
    ) -> None:
        r_out = r_in + 1
        if self.dim == 1:
            (cx,) = self.center
            s_in = slice(cx - r_in, cx + r_in + 1)
            win = a[s_in, :]
            m = self._mix(win)
            if self.applier is not None:
                self.applier(m, cx - r_in, 0)
            ov = out[cx - r_out : cx + r_out + 1, :]
            ov[2:, 0] = m[:, 0]
            ov[:2, 0] = 0
            ov[:-2, 1] = m[:, 1]
            ov[-2:, 1] = 0
            return
        cx, cy = self.center
        s_in_x = slice(cx - r_in, cx + r_in + 1)
        s_in_y = slice(cy - r_in, cy + r_in + 1)
        win = a[s_in_x, s_in_y, :]
        # The strided window is copied once by reshape inside _mix's GEMM
        # path; acceptable next to the arithmetic.
        if self.coin_t is not None and not win.flags.c_contiguous:
            win = np.ascontiguousarray(win)
        m = self._mix(win)
        if self.applier is not None:
            self.applier(m, cx - r_in, cy - r_in)
        ov = out[cx - r_out : cx + r_out + 1, cy - r_out : cy + r_out + 1, :]
        ov[2:, 2:, 0] = m[:, :, 0]
        ov[:2, :, 0] = 0
        ov[2:, :2, 0] = 0
        ov[2:, :-2, 1] = m[:, :, 1]
        ov[:2, :, 1] = 0
        ov[2:, -2:, 1] = 0
        ov[:-2, 2:, 2] = m[:, :, 2]
        ov[-2:, :, 2] = 0
        ov[:-2, :2, 2] = 0
        ov[:-2, :-2, 3] = m[:, :, 3]
        ov[-2:, :, 3] = 0
        ov[:-2, -2:, 3] = 0


def apply_step_1d(
    state: WalkerState,
    coin: NDArray[np.complex128] | CoinField,
    defect: DefectMap | None = None,
    boundary: Boundary = "open",
) -> WalkerState:
    """One step of the 1D walk: coin, source-site phase, conditional shift."""
    if state.dimensionality != 1:
        raise ValueError("apply_step_1d expects a 1D state")
    stepper = _Stepper(1, state.halfwidth, coin, defect, boundary)
    return WalkerState(1, state.halfwidth, stepper.step(state.amplitudes))


def apply_step_2d(
    state: WalkerState,
    coin: NDArray[np.complex128] | CoinField,
    defect: DefectMap | None = None,
    boundary: Boundary = "open",
) -> WalkerState:
    """One step of the 2D walk: coin, source-site phase, conditional shift."""
    if state.dimensionality != 2:
        raise ValueError("apply_step_2d expects a 2D state")
    stepper = _Stepper(2, state.halfwidth, coin, defect, boundary)
    return WalkerState(2, state.halfwidth, stepper.step(state.amplitudes))


@dataclass
class WalkSpec:
    """Complete walk configuration.

    ``halfwidth`` defaults to ``max(steps, 1)`` so an open-boundary walker
    never reaches the edge.  ``initial_coin`` defaults to the symmetric
    coin state; ``initial_position`` to the origin.
    """

    dimensionality: int
    steps: int
    coin: NDArray[np.complex128] | CoinField
    defect: DefectMap = field(default_factory=DefectMap.none)
    initial_position: int | tuple[int, int] | None = None
    initial_coin: Sequence[complex] | None = None
    boundary: Boundary = "open"
    halfwidth: int | None = None

    def __post_init__(self) -> None:
        if self.dimensionality not in (1, 2):
            raise ValueError(f"dimensionality must be 1 or 2, got {self.dimensionality!r}")
        if not isinstance(self.steps, (int, np.integer)) or self.steps < 0:
            raise ValueError(f"steps must be a nonnegative integer, got {self.steps!r}")
        self.steps = int(self.steps)
        if self.halfwidth is None:
            self.halfwidth = max(self.steps, 1)
        if self.halfwidth < 1:
            raise ValueError(f"halfwidth must be >= 1, got {self.halfwidth}")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(
                f"boundary must be 'open' or 'periodic', got {self.boundary!r}"
            )
        if self.boundary == "open" and self.halfwidth < self.steps:
            raise ValueError(
                f"open boundary needs halfwidth >= steps "
                f"({self.halfwidth} < {self.steps})"
            )
        if self.initial_position is None:
            self.initial_position = 0 if self.dimensionality == 1 else (0, 0)
        if self.initial_coin is None:
            self.initial_coin = symmetric_coin(self.dimensionality)
        # Fail fast on bad coins/defects/initial data rather than mid-run.
        as_coin_field(self.coin, self.dimensionality)
        self.defect.validate(self.dimensionality)
        as_coin_state(self.initial_coin, self.dimensionality)

    def initial_state(self) -> WalkerState:
        assert self.halfwidth is not None and self.initial_position is not None
        assert self.initial_coin is not None
        return localized_state(
            self.dimensionality, self.halfwidth, self.initial_position, self.initial_coin
        )

    def _center(self) -> tuple[int, ...]:
        L = self.halfwidth
        if self.dimensionality == 1:
            return (int(self.initial_position) + L,)  # type: ignore[arg-type]
        x, y = self.initial_position  # type: ignore[misc]
        return (x + L, y + L)

    def _windowable(self) -> bool:
        # The light-cone sweep needs the full cone inside the lattice.
        if self.boundary != "open":
            return False
        L = self.halfwidth
        assert L is not None
        if self.dimensionality == 1:
            x = int(self.initial_position)  # type: ignore[arg-type]
            return abs(x) + self.steps <= L
        x, y = self.initial_position  # type: ignore[misc]
        return max(abs(x), abs(y)) + self.steps <= L


@dataclass
class StepReport:
    """Post-step snapshot: 1-based step index, state, and |1 - sum|a|^2|."""

    step: int
    state: WalkerState
    norm_residual: float


def _window_norm2(out: NDArray[np.complex128], center, r: int, dim: int) -> float:
    if dim == 1:
        (cx,) = center
        ov = out[cx - r : cx + r + 1, :]
        return float(np.einsum("xc,xc->", ov, ov.conj()).real)
    cx, cy = center
    ov = out[cx - r : cx + r + 1, cy - r : cy + r + 1, :]
    return float(np.einsum("xyc,xyc->", ov, ov.conj()).real)


def evolve(spec: WalkSpec) -> Iterator[StepReport]:
    """Run the walk, yielding one report per step (lazily).

    Each report owns a fresh amplitude array, so holding on to reports is
    safe; materialize with ``list(evolve(spec))`` for small runs.  Raises
    RuntimeError if the per-step norm residual ever reaches 1e-10, which
    would indicate a broken step operator.
    """
    state = spec.initial_state()
    amps = state.amplitudes
    L = state.halfwidth
    if spec._windowable():
        center = spec._center()
        kernel = _WindowedStepper(spec.dimensionality, L, center, spec.coin, spec.defect)
        for i in range(1, spec.steps + 1):
            out = np.zeros_like(amps)
            kernel.step(amps, out, i - 1)
            norm2 = _window_norm2(out, center, i, spec.dimensionality)
            residual = abs(1.0 - norm2)
            _check_residual(residual, i)
            amps = out
            yield StepReport(i, WalkerState(spec.dimensionality, L, amps), residual)
        return
    stepper = _Stepper(spec.dimensionality, L, spec.coin, spec.defect, spec.boundary)
    for i in range(1, spec.steps + 1):
        amps = stepper.step(amps)
        residual = abs(1.0 - float(np.vdot(amps, amps).real))
        _check_residual(residual, i)
        yield StepReport(i, WalkerState(spec.dimensionality, L, amps), residual)


def _check_residual(residual: float, step: int) -> None:
    if residual >= STEP_NORM_TOL:
        raise RuntimeError(
            f"norm residual {residual:.3e} at step {step} exceeds {STEP_NORM_TOL}"
        )


def run_walk(spec: WalkSpec) -> WalkerState:
    """Run the walk and return only the final state.

    Equivalent to the last report of :func:`evolve` but recycles two
    amplitude buffers instead of allocating one per step.
    """
    state = spec.initial_state()
    if not spec._windowable() or spec.steps == 0:
        final = state
        for report in evolve(spec):
            final = report.state
        return final
    a = state.amplitudes
    b = np.zeros_like(a)
    L = state.halfwidth
    center = spec._center()
    kernel = _WindowedStepper(spec.dimensionality, L, center, spec.coin, spec.defect)
    for i in range(1, spec.steps + 1):
        kernel.step(a, b, i - 1)
        residual = abs(1.0 - _window_norm2(b, center, i, spec.dimensionality))
        _check_residual(residual, i)
        a, b = b, a
    return WalkerState(spec.dimensionality, L, a)


def build_step_matrix(
    dimensionality: int,
    halfwidth: int,
    coin: NDArray[np.complex128] | CoinField,
    defect: DefectMap | None = None,
    boundary: Boundary = "periodic",
) -> NDArray[np.complex128]:
    """Dense unitary matrix of one step on the packed basis.

    Only the periodic boundary is supported: truncating shifts at an open
    edge would not give a unitary matrix.  Total dimension is capped at
    ``MAX_MATRIX_DIM``.
    """
    if boundary != "periodic":
        raise ValueError("build_step_matrix supports only the periodic boundary")
    dim_total = state_dimension(dimensionality, halfwidth)
    if dim_total > MAX_MATRIX_DIM:
        raise ValueError(
            f"step matrix dimension {dim_total} exceeds cap {MAX_MATRIX_DIM}"
        )
    fld = as_coin_field(coin, dimensionality)
    defect = defect or DefectMap.none()
    grid = defect.phase_grid(halfwidth, dimensionality)
    L = halfwidth
    n = 2 * L + 1
    U = np.zeros((dim_total, dim_total), dtype=np.complex128)
    if dimensionality == 1:
        for x in range(-L, L + 1):
            cmat = fld.at(x)
            phase = 1.0 if grid is None else grid[x + L]
            col0 = (x + L) * 2
            for cp in range(2):
                xp = _wrap(x + (1 - 2 * cp), L)
                row0 = (xp + L) * 2
                for c in range(2):
                    U[row0 + cp, col0 + c] = phase * cmat[cp, c]
        return U
    for x in range(-L, L + 1):
        for y in range(-L, L + 1):
            cmat = fld.at((x, y))
            phase = 1.0 if grid is None else grid[x + L, y + L]
            col0 = ((x + L) * n + (y + L)) * 4
            for kp in range(4):
                cp, dp = kp >> 1, kp & 1
                xp = _wrap(x + (1 - 2 * cp), L)
                yp = _wrap(y + (1 - 2 * dp), L)
                row0 = ((xp + L) * n + (yp + L)) * 4
                for k in range(4):
                    U[row0 + kp, col0 + k] = phase * cmat[kp, k]
    return U


def _wrap(v: int, halfwidth: int) -> int:
    n = 2 * halfwidth + 1
    return (v + halfwidth) % n - halfwidth
