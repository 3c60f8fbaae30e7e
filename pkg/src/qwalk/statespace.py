"""Walker state space: basis labels, dense amplitude storage, index packing.

Conventions, frozen here and relied on by the matrix builders and tests:

* Lattice sites run ``x = -L..L`` per axis for halfwidth ``L``.  The
  amplitude array axes are ``(x, coin)`` in 1D and ``(x, y, coin)`` in 2D,
  positions before coin.
* The 2D coin pair ``(c, d)`` is flattened to ``k = 2*c + d``, ordered
  ``00, 01, 10, 11`` (first bit steers x, second steers y).
* Packed indices are the C-order flattening of those axes:
  ``pack(x, c) = (x + L)*2 + c`` and
  ``pack(x, y, c, d) = ((x + L)*(2L+1) + (y + L))*4 + 2*c + d``.

State dimensions are ``2*(2L+1)`` in 1D and ``4*(2L+1)**2`` in 2D.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "NORM_TOL",
    "BasisLabel1D",
    "BasisLabel2D",
    "WalkerState",
    "state_dimension",
    "localized_state",
    "symmetric_coin",
    "as_coin_state",
    "pack_index",
    "unpack_index",
]

# Unit-norm tolerance: double precision leaves this much headroom over
# 10..1000 unitary steps.
NORM_TOL = 1e-12


def _check_coin_bit(name: str, value: int) -> None:
    if value not in (0, 1):
        raise ValueError(f"coin bit {name} must be 0 or 1, got {value!r}")


@dataclass(frozen=True)
class BasisLabel1D:
    """Basis label |x, c> for the 1D walk: lattice site x and coin bit c."""

    x: int
    c: int

    def __post_init__(self) -> None:
        _check_coin_bit("c", self.c)


@dataclass(frozen=True)
class BasisLabel2D:
    """Basis label |x, y, c, d> for the 2D walk."""

    x: int
    y: int
    c: int
    d: int

    def __post_init__(self) -> None:
        _check_coin_bit("c", self.c)
        _check_coin_bit("d", self.d)


def state_dimension(dimensionality: int, halfwidth: int) -> int:
    """Total Hilbert-space dimension: 2(2L+1) in 1D, 4(2L+1)^2 in 2D."""
    n = 2 * halfwidth + 1
    if dimensionality == 1:
        return 2 * n
    if dimensionality == 2:
        return 4 * n * n
    raise ValueError(f"dimensionality must be 1 or 2, got {dimensionality!r}")


@dataclass
class WalkerState:
    """Dense complex amplitude table over the (position x coin) basis.

    ``amplitudes`` has shape ``(2L+1, 2)`` in 1D and ``(2L+1, 2L+1, 4)``
    in 2D.  The flattened C-order view of the array is exactly the packed
    vector (see module docstring).  Instances constructed by the library
    are unit-norm; ``norm``/``renormalize`` exist for externally built or
    scaled tables.
    """

    dimensionality: int
    halfwidth: int
    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        if self.dimensionality not in (1, 2):
            raise ValueError(
                f"dimensionality must be 1 or 2, got {self.dimensionality!r}"
            )
        if self.halfwidth < 1:
            raise ValueError(f"halfwidth must be >= 1, got {self.halfwidth}")
        n = 2 * self.halfwidth + 1
        expected = (n, 2) if self.dimensionality == 1 else (n, n, 4)
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != expected:
            raise ValueError(
                f"amplitude table has shape {amps.shape}, expected {expected}"
            )
        self.amplitudes = amps

    @property
    def size(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        """Euclidean norm sqrt(sum |a|^2)."""
        return float(np.linalg.norm(self.amplitudes))

    def renormalize(self) -> "WalkerState":
        """Return a copy scaled to unit norm.

        Raises
        ------
        ValueError
            If the state has (numerically) zero norm.
        """
        n = self.norm()
        if n < 1e-300:
            raise ValueError("cannot renormalize a zero state")
        return WalkerState(self.dimensionality, self.halfwidth, self.amplitudes / n)

    def packed(self) -> NDArray[np.complex128]:
        """Amplitudes as a flat vector in packed-index order (a copy)."""
        return self.amplitudes.reshape(-1).copy()

    def copy(self) -> "WalkerState":
        return WalkerState(self.dimensionality, self.halfwidth, self.amplitudes.copy())


def as_coin_state(coin: Sequence[complex], dimensionality: int) -> NDArray[np.complex128]:
    """Validate a coin-state vector: length 2 (1D) or 4 (2D), unit norm."""
    vec = np.asarray(coin, dtype=np.complex128).reshape(-1)
    want = 2 if dimensionality == 1 else 4
    if vec.shape != (want,):
        raise ValueError(
            f"coin state must have {want} components for a "
            f"{dimensionality}D walk, got shape {vec.shape}"
        )
    if abs(np.linalg.norm(vec) - 1.0) > NORM_TOL:
        raise ValueError(f"coin state is not unit-norm: |coin| = {np.linalg.norm(vec)}")
    return vec


def symmetric_coin(dimensionality: int) -> NDArray[np.complex128]:
    """The balanced coin state (1, i)/sqrt(2), tensored with itself in 2D.

    Produces left/right (and up/down) symmetric distributions under the
    Hadamard coin.
    """
    s = np.array([1.0, 1.0j], dtype=np.complex128) / np.sqrt(2.0)
    if dimensionality == 1:
        return s
    if dimensionality == 2:
        return np.kron(s, s)
    raise ValueError(f"dimensionality must be 1 or 2, got {dimensionality!r}")


def localized_state(
    dimensionality: int,
    halfwidth: int,
    origin: int | tuple[int, int],
    coin: Sequence[complex],
) -> WalkerState:
    """Build a walker wholly localized at ``origin`` with the given coin state.

    Parameters
    ----------
    dimensionality : 1 or 2
    halfwidth : int
        Lattice halfwidth L >= 1; sites span -L..L per axis.
    origin : int or (int, int)
        Starting site; must lie within [-L, L] per axis.
    coin : sequence of complex
        Unit-norm coin vector (2 components in 1D, 4 in 2D).

    Returns
    -------
    WalkerState
        Unit-norm state with all amplitude at ``origin``.
    """
    if halfwidth < 1:
        raise ValueError(f"halfwidth must be >= 1, got {halfwidth}")
    vec = as_coin_state(coin, dimensionality)
    n = 2 * halfwidth + 1
    if dimensionality == 1:
        x = int(origin)  # type: ignore[arg-type]
        if abs(x) > halfwidth:
            raise IndexError(f"origin x={x} outside [-{halfwidth}, {halfwidth}]")
        amps = np.zeros((n, 2), dtype=np.complex128)
        amps[x + halfwidth, :] = vec
    else:
        x, y = origin  # type: ignore[misc]
        if abs(x) > halfwidth or abs(y) > halfwidth:
            raise IndexError(
                f"origin ({x}, {y}) outside [-{halfwidth}, {halfwidth}]^2"
            )
        amps = np.zeros((n, n, 4), dtype=np.complex128)
        amps[x + halfwidth, y + halfwidth, :] = vec
    return WalkerState(dimensionality, halfwidth, amps)


def pack_index(label: BasisLabel1D | BasisLabel2D, halfwidth: int) -> int:
    """Packed index of a basis label, position-major, coin-minor."""
    L = halfwidth
    n = 2 * L + 1
    if isinstance(label, BasisLabel1D):
        if abs(label.x) > L:
            raise IndexError(f"x={label.x} outside [-{L}, {L}]")
        return (label.x + L) * 2 + label.c
    if isinstance(label, BasisLabel2D):
        if abs(label.x) > L or abs(label.y) > L:
            raise IndexError(f"({label.x}, {label.y}) outside [-{L}, {L}]^2")
        return ((label.x + L) * n + (label.y + L)) * 4 + 2 * label.c + label.d
    raise TypeError(f"unsupported label type {type(label).__name__}")


def unpack_index(
    index: int, halfwidth: int, dimensionality: int
) -> BasisLabel1D | BasisLabel2D:
    """Inverse of :func:`pack_index` over the contiguous range 0..dim-1."""
    L = halfwidth
    n = 2 * L + 1
    dim = state_dimension(dimensionality, L)
    if not 0 <= index < dim:
        raise IndexError(f"packed index {index} outside 0..{dim - 1}")
    if dimensionality == 1:
        pos, c = divmod(index, 2)
        return BasisLabel1D(pos - L, c)
    pos, k = divmod(index, 4)
    xi, yi = divmod(pos, n)
    return BasisLabel2D(xi - L, yi - L, k >> 1, k & 1)
