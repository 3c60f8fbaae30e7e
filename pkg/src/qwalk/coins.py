"""Coin operators: SU(2) constructors, tensor products, fractional swap,
and the three-swap composition of general two-coin unitaries.

All constructors return plain ``complex128`` ndarrays.  Coins are handled
as general unitaries (U(2)/U(4)) rather than strictly special-unitary:
the Hadamard coin has determinant -1 and a determinant phase is physically
a global phase anyway.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "UNITARY_TOL",
    "PAULI_X",
    "PAULI_Z",
    "IDENTITY2",
    "IDENTITY4",
    "SWAP",
    "hadamard",
    "su2_from_angles",
    "tensor",
    "fractional_swap",
    "su4_compose",
    "unitarity_check",
    "is_unitary",
    "random_su2",
    "CoinField",
]

UNITARY_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY2 = np.eye(2, dtype=np.complex128)
IDENTITY4 = np.eye(4, dtype=np.complex128)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


def hadamard() -> NDArray[np.complex128]:
    """The balanced coin (1/sqrt 2) [[1, 1], [1, -1]]."""
    return np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)


def su2_from_angles(theta: float, psi: float, phi: float) -> NDArray[np.complex128]:
    """SU(2) coin from three angles.

    Returns ``[[e^{-i phi} cos t, e^{i psi} sin t],
    [-e^{-i psi} sin t, e^{i phi} cos t]]`` which is unitary with
    determinant 1 for all real angles.  (The sign on the lower-left entry
    is required for unitarity; without it the matrix has determinant
    cos 2t.)
    """
    ct, st = np.cos(theta), np.sin(theta)
    return np.array(
        [
            [np.exp(-1j * phi) * ct, np.exp(1j * psi) * st],
            [-np.exp(-1j * psi) * st, np.exp(1j * phi) * ct],
        ],
        dtype=np.complex128,
    )


def tensor(a: NDArray[np.complex128], b: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Kronecker product of two 2x2 coins in the (c, d) order 00,01,10,11.

    The first factor steers the x coin bit, the second the y coin bit:
    ``tensor(a, b)[2i+j, 2k+l] = a[i, k] * b[j, l]``.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"tensor expects two 2x2 matrices, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def fractional_swap(tau: float) -> NDArray[np.complex128]:
    """The fractional swap gate, a one-parameter unitary group in tau.

    Identity at tau=0, the full swap at tau=1, sqrt-swap at tau=1/2.  The
    matrix is (1/2) [[2,0,0,0], [0, 1+w, 1-w, 0], [0, 1-w, 1+w, 0],
    [0,0,0,2]] with w = e^{i pi tau}; the principal branch makes the
    family continuous and satisfies
    ``fractional_swap(a) @ fractional_swap(b) == fractional_swap(a + b)``.
    Any real tau is accepted.
    """
    w = np.exp(1j * np.pi * tau)
    return 0.5 * np.array(
        [
            [2, 0, 0, 0],
            [0, 1 + w, 1 - w, 0],
            [0, 1 - w, 1 + w, 0],
            [0, 0, 0, 2],
        ],
        dtype=np.complex128,
    )


def su4_compose(
    u1: NDArray[np.complex128],
    u2: NDArray[np.complex128],
    v1: NDArray[np.complex128],
    v2: NDArray[np.complex128],
    alpha: float,
    beta: float,
    gamma: float,
) -> NDArray[np.complex128]:
    """Compose a 4x4 coin from single-qubit factors and three swap powers.

    Evaluates, in exactly this left-to-right order,

        (u1 (x) u2) [(Z (x) X) S^gamma (Z (x) 1) S^beta (1 (x) X) S^alpha] (v1 (x) v2)

    with S^t = ``fractional_swap(t)``.  The bracket is evaluated literally,
    with no algebraic simplification, so properties of specific parameter
    points can be observed rather than assumed.  With
    alpha = beta = gamma = 0 the bracket collapses to the identity and the
    result is the separable coin (u1 v1) (x) (u2 v2).

    Raises
    ------
    ValueError
        If any of u1, u2, v1, v2 is not unitary within 1e-12.
    """
    factors = {"u1": u1, "u2": u2, "v1": v1, "v2": v2}
    mats = {}
    for name, m in factors.items():
        m = np.asarray(m, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"{name} must be 2x2, got shape {m.shape}")
        if unitarity_check(m) > UNITARY_TOL:
            raise ValueError(f"{name} is not unitary within {UNITARY_TOL}")
        mats[name] = m
    bracket = (
        tensor(PAULI_Z, PAULI_X)
        @ fractional_swap(gamma)
        @ tensor(PAULI_Z, IDENTITY2)
        @ fractional_swap(beta)
        @ tensor(IDENTITY2, PAULI_X)
        @ fractional_swap(alpha)
    )
    return tensor(mats["u1"], mats["u2"]) @ bracket @ tensor(mats["v1"], mats["v2"])


def unitarity_check(matrix: NDArray[np.complex128]) -> float:
    """Max elementwise deviation of M M^dagger from the identity."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    eye = np.eye(m.shape[0])
    return float(np.abs(m @ m.conj().T - eye).max())


def is_unitary(matrix: NDArray[np.complex128], tol: float = UNITARY_TOL) -> bool:
    return unitarity_check(matrix) <= tol


def random_su2(rng: np.random.Generator) -> NDArray[np.complex128]:
    """Haar-random 2x2 special unitary.

    QR of a complex Ginibre matrix with the R diagonal phase-fixed gives a
    Haar unitary; dividing out the determinant phase lands it in SU(2).
    """
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    q = q * np.exp(-1j * np.angle(np.diag(r)))[None, :]
    det = np.linalg.det(q)
    return q * det ** (-0.5)


class CoinField:
    """Position-dependent coin assignment over the lattice.

    Either uniform (one matrix everywhere) or a per-site table with a
    default.  1D fields hold 2x2 coins keyed by ``x``; 2D fields hold 4x4
    coins keyed by ``(x, y)``.  Every entry is validated unitary.
    """

    def __init__(
        self,
        dimensionality: int,
        default: NDArray[np.complex128],
        table: Mapping[int | tuple[int, int], NDArray[np.complex128]] | None = None,
    ):
        if dimensionality not in (1, 2):
            raise ValueError(f"dimensionality must be 1 or 2, got {dimensionality!r}")
        k = 2 if dimensionality == 1 else 4
        self.dimensionality = dimensionality
        self.default = _validated_coin(default, k, "default coin")
        self.table: dict[int | tuple[int, int], NDArray[np.complex128]] = {}
        for pos, mat in (table or {}).items():
            self.table[pos] = _validated_coin(mat, k, f"coin at {pos}")

    @classmethod
    def uniform(cls, dimensionality: int, coin: NDArray[np.complex128]) -> "CoinField":
        return cls(dimensionality, coin)

    @property
    def is_uniform(self) -> bool:
        return not self.table

    def at(self, position: int | tuple[int, int]) -> NDArray[np.complex128]:
        return self.table.get(position, self.default)

    def stacked(self, halfwidth: int) -> NDArray[np.complex128]:
        """Dense per-site array of coins: (n, 2, 2) in 1D, (n, n, 4, 4) in 2D."""
        L = halfwidth
        n = 2 * L + 1
        if self.dimensionality == 1:
            out = np.broadcast_to(self.default, (n, 2, 2)).copy()
            for pos, mat in self.table.items():
                out[int(pos) + L] = mat  # type: ignore[call-overload]
            return out
        out = np.broadcast_to(self.default, (n, n, 4, 4)).copy()
        for pos, mat in self.table.items():
            x, y = pos  # type: ignore[misc]
            out[x + L, y + L] = mat
        return out


def _validated_coin(mat: NDArray[np.complex128], k: int, what: str) -> NDArray[np.complex128]:
    m = np.asarray(mat, dtype=np.complex128)
    if m.shape != (k, k):
        raise ValueError(f"{what} must be {k}x{k}, got shape {m.shape}")
    if unitarity_check(m) > UNITARY_TOL:
        raise ValueError(f"{what} is not unitary within {UNITARY_TOL}")
    return m


def as_coin_field(
    coin: NDArray[np.complex128] | CoinField, dimensionality: int
) -> CoinField:
    """Accept a bare matrix (treated as uniform) or a CoinField."""
    if isinstance(coin, CoinField):
        if coin.dimensionality != dimensionality:
            raise ValueError(
                f"coin field is {coin.dimensionality}D but the walk is "
                f"{dimensionality}D"
            )
        return coin
    return CoinField.uniform(dimensionality, np.asarray(coin, dtype=np.complex128))
