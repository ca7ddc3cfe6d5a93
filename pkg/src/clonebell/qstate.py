"""Cat states, the cloning-map outputs and their noisy density matrices.

Basis convention: qubit 1 is the most significant bit, so ``|i1 i2 ... in>``
sits at integer index ``sum(i_k << (n - k))``.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10
NORM_TOL = 1e-12

DEFAULT_ORACLE_CAP = 10


class CapacityError(ValueError):
    """Raised when a dense matrix or enumeration would exceed the configured cap."""


def oracle_cap() -> int:
    """Largest party count for which dense matrices are materialized."""
    return int(os.environ.get("CLONEBELL_ORACLE_CAP", DEFAULT_ORACLE_CAP))


def _check_cap(n: int, cap: int | None) -> None:
    cap = oracle_cap() if cap is None else cap
    if n > cap:
        raise CapacityError(f"{n} qubits exceeds the dense-matrix cap of {cap}")


@dataclass(frozen=True)
class CatParams:
    xi: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.xi <= math.pi):
            raise ValueError(f"xi must lie in [0, pi], got {self.xi}")
        if not (0.0 <= self.phi < 2 * math.pi):
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if self.n < 1 or amps.shape != (2**self.n,):
            raise ValueError(f"expected {2 ** self.n} amplitudes for n={self.n}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state vector is not normalized (|psi|^2 = {norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def projector(self) -> DensityMatrix:
        return DensityMatrix(self.n, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Dense ``2^n x 2^n`` density matrix, validated on construction."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        dim = 2**self.n
        if rho.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {rho.shape}")
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (deviation {herm:.3e})")
        tr = np.trace(rho)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {tr}, expected 1")
        lam_min = float(np.linalg.eigvalsh(rho)[0])
        if lam_min < PSD_FLOOR:
            raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {lam_min:.3e})")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return 2**self.n


@dataclass(frozen=True)
class NoisyCloneSpec:
    """Structured description of the noisy clone state.

    ``n == 1`` is the white-noise input ``V|psi><psi| + (1 - V) I/2``; ``n >= 2``
    is the cloned GHZ-like state mixed with colored noise.
    """

    n: int
    cat: CatParams
    visibility: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"party count must be >= 1, got {self.n}")
        if not (0.0 <= self.visibility <= 1.0):
            raise ValueError(f"visibility must lie in [0, 1], got {self.visibility}")

    @property
    def xi(self) -> float:
        return self.cat.xi

    @property
    def phi(self) -> float:
        return self.cat.phi


def basis_index(bits) -> int:
    """Integer index of ``|b1 b2 ... bn>`` with qubit 1 most significant."""
    idx = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b}")
        idx = (idx << 1) | b
    return idx


def basis_bits(index: int, n: int) -> tuple[int, ...]:
    if not (0 <= index < 2**n):
        raise ValueError(f"index {index} out of range for {n} qubits")
    return tuple((index >> (n - 1 - k)) & 1 for k in range(n))


def make_cat_state(p: CatParams) -> StateVector:
    return StateVector(1, [math.cos(p.xi / 2), np.exp(1j * p.phi) * math.sin(p.xi / 2)])


def apply_clone_map(n: int, p: CatParams) -> StateVector:
    """Output of the 1 -> n copying map ``|0>|0..0> -> |0..0>``, ``|1>|0..0> -> |1..1>``."""
    if n < 2:
        raise ValueError(f"the cloning map needs n >= 2, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = math.cos(p.xi / 2)
    amps[-1] = np.exp(1j * p.phi) * math.sin(p.xi / 2)
    return StateVector(n, amps)


def colored_noise_density(n: int) -> DensityMatrix:
    if n < 2:
        raise ValueError(f"colored noise is defined for n >= 2, got {n}")
    _check_cap(n, None)
    rho = np.zeros((2**n, 2**n), dtype=complex)
    rho[0, 0] = rho[-1, -1] = 0.5
    return DensityMatrix(n, rho)


def materialize_density(s: NoisyCloneSpec, cap: int | None = None) -> DensityMatrix:
    _check_cap(s.n, cap)
    V = s.visibility
    if s.n == 1:
        pure = make_cat_state(s.cat).projector().entries
        return DensityMatrix(1, V * pure + (1 - V) / 2 * np.eye(2))
    pure = apply_clone_map(s.n, s.cat).projector().entries
    noise = np.zeros_like(pure)
    noise[0, 0] = noise[-1, -1] = 0.5
    return DensityMatrix(s.n, V * pure + (1 - V) * noise)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def bloch_vector(d: DensityMatrix) -> np.ndarray:
    if d.n != 1:
        raise ValueError(f"Bloch vectors are defined for one qubit, got n={d.n}")
    rho = d.entries
    return np.array([np.trace(rho @ P).real for P in (PAULI_X, PAULI_Y, PAULI_Z)])


def tensor_power(d: DensityMatrix, k: int, cap: int | None = None) -> DensityMatrix:
    if k < 1:
        raise ValueError(f"tensor power needs k >= 1, got {k}")
    _check_cap(d.n * k, cap)
    out = d.entries
    for _ in range(k - 1):
        out = np.kron(out, d.entries)
    return DensityMatrix(d.n * k, out)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    if a.entries.shape != b.entries.shape:
        raise ValueError(f"dimension mismatch: {a.entries.shape} vs {b.entries.shape}")
    # difference is Hermitian, so singular values are |eigenvalues|
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a.entries - b.entries))))
