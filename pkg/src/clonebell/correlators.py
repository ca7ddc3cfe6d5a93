"""Measurement directions and correlation functions.

Two independent routes are provided: :func:`correlation_oracle` traces a
materialized density matrix against a tensor product of spin observables,
and :func:`correlation_closed_form` evaluates the analytic expression for
the noisy clone family without building any matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .qstate import DensityMatrix, NoisyCloneSpec

IMAG_TOL = 1e-10
_TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Direction:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not (0.0 <= self.phi < _TWO_PI):
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")

    @classmethod
    def from_angles(cls, theta: float, phi: float = 0.0) -> Direction:
        """Build a direction from unrestricted spherical angles.

        Negative or oversized polar angles are folded back into ``[0, pi]``
        (``theta -> -theta`` is the same axis as azimuth ``phi + pi``).
        """
        theta = math.remainder(theta, _TWO_PI)  # now in [-pi, pi]
        if theta < 0:
            theta = -theta
            phi += math.pi
        phi = math.fmod(phi, _TWO_PI)
        if phi < 0:
            phi += _TWO_PI
        if phi >= _TWO_PI:
            phi = 0.0
        return cls(min(theta, math.pi), phi)

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


class _NoMeasurement:
    """Party is left unmeasured; the identity stands in for its observable."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NO_MEASUREMENT"

    def __reduce__(self):
        return (_NoMeasurement, ())


NO_MEASUREMENT = _NoMeasurement()

PartyChoice = Union[Direction, _NoMeasurement]


class SettingTable:
    """Per-party measurement choices keyed by setting label.

    ``choices[k][label]`` is the :data:`PartyChoice` of party ``k + 1``.
    Labels for a party must form a contiguous run of integers; label 0, when
    present, is reserved for :data:`NO_MEASUREMENT`.
    """

    def __init__(self, choices: Sequence[dict[int, PartyChoice]]):
        parties = []
        for k, entry in enumerate(choices):
            entry = dict(entry)
            if not entry:
                raise ValueError(f"party {k + 1} has no setting choices")
            labels = sorted(entry)
            if labels != list(range(labels[0], labels[0] + len(labels))):
                raise ValueError(f"party {k + 1} labels {labels} are not contiguous")
            for label, choice in entry.items():
                if not isinstance(choice, (Direction, _NoMeasurement)):
                    raise TypeError(f"party {k + 1} label {label}: not a PartyChoice: {choice!r}")
                if label == 0 and choice is not NO_MEASUREMENT:
                    raise ValueError(f"party {k + 1}: label 0 is reserved for no measurement")
            parties.append(entry)
        if not parties:
            raise ValueError("a setting table needs at least one party")
        self._parties = tuple(parties)

    @property
    def n(self) -> int:
        return len(self._parties)

    def labels(self, party: int) -> list[int]:
        """Sorted labels of 0-based ``party``."""
        return sorted(self._parties[party])

    def choice(self, party: int, label: int) -> PartyChoice:
        try:
            return self._parties[party][label]
        except KeyError:
            raise KeyError(f"party {party + 1} has no setting label {label}") from None

    def select(self, labels: Sequence[int]) -> list[PartyChoice]:
        if len(labels) != self.n:
            raise ValueError(f"expected {self.n} labels, got {len(labels)}")
        return [self.choice(k, lab) for k, lab in enumerate(labels)]

    def to_dict(self) -> list[dict[str, object]]:
        out = []
        for entry in self._parties:
            out.append({
                str(label): None if c is NO_MEASUREMENT else {"theta": c.theta, "phi": c.phi}
                for label, c in sorted(entry.items())
            })
        return out

    def __eq__(self, other):
        return isinstance(other, SettingTable) and self._parties == other._parties

    def __repr__(self):
        return f"SettingTable({list(self._parties)!r})"


def observable_from_direction(d: Direction) -> np.ndarray:
    """The spin observable ``n . sigma`` along ``d``."""
    ct, st = math.cos(d.theta), math.sin(d.theta)
    e = complex(math.cos(d.phi), math.sin(d.phi))
    return np.array([[ct, st * e.conjugate()], [st * e, -ct]], dtype=complex)


_IDENTITY = np.eye(2, dtype=complex)


def _local_operator(c: PartyChoice) -> np.ndarray:
    return _IDENTITY if c is NO_MEASUREMENT else observable_from_direction(c)


def correlation_oracle(d: DensityMatrix, choices: Sequence[PartyChoice]) -> float:
    """``Tr(rho . O_1 x O_2 x ... x O_n)`` with identities for unmeasured parties."""
    if len(choices) != d.n:
        raise ValueError(f"expected {d.n} party choices, got {len(choices)}")
    # contract one qubit axis at a time instead of building the full Kronecker product
    dim = d.dim
    t = d.entries.reshape((2,) * d.n + (dim,))
    for k, c in enumerate(choices):
        if c is NO_MEASUREMENT:
            continue
        t = np.moveaxis(np.tensordot(_local_operator(c), t, axes=([1], [k])), 0, k)
    value = np.trace(t.reshape(dim, dim))
    if abs(value.imag) > IMAG_TOL:
        raise ValueError(f"correlation has imaginary residue {value.imag:.3e}; input not Hermitian?")
    return float(value.real)


def correlation_closed_form(s: NoisyCloneSpec, choices: Sequence[PartyChoice]) -> float:
    """Analytic correlation for the noisy clone state.

    The state is diagonal on ``|0..0>``, ``|1..1>`` plus a single coherence
    between them, so only two structures contribute:

    * populations ``p0 = V cos^2(xi/2) + (1-V)/2`` and
      ``p1 = V sin^2(xi/2) + (1-V)/2`` weighting ``prod cos(theta)`` with sign
      ``(-1)^m`` on ``|1..1>`` (``m`` = measured parties);
    * when every party is measured, the coherence adds
      ``V sin(xi) prod sin(theta) cos(sum(phi) - phi_cat)``.

    For ``n == 1`` the white-noise input is used: ``V`` times the Bloch
    vector dotted with the direction.
    """
    if len(choices) != s.n:
        raise ValueError(f"expected {s.n} party choices, got {len(choices)}")
    V, xi = s.visibility, s.xi
    measured = [c for c in choices if c is not NO_MEASUREMENT]
    m = len(measured)
    if m == 0:
        return 1.0
    if s.n == 1:
        (c,) = measured
        return V * (math.cos(xi) * math.cos(c.theta)
                    + math.sin(xi) * math.sin(c.theta) * math.cos(c.phi - s.phi))
    prod_cos = math.prod(math.cos(c.theta) for c in measured)
    if m % 2 == 0:
        diag = prod_cos  # p0 + p1 = 1
    else:
        diag = V * math.cos(xi) * prod_cos  # p0 - p1
    if m < s.n:
        return diag
    prod_sin = math.prod(math.sin(c.theta) for c in measured)
    phase = sum(c.phi for c in measured) - s.phi
    return diag + V * math.sin(xi) * prod_sin * math.cos(phase)
