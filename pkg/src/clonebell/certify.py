"""Violation certificates for the noisy cloned states.

Each party count gets a one-parameter family of measurement settings whose
Bell value has a closed form in the witness angle ``theta11``:

* ``n == 2``: CHSH with ``A1 = z``, ``A2`` in the x-y plane at the cat phase
  and ``B1, B2`` at polar angles ``+theta`` and ``-theta``;
* even ``n``: the product family, party 1 at ``(theta11, theta12)`` and every
  other party at the complementary angles;
* odd ``n``: the family whose last party is either unmeasured or measured
  along x.

The value exceeds 1 on an open interval of ``theta11`` whenever
``V sin(xi) > 0``; the interval endpoint is the threshold.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .bell import (
    ClosedFormEvaluator,
    InequalitySpec,
    chsh_spec,
    even_spec,
    odd_spec,
    quantum_value,
)
from .correlators import NO_MEASUREMENT, Direction, SettingTable
from .optim import coordinate_ascent, golden_section_max
from .qstate import CatParams, NoisyCloneSpec

CLASSICAL_BOUND = 1.0
VIOLATION_MARGIN = 1e-9
WITNESS_TOL = 1e-10
FORM_AGREEMENT_TOL = 1e-12


class InequalityKind(str, enum.Enum):
    CHSH = "CHSH"
    EVEN = "EvenN"
    ODD = "OddN"

    @classmethod
    def for_party_count(cls, n: int) -> InequalityKind:
        if n == 2:
            return cls.CHSH
        return cls.EVEN if n % 2 == 0 else cls.ODD


def _check_state_params(V: float, xi: float) -> None:
    if not (0.0 <= V <= 1.0):
        raise ValueError(f"visibility must lie in [0, 1], got {V}")
    if not (0.0 <= xi <= math.pi):
        raise ValueError(f"xi must lie in [0, pi], got {xi}")


def _check_even(n: int) -> None:
    if n < 2 or n % 2:
        raise ValueError(f"expected an even party count >= 2, got {n}")


def _check_odd(n: int) -> None:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"expected an odd party count >= 3, got {n}")


def _check_angle(theta: float, name: str = "theta11") -> None:
    if not (0.0 <= theta <= math.pi):
        raise ValueError(f"{name} must lie in [0, pi], got {theta}")


def is_degenerate(V: float, xi: float) -> bool:
    """Noise-only (``V == 0``) or separable (``xi`` in ``{0, pi}``) input."""
    return V == 0.0 or xi == 0.0 or xi == math.pi


def _signal(V: float, xi: float) -> float:
    # sin(pi) is 1.2e-16 in floating point; the separable endpoints are exact zeros
    return 0.0 if is_degenerate(V, xi) else V * math.sin(xi)


# -- CHSH -------------------------------------------------------------------

def chsh_settings(theta_b1: float, phi_cat: float = 0.0) -> SettingTable:
    return SettingTable([
        {1: Direction(0.0), 2: Direction(math.pi / 2, phi_cat)},
        {1: Direction.from_angles(theta_b1), 2: Direction.from_angles(-theta_b1)},
    ])


def chsh_value(V: float, xi: float, theta_b1: float) -> float:
    _check_state_params(V, xi)
    return math.cos(theta_b1) + _signal(V, xi) * math.sin(theta_b1)


def chsh_argmax(V: float, xi: float) -> float:
    _check_state_params(V, xi)
    return math.atan(_signal(V, xi))


def chsh_max(V: float, xi: float) -> float:
    _check_state_params(V, xi)
    return math.sqrt(1.0 + _signal(V, xi) ** 2)


def chsh_threshold(V: float, xi: float) -> float:
    """Upper end of the ``theta_B1`` interval ``(0, 2 arctan(V sin xi))`` of violation."""
    _check_state_params(V, xi)
    return 2.0 * math.atan(_signal(V, xi))


def grid_points(lo: float, hi: float, count: int) -> list[float]:
    """``count`` evenly spaced points; ``lo + (hi - lo) * i / (count - 1)`` keeps 0.7, pi/2 and pi exact."""
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def fig1_surface(n_xi: int = 101, n_v: int = 101) -> list[tuple[float, float, float]]:
    """Maximal CHSH value on a ``(xi, V)`` grid, ``xi`` outer.

    Each value is the CHSH expression evaluated at its optimal ``theta_B1``.
    """
    if n_xi < 2 or n_v < 2:
        raise ValueError("grid resolutions must be >= 2")
    rows = []
    for xi in grid_points(0.0, math.pi, n_xi):
        for V in grid_points(0.0, 1.0, n_v):
            rows.append((xi, V, chsh_value(V, xi, chsh_argmax(V, xi))))
    return rows


# -- even N -----------------------------------------------------------------

def theorem1_settings(n: int, theta11: float, theta12: float = math.pi,
                      phi_cat: float = 0.0) -> SettingTable:
    """Party 1 at ``(theta11, theta12)``, parties 2..n at the complementary angles.

    All azimuths are zero except party 1's, which absorb the cat phase so the
    coherence terms stay in phase.
    """
    _check_even(n)
    _check_angle(theta11)
    _check_angle(theta12, "theta12")
    first = {1: Direction(theta11, phi_cat), 2: Direction(theta12, phi_cat)}
    rest = {1: Direction(math.pi - theta11), 2: Direction(math.pi - theta12)}
    return SettingTable([first] + [dict(rest) for _ in range(n - 1)])


def theorem1_value(n: int, V: float, xi: float, theta11: float) -> float:
    """``1 + [V sin(xi) sin^n(t) - (1 - cos t)^n] / 2^(n-1)``.

    This is the expanded form, finite for every angle; the factored
    ``tan^n(t/2)`` form is :func:`theorem1_value_factored`.
    """
    _check_even(n)
    _check_state_params(V, xi)
    if not (0.0 <= theta11 < math.pi):
        raise ValueError(f"theta11 must lie in [0, pi), got {theta11}")
    a = _signal(V, xi)
    return 1.0 + (a * math.sin(theta11) ** n - (1.0 - math.cos(theta11)) ** n) / 2 ** (n - 1)


def theorem1_value_factored(n: int, V: float, xi: float, theta11: float) -> float:
    """``1 + V sin(xi) sin^n(t) / 2^(n-1) * (1 - tan^n(t/2) / (V sin xi))``; needs ``V sin xi > 0``."""
    a = _signal(V, xi)
    if a == 0.0:
        raise ZeroDivisionError("factored form is undefined for V sin(xi) = 0")
    return 1.0 + a * math.sin(theta11) ** n / 2 ** (n - 1) * (1.0 - math.tan(theta11 / 2) ** n / a)


def theorem1_threshold(n: int, V: float, xi: float) -> float:
    _check_even(n)
    _check_state_params(V, xi)
    a = _signal(V, xi)
    return 2.0 * math.atan(a ** (1.0 / n)) if a > 0 else 0.0


# -- odd N ------------------------------------------------------------------

def theorem2_settings(n: int, theta11: float, phi_cat: float = 0.0) -> SettingTable:
    _check_odd(n)
    _check_angle(theta11)
    parties = [{1: Direction(theta11, phi_cat), 2: Direction(0.0, phi_cat)}]
    parties += [{1: Direction(math.pi / 2), 2: Direction(math.pi)} for _ in range(n - 2)]
    parties.append({0: NO_MEASUREMENT, 1: Direction(math.pi / 2)})
    return SettingTable(parties)


def theorem2_value(n: int, V: float, xi: float, theta11: float) -> float:
    """``1 + (V sin(xi) sin t - cos t - 1) / 2^(n-1)``, checked against the phase-shifted form."""
    _check_odd(n)
    _check_state_params(V, xi)
    _check_angle(theta11)
    a = _signal(V, xi)
    scale = 2 ** (n - 1)
    direct = 1.0 + (a * math.sin(theta11) - math.cos(theta11) - 1.0) / scale
    delta = -math.atan2(1.0, a)
    shifted = 1.0 + (math.hypot(1.0, a) * math.sin(theta11 + delta) - 1.0) / scale
    if abs(direct - shifted) > FORM_AGREEMENT_TOL:
        raise ArithmeticError(f"odd-N forms disagree: {direct!r} vs {shifted!r}")
    return direct


def theorem2_threshold(n: int, V: float, xi: float) -> float:
    _check_odd(n)
    _check_state_params(V, xi)
    a = _signal(V, xi)
    return 2.0 * math.atan(1.0 / a) if a > 0 else math.pi


# -- certification ----------------------------------------------------------

@dataclass
class ViolationReport:
    n: int
    visibility: float
    xi: float
    kind: InequalityKind
    value: float
    witness_theta: float
    witness: SettingTable
    threshold: float
    phi_cat: float = 0.0
    classical_bound: float = CLASSICAL_BOUND
    violated: bool = field(init=False)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.violated = self.value > self.classical_bound + VIOLATION_MARGIN

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "visibility": self.visibility,
            "xi": self.xi,
            "phi_cat": self.phi_cat,
            "inequality_kind": self.kind.value,
            "value": self.value,
            "classical_bound": self.classical_bound,
            "violated": self.violated,
            "threshold": self.threshold,
            "witness_theta11": self.witness_theta,
            "witness": self.witness.to_dict(),
        }
        out.update(self.extra)
        return out


def family_spec(kind: InequalityKind, n: int) -> InequalitySpec:
    if kind is InequalityKind.CHSH:
        if n != 2:
            raise ValueError(f"CHSH is a two-party inequality, got n={n}")
        return chsh_spec()
    return even_spec(n) if kind is InequalityKind.EVEN else odd_spec(n)


def _family(kind: InequalityKind, n: int, V: float, xi: float, phi_cat: float = 0.0):
    """``(objective, interval, degenerate witness angle, settings builder, threshold)``."""
    if kind is InequalityKind.CHSH:
        thr = chsh_threshold(V, xi)
        return (lambda t: chsh_value(V, xi, t), (0.0, thr), 0.0,
                lambda t: chsh_settings(t, phi_cat), thr)
    if kind is InequalityKind.EVEN:
        thr = theorem1_threshold(n, V, xi)
        return (lambda t: theorem1_value(n, V, xi, t), (0.0, thr), 0.0,
                lambda t: theorem1_settings(n, t, phi_cat=phi_cat), thr)
    thr = theorem2_threshold(n, V, xi)
    return (lambda t: theorem2_value(n, V, xi, t), (thr, math.pi), math.pi,
            lambda t: theorem2_settings(n, t, phi_cat), thr)


def certify_no_cloning(n: int, V: float, xi: float, phi_cat: float = 0.0) -> ViolationReport:
    """Best witness angle within the one-parameter setting family for ``n`` parties.

    Degenerate inputs are physical and give a non-violating report. The cat
    phase only rotates the witness settings; the value does not depend on it.
    """
    if n < 2:
        raise ValueError(f"certification needs n >= 2, got {n}")
    _check_state_params(V, xi)
    CatParams(xi, phi_cat)
    kind = InequalityKind.for_party_count(n)
    objective, (lo, hi), fallback, settings, thr = _family(kind, n, V, xi, phi_cat)
    if is_degenerate(V, xi) or hi <= lo:
        theta, value = fallback, objective(fallback)
    else:
        res = golden_section_max(objective, lo, hi, tol=WITNESS_TOL)
        theta, value = res.x, res.value
    return ViolationReport(n, V, xi, kind, value, theta, settings(theta), thr, phi_cat=phi_cat)


@dataclass
class OptimizationOutcome:
    table: SettingTable
    value: float
    family_value: float
    family_theta: float
    iterations: int
    converged: bool
    restart: int


def optimize_violation(kind: InequalityKind | str, n: int, V: float, xi: float,
                       full: bool = False, restarts: int = 8, sweeps: int = 200,
                       seed: int = 42, phi_cat: float = 0.0) -> OptimizationOutcome:
    """Maximize the Bell value over measurement angles.

    The one-parameter family is optimized first. With ``full`` every polar
    and azimuthal angle of every measured setting is then optimized by
    coordinate ascent, restart 0 starting from the family optimum and the
    rest from seeded random angles. Best value wins; ties keep the earlier
    restart.
    """
    kind = InequalityKind(kind)
    _check_state_params(V, xi)
    if kind is InequalityKind.ODD:
        _check_odd(n)
    elif kind is InequalityKind.EVEN:
        _check_even(n)
    objective, (lo, hi), fallback, settings, _ = _family(kind, n, V, xi, phi_cat)
    if hi > lo:
        res = golden_section_max(objective, lo, hi, tol=WITNESS_TOL)
        fam_theta, fam_value, iters, conv = res.x, res.value, res.iterations, res.converged
    else:
        fam_theta, fam_value, iters, conv = fallback, objective(fallback), 0, True
    table = settings(fam_theta)
    if not full:
        return OptimizationOutcome(table, fam_value, fam_value, fam_theta, iters, conv, -1)

    spec = family_spec(kind, n)
    state = NoisyCloneSpec(n, CatParams(xi, phi_cat), V)
    evaluator = ClosedFormEvaluator(spec, state)
    k = len(evaluator.slots)
    start = np.empty(2 * k)
    for i, (party, label) in enumerate(evaluator.slots):
        d = table.choice(party, label)
        start[i], start[k + i] = d.theta, d.phi

    def f(x):
        return evaluator(x[:k], x[k:])

    bounds = [(0.0, math.pi)] * k + [(0.0, 2 * math.pi)] * k
    rng = np.random.default_rng(seed)
    best = None
    for r in range(max(1, restarts)):
        if r == 0:
            x0 = start
        else:
            x0 = np.concatenate([rng.uniform(0, math.pi, k), rng.uniform(0, 2 * math.pi, k)])
        res = coordinate_ascent(f, x0, bounds, sweeps=sweeps)
        if best is None or res.value > best[0].value:
            best = (res, r)
    res, r = best
    value = res.value
    out_table = evaluator.table(res.x[:k], res.x[k:])
    if fam_value > value:
        # coordinate ascent started from the family point, so this only guards rounding
        value, out_table, r = fam_value, table, -1
    return OptimizationOutcome(out_table, value, fam_value, fam_theta, res.iterations, res.converged, r)


def oracle_check(report: ViolationReport) -> float:
    """Re-evaluate a report's witness through the density-matrix oracle."""
    spec = family_spec(report.kind, report.n)
    state = NoisyCloneSpec(report.n, CatParams(report.xi, report.phi_cat), report.visibility)
    return quantum_value(spec, state, report.witness, use_oracle=True)
