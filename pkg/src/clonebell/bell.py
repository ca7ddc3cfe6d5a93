"""Bell inequalities as dyadic coefficient tensors.

Classical bounds are established by brute force: every deterministic local
strategy (a +/-1 outcome per party and measured setting) is enumerated and
the inequality evaluated in exact integer arithmetic. For the product-form
families the algebraic argument is short (the symmetric sum factorizes into
``prod_k (X_k1 + X_k2) / 2^(n-1)``, which only takes the values -2, 0, 2, and
the subtracted term is tied to it), but enumeration is what the code trusts.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .correlators import (
    NO_MEASUREMENT,
    Direction,
    SettingTable,
    correlation_closed_form,
    correlation_oracle,
)
from .qstate import CapacityError, NoisyCloneSpec, materialize_density

STRATEGY_BITS_CAP = 26
_INT64_HEADROOM = 1 << 62


def _dyadic(x) -> Fraction:
    f = Fraction(x)
    den = f.denominator
    if den & (den - 1):
        raise ValueError(f"coefficient {x} is not a dyadic rational")
    return f


@dataclass(frozen=True)
class InequalitySpec:
    """``sum_t coefficients[t] * Q_t <= claimed_bound``.

    ``labels[k]`` lists the setting labels of party ``k + 1``; label 0 means
    the party is not measured and contributes the identity.
    """

    n: int
    labels: tuple[tuple[int, ...], ...]
    coefficients: Mapping[tuple[int, ...], Fraction]
    claimed_bound: Fraction
    name: str = "custom"

    def __post_init__(self):
        labels = tuple(tuple(sorted(set(ls))) for ls in self.labels)
        if len(labels) != self.n:
            raise ValueError(f"expected label sets for {self.n} parties, got {len(labels)}")
        if any(not ls for ls in labels):
            raise ValueError("every party needs at least one setting label")
        coeffs = {}
        for key, w in self.coefficients.items():
            key = tuple(key)
            if len(key) != self.n:
                raise ValueError(f"coefficient key {key} does not have arity {self.n}")
            for k, lab in enumerate(key):
                if lab not in labels[k]:
                    raise ValueError(f"coefficient key {key} uses undeclared label {lab} for party {k + 1}")
            w = _dyadic(w)
            if w:
                coeffs[key] = coeffs.get(key, Fraction(0)) + w
        coeffs = {k: w for k, w in coeffs.items() if w}
        if not coeffs:
            raise ValueError("inequality has no nonzero coefficient")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "coefficients", dict(sorted(coeffs.items())))
        object.__setattr__(self, "claimed_bound", _dyadic(self.claimed_bound))

    def coefficient(self, key) -> Fraction:
        return self.coefficients.get(tuple(key), Fraction(0))

    def measured_slots(self) -> list[tuple[int, int]]:
        """``(party, label)`` pairs that carry a strategy bit, in bit order."""
        return [(k, lab) for k in range(self.n) for lab in self.labels[k] if lab != 0]

    def strategy_bits(self) -> int:
        return len(self.measured_slots())

    def to_document(self) -> dict:
        terms = []
        for key, w in self.coefficients.items():
            p = w.denominator.bit_length() - 1
            terms.append({"idx": list(key), "num": w.numerator, "den_pow2": p})
        bound = self.claimed_bound
        return {
            "n": self.n,
            "labels": [list(ls) for ls in self.labels],
            "terms": terms,
            "bound": float(bound) if bound.denominator != 1 else int(bound),
        }

    @classmethod
    def from_document(cls, doc: Mapping, name: str = "custom") -> InequalitySpec:
        try:
            n = int(doc["n"])
            labels = [tuple(int(x) for x in ls) for ls in doc["labels"]]
            coeffs: dict[tuple[int, ...], Fraction] = {}
            for term in doc["terms"]:
                key = tuple(int(i) for i in term["idx"])
                w = Fraction(int(term["num"]), 2 ** int(term.get("den_pow2", 0)))
                coeffs[key] = coeffs.get(key, Fraction(0)) + w
            bound = Fraction(doc.get("bound", 1)).limit_denominator(1 << 52)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed inequality document: {exc}") from exc
        return cls(n, tuple(labels), coeffs, bound, name)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Predetermined +/-1 outcomes, ``values[k][label]``; label 0 is fixed to +1."""

    values: tuple[Mapping[int, int], ...]

    def __post_init__(self):
        for k, entry in enumerate(self.values):
            for lab, v in entry.items():
                if v not in (1, -1):
                    raise ValueError(f"party {k + 1} label {lab}: outcome must be +/-1, got {v}")
                if lab == 0 and v != 1:
                    raise ValueError(f"party {k + 1}: unmeasured label 0 must be +1")

    @property
    def n(self) -> int:
        return len(self.values)

    def outcome(self, party: int, label: int) -> int:
        return 1 if label == 0 else self.values[party][label]

    @classmethod
    def from_mask(cls, spec: InequalitySpec, mask: int) -> DeterministicStrategy:
        values: list[dict[int, int]] = [dict() for _ in range(spec.n)]
        for bit, (k, lab) in enumerate(spec.measured_slots()):
            values[k][lab] = -1 if (mask >> bit) & 1 else 1
        for k in range(spec.n):
            if 0 in spec.labels[k]:
                values[k][0] = 1
        return cls(tuple(values))

    def to_mask(self, spec: InequalitySpec) -> int:
        mask = 0
        for bit, (k, lab) in enumerate(spec.measured_slots()):
            if self.values[k][lab] == -1:
                mask |= 1 << bit
        return mask


def chsh_spec() -> InequalitySpec:
    h = Fraction(1, 2)
    coeffs = {(1, 1): h, (1, 2): h, (2, 1): h, (2, 2): -h}
    return InequalitySpec(2, ((1, 2), (1, 2)), coeffs, Fraction(1), "chsh")


def even_spec(n: int) -> InequalitySpec:
    """Symmetric sum over ``{1,2}^n`` weighted ``1/2^(n-1)`` minus ``Q_{2...2}``.

    :func:`product_family_spec` builds the same inequality for odd ``n``.
    """
    if n < 2 or n % 2:
        raise ValueError(f"even_spec needs an even n >= 2, got {n}")
    return product_family_spec(n)


def product_family_spec(n: int) -> InequalitySpec:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    w = Fraction(1, 2 ** (n - 1))
    coeffs = {key: w for key in itertools.product((1, 2), repeat=n)}
    coeffs[(2,) * n] -= 1
    kind = "even" if n % 2 == 0 else "product"
    return InequalitySpec(n, ((1, 2),) * n, coeffs, Fraction(1), kind)


def odd_spec(n: int) -> InequalitySpec:
    """Last party has labels ``{0, 1}`` (0 = unmeasured); ``-Q_{2...2 0}`` subtracted."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"odd_spec needs an odd n >= 3, got {n}")
    w = Fraction(1, 2 ** (n - 1))
    coeffs = {key + (last,): w
              for key in itertools.product((1, 2), repeat=n - 1) for last in (0, 1)}
    coeffs[(2,) * (n - 1) + (0,)] -= 1
    return InequalitySpec(n, ((1, 2),) * (n - 1) + ((0, 1),), coeffs, Fraction(1), "odd")


def _integer_form(spec: InequalitySpec):
    """Term bitmasks and integer weights over the common denominator ``2^p``."""
    slot_bit = {slot: b for b, slot in enumerate(spec.measured_slots())}
    denom = max(w.denominator for w in spec.coefficients.values())
    masks, weights = [], []
    for key, w in spec.coefficients.items():
        m = 0
        for k, lab in enumerate(key):
            if lab != 0:
                m |= 1 << slot_bit[(k, lab)]
        masks.append(m)
        weights.append(int(w * denom))
    return np.array(masks, dtype=np.int64), weights, denom


def lhv_value(spec: InequalitySpec, strat: DeterministicStrategy) -> Fraction:
    if strat.n != spec.n:
        raise ValueError(f"strategy has {strat.n} parties, inequality has {spec.n}")
    total = Fraction(0)
    for key, w in spec.coefficients.items():
        total += w * math.prod(strat.outcome(k, lab) for k, lab in enumerate(key))
    return total


@dataclass(frozen=True)
class LHVResult:
    value: Fraction
    strategy: DeterministicStrategy
    mask: int
    strategies: int
    backend: str


def lhv_max(spec: InequalitySpec, jobs: int = 1, cap_bits: int = STRATEGY_BITS_CAP,
            backend=None) -> LHVResult:
    """Exact maximum over all deterministic strategies.

    Masks are enumerated in ascending order and ties resolve to the lowest
    mask, so the result does not depend on how the range is split across
    ``jobs`` workers.
    """
    bits = spec.strategy_bits()
    if bits > cap_bits:
        raise CapacityError(f"{bits} strategy bits exceeds the enumeration cap of {cap_bits}")
    backend = backend or kernels.backend
    masks, weights, denom = _integer_form(spec)
    if sum(abs(w) for w in weights) >= _INT64_HEADROOM:
        return _lhv_max_bigint(spec, bits)
    weights = np.array(weights, dtype=np.int64)
    total = 1 << bits
    jobs = max(1, min(jobs, total))
    edges = [total * i // jobs for i in range(jobs + 1)]
    ranges = [(edges[i], edges[i + 1]) for i in range(jobs) if edges[i + 1] > edges[i]]
    if len(ranges) == 1:
        parts = [backend.lhv_max_range(masks, weights, *ranges[0])]
    else:
        with ThreadPoolExecutor(len(ranges)) as pool:
            parts = list(pool.map(lambda r: backend.lhv_max_range(masks, weights, *r), ranges))
    # ranges are ascending, so strict > keeps the lowest mask on ties
    best_val, best_mask = parts[0]
    for val, mask in parts[1:]:
        if val > best_val:
            best_val, best_mask = val, mask
    name = "cython" if backend is kernels.compiled else "numpy"
    return LHVResult(Fraction(int(best_val), denom), DeterministicStrategy.from_mask(spec, best_mask),
                     best_mask, total, name)


def _lhv_max_bigint(spec: InequalitySpec, bits: int) -> LHVResult:
    best = None
    for mask in range(1 << bits):
        val = lhv_value(spec, DeterministicStrategy.from_mask(spec, mask))
        if best is None or val > best[0]:
            best = (val, mask)
    return LHVResult(best[0], DeterministicStrategy.from_mask(spec, best[1]), best[1], 1 << bits, "python")


def quantum_value(spec: InequalitySpec, s: NoisyCloneSpec, table: SettingTable,
                  use_oracle: bool = False) -> float:
    if s.n != spec.n or table.n != spec.n:
        raise ValueError(f"party counts differ: inequality {spec.n}, state {s.n}, settings {table.n}")
    if use_oracle:
        rho = materialize_density(s)
        corr = lambda choices: correlation_oracle(rho, choices)  # noqa: E731
    else:
        corr = lambda choices: correlation_closed_form(s, choices)  # noqa: E731
    return math.fsum(float(w) * corr(table.select(key)) for key, w in spec.coefficients.items())


def coefficient_l1(spec: InequalitySpec) -> float:
    return float(sum(abs(w) for w in spec.coefficients.values()))


class ClosedFormEvaluator:
    """Vectorized closed-form value of ``spec`` as a function of slot angles.

    Angles are given per strategy slot (see :meth:`InequalitySpec.measured_slots`),
    which is what the angle optimizers iterate over. Matches
    :func:`quantum_value` with the closed-form path.
    """

    def __init__(self, spec: InequalitySpec, s: NoisyCloneSpec):
        if s.n != spec.n:
            raise ValueError(f"party counts differ: inequality {spec.n}, state {s.n}")
        if s.n < 2:
            raise ValueError("closed-form evaluator covers the cloned states, n >= 2")
        self.spec = spec
        self.state = s
        self.slots = spec.measured_slots()
        slot_index = {slot: i for i, slot in enumerate(self.slots)}
        keys = list(spec.coefficients)
        self.weights = np.array([float(spec.coefficients[k]) for k in keys])
        idx = np.full((len(keys), spec.n), -1, dtype=np.intp)
        for t, key in enumerate(keys):
            for k, lab in enumerate(key):
                if lab != 0:
                    idx[t, k] = slot_index[(k, lab)]
        self._idx = idx
        self._measured = idx >= 0
        self._m = self._measured.sum(axis=1)
        self._full = self._m == spec.n

    def __call__(self, theta, phi=None) -> float:
        theta = np.asarray(theta, dtype=float)
        phi = np.zeros_like(theta) if phi is None else np.asarray(phi, dtype=float)
        V, xi = self.state.visibility, self.state.xi
        safe = np.where(self._measured, self._idx, 0)
        cos_t = np.where(self._measured, np.cos(theta)[safe], 1.0).prod(axis=1)
        sin_t = np.where(self._measured, np.sin(theta)[safe], 1.0).prod(axis=1)
        phase = np.where(self._measured, phi[safe], 0.0).sum(axis=1) - self.state.phi
        diag = np.where(self._m % 2 == 0, cos_t, V * math.cos(xi) * cos_t)
        coh = np.where(self._full, V * math.sin(xi) * sin_t * np.cos(phase), 0.0)
        q = np.where(self._m == 0, 1.0, diag + coh)
        return float(np.dot(self.weights, q))

    def table(self, theta, phi=None) -> SettingTable:
        phi = np.zeros(len(self.slots)) if phi is None else phi
        parties: list[dict] = [dict() for _ in range(self.spec.n)]
        for (k, lab), t, p in zip(self.slots, theta, phi):
            parties[k][lab] = Direction.from_angles(float(t), float(p))
        for k in range(self.spec.n):
            if 0 in self.spec.labels[k]:
                parties[k][0] = NO_MEASUREMENT
        return SettingTable(parties)
