"""Stabilizer-entropy functionals of sparse Heisenberg operators.

The squared Pauli coefficients of a unit-weight Hermitian operator form a
probability vector; the operator stabilizer entropy at index alpha is its
Renyi entropy minus that of the unevolved seed. Base-2 logarithms
throughout. alpha = 0, 1, inf are taken as limits (rank, Shannon, min
entropy); non-integer alpha is accepted and uses |a_i|^(2 alpha), though
the monotone proofs cover integer alpha only.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .paulis import SparseOperator

_WEIGHT_TOL = 1e-8


def pauli_probs(operator: SparseOperator) -> np.ndarray:
    """Probability vector a_i^2 in canonical term order; requires unit weight."""
    weight = operator.l2_weight()
    if abs(weight - 1.0) >= _WEIGHT_TOL:
        raise ValueError(f"operator weight {weight} is not 1 within {_WEIGHT_TOL}")
    return np.array([a * a for _, a in operator.sorted_terms()], dtype=float)


def renyi_entropy(probs: np.ndarray, alpha: float) -> float:
    """Renyi-alpha entropy in bits of a probability vector."""
    p = np.asarray(probs, dtype=float)
    p = p[p > 0.0]
    if p.size == 0:
        raise ValueError("empty probability vector")
    if alpha == 0:
        return math.log2(p.size)
    if alpha == 1:
        return float(-np.sum(p * np.log2(p)))
    if math.isinf(alpha):
        return float(-np.log2(np.max(p)))
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    return float(np.log2(np.sum(p**alpha)) / (1.0 - alpha))


def purity(operator: SparseOperator, alpha: float) -> float:
    """Generalized Pauli purity sum_i a_i^(2 alpha); alpha <= 0 returns the rank."""
    if alpha <= 0:
        return float(len(operator))
    probs = pauli_probs(operator)
    if math.isinf(alpha):
        return float(np.max(probs))
    return float(np.sum(probs**alpha))


@dataclass(frozen=True)
class OseReport:
    """Operator stabilizer entropy of an evolved operator at one Renyi index."""

    alpha: float
    purity: float
    ose: float
    linear_ose: float
    rank: int
    support_size: int

    def to_json_dict(self) -> dict:
        d = asdict(self)
        if math.isinf(self.alpha):
            d["alpha"] = "inf"
        return d


def ose(evolved: SparseOperator, initial: SparseOperator, alpha: float) -> OseReport:
    """Renyi-alpha entropy of the evolved coefficients, offset by the seed's.

    For a Pauli seed the offset is zero and this is the entropy of the
    distribution {a_i^2}. Bounded by 2 N for any evolution.
    """
    if evolved.n_qubits != initial.n_qubits:
        raise ValueError("size mismatch")
    probs_evolved = pauli_probs(evolved)
    probs_initial = pauli_probs(initial)
    value = renyi_entropy(probs_evolved, alpha) - renyi_entropy(probs_initial, alpha)
    pur = purity(evolved, alpha)
    return OseReport(
        alpha=alpha,
        purity=pur,
        ose=value,
        linear_ose=1.0 - pur,
        rank=len(evolved),
        support_size=len(evolved.support()),
    )


def t_count_lower_bound(
    evolved: SparseOperator, initial: SparseOperator, alpha: float
) -> float:
    """Lower bound on the circuit's T-count: OSE minus the seed's rank entropy.

    A T gate at most doubles the rank while Cliffords preserve it, so the
    entropy gain over log2(rank(seed)) cannot exceed the T-count.
    """
    report = ose(evolved, initial, alpha)
    return report.ose - math.log2(len(initial))
