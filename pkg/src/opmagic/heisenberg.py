"""Exact Heisenberg conjugation of sparse operators and circuit builders.

Gates act on states in list order: for a circuit [g1, g2] the unitary is
U = g2 * g1. Evolving an operator computes U^dag O U, so gates are
conjugated in reverse list order.

Angle convention: RZ(theta) = exp(-i theta Z) and
RZZ(theta) = exp(-i theta Z x Z), so conjugation rotates coefficients by
2*theta and T == RZ(pi/8) exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .paulis import (
    PRUNE_TOL,
    PauliString,
    SparseOperator,
    commutes,
    pauli_mul,
)

CLIFFORD_KINDS = frozenset({"H", "S", "Sdg", "X", "Y", "Z", "CNOT", "CZ", "SWAP"})
ROTATION_KINDS = frozenset({"T", "Tdg", "RZ", "RZZ"})
GATE_KINDS = CLIFFORD_KINDS | ROTATION_KINDS
_TWO_SITE = frozenset({"CNOT", "CZ", "SWAP", "RZZ"})
_FIXED_ANGLE = {"T": math.pi / 8, "Tdg": -math.pi / 8}

# Heisenberg action g^dag P g of single-qubit Cliffords, indexed by the
# local letter code x + 2z (I, X, Z, Y) -> (x', z', sign).
_CLIFFORD_1Q = {
    "H": ((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)),
    "S": ((0, 0, 1), (1, 1, -1), (0, 1, 1), (1, 0, 1)),
    "Sdg": ((0, 0, 1), (1, 1, 1), (0, 1, 1), (1, 0, -1)),
    "X": ((0, 0, 1), (1, 0, 1), (0, 1, -1), (1, 1, -1)),
    "Y": ((0, 0, 1), (1, 0, -1), (0, 1, -1), (1, 1, 1)),
    "Z": ((0, 0, 1), (1, 0, -1), (0, 1, 1), (1, 1, -1)),
}


@dataclass(frozen=True, slots=True)
class Gate:
    """One gate: kind, site tuple, and an angle for RZ/RZZ only."""

    kind: str
    sites: tuple[int, ...]
    theta: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "sites", tuple(self.sites))
        want = 2 if self.kind in _TWO_SITE else 1
        if len(self.sites) != want:
            raise ValueError(f"{self.kind} takes {want} site(s), got {self.sites}")
        if len(set(self.sites)) != len(self.sites):
            raise ValueError("gate sites must be distinct")
        if any(s < 0 for s in self.sites):
            raise ValueError("site indices must be non-negative")
        if self.kind in ("RZ", "RZZ"):
            if self.theta is None:
                raise ValueError(f"{self.kind} needs an angle")
        elif self.theta is not None:
            raise ValueError(f"{self.kind} takes no angle")

    @property
    def angle(self) -> float:
        """Rotation angle, with T/Tdg pinned to +-pi/8."""
        if self.kind in _FIXED_ANGLE:
            return _FIXED_ANGLE[self.kind]
        if self.theta is None:
            raise ValueError(f"{self.kind} has no angle")
        return self.theta

    def to_json_dict(self) -> dict:
        d: dict = {"kind": self.kind, "sites": list(self.sites)}
        if self.theta is not None:
            d["theta"] = self.theta
        return d

    @classmethod
    def from_json_dict(cls, data: dict) -> "Gate":
        theta = data.get("theta")
        return cls(data["kind"], tuple(data["sites"]), None if theta is None else float(theta))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list; the first element acts first on states."""

    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        if self.n_qubits <= 0:
            raise ValueError("n_qubits must be positive")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(s >= self.n_qubits for s in g.sites):
                raise ValueError(f"gate {g} out of range for {self.n_qubits} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValueError("size mismatch")
        return Circuit(self.n_qubits, self.gates + other.gates)

    def to_json_dict(self) -> dict:
        return {"n": self.n_qubits, "gates": [g.to_json_dict() for g in self.gates]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Circuit":
        return cls(int(data["n"]), tuple(Gate.from_json_dict(g) for g in data["gates"]))

    def to_text(self) -> str:
        lines = [f"qubits {self.n_qubits}"]
        for g in self.gates:
            parts = [g.kind] + [str(s) for s in g.sites]
            if g.theta is not None:
                parts.append(repr(g.theta))
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        """Parse the line format: 'qubits N' then one gate per line, e.g. 'RZZ 0 1 pi/8'."""
        from .cli import parse_angle  # local import to keep cli optional

        n_qubits = None
        gates = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0].lower() == "qubits":
                n_qubits = int(parts[1])
                continue
            kind = parts[0]
            if kind not in GATE_KINDS:
                raise ValueError(f"unknown gate kind {kind!r} in line {raw!r}")
            n_sites = 2 if kind in _TWO_SITE else 1
            sites = tuple(int(p) for p in parts[1 : 1 + n_sites])
            rest = parts[1 + n_sites :]
            theta = parse_angle(rest[0]) if rest else None
            gates.append(Gate(kind, sites, theta))
        if n_qubits is None:
            top = max((max(g.sites) for g in gates), default=-1)
            n_qubits = top + 1
        return cls(n_qubits, tuple(gates))


def _swap_bits(mask: int, a: int, b: int) -> int:
    if ((mask >> a) ^ (mask >> b)) & 1:
        mask ^= (1 << a) | (1 << b)
    return mask


def _conjugate_clifford(p: PauliString, gate: Gate) -> tuple[PauliString, float]:
    """Term-by-term image (g^dag P g, sign) for a Clifford gate."""
    x, z = p.x_mask, p.z_mask
    kind = gate.kind
    if kind in _CLIFFORD_1Q:
        q = gate.sites[0]
        idx = ((x >> q) & 1) + 2 * ((z >> q) & 1)
        nx, nz, sign = _CLIFFORD_1Q[kind][idx]
        bit = 1 << q
        x = (x & ~bit) | (nx << q)
        z = (z & ~bit) | (nz << q)
        return PauliString(p.n_qubits, x, z), float(sign)
    if kind == "SWAP":
        a, b = gate.sites
        return PauliString(p.n_qubits, _swap_bits(x, a, b), _swap_bits(z, a, b)), 1.0
    if kind == "CNOT":
        c, t = gate.sites
        xc, zc = (x >> c) & 1, (z >> c) & 1
        xt, zt = (x >> t) & 1, (z >> t) & 1
        sign = -1.0 if (xc and zt and not (xt ^ zc)) else 1.0
        x = (x & ~(1 << t)) | ((xt ^ xc) << t)
        z = (z & ~(1 << c)) | ((zc ^ zt) << c)
        return PauliString(p.n_qubits, x, z), sign
    if kind == "CZ":
        a, b = gate.sites
        xa, za = (x >> a) & 1, (z >> a) & 1
        xb, zb = (x >> b) & 1, (z >> b) & 1
        sign = -1.0 if (xa and xb and (za ^ zb)) else 1.0
        z = (z & ~(1 << a)) | ((za ^ xb) << a)
        z = (z & ~(1 << b)) | ((zb ^ xa) << b)
        return PauliString(p.n_qubits, x, z), sign
    raise ValueError(f"not a Clifford kind: {kind}")


def _rotation_generator(gate: Gate, n_qubits: int) -> PauliString:
    z = 0
    for s in gate.sites:
        z |= 1 << s
    return PauliString(n_qubits, 0, z)


def conjugate_gate(
    operator: SparseOperator, gate: Gate, *, prune_tol: float = PRUNE_TOL
) -> SparseOperator:
    """Return g^dag . O . g with real coefficients; result is pruned.

    Clifford kinds permute and sign-flip strings one-for-one. A rotation
    exp(-i theta G) leaves commuting terms alone and maps an anticommuting
    term P to cos(2 theta) P + s sin(2 theta) R with (i^k, R) = G*P and
    s = Re(i * i^k), so coefficients stay real by construction. Terms are
    processed in canonical order, which makes the float merge deterministic.
    """
    n = operator.n_qubits
    if any(s >= n for s in gate.sites):
        raise ValueError(f"gate {gate} out of range for {n} qubits")
    out: dict[PauliString, float] = {}
    if gate.kind in CLIFFORD_KINDS:
        for p, a in operator.sorted_terms():
            q, sign = _conjugate_clifford(p, gate)
            out[q] = out.get(q, 0.0) + sign * a
        return SparseOperator(n, out, prune_tol=prune_tol)
    gen = _rotation_generator(gate, n)
    c2 = math.cos(2.0 * gate.angle)
    s2 = math.sin(2.0 * gate.angle)
    for p, a in operator.sorted_terms():
        if commutes(p, gen):
            out[p] = out.get(p, 0.0) + a
            continue
        phase, r = pauli_mul(gen, p)
        sign = (1j * phase).real  # +-1 since G and P anticommute
        out[p] = out.get(p, 0.0) + a * c2
        out[r] = out.get(r, 0.0) + a * s2 * sign
    return SparseOperator(n, out, prune_tol=prune_tol)


def evolve_heisenberg(
    operator: SparseOperator, circuit: Circuit, *, prune_tol: float = PRUNE_TOL
) -> SparseOperator:
    """U^dag O U for the full circuit: conjugate gates in reverse list order."""
    if operator.n_qubits != circuit.n_qubits:
        raise ValueError("size mismatch")
    for gate in reversed(circuit.gates):
        operator = conjugate_gate(operator, gate, prune_tol=prune_tol)
    return operator


def support(operator: SparseOperator) -> set[int]:
    """Union of non-identity sites over all terms."""
    return operator.support()


def brickwork_circuit(n_qubits: int, layers: int, brick: Sequence[Gate]) -> Circuit:
    """Alternating even/odd nearest-neighbour layers with open boundaries.

    Even layers couple (0,1),(2,3),...; odd layers (1,2),(3,4),....
    `brick` is a gate template on abstract sites {0, 1}, instantiated on
    each coupled pair.
    """
    if n_qubits % 2 != 0:
        raise ValueError("brickwork needs an even qubit count")
    if layers < 0:
        raise ValueError("layer count must be non-negative")
    brick = tuple(brick)
    for g in brick:
        if any(s > 1 for s in g.sites):
            raise ValueError("brick template gates must act on sites 0 and 1")
    gates: list[Gate] = []
    for layer in range(layers):
        start = layer % 2
        for left in range(start, n_qubits - 1, 2):
            for g in brick:
                gates.append(Gate(g.kind, tuple(left + s for s in g.sites), g.theta))
    return Circuit(n_qubits, tuple(gates))


def mixing_depth(n_qubits: int) -> int:
    """Default depth 3 n^2 for the {H, S, CNOT} mixing ensemble."""
    return 3 * n_qubits * n_qubits


def random_clifford_circuit(
    n_qubits: int, depth: int | None = None, seed: int = 0
) -> Circuit:
    """Seeded circuit of uniform {H, S, CNOT} gates on random sites.

    This is a mixing ensemble, not exact uniform tableau sampling; the
    default depth 3 n^2 is enough for the ensemble averages used here.
    """
    if depth is None:
        depth = mixing_depth(n_qubits)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    rng = np.random.default_rng(seed)
    kinds = ("H", "S", "CNOT") if n_qubits >= 2 else ("H", "S")
    gates = []
    for _ in range(depth):
        kind = kinds[rng.integers(len(kinds))]
        if kind == "CNOT":
            c, t = rng.choice(n_qubits, size=2, replace=False)
            gates.append(Gate("CNOT", (int(c), int(t))))
        else:
            gates.append(Gate(kind, (int(rng.integers(n_qubits)),)))
    return Circuit(n_qubits, tuple(gates))


def doped_circuit(
    n_qubits: int,
    tau: int,
    clifford_depth: int | None = None,
    seed: int = 0,
) -> Circuit:
    """Random Clifford blocks with one T gate between consecutive blocks.

    tau = 0 gives a single pure Clifford block.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    if clifford_depth is None:
        clifford_depth = mixing_depth(n_qubits)
    rng = np.random.default_rng(seed)
    block_seeds = rng.integers(0, 2**63 - 1, size=tau + 1)
    t_sites = rng.integers(0, n_qubits, size=tau) if tau else []
    gates: list[Gate] = []
    for k in range(tau):
        gates.extend(random_clifford_circuit(n_qubits, clifford_depth, int(block_seeds[k])).gates)
        gates.append(Gate("T", (int(t_sites[k]),)))
    gates.extend(random_clifford_circuit(n_qubits, clifford_depth, int(block_seeds[tau])).gates)
    return Circuit(n_qubits, tuple(gates))


def concat(circuits: Iterable[Circuit]) -> Circuit:
    """Concatenate circuits on the same register, in application order."""
    circuits = list(circuits)
    if not circuits:
        raise ValueError("nothing to concatenate")
    out = circuits[0]
    for c in circuits[1:]:
        out = out + c
    return out
