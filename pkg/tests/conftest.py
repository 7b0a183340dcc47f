import math

import numpy as np

from opmagic import Circuit, Gate, PauliString

SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

ONE_SITE_KINDS = ("H", "S", "Sdg", "X", "Y", "Z", "T", "Tdg", "RZ")
TWO_SITE_KINDS = ("CNOT", "CZ", "SWAP", "RZZ")


def dense_from_label(label: str) -> np.ndarray:
    """Independent dense Pauli builder working from the letter string alone."""
    out = np.ones((1, 1), dtype=complex)
    for ch in label:
        out = np.kron(out, SINGLE[ch])
    return out


def random_mixed_circuit(rng, n_qubits, n_gates, two_site_bias=0.4):
    """Seeded circuit drawing from every supported gate kind."""
    gates = []
    for _ in range(n_gates):
        if n_qubits >= 2 and rng.random() < two_site_bias:
            kind = TWO_SITE_KINDS[rng.integers(len(TWO_SITE_KINDS))]
            a, b = rng.choice(n_qubits, size=2, replace=False)
            theta = float(rng.uniform(0.0, 2.0 * math.pi)) if kind == "RZZ" else None
            gates.append(Gate(kind, (int(a), int(b)), theta))
        else:
            kind = ONE_SITE_KINDS[rng.integers(len(ONE_SITE_KINDS))]
            theta = float(rng.uniform(0.0, 2.0 * math.pi)) if kind == "RZ" else None
            gates.append(Gate(kind, (int(rng.integers(n_qubits)),), theta))
    return Circuit(n_qubits, tuple(gates))


def random_pauli(rng, n_qubits, nonidentity=True):
    dim = 1 << n_qubits
    while True:
        x = int(rng.integers(dim))
        z = int(rng.integers(dim))
        if not nonidentity or x or z:
            return PauliString(n_qubits, x, z)


def operator_from_spectrum(spectrum, n_qubits):
    """Sparse operator rebuilt from a dense coefficient vector."""
    from opmagic import SparseOperator, enumerate_paulis

    terms = {
        p: float(spectrum[k])
        for k, p in enumerate(enumerate_paulis(n_qubits))
        if abs(spectrum[k]) > 1e-12
    }
    return SparseOperator(n_qubits, terms)
