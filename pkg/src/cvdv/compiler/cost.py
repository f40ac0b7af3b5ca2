"""CNOT and qubit costs for simulating one displacement in a Fock-binary
all-qubit encoding (n-bit Fock register, m Newton iterations for the square
roots appearing in the ladder-operator action)."""

from __future__ import annotations

from ..errors import BadArgument


def fock_binary_cost(n: int, m: int) -> dict:
    """Two-qubit-gate and qubit counts for a Fock-binary displacement.

    cnot_total = (270m+126) n^2 + (144+228m) n - 12m - 22
    cnot_transfer = 46n - 22            (amplitude transfer, both directions)
    cnot_sqrt = (270m+126) n^2 + (228m+96) n - 12m
    qubits_sqrt = 2n(m+5); qubits_total = 2n(m+5) + 3n
    """
    if n < 1 or m < 1:
        raise BadArgument("need n >= 1 qubits and m >= 1 Newton iterations")
    cnot_transfer = 46 * n - 22
    cnot_sqrt = (270 * m + 126) * n * n + (228 * m + 96) * n - 12 * m
    cnot_total = (270 * m + 126) * n * n + (144 + 228 * m) * n - 12 * m - 22
    qubits_sqrt = 2 * n * (m + 5)
    return {
        "cnot_total": cnot_total,
        "cnot_transfer": cnot_transfer,
        "cnot_sqrt": cnot_sqrt,
        "qubits_sqrt": qubits_sqrt,
        "qubits_total": qubits_sqrt + 3 * n,
    }
