"""Exact entangling-gate synthesis from conditional-displacement loops.

Closed qubit-conditioned loops in phase space imprint geometric phases
proportional to the enclosed (oriented) area, yielding Rz, RZZ, CNOT and
Toffoli circuits that restore the mediating oscillator exactly.
"""

from __future__ import annotations

import math

import numpy as np

from ..circuits import Circuit
from ..errors import BadArgument, TooManyQubits
from ..fock import Register
from ..gates import GateSpec


def _dc(alpha, beta, q, m):
    return GateSpec("Dc", (complex(alpha), complex(beta)), (q, m))


def _ry_conj(ops, q):
    """Wrap ops with R_y(+-pi/2) so Z-conditions become X-conditions."""
    pre = GateSpec("Rphi", (-math.pi / 2, math.pi / 2), (q,))
    post = GateSpec("Rphi", (math.pi / 2, math.pi / 2), (q,))
    return [pre] + list(ops) + [post]


def geometric_gate(kind: str, theta: float | None = None, register: Register | None = None,
                   qubits=None, mode: int | None = None) -> Circuit:
    """Circuit for Rz(theta), RZZ(theta), CNOT, or Toffoli via displacement loops.

    The register defaults to the minimal layout (target qubits followed by
    one mediating mode of cutoff 30).  Exact synthesis: the dense simulation
    equals the target on the qubit subspace with the oscillator returned to
    its initial state up to numerical tolerance.
    """
    from ..fock import ModeConfig

    kind = kind.lower()
    n_q = {"rz": 1, "rzz": 2, "cnot": 2, "toffoli": 3}.get(kind)
    if n_q is None:
        raise BadArgument(f"unknown geometric gate {kind!r}")
    if register is None:
        register = Register(["qubit"] * n_q + [ModeConfig(30)])
        qubits = tuple(range(n_q))
        mode = n_q
    qubits = tuple(qubits)
    circ = Circuit(register)
    if kind == "rz":
        if theta is None or theta < 0:
            raise BadArgument("Rz needs theta >= 0")
        alpha = math.sqrt(theta) / 2.0
        (q,) = qubits
        # U = D(-i a) Dc(a,-a) D(i a) Dc(-a,a), rightmost first
        circ.gate("Dc", (-alpha, alpha), (q, mode))
        circ.gate("D", (1j * alpha,), (mode,))
        circ.gate("Dc", (alpha, -alpha), (q, mode))
        circ.gate("D", (-1j * alpha,), (mode,))
        return circ
    if kind == "rzz":
        if theta is None or theta < 0:
            raise BadArgument("RZZ needs theta >= 0")
        alpha = math.sqrt(theta) / 2.0
        q1, q2 = qubits
        circ.append(_dc(-alpha, alpha, q1, mode))
        circ.append(_dc(1j * alpha, -1j * alpha, q2, mode))
        circ.append(_dc(alpha, -alpha, q1, mode))
        circ.append(_dc(-1j * alpha, 1j * alpha, q2, mode))
        return circ
    if kind == "cnot":
        q1, q2 = qubits
        beta = math.sqrt(math.pi / 2.0)
        circ.append(_dc(0, beta, q1, mode))
        for op in _ry_conj([_dc(0, 1j * beta, q2, mode)], q2):
            circ.append(op)
        circ.append(_dc(0, -beta, q1, mode))
        for op in _ry_conj([_dc(0, -1j * beta, q2, mode)], q2):
            circ.append(op)
        return circ
    # Toffoli
    q1, q2, q3 = qubits
    beta = math.sqrt(math.pi / 2.0)
    for op in _u12_ops(beta, q1, q2, mode):
        circ.append(op)
    for op in _ry_conj([_dc(0, 1j * beta, q3, mode)], q3):
        circ.append(op)
    for op in _dagger_ops(_u12_ops(beta, q1, q2, mode)):
        circ.append(op)
    for op in _ry_conj([_dc(0, -1j * beta, q3, mode)], q3):
        circ.append(op)
    return circ


def _u12_ops(alpha, q1, q2, mode):
    """U12(a) = Dc^{(q2)}(0, a/2) CP^{(q1)} Dc^{(q2)}(0, -i a/2) CP^{(q1)†}:
    displaces the mode by alpha only when both qubits are |1>."""
    return [
        GateSpec("CR", (-math.pi,), (q1, mode)),
        _dc(0, -1j * alpha / 2, q2, mode),
        GateSpec("CR", (math.pi,), (q1, mode)),
        _dc(0, alpha / 2, q2, mode),
    ]


def _dagger_ops(ops):
    out = []
    for spec in reversed(ops):
        if spec.name == "Dc":
            out.append(GateSpec("Dc", (-spec.params[0], -spec.params[1]), spec.targets))
        elif spec.name == "CR":
            out.append(GateSpec("CR", (-spec.params[0],), spec.targets))
        elif spec.name == "Rphi":
            out.append(GateSpec("Rphi", (-spec.params[0], spec.params[1]), spec.targets))
        elif spec.name == "D":
            out.append(GateSpec("D", (-spec.params[0],), spec.targets))
        else:
            raise BadArgument(f"no adjoint rule for {spec.name}")
    return out


def _axis_rotation_params(axis):
    """(theta, phi) of the equatorial Rphi rotation V with V sz V† = axis.sigma."""
    b = np.asarray(axis, dtype=float)
    b = b / np.linalg.norm(b)
    if abs(b[2] - 1.0) < 1e-12:
        return None
    if abs(b[2] + 1.0) < 1e-12:
        return (math.pi, 0.0)
    theta = math.acos(np.clip(b[2], -1, 1))
    # rotation axis = (z x b)/|z x b| = (-b_y, b_x, 0)/sin(theta)
    nx, ny = -b[1], b[0]
    phi = math.atan2(ny, nx)
    return (theta, phi)


def axis_conjugation(axis, q):
    """(pre_ops, post_ops) with post . CDz . pre realizing an axis-conditioned gate."""
    par = _axis_rotation_params(axis)
    if par is None:
        return [], []
    theta, phi = par
    pre = [GateSpec("Rphi", (-theta, phi), (q,))]
    post = [GateSpec("Rphi", (theta, phi), (q,))]
    return pre, post


def weighted_pauli_cd(alpha: complex, axes, register: Register | None = None,
                      qubits=None, mode: int | None = None) -> Circuit:
    """Displacement conditioned on a weight-m Pauli product.

    Realizes exp[(prod_j n_j.sigma_j)(alpha a† - alpha* a)] as
    U_seq† D(i^m alpha) U_seq with U_seq = prod_j exp(i pi (n_j.sigma_j) n/2),
    each factor an axis-conjugated CR(-pi).
    """
    from ..fock import ModeConfig

    axes = [np.asarray(a, dtype=float) for a in axes]
    m = len(axes)
    if m < 1 or m > 4:
        raise TooManyQubits("weighted_pauli_cd supports 1..4 qubits at desk scale")
    if register is None:
        register = Register(["qubit"] * m + [ModeConfig(30)])
        qubits = tuple(range(m))
        mode = m
    qubits = tuple(qubits)
    circ = Circuit(register)
    useq = []
    for q, axis in zip(qubits, axes):
        pre, post = axis_conjugation(axis, q)
        useq += pre + [GateSpec("CR", (-math.pi,), (q, mode))] + post
    for op in useq:
        circ.append(op)
    circ.gate("D", ((1j ** m) * complex(alpha),), (mode,))
    for op in _dagger_ops(useq):
        circ.append(op)
    return circ
