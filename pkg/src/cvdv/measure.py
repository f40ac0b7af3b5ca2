"""Measurement circuits and tomography: Wigner/characteristic/Husimi maps,
parity and photon-number readout, digital homodyne, calibration fringes, and
the tomography sample-budget estimate."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, Simulator
from .errors import BadArgument, CutoffMismatch, CutoffTooSmall, DimMismatch, LinearizationInvalid
from .fock import (
    ModeConfig,
    OperatorMatrix,
    QuantumState,
    Register,
    StateKind,
    apply_matrix,
    coherent_amplitudes,
    expectation,
    momentum_op,
    number_op,
    partial_trace,
    basis_state,
)
from .gates import displacement


# ---------------------------------------------------------------------------
# Phase-space functions
# ---------------------------------------------------------------------------

@dataclass
class WignerGrid:
    """Wigner samples on a rectangular grid of displacement amplitudes."""

    beta_re: np.ndarray
    beta_im: np.ndarray
    values: np.ndarray
    convention: str = "wigner-units"

    def integral(self) -> float:
        """Grid-quadrature of the quasi-probability over the sampled window."""
        dx = self.beta_re[1] - self.beta_re[0] if len(self.beta_re) > 1 else 1.0
        dy = self.beta_im[1] - self.beta_im[0] if len(self.beta_im) > 1 else 1.0
        return float(self.values.sum() * dx * dy)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["beta_re", "beta_im", "W"])
        for i, x in enumerate(self.beta_re):
            for j, y in enumerate(self.beta_im):
                w.writerow([f"{x:.12g}", f"{y:.12g}", f"{self.values[i, j]:.12g}"])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "convention": self.convention,
            "beta_re": [float(v) for v in self.beta_re],
            "beta_im": [float(v) for v in self.beta_im],
            "values": [[float(v) for v in row] for row in self.values],
        })


class _DisplacedParityEngine:
    """Shared machinery: D(-beta)|psi> in O(d^2) per point via p-quadrature."""

    def __init__(self, cfg: ModeConfig):
        self.cfg = cfg
        p = momentum_op(cfg).matrix
        w, v = np.linalg.eigh(p)
        self.pw, self.pv = w, v
        self.parity = (-1.0) ** np.arange(cfg.dim)
        self.ns = np.arange(cfg.dim)

    def displace_neg(self, vec: np.ndarray, beta: complex) -> np.ndarray:
        """D(-beta) |vec> using D(b) = R(-arg b) D(|b|) R(arg b)."""
        if beta == 0:
            return vec
        mag, ang = abs(beta), np.angle(beta)
        out = np.exp(-1j * self.ns * ang) * vec          # R(arg)
        out = self.pv.conj().T @ out
        out = np.exp(+1j * (mag / self.cfg.lam) * self.pw) * out   # D(-|b|)
        out = self.pv @ out
        return np.exp(+1j * self.ns * ang) * out         # R(-arg)


def _single_mode_amplitudes(state: QuantumState, mode: int):
    reg = state.register
    cfg = reg.mode(mode)
    if state.kind == StateKind.PURE and len(reg) == 1:
        return cfg, state.data, None
    if state.kind == StateKind.PURE:
        # reduced density of the mode unless the state factorizes
        rho = partial_trace(state, (mode,))
        return cfg, None, rho
    return cfg, None, partial_trace(state, (mode,))


def wigner_point(state: QuantumState, beta: complex, mode: int = 0,
                 engine: _DisplacedParityEngine | None = None) -> float:
    """W(beta) = (2/pi) Tr[rho D†(-beta) Pi D(-beta)] (displaced parity)."""
    cfg, vec, rho = _single_mode_amplitudes(state, mode)
    eng = engine or _DisplacedParityEngine(cfg)
    if vec is not None:
        phi = eng.displace_neg(vec, beta)
        return float(2.0 / math.pi * (eng.parity * np.abs(phi) ** 2).sum())
    d = displacement(-beta, cfg, method="exact")
    m = d.conj().T @ np.diag(eng.parity) @ d
    return float(np.real(np.trace(m @ rho)) * 2.0 / math.pi)


def wigner(state: QuantumState, beta_re, beta_im, mode: int = 0) -> WignerGrid:
    """Sample the Wigner function on a grid by displaced-parity evaluation."""
    cfg, vec, rho = _single_mode_amplitudes(state, mode)
    eng = _DisplacedParityEngine(cfg)
    beta_re = np.asarray(beta_re, dtype=float)
    beta_im = np.asarray(beta_im, dtype=float)
    vals = np.empty((len(beta_re), len(beta_im)))
    if vec is not None:
        for i, x in enumerate(beta_re):
            for j, y in enumerate(beta_im):
                phi = eng.displace_neg(vec, x + 1j * y)
                vals[i, j] = 2.0 / math.pi * float((eng.parity * np.abs(phi) ** 2).sum())
    else:
        w, v = np.linalg.eigh(rho)
        keep = w > 1e-12
        w, v = w[keep], v[:, keep]
        for i, x in enumerate(beta_re):
            for j, y in enumerate(beta_im):
                acc = 0.0
                for k in range(len(w)):
                    phi = eng.displace_neg(v[:, k], x + 1j * y)
                    acc += w[k] * float((eng.parity * np.abs(phi) ** 2).sum())
                vals[i, j] = 2.0 / math.pi * acc
    return WignerGrid(beta_re, beta_im, vals)


def characteristic(state: QuantumState, alpha: complex, ordering: str = "sym",
                   mode: int = 0) -> complex:
    """Characteristic function Tr[rho D(alpha)] and its normal/antinormal kin."""
    cfg, vec, rho = _single_mode_amplitudes(state, mode)
    d = displacement(alpha, cfg)
    if vec is not None:
        val = complex(np.vdot(vec, d @ vec))
    else:
        val = complex(np.trace(rho @ d))
    if ordering == "sym":
        return val
    if ordering == "normal":
        return val * math.exp(+0.5 * abs(alpha) ** 2)
    if ordering == "antinormal":
        return val * math.exp(-0.5 * abs(alpha) ** 2)
    raise BadArgument(f"unknown ordering {ordering!r}")


def husimi(state: QuantumState, beta: complex, mode: int = 0) -> float:
    """Q(beta) = <beta| rho |beta> / pi."""
    cfg, vec, rho = _single_mode_amplitudes(state, mode)
    coh = coherent_amplitudes(beta, cfg.dim)
    if vec is not None:
        return float(abs(np.vdot(coh, vec)) ** 2 / math.pi)
    return float(np.real(np.vdot(coh, rho @ coh)) / math.pi)


# ---------------------------------------------------------------------------
# Parity and photon-number readout
# ---------------------------------------------------------------------------

def parity_circuit(reg: Register, qubit: int = 0, mode: int = 1) -> Circuit:
    """Phase-kickback parity readout: Ry(pi/2), CR(pi), Ry(-pi/2), measure Z."""
    c = Circuit(reg)
    c.gate("Rphi", (math.pi / 2, math.pi / 2), (qubit,))
    c.gate("CP", (), (qubit, mode))
    c.gate("Rphi", (-math.pi / 2, math.pi / 2), (qubit,))
    c.measure(qubit, "z")
    return c


def parity_expectation(state: QuantumState, qubit: int = 0, mode: int = 1) -> float:
    """Dense ancilla <Z> of the parity circuit; equals <Pi> of the mode."""
    reg = state.register
    circ = parity_circuit(reg, qubit, mode)
    vec = state.data
    for spec in circ.gate_specs:
        from .gates import build

        vec = apply_matrix(reg, vec, build(spec, reg).matrix, spec.targets)
    probs = np.abs(vec.reshape(reg.dims)) ** 2
    marg = np.moveaxis(probs, qubit, 0).reshape(2, -1).sum(axis=1)
    return float(marg[0] - marg[1])


@dataclass
class ShotRecord:
    bits: list
    seed: int | None
    decoded: int | None = None
    posterior: QuantumState | None = None


def _walsh_bit_vector(bit: int, dim: int) -> np.ndarray:
    """c[n] = bit ``bit`` of n, as a 0/1 vector of length dim."""
    return ((np.arange(dim) >> bit) & 1).astype(float)


def photon_number_msb(state: QuantumState, n_bits: int, seed: int | None = None,
                      qubit: int = 0, mode: int = 1) -> ShotRecord:
    """Binary-search photon number readout, most significant bit first.

    One ancilla, never reset: round j applies a qubit flip conditioned on bit
    j of the photon number; XOR of successive outcomes decodes the bits.
    """
    reg = state.register
    cfg = reg.mode(mode)
    if 2 ** n_bits < cfg.dim:
        raise CutoffTooSmall(f"{n_bits} bits cannot index 0..{cfg.cutoff}")
    sim = Simulator(seed)
    circ = Circuit(reg)
    from .gates import GateSpec

    for j in range(n_bits - 1, -1, -1):
        thetas = math.pi * _walsh_bit_vector(j, cfg.dim)
        circ.append(GateSpec("SQR", tuple(thetas) + (0.0,) * cfg.dim, (qubit, mode)))
        circ.measure(qubit, "z")
    res = sim.run(circ, initial=state)
    a = [res.bits[k] for k in sorted(res.bits)]            # a[0] = MSB round
    b = [a[0]]
    for k in range(1, n_bits):
        b.append(a[k] ^ a[k - 1])
    n = 0
    for k, bit in enumerate(b):
        n = (n << 1) | bit
    return ShotRecord(bits=a, seed=seed, decoded=n, posterior=res.state)


def photon_number_lsb(state: QuantumState, n_bits: int, seed: int | None = None,
                      qubit: int = 0, mode: int = 1) -> ShotRecord:
    """Feedforward phase-estimation readout, least significant bit first.

    Round k: Ry(pi/2), CR(pi/2^k), bit-conditioned Rz corrections from all
    earlier rounds, Ry(-pi/2), measure, reset.
    """
    reg = state.register
    cfg = reg.mode(mode)
    if 2 ** n_bits < cfg.dim:
        raise CutoffTooSmall(f"{n_bits} bits cannot index 0..{cfg.cutoff}")
    from .gates import GateSpec

    circ = Circuit(reg)
    bit_ids = []
    for k in range(n_bits):
        circ.gate("Rphi", (math.pi / 2, math.pi / 2), (qubit,))
        circ.gate("CR", (math.pi / 2 ** k,), (qubit, mode))
        for j, bj in enumerate(bit_ids):
            corr = GateSpec("Rz", (-math.pi * 2 ** j / 2 ** k,), (qubit,))
            circ.branch(bj, if_one=(corr,))
        circ.gate("Rphi", (-math.pi / 2, math.pi / 2), (qubit,))
        bit_ids.append(circ.measure(qubit, "z"))
        circ.reset(qubit)
    sim = Simulator(seed)
    res = sim.run(circ, initial=state)
    bits = [res.bits[b] for b in bit_ids]
    n = sum(bit << k for k, bit in enumerate(bits))
    return ShotRecord(bits=bits, seed=seed, decoded=n, posterior=res.state)


def born_distribution(state: QuantumState, mode: int) -> np.ndarray:
    """Dense photon-number distribution of one mode."""
    reg = state.register
    probs = np.abs(state.data.reshape(reg.dims)) ** 2 if state.kind == StateKind.PURE \
        else np.abs(np.diagonal(state.data)).reshape(reg.dims)
    return np.moveaxis(probs, mode, 0).reshape(reg.dims[mode], -1).sum(axis=1)


# ---------------------------------------------------------------------------
# Digital homodyne, hopping, fringes
# ---------------------------------------------------------------------------

def digital_homodyne(state: QuantumState, k: float, shots: int = 0,
                     seed: int | None = None, qubit: int = 0, mode: int = 1):
    """One-bit estimate of <sin(2 k x / lam)> via CD(ik) on a |+> ancilla.

    In Wigner units the estimated observable is sin(4 k x).  Returns a dict
    with the dense expectation, the shot estimate (if shots > 0), and the
    linearized <x> estimate.
    """
    reg = state.register
    cfg = reg.mode(mode)
    from .fock import position_op

    x = position_op(cfg)
    xext = math.sqrt(abs(expectation(OperatorMatrix(x.matrix @ x.matrix, (mode,), True),
                                     state, (mode,))))
    if k * xext >= 0.2:
        warnings.warn(f"k*extent = {k * xext:.3f} >= 0.2", LinearizationInvalid, stacklevel=2)
    c = 2.0 * k / cfg.lam                 # sin(c x); c = 4k in Wigner units
    vec = state.data
    # prepare |+> on the ancilla, apply CD(ik), measure sigma_y
    h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    vec = apply_matrix(reg, vec, h, (qubit,))
    from .gates import cd_gate

    vec = apply_matrix(reg, vec, cd_gate(1j * k, cfg), (qubit, mode))
    from .fock import SIGMA_Y

    dense = -float(np.real(np.vdot(vec, apply_matrix(reg, vec, SIGMA_Y, (qubit,)))))
    out = {"sin_expectation": dense, "x_linearized": dense / c, "seed": seed}
    if shots:
        rng = np.random.Generator(np.random.Philox(seed))
        # measure sigma_y: rotate y -> z then sample
        rot = np.array([[1, -1j], [1, 1j]], dtype=complex) / math.sqrt(2)
        v2 = apply_matrix(reg, vec, rot, (qubit,))
        probs = np.abs(v2.reshape(reg.dims)) ** 2
        p_plus = float(np.moveaxis(probs, qubit, 0).reshape(2, -1).sum(axis=1)[0])
        outcomes = rng.random(shots) < p_plus
        est = -float((2.0 * outcomes.mean() - 1.0))
        out["sin_estimate"] = est
        out["x_estimate"] = est / c
        out["record"] = ShotRecord(bits=[int(o) for o in outcomes], seed=seed)
    return out


def hopping_measure(state: QuantumState, i: int, j: int) -> float:
    """<a_i† a_j + a_i a_j†> via beam-splitter conjugation + number difference."""
    reg = state.register
    cfg_i, cfg_j = reg.mode(i), reg.mode(j)
    if cfg_i.dim != cfg_j.dim:
        raise CutoffMismatch("hopping_measure needs equal cutoffs")
    from .gates import beam_splitter

    # T = BS (n_i - n_j) BS†, so rotate the state by BS†(pi/2, -pi/2)
    bs_dag = beam_splitter(-math.pi / 2, -math.pi / 2, cfg_i, cfg_j)
    vec = apply_matrix(reg, state.data, bs_dag, (i, j))
    rotated = QuantumState(reg, vec / np.linalg.norm(vec))
    ni = expectation(number_op(cfg_i), rotated, (i,)).real
    nj = expectation(number_op(cfg_j), rotated, (j,)).real
    return float(ni - nj)


def berry_fringes(alphas, cfg: ModeConfig):
    """<Z>(alpha) of the displacement-loop calibration circuit; equals cos(4 a^2)."""
    from .gates import conditional_displacement, displacement as disp

    out = []
    reg = Register(["qubit", cfg])
    h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    for alpha in alphas:
        vec = basis_state(reg, (0, 0)).data
        vec = apply_matrix(reg, vec, h, (0,))
        vec = apply_matrix(reg, vec, conditional_displacement(-alpha, alpha, cfg), (0, 1))
        vec = apply_matrix(reg, vec, disp(1j * alpha, cfg), (1,))
        vec = apply_matrix(reg, vec, conditional_displacement(alpha, -alpha, cfg), (0, 1))
        vec = apply_matrix(reg, vec, disp(-1j * alpha, cfg), (1,))
        vec = apply_matrix(reg, vec, h, (0,))
        probs = np.abs(vec.reshape(reg.dims)) ** 2
        marg = probs.sum(axis=1)
        out.append(float(marg[0] - marg[1]))
    return np.asarray(out)


_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def conditional_wigner(state: QuantumState, pauli_string: str, beta_re, beta_im,
                       mode: int | None = None) -> WignerGrid:
    """W(beta | P) = Tr[(O(beta) x P) rho] for a qubit Pauli string P."""
    reg = state.register
    qubits = reg.qubit_indices
    if len(pauli_string) != len(qubits):
        raise DimMismatch("one Pauli per qubit required")
    if mode is None:
        mode = reg.mode_indices[0]
    cfg = reg.mode(mode)
    eng = _DisplacedParityEngine(cfg)
    beta_re = np.asarray(beta_re, dtype=float)
    beta_im = np.asarray(beta_im, dtype=float)
    vec = state.data
    for q, label in zip(qubits, pauli_string.upper()):
        if label != "I":
            vec = apply_matrix(reg, vec, _PAULI[label], (q,))
    # now need Tr[(O x I) |psi><chi|] with chi = P psi: displaced parity of the
    # mode on the cross matrix; evaluate via per-point displacement of both.
    vals = np.empty((len(beta_re), len(beta_im)))
    psi = state.data.reshape(reg.dims)
    chi = vec.reshape(reg.dims)
    psi_m = np.moveaxis(psi, mode, 0).reshape(cfg.dim, -1)
    chi_m = np.moveaxis(chi, mode, 0).reshape(cfg.dim, -1)
    for i, x in enumerate(beta_re):
        for j, y in enumerate(beta_im):
            beta = x + 1j * y
            dpsi = np.empty_like(psi_m)
            dchi = np.empty_like(chi_m)
            for col in range(psi_m.shape[1]):
                dpsi[:, col] = eng.displace_neg(psi_m[:, col], beta)
                dchi[:, col] = eng.displace_neg(chi_m[:, col], beta)
            vals[i, j] = 2.0 / math.pi * float(
                np.real(np.sum(dpsi.conj() * (eng.parity[:, None] * dchi))))
    return WignerGrid(beta_re, beta_im, vals, convention="conditional")


def sample_budget(a_area: float, gamma: float, sigma2_max: float, eps: float,
                  delta: float, n_qubits: int) -> int:
    """Tomography sample count 4^n A^3 Gamma^2 sigma^2 log(1/delta) / eps^4."""
    for name, v in (("A", a_area), ("Gamma", gamma), ("sigma2", sigma2_max),
                    ("eps", eps), ("delta", delta)):
        if v <= 0:
            raise BadArgument(f"{name} must be positive")
    if n_qubits < 0:
        raise BadArgument("n_qubits must be nonnegative")
    n = (4.0 ** n_qubits) * a_area ** 3 * gamma ** 2 * sigma2_max \
        * math.log(1.0 / delta) / eps ** 4
    return int(math.ceil(n))
