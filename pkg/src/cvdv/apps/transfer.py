"""DV<->CV state transfer.

Method 1 (single-variable QSP): conditional displacements write the qubit
integer onto the oscillator position grid; per-qubit band-limited phase
profiles then rotate each qubit back to |0> conditioned on its position bit.

Method 2 (conditional-kick ladder): alternating position-conditioned qubit
rotations and qubit-conditioned displacements transfer between the qubits
and a sinc-like grid basis, quasi-deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import BadArgument, CutoffTooSmall, SqueezeInsufficient
from ..fock import ModeConfig, QuantumState, Register, apply_matrix, position_op
from ..gates import conditional_displacement, displacement, squeeze
from ..compiler.qsp import (
    complete_min_phase,
    phase_profile_coeffs,
    strip_phases,
)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass
class TransferResult:
    state: QuantumState
    fidelity: float
    target: np.ndarray


@lru_cache(maxsize=64)
def _flip_phases(depth: int, width: float):
    """QSP phases of the two constant-modulus profiles of the bit-flip gadget."""
    cq = phase_profile_coeffs(depth, width, sign=+1)
    ck = phase_profile_coeffs(depth, width, sign=-1)
    pq = tuple(strip_phases(cq, complete_min_phase(cq)))
    pk = tuple(strip_phases(ck, complete_min_phase(ck)))
    return pq, pk


def _qsp_diag_unitary(phases, kk, cc, cfg: ModeConfig, xeig) -> np.ndarray:
    """Wz sequence with signal exp(-i(kk x + cc)/2 sz) on (qubit, mode)."""
    w, v = xeig
    d = cfg.dim
    ph = np.exp(-1j * (kk * w + cc) / 2.0)
    wup = (v * ph) @ v.conj().T
    wdn = (v * ph.conj()) @ v.conj().T
    zero = np.zeros((d, d))
    wmat = np.block([[wup, zero], [zero, wdn]])

    def e_phi(p):
        c_, s_ = math.cos(p), math.sin(p)
        eye = np.eye(d)
        return np.block([[c_ * eye, 1j * s_ * eye], [1j * s_ * eye, c_ * eye]])

    u = e_phi(phases[0])
    for p in phases[1:]:
        u = u @ wmat @ e_phi(p)
    return u


def bit_flip_gadget(j: int, n: int, delta: float, cfg: ModeConfig, depth: int,
                    width: float, xeig=None) -> np.ndarray:
    """Unitary on (qubit, mode) flipping qubit j to |0> iff bit j of the
    oscillator grid position is set (j = 1 is the most significant bit)."""
    lam_ratio = cfg.lam / 0.5    # signals are expressed for x in Wigner scale
    if xeig is None:
        x = position_op(cfg).matrix
        xeig = np.linalg.eigh(x)
    pq, pk = _flip_phases(depth, width)
    kj = 2 * math.pi / (2 ** (n - j) * delta)
    cj = math.pi / 2 ** (n - j)
    d = cfg.dim
    uq = _qsp_diag_unitary(pq, kj / 2, cj / 2, cfg, xeig)
    uk = _qsp_diag_unitary(pk, kj / 2, cj / 2, cfg, xeig)
    hm = np.kron(HADAMARD, np.eye(d))
    c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)
    rx = np.kron(np.array([[c, -1j * s], [-1j * s, c]]), np.eye(d))
    return np.exp(1j * math.pi / 4) * uk @ rx @ hm @ uq @ hm


def grid_basis_state(x_index: int, delta: float, sigma: float, cfg: ModeConfig) -> np.ndarray:
    """Gaussian grid state of position-width sigma centered at x_index*delta."""
    lam = cfg.lam
    r = -0.5 * math.log(sigma ** 2 / lam ** 2)
    if math.sinh(r) ** 2 > 0.45 * cfg.cutoff:
        raise SqueezeInsufficient(f"width {sigma} not representable at cutoff {cfg.cutoff}")
    sq = squeeze(r, cfg) @ np.eye(cfg.dim)[:, 0]
    if x_index == 0:
        return sq
    return displacement(x_index * delta / (2 * lam), cfg) @ sq


def state_transfer_qsp(psi_qubits, delta: float = 1.0, sigma: float = math.pi / 16,
                       w: float = 0.2, depth: int = 60, cfg: ModeConfig | None = None
                       ) -> TransferResult:
    """Transfer an n-qubit state onto the oscillator grid basis.

    ``depth`` counts the signal applications of each disentangling sequence;
    ``w`` is the square-wave width parameter (the band-limited profile uses
    0.75 w as its transition half-width).  Returns the final joint state and
    its fidelity against the ideal grid-encoded target.
    """
    psi_qubits = np.asarray(psi_qubits, dtype=complex)
    n = int(round(math.log2(len(psi_qubits))))
    if 2 ** n != len(psi_qubits):
        raise BadArgument("qubit amplitudes must have length 2^n")
    if sigma / delta > 0.3:
        raise SqueezeInsufficient("need sigma/delta <= 0.3")
    if cfg is None:
        xmax = (2 ** n - 1) * delta
        lam = 0.5
        cutoff = int(math.ceil((xmax / (2 * lam)) ** 2 + 6 * xmax + 30))
        cfg = ModeConfig(cutoff)
    reg = Register(["qubit"] * n + [cfg])
    mode = n
    vec = np.kron(psi_qubits / np.linalg.norm(psi_qubits),
                  grid_basis_state(0, delta, sigma, cfg))
    lam = cfg.lam
    for j in range(1, n + 1):
        dc = conditional_displacement(0, (delta * 2 ** (n - j)) / (2 * lam), cfg)
        vec = apply_matrix(reg, vec, dc, (j - 1, mode))
    x = position_op(cfg).matrix
    xeig = np.linalg.eigh(x)
    for j in range(1, n + 1):
        gadget = bit_flip_gadget(j, n, delta, cfg, depth // 2, 0.75 * w, xeig)
        vec = apply_matrix(reg, vec, gadget, (j - 1, mode))
    target_mode = np.zeros(cfg.dim, dtype=complex)
    for xi in range(2 ** n):
        if abs(psi_qubits[xi]) > 0:
            target_mode += psi_qubits[xi] * grid_basis_state(xi, delta, sigma, cfg)
    target_mode /= np.linalg.norm(target_mode)
    qzero = np.zeros(2 ** n)
    qzero[0] = 1.0
    target = np.kron(qzero, target_mode)
    fid = float(abs(np.vdot(target, vec)) ** 2)
    return TransferResult(QuantumState(reg, vec / np.linalg.norm(vec)), fid, target)


def grid_overlap_matrix(n: int, delta: float, sigma: float, cfg: ModeConfig) -> np.ndarray:
    """Gram matrix of the grid basis; ideally exp(-delta^2 (x-y)^2 / 8 sigma^2)."""
    states = [grid_basis_state(i, delta, sigma, cfg) for i in range(2 ** n)]
    g = np.empty((2 ** n, 2 ** n), dtype=complex)
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            g[i, j] = np.vdot(a, b)
    return g


# ---------------------------------------------------------------------------
# Method 2: conditional-kick ladder over a sinc-like grid
# ---------------------------------------------------------------------------

def _vw_ops(j: int, n: int, lam_par: float, cfg: ModeConfig, xeig, peig):
    """(V_j, W_j) pair on (qubit, mode): position-conditioned qubit rotation
    and qubit-conditioned displacement."""
    d = cfg.dim
    xw, xv = xeig
    pw, pv = peig
    cv = math.pi / (2 ** (j + 1) * lam_par)
    # V_j = exp(i cv x sigma_y)
    up = (xv * np.exp(1j * cv * xw)) @ xv.conj().T
    dn = (xv * np.exp(-1j * cv * xw)) @ xv.conj().T
    vj = np.zeros((2 * d, 2 * d), dtype=complex)
    # sigma_y eigenbasis rotation
    t = np.array([[1, 1], [1j, -1j]], dtype=complex) / math.sqrt(2)  # cols: y eigvecs
    vj = np.kron(t, np.eye(d)) @ _blockdiag(up, dn) @ np.kron(t.conj().T, np.eye(d))
    sgn = 1.0 if j < n else -1.0
    # W_j displaces the position by -+ lam 2^{j-1}; exp(i c p) shifts x by
    # -2 c lam_u^2, so convert the target shift to the generator coefficient
    cw = sgn * lam_par * 2 ** (j - 1) / (2 * cfg.lam ** 2)
    # W_j = exp(i cw p sigma_x)
    upw = (pv * np.exp(1j * cw * pw)) @ pv.conj().T
    dnw = (pv * np.exp(-1j * cw * pw)) @ pv.conj().T
    tx = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    wj = np.kron(tx, np.eye(d)) @ _blockdiag(upw, dnw) @ np.kron(tx.conj().T, np.eye(d))
    return vj, wj


def _blockdiag(a, b):
    d = a.shape[0]
    out = np.zeros((2 * d, 2 * d), dtype=complex)
    out[:d, :d] = a
    out[d:, d:] = b
    return out


def phi_basis_state(s_bits, n: int) -> np.ndarray:
    """|phi_s> = (-1)^gamma_s  prod_j Z^{(1-s_j)/2} |+> for s in {+1,-1}^n."""
    s_bits = list(s_bits)
    vec = np.array([1.0], dtype=complex)
    for sj in s_bits:
        plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
        if sj < 0:
            plus = np.array([1, -1], dtype=complex) / math.sqrt(2)
        vec = np.kron(vec, plus)
    gamma = sum(0.5 * (s_bits[j] + s_bits[j + 1]) for j in range(n - 2)) if n > 2 else 0.0
    if n >= 2:
        gamma += 0.5 * (s_bits[n - 2] - s_bits[n - 1])
    return ((-1.0) ** gamma) * vec


def q_position(s_bits, lam_par: float, n: int) -> float:
    """Grid position of the sign string: sum_j s_j w_j - s_n w_n, w_j = lam 2^{j-1}."""
    q = 0.0
    for j in range(1, n):
        q += s_bits[j - 1] * lam_par * 2 ** (j - 1)
    q -= s_bits[n - 1] * lam_par * 2 ** (n - 1)
    return q


def sinc_surrogate(lam_par: float, cfg: ModeConfig, center: float = 0.0) -> np.ndarray:
    """Squeezed-vacuum stand-in for the sinc grid state of half-width 2 lam."""
    sigma = 0.62 * lam_par           # best Gaussian fit to the sinc main lobe
    lam = cfg.lam
    r = -0.5 * math.log(sigma ** 2 / lam ** 2)
    sq = squeeze(r, cfg) @ np.eye(cfg.dim)[:, 0]
    if center:
        sq = displacement(center / (2 * lam), cfg) @ sq
    return sq


def state_transfer_nonabelian(psi, lam_par: float, n: int,
                              cfg: ModeConfig | None = None,
                              direction: str = "dv2cv") -> TransferResult:
    """Conditional-kick ladder transfer.

    direction='dv2cv': ``psi`` holds 2^n computational-basis amplitudes over
    the grid index s; the oscillator starts in the sinc surrogate and ends in
    the corresponding grid superposition with the qubits at |0...0>.
    direction='cv2dv': ``psi`` is a mode vector; the qubits start at |0...0>
    and end holding the sampled wavefunction in the phi_s basis.
    """
    if cfg is None:
        reach = lam_par * (2 ** n - 1) + 4.0 / max(lam_par, 1e-6) * 0 + 6
        cutoff = int(math.ceil((lam_par * 2 ** (n - 1) + 3) ** 2 / (4 * 0.25) * 0.25
                               + (math.pi / (2 * lam_par)) ** 2 / 4 + 6 * reach + 40))
        cfg = ModeConfig(cutoff)
    reg = Register(["qubit"] * n + [cfg])
    mode = n
    d = cfg.dim
    xeig = np.linalg.eigh(position_op(cfg).matrix)
    from ..fock import momentum_op

    peig = np.linalg.eigh(momentum_op(cfg).matrix)
    pairs = [_vw_ops(j, n, lam_par, cfg, xeig, peig) for j in range(1, n + 1)]
    if direction == "cv2dv":
        psi_mode = np.asarray(psi, dtype=complex)
        if len(psi_mode) != d:
            raise BadArgument("cv2dv expects a mode vector matching the cutoff")
        qzero = np.zeros(2 ** n)
        qzero[0] = 1.0
        vec = np.kron(qzero, psi_mode / np.linalg.norm(psi_mode))
        # U† = V1 W1 V2 W2 ... Vn Wn, rightmost first
        for j in range(n, 0, -1):
            vj, wj = pairs[j - 1]
            vec = apply_matrix(reg, vec, wj, (j - 1, mode))
            vec = apply_matrix(reg, vec, vj, (j - 1, mode))
        # target: sum_s psi(q_s) |phi_s> (x) sinc0
        lamq = cfg.lam
        target_q = np.zeros(2 ** n, dtype=complex)
        xw, xv = xeig
        psi_x = xv.conj().T @ (psi_mode / np.linalg.norm(psi_mode))
        for idx in range(2 ** n):
            s_bits = [1 - 2 * ((idx >> (n - j)) & 1) for j in range(1, n + 1)]
            q_s = q_position(s_bits, lam_par, n)
            # sample psi at q_s by projecting on the narrow grid cell
            k = int(np.argmin(np.abs(xw - q_s)))
            amp = np.interp(q_s, xw, psi_x.real) + 1j * np.interp(q_s, xw, psi_x.imag)
            target_q += amp * phi_basis_state(s_bits, n)
        target_q /= np.linalg.norm(target_q)
        target = np.kron(target_q, sinc_surrogate(lam_par, cfg))
        fid = float(abs(np.vdot(target, vec)) ** 2)
        return TransferResult(QuantumState(reg, vec), fid, target)
    # dv2cv
    coeffs = np.asarray(psi, dtype=complex)
    if len(coeffs) != 2 ** n:
        raise BadArgument("dv2cv expects 2^n amplitudes")
    coeffs = coeffs / np.linalg.norm(coeffs)
    qubit_vec = np.zeros(2 ** n, dtype=complex)
    centers = []
    for idx in range(2 ** n):
        s_bits = [1 - 2 * ((idx >> (n - j)) & 1) for j in range(1, n + 1)]
        qubit_vec += coeffs[idx] * phi_basis_state(s_bits, n)
        centers.append(q_position(s_bits, lam_par, n))
    vec = np.kron(qubit_vec, sinc_surrogate(lam_par, cfg))
    # U = (U†)† = Wn† Vn† ... W1† V1†, rightmost first
    for j in range(1, n + 1):
        vj, wj = pairs[j - 1]
        vec = apply_matrix(reg, vec, vj.conj().T, (j - 1, mode))
        vec = apply_matrix(reg, vec, wj.conj().T, (j - 1, mode))
    target_mode = np.zeros(d, dtype=complex)
    for idx in range(2 ** n):
        if abs(coeffs[idx]) > 0:
            target_mode += coeffs[idx] * sinc_surrogate(lam_par, cfg, centers[idx])
    target_mode /= np.linalg.norm(target_mode)
    qzero = np.zeros(2 ** n)
    qzero[0] = 1.0
    target = np.kron(qzero, target_mode)
    fid = float(abs(np.vdot(target, vec)) ** 2)
    return TransferResult(QuantumState(reg, vec), fid, target)
