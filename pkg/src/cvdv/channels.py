"""Noise channels: amplitude damping Kraus maps, dephasing, Lindblad stepper."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadArgument, BadDistribution, NotHermitian, StepTooLarge
from .fock import ModeConfig, QuantumState, StateKind, ladder_ops, number_op


@dataclass
class KrausChannel:
    """List of Kraus operators with a trace-preservation certificate."""

    ops: list
    tp_residual: float = field(init=False)

    def __post_init__(self):
        self.ops = [np.asarray(k, dtype=complex) for k in self.ops]
        d = self.ops[0].shape[0]
        s = sum(k.conj().T @ k for k in self.ops)
        self.tp_residual = float(np.linalg.norm(s - np.eye(d), 2))

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho, dtype=complex)
        for k in self.ops:
            out += k @ rho @ k.conj().T
        return out

    def apply_state(self, state: QuantumState) -> QuantumState:
        rho = state.to_density()
        out = self.apply(rho.data)
        return QuantumState(rho.register, out / np.trace(out).real, StateKind.DENSITY)

    def choi(self) -> np.ndarray:
        """Unnormalized Choi matrix sum_k vec(K) vec(K)†; PSD iff the map is CP."""
        d = self.dim
        c = np.zeros((d * d, d * d), dtype=complex)
        for k in self.ops:
            v = k.reshape(-1)
            c += np.outer(v, v.conj())
        return c


def default_lmax(kappa_tau: float, tol: float = 1e-12) -> int:
    """Smallest l_max with neglected jump weight (kt)^{l+1}/(l+1)! < tol."""
    l = 0
    term = kappa_tau
    while term >= tol and l < 200:
        l += 1
        term = term * kappa_tau / (l + 1)
    return max(l, 1)


def amplitude_damping(kappa_tau: float, cfg: ModeConfig, l_max: int | None = None) -> KrausChannel:
    """Photon-loss channel for duration kappa*tau.

    K_l = sqrt((1-e^{-kt})^l / l!) e^{-kt n/2} a^l for l = 1..l_max, with the
    no-jump operator replaced by the fix-up K_0' = sqrt(I - sum K†K) so that
    the truncated set is trace preserving to machine precision.
    """
    if kappa_tau < 0:
        raise BadArgument("kappa*tau must be nonnegative")
    d = cfg.dim
    if kappa_tau == 0:
        return KrausChannel([np.eye(d, dtype=complex)])
    if l_max is None:
        l_max = default_lmax(kappa_tau)
    if l_max < 0:
        raise BadArgument("l_max must be nonnegative")
    a, _ = ladder_ops(cfg)
    decay = np.diag(np.exp(-0.5 * kappa_tau * np.arange(d)))
    loss = 1.0 - math.exp(-kappa_tau)
    ops = []
    apow = np.eye(d, dtype=complex)
    for l in range(1, l_max + 1):
        apow = apow @ a.matrix
        kl = math.sqrt(loss ** l / math.factorial(l)) * (decay @ apow)
        ops.append(kl)
    s = sum(k.conj().T @ k for k in ops)
    deficit = np.eye(d) - s
    # deficit is diagonal in the Fock basis: element-wise square root
    k0 = np.diag(np.sqrt(np.clip(np.diag(deficit).real, 0.0, None))).astype(complex)
    return KrausChannel([k0] + ops)


def dephasing(thetas, probs, cfg: ModeConfig) -> KrausChannel:
    """Discretized dephasing: rho -> sum_j p_j e^{i theta_j n} rho e^{-i theta_j n}."""
    thetas = np.asarray(thetas, dtype=float)
    probs = np.asarray(probs, dtype=float)
    if thetas.shape != probs.shape:
        raise BadDistribution("theta grid and probabilities must align")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-10:
        raise BadDistribution("probabilities must be nonnegative and sum to 1")
    n = np.arange(cfg.dim)
    ops = [math.sqrt(p) * np.diag(np.exp(1j * th * n)) for th, p in zip(thetas, probs) if p > 0]
    return KrausChannel(ops)


def gaussian_dephasing(width: float, cfg: ModeConfig, points: int = 64) -> KrausChannel:
    """Gaussian-distributed phase kicks of std ``width``, on a ``points`` grid."""
    thetas = np.linspace(-math.pi, math.pi, points, endpoint=False)
    p = np.exp(-0.5 * (thetas / width) ** 2)
    return dephasing(thetas, p / p.sum(), cfg)


def lindblad_step(rho: np.ndarray, h: np.ndarray | None, jumps, dt: float,
                  steps: int = 1) -> np.ndarray:
    """RK4 integration of drho/dt = -i[H,rho] + sum_j D(L_j) rho.

    ``jumps`` is a list of (rate, operator); the rate multiplies the
    dissipator of the bare operator (i.e. L = sqrt(rate) op).
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if h is None:
        h = np.zeros((d, d))
    h = np.asarray(h, dtype=complex)
    if np.linalg.norm(h - h.conj().T, 2) > 1e-10 * max(1.0, np.linalg.norm(h, 2)):
        raise NotHermitian("Hamiltonian must be Hermitian")
    ls = [math.sqrt(rate) * np.asarray(op, dtype=complex) for rate, op in jumps]
    max_rate = max((rate for rate, _ in jumps), default=0.0)
    if dt * max_rate > 0.05:
        raise StepTooLarge(f"dt*max_rate = {dt * max_rate:.3g} exceeds 0.05")
    lds = [(l, l.conj().T @ l) for l in ls]

    def rhs(r):
        out = -1j * (h @ r - r @ h)
        for l, ldl in lds:
            out += l @ r @ l.conj().T - 0.5 * (ldl @ r + r @ ldl)
        return out

    for _ in range(steps):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return rho


def thermal_jumps(kappa: float, nbar: float, cfg: ModeConfig, kappa_phi: float = 0.0):
    """Standard oscillator jump set: loss, thermal gain, pure dephasing."""
    a, adag = ladder_ops(cfg)
    jumps = [(kappa * (nbar + 1.0), a.matrix)]
    if nbar > 0:
        jumps.append((kappa * nbar, adag.matrix))
    if kappa_phi > 0:
        jumps.append((kappa_phi, number_op(cfg).matrix))
    return jumps
