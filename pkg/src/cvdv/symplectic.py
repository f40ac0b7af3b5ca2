"""Gaussian fast path: affine symplectic maps, Bloch-Messiah, Fock bridge.

Internally everything is in standard units ([x,p] = i, vacuum covariance
I/2) with quadrature ordering (x1, p1, ..., xN, pN).  Mode-basis
(a1, a1†, ...) converters are provided and tested round-trip.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import (
    BadParamDomain,
    BasisMismatch,
    CutoffTooSmall,
    DimMismatch,
    NotSymmetric,
    NotSymplectic,
)
from .fock import ModeConfig, QuantumState, Register
from .gates import GateSpec, passive_fock_unitary, squeeze, displacement

SYMPLECTIC_TOL = 1e-9


def omega(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for (x1,p1,...,xN,pN) ordering."""
    w = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return scipy.linalg.block_diag(*([w] * n_modes))


class Basis(Enum):
    QUADRATURE = "quadrature"
    MODE = "mode"


@dataclass
class SymplecticTransform:
    """Affine phase-space map R -> delta + M R with M real symplectic."""

    delta: np.ndarray
    m: np.ndarray
    basis: Basis = Basis.QUADRATURE

    def __post_init__(self):
        self.delta = np.asarray(self.delta, dtype=complex if self.basis == Basis.MODE else float)
        self.m = np.asarray(self.m, dtype=complex if self.basis == Basis.MODE else float)
        if self.basis == Basis.QUADRATURE:
            n = self.m.shape[0] // 2
            if np.linalg.norm(self.m.T @ omega(n) @ self.m - omega(n), 2) > SYMPLECTIC_TOL * max(
                    1.0, np.linalg.norm(self.m, 2) ** 2):
                raise NotSymplectic("M^T Omega M != Omega within tolerance")

    @property
    def n_modes(self) -> int:
        return self.m.shape[0] // 2

    def to_mode(self) -> "SymplecticTransform":
        if self.basis == Basis.MODE:
            return self
        w = _quad_to_mode(self.n_modes)
        return SymplecticTransform(w @ self.delta.astype(complex),
                                   w @ self.m @ np.linalg.inv(w), Basis.MODE)

    def to_quadrature(self) -> "SymplecticTransform":
        if self.basis == Basis.QUADRATURE:
            return self
        w = _quad_to_mode(self.n_modes)
        winv = np.linalg.inv(w)
        m = winv @ self.m @ w
        d = winv @ self.delta
        return SymplecticTransform(np.real_if_close(d).real, np.real_if_close(m).real,
                                   Basis.QUADRATURE)


def identity_transform(n_modes: int, basis: Basis = Basis.QUADRATURE) -> SymplecticTransform:
    return SymplecticTransform(np.zeros(2 * n_modes), np.eye(2 * n_modes), basis)


def _quad_to_mode(n: int) -> np.ndarray:
    """(a, a†) = W (x, p) per mode, standard units a = (x + ip)/sqrt(2)."""
    blk = np.array([[1.0, 1j], [1.0, -1j]]) / math.sqrt(2.0)
    return scipy.linalg.block_diag(*([blk] * n)).astype(complex)


@dataclass
class GaussianState:
    """Gaussian state by first and second moments (standard units)."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float)
        self.cov = np.asarray(self.cov, dtype=float)
        n = len(self.mean) // 2
        if self.cov.shape != (2 * n, 2 * n):
            raise DimMismatch("covariance shape does not match mean")
        if np.linalg.norm(self.cov - self.cov.T, 2) > 1e-10:
            raise NotSymmetric("covariance must be symmetric")
        # uncertainty principle: cov + i Omega/2 >= 0
        evs = np.linalg.eigvalsh(self.cov.astype(complex) + 0.5j * omega(n))
        if evs.min() < -SYMPLECTIC_TOL:
            raise BadParamDomain(f"covariance violates uncertainty by {evs.min():.2e}")

    @property
    def n_modes(self) -> int:
        return len(self.mean) // 2


def vacuum_gaussian(n_modes: int) -> GaussianState:
    return GaussianState(np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes))


def propagate(t: SymplecticTransform, gs: GaussianState) -> GaussianState:
    t = t.to_quadrature()
    return GaussianState(t.delta + t.m @ gs.mean, t.m @ gs.cov @ t.m.T)


def gaussian_evolve(lam_vec, lam_mat, t: float) -> SymplecticTransform:
    """Transform generated by H = lam.R + (1/2) R.Lambda.R for time t.

    Case I (quadratic part zero): delta = Omega lam t, M = I.
    Case II (linear part zero):   M = exp(Omega Lambda t).
    Mixed case by completing the square; a singular Lambda falls back to the
    exact affine map of the blocked exponential.
    """
    lam_vec = np.asarray(lam_vec, dtype=float)
    lam_mat = np.asarray(lam_mat, dtype=float)
    n2 = len(lam_vec)
    w = omega(n2 // 2)
    if np.linalg.norm(lam_mat - lam_mat.T, 2) > 1e-10 * max(1.0, np.linalg.norm(lam_mat, 2)):
        raise NotSymmetric("Lambda must be symmetric")
    if not lam_mat.any():
        return SymplecticTransform(w @ lam_vec * t, np.eye(n2))
    m = scipy.linalg.expm(w @ lam_mat * t)
    if not lam_vec.any():
        return SymplecticTransform(np.zeros(n2), m)
    # affine part: R(t) = -Li lam + e^{W L t}(R + Li lam) when Lambda invertible;
    # in general integrate the constant drive through the homogeneous flow.
    try:
        li = np.linalg.solve(lam_mat, lam_vec)
        delta = (m - np.eye(n2)) @ li
        return SymplecticTransform(delta, m)
    except np.linalg.LinAlgError:
        blocked = np.zeros((n2 + 1, n2 + 1))
        blocked[:n2, :n2] = w @ lam_mat
        blocked[:n2, n2] = w @ lam_vec
        e = scipy.linalg.expm(blocked * t)
        return SymplecticTransform(e[:n2, n2], e[:n2, :n2])


def compose(t2: SymplecticTransform, t1: SymplecticTransform) -> SymplecticTransform:
    """Transform of applying t1 then t2 (same order as the active unitaries)."""
    if t1.basis != t2.basis:
        raise BasisMismatch("compose needs matching bases")
    if t1.m.shape != t2.m.shape:
        raise DimMismatch("compose needs matching mode counts")
    return SymplecticTransform(t2.delta + t2.m @ t1.delta, t2.m @ t1.m, t1.basis)


def inverse(t: SymplecticTransform) -> SymplecticTransform:
    minv = np.linalg.inv(t.m)
    return SymplecticTransform(-minv @ t.delta, minv, t.basis)


# ---------------------------------------------------------------------------
# Gate symplectics (standard-units quadrature basis)
# ---------------------------------------------------------------------------

def _rot2(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def _embed_quad(block: np.ndarray, targets, n_modes: int) -> np.ndarray:
    m = np.eye(2 * n_modes)
    idx = []
    for t in targets:
        idx += [2 * t, 2 * t + 1]
    m[np.ix_(idx, idx)] = block
    return m


def gate_symplectic(spec: GateSpec, n_modes: int, mode_index=None) -> SymplecticTransform:
    """Symplectic transform of a Gaussian gate; targets are mode positions.

    ``mode_index`` maps register target -> mode slot; identity by default.
    """
    name = spec.name
    p = spec.params
    targets = [mode_index[t] if mode_index else t for t in spec.targets]
    delta = np.zeros(2 * n_modes)
    if name == "D":
        alpha = complex(p[0])
        delta[2 * targets[0]] = math.sqrt(2.0) * alpha.real
        delta[2 * targets[0] + 1] = math.sqrt(2.0) * alpha.imag
        return SymplecticTransform(delta, np.eye(2 * n_modes))
    if name in ("R", "F"):
        theta = math.pi / 2 if name == "F" else float(np.real(p[0]))
        return SymplecticTransform(delta, _embed_quad(_rot2(theta), targets, n_modes))
    if name == "S":
        zeta = complex(p[0])
        r, th = abs(zeta), cmath.phase(zeta) / 2.0
        blk = _rot2(-th) @ np.diag([math.exp(-r), math.exp(r)]) @ _rot2(th)
        return SymplecticTransform(delta, _embed_quad(blk, targets, n_modes))
    if name in ("BS", "TMS", "SUM"):
        mm = _two_mode_symplectic_mode_basis(name, p)
        w2 = _quad_to_mode(2)
        blk = np.real_if_close(np.linalg.inv(w2) @ mm @ w2).real
        return SymplecticTransform(delta, _embed_quad(blk, targets, n_modes))
    raise BadParamDomain(f"{name} is not a Gaussian gate")


def _two_mode_symplectic_mode_basis(name: str, p) -> np.ndarray:
    """4x4 mode-basis matrices for BS/TMS/SUM acting on (a, a†, b, b†)."""
    if name == "BS":
        theta, phi = float(np.real(p[0])), float(np.real(p[1]))
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        e = cmath.exp(1j * phi)
        return np.array([
            [c, 0, -1j * e * s, 0],
            [0, c, 0, 1j * np.conj(e) * s],
            [-1j * np.conj(e) * s, 0, c, 0],
            [0, 1j * e * s, 0, c],
        ])
    if name == "TMS":
        r, phi = float(np.real(p[0])), float(np.real(p[1]))
        ch, sh = math.cosh(r), math.sinh(r)
        e = cmath.exp(1j * phi)
        return np.array([
            [ch, 0, 0, e * sh],
            [0, ch, np.conj(e) * sh, 0],
            [0, e * sh, ch, 0],
            [np.conj(e) * sh, 0, 0, ch],
        ])
    if name == "SUM":
        lam = float(np.real(p[0]))
        h = lam / 2.0
        return np.array([
            [1, 0, -h, h],
            [0, 1, h, -h],
            [h, h, 1, 0],
            [h, h, 0, 1],
        ], dtype=complex)
    raise BadParamDomain(name)


def circuit_symplectic(specs, mode_targets) -> SymplecticTransform:
    """Fold a list of Gaussian GateSpecs into one affine transform.

    ``mode_targets``: ordered register indices of the modes involved.
    """
    slot = {m: i for i, m in enumerate(mode_targets)}
    acc = identity_transform(len(mode_targets))
    for spec in specs:
        acc = compose(gate_symplectic(spec, len(mode_targets), slot), acc)
    return acc


# ---------------------------------------------------------------------------
# Bloch-Messiah
# ---------------------------------------------------------------------------

def bloch_messiah(m: np.ndarray, tol: float = 1e-8):
    """Decompose a real symplectic M = O1 Z O2 (orthosymplectic, squeeze, orthosymplectic).

    Z = diag(e^{r1}, e^{-r1}, ...) with r sorted descending; degenerate
    blocks are tie-broken deterministically by eigenvector order.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0] // 2
    w = omega(n)
    if np.linalg.norm(m.T @ w @ m - w, 2) > max(tol, tol * np.linalg.norm(m, 2) ** 2):
        raise NotSymplectic("input is not symplectic within tolerance")
    # polar: M = P O with P = sqrt(M M^T) symmetric positive symplectic
    p = scipy.linalg.sqrtm(m @ m.T).real
    o = np.linalg.solve(p, m)
    # eigen-pairing of P: eigenvalues come in (lam, 1/lam); w_k = -Omega v_k
    evals, evecs = np.linalg.eigh(p)
    order = np.argsort(-evals)
    evals, evecs = evals[order], evecs[:, order]
    used = np.zeros(2 * n, dtype=bool)
    cols = []
    rs = []
    for k in range(2 * n):
        if used[k] or evals[k] < 1.0 - 1e-12:
            continue
        v = evecs[:, k].copy()
        # orthogonalize against pairs already chosen (degenerate eigenspaces)
        for vc, wc in cols:
            v -= vc * (vc @ v) + wc * (wc @ v)
        nv = np.linalg.norm(v)
        if nv < 1e-10:
            used[k] = True
            continue
        v /= nv
        wv = -w @ v
        cols.append((v, wv))
        rs.append(math.log(max(evals[k], 1.0)))
        used[k] = True
    if len(cols) != n:
        raise NotSymplectic("eigen-pairing failed; matrix too far from symplectic")
    o1 = np.empty((2 * n, 2 * n))
    z = np.zeros(2 * n)
    for k, (v, wv) in enumerate(cols):
        o1[:, 2 * k] = v
        o1[:, 2 * k + 1] = wv
        z[2 * k] = math.exp(rs[k])
        z[2 * k + 1] = math.exp(-rs[k])
    zmat = np.diag(z)
    o2 = np.diag(1.0 / z) @ o1.T @ p @ o
    return o1, zmat, o2


def is_orthosymplectic(o: np.ndarray, tol: float = 1e-7) -> bool:
    n = o.shape[0] // 2
    return (np.linalg.norm(o.T @ o - np.eye(2 * n), 2) < tol
            and np.linalg.norm(o.T @ omega(n) @ o - omega(n), 2) < tol)


def orthosymplectic_to_mode_unitary(o: np.ndarray) -> np.ndarray:
    """Orthosymplectic quadrature matrix -> N x N complex passive unitary."""
    n = o.shape[0] // 2
    u = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            u[i, j] = o[2 * i, 2 * j] + 1j * o[2 * i + 1, 2 * j]
    return u


# ---------------------------------------------------------------------------
# Fock bridge
# ---------------------------------------------------------------------------

def gaussian_to_fock(gs: GaussianState, cfgs) -> QuantumState:
    """Build the pure Gaussian state in Fock space via its Bloch-Messiah circuit.

    Applies single-mode squeezers, the passive layer of the preparation
    transform, then displacements, all to vacuum.  Requires a pure covariance
    (2 cov symplectic).
    """
    cfgs = list(cfgs)
    n = gs.n_modes
    if len(cfgs) != n:
        raise DimMismatch("one ModeConfig per mode required")
    p = 2.0 * gs.cov
    w = omega(n)
    if np.linalg.norm(p @ w @ p - w, 2) > 1e-6 * max(1.0, np.linalg.norm(p, 2) ** 2):
        raise BadParamDomain("covariance is not pure (2 cov not symplectic)")
    o1, zmat, _ = bloch_messiah(p)
    # M_prep = O1 sqrt(Z): squeeze each mode, then the passive layer
    from .fock import vacuum as fock_vacuum

    reg = Register(cfgs)
    state = fock_vacuum(reg)
    vec = state.data
    from .fock import apply_matrix

    for k in range(n):
        er = math.sqrt(zmat[2 * k, 2 * k])   # e^{r_k} on x
        # quadrature x gains e^{r}: our squeeze(zeta=r) sends x -> e^{-r} x
        r = -math.log(er)
        if abs(r) > 1e-14:
            _guard_cutoff(r, cfgs[k])
            vec = apply_matrix(reg, vec, squeeze(r, cfgs[k]), (k,))
    u = orthosymplectic_to_mode_unitary(o1)
    for pair, g in _givens_factors(u):
        mats = [cfgs[i] for i in pair]
        vec = apply_matrix(reg, vec, passive_fock_unitary(g, mats), tuple(pair))
    for k in range(n):
        alpha = (gs.mean[2 * k] + 1j * gs.mean[2 * k + 1]) / math.sqrt(2.0)
        if alpha != 0:
            vec = apply_matrix(reg, vec, displacement(alpha, cfgs[k]), (k,))
    vec = vec / np.linalg.norm(vec)
    out = QuantumState(reg, vec)
    if out.leakage > 1e-3:
        raise CutoffTooSmall(f"gaussian_to_fock leakage {out.leakage:.2e}")
    return out


def _guard_cutoff(r: float, cfg: ModeConfig):
    if math.sinh(abs(r)) ** 2 > 0.5 * cfg.cutoff:
        raise CutoffTooSmall(
            f"squeeze r={r:.3f} needs mean photon {math.sinh(abs(r))**2:.1f}, cutoff {cfg.cutoff}")


def _givens_factors(u: np.ndarray):
    """Factor a unitary into two-mode blocks (and final phases) for Fock application.

    Returns a list of ((i, j), g2x2-or-diag) applied left to right in circuit
    order such that their product equals u.
    """
    n = u.shape[0]
    if n == 1:
        return [((0,), u.copy())] if abs(u[0, 0] - 1) > 1e-15 else []
    work = u.copy()
    rotations = []
    for col in range(n - 1):
        for row in range(n - 1, col, -1):
            a_, b_ = work[row - 1, col], work[row, col]
            if abs(b_) < 1e-15:
                continue
            r = math.hypot(abs(a_), abs(b_))
            g = np.array([[np.conj(a_), np.conj(b_)], [-b_, a_]]) / r
            full = np.eye(n, dtype=complex)
            full[np.ix_([row - 1, row], [row - 1, row])] = g
            work = full @ work
            rotations.append(((row - 1, row), g))
    # work is now diagonal (phases)
    factors = []
    for k in range(n):
        ph = work[k, k]
        if abs(ph - 1.0) > 1e-15:
            factors.append(((k,), np.array([[ph]], dtype=complex)))
    for pair, g in reversed(rotations):
        factors.append((pair, g.conj().T))
    return factors
