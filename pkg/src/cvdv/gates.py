"""Gate constructors for the oscillator, hybrid, and qubit gate tables.

All gates are defined through ladder operators, which keeps them independent
of the x/p unit convention; the few position-space gates (cubic phase) pull
lambda from the target ModeConfig.  Matrices are returned over the gate's
own support (targets), not embedded in the full register.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ArityMismatch, BadAxis, BadParamDomain, CutoffMismatch, DimMismatch
from .fock import (
    ModeConfig,
    OperatorMatrix,
    Register,
    SIGMA_I,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    axis_sigma,
    expm_hermitian,
    ladder_ops,
    sigma_phi,
)

SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |e><g| with |0> = |e>
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)

# name -> (number of qubit targets, number of mode targets)
GATE_ARITY = {
    "D": (0, 1), "Dc": (1, 1), "CD": (1, 1), "R": (0, 1), "F": (0, 1),
    "S": (0, 1), "BS": (0, 2), "TMS": (0, 2), "SUM": (0, 2), "SNAP": (0, 1),
    "SQR": (1, 1), "Kerr": (0, 1), "CubicPhase": (0, 1), "GenSqueeze": (0, 1),
    "eSWAP": (0, 2), "CR": (1, 1), "CP": (1, 1), "JC": (1, 1), "AJC": (1, 1),
    "RB": (1, 1), "CS": (1, 1), "CBS": (1, 2), "CTMS": (1, 2), "CSUM": (1, 2),
    "Rphi": (1, 0), "Rz": (1, 0), "CNOT": (2, 0), "CZ": (2, 0),
    "CPHASE": (2, 0), "iSWAP": (2, 0), "ZZ": (2, 0), "fSim": (2, 0),
    "fSWAP": (2, 0),
}


@dataclass(frozen=True)
class GateSpec:
    """Symbolic, parameterized gate instance bound to register targets."""

    name: str
    params: tuple = ()
    targets: tuple = ()

    def __post_init__(self):
        if self.name not in GATE_ARITY:
            raise BadParamDomain(f"unknown gate {self.name!r}")
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "targets", tuple(self.targets))
        if len(set(self.targets)) != len(self.targets):
            raise ArityMismatch(f"{self.name}: targets must be distinct")

    def validate(self, reg: Register):
        nq, nm = GATE_ARITY[self.name]
        if len(self.targets) != nq + nm:
            raise ArityMismatch(
                f"{self.name} takes {nq} qubit + {nm} mode targets, got {len(self.targets)}")
        for t in self.targets[:nq]:
            if not reg.is_qubit(t):
                raise ArityMismatch(f"{self.name}: target {t} must be a qubit")
        for t in self.targets[nq:]:
            if not reg.is_mode(t):
                raise ArityMismatch(f"{self.name}: target {t} must be a mode")
        _check_param_domain(self.name, self.params)


def _check_param_domain(name: str, params: tuple):
    def need(n):
        if len(params) != n:
            raise BadParamDomain(f"{name} takes {n} parameter(s), got {len(params)}")

    real_only = {"R": 1, "F": 0, "Kerr": 1, "CubicPhase": 1, "eSWAP": 1, "CR": 1,
                 "CP": 0, "Rz": 1, "ZZ": 1, "CPHASE": 1, "iSWAP": 1, "SUM": 1,
                 "CSUM": 1}
    if name in real_only:
        need(real_only[name])
        for p in params:
            if abs(complex(p).imag) > 0:
                raise BadParamDomain(f"{name} takes real parameters")
    elif name in ("D", "CD", "S", "CS", "CTMS"):
        need(1)
    elif name == "Dc":
        need(2)
    elif name in ("BS", "CBS", "JC", "AJC", "Rphi", "fSim"):
        need(2)
        for p in params:
            if abs(complex(p).imag) > 0:
                raise BadParamDomain(f"{name} takes real angle parameters")
    elif name == "TMS":
        need(2)
        if abs(complex(params[0]).imag) > 0:
            raise BadParamDomain("TMS r must be real")
    elif name == "RB":
        need(1)
    elif name == "GenSqueeze":
        need(2)
        n = params[1]
        if int(n) != n or int(n) < 3:
            raise BadParamDomain("GenSqueeze order must be an integer >= 3")
    elif name in ("SNAP", "SQR"):
        if name == "SNAP" and len(params) < 1:
            raise BadParamDomain("SNAP needs at least one phase")
        if name == "SQR" and (len(params) < 2 or len(params) % 2):
            raise BadParamDomain("SQR needs matching theta/phi vectors")
    elif name in ("CNOT", "CZ", "fSWAP"):
        need(0)


# ---------------------------------------------------------------------------
# single-mode pieces
# ---------------------------------------------------------------------------

def displacement(alpha: complex, cfg: ModeConfig, method: str = "auto") -> np.ndarray:
    """Truncated D(alpha).

    method='normal': normal-ordered closed form e^{-|a|^2/2} e^{a a†} e^{-a* a},
    whose truncated entries coincide with the exact infinite-dimensional matrix
    elements; method='exact': exponential of the truncated generator via
    eigendecomposition (exactly unitary on the truncated space).  'auto' uses
    the normal-ordered form where the factored series is free of catastrophic
    cancellation and falls back to the generator exponential beyond that.
    """
    d = cfg.dim
    a, adag = ladder_ops(cfg)
    if method == "auto":
        method = "normal" if abs(alpha) * (math.sqrt(d) + abs(alpha)) <= 25.0 else "exact"
    if method == "exact":
        h = 1j * (alpha * adag.matrix - np.conj(alpha) * a.matrix)
        return expm_hermitian(h)
    up = _expm_nilpotent(alpha * adag.matrix)
    dn = _expm_nilpotent(-np.conj(alpha) * a.matrix)
    return math.exp(-0.5 * abs(alpha) ** 2) * (up @ dn)


def _expm_nilpotent(m: np.ndarray) -> np.ndarray:
    """exp of a strictly triangular (nilpotent) matrix by its finite series."""
    d = m.shape[0]
    out = np.eye(d, dtype=complex)
    term = np.eye(d, dtype=complex)
    for k in range(1, d):
        term = term @ m / k
        if not term.any():
            break
        out += term
    return out


def squeeze(zeta: complex, cfg: ModeConfig) -> np.ndarray:
    """S(zeta) = exp[(zeta* a^2 - zeta a†^2)/2]."""
    a, adag = ladder_ops(cfg)
    g = 0.5 * (np.conj(zeta) * (a.matrix @ a.matrix) - zeta * (adag.matrix @ adag.matrix))
    return expm_hermitian(1j * g)


def rotation(theta: float, cfg: ModeConfig) -> np.ndarray:
    """R(theta) = exp(-i theta n)."""
    return np.diag(np.exp(-1j * theta * np.arange(cfg.dim)))


def snap(phis, cfg: ModeConfig) -> np.ndarray:
    """SNAP, oscillator-only sign convention exp(-i sum phi_n |n><n|)."""
    full = np.zeros(cfg.dim)
    phis = np.asarray(phis, dtype=float)
    full[: min(len(phis), cfg.dim)] = phis[: cfg.dim]
    return np.diag(np.exp(-1j * full))


def snap_qubit(phis, cfg: ModeConfig) -> np.ndarray:
    """Qubit-tagged SNAP variant exp(-i sigma_z sum phi_n |n><n|) on (qubit, mode)."""
    u = snap(phis, cfg)
    return _qubit_blockdiag(u, u.conj().T)


def kerr(theta: float, cfg: ModeConfig) -> np.ndarray:
    n = np.arange(cfg.dim)
    return np.diag(np.exp(-0.5j * theta * n * (n - 1)))


def cubic_phase(r: float, cfg: ModeConfig) -> np.ndarray:
    a, adag = ladder_ops(cfg)
    x = cfg.lam * (a.matrix + adag.matrix)
    return expm_hermitian(r * (x @ x @ x))


def gen_squeeze(z: complex, order: int, cfg: ModeConfig) -> np.ndarray:
    """U_N(z) = exp(z a†^N - z* a^N), N >= 3."""
    a, adag = ladder_ops(cfg)
    up = np.linalg.matrix_power(adag.matrix, order)
    g = z * up - np.conj(z) * up.conj().T
    return expm_hermitian(1j * g)


# ---------------------------------------------------------------------------
# two-mode pieces (number-sector exponentiation keeps these fast)
# ---------------------------------------------------------------------------

def _two_mode_sector_expm(da: int, db: int, hfun, sector_of) -> np.ndarray:
    """exp(-iH) for H block-diagonal under ``sector_of(na, nb)``.

    ``hfun(states)`` returns the Hermitian block for the basis list ``states``
    of (na, nb) pairs.
    """
    sectors = {}
    for na in range(da):
        for nb in range(db):
            sectors.setdefault(sector_of(na, nb), []).append((na, nb))
    u = np.zeros((da * db, da * db), dtype=complex)
    for states in sectors.values():
        h = hfun(states)
        ublk = expm_hermitian(h)
        idx = [na * db + nb for na, nb in states]
        u[np.ix_(idx, idx)] = ublk
    return u


def beam_splitter(theta: float, phi: float, cfg_a: ModeConfig, cfg_b: ModeConfig) -> np.ndarray:
    """BS(theta,phi) = exp[-i theta/2 (e^{i phi} a† b + e^{-i phi} a b†)]."""
    da, db = cfg_a.dim, cfg_b.dim

    def hblk(states):
        k = len(states)
        h = np.zeros((k, k), dtype=complex)
        pos = {s: i for i, s in enumerate(states)}
        for (na, nb), i in pos.items():
            upper = (na + 1, nb - 1)  # a† b
            if upper in pos:
                amp = 0.5 * theta * cmath.exp(1j * phi) * math.sqrt((na + 1) * nb)
                h[pos[upper], (i)] = amp
                h[i, pos[upper]] = np.conj(amp)
        return h

    return _two_mode_sector_expm(da, db, hblk, lambda na, nb: na + nb)


def two_mode_squeeze(r: float, phi: float, cfg_a: ModeConfig, cfg_b: ModeConfig) -> np.ndarray:
    """TMS(r,phi) = exp[r (e^{i phi} a†b† - e^{-i phi} ab)]."""
    da, db = cfg_a.dim, cfg_b.dim

    def hblk(states):
        k = len(states)
        h = np.zeros((k, k), dtype=complex)
        pos = {s: i for i, s in enumerate(states)}
        for (na, nb), i in pos.items():
            upper = (na + 1, nb + 1)  # a† b†
            if upper in pos:
                amp = 1j * r * cmath.exp(1j * phi) * math.sqrt((na + 1) * (nb + 1))
                h[pos[upper], i] = amp
                h[i, pos[upper]] = np.conj(amp)
        return h

    return _two_mode_sector_expm(da, db, hblk, lambda na, nb: na - nb)


def sum_gate(lam: float, cfg_a: ModeConfig, cfg_b: ModeConfig) -> np.ndarray:
    """SUM(lambda) = exp[(lambda/2)(a + a†)(b† - b)] (dense exponential)."""
    aa, aadag = ladder_ops(cfg_a)
    bb, bbdag = ladder_ops(cfg_b)
    xa = aa.matrix + aadag.matrix
    pb = bbdag.matrix - bb.matrix
    g = 0.5 * lam * np.kron(xa, pb)
    return scipy.linalg.expm(g)


def eswap(theta: float, cfg_a: ModeConfig, cfg_b: ModeConfig) -> np.ndarray:
    """eSWAP(theta) = cos(theta/2) I + i sin(theta/2) SWAP."""
    if cfg_a.dim != cfg_b.dim:
        raise CutoffMismatch("eSWAP needs equal cutoffs")
    d = cfg_a.dim
    swap = np.zeros((d * d, d * d))
    for na in range(d):
        for nb in range(d):
            swap[nb * d + na, na * d + nb] = 1.0
    return math.cos(theta / 2) * np.eye(d * d) + 1j * math.sin(theta / 2) * swap


# ---------------------------------------------------------------------------
# hybrid pieces
# ---------------------------------------------------------------------------

def _qubit_blockdiag(u0: np.ndarray, u1: np.ndarray) -> np.ndarray:
    """|0><0| (x) u0 + |1><1| (x) u1 in (qubit, rest) ordering."""
    return scipy.linalg.block_diag(u0, u1)


def conditional_displacement(alpha: complex, beta: complex, cfg: ModeConfig) -> np.ndarray:
    """Dc(alpha, beta) = |0><0| D(alpha) + |1><1| D(beta)."""
    return _qubit_blockdiag(displacement(alpha, cfg), displacement(beta, cfg))


def cd_gate(alpha: complex, cfg: ModeConfig) -> np.ndarray:
    """Symmetric conditional displacement CD(alpha) = exp[sigma_z (alpha a† - alpha* a)]."""
    return conditional_displacement(alpha, -alpha, cfg)


def generalized_cd(axis, alpha: complex, cfg: ModeConfig) -> np.ndarray:
    """CD along a Bloch axis: exp[b.sigma (x) (alpha a† - alpha* a)].

    Built from the projector form  sum_eta |eta><eta| (x) D(eta alpha).
    """
    b = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(b) - 1.0) > 1e-12:
        raise BadAxis(f"axis norm {np.linalg.norm(b)} is not 1 within 1e-12")
    bs = axis_sigma(b)
    out = np.zeros((2 * cfg.dim, 2 * cfg.dim), dtype=complex)
    for eta in (+1, -1):
        proj = 0.5 * (SIGMA_I + eta * bs)
        out += np.kron(proj, displacement(eta * alpha, cfg))
    return out


def conditional_rotation(theta: float, cfg: ModeConfig) -> np.ndarray:
    """CR(theta) = exp(-i theta/2 sigma_z n)."""
    return _qubit_blockdiag(rotation(theta / 2, cfg), rotation(-theta / 2, cfg))


def sqr_gate(thetas, phis, cfg: ModeConfig) -> np.ndarray:
    """SQR = sum_n R_{phi_n}(theta_n) (x) |n><n| on (qubit, mode)."""
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    if thetas.shape != phis.shape:
        raise BadParamDomain("SQR theta and phi vectors must have equal length")
    d = cfg.dim
    u = np.zeros((2 * d, 2 * d), dtype=complex)
    for n in range(d):
        th = thetas[n] if n < len(thetas) else 0.0
        ph = phis[n] if n < len(phis) else 0.0
        rq = expm_hermitian(0.5 * th * sigma_phi(ph))
        for i in range(2):
            for j in range(2):
                u[i * d + n, j * d + n] = rq[i, j]
    return u


def jaynes_cummings(theta: float, phi: float, cfg: ModeConfig, anti: bool = False) -> np.ndarray:
    """JC (red sideband) or AJC (blue sideband) on (qubit, mode)."""
    a, adag = ladder_ops(cfg)
    if anti:
        h = theta * (cmath.exp(1j * phi) * np.kron(SIGMA_PLUS, adag.matrix)
                     + cmath.exp(-1j * phi) * np.kron(SIGMA_MINUS, a.matrix))
    else:
        h = theta * (cmath.exp(1j * phi) * np.kron(SIGMA_MINUS, adag.matrix)
                     + cmath.exp(-1j * phi) * np.kron(SIGMA_PLUS, a.matrix))
    return expm_hermitian(h)


def rabi_gate(theta: complex, cfg: ModeConfig) -> np.ndarray:
    """RB(theta) = exp[-i sigma_x (theta a† + theta* a)]."""
    a, adag = ladder_ops(cfg)
    h = np.kron(SIGMA_X, theta * adag.matrix + np.conj(theta) * a.matrix)
    return expm_hermitian(h)


def conditional_squeeze(zeta: complex, cfg: ModeConfig) -> np.ndarray:
    """CS(zeta) = exp[(sigma_z/2)(zeta* a^2 - zeta a†^2)]."""
    return _qubit_blockdiag(squeeze(zeta, cfg), squeeze(-zeta, cfg))


def conditional_bs(theta: float, phi: float, cfg_a: ModeConfig, cfg_b: ModeConfig) -> np.ndarray:
    return _qubit_blockdiag(beam_splitter(theta, phi, cfg_a, cfg_b),
                            beam_splitter(-theta, phi, cfg_a, cfg_b))


def conditional_tms(xi: complex, cfg_a: ModeConfig, cfg_b: ModeConfig) -> np.ndarray:
    r, phi = abs(xi), cmath.phase(xi)
    return _qubit_blockdiag(two_mode_squeeze(r, phi, cfg_a, cfg_b),
                            two_mode_squeeze(-r, phi, cfg_a, cfg_b))


def conditional_sum(lam: float, cfg_a: ModeConfig, cfg_b: ModeConfig) -> np.ndarray:
    return _qubit_blockdiag(sum_gate(lam, cfg_a, cfg_b), sum_gate(-lam, cfg_a, cfg_b))


# ---------------------------------------------------------------------------
# qubit-only gates
# ---------------------------------------------------------------------------

def rphi(theta: float, phi: float) -> np.ndarray:
    return expm_hermitian(0.5 * theta * sigma_phi(phi))


def rz(theta: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)])


def rotation_axis(theta: float, axis) -> np.ndarray:
    """exp(-i theta/2 n.sigma) for an arbitrary Bloch axis."""
    return expm_hermitian(0.5 * theta * axis_sigma(axis))


CNOT = np.kron(np.diag([1.0, 0.0]), SIGMA_I) + np.kron(np.diag([0.0, 1.0]), SIGMA_X)
CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def cphase(phi: float) -> np.ndarray:
    return np.diag([1.0, 1.0, 1.0, cmath.exp(1j * phi)])


def iswap(theta: float = math.pi / 2) -> np.ndarray:
    h = -0.5 * theta * (np.kron(SIGMA_X, SIGMA_X) + np.kron(SIGMA_Y, SIGMA_Y))
    return expm_hermitian(h)


def zz(theta: float) -> np.ndarray:
    return expm_hermitian(0.5 * theta * np.kron(SIGMA_Z, SIGMA_Z))


def fsim(theta: float, phi: float) -> np.ndarray:
    """fSim(theta,phi) = iSWAP(-theta) . CPHASE(phi)."""
    return iswap(-theta) @ cphase(phi)


def fswap() -> np.ndarray:
    return 1j * np.kron(rz(math.pi / 2), rz(math.pi / 2)) @ fsim(math.pi / 2, 0.0)


def fsim_fock(theta: float, phi: float, cfg_a: ModeConfig, cfg_b: ModeConfig) -> np.ndarray:
    """fSim on the {|0>,|1>} Fock encoding: exp(-i phi n_a n_b) . BS(2 theta, 0)."""
    na = np.arange(cfg_a.dim)
    nb = np.arange(cfg_b.dim)
    crosskerr = np.diag(np.exp(-1j * phi * np.outer(na, nb).reshape(-1)))
    return crosskerr @ beam_splitter(2 * theta, 0.0, cfg_a, cfg_b)


def fswap_fock(cfg_a: ModeConfig, cfg_b: ModeConfig) -> np.ndarray:
    ra = rotation(-math.pi / 2, cfg_a)
    rb = rotation(-math.pi / 2, cfg_b)
    return np.kron(ra, rb) @ fsim_fock(math.pi / 2, 0.0, cfg_a, cfg_b)


# ---------------------------------------------------------------------------
# builder
# ---------------------------------------------------------------------------

def build(spec: GateSpec, reg: Register) -> OperatorMatrix:
    """Exact truncated matrix of the cited gate definition over its targets."""
    spec.validate(reg)
    nq, nm = GATE_ARITY[spec.name]
    modes = [reg.mode(t) for t in spec.targets[nq:]]
    p = spec.params
    name = spec.name

    if name == "D":
        m = displacement(complex(p[0]), modes[0])
    elif name == "Dc":
        m = conditional_displacement(complex(p[0]), complex(p[1]), modes[0])
    elif name == "CD":
        m = cd_gate(complex(p[0]), modes[0])
    elif name == "R":
        m = rotation(float(p[0].real if isinstance(p[0], complex) else p[0]), modes[0])
    elif name == "F":
        m = rotation(math.pi / 2, modes[0])
    elif name == "S":
        m = squeeze(complex(p[0]), modes[0])
    elif name == "BS":
        m = beam_splitter(_real(p[0]), _real(p[1]), modes[0], modes[1])
    elif name == "TMS":
        m = two_mode_squeeze(_real(p[0]), _real(p[1]), modes[0], modes[1])
    elif name == "SUM":
        m = sum_gate(_real(p[0]), modes[0], modes[1])
    elif name == "SNAP":
        m = snap([_real(v) for v in p], modes[0])
    elif name == "SQR":
        half = len(p) // 2
        m = sqr_gate([_real(v) for v in p[:half]], [_real(v) for v in p[half:]], modes[0])
    elif name == "Kerr":
        m = kerr(_real(p[0]), modes[0])
    elif name == "CubicPhase":
        m = cubic_phase(_real(p[0]), modes[0])
    elif name == "GenSqueeze":
        m = gen_squeeze(complex(p[0]), int(p[1].real if isinstance(p[1], complex) else p[1]), modes[0])
    elif name == "eSWAP":
        m = eswap(_real(p[0]), modes[0], modes[1])
    elif name == "CR":
        m = conditional_rotation(_real(p[0]), modes[0])
    elif name == "CP":
        m = conditional_rotation(math.pi, modes[0])
    elif name == "JC":
        m = jaynes_cummings(_real(p[0]), _real(p[1]), modes[0], anti=False)
    elif name == "AJC":
        m = jaynes_cummings(_real(p[0]), _real(p[1]), modes[0], anti=True)
    elif name == "RB":
        m = rabi_gate(complex(p[0]), modes[0])
    elif name == "CS":
        m = conditional_squeeze(complex(p[0]), modes[0])
    elif name == "CBS":
        m = conditional_bs(_real(p[0]), _real(p[1]), modes[0], modes[1])
    elif name == "CTMS":
        m = conditional_tms(complex(p[0]), modes[0], modes[1])
    elif name == "CSUM":
        m = conditional_sum(_real(p[0]), modes[0], modes[1])
    elif name == "Rphi":
        m = rphi(_real(p[0]), _real(p[1]))
    elif name == "Rz":
        m = rz(_real(p[0]))
    elif name == "CNOT":
        m = CNOT
    elif name == "CZ":
        m = CZ
    elif name == "CPHASE":
        m = cphase(_real(p[0]))
    elif name == "iSWAP":
        m = iswap(_real(p[0]))
    elif name == "ZZ":
        m = zz(_real(p[0]))
    elif name == "fSim":
        m = fsim(_real(p[0]), _real(p[1]))
    elif name == "fSWAP":
        m = fswap()
    else:  # pragma: no cover
        raise BadParamDomain(f"unhandled gate {name}")
    return OperatorMatrix(m, spec.targets).certify()


def _real(v) -> float:
    v = complex(v)
    if abs(v.imag) > 0:
        raise BadParamDomain("expected a real parameter")
    return v.real


# ---------------------------------------------------------------------------
# SWAP conventions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SwapGate:
    op: OperatorMatrix
    convention: str  # "BS(pi,pi/2)" or "BS(pi,0)"


def swap_gate(reg: Register, pair, convention: str = "BS(pi,pi/2)") -> SwapGate:
    """Mode-SWAP built from the beam-splitter, with a convention tag.

    Default BS(pi, pi/2) = exp[pi/2 (a†b - ab†)] acts as SWAP with no extra
    phase on Fock products; the alternative BS(pi, 0) swaps up to
    exp(-i pi (n_a + n_b)/2).
    """
    i, j = pair
    cfg_a, cfg_b = reg.mode(i), reg.mode(j)
    if cfg_a.dim != cfg_b.dim:
        raise CutoffMismatch("swap_gate needs equal cutoffs")
    if convention == "BS(pi,pi/2)":
        m = beam_splitter(math.pi, math.pi / 2, cfg_a, cfg_b)
    elif convention == "BS(pi,0)":
        m = beam_splitter(math.pi, 0.0, cfg_a, cfg_b)
    else:
        raise BadParamDomain(f"unknown SWAP convention {convention!r}")
    return SwapGate(OperatorMatrix(m, (i, j)).certify(), convention)


def mode_swap_matrix(dim: int) -> np.ndarray:
    """The permutation |n_a, n_b> -> |n_b, n_a> (exact SWAP, for oracles)."""
    s = np.zeros((dim * dim, dim * dim))
    for na in range(dim):
        for nb in range(dim):
            s[nb * dim + na, na * dim + nb] = 1.0
    return s


def passive_fock_unitary(g: np.ndarray, cfgs) -> np.ndarray:
    """Fock unitary of a passive mode transform U† a_i U = sum_j g_ij a_j.

    ``g`` is a k x k complex unitary over the listed modes; realized through
    the number-conserving generator H = sum h_ij a_i† a_j with h = i log g.
    """
    w, v = np.linalg.eig(g)
    h = (v * (1j * np.log(w))) @ np.linalg.inv(v)
    h = 0.5 * (h + h.conj().T)
    k = len(cfgs)
    if k == 1:
        a, adag = ladder_ops(cfgs[0])
        return expm_hermitian(h[0, 0].real * (adag.matrix @ a.matrix))
    if k == 2:
        da, db = cfgs[0].dim, cfgs[1].dim

        def hblk(states):
            m = len(states)
            blk = np.zeros((m, m), dtype=complex)
            pos = {s: idx for idx, s in enumerate(states)}
            for (na, nb), idx in pos.items():
                blk[idx, idx] = h[0, 0].real * na + h[1, 1].real * nb
                tgt = (na + 1, nb - 1)  # a† b
                if tgt in pos:
                    amp = h[0, 1] * math.sqrt((na + 1) * nb)
                    blk[pos[tgt], idx] += amp
                    blk[idx, pos[tgt]] += np.conj(amp)
            return blk

        return _two_mode_sector_expm(da, db, hblk, lambda na, nb: na + nb)
    raise DimMismatch("passive_fock_unitary supports 1 or 2 modes at a time")
