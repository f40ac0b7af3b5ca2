"""Truncated-Fock-space linear algebra: registers, states, operators, evolution.

Dimensionless position/momentum conventions:

    x = lam_x (a + a†),   p = -i lam_p (a - a†)

with lam = 1/2 ("wigner" units, [x,p] = i/2) or lam = 1/sqrt(2)
("standard" units, [x,p] = i).  Every phase-space-facing routine takes the
convention from :class:`ModeConfig`; nothing hard-codes a lambda.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    BadArgument,
    CutoffTooSmall,
    DimMismatch,
    LeakageWarning,
    NotHermitian,
)

ATOL_FLAG = 1e-10        # certification tolerance for hermitian/unitary flags
LEAK_WARN = 1e-6
LEAK_ERROR = 1e-3


class Units(Enum):
    WIGNER = "wigner"      # lam_x = lam_p = 1/2
    STANDARD = "standard"  # lam_x = lam_p = 1/sqrt(2)

    @property
    def lam(self) -> float:
        return 0.5 if self is Units.WIGNER else 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ModeConfig:
    """One bosonic mode: Fock cutoff N_max (dim = N_max+1) and unit convention."""

    cutoff: int
    units: Units = Units.WIGNER

    def __post_init__(self):
        if self.cutoff < 1:
            raise BadArgument(f"cutoff must be >= 1, got {self.cutoff}")
        if not isinstance(self.units, Units):
            object.__setattr__(self, "units", Units(self.units))

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @property
    def lam(self) -> float:
        return self.units.lam


QUBIT = "qubit"


@dataclass(frozen=True)
class Register:
    """Ordered list of subsystems; the tensor-product frame for everything.

    Subsystems are either the string ``"qubit"`` or a :class:`ModeConfig`.
    Index order is fixed at construction and defines the Kronecker order
    (subsystem 0 is the slowest index).
    """

    subsystems: tuple

    def __init__(self, subsystems):
        object.__setattr__(self, "subsystems", tuple(subsystems))
        for s in self.subsystems:
            if s != QUBIT and not isinstance(s, ModeConfig):
                raise BadArgument(f"subsystem must be 'qubit' or ModeConfig, got {s!r}")

    @property
    def dims(self) -> tuple:
        return tuple(2 if s == QUBIT else s.dim for s in self.subsystems)

    @property
    def total_dim(self) -> int:
        d = 1
        for n in self.dims:
            d *= n
        return d

    def __len__(self) -> int:
        return len(self.subsystems)

    def is_qubit(self, i: int) -> bool:
        return self.subsystems[i] == QUBIT

    def is_mode(self, i: int) -> bool:
        return isinstance(self.subsystems[i], ModeConfig)

    def mode(self, i: int) -> ModeConfig:
        s = self.subsystems[i]
        if not isinstance(s, ModeConfig):
            raise BadArgument(f"subsystem {i} is not a mode")
        return s

    @property
    def qubit_indices(self) -> tuple:
        return tuple(i for i, s in enumerate(self.subsystems) if s == QUBIT)

    @property
    def mode_indices(self) -> tuple:
        return tuple(i for i, s in enumerate(self.subsystems) if isinstance(s, ModeConfig))


def register(*spec) -> Register:
    """Shorthand: register('qubit', ModeConfig(20), ...) or register(mode=...)"""
    return Register(spec)


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

@dataclass
class OperatorMatrix:
    """Dense complex block over a support set of subsystems of a register.

    ``support`` lists register indices (in register order); ``matrix`` acts on
    the Kronecker product of those subsystems.  Flags are only set when
    certified to ATOL_FLAG in operator norm on the truncated space; unitarity
    is allowed to fail near the cutoff (see leakage contract).
    """

    matrix: np.ndarray
    support: tuple
    hermitian_flag: bool = False
    unitary_flag: bool = False

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        self.support = tuple(self.support)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise DimMismatch(f"operator matrix must be square, got {self.matrix.shape}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix.conj().T, self.support,
                              self.hermitian_flag, self.unitary_flag)

    def certify(self) -> "OperatorMatrix":
        """(Re)compute hermitian/unitary flags at the certification tolerance."""
        m = self.matrix
        self.hermitian_flag = bool(np.linalg.norm(m - m.conj().T, 2) <= ATOL_FLAG * max(1.0, np.linalg.norm(m, 2)))
        d = m.shape[0]
        self.unitary_flag = bool(np.linalg.norm(m.conj().T @ m - np.eye(d), 2) <= ATOL_FLAG * d)
        return self

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.support != other.support:
            raise DimMismatch("operator products need identical support")
        return OperatorMatrix(self.matrix @ other.matrix, self.support)


def operator(matrix, support=(0,)) -> OperatorMatrix:
    return OperatorMatrix(np.asarray(matrix, dtype=complex), support).certify()


def unitarity_defect(op: OperatorMatrix, dims=None, exclude_top_fraction=0.1) -> float:
    """|| P (U†U - I) P || with P projecting out the top fraction of Fock levels.

    ``dims``: per-subsystem dims of the support block (defaults to one factor).
    """
    m = op.matrix
    d = m.shape[0]
    if dims is None:
        dims = (d,)
    keep = []
    for nd in dims:
        k = nd - int(math.ceil(nd * exclude_top_fraction)) if nd > 2 else nd
        keep.append(np.arange(k))
    mask = np.zeros(dims, dtype=bool)
    mask[np.ix_(*keep)] = True
    mask = mask.reshape(d)
    idx = np.where(mask)[0]
    defect = (m.conj().T @ m - np.eye(d))[np.ix_(idx, idx)]
    return float(np.linalg.norm(defect, 2))


# -- single-subsystem building blocks ---------------------------------------

def ladder_ops(cfg: ModeConfig):
    """Truncated annihilation/creation pair; a†a = diag(0..N_max) exactly."""
    d = cfg.dim
    a = np.zeros((d, d), dtype=complex)
    ns = np.arange(1, d)
    a[ns - 1, ns] = np.sqrt(ns)
    lo = OperatorMatrix(a, (0,))
    hi = OperatorMatrix(a.conj().T, (0,))
    return lo, hi


def number_op(cfg: ModeConfig) -> OperatorMatrix:
    n = np.diag(np.arange(cfg.dim).astype(complex))
    return OperatorMatrix(n, (0,), hermitian_flag=True)


def position_op(cfg: ModeConfig) -> OperatorMatrix:
    a, adag = ladder_ops(cfg)
    return OperatorMatrix(cfg.lam * (a.matrix + adag.matrix), (0,), hermitian_flag=True)


def momentum_op(cfg: ModeConfig) -> OperatorMatrix:
    a, adag = ladder_ops(cfg)
    return OperatorMatrix(-1j * cfg.lam * (a.matrix - adag.matrix), (0,), hermitian_flag=True)


def parity_op(cfg: ModeConfig) -> OperatorMatrix:
    return OperatorMatrix(np.diag((-1.0) ** np.arange(cfg.dim) + 0j), (0,),
                          hermitian_flag=True, unitary_flag=True)


def fock_projector(m: int, cfg: ModeConfig) -> OperatorMatrix:
    p = np.zeros((cfg.dim, cfg.dim), dtype=complex)
    p[m, m] = 1.0
    return OperatorMatrix(p, (0,), hermitian_flag=True)


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_I = np.eye(2, dtype=complex)


def pauli(which: str) -> OperatorMatrix:
    m = {"i": SIGMA_I, "x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}[which.lower()]
    return OperatorMatrix(m, (0,), hermitian_flag=True, unitary_flag=True)


def sigma_phi(phi: float) -> np.ndarray:
    """Equatorial Pauli axis cos(phi) X + sin(phi) Y."""
    return math.cos(phi) * SIGMA_X + math.sin(phi) * SIGMA_Y


def axis_sigma(axis) -> np.ndarray:
    """b . sigma for a 3-vector b (not necessarily unit)."""
    b = np.asarray(axis, dtype=float)
    return b[0] * SIGMA_X + b[1] * SIGMA_Y + b[2] * SIGMA_Z


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

class StateKind(Enum):
    PURE = "pure"
    DENSITY = "density"


@dataclass
class QuantumState:
    """Pure amplitude vector or density matrix over a Register.

    ``leakage`` records the worst per-mode population in the top ceil(d/10)
    Fock levels, refreshed whenever the state is (re)built.
    """

    register: Register
    data: np.ndarray
    kind: StateKind = StateKind.PURE
    leakage: float = field(default=0.0)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        d = self.register.total_dim
        if self.kind == StateKind.PURE:
            if self.data.shape != (d,):
                raise DimMismatch(f"pure state needs shape ({d},), got {self.data.shape}")
            nrm = np.linalg.norm(self.data)
            if abs(nrm - 1.0) > 1e-8:
                raise BadArgument(f"pure state norm {nrm} deviates from 1 beyond tolerance")
            if nrm != 1.0:
                self.data = self.data / nrm
        else:
            if self.data.shape != (d, d):
                raise DimMismatch(f"density matrix needs shape ({d},{d})")
            if np.linalg.norm(self.data - self.data.conj().T) > 1e-9 * d:
                raise BadArgument("density matrix is not Hermitian")
            tr = np.trace(self.data).real
            if abs(tr - 1.0) > 1e-10:
                raise BadArgument(f"density trace {tr} deviates from 1 beyond 1e-10")
        self.leakage = mode_leakage(self.register, self.data, self.kind)

    @property
    def tensor(self) -> np.ndarray:
        shape = self.register.dims
        if self.kind == StateKind.PURE:
            return self.data.reshape(shape)
        return self.data.reshape(shape + shape)

    def to_density(self) -> "QuantumState":
        if self.kind == StateKind.DENSITY:
            return self
        rho = np.outer(self.data, self.data.conj())
        return QuantumState(self.register, rho, StateKind.DENSITY)


def mode_leakage(reg: Register, data: np.ndarray, kind: StateKind) -> float:
    """Worst-mode population in the top ceil(d/10) Fock levels."""
    if not reg.mode_indices:
        return 0.0
    if kind == StateKind.PURE:
        probs = np.abs(data.reshape(reg.dims)) ** 2
    else:
        d = reg.total_dim
        probs = np.abs(np.diagonal(data.reshape((d, d)))).reshape(reg.dims)
    worst = 0.0
    for i in reg.mode_indices:
        d_i = reg.dims[i]
        top = int(math.ceil(d_i / 10))
        marg = np.moveaxis(probs, i, 0).reshape(d_i, -1).sum(axis=1)
        worst = max(worst, float(marg[d_i - top:].sum()))
    return worst


def check_leakage(state: QuantumState, context: str = "operation"):
    if state.leakage > LEAK_ERROR:
        raise CutoffTooSmall(f"{context}: leakage {state.leakage:.2e} exceeds {LEAK_ERROR}")
    if state.leakage > LEAK_WARN:
        warnings.warn(f"{context}: leakage {state.leakage:.2e}", LeakageWarning, stacklevel=2)


def basis_state(reg: Register, occupations) -> QuantumState:
    """Product basis state |n_0, n_1, ...> over the register."""
    occupations = tuple(occupations)
    if len(occupations) != len(reg):
        raise DimMismatch("one occupation per subsystem required")
    vec = np.zeros(reg.total_dim, dtype=complex)
    idx = np.ravel_multi_index(occupations, reg.dims)
    vec[idx] = 1.0
    return QuantumState(reg, vec)


def vacuum(reg: Register) -> QuantumState:
    return basis_state(reg, (0,) * len(reg))


def fock_state(n: int, cfg: ModeConfig) -> QuantumState:
    reg = Register([cfg])
    if n > cfg.cutoff:
        raise CutoffTooSmall(f"Fock level {n} above cutoff {cfg.cutoff}")
    return basis_state(reg, (n,))


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!) on the truncated space."""
    if alpha == 0:
        c = np.zeros(dim, dtype=complex)
        c[0] = 1.0
        return c
    n = np.arange(dim)
    log_fact = np.cumsum(np.concatenate([[0.0], np.log(np.arange(1, dim))]))
    logmag = -0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha)) - 0.5 * log_fact
    return np.exp(logmag + 1j * n * np.angle(alpha))


def coherent_state(alpha: complex, cfg: ModeConfig) -> QuantumState:
    """Coherent state with leakage bookkeeping and renormalization.

    Raises CutoffTooSmall when the truncation drops more than 1e-3 of the
    norm; warns when leakage into the top Fock levels exceeds 1e-6.
    """
    c = coherent_amplitudes(alpha, cfg.dim)
    deficit = 1.0 - float(np.vdot(c, c).real)
    if deficit > 1e-3:
        raise CutoffTooSmall(
            f"coherent |alpha|={abs(alpha):.3g} loses {deficit:.2e} of its norm at cutoff {cfg.cutoff}")
    c = c / np.linalg.norm(c)
    state = QuantumState(Register([cfg]), c)
    check_leakage(state, "coherent_state")
    return state


# ---------------------------------------------------------------------------
# Embedding and application
# ---------------------------------------------------------------------------

def embed(op: OperatorMatrix, reg: Register, targets=None) -> OperatorMatrix:
    """Tensor extension by identity on non-targets, respecting register order."""
    targets = tuple(targets) if targets is not None else op.support
    dims = reg.dims
    if len(set(targets)) != len(targets):
        raise DimMismatch("targets must be distinct")
    tdims = tuple(dims[t] for t in targets)
    block = int(np.prod(tdims))
    if op.matrix.shape[0] != block:
        raise DimMismatch(
            f"operator dim {op.matrix.shape[0]} does not match target dims {tdims}")
    n = len(reg)
    rest = [i for i in range(n) if i not in targets]
    # operator as a 2k-index tensor, identity on the rest, then permute
    full = np.tensordot(op.matrix.reshape(tdims + tdims),
                        np.eye(int(np.prod([dims[i] for i in rest], dtype=int) or 1)).reshape(
                            tuple(dims[i] for i in rest) + tuple(dims[i] for i in rest)),
                        axes=0)
    k = len(targets)
    r = len(rest)
    # current index order: t_out, t_in, r_out, r_in -> want register order out, in
    perm_out = [None] * n
    for pos, t in enumerate(targets):
        perm_out[t] = pos
    for pos, i in enumerate(rest):
        perm_out[i] = 2 * k + pos
    perm_in = [None] * n
    for pos, t in enumerate(targets):
        perm_in[t] = k + pos
    for pos, i in enumerate(rest):
        perm_in[i] = 2 * k + r + pos
    full = full.transpose(perm_out + perm_in)
    d = reg.total_dim
    out = OperatorMatrix(full.reshape(d, d), tuple(range(n)),
                         op.hermitian_flag, op.unitary_flag)
    return out


def apply_matrix(reg: Register, state_vec: np.ndarray, matrix: np.ndarray, targets) -> np.ndarray:
    """Apply a dense operator on ``targets`` to a flat statevector (no full kron)."""
    dims = reg.dims
    targets = tuple(targets)
    tdims = tuple(dims[t] for t in targets)
    psi = state_vec.reshape(dims)
    op = matrix.reshape(tdims + tdims)
    psi = np.tensordot(op, psi, axes=(tuple(range(len(targets), 2 * len(targets))), targets))
    # tensordot moved target axes to the front, in order
    psi = np.moveaxis(psi, tuple(range(len(targets))), targets)
    return psi.reshape(-1)


def apply(op: OperatorMatrix, state: QuantumState, targets=None) -> QuantumState:
    """Apply an operator block to a state (pure vector or density matrix)."""
    targets = tuple(targets) if targets is not None else op.support
    if state.kind == StateKind.PURE:
        vec = apply_matrix(state.register, state.data, op.matrix, targets)
        nrm = np.linalg.norm(vec)
        if abs(nrm - 1.0) > 1e-10:
            vec = vec / nrm
        return QuantumState(state.register, vec)
    rho = state.data
    full = embed(op, state.register, targets).matrix
    rho = full @ rho @ full.conj().T
    rho = rho / np.trace(rho).real
    return QuantumState(state.register, rho, StateKind.DENSITY)


def expectation(op: OperatorMatrix, state: QuantumState, targets=None) -> complex:
    targets = tuple(targets) if targets is not None else op.support
    if state.kind == StateKind.PURE:
        vec = apply_matrix(state.register, state.data, op.matrix, targets)
        return complex(np.vdot(state.data, vec))
    full = embed(op, state.register, targets).matrix
    return complex(np.trace(full @ state.data))


def partial_trace(state: QuantumState, keep) -> np.ndarray:
    """Reduced density matrix over the kept subsystems (register order)."""
    keep = tuple(keep)
    reg = state.register
    dims = reg.dims
    n = len(reg)
    rho = state.to_density().data.reshape(dims + dims)
    drop = [i for i in range(n) if i not in keep]
    for i in sorted(drop, reverse=True):
        rho = np.trace(rho, axis1=i, axis2=i + rho.ndim // 2)
    d_keep = int(np.prod([dims[i] for i in keep], dtype=int) or 1)
    return rho.reshape(d_keep, d_keep)


# ---------------------------------------------------------------------------
# Evolution and metrics
# ---------------------------------------------------------------------------

def evolve(state: QuantumState, h: OperatorMatrix, t: float, targets=None) -> QuantumState:
    """exp(-i H t) |psi> via Hermitian eigendecomposition; norm kept to 1e-10."""
    if not h.hermitian_flag:
        raise NotHermitian("evolve requires a certified Hermitian generator")
    u = expm_hermitian(h.matrix, t)
    uop = OperatorMatrix(u, h.support, unitary_flag=True)
    return apply(uop, state, targets)


def expm_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(-i h t) for Hermitian h, by eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def fidelity(s1: QuantumState, s2: QuantumState) -> float:
    """|<s1|s2>|^2 for pure states; Uhlmann fidelity when a density is involved."""
    if s1.register.dims != s2.register.dims:
        raise DimMismatch("states live on different registers")
    if s1.kind == StateKind.PURE and s2.kind == StateKind.PURE:
        return float(abs(np.vdot(s1.data, s2.data)) ** 2)
    if s1.kind == StateKind.PURE:
        return float(np.real(np.vdot(s1.data, s2.to_density().data @ s1.data)))
    if s2.kind == StateKind.PURE:
        return fidelity(s2, s1)
    from scipy.linalg import sqrtm
    r1 = sqrtm(s1.data)
    inner = sqrtm(r1 @ s2.data @ r1)
    return float(np.real(np.trace(inner)) ** 2)


def trace_fidelity(u_target: np.ndarray, u: np.ndarray, projector=None) -> float:
    """Projected Hilbert-Schmidt fidelity |Tr(P U_target† U) / Tr P|^2."""
    if projector is None:
        projector = np.eye(u.shape[0])
    num = np.trace(projector @ u_target.conj().T @ u)
    return float(abs(num / np.trace(projector)) ** 2)


def cutoff_bound(energy: float, omega: float, delta_cut: float) -> int:
    """Markov-inequality cutoff: smallest N_max with N_max >= E/(delta_cut w)."""
    if energy < 0:
        raise BadArgument("energy must be nonnegative")
    if omega <= 0:
        raise BadArgument("omega must be positive")
    if not 0 < delta_cut < 1:
        raise BadArgument("delta_cut must lie in (0, 1)")
    return max(1, int(math.ceil(energy / (delta_cut * omega))))
