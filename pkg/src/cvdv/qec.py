"""Bosonic code states and QEC circuits: preparation, stabilization, readout,
logical rotations, and logical entangling gadgets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, Reset
from .compiler.qsp import BB1_PHASES, _axis_cd_ops, cat_target
from .errors import BadArgument, CutoffTooSmall, NoAncilla, UnsupportedCode
from .fock import (
    ModeConfig,
    QuantumState,
    Register,
    StateKind,
    basis_state,
    coherent_amplitudes,
    fock_state,
)
from .gates import GateSpec, displacement, squeeze


# ---------------------------------------------------------------------------
# Code definitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BosonicCode:
    kind: str                 # gkp | cat2 | cat4 | binomial | dualrail
    param: float = 0.0        # Delta for GKP, alpha for cats

    def default_cutoff(self) -> int:
        if self.kind == "gkp":
            return 120
        if self.kind == "cat4":
            return int(math.ceil(4 * self.param ** 2)) + 30
        if self.kind == "cat2":
            return int(math.ceil(self.param ** 2 + 6 * self.param)) + 20
        if self.kind == "binomial":
            return 12
        if self.kind == "dualrail":
            return 3
        raise UnsupportedCode(self.kind)


def gkp(delta: float = 0.302) -> BosonicCode:
    return BosonicCode("gkp", delta)


def cat2(alpha: float) -> BosonicCode:
    return BosonicCode("cat2", alpha)


def cat4(alpha: float) -> BosonicCode:
    return BosonicCode("cat4", alpha)


def binomial() -> BosonicCode:
    return BosonicCode("binomial")


def dualrail() -> BosonicCode:
    return BosonicCode("dualrail")


SQRT_PI = math.sqrt(math.pi)

# squared-peak-width factor (units of Delta^2) of the comb construction,
# calibrated so the first-order readout rotation error cancels
READOUT_WIDTH_FACTOR = 0.8

# per-side trim-kick weight of the stabilization round, in units of
# sqrt(pi) Delta^2, calibrated the same way
SBS_KICK_FACTOR = 0.6


def _gkp_comb(delta: float, cfg: ModeConfig, offset_steps: int,
              spacing: float = 1.0, rotate: float = 0.0) -> np.ndarray:
    """Finite-energy GKP comb: envelope e^{-Delta^2 n} over displaced squeezed
    peaks at x = (2m + offset) sqrt(pi) spacing, optionally rotated in phase
    space (the X basis is the quarter-turn comb; Y lives on the sqrt(2)
    diagonal lattice)."""
    lam = cfg.lam
    d = cfg.dim
    # pre-envelope peaks much narrower than the envelope width
    sigma0 = delta / 3.0
    r = -0.5 * math.log(sigma0 ** 2 / lam ** 2)
    if math.sinh(r) ** 2 > 0.45 * cfg.cutoff:
        raise CutoffTooSmall(f"GKP peaks at width {sigma0:.3f} exceed cutoff {cfg.cutoff}")
    sq = squeeze(r, cfg) @ np.eye(d)[:, 0]
    n_peaks = 2 * math.ceil(2.0 / delta) + 1
    vec = np.zeros(d, dtype=complex)
    half = n_peaks // 2
    for m in range(-half, half + 1):
        x_pos = (2 * m + offset_steps) * SQRT_PI * spacing
        # skip peaks whose energy cannot be represented at this cutoff
        if (x_pos / (2 * lam)) ** 2 > 0.8 * cfg.cutoff:
            continue
        amp = x_pos / (2 * lam)   # ladder displacement placing the peak at x_pos
        vec += displacement(amp, cfg) @ sq
    env = np.exp(-delta ** 2 * np.arange(d))
    vec = env * vec
    nrm = np.linalg.norm(vec)
    if nrm < 1e-12:
        raise CutoffTooSmall("GKP comb vanished; cutoff too small for this Delta")
    vec = vec / nrm
    if rotate:
        from .gates import rotation

        vec = rotation(rotate, cfg) @ vec
    return vec


def codewords(code: BosonicCode, basis: str = "Z", cfg: ModeConfig | None = None):
    """Logical (state0, state1) of the code in the requested Pauli basis."""
    basis = basis.upper()
    if basis not in ("Z", "X", "Y"):
        raise BadArgument(f"basis must be Z/X/Y, got {basis}")
    if code.kind == "dualrail":
        c = cfg or ModeConfig(code.default_cutoff())
        reg = Register([c, c])
        z0, z1 = basis_state(reg, (0, 1)), basis_state(reg, (1, 0))
        return _basis_combos(z0.data, z1.data, basis, reg)
    c = cfg or ModeConfig(code.default_cutoff())
    if code.kind == "binomial":
        v0 = np.zeros(c.dim, dtype=complex)
        v0[0] = v0[4] = 1 / math.sqrt(2)
        v1 = np.zeros(c.dim, dtype=complex)
        v1[2] = 1.0
    elif code.kind == "cat2":
        v0 = cat_target(code.param, c, +1)
        v1 = cat_target(code.param, c, -1)
    elif code.kind == "cat4":
        if c.cutoff < 4 * code.param ** 2:
            raise CutoffTooSmall("cat4 needs cutoff >= 4 alpha^2")
        v0 = cat_target(code.param, c, +1)
        v1raw = coherent_amplitudes(1j * code.param, c.dim) \
            + coherent_amplitudes(-1j * code.param, c.dim)
        v1 = v1raw / np.linalg.norm(v1raw)
        # orthogonalize within the even-parity span (coherent overlaps)
        v1 = v1 - np.vdot(v0, v1) * v0
        v1 = v1 / np.linalg.norm(v1)
    elif code.kind == "gkp":
        if c.cutoff < 3.0 / code.param ** 2:
            raise CutoffTooSmall("GKP guideline: cutoff >= 3/Delta^2")
        # X/Y codewords are the rotated (and for Y, sqrt(2)-rescaled) combs,
        # not the generic superpositions of the Z pair
        if basis == "Z":
            rot, spacing = 0.0, 1.0
        elif basis == "X":
            rot, spacing = math.pi / 2, 1.0
        else:
            rot, spacing = math.pi / 4, 1.0 / math.sqrt(2.0)
        v0 = _gkp_comb(code.param, c, 0, spacing, rot)
        v1 = _gkp_comb(code.param, c, 1, spacing, rot)
        v1 = v1 - np.vdot(v0, v1) * v0
        v1 = v1 / np.linalg.norm(v1)
        reg = Register([c])
        return QuantumState(reg, v0), QuantumState(reg, v1)
    else:
        raise UnsupportedCode(code.kind)
    reg = Register([c])
    return _basis_combos(v0, v1, basis, reg)


def _basis_combos(v0, v1, basis, reg):
    if basis == "Z":
        a, b = v0, v1
    elif basis == "X":
        a = (v0 + v1) / np.linalg.norm(v0 + v1)
        b = (v0 - v1) / np.linalg.norm(v0 - v1)
    else:
        a = (v0 + 1j * v1) / np.linalg.norm(v0 + 1j * v1)
        b = (v0 - 1j * v1) / np.linalg.norm(v0 - 1j * v1)
    return QuantumState(reg, a), QuantumState(reg, b)


# ---------------------------------------------------------------------------
# GKP stabilization and readout
# ---------------------------------------------------------------------------

def _quad_sigma_ops(coeff_x: float, coeff_p: float, axis: str, qubit: int,
                    mode: int, lam: float) -> list:
    """Gate ops for exp[i (coeff_x x + coeff_p p) (axis.sigma)].

    Realized as one generalized conditional displacement: the generator
    i(coeff_x x + coeff_p p) equals beta a† - beta* a with
    beta = lam (coeff_p + i coeff_x).
    """
    beta = lam * (coeff_p + 1j * coeff_x)
    return _axis_cd_ops(axis, beta, qubit, mode)


def sbs_round(delta: float, quadrature: str = "x", register: Register | None = None,
              qubit: int = 0, mode: int = 1, reset: bool = True) -> Circuit:
    """One small-big-small dissipative stabilization round.

    Trotterized engineered dissipator: small conditional kick (amplitude
    proportional to Delta^2), the big sqrt(pi) conditional displacement,
    small kick, then ancilla reset.  The x round sharpens the position comb
    (applying a deterministic logical Pauli), the p round the momentum comb.
    """
    if register is None:
        register = Register(["qubit", ModeConfig(120)])
    if not register.qubit_indices:
        raise NoAncilla("sbs_round needs an ancilla qubit")
    cfg = register.mode(mode)
    lam = cfg.lam
    if math.pi / (2 * delta ** 2) > 2.0 * cfg.cutoff:
        raise CutoffTooSmall(f"Delta={delta} needs cutoff well above {cfg.cutoff}")
    circ = Circuit(register)
    # symmetric splitting: half-weight trim kicks around the big displacement;
    # the kick weight is calibrated on the finite-energy comb construction
    # (the sign pattern is the one that empirically sharpens both quadratures)
    small = SBS_KICK_FACTOR * SQRT_PI * delta ** 2
    big = SQRT_PI
    if quadrature == "x":
        cx, cp = big, 0.0
        sx, sp = 0.0, -small
    elif quadrature == "p":
        cx, cp = 0.0, big
        sx, sp = small, 0.0
    else:
        raise BadArgument("quadrature must be 'x' or 'p'")
    for op in _quad_sigma_ops(sx, sp, "y", qubit, mode, lam):
        circ.append(op)
    for op in _quad_sigma_ops(cx, cp, "x", qubit, mode, lam):
        circ.append(op)
    for op in _quad_sigma_ops(sx, sp, "y", qubit, mode, lam):
        circ.append(op)
    if reset:
        circ.ops.append(Reset(qubit))
    return circ


def gkp_readout(basis: str, delta: float, register: Register | None = None,
                qubit: int = 0, mode: int = 1) -> Circuit:
    """Logical Pauli readout circuit; measure the ancilla Z afterwards.

    The big conditional displacement rotates the ancilla by a multiple of pi
    per peak; the small pre-kick (amplitude scaling with Delta^2) cancels the
    first-order rotation error from the finite peak width.  The Y-basis
    displacement is longer by sqrt(2).
    """
    if register is None:
        register = Register(["qubit", ModeConfig(120)])
    cfg = register.mode(mode)
    lam = cfg.lam
    circ = Circuit(register)
    basis = basis.upper()
    g = SQRT_PI / 2.0
    # effective squared peak width of the finite-energy comb construction;
    # calibrated against the dense misassignment of the built codewords
    w = READOUT_WIDTH_FACTOR * delta ** 2
    if basis == "Z":
        main = (g, 0.0)
        pre = (0.0, -2 * g * w)
    elif basis == "X":
        main = (0.0, g)
        pre = (2 * g * w, 0.0)
    elif basis == "Y":
        main = (g, g)
        pre = (2 * g * w, -2 * g * w)
    else:
        raise BadArgument("basis must be X, Y, or Z")
    for op in _quad_sigma_ops(pre[0], pre[1], "y", qubit, mode, lam):
        circ.append(op)
    for op in _quad_sigma_ops(main[0], main[1], "x", qubit, mode, lam):
        circ.append(op)
    circ.measure(qubit, "z")
    return circ


def readout_misassignment(code: BosonicCode, basis: str, logical_bit: int,
                          cfg: ModeConfig | None = None) -> float:
    """Dense wrong-outcome probability of the readout on an ideal codeword."""
    from .fock import apply_matrix
    from .gates import build

    cfg = cfg or ModeConfig(code.default_cutoff())
    s0, s1 = codewords(code, basis, cfg)
    state = (s0, s1)[logical_bit]
    reg = Register(["qubit", cfg])
    vec = np.kron([1.0, 0.0], state.data)
    circ = gkp_readout(basis, code.param, reg)
    for spec in circ.gate_specs:
        vec = apply_matrix(reg, vec, build(spec, reg).matrix, spec.targets)
    probs = np.abs(vec.reshape(2, -1)) ** 2
    p = probs.sum(axis=1)
    # outcome 0 <-> +1 eigenstate (ancilla stays |0>), 1 <-> flipped
    return float(p[1 - logical_bit])


# ---------------------------------------------------------------------------
# Cat amplification and four-legged preparation
# ---------------------------------------------------------------------------

def _cat_disentangler_ops(method: str, alpha: float, qubit: int, mode: int,
                          lam: float) -> list:
    """Gadget mapping the conditionally displaced pair back to ancilla |0>."""
    k = math.pi / (2 * alpha)
    ops = []
    if method == "nonabelian":
        ops += _axis_cd_ops("y", -1j * k * lam / 2.0, qubit, mode)
        ops += _axis_cd_ops("x", -0.5 * k * lam, qubit, mode)
    elif method == "bb1":
        ops.append(GateSpec("Rz", (BB1_PHASES[9],), (qubit,)))
        for j in range(9, 0, -1):
            ops += _axis_cd_ops("x", -1j * k * lam / 2.0, qubit, mode)
            ops.append(GateSpec("Rz", (BB1_PHASES[j - 1],), (qubit,)))
    else:
        raise BadArgument("method must be 'bb1' or 'nonabelian'")
    return ops


def _dagger(ops):
    out = []
    for spec in reversed(ops):
        if spec.name in ("CD", "D"):
            out.append(GateSpec(spec.name, (-spec.params[0],), spec.targets))
        elif spec.name == "Rz":
            out.append(GateSpec("Rz", (-spec.params[0],), spec.targets))
        elif spec.name == "Rphi":
            out.append(GateSpec("Rphi", (-spec.params[0], spec.params[1]), spec.targets))
        else:
            raise BadArgument(f"no adjoint rule for {spec.name}")
    return out


def cat_amplify(method: str, alpha: float, delta: float,
                register: Register | None = None, qubit: int = 0,
                mode: int = 1) -> Circuit:
    """Grow an even cat from size alpha to alpha+delta without measurement.

    Re-entangles the cat blobs with the ancilla (adjoint of the preparation
    disentangler), displaces the blobs apart by delta conditionally, then
    disentangles at the new size.  Expects input cat(alpha) (x) |0>.
    """
    if alpha <= 0 or delta < 0:
        raise BadArgument("need alpha > 0 and delta >= 0")
    if register is None:
        ap = alpha + delta
        register = Register(["qubit", ModeConfig(int(ap * ap + 6 * ap + 25))])
    cfg = register.mode(mode)
    circ = Circuit(register)
    for op in _dagger(_cat_disentangler_ops(method, alpha, qubit, mode, cfg.lam)):
        circ.append(op)
    if delta:
        for op in _axis_cd_ops("x", -delta, qubit, mode):
            circ.append(op)
    for op in _cat_disentangler_ops(method, alpha + delta, qubit, mode, cfg.lam):
        circ.append(op)
    return circ


def fourcat_prep(alpha: float, register: Register | None = None, qubit: int = 0,
                 mode: int = 1) -> Circuit:
    """Four-blob cat preparation: two conditional quadrature kicks, a phase
    fix-up, and the composite-pulse disentangler along the diagonal
    quadrature v = (x+p)."""
    if alpha <= 0:
        raise BadArgument("alpha must be positive")
    if register is None:
        register = Register(["qubit", ModeConfig(int(4 * alpha * alpha) + 40)])
    cfg = register.mode(mode)
    lam = cfg.lam
    circ = Circuit(register)
    # blobs: exp[i alpha (x+p) sx] then exp[i alpha (x-p) sz]
    for op in _quad_sigma_ops(alpha, alpha, "x", qubit, mode, lam):
        circ.append(op)
    for op in _quad_sigma_ops(alpha, -alpha, "z", qubit, mode, lam):
        circ.append(op)
    # relative-phase fix between the sigma_z branches
    circ.gate("Rz", (alpha * alpha - math.pi / 2,), (qubit,))
    # composite-pulse disentangler on the diagonal quadrature, nominal pi/2
    k = math.pi / (2 * alpha)
    circ.gate("Rz", (BB1_PHASES[9],), (qubit,))
    for j in range(9, 0, -1):
        for op in _quad_sigma_ops(-k / 2.0, -k / 2.0, "x", qubit, mode, lam):
            circ.append(op)
        circ.gate("Rz", (BB1_PHASES[j - 1],), (qubit,))
    return circ


def fourcat_target(alpha: float, cfg: ModeConfig) -> np.ndarray:
    """|+>_4C: equal superposition of the four coherent legs, normalized."""
    v = (coherent_amplitudes(alpha, cfg.dim) + coherent_amplitudes(-alpha, cfg.dim)
         + coherent_amplitudes(1j * alpha, cfg.dim)
         + coherent_amplitudes(-1j * alpha, cfg.dim))
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# Phase transfer and logical entangling
# ---------------------------------------------------------------------------

def _entangler_ops(code: BosonicCode, qubit: int, mode: int):
    """C_P X-style oscillator-controlled ancilla flip for the code's Z."""
    if code.kind in ("binomial", "cat4"):
        # exp(i pi/4 n sx): conditional rotation conjugated onto the x axis
        pre = GateSpec("Rphi", (math.pi / 2, math.pi / 2), (qubit,))
        cr = GateSpec("CR", (-math.pi / 2,), (qubit, mode))
        post = GateSpec("Rphi", (-math.pi / 2, math.pi / 2), (qubit,))
        return [pre, cr, post]
    if code.kind == "dualrail":
        pre = GateSpec("Rphi", (math.pi / 2, math.pi / 2), (qubit,))
        cr = GateSpec("CR", (-math.pi,), (qubit, mode))
        post = GateSpec("Rphi", (-math.pi / 2, math.pi / 2), (qubit,))
        return [pre, cr, post]
    raise UnsupportedCode(f"phase transfer not wired for {code.kind}")


def phase_transfer(code: BosonicCode, pauli: str, theta: float,
                   register: Register | None = None, qubit: int | None = None,
                   mode: int = 0) -> Circuit:
    """Teleported logical rotation exp(-i theta P/2) via an ancilla Z phase.

    Circuit: C_P X, ancilla Rz(theta), (C_P X)†; the ancilla returns to |0>
    so a flipped ancilla heralds an error.  Z rotations are native for the
    supported codes; other axes would need code-specific conjugations.
    """
    if pauli.upper() != "Z":
        raise UnsupportedCode("phase_transfer implements logical Z rotations")
    if register is None:
        cfg = ModeConfig(code.default_cutoff())
        register = Register([cfg, "qubit"])
        qubit = 1
    ent = _entangler_ops(code, qubit, mode)
    circ = Circuit(register)
    for op in ent:
        circ.append(op)
    circ.gate("Rz", (theta,), (qubit,))
    for op in _dagger_entangler(ent):
        circ.append(op)
    return circ


def _dagger_entangler(ops):
    out = []
    for spec in reversed(ops):
        if spec.name == "CR":
            out.append(GateSpec("CR", (-spec.params[0],), spec.targets))
        elif spec.name == "Rphi":
            out.append(GateSpec("Rphi", (-spec.params[0], spec.params[1]), spec.targets))
        else:
            raise BadArgument(spec.name)
    return out


def logical_entangle(code: BosonicCode, kind: str = "CZ",
                     register: Register | None = None) -> Circuit:
    """CZ between two logical bosonic qubits via two ancillas and CPHASE.

    Entangle each codeword with its own ancilla (C_Z X), apply CPHASE(pi)
    between the ancillas, then disentangle; both ancillas return to |0>.
    Register layout: [mode(s) of qubit A..., mode(s) of qubit B..., anc A, anc B].
    """
    if kind.upper() not in ("CZ", "CZ_L"):
        raise BadArgument("only CZ_L is wired")
    n_modes = 2 if code.kind == "dualrail" else 1
    if register is None:
        cfg = ModeConfig(code.default_cutoff())
        register = Register([cfg] * (2 * n_modes) + ["qubit", "qubit"])
    anc_a = 2 * n_modes
    anc_b = 2 * n_modes + 1
    circ = Circuit(register)
    ent_a = _entangler_ops(code, anc_a, 0)
    ent_b = _entangler_ops(code, anc_b, n_modes)
    if code.kind == "dualrail":
        # dual rail: the conditional rotation acts on the first rail only
        pass
    for op in ent_a + ent_b:
        circ.append(op)
    circ.gate("CPHASE", (math.pi,), (anc_a, anc_b))
    for op in _dagger_entangler(ent_a) + _dagger_entangler(ent_b):
        circ.append(op)
    return circ
