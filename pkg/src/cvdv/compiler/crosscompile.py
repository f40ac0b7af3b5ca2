"""Cross-compilation between the hybrid instruction sets.

Supported directed pairs (everything else raises UnsupportedPair):

  Sideband  -> PhaseSpace : each JC/AJC splits per Trotter step into a pair
                            of generalized conditional displacements.
  PhaseSpace-> Sideband   : each CD splits per step into a red/blue sideband
                            pair interleaved with pi pulses.
  PhaseSpace-> FockSpace  : CD = CP . D(i alpha) . CP† with the controlled
                            parity built from an SQR staircase (exact).
  Sideband  -> FockSpace  : sideband generators assembled level-by-level from
                            displacement/SQR group commutators.

Certificates carry the leading-order O(|amplitude|^2 / L) error constants
(set to one); dense desk-scale checks are expected to land within 3x.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..circuits import Circuit
from ..errors import BadArgument, UnsupportedPair
from ..fock import Register
from ..gates import GateSpec
from .isa import IsaProfile, profile, validate


def cross_compile(circ: Circuit, source: str | IsaProfile, target: str | IsaProfile,
                  budget: dict | None = None):
    """Translate a circuit between ISAs; returns (Circuit, certificate dict)."""
    source = profile(source) if isinstance(source, str) else source
    target = profile(target) if isinstance(target, str) else target
    bad = validate(circ, source)
    if bad:
        raise BadArgument(f"circuit does not validate against {source.name}: {bad[:3]}")
    key = (source.name, target.name)
    rules = {
        ("Sideband", "PhaseSpace"): _sideband_to_phase,
        ("PhaseSpace", "Sideband"): _phase_to_sideband,
        ("PhaseSpace", "FockSpace"): _phase_to_fock,
        ("Sideband", "FockSpace"): _sideband_to_fock,
    }
    if key not in rules:
        raise UnsupportedPair(f"no construction for {key[0]} -> {key[1]}")
    budget = dict(budget or {})
    budget.setdefault("r", 16)
    out = Circuit(circ.register)
    out.n_bits = circ.n_bits
    total_err = 0.0
    for node in circ.ops:
        if isinstance(node, GateSpec):
            ops, err = rules[key](node, circ.register, budget)
            out.ops.extend(ops)
            total_err += err
        else:
            out.ops.append(node)
    cert = {"source": source.name, "target": target.name,
            "error_bound": total_err, "budget": budget}
    leftover = validate(out, target)
    if leftover:
        raise UnsupportedPair(f"translation left foreign gates: {leftover[:3]}")
    return out, cert


# -- helpers ---------------------------------------------------------------

def _rphi(theta, phi, q):
    return GateSpec("Rphi", (theta, phi), (q,))


def _axis_x_cd(beta, q, m):
    """exp[sigma_x (beta a† - beta* a)] via Rphi conjugation."""
    return [_rphi(-math.pi / 2, math.pi / 2, q),
            GateSpec("CD", (beta,), (q, m)),
            _rphi(math.pi / 2, math.pi / 2, q)]


def _axis_y_cd(beta, q, m):
    return [_rphi(math.pi / 2, 0.0, q),
            GateSpec("CD", (beta,), (q, m)),
            _rphi(-math.pi / 2, 0.0, q)]


def _rz_ops(phi, q):
    """Rz from equatorial rotations: Rz(phi) = Rx(-pi/2) Ry(phi) Rx(pi/2)."""
    return [_rphi(math.pi / 2, 0.0, q),
            _rphi(phi, math.pi / 2, q),
            _rphi(-math.pi / 2, 0.0, q)]


# -- Sideband -> PhaseSpace -------------------------------------------------

def _sideband_to_phase(spec: GateSpec, reg: Register, budget: dict):
    if spec.name == "Rphi":
        return [spec], 0.0
    if spec.name == "BS":
        return [spec], 0.0
    if spec.name != "JC":
        raise UnsupportedPair(f"{spec.name} has no Sideband->PhaseSpace rule")
    theta, phi = float(np.real(spec.params[0])), float(np.real(spec.params[1]))
    q, m = spec.targets
    steps = int(budget["r"])
    alpha = -1j * theta * cmath.exp(-1j * phi)   # JC = exp[a s+ a - a* s- a†]
    delta = alpha / steps
    ops = []
    for _ in range(steps):
        # exp(delta s+ a - delta* s- a†) ~ CD_x(-delta*/2) . CD_y(i delta*/2)
        ops += _axis_y_cd(1j * np.conj(delta) / 2.0, q, m)
        ops += _axis_x_cd(-np.conj(delta) / 2.0, q, m)
    return ops, abs(alpha) ** 2 / steps


# -- PhaseSpace -> Sideband -------------------------------------------------

def _phase_to_sideband(spec: GateSpec, reg: Register, budget: dict):
    if spec.name == "Rphi":
        return [spec], 0.0
    if spec.name == "BS":
        return [spec], 0.0
    if spec.name != "CD":
        raise UnsupportedPair(f"{spec.name} has no PhaseSpace->Sideband rule")
    alpha = complex(spec.params[0])
    q, m = spec.targets
    steps = int(budget["r"])
    # CD(alpha) = V e^{i sx (gamma a† + gamma* a)} V†, gamma = i alpha
    gamma = 1j * alpha
    dg = gamma / steps
    ops = [_rphi(-math.pi / 2, math.pi / 2, q)]
    for _ in range(steps):
        # red part: exp[i(dg* s+ a + dg s- a†)] = JC(t, ph)
        t, ph = _jc_params(1j * np.conj(dg), 1j * dg)
        ops.append(GateSpec("JC", (t, ph), (q, m)))
        # blue part via pi pulses: X . (same red sideband) . X
        ops.append(_rphi(-math.pi, 0.0, q))
        ops.append(GateSpec("JC", (t, ph), (q, m)))
        ops.append(_rphi(math.pi, 0.0, q))
    ops.append(_rphi(math.pi / 2, math.pi / 2, q))
    return ops, abs(gamma) ** 2 / steps


def _jc_params(c_plus_a: complex, c_minus_adag: complex):
    """(theta, phi) with JC generator -i theta(e^{i phi} s- a† + e^{-i phi} s+ a)
    matching exponent c_plus_a * s+ a + c_minus_adag * s- a†."""
    # -i theta e^{-i phi} = c_plus_a and -i theta e^{i phi} = c_minus_adag
    t = abs(c_plus_a)
    if t < 1e-15:
        return 0.0, 0.0
    ph = cmath.phase(c_minus_adag / (-1j))
    theta = (c_minus_adag / (-1j * cmath.exp(1j * ph))).real
    return theta, ph


# -- PhaseSpace -> FockSpace ------------------------------------------------

def _sqr_staircase(reg: Register, q: int, m: int, scale: float = 1.0):
    """SQR with theta_n = n pi scale, phi = 0."""
    dim = reg.mode(m).dim
    thetas = tuple(scale * math.pi * n for n in range(dim))
    return GateSpec("SQR", thetas + (0.0,) * dim, (q, m))


def _phase_to_fock(spec: GateSpec, reg: Register, budget: dict):
    if spec.name == "BS":
        return [spec], 0.0
    if spec.name == "Rphi":
        dim_any = reg.mode(reg.mode_indices[0]).dim if reg.mode_indices else 1
        # constant SQR vectors reduce to an unconditional qubit rotation; use
        # the first mode as the (unentangled) spectator
        q = spec.targets[0]
        m = reg.mode_indices[0]
        d = reg.mode(m).dim
        theta, phi = spec.params
        return [GateSpec("SQR", (float(np.real(theta)),) * d + (float(np.real(phi)),) * d,
                         (q, m))], 0.0
    if spec.name != "CD":
        raise UnsupportedPair(f"{spec.name} has no PhaseSpace->FockSpace rule")
    alpha = complex(spec.params[0])
    q, m = spec.targets
    d = reg.mode(m).dim

    def const_rot(theta, phi):
        return GateSpec("SQR", (theta,) * d + (phi,) * d, (q, m))

    # CP from an SQR staircase conjugated by Ry(+-pi/2); CD = CP D(i a) CP†
    ry_p = const_rot(math.pi / 2, math.pi / 2)
    ry_m = const_rot(-math.pi / 2, math.pi / 2)
    cp = [ry_p, _sqr_staircase(reg, q, m), ry_m]
    cp_dag = [ry_p, _sqr_staircase(reg, q, m, scale=-1.0), ry_m]
    ops = cp_dag + [GateSpec("D", (1j * alpha,), (m,))] + cp
    return ops, 0.0


# -- Sideband -> FockSpace --------------------------------------------------

def _sideband_to_fock(spec: GateSpec, reg: Register, budget: dict):
    if spec.name == "BS":
        return [spec], 0.0
    if spec.name == "Rphi":
        q = spec.targets[0]
        m = reg.mode_indices[0]
        d = reg.mode(m).dim
        theta, phi = spec.params
        return [GateSpec("SQR", (float(np.real(theta)),) * d + (float(np.real(phi)),) * d,
                         (q, m))], 0.0
    if spec.name != "JC":
        raise UnsupportedPair(f"{spec.name} has no Sideband->FockSpace rule")
    theta, phi = float(np.real(spec.params[0])), float(np.real(spec.params[1]))
    q, m = spec.targets
    d = reg.mode(m).dim
    steps = int(budget["r"])
    small = math.sqrt(abs(theta) / steps)
    sign = 1.0 if theta >= 0 else -1.0
    ops = []
    if phi:
        ops += _rz_ops(phi, q)

    def cumulative_sqr(angle, axis_phi, level):
        thetas = tuple(angle if n <= level else 0.0 for n in range(d))
        phis = (axis_phi,) * d
        return GateSpec("SQR", thetas + phis, (q, m))

    for _ in range(steps):
        for n in range(d - 1):
            # Omega_n ~ exp(-i (alpha theta'/2) sx J_n): D U_n(0) D† U_n(0)†
            ops.append(cumulative_sqr(-sign * small, 0.0, n))
            ops.append(GateSpec("D", (-small / 2.0,), (m,)))
            ops.append(cumulative_sqr(sign * small, 0.0, n))
            ops.append(GateSpec("D", (small / 2.0,), (m,)))
            # Xi_n† ~ exp(+i (alpha theta'/2) sy L_n)
            ops.append(cumulative_sqr(sign * small, math.pi / 2, n))
            ops.append(GateSpec("D", (-1j * small / 2.0,), (m,)))
            ops.append(cumulative_sqr(-sign * small, math.pi / 2, n))
            ops.append(GateSpec("D", (1j * small / 2.0,), (m,)))
    if phi:
        ops += _rz_ops(-phi, q)
    return ops, abs(theta) * d / steps


# -- dispersive-simulation gadgets (superparity) -----------------------------

def superparity_gate(ell: int, theta: float, n_reps: int, dim: int) -> np.ndarray:
    """Qubit-and-mode unitary of N repetitions of the slow-Rabi/dispersive step.

    Each step applies R_0(2 pi / N) on the qubit followed by the conditional
    rotation CR(theta); for theta = pi/ell and suitable N the composite flips
    the sign of every Fock level with n = 0 mod ell while returning the
    ancilla, up to the tabulated phase errors.
    """
    from ..fock import SIGMA_X, expm_hermitian

    delta = 2 * math.pi / n_reps
    rabi = expm_hermitian(0.5 * delta * SIGMA_X)
    u = np.eye(2 * dim, dtype=complex)
    step = np.zeros((2 * dim, 2 * dim), dtype=complex)
    ns = np.arange(dim)
    up = np.diag(np.exp(-1j * theta * ns))
    dn = np.diag(np.exp(+1j * theta * ns))
    # step = CR(theta) (Rabi x I)
    rb = np.kron(rabi, np.eye(dim))
    cr = np.zeros((2 * dim, 2 * dim), dtype=complex)
    cr[:dim, :dim] = up
    cr[dim:, dim:] = dn
    step = cr @ rb
    for _ in range(n_reps):
        u = step @ u
    return u


def superparity_phase_errors(ell: int, theta: float, n_reps: int, dim: int):
    """Per-Fock-level phase error (radians) against the ideal sign flip.

    Returns (errors, max_error) where the ideal gate applies -1 on levels
    n = 0 mod ell and +1 elsewhere, with the ancilla returned to |0>.
    """
    u = superparity_gate(ell, theta, n_reps, dim)
    errors = []
    for n in range(dim):
        amp = u[n, n]          # ancilla |0>, level n -> ancilla |0>, level n
        ideal = -1.0 if n % ell == 0 else 1.0
        phase = cmath.phase(amp / ideal)
        errors.append(abs(phase))
    return np.array(errors), float(np.max(np.array(errors)))
