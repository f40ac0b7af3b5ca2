"""Circuit-level passes: beam-splitter SWAP routing and qubit-mediated
two-mode nonlinear gate synthesis."""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from ..circuits import Circuit, ClassicalBranch, Measure, Reset
from ..errors import BadArgument, DisconnectedGraph
from ..gates import GATE_ARITY, GateSpec


def _bfs_path(adj, start, goal):
    """Shortest path with lowest-index tie-breaking; list of nodes."""
    if start == goal:
        return [start]
    prev = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in sorted(adj.get(node, ())):
            if nxt not in prev:
                prev[nxt] = node
                if nxt == goal:
                    path = [goal]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return path[::-1]
                queue.append(nxt)
    return None


def route(circ: Circuit, connectivity, qubit_home=None) -> Circuit:
    """Make every two-operand gate act on adjacent modes via SWAP insertion.

    ``connectivity`` is an adjacency mapping over mode indices (register
    positions).  A qubit participates through its home mode (``qubit_home``
    maps qubit index -> mode index; defaults to the mode at the matching
    ordinal position).  A gate is local when its operands' modes are at graph
    distance <= 1.  Non-local operands are brought adjacent by a chain of
    mode SWAPs (BS(pi, pi/2)) along the BFS shortest path, applied and then
    undone, so the output is circuit-equivalent.
    """
    reg = circ.register
    adj = {k: set(v) for k, v in connectivity.items()}
    for k, v in list(adj.items()):
        for n in v:
            adj.setdefault(n, set()).add(k)
    nodes = set(adj)
    for m in reg.mode_indices:
        if m not in nodes:
            raise DisconnectedGraph(f"mode {m} missing from connectivity")
    # connectivity check
    seen = set()
    stack = [next(iter(nodes))]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        stack.extend(adj[n])
    if seen != nodes:
        raise DisconnectedGraph("connectivity graph is not connected")
    if qubit_home is None:
        modes = list(reg.mode_indices)
        qubit_home = {}
        for ordinal, q in enumerate(reg.qubit_indices):
            qubit_home[q] = modes[ordinal % len(modes)]

    out = Circuit(reg)
    out.n_bits = circ.n_bits
    for node in circ.ops:
        if not isinstance(node, GateSpec):
            out.ops.append(node)
            continue
        anchors = [qubit_home[t] if reg.is_qubit(t) else t for t in node.targets]
        if len(set(anchors)) <= 1:
            out.ops.append(node)
            continue
        if len(anchors) != 2:
            raise BadArgument("route handles one- and two-operand gates")
        a, b = anchors
        path = _bfs_path(adj, b, a)
        if path is None:
            raise DisconnectedGraph(f"no path between modes {a} and {b}")
        if len(path) <= 2:
            out.ops.append(node)
            continue
        # swap b's content along the path until adjacent to a: L-1 swaps
        hops = path[:-1]  # b ... neighbor-of-a
        swaps = [GateSpec("BS", (math.pi, math.pi / 2), (hops[i], hops[i + 1]))
                 for i in range(len(hops) - 1)]
        for s in swaps:
            out.ops.append(s)
        landing = hops[-1]
        new_targets = tuple(landing if (not reg.is_qubit(t) and t == b) else t
                            for t in node.targets)
        out.ops.append(GateSpec(node.name, node.params, new_targets))
        for s in reversed(swaps):
            out.ops.append(s)
    return out


def qubit_mediated(f_coeffs, h_coeffs, theta: float, register=None,
                   ancilla: int | None = None, modes=None) -> Circuit:
    """Circuit for exp(-i theta Z_anc f(n_i) h(n_j)) from SQR and SNAP gates.

    ``f_coeffs[k] = f(k)`` and ``h_coeffs[k] = h(k)`` tabulate the two number
    functions up to each mode's cutoff.  Per Fock projector |k><k| of mode j
    the gadget costs two SQR pulses and two tagged-SNAP applications, so the
    depth is 4 N_max.  When all h values coincide the projector loop
    collapses to a single tagged-SNAP pair.
    """
    from ..fock import ModeConfig, Register

    f_coeffs = np.asarray(f_coeffs, dtype=float)
    h_coeffs = np.asarray(h_coeffs, dtype=float)
    if register is None:
        cfg = ModeConfig(max(len(f_coeffs), len(h_coeffs)) - 1)
        register = Register(["qubit", cfg, cfg])
        ancilla, modes = 0, (1, 2)
    i_mode, j_mode = modes
    cfg_i = register.mode(i_mode)
    cfg_j = register.mode(j_mode)
    circ = Circuit(register)

    def tagged_snap(phis, mode):
        """exp(-i Z_anc sum phi_n |n><n|) as an SQR Berry-phase pair."""
        dim = register.mode(mode).dim
        pi_vec = (math.pi,) * dim
        zero_vec = (0.0,) * dim
        phi_vec = tuple(float(p) for p in phis) + (0.0,) * (dim - len(phis))
        circ.append(GateSpec("SQR", pi_vec + zero_vec, (ancilla, mode)))
        circ.append(GateSpec("SQR", tuple(-p for p in pi_vec) + phi_vec,
                             (ancilla, mode)))

    if np.allclose(h_coeffs, h_coeffs[0]):
        tagged_snap(theta * h_coeffs[0] * f_coeffs[: cfg_i.dim], i_mode)
        return circ

    for k in range(cfg_j.dim):
        theta_k = theta * h_coeffs[k] if k < len(h_coeffs) else 0.0
        if theta_k == 0.0:
            continue
        # V_P U(-theta_k/2) V_P† U(theta_k/2) with P = |k><k|_j
        vp = [0.0] * cfg_j.dim
        vp[k] = math.pi
        sel = tuple(vp) + (0.0,) * cfg_j.dim
        sel_dag = tuple(-v for v in vp) + (0.0,) * cfg_j.dim
        tagged_snap(+0.5 * theta_k * f_coeffs[: cfg_i.dim], i_mode)
        circ.append(GateSpec("SQR", sel_dag, (ancilla, j_mode)))
        tagged_snap(-0.5 * theta_k * f_coeffs[: cfg_i.dim], i_mode)
        circ.append(GateSpec("SQR", sel, (ancilla, j_mode)))
    return circ
