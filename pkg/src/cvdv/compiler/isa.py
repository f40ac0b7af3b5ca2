"""Instruction-set profiles and circuit validation against them."""

from __future__ import annotations

from dataclasses import dataclass

from ..circuits import Circuit, ClassicalBranch
from ..errors import BadParamDomain
from ..gates import GateSpec

GAUSSIAN_CORE = frozenset({"D", "S", "BS", "TMS"})


@dataclass(frozen=True)
class IsaProfile:
    """A named minimal gate set with optional per-gate parameter constraints."""

    name: str
    allowed: frozenset
    gen_squeeze_order: int | None = None  # constraint for GenSqueeze, if allowed

    def permits(self, spec: GateSpec):
        """Return None if allowed, else a human-readable violation string."""
        if spec.name not in self.allowed:
            return f"{spec.name} not in {self.name} instruction set"
        if spec.name == "GenSqueeze" and self.gen_squeeze_order is not None:
            order = int(spec.params[1].real if isinstance(spec.params[1], complex)
                        else spec.params[1])
            if order != self.gen_squeeze_order:
                return (f"GenSqueeze order {order} outside {self.name} "
                        f"(requires {self.gen_squeeze_order})")
        return None


PROFILES = {
    "Gaussian": IsaProfile("Gaussian", GAUSSIAN_CORE),
    "Cubic": IsaProfile("Cubic", GAUSSIAN_CORE | {"GenSqueeze"}, gen_squeeze_order=3),
    "Quartic": IsaProfile("Quartic", GAUSSIAN_CORE | {"GenSqueeze"}, gen_squeeze_order=4),
    "SNAP": IsaProfile("SNAP", frozenset({"D", "SNAP", "BS", "TMS"})),
    "PhaseSpace": IsaProfile("PhaseSpace", frozenset({"CD", "Rphi", "BS"})),
    "FockSpace": IsaProfile("FockSpace", frozenset({"SQR", "D", "BS"})),
    "Sideband": IsaProfile("Sideband", frozenset({"Rphi", "JC", "BS"})),
}


def profile(name: str) -> IsaProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise BadParamDomain(f"unknown ISA {name!r}; known: {sorted(PROFILES)}") from None


def validate(circ: Circuit, isa: IsaProfile | str):
    """Check every gate against the ISA; returns a list of violations (empty = ok).

    Each violation is (op_index, gate_name, reason).  Measurement, reset, and
    classical branching are control flow, not gates, and always pass.
    """
    if isinstance(isa, str):
        isa = profile(isa)
    out = []

    def walk(ops, base):
        for idx, node in enumerate(ops):
            if isinstance(node, GateSpec):
                reason = isa.permits(node)
                if reason:
                    out.append((base + (idx,), node.name, reason))
            elif isinstance(node, ClassicalBranch):
                walk(node.if_one, base + (idx, "if_one"))
                walk(node.if_zero, base + (idx, "if_zero"))

    walk(circ.ops, ())
    return out
