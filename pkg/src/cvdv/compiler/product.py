"""Trotter-Suzuki product formulas and BCH group-commutator plans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import BadArgument, NotHermitian
from ..fock import OperatorMatrix, expm_hermitian


@dataclass
class ProductPlan:
    """Ordered exponential factors approximating a target unitary.

    ``factors`` is a list of (hermitian generator, tau) realizing
    exp(-i g tau), listed in application order (first entry acts first).
    ``certificate`` bounds the operator-norm error of the plan.
    """

    factors: list
    certificate: float
    support: tuple
    description: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def unitary(self) -> np.ndarray:
        d = self.factors[0][0].shape[0]
        u = np.eye(d, dtype=complex)
        for g, tau in self.factors:
            key = (id(g), tau)
            if key not in self._cache:
                self._cache[key] = expm_hermitian(g, tau)
            u = self._cache[key] @ u
        return u

    def certificate_dict(self) -> dict:
        return {"error_bound": self.certificate, "n_factors": len(self.factors),
                "target": self.description}


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _require_hermitian(*ops):
    for op in ops:
        if not op.hermitian_flag:
            raise NotHermitian("product formulas need certified Hermitian generators")
    if len({op.support for op in ops}) != 1:
        raise BadArgument("generators must share a support block (embed first)")


def trotter_sum(a: OperatorMatrix, b: OperatorMatrix, t: float, r: int,
                order: int = 1) -> ProductPlan:
    """Plan for exp(-i (A+B) t) by first- or second-order splitting.

    Order 1: (e^{-iAt/r} e^{-iBt/r})^r, error (t^2/2r) ||[A,B]||.
    Order 2: symmetric Strang splitting, error with the standard
    nested-commutator constants (t^3/r^2).
    """
    _require_hermitian(a, b)
    if r < 1 or order not in (1, 2):
        raise BadArgument("need r >= 1 and order in {1, 2}")
    am, bm = a.matrix, b.matrix
    cab = _comm(am, bm)
    if order == 1:
        cert = (t * t / (2.0 * r)) * np.linalg.norm(cab, 2)
        step = [(bm, t / r), (am, t / r)]
        factors = step * r
    else:
        caab = np.linalg.norm(_comm(am, cab), 2)
        cbab = np.linalg.norm(_comm(bm, cab), 2)
        cert = (abs(t) ** 3 / r ** 2) * (cbab / 12.0 + caab / 24.0)
        step = [(am, t / (2 * r)), (bm, t / r), (am, t / (2 * r))]
        factors = step * r
    return ProductPlan(factors, float(cert), a.support,
                       description=f"exp(-i(A+B)t), order {order}, r={r}")


def bch_commutator(a: OperatorMatrix, b: OperatorMatrix, t: float,
                   r: int = 1) -> ProductPlan:
    """Plan for exp(-t^2 [A,B]) from group commutators.

    One group commutator e^{itA} e^{itB} e^{-itA} e^{-itB} ~ e^{-t^2[A,B]}
    with error O(t^3); r repetitions at t/sqrt(r) reduce it to O(t^3/sqrt(r)).
    """
    _require_hermitian(a, b)
    if r < 1:
        raise BadArgument("need r >= 1")
    am, bm = a.matrix, b.matrix
    ts = t / math.sqrt(r)
    # application order (rightmost factor of e^{itA}e^{itB}e^{-itA}e^{-itB} first)
    step = [(bm, ts), (am, ts), (bm, -ts), (am, -ts)]
    factors = step * r
    na, nb = np.linalg.norm(am, 2), np.linalg.norm(bm, 2)
    cert = (abs(t) ** 3 / math.sqrt(r)) * na * nb * (na + nb)
    return ProductPlan(factors, float(cert), a.support,
                       description=f"exp(-t^2 [A,B]), r={r}")


def plan_infidelity(plan: ProductPlan, target: np.ndarray, projector=None) -> float:
    """1 - projected Hilbert-Schmidt fidelity between the plan and a target."""
    from ..fock import trace_fidelity

    return 1.0 - trace_fidelity(target, plan.unitary(), projector)
