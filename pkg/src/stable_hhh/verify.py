"""Aggregated identity checks, shared by the CLI and the test-suite."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, List

from . import schubert
from .groebner import IdealPresentation, is_member, quotient
from .mf import build_Mn, dg_square_residual, phi_chain_map_residual, to_dg_module
from .perm import partitions, special_form
from .poly import Poly
from .symcomb import pairing_matrix


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


def _timed(name: str, fn: Callable[[], tuple]) -> CheckResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    return CheckResult(name, ok, detail, time.perf_counter() - t0)


def _In(n: int):
    reg = schubert.xy_registry(n)
    return quotient(IdealPresentation(reg, schubert.base_ideal_generators(n, reg)))


def check_aij_relations(n: int) -> CheckResult:
    def run():
        Q = _In(n)
        bad = [i for i in range(1, n + 1) if not is_member(schubert.aij_relation(i, n), Q)]
        return not bad, f"failing i: {bad}" if bad else f"{n} relations in I_{n}"

    return _timed(f"aij_relation n={n}", run)


def check_z_relations(n: int) -> CheckResult:
    def run():
        Q = _In(n)
        bad = []
        for m in range(1, n + 1):
            zs, zf = schubert.z_poly_sequences(m, n), schubert.z_poly_symfun(m, n)
            if zs != zf or not is_member(zs, Q):
                bad.append(m)
        return not bad, f"failing m: {bad}" if bad else f"z_(m,{n}) agree and lie in I_{n}"

    return _timed(f"z_relations n={n}", run)


def check_frobenius(n: int) -> CheckResult:
    def run():
        M = pairing_matrix(n)
        bad = []
        for i, row in enumerate(M):
            for j, p in enumerate(row):
                want = 1 if i == j else 0
                if not (p.is_constant() and p.constant_term() == want):
                    bad.append((i, j))
        return not bad, f"entries off the identity: {bad}" if bad else f"{n}x{n} identity"

    return _timed(f"frobenius_pairing n={n}", run)


def check_dg_square(n: int) -> CheckResult:
    def run():
        bad = []
        for ct in partitions(n):
            if dg_square_residual(to_dg_module(build_Mn(n, special_form(ct)))):
                bad.append(ct)
        return not bad, f"nonzero d^2 for cycle types {bad}" if bad else "d^2 = 0 for every cycle type"

    return _timed(f"dg_square n={n}", run)


def check_phi(n: int) -> CheckResult:
    def run():
        res = phi_chain_map_residual(n)
        return not res, f"nonzero on {sorted(res)}" if res else "chain map"

    return _timed(f"phi_chain_map n={n}", run)


def identity_suite(n_max: int, dg_max: int = 5, phi_max: int = 4) -> List[CheckResult]:
    """The algebraic identity checks for every size up to ``n_max``."""
    out: List[CheckResult] = []
    for n in range(1, n_max + 1):
        out.append(check_aij_relations(n))
        out.append(check_z_relations(n))
        out.append(check_frobenius(n))
    for n in range(1, min(n_max, dg_max) + 1):
        out.append(check_dg_square(n))
    for n in range(2, min(n_max, phi_max) + 1):
        out.append(check_phi(n))
    return out
