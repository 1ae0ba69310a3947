"""Symmetric functions, divided differences and the Frobenius trace."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

from .poly import Poly, Registry, _norm


class NotPartiallySymmetric(ValueError):
    pass


@dataclass(frozen=True)
class SymFunSpec:
    family: str  # "elementary" | "complete"
    k: int
    vars: tuple  # variable names, in order


def elementary(k: int, gens: Sequence[Poly], registry: Registry | None = None) -> Poly:
    """e_k of the given polynomials (which need not be variables)."""
    reg = registry if registry is not None else gens[0].registry
    if k < 0 or k > len(gens):
        return Poly.zero(reg)
    # row[j] = e_j of the prefix processed so far
    row = [Poly.const(reg, 1)] + [Poly.zero(reg)] * k
    for g in gens:
        for j in range(k, 0, -1):
            row[j] = row[j] + g * row[j - 1]
    return row[k]


def complete(k: int, gens: Sequence[Poly], registry: Registry | None = None) -> Poly:
    """h_k of the given polynomials; h_0 = 1 and h_k = 0 for k < 0."""
    reg = registry if registry is not None else gens[0].registry
    if k < 0:
        return Poly.zero(reg)
    if not gens:
        return Poly.const(reg, 1 if k == 0 else 0)
    row = [Poly.const(reg, 1)] + [Poly.zero(reg)] * k
    for g in gens:
        # h_j(prefix + g) = h_j(prefix) + g * h_{j-1}(prefix + g)
        for j in range(1, k + 1):
            row[j] = row[j] + g * row[j - 1]
    return row[k]


def sym_poly(spec: SymFunSpec, registry: Registry) -> Poly:
    gens = [Poly.var(registry, name) for name in spec.vars]
    if spec.family == "elementary":
        return elementary(spec.k, gens, registry)
    if spec.family == "complete":
        return complete(spec.k, gens, registry)
    raise ValueError(f"unknown family {spec.family!r}")


def e(k: int, registry: Registry, names: Sequence[str]) -> Poly:
    return sym_poly(SymFunSpec("elementary", k, tuple(names)), registry)


def h(k: int, registry: Registry, names: Sequence[str]) -> Poly:
    return sym_poly(SymFunSpec("complete", k, tuple(names)), registry)


def xs(n: int, start: int = 1, prefix: str = "x") -> List[str]:
    return [f"{prefix}{i}" for i in range(start, n + 1)]


def swap_variables(p: Poly, a: str, b: str) -> Poly:
    ia, ib = p.registry.index(a), p.registry.index(b)
    out = {}
    for ex, c in p.terms.items():
        ex2 = list(ex)
        ex2[ia], ex2[ib] = ex[ib], ex[ia]
        out[tuple(ex2)] = c
    return Poly(p.registry, out, _trusted=True)


def divided_difference(i: int, p: Poly, prefix: str = "x") -> Poly:
    """(p - s_i p) / (x_i - x_{i+1}), computed term by term.

    For a term ``r * x_i^a x_j^b`` with ``a > b`` the quotient is
    ``r * x_i^b x_j^b * h_{a-b-1}(x_i, x_j)``; the case ``a < b`` is its
    negative with roles swapped.
    """
    ia = p.registry.index(f"{prefix}{i}")
    ib = p.registry.index(f"{prefix}{i + 1}")
    out: Dict[tuple, object] = {}
    for ex, c in p.terms.items():
        a, b = ex[ia], ex[ib]
        if a == b:
            continue
        sign = 1 if a > b else -1
        lo, gap = min(a, b), abs(a - b)
        for k in range(gap):
            ex2 = list(ex)
            ex2[ia] = lo + k
            ex2[ib] = lo + gap - 1 - k
            key = tuple(ex2)
            s = out.get(key, 0) + sign * c
            if s:
                out[key] = s
            else:
                del out[key]
    return Poly(p.registry, {k: _norm(v) for k, v in out.items()}, _trusted=True)


def is_symmetric_in(p: Poly, indices: Sequence[int], prefix: str = "x") -> bool:
    """Invariance under the adjacent transpositions (k, k+1) for k in indices."""
    return all(swap_variables(p, f"{prefix}{k}", f"{prefix}{k + 1}") == p for k in indices)


def demazure_trace(p: Poly, n: int, check: bool = True) -> Poly:
    """The composite d_1 o d_2 o ... o d_{n-1}: partially symmetric -> symmetric."""
    if check and not is_symmetric_in(p, range(1, n - 1)):
        raise NotPartiallySymmetric(f"not symmetric in x1..x{n - 1}: {p}")
    out = p
    for i in range(n - 1, 0, -1):
        out = divided_difference(i, out)
    if check and not is_symmetric_in(out, range(1, n)):
        raise AssertionError("trace of a partially symmetric polynomial is not symmetric")
    return out


def frobenius_pairing(f: Poly, g: Poly, n: int) -> Poly:
    for p in (f, g):
        if not is_symmetric_in(p, range(1, n - 1)):
            raise NotPartiallySymmetric(f"not symmetric in x1..x{n - 1}: {p}")
    return demazure_trace(f * g, n)


def pairing_matrix(n: int, registry: Registry | None = None) -> List[List[Poly]]:
    """Entries (f_i, g_j) for f_i = (-1)^i x_n^i and g_j = e_{n-1-j}(x_1..x_{n-1})."""
    reg = registry if registry is not None else Registry.standard(n, ("x",))
    xn = Poly.var(reg, f"x{n}")
    lower = xs(n - 1)
    rows = []
    for i in range(n):
        f = (xn ** i).scale((-1) ** i)
        rows.append([frobenius_pairing(f, e(n - 1 - j, reg, lower), n) for j in range(n)])
    return rows
