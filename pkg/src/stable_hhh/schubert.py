"""The polynomial families a_ij(x, y), z_{m,n}, b_j and the v_kk expansion.

Throughout, ``p_ij = y_i - x_j``.  The sums defining ``a_ij`` and ``z_{m,n}``
run over *increasing* index sequences; this is the form that reproduces the
tabulated values a_22 = p_12, a_33 = p_13 p_23, a_34 = p_13 p_23 + p_13 p_34
+ p_24 p_34.

The a_in are, up to sign, double Schubert polynomials evaluated at
(w_0(x), y); that identification is not used anywhere here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .perm import Permutation
from .poly import Poly, Registry, substitute
from .symcomb import complete, elementary


def xy_registry(n: int) -> Registry:
    return Registry.standard(n, ("x", "y"))


def xyu_registry(n: int) -> Registry:
    return Registry.standard(n, ("x", "y", "u"))


def xu_registry(n: int) -> Registry:
    return Registry.standard(n, ("x", "u"))


def x_registry(n: int) -> Registry:
    return Registry.standard(n, ("x",))


def p_poly(reg: Registry, i: int, j: int) -> Poly:
    return Poly.var(reg, f"y{i}") - Poly.var(reg, f"x{j}")


def _check(i: int, j: int, n: int):
    if not (1 <= i <= j <= n):
        raise ValueError(f"index out of range: need 1 <= {i} <= {j} <= {n}")


@lru_cache(maxsize=None)
def _a_cached(i: int, j: int, n: int) -> Poly:
    reg = xy_registry(n)
    if i == 1:
        return Poly.const(reg, 1)
    total = Poly.zero(reg)
    for gamma in itertools.combinations(range(1, j), i - 1):
        term = Poly.const(reg, 1)
        for k, g in enumerate(gamma, start=1):
            term = term * p_poly(reg, g, g + i - k)
        total = total + term
    return total


def a_poly(i: int, j: int, n: int, registry: Registry | None = None) -> Poly:
    """a_ij(x, y): sum over 1 <= g_1 < ... < g_{i-1} <= j-1 of prod_k p_{g_k, g_k+i-k}."""
    _check(i, j, n)
    p = _a_cached(i, j, n)
    return p if registry is None else p.to_registry(registry)


@lru_cache(maxsize=None)
def z_poly_sequences(m: int, n: int) -> Poly:
    """Sum over 1 <= g_1 < ... < g_m <= n of prod_i p_{g_i, g_i+m-i}."""
    _check(m, m, n)
    reg = xy_registry(n)
    total = Poly.zero(reg)
    for gamma in itertools.combinations(range(1, n + 1), m):
        term = Poly.const(reg, 1)
        for i, g in enumerate(gamma, start=1):
            term = term * p_poly(reg, g, g + m - i)
        total = total + term
    return total


@lru_cache(maxsize=None)
def z_poly_symfun(m: int, n: int) -> Poly:
    """sum_{i+j=m} (-1)^j e_i(y_1..y_n) h_j(x_m..x_n)."""
    _check(m, m, n)
    reg = xy_registry(n)
    ys = [Poly.var(reg, f"y{i}") for i in range(1, n + 1)]
    tail = [Poly.var(reg, f"x{i}") for i in range(m, n + 1)]
    total = Poly.zero(reg)
    for j in range(m + 1):
        total = total + (elementary(m - j, ys, reg) * complete(j, tail, reg)).scale((-1) ** j)
    return total


def aij_relation(i: int, n: int) -> Poly:
    """sum_{j=i}^n a_ij (x_j - y_j); lies in I_n."""
    reg = xy_registry(n)
    total = Poly.zero(reg)
    for j in range(i, n + 1):
        total = total + a_poly(i, j, n) * (Poly.var(reg, f"x{j}") - Poly.var(reg, f"y{j}"))
    return total


def twist_assignment(w: Permutation, target: Registry) -> Dict[str, Poly]:
    """y_i -> x_{w(i)}: twist by w and then identify left and right actions."""
    return {f"y{i}": Poly.var(target, f"x{w(i)}") for i in range(1, w.n + 1)}


def specialize(p: Poly, w: Permutation, target: Registry) -> Poly:
    return substitute(p, twist_assignment(w, target), target)


def b_poly(j: int, n: int, twist: Permutation | None = None) -> Poly:
    """b_j = sum_{i<=j} u_i a_ij(x, y); with a twist w, its image under y_i -> x_{w(i)}."""
    _check(j, j, n)
    reg = xyu_registry(n)
    total = Poly.zero(reg)
    for i in range(1, j + 1):
        total = total + Poly.var(reg, f"u{i}") * a_poly(i, j, n, reg)
    if twist is None:
        return total
    if twist.n != n:
        raise ValueError(f"permutation of {twist.n} points used with n={n}")
    return specialize(total, twist, xu_registry(n))


@dataclass(frozen=True)
class AijTable:
    n: int
    entries: Dict[Tuple[int, int], Poly]

    @classmethod
    def build(cls, n: int) -> "AijTable":
        return cls(n, {(i, j): a_poly(i, j, n) for j in range(1, n + 1) for i in range(1, j + 1)})

    def __getitem__(self, ij: Tuple[int, int]) -> Poly:
        return self.entries[ij]


def vkk_words(k: int) -> List[Tuple[str, Poly, int]]:
    """Expand v_kk by repeatedly applying v_ab = v_{a-1,b-1} - (x_{a-1} - x_b) v_{a-1,b}.

    Returns (word, weight, j) per branch, where the branch ends at v_{1,j}.
    The letter 'L' takes the first summand, 'R' the second.
    """
    reg = x_registry(k)
    branches = [("", Poly.const(reg, 1), k, k)]
    for _ in range(k - 1):
        nxt = []
        for word, wt, a, b in branches:
            nxt.append((word + "L", wt, a - 1, b - 1))
            q = Poly.var(reg, f"x{a - 1}") - Poly.var(reg, f"x{b}")
            nxt.append((word + "R", -(wt * q), a - 1, b))
        branches = nxt
    return [(word, wt, b) for word, wt, a, b in branches]


def boltzmann_weight(word: str, k: int) -> Poly:
    """Closed-form weight: the m-th 'R', at position i, contributes -(x_{k-i} - x_{k-i+m})."""
    reg = x_registry(k)
    wt = Poly.const(reg, 1)
    m = 0
    for i, letter in enumerate(word, start=1):
        if letter == "R":
            m += 1
            wt = -(wt * (Poly.var(reg, f"x{k - i}") - Poly.var(reg, f"x{k - i + m}")))
    return wt


def vkk_expansion(k: int, n: int) -> List[Poly]:
    """Coefficients c_1..c_k (in Q[x_1..x_n]) with v_kk = sum_i c_i v_{1i}."""
    if not 2 <= k <= n:
        raise ValueError(f"index out of range: need 2 <= {k} <= {n}")
    reg = x_registry(n)
    coeffs = [Poly.zero(reg) for _ in range(k)]
    for _word, wt, j in vkk_words(k):
        coeffs[j - 1] = coeffs[j - 1] + wt.to_registry(reg)
    return coeffs


def diagonal(p: Poly, n: int) -> Poly:
    """f(x, y) -> f(x, x)."""
    reg = x_registry(n)
    return specialize(p, Permutation.identity(n), reg)


def orbit_constancy_failures(w: Permutation) -> List[Tuple[int, int, int]]:
    """Triples (i, j1, j2) where a_{i,j}(x, w(x)) differs across one w-orbit.

    Entries with i > j are read as zero.
    """
    n = w.n
    reg = x_registry(n)
    bad = []
    for cyc in w.cycles():
        members = sorted(cyc)
        for i in range(1, n + 1):
            vals = []
            for j in members:
                vals.append(specialize(a_poly(i, j, n), w, reg) if i <= j else Poly.zero(reg))
            for j1, v1, j2, v2 in zip(members, vals, members[1:], vals[1:]):
                if v1 != v2:
                    bad.append((i, j1, j2))
    return bad


def product_relation(n: int) -> Poly:
    """prod_{i=1}^n (y_i - x_n); lies in I_n."""
    reg = xy_registry(n)
    out = Poly.const(reg, 1)
    for i in range(1, n + 1):
        out = out * p_poly(reg, i, n)
    return out


def phi_multiplier(n: int, registry: Registry) -> Poly:
    """prod_{i=1}^{n-1} (y_i - x_n)."""
    out = Poly.const(registry, 1)
    for i in range(1, n):
        out = out * (Poly.var(registry, f"y{i}") - Poly.var(registry, f"x{n}"))
    return out


def base_ideal_generators(n: int, registry: Registry | None = None) -> List[Poly]:
    """e_k(y) - e_k(x), k = 1..n (the ideal I_n)."""
    reg = registry if registry is not None else xy_registry(n)
    xsv = [Poly.var(reg, f"x{i}") for i in range(1, n + 1)]
    ysv = [Poly.var(reg, f"y{i}") for i in range(1, n + 1)]
    return [elementary(k, ysv, reg) - elementary(k, xsv, reg) for k in range(1, n + 1)]


