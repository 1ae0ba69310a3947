"""Koszul matrix factorizations, their moves, and the dg-module picture.

A factorization is a list of rows ``(a_i | b_i)`` over a base quotient ring.
Row ``i`` carries an odd generator theta of degree ``row_shift``; the
differential of ``f theta_I`` is

    d(f theta_I) = f d_A(theta_I) + (-1)^|I| theta_I f sum_k a_k theta_k

with ``d_A(theta_{i_1} ... theta_{i_m}) = sum_p (-1)^(p-1) b_{i_p} theta_{I - i_p}``
(rows ordered by label).  Squaring gives multiplication by the potential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from . import schubert
from .groebner import (
    IdealPresentation,
    QuotientPresentation,
    free_quotient,
    is_member,
    normal_form,
    quotient,
    reduce_many,
)
from .perm import Permutation
from .poly import Poly, Rational, Registry, TriDegree, ZERO_DEGREE, substitute, tridegree_of

THETA_DEGREE = TriDegree(-2, 1, 0)
DIFF_DEGREE = TriDegree(0, 1, 0)


class DegreeMismatch(ValueError):
    pass


class ExclusionPrecondition(ValueError):
    pass


@dataclass(frozen=True)
class Row:
    a: Poly
    b: Poly
    shift: TriDegree  # degree of the odd generator of this row
    label: int

    def to_json(self) -> dict:
        return {"label": self.label, "a": str(self.a), "b": str(self.b), "shift": self.shift.to_json()}


@dataclass(frozen=True)
class KoszulFactorization:
    base: QuotientPresentation
    rows: Tuple[Row, ...]
    global_shift: TriDegree = ZERO_DEGREE

    @property
    def registry(self) -> Registry:
        return self.base.registry

    def __post_init__(self):
        for r in self.rows:
            if r.a.registry != self.registry or r.b.registry != self.registry:
                raise ValueError("row entries must live in the base registry")
            _check_row_degrees(r)

    def row_index(self, label: int) -> int:
        for k, r in enumerate(self.rows):
            if r.label == label:
                return k
        raise KeyError(f"no row labelled {label}")

    def to_json(self) -> dict:
        return {
            "vars": list(self.registry.names),
            "base_ideal": [str(g) for g in self.base.ideal.generators],
            "rows": [r.to_json() for r in self.rows],
            "global_shift": self.global_shift.to_json(),
        }


def _check_row_degrees(r: Row):
    if not r.a.is_zero() and tridegree_of(r.a) + r.shift != DIFF_DEGREE:
        raise DegreeMismatch(f"a-entry {r.a} has the wrong degree for shift {r.shift}")
    if not r.b.is_zero() and tridegree_of(r.b) - r.shift != DIFF_DEGREE:
        raise DegreeMismatch(f"b-entry {r.b} has the wrong degree for shift {r.shift}")


def potential(K: KoszulFactorization) -> Poly:
    total = Poly.zero(K.registry)
    for r in K.rows:
        total = total + r.a * r.b
    return normal_form(total, K.base)


def _with_rows(K: KoszulFactorization, rows) -> KoszulFactorization:
    return KoszulFactorization(K.base, tuple(rows), K.global_shift)


def _as_poly(reg: Registry, lam) -> Poly:
    return lam.to_registry(reg) if isinstance(lam, Poly) else Poly.const(reg, lam)


def row_transform(K: KoszulFactorization, i: int, j: int, lam) -> KoszulFactorization:
    """Rows i, j (positions) become (a_i | b_i + lam b_j), (a_j - lam a_i | b_j)."""
    if i == j:
        raise ValueError("row_transform needs two distinct rows")
    lam = _as_poly(K.registry, lam)
    ri, rj = K.rows[i], K.rows[j]
    if not lam.is_zero() and tridegree_of(lam) != ri.shift - rj.shift:
        raise DegreeMismatch(f"lambda of degree {tridegree_of(lam)} does not match {ri.shift - rj.shift}")
    rows = list(K.rows)
    rows[i] = replace(ri, b=ri.b + lam * rj.b)
    rows[j] = replace(rj, a=rj.a - lam * ri.a)
    return _with_rows(K, rows)


def scale_row(K: KoszulFactorization, i: int, lam: Rational) -> KoszulFactorization:
    if lam == 0:
        raise ValueError("scale_row needs a nonzero scalar")
    from fractions import Fraction

    r = K.rows[i]
    rows = list(K.rows)
    rows[i] = replace(r, a=r.a.scale(lam), b=r.b.scale(Fraction(1) / Fraction(lam)))
    return _with_rows(K, rows)


def kill_entry(K: KoszulFactorization, i: int, side: str) -> KoszulFactorization:
    """Replace an entry lying in the base ideal by 0 (an equality in the base ring)."""
    r = K.rows[i]
    entry = r.a if side == "a" else r.b
    if not is_member(entry, K.base):
        raise ValueError(f"entry {entry} is not zero in the base ring")
    rows = list(K.rows)
    rows[i] = replace(r, **{side: Poly.zero(K.registry)})
    return _with_rows(K, rows)


def exclude_variable(K: KoszulFactorization, i: int, var: str) -> KoszulFactorization:
    """Drop a row (0 | var - p) and substitute var -> p everywhere else."""
    r = K.rows[i]
    reg = K.registry
    if var not in reg:
        raise ExclusionPrecondition(f"{var} is not a base variable")
    if not normal_form(r.a, K.base).is_zero():
        raise ExclusionPrecondition(f"row {i} has nonzero a-entry {r.a}")
    p = Poly.var(reg, var) - r.b
    if p.involves(var):
        raise ExclusionPrecondition(f"row {i} is not of the form (0 | {var} - p): b = {r.b}")
    if any(g.involves(var) for g in K.base.ideal.generators):
        raise ExclusionPrecondition(f"base ideal involves {var}")
    if potential(K).involves(var):
        raise ExclusionPrecondition(f"potential involves {var}")
    new_reg = reg.without([var])
    assign = {var: p.to_registry(new_reg)}

    def sub(f: Poly) -> Poly:
        return substitute(f, assign, new_reg)

    gens = [sub(g) for g in K.base.ideal.generators]
    base = quotient(IdealPresentation(new_reg, gens), K.base.shift) if gens else free_quotient(new_reg, K.base.shift)
    rows = [Row(sub(o.a), sub(o.b), o.shift, o.label) for k, o in enumerate(K.rows) if k != i]
    return KoszulFactorization(base, tuple(rows), K.global_shift)


# -- the factorization M_n ----------------------------------------------

def base_ring(n: int) -> QuotientPresentation:
    reg = schubert.xyu_registry(n)
    return quotient(IdealPresentation(reg, schubert.base_ideal_generators(n, reg)))


def twist_y(p: Poly, w: Permutation) -> Poly:
    reg = p.registry
    return substitute(p, {f"y{i}": Poly.var(reg, f"y{w(i)}") for i in range(1, w.n + 1)}, reg)


def build_Mn(n: int, twist: Optional[Permutation] = None, b_override: Mapping[int, Poly] | None = None) -> KoszulFactorization:
    """Rows (y_j - x_j | b_j), j = 1..n, over Q[x, y, u]/I_n with shift q^{-n(n-1)}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if twist is not None and twist.n != n:
        raise ValueError(f"permutation of {twist.n} points used with n={n}")
    base = base_ring(n)
    reg = base.registry
    rows = []
    for j in range(1, n + 1):
        a = schubert.p_poly(reg, j, j)
        b = schubert.b_poly(j, n).to_registry(reg)
        if b_override and j in b_override:
            b = b_override[j].to_registry(reg)
        if twist is not None:
            a, b = twist_y(a, twist), twist_y(b, twist)
        rows.append(Row(a, b, THETA_DEGREE, j))
    ell = n * (n - 1) // 2
    return KoszulFactorization(base, tuple(rows), TriDegree(-2 * ell, 0, 0))


@dataclass
class TraceStep:
    move: str
    params: dict
    factorization: KoszulFactorization
    potential: str

    def to_json(self) -> dict:
        return {"move": self.move, "params": self.params, "potential": self.potential, **self.factorization.to_json()}


def simplify(n: int, twist: Optional[Permutation] = None) -> List[TraceStep]:
    """Reduce M_n by folding every a_j into row 1, killing it and excluding u_1.

    Row j becomes (a_j | b_j - b_1); row 1 becomes (sum a_j | u_1), whose
    a-entry is e_1(y) - e_1(x) and so vanishes in the base ring.
    """
    K = build_Mn(n, twist)
    steps = [TraceStep("build", {"n": n, "perm": str(twist) if twist else None}, K, str(potential(K)))]
    if n == 1:
        return steps
    for j in range(2, n + 1):
        K = row_transform(K, K.row_index(j), K.row_index(1), -1)
        steps.append(TraceStep("row_transform", {"i": j, "j": 1, "lambda": -1}, K, str(potential(K))))
    K = kill_entry(K, K.row_index(1), "a")
    steps.append(TraceStep("kill_entry", {"row": 1, "side": "a"}, K, str(potential(K))))
    K = exclude_variable(K, K.row_index(1), "u1")
    steps.append(TraceStep("exclude_variable", {"row": 1, "var": "u1"}, K, str(potential(K))))
    return steps


# -- dg-module view ------------------------------------------------------

Subset = Tuple[int, ...]
Element = Dict[Subset, Poly]


def wedge_sign(I: Subset, k: int) -> int:
    """theta_I theta_k = sign * theta_{I + k} (0 if k in I)."""
    if k in I:
        return 0
    return -1 if sum(1 for i in I if i > k) % 2 else 1


def _insert(I: Subset, k: int) -> Subset:
    return tuple(sorted(I + (k,)))


@dataclass(frozen=True)
class DgModulePresentation:
    base: QuotientPresentation
    labels: Tuple[int, ...]
    dA: Mapping[int, Poly]  # theta_k -> even element
    dM: Mapping[int, Poly]  # d(1) = sum dM[k] theta_k
    shifts: Mapping[int, TriDegree]
    unit_shift: TriDegree

    @property
    def registry(self) -> Registry:
        return self.base.registry

    def subsets(self) -> List[Subset]:
        out = []
        for m in range(len(self.labels) + 1):
            out.extend(itertools.combinations(self.labels, m))
        return out

    def degree(self, I: Subset) -> TriDegree:
        d = self.unit_shift
        for i in I:
            d = d + self.shifts[i]
        return d

    def d(self, elem: Mapping[Subset, Poly]) -> Element:
        out: Element = {}

        def add(J, f):
            if f.is_zero():
                return
            g = out.get(J)
            s = f if g is None else g + f
            if s.is_zero():
                out.pop(J, None)
            else:
                out[J] = s

        for I, f in elem.items():
            for pos, i in enumerate(I):
                rest = I[:pos] + I[pos + 1:]
                term = f * self.dA[i]
                add(rest, term if pos % 2 == 0 else -term)
            sgn_I = -1 if len(I) % 2 else 1
            for k in self.labels:
                s = wedge_sign(I, k)
                if s:
                    add(_insert(I, k), (f * self.dM[k]).scale(sgn_I * s))
        return out

    def reduce(self, elem: Mapping[Subset, Poly]) -> Element:
        keys = list(elem)
        red = reduce_many([elem[k] for k in keys], self.base)
        return {k: r for k, r in zip(keys, red) if not r.is_zero()}


def to_dg_module(K: KoszulFactorization) -> DgModulePresentation:
    labels = tuple(r.label for r in K.rows)
    if list(labels) != sorted(labels):
        raise ValueError("rows must be ordered by label")
    return DgModulePresentation(
        base=K.base,
        labels=labels,
        dA={r.label: r.b for r in K.rows},
        dM={r.label: r.a for r in K.rows},
        shifts={r.label: r.shift for r in K.rows},
        unit_shift=K.global_shift,
    )


def dg_square_residual(D: DgModulePresentation) -> Dict[Subset, Element]:
    """d^2 on every theta-monomial generator, reduced in the base; nonzero entries only."""
    one = Poly.const(D.registry, 1)
    out = {}
    for I in D.subsets():
        r = D.reduce(D.d(D.d({I: one})))
        if r:
            out[I] = r
    return out


def perturbed_Mn(n: int) -> KoszulFactorization:
    """M_n with the a_{2n} summand of b_n doubled (a deliberately broken control).

    Only broken for n >= 3: at n = 2 the extra term is a multiple of
    p_12 p_22, which lies in I_2.
    """
    if n < 3:
        raise ValueError("perturbation needs n >= 3")
    reg = schubert.xyu_registry(n)
    b = schubert.b_poly(n, n) + Poly.var(reg, "u2") * schubert.a_poly(2, n, n, reg)
    return build_Mn(n, b_override={n: b})


def phi_chain_map_residual(n: int, multiplier: Poly | None = None) -> Dict[Subset, Element]:
    """d_{M_n} phi - phi d_{M_{n-1}} on generators of M_{n-1}, reduced mod I_n.

    phi(theta_I 1) = theta_I P 1 with P = prod_{i<n} (y_i - x_n) by default.
    """
    if n < 2:
        raise ValueError("phi needs n >= 2")
    big = to_dg_module(build_Mn(n))
    reg = big.registry
    P = multiplier.to_registry(reg) if multiplier is not None else schubert.phi_multiplier(n, reg)
    small_K = build_Mn(n - 1)
    # the differential of M_{n-1} uses only x, y, u with indices < n
    small = DgModulePresentation(
        base=big.base,
        labels=tuple(range(1, n)),
        dA={k: small_K.rows[k - 1].b.to_registry(reg) for k in range(1, n)},
        dM={k: small_K.rows[k - 1].a.to_registry(reg) for k in range(1, n)},
        shifts={k: THETA_DEGREE for k in range(1, n)},
        unit_shift=small_K.global_shift,
    )
    out = {}
    for I in small.subsets():
        lhs = big.d({I: P})
        rhs = {J: f * P for J, f in small.d({I: Poly.const(reg, 1)}).items()}
        diff = dict(lhs)
        for J, f in rhs.items():
            diff[J] = diff.get(J, Poly.zero(reg)) - f
        r = big.reduce(diff)
        if r:
            out[I] = r
    return out
