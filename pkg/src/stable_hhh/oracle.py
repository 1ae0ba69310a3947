"""Brute-force homology of graded Koszul complexes, one bidegree at a time.

The complex is ``base (x) Lambda[theta]`` with the differential of
:mod:`stable_hhh.mf`.  For each (q, t) the chain group is finite
dimensional; homology is ``dim C - rank d_out - rank d_in`` with ranks from
exact fraction-free elimination over the integers.

When every entry of the differential is invariant under the simultaneous
translation x_i -> x_i + s, the complex is the reduced complex (last x set
to 0) tensored with Q[x_last], and the full dimensions are partial sums of
the reduced ones.  This is checked, not assumed.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .groebner import ModuleGB, QuotientPresentation, Window, _basis_of, _reduce, standard_counts
from .mf import KoszulFactorization, to_dg_module
from .poly import Exps, Poly, Registry, TriDegree, ZERO_DEGREE, substitute

log = logging.getLogger(__name__)

DimensionTable = Dict[TriDegree, int]


class InfiniteSlice(ValueError):
    pass


class WindowTooLarge(RuntimeError):
    pass


DEFAULT_MAX_SLICE = 400_000


# -- exact rank ---------------------------------------------------------------

def _content(v: Mapping[int, int]) -> int:
    g = 0
    for c in v.values():
        g = math.gcd(g, c)
        if g == 1:
            return 1
    return g


def exact_rank(columns: Iterable[Mapping[int, object]]) -> int:
    """Rank over Q of a sparse matrix given as columns {row: coefficient}.

    Columns are scaled to primitive integer vectors and brought to echelon
    form incrementally, eliminating the smallest row index first.
    """
    pivots: Dict[int, Dict[int, int]] = {}
    for col in columns:
        if not col:
            continue
        den = 1
        for c in col.values():
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        v = {r: int(c * den) for r, c in col.items() if c}
        while v:
            r = min(v)
            p = pivots.get(r)
            if p is None:
                g = _content(v)
                if g > 1:
                    v = {k: c // g for k, c in v.items()}
                if v[r] < 0:
                    v = {k: -c for k, c in v.items()}
                pivots[r] = v
                break
            a, b = p[r], v[r]
            if b % a == 0:
                f = b // a
                for k, c in p.items():
                    s = v.get(k, 0) - f * c
                    if s:
                        v[k] = s
                    else:
                        del v[k]
            else:
                g = math.gcd(a, b)
                a1, b1 = a // g, b // g
                w = {k: a1 * c for k, c in v.items()}
                for k, c in p.items():
                    s = w.get(k, 0) - b1 * c
                    if s:
                        w[k] = s
                    else:
                        del w[k]
                g = _content(w) if w else 1
                v = {k: c // g for k, c in w.items()} if g > 1 else w
    return len(pivots)


def matmul_is_zero(outer: List[Dict[int, object]], inner: List[Dict[int, object]]) -> bool:
    """outer o inner == 0, with both given as column lists."""
    for col in inner:
        acc: Dict[int, object] = {}
        for r, c in col.items():
            for r2, c2 in outer[r].items():
                acc[r2] = acc.get(r2, 0) + c * c2
        if any(acc.values()):
            return False
    return True


# -- monomial enumeration -----------------------------------------------------

class MonomialEnumerator:
    """All monomials of a registry in a given tri-degree, in lexicographic order."""

    def __init__(self, registry: Registry):
        self.registry = registry
        self.bounded, self.pure = [], []
        for i, v in enumerate(registry.variables):
            d = v.degree
            if d.t < 0 or d.a < 0:
                raise InfiniteSlice(f"variable {v.name} has degree {d}")
            if d.t > 0 or d.a > 0:
                self.bounded.append(i)
            elif d.q > 0:
                self.pure.append(i)
            else:
                raise InfiniteSlice(f"variable {v.name} of degree {d} gives infinite slices")
        self._cache: Dict[TriDegree, List[Exps]] = {}
        self._bounded_cache: Dict[Tuple[int, int], List[Tuple[Exps, int]]] = {}

    def _bounded_part(self, t: int, a: int) -> List[Tuple[Exps, int]]:
        """(exponents, q) for bounded-variable monomials of exact (t, a)."""
        key = (t, a)
        if key in self._bounded_cache:
            return self._bounded_cache[key]
        degs = [self.registry.variables[i].degree for i in self.bounded]
        out = []

        def rec(idx, e, tt, aa, qq):
            if idx == len(degs):
                if tt == t and aa == a:
                    out.append((tuple(e), qq))
                return
            d = degs[idx]
            k = 0
            while tt + k * d.t <= t and aa + k * d.a <= a:
                e.append(k)
                rec(idx + 1, e, tt + k * d.t, aa + k * d.a, qq + k * d.q)
                e.pop()
                k += 1
                if d.t == 0 and d.a == 0:
                    break

        rec(0, [], 0, 0, 0)
        self._bounded_cache[key] = out
        return out

    def monomials(self, deg: TriDegree) -> List[Exps]:
        if deg in self._cache:
            return self._cache[deg]
        nv = len(self.registry)
        qdeg = [self.registry.variables[i].degree.q for i in self.pure]
        out: List[Exps] = []
        if deg.t >= 0 and deg.a >= 0:
            for bexp, bq in self._bounded_part(deg.t, deg.a):
                rest = deg.q - bq
                for pexp in _compositions(rest, qdeg):
                    e = [0] * nv
                    for i, k in zip(self.bounded, bexp):
                        e[i] = k
                    for i, k in zip(self.pure, pexp):
                        e[i] = k
                    out.append(tuple(e))
        out.sort()
        self._cache[deg] = out
        return out


def _compositions(total: int, weights: Sequence[int]) -> List[Tuple[int, ...]]:
    """Nonnegative k with sum k_i w_i == total (weights positive)."""
    if total < 0:
        return []
    if not weights:
        return [()] if total == 0 else []
    out = []
    w = weights[0]
    for k in range(total // w + 1):
        for rest in _compositions(total - k * w, weights[1:]):
            out.append((k,) + rest)
    return out


# -- the complex ----------------------------------------------------------------

@dataclass
class GradedComplexSlice:
    bidegree: TriDegree
    bases: Tuple[list, list, list]  # C(t-1), C(t), C(t+1) at this q
    d_in: List[Dict[int, object]]
    d_out: List[Dict[int, object]]

    def d_squared_zero(self) -> bool:
        return matmul_is_zero(self.d_out, self.d_in)


class SliceComplex:
    """Bidegree slices of the complex attached to a factorization (a = 0 throughout)."""

    def __init__(self, K: KoszulFactorization, max_slice: int = DEFAULT_MAX_SLICE):
        self.K = K
        self.D = to_dg_module(K)
        self.base = K.base
        self.registry = K.registry
        self.enum = MonomialEnumerator(self.registry)
        self.max_slice = max_slice
        self._reducer = _basis_of(self.base) if self.base.groebner else None
        self.subsets = self.D.subsets()
        one = Poly.const(self.registry, 1)
        self.templates = {I: [(J, f.terms) for J, f in self.D.d({I: one}).items()] for I in self.subsets}
        self.sub_deg = {I: self.D.degree(I) for I in self.subsets}
        self._basis_cache: Dict[TriDegree, list] = {}
        self._rank_cache: Dict[TriDegree, int] = {}
        self._lead_cache: Dict[TriDegree, list] = {}

    def _standard(self, e: Exps) -> bool:
        if self._reducer is None:
            return True
        return self._reducer.find_reducer(e) < 0

    def basis(self, deg: TriDegree) -> list:
        """Pairs (monomial, subset) of total degree ``deg``, in a fixed order."""
        if deg in self._basis_cache:
            return self._basis_cache[deg]
        out = []
        for I in self.subsets:
            for e in self.enum.monomials(deg - self.sub_deg[I]):
                if self._standard(e):
                    out.append((e, I))
        if len(out) > self.max_slice:
            raise WindowTooLarge(f"slice {deg} has dimension {len(out)} > {self.max_slice}")
        self._basis_cache[deg] = out
        return out

    def matrix(self, deg: TriDegree) -> List[Dict[int, object]]:
        """Columns of d: C(deg) -> C(deg + t)."""
        src = self.basis(deg)
        tgt_deg = TriDegree(deg.q, deg.t + 1, deg.a)
        index = {b: k for k, b in enumerate(self.basis(tgt_deg))}
        cols = []
        for e, I in src:
            acc: Dict[Tuple[Exps, tuple], object] = {}
            for J, terms in self.templates[I]:
                if self._reducer is not None:
                    prod = {tuple(a + b for a, b in zip(e, f)): c for f, c in terms.items()}
                    prod = _reduce(prod, self._reducer)
                    items = prod.items()
                else:
                    items = ((tuple(a + b for a, b in zip(e, f)), c) for f, c in terms.items())
                for f, c in items:
                    key = (f, J)
                    acc[key] = acc.get(key, 0) + c
            col = {}
            for key, c in acc.items():
                if c:
                    col[index[key]] = c
            cols.append(col)
        return cols

    def rank_out(self, deg: TriDegree) -> int:
        if deg not in self._rank_cache:
            self._rank_cache[deg] = exact_rank(self.matrix(deg)) if self.basis(deg) else 0
        return self._rank_cache[deg]

    def homology(self, deg: TriDegree) -> int:
        dim = len(self.basis(deg))
        if dim == 0:
            return 0
        prev = TriDegree(deg.q, deg.t - 1, deg.a)
        return dim - self.rank_out(deg) - self.rank_out(prev)

    def slice(self, deg: TriDegree) -> GradedComplexSlice:
        prev = TriDegree(deg.q, deg.t - 1, deg.a)
        nxt = TriDegree(deg.q, deg.t + 1, deg.a)
        return GradedComplexSlice(deg, (self.basis(prev), self.basis(deg), self.basis(nxt)), self.matrix(prev), self.matrix(deg))

    def min_q(self, t: int) -> int:
        """A lower bound for the q-degree of anything at homological degree t."""
        worst = 0.0
        for v in self.registry.variables:
            if v.degree.t > 0:
                worst = min(worst, v.degree.q / v.degree.t)
        for I in self.subsets:
            for i in I:
                s = self.D.shifts[i]
                worst = min(worst, s.q / s.t)
        return self.K.global_shift.q + math.floor(worst * t) - 2


# -- translation reduction ---------------------------------------------------

def x_variables(reg: Registry) -> List[str]:
    return [v.name for v in reg.variables if v.kind == "x"]


def translation_invariant(K: KoszulFactorization) -> bool:
    if K.base.ideal.generators:
        return False
    xs = x_variables(K.registry)
    if len(xs) < 2:
        return False
    for r in K.rows:
        for f in (r.a, r.b):
            total = Poly.zero(K.registry)
            for x in xs:
                total = total + f.derivative(x)
            if not total.is_zero():
                return False
    return True


def translation_reduce(K: KoszulFactorization) -> KoszulFactorization:
    from .groebner import free_quotient
    from .mf import Row

    last = x_variables(K.registry)[-1]
    reg = K.registry.without([last])
    assign = {last: Poly.zero(reg)}
    rows = tuple(Row(substitute(r.a, assign, reg), substitute(r.b, assign, reg), r.shift, r.label) for r in K.rows)
    return KoszulFactorization(free_quotient(reg), rows, K.global_shift)


# -- homology through graded module Groebner bases ----------------------------

class ModuleComplex:
    """The same complex, one homological degree at a time, as free Q[x]-modules.

    C_t is free over the ring of the degree-q^2 variables, with one basis
    element per (monomial in the t-carrying variables, theta subset).  The
    rank of d in q-degree q is dim C_{t+1}(q) minus the dimension of the
    cokernel, read off the lead terms of a module Groebner basis of the image.
    """

    def __init__(self, K: KoszulFactorization):
        if K.base.ideal.generators:
            raise ValueError("module method needs a free base ring")
        self.K = K
        self.D = to_dg_module(K)
        reg = K.registry
        self.enum = MonomialEnumerator(reg)
        self.pure, self.bounded = self.enum.pure, self.enum.bounded
        if any(reg.variables[i].degree != TriDegree(2, 0, 0) for i in self.pure):
            raise ValueError("module method needs every t-free variable in degree q^2")
        self.subsets = self.D.subsets()
        one = Poly.const(reg, 1)
        self.templates = {I: [(J, f.terms) for J, f in self.D.d({I: one}).items()] for I in self.subsets}
        self.sub_deg = {I: self.D.degree(I) for I in self.subsets}
        self._comps: Dict[int, list] = {}
        self._cok: Dict[Tuple[int, int], Dict[int, int]] = {}

    def components(self, t: int) -> List[Tuple[Exps, tuple, int]]:
        """(bounded exponents, subset, q-weight/2) for C_t."""
        if t in self._comps:
            return self._comps[t]
        out = []
        if t >= 0:
            for I in self.subsets:
                sd = self.sub_deg[I]
                if sd.t > t:
                    continue
                for bexp, bq in self.enum._bounded_part(t - sd.t, 0 - sd.a):
                    q = bq + sd.q
                    if q % 2:
                        raise ValueError("odd q-degree component")
                    out.append((bexp, I, q // 2))
        self._comps[t] = out
        return out

    def chain_dim(self, t: int, q: int) -> int:
        if q % 2:
            return 0
        k = len(self.pure)
        total = 0
        for _, _, w in self.components(t):
            d = q // 2 - w
            if d >= 0:
                total += math.comb(d + k - 1, k - 1)
        return total

    def _split(self, e: Exps):
        return tuple(e[i] for i in self.bounded), tuple(e[i] for i in self.pure)

    def cokernel(self, t: int, max_half: int) -> Dict[int, int]:
        """Dimensions of C_t / d(C_{t-1}) in q = 2k, k <= max_half (keys are q)."""
        key = (t, max_half)
        if key in self._cok:
            return self._cok[key]
        comps = self.components(t)
        index = {(b, I): c for c, (b, I, _) in enumerate(comps)}
        weights = [w for _, _, w in comps]
        gens = []
        for bexp, I, _ in self.components(t - 1):
            v: Dict[tuple, object] = {}
            for J, terms in self.templates[I]:
                for f, c in terms.items():
                    fb, fx = self._split(f)
                    comp = index[(tuple(a + b for a, b in zip(fb, bexp)), J)]
                    m = (comp, fx)
                    v[m] = v.get(m, 0) + c
            gens.append({m: c for m, c in v.items() if c})
        G = ModuleGB(len(self.pure), weights, max_half).compute(gens)
        leads = G.lead_ideals()
        out: Dict[int, int] = {}
        for c, w in enumerate(weights):
            top = max_half - w
            if top < 0:
                continue
            counts = standard_counts(len(self.pure), leads.get(c, []), top)
            for d, n in enumerate(counts):
                if n:
                    q = 2 * (d + w)
                    out[q] = out.get(q, 0) + n
        self._cok[key] = out
        return out

    def homology(self, t: int, q_max: int) -> Dict[int, int]:
        """H_t(q) for every q <= q_max (zeros omitted)."""
        half = q_max // 2
        cok_in = self.cokernel(t, half)
        cok_out = self.cokernel(t + 1, half)
        out = {}
        qs = set(cok_in) | set(cok_out)
        for q in qs:
            h = cok_in.get(q, 0) + cok_out.get(q, 0) - self.chain_dim(t + 1, q)
            if h < 0:
                raise AssertionError(f"negative homology at {(q, t)}")
            if h:
                out[q] = h
        return out


# -- public entry points ------------------------------------------------------

def _slice_job(args):
    K, degs, max_slice = args
    C = SliceComplex(K, max_slice)
    return {d: C.homology(d) for d in degs}


def bidegree_homology(
    K: KoszulFactorization,
    window: Window,
    reduce_translation: bool = True,
    jobs: int = 1,
    max_slice: int = DEFAULT_MAX_SLICE,
    method: str = "auto",
) -> DimensionTable:
    """Homology dimensions of the complex on the a = 0 part of ``window`` (zeros omitted).

    ``method`` is "slices" (rank of every bidegree slice), "modules" (graded
    module Groebner bases, one per homological degree) or "auto" (modules
    whenever the base ring is free).
    """
    if window.is_empty() or window.a_min > 0:
        return {}
    if method == "auto":
        method = "slices" if K.base.ideal.generators else "modules"
    if method not in ("slices", "modules"):
        raise ValueError(f"unknown method {method!r}")
    if reduce_translation and translation_invariant(K):
        red = translation_reduce(K)
        step = K.registry.degree(x_variables(K.registry)[-1]).q
        lows = {t: SliceComplex(red, max_slice).min_q(t) for t in range(window.t_min, window.t_max + 1)}
        partial = _table(red, window.t_min, window.t_max, lows, window.q_max, method, jobs, max_slice)
        out = {}
        for t in range(window.t_min, window.t_max + 1):
            for q in range(window.q_min, window.q_max + 1):
                total = 0
                qq = q
                while qq >= lows[t]:
                    total += partial.get(TriDegree(qq, t, 0), 0)
                    qq -= step
                if total:
                    out[TriDegree(q, t, 0)] = total
        return out
    lows = {t: window.q_min for t in range(window.t_min, window.t_max + 1)}
    table = _table(K, window.t_min, window.t_max, lows, window.q_max, method, jobs, max_slice)
    return {d: h for d, h in table.items() if h and d in window}


def _table(K, t_min, t_max, lows, q_max, method, jobs, max_slice) -> DimensionTable:
    if method == "modules":
        M = ModuleComplex(K)
        out = {}
        for t in range(t_min, t_max + 1):
            for q, h in M.homology(t, q_max).items():
                if q >= lows[t]:
                    out[TriDegree(q, t, 0)] = h
        return out
    C = SliceComplex(K, max_slice)
    degs = [TriDegree(q, t, 0) for t in range(t_min, t_max + 1) for q in range(lows[t], q_max + 1)]
    return {d: h for d, h in _run(K, degs, jobs, max_slice, C).items() if h}


def _run(K, degs, jobs, max_slice, C: SliceComplex) -> DimensionTable:
    if jobs <= 1 or len(degs) < 2 * jobs:
        return {d: C.homology(d) for d in degs}
    # Interleave degrees so that each worker gets a mix of small and large slices.
    chunks = [degs[k::jobs] for k in range(jobs)]
    out: DimensionTable = {}
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for part in ex.map(_slice_job, [(K, c, max_slice) for c in chunks]):
            out.update(part)
    return dict(sorted(out.items()))


def euler_check(C: SliceComplex, q: int, t_max: int) -> bool:
    """sum_{t<=T} (-1)^t H_t == sum_{t<=T} (-1)^t dim C_t - (-1)^T rank d_T."""
    lhs = sum((-1) ** t * C.homology(TriDegree(q, t, 0)) for t in range(0, t_max + 1))
    rhs = sum((-1) ** t * len(C.basis(TriDegree(q, t, 0))) for t in range(0, t_max + 1))
    rhs -= (-1) ** t_max * C.rank_out(TriDegree(q, t_max, 0))
    return lhs == rhs


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("STABLE_HHH_JOBS", "1")))
    except ValueError:
        return 1


# -- explicit small complexes -------------------------------------------------

def explicit_complex_homology(which: str, window: Window) -> DimensionTable:
    """Homology of the periodic complexes written down by hand for P_2, its twist, and w P_3.

    P2:  R <-0- R(-2,1) <-(x2-x1)- R(-4,2) <-0- R(-6,3) <- ... over R = Q[x1, x2],
         starting from R in degree (0, 0).
    sP2: the same chain with the two kinds of maps swapped.
    wP3: the Koszul complex on q13 = x1 - x3, q32 = x3 - x2 over Q[x1, x2, x3],
         tensored with Q[u2, u3]; its homology sits on theta_1 theta_2.
    """
    if window.is_empty() or window.a_min > 0:
        return {}
    if which in ("P2", "sP2"):
        return _periodic_homology(which == "sP2", window)
    if which == "wP3":
        return _wp3_homology(window)
    raise ValueError(f"unknown explicit complex {which!r}")


def _poly_ring_dims(nvars: int, q: int) -> int:
    # number of monomials of q-degree q in nvars variables of degree q^2
    if q < 0 or q % 2:
        return 0
    d = q // 2
    return math.comb(d + nvars - 1, nvars - 1)


def _periodic_homology(swapped: bool, window: Window) -> DimensionTable:
    """Chain R(-2k, k), k >= 0, with maps d_k: C_k -> C_{k+1} alternating 0 and (x2 - x1)."""
    reg = Registry.standard(2, ("x",))
    enum = MonomialEnumerator(reg)
    diff = Poly.var(reg, "x2") - Poly.var(reg, "x1")

    def basis(k, q):
        if k < 0:
            return []
        return enum.monomials(TriDegree(q + 2 * k, 0, 0))

    def mult_map(k, q):
        src = basis(k, q)
        index = {e: i for i, e in enumerate(basis(k + 1, q))}
        is_mult = (k % 2 == 1) if not swapped else (k % 2 == 0)
        cols = []
        for e in src:
            col = {}
            if is_mult:
                for f, c in diff.terms.items():
                    col[index[tuple(a + b for a, b in zip(e, f))]] = c
            cols.append(col)
        return cols

    out = {}
    for t in range(window.t_min, window.t_max + 1):
        for q in range(window.q_min, window.q_max + 1):
            dim = len(basis(t, q))
            if not dim:
                continue
            h = dim - exact_rank(mult_map(t, q)) - (exact_rank(mult_map(t - 1, q)) if t > 0 else 0)
            if h:
                out[TriDegree(q, t, 0)] = h
    return out


def _wp3_homology(window: Window) -> DimensionTable:
    """Koszul complex K(q13, q32) over Q[x1,x2,x3] (x) Q[u2, u3]."""
    from .groebner import free_quotient
    from .mf import Row, THETA_DEGREE

    reg = Registry.standard(3, ("x", "u")).without(["u1"])
    x = lambda i: Poly.var(reg, f"x{i}")
    zero = Poly.zero(reg)
    rows = (Row(x(1) - x(3), zero, TriDegree(-2, 1, 0), 1), Row(x(3) - x(2), zero, TriDegree(-2, 1, 0), 2))
    K = KoszulFactorization(free_quotient(reg), rows, ZERO_DEGREE)
    return bidegree_homology(K, window, reduce_translation=False)


# -- comparison ------------------------------------------------------------------

@dataclass
class CompareReport:
    window: Window
    mismatches: List[dict]
    compared: int

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "pass": self.passed,
            "compared_degrees": self.compared,
            "mismatches": self.mismatches[:10],
            "mismatch_count": len(self.mismatches),
        }


def compare(table: Mapping[TriDegree, int], expected, window: Window) -> CompareReport:
    """Per-degree comparison of ``table`` with a PoincareSeries or another table."""
    exp = expected.expand(window) if hasattr(expected, "expand") else dict(expected)
    mism = []
    degs = list(window.degrees()) if not window.is_empty() else []
    for d in degs:
        got, want = table.get(d, 0), exp.get(d, 0)
        if got != want:
            mism.append({"degree": d.to_json(), "oracle": got, "expected": want})
    return CompareReport(window, mism, len(degs))
