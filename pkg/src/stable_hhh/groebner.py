"""Groebner bases, normal forms and Hilbert functions of graded quotients.

The monomial order is graded reverse lexicographic on naive total degree,
with the *last* registry variable largest (so x_1 < ... < x_n < y_1 < ... <
u_1 < ... in the standard registries).  Buchberger's algorithm is run with
the Gebauer-Moeller installation of the product and chain criteria.
"""

from __future__ import annotations

import heapq
import itertools
import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .poly import (
    InhomogeneousError,
    RegistryMismatch,
    ZeroPolynomialError,
    Exps,
    Poly,
    Rational,
    Registry,
    TriDegree,
    ZERO_DEGREE,
    _norm,
    is_homogeneous,
    tridegree_of,
)

log = logging.getLogger(__name__)

DEFAULT_SPAIR_BUDGET = 200_000


class ResourceLimitExceeded(RuntimeError):
    pass


class InfiniteSlice(ValueError):
    pass


# -- monomial helpers ---------------------------------------------------

def _hk(e: Exps) -> tuple:
    # Min-heap key: the smallest key is the largest monomial.
    return (-sum(e),) + e


def _lead(terms: Mapping[Exps, Rational]) -> Exps:
    return min(terms, key=_hk)


def _divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exps, b: Exps) -> Exps:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Exps, b: Exps) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Basis:
    """Monic polynomials with cached leading monomials, used during reduction."""

    def __init__(self):
        self.polys: List[Dict[Exps, Rational]] = []
        self.leads: List[Exps] = []
        self.supports: List[Tuple[Tuple[int, int], ...]] = []
        self.active: List[bool] = []

    def add(self, terms: Dict[Exps, Rational]) -> int:
        lead = _lead(terms)
        lc = terms[lead]
        if lc != 1:
            inv = Fraction(1) / lc
            terms = {e: _norm(c * inv) for e, c in terms.items()}
        self.polys.append(terms)
        self.leads.append(lead)
        self.supports.append(tuple((i, k) for i, k in enumerate(lead) if k))
        self.active.append(True)
        return len(self.polys) - 1

    def find_reducer(self, e: Exps) -> int:
        for idx, sup in enumerate(self.supports):
            if self.active[idx] and all(e[i] >= k for i, k in sup):
                return idx
        return -1


def _reduce(terms: Mapping[Exps, Rational], basis: _Basis, full: bool = True) -> Dict[Exps, Rational]:
    """Remainder of ``terms`` on division by the active basis elements."""
    work = dict(terms)
    heap = [_hk(e) for e in work]
    heapq.heapify(heap)
    rem: Dict[Exps, Rational] = {}
    while heap:
        key = heapq.heappop(heap)
        e = key[1:]
        c = work.pop(e, 0)
        if not c:
            continue
        idx = basis.find_reducer(e)
        if idx < 0:
            rem[e] = c
            if not full:
                # top-reduction only: keep the rest untouched
                for e2, c2 in work.items():
                    if c2:
                        rem[e2] = c2
                return rem
            continue
        lead = basis.leads[idx]
        shift = tuple(a - b for a, b in zip(e, lead))
        for eg, cg in basis.polys[idx].items():
            if eg == lead:
                continue
            e2 = tuple(a + b for a, b in zip(eg, shift))
            old = work.get(e2)
            new = (old or 0) - c * cg
            if new:
                work[e2] = _norm(new)
                if old is None:
                    heapq.heappush(heap, _hk(e2))
            elif old is not None:
                del work[e2]
    return rem


def _spoly(f: Dict[Exps, Rational], lf: Exps, g: Dict[Exps, Rational], lg: Exps) -> Dict[Exps, Rational]:
    lcm = _lcm(lf, lg)
    sf = tuple(a - b for a, b in zip(lcm, lf))
    sg = tuple(a - b for a, b in zip(lcm, lg))
    out: Dict[Exps, Rational] = {}
    for e, c in f.items():
        out[tuple(a + b for a, b in zip(e, sf))] = c
    for e, c in g.items():
        e2 = tuple(a + b for a, b in zip(e, sg))
        s = out.get(e2, 0) - c
        if s:
            out[e2] = _norm(s)
        else:
            out.pop(e2, None)
    return out


def buchberger(generators: Sequence[Dict[Exps, Rational]], spair_budget: int = DEFAULT_SPAIR_BUDGET) -> List[Dict[Exps, Rational]]:
    """Reduced monic Groebner basis of the ideal spanned by ``generators``."""
    basis = _Basis()
    pairs: List[Tuple[int, int]] = []
    current: List[int] = []

    def update(h: int):
        nonlocal pairs, current
        lh = basis.leads[h]
        cands = [(g, h) for g in current]
        kept = []
        for idx, (g, _) in enumerate(cands):
            lg = basis.leads[g]
            lcm_gh = _lcm(lg, lh)
            if _coprime(lg, lh):
                kept.append((g, h))
                continue
            others = cands[idx + 1:] + kept
            if any(_divides(_lcm(basis.leads[g2], lh), lcm_gh) for g2, _ in others):
                continue
            kept.append((g, h))
        new_pairs = [(g, hh) for g, hh in kept if not _coprime(basis.leads[g], lh)]
        old = []
        for g1, g2 in pairs:
            l12 = _lcm(basis.leads[g1], basis.leads[g2])
            if (
                _divides(lh, l12)
                and _lcm(basis.leads[g1], lh) != l12
                and _lcm(basis.leads[g2], lh) != l12
            ):
                continue
            old.append((g1, g2))
        pairs = old + new_pairs
        current = [g for g in current if not _divides(lh, basis.leads[g])] + [h]

    # Insert generators in increasing order of their leading monomial.
    gens = [dict(g) for g in generators if g]
    gens.sort(key=lambda t: _hk(_lead(t)), reverse=True)
    for g in gens:
        r = _reduce(g, basis)
        if r:
            update(basis.add(r))

    count = 0
    while pairs:
        pairs.sort(key=lambda p: _hk(_lcm(basis.leads[p[0]], basis.leads[p[1]])), reverse=True)
        g1, g2 = pairs.pop()
        count += 1
        if count > spair_budget:
            raise ResourceLimitExceeded(f"S-pair budget of {spair_budget} exceeded")
        s = _spoly(basis.polys[g1], basis.leads[g1], basis.polys[g2], basis.leads[g2])
        if not s:
            continue
        # reduce against every element found so far, not only the current ones
        r = _reduce(s, basis)
        if r:
            update(basis.add(r))

    # Minimalize and interreduce.
    minimal: List[int] = []
    for i in sorted(current, key=lambda k: _hk(basis.leads[k]), reverse=True):
        if not any(_divides(basis.leads[j], basis.leads[i]) for j in minimal):
            minimal.append(i)
    out = []
    for i in minimal:
        others = _Basis()
        for j in minimal:
            if j != i:
                others.add(basis.polys[j])
        r = _reduce(basis.polys[i], others)
        lc = r[_lead(r)]
        out.append({e: _norm(Fraction(c) / lc) for e, c in r.items()})
    return out


# -- public API ---------------------------------------------------------

@dataclass(frozen=True)
class IdealPresentation:
    registry: Registry
    generators: Tuple[Poly, ...]

    def __init__(self, registry: Registry, generators: Iterable[Poly], *, check_homogeneous: bool = True):
        gens = []
        for g in generators:
            if g.registry != registry:
                g = g.to_registry(registry)
            if g.is_zero():
                raise ZeroPolynomialError("ideal generators must be nonzero")
            if check_homogeneous and not is_homogeneous(g):
                raise InhomogeneousError(f"inhomogeneous generator rejected: {g}")
            gens.append(g)
        object.__setattr__(self, "registry", registry)
        object.__setattr__(self, "generators", tuple(gens))

    def __add__(self, other: "IdealPresentation") -> "IdealPresentation":
        if other.registry != self.registry:
            raise RegistryMismatch("ideals live in different registries")
        return IdealPresentation(self.registry, self.generators + other.generators)


def ideal(registry: Registry, generators: Iterable[Poly]) -> IdealPresentation:
    """Build an ideal, silently dropping zero generators."""
    return IdealPresentation(registry, [g for g in generators if not g.is_zero()])


_GB_CACHE: Dict[Tuple[Registry, frozenset], Tuple[Poly, ...]] = {}


def groebner_basis(I: IdealPresentation, spair_budget: int = DEFAULT_SPAIR_BUDGET) -> Tuple[Poly, ...]:
    key = (I.registry, frozenset(I.generators))
    if key not in _GB_CACHE:
        raw = buchberger([g.terms for g in I.generators], spair_budget)
        _GB_CACHE[key] = tuple(Poly(I.registry, t) for t in raw)
    return _GB_CACHE[key]


@dataclass(frozen=True)
class QuotientPresentation:
    ideal: IdealPresentation
    groebner: Tuple[Poly, ...]
    shift: TriDegree = ZERO_DEGREE

    @property
    def registry(self) -> Registry:
        return self.ideal.registry

    def lead_monomials(self) -> List[Exps]:
        return [_lead(g.terms) for g in self.groebner]

    def to_json(self) -> dict:
        return {
            "vars": self.registry.to_json(),
            "generators": [g.to_json() for g in self.ideal.generators],
            "groebner": [g.to_json() for g in self.groebner],
            "shift": self.shift.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QuotientPresentation":
        reg = Registry.from_json(data["vars"])
        gens = [Poly.from_json(reg, g) for g in data["generators"]]
        gb = tuple(Poly.from_json(reg, g) for g in data["groebner"])
        return cls(IdealPresentation(reg, gens), gb, TriDegree.from_json(data.get("shift", {})))


def quotient(I: IdealPresentation, shift: TriDegree = ZERO_DEGREE, spair_budget: int = DEFAULT_SPAIR_BUDGET) -> QuotientPresentation:
    return QuotientPresentation(I, groebner_basis(I, spair_budget), shift)


def free_quotient(registry: Registry, shift: TriDegree = ZERO_DEGREE) -> QuotientPresentation:
    return QuotientPresentation(IdealPresentation(registry, []), (), shift)


def _basis_of(Q: QuotientPresentation) -> _Basis:
    b = _Basis()
    for g in Q.groebner:
        b.add(g.terms)
    return b


def normal_form(p: Poly, Q: QuotientPresentation) -> Poly:
    if p.registry != Q.registry:
        p = p.to_registry(Q.registry)
    if not Q.groebner:
        return p
    return Poly(Q.registry, _reduce(p.terms, _basis_of(Q)), _trusted=True)


def is_member(p: Poly, Q: QuotientPresentation) -> bool:
    return normal_form(p, Q).is_zero()


def ideal_equal(I: IdealPresentation, J: IdealPresentation, spair_budget: int = DEFAULT_SPAIR_BUDGET) -> bool:
    if I.registry != J.registry:
        raise RegistryMismatch("ideals live in different registries")
    QI, QJ = quotient(I, spair_budget=spair_budget), quotient(J, spair_budget=spair_budget)
    return all(is_member(g, QJ) for g in I.generators) and all(is_member(g, QI) for g in J.generators)


# -- Hilbert functions --------------------------------------------------

@dataclass(frozen=True)
class Window:
    """Closed box of tri-degrees."""

    q_min: int
    q_max: int
    t_min: int = 0
    t_max: int = 0
    a_min: int = 0
    a_max: int = 0

    def __post_init__(self):
        if self.q_min > self.q_max + 1 or self.t_min > self.t_max + 1 or self.a_min > self.a_max + 1:
            raise ValueError(f"window bounds out of order: {self}")

    def __contains__(self, d: TriDegree) -> bool:
        return (
            self.q_min <= d.q <= self.q_max
            and self.t_min <= d.t <= self.t_max
            and self.a_min <= d.a <= self.a_max
        )

    def is_empty(self) -> bool:
        return self.q_min > self.q_max or self.t_min > self.t_max or self.a_min > self.a_max

    def shifted(self, d: TriDegree) -> "Window":
        return Window(self.q_min + d.q, self.q_max + d.q, self.t_min + d.t, self.t_max + d.t, self.a_min + d.a, self.a_max + d.a)

    def degrees(self):
        for a in range(self.a_min, self.a_max + 1):
            for t in range(self.t_min, self.t_max + 1):
                for q in range(self.q_min, self.q_max + 1):
                    yield TriDegree(q, t, a)

    def to_json(self) -> dict:
        return {"q": [self.q_min, self.q_max], "t": [self.t_min, self.t_max], "a": [self.a_min, self.a_max]}


def _split_variables(registry: Registry):
    """Partition variable slots into t/a-bounded ones and positive pure-q ones."""
    bounded, pure = [], []
    for i, v in enumerate(registry.variables):
        d = v.degree
        if d.t < 0 or d.a < 0:
            raise InfiniteSlice(f"variable {v.name} has negative degree {d}")
        if d.t > 0 or d.a > 0:
            bounded.append(i)
        elif d.q > 0:
            pure.append(i)
        else:
            raise InfiniteSlice(f"variable {v.name} of degree {d} makes slices infinite")
    return bounded, pure


def _free_series(registry: Registry, window: Window, start: Dict[TriDegree, int] | None = None) -> Dict[TriDegree, int]:
    """Coefficients of start * prod_v 1/(1 - T^deg v), exact inside ``window``."""
    bounded, pure = _split_variables(registry)
    series = dict(start) if start is not None else {ZERO_DEGREE: 1}
    for i in bounded:
        d = registry.variables[i].degree
        nxt: Dict[TriDegree, int] = {}
        for deg, c in series.items():
            k = 0
            cur = deg
            while cur.t <= window.t_max and cur.a <= window.a_max:
                nxt[cur] = nxt.get(cur, 0) + c
                k += 1
                cur = cur + d
        series = nxt
    # Pure q-variables only raise q, so truncating at q_max is safe from here on.
    series = {d: c for d, c in series.items() if d.q <= window.q_max}
    for i in pure:
        dq = registry.variables[i].degree.q
        nxt = {}
        for deg, c in series.items():
            cur = deg
            while cur.q <= window.q_max:
                nxt[cur] = nxt.get(cur, 0) + c
                cur = TriDegree(cur.q + dq, cur.t, cur.a)
        series = {d: c for d, c in nxt.items() if c}
    return {d: c for d, c in series.items() if d in window and c}


def _numerator(gens: List[Exps], registry: Registry) -> Dict[TriDegree, int]:
    """K-polynomial of the monomial ideal generated by ``gens`` (pivot recursion)."""
    degs = [v.degree for v in registry.variables]

    def deg(e: Exps) -> TriDegree:
        q = t = a = 0
        for k, d in zip(e, degs):
            if k:
                q += k * d.q
                t += k * d.t
                a += k * d.a
        return TriDegree(q, t, a)

    def minimalize(ms):
        ms = sorted(set(ms), key=sum)
        out = []
        for m in ms:
            if not any(_divides(o, m) for o in out):
                out.append(m)
        return out

    memo: Dict[frozenset, Dict[TriDegree, int]] = {}

    def add_into(acc, poly, shift=ZERO_DEGREE, sign=1):
        for d, c in poly.items():
            key = d + shift
            s = acc.get(key, 0) + sign * c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)

    def rec(ms: List[Exps]) -> Dict[TriDegree, int]:
        key = frozenset(ms)
        if key in memo:
            return memo[key]
        if not ms:
            res = {ZERO_DEGREE: 1}
        elif len(ms) == 1:
            res = {}
            add_into(res, {ZERO_DEGREE: 1})
            add_into(res, {deg(ms[0]): 1}, sign=-1)
        elif all(_coprime(a, b) for a, b in itertools.combinations(ms, 2)):
            res = {ZERO_DEGREE: 1}
            for m in ms:
                nxt: Dict[TriDegree, int] = {}
                add_into(nxt, res)
                add_into(nxt, res, deg(m), -1)
                res = nxt
        else:
            # Pivot x_i^k with i, k taken from the generators that are not pure
            # powers; minimality guarantees the pivot is not already a generator.
            nv = len(ms[0])
            mixed = [m for m in ms if sum(1 for k in m if k) > 1]
            counts = [sum(1 for m in mixed if m[i]) for i in range(nv)]
            i = max(range(nv), key=lambda k: counts[k])
            exps = sorted(m[i] for m in mixed if m[i])
            piv_exp = exps[len(exps) // 2]
            pivot = tuple(piv_exp if k == i else 0 for k in range(nv))
            with_pivot = minimalize([m for m in ms if not _divides(pivot, m)] + [pivot])
            colon = minimalize([tuple(max(a - b, 0) for a, b in zip(m, pivot)) for m in ms])
            res = {}
            add_into(res, rec(with_pivot))
            add_into(res, rec(colon), deg(pivot))
        memo[key] = res
        return res

    return rec(minimalize(gens))


def hilbert_function(Q: QuotientPresentation, window: Window, method: str = "numerator") -> Dict[TriDegree, int]:
    """Graded dimensions of Q (shifted by Q.shift) on ``window``; zeros omitted.

    ``method="enumerate"`` counts standard monomials one by one;
    ``method="numerator"`` uses the K-polynomial of the lead-term ideal.
    """
    if window.is_empty():
        return {}
    inner = window.shifted(-Q.shift)
    leads = Q.lead_monomials()
    if method == "enumerate":
        raw = _enumerate_standard(Q.registry, leads, inner)
    elif method == "numerator":
        num = _numerator(leads, Q.registry)
        # the numerator may lower t (never below 0 overall); widen before expanding
        raw = _expand_with_numerator(Q.registry, num, inner)
    else:
        raise ValueError(f"unknown method {method!r}")
    return {d + Q.shift: c for d, c in raw.items() if c}


def _expand_with_numerator(registry: Registry, num: Mapping[TriDegree, int], window: Window) -> Dict[TriDegree, int]:
    """Coefficients of num / prod(1 - T^deg v) inside ``window``."""
    if not num:
        return {}
    _, pure = _split_variables(registry)
    # Terms of the numerator carry q up to max(num q); pure q variables only add.
    return _free_series(registry, window, start=dict(num))


def _enumerate_standard(registry: Registry, leads: List[Exps], window: Window) -> Dict[TriDegree, int]:
    bounded, pure = _split_variables(registry)
    degs = [v.degree for v in registry.variables]
    nv = len(registry)
    out: Dict[TriDegree, int] = {}

    def standard(e):
        return not any(_divides(m, e) for m in leads)

    def rec_pure(idx, e, deg):
        if idx == len(pure):
            if deg in window and standard(tuple(e)):
                out[deg] = out.get(deg, 0) + 1
            return
        i = pure[idx]
        dq = degs[i].q
        k = 0
        cur = deg
        while cur.q <= window.q_max:
            e[i] = k
            rec_pure(idx + 1, e, cur)
            k += 1
            cur = TriDegree(cur.q + dq, cur.t, cur.a)
        e[i] = 0

    def rec_bounded(idx, e, deg):
        if idx == len(bounded):
            rec_pure(0, e, deg)
            return
        i = bounded[idx]
        d = degs[i]
        k = 0
        cur = deg
        while cur.t <= window.t_max and cur.a <= window.a_max:
            e[i] = k
            rec_bounded(idx + 1, e, cur)
            k += 1
            cur = cur + d
        e[i] = 0

    rec_bounded(0, [0] * nv, ZERO_DEGREE)
    return out


def product_formula(registry: Registry, relation_degrees: Sequence[TriDegree], window: Window) -> Dict[TriDegree, int]:
    """Expansion of prod(1 - T^d_i) / prod_v (1 - T^deg v) on ``window``."""
    num: Dict[TriDegree, int] = {ZERO_DEGREE: 1}
    for d in relation_degrees:
        nxt = dict(num)
        for deg, c in num.items():
            key = deg + d
            s = nxt.get(key, 0) - c
            if s:
                nxt[key] = s
            else:
                nxt.pop(key, None)
        num = nxt
    return _free_series(registry, window, start=num)


@dataclass
class RegularityVerdict:
    accepted: bool
    window: Window
    first_failure: Optional[Tuple[TriDegree, int, int]] = None  # (degree, actual, expected)
    checked: int = 0

    def to_json(self) -> dict:
        d = {"verdict": "ACCEPT" if self.accepted else "REJECT", "window": self.window.to_json(), "checked_degrees": self.checked}
        if self.first_failure is not None:
            deg, got, want = self.first_failure
            d["first_failure"] = {"degree": deg.to_json(), "hilbert": got, "product_formula": want}
        return d


def certify_regular_sequence(seq: Sequence[Poly], registry: Registry, window: Window, spair_budget: int = DEFAULT_SPAIR_BUDGET) -> RegularityVerdict:
    """Compare the Hilbert function of the quotient with the product formula on ``window``."""
    seq = [s.to_registry(registry) for s in seq]
    degs = [tridegree_of(s) for s in seq]
    Q = quotient(IdealPresentation(registry, seq), spair_budget=spair_budget)
    actual = hilbert_function(Q, window)
    expected = product_formula(registry, degs, window)
    keys = sorted(set(actual) | set(expected), key=lambda d: (d.a, d.t, d.q))
    for d in keys:
        if actual.get(d, 0) != expected.get(d, 0):
            return RegularityVerdict(False, window, (d, actual.get(d, 0), expected.get(d, 0)), len(keys))
    return RegularityVerdict(True, window, None, len(keys))


def reduce_many(polys: Sequence[Poly], Q: QuotientPresentation) -> List[Poly]:
    """Normal forms of several polynomials, sharing one reducer setup."""
    if not Q.groebner:
        return [p.to_registry(Q.registry) for p in polys]
    b = _basis_of(Q)
    return [Poly(Q.registry, _reduce(p.to_registry(Q.registry).terms, b), _trusted=True) for p in polys]


def groebner_from_terms(registry: Registry, polys: Sequence[Poly]) -> Tuple[Poly, ...]:
    return tuple(Poly(registry, t) for t in buchberger([p.terms for p in polys]))


# -- graded submodules of free modules ------------------------------------

ModKey = Tuple[int, Exps]  # (component, exponents)


class ModuleGB:
    """Truncated Groebner basis of a homogeneous submodule of a free module.

    Component ``c`` has weight ``weights[c]``; the weighted degree of
    ``x^e e_c`` is ``|e| + weights[c]``.  Monomials compare by weighted degree,
    then total degree, then reverse lexicographic exponents, then component.
    Only elements of weighted degree <= ``max_degree`` are computed, which is
    exact for every question asked in degrees <= ``max_degree``.
    """

    def __init__(self, nvars: int, weights: Sequence[int], max_degree: int, spair_budget: int = 10 * DEFAULT_SPAIR_BUDGET):
        self.nvars = nvars
        self.weights = list(weights)
        self.max_degree = max_degree
        self.budget = spair_budget
        self.polys: List[Dict[ModKey, int]] = []
        self.leads: List[ModKey] = []
        self.by_comp: Dict[int, List[int]] = {}

    def wdeg(self, m: ModKey) -> int:
        return sum(m[1]) + self.weights[m[0]]

    def _key(self, m: ModKey):
        c, e = m
        return (-(sum(e) + self.weights[c]), -sum(e)) + e + (c,)

    def _lead(self, v: Mapping[ModKey, int]) -> ModKey:
        return min(v, key=self._key)

    def _find(self, m: ModKey) -> int:
        c, e = m
        for idx in self.by_comp.get(c, ()):
            le = self.leads[idx][1]
            if all(a >= b for a, b in zip(e, le)):
                return idx
        return -1

    def reduce(self, v: Dict[ModKey, int]) -> Dict[ModKey, int]:
        """Fraction-free full reduction; result is primitive with positive lead."""
        work = dict(v)
        heap = [self._key(m) for m in work]
        heapq.heapify(heap)
        rem: Dict[ModKey, int] = {}
        scale = 1
        while heap:
            key = heapq.heappop(heap)
            m = (key[-1], key[2:-1])
            c = work.pop(m, 0)
            if not c:
                continue
            idx = self._find(m)
            if idx < 0:
                rem[m] = c
                continue
            g = self.polys[idx]
            gl = self.leads[idx]
            a = g[gl]
            shift = tuple(x - y for x, y in zip(m[1], gl[1]))
            if c % a:
                d = math.gcd(a, c)
                mul = a // d
                for k in work:
                    work[k] *= mul
                for k in rem:
                    rem[k] *= mul
                c = c * mul
            f = c // a
            for (gc, ge), gcoef in g.items():
                if (gc, ge) == gl:
                    continue
                m2 = (gc, tuple(x + y for x, y in zip(ge, shift)))
                old = work.get(m2)
                new = (old or 0) - f * gcoef
                if new:
                    work[m2] = new
                    if old is None:
                        heapq.heappush(heap, self._key(m2))
                elif old is not None:
                    del work[m2]
        if not rem:
            return rem
        g = 0
        for c in rem.values():
            g = math.gcd(g, c)
        lead = self._lead(rem)
        if rem[lead] < 0:
            g = -g
        return {k: c // g for k, c in rem.items()}

    def _add(self, v: Dict[ModKey, int]) -> int:
        lead = self._lead(v)
        self.polys.append(v)
        self.leads.append(lead)
        idx = len(self.polys) - 1
        self.by_comp.setdefault(lead[0], []).append(idx)
        return idx

    def compute(self, generators: Sequence[Mapping[ModKey, object]]) -> "ModuleGB":
        gens = []
        for g in generators:
            if not g:
                continue
            den = 1
            for c in g.values():
                if isinstance(c, Fraction):
                    den = den * c.denominator // math.gcd(den, c.denominator)
            v = {m: int(c * den) for m, c in g.items() if c}
            gens.append(v)
        todo: Dict[int, list] = {}
        for v in gens:
            d = self.wdeg(next(iter(v)))
            if d <= self.max_degree:
                todo.setdefault(d, []).append(("gen", v))
        pairs: Dict[int, List[Tuple[int, int]]] = {}
        current: List[int] = []
        count = 0

        def update(h: int):
            nonlocal current
            ch, lh = self.leads[h]
            # chain criterion only: coprime leads prove nothing for module elements
            cands = [(g, _lcm(self.leads[g][1], lh)) for g in current if self.leads[g][0] == ch]
            kept: List[Tuple[int, Exps]] = []
            for g, l in cands:
                if any(_divides(l2, l) and l2 != l for _, l2 in cands):
                    continue
                if any(l2 == l for _, l2 in kept):
                    continue
                kept.append((g, l))
            for plist in pairs.values():
                keep = []
                for g1, g2 in plist:
                    if self.leads[g1][0] == ch:
                        l12 = _lcm(self.leads[g1][1], self.leads[g2][1])
                        if (
                            _divides(lh, l12)
                            and _lcm(self.leads[g1][1], lh) != l12
                            and _lcm(self.leads[g2][1], lh) != l12
                        ):
                            continue
                    keep.append((g1, g2))
                plist[:] = keep
            for g, l in kept:
                d = sum(l) + self.weights[ch]
                if d <= self.max_degree:
                    pairs.setdefault(d, []).append((g, h))
            current = [g for g in current if not (self.leads[g][0] == ch and _divides(lh, self.leads[g][1]))] + [h]

        degrees = sorted(set(todo) | set(pairs))
        while degrees:
            d = degrees[0]
            batch = []
            for g1, g2 in pairs.pop(d, []):
                count += 1
                if count > self.budget:
                    raise ResourceLimitExceeded(f"S-pair budget of {self.budget} exceeded")
                batch.append(self._spoly(g1, g2))
            batch += [v for _, v in todo.pop(d, [])]
            for v in batch:
                r = self.reduce(v)
                if r:
                    update(self._add(r))
            degrees = sorted(set(todo) | set(k for k, v in pairs.items() if v))
        return self

    def _spoly(self, i: int, j: int) -> Dict[ModKey, int]:
        (c, li), (_, lj) = self.leads[i], self.leads[j]
        l = _lcm(li, lj)
        si = tuple(a - b for a, b in zip(l, li))
        sj = tuple(a - b for a, b in zip(l, lj))
        ai, aj = self.polys[i][self.leads[i]], self.polys[j][self.leads[j]]
        g = math.gcd(ai, aj)
        fi, fj = aj // g, ai // g
        out: Dict[ModKey, int] = {}
        for (cc, e), v in self.polys[i].items():
            out[(cc, tuple(a + b for a, b in zip(e, si)))] = fi * v
        for (cc, e), v in self.polys[j].items():
            k = (cc, tuple(a + b for a, b in zip(e, sj)))
            s = out.get(k, 0) - fj * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def lead_ideals(self) -> Dict[int, List[Exps]]:
        out: Dict[int, List[Exps]] = {}
        for c, e in self.leads:
            out.setdefault(c, []).append(e)
        return out


def standard_counts(nvars: int, leads: Sequence[Exps], max_degree: int) -> List[int]:
    """#{monomials of degree k in nvars variables outside the monomial ideal}, k = 0..max_degree."""
    if max_degree < 0:
        return []
    from .poly import Variable

    reg = Registry([Variable(f"z{i}", "aux", TriDegree(1, 0, 0)) for i in range(nvars)])
    num = _numerator(list(leads), reg) if leads else {ZERO_DEGREE: 1}
    series = _free_series(reg, Window(0, max_degree, 0, 0, 0, 0), start={d: c for d, c in num.items() if d.q <= max_degree})
    return [series.get(TriDegree(k, 0, 0), 0) for k in range(max_degree + 1)]
