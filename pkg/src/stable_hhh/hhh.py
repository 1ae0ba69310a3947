"""From the factorization M_n to the triply graded answer.

Pipeline: twist M_n by w, set y = x (Hochschild degree zero), fold each
cycle of w into a single row, read off the quotient ring, then attach the
exterior factor on xi_1..xi_n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import schubert
from .groebner import (
    IdealPresentation,
    QuotientPresentation,
    Window,
    certify_regular_sequence,
    free_quotient,
    hilbert_function,
    ideal,
    ideal_equal,
    is_member,
    quotient,
    RegularityVerdict,
)
from .mf import KoszulFactorization, Row, TraceStep, build_Mn, potential, row_transform, scale_row
from .perm import Permutation, PermutationError, canonical_cycle_form, special_form
from .poly import Poly, Registry, TriDegree, Variable, ZERO_DEGREE, substitute, x_degree, u_degree

__all__ = [
    "canonical_cycle_form",
    "unit_shift",
    "exterior_degrees",
    "default_window",
    "hh0_specialize",
    "specialized_factorization",
    "block_simplify",
    "BlockSimplification",
    "defining_sequence",
    "diagonal_relations",
    "orbit_relations",
    "identified_registry",
    "StableHomologyPresentation",
    "stable_homology_presentation",
    "literal_presentation",
    "PresentationCheck",
    "check_presentation",
    "PoincareSeries",
    "poincare_series",
    "exterior_convolve",
    "a_zero_window",
    "full_hhh",
    "e_registry",
    "e_relations",
    "e_ring",
    "psi_map",
    "chi_map",
    "IsomorphismReport",
    "verify_E_isomorphism",
]


def unit_shift(n: int, r: int) -> TriDegree:
    return TriDegree(-2 * (n - r), n - r, 0)


def exterior_degrees(n: int) -> List[TriDegree]:
    return [TriDegree(-2 * i, 0, 1) for i in range(1, n + 1)]


def default_window(n: int) -> Window:
    b = 2 * n * n + 10
    return Window(-b, b, 0, 12, 0, n)


# -- Hochschild degree zero ---------------------------------------------

def hh0_specialize(K: KoszulFactorization) -> KoszulFactorization:
    """Set y = x in a (twisted) M_n; the result lives over the free ring Q[x, u].

    The q^{-2l} shift of M_n cancels against the two copies of R(l), so the
    result is unshifted.
    """
    src = K.registry
    n = src.n
    target = schubert.xu_registry(n)
    assign = {f"y{i}": Poly.var(target, f"x{i}") for i in range(1, n + 1)}
    rows = tuple(
        Row(substitute(r.a, assign, target), substitute(r.b, assign, target), r.shift, r.label) for r in K.rows
    )
    return KoszulFactorization(free_quotient(target), rows, ZERO_DEGREE)


def specialized_factorization(n: int, w: Permutation) -> KoszulFactorization:
    return hh0_specialize(build_Mn(n, w))


def alpha(reg: Registry, k: int) -> Poly:
    return Poly.var(reg, f"x{k}") - Poly.var(reg, f"x{k + 1}")


@dataclass
class BlockSimplification:
    factorization: KoszulFactorization
    trace: List[dict]


def block_simplify(K: KoszulFactorization, w: Permutation) -> BlockSimplification:
    """Fold each cycle (m..L) of a special-form w into rows (alpha_k | 0), (0 | bbar_L).

    Within a cycle all b-bar entries coincide and the a-entries telescope, so
    adding each a_k into row L (lambda = -1) clears b_k and zeroes a_L.
    """
    if not w.is_special_form():
        raise PermutationError(f"{w} is not in special cycle form")
    trace: List[dict] = []
    for cyc in w.cycles():
        last = cyc[-1]
        for k in cyc[:-1]:
            K = row_transform(K, K.row_index(k), K.row_index(last), -1)
            trace.append({"move": "row_transform", "i": k, "j": last, "lambda": -1})
            K = scale_row(K, K.row_index(k), -1)
            trace.append({"move": "scale_row", "i": k, "lambda": -1})
    reg = K.registry
    for r in K.rows:
        ends = set(w.cycle_ends())
        if r.label in ends:
            if not r.a.is_zero():
                raise AssertionError(f"row {r.label} kept a-entry {r.a}")
        elif r.a != alpha(reg, r.label) or not r.b.is_zero():
            raise AssertionError(f"row {r.label} did not reach (alpha | 0): {r}")
    return BlockSimplification(K, trace)


# -- the quotient ring ----------------------------------------------------

def identified_registry(w: Permutation) -> Tuple[Registry, Dict[str, Poly]]:
    """Keep one x per cycle (its smallest point); map every x_i to that variable."""
    n = w.n
    reps = {}
    for cyc in w.cycles():
        m = min(cyc)
        for i in cyc:
            reps[i] = m
    keep = sorted(set(reps.values()))
    reg = Registry(
        [Variable(f"x{i}", "x", x_degree(), (i,)) for i in keep]
        + [Variable(f"u{k}", "u", u_degree(k), (k,)) for k in range(1, n + 1)],
        n,
    )
    assign = {f"x{i}": Poly.var(reg, f"x{reps[i]}") for i in range(1, n + 1)}
    return reg, assign


def diagonal_relations(n: int, reg: Optional[Registry] = None) -> List[Poly]:
    """J'': sum_{i<=j} u_i a_ij(x, x), j = 1..n."""
    reg = reg or schubert.xu_registry(n)
    out = []
    for j in range(1, n + 1):
        total = Poly.zero(reg)
        for i in range(1, j + 1):
            total = total + Poly.var(reg, f"u{i}") * schubert.diagonal(schubert.a_poly(i, j, n), n).to_registry(reg)
        out.append(total)
    return out


def orbit_relations(w: Permutation, reg: Registry) -> List[Poly]:
    """I': x_i - x_{w(i)} for the non-fixed points."""
    return [Poly.var(reg, f"x{i}") - Poly.var(reg, f"x{w(i)}") for i in range(1, w.n + 1) if w(i) != i]


def defining_sequence(w: Permutation) -> List[Poly]:
    """alpha_i (i not a cycle end) followed by bbar_{m_1}, ..., bbar_{m_r}, in Q[x, u]."""
    n = w.n
    reg = schubert.xu_registry(n)
    ends = w.cycle_ends()
    seq = [alpha(reg, i) for i in range(1, n + 1) if i not in ends]
    seq += [schubert.b_poly(m, n, twist=w) for m in ends]
    return seq


@dataclass
class StableHomologyPresentation:
    ring: QuotientPresentation
    unit_shift: TriDegree
    exterior_factor: List[TriDegree]
    cycle_type: Tuple[int, ...]
    permutation: Permutation

    @property
    def n(self) -> int:
        return self.permutation.n

    def to_json(self) -> dict:
        return {
            "cycle_type": list(self.cycle_type),
            "permutation": str(self.permutation),
            "ring": self.ring.to_json(),
            "shift": {"q": self.unit_shift.q, "t": self.unit_shift.t},
            "exterior_degrees": [d.to_json() for d in self.exterior_factor],
        }


def stable_homology_presentation(n: int, w: Permutation) -> StableHomologyPresentation:
    """Q[x, u]/(alpha_i, bbar_{m_k}) after identifying x's along cycles of w."""
    if w.n != n:
        raise ValueError(f"permutation of {w.n} points used with n={n}")
    v = canonical_cycle_form(w)
    r = v.num_cycles
    reg, assign = identified_registry(v)
    gens = [substitute(b, assign, reg) for b in defining_sequence(v)[n - r:]]
    ring = quotient(ideal(reg, gens), unit_shift(n, r))
    return StableHomologyPresentation(ring, unit_shift(n, r), exterior_degrees(n), v.cycle_type(), v)


def literal_presentation(w: Permutation) -> StableHomologyPresentation:
    """Q[x, u]/(I'_w + J'') for w as given, without passing to the special form."""
    n = w.n
    reg = schubert.xu_registry(n)
    r = w.num_cycles
    ring = quotient(ideal(reg, orbit_relations(w, reg) + diagonal_relations(n, reg)), unit_shift(n, r))
    return StableHomologyPresentation(ring, unit_shift(n, r), exterior_degrees(n), w.cycle_type(), w)


@dataclass
class PresentationCheck:
    cycle_type: Tuple[int, ...]
    ideals_equal: bool
    regularity: RegularityVerdict
    identification_equal: bool

    @property
    def passed(self) -> bool:
        return self.ideals_equal and self.regularity.accepted and self.identification_equal

    def to_json(self) -> dict:
        return {
            "cycle_type": list(self.cycle_type),
            "ideal_equal": self.ideals_equal,
            "identification_equal": self.identification_equal,
            "regular_sequence": self.regularity.to_json(),
        }


def check_presentation(n: int, cycle_type: Sequence[int], window: Window) -> PresentationCheck:
    w = special_form(cycle_type)
    reg = schubert.xu_registry(n)
    seq = defining_sequence(w)
    I_plus_J = ideal(reg, seq)
    literal = ideal(reg, orbit_relations(w, reg) + diagonal_relations(n, reg))
    eq = ideal_equal(I_plus_J, literal)
    verdict = certify_regular_sequence(seq, reg, window)
    # the identified ring has the same Hilbert function as the literal quotient
    pres = stable_homology_presentation(n, w)
    lit_q = quotient(literal, pres.unit_shift)
    ident = hilbert_function(pres.ring, window) == hilbert_function(lit_q, window)
    return PresentationCheck(tuple(cycle_type), eq, verdict, ident)


# -- Poincare series --------------------------------------------------------

@dataclass(frozen=True)
class PoincareSeries:
    """prefactor * prod (1 + c m) / prod (1 - m)."""

    prefactor: TriDegree
    numerator_factors: Tuple[Tuple[int, TriDegree], ...]
    denominator_factors: Tuple[TriDegree, ...]

    def numerator(self) -> Dict[TriDegree, int]:
        poly = {self.prefactor: 1}
        for c, m in self.numerator_factors:
            nxt = dict(poly)
            for d, k in poly.items():
                key = d + m
                s = nxt.get(key, 0) + c * k
                if s:
                    nxt[key] = s
                else:
                    nxt.pop(key, None)
            poly = nxt
        return poly

    def expand(self, window: Window) -> Dict[TriDegree, int]:
        """Exact coefficients inside ``window`` (zeros omitted)."""
        series = self.numerator()
        bounded = [m for m in self.denominator_factors if m.t > 0 or m.a > 0]
        pure = [m for m in self.denominator_factors if not (m.t > 0 or m.a > 0)]
        for m in bounded:
            if m.t < 0 or m.a < 0:
                raise ValueError(f"cannot expand 1/(1 - {m})")
            nxt: Dict[TriDegree, int] = {}
            for d, c in series.items():
                cur = d
                while cur.t <= window.t_max and cur.a <= window.a_max:
                    nxt[cur] = nxt.get(cur, 0) + c
                    cur = cur + m
            series = nxt
        series = {d: c for d, c in series.items() if d.q <= window.q_max}
        for m in pure:
            if m.q <= 0:
                raise ValueError(f"cannot expand 1/(1 - {m})")
            nxt = {}
            for d, c in series.items():
                cur = d
                while cur.q <= window.q_max:
                    nxt[cur] = nxt.get(cur, 0) + c
                    cur = cur + m
            series = nxt
        return {d: c for d, c in series.items() if c and d in window}

    def at_t_minus_one(self) -> dict:
        """The t = -1 specialization; each factor is 1 + sign * q^q a^a.  Recorded, not evaluated."""

        def fac(sign: int, m: TriDegree) -> dict:
            return {"sign": sign * (-1) ** m.t, "q": m.q, "a": m.a}

        return {
            "prefactor": {"coeff": (-1) ** self.prefactor.t, "q": self.prefactor.q, "a": self.prefactor.a},
            "numerator": [fac(c, m) for c, m in self.numerator_factors],
            "denominator": [fac(-1, m) for m in self.denominator_factors],
        }

    def closed_form(self) -> str:
        def mono(m: TriDegree) -> str:
            parts = []
            for sym, k in (("q", m.q), ("t", m.t), ("a", m.a)):
                if k == 1:
                    parts.append(sym)
                elif k:
                    parts.append(f"{sym}^{k}")
            return "*".join(parts) or "1"

        num = "".join(f"(1{'+' if c > 0 else '-'}{mono(m)})" for c, m in self.numerator_factors)
        den = "".join(f"(1-{mono(m)})" for m in self.denominator_factors)
        return f"{mono(self.prefactor)}*{num or '1'}/({den or '1'})"

    def to_json(self) -> dict:
        return {
            "prefactor": self.prefactor.to_json(),
            "numerator_factors": [{"sign": c, "monomial": m.to_json()} for c, m in self.numerator_factors],
            "denominator_factors": [m.to_json() for m in self.denominator_factors],
            "closed_form": self.closed_form(),
        }


def poincare_series(n: int, cycle_type: Sequence[int]) -> PoincareSeries:
    if n < 1 or sum(cycle_type) != n or any(k < 1 for k in cycle_type):
        raise ValueError(f"{tuple(cycle_type)} is not a partition of {n}")
    r = len(cycle_type)
    tq = TriDegree(-2, 2, 0)
    num = [(-1, tq)] * (r - 1) + [(1, d) for d in exterior_degrees(n)]
    den = [TriDegree(2, 0, 0)] * r + [TriDegree(-2 * j, 2, 0) for j in range(2, n + 1)]
    return PoincareSeries(unit_shift(n, r), tuple(num), tuple(den))


# -- full answer ---------------------------------------------------------------

def exterior_convolve(table: Mapping[TriDegree, int], n: int, window: Window) -> Dict[TriDegree, int]:
    out: Dict[TriDegree, int] = {}
    for k in range(n + 1):
        for S in itertools.combinations(range(1, n + 1), k):
            d = TriDegree(-2 * sum(S), 0, k)
            for deg, c in table.items():
                key = deg + d
                if key in window:
                    out[key] = out.get(key, 0) + c
    return {d: c for d, c in out.items() if c}


def a_zero_window(window: Window, n: int) -> Window:
    """The a = 0 window needed to fill ``window`` after the exterior convolution."""
    return Window(window.q_min, window.q_max + n * (n + 1), window.t_min, window.t_max, 0, 0)


def full_hhh(pres: StableHomologyPresentation, window: Window) -> Dict[TriDegree, int]:
    base = hilbert_function(pres.ring, a_zero_window(window, pres.n))
    return exterior_convolve(base, pres.n, window)


# -- the flag ring E -----------------------------------------------------------

def e_registry(n: int) -> Registry:
    return Registry.standard(n, ("x", "v"))


def _v(reg: Registry, i: int, j: int) -> Poly:
    from .poly import v_name

    if i >= j:
        return Poly.zero(reg)
    return Poly.var(reg, v_name(i, j))


def formal_matrices(n: int, reg: Optional[Registry] = None):
    """X (diagonal x_i, superdiagonal 1) and strictly upper triangular V."""
    reg = reg or e_registry(n)
    X = [[Poly.zero(reg) for _ in range(n)] for _ in range(n)]
    V = [[Poly.zero(reg) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        X[i][i] = Poly.var(reg, f"x{i + 1}")
        if i + 1 < n:
            X[i][i + 1] = Poly.const(reg, 1)
        for j in range(i + 1, n):
            V[i][j] = _v(reg, i + 1, j + 1)
    return X, V


def e_relations(n: int, reg: Optional[Registry] = None) -> List[Poly]:
    """Nonzero entries of XV - VX, row by row."""
    reg = reg or e_registry(n)
    X, V = formal_matrices(n, reg)
    rels = []
    for i in range(n):
        for j in range(n):
            total = Poly.zero(reg)
            for k in range(n):
                total = total + X[i][k] * V[k][j] - V[i][k] * X[k][j]
            if not total.is_zero():
                rels.append(total)
    return rels


def e_ring(n: int) -> QuotientPresentation:
    reg = e_registry(n)
    rels = e_relations(n, reg)
    return quotient(IdealPresentation(reg, rels)) if rels else free_quotient(reg)


def psi_map(n: int, reg_e: Registry) -> Dict[str, Poly]:
    """u_1 -> 0, u_k -> (-1)^(k-1) v_{1k}."""
    out = {"u1": Poly.zero(reg_e)}
    for k in range(2, n + 1):
        out[f"u{k}"] = _v(reg_e, 1, k).scale((-1) ** (k - 1))
    return out


def chi_map(n: int, reg_u: Registry) -> Dict[str, Poly]:
    """v_{1k} -> (-1)^(k-1) u_k; v_ij (i > 1) by v_ij = v_{i-1,j-1} - (x_{i-1} - x_j) v_{i-1,j}."""
    from .poly import v_name

    img: Dict[Tuple[int, int], Poly] = {}
    for k in range(2, n + 1):
        img[(1, k)] = Poly.var(reg_u, f"u{k}").scale((-1) ** (k - 1))
    for i in range(2, n + 1):
        for j in range(i + 1, n + 1):
            x = Poly.var(reg_u, f"x{i - 1}") - Poly.var(reg_u, f"x{j}")
            img[(i, j)] = img[(i - 1, j - 1)] - x * img[(i - 1, j)]
    return {v_name(i, j): p for (i, j), p in img.items()}


@dataclass
class IsomorphismReport:
    n: int
    forward: List[dict]  # psi(J'') in (r)
    backward: List[dict]  # chi(r) in J''
    roundtrip_u: List[dict]
    roundtrip_v: List[dict]
    hilbert_agree: bool
    window: Window
    first_hilbert_mismatch: Optional[dict] = None

    @property
    def passed(self) -> bool:
        tables = self.forward + self.backward + self.roundtrip_u + self.roundtrip_v
        return self.hilbert_agree and all(e["member"] for e in tables)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pass": self.passed,
            "forward_membership": self.forward,
            "backward_membership": self.backward,
            "roundtrip_u": self.roundtrip_u,
            "roundtrip_v": self.roundtrip_v,
            "hilbert_window": self.window.to_json(),
            "hilbert_agree": self.hilbert_agree,
            "first_hilbert_mismatch": self.first_hilbert_mismatch,
        }


def verify_E_isomorphism(n: int, window: Optional[Window] = None) -> IsomorphismReport:
    window = window or Window(-12, 12, 0, 8, 0, 0)
    E = e_ring(n)
    reg_e = E.registry
    reg_u = schubert.xu_registry(n)
    Jpp = quotient(ideal(reg_u, diagonal_relations(n, reg_u)))
    psi, chi = psi_map(n, reg_e), chi_map(n, reg_u)

    forward = []
    for j, g in enumerate(Jpp.ideal.generators, start=1):
        img = substitute(g, psi, reg_e)
        forward.append({"generator": j, "image": str(img), "member": is_member(img, E)})
    backward = []
    for rel in E.ideal.generators:
        img = substitute(rel, chi, reg_u)
        backward.append({"relation": str(rel), "image": str(img), "member": is_member(img, Jpp)})
    roundtrip_u = []
    for k in range(1, n + 1):
        u = Poly.var(reg_u, f"u{k}")
        back = substitute(substitute(u, psi, reg_e), chi, reg_u)
        roundtrip_u.append({"var": f"u{k}", "member": is_member(back - u, Jpp)})
    roundtrip_v = []
    for v in reg_e.variables:
        if v.kind != "v":
            continue
        p = Poly.var(reg_e, v.name)
        back = substitute(substitute(p, chi, reg_u), psi, reg_e)
        roundtrip_v.append({"var": v.name, "member": is_member(back - p, E)})

    h_u = hilbert_function(Jpp, window)
    h_e = hilbert_function(E, window)
    mismatch = None
    for d in sorted(set(h_u) | set(h_e), key=lambda d: (d.t, d.q)):
        if h_u.get(d, 0) != h_e.get(d, 0):
            mismatch = {"degree": d.to_json(), "u_side": h_u.get(d, 0), "e_side": h_e.get(d, 0)}
            break
    return IsomorphismReport(n, forward, backward, roundtrip_u, roundtrip_v, mismatch is None, window, mismatch)
