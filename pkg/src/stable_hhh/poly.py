"""Sparse multivariate polynomials over Q with a tri-graded variable registry.

Every variable carries a degree ``q^i t^j a^k``.  Polynomials are immutable
maps from exponent tuples (one slot per registry variable) to nonzero exact
rationals.  Coefficients are kept as ``int`` when integral and
``fractions.Fraction`` otherwise; no floating point is ever involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Sequence, Tuple, Union

Exps = Tuple[int, ...]
Rational = Union[int, Fraction]

KINDS = ("x", "y", "u", "v", "alpha", "aux")


class PolyError(ValueError):
    pass


class RegistryMismatch(PolyError):
    pass


class InhomogeneousError(PolyError):
    pass


class ZeroPolynomialError(PolyError):
    pass


class TriDegree(NamedTuple):
    """Degree ``q^q t^t a^a``; ``t`` is homological, ``a`` Hochschild."""

    q: int = 0
    t: int = 0
    a: int = 0

    def __add__(self, other):  # type: ignore[override]
        return TriDegree(self.q + other.q, self.t + other.t, self.a + other.a)

    def __sub__(self, other):
        return TriDegree(self.q - other.q, self.t - other.t, self.a - other.a)

    def __neg__(self):
        return TriDegree(-self.q, -self.t, -self.a)

    def scale(self, k: int) -> "TriDegree":
        return TriDegree(k * self.q, k * self.t, k * self.a)

    def to_json(self) -> dict:
        return {"q": self.q, "t": self.t, "a": self.a}

    @classmethod
    def from_json(cls, d: Mapping[str, int]) -> "TriDegree":
        return cls(int(d.get("q", 0)), int(d.get("t", 0)), int(d.get("a", 0)))


ZERO_DEGREE = TriDegree(0, 0, 0)


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    degree: TriDegree
    index: Tuple[int, ...] = ()


def x_degree() -> TriDegree:
    return TriDegree(2, 0, 0)


def u_degree(k: int) -> TriDegree:
    return TriDegree(-2 * k, 2, 0)


def v_degree(i: int, j: int) -> TriDegree:
    return TriDegree(2 * (i - j) - 2, 2, 0)


def v_name(i: int, j: int) -> str:
    return f"v{i}{j}" if max(i, j) < 10 else f"v{i}_{j}"


class Registry:
    """Ordered, immutable list of graded variables.

    The position of a variable is its slot in every exponent tuple.  Earlier
    variables are *smaller* in the monomial order used by the Groebner code.
    """

    __slots__ = ("variables", "n", "_index", "_key", "_hash")

    def __init__(self, variables: Iterable[Variable], n: int | None = None):
        self.variables: Tuple[Variable, ...] = tuple(variables)
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise PolyError(f"duplicate variable names in registry: {names}")
        for v in self.variables:
            if v.kind not in KINDS:
                raise PolyError(f"unknown variable kind {v.kind!r}")
        self.n = n
        if n is not None:
            for v in self.variables:
                if any(not 1 <= i <= n for i in v.index):
                    raise PolyError(f"index of {v.name} outside [1, {n}]")
        self._index = {name: k for k, name in enumerate(names)}
        self._key = tuple((v.name, v.degree) for v in self.variables)
        self._hash = hash(self._key)

    # -- construction -------------------------------------------------
    @classmethod
    def standard(cls, n: int, kinds: Sequence[str] = ("x", "y", "u")) -> "Registry":
        """Registry in the fixed order x < y < u < v (within a kind by index)."""
        vs = []
        for kind in ("x", "y", "u", "v"):
            if kind not in kinds:
                continue
            if kind == "x":
                vs += [Variable(f"x{i}", "x", x_degree(), (i,)) for i in range(1, n + 1)]
            elif kind == "y":
                vs += [Variable(f"y{i}", "y", x_degree(), (i,)) for i in range(1, n + 1)]
            elif kind == "u":
                vs += [Variable(f"u{k}", "u", u_degree(k), (k,)) for k in range(1, n + 1)]
            else:
                vs += [
                    Variable(v_name(i, j), "v", v_degree(i, j), (i, j))
                    for i in range(1, n + 1)
                    for j in range(i + 1, n + 1)
                ]
        return cls(vs, n)

    def extend(self, extra: Iterable[Variable]) -> "Registry":
        return Registry(self.variables + tuple(extra), self.n)

    def without(self, names: Iterable[str]) -> "Registry":
        drop = set(names)
        return Registry([v for v in self.variables if v.name not in drop], self.n)

    # -- queries ------------------------------------------------------
    def __len__(self) -> int:
        return len(self.variables)

    def __iter__(self) -> Iterator[Variable]:
        return iter(self.variables)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Registry):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Registry({', '.join(self.names)})"

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolyError(f"variable {name!r} not in {self!r}") from None

    def degree(self, name: str) -> TriDegree:
        return self.variables[self.index(name)].degree

    def degree_of_exps(self, e: Exps) -> TriDegree:
        q = t = a = 0
        for k, v in zip(e, self.variables):
            if k:
                q += k * v.degree.q
                t += k * v.degree.t
                a += k * v.degree.a
        return TriDegree(q, t, a)

    def to_json(self) -> list:
        return [{"name": v.name, "kind": v.kind, "degree": v.degree.to_json()} for v in self.variables]

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "Registry":
        return cls(
            Variable(d["name"], d.get("kind", "aux"), TriDegree.from_json(d["degree"]))
            for d in data
        )


def _norm(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def as_rational(c) -> Rational:
    if isinstance(c, (int, Fraction)):
        return _norm(c)
    if isinstance(c, str):
        return _norm(Fraction(c))
    raise PolyError(f"not an exact rational: {c!r}")


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("registry", "terms", "_hash")

    def __init__(self, registry: Registry, terms: Mapping[Exps, Rational] | None = None, *, _trusted=False):
        self.registry = registry
        if _trusted:
            self.terms: Dict[Exps, Rational] = terms  # type: ignore[assignment]
        else:
            nv = len(registry)
            clean: Dict[Exps, Rational] = {}
            for e, c in (terms or {}).items():
                if len(e) != nv:
                    raise RegistryMismatch(f"exponent vector {e} does not fit {registry!r}")
                c = as_rational(c)
                if c:
                    clean[tuple(e)] = c
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, registry: Registry) -> "Poly":
        return cls(registry, {}, _trusted=True)

    @classmethod
    def const(cls, registry: Registry, c: Rational) -> "Poly":
        c = as_rational(c)
        if not c:
            return cls.zero(registry)
        return cls(registry, {(0,) * len(registry): c}, _trusted=True)

    @classmethod
    def var(cls, registry: Registry, name: str) -> "Poly":
        e = [0] * len(registry)
        e[registry.index(name)] = 1
        return cls(registry, {tuple(e): 1}, _trusted=True)

    @classmethod
    def monomial(cls, registry: Registry, exps: Mapping[str, int], coeff: Rational = 1) -> "Poly":
        e = [0] * len(registry)
        for name, k in exps.items():
            e[registry.index(name)] += k
        return cls(registry, {tuple(e): coeff})

    # -- basic protocol -----------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.registry == other.registry and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.registry, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.registry, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.registry != self.registry:
                raise RegistryMismatch(f"{self.registry!r} vs {other.registry!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.registry, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return Poly(self.registry, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.registry, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c: Rational) -> "Poly":
        c = as_rational(c)
        if not c:
            return Poly.zero(self.registry)
        return Poly(self.registry, {e: _norm(v * c) for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[Exps, Rational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly(self.registry, {e: _norm(c) for e, c in out.items()}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise PolyError("negative power")
        result = Poly.const(self.registry, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ----------------------------------------------------
    def variables(self) -> Tuple[str, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(self.registry.variables[i].name for i in sorted(used))

    def involves(self, name: str) -> bool:
        i = self.registry.index(name)
        return any(e[i] for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.registry.index(name)
        return max((e[i] for e in self.terms), default=0)

    def coefficient(self, exps: Mapping[str, int]) -> Rational:
        e = [0] * len(self.registry)
        for name, k in exps.items():
            e[self.registry.index(name)] = k
        return self.terms.get(tuple(e), 0)

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * len(self.registry), 0)

    def is_constant(self) -> bool:
        z = (0,) * len(self.registry)
        return all(e == z for e in self.terms)

    def derivative(self, name: str) -> "Poly":
        i = self.registry.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Poly(self.registry, out, _trusted=True)

    def to_registry(self, registry: Registry) -> "Poly":
        """Re-express in another registry containing every variable used here."""
        if registry == self.registry:
            return self
        pos = [registry.index(v.name) if v.name in registry else None for v in self.registry.variables]
        out = {}
        nv = len(registry)
        for e, c in self.terms.items():
            e2 = [0] * nv
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise RegistryMismatch(
                            f"{self.registry.variables[i].name} is missing from {registry!r}"
                        )
                    e2[pos[i]] = k
            out[tuple(e2)] = c
        return Poly(registry, out, _trusted=True)

    # -- printing -----------------------------------------------------
    def sorted_terms(self):
        """Terms in descending graded reverse lexicographic order."""
        return sorted(self.terms.items(), key=lambda item: grevlex_key(item[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.registry.names
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"Poly({self})"

    # -- serialization ------------------------------------------------
    def to_json(self) -> list:
        names = self.registry.names
        return [
            {"coeff": str(c), "exps": {names[i]: k for i, k in enumerate(e) if k}}
            for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, registry: Registry, data: Sequence[Mapping]) -> "Poly":
        out: Dict[Exps, Rational] = {}
        for term in data:
            coeff = term["coeff"]
            if not isinstance(coeff, str) or "." in coeff or "e" in coeff.lower():
                raise PolyError(f"coefficient must be a 'p/q' string, got {coeff!r}")
            e = [0] * len(registry)
            for name, k in term["exps"].items():
                e[registry.index(name)] += int(k)
            key = tuple(e)
            out[key] = out.get(key, 0) + Fraction(coeff)
        return cls(registry, out)


def grevlex_key(e: Exps):
    """Sort key for graded reverse lex with the last registry slot largest."""
    return (sum(e), tuple(-k for k in e))


def arith(op: str, lhs: Poly, rhs) -> Poly:
    """Dispatch ``add``, ``mul``, ``neg`` or ``scale``."""
    if op == "add":
        return lhs + lhs._coerce(rhs)
    if op == "mul":
        return lhs * rhs
    if op == "neg":
        return -lhs
    if op == "scale":
        return lhs.scale(rhs)
    raise PolyError(f"unknown op {op!r}")


def substitute(p: Poly, assignment: Mapping[str, Poly], registry: Registry | None = None) -> Poly:
    """Simultaneous substitution of variables by polynomials.

    The target registry is ``registry`` if given, else the common registry of
    the assigned polynomials, else ``p.registry``.  Unassigned variables map
    to the variable of the same name in the target registry.
    """
    if registry is None:
        regs = {q.registry for q in assignment.values()}
        if len(regs) > 1:
            raise RegistryMismatch("assigned polynomials live in different registries")
        registry = regs.pop() if regs else p.registry
    images = []
    for v in p.registry.variables:
        if v.name in assignment:
            img = assignment[v.name]
            if img.registry != registry:
                img = img.to_registry(registry)
        else:
            if v.name not in registry:
                images.append(None)
                continue
            img = Poly.var(registry, v.name)
        images.append(img)

    # Cache powers; the dense loop below dominates for large inputs.
    power_cache: Dict[Tuple[int, int], Poly] = {}

    def power(i: int, k: int) -> Poly:
        key = (i, k)
        if key not in power_cache:
            img = images[i]
            if img is None:
                raise RegistryMismatch(
                    f"{p.registry.variables[i].name} has no image in {registry!r}"
                )
            power_cache[key] = img if k == 1 else power(i, k - 1) * img
        return power_cache[key]

    acc: Dict[Exps, Rational] = {}
    for e, c in p.terms.items():
        term = Poly.const(registry, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        for e2, c2 in term.terms.items():
            s = acc.get(e2, 0) + c2
            if s:
                acc[e2] = s
            else:
                del acc[e2]
    return Poly(registry, {e: _norm(c) for e, c in acc.items()}, _trusted=True)


def tridegree_of(p: Poly) -> TriDegree:
    if p.is_zero():
        raise ZeroPolynomialError("zero-polynomial has no tridegree")
    degs = {p.registry.degree_of_exps(e) for e in p.terms}
    if len(degs) != 1:
        raise InhomogeneousError(f"inhomogeneous polynomial: degrees {sorted(degs)}")
    return degs.pop()


def is_homogeneous(p: Poly) -> bool:
    return p.is_zero() or len({p.registry.degree_of_exps(e) for e in p.terms}) == 1


class PolyRing:
    """Convenience handle: attribute-free access to the variables of a registry."""

    def __init__(self, registry: Registry):
        self.registry = registry

    def __call__(self, name: str) -> Poly:
        return Poly.var(self.registry, name)

    def const(self, c: Rational) -> Poly:
        return Poly.const(self.registry, c)

    def zero(self) -> Poly:
        return Poly.zero(self.registry)

    def one(self) -> Poly:
        return Poly.const(self.registry, 1)
