"""Exact polynomial algebra used as an independent oracle.

Coefficients live in Q (``Fraction``) or in a prime field (ints mod p).
Polynomials are dictionaries from exponent tuples to nonzero coefficients.

The heavy routines are deliberately plain: Buchberger with the two classical
pair criteria for global orders, Mora's tangent cone normal form for local
orders, and the Rabinowitsch trick for points on the torus.
"""
from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

INF = math.inf
DEFAULT_PRIME = 32003


class BudgetExceeded(RuntimeError):
    """A standard basis computation ran past its reduction budget."""


# ---------------------------------------------------------------------------
# fields

class Field:
    def __init__(self, p=None):
        if p is not None:
            if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
                raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def characteristic(self):
        return self.p or 0

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def __call__(self, value):
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def parse(self, text):
        text = str(text).strip()
        return self(Fraction(text))

    def inv(self, a):
        if self.p is None:
            return 1 / a
        return pow(a, self.p - 2, self.p)

    def random_nonzero(self, rng, bound=1000):
        if self.p is None:
            x = rng.randint(1, bound)
            return Fraction(x if rng.random() < 0.5 else -x)
        return rng.randint(1, self.p - 1)

    def to_json(self):
        return "Q" if self.p is None else {"Fp": self.p}


QQ = Field()


def GF(p):
    return Field(p)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return self.field(other)

    def __add__(self, other):
        return FieldElement(self.field, self._norm(self.value + self._lift(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self._norm(self.value - self._lift(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self._norm(self.value * self._lift(other)))

    def __truediv__(self, other):
        return FieldElement(self.field, self._norm(self.value * self.field.inv(self._lift(other))))

    def __neg__(self):
        return FieldElement(self.field, self._norm(-self.value))

    def __bool__(self):
        return self.value != 0

    def _norm(self, v):
        return v % self.field.p if self.field.p else v

    def __str__(self):
        return str(self.value)


# ---------------------------------------------------------------------------
# polynomials

class SparsePolynomial:
    """Polynomial in ``x1..xn`` with exact coefficients."""

    __slots__ = ("n", "field", "terms")

    def __init__(self, n, terms=None, field=QQ):
        self.n = n
        self.field = field
        clean = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {n}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent {exp}")
            c = field(coef.value if isinstance(coef, FieldElement) else coef)
            if c:
                clean[exp] = field(clean.get(exp, 0) + c) if exp in clean else c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    @classmethod
    def _raw(cls, n, terms, field):
        obj = cls.__new__(cls)
        obj.n, obj.field, obj.terms = n, field, terms
        return obj

    @classmethod
    def constant(cls, n, c, field=QQ):
        return cls(n, {(0,) * n: c}, field)

    @classmethod
    def variable(cls, n, i, field=QQ):
        return cls(n, {tuple(int(j == i - 1) for j in range(n)): 1}, field)

    def support(self):
        return sorted(self.terms)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, SparsePolynomial) and self.n == other.n
                and self.field == other.field and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n, self.field, tuple(sorted(self.terms.items()))))

    def _combine(self, other, sign):
        if not isinstance(other, SparsePolynomial):
            other = SparsePolynomial.constant(self.n, other, self.field)
        out = dict(self.terms)
        p = self.field.p
        for exp, c in other.terms.items():
            v = out.get(exp, 0) + sign * c
            if p:
                v %= p
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return SparsePolynomial._raw(self.n, out, self.field)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = self.field(c)
        if not c:
            return SparsePolynomial._raw(self.n, {}, self.field)
        p = self.field.p
        if p:
            return SparsePolynomial._raw(self.n, {e: v * c % p for e, v in self.terms.items()}, self.field)
        return SparsePolynomial._raw(self.n, {e: v * c for e, v in self.terms.items()}, self.field)

    def __mul__(self, other):
        if not isinstance(other, SparsePolynomial):
            return self.scale(other)
        out = {}
        p = self.field.p
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        if p:
            out = {e: v % p for e, v in out.items()}
        return SparsePolynomial._raw(self.n, {e: v for e, v in out.items() if v}, self.field)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = SparsePolynomial.constant(self.n, 1, self.field)
        for _ in range(k):
            result = result * self
        return result

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, point):
        total = self.field(0)
        p = self.field.p
        for exp, c in self.terms.items():
            term = c
            for x, e in zip(point, exp):
                term = term * self.field(x) ** e
            total = total + term
            if p:
                total %= p
        return total

    def restrict(self, I):
        """Set x_j = 0 for j outside I (1-based) and drop those variables."""
        idx = sorted(I)
        keep = [i - 1 for i in idx]
        off = [j for j in range(self.n) if j + 1 not in set(idx)]
        out = {}
        for exp, c in self.terms.items():
            if all(exp[j] == 0 for j in off):
                out[tuple(exp[i] for i in keep)] = c
        return SparsePolynomial._raw(len(keep), out, self.field)

    def with_terms(self, exps):
        return SparsePolynomial._raw(self.n, {e: self.terms[e] for e in exps}, self.field)

    def __repr__(self):
        return f"SparsePolynomial({self.to_expr()!r}, n={self.n}, field={self.field!r})"

    def to_expr(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exp) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def to_json(self):
        return [{"exp": list(e), "coef": str(self.terms[e])} for e in sorted(self.terms)]


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_polynomial(text, n, field=QQ):
    """Parse ``3*x1^2*x3 - 5/2*x2 + 1`` style text."""
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    terms = {}
    pos = 0
    for match in _TERM_RE.finditer(text):
        if match.start() != pos:
            raise ValueError(f"cannot parse polynomial near column {pos + 1}")
        pos = match.end()
        sign = -1 if match.group(1) == "-" else 1
        coef = Fraction(sign)
        exp = [0] * n
        for factor in match.group(2).split("*"):
            m = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
            if m:
                i = int(m.group(1))
                if not 1 <= i <= n:
                    raise ValueError(f"variable x{i} out of range for n={n}")
                exp[i - 1] += int(m.group(2) or 1)
            elif re.fullmatch(r"\d+(/\d+)?", factor):
                coef *= Fraction(factor)
            else:
                raise ValueError(f"bad factor {factor!r} near column {match.start() + 1}")
        exp = tuple(exp)
        terms[exp] = terms.get(exp, 0) + coef
    if pos != len(text):
        raise ValueError(f"cannot parse polynomial near column {pos + 1}")
    return SparsePolynomial(n, terms, field)


def partial_derivative(f: SparsePolynomial, i: int) -> SparsePolynomial:
    """d f / d x_i (1-based); terms vanish when the exponent is 0 mod char."""
    out = {}
    k = i - 1
    for exp, c in f.terms.items():
        e = exp[k]
        if e == 0:
            continue
        coef = f.field(c * e)
        if coef:
            out[exp[:k] + (e - 1,) + exp[k + 1:]] = coef
    return SparsePolynomial._raw(f.n, out, f.field)


def sample_admissible(supports, field=None, seed=0):
    """Random polynomials with a nonzero coefficient at every support point."""
    field = field or GF(DEFAULT_PRIME)
    rng = random.Random(seed)
    out = []
    for support in supports:
        if hasattr(support, "lattice_points"):
            points = support.lattice_points()
            n = support.ambient_dim
        else:
            points = sorted({tuple(p) for p in support})
            n = len(points[0])
        out.append(SparsePolynomial(n, {p: field.random_nonzero(rng) for p in points}, field))
    return out


# ---------------------------------------------------------------------------
# monomial orders

def _grevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


def _lex_key(exp):
    return exp


def _local_key(exp):
    # negative degree lex: lower degree is larger, ties broken by lex
    return (-sum(exp), exp)


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "global"
    name: str = "grevlex"
    weight: tuple = ()

    def key(self):
        if self.kind == "local":
            if self.weight:
                w = self.weight
                return lambda e: (-sum(a * b for a, b in zip(w, e)), e)
            return _local_key
        base = _lex_key if self.name == "lex" else _grevlex_key
        if self.weight:
            w = self.weight
            return lambda e: (sum(a * b for a, b in zip(w, e)), base(e))
        return base


GREVLEX = MonomialOrder("global", "grevlex")
LOCAL_DEGLEX = MonomialOrder("local", "neg-deglex")


@dataclass
class StandardBasisResult:
    basis: list
    standard_monomials: object  # sorted list, or None when infinite
    length: object  # int or INF

    @property
    def is_finite(self):
        return self.length != INF


# ---------------------------------------------------------------------------
# helpers on raw dictionaries

def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(terms, lm, field):
    inv = field.inv(terms[lm])
    p = field.p
    if p:
        return {e: c * inv % p for e, c in terms.items()}
    return {e: c * inv for e, c in terms.items()}


def _sub_multiple(h, g, shift, coef, p):
    """h -= coef * x^shift * g, in place."""
    for e, c in g.items():
        m = tuple(a + b for a, b in zip(e, shift))
        v = h.get(m, 0) - coef * c
        if p:
            v %= p
        if v:
            h[m] = v
        else:
            h.pop(m, None)


def standard_monomials(leading, n):
    """Monomials outside the ideal generated by ``leading`` (None if infinite)."""
    leading = list(leading)
    if any(not any(m) for m in leading):
        return []
    bounds = []
    for i in range(n):
        pure = [m[i] for m in leading if m[i] > 0 and all(m[j] == 0 for j in range(n) if j != i)]
        if not pure:
            return None
        bounds.append(min(pure))
    out = []
    for exp in product(*(range(b) for b in bounds)):
        if not any(_divides(m, exp) for m in leading):
            out.append(exp)
    return out


# ---------------------------------------------------------------------------
# Buchberger

def _groebner(polys, key, field, budget=None, stop_on_unit=False):
    p = field.p
    basis = []  # list of (lm, terms) with monic terms

    def lead(terms):
        return max(terms, key=key)

    def top_reduce(h):
        steps = 0
        while h:
            lm = lead(h)
            for glm, g in basis:
                if _divides(glm, lm):
                    shift = tuple(a - b for a, b in zip(lm, glm))
                    _sub_multiple(h, g, shift, h[lm], p)
                    steps += 1
                    break
            else:
                return h, steps
        return h, steps

    pairs = set()
    counter = 0

    def add(h):
        lm = lead(h)
        h = _monic(h, lm, field)
        idx = len(basis)
        basis.append((lm, h))
        for j in range(idx):
            pairs.add((j, idx))
        return lm

    for f in polys:
        terms = dict(f.terms)
        h, _ = top_reduce(terms)
        if h:
            lm = add(h)
            if stop_on_unit and not any(lm):
                return [(lm, basis[-1][1])]

    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_lcm(basis[ij[0]][0], basis[ij[1]][0])), ij))
        pairs.discard((i, j))
        lmi, gi = basis[i]
        lmj, gj = basis[j]
        lcm = _lcm(lmi, lmj)
        if all(a + b == c for a, b, c in zip(lmi, lmj, lcm)):
            continue
        chain = False
        for k, (lmk, _) in enumerate(basis):
            if k in (i, j) or not _divides(lmk, lcm):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                chain = True
                break
        if chain:
            continue
        s = {}
        _sub_multiple(s, gi, tuple(a - b for a, b in zip(lcm, lmi)), -1, p)
        _sub_multiple(s, gj, tuple(a - b for a, b in zip(lcm, lmj)), 1, p)
        h, steps = top_reduce(s)
        counter += steps + 1
        if budget is not None and counter > budget:
            raise BudgetExceeded(f"Buchberger exceeded {budget} reduction steps")
        if h:
            lm = add(h)
            if stop_on_unit and not any(lm):
                return [(lm, basis[-1][1])]
    return _interreduce(basis, key, field)


def _interreduce(basis, key, field):
    p = field.p
    # keep elements whose leading monomial is minimal
    lms = [lm for lm, _ in basis]
    keep = []
    for idx, (lm, g) in enumerate(basis):
        redundant = False
        for jdx, other in enumerate(lms):
            if jdx == idx or not _divides(other, lm):
                continue
            if other != lm or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append((lm, g))
    reduced = []
    for idx, (lm, g) in enumerate(keep):
        others = [item for j, item in enumerate(keep) if j != idx]
        h = dict(g)
        out = {}
        while h:
            m = max(h, key=key)
            for olm, og in others:
                if _divides(olm, m):
                    _sub_multiple(h, og, tuple(a - b for a, b in zip(m, olm)), h[m], p)
                    break
            else:
                out[m] = h.pop(m)
        reduced.append((lm, out))
    reduced.sort(key=lambda item: key(item[0]))
    return reduced


def buchberger(gens, order: MonomialOrder = GREVLEX, budget=None) -> StandardBasisResult:
    """Reduced Groebner basis for a global order, with quotient data."""
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("Groebner basis of the zero ideal is not supported")
    n, field = gens[0].n, gens[0].field
    key = order.key()
    reduced = _groebner(gens, key, field, budget)
    basis = [SparsePolynomial._raw(n, terms, field) for _, terms in reduced]
    std = standard_monomials([lm for lm, _ in reduced], n)
    return StandardBasisResult(basis, std, INF if std is None else len(std))


# ---------------------------------------------------------------------------
# Mora standard bases for local orders

def bezout_number(gens):
    out = 1
    for g in gens:
        out *= max(sum(e) for e in g.terms)
    return out


def _ecart(terms, lm):
    return max(sum(e) for e in terms) - sum(lm)


def _mora(gens, order, budget, cap=None):
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("standard basis of the zero ideal is not supported")
    n, field = gens[0].n, gens[0].field
    p = field.p
    key = order.key()
    steps = [0]
    # highest corner: once every monomial of degree `corner` is a leading
    # monomial, m^corner lies in the ideal and such terms can be dropped
    corner = [None]
    truncate_ok = not order.weight
    if truncate_ok and cap is not None:
        corner[0] = cap  # work modulo m^cap

    def lead(terms):
        return max(terms, key=key)

    def truncate(terms):
        if corner[0] is not None:
            for e in [e for e in terms if sum(e) >= corner[0]]:
                del terms[e]
        return terms

    def update_corner():
        if not truncate_ok:
            return
        std = standard_monomials([lm for lm, _ in basis], n)
        if std is not None:
            corner[0] = min(corner[0] or INF, 1 + max((sum(e) for e in std), default=-1))

    def tick():
        steps[0] += 1
        if budget is not None and steps[0] > budget:
            raise BudgetExceeded(f"Mora normal form exceeded {budget} reduction steps")

    def normal_form(f, basis):
        h = dict(f)
        pool = [(lm, g, _ecart(g, lm)) for lm, g in basis]
        while h:
            lm = lead(h)
            cands = [item for item in pool if _divides(item[0], lm)]
            if not cands:
                return h
            glm, g, ge = min(cands, key=lambda item: (item[2], key(item[0])))
            he = _ecart(h, lm)
            if ge > he:
                pool.append((lm, dict(h), he))
            coef = h[lm] * field.inv(g[glm])
            if p:
                coef %= p
            _sub_multiple(h, g, tuple(a - b for a, b in zip(lm, glm)), coef, p)
            truncate(h)
            tick()
        return h

    basis = []
    for f in gens:
        terms = dict(f.terms)
        lm = lead(terms)
        basis.append((lm, _monic(terms, lm, field)))
        if not any(lm):
            return basis
    update_corner()
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        pairs.sort(key=lambda ij: sum(_lcm(basis[ij[0]][0], basis[ij[1]][0])))
        i, j = pairs.pop(0)
        lmi, gi = basis[i]
        lmj, gj = basis[j]
        lcm = _lcm(lmi, lmj)
        if corner[0] is not None and sum(lcm) >= corner[0]:
            continue
        s = {}
        _sub_multiple(s, gi, tuple(a - b for a, b in zip(lcm, lmi)), -1, p)
        _sub_multiple(s, gj, tuple(a - b for a, b in zip(lcm, lmj)), 1, p)
        h = normal_form(truncate(s), basis)
        if h:
            lm = lead(h)
            basis.append((lm, _monic(h, lm, field)))
            if not any(lm):
                return basis
            update_corner()
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    return basis


def mora_standard_basis(gens, order: MonomialOrder = LOCAL_DEGLEX,
                        budget=200000) -> StandardBasisResult:
    """Standard basis for a local order (tangent cone algorithm).

    Square systems under a degree order are first treated modulo m^k for
    k = 2, 4, 8, ... up to D + 1, D the Bezout number.  When the leading
    monomials contain all monomials of some degree c < k, Nakayama gives
    m^c inside the ideal and the truncated basis is already exact.  An
    isolated zero has length at most D, so failing at k = D + 1 means the
    zero is not isolated.
    """
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("standard basis of the zero ideal is not supported")
    n, field = gens[0].n, gens[0].field
    if order.weight or len(gens) != n:
        return _basis_result(_mora(gens, order, budget), n, field)
    limit = 1 + bezout_number(gens)
    k = 2
    while True:
        k = min(k, limit)
        raw = _mora(gens, order, budget, cap=k)
        std = standard_monomials([lm for lm, _ in raw], n)
        if std is not None and 1 + max((sum(e) for e in std), default=-1) < k:
            return _basis_result(raw, n, field)
        if k == limit:
            return StandardBasisResult([SparsePolynomial._raw(n, t, field) for _, t in raw], None, INF)
        k *= 2


def _basis_result(raw, n, field):
    std = standard_monomials([lm for lm, _ in raw], n)
    basis = [SparsePolynomial._raw(n, terms, field) for _, terms in raw]
    return StandardBasisResult(basis, std, INF if std is None else len(std))


def mora_local_length(gens, order: MonomialOrder = LOCAL_DEGLEX, budget=200000):
    """dim_K K[[x]]/<gens>: an int, or ``INF``; raises BudgetExceeded."""
    return mora_standard_basis(gens, order, budget).length


def local_length_by_powers(gens, max_power=40, budget=None):
    """Local length from global bases of <gens> + m^N, N = 1, 2, ...

    The sequence dim K[x]/(I + m^N) is non-decreasing; two equal consecutive
    terms give m^N inside I locally (Nakayama), so that value is the answer.
    Returns None when no stabilization happened up to ``max_power``.
    """
    gens = [g for g in gens if g]
    n, field = gens[0].n, gens[0].field
    previous = None
    for power in range(1, max_power + 1):
        extra = [SparsePolynomial._raw(n, {e: field(1)}, field)
                 for e in _exponents_of_degree(n, power)]
        # I + m^N is supported at the origin only, so the global count is local
        value = buchberger(gens + extra, GREVLEX, budget).length
        if previous is not None and value == previous:
            return value
        previous = value
    return None


def _exponents_of_degree(n, d):
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _exponents_of_degree(n - 1, d - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# points on the torus

def _rabinowitsch(gens):
    n, field = gens[0].n, gens[0].field
    lifted = [SparsePolynomial._raw(n + 1, {e + (0,): c for e, c in g.terms.items()}, field)
              for g in gens]
    unit = SparsePolynomial(n + 1, {(1,) * (n + 1): 1, (0,) * (n + 1): -1}, field)
    return lifted + [unit]


def torus_has_common_zero(gens) -> bool:
    """Do the polynomials vanish together somewhere on the torus of the closure?"""
    gens = [g for g in gens if g]
    if not gens:
        return True
    if any(len(g.terms) == 1 for g in gens):
        return False
    field = gens[0].field
    reduced = _groebner(_rabinowitsch(gens), _grevlex_key, field, stop_on_unit=True)
    return not (len(reduced) == 1 and not any(reduced[0][0]))


def torus_root_count(gens, budget=None):
    """Number of roots on the torus counted with multiplicity (INF if not finite)."""
    gens = [g for g in gens if g]
    return buchberger(_rabinowitsch(gens), GREVLEX, budget).length


def torus_zero_bruteforce(gens, limit=10 ** 6):
    """Search a zero with all coordinates in F_p^*; a one-sided witness finder."""
    gens = [g for g in gens if g]
    field = gens[0].field if gens else None
    if field is None or field.p is None:
        raise ValueError("brute force search needs a prime field")
    n = gens[0].n
    if (field.p - 1) ** n > limit:
        raise ValueError("search space too large")
    for point in product(range(1, field.p), repeat=n):
        if all(g.evaluate(point) == 0 for g in gens):
            return point
    return None
