"""Exact scalar arithmetic: sparse multivariate polynomials, rational
functions, and truncated power series.

Every coefficient is a `fractions.Fraction`; there is no floating point
anywhere.  A polynomial is a dictionary mapping monomials to coefficients,
where a monomial is an index-sorted tuple of (variable_index, exponent)
pairs with no zero exponents: over the ring (x0, x1, x2) the monomial of
x0^3*x2 is ((0, 3), (2, 1)).

The term order for printing, leading terms and denominator normalization
is graded reverse lexicographic (grevlex) over the declared variable
order.  Canonical form is unique for a fixed ring, so string equality of
printed polynomials is polynomial equality.

Polynomials over the function field Q(s) carry `RationalFunction`
coefficients instead of Fractions; the arithmetic here is agnostic as long
as coefficients support +, -, *, / and comparison with 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Mono = tuple  # tuple[tuple[int, int], ...], index-sorted, no zero exponents
Scalar = Union[Fraction, "RationalFunction"]

_ONE_MONO: Mono = ()


class ScalarError(ValueError):
    """Malformed scalar construction or operation."""


class DenominatorZeroError(ZeroDivisionError):
    """Evaluation hit a zero of a denominator."""


class IdenticallySingularError(ValueError):
    """All binary forms handed to the common-zero test vanish identically."""


# ---------------------------------------------------------------------------
# monomials

def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for i, e in b:
        exps[i] = exps.get(i, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def _mono_dense(m: Mono, nvars: int) -> tuple:
    dense = [0] * nvars
    for i, e in m:
        dense[i] = e
    return tuple(dense)


def _grevlex_key(m: Mono, nvars: int) -> tuple:
    # Sorting by this key ascending gives grevlex ascending; a term is
    # grevlex-larger when, at the first difference of the reversed exponent
    # vectors, its entry is smaller.
    dense = _mono_dense(m, nvars)
    return (_mono_degree(m), tuple(-e for e in reversed(dense)))


def _mono_divides(a: Mono, b: Mono) -> bool:
    bd = dict(b)
    return all(bd.get(i, 0) >= e for i, e in a)


def _mono_div(a: Mono, b: Mono) -> Mono:
    # a / b, assuming divisibility
    exps = dict(a)
    for i, e in b:
        exps[i] -= e
    return tuple(sorted((i, e) for i, e in exps.items() if e))


def _mono_str(m: Mono, ring: Sequence[str]) -> str:
    if not m:
        return "1"
    parts = []
    for i, e in m:
        parts.append(ring[i] if e == 1 else f"{ring[i]}^{e}")
    return "*".join(parts)


# ---------------------------------------------------------------------------
# polynomials

class MultiPoly:
    """Sparse multivariate polynomial over an ordered variable ring.

    Immutable after construction; the terms dict is canonical (no zero
    coefficients stored).
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Mapping[Mono, Scalar]):
        ring = tuple(ring)
        if len(set(ring)) != len(ring):
            raise ScalarError(f"ring has repeated variables: {ring}")
        clean = {}
        for mono, coef in terms.items():
            if isinstance(coef, int):
                coef = Fraction(coef)
            if coef == 0:
                continue
            prev = -1
            for i, e in mono:
                if not (prev < i < len(ring)) or e <= 0:
                    raise ScalarError(f"bad monomial {mono} over ring {ring}")
                prev = i
            clean[mono] = coef
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring: Sequence[str]) -> "MultiPoly":
        return cls(ring, {})

    @classmethod
    def const(cls, ring: Sequence[str], c) -> "MultiPoly":
        return cls(ring, {_ONE_MONO: c if not isinstance(c, int) else Fraction(c)})

    @classmethod
    def variable(cls, ring: Sequence[str], name: str) -> "MultiPoly":
        ring = tuple(ring)
        if name not in ring:
            raise ScalarError(f"variable {name!r} not in ring {ring}")
        return cls(ring, {((ring.index(name), 1),): Fraction(1)})

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(m == _ONE_MONO for m in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ScalarError(f"not a constant: {self}")
        return self.terms.get(_ONE_MONO, Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(_mono_degree(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        idx = self.ring.index(name)
        deg = -1 if not self.terms else 0
        for m in self.terms:
            deg = max(deg, dict(m).get(idx, 0))
        return deg

    def is_homogeneous(self) -> bool:
        degs = {_mono_degree(m) for m in self.terms}
        return len(degs) <= 1

    def variables_used(self) -> tuple:
        seen = set()
        for m in self.terms:
            for i, _ in m:
                seen.add(i)
        return tuple(self.ring[i] for i in sorted(seen))

    def leading(self) -> tuple:
        """(monomial, coefficient) of the grevlex-largest term."""
        if not self.terms:
            raise ScalarError("zero polynomial has no leading term")
        n = len(self.ring)
        mono = max(self.terms, key=lambda m: _grevlex_key(m, n))
        return mono, self.terms[mono]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise ScalarError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, RationalFunction)):
            return MultiPoly.const(self.ring, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            if other == 0:
                return MultiPoly.zero(self.ring)
            return MultiPoly(self.ring, {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if other.ring != self.ring:
            raise ScalarError(f"ring mismatch: {self.ring} vs {other.ring}")
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ScalarError(f"polynomial power must be a nonnegative integer, got {k!r}")
        result = MultiPoly.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, (Fraction, RationalFunction)):
            if other == 0:
                raise ZeroDivisionError("division by zero scalar")
            return self * (1 / other if isinstance(other, Fraction) else other.inverse())
        if isinstance(other, MultiPoly):
            return RationalFunction(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction(MultiPoly.const(self.ring, other), self)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus and substitution ------------------------------------------

    def diff(self, name: str) -> "MultiPoly":
        idx = self.ring.index(name)
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(idx, 0)
            if e == 0:
                continue
            d[idx] = e - 1
            mono = tuple(sorted((i, k) for i, k in d.items() if k))
            s = out.get(mono, 0) + c * e
            if s == 0:
                out.pop(mono, None)
            else:
                out[mono] = s
        return MultiPoly(self.ring, out)

    def substitute(self, assignment: Mapping[str, object],
                   target_ring: Sequence[str] | None = None) -> "MultiPoly":
        """Substitute polynomials (or scalars) for variables.

        Unassigned variables map to themselves and must exist in the target
        ring.  Assigned values may be MultiPoly over the target ring, or
        scalars.
        """
        if target_ring is None:
            target_ring = self.ring
        target_ring = tuple(target_ring)
        images = {}
        for i, name in enumerate(self.ring):
            if name in assignment:
                val = assignment[name]
                if isinstance(val, MultiPoly):
                    if val.ring != target_ring:
                        raise ScalarError("substitution value ring mismatch")
                    images[i] = val
                else:
                    images[i] = MultiPoly.const(target_ring, val)
            else:
                images[i] = MultiPoly.variable(target_ring, name)
        powers: dict = {}

        def img_pow(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] ** e
            return powers[key]

        result = MultiPoly.zero(target_ring)
        for m, c in self.terms.items():
            term = MultiPoly.const(target_ring, c)
            for i, e in m:
                term = term * img_pow(i, e)
            result = result + term
        return result

    def eval_at(self, assignment: Mapping[str, Scalar]) -> Scalar:
        """Evaluate with a scalar for every variable that occurs."""
        result = Fraction(0)
        powers: dict = {}
        for m, c in self.terms.items():
            term = c
            for i, e in m:
                name = self.ring[i]
                if name not in assignment:
                    raise ScalarError(f"no value for variable {name!r}")
                key = (i, e)
                if key not in powers:
                    powers[key] = assignment[name] ** e
                term = term * powers[key]
            result = result + term
        return result

    def collect(self, name: str) -> dict:
        """Coefficients by power of one variable, as polynomials over the
        ring with that variable removed."""
        idx = self.ring.index(name)
        sub_ring = tuple(v for v in self.ring if v != name)
        remap = {i: sub_ring.index(v) for i, v in enumerate(self.ring) if v != name}
        buckets: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            k = d.pop(idx, 0)
            mono = tuple(sorted((remap[i], e) for i, e in d.items()))
            bucket = buckets.setdefault(k, {})
            bucket[mono] = bucket.get(mono, 0) + c
        return {k: MultiPoly(sub_ring, t) for k, t in buckets.items()}

    def restrict_ring(self, new_ring: Sequence[str]) -> "MultiPoly":
        """Re-express over another ring containing all used variables."""
        new_ring = tuple(new_ring)
        remap = {}
        for name in self.variables_used():
            if name not in new_ring:
                raise ScalarError(f"variable {name!r} missing from ring {new_ring}")
        for i, name in enumerate(self.ring):
            if name in new_ring:
                remap[i] = new_ring.index(name)
        out = {}
        for m, c in self.terms.items():
            mono = tuple(sorted((remap[i], e) for i, e in m))
            out[mono] = c
        return MultiPoly(new_ring, out)

    def rename_vars(self, mapping: Mapping[str, str]) -> "MultiPoly":
        new_ring = tuple(mapping.get(v, v) for v in self.ring)
        return MultiPoly(new_ring, self.terms)

    # -- printing -----------------------------------------------------------

    def sorted_terms(self) -> list:
        n = len(self.ring)
        return sorted(self.terms.items(), key=lambda kv: _grevlex_key(kv[0], n),
                      reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for mono, coef in self.sorted_terms():
            if isinstance(coef, Fraction):
                neg = coef < 0
                mag = -coef if neg else coef
                if mono == _ONE_MONO:
                    body = str(mag)
                elif mag == 1:
                    body = _mono_str(mono, self.ring)
                else:
                    body = f"{mag}*{_mono_str(mono, self.ring)}"
                chunks.append(("-" if neg else "+", body))
            else:
                body = f"({coef})"
                if mono != _ONE_MONO:
                    body = f"{body}*{_mono_str(mono, self.ring)}"
                chunks.append(("+", body))
        sign, body = chunks[0]
        out = body if sign == "+" else f"-{body}"
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self.ring!r}, {self})"


# ---------------------------------------------------------------------------
# gcd and exact division (Fraction coefficients only)

def _check_fraction_coeffs(p: MultiPoly):
    for c in p.terms.values():
        if not isinstance(c, Fraction):
            raise ScalarError("gcd/division requires Fraction coefficients")


def poly_exact_div(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Exact division f / g; raises if g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if f.is_zero():
        return MultiPoly.zero(f.ring)
    if g.is_constant():
        return f * (Fraction(1) / g.constant_value())
    n = len(f.ring)
    gm, gc = g.leading()
    quot: dict = {}
    r = f
    while r.terms:
        rm, rc = r.leading()
        if not _mono_divides(gm, rm):
            raise ScalarError(f"inexact polynomial division: {f} by {g}")
        qm = _mono_div(rm, gm)
        qc = rc / gc
        quot[qm] = quot.get(qm, 0) + qc
        r = r - MultiPoly(f.ring, {qm: qc}) * g
    return MultiPoly(f.ring, quot)


def _uni_view(p: MultiPoly, idx: int) -> dict:
    """View as univariate in variable idx: degree -> coefficient MultiPoly."""
    buckets: dict = {}
    for m, c in p.terms.items():
        d = dict(m)
        k = d.pop(idx, 0)
        mono = tuple(sorted(d.items()))
        bucket = buckets.setdefault(k, {})
        bucket[mono] = bucket.get(mono, 0) + c
    return {k: MultiPoly(p.ring, t) for k, t in buckets.items() if MultiPoly(p.ring, t)}


def _uni_assemble(view: dict, ring, idx: int) -> MultiPoly:
    terms: dict = {}
    for k, coefpoly in view.items():
        for m, c in coefpoly.terms.items():
            d = dict(m)
            if k:
                d[idx] = k
            terms[tuple(sorted(d.items()))] = c
    return MultiPoly(ring, terms)


def _content(view: dict, ring) -> MultiPoly:
    g = MultiPoly.zero(ring)
    for coefpoly in view.values():
        g = poly_gcd(g, coefpoly)
        if g.is_constant() and not g.is_zero():
            break
    return g


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Monic gcd (grevlex-leading coefficient 1) via primitive PRS."""
    if f.ring != g.ring:
        raise ScalarError("gcd ring mismatch")
    if f.is_zero():
        return _make_monic(g)
    if g.is_zero():
        return _make_monic(f)
    _check_fraction_coeffs(f)
    _check_fraction_coeffs(g)
    if f.is_constant() or g.is_constant():
        return MultiPoly.const(f.ring, 1)
    used = set(f.variables_used()) | set(g.variables_used())
    idx = max(f.ring.index(v) for v in used)
    fu, gu = _uni_view(f, idx), _uni_view(g, idx)
    cf, cg = _content(fu, f.ring), _content(gu, f.ring)
    ccont = poly_gcd(cf, cg)
    a = _primitive(fu, cf, f.ring)
    b = _primitive(gu, cg, f.ring)
    if max(a) < max(b):
        a, b = b, a
    while True:
        r = _pseudo_rem(a, b, f.ring)
        if not r:
            break
        cr = _content(r, f.ring)
        a, b = b, _primitive(r, cr, f.ring)
    prim = _uni_assemble(b, f.ring, idx)
    return _make_monic(ccont.restrict_ring(f.ring) * prim if not ccont.is_constant()
                       else prim)


def _primitive(view: dict, content: MultiPoly, ring) -> dict:
    if content.is_constant():
        c = content.constant_value()
        if c == 1:
            return view
        return {k: p * (Fraction(1) / c) for k, p in view.items()}
    return {k: poly_exact_div(p, content) for k, p in view.items()}


def _pseudo_rem(a: dict, b: dict, ring) -> dict:
    """One polynomial remainder step sequence in the main variable.

    Multiplies by the leading coefficient of b as needed so no division is
    required; only valid up to content, which primitive PRS removes.
    """
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        new = {}
        for k, p in r.items():
            if k == dr:
                continue
            new[k] = p * lb
        for k, p in b.items():
            if k == db:
                continue
            kk = k + dr - db
            q = new.get(kk, MultiPoly.zero(ring)) - lr * p
            if q:
                new[kk] = q
            else:
                new.pop(kk, None)
        r = {k: p for k, p in new.items() if p}
    return r


def _make_monic(p: MultiPoly) -> MultiPoly:
    if p.is_zero():
        return p
    _, lc = p.leading()
    if lc == 1:
        return p
    return p * (Fraction(1) / lc)


def univariate_coeffs(p: MultiPoly, name: str) -> list:
    """Dense coefficient list [c0, c1, ...] of a univariate polynomial."""
    idx = p.ring.index(name)
    for m in p.terms:
        for i, _ in m:
            if i != idx:
                raise ScalarError(f"{p} is not univariate in {name!r}")
    deg = p.degree_in(name)
    out = [Fraction(0)] * (deg + 1)
    for m, c in p.terms.items():
        out[dict(m).get(idx, 0)] = c
    return out


def rational_roots(p: MultiPoly, name: str) -> list:
    """All rational roots of a univariate polynomial, via the rational root
    theorem applied to the integer-cleared form."""
    coeffs = univariate_coeffs(p, name)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    mult = 1
    for c in coeffs:
        mult = mult * c.denominator // _gcd_int(mult, c.denominator)
    ints = [int(c * mult) for c in coeffs]
    k = 0
    while ints[k] == 0:
        k += 1
    roots = [] if k == 0 else [Fraction(0)]
    ints = ints[k:]
    a0, an = abs(ints[0]), abs(ints[-1])
    for p_ in _divisors(a0):
        for q_ in _divisors(an):
            for cand in (Fraction(p_, q_), Fraction(-p_, q_)):
                if cand in roots:
                    continue
                if sum(c * cand ** i for i, c in enumerate(ints)) == 0:
                    roots.append(cand)
    return sorted(roots)


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n: int) -> list:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# rational functions

class RationalFunction:
    """Quotient of two polynomials over the same ring.

    Normalized so that gcd(num, den) = 1 and the denominator's grevlex
    leading coefficient is 1; the sign lives in the numerator.  Zero is
    0/1.  Equality of normalized representatives is therefore literal.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *,
                 _normalized: bool = False):
        if den is None:
            den = MultiPoly.const(num.ring, 1)
        if num.ring != den.ring:
            raise ScalarError("numerator/denominator ring mismatch")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            num, den = _normalize_fraction(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def const(cls, ring, c) -> "RationalFunction":
        return cls(MultiPoly.const(ring, c), MultiPoly.const(ring, 1), _normalized=True)

    @classmethod
    def variable(cls, ring, name: str) -> "RationalFunction":
        return cls(MultiPoly.variable(ring, name), MultiPoly.const(ring, 1),
                   _normalized=True)

    @property
    def ring(self):
        return self.num.ring

    def is_polynomial(self) -> bool:
        return self.den == 1

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise ScalarError(f"not a polynomial: {self}")
        return self.num

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverting zero")
        return RationalFunction(self.den, self.num)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.ring != self.ring:
                raise ScalarError("ring mismatch")
            return other
        if isinstance(other, MultiPoly):
            # A polynomial over another ring is treating *self* as its
            # coefficient scalar; let MultiPoly's reflected method handle it.
            if other.ring != self.ring:
                return None
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.const(self.ring, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ScalarError("power must be an integer")
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.den == 1 and self.num == other
        if isinstance(other, MultiPoly):
            return self.den == 1 and self.num == other
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __bool__(self):
        return not self.num.is_zero()

    def __hash__(self):
        if self.den == 1 and self.num.is_constant():
            return hash(self.num.terms.get(_ONE_MONO, Fraction(0)))
        return hash((self.num, self.den))

    def diff(self, name: str) -> "RationalFunction":
        if self.den == 1:
            return RationalFunction(self.num.diff(name), self.den, _normalized=True)
        return RationalFunction(
            self.num.diff(name) * self.den - self.num * self.den.diff(name),
            self.den * self.den)

    def eval_at(self, assignment: Mapping[str, Scalar]) -> Scalar:
        dv = self.den.eval_at(assignment)
        if dv == 0:
            raise DenominatorZeroError(f"denominator {self.den} vanishes")
        return self.num.eval_at(assignment) / dv

    def substitute(self, assignment, target_ring=None) -> "RationalFunction":
        num = self.num.substitute(assignment, target_ring)
        den = self.den.substitute(assignment, target_ring)
        return RationalFunction(num, den)

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _normalize_fraction(num: MultiPoly, den: MultiPoly):
    if num.is_zero():
        return num, MultiPoly.const(num.ring, 1)
    if den.is_constant():
        c = den.constant_value()
        return num * (Fraction(1) / c), MultiPoly.const(num.ring, 1)
    if num.is_constant():
        _, lc = den.leading()
        return num * (Fraction(1) / lc), _make_monic(den)
    g = poly_gcd(num, den)
    if not g.is_constant():
        num = poly_exact_div(num, g)
        den = poly_exact_div(den, g)
    if den.is_constant():
        c = den.constant_value()
        return num * (Fraction(1) / c), MultiPoly.const(num.ring, 1)
    _, lc = den.leading()
    if lc != 1:
        num = num * (Fraction(1) / lc)
        den = den * (Fraction(1) / lc)
    return num, den


# ---------------------------------------------------------------------------
# coefficient fields

class ScalarField:
    """Coefficient field selector: Q, or the fraction field Q(params).

    Scalars over Q are Fractions; scalars over Q(params) are
    RationalFunctions over the parameter ring.  Exactly these two instances
    are used: ``QQ`` and ``ScalarField(("s",))``.
    """

    def __init__(self, params: Sequence[str] = ()):
        self.params = tuple(params)

    @property
    def is_rational(self) -> bool:
        return not self.params

    def zero(self) -> Scalar:
        return Fraction(0) if self.is_rational else RationalFunction.const(self.params, 0)

    def one(self) -> Scalar:
        return Fraction(1) if self.is_rational else RationalFunction.const(self.params, 1)

    def from_fraction(self, q) -> Scalar:
        q = Fraction(q)
        return q if self.is_rational else RationalFunction.const(self.params, q)

    def generator(self, name: str) -> Scalar:
        if self.is_rational:
            raise ScalarError("Q has no generator")
        return RationalFunction.variable(self.params, name)

    def __eq__(self, other):
        return isinstance(other, ScalarField) and self.params == other.params

    def __repr__(self):
        return "QQ" if self.is_rational else f"QQ({','.join(self.params)})"


QQ = ScalarField()


# ---------------------------------------------------------------------------
# truncated power series

@dataclass(frozen=True)
class TruncatedSeries:
    """Vector-valued truncated power series: c_1 t + c_2 t^2 + ... + c_N t^N.

    The constant term (base point) is stored by the consumer, not here.
    Every coefficient vector has the ambient chart dimension.  Operations
    never extend precision beyond the stated order.
    """

    variable: str
    order: int
    coeffs: tuple  # tuple of N coefficient vectors (tuples of scalars)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(tuple(v) for v in self.coeffs))
        if self.order < 1:
            raise ScalarError("series order must be >= 1")
        if len(self.coeffs) != self.order:
            raise ScalarError("series must carry exactly `order` coefficient vectors")
        dims = {len(v) for v in self.coeffs}
        if len(dims) > 1:
            raise ScalarError("ragged series coefficients")

    @property
    def dimension(self) -> int:
        return len(self.coeffs[0])

    def coordinate(self, i: int) -> list:
        """Scalar coefficient list [c_1[i], ..., c_N[i]]."""
        return [v[i] for v in self.coeffs]


def _ser_mul(a: list, b: list, order: int) -> list:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j > order:
                break
            if bj == 0:
                continue
            out[i + j] = out[i + j] + ai * bj
    return out


def series_substitute(p: MultiPoly, germ: TruncatedSeries, base: Sequence[Scalar]) -> list:
    """Compose a polynomial with a vector series around a base point.

    Returns the truncated coefficient list [a_0, ..., a_N] of
    p(base + germ(t)); everything beyond t^N is discarded (the germ carries
    no information there).
    """
    n = len(p.ring)
    if germ.dimension != n:
        raise ScalarError(f"germ dimension {germ.dimension} != ring arity {n}")
    if len(base) != n:
        raise ScalarError("base point dimension mismatch")
    order = germ.order
    var_series = []
    for i in range(n):
        s = [base[i]] + germ.coordinate(i)
        var_series.append(s[: order + 1])
    powers: dict = {}

    def spow(i: int, e: int) -> list:
        key = (i, e)
        if key not in powers:
            if e == 1:
                powers[key] = var_series[i]
            else:
                half = spow(i, e // 2)
                sq = _ser_mul(half, half, order)
                powers[key] = _ser_mul(sq, var_series[i], order) if e % 2 else sq
        return powers[key]

    out = [Fraction(0)] * (order + 1)
    for m, c in p.terms.items():
        term = [c] + [Fraction(0)] * order
        for i, e in m:
            term = _ser_mul(term, spow(i, e), order)
        for k in range(order + 1):
            out[k] = out[k] + term[k]
    return out


def reciprocal_series(coeffs: Sequence[Scalar], order: int) -> list:
    """Truncated multiplicative inverse [r_0..r_order] of a scalar series
    with nonzero constant term."""
    c0 = coeffs[0]
    if c0 == 0:
        raise ScalarError("series has zero constant term, no reciprocal")
    inv0 = 1 / c0 if isinstance(c0, Fraction) else c0.inverse()
    out = [inv0]
    zero = inv0 - inv0
    for k in range(1, order + 1):
        acc = zero
        for j in range(1, min(k, len(coeffs) - 1) + 1):
            acc = acc + coeffs[j] * out[k - j]
        out.append(-(acc * inv0))
    return out


def compose_series(coeff_vectors: Sequence, inner: Sequence[Scalar], order: int) -> list:
    """Reparametrize a vector series: coefficients of z(tau(u)) where
    z(t) = sum c_k t^k and tau(u) = sum inner[k-1] u^k (no constant term).

    Returns the new coefficient vectors for u^1..u^order.
    """
    dim = len(coeff_vectors[0])
    tau = [Fraction(0)] + list(inner[:order])
    tau += [Fraction(0)] * (order + 1 - len(tau))
    tau_pows = {1: tau}
    for k in range(2, len(coeff_vectors) + 1):
        tau_pows[k] = _ser_mul(tau_pows[k - 1], tau, order)
    out = [[Fraction(0)] * dim for _ in range(order + 1)]
    for k, vec in enumerate(coeff_vectors, start=1):
        for deg in range(order + 1):
            tk = tau_pows[k][deg]
            if tk == 0:
                continue
            for i in range(dim):
                out[deg][i] = out[deg][i] + vec[i] * tk
    return [tuple(v) for v in out[1:]]


# ---------------------------------------------------------------------------
# spec operation aliases and binary forms

def poly_partial_derivative(p: MultiPoly, name: str) -> MultiPoly:
    """Exact formal partial derivative."""
    return p.diff(name)


def poly_substitute(p: MultiPoly, assignment: Mapping[str, object],
                    target_ring: Sequence[str] | None = None) -> MultiPoly:
    """Exact polynomial composition; see MultiPoly.substitute."""
    return p.substitute(assignment, target_ring)


@dataclass(frozen=True)
class BinaryFormZeros:
    """Result of the common-zero test for binary forms: either no common
    projective zero, or the gcd certificate that cuts out the common zeros."""

    empty: bool
    certificate: MultiPoly | None


def binary_form_common_zeros(forms: Iterable[MultiPoly]) -> BinaryFormZeros:
    """Common projective zeros of homogeneous forms in two variables.

    Empty iff the gcd of the nonzero forms is a nonzero constant; otherwise
    the gcd is returned as the certificate.  All forms identically zero is
    an error (identically singular input).
    """
    forms = list(forms)
    if not forms:
        raise ScalarError("no forms given")
    ring = forms[0].ring
    if len(ring) != 2:
        raise ScalarError("binary forms must live in a 2-variable ring")
    nonzero = []
    for f in forms:
        if f.ring != ring:
            raise ScalarError("mixed rings in binary form list")
        if not f.is_homogeneous():
            raise ScalarError(f"form is not homogeneous: {f}")
        if f:
            nonzero.append(f)
    if not nonzero:
        raise IdenticallySingularError("all forms vanish identically")
    g = nonzero[0]
    for f in nonzero[1:]:
        g = poly_gcd(g, f)
        if g.is_constant():
            break
    g = _make_monic(g)
    if g.is_constant():
        return BinaryFormZeros(empty=True, certificate=None)
    return BinaryFormZeros(empty=False, certificate=g)
