"""Exact arithmetic on Laurent polynomials in u = exp(hbar/2).

Every exponential that shows up in E-operator calculus is an integer power of
u, so q = u**2 and the q-integer [k] = u**k - u**-k.  Coefficients are Python
ints whenever possible and ``fractions.Fraction`` otherwise; there is no
floating point anywhere in this module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

Rational = Union[int, Fraction]


class NonExactDivision(ArithmeticError):
    """Raised when a Laurent polynomial division leaves a nonzero remainder."""


class AsymmetricInput(ValueError):
    """Raised when a polynomial is neither symmetric nor antisymmetric in u <-> 1/u."""


class OddExponent(ValueError):
    """Raised when an odd power of u appears where only powers of q are allowed."""


def _norm(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def parse_rational(text: str) -> Rational:
    return _norm(Fraction(text))


def format_rational(c: Rational) -> str:
    return str(_norm(c))


class LaurentPoly:
    """Sparse Laurent polynomial: exponent of u -> nonzero rational."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Optional[Mapping[int, Rational]] = None):
        c: Dict[int, Rational] = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    c[int(e)] = _norm(v)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: Dict[int, Rational]) -> "LaurentPoly":
        # c must already be zero-stripped and normalised
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Rational) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, e: int, c: Rational = 1) -> "LaurentPoly":
        return cls({e: c})

    # -- inspection ---------------------------------------------------------

    def items(self) -> Iterator[Tuple[int, Rational]]:
        return iter(sorted(self._c.items()))

    def coeff(self, e: int) -> Rational:
        return self._c.get(e, 0)

    def exponents(self) -> list:
        return sorted(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def max_exp(self) -> int:
        return max(self._c)

    def min_exp(self) -> int:
        return min(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(other)
            else:
                return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = _norm(s)
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly()
            if other == 1:
                return self
            return LaurentPoly._raw({e: _norm(v * other) for e, v in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if len(other._c) == 1 and len(self._c) > 1:
            return other * self
        if len(self._c) == 1:
            (e0, v0), = self._c.items()
            if v0 == 1:
                return LaurentPoly._raw({e0 + e: v for e, v in other._c.items()})
            if v0 == -1:
                return LaurentPoly._raw({e0 + e: -v for e, v in other._c.items()})
        c: Dict[int, Rational] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return LaurentPoly._raw({e: _norm(v) for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by u**k."""
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def invert_variable(self) -> "LaurentPoly":
        """Substitute u -> 1/u."""
        return LaurentPoly._raw({-e: v for e, v in self._c.items()})

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self.pretty()})"

    def pretty(self, var: str = "u") -> str:
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items(), reverse=True):
            if e == 0:
                mono = ""
            elif e == 1:
                mono = var
            else:
                mono = f"{var}^{e}"
            if mono and v == 1:
                parts.append(f"+ {mono}")
            elif mono and v == -1:
                parts.append(f"- {mono}")
            else:
                sign = "-" if v < 0 else "+"
                mag = format_rational(abs(v))
                parts.append(f"{sign} {mag}{'*' + mono if mono else ''}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json(self) -> dict:
        return {"exponents": [[e, format_rational(v)] for e, v in self.items()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentPoly":
        return cls({int(e): parse_rational(v) for e, v in obj["exponents"]})


def qint(k: int) -> LaurentPoly:
    """The q-integer [k] = u^k - u^-k."""
    if k == 0:
        return LaurentPoly()
    return LaurentPoly._raw({k: 1, -k: -1})


@dataclass(frozen=True)
class QIntProduct:
    """coeff * [k_1] [k_2] ... [k_l] with positive k_i kept sorted."""

    factors: Tuple[int, ...] = ()
    coeff: int = 1

    def __post_init__(self):
        fs = tuple(sorted(self.factors))
        if any(k <= 0 for k in fs):
            raise ValueError(f"q-integer factors must be positive, got {self.factors}")
        object.__setattr__(self, "factors", fs)

    def __len__(self) -> int:
        return len(self.factors)

    def bracket_sum(self) -> int:
        return sum(self.factors)

    def pretty(self) -> str:
        groups = []
        for k in sorted(set(self.factors), reverse=True):
            n = self.factors.count(k)
            groups.append(f"[{k}]" + (f"^{n}" if n > 1 else ""))
        body = "".join(groups)
        if not body:
            return str(self.coeff)
        if self.coeff == 1:
            return body
        if self.coeff == -1:
            return "-" + body
        return f"{self.coeff}{body}"

    def to_json(self) -> dict:
        return {"coeff": self.coeff, "factors": list(self.factors)}


_TERM_RE = re.compile(r"\s*([+-]?)\s*(\d*)\s*((?:\[\d+\](?:\^\d+)?\s*)*)")
_FACTOR_RE = re.compile(r"\[(\d+)\](?:\^(\d+))?")


def parse_qproducts(text: str) -> List[QIntProduct]:
    """Parse a sum like "[6][2]^3 + 3[2]^4" into QIntProducts."""
    out: List[QIntProduct] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse q-integer expression at position {pos}: {text[pos:]!r}")
        coeff = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "-":
            coeff = -coeff
        factors: List[int] = []
        for f in _FACTOR_RE.finditer(m.group(3)):
            factors.extend([int(f.group(1))] * int(f.group(2) or 1))
        out.append(QIntProduct(tuple(factors), coeff))
        pos = m.end()
    return out


_qint_power_cache: Dict[Tuple[int, int], LaurentPoly] = {}


def _qint_power(k: int, n: int) -> LaurentPoly:
    key = (k, n)
    p = _qint_power_cache.get(key)
    if p is None:
        p = qint(k) ** n
        _qint_power_cache[key] = p
    return p


def expand(p: Union[QIntProduct, Iterable[QIntProduct]]) -> LaurentPoly:
    """Multiply out one QIntProduct, or sum the expansions of several."""
    if not isinstance(p, QIntProduct):
        total = LaurentPoly()
        for q in p:
            total = total + expand(q)
        return total
    if p.coeff == 0:
        return LaurentPoly()
    result = LaurentPoly.const(p.coeff)
    i = 0
    fs = p.factors
    while i < len(fs):
        j = i
        while j < len(fs) and fs[j] == fs[i]:
            j += 1
        result = result * _qint_power(fs[i], j - i)
        i = j
    return result


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Quotient of num by den; NonExactDivision if den does not divide num."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if num.is_zero():
        return LaurentPoly()
    # Work with ordinary polynomials in u: both shifted so the lowest term is u^0.
    dlo, dhi = den.min_exp(), den.max_exp()
    nlo = num.min_exp()
    d = [den.coeff(dlo + i) for i in range(dhi - dlo + 1)]
    r: Dict[int, Rational] = {e - nlo: v for e, v in num.items()}
    top_d = d[-1]
    deg_d = len(d) - 1
    q: Dict[int, Rational] = {}
    while r:
        top = max(r)
        if top < deg_d:
            raise NonExactDivision(f"{num.pretty()} is not divisible by {den.pretty()}")
        c = r[top]
        c = _norm(Fraction(c) / top_d) if isinstance(c, Fraction) or c % top_d else c // top_d
        shift = top - deg_d
        q[shift] = c
        for i, dv in enumerate(d):
            if dv:
                e = shift + i
                s = r.get(e, 0) - c * dv
                if s:
                    r[e] = _norm(s)
                else:
                    r.pop(e, None)
    return LaurentPoly({e + nlo - dlo: v for e, v in q.items()})


def hbar_coeff(p: LaurentPoly, k: int) -> Fraction:
    """Coefficient of hbar^k in p, reading u^e as exp(e*hbar/2)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    s = 0
    for e, c in p.items():
        if e or k == 0:
            s += c * e**k
    return Fraction(s) / (2**k * factorial(k))


@dataclass(frozen=True)
class ExpCombo:
    """sum_m C(m) (e^{m hbar} -/+ e^{-m hbar}) [+ m0 in the even case].

    ``parity`` is "odd" for the sinh-type basis and "even" for the cosh-type
    basis.  ``terms`` maps m >= 1 to C(m); ``m0`` is the constant term, only
    meaningful for even parity.
    """

    parity: str
    terms: Dict[int, Rational] = field(default_factory=dict)
    m0: Optional[Rational] = None

    def coefficient(self, m: int) -> Rational:
        if m == 0:
            return self.m0 or 0
        return self.terms.get(m, 0)

    def max_m(self) -> int:
        return max(self.terms) if self.terms else 0

    def derivative_at_zero(self, k: int) -> Rational:
        """k! times the coefficient of hbar^k."""
        sign = -1 if self.parity == "odd" else 1
        s = 0
        for m, c in self.terms.items():
            s += c * (m**k + sign * (-m) ** k)
        if k == 0 and self.m0:
            s += self.m0
        return _norm(s)

    def to_laurent(self) -> LaurentPoly:
        sign = -1 if self.parity == "odd" else 1
        c: Dict[int, Rational] = {}
        for m, v in self.terms.items():
            c[2 * m] = v
            c[-2 * m] = sign * v
        if self.m0:
            c[0] = self.m0
        return LaurentPoly(c)

    def to_json(self) -> dict:
        return {
            "parity": self.parity,
            "terms": {str(m): format_rational(v) for m, v in sorted(self.terms.items())},
            "m0": None if self.m0 is None else format_rational(self.m0),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ExpCombo":
        m0 = obj.get("m0")
        return cls(
            obj["parity"],
            {int(m): parse_rational(v) for m, v in obj["terms"].items()},
            None if m0 is None else parse_rational(m0),
        )


def to_exp_combo(p: LaurentPoly) -> ExpCombo:
    for e, _ in p.items():
        if e % 2:
            raise OddExponent(f"odd exponent u^{e} in {p.pretty()}")
    inv = p.invert_variable()
    if inv == -p:
        parity = "odd"
    elif inv == p:
        parity = "even"
    else:
        raise AsymmetricInput(f"{p.pretty()} has no u -> 1/u symmetry")
    terms = {e // 2: v for e, v in p.items() if e > 0}
    m0 = p.coeff(0) if parity == "even" else None
    return ExpCombo(parity, terms, m0)


def _content(p: LaurentPoly) -> Fraction:
    num = 0
    den = 1
    for _, v in p.items():
        f = Fraction(v)
        num = gcd(num, f.numerator)
        den = den * f.denominator // gcd(den, f.denominator)
    return Fraction(num, den)


class QRational:
    """num/den with Laurent polynomial numerator and denominator.

    Normal form: den is shifted to start at u^0 and scaled to be monic at its
    highest exponent; if den divides num the fraction collapses to den == 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[LaurentPoly, Rational], den: Union[LaurentPoly, Rational] = 1):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("QRational with zero denominator")
        if num.is_zero():
            self.num, self.den = LaurentPoly(), LaurentPoly.const(1)
            return
        if len(den) > 1:
            try:
                num = exact_div(num, den)
                den = LaurentPoly.const(1)
            except NonExactDivision:
                pass
        if len(den) == 1:
            (e, c), = den._c.items()
            if e:
                num = num.shift(-e)
            if c != 1:
                num = num * (1 / Fraction(c))
                den = LaurentPoly.const(1)
            elif e:
                den = LaurentPoly.const(1)
        else:
            c = _content(den)
            num, den = num * (1 / c), den * (1 / c)
            lead = Fraction(den.coeff(den.max_exp()))
            num, den = num * (1 / lead), den * (1 / lead)
            lo = den.min_exp()
            num, den = num.shift(-lo), den.shift(-lo)
        self.num, self.den = num, den

    def is_polynomial(self) -> bool:
        return self.den == LaurentPoly.const(1)

    def to_laurent(self) -> LaurentPoly:
        if not self.is_polynomial():
            raise NonExactDivision(f"{self} is not a Laurent polynomial")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        if not isinstance(other, QRational):
            other = QRational(other)
        if self.den == other.den:
            return QRational(self.num + other.num, self.den)
        return QRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        q = QRational.__new__(QRational)
        q.num, q.den = -self.num, self.den
        return q

    def __sub__(self, other):
        if not isinstance(other, QRational):
            other = QRational(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QRational):
            return QRational(self.num * other.num, self.den * other.den)
        if isinstance(other, (LaurentPoly, int, Fraction)):
            if len(self.den) == 1 and self.den._c.get(0) == 1:
                q = QRational.__new__(QRational)
                q.num, q.den = self.num * other, self.den
                if q.num.is_zero():
                    q.den = LaurentPoly.const(1)
                return q
            return QRational(self.num * other, self.den)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, QRational):
            other = QRational(other)
        return QRational(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        if isinstance(other, (LaurentPoly, int, Fraction)):
            other = QRational(other)
        if not isinstance(other, QRational):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return f"QRational({self.num.pretty()})"
        return f"QRational(({self.num.pretty()}) / ({self.den.pretty()}))"
