"""Charge-zero infinite wedge space: partitions, ribbons and E-operators.

Basis vectors v_lambda are indexed by partitions.  Ribbons are handled through
the Maya diagram: row i of lambda carries a particle at the half-integer
position lambda_i - i + 1/2.  Adding an m-ribbon moves one particle up by m,
removing one moves it down by m; the sign is (-1)^(particles jumped over) and
the ribbon's centre is the midpoint of the move.  Positions and centres are
stored doubled so everything stays integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from .exactalg import LaurentPoly, QRational, qint


class UndefinedOperator(ValueError):
    """E_0(0) has no meaning; requests involving it raise this."""


@dataclass(frozen=True, order=True)
class Partition:
    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        p = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"not a partition: {self.parts}")
        object.__setattr__(self, "parts", p)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip()
        if text in ("", "0", "()", "empty"):
            return cls(())
        return cls(tuple(sorted((int(x) for x in text.split(",")), reverse=True)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def frobenius(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        lam, conj = self.parts, self.conjugate().parts
        d = sum(1 for i, p in enumerate(lam) if p > i)
        alpha = tuple(lam[i] - i - 1 for i in range(d))
        beta = tuple(conj[i] - i - 1 for i in range(d))
        return alpha, beta

    def frobenius_str(self) -> str:
        alpha, beta = self.frobenius()
        return "(" + ",".join(map(str, alpha)) + "|" + ",".join(map(str, beta)) + ")"

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


@dataclass(frozen=True)
class Ribbon:
    size: int
    sign: int
    centre2: int  # twice the x-coordinate of the centre of mass
    partition: Partition

    @property
    def centre(self):
        from fractions import Fraction

        c = Fraction(self.centre2, 2)
        return c.numerator if c.denominator == 1 else c


def _maya(parts: Tuple[int, ...], depth: int) -> List[int]:
    # doubled particle positions 2*(lambda_i - i) + 1 for rows 1..depth
    padded = list(parts) + [0] * (depth - len(parts))
    return [2 * (p - i) + 1 for i, p in enumerate(padded, start=1)]


def _from_maya(positions: Iterable[int]) -> Partition:
    xs = sorted(positions, reverse=True)
    parts = [(x - 1) // 2 + i for i, x in enumerate(xs, start=1)]
    return Partition(tuple(p for p in parts if p > 0))


@lru_cache(maxsize=None)
def _add_ribbons(parts: Tuple[int, ...], m: int) -> Tuple[Ribbon, ...]:
    xs = _maya(parts, len(parts) + m)
    occupied = set(xs)
    out = []
    for i, x in enumerate(xs):
        y = x + 2 * m
        if y in occupied:
            continue
        jumped = sum(1 for z in xs if x < z < y)
        new = xs[:i] + [y] + xs[i + 1 :]
        out.append(Ribbon(m, -1 if jumped % 2 else 1, x + m, _from_maya(new)))
    out.sort(key=lambda r: r.centre2)
    return tuple(out)


@lru_cache(maxsize=None)
def _remove_ribbons(parts: Tuple[int, ...], m: int) -> Tuple[Ribbon, ...]:
    # depth len(parts)+m keeps enough empty-row particles to detect collisions below
    xs = _maya(parts, len(parts) + m)
    occupied = set(xs)
    out = []
    for i, x in enumerate(xs[: len(parts)]):
        y = x - 2 * m
        if y in occupied:
            continue
        jumped = sum(1 for z in xs if y < z < x)
        new = xs[:i] + [y] + xs[i + 1 :]
        out.append(Ribbon(m, -1 if jumped % 2 else 1, x - m, _from_maya(new)))
    out.sort(key=lambda r: r.centre2)
    return tuple(out)


def add_ribbons(lam: Partition, m: int) -> List[Ribbon]:
    """Every way of adding an m-ribbon to lam, ordered by centre."""
    if m < 1:
        raise ValueError("ribbon size must be positive")
    return list(_add_ribbons(lam.parts, m))


def remove_ribbons(lam: Partition, m: int) -> List[Ribbon]:
    """Every way of removing an m-ribbon from lam, ordered by centre."""
    if m < 1:
        raise ValueError("ribbon size must be positive")
    return list(_remove_ribbons(lam.parts, m))


class WedgeVector:
    """Finite linear combination of basis vectors with QRational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[Partition, QRational] = None):
        self._c: Dict[Partition, QRational] = {}
        for lam, v in (coeffs or {}).items():
            if not isinstance(v, QRational):
                v = QRational(v)
            if not v.is_zero():
                self._c[lam] = v

    @classmethod
    def basis(cls, lam: Partition) -> "WedgeVector":
        return cls({lam: QRational(1)})

    def items(self) -> Iterator[Tuple[Partition, QRational]]:
        return iter(sorted(self._c.items(), key=lambda kv: kv[0].parts))

    def coeff(self, lam: Partition) -> QRational:
        return self._c.get(lam, QRational(0))

    def vacuum_coeff(self) -> QRational:
        return self.coeff(Partition(()))

    def degree_part(self, n: int) -> "WedgeVector":
        return WedgeVector({lam: v for lam, v in self._c.items() if lam.size == n})

    def degrees(self) -> set:
        return {lam.size for lam in self._c}

    def __add__(self, other: "WedgeVector") -> "WedgeVector":
        c = dict(self._c)
        for lam, v in other._c.items():
            c[lam] = c[lam] + v if lam in c else v
        return WedgeVector(c)

    def __neg__(self):
        return WedgeVector({lam: -v for lam, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "WedgeVector":
        return WedgeVector({lam: v * s for lam, v in self._c.items()})

    def __eq__(self, other):
        if not isinstance(other, WedgeVector):
            return NotImplemented
        keys = set(self._c) | set(other._c)
        return all(self.coeff(k) == other.coeff(k) for k in keys)

    def __len__(self):
        return len(self._c)

    def __repr__(self):
        body = " + ".join(f"({v!r})v_{{{lam}}}" for lam, v in self.items())
        return f"WedgeVector({body or '0'})"


@lru_cache(maxsize=None)
def e0_eigenvalue(lam: Partition, b: int) -> QRational:
    """Eigenvalue of E_0(b*hbar) on v_lam."""
    if b == 0:
        raise UndefinedOperator("E_0(0) is undefined")
    alpha, beta = lam.frobenius()
    s = LaurentPoly({})
    for a in alpha:
        s = s + LaurentPoly.monomial((2 * a + 1) * b)
    for bb in beta:
        s = s - LaurentPoly.monomial(-(2 * bb + 1) * b)
    q = qint(b)
    return QRational(s * q + 1, q)


def apply_E(a: int, b: int, v: WedgeVector) -> WedgeVector:
    """Apply E_a(b*hbar) to v.

    For a != 0 a ribbon with doubled centre 2c contributes sign * u^(2c*b).
    """
    if a == 0 and b == 0:
        raise UndefinedOperator("E_0(0) is undefined")
    out: Dict[Partition, QRational] = {}
    for lam, coeff in v._c.items():
        if a == 0:
            out[lam] = out.get(lam, QRational(0)) + coeff * e0_eigenvalue(lam, b)
            continue
        ribbons = _add_ribbons(lam.parts, -a) if a < 0 else _remove_ribbons(lam.parts, a)
        for r in ribbons:
            term = coeff * LaurentPoly.monomial(r.centre2 * b, r.sign)
            out[r.partition] = out[r.partition] + term if r.partition in out else term
    return WedgeVector(out)


def apply_word(word: Iterable[Tuple[int, int]], v: WedgeVector) -> WedgeVector:
    """Apply E_{a1}(b1) E_{a2}(b2) ... to v (rightmost operator acts first)."""
    for a, b in reversed(list(word)):
        v = apply_E(a, b, v)
    return v


def vacuum_expectation(word: Iterable[Tuple[int, int]]) -> QRational:
    """<empty| word |empty> by direct action on the wedge space."""
    return apply_word(word, WedgeVector.basis(Partition(()))).vacuum_coeff()


def check_commutation(a1: int, b1: int, a2: int, b2: int, lam: Partition, degenerate: str = "delta") -> bool:
    """Test the E-operator commutator identity on v_lam.

    ``degenerate`` governs the case b1 = b2 = 0, a1 + a2 = 0, where the right
    side would involve E_0(0): "delta" uses [E_m(0), E_n(0)] = delta_{m+n,0} m,
    "exclude" raises UndefinedOperator.
    """
    if (a1, b1) == (0, 0) or (a2, b2) == (0, 0):
        raise UndefinedOperator("E_0(0) is undefined")
    v = WedgeVector.basis(lam)
    lhs = apply_E(a1, b1, apply_E(a2, b2, v)) - apply_E(a2, b2, apply_E(a1, b1, v))
    if a1 + a2 == 0 and b1 + b2 == 0:
        if degenerate != "delta":
            raise UndefinedOperator("commutator of two zero-argument operators")
        rhs = v.scale(QRational(a1))
    else:
        rhs = apply_E(a1 + a2, b1 + b2, v).scale(qint(a1 * b2 - a2 * b1))
    return lhs == rhs
