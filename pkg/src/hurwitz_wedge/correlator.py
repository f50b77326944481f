"""Vacuum correlators of E-operator words by iterated commutation.

A word is a sequence of (a, b) pairs standing for E_a(b*hbar).  Both
evaluators repeatedly take the rightmost operator with positive subscript and
swap it with its right neighbour, producing a passing term (the swapped word)
and a commutation term ([a_i b_{i+1} - a_{i+1} b_i] times the word with the two
operators merged).

Terms that reach the same word are merged before the word is expanded.  The
queue is ordered by (longer words first, then smaller sum of positive-operator
positions), which is a topological order of the rewrite graph: passing moves a
positive operator one step right, commutation shortens the word.  Every word
is therefore expanded exactly once, after all of its contributions arrived.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactalg import LaurentPoly, QIntProduct, QRational, exact_div, expand, qint

Op = Tuple[int, int]
Word = Tuple[Op, ...]


class InvalidWord(ValueError):
    pass


class ScoreViolation(AssertionError):
    pass


@dataclass(frozen=True)
class OperatorWord:
    ops: Word

    def __post_init__(self):
        ops = tuple((int(a), int(b)) for a, b in self.ops)
        if not ops:
            raise InvalidWord("empty operator word")
        for a, b in ops:
            if b < 0:
                raise InvalidWord(f"negative argument in E_{a}({b}hbar)")
            if a >= 0 and b <= 0:
                raise InvalidWord(f"E_{a}({b}hbar) violates 'a >= 0 implies b > 0'")
        object.__setattr__(self, "ops", ops)

    @classmethod
    def parse(cls, text: str) -> "OperatorWord":
        ops = []
        pos = 0
        for chunk in text.split(","):
            piece = chunk.strip()
            try:
                a, b = piece.split(":")
                ops.append((int(a), int(b)))
            except ValueError:
                raise InvalidWord(f"cannot parse operator {piece!r} at position {pos}") from None
            pos += len(chunk) + 1
        return cls(tuple(ops))

    @classmethod
    def hurwitz(cls, mu: Sequence[int], r: int = 1) -> "OperatorWord":
        """E_r(r hbar)^{d/r} E_{-mu_1}(0) ... E_{-mu_n}(0)."""
        d = sum(mu)
        if d % r:
            raise InvalidWord(f"r={r} does not divide |mu|={d}")
        return cls(((r, r),) * (d // r) + tuple((-m, 0) for m in mu))

    def __str__(self) -> str:
        return ",".join(f"{a}:{b}" for a, b in self.ops)

    def __len__(self) -> int:
        return len(self.ops)


def word_score(ops: Word) -> int:
    """-(sum of b) + sum_{i<j} (a_i b_j - a_j b_i)."""
    s = -sum(b for _, b in ops)
    sa = sb = 0
    # sum_{i<j} a_i b_j - a_j b_i  via running prefix sums
    for a, b in ops:
        s += sa * b - a * sb
        sa += a
        sb += b
    return s


def score(factors: Iterable[int], ops: Word) -> int:
    return sum(factors) + word_score(ops)


def _rightmost_positive(ops: Word) -> int:
    for i in range(len(ops) - 1, -1, -1):
        if ops[i][0] > 0:
            return i
    return -1


def _pos_sum(ops: Word) -> int:
    return sum(i for i, (a, _) in enumerate(ops) if a > 0)


def _prefix_ok(ops: Word, strict: bool) -> bool:
    # strict: connected rule (prefix sums before the end must be > 0)
    s = 0
    for a, _ in ops[:-1]:
        s += a
        if s < 0 or (strict and s == 0):
            return False
    return True


@dataclass
class TraceStats:
    words_expanded: int = 0
    steps: int = 0
    max_score: Optional[int] = None
    initial_score: int = 0
    peak_queue: int = 0

    def see(self, s: int):
        if self.max_score is None or s > self.max_score:
            self.max_score = s


@dataclass
class CorrelatorResult:
    """Connected correlator value.

    ``terms`` lists (coeff*[k_1]...[k_{m-2}], a) meaning that product times
    [a*B]/[B], B the total argument.  ``qproduct_form`` is present when every
    a equals 1, so the ratio cancels and the value is a plain q-integer
    polynomial.
    """

    value: QRational
    terms: List[Tuple[QIntProduct, int]] = field(default_factory=list)
    total_b: int = 0
    qproduct_form: Optional[List[QIntProduct]] = None
    trace: Optional[TraceStats] = None

    @property
    def laurent(self) -> LaurentPoly:
        return self.value.to_laurent()

    def pretty(self) -> str:
        if not self.terms:
            return str(self.value) if not self.value.is_polynomial() else self.value.num.pretty()
        parts = []
        for p, a in self.terms:
            s = p.pretty()
            if a != 1:
                s += f"[{a * self.total_b}]/[{self.total_b}]"
            parts.append(s)
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "qproducts": None if self.qproduct_form is None else [p.to_json() for p in self.qproduct_form],
            "terms": [{**p.to_json(), "ratio_a": a} for p, a in self.terms],
            "total_b": self.total_b,
            "laurent": self.value.num.to_json() if self.value.is_polynomial() else None,
            "max_score": None if self.trace is None else self.trace.max_score,
        }


def _validate(word) -> Word:
    if isinstance(word, OperatorWord):
        return word.ops
    return OperatorWord(tuple(word)).ops


def disconnected(word) -> QRational:
    """Full vacuum correlator <E_{a1}(b1 hbar) ... E_{am}(bm hbar)>."""
    ops = _validate(word)
    if sum(a for a, _ in ops) != 0:
        return QRational(0)
    if not _prefix_ok(ops, strict=False):
        return QRational(0)
    pending: Dict[Word, LaurentPoly] = {ops: LaurentPoly.const(1)}
    heap = [(-len(ops), _pos_sum(ops), ops)]
    finals: Dict[Tuple[int, ...], LaurentPoly] = {}
    while heap:
        _, _, w = heapq.heappop(heap)
        scalar = pending.pop(w)
        if scalar.is_zero():
            continue
        i = _rightmost_positive(w)
        if i < 0:
            bs = tuple(sorted(b for _, b in w))
            finals[bs] = finals.get(bs, LaurentPoly()) + scalar
            continue
        (a1, b1), (a2, b2) = w[i], w[i + 1]
        k = a1 * b2 - a2 * b1
        passing = w[:i] + ((a2, b2), (a1, b1)) + w[i + 2 :]
        merged = w[:i] + ((a1 + a2, b1 + b2),) + w[i + 2 :]
        for child, s in ((passing, scalar), (merged, scalar * qint(k))):
            if s.is_zero() or not _prefix_ok(child, strict=False):
                continue
            if child in pending:
                pending[child] = pending[child] + s
            else:
                pending[child] = s
                heapq.heappush(heap, (-len(child), _pos_sum(child), child))
    total = QRational(0)
    for bs in sorted(finals):
        den = LaurentPoly.const(1)
        for b in bs:
            den = den * qint(b)
        total = total + QRational(finals[bs], den)
    return total


def _mul_bracket(scalar: Dict[Tuple[int, ...], int], k: int) -> Dict[Tuple[int, ...], int]:
    out = {}
    for fs, c in scalar.items():
        out[tuple(sorted(fs + (k,)))] = c
    return out


def _add_into(dst: Dict[Tuple[int, ...], int], src: Dict[Tuple[int, ...], int]):
    for fs, c in src.items():
        v = dst.get(fs, 0) + c
        if v:
            dst[fs] = v
        else:
            dst.pop(fs, None)


def _connected(ops: Word, trace: bool, merge: bool = True) -> CorrelatorResult:
    stats = TraceStats(initial_score=word_score(ops)) if trace else None
    total_b = sum(b for _, b in ops)
    zero = CorrelatorResult(QRational(0), [], total_b, [], stats)
    if sum(a for a, _ in ops) != 0 or not _prefix_ok(ops, strict=True):
        return zero
    if len(ops) == 1:
        # only E_0(b) survives the checks above
        return CorrelatorResult(QRational(1, qint(ops[0][1])), [], total_b, None, stats)
    a_max = max(a for a, _ in ops)
    # terminal buckets: ratio multiplier a -> {factors: coeff}
    finals: Dict[int, Dict[Tuple[int, ...], int]] = {}
    if merge:
        pending: Dict[Word, Dict[Tuple[int, ...], int]] = {ops: {(): 1}}
        heap = [(-len(ops), _pos_sum(ops), ops)]
    else:
        stack: List[Tuple[Word, Dict[Tuple[int, ...], int]]] = [(ops, {(): 1})]
    while heap if merge else stack:
        if merge:
            _, _, w = heapq.heappop(heap)
            scalar = pending.pop(w)
            if stats is not None:
                stats.peak_queue = max(stats.peak_queue, len(heap) + 1)
        else:
            w, scalar = stack.pop()
        if not scalar:
            continue
        if stats is not None:
            stats.words_expanded += 1
            ws = word_score(w)
            for fs in scalar:
                stats.see(sum(fs) + ws)
        if len(w) == 2:
            (a, b1), (a2, b2) = w
            if not (0 < a <= a_max and a2 == -a):
                raise ScoreViolation(f"unexpected terminal pair {w}")
            if stats is not None:
                stats.steps += 1
                k = a * b2 - a2 * b1
                if word_score(((0, b1 + b2),)) + k != word_score(w):
                    raise ScoreViolation(f"commutation changed the score at {w}")
            _add_into(finals.setdefault(a, {}), scalar)
            continue
        i = _rightmost_positive(w)
        (a1, b1), (a2, b2) = w[i], w[i + 1]
        k = a1 * b2 - a2 * b1
        if k <= 0:
            raise ScoreViolation(f"non-positive commutator bracket [{k}] at {w}")
        passing = w[:i] + ((a2, b2), (a1, b1)) + w[i + 2 :]
        merged = w[:i] + ((a1 + a2, b1 + b2),) + w[i + 2 :]
        if stats is not None:
            stats.steps += 1
            parent = word_score(w)
            if word_score(merged) + k != parent:
                raise ScoreViolation(f"commutation term changed the score at {w}")
            drop = parent - word_score(passing)
            if drop <= 0 or drop % 2:
                raise ScoreViolation(f"passing term lowered the score by {drop} at {w}")
        children = []
        if _prefix_ok(passing, strict=True):
            children.append((passing, scalar))
        if _prefix_ok(merged, strict=True):
            children.append((merged, _mul_bracket(scalar, k)))
        for child, s in children:
            if not merge:
                stack.append((child, s))
            elif child in pending:
                _add_into(pending[child], s)
            else:
                pending[child] = dict(s)
                heapq.heappush(heap, (-len(child), _pos_sum(child), child))

    terms: List[Tuple[QIntProduct, int]] = []
    num = LaurentPoly()
    for a in sorted(finals):
        part = LaurentPoly()
        for fs in sorted(finals[a]):
            c = finals[a][fs]
            terms.append((QIntProduct(fs, c), a))
            part = part + expand(QIntProduct(fs, c))
        num = num + part * qint(a * total_b)
    value = QRational(exact_div(num, qint(total_b)))
    terms.sort(key=lambda t: (t[1] != 1, -t[0].bracket_sum(), tuple(-x for x in t[0].factors), t[1]))
    qform = [p for p, a in terms] if all(a == 1 for _, a in terms) else None
    return CorrelatorResult(value, terms, total_b, qform, stats)


def connected(word, merge: bool = True) -> CorrelatorResult:
    """Connected correlator: only terms ending in a single E_0 survive."""
    return _connected(_validate(word), trace=False, merge=merge)


def connected_traced(word) -> CorrelatorResult:
    """connected() with score bookkeeping asserted at every rewrite step."""
    ops = _validate(word)
    res = _connected(ops, trace=True)
    st = res.trace
    if st.max_score is not None and st.max_score > st.initial_score:
        raise ScoreViolation(f"score {st.max_score} exceeds initial {st.initial_score}")
    if st.max_score is None:
        st.max_score = st.initial_score
    return res
