"""Boolean functions as truth tables: classification and constructive normal forms.

A function of arity n is stored as the 2^n output bits indexed by input
tuples read as binary numbers with p1 in the most significant position.
On top of that sit the order-theoretic classifiers (monotone,
anti-monotone, rest, TFT, FTF and the derived specialness flags) and the
constructive representations: lattice DNF for monotone functions,
witness substitutions reducing TFT functions to p1 -> p2 and FTF
functions to p1 & ~p2, projection substitutions for rest functions, and
the two-sided clause forms for non-FTF / non-TFT functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator

MAX_ARITY = 16


class BoolExprError(ValueError):
    """Raised on malformed Boolean expressions; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class TruthTable:
    """A Boolean function of fixed arity.

    ``bits`` packs the outputs: bit i is the output for the input tuple
    whose big-endian reading (p1 most significant) is i.  Equality is
    bitwise at fixed arity.
    """

    arity: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.arity <= MAX_ARITY:
            raise ValueError(f"arity {self.arity} outside supported range 0..{MAX_ARITY}")
        if not 0 <= self.bits < (1 << self.size):
            raise ValueError("output bits out of range for arity")

    @property
    def size(self) -> int:
        return 1 << self.arity

    @property
    def outputs(self) -> tuple[bool, ...]:
        return tuple(bool((self.bits >> i) & 1) for i in range(self.size))

    @staticmethod
    def from_outputs(outputs: Iterable[bool]) -> "TruthTable":
        outs = list(outputs)
        n = (len(outs)).bit_length() - 1
        if len(outs) != (1 << n):
            raise ValueError(f"output sequence length {len(outs)} is not a power of two")
        bits = 0
        for i, v in enumerate(outs):
            if v:
                bits |= 1 << i
        return TruthTable(n, bits)

    def value_at(self, index: int) -> bool:
        return bool((self.bits >> index) & 1)

    def evaluate(self, args: Iterable[bool]) -> bool:
        """Apply the function to a tuple of truth values (p1 first)."""
        index = 0
        count = 0
        for a in args:
            index = (index << 1) | (1 if a else 0)
            count += 1
        if count != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {count}")
        return self.value_at(index)

    def complement(self) -> "TruthTable":
        return TruthTable(self.arity, ~self.bits & ((1 << self.size) - 1))

    def dual(self) -> "TruthTable":
        """The de-Morgan dual: negate the output on the negated input."""
        full = self.size - 1
        bits = 0
        for i in range(self.size):
            if not self.value_at(full ^ i):
                bits |= 1 << i
        return TruthTable(self.arity, bits)

    def coordinates(self, index: int) -> tuple[int, ...]:
        """Input tuple (p1..pn) encoded by ``index``."""
        n = self.arity
        return tuple((index >> (n - k)) & 1 for k in range(1, n + 1))


# -- canonical tables used as reduction targets ------------------------------

TABLE_TOP = TruthTable(0, 1)
TABLE_BOT = TruthTable(0, 0)
TABLE_P1_1 = TruthTable(1, 0b10)       # p1 as a unary table
TABLE_NOT_P1_1 = TruthTable(1, 0b01)
TABLE_AND = TruthTable(2, 0b1000)      # outputs for 00,01,10,11 are bits 0..3
TABLE_OR = TruthTable(2, 0b1110)
TABLE_IMPLIES = TruthTable(2, 0b1011)  # p1 -> p2
TABLE_AND_NOT = TruthTable(2, 0b0100)  # p1 & ~p2
TABLE_P1_2 = TruthTable(2, 0b1100)     # p1 as a binary table
TABLE_NOT_P1_2 = TruthTable(2, 0b0011)


# -- expression parsing -------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(p[0-9]+)|(T|F)|(<->|->|[~&|()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise BoolExprError(f"unexpected character {stripped[0]!r}", pos)
        if m.group(1):
            tokens.append(("var", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("const", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _ExprParser:
    """Recursive descent for: iff > imp (right-assoc) > or > and > unary > atom."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise BoolExprError(f"expected {op!r}", pos)
        self.next()

    def parse(self):
        node = self.iff()
        kind, val, pos = self.peek()
        if kind != "end":
            raise BoolExprError(f"unexpected trailing input {val!r}", pos)
        return node

    def iff(self):
        node = self.imp()
        while self.peek()[:2] == ("op", "<->"):
            self.next()
            node = ("iff", node, self.imp())
        return node

    def imp(self):
        node = self.or_()
        if self.peek()[:2] == ("op", "->"):
            self.next()
            return ("imp", node, self.imp())
        return node

    def or_(self):
        node = self.and_()
        while self.peek()[:2] == ("op", "|"):
            self.next()
            node = ("or", node, self.and_())
        return node

    def and_(self):
        node = self.unary()
        while self.peek()[:2] == ("op", "&"):
            self.next()
            node = ("and", node, self.unary())
        return node

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "~":
            self.next()
            return ("not", self.unary())
        return self.atom()

    def atom(self):
        kind, val, pos = self.next()
        if kind == "var":
            return ("var", int(val[1:]))
        if kind == "const":
            return ("const", val == "T")
        if kind == "op" and val == "(":
            node = self.iff()
            self.expect_op(")")
            return node
        raise BoolExprError(f"expected an atom, found {val!r}", pos)


def _max_var(node) -> int:
    tag = node[0]
    if tag == "var":
        return node[1]
    if tag == "const":
        return 0
    if tag == "not":
        return _max_var(node[1])
    return max(_max_var(node[1]), _max_var(node[2]))


def _eval_node(node, values: tuple[int, ...]) -> bool:
    tag = node[0]
    if tag == "var":
        return bool(values[node[1] - 1])
    if tag == "const":
        return node[1]
    if tag == "not":
        return not _eval_node(node[1], values)
    a = _eval_node(node[1], values)
    b = _eval_node(node[2], values)
    if tag == "and":
        return a and b
    if tag == "or":
        return a or b
    if tag == "imp":
        return (not a) or b
    return a == b  # iff


def from_expr(text: str) -> TruthTable:
    """Parse an ASCII Boolean expression over p1..pn into its truth table.

    The highest variable index fixes the arity; ``T``/``F`` alone give the
    arity-0 constants.
    """
    node = _ExprParser(text).parse()
    n = _max_var(node)
    if n > MAX_ARITY:
        raise BoolExprError(f"variable p{n} exceeds the arity cap {MAX_ARITY}", 0)
    bits = 0
    table = TruthTable(n, 0)
    for i in range(1 << n):
        if _eval_node(node, table.coordinates(i)):
            bits |= 1 << i
    return TruthTable(n, bits)


# -- order-theoretic machinery on packed tables -------------------------------

@lru_cache(maxsize=None)
def _low_masks(n: int) -> tuple[int, ...]:
    """For each index-bit b, the mask of indices with bit b clear."""
    masks = []
    for b in range(n):
        m = 0
        for i in range(1 << n):
            if not (i >> b) & 1:
                m |= 1 << i
        masks.append(m)
    return tuple(masks)


def _strict_down_or(bits: int, n: int) -> int:
    """Mask where bit i is set iff some strict subset j of i has bit j set."""
    down = bits
    low = _low_masks(n)
    for b in range(n):
        down |= (down & low[b]) << (1 << b)
    out = 0
    for b in range(n):
        out |= (down & low[b]) << (1 << b)
    return out


def _strict_up_or(bits: int, n: int) -> int:
    """Mask where bit i is set iff some strict superset j of i has bit j set."""
    up = bits
    low = _low_masks(n)
    full = (1 << (1 << n)) - 1
    for b in range(n):
        high = full & ~low[b]
        up |= (up & high) >> (1 << b)
    out = 0
    for b in range(n):
        high = full & ~low[b]
        out |= (up & high) >> (1 << b)
    return out


@dataclass(frozen=True)
class BoolClass:
    """Classification flags of one Boolean function."""

    is_constant: bool
    is_monotone: bool
    is_antimonotone: bool
    is_rest: bool
    is_tft: bool
    is_ftf: bool
    forall_special: bool
    exists_special: bool
    weakly_forall_special: bool
    weakly_exists_special: bool


def classify(f: TruthTable) -> BoolClass:
    """Compute all taxonomy flags of ``f`` by exhaustive order checks.

    Monotonicity is checked along single-coordinate raises; the TFT/FTF
    chain searches run over subset-closure masks, so classification costs
    O(n * 2^n) word operations.
    """
    n, bits = f.arity, f.bits
    full = (1 << f.size) - 1
    low = _low_masks(n)
    monotone = True
    antimono = True
    for b in range(n):
        step = 1 << b
        lo = bits & low[b]
        hi = (bits >> step) & low[b]
        if lo & ~hi:
            monotone = False
        if hi & ~lo:
            antimono = False
    constant = bits == 0 or bits == full
    rest = not monotone and not antimono

    ones = bits
    zeros = full & ~bits
    tft = bool(zeros & _strict_down_or(ones, n) & _strict_up_or(ones, n))
    ftf = bool(ones & _strict_down_or(zeros, n) & _strict_up_or(zeros, n))

    return BoolClass(
        is_constant=constant,
        is_monotone=monotone,
        is_antimonotone=antimono,
        is_rest=rest,
        is_tft=tft,
        is_ftf=ftf,
        forall_special=rest and not tft,
        exists_special=rest and not ftf,
        weakly_forall_special=not tft,
        weakly_exists_special=not ftf,
    )


# -- substitutions ------------------------------------------------------------

class Slot(Enum):
    """Substitution entries, ordered for lexicographic tie-breaking."""

    P1 = 0
    P2 = 1
    OR = 2    # p1 | p2
    AND = 3   # p1 & p2
    TOP = 4
    BOT = 5

    def apply(self, v1: bool, v2: bool) -> bool:
        if self is Slot.P1:
            return v1
        if self is Slot.P2:
            return v2
        if self is Slot.OR:
            return v1 or v2
        if self is Slot.AND:
            return v1 and v2
        return self is Slot.TOP

    def text(self) -> str:
        return {
            Slot.P1: "p1", Slot.P2: "p2", Slot.OR: "p1 | p2",
            Slot.AND: "p1 & p2", Slot.TOP: "T", Slot.BOT: "F",
        }[self]


@dataclass(frozen=True)
class Substitution:
    """A list of binary-argument slots, one per argument position."""

    entries: tuple[Slot, ...]

    def __len__(self) -> int:
        return len(self.entries)


def apply_substitution(f: TruthTable, s: Substitution) -> TruthTable:
    """Compose ``f`` with the slot expressions, yielding a binary table."""
    if len(s) != f.arity:
        raise ValueError(f"substitution length {len(s)} != arity {f.arity}")
    bits = 0
    for i, (v1, v2) in enumerate(((False, False), (False, True), (True, False), (True, True))):
        if f.evaluate(e.apply(v1, v2) for e in s.entries):
            bits |= 1 << i
    return TruthTable(2, bits)


# -- lattice DNF / two-sided clause forms -------------------------------------

@dataclass(frozen=True)
class MonotoneDnf:
    """Clause sets over variable indices, read either as a DNF or dually as a CNF.

    DNF reading: disjunction of positive conjunctions and of negated
    conjunctions.  CNF reading (used by the non-TFT form): conjunction of
    positive disjunctions and of negated disjunctions.
    """

    positive: frozenset[frozenset[int]]
    negative: frozenset[frozenset[int]]

    @staticmethod
    def _var_masks(arity: int) -> tuple[dict[int, int], int]:
        size = 1 << arity
        full = (1 << size) - 1
        var_mask = {}
        for k in range(1, arity + 1):
            m = 0
            for i in range(size):
                if (i >> (arity - k)) & 1:
                    m |= 1 << i
            var_mask[k] = m
        return var_mask, full

    def dnf_table(self, arity: int) -> TruthTable:
        var_mask, full = self._var_masks(arity)
        bits = 0
        for clause in self.positive:
            m = full
            for k in clause:
                m &= var_mask[k]
            bits |= m
        for clause in self.negative:
            m = full
            for k in clause:
                m &= full & ~var_mask[k]
            bits |= m
        return TruthTable(arity, bits)

    def cnf_table(self, arity: int) -> TruthTable:
        var_mask, full = self._var_masks(arity)
        bits = full
        for clause in self.positive:
            m = 0
            for k in clause:
                m |= var_mask[k]
            bits &= m
        for clause in self.negative:
            m = 0
            for k in clause:
                m |= full & ~var_mask[k]
            bits &= m
        return TruthTable(arity, bits)

    @staticmethod
    def _sorted_clauses(clauses: frozenset[frozenset[int]]) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(c)) for c in clauses)

    def dnf_text(self) -> str:
        parts = []
        for clause in self._sorted_clauses(self.positive):
            term = " & ".join(f"p{k}" for k in clause)
            parts.append(f"({term})" if len(clause) > 1 else term)
        for clause in self._sorted_clauses(self.negative):
            term = " & ".join(f"~p{k}" for k in clause)
            parts.append(f"({term})" if len(clause) > 1 else term)
        return " | ".join(parts) if parts else "F"

    def cnf_text(self) -> str:
        parts = []
        for clause in self._sorted_clauses(self.positive):
            term = " | ".join(f"p{k}" for k in clause)
            parts.append(f"({term})" if len(clause) > 1 else term)
        for clause in self._sorted_clauses(self.negative):
            term = " | ".join(f"~p{k}" for k in clause)
            parts.append(f"({term})" if len(clause) > 1 else term)
        return " & ".join(parts) if parts else "T"


def _indices(bits: int, size: int) -> Iterator[int]:
    for i in range(size):
        if (bits >> i) & 1:
            yield i


def _coords_set(index: int, n: int) -> frozenset[int]:
    return frozenset(k for k in range(1, n + 1) if (index >> (n - k)) & 1)


def _coords_unset(index: int, n: int) -> frozenset[int]:
    return frozenset(k for k in range(1, n + 1) if not (index >> (n - k)) & 1)


def monotone_lattice_expr(f: TruthTable) -> MonotoneDnf:
    """Positive-clause DNF of a non-constant monotone function.

    For anti-monotone input the returned clauses describe the complement,
    which the caller re-negates; both directions reduce to the disjunction
    of the minimal true points.
    """
    cls = classify(f)
    if cls.is_constant or cls.is_rest:
        raise ValueError("lattice form needs a non-constant monotone or anti-monotone function")
    g_bits = f.bits if cls.is_monotone else f.complement().bits
    minimal = g_bits & ~_strict_down_or(g_bits, f.arity)
    clauses = frozenset(_coords_set(i, f.arity) for i in _indices(minimal, f.size))
    return MonotoneDnf(positive=clauses, negative=frozenset())


class DiagonalValue(Enum):
    """Result of identifying all arguments: one of T, F, p1, ~p1."""

    TOP = "T"
    BOT = "F"
    P1 = "p1"
    NOT_P1 = "~p1"

    def table(self) -> TruthTable:
        return {
            DiagonalValue.TOP: TABLE_TOP,
            DiagonalValue.BOT: TABLE_BOT,
            DiagonalValue.P1: TABLE_P1_1,
            DiagonalValue.NOT_P1: TABLE_NOT_P1_1,
        }[self]


def diagonal(f: TruthTable) -> DiagonalValue:
    """The unary function f(p1,...,p1), collapsed to its canonical name."""
    at_zero = f.value_at(0)
    at_one = f.value_at(f.size - 1)
    if at_zero and at_one:
        return DiagonalValue.TOP
    if not at_zero and not at_one:
        return DiagonalValue.BOT
    if not at_zero and at_one:
        return DiagonalValue.P1
    return DiagonalValue.NOT_P1


def _first_chain(f: TruthTable, middle_value: bool) -> tuple[int, int, int]:
    """First (a, b, c) with a < b < c whose values are v,~v,v for v = not middle_value."""
    size = f.size
    for b in range(size):
        if f.value_at(b) != middle_value:
            continue
        a = next((x for x in range(b) if x & b == x and f.value_at(x) != middle_value), None)
        if a is None:
            continue
        c = next(
            (y for y in range(b + 1, size) if y & b == b and f.value_at(y) != middle_value),
            None,
        )
        if c is not None:
            return a, b, c
    raise ValueError("no witnessing chain exists")


def _segment_substitution(
    f: TruthTable, a: int, b: int, c: int, mid_slot: Slot, top_slot: Slot
) -> Substitution:
    n = f.arity
    entries = []
    for k in range(1, n + 1):
        bit = 1 << (n - k)
        if a & bit:
            entries.append(Slot.TOP)
        elif b & bit:
            entries.append(mid_slot)
        elif c & bit:
            entries.append(top_slot)
        else:
            entries.append(Slot.BOT)
    return Substitution(tuple(entries))


def tft_substitution(f: TruthTable) -> Substitution:
    """Witness substitution composing ``f`` down to p1 -> p2.

    Walks the first true-false-true chain a < b < c.  With d the join of a
    and the top segment, the two candidate assignments differ on the b\\a
    segment (p1 versus p1|p2); the p1 variant is valid exactly when f(d)
    holds and is lexicographically smaller, so the case split on f(d)
    realizes the tie-break.
    """
    if not classify(f).is_tft:
        raise ValueError("substitution to p1 -> p2 needs a TFT function")
    a, b, c = _first_chain(f, middle_value=False)
    d = a | (c & ~b)
    if f.value_at(d):
        sub = _segment_substitution(f, a, b, c, Slot.P1, Slot.P2)
    else:
        sub = _segment_substitution(f, a, b, c, Slot.OR, Slot.P2)
    if apply_substitution(f, sub) != TABLE_IMPLIES:
        raise AssertionError("internal error: chain construction missed the target")
    return sub


def ftf_substitution(f: TruthTable) -> Substitution:
    """Witness substitution composing ``f`` down to p1 & ~p2 (dual of the TFT case)."""
    if not classify(f).is_ftf:
        raise ValueError("substitution to p1 & ~p2 needs an FTF function")
    a, b, c = _first_chain(f, middle_value=True)
    d = a | (c & ~b)
    if not f.value_at(d):
        sub = _segment_substitution(f, a, b, c, Slot.P1, Slot.P2)
    else:
        sub = _segment_substitution(f, a, b, c, Slot.P1, Slot.AND)
    if apply_substitution(f, sub) != TABLE_AND_NOT:
        raise AssertionError("internal error: chain construction missed the target")
    return sub


def _interval_projection(f: TruthTable, lo_value: bool) -> Substitution:
    """Substitution over {p1, T, F} from the first x < y with f(x)=lo_value, f(y)=~lo_value."""
    n, size = f.arity, f.size
    for y in range(size):
        if f.value_at(y) == lo_value:
            continue
        for x in range(y):
            if x & y == x and f.value_at(x) == lo_value:
                entries = []
                for k in range(1, n + 1):
                    bit = 1 << (n - k)
                    if x & bit:
                        entries.append(Slot.TOP)
                    elif y & bit:
                        entries.append(Slot.P1)
                    else:
                        entries.append(Slot.BOT)
                return Substitution(tuple(entries))
    raise ValueError("no order violation found")


def rest_projections(f: TruthTable) -> tuple[Substitution, Substitution]:
    """Substitutions over {p1, T, F} whose composites are p1 and ~p1 respectively.

    The first comes from a failure of anti-monotonicity (value rising along
    the order), the second from a failure of monotonicity.
    """
    if not classify(f).is_rest:
        raise ValueError("projection pair needs a rest function")
    to_p1 = _interval_projection(f, lo_value=False)
    to_not_p1 = _interval_projection(f, lo_value=True)
    if apply_substitution(f, to_p1) != TABLE_P1_2:
        raise AssertionError("internal error: rising-pair construction missed p1")
    if apply_substitution(f, to_not_p1) != TABLE_NOT_P1_2:
        raise AssertionError("internal error: falling-pair construction missed ~p1")
    return to_p1, to_not_p1


def non_ftf_dnf(f: TruthTable) -> MonotoneDnf:
    """Two-sided DNF of a non-constant non-FTF function.

    Positive clauses come from the minimal true points that have no false
    point strictly above them; negated clauses from the maximal true
    points with no false point strictly below.  A true point incomparable
    to every false point is covered from both sides.
    """
    cls = classify(f)
    if cls.is_constant or cls.is_ftf:
        raise ValueError("two-sided DNF needs a non-constant non-FTF function")
    n, size = f.arity, f.size
    full = (1 << size) - 1
    ones = f.bits
    zeros = full & ~ones
    upper = ones & ~_strict_up_or(zeros, n)
    lower = ones & ~_strict_down_or(zeros, n)
    minimal_upper = upper & ~_strict_down_or(upper, n)
    maximal_lower = lower & ~_strict_up_or(lower, n)
    positive = frozenset(_coords_set(i, n) for i in _indices(minimal_upper, size))
    negative = frozenset(_coords_unset(i, n) for i in _indices(maximal_lower, size))
    result = MonotoneDnf(positive=positive, negative=negative)
    if result.dnf_table(n) != f:
        raise AssertionError("internal error: two-sided DNF does not reproduce the function")
    return result


def non_tft_cnf(f: TruthTable) -> MonotoneDnf:
    """Two-sided CNF of a non-constant non-TFT function, via the dual DNF."""
    cls = classify(f)
    if cls.is_constant or cls.is_tft:
        raise ValueError("two-sided CNF needs a non-constant non-TFT function")
    dual_form = non_ftf_dnf(f.dual())
    result = MonotoneDnf(positive=dual_form.positive, negative=dual_form.negative)
    if result.cnf_table(f.arity) != f:
        raise AssertionError("internal error: two-sided CNF does not reproduce the function")
    return result
