"""The free associative algebra k<x1,...,xs>.

Monomials are words: tuples of generator indices in [1, s].  Concatenation is
the monoid product and nothing commutes except the scalars.  The module also
owns the expression grammar shared with the CLI:

    expr    := term (("+" | "-") term)*
    term    := signed (("*")? signed)*
    signed  := ("-")? factor
    factor  := atom ("^" NAT)?
    atom    := GEN | RATIONAL | "(" expr ")"
    GEN     := "x" NAT        RATIONAL := NAT ("/" NAT)?

Juxtaposition and "*" both mean the noncommutative product; "^" binds tighter
than products, products tighter than sums.
"""

from __future__ import annotations

from .errors import (
    FieldMismatch,
    ParseError,
    ShapeMismatch,
    UnknownGenerator,
)
from .fields import NEG_INF, Field, Scalar

Word = tuple  # tuple[int, ...]

EMPTY_WORD: Word = ()


def word_key(w: Word):
    """Graded-lex sort key: longer words first, then by generator indices."""
    return (-len(w), w)


class FreePoly:
    """Element of the free algebra: finite map word -> scalar, canonical."""

    __slots__ = ("s", "field", "terms")

    def __init__(self, s: int, field: Field, terms=None):
        if s < 1:
            raise ValueError("generator count must be at least 1")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "field", field)
        clean = {}
        for w, c in (terms or {}).items():
            if not isinstance(c, Scalar):
                c = field.scalar(c)
            elif c.field != field:
                raise FieldMismatch("coefficient from a different field")
            if any(g < 1 or g > s for g in w):
                raise UnknownGenerator(f"word {w} uses a generator outside [1,{s}]")
            if c:
                clean[w] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("FreePoly is immutable")

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(s: int, field: Field) -> FreePoly:
        return FreePoly(s, field)

    @staticmethod
    def one(s: int, field: Field) -> FreePoly:
        return FreePoly(s, field, {EMPTY_WORD: field.one})

    @staticmethod
    def constant(c: Scalar, s: int) -> FreePoly:
        return FreePoly(s, c.field, {EMPTY_WORD: c})

    @staticmethod
    def generator(i: int, s: int, field: Field) -> FreePoly:
        if i < 1 or i > s:
            raise UnknownGenerator(f"x{i} with only {s} generators")
        return FreePoly(s, field, {(i,): field.one})

    # -- structure -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_scalar(self) -> bool:
        """True when the element lies in the ground field (including 0)."""
        return not self.terms or (len(self.terms) == 1 and EMPTY_WORD in self.terms)

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(len(w) for w in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get(EMPTY_WORD, self.field.zero)

    def coefficient(self, w: Word) -> Scalar:
        return self.terms.get(w, self.field.zero)

    def homogeneous_component(self, m: int) -> FreePoly:
        if m < 0:
            raise ValueError("degree must be nonnegative")
        return FreePoly(self.s, self.field, {w: c for w, c in self.terms.items() if len(w) == m})

    def support(self):
        return sorted(self.terms, key=word_key)

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other) -> FreePoly:
        if not isinstance(other, FreePoly):
            raise TypeError(f"expected FreePoly, got {other!r}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        if other.s != self.s:
            raise FieldMismatch(f"different generator counts {self.s} vs {other.s}")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w)
            terms[w] = c if s is None else s + c
        return FreePoly(self.s, self.field, terms)

    def __sub__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w)
            terms[w] = -c if s is None else s - c
        return FreePoly(self.s, self.field, terms)

    def __neg__(self):
        return FreePoly(self.s, self.field, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        other = self._check(other)
        terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                s = terms.get(w)
                terms[w] = c if s is None else s + c
        return FreePoly(self.s, self.field, terms)

    def scale(self, c: Scalar) -> FreePoly:
        return FreePoly(self.s, self.field, {w: v * c for w, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = FreePoly.one(self.s, self.field)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FreePoly)
            and self.field == other.field
            and self.s == other.s
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.s, self.field, frozenset(self.terms.items())))

    # -- evaluation ----------------------------------------------------------------

    def evaluate_in_matrices(self, images):
        """Apply the algebra homomorphism x_l -> images[l-1] (square matrices)."""
        if len(images) != self.s:
            raise ShapeMismatch(f"need {self.s} matrices, got {len(images)}")
        first = images[0]
        for m in images:
            if m.n != first.n:
                raise ShapeMismatch("matrices must share one size")
            if m.field != self.field:
                raise FieldMismatch("matrix ring over a different field")
        identity = first.identity_like()
        out = identity.scale(self.field.zero)
        cache = {EMPTY_WORD: identity}
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            prod = cache.get(w)
            if prod is None:
                prefix = w[:-1]
                base = cache.get(prefix)
                if base is None:
                    base = identity
                    for g in prefix:
                        base = base * images[g - 1]
                    cache[prefix] = base
                prod = base * images[w[-1] - 1]
                cache[w] = prod
            out = out + prod.scale(self.terms[w])
        return out

    # -- display --------------------------------------------------------------------

    def __str__(self):
        return pretty(self)

    def __repr__(self):
        return f"FreePoly({self})"


def commutator(a: FreePoly, b: FreePoly) -> FreePoly:
    """a*b - b*a."""
    return a * b - b * a


def _word_str(w: Word) -> str:
    if not w:
        return "1"
    runs = []
    for g in w:
        if runs and runs[-1][0] == g:
            runs[-1][1] += 1
        else:
            runs.append([g, 1])
    return "*".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in runs)


def pretty(a: FreePoly) -> str:
    """Deterministic rendering; parses back to an equal polynomial."""
    if a.is_zero:
        return "0"
    parts = []
    for w in a.support():
        c = a.terms[w]
        negative = c.field.p == 0 and c.value < 0
        mag = -c if negative else c
        if w == EMPTY_WORD:
            chunk = str(mag)
        elif mag == a.field.one:
            chunk = _word_str(w)
        else:
            chunk = f"{mag}*{_word_str(w)}"
        if not parts:
            parts.append(f"-{chunk}" if negative else chunk)
        else:
            parts.append(f"- {chunk}" if negative else f"+ {chunk}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.cursor = 0

    def _scan(self):
        text, i = self.text, 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch in "+-*^()/":
                self.tokens.append((ch, None, i))
                i += 1
                continue
            if ch == "x":
                j = i + 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise ParseError("generator needs an index, e.g. x1", i)
                self.tokens.append(("gen", int(text[i + 1 : j]), i))
                i = j
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("nat", int(text[i:j]), i))
                i = j
                continue
            raise ParseError(f"unexpected character {ch!r}", i)
        self.tokens.append(("end", None, len(text)))

    def peek(self):
        return self.tokens[self.cursor]

    def next(self):
        tok = self.tokens[self.cursor]
        self.cursor += 1
        return tok


class _Parser:
    def __init__(self, text: str, s: int, field: Field):
        self.toks = _Tokenizer(text)
        self.s = s
        self.field = field

    def parse(self) -> FreePoly:
        value = self._expr()
        kind, _, pos = self.toks.peek()
        if kind != "end":
            raise ParseError(f"unexpected {kind!r}", pos)
        return value

    def _expr(self) -> FreePoly:
        value = self._term()
        while True:
            kind, _, _ = self.toks.peek()
            if kind == "+":
                self.toks.next()
                value = value + self._term()
            elif kind == "-":
                self.toks.next()
                value = value - self._term()
            else:
                return value

    def _term(self) -> FreePoly:
        value = self._signed()
        while True:
            kind, _, _ = self.toks.peek()
            if kind == "*":
                self.toks.next()
                value = value * self._signed()
            elif kind in ("gen", "nat", "("):
                value = value * self._signed()
            else:
                return value

    def _signed(self) -> FreePoly:
        kind, _, _ = self.toks.peek()
        if kind == "-":
            self.toks.next()
            return -self._factor()
        return self._factor()

    def _factor(self) -> FreePoly:
        value = self._atom()
        kind, _, _ = self.toks.peek()
        if kind == "^":
            self.toks.next()
            nk, n, pos = self.toks.next()
            if nk != "nat":
                raise ParseError("exponent must be a natural number", pos)
            value = value**n
        return value

    def _atom(self) -> FreePoly:
        kind, val, pos = self.toks.next()
        if kind == "gen":
            if val < 1 or val > self.s:
                raise UnknownGenerator(f"x{val} (only {self.s} generators declared)")
            return FreePoly.generator(val, self.s, self.field)
        if kind == "nat":
            num = val
            if self.toks.peek()[0] == "/":
                self.toks.next()
                dk, den, dpos = self.toks.next()
                if dk != "nat":
                    raise ParseError("denominator must be a natural number", dpos)
                if den == 0:
                    raise ParseError("denominator must be nonzero", dpos)
                from fractions import Fraction

                return FreePoly.constant(self.field.scalar(Fraction(num, den)), self.s)
            return FreePoly.constant(self.field.scalar(num), self.s)
        if kind == "(":
            value = self._expr()
            ck, _, cpos = self.toks.next()
            if ck != ")":
                raise ParseError("expected ')'", cpos)
            return value
        raise ParseError(f"expected a generator, number or '('", pos)


def parse_free(text: str, s: int, field: Field) -> FreePoly:
    """Parse an expression string into a canonical FreePoly."""
    return _Parser(text, s, field).parse()
