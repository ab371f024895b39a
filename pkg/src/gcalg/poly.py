"""Exact multivariate polynomials over Q in the fixed variable set (T, x, lambda, mu).

Terms are stored as a map from exponent 4-tuples to nonzero Fractions, so
equality is structural and every value is canonical by construction.  The
term order used for printing is graded lexicographic with T > x > lambda > mu.
No floating point enters anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ParseError

VARS = ("T", "x", "lambda", "mu")
_VAR_INDEX = {name: i for i, name in enumerate(VARS)}
_NVARS = len(VARS)
_ZERO_EXP = (0,) * _NVARS

Scalar = Union[int, Fraction]


def _coerce(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")


class MPoly:
    """Immutable multivariate polynomial over Q in (T, x, lambda, mu)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, Scalar] | None = None):
        clean: dict[tuple, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                c = _coerce(coeff)
                if c == 0:
                    continue
                exp = tuple(exp)
                if len(exp) != _NVARS or any(e < 0 or not isinstance(e, int) for e in exp):
                    raise ValueError(f"bad exponent vector {exp!r}")
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if clean[exp] == 0:
                    del clean[exp]
        self._terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "MPoly":
        return cls()

    @classmethod
    def const(cls, c: Scalar) -> "MPoly":
        c = _coerce(c)
        return cls({_ZERO_EXP: c}) if c else cls()

    @classmethod
    def var(cls, name: str) -> "MPoly":
        if name not in _VAR_INDEX:
            raise ValueError(f"unknown variable {name!r}; allowed: {VARS}")
        exp = [0] * _NVARS
        exp[_VAR_INDEX[name]] = 1
        return cls({tuple(exp): 1})

    # -- views ------------------------------------------------------------

    @property
    def terms(self) -> dict[tuple, Fraction]:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {_ZERO_EXP}

    def constant_value(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms[_ZERO_EXP]

    def degree(self, name: str | None = None) -> int:
        """Total degree, or degree in one variable. Zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        i = _VAR_INDEX[name]
        return max(e[i] for e in self._terms)

    def variables(self) -> set[str]:
        used = set()
        for exp in self._terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(VARS[i])
        return used

    def uses_only(self, names: Iterable[str]) -> bool:
        return self.variables() <= set(names)

    # -- ring operations ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __neg__(self) -> "MPoly":
        return MPoly({e: -c for e, c in self._terms.items()})

    def __add__(self, other) -> "MPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        p = MPoly.__new__(MPoly)
        p._terms = out
        return p

    __radd__ = __add__

    def __sub__(self, other) -> "MPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "MPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        p = MPoly.__new__(MPoly)
        p._terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "MPoly":
        c = _coerce(c)
        if c == 0:
            return MPoly.zero()
        return MPoly({e: k * c for e, k in self._terms.items()})

    # -- substitution and evaluation ----------------------------------------

    def substitute(self, bindings: Mapping[str, "MPoly | Scalar"]) -> "MPoly":
        """Simultaneous substitution; variables absent from `bindings` stay themselves."""
        images: list[MPoly] = []
        for name in VARS:
            v = bindings.get(name)
            if v is None:
                images.append(MPoly.var(name))
            elif isinstance(v, MPoly):
                images.append(v)
            else:
                images.append(MPoly.const(v))
        result = MPoly.zero()
        power_cache: list[dict[int, MPoly]] = [{0: MPoly.const(1)} for _ in VARS]
        for exp, coeff in self._terms.items():
            term = MPoly.const(coeff)
            for i, e in enumerate(exp):
                if e:
                    cache = power_cache[i]
                    if e not in cache:
                        cache[e] = images[i] ** e
                    term = term * cache[e]
            result = result + term
        return result

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Evaluate at a rational point; every variable that occurs must be bound."""
        missing = self.variables() - set(assignment)
        if missing:
            raise ValueError(f"unbound variables in evaluation: {sorted(missing)}")
        total = Fraction(0)
        for exp, coeff in self._terms.items():
            v = coeff
            for i, e in enumerate(exp):
                if e:
                    v *= _coerce(assignment[VARS[i]]) ** e
            total += v
        return total

    # -- univariate helpers (used by the Hermite form over Q[T]) -----------

    def coeffs_in(self, name: str) -> dict[int, "MPoly"]:
        """Decompose as a polynomial in one variable with MPoly coefficients."""
        i = _VAR_INDEX[name]
        out: dict[int, dict[tuple, Fraction]] = {}
        for exp, coeff in self._terms.items():
            k = exp[i]
            rest = exp[:i] + (0,) + exp[i + 1:]
            out.setdefault(k, {})[rest] = coeff
        return {k: MPoly(d) for k, d in out.items()}

    def coeff_of(self, name: str, k: int) -> "MPoly":
        return self.coeffs_in(name).get(k, MPoly.zero())

    def leading_coeff(self, name: str) -> Fraction:
        """Leading coefficient as a rational; requires univariate content."""
        if not self.uses_only({name}):
            raise ValueError(f"{self} is not univariate in {name}")
        d = self.degree(name)
        if d < 0:
            return Fraction(0)
        return self.coeff_of(name, d).constant_value()

    def divmod_univariate(self, divisor: "MPoly", name: str) -> tuple["MPoly", "MPoly"]:
        """Euclidean division for polynomials univariate in `name`."""
        if not (self.uses_only({name}) and divisor.uses_only({name})):
            raise ValueError("divmod_univariate requires univariate operands")
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        var = MPoly.var(name)
        q = MPoly.zero()
        r = self
        ddeg = divisor.degree(name)
        dlead = divisor.leading_coeff(name)
        while not r.is_zero() and r.degree(name) >= ddeg:
            shift = r.degree(name) - ddeg
            factor = (var ** shift).scale(r.leading_coeff(name) / dlead)
            q = q + factor
            r = r - factor * divisor
        return q, r

    # -- printing ----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for exp, coeff in self.sorted_terms():
            factors = []
            for i, e in enumerate(exp):
                if e == 1:
                    factors.append(VARS[i])
                elif e > 1:
                    factors.append(f"{VARS[i]}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if not parts:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MPoly({self})"


def _as_poly(v) -> "MPoly":
    if isinstance(v, MPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return MPoly.const(v)
    return NotImplemented


ZERO = MPoly.zero()
ONE = MPoly.const(1)
T = MPoly.var("T")
X = MPoly.var("x")
LAMBDA = MPoly.var("lambda")
MU = MPoly.var("mu")


# -- text grammar ------------------------------------------------------------
#
#   expr   := ['-'] term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := atom ['^' nat]
#   atom   := rational | variable | '(' expr ')' | '-' factor
#   rational := int ['/' posint]        variable := T | x | lambda | mu

_TOKEN_SYMBOLS = "+-*^()/"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in _TOKEN_SYMBOLS:
            tokens.append(("sym", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", position=i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_sym(self, sym: str):
        kind, value, at = self.take()
        if kind != "sym" or value != sym:
            raise ParseError(f"expected {sym!r}", position=at)

    def parse(self) -> MPoly:
        p = self.expr()
        kind, value, at = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected trailing input {value!r}", position=at)
        return p

    def expr(self) -> MPoly:
        negate = False
        kind, value, _ = self.peek()
        if kind == "sym" and value == "-":
            self.take()
            negate = True
        result = self.term()
        if negate:
            result = -result
        while True:
            kind, value, _ = self.peek()
            if kind == "sym" and value in "+-":
                self.take()
                rhs = self.term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def term(self) -> MPoly:
        result = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "sym" and value == "*":
                self.take()
                result = result * self.factor()
            else:
                return result

    def factor(self) -> MPoly:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "sym" and value == "^":
            self.take()
            kind, value, at = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer", position=at)
            return base ** int(value)
        return base

    def atom(self) -> MPoly:
        kind, value, at = self.take()
        if kind == "int":
            num = int(value)
            kind2, value2, _ = self.peek()
            if kind2 == "sym" and value2 == "/":
                self.take()
                kind3, value3, at3 = self.take()
                if kind3 != "int" or int(value3) == 0:
                    raise ParseError("denominator must be a positive integer", position=at3)
                return MPoly.const(Fraction(num, int(value3)))
            return MPoly.const(num)
        if kind == "name":
            if value not in _VAR_INDEX:
                raise ParseError(f"unknown variable {value!r}", position=at)
            return MPoly.var(value)
        if kind == "sym" and value == "(":
            inner = self.expr()
            self.expect_sym(")")
            return inner
        if kind == "sym" and value == "-":
            return -self.factor()
        raise ParseError(f"unexpected token {value!r}", position=at)


def parse_poly(text: str) -> MPoly:
    """Parse the polynomial text grammar: rationals a/b, variables T x lambda mu, + - * ^, parentheses."""
    return _Parser(text).parse()


def parse_rational(text: str) -> Fraction:
    p = parse_poly(text)
    if not p.is_constant():
        raise ParseError(f"expected a rational constant, got {text!r}")
    return p.constant_value()
