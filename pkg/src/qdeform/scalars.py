"""Exact arithmetic in the rational function field Q(q).

A :class:`Scalar` is a reduced fraction of univariate polynomials over Q.
Polynomial arithmetic and gcds are delegated to python-flint; this module
only fixes the canonical form and the q-combinatorics built on top of it.

Canonical form: ``gcd(num, den) = 1`` and ``den`` has integer coefficients,
content 1 and positive leading coefficient.  Equality is then structural.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from flint import fmpq, fmpq_poly, fmpz

Rat = Fraction

_P0 = fmpq_poly([])
_P1 = fmpq_poly([1])
_PQ = fmpq_poly([0, 1])


def _to_fraction(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _canon(num: fmpq_poly, den: fmpq_poly) -> tuple[fmpq_poly, fmpq_poly]:
    if den.is_zero():
        raise ZeroDivisionError("Scalar with zero denominator")
    if num.is_zero():
        return _P0, _P1
    if den.degree() > 0:
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
    if den.degree() == 0:
        c = den.coeffs()[0]
        return (num / c if c != 1 else num), _P1
    # make den primitive with integer coefficients and positive lead
    zden = den.numer()
    scale = fmpq(den.denom(), zden.content())
    if den.coeffs()[-1] < 0:
        scale = -scale
    if scale != 1:
        num = num * scale
        den = den * scale
    return num, den


Number = Union[int, Fraction, "Scalar"]


class Scalar:
    """Element of Q(q), stored as a canonical fraction."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        if isinstance(num, Scalar) and den is None:
            self.num, self.den = num.num, num.den
        else:
            n = _as_poly(num)
            d = _P1 if den is None else _as_poly(den)
            self.num, self.den = _canon(n, d)
        self._hash = None

    @classmethod
    def _raw(cls, num: fmpq_poly, den: fmpq_poly) -> "Scalar":
        s = object.__new__(cls)
        s.num = num
        s.den = den
        s._hash = None
        return s

    # ---- constructors -------------------------------------------------
    @classmethod
    def q_pow(cls, k: int) -> "Scalar":
        if k >= 0:
            return cls._raw(_PQ ** k, _P1)
        return cls._raw(_P1, _PQ ** (-k))

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        return parse_scalar(text)

    # ---- predicates ---------------------------------------------------
    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_unit(self) -> bool:
        return not self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    # ---- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar(other)
            else:
                return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num + other.num, _P1)
        if self.den == other.den:
            return Scalar._raw(*_canon(self.num + other.num, self.den))
        return Scalar._raw(*_canon(self.num * other.den + other.num * self.den,
                                   self.den * other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, int):
                if other == 0:
                    return ZERO
                return Scalar._raw(self.num * other, self.den)
            if isinstance(other, Fraction):
                other = Scalar(other)
            else:
                return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num * other.num, _P1)
        if other.num.is_one() and other.den.is_one():
            return self
        if self.num.is_one() and self.den.is_one():
            return other
        return Scalar._raw(*_canon(self.num * other.num, self.den * other.den))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar._raw(*_canon(self.den, self.num))

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar(other)
            else:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n >= 0:
            return Scalar._raw(self.num ** n, self.den ** n)
        if self.num.is_zero():
            raise ZeroDivisionError("zero to a negative power")
        return self.inverse() ** (-n)

    # ---- comparison / hashing ------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == Scalar(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((str(self.num), str(self.den)))
        return self._hash

    # ---- evaluation / printing -----------------------------------------
    def specialize(self, q0) -> Fraction:
        return specialize(self, q0)

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return specialize(self, 0)

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


def _as_poly(x) -> fmpq_poly:
    if isinstance(x, fmpq_poly):
        return x
    if isinstance(x, int):
        return fmpq_poly([x])
    if isinstance(x, Fraction):
        return fmpq_poly([fmpq(x.numerator, x.denominator)])
    if isinstance(x, (list, tuple)):
        return fmpq_poly([fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in x])
    raise TypeError(f"cannot build a polynomial from {x!r}")


ZERO = Scalar(0)
ONE = Scalar(1)
Q = Scalar._raw(_PQ, _P1)


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar(x)


def field_ops(a: Scalar, b: Scalar) -> dict:
    """All field operations at once; ``div`` is None when b = 0."""
    return {
        "add": a + b, "sub": a - b, "mul": a * b,
        "div": a / b if b else None, "neg": -a, "eq": a == b,
        "is_unit": a.is_unit(),
    }


def scalar_pow(a: Scalar, n: int) -> Scalar:
    return a ** n


def specialize(a: Scalar, q0) -> Fraction:
    """Evaluate the reduced fraction at a rational point."""
    x = fmpq(Fraction(q0).numerator, Fraction(q0).denominator)
    d = a.den(x)
    if d == 0:
        raise ZeroDivisionError(f"{a} has a pole at q = {q0}")
    return _to_fraction(a.num(x) / d)


def q_integer(l: int, t: Scalar) -> Scalar:
    """(l)_t = 1 + t + ... + t^(l-1)."""
    if l < 1:
        raise ValueError("q_integer needs l >= 1")
    acc = ZERO
    p = ONE
    for _ in range(l):
        acc = acc + p
        p = p * t
    return acc


def bracket(m: int, t: Scalar) -> Scalar:
    """Symmetric q-number [m]_t = (t^m - t^-m)/(t - t^-1)."""
    den = t - t.inverse()
    if not den:
        raise ZeroDivisionError("bracket denominator t - 1/t vanishes")
    return (t ** m - t ** (-m)) / den


def gauss_binomial(m: int, r: int, t: Scalar) -> Scalar:
    """Symmetric Gaussian binomial [m r]_t built from [k]_t factorials."""
    if r < 0 or m < r:
        raise ValueError(f"gauss_binomial needs 0 <= r <= m, got ({m}, {r})")
    num = ONE
    den = ONE
    for k in range(1, r + 1):
        num = num * bracket(m - r + k, t)
        den = den * bracket(k, t)
    return num / den


# ---- perfect powers ------------------------------------------------------

def _rational_root(x: Fraction, n: int) -> Fraction | None:
    if x < 0:
        if n % 2 == 0:
            return None
        r = _rational_root(-x, n)
        return None if r is None else -r
    out = []
    for part in (x.numerator, x.denominator):
        r = fmpz(part).root(n)
        if r ** n != part:
            return None
        out.append(int(r))
    return Fraction(out[0], out[1])


def _poly_root(p: fmpq_poly, n: int) -> fmpq_poly | None:
    const, factors = p.factor_squarefree()
    root = _P1
    for f, e in factors:
        if e % n:
            return None
        root = root * f ** (e // n)
    c = _rational_root(_to_fraction(fmpq(const)), n)
    if c is None:
        return None
    return root * fmpq(c.numerator, c.denominator)


def nth_root(a: Scalar, n: int) -> Scalar | None:
    """Return b with b**n == a if such b exists in Q(q), else None.

    Uses square-free decomposition of numerator and denominator: a reduced
    fraction is an n-th power iff both parts are, up to a rational constant.
    """
    if n < 1:
        raise ValueError("root index must be positive")
    if not a:
        return ZERO
    if n == 1:
        return a
    rn = _poly_root(a.num, n)
    rd = _poly_root(a.den, n)
    if rn is None or rd is None:
        return None
    root = Scalar(rn, rd)
    return root if root ** n == a else None


def is_square(a: Scalar) -> bool:
    return nth_root(a, 2) is not None


# ---- text format -----------------------------------------------------------

def _format_int_poly(coeffs: list[int]) -> str:
    parts = []
    for deg in range(len(coeffs) - 1, -1, -1):
        c = coeffs[deg]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if deg == 0:
            body = str(a)
        else:
            mono = "q" if deg == 1 else f"q^{deg}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


def format_scalar(a: Scalar) -> str:
    """Serialize as an integer-coefficient fraction, e.g. ``(q^2-1)/(q)``."""
    lcm = a.num.denom()
    num = a.num * lcm
    den = a.den * lcm
    ncoeffs = [int(c.p) for c in num.coeffs()]
    dcoeffs = [int(c.p) for c in den.coeffs()]
    ns = _format_int_poly(ncoeffs)
    if dcoeffs == [1]:
        return ns
    return f"({ns})/({_format_int_poly(dcoeffs)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\*\*|[-+*/^()]))")


def parse_scalar(text: str) -> Scalar:
    """Parse a rational expression in q (integers, q, + - * / ^, parentheses).

    Exponents may be negative integers, so ``q^-1`` is accepted.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad scalar syntax at {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            tokens.append(("int", int(m.group(1))))
        elif m.group(2):
            tokens.append(("q", None))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op))
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while True:
            tok = peek()
            if tok in (("op", "*"), ("op", "/")):
                take()
                rhs = unary()
                val = val * rhs if tok[1] == "*" else val / rhs
            elif tok[0] in ("int", "q") or tok == ("op", "("):
                val = val * unary()  # implicit product such as 2q
            else:
                return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            while peek() in (("op", "-"), ("op", "+")):
                if take()[1] == "-":
                    sign = -sign
            tok = take()
            if tok[0] == "int":
                return base ** (sign * tok[1])
            if tok == ("op", "("):
                e = expr()
                if take() != ("op", ")"):
                    raise ValueError("unbalanced parentheses in exponent")
                if not e.is_constant() or e.to_fraction().denominator != 1:
                    raise ValueError("exponent must be an integer")
                return base ** (sign * int(e.to_fraction()))
            raise ValueError("exponent must be an integer")
        return base

    def atom():
        tok = take()
        if tok[0] == "int":
            return Scalar(tok[1])
        if tok[0] == "q":
            return Q
        if tok == ("op", "("):
            val = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return val
        raise ValueError(f"unexpected token {tok!r} in {text!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return result
