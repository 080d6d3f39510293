"""Elements of F = TV x Gamma and tensor powers of it.

A monomial is a pair ``(word, grp)`` with ``word`` a tuple of datum positions
and ``grp`` an exponent vector; it stands for ``x_{w1}...x_{wl} * g``.  An
element is a dict from monomials to nonzero coefficients.  Coefficients are
Scalars, or KM values over the square-zero extension; both only need ``+``,
``*`` and truthiness.
"""

from __future__ import annotations

from typing import Iterable

from ..scalars import ONE, Scalar, format_scalar

Mono = tuple[tuple[int, ...], tuple[int, ...]]


def acc(d: dict, key, c) -> None:
    """d[key] += c, dropping zero entries."""
    old = d.get(key)
    if old is None:
        if c:
            d[key] = c
        return
    new = old + c
    if new:
        d[key] = new
    else:
        del d[key]


def add_scaled(d: dict, other: dict, c) -> None:
    for k, v in other.items():
        acc(d, k, v * c)


def term_key(mono: Mono):
    w, g = mono
    return (len(w), w, g)


class Element:
    """Canonical finite sum of coefficient * word * group element."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def monomial(cls, word: Iterable[int], grp: Iterable[int], coeff=ONE) -> "Element":
        return cls({(tuple(word), tuple(grp)): coeff})

    @classmethod
    def scalar(cls, c, rank: int) -> "Element":
        return cls({((), (0,) * rank): c})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: term_key(kv[0]))

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Element") -> "Element":
        d = dict(self.terms)
        for k, v in other.terms.items():
            acc(d, k, v)
        return Element(d)

    def __neg__(self) -> "Element":
        return Element({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        d = {}
        for k, v in self.terms.items():
            acc(d, k, v * c)
        return Element(d)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple((k, v) for k, v in self.items()))

    def degree(self) -> int:
        """Largest word length (x-degree); -1 for zero."""
        return max((len(w) for w, _ in self.terms), default=-1)

    def coefficient(self, word, grp):
        return self.terms.get((tuple(word), tuple(grp)), 0)

    def scalar_part(self, rank: int):
        """Coefficient of the unit if the element is a multiple of 1, else None."""
        if not self.terms:
            return Scalar(0)
        if len(self.terms) == 1:
            (w, g), c = next(iter(self.terms.items()))
            if not w and not any(g):
                return c
        return None

    def __repr__(self):
        return f"Element({len(self.terms)} terms)"


class TensorElement:
    """Sum of coefficient * (m_1 (x) ... (x) m_r) for monomials m_k, fixed arity."""

    __slots__ = ("terms", "arity")

    def __init__(self, terms: dict | None = None, arity: int = 2):
        self.terms = {k: v for k, v in (terms or {}).items() if v}
        self.arity = arity
        for k in self.terms:
            if len(k) != arity:
                raise ValueError("mixed arity in TensorElement")

    def items(self):
        return sorted(self.terms.items(),
                      key=lambda kv: tuple(term_key(m) for m in kv[0]))

    def __add__(self, other):
        d = dict(self.terms)
        for k, v in other.terms.items():
            acc(d, k, v)
        return TensorElement(d, self.arity)

    def __neg__(self):
        return TensorElement({k: -v for k, v in self.terms.items()}, self.arity)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self - other).is_zero()

    def __len__(self):
        return len(self.terms)


# ---- text format -----------------------------------------------------------------

def format_coeff(c) -> str:
    text = format_scalar(c) if isinstance(c, Scalar) else str(c)
    if any(ch in text[1:] for ch in "+-") or text.startswith("<"):
        return f"({text})"
    return text


def format_mono(mono: Mono, labels) -> str:
    w, g = mono
    word = "".join(f"x[{labels[k]}]" for k in w)
    grp = f"K({','.join(str(e) for e in g)})"
    return f"{word} * {grp}" if word else grp


def format_element(e: Element | dict, labels) -> str:
    """``coeff * x[i1]x[i2] * K(e1,...,em)`` terms joined by `` + `` in canonical order."""
    terms = e.items() if isinstance(e, Element) else sorted(e.items(), key=lambda kv: term_key(kv[0]))
    if not terms:
        return "0"
    return " + ".join(f"{format_coeff(c)} * {format_mono(m, labels)}" for m, c in terms)


def format_tensor(t: TensorElement, labels_per_leg) -> str:
    if not t.terms:
        return "0"
    parts = []
    for legs, c in t.items():
        body = " (x) ".join(format_mono(m, labs) for m, labs in zip(legs, labels_per_leg))
        parts.append(f"{format_coeff(c)} * [{body}]")
    return " + ".join(parts)
