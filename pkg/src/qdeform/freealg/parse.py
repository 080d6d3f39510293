"""Reading elements written as ``coeff * x[i1]x[i2] * K(e1,...,em)`` sums.

A term is a product of factors separated by ``*`` or written side by side:
rational expressions in q, generators ``x[label]`` and group elements
``K(e1,...,em)``.  Factors are multiplied in the given presentation, so the
result is already in normal form.
"""

from __future__ import annotations

import re

from ..scalars import ONE, parse_scalar
from .element import Element
from .presentation import Presentation

_FACTOR = re.compile(r"\s*(x\[\s*([^\]]+?)\s*\]|K\(\s*([-\d\s,]*)\)|\*)")


class ParseError(ValueError):
    pass


def _split_terms(text: str) -> list[tuple[int, str]]:
    """Top-level + and - split; a minus right after ^ belongs to an exponent."""
    out = []
    depth = 0
    sign = 1
    cur = ""
    prev = ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in "+-" and prev != "^" and cur.strip():
            out.append((sign, cur))
            sign = 1 if ch == "+" else -1
            cur = ""
        elif depth == 0 and ch in "+-" and prev != "^" and not cur.strip():
            sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
        if not ch.isspace():
            prev = ch
    if depth != 0:
        raise ParseError("unbalanced brackets")
    if cur.strip():
        out.append((sign, cur))
    return out


def _label(p: Presentation, text: str):
    for lab in p.labels:
        if str(lab) == text:
            return lab
    raise ParseError(f"unknown generator x[{text}]")


def parse_element(text: str, p: Presentation) -> Element:
    total = Element()
    terms = _split_terms(text)
    if not terms:
        raise ParseError("empty expression")
    for sign, body in terms:
        value = p.one()
        pos = 0
        body = body.strip()
        star = True  # a factor is expected next
        while pos < len(body):
            m = _FACTOR.match(body, pos)
            if m and m.group(1) == "*":
                if star:
                    raise ParseError(f"misplaced '*' at {body[m.start():]!r}")
                star = True
                pos = m.end()
                continue
            star = False
            if m:
                pos = m.end()
                if m.group(2) is not None:
                    value = p.mul(value, p.gen(_label(p, m.group(2))))
                elif m.group(3) is not None:
                    try:
                        g = tuple(int(x) for x in m.group(3).split(",") if x.strip())
                    except ValueError as exc:
                        raise ParseError(f"bad group element K({m.group(3)})") from exc
                    if len(g) != p.rank:
                        raise ParseError(f"K(...) needs {p.rank} exponents")
                    value = p.mul(value, p.group(g))
                continue
            # a scalar factor runs until the next top-level '*', 'x[' or 'K('
            end, depth = pos, 0
            while end < len(body):
                ch = body[end]
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                elif depth == 0 and (ch == "*" and body[end:end + 2] != "**"
                                     or body.startswith("x[", end) or body.startswith("K(", end)):
                    break
                end += 1 if body[end:end + 2] != "**" else 2
            chunk = body[pos:end].strip()
            if not chunk:
                raise ParseError(f"cannot read factor at {body[pos:]!r}")
            try:
                c = parse_scalar(chunk)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad coefficient {chunk!r}: {exc}") from exc
            value = value.scale(c)
            pos = end
        if star:
            raise ParseError(f"term {body!r} ends without a factor")
        total = total + (value if sign > 0 else value.scale(-ONE))
    return total
