"""Critical-pair checks for a presentation's rewrite system.

Every ambiguity is reduced both ways and the difference returned.  Three
kinds are examined: word overlaps and inclusions between rules, group letters
meeting a rule (``g * lhs``), and associativity of the group part in a crossed
product.  Because the ordering is well founded, an empty set of nonzero
residuals means the system is confluent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..abgroup import gadd
from ..scalars import ONE
from .element import Element, acc
from .presentation import Presentation


@dataclass
class Ambiguity:
    kind: str
    description: str
    residual: Element

    @property
    def resolved(self) -> bool:
        return self.residual.is_zero()


@dataclass
class OverlapReport:
    entries: list[Ambiguity] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(a.resolved for a in self.entries)

    @property
    def failures(self) -> list[Ambiguity]:
        return [a for a in self.entries if not a.resolved]

    def to_json(self, p: Presentation) -> dict:
        return {
            "checked": len(self.entries),
            "pass": self.ok,
            "failures": [{"kind": a.kind, "ambiguity": a.description,
                          "residual": p.format(a.residual)} for a in self.failures],
        }


def _word_label(p: Presentation, w) -> str:
    return "".join(f"x[{p.labels[k]}]" for k in w)


def _rewrite_then_reduce(p: Presentation, w, pos: int, lhs) -> dict:
    return p.reduce_dict(p.expand_at(w, pos, lhs))


def word_ambiguities(p: Presentation, max_len: int | None = None) -> list[tuple]:
    """(word, (pos1, lhs1), (pos2, lhs2)) for overlaps and inclusions of rule sides."""
    out = []
    lhss = sorted(p.rules, key=lambda w: (len(w), w))
    for l1 in lhss:
        for l2 in lhss:
            # proper overlaps: suffix of l1 equals prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    w = l1 + l2[k:]
                    if max_len is None or len(w) <= max_len:
                        out.append((w, (0, l1), (len(l1) - k, l2)))
            # inclusions: l2 strictly inside l1
            if l1 != l2 and len(l2) <= len(l1):
                for s in range(len(l1) - len(l2) + 1):
                    if l1[s:s + len(l2)] == l2:
                        if max_len is None or len(l1) <= max_len:
                            out.append((l1, (0, l1), (s, l2)))
    return out


def group_samples(rank: int, box: int = 1) -> list[tuple[int, ...]]:
    out = []
    for r in range(rank):
        for k in range(1, box + 1):
            out.append(tuple(k if s == r else 0 for s in range(rank)))
            out.append(tuple(-k if s == r else 0 for s in range(rank)))
    return out


def check_overlaps(p: Presentation, max_len: int | None = 4, box: int = 1) -> OverlapReport:
    """Reduce every critical pair both ways; residuals are returned, not raised."""
    rep = OverlapReport()
    for w, (p1, l1), (p2, l2) in word_ambiguities(p, max_len):
        a = _rewrite_then_reduce(p, w, p1, l1)
        b = _rewrite_then_reduce(p, w, p2, l2)
        res = Element(a) - Element(b)
        desc = f"{_word_label(p, w)} via {_word_label(p, l1)}@{p1} / {_word_label(p, l2)}@{p2}"
        rep.entries.append(Ambiguity("word", desc, res))
    samples = group_samples(p.rank, box)
    for lhs in sorted(p.rules, key=lambda w: (len(w), w)):
        if max_len is not None and len(lhs) > max_len:
            continue
        rhs = p.rules[lhs]
        for g in samples:
            gm = ((), g)
            # gbar * lhs reduced by first moving gbar right, then rewriting lhs
            way1 = p.mul_dict({gm: ONE}, rhs)
            moved = p.right_group(rhs, g, p.chi_word(lhs, g))
            way2 = p.reduce_dict(moved)
            res = Element(way1) - Element(way2)
            rep.entries.append(Ambiguity("group", f"K{g} * {_word_label(p, lhs)}", res))
    if p.crossed:
        for a, b, c in product(samples, repeat=3):
            lhs = p.sig(a, b) * p.sig(gadd(a, b), c)
            rhs = p.sig(b, c) * p.sig(a, gadd(b, c))
            res: dict = {}
            acc(res, ((), gadd(gadd(a, b), c)), lhs - rhs)
            rep.entries.append(Ambiguity("cocycle", f"K{a} K{b} K{c}", Element(res)))
    return rep


def theta_triple_raw(p: Presentation, i, j, k) -> Element:
    """Residual of the x_i x_j x_k overlap with group letters treated as central.

    This is the expression obtained before any support argument: both
    reductions of x_i x_j x_k (|i| > |j| > |k|) move the tails' group letters
    right without twisting.
    """
    raw = p.clone(central_groups=True)
    pos = raw.datum.pos
    w = (pos[i], pos[j], pos[k])
    a = _rewrite_then_reduce(raw, w, 0, w[:2])
    b = _rewrite_then_reduce(raw, w, 1, w[1:])
    return Element(a) - Element(b)


def raw_triple_expected(p: Presentation, i, j, k) -> Element:
    """The closed-form raw residual: (q_ij q_ik l_jk - l_jk) x_i g_j g_k + ... ."""
    d = p.datum
    q = d.qij
    lam = lambda a, b: p.lam.get((a, b), 0)
    g = {a: d.g[d.pos[a]] for a in (i, j, k)}
    out: dict = {}
    acc(out, ((d.pos[i],), gadd(g[j], g[k])), q(i, j) * q(i, k) * lam(j, k) - lam(j, k))
    acc(out, ((d.pos[j],), gadd(g[i], g[k])), q(i, j) * lam(i, k) - q(j, k) * lam(i, k))
    acc(out, ((d.pos[k],), gadd(g[i], g[j])), lam(i, j) - q(i, k) * q(j, k) * lam(i, j))
    return Element(out)


def complete_block_relations(p: Presentation, max_len: int, max_rounds: int = 50) -> tuple[list[dict], bool]:
    """Degree-truncated completion of the pure-word (block) relations of p.

    Nonzero residuals of word ambiguities up to ``max_len`` are added as new
    relations until none remain.  Deglex reductions never lengthen words, so
    normal forms of words of length <= max_len are then unique.  Returns the
    enlarged relation list and whether anything had to be added.
    """
    rels = [dict(r) for r in p.block_relations]
    added = False
    cur = p
    for _ in range(max_rounds):
        new = []
        for w, (p1, l1), (p2, l2) in word_ambiguities(cur, max_len):
            if any(cur.datum.block_of[k] != cur.datum.block_of[w[0]] for k in w):
                continue
            a = _rewrite_then_reduce(cur, w, p1, l1)
            b = _rewrite_then_reduce(cur, w, p2, l2)
            res = Element(a) - Element(b)
            if res:
                # reduce against the relations found earlier in this round
                res = _reduce_against(res.terms, new)
                if res:
                    new.append(res)
        if not new:
            return rels, added
        added = True
        rels.extend(new)
        cur = cur.clone(block_relations=rels)
    raise RuntimeError("truncated completion did not stabilise")


def _reduce_against(d: dict, rels: list[dict]) -> dict:
    from .presentation import orient
    d = dict(d)
    changed = True
    while changed and d:
        changed = False
        for r in rels:
            lhs, rhs = orient(r)
            for (w, g), c in list(d.items()):
                if w == lhs and not any(g):
                    del d[(w, g)]
                    for mono, c2 in rhs.items():
                        acc(d, mono, c2 * c)
                    changed = True
    return d
