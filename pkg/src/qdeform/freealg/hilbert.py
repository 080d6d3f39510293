"""Normal-word counts and an independent spanning oracle for them.

``hilbert_ranks`` counts irreducible words of each length, which is the
rank over k[Gamma] of the associated graded once the rewrite system is
confluent.  ``oracle_ranks`` recomputes the same numbers without the rewrite
system: the group algebra is specialised along a character
``psi(e_r) = 2, 3, 5, ...`` and the two-sided ideal generated by the defining
relations is spanned degree by degree with exact Gaussian elimination.
"""

from __future__ import annotations

from itertools import product

from ..linalg import Echelon
from ..scalars import Scalar
from .presentation import Presentation

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def basis_enumerate(p: Presentation, D: int) -> list[list[tuple[int, ...]]]:
    if p.valid_length is not None and D > p.valid_length:
        raise ValueError(f"rule set only verified up to word length {p.valid_length}")
    return p.basis(D)


def hilbert_ranks(p: Presentation, D: int) -> list[int]:
    return [len(layer) for layer in basis_enumerate(p, D)]


def _psi(g, rank: int) -> Scalar:
    val = Scalar(1)
    for r, e in enumerate(g):
        if e:
            val = val * Scalar(_PRIMES[r]) ** e
    return val


def _components(p: Presentation, rel: dict) -> list[dict]:
    """Split a relation by the character chi_w of its words (left Gamma-action)."""
    gens = [tuple(1 if s == r else 0 for s in range(p.rank)) for r in range(p.rank)]
    parts: dict = {}
    for (w, g), c in rel.items():
        key = tuple(p.chi_word(w, e) for e in gens)
        parts.setdefault(key, {})[(w, g)] = c
    return list(parts.values())


def oracle_filtered_dims(p: Presentation, D: int) -> list[int]:
    """dim of the image of TV_{<=n} in A (x) k_psi for n = 0..D."""
    if p.crossed:
        raise ValueError("the spanning oracle needs an untwisted group algebra")
    n_letters = p.n
    comps = []
    for rel in p.relations:
        if rel:
            deg = max(len(w) for w, _ in rel)
            for part in _components(p, rel):
                comps.append((deg, part))
    ech = Echelon(order=lambda w: (len(w), w))
    dims = []
    total_words = 0
    for n in range(D + 1):
        total_words += n_letters ** n
        for deg, part in comps:
            rest = n - deg
            if rest < 0:
                continue
            for lu in range(rest + 1):
                lv = rest - lu
                for u in product(range(n_letters), repeat=lu):
                    for v in product(range(n_letters), repeat=lv):
                        vec: dict = {}
                        for (w, g), c in part.items():
                            word = u + w + v
                            val = c * p.chi_word(v, g) * _psi(g, p.rank)
                            old = vec.get(word)
                            vec[word] = val if old is None else old + val
                        ech.add(vec)
        dims.append(total_words - ech.rank)
    return dims


def oracle_ranks(p: Presentation, D: int) -> list[int]:
    dims = oracle_filtered_dims(p, D)
    return [dims[0]] + [dims[n] - dims[n - 1] for n in range(1, D + 1)]


def series_coefficients(factors: list[int], D: int) -> list[int]:
    """Coefficients of prod 1/(1 - t^a) over the given exponents, degrees 0..D."""
    coeffs = [1] + [0] * D
    for a in factors:
        for n in range(a, D + 1):
            coeffs[n] += coeffs[n - a]
    return coeffs
