"""Free abelian groups Z^m, their characters and second cohomology.

Group elements are plain integer tuples.  Multiplicative 2-cocycles are kept
in bilinear form sigma(a, b) = prod U[i][j]^(a_i b_j); additive ones likewise
with a matrix of M-vectors.  Every class in H^2(Z^m, -) has such a
representative and is determined by its skew invariant.

Also home of k_M = k + M with M^2 = 0 (:class:`KM`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .scalars import ONE, ZERO, Scalar, as_scalar, format_scalar

GrpElt = tuple[int, ...]


def zero(m: int) -> GrpElt:
    return (0,) * m


def unit_vector(m: int, i: int) -> GrpElt:
    return tuple(1 if r == i else 0 for r in range(m))


def gadd(a: GrpElt, b: GrpElt) -> GrpElt:
    return tuple(x + y for x, y in zip(a, b))


def gneg(a: GrpElt) -> GrpElt:
    return tuple(-x for x in a)


def gsum(elts: Iterable[GrpElt], m: int) -> GrpElt:
    return reduce(gadd, elts, zero(m))


@dataclass(frozen=True)
class FreeAbGroup:
    rank: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("free abelian group needs rank >= 1")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{r + 1}" for r in range(self.rank)))
        if len(self.labels) != self.rank:
            raise ValueError("one label per generator required")

    def identity(self) -> GrpElt:
        return zero(self.rank)

    def generator(self, r: int) -> GrpElt:
        return unit_vector(self.rank, r)


def _powprod(values: Sequence[Scalar], exps: Iterable[int]) -> Scalar:
    out = ONE
    for v, e in zip(values, exps):
        if e:
            out = out * v ** e
    return out


class Character:
    """Homomorphism Z^m -> Q(q)^x given by its values on the generators."""

    __slots__ = ("values", "_memo")

    def __init__(self, values: Iterable):
        self.values = tuple(as_scalar(v) for v in values)
        if any(not v for v in self.values):
            raise ValueError("character values must be units")
        self._memo: dict[GrpElt, Scalar] = {}

    @property
    def rank(self) -> int:
        return len(self.values)

    def __call__(self, a: GrpElt) -> Scalar:
        val = self._memo.get(a)
        if val is None:
            if len(a) != len(self.values):
                raise ValueError("rank mismatch in character evaluation")
            val = _powprod(self.values, a)
            self._memo[a] = val
        return val

    def __mul__(self, other: "Character") -> "Character":
        return Character(x * y for x, y in zip(self.values, other.values))

    def inverse(self) -> "Character":
        return Character(v.inverse() for v in self.values)

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.values)

    def __eq__(self, other):
        return isinstance(other, Character) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"Character({[format_scalar(v) for v in self.values]})"

    def to_json(self) -> list[str]:
        return [format_scalar(v) for v in self.values]

    @classmethod
    def from_json(cls, data) -> "Character":
        return cls(as_scalar(v) for v in data)


def char_eval(chi: Character, a: GrpElt) -> Scalar:
    return chi(a)


# ---- multiplicative bilinear cocycles -------------------------------------

class BilinearCocycle:
    """sigma(a, b) = prod_{i,j} U[i][j]^(a_i b_j).

    The normal form used for skew classes has U[j][i] = u free for j > i and
    every other entry 1, so sigma(e_j, e_i) = u and sigma(e_i, e_j) = 1.  General
    matrices are allowed because coboundaries are symmetric, not triangular.
    """

    __slots__ = ("U", "_memo")

    def __init__(self, U: Sequence[Sequence]):
        self.U = tuple(tuple(as_scalar(x) for x in row) for row in U)
        m = len(self.U)
        if any(len(row) != m for row in self.U):
            raise ValueError("cocycle matrix must be square")
        if any(not x for row in self.U for x in row):
            raise ValueError("cocycle entries must be units")
        self._memo: dict[tuple[GrpElt, GrpElt], Scalar] = {}

    @property
    def rank(self) -> int:
        return len(self.U)

    @classmethod
    def trivial(cls, m: int) -> "BilinearCocycle":
        return cls([[ONE] * m for _ in range(m)])

    @classmethod
    def from_skew(cls, m: int, entries: dict[tuple[int, int], object]) -> "BilinearCocycle":
        """Normal-form cocycle with sigma(e_j, e_i) = entries[(i, j)] for i < j."""
        U = [[ONE] * m for _ in range(m)]
        for (i, j), u in entries.items():
            if not 0 <= i < j < m:
                raise ValueError(f"skew entry {(i, j)} is not a pair i < j below rank {m}")
            U[j][i] = as_scalar(u)
        return cls(U)

    def __call__(self, a: GrpElt, b: GrpElt) -> Scalar:
        key = (a, b)
        val = self._memo.get(key)
        if val is None:
            val = ONE
            for i, ai in enumerate(a):
                if ai:
                    row = self.U[i]
                    for j, bj in enumerate(b):
                        if bj and not row[j].is_one():
                            val = val * row[j] ** (ai * bj)
            self._memo[key] = val
        return val

    def __mul__(self, other: "BilinearCocycle") -> "BilinearCocycle":
        return BilinearCocycle([[x * y for x, y in zip(r1, r2)]
                                for r1, r2 in zip(self.U, other.U)])

    def inverse(self) -> "BilinearCocycle":
        return BilinearCocycle([[x.inverse() for x in row] for row in self.U])

    def is_trivial(self) -> bool:
        return all(x.is_one() for row in self.U for x in row)

    def skew_invariant(self) -> dict[tuple[int, int], Scalar]:
        return skew_invariant(self)

    def __eq__(self, other):
        return isinstance(other, BilinearCocycle) and self.U == other.U

    def __hash__(self):
        return hash(self.U)

    def __repr__(self):
        return f"BilinearCocycle({self.to_json()})"

    def to_json(self) -> list[list[str]]:
        return [[format_scalar(x) for x in row] for row in self.U]

    @classmethod
    def from_json(cls, data) -> "BilinearCocycle":
        return cls(data)


def cocycle_eval(sigma: BilinearCocycle, a: GrpElt, b: GrpElt) -> Scalar:
    return sigma(a, b)


def skew_invariant(sigma: BilinearCocycle) -> dict[tuple[int, int], Scalar]:
    """(i, j) -> sigma(e_j, e_i)/sigma(e_i, e_j) for i < j (0-based)."""
    U = sigma.U
    m = len(U)
    return {(i, j): U[j][i] / U[i][j] for i in range(m) for j in range(i + 1, m)}


class OneCochain:
    """eta(a) = prod w_i^a_i * prod_{i<j} S_ij^(a_i a_j) * prod S_ii^(a_i(a_i-1)/2)."""

    __slots__ = ("linear", "sym")

    def __init__(self, linear: Sequence, sym: Sequence[Sequence]):
        self.linear = tuple(as_scalar(w) for w in linear)
        self.sym = tuple(tuple(as_scalar(x) for x in row) for row in sym)
        m = len(self.linear)
        if len(self.sym) != m or any(len(r) != m for r in self.sym):
            raise ValueError("cochain dimensions disagree")
        for i in range(m):
            for j in range(m):
                if self.sym[i][j] != self.sym[j][i]:
                    raise ValueError("quadratic part must be symmetric")
        if any(not w for w in self.linear) or any(not x for r in self.sym for x in r):
            raise ValueError("cochain entries must be units")

    @classmethod
    def trivial(cls, m: int) -> "OneCochain":
        return cls([ONE] * m, [[ONE] * m for _ in range(m)])

    @property
    def rank(self) -> int:
        return len(self.linear)

    def __call__(self, a: GrpElt) -> Scalar:
        m = len(a)
        val = _powprod(self.linear, a)
        for i in range(m):
            if a[i]:
                e = a[i] * (a[i] - 1) // 2
                if e:
                    val = val * self.sym[i][i] ** e
                for j in range(i + 1, m):
                    if a[j]:
                        val = val * self.sym[i][j] ** (a[i] * a[j])
        return val

    def __mul__(self, other: "OneCochain") -> "OneCochain":
        return OneCochain([x * y for x, y in zip(self.linear, other.linear)],
                          [[x * y for x, y in zip(r1, r2)] for r1, r2 in zip(self.sym, other.sym)])

    def inverse(self) -> "OneCochain":
        return OneCochain([x.inverse() for x in self.linear],
                          [[x.inverse() for x in r] for r in self.sym])

    def to_json(self) -> dict:
        return {"linear": [format_scalar(x) for x in self.linear],
                "symmetric": [[format_scalar(x) for x in r] for r in self.sym]}

    def __repr__(self):
        return f"OneCochain({self.to_json()})"


def coboundary(eta: OneCochain) -> BilinearCocycle:
    """d(eta)(a, b) = eta(a) eta(b) / eta(a + b); symmetric with entries S^-1."""
    return BilinearCocycle([[x.inverse() for x in row] for row in eta.sym])


def cohomologous(sigma: BilinearCocycle, sigma2: BilinearCocycle):
    """Return ``(eta, None)`` with sigma2 = sigma * d(eta), or ``(None, (i, j))``.

    The witness comes from the symmetric form sigma2/sigma: eta carries the
    inverse entries as its quadratic part and a trivial linear part.
    """
    if sigma.rank != sigma2.rank:
        raise ValueError("rank mismatch")
    s1 = skew_invariant(sigma)
    s2 = skew_invariant(sigma2)
    for key in sorted(s1):
        if s1[key] != s2[key]:
            return None, key
    ratio = sigma2 * sigma.inverse()
    m = sigma.rank
    eta = OneCochain([ONE] * m, [[x.inverse() for x in row] for row in ratio.U])
    return eta, None


# ---- the trivial module M = Q(q)^d and k_M ---------------------------------

class MVec:
    """Vector in the trivial coefficient module M (entries in Q(q))."""

    __slots__ = ("v",)

    def __init__(self, entries: Iterable):
        self.v = tuple(as_scalar(x) for x in entries)

    @classmethod
    def _raw(cls, entries: tuple) -> "MVec":
        out = object.__new__(cls)
        out.v = entries
        return out

    @classmethod
    def zero(cls, d: int) -> "MVec":
        return cls._raw((ZERO,) * d)

    @property
    def dim(self) -> int:
        return len(self.v)

    def __add__(self, other: "MVec") -> "MVec":
        return MVec._raw(tuple(x + y for x, y in zip(self.v, other.v)))

    def __sub__(self, other: "MVec") -> "MVec":
        return MVec._raw(tuple(x - y for x, y in zip(self.v, other.v)))

    def __neg__(self) -> "MVec":
        return MVec._raw(tuple(-x for x in self.v))

    def scale(self, c) -> "MVec":
        if isinstance(c, int):
            c = Scalar(c)
        return MVec._raw(tuple(x * c for x in self.v))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.v)

    def __eq__(self, other):
        return isinstance(other, MVec) and self.v == other.v

    def __hash__(self):
        return hash(self.v)

    def __repr__(self):
        return f"MVec({[format_scalar(x) for x in self.v]})"

    def to_json(self) -> list[str]:
        return [format_scalar(x) for x in self.v]


class KM:
    """Element (body, nil) of k_M = k + M with nil * nil = 0."""

    __slots__ = ("body", "nil")

    def __init__(self, body, nil: MVec):
        self.body = as_scalar(body)
        self.nil = nil

    @classmethod
    def embed(cls, a, d: int) -> "KM":
        return cls(a, MVec.zero(d))

    def _lift(self, other):
        if isinstance(other, KM):
            return other
        if isinstance(other, (Scalar, int)):
            return KM(other, MVec.zero(self.nil.dim))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return KM(self.body + o.body, self.nil + o.nil)

    __radd__ = __add__

    def __neg__(self):
        return KM(-self.body, -self.nil)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return KM(self.body - o.body, self.nil - o.nil)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            if isinstance(other, int):
                other = Scalar(other)
            return KM(self.body * other, self.nil.scale(other))
        if isinstance(other, KM):
            if not other.nil:
                return KM(self.body * other.body, self.nil.scale(other.body))
            if not self.nil:
                return KM(self.body * other.body, other.nil.scale(self.body))
            return KM(self.body * other.body,
                      self.nil.scale(other.body) + other.nil.scale(self.body))
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "KM":
        if not self.body:
            raise ZeroDivisionError("element of k_M with zero body is not a unit")
        inv = self.body.inverse()
        return KM(inv, self.nil.scale(-(inv * inv)))

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        # (a + u)^n = a^n + n a^(n-1) u
        if n == 0:
            return KM(ONE, MVec.zero(self.nil.dim))
        return KM(self.body ** n, self.nil.scale(n * self.body ** (n - 1)))

    def is_unit(self) -> bool:
        return bool(self.body)

    def is_one(self) -> bool:
        return self.body.is_one() and not self.nil

    def __bool__(self):
        return bool(self.body) or bool(self.nil)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.body == o.body and self.nil == o.nil

    def __hash__(self):
        return hash((self.body, self.nil))

    def __repr__(self):
        return f"KM({format_scalar(self.body)}, {self.nil.to_json()})"

    def __str__(self):
        if not self.nil:
            return format_scalar(self.body)
        return f"<{format_scalar(self.body)}; {', '.join(self.nil.to_json())}>"


def km_ops(x: KM, y: KM) -> dict:
    return {"add": x + y, "mul": x * y, "inv": x.inverse() if x.is_unit() else None,
            "eq": x == y}


# ---- additive cocycles -----------------------------------------------------

class AdditiveCocycle:
    """s(a, b) = sum_{i,j} a_i b_j T[i][j] with T[i][j] in M."""

    __slots__ = ("T",)

    def __init__(self, T: Sequence[Sequence[MVec]]):
        self.T = tuple(tuple(row) for row in T)
        m = len(self.T)
        if any(len(r) != m for r in self.T):
            raise ValueError("cocycle matrix must be square")

    @classmethod
    def zero(cls, m: int, d: int) -> "AdditiveCocycle":
        return cls([[MVec.zero(d)] * m for _ in range(m)])

    @classmethod
    def from_skew(cls, m: int, d: int, entries: dict[tuple[int, int], MVec]) -> "AdditiveCocycle":
        T = [[MVec.zero(d)] * m for _ in range(m)]
        for (i, j), u in entries.items():
            if not 0 <= i < j < m:
                raise ValueError(f"skew entry {(i, j)} is not a pair i < j below rank {m}")
            T[j][i] = u
        return cls(T)

    @property
    def rank(self) -> int:
        return len(self.T)

    @property
    def dim(self) -> int:
        return self.T[0][0].dim

    def __call__(self, a: GrpElt, b: GrpElt) -> MVec:
        out = MVec.zero(self.dim)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out = out + self.T[i][j].scale(ai * bj)
        return out

    def __add__(self, other: "AdditiveCocycle") -> "AdditiveCocycle":
        return AdditiveCocycle([[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(self.T, other.T)])

    def __neg__(self):
        return AdditiveCocycle([[-x for x in r] for r in self.T])

    def is_symmetric(self) -> bool:
        m = self.rank
        return all(self.T[i][j] == self.T[j][i] for i in range(m) for j in range(m))

    def to_json(self) -> list[list[list[str]]]:
        return [[x.to_json() for x in r] for r in self.T]

    def __eq__(self, other):
        return isinstance(other, AdditiveCocycle) and self.T == other.T


class AdditiveCochain:
    """t(a) = sum w_i a_i + sum_{i<j} S_ij a_i a_j + sum S_ii a_i(a_i-1)/2."""

    __slots__ = ("linear", "sym")

    def __init__(self, linear: Sequence[MVec], sym: Sequence[Sequence[MVec]]):
        self.linear = tuple(linear)
        self.sym = tuple(tuple(r) for r in sym)
        m = len(self.linear)
        for i in range(m):
            for j in range(m):
                if self.sym[i][j] != self.sym[j][i]:
                    raise ValueError("quadratic part must be symmetric")

    @classmethod
    def zero(cls, m: int, d: int) -> "AdditiveCochain":
        return cls([MVec.zero(d)] * m, [[MVec.zero(d)] * m for _ in range(m)])

    @property
    def dim(self) -> int:
        return self.linear[0].dim

    def __call__(self, a: GrpElt) -> MVec:
        out = MVec.zero(self.dim)
        m = len(a)
        for i in range(m):
            if a[i]:
                out = out + self.linear[i].scale(a[i])
                e = a[i] * (a[i] - 1) // 2
                if e:
                    out = out + self.sym[i][i].scale(e)
                for j in range(i + 1, m):
                    if a[j]:
                        out = out + self.sym[i][j].scale(a[i] * a[j])
        return out

    def to_json(self) -> dict:
        return {"linear": [w.to_json() for w in self.linear],
                "symmetric": [[x.to_json() for x in r] for r in self.sym]}


def add_cocycle_eval(s: AdditiveCocycle, a: GrpElt, b: GrpElt) -> MVec:
    return s(a, b)


def add_skew_invariant(s: AdditiveCocycle) -> dict[tuple[int, int], MVec]:
    T = s.T
    m = len(T)
    return {(i, j): T[j][i] - T[i][j] for i in range(m) for j in range(i + 1, m)}


def add_coboundary(t: AdditiveCochain) -> AdditiveCocycle:
    """d(t)(a, b) = t(a) + t(b) - t(a + b) = -(polarized quadratic part)."""
    return AdditiveCocycle([[-x for x in r] for r in t.sym])


def add_cohomologous(s: AdditiveCocycle, s2: AdditiveCocycle):
    """Return ``(t, None)`` with s2 = s + d(t), or ``(None, (i, j))``."""
    k1 = add_skew_invariant(s)
    k2 = add_skew_invariant(s2)
    for key in sorted(k1):
        if k1[key] != k2[key]:
            return None, key
    m = s.rank
    diff = [[s2.T[i][j] - s.T[i][j] for j in range(m)] for i in range(m)]
    t = AdditiveCochain([MVec.zero(s.dim)] * m, [[-x for x in r] for r in diff])
    return t, None
