"""Finite fields GF(p^e) with q <= 256, and canonical subspaces of GF(q)^n.

A subspace is identified with its unique reduced-row-echelon basis, so equality
and hashing are componentwise. The ambient enumeration order, the per-dimension
index bijection, and containment vectors all build on that canonical form.

Enumeration order within one dimension: pivot patterns are sorted so that the
pattern occupying the rightmost columns comes first (compare the column sets
mirrored right-to-left), and within one pattern the free entries, read row-major,
run through base-q integers in ascending order. Under this order the first
1-dim subspace of GF(2)^3 is span{(0,0,1)} and the last is span{(1,1,1)}.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Optional, Sequence

from .errors import DomainError, ResourceLimitError
from .qcombin import is_prime, prime_power, qbinom

ENV_LATTICE_BUDGET = "QL_LATTICE_BUDGET"
DEFAULT_LATTICE_BUDGET = 10 ** 6

MAX_Q = 256


def lattice_budget() -> int:
    """Enumeration budget: max subspaces materialized per ambient (env-overridable)."""
    raw = os.environ.get(ENV_LATTICE_BUDGET)
    if raw is None:
        return DEFAULT_LATTICE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{ENV_LATTICE_BUDGET} must be an integer, got {raw!r}")
    if value < 1:
        raise DomainError(f"{ENV_LATTICE_BUDGET} must be >= 1, got {value}")
    return value


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficients low-to-high


def _poly_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    # m is monic
    a = a[:]
    dm = len(m) - 1
    while len(a) >= len(m):
        lead = a[-1]
        if lead:
            off = len(a) - 1 - dm
            for i, c in enumerate(m):
                a[off + i] = (a[off + i] - lead * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by all monic factors of degree 1..e//2."""
    e = len(coeffs) - 1
    for d in range(1, e // 2 + 1):
        for lower in itertools.product(range(p), repeat=d):
            g = list(lower) + [1]
            if not _poly_mod(list(coeffs), g, p):
                return False
    return True


def _default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree e with the smallest integer code (digits base p)."""
    for code in range(p ** e, 2 * p ** e):
        coeffs, c = [], code
        for _ in range(e + 1):
            coeffs.append(c % p)
            c //= p
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ArithmeticError(f"no irreducible of degree {e} over GF({p})")  # unreachable


class FieldContext:
    """Arithmetic tables for GF(p^e), q = p^e <= 256.

    Elements are integer codes in [0, q): the base-p digits of a code are the
    coefficients (constant term first) of the residue polynomial; for e = 1 the
    code is the residue mod p. The default modulus is the monic irreducible of
    degree e with the smallest integer code, so a given (p, e) always names the
    same field representation unless a modulus is passed explicitly.
    """

    __slots__ = ("p", "e", "q", "modulus", "_add", "_mul", "_neg", "_inv")

    def __init__(self, p: int, e: int = 1, modulus: Optional[Sequence[int]] = None):
        if not is_prime(p):
            raise DomainError(f"field characteristic must be prime, got {p}")
        if e < 1:
            raise DomainError(f"field degree must be >= 1, got {e}")
        q = p ** e
        if q > MAX_Q:
            raise DomainError(f"q = {q} exceeds the supported ceiling {MAX_Q}")
        self.p, self.e, self.q = p, e, q
        if e == 1:
            if modulus is not None:
                raise DomainError("prime fields take no modulus")
            self.modulus = None
        else:
            mod = tuple(modulus) if modulus is not None else _default_modulus(p, e)
            if len(mod) != e + 1 or mod[-1] != 1 or any(not 0 <= c < p for c in mod):
                raise DomainError(f"modulus must be monic of degree {e} with coefficients in [0,{p})")
            if not _is_irreducible(mod, p):
                raise DomainError(f"modulus {list(mod)} is reducible over GF({p})")
            self.modulus = mod
        self._build_tables()

    def _decode(self, code: int) -> list[int]:
        digits = []
        for _ in range(self.e):
            digits.append(code % self.p)
            code //= self.p
        return digits

    def _encode(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(list(coeffs) + [0] * (self.e - len(coeffs))):
            code = code * self.p + c
        return code

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            self._add = [[(a + b) % p for b in range(q)] for a in range(q)]
            self._mul = [[a * b % p for b in range(q)] for a in range(q)]
            self._neg = [(-a) % p for a in range(q)]
        else:
            polys = [self._decode(c) for c in range(q)]
            self._add = [
                [self._encode([(x + y) % p for x, y in zip(polys[a], polys[b])]) for b in range(q)]
                for a in range(q)
            ]
            self._mul = [
                [
                    self._encode(_poly_mod(_poly_mul(polys[a], polys[b], p), self.modulus, p))
                    for b in range(q)
                ]
                for a in range(q)
            ]
            self._neg = [self._encode([(-x) % p for x in polys[a]]) for a in range(q)]
        inv: list[Optional[int]] = [None] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    inv[a] = b
                    break
        self._inv = inv

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("0 has no inverse")
        return self._inv[a]

    def elements(self) -> range:
        return range(self.q)

    def __eq__(self, other):
        return (
            isinstance(other, FieldContext)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.q})"
        return f"GF({self.q}; modulus={list(self.modulus)})"

    def to_dict(self) -> dict:
        out = {"p": self.p, "e": self.e}
        if self.e > 1:
            out["modulus"] = list(self.modulus)
        return out


@lru_cache(maxsize=None)
def _field_cached(p: int, e: int, modulus: Optional[tuple]) -> FieldContext:
    return FieldContext(p, e, modulus)


def field(q: int, modulus: Optional[Sequence[int]] = None) -> FieldContext:
    """The field with q elements (q a prime power <= 256), cached per modulus."""
    pe = prime_power(q)
    if pe is None:
        raise DomainError(f"q = {q} is not a prime power")
    p, e = pe
    return _field_cached(p, e, tuple(modulus) if modulus is not None else None)


def field_from_dict(data: dict) -> FieldContext:
    """Field from its JSON form {"p":…, "e":…, "modulus":… (optional)}."""
    try:
        p, e = int(data["p"]), int(data["e"])
    except (KeyError, TypeError, ValueError):
        raise DomainError(f"malformed field description: {data!r}")
    modulus = data.get("modulus")
    return _field_cached(p, e, tuple(int(c) for c in modulus) if modulus is not None else None)


# ---------------------------------------------------------------------------
# canonical subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(q)^n, held as its reduced-row-echelon basis.

    rows is a tuple of row tuples of element codes; the zero subspace has no
    rows. Construction validates canonical form, so equal subspaces are equal
    values. Use canonicalize() to build one from arbitrary spanning rows.
    """

    ctx: FieldContext
    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n, q = self.n, self.ctx.q
        if n < 0:
            raise DomainError(f"ambient dimension must be >= 0, got {n}")
        if len(self.rows) > n:
            raise DomainError("more rows than the ambient dimension")
        pivots = []
        for row in self.rows:
            if len(row) != n:
                raise DomainError("row length does not match the ambient dimension")
            if any(not 0 <= x < q for x in row):
                raise DomainError("entry out of field range")
            piv = next((i for i, x in enumerate(row) if x), None)
            if piv is None:
                raise DomainError("zero row in a canonical basis")
            if row[piv] != 1:
                raise DomainError("pivot entry must be 1")
            if pivots and piv <= pivots[-1]:
                raise DomainError("pivot columns must strictly increase")
            pivots.append(piv)
        for i, piv in enumerate(pivots):
            for j, row in enumerate(self.rows):
                if j != i and row[piv] != 0:
                    raise DomainError("nonzero entry in a pivot column off the pivot row")

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x) for row in self.rows)

    def __repr__(self):
        return f"Subspace(n={self.n}, dim={self.dim}, rows={self.rows})"


def _rref(ctx: FieldContext, n: int, rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    mat = [list(r) for r in rows]
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = ctx.inv(mat[rank][col])
        if inv != 1:
            mat[rank] = [ctx.mul(inv, x) for x in mat[rank]]
        top = mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(mat[i], top)]
        rank += 1
        if rank == len(mat):
            break
    return [tuple(r) for r in mat[:rank]]


def canonicalize(ctx: FieldContext, n: int, rows: Sequence[Sequence[int]]) -> Subspace:
    """Subspace spanned by arbitrary rows (need not be independent or reduced)."""
    for row in rows:
        if len(row) != n:
            raise DomainError("row length does not match the ambient dimension")
        if any(not 0 <= x < ctx.q for x in row):
            raise DomainError("entry out of field range")
    return Subspace(ctx, n, tuple(_rref(ctx, n, rows)))


def zero_subspace(ctx: FieldContext, n: int) -> Subspace:
    return Subspace(ctx, n, ())


def full_space(ctx: FieldContext, n: int) -> Subspace:
    rows = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
    return Subspace(ctx, n, rows)


def _check_same_ambient(a: Subspace, b: Subspace):
    if a.ctx != b.ctx or a.n != b.n:
        raise DomainError("subspaces live in different ambients")


def contains(outer: Subspace, inner: Subspace) -> bool:
    """True iff inner is a subspace of outer (reduce inner's rows by outer's pivots)."""
    _check_same_ambient(outer, inner)
    ctx = outer.ctx
    pivots = outer.pivots
    for row in inner.rows:
        work = list(row)
        for prow, piv in zip(outer.rows, pivots):
            f = work[piv]
            if f:
                work = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(work, prow)]
        if any(work):
            return False
    return True


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via block elimination on [A|A] stacked over [B|0]."""
    _check_same_ambient(a, b)
    ctx, n = a.ctx, a.n
    block = [list(r) + list(r) for r in a.rows] + [list(r) + [0] * n for r in b.rows]
    reduced = _rref(ctx, 2 * n, block)
    inter_rows = [row[n:] for row in reduced if not any(row[:n])]
    return canonicalize(ctx, n, [r for r in inter_rows if any(r)])


def union_space(a: Subspace, b: Subspace) -> Subspace:
    """Smallest subspace containing both (the lattice join: span of the union)."""
    _check_same_ambient(a, b)
    return canonicalize(a.ctx, a.n, list(a.rows) + list(b.rows))


# ---------------------------------------------------------------------------
# enumeration and indexing


class SubspaceIndex(NamedTuple):
    """Position of a subspace in the canonical order: (dimension, 1-based rank)."""

    dim: int
    pos: int


def _pattern_sort_key(cols: tuple[int, ...], n: int) -> tuple[int, ...]:
    # mirror right-to-left: patterns on the rightmost columns sort first
    return tuple(sorted(n - 1 - c for c in cols))


@lru_cache(maxsize=None)
def _patterns(n: int, dim: int) -> tuple[tuple[int, ...], ...]:
    combos = itertools.combinations(range(n), dim)
    return tuple(sorted(combos, key=lambda cols: _pattern_sort_key(cols, n)))


def _free_positions(cols: tuple[int, ...], n: int) -> list[tuple[int, int]]:
    colset = set(cols)
    return [(i, c) for i, piv in enumerate(cols) for c in range(piv + 1, n) if c not in colset]


def _build_from_pattern(
    ctx: FieldContext, n: int, cols: tuple[int, ...], free: list[tuple[int, int]], digits: Sequence[int]
) -> Subspace:
    rows = [[0] * n for _ in cols]
    for i, piv in enumerate(cols):
        rows[i][piv] = 1
    for (i, c), v in zip(free, digits):
        rows[i][c] = v
    return Subspace(ctx, n, tuple(tuple(r) for r in rows))


def enumerate_subspaces(ctx: FieldContext, n: int, dim: int) -> Iterator[Subspace]:
    """All dim-dimensional subspaces of GF(q)^n in canonical order.

    Streams qbinom(n, dim, q) subspaces; raises ResourceLimitError up front when
    that count exceeds the lattice budget.
    """
    if not 0 <= dim <= n:
        raise DomainError(f"dimension {dim} outside [0, {n}]")
    count = qbinom(n, dim, ctx.q)
    budget = lattice_budget()
    if count > budget:
        raise ResourceLimitError(
            f"{count} subspaces of dimension {dim} exceed the lattice budget {budget}",
            partial={"count": count},
        )

    def gen():
        if dim == 0:
            yield zero_subspace(ctx, n)
            return
        for cols in _patterns(n, dim):
            free = _free_positions(cols, n)
            for digits in itertools.product(range(ctx.q), repeat=len(free)):
                yield _build_from_pattern(ctx, n, cols, free, digits)

    return gen()


def index_of(space: Subspace) -> SubspaceIndex:
    """Canonical-order index of a subspace within its dimension (1-based)."""
    d, n, q = space.dim, space.n, space.ctx.q
    if d == 0:
        return SubspaceIndex(0, 1)
    mycols = space.pivots
    offset = 0
    for cols in _patterns(n, d):
        free = _free_positions(cols, n)
        if cols == mycols:
            value = 0
            for i, c in free:
                value = value * q + space.rows[i][c]
            return SubspaceIndex(d, offset + value + 1)
        offset += q ** len(free)
    raise ArithmeticError("pivot pattern not found")  # unreachable for valid input


def subspace_at(ctx: FieldContext, n: int, index: SubspaceIndex) -> Subspace:
    """Inverse of index_of: the subspace at (dim, pos) in the canonical order."""
    d, pos = index
    if not 0 <= d <= n:
        raise DomainError(f"dimension {d} outside [0, {n}]")
    total = qbinom(n, d, ctx.q)
    if not 1 <= pos <= total:
        raise DomainError(f"position {pos} outside [1, {total}] for dimension {d}")
    if d == 0:
        return zero_subspace(ctx, n)
    remaining = pos - 1
    for cols in _patterns(n, d):
        free = _free_positions(cols, n)
        block = ctx.q ** len(free)
        if remaining >= block:
            remaining -= block
            continue
        digits = []
        r = remaining
        for _ in free:
            digits.append(0)
        for slot in range(len(free) - 1, -1, -1):
            digits[slot] = r % ctx.q
            r //= ctx.q
        return _build_from_pattern(ctx, n, cols, free, digits)
    raise ArithmeticError("position not reached")  # unreachable


def lattice_size(n: int, q: int) -> int:
    """Total number of subspaces of GF(q)^n (all dimensions)."""
    return sum(qbinom(n, t, q) for t in range(n + 1))


class Lattice:
    """All subspaces of one ambient in canonical global order, with caches.

    Global order is dimension-major: all of dimension 0, then 1, and so on,
    each dimension in enumeration order. Containment masks are int bitsets:
    bit u of contains_mask[w] says subspace u lies inside subspace w.
    """

    def __init__(self, ctx: FieldContext, n: int):
        size = lattice_size(n, ctx.q)
        budget = lattice_budget()
        if size > budget:
            raise ResourceLimitError(
                f"lattice of GF({ctx.q})^{n} has {size} subspaces, over budget {budget}",
                partial={"size": size},
            )
        self.ctx, self.n = ctx, n
        subs: list[Subspace] = []
        self.offsets: list[int] = []
        for d in range(n + 1):
            self.offsets.append(len(subs))
            subs.extend(enumerate_subspaces(ctx, n, d))
        self.subspaces: tuple[Subspace, ...] = tuple(subs)
        self.dims: tuple[int, ...] = tuple(s.dim for s in subs)
        self.position: dict[Subspace, int] = {s: i for i, s in enumerate(subs)}
        self._contains_mask: Optional[list[int]] = None
        self._joins: dict[tuple[int, int], int] = {}

    def __len__(self):
        return len(self.subspaces)

    def global_index(self, space: Subspace) -> int:
        try:
            return self.position[space]
        except KeyError:
            raise DomainError("subspace does not belong to this lattice")

    @property
    def contains_mask(self) -> list[int]:
        if self._contains_mask is None:
            masks = []
            for w in self.subspaces:
                mask = 0
                for u_pos, u in enumerate(self.subspaces):
                    if u.dim <= w.dim and contains(w, u):
                        mask |= 1 << u_pos
                masks.append(mask)
            self._contains_mask = masks
        return self._contains_mask

    def join(self, i: int, j: int) -> int:
        """Global index of the lattice join of subspaces i and j."""
        if i > j:
            i, j = j, i
        key = (i, j)
        got = self._joins.get(key)
        if got is None:
            got = self.global_index(union_space(self.subspaces[i], self.subspaces[j]))
            self._joins[key] = got
        return got


@lru_cache(maxsize=None)
def lattice(ctx: FieldContext, n: int) -> Lattice:
    return Lattice(ctx, n)


# ---------------------------------------------------------------------------
# containment vectors


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class ContainmentVector:
    """0/1 incidence of one subspace against all subspaces of dimension <= s_cap.

    bits runs over dimensions 0..s_cap in canonical order; bit positions within
    dimension x start at offset(x) = sum of qbinom(n, t, q) for t < x. The bit
    for (x, y) is 1 exactly when the y-th x-dimensional subspace lies inside the
    carrier. Dimension blocks above n are empty.
    """

    ctx: FieldContext
    n: int
    s_cap: int
    bits: tuple[int, ...]

    def offset(self, x: int) -> int:
        return sum(qbinom(self.n, t, self.ctx.q) for t in range(x))

    def block(self, x: int) -> tuple[int, ...]:
        if not 0 <= x <= self.s_cap:
            raise DomainError(f"dimension {x} outside [0, {self.s_cap}]")
        start = self.offset(x)
        return self.bits[start : start + qbinom(self.n, x, self.ctx.q)]

    def get(self, x: int, pos: int) -> int:
        if not 0 <= x <= self.s_cap:
            raise DomainError(f"dimension {x} outside [0, {self.s_cap}]")
        width = qbinom(self.n, x, self.ctx.q)
        if not 1 <= pos <= width:
            raise DomainError(f"position {pos} outside [1, {width}] for dimension {x}")
        return self.bits[self.offset(x) + pos - 1]


def containment_vector(space: Subspace, s_cap: int) -> ContainmentVector:
    """Containment vector of a subspace against all subspaces of dim <= s_cap."""
    if s_cap < 0:
        raise DomainError(f"s_cap must be >= 0, got {s_cap}")
    ctx, n = space.ctx, space.n
    top = min(s_cap, n)
    total = sum(qbinom(n, t, ctx.q) for t in range(top + 1))
    budget = lattice_budget()
    if total > budget:
        raise ResourceLimitError(
            f"{total} subspaces of dimension <= {top} exceed the lattice budget {budget}",
            partial={"count": total},
        )
    bits: list[int] = []
    for t in range(top + 1):
        if t > space.dim:
            bits.extend([0] * qbinom(n, t, ctx.q))
            continue
        for cand in enumerate_subspaces(ctx, n, t):
            bits.append(1 if contains(space, cand) else 0)
    return ContainmentVector(ctx, n, s_cap, tuple(bits))
