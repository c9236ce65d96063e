"""Linear-independence certificates over F_p for subspace-family functionals.

The machinery works with three function families on containment vectors: the
raw incidence functionals f (one bit of the vector), the grid functionals
g_xy (an incidence bit times a product of line-count factors over K), and the
member functionals g_i (a product over L of shared-line counts). Evaluating a
chosen row set on the containment vectors of every subspace of the ambient
space and computing the rank mod p yields a sound one-sided certificate:
full row rank proves linear independence, anything less is inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DomainError
from .qcombin import is_prime, multiplicative_order, qbinom, require_zsigmondy_prime
from .gfspace import (
    ContainmentVector,
    FieldContext,
    Subspace,
    SubspaceIndex,
    containment_vector,
    index_of,
    lattice,
    subspace_at,
    union_space,
)
from .families import Family, ModularProfile, check_modular

__all__ = [
    "VARIANTS",
    "CertificateContext",
    "CertificateMatrix",
    "SpanReport",
    "certificate_context",
    "eval_f",
    "eval_g_xy",
    "eval_g_i",
    "product_reduce",
    "independence_certificate",
    "span_check",
]

VARIANTS = ("lemma41", "swallow1", "lemma52", "swallow2")


# ---------------------------------------------------------------------------
# context


@dataclass(frozen=True)
class CertificateContext:
    """Frozen evaluation setting: ambient, profile, prime, and point set.

    The evaluation points are the containment vectors (capped at dimension s)
    of every subspace of the ambient space, in canonical lattice order; the
    matching SubspaceIndex labels are kept alongside for export.
    """

    ctx: FieldContext
    n: int
    profile: ModularProfile
    p: int
    S: int
    points: tuple[ContainmentVector, ...]
    point_labels: tuple[SubspaceIndex, ...]

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def s(self) -> int:
        return self.profile.s

    @property
    def r(self) -> int:
        return self.profile.r


def certificate_context(
    ctx: FieldContext, n: int, profile: ModularProfile, p: Optional[int] = None
) -> CertificateContext:
    """Build a CertificateContext, deriving p from (q, b) unless given.

    A caller-supplied p must be a prime at which q has multiplicative order
    exactly b; the derived default comes from the primitive-prime-divisor
    search and inherits its unsupported-parameter errors.
    """
    if n < 0:
        raise DomainError(f"ambient dimension must be >= 0, got {n}")
    if p is None:
        p = require_zsigmondy_prime(ctx.q, profile.b)
    else:
        if not is_prime(p):
            raise DomainError(f"p = {p} is not prime")
        order = multiplicative_order(ctx.q, p)
        if order != profile.b:
            raise DomainError(
                f"q = {ctx.q} has order {order} mod {p}, need exactly {profile.b}"
            )
    s = profile.s
    total = sum(qbinom(n, t, ctx.q) for t in range(s + 1))
    lat = lattice(ctx, n)
    top = min(s, n)
    end = lat.offsets[top + 1] if top < n else len(lat)
    masks = lat.contains_mask
    points = tuple(
        ContainmentVector(ctx, n, s, tuple((masks[w] >> u) & 1 for u in range(end)))
        for w in range(len(lat))
    )
    labels = tuple(
        SubspaceIndex(lat.dims[w], w - lat.offsets[lat.dims[w]] + 1)
        for w in range(len(lat))
    )
    return CertificateContext(ctx, n, profile, p, total, points, labels)


# ---------------------------------------------------------------------------
# function evaluation


def eval_f(x: int, y: int, v: ContainmentVector) -> int:
    """The (x, y) incidence bit of v, as a residue."""
    return v.get(x, y)


def _line_counts(values: Iterable[int], q: int, p: int) -> list[int]:
    return [qbinom(v, 1, q) % p for v in values]


def eval_g_xy(cctx: CertificateContext, x: int, y: int, v: ContainmentVector) -> int:
    """f(x, y, v) times the product over K of (line count of v minus [k_t 1]).

    Only x between 0 and s - r is admitted. An empty K gives the empty
    product 1, reducing g_xy to the bare incidence bit.
    """
    if not 0 <= x <= cctx.s - cctx.r:
        raise DomainError(f"x = {x} outside [0, {cctx.s - cctx.r}]")
    bit = eval_f(x, y, v)
    if bit == 0 or not cctx.profile.K:
        return bit
    p = cctx.p
    d1 = sum(v.block(1)) % p
    out = 1
    for kt_count in _line_counts(cctx.profile.K, cctx.q, p):
        out = out * (d1 - kt_count) % p
    return out


def eval_g_i(cctx: CertificateContext, i: int, family: Family, v: ContainmentVector) -> int:
    """Product over L of (shared line count of member i and v minus [mu 1]).

    The shared line count is the dot product of the dimension-1 blocks of the
    two containment vectors. An empty L gives the empty product 1.
    """
    if not 0 <= i < len(family):
        raise DomainError(f"member index {i} outside [0, {len(family)})")
    if not cctx.profile.L:
        return 1
    if v.s_cap < 1:
        raise DomainError("evaluation point must carry a dimension-1 block")
    member_bits = containment_vector(family[i], 1).block(1)
    p = cctx.p
    dot = sum(a * b for a, b in zip(member_bits, v.block(1))) % p
    out = 1
    for mu_count in _line_counts(cctx.profile.L, cctx.q, p):
        out = out * (dot - mu_count) % p
    return out


def product_reduce(x: int, y: int, z: int, ctx: FieldContext, n: int) -> SubspaceIndex:
    """Index (x', w) of the join of subspace (x, y) with line (1, z).

    Pointwise, f(x, y)·f(1, z) equals f(x', w) on every containment vector;
    x' is x when the line lies inside (x, y) and x + 1 otherwise.
    """
    base = subspace_at(ctx, n, SubspaceIndex(x, y))
    line = subspace_at(ctx, n, SubspaceIndex(1, z))
    return index_of(union_space(base, line))


# ---------------------------------------------------------------------------
# rank and span helpers mod p


def _echelon_mod_p(rows: Iterable[Sequence[int]], p: int) -> list[tuple[int, list[int]]]:
    """Reduced echelon basis [(pivot_col, unit_row), ...] of the row span."""
    basis: list[tuple[int, list[int]]] = []
    for row in rows:
        r = [v % p for v in row]
        for pc, b in basis:
            f = r[pc]
            if f:
                r = [(a - f * bb) % p for a, bb in zip(r, b)]
        pivot = next((c for c, v in enumerate(r) if v), None)
        if pivot is None:
            continue
        inv = pow(r[pivot], -1, p)
        basis.append((pivot, [v * inv % p for v in r]))
    return basis


def _reduces_to_zero(basis: list[tuple[int, list[int]]], row: Sequence[int], p: int) -> bool:
    r = [v % p for v in row]
    for pc, b in basis:
        f = r[pc]
        if f:
            r = [(a - f * bb) % p for a, bb in zip(r, b)]
    return not any(r)


def rank_mod_p(rows: Iterable[Sequence[int]], p: int) -> int:
    """Rank of an integer matrix over F_p."""
    return len(_echelon_mod_p(rows, p))


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class CertificateMatrix:
    """Evaluation matrix with its rank and one-sided verdict.

    Row labels are ("g_i", i) or ("g_xy", x, y); columns are labeled by the
    SubspaceIndex of each evaluation point. The verdict is "independent"
    exactly when the rank equals the row count, and "inconclusive" otherwise:
    rank deficiency on a finite point set never proves dependence.
    """

    rows: tuple[tuple, ...]
    points: tuple[SubspaceIndex, ...]
    entries: tuple[tuple[int, ...], ...]
    rank: int
    verdict: str
    p: int

    def __post_init__(self):
        if self.rank > min(len(self.rows), len(self.points)):
            raise DomainError("rank exceeds matrix shape")
        expected = "independent" if self.rank == len(self.rows) else "inconclusive"
        if self.verdict != expected:
            raise DomainError(f"verdict {self.verdict!r} inconsistent with rank")

    @classmethod
    def from_entries(
        cls,
        rows: Sequence[tuple],
        points: Sequence[SubspaceIndex],
        entries: Sequence[Sequence[int]],
        p: int,
    ) -> "CertificateMatrix":
        normalized = tuple(tuple(v % p for v in row) for row in entries)
        rank = rank_mod_p(normalized, p)
        verdict = "independent" if rank == len(normalized) else "inconclusive"
        return cls(tuple(rows), tuple(points), normalized, rank, verdict, p)

    def to_json_dict(self) -> dict:
        return {
            "rows": [list(label) for label in self.rows],
            "points": [[d, e] for d, e in self.points],
            "rank": self.rank,
            "verdict": self.verdict,
            "p": self.p,
        }


def _grid_xs(cctx: CertificateContext, filtered: bool) -> list[int]:
    span = cctx.s - cctx.r
    xs = list(range(span + 1)) if span >= 0 else []
    if filtered:
        b = cctx.profile.b
        xs = [x for x in xs if all((x - kt) % b != 0 for kt in cctx.profile.K)]
    return xs


def independence_certificate(
    cctx: CertificateContext, family: Family, variant: str
) -> CertificateMatrix:
    """Evaluation matrix of the selected row set with rank-based verdict.

    Variants select rows: "lemma41" takes every grid functional g_xy with
    0 <= x <= s - r; "lemma52" keeps only those x not congruent mod b to any
    member of K; "swallow1" and "swallow2" append one g_i per family member
    ahead of the respective grid set. Rows are ordered members first, then
    grid indices, both in canonical order.
    """
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    if family.ctx != cctx.ctx or family.n != cctx.n:
        raise DomainError("family ambient does not match the certificate context")
    verdict = check_modular(family, cctx.profile)
    if not verdict:
        raise DomainError(f"family violates the profile: {verdict.detail}")

    p, q = cctx.p, cctx.q
    labels: list[tuple] = []
    rows: list[list[int]] = []

    blocks1 = None
    if cctx.s >= 1:
        blocks1 = [v.block(1) for v in cctx.points]

    if variant in ("swallow1", "swallow2"):
        mu_counts = _line_counts(cctx.profile.L, q, p)
        for i, member in enumerate(family):
            member_bits = containment_vector(member, 1).block(1)
            row = []
            for w in range(len(cctx.points)):
                if cctx.profile.L:
                    dot = sum(a * b for a, b in zip(member_bits, blocks1[w])) % p
                    val = 1
                    for mu in mu_counts:
                        val = val * (dot - mu) % p
                else:
                    val = 1
                row.append(val)
            labels.append(("g_i", i))
            rows.append(row)

    xs = _grid_xs(cctx, filtered=variant in ("lemma52", "swallow2"))
    if xs:
        if cctx.profile.K:
            kt_counts = _line_counts(cctx.profile.K, q, p)
            factors = []
            for w in range(len(cctx.points)):
                d1 = sum(blocks1[w]) % p if blocks1 is not None else 0
                f = 1
                for kt in kt_counts:
                    f = f * (d1 - kt) % p
                factors.append(f)
        else:
            factors = [1] * len(cctx.points)
        for x in xs:
            width = qbinom(cctx.n, x, q)
            for y in range(1, width + 1):
                labels.append(("g_xy", x, y))
                rows.append(
                    [cctx.points[w].get(x, y) * factors[w] % p for w in range(len(cctx.points))]
                )

    return CertificateMatrix.from_entries(labels, cctx.point_labels, rows, p)


@dataclass(frozen=True)
class SpanReport:
    """Per-sample answer to "does this g lie in the span of the f rows"."""

    samples: tuple[tuple, ...]
    solvable: tuple[bool, ...]

    @property
    def all_solvable(self) -> bool:
        return all(self.solvable)

    def to_json_dict(self) -> dict:
        return {
            "samples": [list(t) for t in self.samples],
            "solvable": list(self.solvable),
            "all_solvable": self.all_solvable,
        }


def span_check(cctx: CertificateContext, family: Family, sample: Iterable[tuple]) -> SpanReport:
    """Check that sampled g functionals lie in the span of all f rows.

    The f basis runs over every (x, y) with 0 <= x <= s; each sampled
    ("g_xy", x, y) or ("g_i", i) is reduced against its echelon form, and
    counts as solvable when the residual vanishes.
    """
    p, q = cctx.p, cctx.q
    f_rows = []
    for x in range(cctx.s + 1):
        width = qbinom(cctx.n, x, q)
        for y in range(1, width + 1):
            f_rows.append([v.get(x, y) for v in cctx.points])
    basis = _echelon_mod_p(f_rows, p)

    ids = []
    flags = []
    for item in sample:
        tag = tuple(item)
        if tag[0] == "g_xy" and len(tag) == 3:
            row = [eval_g_xy(cctx, tag[1], tag[2], v) for v in cctx.points]
        elif tag[0] == "g_i" and len(tag) == 2:
            row = [eval_g_i(cctx, tag[1], family, v) for v in cctx.points]
        else:
            raise DomainError(f"sample id {item!r} must be ('g_xy', x, y) or ('g_i', i)")
        ids.append(tag)
        flags.append(_reduces_to_zero(basis, row, p))
    return SpanReport(tuple(ids), tuple(flags))
