"""Exhaustive maximum-family search and the three canonical generators.

Both family disciplines are a unary condition on member dimensions plus a
pairwise condition on intersections, so the valid families over an ambient
space are exactly the cliques of a compatibility graph. Maximum cliques are
found by branch and bound with greedy coloring bounds; the search is fully
deterministic, and budget exhaustion is reported as a result state rather
than an error.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional, Union

from .errors import DomainError, StructureError
from .qcombin import qbinom
from .gfspace import (
    FieldContext,
    SubspaceIndex,
    canonicalize,
    enumerate_subspaces,
    field,
    intersect,
    lattice,
    subspace_at,
)
from .families import Family, FractionSet, ModularProfile

__all__ = [
    "ENV_TIME_BUDGET",
    "DEFAULT_MAX_NODES",
    "SearchLimits",
    "CompatGraph",
    "SearchResult",
    "build_graph",
    "max_family",
    "UniformExample",
    "FracUniformExample",
    "BisectionExample",
    "gen_example_uniform",
    "gen_example_frac_uniform",
    "gen_example_bisection",
]

ENV_TIME_BUDGET = "QL_TIME_BUDGET_SECS"

DEFAULT_MAX_NODES = 10 ** 7


@dataclass(frozen=True)
class SearchLimits:
    """Budgets for graph construction and clique search.

    time_budget None defers to the QL_TIME_BUDGET_SECS environment variable,
    and to no limit when that is unset. dim_filter, when given, restricts
    graph vertices to the listed dimensions on top of the unary condition.
    """

    max_nodes: int = DEFAULT_MAX_NODES
    time_budget: Optional[float] = None
    dim_filter: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.max_nodes < 1:
            raise DomainError(f"max_nodes must be >= 1, got {self.max_nodes}")
        if self.time_budget is not None and not self.time_budget > 0:
            raise DomainError(f"time_budget must be positive, got {self.time_budget}")
        if self.dim_filter is not None:
            object.__setattr__(self, "dim_filter", tuple(sorted(set(self.dim_filter))))

    def effective_time_budget(self) -> float:
        if self.time_budget is not None:
            return self.time_budget
        raw = os.environ.get(ENV_TIME_BUDGET)
        if raw is None:
            return math.inf
        try:
            value = float(raw)
        except ValueError:
            raise DomainError(f"{ENV_TIME_BUDGET} must be a number, got {raw!r}")
        if not value > 0:
            raise DomainError(f"{ENV_TIME_BUDGET} must be positive, got {value}")
        return value


@dataclass(frozen=True)
class CompatGraph:
    """Compatibility graph: vertices pass the unary condition, edges the pairwise one."""

    ctx: FieldContext
    n: int
    kind: str
    vertices: tuple[SubspaceIndex, ...]
    adjacency: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.adjacency):
            raise DomainError("adjacency size disagrees with the vertex count")
        for i, mask in enumerate(self.adjacency):
            if (mask >> i) & 1:
                raise DomainError(f"vertex {i} carries a self-loop")
        for i, mask in enumerate(self.adjacency):
            rest = mask
            while rest:
                low = rest & -rest
                j = low.bit_length() - 1
                rest ^= low
                if not (self.adjacency[j] >> i) & 1:
                    raise DomainError(f"edge ({i}, {j}) is not symmetric")

    @property
    def size(self) -> int:
        return len(self.vertices)

    def edge_count(self) -> int:
        return sum(mask.bit_count() for mask in self.adjacency) // 2


@lru_cache(maxsize=8)
def _intersection_dims(ctx: FieldContext, n: int) -> tuple[tuple[int, ...], ...]:
    # symmetric table over the whole lattice, reused across predicate sweeps
    subs = lattice(ctx, n).subspaces
    table: list[list[int]] = [[0] * len(subs) for _ in subs]
    for i in range(len(subs)):
        table[i][i] = subs[i].dim
        for j in range(i + 1, len(subs)):
            d = intersect(subs[i], subs[j]).dim
            table[i][j] = d
            table[j][i] = d
    return tuple(tuple(row) for row in table)


def build_graph(
    ctx: FieldContext,
    n: int,
    predicate: Union[ModularProfile, FractionSet],
    limits: Optional[SearchLimits] = None,
) -> CompatGraph:
    """Compatibility graph of all candidate subspaces under a predicate.

    Modular profiles admit dimensions congruent mod b to a member of K and
    join pairs whose intersection dimension is congruent to a member of L;
    fraction sets admit every positive dimension and join pairs passing the
    exact cross-multiplication test. Ambients over the lattice budget raise
    ResourceLimitError.
    """
    limits = limits or SearchLimits()
    lat = lattice(ctx, n)
    if isinstance(predicate, ModularProfile):
        kind = "modular"
        k_set = {k for k in predicate.K}
        admissible = {d for d in range(n + 1) if d % predicate.b in k_set}
    elif isinstance(predicate, FractionSet):
        kind = "fractional"
        admissible = set(range(1, n + 1))
    else:
        raise DomainError("predicate must be a ModularProfile or a FractionSet")
    if limits.dim_filter is not None:
        admissible &= set(limits.dim_filter)

    positions = [g for g in range(len(lat)) if lat.dims[g] in admissible]
    dims_table = _intersection_dims(ctx, n)
    count = len(positions)
    adjacency = [0] * count
    if isinstance(predicate, ModularProfile):
        l_set = set(predicate.L)

        def joined(gi: int, gj: int) -> bool:
            return dims_table[gi][gj] % predicate.b in l_set

    else:

        def joined(gi: int, gj: int) -> bool:
            d = dims_table[gi][gj]
            di, dj = lat.dims[gi], lat.dims[gj]
            return any(d * b == a * di or d * b == a * dj for a, b in predicate)

    for i in range(count):
        for j in range(i + 1, count):
            if joined(positions[i], positions[j]):
                adjacency[i] |= 1 << j
                adjacency[j] |= 1 << i

    vertices = tuple(
        SubspaceIndex(lat.dims[g], g - lat.offsets[lat.dims[g]] + 1) for g in positions
    )
    return CompatGraph(ctx, n, kind, vertices, tuple(adjacency))


@dataclass(frozen=True)
class SearchResult:
    """Best family found, whether the search space was exhausted, and the node count."""

    family: Family
    size: int
    exhausted: bool
    nodes: int

    def to_json_dict(self) -> dict:
        from .families import family_to_dict

        return {
            "size": self.size,
            "exhausted": self.exhausted,
            "nodes": self.nodes,
            "family": family_to_dict(self.family),
        }


def _greedy_coloring(candidates: int, adjacency: tuple[int, ...]) -> list[tuple[int, int]]:
    """(vertex, color) pairs in ascending color order, colors from 1."""
    out: list[tuple[int, int]] = []
    color = 0
    rest = candidates
    while rest:
        color += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            out.append((v, color))
            avail &= ~adjacency[v]
            avail ^= low
            rest ^= low
    return out


def max_family(graph: CompatGraph, limits: Optional[SearchLimits] = None) -> SearchResult:
    """Exact maximum clique of the compatibility graph, within budgets.

    Branch and bound with greedy coloring upper bounds, visiting vertices in
    canonical index order; repeated runs return the identical family. When
    the node or time budget runs out, the best family found so far is
    returned with exhausted False.
    """
    limits = limits or SearchLimits()
    count = graph.size
    adjacency = graph.adjacency
    budget_nodes = limits.max_nodes
    deadline = None
    window = limits.effective_time_budget()
    if math.isfinite(window):
        deadline = time.monotonic() + window

    best: list[int] = []
    current: list[int] = []
    nodes = 0
    aborted = False

    def expand(candidates: int):
        nonlocal nodes, aborted, best
        if nodes >= budget_nodes or (deadline is not None and time.monotonic() > deadline):
            aborted = True
            return
        nodes += 1
        colored = _greedy_coloring(candidates, adjacency)
        for v, color in reversed(colored):
            if aborted:
                return
            if len(current) + color <= len(best):
                return
            current.append(v)
            rest = candidates & adjacency[v]
            if rest:
                expand(rest)
            elif len(current) > len(best):
                best = current.copy()
            current.pop()
            candidates &= ~(1 << v)

    if count:
        expand((1 << count) - 1)

    chosen = sorted(best)
    members = tuple(
        subspace_at(graph.ctx, graph.n, graph.vertices[v]) for v in chosen
    )
    family = Family(graph.ctx, graph.n, members)
    return SearchResult(family, len(members), not aborted, nodes)


# ---------------------------------------------------------------------------
# generators


class UniformExample(NamedTuple):
    family: Family
    profile: ModularProfile


class FracUniformExample(NamedTuple):
    family: Family
    fractions: FractionSet
    violations: tuple[tuple[int, int], ...]


class BisectionExample(NamedTuple):
    family: Family
    fractions: FractionSet


def gen_example_uniform(k: int, s: int, q: int) -> UniformExample:
    """All k-dimensional subspaces of GF(q)^(k+s), with a matching profile.

    The default modulus b = s + 2 makes K = {k mod b} disjoint from the s
    consecutive intersection residues L = {k-s, ..., k-1 mod b}: k - i with
    1 <= i <= s can only collide with k mod (s + 2) when i is a multiple of
    s + 2, which the range excludes.
    """
    if k < 1 or s < 1:
        raise DomainError(f"need k >= 1 and s >= 1, got k={k}, s={s}")
    ctx = field(q)
    n = k + s
    members = tuple(enumerate_subspaces(ctx, n, k))
    b = s + 2
    K = (k % b,)
    L = tuple(sorted({(k - i) % b for i in range(1, s + 1)}))
    if K[0] in L:
        raise StructureError(
            f"no disjoint profile exists for k={k}, s={s} at modulus {b}"
        )
    return UniformExample(Family(ctx, n, members), ModularProfile(b, K, L))


def gen_example_frac_uniform(s: int, n: int, q: int) -> FracUniformExample:
    """All s-dimensional subspaces of GF(q)^n with fractions {i/s: 0 < i < s}.

    The fractions are reduced and deduplicated. Pairs meeting in dimension 0
    fail every positive fraction, so the construction is a valid fractional
    family exactly when no two members are disjoint; all violating pairs are
    reported.
    """
    if not 1 <= s <= n:
        raise DomainError(f"need 1 <= s <= n, got s={s}, n={n}")
    ctx = field(q)
    members = tuple(enumerate_subspaces(ctx, n, s))
    reduced = sorted({(i // math.gcd(i, s), s // math.gcd(i, s)) for i in range(1, s)})
    fractions = FractionSet(tuple(reduced))
    violations = []
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            d = intersect(members[i], members[j]).dim
            if not any(d * b == a * s for a, b in fractions):
                violations.append((i, j))
    return FracUniformExample(
        Family(ctx, n, members), fractions, tuple(violations)
    )


def gen_example_bisection(n: int, q: int) -> BisectionExample:
    """The planes through a fixed line: span(v1, u) over all lines u of V'.

    V' is the span of the last n - 1 standard basis vectors; any two members
    meet exactly in span(v1), so the family is {1/2}-intersecting and has
    qbinom(n-1, 1, q) members.
    """
    if n < 2:
        raise DomainError(f"ambient dimension must be >= 2, got {n}")
    ctx = field(q)
    e1 = (1,) + (0,) * (n - 1)
    members = []
    for line in enumerate_subspaces(ctx, n - 1, 1):
        padded = (0,) + line.rows[0]
        members.append(canonicalize(ctx, n, [e1, padded]))
    family = Family(ctx, n, tuple(members))
    if len(family) != qbinom(n - 1, 1, q):
        raise StructureError("generator produced an unexpected member count")
    return BisectionExample(family, FractionSet(((1, 2),)))
