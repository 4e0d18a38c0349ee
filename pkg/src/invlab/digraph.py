"""Oriented graphs with bit-packed adjacency, inversions, and GF(2) bridges.

A digraph here is loop-free and 2-cycle-free on at most 64 vertices, with
one out-neighbour bitmask per vertex.  Inverting a vertex set reverses
every arc with both ends inside it; a decycling family is a sequence of
sets whose inversions leave the graph acyclic, and the inversion number
is the least length of such a family.

Families correspond to per-vertex characteristic vectors: bit i of a
vertex's vector says whether the vertex lies in set i, and an arc ends up
reversed exactly when its endpoints' vectors have odd overlap.  Both
views are implemented and must agree; tests enforce it.

All values are immutable and every function is pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import ResourceLimitError
from .f2 import BitVec, SymMatrix, rank_of_rows

MAX_VERTICES = 64

# Labelled enumeration is 2^(n(n-1)/2) tournaments; 7 is the last sane order.
MAX_ENUM_VERTICES = 7

# A subset of vertices is a plain bitmask.
VertexSet = int


@dataclass(frozen=True)
class Digraph:
    """Loop-free, 2-cycle-free directed graph; ``out_rows[v]`` masks v's heads."""

    n: int
    out_rows: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in 0..{MAX_VERTICES}")
        if len(self.out_rows) != self.n:
            raise ValueError("adjacency row count does not match vertex count")
        for v, row in enumerate(self.out_rows):
            if row < 0 or row >> self.n:
                raise ValueError(f"row {v} points outside the vertex range")
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
        for u in range(self.n):
            row = self.out_rows[u]
            while row:
                v = (row & -row).bit_length() - 1
                if self.out_rows[v] >> u & 1:
                    raise ValueError(f"2-cycle between {u} and {v}")
                row &= row - 1

    @classmethod
    def from_arcs(cls, n: int, arcs: Sequence[tuple[int, int]]) -> "Digraph":
        rows = [0] * n
        for u, v in arcs:
            rows[u] |= 1 << v
        return cls(n, tuple(rows))

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out_rows[u] >> v & 1)

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            row = self.out_rows[u]
            while row:
                v = (row & -row).bit_length() - 1
                yield (u, v)
                row &= row - 1

    def arc_count(self) -> int:
        return sum(r.bit_count() for r in self.out_rows)

    def is_tournament(self) -> bool:
        return self.arc_count() == self.n * (self.n - 1) // 2

    def in_rows(self) -> tuple[int, ...]:
        return _columns(self.out_rows, self.n)

    def induced(self, mask: VertexSet) -> "Digraph":
        """Subgraph on the masked vertices, renumbered in ascending order."""
        verts = [v for v in range(self.n) if mask >> v & 1]
        index = {v: i for i, v in enumerate(verts)}
        rows = []
        for v in verts:
            row = self.out_rows[v] & mask
            new = 0
            while row:
                w = (row & -row).bit_length() - 1
                new |= 1 << index[w]
                row &= row - 1
            rows.append(new)
        return Digraph(len(verts), tuple(rows))


def _columns(rows: Sequence[int], n: int) -> tuple[int, ...]:
    cols = [0] * n
    for u in range(n):
        row = rows[u]
        while row:
            v = (row & -row).bit_length() - 1
            cols[v] |= 1 << u
            row &= row - 1
    return tuple(cols)


@dataclass(frozen=True)
class InversionFamily:
    """Ordered sequence of vertex subsets of an n-vertex host graph."""

    n: int
    sets: tuple[VertexSet, ...]

    def __post_init__(self):
        full = (1 << self.n) - 1
        for i, s in enumerate(self.sets):
            if s < 0 or s & ~full:
                raise ValueError(f"set {i} contains vertices outside 0..{self.n - 1}")

    @property
    def k(self) -> int:
        return len(self.sets)

    @classmethod
    def from_vertex_lists(
        cls, n: int, lists: Sequence[Sequence[int]]
    ) -> "InversionFamily":
        return cls(n, tuple(sum(1 << v for v in set(vs)) for vs in lists))

    def vertex_lists(self) -> list[list[int]]:
        return [[v for v in range(self.n) if s >> v & 1] for s in self.sets]


@dataclass(frozen=True)
class VectorAssignment:
    """One characteristic vector per vertex, all of the same width."""

    width: int
    vecs: tuple[BitVec, ...]

    def __post_init__(self):
        for v in self.vecs:
            if v.width != self.width:
                raise ValueError("assignment vectors must share the declared width")

    @property
    def n(self) -> int:
        return len(self.vecs)


def invert(D: Digraph, X: VertexSet) -> Digraph:
    """Reverse every arc with both endpoints in X."""
    if X < 0 or X >> D.n:
        raise ValueError("vertex set outside the graph")
    cols = _columns(D.out_rows, D.n)
    rows = []
    for u in range(D.n):
        row = D.out_rows[u]
        if X >> u & 1:
            row = (row & ~X) | (cols[u] & X)
        rows.append(row)
    return Digraph(D.n, tuple(rows))


def apply_family(D: Digraph, F: InversionFamily) -> Digraph:
    """Invert the family's sets one after another (order never matters)."""
    if F.n != D.n:
        raise ValueError("family host size does not match graph")
    out = D
    for s in F.sets:
        out = invert(out, s)
    return out


def is_acyclic(D: Digraph) -> list[int] | None:
    """Topological order witnessing acyclicity, or None if a cycle exists.

    Ties are broken toward the smallest vertex index, so witnesses are
    deterministic.
    """
    in_rows = _columns(D.out_rows, D.n)
    remaining = (1 << D.n) - 1
    order = []
    while remaining:
        pick = -1
        m = remaining
        while m:
            v = (m & -m).bit_length() - 1
            if in_rows[v] & remaining == 0:
                pick = v
                break
            m &= m - 1
        if pick < 0:
            return None
        order.append(pick)
        remaining ^= 1 << pick
    return order


def residual_cycle(D: Digraph) -> list[int] | None:
    """Some directed cycle of D as a vertex list, or None if acyclic."""
    in_rows = _columns(D.out_rows, D.n)
    remaining = (1 << D.n) - 1
    changed = True
    while changed and remaining:
        changed = False
        m = remaining
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            if in_rows[v] & remaining == 0 or D.out_rows[v] & remaining == 0:
                remaining ^= 1 << v
                changed = True
    if not remaining:
        return None
    start = (remaining & -remaining).bit_length() - 1
    seen: dict[int, int] = {}
    path = []
    v = start
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        nxt = D.out_rows[v] & remaining
        v = (nxt & -nxt).bit_length() - 1
    return path[seen[v] :]


def reverse(D: Digraph) -> Digraph:
    """Reverse every arc."""
    return Digraph(D.n, _columns(D.out_rows, D.n))


def family_to_assignment(F: InversionFamily) -> VectorAssignment:
    """Bit i of vertex v's vector says whether v lies in set i."""
    vecs = []
    for v in range(F.n):
        bits = 0
        for i, s in enumerate(F.sets):
            if s >> v & 1:
                bits |= 1 << i
        vecs.append(BitVec(F.k, bits))
    return VectorAssignment(F.k, tuple(vecs))


def assignment_to_family(A: VectorAssignment) -> InversionFamily:
    sets = []
    for i in range(A.width):
        s = 0
        for v, vec in enumerate(A.vecs):
            if vec.bits >> i & 1:
                s |= 1 << v
        sets.append(s)
    return InversionFamily(A.n, tuple(sets))


def apply_assignment(D: Digraph, A: VectorAssignment) -> Digraph:
    """Reverse each arc whose endpoint vectors have odd overlap.

    Agrees with ``apply_family`` on the transposed family by construction;
    the equivalence is exercised on randomized inputs in the tests.
    """
    if A.n != D.n:
        raise ValueError("assignment must cover every vertex")
    bits = [v.bits for v in A.vecs]
    rows = [0] * D.n
    for u, v in D.arcs():
        if (bits[u] & bits[v]).bit_count() & 1:
            rows[v] |= 1 << u
        else:
            rows[u] |= 1 << v
    return Digraph(D.n, tuple(rows))


def flip_matrix(D: Digraph, order: Sequence[int]) -> SymMatrix:
    """Which unordered pairs must flip for D to be sorted by ``order``.

    Entry (u,v) is 1 when the arc between u and v points against the
    order.  Pairs without an arc stay 0, and the diagonal is left zero;
    self-products are unconstrained by arcs.
    """
    if sorted(order) != list(range(D.n)):
        raise ValueError("order must be a permutation of the vertices")
    pos = [0] * D.n
    for i, v in enumerate(order):
        pos[v] = i
    rows = [0] * D.n
    for u, v in D.arcs():
        if pos[v] < pos[u]:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    return SymMatrix(D.n, tuple(rows))


def family_rank(A: VectorAssignment) -> int:
    """Rank over GF(2) of the set of distinct vertex vectors."""
    return rank_of_rows(sorted({v.bits for v in A.vecs}))


def is_even_weight_assignment(A: VectorAssignment) -> bool:
    """True when every vertex vector has even weight (orthogonal to all-ones)."""
    return all(v.weight() % 2 == 0 for v in A.vecs)


def extend_to_tournament(D: Digraph, F: InversionFamily) -> Digraph:
    """Complete D to a tournament that F still decycles.

    Each missing pair is oriented so that, after the family flips it (or
    not), it agrees with a fixed topological order of the decycled graph.
    """
    post = apply_family(D, F)
    topo = is_acyclic(post)
    if topo is None:
        raise ValueError("family does not decycle the graph")
    pos = [0] * D.n
    for i, v in enumerate(topo):
        pos[v] = i
    bits = [vec.bits for vec in family_to_assignment(F).vecs]
    rows = list(D.out_rows)
    for u in range(D.n):
        for v in range(u + 1, D.n):
            if rows[u] >> v & 1 or rows[v] >> u & 1:
                continue
            lo, hi = (u, v) if pos[u] < pos[v] else (v, u)
            if (bits[u] & bits[v]).bit_count() & 1:
                rows[hi] |= 1 << lo
            else:
                rows[lo] |= 1 << hi
    return Digraph(D.n, tuple(rows))


def enumerate_tournaments(n: int) -> Iterator[Digraph]:
    """All labelled tournaments on n vertices, each exactly once."""
    if n > MAX_ENUM_VERTICES:
        raise ResourceLimitError(
            f"labelled enumeration is capped at {MAX_ENUM_VERTICES} vertices"
        )
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in range(1 << len(pairs)):
        rows = [0] * n
        for idx, (i, j) in enumerate(pairs):
            if bits >> idx & 1:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
        yield Digraph(n, tuple(rows))


def canonical_key(D: Digraph) -> tuple[int, int]:
    """Isomorphism-invariant key: minimum relabelled encoding.

    Minimizes the upper-triangle arc encoding over the permutations that
    sort vertices by descending out-degree; equal keys hold exactly for
    isomorphic tournaments (and for general digraphs with equal degree
    profiles, a conservative refinement).
    """
    n = D.n
    rows = D.out_rows
    degs = [r.bit_count() for r in rows]
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(degs[v], []).append(v)
    ordered = [groups[d] for d in sorted(groups, reverse=True)]
    best = None
    for arrangement in itertools.product(
        *(itertools.permutations(g) for g in ordered)
    ):
        perm = [v for part in arrangement for v in part]
        key = 0
        bit = 1
        for i in range(n):
            ri = rows[perm[i]]
            for j in range(i + 1, n):
                if ri >> perm[j] & 1:
                    key |= bit
                bit <<= 1
        if best is None or key < best:
            best = key
    return (n, best if best is not None else 0)


def nonisomorphic_tournaments(n: int) -> list[Digraph]:
    """One representative per isomorphism class, in labelled order."""
    seen = set()
    reps = []
    for T in enumerate_tournaments(n):
        key = canonical_key(T)
        if key not in seen:
            seen.add(key)
            reps.append(T)
    return reps


def dump_digraph(D: Digraph) -> str:
    """Text form: first line n, then n rows of n characters, (i,j)=1 for i->j."""
    lines = [str(D.n)]
    for u in range(D.n):
        lines.append(
            "".join("1" if D.out_rows[u] >> v & 1 else "0" for v in range(D.n))
        )
    return "\n".join(lines) + "\n"


def parse_digraph(text: str) -> Digraph:
    """Parse the digraph text format, rejecting loops and 2-cycles."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty digraph file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the order, got {lines[0]!r}") from None
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} adjacency rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:]):
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise ValueError(f"row {i} must be {n} characters of 0/1, got {ln!r}")
        rows.append(sum(1 << j for j, ch in enumerate(ln) if ch == "1"))
    return Digraph(n, tuple(rows))


def encode_digraph(D: Digraph) -> str:
    """Single-line encoding used in experiment reports: enc:<n>:<hex rows>."""
    return f"enc:{D.n}:" + ".".join(format(r, "x") for r in D.out_rows)


def decode_digraph(text: str) -> Digraph:
    body = text[4:] if text.startswith("enc:") else text
    try:
        head, _, rest = body.partition(":")
        n = int(head)
        rows = tuple(int(part, 16) for part in rest.split(".")) if n else ()
    except ValueError:
        raise ValueError(f"malformed digraph encoding {text!r}") from None
    if n and len(rows) != n:
        raise ValueError(f"encoding declares {n} vertices but has {len(rows)} rows")
    return Digraph(n, rows)


def dump_family(F: InversionFamily) -> str:
    """Text form: one set per line, space-separated 0-based vertex indices."""
    return "\n".join(" ".join(map(str, vs)) for vs in F.vertex_lists()) + "\n"


def parse_family(text: str, n: int) -> InversionFamily:
    """Parse the family text format for an n-vertex host graph.

    Every line is one set (a blank line is the empty set); trailing blank
    lines are ignored.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    sets = []
    for i, ln in enumerate(lines):
        mask = 0
        for tok in ln.split():
            try:
                v = int(tok)
            except ValueError:
                raise ValueError(f"set {i}: {tok!r} is not a vertex index") from None
            if not 0 <= v < n:
                raise ValueError(f"set {i}: vertex {v} outside 0..{n - 1}")
            mask |= 1 << v
        sets.append(mask)
    return InversionFamily(n, tuple(sets))
