"""Graph constructions, the constructor expression grammar, and explicit
decycling-family builders.

Constructions: the directed triangle, transitive tournaments, the
reversed-path tournament, dijoins, k-joins, and blow-ups (replace each
vertex of a host graph by a digraph, with full arc bundles following the
host's arcs).  Blow-up parts are laid out consecutively in part order so
families map predictably onto the result.

The expression grammar is deliberately minimal (no variables, no
bindings) so one line fully reproduces an experiment instance:

    expr := ident | ident '(' args ')'
    idents: c3, tt, qn, rev, dijoin, join, blowup, blowup_uniform
    blowup takes 'h ; parts', blowup_uniform takes 'h ; part , count'

Parse errors carry byte offsets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .digraph import (
    Digraph,
    InversionFamily,
    VectorAssignment,
    apply_family,
    family_to_assignment,
    is_acyclic,
    is_even_weight_assignment,
    invert,
    residual_cycle,
)
from .digraph import reverse as reverse_digraph
from .errors import ParseError, VerificationError


def c3() -> Digraph:
    """The directed 3-cycle."""
    return Digraph(3, (0b010, 0b100, 0b001))


def transitive(n: int) -> Digraph:
    """Transitive tournament: arc i -> j exactly when i < j."""
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    full = (1 << n) - 1
    return Digraph(n, tuple((full >> (i + 1)) << (i + 1) for i in range(n)))


def qn(n: int) -> Digraph:
    """Transitive tournament with its unique directed hamiltonian path reversed.

    The path of the transitive tournament visits 0,1,...,n-1 in order, so
    each consecutive arc i -> i+1 becomes i+1 -> i while longer arcs stay.
    """
    if n < 1:
        raise ValueError("vertex count must be positive")
    rows = []
    for i in range(n):
        row = 0
        for j in range(i + 2, n):
            row |= 1 << j
        if i >= 1:
            row |= 1 << (i - 1)
        rows.append(row)
    return Digraph(n, tuple(rows))


def qn_family(n: int) -> InversionFamily:
    """The floor((n-1)/2) pair sets {v_2i, v_2i+1} (1-based vertex labels).

    With 0-based indices set i covers vertices 2i+1 and 2i+2; the family
    decycles ``qn(n)``, giving the standard upper bound on its inversion
    number.
    """
    sets = []
    for i in range(1, (n - 1) // 2 + 1):
        sets.append((1 << (2 * i - 1)) | (1 << (2 * i)))
    return InversionFamily(n, tuple(sets))


def dijoin(left: Digraph, right: Digraph) -> Digraph:
    """Disjoint union of left and right plus every arc from left to right."""
    off = left.n
    rmask = ((1 << right.n) - 1) << off
    rows = [row | rmask for row in left.out_rows]
    rows.extend(row << off for row in right.out_rows)
    return Digraph(left.n + right.n, tuple(rows))


def blow_up(H: Digraph, parts: list[Digraph]) -> Digraph:
    """Replace vertex i of H by parts[i], with full bundles along H's arcs."""
    if len(parts) != H.n:
        raise ValueError(f"blow-up needs exactly {H.n} parts, got {len(parts)}")
    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.n
    masks = [((1 << p.n) - 1) << off for p, off in zip(parts, offsets)]
    rows = [0] * total
    for i, p in enumerate(parts):
        off = offsets[i]
        bundle = 0
        hrow = H.out_rows[i]
        while hrow:
            j = (hrow & -hrow).bit_length() - 1
            bundle |= masks[j]
            hrow &= hrow - 1
        for v in range(p.n):
            rows[off + v] = (p.out_rows[v] << off) | bundle
    return Digraph(total, tuple(rows))


def k_join(parts: list[Digraph]) -> Digraph:
    """Blow-up of the transitive tournament: parts dijoined one after another."""
    return blow_up(transitive(len(parts)), parts)


# ---------------------------------------------------------------------------
# Constructor expressions


class Expr:
    """Base class for constructor expression nodes."""


@dataclass(frozen=True)
class C3Expr(Expr):
    pass


@dataclass(frozen=True)
class TTExpr(Expr):
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("tt size must be nonnegative")


@dataclass(frozen=True)
class QnExpr(Expr):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("qn size must be positive")


@dataclass(frozen=True)
class RevExpr(Expr):
    inner: Expr


@dataclass(frozen=True)
class DijoinExpr(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class JoinExpr(Expr):
    parts: tuple[Expr, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("join needs at least one part")


@dataclass(frozen=True)
class BlowupExpr(Expr):
    base: Expr
    parts: tuple[Expr, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("blowup needs at least one part")


@dataclass(frozen=True)
class BlowupUniformExpr(Expr):
    base: Expr
    part: Expr
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("blowup count must be at least 1")


def eval_expr(expr: Expr) -> Digraph:
    """Evaluate an expression tree to a digraph."""
    if isinstance(expr, C3Expr):
        return c3()
    if isinstance(expr, TTExpr):
        return transitive(expr.n)
    if isinstance(expr, QnExpr):
        return qn(expr.n)
    if isinstance(expr, RevExpr):
        return reverse_digraph(eval_expr(expr.inner))
    if isinstance(expr, DijoinExpr):
        return dijoin(eval_expr(expr.left), eval_expr(expr.right))
    if isinstance(expr, JoinExpr):
        return k_join([eval_expr(p) for p in expr.parts])
    if isinstance(expr, BlowupExpr):
        base = eval_expr(expr.base)
        if len(expr.parts) != base.n:
            raise ValueError(
                f"blowup base has {base.n} vertices but {len(expr.parts)} parts given"
            )
        return blow_up(base, [eval_expr(p) for p in expr.parts])
    if isinstance(expr, BlowupUniformExpr):
        base = eval_expr(expr.base)
        if expr.count != base.n:
            raise ValueError(
                f"blowup base has {base.n} vertices but count is {expr.count}"
            )
        return blow_up(base, [eval_expr(expr.part) for _ in range(expr.count)])
    raise TypeError(f"not a constructor expression: {expr!r}")


def pretty(expr: Expr) -> str:
    """Canonical text form; ``parse_expr(pretty(e))`` returns an equal tree."""
    if isinstance(expr, C3Expr):
        return "c3"
    if isinstance(expr, TTExpr):
        return f"tt({expr.n})"
    if isinstance(expr, QnExpr):
        return f"qn({expr.n})"
    if isinstance(expr, RevExpr):
        return f"rev({pretty(expr.inner)})"
    if isinstance(expr, DijoinExpr):
        return f"dijoin({pretty(expr.left)}, {pretty(expr.right)})"
    if isinstance(expr, JoinExpr):
        return "join(" + ", ".join(pretty(p) for p in expr.parts) + ")"
    if isinstance(expr, BlowupExpr):
        parts = ", ".join(pretty(p) for p in expr.parts)
        return f"blowup({pretty(expr.base)}; {parts})"
    if isinstance(expr, BlowupUniformExpr):
        return f"blowup_uniform({pretty(expr.base)}; {pretty(expr.part)}, {expr.count})"
    raise TypeError(f"not a constructor expression: {expr!r}")


_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[a-z_][a-z0-9_]*)|(?P<int>\d+)|(?P<sym>[(),;]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> tuple[str, str, int]:
        self._skip_ws()
        if self.pos >= len(self.text):
            return ("eof", "", self.pos)
        m = _TOKEN_RE.match(self.text, self.pos)
        if not m:
            raise ParseError(f"unexpected character {self.text[self.pos]!r}", self.pos)
        if m.group("ident"):
            return ("ident", m.group("ident"), m.end())
        if m.group("int"):
            return ("int", m.group("int"), m.end())
        return ("sym", m.group("sym"), m.end())

    def take(self) -> tuple[str, str]:
        kind, value, end = self.peek()
        if kind == "eof":
            raise ParseError("unexpected end of input", self.pos)
        self.pos = end
        return kind, value

    def expect_sym(self, sym: str):
        kind, value, end = self.peek()
        if kind != "sym" or value != sym:
            raise ParseError(f"expected {sym!r}", self.pos)
        self.pos = end

    def at_sym(self, sym: str) -> bool:
        kind, value, _ = self.peek()
        return kind == "sym" and value == sym

    def parse_int(self) -> int:
        kind, value, end = self.peek()
        if kind != "int":
            raise ParseError("expected an integer", self.pos)
        self.pos = end
        return int(value)

    _KNOWN = ("c3", "tt", "qn", "rev", "dijoin", "join", "blowup", "blowup_uniform")

    def parse_expr(self) -> Expr:
        kind, value, end = self.peek()
        if kind != "ident":
            raise ParseError("expected a constructor name", self.pos)
        start = self.pos
        self.pos = end
        name = value
        if name not in self._KNOWN:
            raise ParseError(f"unknown constructor {name!r}", start)
        if name == "c3":
            if self.at_sym("("):
                self.take()
                self.expect_sym(")")
            return C3Expr()
        self.expect_sym("(")
        try:
            node = self._parse_call(name)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), start) from None
        self.expect_sym(")")
        return node

    def _parse_call(self, name: str) -> Expr:
        if name == "tt":
            return TTExpr(self.parse_int())
        if name == "qn":
            return QnExpr(self.parse_int())
        if name == "rev":
            return RevExpr(self.parse_expr())
        if name == "dijoin":
            left = self.parse_expr()
            self.expect_sym(",")
            right = self.parse_expr()
            return DijoinExpr(left, right)
        if name == "join":
            parts = [self.parse_expr()]
            while self.at_sym(","):
                self.take()
                parts.append(self.parse_expr())
            return JoinExpr(tuple(parts))
        if name == "blowup":
            base = self.parse_expr()
            self.expect_sym(";")
            parts = [self.parse_expr()]
            while self.at_sym(","):
                self.take()
                parts.append(self.parse_expr())
            return BlowupExpr(base, tuple(parts))
        base = self.parse_expr()
        self.expect_sym(";")
        part = self.parse_expr()
        self.expect_sym(",")
        count = self.parse_int()
        return BlowupUniformExpr(base, part, count)


def parse_expr(text: str) -> Expr:
    """Parse a constructor expression; errors carry byte offsets."""
    p = _Parser(text)
    node = p.parse_expr()
    kind, value, _ = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {value!r}", p.pos)
    return node


def graph_from_expr(text: str) -> Digraph:
    """Parse and evaluate in one step."""
    return eval_expr(parse_expr(text))


# ---------------------------------------------------------------------------
# Explicit decycling-family constructions


def _require_decycling(D: Digraph, F: InversionFamily, what: str) -> None:
    cycle = residual_cycle(apply_family(D, F))
    if cycle is not None:
        raise VerificationError(f"{what} left a cycle {cycle}", cycle)


def extend_family_to_c3_dijoin(D: Digraph, F: InversionFamily) -> InversionFamily:
    """Lift a decycling family of D to one of the same size for c3 => D.

    Requires an odd family length k >= 3 and even weight for every
    characteristic vector.  The triangle's first vertex joins no set while
    the other two join all k sets: the triangle then loses its cycle (odd
    k flips one arc) and every cross arc keeps its direction (even
    weights), so the lifted family decycles the dijoin.  The result is
    verified, not assumed.
    """
    k = F.k
    if k % 2 == 0 or k < 3:
        raise ValueError(f"family length must be odd and at least 3, got {k}")
    if not is_even_weight_assignment(family_to_assignment(F)):
        raise ValueError("every characteristic vector must have even weight")
    if is_acyclic(apply_family(D, F)) is None:
        raise ValueError("family does not decycle the graph")
    joined = dijoin(c3(), D)
    sets = tuple(0b110 | (s << 3) for s in F.sets)
    out = InversionFamily(joined.n, sets)
    _require_decycling(joined, out, "triangle dijoin family")
    return out


def compose_blowup_family(
    T: Digraph,
    F_T: InversionFamily,
    parts: list[Digraph],
    part_sets: list[int],
) -> InversionFamily:
    """Combine a family of T with one inversion set per part into a family
    of the blow-up of T by the parts.

    ``part_sets[j]`` is a vertex mask (in part-local indices) whose single
    inversion makes part j acyclic; empty when the part already is.  The
    first k output sets blow up T's sets and additionally carry part 0's
    set; each remaining part contributes its own set as an extra member.
    Empty sets are dropped.  The combination is only guaranteed for the
    dominant-vertex shape (vertex 0 of T outside every set of F_T), so the
    result is verified and a failure raises with the residual cycle.
    """
    if len(parts) != T.n or len(part_sets) != T.n:
        raise ValueError("need exactly one part and one inversion set per vertex")
    for j, (p, y) in enumerate(zip(parts, part_sets)):
        if y < 0 or y >> p.n:
            raise ValueError(f"part {j}: inversion set outside the part")
        if is_acyclic(invert(p, y)) is None:
            raise ValueError(f"part {j}: inversion set does not decycle the part")
    if not is_even_weight_assignment(family_to_assignment(F_T)):
        raise ValueError("every characteristic vector of the base family "
                         "must have even weight")
    if is_acyclic(apply_family(T, F_T)) is None:
        raise ValueError("base family does not decycle the base tournament")

    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.n
    blown = blow_up(T, parts)
    part_masks = [((1 << p.n) - 1) << off for p, off in zip(parts, offsets)]
    global_sets = [y << off for y, off in zip(part_sets, offsets)]

    sets = []
    for s in F_T.sets:
        blownset = 0
        for j in range(T.n):
            if s >> j & 1:
                blownset |= part_masks[j]
        sets.append(global_sets[0] | blownset)
    sets.extend(global_sets[1:])
    out = InversionFamily(blown.n, tuple(s for s in sets if s))
    _require_decycling(blown, out, "blow-up family")
    return out
