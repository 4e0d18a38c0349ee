"""Linear algebra over GF(2) with bit-packed vectors and symmetric matrices.

Vectors are little-endian bitmasks (bit i = coordinate i) wrapped in
:class:`BitVec`; a symmetric matrix stores one bitmask per row.  Width is
capped at 64 so every vector fits a machine word; desk-scale work never
needs more than a dozen coordinates.

The centrepiece is :func:`gram_factor`, which writes a symmetric matrix M
as U^t U with U square.  For odd order this always succeeds; for even
order it succeeds exactly when M has a nonzero diagonal entry or is
singular, and returns ``None`` otherwise.  :func:`min_gram_dim` gives the
least dimension in which prescribed pairwise products are realizable, and
:func:`realize_oracle` is the independent brute-force check it is
validated against.

Everything here is a pure function on immutable values and safe to call
from any number of threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ResourceLimitError

MAX_WIDTH = 64

# Exhaustive realization search refuses instances with more than this many
# raw assignments (2^(n*k)); override per call for bigger sweeps.
DEFAULT_ORACLE_BUDGET = 1 << 22

# min_gram_dim_free_diag enumerates all 2^n diagonals.
FREE_DIAG_LIMIT = 20


@dataclass(frozen=True)
class BitVec:
    """Vector over GF(2); ``bits`` holds ``width`` coordinates, bit i = entry i."""

    width: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in 0..{MAX_WIDTH}, got {self.width}")
        if self.bits < 0 or self.bits >> self.width:
            raise ValueError("bits set beyond declared width")

    def weight(self) -> int:
        return self.bits.bit_count()

    def __str__(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.width))


def dot(u: BitVec, v: BitVec) -> int:
    """Scalar product over GF(2): parity of the AND of the two bitmasks."""
    if u.width != v.width:
        raise ValueError(f"width mismatch: {u.width} != {v.width}")
    return (u.bits & v.bits).bit_count() & 1


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric n-by-n matrix over GF(2), one row bitmask per row."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_WIDTH:
            raise ValueError(f"order must be in 0..{MAX_WIDTH}, got {self.n}")
        if len(self.rows) != self.n:
            raise ValueError("row count does not match declared order")
        for i, r in enumerate(self.rows):
            if r < 0 or r >> self.n:
                raise ValueError(f"row {i} has bits beyond column {self.n - 1}")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if (self.rows[i] >> j & 1) != (self.rows[j] >> i & 1):
                    raise ValueError(f"not symmetric at ({i},{j})")

    @classmethod
    def zeros(cls, n: int) -> "SymMatrix":
        return cls(n, (0,) * n)

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[int]]) -> "SymMatrix":
        n = len(entries)
        rows = []
        for row in entries:
            if len(row) != n:
                raise ValueError("entry rows must be square")
            rows.append(sum((1 << j) for j, e in enumerate(row) if e & 1))
        return cls(n, tuple(rows))

    def entry(self, i: int, j: int) -> int:
        return self.rows[i] >> j & 1

    def to_entries(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def diagonal(self) -> int:
        """Diagonal entries as a bitmask (bit i = m_ii)."""
        return _diag_mask(self.rows)

    def with_diagonal(self, diag: int) -> "SymMatrix":
        """Copy with the diagonal replaced by the bits of ``diag``."""
        rows = tuple(
            (r & ~(1 << i)) | ((diag >> i & 1) << i) for i, r in enumerate(self.rows)
        )
        return SymMatrix(self.n, rows)


@dataclass(frozen=True)
class GramFactorization:
    """Witness vectors whose pairwise products reproduce ``target``."""

    k: int
    columns: tuple[BitVec, ...]
    target: SymMatrix

    def verify(self) -> bool:
        return gram_of(self.columns) == self.target


def gram_of(vectors: Sequence[BitVec]) -> SymMatrix:
    """Matrix of pairwise scalar products of ``vectors`` (all widths equal)."""
    vecs = list(vectors)
    if vecs:
        w = vecs[0].width
        for v in vecs:
            if v.width != w:
                raise ValueError("gram_of requires equal widths")
    n = len(vecs)
    rows = []
    for i in range(n):
        r = 0
        for j in range(n):
            if (vecs[i].bits & vecs[j].bits).bit_count() & 1:
                r |= 1 << j
        rows.append(r)
    return SymMatrix(n, tuple(rows))


def rank(M: SymMatrix) -> int:
    """Rank over GF(2) by Gaussian elimination."""
    return rank_of_rows(M.rows)


def rank_of_rows(rows: Sequence[int]) -> int:
    """Rank of a list of bitmask rows over GF(2)."""
    pivots: dict[int, int] = {}
    for row in rows:
        v = row
        while v:
            low = v & -v
            if low in pivots:
                v ^= pivots[low]
            else:
                pivots[low] = v
                break
    return len(pivots)


def _diag_mask(rows: Sequence[int]) -> int:
    d = 0
    for i, r in enumerate(rows):
        if r >> i & 1:
            d |= 1 << i
    return d


def _null_vector(rows: Sequence[int]) -> int | None:
    """Nonzero x with the rows indexed by x summing to zero, or None.

    For a symmetric matrix the rows equal the columns, so x is a kernel
    vector: M x = 0.
    """
    pivots: dict[int, tuple[int, int]] = {}
    for j, row in enumerate(rows):
        v, combo = row, 1 << j
        while v:
            low = v & -v
            if low in pivots:
                pv, pc = pivots[low]
                v ^= pv
                combo ^= pc
            else:
                pivots[low] = (v, combo)
                break
        if v == 0:
            return combo
    return None


def _swap_sym(rows: Sequence[int], a: int, b: int) -> list[int]:
    """Simultaneous row and column swap (congruence by a transposition)."""
    out = list(rows)
    if a == b:
        return out
    for i, r in enumerate(out):
        ba, bb = r >> a & 1, r >> b & 1
        if ba != bb:
            out[i] = r ^ (1 << a) ^ (1 << b)
    out[a], out[b] = out[b], out[a]
    return out


def _shear(rows: Sequence[int], src: int, dst: int) -> list[int]:
    """Congruence adding coordinate ``src`` into ``dst`` (column op then row op)."""
    out = list(rows)
    for i in range(len(out)):
        if out[i] >> src & 1:
            out[i] ^= 1 << dst
    out[dst] ^= out[src]
    return out


def _mat2_vec(cols: tuple[int, int], v: int) -> int:
    r = 0
    if v & 1:
        r ^= cols[0]
    if v & 2:
        r ^= cols[1]
    return r


def _factor_square(rows: list[int], n: int) -> list[int] | None:
    if n == 0:
        return []
    if n % 2:
        return _factor_odd(rows, n)
    return _factor_even(rows, n)


def _factor_odd(rows: list[int], n: int) -> list[int]:
    """Factor any symmetric matrix of odd order (always possible)."""
    if n == 1:
        return [rows[0] & 1]
    diag = _diag_mask(rows)
    if diag:
        i = (diag & -diag).bit_length() - 1
        cols = _factor_leading_one(_swap_sym(rows, 0, i), n)
        cols[0], cols[i] = cols[i], cols[0]
        return cols
    # All-zero diagonal: factor with the (0,0) entry flipped, then add the
    # all-ones vector to the first column.  Odd width makes 1.1 = 1, and
    # every other column has even weight, so only the (0,0) product moves.
    flipped = list(rows)
    flipped[0] ^= 1
    cols = _factor_leading_one(flipped, n)
    cols[0] ^= (1 << n) - 1
    return cols


def _factor_leading_one(rows: list[int], n: int) -> list[int]:
    """Factor for odd n >= 3 with m_00 = 1."""
    for j in range(1, n):
        if (rows[0] >> j & 1) != (rows[j] >> j & 1):
            # the 2x2 block on coordinates (0, j) is invertible
            cols = _factor_pivot_block(_swap_sym(rows, 1, j), n)
            cols[1], cols[j] = cols[j], cols[1]
            return cols
    # Every block on (0, j) is singular, i.e. m_0j = m_jj for all j.  Clear
    # row/column 0 by shears, flip the (1,1) entry so an invertible block
    # appears, factor, then rebuild: column 0 becomes all-ones, column 1
    # absorbs column 0 of the sub-witness, and the shears are undone.
    targets = [j for j in range(1, n) if rows[0] >> j & 1]
    sheared = list(rows)
    for j in targets:
        sheared = _shear(sheared, 0, j)
    sheared[1] ^= 2
    cols = _factor_pivot_block(sheared, n)
    ones = (1 << n) - 1
    cols[1] ^= cols[0]
    cols[0] = ones
    for j in targets:
        cols[j] ^= ones
    return cols


# Column pairs of the two invertible symmetric 2x2 blocks with m_00 = 1,
# their inverses, and preselected 2x2 witnesses.
_PIVOT_TABLE = {
    0: ((1, 2), (1, 2)),  # identity block: inverse and witness are both I
    1: ((2, 3), (1, 3)),  # [[1,1],[1,0]]: inverse [[0,1],[1,1]], witness cols (1,0),(1,1)
}


def _factor_pivot_block(rows: list[int], n: int) -> list[int]:
    """Factor via the Schur complement of an invertible leading 2x2 block."""
    a01 = rows[0] >> 1 & 1
    assert rows[0] & 1 and a01 != (rows[1] >> 1 & 1), "pivot block must be invertible"
    ainv, ua = _PIVOT_TABLE[a01]
    m = n - 2
    bcols = [((rows[0] >> j & 1) | ((rows[1] >> j & 1) << 1)) for j in range(2, n)]
    ainv_b = [_mat2_vec(ainv, b) for b in bcols]
    srows = []
    for i in range(m):
        r = rows[i + 2] >> 2
        bi = bcols[i]
        for j in range(m):
            if (bi & ainv_b[j]).bit_count() & 1:
                r ^= 1 << j
        srows.append(r)
    sub = _factor_square(srows, m)
    assert sub is not None  # odd recursion cannot fail
    cols = [ua[0], ua[1]]
    for j in range(m):
        cols.append(_mat2_vec(ua, ainv_b[j]) | (sub[j] << 2))
    return cols


def _factor_even(rows: list[int], n: int) -> list[int] | None:
    """Factor a symmetric matrix of even order, or None when impossible.

    Possible exactly when some diagonal entry is 1 or the matrix is
    singular; a nonsingular matrix with zero diagonal forces every witness
    column into the even-weight hyperplane, which cannot carry full rank.
    """
    diag = _diag_mask(rows)
    if diag:
        i = (diag & -diag).bit_length() - 1
        work = _swap_sym(rows, 0, i)
        b = work[0] >> 1
        srows = []
        for j in range(n - 1):
            r = work[j + 1] >> 1
            if b >> j & 1:
                r ^= b
            srows.append(r)
        sub = _factor_odd(srows, n - 1)
        cols = [1] + [(b >> j & 1) | (sub[j] << 1) for j in range(n - 1)]
        cols[0], cols[i] = cols[i], cols[0]
        return cols
    x = _null_vector(rows)
    if x is None:
        return None
    # Change basis so a kernel vector becomes coordinate 0: its row and
    # column vanish, the rest has odd order.
    p = (x & -x).bit_length() - 1
    work = _swap_sym(rows, 0, p)
    b0, bp = x & 1, x >> p & 1
    xs = x ^ ((b0 ^ bp) | ((b0 ^ bp) << p))
    targets = [q for q in range(1, n) if xs >> q & 1]
    for q in targets:
        work = _shear(work, q, 0)
    assert work[0] == 0, "kernel reduction must clear row 0"
    sub = _factor_odd([r >> 1 for r in work[1:]], n - 1)
    cols = [0] + [c << 1 for c in sub]
    c0 = 0
    for q in targets:
        c0 ^= cols[q]
    cols[0] = c0
    cols[0], cols[p] = cols[p], cols[0]
    return cols


def gram_factor(M: SymMatrix) -> GramFactorization | None:
    """Factor M = U^t U with U square over GF(2).

    Odd order always factors.  Even order factors exactly when M has a
    nonzero diagonal entry or is singular; otherwise returns None (a
    value, not a fault).
    """
    cols = _factor_square(list(M.rows), M.n)
    if cols is None:
        return None
    return GramFactorization(
        k=M.n, columns=tuple(BitVec(M.n, c) for c in cols), target=M
    )


def min_gram_dim(M: SymMatrix) -> int:
    """Least k such that vectors in GF(2)^k realize M as their Gram matrix.

    Closed rule: 0 for the zero matrix, rank(M) when some diagonal entry
    is 1, rank(M)+1 for a nonzero matrix with zero diagonal (all witness
    vectors are then even-weight and span at most a hyperplane).  The rule
    is cross-validated against :func:`realize_oracle` in the test suite.
    """
    if not any(M.rows):
        return 0
    r = rank(M)
    return r if _diag_mask(M.rows) else r + 1


def realize_oracle(
    M: SymMatrix, k: int, node_budget: int = DEFAULT_ORACLE_BUDGET
) -> list[BitVec] | None:
    """Exhaustively search for vectors in GF(2)^k whose Gram matrix is M.

    Sound and complete: returns a witness list or None.  Refuses instances
    whose raw assignment space 2^(n*k) exceeds ``node_budget`` rather than
    ever returning a wrong answer.
    """
    n = M.n
    if n * k > 0 and (1 << (n * k)) > node_budget:
        raise ResourceLimitError(
            f"2^({n}*{k}) assignments exceed the oracle budget {node_budget}"
        )
    vecs = [0] * n
    rows = M.rows

    def fits(t: int, w: int) -> bool:
        if w.bit_count() & 1 != rows[t] >> t & 1:
            return False
        for s in range(t):
            if (vecs[s] & w).bit_count() & 1 != (rows[s] >> t & 1):
                return False
        return True

    def search(t: int) -> bool:
        if t == n:
            return True
        for w in range(1 << k):
            if fits(t, w):
                vecs[t] = w
                if search(t + 1):
                    return True
        return False

    if not search(0):
        return None
    return [BitVec(k, w) for w in vecs]


def min_gram_dim_free_diag(
    M: SymMatrix, limit: int = FREE_DIAG_LIMIT
) -> tuple[int, BitVec]:
    """Minimum Gram dimension when the diagonal is ours to choose.

    Pairwise products constrain only distinct pairs; self-products are
    free.  Minimizes :func:`min_gram_dim` over all 2^n diagonals and
    returns the minimum with the smallest achieving diagonal.
    """
    n = M.n
    if n > limit:
        raise ResourceLimitError(f"order {n} exceeds the free-diagonal limit {limit}")
    base = [r & ~(1 << i) for i, r in enumerate(M.rows)]
    best_k = None
    best_d = 0
    for d in range(1 << n):
        rows = [base[i] | ((d >> i & 1) << i) for i in range(n)]
        if not any(rows):
            kd = 0
        else:
            r = rank_of_rows(rows)
            kd = r if d else r + 1
        if best_k is None or kd < best_k:
            best_k, best_d = kd, d
            if kd == 0:
                break
    assert best_k is not None
    return best_k, BitVec(n, best_d)


def dump_matrix(M: SymMatrix) -> str:
    """Text form: first line n, then n lines of n characters from {0,1}."""
    lines = [str(M.n)]
    for i in range(M.n):
        lines.append("".join(str(M.entry(i, j)) for j in range(M.n)))
    return "\n".join(lines) + "\n"


def load_matrix(text: str) -> SymMatrix:
    """Parse the matrix text format; symmetry is validated."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the order, got {lines[0]!r}") from None
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:]):
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise ValueError(f"row {i} must be {n} characters of 0/1, got {ln!r}")
        rows.append(sum(1 << j for j, ch in enumerate(ln) if ch == "1"))
    return SymMatrix(n, tuple(rows))
