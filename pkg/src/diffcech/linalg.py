"""Exact integer matrices and Smith normal form.

Matrices are stored sparsely (row -> {col: value}) with Python integers, so
there is no overflow and coboundary matrices of a few thousand rows stay
cheap. Two SNF routes exist:

* :func:`smith_normal_form` is the dense textbook reduction returning the
  unimodular transforms; it is used wherever transforms are needed and on
  small inputs.
* :func:`elementary_divisors` eliminates unit pivots sparsely first and hands
  the (usually tiny) remainder to the dense routine. Homology uses this one.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

import numpy as np


_FAST_ROWS = 400
_SAFE = 1 << 62


def _to_csr(m: "IntMatrix"):
    from scipy.sparse import csr_matrix

    rows, cols, vals = [], [], []
    for i, r in m._data.items():
        rows.extend([i] * len(r))
        cols.extend(r.keys())
        vals.extend(r.values())
    return csr_matrix((np.array(vals, dtype=np.int64), (np.array(rows, dtype=np.int64),
                                                        np.array(cols, dtype=np.int64))),
                      shape=(m.rows, m.cols))


def _max_abs(m: "IntMatrix") -> int:
    return max((abs(v) for r in m._data.values() for v in r.values()), default=0)


def _machine_matmul(a: "IntMatrix", b: "IntMatrix"):
    """Product through scipy int64 when no partial sum can overflow, else None."""
    width = max((len(r) for r in a._data.values()), default=0)
    if _max_abs(a) * _max_abs(b) * max(width, 1) >= _SAFE:
        return None
    prod = (_to_csr(a) @ _to_csr(b)).tocoo()
    out: dict = {}
    for i, j, v in zip(prod.row.tolist(), prod.col.tolist(), prod.data.tolist()):
        if v:
            out.setdefault(i, {})[j] = v
    return IntMatrix._raw(a.rows, b.cols, out)


class IntMatrix:
    """Immutable sparse integer matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: dict | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        clean = {}
        if data:
            for i, row in data.items():
                r = {j: v for j, v in row.items() if v}
                if r:
                    clean[i] = r
        self._data = clean

    # construction -----------------------------------------------------

    @classmethod
    def _raw(cls, rows, cols, data):
        m = cls.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, data
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls._raw(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls._raw(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged dense matrix")
        data = {}
        for i, r in enumerate(rows):
            d = {j: int(v) for j, v in enumerate(r) if v}
            if d:
                data[i] = d
        return cls._raw(len(rows), cols, data)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, int]]) -> "IntMatrix":
        """Accumulate (i, j, v) triples; repeated positions are summed."""
        data: dict[int, dict[int, int]] = {}
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            r = data.setdefault(i, {})
            r[j] = r.get(j, 0) + v
        return cls(rows, cols, data)

    @classmethod
    def selection(cls, rows: int, cols: int, targets: Sequence[int]) -> "IntMatrix":
        """Row i has a single 1 in column ``targets[i]`` (pullback along a map)."""
        if len(targets) != rows:
            raise ValueError("selection length mismatch")
        return cls._raw(rows, cols, {i: {int(t): 1} for i, t in enumerate(targets)})

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None):
        n = len(values)
        return cls(rows if rows is not None else n, cols if cols is not None else n,
                   {i: {i: v} for i, v in enumerate(values)})

    # access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> dict:
        return self._data.get(i, {})

    def nonzero_rows(self):
        return self._data.items()

    def entry(self, i: int, j: int) -> int:
        return self._data.get(i, {}).get(j, 0)

    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def is_zero(self) -> bool:
        return not self._data

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, r in self._data.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def column(self, j: int) -> list[int]:
        return [self._data.get(i, {}).get(j, 0) for i in range(self.rows)]

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted((i, tuple(sorted(r.items())))
                                                         for i, r in self._data.items()))))

    def __repr__(self):
        if self.rows * self.cols <= 64:
            return f"IntMatrix({self.to_dense()})"
        return f"IntMatrix<{self.rows}x{self.cols}, nnz={self.nnz()}>"

    # algebra ----------------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if len(self._data) + len(other._data) > _FAST_ROWS:
            fast = _machine_matmul(self, other)
            if fast is not None:
                return fast
        odata = other._data
        out = {}
        for i, r in self._data.items():
            acc: dict[int, int] = {}
            for k, a in r.items():
                orow = odata.get(k)
                if orow:
                    for j, b in orow.items():
                        acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return IntMatrix._raw(self.rows, other.cols, out)

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [0] * self.rows
        for i, r in self._data.items():
            out[i] = sum(v * vec[j] for j, v in r.items())
        return out

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        out = {i: dict(r) for i, r in self._data.items()}
        for i, r in other._data.items():
            t = out.setdefault(i, {})
            for j, v in r.items():
                t[j] = t.get(j, 0) + v
        return IntMatrix(self.rows, self.cols, out)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, c: int) -> "IntMatrix":
        if c == 0:
            return IntMatrix.zeros(self.rows, self.cols)
        return IntMatrix._raw(self.rows, self.cols,
                              {i: {j: c * v for j, v in r.items()} for i, r in self._data.items()})

    @property
    def T(self) -> "IntMatrix":
        out: dict[int, dict[int, int]] = {}
        for i, r in self._data.items():
            for j, v in r.items():
                out.setdefault(j, {})[i] = v
        return IntMatrix._raw(self.cols, self.rows, out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        cpos = {c: k for k, c in enumerate(cols)}
        out = {}
        for a, i in enumerate(rows):
            r = self._data.get(i)
            if not r:
                continue
            d = {cpos[j]: v for j, v in r.items() if j in cpos}
            if d:
                out[a] = d
        return IntMatrix._raw(len(rows), len(cols), out)

    @staticmethod
    def hstack(mats: Sequence["IntMatrix"], rows: int | None = None) -> "IntMatrix":
        if not mats:
            return IntMatrix.zeros(rows or 0, 0)
        r0 = mats[0].rows
        if any(m.rows != r0 for m in mats):
            raise ValueError("hstack row mismatch")
        out: dict[int, dict[int, int]] = {}
        off = 0
        for m in mats:
            for i, r in m._data.items():
                t = out.setdefault(i, {})
                for j, v in r.items():
                    t[j + off] = v
            off += m.cols
        return IntMatrix._raw(r0, off, out)

    @staticmethod
    def vstack(mats: Sequence["IntMatrix"], cols: int | None = None) -> "IntMatrix":
        if not mats:
            return IntMatrix.zeros(0, cols or 0)
        c0 = mats[0].cols
        if any(m.cols != c0 for m in mats):
            raise ValueError("vstack column mismatch")
        out = {}
        off = 0
        for m in mats:
            for i, r in m._data.items():
                out[i + off] = dict(r)
            off += m.rows
        return IntMatrix._raw(off, c0, out)

    @staticmethod
    def block(blocks: dict, row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "IntMatrix":
        """Assemble from {(bi, bj): IntMatrix}; missing blocks are zero."""
        roff = [0]
        for s in row_sizes:
            roff.append(roff[-1] + s)
        coff = [0]
        for s in col_sizes:
            coff.append(coff[-1] + s)
        out: dict[int, dict[int, int]] = {}
        for (bi, bj), m in blocks.items():
            if m.shape != (row_sizes[bi], col_sizes[bj]):
                raise ValueError(f"block {(bi, bj)} has shape {m.shape}, "
                                 f"expected {(row_sizes[bi], col_sizes[bj])}")
            for i, r in m._data.items():
                t = out.setdefault(i + roff[bi], {})
                for j, v in r.items():
                    t[j + coff[bj]] = t.get(j + coff[bj], 0) + v
        return IntMatrix(roff[-1], coff[-1], out)

    @staticmethod
    def block_diag(mats: Sequence["IntMatrix"]) -> "IntMatrix":
        blocks = {(k, k): m for k, m in enumerate(mats)}
        return IntMatrix.block(blocks, [m.rows for m in mats], [m.cols for m in mats])

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        out = {}
        for i, r in self._data.items():
            for k, ro in other._data.items():
                d = {}
                for j, a in r.items():
                    for l, b in ro.items():
                        d[j * other.cols + l] = a * b
                out[i * other.rows + k] = d
        return IntMatrix._raw(self.rows * other.rows, self.cols * other.cols, out)

    def is_selection_like(self) -> bool:
        """Every nonzero row holds exactly one entry and that entry is +-1."""
        return all(len(r) == 1 and abs(next(iter(r.values()))) == 1 for r in self._data.values())


def determinant(M: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    if M.rows != M.cols:
        raise ValueError("determinant of non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    A = M.to_dense()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# dense Smith normal form -------------------------------------------------

def _snf_dense(A: list[list[int]], m: int, n: int, track: bool):
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(a, b):
        A[a], A[b] = A[b], A[a]
        if track:
            U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for r in A:
            r[a], r[b] = r[b], r[a]
        if track:
            for r in V:
                r[a], r[b] = r[b], r[a]

    def add_row(dst, src, q):  # row_dst += q * row_src
        rs, rd = A[src], A[dst]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        if track:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] += q * us[j]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for r in A:
            if r[src]:
                r[dst] += q * r[src]
        if track:
            for r in V:
                if r[src]:
                    r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                # move the smallest leftover in row/column t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, ci, cj = min(cand)
                if ci != t:
                    swap_rows(t, ci)
                else:
                    swap_cols(t, cj)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            if track:
                U[t] = [-v for v in U[t]]
        t += 1
    return A, U, V


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U @ M @ V == D, U and V unimodular, D in Smith form."""
    m, n = M.shape
    A, U, V = _snf_dense(M.to_dense(), m, n, track=True)
    return IntMatrix.from_dense(U, m), IntMatrix.from_dense(A, n), IntMatrix.from_dense(V, n)


def _diagonal(A, m, n):
    out = []
    for t in range(min(m, n)):
        if A[t][t] == 0:
            break
        out.append(A[t][t])
    return out


# sparse elementary divisors ----------------------------------------------

def _eliminate_units(M: IntMatrix):
    """Sparse unit-pivot elimination.

    Returns (number of unit pivots eliminated, leftover rows as dicts).
    Each pivot is a +-1 entry; clearing its column with row operations and
    then its row with column operations leaves the rest untouched, so the
    pivot row and column can simply be dropped.
    """
    rows = {i: dict(r) for i, r in M.nonzero_rows()}
    cols: dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    pivots = 0
    progress = True
    while progress:
        progress = False
        order = sorted(cols, key=lambda c: (len(cols[c]), c))
        for c in order:
            col_rows = cols.get(c)
            if not col_rows:
                cols.pop(c, None)
                continue
            best = None
            for i in col_rows:
                v = rows[i][c]
                if v == 1 or v == -1:
                    if best is None or len(rows[i]) < len(rows[best]) or (
                            len(rows[i]) == len(rows[best]) and i < best):
                        best = i
            if best is None:
                continue
            prow = rows.pop(best)
            u = prow[c]
            for j in prow:
                cols[j].discard(best)
            for i in sorted(cols[c]):
                r = rows[i]
                f = r[c] * u
                for j, v in prow.items():
                    nv = r.get(j, 0) - f * v
                    if nv:
                        if j not in r:
                            cols[j].add(i)
                        r[j] = nv
                    elif j in r:
                        del r[j]
                        cols[j].discard(i)
                if not r:
                    del rows[i]
            del cols[c]
            pivots += 1
            progress = True
    return pivots, rows


def elementary_divisors(M: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form of M (length equals the rank)."""
    pivots, rows = _eliminate_units(M)
    if not rows:
        return [1] * pivots
    ridx = sorted(rows)
    cidx = sorted({j for r in rows.values() for j in r})
    cpos = {c: k for k, c in enumerate(cidx)}
    dense = [[0] * len(cidx) for _ in ridx]
    for a, i in enumerate(ridx):
        for j, v in rows[i].items():
            dense[a][cpos[j]] = v
    A, _, _ = _snf_dense(dense, len(ridx), len(cidx), track=False)
    return [1] * pivots + _diagonal(A, len(ridx), len(cidx))


def rank(M: IntMatrix) -> int:
    return len(elementary_divisors(M))


# lattices ------------------------------------------------------------------

def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a basis of the (saturated) integer kernel of M."""
    n = M.cols
    if M.is_selection_like():
        hit = {next(iter(r)) for _, r in M.nonzero_rows()}
        free = [j for j in range(n) if j not in hit]
        return IntMatrix.from_entries(n, len(free), ((j, k, 1) for k, j in enumerate(free)))
    if M.rows == 0 or M.is_zero():
        return IntMatrix.identity(n)
    _, D, V = smith_normal_form(M)
    r = len(_diagonal(D.to_dense(), M.rows, n))
    return V.submatrix(range(n), range(r, n))


def hermite_basis(gens: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the lattice spanned by the columns of ``gens``."""
    n = gens.rows
    vecs = [[gens.entry(i, j) for i in range(n)] for j in range(gens.cols)]
    vecs = [v for v in vecs if any(v)]
    basis = []
    col = 0
    while vecs and col < n:
        with_entry = [v for v in vecs if v[col]]
        rest = [v for v in vecs if not v[col]]
        while len(with_entry) > 1:
            with_entry.sort(key=lambda v: abs(v[col]))
            p = with_entry[0]
            nxt = [p]
            for v in with_entry[1:]:
                q = v[col] // p[col]
                w = [a - q * b for a, b in zip(v, p)]
                if w[col]:
                    nxt.append(w)
                elif any(w):
                    rest.append(w)
            with_entry = nxt
        if with_entry:
            basis.append(with_entry[0])
        vecs = rest
        col += 1
    return IntMatrix.from_entries(n, len(basis),
                                  ((i, k, v) for k, b in enumerate(basis) for i, v in enumerate(b) if v))


def solve_in_basis(basis: IntMatrix, targets: IntMatrix) -> IntMatrix:
    """Y with basis @ Y == targets; basis must have full column rank."""
    if basis.rows != targets.rows:
        raise ValueError("row mismatch")
    z = basis.cols
    if targets.cols == 0:
        return IntMatrix.zeros(z, 0)
    if z == 0:
        if not targets.is_zero():
            raise ValueError("target not in the span of an empty basis")
        return IntMatrix.zeros(0, targets.cols)
    coord = _coordinate_rows(basis)
    if coord is not None:
        out = {}
        for i, r in targets.nonzero_rows():
            if i not in coord:
                raise ValueError("target not in the span of the basis")
            out[coord[i]] = dict(r)
        return IntMatrix(z, targets.cols, out)
    U, D, V = smith_normal_form(basis)
    diag = _diagonal(D.to_dense(), basis.rows, z)
    if len(diag) != z:
        raise ValueError("basis is not of full column rank")
    UB = U @ targets
    W = {}
    for i, r in UB.nonzero_rows():
        if i >= z:
            raise ValueError("target not in the span of the basis")
        d = diag[i]
        row = {}
        for j, v in r.items():
            if v % d:
                raise ValueError("target not in the lattice spanned by the basis")
            row[j] = v // d
        W[i] = row
    return V @ IntMatrix(z, targets.cols, W)


def _coordinate_rows(basis: IntMatrix) -> dict | None:
    """If every column is a distinct standard basis vector, map row -> column."""
    out = {}
    seen = set()
    for i, r in basis.nonzero_rows():
        if len(r) != 1:
            return None
        (j, v), = r.items()
        if v != 1 or j in seen:
            return None
        seen.add(j)
        out[i] = j
    return out if len(out) == basis.cols else None


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
