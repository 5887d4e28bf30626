"""Exact linear algebra kernel: dense matrices, echelon forms, sparse rank
engines, and cohomology of cochain complexes.

Two representations coexist.  ``Matrix`` is the dense row-major contract type
used by all small structural computations (pairings, antipodes, TQFT maps).
``SparseMatrix`` holds differentials of bar-type complexes, whose dimensions
at the top truncation degree rule out dense storage; rank and kernel engines
on it are exact over both Q and F_p.

Determinism: the dense ``rref`` eliminates with the leftmost-pivot /
topmost-row rule, and the sparse echelon reproduces the same (unique) reduced
form, so chosen kernel vectors and cohomology representatives are bit-stable.
The rank-only engine instead pivots on the largest column index, which is
empirically near fill-free on bar differentials; rank does not depend on the
pivot rule.
"""

from __future__ import annotations

from math import gcd

from .fields import RationalField


class LinalgError(ValueError):
    pass


class WindowError(LinalgError):
    """Degree outside a complex's stored window."""


# ---------------------------------------------------------------------------
# dense matrices


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field, nrows, ncols, data=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if data is None:
            z = field.zero
            self.data = [[z] * ncols for _ in range(nrows)]
        else:
            if len(data) != nrows or any(len(r) != ncols for r in data):
                raise LinalgError("matrix data shape mismatch")
            self.data = [list(r) for r in data]

    @classmethod
    def from_rows(cls, field, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(field, nrows, ncols, rows)

    @classmethod
    def identity(cls, field, n):
        m = cls(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def __setitem__(self, ij, v):
        self.data[ij[0]][ij[1]] = v

    def row(self, i):
        return list(self.data[i])

    def col(self, j):
        return [self.data[i][j] for i in range(self.nrows)]

    def copy(self):
        return Matrix(self.field, self.nrows, self.ncols, self.data)

    def transpose(self):
        return Matrix(
            self.field,
            self.ncols,
            self.nrows,
            [[self.data[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def is_zero(self):
        f = self.field
        return all(f.is_zero(v) for row in self.data for v in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.data == other.data
        )

    def __mul__(self, other):
        f = self.field
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise LinalgError("matrix product shape mismatch")
        out = Matrix(f, self.nrows, other.ncols)
        for i in range(self.nrows):
            ri = self.data[i]
            oi = out.data[i]
            for k in range(self.ncols):
                a = ri[k]
                if f.is_zero(a):
                    continue
                rk = other.data[k]
                for j in range(other.ncols):
                    b = rk[j]
                    if not f.is_zero(b):
                        oi[j] = f.add(oi[j], f.mul(a, b))
        return out

    def apply(self, vec):
        """Matrix times column vector (a list)."""
        f = self.field
        if len(vec) != self.ncols:
            raise LinalgError("vector length mismatch")
        out = []
        for i in range(self.nrows):
            s = f.zero
            ri = self.data[i]
            for j, v in enumerate(vec):
                if not f.is_zero(v) and not f.is_zero(ri[j]):
                    s = f.add(s, f.mul(ri[j], v))
            out.append(s)
        return out

    def __add__(self, other):
        f = self.field
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise LinalgError("matrix sum shape mismatch")
        return Matrix(
            f,
            self.nrows,
            self.ncols,
            [
                [f.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ],
        )

    def __sub__(self, other):
        f = self.field
        return self + other.scale(f.neg(f.one))

    def scale(self, c):
        f = self.field
        return Matrix(
            f, self.nrows, self.ncols, [[f.mul(c, v) for v in r] for r in self.data]
        )

    def __repr__(self):
        return f"Matrix({self.field}, {self.nrows}x{self.ncols})"


def rref(m: Matrix):
    """Reduced row echelon form.

    Returns ``(echelon, pivot_cols, rank)``.  Pivots are found leftmost
    column first, searching rows top to bottom, so the result is canonical.
    """
    f = m.field
    e = m.copy()
    pivots = []
    r = 0
    for c in range(e.ncols):
        sel = None
        for i in range(r, e.nrows):
            if not f.is_zero(e.data[i][c]):
                sel = i
                break
        if sel is None:
            continue
        if sel != r:
            e.data[r], e.data[sel] = e.data[sel], e.data[r]
        inv = f.inv(e.data[r][c])
        if inv != f.one:
            e.data[r] = [f.mul(inv, v) for v in e.data[r]]
        for i in range(e.nrows):
            if i == r:
                continue
            coef = e.data[i][c]
            if f.is_zero(coef):
                continue
            row_r = e.data[r]
            row_i = e.data[i]
            for j in range(c, e.ncols):
                if not f.is_zero(row_r[j]):
                    row_i[j] = f.sub(row_i[j], f.mul(coef, row_r[j]))
        pivots.append(c)
        r += 1
        if r == e.nrows:
            break
    return e, pivots, r


def rank(m: Matrix) -> int:
    return rref(m)[2]


def kernel_basis(m: Matrix):
    """Basis of the null space, one vector per free column, in increasing
    free-column order (deterministic)."""
    f = m.field
    e, pivots, _ = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    out = []
    for c in free:
        v = [f.zero] * m.ncols
        v[c] = f.one
        for r, pc in enumerate(pivots):
            coef = e.data[r][c]
            if not f.is_zero(coef):
                v[pc] = f.neg(coef)
        out.append(v)
    return out


def solve(m: Matrix, b):
    """One solution of ``m x = b`` or None.  Deterministic (free vars = 0)."""
    f = m.field
    aug = Matrix(
        f,
        m.nrows,
        m.ncols + 1,
        [list(m.data[i]) + [b[i]] for i in range(m.nrows)],
    )
    e, pivots, r = rref(aug)
    if m.ncols in pivots:
        return None
    x = [f.zero] * m.ncols
    for i, pc in enumerate(pivots):
        x[pc] = e.data[i][m.ncols]
    return x


def determinant(m: Matrix):
    """Determinant by fraction-free-ish elimination with row-swap tracking."""
    if m.nrows != m.ncols:
        raise LinalgError("determinant of non-square matrix")
    f = m.field
    e = m.copy()
    n = m.nrows
    det = f.one
    for c in range(n):
        sel = None
        for i in range(c, n):
            if not f.is_zero(e.data[i][c]):
                sel = i
                break
        if sel is None:
            return f.zero
        if sel != c:
            e.data[c], e.data[sel] = e.data[sel], e.data[c]
            det = f.neg(det)
        piv = e.data[c][c]
        det = f.mul(det, piv)
        inv = f.inv(piv)
        for i in range(c + 1, n):
            coef = f.mul(e.data[i][c], inv)
            if f.is_zero(coef):
                continue
            for j in range(c, n):
                e.data[i][j] = f.sub(e.data[i][j], f.mul(coef, e.data[c][j]))
    return det


def inverse(m: Matrix) -> Matrix:
    if m.nrows != m.ncols:
        raise LinalgError("inverse of non-square matrix")
    f = m.field
    n = m.nrows
    ident = Matrix.identity(f, n)
    aug = Matrix(f, n, 2 * n, [list(m.data[i]) + ident.data[i] for i in range(n)])
    e, pivots, r = rref(aug)
    if r < n or pivots != list(range(n)):
        raise LinalgError("matrix is singular")
    return Matrix(f, n, n, [row[n:] for row in e.data])


# ---------------------------------------------------------------------------
# sparse matrices


class SparseMatrix:
    """Row-sparse exact matrix: ``rows[i]`` maps column index -> nonzero scalar."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, nrows, ncols, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [dict() for _ in range(nrows)]

    @classmethod
    def from_matrix(cls, m: Matrix) -> "SparseMatrix":
        f = m.field
        rows = [
            {j: v for j, v in enumerate(r) if not f.is_zero(v)} for r in m.data
        ]
        return cls(f, m.nrows, m.ncols, rows)

    def to_matrix(self) -> Matrix:
        m = Matrix(self.field, self.nrows, self.ncols)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                m.data[i][j] = v
        return m

    def columns(self):
        """Column-oriented copy: list of dicts row -> value."""
        cols = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def apply_sparse(self, vec: dict, colview=None) -> dict:
        """self @ vec for a sparse column vector {index: value}."""
        f = self.field
        out: dict = {}
        if colview is None:
            colview = self.columns()
        for j, v in vec.items():
            for i, a in colview[j].items():
                s = f.add(out.get(i, f.zero), f.mul(a, v))
                if f.is_zero(s):
                    out.pop(i, None)
                else:
                    out[i] = s
        return out

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def __repr__(self):
        return f"SparseMatrix({self.field}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"


def _column_components(rows):
    """Split rows into groups by connected components of shared columns."""
    parent: dict[int, int] = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    for row in rows:
        it = iter(row)
        try:
            c0 = find(next(it))
        except StopIteration:
            continue
        for c in it:
            rc = find(c)
            if rc != c0:
                parent[rc] = c0
    comps: dict[int, list] = {}
    for row in rows:
        if not row:
            continue
        comps.setdefault(find(next(iter(row))), []).append(row)
    return [comps[k] for k in sorted(comps)]


def _rank_rows_f2(rows) -> int:
    """Rank over F_2 with bitset rows; pivot = highest set bit."""
    ech: dict[int, int] = {}
    rk = 0
    for r in rows:
        cur = 0
        for c, v in r.items():
            if v & 1:
                cur |= 1 << c
        while cur:
            p = cur.bit_length() - 1
            er = ech.get(p)
            if er is None:
                ech[p] = cur
                rk += 1
                break
            cur ^= er
    return rk


def _rank_rows_fp(rows, p) -> int:
    """Rank over F_p, dict rows, max-column pivot."""
    ech: dict[int, dict] = {}
    rk = 0
    for r in rows:
        cur = {c: v % p for c, v in r.items() if v % p}
        while cur:
            pc = max(cur)
            er = ech.get(pc)
            if er is None:
                inv = pow(cur[pc], -1, p)
                if inv != 1:
                    cur = {c: (v * inv) % p for c, v in cur.items()}
                ech[pc] = cur
                rk += 1
                break
            coef = cur.pop(pc)
            for c, v in er.items():
                if c == pc:
                    continue
                nv = (cur.get(c, 0) - coef * v) % p
                if nv:
                    cur[c] = nv
                else:
                    cur.pop(c, None)
    return rk


def _strip_content(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _rank_rows_q(rows) -> int:
    """Rank over Q.  Rows are scaled to content-free integer vectors; updates
    are fraction-free cross-multiplications, so no Fraction churn in the loop."""
    ech: dict[int, dict] = {}
    rk = 0
    for r in rows:
        dens = 1
        for v in r.values():
            d = v.denominator
            dens = dens * d // gcd(dens, d)
        cur = _strip_content(
            {c: int(v * dens) for c, v in r.items() if v}
        )
        while cur:
            pc = max(cur)
            er = ech.get(pc)
            if er is None:
                ech[pc] = cur
                rk += 1
                break
            a = cur.pop(pc)
            b = er[pc]
            new = {c: b * v for c, v in cur.items()}
            for c, v in er.items():
                if c == pc:
                    continue
                nv = new.get(c, 0) - a * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            cur = _strip_content(new)
    return rk


def sparse_rank(sm: SparseMatrix) -> int:
    """Exact rank; splits into column-connected components first."""
    f = sm.field
    total = 0
    for comp in _column_components(sm.rows):
        if isinstance(f, RationalField):
            total += _rank_rows_q(comp)
        elif f.char == 2:
            total += _rank_rows_f2(comp)
        else:
            total += _rank_rows_fp(comp, f.char)
    return total


def sparse_rref(sm: SparseMatrix):
    """Sparse reduced echelon: returns ``(pivot_rows, pivots)``.

    ``pivots`` is strictly increasing and ``pivot_rows[i]`` is the (unique)
    reduced row with leading 1 in column ``pivots[i]``, identical to the
    rows of the dense ``rref`` on the same matrix.
    """
    f = sm.field
    ech: dict[int, dict] = {}
    for r in sm.rows:
        cur = dict(r)
        while cur:
            pc = min(cur)
            er = ech.get(pc)
            if er is None:
                inv = f.inv(cur[pc])
                if inv != f.one:
                    cur = {c: f.mul(inv, v) for c, v in cur.items()}
                ech[pc] = cur
                break
            coef = cur.pop(pc)
            for c, v in er.items():
                if c == pc:
                    continue
                nv = f.sub(cur.get(c, f.zero), f.mul(coef, v))
                if f.is_zero(nv):
                    cur.pop(c, None)
                else:
                    cur[c] = nv
    pivots = sorted(ech)
    # back-eliminate pivot columns from earlier rows, right to left
    for pc in reversed(pivots):
        prow = ech[pc]
        for qc in pivots:
            if qc >= pc:
                break
            row = ech[qc]
            coef = row.get(pc)
            if coef is None:
                continue
            del row[pc]
            for c, v in prow.items():
                if c == pc:
                    continue
                nv = f.sub(row.get(c, f.zero), f.mul(coef, v))
                if f.is_zero(nv):
                    row.pop(c, None)
                else:
                    row[c] = nv
    return [ech[pc] for pc in pivots], pivots


def _maxcol_echelon(sm: SparseMatrix):
    """Forward echelon with pivot = largest column (fast on bar-type
    matrices); rows normalized to pivot 1, keyed by pivot column."""
    f = sm.field
    ech: dict[int, dict] = {}
    for r in sm.rows:
        cur = {c: v for c, v in r.items() if not f.is_zero(v)}
        while cur:
            pc = max(cur)
            er = ech.get(pc)
            if er is None:
                inv = f.inv(cur[pc])
                if inv != f.one:
                    cur = {c: f.mul(inv, v) for c, v in cur.items()}
                ech[pc] = cur
                break
            coef = cur.pop(pc)
            for c, v in er.items():
                if c == pc:
                    continue
                nv = f.sub(cur.get(c, f.zero), f.mul(coef, v))
                if f.is_zero(nv):
                    cur.pop(c, None)
                else:
                    cur[c] = nv
    return ech


def sparse_kernel_basis(sm: SparseMatrix):
    """Kernel basis as sparse dicts, one per free column in increasing order;
    identical vector-for-vector to ``kernel_basis`` on the dense form.

    The canonical (leftmost-pivot RREF) kernel basis is computed without the
    slow leftmost elimination: a fast max-column echelon parameterizes the
    kernel, and re-reducing the kernel vectors under the max-column rule
    yields the unique basis whose vectors carry 1 on their own free column
    and 0 on every other free column, which is exactly the RREF kernel basis.
    """
    f = sm.field
    ech = _maxcol_echelon(sm)
    pivot_set = set(ech)
    raw = []
    for c in range(sm.ncols):
        if c in pivot_set:
            continue
        vec = {c: f.one}
        # rows have support at columns <= pivot: solve in increasing order
        for pc in sorted(p for p in ech if p > c):
            row = ech[pc]
            s = f.zero
            for cc, v in row.items():
                if cc == pc:
                    continue
                x = vec.get(cc)
                if x is not None:
                    s = f.add(s, f.mul(v, x))
            if not f.is_zero(s):
                vec[pc] = f.neg(s)
        raw.append(vec)
    # canonicalize: fully reduced max-column echelon of the kernel space
    kech: dict[int, dict] = {}
    for vec in raw:
        cur = dict(vec)
        while cur:
            pc = max(cur)
            er = kech.get(pc)
            if er is None:
                inv = f.inv(cur[pc])
                if inv != f.one:
                    cur = {c: f.mul(inv, v) for c, v in cur.items()}
                kech[pc] = cur
                break
            coef = cur.pop(pc)
            for c, v in er.items():
                if c == pc:
                    continue
                nv = f.sub(cur.get(c, f.zero), f.mul(coef, v))
                if f.is_zero(nv):
                    cur.pop(c, None)
                else:
                    cur[c] = nv
    pivs = sorted(kech, reverse=True)
    for pc in pivs:
        prow = kech[pc]
        for qc in pivs:
            if qc <= pc:
                continue
            row = kech[qc]
            coef = row.get(pc)
            if coef is None:
                continue
            del row[pc]
            for c, v in prow.items():
                if c == pc:
                    continue
                nv = f.sub(row.get(c, f.zero), f.mul(coef, v))
                if f.is_zero(nv):
                    row.pop(c, None)
                else:
                    row[c] = nv
    return [kech[pc] for pc in sorted(kech)]


class EchelonStore:
    """Incremental echelon store over sparse vectors.

    Every stored row has its pivot at its minimal column and pivot value 1,
    and distinct rows have distinct pivots.  Reducing a vector in the span of
    the store therefore terminates at zero, which makes membership tests and
    coordinate extraction exact.  Rows may carry an integer tag; ``reduce``
    reports the coefficient used against each tagged row.
    """

    def __init__(self, field):
        self.field = field
        self.ech: dict[int, dict] = {}
        self.tags: dict[int, int] = {}

    def reduce(self, vec: dict, track: bool = False):
        f = self.field
        cur = dict(vec)
        coeffs: dict[int, object] = {}
        while cur:
            pc = min(cur)
            er = self.ech.get(pc)
            if er is None:
                break
            coef = cur.pop(pc)
            if track:
                tag = self.tags[pc]
                if tag >= 0:
                    coeffs[tag] = f.add(coeffs.get(tag, f.zero), coef)
            for c, v in er.items():
                if c == pc:
                    continue
                nv = f.sub(cur.get(c, f.zero), f.mul(coef, v))
                if f.is_zero(nv):
                    cur.pop(c, None)
                else:
                    cur[c] = nv
        return cur, coeffs

    def insert(self, vec: dict, tag: int = -1):
        """Reduce and, if independent of the store, add.  Returns the stored
        (reduced, normalized) row, or None if dependent."""
        f = self.field
        cur, _ = self.reduce(vec)
        if not cur:
            return None
        pc = min(cur)
        inv = f.inv(cur[pc])
        if inv != f.one:
            cur = {c: f.mul(inv, v) for c, v in cur.items()}
        self.ech[pc] = cur
        self.tags[pc] = tag
        return cur

    def contains(self, vec: dict) -> bool:
        residual, _ = self.reduce(vec)
        return not residual

    def __len__(self):
        return len(self.ech)


# ---------------------------------------------------------------------------
# graded spaces and complexes


class GradedVectorSpace:
    """Degree -> dimension table with optional basis labels per degree.
    Degrees outside the stored support are zero-dimensional."""

    def __init__(self, dims: dict, labels: dict | None = None):
        self.dims = {n: d for n, d in dims.items() if d}
        self.labels = labels or {}
        for n, d in self.dims.items():
            if d < 0:
                raise LinalgError(f"negative dimension at degree {n}")
            if n in self.labels and len(self.labels[n]) != d:
                raise LinalgError(f"label count mismatch at degree {n}")

    def dim(self, n) -> int:
        return self.dims.get(n, 0)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def support(self):
        return sorted(self.dims)

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self.dims == other.dims

    def __repr__(self):
        return f"GradedVectorSpace({self.dims})"


class CohomologyData:
    """Cohomology of a complex at one degree with a chosen basis.

    ``representatives`` are sparse cocycle vectors whose classes form the
    basis; ``project`` maps any cocycle to its coordinates in that basis,
    deciding equality of classes by coboundary membership, never by
    representative equality.
    """

    def __init__(self, field, representatives, store):
        self.field = field
        self.dim = len(representatives)
        self.representatives = representatives
        self._store = store

    def project(self, vec: dict):
        f = self.field
        residual, coeffs = self._store.reduce(vec, track=True)
        if residual:
            raise LinalgError("vector is not a cocycle modulo the image")
        return [coeffs.get(i, f.zero) for i in range(self.dim)]


class Complex:
    """A cochain complex on a closed degree window.

    ``dims[n]`` is the dimension of the degree-n term; ``diffs[n]`` the
    sparse matrix of d^n : C^n -> C^{n+1}.  Degrees outside the window are
    treated as zero.  ``d^{n+1} o d^n = 0`` is asserted at construction.
    """

    def __init__(self, field, dims: dict, diffs: dict, check: bool = True):
        self.field = field
        self.dims = dict(dims)
        self.diffs = dict(diffs)
        if not self.dims:
            raise LinalgError("empty complex")
        self.lo = min(self.dims)
        self.hi = max(self.dims)
        for n, d in self.diffs.items():
            if d.ncols != self.dims.get(n, 0) or d.nrows != self.dims.get(n + 1, 0):
                raise LinalgError(f"differential d^{n} shape mismatch")
        if check:
            self._check_square_zero()
        self._cohomology_cache: dict[int, CohomologyData] = {}
        self._rank_cache: dict[int, int] = {}

    def _check_square_zero(self):
        for n in sorted(self.diffs):
            d1 = self.diffs.get(n)
            d2 = self.diffs.get(n + 1)
            if d1 is None or d2 is None:
                continue
            colview = d2.columns()
            for j, col in enumerate(d1.columns()):
                if d2.apply_sparse(col, colview=colview):
                    raise LinalgError(f"d^{n + 1} o d^{n} != 0 at column {j}")

    def dim(self, n) -> int:
        return self.dims.get(n, 0)

    def differential(self, n) -> SparseMatrix:
        if n in self.diffs:
            return self.diffs[n]
        return SparseMatrix(self.field, self.dims.get(n + 1, 0), self.dims.get(n, 0))

    def rank_d(self, n) -> int:
        if n not in self._rank_cache:
            self._rank_cache[n] = (
                sparse_rank(self.diffs[n]) if n in self.diffs else 0
            )
        return self._rank_cache[n]

    def cohomology_dim(self, n) -> int:
        """dim H^n via ranks only (no representative machinery)."""
        if not (self.lo <= n <= self.hi):
            raise WindowError(f"degree {n} outside window [{self.lo}, {self.hi}]")
        return self.dims.get(n, 0) - self.rank_d(n) - self.rank_d(n - 1)

    def cohomology_at(self, n) -> CohomologyData:
        """Cohomology at degree n with deterministic representatives."""
        if not (self.lo <= n <= self.hi):
            raise WindowError(f"degree {n} outside window [{self.lo}, {self.hi}]")
        if n in self._cohomology_cache:
            return self._cohomology_cache[n]
        f = self.field
        if n in self.diffs:
            kernel = sparse_kernel_basis(self.diffs[n])
        else:
            kernel = [{i: f.one} for i in range(self.dims.get(n, 0))]
        store = EchelonStore(f)
        if n - 1 in self.diffs:
            for col in self.diffs[n - 1].columns():
                if col:
                    store.insert(col)
        reps = []
        for vec in kernel:
            stored = store.insert(vec, tag=len(reps))
            if stored is not None:
                reps.append(dict(stored))
        data = CohomologyData(f, reps, store)
        self._cohomology_cache[n] = data
        return data
