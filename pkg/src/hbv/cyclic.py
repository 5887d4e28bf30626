"""Cyclic cohomology via the dual (b, B)-bicomplex, the long exact sequence
maps I, S and the connecting map, and the string bracket.

The total complex in degree n is the direct sum over k >= 0 of the
dual-coefficient Hochschild cochain spaces C^{n-2k}; the total differential
is the Hochschild differential on each column plus the rotation operator
mapping column k to column k+1.  Everything is assembled from the matrices
of the bar complex, so the mixed-complex identities guarantee that the total
differential squares to zero.

Truncation at N certifies degrees up to N-2: the top two total degrees see
a cut-off staircase.
"""

from __future__ import annotations

from .algebra import FDAlgebra, FrobeniusStructure
from .hochschild import (
    BarComplex,
    BVStructure,
    HHClass,
    HochschildCohomology,
    connes_b_dual,
    connes_b_dual_matrix,
)
from .linalg import Complex, Matrix, SparseMatrix, rank


class CyclicComplex:
    """The truncated total complex of the dual (b, B)-bicomplex."""

    def __init__(self, alg: FDAlgebra, max_degree: int, budget: int | None = None):
        self.alg = alg
        self.max_degree = max_degree
        self.certified = max_degree - 2
        self.bar = BarComplex(alg, "dual", max_degree, budget)
        f = alg.field
        self._b_matrices = {n: connes_b_dual_matrix(self.bar, n)
                            for n in range(max_degree + 2)}
        dims = {}
        for n in range(max_degree + 2):
            dims[n] = sum(self.bar.complex.dim(n - 2 * k)
                          for k in range(n // 2 + 1))
        diffs = {n: self._total_differential(n) for n in range(max_degree + 1)}
        self.complex = Complex(f, dims, diffs)

    # -- bookkeeping ----------------------------------------------------------

    def columns(self, n: int):
        """The (k, cochain degree, offset, dim) layout of total degree n."""
        out = []
        off = 0
        for k in range(n // 2 + 1):
            m = n - 2 * k
            d = self.bar.complex.dim(m)
            out.append((k, m, off, d))
            off += d
        return out

    def dim(self, n: int) -> int:
        return self.complex.dim(n)

    def _total_differential(self, n: int) -> SparseMatrix:
        """Rows of Tot^n -> Tot^{n+1}: block k' receives the Hochschild
        differential of column k' and the rotation image of column k'-1."""
        f = self.alg.field
        src_cols = self.columns(n)
        dst_cols = self.columns(n + 1)
        src_dim = sum(c[3] for c in src_cols)
        dst_dim = sum(c[3] for c in dst_cols)
        rows = [dict() for _ in range(dst_dim)]
        src_off = {k: off for (k, m, off, d) in src_cols}
        for (kd, md, offd, dd) in dst_cols:
            # Hochschild differential from source column kd (degree md - 1)
            if kd in src_off and md >= 1:
                dmat = self.bar.complex.differential(md - 1)
                o = src_off[kd]
                for r in range(dd):
                    for c, v in dmat.rows[r].items():
                        rows[offd + r][o + c] = v
            # rotation from source column kd - 1 (degree md + 1)
            if kd - 1 in src_off:
                bmat = self._b_matrices[md + 1]
                o = src_off[kd - 1]
                for r in range(dd):
                    for c, v in bmat.rows[r].items():
                        s = f.add(rows[offd + r].get(o + c, f.zero), v)
                        if f.is_zero(s):
                            rows[offd + r].pop(o + c, None)
                        else:
                            rows[offd + r][o + c] = s
        return SparseMatrix(f, dst_dim, src_dim, rows)

    # -- cohomology -------------------------------------------------------------

    def cohomology(self, n):
        return self.complex.cohomology_at(n)

    def cohomology_dim(self, n) -> int:
        return self.complex.cohomology_dim(n)

    def block(self, n: int, vec: dict, k: int) -> dict:
        """Extract column k of a total vector, in bar-complex coordinates."""
        for (kk, m, off, d) in self.columns(n):
            if kk == k:
                return {c - off: v for c, v in vec.items() if off <= c < off + d}
        return {}

    def embed(self, n: int, k: int, bar_vec: dict) -> dict:
        for (kk, m, off, d) in self.columns(n):
            if kk == k:
                return {off + c: v for c, v in bar_vec.items()}
        raise ValueError(f"total degree {n} has no column {k}")

    def shift(self, n: int, vec: dict) -> dict:
        """The column shift S : Tot^n -> Tot^{n+2} (image in column k+1)."""
        out = {}
        src = self.columns(n)
        dst = {k: off for (k, m, off, d) in self.columns(n + 2)}
        for (k, m, off, d) in src:
            o2 = dst[k + 1]
            for c, v in vec.items():
                if off <= c < off + d:
                    out[o2 + (c - off)] = v
        return out

    def unshift(self, n: int, vec: dict) -> dict:
        """Inverse of the shift: Tot^n (column 0 empty) -> Tot^{n-2}."""
        out = {}
        src = self.columns(n)
        dst = {k: off for (k, m, off, d) in self.columns(n - 2)}
        for (k, m, off, d) in src:
            chunk = {c - off: v for c, v in vec.items() if off <= c < off + d}
            if not chunk:
                continue
            if k == 0:
                raise ValueError("vector is not in the image of the shift")
            o2 = dst[k - 1]
            for c, v in chunk.items():
                out[o2 + c] = v
        return out


class HCClass:
    """A cyclic cohomology class: coordinates in the deterministic basis
    plus a representative total cocycle."""

    __slots__ = ("space", "degree", "coords", "representative")

    def __init__(self, space, degree, coords, representative):
        self.space = space
        self.degree = degree
        self.coords = coords
        self.representative = representative

    def is_zero(self):
        f = self.space.alg.field
        return all(f.is_zero(c) for c in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, HCClass)
            and self.degree == other.degree
            and self.coords == other.coords
        )

    def __repr__(self):
        return f"HCClass(degree {self.degree}, coords {self.coords})"


class CyclicCohomology:
    """HC^*(A) with the Connes sequence maps into the Hochschild machinery."""

    def __init__(self, alg: FDAlgebra, max_degree: int, budget: int | None = None):
        self.alg = alg
        self.max_degree = max_degree
        self.certified = max_degree - 2
        self.total = CyclicComplex(alg, max_degree, budget)
        self._classes: dict[int, list] = {}

    def dims(self, upto: int | None = None):
        upto = self.max_degree if upto is None else upto
        return [(n, self.total.cohomology_dim(n)) for n in range(upto + 1)]

    def dim(self, n: int) -> int:
        return self.total.cohomology_dim(n)

    def classes(self, n: int):
        if n < 0 or n > self.max_degree:
            return []
        if n not in self._classes:
            if self.dim(n) == 0:
                self._classes[n] = []
                return self._classes[n]
            data = self.total.cohomology(n)
            f = self.alg.field
            out = []
            for i, rep in enumerate(data.representatives):
                coords = [f.zero] * data.dim
                coords[i] = f.one
                out.append(HCClass(self, n, coords, dict(rep)))
            self._classes[n] = out
        return self._classes[n]

    def project(self, n: int, vec: dict) -> HCClass:
        if n < 0:
            return HCClass(self, n, [], dict(vec))
        data = self.total.cohomology(n)
        return HCClass(self, n, data.project(vec), dict(vec))

    def zero_class(self, n: int) -> HCClass:
        f = self.alg.field
        dim = self.total.cohomology(n).dim if 0 <= n <= self.max_degree else 0
        return HCClass(self, n, [f.zero] * dim, {})

    # -- the long exact sequence maps --------------------------------------------

    def to_hochschild(self, cls: HCClass, hh) -> HHClass:
        """I : HC^n -> HH^n(A; A-dual), projection to column zero."""
        bar_vec = self.total.block(cls.degree, cls.representative, 0)
        c = hh.bar.vec_to_cochain(cls.degree, bar_vec)
        return hh.project(c)

    def periodicity(self, cls: HCClass) -> HCClass:
        """S : HC^n -> HC^{n+2}, the column shift."""
        shifted = self.total.shift(cls.degree, cls.representative)
        return self.project(cls.degree + 2, shifted)

    def connecting(self, hh_cls: HHClass, hh) -> HCClass:
        """The connecting map HH^n(A; A-dual) -> HC^{n-1} by the zig-zag:
        lift to column zero, apply the total differential, unshift."""
        n = hh_cls.degree
        vec = hh.bar.cochain_to_vec(hh_cls.representative)
        lifted = self.total.embed(n, 0, vec)
        dtot = self.total.complex.differential(n).apply_sparse(lifted)
        # column 0 of the result is d(rep) = 0; the rest is S of the answer
        if self.total.block(n + 1, dtot, 0):
            raise ValueError("representative is not a cocycle")
        chi = self.total.unshift(n + 1, dtot)
        return self.project(n - 1, chi)


class ConnesSequenceReport:
    def __init__(self):
        self.checks = []

    def record(self, name, ok, witness=None):
        self.checks.append((name, bool(ok), witness))

    def all_ok(self):
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(n, w) for n, ok, w in self.checks if not ok]

    def __repr__(self):
        good = sum(1 for _, ok, _ in self.checks if ok)
        return f"ConnesSequenceReport({good}/{len(self.checks)} pass)"


def _map_matrix(field, images, target_dim):
    """Columns = coordinate images; as a dense Matrix."""
    m = Matrix(field, target_dim, len(images))
    for j, img in enumerate(images):
        for i, v in enumerate(img):
            m.data[i][j] = v
    return m


def connes_maps(alg: FDAlgebra, max_degree: int, budget: int | None = None,
                hc: CyclicCohomology | None = None, hh=None):
    """Matrices of I, S and the connecting map on cohomology at every
    certified degree, plus the exactness report (rank identities and
    vanishing composites) and the identity  I o (connecting) = rotation.
    """
    f = alg.field
    hc = hc or CyclicCohomology(alg, max_degree, budget)
    hh = hh or HochschildCohomology(alg, "dual", max_degree, budget)
    W = hc.certified
    report = ConnesSequenceReport()

    I_mats = {}
    S_mats = {}
    C_mats = {}
    rot_mats = {}
    for n in range(W + 1):
        I_mats[n] = _map_matrix(
            f, [hc.to_hochschild(x, hh).coords for x in hc.classes(n)], hh.dim(n)
        )
        if n + 2 <= W:
            S_mats[n] = _map_matrix(
                f, [hc.periodicity(x).coords for x in hc.classes(n)],
                hc.dim(n + 2),
            )
        if n >= 1:
            C_mats[n] = _map_matrix(
                f, [hc.connecting(x, hh).coords for x in hh.classes(n)],
                hc.dim(n - 1),
            )
            # rotation on cohomology, via the class-level operator
            rot_imgs = []
            for x in hh.classes(n):
                rot = connes_b_dual(x.representative)
                rot_imgs.append(hh.project(rot).coords)
            rot_mats[n] = _map_matrix(f, rot_imgs, hh.dim(n - 1))

    # I o connecting = rotation, as matrices on cohomology
    for n in range(1, W + 1):
        imgs = []
        for x in hh.classes(n):
            imgs.append(hc.to_hochschild(hc.connecting(x, hh), hh).coords)
        comp = _map_matrix(f, imgs, hh.dim(n - 1))
        report.record(
            f"I o connecting = rotation at degree {n}",
            comp == rot_mats[n],
            None if comp == rot_mats[n] else (n,),
        )

    # exactness:  HC^{n-2} -S-> HC^n -I-> HH^n -del-> HC^{n-1} -S-> HC^{n+1}
    for n in range(W + 1):
        # at HC^n: im S = ker I
        if n - 2 >= 0:
            comp = I_mats[n] * S_mats[n - 2]
            report.record(f"I o S = 0 at degree {n}", comp.is_zero())
            ok = rank(S_mats[n - 2]) + rank(I_mats[n]) == hc.dim(n)
            report.record(f"rank S + rank I = dim HC^{n}", ok)
        elif n in (0, 1):
            # sequence starts: I injective at the bottom edge
            report.record(
                f"I injective at degree {n}",
                rank(I_mats[n]) == hc.dim(n),
            )
        # at HH^n: im I = ker connecting
        if n >= 1:
            comp = C_mats[n] * I_mats[n]
            report.record(f"connecting o I = 0 at degree {n}", comp.is_zero())
            ok = rank(I_mats[n]) + rank(C_mats[n]) == hh.dim(n)
            report.record(f"rank I + rank connecting = dim HH^{n}", ok)
        # at HC^{n-1}: im connecting = ker S
        if n >= 1 and n + 1 <= W:
            comp = S_mats[n - 1] * C_mats[n]
            report.record(f"S o connecting = 0 at degree {n - 1}", comp.is_zero())
            ok = rank(C_mats[n]) + rank(S_mats[n - 1]) == hc.dim(n - 1)
            report.record(f"rank connecting + rank S = dim HC^{n - 1}", ok)
    return {
        "I": I_mats,
        "S": S_mats,
        "connecting": C_mats,
        "rotation": rot_mats,
        "report": report,
        "hc": hc,
        "hh": hh,
    }


class StringBracket:
    """The bracket {x, y} = +- connecting(I(x) u I(y)) on cyclic classes,
    with the cup computed in HH(A;A) through the Frobenius duality."""

    def __init__(self, alg: FDAlgebra, frob: FrobeniusStructure,
                 max_degree: int, budget: int | None = None):
        self.alg = alg
        self.frob = frob
        self.max_degree = max_degree
        self.hc = CyclicCohomology(alg, max_degree, budget)
        self.bv = BVStructure(alg, frob, max_degree, budget)
        self.pairing_shift = -(frob.degree or 0)  # d >= 0: pairing degree -d

    def certified(self):
        return self.hc.certified

    def bracket(self, x: HCClass, y: HCClass) -> HCClass:
        """{x, y} := (-1)^{|x| - d} connecting(I(x) u I(y)), the cup routed
        through HH(A;A) since dual-coefficient cochains cannot be cupped."""
        f = self.alg.field
        d = self.pairing_shift
        if x.degree + y.degree > self.hc.certified:
            raise ValueError("bracket exceeds the certified window")
        ix = self.hc.to_hochschild(x, self.bv.hh_dual)
        iy = self.hc.to_hochschild(y, self.bv.hh_dual)
        u = self.bv.duality(ix)
        v = self.bv.duality(iy)
        w = self.bv.cup_classes(u, v)
        back = self.bv.duality_inv(w)
        out = self.hc.connecting(back, self.bv.hh_dual)
        # total degree of x in the cyclic grading
        exp = (x.degree - d) % 2
        if exp:
            coords = [f.neg(c) for c in out.coords]
            return HCClass(self.hc, out.degree, coords,
                           {k: f.neg(vv) for k, vv in out.representative.items()})
        return out

    def morphism_check(self):
        """The map x -> D(I(x)) sends the string bracket to the Gerstenhaber
        bracket: {M(x), M(y)} = M({x, y}) on all certified pairs."""
        report = ConnesSequenceReport()
        W = self.certified()
        for nx in range(W + 1):
            for ny in range(W + 1 - nx):
                if nx + ny == 0:
                    continue
                for i, x in enumerate(self.hc.classes(nx)):
                    mx = self.bv.duality(self.hc.to_hochschild(x, self.bv.hh_dual))
                    for j, y in enumerate(self.hc.classes(ny)):
                        my = self.bv.duality(self.hc.to_hochschild(y, self.bv.hh_dual))
                        lhs = self.bv.bracket_classes(mx, my)
                        br = self.bracket(x, y)
                        rhs = (
                            self.bv.duality(
                                self.hc.to_hochschild(br, self.bv.hh_dual))
                            if br.degree >= 0
                            else self.bv.hh.zero_class(0)
                        )
                        ok = (lhs.coords == rhs.coords
                              if br.degree >= 0
                              else lhs.is_zero())
                        report.record(
                            f"morphism at ({nx},{ny}) basis ({i},{j})",
                            ok,
                            None if ok else (nx, ny, i, j, lhs.coords),
                        )
        return report

    def antisymmetry_jacobi_check(self):
        """Graded antisymmetry and Jacobi for the bracket of degree -1-d on
        certified basis classes."""
        f = self.alg.field
        d = self.pairing_shift
        report = ConnesSequenceReport()
        W = self.certified()

        def neg(coords):
            return [f.neg(c) for c in coords]

        for nx in range(W + 1):
            for ny in range(W + 1 - nx):
                if nx + ny == 0:
                    continue
                for i, x in enumerate(self.hc.classes(nx)):
                    for j, y in enumerate(self.hc.classes(ny)):
                        lhs = self.bracket(x, y)
                        rhs = self.bracket(y, x)
                        # bracket of degree -1-d: antisymmetry sign
                        exp = (nx - 1 - d) * (ny - 1 - d)
                        want = neg(rhs.coords) if exp % 2 == 0 else rhs.coords
                        report.record(
                            f"antisymmetry at ({nx},{ny}) basis ({i},{j})",
                            lhs.coords == want,
                            None if lhs.coords == want else (lhs.coords, rhs.coords),
                        )
        # Jacobi in Leibniz form on triples whose nested brackets stay in window
        for nx in range(W + 1):
            for ny in range(W + 1 - nx):
                for nz in range(W + 1 - nx - ny):
                    if nx + ny + nz < 2 * (1 + d):
                        continue
                    for x in self.hc.classes(nx):
                        for y in self.hc.classes(ny):
                            for z in self.hc.classes(nz):
                                inner = self.bracket(y, z)
                                if inner.degree < 0:
                                    continue
                                l = self.bracket(x, inner)
                                xy = self.bracket(x, y)
                                r1 = (self.bracket(xy, z)
                                      if xy.degree >= 0 else None)
                                xz = self.bracket(x, z)
                                r2 = (self.bracket(y, xz)
                                      if xz.degree >= 0 else None)
                                exp = (nx - 1 - d) * (ny - 1 - d)
                                f_ = self.alg.field
                                rc1 = r1.coords if r1 else [f_.zero] * len(l.coords)
                                rc2 = r2.coords if r2 else [f_.zero] * len(l.coords)
                                if exp % 2:
                                    rc2 = [f_.neg(c) for c in rc2]
                                rhs = [f_.add(a, b) for a, b in zip(rc1, rc2)]
                                report.record(
                                    f"jacobi at ({nx},{ny},{nz})",
                                    l.coords == rhs,
                                    None if l.coords == rhs else (l.coords, rhs),
                                )
        return report


def cyclic_cohomology(alg, max_degree, budget=None):
    """The (degree, dimension, basis) table of HC^*(A), certified to N-2."""
    hc = CyclicCohomology(alg, max_degree, budget)
    return [(n, hc.dim(n), hc.classes(n)) for n in range(max_degree + 1)]


def trace_space_dim(alg: FDAlgebra) -> int:
    """dim of the space of traces (functionals vanishing on commutators),
    the independent description of HC^0."""
    f = alg.field
    rows = []
    for i in range(alg.dim):
        for j in range(alg.dim):
            row = [f.zero] * alg.dim
            for k, c in alg.mul_basis(i, j).items():
                row[k] = f.add(row[k], c)
            for k, c in alg.mul_basis(j, i).items():
                row[k] = f.sub(row[k], c)
            rows.append(row)
    from .linalg import kernel_basis

    return len(kernel_basis(Matrix.from_rows(f, rows)))
