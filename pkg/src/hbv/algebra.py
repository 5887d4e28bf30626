"""Finite-dimensional graded algebras with optional Hopf data, Frobenius
pairings, integrals, and the group-algebra / exterior-algebra constructors.

Sign conventions (used verbatim everywhere downstream):

* product on a tensor square: ``(a (x) b) . (c (x) d) = (-1)^{|b||c|} ac (x) bd``;
* a pairing is *symmetric* in the graded sense: ``<a,b> = (-1)^{|a||b|} <b,a>``;
* exterior monomials are ordered by generator index, and the sign of a product
  is the parity of the degree-weighted interleaving permutation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field
from importlib import resources

from .fields import field_by_name
from .groups import FiniteGroup
from .linalg import Matrix, inverse, kernel_basis, LinalgError


class AlgebraError(ValueError):
    pass


class ModelError(AlgebraError):
    """A constructor was asked for a model outside its hypotheses."""


class PreconditionError(AlgebraError):
    """An operation's stated precondition fails on the given data."""


# ---------------------------------------------------------------------------
# core types


class FDAlgebra:
    """Unital associative algebra by structure constants.

    ``mult[(i, j)]`` maps basis index k to the coefficient of e_k in e_i e_j
    (absent keys are zero).  ``unit`` is the coefficient vector of 1.
    Associativity, the unit axioms, and degree additivity are asserted at
    construction.
    """

    def __init__(self, field, names, degrees, mult, unit, check=True):
        self.field = field
        self.names = list(names)
        self.degrees = list(degrees)
        self.dim = len(self.names)
        if len(self.degrees) != self.dim:
            raise AlgebraError("degrees/basis length mismatch")
        self.mult = {
            ij: {k: c for k, c in row.items() if not field.is_zero(c)}
            for ij, row in mult.items()
        }
        self.mult = {ij: row for ij, row in self.mult.items() if row}
        if len(unit) != self.dim:
            raise AlgebraError("unit vector length mismatch")
        self.unit = list(unit)
        self.unit_index = self._unit_as_basis_index()
        self.hopf: HopfData | None = None
        self.group: FiniteGroup | None = None
        if check:
            self._check_axioms()

    def _unit_as_basis_index(self):
        f = self.field
        idx = None
        for i, c in enumerate(self.unit):
            if f.is_zero(c):
                continue
            if idx is not None or c != f.one:
                return None
            idx = i
        return idx

    # -- basic arithmetic ---------------------------------------------------

    def mul_basis(self, i, j) -> dict:
        return self.mult.get((i, j), {})

    def mul_vec(self, u, v):
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(u):
            if f.is_zero(a):
                continue
            for j, b in enumerate(v):
                if f.is_zero(b):
                    continue
                ab = f.mul(a, b)
                for k, c in self.mul_basis(i, j).items():
                    out[k] = f.add(out[k], f.mul(ab, c))
        return out

    def left_mult_matrix(self, vec) -> Matrix:
        """Matrix of x -> vec . x."""
        f = self.field
        m = Matrix(f, self.dim, self.dim)
        for i, a in enumerate(vec):
            if f.is_zero(a):
                continue
            for j in range(self.dim):
                for k, c in self.mul_basis(i, j).items():
                    m.data[k][j] = f.add(m.data[k][j], f.mul(a, c))
        return m

    def right_mult_matrix(self, vec) -> Matrix:
        """Matrix of x -> x . vec."""
        f = self.field
        m = Matrix(f, self.dim, self.dim)
        for j, b in enumerate(vec):
            if f.is_zero(b):
                continue
            for i in range(self.dim):
                for k, c in self.mul_basis(i, j).items():
                    m.data[k][i] = f.add(m.data[k][i], f.mul(b, c))
        return m

    def basis_vector(self, i):
        f = self.field
        v = [f.zero] * self.dim
        v[i] = f.one
        return v

    # -- checks and invariants ----------------------------------------------

    def _check_axioms(self):
        f = self.field
        for (i, j), row in self.mult.items():
            di, dj = self.degrees[i], self.degrees[j]
            for k in row:
                if self.degrees[k] != di + dj:
                    raise AlgebraError(
                        f"product {self.names[i]}*{self.names[j]} breaks the grading"
                    )
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.mul_vec(self.unit, e) != e or self.mul_vec(e, self.unit) != e:
                raise AlgebraError(f"unit axiom fails at basis element {self.names[i]}")
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.mul_basis(i, j)
                for k in range(self.dim):
                    lhs = {}
                    for m, c in ij.items():
                        for l, c2 in self.mul_basis(m, k).items():
                            lhs[l] = f.add(lhs.get(l, f.zero), f.mul(c, c2))
                    rhs = {}
                    for m, c in self.mul_basis(j, k).items():
                        for l, c2 in self.mul_basis(i, m).items():
                            rhs[l] = f.add(rhs.get(l, f.zero), f.mul(c, c2))
                    keys = set(lhs) | set(rhs)
                    for l in keys:
                        if lhs.get(l, f.zero) != rhs.get(l, f.zero):
                            raise AlgebraError(
                                "associativity fails at "
                                f"({self.names[i]}, {self.names[j]}, {self.names[k]})"
                            )

    def is_commutative(self) -> bool:
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.mul_basis(i, j) != self.mul_basis(j, i):
                    return False
        return True

    def center_dim(self) -> int:
        """Dimension of {x : xz = zx for all z}, by one stacked linear solve."""
        f = self.field
        rows = []
        for h in range(self.dim):
            e = self.basis_vector(h)
            l = self.left_mult_matrix(e)
            r = self.right_mult_matrix(e)
            for a, b in zip(l.data, r.data):
                rows.append([f.sub(x, y) for x, y in zip(a, b)])
        return len(kernel_basis(Matrix.from_rows(f, rows)))

    def top_degree(self) -> int:
        return max(self.degrees)

    def is_graded(self) -> bool:
        return any(d != 0 for d in self.degrees)

    def graded_dims(self) -> dict:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def __repr__(self):
        return f"FDAlgebra(dim {self.dim} over {self.field})"


class HopfData:
    """Coproduct, counit and antipode for an FDAlgebra, verified on creation.

    ``coproduct[i]`` maps a pair (j, k) to the coefficient of e_j (x) e_k in
    the coproduct of e_i; ``counit`` is a coefficient vector; ``antipode`` is
    the matrix of S on the basis.
    """

    def __init__(self, alg: FDAlgebra, coproduct, counit, antipode: Matrix, check=True):
        self.alg = alg
        f = alg.field
        self.coproduct = {
            i: {jk: c for jk, c in row.items() if not f.is_zero(c)}
            for i, row in coproduct.items()
        }
        self.coproduct = {i: row for i, row in self.coproduct.items() if row}
        self.counit = list(counit)
        self.antipode = antipode
        if check:
            self._check_axioms()

    def coproduct_of_vec(self, vec) -> dict:
        f = self.alg.field
        out: dict = {}
        for i, a in enumerate(vec):
            if f.is_zero(a):
                continue
            for jk, c in self.coproduct.get(i, {}).items():
                s = f.add(out.get(jk, f.zero), f.mul(a, c))
                if f.is_zero(s):
                    out.pop(jk, None)
                else:
                    out[jk] = s
        return out

    def counit_of_vec(self, vec):
        f = self.alg.field
        s = f.zero
        for i, a in enumerate(vec):
            s = f.add(s, f.mul(a, self.counit[i]))
        return s

    def antipode_of_vec(self, vec):
        return self.antipode.apply(vec)

    def _tensor_mul(self, x: dict, y: dict) -> dict:
        """Product in A (x) A with the Koszul sign."""
        alg = self.alg
        f = alg.field
        out: dict = {}
        for (j1, k1), c1 in x.items():
            for (j2, k2), c2 in y.items():
                sign = (
                    f.neg(f.one)
                    if (alg.degrees[k1] * alg.degrees[j2]) % 2
                    else f.one
                )
                coef = f.mul(f.mul(c1, c2), sign)
                for j, cj in alg.mul_basis(j1, j2).items():
                    for k, ck in alg.mul_basis(k1, k2).items():
                        key = (j, k)
                        s = f.add(out.get(key, f.zero), f.mul(coef, f.mul(cj, ck)))
                        if f.is_zero(s):
                            out.pop(key, None)
                        else:
                            out[key] = s
        return out

    def _check_axioms(self):
        alg = self.alg
        f = alg.field
        dim = alg.dim
        # coproduct respects the grading
        for i, row in self.coproduct.items():
            for (j, k) in row:
                if alg.degrees[j] + alg.degrees[k] != alg.degrees[i]:
                    raise AlgebraError("coproduct breaks the grading")
        # coassociativity
        for i in range(dim):
            lhs: dict = {}
            rhs: dict = {}
            for (j, k), c in self.coproduct.get(i, {}).items():
                for (a, b), c2 in self.coproduct.get(j, {}).items():
                    key = (a, b, k)
                    lhs[key] = f.add(lhs.get(key, f.zero), f.mul(c, c2))
                for (a, b), c2 in self.coproduct.get(k, {}).items():
                    key = (j, a, b)
                    rhs[key] = f.add(rhs.get(key, f.zero), f.mul(c, c2))
            for key in set(lhs) | set(rhs):
                if lhs.get(key, f.zero) != rhs.get(key, f.zero):
                    raise AlgebraError(f"coassociativity fails at {alg.names[i]}")
        # counit axioms
        for i in range(dim):
            left = [f.zero] * dim
            right = [f.zero] * dim
            for (j, k), c in self.coproduct.get(i, {}).items():
                left[k] = f.add(left[k], f.mul(c, self.counit[j]))
                right[j] = f.add(right[j], f.mul(c, self.counit[k]))
            e = alg.basis_vector(i)
            if left != e or right != e:
                raise AlgebraError(f"counit axiom fails at {alg.names[i]}")
        # bialgebra: coproduct and counit are algebra maps, unit is grouplike
        unit_cop = self.coproduct_of_vec(alg.unit)
        unit_expected: dict = {}
        for i, a in enumerate(alg.unit):
            if f.is_zero(a):
                continue
            for j, b in enumerate(alg.unit):
                if not f.is_zero(b):
                    unit_expected[(i, j)] = f.mul(a, b)
        if unit_cop != unit_expected:
            raise AlgebraError("coproduct of the unit is not 1 (x) 1")
        for i in range(dim):
            for j in range(dim):
                prod_cop: dict = {}
                for k, c in alg.mul_basis(i, j).items():
                    for jk, c2 in self.coproduct.get(k, {}).items():
                        prod_cop[jk] = f.add(prod_cop.get(jk, f.zero), f.mul(c, c2))
                cop_prod = self._tensor_mul(
                    self.coproduct.get(i, {}), self.coproduct.get(j, {})
                )
                for key in set(prod_cop) | set(cop_prod):
                    if prod_cop.get(key, f.zero) != cop_prod.get(key, f.zero):
                        raise AlgebraError(
                            f"bialgebra compatibility fails at ({alg.names[i]}, {alg.names[j]})"
                        )
                eps_prod = f.zero
                for k, c in alg.mul_basis(i, j).items():
                    eps_prod = f.add(eps_prod, f.mul(c, self.counit[k]))
                if eps_prod != f.mul(self.counit[i], self.counit[j]):
                    raise AlgebraError("counit is not multiplicative")
        # antipode axiom, both sides
        for i in range(dim):
            left = [f.zero] * dim
            right = [f.zero] * dim
            for (j, k), c in self.coproduct.get(i, {}).items():
                sj = self.antipode.col(j)
                for a, ca in enumerate(sj):
                    if f.is_zero(ca):
                        continue
                    for l, cl in alg.mul_basis(a, k).items():
                        left[l] = f.add(left[l], f.mul(f.mul(c, ca), cl))
                sk = self.antipode.col(k)
                for b, cb in enumerate(sk):
                    if f.is_zero(cb):
                        continue
                    for l, cl in alg.mul_basis(j, b).items():
                        right[l] = f.add(right[l], f.mul(f.mul(c, cb), cl))
            target = [f.mul(self.counit[i], u) for u in alg.unit]
            if left != target or right != target:
                raise AlgebraError(f"antipode axiom fails at {alg.names[i]}")


@dataclass
class FrobeniusReport:
    nondegenerate: bool
    frobenius_identity: bool
    symmetric: bool
    degree: int | None
    failures: list = dataclass_field(default_factory=list)

    def all_ok(self) -> bool:
        return self.nondegenerate and self.frobenius_identity and self.symmetric


class FrobeniusStructure:
    """A bilinear pairing on an algebra with its verification report.

    ``degree`` is the lower degree of the pairing (-d for the homology of a
    Lie-group model, 0 in the ungraded case).  Flags live in ``report`` and
    are recomputed from the pairing matrix, never stored blindly.
    """

    def __init__(self, alg: FDAlgebra, pairing: Matrix):
        self.alg = alg
        self.pairing = pairing
        self.report = verify_frobenius(alg, pairing)
        self.degree = self.report.degree

    @property
    def symmetric(self):
        return self.report.symmetric

    @property
    def nondegenerate(self):
        return self.report.nondegenerate

    def lambda_matrix(self) -> Matrix:
        """Matrix of a -> <a, -> : A -> A-dual (rows index dual basis)."""
        return self.pairing.transpose()

    def value(self, u, v):
        f = self.alg.field
        s = f.zero
        for i, a in enumerate(u):
            if f.is_zero(a):
                continue
            for j, b in enumerate(v):
                if not f.is_zero(b):
                    s = f.add(s, f.mul(f.mul(a, b), self.pairing.data[i][j]))
        return s


def verify_frobenius(alg: FDAlgebra, pairing: Matrix) -> FrobeniusReport:
    """Check nondegeneracy, the Frobenius identity <a,bc> = <ab,c>, and
    graded symmetry, by exhaustive basis checks.  Failures carry witnesses."""
    f = alg.field
    if pairing.nrows != alg.dim or pairing.ncols != alg.dim:
        raise PreconditionError("pairing dimensions do not match the algebra")
    failures = []
    # homogeneity and pairing degree
    degree = None
    homogeneous = True
    for i in range(alg.dim):
        for j in range(alg.dim):
            if f.is_zero(pairing.data[i][j]):
                continue
            s = alg.degrees[i] + alg.degrees[j]
            if degree is None:
                degree = -s
            elif degree != -s:
                homogeneous = False
    if degree is None:
        degree = 0
    if not homogeneous:
        failures.append(("inhomogeneous-pairing",))
        degree = None
    try:
        inverse(pairing)
        nondeg = True
    except LinalgError:
        nondeg = False
        failures.append(("degenerate",))
    frob = True
    for a in range(alg.dim):
        for b in range(alg.dim):
            for c in range(alg.dim):
                lhs = f.zero
                for k, cc in alg.mul_basis(b, c).items():
                    lhs = f.add(lhs, f.mul(cc, pairing.data[a][k]))
                rhs = f.zero
                for k, cc in alg.mul_basis(a, b).items():
                    rhs = f.add(rhs, f.mul(cc, pairing.data[k][c]))
                if lhs != rhs:
                    frob = False
                    if len(failures) < 20:
                        failures.append(
                            ("frobenius", alg.names[a], alg.names[b], alg.names[c])
                        )
    sym = True
    for i in range(alg.dim):
        for j in range(alg.dim):
            sign = (
                f.neg(f.one)
                if (alg.degrees[i] * alg.degrees[j]) % 2
                else f.one
            )
            if pairing.data[i][j] != f.mul(sign, pairing.data[j][i]):
                sym = False
                if len(failures) < 20:
                    failures.append(("symmetry", alg.names[i], alg.names[j]))
    return FrobeniusReport(nondeg, frob, sym, degree, failures)


# ---------------------------------------------------------------------------
# constructors


def group_algebra(g: FiniteGroup, field) -> FDAlgebra:
    """The group algebra F[G] with its standard Hopf structure:
    the coproduct is diagonal, the antipode is the inverse map."""
    f = field
    dim = g.order
    mult = {(i, j): {g.table[i][j]: f.one} for i in range(dim) for j in range(dim)}
    unit = [f.zero] * dim
    unit[g.identity] = f.one
    alg = FDAlgebra(f, g.names, [0] * dim, mult, unit)
    antipode = Matrix(f, dim, dim)
    for j in range(dim):
        antipode.data[g.inv[j]][j] = f.one
    alg.hopf = HopfData(
        alg,
        {i: {(i, i): f.one} for i in range(dim)},
        [f.one] * dim,
        antipode,
    )
    alg.group = g
    return alg


def _exterior_names(degrees):
    names = []
    seen: dict[int, int] = {}
    for d in degrees:
        n = seen.get(d, 0)
        seen[d] = n + 1
        names.append(f"x{d}" + ("" if n == 0 else chr(ord("b") + n - 1)))
    return names


def exterior_algebra(gen_degrees, field) -> FDAlgebra:
    """The exterior algebra on odd-degree generators, as a primitively
    generated Hopf algebra: the model of H_*(G;Q) for a compact connected
    Lie group.  Characteristic 2 and even degrees are rejected."""
    f = field
    if f.char == 2:
        raise ModelError("exterior model unsupported in characteristic 2")
    if not gen_degrees or any(d <= 0 or d % 2 == 0 for d in gen_degrees):
        raise ModelError("exterior generators must have odd positive degree")
    k = len(gen_degrees)
    gen_names = _exterior_names(gen_degrees)
    subsets = []
    for mask in range(1 << k):
        subsets.append(tuple(i for i in range(k) if mask >> i & 1))
    subsets.sort(key=lambda s: (sum(gen_degrees[i] for i in s), s))
    index = {s: n for n, s in enumerate(subsets)}
    names = ["1" if not s else "".join(gen_names[i] for i in s) for s in subsets]
    degrees = [sum(gen_degrees[i] for i in s) for s in subsets]

    def merge(s, t):
        """(sign, union) of the ordered product x_s . x_t, or None."""
        if set(s) & set(t):
            return None
        inversions = sum(1 for i in s for j in t if i > j)
        # all generator degrees are odd, so each swap contributes -1
        sign = f.neg(f.one) if inversions % 2 else f.one
        return sign, tuple(sorted(s + t))

    mult = {}
    for s in subsets:
        for t in subsets:
            st = merge(s, t)
            if st is not None:
                sign, u = st
                mult[(index[s], index[t])] = {index[u]: sign}
    unit = [f.zero] * len(subsets)
    unit[index[()]] = f.one
    alg = FDAlgebra(f, names, degrees, mult, unit)

    # primitive coproduct, extended multiplicatively with Koszul signs
    coproduct = {}
    for s in subsets:
        terms = {((), ()): f.one}
        for i in s:
            new: dict = {}
            for (u, v), c in terms.items():
                # (x_u (x) x_v) . (x_i (x) 1) and . (1 (x) x_i)
                left = merge(u, (i,))
                if left is not None:
                    sgn, w = left
                    key = (w, v)
                    # x_i passes x_v
                    if (gen_degrees[i] * sum(gen_degrees[j] for j in v)) % 2:
                        sgn = f.neg(sgn)
                    new[key] = f.add(new.get(key, f.zero), f.mul(c, sgn))
                right = merge(v, (i,))
                if right is not None:
                    sgn, w = right
                    key = (u, w)
                    new[key] = f.add(new.get(key, f.zero), f.mul(c, sgn))
            terms = {kv: c for kv, c in new.items() if not f.is_zero(c)}
        coproduct[index[s]] = {
            (index[u], index[v]): c for (u, v), c in terms.items()
        }
    counit = [f.one if not s else f.zero for s in subsets]
    # antipode of a connected graded Hopf algebra, by the standard recursion
    antipode = _connected_antipode(alg, coproduct, counit)
    alg.hopf = HopfData(alg, coproduct, counit, antipode)
    return alg


def _connected_antipode(alg: FDAlgebra, coproduct, counit) -> Matrix:
    """S(1) = 1 and S(a) = -a - sum S(a') a'' over the reduced coproduct,
    solved degree by degree (requires the unit to be a basis element)."""
    f = alg.field
    dim = alg.dim
    u = alg.unit_index
    if u is None:
        raise ModelError("connected antipode needs the unit as a basis element")
    S = Matrix(f, dim, dim)
    order = sorted(range(dim), key=lambda i: (alg.degrees[i], i))
    for i in order:
        if i == u:
            S.data[u][u] = f.one
            continue
        acc = [f.zero] * dim
        for (j, k), c in coproduct.get(i, {}).items():
            if j == u or k == u:
                continue
            sj = S.col(j)
            for a, ca in enumerate(sj):
                if f.is_zero(ca):
                    continue
                for l, cl in alg.mul_basis(a, k).items():
                    acc[l] = f.add(acc[l], f.mul(f.mul(c, ca), cl))
        for l in range(dim):
            S.data[l][i] = f.neg(f.add(acc[l], f.one if l == i else f.zero))
    return S


# ---------------------------------------------------------------------------
# integrals and Frobenius forms


def find_integrals(alg: FDAlgebra):
    """Bases of the left and right integral spaces and the unimodular flag.

    A left integral satisfies h.l = eps(h) l for every h; unimodular means a
    nonzero two-sided integral exists.
    """
    if alg.hopf is None:
        raise PreconditionError("find_integrals requires Hopf data")
    f = alg.field
    eps = alg.hopf.counit
    left_rows = []
    right_rows = []
    for h in range(alg.dim):
        e = alg.basis_vector(h)
        l = alg.left_mult_matrix(e)
        r = alg.right_mult_matrix(e)
        for i in range(alg.dim):
            lrow = list(l.data[i])
            rrow = list(r.data[i])
            lrow[i] = f.sub(lrow[i], eps[h])
            rrow[i] = f.sub(rrow[i], eps[h])
            left_rows.append(lrow)
            right_rows.append(rrow)
    left = kernel_basis(Matrix.from_rows(f, left_rows))
    right = kernel_basis(Matrix.from_rows(f, right_rows))
    both = kernel_basis(Matrix.from_rows(f, left_rows + right_rows))
    return left, right, len(both) > 0


def dual_left_integrals(alg: FDAlgebra):
    """Basis of left integrals of the dual Hopf algebra, i.e. functionals
    lam with phi * lam = phi(1) lam for all phi (convolution product)."""
    if alg.hopf is None:
        raise PreconditionError("dual integrals require Hopf data")
    f = alg.field
    cop = alg.hopf.coproduct
    rows = []
    for i in range(alg.dim):
        for h in range(alg.dim):
            row = [f.zero] * alg.dim
            for (j, k), c in cop.get(h, {}).items():
                if j == i:
                    row[k] = f.add(row[k], c)
            row[h] = f.sub(row[h], alg.unit[i])
            rows.append(row)
    return kernel_basis(Matrix.from_rows(f, rows))


def is_dual_left_integral(alg: FDAlgebra, lam) -> bool:
    f = alg.field
    cop = alg.hopf.coproduct
    for i in range(alg.dim):
        for h in range(alg.dim):
            s = f.zero
            for (j, k), c in cop.get(h, {}).items():
                if j == i:
                    s = f.add(s, f.mul(c, lam[k]))
            if s != f.mul(alg.unit[i], lam[h]):
                return False
    return True


def is_invertible_element(alg: FDAlgebra, u) -> bool:
    try:
        inverse(alg.left_mult_matrix(u))
        return True
    except LinalgError:
        return False


def s_square_conjugator(alg: FDAlgebra):
    """A deterministic invertible u with S^2(h) = u h u^{-1} for all h, or None.

    Solves the linear system S^2(e_i) u = u e_i, then sweeps the solution
    space: basis vectors first, then prefix sums; the first invertible
    element wins.
    """
    if alg.hopf is None:
        raise PreconditionError("conjugator search requires Hopf data")
    f = alg.field
    S2 = alg.hopf.antipode * alg.hopf.antipode
    rows = []
    for i in range(alg.dim):
        s2i = S2.col(i)
        l = alg.left_mult_matrix(s2i)          # u -> S2(e_i) u
        r = alg.right_mult_matrix(alg.basis_vector(i))  # u -> u e_i
        for a, b in zip(l.data, r.data):
            rows.append([f.sub(x, y) for x, y in zip(a, b)])
    space = kernel_basis(Matrix.from_rows(f, rows))
    candidates = list(space)
    acc = None
    for v in space:
        acc = v if acc is None else [f.add(a, b) for a, b in zip(acc, v)]
        candidates.append(list(acc))
    for u in candidates:
        if is_invertible_element(alg, u):
            return u
    return None


def frobenius_from_integral(alg: FDAlgebra, lam, u) -> FrobeniusStructure:
    """The bilinear form beta(h, k) = lam(h k u) built from a left integral
    lam of the dual and an invertible u conjugating to S^2."""
    if alg.hopf is None:
        raise PreconditionError("frobenius_from_integral requires Hopf data")
    f = alg.field
    if not is_dual_left_integral(alg, lam):
        raise PreconditionError("lam is not a left integral of the dual Hopf algebra")
    if not is_invertible_element(alg, u):
        raise PreconditionError("u is not invertible")
    S2 = alg.hopf.antipode * alg.hopf.antipode
    ru = alg.right_mult_matrix(u)
    lu = alg.left_mult_matrix(u)
    for i in range(alg.dim):
        lhs = ru.apply(S2.col(i))
        rhs = lu.col(i)
        if lhs != rhs:
            raise PreconditionError(
                f"u does not conjugate S^2 at basis element {alg.names[i]}"
            )
    pairing = Matrix(f, alg.dim, alg.dim)
    for i in range(alg.dim):
        for j in range(alg.dim):
            vec = [f.zero] * alg.dim
            for k, c in alg.mul_basis(i, j).items():
                vec[k] = c
            vec = alg.mul_vec(vec, u)
            s = f.zero
            for k, c in enumerate(vec):
                s = f.add(s, f.mul(c, lam[k]))
            pairing.data[i][j] = s
    return FrobeniusStructure(alg, pairing)


def lambda_L(alg: FDAlgebra) -> Matrix:
    """The bimodule isomorphism F[G] -> F[G]-dual sending g to the dual
    functional of g^{-1}; verified on all basis triples."""
    if alg.group is None:
        raise PreconditionError("lambda_L is defined for group algebras")
    f = alg.field
    g = alg.group
    lam = Matrix(f, alg.dim, alg.dim)
    for j in range(alg.dim):
        lam.data[g.inv[j]][j] = f.one
    # bimodule identity on all basis triples: lam(x a y) = x . lam(a) . y,
    # with the dual actions (x.phi.y)(z) = phi(y z x)
    for x in range(alg.dim):
        for a in range(alg.dim):
            phi = lam.col(a)
            for y in range(alg.dim):
                xay = g.table[g.table[x][a]][y]
                lhs = lam.col(xay)
                rhs = [phi[g.table[g.table[y][z]][x]] for z in range(alg.dim)]
                if lhs != rhs:
                    raise AlgebraError("lambda_L bimodule identity fails")
    return lam


def group_frobenius(alg: FDAlgebra) -> FrobeniusStructure:
    """The symmetric Frobenius structure of a group algebra:
    <g, h> = 1 iff gh = 1 (i.e. beta from lam = delta_1, u = 1)."""
    if alg.group is None:
        raise PreconditionError("group_frobenius is defined for group algebras")
    f = alg.field
    g = alg.group
    pairing = Matrix(f, alg.dim, alg.dim)
    for i in range(alg.dim):
        pairing.data[i][g.inv[i]] = f.one
    return FrobeniusStructure(alg, pairing)


def lie_pairing(alg: FDAlgebra) -> FrobeniusStructure:
    """The pairing <a, b> = eta(a b) on a connected graded Hopf algebra with
    one-dimensional top degree, where eta is the dual functional of the
    first top-degree basis monomial.  Yields a symmetric Frobenius structure
    of lower degree -d."""
    if alg.hopf is None:
        raise PreconditionError("lie_pairing requires Hopf data")
    f = alg.field
    d = alg.top_degree()
    top = [i for i in range(alg.dim) if alg.degrees[i] == d]
    if len(top) != 1:
        raise ModelError(
            f"top degree {d} is {len(top)}-dimensional; the pairing needs dimension 1"
        )
    if alg.unit_index is None or alg.degrees[alg.unit_index] != 0:
        raise ModelError("algebra is not connected with basis unit")
    zero_deg = [i for i in range(alg.dim) if alg.degrees[i] == 0]
    if len(zero_deg) != 1:
        raise ModelError("algebra is not connected (degree 0 is not one-dimensional)")
    t = top[0]
    pairing = Matrix(f, alg.dim, alg.dim)
    for i in range(alg.dim):
        for j in range(alg.dim):
            pairing.data[i][j] = alg.mul_basis(i, j).get(t, f.zero)
    return FrobeniusStructure(alg, pairing)


def matrix_algebra(n, field) -> FDAlgebra:
    """The matrix algebra M_n with basis E_ab (unit = sum of the diagonal)."""
    f = field
    names = [f"E{a + 1}{b + 1}" for a in range(n) for b in range(n)]
    idx = {(a, b): a * n + b for a in range(n) for b in range(n)}
    mult = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if b == c:
                        mult[(idx[(a, b)], idx[(c, d)])] = {idx[(a, d)]: f.one}
    unit = [f.zero] * (n * n)
    for a in range(n):
        unit[idx[(a, a)]] = f.one
    return FDAlgebra(f, names, [0] * (n * n), mult, unit)


def trace_pairing(alg: FDAlgebra, n) -> Matrix:
    """<A, B> = tr(AB) on matrix_algebra(n)."""
    f = alg.field
    pairing = Matrix(f, alg.dim, alg.dim)
    for i in range(alg.dim):
        for j in range(alg.dim):
            prod = alg.mul_basis(i, j)
            s = f.zero
            for a in range(n):
                s = f.add(s, prod.get(a * n + a, f.zero))
            pairing.data[i][j] = s
    return pairing


# ---------------------------------------------------------------------------
# serialization


def algebra_to_json(alg: FDAlgebra) -> dict:
    f = alg.field
    obj = {
        "field": {"type": "Q"} if f.char == 0 else {"type": "Fp", "p": f.char},
        "basis": [
            {"name": n, "degree": d} for n, d in zip(alg.names, alg.degrees)
        ],
        "unit": [f.fmt(c) for c in alg.unit],
        "mult": [
            [i, j, k, f.fmt(c)]
            for (i, j), row in sorted(alg.mult.items())
            for k, c in sorted(row.items())
        ],
    }
    if alg.hopf is not None:
        h = alg.hopf
        obj["coproduct"] = [
            [i, j, k, f.fmt(c)]
            for i, row in sorted(h.coproduct.items())
            for (j, k), c in sorted(row.items())
        ]
        obj["counit"] = [f.fmt(c) for c in h.counit]
        obj["antipode"] = [[f.fmt(v) for v in row] for row in h.antipode.data]
    return obj


def algebra_from_json(obj: dict) -> FDAlgebra:
    ftag = obj["field"]
    if ftag.get("type") == "Q":
        f = field_by_name("Q")
    elif ftag.get("type") == "Fp":
        f = field_by_name(f"F{ftag['p']}")
    else:
        raise AlgebraError(f"unknown field tag {ftag!r}")
    names = [b["name"] for b in obj["basis"]]
    degrees = [int(b.get("degree", 0)) for b in obj["basis"]]
    mult: dict = {}
    for i, j, k, c in obj["mult"]:
        mult.setdefault((i, j), {})[k] = f.parse(c)
    unit = [f.parse(c) for c in obj["unit"]]
    alg = FDAlgebra(f, names, degrees, mult, unit)
    if "coproduct" in obj:
        cop: dict = {}
        for i, j, k, c in obj["coproduct"]:
            cop.setdefault(i, {})[(j, k)] = f.parse(c)
        counit = [f.parse(c) for c in obj["counit"]]
        antipode = Matrix(
            f,
            alg.dim,
            alg.dim,
            [[f.parse(v) for v in row] for row in obj["antipode"]],
        )
        alg.hopf = HopfData(alg, cop, counit, antipode)
    return alg


def load_algebra(path) -> FDAlgebra:
    with open(path) as fh:
        return algebra_from_json(json.load(fh))


def sweedler_algebra() -> FDAlgebra:
    """The packaged 4-dimensional Hopf algebra with distinct left and right
    integral spaces (so not unimodular, hence no symmetric Frobenius form)."""
    data = resources.files("hbv").joinpath("data/sweedler4.json").read_text()
    return algebra_from_json(json.loads(data))
