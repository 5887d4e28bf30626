"""Normalized Hochschild cochain complexes, the cup product and Gerstenhaber
bracket, the dual Connes rotation operator, Frobenius duality, and the BV
operator.

Complexes.  With Abar = A / F.1, the self-coefficient complex is
C^n(A; A) = Hom(Abar^{(x)n}, A); the dual-coefficient complex is realized as
the linear dual of the normalized chain complex A (x) Abar^{(x)n}, under
Hom(Abar^{(x)n}, A-dual) = (A (x) Abar^{(x)n})-dual.  Its differential and
rotation operator are literal transposes of the chain-level operators, so
d^2 = 0, B^2 = 0 and dB + Bd = 0 are inherited and not re-derived.

Sign conventions (pinned once; every sign is a simplicial factor times a
Koszul factor on internal degrees, and the whole package of identities (d^2 = 0 on both coefficient complexes, rotation square zero and
anticommutation, cup Leibniz, graded cup commutativity in cohomology, the
pre-Lie relation, and the seven-term BV identity) is what fixes it, as
validated by the test suite on ungraded group algebras and graded exterior
models simultaneously):

* chain differential
    b(a_0[a_1|..|a_n]) = (a_0 a_1)[a_2|..]
                       + sum_{0<i<n} (-1)^i a_0[..|a_i a_{i+1}|..]
                       + (-1)^{n + |a_n| (|a_0|+..+|a_{n-1}|)} (a_n a_0)[a_1|..];
* chain rotation (normalized Connes boundary)
    B(a_0[a_1|..|a_n]) = sum_j (-1)^{n j + d(pre_j) d(post_j)}
                         1[a_j|..|a_n|a_0|..|a_{j-1}],
  the Koszul factor pairing the internal degrees of the two rotated blocks;
* self differential, for f of internal degree t (f raises degree by t),
    (d f)(a_1..a_{n+1}) = (-1)^{|a_1| t} a_1 f(a_2..a_{n+1})
                        + sum_i (-1)^i f(.., a_i a_{i+1}, ..)
                        + (-1)^{n+1} f(a_1..a_n) a_{n+1};
* cup product: (f u g)(a_1..a_{p+q}) = +- f(a_1..a_p) g(a_{p+1}..a_{p+q})
  with the sign (-1)^{t(g) |f-inputs|} (mixed-coefficient value actions
  carry their own Koszul exponents, pinned by the Leibniz rule; see cup);
* circle product: insertion of g at 0-based slot i with sign (-1)^{(q-1) i},
  and [f, g] = f o g - (-1)^{(p-1)(q-1) + t(f) t(g)} g o f;
* in cohomology, f u g = (-1)^{p q + t(f) t(g)} g u f.

Everything reduces to the classical textbook formulas when all degrees
vanish.
"""

from __future__ import annotations

import os
from itertools import product

from .algebra import FDAlgebra, FrobeniusStructure, PreconditionError
from .groups import FiniteGroup
from .linalg import Complex, Matrix, SparseMatrix, inverse

DEFAULT_BUDGET = 20000


class BudgetError(ValueError):
    """A requested complex exceeds the configured dimension cap."""


class CoefficientError(ValueError):
    """Operation not defined for this coefficient bimodule."""


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("HBV_BUDGET")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise BudgetError(f"HBV_BUDGET must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# cochains


class Cochain:
    """A normalized Hochschild cochain stored as a sparse table.

    ``table`` maps ``(tuple_of_basis_indices, value_index)`` to a scalar.
    For self coefficients the entry is the coefficient of basis element
    ``value`` in f(tuple); for dual coefficients it is the evaluation
    f(tuple)(e_value).  Tuple entries range over non-unit basis indices.
    """

    __slots__ = ("alg", "coeff", "degree", "table")

    def __init__(self, alg: FDAlgebra, coeff: str, degree: int, table: dict):
        if coeff not in ("self", "dual"):
            raise CoefficientError(f"unknown coefficient tag {coeff!r}")
        self.alg = alg
        self.coeff = coeff
        self.degree = degree
        f = alg.field
        self.table = {k: v for k, v in table.items() if not f.is_zero(v)}

    def is_zero(self) -> bool:
        return not self.table

    def internal_degree(self) -> int:
        """The common internal degree t of all entries (asserted homogeneous)."""
        alg = self.alg
        t = None
        for (tup, v), _ in self.table.items():
            dv = -alg.degrees[v] if self.coeff == "dual" else alg.degrees[v]
            here = dv - sum(alg.degrees[i] for i in tup)
            if t is None:
                t = here
            elif t != here:
                raise ValueError("cochain is not homogeneous in internal degree")
        return 0 if t is None else t

    def total_degree(self) -> int:
        return self.degree - self.internal_degree()

    def scaled(self, c) -> "Cochain":
        f = self.alg.field
        return Cochain(
            self.alg, self.coeff, self.degree,
            {k: f.mul(c, v) for k, v in self.table.items()},
        )

    def plus(self, other: "Cochain") -> "Cochain":
        f = self.alg.field
        if other.degree != self.degree or other.coeff != self.coeff:
            raise ValueError("cochain sum degree/coefficient mismatch")
        table = dict(self.table)
        for k, v in other.table.items():
            s = f.add(table.get(k, f.zero), v)
            if f.is_zero(s):
                table.pop(k, None)
            else:
                table[k] = s
        return Cochain(self.alg, self.coeff, self.degree, table)

    def minus(self, other: "Cochain") -> "Cochain":
        f = self.alg.field
        return self.plus(other.scaled(f.neg(f.one)))

    def __repr__(self):
        return f"Cochain({self.coeff}, degree {self.degree}, {len(self.table)} entries)"


def unit_cochain(alg: FDAlgebra) -> Cochain:
    """The algebra unit as a 0-cochain with coefficients in A."""
    if alg.unit_index is None:
        raise PreconditionError("the unit must be a basis element")
    return Cochain(alg, "self", 0, {((), alg.unit_index): alg.field.one})


# ---------------------------------------------------------------------------
# chain-level operators (the dual complex is their transpose)


def chain_b(alg: FDAlgebra, n: int, a0: int, tup: tuple):
    """b applied to the chain basis element a0[tup], as {(a0', tup'): coeff}."""
    f = alg.field
    unit = alg.unit_index
    out: dict = {}

    def add(key, c):
        s = f.add(out.get(key, f.zero), c)
        if f.is_zero(s):
            out.pop(key, None)
        else:
            out[key] = s

    if n == 0:
        return out
    degs0 = alg.degrees[a0]
    degs = [alg.degrees[x] for x in tup]
    for w, cw in alg.mul_basis(a0, tup[0]).items():
        add((w, tup[1:]), cw)
    for i in range(1, n):
        sgn = f.neg(f.one) if i % 2 else f.one
        for u, cu in alg.mul_basis(tup[i - 1], tup[i]).items():
            if u == unit:
                continue
            add((a0, tup[:i - 1] + (u,) + tup[i + 1:]), f.mul(sgn, cu))
    exp = n + degs[n - 1] * (degs0 + sum(degs[:n - 1]))
    sgn = f.neg(f.one) if exp % 2 else f.one
    for w, cw in alg.mul_basis(tup[n - 1], a0).items():
        add((w, tup[:n - 1]), f.mul(sgn, cw))
    return out


def chain_connes_B(alg: FDAlgebra, n: int, a0: int, tup: tuple):
    """The normalized Connes boundary on a0[tup] in C_n, as {(1, tup'): coeff}."""
    f = alg.field
    unit = alg.unit_index
    out: dict = {}
    if a0 == unit:
        return out
    degs0 = alg.degrees[a0]
    degs = [alg.degrees[x] for x in tup]
    for j in range(n + 1):
        if j == 0:
            new_tup = (a0,) + tup
            exp = 0
        else:
            new_tup = tup[j - 1:] + (a0,) + tup[:j - 1]
            exp = n * j + (degs0 + sum(degs[:j - 1])) * sum(degs[j - 1:])
        c = f.neg(f.one) if exp % 2 else f.one
        s = f.add(out.get((unit, new_tup), f.zero), c)
        if f.is_zero(s):
            out.pop((unit, new_tup), None)
        else:
            out[(unit, new_tup)] = s
    return out


# ---------------------------------------------------------------------------
# the bar cochain complex


class BarComplex:
    """The normalized bar cochain complex of (A, M) up to degree N.

    Materializes C^0..C^{N+1} and d^0..d^N as sparse matrices.  HH^N is
    computable but uncertified: its cocycle condition uses the stored d^N,
    while operations raising cochain degree past N are refused by callers.
    """

    def __init__(self, alg: FDAlgebra, coeff: str, max_degree: int,
                 budget: int | None = None):
        if coeff not in ("self", "dual"):
            raise CoefficientError(f"unknown coefficient tag {coeff!r}")
        if alg.unit_index is None:
            raise PreconditionError("bar complex needs the unit to be a basis element")
        if max_degree < 3:
            raise ValueError("truncation degree must be at least 3")
        if alg.dim < 2:
            raise PreconditionError("bar complex needs dim(A/F1) >= 1")
        self.alg = alg
        self.coeff = coeff
        self.max_degree = max_degree
        self.certified = max_degree - 2
        budget = DEFAULT_BUDGET if budget is None else budget
        self.nonunit = [i for i in range(alg.dim) if i != alg.unit_index]
        self.nu_pos = {g: k for k, g in enumerate(self.nonunit)}
        m = alg.dim
        dims = {n: (m - 1) ** n * m for n in range(max_degree + 2)}
        worst = max(dims.values())
        if worst > budget:
            raise BudgetError(
                f"cochain space of dimension {worst} exceeds the budget {budget}"
                f" (raise HBV_BUDGET or lower the truncation degree)"
            )
        build = (self._self_differential if coeff == "self"
                 else self._dual_differential)
        diffs = {n: build(n) for n in range(max_degree + 1)}
        self.complex = Complex(alg.field, dims, diffs)

    # -- column encoding ------------------------------------------------------

    def encode(self, tup, v) -> int:
        m1 = len(self.nonunit)
        c = 0
        for x in tup:
            c = c * m1 + self.nu_pos[x]
        return c * self.alg.dim + v

    def decode(self, n: int, col: int):
        m1 = len(self.nonunit)
        col, v = divmod(col, self.alg.dim)
        tup = []
        for _ in range(n):
            col, r = divmod(col, m1)
            tup.append(self.nonunit[r])
        return tuple(reversed(tup)), v

    def cochain_to_vec(self, c: Cochain) -> dict:
        return {self.encode(t, v): coef for (t, v), coef in c.table.items()}

    def vec_to_cochain(self, n: int, vec: dict) -> Cochain:
        return Cochain(
            self.alg, self.coeff, n,
            {self.decode(n, col): coef for col, coef in vec.items()},
        )

    # -- differentials ----------------------------------------------------------

    def _dual_differential(self, n: int) -> SparseMatrix:
        """Transpose of the chain differential b : C_{n+1} -> C_n."""
        alg = self.alg
        f = alg.field
        m = alg.dim
        rows = []
        for s in product(self.nonunit, repeat=n + 1):
            for w in range(m):
                row: dict = {}
                for (a0, t), c in chain_b(alg, n + 1, w, s).items():
                    col = self.encode(t, a0)
                    v = f.add(row.get(col, f.zero), c)
                    if f.is_zero(v):
                        row.pop(col, None)
                    else:
                        row[col] = v
                rows.append(row)
        return SparseMatrix(f, (m - 1) ** (n + 1) * m, (m - 1) ** n * m, rows)

    def _self_differential(self, n: int) -> SparseMatrix:
        alg = self.alg
        f = alg.field
        m = alg.dim
        unit = alg.unit_index
        graded = alg.is_graded()
        one = f.one
        neg_one = f.neg(one)
        rows = []
        for s in product(self.nonunit, repeat=n + 1):
            degs = [alg.degrees[x] for x in s] if graded else None
            for w in range(m):
                row: dict = {}

                def add(col, coef, row=row):
                    v = f.add(row.get(col, f.zero), coef)
                    if f.is_zero(v):
                        row.pop(col, None)
                    else:
                        row[col] = v

                # (-1)^{|a_1| t} a_1 . f(a_2..)
                for v in range(m):
                    c = alg.mul_basis(s[0], v).get(w)
                    if c is None:
                        continue
                    if graded:
                        t_col = alg.degrees[v] - sum(degs[1:])
                        if (degs[0] * t_col) % 2:
                            c = f.neg(c)
                    add(self.encode(s[1:], v), c)
                # (-1)^i f(.., a_i a_{i+1}, ..)
                for i in range(n):
                    sgn = neg_one if i % 2 == 0 else one
                    for u, cu in alg.mul_basis(s[i], s[i + 1]).items():
                        if u == unit:
                            continue
                        add(self.encode(s[:i] + (u,) + s[i + 2:], w), f.mul(sgn, cu))
                # (-1)^{n+1} f(a_1..a_n) . a_{n+1}
                sgn = one if (n + 1) % 2 == 0 else neg_one
                for v in range(m):
                    c = alg.mul_basis(v, s[n]).get(w)
                    if c is not None:
                        add(self.encode(s[:n], v), f.mul(sgn, c))
                rows.append(row)
        return SparseMatrix(f, (m - 1) ** (n + 1) * m, (m - 1) ** n * m, rows)

    # -- views --------------------------------------------------------------

    def dims_table(self, upto: int | None = None):
        upto = self.max_degree if upto is None else upto
        return [(n, self.complex.cohomology_dim(n)) for n in range(upto + 1)]

    def cohomology(self, n):
        return self.complex.cohomology_at(n)

    def differential_vec(self, n: int, vec: dict) -> dict:
        return self.complex.differential(n).apply_sparse(vec)

    def is_cocycle(self, c: Cochain) -> bool:
        return not self.differential_vec(c.degree, self.cochain_to_vec(c))

    def differential_cochain(self, c: Cochain) -> Cochain:
        vec = self.differential_vec(c.degree, self.cochain_to_vec(c))
        return self.vec_to_cochain(c.degree + 1, vec)


# ---------------------------------------------------------------------------
# operations on cochains


def cup(f: Cochain, g: Cochain) -> Cochain:
    """The cup product (f u g)(a_1..a_{p+q}) = +- f(a_1..a_p) g(a_{p+1}..).

    Self*self multiplies the values in A with the Koszul sign
    (-1)^{t(g) . deg(f-inputs)}.  With one dual factor the value is acted on
    through (a.phi)(x) = phi(x a) or (phi.b)(x) = phi(b x), with the Koszul
    exponents pinned by the Leibniz rule (see module docstring); all signs
    vanish on ungraded algebras.
    """
    alg = f.alg
    fl = alg.field
    if f.coeff == "dual" and g.coeff == "dual":
        raise CoefficientError("cannot cup two dual-coefficient cochains")
    out_coeff = "dual" if "dual" in (f.coeff, g.coeff) else "self"
    graded = alg.is_graded()
    table: dict = {}
    for (t1, v1), c1 in f.table.items():
        s_p = sum(alg.degrees[i] for i in t1) if graded else 0
        dv1 = alg.degrees[v1]
        t_f = (-dv1 if f.coeff == "dual" else dv1) - s_p
        for (t2, v2), c2 in g.table.items():
            s_q = sum(alg.degrees[i] for i in t2) if graded else 0
            coef = fl.mul(c1, c2)
            if f.coeff == "self" and g.coeff == "self":
                if graded:
                    tg = alg.degrees[v2] - s_q
                    if (tg * s_p) % 2:
                        coef = fl.neg(coef)
                values = alg.mul_basis(v1, v2)
            elif f.coeff == "self":
                # value = f-value acting on g's functional from the left
                values = {}
                for w in range(alg.dim):
                    c = alg.mul_basis(w, v1).get(v2)
                    if c is None:
                        continue
                    if graded:
                        exp = (dv1 * (alg.degrees[w] + alg.degrees[v2] + s_p)
                               + t_f * s_q)
                        if exp % 2:
                            c = fl.neg(c)
                    values[w] = c
            else:
                # value = g-value acting on f's functional from the right
                values = {}
                db = alg.degrees[v2]
                for w in range(alg.dim):
                    c = alg.mul_basis(v2, w).get(v1)
                    if c is None:
                        continue
                    if graded and ((db + t_f) * s_q) % 2:
                        c = fl.neg(c)
                    values[w] = c
            tup = t1 + t2
            for w, cw in values.items():
                key = (tup, w)
                s = fl.add(table.get(key, fl.zero), fl.mul(coef, cw))
                if fl.is_zero(s):
                    table.pop(key, None)
                else:
                    table[key] = s
    return Cochain(alg, out_coeff, f.degree + g.degree, table)


def circle(f: Cochain, g: Cochain) -> Cochain:
    """The pre-Lie insertion product f o g (self coefficients only):
    insertion of g's value into the i-th slot carries the sign (-1)^{(q-1) i}."""
    alg = f.alg
    fl = alg.field
    if f.coeff != "self" or g.coeff != "self":
        raise CoefficientError("the circle product lives on HH*(A;A)")
    q = g.degree
    table: dict = {}
    for (tf, vf), cf in f.table.items():
        for i in range(len(tf)):
            slot = tf[i]
            for (tg, vg), cg in g.table.items():
                if vg != slot:
                    continue
                coef = fl.mul(cf, cg)
                if ((q - 1) * i) % 2:
                    coef = fl.neg(coef)
                key = (tf[:i] + tg + tf[i + 1:], vf)
                s = fl.add(table.get(key, fl.zero), coef)
                if fl.is_zero(s):
                    table.pop(key, None)
                else:
                    table[key] = s
    return Cochain(alg, "self", f.degree + q - 1, table)


def gerstenhaber_bracket(f: Cochain, g: Cochain) -> Cochain:
    """[f, g] = f o g - (-1)^{(p-1)(q-1) + t(f) t(g)} g o f."""
    fg = circle(f, g)
    gf = circle(g, f)
    tf = f.internal_degree()
    tg = g.internal_degree()
    exp = (f.degree - 1) * (g.degree - 1) + tf * tg
    if exp % 2:
        return fg.plus(gf)
    return fg.minus(gf)


def connes_b_dual(f: Cochain) -> Cochain:
    """The transpose of the normalized Connes boundary, lowering cochain
    degree by one on dual-coefficient cochains.

    Only table entries whose evaluation slot is the unit contribute; each
    spreads over the cyclic rotations of its tuple with the chain-level
    rotation sign.
    """
    alg = f.alg
    fl = alg.field
    if f.coeff != "dual":
        raise CoefficientError("the rotation operator needs dual coefficients")
    n = f.degree
    if n == 0:
        return Cochain(alg, "dual", -1, {})
    unit = alg.unit_index
    table: dict = {}
    for (tup, v), c in f.table.items():
        if v != unit:
            continue
        degs = [alg.degrees[x] for x in tup]
        for j in range(n):
            # term j of B sent a0[s] to 1[s_j..s_{n-1} | a0 | s_1..s_{j-1}]
            if j == 0:
                a0 = tup[0]
                out_tup = tup[1:]
                exp = 0
            else:
                a0 = tup[n - j]
                out_tup = tup[n - j + 1:] + tup[:n - j]
                d0 = alg.degrees[a0]
                dpre = d0 + sum(alg.degrees[x] for x in tup[n - j + 1:])
                dpost = sum(degs) - dpre
                exp = (n - 1) * j + dpre * dpost
            coef = fl.neg(c) if exp % 2 else c
            key = (out_tup, a0)
            s = fl.add(table.get(key, fl.zero), coef)
            if fl.is_zero(s):
                table.pop(key, None)
            else:
                table[key] = s
    return Cochain(alg, "dual", n - 1, table)


def connes_b_dual_matrix(bar: BarComplex, n: int) -> SparseMatrix:
    """Matrix of the rotation operator C^n -> C^{n-1} on a dual-coefficient
    bar complex (the zero map with empty target for n = 0), built as the
    transpose of the chain-level operator."""
    alg = bar.alg
    f = alg.field
    m = alg.dim
    src = (m - 1) ** n * m
    if n == 0:
        return SparseMatrix(f, 0, src)
    dst = (m - 1) ** (n - 1) * m
    rows = []
    for s in product(bar.nonunit, repeat=n - 1):
        for w in range(m):
            row: dict = {}
            for (a0, t), c in chain_connes_B(alg, n - 1, w, s).items():
                col = bar.encode(t, a0)
                v = f.add(row.get(col, f.zero), c)
                if f.is_zero(v):
                    row.pop(col, None)
                else:
                    row[col] = v
            rows.append(row)
    return SparseMatrix(f, dst, src, rows)


# ---------------------------------------------------------------------------
# cohomology with classes


class HHClass:
    """A Hochschild cohomology class: coordinates in the deterministic basis
    plus a chosen representative cocycle."""

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
            isinstance(other, HHClass)
            and self.degree == other.degree
            and self.coords == other.coords
        )

    def __repr__(self):
        return f"HHClass(degree {self.degree}, coords {self.coords})"


class HochschildCohomology:
    """HH^*(A; M) up to a truncation degree, with class-level projection."""

    def __init__(self, alg: FDAlgebra, coeff: str, max_degree: int,
                 budget: int | None = None):
        self.alg = alg
        self.coeff = coeff
        self.max_degree = max_degree
        self.bar = BarComplex(alg, coeff, max_degree, budget)
        self._classes: dict[int, list] = {}

    def dims(self, upto: int | None = None):
        return self.bar.dims_table(upto)

    def dim(self, n: int) -> int:
        return self.bar.complex.cohomology_dim(n)

    def classes(self, n: int):
        if n < 0 or n > self.max_degree:
            return []
        if n not in self._classes:
            if self.dim(n) == 0:
                # rank-only check suffices: no representative machinery
                self._classes[n] = []
                return self._classes[n]
            data = self.bar.cohomology(n)
            f = self.alg.field
            out = []
            for i, rep in enumerate(data.representatives):
                coords = [f.zero] * data.dim
                coords[i] = f.one
                out.append(HHClass(self, n, coords, self.bar.vec_to_cochain(n, rep)))
            self._classes[n] = out
        return self._classes[n]

    def project(self, c: Cochain) -> HHClass:
        """The class of a cocycle; equality of classes is decided by
        coboundary membership, never representative equality."""
        if c.degree < 0:
            return HHClass(self, c.degree, [], c)
        data = self.bar.cohomology(c.degree)
        coords = data.project(self.bar.cochain_to_vec(c))
        return HHClass(self, c.degree, coords, c)

    def zero_class(self, n: int) -> HHClass:
        dim = self.dim(n) if 0 <= n <= self.max_degree else 0
        f = self.alg.field
        return HHClass(self, n, [f.zero] * dim,
                       Cochain(self.alg, self.coeff, max(n, 0), {}))

    def unit_class(self) -> HHClass:
        if self.coeff != "self":
            raise CoefficientError("the unit class lives in HH^0(A;A)")
        return self.project(unit_cochain(self.alg))


def hochschild_cohomology(alg, coeff, max_degree, budget=None):
    """The (degree, dimension, basis classes) table."""
    hh = HochschildCohomology(alg, coeff, max_degree, budget)
    return [(n, hh.dim(n), hh.classes(n)) for n in range(max_degree + 1)]


def hochschild_dims(alg, coeff, max_degree, budget=None):
    """Dimension table only; skips all representative machinery."""
    bar = BarComplex(alg, coeff, max_degree, budget)
    return bar.dims_table()


# ---------------------------------------------------------------------------
# duality and the BV operator


class BVStructure:
    """HH^*(A;A) with the operator transported from the dual-side rotation
    through the Frobenius duality.

    Refuses non-symmetric or degenerate Frobenius structures: the BV
    construction's hypothesis is a symmetric nondegenerate pairing.
    """

    def __init__(self, alg: FDAlgebra, frob: FrobeniusStructure,
                 max_degree: int, budget: int | None = None,
                 flip_sign_convention: bool = False):
        if not frob.report.symmetric or not frob.report.nondegenerate:
            raise PreconditionError(
                "BV structure needs a symmetric nondegenerate Frobenius pairing"
            )
        self.alg = alg
        self.frob = frob
        self.max_degree = max_degree
        self.flip = flip_sign_convention
        self.hh = HochschildCohomology(alg, "self", max_degree, budget)
        self.hh_dual = HochschildCohomology(alg, "dual", max_degree, budget)
        self.lam = frob.lambda_matrix()
        self.lam_inv = inverse(self.lam)

    # -- duality --------------------------------------------------------------

    def _compose_values(self, c: Cochain, mat: Matrix, out_coeff: str) -> Cochain:
        f = self.alg.field
        table: dict = {}
        for (tup, v), coef in c.table.items():
            for w in range(self.alg.dim):
                mv = mat.data[w][v]
                if f.is_zero(mv):
                    continue
                key = (tup, w)
                s = f.add(table.get(key, f.zero), f.mul(coef, mv))
                if f.is_zero(s):
                    table.pop(key, None)
                else:
                    table[key] = s
        return Cochain(self.alg, out_coeff, c.degree, table)

    def to_self(self, c: Cochain) -> Cochain:
        """Post-compose a dual-coefficient cochain with the pairing inverse.
        Dual tables are coordinate vectors in the dual basis, so this is a
        plain matrix application on values."""
        return self._compose_values(c, self.lam_inv, "self")

    def to_dual(self, c: Cochain) -> Cochain:
        """Post-compose a self-coefficient cochain with the pairing map."""
        return self._compose_values(c, self.lam, "dual")

    def duality(self, cls: HHClass) -> HHClass:
        """D : HH(A; A-dual) -> HH(A; A)."""
        return self.hh.project(self.to_self(cls.representative))

    def duality_inv(self, cls: HHClass) -> HHClass:
        """D^{-1} : HH(A; A) -> HH(A; A-dual)."""
        return self.hh_dual.project(self.to_dual(cls.representative))

    # -- the BV operator --------------------------------------------------------

    def delta(self, cls: HHClass) -> HHClass:
        """Delta = D o (rotation transpose) o D^{-1}, lowering degree by 1."""
        if cls.degree == 0:
            return self.hh.zero_class(0)
        rotated = connes_b_dual(self.to_dual(cls.representative))
        return self.hh.project(self.to_self(rotated))

    def delta_dual(self, cls: HHClass) -> HHClass:
        """The rotation operator on HH(A; A-dual) classes."""
        if cls.degree == 0:
            return self.hh_dual.zero_class(0)
        return self.hh_dual.project(connes_b_dual(cls.representative))

    # -- class-level products -----------------------------------------------------

    def cup_classes(self, x: HHClass, y: HHClass) -> HHClass:
        if x.degree + y.degree > self.max_degree:
            raise ValueError("cup product lands above the truncation degree")
        return self.hh.project(cup(x.representative, y.representative))

    def bracket_classes(self, x: HHClass, y: HHClass) -> HHClass:
        if x.degree + y.degree - 1 > self.max_degree:
            raise ValueError("bracket lands above the truncation degree")
        return self.hh.project(
            gerstenhaber_bracket(x.representative, y.representative)
        )


class BVReport:
    def __init__(self):
        self.checks = []  # (name, ok, witness-or-None)

    def record(self, name, ok, witness=None):
        self.checks.append((name, bool(ok), witness))

    def all_ok(self):
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(n, w) for n, ok, w in self.checks if not ok]

    def counts(self):
        good = sum(1 for _, ok, _ in self.checks if ok)
        return good, len(self.checks)

    def __repr__(self):
        good, total = self.counts()
        return f"BVReport({good}/{total} checks pass)"


def bv_check(alg: FDAlgebra, frob: FrobeniusStructure, max_degree: int,
             budget: int | None = None, flip_sign_convention: bool = False) -> BVReport:
    """The full BV verification suite on cohomology classes.

    Within the certified window (cochain degrees of the arguments summing to
    at most N-2): Delta(1) = 0, Delta^2 = 0, the seven-term identity

        [x, y] = (-1)^{|x|} ( Delta(x u y) - Delta(x) u y
                              - (-1)^{|x|} x u Delta(y) ),

    |.| the cochain degree, plus graded Jacobi and the Poisson rule.  The
    ``flip_sign_convention`` switch negates the seven-term right side, the
    alternative convention, kept for comparison runs.  The report lists
    failures with witnesses.
    """
    bv = BVStructure(alg, frob, max_degree, budget, flip_sign_convention)
    f = alg.field
    N = max_degree
    window = N - 2
    report = BVReport()

    one = bv.hh.unit_class()
    report.record("delta(1) = 0", bv.delta(one).is_zero())

    basis = {n: bv.hh.classes(n) for n in range(N + 1)}

    for n in range(2, N):  # Delta^2 certified on degrees <= N - 1
        for i, x in enumerate(basis[n]):
            d2 = bv.delta(bv.delta(x))
            report.record(
                f"delta^2 = 0 at degree {n} basis {i}",
                d2.is_zero(),
                None if d2.is_zero() else (n, i, d2.coords),
            )

    def neg_if(cond, v):
        return f.neg(v) if cond else v

    def seven_term(x, y):
        target = x.degree + y.degree - 1
        lhs = bv.bracket_classes(x, y)
        t1 = bv.delta(bv.cup_classes(x, y))
        t2 = (bv.cup_classes(bv.delta(x), y) if x.degree >= 1
              else bv.hh.zero_class(target))
        t3 = (bv.cup_classes(x, bv.delta(y)) if y.degree >= 1
              else bv.hh.zero_class(target))
        odd = x.degree % 2
        rhs = [
            neg_if(odd, f.sub(f.sub(a, b), neg_if(odd, c)))
            for a, b, c in zip(t1.coords, t2.coords, t3.coords)
        ]
        if bv.flip:
            rhs = [f.neg(v) for v in rhs]
        return lhs.coords == rhs, (lhs.coords, rhs)

    for nx in range(window + 1):
        for ny in range(window + 1 - nx):
            if nx + ny == 0:
                continue  # both sides land in degree -1
            for i, x in enumerate(basis[nx]):
                for j, y in enumerate(basis[ny]):
                    ok, wit = seven_term(x, y)
                    report.record(
                        f"seven-term at ({nx},{ny}) basis ({i},{j})",
                        ok,
                        None if ok else (nx, ny, i, j, wit),
                    )

    def jacobi(x, y, z):
        """Graded Leibniz form: [[x,y],z] = [x,[y,z]] - +-[y,[x,z]],
        the exchange sign matching the bracket's antisymmetry convention."""
        ex = ((x.degree - 1) * (y.degree - 1)
              + x.representative.internal_degree() * y.representative.internal_degree())
        lhs = bv.bracket_classes(bv.bracket_classes(x, y), z)
        r1 = bv.bracket_classes(x, bv.bracket_classes(y, z))
        r2 = bv.bracket_classes(y, bv.bracket_classes(x, z))
        rhs = [f.sub(a, neg_if(ex % 2, b)) for a, b in zip(r1.coords, r2.coords)]
        return lhs.coords == rhs

    for nx in range(window + 1):
        for ny in range(window + 1 - nx):
            for nz in range(window + 1 - nx - ny):
                if nx + ny + nz < 2:
                    continue  # a nested bracket lands in degree < 0
                for i, x in enumerate(basis[nx]):
                    for j, y in enumerate(basis[ny]):
                        for k, z in enumerate(basis[nz]):
                            report.record(
                                f"jacobi at ({nx},{ny},{nz}) basis ({i},{j},{k})",
                                jacobi(x, y, z),
                            )

    def poisson(x, y, z):
        """[x, y u z] = [x,y] u z + (-1)^{(|x|-1)|y| + t(x) t(y)} y u [x,z]."""
        ex = ((x.degree - 1) * y.degree
              + x.representative.internal_degree() * y.representative.internal_degree())
        lhs = bv.bracket_classes(x, bv.cup_classes(y, z))
        r1 = bv.cup_classes(bv.bracket_classes(x, y), z)
        r2 = bv.cup_classes(y, bv.bracket_classes(x, z))
        rhs = [f.add(a, neg_if(ex % 2, b)) for a, b in zip(r1.coords, r2.coords)]
        return lhs.coords == rhs

    for nx in range(window + 1):
        for ny in range(window + 1 - nx):
            for nz in range(window + 1 - nx - ny):
                if nx + ny + nz == 0:
                    continue
                for i, x in enumerate(basis[nx]):
                    for j, y in enumerate(basis[ny]):
                        for k, z in enumerate(basis[nz]):
                            report.record(
                                f"poisson at ({nx},{ny},{nz}) basis ({i},{j},{k})",
                                poisson(x, y, z),
                            )
    return report


# ---------------------------------------------------------------------------
# the centralizer oracle


def group_cochain_dims(g: FiniteGroup, field, max_degree: int,
                       budget: int | None = None):
    """Group cohomology dims H^n(G; F) with trivial coefficients, via the
    normalized bar cochain complex of the group (independent of the
    Hochschild machinery above)."""
    f = field
    budget = DEFAULT_BUDGET if budget is None else budget
    m = g.order
    nu = [i for i in range(m) if i != g.identity]
    nu_pos = {x: k for k, x in enumerate(nu)}
    dims = {n: (m - 1) ** n for n in range(max_degree + 2)}
    worst = max(dims.values())
    if worst > budget:
        raise BudgetError(
            f"group cochain space of dimension {worst} exceeds the budget {budget}"
        )

    def encode(tup):
        c = 0
        for x in tup:
            c = c * (m - 1) + nu_pos[x]
        return c

    one = f.one
    neg_one = f.neg(one)
    diffs = {}
    for n in range(max_degree + 1):
        rows = [dict() for _ in range(dims[n + 1])]
        r = 0
        for s in product(nu, repeat=n + 1):
            row = rows[r]
            r += 1

            def add(col, coef, row=row):
                v = f.add(row.get(col, f.zero), coef)
                if f.is_zero(v):
                    row.pop(col, None)
                else:
                    row[col] = v

            add(encode(s[1:]), one)
            for i in range(n):
                u = g.table[s[i]][s[i + 1]]
                if u != g.identity:
                    add(encode(s[:i] + (u,) + s[i + 2:]),
                        neg_one if i % 2 == 0 else one)
            add(encode(s[:n]), one if (n + 1) % 2 == 0 else neg_one)
        diffs[n] = SparseMatrix(f, dims[n + 1], dims[n], rows)
    cx = Complex(f, dims, diffs)
    return [cx.cohomology_dim(n) for n in range(max_degree + 1)]


def centralizer_oracle(g: FiniteGroup, field, max_degree: int,
                       budget: int | None = None):
    """Per-degree totals of the conjugacy-class/centralizer decomposition:
    sum over classes of dim H^n(centralizer; F).

    This is the test oracle paired with the direct bar computation of
    HH^*(F[G]; F[G]); the two tables must agree degreewise.
    """
    totals = [0] * (max_degree + 1)
    for cls in g.conjugacy_classes():
        cent = g.centralizer(cls[0])
        dims = group_cochain_dims(cent, field, max_degree, budget)
        for n in range(max_degree + 1):
            totals[n] += dims[n]
    return list(enumerate(totals))
