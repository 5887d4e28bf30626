"""The skeleton prop of oriented surface cobordisms: objects are port counts,
morphisms are equivalence classes encoded by a canonical normal form, with
gluing, disjoint union, Euler-characteristic bookkeeping, TQFT evaluation
against a commutative Frobenius algebra, and determinant lines.

A cobordism is a multiset of connected components (genus, in-legs, out-legs)
whose legs partition the global in-ports 1..p and out-ports 1..q.  Two
cobordisms are equal iff their normal forms coincide.  Gluing merges
components by a union-find over the glued circles; the genus of a merged
cluster grows by the cycle rank E - V + 1 of its gluing graph, and the Euler
characteristic chi = 2k - 2g - p - q is additive under both compositions
(asserted on every compose).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import FDAlgebra, FrobeniusStructure, PreconditionError
from .linalg import Matrix, inverse


class CobordismError(ValueError):
    pass


class Cobordism:
    __slots__ = ("p", "q", "components")

    def __init__(self, p: int, q: int, components):
        self.p = p
        self.q = q
        comps = []
        for genus, in_legs, out_legs in components:
            if genus < 0:
                raise CobordismError("negative genus")
            comps.append((genus, tuple(sorted(in_legs)), tuple(sorted(out_legs))))
        self.components = tuple(sorted(comps, key=self._component_key))
        self._validate()

    @staticmethod
    def _component_key(comp):
        genus, in_legs, out_legs = comp
        # in-ports rank before out-ports for the leading-port comparison
        ports = [(0, i) for i in in_legs] + [(1, j) for j in out_legs]
        return (min(ports) if ports else (2, 0), genus, in_legs, out_legs)

    def _validate(self):
        ins = [i for _, in_legs, _ in self.components for i in in_legs]
        outs = [j for _, _, out_legs in self.components for j in out_legs]
        if sorted(ins) != list(range(1, self.p + 1)):
            raise CobordismError(f"in-legs {sorted(ins)} do not partition 1..{self.p}")
        if sorted(outs) != list(range(1, self.q + 1)):
            raise CobordismError(f"out-legs {sorted(outs)} do not partition 1..{self.q}")

    # -- invariants -----------------------------------------------------------

    def component_count(self) -> int:
        return len(self.components)

    def total_genus(self) -> int:
        return sum(g for g, _, _ in self.components)

    def euler_characteristic(self) -> int:
        """chi = 2k - 2g - p - q."""
        return (2 * self.component_count() - 2 * self.total_genus()
                - self.p - self.q)

    def __eq__(self, other):
        return (
            isinstance(other, Cobordism)
            and (self.p, self.q, self.components)
            == (other.p, other.q, other.components)
        )

    def __hash__(self):
        return hash((self.p, self.q, self.components))

    def __repr__(self):
        return f"Cobordism({self.p}->{self.q}, {list(self.components)})"

    # -- prop structure ---------------------------------------------------------

    def compose(self, g: "Cobordism") -> "Cobordism":
        """g o self : glue this cobordism's out-circles to g's in-circles."""
        if self.q != g.p:
            raise CobordismError(
                f"cannot glue {self.q} out-circles to {g.p} in-circles"
            )
        f_comps = list(self.components)
        g_comps = list(g.components)
        nodes = [("f", i) for i in range(len(f_comps))] + [
            ("g", j) for j in range(len(g_comps))
        ]
        parent = {x: x for x in nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        out_owner = {}
        for i, (_, _, outs) in enumerate(f_comps):
            for port in outs:
                out_owner[port] = ("f", i)
        in_owner = {}
        for j, (_, ins, _) in enumerate(g_comps):
            for port in ins:
                in_owner[port] = ("g", j)
        edges = []
        for port in range(1, self.q + 1):
            a, b = out_owner[port], in_owner[port]
            edges.append((a, b))
            union(a, b)
        clusters: dict = {}
        for x in nodes:
            clusters.setdefault(find(x), []).append(x)
        edge_count: dict = {}
        for a, b in edges:
            edge_count[find(a)] = edge_count.get(find(a), 0) + 1
        new_components = []
        for root, members in clusters.items():
            genus = 0
            in_legs = []
            out_legs = []
            for side, idx in members:
                if side == "f":
                    gg, ins, _ = f_comps[idx]
                    in_legs.extend(ins)
                else:
                    gg, _, outs = g_comps[idx]
                    out_legs.extend(outs)
                genus += gg
            e = edge_count.get(root, 0)
            genus += e - len(members) + 1
            new_components.append((genus, in_legs, out_legs))
        result = Cobordism(self.p, g.q, new_components)
        expected = self.euler_characteristic() + g.euler_characteristic()
        if result.euler_characteristic() != expected:
            raise CobordismError("gluing broke Euler characteristic additivity")
        return result

    def tensor(self, g: "Cobordism") -> "Cobordism":
        """Disjoint union, with g's ports shifted past this cobordism's."""
        comps = list(self.components)
        for genus, ins, outs in g.components:
            comps.append(
                (genus, [i + self.p for i in ins], [j + self.q for j in outs])
            )
        return Cobordism(self.p + g.p, self.q + g.q, comps)

    # -- serialization ------------------------------------------------------------

    def to_json(self):
        return {
            "in": self.p,
            "out": self.q,
            "components": [
                {"genus": g, "in_legs": list(i), "out_legs": list(o)}
                for g, i, o in self.components
            ],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            comps = [
                (c.get("genus", 0), c.get("in_legs", []), c.get("out_legs", []))
                for c in obj["components"]
            ]
            return cls(obj["in"], obj["out"], comps)
        except KeyError as exc:
            raise CobordismError(f"cobordism file missing key {exc}") from exc

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# presets and constructors


def identity_cobordism(p: int) -> Cobordism:
    return Cobordism(p, p, [(0, [i], [i]) for i in range(1, p + 1)])


def permutation_cobordism(perm) -> Cobordism:
    """Cylinders wiring in-port i to out-port perm[i-1] (perm is 1-based values)."""
    p = len(perm)
    if sorted(perm) != list(range(1, p + 1)):
        raise CobordismError("not a permutation of 1..p")
    return Cobordism(p, p, [(0, [i], [perm[i - 1]]) for i in range(1, p + 1)])


def connected_cobordism(genus: int, p: int, q: int) -> Cobordism:
    return Cobordism(p, q, [(genus, range(1, p + 1), range(1, q + 1))])


_PRESETS = {
    "cyl": lambda: identity_cobordism(1),
    "pants": lambda: connected_cobordism(0, 2, 1),
    "copants": lambda: connected_cobordism(0, 1, 2),
    "cap_in": lambda: connected_cobordism(0, 1, 0),   # disk killing an in-circle
    "cap_out": lambda: connected_cobordism(0, 0, 1),  # disk creating an out-circle
    "twist": lambda: permutation_cobordism([2, 1]),
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset_cobordism(name: str) -> Cobordism:
    try:
        return _PRESETS[name]()
    except KeyError:
        raise CobordismError(
            f"unknown cobordism preset {name!r} (available: {', '.join(PRESET_NAMES)})"
        ) from None


# ---------------------------------------------------------------------------
# TQFT evaluation


class TQFTMap:
    """A linear map A^{(x)p} -> A^{(x)q} attached to a cobordism evaluation."""

    __slots__ = ("p", "q", "matrix")

    def __init__(self, p, q, matrix: Matrix):
        self.p = p
        self.q = q
        self.matrix = matrix

    def compose(self, other: "TQFTMap") -> "TQFTMap":
        """other o self."""
        if self.q != other.p:
            raise CobordismError("TQFT map composition mismatch")
        return TQFTMap(self.p, other.q, other.matrix * self.matrix)

    def tensor(self, other: "TQFTMap") -> "TQFTMap":
        f = self.matrix.field
        a, b = self.matrix, other.matrix
        out = Matrix(f, a.nrows * b.nrows, a.ncols * b.ncols)
        for i1 in range(a.nrows):
            for j1 in range(a.ncols):
                v = a.data[i1][j1]
                if f.is_zero(v):
                    continue
                for i2 in range(b.nrows):
                    for j2 in range(b.ncols):
                        w = b.data[i2][j2]
                        if not f.is_zero(w):
                            out.data[i1 * b.nrows + i2][j1 * b.ncols + j2] = f.mul(v, w)
        return TQFTMap(self.p + other.p, self.q + other.q, out)

    def __eq__(self, other):
        return (
            isinstance(other, TQFTMap)
            and (self.p, self.q) == (other.p, other.q)
            and self.matrix == other.matrix
        )

    def __repr__(self):
        return f"TQFTMap({self.p}->{self.q})"


class FrobeniusTQFT:
    """The evaluation functor of the cobordism prop on a commutative
    Frobenius algebra: pants evaluate to the product, copants to the
    pairing-induced coproduct, genus to handle-element multiplication.

    The coalgebra structure is derived from the pairing (coproduct of the
    unit = copairing) and its axioms are asserted at construction.
    Noncommutative algebras and degenerate pairings are refused.
    """

    def __init__(self, alg: FDAlgebra, frob: FrobeniusStructure,
                 strict_positive_boundary: bool = False):
        if not alg.is_commutative():
            raise PreconditionError("TQFT evaluation needs a commutative algebra")
        if not frob.report.nondegenerate:
            raise PreconditionError("TQFT evaluation needs a nondegenerate pairing")
        self.alg = alg
        self.frob = frob
        self.strict = strict_positive_boundary
        f = alg.field
        m = alg.dim
        C = inverse(frob.pairing)
        # copairing gamma = sum C[i][j] e_i (x) e_j,  delta(a) = (a.e_i) (x) e_j
        self.copairing = C
        self.mult = self._mult_matrix()
        self.coproduct = self._coproduct_matrix()
        self.unit_vec = list(alg.unit)
        self.counit_vec = [frob.pairing.data[i][alg.unit_index]
                           if alg.unit_index is not None
                           else self._counit_entry(i)
                           for i in range(m)]
        self.handle = self._handle_matrix()
        self._check_frobenius_axioms()

    def _counit_entry(self, i):
        f = self.alg.field
        s = f.zero
        for j, c in enumerate(self.alg.unit):
            s = f.add(s, f.mul(c, self.frob.pairing.data[i][j]))
        return s

    def _mult_matrix(self) -> Matrix:
        alg = self.alg
        f = alg.field
        m = alg.dim
        out = Matrix(f, m, m * m)
        for i in range(m):
            for j in range(m):
                for k, c in alg.mul_basis(i, j).items():
                    out.data[k][i * m + j] = f.add(out.data[k][i * m + j], c)
        return out

    def _coproduct_matrix(self) -> Matrix:
        alg = self.alg
        f = alg.field
        m = alg.dim
        C = self.copairing
        out = Matrix(f, m * m, m)
        for a in range(m):
            for i in range(m):
                for j in range(m):
                    cij = C.data[i][j]
                    if f.is_zero(cij):
                        continue
                    for k, c in alg.mul_basis(a, i).items():
                        out.data[k * m + j][a] = f.add(
                            out.data[k * m + j][a], f.mul(cij, c)
                        )
        return out

    def _handle_matrix(self) -> Matrix:
        """Left multiplication by the handle element mu(delta(1))."""
        f = self.alg.field
        m = self.alg.dim
        delta_one = self.coproduct.apply(self.unit_vec)
        handle_vec = [f.zero] * m
        for i in range(m):
            for j in range(m):
                c = delta_one[i * m + j]
                if f.is_zero(c):
                    continue
                for k, cc in self.alg.mul_basis(i, j).items():
                    handle_vec[k] = f.add(handle_vec[k], f.mul(c, cc))
        self.handle_vec = handle_vec
        return self.alg.left_mult_matrix(handle_vec)

    def _check_frobenius_axioms(self):
        f = self.alg.field
        m = self.alg.dim
        ident = Matrix.identity(f, m)
        # counit axioms for the derived coproduct
        left = Matrix(f, m, m)
        right = Matrix(f, m, m)
        for a in range(m):
            col = self.coproduct.col(a)
            for i in range(m):
                for j in range(m):
                    c = col[i * m + j]
                    if f.is_zero(c):
                        continue
                    left.data[j][a] = f.add(
                        left.data[j][a], f.mul(c, self.counit_vec[i])
                    )
                    right.data[i][a] = f.add(
                        right.data[i][a], f.mul(c, self.counit_vec[j])
                    )
        if left != ident or right != ident:
            raise PreconditionError("pairing-induced coproduct fails the counit axiom")
        # coassociativity
        dm = self.coproduct
        lhs = self._tensor_mat(dm, Matrix.identity(f, m)) * dm
        rhs = self._tensor_mat(Matrix.identity(f, m), dm) * dm
        if lhs != rhs:
            raise PreconditionError("pairing-induced coproduct is not coassociative")
        # Frobenius compatibility: delta o mu = (mu (x) id) o (id (x) delta)
        lhs = dm * self.mult
        rhs = self._tensor_mat(self.mult, Matrix.identity(f, m)) * self._tensor_mat(
            Matrix.identity(f, m), dm
        )
        if lhs != rhs:
            raise PreconditionError("Frobenius compatibility fails")

    @staticmethod
    def _tensor_mat(a: Matrix, b: Matrix) -> Matrix:
        f = a.field
        out = Matrix(f, a.nrows * b.nrows, a.ncols * b.ncols)
        for i1 in range(a.nrows):
            for j1 in range(a.ncols):
                v = a.data[i1][j1]
                if f.is_zero(v):
                    continue
                for i2 in range(b.nrows):
                    row = b.data[i2]
                    for j2 in range(b.ncols):
                        w = row[j2]
                        if not f.is_zero(w):
                            out.data[i1 * b.nrows + i2][j1 * b.ncols + j2] = f.mul(v, w)
        return out

    # -- evaluation ---------------------------------------------------------------

    def _iterated_mult(self, p: int) -> Matrix:
        f = self.alg.field
        m = self.alg.dim
        if p == 0:
            out = Matrix(f, m, 1)
            for i, c in enumerate(self.unit_vec):
                out.data[i][0] = c
            return out
        cur = Matrix.identity(f, m)
        for _ in range(p - 1):
            cur = (self.mult
                   * self._tensor_mat(cur, Matrix.identity(f, m)))
        return cur

    def _iterated_coproduct(self, q: int) -> Matrix:
        f = self.alg.field
        m = self.alg.dim
        if q == 0:
            out = Matrix(f, 1, m)
            for i, c in enumerate(self.counit_vec):
                out.data[0][i] = c
            return out
        cur = Matrix.identity(f, m)
        for _ in range(q - 1):
            cur = self._tensor_mat(cur, Matrix.identity(f, m)) * self.coproduct
        return cur

    def _component_matrix(self, genus: int, p_i: int, q_i: int) -> Matrix:
        cur = self._iterated_mult(p_i)
        for _ in range(genus):
            cur = self.handle * cur
        return self._iterated_coproduct(q_i) * cur

    def _port_permutation(self, sources, width: int) -> Matrix:
        """Matrix of A^{(x)width} -> A^{(x)width} sending tensor slot t of the
        target to slot sources[t] of the source (Koszul signs per degrees)."""
        f = self.alg.field
        m = self.alg.dim
        degs = self.alg.degrees
        size = m ** width
        out = Matrix(f, size, size)
        for col in range(size):
            digits = []
            rem = col
            for _ in range(width):
                rem, d = divmod(rem, m)
                digits.append(d)
            digits.reverse()
            tgt = [digits[s] for s in sources]
            row = 0
            for d in tgt:
                row = row * m + d
            # Koszul sign: weighted inversions of the slot permutation
            sign = 1
            for t in range(width):
                s = sources[t]
                for t2 in range(t + 1, width):
                    if sources[t2] < s:
                        if (degs[digits[s]] * degs[digits[sources[t2]]]) % 2:
                            sign = -sign
            out.data[row][col] = f.one if sign > 0 else f.neg(f.one)
        return out

    def evaluate(self, cob: Cobordism) -> TQFTMap:
        """Evaluate a cobordism: each component contributes iterated product,
        handle factors, iterated coproduct; ports are wired by (signed)
        tensor permutations; closed components contribute scalar factors."""
        f = self.alg.field
        m = self.alg.dim
        if self.strict:
            for genus, ins, outs in cob.components:
                if not ins or not outs:
                    raise PreconditionError(
                        "strict positive-boundary mode refuses closed-off components"
                    )
        scalar = f.one
        open_comps = []
        for genus, ins, outs in cob.components:
            if not ins and not outs:
                # closed component: counit(handle^genus(1))
                vec = list(self.unit_vec)
                for _ in range(genus):
                    vec = self.handle.apply(vec)
                s = f.zero
                for i, c in enumerate(vec):
                    s = f.add(s, f.mul(c, self.counit_vec[i]))
                scalar = f.mul(scalar, s)
            else:
                open_comps.append((genus, ins, outs))
        block = None
        for genus, ins, outs in open_comps:
            mat = self._component_matrix(genus, len(ins), len(outs))
            piece = TQFTMap(len(ins), len(outs), mat)
            block = piece if block is None else block.tensor(piece)
        if block is None:
            out = Matrix(f, 1, 1)
            out.data[0][0] = scalar
            return TQFTMap(cob.p, cob.q, out)
        # wire global in-ports to component slots
        in_slots = [i for _, ins, _ in open_comps for i in ins]
        out_slots = [j for _, _, outs in open_comps for j in outs]
        pin = self._port_permutation(
            [port - 1 for port in in_slots], cob.p
        )
        # out: target global port j comes from block slot (position of j)
        pos = {port: k for k, port in enumerate(out_slots)}
        pout = self._port_permutation(
            [pos[j] for j in range(1, cob.q + 1)], cob.q
        )
        mat = pout * (block.matrix * pin)
        if scalar != f.one:
            mat = mat.scale(scalar)
        return TQFTMap(cob.p, cob.q, mat)


def tqft_evaluate(alg: FDAlgebra, frob: FrobeniusStructure, cob: Cobordism,
                  strict_positive_boundary: bool = False) -> TQFTMap:
    return FrobeniusTQFT(alg, frob, strict_positive_boundary).evaluate(cob)


# ---------------------------------------------------------------------------
# pants decompositions (used by the decomposition-invariance tests)


def _elementary(width: int, position: int, piece: Cobordism) -> Cobordism:
    """cyl^{(x)position} (x) piece (x) cyl^{(x)(width-position-1... )}."""
    left = identity_cobordism(position)
    right = identity_cobordism(width - position - piece.p)
    return left.tensor(piece).tensor(right)


def pants_decomposition(cob: Cobordism, rng=None) -> list:
    """A list of elementary layers whose left-to-right composition equals the
    cobordism (asserted).  A seeded rng randomizes the merge/split order."""
    import random

    rng = rng or random.Random(0)
    pants = preset_cobordism("pants")
    copants = preset_cobordism("copants")
    cap_in = preset_cobordism("cap_in")
    cap_out = preset_cobordism("cap_out")

    comps = list(cob.components)
    layers: list[Cobordism] = []
    # route global in-ports to a contiguous per-component layout
    in_order = [i for _, ins, _ in comps for i in ins]
    if cob.p:
        perm = [0] * cob.p
        for newpos, port in enumerate(in_order, start=1):
            perm[port - 1] = newpos
        layers.append(permutation_cobordism(perm))

    # per-component layer sequences on disjoint strands, concatenated by
    # padding with identities
    seqs = []
    for genus, ins, outs in comps:
        w = len(ins)
        seq = []
        if w == 0:
            seq.append(cap_out)
            w = 1
        while w > 1:
            pos = rng.randrange(w - 1)
            seq.append(_elementary(w, pos, pants))
            w -= 1
        for _ in range(genus):
            seq.append(_elementary(w, 0, copants))   # width w -> w + 1
            seq.append(_elementary(w + 1, 0, pants))  # and back to w
        target = len(outs)
        if target == 0:
            seq.append(cap_in)
            w = 0
        while w < target:
            pos = rng.randrange(w)
            seq.append(_elementary(w, pos, copants))
            w += 1
        seqs.append((seq, len(ins), target))

    depth = max((len(s) for s, _, _ in seqs), default=0)
    for level in range(depth):
        layer = None
        for seq, _, wout in seqs:
            piece = (seq[level] if level < len(seq)
                     else identity_cobordism(wout))
            layer = piece if layer is None else layer.tensor(piece)
        if layer is not None:
            layers.append(layer)

    # route contiguous component out-strands to the global out-ports
    out_order = [j for _, _, outs in comps for j in outs]
    if cob.q:
        layers.append(permutation_cobordism(out_order))

    chained = layers[0] if layers else identity_cobordism(0)
    for layer in layers[1:]:
        chained = chained.compose(layer)
    if chained != cob:
        raise CobordismError("pants decomposition does not recompose")
    return layers


# ---------------------------------------------------------------------------
# determinant lines


@dataclass(frozen=True)
class DetLine:
    """An element of the d-th power of the determinant line of a cobordism:
    rank = -chi(F), an integer coefficient against the canonical generator,
    and the twisting exponent."""

    cob: Cobordism
    rank: int
    coeff: int
    power: int = 1

    def __repr__(self):
        return f"DetLine(rank {self.rank}, coeff {self.coeff}, power {self.power})"


def det_line(cob: Cobordism, coeff: int = 1, power: int = 1) -> DetLine:
    """The determinant line of a cobordism whose components all have at
    least one in- and one out-circle; its rank is -chi.  The coefficient is
    stored already twisted: an orientation sign s enters as s**power."""
    for genus, ins, outs in cob.components:
        if not ins or not outs:
            raise CobordismError(
                "determinant lines need positive in- and out-boundary on every component"
            )
    if coeff == 0:
        raise CobordismError("a determinant-line element must be a generator multiple")
    return DetLine(cob, -cob.euler_characteristic(), coeff, power)


def twist_coeff(orientation_sign: int, power: int) -> int:
    """The d-th tensor power sends an orientation sign to its d-th power."""
    if orientation_sign not in (1, -1):
        raise CobordismError("orientation coefficient must be +-1")
    return orientation_sign ** power


def det_compose(x: DetLine, y: DetLine) -> DetLine:
    """Composition along the glued cobordism: ranks add, coefficients
    multiply (the short-exact-sequence isomorphism of determinant lines)."""
    if x.power != y.power:
        raise CobordismError("determinant lines twisted by different powers")
    glued = x.cob.compose(y.cob)
    rank = -glued.euler_characteristic()
    if rank != x.rank + y.rank:
        raise CobordismError("determinant rank is not additive (chi broke)")
    return DetLine(glued, rank, x.coeff * y.coeff, x.power)
