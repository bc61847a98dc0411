"""Finite groups, right G-sets and G-modules.

Everything acts on the right: ``t^(st) = (t^s)^t``.  Group elements are the
integers ``0..order-1`` with ``0`` the identity, and ``mul[s][t]`` is the
product ``st``.  A permutation group built by :meth:`FiniteGroup.from_permutations`
multiplies as "apply ``s`` first, then ``t``", which is exactly the right
action on points.
"""

from __future__ import annotations

import random
import threading
from collections import deque
from functools import cached_property

from . import fgab
from .errors import ValidationError
from .fgab import AbHom, FgAbGroup, GroupElem, matmul, matvec


class FiniteGroup:
    def __init__(self, table, check=True, labels=None):
        n = len(table)
        self.order = n
        self.mul = tuple(tuple(int(x) for x in row) for row in table)
        self.labels = labels
        if check:
            self._validate()
        self.identity = 0
        self.inverse = tuple(row.index(0) for row in self.mul)
        self.generators = self.small_generating_set()

    def _validate(self):
        n = self.order
        if n == 0:
            raise ValidationError("group", "empty table")
        for row in self.mul:
            if len(row) != n or sorted(row) != list(range(n)):
                raise ValidationError("latin-square", "table rows must be permutations")
        if any(self.mul[0][x] != x or self.mul[x][0] != x for x in range(n)):
            raise ValidationError("identity", "element 0 must be the identity")
        m = self.mul
        for a in range(n):
            for b in range(n):
                ab = m[a][b]
                for c in range(n):
                    if m[ab][c] != m[a][m[b][c]]:
                        raise ValidationError("associativity", f"({a}{b}){c} != {a}({b}{c})", triple=(a, b, c))

    # -- constructors ------------------------------------------------------
    @classmethod
    def cyclic(cls, n):
        g = cls([[(i + j) % n for j in range(n)] for i in range(n)], check=False)
        g.generators = (1,) if n > 1 else ()
        return g

    @classmethod
    def from_table(cls, table, generators=None):
        g = cls(table)
        g.generators = tuple(generators) if generators is not None else g.small_generating_set()
        if sorted(g.generated(g.generators)) != list(range(g.order)):
            raise ValidationError("generation", "declared generators do not generate the group")
        return g

    @classmethod
    def from_permutations(cls, perms, limit=10_000):
        """Close a list of permutations (image lists) under composition.

        The resulting group element ``i + 1`` is ``perms[i]`` (duplicates and
        identities aside); ``g.permutations`` holds the image list of each
        element.
        """
        perms = [tuple(p) for p in perms]
        degree = len(perms[0]) if perms else 0
        for p in perms:
            if len(p) != degree or sorted(p) != list(range(degree)):
                raise ValidationError("permutation", f"{list(p)} is not a permutation of 0..{degree - 1}")
        ident = tuple(range(degree))
        elems = [ident]
        index = {ident: 0}
        gen_idx = []
        for p in perms:
            if p not in index:
                index[p] = len(elems)
                elems.append(p)
            gen_idx.append(index[p])
        queue = deque(elems)
        while queue:
            a = queue.popleft()
            for p in perms:
                ap = tuple(p[a[x]] for x in range(degree))  # a first, then p
                if ap not in index:
                    if len(elems) >= limit:
                        raise ValidationError("closure", "generated group exceeds size limit")
                    index[ap] = len(elems)
                    elems.append(ap)
                    queue.append(ap)
        n = len(elems)
        table = [[index[tuple(b[a[x]] for x in range(degree))] for b in elems] for a in elems]
        g = cls(table, check=False)
        g.permutations = elems
        g.generators = tuple(i for i in dict.fromkeys(gen_idx) if i != 0)
        return g

    @classmethod
    def direct_product(cls, G, H):
        n, m = G.order, H.order
        table = [
            [G.mul[a // m][b // m] * m + H.mul[a % m][b % m] for b in range(n * m)]
            for a in range(n * m)
        ]
        g = cls(table, check=False)
        g.generators = tuple(s * m for s in G.generators) + tuple(H.generators)
        return g

    @classmethod
    def symmetric(cls, k):
        if k < 2:
            return cls.cyclic(1)
        cycle = list(range(1, k)) + [0]
        swap = [1, 0] + list(range(2, k))
        return cls.from_permutations([swap, cycle] if k > 2 else [swap])

    @classmethod
    def dihedral(cls, k):
        """Symmetries of a k-gon, order 2k."""
        rot = [(i + 1) % k for i in range(k)]
        ref = [(-i) % k for i in range(k)]
        return cls.from_permutations([rot, ref])

    @classmethod
    def quaternion(cls):
        # right-regular representation of Q8 on {1,i,j,k,-1,-i,-j,-k}
        def qmul(a, b):
            table = {
                (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
                (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
                (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
                (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
            }
            u, s = table[(a % 4, b % 4)]
            sign = (-1 if a >= 4 else 1) * (-1 if b >= 4 else 1) * s
            return u if sign > 0 else u + 4

        perms = [[qmul(x, g) for x in range(8)] for g in (1, 2)]
        return cls.from_permutations(perms)

    # -- basic structure ---------------------------------------------------
    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.mul == other.mul

    def __hash__(self):
        return hash(self.mul)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def power(self, g, k):
        r = 0
        if k < 0:
            g, k = self.inverse[g], -k
        for _ in range(k):
            r = self.mul[r][g]
        return r

    def element_order(self, g):
        k, x = 1, g
        while x != 0:
            x = self.mul[x][g]
            k += 1
        return k

    def conjugate(self, s, t):
        """``t^-1 s t``."""
        return self.mul[self.mul[self.inverse[t]][s]][t]

    @cached_property
    def is_abelian(self):
        return all(self.mul[a][b] == self.mul[b][a] for a in self for b in self)

    def cyclic_generator(self):
        """An element of full order, or ``None`` if the group is not cyclic."""
        return next((g for g in self if self.element_order(g) == self.order), None)

    def generated(self, gens, within=None):
        """Sorted elements of the subgroup generated by ``gens``."""
        seen = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for a in frontier:
                for s in gens:
                    b = self.mul[a][s]
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return tuple(sorted(seen))

    def small_generating_set(self, elements=None):
        elements = tuple(range(self.order)) if elements is None else tuple(elements)
        gens = []
        current = {0}
        for g in elements:
            if g not in current:
                gens.append(g)
                current = set(self.generated(gens))
        return tuple(gens)

    @cached_property
    def words(self):
        """For every element, ``(prefix, generator)`` with element = prefix * generator
        (a BFS spanning tree of the right Cayley graph); ``None`` for the identity."""
        tree = {0: None}
        queue = deque([0])
        while queue:
            a = queue.popleft()
            for s in self.generators:
                b = self.mul[a][s]
                if b not in tree:
                    tree[b] = (a, s)
                    queue.append(b)
        if len(tree) != self.order:
            raise ValidationError("generation", "generators do not generate the group")
        return tree

    # -- subgroups ---------------------------------------------------------
    def subgroup(self, elements):
        """Validate and return a subgroup as a sorted tuple of element indices."""
        H = tuple(sorted(set(int(h) for h in elements)))
        hs = set(H)
        if 0 not in hs:
            raise ValidationError("subgroup", "missing identity")
        for a in H:
            if self.inverse[a] not in hs:
                raise ValidationError("subgroup", f"not closed under inverse at {a}")
            for b in H:
                if self.mul[a][b] not in hs:
                    raise ValidationError("subgroup", f"not closed: {a}*{b}")
        return H

    def conjugate_subgroup(self, H, t):
        """``t^-1 H t``."""
        return tuple(sorted(self.conjugate(h, t) for h in H))

    def is_normal(self, H):
        return all(self.conjugate_subgroup(H, t) == tuple(H) for t in self)

    def right_coset_reps(self, H):
        """Representatives of ``H\\G`` (cosets ``Hg``), least index first in
        each coset; the identity is always the first representative."""
        H = self.subgroup(H)
        reps, seen = [], set()
        for g in range(self.order):
            if g in seen:
                continue
            reps.append(g)
            seen.update(self.mul[h][g] for h in H)
        return reps

    def coset_rep_of(self, H, reps, g):
        """The representative ``r`` in ``reps`` with ``Hg = Hr``."""
        coset = {self.mul[h][g] for h in H}
        for r in reps:
            if r in coset:
                return r
        raise ValidationError("coset", "representatives do not cover H\\G")

    @cached_property
    def subgroups(self):
        """Subgroups generated by at most two elements, plus the whole group.
        That is every subgroup for the groups of order at most 8."""
        found = {tuple(range(self.order))}
        for a in self:
            for b in self:
                found.add(self.generated([a, b]))
        return sorted(found, key=lambda h: (len(h), h))


class GSet:
    """Finite right G-set; ``act[g][t]`` is ``t^g``."""

    def __init__(self, group, act, check=True):
        self.group = group
        self.act = tuple(tuple(int(x) for x in p) for p in act)
        self.size = len(self.act[0]) if self.act else 0
        if check:
            self._validate()

    @classmethod
    def from_generators(cls, group, images):
        """Extend permutations given for ``group.generators`` to all elements."""
        if len(images) != len(group.generators):
            raise ValidationError("arity", f"need one permutation per generator ({len(group.generators)})")
        size = len(images[0]) if images else 0
        for p in images:
            if sorted(p) != list(range(size)):
                raise ValidationError("permutation", f"{list(p)} is not a permutation")
        by_gen = dict(zip(group.generators, [tuple(p) for p in images]))
        act = [None] * group.order
        act[0] = tuple(range(size))
        for g, w in _bfs_order(group):
            a, s = w
            act[g] = tuple(by_gen[s][act[a][t]] for t in range(size))
        return cls(group, act)

    @classmethod
    def cosets(cls, group, K):
        """The transitive G-set ``K\\G`` of right cosets, acted on by right
        multiplication; point 0 is the coset ``K``."""
        K = group.subgroup(K)
        reps = group.right_coset_reps(K)
        act = [[reps.index(group.coset_rep_of(K, reps, group.mul[r][g])) for r in reps] for g in group]
        return cls(group, act)

    @classmethod
    def trivial(cls, group, size=1):
        return cls(group, [tuple(range(size))] * group.order)

    def _validate(self):
        G = self.group
        if len(self.act) != G.order:
            raise ValidationError("arity", "need one permutation per group element")
        if self.act[0] != tuple(range(self.size)):
            raise ValidationError("identity-action", "identity must act trivially")
        for p in self.act:
            if sorted(p) != list(range(self.size)):
                raise ValidationError("permutation", f"{list(p)} is not a permutation")
        for s in G:
            for t in G:
                st = self.act[G.mul[s][t]]
                for x in range(self.size):
                    if st[x] != self.act[t][self.act[s][x]]:
                        raise ValidationError(
                            "right-action", f"x^(st) != (x^s)^t", sigma=s, tau=t, point=x
                        )

    def __eq__(self, other):
        return isinstance(other, GSet) and self.group == other.group and self.act == other.act

    def __hash__(self):
        return hash(self.act)

    def image(self, t, g):
        return self.act[g][t]

    def orbit(self, t):
        return sorted({self.act[g][t] for g in self.group})

    def orbits(self):
        seen, out = set(), []
        for t in range(self.size):
            if t not in seen:
                o = self.orbit(t)
                seen.update(o)
                out.append(o)
        return out

    def is_transitive(self):
        return self.size > 0 and len(self.orbits()) == 1

    def stabilizer(self, t):
        return tuple(g for g in self.group if self.act[g][t] == t)

    def fixed_points(self, H=None):
        H = range(self.group.order) if H is None else H
        return [t for t in range(self.size) if all(self.act[h][t] == t for h in H)]

    def transporter(self, t, u):
        """Least group element carrying ``t`` to ``u``, or ``None``."""
        return next((g for g in self.group if self.act[g][t] == u), None)

    def product(self, other):
        """Diagonal action on pairs; pair ``(a, b)`` is point ``a * other.size + b``."""
        m = other.size
        act = [
            tuple(self.act[g][a] * m + other.act[g][b] for a in range(self.size) for b in range(m))
            for g in self.group
        ]
        return GSet(self.group, act, check=False)


def _bfs_order(group):
    """Non-identity elements in BFS order with their ``(prefix, generator)``."""
    tree = group.words
    order = []
    queue = deque([0])
    children = {}
    for g, w in tree.items():
        if w is not None:
            children.setdefault(w[0], []).append(g)
    while queue:
        a = queue.popleft()
        for b in children.get(a, []):
            order.append((b, tree[b]))
            queue.append(b)
    return order


def equivalent_mod(group_, X, Y):
    """Whether two integer matrices induce the same map into ``group_``."""
    n = len(X[0]) if X else 0
    for j in range(n):
        col = [X[i][j] - Y[i][j] for i in range(len(X))]
        if not group_.is_zero_vector(col):
            return False
    return True


class GModule:
    """A presented abelian group with a right action of a finite group.

    ``matrices[g]`` acts on column coordinate vectors, so ``b^g = A_g b`` and
    the right-action law reads ``A_(st) = A_t A_s`` modulo relations.
    """

    tabulated = False

    def __init__(self, group, base, matrices, check=True):
        self.group = group
        self.base = base
        if isinstance(matrices, dict):
            matrices = _extend_matrices(group, base, matrices)
        if len(matrices) != group.order:
            raise ValidationError("arity", "need one action matrix per group element")
        self.matrices = tuple(tuple(tuple(int(a) for a in row) for row in A) for A in matrices)
        if check:
            self._validate()
        # action in Smith coordinates: y -> U A Uinv y
        self._smith_action = tuple(
            matmul(matmul(base._U, [list(r) for r in A], base.rank, base.rank), base._Uinv, base.rank, base.rank)
            if base.rank
            else []
            for A in self.matrices
        )
        self._h1_cache = {}
        self._h1_lock = threading.Lock()

    @classmethod
    def trivial_action(cls, group, base):
        I = fgab.identity(base.rank)
        return cls(group, base, [I] * group.order, check=False)

    @classmethod
    def from_generators(cls, group, base, gen_matrices):
        """Action specified on ``group.generators`` (list aligned with them)."""
        if len(gen_matrices) != len(group.generators):
            raise ValidationError("arity", f"need one matrix per generator ({len(group.generators)})")
        return cls(group, base, dict(zip(group.generators, gen_matrices)))

    def _validate(self):
        G, B = self.group, self.base
        mats = [[list(r) for r in A] for A in self.matrices]
        for g, A in enumerate(mats):
            if len(A) != B.rank or any(len(r) != B.rank for r in A):
                raise ValidationError("dimension", f"action matrix of {g} must be {B.rank}x{B.rank}")
            AbHom(B, B, A)  # raises on ill-defined maps
        if not equivalent_mod(B, mats[0], fgab.identity(B.rank)):
            raise ValidationError("identity-action", "identity must act trivially")
        for s in G:
            for t in G:
                lhs = mats[G.mul[s][t]]
                rhs = matmul(mats[t], mats[s], B.rank, B.rank)
                if not equivalent_mod(B, lhs, rhs):
                    raise ValidationError(
                        "composition", "b^(st) != (b^s)^t", sigma=s, tau=t
                    )

    def __eq__(self, other):
        return (
            isinstance(other, GModule)
            and self.group == other.group
            and self.base == other.base
            and self.matrices == other.matrices
        )

    def __hash__(self):
        return hash((self.base, self.matrices))

    def __repr__(self):
        return f"GModule({self.base.describe()} over group of order {self.group.order})"

    def matrix(self, g):
        return [list(r) for r in self.matrices[g]]

    # -- element interface shared with TabulatedModule ---------------------
    @property
    def zero(self):
        return self.base.zero

    def elem(self, coords):
        return self.base.elem(coords)

    def act(self, b, g):
        if b.owner is not self.base and b.owner != self.base:
            raise ValidationError("owner", "element not in this module")
        y = matvec(self._smith_action[g], b.canonical) if self.base.rank else []
        return self.base.from_smith(y)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a.is_zero()

    def elements(self):
        return self.base.elements()

    @property
    def size(self):
        return self.base.order

    # -- constructions -----------------------------------------------------
    def direct_sum(self, other):
        if other.group != self.group:
            raise ValidationError("group", "direct sum over different groups")
        B = fgab.direct_sum([self.base, other.base])
        mats = [
            fgab.block_diagonal(
                [(self.matrix(g), self.base.rank, self.base.rank), (other.matrix(g), other.base.rank, other.base.rank)]
            )
            for g in self.group
        ]
        return GModule(self.group, B, mats, check=False)

    def fixed_submodule(self, H):
        """``M^H`` as ``(group, embedding)``."""
        B = self.base
        rows = []
        targets = []
        for h in H:
            if h == 0:
                continue
            A = self.matrix(h)
            rows.extend([[A[i][j] - int(i == j) for j in range(B.rank)] for i in range(B.rank)])
            targets.append(B)
        if not targets:
            return B, AbHom(B, B, fgab.identity(B.rank), check=False)
        T = fgab.direct_sum(targets)
        return AbHom(B, T, rows, check=False).kernel()

    def quotient_by_multiple(self, k):
        """``M / kM`` with the induced action and the projection matrix (identity)."""
        B = self.base
        rels = fgab.hstack(B.relation_matrix, [[k * int(i == j) for j in range(B.rank)] for i in range(B.rank)], rows=B.rank)
        Q = FgAbGroup(B.rank, rels)
        return GModule(self.group, Q, [self.matrix(g) for g in self.group], check=False)

    def restrict_scalars(self, base_iso, inverse):
        """Transport the action along an isomorphism of the underlying group."""
        mats = [
            matmul(matmul(base_iso.matrix, self.matrix(g), self.base.rank, self.base.rank), inverse.matrix, self.base.rank, inverse.source.rank)
            for g in self.group
        ]
        return GModule(self.group, base_iso.target, mats, check=False)

    def smith_normalized(self):
        """Isomorphic module on the diagonal presentation of the base group,
        plus ``(to, from)`` isomorphisms of the underlying groups."""
        D, to_d, from_d = self.base.smith_form()
        return self.restrict_scalars(to_d, from_d), to_d, from_d


def _extend_matrices(group, base, by_gen):
    n = base.rank
    mats = [None] * group.order
    mats[0] = fgab.identity(n)
    missing = [s for s in group.generators if s not in by_gen]
    if missing:
        raise ValidationError("arity", f"no action given for generators {missing}")
    for g, (a, s) in _bfs_order(group):
        mats[g] = matmul([list(r) for r in by_gen[s]], mats[a], n, n)
        # keep entries small
        mats[g] = _reduce_matrix(base, mats[g])
    return mats


def _reduce_matrix(base, A):
    n = base.rank
    cols = [base.elem([A[i][j] for i in range(n)]).coords for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def submodule(module, vectors):
    """Sub-G-module generated by ``vectors`` (coordinate lists in ``module.base``).

    Returns ``(M0, embedding)`` where ``M0``'s generators are exactly the given
    vectors and ``embedding`` is the inclusion ``M0 -> module.base``.  Raises
    if the span is not G-stable.
    """
    B = module.base
    k = len(vectors)
    X = [[vectors[j][i] for j in range(k)] for i in range(B.rank)]
    gen_map = AbHom(FgAbGroup(k), B, X, check=False)
    M0, _ = gen_map.image()
    mats = []
    for g in module.group:
        A = module.matrix(g)
        cols = []
        for j in range(k):
            img = matvec(A, vectors[j])
            c = gen_map.preimage_vector(img)
            if c is None:
                raise ValidationError("submodule", "span is not stable under the group action", sigma=g, generator=j)
            cols.append(c)
        mats.append([[cols[j][i] for j in range(k)] for i in range(k)])
    sub = GModule(module.group, M0, mats, check=False)
    return sub, AbHom(M0, B, X, check=False)


class EquivariantHom:
    """Equivariant homomorphism of G-modules over the same group."""

    def __init__(self, source, target, matrix, check=True):
        if source.group != target.group:
            raise ValidationError("group", "modules over different groups")
        self.source = source
        self.target = target
        self.hom = AbHom(source.base, target.base, matrix, check=check)
        if check:
            self._validate()

    def _validate(self):
        F = self.hom.matrix
        s, t = self.source.base.rank, self.target.base.rank
        for g in self.source.group:
            lhs = matmul(F, self.source.matrix(g), s, s)
            rhs = matmul(self.target.matrix(g), F, t, s)
            if not equivalent_mod(self.target.base, lhs, rhs):
                raise ValidationError("equivariance", "phi(m^s) != phi(m)^s", sigma=g)

    def __call__(self, m):
        return self.hom(m)

    @property
    def matrix(self):
        return self.hom.matrix


def equivariant_homs(source, target):
    """Basis of ``Hom_G(source, target)`` lifted to integer matrices.

    Solves the integer constraints ``F R_s = 0`` and ``F A_g = A'_g F`` modulo
    target relations for ``g`` in the generators; returns a list of matrices
    spanning all solutions modulo matrices that induce the zero map.
    """
    s, t = source.base.rank, target.base.rank
    nvar = s * t
    T = target.base
    conds = []  # each condition: t x nvar block, the image lands in T
    for j in range(source.base.num_relations):
        block = [[0] * nvar for _ in range(t)]
        for i in range(t):
            for l in range(s):
                block[i][i * s + l] = source.base.relations[l][j]
        conds.append(block)
    for g in source.group.generators:
        A = source.matrix(g)
        Ap = target.matrix(g)
        for j in range(s):
            block = [[0] * nvar for _ in range(t)]
            for i in range(t):
                for l in range(s):
                    block[i][i * s + l] += A[l][j]  # (F A)_{ij}
                for m in range(t):
                    block[i][m * s + j] -= Ap[i][m]  # (A' F)_{ij}
            conds.append(block)
    if not conds or nvar == 0:
        basis = [[int(v == w) for w in range(nvar)] for v in range(nvar)]
    else:
        rows = [r for block in conds for r in block]
        tgt = fgab.direct_sum([T] * len(conds))
        K, emb = AbHom(FgAbGroup(nvar), tgt, rows, check=False).kernel()
        basis = [[emb.matrix[v][c] for v in range(nvar)] for c in range(K.rank)]
    return [[[vec[i * s + l] for l in range(s)] for i in range(t)] for vec in basis]


def random_equivariant_hom(source, target, rng, spread=3):
    basis = equivariant_homs(source, target)
    s, t = source.base.rank, target.base.rank
    F = [[0] * s for _ in range(t)]
    for B in basis:
        c = rng.randint(-spread, spread)
        for i in range(t):
            for l in range(s):
                F[i][l] += c * B[i][l]
    return EquivariantHom(source, target, F)


def random_equivariant_pointmap(gset, module, seed, spread=4):
    """A map ``g: points -> module`` with ``g(t^s) = g(t)^s``.

    Free values are drawn on orbit representatives from the fixed submodule of
    the stabilizer and transported along each orbit.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    G = gset.group
    values = [None] * gset.size
    for orbit in gset.orbits():
        t = orbit[0]
        stab = gset.stabilizer(t)
        F, emb = module.fixed_submodule(stab)
        c = [rng.randint(-spread, spread) for _ in range(F.rank)]
        v = module.base.elem(matvec(emb.matrix, c)) if F.rank else module.zero
        for g in G:
            u = gset.act[g][t]
            if values[u] is None:
                values[u] = module.act(v, g)
    return values


def is_equivariant_pointmap(gset, module, values):
    for g in gset.group:
        for t in range(gset.size):
            if values[gset.act[g][t]] != module.act(values[t], g):
                return (t, g)
    return None


class TabulatedModule:
    """A finite abelian group given by element indices, an addition routine and
    a permutation action.

    ``add`` is a callable on indices (a full table is wasteful for the point
    groups of curves, which run into the thousands).
    """

    tabulated = True

    def __init__(self, group, size, add, neg, zero, action, check=True):
        self.group = group
        self.size = size
        self._add = add
        self._neg = neg
        self.zero = zero
        self.action = tuple(tuple(p) for p in action)
        if check:
            self._validate()

    def _validate(self):
        G = self.group
        if len(self.action) != G.order:
            raise ValidationError("arity", "need one permutation per group element")
        if self.action[0] != tuple(range(self.size)):
            raise ValidationError("identity-action", "identity must act trivially")
        for s in G:
            for t in G:
                st = self.action[G.mul[s][t]]
                for x in range(self.size):
                    if st[x] != self.action[t][self.action[s][x]]:
                        raise ValidationError("composition", "b^(st) != (b^s)^t", sigma=s, tau=t)

    def act(self, b, g):
        return self.action[g][b]

    def add(self, a, b):
        return self._add(a, b)

    def neg(self, a):
        return self._neg(a)

    def sub(self, a, b):
        return self._add(a, self._neg(b))

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == self.zero

    def elements(self):
        return iter(range(self.size))

    def check_automorphisms(self, samples=None, rng=None):
        """Exhaustive (or sampled) additivity of every action map."""
        pairs = (
            [(a, b) for a in range(self.size) for b in range(self.size)]
            if samples is None
            else [(rng.randrange(self.size), rng.randrange(self.size)) for _ in range(samples)]
        )
        for g in self.group:
            p = self.action[g]
            for a, b in pairs:
                if p[self._add(a, b)] != self._add(p[a], p[b]):
                    return (g, a, b)
        return None
