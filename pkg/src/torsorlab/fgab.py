"""Finitely generated abelian groups as integer lattices modulo relation lattices.

Matrices are plain ``list[list[int]]`` in row-major order.  Python integers
are unbounded, so nothing here can overflow no matter how large the
intermediate entries of a reduction grow.

A group ``Z^n / L`` is stored with the Smith normal form ``U R V = S`` of its
relation matrix ``R``.  The coordinates ``y = U x`` split the group into the
cyclic factors ``Z/d_i``; elements are kept in those coordinates, reduced
modulo each ``d_i``, which makes the representation canonical per coset.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from math import gcd, lcm, prod

from .errors import ValidationError

IntMatrix = list  # list[list[int]], rows first


# ---------------------------------------------------------------------------
# Plain matrix helpers


def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def shape(A, cols=None):
    """Return ``(rows, cols)``; ``cols`` disambiguates a matrix with no rows."""
    if A:
        return len(A), len(A[0])
    return 0, (cols or 0)


def matmul(A, B, inner=None, cols=None):
    """Product ``A @ B``.

    ``inner`` and ``cols`` are only consulted when an operand is empty and its
    shape cannot be read off the nested lists.
    """
    if not A:
        return []
    n = len(A[0]) if A[0] is not None else inner
    if not B or n == 0:
        c = len(B[0]) if B else (cols or 0)
        return zeros(len(A), c)
    BT = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in BT] for row in A]


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A, cols=None):
    rows, c = shape(A, cols)
    return [[A[i][j] for i in range(rows)] for j in range(c)]


def hstack(*blocks, rows):
    out = [[] for _ in range(rows)]
    for B in blocks:
        if not B:
            continue
        for i in range(rows):
            out[i].extend(B[i])
    return out


def block_diagonal(blocks):
    """``blocks`` is a list of ``(matrix, rows, cols)`` triples."""
    total_cols = sum(c for _, _, c in blocks)
    out = []
    offset = 0
    for M, r, c in blocks:
        for i in range(r):
            row = [0] * total_cols
            row[offset:offset + c] = M[i]
            out.append(row)
        offset += c
    return out


def determinant(A):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Normal forms


def _smith(M, cols=None, want_inverse=False):
    m, n = shape(M, cols)
    A = [list(row) for row in M]
    U = identity(m)
    Uinv = identity(m) if want_inverse else None
    VT = identity(n)

    def row_add(i, j, c):  # row_i += c * row_j
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        if Uinv is not None:
            for row in Uinv:
                row[j] -= c * row[i]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        if Uinv is not None:
            for row in Uinv:
                row[i], row[j] = row[j], row[i]

    def col_add(i, j, c):  # col_i += c * col_j
        for row in A:
            row[i] += c * row[j]
        VT[i] = [a + c * b for a, b in zip(VT[i], VT[j])]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        VT[i], VT[j] = VT[j], VT[i]

    def bring_to_pivot(t, i, j):
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        bring_to_pivot(t, best[1], best[2])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                bring_to_pivot(t, i, j)
                continue
            offender = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if offender is None:
                break
            row_add(t, offender, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
            if Uinv is not None:
                for row in Uinv:
                    row[t] = -row[t]
    V = transpose(VT, n) if n else []
    return U, A, V, Uinv


def smith_normal_form(M, cols=None):
    """Return ``(U, S, V)`` with ``U @ M @ V == S``.

    ``S`` is diagonal with nonnegative entries ``d_1 | d_2 | ...`` (zeros last)
    and ``U``, ``V`` are unimodular.  Pivoting uses the entry of least absolute
    value in the remaining block.
    """
    U, S, V, _ = _smith(M, cols)
    return U, S, V


def column_echelon(M, cols=None):
    """Column-reduce ``M``: returns ``(H, V, r)`` with ``M @ V == H``.

    The first ``r`` columns of ``H`` are a basis of the column lattice of
    ``M`` and the remaining columns of ``V`` are a basis of its integer kernel.
    """
    m, n = shape(M, cols)
    HT = transpose(M, n)
    VT = identity(n)
    c = 0
    for i in range(m):
        if c >= n:
            break
        while True:
            best = None
            for j in range(c, n):
                a = HT[j][i]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), j)
            if best is None:
                break
            j0 = best[1]
            if j0 != c:
                HT[c], HT[j0] = HT[j0], HT[c]
                VT[c], VT[j0] = VT[j0], VT[c]
            p = HT[c][i]
            clean = True
            for j in range(c + 1, n):
                a = HT[j][i]
                if a:
                    q = a // p
                    HT[j] = [x - q * y for x, y in zip(HT[j], HT[c])]
                    VT[j] = [x - q * y for x, y in zip(VT[j], VT[c])]
                    clean = clean and HT[j][i] == 0
            if clean:
                break
        if HT[c][i]:
            c += 1
    return transpose(HT, m) if n else zeros(m, 0), transpose(VT, n) if n else [], c


def integer_kernel(M, cols=None):
    """Basis (as the columns of an ``n x k`` matrix) of ``{x in Z^n : M x = 0}``."""
    m, n = shape(M, cols)
    _, V, r = column_echelon(M, n)
    return [row[r:] for row in V], n - r


def lattice_basis(M, cols=None):
    """Basis of the lattice spanned by the columns of ``M``; returns ``(B, r)``."""
    m, n = shape(M, cols)
    H, _, r = column_echelon(M, n)
    return [row[:r] for row in H], r


class IntegerSystem:
    """Solver for ``M x = b`` over the integers with the SNF of ``M`` cached."""

    def __init__(self, M, cols=None):
        self.rows, self.cols = shape(M, cols)
        self._U, S, self._V, _ = _smith(M, self.cols)
        self._diag = [S[i][i] for i in range(min(self.rows, self.cols)) if S[i][i]]

    def solve(self, b):
        """One integer solution of ``M x = b`` or ``None`` if none exists."""
        c = matvec(self._U, b)
        y = [0] * self.cols
        for i, d in enumerate(self._diag):
            q, r = divmod(c[i], d)
            if r:
                return None
            y[i] = q
        if any(c[len(self._diag):]):
            return None
        return matvec(self._V, y) if self.cols else []


def solve_integer(M, b, cols=None):
    return IntegerSystem(M, cols).solve(b)


# ---------------------------------------------------------------------------
# Groups


class FgAbGroup:
    """The group ``Z^n / L`` with ``L`` spanned by the columns of ``relations``.

    Two groups compare equal only when their presentations are identical;
    use :meth:`is_isomorphic` to compare invariant factors.
    """

    def __init__(self, ambient_rank, relations=None):
        n = int(ambient_rank)
        if n < 0:
            raise ValidationError("dimension", "negative ambient rank")
        if relations is None:
            relations = [[] for _ in range(n)]
        relations = [[int(a) for a in row] for row in relations]
        if len(relations) != n and not (n == 0 and relations == []):
            raise ValidationError(
                "dimension",
                f"relation matrix has {len(relations)} rows, expected {n}",
            )
        widths = {len(row) for row in relations}
        if len(widths) > 1:
            raise ValidationError("dimension", "ragged relation matrix")
        self.rank = n
        self.num_relations = widths.pop() if widths else 0
        self.relations = tuple(tuple(row) for row in relations)
        U, S, _, Uinv = _smith(relations, self.num_relations, want_inverse=True)
        self._U = U
        self._Uinv = Uinv
        self.factors = tuple(
            S[i][i] if i < min(n, self.num_relations) else 0 for i in range(n)
        )

    # -- identity ----------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, FgAbGroup)
            and self.rank == other.rank
            and self.relations == other.relations
            and self.num_relations == other.num_relations
        )

    def __hash__(self):
        return hash((self.rank, self.relations))

    def __repr__(self):
        return f"FgAbGroup({self.describe()})"

    def describe(self):
        parts = ["Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors]
        return " x ".join(parts) if parts else "0"

    @property
    def relation_matrix(self):
        return [list(row) for row in self.relations]

    @cached_property
    def invariant_factors(self):
        """Invariant factors with the units dropped; ``0`` stands for ``Z``."""
        return [d for d in self.factors if d != 1]

    def is_isomorphic(self, other):
        return self.invariant_factors == other.invariant_factors

    @property
    def is_finite(self):
        return 0 not in self.factors

    @property
    def is_trivial(self):
        return not self.invariant_factors

    @property
    def order(self):
        """Number of elements, or ``0`` for an infinite group."""
        return prod(self.factors) if self.is_finite else 0

    @cached_property
    def free_rank(self):
        return self.factors.count(0)

    # -- elements ----------------------------------------------------------
    def canonical(self, coords):
        if len(coords) != self.rank:
            raise ValidationError("dimension", f"expected {self.rank} coordinates")
        y = matvec(self._U, coords)
        return tuple(v % d if d else v for v, d in zip(y, self.factors))

    def elem(self, coords):
        return GroupElem(self, self.canonical([int(c) for c in coords]))

    def __call__(self, *coords):
        return self.elem(coords)

    @property
    def zero(self):
        return GroupElem(self, (0,) * self.rank)

    def gens(self):
        return [self.elem([int(i == j) for j in range(self.rank)]) for i in range(self.rank)]

    def is_zero_vector(self, coords):
        return not any(self.canonical(coords))

    def elements(self):
        """Iterate over all elements of a finite group."""
        if not self.is_finite:
            raise ValidationError("finiteness", "cannot enumerate an infinite group")
        ranges = [range(d) for d in self.factors]
        for y in itertools.product(*ranges):
            yield GroupElem(self, tuple(y))

    def from_smith(self, y):
        """Element with the given Smith-coordinate vector (reduced on the way)."""
        return GroupElem(self, tuple(v % d if d else v for v, d in zip(y, self.factors)))

    # -- structure ---------------------------------------------------------
    @cached_property
    def _nonunit(self):
        return [i for i, d in enumerate(self.factors) if d != 1]

    def smith_form(self):
        """Return ``(D, to_d, from_d)``: ``D`` is the diagonal presentation on the
        non-unit factors, ``to_d: self -> D`` and ``from_d: D -> self`` are
        mutually inverse isomorphisms."""
        idx = self._nonunit
        k = len(idx)
        rels = [[d if (i == j and d) else 0 for j, d in enumerate(self.invariant_factors) if d] for i in range(k)]
        D = FgAbGroup(k, rels)
        to_d = [list(self._U[i]) for i in idx]
        from_d = [[self._Uinv[r][i] for i in idx] for r in range(self.rank)]
        return D, AbHom(self, D, to_d, check=False), AbHom(D, self, from_d, check=False)


def cyclic(d):
    """``Z/d``; ``cyclic(0)`` is ``Z``."""
    return FgAbGroup(1, [[d]] if d else [[]])


def free(n):
    return FgAbGroup(n)


def diagonal_group(factors):
    factors = list(factors)
    nz = [d for d in factors if d]
    k = len(factors)
    cols = [i for i, d in enumerate(factors) if d]
    rels = [[factors[i] if i == c else 0 for c in cols] for i in range(k)]
    return FgAbGroup(k, rels)


def direct_sum(groups):
    blocks = [(g.relation_matrix, g.rank, g.num_relations) for g in groups]
    return FgAbGroup(sum(g.rank for g in groups), block_diagonal(blocks))


class GroupElem:
    """Element of an :class:`FgAbGroup`, stored in reduced Smith coordinates."""

    __slots__ = ("owner", "canonical")

    def __init__(self, owner, canonical):
        self.owner = owner
        self.canonical = canonical

    @property
    def coords(self):
        """A representative in the original coordinates of the presentation."""
        return matvec(self.owner._Uinv, self.canonical)

    def _check(self, other):
        if not isinstance(other, GroupElem):
            raise TypeError(f"cannot combine GroupElem with {type(other).__name__}")
        if other.owner is not self.owner and other.owner != self.owner:
            raise ValidationError("owner", "elements of different groups")

    def __add__(self, other):
        self._check(other)
        return GroupElem(
            self.owner,
            tuple((a + b) % d if d else a + b for a, b, d in zip(self.canonical, other.canonical, self.owner.factors)),
        )

    def __neg__(self):
        return GroupElem(
            self.owner, tuple((-a) % d if d else -a for a, d in zip(self.canonical, self.owner.factors))
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return GroupElem(
            self.owner, tuple((k * a) % d if d else k * a for a, d in zip(self.canonical, self.owner.factors))
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GroupElem):
            return NotImplemented
        self._check(other)
        return self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __bool__(self):
        return any(self.canonical)

    def is_zero(self):
        return not any(self.canonical)

    def order(self):
        """Least ``k > 0`` with ``k*x == 0``; ``0`` means infinite order."""
        k = 1
        for a, d in zip(self.canonical, self.owner.factors):
            if a == 0:
                continue
            if d == 0:
                return 0
            k = lcm(k, d // gcd(a, d))
        return k

    def __repr__(self):
        return f"GroupElem({list(self.coords)} in {self.owner.describe()})"


class AbHom:
    """Homomorphism ``Z^n/L_s -> Z^m/L_t`` given by an ``m x n`` integer matrix."""

    def __init__(self, source, target, matrix, check=True):
        matrix = [[int(a) for a in row] for row in matrix]
        if len(matrix) != target.rank or any(len(row) != source.rank for row in matrix):
            raise ValidationError(
                "dimension", f"matrix must be {target.rank} x {source.rank}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            images = matmul(matrix, source.relation_matrix, source.rank, source.num_relations)
            for j in range(source.num_relations):
                col = [images[i][j] for i in range(target.rank)]
                if not target.is_zero_vector(col):
                    raise ValidationError(
                        "well-definedness",
                        f"relation column {j} of the source does not map into the target relations",
                        column=j,
                    )

    def __call__(self, x):
        if x.owner != self.source:
            raise ValidationError("owner", "element not in the source group")
        return self.target.elem(matvec(self.matrix, x.coords))

    def apply_vector(self, coords):
        return self.target.elem(matvec(self.matrix, coords))

    def __eq__(self, other):
        if not isinstance(other, AbHom):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        return all(self(g) == other(g) for g in self.source.gens())

    __hash__ = None

    def compose(self, inner):
        """``self o inner``."""
        if inner.target != self.source:
            raise ValidationError("owner", "composition of incompatible maps")
        return AbHom(
            inner.source,
            self.target,
            matmul(self.matrix, inner.matrix, self.source.rank, inner.source.rank),
            check=False,
        )

    def is_zero(self):
        return all(not self(g) for g in self.source.gens())

    @cached_property
    def _preimage_system(self):
        t = self.target
        A = hstack(self.matrix, t.relation_matrix, rows=t.rank)
        return IntegerSystem(A, self.source.rank + t.num_relations)

    def preimage(self, y):
        """Some ``x`` with ``self(x) == y``, or ``None`` if ``y`` is not in the image."""
        sol = self._preimage_system.solve(y.coords)
        if sol is None:
            return None
        return self.source.elem(sol[: self.source.rank])

    def preimage_vector(self, coords):
        sol = self._preimage_system.solve(list(coords))
        return None if sol is None else sol[: self.source.rank]

    @cached_property
    def _kernel_lattice(self):
        # {x : M x in L_t}: project the integer kernel of [M | R_t] to x.
        s, t = self.source, self.target
        K, k = integer_kernel(
            hstack(self.matrix, t.relation_matrix, rows=t.rank) if t.rank else [],
            s.rank + t.num_relations,
        )
        return lattice_basis(K[: s.rank], k)

    def kernel(self):
        """Return ``(K, embedding)`` with ``embedding: K -> source`` injective."""
        s = self.source
        B, r = self._kernel_lattice
        solver = IntegerSystem(B, r)
        rels = []
        for j in range(s.num_relations):
            c = solver.solve([s.relations[i][j] for i in range(s.rank)])
            if c is None:
                raise AssertionError("source relations must lie in the kernel lattice")
            rels.append(c)
        K = FgAbGroup(r, transpose(rels, r) if rels else [[] for _ in range(r)])
        return K, AbHom(K, s, B, check=False)

    def image(self):
        """Return ``(I, embedding)``: ``I`` is generated by the images of the source
        generators, ``embedding: I -> target``."""
        B, r = self._kernel_lattice
        I = FgAbGroup(self.source.rank, B)
        return I, AbHom(I, self.target, self.matrix, check=False)

    def cokernel(self):
        """Return ``(Q, projection)`` with ``Q = target / image``."""
        t = self.target
        rels = hstack(t.relation_matrix, self.matrix, rows=t.rank)
        Q = FgAbGroup(t.rank, rels)
        return Q, AbHom(t, Q, identity(t.rank), check=False)

    def is_injective(self):
        return self.kernel()[0].is_trivial

    def is_surjective(self):
        return self.cokernel()[0].is_trivial
