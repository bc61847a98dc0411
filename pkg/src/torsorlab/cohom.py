"""Degree-one group cohomology of finite groups with coefficients in G-modules.

A 1-cocycle is a map ``a: H -> M`` on a subgroup ``H`` (the *domain*) with
``a(st) = a(s)^t + a(t)``.  ``H^1`` is computed as ``ker d1 / im d0`` on
cochains that omit the identity slot; cocycles on a finite group are already
pinned down by the condition for pairs ``(s, g)`` with ``g`` running over a
generating set, so ``d1`` only imposes those rows.
"""

from __future__ import annotations

from . import fgab
from .errors import IdentityViolation, UnsupportedRepresentation, ValidationError
from .fgab import AbHom, FgAbGroup, matvec


def _domain(module, domain):
    G = module.group
    if domain is None:
        return tuple(range(G.order))
    return G.subgroup(domain)


def find_cocycle_violation(module, values, domain=None):
    """First pair ``(s, t)`` with ``a(st) != a(s)^t + a(t)``, or ``None``."""
    G = module.group
    domain = _domain(module, domain)
    for s in domain:
        for t in domain:
            lhs = values[G.mul[s][t]]
            rhs = module.add(module.act(values[s], t), values[t])
            if not module.eq(lhs, rhs):
                return (s, t)
    return None


def is_cocycle(module, values, domain=None):
    return find_cocycle_violation(module, values, domain) is None


class Cocycle1:
    """A validated 1-cocycle; ``values`` maps every domain element to ``M``."""

    def __init__(self, module, values, domain=None, check=True):
        self.module = module
        self.domain = _domain(module, domain)
        if not isinstance(values, dict):
            values = list(values)
            if len(values) == module.group.order and len(self.domain) != module.group.order:
                values = {h: values[h] for h in self.domain}
            else:
                values = dict(zip(self.domain, values))
        if set(values) != set(self.domain):
            raise ValidationError("arity", "cocycle needs exactly one value per domain element")
        self.values = values
        if check:
            bad = find_cocycle_violation(module, values, self.domain)
            if bad is not None:
                s, t = bad
                raise IdentityViolation(
                    "cocycle condition a(st) = a(s)^t + a(t)",
                    sigma=s,
                    tau=t,
                    lhs=values[module.group.mul[s][t]],
                    rhs=module.add(module.act(values[s], t), values[t]),
                )

    def __getitem__(self, g):
        return self.values[g]

    def _same(self, other):
        if other.module is not self.module and other.module != self.module:
            raise ValidationError("module", "cocycles over different modules")
        if other.domain != self.domain:
            raise ValidationError("domain", "cocycles over different subgroups")

    def __add__(self, other):
        self._same(other)
        M = self.module
        return Cocycle1(M, {g: M.add(self[g], other[g]) for g in self.domain}, self.domain, check=False)

    def __neg__(self):
        M = self.module
        return Cocycle1(M, {g: M.neg(self[g]) for g in self.domain}, self.domain, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        M = self.module
        out = {}
        for g in self.domain:
            v = M.zero
            x = self[g] if k >= 0 else M.neg(self[g])
            for _ in range(abs(k)):
                v = M.add(v, x)
            out[g] = v
        return Cocycle1(M, out, self.domain, check=False)

    def __eq__(self, other):
        if not isinstance(other, Cocycle1):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.module == other.module
            and all(self.module.eq(self[g], other[g]) for g in self.domain)
        )

    __hash__ = None

    def __repr__(self):
        return f"Cocycle1({ {g: self[g] for g in self.domain} })"

    def is_zero(self):
        return all(self.module.is_zero(self[g]) for g in self.domain)


def coboundary_of(module, m, domain=None):
    """The cocycle ``s -> m^s - m``."""
    domain = _domain(module, domain)
    return Cocycle1(module, {s: module.sub(module.act(m, s), m) for s in domain}, domain, check=False)


def zero_cocycle(module, domain=None):
    domain = _domain(module, domain)
    return Cocycle1(module, {s: module.zero for s in domain}, domain, check=False)


def is_coboundary(cocycle):
    """Return ``m`` with ``cocycle(s) = m^s - m`` for all ``s``, or ``None``."""
    M = cocycle.module
    if M.tabulated:
        for m in M.elements():
            if all(M.eq(M.sub(M.act(m, s), m), cocycle[s]) for s in cocycle.domain):
                return m
        return None
    return h1(M, cocycle.domain).coboundary_witness(cocycle)


def restrict_cocycle(cocycle, H):
    M = cocycle.module
    H = M.group.subgroup(H)
    if not set(H) <= set(cocycle.domain):
        raise ValidationError("subgroup", "restriction target is not inside the cocycle's domain")
    # the cocycle law on a subgroup is a subset of the law on the domain
    return Cocycle1(M, {h: cocycle[h] for h in H}, H, check=False)


def conjugate_cocycle(cocycle, tau):
    """Transport a cocycle on ``H`` to ``tau^-1 H tau`` by
    ``b'(tau^-1 s tau) = b(s)^tau``.

    Under right actions this is the placement of the conjugate that satisfies
    the cocycle identity; the result is validated.
    """
    M = cocycle.module
    G = M.group
    values = {G.conjugate(s, tau): M.act(cocycle[s], tau) for s in cocycle.domain}
    return Cocycle1(M, values, G.conjugate_subgroup(cocycle.domain, tau))


# ---------------------------------------------------------------------------
# H^1 via the cochain complex


class H1:
    """``H^1(domain, M)`` for a presented module, with class and witness maps.

    All linear algebra runs on the diagonal (Smith) presentation of ``M``, in
    which element coordinates are the canonical ones stored by
    :class:`~torsorlab.fgab.GroupElem`.
    """

    def __init__(self, module, domain):
        G = module.group
        base = module.base
        self.module = module
        self.domain = domain
        idx = [i for i, d in enumerate(base.factors) if d != 1]
        self._idx = idx
        k = len(idx)
        self._k = k
        facs = [base.factors[i] for i in idx]
        D = fgab.diagonal_group(facs)
        self._D = D
        act = {
            g: [[module._smith_action[g][i][j] for j in idx] for i in idx] for g in domain
        }
        nonid = [h for h in domain if h != 0]
        self._nonid = nonid
        slot = {h: n for n, h in enumerate(nonid)}
        r = len(nonid)
        C1 = fgab.direct_sum([D] * r) if r else FgAbGroup(0)
        self._C1 = C1
        if r == 0 or k == 0:
            self.group = FgAbGroup(0)
            self._Z = None
            return

        # d1: rows indexed by (s, g) for s != 1 and g a generator of the domain
        gens = G.small_generating_set(domain)
        rows = []
        for s in nonid:
            for g in gens:
                block = [[0] * (k * r) for _ in range(k)]
                sg = G.mul[s][g]
                if sg != 0:
                    for i in range(k):
                        block[i][slot[sg] * k + i] += 1
                A = act[g]
                for i in range(k):
                    for j in range(k):
                        block[i][slot[s] * k + j] -= A[i][j]
                    block[i][slot[g] * k + i] -= 1
                rows.extend(block)
        T = fgab.direct_sum([D] * (len(rows) // k))
        Z, embZ = AbHom(C1, T, rows, check=False).kernel()
        self._Z, self._embZ = Z, embZ

        # d0: m -> (m^s - m)_s
        d0 = []
        for s in nonid:
            A = act[s]
            d0.extend([[A[i][j] - int(i == j) for j in range(k)] for i in range(k)])
        self._d0 = AbHom(D, C1, d0, check=False)
        lifted_cols = [embZ.preimage_vector([d0[i][j] for i in range(k * r)]) for j in range(k)]
        lifted = [[lifted_cols[j][i] for j in range(k)] for i in range(Z.rank)]
        self.group, self._proj = AbHom(D, Z, lifted, check=False).cokernel()

    def _vector(self, cocycle):
        if cocycle.module is not self.module and cocycle.module != self.module:
            raise ValidationError("module", "cocycle over a different module")
        if cocycle.domain != self.domain:
            raise ValidationError("domain", "cocycle over a different subgroup")
        vec = []
        for s in self._nonid:
            c = cocycle[s].canonical
            vec.extend(c[i] for i in self._idx)
        return vec

    def class_of(self, cocycle):
        """Coordinates of the class of ``cocycle`` in :attr:`group`."""
        if self._Z is None:
            return self.group.zero
        z = self._embZ.preimage_vector(self._vector(cocycle))
        if z is None:
            raise IdentityViolation("cocycle condition", reason="cochain is not in ker d1")
        return self.group.elem(z)

    def coboundary_witness(self, cocycle):
        base = self.module.base
        if not self._nonid:
            return base.zero
        if self._k == 0:
            return base.zero
        m = self._d0.preimage_vector(self._vector(cocycle))
        if m is None:
            return None
        full = [0] * base.rank
        for i, v in zip(self._idx, m):
            full[i] = v
        return base.from_smith(full)

    @property
    def invariant_factors(self):
        return self.group.invariant_factors


def h1(module, domain=None):
    """``H^1(domain, M)`` (domain defaults to the whole group); cached per module."""
    domain = _domain(module, domain)
    if module.tabulated:
        G = module.group
        gen = _cyclic_generator(G, domain)
        if gen is None:
            raise UnsupportedRepresentation(
                "tabulated modules only support cohomology of cyclic groups"
            )
        return h1_cyclic_oracle(module, gen, domain)
    with module._h1_lock:
        cached = module._h1_cache.get(domain)
    if cached is None:
        cached = H1(module, domain)
        with module._h1_lock:
            cached = module._h1_cache.setdefault(domain, cached)
    return cached


def _cyclic_generator(G, domain):
    n = len(domain)
    return next((g for g in domain if G.element_order(g) == n), None)


# ---------------------------------------------------------------------------
# cyclic oracle: H^1(<s>, M) = ker(Norm) / (s - 1)M


def h1_cyclic_oracle(module, generator, domain=None):
    """``ker(N) / im(s - 1)`` for the cyclic group generated by ``generator``.

    Independent of the cochain complex used by :func:`h1`; works for both
    presented and tabulated modules and returns an :class:`FgAbGroup`.
    """
    G = module.group
    n = G.element_order(generator)
    cyc = tuple(sorted(G.power(generator, j) for j in range(n)))
    if domain is not None and tuple(sorted(domain)) != cyc:
        raise ValidationError("cyclic", "generator does not generate the given domain")
    powers = [G.power(generator, j) for j in range(n)]
    if module.tabulated:
        return _tabulated_oracle(module, powers)
    B = module.base
    D, to_d, from_d = B.smith_form()
    k = D.rank
    if k == 0 or n == 1:
        return FgAbGroup(0)
    mats = {g: fgab.matmul(fgab.matmul(to_d.matrix, module.matrix(g), B.rank, B.rank), from_d.matrix, B.rank, k) for g in powers}
    N = [[sum(mats[g][i][j] for g in powers) for j in range(k)] for i in range(k)]
    S = mats[generator]
    T = [[S[i][j] - int(i == j) for j in range(k)] for i in range(k)]
    K, emb = AbHom(D, D, N, check=False).kernel()
    cols = [emb.preimage_vector([T[i][j] for i in range(k)]) for j in range(k)]
    lifted = [[cols[j][i] for j in range(k)] for i in range(K.rank)]
    Q, _ = AbHom(D, K, lifted, check=False).cokernel()
    return Q


def _tabulated_oracle(module, powers):
    M = module
    if len(powers) == 1:
        return FgAbGroup(0)
    perms = [M.action[g] for g in powers]
    zero = M.zero
    kernel = []
    for m in range(M.size):
        acc = m
        for p in perms[1:]:
            acc = M.add(acc, p[m])
        if acc == zero:
            kernel.append(m)
    # |im(s - 1)| = |M| / |ker(s - 1)|, and ker(s - 1) is the fixed set
    fixed = sum(1 for m in range(M.size) if perms[1][m] == m)
    if len(kernel) * fixed == M.size:
        return FgAbGroup(0)
    image = {M.sub(perms[1][m], m) for m in range(M.size)}
    orders = []
    for m in kernel:
        k, acc = 1, m
        while acc not in image:
            acc = M.add(acc, m)
            k += 1
        orders.append(k)
    # each coset appears |image| times, which scales every count uniformly
    factors = fgab_invariants_from_orders(orders, scale=len(image))
    return fgab.diagonal_group(factors)


def fgab_invariants_from_orders(orders, scale=1):
    """Invariant factors of a finite abelian group from the multiset of element
    orders (each element possibly repeated ``scale`` times)."""
    from collections import Counter

    size = len(orders) // scale
    counts = Counter(orders)
    primes = _prime_factors(size)
    elementary = {}
    for p in primes:
        parts = []
        prev = 1
        j = 1
        while True:
            pj = p**j
            c = sum(v for o, v in counts.items() if pj % o == 0) // scale
            if c == prev:
                break
            # number of cyclic p-factors of order >= p^j
            e = 0
            ratio = c // prev
            while ratio > 1:
                ratio //= p
                e += 1
            parts.append(e)
            prev = c
            j += 1
        # parts[j-1] = #factors of order >= p^j -> exponents of each factor
        exps = [sum(1 for x in parts if x > i) for i in range(parts[0])] if parts else []
        elementary[p] = sorted(exps)
    width = max((len(v) for v in elementary.values()), default=0)
    factors = [1] * width
    for p, exps in elementary.items():
        padded = [0] * (width - len(exps)) + exps
        for i, e in enumerate(padded):
            factors[i] *= p**e
    return [d for d in factors if d != 1]


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# classes


class CohClass:
    """An element of ``H^1(domain, M)`` with a chosen representative cocycle."""

    def __init__(self, representative):
        self.representative = representative
        self.module = representative.module
        self.domain = representative.domain
        self.h1 = h1(self.module, self.domain)
        if self.module.tabulated:
            self.h1_group = self.h1
            self.coords = None
        else:
            self.h1_group = self.h1.group
            self.coords = self.h1.class_of(representative)

    def __add__(self, other):
        return CohClass(self.representative + other.representative)

    def __neg__(self):
        return CohClass(-self.representative)

    def __sub__(self, other):
        return CohClass(self.representative - other.representative)

    def __rmul__(self, k):
        return CohClass(k * self.representative)

    def __eq__(self, other):
        if not isinstance(other, CohClass):
            return NotImplemented
        self.representative._same(other.representative)
        return is_coboundary(self.representative - other.representative) is not None

    __hash__ = None

    def is_zero(self):
        return is_coboundary(self.representative) is not None

    def __repr__(self):
        if self.coords is None:
            return f"CohClass({self.representative!r})"
        return f"CohClass({list(self.coords.canonical)} in {self.h1_group.describe()})"
