"""Elliptic-curve point groups over small finite fields, with Frobenius as a
Galois action.

Field elements are ints encoding coefficient vectors in base ``p``
(``c0 + c1 p + c2 p^2 + ...`` for ``c0 + c1 x + c2 x^2 + ...``).  Arithmetic
goes through discrete-log tables, so one multiplication or addition is a
couple of list lookups.
"""

from __future__ import annotations

import random
from functools import cached_property

from . import fgab
from .cohom import fgab_invariants_from_orders, h1_cyclic_oracle
from .errors import IdentityViolation, PreconditionError, ValidationError
from .gmod import FiniteGroup, TabulatedModule

MAX_FIELD_SIZE = 2**20


def is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


class FiniteField:
    """``F_{p^n}`` as ``F_p[x] / (f)`` for a monic ``f`` of degree ``n``.

    The modulus is the first monic polynomial (in lexicographic order of its
    lower coefficients) for which ``x`` has multiplicative order ``p^n - 1``;
    such an ``f`` is irreducible because the quotient ring then has
    ``p^n - 1`` units.
    """

    def __init__(self, p, n=1):
        if not isinstance(p, int) or not is_prime(p):
            raise ValidationError("prime", f"characteristic {p} is not prime")
        if p in (2, 3):
            raise ValidationError("characteristic", "characteristics 2 and 3 are not supported")
        if n < 1:
            raise ValidationError("degree", "degree must be positive")
        if p**n > MAX_FIELD_SIZE:
            raise ValidationError("size", f"{p}^{n} exceeds 2^20")
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus, self._exp = self._search_modulus()
        q1 = self.q - 1
        self._log = [None] * self.q
        for k, e in enumerate(self._exp):
            self._log[e] = k
        # zech[k] = log(1 + g^k), None when 1 + g^k = 0
        self._zech = [None] * q1
        for k in range(q1):
            s = self._vec_add(1, self._exp[k])
            self._zech[k] = self._log[s] if s else None

    # -- construction --------------------------------------------------------

    def _search_modulus(self):
        p, n, q = self.p, self.n, self.p**self.n
        for low in range(p**n):
            coeffs = [(low // p**i) % p for i in range(n)]
            if coeffs[0] == 0:
                continue
            exp = self._powers_of_x(coeffs, q - 1)
            if exp is not None:
                return tuple(coeffs) + (1,), exp
        raise AssertionError("no primitive polynomial found")  # pragma: no cover

    def _powers_of_x(self, low, count):
        """Codes of ``x^0 .. x^(count-1)`` mod ``x^n + sum low[i] x^i``, or
        ``None`` if ``x`` returns to 1 early (or is not a unit)."""
        p, n = self.p, self.n
        vec = [1] + [0] * (n - 1)
        out = []
        for k in range(count):
            code = self._encode(vec)
            if k and code == 1:
                return None
            out.append(code)
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                vec = [(v - top * c) % p for v, c in zip(vec, low)]
        return out if self._encode(vec) == 1 else None

    def _encode(self, vec):
        code = 0
        for c in reversed(vec):
            code = code * self.p + c
        return code

    def _vec_add(self, a, b):
        p = self.p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    # -- arithmetic on codes --------------------------------------------------

    def vector(self, a):
        return [(a // self.p**i) % self.p for i in range(self.n)]

    def element(self, coeffs):
        """Code of the element with the given coefficient vector (low first)."""
        coeffs = list(coeffs) + [0] * (self.n - len(coeffs))
        if len(coeffs) != self.n:
            raise ValidationError("arity", f"expected {self.n} coefficients")
        return self._encode([c % self.p for c in coeffs])

    def from_int(self, k):
        return k % self.p

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        return 0 if z is None else self._exp[(la + z) % (self.q - 1)]

    def neg(self, a):
        if a == 0:
            return 0
        # -1 = g^((q-1)/2)
        return self._exp[(self._log[a] + (self.q - 1) // 2) % (self.q - 1)]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[-self._log[a] % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if a == 0:
            return 0 if k > 0 else 1
        return self._exp[self._log[a] * k % (self.q - 1)]

    def frobenius(self, a, times=1):
        return self.pow(a, self.p**times)

    @cached_property
    def square_roots(self):
        """``roots[c]`` = list of square roots of ``c``."""
        roots = [[] for _ in range(self.q)]
        for y in range(self.q):
            roots[self.mul(y, y)].append(y)
        return roots

    def check_axioms(self, samples=200, seed=0):
        rng = random.Random(seed)
        q = self.q
        for _ in range(samples):
            a, b, c = rng.randrange(q), rng.randrange(q), rng.randrange(q)
            if self.add(a, self.add(b, c)) != self.add(self.add(a, b), c):
                raise IdentityViolation("field additive associativity", a=a, b=b, c=c)
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)):
                raise IdentityViolation("field distributivity", a=a, b=b, c=c)
            if self.add(a, b) != self._vec_add(a, b):
                raise IdentityViolation("field addition is coefficientwise", a=a, b=b)
            if a and self.mul(a, self.inv(a)) != 1:
                raise IdentityViolation("field inverse", a=a)
        return True

    def has_root(self, poly_low):
        """Does the monic polynomial ``x^k + sum poly_low[i] x^i`` have a root in ``F_p``?"""
        p = self.p
        k = len(poly_low)
        return any((x**k + sum(c * x**i for i, c in enumerate(poly_low))) % p == 0 for x in range(p))

    def __repr__(self):
        return f"FiniteField({self.p}, {self.n})"


INF = 0  # index of the point at infinity


class CurvePointGroup:
    """Points of ``y^2 = x^3 + a x + b`` over a finite field, indexed with the
    point at infinity as 0."""

    def __init__(self, a, b, field, check=True):
        F = field
        self.field = F
        # coefficients live in the prime field, whose codes are 0..p-1
        self.a, self.b = a % F.p, b % F.p
        self.a_int, self.b_int = self.a, self.b
        A, B = self.a, self.b
        disc = F.add(F.mul(4, F.pow(A, 3)), F.mul(27 % F.p, F.mul(B, B)))
        if disc == 0:
            raise ValidationError("nonsingular", "4a^3 + 27b^2 = 0: the curve is singular", a=a, b=b)
        xs, ys = [None], [None]
        roots = F.square_roots
        for x in range(F.q):
            rhs = F.add(F.add(F.pow(x, 3), F.mul(A, x)), B)
            for y in roots[rhs]:
                xs.append(x)
                ys.append(y)
        self.xs, self.ys = xs, ys
        self.index = {(x, y): i for i, (x, y) in enumerate(zip(xs, ys)) if i}
        self.order = len(xs)
        self.add = self._make_adder()
        if check:
            self.check_hasse()
            self.check_associativity()

    def check_hasse(self):
        q = self.field.q
        trace = self.order - (q + 1)
        if trace * trace > 4 * q:
            raise IdentityViolation("Hasse bound", count=self.order, q=q)
        return True

    def check_associativity(self, samples=100, seed=0):
        rng = random.Random(seed)
        N = self.order
        for _ in range(samples):
            P, Q, R = rng.randrange(N), rng.randrange(N), rng.randrange(N)
            if self.add(P, self.add(Q, R)) != self.add(self.add(P, Q), R):
                raise IdentityViolation("associativity of point addition", P=P, Q=Q, R=R)
        return True

    def neg(self, P):
        if P == INF:
            return INF
        return self.index[(self.xs[P], self.field.neg(self.ys[P]))]

    def _make_adder(self):
        # log-table arithmetic written out inline; this is the hot loop of
        # every curve computation
        F = self.field
        exp, log, zech, q1 = F._exp, F._log, F._zech, F.q - 1
        half = q1 // 2
        xs, ys, index, a_coef = self.xs, self.ys, self.index, self.a
        log3 = log[3]

        def fadd(a, b):
            if a == 0:
                return b
            if b == 0:
                return a
            la = log[a]
            z = zech[(log[b] - la) % q1]
            return 0 if z is None else exp[(la + z) % q1]

        def fneg(a):
            return exp[(log[a] + half) % q1] if a else 0

        def add(P, Q):
            if P == 0:
                return Q
            if Q == 0:
                return P
            x1, y1, x2, y2 = xs[P], ys[P], xs[Q], ys[Q]
            if x1 == x2:
                if y1 != y2 or y1 == 0:
                    return 0
                num = fadd(exp[(log3 + 2 * log[x1]) % q1] if x1 else 0, a_coef)
                den = fadd(y1, y1)
            else:
                num = fadd(y2, fneg(y1))
                den = fadd(x2, fneg(x1))
            if num == 0:
                lam = 0
                x3 = fneg(fadd(x1, x2))
            else:
                llam = (log[num] - log[den]) % q1
                lam = exp[llam]
                x3 = fadd(exp[2 * llam % q1], fneg(fadd(x1, x2)))
            d = fadd(x1, fneg(x3))
            t = exp[(log[lam] + log[d]) % q1] if lam and d else 0
            return index[(x3, fadd(t, fneg(y1)))]

        return add

    def multiple(self, k, P):
        if k < 0:
            k, P = -k, self.neg(P)
        acc = INF
        while k:
            if k & 1:
                acc = self.add(acc, P)
            P = self.add(P, P)
            k >>= 1
        return acc

    def point_order(self, P):
        for d in _divisors(self.order):
            if self.multiple(d, P) == INF:
                return d
        raise AssertionError("order must divide the group order")  # pragma: no cover

    def structure(self):
        """Invariant factors ``[d1, d2]`` (``d1 | d2``), or ``[d]`` if cyclic."""
        orders = [self.point_order(P) for P in range(self.order)]
        return fgab_invariants_from_orders(orders)

    def frobenius_permutation(self, times=1):
        F = self.field
        perm = [INF]
        for x, y in zip(self.xs[1:], self.ys[1:]):
            perm.append(self.index[(F.frobenius(x, times), F.frobenius(y, times))])
        return perm

    def points_over_subfield(self, m):
        """Indices of points with both coordinates in ``F_{p^m}``."""
        perm = self.frobenius_permutation(m)
        return [P for P in range(self.order) if perm[P] == P]

    def __repr__(self):
        F = self.field
        return f"CurvePointGroup(y^2 = x^3 + {self.a_int}x + {self.b_int} over F_{F.p}^{F.n}, {self.order} points)"


def field_new(p, n=1):
    return FiniteField(p, n)


def curve_group(a, b, field, check=True):
    return CurvePointGroup(a, b, field, check=check)


def frobenius_module(E, m=1, check=True):
    """``E(F_{p^n})`` as a module over ``Gal(F_{p^n}/F_{p^m})``, cyclic of order
    ``n/m`` and generated by the ``p^m``-power map."""
    n = E.field.n
    if m < 1 or n % m:
        raise PreconditionError(f"base degree {m} does not divide {n}")
    k = n // m
    G = FiniteGroup.cyclic(k)
    step = E.frobenius_permutation(m)
    perms = [list(range(E.order))]
    for _ in range(k - 1):
        perms.append([step[x] for x in perms[-1]])
    # element j of the cyclic group is the j-th power of the generator
    if k > 1 and [step[x] for x in perms[-1]] != list(range(E.order)):
        raise IdentityViolation("Frobenius order divides n/m", n=n, m=m)
    return TabulatedModule(G, E.order, E.add, E.neg, INF, perms, check=check)


def lang_check(E, m=1):
    """``H^1`` of the Frobenius group with values in ``E(F_{p^n})``; trivial by
    Lang's theorem, returned so callers can assert it."""
    M = frobenius_module(E, m, check=False)
    G = M.group
    gen = 1 % G.order
    return h1_cyclic_oracle(M, gen)


def sweep_curves(p, n):
    """All nonsingular ``(a, b)`` with ``a, b`` in the prime field."""
    F = FiniteField(p, n)
    for a in range(p):
        for b in range(p):
            if (4 * a**3 + 27 * b * b) % p == 0:
                continue
            yield a, b, F


def lang_sweep(primes=(5, 7, 11, 13), degrees=(1, 2, 3)):
    """Yield ``(p, n, a, b, count, h1)`` for every curve in the sweep."""
    for p in primes:
        for n in degrees:
            if p**n > MAX_FIELD_SIZE:
                continue
            F = FiniteField(p, n)
            for a in range(p):
                for b in range(p):
                    if (4 * a**3 + 27 * b * b) % p == 0:
                        continue
                    E = CurvePointGroup(a, b, F, check=False)
                    E.check_hasse()
                    yield p, n, a, b, E.order, lang_check(E)


def fixed_points_match_subfield(E, m=1):
    """Frobenius fixes exactly the points over ``F_{p^m}``, checked against a
    direct enumeration over the subfield when ``m = 1``."""
    fixed = set(E.points_over_subfield(m))
    if m == 1:
        F1 = FiniteField(E.field.p, 1)
        direct = CurvePointGroup(E.a_int, E.b_int, F1, check=False)
        return len(fixed) == direct.order
    return True
