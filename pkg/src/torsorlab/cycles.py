"""Cycle models: families of cycle classes over a finite G-set and the torsors
they determine.

A :class:`CycleModel` bundles

* a G-set of points (the geometric points of a parameter space),
* an ambient G-module with an equivariant point map ``g`` (the fibers),
* a sub-G-module of "algebraically trivial" classes containing all
  differences of fibers over the same component,
* an equivariant homomorphism ``phi`` from that submodule to a target module,
* a G-set of components with an equivariant component map.

The difference function ``f(t, u) = phi(g(t) - g(u))`` (same component only)
drives everything: the cocycle at a basepoint ``t0`` is
``s -> f(t0^s, t0)`` and the descended map is ``t -> f(t, t0)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from . import fgab
from .cohom import CohClass, Cocycle1, conjugate_cocycle, restrict_cocycle
from .errors import IdentityViolation, PreconditionError, ValidationError
from .fgab import AbHom
from .gmod import EquivariantHom, GModule, GSet, is_equivariant_pointmap
from .torsor import InducedObject, TwistedModule


class CycleModel:
    def __init__(
        self,
        points,
        ambient,
        pointmap,
        triv_module,
        triv_embedding,
        phi,
        components=None,
        component_map=None,
        check=True,
    ):
        G = points.group
        if ambient.group != G or triv_module.group != G or phi.target.group != G:
            raise ValidationError("group", "all constituents must live over the same group")
        if len(pointmap) != points.size:
            raise ValidationError("arity", "pointmap needs one value per point")
        if components is None:
            components = GSet.trivial(G, 1)
            component_map = [0] * points.size
        self.group = G
        self.points = points
        self.ambient = ambient
        self.pointmap = list(pointmap)
        self.triv_module = triv_module
        self.triv_embedding = triv_embedding
        self.phi = phi
        self.components = components
        self.component_map = list(component_map)
        if check:
            self._validate()

    @property
    def target(self):
        return self.phi.target

    def _validate(self):
        G = self.group
        bad = is_equivariant_pointmap(self.points, self.ambient, self.pointmap)
        if bad is not None:
            t, s = bad
            raise ValidationError("pointmap equivariance", "g(t^s) != g(t)^s", point=t, sigma=s)
        if len(self.component_map) != self.points.size:
            raise ValidationError("arity", "component map needs one value per point")
        for s in G:
            for t in range(self.points.size):
                if self.component_map[self.points.act[s][t]] != self.components.act[s][self.component_map[t]]:
                    raise ValidationError("component equivariance", "c(t^s) != c(t)^s", point=t, sigma=s)
        E = self.triv_embedding.matrix
        k, n = self.triv_module.base.rank, self.ambient.base.rank
        for s in G:
            lhs = fgab.matmul(E, self.triv_module.matrix(s), k, k)
            rhs = fgab.matmul(self.ambient.matrix(s), E, n, k)
            from .gmod import equivalent_mod

            if not equivalent_mod(self.ambient.base, lhs, rhs):
                raise ValidationError("submodule equivariance", "embedding does not commute with the action", sigma=s)
        if self.phi.source != self.triv_module:
            raise ValidationError("phi", "phi must be defined on the trivial-class submodule")
        self.potential  # raises if some same-component difference is not algebraically trivial

    # -- difference function -----------------------------------------------
    @cached_property
    def component_base(self):
        base = {}
        for t, c in enumerate(self.component_map):
            base.setdefault(c, t)
        return base

    @cached_property
    def potential(self):
        """``potential[t] = f(t, b)`` where ``b`` is the least point of ``t``'s component."""
        out = []
        for t in range(self.points.size):
            b = self.component_base[self.component_map[t]]
            diff = self.pointmap[t] - self.pointmap[b]
            lift = self.triv_embedding.preimage(diff)
            if lift is None:
                raise ValidationError(
                    "algebraic triviality",
                    "difference of fibers over one component is not in the trivial submodule",
                    point=t,
                    base=b,
                )
            out.append(self.phi(lift))
        return out

    def component(self, t):
        return self.component_map[t]

    def difference(self, t, u):
        """``f(t, u) = phi(g(t) - g(u))``; both points must share a component."""
        if self.component_map[t] != self.component_map[u]:
            raise PreconditionError(f"points {t} and {u} lie on different components")
        return self.potential[t] - self.potential[u]

    def component_points(self, c):
        return [t for t, cc in enumerate(self.component_map) if cc == c]

    def component_stabilizer(self, t0):
        return self.components.stabilizer(self.component_map[t0])

    def negate(self):
        """Same data with the point map negated (the family ``-Z``)."""
        m = CycleModel(
            self.points,
            self.ambient,
            [-v for v in self.pointmap],
            self.triv_module,
            self.triv_embedding,
            self.phi,
            self.components,
            self.component_map,
            check=False,
        )
        m.__dict__["potential"] = [-v for v in self.potential]
        return m


# ---------------------------------------------------------------------------
# the cocycle, the class and the descended map


def build_cocycle(model, t0, whole_group=False, check=True):
    """``s -> f(t0^s, t0)`` on the stabilizer of ``t0``'s component."""
    G = model.group
    H = model.component_stabilizer(t0)
    if whole_group and len(H) != G.order:
        moved = next(s for s in G if s not in H)
        raise PreconditionError(
            f"t0^{moved} lies on a different component; the cocycle only exists on the component stabilizer"
        )
    S = model.points
    values = {s: model.difference(S.act[s][t0], t0) for s in H}
    return Cocycle1(model.target, values, H, check=check)


def basepoint_witnesses(model, t0):
    """For every ``t1`` on ``t0``'s component, verify
    ``a_t0(s) - a_t1(s) = m^s - m`` with ``m = f(t0, t1)`` and return the
    list of ``(t1, m)``."""
    A = model.target
    alpha = build_cocycle(model, t0)
    out = []
    for t1 in model.component_points(model.component(t0)):
        # beta differs from the validated alpha by the coboundary checked
        # below, so it is a cocycle without a separate check
        beta = build_cocycle(model, t1, check=False)
        m = model.difference(t0, t1)
        for s in alpha.domain:
            if alpha[s] - beta[s] != A.act(m, s) - m:
                raise IdentityViolation("basepoint independence", t0=t0, t1=t1, sigma=s)
        out.append((t1, m))
    return out


def torsor_class(model, t0=0, verify=True):
    """Class of the torsor of ``model`` on ``t0``'s component.

    With ``verify`` the class is recomputed from every basepoint of the
    component and checked against the explicit coboundary witnesses.
    """
    if not model.points.size:
        raise PreconditionError("empty component")
    if verify:
        basepoint_witnesses(model, t0)
    return CohClass(build_cocycle(model, t0))


@dataclass
class DescendedMap:
    model: CycleModel
    basepoint: int
    target: TwistedModule
    values: dict

    def __call__(self, t):
        return self.values[t]

    def check_equivariance(self):
        """``psi(t^s) = a(s) + psi(t)^s`` for all ``t`` on the component and ``s``."""
        S = self.model.points
        for t in self.values:
            for s in self.target.domain:
                lhs = self.values[S.act[s][t]]
                rhs = self.target.act(self.values[t], s)
                if lhs != rhs:
                    raise IdentityViolation("descended map equivariance psi(t^s) = a_s + psi(t)^s", point=t, sigma=s)


def descended_map(model, t0):
    alpha = build_cocycle(model, t0)
    twisted = TwistedModule(alpha)
    pts = model.component_points(model.component(t0))
    return DescendedMap(model, t0, twisted, {t: model.difference(t, t0) for t in pts})


# ---------------------------------------------------------------------------
# external sums


def _same_target(m1, m2):
    if m1.group != m2.group:
        raise ValidationError("group", "models over different groups")
    if m1.target is not m2.target and m1.target != m2.target:
        raise ValidationError("target", "models with different target modules")


def boxplus(m1, m2):
    """The family ``Z1 [+] Z2`` over the product of the point sets.

    Fibers are ``(g1(t1), g2(t2))`` in the direct sum of the ambient modules;
    ``phi`` is the sum of the two maps, so ``f = f1 + f2``.
    """
    _same_target(m1, m2)
    points = m1.points.product(m2.points)
    ambient = m1.ambient.direct_sum(m2.ambient)
    n1 = m1.ambient.base.rank
    pointmap = [
        ambient.elem(list(a.coords) + list(b.coords)) for a in m1.pointmap for b in m2.pointmap
    ]
    triv = m1.triv_module.direct_sum(m2.triv_module)
    k1, k2 = m1.triv_module.base.rank, m2.triv_module.base.rank
    E = fgab.block_diagonal(
        [
            (m1.triv_embedding.matrix, n1, k1),
            (m2.triv_embedding.matrix, m2.ambient.base.rank, k2),
        ]
    )
    emb = AbHom(triv.base, ambient.base, E, check=False)
    A = m1.target
    phi = EquivariantHom(
        triv, A, fgab.hstack(m1.phi.matrix, m2.phi.matrix, rows=A.base.rank), check=False
    )
    comps = m1.components.product(m2.components)
    c2 = m2.components.size
    cmap = [a * c2 + b for a in m1.component_map for b in m2.component_map]
    out = CycleModel(points, ambient, pointmap, triv, emb, phi, comps, cmap, check=False)
    # least point of component (c1, c2) is (least of c1, least of c2), so
    # potentials add
    out.__dict__["potential"] = [a + b for a in m1.potential for b in m2.potential]
    return out


def equivalent_fibers_imply_isomorphic(m1, m2, t1, t2):
    """If ``g1(t1) - g2(t2)`` is algebraically trivial with ``phi`` of it zero,
    the two torsors agree: returns ``(True, translation)`` after checking
    ``class(m1) - class(m2) = class(m1 [+] -m2) = 0``.

    Models must be joint: same ambient module, trivial submodule and ``phi``.
    """
    if (
        m1.ambient != m2.ambient
        or m1.triv_module != m2.triv_module
        or m1.triv_embedding.matrix != m2.triv_embedding.matrix
        or m1.phi.matrix != m2.phi.matrix
    ):
        raise PreconditionError("models do not share ambient module, trivial submodule and phi")
    _same_target(m1, m2)
    diff = m1.pointmap[t1] - m2.pointmap[t2]
    lift = m1.triv_embedding.preimage(diff)
    if lift is None:
        raise PreconditionError("fibers are not algebraically equivalent")
    if not m1.phi(lift).is_zero():
        raise PreconditionError("phi separates the two fibers")

    from .torsor import torsors_isomorphic

    H = tuple(sorted(set(m1.component_stabilizer(t1)) & set(m2.component_stabilizer(t2))))
    a1 = restrict_cocycle(build_cocycle(m1, t1), H)
    a2 = restrict_cocycle(build_cocycle(m2, t2), H)
    joint = boxplus(m1, m2.negate())
    t = t1 * m2.points.size + t2
    c = restrict_cocycle(build_cocycle(joint, t), H)
    if not CohClass(c).is_zero():
        raise IdentityViolation("class(Z1 [+] -Z2) = 0", t1=t1, t2=t2)
    if CohClass(a1) - CohClass(a2) != CohClass(c):
        raise IdentityViolation("class(Z1) - class(Z2) = class(Z1 [+] -Z2)", t1=t1, t2=t2)
    ok, c = torsors_isomorphic(TwistedModule(a1), TwistedModule(a2))
    if not ok:
        raise IdentityViolation("isomorphism of torsors", t1=t1, t2=t2)
    return True, c


# ---------------------------------------------------------------------------
# symmetric powers


def sym_power(model, d):
    """``Z [+] ... [+] Z`` (``d`` copies) over ``S^d``; point ``(t_1..t_d)`` is
    the mixed-radix index with ``t_1`` most significant."""
    if d < 1:
        raise PreconditionError("d must be at least 1")
    out = model
    for _ in range(d - 1):
        out = boxplus(out, model)
    return out


def tuple_index(ts, base):
    i = 0
    for t in ts:
        i = i * base + t
    return i


def check_symmetric_factorization(model, power, d, t0):
    """``psi`` on ``S^d`` (basepoint ``(t0,...,t0)``) is invariant under every
    permutation of coordinates, and ``class(power) = d * class(model)``."""
    n = model.points.size
    base = tuple_index([t0] * d, n)
    comp = model.component(t0)
    pts = model.component_points(comp)
    psi = descended_map(power, base)
    for ts in itertools.product(pts, repeat=d):
        v = psi(tuple_index(ts, n))
        for perm in itertools.permutations(range(d)):
            w = psi(tuple_index([ts[i] for i in perm], n))
            if v != w:
                raise IdentityViolation("symmetric factorization psi(t_pi) = psi(t)", tuple=ts, permutation=perm)
    c1 = torsor_class(model, t0, verify=False)
    cd = torsor_class(power, base, verify=False)
    H = c1.domain
    if cd.domain != H:
        cd = CohClass(restrict_cocycle(cd.representative, H))
    if cd != d * c1:
        raise IdentityViolation("class(Z^[+]d) = d * class(Z)", d=d)
    return psi


# ---------------------------------------------------------------------------
# several geometric components


@dataclass
class Descent:
    model: CycleModel
    basepoint: int
    induced: InducedObject
    psi: dict  # point -> (rep, value)

    def check_equivariance(self):
        S = self.model.points
        I = self.induced
        for t in range(S.size):
            for s in I.group:
                lhs = self.psi[S.act[s][t]]
                rhs = I.act(self.psi[t], s)
                if lhs[0] != rhs[0] or lhs[1] != rhs[1]:
                    raise IdentityViolation("global map equivariance Psi(t^s) = Psi(t)^s", point=t, sigma=s)

    def check_restriction(self):
        """The identity-coset slice is exactly the twisted module of the
        connected construction over the component stabilizer."""
        alpha = build_cocycle(self.model, self.basepoint)
        I = self.induced
        for s in alpha.domain:
            if I.next_rep[(0, s)] != 0 or I.transport[(0, s)] != alpha[s]:
                raise IdentityViolation("restriction recovers the connected case", sigma=s)

    def check_conjugation(self):
        """Cocycle of the pulled-back data ``(t0^tau)`` on ``tau^-1 H tau`` equals
        the conjugate of the cocycle at ``t0``, for every ``tau``."""
        G = self.model.group
        alpha = build_cocycle(self.model, self.basepoint)
        for tau in G:
            t_tau = self.model.points.act[tau][self.basepoint]
            pulled = build_cocycle(self.model, t_tau)
            conj = conjugate_cocycle(alpha, tau)
            if pulled.domain != conj.domain or pulled != conj:
                raise IdentityViolation("component conjugation law", tau=tau)
            if CohClass(pulled) != CohClass(conj):
                raise IdentityViolation("component class conjugation", tau=tau)

    def fiber_sample(self, limit=64):
        A = self.induced.fiber
        if A.base.is_finite and A.base.order <= limit:
            return list(A.elements())
        vals = {v for _, v in self.psi.values()}
        vals.update(A.base.gens())
        vals.add(A.zero)
        return sorted(vals, key=lambda e: e.canonical)

    def check_all(self):
        self.induced.check_action_law(self.fiber_sample())
        self.check_equivariance()
        self.check_restriction()
        self.check_conjugation()


def disconnected_descent(model, t0, reps=None):
    """Glue the component torsors into one object with a ``G``-action.

    ``reps`` are right coset representatives of the stabilizer ``H`` of
    ``t0``'s component (identity first; default: least element of each
    coset).  Points of the result are pairs ``(rep, a)``.
    """
    G = model.group
    C = model.components
    if not C.is_transitive():
        raise PreconditionError("the group does not act transitively on components")
    W = model.component(t0)
    H = C.stabilizer(W)
    if reps is None:
        reps = G.right_coset_reps(H)
    reps = list(reps)
    if reps[0] != 0:
        raise PreconditionError("the identity must be the first coset representative")
    if sorted(G.coset_rep_of(H, G.right_coset_reps(H), r) for r in reps) != sorted(G.right_coset_reps(H)):
        raise PreconditionError("representatives do not cover each coset exactly once")
    S = model.points
    base = {r: S.act[r][t0] for r in reps}
    comp_rep = {C.act[r][W]: r for r in reps}
    transport, next_rep = {}, {}
    for r in reps:
        for s in G:
            r2 = G.coset_rep_of(H, reps, G.mul[r][s])
            src = S.act[s][base[r]]
            # same-component lemma: t_r^s lies on W^(rs) = W^(r2)
            assert model.component(src) == model.component(base[r2])
            next_rep[(r, s)] = r2
            transport[(r, s)] = model.difference(src, base[r2])
    induced = InducedObject(G, H, reps, base, model.target, transport, next_rep)
    psi = {}
    for t in range(S.size):
        r = comp_rep[model.component(t)]
        psi[t] = (r, model.difference(t, base[r]))
    return Descent(model, t0, induced, psi)
