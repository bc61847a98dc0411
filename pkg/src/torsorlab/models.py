"""Named example models and seeded random generators for groups, modules and
cycle models."""

from __future__ import annotations

import random

from . import fgab
from .cycles import CycleModel
from .fgab import AbHom, FgAbGroup
from .gmod import (
    EquivariantHom,
    FiniteGroup,
    GModule,
    GSet,
    random_equivariant_hom,
    random_equivariant_pointmap,
    submodule,
)


def sign_module(G, H=None):
    """``Z`` with ``g`` acting by ``-1`` off the index-2 subgroup ``H``
    (for a cyclic group of even order, the squares)."""
    if H is None:
        H = _index_two_subgroup(G)
    mats = [[[1 if g in H else -1]] for g in G]
    return GModule(G, fgab.cyclic(0), mats)


def _index_two_subgroup(G):
    return next(K for K in G.subgroups if 2 * len(K) == G.order)


def worked_model():
    """Two points swapped by ``C2``; fibers ``+1, -1`` in ``Z`` with negation;
    trivial classes ``2Z``; ``phi(2k) = k mod 2`` into ``Z/2``.

    Its class is the nonzero element of ``H^1(C2, Z/2) = Z/2``.
    """
    return scaled_worked_model(1)


def scaled_worked_model(scale):
    """The worked model with fibers ``+-scale`` and trivial classes ``2*scale*Z``."""
    G = FiniteGroup.cyclic(2)
    S = GSet.from_generators(G, [[1, 0]])
    amb = sign_module(G)
    g = [amb.elem([scale]), amb.elem([-scale])]
    triv, emb = submodule(amb, [[2 * scale]])
    A = GModule.trivial_action(G, fgab.cyclic(2))
    phi = EquivariantHom(triv, A, [[1]])
    return CycleModel(S, amb, g, triv, emb, phi)


def abel_map_model(k=2):
    """Diagonal family on a curve whose two geometric points are swapped.

    Points ``{t, t'}``; ambient ``Z[S]`` (divisors) with the permutation
    action; trivial classes are the degree-zero divisors; the target is
    degree zero modulo ``k`` times itself.  ``psi`` is the Abel map
    ``t -> [t - t0]`` and ``d * class`` is the class of the degree-``d`` torsor.
    """
    G = FiniteGroup.cyclic(2)
    S = GSet.from_generators(G, [[1, 0]])
    amb = GModule.from_generators(G, fgab.free(2), [[[0, 1], [1, 0]]])
    g = [amb.elem([1, 0]), amb.elem([0, 1])]
    triv, emb = submodule(amb, [[1, -1]])
    A = triv.quotient_by_multiple(k)
    phi = EquivariantHom(triv, A, [[1]])
    return CycleModel(S, amb, g, triv, emb, phi)


def index_two_components_model():
    """``C4`` acting on four points ``t0^(s^k)``; two components swapped by the
    generator, each stabilized by ``{1, s^2}``; component class nontrivial."""
    G = FiniteGroup.cyclic(4)
    S = GSet.from_generators(G, [[1, 2, 3, 0]])
    C = GSet.from_generators(G, [[1, 0]])
    cmap = [0, 1, 0, 1]
    amb = GModule.from_generators(G, fgab.free(4), [_perm_matrix([1, 2, 3, 0])])
    g = [amb.elem([int(i == k) for i in range(4)]) for k in range(4)]
    triv, emb = submodule(amb, [[1, 0, -1, 0], [0, 1, 0, -1]])
    A = GModule.trivial_action(G, fgab.cyclic(2))
    phi = EquivariantHom(triv, A, [[1, 1]])
    return CycleModel(S, amb, g, triv, emb, phi, C, cmap)


def _perm_matrix(p):
    """Matrix sending basis vector ``e_i`` to ``e_{p[i]}``."""
    n = len(p)
    return [[int(p[j] == i) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# random generation


def group_menu(max_order=8, cyclic_only=False):
    groups = [FiniteGroup.cyclic(n) for n in range(1, max_order + 1)]
    if not cyclic_only:
        C2 = FiniteGroup.cyclic(2)
        extra = [
            FiniteGroup.direct_product(C2, C2),
            FiniteGroup.symmetric(3),
            FiniteGroup.dihedral(4),
            FiniteGroup.quaternion(),
            FiniteGroup.direct_product(C2, FiniteGroup.cyclic(4)),
            FiniteGroup.direct_product(FiniteGroup.direct_product(C2, C2), C2),
        ]
        groups += [g for g in extra if g.order <= max_order]
    return groups


_MENU = {}


def random_group(rng, max_order=8, cyclic_only=False):
    key = (max_order, cyclic_only)
    if key not in _MENU:
        _MENU[key] = group_menu(max_order, cyclic_only)
    return rng.choice(_MENU[key])


def _rand_factor(rng, max_factor, allow_free):
    if allow_free and rng.random() < 0.2:
        return 0
    return rng.randint(2, max_factor)


def _rand_chain(rng, r, max_factor, allow_free):
    """``r`` cyclic orders whose finite ones form a divisibility chain with top
    at most ``max_factor``, so they are already the invariant factors."""
    top = rng.randint(2, max_factor)
    divs = [d for d in range(2, top + 1) if top % d == 0]
    out = []
    for i in range(r):
        if allow_free and rng.random() < 0.2:
            out.append(0)
        else:
            out.append(top if i == 0 else rng.choice(divs))
    return out


def _character_matrices(G, rng, r):
    K = [H for H in G.subgroups if 2 * len(H) == G.order]
    if not K:
        return [fgab.identity(r) for _ in G]
    H = rng.choice(K)
    return [[[(1 if g in H else -1) * int(i == j) for j in range(r)] for i in range(r)] for g in G]


def _units(d, n):
    if d == 0:
        return [1, -1] if n % 2 == 0 else [1]
    from math import gcd

    return [u for u in range(1, max(d, 2)) if gcd(u, d) == 1 and pow(u, n, d) == 1 % d] or [1]


def random_module(G, rng, max_rank=3, max_factor=12, allow_free=True, conjugate=True, kinds=None):
    """A random presented G-module of rank at most ``max_rank`` whose finite
    invariant factors are at most ``max_factor``."""
    while True:
        M = _random_module(G, rng, max_rank, max_factor, allow_free, conjugate, kinds)
        if all(d <= max_factor for d in M.base.invariant_factors):
            return M


def _random_module(G, rng, max_rank, max_factor, allow_free, conjugate, kinds):
    kinds = list(kinds or ["trivial", "character", "permutation", "sum"])
    if G.cyclic_generator() is not None and G.order > 1:
        kinds += ["units", "units"]
    kind = rng.choice(kinds)
    if kind == "sum" and max_rank < 2:
        kind = "trivial"
    if kind == "sum":
        r1 = rng.randint(1, max_rank - 1)
        M1 = random_module(G, rng, r1, max_factor, allow_free, conjugate=False)
        M2 = random_module(G, rng, rng.randint(1, max_rank - r1), max_factor, allow_free, conjugate=False)
        M = M1.direct_sum(M2)
    elif kind == "permutation":
        cands = [K for K in G.subgroups if G.order // len(K) <= max_rank]
        K = rng.choice(cands)
        X = GSet.cosets(G, K)
        r = X.size
        d = _rand_factor(rng, max_factor, allow_free)
        base = fgab.diagonal_group([d] * r)
        chi = _character_matrices(G, rng, 1) if rng.random() < 0.3 else [[[1]] for _ in G]
        mats = [[[chi[g][0][0] * int(X.act[g][j] == i) for j in range(r)] for i in range(r)] for g in G]
        M = GModule(G, base, mats)
    else:
        r = rng.randint(1, max_rank)
        factors = _rand_chain(rng, r, max_factor, allow_free)
        base = fgab.diagonal_group(factors)
        if kind == "trivial":
            M = GModule.trivial_action(G, base)
        elif kind == "character":
            M = GModule(G, base, _character_matrices(G, rng, r))
        else:
            gen = G.cyclic_generator()
            us = [rng.choice(_units(d, G.order)) for d in factors]
            powers = {G.power(gen, j): j for j in range(G.order)}
            mats = [[[us[i] ** powers[g] * int(i == j) for j in range(r)] for i in range(r)] for g in G]
            M = GModule(G, base, mats)
    if conjugate and rng.random() < 0.4:
        M = _random_change_of_basis(M, rng)
    return M


def _random_change_of_basis(M, rng):
    n = M.base.rank
    if n < 2:
        return M
    P = fgab.identity(n)
    Pinv = fgab.identity(n)
    for _ in range(rng.randint(1, 3)):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        # P <- E P with E = I + c e_ij ; Pinv <- Pinv E^-1
        P[i] = [a + c * b for a, b in zip(P[i], P[j])]
        for row in Pinv:
            row[j] -= c * row[i]
    rels = fgab.matmul(P, M.base.relation_matrix, n, M.base.num_relations)
    base = FgAbGroup(n, rels if M.base.num_relations else None)
    mats = [fgab.matmul(fgab.matmul(P, M.matrix(g), n, n), Pinv, n, n) for g in M.group]
    return GModule(M.group, base, mats)


def random_gset(G, rng, max_size=12, orbits=None, within=None):
    """Union of one or two coset G-sets ``K\\G`` (``K`` inside ``within`` if given)."""
    cands = [K for K in G.subgroups if G.order // len(K) <= max_size]
    if within is not None:
        cands = [K for K in cands if set(K) <= set(within)]
    count = orbits or rng.choice([1, 1, 2])
    chosen = []
    size = 0
    for _ in range(count):
        K = rng.choice([K for K in cands if size + G.order // len(K) <= max_size] or [cands[-1]])
        if size + G.order // len(K) > max_size:
            break
        chosen.append(K)
        size += G.order // len(K)
    return _union_of_cosets(G, chosen)


def _union_of_cosets(G, subgroups):
    acts = [[] for _ in G]
    offset = 0
    for K in subgroups:
        X = GSet.cosets(G, K)
        for g in G:
            acts[g].extend(offset + x for x in X.act[g])
        offset += X.size
    return GSet(G, acts)


def _difference_vectors(ambient, gsets_and_maps):
    vecs = []
    for S, g, cmap in gsets_and_maps:
        for t in range(S.size):
            for u in range(S.size):
                if cmap[t] == cmap[u] and t != u:
                    vecs.append((g[t] - g[u]).coords)
    return vecs


def _triv_submodule(ambient, vectors, rng, extra_prob=0.3):
    vectors = list(vectors)
    if rng.random() < extra_prob:
        x = ambient.elem([rng.randint(-3, 3) for _ in range(ambient.base.rank)])
        vectors.extend(ambient.act(x, s).coords for s in ambient.group)
    n = ambient.base.rank
    cols = vectors + [list(c) for c in zip(*ambient.base.relation_matrix)] if ambient.base.num_relations else vectors
    if not cols:
        cols = [[0] * n]
    X = [[v[i] for v in cols] for i in range(n)]
    B, r = fgab.lattice_basis(X, len(cols))
    gens = [[B[i][j] for i in range(n)] for j in range(r)] or [[0] * n]
    return submodule(ambient, gens)


def _target_and_phi(triv, G, rng, mode=None):
    mode = mode or rng.choice(["quotient", "quotient", "random"])
    if mode == "quotient":
        A = triv.quotient_by_multiple(rng.randint(2, 6))
        k = triv.base.rank
        return A, EquivariantHom(triv, A, fgab.identity(k), check=False)
    A = random_module(G, rng, allow_free=False)
    return A, random_equivariant_hom(triv, A, rng)


ABEL_RATE = 0.35
AMBIENT_KINDS = ["trivial", "character", "character", "permutation", "permutation", "sum"]


def random_joint_models(rng, count=2, G=None, components=1, max_points=12):
    """``count`` cycle models sharing group, ambient module, trivial submodule,
    ``phi`` and target.  With ``components > 1`` every model has that many
    components permuted transitively by the group."""
    if G is None:
        G = random_group(rng)
    X = None
    abel = [H for H in G.subgroups if G.order // len(H) in (2, 3)]
    if components == 1 and abel and rng.random() < ABEL_RATE:
        # divisors on G/K_X: points go to basis vectors, so differences are
        # degree-zero divisors and classes are usually nonzero
        X = GSet.cosets(G, rng.choice(abel))
        d = rng.choice([0, 0, 0, rng.randint(2, 12)])
        mats = [_perm_matrix(X.act[g]) for g in G]
        ambient = GModule(G, fgab.diagonal_group([d] * X.size), mats)
    else:
        # trivial actions make every difference vanish, so they are rare here
        ambient = random_module(G, rng, kinds=AMBIENT_KINDS)
    K = None
    C = None
    if components > 1:
        Ks = [K for K in G.subgroups if G.order // len(K) == components]
        if not Ks:
            raise ValueError(f"group of order {G.order} has no subgroup of index {components}")
        K = rng.choice(Ks)
        C = GSet.cosets(G, K)
    data = []
    for _ in range(count):
        if X is not None:
            S = random_gset(G, rng, max_points, within=X.stabilizer(0))
            cmap = [0] * S.size
            pi = _component_map(G, S, X)
            offset = {o[0]: rng.randint(-2, 2) for o in S.orbits()}
            orbit_of = {t: o[0] for o in S.orbits() for t in o}
            g = [
                ambient.elem([int(x == pi[t]) + offset[orbit_of[t]] for x in range(X.size)])
                for t in range(S.size)
            ]
            data.append((S, g, cmap))
            continue
        if K is None:
            S = random_gset(G, rng, max_points)
            cmap = [0] * S.size
        else:
            S = random_gset(G, rng, max_points, within=K)
            cmap = _component_map(G, S, C)
        g = random_equivariant_pointmap(S, ambient, rng)
        data.append((S, g, cmap))
    triv, emb = _triv_submodule(ambient, _difference_vectors(ambient, data), rng)
    A, phi = _target_and_phi(triv, G, rng)
    return [
        CycleModel(S, ambient, g, triv, emb, phi, C, cmap if C is not None else None)
        for S, g, cmap in data
    ]


def _component_map(G, S, C):
    """Equivariant map from a union of cosets ``K'\\G`` (``K' <= K``) onto ``C = K\\G``:
    send each orbit representative to the base component and extend."""
    cmap = [None] * S.size
    for orbit in S.orbits():
        t = orbit[0]
        for g in G:
            u = S.act[g][t]
            c = C.act[g][0]
            if cmap[u] is None:
                cmap[u] = c
            elif cmap[u] != c:
                raise AssertionError("stabilizer of the orbit representative must fix the base component")
    return cmap


def random_model(rng, **kw):
    return random_joint_models(rng, count=1, **kw)[0]


def scenario_rng(seed, index):
    """Independent deterministic stream for scenario ``index`` of a run."""
    return random.Random(seed * 1_000_003 + index)
