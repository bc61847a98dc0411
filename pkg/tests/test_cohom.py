import random

import pytest
from hypothesis import given, strategies as st

from torsorlab import fgab
from torsorlab.cohom import (
    CohClass,
    Cocycle1,
    coboundary_of,
    conjugate_cocycle,
    find_cocycle_violation,
    h1,
    h1_cyclic_oracle,
    is_coboundary,
    is_cocycle,
    restrict_cocycle,
    zero_cocycle,
)
from torsorlab.errors import IdentityViolation, UnsupportedRepresentation, ValidationError
from torsorlab.gmod import FiniteGroup, GModule, TabulatedModule
from torsorlab.models import group_menu, random_module, sign_module

from oracles import brute_h1_profile, cyclic_product_orders

C2 = FiniteGroup.cyclic(2)


def trivial(G, d):
    return GModule.trivial_action(G, fgab.cyclic(d))


def test_is_cocycle_examples():
    Z2 = trivial(C2, 2)
    assert is_cocycle(Z2, [Z2.zero, Z2.zero])
    assert is_cocycle(Z2, [Z2.zero, Z2.elem([1])])
    Z = trivial(C2, 0)
    assert find_cocycle_violation(Z, [Z.zero, Z.elem([1])]) == (1, 1)
    with pytest.raises(IdentityViolation) as err:
        Cocycle1(Z, [Z.zero, Z.elem([1])])
    assert err.value.details["sigma"] == 1 and err.value.details["tau"] == 1


def test_coboundary_examples():
    Zs = sign_module(C2)
    assert coboundary_of(Zs, Zs.zero).is_zero()
    assert coboundary_of(Zs, Zs.elem([1]))[1] == Zs.elem([-2])
    Z2 = trivial(C2, 2)
    assert is_coboundary(Cocycle1(Z2, [Z2.zero, Z2.elem([1])])) is None


def test_h1_examples():
    S3 = FiniteGroup.symmetric(3)
    assert h1(trivial(S3, 0)).invariant_factors == []
    assert h1(sign_module(C2)).invariant_factors == [2]
    assert h1(trivial(C2, 2)).invariant_factors == [2]


def test_oracle_examples():
    C5 = FiniteGroup.cyclic(5)
    assert h1_cyclic_oracle(trivial(C5, 5), 1).invariant_factors == [5]
    assert h1_cyclic_oracle(sign_module(C2), 1).invariant_factors == [2]
    C1 = FiniteGroup.cyclic(1)
    assert h1_cyclic_oracle(trivial(C1, 7), 0).is_trivial


def test_tabulated_needs_cyclic_group():
    V4 = FiniteGroup.direct_product(C2, C2)
    T = TabulatedModule(V4, 2, lambda a, b: (a + b) % 2, lambda a: a, 0, [[0, 1]] * 4)
    with pytest.raises(UnsupportedRepresentation):
        h1(T)


def test_tabulated_oracle_matches_presented():
    # Z/4 with the generator of C2 acting by -1, as a table
    T = TabulatedModule(C2, 4, lambda a, b: (a + b) % 4, lambda a: -a % 4, 0, [[0, 1, 2, 3], [0, 3, 2, 1]])
    P = GModule.from_generators(C2, fgab.cyclic(4), [[[-1]]])
    assert h1(T).invariant_factors == h1(P).invariant_factors == [2]


@given(st.integers(0, 10**6))
def test_h1_against_brute_force(seed):
    rng = random.Random(seed)
    G = rng.choice(group_menu())
    M = random_module(G, rng, max_rank=2, max_factor=6, allow_free=False)
    if M.size > 36:
        M = random_module(G, rng, max_rank=1, max_factor=6, allow_free=False)
    H = rng.choice(G.subgroups)
    got = h1(M, H).invariant_factors
    assert cyclic_product_orders(got) == brute_h1_profile(M, H)


@given(st.integers(0, 10**6))
def test_h1_matches_cyclic_oracle(seed):
    rng = random.Random(seed)
    G = FiniteGroup.cyclic(rng.randint(1, 8))
    M = random_module(G, rng)
    gen = G.cyclic_generator()
    assert h1(M).invariant_factors == h1_cyclic_oracle(M, gen).invariant_factors


@given(st.integers(0, 10**6))
def test_class_arithmetic(seed):
    rng = random.Random(seed)
    G = rng.choice(group_menu(6))
    M = random_module(G, rng, max_rank=2, max_factor=8)
    # random cocycles: coboundaries plus random multiples of lifted H^1 generators
    reps = _class_reps(M)
    if not reps:
        return
    a = rng.choice(reps) + coboundary_of(M, _rand_elem(M, rng))
    b = rng.choice(reps)
    ca, cb = CohClass(a), CohClass(b)
    assert (ca + cb).coords == ca.coords + cb.coords
    assert (ca - ca).is_zero()
    assert (-ca).coords == -ca.coords
    assert CohClass(coboundary_of(M, _rand_elem(M, rng))).is_zero()
    assert ca + CohClass(zero_cocycle(M)) == ca


def _rand_elem(M, rng):
    return M.elem([rng.randint(-6, 6) for _ in range(M.base.rank)])


def _class_reps(M):
    """Cocycles representing generators of H^1, found by brute force on
    small finite modules."""
    if not M.base.is_finite or M.size > 64:
        return []
    from oracles import brute_cocycles

    G = M.group
    return [Cocycle1(M, a, tuple(range(G.order))) for a in brute_cocycles(M, range(G.order))[:12]]


def test_restriction_examples():
    C4 = FiniteGroup.cyclic(4)
    Z2 = trivial(C4, 2)
    # the homomorphism C4 -> Z/2
    alpha = Cocycle1(Z2, [Z2.elem([k % 2]) for k in range(4)])
    res = restrict_cocycle(alpha, (0, 2))
    assert is_cocycle(Z2, res.values, res.domain)
    assert res[2].is_zero()
    assert restrict_cocycle(alpha, (0,)).is_zero()
    with pytest.raises(ValidationError):
        restrict_cocycle(alpha, (0, 1))
    m = Z2.elem([1])
    cb = coboundary_of(Z2, m)
    assert is_coboundary(restrict_cocycle(cb, (0, 2))) is not None


def _random_cocycle_on(M, H, rng):
    from oracles import brute_cocycles

    cands = brute_cocycles(M, H)
    return Cocycle1(M, rng.choice(cands), H)


@given(st.integers(0, 10**6))
def test_conjugation(seed):
    rng = random.Random(seed)
    G = rng.choice([FiniteGroup.symmetric(3), FiniteGroup.dihedral(4), FiniteGroup.quaternion()])
    M = random_module(G, rng, max_rank=1, max_factor=6, allow_free=False)
    H = rng.choice(G.subgroups)
    beta = _random_cocycle_on(M, H, rng)
    assert conjugate_cocycle(beta, 0) == beta
    tau, tau2 = rng.randrange(G.order), rng.randrange(G.order)
    b1 = conjugate_cocycle(conjugate_cocycle(beta, tau), tau2)
    b2 = conjugate_cocycle(beta, G.mul[tau][tau2])
    assert b1.domain == b2.domain and b1 == b2
    # intertwining of twisted actions
    bt = conjugate_cocycle(beta, tau)
    for b in M.elements():
        for s in H:
            s2 = G.conjugate(s, tau)
            lhs = M.act(beta[s] + M.act(b, s), tau)
            rhs = bt[s2] + M.act(M.act(b, tau), s2)
            assert lhs == rhs


def test_conjugation_of_coboundary_inside_subgroup():
    G = FiniteGroup.dihedral(4)
    M = random_module(G, random.Random(3), max_rank=2, max_factor=6, allow_free=False)
    H = next(K for K in G.subgroups if len(K) == 4)
    m = M.elem([1] * M.base.rank)
    for tau in H:
        beta = coboundary_of(M, m, H)
        conj = conjugate_cocycle(beta, tau)
        assert conj == coboundary_of(M, M.act(m, tau), conj.domain)


def test_conjugation_normal_subgroup_all_tau():
    G = FiniteGroup.symmetric(3)
    H = next(K for K in G.subgroups if len(K) == 3)
    assert G.is_normal(H)
    M = GModule.trivial_action(G, fgab.cyclic(3))
    for a in M.elements():
        beta = Cocycle1(M, {0: M.zero, H[1]: a, H[2]: a + a}, H)
        for tau in G:
            conj = conjugate_cocycle(beta, tau)
            assert is_cocycle(M, conj.values, conj.domain)
