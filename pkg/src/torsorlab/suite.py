"""Exhaustive checks of the torsor-class construction on concrete models.

Every check raises :class:`~torsorlab.errors.IdentityViolation` on the first
failure, naming the identity and the group elements / points involved.
"""

from __future__ import annotations

import random

from .cohom import CohClass, coboundary_of, find_cocycle_violation, is_coboundary, restrict_cocycle
from .cycles import (
    basepoint_witnesses,
    boxplus,
    build_cocycle,
    check_symmetric_factorization,
    descended_map,
    disconnected_descent,
    sym_power,
    torsor_class,
)
from .errors import IdentityViolation
from .models import random_group, random_joint_models, scenario_rng


def component_bases(model):
    return sorted(model.component_base.values())


def check_cocycles(model):
    """(a): the difference cocycle at every basepoint satisfies the cocycle law."""
    for t0 in range(model.points.size):
        alpha = build_cocycle(model, t0, check=False)
        bad = find_cocycle_violation(alpha.module, alpha.values, alpha.domain)
        if bad is not None:
            raise IdentityViolation("cocycle condition a(st) = a(s)^t + a(t)", basepoint=t0, sigma=bad[0], tau=bad[1])


def check_basepoints(model):
    """(b): classes from different basepoints on a component differ by the
    explicit coboundary of ``f(t0, t1)``."""
    count = 0
    for t0 in component_bases(model):
        count += len(basepoint_witnesses(model, t0))
    return count


def check_additivity(m1, m2):
    """(c): class of the external sum is the sum of the classes, with the
    difference cocycle shown to be a coboundary by an explicit witness."""
    joint = boxplus(m1, m2)
    n2 = m2.points.size
    for t1 in component_bases(m1):
        for t2 in component_bases(m2):
            t = t1 * n2 + t2
            ab = build_cocycle(joint, t)
            H = ab.domain
            a1 = restrict_cocycle(build_cocycle(m1, t1), H)
            a2 = restrict_cocycle(build_cocycle(m2, t2), H)
            diff = ab - a1 - a2
            w = is_coboundary(diff)
            if w is None or coboundary_of(diff.module, w, H) != diff:
                raise IdentityViolation("class(Z1 [+] Z2) = class(Z1) + class(Z2)", t1=t1, t2=t2)
            if CohClass(ab) != CohClass(a1) + CohClass(a2):
                raise IdentityViolation("class(Z1 [+] Z2) = class(Z1) + class(Z2)", t1=t1, t2=t2)
    return joint


def check_descended_maps(model):
    for t0 in component_bases(model):
        descended_map(model, t0).check_equivariance()


def class_record(cls):
    return {"h1": cls.h1.invariant_factors, "class": list(cls.coords.canonical)}


def run_pair(m1, m2):
    """Full suite on two joint models; returns a JSON-ready summary."""
    for m in (m1, m2):
        check_cocycles(m)
    witnesses = check_basepoints(m1) + check_basepoints(m2)
    check_additivity(m1, m2)
    for m in (m1, m2):
        check_descended_maps(m)
    c1, c2 = torsor_class(m1, verify=False), torsor_class(m2, verify=False)
    out = {
        "group_order": m1.group.order,
        "points": [m1.points.size, m2.points.size],
        "components": m1.components.size,
        "witnesses": witnesses,
        "classes": [class_record(c1), class_record(c2)],
    }
    if m1.components.size > 1:
        for m in (m1, m2):
            disconnected_descent(m, 0).check_all()
    return out


def random_pair(seed, index, multi_component_rate=0.2):
    """Deterministic pair of joint models for scenario ``index`` of a seeded run."""
    rng = scenario_rng(seed, index)
    G = random_group(rng)
    comps = 1
    if rng.random() < multi_component_rate:
        options = [k for k in (2, 3) if any(G.order // len(K) == k for K in G.subgroups)]
        if options:
            comps = rng.choice(options)
    return random_joint_models(rng, count=2, G=G, components=comps)


def random_multicomponent(seed, index):
    """Single model with two or three components permuted transitively."""
    rng = scenario_rng(seed, index)
    while True:
        G = random_group(rng)
        options = [k for k in (2, 3) if any(G.order // len(K) == k for K in G.subgroups)]
        if options:
            return random_joint_models(rng, count=1, G=G, components=rng.choice(options))[0]


def run_random(seed, index):
    m1, m2 = random_pair(seed, index)
    rec = run_pair(m1, m2)
    rec["index"] = index
    return rec


def run_symmetric(model, d, t0=0):
    power = sym_power(model, d)
    check_symmetric_factorization(model, power, d, t0)
    c = torsor_class(power, t0 * sum(model.points.size**i for i in range(d)), verify=False)
    return power, c


def shuffled(seq, seed):
    out = list(seq)
    random.Random(seed).shuffle(out)
    return out
