"""Torsors as modules with a cocycle-twisted action, and their class group."""

from __future__ import annotations

from dataclasses import dataclass, field

from .cohom import CohClass, Cocycle1, is_coboundary
from .errors import IdentityViolation, ValidationError


class TwistedModule:
    """``M`` with the action ``b -> twist(s) + b^s``.

    This is the point-set model of the torsor attached to ``twist``.
    """

    def __init__(self, twist):
        if not isinstance(twist, Cocycle1):
            raise ValidationError("cocycle", "twist must be a validated Cocycle1")
        self.twist = twist
        self.module = twist.module
        self.domain = twist.domain

    def act(self, b, s):
        if s not in self.twist.values:
            raise ValidationError("domain", f"{s} is outside the twist's domain")
        M = self.module
        return M.add(self.twist[s], M.act(b, s))

    def check_composition(self, points=None):
        """Exhaustively verify ``(b^~s)^~t = b^~(st)``; raise on the first failure."""
        M = self.module
        G = M.group
        points = M.elements() if points is None else points
        for b in points:
            for s in self.domain:
                bs = self.act(b, s)
                for t in self.domain:
                    if not M.eq(self.act(bs, t), self.act(b, G.mul[s][t])):
                        raise IdentityViolation("twisted composition", point=b, sigma=s, tau=t)

    def cls(self):
        return CohClass(self.twist)

    def fixed_point(self):
        """A point fixed by the twisted action, or ``None``.

        ``b`` is fixed iff ``twist(s) = (-b)^s - (-b)``, so this is the
        coboundary solve with the sign flipped.
        """
        m = is_coboundary(self.twist)
        return None if m is None else self.module.neg(m)

    def fixed_point_bruteforce(self):
        M = self.module
        for b in M.elements():
            if all(M.eq(self.act(b, s), b) for s in self.domain):
                return b
        return None


def twist_act(twisted, b, s):
    return twisted.act(b, s)


def is_trivial(twisted):
    """Fixed point of the twisted action (a "rational point") or ``None``."""
    return twisted.fixed_point()


def wc_add(c1, c2):
    if c1.module is not c2.module and c1.module != c2.module:
        raise ValidationError("module", "classes over different modules")
    return c1 + c2


def torsors_isomorphic(t1, t2):
    """Return ``(True, c)`` if translation by ``c`` carries the ``t1``-action to
    the ``t2``-action, i.e. ``(b + c)^~2s = b^~1s + c``; else ``(False, None)``."""
    if t1.module is not t2.module and t1.module != t2.module:
        raise ValidationError("module", "torsors under different modules")
    c = is_coboundary(t1.twist - t2.twist)
    if c is None:
        return False, None
    return True, c


def check_translation(t1, t2, c, points=None):
    M = t1.module
    points = M.elements() if points is None else points
    for b in points:
        for s in t1.domain:
            if not M.eq(t2.act(M.add(b, c), s), M.add(t1.act(b, s), c)):
                return (b, s)
    return None


@dataclass
class InducedObject:
    """Coset-indexed union of copies of a module with transport data.

    A point is a pair ``(rep, m)``; ``transport[(rep, s)]`` is the translation
    part of the action, so ``(rep, m)^s = (rep', transport[(rep, s)] + m^s)``
    where ``rep'`` represents the coset of ``rep * s``.
    """

    group: object
    subgroup: tuple
    reps: list
    basepoints: dict
    fiber: object
    transport: dict = field(repr=False)
    next_rep: dict = field(repr=False)

    def act(self, point, s):
        rep, m = point
        M = self.fiber
        return self.next_rep[(rep, s)], M.add(self.transport[(rep, s)], M.act(m, s))

    def check_action_law(self, fiber_points):
        G = self.group
        for rep in self.reps:
            for m in fiber_points:
                for s in G:
                    ps = self.act((rep, m), s)
                    for t in G:
                        lhs = self.act(ps, t)
                        rhs = self.act((rep, m), G.mul[s][t])
                        if lhs[0] != rhs[0] or not self.fiber.eq(lhs[1], rhs[1]):
                            raise IdentityViolation(
                                "induced action law ((r,m)^s)^t = (r,m)^(st)",
                                rep=rep, point=m, sigma=s, tau=t,
                            )
