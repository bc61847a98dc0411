"""Integer-linear bookkeeping for formal torsor classes.

Classes are named generators; relations are integer combinations declared
to vanish.  An element is forced to vanish exactly when it lies in the
lattice spanned by the relations, and every positive answer comes with the
combination of relations that produces it.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import fgab
from .errors import IdentityViolation, PreconditionError, ValidationError


@dataclass(frozen=True)
class Certificate:
    """``target = sum combination[i] * relations[i]``, exactly."""

    target: tuple
    combination: tuple
    relations: tuple

    def verify(self):
        total = [0] * len(self.target)
        for c, rel in zip(self.combination, self.relations):
            for i, r in enumerate(rel):
                total[i] += c * r
        if tuple(total) != tuple(self.target):
            raise IdentityViolation("certificate combination reproduces the target",
                                    target=self.target, got=tuple(total))
        return True


class WcRelationSystem:
    def __init__(self, generators, relations=(), degree_one=None):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValidationError("generators", "duplicate generator names")
        self.relations = []
        self.labels = []
        for rel in relations:
            self.add_relation(rel)
        if degree_one is not None and degree_one not in self.generators:
            raise ValidationError("generator", f"unknown generator {degree_one!r}")
        self.degree_one = degree_one

    def vector(self, element):
        """Coordinates of ``element`` (a dict name -> coeff, or a sequence)."""
        if isinstance(element, dict):
            v = [0] * len(self.generators)
            for name, c in element.items():
                if name not in self.generators:
                    raise ValidationError("generator", f"unknown generator {name!r}")
                v[self.generators.index(name)] += int(c)
            return tuple(v)
        v = tuple(int(c) for c in element)
        if len(v) != len(self.generators):
            raise ValidationError("arity", f"expected {len(self.generators)} coefficients")
        return v

    def add_relation(self, rel, label=None):
        v = self.vector(rel)
        self.relations.append(v)
        self.labels.append(label or format_combination(self.generators, v) + " = 0")
        return self

    def without(self, index):
        """Copy of the system with relation ``index`` removed."""
        out = WcRelationSystem(self.generators, degree_one=self.degree_one)
        for i, (v, lab) in enumerate(zip(self.relations, self.labels)):
            if i != index:
                out.add_relation(v, lab)
        return out

    def _matrix(self):
        n = len(self.generators)
        return [[rel[i] for rel in self.relations] for i in range(n)]

    def is_forced_zero(self, element):
        """``(True, Certificate)`` if ``element`` is in the relation lattice,
        else ``(False, None)``."""
        target = self.vector(element)
        if not any(target):
            return True, Certificate(target, (0,) * len(self.relations), tuple(self.relations))
        if not self.relations:
            return False, None
        x = fgab.solve_integer(self._matrix(), list(target), len(self.relations))
        if x is None:
            return False, None
        cert = Certificate(target, tuple(x), tuple(self.relations))
        cert.verify()
        return True, cert

    def quotient(self):
        """The group ``Z^generators / relations``."""
        n = len(self.generators)
        return fgab.FgAbGroup(n, self._matrix() if self.relations else None)

    def order_in_quotient(self, element):
        """Order of ``element`` in the quotient, 0 if infinite."""
        Q = self.quotient()
        return Q.elem(list(self.vector(element))).order()


def format_combination(names, v):
    terms = []
    for name, c in zip(names, v):
        if c == 0:
            continue
        coef = "" if c == 1 else "-" if c == -1 else str(c)
        terms.append(f"{coef}{name}")
    return " + ".join(terms).replace("+ -", "- ") or "0"


def pic_classes(system, d):
    """Formal class of the degree-``d`` torsor: ``d`` times the degree-one class."""
    if system.degree_one is None:
        raise PreconditionError("no degree-one generator designated")
    v = [0] * len(system.generators)
    v[system.generators.index(system.degree_one)] = d
    return tuple(v)


def quadric_system(d, drop_canonical=False):
    """Generators ``P`` (the conic-bundle class) and ``Q`` (degree-one class);
    relations ``2Q = 0`` (canonical divisor, genus two), ``2P = Q`` and
    ``P = dQ``."""
    sys = WcRelationSystem(("P", "Q"), degree_one="Q")
    if not drop_canonical:
        sys.add_relation({"Q": 2}, "2Q = 0")
    sys.add_relation({"P": 2, "Q": -1}, "2P - Q = 0")
    sys.add_relation({"P": 1, "Q": -d}, f"P - {d}Q = 0" if d >= 0 else f"P + {-d}Q = 0")
    return sys


@dataclass
class ParityVerdict:
    d: int
    drop_canonical: bool
    forced: bool
    steps: list  # (name, vector, Certificate) in derivation order
    quotient_factors: list
    order_of_p: int

    def verify(self):
        for _, _, cert in self.steps:
            cert.verify()
        return True


def quadric_parity_argument(d, drop_canonical=False):
    """Decide whether ``P`` is forced to vanish.

    With all three relations the lattice is all of ``Z^2``, so the
    derivation first exhibits ``Q`` (vector ``(0, 1)``) and then ``P``
    (vector ``(1, 0)``).  Without ``2Q = 0`` the quotient is cyclic of order
    ``|2d - 1|``, generated by ``P``.
    """
    sys = quadric_system(d, drop_canonical)
    steps = []
    if not drop_canonical:
        ok, cert = sys.is_forced_zero({"Q": 1})
        if ok:
            steps.append(("Q", (0, 1), cert))
    forced, cert = sys.is_forced_zero({"P": 1})
    if forced:
        steps.append(("P", (1, 0), cert))
    Q = sys.quotient()
    return ParityVerdict(
        d=d,
        drop_canonical=drop_canonical,
        forced=forced,
        steps=steps,
        quotient_factors=Q.invariant_factors,
        order_of_p=sys.order_in_quotient({"P": 1}),
    )
