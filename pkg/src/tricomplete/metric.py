"""Good metrics as families of cohomology-vanishing specifications.

A ball family assigns to each level n >= 1 the set of degrees where
cohomology must vanish; membership of a bounded complex in the n-th ball
is then a finite check on its cohomology support.  Lengths of morphisms
are exact rationals 1/n read off the cone's support, either through the
closed forms installed by the standard constructors or by scanning levels.

The three standard families, for a homological functor H:
  i)   vanish in degrees i > -n,
  ii)  vanish in degrees i < n,
  iii) vanish in degrees -n < i < n,
with family (iii) self-dual and families (i)/(ii) exchanged by k-linear
dualization.  Family (i) of the opposite category equals family (ii); the
dual flag realizes opposite-side measurement by degree negation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .rmodule import Ring
from .complexes import (
    ChainMap,
    Complex,
    PreconditionError,
    cohomology_support,
    cone,
    direct_sum_complex,
    module_complex,
    shift,
)
from .rmodule import RModule

_ENUM_GUARD = 100_000


class MetricResolutionError(RuntimeError):
    """A level scan hit its bound without resolving a ball membership."""


@dataclass(frozen=True)
class VanishingSpec:
    """Finite union of degree constraints: rays and open intervals.

    pieces are tuples ("above", a) = {i : i > a}, ("below", b) = {i : i < b},
    ("interval", a, b) = {i : a < i < b}.  Degenerate intervals are dropped.
    """

    pieces: tuple[tuple, ...] = ()

    @staticmethod
    def empty() -> "VanishingSpec":
        return VanishingSpec(())

    @staticmethod
    def ray_above(a: int) -> "VanishingSpec":
        return VanishingSpec((("above", a),))

    @staticmethod
    def ray_below(b: int) -> "VanishingSpec":
        return VanishingSpec((("below", b),))

    @staticmethod
    def interval(a: int, b: int) -> "VanishingSpec":
        if b - a <= 1:
            return VanishingSpec(())
        return VanishingSpec((("interval", a, b),))

    def union(self, other: "VanishingSpec") -> "VanishingSpec":
        return VanishingSpec(self.pieces + other.pieces)

    def is_empty(self) -> bool:
        return not self.pieces

    def contains(self, i: int) -> bool:
        for p in self.pieces:
            if p[0] == "above" and i > p[1]:
                return True
            if p[0] == "below" and i < p[1]:
                return True
            if p[0] == "interval" and p[1] < i < p[2]:
                return True
        return False

    def shifted(self, t: int) -> "VanishingSpec":
        out = []
        for p in self.pieces:
            if p[0] == "interval":
                out.append(("interval", p[1] + t, p[2] + t))
            else:
                out.append((p[0], p[1] + t))
        return VanishingSpec(tuple(out))

    def negated(self) -> "VanishingSpec":
        out = []
        for p in self.pieces:
            if p[0] == "above":
                out.append(("below", -p[1]))
            elif p[0] == "below":
                out.append(("above", -p[1]))
            else:
                out.append(("interval", -p[2], -p[1]))
        return VanishingSpec(tuple(out))

    def has_above_ray(self) -> bool:
        return any(p[0] == "above" for p in self.pieces)

    def has_below_ray(self) -> bool:
        return any(p[0] == "below" for p in self.pieces)

    def endpoint_bound(self) -> int:
        return max((abs(v) for p in self.pieces for v in p[1:]), default=0)

    def is_subset(self, other: "VanishingSpec") -> bool:
        for p in self.pieces:
            if p[0] == "above":
                thresholds = [q[1] for q in other.pieces if q[0] == "above"]
                if not thresholds:
                    return False
                a_star = min(thresholds)
                if a_star - p[1] > _ENUM_GUARD:
                    raise MetricResolutionError("ray comparison out of range")
                if any(not other.contains(i) for i in range(p[1] + 1, a_star + 1)):
                    return False
            elif p[0] == "below":
                thresholds = [q[1] for q in other.pieces if q[0] == "below"]
                if not thresholds:
                    return False
                b_star = max(thresholds)
                if p[1] - b_star > _ENUM_GUARD:
                    raise MetricResolutionError("ray comparison out of range")
                if any(not other.contains(i) for i in range(b_star, p[1])):
                    return False
            else:
                if p[2] - p[1] > _ENUM_GUARD:
                    raise MetricResolutionError("interval too large to compare")
                if any(not other.contains(i) for i in range(p[1] + 1, p[2])):
                    return False
        return True

    def __str__(self):
        if not self.pieces:
            return "(none)"
        bits = []
        for p in self.pieces:
            if p[0] == "above":
                bits.append("i>%d" % p[1])
            elif p[0] == "below":
                bits.append("i<%d" % p[1])
            else:
                bits.append("%d<i<%d" % (p[1], p[2]))
        return " or ".join(bits)


class GoodMetric:
    """Ball family: level n maps to the vanishing spec cutting out B_n.

    family(1) must be empty (B_1 is everything).  The dual flag measures on
    the opposite side: supports are negated before spec evaluation.
    support_level, when installed, resolves the largest ball containing a
    given cohomology support in closed form; minus_inf/plus_inf stand for
    support escaping to -inf/+inf (used for tails of towers).
    """

    def __init__(self, name: str, family: Callable[[int], VanishingSpec],
                 dual: bool = False,
                 support_level: Callable[[frozenset, bool, bool], int | None] | None = None):
        if not family(1).is_empty():
            raise ValueError("B_1 must be the whole category: family(1) must be empty")
        self.name = name
        self._family = family
        self.dual = dual
        self._support_level = support_level

    def spec(self, n: int) -> VanishingSpec:
        if n < 1:
            raise PreconditionError("ball level must be >= 1, got %d" % n)
        return self._family(n)

    def effective_spec(self, n: int) -> VanishingSpec:
        s = self.spec(n)
        return s.negated() if self.dual else s

    def display_name(self) -> str:
        return self.name + (":dual" if self.dual else "")

    # -- ball membership & lengths ----------------------------------------

    def support_in_ball(self, supp: frozenset, n: int) -> bool:
        eff = (frozenset(-i for i in supp)) if self.dual else supp
        spec = self.spec(n)
        return not any(spec.contains(i) for i in eff)

    def ball_level(self, supp: frozenset, minus_inf: bool = False,
                   plus_inf: bool = False) -> int | None:
        """Largest n with the support inside B_n; None when inside all balls."""
        if not supp and not minus_inf and not plus_inf:
            return None
        if self.dual:
            supp = frozenset(-i for i in supp)
            minus_inf, plus_inf = plus_inf, minus_inf
        if self._support_level is not None:
            return self._support_level(supp, minus_inf, plus_inf)
        return self._scan_level(supp, minus_inf, plus_inf)

    def _scan_level(self, supp: frozenset, minus_inf: bool, plus_inf: bool) -> int | None:
        bound = 2 * (max((abs(s) for s in supp), default=0)) + 130
        level = None
        for n in range(1, bound + 1):
            spec = self.spec(n)
            hit = any(spec.contains(i) for i in supp)
            hit = hit or (minus_inf and spec.has_below_ray())
            hit = hit or (plus_inf and spec.has_above_ray())
            if hit:
                return level if level is not None else 1
            level = n
        # nothing hit within the bound.  A matching ray kind never appeared
        # for the sentinels, so they are inside every ball; a finite degree
        # left unswept means the family is empty or not good.
        if not supp or self.spec(bound).is_empty():
            return None
        raise MetricResolutionError(
            "support %s not resolved by level %d for metric %s" % (set(supp), bound, self.name))


def in_ball(x: Complex, n: int, m: GoodMetric) -> bool:
    """Membership of a complex in the n-th ball (B_1 is everything)."""
    if n < 1:
        raise PreconditionError("ball level must be >= 1")
    if n == 1:
        return True
    return m.support_in_ball(cohomology_support(x), n)


def object_length(x: Complex, m: GoodMetric) -> Fraction:
    """Length of 0 -> x: the infimum of 1/n over balls containing x."""
    supp = cohomology_support(x)
    if not supp:
        return Fraction(0)
    level = m.ball_level(supp)
    if level is None:
        return Fraction(0)
    return Fraction(1, level)


def length(f: ChainMap, m: GoodMetric) -> Fraction:
    """Length of a morphism: 0 for quasi-isos, else 1/(deepest ball of the cone)."""
    return object_length(cone(f).z, m)


# -- the standard families ---------------------------------------------------


def _family_i(n: int) -> VanishingSpec:
    return VanishingSpec.empty() if n == 1 else VanishingSpec.ray_above(-n)


def _family_ii(n: int) -> VanishingSpec:
    return VanishingSpec.empty() if n == 1 else VanishingSpec.ray_below(n)


def _family_iii(n: int) -> VanishingSpec:
    return VanishingSpec.empty() if n == 1 else VanishingSpec.interval(-n, n)


def _level_i(supp: frozenset, minus_inf: bool, plus_inf: bool) -> int | None:
    if plus_inf:
        return 1
    if not supp:
        return None
    return max(1, -max(supp))


def _level_ii(supp: frozenset, minus_inf: bool, plus_inf: bool) -> int | None:
    if minus_inf:
        return 1
    if not supp:
        return None
    return max(1, min(supp))


def _level_iii(supp: frozenset, minus_inf: bool, plus_inf: bool) -> int | None:
    if not supp:
        return None
    return max(1, min(abs(s) for s in supp))


def metric_i(dual: bool = False) -> GoodMetric:
    return GoodMetric("i", _family_i, dual=dual, support_level=_level_i)


def metric_ii(dual: bool = False) -> GoodMetric:
    return GoodMetric("ii", _family_ii, dual=dual, support_level=_level_ii)


def metric_iii(dual: bool = False) -> GoodMetric:
    return GoodMetric("iii", _family_iii, dual=dual, support_level=_level_iii)


def shifted_family(m: GoodMetric, t: int) -> GoodMetric:
    """The family {T^t B_n}: spec(n) translated by -t on the effective side."""
    base_family = m._family
    base_level = m._support_level

    def family(n: int) -> VanishingSpec:
        return base_family(n).shifted(-t)

    level = None
    if base_level is not None:
        def level(supp, minus_inf, plus_inf, _b=base_level, _t=t):
            return _b(frozenset(s + _t for s in supp), minus_inf, plus_inf)

    return GoodMetric("T^%d(%s)" % (t, m.name), family, dual=m.dual, support_level=level)


def standard_metric(spec: str) -> GoodMetric:
    """Parse "i", "ii", "iii", optionally suffixed ":dual"."""
    name, _, flag = spec.partition(":")
    if flag not in ("", "dual"):
        raise ValueError("unknown metric flag %r" % flag)
    dual = flag == "dual"
    table = {"i": metric_i, "ii": metric_ii, "iii": metric_iii}
    if name not in table:
        raise ValueError("unknown metric %r" % name)
    return table[name](dual=dual)


# -- axiom checking -----------------------------------------------------------


@dataclass
class AxiomReport:
    metric: str
    levels_checked: int
    shift_violations: list = field(default_factory=list)  # (n, shift, witness degree)
    fuzz_samples: int = 0
    fuzz_violations: list = field(default_factory=list)  # (n, support of bad cone)

    @property
    def ok(self) -> bool:
        return not self.shift_violations and not self.fuzz_violations


def _witness_degree(a: VanishingSpec, b: VanishingSpec, guard: int = 512) -> int | None:
    """Some degree in a but not in b."""
    for p in a.pieces:
        if p[0] == "interval":
            for i in range(p[1] + 1, p[2]):
                if not b.contains(i):
                    return i
        elif p[0] == "above":
            for i in range(p[1] + 1, p[1] + guard):
                if not b.contains(i):
                    return i
        else:
            for i in range(p[1] - 1, p[1] - guard, -1):
                if not b.contains(i):
                    return i
    return None


def check_good_axioms(m: GoodMetric, ring: Ring, levels: int = 50,
                      samples: int = 200, seed: int = 0) -> AxiomReport:
    """Verify the good-metric axioms.

    Axiom (ii), the shrinking condition T^-1 B_(n+1), B_(n+1), T B_(n+1)
    inside B_n, is decided symbolically: it amounts to spec(n) and both its
    unit shifts being contained in spec(n+1).  Axiom (i), closure of balls
    under extensions, holds symbolically for every vanishing-spec family by
    the long exact sequence of the cone (the support of an extension lies
    in the union of the supports); it is additionally fuzzed on random
    triangles with both ends in a ball.
    """
    from .randomgen import Sampler

    report = AxiomReport(metric=m.display_name(), levels_checked=levels)
    for n in range(1, levels + 1):
        target = m.effective_spec(n + 1)
        for t in (-1, 0, 1):
            src = m.effective_spec(n).shifted(t)
            if not src.is_subset(target):
                bad = _witness_degree(src, target)
                report.shift_violations.append((n, t, bad))
    # fuzz axiom (i) on random triangles b -> z -> b' with b, b' in B_n
    rng = random.Random(seed)
    sampler = Sampler(ring, rng)
    done = 0
    level_cycle = [2, 3, 4, 5]
    while done < samples:
        n = level_cycle[done % len(level_cycle)]
        spec = m.effective_spec(n)
        allowed = [i for i in range(-(n + 6), n + 7) if not spec.contains(i)]
        if not allowed:
            done += 1
            continue
        degs = rng.sample(allowed, k=min(3, len(allowed)))
        b = sampler.complex(0, 0, max_blocks=2, degrees=degs)
        b2 = sampler.complex(0, 0, max_blocks=2, degrees=degs)
        w = sampler.chain_map(shift(b2, -1), b)
        z = cone(w).z
        if not in_ball(z, n, m):
            report.fuzz_violations.append((n, sorted(cohomology_support(z))))
        done += 1
    report.fuzz_samples = done
    return report


# -- equivalence ---------------------------------------------------------------


@dataclass
class EquivalenceReport:
    metric1: str
    metric2: str
    equivalent: bool
    levels: int
    search_bound: int
    witness: dict[int, int] = field(default_factory=dict)  # n -> m
    fail_level: int | None = None
    separating: list = field(default_factory=list)  # (direction, m, degree)

    def separating_complexes(self, ring: Ring) -> list[tuple[int, Complex]]:
        """Materialize the separating family: simple stalks k at the
        recorded degrees (arbitrarily short in one metric, long in the other)."""
        k = RModule(ring, (1,))
        return [(mm, module_complex(k, deg)) for _, mm, deg in self.separating]


def equivalent(m1: GoodMetric, m2: GoodMetric, levels: int = 20,
               search_bound: int = 200) -> EquivalenceReport:
    """Decide equivalence at the ball level.

    B(1)_m inside B(2)_n is exactly spec2(n) inside spec1(m) (on effective
    specs), so per level the least witness m is found by search; the table
    records the max of the two directions.  On failure the report carries a
    separating family of stalk degrees.
    """
    report = EquivalenceReport(metric1=m1.display_name(), metric2=m2.display_name(),
                               equivalent=True, levels=levels, search_bound=search_bound)

    def least_witness(n: int, inner: GoodMetric, outer: GoodMetric) -> int | None:
        # smallest m with B(inner)_m inside B(outer)_n
        spec_out = outer.effective_spec(n)
        for mm in range(1, search_bound + 1):
            if spec_out.is_subset(inner.effective_spec(mm)):
                return mm
        return None

    for n in range(1, levels + 1):
        a = least_witness(n, m1, m2)
        b = least_witness(n, m2, m1)
        if a is None or b is None:
            report.equivalent = False
            report.fail_level = n
            direction = "1->2" if a is None else "2->1"
            inner, outer = (m1, m2) if a is None else (m2, m1)
            for mm in (1, 2, 4, 8, max(16, search_bound // 2), search_bound):
                deg = _witness_degree(outer.effective_spec(n), inner.effective_spec(mm))
                if deg is not None:
                    report.separating.append((direction, mm, deg))
            return report
        report.witness[n] = max(a, b)
    return report


# -- metric checks on morphisms -------------------------------------------------


@dataclass
class TriangleInequalityCheck:
    ok: bool
    length_f: Fraction
    length_g: Fraction
    length_gf: Fraction


def strong_triangle_check(f: ChainMap, g: ChainMap, m: GoodMetric) -> TriangleInequalityCheck:
    """length(g o f) <= max(length(f), length(g))."""
    if f.target != g.source:
        raise PreconditionError("maps are not composable")
    lf = length(f, m)
    lg = length(g, m)
    lgf = length(g @ f, m)
    return TriangleInequalityCheck(lgf <= max(lf, lg), lf, lg, lgf)


@dataclass
class CartesianInvarianceCheck:
    ok: bool
    length_f: Fraction
    length_g: Fraction


def cartesian_invariance_check(f: ChainMap, h: ChainMap, m: GoodMetric) -> CartesianInvarianceCheck:
    """Homotopy pushout invariance: the induced g : C -> D in the square
    built on f : A -> B and h : A -> C has the same length as f."""
    if f.source != h.source:
        raise PreconditionError("maps do not share a source")
    a = f.source
    ring = a.ring
    bc, injs, _ = direct_sum_complex([f.target, h.target], ring)
    u = (injs[0] @ (-f)) + (injs[1] @ h)
    tri = cone(u)
    g = tri.g @ injs[1]  # C -> B(+)C -> cone(u)
    lf = length(f, m)
    lg = length(g, m)
    return CartesianInvarianceCheck(lf == lg, lf, lg)
