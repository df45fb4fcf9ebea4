"""Membership in the completion, perfection, and the singularity category.

The completion pipeline: certify a tower Cauchy, take its degreewise
colimit table, and test compact support as bounded finitely generated
cohomology; membership in the triangulated completion is the conjunction
of Cauchy provenance and compact support.  Over R = F_p[x]/(x^n) the
perfection test reduces to one deep syzygy: a bounded complex is perfect
iff the cut syzygy of its minimal free resolution vanishes, since a
nonzero non-free syzygy regenerates itself 2-periodically and the
resolution never terminates.

The singularity quotient is modelled through the stable module category
(R is self-injective): a complex maps to its deep syzygy with a shift
bookkeeping integer, and Hom in the quotient is stable Hom after aligning
shifts by the syzygy equivalence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .rmodule import RModule, stable_hom, syzygy_type, zero_module
from .complexes import (
    Complex,
    PreconditionError,
    cohomology,
    derived_hom,
    direct_sum_complex,
    dualize,
    module_complex,
    projective_resolution,
    zero_complex,
)
from .metric import GoodMetric
from .cauchy import CauchyCertificate, ColimitTable, ConstantTail, Tower, TruncationTail, colimit, is_cauchy


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"

    def __bool__(self):
        return self is Verdict.YES


@dataclass
class CompletionObject:
    """A colimit of a certified Cauchy tower, with its provenance."""

    tower: Tower
    metric: GoodMetric
    certificate: CauchyCertificate
    table: ColimitTable
    representative: Complex | None = None

    def __post_init__(self):
        if self.representative is not None:
            lo, hi = self.table.window
            for i, (mod, _) in self.table.entries.items():
                if cohomology(self.representative, i) != mod:
                    raise PreconditionError(
                        "representative cohomology at degree %d disagrees with the colimit table" % i)


def complete(tower: Tower, metric: GoodMetric, horizon: int = 12, levels: int = 6,
             window: tuple[int, int] | None = None) -> CompletionObject:
    """Run the completion pipeline on a tower.

    The window defaults to one comfortably containing the possible support
    of the built-in tails.
    """
    cert = is_cauchy(tower, metric, horizon, levels)
    if window is None:
        if isinstance(tower.tail, ConstantTail):
            x = tower.tail.complex
            window = (x.min_degree - 1, x.max_degree + 1) if not x.is_zero() else (-1, 1)
        else:
            window = (-2, 2)
    table = colimit(tower, window, horizon, cert)
    rep = None
    if isinstance(tower.tail, TruncationTail):
        m = tower.tail.module
        rep = module_complex(m, 0) if not m.is_zero() else zero_complex(tower.ring)
    elif isinstance(tower.tail, ConstantTail):
        rep = tower.tail.complex
    return CompletionObject(tower, metric, cert, table, rep)


def is_compactly_supported(c: CompletionObject, functor_check_samples: int = 0,
                           seed: int = 0) -> Verdict:
    """Bounded, finitely generated stabilized cohomology.

    All table entries are finitely generated by construction, so the test
    is finite support: the table must be conclusive, meaning every window
    degree stabilized and the tail rule guarantees vanishing outside the
    window.  Optionally spot-checks the functor-level characterization for
    the standard first family: Hom(-, representative) must not see a
    morphism whose cone lives in a deep ball.
    """
    if not c.table.conclusive:
        return Verdict.INCONCLUSIVE
    if functor_check_samples and c.representative is not None and c.metric.name == "i" \
            and not c.metric.dual:
        if not _functor_spot_check(c, functor_check_samples, seed):
            return Verdict.NO
    return Verdict.YES


def _functor_spot_check(c: CompletionObject, samples: int, seed: int) -> bool:
    """Replacing the test object along a short inclusion s -> s (+) b, with b
    deep in the ball family, must not change Hom into the representative."""
    from .randomgen import Sampler

    ring = c.tower.ring
    rep = c.representative
    rng = random.Random(seed)
    sampler = Sampler(ring, rng)
    depth = abs(rep.min_degree if not rep.is_zero() else 0) + 8
    for _ in range(samples):
        s = sampler.complex(-1, 1, max_blocks=1)
        b = module_complex(RModule(ring, (1,)), -depth)
        s_plus_b, _, _ = direct_sum_complex([s, b], ring)
        if derived_hom(s_plus_b, rep, 0) != derived_hom(s, rep, 0):
            return False
    return True


def in_S(c: CompletionObject, functor_check_samples: int = 0, seed: int = 0) -> Verdict:
    """Membership in the triangulated completion.

    Membership in the plain completion comes from provenance: the object is
    a colimit of a certified Cauchy tower.  Non-Cauchy towers are rejected
    outright; what remains is compact support.
    """
    if c.certificate.verdict == "not_cauchy":
        raise PreconditionError("tower is not Cauchy for %s: no completion provenance"
                                % c.certificate.metric)
    if c.certificate.verdict == "inconclusive":
        return Verdict.INCONCLUSIVE
    return is_compactly_supported(c, functor_check_samples=functor_check_samples, seed=seed)


# -- perfection and the singularity category ----------------------------------


def is_perfect(x: Complex) -> bool:
    """Quasi-isomorphic to a bounded complex of frees.

    Detected by the syzygy at the cut one degree below the support: over
    local Artinian R a minimal resolution continues forever exactly when
    that syzygy is nonzero.
    """
    if x.is_zero():
        return True
    res = projective_resolution(x, x.min_degree - 1)
    return res.syzygy.is_zero()


def has_bounded_injective_resolution(x: Complex) -> bool:
    """Injectives over self-injective R are the duals of projectives, so a
    bounded injective resolution of x is a bounded projective resolution of
    its dual."""
    return is_perfect(dualize(x))


@dataclass(frozen=True)
class SingClass:
    """Class in the singularity category: stable syzygy representative plus
    the degree bookkeeping of the cut."""

    module: RModule
    shift: int

    def __post_init__(self):
        if any(j == self.module.ring.n for j in self.module.blocks):
            raise PreconditionError("singularity class representative has a free summand")

    def is_zero(self) -> bool:
        return self.module.is_zero()


def syzygy_class(x: Complex) -> SingClass:
    """Deep syzygy with its cut degree; zero exactly for perfect complexes."""
    if x.is_zero():
        return SingClass(zero_module(x.ring), 0)
    cut = x.min_degree - 1
    res = projective_resolution(x, cut)
    return SingClass(res.syzygy, cut)


def _omega_power(m: RModule, t: int) -> RModule:
    for _ in range(t):
        m = RModule(m.ring, syzygy_type(m))
    return m


def sing_hom(a: SingClass, b: SingClass) -> int:
    """Hom dimension in the singularity category.

    The syzygy functor inverts the shift on the stable category, so after
    applying it to whichever class has the shallower cut the classes sit
    at the same shift and Hom is stable Hom of the representatives.
    """
    if a.module.ring != b.module.ring:
        raise PreconditionError("singularity classes over different rings")
    if a.is_zero() or b.is_zero():
        return 0
    if b.shift >= a.shift:
        right = _omega_power(b.module, b.shift - a.shift)
        left = a.module
    else:
        left = _omega_power(a.module, a.shift - b.shift)
        right = b.module
    dim, _ = stable_hom(left, right)
    return dim
