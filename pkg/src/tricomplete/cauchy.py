"""Towers of complexes, Cauchy certification and degreewise colimits.

A tower is a composable sequence X_1 -> X_2 -> ... given by an explicit
finite prefix plus an optional structured tail rule that generates entries
on demand:

  * truncation tail of a module M: X_k is the brutal truncation to degrees
    >= -k of the minimal free resolution of M, with subcomplex inclusions
    as connecting maps (the resolution is eventually periodic, so any X_k
    is cheap to produce);
  * constant tail at a bounded complex X: X_k = X with identity maps.

For tail towers the cone of X_i -> X_j is the quotient complex, whose
cohomology support has a closed form, so certificates are unconditional:
lengths for all i, j, including the j -> infinity limit, are evaluated
exactly (the escape to -infinity is tracked as a sentinel).  Prefix-only
towers can only ever be measured up to the horizon, and their certificates
say so rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rmodule import (
    RModule,
    Ring,
    projective_cover_and_syzygy,
    identity_map,
)
from .complexes import (
    ChainMap,
    Complex,
    PreconditionError,
    cohomology_data,
    cohomology_map,
    cone,
)
from .metric import GoodMetric, object_length


INF = "inf"  # stands for j -> infinity in tail computations


class TruncationTail:
    """Generates brutal truncations of the minimal free resolution of M."""

    def __init__(self, module: RModule):
        self.module = module
        self.ring = module.ring
        # stage t: (free module F_t covering Omega^t M, map F_t -> F_(t-1))
        self._frees: list[RModule] = []
        self._dmaps: list = []  # _dmaps[t] : F_t -> F_(t-1), t >= 1
        self._omegas: list[RModule] = [module]
        self._incls: list = []  # kernel inclusion Omega^(t+1) -> F_t

    def _extend(self, t: int):
        while len(self._frees) <= t:
            stage = len(self._frees)
            m = self._omegas[stage]
            F, cover, syz, incl = projective_cover_and_syzygy(m)
            self._frees.append(F)
            self._omegas.append(syz)
            self._incls.append(incl)
            if stage >= 1:
                # d : F_stage ->> Omega^stage M >-> F_(stage-1)
                prev_incl = self._incls[stage - 1]
                self._dmaps.append(prev_incl @ cover)
            else:
                self._dmaps.append(None)

    def free(self, t: int) -> RModule:
        self._extend(t)
        return self._frees[t]

    def omega(self, t: int) -> RModule:
        while len(self._omegas) <= t:
            self._extend(len(self._frees))
        return self._omegas[t]

    def limit_escapes_below(self) -> bool:
        """Whether cone supports keep escaping to -infinity as i grows."""
        return not self.module.is_free() and not self.module.is_zero()

    def complex_at(self, k: int) -> Complex:
        self._extend(k)
        comps = {-t: self._frees[t] for t in range(0, k + 1) if not self._frees[t].is_zero()}
        diffs = {-t: self._dmaps[t] for t in range(1, k + 1)
                 if not self._frees[t].is_zero() and not self._frees[t - 1].is_zero()}
        return Complex(self.ring, comps, diffs)

    def map_at(self, k: int, xk: Complex, xk1: Complex) -> ChainMap:
        return ChainMap(xk, xk1, {i: identity_map(xk.component(i)) for i in xk.degrees})

    def cone_support(self, i: int, j: int) -> tuple[frozenset, bool]:
        """Cohomology support of cone(X_i -> X_j), plus a flag for j = infinity.

        The cone is the quotient complex in degrees [-j, -i-1]: its top
        cohomology is the covered syzygy (nonzero iff F_(i+1) is), its
        bottom is Omega^(j+1) M, and middle degrees are exact.
        """
        if j == i:
            return frozenset(), False
        supp = set()
        if not self.free(i + 1).is_zero():
            supp.add(-i - 1)
        if j == INF:
            return frozenset(supp), not self.module.is_free() and not self.module.is_zero()
        if not self.omega(j + 1).is_zero():
            supp.add(-j)
        return frozenset(supp), False


class ConstantTail:
    """X_k = X for all k, with identity connecting maps."""

    def __init__(self, x: Complex):
        self.complex = x
        self.ring = x.ring

    def complex_at(self, k: int) -> Complex:
        return self.complex

    def map_at(self, k: int, xk: Complex, xk1: Complex) -> ChainMap:
        from .complexes import identity_chain_map

        return identity_chain_map(self.complex)

    def cone_support(self, i: int, j: int) -> tuple[frozenset, bool]:
        return frozenset(), False


class Tower:
    """Cauchy-sequence candidate: finite prefix plus optional tail rule."""

    def __init__(self, ring: Ring, prefix: list[Complex] | None = None,
                 prefix_maps: list[ChainMap] | None = None,
                 tail: TruncationTail | ConstantTail | None = None):
        self.ring = ring
        self.prefix = list(prefix or [])
        self.prefix_maps = list(prefix_maps or [])
        self.tail = tail
        if self.prefix_maps and len(self.prefix_maps) != len(self.prefix) - 1:
            raise PreconditionError("need exactly one connecting map between consecutive prefix entries")
        for k, f in enumerate(self.prefix_maps):
            if f.source != self.prefix[k] or f.target != self.prefix[k + 1]:
                raise PreconditionError("connecting map %d does not match prefix entries" % (k + 1))
        if tail is not None:
            for k, x in enumerate(self.prefix, start=1):
                if x != tail.complex_at(k):
                    raise PreconditionError("prefix entry %d disagrees with the tail rule" % k)
        self._cplx_cache: dict[int, Complex] = {}
        self._map_cache: dict[int, ChainMap] = {}

    @property
    def has_tail(self) -> bool:
        return self.tail is not None

    def available_horizon(self, requested: int) -> int:
        if self.tail is not None:
            return requested
        return min(requested, len(self.prefix))

    def complex_at(self, k: int) -> Complex:
        if k < 1:
            raise PreconditionError("tower entries start at 1")
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        if self.tail is None:
            raise PreconditionError("tower entry %d beyond prefix of length %d (no tail rule)"
                                    % (k, len(self.prefix)))
        if k not in self._cplx_cache:
            self._cplx_cache[k] = self.tail.complex_at(k)
        return self._cplx_cache[k]

    def map_at(self, k: int) -> ChainMap:
        """Connecting map X_k -> X_(k+1)."""
        if k < len(self.prefix):
            return self.prefix_maps[k - 1]
        if self.tail is None:
            raise PreconditionError("connecting map %d beyond prefix (no tail rule)" % k)
        if k not in self._map_cache:
            self._map_cache[k] = self.tail.map_at(k, self.complex_at(k), self.complex_at(k + 1))
        return self._map_cache[k]

    def composite(self, i: int, j: int) -> ChainMap:
        """The composite X_i -> X_j."""
        from .complexes import identity_chain_map

        acc = identity_chain_map(self.complex_at(i))
        for k in range(i, j):
            acc = self.map_at(k) @ acc
        return acc


def truncation_tower(m: RModule) -> Tower:
    return Tower(m.ring, tail=TruncationTail(m))


def constant_tower(x: Complex) -> Tower:
    return Tower(x.ring, tail=ConstantTail(x))


def prefix_tower(complexes: list[Complex], maps: list[ChainMap]) -> Tower:
    if not complexes:
        raise PreconditionError("a prefix tower needs at least one entry")
    return Tower(complexes[0].ring, prefix=complexes, prefix_maps=maps)


# -- Cauchy certification ------------------------------------------------------


@dataclass
class CauchyCertificate:
    metric: str
    horizon: int
    levels: int
    verdict: str  # "cauchy" | "not_cauchy" | "inconclusive"
    conclusive: bool
    thresholds: dict[int, int] = field(default_factory=dict)  # n -> M(n)
    sup_lengths: dict[int, Fraction] = field(default_factory=dict)  # i -> sup over j of length
    violation: tuple | None = None  # (n, i, j, length); j may be "inf"
    note: str = ""

    @property
    def is_cauchy(self) -> bool:
        return self.verdict == "cauchy"


def _tail_sup_length(tower: Tower, m: GoodMetric, i: int, scan: int = 64) -> Fraction:
    """sup over j >= i of length(X_i -> X_j) for a tail tower, exactly.

    Ball levels of two-point supports factor through the level of each
    point (specs grow with n), so the sup is attained within a finite scan
    of j or at the j -> infinity sentinel.
    """
    best = Fraction(0)
    for j in range(i + 1, i + 2 + scan):
        supp, _ = tower.tail.cone_support(i, j)
        if not supp:
            continue
        lvl = m.ball_level(supp)
        if lvl is not None:
            best = max(best, Fraction(1, lvl))
    supp, minus_inf = tower.tail.cone_support(i, INF)
    if supp or minus_inf:
        lvl = m.ball_level(supp, minus_inf=minus_inf)
        if lvl is not None:
            best = max(best, Fraction(1, lvl))
    return best


def is_cauchy(tower: Tower, m: GoodMetric, horizon: int, levels: int) -> CauchyCertificate:
    """Certify the Cauchy condition per level n: a threshold M(n) beyond
    which all composites are shorter than 1/n.

    Tail towers get unconditional certificates from the closed-form cone
    supports; prefix-only towers are measured within the horizon and the
    certificate is explicitly inconclusive (never a false positive).
    """
    if horizon < 2:
        raise PreconditionError("horizon must be >= 2")
    name = m.display_name()
    if tower.has_tail:
        sup = {i: _tail_sup_length(tower, m, i) for i in range(1, horizon + 1)}
        # the shipped spec families make sup lengths non-increasing; guard it
        vals = [sup[i] for i in range(1, horizon + 1)]
        if any(vals[t + 1] > vals[t] for t in range(len(vals) - 1)):
            raise PreconditionError("sup lengths not monotone; cannot certify this metric on a tail tower")
        # asymptotics for i -> infinity: the whole cone support escapes below
        escapes = isinstance(tower.tail, TruncationTail) and tower.tail.limit_escapes_below()
        asct = m.ball_level(frozenset(), minus_inf=True) if escapes else None
        limit_len = Fraction(0) if asct is None else Fraction(1, asct)
        cert = CauchyCertificate(metric=name, horizon=horizon, levels=levels,
                                 verdict="cauchy", conclusive=True, sup_lengths=sup)
        for n in range(1, levels + 1):
            eps = Fraction(1, n)
            if limit_len >= eps:
                # lengths stay >= 1/n arbitrarily deep: not Cauchy
                witness_j = None
                for j in range(horizon + 1, horizon + 34):
                    s, _ = tower.tail.cone_support(horizon, j)
                    lvl = m.ball_level(s) if s else None
                    if lvl is not None and Fraction(1, lvl) >= eps:
                        witness_j = (horizon, j, Fraction(1, lvl))
                        break
                cert.verdict = "not_cauchy"
                cert.violation = ((n,) + witness_j) if witness_j else (n, horizon, INF, limit_len)
                return cert
            found = None
            for M in range(1, horizon + 1):
                if all(sup[i] < eps for i in range(M, horizon + 1)):
                    found = M
                    break
            if found is None:
                cert.verdict = "inconclusive"
                cert.conclusive = False
                cert.note = "horizon %d too small to certify level %d" % (horizon, n)
                return cert
            cert.thresholds[n] = found
        return cert
    # prefix-only: measure within the horizon, never certify beyond it
    h = tower.available_horizon(horizon)
    measured: dict[tuple[int, int], Fraction] = {}
    for i in range(1, h + 1):
        for j in range(i, h + 1):
            z = cone(tower.composite(i, j)).z
            measured[(i, j)] = object_length(z, m)
    cert = CauchyCertificate(metric=name, horizon=h, levels=levels,
                             verdict="inconclusive", conclusive=False,
                             note="prefix-only tower: behaviour beyond entry %d is unknown" % h)
    cert.sup_lengths = {i: max((measured[(i, j)] for j in range(i, h + 1)), default=Fraction(0))
                        for i in range(1, h + 1)}
    for n in range(1, levels + 1):
        eps = Fraction(1, n)
        for M in range(1, h + 1):
            if all(measured[(i, j)] < eps for i in range(M, h + 1) for j in range(i, h + 1)):
                cert.thresholds[n] = M
                break
    return cert


# -- colimits --------------------------------------------------------------------


@dataclass
class ColimitTable:
    ring: Ring
    window: tuple[int, int]
    horizon: int
    entries: dict[int, tuple[RModule, int]] = field(default_factory=dict)  # i -> (H, k_i)
    inconclusive: list[int] = field(default_factory=list)
    outside_window_vanishes: bool = False

    @property
    def conclusive(self) -> bool:
        return not self.inconclusive and self.outside_window_vanishes

    def module_at(self, i: int) -> RModule | None:
        entry = self.entries.get(i)
        return entry[0] if entry else None

    def support(self) -> list[int]:
        return sorted(i for i, (mod, _) in self.entries.items() if not mod.is_zero())


def colimit(tower: Tower, window: tuple[int, int], horizon: int,
            certificate: CauchyCertificate) -> ColimitTable:
    """Degreewise stabilized cohomology of the tower over the window.

    Stabilization is witnessed: every connecting map on H^i from the
    stabilization index to the horizon is checked to be an isomorphism.
    For the built-in tails the index is structural; for prefix towers the
    scan is honest and degrees that fail to stabilize are reported
    inconclusive.
    """
    if certificate.verdict == "not_cauchy":
        raise PreconditionError("tower is not Cauchy for %s: no colimit in the completion"
                                % certificate.metric)
    lo, hi = window
    if lo > hi:
        raise PreconditionError("empty window")
    h = tower.available_horizon(horizon)
    table = ColimitTable(ring=tower.ring, window=window, horizon=h)
    if isinstance(tower.tail, TruncationTail):
        table.outside_window_vanishes = lo <= 0 <= hi
    elif isinstance(tower.tail, ConstantTail):
        x = tower.tail.complex
        table.outside_window_vanishes = x.is_zero() or (lo <= x.min_degree and x.max_degree <= hi)
    for i in range(lo, hi + 1):
        if isinstance(tower.tail, TruncationTail):
            k_start = max(1, abs(i) + 1) if i <= 0 else 1
        else:
            k_start = 1
        k_i = None
        if k_start <= h - 1:
            datas = {k: cohomology_data(tower.complex_at(k), i) for k in range(k_start, h + 1)}
            for k0 in range(k_start, h):
                if all(cohomology_map(tower.map_at(k), i, datas[k], datas[k + 1]).is_isomorphism()
                       for k in range(k0, h)):
                    k_i = k0
                    break
        if k_i is None:
            table.inconclusive.append(i)
        else:
            table.entries[i] = (datas[k_i].module, k_i)
    return table
