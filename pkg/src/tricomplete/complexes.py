"""Bounded cochain complexes over mod R and the triangulated operations.

Complexes are stored sparsely: only nonzero components and nonzero
differentials.  Morphisms of the derived category are realized as strict
chain maps out of a projective resolution; the resolution machinery at the
bottom of this file (build, minimize, cut) is the engine behind perfection
tests, syzygy classes and derived Hom.

Sign conventions, fixed once:
  * shift:   (T^t X)^i = X^(i+t), differential scaled by (-1)^t;
  * cone(f): cone^i = X^(i+1) (+) Y^i with differential
             [[-d_X, 0], [f, d_Y]], g : Y -> cone the inclusion and
             h : cone -> TX the projection.
All tests are relative to these conventions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Matrix, kernel_basis, rank, solve
from .rmodule import (
    RModule,
    RModuleMap,
    Ring,
    direct_sum,
    free_module,
    hom_basis,
    identity_map,
    poly_inv,
    poly_mul,
    poly_mult_matrix,
    projective_cover_and_syzygy,
    quotient_canonicalize,
    subspace_canonicalize,
    zero_map,
    zero_module,
)


class ValidationError(ValueError):
    """A structural invariant of a complex or chain map is violated."""


class PreconditionError(ValueError):
    """An operation was called outside its contract."""


class Complex:
    """Bounded cochain complex of RModules with R-linear differentials."""

    def __init__(self, ring: Ring, components: dict[int, RModule], diffs: dict[int, RModuleMap]):
        self.ring = ring
        self._components = {i: m for i, m in components.items() if not m.is_zero()}
        for i, m in self._components.items():
            if m.ring != ring:
                raise ValidationError("component at degree %d lives over %s, not %s" % (i, m.ring, ring))
        self._diffs = {}
        for i, f in diffs.items():
            if f.source != self.component(i) or f.target != self.component(i + 1):
                raise ValidationError("differential at degree %d does not match components" % i)
            if not f.is_zero():
                self._diffs[i] = f
        for i in self._diffs:
            nxt = self._diffs.get(i + 1)
            if nxt is not None and not (nxt @ self._diffs[i]).is_zero():
                raise ValidationError("d^2 != 0 between degrees %d and %d" % (i, i + 2))
        self._coh_cache: dict[int, "CohomologyData"] = {}

    # -- access ---------------------------------------------------------

    def component(self, i: int) -> RModule:
        return self._components.get(i, zero_module(self.ring))

    def differential(self, i: int) -> RModuleMap:
        f = self._diffs.get(i)
        if f is not None:
            return f
        return zero_map(self.component(i), self.component(i + 1))

    @property
    def degrees(self) -> list[int]:
        return sorted(self._components)

    def is_zero(self) -> bool:
        return not self._components

    @property
    def min_degree(self) -> int | None:
        return min(self._components) if self._components else None

    @property
    def max_degree(self) -> int | None:
        return max(self._components) if self._components else None

    @property
    def amplitude(self) -> int:
        if self.is_zero():
            return 0
        return self.max_degree - self.min_degree

    def total_dim(self) -> int:
        return sum(m.dim for m in self._components.values())

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        return (self.ring == other.ring and self._components == other._components
                and self._diffs == other._diffs)

    def __repr__(self):
        if self.is_zero():
            return "Complex(0)"
        parts = ["%d:%s" % (i, self.component(i)) for i in self.degrees]
        return "Complex(%s)" % ", ".join(parts)


def zero_complex(ring: Ring) -> Complex:
    return Complex(ring, {}, {})


def module_complex(m: RModule, degree: int = 0) -> Complex:
    """A module viewed as a complex concentrated in one degree."""
    return Complex(m.ring, {degree: m}, {})


def shift(x: Complex, t: int) -> Complex:
    """(T^t X)^i = X^(i+t); the differential picks up the sign (-1)^t."""
    if t == 0:
        return x
    sgn = 1 if t % 2 == 0 else -1
    comps = {i - t: m for i, m in x._components.items()}
    diffs = {}
    for i, f in x._diffs.items():
        diffs[i - t] = RModuleMap(f.source, f.target, f.matrix.scale(sgn))
    return Complex(x.ring, comps, diffs)


class ChainMap:
    """Degreewise R-linear map commuting with the differentials."""

    def __init__(self, source: Complex, target: Complex, components: dict[int, RModuleMap]):
        if source.ring != target.ring:
            raise ValidationError("chain map between different rings")
        self.source = source
        self.target = target
        self._components = {}
        for i, f in components.items():
            if f.source != source.component(i) or f.target != target.component(i):
                raise ValidationError("chain map component at degree %d has wrong (co)domain" % i)
            if not f.is_zero():
                self._components[i] = f
        lo = [d for d in source.degrees]
        for i in set(lo) | set(self._components):
            lhs = self.component(i + 1) @ source.differential(i)
            rhs = target.differential(i) @ self.component(i)
            if lhs.matrix != rhs.matrix:
                raise ValidationError("square at degrees (%d, %d) does not commute" % (i, i + 1))

    def component(self, i: int) -> RModuleMap:
        f = self._components.get(i)
        if f is not None:
            return f
        return zero_map(self.source.component(i), self.target.component(i))

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise PreconditionError("chain maps not composable")
        degs = set(other._components) | set(self._components)
        comps = {i: self.component(i) @ other.component(i) for i in degs}
        return ChainMap(other.source, self.target, comps)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        degs = set(other._components) | set(self._components)
        comps = {i: self.component(i) + other.component(i) for i in degs}
        return ChainMap(self.source, self.target, comps)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {i: -f for i, f in self._components.items()})

    def is_zero(self) -> bool:
        return not self._components

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source, self.target, self._components) == (other.source, other.target, other._components)


def identity_chain_map(x: Complex) -> ChainMap:
    return ChainMap(x, x, {i: identity_map(x.component(i)) for i in x.degrees})


def zero_chain_map(x: Complex, y: Complex) -> ChainMap:
    return ChainMap(x, y, {})


def shift_chain_map(f: ChainMap, t: int) -> ChainMap:
    return ChainMap(shift(f.source, t), shift(f.target, t),
                    {i - t: g for i, g in f._components.items()})


# -- direct sums, cones, triangles ------------------------------------------


def direct_sum_complex(parts: list[Complex], ring: Ring) -> tuple[Complex, list[ChainMap], list[ChainMap]]:
    """Degreewise direct sum with injection and projection chain maps."""
    degs = sorted({i for x in parts for i in x.degrees})
    comps, injs, projs = {}, {}, {}
    for i in degs:
        total, inj, proj = direct_sum([x.component(i) for x in parts], ring)
        comps[i] = total
        injs[i] = inj
        projs[i] = proj
    diffs = {}
    for i in degs:
        if i + 1 not in comps:
            continue
        d = zero_map(comps[i], comps[i + 1])
        for k, x in enumerate(parts):
            d = d + (injs[i + 1][k] @ x.differential(i) @ projs[i][k])
        diffs[i] = d
    total_complex = Complex(ring, comps, diffs)
    inj_maps = [ChainMap(x, total_complex, {i: injs[i][k] for i in degs if i in x._components})
                for k, x in enumerate(parts)]
    proj_maps = [ChainMap(total_complex, x, {i: projs[i][k] for i in degs if i in x._components})
                 for k, x in enumerate(parts)]
    return total_complex, inj_maps, proj_maps


@dataclass
class Triangle:
    """X --f--> Y --g--> Z --h--> TX with Z the cone of f."""

    x: Complex
    y: Complex
    z: Complex
    f: ChainMap
    g: ChainMap
    h: ChainMap


def cone(f: ChainMap) -> Triangle:
    """Mapping cone with the standard triangle maps."""
    x, y = f.source, f.target
    ring = x.ring
    degs = sorted({i for i in y.degrees} | {i - 1 for i in x.degrees})
    comps, injX, injY, prjX, prjY = {}, {}, {}, {}, {}
    for i in degs:
        total, inj, proj = direct_sum([x.component(i + 1), y.component(i)], ring)
        comps[i] = total
        injX[i], injY[i] = inj
        prjX[i], prjY[i] = proj
    diffs = {}
    for i in degs:
        if i + 1 not in comps:
            continue
        d = injX[i + 1] @ (-x.differential(i + 1)) @ prjX[i]
        d = d + (injY[i + 1] @ f.component(i + 1) @ prjX[i])
        d = d + (injY[i + 1] @ y.differential(i) @ prjY[i])
        diffs[i] = d
    z = Complex(ring, comps, diffs)
    g = ChainMap(y, z, {i: injY[i] for i in degs if i in y._components})
    tx = shift(x, 1)
    h = ChainMap(z, tx, {i: prjX[i] for i in degs if i + 1 in x._components})
    return Triangle(x, y, z, f, g, h)


# -- cohomology --------------------------------------------------------------


@dataclass
class CohomologyData:
    """H^i with enough structure to induce maps on classes.

    cycles: basis of ker d^i in component coordinates.
    to_classes: cycle coordinates -> canonical coordinates of the module.
    lift: canonical coordinates -> component coordinates (representatives).
    """

    module: RModule
    cycles: Matrix
    to_classes: Matrix
    lift: Matrix


def cohomology_data(x: Complex, i: int) -> CohomologyData:
    cached = x._coh_cache.get(i)
    if cached is not None:
        return cached
    ring = x.ring
    comp = x.component(i)
    cyc = kernel_basis(x.differential(i).matrix)
    if cyc.cols == 0:
        z = zero_module(ring)
        e = Matrix.zeros(comp.dim, 0, ring.p)
        data = CohomologyData(z, cyc, Matrix.zeros(0, 0, ring.p), e)
    else:
        action = solve(cyc, comp.x_action() @ cyc)
        assert action is not None  # kernels of R-maps are x-stable
        boundaries = solve(cyc, x.differential(i - 1).matrix)
        assert boundaries is not None  # d^2 = 0 puts boundaries inside cycles
        mod, proj, section = quotient_canonicalize(action, boundaries, ring)
        data = CohomologyData(mod, cyc, proj, cyc @ section)
    x._coh_cache[i] = data
    return data


def cohomology(x: Complex, i: int) -> RModule:
    """ker(d^i)/im(d^(i-1)) as a canonical-form RModule."""
    return cohomology_data(x, i).module


def cohomology_support(x: Complex) -> frozenset[int]:
    return frozenset(i for i in x.degrees if not cohomology(x, i).is_zero())


def is_acyclic(x: Complex) -> bool:
    return not cohomology_support(x)


def cohomology_map(f: ChainMap, i: int, src_data: CohomologyData | None = None,
                   tgt_data: CohomologyData | None = None) -> RModuleMap:
    """The induced map H^i(f)."""
    a = src_data or cohomology_data(f.source, i)
    b = tgt_data or cohomology_data(f.target, i)
    if a.module.is_zero() or b.module.is_zero():
        return zero_map(a.module, b.module)
    image = f.component(i).matrix @ a.lift
    coords = solve(b.cycles, image)
    assert coords is not None  # chain maps send cycles to cycles
    return RModuleMap(a.module, b.module, b.to_classes @ coords)


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(cone(f).z)


# -- homotopies ---------------------------------------------------------------


def is_null_homotopic(f: ChainMap) -> tuple[bool, dict[int, RModuleMap] | None]:
    """Solve f = d s + s d for a degree -1 family s of R-module maps.

    Returns (True, witness) with witness[i] : X^i -> Y^(i-1), or (False, None).
    """
    x, y = f.source, f.target
    ring = x.ring
    degs = sorted(set(x.degrees) | set(y.degrees))
    if not degs:
        return True, {}
    # unknowns: hom bases of Hom(X^i, Y^(i-1)) for all i
    bases: dict[int, list[RModuleMap]] = {}
    offsets: dict[int, int] = {}
    total = 0
    for i in range(degs[0], degs[-1] + 2):
        bs = hom_basis(x.component(i), y.component(i - 1))
        if bs:
            bases[i] = bs
            offsets[i] = total
            total += len(bs)
    # equations: one block per degree i, entries of maps X^i -> Y^i
    row_offsets: dict[int, int] = {}
    rows = 0
    for i in degs:
        row_offsets[i] = rows
        rows += y.component(i).dim * x.component(i).dim
    system = np.zeros((rows, total), dtype=np.int64)
    rhs = np.zeros((rows, 1), dtype=np.int64)
    for i in degs:
        r0 = row_offsets[i]
        block = f.component(i).matrix.a.ravel()
        rhs[r0:r0 + block.size, 0] = block
        for b_i, bmap in enumerate(bases.get(i, [])):
            col = (y.differential(i - 1).matrix @ bmap.matrix).a.ravel()
            system[r0:r0 + col.size, offsets[i] + b_i] = col
        for b_i, bmap in enumerate(bases.get(i + 1, [])):
            col = (bmap.matrix @ x.differential(i).matrix).a.ravel()
            system[r0:r0 + col.size, offsets[i + 1] + b_i] = col
    sol = solve(Matrix(system, ring.p), Matrix(rhs, ring.p))
    if sol is None:
        return False, None
    witness: dict[int, RModuleMap] = {}
    for i, bs in bases.items():
        acc = zero_map(x.component(i), y.component(i - 1))
        for b_i, bmap in enumerate(bs):
            c = int(sol.a[offsets[i] + b_i, 0])
            if c:
                acc = acc + RModuleMap(bmap.source, bmap.target, bmap.matrix.scale(c))
        if not acc.is_zero():
            witness[i] = acc
    return True, witness


def chain_map_space(x: Complex, y: Complex) -> list[ChainMap]:
    """F_p basis of the space of chain maps X -> Y."""
    ring = x.ring
    degs = sorted(set(x.degrees) | set(y.degrees))
    if not degs:
        return []
    bases: dict[int, list[RModuleMap]] = {}
    offsets: dict[int, int] = {}
    total = 0
    for i in degs:
        bs = hom_basis(x.component(i), y.component(i))
        if bs:
            bases[i] = bs
            offsets[i] = total
            total += len(bs)
    if total == 0:
        return []
    rows = 0
    row_offsets = {}
    for i in degs:
        row_offsets[i] = rows
        rows += y.component(i + 1).dim * x.component(i).dim
    system = np.zeros((rows, total), dtype=np.int64)
    for i in degs:
        r0 = row_offsets[i]
        for b_i, bmap in enumerate(bases.get(i, [])):
            col = (y.differential(i).matrix @ bmap.matrix).a.ravel()
            system[r0:r0 + col.size, offsets[i] + b_i] += col
        for b_i, bmap in enumerate(bases.get(i + 1, [])):
            col = (bmap.matrix @ x.differential(i).matrix).a.ravel()
            system[r0:r0 + col.size, offsets[i + 1] + b_i] -= col
    null = kernel_basis(Matrix(system % ring.p, ring.p))
    out = []
    for j in range(null.cols):
        comps = {}
        for i, bs in bases.items():
            acc = zero_map(x.component(i), y.component(i))
            for b_i, bmap in enumerate(bs):
                c = int(null.a[offsets[i] + b_i, j])
                if c:
                    acc = acc + RModuleMap(bmap.source, bmap.target, bmap.matrix.scale(c))
            comps[i] = acc
        out.append(ChainMap(x, y, comps))
    return out


# -- duality ------------------------------------------------------------------


def _reversal(m: RModule) -> Matrix:
    """Blockwise antidiagonal; conjugates the transposed x-action back to
    canonical form.  Self-inverse."""
    d = m.dim
    arr = np.zeros((d, d), dtype=np.int64)
    at = 0
    for j in m.blocks:
        for t in range(j):
            arr[at + j - 1 - t, at + t] = 1
        at += j
    return Matrix(arr, m.ring.p)


def dual_map(f: RModuleMap) -> RModuleMap:
    """F_p-linear dual in canonical bases: target' -> source'."""
    ra, rb = _reversal(f.source), _reversal(f.target)
    return RModuleMap(f.target, f.source, ra @ f.matrix.T @ rb)


def dualize(x: Complex) -> Complex:
    """Degreewise k-linear dual with negated degrees.

    H^i(dualize X) is the dual of H^(-i)(X); dualize is an involution up
    to equality of representations.
    """
    comps = {-i: m for i, m in x._components.items()}
    diffs = {}
    for i, f in x._diffs.items():
        # d' at degree -(i+1): dual of d^i : X^i -> X^(i+1)
        diffs[-(i + 1)] = dual_map(f)
    return Complex(x.ring, comps, diffs)


def dualize_chain_map(f: ChainMap) -> ChainMap:
    comps = {-i: dual_map(g) for i, g in f._components.items()}
    return ChainMap(dualize(f.target), dualize(f.source), comps)


# -- projective resolutions ---------------------------------------------------


@dataclass
class Resolution:
    """Free complex quasi-isomorphic to the target above the cut degree.

    comparison : complex -> target induces isomorphisms on H^i for i > depth.
    syzygy is ker(d^depth) with free summands stripped; for cuts below the
    lowest degree of the target it is the obstruction to perfection.
    """

    target: Complex
    depth: int
    complex: Complex
    comparison: ChainMap
    syzygy: RModule


def _build_free_approximation(x: Complex, depth: int):
    """Top-down construction of a degreewise-surjective quasi-isomorphism
    from a complex of frees, built one projective cover of a pullback at a
    time.  Not yet minimal."""
    ring = x.ring
    p = ring.p
    top = x.max_degree
    modules: dict[int, RModule] = {}
    dmaps: dict[int, RModuleMap] = {}
    eps: dict[int, RModuleMap] = {}
    for i in range(top, depth - 1, -1):
        above = modules.get(i + 1, zero_module(ring))
        d_above = dmaps.get(i + 1, zero_map(above, modules.get(i + 2, zero_module(ring))))
        eps_above = eps.get(i + 1, zero_map(above, x.component(i + 1)))
        comp = x.component(i)
        # W = { (u, v) in ker(d_above) x X^i : eps(u) = d(v) }
        K = kernel_basis(d_above.matrix)
        sysmat = (eps_above.matrix @ K).hstack(-x.differential(i).matrix)
        null = kernel_basis(sysmat)
        u_part = K @ Matrix(null.a[:K.cols, :], p)
        v_part = Matrix(null.a[K.cols:, :], p)
        basis = u_part.vstack(v_part)
        da, dc = above.dim, comp.dim
        act = np.zeros((da + dc, da + dc), dtype=np.int64)
        act[:da, :da] = above.x_action().a
        act[da:, da:] = comp.x_action().a
        w_mod, emb = subspace_canonicalize(Matrix(act, p), basis, ring)
        F, cov, _, _ = projective_cover_and_syzygy(w_mod)
        reach = emb @ cov.matrix
        modules[i] = F
        dmaps[i] = RModuleMap(F, above, Matrix(reach.a[:above.dim, :], p))
        eps[i] = RModuleMap(F, comp, Matrix(reach.a[above.dim:, :], p))
        if F.is_zero() and (x.min_degree is None or i <= x.min_degree):
            break
    return modules, dmaps, eps


def _rmatrix_from_free_map(f: RModuleMap, ring: Ring) -> np.ndarray:
    """R-matrix of a map between free modules: shape (bt, bs, n)."""
    bs = len(f.source.blocks)
    bt = len(f.target.blocks)
    out = np.zeros((bt, bs, ring.n), dtype=np.int64)
    for j in range(bs):
        for i in range(bt):
            out[i, j, :] = f.matrix.a[i * ring.n:(i + 1) * ring.n, j * ring.n]
    return out


def _free_map_from_rmatrix(r: np.ndarray, ring: Ring) -> RModuleMap:
    bt, bs, n = r.shape
    src = free_module(ring, bs)
    tgt = free_module(ring, bt)
    fp = np.zeros((bt * n, bs * n), dtype=np.int64)
    for j in range(bs):
        for i in range(bt):
            coeffs = r[i, j]
            for s in range(n):
                # the image of x^s gen_j has entry x^s * r_ij in block i
                fp[i * n + s:(i + 1) * n, j * n + s] = coeffs[: n - s]
    return RModuleMap(src, tgt, Matrix(fp, ring.p))


def _minimize_free_complex(ranks: dict[int, int], rmats: dict[int, np.ndarray],
                           eps: dict[int, Matrix], ring: Ring):
    """Split off contractible R -> R summands at unit entries of the
    differentials, adjusting neighbours and the comparison map."""
    n, p = ring.n, ring.p

    def delete_generator(level: int, idx: int):
        ranks[level] -= 1
        if level in rmats:
            rmats[level] = np.delete(rmats[level], idx, axis=1)
        if level - 1 in rmats:
            rmats[level - 1] = np.delete(rmats[level - 1], idx, axis=0)
        if level in eps:
            cols = list(range(eps[level].cols))
            keep = [c for c in cols if not (idx * n <= c < (idx + 1) * n)]
            eps[level] = eps[level].take_columns(keep)

    changed = True
    while changed:
        changed = False
        for i in sorted(rmats):
            D = rmats[i]
            units = np.argwhere(D[:, :, 0] % p != 0)
            if units.size == 0:
                continue
            r, c = (int(units[0][0]), int(units[0][1]))
            uinv = poly_inv(D[r, c], ring)
            # clear row r by column operations (source base change at level i)
            for c2 in range(D.shape[1]):
                if c2 == c or not D[r, c2].any():
                    continue
                lam = poly_mul(D[r, c2], uinv, ring)
                for row in range(D.shape[0]):
                    D[row, c2] = (D[row, c2] - poly_mul(D[row, c], lam, ring)) % p
                if i - 1 in rmats:
                    prev = rmats[i - 1]
                    for col in range(prev.shape[1]):
                        prev[c, col] = (prev[c, col] + poly_mul(lam, prev[c2, col], ring)) % p
                if i in eps:
                    m = eps[i].a.copy()
                    mult = poly_mult_matrix(lam, ring).a
                    m[:, c2 * n:(c2 + 1) * n] = (m[:, c2 * n:(c2 + 1) * n]
                                                 - m[:, c * n:(c + 1) * n] @ mult) % p
                    eps[i] = Matrix(m, p)
            # clear column c by row operations (target base change at level i+1)
            for r2 in range(D.shape[0]):
                if r2 == r or not D[r2, c].any():
                    continue
                mu = poly_mul(D[r2, c], uinv, ring)
                for col in range(D.shape[1]):
                    D[r2, col] = (D[r2, col] - poly_mul(mu, D[r, col], ring)) % p
                if i + 1 in rmats:
                    nxt = rmats[i + 1]
                    for row in range(nxt.shape[0]):
                        nxt[row, r] = (nxt[row, r] + poly_mul(mu, nxt[row, r2], ring)) % p
                if i + 1 in eps:
                    m = eps[i + 1].a.copy()
                    mult = poly_mult_matrix(mu, ring).a
                    m[:, r * n:(r + 1) * n] = (m[:, r * n:(r + 1) * n]
                                               + m[:, r2 * n:(r2 + 1) * n] @ mult) % p
                    eps[i + 1] = Matrix(m, p)
            # the cleared row/column pair spans a contractible summand
            if i - 1 in rmats:
                assert not rmats[i - 1][c, :, :].any(), "nonzero incoming row at split"
            if i + 1 in rmats:
                assert not rmats[i + 1][:, r, :].any(), "nonzero outgoing column at split"
            delete_generator(i + 1, r)
            delete_generator(i, c)
            changed = True
            break
    return ranks, rmats, eps


def projective_resolution(x: Complex, depth: int) -> Resolution:
    """Minimal complex of frees in degrees >= depth, quasi-isomorphic to x
    above the cut, with the cut syzygy.

    The construction is one projective cover per degree, top down; splitting
    unit entries of the differentials afterwards makes the window minimal,
    so the syzygy at the cut is well-defined once free summands (artifacts
    of truncating a contractible straddling the cut) are stripped.
    """
    ring = x.ring
    if x.is_zero():
        return Resolution(x, depth, zero_complex(ring), zero_chain_map(zero_complex(ring), x),
                          zero_module(ring))
    if depth > x.min_degree:
        raise PreconditionError("resolution depth %d must be <= lowest degree %d"
                                % (depth, x.min_degree))
    modules, dmaps, eps = _build_free_approximation(x, depth)
    ranks = {i: len(m.blocks) for i, m in modules.items()}
    rmats = {i: _rmatrix_from_free_map(f, ring) for i, f in dmaps.items() if i + 1 in modules}
    eps_mats = {i: e.matrix for i, e in eps.items()}
    ranks, rmats, eps_mats = _minimize_free_complex(ranks, rmats, eps_mats, ring)
    comps = {i: free_module(ring, r) for i, r in ranks.items() if r}
    diffs = {}
    for i, rm in rmats.items():
        if rm.shape[0] and rm.shape[1]:
            diffs[i] = _free_map_from_rmatrix(rm, ring)
    free_part = Complex(ring, comps, diffs)
    comparison = ChainMap(free_part, x,
                          {i: RModuleMap(free_part.component(i), x.component(i), m)
                           for i, m in eps_mats.items()
                           if i in free_part._components and not m.is_zero()})
    # syzygy: kernel of the cut differential, free summands stripped
    cut_comp = free_part.component(depth)
    if cut_comp.is_zero():
        syz = zero_module(ring)
    else:
        K = kernel_basis(free_part.differential(depth).matrix)
        syz_mod, _ = subspace_canonicalize(cut_comp.x_action(), K, ring)
        syz = syz_mod.strip_free()
    return Resolution(x, depth, free_part, comparison, syz)


# -- derived Hom --------------------------------------------------------------


def derived_hom(a: Complex, b: Complex, d: int = 0) -> int:
    """dim over F_p of Hom in the derived category from a to T^d b.

    Computed as H^0 of the Hom complex out of a projective resolution of a,
    truncated two degrees below where any component could interact with b.
    """
    if a.is_zero() or b.is_zero():
        return 0
    depth = min(a.min_degree, b.min_degree - d - 2)
    res = projective_resolution(a, depth)
    pc = res.complex
    if pc.is_zero():
        return 0
    # layer t: maps P^i -> B^(i+d+t)
    bases: dict[tuple[int, int], list[RModuleMap]] = {}
    offs: dict[tuple[int, int], int] = {}
    sizes = {}
    for t in (-1, 0, 1):
        total = 0
        for i in pc.degrees:
            bs = hom_basis(pc.component(i), b.component(i + d + t))
            if bs:
                bases[(t, i)] = bs
                offs[(t, i)] = total
                total += len(bs)
        sizes[t] = total
    if sizes[0] == 0:
        return 0

    def delta_matrix(t: int) -> Matrix:
        # rows: entries of maps P^i -> B^(i+d+t+1); cols: layer-t basis
        row_offsets = {}
        rows = 0
        for i in pc.degrees:
            row_offsets[i] = rows
            rows += b.component(i + d + t + 1).dim * pc.component(i).dim
        system = np.zeros((rows, sizes[t]), dtype=np.int64)
        sgn = -1 if t % 2 == 0 else 1  # -(-1)^t
        for i in pc.degrees:
            r0 = row_offsets[i]
            for b_i, bmap in enumerate(bases.get((t, i), [])):
                col = (b.differential(i + d + t).matrix @ bmap.matrix).a.ravel()
                system[r0:r0 + col.size, offs[(t, i)] + b_i] += col
            for b_i, bmap in enumerate(bases.get((t, i + 1), [])):
                col = (bmap.matrix @ pc.differential(i).matrix).a.ravel()
                system[r0:r0 + col.size, offs[(t, i + 1)] + b_i] += sgn * col
        return Matrix(system % pc.ring.p, pc.ring.p)

    d0 = delta_matrix(0)
    dm1 = delta_matrix(-1)
    return (sizes[0] - rank(d0)) - rank(dm1)
