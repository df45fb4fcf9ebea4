"""The abelian category mod R for R = F_p[x]/(x^n).

Finitely generated R-modules are classified by Jordan type: a multiset of
block sizes 1 <= j <= n.  A module is stored as that multiset (sorted
descending); its canonical basis lists each block as e, xe, ..., x^(j-1)e,
so the x-action is the block-diagonal lower shift matrix.  Morphisms carry
an F_p matrix in canonical bases and must commute with the x-actions.

Everything downstream (complexes, cones, resolutions) reduces to the
operations here: kernels/images/cokernels re-canonicalized to Jordan type,
Hom bases, projective covers and syzygies, and Hom modulo projectives.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import Matrix, SpanTracker, inv_mod, is_prime, kernel_basis, rank, rref, solve


@dataclass(frozen=True)
class Ring:
    """R = F_p[x]/(x^n).  n = 1 is the field case (every module free)."""

    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("p = %d is not prime" % self.p)
        if self.n < 1:
            raise ValueError("nilpotency degree must be >= 1, got %d" % self.n)

    def __str__(self):
        return "F_%d[x]/(x^%d)" % (self.p, self.n)


# -- elements of R as coefficient vectors (used by resolution minimization) --

def poly_mul(a: np.ndarray, b: np.ndarray, ring: Ring) -> np.ndarray:
    """Product in R; inputs/outputs are length-n coefficient vectors."""
    out = np.zeros(ring.n, dtype=np.int64)
    for i in range(ring.n):
        if a[i]:
            hi = ring.n - i
            out[i:] = (out[i:] + a[i] * b[:hi]) % ring.p
    return out


def poly_inv(a: np.ndarray, ring: Ring) -> np.ndarray:
    """Inverse of a unit (nonzero constant term), by power-series recursion."""
    if a[0] % ring.p == 0:
        raise ZeroDivisionError("not a unit in %s" % ring)
    inv = np.zeros(ring.n, dtype=np.int64)
    inv[0] = inv_mod(int(a[0]), ring.p)
    for k in range(1, ring.n):
        acc = 0
        for i in range(1, k + 1):
            acc += int(a[i]) * int(inv[k - i])
        inv[k] = (-acc * int(inv[0])) % ring.p
    return inv


def poly_mult_matrix(a: np.ndarray, ring: Ring) -> Matrix:
    """n x n matrix of multiplication by a on R, basis 1, x, ..., x^(n-1)."""
    n = ring.n
    m = np.zeros((n, n), dtype=np.int64)
    for t in range(n):
        m[t:, t] = a[: n - t]
    return Matrix(m, ring.p)


@dataclass(frozen=True)
class RModule:
    """Module given by Jordan type; blocks kept sorted descending."""

    ring: Ring
    blocks: tuple[int, ...]

    def __post_init__(self):
        if any(not (1 <= j <= self.ring.n) for j in self.blocks):
            raise ValueError("block sizes must lie in 1..%d, got %s" % (self.ring.n, self.blocks))
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, reverse=True)))

    @property
    def dim(self) -> int:
        return sum(self.blocks)

    def is_zero(self) -> bool:
        return not self.blocks

    def is_free(self) -> bool:
        """Projective = free over local R: every block of full size n."""
        return all(j == self.ring.n for j in self.blocks)

    def strip_free(self) -> "RModule":
        return RModule(self.ring, tuple(j for j in self.blocks if j < self.ring.n))

    def x_action(self) -> Matrix:
        return _x_action(self.ring, self.blocks)

    def block_starts(self) -> list[int]:
        starts, at = [], 0
        for j in self.blocks:
            starts.append(at)
            at += j
        return starts

    def __str__(self):
        return "0" if not self.blocks else "+".join("[%d]" % j for j in self.blocks)


@lru_cache(maxsize=None)
def _x_action(ring: Ring, blocks: tuple[int, ...]) -> Matrix:
    d = sum(blocks)
    m = np.zeros((d, d), dtype=np.int64)
    at = 0
    for j in blocks:
        for t in range(j - 1):
            m[at + t + 1, at + t] = 1
        at += j
    return Matrix(m, ring.p)


def zero_module(ring: Ring) -> RModule:
    return RModule(ring, ())


def free_module(ring: Ring, rank_: int) -> RModule:
    return RModule(ring, (ring.n,) * rank_)


@dataclass(frozen=True)
class RModuleMap:
    """R-linear map in canonical bases; validated on construction."""

    source: RModule
    target: RModule
    matrix: Matrix

    def __post_init__(self):
        if self.source.ring != self.target.ring:
            raise ValueError("ring mismatch: %s vs %s" % (self.source.ring, self.target.ring))
        if (self.matrix.rows, self.matrix.cols) != (self.target.dim, self.source.dim):
            raise ValueError("matrix is %dx%d, expected %dx%d"
                             % (self.matrix.rows, self.matrix.cols, self.target.dim, self.source.dim))
        lhs = self.matrix @ self.source.x_action()
        rhs = self.target.x_action() @ self.matrix
        if lhs != rhs:
            raise ValueError("matrix does not commute with the x-actions (not R-linear)")

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def __matmul__(self, other: "RModuleMap") -> "RModuleMap":
        if other.target != self.source:
            raise ValueError("maps not composable")
        return RModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "RModuleMap") -> "RModuleMap":
        if (other.source, other.target) != (self.source, self.target):
            raise ValueError("maps not addable")
        return RModuleMap(self.source, self.target, self.matrix + other.matrix)

    def __neg__(self) -> "RModuleMap":
        return RModuleMap(self.source, self.target, -self.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_isomorphism(self) -> bool:
        return self.source.blocks == self.target.blocks and rank(self.matrix) == self.source.dim

    def __eq__(self, other):
        if not isinstance(other, RModuleMap):
            return NotImplemented
        return (self.source, self.target, self.matrix) == (other.source, other.target, other.matrix)


def zero_map(source: RModule, target: RModule) -> RModuleMap:
    return RModuleMap(source, target, Matrix.zeros(target.dim, source.dim, source.ring.p))


def identity_map(m: RModule) -> RModuleMap:
    return RModuleMap(m, m, Matrix.identity(m.dim, m.ring.p))


# -- Jordan canonicalization ----------------------------------------------


def jordan_type_from_ranks(a: Matrix, dim: int) -> tuple[int, ...]:
    """Jordan type of a nilpotent matrix from the rank profile of its powers.

    #blocks of size >= t equals rank(a^(t-1)) - rank(a^t).
    """
    ranks = [dim]
    power = Matrix.identity(dim, a.p)
    while ranks[-1] > 0:
        power = power @ a
        ranks.append(rank(power))
    blocks = []
    for t in range(1, len(ranks)):
        ge_t = ranks[t - 1] - ranks[t]
        gt_t = ranks[t] - ranks[t + 1] if t + 1 < len(ranks) else 0
        blocks.extend([t] * (ge_t - gt_t))
    return tuple(sorted(blocks, reverse=True))


def jordan_basis(a: Matrix) -> tuple[tuple[int, ...], Matrix]:
    """Jordan type and basis of a nilpotent matrix.

    Returns (blocks, J) with J invertible and a @ J = J @ X where X is the
    canonical lower-shift action for the returned type: column order is
    chain by chain, v, a v, a^2 v, ..., blocks sorted descending.

    Chain heads are chosen top height down: heads of height t complete
    ker(a^(t-1)) together with the pushed-down tails of taller chains to a
    basis of ker(a^t).
    """
    p, d = a.p, a.rows
    if d == 0:
        return (), Matrix.zeros(0, 0, p)
    kernels = [Matrix.zeros(d, 0, p)]
    power = Matrix.identity(d, p)
    while kernels[-1].cols < d:
        power = power @ a
        kernels.append(kernel_basis(power))
    s = len(kernels) - 1  # nilpotency index
    heads: list[tuple[np.ndarray, int]] = []
    for t in range(s, 0, -1):
        span = SpanTracker(d, p)
        span.add_columns(kernels[t - 1])
        for v, h in heads:
            w = v.copy()
            for _ in range(h - t):
                w = (a.a @ w) % p
            span.add(w)
        for j in range(kernels[t].cols):
            v = kernels[t].a[:, j]
            if span.add(v):
                heads.append((v.copy(), t))
    heads.sort(key=lambda vh: -vh[1])
    cols = []
    for v, h in heads:
        w = v.copy()
        for _ in range(h):
            cols.append(w.copy())
            w = (a.a @ w) % p
    blocks = tuple(h for _, h in heads)
    J = Matrix(np.column_stack(cols), p)
    return blocks, J


def subspace_canonicalize(action: Matrix, basis: Matrix, ring: Ring) -> tuple[RModule, Matrix]:
    """Canonicalize an action-stable subspace given by independent columns.

    action is the (nilpotent) x-action on the ambient coordinate space.
    Returns (M, E) with M canonical and E an embedding matrix in ambient
    coordinates satisfying action @ E = E @ M.x_action().
    """
    if basis.cols == 0:
        return zero_module(ring), Matrix.zeros(action.rows, 0, ring.p)
    induced = solve(basis, action @ basis)
    if induced is None:
        raise ValueError("subspace is not x-stable")
    blocks, J = jordan_basis(induced)
    return RModule(ring, blocks), basis @ J


def module_from_invariant_subspace(ambient: RModule, basis: Matrix) -> tuple[RModule, RModuleMap]:
    """Canonicalize an x-stable subspace (independent columns) of ambient.

    Returns (M, incl) with M in canonical form and incl : M -> ambient an
    injective R-map whose image is the given column span.
    """
    mod, emb = subspace_canonicalize(ambient.x_action(), basis, ambient.ring)
    return mod, RModuleMap(mod, ambient, emb)


def quotient_canonicalize(action: Matrix, sub_basis: Matrix, ring: Ring) -> tuple[RModule, Matrix, Matrix]:
    """Canonicalize the quotient of a coordinate space by a stable span.

    Returns (Q, proj, section): proj maps ambient coordinates onto the
    canonical coordinates of Q, section is a linear (not R-linear) right
    inverse picking representatives.  sub_basis columns may be dependent.
    """
    d = action.rows
    p = ring.p
    R_, rk, _ = rref(sub_basis.T)
    sub = Matrix(R_.a[:rk, :].T, p) if rk else Matrix.zeros(d, 0, p)
    if rk == d:
        return zero_module(ring), Matrix.zeros(0, d, p), Matrix.zeros(d, 0, p)
    # complete the subspace to a basis of the ambient space with standard vectors
    span = SpanTracker(d, p)
    span.add_columns(sub)
    comp_cols = []
    for i in range(d):
        e = np.zeros(d, dtype=np.int64)
        e[i] = 1
        if span.add(e):
            comp_cols.append(e)
    C = Matrix(np.column_stack(comp_cols), p)
    T = sub.hstack(C) if sub.cols else C
    Tinv = solve(T, Matrix.identity(d, p))
    assert Tinv is not None
    P = Tinv.take_rows(range(rk, d))  # ambient coords -> quotient coords
    induced = P @ action @ C
    blocks, J = jordan_basis(induced)
    Jinv = solve(J, Matrix.identity(J.rows, p))
    assert Jinv is not None
    return RModule(ring, blocks), Jinv @ P, C @ J


def module_from_quotient(ambient: RModule, sub_basis: Matrix) -> tuple[RModule, RModuleMap]:
    """Canonicalize the quotient of ambient by an x-stable column span.

    Returns (Q, proj) with proj : ambient -> Q the surjective R-map.
    """
    mod, proj, _ = quotient_canonicalize(ambient.x_action(), sub_basis, ambient.ring)
    return mod, RModuleMap(ambient, mod, proj)


def direct_sum(summands: list[RModule], ring: Ring) -> tuple[RModule, list[RModuleMap], list[RModuleMap]]:
    """Direct sum in canonical form, with injections and projections.

    Blocks of the sum are re-sorted, so the structural maps are the
    block-permutation matrices realizing the canonical ordering.
    """
    p = ring.p
    tagged = []  # (size, summand index, start within summand)
    for si, m in enumerate(summands):
        for size, start in zip(m.blocks, m.block_starts()):
            tagged.append((size, si, start))
    order = sorted(range(len(tagged)), key=lambda i: (-tagged[i][0], tagged[i][1]))
    total = RModule(ring, tuple(tagged[i][0] for i in order))
    inj_arrays = [np.zeros((total.dim, m.dim), dtype=np.int64) for m in summands]
    at = 0
    for i in order:
        size, si, start = tagged[i]
        for t in range(size):
            inj_arrays[si][at + t, start + t] = 1
        at += size
    injections = [RModuleMap(m, total, Matrix(arr, p)) for m, arr in zip(summands, inj_arrays)]
    projections = [RModuleMap(total, m, Matrix(arr.T, p)) for m, arr in zip(summands, inj_arrays)]
    return total, injections, projections


# -- Hom groups -------------------------------------------------------------


def hom_basis(m: RModule, nn: RModule) -> list[RModuleMap]:
    """F_p basis of Hom_R(m, nn).

    Free source: a map is freely determined by the generator images, so the
    basis is (generator, target basis vector) pairs.  Otherwise solve the
    commutation system X_nn F = F X_m via Kronecker products.
    """
    if m.ring != nn.ring:
        raise ValueError("ring mismatch")
    ring = m.ring
    p = ring.p
    dm, dn = m.dim, nn.dim
    if dm == 0 or dn == 0:
        return []
    if m.is_free():
        xn = nn.x_action()
        out = []
        for gstart in m.block_starts():
            powers = [Matrix.identity(dn, p)]
            for _ in range(ring.n - 1):
                powers.append(xn @ powers[-1])
            for v in range(dn):
                f = np.zeros((dn, dm), dtype=np.int64)
                for t in range(ring.n):
                    f[:, gstart + t] = powers[t].a[:, v]
                out.append(RModuleMap(m, nn, Matrix(f, p)))
        return out
    xm, xn = m.x_action(), nn.x_action()
    # row-major vec: vec(A F) = (A (x) I) vec(F), vec(F B) = (I (x) B^T) vec(F)
    system = np.kron(xn.a, np.eye(dm, dtype=np.int64)) - np.kron(np.eye(dn, dtype=np.int64), xm.a.T)
    null = kernel_basis(Matrix(system, p))
    return [RModuleMap(m, nn, Matrix(null.a[:, j].reshape(dn, dm), p)) for j in range(null.cols)]


def hom_dim_closed_form(m: RModule, nn: RModule) -> int:
    """dim Hom(m, nn) = sum over block pairs of min(j_i, j_l)."""
    return sum(min(a, b) for a in m.blocks for b in nn.blocks)


# -- kernels, images, cokernels --------------------------------------------


def subquotient(f: RModuleMap, which: str) -> tuple[RModule, RModuleMap]:
    """Kernel, image or cokernel of a map, re-canonicalized to Jordan type.

    kernel:   (K, inclusion K -> source)
    image:    (I, inclusion I -> target)
    cokernel: (C, projection target -> C)
    """
    if which == "kernel":
        return module_from_invariant_subspace(f.source, kernel_basis(f.matrix))
    if which == "image":
        R_, rk, piv = rref(f.matrix.T)
        img = Matrix(R_.a[:rk, :].T, f.matrix.p)
        return module_from_invariant_subspace(f.target, img)
    if which == "cokernel":
        return module_from_quotient(f.target, f.matrix)
    raise ValueError("which must be kernel|image|cokernel, got %r" % which)


def projective_cover_and_syzygy(m: RModule) -> tuple[RModule, RModuleMap, RModule, RModuleMap]:
    """Projective cover F -> m and its kernel.

    Returns (F, cover, syzygy, incl) with F = R^(#blocks), cover the
    canonical surjection (generator i onto the i-th block generator) and
    incl : syzygy -> F the kernel inclusion.  The syzygy of block j is
    block n - j, so it never contains a free summand.
    """
    ring = m.ring
    p = ring.p
    F = free_module(ring, len(m.blocks))
    cov = np.zeros((m.dim, F.dim), dtype=np.int64)
    xm_pow = [Matrix.identity(m.dim, p)]
    for _ in range(ring.n - 1):
        xm_pow.append(m.x_action() @ xm_pow[-1])
    for i, start in enumerate(m.block_starts()):
        e = np.zeros(m.dim, dtype=np.int64)
        e[start] = 1
        for t in range(ring.n):
            cov[:, i * ring.n + t] = (xm_pow[t].a @ e) % p
    cover = RModuleMap(F, m, Matrix(cov, p))
    syz, incl = subquotient(cover, "kernel")
    return F, cover, syz, incl


def syzygy_type(m: RModule) -> tuple[int, ...]:
    """Closed form: Omega(block j) = block (n - j), free blocks die."""
    n = m.ring.n
    return tuple(sorted((n - j for j in m.blocks if j < n), reverse=True))


def stable_hom(m: RModule, nn: RModule) -> tuple[int, list[RModuleMap]]:
    """Hom(m, nn) modulo maps factoring through a projective.

    A map factors through a projective iff it factors through the
    projective cover P(nn) ->> nn, so the factoring subspace is
    {cover o g : g in Hom(m, P(nn))}.  Returns (dimension, coset reps).
    """
    if m.ring != nn.ring:
        raise ValueError("ring mismatch")
    basis = hom_basis(m, nn)
    if not basis:
        return 0, []
    P, cover, _, _ = projective_cover_and_syzygy(nn)
    span = SpanTracker(nn.dim * m.dim, m.ring.p)
    for g in hom_basis(m, P):
        span.add((cover.matrix @ g.matrix).a.ravel())
    reps = []
    for f in basis:
        if span.add(f.matrix.a.ravel()):
            reps.append(f)
    return len(reps), reps
