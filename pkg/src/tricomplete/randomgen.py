"""Seeded random objects for the fuzz harnesses and property tests.

Everything is driven by an explicit random.Random instance: same seed,
same objects, byte-stable reports.  Differentials are sampled from the
exact solution space of d^2 = 0, one degree at a time, so every generated
complex is valid by construction rather than by rejection.
"""

from __future__ import annotations

import random

import numpy as np

from .linalg import Matrix, kernel_basis
from .rmodule import RModule, RModuleMap, Ring, hom_basis, zero_map
from .complexes import ChainMap, Complex, chain_map_space, zero_complex


class Sampler:
    def __init__(self, ring: Ring, rng: random.Random):
        self.ring = ring
        self.rng = rng

    def module(self, max_blocks: int = 2, allow_zero: bool = True) -> RModule:
        lo = 0 if allow_zero else 1
        k = self.rng.randint(lo, max_blocks)
        return RModule(self.ring, tuple(self.rng.randint(1, self.ring.n) for _ in range(k)))

    def _random_combination(self, basis: list[RModuleMap], source: RModule, target: RModule) -> RModuleMap:
        acc = zero_map(source, target)
        for b in basis:
            c = self.rng.randrange(self.ring.p)
            if c:
                acc = acc + RModuleMap(b.source, b.target, b.matrix.scale(c))
        return acc

    def complex(self, lo: int, hi: int, max_blocks: int = 2,
                degrees: list[int] | None = None) -> Complex:
        """Random bounded complex with components in the given degree window.

        degrees, when given, restricts which degrees may carry a nonzero
        component (used to sample inside metric balls).
        """
        allowed = sorted(degrees) if degrees is not None else list(range(lo, hi + 1))
        comps = {}
        for i in allowed:
            m = self.module(max_blocks=max_blocks)
            if not m.is_zero():
                comps[i] = m
        if not comps:
            return zero_complex(self.ring)
        x = Complex(self.ring, comps, {})
        diffs: dict[int, RModuleMap] = {}
        for i in sorted(comps):
            src = x.component(i)
            tgt = x.component(i + 1)
            if src.is_zero() or tgt.is_zero():
                continue
            basis = hom_basis(src, tgt)
            prev = diffs.get(i - 1)
            if prev is not None and not prev.is_zero():
                cols = np.column_stack([(b.matrix @ prev.matrix).a.ravel() for b in basis])
                null = kernel_basis(Matrix(cols, self.ring.p))
                usable = []
                for j in range(null.cols):
                    acc = zero_map(src, tgt)
                    for b_i, b in enumerate(basis):
                        c = int(null.a[b_i, j])
                        if c:
                            acc = acc + RModuleMap(b.source, b.target, b.matrix.scale(c))
                    usable.append(acc)
                basis = usable
            d = self._random_combination(basis, src, tgt) if basis else zero_map(src, tgt)
            if not d.is_zero():
                diffs[i] = d
        return Complex(self.ring, comps, diffs)

    def chain_map(self, x: Complex, y: Complex) -> ChainMap:
        basis = chain_map_space(x, y)
        acc = ChainMap(x, y, {})
        for b in basis:
            c = self.rng.randrange(self.ring.p)
            if c:
                scaled = ChainMap(x, y, {i: RModuleMap(g.source, g.target, g.matrix.scale(c))
                                         for i, g in b._components.items()})
                acc = acc + scaled
        return acc

    def composable_pair(self, lo: int = -2, hi: int = 2,
                        max_blocks: int = 2) -> tuple[ChainMap, ChainMap]:
        """f : X -> Y and g : Y -> Z sharing the middle complex."""
        x = self.complex(lo, hi, max_blocks)
        y = self.complex(lo, hi, max_blocks)
        z = self.complex(lo, hi, max_blocks)
        return self.chain_map(x, y), self.chain_map(y, z)

    def corner(self, lo: int = -2, hi: int = 2,
               max_blocks: int = 2) -> tuple[ChainMap, ChainMap]:
        """f : A -> B and h : A -> C sharing the source."""
        a = self.complex(lo, hi, max_blocks)
        b = self.complex(lo, hi, max_blocks)
        c = self.complex(lo, hi, max_blocks)
        return self.chain_map(a, b), self.chain_map(a, c)
