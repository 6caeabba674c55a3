"""Seeded random Jordan specifications and rational points for sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from .exact import RatMatrix
from .jordan import (KIND_ORDER, BlockSpec, JordanSpec, complex_quad, complex_single, imaginary,
                     real_pair, real_single, zero)


def _sizes(rng: random.Random, budget: int, cell: int, lo: int = 1) -> list[int]:
    out = []
    n = rng.randint(lo, 3)
    for _ in range(n):
        cap = budget // cell - sum(out)
        if cap < 1:
            break
        out.append(rng.randint(1, min(cap, 4)))
    return out


def random_group(rng: random.Random, kind: str, budget: int, used: set) -> BlockSpec | None:
    """One group of ``kind`` fitting in ``budget`` dimensions, or None."""
    for _ in range(20):
        num = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        if kind == "zero":
            key = ("zero",)
        elif kind in ("real_pair", "real_single"):
            key = ("real", num)
        else:
            key = ("cplx", num if kind != "imaginary" else 0, Fraction(rng.randint(1, 3)))
        if key not in used:
            break
    else:
        return None
    if kind == "zero":
        s = _sizes(rng, budget, 1)
        blk = zero(*s) if s else None
    elif kind == "real_pair":
        plus, minus = _sizes(rng, budget, 1), []
        rest = budget - sum(plus)
        if rest >= 1 and rng.random() < 0.85:
            minus = _sizes(rng, rest, 1)
        blk = real_pair(num, plus, minus) if plus or minus else None
    elif kind == "real_single":
        s = _sizes(rng, budget, 1)
        blk = real_single(num if rng.random() < 0.5 else -num, *s) if s else None
    elif kind == "imaginary":
        s = _sizes(rng, budget, 2)
        blk = imaginary(key[2], *s) if s else None
    elif kind == "complex_quad":
        plus = _sizes(rng, budget, 2)
        rest = budget - 2 * sum(plus)
        minus = _sizes(rng, rest, 2) if rest >= 2 and rng.random() < 0.85 else []
        blk = complex_quad(num, key[2], plus, minus) if plus or minus else None
    else:
        s = _sizes(rng, budget, 2)
        blk = complex_single(num if rng.random() < 0.5 else -num, key[2], *s) if s else None
    if blk is None or blk.dim > budget or blk.dim == 0:
        return None
    used.add(key)
    return blk


def random_spec(rng: random.Random, max_dim: int = 10, force_kind: str | None = None,
                kinds=KIND_ORDER) -> JordanSpec:
    """A valid spec with m <= max_dim; ``force_kind`` is always present."""
    while True:
        used: set = set()
        groups: list[BlockSpec] = []
        budget = max_dim
        order = [force_kind] if force_kind else []
        order += [k for k in rng.sample(list(kinds), len(kinds)) if rng.random() < 0.45]
        for kind in order:
            if budget <= 0 or any(g.kind == kind for g in groups):
                continue
            g = random_group(rng, kind, budget, used)
            if g is not None:
                groups.append(g)
                budget -= g.dim
        if groups and (force_kind is None or any(g.kind == force_kind for g in groups)):
            return JordanSpec.build(groups)


def random_specs(n: int, seed: int = 0, max_dim: int = 10) -> list[JordanSpec]:
    """``n`` specs cycling the forced kind so every block kind is covered."""
    rng = random.Random(seed)
    return [random_spec(rng, max_dim, force_kind=KIND_ORDER[i % len(KIND_ORDER)]) for i in range(n)]


def random_rational(rng: random.Random, lo: int = -9, hi: int = 9, den: int = 7) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_point(rng: random.Random, m: int) -> RatMatrix:
    return RatMatrix.column([random_rational(rng) for _ in range(m)])


def random_invertible(rng: random.Random, m: int) -> RatMatrix:
    from .exact import is_invertible
    while True:
        t = RatMatrix(m, m, [Fraction(rng.randint(-3, 3)) for _ in range(m * m)])
        if is_invertible(t):
            return t
