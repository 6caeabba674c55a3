"""Structure induced by a pair (B, D): verdict, Casimirs, isotropic fields."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .dsolver import DFamily, check_pair
from .exact import (LinForm, RatMatrix, columns_to_matrix, hstack, inverse, is_invertible,
                    kernel_basis, rank, substitute, vstack)
from .jordan import COMPLEX_QUAD, REAL_PAIR, ZERO, JordanSpec


class Verdict(str, Enum):
    SYMPLECTIC = "Symplectic"
    PRESYMPLECTIC = "Presymplectic"
    POISSON = "Poisson"
    DIRAC = "Dirac"
    PROPER_BIG_ISOTROPIC = "ProperBigIsotropic"
    TRIVIAL = "Trivial"


class ContractError(ValueError):
    """D is not symmetric or DB is not skew-symmetric."""


@dataclass(frozen=True)
class StructureClass:
    verdict: Verdict
    kernel_witness: RatMatrix | None = None
    structure_matrix: RatMatrix | None = None
    # DB = 0: a conserved quadratic without a dynamics pairing
    null_pairing: bool = False


@dataclass(frozen=True)
class Casimir:
    vector: RatMatrix       # c, with H(u) = c^t u
    witness: RatMatrix      # eta in ker B with D eta = c


@dataclass(frozen=True)
class IsotropicField:
    field: RatMatrix        # X = B xi
    xi: RatMatrix           # xi in ker D


@dataclass(frozen=True)
class ConservedReport:
    hamiltonian: RatMatrix  # S with H(u) = 1/2 u^t S u
    casimirs: tuple[Casimir, ...] = field(default_factory=tuple)
    isotropic_fields: tuple[IsotropicField, ...] = field(default_factory=tuple)
    convention: str = "H(u) = 1/2 u^t S u"


def _require_pair(b: RatMatrix, d: RatMatrix) -> None:
    if not b.is_square() or b.shape != d.shape:
        raise ContractError(f"B is {b.shape}, D is {d.shape}")
    problems = check_pair(b, d)
    if problems:
        raise ContractError("; ".join(problems))


def classify(b: RatMatrix, d: RatMatrix) -> StructureClass:
    """Verdict for the big-isotropic subbundle {(Bz, Dz)}.

    ``Trivial`` is reserved for D = 0. A nonzero D with DB = 0 is classified
    by its kernels and flagged through ``null_pairing``.
    """
    _require_pair(b, d)
    null = (d @ b).is_zero()
    if d.is_zero():
        return StructureClass(Verdict.TRIVIAL, null_pairing=True)
    b_inv = inverse(b)
    d_inv = inverse(d)
    if b_inv is not None:
        omega = d @ b_inv
        v = Verdict.SYMPLECTIC if d_inv is not None else Verdict.PRESYMPLECTIC
        return StructureClass(v, structure_matrix=omega, null_pairing=null)
    if d_inv is not None:
        return StructureClass(Verdict.POISSON, structure_matrix=b @ d_inv, null_pairing=null)
    common = kernel_basis(vstack([b, d]))
    if not common:
        return StructureClass(Verdict.DIRAC, null_pairing=null)
    return StructureClass(Verdict.PROPER_BIG_ISOTROPIC, kernel_witness=common[0], null_pairing=null)


def _independent_images(vectors: list[RatMatrix], images: list[RatMatrix]):
    """Keep vectors whose images extend the span, scanning left to right."""
    kept, kept_img = [], []
    for v, im in zip(vectors, images):
        if im.is_zero():
            continue
        trial = kept_img + [im]
        if rank(columns_to_matrix(trial, im.rows)) == len(trial):
            kept.append(v)
            kept_img.append(im)
    return kept, kept_img


def conserved_report(b: RatMatrix, d: RatMatrix) -> ConservedReport:
    _require_pair(b, d)
    ker_b = kernel_basis(b)
    etas, cs = _independent_images(ker_b, [d @ e for e in ker_b])
    ker_d = kernel_basis(d)
    xis, xs = _independent_images(ker_d, [b @ x for x in ker_d])
    return ConservedReport(
        hamiltonian=d,
        casimirs=tuple(Casimir(c, e) for c, e in zip(cs, etas)),
        isotropic_fields=tuple(IsotropicField(x, xi) for x, xi in zip(xs, xis)),
    )


# --------------------------------------------------------------------------
# Invertible choice


@dataclass(frozen=True)
class Obstruction:
    """Why no member of the family is invertible.

    ``column`` is a 1-based column of the parametric family that is the zero
    form, when one exists. ``kernel_columns`` are the coordinates spanning
    ker B on which the certificate is computed: every maximal minor of
    D restricted to those columns vanishes identically (``minors_vanish``).
    """

    column: int | None
    kernel_columns: tuple[int, ...] = ()
    minors_vanish: bool | None = None
    reason: str = ""


def _zero_columns(general) -> list[int]:
    return [j + 1 for j in range(general.cols) if all(f.is_zero() for f in general.col_forms(j))]


def _poly_det(rows: list[list[LinForm]]) -> dict:
    """Determinant of a small matrix of linear forms as {monomial: coef}."""
    n = len(rows)
    if n == 0:
        return {(): Fraction(1)}
    out: dict = {}
    for j, f in enumerate(rows[0]):
        if f.is_zero():
            continue
        minor = _poly_det([r[:j] + r[j + 1:] for r in rows[1:]])
        sign = -1 if j % 2 else 1
        terms = [((), f.constant)] if f.constant else []
        terms += [((k,), v) for k, v in f.terms.items()]
        for mono, c in minor.items():
            for tm, tc in terms:
                key = tuple(sorted(mono + tm))
                out[key] = out.get(key, 0) + sign * c * tc
    return {k: v for k, v in out.items() if v}


def _minors_vanish(general, cols: list[int], rng: random.Random) -> bool:
    """All k x k minors of the k columns vanish as polynomials.

    Exact polynomial expansion for k <= 4; beyond that a rank test at random
    rational points (a nonzero minor survives a random point almost surely).
    """
    k = len(cols)
    rows = [[general[i, j - 1] for j in cols] for i in range(general.rows)]
    rows = [r for r in rows if not all(f.is_zero() for f in r)]
    if len(rows) < k:
        return True
    if k <= 4:
        return all(not _poly_det([rows[i] for i in sel]) for sel in combinations(range(len(rows)), k))
    for _ in range(8):
        asg = {p: Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for p in general.params}
        mat = RatMatrix.from_rows([[f(asg) for f in r] for r in rows])
        if rank(mat) == k:
            return False
    return True


def _pair_sizes(plus, minus):
    return sorted(plus) == sorted(minus)


def invertible_choice(spec: JordanSpec, family: DFamily, seed: int = 0):
    """An assignment making D invertible, or (None, Obstruction).

    Nilpotent group: identity on the size-1 corner, anti-diagonal of each odd
    block, cross anti-diagonal between two equal even blocks. Paired groups
    need matching size multisets; one-sided groups never admit one.
    """
    asg = {p: Fraction(0) for p in family.params}
    for gi, blk in enumerate(spec.blocks):
        prefix = f"g{gi + 1}"
        if blk.kind == ZERO:
            sizes = sorted(blk.sizes)
            starts = _starts(sizes)
            evens: dict[int, list[int]] = {}
            for idx, s in enumerate(sizes):
                if s % 2:
                    # t = 1 entry of the block's own pattern sits at (1, s)
                    asg[f"{prefix}.d_{starts[idx] + 1}_{starts[idx] + s}"] = Fraction(1)
                else:
                    evens.setdefault(s, []).append(idx)
            lone = [idxs[-1] for s, idxs in evens.items() if len(idxs) % 2]
            if lone:
                return None, _nilpotent_obstruction(spec, family, gi, seed)
            for s, idxs in evens.items():
                for x, y in zip(idxs[0::2], idxs[1::2]):
                    asg[f"{prefix}.d_{starts[x] + 1}_{starts[y] + s}"] = Fraction(1)
        elif blk.kind in (REAL_PAIR, COMPLEX_QUAD):
            if not _pair_sizes(blk.sizes_plus, blk.sizes_minus):
                return None, _generic_obstruction(family, seed,
                                                  f"group {gi + 1}: unequal size multisets")
            plus, minus = sorted(blk.sizes_plus), sorted(blk.sizes_minus)
            ps, ms = _starts(plus), _starts(minus)
            shift = sum(plus)
            key = "d" if blk.kind == REAL_PAIR else "alpha"
            for x, s in enumerate(plus):
                r, c = ps[x] + 1, shift + ms[x] + s
                asg[f"{prefix}.{key}_{r}_{c}"] = Fraction(1)
        elif blk.kind == "imaginary":
            sizes = sorted(blk.sizes)
            starts = _starts(sizes)
            for idx, s in enumerate(sizes):
                key = "alpha" if s % 2 else "beta"
                asg[f"{prefix}.{key}_{starts[idx] + 1}_{starts[idx] + s}"] = Fraction(1)
        else:
            return None, _generic_obstruction(family, seed, f"group {gi + 1}: no partner eigenvalue")
    d = substitute(family.general, asg) if family.params else RatMatrix.zeros(spec.m)
    if not is_invertible(d):
        raise AssertionError("constructed D is singular")
    return asg, d


def _starts(sizes):
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out


def _nilpotent_obstruction(spec: JordanSpec, family: DFamily, gi: int, seed: int) -> Obstruction:
    rng = random.Random(seed)
    blk = spec.blocks[gi]
    base = spec.offsets()[gi]
    heads = [base + st + 1 for st in _starts(sorted(blk.sizes))]
    zeros = [c for c in _zero_columns(family.general) if c in heads]
    vanish = _minors_vanish(family.general, heads, rng)
    return Obstruction(zeros[0] if zeros else None, tuple(heads), vanish,
                       "unpaired even nilpotent block")


def _generic_obstruction(family: DFamily, seed: int, reason: str) -> Obstruction:
    zeros = _zero_columns(family.general)
    if zeros:
        return Obstruction(zeros[0], reason=reason)
    rng = random.Random(seed)
    cols = list(range(1, family.general.cols + 1))
    return Obstruction(None, tuple(cols), _minors_vanish(family.general, cols, rng), reason)
