"""Real Jordan specifications, their realization, and change of frame."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .exact import (ParamMatrix, RatMatrix, ShapeError, block_diag, format_rational,
                    inverse, mat_mul, parse_rational)

SCHEMA_VERSION = 1

ZERO = "zero"
REAL_PAIR = "real_pair"
REAL_SINGLE = "real_single"
IMAGINARY = "imaginary"
COMPLEX_QUAD = "complex_quad"
COMPLEX_SINGLE = "complex_single"

# Realization order of eigenvalue groups.
KIND_ORDER = (ZERO, REAL_PAIR, REAL_SINGLE, IMAGINARY, COMPLEX_QUAD, COMPLEX_SINGLE)
COMPLEX_KINDS = (IMAGINARY, COMPLEX_QUAD, COMPLEX_SINGLE)

_FIELDS = {
    ZERO: {"sizes"},
    REAL_PAIR: {"lambda", "sizes_plus", "sizes_minus"},
    REAL_SINGLE: {"lambda", "sizes"},
    IMAGINARY: {"b", "sizes"},
    COMPLEX_QUAD: {"a", "b", "sizes_plus", "sizes_minus"},
    COMPLEX_SINGLE: {"a", "b", "sizes"},
}
_OPTIONAL = {REAL_PAIR: {"sizes_plus", "sizes_minus"}, COMPLEX_QUAD: {"sizes_plus", "sizes_minus"}}


class SpecError(ValueError):
    """A Jordan specification violates its invariants."""


@dataclass(frozen=True)
class BlockSpec:
    """One eigenvalue group.

    ``sizes`` is used by the one-sided kinds, ``sizes_plus``/``sizes_minus``
    by the paired kinds. Sizes of complex kinds count 2x2 cells.
    """

    kind: str
    sizes: tuple[int, ...] = ()
    sizes_plus: tuple[int, ...] = ()
    sizes_minus: tuple[int, ...] = ()
    lam: Fraction | None = None
    a: Fraction | None = None
    b: Fraction | None = None

    @property
    def paired(self) -> bool:
        return self.kind in (REAL_PAIR, COMPLEX_QUAD)

    @property
    def cell(self) -> int:
        return 2 if self.kind in COMPLEX_KINDS else 1

    def all_sizes(self) -> tuple[int, ...]:
        return self.sizes_plus + self.sizes_minus if self.paired else self.sizes

    @property
    def dim(self) -> int:
        return self.cell * sum(self.all_sizes())

    def eigen_keys(self) -> list[tuple]:
        """Descriptors of every eigenvalue (or conjugate pair) the group claims."""
        if self.kind == ZERO:
            return [("real", Fraction(0))]
        if self.kind == REAL_PAIR:
            return [("real", self.lam), ("real", -self.lam)]
        if self.kind == REAL_SINGLE:
            return [("real", self.lam)]
        if self.kind == IMAGINARY:
            return [("cplx", Fraction(0), self.b)]
        if self.kind == COMPLEX_QUAD:
            return [("cplx", self.a, self.b), ("cplx", -self.a, self.b)]
        return [("cplx", self.a, self.b)]

    def validate(self) -> None:
        k = self.kind
        if k not in KIND_ORDER:
            raise SpecError(f"unknown block kind {k!r}")
        sizes = self.all_sizes()
        if not sizes:
            raise SpecError(f"{k} block has no Jordan blocks")
        if any((not isinstance(s, int)) or isinstance(s, bool) or s < 1 for s in sizes):
            raise SpecError(f"{k} block has a size < 1: {list(sizes)}")
        if k == REAL_PAIR and not (self.lam is not None and self.lam > 0):
            raise SpecError(f"real_pair needs lambda > 0, got {self.lam}")
        if k == REAL_SINGLE and not (self.lam is not None and self.lam != 0):
            raise SpecError(f"real_single needs lambda != 0, got {self.lam}")
        if k in COMPLEX_KINDS and not (self.b is not None and self.b > 0):
            raise SpecError(f"{k} needs b > 0, got {self.b}")
        if k == COMPLEX_QUAD and not (self.a is not None and self.a > 0):
            raise SpecError(f"complex_quad needs a > 0, got {self.a}")
        if k == COMPLEX_SINGLE and not (self.a is not None and self.a != 0):
            raise SpecError(f"complex_single needs a != 0, got {self.a}")

    def canonical(self) -> "BlockSpec":
        return BlockSpec(self.kind, tuple(sorted(self.sizes)), tuple(sorted(self.sizes_plus)),
                         tuple(sorted(self.sizes_minus)), self.lam, self.a, self.b)

    def describe(self) -> str:
        bits = [self.kind]
        for name in ("lam", "a", "b"):
            v = getattr(self, name)
            if v is not None:
                bits.append(f"{'lambda' if name == 'lam' else name}={format_rational(v)}")
        if self.paired:
            bits.append(f"sizes_plus={list(self.sizes_plus)} sizes_minus={list(self.sizes_minus)}")
        else:
            bits.append(f"sizes={list(self.sizes)}")
        return " ".join(bits)


def zero(*sizes: int) -> BlockSpec:
    return BlockSpec(ZERO, sizes=tuple(sizes))


def real_pair(lam, plus: Sequence[int] = (), minus: Sequence[int] = ()) -> BlockSpec:
    return BlockSpec(REAL_PAIR, sizes_plus=tuple(plus), sizes_minus=tuple(minus), lam=Fraction(lam))


def real_single(lam, *sizes: int) -> BlockSpec:
    return BlockSpec(REAL_SINGLE, sizes=tuple(sizes), lam=Fraction(lam))


def imaginary(b, *sizes: int) -> BlockSpec:
    return BlockSpec(IMAGINARY, sizes=tuple(sizes), b=Fraction(b))


def complex_quad(a, b, plus: Sequence[int] = (), minus: Sequence[int] = ()) -> BlockSpec:
    return BlockSpec(COMPLEX_QUAD, sizes_plus=tuple(plus), sizes_minus=tuple(minus),
                     a=Fraction(a), b=Fraction(b))


def complex_single(a, b, *sizes: int) -> BlockSpec:
    return BlockSpec(COMPLEX_SINGLE, sizes=tuple(sizes), a=Fraction(a), b=Fraction(b))


@dataclass(frozen=True)
class JordanSpec:
    """Validated, canonically ordered list of eigenvalue groups.

    ``permutation[i]`` is the index in the input list of canonical group ``i``.
    """

    blocks: tuple[BlockSpec, ...]
    permutation: tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def of(cls, *blocks: BlockSpec) -> "JordanSpec":
        return cls.build(blocks)

    @classmethod
    def build(cls, blocks: Sequence[BlockSpec]) -> "JordanSpec":
        if not blocks:
            raise SpecError("specification has no blocks")
        seen: dict[tuple, int] = {}
        for i, blk in enumerate(blocks):
            try:
                blk.validate()
            except SpecError as exc:
                raise SpecError(f"block {i}: {exc}") from None
            for key in blk.eigen_keys():
                if key in seen:
                    raise SpecError(f"block {i} ({blk.describe()}): eigenvalue {_key_str(key)} "
                                    f"already claimed by block {seen[key]}")
                seen[key] = i
        order = sorted(range(len(blocks)), key=lambda i: KIND_ORDER.index(blocks[i].kind))
        return cls(tuple(blocks[i].canonical() for i in order), tuple(order))

    @property
    def m(self) -> int:
        return sum(b.dim for b in self.blocks)

    def offsets(self) -> list[int]:
        out, acc = [], 0
        for b in self.blocks:
            out.append(acc)
            acc += b.dim
        return out

    def zero_group(self) -> BlockSpec | None:
        return next((b for b in self.blocks if b.kind == ZERO), None)

    def is_nilpotent(self) -> bool:
        return all(b.kind == ZERO for b in self.blocks)


def _key_str(key: tuple) -> str:
    if key[0] == "real":
        return format_rational(key[1])
    return f"{format_rational(key[1])}±{format_rational(key[2])}i"


# --------------------------------------------------------------------------
# Realization


def rotation(a, b) -> RatMatrix:
    """The 2x2 cell [[a, b], [-b, a]]."""
    a, b = Fraction(a), Fraction(b)
    return RatMatrix.from_rows([[a, b], [-b, a]])


def real_jordan_block(lam, s: int) -> RatMatrix:
    lam = Fraction(lam)
    return RatMatrix(s, s, (lam if i == j else (1 if j == i + 1 else 0)
                            for i in range(s) for j in range(s)))


def complex_jordan_block(a, b, s: int) -> RatMatrix:
    """2s x 2s block: rotation cells on the diagonal, identity cells above."""
    n = 2 * s
    cell = rotation(a, b)
    ent = [Fraction(0)] * (n * n)
    for k in range(s):
        for i in range(2):
            for j in range(2):
                ent[(2 * k + i) * n + 2 * k + j] = cell[i, j]
        if k + 1 < s:
            for i in range(2):
                ent[(2 * k + i) * n + 2 * (k + 1) + i] = Fraction(1)
    return RatMatrix(n, n, ent)


def group_blocks(blk: BlockSpec) -> list[tuple[str, int, RatMatrix]]:
    """Jordan blocks of one group in realization order as (sign, size, matrix)."""
    k = blk.kind
    if k == ZERO:
        return [("0", s, real_jordan_block(0, s)) for s in blk.sizes]
    if k == REAL_SINGLE:
        return [("+", s, real_jordan_block(blk.lam, s)) for s in blk.sizes]
    if k == REAL_PAIR:
        return ([("+", s, real_jordan_block(blk.lam, s)) for s in blk.sizes_plus]
                + [("-", s, real_jordan_block(-blk.lam, s)) for s in blk.sizes_minus])
    if k == IMAGINARY:
        return [("0", s, complex_jordan_block(0, blk.b, s)) for s in blk.sizes]
    if k == COMPLEX_SINGLE:
        return [("+", s, complex_jordan_block(blk.a, blk.b, s)) for s in blk.sizes]
    # the -(a±bi) partner uses the cell [[-a, b], [-b, -a]]
    return ([("+", s, complex_jordan_block(blk.a, blk.b, s)) for s in blk.sizes_plus]
            + [("-", s, complex_jordan_block(-blk.a, blk.b, s)) for s in blk.sizes_minus])


def realize_group(blk: BlockSpec) -> RatMatrix:
    return block_diag([m for _, _, m in group_blocks(blk)])


def realize(spec: JordanSpec) -> RatMatrix:
    return block_diag([realize_group(b) for b in spec.blocks])


# --------------------------------------------------------------------------
# Change of frame


@dataclass(frozen=True)
class Conjugation:
    t: RatMatrix
    t_inv: RatMatrix

    def __post_init__(self):
        n = self.t.rows
        if not self.t.is_square() or self.t_inv.shape != (n, n):
            raise ShapeError("conjugation matrices must be square and of equal size")
        if self.t @ self.t_inv != RatMatrix.identity(n):
            raise SpecError("t @ t_inv is not the identity")

    @classmethod
    def of(cls, t: RatMatrix) -> "Conjugation":
        ti = inverse(t)
        if ti is None:
            raise SpecError("conjugation matrix is singular")
        return cls(t, ti)

    @classmethod
    def identity(cls, n: int) -> "Conjugation":
        i = RatMatrix.identity(n)
        return cls(i, i)

    def inverted(self) -> "Conjugation":
        return Conjugation(self.t_inv, self.t)


def conjugate(b: RatMatrix, c: Conjugation) -> RatMatrix:
    """T^-1 B T."""
    if b.shape != c.t.shape:
        raise ShapeError(f"shape mismatch {b.shape} vs {c.t.shape}")
    return c.t_inv @ b @ c.t


def pushforward_D(d: ParamMatrix | RatMatrix, c: Conjugation):
    """T^t D T, the form of D in the frame where B becomes T^-1 B T."""
    if d.shape != c.t.shape:
        raise ShapeError(f"shape mismatch {d.shape} vs {c.t.shape}")
    if isinstance(d, ParamMatrix):
        return mat_mul(d, c.t).rmul(c.t.T)
    return c.t.T @ d @ c.t


def check_witness(b: RatMatrix, spec: JordanSpec, c: Conjugation) -> RatMatrix:
    """Verify T^-1 B T equals realize(spec); return the realized matrix."""
    target = realize(spec)
    if b.shape != target.shape:
        raise SpecError(f"matrix is {b.shape}, spec realizes {target.shape}")
    if conjugate(b, c) != target:
        raise SpecError("T^-1 B T does not equal the realized Jordan form")
    return target


# --------------------------------------------------------------------------
# JSON


def _rat_field(d: dict, key: str, where: str) -> Fraction:
    try:
        return parse_rational(d[key])
    except (KeyError, ValueError) as exc:
        raise SpecError(f"{where}: field {key!r}: {exc}") from None


def _sizes(d: dict, key: str, where: str, required: bool = True) -> tuple[int, ...]:
    if key not in d:
        if required:
            raise SpecError(f"{where}: missing {key!r}")
        return ()
    v = d[key]
    if not isinstance(v, list) or not all(isinstance(s, int) and not isinstance(s, bool) for s in v):
        raise SpecError(f"{where}: {key!r} must be a list of integers")
    return tuple(v)


def block_from_json(d: Any, i: int) -> BlockSpec:
    where = f"block {i}"
    if not isinstance(d, dict) or "kind" not in d:
        raise SpecError(f"{where}: expected an object with a 'kind'")
    kind = d["kind"]
    if kind not in _FIELDS:
        raise SpecError(f"{where}: unknown kind {kind!r}")
    extra = set(d) - _FIELDS[kind] - {"kind"}
    if extra:
        raise SpecError(f"{where}: unknown fields {sorted(extra)}")
    opt = _OPTIONAL.get(kind, set())
    kw: dict[str, Any] = {}
    for key in _FIELDS[kind]:
        if key.startswith("sizes"):
            kw[key] = _sizes(d, key, where, required=key not in opt)
        elif key == "lambda":
            kw["lam"] = _rat_field(d, key, where)
        else:
            kw[key] = _rat_field(d, key, where)
    return BlockSpec(kind, **kw)


def spec_from_json(doc: Any) -> tuple[JordanSpec, RatMatrix | None, Conjugation | None]:
    """Parse a versioned spec document.

    Optional top-level ``matrix`` and ``t`` (row lists of rational strings)
    supply an arbitrary matrix together with its conjugation witness.
    """
    if not isinstance(doc, dict):
        raise SpecError("spec document must be an object")
    extra = set(doc) - {"version", "blocks", "matrix", "t"}
    if extra:
        raise SpecError(f"unknown top-level fields {sorted(extra)}")
    if doc.get("version") != SCHEMA_VERSION:
        raise SpecError(f"unsupported version {doc.get('version')!r}")
    raw = doc.get("blocks")
    if not isinstance(raw, list):
        raise SpecError("'blocks' must be a list")
    spec = JordanSpec.build([block_from_json(b, i) for i, b in enumerate(raw)])
    if ("matrix" in doc) != ("t" in doc):
        raise SpecError("'matrix' and 't' must be given together")
    if "matrix" not in doc:
        return spec, None, None
    try:
        mat = RatMatrix.from_rows([[parse_rational(x) for x in r] for r in doc["matrix"]])
        t = RatMatrix.from_rows([[parse_rational(x) for x in r] for r in doc["t"]])
        conj = Conjugation.of(t)
    except (ValueError, TypeError, ShapeError) as exc:
        raise SpecError(f"bad matrix/t: {exc}") from None
    check_witness(mat, spec, conj)
    return spec, mat, conj


def spec_to_json(spec: JordanSpec) -> dict:
    out = []
    for b in spec.blocks:
        d: dict[str, Any] = {"kind": b.kind}
        if b.lam is not None:
            d["lambda"] = format_rational(b.lam)
        if b.a is not None:
            d["a"] = format_rational(b.a)
        if b.b is not None:
            d["b"] = format_rational(b.b)
        if b.paired:
            d["sizes_plus"] = list(b.sizes_plus)
            d["sizes_minus"] = list(b.sizes_minus)
        else:
            d["sizes"] = list(b.sizes)
        out.append(d)
    return {"version": SCHEMA_VERSION, "blocks": out}
