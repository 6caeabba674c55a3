"""Symmetric matrices D with DB skew-symmetric: closed form and brute-force oracle.

The closed form is assembled per eigenvalue group. Inside a group every pair
of interacting Jordan blocks contributes a cell whose free entries sit on
anti-diagonals of alternating sign. A block paired with itself keeps only the
anti-diagonals compatible with symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .exact import (LinForm, ParamMatrix, RatMatrix, ZERO_FORM, hstack, kernel_basis,
                    param_block_diag, solve_linear, substitute)
from .jordan import (COMPLEX_QUAD, IMAGINARY, REAL_PAIR, ZERO, BlockSpec, JordanSpec,
                     realize)


@dataclass(frozen=True)
class DFamily:
    general: ParamMatrix
    basis: tuple[tuple[str, RatMatrix], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def params(self) -> tuple[str, ...]:
        return self.general.params

    def matrices(self) -> list[RatMatrix]:
        return [m for _, m in self.basis]

    @classmethod
    def from_general(cls, general: ParamMatrix) -> "DFamily":
        basis = []
        for p in general.params:
            asg = {q: Fraction(int(q == p)) for q in general.params}
            basis.append((p, substitute(general, asg)))
        return cls(general, tuple(basis))


# --------------------------------------------------------------------------
# Cell patterns


def cross_pattern(a: int, b: int) -> list[tuple[int, int, int, int]]:
    """Entries (k, l, t, sign) of an a x b solution Z of Z H_b + H_a^t Z = 0.

    0-based (k, l); ``t`` in 1..min(a, b) indexes the free anti-diagonal.
    For a > b the pattern of the transposed size pair is transposed into place.
    """
    if a > b:
        return [(l, k, t, sg) for k, l, t, sg in cross_pattern(b, a)]
    out = []
    for k in range(a):
        for l in range(b):
            t = k + l + 2 - b
            if t >= 1:
                out.append((k, l, t, 1 if (b - 1 - l) % 2 == 0 else -1))
    return out


def free_position(a: int, b: int, t: int) -> tuple[int, int]:
    """0-based position inside the cell of the entry that names parameter ``t``."""
    return (t - 1, b - 1) if a <= b else (a - 1, t - 1)


def _cell_forms(cell: int, value: dict[str, int], sign: int) -> list[list[LinForm]]:
    """Scalar cell or 2x2 rotation cell [[al, be], [-be, al]] times ``sign``."""
    if cell == 1:
        return [[LinForm.param(value["d"], sign)]]
    al = LinForm.param(value["alpha"], sign) if "alpha" in value else ZERO_FORM
    be = LinForm.param(value["beta"], sign) if "beta" in value else ZERO_FORM
    return [[al, be], [-be, al]]


def _group_family(blocks: Sequence[tuple[str, int]], cell: int,
                  interacts: Callable[[str, str], bool], prefix: str) -> ParamMatrix:
    """Assemble one group's parametric D from its Jordan blocks (sign, size)."""
    starts, acc = [], 0
    for _, s in blocks:
        starts.append(acc)
        acc += s
    n = acc * cell
    ent: dict[tuple[int, int], LinForm] = {}
    named: list[tuple[tuple[int, int], str]] = []

    def put(r: int, c: int, forms: list[list[LinForm]]) -> None:
        for i, row in enumerate(forms):
            for j, f in enumerate(row):
                if not f.is_zero():
                    ent[(cell * r + i, cell * c + j)] = f

    for i, (si, a) in enumerate(blocks):
        for j in range(i, len(blocks)):
            sj, b = blocks[j]
            if not interacts(si, sj):
                continue
            names: dict[int, dict[str, str]] = {}
            for t in range(1, min(a, b) + 1):
                fk, fl = free_position(a, b, t)
                pos = (starts[i] + fk + 1, starts[j] + fl + 1)
                tag = f"{pos[0]}_{pos[1]}"
                if cell == 1:
                    if i == j and (t - a) % 2:
                        continue
                    names[t] = {"d": f"{prefix}.d_{tag}"}
                elif i == j:
                    key = "alpha" if (t - a) % 2 == 0 else "beta"
                    names[t] = {key: f"{prefix}.{key}_{tag}"}
                else:
                    names[t] = {"alpha": f"{prefix}.alpha_{tag}", "beta": f"{prefix}.beta_{tag}"}
                for key in ("d", "alpha", "beta"):
                    if key in names[t]:
                        named.append(((pos[0], pos[1], key), names[t][key]))
            for k, l, t, sg in cross_pattern(a, b):
                if t not in names:
                    continue
                forms = _cell_forms(cell, names[t], sg)
                r, c = starts[i] + k, starts[j] + l
                put(r, c, forms)
                if i != j:
                    put(c, r, [list(col) for col in zip(*forms)])
    entries = [ent.get((r, c), ZERO_FORM) for r in range(n) for c in range(n)]
    params = [name for _, name in sorted(named)]
    return ParamMatrix(n, n, entries, params)


def _any(si: str, sj: str) -> bool:
    return True


def _opposite(si: str, sj: str) -> bool:
    return si != sj


def build_zero_block(sizes: Sequence[int], prefix: str = "g1") -> ParamMatrix:
    """Family for the nilpotent group; size-1 entries form the arbitrary symmetric corner."""
    return _group_family([("0", s) for s in sorted(sizes)], 1, _any, prefix)


def build_real_pair_block(lam, sizes_plus: Sequence[int], sizes_minus: Sequence[int],
                          prefix: str = "g1") -> ParamMatrix:
    if Fraction(lam) == 0:
        raise ValueError("lambda must be nonzero")
    blocks = [("+", s) for s in sorted(sizes_plus)] + [("-", s) for s in sorted(sizes_minus)]
    return _group_family(blocks, 1, _opposite, prefix)


def build_imaginary_block(b, sizes: Sequence[int], prefix: str = "g1") -> ParamMatrix:
    if Fraction(b) <= 0:
        raise ValueError("b must be positive")
    return _group_family([("0", s) for s in sorted(sizes)], 2, _any, prefix)


def build_complex_block(a, b, sizes_plus: Sequence[int], sizes_minus: Sequence[int],
                        prefix: str = "g1") -> ParamMatrix:
    if Fraction(a) == 0 or Fraction(b) <= 0:
        raise ValueError("need a != 0 and b > 0")
    blocks = [("+", s) for s in sorted(sizes_plus)] + [("-", s) for s in sorted(sizes_minus)]
    return _group_family(blocks, 2, _opposite, prefix)


def build_group(blk: BlockSpec, prefix: str) -> ParamMatrix:
    if blk.kind == ZERO:
        return build_zero_block(blk.sizes, prefix)
    if blk.kind == REAL_PAIR:
        return build_real_pair_block(blk.lam, blk.sizes_plus, blk.sizes_minus, prefix)
    if blk.kind == IMAGINARY:
        return build_imaginary_block(blk.b, blk.sizes, prefix)
    if blk.kind == COMPLEX_QUAD:
        return build_complex_block(blk.a, blk.b, blk.sizes_plus, blk.sizes_minus, prefix)
    # no partner eigenvalue: D vanishes on the whole group
    return ParamMatrix.from_rat(RatMatrix.zeros(blk.dim))


def solve_family(spec: JordanSpec) -> DFamily:
    groups = [build_group(b, f"g{i + 1}") for i, b in enumerate(spec.blocks)]
    return DFamily.from_general(param_block_diag(groups))


# --------------------------------------------------------------------------
# Oracle


def oracle_family(b: RatMatrix) -> DFamily:
    """Kernel of {D - D^t = 0, DB + B^t D = 0} over all m^2 entries of D."""
    if not b.is_square():
        raise ValueError("B must be square")
    m = b.rows
    nvar = m * m
    rows: list[list[Fraction]] = []
    for i in range(m):
        for j in range(i + 1, m):
            r = [Fraction(0)] * nvar
            r[i * m + j] = Fraction(1)
            r[j * m + i] = Fraction(-1)
            rows.append(r)
    for i in range(m):
        for j in range(m):
            r = [Fraction(0)] * nvar
            for k in range(m):
                if b[k, j]:
                    r[i * m + k] += b[k, j]      # (D B)_ij
                if b[k, i]:
                    r[k * m + j] += b[k, i]      # (B^t D)_ij
            if any(r):
                rows.append(r)
    if not rows:
        rows.append([Fraction(0)] * nvar)
    ker = kernel_basis(RatMatrix.from_rows(rows))
    names = [f"o{k + 1}" for k in range(len(ker))]
    ent = [LinForm(0, {names[k]: v.entries[idx] for k, v in enumerate(ker)}) for idx in range(nvar)]
    general = ParamMatrix(m, m, ent, names)
    return DFamily(general, tuple((n, RatMatrix(m, m, v.entries)) for n, v in zip(names, ker)))


def span_contains(basis: Sequence[RatMatrix], mats: Sequence[RatMatrix]) -> bool:
    """True when every matrix in ``mats`` is a combination of ``basis``."""
    if not mats:
        return True
    n = mats[0].rows * mats[0].cols
    rhs = hstack([RatMatrix.column(x.entries) for x in mats])
    if not basis:
        return rhs.is_zero()
    lhs = hstack([RatMatrix.column(x.entries) for x in basis])
    assert lhs.rows == n
    return solve_linear(lhs, rhs) is not None


@dataclass(frozen=True)
class OracleComparison:
    closed_dim: int
    oracle_dim: int
    closed_in_oracle: bool
    oracle_in_closed: bool

    @property
    def agree(self) -> bool:
        return (self.closed_dim == self.oracle_dim and self.closed_in_oracle
                and self.oracle_in_closed)


def compare_with_oracle(spec: JordanSpec, family: DFamily | None = None) -> OracleComparison:
    family = family or solve_family(spec)
    oracle = oracle_family(realize(spec))
    return OracleComparison(family.dim, oracle.dim,
                            span_contains(oracle.matrices(), family.matrices()),
                            span_contains(family.matrices(), oracle.matrices()))


def check_pair(b: RatMatrix, d: RatMatrix) -> list[str]:
    """Contract violations of (B, D): asymmetric D entries, non-skew DB entries."""
    problems = []
    m = d.rows
    for i in range(m):
        for j in range(i + 1, m):
            if d[i, j] != d[j, i]:
                problems.append(f"D not symmetric at ({i + 1},{j + 1})")
    db = d @ b
    s = db + db.T
    for i in range(m):
        for j in range(i, m):
            if s[i, j]:
                problems.append(f"DB not skew at ({i + 1},{j + 1})")
    return problems
