"""Commutant of B and a verified Hamiltonian integrable system for u' = Bu.

Every field is written as C = BQ with Q in the commutant and D0 Q symmetric.
Then H = 1/2 u^t D0 Q u is a Hamiltonian for C with witness Q, and the
quadratic integrals D0 Q are conserved by all fields as long as the Q's
commute. Invertible groups use Q = B^{-1} C directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .classifier import StructureClass, classify
from .dsolver import OracleComparison, solve_family, span_contains
from .exact import (LinForm, ParamMatrix, RatMatrix, ZERO_FORM, columns_to_matrix, inverse,
                    kernel_basis, rank, solve_linear, vstack)
from .jordan import (COMPLEX_KINDS, COMPLEX_QUAD, COMPLEX_SINGLE, IMAGINARY, REAL_PAIR, REAL_SINGLE,
                     ZERO, BlockSpec, JordanSpec, realize)
from .sampling import random_point


class IntegrityError(RuntimeError):
    """A built system failed its own verification."""

    def __init__(self, transcript: "Transcript"):
        self.transcript = transcript
        super().__init__("; ".join(f"{c.name}: {c.detail}" for c in transcript.failures()))


# --------------------------------------------------------------------------
# Commutant


@dataclass(frozen=True)
class CommutantFamily:
    general: ParamMatrix
    basis: tuple[tuple[str, RatMatrix], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrices(self) -> list[RatMatrix]:
        return [m for _, m in self.basis]

    @classmethod
    def from_general(cls, general: ParamMatrix) -> "CommutantFamily":
        from .exact import substitute
        basis = []
        for p in general.params:
            basis.append((p, substitute(general, {q: Fraction(int(q == p)) for q in general.params})))
        return cls(general, tuple(basis))


def _block_ranges(spec: JordanSpec) -> list[list[tuple[str, int, list[int]]]]:
    """Per group: (sign, size in cells, coordinate indices) of each Jordan block."""
    out = []
    for blk, off in zip(spec.blocks, spec.offsets()):
        cell = blk.cell
        if blk.paired:
            signed = [("+", s) for s in blk.sizes_plus] + [("-", s) for s in blk.sizes_minus]
        else:
            signed = [("0", s) for s in blk.sizes]
        rows, acc = [], off
        for sign, s in signed:
            rows.append((sign, s, list(range(acc, acc + cell * s))))
            acc += cell * s
        out.append(rows)
    return out


def commutant(spec: JordanSpec) -> CommutantFamily:
    """All C with CB = BC, as block-Toeplitz cells between equal-eigenvalue blocks.

    The cell between an a-block (rows) and a b-block (columns) is upper
    triangular Toeplitz, flush right when a <= b and flush top when a > b.
    Complex kinds use rotation cells alpha I + beta K as coefficients.
    """
    m = spec.m
    ent: dict[tuple[int, int], LinForm] = {}
    names: list[str] = []
    for gi, (blk, blocks) in enumerate(zip(spec.blocks, _block_ranges(spec))):
        prefix = f"g{gi + 1}"
        cell = blk.cell
        for i, (si, a, ri) in enumerate(blocks):
            for j, (sj, b, rj) in enumerate(blocks):
                if si != sj:
                    continue
                lo = max(0, b - a)
                for t in range(min(a, b)):
                    if cell == 1:
                        forms = {"c": f"{prefix}.c_{i + 1}_{j + 1}_{t}"}
                    else:
                        forms = {k: f"{prefix}.{k}_{i + 1}_{j + 1}_{t}" for k in ("alpha", "beta")}
                    names.extend(forms.values())
                    for k in range(a):
                        l = k + t + lo
                        if l >= b:
                            continue
                        if cell == 1:
                            ent[(ri[k], rj[l])] = LinForm.param(forms["c"])
                        else:
                            al, be = LinForm.param(forms["alpha"]), LinForm.param(forms["beta"])
                            for (x, y), f in (((0, 0), al), ((1, 1), al), ((0, 1), be), ((1, 0), -be)):
                                ent[(ri[2 * k + x], rj[2 * l + y])] = f
    general = ParamMatrix(m, m, [ent.get((r, c), ZERO_FORM) for r in range(m) for c in range(m)], names)
    return CommutantFamily.from_general(general)


def commutant_oracle(b: RatMatrix) -> CommutantFamily:
    """Kernel of X -> BX - XB over all m^2 entries."""
    m = b.rows
    rows = []
    for i in range(m):
        for j in range(m):
            r = [Fraction(0)] * (m * m)
            for k in range(m):
                if b[i, k]:
                    r[k * m + j] += b[i, k]
                if b[k, j]:
                    r[i * m + k] -= b[k, j]
            if any(r):
                rows.append(r)
    if not rows:
        rows.append([Fraction(0)] * (m * m))
    ker = kernel_basis(RatMatrix.from_rows(rows))
    names = [f"x{k + 1}" for k in range(len(ker))]
    ent = [LinForm(0, {names[k]: v.entries[idx] for k, v in enumerate(ker)}) for idx in range(m * m)]
    return CommutantFamily(ParamMatrix(m, m, ent, names),
                           tuple((n, RatMatrix(m, m, v.entries)) for n, v in zip(names, ker)))


def compare_commutant(spec: JordanSpec, family: CommutantFamily | None = None) -> OracleComparison:
    family = family or commutant(spec)
    oracle = commutant_oracle(realize(spec))
    return OracleComparison(family.dim, oracle.dim,
                            span_contains(oracle.matrices(), family.matrices()),
                            span_contains(family.matrices(), oracle.matrices()))


# --------------------------------------------------------------------------
# Pairing


def _pair_indices(plus: Sequence[int], minus: Sequence[int]):
    """Index pairs into ``plus``/``minus`` by the descending zip; None marks a leftover."""
    po = sorted(range(len(plus)), key=lambda i: (-plus[i], -i))
    mo = sorted(range(len(minus)), key=lambda i: (-minus[i], -i))
    out = list(zip(po, mo))
    out += [(i, None) for i in po[len(mo):]]
    out += [(None, j) for j in mo[len(po):]]
    return out


def pair_blocks(plus: Sequence[int], minus: Sequence[int]) -> list[tuple[int | None, int | None]]:
    """Pair +/- block sizes: sort both descending and zip; leftovers get None."""
    return [(None if i is None else plus[i], None if j is None else minus[j])
            for i, j in _pair_indices(plus, minus)]


# --------------------------------------------------------------------------
# System


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class Transcript:
    checks: tuple[Check, ...]
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)


@dataclass(frozen=True)
class LinearIntegral:
    covector: RatMatrix     # c, with F(u) = c^t u
    witness: RatMatrix      # z with Bz = 0, D0 z = c
    label: str = ""


@dataclass(frozen=True)
class IntegrableSystem:
    b: RatMatrix
    d0: RatMatrix
    vector_fields: tuple[RatMatrix, ...]
    hamiltonians: tuple[RatMatrix, ...]      # H_i paired with C_i
    witnesses: tuple[RatMatrix, ...]         # Z_i with B Z_i = C_i, D0 Z_i = H_i
    quadratic_integrals: tuple[RatMatrix, ...]
    linear_integrals: tuple[LinearIntegral, ...]
    structure: StructureClass | None = None
    transcript: Transcript | None = None
    field_labels: tuple[str, ...] = ()
    integral_labels: tuple[str, ...] = ()

    @property
    def m(self) -> int:
        return self.b.rows

    @property
    def p(self) -> int:
        return len(self.vector_fields)

    @property
    def q(self) -> int:
        return len(self.quadratic_integrals) + len(self.linear_integrals)


def _place(m: int, parts) -> RatMatrix:
    """Full m x m matrix from (row indices, col indices, local matrix) parts."""
    ent = [Fraction(0)] * (m * m)
    for ri, ci, loc in parts:
        for a, r in enumerate(ri):
            for b, c in enumerate(ci):
                if loc[a, b]:
                    ent[r * m + c] += loc[a, b]
    return RatMatrix(m, m, ent)


def _shift(s: int, cell: int) -> RatMatrix:
    n = s * cell
    return RatMatrix(n, n, (1 if j == i + cell else 0 for i in range(n) for j in range(n)))


def _rot(s: int) -> RatMatrix:
    """I_s tensor [[0, 1], [-1, 0]]."""
    n = 2 * s
    ent = [0] * (n * n)
    for k in range(s):
        ent[(2 * k) * n + 2 * k + 1] = 1
        ent[(2 * k + 1) * n + 2 * k] = -1
    return RatMatrix(n, n, ent)


def _restrict(a: RatMatrix, idx: list[int]) -> RatMatrix:
    return RatMatrix(len(idx), len(idx), (a[r, c] for r in idx for c in idx))


@dataclass
class _Unit:
    """Local contribution: fields (first one is B restricted to the unit) with witnesses."""
    fields: list = field(default_factory=list)       # (C, Z, label)
    d0: RatMatrix | None = None
    quadratic: list = field(default_factory=list)    # (S, label)
    linear: list = field(default_factory=list)       # (c, label)


def _parse(name: str):
    prefix, rest = name.split(".")
    key, r, c = rest.split("_")
    return prefix, key, int(r), int(c)


class _Builder:
    def __init__(self, spec: JordanSpec):
        self.spec = spec
        self.m = spec.m
        self.b = realize(spec)
        self.family = dict(solve_family(spec).basis)

    def on(self, idx, loc) -> RatMatrix:
        return _place(self.m, [(idx, idx, loc)])

    def b_inv_times(self, idx: list[int], c: RatMatrix) -> RatMatrix:
        local = inverse(_restrict(self.b, idx))
        return self.on(idx, local @ _restrict(c, idx))

    def basis(self, name: str) -> RatMatrix:
        return self.family[name]

    def cell_params(self, prefix: str, rows: range, cols: range) -> list[tuple[str, RatMatrix]]:
        out = []
        for name, mat in self.family.items():
            pre, _, r, c = _parse(name)
            if pre == prefix and r in rows and c in cols:
                out.append((name, mat))
        return out

    # nilpotent group -------------------------------------------------------

    def zero_units(self, gi: int, blk: BlockSpec, blocks) -> list[_Unit]:
        prefix = f"g{gi + 1}"
        starts = _cell_starts([s for _, s, _ in blocks])
        units = []
        ones = [i for i, (_, s, _) in enumerate(blocks) if s == 1]
        if ones:
            u = _Unit()
            idx = [blocks[i][2][0] for i in ones]
            u.d0 = self.on(idx, RatMatrix.identity(len(idx)))
            for k in idx:
                u.linear.append((RatMatrix.unit(self.m, k, 0, 1), f"u{k + 1}"))
            units.append(u)
        evens: dict[int, list[int]] = {}
        for i, (_, s, idx) in enumerate(blocks):
            if s == 1:
                continue
            if s % 2:
                d0 = self.basis(f"{prefix}.d_{starts[i] + 1}_{starts[i] + s}")
                units.append(self._powers_unit(idx, d0, (s - 1) // 2, s))
            else:
                evens.setdefault(s, []).append(i)
        for s, ids in evens.items():
            for x, y in zip(ids[0::2], ids[1::2]):
                units.append(self._even_pair(prefix, blocks, starts, x, y))
            if len(ids) % 2:
                i = ids[-1]
                d0 = self.basis(f"{prefix}.d_{starts[i] + 2}_{starts[i] + s}")
                units.append(self._powers_unit(blocks[i][2], d0, s // 2, s, casimir_last=False))
        return units

    def _powers_unit(self, idx, d0, k, s, casimir_last=True) -> _Unit:
        """Q = N^{2i}: fields N^{2i+1}, integrals D0 N^{2i}."""
        u = _Unit(d0=d0)
        n = self.on(idx, _shift(s, 1))
        q = self.on(idx, RatMatrix.identity(s))
        for i in range(k + (1 if casimir_last else 0)):
            c = n @ q
            if not c.is_zero():
                u.fields.append((c, q, f"N^{2 * i + 1} on coords {idx[0] + 1}..{idx[-1] + 1}"))
            u.quadratic.append((d0 @ q, f"D0 N^{2 * i} on coords {idx[0] + 1}..{idx[-1] + 1}"))
            q = n @ n @ q
        return u

    def _even_pair(self, prefix, blocks, starts, x, y) -> _Unit:
        s = blocks[x][1]
        t = s // 2
        ix, iy = blocks[x][2], blocks[y][2]
        d0 = self.basis(f"{prefix}.d_{starts[x] + 1}_{starts[y] + s}")
        u = _Unit(d0=d0)
        j = _shift(s, 1)
        eye = RatMatrix.identity(s)
        n = _place(self.m, [(ix, ix, j), (iy, iy, j)])
        sigma = _place(self.m, [(ix, iy, eye), (iy, ix, eye)])
        where = f"coords {ix[0] + 1}..{ix[-1] + 1} & {iy[0] + 1}..{iy[-1] + 1}"
        q = _place(self.m, [(ix, ix, eye), (iy, iy, eye)])
        for i in range(t):
            u.fields.append((n @ q, q, f"N^{2 * i + 1} on {where}"))
            u.quadratic.append((d0 @ q, f"D0 N^{2 * i} on {where}"))
            q = n @ n @ q
        for i in range(t - 1):
            q = sigma @ (n ** (2 * i + 1))
            u.fields.append((n @ q, q, f"swap N^{2 * i + 2} on {where}"))
            u.quadratic.append((d0 @ q, f"D0 swap N^{2 * i + 1} on {where}"))
        for k in (ix[-1], iy[-1]):
            u.linear.append((RatMatrix.unit(self.m, k, 0, 1), f"u{k + 1}"))
        return u

    # invertible groups ----------------------------------------------------

    def _local_ops(self, blocks, i):
        _, s, idx = blocks[i]
        cell = len(idx) // s
        return idx, s, cell, _shift(s, cell)

    def pair_unit(self, gi, blk, blocks, i, j) -> _Unit:
        """Paired +/- blocks: the bigger block carries free powers, the smaller a signed copy."""
        prefix = f"g{gi + 1}"
        ip, sp, cell, np_ = self._local_ops(blocks, i)
        im, sm, _, nm = self._local_ops(blocks, j)
        idx = ip + im
        starts = _cell_starts([s for _, s, _ in blocks])
        big_p = sp > sm
        big = max(sp, sm)
        key = "d" if cell == 1 else "alpha"
        fk, fl = (0, sm - 1) if sp <= sm else (sp - 1, 0)
        d0 = self.basis(f"{prefix}.{key}_{starts[i] + fk + 1}_{starts[j] + fl + 1}")
        u = _Unit(d0=d0)
        b_unit = self.on(idx, _restrict(self.b, idx))
        u.fields.append((b_unit, self.on(idx, RatMatrix.identity(len(idx))), "B on pair"))

        def power(nloc, size, e):
            return nloc ** e if e < size else RatMatrix.zeros(nloc.rows)

        def signed(e, rot=False):
            sg_small = Fraction(-1) ** (e if rot else e + 1)
            a_loc, b_loc = power(np_, sp, e), power(nm, sm, e)
            if rot:
                a_loc, b_loc = _rot(sp) @ a_loc, _rot(sm) @ b_loc
            if big_p:
                b_loc = b_loc.scale(sg_small)
            else:
                a_loc = a_loc.scale(sg_small)
            return _place(self.m, [(ip, ip, a_loc), (im, im, b_loc)])

        for e in range(1, big):
            c = signed(e)
            u.fields.append((c, self.b_inv_times(idx, c), f"E{e} on pair"))
        if cell == 2:
            for e in range(big):
                c = signed(e, rot=True)
                u.fields.append((c, self.b_inv_times(idx, c), f"KE{e} on pair"))
        rows = range(starts[i] + 1, starts[i] + sp + 1)
        cols = range(starts[j] + 1, starts[j] + sm + 1)
        for name, mat in sorted(self.cell_params(prefix, rows, cols)):
            u.quadratic.append((mat, f"cross integral {name}"))
        return u

    def lone_unit(self, blocks, i) -> _Unit:
        """A block without partner: all of its own commutant, D0 = 0 there."""
        idx, s, cell, n = self._local_ops(blocks, i)
        u = _Unit(d0=RatMatrix.zeros(self.m))
        b_unit = self.on(idx, _restrict(self.b, idx))
        u.fields.append((b_unit, self.on(idx, RatMatrix.identity(len(idx))), "B on block"))
        for e in range(1, s):
            c = self.on(idx, n ** e)
            u.fields.append((c, self.b_inv_times(idx, c), f"N^{e} on block"))
        if cell == 2:
            for e in range(s):
                c = self.on(idx, _rot(s) @ n ** e)
                u.fields.append((c, self.b_inv_times(idx, c), f"K N^{e} on block"))
        return u

    def imaginary_unit(self, gi, blocks, i) -> _Unit:
        """Fields K^{[e even]} N^e: the Hermitian integrals of the block are all conserved."""
        prefix = f"g{gi + 1}"
        idx, s, _, n = self._local_ops(blocks, i)
        st = _cell_starts([x for _, x, _ in blocks])[i]
        key = "alpha" if s % 2 else "beta"
        d0 = self.basis(f"{prefix}.{key}_{st + 1}_{st + s}")
        u = _Unit(d0=d0)
        b_unit = self.on(idx, _restrict(self.b, idx))
        u.fields.append((b_unit, self.on(idx, RatMatrix.identity(len(idx))), "B on block"))
        for e in range(1, s):
            loc = n ** e if e % 2 else _rot(s) @ n ** e
            c = self.on(idx, loc)
            u.fields.append((c, self.b_inv_times(idx, c), f"{'' if e % 2 else 'K '}N^{e} on block"))
        rng = range(st + 1, st + s + 1)
        for name, mat in sorted(self.cell_params(prefix, rng, rng)):
            u.quadratic.append((mat, f"block integral {name}"))
        return u

    def units(self) -> list[_Unit]:
        out = []
        for gi, (blk, blocks) in enumerate(zip(self.spec.blocks, _block_ranges(self.spec))):
            if blk.kind == ZERO:
                out += self.zero_units(gi, blk, blocks)
            elif blk.kind in (REAL_PAIR, COMPLEX_QUAD):
                npl = len(blk.sizes_plus)
                for i, j in _pair_indices(blk.sizes_plus, blk.sizes_minus):
                    if i is not None and j is not None:
                        out.append(self.pair_unit(gi, blk, blocks, i, npl + j))
                    else:
                        out.append(self.lone_unit(blocks, i if j is None else npl + j))
            elif blk.kind == IMAGINARY:
                out += [self.imaginary_unit(gi, blocks, i) for i in range(len(blocks))]
            else:
                out += [self.lone_unit(blocks, i) for i in range(len(blocks))]
        return out


def _cell_starts(sizes: Sequence[int]) -> list[int]:
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out


def build_integrable(spec: JordanSpec, seed: int = 0, verify: bool = True) -> IntegrableSystem:
    """Direct sum of per-unit systems with C_1 = B; raises IntegrityError if a check fails."""
    bld = _Builder(spec)
    m, b = bld.m, bld.b
    units = bld.units()
    d0 = RatMatrix.zeros(m)
    for u in units:
        if u.d0 is not None:
            d0 = d0 + u.d0
    fields = [(b, RatMatrix.identity(m), "B")]
    replaced = False
    for u in units:
        for k, f in enumerate(u.fields):
            # B is the sum of the unit copies of B, so one of them is redundant
            if k == 0 and not replaced:
                replaced = True
                continue
            fields.append(f)
    quad = [s for u in units for s in u.quadratic]
    lin = [c for u in units for c in u.linear]
    if b.is_zero() and lin:
        lin = lin[:-1]
    linear = []
    stacked = vstack([b, d0])
    for c, label in lin:
        z = solve_linear(stacked, vstack([RatMatrix.zeros(m, 1), c]))
        if z is None:
            raise AssertionError(f"no witness for linear integral {label}")
        linear.append(LinearIntegral(c, z, label))
    system = IntegrableSystem(
        b=b, d0=d0,
        vector_fields=tuple(c for c, _, _ in fields),
        hamiltonians=tuple(d0 @ z for _, z, _ in fields),
        witnesses=tuple(z for _, z, _ in fields),
        quadratic_integrals=tuple(s for s, _ in quad),
        linear_integrals=tuple(linear),
        structure=classify(b, d0),
        field_labels=tuple(lab for _, _, lab in fields),
        integral_labels=tuple(lab for _, lab in quad) + tuple(lab for _, lab in lin),
    )
    if not verify:
        return system
    transcript = verify_system(system, seed)
    system = replace(system, transcript=transcript)
    if not transcript.passed:
        raise IntegrityError(transcript)
    return system


# --------------------------------------------------------------------------
# Verification


def _first_failure(pairs, test) -> str:
    for label, args in pairs:
        if not test(*args):
            return label
    return ""


def _generic_rank(vectors_at, count: int, m: int, rng: random.Random, tries: int = 4):
    """Rank ``count`` reached at one of ``tries`` seeded random points; returns (ok, best)."""
    best = 0
    for _ in range(tries):
        u0 = random_point(rng, m)
        vecs = vectors_at(u0)
        r = rank(columns_to_matrix(vecs, m)) if vecs else 0
        best = max(best, r)
        if r == count:
            return True, r
    return False, best


def verify_system(system: IntegrableSystem, seed: int = 0) -> Transcript:
    """Exact checks of commutation, conservation, independence and membership."""
    b, d0, m = system.b, system.d0, system.m
    cs = system.vector_fields
    checks: list[Check] = []

    def add(name, bad: str, ok_detail: str = "") -> None:
        checks.append(Check(name, not bad, bad or ok_detail))

    add("dimension", "" if system.p + system.q == m else f"p + q = {system.p + system.q} != {m}",
        f"p={system.p} q={system.q}")
    add("first_field", "" if cs and cs[0] == b else "C1 differs from B")
    d0_bad = "" if d0.is_symmetric() else "D0 not symmetric"
    d0_bad = d0_bad or ("" if (d0 @ b).is_skew() else "D0 B not skew")
    add("d0_contract", d0_bad)

    n = len(cs)
    add("commutation", _first_failure(
        ((f"[C{i + 1}, C{j + 1}] != 0", (i, j)) for i in range(n) for j in range(i + 1, n)),
        lambda i, j: cs[i] @ cs[j] == cs[j] @ cs[i]))
    add("quadratic_symmetric", _first_failure(
        ((f"S{k + 1} not symmetric", (s,)) for k, s in enumerate(system.quadratic_integrals)),
        lambda s: s.is_symmetric()))
    add("quadratic_annihilation", _first_failure(
        ((f"S{k + 1} C{i + 1} not skew", (s, c)) for k, s in enumerate(system.quadratic_integrals)
         for i, c in enumerate(cs)),
        lambda s, c: (s @ c).is_skew()))
    add("linear_annihilation", _first_failure(
        ((f"c{k + 1}^t C{i + 1} != 0", (li.covector, c))
         for k, li in enumerate(system.linear_integrals) for i, c in enumerate(cs)),
        lambda v, c: (v.T @ c).is_zero()))

    b_inv = inverse(b)
    if b_inv is None:
        checks.append(Check("omega_isotropy", True, "skipped: B singular"))
    else:
        w = d0 @ b_inv
        add("omega_isotropy", _first_failure(
            ((f"C{i + 1}^t D0 B^-1 C{j + 1} not skew", (i, j)) for i in range(n) for j in range(i, n)),
            lambda i, j: (cs[i].T @ w @ cs[j]).is_skew()))

    add("witness_consistency", _first_failure(
        ((f"stored Z{i + 1} does not certify (C{i + 1}, H{i + 1})", (c, h, z))
         for i, (c, h, z) in enumerate(zip(cs, system.hamiltonians, system.witnesses))),
        lambda c, h, z: b @ z == c and d0 @ z == h))
    stacked = vstack([b, d0])
    ham_bad = ""
    for i, (c, h) in enumerate(zip(cs, system.hamiltonians)):
        if not h.is_symmetric():
            ham_bad = f"H{i + 1} not symmetric"
            break
        if solve_linear(stacked, vstack([c, h])) is None:
            ham_bad = f"(C{i + 1}, H{i + 1}) not in L"
            break
    add("hamiltonian_membership", ham_bad)
    cas_bad = ""
    for k, li in enumerate(system.linear_integrals):
        if solve_linear(stacked, vstack([RatMatrix.zeros(m, 1), li.covector])) is None:
            cas_bad = f"(0, c{k + 1}) not in L"
            break
    add("casimir_membership", cas_bad)

    rng = random.Random(seed)
    nonzero = [c for c in cs if not c.is_zero()]
    want_p = system.p if not b.is_zero() else len(nonzero)
    ok, got = _generic_rank(lambda u0: [c @ u0 for c in nonzero], want_p, m, rng)
    if len(nonzero) != len(cs) and not b.is_zero():
        ok = False
    note = "B = 0: the mandatory C1 = 0 is exempt" if b.is_zero() else ""
    checks.append(Check("field_independence", ok, f"rank {got} of {system.p}" + (f"; {note}" if note else "")))
    grads = lambda u0: ([s @ u0 for s in system.quadratic_integrals]
                        + [li.covector for li in system.linear_integrals])
    ok, got = _generic_rank(grads, system.q, m, rng)
    checks.append(Check("integral_independence", ok, f"rank {got} of {system.q}"))
    return Transcript(tuple(checks), seed)
