"""Graded free modules, homogeneous maps, presented modules and resolutions.

Grading convention: a free module is stored by its generator degrees, so
S(-t) has generator degree t.  A map's entry (i, j) is zero or homogeneous
of degree ``source[j] - target[i]``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb, factorial

from .groebner import (
    FreeModuleContext,
    GroebnerBasis,
    buchberger,
    hilbert_numerator,
    interreduce,
    minimal_generator_indices,
    syzygy_generators,
    syzygy_vectors,
    _reduce_series,
)
from .linalg import Matrix
from .ring import ANY_DEGREE, NON_HOMOGENEOUS, PolyMatrix, homogeneous_degree


class GradedFreeModule:
    """The module ⊕ S(-t_i), stored as the generator degrees t_i."""

    __slots__ = ("degrees",)

    def __init__(self, degrees=()):
        self.degrees = tuple(int(d) for d in degrees)

    @property
    def rank(self):
        return len(self.degrees)

    def twist(self, k):
        """F(k): generator degrees move down by k."""
        return GradedFreeModule(d - k for d in self.degrees)

    def dual(self, shift=0):
        """Hom(F, S(-shift)), e.g. shift = n+1 for the dualizing twist."""
        return GradedFreeModule(shift - d for d in self.degrees)

    def __add__(self, other):
        return GradedFreeModule(self.degrees + other.degrees)

    def __eq__(self, other):
        return isinstance(other, GradedFreeModule) and self.degrees == other.degrees

    def __hash__(self):
        return hash(self.degrees)

    def __repr__(self):
        return f"GradedFreeModule({list(self.degrees)})"


class GradedMap:
    """Homogeneous matrix between twisted free modules."""

    def __init__(self, matrix, source, target, check=True):
        if matrix.nrows != target.rank or matrix.ncols != source.rank:
            raise ValueError(
                f"matrix shape {matrix.shape} does not match ranks {target.rank}x{source.rank}"
            )
        self.matrix = matrix
        self.source = source
        self.target = target
        if check:
            bad = self.inhomogeneous_entries()
            if bad:
                i, j = bad[0]
                raise ValueError(
                    f"entry ({i},{j}) = {matrix[i, j]} is not homogeneous of degree "
                    f"{source.degrees[j] - target.degrees[i]}"
                )

    @property
    def ring(self):
        return self.matrix.ring

    @classmethod
    def from_columns(cls, source, target, columns, ring, check=True):
        m = PolyMatrix.from_columns(ring, target.rank, columns) if columns else PolyMatrix.zeros(
            ring, target.rank, 0
        )
        return cls(m, source, target, check=check)

    @classmethod
    def identity(cls, module, ring):
        return cls(PolyMatrix.identity(ring, module.rank), module, module)

    @classmethod
    def zero(cls, source, target, ring):
        return cls(PolyMatrix.zeros(ring, target.rank, source.rank), source, target)

    def inhomogeneous_entries(self):
        bad = []
        for i, row in enumerate(self.matrix.rows):
            for j, e in enumerate(row):
                d = homogeneous_degree(e)
                if d is ANY_DEGREE:
                    continue
                if d is NON_HOMOGENEOUS or d != self.source.degrees[j] - self.target.degrees[i]:
                    bad.append((i, j))
        return bad

    def __matmul__(self, other):
        """Composition self ∘ other."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return GradedMap(self.matrix * other.matrix, other.source, self.target, check=False)

    def transpose_dual(self, shift):
        """The map Hom(target, S(-shift)) -> Hom(source, S(-shift))."""
        return GradedMap(
            self.matrix.transpose(), self.target.dual(shift), self.source.dual(shift), check=False
        )

    def twist(self, k):
        return GradedMap(self.matrix, self.source.twist(k), self.target.twist(k), check=False)

    def has_unit_entries(self):
        return any(e.terms and e.is_constant() for r in self.matrix.rows for e in r)

    def columns(self):
        return self.matrix.columns()

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __repr__(self):
        return f"GradedMap({self.target.degrees} <- {self.source.degrees})"


def _binomial_poly(x, m):
    """x choose m as a polynomial in x, valid for negative x."""
    num = 1
    for i in range(m):
        num *= x - i
    return num // factorial(m)


class PresentedModule:
    """The cokernel of a homogeneous presentation map."""

    def __init__(self, presentation):
        self.presentation = presentation

    @classmethod
    def from_columns(cls, target, columns, ring):
        ctx = FreeModuleContext(ring, target.degrees)
        degs = []
        cols = []
        for c in columns:
            d = ctx.vector_degree(ctx.from_column(c))
            if d is None:
                continue
            degs.append(d)
            cols.append(c)
        return cls(GradedMap.from_columns(GradedFreeModule(degs), target, cols, ring))

    @classmethod
    def free(cls, ring, degrees):
        target = GradedFreeModule(degrees)
        return cls(GradedMap.zero(GradedFreeModule(), target, ring))

    @classmethod
    def cokernel(cls, graded_map):
        return cls(graded_map)

    @property
    def ring(self):
        return self.presentation.ring

    @property
    def generators(self):
        return self.presentation.target

    def relations(self):
        return self.presentation.matrix.columns()

    @cached_property
    def _ctx(self):
        return FreeModuleContext(self.ring, self.generators.degrees)

    @cached_property
    def gb(self):
        """Reduced Gröbner basis of the relation submodule."""
        ctx = self._ctx
        run = buchberger(ctx, [v for v in (ctx.from_column(c) for c in self.relations()) if v])
        return GroebnerBasis(ctx, interreduce(ctx, run.elements))

    # Hilbert data from leading terms

    def _leads_by_component(self):
        leads = [[] for _ in self.generators.degrees]
        for comp, exps in self.gb.leading_data():
            leads[comp].append(exps)
        return leads

    def hilbert_function(self, t):
        ring = self.ring
        leads = self._leads_by_component()
        total = 0
        for comp, w in enumerate(self.generators.degrees):
            if t - w < 0:
                continue
            lp = [ring.key_packed(ring.key(e)) for e in leads[comp]]
            if not lp:
                total += ring.num_monomials(t - w)
                continue
            for k in ring.monomial_keys(t - w):
                pk = ring.key_packed(k)
                if not any(ring.divides(a, pk) for a in lp):
                    total += 1
        return total

    @cached_property
    def hilbert_series(self):
        """(numerator dict exponent -> coeff, nvars): HS = num / (1 - z)^nvars."""
        nvars = self.ring.nvars
        num = Counter()
        for comp, w in enumerate(self.generators.degrees):
            q = hilbert_numerator(self._leads_by_component()[comp], nvars)
            for i, c in enumerate(q):
                if c:
                    num[i + w] += c
        return {k: v for k, v in num.items() if v}, nvars

    def _reduced_series(self):
        num, nvars = self.hilbert_series
        if not num:
            return {}, 0
        low = min(num)
        dense = [num.get(low + i, 0) for i in range(max(num) - low + 1)]
        q, dim = _reduce_series(dense, nvars)
        return {low + i: c for i, c in enumerate(q) if c}, dim

    def krull_dimension(self):
        q, dim = self._reduced_series()
        return -1 if not q else dim

    def is_zero(self):
        return self.krull_dimension() < 0

    def is_finite_length(self):
        return self.krull_dimension() <= 0

    def multiplicity(self):
        q, _ = self._reduced_series()
        return sum(q.values())

    def hilbert_polynomial_value(self, t):
        q, dim = self._reduced_series()
        if dim == 0:
            return 0
        return sum(c * _binomial_poly(t - k + dim - 1, dim - 1) for k, c in q.items())

    def standard_basis(self):
        """Degree -> list of standard terms (comp, monomial key); finite length only."""
        if not self.is_finite_length():
            raise ValueError("module is not of finite length")
        ring = self.ring
        leads = self._leads_by_component()
        out = {}
        for comp, w in enumerate(self.generators.degrees):
            lp = [ring.key_packed(ring.key(e)) for e in leads[comp]]
            if any(a == 0 for a in lp):
                continue
            deg = 0
            while True:
                found = False
                for k in ring.monomial_keys(deg):
                    pk = ring.key_packed(k)
                    if not any(ring.divides(a, pk) for a in lp):
                        out.setdefault(deg + w, []).append((comp, k))
                        found = True
                if not found:
                    break
                deg += 1
        for d in out:
            out[d].sort(key=lambda ck: (ck[0], -ck[1]))
        return out

    def twist(self, k):
        return twist(self, k)

    def __repr__(self):
        return f"PresentedModule(gens={list(self.generators.degrees)}, relations={self.presentation.source.rank})"


# basic constructions


def twist(M, k):
    """M(k), so that twist(M, k)_t = M_{t+k}."""
    return PresentedModule(M.presentation.twist(k))


def direct_sum(A, B):
    ring = A.ring
    pa, pb = A.presentation, B.presentation
    za = PolyMatrix.zeros(ring, pa.target.rank, pb.source.rank)
    zb = PolyMatrix.zeros(ring, pb.target.rank, pa.source.rank)
    top = pa.matrix.hstack(za) if pa.target.rank else None
    rows = []
    if pa.target.rank:
        rows.extend(top.rows)
    if pb.target.rank:
        rows.extend(zb.hstack(pb.matrix).rows)
    m = PolyMatrix(ring, rows, pa.source.rank + pb.source.rank)
    return PresentedModule(GradedMap(m, pa.source + pb.source, pa.target + pb.target, check=False))


def quotient_by_hypersurface(M, F):
    """Presentation of M / F M: append F times every generator."""
    d = homogeneous_degree(F)
    if d is NON_HOMOGENEOUS or d is ANY_DEGREE:
        raise ValueError("F must be a nonzero homogeneous polynomial")
    ring = M.ring
    tgt = M.generators
    extra = PolyMatrix.identity(ring, tgt.rank, F)
    m = M.presentation.matrix.hstack(extra)
    src = M.presentation.source + GradedFreeModule(t + d for t in tgt.degrees)
    return PresentedModule(GradedMap(m, src, tgt, check=False))


def tensor_modules(A, B):
    """Presentation of A ⊗ B on the generators e_i ⊗ f_j (index i * rank B + j)."""
    ring = A.ring
    if B.ring != ring:
        raise ValueError("modules over different rings")
    ta, tb = A.generators.degrees, B.generators.degrees
    ra, rb = len(ta), len(tb)
    target = GradedFreeModule(a + b for a in ta for b in tb)
    zero = ring.zero()
    cols = []
    degs = []
    for c, col in enumerate(A.relations()):
        sc = A.presentation.source.degrees[c]
        for j in range(rb):
            v = [zero] * (ra * rb)
            for i in range(ra):
                v[i * rb + j] = col[i]
            cols.append(v)
            degs.append(sc + tb[j])
    for c, col in enumerate(B.relations()):
        sc = B.presentation.source.degrees[c]
        for i in range(ra):
            v = [zero] * (ra * rb)
            for j in range(rb):
                v[i * rb + j] = col[j]
            cols.append(v)
            degs.append(ta[i] + sc)
    return PresentedModule(GradedMap.from_columns(GradedFreeModule(degs), target, cols, ring, check=False))


def exterior_square(M):
    """Λ²M: the matrix of 2x2 minors on the ordered bases e_a ∧ e_b (a < b)."""
    m = M.matrix
    if m.nrows != m.ncols:
        raise ValueError("exterior_square needs a square map")
    if m.nrows < 2:
        raise ValueError("exterior_square needs size at least 2")
    rows_idx = list(combinations(range(m.nrows), 2))
    cols_idx = list(combinations(range(m.ncols), 2))
    out = []
    for i, j in rows_idx:
        row = []
        for a, b in cols_idx:
            row.append(m[i, a] * m[j, b] - m[i, b] * m[j, a])
        out.append(row)
    src = GradedFreeModule(M.source.degrees[a] + M.source.degrees[b] for a, b in cols_idx)
    tgt = GradedFreeModule(M.target.degrees[i] + M.target.degrees[j] for i, j in rows_idx)
    return GradedMap(PolyMatrix(m.ring, out, len(cols_idx)), src, tgt, check=False)


# graded pieces by plain linear algebra


@dataclass
class GradedPiece:
    dimension: int
    basis: list
    matrix: Matrix


def free_basis(ring, module, t):
    """Terms (comp, monomial key) spanning the degree-t piece of a free module."""
    out = []
    for comp, w in enumerate(module.degrees):
        for k in ring.monomial_keys(t - w):
            out.append((comp, k))
    return out


def map_slice(graded_map, t):
    """Matrix of the degree-t piece of a graded map, in monomial bases."""
    ring = graded_map.ring
    field = ring.field
    src_basis = free_basis(ring, graded_map.source, t)
    tgt_basis = free_basis(ring, graded_map.target, t)
    index = {b: i for i, b in enumerate(tgt_basis)}
    cols = graded_map.matrix.columns()
    rows = [[field(0)] * len(src_basis) for _ in tgt_basis]
    for jj, (comp, k) in enumerate(src_basis):
        for i, poly in enumerate(cols[comp]):
            for kk, c in poly.terms.items():
                rows[index[(i, kk + k)]][jj] = c
    return Matrix(field, rows, len(src_basis)), src_basis, tgt_basis


def graded_piece(M, t):
    """Dimension of M_t as the corank of the degree-t slice of the presentation."""
    mat, _, basis = map_slice(M.presentation, t)
    return GradedPiece(len(basis) - mat.rank(), basis, mat)


# presentations and resolutions


def prune(graded_map):
    """Eliminate unit entries of a presentation; the cokernel is unchanged."""
    ring = graded_map.ring
    field = ring.field
    rows = [list(r) for r in graded_map.matrix.rows]
    tdeg = list(graded_map.target.degrees)
    sdeg = list(graded_map.source.degrees)
    ncols = len(sdeg)
    while True:
        hit = None
        for i, r in enumerate(rows):
            for j, e in enumerate(r):
                if e.terms and e.is_constant():
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            break
        i, j = hit
        inv = field.inv(rows[i][j].constant_term())
        pivot_col = [r[j] for r in rows]
        for k in range(ncols):
            if k == j or not rows[i][k].terms:
                continue
            f = rows[i][k].scale(inv)
            for a in range(len(rows)):
                if pivot_col[a].terms:
                    rows[a][k] = rows[a][k] - f * pivot_col[a]
        rows = [r[:j] + r[j + 1:] for a, r in enumerate(rows) if a != i]
        del tdeg[i]
        del sdeg[j]
        ncols -= 1
    m = PolyMatrix(ring, rows, ncols)
    return GradedMap(m, GradedFreeModule(sdeg), GradedFreeModule(tdeg), check=False)


class BettiTable:
    """Graded Betti numbers: (homological index, internal degree) -> count."""

    def __init__(self, data):
        self.data = {k: v for k, v in data.items() if v}

    @classmethod
    def from_modules(cls, modules):
        data = Counter()
        for i, F in enumerate(modules):
            for d in F.degrees:
                data[(i, d)] += 1
        return cls(data)

    def total(self, i):
        return sum(v for (j, _), v in self.data.items() if j == i)

    def twists(self, i):
        return sorted(d for (j, d), v in self.data.items() if j == i for _ in range(v))

    def length(self):
        return max((i for i, _ in self.data), default=-1)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.data == other.data

    def __repr__(self):
        return f"BettiTable({dict(sorted(self.data.items()))})"

    def render(self):
        """Macaulay2-style display: row r holds beta_{i, i+r}."""
        if not self.data:
            return "total: 0"
        idx = range(self.length() + 1)
        rows = sorted({d - i for i, d in self.data})
        width = max(len(str(v)) for v in self.data.values()) + 1
        width = max(width, len(str(self.length())) + 1)
        lines = ["       " + "".join(str(i).rjust(width) for i in idx)]
        lines.append("total: " + "".join(str(self.total(i)).rjust(width) for i in idx))
        for r in rows:
            cells = []
            for i in idx:
                v = self.data.get((i, i + r), 0)
                cells.append(("." if not v else str(v)).rjust(width))
            lines.append(f"{r:>5}: " + "".join(cells))
        return "\n".join(lines)


class NotMinimalError(ValueError):
    pass


class FreeResolution:
    """Free modules F_0 <- F_1 <- ... <- F_L with maps ``maps[i]: F_{i+1} -> F_i``."""

    def __init__(self, module, maps, minimal, truncated=False, base=None):
        self.module = module
        self.maps = list(maps)
        self.minimal = minimal
        self.truncated = truncated
        self.base = base

    @property
    def ring(self):
        return self.module.ring

    @property
    def free_modules(self):
        if not self.maps:
            return [self.base if self.base is not None else self.module.generators]
        return [self.maps[0].target] + [m.source for m in self.maps]

    def __len__(self):
        return len(self.maps)

    def betti_table(self):
        return betti_table(self)

    def composites_vanish(self):
        return all((a @ b).matrix.is_zero() for a, b in zip(self.maps, self.maps[1:]))

    def verify_exactness(self):
        """im d_{i+1} = ker d_i at every spot, by Gröbner membership both ways."""
        if not self.composites_vanish():
            return False
        for i, d in enumerate(self.maps):
            kernel = syzygy_generators(d)
            if i + 1 < len(self.maps):
                img = PresentedModule(self.maps[i + 1])
                gb = img.gb
                if not all(gb.contains_column(c) for c in kernel.columns()):
                    return False
            elif kernel.source.rank and not self.truncated:
                return False
        return True


def minimal_resolution(M, max_length=None):
    """Minimal graded free resolution of ``M`` up to length ``max_length``.

    Each step selects minimal generators of the current syzygy module while
    tracking the relations among them, so every map is minimal by
    construction.  ``truncated`` is set when syzygies remain at the cut.
    """
    ring = M.ring
    if max_length is None:
        max_length = ring.nvars
    pres = prune(M.presentation)
    target = pres.target
    ctx = FreeModuleContext(ring, target.degrees)
    gens = [v for v in (ctx.from_column(c) for c in pres.matrix.columns()) if v]
    maps = []
    truncated = False
    level = 0
    while gens:
        if level == max_length:
            truncated = True
            break
        run = buchberger(ctx, gens, track=True, drop_redundant=True)
        if not run.accepted:
            break
        source = GradedFreeModule(run.source_weights)
        cols = [ctx.to_column(gens[i]) for i in run.accepted]
        maps.append(GradedMap.from_columns(source, target, cols, ring, check=False))
        target = source
        ctx = FreeModuleContext(ring, source.degrees)
        gens = run.syzygies
        level += 1
    return FreeResolution(M, maps, minimal=True, truncated=truncated, base=pres.target)


def minimalize(R):
    """Cancel unit entries of a resolution by change of basis; result is minimal."""
    ring = R.ring
    field = ring.field
    mods = [list(F.degrees) for F in R.free_modules]
    mats = [[list(r) for r in d.matrix.rows] for d in R.maps]
    while True:
        hit = None
        for k, m in enumerate(mats):
            for i, r in enumerate(m):
                for j, e in enumerate(r):
                    if e.terms and e.is_constant():
                        hit = (k, i, j)
                        break
                if hit:
                    break
            if hit:
                break
        if hit is None:
            break
        k, i, j = hit
        m = mats[k]
        inv = field.inv(m[i][j].constant_term())
        pivot_col = [r[j] for r in m]
        new = []
        for a, r in enumerate(m):
            if a == i:
                continue
            row = []
            for b, e in enumerate(r):
                if b == j:
                    continue
                if pivot_col[a].terms and m[i][b].terms:
                    e = e - pivot_col[a] * m[i][b].scale(inv)
                row.append(e)
            new.append(row)
        mats[k] = new
        if k + 1 < len(mats):
            mats[k + 1] = [r for a, r in enumerate(mats[k + 1]) if a != j]
        if k > 0:
            mats[k - 1] = [[e for b, e in enumerate(r) if b != i] for r in mats[k - 1]]
        del mods[k + 1][j]
        del mods[k][i]
    maps = []
    for k, m in enumerate(mats):
        src = GradedFreeModule(mods[k + 1])
        tgt = GradedFreeModule(mods[k])
        maps.append(GradedMap(PolyMatrix(ring, m, src.rank), src, tgt, check=False))
    # drop trailing zero modules
    while maps and maps[-1].source.rank == 0:
        maps.pop()
    return FreeResolution(R.module, maps, minimal=True, truncated=R.truncated,
                          base=GradedFreeModule(mods[0]))


def betti_table(R):
    if not R.minimal or any(d.has_unit_entries() for d in R.maps):
        raise NotMinimalError("Betti numbers need a minimal resolution")
    return BettiTable.from_modules(R.free_modules)


# kernels, images and subquotients


def kernel_columns(graded_map):
    return syzygy_generators(graded_map)


def relations_of_subquotient(target, K_cols, K_degrees, B_cols, ring):
    """Relations on the generators K of (im K + im B) / im B.

    The relations are the K-parts of the syzygies of the block matrix [K | B].
    """
    ctx = FreeModuleContext(ring, target.degrees)
    vecs = [ctx.from_column(c) for c in K_cols] + [ctx.from_column(c) for c in B_cols]
    src_w = list(K_degrees) + [
        ctx.vector_degree(ctx.from_column(c)) if any(p.terms for p in c) else 0 for c in B_cols
    ]
    syz, src_ctx = syzygy_vectors(ctx, vecs, src_w)
    nk = len(K_cols)
    kctx = FreeModuleContext(ring, K_degrees)
    rel = []
    for s in syz:
        part = {}
        for t, c in s.items():
            comp, k = src_ctx.split(t)
            if comp < nk:
                part[kctx.term(comp, k)] = c
        if part:
            rel.append(part)
    if rel:
        keep = minimal_generator_indices(kctx, rel)
        rel = [rel[i] for i in keep]
    return [kctx.to_column(r) for r in rel], [kctx.vector_degree(r) for r in rel]


def image_module(A_cols, A_degrees, target, B_cols, ring):
    """The image of F_A --A--> coker(B), presented on F_A."""
    cols, degs = relations_of_subquotient(target, A_cols, A_degrees, B_cols, ring)
    return PresentedModule(GradedMap.from_columns(GradedFreeModule(degs), GradedFreeModule(A_degrees), cols, ring, check=False))


def submodule_quotient_by_variable(target, columns, v, ring):
    """Generators of U : x_v for U the span of ``columns``."""
    x = ring.var(v)
    zero = ring.zero()
    rank = target.rank
    eye = [[x if i == j else zero for i in range(rank)] for j in range(rank)]
    degs = [d for d in target.degrees]
    rel, _ = relations_of_subquotient(target, eye, [d + 1 for d in degs], columns, ring)
    # relations live on generators x_v e_j: they are exactly U : x_v as columns in F
    return rel


def intersect_submodules(target, spans, ring):
    """Generators of the intersection of the spans (lists of columns) in ``target``."""
    ctx = FreeModuleContext(ring, target.degrees)
    current = spans[0]
    for other in spans[1:]:
        a_degs = [ctx.vector_degree(ctx.from_column(c)) for c in current]
        rel, _ = relations_of_subquotient(target, current, a_degs, other, ring)
        a = PolyMatrix.from_columns(ring, target.rank, current) if current else None
        new = []
        for r in rel:
            col = [ring.zero()] * target.rank
            for idx, coef in enumerate(r):
                if coef.terms:
                    for i in range(target.rank):
                        if current[idx][i].terms:
                            col[i] = col[i] + coef * current[idx][i]
            if any(p.terms for p in col):
                new.append(col)
        current = new
        if not current:
            break
    return current


def saturation(M):
    """Presented module F / (U : m^inf) and the degree from which it agrees with M."""
    ring = M.ring
    target = M.generators
    ctx = FreeModuleContext(ring, target.degrees)
    current = [c for c in M.relations() if any(p.terms for p in c)]

    def contains(cols, other):
        if not cols:
            return not other
        gb = PresentedModule.from_columns(target, cols, ring).gb
        return all(gb.contains_column(c) for c in other)

    while True:
        per_var = [submodule_quotient_by_variable(target, current, v, ring) for v in range(ring.nvars)]
        if any(not s for s in per_var):
            new = []
        else:
            new = intersect_submodules(target, per_var, ring)
        if contains(current, new):
            break
        current = new
    sat = PresentedModule.from_columns(target, current, ring)
    # the torsion part has a polynomial Hilbert series; its degree bounds the disagreement
    num_m, _ = M.hilbert_series
    num_s, _ = sat.hilbert_series
    diff = Counter(num_m)
    diff.subtract(num_s)
    diff = {k: v for k, v in diff.items() if v}
    if not diff:
        return sat, min(target.degrees, default=0)
    # torsion series = diff / (1 - z)^N is a polynomial; find its top degree
    N = ring.nvars
    low = min(diff)
    dense = [diff.get(low + i, 0) for i in range(max(diff) - low + 1)]
    for _ in range(N):
        q = []
        acc = 0
        for c in dense[:-1]:
            acc += c
            q.append(acc)
        dense = q
    while dense and dense[-1] == 0:
        dense.pop()
    return sat, low + len(dense)
