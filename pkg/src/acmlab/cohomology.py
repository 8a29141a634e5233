"""Sheaf cohomology on projective space through graded local duality.

For a graded module M over S = k[x_0..x_n] and i >= 1,

    dim H^i(P^n, M~(k)) = dim Ext^{n-i}_S(M, S(-n-1))_{-k},

and each Ext module is computed in full, so one computation covers every
twist.  Finite-length cohomology modules carry their variable actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .groebner import FreeModuleContext, syzygy_generators
from .homalg import (
    GradedFreeModule,
    GradedMap,
    PresentedModule,
    minimal_resolution,
    relations_of_subquotient,
)
from .linalg import Matrix
from .ring import ANY_DEGREE, NON_HOMOGENEOUS, homogeneous_degree


class NotFiniteLengthError(ValueError):
    def __init__(self, message, hilbert_series=None, krull_dimension=None):
        super().__init__(message)
        self.hilbert_series = hilbert_series
        self.krull_dimension = krull_dimension


def resolution_of(M):
    """Minimal resolution of ``M``, cached on the module."""
    res = M.__dict__.get("_resolution")
    if res is None:
        res = minimal_resolution(M)
        M.__dict__["_resolution"] = res
    return res


@dataclass
class ExtModule:
    """Ext^j_S(M, S(-n-1)) as a presented module."""

    module: PresentedModule
    j: int
    n: int

    def dim(self, t):
        return self.module.hilbert_function(t)

    def is_zero(self):
        return self.module.is_zero()

    def is_finite_length(self):
        return self.module.is_finite_length()

    def support(self):
        """Degree -> dimension; finite length only."""
        return {t: len(b) for t, b in self.module.standard_basis().items()}


def ext_module(M, j):
    cache = M.__dict__.setdefault("_ext", {})
    if j in cache:
        return cache[j]
    ring = M.ring
    n = ring.nvars - 1
    R = resolution_of(M)
    L = len(R.maps)
    if j < 0 or j > L:
        out = ExtModule(PresentedModule.free(ring, []), j, n)
        cache[j] = out
        return out
    mods = R.free_modules
    shift = n + 1
    dual_j = mods[j].dual(shift)
    if j == L:
        pres = R.maps[j - 1].transpose_dual(shift) if j >= 1 else GradedMap.zero(
            GradedFreeModule(), dual_j, ring
        )
        out = ExtModule(PresentedModule(pres), j, n)
        cache[j] = out
        return out
    kernel = syzygy_generators(R.maps[j].transpose_dual(shift))
    k_cols = kernel.matrix.columns()
    k_degs = list(kernel.source.degrees)
    b_cols = R.maps[j - 1].transpose_dual(shift).matrix.columns() if j >= 1 else []
    if not k_cols:
        out = ExtModule(PresentedModule.free(ring, []), j, n)
    else:
        rel, rel_degs = relations_of_subquotient(dual_j, k_cols, k_degs, b_cols, ring)
        target = GradedFreeModule(k_degs)
        out = ExtModule(
            PresentedModule(GradedMap.from_columns(GradedFreeModule(rel_degs), target, rel, ring, check=False)),
            j,
            n,
        )
    cache[j] = out
    return out


def sheaf_cohomology_dim(M, i, k):
    n = M.ring.nvars - 1
    if not 1 <= i <= n:
        raise ValueError(f"cohomological index must lie in [1, {n}], got {i}")
    return ext_module(M, n - i).dim(-k)


def h0_dim(M, k):
    """dim H^0(M~(k)) = dim M_k - dim H^0_m(M)_k + dim H^1_m(M)_k."""
    n = M.ring.nvars - 1
    return M.hilbert_function(k) - ext_module(M, n + 1).dim(-k) + ext_module(M, n).dim(-k)


def cohomology_dim(M, i, k):
    return h0_dim(M, k) if i == 0 else sheaf_cohomology_dim(M, i, k)


def euler_characteristic(M, k):
    n = M.ring.nvars - 1
    return sum((-1) ** i * cohomology_dim(M, i, k) for i in range(n + 1))


@dataclass
class CohomologyTable:
    n: int
    window: tuple
    data: dict

    def row(self, i):
        return [self.data[(i, k)] for k in range(self.window[0], self.window[1] + 1)]

    def render(self):
        lo, hi = self.window
        ks = list(range(lo, hi + 1))
        width = max([len(str(v)) for v in self.data.values()] + [len(str(k)) for k in ks]) + 1
        lines = ["  k: " + "".join(str(k).rjust(width) for k in ks)]
        for i in range(self.n, -1, -1):
            lines.append(f"h^{i}: " + "".join(str(self.data[(i, k)]).rjust(width) for k in ks))
        return "\n".join(lines)

    def to_json(self):
        return {f"{i},{k}": v for (i, k), v in sorted(self.data.items())}


def cohomology_table(M, window, top=None):
    """h^i(M~(k)) for 0 <= i <= top (default n) and k in the closed window."""
    n = M.ring.nvars - 1
    top = n if top is None else top
    lo, hi = window
    data = {}
    for i in range(top + 1):
        for k in range(lo, hi + 1):
            data[(i, k)] = cohomology_dim(M, i, k)
    return CohomologyTable(top, (lo, hi), data)


# finite-length modules with their multiplication


@dataclass
class FiniteLengthGradedModule:
    """dims: degree -> dimension; mult[v][t]: matrix of x_v from degree t to t+1."""

    ring: object
    dims: dict
    mult: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.dims = {t: d for t, d in self.dims.items() if d}

    @property
    def window(self):
        if not self.dims:
            return None
        return min(self.dims), max(self.dims)

    def dim(self, t):
        return self.dims.get(t, 0)

    def is_zero(self):
        return not self.dims

    def variable_matrix(self, v, t):
        field = self.ring.field
        m = self.mult.get(v, {}).get(t)
        if m is None:
            return Matrix.zeros(field, self.dim(t + 1), self.dim(t))
        return m

    def commutes(self):
        """x_i x_j = x_j x_i on every graded piece."""
        nv = self.ring.nvars
        for t in self.dims:
            for i in range(nv):
                for j in range(i + 1, nv):
                    a = self.variable_matrix(j, t + 1) * self.variable_matrix(i, t)
                    b = self.variable_matrix(i, t + 1) * self.variable_matrix(j, t)
                    if a != b:
                        return False
        return True


def _ext_multiplication(E):
    """Standard basis per degree and the variable matrices of a finite-length module."""
    M = E.module
    ring = M.ring
    field = ring.field
    basis = M.standard_basis()
    index = {t: {bk: i for i, bk in enumerate(b)} for t, b in basis.items()}
    gb = M.gb
    ctx = gb.ctx
    mult = {}
    for v in range(ring.nvars):
        xk = next(iter(ring.var(v).terms))
        mult[v] = {}
        for t, b in basis.items():
            tgt = index.get(t + 1)
            if not tgt:
                continue
            rows = [[field(0)] * len(b) for _ in tgt]
            for col, (comp, k) in enumerate(b):
                nf = gb.reduce_vector({ctx.term(comp, k + xk): field(1)})
                for term, c in nf.items():
                    rows[tgt[ctx.split(term)]][col] = c
            mult[v][t] = Matrix(field, rows, len(b))
    return basis, mult


def finite_length_module(M, i):
    """⊕_k H^i(M~(k)) with its module structure, for 1 <= i <= n."""
    n = M.ring.nvars - 1
    if not 1 <= i <= n:
        raise ValueError(f"cohomological index must lie in [1, {n}], got {i}")
    E = ext_module(M, n - i)
    if not E.is_finite_length():
        raise NotFiniteLengthError(
            f"Ext^{n - i} is not of finite length",
            hilbert_series=E.module.hilbert_series,
            krull_dimension=E.module.krull_dimension(),
        )
    basis, emult = _ext_multiplication(E)
    dims = {-t: len(b) for t, b in basis.items()}
    mult = {}
    for v, per in emult.items():
        # x_v : N_k -> N_{k+1} is dual to x_v : E_{-k-1} -> E_{-k}
        mult[v] = {-(t + 1): m.transpose() for t, m in per.items()}
    return FiniteLengthGradedModule(M.ring, dims, mult)


def multiplication_action(N, g):
    """Degree -> matrix of multiplication by the homogeneous form g on N."""
    deg = homogeneous_degree(g)
    if deg is NON_HOMOGENEOUS:
        raise ValueError("g must be homogeneous")
    ring = N.ring
    field = ring.field
    out = {}
    for t in sorted(N.dims):
        acc = Matrix.zeros(field, N.dim(t + (0 if deg is ANY_DEGREE else deg)), N.dim(t))
        if deg is ANY_DEGREE:
            out[t] = acc
            continue
        for k, c in g.terms.items():
            exps = ring.key_exps(k)
            m = Matrix.identity(field, N.dim(t))
            s = t
            for v, e in enumerate(exps):
                for _ in range(e):
                    m = N.variable_matrix(v, s) * m
                    s += 1
            acc = acc + m.scale(c)
        out[t] = acc
    return out


def is_cyclic_generated_in(N, t0):
    if N.dim(t0) != 1 or any(t < t0 for t in N.dims):
        return False
    field = N.ring.field
    span = [[field(1)]]
    t = t0
    hi = max(N.dims)
    while t < hi:
        images = []
        for v in range(N.ring.nvars):
            m = N.variable_matrix(v, t)
            for vec in span:
                images.append([sum(m.rows[r][c] * vec[c] for c in range(len(vec))) for r in range(m.nrows)])
        if field.p is not None:
            images = [[x % field.p for x in vec] for vec in images]
        t += 1
        d = N.dim(t)
        if d == 0:
            span = []
            continue
        basis = Matrix(field, images, d).rref()[0].rows if images else []
        if len(basis) != d:
            return False
        span = basis
    return True


@dataclass
class DualityReport:
    ok: bool
    pairs: list

    def __bool__(self):
        return self.ok


def duality_symmetry_check(N, d, n, H1=None):
    """n = 5: dim N_k = dim N_{d-6-k}; n = 4: dim H1_k = dim N_{d-5-k} for the H^1 module H1."""
    if n == 5:
        ks = set(N.dims) | {d - 6 - k for k in N.dims}
        pairs = [(k, N.dim(k), N.dim(d - 6 - k)) for k in sorted(ks)]
    elif n == 4:
        if H1 is None:
            raise ValueError("n = 4 needs the H^1 module for comparison")
        ks = set(H1.dims) | {d - 5 - k for k in N.dims}
        pairs = [(k, H1.dim(k), N.dim(d - 5 - k)) for k in sorted(ks)]
    else:
        raise ValueError(f"unsupported ambient dimension n = {n}")
    return DualityReport(all(a == b for _, a, b in pairs), pairs)
