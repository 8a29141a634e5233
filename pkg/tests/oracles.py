"""Brute-force oracles that avoid the Gröbner engine entirely.

Everything here is plain linear algebra on graded pieces of free modules,
done directly with python-flint.
"""

from itertools import combinations_with_replacement

import flint


def _mat(field, rows, ncols):
    nrows = len(rows)
    flat = [c for r in rows for c in r]
    if field.p is None:
        return flint.fmpq_mat(nrows, ncols, [flint.fmpq(c.numerator, c.denominator) for c in flat])
    return flint.nmod_mat(nrows, ncols, [int(c) for c in flat], field.p)


def rank(field, rows, ncols):
    if not rows or not ncols:
        return 0
    return _mat(field, rows, ncols).rank()


def left_kernel(field, rows, ncols):
    """Rows y with y A = 0 for A given by ``rows`` (an nrows x ncols matrix)."""
    nrows = len(rows)
    if nrows == 0:
        return []
    if ncols == 0:
        return [[field(int(i == j)) for j in range(nrows)] for i in range(nrows)]
    At = _mat(field, [list(c) for c in zip(*rows)], nrows)
    x, nullity = At.nullspace()
    out = []
    for j in range(nullity):
        col = []
        for i in range(nrows):
            v = x[i, j]
            col.append(field(int(v)) if field.p is not None else field(flint_fraction(v)))
        out.append(col)
    return out


def flint_fraction(v):
    from fractions import Fraction

    return Fraction(int(v.p), int(v.q))


def monomials(nvars, degree):
    """Exponent tuples of the given degree, in a fixed order."""
    if degree < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return out


def poly_terms(p):
    """{exponent tuple: coefficient} of a Polynomial."""
    return {tuple(e): c for e, c in p.sorted_terms()}


class FreePiece:
    """Degree-t piece of ⊕ S(-w_i) with an explicit monomial basis."""

    def __init__(self, nvars, weights, t):
        self.basis = [(i, m) for i, w in enumerate(weights) for m in monomials(nvars, t - w)]
        self.index = {b: k for k, b in enumerate(self.basis)}

    def __len__(self):
        return len(self.basis)


def multiplication_matrix(field, nvars, matrix, src_weights, tgt_weights, t):
    """Matrix of the degree-t slice of a polynomial matrix (target rows, source columns)."""
    src = FreePiece(nvars, src_weights, t)
    tgt = FreePiece(nvars, tgt_weights, t)
    rows = [[field(0)] * len(src) for _ in range(len(tgt))]
    for col, (j, m) in enumerate(src.basis):
        for i in range(len(tgt_weights)):
            for e, c in poly_terms(matrix[i][j]).items():
                mono = tuple(a + b for a, b in zip(e, m))
                rows[tgt.index[(i, mono)]][col] = (rows[tgt.index[(i, mono)]][col] + c)
    if field.p is not None:
        rows = [[x % field.p for x in r] for r in rows]
    return rows, src, tgt


def cokernel_dim(field, nvars, matrix, src_weights, tgt_weights, t):
    rows, src, tgt = multiplication_matrix(field, nvars, matrix, src_weights, tgt_weights, t)
    return len(tgt) - rank(field, rows, len(src))


def ideal_quotient_dim(field, nvars, gens, t):
    """dim (S/I)_t for I generated by homogeneous ``gens``."""
    degs = [sum(next(iter(poly_terms(g)))) for g in gens]
    return cokernel_dim(field, nvars, [list(gens)], degs, [0], t)


class CokernelPieces:
    """Graded pieces of coker(phi: ⊕S(-s) -> ⊕S(-t)) with quotient projections."""

    def __init__(self, field, nvars, phi_rows, s, t):
        self.field = field
        self.nvars = nvars
        self.phi = phi_rows
        self.s = list(s)
        self.t = list(t)
        self._proj = {}

    def projection(self, u):
        """Rows Q with ker Q = im phi in degree u, plus the free basis of degree u."""
        if u not in self._proj:
            rows, _, tgt = multiplication_matrix(self.field, self.nvars, self.phi, self.s, self.t, u)
            ncols = len(rows[0]) if rows else 0
            Q = left_kernel(self.field, rows, ncols) if len(tgt) else []
            self._proj[u] = (Q, tgt)
        return self._proj[u]

    def dim(self, u):
        return len(self.projection(u)[0])


def _hom_map(field, nvars, E, entries, a_degs, b_degs, k):
    """Rank of h -> h∘delta from ⊕_i E_{k+a_i} to ⊕_j E_{k+b_j}.

    ``entries[i][j]`` is delta_ij, of degree b_j - a_i; (h∘delta)_j = Σ_i delta_ij h_i.
    The map is evaluated on the free cover of the source and projected onto
    the target quotient, which has the same rank as the induced map.
    """
    src_pieces = [E.projection(k + a)[1] for a in a_degs]
    tgt_proj = [E.projection(k + b) for b in b_degs]
    ncols = sum(len(p) for p in src_pieces)
    nfree = sum(len(tgt) for _, tgt in tgt_proj)
    nrows = sum(len(Q) for Q, _ in tgt_proj)
    if not ncols or not nrows:
        return 0
    img = [[field(0)] * ncols for _ in range(nfree)]
    col0 = 0
    for i, piece in enumerate(src_pieces):
        row0 = 0
        for j, (_, tgt) in enumerate(tgt_proj):
            terms = poly_terms(entries[i][j])
            for c, (comp, m) in enumerate(piece.basis):
                for e, coef in terms.items():
                    mono = tuple(x + y for x, y in zip(e, m))
                    r = row0 + tgt.index[(comp, mono)]
                    img[r][col0 + c] = img[r][col0 + c] + coef
            row0 += len(tgt)
        col0 += len(piece)
    proj = [[field(0)] * nfree for _ in range(nrows)]
    r0 = c0 = 0
    for Q, tgt in tgt_proj:
        for qi, qrow in enumerate(Q):
            proj[r0 + qi][c0:c0 + len(tgt)] = qrow
        r0 += len(Q)
        c0 += len(tgt)
    if field.p is not None:
        img = [[x % field.p for x in r] for r in img]
    return (_mat(field, proj, nfree) * _mat(field, img, ncols)).rank()


def end_cohomology(mf, k):
    """(dim Ext^1_X(E, E(k)), dim Ext^2_X(E, E(k))) from the 2-periodic resolution of E.

    Hom(-, E(k)) applied to F0 <- F1 <- F0(-d) <- F1(-d) gives
    ⊕E_{k+t} -> ⊕E_{k+s} -> ⊕E_{k+t+d} -> ⊕E_{k+s+d}; for n >= 4 its
    cohomology in the middle computes H^1 and H^2 of End(E)(k).
    """
    ring = mf.context.ring
    field = ring.field
    nvars = ring.nvars
    d = mf.context.d
    phi = [list(r) for r in mf.phi.matrix.rows]
    psi = [list(r) for r in mf.psi.matrix.rows]
    t = list(mf.phi.target.degrees)
    s = list(mf.phi.source.degrees)
    E = CokernelPieces(field, nvars, phi, s, t)
    r = len(t)
    # delta entries indexed [source summand i][target summand j] of h -> h∘delta
    phi_T = [[phi[i][j] for j in range(r)] for i in range(r)]  # h_i (deg t_i) -> slot j (deg s_j)
    psi_T = [[psi[j][i] for i in range(r)] for j in range(r)]  # h_j (deg s_j) -> slot i (deg t_i + d)
    r01 = _hom_map(field, nvars, E, phi_T, t, s, k)
    r12 = _hom_map(field, nvars, E, psi_T, s, [x + d for x in t], k)
    r23 = _hom_map(field, nvars, E, phi_T, [x + d for x in t], [x + d for x in s], k)
    dim1 = sum(E.dim(k + x) for x in s)
    dim2 = sum(E.dim(k + x + d) for x in t)
    return dim1 - r12 - r01, dim2 - r23 - r12
