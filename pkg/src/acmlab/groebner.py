"""Gröbner bases of homogeneous submodules of graded free modules.

Vectors are dicts from term keys to coefficients.  A term key packs the
component index into the low bits and the weighted monomial key above it,
so that key comparison is the module order (weighted degree, then grevlex,
then component) and multiplying by a monomial adds a constant to every key.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from itertools import combinations

from .ring import ANY_DEGREE, NON_HOMOGENEOUS, Polynomial, homogeneous_degree

COMP_BITS = 16
COMP_MASK = (1 << COMP_BITS) - 1


class FreeModuleContext:
    """Term-key encoding for the free module with generator degrees ``weights``."""

    def __init__(self, ring, weights):
        if len(weights) > COMP_MASK:
            raise OverflowError("too many components")
        self.ring = ring
        self.weights = tuple(weights)
        self.offsets = tuple(w * ring.base for w in self.weights)

    def term(self, comp, k):
        return ((k + self.offsets[comp]) << COMP_BITS) | comp

    def split(self, t):
        comp = t & COMP_MASK
        return comp, (t >> COMP_BITS) - self.offsets[comp]

    def term_degree(self, t):
        r = self.ring
        return ((t >> COMP_BITS) + r.base - 1) >> r.shift

    def from_column(self, column):
        if len(column) != len(self.weights):
            raise ValueError("column length does not match module rank")
        vec = {}
        for comp, poly in enumerate(column):
            off = self.offsets[comp]
            for k, c in poly.terms.items():
                vec[((k + off) << COMP_BITS) | comp] = c
        return vec

    def to_column(self, vec):
        ring = self.ring
        parts = [dict() for _ in self.weights]
        for t, c in vec.items():
            comp, k = self.split(t)
            parts[comp][k] = c
        return [Polynomial(ring, d) for d in parts]

    def basis_vector(self, comp):
        return {self.term(comp, 0): self.ring.field(1)}

    def vector_degree(self, vec):
        """Common degree of the terms of ``vec``; raises if inhomogeneous."""
        degs = {self.term_degree(t) for t in vec}
        if len(degs) > 1:
            raise ValueError("inhomogeneous vector")
        return degs.pop() if degs else None


def _shift(vec, q):
    return {t + q: c for t, c in vec.items()}


class _Element:
    __slots__ = ("vec", "lead", "comp", "k", "packed", "exps", "degree", "tail", "rep")

    def __init__(self, ctx, vec, rep):
        self.vec = vec
        self.lead = max(vec)
        self.comp, self.k = ctx.split(self.lead)
        self.packed = ctx.ring.key_packed(self.k)
        self.exps = ctx.ring.key_exps(self.k)
        self.degree = ctx.term_degree(self.lead)
        lead = self.lead
        self.tail = [(t, c) for t, c in vec.items() if t != lead]
        self.rep = rep


class GBRun:
    """Result of a Buchberger run: basis, representations, syzygies."""

    def __init__(self, ctx, elements, syzygies, accepted, source_weights):
        self.ctx = ctx
        self.elements = elements
        self.syzygies = syzygies
        self.accepted = accepted
        self.source_weights = source_weights


class _Reducer:
    def __init__(self, ctx):
        self.ctx = ctx
        self.ring = ctx.ring
        self.field = ctx.ring.field
        self.by_comp = defaultdict(list)

    def add(self, el):
        self.by_comp[el.comp].append(el)

    def find(self, comp, packed):
        divides = self.ring.divides
        for el in self.by_comp.get(comp, ()):
            if divides(el.packed, packed):
                return el
        return None

    def reduce(self, f, frep=None, full=True):
        """Reduce the dict ``f`` in place; returns the remainder dict.

        When ``frep`` is given, the subtracted multiples of the reducers'
        representations are accumulated into it.
        """
        if not f:
            return {}
        p = self.field.p
        ctx = self.ctx
        offsets = ctx.offsets
        key_packed = self.ring.key_packed
        heap = [-t for t in f]
        heapq.heapify(heap)
        out = {}
        by_comp = self.by_comp
        divides = self.ring.divides
        while heap:
            t = -heapq.heappop(heap)
            c = f.pop(t, None)
            if c is None:
                continue
            comp = t & COMP_MASK
            k = (t >> COMP_BITS) - offsets[comp]
            packed = key_packed(k)
            red = None
            for el in by_comp.get(comp, ()):
                if divides(el.packed, packed):
                    red = el
                    break
            if red is None:
                out[t] = c
                if not full:
                    for tt, cc in f.items():
                        out[tt] = cc
                    f.clear()
                    break
                continue
            q = (k - red.k) << COMP_BITS
            get = f.get
            if p is None:
                for tg, cg in red.tail:
                    tn = tg + q
                    v = get(tn)
                    if v is None:
                        f[tn] = -c * cg
                        heapq.heappush(heap, -tn)
                    else:
                        v -= c * cg
                        if v:
                            f[tn] = v
                        else:
                            del f[tn]
            else:
                for tg, cg in red.tail:
                    tn = tg + q
                    v = get(tn)
                    if v is None:
                        f[tn] = (-c * cg) % p
                        heapq.heappush(heap, -tn)
                    else:
                        v = (v - c * cg) % p
                        if v:
                            f[tn] = v
                        else:
                            del f[tn]
            if frep is not None:
                rget = frep.get
                for ts, cs in red.rep.items():
                    tn = ts + q
                    v = rget(tn, 0) - c * cs
                    if p is not None:
                        v %= p
                    if v:
                        frep[tn] = v
                    else:
                        frep.pop(tn, None)
        return out


def _monic(vec, rep, field):
    lc = vec[max(vec)]
    if lc == 1:
        return vec, rep
    inv = field.inv(lc)
    p = field.p
    if p is None:
        vec = {t: c * inv for t, c in vec.items()}
        if rep is not None:
            rep = {t: c * inv for t, c in rep.items()}
    else:
        vec = {t: c * inv % p for t, c in vec.items()}
        if rep is not None:
            rep = {t: c * inv % p for t, c in rep.items()}
    return vec, rep


def buchberger(ctx, gens, *, track=False, drop_redundant=False, source_weights=None,
               max_degree=None):
    """Homogeneous Buchberger algorithm, processing degrees in increasing order.

    ``gens`` is a list of vector dicts.  With ``drop_redundant`` an input is
    accepted only if it is not in the span of earlier data, so the accepted
    inputs form a minimal generating set.  With ``track`` every basis element
    carries its expression in the source module (basis = inputs, or accepted
    inputs when dropping redundant ones), and every S-pair or input that
    reduces to zero yields a syzygy; these generate all relations among the
    source generators.
    """
    ring = ctx.ring
    field = ring.field
    p = field.p

    gen_degrees = []
    for idx, g in enumerate(gens):
        d = ctx.vector_degree(g)
        if d is None:
            if source_weights is None:
                d = None
            else:
                d = source_weights[idx]
        elif source_weights is not None and not drop_redundant and source_weights[idx] != d:
            raise ValueError(f"generator {idx} has degree {d}, expected {source_weights[idx]}")
        gen_degrees.append(d)

    if drop_redundant:
        src_weights = []
    else:
        src_weights = list(source_weights) if source_weights is not None else [
            d if d is not None else 0 for d in gen_degrees
        ]
    src_ctx = FreeModuleContext(ring, src_weights) if not drop_redundant else None

    by_degree_inputs = defaultdict(list)
    for idx, d in enumerate(gen_degrees):
        if d is None:
            continue
        if max_degree is not None and d > max_degree:
            continue
        by_degree_inputs[d].append(idx)

    elements = []
    reducer = _Reducer(ctx)
    syzygies = []
    accepted = []
    pairs_by_degree = defaultdict(list)
    pending = set()
    degrees = set(by_degree_inputs)

    def add_element(vec, rep):
        vec, rep = _monic(vec, rep, field)
        el = _Element(ctx, vec, rep)
        j = len(elements)
        for i, other in enumerate(elements):
            if other.comp != el.comp:
                continue
            lcm = tuple(max(a, b) for a, b in zip(other.exps, el.exps))
            deg = sum(lcm) + ctx.weights[el.comp]
            if max_degree is not None and deg > max_degree:
                continue
            pairs_by_degree[deg].append((ring.key(lcm), i, j))
            pending.add((i, j))
            degrees.add(deg)
        elements.append(el)
        reducer.add(el)

    def chain_skip(i, j, lcm_packed):
        ei, ej = elements[i], elements[j]
        divides = ring.divides
        for k, el in enumerate(elements):
            if k == i or k == j or el.comp != ei.comp:
                continue
            if not divides(el.packed, lcm_packed):
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            return True
        return False

    while degrees:
        t = min(degrees)
        degrees.discard(t)
        plist = sorted(pairs_by_degree.pop(t, []))
        for lcm_key, i, j in plist:
            pending.discard((i, j))
            lcm_packed = ring.key_packed(lcm_key)
            if chain_skip(i, j, lcm_packed):
                continue
            ei, ej = elements[i], elements[j]
            qi = (lcm_key - ei.k) << COMP_BITS
            qj = (lcm_key - ej.k) << COMP_BITS
            s = _shift(ei.vec, qi)
            for tt, cc in ej.vec.items():
                tn = tt + qj
                v = s.get(tn, 0) - cc
                if p is not None:
                    v %= p
                if v:
                    s[tn] = v
                else:
                    s.pop(tn, None)
            srep = None
            if track:
                srep = _shift(ei.rep, qi)
                for tt, cc in ej.rep.items():
                    tn = tt + qj
                    v = srep.get(tn, 0) - cc
                    if p is not None:
                        v %= p
                    if v:
                        srep[tn] = v
                    else:
                        srep.pop(tn, None)
            r = reducer.reduce(s, srep)
            if r:
                add_element(r, srep)
            elif track and srep:
                syzygies.append(srep)
        for idx in by_degree_inputs.pop(t, []):
            vec = dict(gens[idx])
            rep = None
            if track:
                rep = {} if drop_redundant else {src_ctx.term(idx, 0): field(1)}
            r = reducer.reduce(vec, rep)
            if r:
                if drop_redundant:
                    a = len(accepted)
                    accepted.append(idx)
                    src_weights.append(t)
                    if track:
                        rep[((t * ring.base) << COMP_BITS) | a] = field(1)
                add_element(r, rep)
            elif track and not drop_redundant:
                syzygies.append(rep)
    if not drop_redundant:
        accepted = [i for i, d in enumerate(gen_degrees) if d is not None]
    return GBRun(ctx, elements, syzygies, accepted, tuple(src_weights))


def interreduce(ctx, elements):
    """Reduced basis from a minimal one: tail-reduce every element by the others."""
    field = ctx.ring.field
    out = []
    for i, el in enumerate(elements):
        red = _Reducer(ctx)
        for j, other in enumerate(elements):
            if j != i:
                red.add(other)
        tail = dict(el.tail)
        rest = red.reduce(tail)
        vec = dict(rest)
        vec[el.lead] = el.vec[el.lead]
        vec, _ = _monic(vec, None, field)
        out.append(_Element(ctx, vec, None))
    out.sort(key=lambda e: e.lead)
    return out


class GroebnerBasis:
    """Reduced Gröbner basis of a homogeneous submodule (or ideal).

    ``elements`` are vector dicts over ``ctx``; for ideals the ambient module
    has rank one and weight zero.
    """

    order = "grevlex"

    def __init__(self, ctx, elements, source=None):
        self.ctx = ctx
        self._elements = elements
        self.source = source
        self._reducer = _Reducer(ctx)
        for el in elements:
            self._reducer.add(el)

    @property
    def ring(self):
        return self.ctx.ring

    def __len__(self):
        return len(self._elements)

    def vectors(self):
        return [el.vec for el in self._elements]

    def columns(self):
        return [self.ctx.to_column(el.vec) for el in self._elements]

    def polynomials(self):
        """Basis as polynomials (rank-one case)."""
        return [col[0] for col in self.columns()]

    def leading_data(self):
        """(component, exponent tuple) of each leading term."""
        return [(el.comp, el.exps) for el in self._elements]

    def leading_monomials(self, comp=0):
        return [el.exps for el in self._elements if el.comp == comp]

    def reduce_vector(self, vec):
        return self._reducer.reduce(dict(vec))

    def normal_form_column(self, column):
        return self.ctx.to_column(self.reduce_vector(self.ctx.from_column(column)))

    def contains_column(self, column):
        return not self.reduce_vector(self.ctx.from_column(column))

    def key(self):
        """Hashable canonical form, for comparing bases."""
        return tuple(tuple(sorted(el.vec.items())) for el in self._elements)

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.ctx.weights == other.ctx.weights and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def module_groebner(ctx, vectors):
    run = buchberger(ctx, [v for v in vectors if v])
    return GroebnerBasis(ctx, interreduce(ctx, run.elements))


class Ideal:
    """Homogeneous ideal given by nonzero homogeneous generators."""

    def __init__(self, generators, ring=None):
        gens = [g for g in generators if not g.is_zero()]
        if ring is None:
            if not gens:
                raise ValueError("ring required for an empty generator list")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ValueError("generators live in different rings")
            if homogeneous_degree(g) is NON_HOMOGENEOUS:
                raise ValueError(f"generator {g} is not homogeneous")
        self.ring = ring
        self.generators = tuple(gens)

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators))})"


def _ideal_ctx(ring):
    return FreeModuleContext(ring, (0,))


def groebner(ideal):
    """Reduced grevlex Gröbner basis of a homogeneous ideal."""
    ctx = _ideal_ctx(ideal.ring)
    vecs = [ctx.from_column([g]) for g in ideal.generators]
    run = buchberger(ctx, vecs)
    return GroebnerBasis(ctx, interreduce(ctx, run.elements), source=ideal)


def normal_form(poly, basis):
    """Remainder of ``poly`` on division by ``basis``: no term is divisible by a leading term."""
    ctx = basis.ctx
    if poly.ring != ctx.ring:
        raise ValueError("ring mismatch")
    return ctx.to_column(basis.reduce_vector(ctx.from_column([poly])))[0]


# monomial ideal numerics


def _minimalize_monomials(mons):
    mons = sorted(set(mons), key=sum)
    out = []
    for m in mons:
        if not any(all(a <= b for a, b in zip(o, m)) for o in out):
            out.append(m)
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def hilbert_numerator(monomials, nvars):
    """Integer polynomial Q with HS(S/J) = Q(z) / (1 - z)^nvars for J = (monomials)."""
    gens = _minimalize_monomials(tuple(m) for m in monomials)
    if not gens:
        return [1]
    if any(sum(m) == 0 for m in gens):
        return [0]
    # pairwise coprime generators form a regular sequence
    support = [0] * nvars
    coprime = True
    for m in gens:
        for v, e in enumerate(m):
            if e:
                if support[v]:
                    coprime = False
                support[v] = 1
    if coprime:
        out = [1]
        for m in gens:
            f = [0] * (sum(m) + 1)
            f[0] = 1
            f[-1] = -1
            out = _poly_mul(out, f)
        return out
    pivot = gens[-1]
    rest = gens[:-1]
    quotient = [tuple(max(a - b, 0) for a, b in zip(m, pivot)) for m in rest]
    shifted = [0] * sum(pivot) + hilbert_numerator(quotient, nvars)
    return _poly_sub(hilbert_numerator(rest, nvars), shifted)


def _reduce_series(num, nvars):
    """Cancel (1 - z) factors: returns (Q, D) with HS = Q / (1 - z)^D, Q(1) != 0."""
    num = list(num)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    if all(c == 0 for c in num):
        return [0], 0
    dim = nvars
    while dim > 0 and sum(num) == 0:
        # synthetic division by (1 - z)
        q = []
        acc = 0
        for c in num[:-1]:
            acc += c
            q.append(acc)
        num = q if q else [0]
        dim -= 1
    return num, dim


def krull_dimension(monomials, nvars):
    """Krull dimension of S/J for a monomial ideal J (empty set means S)."""
    num = hilbert_numerator(monomials, nvars)
    q, d = _reduce_series(num, nvars)
    if q == [0]:
        return -1
    return d


# ideal predicates


def _pure_power_bounds(lead_monomials, nvars):
    bounds = [None] * nvars
    for m in lead_monomials:
        nz = [v for v, e in enumerate(m) if e]
        if len(nz) == 1:
            v = nz[0]
            if bounds[v] is None or m[v] < bounds[v]:
                bounds[v] = m[v]
        elif not nz:
            return [0] * nvars
    return bounds


def is_irrelevant(ideal):
    """True iff the ideal has no zero in projective space, i.e. contains a power of every variable."""
    ring = ideal.ring
    if not ideal.generators:
        return False
    gb = groebner(ideal)
    leads = gb.leading_monomials()
    if any(b is None for b in _pure_power_bounds(leads, ring.nvars)):
        return False
    # S/I is finite length; it vanishes from degree t on, so x_v^t lies in I
    q, _ = _reduce_series(hilbert_numerator(leads, ring.nvars), ring.nvars)
    while q and q[-1] == 0:
        q.pop()
    t = len(q)
    cap = ring.nvars * max(homogeneous_degree(g) for g in ideal.generators)
    if t > cap:
        raise ArithmeticError("irrelevance bound exceeded")
    return all(normal_form(ring.var(v) ** t, gb).is_zero() for v in range(ring.nvars))


def jacobian_ideal(F):
    return Ideal([F] + [F.diff(i) for i in range(F.ring.nvars)], F.ring)


def smoothness_check(F):
    """Whether the hypersurface F = 0 is smooth: (F, dF/dx_i) has no projective zero."""
    if F.is_zero():
        raise ValueError("zero polynomial does not define a hypersurface")
    d = homogeneous_degree(F)
    if d is NON_HOMOGENEOUS or d is ANY_DEGREE or d < 1:
        raise ValueError("F must be homogeneous of positive degree")
    return is_irrelevant(jacobian_ideal(F))


def ideal_krull_dimension(ideal):
    gb = groebner(ideal)
    return krull_dimension(gb.leading_monomials(), ideal.ring.nvars)


def is_regular_sequence(polys):
    """Homogeneous polys form a regular sequence iff S/(polys) has codimension len(polys)."""
    ring = polys[0].ring
    return ideal_krull_dimension(Ideal(polys, ring)) == ring.nvars - len(polys)


# syzygies on raw columns


def syzygy_vectors(ctx, vectors, source_weights):
    """Generators of the relations among ``vectors`` as dicts over the source module."""
    run = buchberger(ctx, vectors, track=True, source_weights=source_weights)
    return run.syzygies, FreeModuleContext(ctx.ring, run.source_weights)


def minimal_generator_indices(ctx, vectors):
    run = buchberger(ctx, vectors, drop_redundant=True)
    return run.accepted


def syzygy_generators(M):
    """Graded map whose columns generate the kernel of the graded map ``M``."""
    from .homalg import GradedFreeModule, GradedMap

    ctx = FreeModuleContext(M.ring, M.target.degrees)
    vecs = [ctx.from_column(col) for col in M.matrix.columns()]
    syz, src_ctx = syzygy_vectors(ctx, vecs, M.source.degrees)
    # prune to a minimal generating set of the syzygy module
    keep = minimal_generator_indices(src_ctx, syz)
    syz = [syz[i] for i in keep]
    degs = [src_ctx.vector_degree(s) for s in syz]
    cols = [src_ctx.to_column(s) for s in syz]
    return GradedMap.from_columns(GradedFreeModule(degs), M.source, cols, M.ring)


def saturate_module(M):
    """Quotient of M by its finite-length part, with the degree from which they agree."""
    from .homalg import saturation

    return saturation(M)
