"""The homological toolbox on mod A: Hom, Ext^1, projective covers, injective
envelopes, minimal presentations, the Auslander-Reiten translate and stable Hom.

Ext^1 is computed from projective presentations; the AR formula is kept as an
independent cross-check in the test suite, not as the definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import BoundQuiverAlgebra, Path
from .errors import UsageError
from .exactla import EchelonReport, FpMatrix
from .modrep import (ModuleRep, SubQuotient, intertwiner_basis, compose,
                     decompose, image_sub, is_isomorphic, kernel_sub,
                     projective, radical_sub, zero_intertwiner)

_hom_cache: dict = {}


def hom_basis(M: ModuleRep, N: ModuleRep) -> list[tuple[FpMatrix, ...]]:
    key = (id(M), id(N))
    hit = _hom_cache.get(key)
    if hit is not None:
        return hit[2]
    basis = intertwiner_basis(M, N)
    _hom_cache[key] = (M, N, basis)
    return basis


@dataclass
class HomSpace:
    source: ModuleRep
    target: ModuleRep
    basis: list
    dim: int


def hom(M: ModuleRep, N: ModuleRep) -> HomSpace:
    basis = hom_basis(M, N)
    return HomSpace(M, N, basis, len(basis))


def hom_dim(M: ModuleRep, N: ModuleRep) -> int:
    return len(hom_basis(M, N))


# -- projective sums with summand bookkeeping ---------------------------------------


class ProjSum:
    """P_{v_1} + ... + P_{v_k} with per-vertex basis labels (summand, path)."""

    def __init__(self, algebra: BoundQuiverAlgebra, verts: Sequence[int]):
        self.algebra = algebra
        self.verts = tuple(verts)
        parts = [projective(algebra, v) for v in self.verts]
        labels: list[list[tuple[int, Path]]] = [[] for _ in range(algebra.n_vertices)]
        for k, (v, part) in enumerate(zip(self.verts, parts)):
            for u in range(algebra.n_vertices):
                for pth in part.basis_labels[u]:
                    labels[u].append((k, pth))
        dims = [len(l) for l in labels]
        mats = []
        p = algebra.p
        for a in range(len(algebra.arrows)):
            s, t = algebra.arrow_source(a), algebra.arrow_target(a)
            m = np.zeros((dims[t], dims[s]), dtype=np.int64)
            col = {lab: i for i, lab in enumerate(labels[s])}
            row = {lab: i for i, lab in enumerate(labels[t])}
            for (k, pth), j in col.items():
                img = algebra.path_class(Path(pth.start, pth.arrows + (a,)))
                for b in np.nonzero(img)[0]:
                    tgt = algebra.basis[int(b)]
                    m[row[(k, tgt)], j] = (m[row[(k, tgt)], j] + int(img[b])) % p
            mats.append(FpMatrix(p, m))
        self.module = ModuleRep(algebra, dims, mats, check=False)
        self.labels = tuple(tuple(l) for l in labels)
        self._pos = {}
        for u in range(algebra.n_vertices):
            for i, lab in enumerate(labels[u]):
                self._pos[lab] = (u, i)

    def generator_column(self, k: int) -> tuple[int, int]:
        """Vertex and index of the trivial-path generator of summand k."""
        v = self.verts[k]
        return self._pos[(k, Path(v, ()))]

    def map_from_symbols(self, target: "ProjSum", sym) -> tuple[FpMatrix, ...]:
        """Realize a symbolic matrix (entries: algebra-element vectors, shape
        len(target.verts) x len(self.verts)) as an intertwiner self -> target."""
        A = self.algebra
        p = A.p
        out = [np.zeros((target.module.dims[u], self.module.dims[u]), dtype=np.int64)
               for u in range(A.n_vertices)]
        for j in range(len(self.verts)):
            w = self.verts[j]
            for i in range(len(target.verts)):
                x = sym[i][j]
                if not np.any(x):
                    continue
                # basis path q of summand j (a path from w) goes to q * x in P_{v_i}
                for u in range(A.n_vertices):
                    for col, (k, q) in enumerate(self.labels[u]):
                        if k != j:
                            continue
                        img = np.zeros(A.dim, dtype=np.int64)
                        for b in np.nonzero(x)[0]:
                            xpth = A.basis[int(b)]
                            img = (img + int(x[b]) * A.path_class(
                                Path(xpth.start, xpth.arrows + q.arrows))) % p
                        for b in np.nonzero(img)[0]:
                            tgt = A.basis[int(b)]
                            uu, row = target._pos[(i, tgt)]
                            assert uu == u
                            out[u][row, col] = (out[u][row, col] + int(img[b])) % p
        return tuple(FpMatrix(p, m) for m in out)

    def symbols_from_map(self, target: "ProjSum", f: tuple[FpMatrix, ...]):
        """Symbolic matrix of an intertwiner self -> target (inverse of map_from_symbols)."""
        A = self.algebra
        sym = [[np.zeros(A.dim, dtype=np.int64) for _ in self.verts] for _ in target.verts]
        for j in range(len(self.verts)):
            u, col = self.generator_column(j)
            vec = f[u].a[:, col]
            for row in np.nonzero(vec)[0]:
                k, pth = target.labels[u][int(row)]
                sym[k][j] = (sym[k][j] + int(vec[row]) * A.path_class(pth)) % A.p
        return sym


def _top_lifts(M: ModuleRep) -> list[tuple[int, np.ndarray]]:
    """(vertex, vector) lifts of a basis of top(M) = M / rad M."""
    rad = radical_sub(M)
    out = []
    for v in range(M.algebra.n_vertices):
        comp = rad.comp_basis[v]
        for j in range(comp.shape[1]):
            out.append((v, comp[:, j]))
    return out


@dataclass
class Cover:
    source: ProjSum
    epi: tuple
    target: ModuleRep


def projective_cover(M: ModuleRep) -> Cover:
    """P(M) -> M with P = sum of P_v, one copy per top basis element."""
    A = M.algebra
    p = A.p
    lifts = _top_lifts(M)
    verts = [v for v, _ in lifts]
    ps = ProjSum(A, verts)
    cols = [[] for _ in range(A.n_vertices)]
    epi = [np.zeros((M.dims[u], ps.module.dims[u]), dtype=np.int64)
           for u in range(A.n_vertices)]
    for u in range(A.n_vertices):
        for i, (k, pth) in enumerate(ps.labels[u]):
            v, x = lifts[k]
            img = (M.path_matrix(pth).a @ x.reshape(-1, 1)) % p
            epi[u][:, i] = img[:, 0]
    f = tuple(FpMatrix(p, m) for m in epi)
    # surjectivity certificate
    for u in range(A.n_vertices):
        if EchelonReport(f[u]).rank != M.dims[u]:
            raise UsageError("projective cover construction failed to surject")
    return Cover(ps, f, M)


def injective_envelope(M: ModuleRep) -> tuple[ModuleRep, tuple]:
    """E(M) with the embedding M -> E(M), computed through the opposite algebra."""
    dm = M.dual()
    cov = projective_cover(dm)
    env = cov.source.module.dual()  # over (A^op)^op = A
    ident = tuple(m.transpose() for m in cov.epi)
    return env, ident


def injective(algebra: BoundQuiverAlgebra, v: int) -> ModuleRep:
    env, _ = injective_envelope(ModuleRep.simple(algebra, v))
    return env


def is_projective_module(M: ModuleRep) -> bool:
    if M.is_zero():
        return True
    cov = projective_cover(M)
    return cov.source.module.total_dim == M.total_dim


def is_injective_module(M: ModuleRep) -> bool:
    if M.is_zero():
        return True
    env, _ = injective_envelope(M)
    return env.total_dim == M.total_dim


@dataclass
class Presentation:
    """Minimal projective presentation P1 -> P0 (degrees -1, 0) of a module."""
    p1: ProjSum
    p0: ProjSum
    sym: list            # symbolic differential, shape len(p0.verts) x len(p1.verts)
    diff: tuple          # numeric intertwiner p1.module -> p0.module
    module: ModuleRep
    epi: tuple           # p0.module -> module


def min_presentation_data(M: ModuleRep) -> Presentation:
    A = M.algebra
    if M.is_zero():
        empty = ProjSum(A, [])
        return Presentation(empty, empty, [], zero_intertwiner(empty.module, empty.module),
                            M, zero_intertwiner(empty.module, M))
    cov0 = projective_cover(M)
    ker = kernel_sub(cov0.epi, cov0.source.module)
    cov1 = projective_cover(ker.sub)
    diff = compose(ker.inclusion, cov1.epi)
    sym = cov1.source.symbols_from_map(cov0.source, diff)
    # minimality: the induced map on tops vanishes, i.e. entries lie in the radical
    for row in sym:
        for x in row:
            for b in np.nonzero(x)[0]:
                assert len(A.basis[int(b)].arrows) >= 1, "presentation differential not radical"
    return Presentation(cov1.source, cov0.source, sym, diff, M, cov0.epi)


def min_presentation(M: ModuleRep):
    """Minimal presentation as a two-term complex object."""
    from .twoterm import TwoTermComplex
    pres = min_presentation_data(M)
    return TwoTermComplex(M.algebra, pres.p1.verts, pres.p0.verts, pres.sym)


# -- transpose and the AR translate ---------------------------------------------------


def _reverse_element(A: BoundQuiverAlgebra, x: np.ndarray) -> np.ndarray:
    """Coordinates of the mirror element of A^op (paths reversed)."""
    op = A.opposite()
    out = np.zeros(op.dim, dtype=np.int64)
    for b in np.nonzero(x)[0]:
        pth = A.basis[int(b)]
        rev = Path(A.path_target(pth), tuple(reversed(pth.arrows)))
        out = (out + int(x[b]) * op.path_class(rev)) % A.p
    return out


def transpose_cokernel(M: ModuleRep) -> ModuleRep:
    """Tr M over A^op: cokernel of Hom(-, A) applied to the minimal presentation."""
    A = M.algebra
    op = A.opposite()
    pres = min_presentation_data(M)
    src = ProjSum(op, pres.p0.verts)   # Hom(P0, A) = sum of right projectives
    tgt = ProjSum(op, pres.p1.verts)
    sym_t = [[_reverse_element(A, pres.sym[i][j]) for i in range(len(pres.p0.verts))]
             for j in range(len(pres.p1.verts))]
    f_t = src.map_from_symbols(tgt, sym_t)
    img = image_sub(f_t, src.module, tgt.module)
    return img.quotient


def tau(M: ModuleRep) -> ModuleRep:
    """Auslander-Reiten translate D Tr M; zero on projectives."""
    tr = transpose_cokernel(M)
    return tr.dual()


def tau_inverse(M: ModuleRep) -> ModuleRep:
    """Tr D M; zero on injectives.  Tr of an A^op-module lands back over A."""
    return transpose_cokernel(M.dual())


# -- Ext^1 and stable Hom --------------------------------------------------------------


@dataclass
class Ext1Report:
    dim: int
    cocycle_basis: list   # intertwiners Omega(M) -> N representing the classes
    omega: ModuleRep


def ext1(M: ModuleRep, N: ModuleRep) -> Ext1Report:
    """Ext^1(M, N) = Hom(Omega M, N) / restriction image of Hom(P0, N)."""
    if M.algebra is not N.algebra:
        raise UsageError("ext1 needs a common algebra")
    A = M.algebra
    if M.is_zero() or N.is_zero():
        return Ext1Report(0, [], ModuleRep.zero(A))
    cov = projective_cover(M)
    ker = kernel_sub(cov.epi, cov.source.module)
    omega = ker.sub
    full = hom_basis(omega, N)
    if not full:
        return Ext1Report(0, [], omega)
    restricted = []
    for h in hom_basis(cov.source.module, N):
        restricted.append(compose(h, ker.inclusion))
    dim_im = _span_rank(A.p, restricted)
    dim = len(full) - dim_im
    cocycles = _complement_reps(A.p, full, restricted)
    assert len(cocycles) == dim
    return Ext1Report(dim, cocycles, omega)


def ext1_dim(M: ModuleRep, N: ModuleRep) -> int:
    return ext1(M, N).dim


def _flatten_map(f: Sequence[FpMatrix]) -> np.ndarray:
    parts = [m.a.reshape(-1) for m in f]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _span_rank(p: int, maps: list) -> int:
    vecs = [_flatten_map(f) for f in maps]
    vecs = [v for v in vecs if v.size and v.any()]
    if not vecs:
        return 0
    return EchelonReport(FpMatrix(p, np.stack(vecs))).rank


def _complement_reps(p: int, full: list, sub: list) -> list:
    """Representatives of a complement of span(sub) inside span(full)."""
    if not full:
        return []
    sub_vecs = [_flatten_map(f) for f in sub]
    sub_vecs = [v for v in sub_vecs if v.size and v.any()]
    out = []
    current = list(sub_vecs)
    base_rank = _rank_of(p, current)
    for f in full:
        v = _flatten_map(f)
        r = _rank_of(p, current + [v])
        if r > base_rank:
            out.append(f)
            current.append(v)
            base_rank = r
    return out


def _rank_of(p: int, vecs: list) -> int:
    vecs = [v for v in vecs if v.size and v.any()]
    if not vecs:
        return 0
    return EchelonReport(FpMatrix(p, np.stack(vecs))).rank


def factoring_through_dim(M: ModuleRep, N: ModuleRep, mid: Sequence[ModuleRep]) -> int:
    """Dimension of the maps M -> N factoring through the additive closure of mid."""
    p = M.algebra.p
    comps = []
    for W in mid:
        left = hom_basis(M, W)
        right = hom_basis(W, N)
        for f in left:
            for g in right:
                comps.append(compose(g, f))
    return _span_rank(p, comps)


def stable_hom_mod_inj(N: ModuleRep, M: ModuleRep) -> int:
    """dim Hom(N, M) modulo maps factoring through an injective module.

    A map factors through an injective iff it factors through the injective
    envelope embedding N -> E(N)."""
    if N.is_zero() or M.is_zero():
        return 0
    env, emb = injective_envelope(N)
    total = len(hom_basis(N, M))
    through = [compose(g, emb) for g in hom_basis(env, M)]
    return total - _span_rank(N.algebra.p, through)


def hom_mod_ideal_dim(M: ModuleRep, N: ModuleRep, mid: Sequence[ModuleRep]) -> int:
    """dim of Hom(M, N) in the additive quotient by maps through add(mid)."""
    return len(hom_basis(M, N)) - factoring_through_dim(M, N, mid)
