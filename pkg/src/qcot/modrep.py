"""Modules as quiver representations: isomorphism, Krull-Schmidt decomposition,
and the exhaustive enumerator of indecomposables used as the universal oracle.

An intertwiner M -> N is stored as one FpMatrix per vertex, commuting with all
arrow matrices.  SCModules play the same game for structure-constant algebras.
"""

from __future__ import annotations

import itertools
import json
import random
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import BoundQuiverAlgebra, Path, SCAlgebra
from .errors import GuardExceeded, SpecFileError, UsageError
from .exactla import EchelonReport, FpMatrix, block_diag, invert, is_invertible

DEFAULT_SEARCH_GUARD = 10_000_000
ENDO_ENUM_LIMIT = 1 << 16


class ModuleRep:
    """Finite-dimensional representation of a bound quiver algebra."""

    __slots__ = ("algebra", "dims", "mats", "_offsets", "basis_labels")

    def __init__(self, algebra: BoundQuiverAlgebra, dims: Sequence[int],
                 mats: Sequence[FpMatrix], basis_labels=None, check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        self.mats = tuple(mats)
        offs = [0]
        for d in self.dims:
            offs.append(offs[-1] + d)
        self._offsets = tuple(offs)
        self.basis_labels = basis_labels
        if check:
            self._validate()

    def _validate(self) -> None:
        A = self.algebra
        if len(self.dims) != A.n_vertices or len(self.mats) != len(A.arrows):
            raise UsageError("dimension vector / matrix count mismatch")
        for a, m in enumerate(self.mats):
            s, t = A.arrow_source(a), A.arrow_target(a)
            if m.rows != self.dims[t] or m.cols != self.dims[s]:
                raise UsageError(f"matrix for arrow {A.arrow_names[a]} has wrong shape")
            if m.p != A.p:
                raise UsageError("matrix modulus differs from the algebra field")
        for rel in A.relations:
            acc = None
            for coeff, pth in rel:
                term = self.path_matrix(pth).scale(coeff)
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                raise UsageError("representation does not satisfy the relations")

    # -- bookkeeping -------------------------------------------------------------

    @property
    def total_dim(self) -> int:
        return self._offsets[-1]

    def offset(self, v: int) -> int:
        return self._offsets[v]

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def key(self):
        return (self.total_dim, self.dims, tuple(m.entries() for m in self.mats))

    def path_matrix(self, pth: Path) -> FpMatrix:
        A = self.algebra
        m = FpMatrix.identity(A.p, self.dims[pth.start])
        for a in pth.arrows:
            m = self.mats[a] @ m
        return m

    def element_matrix(self, x: np.ndarray) -> FpMatrix:
        """Action of an algebra element on the total space (block by source/target)."""
        A = self.algebra
        n = self.total_dim
        out = np.zeros((n, n), dtype=np.int64)
        for i in np.nonzero(x)[0]:
            pth = A.basis[int(i)]
            blk = self.path_matrix(pth)
            s, t = pth.start, A.path_target(pth)
            out[self.offset(t): self.offset(t) + self.dims[t],
                self.offset(s): self.offset(s) + self.dims[s]] += int(x[i]) * blk.a
        return FpMatrix(A.p, out)

    def __repr__(self):
        return f"ModuleRep(dims={self.dims})"

    # -- constructions -------------------------------------------------------------

    @staticmethod
    def zero(algebra: BoundQuiverAlgebra) -> "ModuleRep":
        dims = [0] * algebra.n_vertices
        mats = [FpMatrix.zeros(algebra.p, 0, 0) for _ in algebra.arrows]
        return ModuleRep(algebra, dims, mats, check=False)

    @staticmethod
    def simple(algebra: BoundQuiverAlgebra, v: int) -> "ModuleRep":
        dims = [1 if u == v else 0 for u in range(algebra.n_vertices)]
        mats = []
        for a in range(len(algebra.arrows)):
            s, t = algebra.arrow_source(a), algebra.arrow_target(a)
            mats.append(FpMatrix.zeros(algebra.p, dims[t], dims[s]))
        return ModuleRep(algebra, dims, mats, check=False)

    def direct_sum(self, other: "ModuleRep") -> "ModuleRep":
        if other.algebra is not self.algebra:
            raise UsageError("direct sum across different algebras")
        dims = [a + b for a, b in zip(self.dims, other.dims)]
        mats = []
        for a in range(len(self.algebra.arrows)):
            mats.append(block_diag(self.algebra.p, [self.mats[a], other.mats[a]]))
        return ModuleRep(self.algebra, dims, mats, check=False)

    def dual(self) -> "ModuleRep":
        """D(M): left module over the opposite algebra on the dual spaces."""
        op = self.algebra.opposite()
        mats = [self.mats[a].transpose() for a in range(len(self.mats))]
        return ModuleRep(op, self.dims, mats, check=False)


def direct_sum(mods: Sequence[ModuleRep], algebra: Optional[BoundQuiverAlgebra] = None) -> ModuleRep:
    if not mods:
        if algebra is None:
            raise UsageError("empty direct sum needs an explicit algebra")
        return ModuleRep.zero(algebra)
    out = mods[0]
    for m in mods[1:]:
        out = out.direct_sum(m)
    return out


def projective(algebra: BoundQuiverAlgebra, v: int) -> ModuleRep:
    """Indecomposable projective P_v = A e_v, with basis the classes of paths
    leaving v, recorded in basis_labels for later symbolic extraction."""
    A = algebra
    if not (0 <= v < A.n_vertices):
        raise UsageError(f"no vertex {v}")
    by_vertex: list[list[Path]] = [[] for _ in range(A.n_vertices)]
    for b in A.basis:
        if b.start == v:
            by_vertex[A.path_target(b)].append(b)
    for lst in by_vertex:
        lst.sort(key=Path.key)
    dims = [len(lst) for lst in by_vertex]
    pos = {}
    for u in range(A.n_vertices):
        for i, b in enumerate(by_vertex[u]):
            pos[b] = i
    mats = []
    for a in range(len(A.arrows)):
        s, t = A.arrow_source(a), A.arrow_target(a)
        m = np.zeros((dims[t], dims[s]), dtype=np.int64)
        for b in by_vertex[s]:
            img = A.path_class(Path(v, b.arrows + (a,)))
            for k in np.nonzero(img)[0]:
                tgt_path = A.basis[int(k)]
                m[pos[tgt_path], pos[b]] = (m[pos[tgt_path], pos[b]] + int(img[k])) % A.p
        mats.append(FpMatrix(A.p, m))
    return ModuleRep(A, dims, mats, basis_labels=tuple(tuple(lst) for lst in by_vertex), check=False)


# -- intertwiners -------------------------------------------------------------------


def _unvec(p: int, flat: np.ndarray, shapes: list[tuple[int, int]]) -> list[FpMatrix]:
    out = []
    k = 0
    for r, c in shapes:
        out.append(FpMatrix(p, flat[k: k + r * c].reshape(r, c)))
        k += r * c
    return out


def intertwiner_basis(M: ModuleRep, N: ModuleRep) -> list[tuple[FpMatrix, ...]]:
    """Basis of Hom_A(M, N) as tuples of per-vertex matrices."""
    if M.algebra is not N.algebra:
        raise UsageError("intertwiners need a common algebra")
    A = M.algebra
    p = A.p
    shapes = [(N.dims[v], M.dims[v]) for v in range(A.n_vertices)]
    sizes = [r * c for r, c in shapes]
    total = sum(sizes)
    if total == 0:
        return []
    offs = np.concatenate([[0], np.cumsum(sizes)])
    rows = []
    for a in range(len(A.arrows)):
        s, t = A.arrow_source(a), A.arrow_target(a)
        # F_t @ M_a == N_a @ F_s.  With row-major vec: vec(AXB) = (A kron B^T) vec(X),
        # so vec(F_t @ M_a) = (I kron M_a^T) vec(F_t), vec(N_a @ F_s) = (N_a kron I) vec(F_s).
        n_eq = N.dims[t] * M.dims[s]
        if n_eq == 0:
            continue
        block = np.zeros((n_eq, total), dtype=np.int64)
        if sizes[t]:
            block[:, offs[t]: offs[t] + sizes[t]] = np.kron(
                np.eye(N.dims[t], dtype=np.int64), M.mats[a].a.T)
        if sizes[s]:
            block[:, offs[s]: offs[s] + sizes[s]] -= np.kron(
                N.mats[a].a, np.eye(M.dims[s], dtype=np.int64))
        rows.append(block % p)
    if not rows:
        basis = np.eye(total, dtype=np.int64)
        return [tuple(_unvec(p, basis[:, j], shapes)) for j in range(total)]
    system = FpMatrix(p, np.vstack(rows))
    ker = EchelonReport(system).kernel_basis()
    return [tuple(_unvec(p, ker.a[:, j], shapes)) for j in range(ker.cols)]


def hom_dim(M: ModuleRep, N: ModuleRep) -> int:
    return len(intertwiner_basis(M, N))


def apply_intertwiner(f: tuple[FpMatrix, ...], vectors_by_vertex: list[FpMatrix]) -> list[FpMatrix]:
    return [f[v] @ vectors_by_vertex[v] for v in range(len(f))]


def compose(g: tuple[FpMatrix, ...], f: tuple[FpMatrix, ...]) -> tuple[FpMatrix, ...]:
    """g after f."""
    return tuple(g[v] @ f[v] for v in range(len(f)))


def intertwiner_is_iso(f: Sequence[FpMatrix]) -> bool:
    return all(is_invertible(m) for m in f)


def identity_intertwiner(M: ModuleRep) -> tuple[FpMatrix, ...]:
    return tuple(FpMatrix.identity(M.algebra.p, d) for d in M.dims)


def zero_intertwiner(M: ModuleRep, N: ModuleRep) -> tuple[FpMatrix, ...]:
    return tuple(FpMatrix.zeros(M.algebra.p, N.dims[v], M.dims[v]) for v in range(len(M.dims)))


# -- subobjects and quotients ----------------------------------------------------


def _column_space(p: int, vectors: list[np.ndarray], dim: int) -> np.ndarray:
    if not vectors:
        return np.zeros((dim, 0), dtype=np.int64)
    m = FpMatrix(p, np.stack(vectors, axis=1))
    return EchelonReport(m).image_basis().a


def submodule_closure(M: ModuleRep, seed_by_vertex: list[np.ndarray]) -> list[np.ndarray]:
    """Close per-vertex column spans under all arrow actions."""
    A = M.algebra
    spans = [_column_space(A.p, list(seed_by_vertex[v].T), M.dims[v]) for v in range(A.n_vertices)]
    changed = True
    while changed:
        changed = False
        for a in range(len(A.arrows)):
            s, t = A.arrow_source(a), A.arrow_target(a)
            if spans[s].shape[1] == 0:
                continue
            img = (M.mats[a].a @ spans[s]) % A.p
            combined = _column_space(A.p, list(spans[t].T) + list(img.T), M.dims[t])
            if combined.shape[1] != spans[t].shape[1]:
                spans[t] = combined
                changed = True
    return spans


class SubQuotient:
    """A submodule given by per-vertex column bases, with inclusion and the quotient."""

    def __init__(self, M: ModuleRep, spans: list[np.ndarray]):
        A = M.algebra
        p = A.p
        self.ambient = M
        self.spans = spans
        sub_dims = [s.shape[1] for s in spans]
        sub_mats = []
        quo_mats = []
        # Standard-basis columns completing each span to a basis of the vertex space.
        comp_basis = []
        for v in range(A.n_vertices):
            full = np.eye(M.dims[v], dtype=np.int64)
            er = EchelonReport(FpMatrix(p, np.hstack([spans[v], full])))
            comp_cols = [j - spans[v].shape[1] for j in er.pivots if j >= spans[v].shape[1]]
            comp_basis.append(
                full[:, comp_cols] if comp_cols else np.zeros((M.dims[v], 0), dtype=np.int64))
        self.comp_basis = comp_basis
        quo_dims = [c.shape[1] for c in comp_basis]
        # change of basis per vertex: [span | comp] invertible
        self.chg = []
        self.chg_inv = []
        for v in range(A.n_vertices):
            cm = FpMatrix(p, np.hstack([spans[v], comp_basis[v]]))
            inv = invert(cm)
            assert inv is not None, "span+complement must be a basis"
            self.chg.append(cm)
            self.chg_inv.append(inv)
        for a in range(len(A.arrows)):
            s, t = A.arrow_source(a), A.arrow_target(a)
            conj = (self.chg_inv[t] @ M.mats[a] @ self.chg[s]).a
            k = sub_dims[s]
            kt = sub_dims[t]
            sub_mats.append(FpMatrix(p, conj[:kt, :k]))
            quo_mats.append(FpMatrix(p, conj[kt:, k:]))
            assert not conj[kt:, :k].any(), "spans must be arrow-stable"
        self.sub = ModuleRep(A, sub_dims, sub_mats, check=False)
        self.quotient = ModuleRep(A, quo_dims, quo_mats, check=False)
        # inclusion sub -> M and projection M -> quotient as intertwiners
        self.inclusion = tuple(FpMatrix(p, spans[v]) for v in range(A.n_vertices))
        self.projection = tuple(
            FpMatrix(p, self.chg_inv[v].a[sub_dims[v]:, :]) for v in range(A.n_vertices)
        )


def submodule_from_vectors(M: ModuleRep, seed_by_vertex: list[np.ndarray]) -> SubQuotient:
    return SubQuotient(M, submodule_closure(M, seed_by_vertex))


def radical_sub(M: ModuleRep) -> SubQuotient:
    """rad M = sum of images of all arrow matrices."""
    A = M.algebra
    seeds = [np.zeros((M.dims[v], 0), dtype=np.int64) for v in range(A.n_vertices)]
    cols: list[list[np.ndarray]] = [[] for _ in range(A.n_vertices)]
    for a in range(len(A.arrows)):
        t = A.arrow_target(a)
        for j in range(M.mats[a].cols):
            cols[t].append(M.mats[a].a[:, j])
    spans = [_column_space(A.p, cols[v], M.dims[v]) for v in range(A.n_vertices)]
    return SubQuotient(M, spans)


def image_sub(f: tuple[FpMatrix, ...], M: ModuleRep, N: ModuleRep) -> SubQuotient:
    spans = [_column_space(N.algebra.p, list(f[v].a.T), N.dims[v]) for v in range(len(f))]
    return SubQuotient(N, spans)


def kernel_sub(f: tuple[FpMatrix, ...], M: ModuleRep) -> SubQuotient:
    spans = []
    for v in range(len(f)):
        ker = EchelonReport(f[v]).kernel_basis()
        spans.append(ker.a)
    return SubQuotient(M, spans)


# -- isomorphism and decomposition ----------------------------------------------


class SplitPair:
    """M = part_a + part_b along arrow-stable complementary spans, with the
    inclusion/projection system coming from one shared change of basis."""

    def __init__(self, M: ModuleRep, spans_a: list[np.ndarray], spans_b: list[np.ndarray]):
        A = M.algebra
        p = A.p
        chg, chg_inv = [], []
        for v in range(A.n_vertices):
            c = FpMatrix(p, np.hstack([spans_a[v], spans_b[v]]))
            inv = invert(c)
            assert inv is not None, "split spans must be complementary"
            chg.append(c)
            chg_inv.append(inv)
        dims_a = [s.shape[1] for s in spans_a]
        dims_b = [s.shape[1] for s in spans_b]
        mats_a, mats_b = [], []
        for a in range(len(A.arrows)):
            s, t = A.arrow_source(a), A.arrow_target(a)
            conj = (chg_inv[t] @ M.mats[a] @ chg[s]).a
            ka, kta = dims_a[s], dims_a[t]
            assert not conj[kta:, :ka].any() and not conj[:kta, ka:].any(), \
                "split spans must be arrow-stable"
            mats_a.append(FpMatrix(p, conj[:kta, :ka]))
            mats_b.append(FpMatrix(p, conj[kta:, ka:]))
        self.a_sub = ModuleRep(A, dims_a, mats_a, check=False)
        self.b_sub = ModuleRep(A, dims_b, mats_b, check=False)
        self.a_incl = tuple(FpMatrix(p, spans_a[v]) for v in range(A.n_vertices))
        self.b_incl = tuple(FpMatrix(p, spans_b[v]) for v in range(A.n_vertices))
        self.a_proj = tuple(FpMatrix(p, chg_inv[v].a[: dims_a[v], :]) for v in range(A.n_vertices))
        self.b_proj = tuple(FpMatrix(p, chg_inv[v].a[dims_a[v]:, :]) for v in range(A.n_vertices))


def _span_of_map(f: tuple[FpMatrix, ...], M: ModuleRep) -> list[np.ndarray]:
    return [_column_space(M.algebra.p, list(f[v].a.T), M.dims[v]) for v in range(len(f))]


def _fitting_split(M: ModuleRep, f: tuple[FpMatrix, ...]) -> Optional[SplitPair]:
    """Split M = im(f^n) + ker(f^n) if both are proper."""
    n = M.total_dim
    power = f
    for _ in range(max(1, n)):
        power = compose(power, f)
    spans_img = _span_of_map(power, M)
    d_img = sum(s.shape[1] for s in spans_img)
    if not (0 < d_img < M.total_dim):
        return None
    spans_ker = [EchelonReport(power[v]).kernel_basis().a for v in range(len(power))]
    d_ker = sum(s.shape[1] for s in spans_ker)
    if d_img + d_ker != M.total_dim:
        return None
    return SplitPair(M, spans_img, spans_ker)


def _idempotent_split(M: ModuleRep, e: tuple[FpMatrix, ...]) -> SplitPair:
    one_minus = tuple(FpMatrix.identity(M.algebra.p, M.dims[v]) - e[v] for v in range(len(e)))
    return SplitPair(M, _span_of_map(e, M), _span_of_map(one_minus, M))


def _find_split(M: ModuleRep, rng: random.Random) -> Optional[SplitPair]:
    """Some nontrivial direct-sum split of M, or None if indecomposable."""
    endos = intertwiner_basis(M, M)
    h = len(endos)
    p = M.algebra.p
    if h <= 1:
        return None
    # cheap pass: Fitting on basis endos and a few random combinations
    candidates = list(endos)
    for _ in range(8):
        coeffs = [rng.randrange(p) for _ in range(h)]
        f = zero_intertwiner(M, M)
        for c, g in zip(coeffs, endos):
            if c:
                f = tuple(f[v] + g[v].scale(c) for v in range(len(f)))
        candidates.append(f)
    for f in candidates:
        got = _fitting_split(M, f)
        if got is not None:
            return got
    # exact pass: exhaustive idempotent search when |End(M)| is small
    if p ** h <= ENDO_ENUM_LIMIT:
        ident = identity_intertwiner(M)
        for coeffs in itertools.product(range(p), repeat=h):
            f = zero_intertwiner(M, M)
            for c, g in zip(coeffs, endos):
                if c:
                    f = tuple(f[v] + g[v].scale(c) for v in range(len(f)))
            ff = compose(f, f)
            if ff == f and any(not m.is_zero() for m in f) and f != ident:
                return _idempotent_split(M, f)
        return None
    # large endomorphism ring: keep hammering with random Fitting splits
    for _ in range(200):
        coeffs = [rng.randrange(p) for _ in range(h)]
        f = zero_intertwiner(M, M)
        for c, g in zip(coeffs, endos):
            if c:
                f = tuple(f[v] + g[v].scale(c) for v in range(len(f)))
        got = _fitting_split(M, f)
        if got is not None:
            return got
    raise GuardExceeded("cannot certify indecomposability: End(M) too large to enumerate")


def is_indecomposable(M: ModuleRep, seed: int = 0) -> bool:
    if M.is_zero():
        return False
    return _find_split(M, random.Random(seed)) is None


def decompose(M: ModuleRep, seed: int = 0):
    """Krull-Schmidt factors of M, with inclusion/projection witnesses.

    Returns a list of (factor, inclusion, projection); inclusion maps the
    factor into M, projection splits it off, projection o inclusion = id.
    """
    rng = random.Random(seed)
    out = []

    def work(N: ModuleRep, incl, proj):
        if N.is_zero():
            return
        split = _find_split(N, rng)
        if split is None:
            out.append((N, incl, proj))
            return
        work(split.a_sub, compose(incl, split.a_incl), compose(split.a_proj, proj))
        work(split.b_sub, compose(incl, split.b_incl), compose(split.b_proj, proj))

    ident = identity_intertwiner(M)
    work(M, ident, ident)
    out.sort(key=lambda t: t[0].key())
    return out


def is_isomorphic(M: ModuleRep, N: ModuleRep, known_indec: bool = False, seed: int = 0):
    """Isomorphism test with witness: returns an intertwiner or None."""
    if M.algebra is not N.algebra:
        raise UsageError("isomorphism across different algebras")
    if M.dims != N.dims:
        return None
    if M.total_dim == 0:
        return identity_intertwiner(M)
    fwd = intertwiner_basis(M, N)
    if known_indec:
        bwd = intertwiner_basis(N, M)
        for f in fwd:
            for g in bwd:
                if intertwiner_is_iso(compose(g, f)):
                    # f may not be invertible itself; g o f invertible => f iso
                    return f
        return None
    # general case: decompose both and match factors
    dm = decompose(M, seed=seed)
    dn = decompose(N, seed=seed)
    if len(dm) != len(dn):
        return None
    used = [False] * len(dn)
    pieces = []
    for fac, incl_m, proj_m in dm:
        found = False
        for j, (fac_n, incl_n, proj_n) in enumerate(dn):
            if used[j] or fac.dims != fac_n.dims:
                continue
            w = is_isomorphic(fac, fac_n, known_indec=True, seed=seed)
            if w is not None:
                used[j] = True
                pieces.append((w, proj_m, incl_n))
                found = True
                break
        if not found:
            return None
    total = zero_intertwiner(M, N)
    for w, proj_m, incl_n in pieces:
        part = compose(incl_n, compose(w, proj_m))
        total = tuple(total[v] + part[v] for v in range(len(total)))
    if intertwiner_is_iso(total):
        return total
    return None


# -- enumeration -------------------------------------------------------------------


def _dim_vectors(n_vertices: int, total: int):
    if n_vertices == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _dim_vectors(n_vertices - 1, total - head):
            yield (head,) + rest


def enumerate_indecomposables(algebra: BoundQuiverAlgebra, bound: int,
                              guard: int = DEFAULT_SEARCH_GUARD, seed: int = 0) -> list[ModuleRep]:
    """All indecomposable modules of total dimension <= bound, up to isomorphism.

    Deterministic order: sorted by (total dim, dim vector, matrix entries).
    """
    A = algebra
    p = A.p
    # search-space guard
    est = 0
    for total in range(1, bound + 1):
        for dims in _dim_vectors(A.n_vertices, total):
            cells = sum(dims[A.arrow_source(a)] * dims[A.arrow_target(a)] for a in range(len(A.arrows)))
            est += p ** cells
            if est > guard:
                raise GuardExceeded(
                    f"estimated candidate count exceeds the guard ({est} > {guard})")
    found: list[ModuleRep] = []
    for total in range(1, bound + 1):
        for dims in sorted(_dim_vectors(A.n_vertices, total)):
            shapes = [(dims[A.arrow_target(a)], dims[A.arrow_source(a)]) for a in range(len(A.arrows))]
            cells = sum(r * c for r, c in shapes)
            for code in range(p ** cells):
                digits = []
                x = code
                for _ in range(cells):
                    digits.append(x % p)
                    x //= p
                mats = []
                k = 0
                for r, c in shapes:
                    mats.append(FpMatrix(p, np.array(digits[k: k + r * c], dtype=np.int64).reshape(r, c)))
                    k += r * c
                try:
                    M = ModuleRep(A, dims, mats)
                except UsageError:
                    continue
                if not is_indecomposable(M, seed=seed):
                    continue
                if any(M.dims == K.dims and is_isomorphic(M, K, known_indec=True, seed=seed) is not None
                       for K in found):
                    continue
                found.append(M)
    found.sort(key=ModuleRep.key)
    return found


# -- module files -------------------------------------------------------------------


def module_from_data(algebra: BoundQuiverAlgebra, data: dict) -> ModuleRep:
    try:
        dims = [int(d) for d in data["dims"]]
        raw = data.get("mats", {})
    except (KeyError, TypeError) as exc:
        raise SpecFileError(f"malformed module file: {exc}") from exc
    if len(dims) != algebra.n_vertices:
        raise SpecFileError("module dims length differs from the vertex count")
    mats = []
    for a, name in enumerate(algebra.arrow_names):
        s, t = algebra.arrow_source(a), algebra.arrow_target(a)
        if name in raw:
            mats.append(FpMatrix(algebra.p, np.array(raw[name], dtype=np.int64).reshape(dims[t], dims[s])))
        else:
            mats.append(FpMatrix.zeros(algebra.p, dims[t], dims[s]))
    try:
        return ModuleRep(algebra, dims, mats)
    except UsageError as exc:
        raise SpecFileError(str(exc)) from exc


def module_to_data(M: ModuleRep) -> dict:
    return {
        "dims": list(M.dims),
        "mats": {
            M.algebra.arrow_names[a]: [[int(x) for x in row] for row in M.mats[a].a]
            for a in range(len(M.mats))
        },
    }


def load_module(algebra: BoundQuiverAlgebra, path: str) -> ModuleRep:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFileError(f"cannot read module file {path}: {exc}") from exc
    return module_from_data(algebra, data)


# -- structure-constant modules ------------------------------------------------------


class SCModule:
    """Module over an SCAlgebra: one action matrix per algebra basis element."""

    __slots__ = ("algebra", "dim", "action", "block_dims")

    def __init__(self, algebra: SCAlgebra, dim: int, action: Sequence[FpMatrix],
                 block_dims: Optional[tuple[int, ...]] = None, check: bool = True):
        self.algebra = algebra
        self.dim = int(dim)
        self.action = tuple(action)
        self.block_dims = block_dims
        if check:
            self._validate()

    def _validate(self) -> None:
        B = self.algebra
        p = B.p
        if len(self.action) != B.dim:
            raise UsageError("need one action matrix per algebra basis element")
        for m in self.action:
            if m.rows != self.dim or m.cols != self.dim or m.p != p:
                raise UsageError("action matrix has wrong shape or modulus")
        unit = self.element_action(B.unit_vec)
        if unit != FpMatrix.identity(p, self.dim):
            raise UsageError("unit does not act as the identity")
        for i in range(B.dim):
            for j in range(B.dim):
                lhs = self.action[i] @ self.action[j]
                rhs = self.element_action(B.table[i, j])
                if lhs != rhs:
                    raise UsageError("action violates the structure constants")

    def element_action(self, x: np.ndarray) -> FpMatrix:
        out = FpMatrix.zeros(self.algebra.p, self.dim, self.dim)
        for i in np.nonzero(x)[0]:
            out = out + self.action[int(i)].scale(int(x[i]))
        return out

    def key(self):
        return (self.dim, tuple(m.entries() for m in self.action))

    def is_zero(self) -> bool:
        return self.dim == 0

    def direct_sum(self, other: "SCModule") -> "SCModule":
        if other.algebra is not self.algebra:
            raise UsageError("direct sum across different algebras")
        action = [block_diag(self.algebra.p, [a, b]) for a, b in zip(self.action, other.action)]
        return SCModule(self.algebra, self.dim + other.dim, action, check=False)

    def __repr__(self):
        return f"SCModule(dim={self.dim})"


def sc_zero(B: SCAlgebra) -> SCModule:
    return SCModule(B, 0, [FpMatrix.zeros(B.p, 0, 0)] * B.dim, check=False)


def sc_hom_basis(V: SCModule, W: SCModule) -> list[FpMatrix]:
    """Basis of Hom_B(V, W): F with F rho_V(b) = rho_W(b) F for all basis b."""
    if V.algebra is not W.algebra:
        raise UsageError("hom needs a common algebra")
    B = V.algebra
    p = B.p
    n = W.dim * V.dim
    if n == 0:
        return []
    rows = []
    for b in range(B.dim):
        # vec(F @ rho_V) = (I kron rho_V^T) vec F ; vec(rho_W @ F) = (rho_W kron I) vec F
        blk = (np.kron(np.eye(W.dim, dtype=np.int64), V.action[b].a.T)
               - np.kron(W.action[b].a, np.eye(V.dim, dtype=np.int64))) % p
        rows.append(blk)
    system = FpMatrix(p, np.vstack(rows))
    ker = EchelonReport(system).kernel_basis()
    return [FpMatrix(p, ker.a[:, j].reshape(W.dim, V.dim)) for j in range(ker.cols)]


def sc_hom_dim(V: SCModule, W: SCModule) -> int:
    return len(sc_hom_basis(V, W))


class SCSplit:
    """V = part_a + part_b along action-stable complementary column spans."""

    def __init__(self, V: SCModule, span_a: np.ndarray, span_b: np.ndarray):
        B = V.algebra
        p = B.p
        c = FpMatrix(p, np.hstack([span_a, span_b]))
        inv = invert(c)
        assert inv is not None, "split spans must be complementary"
        da = span_a.shape[1]
        act_a, act_b = [], []
        for m in V.action:
            conj = (inv @ m @ c).a
            assert not conj[da:, :da].any() and not conj[:da, da:].any(), \
                "split spans must be action-stable"
            act_a.append(FpMatrix(p, conj[:da, :da]))
            act_b.append(FpMatrix(p, conj[da:, da:]))
        self.a_sub = SCModule(B, da, act_a, check=False)
        self.b_sub = SCModule(B, V.dim - da, act_b, check=False)
        self.a_incl = FpMatrix(p, span_a)
        self.b_incl = FpMatrix(p, span_b)
        self.a_proj = FpMatrix(p, inv.a[:da, :])
        self.b_proj = FpMatrix(p, inv.a[da:, :])


def _sc_col_space(p: int, m: FpMatrix) -> np.ndarray:
    return EchelonReport(m).image_basis().a


def _sc_fitting_split(V: SCModule, f: FpMatrix) -> Optional[SCSplit]:
    power = f
    for _ in range(max(1, V.dim)):
        power = power @ f
    span_img = _sc_col_space(V.algebra.p, power)
    d_img = span_img.shape[1]
    if not (0 < d_img < V.dim):
        return None
    span_ker = EchelonReport(power).kernel_basis().a
    if d_img + span_ker.shape[1] != V.dim:
        return None
    return SCSplit(V, span_img, span_ker)


def _sc_find_split(V: SCModule, rng: random.Random) -> Optional[SCSplit]:
    endos = sc_hom_basis(V, V)
    h = len(endos)
    p = V.algebra.p
    if h <= 1:
        return None
    candidates = list(endos)
    for _ in range(8):
        f = FpMatrix.zeros(p, V.dim, V.dim)
        for g in endos:
            c = rng.randrange(p)
            if c:
                f = f + g.scale(c)
        candidates.append(f)
    for f in candidates:
        got = _sc_fitting_split(V, f)
        if got is not None:
            return got
    if p ** h <= ENDO_ENUM_LIMIT:
        ident = FpMatrix.identity(p, V.dim)
        for coeffs in itertools.product(range(p), repeat=h):
            f = FpMatrix.zeros(p, V.dim, V.dim)
            for c, g in zip(coeffs, endos):
                if c:
                    f = f + g.scale(c)
            if f @ f == f and not f.is_zero() and f != ident:
                one_minus = ident - f
                return SCSplit(V, _sc_col_space(p, f), _sc_col_space(p, one_minus))
        return None
    for _ in range(200):
        f = FpMatrix.zeros(p, V.dim, V.dim)
        for g in endos:
            c = rng.randrange(p)
            if c:
                f = f + g.scale(c)
        got = _sc_fitting_split(V, f)
        if got is not None:
            return got
    raise GuardExceeded("cannot certify SCModule indecomposability")


def sc_is_indecomposable(V: SCModule, seed: int = 0) -> bool:
    if V.dim == 0:
        return False
    return _sc_find_split(V, random.Random(seed)) is None


def sc_decompose(V: SCModule, seed: int = 0) -> list[tuple[SCModule, FpMatrix, FpMatrix]]:
    """Krull-Schmidt factors with (inclusion, projection) witnesses."""
    rng = random.Random(seed)
    out = []

    def work(W: SCModule, incl: FpMatrix, proj: FpMatrix):
        if W.dim == 0:
            return
        split = _sc_find_split(W, rng)
        if split is None:
            out.append((W, incl, proj))
            return
        work(split.a_sub, incl @ split.a_incl, split.a_proj @ proj)
        work(split.b_sub, incl @ split.b_incl, split.b_proj @ proj)

    ident = FpMatrix.identity(V.algebra.p, V.dim)
    work(V, ident, ident)
    out.sort(key=lambda t: t[0].key())
    return out


def sc_is_isomorphic(V: SCModule, W: SCModule, known_indec: bool = False, seed: int = 0):
    if V.algebra is not W.algebra:
        raise UsageError("isomorphism across different algebras")
    if V.dim != W.dim:
        return None
    if V.dim == 0:
        return FpMatrix.identity(V.algebra.p, 0)
    if known_indec:
        fwd = sc_hom_basis(V, W)
        bwd = sc_hom_basis(W, V)
        for f in fwd:
            for g in bwd:
                if is_invertible(g @ f):
                    return f
        return None
    dv = sc_decompose(V, seed=seed)
    dw = sc_decompose(W, seed=seed)
    if len(dv) != len(dw):
        return None
    used = [False] * len(dw)
    total = FpMatrix.zeros(V.algebra.p, W.dim, V.dim)
    for fac, incl_v, proj_v in dv:
        found = False
        for j, (fac_w, incl_w, proj_w) in enumerate(dw):
            if used[j] or fac.dim != fac_w.dim:
                continue
            iso = sc_is_isomorphic(fac, fac_w, known_indec=True, seed=seed)
            if iso is not None:
                used[j] = True
                total = total + incl_w @ iso @ proj_v
                found = True
                break
        if not found:
            return None
    return total if is_invertible(total) else None


def sc_submodule(V: SCModule, seed_vectors: np.ndarray) -> "SCSubQuotient":
    """Smallest submodule containing the given column vectors."""
    B = V.algebra
    p = B.p
    span = _column_space(p, list(seed_vectors.T), V.dim)
    changed = True
    while changed:
        changed = False
        for m in V.action:
            if span.shape[1] == 0:
                break
            img = (m.a @ span) % p
            combined = _column_space(p, list(span.T) + list(img.T), V.dim)
            if combined.shape[1] != span.shape[1]:
                span = combined
                changed = True
    return SCSubQuotient(V, span)


class SCSubQuotient:
    def __init__(self, V: SCModule, span: np.ndarray):
        B = V.algebra
        p = B.p
        self.ambient = V
        self.span = span
        full = np.eye(V.dim, dtype=np.int64)
        er = EchelonReport(FpMatrix(p, np.hstack([span, full])))
        comp_cols = [j - span.shape[1] for j in er.pivots if j >= span.shape[1]]
        comp = full[:, comp_cols] if comp_cols else np.zeros((V.dim, 0), dtype=np.int64)
        chg = FpMatrix(p, np.hstack([span, comp]))
        inv = invert(chg)
        assert inv is not None
        k = span.shape[1]
        sub_act, quo_act = [], []
        for m in V.action:
            conj = (inv @ m @ chg).a
            assert not conj[k:, :k].any(), "span must be action-stable"
            sub_act.append(FpMatrix(p, conj[:k, :k]))
            quo_act.append(FpMatrix(p, conj[k:, k:]))
        self.sub = SCModule(B, k, sub_act, check=False)
        self.quotient = SCModule(B, V.dim - k, quo_act, check=False)
        self.inclusion = FpMatrix(p, span)
        self.projection = FpMatrix(p, inv.a[k:, :])


def sc_trace(sources: Sequence[SCModule], V: SCModule) -> SCSubQuotient:
    """Sum of images of all homomorphisms from the given modules into V."""
    p = V.algebra.p
    cols: list[np.ndarray] = []
    for S in sources:
        for f in sc_hom_basis(S, V):
            cols.extend(f.a.T)
    span = _column_space(p, cols, V.dim)
    return SCSubQuotient(V, span)


def enumerate_sc_modules(B: SCAlgebra, bound: int, guard: int = DEFAULT_SEARCH_GUARD,
                         seed: int = 0) -> list[SCModule]:
    """All indecomposable B-modules of dimension <= bound, up to isomorphism.

    When B carries block data (a complete orthogonal idempotent set), the
    idempotents are normalised to coordinate projectors, which shrinks the
    search space to the off-diagonal cells; otherwise every non-unit basis
    action is free and the guard protects against blowup.
    """
    p = B.p
    found: list[SCModule] = []
    if B.blocks is not None:
        idem, tags = B.blocks
        n_blocks = len(idem)
        free = [b for b in range(B.dim) if b not in idem]
        est = 0
        for total in range(1, bound + 1):
            for bdims in _dim_vectors(n_blocks, total):
                cells = sum(bdims[tags[b][0]] * bdims[tags[b][1]] for b in free)
                est += p ** cells
                if est > guard:
                    raise GuardExceeded(
                        f"estimated SCModule candidate count exceeds the guard ({est} > {guard})")
        for total in range(1, bound + 1):
            for bdims in sorted(_dim_vectors(n_blocks, total)):
                offs = np.concatenate([[0], np.cumsum(bdims)])
                shapes = [(bdims[tags[b][0]], bdims[tags[b][1]]) for b in free]
                cells = sum(r * c for r, c in shapes)
                for code in range(p ** cells):
                    digits = []
                    x = code
                    for _ in range(cells):
                        digits.append(x % p)
                        x //= p
                    action = []
                    k = 0
                    per_free = {}
                    for fb, (r, c) in zip(free, shapes):
                        per_free[fb] = np.array(digits[k: k + r * c], dtype=np.int64).reshape(r, c)
                        k += r * c
                    for b in range(B.dim):
                        m = np.zeros((total, total), dtype=np.int64)
                        if b in idem:
                            blk = idem.index(b)
                            m[offs[blk]: offs[blk + 1], offs[blk]: offs[blk + 1]] = np.eye(bdims[blk], dtype=np.int64)
                        else:
                            u, w = tags[b]
                            m[offs[u]: offs[u + 1], offs[w]: offs[w + 1]] = per_free[b]
                        action.append(FpMatrix(p, m))
                    try:
                        V = SCModule(B, total, action, block_dims=tuple(bdims))
                    except UsageError:
                        continue
                    if not sc_is_indecomposable(V, seed=seed):
                        continue
                    if any(V.dim == K.dim and sc_is_isomorphic(V, K, known_indec=True, seed=seed)
                           for K in found):
                        continue
                    found.append(V)
    else:
        est = 0
        for total in range(1, bound + 1):
            est += p ** (B.dim * total * total)
            if est > guard:
                raise GuardExceeded(
                    f"estimated SCModule candidate count exceeds the guard ({est} > {guard})")
        for total in range(1, bound + 1):
            cells = B.dim * total * total
            for code in range(p ** cells):
                digits = []
                x = code
                for _ in range(cells):
                    digits.append(x % p)
                    x //= p
                action = [FpMatrix(p, np.array(digits[b * total * total: (b + 1) * total * total],
                                               dtype=np.int64).reshape(total, total))
                          for b in range(B.dim)]
                try:
                    V = SCModule(B, total, action)
                except UsageError:
                    continue
                if not sc_is_indecomposable(V, seed=seed):
                    continue
                if any(V.dim == K.dim and sc_is_isomorphic(V, K, known_indec=True, seed=seed)
                       for K in found):
                    continue
                found.append(V)
    found.sort(key=SCModule.key)
    return found
