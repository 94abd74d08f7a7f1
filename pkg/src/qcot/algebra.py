"""Bound quiver algebras A = kQ/I over a prime field, and structure-constant algebras.

Conventions (fixed once, used everywhere):
  * modules are left modules; a representation assigns to an arrow a: i -> j
    a matrix mapping the vertex-i space to the vertex-j space;
  * paths are written first-applied-first, so the relation entry
    ["alpha", "beta"] kills "alpha then beta";
  * the algebra product x*y applies y first ("x after y"), matching
    function composition, so e_w * (path v->w) * e_v is the path itself.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

import numpy as np

from .errors import GuardExceeded, SpecFileError, UsageError
from .exactla import EchelonReport, FpMatrix, is_prime

DEFAULT_PATH_CAP = 32
FREE_PATH_GUARD = 200_000


class Path:
    """A path in the free path algebra: start vertex plus arrows in application order."""

    __slots__ = ("start", "arrows")

    def __init__(self, start: int, arrows: tuple[int, ...]):
        self.start = start
        self.arrows = arrows

    def key(self):
        return (len(self.arrows), self.start, self.arrows)

    def __eq__(self, other):
        return self.start == other.start and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.start, self.arrows))

    def __len__(self):
        return len(self.arrows)

    def __repr__(self):
        return f"Path({self.start}, {self.arrows})"


class BoundQuiverAlgebra:
    """A = kQ/I with a computed basis of residue classes of paths.

    Built through `parse_algebra` / `from_data`; immutable afterwards.
    """

    def __init__(self, p, vertices, arrows, relations, path_cap=DEFAULT_PATH_CAP, name="A"):
        if not is_prime(p):
            raise SpecFileError(f"field size {p} is not prime")
        self.p = p
        self.name = name
        self.vertices = tuple(vertices)  # vertex names (strings)
        self.arrows = tuple(arrows)      # (name, source index, target index)
        self.arrow_names = tuple(a[0] for a in arrows)
        self.relations = relations       # list of lists of (coeff, Path)
        self.path_cap = path_cap
        self._mult_table: dict[tuple[int, int], np.ndarray] = {}
        self._opposite: Optional[BoundQuiverAlgebra] = None
        self._build_basis()

    # -- quiver bookkeeping ----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def arrow_source(self, a: int) -> int:
        return self.arrows[a][1]

    def arrow_target(self, a: int) -> int:
        return self.arrows[a][2]

    def path_target(self, path: Path) -> int:
        if not path.arrows:
            return path.start
        return self.arrow_target(path.arrows[-1])

    def path_name(self, path: Path) -> str:
        if not path.arrows:
            return f"e{self.vertices[path.start]}"
        return "*".join(self.arrow_names[a] for a in reversed(path.arrows))

    # -- basis computation -------------------------------------------------------

    def _free_paths(self) -> list[Path]:
        """All composable paths of length <= path_cap, guarded against blowup."""
        out: list[Path] = [Path(v, ()) for v in range(self.n_vertices)]
        frontier = list(out)
        for _ in range(self.path_cap):
            nxt = []
            for path in frontier:
                end = self.path_target(path)
                for a in range(len(self.arrows)):
                    if self.arrow_source(a) == end:
                        nxt.append(Path(path.start, path.arrows + (a,)))
            if not nxt:
                break
            out.extend(nxt)
            if len(out) > FREE_PATH_GUARD:
                raise SpecFileError(
                    "path closure does not terminate within the configured length bound; "
                    "the ideal does not look admissible"
                )
            frontier = nxt
        return out

    def _build_basis(self) -> None:
        paths = self._free_paths()
        paths.sort(key=Path.key)
        index = {path: i for i, path in enumerate(paths)}
        self._free_index = index
        self._free_paths_list = paths

        # Ideal generators u*r*v inside the truncated path space, longest paths
        # eliminated first so every pivot rewrites a path into shorter ones.
        order = sorted(range(len(paths)), key=lambda i: paths[i].key(), reverse=True)
        pos_of = {idx: pos for pos, idx in enumerate(order)}
        gens: list[np.ndarray] = []
        for rel in self.relations:
            spans = self._relation_extensions(rel, index, pos_of, len(paths))
            gens.extend(spans)
        if gens:
            mat = FpMatrix(self.p, np.stack(gens))
            rep = EchelonReport(mat)
            pivot_cols = set(rep.pivots)
            rr = rep.rref.a
        else:
            pivot_cols = set()
            rr = np.zeros((0, len(paths)), dtype=np.int64)

        basis_positions = [pos for pos in range(len(paths)) if pos not in pivot_cols]
        self.basis: tuple[Path, ...] = tuple(paths[order[pos]] for pos in basis_positions)
        self.dim = len(self.basis)
        self._basis_index = {path: i for i, path in enumerate(self.basis)}

        # Reduction vector (coordinates over basis) for every truncated free path.
        reduction = np.zeros((len(paths), self.dim), dtype=np.int64)
        col_to_basis = {pos: k for k, pos in enumerate(basis_positions)}
        # map each pivot column to its rref row
        prow = {}
        r_i = 0
        for col in range(len(paths)):
            if col in pivot_cols:
                prow[col] = r_i
                r_i += 1
        for pos in range(len(paths) - 1, -1, -1):
            if pos in col_to_basis:
                reduction[order[pos], col_to_basis[pos]] = 1
            else:
                row = rr[prow[pos]]
                acc = np.zeros(self.dim, dtype=np.int64)
                for j in np.nonzero(row)[0]:
                    if j == pos:
                        continue
                    acc = (acc - int(row[j]) * reduction[order[j]]) % self.p
                reduction[order[pos]] = acc
        self._reduction = reduction

        self._validate_basis()

    def _relation_extensions(self, rel, index, pos_of, n_paths) -> list[np.ndarray]:
        """All u*r*v supported inside the truncated path space, as coordinate rows."""
        out = []
        # left factors u: paths starting at the relation's target; right factors v ending at source.
        src = rel[0][1].start
        tgt = self.path_target(rel[0][1])
        rights = [q for q in self._free_paths_list if self.path_target(q) == src]
        lefts = [u for u in self._free_paths_list if u.start == tgt]
        max_term = max(len(p_) for _, p_ in rel)
        for v in rights:
            for u in lefts:
                if len(v) + max_term + len(u) > self.path_cap:
                    continue
                row = np.zeros(n_paths, dtype=np.int64)
                ok = True
                for coeff, mid in rel:
                    combined = Path(v.start, v.arrows + mid.arrows + u.arrows)
                    idx = index.get(combined)
                    if idx is None:
                        ok = False
                        break
                    row[pos_of[idx]] = (row[pos_of[idx]] + coeff) % self.p
                if ok and row.any():
                    out.append(row)
        return out

    def _validate_basis(self) -> None:
        for v in range(self.n_vertices):
            triv = Path(v, ())
            if triv not in self._basis_index:
                raise SpecFileError("a trivial path was eliminated; the ideal is not admissible")
        if any(len(b) >= self.path_cap for b in self.basis):
            raise SpecFileError(
                "path closure does not terminate within the configured length bound; "
                "the ideal does not look admissible"
            )
        # Arrow-ideal nilpotency in the quotient: the span of length-k path
        # classes must die within the cap.
        rad = [self.path_class(Path(self.arrow_source(a), (a,))) for a in range(len(self.arrows))]
        layer = self._span(rad)
        for _ in range(self.path_cap + 1):
            if layer.shape[1] == 0:
                return
            nxt = []
            for i in range(layer.shape[1]):
                for r in rad:
                    nxt.append(self.multiply(r, layer[:, i]))
            layer = self._span(nxt)
        raise SpecFileError("arrow ideal is not nilpotent modulo the relations")

    def _span(self, vectors: list[np.ndarray]) -> np.ndarray:
        vecs = [v for v in vectors if v.any()]
        if not vecs:
            return np.zeros((self.dim, 0), dtype=np.int64)
        m = FpMatrix(self.p, np.stack(vecs, axis=1))
        return EchelonReport(m).image_basis().a

    # -- elements ---------------------------------------------------------------

    def path_class(self, path: Path) -> np.ndarray:
        """Coordinates of a free path's residue class over the computed basis."""
        idx = self._free_index.get(path)
        if idx is None:
            # Composable but longer than anything kept: provably zero once the
            # basis validates (all cap-length paths already reduce to zero).
            max_len = max((len(b) for b in self.basis), default=0)
            if 2 * max_len + 1 >= self.path_cap:
                raise GuardExceeded("path cap too small for products; raise path_cap")
            return np.zeros(self.dim, dtype=np.int64)
        return self._reduction[idx].copy()

    def unit(self) -> np.ndarray:
        u = np.zeros(self.dim, dtype=np.int64)
        for v in range(self.n_vertices):
            u[self._basis_index[Path(v, ())]] = 1
        return u

    def idempotent(self, v: int) -> np.ndarray:
        u = np.zeros(self.dim, dtype=np.int64)
        u[self._basis_index[Path(v, ())]] = 1
        return u

    def _basis_product(self, i: int, j: int) -> np.ndarray:
        """Product b_i * b_j (apply b_j first)."""
        key = (i, j)
        cached = self._mult_table.get(key)
        if cached is not None:
            return cached
        bi, bj = self.basis[i], self.basis[j]
        if self.path_target(bj) != bi.start:
            out = np.zeros(self.dim, dtype=np.int64)
        else:
            out = self.path_class(Path(bj.start, bj.arrows + bi.arrows))
        self._mult_table[key] = out
        return out

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product x*y in A (y applied first), on coordinate vectors."""
        out = np.zeros(self.dim, dtype=np.int64)
        for i in np.nonzero(x)[0]:
            for j in np.nonzero(y)[0]:
                out = (out + int(x[i]) * int(y[j]) * self._basis_product(int(i), int(j))) % self.p
        return out

    def element_name(self, x: np.ndarray) -> str:
        terms = []
        for i in np.nonzero(x)[0]:
            c = int(x[i])
            nm = self.path_name(self.basis[i])
            terms.append(nm if c == 1 else f"{c}{nm}")
        return "+".join(terms) if terms else "0"

    # -- derived algebras ---------------------------------------------------------

    def opposite(self) -> "BoundQuiverAlgebra":
        """The opposite algebra, presented on the reversed quiver."""
        if self._opposite is None:
            arrows = tuple((nm, t, s) for (nm, s, t) in self.arrows)
            rels = []
            for rel in self.relations:
                rels.append([
                    (c, Path(self.path_target(pth), tuple(reversed(pth.arrows))))
                    for c, pth in rel
                ])
            op = BoundQuiverAlgebra(self.p, self.vertices, arrows, rels,
                                    path_cap=self.path_cap, name=self.name + "^op")
            op._opposite = self
            self._opposite = op
        return self._opposite

    def restrict(self, keep: Sequence[int]) -> "BoundQuiverAlgebra":
        """Quotient by the idempotents of the deleted vertices: A / A e A."""
        keep = sorted(set(keep))
        vmap = {v: i for i, v in enumerate(keep)}
        arrows = []
        amap = {}
        for a, (nm, s, t) in enumerate(self.arrows):
            if s in vmap and t in vmap:
                amap[a] = len(arrows)
                arrows.append((nm, vmap[s], vmap[t]))
        rels = []
        for rel in self.relations:
            terms = []
            for c, pth in rel:
                if pth.start in vmap and all(a in amap for a in pth.arrows):
                    terms.append((c, Path(vmap[pth.start], tuple(amap[a] for a in pth.arrows))))
            if terms:
                rels.append(terms)
        return BoundQuiverAlgebra(self.p, [self.vertices[v] for v in keep], arrows, rels,
                                  path_cap=self.path_cap,
                                  name=self.name + "/" + "".join(self.vertices[v] for v in range(self.n_vertices) if v not in vmap))


def _parse_relation(data, arrow_index, algebra_arrows, p):
    terms = []
    for term in data:
        if not isinstance(term, dict) or "path" not in term:
            raise SpecFileError(f"relation term {term!r} must be an object with a 'path'")
        coeff = int(term.get("coeff", 1)) % p
        names = term["path"]
        if len(names) < 2:
            raise SpecFileError("relation paths must have length >= 2")
        idxs = []
        for nm in names:
            if nm not in arrow_index:
                raise SpecFileError(f"unknown arrow name {nm!r} in relation")
            idxs.append(arrow_index[nm])
        for a, b in zip(idxs, idxs[1:]):
            if algebra_arrows[a][2] != algebra_arrows[b][1]:
                raise SpecFileError(f"relation path {names} is not composable")
        terms.append((coeff, Path(algebra_arrows[idxs[0]][1], tuple(idxs))))
    if not terms:
        raise SpecFileError("empty relation")
    src = terms[0][1].start
    tgts = set()
    for _, pth in terms:
        if pth.start != src:
            raise SpecFileError("relation terms must share a common source vertex")
        tgts.add(pth.arrows[-1])
    ends = {algebra_arrows[t][2] for t in tgts}
    if len(ends) > 1:
        raise SpecFileError("relation terms must share a common target vertex")
    return [t for t in terms if t[0] != 0]


def from_data(data: dict, path_cap: int = DEFAULT_PATH_CAP, name: str = "A") -> BoundQuiverAlgebra:
    """Build an algebra from the AlgebraSpecFile JSON structure."""
    try:
        p = int(data["field"]["p"])
        quiver = data["quiver"]
        vnames = [str(v) for v in quiver["vertices"]]
    except (KeyError, TypeError) as exc:
        raise SpecFileError(f"malformed algebra spec: {exc}") from exc
    if len(set(vnames)) != len(vnames):
        raise SpecFileError("duplicate vertex names")
    vindex = {v: i for i, v in enumerate(vnames)}
    arrows = []
    arrow_index = {}
    for arr in quiver.get("arrows", []):
        try:
            nm, s, t = str(arr["name"]), str(arr["source"]), str(arr["target"])
        except (KeyError, TypeError) as exc:
            raise SpecFileError(f"malformed arrow {arr!r}") from exc
        if s not in vindex or t not in vindex:
            raise SpecFileError(f"arrow {nm!r} uses unknown vertex")
        if nm in arrow_index:
            raise SpecFileError(f"duplicate arrow name {nm!r}")
        arrow_index[nm] = len(arrows)
        arrows.append((nm, vindex[s], vindex[t]))
    relations = []
    for rel in data.get("relations", []):
        parsed = _parse_relation(rel, arrow_index, arrows, p)
        if parsed:
            relations.append(parsed)
    return BoundQuiverAlgebra(p, vnames, arrows, relations, path_cap=path_cap, name=name)


def parse_algebra(path: str, path_cap: int = DEFAULT_PATH_CAP) -> BoundQuiverAlgebra:
    """Load an AlgebraSpecFile (JSON) from disk."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"invalid JSON in {path}: {exc}") from exc
    name = data.get("name", "A")
    return from_data(data, path_cap=path_cap, name=str(name))


class SCAlgebra:
    """Finite-dimensional algebra given by structure constants.

    table[i, j, :] holds the coordinates of b_i * b_j (b_j applied first).
    `blocks`, when present, records a complete orthogonal idempotent set:
    a list of basis indices acting as the idempotents, plus a block tag
    (row, col) for every basis element with b = e_row * b * e_col.
    """

    def __init__(self, p: int, table: np.ndarray, unit: np.ndarray,
                 blocks: Optional[tuple[tuple[int, ...], tuple[tuple[int, int], ...]]] = None,
                 names: Optional[tuple[str, ...]] = None):
        if not is_prime(p):
            raise UsageError(f"modulus {p} is not prime")
        self.p = p
        self.table = np.asarray(table, dtype=np.int64) % p
        self.dim = self.table.shape[0]
        if self.table.shape != (self.dim, self.dim, self.dim):
            raise UsageError("structure table must be dim^3")
        self.unit_vec = np.asarray(unit, dtype=np.int64) % p
        self.blocks = blocks
        self.names = names or tuple(f"b{i}" for i in range(self.dim))
        self._validate()

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for i in np.nonzero(x)[0]:
            for j in np.nonzero(y)[0]:
                out = (out + int(x[i]) * int(y[j]) * self.table[i, j]) % self.p
        return out

    def _validate(self) -> None:
        p, d, t = self.p, self.dim, self.table
        for i in range(d):
            ei = np.zeros(d, dtype=np.int64)
            ei[i] = 1
            if ((self.multiply(self.unit_vec, ei) - ei) % p).any() or \
               ((self.multiply(ei, self.unit_vec) - ei) % p).any():
                raise UsageError("unit vector fails unitality")
        for i in range(d):
            for j in range(d):
                ij = t[i, j]
                for k in range(d):
                    left = np.zeros(d, dtype=np.int64)
                    for m_ in np.nonzero(ij)[0]:
                        left = (left + int(ij[m_]) * t[m_, k]) % p
                    jk = t[j, k]
                    right = np.zeros(d, dtype=np.int64)
                    for m_ in np.nonzero(jk)[0]:
                        right = (right + int(jk[m_]) * t[i, m_]) % p
                    if ((left - right) % p).any():
                        raise UsageError(f"structure constants are not associative at ({i},{j},{k})")

    def regular_dim(self) -> int:
        return self.dim


def sc_algebra_from_endo(p: int, basis_mats: list[FpMatrix],
                         names: Optional[list[str]] = None) -> SCAlgebra:
    """SCAlgebra from a linearly independent family of endomorphism matrices
    closed under composition, with the product 'x*y applies y first'."""
    d = len(basis_mats)
    if d == 0:
        raise UsageError("empty endomorphism basis")
    n = basis_mats[0].rows
    flat = FpMatrix(p, np.stack([m.a.reshape(-1) for m in basis_mats], axis=1))
    rep = EchelonReport(flat)
    if rep.rank != d:
        raise UsageError("endomorphism basis is not linearly independent")
    table = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            prod = basis_mats[i] @ basis_mats[j]  # apply j first
            coords = rep.solve(FpMatrix(p, prod.a.reshape(-1, 1)))
            if coords is None:
                raise UsageError("endomorphism basis is not closed under composition")
            table[i, j] = coords.a.reshape(-1)
    ident = FpMatrix.identity(p, n)
    unit = rep.solve(FpMatrix(p, ident.a.reshape(-1, 1)))
    if unit is None:
        raise UsageError("identity endomorphism is not in the span of the basis")
    return SCAlgebra(p, table, unit.a.reshape(-1), names=tuple(names) if names else None)
