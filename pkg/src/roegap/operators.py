"""Block-sparse finite-propagation operators and partial translations.

Operators are block-diagonal across the components of a space family; each
block is a sparse complex matrix.  The stored pattern is the support:
entries smaller than ``DROP_TOL`` in magnitude are dropped after every
arithmetic operation so that support-based invariants stay faithful.
Propagation (the largest distance over the support) is computed at
construction and cached.

A partial translation is a 0/1 operator whose support is the graph of a
partial injection; a full translation system is an ordered family of
per-component permutations, with the identity in slot 0, whose graphs cover
a designated entourage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, EmptySystem, SupportNotCovered
from .spaces import Entourage, SpaceFamily

__all__ = [
    "DROP_TOL",
    "RoeOperator",
    "DiagonalFunction",
    "PartialTranslation",
    "FullTranslationSystem",
    "row_sums",
    "pt_to_operator",
    "operator_to_pt",
    "l1_norm_upper",
    "apply_operator",
    "save_operator",
    "load_operator",
    "save_partial_translation",
    "load_partial_translation",
    "save_system",
    "load_system",
    "sample_partial_translation",
]

DROP_TOL = 1e-15


def _clean(block: sp.spmatrix, size: int) -> sp.csr_matrix:
    b = sp.csr_matrix(block, shape=(size, size), dtype=np.complex128)
    if b.nnz:
        if not np.isfinite(b.data).all():
            raise ValueError("operator entries must be finite")
        mask = np.abs(b.data) <= DROP_TOL
        if mask.any():
            b.data[mask] = 0
    b.eliminate_zeros()
    b.sort_indices()
    return b


class RoeOperator:
    """A finite-propagation operator over a space family."""

    __slots__ = ("space", "blocks", "propagation")

    def __init__(self, space: SpaceFamily, blocks: Sequence[sp.spmatrix]):
        if len(blocks) != len(space):
            raise ValueError("one block per component required")
        self.space = space
        self.blocks = tuple(_clean(b, c.size) for b, c in zip(blocks, space.components))
        prop = 0
        for comp, blk in zip(space.components, self.blocks):
            if blk.nnz:
                coo = blk.tocoo()
                prop = max(prop, int(comp.dist[coo.row, coo.col].max()))
        self.propagation = prop

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, space: SpaceFamily) -> "RoeOperator":
        return cls(space, [sp.eye(c.size, dtype=np.complex128, format="csr") for c in space.components])

    @classmethod
    def zero(cls, space: SpaceFamily) -> "RoeOperator":
        return cls(space, [sp.csr_matrix((c.size, c.size), dtype=np.complex128) for c in space.components])

    @classmethod
    def from_entries(cls, space: SpaceFamily,
                     entries: Iterable[tuple[int, int, int, complex]]) -> "RoeOperator":
        """Build from ``(component, row, col, value)`` tuples."""
        per_comp: list[list[tuple[int, int, complex]]] = [[] for _ in range(len(space))]
        for ci, r, c, v in entries:
            per_comp[ci].append((r, c, complex(v)))
        blocks = []
        for comp, items in zip(space.components, per_comp):
            if items:
                rows = np.array([t[0] for t in items])
                cols = np.array([t[1] for t in items])
                vals = np.array([t[2] for t in items], dtype=np.complex128)
                blocks.append(sp.csr_matrix((vals, (rows, cols)), shape=(comp.size, comp.size)))
            else:
                blocks.append(sp.csr_matrix((comp.size, comp.size), dtype=np.complex128))
        return cls(space, blocks)

    # -- algebra ---------------------------------------------------------

    def _check(self, other: "RoeOperator") -> None:
        if not isinstance(other, RoeOperator):
            raise TypeError("expected a RoeOperator")
        self.space.check_same(other.space)

    def __add__(self, other: "RoeOperator") -> "RoeOperator":
        self._check(other)
        out = RoeOperator(self.space, [a + b for a, b in zip(self.blocks, other.blocks)])
        assert out.propagation <= max(self.propagation, other.propagation)
        return out

    def __sub__(self, other: "RoeOperator") -> "RoeOperator":
        self._check(other)
        out = RoeOperator(self.space, [a - b for a, b in zip(self.blocks, other.blocks)])
        assert out.propagation <= max(self.propagation, other.propagation)
        return out

    def __mul__(self, scalar: complex) -> "RoeOperator":
        return RoeOperator(self.space, [b * scalar for b in self.blocks])

    __rmul__ = __mul__

    def __matmul__(self, other: "RoeOperator") -> "RoeOperator":
        """Block-wise sparse product; propagation is subadditive."""
        self._check(other)
        out = RoeOperator(self.space, [a @ b for a, b in zip(self.blocks, other.blocks)])
        assert out.propagation <= self.propagation + other.propagation
        return out

    def adjoint(self) -> "RoeOperator":
        """Conjugate transpose; an involutive anti-homomorphism."""
        return RoeOperator(self.space, [b.conjugate().transpose().tocsr() for b in self.blocks])

    def scale_rows(self, f: "DiagonalFunction") -> "RoeOperator":
        self.space.check_same(f.space)
        return RoeOperator(self.space, [sp.diags(v) @ b for v, b in zip(f.values, self.blocks)])

    def scale_cols(self, f: "DiagonalFunction") -> "RoeOperator":
        self.space.check_same(f.space)
        return RoeOperator(self.space, [b @ sp.diags(v) for v, b in zip(f.values, self.blocks)])

    # -- inspection ------------------------------------------------------

    def support(self) -> Entourage:
        """The stored pattern as an explicit (symmetrized) entourage."""
        blocks = []
        for b in self.blocks:
            pattern = sp.csr_matrix((np.ones(b.nnz, dtype=bool), b.nonzero()), shape=b.shape)
            blocks.append(pattern + pattern.T)
        return Entourage(self.space, blocks)

    def support_pairs(self, comp_index: int) -> tuple[np.ndarray, np.ndarray]:
        coo = self.blocks[comp_index].tocoo()
        return coo.row.copy(), coo.col.copy()

    def entry_sup(self) -> float:
        return max((float(np.abs(b.data).max()) if b.nnz else 0.0) for b in self.blocks)

    def is_zero(self) -> bool:
        return all(b.nnz == 0 for b in self.blocks)

    def equals(self, other: "RoeOperator", tol: float = 0.0) -> bool:
        self._check(other)
        for a, b in zip(self.blocks, other.blocks):
            diff = (a - b).tocoo()
            if diff.nnz and (np.abs(diff.data) > tol).any():
                return False
        return True

    def dense(self, comp_index: int) -> np.ndarray:
        return self.blocks[comp_index].toarray()


@dataclass(frozen=True)
class DiagonalFunction:
    """A bounded function on the space, acting as a diagonal operator."""

    space: SpaceFamily
    values: tuple[np.ndarray, ...]

    @classmethod
    def from_arrays(cls, space: SpaceFamily, arrays: Sequence[np.ndarray]) -> "DiagonalFunction":
        vals = []
        for comp, arr in zip(space.components, arrays):
            a = np.asarray(arr, dtype=np.complex128).reshape(comp.size).copy()
            a.setflags(write=False)
            vals.append(a)
        return cls(space, tuple(vals))

    @classmethod
    def constant(cls, space: SpaceFamily, value: complex) -> "DiagonalFunction":
        return cls.from_arrays(space, [np.full(c.size, value) for c in space.components])

    @classmethod
    def indicator(cls, space: SpaceFamily, points: Sequence[Iterable[int]]) -> "DiagonalFunction":
        arrays = []
        for comp, pts in zip(space.components, points):
            a = np.zeros(comp.size)
            a[list(pts)] = 1.0
            arrays.append(a)
        return cls.from_arrays(space, arrays)

    def to_operator(self) -> RoeOperator:
        return RoeOperator(self.space, [sp.diags(v).tocsr() for v in self.values])

    def sup_norm(self) -> float:
        return max(float(np.abs(v).max()) if v.size else 0.0 for v in self.values)

    def __add__(self, other: "DiagonalFunction") -> "DiagonalFunction":
        self.space.check_same(other.space)
        return DiagonalFunction.from_arrays(self.space, [a + b for a, b in zip(self.values, other.values)])

    def allclose(self, other: "DiagonalFunction", tol: float = 0.0) -> bool:
        self.space.check_same(other.space)
        return all(np.abs(a - b).max() <= tol if a.size else True
                   for a, b in zip(self.values, other.values))


def row_sums(op: RoeOperator) -> DiagonalFunction:
    """Row-sum function of an operator.

    Linear in the operator; sends a partial translation to the indicator of
    its range.
    """
    arrays = [np.asarray(b.sum(axis=1)).ravel() for b in op.blocks]
    return DiagonalFunction.from_arrays(op.space, arrays)


class PartialTranslation:
    """A partial injection stored as per-component pair arrays.

    Pair ``(x, y)`` means the underlying map sends ``y`` to ``x`` (matrix
    entry at row ``x``, column ``y`` equals 1).  Rows are unique and columns
    are unique within each component.
    """

    __slots__ = ("space", "rows", "cols")

    def __init__(self, space: SpaceFamily, pairs: Sequence[tuple[np.ndarray, np.ndarray]],
                 entourage: Optional[Entourage] = None):
        if len(pairs) != len(space):
            raise ValueError("one pair set per component required")
        self.space = space
        rows_out, cols_out = [], []
        for ci, (comp, (r, c)) in enumerate(zip(space.components, pairs)):
            r = np.asarray(r, dtype=np.int64)
            c = np.asarray(c, dtype=np.int64)
            if r.shape != c.shape:
                raise ValueError("row and column arrays must have equal length")
            if r.size:
                if r.min() < 0 or r.max() >= comp.size or c.min() < 0 or c.max() >= comp.size:
                    raise ValueError("pair references a point outside the component")
                if np.unique(r).size != r.size:
                    raise ValueError("a range point is hit twice; not a partial injection")
                if np.unique(c).size != c.size:
                    raise ValueError("a domain point is used twice; not a partial injection")
                order = np.argsort(c)
                r, c = r[order].copy(), c[order].copy()
            if entourage is not None and r.size:
                ok = entourage.contains_pairs(ci, r, c)
                if not ok.all():
                    bad = int(np.argmin(ok))
                    raise SupportNotCovered(
                        f"pair ({int(r[bad])}, {int(c[bad])}) in component {ci} "
                        "lies outside the declared entourage")
            r.setflags(write=False)
            c.setflags(write=False)
            rows_out.append(r)
            cols_out.append(c)
        self.rows = tuple(rows_out)
        self.cols = tuple(cols_out)

    @classmethod
    def identity_on(cls, space: SpaceFamily, points: Sequence[Iterable[int]]) -> "PartialTranslation":
        pairs = []
        for pts in points:
            ids = np.array(sorted(set(pts)), dtype=np.int64)
            pairs.append((ids, ids))
        return cls(space, pairs)

    @classmethod
    def empty(cls, space: SpaceFamily) -> "PartialTranslation":
        z = np.zeros(0, dtype=np.int64)
        return cls(space, [(z, z) for _ in space.components])

    def pair_count(self) -> int:
        return sum(int(r.size) for r in self.rows)

    def domain(self, comp_index: int) -> np.ndarray:
        return self.cols[comp_index]

    def range(self, comp_index: int) -> np.ndarray:
        return self.rows[comp_index]

    def range_indicator(self) -> DiagonalFunction:
        return DiagonalFunction.indicator(self.space, [set(r.tolist()) for r in self.rows])


def pt_to_operator(v: PartialTranslation) -> RoeOperator:
    blocks = []
    for comp, r, c in zip(v.space.components, v.rows, v.cols):
        data = np.ones(r.size, dtype=np.complex128)
        blocks.append(sp.csr_matrix((data, (r, c)), shape=(comp.size, comp.size)))
    return RoeOperator(v.space, blocks)


def operator_to_pt(op: RoeOperator) -> Optional[PartialTranslation]:
    """Inverse of ``pt_to_operator`` when the pattern qualifies, else ``None``."""
    pairs = []
    for b in op.blocks:
        coo = b.tocoo()
        if coo.nnz:
            if not np.allclose(coo.data, 1.0):
                return None
            if np.unique(coo.row).size != coo.nnz or np.unique(coo.col).size != coo.nnz:
                return None
        pairs.append((coo.row.astype(np.int64), coo.col.astype(np.int64)))
    return PartialTranslation(op.space, pairs)


class FullTranslationSystem:
    """Ordered family of per-component permutations covering an entourage.

    ``perms[i][c][y]`` is the image of point ``y`` of component ``c`` under
    the ``i``-th translation; slot 0 is always the identity.  The graph of
    every member lies inside ``entourage`` (fixed points count as diagonal
    pairs, so the entourage must contain the diagonal), and the union of the
    graphs covers it.
    """

    __slots__ = ("space", "perms", "entourage", "inverse_closed", "labels")

    def __init__(self, space: SpaceFamily, perms: Sequence[Sequence[np.ndarray]],
                 entourage: Entourage, labels: Optional[Sequence[str]] = None,
                 validate: bool = True):
        if not perms:
            raise EmptySystem("a translation system needs at least one member")
        space.check_same(entourage.space)
        entourage.require_symmetric("a translation system entourage")
        self.space = space
        canon = []
        for i, per_comp in enumerate(perms):
            row = []
            for comp, sigma in zip(space.components, per_comp):
                s = np.asarray(sigma, dtype=np.int64).reshape(comp.size).copy()
                s.setflags(write=False)
                row.append(s)
            canon.append(tuple(row))
        self.perms = tuple(canon)
        self.entourage = entourage
        self.labels = tuple(labels) if labels is not None else None
        if validate:
            self._validate()
        self.inverse_closed = self._compute_inverse_closed()

    def _validate(self) -> None:
        for ci, comp in enumerate(self.space.components):
            ident = np.arange(comp.size)
            if not np.array_equal(self.perms[0][ci], ident):
                raise ValueError("slot 0 of a translation system must be the identity")
            domain = np.arange(comp.size)
            covered = np.zeros(self.entourage.blocks[ci].nnz, dtype=bool)
            erows, ecols = self.entourage.pairs(ci)
            for i, sigma_all in enumerate(self.perms):
                sigma = sigma_all[ci]
                if np.unique(sigma).size != comp.size:
                    raise ValueError(f"member {i} is not a bijection on component {ci}")
                inside = self.entourage.contains_pairs(ci, sigma, domain)
                if not inside.all():
                    y = int(np.argmin(inside))
                    raise SupportNotCovered(
                        f"member {i} moves {y} to {int(sigma[y])} outside the entourage "
                        f"in component {ci}")
                covered |= sigma[ecols] == erows
            if not covered.all():
                j = int(np.argmin(covered))
                raise SupportNotCovered(
                    f"entourage pair ({int(erows[j])}, {int(ecols[j])}) of component {ci} "
                    "is not covered by any member")

    def _compute_inverse_closed(self) -> bool:
        # multiset comparison: multiplicity matters for the symmetry of averages
        from collections import Counter
        keys = Counter(tuple(tuple(s.tolist()) for s in sigma_all)
                       for sigma_all in self.perms)
        inv_keys = Counter(tuple(tuple(np.argsort(s).tolist()) for s in sigma_all)
                           for sigma_all in self.perms)
        return keys == inv_keys

    def __len__(self) -> int:
        return len(self.perms)

    def member_operator(self, index: int) -> RoeOperator:
        blocks = []
        for comp, sigma in zip(self.space.components, self.perms[index]):
            data = np.ones(comp.size, dtype=np.complex128)
            cols = np.arange(comp.size)
            blocks.append(sp.csr_matrix((data, (sigma, cols)), shape=(comp.size, comp.size)))
        return RoeOperator(self.space, blocks)

    def member_pt(self, index: int) -> PartialTranslation:
        pairs = []
        for comp, sigma in zip(self.space.components, self.perms[index]):
            cols = np.arange(comp.size, dtype=np.int64)
            pairs.append((sigma, cols))
        return PartialTranslation(self.space, pairs)

    def raised(self, power: int) -> "FullTranslationSystem":
        """System of all ``power``-fold products, covering the composed entourage.

        Products are ordered lexicographically by index tuple and de-duplicated
        keeping the first occurrence, so the result is deterministic.
        """
        from .spaces import compose_entourages
        if power < 1:
            raise ValueError("power must be at least 1")
        if power == 1:
            return self
        ent = self.entourage
        for _ in range(power - 1):
            ent = compose_entourages(ent, self.entourage)
        current: list[tuple] = [tuple(np.arange(c.size) for c in self.space.components)]
        for _ in range(power):
            nxt = []
            for prefix in current:
                for sigma_all in self.perms:
                    nxt.append(tuple(sigma[pref] for sigma, pref in zip(sigma_all, prefix)))
            current = nxt
        seen = set()
        out = []
        for cand in current:
            key = tuple(tuple(arr.tolist()) for arr in cand)
            if key not in seen:
                seen.add(key)
                out.append(cand)
        return FullTranslationSystem(self.space, out, ent)


def l1_norm_upper(op: RoeOperator, system: FullTranslationSystem, raise_power: int = 1) -> float:
    """Upper bound for the decomposition norm via canonical routing.

    Every entry ``(x, y)`` is routed to the lowest-indexed member whose graph
    contains the pair; the result ``sum_i sup |f_i|`` bounds the infimum over
    all decompositions from above.  Raising the system by composition widens
    the covered entourage when the support needs it.
    """
    op.space.check_same(system.space)
    sys_use = system.raised(raise_power) if raise_power > 1 else system
    total = np.zeros(len(sys_use))
    for ci, comp in enumerate(op.space.components):
        rows, cols = op.support_pairs(ci)
        if rows.size == 0:
            continue
        vals = np.abs(op.blocks[ci].tocoo().data)
        routed = np.zeros(rows.size, dtype=bool)
        for i, sigma_all in enumerate(sys_use.perms):
            sigma = sigma_all[ci]
            hit = (~routed) & (sigma[cols] == rows)
            if hit.any():
                total[i] = max(total[i], float(vals[hit].max()))
                routed |= hit
        if not routed.all():
            j = int(np.argmin(routed))
            raise SupportNotCovered(
                f"support pair ({int(rows[j])}, {int(cols[j])}) in component {ci} "
                "is not covered by the system")
    return float(total.sum())


def apply_operator(op: RoeOperator, vectors: Sequence[np.ndarray],
                   components: Optional[Sequence[int]] = None) -> list[np.ndarray]:
    """Sparse matrix-vector product, per component.

    ``vectors`` holds one array per selected component (all components when
    ``components`` is None).
    """
    sel = range(len(op.space)) if components is None else components
    sel = list(sel)
    if len(vectors) != len(sel):
        raise DimensionMismatch("one vector per selected component required")
    out = []
    for ci, vec in zip(sel, vectors):
        v = np.asarray(vec)
        if v.shape[0] != op.space.components[ci].size:
            raise DimensionMismatch(
                f"vector of length {v.shape[0]} against component of size "
                f"{op.space.components[ci].size}")
        out.append(op.blocks[ci] @ v)
    return out


def sample_partial_translation(entourage: Entourage, rng: np.random.Generator,
                               fraction: float = 0.5) -> PartialTranslation:
    """Random partial translation supported in the entourage.

    A random subset of the pair set is shuffled and pairs are kept greedily
    whenever they preserve the partial-injection property.
    """
    pairs = []
    for ci, comp in enumerate(entourage.space.components):
        rows, cols = entourage.pairs(ci)
        if rows.size == 0:
            z = np.zeros(0, dtype=np.int64)
            pairs.append((z, z))
            continue
        take = rng.random(rows.size) < fraction
        idx = np.flatnonzero(take)
        rng.shuffle(idx)
        used_r = np.zeros(comp.size, dtype=bool)
        used_c = np.zeros(comp.size, dtype=bool)
        keep_r, keep_c = [], []
        for j in idx:
            r, c = int(rows[j]), int(cols[j])
            if not used_r[r] and not used_c[c]:
                used_r[r] = used_c[c] = True
                keep_r.append(r)
                keep_c.append(c)
        pairs.append((np.array(keep_r, dtype=np.int64), np.array(keep_c, dtype=np.int64)))
    return PartialTranslation(entourage.space, pairs, entourage=entourage)


# -- file formats --------------------------------------------------------


def save_operator(op: RoeOperator, path) -> None:
    with open(path, "w") as fh:
        fh.write("roeop v1\n")
        for ci in range(len(op.space)):
            coo = op.blocks[ci].tocoo()
            for r, c, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"entry {ci} {r} {c} {float(v.real)!r} {float(v.imag)!r}\n")


def load_operator(space: SpaceFamily, path) -> RoeOperator:
    entries = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "roeop v1":
            raise ValueError(f"unrecognized operator file header: {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] != "entry" or len(parts) != 6:
                raise ValueError(f"line {lineno}: unrecognized line {line!r}")
            entries.append((int(parts[1]), int(parts[2]), int(parts[3]),
                            complex(float(parts[4]), float(parts[5]))))
    return RoeOperator.from_entries(space, entries)


def save_partial_translation(v: PartialTranslation, path) -> None:
    with open(path, "w") as fh:
        fh.write("pt v1\n")
        for ci in range(len(v.space)):
            for x, y in zip(v.rows[ci], v.cols[ci]):
                fh.write(f"pair {ci} {x} {y}\n")


def load_partial_translation(space: SpaceFamily, path,
                             entourage: Optional[Entourage] = None) -> PartialTranslation:
    per_comp: list[tuple[list[int], list[int]]] = [([], []) for _ in range(len(space))]
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "pt v1":
            raise ValueError(f"unrecognized translation file header: {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] != "pair" or len(parts) != 4:
                raise ValueError(f"line {lineno}: unrecognized line {line!r}")
            ci = int(parts[1])
            per_comp[ci][0].append(int(parts[2]))
            per_comp[ci][1].append(int(parts[3]))
    pairs = [(np.array(r, dtype=np.int64), np.array(c, dtype=np.int64)) for r, c in per_comp]
    return PartialTranslation(space, pairs, entourage=entourage)


def save_system(system: FullTranslationSystem, path) -> None:
    with open(path, "w") as fh:
        fh.write("system v1\n")
        for ci in range(len(system.space)):
            fh.write(f"component {ci}\n")
            for i, sigma_all in enumerate(system.perms):
                images = ",".join(str(int(x)) for x in sigma_all[ci])
                fh.write(f"perm {i} {images}\n")


def load_system(space: SpaceFamily, path, entourage: Optional[Entourage] = None) -> FullTranslationSystem:
    """Read ``system v1``; the covered entourage defaults to the union of graphs."""
    per_comp_perms: dict[int, dict[int, np.ndarray]] = {}
    current = -1
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "system v1":
            raise ValueError(f"unrecognized system file header: {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "component" and len(parts) == 2:
                current = int(parts[1])
                per_comp_perms.setdefault(current, {})
            elif parts[0] == "perm" and len(parts) == 3:
                if current < 0:
                    raise ValueError(f"line {lineno}: perm before any component")
                per_comp_perms[current][int(parts[1])] = np.array(
                    [int(t) for t in parts[2].split(",")], dtype=np.int64)
            else:
                raise ValueError(f"line {lineno}: unrecognized line {line!r}")
    counts = {len(d) for d in per_comp_perms.values()}
    if len(counts) != 1:
        raise ValueError("every component must carry the same number of perms")
    n = counts.pop()
    perms = []
    for i in range(n):
        row = []
        for ci in range(len(space)):
            if ci not in per_comp_perms or i not in per_comp_perms[ci]:
                raise ValueError(f"missing perm {i} for component {ci}")
            row.append(per_comp_perms[ci][i])
        perms.append(row)
    if entourage is None:
        pair_sets = []
        for ci, comp in enumerate(space.components):
            cols = np.arange(comp.size)
            rows = np.concatenate([perms[i][ci] for i in range(n)])
            pair_sets.append(list(zip(rows.tolist(), np.tile(cols, n).tolist())))
        entourage = Entourage.from_pairs(space, pair_sets).with_diagonal()
    return FullTranslationSystem(space, perms, entourage)
