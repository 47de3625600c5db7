"""Separated disjoint unions of finite metric spaces and their coarse structure.

A space family is a finite list of connected components, each carrying an
exact integer distance table.  Distances between distinct components are
infinite by convention and are never stored as sentinel numbers: component
separation is structural.  Entourages (controlled pair sets) come in two
forms, a radius form ``{(x, y) : d(x, y) <= R}`` and an explicit
per-component pair-set form; both are materialized as sparse boolean blocks.

All objects are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .errors import DisconnectedComponent, EmptyComponent, OutOfRange, SpaceMismatch

__all__ = [
    "Component",
    "SpaceFamily",
    "Entourage",
    "NetExtraction",
    "build_space_from_edges",
    "r_diagonal",
    "compose_entourages",
    "check_monogenic",
    "extract_net",
    "amplify",
    "save_space",
    "load_space",
]


@dataclass(frozen=True)
class Component:
    """One finite connected metric component.

    ``dist`` is the full integer distance table; for edge-built components it
    is the unit-weight shortest-path metric.  ``ball_profile[R]`` is the
    maximum ball cardinality ``max_x #B(x, R)`` for ``R = 0..diameter``;
    beyond the diameter every ball is the whole component.
    """

    size: int
    edges: tuple[tuple[int, int], ...]
    dist: np.ndarray
    diameter: int
    ball_profile: tuple[int, ...]

    @classmethod
    def from_edges(cls, size: int, edges: Iterable[tuple[int, int]]) -> "Component":
        if size <= 0:
            raise EmptyComponent("component must have at least one point")
        canon = set()
        for u, v in edges:
            if not (0 <= u < size and 0 <= v < size):
                raise ValueError(f"edge ({u}, {v}) references a point outside 0..{size - 1}")
            if u == v:
                continue
            canon.add((min(u, v), max(u, v)))
        edge_tuple = tuple(sorted(canon))
        if size == 1:
            dist = np.zeros((1, 1), dtype=np.int32)
        else:
            rows = np.array([e[0] for e in edge_tuple], dtype=np.int64)
            cols = np.array([e[1] for e in edge_tuple], dtype=np.int64)
            data = np.ones(len(edge_tuple), dtype=np.int8)
            adj = sp.csr_matrix(
                (np.concatenate([data, data]),
                 (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
                shape=(size, size),
            )
            d = shortest_path(adj, method="D", unweighted=True)
            if np.isinf(d).any():
                raise DisconnectedComponent(
                    f"component with {size} points is not connected by its edge list"
                )
            dist = d.astype(np.int32)
        return cls._finish(size, edge_tuple, dist)

    @classmethod
    def from_distances(cls, dist: np.ndarray, edges: tuple[tuple[int, int], ...] = ()) -> "Component":
        """Build from an explicit table (used by net extraction).

        Validates the metric axioms; the triangle inequality is checked
        exhaustively.
        """
        dist = np.asarray(dist)
        size = dist.shape[0]
        if size == 0:
            raise EmptyComponent("component must have at least one point")
        if dist.shape != (size, size):
            raise ValueError("distance table must be square")
        if not np.issubdtype(dist.dtype, np.integer):
            raise ValueError("distance table must be integer valued")
        if (dist < 0).any():
            raise ValueError("distances must be nonnegative")
        if not np.array_equal(dist, dist.T):
            raise ValueError("distance table must be symmetric")
        if (np.diag(dist) != 0).any() or ((dist == 0) != np.eye(size, dtype=bool)).any():
            raise ValueError("distance must vanish exactly on the diagonal")
        for j in range(size):
            if (dist > dist[:, j][:, None] + dist[j, :][None, :]).any():
                raise ValueError("distance table violates the triangle inequality")
        return cls._finish(size, edges, dist.astype(np.int32))

    @classmethod
    def _finish(cls, size, edge_tuple, dist) -> "Component":
        diameter = int(dist.max()) if size > 0 else 0
        profile = []
        for radius in range(diameter + 1):
            profile.append(int((dist <= radius).sum(axis=1).max()))
        comp = cls(size, edge_tuple, dist, diameter, tuple(profile))
        comp.dist.setflags(write=False)
        return comp

    def ball_size(self, radius: int) -> int:
        """Maximum cardinality of a ball of the given radius."""
        if radius < 0:
            return 0
        if radius >= self.diameter:
            return self.size
        return self.ball_profile[radius]

    def degree(self, point: int) -> int:
        return int((self.dist[point] == 1).sum())


@dataclass(frozen=True)
class SpaceFamily:
    """Separated disjoint union of finite components."""

    components: tuple[Component, ...]

    def __post_init__(self):
        if not self.components:
            raise EmptyComponent("a space family needs at least one component")

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.components)

    @property
    def total_points(self) -> int:
        return sum(self.sizes)

    def __len__(self) -> int:
        return len(self.components)

    def ball_size(self, radius: int) -> int:
        """Bounded-geometry profile: sup over all points of #B(x, R)."""
        return max(c.ball_size(radius) for c in self.components)

    def same_as(self, other: "SpaceFamily") -> bool:
        return self is other or (
            self.sizes == other.sizes
            and all(np.array_equal(a.dist, b.dist) for a, b in zip(self.components, other.components))
        )

    def check_same(self, other: "SpaceFamily") -> None:
        if not self.same_as(other):
            raise SpaceMismatch("objects belong to different space families")


def build_space_from_edges(components: Sequence[tuple[int, Iterable[tuple[int, int]]]]) -> SpaceFamily:
    """Build a family from ``(point_count, edge_list)`` pairs.

    Each component must be connected; distances are exact unit-weight
    shortest-path distances computed by breadth-first search.
    """
    return SpaceFamily(tuple(Component.from_edges(m, e) for m, e in components))


class Entourage:
    """A set of point pairs, each within a single component.

    Stores one sparse boolean block per component.  ``radius`` is set when
    the entourage is exactly a radius form and is ``None`` for explicit pair
    sets.  ``symmetric`` records closure under transposition; generating
    entourages must carry it, compositions of distinct entourages usually do
    not.
    """

    __slots__ = ("space", "blocks", "radius", "symmetric", "_packed")

    def __init__(self, space: SpaceFamily, blocks: Sequence[sp.spmatrix], radius: Optional[int] = None):
        self.space = space
        canon = []
        symmetric = True
        for comp, blk in zip(space.components, blocks):
            b = sp.csr_matrix(blk, shape=(comp.size, comp.size), dtype=bool)
            b.eliminate_zeros()
            b.sort_indices()
            if (b != b.T).nnz != 0:
                symmetric = False
            canon.append(b)
        self.blocks = tuple(canon)
        self.radius = radius
        self.symmetric = symmetric
        self._packed = None

    def require_symmetric(self, role: str) -> None:
        if not self.symmetric:
            raise ValueError(f"{role} requires a symmetric entourage (E = E^T)")

    @classmethod
    def from_pairs(cls, space: SpaceFamily, pairs_per_component: Sequence[Iterable[tuple[int, int]]],
                   symmetrize: bool = True) -> "Entourage":
        blocks = []
        for comp, pairs in zip(space.components, pairs_per_component):
            pl = list(pairs)
            if pl:
                rows = np.array([p[0] for p in pl])
                cols = np.array([p[1] for p in pl])
                if symmetrize:
                    rows, cols = np.concatenate([rows, cols]), np.concatenate([cols, rows])
                data = np.ones(len(rows), dtype=bool)
                blk = sp.csr_matrix((data, (rows, cols)), shape=(comp.size, comp.size))
            else:
                blk = sp.csr_matrix((comp.size, comp.size), dtype=bool)
            blocks.append(blk)
        return cls(space, blocks)

    @property
    def pair_count(self) -> int:
        return sum(int(b.nnz) for b in self.blocks)

    def pairs(self, comp_index: int) -> tuple[np.ndarray, np.ndarray]:
        coo = self.blocks[comp_index].tocoo()
        return coo.row.copy(), coo.col.copy()

    def _packed_keys(self, comp_index: int) -> np.ndarray:
        if self._packed is None:
            packed = []
            for i, b in enumerate(self.blocks):
                coo = b.tocoo()
                m = self.space.components[i].size
                packed.append(np.sort(coo.row.astype(np.int64) * m + coo.col))
            self._packed = tuple(packed)
        return self._packed[comp_index]

    def contains_pairs(self, comp_index: int, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Vectorized membership test for pairs of one component."""
        m = self.space.components[comp_index].size
        keys = np.asarray(rows, dtype=np.int64) * m + np.asarray(cols, dtype=np.int64)
        table = self._packed_keys(comp_index)
        pos = np.searchsorted(table, keys)
        ok = pos < table.size
        ok[ok] = table[pos[ok]] == keys[ok]
        return ok

    def contains_diagonal(self) -> bool:
        return all(bool(b.diagonal().all()) for b in self.blocks)

    def is_subset(self, other: "Entourage") -> bool:
        self.space.check_same(other.space)
        for a, b in zip(self.blocks, other.blocks):
            if (sp.csr_matrix(a) > sp.csr_matrix(b)).nnz != 0:
                return False
        return True

    def union(self, other: "Entourage") -> "Entourage":
        self.space.check_same(other.space)
        return Entourage(self.space, [a + b for a, b in zip(self.blocks, other.blocks)])

    def with_diagonal(self) -> "Entourage":
        blocks = [b + sp.eye(b.shape[0], dtype=bool, format="csr") for b in self.blocks]
        return Entourage(self.space, blocks, radius=self.radius)

    def max_degree(self) -> int:
        """Largest number of partners of any point (diagonal included)."""
        return max(int(b.sum(axis=1).max()) if b.nnz else 0 for b in self.blocks)

    def max_distance(self) -> int:
        """Largest metric distance over the pair set."""
        worst = 0
        for comp, b in zip(self.space.components, self.blocks):
            if b.nnz:
                coo = b.tocoo()
                worst = max(worst, int(comp.dist[coo.row, coo.col].max()))
        return worst


def r_diagonal(space: SpaceFamily, radius: int) -> Entourage:
    """The set of pairs at distance at most ``radius``, per component."""
    if radius < 0:
        raise OutOfRange("radius must be nonnegative")
    blocks = [sp.csr_matrix(c.dist <= radius) for c in space.components]
    return Entourage(space, blocks, radius=radius)


def compose_entourages(e: Entourage, f: Entourage) -> Entourage:
    """Relation composition ``{(x, y) : exists z, (x, z) in E and (z, y) in F}``."""
    e.space.check_same(f.space)
    blocks = []
    for a, b in zip(e.blocks, f.blocks):
        prod = (a.astype(np.int8) @ b.astype(np.int8)) > 0
        blocks.append(prod)
    return Entourage(e.space, blocks)


def check_monogenic(space: SpaceFamily, e0: Entourage, f: Entourage, n_max: int) -> Optional[int]:
    """Smallest ``n <= n_max`` with ``F`` inside the n-fold composition of ``E0``.

    Returns ``None`` when no such power exists; that is a valid answer, not
    an error.  ``E0`` must be symmetric and contain the diagonal.
    """
    space.check_same(e0.space)
    space.check_same(f.space)
    e0.require_symmetric("a generating entourage")
    if not e0.contains_diagonal():
        raise ValueError("the generating entourage must contain the diagonal")
    power = e0
    for n in range(1, n_max + 1):
        if f.is_subset(power):
            return n
        if n < n_max:
            power = compose_entourages(power, e0)
    return None


@dataclass(frozen=True)
class NetExtraction:
    """A net together with the inclusion of its points into the parent space."""

    space: SpaceFamily
    inclusion: tuple[np.ndarray, ...]  # net point -> original point id, per component


def extract_net(space: SpaceFamily, radius: int) -> NetExtraction:
    """Greedy maximal ``radius``-separated subset in ascending point-id order.

    The returned family carries the restricted metric; every original point
    lies within ``radius`` of the net (within ``radius - 1``, in fact, by
    maximality).
    """
    if radius < 1:
        raise OutOfRange("net radius must be at least 1")
    comps = []
    inclusions = []
    for comp in space.components:
        chosen: list[int] = []
        for x in range(comp.size):
            if all(comp.dist[x, s] >= radius for s in chosen):
                chosen.append(x)
        ids = np.array(chosen, dtype=np.int64)
        sub = comp.dist[np.ix_(ids, ids)]
        comps.append(Component.from_distances(sub))
        inclusions.append(ids)
    return NetExtraction(SpaceFamily(tuple(comps)), tuple(inclusions))


def amplify(space: SpaceFamily, copies: int) -> SpaceFamily:
    """Product with ``{1..N}``: points ``(x, i)`` with metric ``d(x,y) + |i-j|``.

    Realized as a unit-edge graph (level copies of the component plus a
    vertical path over each point), so the stated metric is exact.  Point
    ``(x, i)`` has id ``(i - 1) * size + x`` for levels ``i = 1..N``.
    """
    if copies < 1:
        raise OutOfRange("the number of copies must be at least 1")
    comps = []
    for comp in space.components:
        m = comp.size
        edges = []
        for lvl in range(copies):
            base = lvl * m
            edges.extend((base + u, base + v) for u, v in comp.edges)
        for lvl in range(copies - 1):
            edges.extend((lvl * m + x, (lvl + 1) * m + x) for x in range(m))
        comps.append(Component.from_edges(m * copies, edges))
    return SpaceFamily(tuple(comps))


def save_space(space: SpaceFamily, path) -> None:
    """Write the line-oriented ``space v1`` format.

    Edge-built components dump their edge list; components carrying an
    explicit metric (nets) dump ``dist <u> <v> <d>`` lines for the upper
    triangle instead.
    """
    with open(path, "w") as fh:
        fh.write("space v1\n")
        for i, comp in enumerate(space.components):
            fh.write(f"component {i} {comp.size}\n")
            if comp.edges or comp.size == 1:
                for u, v in comp.edges:
                    fh.write(f"edge {u} {v}\n")
            else:
                for u in range(comp.size):
                    for v in range(u + 1, comp.size):
                        fh.write(f"dist {u} {v} {int(comp.dist[u, v])}\n")


def load_space(path) -> SpaceFamily:
    """Read ``space v1``; validates connectivity (or metric axioms) on load."""
    specs: list[dict] = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "space v1":
            raise ValueError(f"unrecognized space file header: {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "component" and len(parts) == 3:
                specs.append({"size": int(parts[2]), "edges": [], "dists": []})
            elif parts[0] == "edge" and len(parts) == 3:
                if not specs:
                    raise ValueError(f"line {lineno}: edge before any component")
                specs[-1]["edges"].append((int(parts[1]), int(parts[2])))
            elif parts[0] == "dist" and len(parts) == 4:
                if not specs:
                    raise ValueError(f"line {lineno}: dist before any component")
                specs[-1]["dists"].append((int(parts[1]), int(parts[2]), int(parts[3])))
            else:
                raise ValueError(f"line {lineno}: unrecognized line {line!r}")
    comps = []
    for s in specs:
        if s["dists"]:
            if s["edges"]:
                raise ValueError("a component cannot mix edge and dist lines")
            table = np.zeros((s["size"], s["size"]), dtype=np.int64)
            for u, v, d in s["dists"]:
                table[u, v] = table[v, u] = d
            comps.append(Component.from_distances(table))
        else:
            comps.append(Component.from_edges(s["size"], s["edges"]))
    return SpaceFamily(tuple(comps))
