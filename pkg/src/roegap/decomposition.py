"""Constructive decomposition of partial translations over a covered entourage.

The off-diagonal part of a generating entourage is split into matchings by a
greedy proper edge coloring (edges in lexicographic order, lowest free color
at both endpoints).  Each matching becomes an involution that swaps its
edges and fixes everything else; together with the identity these form a
full translation system covering the entourage, so any partial translation
supported inside it splits as a sum of indicator functions times system
members.  Routing is deterministic: every support pair goes to the
lowest-indexed member whose graph contains it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SupportNotCovered
from .operators import (DiagonalFunction, FullTranslationSystem, PartialTranslation,
                        row_sums, pt_to_operator)
from .spaces import Entourage

__all__ = [
    "MatchingCover",
    "entourage_matchings",
    "full_system_from_matchings",
    "decompose",
    "cayley_decompose",
    "verify_decomposition",
    "save_decomposition",
]


@dataclass(frozen=True)
class MatchingCover:
    """Disjoint matchings covering the off-diagonal part of an entourage.

    ``matchings[j][c]`` lists the (u, v) edges of color ``j`` in component
    ``c``.  The greedy color count never exceeds ``2 * maxdeg - 1``.
    """

    entourage: Entourage
    matchings: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]

    @property
    def color_count(self) -> int:
        return len(self.matchings)


def entourage_matchings(e0: Entourage) -> MatchingCover:
    """Greedy proper edge coloring of the off-diagonal entourage graph."""
    e0.require_symmetric("a matching cover")
    space = e0.space
    per_color: list[list[list[tuple[int, int]]]] = []
    for ci, comp in enumerate(space.components):
        rows, cols = e0.pairs(ci)
        mask = rows < cols
        edges = sorted(zip(rows[mask].tolist(), cols[mask].tolist()))
        point_colors: list[set[int]] = [set() for _ in range(comp.size)]
        for u, v in edges:
            color = 0
            taken = point_colors[u] | point_colors[v]
            while color in taken:
                color += 1
            point_colors[u].add(color)
            point_colors[v].add(color)
            while color >= len(per_color):
                per_color.append([[] for _ in range(len(space))])
            per_color[color][ci].append((u, v))
    matchings = tuple(
        tuple(tuple(sorted(per_color[j][ci])) for ci in range(len(space)))
        for j in range(len(per_color))
    )
    return MatchingCover(e0, matchings)


def full_system_from_matchings(cover: MatchingCover) -> FullTranslationSystem:
    """Identity plus one swap involution per matching.

    Swapped pairs are entourage pairs by construction and fixed points
    contribute diagonal pairs, so the entourage must contain the diagonal.
    """
    space = cover.entourage.space
    ent = cover.entourage if cover.entourage.contains_diagonal() else cover.entourage.with_diagonal()
    members = [[np.arange(c.size) for c in space.components]]
    labels = ["id"]
    for j, per_comp in enumerate(cover.matchings):
        row = []
        for comp, edges in zip(space.components, per_comp):
            sigma = np.arange(comp.size)
            for u, v in edges:
                sigma[u], sigma[v] = v, u
            row.append(sigma)
        members.append(row)
        labels.append(f"m{j}")
    return FullTranslationSystem(space, members, ent, labels=labels)


def decompose(v: PartialTranslation, system: FullTranslationSystem) -> list[DiagonalFunction]:
    """Indicator functions ``chi_i`` with ``sum_i chi_i A_i`` equal to ``v``.

    The supports of the ``chi_i`` are pairwise disjoint and sum to the
    row-sum function of ``v``.  Raises when a support pair is covered by no
    member, which indicates a corrupted system.
    """
    v.space.check_same(system.space)
    n = len(system)
    chis = [[np.zeros(c.size) for c in v.space.components] for _ in range(n)]
    for ci in range(len(v.space)):
        rows, cols = v.rows[ci], v.cols[ci]
        if rows.size == 0:
            continue
        routed = np.zeros(rows.size, dtype=bool)
        for i in range(n):
            sigma = system.perms[i][ci]
            hit = (~routed) & (sigma[cols] == rows)
            if hit.any():
                chis[i][ci][rows[hit]] = 1.0
                routed |= hit
            if routed.all():
                break
        if not routed.all():
            j = int(np.argmin(routed))
            raise SupportNotCovered(
                f"pair ({int(rows[j])}, {int(cols[j])}) of component {ci} is covered "
                "by no system member")
    return [DiagonalFunction.from_arrays(v.space, arrays) for arrays in chis]


def cayley_decompose(v: PartialTranslation, system: FullTranslationSystem) -> list[DiagonalFunction]:
    """Routing by generator label on a Cayley system.

    Identical contract to :func:`decompose`; the system must carry generator
    labels (identity first), so the routing needs no coloring step.
    """
    if system.labels is None or system.labels[0] != "id":
        raise ValueError("cayley_decompose expects a generator-labeled system")
    return decompose(v, system)


def verify_decomposition(v: PartialTranslation, system: FullTranslationSystem,
                         chis: list[DiagonalFunction]) -> dict:
    """Exact reconstruction, disjointness, and mass checks.

    Returns a dict of booleans; all three must hold for every valid
    decomposition.
    """
    space = v.space
    reconstruction = True
    for ci in range(len(space)):
        got = []
        for i, chi in enumerate(chis):
            supp = np.flatnonzero(chi.values[ci].real > 0.5)
            sigma_inv = np.argsort(system.perms[i][ci])
            got.extend(zip(supp.tolist(), sigma_inv[supp].tolist()))
        want = sorted(zip(v.rows[ci].tolist(), v.cols[ci].tolist()))
        if sorted(got) != want:
            reconstruction = False
            break
    disjoint = True
    for ci, comp in enumerate(space.components):
        total = np.zeros(comp.size)
        for chi in chis:
            total += chi.values[ci].real
        if (total > 1.5).any():
            disjoint = False
            break
    mass_fn = row_sums(pt_to_operator(v))
    summed = chis[0]
    for chi in chis[1:]:
        summed = summed + chi
    mass = summed.allclose(mass_fn, tol=0.0)
    return {"reconstruction": reconstruction, "disjoint": disjoint, "mass": mass,
            "ok": reconstruction and disjoint and mass}


def save_decomposition(chis: list[DiagonalFunction], path) -> None:
    """Write ``decomp v1``: one line per covered point of each indicator."""
    with open(path, "w") as fh:
        fh.write("decomp v1\n")
        for i, chi in enumerate(chis):
            for ci, vals in enumerate(chi.values):
                for point in np.flatnonzero(vals.real > 0.5):
                    fh.write(f"chi {i} {ci} {int(point)}\n")
