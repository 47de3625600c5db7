"""Concrete families: cycles, torus grids, dihedral, symmetric, SL2 over primes.

Each family is a separated disjoint union of Cayley graphs together with the
canonical translation system read off the labeled generators: slot 0 is the
identity and slot k acts by right multiplication with the k-th generator.
When generator counts differ across components the shorter lists are padded
with the identity, which keeps the index set of the system uniform.

Group elements are canonicalized to hashable integer data (integers mod n,
tuples mod n, one-line permutations, 2x2 matrices with entries reduced mod
p), so translation maps are exact integer maps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (BudgetExceeded, InvalidFiltration, NonSymmetricGenerators,
                     NotGenerating, NotPrime)
from .operators import FullTranslationSystem
from .spaces import Component, Entourage, SpaceFamily

__all__ = [
    "GroupSpec",
    "GroupTable",
    "CayleyFamily",
    "cyclic_group",
    "torus_group",
    "dihedral_group",
    "symmetric_group",
    "sl2_group",
    "cayley_component",
    "box_space",
    "box_space_from_filtration",
    "quotient_group",
    "sl2_family",
    "dihedral_family",
    "symmetric_family",
    "family_from_descriptor",
]

DEFAULT_BUDGET = 50_000


@dataclass(frozen=True)
class GroupSpec:
    """Descriptor for a built-in family.

    The emitted translation system always carries the identity at slot 0 and
    the labeled generators afterwards; the averaging count of downstream
    operators therefore includes the identity.
    """

    kind: str                    # cyclic | torus | dihedral | symmetric | sl2
    params: tuple[int, ...]      # cycle lengths, grid sides, degrees, or primes
    dims: int = 1                # torus dimension


@dataclass(frozen=True)
class GroupTable:
    """A finite group with a labeled symmetric generator set."""

    elements: tuple
    identity: object
    generators: tuple
    labels: tuple[str, ...]
    mul: Callable

    def index(self) -> dict:
        return {g: i for i, g in enumerate(self.elements)}


@dataclass(frozen=True)
class CayleyFamily:
    """A generated family plus the group metadata the tests lean on."""

    space: SpaceFamily
    system: FullTranslationSystem
    groups: tuple[GroupTable, ...]
    label: str


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- concrete groups -----------------------------------------------------


def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise ValueError("cycle length must be positive")
    mul = lambda a, b: (a + b) % n
    gen_elems = () if n == 1 else (1 % n, (n - 1) % n)
    elements = tuple(range(n))
    return GroupTable(elements, 0, gen_elems, ("r", "r_inv")[: len(gen_elems)], mul)


def torus_group(n: int, dims: int = 2) -> GroupTable:
    if n < 1 or dims < 1:
        raise ValueError("grid side and dimension must be positive")
    def mul(a, b):
        return tuple((x + y) % n for x, y in zip(a, b))
    identity = (0,) * dims
    gens, labels = [], []
    if n > 1:
        for d in range(dims):
            e = [0] * dims
            e[d] = 1 % n
            gens.append(tuple(e))
            labels.append(f"e{d}")
            e[d] = (n - 1) % n
            gens.append(tuple(e))
            labels.append(f"e{d}_inv")
    elements = []
    stack = [()]
    for _ in range(dims):
        stack = [t + (k,) for t in stack for k in range(n)]
    elements = tuple(stack)
    return GroupTable(elements, identity, tuple(gens), tuple(labels), mul)


def dihedral_group(n: int) -> GroupTable:
    """Order-2n dihedral group; elements (rotation, flip bit)."""
    if n < 1:
        raise ValueError("dihedral parameter must be positive")
    def mul(a, b):
        r1, f1 = a
        r2, f2 = b
        return ((r1 + (r2 if f1 == 0 else -r2)) % n, f1 ^ f2)
    elements = tuple((r, f) for f in (0, 1) for r in range(n))
    gens = [(1 % n, 0), ((n - 1) % n, 0), (0, 1)]
    labels = ("r", "r_inv", "s")
    return GroupTable(elements, (0, 0), tuple(gens), labels, mul)


def symmetric_group(n: int) -> GroupTable:
    """S_n with the adjacent transposition and the full cycle."""
    import itertools
    if n < 1:
        raise ValueError("symmetric degree must be positive")
    def mul(a, b):  # (a o b)(i) = a[b[i]]
        return tuple(a[b[i]] for i in range(n))
    identity = tuple(range(n))
    elements = tuple(itertools.permutations(range(n)))
    gens, labels = [], []
    if n >= 2:
        t = list(range(n))
        t[0], t[1] = t[1], t[0]
        gens.append(tuple(t))
        labels.append("t")
    if n >= 3:
        c = tuple(list(range(1, n)) + [0])
        c_inv = tuple([n - 1] + list(range(n - 1)))
        gens.extend([c, c_inv])
        labels.extend(["c", "c_inv"])
    return GroupTable(elements, identity, tuple(gens), tuple(labels), mul)


def sl2_group(p: int) -> GroupTable:
    """SL2 over the prime field, with the four elementary generators."""
    if not _is_prime(p) or p < 3:
        raise NotPrime(f"{p} is not an odd prime")
    def mul(a, b):
        return ((a[0] * b[0] + a[1] * b[2]) % p, (a[0] * b[1] + a[1] * b[3]) % p,
                (a[2] * b[0] + a[3] * b[2]) % p, (a[2] * b[1] + a[3] * b[3]) % p)
    identity = (1, 0, 0, 1)
    gens = ((1, 1, 0, 1), (1, p - 1, 0, 1), (1, 0, 1, 1), (1, 0, p - 1, 1))
    labels = ("u", "u_inv", "l", "l_inv")
    elements = _closure(identity, gens, mul, budget=p * (p * p - 1))
    expected = p * (p * p - 1)
    if len(elements) != expected:
        raise NotGenerating(f"closure reached {len(elements)} of {expected} elements")
    return GroupTable(tuple(elements), identity, gens, labels, mul)


def _closure(identity, generators, mul, budget: int) -> list:
    order = [identity]
    seen = {identity}
    q = deque([identity])
    while q:
        x = q.popleft()
        for s in generators:
            y = mul(x, s)
            if y not in seen:
                if len(order) >= budget:
                    raise BudgetExceeded("group closure exceeded the point budget")
                seen.add(y)
                order.append(y)
                q.append(y)
    return order


# -- Cayley assembly -----------------------------------------------------


def _check_symmetric_generators(group: GroupTable) -> None:
    gens = set(group.generators)
    for g in group.generators:
        if not any(group.mul(g, h) == group.identity for h in gens):
            raise NonSymmetricGenerators(f"generator {g!r} has no inverse in the set")


def _cayley_data(group: GroupTable) -> tuple[Component, list[np.ndarray], list[tuple[int, int]]]:
    """Component, one permutation per generator, and the generator pair set."""
    _check_symmetric_generators(group)
    idx = group.index()
    if group.elements[0] != group.identity:
        raise ValueError("element order must start at the identity")
    reached = _closure(group.identity, group.generators, group.mul, budget=len(group.elements) + 1)
    if len(reached) != len(group.elements):
        raise NotGenerating(
            f"generators reach {len(reached)} of {len(group.elements)} elements")
    m = len(group.elements)
    edges = set()
    perms = []
    pairs = []
    for s in group.generators:
        sigma = np.empty(m, dtype=np.int64)
        for y, g in enumerate(group.elements):
            x = idx[group.mul(g, s)]
            sigma[y] = x
            pairs.append((x, y))
            if x != y:
                edges.add((min(x, y), max(x, y)))
        perms.append(sigma)
    comp = Component.from_edges(m, edges) if m > 1 else Component.from_edges(1, [])
    return comp, perms, pairs


def cayley_component(group: GroupTable) -> CayleyFamily:
    """Single-component Cayley graph plus its generator translation system."""
    comp, perms, pairs = _cayley_data(group)
    space = SpaceFamily((comp,))
    e0 = Entourage.from_pairs(space, [pairs]).with_diagonal()
    members = [[np.arange(comp.size)]]
    labels = ["id"]
    members.extend([sigma] for sigma in perms)
    labels.extend(group.labels)
    system = FullTranslationSystem(space, members, e0, labels=labels)
    return CayleyFamily(space, system, (group,), label="cayley")


def _assemble_family(groups: Sequence[GroupTable], label: str) -> CayleyFamily:
    data = [_cayley_data(g) for g in groups]
    space = SpaceFamily(tuple(d[0] for d in data))
    e0 = Entourage.from_pairs(space, [d[2] for d in data]).with_diagonal()
    max_gens = max(len(g.generators) for g in groups)
    members: list[list[np.ndarray]] = [[np.arange(c.size) for c in space.components]]
    labels: list[str] = ["id"]
    for k in range(max_gens):
        row = []
        for (comp, perms, _), g in zip(data, groups):
            if k < len(perms):
                row.append(perms[k])
            else:
                # identity padding keeps the member count uniform
                row.append(np.arange(comp.size))
        members.append(row)
        labels.append(f"g{k}")
    system = FullTranslationSystem(space, members, e0, labels=labels)
    return CayleyFamily(space, system, tuple(groups), label=label)


# -- built-in families ---------------------------------------------------


def _check_filtration(params: Sequence[int]) -> None:
    if not params or any(n < 1 for n in params):
        raise InvalidFiltration("filtration sizes must be positive")
    for a, b in zip(params, params[1:]):
        if b % a != 0:
            raise InvalidFiltration(f"{a} does not divide {b}: quotients are not nested")


def box_space(spec: GroupSpec, budget: int = DEFAULT_BUDGET) -> CayleyFamily:
    """Quotient Cayley graphs along a nested filtration (cyclic or torus).

    The quotient metric equals the word metric of the quotient Cayley graph
    for normal subgroups, so each component is exact.
    """
    if spec.kind == "cyclic":
        _check_filtration(spec.params)
        groups = [cyclic_group(n) for n in spec.params]
        label = "cyclic"
    elif spec.kind == "torus":
        _check_filtration(spec.params)
        groups = [torus_group(n, spec.dims) for n in spec.params]
        label = "torus"
    else:
        raise InvalidFiltration(f"no built-in filtration for kind {spec.kind!r}")
    total = sum(len(g.elements) for g in groups)
    if total > budget:
        raise BudgetExceeded(f"{total} points exceed the budget of {budget}")
    return _assemble_family(groups, label)


def _inverse_map(group: GroupTable) -> dict:
    inv = {}
    for g in group.elements:
        for h in group.elements:
            if group.mul(g, h) == group.identity:
                inv[g] = h
                break
    return inv


def quotient_group(group: GroupTable, subgroup: frozenset) -> GroupTable:
    """Quotient by a normal subgroup, generators mapped to coset representatives.

    Cosets are represented by their earliest member in the parent element
    order, which keeps every map an exact integer map.
    """
    idx = group.index()
    rep_of: dict = {}
    reps: list = []
    for g in group.elements:
        coset = frozenset(group.mul(g, n) for n in subgroup)
        if coset not in rep_of:
            rep = min(coset, key=lambda x: idx[x])
            rep_of[coset] = rep
            reps.append(rep)

    def to_rep(g):
        return rep_of[frozenset(group.mul(g, n) for n in subgroup)]

    ident = to_rep(group.identity)
    elements = [ident] + [r for r in reps if r != ident]

    def mul(a, b):
        return to_rep(group.mul(a, b))

    gens = tuple(to_rep(s) for s in group.generators)
    return GroupTable(tuple(elements), ident, gens, group.labels, mul)


def box_space_from_filtration(group: GroupTable, filtration: Sequence[Iterable],
                              budget: int = DEFAULT_BUDGET) -> CayleyFamily:
    """Quotient Cayley graphs of an explicit finite group along nested normal
    subgroups; one component per filtration step."""
    inv = _inverse_map(group)
    subgroups = [frozenset(s) for s in filtration]
    for ni in subgroups:
        if group.identity not in ni:
            raise InvalidFiltration("every subgroup must contain the identity")
        for a in ni:
            if any(group.mul(a, b) not in ni for b in ni):
                raise InvalidFiltration("a filtration member is not a subgroup")
        for g in group.elements:
            if any(group.mul(group.mul(g, n), inv[g]) not in ni for n in ni):
                raise InvalidFiltration("a filtration member is not normal")
    for bigger, smaller in zip(subgroups, subgroups[1:]):
        if not smaller <= bigger:
            raise InvalidFiltration("filtration subgroups must be nested")
    quotients = [quotient_group(group, ni) for ni in subgroups]
    if sum(len(q.elements) for q in quotients) > budget:
        raise BudgetExceeded("filtration quotients exceed the point budget")
    return _assemble_family(quotients, label="box")


def sl2_family(primes: Sequence[int], budget: int = DEFAULT_BUDGET) -> CayleyFamily:
    for p in primes:
        if not _is_prime(p) or p < 3:
            raise NotPrime(f"{p} is not an odd prime")
    total = sum(p * (p * p - 1) for p in primes)
    if total > budget:
        raise BudgetExceeded(f"{total} points exceed the budget of {budget}")
    groups = [sl2_group(p) for p in primes]
    return _assemble_family(groups, label="sl2")


def dihedral_family(ns: Sequence[int], budget: int = DEFAULT_BUDGET) -> CayleyFamily:
    groups = [dihedral_group(n) for n in ns]
    if sum(len(g.elements) for g in groups) > budget:
        raise BudgetExceeded("dihedral family exceeds the point budget")
    return _assemble_family(groups, label="dihedral")


def symmetric_family(ns: Sequence[int], budget: int = DEFAULT_BUDGET) -> CayleyFamily:
    groups = [symmetric_group(n) for n in ns]
    if sum(len(g.elements) for g in groups) > budget:
        raise BudgetExceeded("symmetric family exceeds the point budget")
    return _assemble_family(groups, label="symmetric")


def family_from_descriptor(descriptor: str, budget: int = DEFAULT_BUDGET) -> CayleyFamily:
    """Parse ``cyclic:4,8``, ``torus:d=2:4,8``, ``sl2:3,5``, ``dihedral:6``,
    ``symmetric:n=4,5``."""
    parts = descriptor.strip().split(":")
    kind = parts[0].strip().lower()
    if not kind:
        raise ValueError("empty family descriptor")

    def ints(text: str) -> tuple[int, ...]:
        items = [t for t in text.split(",") if t.strip()]
        if not items:
            raise ValueError(f"no sizes given in descriptor {descriptor!r}")
        return tuple(int(t) for t in items)

    if kind == "cyclic":
        if len(parts) != 2:
            raise ValueError(f"expected cyclic:<sizes>, got {descriptor!r}")
        spec = GroupSpec("cyclic", ints(parts[1]))
        return box_space(spec, budget=budget)
    if kind == "torus":
        if len(parts) == 3 and parts[1].startswith("d="):
            dims = int(parts[1][2:])
            sizes = ints(parts[2])
        elif len(parts) == 2:
            dims = 2
            sizes = ints(parts[1])
        else:
            raise ValueError(f"expected torus:d=<dims>:<sizes>, got {descriptor!r}")
        spec = GroupSpec("torus", sizes, dims=dims)
        return box_space(spec, budget=budget)
    if kind == "sl2":
        if len(parts) != 2:
            raise ValueError(f"expected sl2:<primes>, got {descriptor!r}")
        return sl2_family(ints(parts[1]), budget=budget)
    if kind == "dihedral":
        if len(parts) != 2:
            raise ValueError(f"expected dihedral:<sizes>, got {descriptor!r}")
        return dihedral_family(ints(parts[1]), budget=budget)
    if kind == "symmetric":
        if len(parts) != 2:
            raise ValueError(f"expected symmetric:n=<sizes>, got {descriptor!r}")
        text = parts[1]
        if text.startswith("n="):
            text = text[2:]
        return symmetric_family(ints(text), budget=budget)
    raise ValueError(f"unknown family kind {kind!r}")
