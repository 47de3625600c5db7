"""Mazur maps between p-spheres, signed-permutation conjugation, and
slow-oscillation almost-invariance experiments.

On counting measure every linear isometry of interest is a signed
permutation ``(Vf)(x) = h(x) f(sigma^{-1}(x))`` with unimodular ``h``; the
Mazur map ``sign(f) |f|^{p/q}`` conjugates such isometries to themselves, and
the lab certifies this numerically (linearity and action defects at rounding
level) instead of assuming it.

The slow-decay vectors ``f_k(x) = 1/(k + d(x, x0))`` oscillate by at most
``d(x, y)/k^2`` across a pair, so translations supported at distance <= R
move them by at most ``R/k^2``; the experiments measure the defect
exhaustively and fit its decay in ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidExponent, OutOfRange
from .operators import sample_partial_translation
from .spaces import SpaceFamily, r_diagonal

__all__ = [
    "lp_norm",
    "complex_sign",
    "mazur_map",
    "SignedPermutationIsometry",
    "ConjugationCertificate",
    "conjugate_isometry",
    "DecayVector",
    "C0Record",
    "almost_invariant_c0",
    "c0_slope",
    "transfer_defect",
    "transfer_series",
]

FamilyVector = list  # list of per-component arrays


def lp_norm(vectors: Sequence[np.ndarray], p: float) -> float:
    if p == math.inf:
        return max(float(np.abs(v).max()) if v.size else 0.0 for v in vectors)
    total = sum(float(np.power(np.abs(v), p).sum()) for v in vectors)
    return total ** (1.0 / p)


def complex_sign(values: np.ndarray) -> np.ndarray:
    """``z / |z|`` with ``sign(0) = 0`` (keeps round trips exact)."""
    a = np.abs(values)
    out = np.zeros_like(values, dtype=np.complex128)
    nz = a > 0
    out[nz] = values[nz] / a[nz]
    return out


def mazur_map(vectors: Sequence[np.ndarray], p: float, q: float) -> FamilyVector:
    """Pointwise ``sign(f) |f|^{p/q}``; maps the p-sphere onto the q-sphere."""
    if not (1.0 <= p < math.inf) or not (1.0 <= q < math.inf):
        raise InvalidExponent("mazur exponents must lie in [1, infinity)")
    ratio = p / q
    out = []
    for v in vectors:
        v = np.asarray(v, dtype=np.complex128)
        out.append(complex_sign(v) * np.power(np.abs(v), ratio))
    return out


@dataclass(frozen=True)
class SignedPermutationIsometry:
    """``(Vf)(x) = h(x) f(sigma^{-1}(x))`` per component; isometric on every p-norm."""

    space: SpaceFamily
    perms: tuple[np.ndarray, ...]        # sigma: point -> image
    phases: tuple[np.ndarray, ...]       # h, |h| = 1

    def __post_init__(self):
        for comp, sigma, h in zip(self.space.components, self.perms, self.phases):
            if np.unique(sigma).size != comp.size:
                raise ValueError("sigma must be a permutation per component")
            if not np.allclose(np.abs(h), 1.0, atol=1e-12):
                raise ValueError("phases must be unimodular")

    @classmethod
    def from_parts(cls, space: SpaceFamily, perms, phases=None) -> "SignedPermutationIsometry":
        ps = tuple(np.asarray(s, dtype=np.int64) for s in perms)
        if phases is None:
            hs = tuple(np.ones(c.size, dtype=np.complex128) for c in space.components)
        else:
            hs = tuple(np.asarray(h, dtype=np.complex128) for h in phases)
        return cls(space, ps, hs)

    def apply(self, vectors: Sequence[np.ndarray]) -> FamilyVector:
        out = []
        for sigma, h, v in zip(self.perms, self.phases, vectors):
            w = np.empty(v.shape, dtype=np.complex128)
            w[sigma] = np.asarray(v, dtype=np.complex128)
            out.append(h * w)
        return out


@dataclass(frozen=True)
class ConjugationCertificate:
    p: float
    trials: int
    max_linearity_defect: float
    max_action_defect: float


def conjugate_isometry(v: SignedPermutationIsometry, p: float, *, seed: int = 0,
                       trials: int = 100) -> tuple[SignedPermutationIsometry, ConjugationCertificate]:
    """Conjugate by Mazur maps and certify the result is ``v`` itself, linearly.

    The composed map ``M_{p,2} o V o M_{2,p}`` is evaluated pointwise on
    random vectors; the certificate records the worst linearity defect over
    random combinations and the worst deviation from ``v``'s own action.
    """
    if not (1.0 < p < math.inf):
        raise OutOfRange("conjugation exponent must lie in (1, infinity)")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 23]))
    space = v.space

    def conjugated(vectors):
        return mazur_map(v.apply(mazur_map(vectors, 2.0, p)), p, 2.0)

    def rand_vec():
        out = []
        for comp in space.components:
            z = rng.standard_normal(comp.size) + 1j * rng.standard_normal(comp.size)
            out.append(z)
        norm = lp_norm(out, 2.0)
        return [z / norm for z in out]

    lin_defect = 0.0
    act_defect = 0.0
    for _ in range(trials):
        xi, eta = rand_vec(), rand_vec()
        alpha = complex(rng.standard_normal(), rng.standard_normal())
        beta = complex(rng.standard_normal(), rng.standard_normal())
        combo = [alpha * a + beta * b for a, b in zip(xi, eta)]
        w_combo = conjugated(combo)
        w_parts = [alpha * a + beta * b
                   for a, b in zip(conjugated(xi), conjugated(eta))]
        lin_defect = max(lin_defect, lp_norm(
            [a - b for a, b in zip(w_combo, w_parts)], 2.0))
        act_defect = max(act_defect, lp_norm(
            [a - b for a, b in zip(conjugated(xi), v.apply(xi))], 2.0))
    cert = ConjugationCertificate(p, trials, lin_defect, act_defect)
    return v, cert


@dataclass(frozen=True)
class DecayVector:
    """``f_k(x) = 1/(k + d(x, x0))`` with one base point per component."""

    space: SpaceFamily
    k: float
    base_points: tuple[int, ...]
    values: tuple[np.ndarray, ...]

    @classmethod
    def build(cls, space: SpaceFamily, k: float,
              base_points: Optional[Sequence[int]] = None) -> "DecayVector":
        if k <= 0:
            raise OutOfRange("decay parameter k must be positive")
        if base_points is None:
            base_points = [0] * len(space)
        vals = []
        for comp, x0 in zip(space.components, base_points):
            vals.append(1.0 / (k + comp.dist[int(x0)].astype(float)))
        return cls(space, float(k), tuple(int(b) for b in base_points), tuple(vals))


@dataclass(frozen=True)
class C0Record:
    component: int
    k: float
    radius: int
    max_defect: float
    bound: float                 # R / k^2
    quotient_lower: float        # D / (2 k (k + D))
    pairs_checked: int
    exhaustive: bool
    passed: bool


def almost_invariant_c0(space: SpaceFamily, k: float, radius: int, *,
                        base_points: Optional[Sequence[int]] = None, seed: int = 0,
                        pair_budget: int = 10_000, samples: int = 8) -> list[C0Record]:
    """Invariance defect of the decay vector under translations inside ``Delta_R``.

    The defect of a translation against the indicator-of-range comparison is
    the largest oscillation ``|f_k(y) - f_k(x)|`` over its support pairs, so
    the maximum over all translations is the maximum over the pair set; pairs
    are enumerated exhaustively up to ``pair_budget`` and sampled beyond.  A
    few multi-pair translations are also evaluated literally through their
    operator action as a cross-check.
    """
    if radius < 0:
        raise OutOfRange("radius must be nonnegative")
    fk = DecayVector.build(space, k, base_points)
    ent = r_diagonal(space, radius)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 31]))
    out = []
    for ci, comp in enumerate(space.components):
        rows, cols = ent.pairs(ci)
        exhaustive = rows.size <= pair_budget
        if not exhaustive:
            pick = rng.choice(rows.size, size=pair_budget, replace=False)
            rows, cols = rows[pick], cols[pick]
        f = fk.values[ci]
        defect = float(np.abs(f[cols] - f[rows]).max()) if rows.size else 0.0
        for _ in range(samples):
            v = sample_partial_translation(ent, rng, fraction=0.7)
            r, c = v.rows[ci], v.cols[ci]
            if r.size:
                defect = max(defect, float(np.abs(f[c] - f[r]).max()))
        bound = radius / (k * k)
        diam = comp.diameter
        quotient_lower = diam / (2.0 * k * (k + diam))
        out.append(C0Record(ci, k, radius, defect, bound, quotient_lower,
                            int(rows.size), exhaustive,
                            passed=bool(defect <= bound + 1e-12)))
    return out


def c0_slope(space: SpaceFamily, radius: int, ks: Sequence[float] = (4, 8, 16, 32, 64), *,
             seed: int = 0) -> tuple[float, list[C0Record]]:
    """Log-log slope of the worst defect against ``k``; near -2 for large ``k``."""
    records = []
    worst = []
    for k in ks:
        recs = almost_invariant_c0(space, k, radius, seed=seed)
        records.extend(recs)
        worst.append(max(r.max_defect for r in recs))
    slope = float(np.polyfit(np.log(np.asarray(ks, dtype=float)),
                             np.log(np.asarray(worst)), 1)[0])
    return slope, records


def transfer_defect(xi: Sequence[np.ndarray], v: SignedPermutationIsometry,
                    p: float) -> tuple[float, float]:
    """``(||V xi - xi||_p, ||M_{p,2}(V xi) - M_{p,2}(xi)||_2)`` for unit ``xi``."""
    if not (1.0 < p < math.inf):
        raise OutOfRange("transfer exponent must lie in (1, infinity)")
    norm = lp_norm(list(xi), p)
    if norm == 0:
        raise ValueError("transfer needs a nonzero vector")
    xi = [np.asarray(a, dtype=np.complex128) / norm for a in xi]
    moved = v.apply(xi)
    d_p = lp_norm([a - b for a, b in zip(moved, xi)], p)
    d_2 = lp_norm([a - b for a, b in zip(mazur_map(moved, p, 2.0),
                                         mazur_map(xi, p, 2.0))], 2.0)
    return d_p, d_2


def transfer_series(space: SpaceFamily, v: SignedPermutationIsometry, p: float,
                    ks: Sequence[float] = (8, 16, 32)) -> list[dict]:
    """Defect pairs along the k-indexed decay vectors; d_2 shrinks with d_p."""
    rows = []
    for k in ks:
        fk = DecayVector.build(space, k)
        d_p, d_2 = transfer_defect(list(fk.values), v, p)
        rows.append({"k": float(k), "p": p, "defect_p": d_p, "defect_2": d_2})
    return rows
