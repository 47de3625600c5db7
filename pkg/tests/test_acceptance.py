"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines as they
complete.  Expected values come from closed forms (circulant eigenvalues,
order formulas) or from the independent brute-force oracles in
``oracles.py``; tolerances are those stated with each criterion.
"""

import json
import time

import numpy as np
import pytest

from roegap import pt_to_operator, row_sums, sample_partial_translation
from roegap.cli import main as cli_main
from roegap.decomposition import decompose, verify_decomposition
from roegap.groups import family_from_descriptor
from roegap.mazur import (SignedPermutationIsometry, almost_invariant_c0,
                          c0_slope, conjugate_isometry, lp_norm, mazur_map)
from roegap.spectral import (InvariantProjector, amplified_invariants_check,
                             kazhdan_iterate, markov, relate_parameters,
                             restricted_gap_l2, restricted_gap_lp,
                             uniform_gap_verdict, witness_check)

import oracles

CYCLE_SIZES = (4, 8, 16, 32, 64, 128, 256)
SL2_PRIMES = (3, 5, 7, 11, 13)


def report_line(number, passed, detail):
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number} {status}: {detail}")
    assert passed, f"criterion {number}: {detail}"


@pytest.fixture(scope="module")
def cycle_family():
    return family_from_descriptor("cyclic:" + ",".join(str(n) for n in CYCLE_SIZES))


@pytest.fixture(scope="module")
def cycle_markov(cycle_family):
    return markov(cycle_family.system)


@pytest.fixture(scope="module")
def cycle_gaps(cycle_markov):
    return restricted_gap_l2(cycle_markov, seed=0)


def test_criterion_1_cycle_spectral_law(cycle_gaps):
    start = time.perf_counter()
    worst = 0.0
    for res, n in zip(cycle_gaps, CYCLE_SIZES):
        law = oracles.circulant_lambda(n)
        worst = max(worst, abs(res.lam - law))
        assert res.converged
        if n <= 64:
            dense = oracles.dense_restricted_norm(oracles.cycle_markov_dense(n))
            worst = max(worst, abs(res.lam - dense))
    elapsed = time.perf_counter() - start
    report_line(1, worst <= 1e-9 and elapsed < 5.0,
                f"cycle lambda vs (2 + cos(2 pi/n))/3, worst |diff| {worst:.2e}, "
                f"{elapsed:.2f} s")


def test_criterion_2_kazhdan_decay(cycle_markov, cycle_gaps):
    start = time.perf_counter()
    decay = kazhdan_iterate(cycle_markov, k_max=200, tol=1e-11, seed=0)
    ok = True
    for d in decay:
        assert not d.no_gap
        for k, val in enumerate(d.table, start=1):
            ok = ok and val <= (d.lam ** k) * (1.0 + 1e-9)
        ok = ok and abs(d.lam - cycle_gaps[d.component].lam) <= 1e-9
        if d.size <= 64:
            ok = ok and d.entrywise_ok and d.product_deviation <= 1e-9
    # independent entrywise oracle: dense powers against the closed-form decay,
    # down to the double-precision floor of the product route
    for n in (4, 8, 16, 32, 64):
        a = oracles.cycle_markov_dense(n)
        lam = oracles.circulant_lambda(n)
        power = a.copy()
        k = 1
        while lam ** k >= 1e-11 and k <= 200:
            ok = ok and (np.abs(power - 1.0 / n) <= lam ** k).all()
            power = power @ a
            k += 1
    elapsed = time.perf_counter() - start
    report_line(2, ok and elapsed < 10.0,
                f"||A^k - P|| <= lambda^k (1 + 1e-9) with entrywise limit check, "
                f"{elapsed:.2f} s")


def test_criterion_3_parameter_chain(cycle_markov, cycle_gaps, cycle_family):
    ok = True
    c_bounds = []
    for res in cycle_gaps:
        b = relate_parameters(lam=res.lam)
        ok = ok and b.s_bound <= res.lam / (1.0 - res.lam) + 1e-12
        ok = ok and b.c_bound >= 1.0 / (1.0 + b.s_bound) - 1e-12
        c_bounds.append(b.c_bound)
    checks = witness_check(cycle_family.system, c_bounds, samples=10_000,
                           seed=0, max_size=64)
    witnessed = [w for w in checks if w["checked"]]
    ok = ok and len(witnessed) >= 1 and all(w["passed"] for w in witnessed)
    report_line(3, ok,
                f"S <= lam/(1-lam), c >= 1/(1+S); no witness below c over 10^4 "
                f"samples on {len(witnessed)} components")


def test_criterion_4_decomposition_roundtrip():
    start = time.perf_counter()
    total = good = 0
    rng = np.random.default_rng(2024)
    for desc in ("cyclic:4,8,16,32", "torus:d=2:3,6", "sl2:3,5"):
        fam = family_from_descriptor(desc)
        for _ in range(1000):
            v = sample_partial_translation(fam.system.entourage, rng)
            chis = decompose(v, fam.system)
            result = verify_decomposition(v, fam.system, chis)
            total += 1
            good += int(result["ok"])
    elapsed = time.perf_counter() - start
    report_line(4, good == total == 3000 and elapsed < 10.0,
                f"{good}/{total} exact reconstructions, {elapsed:.2f} s")


def test_criterion_5_averaging_projection_identity():
    worst = 0.0
    rng = np.random.default_rng(5)
    for desc in ("cyclic:4,8,16", "torus:d=2:3,6", "sl2:3", "dihedral:4,6",
                 "symmetric:n=4"):
        fam = family_from_descriptor(desc)
        for _ in range(20):
            v = sample_partial_translation(fam.system.entourage, rng)
            op = pt_to_operator(v)
            phi = row_sums(op)
            for ci, comp in enumerate(fam.space.components):
                ones = np.ones((comp.size, comp.size))
                lhs = op.dense(ci).real @ ones
                rhs = np.diag(phi.values[ci].real) @ ones
                worst = max(worst, float(np.abs(lhs - rhs).max()))
    report_line(5, worst <= 1e-14,
                f"V (k P) = Phi(V) (k P) entry-exact, worst diff {worst:.2e}")


def test_criterion_6_expander_contrast(cycle_gaps):
    start = time.perf_counter()
    fam = family_from_descriptor("sl2:" + ",".join(str(p) for p in SL2_PRIMES))
    mk = markov(fam.system)
    res = restricted_gap_l2(mk, seed=0)
    ok = all(r.converged for r in res)
    oracle_lams = []
    for ci, r in enumerate(res):
        dense = oracles.dense_restricted_norm(mk.dense(ci))
        oracle_lams.append(dense)
        ok = ok and abs(r.lam - dense) <= 1e-6
    sl2_max = max(r.lam for r in res)
    cyc_max = max(r.lam for r in cycle_gaps)
    sl2_verdict = uniform_gap_verdict([r.lam for r in res], 0.999)
    cyc_verdict = uniform_gap_verdict([r.lam for r in cycle_gaps], 0.999)
    ok = ok and sl2_max <= 0.995 and max(oracle_lams) <= 0.995
    ok = ok and cyc_max > 0.999
    ok = ok and sl2_verdict.uniform and not cyc_verdict.uniform
    elapsed = time.perf_counter() - start
    report_line(6, ok and elapsed < 120.0,
                f"SL2 max lambda {sl2_max:.6f} <= 0.995 (UNIFORM), cycle max "
                f"{cyc_max:.6f} > 0.999 (NON-UNIFORM), {elapsed:.1f} s")


def test_criterion_7_lp_interval_soundness():
    fam = family_from_descriptor("cyclic:4,8,16,32,64")
    mk = markov(fam.system)
    proj = InvariantProjector(fam.space)
    gaps = restricted_gap_l2(mk, proj, seed=0)
    ok = True
    # lower <= upper for every p and component
    intervals = {}
    for p in (1.5, 3.0, 4.0, 4.0 / 3.0, 2.0):
        intervals[p] = restricted_gap_lp(mk, proj, p, seed=0, l2_results=gaps)
        ok = ok and all(iv.lower <= iv.upper + 1e-12 for iv in intervals[p])
    # p = 2 collapses onto lambda
    for iv, g in zip(intervals[2.0], gaps):
        ok = ok and iv.upper - iv.lower <= 1e-6
        ok = ok and iv.lower - 1e-9 <= g.lam <= iv.upper + 1e-9
    # conjugate exponents share the upper bound exactly
    for a, b in zip(intervals[1.5], intervals[3.0]):
        ok = ok and a.upper == b.upper
    for a, b in zip(intervals[4.0], intervals[4.0 / 3.0]):
        ok = ok and a.upper == b.upper
    # both bounds bracket the dense grid-search estimate on the 4-point component
    rng = np.random.default_rng(77)
    m_dense = mk.dense(0) - 0.25
    for p in (1.5, 3.0, 4.0):
        grid = oracles.grid_search_pnorm(m_dense, p, rng)
        iv = intervals[p][0]
        ok = ok and iv.lower <= grid + 1e-9 and grid <= iv.upper + 1e-12
    report_line(7, ok, "ascent <= interpolation, p = 2 width <= 1e-6, conjugate "
                       "uppers equal, grid oracle bracketed on 4 points")


def test_criterion_8_mazur_suite():
    fam = family_from_descriptor("cyclic:8,16,64")
    space = fam.space
    rng = np.random.default_rng(8)
    ok = True
    # round trips
    for p, q in ((1.5, 2.0), (2.0, 3.0), (3.0, 4.0), (4.0, 1.5)):
        vecs = [rng.standard_normal(c.size) + 1j * rng.standard_normal(c.size)
                for c in space.components]
        norm = lp_norm(vecs, p)
        vecs = [v / norm for v in vecs]
        back = mazur_map(mazur_map(vecs, p, q), q, p)
        ok = ok and lp_norm([a - b for a, b in zip(back, vecs)], 2.0) < 1e-12
    # conjugated signed permutation, 100 random pairs
    phases = [np.exp(2j * np.pi * rng.random(c.size)) for c in space.components]
    iso = SignedPermutationIsometry.from_parts(
        space, [fam.system.perms[1][ci] for ci in range(len(space))], phases)
    for p in (1.5, 3.0):
        _, cert = conjugate_isometry(iso, p, seed=8, trials=100)
        ok = ok and cert.max_linearity_defect < 1e-12
        ok = ok and cert.max_action_defect < 1e-12
    # exhaustive slow-decay bound at R = 1 on components <= 64 points
    for k in (4.0, 16.0, 64.0):
        for rec in almost_invariant_c0(space, k, 1, seed=8):
            ok = ok and rec.exhaustive and rec.max_defect <= rec.bound + 0.0
    # decay slope over k in {4, ..., 64}
    slope, _ = c0_slope(space, 1, (4, 8, 16, 32, 64), seed=8)
    ok = ok and abs(slope + 2.0) <= 0.1
    report_line(8, ok, f"round trip, conjugation, exact R/k^2 bound, slope "
                       f"{slope:.3f} within -2 +/- 0.1")


def test_criterion_9_amplified_invariants():
    ok = True
    for desc in ("cyclic:4,8", "torus:d=2:3"):
        fam = family_from_descriptor(desc)
        mk = markov(fam.system)
        for copies in (2, 3):
            amp = amplified_invariants_check(mk, copies)
            ok = ok and amp.passed and sum(amp.dimensions) == len(fam.space)
            # independent null-space oracle via Kronecker lifts
            for ci, comp in enumerate(fam.space.components):
                a = mk.dense(ci)
                m = comp.size
                lifted = np.kron(np.eye(copies), a)
                shift = np.kron(np.roll(np.eye(copies), 1, axis=0), np.eye(m))
                stacked = np.vstack([np.eye(m * copies) - lifted,
                                     np.eye(m * copies) - shift])
                ok = ok and oracles.null_space_dimension(stacked) == 1
    report_line(9, ok, "joint invariant space has one dimension per component "
                       "for N in {2, 3} on cycles and torus grids")


def test_criterion_10_determinism(tmp_path):
    argv = ["gap", "--family", "cyclic:4,8,16", "--p", "1.5,2", "--seed", "11",
            "--no-figures"]
    hashes = []
    csvs = []
    for name in ("run1", "run2"):
        out = tmp_path / name
        assert cli_main(argv + ["--out", str(out)]) == 0
        doc = json.loads((out / "report.json").read_text())
        hashes.append(doc["determinism_hash"])
        csvs.append((out / "report.csv").read_bytes())
    report_line(10, hashes[0] == hashes[1] and csvs[0] == csvs[1],
                f"identical config and seed reproduce hash {hashes[0][:16]}...")
