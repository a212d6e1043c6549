"""Acceptance suite: every headline criterion at its stated tolerance, one
printed pass/fail line per criterion.  Run with  pytest -s  to see the
summary table."""

import time

import numpy as np
import pytest

from modloc_lab import charge_fluct as cf
from modloc_lab import chiral_ej as ce
from modloc_lab import crossing_zf as cz
from modloc_lab import gaussian_core as gc
from modloc_lab import wedge_kms as wk
from modloc_lab.errors import NumericError
from modloc_lab.quadrature import linear_fit

TWO_PI = 2.0 * np.pi


def _verdict(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def test_criterion_1_thermal_vacuum_isomorphism():
    t0 = time.perf_counter()
    worst = 0.0
    for beta in (1.0, TWO_PI):
        imap = ce.exp_map(beta, 0.0, 1.0)
        us = np.linspace(0.02, 0.98, 11)
        grid = [(u, v) for u in us for v in us if abs(u - v) > 1e-4][:100]
        worst = max(worst, ce.verify_isomorphism(imap, grid))
    dt = time.perf_counter() - t0
    ok = worst < 1e-10 and dt < 1.0
    assert _verdict("criterion 1 (thermal/vacuum isomorphism)", ok,
                    f"max kernel defect {worst:.3e} (tol 1e-10), {dt:.2f}s (< 1s)")


def test_criterion_2_einstein_jordan_fluctuations():
    t0 = time.perf_counter()
    worst = 0.0
    for f in (ce.SmearingFn(0.5, 0.4, 0.3), ce.SmearingFn(0.0, 1.0, 0.5),
              ce.SmearingFn(-0.3, 0.2, 0.6)):
        worst = max(worst, ce.ej_compare(f, TWO_PI).rel_diff)
    dt = time.perf_counter() - t0
    ok = worst < 1e-6 and dt < 30.0
    assert _verdict("criterion 2 (Einstein-Jordan fluctuation equality)", ok,
                    f"max rel diff {worst:.3e} (tol 1e-6), {dt:.1f}s (< 30s)")


def test_criterion_3_partial_charge_scaling():
    t0 = time.perf_counter()
    m2 = cf.ScalarModel(1e-6, 2)
    specs2 = []
    for x in np.exp(np.linspace(np.log(1.2e4), np.log(1.2e5), 8)):
        R = 6.0 * np.sqrt(x / 100.0)
        specs2.append(cf.PartialChargeSpec(R, R / x, 0.1 * R / x))
    rep2 = cf.scaling_fit(m2, specs2)

    rep3 = cf.scaling_fit(
        cf.ScalarModel(1.0, 3),
        [cf.PartialChargeSpec(0.5 * x, 0.5, 0.05)
         for x in np.exp(np.linspace(np.log(6), np.log(62), 7))])
    rep4 = cf.scaling_fit(
        cf.ScalarModel(1.0, 4),
        [cf.PartialChargeSpec(0.5 * x, 0.5, 0.05)
         for x in np.exp(np.linspace(np.log(8), np.log(82), 7))])
    dt = time.perf_counter() - t0
    ok = (rep2.fitted_log_flag and rep2.r_squared > 0.999
          and abs(rep2.fitted_exponent) < 0.1
          and abs(rep3.fitted_exponent - 1.0) < 0.1
          and abs(rep4.fitted_exponent - 2.0) < 0.1
          and dt < 180.0)
    assert _verdict(
        "criterion 3 (partial-charge scaling)", ok,
        f"n=2 log R2 {rep2.r_squared:.6f} / |exp| {abs(rep2.fitted_exponent):.3f}; "
        f"n=3 exp {rep3.fitted_exponent:.3f}; n=4 exp {rep4.fitted_exponent:.3f}; "
        f"{dt:.0f}s (< 180s)")


def test_criterion_4_localization_entropy_scaling():
    t0 = time.perf_counter()
    n = 2000
    lat = gc.HarmonicLattice(n, 0.0, ir_regulator=1e-3 / n)
    state = gc.build_vacuum_state(lat)
    lengths = (8, 16, 32, 64, 128, 256)
    entropies = [gc.interval_entropy(state, 0, L) for L in lengths]
    slope, _, r2_log = linear_fit(np.log(lengths), entropies)

    tn = 1200
    tlat = gc.HarmonicLattice(tn, 0.0, ir_regulator=1e-3 / tn)
    tl = (40, 80, 120, 160, 200, 240)
    ts = gc.thermal_interval_entropies(tlat, TWO_PI, tl)
    tslope, _, r2_lin = linear_fit(np.asarray(tl, float), np.asarray(ts))
    dt = time.perf_counter() - t0
    ok = r2_log > 0.995 and r2_lin > 0.99 and dt < 120.0
    assert _verdict(
        "criterion 4 (localization entropy scaling)", ok,
        f"ln L fit R2 {r2_log:.5f} (slope {slope:.4f} recorded); thermal R2 "
        f"{r2_lin:.6f} (slope {tslope:.4f} recorded); {dt:.0f}s (< 120s)")


def test_criterion_5_unruh_detailed_balance():
    t0 = time.perf_counter()
    worst = 0.0
    for a in (0.5, 1.0, 2.0):
        corr = wk.pullback(wk.WightmanModel(0.0, 4), wk.Trajectory.uniform(a))
        worst = max(worst, wk.detailed_balance(corr, TWO_PI / a).max_defect)
    corr = wk.pullback(wk.WightmanModel(0.0, 4), wk.Trajectory.uniform(1.0))
    control = wk.detailed_balance(corr, np.pi).max_defect
    dt = time.perf_counter() - t0
    ok = worst < 1e-3 and control > 0.5 and dt < 20.0
    assert _verdict(
        "criterion 5 (Unruh/KMS detailed balance)", ok,
        f"max defect {worst:.3e} (tol 1e-3); control defect {control:.2f} "
        f"(> 0.5); {dt:.1f}s (< 20s)")


def test_criterion_6_free_crossing_from_kms():
    t0 = time.perf_counter()
    worst = 0.0
    t1 = np.linspace(-1.5, 1.5, 20)
    t2 = np.linspace(-1.2, 1.8, 20)
    for g in (cz.WedgeTestFn(0.0, 2.5, 0.7, 0.9, mass=1.0),
              cz.WedgeTestFn(0.3, 3.0, 0.5, 0.8, mass=1.0),
              cz.WedgeTestFn(-0.2, 2.2, 0.6, 0.7, mass=1.0)):
        worst = max(worst, cz.free_crossing_check(g, t1, t2).max_rel_defect)
    try:
        cz.mass_shell_restrict(cz.WedgeTestFn(0.2, -2.0, 0.6, 0.8, mass=1.0))
        control_failed = False
    except NumericError:
        control_failed = True
    dt = time.perf_counter() - t0
    ok = worst < 1e-6 and control_failed and dt < 60.0
    assert _verdict(
        "criterion 6 (free crossing from KMS)", ok,
        f"max defect {worst:.3e} (tol 1e-6) on 20x20 grids; left-wedge control "
        f"{'diverged' if control_failed else 'DID NOT diverge'}; {dt:.1f}s (< 60s)")


def test_criterion_7_zf_algebra():
    t0 = time.perf_counter()
    thetas = np.linspace(-3.0, 3.0, 120)
    fv = np.exp(-((thetas - 0.4) ** 2))
    gv = np.exp(-((thetas + 0.3) ** 2) / 0.5)
    ex = dbl = sm = 0.0
    for b in (0.3, 1.0, 2.5):
        S = cz.SMatrixModel(b)
        props = cz.smatrix_properties(S)
        sm = max(sm, props["unitarity"], props["inverse"], props["crossing"])
        ex = max(ex, cz.zf_exchange_check(S, fv, gv, thetas))
        dbl = max(dbl, cz.zf_double_exchange_check(S, fv, gv, thetas))
    S = cz.SMatrixModel(1.0)
    st = cz.zf_vacuum(n_grid=14, k_max=4)
    tn = st.theta_grid
    for c, w in ((0.5, 1.0), (-0.7, 0.6), (0.0, 1.0), (1.0, 0.8)):
        st = cz.zf_apply("create", np.exp(-((tn - c) ** 2) / w), st, S)
    st = cz.zf_apply("annihilate", np.exp(-((tn - 0.5) ** 2)), st, S)
    st = cz.zf_apply("create", np.exp(-((tn + 1.2) ** 2)), st, S)
    leak = st.leaked_norm
    dt = time.perf_counter() - t0
    ok = (ex < 1e-10 and dbl < 1e-12 and sm < 1e-12 and leak < 1e-8
          and dt < 30.0)
    assert _verdict(
        "criterion 7 (ZF algebra)", ok,
        f"exchange {ex:.2e} (1e-10); double {dbl:.2e} (1e-12); S-matrix "
        f"{sm:.2e} (1e-12); leakage {leak:.2e} (1e-8, k_max=4); {dt:.1f}s (< 30s)")


def test_criterion_8_oracle_equivalence_and_purity():
    t0 = time.perf_counter()
    m = cf.ScalarModel(1.0, 2)
    worst = 0.0
    for (R, dR, T) in ((2.0, 1.0, 0.2), (3.0, 1.0, 0.2), (2.5, 0.7, 0.15),
                       (4.0, 2.0, 0.3), (3.5, 0.5, 0.1)):
        s = cf.PartialChargeSpec(R, dR, T)
        Fc = cf.charge_variance(m, s)
        Fl = cf.charge_variance_lattice(m, s)
        worst = max(worst, abs(Fc - Fl) / Fc)

    purity = 0.0
    for size in (512, 2048):
        st = gc.build_vacuum_state(gc.HarmonicLattice(size, 1.0))
        purity = max(purity, gc.entanglement_entropy(
            gc.symplectic_spectrum(st)).entropy)
    dt = time.perf_counter() - t0
    ok = worst < 0.03 and purity < 1e-8
    assert _verdict(
        "criterion 8 (oracle equivalence, vacuum purity)", ok,
        f"lattice/continuum deviation {worst:.4f} (< 3%) over 5 geometries; "
        f"purity {purity:.2e} nats up to 2048 sites (< 1e-8); {dt:.0f}s")


def test_declared_out_of_reach_items_are_flagged():
    # the n > 2 entropy/area prediction and the interacting crossing proof
    # are carried as unverified-by-design manifest rows, never asserted
    rows = cf.area_law_report(4)
    assert all(r.status == "unverified-by-design" for r in rows)
    from modloc_lab.cli_bench.config import load_config
    from modloc_lab.cli_bench.suites import run_experiment
    import tempfile
    with tempfile.TemporaryDirectory() as d:
        man = run_experiment(load_config("crossing"), d)
    flags = [r for r in man.records if r.verdict == "unverified-by-design"]
    assert any("interacting" in r.name for r in flags)
