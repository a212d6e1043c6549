"""The seven verification suites.  Each runs the relevant module
operations at desk scale, writes CSV data, and appends one manifest record
per claim checked."""

import concurrent.futures

import numpy as np

from .. import chiral_ej as ce
from .. import charge_fluct as cf
from .. import crossing_zf as cz
from .. import gaussian_core as gc
from .. import wedge_kms as wk
from ..errors import NumericError
from ..quadrature import linear_fit
from .config import EXPERIMENTS, load_config
from .manifest import (RunManifest, check_bool, check_greater, check_less,
                       record_value, unverified, write_csv)

TWO_PI = 2.0 * np.pi


def _strictened(tol, cfg):
    """Numeric-identity tolerances shrink tenfold under --strict."""
    return tol / 10.0 if cfg.strict else tol


# ----------------------------------------------------------------------

def suite_thermal_map(cfg, man, out):
    rows = []
    for beta in cfg["betas"]:
        imap = ce.exp_map(beta, 0.0, 1.0)
        n = cfg["grid_n"]
        us = np.linspace(0.02, 0.98, int(np.sqrt(n)) + 1)
        grid = [(u, v) for u in us for v in us if abs(u - v) > 1e-4][:n]
        defect = ce.verify_isomorphism(imap, grid)
        rows.append((beta, defect))
        man.extend([check_less(
            f"thermal-map/kernel-defect/beta={beta:g}", defect,
            _strictened(cfg["tol"], cfg),
            note="K_th(u,u') = J J' K_vac(x,x') on the grid",
        )])
    imap = ce.exp_map(TWO_PI, 0.0, 1.0)
    man.extend([
        check_less("thermal-map/image-interval",
                   abs(imap.image[0] - 1.0) + abs(imap.image[1] - np.e), 1e-14,
                   note="(0,1) -> (1, e) at beta = 2 pi"),
    ])
    k = ce.thermal_kernel(2.0, i_epsilon=1e-300)
    du = np.linspace(0.3, 2.0, 9) - 0.45j
    man.extend([check_less(
        "thermal-map/kms-periodicity", ce.kms_periodicity_defect(k, du),
        _strictened(1e-10, cfg), note="K(du - i beta) = K(-du), complex grid",
    )])
    img = ce.thermal_image_sum(k, 1.0, 0.0, n_images=200)
    direct = ce.current_two_point(k, 1.0, 0.0)
    man.extend([check_less(
        "thermal-map/image-sum", float(abs(img - direct) / abs(direct)), 1e-8,
        note="thermal kernel vs 200-image vacuum sum",
    )])
    path, digest = write_csv(out, "thermal-map", "kernel_defect",
                             ("beta", "max_rel_defect"), rows)
    man.files[path.name] = digest


def suite_ej_fluct(cfg, man, out):
    beta = cfg["beta"]
    geoms = [
        ce.SmearingFn(0.5, 0.4, 0.3),
        ce.SmearingFn(0.0, 1.0, 0.5),
        ce.SmearingFn(-0.3, 0.2, 0.6),
    ]
    rows = []
    for i, f in enumerate(geoms):
        cmp = ce.ej_compare(f, beta, rtol=cfg["rtol"])
        rows.append((f.center, f.plateau, f.ramp_width,
                     cmp.thermal_variance, cmp.transported_variance, cmp.rel_diff))
        man.extend([check_less(
            f"ej-fluct/energy-variance-match/geometry-{i}", cmp.rel_diff,
            cfg["tol_rel_diff"],
            note="thermal vs exp-map-transported connected energy variance",
        )])
    f = geoms[0]
    vac = ce.vacuum_kernel()
    v_pos = ce.smeared_current_variance(f, vac)
    v_spec = ce.current_variance_spectral(f, vac)
    man.extend([
        check_less("ej-fluct/current-route-agreement",
                   abs(v_pos - v_spec) / v_spec, 1e-6,
                   note="position-space engine vs spectral oracle"),
        check_less("ej-fluct/translation-covariance",
                   abs(ce.smeared_current_variance(f.translated(2.3), vac) - v_pos)
                   / v_pos, 1e-10),
        check_bool("ej-fluct/kernel-positivity", v_pos >= -1e-10),
    ])
    man.extend([unverified(
        "ej-fluct/moebius-rotation-law",
        "rotation covariance not exercised (apparent typo in the source law); "
        "translation and dilation covariance are tested instead",
    )])
    path, digest = write_csv(
        out, "ej-fluct", "energy_variance",
        ("center", "plateau", "ramp", "thermal_var", "transported_var", "rel_diff"),
        rows)
    man.files[path.name] = digest


def suite_entropy_scan(cfg, man, out):
    n = cfg["n_sites"]
    lat = gc.HarmonicLattice(n, 0.0, ir_regulator=1e-3 / n)
    state = gc.build_vacuum_state(lat)
    lengths = [int(L) for L in cfg["lengths"]]
    entropies = [gc.interval_entropy(state, 0, L) for L in lengths]
    slope, intercept, r2 = linear_fit(np.log(lengths), entropies)
    man.extend([
        check_greater("entropy-scan/log-fit-r2", r2, cfg["tol_r2"],
                      note=f"S = s ln L + c on the {n}-site critical chain"),
        record_value("entropy-scan/log-slope", slope,
                     note="recorded, not asserted (c=1 chain gives ~1/3)"),
        record_value("entropy-scan/log-slope-per-chirality", slope / 2.0),
    ])
    rows = [(L, S) for L, S in zip(lengths, entropies)]
    path, digest = write_csv(out, "entropy-scan", "S_vs_L",
                             ("length", "entropy"), rows)
    man.files[path.name] = digest

    # restriction impurity and uncertainty bound on a small closed chain
    small = gc.HarmonicLattice(64, 0.0, ir_regulator=2e-4 / 64 * 32)
    sstate = gc.build_vacuum_state(small)
    ent_small = gc.interval_entropy(sstate, 0, 16)
    man.extend([check_greater("entropy-scan/restriction-impurity", ent_small,
                              1e-6, note="proper subinterval of the coupled vacuum")])

    # eps scan: attenuation length as short-distance cutoff; the interval is
    # kept well below the chain size so the periodic chord correction stays
    # in the fit tolerance
    region = [gc.Region.interval(0, cfg["eps_interval"])]
    scan = gc.entropy_scan(lat, region, cfg["eps_values"])
    fit = scan[0].fit_metadata
    man.extend([
        check_greater("entropy-scan/eps-fit-r2", fit.r_squared, 0.99,
                      note="S against ln(L/eps)"),
        record_value("entropy-scan/eps-slope", fit.slope),
    ])
    rows = [(r.length, r.attenuation, r.entropy) for r in scan]
    path, digest = write_csv(out, "entropy-scan", "S_vs_eps",
                             ("length", "eps", "entropy"), rows)
    man.files[path.name] = digest

    # thermal side: extensivity
    tn = cfg["thermal_n_sites"]
    tlat = gc.HarmonicLattice(tn, 0.0, ir_regulator=1e-3 / tn)
    tl = [int(L) for L in cfg["thermal_lengths"]]
    ts = gc.thermal_interval_entropies(tlat, cfg["thermal_beta"], tl)
    tslope, _, tr2 = linear_fit(np.asarray(tl, float), np.asarray(ts))
    man.extend([
        check_greater("entropy-scan/thermal-fit-r2", tr2, cfg["thermal_tol_r2"],
                      note="thermal entropy extensive in L"),
        record_value("entropy-scan/thermal-slope", tslope),
        record_value("entropy-scan/thermal-slope-per-chirality", tslope / 2.0),
    ])
    rows = [(L, S) for L, S in zip(tl, ts)]
    path, digest = write_csv(out, "entropy-scan", "thermal_S_vs_L",
                             ("length", "entropy"), rows)
    man.files[path.name] = digest

    rel = ce.entropy_relation_check(tl, cfg["eps_values"],
                                    n_sites=tn, beta=cfg["thermal_beta"])
    man.extend([record_value(
        "entropy-scan/calibration-ratio", rel.calibration_ratio,
        note="s1/(2 pi s2); coefficient reported, not asserted",
    )])

    # purity of the full vacuum
    for size in cfg["purity_sizes"]:
        size = int(size)
        plat = gc.HarmonicLattice(size, 1.0)
        ps = gc.build_vacuum_state(plat)
        sp = gc.symplectic_spectrum(ps)
        ent = gc.entanglement_entropy(sp).entropy
        man.extend([
            check_less(f"entropy-scan/vacuum-purity/n={size}", ent,
                       cfg["purity_tol"], note="full-state entropy, nats"),
            check_bool(f"entropy-scan/uncertainty-bound/n={size}",
                       bool(np.all(sp.nus >= 0.5 - 1e-9))),
        ])

    b = gc.HarmonicLattice(64, 1.0)
    d = gc.build_thermal_state(b, 1e6)
    v = gc.build_vacuum_state(b)
    diff = max(np.max(np.abs(d.phi_phi - v.phi_phi)),
               np.max(np.abs(d.pi_pi - v.pi_pi)))
    man.extend([check_less("entropy-scan/thermal-limit", float(diff), 1e-6,
                           note="beta = 1e6 Gibbs state vs vacuum")])


def _n2_specs(cfg):
    ratios = np.exp(np.linspace(np.log(cfg["n2_ratio_lo"]),
                                np.log(cfg["n2_ratio_hi"]), cfg["n2_samples"]))
    specs = []
    for x in ratios:
        R = 6.0 * np.sqrt(x / 100.0)
        dR = R / x
        specs.append(cf.PartialChargeSpec(R, dR, 0.1 * dR))
    return specs


def suite_charge_scaling(cfg, man, out):
    rows = []
    # n = 2: log law
    m2 = cf.ScalarModel(cfg["n2_mass"], 2)
    rep2 = cf.scaling_fit(m2, _n2_specs(cfg))
    man.extend([
        check_bool("charge-scaling/n2-log-flag", rep2.fitted_log_flag),
        check_greater("charge-scaling/n2-log-r2", rep2.r_squared, cfg["n2_tol_r2"]),
        check_less("charge-scaling/n2-power-exponent", abs(rep2.fitted_exponent),
                   cfg["n2_tol_exponent"], note="consistent with 0: log law"),
    ])
    rows += [(2, cfg["n2_mass"], x, F) for x, F in rep2.samples]

    # n = 3 and n = 4: area powers (R grows at fixed dR, T)
    for dim, target, lo, hi in ((3, 1.0, 6.0, 62.0), (4, 2.0, 8.0, 82.0)):
        model = cf.ScalarModel(1.0, dim)
        specs = [cf.PartialChargeSpec(0.5 * x, 0.5, 0.05)
                 for x in np.exp(np.linspace(np.log(lo), np.log(hi), 7))]
        rep = cf.scaling_fit(model, specs)
        man.extend([check_less(
            f"charge-scaling/n{dim}-exponent-error",
            abs(rep.fitted_exponent - target), cfg["n34_tol_exponent"],
            note=f"fitted {rep.fitted_exponent:.4f}, target {target}",
        )])
        rows += [(dim, 1.0, x, F) for x, F in rep.samples]

    # oracle equivalence: continuum vs lattice mode sum
    m1 = cf.ScalarModel(1.0, 2)
    worst = 0.0
    for (R, dR, T) in ((2.0, 1.0, 0.2), (3.0, 1.0, 0.2), (2.5, 0.7, 0.15),
                       (4.0, 2.0, 0.3), (3.5, 0.5, 0.1)):
        spec = cf.PartialChargeSpec(R, dR, T)
        Fc = cf.charge_variance(m1, spec)
        Fl = cf.charge_variance_lattice(m1, spec)
        worst = max(worst, abs(Fc - Fl) / Fc)
    man.extend([check_less("charge-scaling/lattice-oracle-agreement", worst,
                           cfg["oracle_tol"], note="5 geometries, 512-site chain")])

    # mass monotonicity
    spec = cf.PartialChargeSpec(3.0, 1.0, 0.2)
    Fs = [cf.charge_variance(cf.ScalarModel(mm, 2), spec) for mm in (0.5, 1.0, 2.0)]
    man.extend([check_bool("charge-scaling/mass-monotonicity",
                           Fs[0] > Fs[1] > Fs[2],
                           note="F decreases with mass at fixed geometry")])

    # global charge limit
    limit = cf.global_charge_limit(m1, 1.0, 0.2, radii=(4, 8, 16, 32, 64))
    man.extend([
        check_less("charge-scaling/global-limit-final", limit.final_deviation,
                   cfg["limit_tol"]),
        check_bool("charge-scaling/global-limit-monotone", limit.monotone),
        check_less("charge-scaling/conservation-t-shift",
                   limit.t_shift_change, 1e-6),
    ])

    # area-law reporting rows (n > 2 predictions are not derivable here)
    for dim in (3, 4):
        for row in cf.area_law_report(dim):
            man.extend([unverified(
                f"charge-scaling/area-law/n={dim}/{row.formula}",
                "prediction emitted only; not derivable at desk scale",
            )])

    path, digest = write_csv(out, "charge-scaling", "F_vs_ratio",
                             ("spacetime_dim", "mass", "ratio", "F"), rows)
    man.files[path.name] = digest


def suite_unruh(cfg, man, out):
    rows = []
    for a in cfg["accelerations"]:
        traj = wk.Trajectory.uniform(a)
        corr = wk.pullback(wk.WightmanModel(0.0, 4), traj)
        rep = wk.detailed_balance(corr, TWO_PI / a)
        rows += [(a, w, d) for w, d in zip(rep.omegas, rep.defects)]
        man.extend([check_less(
            f"unruh/detailed-balance/a={a:g}", rep.max_defect, cfg["tol_balance"],
            note="beta = 2 pi / a over omega in [0.5, 3] a",
        )])
    traj = wk.Trajectory.uniform(1.0)
    corr = wk.pullback(wk.WightmanModel(0.0, 4), traj)
    neg = wk.detailed_balance(corr, np.pi)
    man.extend([
        check_greater("unruh/negative-control", neg.max_defect,
                      cfg["control_min_defect"], note="beta = pi must fail loudly"),
        check_bool("unruh/hermiticity",
                   bool(np.max(np.abs(corr.values[::-1] - np.conj(corr.values)))
                        < 1e-12)),
    ])
    corr2 = wk.pullback(wk.WightmanModel(0.0, 2), traj)
    rep2 = wk.detailed_balance(corr2, TWO_PI)
    man.extend([check_less("unruh/detailed-balance-d2-current",
                           rep2.max_defect, cfg["tol_balance"])])
    # vacuum one-sided spectrum: the beta -> infinity side
    sf = wk.spectral_function(corr, np.array([-1.0, 1.0]))
    man.extend([check_bool(
        "unruh/thermal-spectrum-positive",
        bool(np.all(np.real(sf.values) > 0)),
        note="two-sided spectrum strictly positive at finite temperature",
    )])
    man.extend([
        check_less("unruh/kms-strip-chiral",
                   wk.kms_shift_check(ce.thermal_kernel(TWO_PI, i_epsilon=1e-300)),
                   _strictened(cfg["tol_strip"], cfg)),
        check_less("unruh/boost-stationarity",
                   wk.boost_orbit_consistency(1.0),
                   _strictened(cfg["tol_stationarity"], cfg)),
    ])
    # massive pullback validated against the massless closed form
    tm = wk.Trajectory.uniform(1.0, span=12.0, n=1 << 13)
    cm = wk.pullback(wk.WightmanModel(1e-4, 4), tm)
    c0 = wk.pullback(wk.WightmanModel(0.0, 4), tm)
    mid = slice(len(tm.tau_grid) // 4, 3 * len(tm.tau_grid) // 4)
    dev = float(np.max(np.abs(cm.values[mid] - c0.values[mid])
                       / np.abs(c0.values[mid])))
    man.extend([check_less("unruh/massive-massless-limit", dev, 1e-2,
                           note="m = 1e-4 single-quadrature kernel vs closed form")])
    path, digest = write_csv(out, "unruh", "balance_defect",
                             ("acceleration", "omega", "defect"), rows)
    man.files[path.name] = digest


def suite_crossing(cfg, man, out):
    m = cfg["mass"]
    gs = [
        cz.WedgeTestFn(0.0, 2.5, 0.7, 0.9, mass=m),
        cz.WedgeTestFn(0.3, 3.0, 0.5, 0.8, mass=m),
        cz.WedgeTestFn(-0.2, 2.2, 0.6, 0.7, mass=m),
    ]
    n = cfg["grid_n"]
    t1 = np.linspace(-1.5, 1.5, n)
    t2 = np.linspace(-1.2, 1.8, n)
    crossing_defect = 0.0
    for i, g in enumerate(gs):
        rep = cz.free_crossing_check(g, t1, t2)
        crossing_defect = max(crossing_defect, rep.max_rel_defect)
        man.extend([check_less(
            f"crossing/free-crossing/geometry-{i}", rep.max_rel_defect,
            cfg["tol_crossing"],
            note=f"i pi continued pair formfactor vs crossed element, {n}x{n} grid",
        )])
    f = cz.WedgeTestFn(0.2, 2.0, 0.6, 0.8, mass=m)
    rf = cz.mass_shell_restrict(f)
    man.extend([
        check_less("crossing/strip-cauchy-riemann", rf.cauchy_riemann_residual(),
                   cfg["tol_cr_residual"]),
        check_less("crossing/modular-involution", rf.involution_defect(),
                   cfg["tol_involution"], note="fhat(theta + i pi) = conj fhat(theta)"),
    ])
    try:
        cz.mass_shell_restrict(cz.WedgeTestFn(0.2, -2.0, 0.6, 0.8, mass=m))
        man.extend([check_bool("crossing/left-wedge-control", False,
                               note="left-wedge continuation failed to diverge")])
    except NumericError:
        man.extend([check_bool("crossing/left-wedge-control", True,
                               note="left-wedge strip continuation diverges")])
    f1 = cz.WedgeTestFn(-0.1, 2.2, 0.5, 0.7, mass=m)
    f2 = cz.WedgeTestFn(0.0, 0.45, 0.15, 0.2, mass=m)
    kms = cz.kms_free_identity(gs[0], f1, f2)
    man.extend([check_less("crossing/kms-identity", kms.rel_diff, cfg["tol_kms"])])
    floor = 1e-12
    ratio_ok = (kms.rel_diff <= 10.0 * (crossing_defect + floor)
                and crossing_defect <= 10.0 * (kms.rel_diff + floor))
    man.extend([check_bool("crossing/kms-crossing-consistency", ratio_ok,
                           note="two renderings of one identity, factor-10 band")])
    man.extend([unverified(
        "crossing/interacting-crossing",
        "general interacting crossing requires the unsolved multi-particle "
        "emulator action; only free/integrable instances are tested",
    )])
    rep0 = cz.free_crossing_check(gs[0], t1, t2)
    rows = [(a, b, np.real(v), np.imag(v), np.real(w), np.imag(w))
            for a, b, v, w in zip(
                np.repeat(t1, n), np.tile(t2, n),
                rep0.continued.ravel(), rep0.crossed.ravel())]
    path, digest = write_csv(
        out, "crossing", "formfactor_grid",
        ("theta1", "theta2", "re_continued", "im_continued", "re_crossed",
         "im_crossed"), rows)
    man.files[path.name] = digest


def suite_zf_algebra(cfg, man, out):
    rows = []
    thetas = np.linspace(-3.0, 3.0, 120)
    fv = np.exp(-((thetas - 0.4) ** 2))
    gv = np.exp(-((thetas + 0.3) ** 2) / 0.5)
    th3 = np.linspace(-2.5, 2.5, 40)
    for b in cfg["couplings"]:
        S = cz.SMatrixModel(b)
        props = cz.smatrix_properties(S)
        ex = cz.zf_exchange_check(S, fv, gv, thetas)
        dbl = cz.zf_double_exchange_check(S, fv, gv, thetas)
        assoc = cz.zf_associativity_check(
            S, np.exp(-((th3 - 0.5) ** 2)), np.exp(-(th3**2) / 0.8),
            np.exp(-((th3 + 0.6) ** 2) / 1.2), th3)
        rows.append((b, props["unitarity"], props["inverse"], props["crossing"],
                     ex, dbl, assoc))
        man.extend([
            check_less(f"zf-algebra/smatrix-unitarity/b={b:g}",
                       props["unitarity"], cfg["tol_smatrix"]),
            check_less(f"zf-algebra/smatrix-inverse/b={b:g}",
                       props["inverse"], cfg["tol_smatrix"]),
            check_less(f"zf-algebra/smatrix-crossing/b={b:g}",
                       props["crossing"], cfg["tol_smatrix"]),
            check_less(f"zf-algebra/exchange/b={b:g}", ex, cfg["tol_exchange"]),
            check_less(f"zf-algebra/double-exchange/b={b:g}", dbl,
                       cfg["tol_double"]),
            check_less(f"zf-algebra/associativity/b={b:g}", assoc,
                       cfg["tol_associativity"]),
        ])
    S = cz.SMatrixModel(1.0)
    man.extend([check_less("zf-algebra/s-at-zero", float(abs(S(0.0) + 1.0)),
                           1e-14, note="S(0) = -1")])

    # particle-number conservation: a k_max-deep in/out sequence leaks nothing
    st = cz.zf_vacuum(n_grid=14, k_max=cfg["k_max"])
    tn = st.theta_grid
    packets = [np.exp(-((tn - c) ** 2) / w)
               for c, w in ((0.5, 1.0), (-0.7, 0.6), (0.0, 1.0), (1.0, 0.8))]
    for p in packets:
        st = cz.zf_apply("create", p, st, S)
    st = cz.zf_apply("annihilate", packets[0], st, S)
    st = cz.zf_apply("create", np.exp(-((tn + 1.2) ** 2)), st, S)
    man.extend([check_less("zf-algebra/truncation-leakage", st.leaked_norm,
                           cfg["tol_leak"],
                           note=f"k_max = {cfg['k_max']} in/out sequence")])
    path, digest = write_csv(
        out, "zf-algebra", "defects",
        ("coupling", "unitarity", "inverse", "crossing", "exchange",
         "double_exchange", "associativity"), rows)
    man.files[path.name] = digest


_SUITES = {
    "thermal-map": suite_thermal_map,
    "ej-fluct": suite_ej_fluct,
    "entropy-scan": suite_entropy_scan,
    "charge-scaling": suite_charge_scaling,
    "unruh": suite_unruh,
    "crossing": suite_crossing,
    "zf-algebra": suite_zf_algebra,
}


def run_experiment(cfg, out_dir):
    man = RunManifest(cfg.experiment, dict(cfg.params))
    _SUITES[cfg.experiment](cfg, man, out_dir)
    man.write(out_dir)
    return man


def verify_all(out_dir, strict=False, parallel=1, only=None):
    """Every suite at default desk-scale parameters; aggregate manifest."""
    names = list(EXPERIMENTS if only is None else only)
    manifests = {}

    def _run(name):
        return run_experiment(load_config(name, strict=strict), out_dir)

    if parallel > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=parallel) as ex:
            futs = {name: ex.submit(_run, name) for name in names}
            for name in names:                  # fixed order, schedule-free
                manifests[name] = futs[name].result()
    else:
        for name in names:
            manifests[name] = _run(name)

    agg = RunManifest("verify-all", {"strict": strict, "suites": names})
    for name in names:
        agg.extend(manifests[name].records)
        agg.files.update(manifests[name].files)
    agg.write(out_dir)
    return agg
