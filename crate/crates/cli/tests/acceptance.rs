//! Acceptance criteria, one line of output each. Every oracle is computed
//! here, independently of the code under test where possible.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};

use dryout_core::eos::{Eos, VanDerWaals};
use dryout_core::interface::{
    max_flux_scan, sign_change_transition_flux, sign_changes_modified, solve_interface,
};
use dryout_core::numerics::{log_space, lower_convex_envelope};
use dryout_core::saturation::{boiling_temperature, maxwell_construction, saturation_curve};
use dryout_core::stefan::{
    dryout_condition, solve_free_boundary, solve_stationary, xhat_critical, z0_of_xhat, FreeBoundaryProblem,
    StefanInputs,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn central<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let h = 1e-5 * x.abs().max(1.0);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn rel(got: f64, want: f64) -> f64 {
    let d = (got - want).abs();
    if d == 0.0 {
        0.0
    } else {
        d / got.abs().max(want.abs())
    }
}

fn thermodynamic_consistency() -> Outcome {
    let m = VanDerWaals::reduced();
    let (mut grad, mut gibbs, mut legendre) = (0.0_f64, 0.0_f64, 0.0_f64);
    for v in log_space(0.4, 10.0, 20) {
        for k in 0..20 {
            let t = 0.3 + 1.2 * k as f64 / 19.0;
            grad = grad
                .max(rel(m.p(v, t), -central(|x| m.psi(x, t), v)))
                .max(rel(m.eta(v, t), -central(|x| m.psi(v, x), t)));
            let eps = |x: f64, y: f64| m.psi(x, y) + y * m.eta(x, y);
            gibbs = gibbs
                .max(rel(
                    t * central(|x| m.eta(x, t), v),
                    central(|x| eps(x, t), v) + m.p(v, t),
                ))
                .max(rel(t * central(|x| m.eta(v, x), t), central(|x| eps(v, x), t)));

            let rho = 1.0 / v;
            let e = m.volume_helmholtz(rho, t).unwrap();
            let psi = m.psi(v, t);
            let (p, te) = (m.p(v, t), t * m.eta(v, t));
            // relative to the size of the terms, since p and ε cross zero on the grid
            let scaled = |got: f64, want: f64, size: f64| (got - want).abs() / size;
            legendre = legendre
                .max(scaled(m.eps(v, t), psi + te, psi.abs() + te.abs()))
                .max(scaled(
                    e.p_check,
                    p,
                    e.psi_vol.abs() + (rho * e.dpsi_vol_drho).abs(),
                ))
                .max(scaled(e.dpsi_vol_drho, psi + v * p, psi.abs() + (v * p).abs()));
        }
    }
    outcome(
        grad <= 1e-6 && gibbs <= 1e-6 && legendre <= 1e-10,
        format!("gradients {grad:.2e}, Gibbs {gibbs:.2e} (tol 1e-6); Legendre {legendre:.2e} (tol 1e-10)"),
    )
}

fn critical_point() -> Outcome {
    let m = VanDerWaals::reduced();
    let cp = m.critical_point().unwrap();
    let off = (cp.v_c - 1.0)
        .abs()
        .max((cp.theta_c - 1.0).abs())
        .max((cp.p_c - 1.0).abs());
    let d1 = m.dp_dv(cp.v_c, cp.theta_c).abs();
    let d2 = m.d2p_dv2(cp.v_c, cp.theta_c).abs();
    outcome(
        off <= 1e-12 && d1 <= 1e-8 && d2 <= 1e-8,
        format!("|(v_c, θ_c, p_c) − 1| = {off:.1e}, |∂v p| = {d1:.1e}, |∂²v p| = {d2:.1e}"),
    )
}

fn nearest(xs: &[f64], v: f64) -> usize {
    let i = xs.partition_point(|&x| x < v);
    if i == 0 {
        0
    } else if i == xs.len() || (v - xs[i - 1]) < (xs[i] - v) {
        i - 1
    } else {
        i
    }
}

fn maxwell_bitangent() -> Outcome {
    let m = VanDerWaals::reduced();
    let xs = log_space(m.b * (1.0 + 1e-6), 50.0, 10_000);
    let (mut cells, mut resid) = (0usize, 0.0_f64);
    for t in [0.6, 0.75, 0.9] {
        let s = maxwell_construction(&m, t).unwrap();
        let ys: Vec<f64> = xs.iter().map(|&v| m.psi(v, t)).collect();
        let seg = lower_convex_envelope(&xs, &ys)
            .unwrap()
            .into_iter()
            .max_by(|p, q| (p.x_hi - p.x_lo).total_cmp(&(q.x_hi - q.x_lo)))
            .unwrap();
        cells = cells
            .max(nearest(&xs, s.v_l_star).abs_diff(seg.i_lo))
            .max(nearest(&xs, s.v_g_star).abs_diff(seg.i_hi));
        let intercept = |v: f64| -m.p(v, t) * v - m.psi(v, t);
        resid = resid
            .max((m.p(s.v_l_star, t) - m.p(s.v_g_star, t)).abs())
            .max((intercept(s.v_l_star) - intercept(s.v_g_star)).abs());
    }
    outcome(
        cells <= 2 && resid <= 1e-9,
        format!("envelope offset {cells} cell(s) (tol 2), bitangent residual {resid:.1e} (tol 1e-9·p_c)"),
    )
}

fn clausius_clapeyron() -> Outcome {
    let m = VanDerWaals::reduced();
    let h = 1e-4;
    let (mut worst, mut min_slope) = (0.0_f64, f64::INFINITY);
    for k in 0..10 {
        let t = 0.6 + 0.35 * k as f64 / 9.0;
        let p = |x: f64| maxwell_construction(&m, x).unwrap().p_star;
        let fd = (p(t + h) - p(t - h)) / (2.0 * h);
        let s = maxwell_construction(&m, t).unwrap();
        let ell = -t * (m.eta(s.v_g_star, t) - m.eta(s.v_l_star, t));
        let predicted = -ell / (t * (s.v_g_star - s.v_l_star));
        worst = worst.max((fd - predicted).abs() / fd.abs());
        min_slope = min_slope.min(fd);
    }
    let curve = saturation_curve(&m, 0.6, 0.95, 50).unwrap();
    let monotone = curve
        .windows(2)
        .all(|w| w[1].p_star > w[0].p_star && w[1].v_g_star < w[0].v_g_star && w[1].v_l_star > w[0].v_l_star);
    outcome(
        worst < 1e-5 && min_slope > 0.0 && monotone,
        format!("max residual {worst:.1e} (tol 1e-5), min dp*/dθ {min_slope:.3}, curve monotone: {monotone}"),
    )
}

fn interface_solve() -> Outcome {
    let m = VanDerWaals::reduced();
    let v_l = maxwell_construction(&m, 0.9).unwrap().v_l_star;
    let tb = boiling_temperature(&m, v_l).unwrap();
    let seed = maxwell_construction(&m, tb).unwrap();
    let zero = solve_interface(&m, v_l, 0.0).unwrap();
    let seed_err = (zero.theta_star - tb).abs().max((zero.v_g - seed.v_g_star).abs());

    let z_max = 0.5 * max_flux_scan(&m, v_l, 0.0, 0.6, 13).unwrap().j_max.powi(2);
    let (mut last, mut increasing) = (f64::NEG_INFINITY, true);
    let (mut jump, mut recovery) = (0.0_f64, 0.0_f64);
    for k in 0..10 {
        let z = 0.5 * z_max * k as f64 / 9.0;
        let j = (2.0 * z).sqrt();
        let s = solve_interface(&m, v_l, j).unwrap();
        increasing &= s.theta_star > last;
        last = s.theta_star;
        let g = m.modified_quantities(1.0 / s.v_g, s.theta_star, j).unwrap();
        let l = m.modified_quantities(1.0 / v_l, s.theta_star, j).unwrap();
        let scale = l.dpsi_j_drho.abs().max(1.0);
        jump = jump
            .max((g.p_j - l.p_j).abs())
            .max((g.dpsi_j_drho - l.dpsi_j_drho).abs() / scale);
        if j > 0.0 {
            let j2 = (s.p_l - s.p_g) / (s.v_g - v_l);
            recovery = recovery.max((j2.sqrt() - j).abs() / j);
        }
    }
    outcome(
        seed_err <= 1e-10 && increasing && jump <= 1e-9 && recovery <= 1e-8,
        format!(
            "seed error {seed_err:.1e}, θ*(Z) increasing: {increasing}, modified jumps {jump:.1e}, \
             j recovery {recovery:.1e}"
        ),
    )
}

fn large_flux() -> Outcome {
    let m = VanDerWaals::reduced();
    let counts: Vec<usize> = [0.05, 0.2, 0.5, 2.0, 10.0]
        .iter()
        .map(|&j| sign_changes_modified(&m, 0.9, j, 20_000).unwrap())
        .collect();
    let three_to_one =
        counts[0] == 3 && *counts.last().unwrap() == 1 && counts.windows(2).all(|w| w[1] <= w[0]);

    let v_l = maxwell_construction(&m, 0.9).unwrap().v_l_star;
    let scan = max_flux_scan(&m, v_l, 0.0, 0.6, 13).unwrap();
    let j_t = sign_change_transition_flux(&m, 0.9, 0.05, 2.0, 20_000).unwrap();
    let j_t_star = sign_change_transition_flux(&m, scan.solution.theta_star, 0.05, 2.0, 20_000).unwrap();
    let gap = (scan.j_max - j_t).abs() / j_t;
    outcome(
        three_to_one && gap <= 0.1,
        format!(
            "sign changes {counts:?}; j_max {:.5} vs transition {j_t:.5} at θ = 0.9 \
             ({j_t_star:.5} at θ* = {:.4}): gap {:.1}% (tol 10%)",
            scan.j_max,
            scan.solution.theta_star,
            100.0 * gap
        ),
    )
}

fn free_boundary() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst, mut n) = (0.0_f64, 0);
    while n < 1000 {
        let a: f64 = rng.gen_range(0.1..10.0);
        let y0: f64 = rng.gen_range(0.1..10.0);
        let xhat: f64 = rng.gen_range(0.01..20.0);
        // z₀ in the oracle's own arithmetic
        let e = (xhat / a).exp();
        let z0 = 1.0 + (y0 - xhat) * e / (a * (e - 1.0));
        if z0 < 0.0 {
            continue;
        }
        let back = solve_free_boundary(&FreeBoundaryProblem {
            a,
            b: 1.0,
            c: 1.0,
            y0,
            z0,
        })
        .unwrap();
        worst = worst.max((back - xhat).abs() / xhat);
        n += 1;
    }
    let unit = |y0, z0| FreeBoundaryProblem {
        a: 1.0,
        b: 1.0,
        c: 1.0,
        y0,
        z0,
    };
    let ln2 = std::f64::consts::LN_2;
    let e1 = (-1.0_f64).exp();
    let ex1 = (solve_free_boundary(&unit(2.0, 1.0)).unwrap() - 2.0).abs();
    let ex2 = (solve_free_boundary(&unit(1.0, 3.0 - 2.0 * ln2)).unwrap() - ln2).abs();
    let ex3 = (xhat_critical(1.0, e1).unwrap() - 1.0).abs();
    let fwd = (z0_of_xhat(1.0, 1.0, 1.0, 1.0, ln2).unwrap() - (3.0 - 2.0 * ln2)).abs();
    outcome(
        worst <= 1e-9 && ex1 <= 1e-12 && ex2 <= 1e-10 && ex3 <= 1e-10 && fwd <= 1e-12,
        format!("round trip {worst:.1e} over {n} instances; examples {ex1:.1e}, {ex2:.1e}, {ex3:.1e}"),
    )
}

fn unit_inputs(ell: f64, j: f64) -> StefanInputs {
    StefanInputs {
        kappa1: 1.0,
        kappa2: 1.0,
        d1: 1.0,
        d2: 1.0,
        r: 1.0,
        j,
        ell,
        theta_in: -2.0,
        theta_star: 0.0,
        v_gas: None,
    }
}

fn dryout_theorem() -> Outcome {
    let (mut verdicts, mut resid, mut excess) = (true, 0.0_f64, f64::NEG_INFINITY);
    for i in 0..20 {
        let ell = -(0.05 + 2.95 * i as f64 / 19.0);
        for k in 0..20 {
            let j = 0.2 + 2.8 * k as f64 / 19.0;
            let inp = unit_inputs(ell, j);
            let d = solve_stationary(&inp).unwrap();
            verdicts &= d.exists() == (-ell <= 1.0 / (j * j));
            if let Some(p) = d.profile() {
                resid = resid.max(p.stefan_residual.abs() / (ell * j).abs());
                excess = excess.max(p.max_liquid_excess(1000).unwrap());
            }
        }
    }
    let mut equality = 0.0_f64;
    for k in 0..20 {
        let j = 0.2 + 2.8 * k as f64 / 19.0;
        let mut inp = unit_inputs(0.0, j);
        inp.ell = -inp.dryout_bound();
        assert!(dryout_condition(&inp));
        let x = solve_stationary(&inp).unwrap().x_star().unwrap();
        let want = xhat_critical(1.0 / j, 2.0 * j).unwrap();
        equality = equality.max((x - want).abs() / want);
    }
    let x_of = |theta_in: f64, j: f64| {
        let mut inp = unit_inputs(-0.3, j);
        inp.theta_in = theta_in;
        solve_stationary(&inp).unwrap().x_star().unwrap()
    };
    let in_grid: Vec<f64> = (0..20).map(|k| x_of(-5.0 + 4.9 * k as f64 / 19.0, 1.0)).collect();
    let j_grid: Vec<f64> = (0..20).map(|k| x_of(-2.0, 0.2 + 1.6 * k as f64 / 19.0)).collect();
    let monotone = in_grid.windows(2).all(|w| w[1] < w[0]) && j_grid.windows(2).all(|w| w[1] > w[0]);
    outcome(
        verdicts && equality <= 1e-12 && resid <= 1e-9 && monotone && excess <= 0.0,
        format!(
            "verdicts match: {verdicts}, equality case {equality:.1e}, Stefan residual {resid:.1e}, \
             monotone: {monotone}, max θ₁ − θ* {excess:.1e}"
        ),
    )
}

fn solver(args: &[&str], config: &Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dryout-solver"))
        .args(&args[..1])
        .arg(config)
        .args(&args[1..])
        .output()
        .expect("run dryout-solver");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn field<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no '{key}' in report:\n{report}"))
}

fn end_to_end() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let eos_cfg = dir.path().join("eos.cfg");
    let common = "j_flux = 0.2\ntheta_in = 0.5\nr = 1\nkappa1 = 1\nkappa2 = 1\nd1 = 1\nd2 = 1\n";
    std::fs::write(
        &eos_cfg,
        format!("mode = eos\nk1 = 1\nk2 = 2.6666666666666665\na = 3\nb = 0.3333333333333333\nrho_liquid = 1.6\n{common}"),
    )
    .unwrap();
    let (c1, first) = solver(&["dryout"], &eos_cfg);
    let (c2, second) = solver(&["dryout"], &eos_cfg);
    let identical = c1 == 0 && c2 == 0 && first == second;

    let (ci, iface) = solver(&["interface"], &eos_cfg);
    let direct_cfg = dir.path().join("direct.cfg");
    std::fs::write(
        &direct_cfg,
        format!(
            "mode = direct\nrho_liquid = 1.6\n{common}theta_star = {}\nrho_gas = {}\nlatent_heat = {}\n",
            field(&iface, "theta_star"),
            field(&iface, "rho_gas"),
            field(&iface, "latent_heat")
        ),
    )
    .unwrap();
    let (cd, direct) = solver(&["dryout"], &direct_cfg);
    let x_eos = field(&first, "x_star");
    let x_direct = field(&direct, "x_star");
    outcome(
        identical && ci == 0 && cd == 0 && x_eos == x_direct,
        format!("repeat runs identical: {identical}; x* eos {x_eos} vs composed {x_direct}"),
    )
}

type Check = fn() -> Outcome;

const CRITERIA: &[(u8, &str, Check)] = &[
    (1, "thermodynamic consistency", thermodynamic_consistency),
    (2, "critical point", critical_point),
    (3, "Maxwell bitangent", maxwell_bitangent),
    (4, "Clausius-Clapeyron", clausius_clapeyron),
    (5, "interface solve", interface_solve),
    (6, "large-flux regime", large_flux),
    (7, "free boundary", free_boundary),
    (8, "dryout theorem", dryout_theorem),
    (9, "end-to-end determinism", end_to_end),
];

fn main() -> ExitCode {
    let mut failed = 0;
    for &(id, name, check) in CRITERIA {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.passed {
            failed += 1;
        }
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id} ({name}): {}", result.detail);
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
