//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Statistical criteria run through the command-line harness configuration
//! with master seed 42, the same runs that produced the files in `pilots/`.
//! The process exits successfully either way; the summary line and the
//! per-criterion lines carry the verdicts.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use anderson_lab::cocycle::{entry_11_signed_log, lloyd_lyapunov, lyapunov_estimate, one_step, scaled_product_of};
use anderson_lab::distributions::{log_p_star, log_p_star_slope, sample, sample_at, DistributionSpec};
use anderson_lab::harness::{parse_config, run_experiment, ResultRow, Value};
use anderson_lab::localization::{decay_rate, msa_parameter_suite, wegner_curve};
use anderson_lab::rng::SeedSpec;
use anderson_lab::spectrum::{
    eigenvector, greens_direct, greens_entry, hamiltonian, nearest_eigenvalue, poisson_residual, Box, Side,
};
use anderson_lab::stats::ls_slope;
use common::*;

const SEED: u64 = 42;
const CAUCHY: &str = "cauchy{center=0,gamma=1}";

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn run(experiment: &str, flags: &[(&str, &str)]) -> Vec<ResultRow> {
    let mut all = vec![("experiment", experiment.to_string()), ("seed", SEED.to_string())];
    all.extend(flags.iter().map(|(k, v)| (*k, v.to_string())));
    let config = parse_config(None, &all).expect("valid config");
    run_experiment(&config).expect("experiment runs").rows
}

fn real(row: &ResultRow, key: &str) -> f64 {
    match row.extra(key) {
        Some(Value::Real(x)) => *x,
        other => panic!("{key}: {other:?}"),
    }
}

fn hits(row: &ResultRow) -> u64 {
    match row.extra("hits") {
        Some(Value::Int(h)) => *h,
        other => panic!("hits: {other:?}"),
    }
}

fn lloyd_agreement() -> Verdict {
    let d = DistributionSpec::cauchy(0.0, 1.0);
    let mut worst = 0.0f64;
    for (i, e) in [-2.0, -1.0, 0.0, 1.0, 2.0].into_iter().enumerate() {
        let est = lyapunov_estimate(&d, e, 100_000, 10, SeedSpec::new(SEED, 1 << 20 | i as u64, 0)).unwrap();
        let exact = lloyd_arccosh(e, 1.0);
        worst = worst.max((est.lambda_hat - exact).abs() / exact);
    }
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let at_zero = (lloyd_lyapunov(0.0, 1.0).unwrap() - golden).abs();
    verdict(
        worst <= 0.02 && at_zero < 1e-12 && (golden - 0.481212).abs() < 1e-6,
        format!("max relative error {worst:.4} (limit 0.02), lambda(0) = {golden:.6}"),
    )
}

fn greens_oracle() -> Verdict {
    let mut worst_g = 0.0f64;
    let mut worst_det = 0.0f64;
    let mut sign_mismatch = 0;
    for t in 0..1000u64 {
        let (probe, e, _) = random_instance(SeedSpec::new(SEED, 2 << 20, t), 0, 1..=5);
        let l = 2 * probe.len(); // boxes of 3..=11 sites
        let bx = Box::centered(l).unwrap();
        let dist = if t % 2 == 0 {
            DistributionSpec::cauchy(0.0, 1.0)
        } else {
            DistributionSpec::Bernoulli { a: -1.5, b: 1.5, q: 0.5 }
        };
        let path = sample_at(&dist, bx.left(), bx.size(), SeedSpec::new(SEED, 2 << 20 | 1, t)).unwrap();
        let h = hamiltonian(&path, bx).unwrap();
        for (side, y) in [(Side::Left, bx.left()), (Side::Right, bx.right())] {
            let g = greens_entry(&path, bx, e, side).unwrap().value.to_f64();
            let direct = greens_direct(&h, e, bx.center, y).unwrap();
            worst_g = worst_g.max((g - direct).abs() / direct.abs());
        }
        let (det_path, e2, _) = random_instance(SeedSpec::new(SEED, 2 << 20 | 2, t), 0, 3..=12);
        let got = entry_11_signed_log(e2, &det_path, -1, det_path.last_site()).unwrap();
        let (sign, log_abs) = dense_log_det(e_minus_h(e2, &det_path.values));
        if got.sign != sign {
            sign_mismatch += 1;
        }
        worst_det = worst_det.max((got.log_abs - log_abs).abs());
    }
    verdict(
        worst_g <= 1e-8 && worst_det <= 1e-8 && sign_mismatch == 0,
        format!("greens rel err {worst_g:.1e}, det log err {worst_det:.1e}, sign mismatches {sign_mismatch}"),
    )
}

fn poisson() -> Verdict {
    let mut worst = 0.0f64;
    let (mut done, mut skipped, mut t) = (0, 0, 0u64);
    while done < 1000 {
        let mut rng = SeedSpec::new(SEED, 3 << 20, t).rng();
        let l = 2 * (1 + (rng.next_u64() % 16) as usize);
        let e = 6.0 * rng.open01() - 3.0;
        let bx = Box::centered(l).unwrap();
        let path = sample_at(&DistributionSpec::cauchy(0.0, 1.0), bx.left(), bx.size(), SeedSpec::new(SEED, 3 << 20 | 1, t)).unwrap();
        t += 1;
        match poisson_residual(&path, bx, e, rng.open01() - 0.5, rng.open01() - 0.5) {
            Ok(r) => {
                worst = worst.max(r);
                done += 1;
            }
            Err(_) => skipped += 1,
        }
    }
    verdict(worst <= 1e-8, format!("max residual {worst:.1e} over 1000 boxes, {skipped} resonant draws skipped"))
}

/// `log|det|` of a product accumulated as `Q R` with the diagonal of `R`
/// kept in log form.
fn qr_log_det(energy: f64, values: &[f64]) -> f64 {
    let (mut q, mut log_det) = ([[1.0, 0.0], [0.0, 1.0]], 0.0f64);
    for &v in values {
        let t = one_step(energy, v).unwrap();
        // columns of T Q
        let c0 = [t.m11 * q[0][0] + t.m12 * q[1][0], t.m21 * q[0][0] + t.m22 * q[1][0]];
        let c1 = [t.m11 * q[0][1] + t.m12 * q[1][1], t.m21 * q[0][1] + t.m22 * q[1][1]];
        let r11 = c0[0].hypot(c0[1]);
        let u = [c0[0] / r11, c0[1] / r11];
        let r12 = u[0] * c1[0] + u[1] * c1[1];
        let w = [c1[0] - r12 * u[0], c1[1] - r12 * u[1]];
        let r22 = w[0].hypot(w[1]);
        q = [[u[0], w[0] / r22], [u[1], w[1] / r22]];
        log_det += r11.ln() + r22.ln();
    }
    log_det
}

fn sl2_conservation() -> Verdict {
    let mut failures = Vec::new();
    let mut qr_worst = 0.0f64;
    for (k, n) in [1_000usize, 10_000, 100_000, 1_000_000].into_iter().enumerate() {
        let mut values = sample(&DistributionSpec::cauchy(0.0, 1.0), n, SeedSpec::new(SEED, 4 << 20, k as u64)).unwrap().values;
        for (i, v) in values.iter_mut().enumerate().step_by(n / 10) {
            *v = if i % 2 == 0 { 2.5e8 } else { -4e11 };
        }
        let m = scaled_product_of(0.0, &values).unwrap();
        let drift = m.log_abs_det().abs();
        if !(drift <= 1e-9 * n as f64) {
            failures.push(format!("n={n}: drift {drift:.3e}"));
        }
        qr_worst = qr_worst.max(qr_log_det(0.0, &values).abs() / n as f64);
    }
    // Largest length at which the max-abs representation still passes.
    let probe = sample(&DistributionSpec::cauchy(0.0, 1.0), 200, SeedSpec::new(SEED, 4 << 20 | 1, 0)).unwrap().values;
    let holds_to = (1..=probe.len())
        .take_while(|&n| scaled_product_of(0.0, &probe[..n]).unwrap().log_abs_det().abs() <= 1e-9 * n as f64)
        .last()
        .unwrap_or(0);
    verdict(
        failures.is_empty(),
        format!(
            "{}; bound holds on a typical Cauchy path up to {holds_to} steps; QR-tracked log det drift per step {qr_worst:.1e}",
            if failures.is_empty() { "all lengths within bound".to_string() } else { failures.join(", ") }
        ),
    )
}

fn lde_shape() -> Verdict {
    let rows = run("lde-tail", &[("dist", "logpareto{p_tail=3}"), ("energy", "0"), ("length_grid", "50,100,200"), ("trials", "10000")]);
    let tails: Vec<f64> = rows.iter().map(|r| r.estimate.unwrap()).collect();
    let counts: Vec<u64> = rows.iter().map(hits).collect();
    let nonincreasing = tails.windows(2).all(|w| w[1] <= w[0]);
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| hits(r) > 0)
        .map(|r| ((r.length.unwrap() as f64).ln(), r.estimate.unwrap().ln()))
        .unzip();
    let slope = if xs.len() >= 2 { ls_slope(&xs, &ys) } else { f64::NAN };
    let cauchy = run("lde-tail", &[("dist", CAUCHY), ("energy", "0"), ("length", "200"), ("trials", "10000")]);
    let c200 = cauchy[0].estimate.unwrap();
    verdict(
        nonincreasing && slope <= -1.0 && c200 <= 0.02,
        format!(
            "log-Pareto hits {counts:?} at L=50,100,200 (eps = {:.4}), slope over nonzero points {slope:.2}; Cauchy tail at L=200 {c200:.1e}",
            real(&rows[0], "eps")
        ),
    )
}

fn wegner() -> Verdict {
    let rows = run("wegner", &[("dist", CAUCHY), ("energy", "0"), ("length", "100"), ("beta", "0.5"), ("trials", "10000")]);
    let (h, hi) = (hits(&rows[0]), rows[0].ci_high.unwrap());
    let widths: Vec<f64> = (0..12).map(|k| 10f64.powi(-k)).rev().collect();
    let curve = wegner_curve(&DistributionSpec::cauchy(0.0, 1.0), 0.0, 100, &widths, 10_000, SeedSpec::new(SEED, 6 << 20, 0)).unwrap();
    let monotone = curve.windows(2).all(|w| w[0].hits <= w[1].hits);
    verdict(
        h == 0 && hi <= 4e-4 && monotone,
        format!("{h} hits in 10^4 boxes, Wilson upper {hi:.2e} (limit 4e-4); diagnostic curve monotone: {monotone}"),
    )
}

fn regularity() -> Verdict {
    let rows = run("regularity", &[("dist", CAUCHY), ("energy", "0"), ("length_grid", "100,200,400"), ("trials", "10000")]);
    let p: Vec<f64> = rows.iter().map(|r| r.estimate.unwrap()).collect();
    let se: Vec<f64> = rows.iter().map(|r| (r.estimate.unwrap() * (1.0 - r.estimate.unwrap()) / 10_000.0).sqrt()).collect();
    let trend = (0..2).all(|i| p[i + 1] - p[i] >= -3.0 * (se[i] * se[i] + se[i + 1] * se[i + 1]).sqrt());
    verdict(
        p[1] >= 0.95 && trend,
        format!("regular fraction {:.4}, {:.4}, {:.4} at L=100,200,400 with m = {:.4}", p[0], p[1], p[2], real(&rows[0], "m")),
    )
}

fn eigen_decay() -> Verdict {
    let rows = run("eigenmodes", &[("dist", CAUCHY), ("energy", "0"), ("length", "400"), ("trials", "100")]);
    let frac = real(&rows[0], "in_band_fraction");
    // Same boxes, plain inverse-iteration vectors, for comparison.
    let seed = SeedSpec::new(SEED, anderson_lab::harness::run::stream_id(anderson_lab::harness::Experiment::Eigenmodes, 0, 0), 0);
    let bx = Box::centered(400).unwrap();
    let plain = (0..100)
        .filter(|&t| {
            let path = sample_at(&DistributionSpec::cauchy(0.0, 1.0), bx.left(), bx.size(), seed.trial(t)).unwrap();
            let h = hamiltonian(&path, bx).unwrap();
            let v = eigenvector(&h, nearest_eigenvalue(&h, 0.0)).unwrap();
            decay_rate(&v).is_ok_and(|r| (0.5 * 0.4812..=1.5 * 0.4812).contains(&r))
        })
        .count();
    verdict(
        frac >= 0.9,
        format!("{:.0}% in [0.5, 1.5] x 0.4812, mean rate {:.4} (plain inverse-iteration vectors: {plain}%)", 100.0 * frac, rows[0].estimate.unwrap()),
    )
}

fn msa() -> Verdict {
    let s = msa_parameter_suite(12.0, 0.9999, None).unwrap();
    let close = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol;
    let values = close(s.kappa, 0.01, 1e-15)
        && close(s.q1, 1.000625, 1e-15)
        && close(s.q2, 10.0025, 1e-14)
        && close(s.eta, 11.0025 / 11.005, 1e-15)
        && close(s.p_prime, 12.00750, 1e-5);
    let identity = 1.0 + s.eta - s.eta * s.p_prime;
    let violated: Vec<&str> = s.constraint_report.iter().filter(|c| !c.satisfied).map(|c| c.name.as_str()).collect();
    let q2_slack = s.constraint("q2 > 4*q1 + 6").map(|c| c.slack);
    verdict(
        values && close(identity, -10.005, 1e-12) && violated == ["q2 > 4*q1 + 6", "p_prime in (1,p)"] && q2_slack == Some(0.0),
        format!("p' = {:.6}, 1 + eta - eta p' = {identity:.12}, violations {violated:?}", s.p_prime),
    )
}

fn log_star() -> Verdict {
    let mut bad = Vec::new();
    for p in [1.0f64, 2.0, 3.0, 5.5, 12.0] {
        let knee = p.exp();
        let below = log_p_star(knee * (1.0 - 1e-15), p).unwrap();
        let at = log_p_star(knee, p).unwrap();
        let slope_gap = (log_p_star_slope(knee * 0.999, p).unwrap() - log_p_star_slope(knee, p).unwrap()).abs();
        if (below - at).abs() > 1e-12 * at || slope_gap > 1e-12 * at {
            bad.push(format!("knee p={p}"));
        }
    }
    let mut rng = SeedSpec::new(SEED, 10 << 20, 0).rng();
    let mut violations = [0usize; 3];
    for _ in 0..10_000 {
        let x = (40.0 * rng.open01() - 10.0).exp();
        let y = (40.0 * rng.open01() - 10.0).exp();
        let t = rng.open01();
        let p = std::f64::consts::E + 9.0 * rng.open01();
        let f = |z: f64| log_p_star(z, p).unwrap();
        let tol = 1e-10 * (f(x) + f(y));
        if f(t * x + (1.0 - t) * y) + tol < t * f(x) + (1.0 - t) * f(y) {
            violations[0] += 1;
        }
        if f(x + y) > f(x) + f(y) + tol {
            violations[1] += 1;
        }
        // Submultiplicativity is only claimed for x, y >= 1.
        let (xs, ys) = (x.max(1.0 / x), y.max(1.0 / y));
        if f(xs * ys) > f(xs) * f(ys) * (1.0 + 1e-12) + 1e-12 {
            violations[2] += 1;
        }
    }
    verdict(
        bad.is_empty() && violations == [0, 0, 0],
        format!("knee checks failing: {bad:?}; concavity/subadditivity/submultiplicativity violations {violations:?} over 10^4 pairs"),
    )
}

fn reproducibility() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 7] = [
        ("lyapunov", &["--dist", CAUCHY, "--energy-grid=-1,0,1", "--steps", "20000", "--trials", "8"]),
        ("lde-tail", &["--dist", "logpareto{p_tail=3}", "--energy", "0", "--length-grid", "50,100", "--trials", "500", "--steps", "5000"]),
        ("wegner", &["--dist", CAUCHY, "--energy", "0", "--length-grid", "50,100,200", "--trials", "2000"]),
        ("regularity", &["--dist", "bernoulli{a=0,b=2,q=0.5}", "--energy", "0.3", "--length-grid", "40,80", "--trials", "500", "--steps", "5000"]),
        ("eigenmodes", &["--dist", CAUCHY, "--energy", "0", "--length", "100", "--trials", "30"]),
        ("ids", &["--dist", CAUCHY, "--energy-grid=-1,0,1", "--length", "50", "--trials", "300"]),
        ("msa-params", &["--p", "12", "--beta", "0.9999"]),
    ];
    let mut differing = Vec::new();
    for (name, args) in cases {
        let outputs: Vec<Vec<u8>> = ["1", "8"]
            .iter()
            .map(|w| {
                let out = dir.path().join(format!("{name}-{w}.csv"));
                let status = Command::new(env!("CARGO_BIN_EXE_anderson-lab"))
                    .arg(name)
                    .args(args)
                    .args(["--seed", "42", "--workers", w, "--out"])
                    .arg(&out)
                    .status()
                    .unwrap();
                assert!(status.success(), "{name} failed");
                std::fs::read(&out).unwrap()
            })
            .collect();
        if outputs[0] != outputs[1] {
            differing.push(name);
        }
    }
    verdict(differing.is_empty(), format!("7 experiments at 1 and 8 workers; differing outputs: {differing:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, Duration); 11] = [
        ("Lloyd oracle agreement", lloyd_agreement, Duration::from_secs(30)),
        ("determinant and Green's oracle", greens_oracle, Duration::from_secs(10)),
        ("Poisson identity", poisson, Duration::from_secs(10)),
        ("SL(2) conservation", sl2_conservation, Duration::from_secs(20)),
        ("LDE decay shape", lde_shape, Duration::from_secs(300)),
        ("Wegner smallness", wegner, Duration::from_secs(120)),
        ("regularity trend", regularity, Duration::from_secs(180)),
        ("eigenfunction decay", eigen_decay, Duration::from_secs(120)),
        ("MSA recipe arithmetic", msa, Duration::from_secs(10)),
        ("log^(p*) properties", log_star, Duration::from_secs(10)),
        ("reproducibility", reproducibility, Duration::from_secs(300)),
    ];
    let mut passed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let ok = v.pass && elapsed <= *budget;
        passed += usize::from(ok);
        println!(
            "criterion {:>2} {}: {name}: {} ({:.1}s of {}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
}
