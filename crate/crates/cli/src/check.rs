//! Cross-module property suites on the built-in fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use spectra_core::arch::{cdist, dist, dist_inf, jordan_vector, NormPoint};
use spectra_core::displacement::{min_displacement, Chart};
use spectra_core::fixtures::{diagonal_rep, hyperbolic_pair_rep, random_exact_point, random_sl_int, unipotent_rep};
use spectra_core::groups::{ball, check_word_bound};
use spectra_core::Result;

const TOL: f64 = 1e-9;
const SEED: u64 = 0x5eed;

pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn suite(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> SuiteResult {
    match f() {
        Ok((passed, detail)) => SuiteResult { name, passed, detail },
        Err(e) => SuiteResult { name, passed: false, detail: format!("error: {e}") },
    }
}

fn float_point(rng: &mut ChaCha8Rng, n: usize) -> Result<NormPoint> {
    let coords: Vec<f64> = (0..n * (n + 1) / 2 - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
    Ok(Chart::from_coords(n, &coords)?.point())
}

/// ‖Cd(x,y) − Cd(x′,y′)‖ ≤ d(x,x′) + d(y,y′).
fn lipschitz() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..50 {
        let n = 2 + i % 2;
        let mut pts = Vec::with_capacity(4);
        for k in 0..4 {
            pts.push(if (i + k) % 2 == 0 { random_exact_point(&mut rng, n, 4) } else { float_point(&mut rng, n)? });
        }
        let lhs = cdist(&pts[0], &pts[1])?.distance(&cdist(&pts[2], &pts[3])?);
        let rhs = dist(&pts[0], &pts[2])? + dist(&pts[1], &pts[3])?;
        worst = worst.max(lhs - rhs);
    }
    Ok((worst <= TOL, format!("50 quadruples, worst slack {worst:.1e}")))
}

/// d_inf ≤ d ≤ √n·d_inf.
fn sandwich() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..100 {
        let n = 2 + i % 3;
        let x = random_exact_point(&mut rng, n, 4);
        let y = random_exact_point(&mut rng, n, 4);
        let (d, di) = (dist(&x, &y)?, dist_inf(&x, &y)?);
        worst = worst.max(di - d).max(d - (n as f64).sqrt() * di);
    }
    Ok((worst <= TOL, format!("100 pairs, worst slack {worst:.1e}")))
}

/// v(gᵏ) = k·v(g) for k = 1..6.
fn homogeneity() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let g = random_sl_int(&mut rng, 2 + i % 2, 5);
        let v = jordan_vector(&g)?;
        for k in 1..=6u32 {
            worst = worst.max(jordan_vector(&g.pow(k))?.distance(&v.scaled(k as f64)));
        }
    }
    Ok((worst <= TOL, format!("20 matrices, worst error {worst:.1e}")))
}

/// ℓ(ρ(γ)) ≤ λ̂·|γ| on the radius-4 ball.
fn word_bound() -> Result<(bool, String)> {
    let mut violations = 0;
    for rep in [diagonal_rep(), unipotent_rep(), hyperbolic_pair_rep()] {
        let lambda = min_displacement(&rep, 1e-8)?.lambda_hat;
        violations += check_word_bound(&rep, lambda, &ball(rep.num_generators(), 4)?)?.len();
    }
    Ok((violations == 0, format!("3 fixtures, {violations} violations")))
}

pub fn run_all() -> Vec<SuiteResult> {
    vec![
        suite("lipschitz", lipschitz),
        suite("sandwich", sandwich),
        suite("homogeneity", homogeneity),
        suite("word_bound", word_bound),
    ]
}

pub fn render(results: &[SuiteResult], as_json: bool) -> String {
    if as_json {
        let items: Vec<_> =
            results.iter().map(|r| json!({"suite": r.name, "passed": r.passed, "detail": r.detail})).collect();
        let mut text = serde_json::to_string_pretty(&json!({"suites": items})).expect("JSON values serialize");
        text.push('\n');
        return text;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "passed", "detail"]).expect("in-memory write");
    for r in results {
        w.write_record([r.name, if r.passed { "true" } else { "false" }, &r.detail]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
}
