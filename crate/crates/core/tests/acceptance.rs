//! End-to-end acceptance criteria. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; exits nonzero if any
//! criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectra_core::arch::{self, cartan_vector, cdist, dist, dist_inf, jordan_vector, NormPoint, RealMatrix};
use spectra_core::chamber::{opposite, ChamberVector};
use spectra_core::degeneration::{convergence_report, ultrafield_consistency};
use spectra_core::displacement::{min_displacement, Chart};
use spectra_core::exact_arith::{int, RatFunc, Rational, Valuation};
use spectra_core::fixtures::{
    diagonal_rep, free_family, random_exact_point, random_sl_int, unipotent_family, unipotent_rep,
};
use spectra_core::groups::{ball, check_word_bound, Word};
use spectra_core::matrix::Matrix;
use spectra_core::nonarch::{cartan_vector_trop, ValuedMatrix};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn max_dev(v: &ChamberVector, expected: &[f64]) -> f64 {
    v.coords().iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn c1_jordan_fixtures() -> Outcome {
    let l2 = 2f64.ln();
    let d = Matrix::diagonal(vec![int(2), Rational::new(1.into(), 2.into())]);
    let e1 = max_dev(&jordan_vector(&d).unwrap(), &[l2, -l2]);
    let u = jordan_vector(&Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap()).unwrap();
    let exact_zero = u.coords() == [0.0, 0.0];
    // Quadratic formula for λ² − 3λ + 1.
    let top = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let phi2 = 2.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let e3 = max_dev(&jordan_vector(&Matrix::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap()).unwrap(), &[top, -top]);
    outcome(
        e1 <= 1e-12 && exact_zero && e3 <= 1e-10 && (top - phi2).abs() <= 1e-14,
        format!("diag err {e1:.1e}, unipotent exact zero {exact_zero}, golden err {e3:.1e}"),
    )
}

/// Generalized eigenvalues of (P_x, P_y), independently: Cholesky of P_x,
/// then the symmetric eigenproblem for L⁻¹ P_y L⁻ᵀ.
fn oracle_half_logs(x: &NormPoint, y: &NormPoint) -> Vec<f64> {
    let l = x.matrix().cholesky().unwrap().l();
    let l_inv = l.try_inverse().unwrap();
    let m = &l_inv * y.matrix() * l_inv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().map(|mu| -0.5 * mu.ln()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn condition(x: &NormPoint) -> f64 {
    let ev = x.matrix().symmetric_eigenvalues();
    ev.max() / ev.min()
}

fn random_float_point(rng: &mut ChaCha8Rng, n: usize) -> NormPoint {
    let dim = n * (n + 1) / 2 - 1;
    let coords: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
    Chart::from_coords(n, &coords).unwrap().point()
}

fn c2_cartan_metric() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_sandwich = f64::NEG_INFINITY;
    let mut worst_oracle = 0.0f64;
    let mut opposition = true;
    for i in 0..100 {
        let n = 2 + i % 2;
        let x = random_exact_point(&mut rng, n, 4);
        let y = random_exact_point(&mut rng, n, 4);
        let d = dist(&x, &y).unwrap();
        let di = dist_inf(&x, &y).unwrap();
        worst_sandwich = worst_sandwich.max(di - d).max(d - (n as f64).sqrt() * di);
        let forward = cdist(&x, &y).unwrap();
        opposition &= cdist(&y, &x).unwrap() == opposite(&forward);
        // The float oracle loses accuracy like cond(P_x)·cond(P_y)·eps.
        let scale = condition(&x) * condition(&y) * f64::EPSILON;
        worst_oracle = worst_oracle.max(max_dev(&forward, &oracle_half_logs(&x, &y)) / scale.max(1e-12));
    }
    let mut worst_lipschitz = f64::NEG_INFINITY;
    for i in 0..100 {
        let n = 2 + i % 2;
        let pts: Vec<NormPoint> = (0..4)
            .map(
                |k| if (i + k) % 2 == 0 { random_exact_point(&mut rng, n, 4) } else { random_float_point(&mut rng, n) },
            )
            .collect();
        // Every third quadruple shares its first point, which makes the
        // inequality much tighter.
        let x2 = if i % 3 == 0 { &pts[0] } else { &pts[2] };
        let (x, y, y2) = (&pts[0], &pts[1], &pts[3]);
        let lhs = cdist(x, y).unwrap().distance(&cdist(x2, y2).unwrap());
        let rhs = dist(x, x2).unwrap() + dist(y, y2).unwrap();
        worst_lipschitz = worst_lipschitz.max(lhs - rhs);
    }
    outcome(
        worst_sandwich <= 1e-9 && opposition && worst_lipschitz <= 1e-9 && worst_oracle <= 10.0,
        format!(
            "sandwich slack {worst_sandwich:.1e}, exact opposition {opposition}, \
             Lipschitz slack {worst_lipschitz:.1e}, oracle err/bound {worst_oracle:.2}"
        ),
    )
}

fn c3_homogeneity_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_hom = 0.0f64;
    let mut worst_conj = 0.0f64;
    for i in 0..50 {
        let n = 2 + i % 2;
        let g = random_sl_int(&mut rng, n, 5);
        let h = random_sl_int(&mut rng, n, 4);
        let v = jordan_vector(&g).unwrap();
        for k in 1..=6u32 {
            let vk = jordan_vector(&g.pow(k)).unwrap();
            worst_hom = worst_hom.max(vk.distance(&v.scaled(k as f64)));
        }
        let conj = h.mul(&g).mul(&h.inverse().unwrap());
        worst_conj = worst_conj.max(jordan_vector(&conj).unwrap().distance(&v));
    }
    outcome(
        worst_hom <= 1e-9 && worst_conj <= 1e-9,
        format!("homogeneity err {worst_hom:.1e}, conjugation err {worst_conj:.1e}"),
    )
}

fn distinct_moduli(v: &ChamberVector) -> bool {
    v.coords().windows(2).all(|w| w[0] - w[1] > 1e-3)
}

fn power_error(g: &RealMatrix, v: &ChamberVector, k: u32) -> f64 {
    arch::jordan_via_powers(g, k).unwrap().distance(v)
}

fn c4_spectral_limit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tested = 0;
    let mut failures = 0;
    let mut worst_ratio = 0.0f64;
    while tested < 20 {
        let n = 2 + tested % 2;
        let g = random_sl_int(&mut rng, n, 5);
        let v = jordan_vector(&g).unwrap();
        if !distinct_moduli(&v) {
            continue;
        }
        tested += 1;
        let errs: Vec<f64> = [8, 16, 32].iter().map(|&k| power_error(&g, &v, k)).collect();
        let negligible = errs[0] <= 1e-12 && errs[2] <= 1e-12;
        let ok = negligible || (errs[2] < errs[0] && errs[1] <= 1.1 * errs[0] && errs[2] <= 1.1 * errs[1]);
        if !ok {
            failures += 1;
        }
        if errs[0] > 1e-12 {
            worst_ratio = worst_ratio.max(errs[2] / errs[0]);
        }
    }
    outcome(failures == 0, format!("{tested} matrices, {failures} failures, worst err(32)/err(8) = {worst_ratio:.3}"))
}

fn c5_displacement() -> (Outcome, f64, f64) {
    let diag = min_displacement(&diagonal_rep(), 1e-9).unwrap();
    let target = 2f64.sqrt() * 2f64.ln();
    let p = diag.minimizer.matrix();
    let off = p[(0, 1)].abs().max(p[(1, 0)].abs());
    let uni = min_displacement(&unipotent_rep(), 1e-9).unwrap();
    let err = (diag.lambda_hat - target).abs();
    let passed = err <= 1e-4 && off <= 1e-4 && !uni.converged && uni.lambda_hat <= 0.05;
    (
        outcome(
            passed,
            format!(
                "diagonal λ̂ err {err:.1e}, off-diagonal {off:.1e}; unipotent converged {} after {} iterations, λ̂ = {:.4}",
                uni.converged, uni.iterations, uni.lambda_hat
            ),
        ),
        diag.lambda_hat,
        uni.lambda_hat,
    )
}

fn c6_word_bound(lambda_diag: f64, lambda_uni: f64) -> Outcome {
    let words = ball(1, 4).unwrap();
    let v1 = check_word_bound(&diagonal_rep(), lambda_diag, &words).unwrap();
    let v2 = check_word_bound(&unipotent_rep(), lambda_uni, &words).unwrap();
    outcome(
        v1.is_empty() && v2.is_empty(),
        format!("{} words, violations: diagonal {}, unipotent {}", words.len(), v1.len(), v2.len()),
    )
}

/// SL₂ oracle: the roots of λ² − tr·λ + 1 have valuations ±min(val tr, 0).
fn sl2_trop_oracle(trace: &RatFunc) -> [Rational; 2] {
    let v = trace.val(Valuation::AtInfinity).unwrap().finite().map_or(0, |v| v.min(0));
    [int(-v), int(v)]
}

fn c7_tropical_degeneration() -> Outcome {
    let fam = free_family();
    let words = ball(2, 3).unwrap();
    let report = convergence_report(&fam, &words, &[1e2, 1e4, 1e8]).unwrap();
    let entry = |w: &str| report.tropical.get(&Word::parse(w).unwrap()).unwrap().coords().to_vec();
    let fixtures =
        entry("a") == [int(1), int(-1)] && entry("b") == [int(1), int(-1)] && entry("ab") == [int(2), int(-2)];
    let valued = fam.valued().unwrap();
    let oracle_ok = words.iter().all(|w| {
        let tr = valued.rep.evaluate(w).unwrap().trace();
        report.tropical.get(w).unwrap().coords() == sl2_trop_oracle(&tr)
    });
    let d = report.distances();
    let non_increasing = d.len() == 3 && d.windows(2).all(|w| w[1] <= w[0]);
    let last = d.last().copied().unwrap_or(f64::INFINITY);
    outcome(
        fixtures && oracle_ok && non_increasing && last < 0.02 && report.limit_nonzero,
        format!(
            "{} words, fixtures {fixtures}, Newton oracle {oracle_ok}, distances {:?}, limit_nonzero {}",
            words.len(),
            d.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>(),
            report.limit_nonzero
        ),
    )
}

fn c8_smith_cartan() -> Outcome {
    let t = RatFunc::t();
    let families = [
        Matrix::from_rows(vec![vec![RatFunc::one(), t.clone()], vec![RatFunc::zero(), RatFunc::one()]]).unwrap(),
        Matrix::diagonal(vec![t.clone(), t.inv().unwrap()]),
    ];
    let s = 1e8f64;
    let point = Rational::from_float(s).unwrap();
    let mut worst = 0.0f64;
    for g in &families {
        let trop = cartan_vector_trop(&ValuedMatrix::new(g.clone(), Valuation::AtInfinity).unwrap()).unwrap();
        let gs = g.try_map(|f| f.eval_exact(&point)).unwrap();
        let real = cartan_vector(&gs).unwrap().scaled(1.0 / s.ln());
        worst = worst.max(real.distance(&trop.to_f64()));
    }
    outcome(worst < 0.01, format!("error at s = 1e8: {worst:.2e}"))
}

fn c9_ultrafield() -> Outcome {
    let f = RatFunc::from_i64(5).mul(&RatFunc::t().pow(2));
    let residuals = ultrafield_consistency(&f, &[1e2, 1e4, 1e8]).unwrap();
    let worst = residuals
        .iter()
        .map(|r| r.residual.map_or(f64::INFINITY, |x| (x - 5f64.ln() / r.s.ln()).abs()))
        .fold(0.0, f64::max);
    outcome(worst <= 1e-9, format!("worst deviation from log 5/log s: {worst:.1e}"))
}

fn c10_bounded_family() -> Outcome {
    let report = convergence_report(&unipotent_family(), &ball(1, 3).unwrap(), &[1e2, 1e4, 1e8]).unwrap();
    outcome(
        report.bounded_family && !report.limit_nonzero && report.distances().is_empty(),
        format!("bounded_family {}, distance entries {}", report.bounded_family, report.distances().len()),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |id: usize, name: &str, budget: Duration, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = o.passed && in_time;
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {name:<28} {} ({:.2}s / {:.0}s) {}{}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs_f64(),
            o.detail,
            if in_time { "" } else { " [over time budget]" }
        );
    };
    let s = Duration::from_secs;
    report(1, "jordan fixtures", s(1), &mut c1_jordan_fixtures);
    report(2, "cartan and metric", s(10), &mut c2_cartan_metric);
    report(3, "homogeneity and invariance", s(30), &mut c3_homogeneity_invariance);
    report(4, "spectral limit", s(30), &mut c4_spectral_limit);
    let mut lambdas = (0.0, 0.0);
    report(5, "displacement", s(60), &mut || {
        let (o, a, b) = c5_displacement();
        lambdas = (a, b);
        o
    });
    report(6, "word bound", s(60), &mut || c6_word_bound(lambdas.0, lambdas.1));
    report(7, "tropical degeneration", s(120), &mut c7_tropical_degeneration);
    report(8, "smith/cartan consistency", s(10), &mut c8_smith_cartan);
    report(9, "ultrafield consistency", s(10), &mut c9_ultrafield);
    report(10, "bounded family", s(60), &mut c10_bounded_family);
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
