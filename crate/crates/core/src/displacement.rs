//! The displacement function δ_ρ(x) = √(Σ_s d(x, ρ(s)x)²) and its infimum
//! λ(ρ) over the space of norms.
//!
//! Minimization runs in the chart X ↦ exp(X) from trace-zero symmetric
//! matrices, with a central finite-difference gradient and backtracking line
//! search. δ_ρ is geodesically convex, so a descent method that stalls has
//! found the infimum up to the stopping tolerance, except when the infimum is
//! not attained.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arch::{self, NormPoint};
use crate::error::{Error, Result};
use crate::groups::RealRepresentation;

/// Step of the central finite differences.
pub const FD_STEP: f64 = 1e-6;
/// Sufficient-decrease constant of the line search.
pub const ARMIJO: f64 = 1e-4;
/// Outer iteration budget.
pub const MAX_ITERATIONS: usize = 500;
/// Size of the one-off random kick applied on the first stall.
pub const PERTURBATION: f64 = 1e-8;
/// Smallest accepted stopping tolerance.
pub const MIN_TOL: f64 = 1e-10;

const MAX_HALVINGS: usize = 60;
const PERTURBATION_SEED: u64 = 0x5eed;

/// Coordinates X (symmetric, trace zero) of the norm with Gram matrix exp(X).
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    x: DMatrix<f64>,
}

fn chart_dim(n: usize) -> usize {
    n * (n + 1) / 2 - 1
}

/// Orthonormal basis (Frobenius inner product) of trace-zero symmetric
/// matrices: off-diagonal pairs first, then Helmert-type diagonals.
fn chart_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut basis = Vec::with_capacity(chart_dim(n));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i + 1..n {
            let mut b = DMatrix::zeros(n, n);
            b[(i, j)] = r;
            b[(j, i)] = r;
            basis.push(b);
        }
    }
    for k in 1..n {
        let mut b = DMatrix::zeros(n, n);
        let scale = 1.0 / ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            b[(i, i)] = scale;
        }
        b[(k, k)] = -(k as f64) * scale;
        basis.push(b);
    }
    basis
}

impl Chart {
    pub fn zero(n: usize) -> Self {
        Chart { x: DMatrix::zeros(n, n) }
    }

    /// Checks symmetry and zero trace within 1e−12 (relative to 1 + max|X_ij|).
    pub fn new(x: DMatrix<f64>) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::Dimension { expected: x.nrows(), found: x.ncols() });
        }
        let tol = 1e-12 * (1.0 + x.amax());
        if (&x - x.transpose()).amax() > tol {
            return Err(Error::InvalidArgument("chart matrix is not symmetric".into()));
        }
        if x.trace().abs() > tol {
            return Err(Error::InvalidArgument("chart matrix has nonzero trace".into()));
        }
        Ok(Chart { x })
    }

    pub fn from_coords(n: usize, coords: &[f64]) -> Result<Self> {
        if coords.len() != chart_dim(n) {
            return Err(Error::Dimension { expected: chart_dim(n), found: coords.len() });
        }
        let mut x = DMatrix::zeros(n, n);
        for (c, b) in coords.iter().zip(chart_basis(n)) {
            x += b * *c;
        }
        Ok(Chart { x })
    }

    pub fn coords(&self) -> Vec<f64> {
        chart_basis(self.rank()).iter().map(|b| b.dot(&self.x)).collect()
    }

    pub fn rank(&self) -> usize {
        self.x.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// The norm with Gram matrix exp(X), carried as the factor exp(X/2).
    pub fn point(&self) -> NormPoint {
        let (e, e_inv) = exp_half(&self.x);
        NormPoint::from_factor(e, e_inv)
    }

    /// Coordinates of a point: X = log P, with the trace removed.
    pub fn from_point(x: &NormPoint) -> Self {
        let p = x.matrix();
        let p = (&p + p.transpose()) * 0.5;
        let eig = SymmetricEigen::new(p);
        let v = &eig.eigenvectors;
        let mut log = v * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::ln)) * v.transpose();
        let n = log.nrows();
        let shift = log.trace() / n as f64;
        for i in 0..n {
            log[(i, i)] -= shift;
        }
        Chart { x: (&log + log.transpose()) * 0.5 }
    }
}

/// exp(X/2) and exp(−X/2) for symmetric X.
fn exp_half(x: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(x.clone());
    let v = &eig.eigenvectors;
    let half = |sign: f64| {
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (sign * l / 2.0).exp()));
        v * d * v.transpose()
    };
    (half(1.0), half(-1.0))
}

/// Geodesic midpoint, i.e. the matrix geometric mean P # Q.
pub fn geodesic_midpoint(x: &NormPoint, y: &NormPoint) -> Result<NormPoint> {
    let p = x.matrix();
    let q = y.matrix();
    let eig = SymmetricEigen::new(p.clone());
    let v = &eig.eigenvectors;
    let root = v * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * v.transpose();
    let root_inv = v * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt())) * v.transpose();
    let inner = &root_inv * q * &root_inv;
    let inner = (&inner + inner.transpose()) * 0.5;
    let e = SymmetricEigen::new(inner);
    let inner_root =
        &e.eigenvectors * DMatrix::from_diagonal(&e.eigenvalues.map(f64::sqrt)) * e.eigenvectors.transpose();
    NormPoint::from_spd(&(&root * inner_root * &root))
}

/// δ_ρ(x) over the generating set of the representation.
pub fn displacement(rep: &RealRepresentation, x: &NormPoint) -> Result<f64> {
    let mut sum = 0.0;
    for g in rep.images() {
        let d = arch::dist(x, &arch::act(g, x)?)?;
        sum += d * d;
    }
    Ok(sum.sqrt())
}

/// Generator images and their inverses in floating point.
struct FloatGenerators {
    pairs: Vec<(DMatrix<f64>, DMatrix<f64>)>,
}

impl FloatGenerators {
    fn new(rep: &RealRepresentation) -> Self {
        let pairs = rep.images().iter().zip(rep.inverses()).map(|(g, h)| (g.to_f64(), h.to_f64())).collect();
        FloatGenerators { pairs }
    }

    /// δ_ρ at the norm with factor F (Gram matrix FᵀF).
    fn displacement_at(&self, factor: &DMatrix<f64>, factor_inv: &DMatrix<f64>) -> Result<f64> {
        let x = NormPoint::from_factor(factor.clone(), factor_inv.clone());
        let mut sum = 0.0;
        for (g, g_inv) in &self.pairs {
            let gx = NormPoint::from_factor(factor * g_inv, g * factor_inv);
            let d = arch::dist(&x, &gx)?;
            sum += d * d;
        }
        Ok(sum.sqrt())
    }
}

/// The current base point of the moving chart, as a factor and its inverse.
#[derive(Clone)]
struct Base {
    factor: DMatrix<f64>,
    factor_inv: DMatrix<f64>,
}

impl Base {
    /// The point with chart coordinates `c` at this base: exp(X/2)·F.
    fn shifted(&self, n: usize, c: &DVector<f64>) -> Result<Base> {
        let (e, e_inv) = exp_half(Chart::from_coords(n, c.as_slice())?.matrix());
        Ok(Base { factor: e * &self.factor, factor_inv: &self.factor_inv * e_inv })
    }
}

/// Outcome of [`min_displacement`].
#[derive(Clone, Debug)]
pub struct MinDisplacement {
    /// Best evaluated value of δ_ρ; an upper bound for λ(ρ).
    pub lambda_hat: f64,
    pub minimizer: NormPoint,
    pub chart: Chart,
    pub iterations: usize,
    pub converged: bool,
    /// δ_ρ after each outer iteration.
    pub history: Vec<f64>,
}

/// Minimizes δ_ρ starting from the canonical norm.
///
/// Each outer iteration takes a finite-difference gradient in the chart
/// centred at the current point and backtracks from a unit step; the chart
/// is then re-centred at the accepted point, so the iteration behaves the
/// same for ρ and for any conjugate of ρ.
///
/// `converged` is set once an outer iteration improves δ_ρ by less than
/// `tol` twice, the second time after a random kick of size 1e−8. If the
/// budget runs out first the best point found is returned with
/// `converged = false`.
pub fn min_displacement(rep: &RealRepresentation, tol: f64) -> Result<MinDisplacement> {
    if !(tol >= MIN_TOL) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} is below {MIN_TOL}")));
    }
    let n = rep.rank();
    let dim = chart_dim(n);
    let gens = FloatGenerators::new(rep);
    let eval = |b: &Base, c: &DVector<f64>| {
        let p = b.shifted(n, c)?;
        gens.displacement_at(&p.factor, &p.factor_inv)
    };

    let id = DMatrix::identity(n, n);
    let mut base = Base { factor: id.clone(), factor_inv: id };
    let zero = DVector::zeros(dim);
    let mut f = displacement(rep, &NormPoint::identity(n))?;
    let mut best: Option<(f64, Base)> = None;
    let mut best_f = f;
    let mut history = Vec::new();
    let mut perturbed = false;
    let mut converged = f == 0.0 || dim == 0;
    let mut iterations = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(PERTURBATION_SEED);

    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut grad = DVector::zeros(dim);
        for i in 0..dim {
            let mut step = zero.clone();
            step[i] = FD_STEP;
            grad[i] = (eval(&base, &step)? - eval(&base, &-step)?) / (2.0 * FD_STEP);
        }
        let slope = grad.norm_squared();
        let mut improvement = 0.0;
        if slope > 0.0 {
            let mut alpha = 1.0;
            for _ in 0..MAX_HALVINGS {
                let trial = &grad * -alpha;
                let ft = eval(&base, &trial)?;
                if ft <= f - ARMIJO * alpha * slope {
                    improvement = f - ft;
                    base = base.shifted(n, &trial)?;
                    f = ft;
                    break;
                }
                alpha *= 0.5;
            }
        }
        if f < best_f {
            best_f = f;
            best = Some((f, base.clone()));
        }
        history.push(f);
        if improvement < tol {
            if perturbed {
                converged = true;
            } else {
                perturbed = true;
                let kick = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
                let len = kick.norm();
                if len > 0.0 {
                    base = base.shifted(n, &(kick * (PERTURBATION / len)))?;
                    f = gens.displacement_at(&base.factor, &base.factor_inv)?;
                }
            }
        }
    }

    let (lambda_hat, minimizer) = match best {
        Some((f, b)) => (f, NormPoint::from_factor(b.factor, b.factor_inv)),
        None => (best_f, NormPoint::identity(n)),
    };
    let chart = Chart::from_point(&minimizer);
    Ok(MinDisplacement { lambda_hat, minimizer, chart, iterations, converged, history })
}
