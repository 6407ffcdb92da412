//! The symmetric space of SL_n(ℝ) as the space of volume-one Euclidean norms
//! ν_P(v) = √(vᵀPv), with its chamber-valued distance and the Cartan and
//! Jordan projections.
//!
//! Points come in two flavours. Exact points carry a rational SPD matrix and
//! all distances are computed from exact characteristic polynomials. Float
//! points carry a factor F with P = FᵀF together with F⁻¹; distances are read
//! from singular values of F_y F_x⁻¹, taking each singular value from
//! whichever of that matrix and its inverse resolves it to better relative
//! accuracy.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Zero};

use crate::chamber::{chamber_norm, project_type, ChamberVector};
use crate::error::{Error, Result};
use crate::exact_arith::rational::format_rational;
use crate::exact_arith::{complex_root_log_moduli, Rational};
use crate::matrix::Matrix;

/// An element of SL_n(ℚ) ⊂ SL_n(ℝ).
pub type RealMatrix = Matrix<Rational>;

/// Tolerance on |det − 1| for floating matrices and norms.
pub const DET_TOLERANCE: f64 = 1e-9;

/// Rejects matrices whose determinant is not exactly 1.
pub fn check_special(g: &RealMatrix) -> Result<()> {
    let d = g.det();
    if d.is_one() {
        Ok(())
    } else {
        Err(Error::Determinant(format_rational(&d)))
    }
}

/// A good norm of volume 1 on ℝⁿ.
#[derive(Clone, Debug, PartialEq)]
pub enum NormPoint {
    Exact(Matrix<Rational>),
    Float { factor: DMatrix<f64>, factor_inv: DMatrix<f64> },
}

fn symmetric_power(p: &DMatrix<f64>, exponent: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(p.clone());
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.powf(exponent)));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

impl NormPoint {
    /// The canonical norm ν₀ (P = I).
    pub fn identity(n: usize) -> Self {
        NormPoint::Exact(Matrix::identity(n))
    }

    /// Exact point; P must be symmetric with positive leading minors and
    /// determinant exactly 1.
    pub fn exact(p: Matrix<Rational>) -> Result<Self> {
        if !p.is_symmetric() || p.leading_minors().iter().any(|m| *m <= Rational::zero()) {
            return Err(Error::NotSpd);
        }
        let d = p.det();
        if !d.is_one() {
            return Err(Error::Determinant(format_rational(&d)));
        }
        Ok(NormPoint::Exact(p))
    }

    /// Float point from an SPD matrix with |det − 1| ≤ 1e−9; the matrix is
    /// renormalized to determinant 1.
    pub fn from_spd(p: &DMatrix<f64>) -> Result<Self> {
        let n = p.nrows();
        if p.ncols() != n {
            return Err(Error::Dimension { expected: n, found: p.ncols() });
        }
        let scale = p.amax().max(f64::MIN_POSITIVE);
        if (p - p.transpose()).amax() > 1e-12 * scale || p.clone().cholesky().is_none() {
            return Err(Error::NotSpd);
        }
        let det = p.determinant();
        if (det - 1.0).abs() > DET_TOLERANCE {
            return Err(Error::Determinant(det.to_string()));
        }
        let sym = (p + p.transpose()) * (0.5 / det.powf(1.0 / n as f64));
        Ok(NormPoint::Float { factor: symmetric_power(&sym, 0.5), factor_inv: symmetric_power(&sym, -0.5) })
    }

    /// Float point given a factor F (P = FᵀF) and its inverse.
    pub fn from_factor(factor: DMatrix<f64>, factor_inv: DMatrix<f64>) -> Self {
        NormPoint::Float { factor, factor_inv }
    }

    pub fn rank(&self) -> usize {
        match self {
            NormPoint::Exact(p) => p.size(),
            NormPoint::Float { factor, .. } => factor.nrows(),
        }
    }

    /// The Gram matrix P.
    pub fn matrix(&self) -> DMatrix<f64> {
        match self {
            NormPoint::Exact(p) => p.to_f64(),
            NormPoint::Float { factor, .. } => factor.transpose() * factor,
        }
    }

    /// Evaluates the norm on a vector.
    pub fn norm_of(&self, v: &[f64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(v);
        (v.transpose() * self.matrix() * &v)[(0, 0)].sqrt()
    }

    fn factors(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        match self {
            NormPoint::Exact(p) => {
                let pf = p.to_f64();
                (symmetric_power(&pf, 0.5), symmetric_power(&pf, -0.5))
            }
            NormPoint::Float { factor, factor_inv } => (factor.clone(), factor_inv.clone()),
        }
    }
}

/// g · ν = ν ∘ g⁻¹, i.e. P ↦ g⁻ᵀ P g⁻¹.
pub fn act(g: &RealMatrix, x: &NormPoint) -> Result<NormPoint> {
    if g.size() != x.rank() {
        return Err(Error::Dimension { expected: x.rank(), found: g.size() });
    }
    let g_inv = g.inverse()?;
    Ok(match x {
        NormPoint::Exact(p) => NormPoint::Exact(g_inv.transpose().mul(p).mul(&g_inv)),
        NormPoint::Float { factor, factor_inv } => {
            NormPoint::Float { factor: factor * g_inv.to_f64(), factor_inv: g.to_f64() * factor_inv }
        }
    })
}

fn centred(mut v: Vec<f64>) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in &mut v {
        *x -= mean;
    }
    v
}

fn exact_cdist(px: &Matrix<Rational>, py: &Matrix<Rational>) -> Result<ChamberVector> {
    let forward = px.inverse()?.mul(py).charpoly_poly();
    let backward = py.inverse()?.mul(px).charpoly_poly();
    // Both directions are computed from the same polynomial so that
    // cdist(y, x) is bitwise the opposite of cdist(x, y).
    let coords = if forward == backward {
        let half: Vec<f64> = complex_root_log_moduli(&forward)?.into_iter().map(|l| -0.5 * l).collect();
        let n = half.len();
        (0..n).map(|i| (half[i] - half[n - 1 - i]) / 2.0).collect()
    } else if forward.coeffs() < backward.coeffs() {
        let half: Vec<f64> = complex_root_log_moduli(&forward)?.into_iter().map(|l| 0.5 * l).collect();
        centred(half).into_iter().map(|c| -c).collect()
    } else {
        let half: Vec<f64> = complex_root_log_moduli(&backward)?.into_iter().map(|l| 0.5 * l).collect();
        centred(half)
    };
    project_type(coords)
}

fn singular_values(m: DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn float_cdist(x: &NormPoint, y: &NormPoint) -> Result<ChamberVector> {
    let (fx, fx_inv) = x.factors();
    let (fy, fy_inv) = y.factors();
    let direct = singular_values(&fy * &fx_inv);
    let inverse = singular_values(&fx * &fy_inv);
    let n = direct.len();
    let sigma: Vec<f64> = (0..n)
        .map(|i| {
            let from_inverse = inverse[n - 1 - i];
            if direct[0] / direct[i] <= inverse[0] / from_inverse {
                direct[i]
            } else {
                1.0 / from_inverse
            }
        })
        .collect();
    if sigma.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::NotSpd);
    }
    project_type(centred(sigma.iter().map(|s| -s.ln()).collect()))
}

/// The chamber-valued distance Cd(x, y): with μ_i the eigenvalues of
/// P_x⁻¹P_y, the type of (−½ log μ_i). So Cd(I, g·I) is the vector of log
/// singular values of g.
pub fn cdist(x: &NormPoint, y: &NormPoint) -> Result<ChamberVector> {
    if x.rank() != y.rank() {
        return Err(Error::Dimension { expected: x.rank(), found: y.rank() });
    }
    match (x, y) {
        (NormPoint::Exact(px), NormPoint::Exact(py)) => exact_cdist(px, py),
        _ => float_cdist(x, y),
    }
}

/// Riemannian distance, √Σ (½ log μ_i)².
pub fn dist(x: &NormPoint, y: &NormPoint) -> Result<f64> {
    Ok(chamber_norm(&cdist(x, y)?))
}

/// sup over v ≠ 0 of |log ν_y(v)/ν_x(v)|, i.e. max |½ log μ_i|.
pub fn dist_inf(x: &NormPoint, y: &NormPoint) -> Result<f64> {
    Ok(cdist(x, y)?.coords().iter().fold(0.0, |m, c| m.max(c.abs())))
}

/// Translation vector: sorted log moduli of the eigenvalues of g.
pub fn jordan_vector(g: &RealMatrix) -> Result<ChamberVector> {
    check_special(g)?;
    project_type(centred(complex_root_log_moduli(&g.charpoly_poly())?))
}

/// Cartan projection Cd(x₀, g x₀): sorted log singular values of g.
pub fn cartan_vector(g: &RealMatrix) -> Result<ChamberVector> {
    check_special(g)?;
    let base = NormPoint::identity(g.size());
    cdist(&base, &act(g, &base)?)
}

/// (1/k) · cartan_vector(gᵏ), with gᵏ computed exactly.
pub fn jordan_via_powers(g: &RealMatrix, k: u32) -> Result<ChamberVector> {
    if k == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    Ok(cartan_vector(&g.pow(k))?.scaled(1.0 / k as f64))
}

/// Divides a matrix with positive determinant by det^{1/n}.
pub fn renormalize_det(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let det = m.determinant();
    if !(det > 0.0) {
        return Err(Error::Determinant(det.to_string()));
    }
    Ok(m / det.powf(1.0 / m.nrows() as f64))
}

/// Translation vector of a floating matrix with |det − 1| ≤ 1e−9.
pub fn jordan_vector_float(g: &DMatrix<f64>) -> Result<ChamberVector> {
    let det = g.determinant();
    if (det - 1.0).abs() > DET_TOLERANCE {
        return Err(Error::Determinant(det.to_string()));
    }
    let g = renormalize_det(g)?;
    let logs: Vec<f64> = g.complex_eigenvalues().iter().map(|z| z.norm().ln()).collect();
    project_type(centred(logs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chamber::opposite;
    use crate::exact_arith::{frac, int};

    fn m(rows: &[&[i64]]) -> RealMatrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn diag(a: Rational) -> RealMatrix {
        Matrix::diagonal(vec![a.clone(), a.recip()])
    }

    fn golden() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    fn assert_close(v: &ChamberVector, expected: &[f64], tol: f64) {
        for (a, b) in v.coords().iter().zip(expected) {
            assert!((a - b).abs() <= tol, "{:?} vs {expected:?}", v.coords());
        }
    }

    #[test]
    fn act_fixtures() {
        let x = NormPoint::identity(2);
        assert_eq!(act(&Matrix::identity(2), &x).unwrap(), x);
        let y = act(&diag(int(2)), &x).unwrap();
        assert_eq!(y, NormPoint::Exact(Matrix::diagonal(vec![frac(1, 4), int(4)])));
        let g = m(&[&[2, 1], &[1, 1]]);
        let back = act(&g, &act(&g.inverse().unwrap(), &y).unwrap()).unwrap();
        assert_eq!(back, y);
    }

    #[test]
    fn cdist_fixtures() {
        let x = NormPoint::identity(2);
        assert!(cdist(&x, &x).unwrap().is_zero());
        let l3 = 3f64.ln();
        assert_close(&cdist(&x, &act(&diag(int(3)), &x).unwrap()).unwrap(), &[l3, -l3], 1e-14);
        let lp = golden().ln();
        let u = m(&[&[1, 1], &[0, 1]]);
        assert_close(&cdist(&x, &act(&u, &x).unwrap()).unwrap(), &[lp, -lp], 1e-14);
        assert!((lp - 0.481_211_825_059_603_4).abs() < 1e-15);
    }

    #[test]
    fn dist_fixtures() {
        let x = NormPoint::identity(2);
        let y = act(&diag(int(2)), &x).unwrap();
        assert_eq!(dist(&x, &x).unwrap(), 0.0);
        assert!((dist(&x, &y).unwrap() - 2f64.sqrt() * 2f64.ln()).abs() < 1e-14);
        assert!((dist_inf(&x, &y).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert_eq!(dist_inf(&y, &y).unwrap(), 0.0);
    }

    #[test]
    fn exact_and_float_paths_agree() {
        let x = act(&m(&[&[2, 3], &[1, 2]]), &NormPoint::identity(2)).unwrap();
        let y = act(&m(&[&[1, 0], &[4, 1]]), &NormPoint::identity(2)).unwrap();
        let xf = NormPoint::from_spd(&x.matrix()).unwrap();
        let yf = NormPoint::from_spd(&y.matrix()).unwrap();
        let exact = cdist(&x, &y).unwrap();
        let float = cdist(&xf, &yf).unwrap();
        assert!(exact.distance(&float) < 1e-10);
    }

    #[test]
    fn opposition_is_bitwise_in_exact_path() {
        let x = act(&m(&[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]), &NormPoint::identity(3)).unwrap();
        let y = act(&m(&[&[1, 0, 2], &[0, 1, 0], &[1, 0, 3]]), &NormPoint::identity(3)).unwrap();
        assert_eq!(cdist(&y, &x).unwrap(), opposite(&cdist(&x, &y).unwrap()));
        let z = act(&m(&[&[3, 2], &[1, 1]]), &NormPoint::identity(2)).unwrap();
        let w = NormPoint::identity(2);
        assert_eq!(cdist(&z, &w).unwrap(), opposite(&cdist(&w, &z).unwrap()));
    }

    #[test]
    fn rejects_bad_points() {
        assert_eq!(NormPoint::exact(m(&[&[1, 2], &[2, 1]])), Err(Error::NotSpd));
        assert!(matches!(NormPoint::exact(m(&[&[2, 0], &[0, 1]])), Err(Error::Determinant(_))));
        assert!(NormPoint::from_spd(&DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0])).is_err());
        assert!(NormPoint::from_spd(&DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn jordan_fixtures() {
        let l2 = 2f64.ln();
        assert_close(&jordan_vector(&diag(int(2))).unwrap(), &[l2, -l2], 1e-15);
        assert_eq!(jordan_vector(&m(&[&[1, 1], &[0, 1]])).unwrap().coords(), &[0.0, 0.0]);
        let lp = 2.0 * golden().ln();
        assert_close(&jordan_vector(&m(&[&[2, 1], &[1, 1]])).unwrap(), &[lp, -lp], 1e-14);
        assert!((lp - 0.962_423_650_119_206_9).abs() < 1e-15);
        assert!(matches!(jordan_vector(&m(&[&[2, 0], &[0, 1]])), Err(Error::Determinant(_))));
    }

    #[test]
    fn cartan_fixtures() {
        let l2 = 2f64.ln();
        assert_close(&cartan_vector(&diag(int(2))).unwrap(), &[l2, -l2], 1e-15);
        let lp = golden().ln();
        assert_close(&cartan_vector(&m(&[&[1, 1], &[0, 1]])).unwrap(), &[lp, -lp], 1e-14);
        assert!(cartan_vector(&Matrix::identity(3)).unwrap().is_zero());
    }

    #[test]
    fn powers_approach_jordan() {
        let g = diag(int(3));
        for k in 1..5 {
            assert!(jordan_via_powers(&g, k).unwrap().distance(&jordan_vector(&g).unwrap()) < 1e-14);
        }
        let h = m(&[&[2, 1], &[1, 1]]);
        // h is symmetric, so its singular values are its eigenvalue moduli.
        assert!(jordan_via_powers(&h, 32).unwrap().distance(&jordan_vector(&h).unwrap()) < 0.05);
        let u = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(jordan_via_powers(&u, 1).unwrap(), cartan_vector(&u).unwrap());
        assert!(jordan_via_powers(&u, 0).is_err());
    }

    #[test]
    fn float_jordan_matches_exact() {
        let g = m(&[&[2, 1, 0], &[1, 1, 1], &[0, 0, 1]]);
        let f = jordan_vector_float(&g.to_f64()).unwrap();
        assert!(f.distance(&jordan_vector(&g).unwrap()) < 1e-12);
        assert!(jordan_vector_float(&DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0])).is_err());
    }
}
