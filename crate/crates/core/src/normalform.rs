//! The cubic Γ×S¹-equivariant normal form on C³
//!
//! ż_j = z_j(λ + γ|z|² + α Σ_{k≠j}|z_k|²) + β z̄_j Σ_{k≠j} z_k²
//!
//! and its restriction to flow-invariant subspaces.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::twisted::FixSubspace;

pub type C3 = [Complex64; 3];

/// Residual tolerance for flow invariance of a subspace.
pub const INVARIANCE_TOL: f64 = 1e-10;
/// Residual tolerance for equivariance checks.
pub const EQUIVARIANCE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalFormError {
    #[error("subspace is not flow-invariant (residual {0:e})")]
    NotInvariant(f64),
    #[error("subspace basis is empty or degenerate")]
    DegenerateBasis,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NFParams {
    pub lambda: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

pub fn eval_vf(z: &C3, p: &NFParams) -> C3 {
    let m: [f64; 3] = std::array::from_fn(|i| z[i].norm_sqr());
    let total = m[0] + m[1] + m[2];
    std::array::from_fn(|j| {
        let (a, b) = ((j + 1) % 3, (j + 2) % 3);
        z[j] * (p.lambda + p.gamma * total + p.alpha * (m[a] + m[b])) + z[j].conj() * p.beta * (z[a] * z[a] + z[b] * z[b])
    })
}

/// Linearization at the origin, λ·Id.
pub fn jacobian_origin(p: &NFParams) -> [[Complex64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { p.lambda } else { Complex64::new(0.0, 0.0) }))
}

pub fn norm(z: &C3) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn sub(a: &C3, b: &C3) -> C3 {
    std::array::from_fn(|i| a[i] - b[i])
}

/// Solve a small dense complex system by Gaussian elimination with partial
/// pivoting. Returns `None` if singular.
fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[piv][col].norm() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: Complex64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// The normal form restricted to span(basis), in basis coordinates.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub basis: Vec<C3>,
    pub params: NFParams,
    /// For one-dimensional subspaces: the reduced equation is ẇ = w(λ + c|w|²).
    pub cubic_coefficient: Option<Complex64>,
}

impl Restricted {
    pub fn embed(&self, w: &[Complex64]) -> C3 {
        std::array::from_fn(|i| self.basis.iter().zip(w).map(|(v, c)| v[i] * c).sum())
    }

    /// Least-squares coordinates of `z` in the basis and the residual norm.
    pub fn coordinates(&self, z: &C3) -> (Vec<Complex64>, f64) {
        let d = self.basis.len();
        let gram: Vec<Vec<Complex64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..3).map(|k| self.basis[i][k].conj() * self.basis[j][k]).sum())
                    .collect()
            })
            .collect();
        let rhs: Vec<Complex64> = (0..d)
            .map(|i| (0..3).map(|k| self.basis[i][k].conj() * z[k]).sum())
            .collect();
        let w = solve(gram, rhs).expect("basis is independent");
        let resid = norm(&sub(z, &self.embed(&w)));
        (w, resid)
    }

    /// Reduced vector field in basis coordinates.
    pub fn eval(&self, w: &[Complex64]) -> Vec<Complex64> {
        self.coordinates(&eval_vf(&self.embed(w), &self.params)).0
    }
}

/// Restrict to a subspace after checking flow invariance on 20 seeded
/// random points. For one-dimensional subspaces the cubic coefficient c is
/// fitted from two radii.
pub fn restrict(fix: &FixSubspace, p: &NFParams) -> Result<Restricted, NormalFormError> {
    restrict_basis(fix.numeric_basis(), p)
}

pub fn restrict_basis(basis: Vec<C3>, p: &NFParams) -> Result<Restricted, NormalFormError> {
    if basis.is_empty() {
        return Err(NormalFormError::DegenerateBasis);
    }
    let mut r = Restricted {
        basis,
        params: *p,
        cubic_coefficient: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let w: Vec<Complex64> = (0..r.basis.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let (_, resid) = r.coordinates(&eval_vf(&r.embed(&w), p));
        worst = worst.max(resid);
    }
    if worst > INVARIANCE_TOL {
        return Err(NormalFormError::NotInvariant(worst));
    }
    if r.basis.len() == 1 {
        let (r1, r2) = (0.5, 1.0);
        let g1 = r.eval(&[Complex64::new(r1, 0.0)])[0] / r1;
        let g2 = r.eval(&[Complex64::new(r2, 0.0)])[0] / r2;
        // g(r)/r = λ' + c r²
        let c = (g2 - g1) / (r2 * r2 - r1 * r1);
        r.cubic_coefficient = Some(c);
    }
    Ok(r)
}

/// Closed-form cubic coefficient on the C-axial subspaces, with the reduced
/// coordinate scaled so the first nonzero entry is 1.
pub fn c_axial_coefficient(row: char, p: &NFParams) -> Option<Complex64> {
    let (a, b, g) = (p.alpha, p.beta, p.gamma);
    Some(match row {
        'b' => g,
        'c' => 3.0 * g + 2.0 * a + 2.0 * b,
        'd' => 3.0 * g + 2.0 * a - b,
        'e' => 2.0 * g + a + b,
        'f' => 2.0 * g + a - b,
        _ => return None,
    })
}

/// Relative equilibrium z(t) = e^{iωt}z₀ of ẇ = w(λ + c|w|²): squared
/// amplitude −Re λ / Re c and frequency Im λ + Im c·|w|².
pub fn relative_equilibrium(lambda: Complex64, c: Complex64) -> Option<(f64, f64)> {
    let r2 = -lambda.re / c.re;
    (r2.is_finite() && r2 > 0.0).then(|| (r2, lambda.im + c.im * r2))
}
