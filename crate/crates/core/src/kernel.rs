//! Floating-point evaluation on the torus: `H_n(x)`, the Cesàro approximants
//! `K_n(x)`, their positivity and symmetry checks, and the scalar identity
//! relating `h_n(x̄)h_n(x)` to the Cesàro kernel.

use std::f64::consts::PI;
use std::sync::Arc;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeffs::CoeffStore;
use crate::compositions::{compositions, enumerate_z, MultiIndex};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::perm::Permutation;
use crate::scalars::{format_rational, int, to_f64, Complex, Rational};
use crate::tableaux::Rep;

/// A point of the torus `T^N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusPoint {
    coords: Vec<Complex>,
}

impl TorusPoint {
    pub fn from_angles(theta: &[f64]) -> Self {
        TorusPoint {
            coords: theta.iter().map(|&t| Complex::from_polar(1.0, t)).collect(),
        }
    }

    /// Checks `|x_i| = 1` within `1e-12`.
    pub fn new(coords: Vec<Complex>) -> Result<Self> {
        if coords.iter().any(|z| (z.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::Dimension(
                "torus coordinates must have modulus one".into(),
            ));
        }
        Ok(TorusPoint { coords })
    }

    /// Uniform angles in `[0, 2π)`.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let theta: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        Self::from_angles(&theta)
    }

    /// `x₀ = (1, ω, …, ω^{N-1})`, `ω = e^{2πi/N}`.
    pub fn roots_of_unity(n: usize) -> Self {
        let theta: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
        Self::from_angles(&theta)
    }

    pub fn ones(n: usize) -> Self {
        Self::from_angles(&vec![0.0; n])
    }

    pub fn coords(&self) -> &[Complex] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `xw`
    pub fn act(&self, w: &Permutation) -> TorusPoint {
        TorusPoint {
            coords: w.act_on_point(&self.coords),
        }
    }

    /// `u·x`
    pub fn scaled(&self, u: Complex) -> TorusPoint {
        TorusPoint {
            coords: self.coords.iter().map(|z| z * u).collect(),
        }
    }

    pub fn conj(&self) -> TorusPoint {
        TorusPoint {
            coords: self.coords.iter().map(|z| z.conj()).collect(),
        }
    }

    /// `x^γ`
    pub fn monomial(&self, gamma: &[i64]) -> Complex {
        self.coords
            .iter()
            .zip(gamma)
            .fold(Complex::one(), |acc, (z, &g)| acc * z.powi(g as i32))
    }
}

/// `(−n)_m / (−n−δ)_m` for `m <= n`, zero beyond.
pub fn cesaro_weight(n: usize, m: usize, delta: usize) -> Rational {
    if m > n {
        return int(0);
    }
    (0..m).fold(Rational::one(), |acc, k| {
        acc * int((n - k) as i64) / int((n + delta - k) as i64)
    })
}

/// `h_n(x)`, the complete homogeneous symmetric polynomial.
pub fn complete_symmetric(n: usize, x: &TorusPoint) -> Complex {
    compositions(n, x.len())
        .iter()
        .map(|a| x.monomial(a.entries()))
        .sum()
}

/// `S_k(x) = Σ_{γ∈Z_{N,k}} x^γ`
pub fn s_sum(k: usize, x: &TorusPoint) -> Complex {
    enumerate_z(x.len(), k)
        .iter()
        .map(|g| x.monomial(g.entries()))
        .sum()
}

/// `σ_n^{N-1}(x)`
pub fn cesaro_kernel(n: usize, x: &TorusPoint) -> Complex {
    let delta = x.len() - 1;
    (0..=n)
        .map(|k| s_sum(k, x) * to_f64(&cesaro_weight(n, k, delta)))
        .sum()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SigmaCheck {
    pub residual: f64,
    /// Real part of `σ_n^{N-1}(x)`.
    pub sigma: f64,
    /// Imaginary part, which should vanish.
    pub sigma_imag: f64,
}

/// `|h_n(x̄)h_n(x) − ((N)_n/n!)σ_n^{N−1}(x)|` together with the kernel value.
pub fn sigma_identity_residual(n: usize, x: &TorusPoint) -> SigmaCheck {
    let nv = x.len();
    let lhs = complete_symmetric(n, &x.conj()) * complete_symmetric(n, x);
    let count = compositions(n, nv).len() as f64;
    let sigma = cesaro_kernel(n, x);
    SigmaCheck {
        residual: (lhs - sigma * count).norm(),
        sigma: sigma.re,
        sigma_imag: sigma.im,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub order: usize,
    pub max_residual: f64,
    pub min_sigma: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    #[serde(rename = "N")]
    pub nvars: usize,
    pub seed: u64,
    pub samples: usize,
    pub orders: Vec<IdentityRow>,
}

impl IdentityReport {
    /// Residual below `1e-10` and `σ >= -1e-10` at every order.
    pub fn passed(&self) -> bool {
        self.orders
            .iter()
            .all(|r| r.max_residual < 1e-10 && r.min_sigma >= -1e-10)
    }
}

/// `sigma_identity_residual` at `samples` seeded torus points, orders `0..=max_n`.
pub fn identity_report(nvars: usize, max_n: usize, samples: usize, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orders: Vec<IdentityRow> = (0..=max_n)
        .map(|order| IdentityRow {
            order,
            max_residual: 0.0,
            min_sigma: f64::INFINITY,
        })
        .collect();
    for _ in 0..samples {
        let x = TorusPoint::random(nvars, &mut rng);
        for row in orders.iter_mut() {
            let c = sigma_identity_residual(row.order, &x);
            row.max_residual = row.max_residual.max(c.residual);
            row.min_sigma = row.min_sigma.min(c.sigma);
        }
    }
    IdentityReport {
        nvars,
        seed,
        samples,
        orders,
    }
}

/// Orthonormal-basis coefficient matrices, grouped by grade, ready for evaluation.
pub struct KernelEvaluator {
    rep: Arc<Rep>,
    grades: Vec<Vec<(MultiIndex, CMatrix)>>,
}

impl KernelEvaluator {
    /// Materializes every `A_γ`, `γ ∈ Z_{N,k}`, `k <= max_n`.
    pub fn new(store: &CoeffStore, max_n: usize) -> Result<Self> {
        if max_n > store.sealed_grade() {
            return Err(Error::NotYetComputable {
                grade: max_n,
                sealed: store.sealed_grade(),
                cap: store.cap(),
            });
        }
        let nv = store.rep().nvars();
        let grades = (0..=max_n)
            .map(|k| {
                enumerate_z(nv, k)
                    .into_iter()
                    .map(|g| {
                        let m = store.orthonormal(&g)?;
                        Ok((g, m))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelEvaluator {
            rep: store.rep().clone(),
            grades,
        })
    }

    pub fn max_grade(&self) -> usize {
        self.grades.len() - 1
    }

    fn check(&self, n: usize, x: &TorusPoint) -> Result<()> {
        if n > self.max_grade() {
            return Err(Error::NotYetComputable {
                grade: n,
                sealed: self.max_grade(),
                cap: self.max_grade(),
            });
        }
        if x.len() != self.rep.nvars() {
            return Err(Error::Dimension(format!("point of length {}", x.len())));
        }
        Ok(())
    }

    /// `H_n(x) = Σ_{γ∈Z_{N,n}} A_γ x^γ`
    pub fn h_matrix(&self, n: usize, x: &TorusPoint) -> Result<CMatrix> {
        self.check(n, x)?;
        let mut out = CMatrix::zeros(self.rep.dim());
        for (g, a) in &self.grades[n] {
            out.add_scaled(a, x.monomial(g.entries()));
        }
        Ok(out)
    }

    /// `K_n(x) = Σ_{m=0}^n w(n,m,N-1) H_m(x)`
    pub fn kernel(&self, n: usize, x: &TorusPoint) -> Result<CMatrix> {
        self.check(n, x)?;
        let delta = self.rep.nvars() - 1;
        let mut out = CMatrix::zeros(self.rep.dim());
        for m in 0..=n {
            let w = to_f64(&cesaro_weight(n, m, delta));
            out.add_scaled(&self.h_matrix(m, x)?, Complex::new(w, 0.0));
        }
        Ok(out)
    }

    /// `max |H(xw) − τ(w)⁻¹H(x)τ(w)|` over all `w`, for `H = K_n`.
    pub fn covariance_residual(&self, n: usize, x: &TorusPoint) -> Result<f64> {
        let base = self.kernel(n, x)?;
        let mut worst: f64 = 0.0;
        for w in Permutation::all(self.rep.nvars()) {
            let t = self.rep.orthonormal(&w);
            let t_inv = self.rep.orthonormal(&w.inverse());
            let rhs = &(&t_inv * &base) * &t;
            worst = worst.max(self.kernel(n, &x.act(&w))?.max_abs_diff(&rhs));
        }
        Ok(worst)
    }

    /// `|K_n(x₀)τ(w₀) − τ(w₀)K_n(x₀)|`
    pub fn x0_commutator(&self, n: usize) -> Result<f64> {
        let nv = self.rep.nvars();
        let k = self.kernel(n, &TorusPoint::roots_of_unity(nv))?;
        let t = self.rep.orthonormal(&Permutation::cycle(nv));
        Ok((&k * &t).max_abs_diff(&(&t * &k)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub shape: Vec<usize>,
    pub kappa: String,
    pub psd_range: bool,
    pub order: usize,
    pub seed: u64,
    pub samples: usize,
    pub min_eigenvalues: Vec<f64>,
    pub worst_min_eigenvalue: f64,
    pub hermiticity_residual: f64,
    pub covariance_residual: f64,
    pub homogeneity_residual: f64,
    pub x0_commutator: f64,
}

/// Evaluates `K_n` at `samples` seeded torus points.
pub fn kernel_report(
    store: &CoeffStore,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<KernelReport> {
    let ev = KernelEvaluator::new(store, n)?;
    let nv = store.rep().nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mins = Vec::with_capacity(samples);
    let (mut herm, mut cov, mut homog): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let x = TorusPoint::random(nv, &mut rng);
        let k = ev.kernel(n, &x)?;
        mins.push(k.min_eigenvalue());
        herm = herm.max(k.hermiticity_residual());
        let u = Complex::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        homog = homog.max(ev.kernel(n, &x.scaled(u))?.max_abs_diff(&k));
        cov = cov.max(ev.covariance_residual(n, &x)?);
    }
    let worst = mins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(KernelReport {
        shape: store.rep().shape().parts().to_vec(),
        kappa: format_rational(store.kappa().value()),
        psd_range: store.kappa().psd_range(),
        order: n,
        seed,
        samples,
        min_eigenvalues: mins,
        worst_min_eigenvalue: worst,
        hermiticity_residual: herm,
        covariance_residual: cov,
        homogeneity_residual: homog,
        x0_commutator: ev.x0_commutator(n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{make_kappa, q};
    use crate::tableaux::Partition;

    fn store(p: &[usize], kp: i64, kq: i64, grade: usize) -> CoeffStore {
        let shape = Partition::new(p.to_vec()).unwrap();
        let kappa = make_kappa(kp, kq, &shape).unwrap();
        let mut s = CoeffStore::new(Arc::new(Rep::new(&shape)), kappa, grade);
        s.ensure_grade(grade).unwrap();
        s
    }

    #[test]
    fn weights() {
        for n in 0..6 {
            assert_eq!(cesaro_weight(n, 0, 2), int(1));
            assert_eq!(cesaro_weight(n, n + 1, 2), int(0));
            for m in 0..=n {
                let (nn, mm) = (n as i64, m as i64);
                let want = (int(1) - q(mm, nn + 1)) * (int(1) - q(mm, nn + 2));
                assert_eq!(cesaro_weight(n, m, 2), want);
            }
        }
        let w = to_f64(&cesaro_weight(1_000_000, 3, 2));
        assert!((w - 1.0).abs() < 1e-5);
        assert!(1.0 - w > 0.0);
    }

    #[test]
    fn sigma_identity_at_one_and_random() {
        for nv in [3, 4] {
            for n in 0..=5 {
                let c = sigma_identity_residual(n, &TorusPoint::ones(nv));
                assert!(c.residual < 1e-9, "N={nv} n={n} {c:?}");
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x = TorusPoint::random(3, &mut rng);
            for n in 0..=6 {
                let c = sigma_identity_residual(n, &x);
                assert!(c.residual < 1e-10);
                assert!(c.sigma >= -1e-10);
            }
        }
    }

    #[test]
    fn h_zero_is_identity_and_hermitian() {
        let s = store(&[2, 1], 1, 5, 4);
        let ev = KernelEvaluator::new(&s, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = TorusPoint::random(3, &mut rng);
        assert!(
            ev.h_matrix(0, &x)
                .unwrap()
                .max_abs_diff(&CMatrix::identity(2))
                < 1e-15
        );
        assert!(
            ev.kernel(0, &x)
                .unwrap()
                .max_abs_diff(&CMatrix::identity(2))
                < 1e-15
        );
        for n in 1..=4 {
            assert!(ev.h_matrix(n, &x).unwrap().hermiticity_residual() < 1e-10);
        }
        assert!(ev.covariance_residual(3, &x).unwrap() < 1e-10);
        assert!(ev.x0_commutator(4).unwrap() < 1e-10);
    }

    #[test]
    fn report_is_deterministic_and_positive() {
        let s = store(&[2, 1], -1, 5, 4);
        let a = kernel_report(&s, 4, 10, 42).unwrap();
        let b = kernel_report(&s, 4, 10, 42).unwrap();
        assert_eq!(a.min_eigenvalues, b.min_eigenvalues);
        assert!(a.worst_min_eigenvalue >= -1e-9);
        assert!(a.hermiticity_residual < 1e-10);
        assert!(a.homogeneity_residual < 1e-10);
    }

    #[test]
    fn evaluator_needs_sealed_grades() {
        let s = store(&[2, 1], 1, 5, 2);
        assert!(matches!(
            KernelEvaluator::new(&s, 3),
            Err(Error::NotYetComputable { .. })
        ));
        assert!(TorusPoint::new(vec![Complex::new(2.0, 0.0)]).is_err());
    }
}
