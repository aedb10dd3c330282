//! The connection `∂_i L = κ L M_i`, with
//! `M_i(x) = Σ_{j≠i} σ(i,j)/(x_i − x_j) − (γ/x_i) I`.
//!
//! Integrability and the Euler identity are checked exactly at rational
//! points. Transport of `L` along torus paths is numeric (RK4).

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, QMatrix};
use crate::scalars::{format_rational, int, to_f64, Complex, Rational};
use crate::tableaux::{t_zero, Partition, Rep};

pub const DEFAULT_CLEARANCE: f64 = 0.05;

/// `(1/2N) Σ_i τ_i(τ_i − 2i + 1)`
pub fn gamma_by_rows(shape: &Partition) -> Rational {
    let n = shape.size() as i64;
    let by_rows: i64 = shape
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let t = t as i64;
            t * (t - 2 * (i as i64 + 1) + 1)
        })
        .sum();
    Rational::new(by_rows.into(), (2 * n).into())
}

/// `(1/N) Σ_j c(j,T₀)`
pub fn gamma_by_contents(shape: &Partition) -> Rational {
    let t0 = t_zero(shape);
    let sum: i64 = t0.content().iter().sum();
    Rational::new(sum.into(), (shape.size() as i64).into())
}

/// `γ`, with both expressions asserted equal.
pub fn gamma_const(shape: &Partition) -> Rational {
    let a = gamma_by_rows(shape);
    assert_eq!(
        a,
        gamma_by_contents(shape),
        "the two expressions for γ disagree on {shape}"
    );
    a
}

fn check_regular(x: &[Rational]) -> Result<()> {
    let bad =
        x.iter().any(Zero::is_zero) || (0..x.len()).any(|i| (i + 1..x.len()).any(|j| x[i] == x[j]));
    if bad {
        return Err(Error::SingularPoint(
            x.iter().map(format_rational).collect(),
        ));
    }
    Ok(())
}

/// Exact connection matrices over a fixed shape.
pub struct Connection<'a> {
    rep: &'a Rep,
    gamma: Rational,
}

impl<'a> Connection<'a> {
    pub fn new(rep: &'a Rep) -> Self {
        Connection {
            rep,
            gamma: gamma_const(rep.shape()),
        }
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    fn check(&self, i: usize, x: &[Rational]) -> Result<()> {
        let n = self.rep.nvars();
        if x.len() != n {
            return Err(Error::Dimension(format!(
                "point of length {}, expected {n}",
                x.len()
            )));
        }
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        check_regular(x)
    }

    /// `M_i(x)`, 1-based `i`, in the unnormalized basis.
    pub fn matrix(&self, i: usize, x: &[Rational]) -> Result<QMatrix> {
        self.check(i, x)?;
        let d = self.rep.dim();
        let mut m = QMatrix::identity(d).scale(&(-&self.gamma / &x[i - 1]));
        for j in 1..=self.rep.nvars() {
            if j != i {
                let s = int(1) / (&x[i - 1] - &x[j - 1]);
                m.add_scaled(&self.rep.transposition(i, j), &s);
            }
        }
        Ok(m)
    }

    /// `∂_i M_j(x)`
    pub fn partial(&self, i: usize, j: usize, x: &[Rational]) -> Result<QMatrix> {
        self.check(i, x)?;
        self.check(j, x)?;
        if i != j {
            let d = &x[i - 1] - &x[j - 1];
            return Ok(self.rep.transposition(i, j).scale(&(int(1) / (&d * &d))));
        }
        let xi = &x[i - 1];
        let mut m = QMatrix::identity(self.rep.dim()).scale(&(&self.gamma / (xi * xi)));
        for k in 1..=self.rep.nvars() {
            if k != i {
                let d = xi - &x[k - 1];
                m.add_scaled(&self.rep.transposition(i, k), &(int(-1) / (&d * &d)));
            }
        }
        Ok(m)
    }

    /// `∂_i M_j − ∂_j M_i − κ(M_j M_i − M_i M_j)`; zero for `i = j`.
    pub fn integrability_residual(
        &self,
        i: usize,
        j: usize,
        kappa: &Rational,
        x: &[Rational],
    ) -> Result<QMatrix> {
        self.check(i, x)?;
        self.check(j, x)?;
        let d = self.rep.dim();
        if i == j {
            return Ok(QMatrix::zeros(d, d));
        }
        let (mi, mj) = (self.matrix(i, x)?, self.matrix(j, x)?);
        let comm = &(&mj * &mi) - &(&mi * &mj);
        let mut r = &self.partial(i, j, x)? - &self.partial(j, i, x)?;
        r.add_scaled(&comm, &-kappa);
        Ok(r)
    }

    /// `Σ_i x_i M_i(x)`
    pub fn euler_residual(&self, x: &[Rational]) -> Result<QMatrix> {
        let d = self.rep.dim();
        let mut r = QMatrix::zeros(d, d);
        for i in 1..=self.rep.nvars() {
            r.add_scaled(&self.matrix(i, x)?, &x[i - 1]);
        }
        Ok(r)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PathReport {
    pub steps: usize,
    pub clearance: f64,
    /// Smallest `|x_i − x_j|` seen at any evaluation point.
    pub min_distance: f64,
    /// `max |L − I|` at the end of the path.
    pub defect: f64,
}

/// Numeric transport in the orthonormal basis, along straight lines in angle space.
pub struct Transport {
    tau: Vec<Vec<CMatrix>>,
    gamma: f64,
    kappa: f64,
    clearance: f64,
}

impl Transport {
    pub fn new(rep: &Rep, kappa: &Rational) -> Self {
        let n = rep.nvars();
        let tau = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| rep.orthonormal(&crate::perm::Permutation::transposition(n, i, j)))
                    .collect()
            })
            .collect();
        Transport {
            tau,
            gamma: to_f64(&gamma_const(rep.shape())),
            kappa: to_f64(kappa),
            clearance: DEFAULT_CLEARANCE,
        }
    }

    pub fn with_clearance(mut self, clearance: f64) -> Self {
        self.clearance = clearance;
        self
    }

    fn nvars(&self) -> usize {
        self.tau.len()
    }

    fn min_distance(x: &[Complex]) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..x.len() {
            d = d.min(x[i].norm());
            for j in i + 1..x.len() {
                d = d.min((x[i] - x[j]).norm());
            }
        }
        d
    }

    /// `M_i(x)`, 0-based `i`.
    fn matrix(&self, i: usize, x: &[Complex]) -> CMatrix {
        let dim = self.tau[0][0].dim();
        let mut m = CMatrix::identity(dim).scale(-self.gamma / x[i]);
        for j in 0..self.nvars() {
            if j != i {
                m.add_scaled(&self.tau[i][j], Complex::new(1.0, 0.0) / (x[i] - x[j]));
            }
        }
        m
    }

    /// `κ Σ_i M_i(x) x_i'` along `θ(t)`, where `dθ/dt = dtheta`.
    fn generator(&self, theta: &[f64], dtheta: &[f64], seen: &mut f64) -> CMatrix {
        let x: Vec<Complex> = theta.iter().map(|&t| Complex::from_polar(1.0, t)).collect();
        *seen = seen.min(Self::min_distance(&x));
        let dim = self.tau[0][0].dim();
        let mut g = CMatrix::zeros(dim);
        for i in 0..self.nvars() {
            if dtheta[i] != 0.0 {
                let xdot = Complex::new(0.0, dtheta[i]) * x[i];
                g.add_scaled(&self.matrix(i, &x), xdot * self.kappa);
            }
        }
        g
    }

    fn segment(&self, l: &mut CMatrix, a: &[f64], b: &[f64], steps: usize, seen: &mut f64) {
        let dtheta: Vec<f64> = a.iter().zip(b).map(|(p, q)| q - p).collect();
        let at = |t: f64| -> Vec<f64> { a.iter().zip(&dtheta).map(|(p, d)| p + t * d).collect() };
        let h = 1.0 / steps as f64;
        let hc = Complex::new(h, 0.0);
        for s in 0..steps {
            let t = s as f64 * h;
            let g1 = self.generator(&at(t), &dtheta, seen);
            let g2 = self.generator(&at(t + h / 2.0), &dtheta, seen);
            let g3 = self.generator(&at(t + h), &dtheta, seen);
            let k1 = &*l * &g1;
            let mut y = l.clone();
            y.add_scaled(&k1, hc / 2.0);
            let k2 = &y * &g2;
            let mut y = l.clone();
            y.add_scaled(&k2, hc / 2.0);
            let k3 = &y * &g2;
            let mut y = l.clone();
            y.add_scaled(&k3, hc);
            let k4 = &y * &g3;
            l.add_scaled(&k1, hc / 6.0);
            l.add_scaled(&k2, hc / 3.0);
            l.add_scaled(&k3, hc / 3.0);
            l.add_scaled(&k4, hc / 6.0);
        }
    }

    /// Transports `L = I` along the polygon through `vertices` (angle vectors),
    /// `steps` RK4 steps per edge.
    pub fn polygon(&self, vertices: &[Vec<f64>], steps: usize) -> Result<(CMatrix, PathReport)> {
        if vertices.iter().any(|v| v.len() != self.nvars()) {
            return Err(Error::Dimension("angle vector length".into()));
        }
        let dim = self.tau[0][0].dim();
        let mut l = CMatrix::identity(dim);
        let mut seen = f64::INFINITY;
        for v in vertices {
            let x: Vec<Complex> = v.iter().map(|&t| Complex::from_polar(1.0, t)).collect();
            seen = seen.min(Self::min_distance(&x));
        }
        if seen < self.clearance {
            return Err(Error::PathNearSingular {
                distance: seen,
                clearance: self.clearance,
            });
        }
        for w in vertices.windows(2) {
            self.segment(&mut l, &w[0], &w[1], steps.max(1), &mut seen);
            if seen < self.clearance {
                return Err(Error::PathNearSingular {
                    distance: seen,
                    clearance: self.clearance,
                });
            }
        }
        let defect = l.max_abs_diff(&CMatrix::identity(dim));
        Ok((
            l,
            PathReport {
                steps: steps * vertices.len().saturating_sub(1),
                clearance: self.clearance,
                min_distance: seen,
                defect,
            },
        ))
    }

    /// `integrate_path` from `start` to `end` in angle space.
    pub fn path(&self, start: &[f64], end: &[f64], steps: usize) -> Result<(CMatrix, PathReport)> {
        self.polygon(&[start.to_vec(), end.to_vec()], steps)
    }

    /// A square loop of half-width `r` in the `(p, q)` angle plane around `centre`.
    pub fn square_loop(centre: &[f64], p: usize, q: usize, r: f64) -> Vec<Vec<f64>> {
        let corner = |a: f64, b: f64| {
            let mut v = centre.to_vec();
            v[p] += a;
            v[q] += b;
            v
        };
        vec![
            corner(r, r),
            corner(-r, r),
            corner(-r, -r),
            corner(r, -r),
            corner(r, r),
        ]
    }
}
