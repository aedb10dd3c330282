//! The coefficient matrices `A_γ`, `γ ∈ Z_N`, solved grade by grade.
//!
//! Storage is in the carried form `Ǎ_γ = D^{-1/2} A_γ D^{1/2}`, where `A_γ`
//! is the matrix in the orthonormal basis and `D = diag(⟨T,T⟩₀)`. Since
//! `τ(w) = D^{1/2} σ(w) D^{-1/2}`, any product of `τ`'s and `A`'s becomes
//! the same product of `σ`'s and `Ǎ`'s, so the recurrence is applied
//! verbatim with rational matrices. The monomial pairing matrix is
//! `G_γ = D Ǎ_γ`, and `A_{-γ} = A_γ*` reads `G_{-γ} = G_γᵀ`.
//!
//! Only sorted (non-increasing) representatives are stored; other indices
//! are reached through `Ǎ_γ = σ(w⁻¹) Ǎ_{wγ} σ(w)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::compositions::{bounded_partitions, canonicalize, MultiIndex};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, QMatrix};
use crate::perm::Permutation;
use crate::scalars::{format_rational, int, parse_rational, Complex, KappaParam, Rational};
use crate::tableaux::{Partition, Rep};

/// Order in which the sorted representatives of one ν-class are solved.
/// Both are linear extensions of dominance on the positive part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GradeOrder {
    /// Lexicographically ascending positive part.
    #[default]
    Lex,
    /// Ascending sum of squares of the positive part, ties reverse-lex.
    SquareSum,
}

/// The sorted representatives of `Z_{N,n}`, grouped by their negative part.
/// Within a group the positive parts are lexicographically ascending, so the
/// first element is the ◁-minimal one.
pub fn canonical_classes(nvars: usize, n: usize) -> Vec<Vec<MultiIndex>> {
    if n == 0 {
        return vec![vec![MultiIndex::zeros(nvars)]];
    }
    let mut out = Vec::new();
    for r in 1..nvars {
        let k = nvars - r;
        for nu in bounded_partitions(n, r) {
            if nu.contains(&0) {
                continue;
            }
            let group = bounded_partitions(n, k)
                .into_iter()
                .map(|mut pi| {
                    pi.extend(nu.iter().rev().map(|x| -x));
                    MultiIndex(pi)
                })
                .collect();
            out.push(group);
        }
    }
    out
}

/// Coefficient matrices for one module and one κ.
#[derive(Debug)]
pub struct CoeffStore {
    rep: Arc<Rep>,
    kappa: KappaParam,
    cap: usize,
    grades: Vec<BTreeMap<MultiIndex, QMatrix>>,
    working: Option<(usize, BTreeMap<MultiIndex, QMatrix>)>,
}

impl CoeffStore {
    /// A store holding grade 0 (`Ǎ_0 = I`); grades above `cap` are refused.
    pub fn new(rep: Arc<Rep>, kappa: KappaParam, cap: usize) -> Self {
        assert_eq!(
            rep.shape(),
            kappa.shape(),
            "kappa validated for another shape"
        );
        let mut g0 = BTreeMap::new();
        g0.insert(MultiIndex::zeros(rep.nvars()), QMatrix::identity(rep.dim()));
        CoeffStore {
            rep,
            kappa,
            cap,
            grades: vec![g0],
            working: None,
        }
    }

    pub fn rep(&self) -> &Arc<Rep> {
        &self.rep
    }

    pub fn kappa(&self) -> &KappaParam {
        &self.kappa
    }

    pub fn sealed_grade(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn set_cap(&mut self, cap: usize) {
        self.cap = cap;
    }

    /// Stored representatives of grade `n`.
    pub fn grade(&self, n: usize) -> Option<&BTreeMap<MultiIndex, QMatrix>> {
        self.grades.get(n)
    }

    fn not_ready(&self, n: usize) -> Error {
        Error::NotYetComputable {
            grade: n,
            sealed: self.sealed_grade(),
            cap: self.cap,
        }
    }

    fn check_len(&self, gamma: &MultiIndex) -> Result<()> {
        if gamma.len() != self.rep.nvars() {
            return Err(Error::Dimension(format!(
                "index of length {} for N = {}",
                gamma.len(),
                self.rep.nvars()
            )));
        }
        Ok(())
    }

    /// `Ǎ_γ` from stored data only (zero for `γ ∉ Z_N`).
    pub fn lookup(&self, gamma: &MultiIndex) -> Result<QMatrix> {
        self.check_len(gamma)?;
        if gamma.degree() != 0 {
            return Ok(QMatrix::zeros(self.rep.dim(), self.rep.dim()));
        }
        let n = (gamma.abs_sum() / 2) as usize;
        let (can, w) = canonicalize(gamma)?;
        let stored = if n < self.grades.len() {
            self.grades[n].get(&can)
        } else {
            match &self.working {
                Some((wn, map)) if *wn == n => Some(
                    map.get(&can)
                        .ok_or_else(|| Error::RecurrenceOrder(can.0.clone()))?,
                ),
                _ => None,
            }
        };
        let m = stored.ok_or_else(|| self.not_ready(n))?;
        if w.is_identity() {
            return Ok(m.clone());
        }
        let left = self.rep.rep_matrix(&w.inverse());
        let right = self.rep.rep_matrix(&w);
        Ok(&(&*left * m) * &*right)
    }

    /// `Ǎ_γ`, solving further grades (up to the cap) when needed.
    pub fn coeff(&mut self, gamma: &MultiIndex) -> Result<QMatrix> {
        self.check_len(gamma)?;
        if gamma.degree() == 0 {
            self.ensure_grade((gamma.abs_sum() / 2) as usize)?;
        }
        self.lookup(gamma)
    }

    /// `G_γ = D Ǎ_γ`, the pairing matrix of `x^α ⊗ T` against `x^β ⊗ T′` for `γ = α - β`.
    pub fn pairing(&self, gamma: &MultiIndex) -> Result<QMatrix> {
        let a = self.lookup(gamma)?;
        Ok(&self.rep.norm_matrix() * &a)
    }

    /// `A_γ` in the orthonormal basis, `D^{1/2} Ǎ_γ D^{-1/2}`, as floats.
    pub fn orthonormal(&self, gamma: &MultiIndex) -> Result<CMatrix> {
        let a = self.lookup(gamma)?;
        let s = self.rep.sqrt_norms();
        let mut m = a.to_complex();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m[(i, j)] *= Complex::new(s[i] / s[j], 0.0);
            }
        }
        Ok(m)
    }

    /// Solves every grade up to `n`.
    pub fn ensure_grade(&mut self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(self.not_ready(n));
        }
        while self.sealed_grade() < n {
            self.solve_next(GradeOrder::Lex)?;
        }
        Ok(())
    }

    /// Solves grade `n`, which must be the next unsealed one.
    pub fn solve_grade(&mut self, n: usize) -> Result<()> {
        self.solve_grade_ordered(n, GradeOrder::Lex)
    }

    pub fn solve_grade_ordered(&mut self, n: usize, order: GradeOrder) -> Result<()> {
        if n <= self.sealed_grade() {
            return Ok(());
        }
        if n != self.sealed_grade() + 1 || n > self.cap {
            return Err(self.not_ready(n));
        }
        self.solve_next(order)
    }

    fn solve_next(&mut self, order: GradeOrder) -> Result<()> {
        let n = self.grades.len();
        self.working = Some((n, BTreeMap::new()));
        let result = self.solve_working(n, order);
        let (_, map) = self.working.take().expect("working grade present");
        result?;
        self.grades.push(map);
        Ok(())
    }

    fn solve_working(&mut self, n: usize, order: GradeOrder) -> Result<()> {
        for mut group in canonical_classes(self.rep.nvars(), n) {
            if order == GradeOrder::SquareSum {
                group.sort_by_key(|g| {
                    let sq: i64 = g.0.iter().filter(|&&x| x > 0).map(|x| x * x).sum();
                    (sq, std::cmp::Reverse(g.clone()))
                });
            }
            for gamma in group {
                let a = self.solve_one(&gamma)?;
                self.working
                    .as_mut()
                    .expect("working grade")
                    .1
                    .insert(gamma, a);
            }
        }
        Ok(())
    }

    /// One application of the recurrence to a sorted `γ` with `γ₁ > 0`.
    fn solve_one(&self, gamma: &MultiIndex) -> Result<QMatrix> {
        let rep = &self.rep;
        let nv = rep.nvars();
        let d = rep.dim();
        let g = gamma.entries();
        let g1 = g[0];
        let m = g.iter().take_while(|&&x| x == g1).count();
        let kappa = self.kappa.value();

        // γ + ℓ(ε_j - ε_1)
        let shifted = |j: usize, l: i64| {
            let mut v = g.to_vec();
            v[0] -= l;
            v[j - 1] += l;
            MultiIndex(v)
        };

        let mut rhs = QMatrix::zeros(d, d);
        for j in m + 1..=nv {
            let gj = g[j - 1];
            let t1j = rep.transposition(1, j);
            if gj >= 0 {
                let mut s = QMatrix::zeros(d, d);
                for l in 1..g1 - gj {
                    s.add_scaled(&self.lookup(&shifted(j, l))?, &Rational::one());
                }
                if !s.is_zero() {
                    rhs.add_scaled(&(&*t1j * &s), &Rational::one());
                }
            } else {
                let mut s = QMatrix::zeros(d, d);
                for l in 1..g1 {
                    s.add_scaled(&self.lookup(&shifted(j, l))?, &Rational::one());
                }
                rhs.add_scaled(&(&*t1j * &s), &Rational::one());
                let mut s = QMatrix::zeros(d, d);
                for l in 1..=-gj {
                    s.add_scaled(&self.lookup(&shifted(j, l))?, &Rational::one());
                }
                rhs.add_scaled(&(&s * &*t1j), &Rational::one());
            }
        }
        let rhs = rhs.scale(&-kappa);

        // (γ₁I + κΣ_{ℓ>m} σ(1,ℓ))⁻¹ = σ(1,m) diag(1/(γ₁ + κc(m,T))) σ(1,m)
        let mut inv = Vec::with_capacity(d);
        for t in 0..d {
            let c = rep.tableau(t).c(m);
            let e = int(g1) + kappa * int(c);
            if e.is_zero() {
                return Err(Error::PoleExcluded {
                    kappa: kappa.clone(),
                    numer: -g1,
                    denom: c,
                });
            }
            inv.push(e.recip());
        }
        let t1m = rep.transposition(1, m);
        let left = &(&*t1m * &QMatrix::diagonal(&inv)) * &*t1m;
        Ok(&left * &rhs)
    }

    /// Residual of the self-adjointness identity of `x_iD_i` for the pair
    /// `(x^α, x^β)`, `|α| = |β|`: left side minus right side, carried form.
    pub fn selfadjoint_residual(
        &self,
        alpha: &MultiIndex,
        beta: &MultiIndex,
        i: usize,
    ) -> Result<QMatrix> {
        alpha.check_composition()?;
        beta.check_composition()?;
        if alpha.degree() != beta.degree() {
            return Err(Error::Dimension("|alpha| != |beta|".into()));
        }
        let rep = &self.rep;
        let nv = rep.nvars();
        let d = rep.dim();
        let k = self.kappa.value();
        let ii = i - 1;
        let gamma = alpha.sub(beta);
        // α + ℓ(ε_a - ε_b) - β
        let idx = |a: usize, b: usize, l: i64| {
            let mut v = gamma.0.clone();
            v[a] += l;
            v[b] -= l;
            MultiIndex(v)
        };
        let mut rhs = QMatrix::zeros(d, d);
        for jj in 0..nv {
            if jj == ii {
                continue;
            }
            let t = rep.transposition(i, jj + 1);
            let (ai, aj, bi, bj) = (alpha[ii], alpha[jj], beta[ii], beta[jj]);
            let mut left = QMatrix::zeros(d, d);
            if aj > ai {
                for l in 1..=aj - ai {
                    left.add_scaled(&self.lookup(&idx(ii, jj, l))?, &Rational::one());
                }
            }
            if ai > aj {
                for l in 0..ai - aj {
                    left.add_scaled(&self.lookup(&idx(jj, ii, l))?, &-Rational::one());
                }
            }
            let mut right = QMatrix::zeros(d, d);
            if bj > bi {
                for l in 1..=bj - bi {
                    right.add_scaled(&self.lookup(&idx(ii, jj, -l))?, &-Rational::one());
                }
            }
            if bi > bj {
                for l in 0..bi - bj {
                    right.add_scaled(&self.lookup(&idx(jj, ii, -l))?, &Rational::one());
                }
            }
            rhs.add_scaled(&(&*t * &left), k);
            rhs.add_scaled(&(&right * &*t), k);
        }
        let lhs = self.lookup(&gamma)?.scale(&int(alpha[ii] - beta[ii]));
        Ok(&lhs - &rhs)
    }

    /// Residuals of three explicit grade-2 relations, for every admissible `j`.
    /// Each entry is `(label, left - right)`.
    pub fn grade_two_residuals(&self) -> Result<Vec<(String, QMatrix)>> {
        let rep = &self.rep;
        let nv = rep.nvars();
        let d = rep.dim();
        let k = self.kappa.value();
        let e = |pairs: &[(usize, i64)]| {
            let mut v = vec![0; nv];
            for &(i, c) in pairs {
                v[i - 1] += c;
            }
            MultiIndex(v)
        };
        let mut tail_sum = QMatrix::identity(d);
        for i in 3..=nv {
            tail_sum.add_scaled(&rep.transposition(1, i), k);
        }
        let mut out = Vec::new();

        for j in 3..=nv {
            let lhs = &tail_sum * &self.lookup(&e(&[(1, 1), (2, 1), (j, -2)]))?;
            let s = &self.lookup(&e(&[(2, 1), (1, -1)]))? + &self.lookup(&e(&[(2, 1), (j, -1)]))?;
            let rhs = (&s * &*rep.transposition(1, j)).scale(&-k);
            out.push((format!("e1+e2-2e{j}"), &lhs - &rhs));
        }
        for j in 3..nv {
            let lhs = &tail_sum * &self.lookup(&e(&[(1, 1), (2, 1), (j, -1), (j + 1, -1)]))?;
            let a = &self.lookup(&e(&[(2, 1), (j, -1)]))? * &*rep.transposition(1, j + 1);
            let b = &self.lookup(&e(&[(2, 1), (j + 1, -1)]))? * &*rep.transposition(1, j);
            let rhs = (&a + &b).scale(&-k);
            out.push((format!("e1+e2-e{j}-e{}", j + 1), &lhs - &rhs));
        }
        {
            let mut op = QMatrix::identity(d).scale(&int(2));
            op.add_scaled(&rep.jucys_murphy(1)?, k);
            let lhs = &op * &self.lookup(&e(&[(1, 2), (nv, -2)]))?;
            let mut s = QMatrix::zeros(d, d);
            for l in 2..nv {
                s.add_scaled(
                    &(&*rep.transposition(1, l) * &self.lookup(&e(&[(1, 1), (l, 1), (nv, -2)]))?),
                    &Rational::one(),
                );
            }
            let a1n = self.lookup(&e(&[(1, 1), (nv, -1)]))?;
            let t1n = rep.transposition(1, nv);
            s.add_scaled(&(&*t1n * &a1n), &Rational::one());
            s.add_scaled(&(&(&a1n + &QMatrix::identity(d)) * &*t1n), &Rational::one());
            out.push((format!("2e1-2e{nv}"), &lhs - &s.scale(&-k)));
        }
        Ok(out)
    }

    /// `G_{-γ} = G_γᵀ`, exact.
    pub fn adjoint_holds(&self, gamma: &MultiIndex) -> Result<bool> {
        Ok(self.pairing(&gamma.neg())? == self.pairing(gamma)?.transpose())
    }

    /// `σ(w)ᵀ G_{wγ} σ(w) = G_γ`, exact.
    pub fn covariance_holds(&self, gamma: &MultiIndex, w: &Permutation) -> Result<bool> {
        let s = self.rep.rep_matrix(w);
        let lhs = &(&s.transpose() * &self.pairing(&gamma.act(w))?) * &*s;
        Ok(lhs == self.pairing(gamma)?)
    }

    pub fn to_file(&self) -> StoreFile {
        StoreFile {
            header: StoreHeader {
                nvars: self.rep.nvars(),
                shape: self.rep.shape().clone(),
                kappa: format_rational(self.kappa.value()),
                sealed_grade: self.sealed_grade(),
                basis_order: self
                    .rep
                    .basis()
                    .iter()
                    .map(|t| t.content().to_vec())
                    .collect(),
            },
            grades: self
                .grades
                .iter()
                .enumerate()
                .map(|(n, map)| GradeRecord {
                    grade: n,
                    records: map
                        .iter()
                        .map(|(g, m)| CoeffRecord {
                            gamma: g.0.clone(),
                            matrix: m.to_strings(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("store serializes")
    }

    /// Rebuilds a store from its file form, revalidating shape, κ and basis order.
    pub fn from_file(file: StoreFile, cap: usize) -> Result<Self> {
        let h = file.header;
        let shape: Partition = h.shape;
        if shape.size() != h.nvars {
            return Err(Error::Format(format!(
                "N = {} does not match shape {shape}",
                h.nvars
            )));
        }
        let kappa = KappaParam::new(parse_rational(&h.kappa)?, &shape)?;
        let rep = Arc::new(Rep::new(&shape));
        let order: Vec<Vec<i64>> = rep.basis().iter().map(|t| t.content().to_vec()).collect();
        if order != h.basis_order {
            return Err(Error::Format(
                "basis order differs from the canonical one".into(),
            ));
        }
        if file.grades.len() != h.sealed_grade + 1 {
            return Err(Error::Format(
                "grade records do not match sealed_grade".into(),
            ));
        }
        let d = rep.dim();
        let mut grades = Vec::new();
        for (n, rec) in file.grades.into_iter().enumerate() {
            if rec.grade != n {
                return Err(Error::Format(format!(
                    "grade {} out of sequence",
                    rec.grade
                )));
            }
            let mut map = BTreeMap::new();
            for r in rec.records {
                let g = MultiIndex(r.gamma);
                if g.len() != h.nvars || g.degree() != 0 || g.abs_sum() != 2 * n as i64 {
                    return Err(Error::Format(format!("bad index {:?} in grade {n}", g.0)));
                }
                let rows = r
                    .matrix
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|s| parse_rational(s))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if rows.len() != d || rows.iter().any(|row| row.len() != d) {
                    return Err(Error::Format("matrix of the wrong size".into()));
                }
                map.insert(g, QMatrix::from_rows(rows));
            }
            let want: usize = canonical_classes(h.nvars, n).iter().map(Vec::len).sum();
            if map.len() != want {
                return Err(Error::Format(format!("grade {n} is incomplete")));
            }
            grades.push(map);
        }
        Ok(CoeffStore {
            rep,
            kappa,
            cap: cap.max(h.sealed_grade),
            grades,
            working: None,
        })
    }

    pub fn from_json(s: &str, cap: usize) -> Result<Self> {
        let file: StoreFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file(file, cap)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StoreHeader {
    #[serde(rename = "N")]
    pub nvars: usize,
    pub shape: Partition,
    pub kappa: String,
    pub sealed_grade: usize,
    pub basis_order: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub gamma: Vec<i64>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradeRecord {
    pub grade: usize,
    pub records: Vec<CoeffRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StoreFile {
    pub header: StoreHeader,
    pub grades: Vec<GradeRecord>,
}
