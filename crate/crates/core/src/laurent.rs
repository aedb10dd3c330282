//! Sparse `V_τ`-valued Laurent polynomials and the operators acting on them.
//!
//! A [`VVLaurent`] is a map from exponent vectors to dense coefficient
//! vectors in the RSYT basis. The shape and κ live in an [`Ops`] context so
//! that polynomials stay plain data.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::compositions::{triangular_lt, MultiIndex};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::perm::Permutation;
use crate::scalars::{format_rational, Rational};
use crate::tableaux::Rep;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VVLaurent {
    nvars: usize,
    dim: usize,
    terms: BTreeMap<MultiIndex, Vec<Rational>>,
}

fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

impl VVLaurent {
    pub fn zero(nvars: usize, dim: usize) -> Self {
        VVLaurent {
            nvars,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// `x^α ⊗ v`
    pub fn monomial(alpha: MultiIndex, v: Vec<Rational>) -> Self {
        let mut f = Self::zero(alpha.len(), v.len());
        f.add_term(alpha, &v);
        f
    }

    /// `1 ⊗ T_t`
    pub fn constant(rep: &Rep, t: usize) -> Self {
        Self::monomial(MultiIndex::zeros(rep.nvars()), rep.unit(t))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic order of the exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<Rational>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Option<&Vec<Rational>> {
        self.terms.get(alpha)
    }

    /// Adds `x^α ⊗ v`, dropping the term if it cancels.
    pub fn add_term(&mut self, alpha: MultiIndex, v: &[Rational]) {
        assert_eq!(alpha.len(), self.nvars, "exponent of the wrong length");
        assert_eq!(v.len(), self.dim, "coefficient of the wrong length");
        if is_zero_vec(v) {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v.to_vec());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                for (a, b) in e.get_mut().iter_mut().zip(v) {
                    *a += b;
                }
                if is_zero_vec(e.get()) {
                    e.remove();
                }
            }
        }
    }

    /// Adds `s·v` at `x^α`.
    pub fn add_scaled_term(&mut self, alpha: MultiIndex, v: &[Rational], s: &Rational) {
        let scaled: Vec<Rational> = v.iter().map(|x| x * s).collect();
        self.add_term(alpha, &scaled);
    }

    pub fn add(&self, other: &VVLaurent) -> VVLaurent {
        let mut out = self.clone();
        for (a, v) in &other.terms {
            out.add_term(a.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &VVLaurent) -> VVLaurent {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> VVLaurent {
        let mut out = Self::zero(self.nvars, self.dim);
        if s.is_zero() {
            return out;
        }
        for (a, v) in &self.terms {
            out.terms
                .insert(a.clone(), v.iter().map(|x| x * s).collect());
        }
        out
    }

    /// `Σ x^α ⊗ Mv`
    pub fn apply_matrix(&self, m: &QMatrix) -> VVLaurent {
        let mut out = Self::zero(self.nvars, self.dim);
        for (a, v) in &self.terms {
            out.add_term(a.clone(), &m.matvec(v));
        }
        out
    }

    /// `x^β f`
    pub fn mul_monomial(&self, beta: &MultiIndex) -> VVLaurent {
        VVLaurent {
            nvars: self.nvars,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.add(beta), v.clone()))
                .collect(),
        }
    }

    /// `x_i f`, 1-based.
    pub fn mul_var(&self, i: usize) -> VVLaurent {
        self.mul_monomial(&MultiIndex::unit(self.nvars, i))
    }

    /// `e_N^m f`: every exponent shifted by `m·(1,…,1)`.
    pub fn e_shift(&self, m: i64) -> VVLaurent {
        VVLaurent {
            nvars: self.nvars,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.shift(m), v.clone()))
                .collect(),
        }
    }

    /// `f(xw)`, without acting on the coefficients.
    pub fn substitute(&self, w: &Permutation) -> VVLaurent {
        VVLaurent {
            nvars: self.nvars,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.act(w), v.clone()))
                .collect(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_composition)
    }

    pub fn check_polynomial(&self) -> Result<()> {
        match self.terms.keys().find(|a| !a.is_composition()) {
            Some(a) => Err(Error::LaurentInput(a.0.clone())),
            None => Ok(()),
        }
    }

    /// The total degrees occurring, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(MultiIndex::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Smallest entry over all exponents (0 for the zero polynomial).
    pub fn min_exponent(&self) -> i64 {
        self.terms.keys().map(MultiIndex::min).min().unwrap_or(0)
    }

    /// The exponent that is ◁-above every other exponent, if there is one.
    pub fn leading_exponent(&self) -> Option<&MultiIndex> {
        let top = self
            .terms
            .keys()
            .find(|a| self.terms.keys().all(|b| b == *a || triangular_lt(b, a)))?;
        Some(top)
    }
}

impl Serialize for VVLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exponent: &'a [i64],
            coeff: Vec<String>,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (a, v) in &self.terms {
            seq.serialize_element(&Term {
                exponent: a.entries(),
                coeff: v.iter().map(format_rational).collect(),
            })?;
        }
        seq.end()
    }
}

/// `(f(x) - f(x(i,j)))/(x_i - x_j)` applied to one monomial, by geometric expansion.
/// Returns the exponents with their signs.
fn divided_difference(alpha: &MultiIndex, i: usize, j: usize) -> Vec<(MultiIndex, i64)> {
    let (a, b) = (alpha[i], alpha[j]);
    let mut out = Vec::new();
    let mut e = alpha.0.clone();
    if a > b {
        for t in 0..a - b {
            e[i] = a - 1 - t;
            e[j] = b + t;
            out.push((MultiIndex(e.clone()), 1));
        }
    } else if a < b {
        for t in 0..b - a {
            e[i] = a + t;
            e[j] = b - 1 - t;
            out.push((MultiIndex(e.clone()), -1));
        }
    }
    out
}

/// Operators on `P_τ` for a fixed module and κ.
#[derive(Clone, Copy, Debug)]
pub struct Ops<'a> {
    pub rep: &'a Rep,
    pub kappa: &'a Rational,
}

impl<'a> Ops<'a> {
    pub fn new(rep: &'a Rep, kappa: &'a Rational) -> Self {
        Ops { rep, kappa }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        let n = self.rep.nvars();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        Ok(())
    }

    /// `wf(x) = σ(w) f(xw)`
    pub fn group_action(&self, w: &Permutation, f: &VVLaurent) -> VVLaurent {
        let m = self.rep.rep_matrix(w);
        let mut out = VVLaurent::zero(f.nvars, f.dim);
        for (a, v) in &f.terms {
            out.add_term(a.act(w), &m.matvec(v));
        }
        out
    }

    /// `s_i f`
    pub fn simple(&self, i: usize, f: &VVLaurent) -> VVLaurent {
        self.group_action(&Permutation::simple(self.rep.nvars(), i), f)
    }

    /// `D_i f = ∂_i f + κ Σ_{j≠i} σ(i,j) (f(x) - f(x(i,j)))/(x_i - x_j)`
    pub fn dunkl(&self, i: usize, f: &VVLaurent) -> Result<VVLaurent> {
        self.check_index(i)?;
        f.check_polynomial()?;
        let n = self.rep.nvars();
        let ii = i - 1;
        let mut out = VVLaurent::zero(f.nvars, f.dim);
        // collect the divided differences per j before applying σ(i,j)
        let mut per_j: Vec<VVLaurent> = vec![VVLaurent::zero(f.nvars, f.dim); n];
        for (a, v) in &f.terms {
            if a[ii] > 0 {
                let mut e = a.clone();
                e.0[ii] -= 1;
                out.add_scaled_term(e, v, &Rational::from_integer(a[ii].into()));
            }
            for (jj, acc) in per_j.iter_mut().enumerate() {
                if jj == ii {
                    continue;
                }
                for (e, sign) in divided_difference(a, ii, jj) {
                    if sign > 0 {
                        acc.add_term(e, v);
                    } else {
                        acc.add_scaled_term(e, v, &-Rational::one());
                    }
                }
            }
        }
        for (jj, dd) in per_j.iter().enumerate() {
            if jj == ii || dd.is_zero() {
                continue;
            }
            let s = self.rep.transposition(i, jj + 1);
            let part = dd.apply_matrix(&s).scale(self.kappa);
            out = out.add(&part);
        }
        Ok(out)
    }

    /// `U_i f = D_i(x_i f) - κ Σ_{j<i} σ(i,j) f(x(i,j))`
    pub fn cherednik(&self, i: usize, f: &VVLaurent) -> Result<VVLaurent> {
        self.check_index(i)?;
        f.check_polynomial()?;
        let mut out = self.dunkl(i, &f.mul_var(i))?;
        let n = self.rep.nvars();
        for j in 1..i {
            let t = Permutation::transposition(n, i, j);
            let g = self.group_action(&t, f).scale(self.kappa);
            out = out.sub(&g);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, q};
    use crate::tableaux::Partition;
    use proptest::prelude::*;

    fn rep(p: &[usize]) -> Rep {
        Rep::new(&Partition::new(p.to_vec()).unwrap())
    }

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    /// A polynomial from `(exponent, tableau, integer coefficient)` triples.
    fn poly(rep: &Rep, terms: &[(Vec<i64>, usize, i64)]) -> VVLaurent {
        let mut f = VVLaurent::zero(rep.nvars(), rep.dim());
        for (a, t, c) in terms {
            f.add_scaled_term(MultiIndex(a.clone()), &rep.unit(*t), &int(*c));
        }
        f
    }

    fn arb_poly(
        nvars: usize,
        dim: usize,
        deg: i64,
    ) -> impl Strategy<Value = Vec<(Vec<i64>, usize, i64)>> {
        proptest::collection::vec(
            (proptest::collection::vec(0..=deg, nvars), 0..dim, -3i64..4),
            1..4,
        )
    }

    #[test]
    fn constants_are_annihilated() {
        let r = rep(&[2, 1]);
        let k = q(1, 4);
        let ops = Ops::new(&r, &k);
        for i in 1..=3 {
            assert!(ops.dunkl(i, &VVLaurent::constant(&r, 0)).unwrap().is_zero());
        }
    }

    #[test]
    fn dunkl_on_x1() {
        let r = rep(&[2, 1]);
        let k = q(1, 4);
        let ops = Ops::new(&r, &k);
        let jm = r.jucys_murphy(1).unwrap();
        for t in 0..r.dim() {
            let f = VVLaurent::monomial(mi(&[1, 0, 0]), r.unit(t));
            let lhs = ops.dunkl(1, &f).unwrap().mul_var(1);
            let mut op = QMatrix::identity(r.dim());
            op.add_scaled(&jm, &k);
            let rhs = VVLaurent::monomial(mi(&[1, 0, 0]), op.matvec(&r.unit(t)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cherednik_on_constants() {
        let r = rep(&[3, 1]);
        let k = q(1, 4);
        let ops = Ops::new(&r, &k);
        for t in 0..r.dim() {
            let one = VVLaurent::constant(&r, t);
            for i in 1..=4 {
                let c = int(r.tableau(t).c(i));
                let want = one.scale(&(Rational::one() + &k * c));
                assert_eq!(ops.cherednik(i, &one).unwrap(), want);
            }
        }
    }

    #[test]
    fn laurent_input_rejected() {
        let r = rep(&[2, 1]);
        let k = q(1, 4);
        let ops = Ops::new(&r, &k);
        let f = VVLaurent::monomial(mi(&[-1, 0, 1]), r.unit(0));
        assert!(matches!(ops.dunkl(1, &f), Err(Error::LaurentInput(_))));
        assert!(matches!(ops.cherednik(2, &f), Err(Error::LaurentInput(_))));
        assert!(matches!(
            ops.dunkl(4, &VVLaurent::constant(&r, 0)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn group_action_single_term() {
        let r = rep(&[2, 1]);
        let k = q(1, 4);
        let ops = Ops::new(&r, &k);
        let f = VVLaurent::monomial(mi(&[1, 0, 0]), r.unit(0));
        let s1 = r.simple_reflection(1).unwrap();
        assert_eq!(
            ops.simple(1, &f),
            VVLaurent::monomial(mi(&[0, 1, 0]), s1.matvec(&r.unit(0)))
        );
        assert_eq!(ops.group_action(&Permutation::identity(3), &f), f);
    }

    #[test]
    fn e_shift_examples() {
        let r = rep(&[2, 1]);
        let one = VVLaurent::constant(&r, 1);
        assert_eq!(
            one.e_shift(1),
            VVLaurent::monomial(mi(&[1, 1, 1]), r.unit(1))
        );
        assert_eq!(one.e_shift(0), one);
        assert_eq!(one.e_shift(3).e_shift(-3), one);
    }

    #[test]
    fn divided_difference_is_exact() {
        // (x_i - x_j)·dd = x^α - x^{(i,j)α}, checked by expanding the product
        for alpha in [mi(&[3, 0, 1]), mi(&[0, 2, 2]), mi(&[1, 4, 0])] {
            for (i, j) in [(0, 1), (1, 0), (0, 2), (1, 2)] {
                let mut prod: BTreeMap<MultiIndex, i64> = BTreeMap::new();
                for (e, s) in divided_difference(&alpha, i, j) {
                    let mut up = e.clone();
                    up.0[i] += 1;
                    *prod.entry(up).or_default() += s;
                    let mut uj = e.clone();
                    uj.0[j] += 1;
                    *prod.entry(uj).or_default() -= s;
                }
                let mut want: BTreeMap<MultiIndex, i64> = BTreeMap::new();
                *want.entry(alpha.clone()).or_default() += 1;
                let mut sw = alpha.clone();
                sw.0.swap(i, j);
                *want.entry(sw).or_default() -= 1;
                prod.retain(|_, v| *v != 0);
                want.retain(|_, v| *v != 0);
                assert_eq!(prod, want, "{alpha:?} {i} {j}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn action_composes(a in 0usize..6, b in 0usize..6, terms in arb_poly(3, 2, 3)) {
            let r = rep(&[2, 1]);
            let k = q(1, 4);
            let ops = Ops::new(&r, &k);
            let f = poly(&r, &terms);
            let all = Permutation::all(3);
            let (w1, w2) = (&all[a], &all[b]);
            let lhs = ops.group_action(&w1.compose(w2), &f);
            let rhs = ops.group_action(w1, &ops.group_action(w2, &f));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dunkl_operators_commute(terms in arb_poly(4, 3, 2), i in 1usize..5, j in 1usize..5) {
            let r = rep(&[3, 1]);
            let k = q(1, 4);
            let ops = Ops::new(&r, &k);
            let f = poly(&r, &terms);
            let lhs = ops.dunkl(i, &ops.dunkl(j, &f).unwrap()).unwrap();
            let rhs = ops.dunkl(j, &ops.dunkl(i, &f).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cherednik_operators_commute(terms in arb_poly(3, 2, 3), i in 1usize..4, j in 1usize..4) {
            let r = rep(&[2, 1]);
            let k = q(1, 4);
            let ops = Ops::new(&r, &k);
            let f = poly(&r, &terms);
            let lhs = ops.cherednik(i, &ops.cherednik(j, &f).unwrap()).unwrap();
            let rhs = ops.cherednik(j, &ops.cherednik(i, &f).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cherednik_and_e_shift(terms in arb_poly(3, 2, 2), i in 1usize..4, m in 0i64..3) {
            let r = rep(&[2, 1]);
            let k = q(-1, 5);
            let ops = Ops::new(&r, &k);
            let f = poly(&r, &terms);
            let lhs = ops.cherednik(i, &f.e_shift(m)).unwrap();
            let rhs = f.e_shift(m).scale(&int(m)).add(&ops.cherednik(i, &f).unwrap().e_shift(m));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reflection_relations(terms in arb_poly(3, 2, 3), i in 1usize..3) {
            let r = rep(&[2, 1]);
            let k = q(1, 4);
            let ops = Ops::new(&r, &k);
            let f = poly(&r, &terms);
            // s_i U_i s_i = U_{i+1} + κ s_i
            let lhs = ops.simple(i, &ops.cherednik(i, &ops.simple(i, &f)).unwrap());
            let rhs = ops.cherednik(i + 1, &f).unwrap().add(&ops.simple(i, &f).scale(&k));
            prop_assert_eq!(lhs, rhs);
            // U_i s_i = s_i U_{i+1} + κ
            let lhs = ops.cherednik(i, &ops.simple(i, &f)).unwrap();
            let rhs = ops.simple(i, &ops.cherednik(i + 1, &f).unwrap()).add(&f.scale(&k));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dunkl_equivariance(terms in arb_poly(4, 3, 2), w in 0usize..24, i in 1usize..5) {
            let r = rep(&[3, 1]);
            let k = q(2, 7);
            let ops = Ops::new(&r, &k);
            let f = poly(&r, &terms);
            let w = &Permutation::all(4)[w];
            let lhs = ops.group_action(w, &ops.dunkl(i, &f).unwrap());
            let rhs = ops.dunkl(w.image(i - 1) + 1, &ops.group_action(w, &f)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_behaviour(alpha in proptest::collection::vec(0i64..3, 3), t in 0usize..2, i in 1usize..4) {
            let r = rep(&[2, 1]);
            let k = q(1, 4);
            let ops = Ops::new(&r, &k);
            let a = MultiIndex(alpha);
            let d = a.degree();
            let f = VVLaurent::monomial(a, r.unit(t));
            let df = ops.dunkl(i, &f).unwrap();
            prop_assert!(df.is_zero() || df.degrees() == vec![d - 1]);
            prop_assert_eq!(ops.cherednik(i, &f).unwrap().degrees(), vec![d]);
        }
    }
}
