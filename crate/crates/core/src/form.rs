//! The torus Hermitian form: closed-form norms of NSJPs and the pairing of
//! arbitrary `V_τ`-valued Laurent polynomials through the coefficient store.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeffs::CoeffStore;
use crate::compositions::{rank_perm, MultiIndex};
use crate::error::{Error, Result};
use crate::laurent::VVLaurent;
use crate::matrix::QMatrix;
use crate::scalars::{int, rational_str, Rational};
use crate::tableaux::Rep;
use crate::ybgraph::YbGraph;

/// `⟨ζ_{λ,T},ζ_{λ,T}⟩_T = ⟨T,T⟩₀ ∏_{i<j} ∏_{ℓ=1}^{λ_i-λ_j} (1 - (κ/(ℓ + κ(c(i,T)-c(j,T))))²)`
pub fn norm_partition(
    rep: &Rep,
    lambda: &MultiIndex,
    t: usize,
    kappa: &Rational,
) -> Result<Rational> {
    if !lambda.is_partition() {
        return Err(Error::Dimension(format!(
            "{:?} is not a partition",
            lambda.0
        )));
    }
    let tab = rep.tableau(t);
    let n = lambda.len();
    let mut acc = rep.norms()[t].clone();
    for i in 0..n {
        for j in i + 1..n {
            let dc = int(tab.c(i + 1) - tab.c(j + 1));
            for l in 1..=lambda[i] - lambda[j] {
                let den = int(l) + kappa * &dc;
                if den.is_zero() {
                    return Err(Error::DegenerateNorm {
                        alpha: lambda.0.clone(),
                        tableau: t,
                    });
                }
                let r = kappa / den;
                acc *= Rational::one() - &r * &r;
            }
        }
    }
    Ok(acc)
}

/// `E_ε(α,T) = ∏_{i<j, α_i<α_j} (1 + εκ/(α_j - α_i + κ(c(r_α(j),T) - c(r_α(i),T))))`
pub fn e_factor(
    rep: &Rep,
    alpha: &MultiIndex,
    t: usize,
    eps: i64,
    kappa: &Rational,
) -> Result<Rational> {
    let r = rank_perm(alpha)?;
    let tab = rep.tableau(t);
    let n = alpha.len();
    let mut acc = Rational::one();
    for i in 0..n {
        for j in i + 1..n {
            if alpha[i] < alpha[j] {
                let dc = tab.c(r.image(j) + 1) - tab.c(r.image(i) + 1);
                let den = int(alpha[j] - alpha[i]) + kappa * int(dc);
                let f = &den + int(eps) * kappa;
                if den.is_zero() || f.is_zero() {
                    return Err(Error::DegenerateNorm {
                        alpha: alpha.0.clone(),
                        tableau: t,
                    });
                }
                acc *= f / den;
            }
        }
    }
    Ok(acc)
}

/// `norm_partition(λ,T) · ∏_i (1 + κc(i,T))_{λ_i}`
pub fn covariant_norm(
    rep: &Rep,
    lambda: &MultiIndex,
    t: usize,
    kappa: &Rational,
) -> Result<Rational> {
    let mut acc = norm_partition(rep, lambda, t, kappa)?;
    let tab = rep.tableau(t);
    for i in 0..lambda.len() {
        let base = Rational::one() + kappa * int(tab.c(i + 1));
        for k in 0..lambda[i] {
            acc *= &base + int(k);
        }
    }
    Ok(acc)
}

/// `(E₁E₋₁)⁻¹ · norm_partition(α⁺,T)`
pub fn expected_norm(
    rep: &Rep,
    alpha: &MultiIndex,
    t: usize,
    kappa: &Rational,
) -> Result<Rational> {
    let e = e_factor(rep, alpha, t, 1, kappa)? * e_factor(rep, alpha, t, -1, kappa)?;
    Ok(norm_partition(rep, &alpha.sorted_desc(), t, kappa)? / e)
}

/// Evaluates the form through a coefficient store, caching pairing matrices.
pub struct FormContext<'a> {
    store: &'a CoeffStore,
    cache: RwLock<HashMap<MultiIndex, Arc<QMatrix>>>,
}

impl<'a> FormContext<'a> {
    pub fn new(store: &'a CoeffStore) -> Self {
        FormContext {
            store,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn store(&self) -> &CoeffStore {
        self.store
    }

    pub fn rep(&self) -> &Rep {
        self.store.rep()
    }

    pub fn kappa(&self) -> &Rational {
        self.store.kappa().value()
    }

    fn g(&self, gamma: &MultiIndex) -> Result<Arc<QMatrix>> {
        if let Some(m) = self.cache.read().expect("cache lock").get(gamma) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.store.pairing(gamma)?);
        self.cache
            .write()
            .expect("cache lock")
            .insert(gamma.clone(), m.clone());
        Ok(m)
    }

    /// `⟨f,g⟩ = Σ_{α,β} f_αᵀ G_{α-β} g_β`. Laurent inputs are fine: only
    /// differences of exponents enter.
    pub fn pair(&self, f: &VVLaurent, g: &VVLaurent) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (a, u) in f.terms() {
            for (b, v) in g.terms() {
                let gamma = a.sub(b);
                if gamma.degree() != 0 {
                    continue;
                }
                let m = self.g(&gamma)?;
                let mv = m.matvec(v);
                for (x, y) in u.iter().zip(&mv) {
                    acc += x * y;
                }
            }
        }
        Ok(acc)
    }

    /// Gram matrix of the given polynomials.
    pub fn gram(&self, polys: &[&VVLaurent]) -> Result<QMatrix> {
        let n = polys.len();
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.pair(polys[i], polys[j])?;
                m[(j, i)] = v.clone();
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }
}

/// One diagonal entry of a Gram report.
#[derive(Clone, Debug, Serialize)]
pub struct GramEntry {
    pub alpha: MultiIndex,
    pub tableau: usize,
    #[serde(with = "rational_str")]
    pub norm: Rational,
    #[serde(with = "rational_str")]
    pub expected: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub max_degree: usize,
    pub diagonal: bool,
    pub all_match: bool,
    pub entries: Vec<GramEntry>,
}

/// Gram matrix of every `ζ_{α,T}`, `|α| <= max_degree`, against the closed-form norms.
pub fn gram_report(store: &CoeffStore, max_degree: usize) -> Result<GramReport> {
    let rep = store.rep().clone();
    let kappa = store.kappa().value();
    let mut g = YbGraph::new(rep.clone(), store.kappa().clone());
    let nodes = g.build_up_to(max_degree)?;
    let ctx = FormContext::new(store);
    let polys: Vec<&VVLaurent> = nodes.iter().map(|n| &n.poly).collect();
    let m = ctx.gram(&polys)?;
    let entries = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            Ok(GramEntry {
                alpha: n.alpha.clone(),
                tableau: n.tableau,
                norm: m[(i, i)].clone(),
                expected: expected_norm(&rep, &n.alpha, n.tableau, kappa)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GramReport {
        max_degree,
        diagonal: m.is_diagonal(),
        all_match: entries.iter().all(|e| e.norm == e.expected),
        entries,
    })
}
