//! Nonsymmetric Jack polynomials `ζ_{α,T}` built along the Yang–Baxter graph.
//!
//! Nodes are memoized by `(α, T)`. A node is derived from a predecessor:
//! - `α = 0`: a tableau step from a tableau with one fewer inversion, rooted at `T₀`;
//! - `α` with a descent `α_i > α_{i+1}`: a step from `s_iα`;
//! - `α` non-decreasing and nonzero: a jump from `Φ⁻¹α`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::compositions::{compositions, phi_inverse, rank_perm, steps_count, MultiIndex};
use crate::error::{Error, Result};
use crate::laurent::{Ops, VVLaurent};
use crate::perm::Permutation;
use crate::scalars::{format_rational, int, q, KappaParam, Rational};
use crate::tableaux::Rep;

/// `ξ_{α,T}(i) = α_i + 1 + κ c(r_α(i), T)`
pub fn spectral_vector(
    rep: &Rep,
    alpha: &MultiIndex,
    t: usize,
    kappa: &Rational,
) -> Result<Vec<Rational>> {
    let r = rank_perm(alpha)?;
    let tab = rep.tableau(t);
    Ok((0..alpha.len())
        .map(|i| int(alpha[i] + 1) + kappa * int(tab.c(r.image(i) + 1)))
        .collect())
}

/// Which predecessor to use when several are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Lowest index first.
    #[default]
    First,
    /// Highest index first.
    Last,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphNode {
    pub alpha: MultiIndex,
    pub tableau: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub spectral: Vec<Rational>,
    pub rank: Permutation,
    pub poly: VVLaurent,
    /// Number of jumps and steps on the path actually used to reach this node.
    pub jumps: usize,
    pub steps: usize,
}

fn ser_rationals<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// `(|α|, S(α) + inv(T) - inv(T₀))`
pub fn path_length(rep: &Rep, alpha: &MultiIndex, t: usize) -> (usize, usize) {
    let inv = rep.tableau(t).inv() as i64 - rep.tableau(rep.t0()).inv() as i64;
    (
        alpha.degree() as usize,
        (steps_count(alpha) as i64 + inv) as usize,
    )
}

/// Memoizing builder of NSJPs for one module and one κ.
pub struct YbGraph {
    rep: Arc<Rep>,
    kappa: KappaParam,
    schedule: Schedule,
    cache: HashMap<(MultiIndex, usize), Arc<GraphNode>>,
}

impl YbGraph {
    pub fn new(rep: Arc<Rep>, kappa: KappaParam) -> Self {
        Self::with_schedule(rep, kappa, Schedule::First)
    }

    pub fn with_schedule(rep: Arc<Rep>, kappa: KappaParam, schedule: Schedule) -> Self {
        assert_eq!(
            rep.shape(),
            kappa.shape(),
            "kappa validated for another shape"
        );
        YbGraph {
            rep,
            kappa,
            schedule,
            cache: HashMap::new(),
        }
    }

    pub fn rep(&self) -> &Arc<Rep> {
        &self.rep
    }

    pub fn kappa(&self) -> &KappaParam {
        &self.kappa
    }

    pub fn cached(&self) -> usize {
        self.cache.len()
    }

    fn pick(&self, candidates: impl DoubleEndedIterator<Item = usize>) -> Option<usize> {
        match self.schedule {
            Schedule::First => candidates.into_iter().next(),
            Schedule::Last => candidates.into_iter().next_back(),
        }
    }

    /// Builds (or fetches) `ζ_{α,T}`.
    pub fn build(&mut self, alpha: &MultiIndex, t: usize) -> Result<Arc<GraphNode>> {
        alpha.check_composition()?;
        let n = self.rep.nvars();
        if alpha.len() != n {
            return Err(Error::Dimension(format!(
                "multi-index of length {} for N = {n}",
                alpha.len()
            )));
        }
        if t >= self.rep.dim() {
            return Err(Error::IndexOutOfRange {
                index: t,
                max: self.rep.dim() - 1,
            });
        }
        let key = (alpha.clone(), t);
        if let Some(node) = self.cache.get(&key) {
            return Ok(node.clone());
        }
        let node = Arc::new(self.derive(alpha, t)?);
        self.cache.insert(key, node.clone());
        Ok(node)
    }

    fn node(
        &self,
        alpha: MultiIndex,
        t: usize,
        poly: VVLaurent,
        jumps: usize,
        steps: usize,
    ) -> Result<GraphNode> {
        Ok(GraphNode {
            spectral: spectral_vector(&self.rep, &alpha, t, self.kappa.value())?,
            rank: rank_perm(&alpha)?,
            alpha,
            tableau: t,
            poly,
            jumps,
            steps,
        })
    }

    fn derive(&mut self, alpha: &MultiIndex, t: usize) -> Result<GraphNode> {
        let rep = self.rep.clone();
        let kappa = self.kappa.value().clone();
        let ops = Ops::new(&rep, &kappa);
        let n = rep.nvars();

        if alpha.degree() == 0 {
            if t == rep.t0() {
                return self.node(alpha.clone(), t, VVLaurent::constant(&rep, t), 0, 0);
            }
            // T = T'^{(i)} with c(i,T') - c(i+1,T') >= 2
            let tab = rep.tableau(t);
            let i = self
                .pick((1..n).filter(|&i| tab.c(i) - tab.c(i + 1) <= -2))
                .ok_or_else(|| Error::Format(format!("tableau {t} has no predecessor")))?;
            let prev_t = rep.swapped(t, i).expect("swap of a case-3 pair");
            let prev = self.build(alpha, prev_t)?;
            let pt = rep.tableau(prev_t);
            let b = q(1, pt.c(i) - pt.c(i + 1));
            let poly = ops.simple(i, &prev.poly).sub(&prev.poly.scale(&b));
            return self.node(alpha.clone(), t, poly, prev.jumps, prev.steps + 1);
        }

        let descent = self.pick((1..n).filter(|&i| alpha[i - 1] > alpha[i]));
        if let Some(i) = descent {
            // ζ_α = s_i ζ_β - κ/(ξ_β(i) - ξ_β(i+1)) ζ_β with β = s_iα, β_i < β_{i+1}
            let beta = alpha.swap(i);
            let prev = self.build(&beta, t)?;
            let gap = &prev.spectral[i - 1] - &prev.spectral[i];
            if gap.is_zero() {
                return Err(Error::SpectralCollision {
                    alpha: beta.0.clone(),
                    tableau: t,
                    i,
                });
            }
            let c = &kappa / gap;
            let poly = ops.simple(i, &prev.poly).sub(&prev.poly.scale(&c));
            return self.node(alpha.clone(), t, poly, prev.jumps, prev.steps + 1);
        }

        // non-decreasing: α = Φβ and ζ_α = x_N w₀⁻¹ ζ_β
        let beta = phi_inverse(alpha);
        let prev = self.build(&beta, t)?;
        let w0inv = Permutation::cycle(n).inverse();
        let poly = ops.group_action(&w0inv, &prev.poly).mul_var(n);
        self.node(alpha.clone(), t, poly, prev.jumps + 1, prev.steps)
    }

    /// Every node of degree `d`, in the order (compositions descending, then tableau).
    pub fn build_layer(&mut self, d: usize) -> Result<Vec<Arc<GraphNode>>> {
        let mut out = Vec::new();
        for alpha in compositions(d, self.rep.nvars()) {
            for t in 0..self.rep.dim() {
                out.push(self.build(&alpha, t)?);
            }
        }
        Ok(out)
    }

    /// All nodes with `|α| <= d`.
    pub fn build_up_to(&mut self, d: usize) -> Result<Vec<Arc<GraphNode>>> {
        let mut out = Vec::new();
        for k in 0..=d {
            out.extend(self.build_layer(k)?);
        }
        Ok(out)
    }

    /// `ζ_{α,T}` for any integer `α`: `e_N^{-m} ζ_{α+m1,T}`.
    pub fn nsjp_laurent(&mut self, alpha: &MultiIndex, t: usize) -> Result<VVLaurent> {
        let m = (-alpha.min()).max(0);
        Ok(self.build(&alpha.shift(m), t)?.poly.e_shift(-m))
    }

    /// `max_i |U_i ζ - ξ(i) ζ| == 0`, checked exactly.
    pub fn is_eigenfunction(&self, node: &GraphNode) -> Result<bool> {
        let ops = Ops::new(&self.rep, self.kappa.value());
        for i in 1..=self.rep.nvars() {
            let lhs = ops.cherednik(i, &node.poly)?;
            let rhs = node.poly.scale(&node.spectral[i - 1]);
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The ◁-leading term of `ζ_{α,T}` is `x^α ⊗ σ(r_α⁻¹)T`.
    pub fn has_leading_term(&self, node: &GraphNode) -> bool {
        let Some(top) = node.poly.leading_exponent() else {
            return false;
        };
        let want = self
            .rep
            .rep_matrix(&node.rank.inverse())
            .matvec(&self.rep.unit(node.tableau));
        top == &node.alpha && node.poly.coeff(top) == Some(&want)
    }
}

/// Checks that no two nodes of the same degree share a spectral vector.
pub fn spectral_vectors_distinct(nodes: &[Arc<GraphNode>]) -> bool {
    let mut seen: HashMap<&[Rational], ()> = HashMap::new();
    nodes.iter().all(|n| seen.insert(&n.spectral, ()).is_none())
}
