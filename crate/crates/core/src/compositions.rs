//! Multi-index combinatorics: rank permutations, dominance and the order ◁,
//! the affine map Φ, the graded sets `Z_{N,n}` and canonical orbit representatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// An integer `N`-vector. Compositions have nonnegative entries; Laurent
/// exponents and the indices `γ ∈ Z_N` may have any sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn new(entries: Vec<i64>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `ε_i`, 1-based.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        MultiIndex(v)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α| = Σ α_i`
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn abs_sum(&self) -> i64 {
        self.0.iter().map(|a| a.abs()).sum()
    }

    pub fn is_composition(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn is_partition(&self) -> bool {
        self.is_composition() && self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn check_composition(&self) -> Result<()> {
        if self.is_composition() {
            Ok(())
        } else {
            Err(Error::NegativeEntry(self.0.clone()))
        }
    }

    /// `α⁺`, the non-increasing rearrangement.
    pub fn sorted_desc(&self) -> MultiIndex {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        MultiIndex(v)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| -a).collect())
    }

    /// Every entry shifted by `m`.
    pub fn shift(&self, m: i64) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a + m).collect())
    }

    pub fn min(&self) -> i64 {
        self.0.iter().copied().min().unwrap_or(0)
    }

    /// `wα`
    pub fn act(&self, w: &Permutation) -> MultiIndex {
        MultiIndex(w.act_on_index(&self.0))
    }

    /// `s_i α` for 1-based `i`.
    pub fn swap(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.swap(i - 1, i);
        MultiIndex(v)
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex(v)
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// `r(i) = #{j : a_j > a_i} + #{j <= i : a_j = a_i}`, for any integer vector.
/// `r·a` is the non-increasing rearrangement, with ties kept in order.
pub fn sorting_perm(a: &[i64]) -> Permutation {
    let images = (0..a.len())
        .map(|i| {
            let bigger = a.iter().filter(|&&x| x > a[i]).count();
            let tied_before = a[..i].iter().filter(|&&x| x == a[i]).count();
            bigger + tied_before
        })
        .collect();
    Permutation::from_images(images)
}

/// `r_α` for a composition.
pub fn rank_perm(alpha: &MultiIndex) -> Result<Permutation> {
    alpha.check_composition()?;
    Ok(sorting_perm(&alpha.0))
}

/// `Φ(a₁,…,a_N) = (a₂,…,a_N,a₁+1)`
pub fn phi(alpha: &MultiIndex) -> MultiIndex {
    let a = &alpha.0;
    let mut v: Vec<i64> = a[1..].to_vec();
    v.push(a[0] + 1);
    MultiIndex(v)
}

pub fn phi_inverse(beta: &MultiIndex) -> MultiIndex {
    let b = &beta.0;
    let n = b.len();
    let mut v = vec![b[n - 1] - 1];
    v.extend_from_slice(&b[..n - 1]);
    MultiIndex(v)
}

/// Dominance `a ≼ b`: equal totals and every partial sum of `a` at most that of `b`.
pub fn dominance_le(a: &MultiIndex, b: &MultiIndex) -> bool {
    if a.degree() != b.degree() {
        return false;
    }
    let (mut sa, mut sb) = (0, 0);
    for (x, y) in a.0.iter().zip(&b.0) {
        sa += x;
        sb += y;
        if sa > sb {
            return false;
        }
    }
    true
}

/// Strict dominance `a ≺ b`.
pub fn dominance_lt(a: &MultiIndex, b: &MultiIndex) -> bool {
    a != b && dominance_le(a, b)
}

/// `α ◁ β`: `|α| = |β|` and either `α⁺ ≺ β⁺`, or `α⁺ = β⁺` and `α ≺ β`.
pub fn triangular_lt(alpha: &MultiIndex, beta: &MultiIndex) -> bool {
    if alpha.degree() != beta.degree() {
        return false;
    }
    let (ap, bp) = (alpha.sorted_desc(), beta.sorted_desc());
    if ap == bp {
        dominance_lt(alpha, beta)
    } else {
        dominance_lt(&ap, &bp)
    }
}

/// `Z_{N,n}`: all `γ` with `Σγ_i = 0` and `Σ|γ_i| = 2n`, lexicographically ascending.
pub fn enumerate_z(nvars: usize, n: usize) -> Vec<MultiIndex> {
    fn go(left: usize, pos: i64, neg: i64, cur: &mut Vec<i64>, out: &mut Vec<MultiIndex>) {
        if left == 0 {
            if pos == 0 && neg == 0 {
                out.push(MultiIndex(cur.clone()));
            }
            return;
        }
        for v in -neg..=pos {
            cur.push(v);
            go(left - 1, pos - v.max(0), neg + v.min(0), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(nvars, n as i64, n as i64, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `#Z_{N,n} = Σ_{j=1}^{N-1} C(N,j) C(n-1,j-1) C(N-j+n-1,n)`, and 1 for `n = 0`.
pub fn count_z(nvars: usize, n: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    let (big_n, n) = (nvars as u128, n as u128);
    (1..big_n)
        .map(|j| binomial(big_n, j) * binomial(n - 1, j - 1) * binomial(big_n - j + n - 1, n))
        .sum()
}

/// The ◁-minimal `γ` with `γ^ν = nu`, where `nu` vanishes exactly on positions `1..=k`.
pub fn minimal_gamma(nu: &MultiIndex, k: usize) -> Result<MultiIndex> {
    let v = &nu.0;
    let bad = || Error::BadSupport { nu: v.clone(), k };
    if k == 0 || k > v.len() {
        return Err(bad());
    }
    if v[..k].iter().any(|&x| x != 0) || v[k..].iter().any(|&x| x <= 0) {
        return Err(bad());
    }
    let n = nu.degree();
    let (p, m) = (n / k as i64, (n % k as i64) as usize);
    let mut g: Vec<i64> = (0..k).map(|i| if i < m { p + 1 } else { p }).collect();
    g.extend(v[k..].iter().map(|x| -x));
    Ok(MultiIndex(g))
}

/// `S(α) = ½ Σ_{i<j} (|α_i-α_j| + |α_i-α_j+1| - 1)`
pub fn steps_count(alpha: &MultiIndex) -> usize {
    let a = &alpha.0;
    let mut twice = 0i64;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let d = a[i] - a[j];
            twice += d.abs() + (d + 1).abs() - 1;
        }
    }
    (twice / 2) as usize
}

/// The non-increasing sort of `γ ∈ Z_N` and the stable sorting permutation
/// `w` with `wγ = canonical`.
pub fn canonicalize(gamma: &MultiIndex) -> Result<(MultiIndex, Permutation)> {
    if gamma.degree() != 0 {
        return Err(Error::NotGraded(gamma.0.clone()));
    }
    let w = sorting_perm(&gamma.0);
    Ok((gamma.act(&w), w))
}

/// `γ = π - ν` with `π = max(γ,0)` and `ν = -min(γ,0)` entrywise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiNuSplit {
    pub pi: MultiIndex,
    pub nu: MultiIndex,
}

pub fn split_pi_nu(gamma: &MultiIndex) -> PiNuSplit {
    PiNuSplit {
        pi: MultiIndex(gamma.0.iter().map(|&g| g.max(0)).collect()),
        nu: MultiIndex(gamma.0.iter().map(|&g| (-g).max(0)).collect()),
    }
}

/// Partitions of `n` with at most `k` parts, zero-padded to length `k`,
/// lexicographically ascending (so the most balanced one comes first).
pub fn bounded_partitions(n: usize, k: usize) -> Vec<Vec<i64>> {
    fn go(rest: i64, max: i64, slots: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if slots == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // the remaining slots can absorb at most slots*max
        let lo = (rest + slots as i64 - 1) / slots as i64;
        for v in lo..=rest.min(max) {
            cur.push(v);
            go(rest - v, v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n as i64, n as i64, k, &mut Vec::new(), &mut out);
    out
}

/// All compositions of `n` into `len` nonnegative parts, lexicographically descending.
pub fn compositions(n: usize, len: usize) -> Vec<MultiIndex> {
    fn go(rest: i64, slots: usize, cur: &mut Vec<i64>, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            cur.push(rest);
            out.push(MultiIndex(cur.clone()));
            cur.pop();
            return;
        }
        for v in (0..=rest).rev() {
            cur.push(v);
            go(rest - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    go(n as i64, len, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn rank_perm_examples() {
        let a = mi(&[1, 2, 1, 4]);
        let r = rank_perm(&a).unwrap();
        assert_eq!(r.one_line(), vec![3, 2, 4, 1]);
        assert_eq!(a.act(&r), mi(&[4, 2, 1, 1]));
        assert_eq!(
            rank_perm(&mi(&[0, 3, 5, 0])).unwrap().one_line(),
            vec![3, 2, 1, 4]
        );
        assert!(rank_perm(&mi(&[3, 3, 1, 0])).unwrap().is_identity());
        assert!(matches!(
            rank_perm(&mi(&[1, -1])),
            Err(Error::NegativeEntry(_))
        ));
    }

    #[test]
    fn phi_examples() {
        let a = mi(&[0, 3, 5, 0]);
        let b = phi(&a);
        assert_eq!(b, mi(&[3, 5, 0, 1]));
        assert_eq!(rank_perm(&b).unwrap().one_line(), vec![2, 1, 4, 3]);
        assert_eq!(phi(&mi(&[0, 0, 0])), mi(&[0, 0, 1]));
        assert_eq!(phi_inverse(&b), a);
    }

    #[test]
    fn triangular_examples() {
        assert!(triangular_lt(&mi(&[3, 2, 1]), &mi(&[0, 2, 4])));
        assert!(triangular_lt(&mi(&[0, 2, 4]), &mi(&[4, 0, 2])));
        assert!(!triangular_lt(&mi(&[4, 1, 1]), &mi(&[3, 3, 0])));
        assert!(!triangular_lt(&mi(&[3, 3, 0]), &mi(&[4, 1, 1])));
        assert!(!triangular_lt(&mi(&[1, 2, 0]), &mi(&[1, 2, 0])));
    }

    #[test]
    fn z_grade_one_by_brute_force() {
        let mut brute = Vec::new();
        for a in -1..=1 {
            for b in -1..=1 {
                for c in -1..=1 {
                    let g = mi(&[a, b, c]);
                    if g.degree() == 0 && g.abs_sum() == 2 {
                        brute.push(g);
                    }
                }
            }
        }
        assert_eq!(enumerate_z(3, 1), brute);
        assert_eq!(brute.len(), 6);
        assert_eq!(enumerate_z(4, 0), vec![MultiIndex::zeros(4)]);
    }

    #[test]
    fn count_closed_forms() {
        assert_eq!(count_z(4, 3), 92);
        assert_eq!(count_z(2, 5), 2);
        assert_eq!(count_z(5, 2), 110);
        for n in 1..=8u128 {
            assert_eq!(count_z(2, n as usize), 2);
            assert_eq!(count_z(3, n as usize), 6 * n);
            assert_eq!(count_z(4, n as usize), 10 * n * n + 2);
            assert_eq!(3 * count_z(5, n as usize), 5 * n * (7 * n * n + 5));
        }
    }

    #[test]
    fn count_matches_enumeration() {
        for nv in 2..=6 {
            for n in 0..=5 {
                assert_eq!(
                    enumerate_z(nv, n).len() as u128,
                    count_z(nv, n),
                    "N={nv} n={n}"
                );
            }
        }
    }

    #[test]
    fn minimal_gamma_examples() {
        assert_eq!(
            minimal_gamma(&mi(&[0, 0, 1, 2]), 2).unwrap(),
            mi(&[2, 1, -1, -2])
        );
        assert_eq!(minimal_gamma(&mi(&[0, 0, 4]), 2).unwrap(), mi(&[2, 2, -4]));
        assert!(matches!(
            minimal_gamma(&mi(&[0, 1, 0]), 1),
            Err(Error::BadSupport { .. })
        ));
    }

    #[test]
    fn minimal_gamma_is_minimal_by_exhaustion() {
        for nv in 2..=5 {
            for n in 1..=4 {
                for g in enumerate_z(nv, n) {
                    let nu = split_pi_nu(&g).nu;
                    let k = nu.0.iter().take_while(|&&x| x == 0).count();
                    if nu.0[k..].contains(&0) {
                        continue;
                    }
                    let g0 = minimal_gamma(&nu, k).unwrap();
                    assert_eq!(split_pi_nu(&g0).nu, nu);
                    let (p, p0) = (split_pi_nu(&g).pi, split_pi_nu(&g0).pi);
                    // the order is taken among partition-shaped positive parts
                    if g != g0 && p.is_partition() {
                        assert!(triangular_lt(&p0, &p), "{g0:?} not below {g:?}");
                        assert!(!triangular_lt(&p, &p0));
                    }
                }
            }
        }
    }

    #[test]
    fn steps_examples() {
        assert_eq!(steps_count(&mi(&[1, 0])), 1);
        assert_eq!(steps_count(&mi(&[0, 1])), 0);
        assert_eq!(steps_count(&mi(&[2, 2, 2])), 0);
        assert_eq!(steps_count(&mi(&[1, 0, 0])), 2);
    }

    #[test]
    fn canonicalize_examples() {
        let (c, w) = canonicalize(&mi(&[-1, 2, -1])).unwrap();
        assert_eq!(c, mi(&[2, -1, -1]));
        assert_eq!(mi(&[-1, 2, -1]).act(&w), c);
        assert_eq!(c.act(&w.inverse()), mi(&[-1, 2, -1]));
        let (c, _) = canonicalize(&mi(&[1, -1, 0])).unwrap();
        assert_eq!(c, mi(&[1, 0, -1]));
        let (c, w) = canonicalize(&mi(&[2, 0, -2])).unwrap();
        assert_eq!(c, mi(&[2, 0, -2]));
        assert!(w.is_identity());
        assert!(matches!(
            canonicalize(&mi(&[1, 0, 0])),
            Err(Error::NotGraded(_))
        ));
    }

    #[test]
    fn bounded_partitions_order() {
        assert_eq!(
            bounded_partitions(4, 3),
            vec![vec![2, 1, 1], vec![2, 2, 0], vec![3, 1, 0], vec![4, 0, 0]]
        );
        assert_eq!(bounded_partitions(0, 2), vec![vec![0, 0]]);
        assert_eq!(
            compositions(2, 2),
            vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]
        );
    }

    fn composition(n: usize) -> impl Strategy<Value = MultiIndex> {
        proptest::collection::vec(0i64..5, n).prop_map(MultiIndex)
    }

    proptest! {
        #[test]
        fn rank_sorts(a in composition(5)) {
            let r = rank_perm(&a).unwrap();
            prop_assert_eq!(a.act(&r), a.sorted_desc());
            prop_assert_eq!(r.is_identity(), a.is_partition());
        }

        #[test]
        fn rank_of_simple_swap(a in composition(5), i in 1usize..5) {
            prop_assume!(a[i - 1] != a[i]);
            let lhs = rank_perm(&a.swap(i)).unwrap();
            let rhs = rank_perm(&a).unwrap().compose(&Permutation::simple(5, i));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rank_of_phi(a in composition(5)) {
            let lhs = rank_perm(&phi(&a)).unwrap();
            let rhs = rank_perm(&a).unwrap().compose(&Permutation::cycle(5));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(phi_inverse(&phi(&a)), a);
        }

        #[test]
        fn triangular_is_strict_partial_order(a in composition(4), b in composition(4), c in composition(4)) {
            prop_assert!(!triangular_lt(&a, &a));
            if triangular_lt(&a, &b) {
                prop_assert!(!triangular_lt(&b, &a));
                if triangular_lt(&b, &c) {
                    prop_assert!(triangular_lt(&a, &c));
                }
            }
        }

        #[test]
        fn canonical_pi_is_partition(g in proptest::collection::vec(-3i64..4, 5)) {
            let mut g = g;
            let s: i64 = g.iter().sum();
            g[0] -= s;
            let (c, w) = canonicalize(&MultiIndex(g.clone())).unwrap();
            prop_assert!(split_pi_nu(&c).pi.is_partition());
            prop_assert_eq!(c.act(&w.inverse()), MultiIndex(g));
        }
    }
}
