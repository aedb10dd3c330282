//! Partitions, reverse standard Young tableaux and the Murphy (seminormal)
//! representation of the symmetric group on their span.
//!
//! Matrices act on column vectors of coordinates in the *unnormalized* RSYT
//! basis: column `t` of `σ(w)` holds the coordinates of `σ(w)T_t`. The basis
//! is orthogonal for `⟨·,·⟩₀` but not orthonormal, so these matrices satisfy
//! `σ(w)ᵀ D σ(w) = D` with `D = diag(⟨T,T⟩₀)` instead of being orthogonal.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, QMatrix};
use crate::perm::Permutation;
use crate::scalars::{int, q, to_f64, Complex, Rational};

/// A partition with at least two rows and two columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        let ok = parts.len() >= 2
            && parts[0] >= 2
            && parts.iter().all(|&p| p > 0)
            && parts.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition { parts })
        } else {
            Err(Error::InvalidShape(parts))
        }
    }

    /// Parses `"3,1,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("not a partition: {s:?}")))?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of rows ℓ(τ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// N = |τ|.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Hook length of the cell in row `i`, column `j` (both 1-based).
    pub fn hook(&self, i: usize, j: usize) -> usize {
        let below = self.parts[i..].iter().filter(|&&p| p >= j).count();
        self.parts[i - 1] - j + below + 1
    }

    /// `h_τ = τ₁ + ℓ(τ) - 1`.
    pub fn max_hook(&self) -> usize {
        self.hook(1, 1)
    }

    pub fn hook_product(&self) -> u128 {
        let mut prod = 1u128;
        for (i, &p) in self.parts.iter().enumerate() {
            for j in 1..=p {
                prod *= self.hook(i + 1, j) as u128;
            }
        }
        prod
    }

    /// `N! / ∏ hooks`.
    pub fn dimension(&self) -> usize {
        let fact: u128 = (1..=self.size() as u128).product();
        (fact / self.hook_product()) as usize
    }

    /// Sum of the contents `j - i` over all cells.
    pub fn content_sum(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| (1..=p).map(|j| j as i64 - (i as i64 + 1)).sum::<i64>())
            .sum()
    }

    /// All valid shapes (≥ 2 rows and columns) of size `n`.
    pub fn all_of_size(n: usize) -> Vec<Partition> {
        partitions_of(n)
            .into_iter()
            .filter_map(|p| Partition::new(p).ok())
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Every partition of `n` (no shape restriction), in reverse lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A reverse standard Young tableau: entries `1..=N` decreasing along rows
/// and down columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rsyt {
    rows: Vec<Vec<usize>>,
    content: Vec<i64>,
    #[serde(skip)]
    inv: usize,
}

impl Rsyt {
    /// Builds from rows and checks the reverse-standard conditions.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = rows.iter().map(Vec::len).sum();
        let mut content = vec![i64::MIN; n];
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v == 0 || v > n || content[v - 1] != i64::MIN {
                    return Err(Error::Parse(format!("bad tableau entries {rows:?}")));
                }
                content[v - 1] = c as i64 - r as i64;
                let left_ok = c == 0 || row[c - 1] > v;
                let up_ok = r == 0 || rows[r - 1].get(c).is_some_and(|&u| u > v);
                if !left_ok || !up_ok {
                    return Err(Error::Parse(format!("not reverse standard: {rows:?}")));
                }
            }
        }
        let inv = inversions(&content);
        Ok(Rsyt { rows, content, inv })
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// `[c(1,T), …, c(N,T)]`
    pub fn content(&self) -> &[i64] {
        &self.content
    }

    /// `c(i,T)` for 1-based `i`.
    pub fn c(&self, i: usize) -> i64 {
        self.content[i - 1]
    }

    /// `inv(T) = #{(i,j) : i < j, c(i,T) - c(j,T) <= -2}`
    pub fn inv(&self) -> usize {
        self.inv
    }

    pub fn size(&self) -> usize {
        self.content.len()
    }
}

fn inversions(content: &[i64]) -> usize {
    let n = content.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| content[i] - content[j] <= -2)
        .count()
}

/// All RSYT of the shape, ordered by lexicographically decreasing content vector.
pub fn enumerate_rsyt(shape: &Partition) -> Vec<Rsyt> {
    let n = shape.size();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); shape.len()];
    let mut out = Vec::new();

    fn fill(v: usize, shape: &[usize], rows: &mut Vec<Vec<usize>>, out: &mut Vec<Rsyt>) {
        if v == 0 {
            out.push(Rsyt::from_rows(rows.clone()).expect("valid by construction"));
            return;
        }
        for r in 0..shape.len() {
            let len = rows[r].len();
            let addable = len < shape[r] && (r == 0 || rows[r - 1].len() > len);
            if addable {
                rows[r].push(v);
                fill(v - 1, shape, rows, out);
                rows[r].pop();
            }
        }
    }

    fill(n, shape.parts(), &mut rows, &mut out);
    out.sort_by(|a, b| b.content.cmp(&a.content));
    out
}

/// The root tableau `T₀`: `N, N-1, …, 1` entered column by column.
pub fn t_zero(shape: &Partition) -> Rsyt {
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); shape.len()];
    let mut v = shape.size();
    for col in 0..shape.parts()[0] {
        for (r, &len) in shape.parts().iter().enumerate() {
            if len > col {
                rows[r].push(v);
                v -= 1;
            }
        }
    }
    Rsyt::from_rows(rows).expect("column filling is reverse standard")
}

/// `⟨T,T⟩₀ = ∏_{i<j, c(i,T) <= c(j,T)-2} (1 - 1/(c(i,T)-c(j,T))²)`
pub fn norm0(t: &Rsyt) -> Rational {
    let c = t.content();
    let mut acc = Rational::one();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            let d = c[i] - c[j];
            if d <= -2 {
                acc *= Rational::one() - q(1, d * d);
            }
        }
    }
    acc
}

/// The module `V_τ` with its RSYT basis and memoized representation matrices.
pub struct Rep {
    shape: Partition,
    basis: Vec<Rsyt>,
    by_content: HashMap<Vec<i64>, usize>,
    norms: Vec<Rational>,
    sqrt_norms: Vec<f64>,
    simple: Vec<Arc<QMatrix>>,
    t0: usize,
    memo: RwLock<HashMap<Permutation, Arc<QMatrix>>>,
}

impl std::fmt::Debug for Rep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Rep")
            .field("shape", &self.shape)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl Rep {
    pub fn new(shape: &Partition) -> Self {
        let basis = enumerate_rsyt(shape);
        let by_content = basis
            .iter()
            .enumerate()
            .map(|(i, t)| (t.content.clone(), i))
            .collect::<HashMap<_, _>>();
        let norms: Vec<Rational> = basis.iter().map(norm0).collect();
        let sqrt_norms = norms.iter().map(|d| to_f64(d).sqrt()).collect();
        let t0 = by_content[t_zero(shape).content()];
        let mut rep = Rep {
            shape: shape.clone(),
            basis,
            by_content,
            norms,
            sqrt_norms,
            simple: Vec::new(),
            t0,
            memo: RwLock::new(HashMap::new()),
        };
        rep.simple = (1..shape.size())
            .map(|i| Arc::new(rep.build_simple(i)))
            .collect();
        rep
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// N
    pub fn nvars(&self) -> usize {
        self.shape.size()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Rsyt] {
        &self.basis
    }

    pub fn tableau(&self, t: usize) -> &Rsyt {
        &self.basis[t]
    }

    /// Index of `T₀` in the basis.
    pub fn t0(&self) -> usize {
        self.t0
    }

    pub fn index_of_content(&self, content: &[i64]) -> Option<usize> {
        self.by_content.get(content).copied()
    }

    /// The diagonal `D` of `⟨T,T⟩₀` values.
    pub fn norms(&self) -> &[Rational] {
        &self.norms
    }

    pub fn norm_matrix(&self) -> QMatrix {
        QMatrix::diagonal(&self.norms)
    }

    /// Index of `T` with entries `i` and `i+1` interchanged (1-based `i`),
    /// if that is again an RSYT.
    pub fn swapped(&self, t: usize, i: usize) -> Option<usize> {
        let mut c = self.basis[t].content.clone();
        c.swap(i - 1, i);
        self.index_of_content(&c)
    }

    fn build_simple(&self, i: usize) -> QMatrix {
        let d = self.dim();
        let mut m = QMatrix::zeros(d, d);
        for (t, tab) in self.basis.iter().enumerate() {
            let diff = tab.c(i) - tab.c(i + 1);
            match diff {
                1 => m[(t, t)] = Rational::one(),
                -1 => m[(t, t)] = -Rational::one(),
                _ => {
                    let b = q(1, diff);
                    let partner = self
                        .swapped(t, i)
                        .expect("|c(i)-c(i+1)| >= 2 allows the swap");
                    m[(partner, t)] = if diff >= 2 {
                        Rational::one()
                    } else {
                        Rational::one() - &b * &b
                    };
                    m[(t, t)] = b;
                }
            }
        }
        m
    }

    /// Matrix of `s_i = (i, i+1)`, `1 <= i <= N-1`.
    pub fn simple_reflection(&self, i: usize) -> Result<Arc<QMatrix>> {
        let max = self.nvars() - 1;
        if i == 0 || i > max {
            return Err(Error::IndexOutOfRange { index: i, max });
        }
        Ok(self.simple[i - 1].clone())
    }

    /// Product of simple reflection matrices along a word `[a₁, …, a_k]`.
    pub fn word_matrix(&self, word: &[usize]) -> Result<QMatrix> {
        let mut m = QMatrix::identity(self.dim());
        for &i in word {
            m = &m * &*self.simple_reflection(i)?;
        }
        Ok(m)
    }

    /// `σ(w)`, memoized.
    pub fn rep_matrix(&self, w: &Permutation) -> Arc<QMatrix> {
        assert_eq!(w.len(), self.nvars(), "permutation of the wrong degree");
        if let Some(m) = self.memo.read().expect("memo lock").get(w) {
            return m.clone();
        }
        let m = Arc::new(
            self.word_matrix(&w.reduced_word())
                .expect("reduced words only use valid indices"),
        );
        self.memo
            .write()
            .expect("memo lock")
            .entry(w.clone())
            .or_insert(m)
            .clone()
    }

    /// `σ((i,j))`, 1-based; `(i,i)` is the identity.
    pub fn transposition(&self, i: usize, j: usize) -> Arc<QMatrix> {
        self.rep_matrix(&Permutation::transposition(self.nvars(), i, j))
    }

    /// `σ(ω_i) = Σ_{j>i} σ((i,j))`, which is `diag(c(i,T))`.
    pub fn jucys_murphy(&self, i: usize) -> Result<QMatrix> {
        let n = self.nvars();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        let mut m = QMatrix::zeros(self.dim(), self.dim());
        for j in i + 1..=n {
            m.add_scaled(&self.transposition(i, j), &Rational::one());
        }
        Ok(m)
    }

    /// `τ(w) = D^{1/2} σ(w) D^{-1/2}`, the matrix in the orthonormal basis.
    pub fn orthonormal(&self, w: &Permutation) -> CMatrix {
        let s = self.rep_matrix(w);
        let mut m = s.to_complex();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                m[(i, j)] *= Complex::new(self.sqrt_norms[i] / self.sqrt_norms[j], 0.0);
            }
        }
        m
    }

    /// `D^{1/2}` as float.
    pub fn sqrt_norms(&self) -> &[f64] {
        &self.sqrt_norms
    }

    /// Contents `c(i,T)` of entry `i` for every basis tableau, as rationals.
    pub fn content_column(&self, i: usize) -> Vec<Rational> {
        self.basis.iter().map(|t| int(t.c(i))).collect()
    }

    /// Basis vector `T_t`.
    pub fn unit(&self, t: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[t] = Rational::one();
        v
    }
}
