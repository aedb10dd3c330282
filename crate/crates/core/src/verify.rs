//! The invariant suite: each check returns a named pass/fail record with a
//! short detail string. `run_suite` strings them together for one shape and κ.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeffs::{CoeffStore, GradeOrder};
use crate::compositions::{compositions, count_z, enumerate_z, phi, MultiIndex};
use crate::diffsys::{gamma_by_contents, gamma_by_rows, Connection, Transport};
use crate::error::Result;
use crate::form::{gram_report, FormContext};
use crate::kernel::{identity_report, kernel_report};
use crate::matrix::QMatrix;
use crate::perm::Permutation;
use crate::scalars::{int, q, KappaParam, Rational};
use crate::tableaux::{Partition, Rep};
use crate::ybgraph::{path_length, spectral_vectors_distinct, Schedule, YbGraph};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Involutions, braid relations, `σᵀDσ = D`, Jucys–Murphy diagonality, hook formula.
pub fn representation(rep: &Rep) -> Result<Check> {
    let n = rep.nvars();
    let d = rep.dim();
    let id = QMatrix::identity(d);
    let dm = rep.norm_matrix();
    let mut failures = Vec::new();
    let s: Vec<Arc<QMatrix>> = (1..n)
        .map(|i| rep.simple_reflection(i))
        .collect::<Result<_>>()?;
    for i in 0..n - 1 {
        if &*s[i] * &*s[i] != id {
            failures.push(format!("s{} not involutive", i + 1));
        }
        if &(&s[i].transpose() * &dm) * &*s[i] != dm {
            failures.push(format!("s{} not D-orthogonal", i + 1));
        }
        for j in i + 1..n - 1 {
            let ok = if j == i + 1 {
                &(&*s[i] * &*s[j]) * &*s[i] == &(&*s[j] * &*s[i]) * &*s[j]
            } else {
                &*s[i] * &*s[j] == &*s[j] * &*s[i]
            };
            if !ok {
                failures.push(format!("braid s{} s{}", i + 1, j + 1));
            }
        }
    }
    for i in 1..=n {
        if rep.jucys_murphy(i)? != QMatrix::diagonal(&rep.content_column(i)) {
            failures.push(format!("omega_{i} not diag(c({i},T))"));
        }
    }
    if rep.dim() != rep.shape().dimension() {
        failures.push(format!(
            "{} tableaux, hook formula {}",
            rep.dim(),
            rep.shape().dimension()
        ));
    }
    let detail = if failures.is_empty() {
        format!("shape {} dim {d}", rep.shape())
    } else {
        failures.join("; ")
    };
    Ok(Check::new("representation", failures.is_empty(), detail))
}

/// `#Z_{N,n}` by formula against enumeration, and the small-`N` closed forms.
pub fn counting(max_vars: usize, max_n: usize) -> Check {
    let mut failures = Vec::new();
    for nv in 2..=max_vars {
        for n in 0..=max_n {
            let c = count_z(nv, n);
            if c != enumerate_z(nv, n).len() as u128 {
                failures.push(format!("N={nv} n={n}"));
            }
            let nn = n as u128;
            let closed = match nv {
                _ if n == 0 => Some(1),
                2 => Some(2),
                3 => Some(6 * nn),
                4 => Some(10 * nn * nn + 2),
                5 => Some(5 * nn * (7 * nn * nn + 5) / 3),
                _ => None,
            };
            if closed.is_some_and(|v| v != c) {
                failures.push(format!("closed form N={nv} n={n}"));
            }
        }
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!("N <= {max_vars}, n <= {max_n}")
    } else {
        failures.join("; ")
    };
    Check::new("counting", ok, detail)
}

/// Eigenfunction property, leading term, path lengths, distinct spectral
/// vectors and independence of the predecessor schedule.
pub fn nsjp(rep: Arc<Rep>, kappa: &KappaParam, max_degree: usize) -> Result<Check> {
    let mut g = YbGraph::new(rep.clone(), kappa.clone());
    let mut h = YbGraph::with_schedule(rep.clone(), kappa.clone(), Schedule::Last);
    let mut failures = Vec::new();
    let mut count = 0;
    for k in 0..=max_degree {
        let layer = g.build_layer(k)?;
        if !spectral_vectors_distinct(&layer) {
            failures.push(format!("repeated spectral vector in degree {k}"));
        }
        for node in &layer {
            count += 1;
            let tag = format!("{:?} T{}", node.alpha.entries(), node.tableau);
            if !g.is_eigenfunction(node)? {
                failures.push(format!("{tag} not an eigenfunction"));
            }
            if !g.has_leading_term(node) {
                failures.push(format!("{tag} leading term"));
            }
            if (node.jumps, node.steps) != path_length(&rep, &node.alpha, node.tableau) {
                failures.push(format!("{tag} path length"));
            }
            if h.build(&node.alpha, node.tableau)?.poly != node.poly {
                failures.push(format!("{tag} depends on path"));
            }
        }
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!("{count} nodes")
    } else {
        failures.join("; ")
    };
    Ok(Check::new("nsjp", ok, detail))
}

/// Gram matrix of all `ζ_{α,T}`, `|α| <= max_degree`: diagonal with the closed-form
/// norms, plus the jump isometry.
pub fn gram(store: &CoeffStore, max_degree: usize) -> Result<Check> {
    let report = gram_report(store, max_degree)?;
    let mut failures = Vec::new();
    if !report.diagonal {
        failures.push("off-diagonal entries".to_string());
    }
    for e in report.entries.iter().filter(|e| e.norm != e.expected) {
        failures.push(format!("norm of {:?} T{}", e.alpha.entries(), e.tableau));
    }
    let ctx = FormContext::new(store);
    let mut g = YbGraph::new(store.rep().clone(), store.kappa().clone());
    for e in report
        .entries
        .iter()
        .filter(|e| e.alpha.degree() < max_degree as i64)
    {
        let jumped = g.build(&phi(&e.alpha), e.tableau)?;
        if ctx.pair(&jumped.poly, &jumped.poly)? != e.norm {
            failures.push(format!(
                "jump isometry at {:?} T{}",
                e.alpha.entries(),
                e.tableau
            ));
        }
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!(
            "{} polynomials, degree <= {max_degree}",
            report.entries.len()
        )
    } else {
        failures.join("; ")
    };
    Ok(Check::new("gram", ok, detail))
}

/// `A_{-γ} = A_γᵀ` and `S_N` covariance in the carried form, for every `γ`
/// of grade `<= max_grade`.
pub fn coeff_symmetries(store: &CoeffStore, max_grade: usize) -> Result<Check> {
    let nv = store.rep().nvars();
    let perms = Permutation::all(nv);
    let mut failures = Vec::new();
    let mut count = 0;
    for k in 0..=max_grade {
        for gamma in enumerate_z(nv, k) {
            count += 1;
            if !store.adjoint_holds(&gamma)? {
                failures.push(format!("adjoint {:?}", gamma.entries()));
            }
            for w in &perms {
                if !store.covariance_holds(&gamma, w)? {
                    failures.push(format!(
                        "covariance {:?} w={:?}",
                        gamma.entries(),
                        w.one_line()
                    ));
                }
            }
        }
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!("{count} coefficients")
    } else {
        failures.join("; ")
    };
    Ok(Check::new("coefficient symmetries", ok, detail))
}

/// Self-adjointness residuals at `samples` random `(α, β, i)`, `|α| = |β| <= max_degree`.
pub fn self_adjointness(
    store: &CoeffStore,
    max_degree: usize,
    samples: usize,
    seed: u64,
) -> Result<Check> {
    let nv = store.rep().nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layers: Vec<Vec<MultiIndex>> = (0..=max_degree).map(|d| compositions(d, nv)).collect();
    let mut failures = Vec::new();
    for _ in 0..samples {
        let layer = &layers[rng.gen_range(0..=max_degree)];
        let a = layer.choose(&mut rng).expect("nonempty layer");
        let b = layer.choose(&mut rng).expect("nonempty layer");
        let i = rng.gen_range(1..=nv);
        if !store.selfadjoint_residual(a, b, i)?.is_zero() {
            failures.push(format!("{:?} {:?} i={i}", a.entries(), b.entries()));
        }
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!("{samples} samples, seed {seed}")
    } else {
        failures.join("; ")
    };
    Ok(Check::new("self-adjointness", ok, detail))
}

/// Three explicit grade-2 relations.
pub fn grade_two(store: &CoeffStore) -> Result<Check> {
    let res = store.grade_two_residuals()?;
    let bad: Vec<String> = res
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(l, _)| l.clone())
        .collect();
    let ok = bad.is_empty();
    let detail = if ok {
        format!("{} relations", res.len())
    } else {
        bad.join("; ")
    };
    Ok(Check::new("grade-2 relations", ok, detail))
}

/// Solving each grade in a different admissible order gives the same matrices.
pub fn order_independence(store: &CoeffStore, max_grade: usize) -> Result<Check> {
    let mut other = CoeffStore::new(store.rep().clone(), store.kappa().clone(), max_grade);
    let mut ok = true;
    for n in 1..=max_grade {
        other.solve_grade_ordered(n, GradeOrder::SquareSum)?;
        ok &= other.grade(n) == store.grade(n);
    }
    Ok(Check::new(
        "recurrence order independence",
        ok,
        format!("grades <= {max_grade}"),
    ))
}

/// PSD, Hermiticity and covariance of `K_n`, `1 <= n <= max_n`. Positivity is
/// asserted only inside `|κ| < 1/h_τ`; outside it the minimum is reported.
pub fn kernel_positivity(
    store: &CoeffStore,
    max_n: usize,
    samples: usize,
    seed: u64,
) -> Result<Check> {
    let mut worst = f64::INFINITY;
    let (mut herm, mut cov, mut x0, mut hom): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for n in 1..=max_n {
        let r = kernel_report(store, n, samples, seed)?;
        worst = worst.min(r.worst_min_eigenvalue);
        herm = herm.max(r.hermiticity_residual);
        cov = cov.max(r.covariance_residual);
        x0 = x0.max(r.x0_commutator);
        hom = hom.max(r.homogeneity_residual);
    }
    let psd = store.kappa().psd_range();
    let symmetric = herm < 1e-10 && cov < 1e-10 && x0 < 1e-10 && hom < 1e-10;
    let ok = symmetric && (!psd || worst >= -1e-9);
    let detail = format!(
        "min eigenvalue {worst:.3e}{}; hermiticity {herm:.1e}, covariance {cov:.1e}, x0 {x0:.1e}, homogeneity {hom:.1e}",
        if psd { "" } else { " (outside |kappa| < 1/h, not asserted)" }
    );
    Ok(Check::new("kernel positivity", ok, detail))
}

/// `|h_n(x̄)h_n(x) − ((N)_n/n!)σ_n^{N−1}(x)|` and `σ >= 0` at random torus points.
pub fn cesaro_identity(nvars: usize, max_n: usize, samples: usize, seed: u64) -> Check {
    let r = identity_report(nvars, max_n, samples, seed);
    let res = r.orders.iter().map(|o| o.max_residual).fold(0.0, f64::max);
    let min_sigma = r
        .orders
        .iter()
        .map(|o| o.min_sigma)
        .fold(f64::INFINITY, f64::min);
    Check::new(
        "cesaro identity",
        r.passed(),
        format!("N={nvars} n<={max_n}: residual {res:.1e}, min sigma {min_sigma:.3e}"),
    )
}

/// A random regular rational point with small numerators and denominators.
pub fn random_regular_point(nvars: usize, rng: &mut impl Rng) -> Vec<Rational> {
    loop {
        let x: Vec<Rational> = (0..nvars)
            .map(|_| q(rng.gen_range(-30..=30), rng.gen_range(1..=9)))
            .collect();
        let distinct = (0..nvars).all(|i| (i + 1..nvars).all(|j| x[i] != x[j]));
        if distinct && x.iter().all(|v| *v != int(0)) {
            return x;
        }
    }
}

/// Exact integrability and Euler identity at `points` random rational points.
pub fn differential(rep: &Rep, kappa: &Rational, points: usize, seed: u64) -> Result<Check> {
    let c = Connection::new(rep);
    let n = rep.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..points {
        let x = random_regular_point(n, &mut rng);
        if !c.euler_residual(&x)?.is_zero() {
            failures.push("euler".to_string());
        }
        for i in 1..=n {
            for j in 1..=n {
                if !c.integrability_residual(i, j, kappa, &x)?.is_zero() {
                    failures.push(format!("integrability ({i},{j})"));
                }
            }
        }
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!("{points} points, seed {seed}")
    } else {
        failures.join("; ")
    };
    Ok(Check::new("differential system", ok, detail))
}

/// The two expressions for `γ` agree on every shape of size `<= max_size`.
pub fn gamma_agreement(max_size: usize) -> Check {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 4..=max_size {
        for s in Partition::all_of_size(n) {
            count += 1;
            if gamma_by_rows(&s) != gamma_by_contents(&s) {
                bad.push(s.to_string());
            }
        }
    }
    let ok = bad.is_empty();
    let detail = if ok {
        format!("{count} shapes")
    } else {
        bad.join("; ")
    };
    Check::new("gamma formulas", ok, detail)
}

/// Transport of `L` around a small square loop in angle space returns to `I`.
pub fn closed_loop(rep: &Rep, kappa: &Rational, steps: usize) -> Result<Check> {
    let n = rep.nvars();
    let centre: Vec<f64> = (0..n).map(|k| -3.0 + 6.0 * k as f64 / n as f64).collect();
    let lp = Transport::square_loop(&centre, 0, 1, 0.3);
    let (_, report) = Transport::new(rep, kappa).polygon(&lp, steps / 4)?;
    Ok(Check::new(
        "closed-loop transport",
        report.defect < 1e-6,
        format!("{} steps, defect {:.1e}", report.steps, report.defect),
    ))
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub kappa: KappaParam,
    pub max_degree: usize,
    pub seed: u64,
    pub samples: usize,
    pub transport_steps: usize,
}

/// Every check for one shape and κ. Coefficient and form checks use a store
/// built to `max_degree`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let shape = cfg.kappa.shape().clone();
    let rep = Arc::new(Rep::new(&shape));
    let nv = rep.nvars();
    let d = cfg.max_degree;
    let mut store = CoeffStore::new(rep.clone(), cfg.kappa.clone(), d);
    store.ensure_grade(d)?;
    let mut out = vec![
        representation(&rep)?,
        counting(nv, d),
        nsjp(rep.clone(), &cfg.kappa, d)?,
        gram(&store, d)?,
        coeff_symmetries(&store, d)?,
        self_adjointness(&store, d, cfg.samples, cfg.seed)?,
    ];
    if d >= 2 {
        out.push(grade_two(&store)?);
    }
    out.push(order_independence(&store, d)?);
    out.push(kernel_positivity(&store, d, cfg.samples, cfg.seed)?);
    out.push(cesaro_identity(nv, d, cfg.samples, cfg.seed));
    out.push(differential(
        &rep,
        cfg.kappa.value(),
        cfg.samples.min(20),
        cfg.seed,
    )?);
    out.push(gamma_agreement(nv));
    if cfg.transport_steps > 0 {
        out.push(closed_loop(&rep, cfg.kappa.value(), cfg.transport_steps)?);
    }
    Ok(out)
}
