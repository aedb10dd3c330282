use std::sync::Arc;

use vvjack::coeffs::CoeffStore;
use vvjack::form::{gram_report, FormContext};
use vvjack::kernel::{KernelEvaluator, TorusPoint};
use vvjack::laurent::VVLaurent;
use vvjack::scalars::make_kappa;
use vvjack::tableaux::{Partition, Rep};
use vvjack::ybgraph::YbGraph;

fn built(p: &[usize], num: i64, den: i64, grade: usize) -> CoeffStore {
    let shape = Partition::new(p.to_vec()).unwrap();
    let kappa = make_kappa(num, den, &shape).unwrap();
    let mut s = CoeffStore::new(Arc::new(Rep::new(&shape)), kappa, grade);
    s.ensure_grade(grade).unwrap();
    s
}

#[test]
fn reloaded_store_gives_the_same_form_and_kernel() {
    let s = built(&[2, 1], 1, 4, 3);
    let t = CoeffStore::from_json(&s.to_json(), 3).unwrap();
    for n in 0..=3 {
        assert_eq!(s.grade(n), t.grade(n));
    }
    let a = serde_json::to_string(&gram_report(&s, 2).unwrap()).unwrap();
    let b = serde_json::to_string(&gram_report(&t, 2).unwrap()).unwrap();
    assert_eq!(a, b);

    let x = TorusPoint::from_angles(&[0.3, 1.9, -2.2]);
    let ka = KernelEvaluator::new(&s, 3).unwrap().kernel(3, &x).unwrap();
    let kb = KernelEvaluator::new(&t, 3).unwrap().kernel(3, &x).unwrap();
    assert_eq!(ka.max_abs_diff(&kb), 0.0);
}

#[test]
fn coordinate_multiplication_is_an_isometry_on_nsjps() {
    let s = built(&[3, 1], 1, 5, 3);
    let ctx = FormContext::new(&s);
    let mut g = YbGraph::new(s.rep().clone(), s.kappa().clone());
    let nodes = g.build_up_to(1).unwrap();
    let polys: Vec<&VVLaurent> = nodes.iter().map(|n| &n.poly).collect();
    for i in 1..=4 {
        let shifted: Vec<VVLaurent> = polys.iter().map(|p| p.mul_var(i)).collect();
        let refs: Vec<&VVLaurent> = shifted.iter().collect();
        assert_eq!(ctx.gram(&refs).unwrap(), ctx.gram(&polys).unwrap(), "x_{i}");
    }
}

#[test]
fn extending_a_store_matches_building_it_at_once() {
    let direct = built(&[2, 2], -1, 5, 3);
    let mut staged = built(&[2, 2], -1, 5, 1);
    staged = CoeffStore::from_json(&staged.to_json(), 3).unwrap();
    staged.ensure_grade(3).unwrap();
    for n in 0..=3 {
        assert_eq!(direct.grade(n), staged.grade(n));
    }
}
