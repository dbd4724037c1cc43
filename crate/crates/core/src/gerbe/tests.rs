use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cech::{CxValue, Partition};
use crate::complex::standard::cycle_graph;
use crate::connection::build_from_integer_class;
use crate::scenarios::{rp2_circle_bundle, star_covered, SphereCover};

fn class_k(sc: &SphereCover, k: i64) -> GerbePresentation<f64> {
    let psi = Partition::hat(&sc.cover).unwrap();
    let g = build_from_integer_class(&sc.cover, &sc.generator_cocycle(k), &psi).unwrap();
    GerbePresentation::new(sc.cover.clone(), g).unwrap()
}

fn random_rho(cover: &CoverNerve, seed: u64) -> CxCochain<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CxCochain::from_log_fn(cover, 1, |_, _| Complex::new(rng.gen_range(-0.5..0.5), rng.gen_range(-4.0..4.0)))
}

#[test]
fn trivial_gerbe() {
    let sc = SphereCover::new(4).unwrap();
    let gp = GerbePresentation::<f64>::trivial(sc.cover.clone());
    assert_eq!(dd_cocycle(&gp).unwrap().class_vector, vec![0]);
    let t = trivialize(&gp).unwrap();
    assert_eq!(t.residual, 0.0);
}

#[test]
fn classes_and_obstruction() {
    let sc = SphereCover::new(4).unwrap();
    for k in -2..=3 {
        let gp = class_k(&sc, k);
        let class = dd_cocycle(&gp).unwrap();
        assert_eq!(class.class_vector, vec![k]);
        assert_eq!(class.is_trivial(&sc.cover.nerve), k == 0);
        match trivialize(&gp) {
            Ok(t) => assert!(k == 0 && t.residual < 1e-9),
            Err(e) => assert!(k != 0 && matches!(e, Error::ClassNonTrivial)),
        }
    }
}

#[test]
fn coboundary_gerbes_trivialize() {
    let sc = SphereCover::new(4).unwrap();
    for seed in 0..5 {
        let gp = GerbePresentation::from_sections(sc.cover.clone(), random_rho(&sc.cover, seed)).unwrap();
        assert_eq!(dd_cocycle(&gp).unwrap().class_vector, vec![0]);
        assert!(trivialize(&gp).unwrap().residual < 1e-9);
    }
}

#[test]
fn class_ignores_sections() {
    let sc = SphereCover::new(4).unwrap();
    let gp = class_k(&sc, 2);
    for seed in 0..5 {
        let moved = gp.resection(&random_rho(&sc.cover, 10 + seed));
        assert!(moved.g.distance(&gp.g) > 1e-3);
        assert_eq!(dd_cocycle(&moved).unwrap().class_vector, vec![2]);
    }
}

#[test]
fn products_add() {
    let sc = SphereCover::new(4).unwrap();
    let (a, b) = (class_k(&sc, 1), class_k(&sc, 2));
    assert_eq!(dd_cocycle(&gerbe_product(&a, &b).unwrap()).unwrap().class_vector, vec![3]);
    assert_eq!(dd_cocycle(&gerbe_product(&a, &a.inverse()).unwrap()).unwrap().class_vector, vec![0]);
    let t = GerbePresentation::trivial(sc.cover.clone());
    assert!(gerbe_product(&a, &t).unwrap().g.distance(&a.g) < 1e-15);
}

#[test]
fn product_over_relabelled_cover() {
    let sc = SphereCover::new(4).unwrap();
    // an even relabelling of the charts keeps the nerve orientation
    let perm = [1, 2, 0, 3, 4];
    let charts: Vec<BTreeSet<usize>> = perm.iter().map(|&i| sc.cover.charts[i].clone()).collect();
    let other = Arc::new(CoverNerve::new(sc.cover.base.clone(), charts).unwrap());
    let psi = Partition::hat(&other).unwrap();
    let mut n = vec![0; other.nerve.count(3)];
    n[other.nerve.index_of(&[0, 1, 2, 3]).unwrap()] = 2;
    let b = GerbePresentation::new(other.clone(), build_from_integer_class(&other, &n, &psi).unwrap()).unwrap();
    let p = gerbe_product(&class_k(&sc, 1), &b).unwrap();
    assert_eq!(p.cover.charts, sc.cover.charts);
    assert_eq!(dd_cocycle(&p).unwrap().class_vector, vec![3]);
}

#[test]
fn refinement_must_be_good() {
    let (sd, a) = star_covered(&cycle_graph(3)).unwrap();
    // the circle 0-3-1-5-2-4 covered by arcs of four vertices, then rotated
    let arcs = |v: [[usize; 4]; 3]| v.iter().map(|x| x.iter().copied().collect()).collect::<Vec<BTreeSet<usize>>>();
    let base = Arc::new(sd.complex.clone());
    let c1 = Arc::new(CoverNerve::new(base.clone(), arcs([[0, 3, 1, 5], [1, 5, 2, 4], [2, 4, 0, 3]])).unwrap());
    let c2 = Arc::new(CoverNerve::new(base, arcs([[3, 1, 5, 2], [5, 2, 4, 0], [4, 0, 3, 1]])).unwrap());
    let (x, y) = (GerbePresentation::<f64>::trivial(c1), GerbePresentation::<f64>::trivial(c2));
    assert!(matches!(gerbe_product(&x, &y), Err(Error::RefinementNotGood(_))));
    let z = GerbePresentation::<f64>::trivial(a);
    assert!(gerbe_product(&x, &z).is_ok());
}

#[test]
fn pullbacks() {
    let sc = SphereCover::new(4).unwrap();
    let gp = class_k(&sc, 1);
    let base = sc.cover.base.clone();
    let same = pullback(&gp, base.clone(), |v| v).unwrap();
    assert!(same.g.distance(&gp.g) < 1e-15);
    let swap = sc.sd.induced_map(&sc.sd, |v| match v {
        0 => 1,
        1 => 0,
        v => v,
    });
    let flipped = pullback(&gp, base.clone(), |v| swap[v]).unwrap();
    // the preimage cover is the star cover relabelled by the swap, so the
    // nerve-level class is unchanged while its value on the base flips
    assert_eq!(dd_cocycle(&flipped).unwrap().class_vector, vec![1]);
    let z = sc.fundamental_cycle();
    assert!((base_pairing(&gp, &z).unwrap() - 1.0).norm() < 1e-8);
    assert!((base_pairing(&flipped, &z).unwrap() + 1.0).norm() < 1e-8);
    let constant = pullback(&gp, base, |_| 7).unwrap();
    assert!(dd_cocycle(&constant).unwrap().is_trivial(&constant.cover.nerve));
    assert!(base_pairing(&constant, &z).unwrap().norm() < 1e-8);
    let points = Arc::new(crate::complex::OrientedSimplicialComplex::new(&[[0], [1]]).unwrap());
    assert!(matches!(pullback(&gp, points, |_| 0), Err(Error::PullbackCoverNotGood(_))));
}

fn coboundary_transitions(ext: &CentralExtension<f64>, cover: &CoverNerve, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h: Vec<usize> = (0..cover.level_len(0)).map(|_| rng.gen_range(0..ext.order())).collect();
    cover.nerve.simplices(1).iter().map(|e| ext.table[ext.group_inverse(h[e[0]])][h[e[1]]]).collect()
}

#[test]
fn split_and_trivial_bundles_lift() {
    let sc = SphereCover::new(3).unwrap();
    let split = CentralExtension::<f64>::split(cyclic_table(4)).unwrap();
    let pb = PrincipalBundleData::new(&split, sc.cover.clone(), coboundary_transitions(&split, &sc.cover, 1)).unwrap();
    let lift = lift_exists(&split, &pb).unwrap().unwrap();
    assert!(lift.z.distance_from_one() < 1e-12);
    let heis = CentralExtension::<f64>::heisenberg();
    let pb = PrincipalBundleData::new(&heis, sc.cover.clone(), vec![0; sc.cover.level_len(1)]).unwrap();
    let naive: Vec<Element<f64>> = pb.transitions.iter().map(|&g| (g, CxValue::one())).collect();
    assert!(lifting_obstruction(&heis, &pb, &naive).unwrap().g.distance_from_one() < 1e-15);
}

#[test]
fn heisenberg_lifts_over_spheres_and_circles() {
    let heis = CentralExtension::<f64>::heisenberg();
    let (_, circle) = star_covered(&cycle_graph(4)).unwrap();
    let sphere = SphereCover::new(3).unwrap().cover;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..4 {
        let free: Vec<usize> = (0..circle.level_len(1)).map(|_| rng.gen_range(0..4)).collect();
        for pb in [
            PrincipalBundleData::new(&heis, circle.clone(), free).unwrap(),
            PrincipalBundleData::new(&heis, sphere.clone(), coboundary_transitions(&heis, &sphere, seed)).unwrap(),
        ] {
            let lift = lift_exists(&heis, &pb).unwrap().expect("obstruction vanishes");
            assert!(lift_defect(&heis, &pb, &lift) < 1e-9);
        }
    }
}

#[test]
fn rp2_circle_does_not_lift() {
    let (heis, pb) = rp2_circle_bundle().unwrap();
    let naive: Vec<Element<f64>> = pb.transitions.iter().map(|&g| (g, CxValue::one())).collect();
    let e = lifting_obstruction(&heis, &pb, &naive).unwrap();
    let class = dd_cocycle(&e).unwrap();
    assert!(class.class_vector.iter().all(|&c| c == 0));
    assert!(!class.is_trivial(&pb.cover.nerve));
    assert!(lift_exists(&heis, &pb).unwrap().is_none());
    // another lift changes e by a coboundary only
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let other: Vec<Element<f64>> = naive.iter().map(|&(g, _)| (g, CxValue::unit(rng.gen_range(-3.0..3.0)))).collect();
    let e2 = lifting_obstruction(&heis, &pb, &other).unwrap();
    assert!(!dd_cocycle(&e2).unwrap().is_trivial(&pb.cover.nerve));
    let mut wrong = naive.clone();
    wrong[0].0 ^= 1;
    assert!(matches!(lifting_obstruction(&heis, &pb, &wrong), Err(Error::NotALift(_))));
}

#[test]
fn extension_validation() {
    let t = cyclic_table(2);
    let minus = CxValue::unit(std::f64::consts::PI);
    assert!(CentralExtension::new(t.clone(), vec![vec![CxValue::one(); 2], vec![CxValue::one(), minus]]).is_ok());
    let bad = vec![vec![CxValue::one(), minus], vec![CxValue::one(); 2]];
    assert!(CentralExtension::new(t, bad).is_err());
}
