#![allow(dead_code)]

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::sync::Arc;

use gerbe::cech::{CxCochain, CxValue};
use gerbe::Partition;
use gerbe::complex::Cochain;
use gerbe::connection::{build_from_integer_class, shift_curving, DeligneData};
use gerbe::gerbe::{CentralExtension, PrincipalBundleData};
use gerbe::scenarios::SphereCover;
use gerbe::CoverNerve;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Exponent j with x = exp(2πi j / k), if x is a k-th root of unity.
fn root_exponent(x: &CxValue<f64>, k: usize) -> Option<usize> {
    let t = x.angle / TAU * k as f64;
    let j = t.round();
    ((t - j).abs() < 1e-9 && x.log_modulus.abs() < 1e-9).then(|| j.rem_euclid(k as f64) as usize)
}

/// Exhaustive search for ℂ× parts z_αβ ∈ μ_k making ĝ_αβ ĝ_βγ ĝ_γα = 1 on
/// every nerve triangle. Edges of a spanning tree are gauge-fixed to 1; the
/// remaining ones are enumerated depth first, with triangles that have two
/// assigned edges forcing the third.
pub fn brute_force_lift(ext: &CentralExtension<f64>, pb: &PrincipalBundleData, k: usize) -> bool {
    let nerve = &pb.cover.nerve;
    let edges = nerve.simplices(1);
    let edge = |a: usize, b: usize| nerve.index_of(&[a.min(b), a.max(b)]).unwrap();
    let n = ext.order();
    let e_id = (0..n).find(|&e| (0..n).all(|x| ext.table[e][x] == x)).unwrap();
    let inv = |g: usize| (0..n).find(|&h| ext.table[g][h] == e_id).unwrap();
    // multiply (g, j) pairs, j an exponent in μ_k
    let mul = |x: (usize, usize), y: (usize, usize)| -> Option<(usize, usize)> {
        let c = root_exponent(&ext.cocycle[x.0][y.0], k)?;
        Some((ext.table[x.0][y.0], (x.1 + y.1 + c) % k))
    };
    let hat_inv = |x: (usize, usize)| -> Option<(usize, usize)> {
        let gi = inv(x.0);
        let c = root_exponent(&ext.cocycle[x.0][gi], k)?;
        Some((gi, (2 * k - x.1 - c) % k))
    };
    // per triangle: e0 exponent with every z = 1, and the three edges with signs
    let mut constraints = Vec::new();
    for t in nerve.simplices(2) {
        let (a, b, c) = (t[0], t[1], t[2]);
        let gab = (pb.transitions[edge(a, b)], 0);
        let gbc = (pb.transitions[edge(b, c)], 0);
        let gca = match hat_inv((pb.transitions[edge(a, c)], 0)) {
            Some(x) => x,
            None => return false,
        };
        let Some(e) = mul(gab, gbc).and_then(|x| mul(x, gca)) else { return false };
        if e.0 != e_id {
            return false;
        }
        constraints.push((e.1, [(edge(a, b), 1i64), (edge(b, c), 1), (edge(a, c), -1)]));
    }
    let mut assigned: Vec<Option<usize>> = vec![None; edges.len()];
    // spanning tree
    let mut seen = vec![false; pb.cover.level_len(0)];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for e in edges.iter() {
            let w = if e[0] == u { e[1] } else if e[1] == u { e[0] } else { continue };
            if !seen[w] {
                seen[w] = true;
                assigned[edge(u, w)] = Some(0);
                queue.push_back(w);
            }
        }
    }
    let mut by_edge = vec![Vec::new(); edges.len()];
    for (i, (_, es)) in constraints.iter().enumerate() {
        for (e, _) in es {
            by_edge[*e].push(i);
        }
    }
    fn propagate(
        assigned: &mut Vec<Option<usize>>,
        constraints: &[(usize, [(usize, i64); 3])],
        by_edge: &[Vec<usize>],
        start: Vec<usize>,
        k: usize,
    ) -> bool {
        let mut stack = start;
        while let Some(e) = stack.pop() {
            for &ci in &by_edge[e] {
                let (e0, es) = &constraints[ci];
                let open: Vec<_> = es.iter().filter(|(x, _)| assigned[*x].is_none()).collect();
                let sum: i64 = *e0 as i64
                    + es.iter().filter_map(|(x, s)| assigned[*x].map(|v| s * v as i64)).sum::<i64>();
                match open.len() {
                    0 if sum.rem_euclid(k as i64) != 0 => return false,
                    1 => {
                        let (x, s) = open[0];
                        // s·v ≡ −sum
                        let v = (-sum * s).rem_euclid(k as i64) as usize;
                        assigned[*x] = Some(v);
                        stack.push(*x);
                    }
                    _ => {}
                }
            }
        }
        true
    }
    fn search(
        assigned: Vec<Option<usize>>,
        constraints: &[(usize, [(usize, i64); 3])],
        by_edge: &[Vec<usize>],
        k: usize,
    ) -> bool {
        let Some(next) = assigned.iter().position(|x| x.is_none()) else {
            return constraints.iter().all(|(e0, es)| {
                (*e0 as i64 + es.iter().map(|(x, s)| s * assigned[*x].unwrap() as i64).sum::<i64>()).rem_euclid(k as i64) == 0
            });
        };
        (0..k).any(|v| {
            let mut a = assigned.clone();
            a[next] = Some(v);
            propagate(&mut a, constraints, by_edge, vec![next], k) && search(a, constraints, by_edge, k)
        })
    }
    let tree: Vec<usize> = (0..edges.len()).filter(|&e| assigned[e].is_some()).collect();
    if !propagate(&mut assigned, &constraints, &by_edge, tree, k) {
        return false;
    }
    search(assigned, &constraints, &by_edge, k)
}

/// Alternating sum of a 3-cochain on the nerve ∂Δ⁴ over its facets in
/// lexicographic order: the value on the fundamental class.
pub fn sphere_pairing(n: &[i64]) -> i64 {
    n.iter().enumerate().map(|(j, x)| if j % 2 == 0 { *x } else { -x }).sum()
}

pub fn random_rho(cover: &CoverNerve, level: usize, rng: &mut ChaCha8Rng, unitary: bool) -> CxCochain<f64> {
    CxCochain::from_log_fn(cover, level, |_, _| {
        let re = if unitary { 0.0 } else { rng.gen_range(-0.5..0.5) };
        Complex::new(re, rng.gen_range(-4.0..4.0))
    })
}

/// Class-k gerbe with connection, its curvings shifted by a random
/// imaginary 2-form so that single facets carry nonintegral periods.
pub fn shifted_class(sc: &SphereCover, k: i64, rng: &mut ChaCha8Rng) -> DeligneData<f64> {
    let psi = Partition::hat(&sc.cover).unwrap();
    let g = build_from_integer_class(&sc.cover, &sc.generator_cocycle(k), &psi).unwrap();
    let d = gerbe::connection::build_connection(sc.cover.clone(), &g, &psi, Default::default()).unwrap();
    let beta = Cochain {
        degree: 2,
        values: (0..sc.cover.base.count(2)).map(|_| Complex::new(0.0, rng.gen_range(-0.5..0.5))).collect(),
    };
    shift_curving(&d, &beta)
}

pub fn heisenberg_mod(n: usize) -> CentralExtension<f64> {
    let idx = |a: usize, b: usize| a * n + b;
    let mut table = vec![vec![0; n * n]; n * n];
    let mut cocycle = vec![vec![CxValue::one(); n * n]; n * n];
    for a in 0..n {
        for b in 0..n {
            for a2 in 0..n {
                for b2 in 0..n {
                    table[idx(a, b)][idx(a2, b2)] = idx((a + a2) % n, (b + b2) % n);
                    cocycle[idx(a, b)][idx(a2, b2)] = CxValue::unit(TAU * ((b * a2) % n) as f64 / n as f64);
                }
            }
        }
    }
    CentralExtension::new(table, cocycle).unwrap()
}

/// Random G-valued transitions: free on a graph nerve, h_α⁻¹h_β otherwise.
pub fn random_transitions(ext: &CentralExtension<f64>, cover: &Arc<CoverNerve>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = ext.order();
    if cover.nerve.dim() == 1 {
        return (0..cover.level_len(1)).map(|_| rng.gen_range(0..n)).collect();
    }
    let h: Vec<usize> = (0..cover.level_len(0)).map(|_| rng.gen_range(0..n)).collect();
    cover.nerve.simplices(1).iter().map(|e| ext.table[ext.group_inverse(h[e[0]])][h[e[1]]]).collect()
}
