use dyckinfo_core::augindex::ErrorSource;
use dyckinfo_core::math::KAPPA;
use dyckinfo_core::protocol::Party;
use dyckinfo_core::quantumkit::examples::full_send;
use dyckinfo_core::quantumkit::sample::{layout, random_density, random_pure, random_unitary};
use dyckinfo_core::quantumkit::{
    bures, c, fidelity, hybrid_check, q_avg_encoding_gap, q_tradeoff_report, qic_costs, trace_distance,
    uhlmann_unitary, vn_entropy, CMatrix, CQState, DensityState, QProtocolSpec,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `√M` for a positive semidefinite matrix via its spectral decomposition.
fn sqrtm(m: &CMatrix) -> CMatrix {
    let e = m.clone().symmetric_eigen();
    let d = CMatrix::from_diagonal(&e.eigenvalues.map(|v| c(v.max(0.0).sqrt(), 0.0)));
    &e.eigenvectors * d * e.eigenvectors.adjoint()
}

/// Fidelity straight from the definition `‖√P √Q‖_tr`.
fn fidelity_oracle(p: &DensityState, q: &DensityState) -> f64 {
    (sqrtm(p.matrix()) * sqrtm(q.matrix()))
        .svd(false, false)
        .singular_values
        .sum()
}

fn pair(seed: u64, qubits: usize) -> (DensityState, DensityState) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = layout(&[("a", qubits)]);
    let r1 = rng.random_range(1..=1 << qubits);
    let r2 = rng.random_range(1..=1 << qubits);
    (random_density(&mut rng, l.clone(), r1), random_density(&mut rng, l, r2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bures_trace_chain(seed in any::<u64>(), qubits in 1usize..4) {
        let (p, q) = pair(seed, qubits);
        let h = bures(&p, &q).unwrap();
        let td = trace_distance(&p, &q).unwrap();
        prop_assert!((fidelity(&p, &q).unwrap() - fidelity_oracle(&p, &q).min(1.0)).abs() < 1e-7);
        prop_assert!(h * h <= 0.5 * td + 1e-9);
        prop_assert!(0.5 * td <= 2f64.sqrt() * h + 1e-9);
    }

    #[test]
    fn block_convexity_equality(seed in any::<u64>(), blocks in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = layout(&[("q", 2)]);
        let weights: Vec<f64> = (0..blocks).map(|_| rng.random::<f64>() + 0.05).collect();
        let total: f64 = weights.iter().sum();
        let mut ps = Vec::new();
        let mut qs = Vec::new();
        for (x, w) in weights.iter().enumerate() {
            ps.push((x, w / total, random_density(&mut rng, l.clone(), 2)));
            qs.push((x, w / total, random_density(&mut rng, l.clone(), 3)));
        }
        let rhs: f64 = ps.iter().zip(&qs).map(|(a, b)| a.1 * bures(&a.2, &b.2).unwrap().powi(2)).sum();
        let p = CQState::new(ps).unwrap().block_state("x").unwrap();
        let q = CQState::new(qs).unwrap().block_state("x").unwrap();
        let lhs = bures(&p, &q).unwrap().powi(2);
        prop_assert!((lhs - rhs).abs() < 1e-9, "lhs {lhs} rhs {rhs} diff {}", lhs - rhs);
    }

    #[test]
    fn chain_rule_and_average_encoding(seed in any::<u64>(), dx in 1u64..4, dy in 1u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = layout(&[("q", 2)]);
        let mut parts = Vec::new();
        for x in 0..dx {
            for y in 0..dy {
                let w = rng.random::<f64>() + 0.01;
                parts.push(((x, y), w, random_density(&mut rng, l.clone(), 2)));
            }
        }
        let total: f64 = parts.iter().map(|p| p.1).sum();
        for p in &mut parts {
            p.1 /= total;
        }
        let cq = CQState::new(parts).unwrap();
        let i_xy = cq.mutual_information();
        let i_x = cq.map(|&(x, _)| x).unwrap().mutual_information();
        let i_y_x = cq.conditional_mutual_information(|&(x, _)| x).unwrap();
        prop_assert!((i_xy - (i_x + i_y_x)).abs() < 1e-9);

        // Holevo quantity from the block state: S(X) + S(Q) − S(XQ).
        let block = cq.block_state("x").unwrap();
        let oracle = vn_entropy(&block.partial_trace(&["x"]).unwrap())
            + vn_entropy(&block.partial_trace(&["q"]).unwrap())
            - vn_entropy(&block);
        prop_assert!((i_xy - oracle).abs() < 1e-9);

        let (lhs, rhs) = q_avg_encoding_gap(&cq).unwrap();
        prop_assert!((rhs - KAPPA * i_xy).abs() < 1e-12);
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn partial_trace_monotonicity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = layout(&[("a", 1), ("b", 2)]);
        let p = random_density(&mut rng, l.clone(), 3);
        let q = random_density(&mut rng, l, 2);
        let (pa, qa) = (p.partial_trace(&["a"]).unwrap(), q.partial_trace(&["a"]).unwrap());
        prop_assert!(trace_distance(&pa, &qa).unwrap() <= trace_distance(&p, &q).unwrap() + 1e-9);
        prop_assert!(bures(&pa, &qa).unwrap() <= bures(&p, &q).unwrap() + 1e-7);
    }

    #[test]
    fn uhlmann_reaches_reduced_bures(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = layout(&[("a", 2), ("b", 2)]);
        let p = random_pure(&mut rng, l.clone());
        let q = random_pure(&mut rng, l);
        let u = uhlmann_unitary(&p, &q, &["a"]).unwrap();
        let moved = p.apply(&["a"], &u).unwrap();
        let achieved = bures(&moved.density(), &q.density()).unwrap();
        let target = bures(&p.reduced(&["b"]).unwrap(), &q.reduced(&["b"]).unwrap()).unwrap();
        prop_assert!((achieved - target).abs() < 1e-6);
    }
}

#[test]
fn input_blind_protocols_cost_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let p = QProtocolSpec::builder(2, 3)
            .alice_owns(&[0, 1])
            .round(Party::Alice, &[0], vec![random_unitary(&mut rng, 4)])
            .round(Party::Bob, &[2], vec![random_unitary(&mut rng, 4)])
            .round(Party::Alice, &[1], vec![random_unitary(&mut rng, 4)])
            .output(1)
            .build()
            .unwrap();
        let ic = qic_costs(&p).unwrap();
        assert!(ic.alice.abs() < 1e-9 && ic.bob.abs() < 1e-9, "{ic:?}");
    }
}

#[test]
fn full_send_report_and_hybrids() {
    let p = full_send();
    let r = q_tradeoff_report(&p, ErrorSource::Measured).unwrap();
    assert!((r.lhs - 1.0).abs() < 1e-6);
    let rhs = 1.0 / (4.0 * (KAPPA * 2.0).sqrt());
    assert!((r.rhs - rhs).abs() < 1e-12);
    assert!(r.holds);
    for z in 0..4 {
        let h = hybrid_check(&p, 1, 2, z).unwrap();
        assert!(h.rounds.iter().all(|r| r.slack >= -1e-6));
    }
}
