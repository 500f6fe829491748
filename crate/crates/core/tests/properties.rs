//! Randomized invariants of the whole stack, driven by proptest over seeds so
//! every failure shrinks to a reproducible instance.

use proptest::prelude::*;
use qres::channels::{self, Destroyer, MonitoringStrength};
use qres::dilation::{dilate, flow_ledger};
use qres::entropy::{information, mutual_information, relative_entropy, vn_entropy};
use qres::qstate::{max_abs_diff, tensor};
use qres::quantifiers::{coherence, discord_basis};
use qres::sampling;
use qres::{Dims, QState, Subsystem};

fn dims_strategy() -> impl Strategy<Value = Dims> {
    prop_oneof![
        Just(Dims { d_a: 2, d_b: 2 }),
        Just(Dims { d_a: 2, d_b: 3 }),
        Just(Dims { d_a: 3, d_b: 2 }),
        Just(Dims { d_a: 2, d_b: 1 }),
        Just(Dims { d_a: 4, d_b: 1 }),
        Just(Dims { d_a: 6, d_b: 1 }),
    ]
}

fn bipartite_strategy() -> impl Strategy<Value = Dims> {
    prop_oneof![
        Just(Dims { d_a: 2, d_b: 2 }),
        Just(Dims { d_a: 2, d_b: 3 }),
        Just(Dims { d_a: 3, d_b: 2 }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn entropy_is_bounded_and_unitarily_invariant(seed in any::<u64>(), dims in dims_strategy()) {
        let mut rng = sampling::rng_from_seed(seed);
        let s = sampling::random_state(&mut rng, dims);
        let h = vn_entropy(&s).0;
        prop_assert!(h >= -1e-12);
        prop_assert!(h <= (dims.total() as f64).ln() + 1e-12);

        let u = sampling::random_unitary(&mut rng, dims.total());
        let rotated = QState::new(dims, &u * s.rho() * u.adjoint()).unwrap();
        prop_assert!((vn_entropy(&rotated).0 - h).abs() <= 1e-10);
        prop_assert!((information(&rotated).0 - information(&s).0).abs() <= 1e-10);
    }

    #[test]
    fn entropy_is_concave(seed in any::<u64>(), w in 0.0f64..=1.0) {
        let mut rng = sampling::rng_from_seed(seed);
        let dims = Dims { d_a: 2, d_b: 2 };
        let a = sampling::random_state(&mut rng, dims);
        let b = sampling::random_state(&mut rng, dims);
        let mix = QState::new(dims, a.rho().scale(w) + b.rho().scale(1.0 - w)).unwrap();
        let lhs = vn_entropy(&mix).0;
        let rhs = w * vn_entropy(&a).0 + (1.0 - w) * vn_entropy(&b).0;
        prop_assert!(lhs >= rhs - 1e-12, "concavity violated: {lhs} < {rhs}");
    }

    #[test]
    fn relative_entropy_to_the_dephased_state_is_the_entropy_gap(
        seed in any::<u64>(),
        dims in bipartite_strategy(),
    ) {
        let mut rng = sampling::rng_from_seed(seed);
        let s = sampling::random_state(&mut rng, dims);
        let basis = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
        let dephased = channels::phi_meas(&s, &basis).unwrap();
        let re = relative_entropy(&s, &dephased).unwrap().0;
        let gap = vn_entropy(&dephased).0 - vn_entropy(&s).0;
        prop_assert!((re - gap).abs() <= 1e-10, "S(r||Phi r) = {re} vs gap {gap}");
    }

    #[test]
    fn dephasings_are_idempotent_and_commute_across_sides(
        seed in any::<u64>(),
        dims in bipartite_strategy(),
    ) {
        let mut rng = sampling::rng_from_seed(seed);
        let s = sampling::random_state(&mut rng, dims);
        let ba = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
        let bb = sampling::random_basis(&mut rng, Subsystem::B, dims.d_b);

        let once = channels::phi_meas(&s, &ba).unwrap();
        let twice = channels::phi_meas(&once, &ba).unwrap();
        prop_assert!(max_abs_diff(twice.rho(), once.rho()) <= 1e-11);

        let ab = channels::phi_meas(&channels::phi_meas(&s, &ba).unwrap(), &bb).unwrap();
        let ba_order = channels::phi_meas(&channels::phi_meas(&s, &bb).unwrap(), &ba).unwrap();
        prop_assert!(max_abs_diff(ab.rho(), ba_order.rho()) <= 1e-12);
    }

    #[test]
    fn monitoring_only_degrades_information(seed in any::<u64>(), dims in dims_strategy()) {
        let mut rng = sampling::rng_from_seed(seed);
        let s = sampling::random_state(&mut rng, dims);
        let destroyer = if dims.is_bipartite() {
            Destroyer::Basis(sampling::random_basis(&mut rng, Subsystem::A, dims.d_a))
        } else {
            Destroyer::Incompatible
        };
        let mut last = information(&s).0;
        for k in 0..=10 {
            let eps = MonitoringStrength::new(k as f64 / 10.0).unwrap();
            let m = channels::monitoring(&s, &destroyer, eps).unwrap();
            let i = information(&m).0;
            prop_assert!(vn_entropy(&m).0 >= vn_entropy(&s).0 - 1e-12);
            prop_assert!(i <= last + 1e-10, "information rose along the strength grid");
            last = i;
        }
    }

    #[test]
    fn dilations_are_unitary_reduce_correctly_and_balance_the_ledger(
        seed in any::<u64>(),
        dims in bipartite_strategy(),
        eps in 0.05f64..=1.0,
    ) {
        let mut rng = sampling::rng_from_seed(seed);
        let s = sampling::random_state(&mut rng, dims);
        let side = if seed % 2 == 0 { Subsystem::A } else { Subsystem::B };
        let destroyer = Destroyer::Basis(sampling::random_basis(&mut rng, side, dims.dim_of(side)));
        let eps = MonitoringStrength::new(eps).unwrap();

        let channel = channels::monitoring_channel(dims, &destroyer, eps).unwrap();
        let dil = dilate(&channel).unwrap();
        prop_assert!(dil.unitarity_residual() <= 1e-10);

        let joint = dil.evolve(&s).unwrap();
        let reduced = joint.marginal(Subsystem::A).unwrap();
        let direct = channel.apply(&s).unwrap();
        prop_assert!(max_abs_diff(reduced.rho(), direct.rho()) <= 1e-10);

        // The coupling unitary cannot change the joint information.
        let fresh = tensor(&s, &qres::qstate::computational_ket(
            Dims::single(dil.d_x()).unwrap(), 0).unwrap().to_state());
        prop_assert!((information(&joint).0 - information(&fresh).0).abs() <= 1e-10);

        let ledger = flow_ledger(&s, &destroyer, eps).unwrap();
        prop_assert!(ledger.residual <= 1e-10, "conservation residual {}", ledger.residual);
        let split = ledger.delta_i_x.0 + ledger.delta_i_xs_mutual.0;
        prop_assert!((ledger.delta_i_cond.0 - split).abs() <= 1e-10);
        prop_assert!(ledger.delta_i_cond.0 >= -1e-10, "information flowed back from a fresh ancilla");
    }

    #[test]
    fn quantifier_objectives_ignore_basis_phases(
        seed in any::<u64>(),
        phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 3),
    ) {
        let mut rng = sampling::rng_from_seed(seed);
        let dims = Dims { d_a: 3, d_b: 2 };
        let s = sampling::random_state(&mut rng, dims);
        let basis = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
        let rephased = basis.rephased(&phases);

        let c = coherence(&s, &basis).unwrap().0;
        prop_assert!((coherence(&s, &rephased).unwrap().0 - c).abs() <= 1e-10);
        let d = discord_basis(&s, &basis).unwrap().0;
        prop_assert!((discord_basis(&s, &rephased).unwrap().0 - d).abs() <= 1e-10);
    }

    #[test]
    fn mutual_information_is_nonnegative_and_detects_products(
        seed in any::<u64>(),
        dims in bipartite_strategy(),
    ) {
        let mut rng = sampling::rng_from_seed(seed);
        let s = sampling::random_state(&mut rng, dims);
        prop_assert!(mutual_information(&s).unwrap().0 >= -1e-12);

        let a = sampling::random_state(&mut rng, Dims::single(dims.d_a).unwrap());
        let b = sampling::random_state(&mut rng, Dims::single(dims.d_b).unwrap());
        let product = tensor(&a, &b);
        prop_assert!(mutual_information(&product).unwrap().0.abs() <= 1e-10);
    }
}

/// Purity-one inputs stay exactly where the closed forms put them; this is a
/// deterministic companion to the randomized checks above.
#[test]
fn correlated_state_has_positive_mutual_information() {
    let bell = qres::qstate::bell_state().to_state();
    let i = mutual_information(&bell).unwrap().0;
    assert!((i - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
}
