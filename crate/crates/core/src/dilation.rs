//! Stinespring dilation of a monitoring and the information flow ledger.
//!
//! A channel with Kraus family `{K_j}` acting on `H_S` is realized as a
//! unitary on `H_S (x) H_X` (`d_x` = number of retained Kraus operators) via
//! `U (|psi> (x) |x_0>) = sum_j (K_j |psi>) (x) |x_j>`, with `|x_0>` the first
//! ancilla basis ket. Unitary invariance of the joint entropy then turns the
//! information lost by the system into apparatus information plus
//! system-apparatus correlations, which the ledger itemizes.

use crate::channels::{self, Channel, Destroyer, MonitoringStrength};
use crate::entropy::{conditional_information, information, mutual_information, Nats};
use crate::error::{Error, Result};
use crate::qstate::{complete_orthonormal, max_abs_diff, CMatrix, CVector, Dims, QState, Subsystem};

/// Unitary dilation of a dimension-preserving channel.
#[derive(Debug, Clone)]
pub struct Dilation {
    unitary: CMatrix,
    d_s: usize,
    d_x: usize,
    unitarity_residual: f64,
}

impl Dilation {
    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    /// Apparatus dimension = number of retained Kraus operators.
    pub fn d_x(&self) -> usize {
        self.d_x
    }

    /// Max entry of `|U^dagger U - 1|`, recorded at construction.
    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual
    }

    /// Joint state `U (rho (x) |x_0><x_0|) U^dagger` on the `(S, X)` split.
    pub fn evolve(&self, s: &QState) -> Result<QState> {
        if s.dim() != self.d_s {
            return Err(Error::DimensionMismatch(format!(
                "dilation acts on dimension {}, got {}",
                self.d_s,
                s.dim()
            )));
        }
        let mut anc = CMatrix::zeros(self.d_x, self.d_x);
        anc[(0, 0)] = num_complex::Complex::new(1.0, 0.0);
        let joint0 = s.rho().kronecker(&anc);
        let joint = &self.unitary * joint0 * self.unitary.adjoint();
        Ok(QState::trusted(Dims { d_a: self.d_s, d_b: self.d_x }, joint))
    }
}

/// Builds the dilation of a square channel. The columns fixed by the Kraus
/// family (ancilla index `x_0 = 0`) are completed to a unitary by
/// Gram-Schmidt against the identity-permutation seed basis, so the result
/// is deterministic.
pub fn dilate(channel: &Channel) -> Result<Dilation> {
    let d = channel.input_dim();
    if channel.output_dims().total() != d {
        return Err(Error::DimensionMismatch(format!(
            "dilation needs a square channel, got {} -> {}",
            d,
            channel.output_dims().total()
        )));
    }
    let kraus = channel.kraus();
    let d_x = kraus.len();
    let n = d * d_x;

    // Column for system ket |s>: sum_j (K_j|s>) (x) |x_j>, flat index i*d_x + j.
    let fixed: Vec<CVector> = (0..d)
        .map(|s| {
            let mut v = CVector::zeros(n);
            for (j, k) in kraus.iter().enumerate() {
                for i in 0..d {
                    v[i * d_x + j] = k[(i, s)];
                }
            }
            v
        })
        .collect();

    let full = complete_orthonormal(&fixed, n);
    let mut u = CMatrix::zeros(n, n);
    for (s, col) in full.iter().take(d).enumerate() {
        u.set_column(s * d_x, col);
    }
    let mut next = d;
    for s in 0..d {
        for x in 1..d_x {
            u.set_column(s * d_x + x, &full[next]);
            next += 1;
        }
    }

    let residual = max_abs_diff(&(u.adjoint() * &u), &CMatrix::identity(n, n));
    Ok(Dilation { unitary: u, d_s: d, d_x, unitarity_residual: residual })
}

/// Where the information went under one monitoring step. All entries in nats.
#[derive(Debug, Clone)]
pub struct FlowLedger {
    pub eps: f64,
    /// `I(rho)` before the monitoring.
    pub i_initial: Nats,
    /// `I(Lambda_eps(rho))`, read off the dilated joint state.
    pub i_final: Nats,
    /// Information gained by the apparatus alone: `I(rho_X) - ln d_x`.
    pub delta_i_x: Nats,
    /// System-apparatus mutual information built up by the coupling.
    pub delta_i_xs_mutual: Nats,
    /// Conditional apparatus information change; equals the system's loss.
    pub delta_i_cond: Nats,
    /// `|i_initial - i_final - delta_i_cond|`.
    pub residual: f64,
    /// Apparatus dimension used by the dilation.
    pub d_x: usize,
}

/// Dilates the monitoring `Lambda_eps` with the given destroyer and accounts
/// for the information flow between system and apparatus.
pub fn flow_ledger(
    s: &QState,
    destroyer: &Destroyer,
    eps: MonitoringStrength,
) -> Result<FlowLedger> {
    let dims = s.dims();
    let channel = channels::monitoring_channel(dims, destroyer, eps)?;
    let dil = dilate(&channel)?;
    let i_initial = information(s);

    if dil.d_x() == 1 {
        // Trivial apparatus (eps = 0): the monitoring is the identity.
        let i_final = information(&channel.apply(s)?);
        return Ok(FlowLedger {
            eps: eps.value(),
            i_initial,
            i_final,
            delta_i_x: Nats(0.0),
            delta_i_xs_mutual: Nats(0.0),
            delta_i_cond: Nats(0.0),
            residual: (i_initial.0 - i_final.0).abs(),
            d_x: 1,
        });
    }

    let joint = dil.evolve(s)?;
    let rho_s = joint.marginal(Subsystem::A)?;
    let rho_x = joint.marginal(Subsystem::B)?;
    let ln_dx = Nats((dil.d_x() as f64).ln());

    let i_final = information(&rho_s);
    let delta_i_x = information(&rho_x) - ln_dx;
    let delta_i_xs_mutual = mutual_information(&joint)?;
    // I_{X|S} starts at ln d_x (pure apparatus, uncorrelated).
    let delta_i_cond = conditional_information(&joint, Subsystem::A)? - ln_dx;
    let residual = (i_initial.0 - i_final.0 - delta_i_cond.0).abs();

    Ok(FlowLedger {
        eps: eps.value(),
        i_initial,
        i_final,
        delta_i_x,
        delta_i_xs_mutual,
        delta_i_cond,
        residual,
        d_x: dil.d_x(),
    })
}

/// Additive split of the joint information across a bipartite cut:
/// `I(rho) = I(rho_A) + I(rho_B) + I_{A:B}(rho)`.
#[derive(Debug, Clone)]
pub struct InfoDecomposition {
    pub i_joint: Nats,
    pub i_s: Nats,
    pub i_x: Nats,
    pub i_mutual: Nats,
    pub residual: f64,
}

pub fn total_information_decomposition(joint: &QState) -> Result<InfoDecomposition> {
    if !joint.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "the information decomposition needs both factors nontrivial".into(),
        ));
    }
    let i_joint = information(joint);
    let i_s = information(&joint.marginal(Subsystem::A)?);
    let i_x = information(&joint.marginal(Subsystem::B)?);
    let i_mutual = mutual_information(joint)?;
    let residual = (i_joint.0 - i_s.0 - i_x.0 - i_mutual.0).abs();
    Ok(InfoDecomposition { i_joint, i_s, i_x, i_mutual, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_state, maximally_mixed, tensor, CVector, ObservableBasis, PureState, C64};
    use crate::sampling;
    use approx::assert_abs_diff_eq;

    const LN_2: f64 = std::f64::consts::LN_2;

    fn eps(x: f64) -> MonitoringStrength {
        MonitoringStrength::new(x).unwrap()
    }

    fn z_destroyer(n: usize) -> Destroyer {
        Destroyer::Basis(ObservableBasis::computational(Subsystem::A, n))
    }

    fn plus() -> QState {
        let psi = CVector::from_vec(vec![
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ]);
        PureState::new(Dims::single(2).unwrap(), psi).unwrap().to_state()
    }

    #[test]
    fn identity_channel_dilates_to_identity() {
        let dims = Dims::single(3).unwrap();
        let ch = Channel::new("id", 3, dims, vec![CMatrix::identity(3, 3)]).unwrap();
        let dil = dilate(&ch).unwrap();
        assert_eq!(dil.d_x(), 1);
        assert!(max_abs_diff(dil.unitary(), &CMatrix::identity(3, 3)) < 1e-14);
    }

    #[test]
    fn full_dephasing_dilation_counts_and_reduces() {
        let dims = Dims::single(2).unwrap();
        let ch = channels::monitoring_channel(dims, &z_destroyer(2), eps(1.0)).unwrap();
        let dil = dilate(&ch).unwrap();
        assert_eq!(dil.d_x(), 2);
        assert!(dil.unitarity_residual() < 1e-10);

        let ch04 = channels::monitoring_channel(dims, &z_destroyer(2), eps(0.4)).unwrap();
        assert_eq!(dilate(&ch04).unwrap().d_x(), 3);
    }

    #[test]
    fn reduction_matches_the_channel() {
        let mut rng = sampling::rng_from_seed(41);
        for trial in 0..20 {
            let dims = Dims { d_a: 2, d_b: 3 };
            let s = sampling::random_state(&mut rng, dims);
            let basis = sampling::random_basis(&mut rng, Subsystem::A, 2);
            let e = eps(trial as f64 / 19.0);
            let ch = channels::monitoring_channel(dims, &Destroyer::Basis(basis), e).unwrap();
            let dil = dilate(&ch).unwrap();
            assert!(dil.unitarity_residual() < 1e-10);
            if dil.d_x() == 1 {
                continue;
            }
            let joint = dil.evolve(&s).unwrap();
            let reduced = joint.marginal(Subsystem::A).unwrap();
            let expect = ch.apply(&s).unwrap();
            assert!(
                max_abs_diff(reduced.rho(), expect.rho()) < 1e-11,
                "reduction mismatch at trial {trial}"
            );
        }
    }

    #[test]
    fn plus_state_fully_monitored_ledger() {
        let ledger = flow_ledger(&plus(), &z_destroyer(2), eps(1.0)).unwrap();
        assert_eq!(ledger.d_x, 2);
        assert_abs_diff_eq!(ledger.i_initial.0, LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(ledger.i_final.0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ledger.delta_i_cond.0, LN_2, epsilon = 1e-11);
        // The apparatus ends maximally mixed but maximally correlated.
        assert_abs_diff_eq!(ledger.delta_i_x.0, -LN_2, epsilon = 1e-11);
        assert_abs_diff_eq!(ledger.delta_i_xs_mutual.0, 2.0 * LN_2, epsilon = 1e-11);
        assert!(ledger.residual < 1e-10);
    }

    #[test]
    fn zero_strength_ledger_is_empty() {
        let ledger = flow_ledger(&plus(), &z_destroyer(2), eps(0.0)).unwrap();
        assert_eq!(ledger.d_x, 1);
        assert_abs_diff_eq!(ledger.delta_i_x.0, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ledger.delta_i_xs_mutual.0, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ledger.i_initial.0, ledger.i_final.0, epsilon = 1e-12);
        assert!(ledger.residual < 1e-12);
    }

    #[test]
    fn bell_fully_scrambled_loses_everything() {
        let bell = bell_state().to_state();
        let ledger = flow_ledger(&bell, &Destroyer::Incompatible, eps(1.0)).unwrap();
        assert_eq!(ledger.d_x, 16);
        assert_abs_diff_eq!(ledger.i_initial.0, 2.0 * LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(ledger.i_final.0, 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(ledger.delta_i_cond.0, 2.0 * LN_2, epsilon = 1e-11);
        assert!(ledger.residual < 1e-10);
    }

    #[test]
    fn conservation_on_random_inputs() {
        let mut rng = sampling::rng_from_seed(77);
        for trial in 0..25 {
            let dims = if trial % 2 == 0 { Dims { d_a: 2, d_b: 2 } } else { Dims { d_a: 2, d_b: 3 } };
            let s = sampling::random_state(&mut rng, dims);
            let side = if trial % 3 == 0 { Subsystem::B } else { Subsystem::A };
            let basis = sampling::random_basis(&mut rng, side, dims.dim_of(side));
            let e = eps(0.1 + 0.8 * (trial as f64 / 24.0));
            let ledger = flow_ledger(&s, &Destroyer::Basis(basis), e).unwrap();
            assert!(ledger.residual < 1e-10, "conservation residual {} at trial {trial}", ledger.residual);
            let split = (ledger.delta_i_cond.0 - ledger.delta_i_x.0 - ledger.delta_i_xs_mutual.0).abs();
            assert!(split < 1e-10, "split residual {split} at trial {trial}");
            assert!(ledger.delta_i_cond.0 >= -1e-10, "system information must not increase");
        }
    }

    #[test]
    fn decomposition_of_a_pure_product() {
        let a = crate::qstate::computational_ket(Dims::single(2).unwrap(), 0).unwrap().to_state();
        let b = crate::qstate::computational_ket(Dims::single(3).unwrap(), 2).unwrap().to_state();
        let joint = tensor(&a, &b);
        let dec = total_information_decomposition(&joint).unwrap();
        assert_abs_diff_eq!(dec.i_s.0, LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(dec.i_x.0, 3.0_f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(dec.i_mutual.0, 0.0, epsilon = 1e-12);
        assert!(dec.residual < 1e-12);

        assert!(total_information_decomposition(&maximally_mixed(Dims::single(4).unwrap())).is_err());
    }
}
