//! Seeded random states, unitaries and bases. Every sampler takes the RNG
//! explicitly; `rng_from_seed` pins the stream so suites are reproducible.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::qstate::{CMatrix, CVector, Dims, ObservableBasis, PureState, QState, Subsystem, C64};

pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Matrix of iid standard complex Gaussians.
fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal's
/// phases absorbed into Q.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let qr = ginibre(rng, n, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / C64::new(d.norm(), 0.0) } else { C64::new(1.0, 0.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

/// Isometry with `cols` orthonormal columns in dimension `rows`.
pub fn random_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    assert!(cols <= rows, "an isometry needs rows >= cols");
    let qr = ginibre(rng, rows, cols).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / C64::new(d.norm(), 0.0) } else { C64::new(1.0, 0.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

/// Haar-random pure state on the given split.
pub fn random_pure(rng: &mut impl Rng, dims: Dims) -> PureState {
    let d = dims.total();
    let mut psi = CVector::from_fn(d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    });
    psi /= C64::new(psi.norm(), 0.0);
    PureState::new(dims, psi).expect("normalized Gaussian vector is a valid state")
}

/// Full-rank random density matrix (Hilbert-Schmidt ensemble).
pub fn random_state(rng: &mut impl Rng, dims: Dims) -> QState {
    random_state_rank(rng, dims, dims.total())
}

/// Random density matrix of the given rank: `G G^dagger / tr` with a
/// `d x rank` Ginibre factor.
pub fn random_state_rank(rng: &mut impl Rng, dims: Dims, rank: usize) -> QState {
    let d = dims.total();
    assert!(rank >= 1 && rank <= d, "rank must lie in 1..=d");
    let g = ginibre(rng, d, rank);
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho /= C64::new(tr, 0.0);
    QState::new(dims, rho).expect("Wishart matrix is a valid state")
}

/// Haar-random orthonormal basis on a subsystem of dimension `n`.
pub fn random_basis(rng: &mut impl Rng, subsystem: Subsystem, n: usize) -> ObservableBasis {
    ObservableBasis::from_unitary_columns(subsystem, &random_unitary(rng, n))
        .expect("unitary columns form a basis")
}
