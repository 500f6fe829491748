//! States, bipartite splits, observable bases and the Schmidt decomposition.
//!
//! Composite indexing convention: subsystem `A` is the left tensor factor, so
//! the basis ket `|a>|b>` sits at flat index `a * d_b + b`. A single-partite
//! state is the `d_b = 1` corner case; subsystem `A` is then the whole space.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tensor-factor tag of a bipartite split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Subsystem::A => "A",
            Subsystem::B => "B",
        }
    }
}

/// Dimensions of a bipartite split `H_A (x) H_B`; `d_b = 1` encodes a
/// single-partite state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub d_a: usize,
    pub d_b: usize,
}

impl Dims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Dims> {
        if d_a == 0 || d_b == 0 || d_a * d_b < 2 {
            return Err(Error::DimensionMismatch(format!(
                "split ({d_a}, {d_b}) must have positive factors and total dimension >= 2"
            )));
        }
        Ok(Dims { d_a, d_b })
    }

    /// Single-partite space of dimension `d`.
    pub fn single(d: usize) -> Result<Dims> {
        Dims::new(d, 1)
    }

    pub fn total(self) -> usize {
        self.d_a * self.d_b
    }

    pub fn dim_of(self, part: Subsystem) -> usize {
        match part {
            Subsystem::A => self.d_a,
            Subsystem::B => self.d_b,
        }
    }

    /// True when both factors are nontrivial.
    pub fn is_bipartite(self) -> bool {
        self.d_a > 1 && self.d_b > 1
    }

    /// Split with the roles of `A` and `B` exchanged.
    pub fn swapped(self) -> Dims {
        Dims { d_a: self.d_b, d_b: self.d_a }
    }
}

/// A density matrix together with its bipartite split.
///
/// Construction validates Hermiticity, unit trace and positivity, then stores
/// the repaired matrix: eigenvalues in `[-1e-9, 0)` are clamped to zero and
/// the spectrum is renormalized to unit trace.
#[derive(Debug, Clone)]
pub struct QState {
    dims: Dims,
    rho: CMatrix,
}

impl QState {
    pub fn new(dims: Dims, rho: CMatrix) -> Result<QState> {
        let d = dims.total();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but the split ({}, {}) needs {d}x{d}",
                rho.nrows(),
                rho.ncols(),
                dims.d_a,
                dims.d_b
            )));
        }
        let herm_residual = max_abs_diff(&rho, &rho.adjoint());
        if herm_residual > tol::TOL_HERMITIAN {
            return Err(Error::NotHermitian(herm_residual));
        }
        let trace = rho.trace();
        let trace_err = (trace.re - 1.0).hypot(trace.im);
        if trace_err > tol::TOL_TRACE {
            return Err(Error::NotNormalized(trace_err));
        }
        // Repair: symmetrize away the sub-tolerance asymmetry, clamp the
        // spectrum into [0, 1] and renormalize.
        let sym = (&rho + rho.adjoint()).scale(0.5);
        let eig = SymmetricEigen::new(sym);
        let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -tol::TOL_PSD {
            return Err(Error::NotPositive(min_eig));
        }
        let clamped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.clamp(0.0, 1.0)).collect();
        let total: f64 = clamped.iter().sum();
        let mut rebuilt = CMatrix::zeros(d, d);
        for (k, &l) in clamped.iter().enumerate() {
            if l > 0.0 {
                let v = eig.eigenvectors.column(k);
                let scale = C64::new(l / total, 0.0);
                rebuilt += (v * v.adjoint()).scale(1.0) * scale;
            }
        }
        Ok(QState { dims, rho: rebuilt })
    }

    /// Wraps a matrix already known to be a valid state (channel outputs,
    /// spectral rebuilds). Checked only in debug builds.
    pub(crate) fn trusted(dims: Dims, rho: CMatrix) -> QState {
        debug_assert!(rho.nrows() == dims.total() && rho.ncols() == dims.total());
        debug_assert!(max_abs_diff(&rho, &rho.adjoint()) < 1e-8, "trusted state not Hermitian");
        debug_assert!((rho.trace().re - 1.0).abs() < 1e-8, "trusted state not normalized");
        QState { dims, rho }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Reduced state of one factor; errors unless the traced-out factor is
    /// nontrivial.
    pub fn marginal(&self, keep: Subsystem) -> Result<QState> {
        partial_trace(self, keep)
    }

    /// Same matrix with the tensor factors exchanged: entry
    /// `(a b, a' b')` moves to `(b a, b' a')`.
    pub fn swapped(&self) -> QState {
        let Dims { d_a, d_b } = self.dims;
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for a in 0..d_a {
            for b in 0..d_b {
                for ap in 0..d_a {
                    for bp in 0..d_b {
                        out[(b * d_a + a, bp * d_a + ap)] = self.rho[(a * d_b + b, ap * d_b + bp)];
                    }
                }
            }
        }
        QState::trusted(self.dims.swapped(), out)
    }
}

/// A unit vector state together with its bipartite split.
#[derive(Debug, Clone)]
pub struct PureState {
    dims: Dims,
    psi: CVector,
}

impl PureState {
    pub fn new(dims: Dims, psi: CVector) -> Result<PureState> {
        if psi.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {} but the split ({}, {}) needs {}",
                psi.len(),
                dims.d_a,
                dims.d_b,
                dims.total()
            )));
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > tol::TOL_TRACE {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(PureState { dims, psi: psi.unscale(norm) })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn psi(&self) -> &CVector {
        &self.psi
    }

    pub fn to_state(&self) -> QState {
        QState::trusted(self.dims, &self.psi * self.psi.adjoint())
    }

    /// Recovers the state vector of a purity-one density matrix. The global
    /// phase is fixed by making the leading sizable component real positive,
    /// so the result is deterministic.
    pub fn from_state(s: &QState) -> Result<PureState> {
        let purity = s.purity();
        if purity < 1.0 - tol::TOL_PSD {
            return Err(Error::DimensionMismatch(format!(
                "not a pure state (purity {purity:.6})"
            )));
        }
        let (vals, vecs) = eigh(s.rho());
        let top = vecs.column(vals.len() - 1).into_owned();
        let phase = top
            .iter()
            .find(|c| c.norm() > 1e-6)
            .map(|c| c.unscale(c.norm()))
            .unwrap_or_else(|| C64::new(1.0, 0.0));
        PureState::new(s.dims(), top.map(|c| c * phase.conj()))
    }
}

/// An orthonormal basis of a subsystem: the eigenbasis of the monitored
/// observable. Orthonormality (hence completeness) is validated.
#[derive(Debug, Clone)]
pub struct ObservableBasis {
    subsystem: Subsystem,
    dim: usize,
    vectors: Vec<CVector>,
}

impl ObservableBasis {
    pub fn new(subsystem: Subsystem, vectors: Vec<CVector>) -> Result<ObservableBasis> {
        let dim = vectors.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch("basis has no vectors".into()));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "basis of {dim} vectors needs length-{dim} vectors, got length {}",
                    v.len()
                )));
            }
        }
        let mut worst = 0.0_f64;
        for (i, vi) in vectors.iter().enumerate() {
            for (j, vj) in vectors.iter().enumerate() {
                let g = vi.dotc(vj);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g.re - target).hypot(g.im));
            }
        }
        if worst > tol::TOL_HERMITIAN {
            return Err(Error::NotNormalized(worst));
        }
        Ok(ObservableBasis { subsystem, dim, vectors })
    }

    /// Computational basis `{|0>, ..., |n-1>}`.
    pub fn computational(subsystem: Subsystem, dim: usize) -> ObservableBasis {
        let vectors = (0..dim)
            .map(|k| {
                let mut v = CVector::zeros(dim);
                v[k] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        ObservableBasis { subsystem, dim, vectors }
    }

    /// Discrete Fourier basis, mutually unbiased with the computational one:
    /// `|a'_j> = d^{-1/2} sum_k exp(2 pi i j k / d) |k>`.
    pub fn fourier(subsystem: Subsystem, dim: usize) -> ObservableBasis {
        let norm = 1.0 / (dim as f64).sqrt();
        let vectors = (0..dim)
            .map(|j| {
                CVector::from_fn(dim, |k, _| {
                    let phase = 2.0 * std::f64::consts::PI * (j * k) as f64 / dim as f64;
                    C64::from_polar(norm, phase)
                })
            })
            .collect();
        ObservableBasis { subsystem, dim, vectors }
    }

    /// Basis read off the columns of a unitary.
    pub fn from_unitary_columns(subsystem: Subsystem, u: &CMatrix) -> Result<ObservableBasis> {
        if u.nrows() != u.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix of basis columns, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        ObservableBasis::new(subsystem, u.column_iter().map(|c| c.into_owned()).collect())
    }

    pub fn subsystem(&self) -> Subsystem {
        self.subsystem
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// Rank-one projector `|a_k><a_k|` on the basis' own space.
    pub fn projector(&self, k: usize) -> CMatrix {
        &self.vectors[k] * self.vectors[k].adjoint()
    }

    /// Same basis with vector `k` multiplied by `exp(i phases[k])`; projectors
    /// and hence every quantifier are unchanged.
    pub fn rephased(&self, phases: &[f64]) -> ObservableBasis {
        assert_eq!(phases.len(), self.dim);
        let vectors = self
            .vectors
            .iter()
            .zip(phases)
            .map(|(v, &p)| v * C64::from_polar(1.0, p))
            .collect();
        ObservableBasis { subsystem: self.subsystem, dim: self.dim, vectors }
    }

    /// Same vectors tagged for the other subsystem.
    pub fn retagged(&self, subsystem: Subsystem) -> ObservableBasis {
        ObservableBasis { subsystem, dim: self.dim, vectors: self.vectors.clone() }
    }
}

/// Joint state of two systems, each treated as one factor of the result.
pub fn tensor(a: &QState, b: &QState) -> QState {
    let dims = Dims { d_a: a.dim(), d_b: b.dim() };
    QState::trusted(dims, a.rho().kronecker(b.rho()))
}

/// Reduced state of the kept factor. The traced-out factor must be
/// nontrivial.
pub fn partial_trace(s: &QState, keep: Subsystem) -> Result<QState> {
    let Dims { d_a, d_b } = s.dims();
    let rho = s.rho();
    match keep {
        Subsystem::A => {
            if d_b < 2 {
                return Err(Error::NotBipartite(
                    "tracing out B needs d_b >= 2".into(),
                ));
            }
            let mut out = CMatrix::zeros(d_a, d_a);
            for a in 0..d_a {
                for ap in 0..d_a {
                    let mut acc = C64::new(0.0, 0.0);
                    for b in 0..d_b {
                        acc += rho[(a * d_b + b, ap * d_b + b)];
                    }
                    out[(a, ap)] = acc;
                }
            }
            Ok(QState::trusted(Dims { d_a, d_b: 1 }, out))
        }
        Subsystem::B => {
            if d_a < 2 {
                return Err(Error::NotBipartite(
                    "tracing out A needs d_a >= 2".into(),
                ));
            }
            let mut out = CMatrix::zeros(d_b, d_b);
            for b in 0..d_b {
                for bp in 0..d_b {
                    let mut acc = C64::new(0.0, 0.0);
                    for a in 0..d_a {
                        acc += rho[(a * d_b + b, a * d_b + bp)];
                    }
                    out[(b, bp)] = acc;
                }
            }
            Ok(QState::trusted(Dims { d_a: d_b, d_b: 1 }, out))
        }
    }
}

/// Schmidt data of a bipartite pure state: weights `lambda_i` (squared
/// Schmidt coefficients, descending, summing to one) and the two local bases,
/// completed to full orthonormal bases of each factor.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub basis_a: ObservableBasis,
    pub basis_b: ObservableBasis,
}

/// Schmidt decomposition via the SVD of the coefficient matrix
/// `M[a, b] = psi[a d_b + b]`. Phases are fixed so the first nonvanishing
/// component of each A-side vector is real positive, which makes the output
/// deterministic and the reconstruction exact rather than
/// up-to-global-phase.
pub fn schmidt(psi: &PureState) -> Result<Schmidt> {
    let Dims { d_a, d_b } = psi.dims();
    if !psi.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "the Schmidt decomposition needs both factors nontrivial".into(),
        ));
    }
    let m = CMatrix::from_fn(d_a, d_b, |a, b| psi.psi()[a * d_b + b]);
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd with u requested");
    let v_t = svd.v_t.expect("svd with v_t requested");
    let r = svd.singular_values.len();

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .expect("finite singular values")
    });

    let mut coefficients = Vec::with_capacity(r);
    let mut cols_a: Vec<CVector> = Vec::with_capacity(r);
    let mut cols_b: Vec<CVector> = Vec::with_capacity(r);
    for &k in &order {
        let sigma = svd.singular_values[k];
        coefficients.push(sigma * sigma);
        let mut ua: CVector = u.column(k).into_owned();
        // Row k of V^dagger holds the conjugated B-side vector.
        let mut wb: CVector = CVector::from_fn(d_b, |b, _| v_t[(k, b)].conj());
        if let Some(lead) = ua.iter().position(|x| x.norm() > 1e-12) {
            let phase = ua[lead] / C64::new(ua[lead].norm(), 0.0);
            ua *= phase.conj();
            wb *= phase;
        }
        cols_a.push(ua);
        cols_b.push(wb);
    }

    let full_a = complete_orthonormal(&cols_a, d_a);
    let full_b = complete_orthonormal(&cols_b, d_b);
    Ok(Schmidt {
        coefficients,
        basis_a: ObservableBasis::new(Subsystem::A, full_a)?,
        basis_b: ObservableBasis::new(Subsystem::B, full_b)?,
    })
}

/// Extends a set of orthonormal columns to a full orthonormal basis by
/// Gram-Schmidt against the identity-permutation seed `e_0, e_1, ...`
/// (two projection passes for stability); deterministic.
pub(crate) fn complete_orthonormal(cols: &[CVector], n: usize) -> Vec<CVector> {
    let mut out: Vec<CVector> = cols.to_vec();
    let mut seed = 0usize;
    while out.len() < n {
        assert!(seed < n, "orthonormal completion ran out of seed vectors");
        let mut v = CVector::zeros(n);
        v[seed] = C64::new(1.0, 0.0);
        seed += 1;
        for _ in 0..2 {
            for u in &out {
                let overlap = u.dotc(&v);
                v -= u * overlap;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            out.push(v.unscale(norm));
        }
    }
    out
}

/// Hermitian eigendecomposition; eigenvalues ascending with matching
/// eigenvector columns.
pub(crate) fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new((m + m.adjoint()).scale(0.5));
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).expect("finite eigenvalues")
    });
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (slot, &k) in order.iter().enumerate() {
        vectors.set_column(slot, &eig.eigenvectors.column(k));
    }
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub(crate) fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    let eig = SymmetricEigen::new((m + m.adjoint()).scale(0.5));
    let mut values: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    values
}

/// Operator on one factor embedded into the joint space.
pub(crate) fn embed(op: &CMatrix, dims: Dims, part: Subsystem) -> CMatrix {
    match part {
        Subsystem::A => op.kronecker(&CMatrix::identity(dims.d_b, dims.d_b)),
        Subsystem::B => CMatrix::identity(dims.d_a, dims.d_a).kronecker(op),
    }
}

/// Largest entrywise deviation between two matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "comparing matrices of different shapes");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `(|00> + |11>)/sqrt(2)` on a 2x2 split.
pub fn bell_state() -> PureState {
    let dims = Dims { d_a: 2, d_b: 2 };
    let mut psi = CVector::zeros(4);
    psi[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    psi[3] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    PureState { dims, psi }
}

/// `w |Bell><Bell| + (1 - w) 1/4` on a 2x2 split, `w` in [0, 1].
pub fn werner_state(w: f64) -> Result<QState> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::EpsilonOutOfRange(w));
    }
    let bell = bell_state().to_state();
    let dims = bell.dims();
    let mixed = CMatrix::identity(4, 4).scale(0.25);
    let rho = bell.rho().scale(w) + mixed.scale(1.0 - w);
    Ok(QState::trusted(dims, rho))
}

/// `1/d` on the given split.
pub fn maximally_mixed(dims: Dims) -> QState {
    let d = dims.total();
    QState::trusted(dims, CMatrix::identity(d, d).scale(1.0 / d as f64))
}

/// Computational basis ket `|index>` on the given split.
pub fn computational_ket(dims: Dims, index: usize) -> Result<PureState> {
    let d = dims.total();
    if index >= d {
        return Err(Error::DimensionMismatch(format!(
            "ket index {index} out of range for dimension {d}"
        )));
    }
    let mut psi = CVector::zeros(d);
    psi[index] = C64::new(1.0, 0.0);
    Ok(PureState { dims, psi })
}
