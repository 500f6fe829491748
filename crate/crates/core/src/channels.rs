//! Resource-destroying maps and monitorings.
//!
//! The primitive is the unrevealed measurement of a basis `{|a>}` on one
//! factor, `Phi_A(rho) = sum_a (P_a (x) 1) rho (P_a (x) 1)`: an idempotent
//! dephasing that keeps the outcome statistics and erases the coherences.
//! A monitoring interpolates, `Lambda_eps = (1-eps) id + eps Phi`, and a
//! maximally incompatible pair (computational then Fourier) wipes a factor
//! completely; doing that on both factors leaves `1/d`.

use crate::error::{Error, Result};
use crate::qstate::{embed, CMatrix, Dims, ObservableBasis, QState, Subsystem, C64};
use crate::tol;

/// Monitoring strength, confined to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitoringStrength(f64);

impl MonitoringStrength {
    pub fn new(eps: f64) -> Result<MonitoringStrength> {
        if !(0.0..=1.0).contains(&eps) || !eps.is_finite() {
            return Err(Error::EpsilonOutOfRange(eps));
        }
        Ok(MonitoringStrength(eps))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A completely positive trace-preserving map in operator-sum form. Kraus
/// operators are `output_dim x input_dim`; trace preservation is validated
/// at construction.
#[derive(Debug, Clone)]
pub struct Channel {
    label: String,
    input_dim: usize,
    output_dims: Dims,
    kraus: Vec<CMatrix>,
}

impl Channel {
    pub fn new(
        label: impl Into<String>,
        input_dim: usize,
        output_dims: Dims,
        kraus: Vec<CMatrix>,
    ) -> Result<Channel> {
        if kraus.is_empty() {
            return Err(Error::NotTracePreserving(1.0));
        }
        let d_out = output_dims.total();
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != input_dim {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, channel needs {d_out}x{input_dim}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        let mut acc = CMatrix::zeros(input_dim, input_dim);
        for k in &kraus {
            acc += k.adjoint() * k;
        }
        let residual = crate::qstate::max_abs_diff(&acc, &CMatrix::identity(input_dim, input_dim));
        if residual > tol::TOL_HERMITIAN {
            return Err(Error::NotTracePreserving(residual));
        }
        Ok(Channel { label: label.into(), input_dim, output_dims, kraus })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dims(&self) -> Dims {
        self.output_dims
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Operator-sum application `sum_k K rho K^dagger`.
    pub fn apply(&self, s: &QState) -> Result<QState> {
        if s.dim() != self.input_dim {
            return Err(Error::DimensionMismatch(format!(
                "channel '{}' expects input dimension {}, got {}",
                self.label,
                self.input_dim,
                s.dim()
            )));
        }
        let d_out = self.output_dims.total();
        let mut out = CMatrix::zeros(d_out, d_out);
        for k in &self.kraus {
            out += k * s.rho() * k.adjoint();
        }
        Ok(QState::trusted(self.output_dims, out))
    }
}

/// What a monitoring destroys: a basis dephasing on one factor (or the whole
/// space), or the fully incompatible scrambling.
#[derive(Debug, Clone)]
pub enum Destroyer {
    Basis(ObservableBasis),
    Incompatible,
}

impl Destroyer {
    pub fn label(&self) -> String {
        match self {
            Destroyer::Basis(b) => format!("dephase[{}:{}]", b.subsystem().label(), b.dim()),
            Destroyer::Incompatible => "incompatible-pair".into(),
        }
    }
}

/// Checks that `basis` fits `dims`: either it spans the whole space (then it
/// dephases globally) or it matches its tagged factor.
fn basis_scope(dims: Dims, basis: &ObservableBasis) -> Result<Option<Subsystem>> {
    if basis.dim() == dims.total() {
        return Ok(None); // whole-space dephasing
    }
    let part = basis.subsystem();
    if basis.dim() == dims.dim_of(part) {
        Ok(Some(part))
    } else {
        Err(Error::DimensionMismatch(format!(
            "basis of dimension {} fits neither subsystem {} (dim {}) nor the whole space (dim {})",
            basis.dim(),
            part.label(),
            dims.dim_of(part),
            dims.total()
        )))
    }
}

/// Unrevealed measurement `Phi_A(rho) = sum_a (P_a (x) 1) rho (P_a (x) 1)`.
/// The basis may span its tagged factor or the whole space; idempotent.
pub fn phi_meas(s: &QState, basis: &ObservableBasis) -> Result<QState> {
    let dims = s.dims();
    let scope = basis_scope(dims, basis)?;
    let d = dims.total();
    let mut out = CMatrix::zeros(d, d);
    match scope {
        None => {
            // Whole space: Phi(rho) = sum_k <v_k|rho|v_k> |v_k><v_k|.
            for v in basis.vectors() {
                let w = (v.adjoint() * s.rho() * v)[(0, 0)].re;
                out += (v * v.adjoint()).scale(w);
            }
        }
        Some(part) => {
            for a in 0..basis.dim() {
                let p = embed(&basis.projector(a), dims, part);
                out += &p * s.rho() * &p;
            }
        }
    }
    Ok(QState::trusted(dims, out))
}

/// Unrevealed measurement of a maximally incompatible pair on one factor:
/// Fourier dephasing followed by computational dephasing. Erases the factor,
/// `rho -> (1/d_part) (x) rho_other`.
pub fn phi_pair_incompatible(s: &QState, part: Subsystem) -> Result<QState> {
    let n = s.dims().dim_of(part);
    if n < 2 {
        return Err(Error::NotBipartite(format!(
            "subsystem {} is trivial, nothing to scramble",
            part.label()
        )));
    }
    let fourier = ObservableBasis::fourier(part, n);
    let comp = ObservableBasis::computational(part, n);
    phi_meas(&phi_meas(s, &fourier)?, &comp)
}

/// Fully incompatible scrambling of both factors; sends every state to `1/d`.
pub fn phi_inc(s: &QState) -> Result<QState> {
    if !s.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "the two-sided incompatible scrambling needs both factors nontrivial".into(),
        ));
    }
    phi_pair_incompatible(&phi_pair_incompatible(s, Subsystem::A)?, Subsystem::B)
}

/// Applies a destroyer as a map. `Incompatible` scrambles both factors of a
/// bipartite state and the whole space of a single-partite one.
pub fn apply_destroyer(s: &QState, destroyer: &Destroyer) -> Result<QState> {
    match destroyer {
        Destroyer::Basis(b) => phi_meas(s, b),
        Destroyer::Incompatible => {
            if s.dims().is_bipartite() {
                phi_inc(s)
            } else {
                phi_pair_incompatible(s, Subsystem::A)
            }
        }
    }
}

/// Monitoring of strength `eps` with an arbitrary destroying map:
/// `(1 - eps) rho + eps phi(rho)`.
pub fn monitoring_with(
    s: &QState,
    phi: impl FnOnce(&QState) -> Result<QState>,
    eps: MonitoringStrength,
) -> Result<QState> {
    let destroyed = phi(s)?;
    if destroyed.dim() != s.dim() {
        return Err(Error::DimensionMismatch(
            "monitoring needs a dimension-preserving destroyer".into(),
        ));
    }
    let e = eps.value();
    let rho = s.rho().scale(1.0 - e) + destroyed.rho().scale(e);
    Ok(QState::trusted(s.dims(), rho))
}

/// Monitoring of strength `eps` with a named destroyer.
pub fn monitoring(s: &QState, destroyer: &Destroyer, eps: MonitoringStrength) -> Result<QState> {
    monitoring_with(s, |x| apply_destroyer(x, destroyer), eps)
}

/// Kraus family of the destroyer itself (embedded projectors, or their
/// mutually unbiased products for the incompatible scrambling).
pub fn destroyer_kraus(dims: Dims, destroyer: &Destroyer) -> Result<Vec<CMatrix>> {
    match destroyer {
        Destroyer::Basis(basis) => {
            let scope = basis_scope(dims, basis)?;
            let ops = (0..basis.dim())
                .map(|a| match scope {
                    None => basis.projector(a),
                    Some(part) => embed(&basis.projector(a), dims, part),
                })
                .collect();
            Ok(ops)
        }
        Destroyer::Incompatible => {
            let pair_ops = |n: usize, part: Subsystem| -> Vec<CMatrix> {
                let fourier = ObservableBasis::fourier(part, n);
                let comp = ObservableBasis::computational(part, n);
                let mut ops = Vec::with_capacity(n * n);
                for a in 0..n {
                    for ap in 0..n {
                        ops.push(comp.projector(a) * fourier.projector(ap));
                    }
                }
                ops
            };
            if dims.is_bipartite() {
                let left = pair_ops(dims.d_a, Subsystem::A);
                let right = pair_ops(dims.d_b, Subsystem::B);
                let mut ops = Vec::with_capacity(left.len() * right.len());
                for l in &left {
                    for r in &right {
                        ops.push(l.kronecker(r));
                    }
                }
                Ok(ops)
            } else {
                Ok(pair_ops(dims.total(), Subsystem::A))
            }
        }
    }
}

/// Kraus family of the monitoring: `sqrt(1-eps) 1` plus `sqrt(eps)` times each
/// destroyer operator; operators with max entry below 1e-15 are pruned (the
/// identity drops out at `eps = 1`).
pub fn monitoring_kraus(
    dims: Dims,
    destroyer: &Destroyer,
    eps: MonitoringStrength,
) -> Result<Vec<CMatrix>> {
    let d = dims.total();
    let e = eps.value();
    let mut ops = vec![CMatrix::identity(d, d).scale((1.0 - e).sqrt())];
    for k in destroyer_kraus(dims, destroyer)? {
        ops.push(k.scale(e.sqrt()));
    }
    ops.retain(|k| k.iter().any(|x| x.norm() >= tol::KRAUS_PRUNE));
    Ok(ops)
}

/// The monitoring packaged as a validated channel.
pub fn monitoring_channel(
    dims: Dims,
    destroyer: &Destroyer,
    eps: MonitoringStrength,
) -> Result<Channel> {
    let kraus = monitoring_kraus(dims, destroyer, eps)?;
    Channel::new(
        format!("monitor[eps={}, {}]", eps.value(), destroyer.label()),
        dims.total(),
        dims,
        kraus,
    )
}

/// The partial trace as a channel: `M_b = 1 (x) <b|` for `keep = A`,
/// `M_a = <a| (x) 1` for `keep = B`.
pub fn partial_trace_channel(dims: Dims, keep: Subsystem) -> Result<Channel> {
    if dims.dim_of(keep.other()) < 2 {
        return Err(Error::NotBipartite(format!(
            "tracing out {} needs it nontrivial",
            keep.other().label()
        )));
    }
    let Dims { d_a, d_b } = dims;
    let d = dims.total();
    let kraus: Vec<CMatrix> = match keep {
        Subsystem::A => (0..d_b)
            .map(|b| {
                CMatrix::from_fn(d_a, d, |row, col| {
                    let (a, bb) = (col / d_b, col % d_b);
                    if a == row && bb == b { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
                })
            })
            .collect(),
        Subsystem::B => (0..d_a)
            .map(|a| {
                CMatrix::from_fn(d_b, d, |row, col| {
                    let (aa, b) = (col / d_b, col % d_b);
                    if aa == a && b == row { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
                })
            })
            .collect(),
    };
    let out = Dims::single(dims.dim_of(keep))?;
    Channel::new(format!("partial-trace[keep {}]", keep.label()), d, out, kraus)
}
