//! Entropy and information functionals. Natural logarithm throughout; the
//! only non-finite value that can appear is the +inf sentinel of the relative
//! entropy on support mismatch.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::qstate::{eigh, eigvalsh, QState, Subsystem};
use crate::tol;

/// An information value in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Nats(pub f64);

impl Nats {
    pub fn value(self) -> f64 {
        self.0
    }

    /// The same value converted to bits (display only; all math stays in nats).
    pub fn bits(self) -> f64 {
        self.0 / std::f64::consts::LN_2
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl Add for Nats {
    type Output = Nats;
    fn add(self, rhs: Nats) -> Nats {
        Nats(self.0 + rhs.0)
    }
}

impl Sub for Nats {
    type Output = Nats;
    fn sub(self, rhs: Nats) -> Nats {
        Nats(self.0 - rhs.0)
    }
}

impl Neg for Nats {
    type Output = Nats;
    fn neg(self) -> Nats {
        Nats(-self.0)
    }
}

impl fmt::Display for Nats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Entropy of a nonnegative weight vector: `-sum p ln p`, entries below the
/// floor contributing zero.
pub fn shannon(weights: &[f64]) -> Nats {
    let mut acc = 0.0;
    for &p in weights {
        if p > tol::EIG_FLOOR {
            acc -= p * p.ln();
        }
    }
    Nats(acc)
}

/// Von Neumann entropy `S(rho) = -tr(rho ln rho)` from the eigenvalues.
pub fn vn_entropy(s: &QState) -> Nats {
    shannon(&eigvalsh(s.rho()))
}

/// Information `I(rho) = ln d - S(rho)`; zero for the maximally mixed state,
/// `ln d` for pure states.
pub fn information(s: &QState) -> Nats {
    Nats((s.dim() as f64).ln()) - vn_entropy(s)
}

/// Mutual information `I_{A:B} = S(rho_A) + S(rho_B) - S(rho)`. Requires both
/// factors nontrivial; results within tolerance below zero are clamped.
pub fn mutual_information(s: &QState) -> Result<Nats> {
    if !s.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "mutual information needs both factors nontrivial".into(),
        ));
    }
    let sa = vn_entropy(&s.marginal(Subsystem::A)?);
    let sb = vn_entropy(&s.marginal(Subsystem::B)?);
    let joint = vn_entropy(s);
    let val = (sa + sb - joint).0;
    Ok(Nats(if (-tol::TOL_EQ..0.0).contains(&val) { 0.0 } else { val }))
}

/// Conditional information of the *other* factor given `given`:
/// `I(rho) - I(rho_given) = ln d_other - S(rho) + S(rho_given)`.
pub fn conditional_information(s: &QState, given: Subsystem) -> Result<Nats> {
    if !s.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "conditional information needs both factors nontrivial".into(),
        ));
    }
    let marginal = s.marginal(given)?;
    Ok(information(s) - information(&marginal))
}

/// Relative entropy `S(a || b) = tr[a (ln a - ln b)]`, evaluated in the
/// eigenbasis of `b`. Returns the +inf sentinel when `a` puts more than
/// 1e-10 weight where `b` has an eigenvalue below 1e-14. Values within
/// tolerance below zero are clamped.
pub fn relative_entropy(a: &QState, b: &QState) -> Result<Nats> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy needs equal dimensions, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let tr_a_ln_a = -vn_entropy(a).0;
    let (vals_b, vecs_b) = eigh(b.rho());
    let mut tr_a_ln_b = 0.0;
    for (j, &q) in vals_b.iter().enumerate() {
        let v = vecs_b.column(j);
        let weight = (v.adjoint() * a.rho() * v)[(0, 0)].re;
        if q < tol::EIG_FLOOR {
            if weight > tol::SUPPORT_MASS {
                return Ok(Nats(f64::INFINITY));
            }
        } else {
            tr_a_ln_b += weight * q.ln();
        }
    }
    let val = tr_a_ln_a - tr_a_ln_b;
    Ok(Nats(if (-tol::TOL_EQ..0.0).contains(&val) { 0.0 } else { val }))
}
