//! Numerical toolkit for information-based quantum resource quantifiers.
//!
//! Everything is built around one primitive: the unrevealed measurement of an
//! observable `A` on a subsystem, `Phi_A(rho) = sum_a (P_a (x) 1) rho (P_a (x) 1)`,
//! and its partial version, the monitoring `Lambda_eps(rho) = (1-eps) rho + eps Phi(rho)`.
//! The information of a `d`-dimensional state, `I(rho) = ln d - S(rho)` (nats),
//! is the conserved currency: coherence, entanglement, discord, irreality and
//! realism-based nonlocality are all expressed as information changes under a
//! suitable `Phi`, and the flow ledger tracks where the information goes when a
//! monitoring is dilated to a unitary on system plus apparatus.
//!
//! Layout:
//! - [`qstate`]: density matrices, bipartite splits, bases, Schmidt decomposition
//! - [`entropy`]: von Neumann/relative entropy and information functionals
//! - [`channels`]: dephasing maps, monitorings and their Kraus forms
//! - [`dilation`]: Stinespring dilations and the information flow ledger
//! - [`quantifiers`]: the resource quantifiers and their cross-checks
//! - [`optimize`]: derivative-free basis/context searches and the dense-grid oracle
//! - [`sampling`]: seeded random states, unitaries and bases

#![forbid(unsafe_code)]

pub mod channels;
pub mod dilation;
pub mod entropy;
mod error;
pub mod optimize;
pub mod qstate;
pub mod quantifiers;
pub mod sampling;
pub mod tol;

pub use channels::{Channel, Destroyer, MonitoringStrength};
pub use dilation::{Dilation, FlowLedger, InfoDecomposition};
pub use entropy::Nats;
pub use error::{Error, Result};
pub use optimize::{Diagnostics, Direction, SearchConfig};
pub use qstate::{CMatrix, CVector, Dims, ObservableBasis, PureState, QState, Subsystem, C64};
pub use quantifiers::{Context, MonitoredResource, QuantifierReport, Scope, SweepReport};
