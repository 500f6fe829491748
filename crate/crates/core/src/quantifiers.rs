//! The resource quantifiers, all expressed as information lost to an agent
//! monitoring some observable: coherence, entanglement (pure-state entropy of
//! entanglement, two-qubit entanglement of formation), one-way and symmetric
//! quantum discord, irreality, realism-based nonlocality, and the
//! basis-minimized generic correlation. Each optimized quantity reports the
//! observable(s) at the optimum, and every definition that admits more than
//! one information-theoretic route exposes the alternative routes so they can
//! be checked against one another. The monitoring sweep at the end verifies
//! that each resource only decreases under its own destroying monitoring.

use crate::channels::{self, MonitoringStrength};
use crate::entropy::{information, mutual_information, relative_entropy, shannon, vn_entropy, Nats};
use crate::error::{Error, Result};
use crate::optimize::{self, Diagnostics, Direction, SearchConfig};
use crate::qstate::{eigh, eigvalsh, schmidt, tensor, CMatrix, CVector, Dims, ObservableBasis,
    PureState, QState, Subsystem, C64};
use crate::sampling;
use crate::tol::QUANT_CLAMP;

/// A pair of local measured bases, one per side.
#[derive(Debug, Clone)]
pub struct Context {
    pub basis_a: ObservableBasis,
    pub basis_b: ObservableBasis,
}

impl Context {
    pub fn new(basis_a: ObservableBasis, basis_b: ObservableBasis) -> Result<Context> {
        if basis_a.subsystem() != Subsystem::A || basis_b.subsystem() != Subsystem::B {
            return Err(Error::DimensionMismatch(
                "a context takes the A-side basis first and the B-side basis second".into(),
            ));
        }
        Ok(Context { basis_a, basis_b })
    }

    /// Fits the given bipartite split?
    pub fn matches(&self, dims: Dims) -> bool {
        self.basis_a.dim() == dims.d_a && self.basis_b.dim() == dims.d_b
    }

    /// The same context seen from the exchanged tensor order, for use on a
    /// swapped state.
    pub fn swapped(&self) -> Context {
        Context {
            basis_a: self.basis_b.retagged(Subsystem::A),
            basis_b: self.basis_a.retagged(Subsystem::B),
        }
    }
}

/// Which set of observables an optimization ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    A,
    B,
    /// Bases of the whole space, ignoring the bipartite split.
    Global,
}

/// A computed quantifier together with the optimum that produced it, when an
/// optimization was involved.
#[derive(Debug, Clone)]
pub struct QuantifierReport {
    pub name: String,
    pub value: Nats,
    pub basis: Option<ObservableBasis>,
    pub context: Option<Context>,
    pub diagnostics: Option<Diagnostics>,
}

/// The quantifier/destroying-monitoring pairings that admit a sweep check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonitoredResource {
    Coherence,
    PureEntanglement,
    OnewayDiscord,
    SymmetricDiscord,
    Irreality,
    Rbn,
}

impl MonitoredResource {
    pub const ALL: [MonitoredResource; 6] = [
        MonitoredResource::Coherence,
        MonitoredResource::PureEntanglement,
        MonitoredResource::OnewayDiscord,
        MonitoredResource::SymmetricDiscord,
        MonitoredResource::Irreality,
        MonitoredResource::Rbn,
    ];

    pub fn label(self) -> &'static str {
        match self {
            MonitoredResource::Coherence => "coherence",
            MonitoredResource::PureEntanglement => "entanglement",
            MonitoredResource::OnewayDiscord => "discord",
            MonitoredResource::SymmetricDiscord => "discord-sym",
            MonitoredResource::Irreality => "irreality",
            MonitoredResource::Rbn => "rbn",
        }
    }

    pub fn parse(name: &str) -> Result<MonitoredResource> {
        Self::ALL
            .into_iter()
            .find(|r| r.label() == name)
            .ok_or_else(|| Error::UnknownPairing(name.to_string()))
    }
}

/// Result of evaluating a resource along a monitoring-strength grid.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub resource: MonitoredResource,
    pub eps: Vec<f64>,
    pub values: Vec<Nats>,
    /// Largest increase between consecutive grid points (0 when none).
    pub max_step_increase: f64,
    /// True when no step increases by more than 1e-8.
    pub monotone: bool,
    pub final_value: Nats,
    /// True when the grid ends at eps = 1 and the resource is gone there.
    pub destroyed: bool,
}

/// Round-off guard: every quantifier here is provably nonnegative, so values
/// in [-1e-9, 0) are zero up to eigensolver noise.
fn clamped(v: f64) -> Nats {
    if v < 0.0 && v >= -QUANT_CLAMP {
        Nats(0.0)
    } else {
        Nats(v)
    }
}

/// Relative entropy of coherence in the given basis:
/// `C_A(rho) = I(rho) - I(Phi_A(rho)) = S(Phi_A(rho)) - S(rho)`.
/// The basis may cover the whole space or one side of a bipartite state.
pub fn coherence(s: &QState, basis: &ObservableBasis) -> Result<Nats> {
    let dephased = channels::phi_meas(s, basis)?;
    Ok(clamped(vn_entropy(&dephased).0 - vn_entropy(s).0))
}

/// Entropy of entanglement of a bipartite pure state: the Shannon entropy of
/// its squared Schmidt coefficients.
pub fn entanglement_pure(psi: &PureState) -> Result<Nats> {
    let sc = schmidt(psi)?;
    Ok(shannon(&sc.coefficients))
}

/// The three equivalent routes to the pure-state entanglement: the Schmidt
/// entropy, the information lost under dephasing in the A-side Schmidt basis,
/// and the mutual information lost under the same dephasing.
pub fn entanglement_pure_forms(psi: &PureState) -> Result<[Nats; 3]> {
    let sc = schmidt(psi)?;
    let h = shannon(&sc.coefficients);
    let s = psi.to_state();
    let dephased = channels::phi_meas(&s, &sc.basis_a)?;
    let info_form = information(&s) - information(&dephased);
    let mutual_form = mutual_information(&s)? - mutual_information(&dephased)?;
    Ok([h, clamped(info_form.0), clamped(mutual_form.0)])
}

fn require_two_qubits(s: &QState, what: &str) -> Result<()> {
    let d = s.dims();
    if d.d_a != 2 || d.d_b != 2 {
        return Err(Error::WrongDimensions(format!(
            "{what} needs a two-qubit state, got {}x{}",
            d.d_a, d.d_b
        )));
    }
    Ok(())
}

fn sigma_yy() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m
}

fn matrix_sqrt_psd(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(m);
    let roots = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| C64::new(l.max(0.0).sqrt(), 0.0)),
    ));
    &vecs * roots * vecs.adjoint()
}

/// Two-qubit concurrence. Instead of the non-Hermitian product
/// `rho rho~`, the spectrum is taken from the Hermitian conjugation
/// `sqrt(rho) rho~ sqrt(rho)`, which shares its eigenvalues.
pub fn concurrence(s: &QState) -> Result<f64> {
    require_two_qubits(s, "concurrence")?;
    let rho = s.rho();
    let yy = sigma_yy();
    let rho_tilde = &yy * rho.conjugate() * &yy;
    let root = matrix_sqrt_psd(rho);
    let mu = eigvalsh(&(&root * rho_tilde * &root));
    // Rank-deficient products put eigensolver noise of order 1e-16 where
    // exact zeros belong; taking square roots would inflate it to 1e-8, so
    // anything far below the leading eigenvalue is treated as zero.
    let floor = 1e-13 * mu.last().copied().unwrap_or(0.0).max(0.0);
    // Ascending; the concurrence wants the square roots descending.
    let lam: Vec<f64> = mu.iter().rev().map(|&x| if x > floor { x.sqrt() } else { 0.0 }).collect();
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Two-qubit entanglement of formation in nats, from the concurrence closed
/// form: the binary entropy of `(1 + sqrt(1 - C^2)) / 2`.
pub fn eof_two_qubit(s: &QState) -> Result<Nats> {
    let c = concurrence(s)?;
    let x = (1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0;
    Ok(shannon(&[x, 1.0 - x]))
}

/// Sampled upper bound on the two-qubit entanglement of formation: random
/// pure-state decompositions of `rho` are drawn by applying seeded random
/// isometries to the spectral decomposition, and the smallest average
/// pure-state entanglement found is returned. Never below [`eof_two_qubit`]
/// (up to round-off), and equal to it for ensembles close to optimal.
pub fn eof_ensemble_upper_bound(s: &QState, samples: usize, seed: u64) -> Result<Nats> {
    require_two_qubits(s, "the ensemble bound")?;
    let (vals, vecs) = eigh(s.rho());
    let mut support: Vec<(f64, CVector)> = vals
        .iter()
        .zip(vecs.column_iter())
        .filter(|(&l, _)| l > 1e-12)
        .map(|(&l, col)| (l, col.into_owned()))
        .collect();
    support.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));
    let rank = support.len();
    let scaled: Vec<CVector> = support
        .iter()
        .map(|(l, v)| v * C64::new(l.sqrt(), 0.0))
        .collect();

    let dims = s.dims();
    let average_for = |iso: &CMatrix| -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..iso.nrows() {
            let mut member = CVector::zeros(dims.total());
            for (k, u) in scaled.iter().enumerate() {
                member += u * iso[(i, k)];
            }
            let p = member.norm_squared();
            if p > 1e-14 {
                let pure = PureState::new(dims, member / C64::new(p.sqrt(), 0.0))?;
                acc += p * entanglement_pure(&pure)?.0;
            }
        }
        Ok(acc)
    };

    let mut best = average_for(&CMatrix::identity(rank, rank))?;
    let mut rng = sampling::rng_from_seed(seed);
    for t in 0..samples {
        let members = rank + (t % (rank + 1));
        let iso = sampling::random_isometry(&mut rng, members, rank);
        best = best.min(average_for(&iso)?);
    }
    Ok(clamped(best))
}

fn side_basis_check(s: &QState, basis: &ObservableBasis) -> Result<Subsystem> {
    if !s.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "discord needs both factors nontrivial".into(),
        ));
    }
    let side = basis.subsystem();
    if basis.dim() != s.dims().dim_of(side) {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {} does not fit side {} of {}x{}",
            basis.dim(),
            side.label(),
            s.dims().d_a,
            s.dims().d_b
        )));
    }
    Ok(side)
}

/// Basis-dependent discord: the mutual information lost when one side is
/// dephased, `D_A(rho) = I_{A:B}(rho) - I_{A:B}(Phi_A(rho))`. The basis tag
/// selects the dephased side.
pub fn discord_basis(s: &QState, basis: &ObservableBasis) -> Result<Nats> {
    side_basis_check(s, basis)?;
    let dephased = channels::phi_meas(s, basis)?;
    let v = mutual_information(s)? - mutual_information(&dephased)?;
    Ok(clamped(v.0))
}

/// The four equivalent routes to the basis-dependent discord:
/// 1. mutual information lost under the one-sided dephasing;
/// 2. irreality of the joint state minus the local coherence of the marginal;
/// 3. the same comparison run against `rho_A (x) 1/d_B` on the full space;
/// 4. conditional information (via the partial-trace Kraus channel) lost
///    under the dephasing.
pub fn discord_basis_forms(s: &QState, basis: &ObservableBasis) -> Result<[Nats; 4]> {
    let side = side_basis_check(s, basis)?;
    let dephased = channels::phi_meas(s, basis)?;

    let f1 = mutual_information(s)? - mutual_information(&dephased)?;

    let joint_irr = vn_entropy(&dephased).0 - vn_entropy(s).0;
    let marginal = s.marginal(side)?;
    let marg_dephased = channels::phi_meas(&marginal, basis)?;
    let local = vn_entropy(&marg_dephased).0 - vn_entropy(&marginal).0;
    let f2 = joint_irr - local;

    let mixed_other = QState::trusted(
        Dims::single(s.dims().dim_of(side.other())).expect("bipartite side"),
        CMatrix::identity(s.dims().dim_of(side.other()), s.dims().dim_of(side.other()))
            .scale(1.0 / s.dims().dim_of(side.other()) as f64),
    );
    let product = match side {
        Subsystem::A => tensor(&marginal, &mixed_other),
        Subsystem::B => tensor(&mixed_other, &marginal),
    };
    let product_dephased = channels::phi_meas(&product, basis)?;
    let f3 = (information(s) - information(&dephased)).0
        - (information(&product) - information(&product_dephased)).0;

    let pt = channels::partial_trace_channel(s.dims(), side)?;
    let cond = |x: &QState| -> Result<f64> {
        Ok((information(x) - information(&pt.apply(x)?)).0)
    };
    let f4 = cond(s)? - cond(&dephased)?;

    Ok([clamped(f1.0), clamped(f2), clamped(f3), clamped(f4)])
}

fn oneway_search(
    s: &QState,
    side: Subsystem,
    cfg: &SearchConfig,
    warm: &[Vec<f64>],
) -> Result<(Nats, ObservableBasis, Vec<f64>, Diagnostics)> {
    if !s.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "discord needs both factors nontrivial".into(),
        ));
    }
    let objective = fast_discord_objective(s, side);
    let r = optimize::optimize_basis_warm(s.dims(), side, Direction::Minimize, cfg, warm, objective)?;
    // Canonical slow evaluation at the optimum guards the fast path.
    let value = discord_basis(s, &r.basis)?;
    Ok((value, r.basis, r.params, r.diagnostics))
}

/// One-way quantum discord: [`discord_basis`] minimized over the chosen
/// side's bases.
pub fn discord_oneway(s: &QState, side: Subsystem, cfg: &SearchConfig) -> Result<QuantifierReport> {
    let (value, basis, _, diagnostics) = oneway_search(s, side, cfg, &[])?;
    Ok(QuantifierReport {
        name: "discord".into(),
        value,
        basis: Some(basis),
        context: None,
        diagnostics: Some(diagnostics),
    })
}

fn context_check(s: &QState, ctx: &Context) -> Result<()> {
    if !s.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "a context quantity needs both factors nontrivial".into(),
        ));
    }
    if !ctx.matches(s.dims()) {
        return Err(Error::DimensionMismatch(format!(
            "context ({}, {}) does not fit a {}x{} state",
            ctx.basis_a.dim(),
            ctx.basis_b.dim(),
            s.dims().d_a,
            s.dims().d_b
        )));
    }
    Ok(())
}

/// Symmetric basis-dependent discord: mutual information lost when both
/// sides are dephased, `D_{A,B}(rho) = I_{A:B}(rho) - I_{A:B}(Phi_A Phi_B(rho))`.
pub fn discord_symmetric_basis(s: &QState, ctx: &Context) -> Result<Nats> {
    context_check(s, ctx)?;
    let dephased = channels::phi_meas(&channels::phi_meas(s, &ctx.basis_a)?, &ctx.basis_b)?;
    let v = mutual_information(s)? - mutual_information(&dephased)?;
    Ok(clamped(v.0))
}

/// The three equivalent routes to the symmetric discord: the two-sided
/// mutual-information loss, the three-process information balance (joint
/// loss minus both local coherences), and the split into one-way discords
/// `D_A(rho) + D_B(Phi_A(rho))`.
pub fn discord_symmetric_forms(s: &QState, ctx: &Context) -> Result<[Nats; 3]> {
    context_check(s, ctx)?;
    let f1 = discord_symmetric_basis(s, ctx)?;

    let both = channels::phi_meas(&channels::phi_meas(s, &ctx.basis_a)?, &ctx.basis_b)?;
    let joint = (information(s) - information(&both)).0;
    let local = |side: Subsystem, basis: &ObservableBasis| -> Result<f64> {
        let marginal = s.marginal(side)?;
        let dephased = channels::phi_meas(&marginal, basis)?;
        Ok(vn_entropy(&dephased).0 - vn_entropy(&marginal).0)
    };
    let f2 = joint - local(Subsystem::A, &ctx.basis_a)? - local(Subsystem::B, &ctx.basis_b)?;

    let after_a = channels::phi_meas(s, &ctx.basis_a)?;
    let f3 = discord_basis(s, &ctx.basis_a)?.0 + discord_basis(&after_a, &ctx.basis_b)?.0;

    Ok([f1, clamped(f2), clamped(f3)])
}

fn symmetric_search(
    s: &QState,
    cfg: &SearchConfig,
    warm: &[(Vec<f64>, Vec<f64>)],
) -> Result<(Nats, Context, (Vec<f64>, Vec<f64>), Diagnostics)> {
    if !s.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "symmetric discord needs both factors nontrivial".into(),
        ));
    }
    let objective = fast_symmetric_objective(s);
    let r = optimize::optimize_context_warm(s.dims(), Direction::Minimize, cfg, warm, objective)?;
    let ctx = Context { basis_a: r.basis_a, basis_b: r.basis_b };
    let value = discord_symmetric_basis(s, &ctx)?;
    Ok((value, ctx, (r.params_a, r.params_b), r.diagnostics))
}

/// Symmetric quantum discord: [`discord_symmetric_basis`] minimized over
/// contexts.
pub fn discord_symmetric(s: &QState, cfg: &SearchConfig) -> Result<QuantifierReport> {
    let (value, ctx, _, diagnostics) = symmetric_search(s, cfg, &[])?;
    Ok(QuantifierReport {
        name: "discord-sym".into(),
        value,
        basis: None,
        context: Some(ctx),
        diagnostics: Some(diagnostics),
    })
}

/// Irreality of the observable given by `basis`: the entropic distance from
/// the state to its dephased version, `S(Phi_A(rho)) - S(rho)`. The basis may
/// cover one side of a bipartite state or the whole space.
pub fn irreality(s: &QState, basis: &ObservableBasis) -> Result<Nats> {
    let dephased = channels::phi_meas(s, basis)?;
    Ok(clamped(vn_entropy(&dephased).0 - vn_entropy(s).0))
}

/// The same quantity computed as a relative entropy, `S(rho || Phi_A(rho))`,
/// exercising an independent code path.
pub fn irreality_relative_entropy(s: &QState, basis: &ObservableBasis) -> Result<Nats> {
    let dephased = channels::phi_meas(s, basis)?;
    Ok(clamped(relative_entropy(s, &dephased)?.0))
}

/// Upper bound on the irreality of a local observable: the Shannon entropy
/// of the basis diagonal of that side's marginal. Saturated by pure states
/// and by maximally entangled states (where it reaches `ln d`).
pub fn irreality_bound(s: &QState, basis: &ObservableBasis) -> Result<Nats> {
    let side = side_basis_check(s, basis)?;
    let marginal = s.marginal(side)?;
    let probs: Vec<f64> = basis
        .vectors()
        .iter()
        .map(|v| v.dotc(&(marginal.rho() * v)).re)
        .collect();
    Ok(shannon(&probs))
}

/// Contextual realism-based nonlocality: how much the irreality of the
/// A-side observable drops after the remote B-side dephasing,
/// `eta_{A,B}(rho) = J_A(rho) - J_A(Phi_B(rho))`.
pub fn rbn_contextual(s: &QState, ctx: &Context) -> Result<Nats> {
    context_check(s, ctx)?;
    let j_before = {
        let dephased = channels::phi_meas(s, &ctx.basis_a)?;
        vn_entropy(&dephased).0 - vn_entropy(s).0
    };
    let after_b = channels::phi_meas(s, &ctx.basis_b)?;
    let j_after = {
        let dephased = channels::phi_meas(&after_b, &ctx.basis_a)?;
        vn_entropy(&dephased).0 - vn_entropy(&after_b).0
    };
    Ok(clamped(j_before - j_after))
}

/// The three equivalent routes to the contextual nonlocality: the irreality
/// difference, the information-balance form comparing the two monitoring
/// processes, and the difference of A-discords before and after the remote
/// dephasing.
pub fn rbn_contextual_forms(s: &QState, ctx: &Context) -> Result<[Nats; 3]> {
    context_check(s, ctx)?;
    let f1 = rbn_contextual(s, ctx)?;

    let after_b = channels::phi_meas(s, &ctx.basis_b)?;
    let loss = |x: &QState| -> Result<f64> {
        let dephased = channels::phi_meas(x, &ctx.basis_a)?;
        Ok((information(x) - information(&dephased)).0)
    };
    let f2 = loss(s)? - loss(&after_b)?;

    let f3 = discord_basis(s, &ctx.basis_a)?.0 - discord_basis(&after_b, &ctx.basis_a)?.0;

    Ok([f1, clamped(f2), clamped(f3)])
}

fn rbn_search(
    s: &QState,
    cfg: &SearchConfig,
    warm: &[(Vec<f64>, Vec<f64>)],
) -> Result<(Nats, Context, (Vec<f64>, Vec<f64>), Diagnostics)> {
    if !s.dims().is_bipartite() {
        return Err(Error::NotBipartite(
            "realism-based nonlocality needs both factors nontrivial".into(),
        ));
    }
    let objective = fast_eta_objective(s);
    let r = optimize::optimize_context_warm(s.dims(), Direction::Maximize, cfg, warm, objective)?;
    let ctx = Context { basis_a: r.basis_a, basis_b: r.basis_b };
    let value = rbn_contextual(s, &ctx)?;
    debug_assert!(
        value.0 <= ((s.dims().d_a.min(s.dims().d_b)) as f64).ln() + 1e-9,
        "nonlocality exceeded its dimensional bound"
    );
    Ok((value, ctx, (r.params_a, r.params_b), r.diagnostics))
}

/// Realism-based nonlocality: [`rbn_contextual`] maximized over contexts.
/// Bounded by `ln min(d_A, d_B)`.
pub fn rbn(s: &QState, cfg: &SearchConfig) -> Result<QuantifierReport> {
    let (value, ctx, _, diagnostics) = rbn_search(s, cfg, &[])?;
    Ok(QuantifierReport {
        name: "rbn".into(),
        value,
        basis: None,
        context: Some(ctx),
        diagnostics: Some(diagnostics),
    })
}

/// Generic correlation: the smallest information loss any unrevealed
/// measurement in the chosen scope can inflict, equivalently the relative
/// entropy to the nearest reality (free) state of that scope.
pub fn generic_correlation(s: &QState, scope: Scope, cfg: &SearchConfig) -> Result<QuantifierReport> {
    let dims = s.dims();
    let (search_dims, part) = match scope {
        Scope::A => (dims, Subsystem::A),
        Scope::B => (dims, Subsystem::B),
        Scope::Global => (Dims::single(dims.total())?, Subsystem::A),
    };
    let rho = s.rho().clone_owned();
    let s_full = vn_entropy(s).0;
    let objective = move |basis: &ObservableBasis| {
        let blocks = blocks_of(&rho, search_dims, part, basis.vectors());
        pooled_entropy(&blocks).0 - s_full
    };
    let r = optimize::optimize_basis(search_dims, part, Direction::Minimize, cfg, objective)?;
    // The scoped state's own spectral basis is always a candidate: dephasing
    // there leaves the scoped marginal invariant, which makes it the exact
    // minimum for the whole-space scope and a strong analytic seed for the
    // local scopes. Taking the better of the two only tightens the minimum.
    let scoped = match scope {
        Scope::Global => s.rho().clone_owned(),
        Scope::A => s.marginal(Subsystem::A)?.rho().clone_owned(),
        Scope::B => s.marginal(Subsystem::B)?.rho().clone_owned(),
    };
    let (_, vecs) = eigh(&scoped);
    let spectral_basis =
        ObservableBasis::new(part, (0..vecs.ncols()).map(|i| vecs.column(i).into_owned()).collect())?;
    let searched = irreality(s, &r.basis)?;
    let spectral = irreality(s, &spectral_basis)?;
    let (value, basis) =
        if spectral.0 < searched.0 { (spectral, spectral_basis) } else { (searched, r.basis) };
    Ok(QuantifierReport {
        name: "generic".into(),
        value,
        basis: Some(basis),
        context: None,
        diagnostics: Some(r.diagnostics),
    })
}

/// Evaluates a resource along a monitoring-strength grid, using the
/// destroying monitoring the resource's own definition dictates. For the
/// discord pairings the optimum is re-located at every strength (warm-started
/// so sweeps never lose a previously found optimum); dephasing one side of
/// the optimal context leaves those minima at zero. The nonlocality pairing
/// instead holds the input state's optimal context fixed along the sweep:
/// monitoring one member of that context is exactly what extinguishes the
/// nonlocality *of that context*, whereas a fresh maximization over the
/// dephased state can migrate to other contexts and retain a residue, so the
/// re-optimized quantity is not the resource this monitoring destroys.
/// Reports per-step monotonicity and whether the resource is fully destroyed
/// at `eps = 1`.
///
/// `basis` selects the monitored observable for the coherence and irreality
/// pairings (A-side computational when omitted) and is ignored by the
/// optimized pairings.
pub fn resource_monotonicity_check(
    s: &QState,
    resource: MonitoredResource,
    basis: Option<&ObservableBasis>,
    eps_grid: &[f64],
    cfg: &SearchConfig,
) -> Result<SweepReport> {
    if eps_grid.is_empty() {
        return Err(Error::DimensionMismatch("the sweep needs a nonempty strength grid".into()));
    }
    let strengths: Vec<MonitoringStrength> =
        eps_grid.iter().map(|&e| MonitoringStrength::new(e)).collect::<Result<_>>()?;

    let default_basis;
    let values: Vec<Nats> = match resource {
        MonitoredResource::Coherence | MonitoredResource::Irreality => {
            let b = match basis {
                Some(b) => b,
                None => {
                    default_basis = ObservableBasis::computational(Subsystem::A, s.dims().d_a);
                    &default_basis
                }
            };
            // Validate once up front so errors carry context, not grid index.
            channels::phi_meas(s, b)?;
            let mut out = Vec::with_capacity(strengths.len());
            for &e in &strengths {
                let state = channels::monitoring_with(s, |x| channels::phi_meas(x, b), e)?;
                out.push(match resource {
                    MonitoredResource::Coherence => coherence(&state, b)?,
                    _ => irreality(&state, b)?,
                });
            }
            out
        }
        MonitoredResource::PureEntanglement => {
            require_two_qubits(s, "the entanglement sweep")?;
            let psi = PureState::from_state(s)?;
            let schmidt_a = schmidt(&psi)?.basis_a;
            let mut out = Vec::with_capacity(strengths.len());
            for &e in &strengths {
                let state = channels::monitoring_with(s, |x| channels::phi_meas(x, &schmidt_a), e)?;
                out.push(eof_two_qubit(&state)?);
            }
            out
        }
        MonitoredResource::OnewayDiscord => {
            let (_, basis0, params0, _) = oneway_search(s, Subsystem::A, cfg, &[])?;
            let mut prev = params0.clone();
            let mut out = Vec::with_capacity(strengths.len());
            for &e in &strengths {
                let state = channels::monitoring_with(s, |x| channels::phi_meas(x, &basis0), e)?;
                let (v, _, p, _) =
                    oneway_search(&state, Subsystem::A, cfg, &[prev, params0.clone()])?;
                prev = p;
                out.push(v);
            }
            out
        }
        MonitoredResource::SymmetricDiscord => {
            let (_, ctx0, params0, _) = symmetric_search(s, cfg, &[])?;
            let mut prev = params0.clone();
            let mut out = Vec::with_capacity(strengths.len());
            for &e in &strengths {
                let state = channels::monitoring_with(
                    s,
                    |x| channels::phi_meas(&channels::phi_meas(x, &ctx0.basis_a)?, &ctx0.basis_b),
                    e,
                )?;
                let (v, _, p, _) = symmetric_search(&state, cfg, &[prev, params0.clone()])?;
                prev = p;
                out.push(v);
            }
            out
        }
        MonitoredResource::Rbn => {
            let (_, ctx0, _, _) = rbn_search(s, cfg, &[])?;
            let mut out = Vec::with_capacity(strengths.len());
            for &e in &strengths {
                let state =
                    channels::monitoring_with(s, |x| channels::phi_meas(x, &ctx0.basis_b), e)?;
                out.push(rbn_contextual(&state, &ctx0)?);
            }
            out
        }
    };

    let mut max_step_increase = 0.0f64;
    for w in values.windows(2) {
        max_step_increase = max_step_increase.max(w[1].0 - w[0].0);
    }
    let final_value = *values.last().expect("nonempty grid");
    let ends_at_one = (eps_grid.last().unwrap() - 1.0).abs() < 1e-12;
    Ok(SweepReport {
        resource,
        eps: eps_grid.to_vec(),
        values,
        max_step_increase,
        monotone: max_step_increase <= 1e-8,
        final_value,
        destroyed: ends_at_one && final_value.0 <= 1e-8,
    })
}

// ---------------------------------------------------------------------------
// Fast evaluators for optimizer objectives.
//
// Dephasing one side block-diagonalizes the state: in the measured basis
// {|v_a>}, Phi_A(rho) = (+)_a M_a with M_a = (<v_a| (x) 1) rho (|v_a> (x) 1),
// so its entropy is the Shannon entropy of the pooled block eigenvalues and
// the dephased marginal's probabilities are the block traces. This avoids
// rebuilding and rediagonalizing full-dimension matrices inside search loops;
// the generic channel route stays available as the independent slow path.

fn herm2_eigs(m: &CMatrix) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let c = m[(1, 1)].re;
    let tr = a + c;
    let disc = ((a - c) * (a - c) + 4.0 * m[(0, 1)].norm_sqr()).sqrt();
    [(tr - disc) / 2.0, (tr + disc) / 2.0]
}

fn blocks_of(rho: &CMatrix, dims: Dims, side: Subsystem, vectors: &[CVector]) -> Vec<CMatrix> {
    let Dims { d_a, d_b } = dims;
    match side {
        Subsystem::A => vectors
            .iter()
            .map(|v| {
                let mut m = CMatrix::zeros(d_b, d_b);
                for i in 0..d_b {
                    for j in 0..d_b {
                        let mut acc = C64::new(0.0, 0.0);
                        for k in 0..d_a {
                            let ck = v[k].conj();
                            for l in 0..d_a {
                                acc += ck * rho[(k * d_b + i, l * d_b + j)] * v[l];
                            }
                        }
                        m[(i, j)] = acc;
                    }
                }
                m
            })
            .collect(),
        Subsystem::B => vectors
            .iter()
            .map(|w| {
                let mut m = CMatrix::zeros(d_a, d_a);
                for i in 0..d_a {
                    for j in 0..d_a {
                        let mut acc = C64::new(0.0, 0.0);
                        for k in 0..d_b {
                            let ck = w[k].conj();
                            for l in 0..d_b {
                                acc += ck * rho[(i * d_b + k, j * d_b + l)] * w[l];
                            }
                        }
                        m[(i, j)] = acc;
                    }
                }
                m
            })
            .collect(),
    }
}

/// Entropy of the pooled block spectrum and the per-block weights.
fn pooled_entropy(blocks: &[CMatrix]) -> (f64, Vec<f64>) {
    let mut eigs: Vec<f64> = Vec::with_capacity(blocks.len() * blocks[0].nrows());
    let mut probs = Vec::with_capacity(blocks.len());
    for m in blocks {
        probs.push(m.trace().re);
        match m.nrows() {
            1 => eigs.push(m[(0, 0)].re),
            2 => eigs.extend(herm2_eigs(m)),
            _ => eigs.extend(eigvalsh(m)),
        }
    }
    (shannon(&eigs).0, probs)
}

/// `D_basis` on the given side as a self-contained objective. Writing the
/// dephased mutual information through the blocks turns the discord into
/// `S(rho_side) - S(rho) - H(block traces) + S(pooled blocks)`.
fn fast_discord_objective(
    s: &QState,
    side: Subsystem,
) -> impl Fn(&ObservableBasis) -> f64 + Sync {
    let rho = s.rho().clone_owned();
    let dims = s.dims();
    let constant = vn_entropy(&s.marginal(side).expect("bipartite state")).0 - vn_entropy(s).0;
    move |basis: &ObservableBasis| {
        let blocks = blocks_of(&rho, dims, side, basis.vectors());
        let (pooled, probs) = pooled_entropy(&blocks);
        constant + pooled - shannon(&probs).0
    }
}

/// `D_{A,B}` as a self-contained objective: with both sides dephased the
/// state is diagonal in the product basis, so everything reduces to the
/// joint outcome distribution `q_ab = <v_a w_b| rho |v_a w_b>`.
fn fast_symmetric_objective(s: &QState) -> impl Fn(&ObservableBasis, &ObservableBasis) -> f64 + Sync {
    let rho = s.rho().clone_owned();
    let dims = s.dims();
    let i_ab = mutual_information(s).expect("bipartite state").0;
    move |ba: &ObservableBasis, bb: &ObservableBasis| {
        let blocks = blocks_of(&rho, dims, Subsystem::A, ba.vectors());
        let q = joint_probs(&blocks, bb.vectors());
        let (pa, pb) = joint_marginals(&q, dims);
        i_ab - (shannon(&pa).0 + shannon(&pb).0 - shannon(&q).0)
    }
}

/// `eta_{A,B}` as a self-contained objective:
/// `[S(Phi_A rho) - S(rho)] - [S(Phi_A Phi_B rho) - S(Phi_B rho)]` with the
/// doubly dephased entropy read from the joint outcome distribution.
fn fast_eta_objective(s: &QState) -> impl Fn(&ObservableBasis, &ObservableBasis) -> f64 + Sync {
    let rho = s.rho().clone_owned();
    let dims = s.dims();
    let s_full = vn_entropy(s).0;
    move |ba: &ObservableBasis, bb: &ObservableBasis| {
        let blocks_a = blocks_of(&rho, dims, Subsystem::A, ba.vectors());
        let s_phi_a = pooled_entropy(&blocks_a).0;
        let blocks_b = blocks_of(&rho, dims, Subsystem::B, bb.vectors());
        let s_phi_b = pooled_entropy(&blocks_b).0;
        let q = joint_probs(&blocks_a, bb.vectors());
        (s_phi_a - s_full) - (shannon(&q).0 - s_phi_b)
    }
}

/// Joint outcome probabilities `q_ab = <w_b| M_a |w_b>` from the A-side
/// blocks, flattened as `a * d_b + b`.
fn joint_probs(blocks_a: &[CMatrix], vectors_b: &[CVector]) -> Vec<f64> {
    let mut q = Vec::with_capacity(blocks_a.len() * vectors_b.len());
    for m in blocks_a {
        for w in vectors_b {
            q.push(w.dotc(&(m * w)).re);
        }
    }
    q
}

fn joint_marginals(q: &[f64], dims: Dims) -> (Vec<f64>, Vec<f64>) {
    let mut pa = vec![0.0; dims.d_a];
    let mut pb = vec![0.0; dims.d_b];
    for a in 0..dims.d_a {
        for b in 0..dims.d_b {
            pa[a] += q[a * dims.d_b + b];
            pb[b] += q[a * dims.d_b + b];
        }
    }
    (pa, pb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_state, computational_ket, maximally_mixed, werner_state};
    use approx::assert_abs_diff_eq;

    const LN_2: f64 = std::f64::consts::LN_2;

    fn z_basis(side: Subsystem, dim: usize) -> ObservableBasis {
        ObservableBasis::computational(side, dim)
    }

    fn x_basis(side: Subsystem) -> ObservableBasis {
        ObservableBasis::fourier(side, 2)
    }

    fn plus_state() -> QState {
        let psi = CVector::from_vec(vec![
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ]);
        PureState::new(Dims::single(2).unwrap(), psi).unwrap().to_state()
    }

    /// 1/2 (|+><+| (x) |0><0| + |-><-| (x) |1><1|): classically correlated,
    /// yet remote dephasing in X on side B erases all A-side coherence.
    fn cross_correlated() -> QState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = CVector::from_vec(vec![C64::new(h, 0.0), C64::new(h, 0.0)]);
        let minus = CVector::from_vec(vec![C64::new(h, 0.0), C64::new(-h, 0.0)]);
        let e0 = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let e1 = CVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let kron = |x: &CVector, y: &CVector| x.kronecker(y);
        let p1 = kron(&plus, &e0);
        let p2 = kron(&minus, &e1);
        let rho = (&p1 * p1.adjoint() + &p2 * p2.adjoint()).scale(0.5);
        QState::new(Dims { d_a: 2, d_b: 2 }, rho).unwrap()
    }

    fn product_02() -> QState {
        let a = computational_ket(Dims::single(2).unwrap(), 0).unwrap().to_state();
        let b = computational_ket(Dims::single(2).unwrap(), 1).unwrap().to_state();
        tensor(&a, &b)
    }

    #[test]
    fn coherence_of_known_states() {
        let diag = QState::new(
            Dims::single(2).unwrap(),
            CMatrix::from_diagonal(&CVector::from_vec(vec![C64::new(0.3, 0.0), C64::new(0.7, 0.0)])),
        )
        .unwrap();
        assert_abs_diff_eq!(coherence(&diag, &z_basis(Subsystem::A, 2)).unwrap().0, 0.0, epsilon = 1e-12);

        assert_abs_diff_eq!(coherence(&plus_state(), &z_basis(Subsystem::A, 2)).unwrap().0, LN_2, epsilon = 1e-12);

        // Uniform all-ones matrix / 3: the maximally coherent qutrit state.
        let third = C64::new(1.0 / 3.0, 0.0);
        let rho = CMatrix::from_element(3, 3, third);
        let s = QState::new(Dims::single(3).unwrap(), rho).unwrap();
        assert_abs_diff_eq!(
            coherence(&s, &z_basis(Subsystem::A, 3)).unwrap().0,
            3.0_f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn pure_entanglement_values_and_forms() {
        let prod = computational_ket(Dims { d_a: 2, d_b: 2 }, 0).unwrap();
        assert_abs_diff_eq!(entanglement_pure(&prod).unwrap().0, 0.0, epsilon = 1e-12);

        let bell = bell_state();
        assert_abs_diff_eq!(entanglement_pure(&bell).unwrap().0, LN_2, epsilon = 1e-12);

        let psi = CVector::from_vec(vec![
            C64::new(0.8f64.sqrt(), 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.2f64.sqrt(), 0.0),
        ]);
        let skew = PureState::new(Dims { d_a: 2, d_b: 2 }, psi).unwrap();
        assert_abs_diff_eq!(entanglement_pure(&skew).unwrap().0, 0.5004024235381879, epsilon = 1e-12);

        for state in [&bell, &skew] {
            let [h, info, mutual] = entanglement_pure_forms(state).unwrap();
            assert_abs_diff_eq!(h.0, info.0, epsilon = 1e-10);
            assert_abs_diff_eq!(h.0, mutual.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn concurrence_and_eof() {
        let sep = QState::new(
            Dims { d_a: 2, d_b: 2 },
            CMatrix::from_diagonal(&CVector::from_vec(vec![
                C64::new(0.5, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.5, 0.0),
            ])),
        )
        .unwrap();
        assert_abs_diff_eq!(eof_two_qubit(&sep).unwrap().0, 0.0, epsilon = 1e-12);

        let bell = bell_state().to_state();
        assert_abs_diff_eq!(concurrence(&bell).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(eof_two_qubit(&bell).unwrap().0, LN_2, epsilon = 1e-10);

        let w9 = werner_state(0.9).unwrap();
        assert_abs_diff_eq!(concurrence(&w9).unwrap(), 0.85, epsilon = 1e-10);
        assert_abs_diff_eq!(eof_two_qubit(&w9).unwrap().0, 0.5471391656703829, epsilon = 1e-9);

        // Below the concurrence threshold w = 1/3 the state is separable.
        assert_abs_diff_eq!(eof_two_qubit(&werner_state(0.3).unwrap()).unwrap().0, 0.0, epsilon = 1e-12);

        assert!(eof_two_qubit(&maximally_mixed(Dims { d_a: 2, d_b: 3 })).is_err());
    }

    #[test]
    fn eof_matches_pure_entanglement_on_pure_states() {
        let mut rng = sampling::rng_from_seed(31);
        for _ in 0..20 {
            let psi = sampling::random_pure(&mut rng, Dims { d_a: 2, d_b: 2 });
            let direct = entanglement_pure(&psi).unwrap().0;
            let closed = eof_two_qubit(&psi.to_state()).unwrap().0;
            assert_abs_diff_eq!(direct, closed, epsilon = 1e-8);
        }
    }

    #[test]
    fn ensemble_bound_brackets_the_closed_form() {
        let bell = bell_state();
        let exact = eof_ensemble_upper_bound(&bell.to_state(), 5, 1).unwrap().0;
        assert_abs_diff_eq!(exact, LN_2, epsilon = 1e-10);

        // Pure input: the decomposition is unique, any sample count agrees.
        let mut rng = sampling::rng_from_seed(8);
        let psi = sampling::random_pure(&mut rng, Dims { d_a: 2, d_b: 2 });
        let e = entanglement_pure(&psi).unwrap().0;
        let bound = eof_ensemble_upper_bound(&psi.to_state(), 7, 2).unwrap().0;
        assert_abs_diff_eq!(bound, e, epsilon = 1e-9);

        let w9 = werner_state(0.9).unwrap();
        let closed = eof_two_qubit(&w9).unwrap().0;
        let bound = eof_ensemble_upper_bound(&w9, 300, 7).unwrap().0;
        assert!(bound >= closed - 1e-8, "sampled bound {bound} dipped below the closed form {closed}");
        assert!(bound <= 0.70, "sampled bound {bound} failed to approach the closed form");
    }

    #[test]
    fn discord_known_values() {
        assert_abs_diff_eq!(
            discord_basis(&product_02(), &z_basis(Subsystem::A, 2)).unwrap().0,
            0.0,
            epsilon = 1e-12
        );

        let bell = bell_state().to_state();
        assert_abs_diff_eq!(
            discord_basis(&bell, &z_basis(Subsystem::A, 2)).unwrap().0,
            LN_2,
            epsilon = 1e-11
        );

        // Classically correlated mixture is a fixed point of the Z dephasing.
        let cc = channels::phi_meas(&bell, &z_basis(Subsystem::A, 2)).unwrap();
        assert_abs_diff_eq!(discord_basis(&cc, &z_basis(Subsystem::A, 2)).unwrap().0, 0.0, epsilon = 1e-11);

        let w5 = werner_state(0.5).unwrap();
        assert_abs_diff_eq!(
            discord_basis(&w5, &z_basis(Subsystem::A, 2)).unwrap().0,
            0.1819394787702306,
            epsilon = 1e-10
        );
    }

    #[test]
    fn discord_forms_agree_on_random_states() {
        let mut rng = sampling::rng_from_seed(59);
        for trial in 0..30 {
            let dims = if trial % 2 == 0 { Dims { d_a: 2, d_b: 2 } } else { Dims { d_a: 2, d_b: 3 } };
            let s = sampling::random_state(&mut rng, dims);
            let side = if trial % 3 == 0 { Subsystem::B } else { Subsystem::A };
            let basis = sampling::random_basis(&mut rng, side, dims.dim_of(side));
            let forms = discord_basis_forms(&s, &basis).unwrap();
            for f in &forms[1..] {
                assert_abs_diff_eq!(forms[0].0, f.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn fast_objectives_match_the_slow_paths() {
        let mut rng = sampling::rng_from_seed(101);
        for trial in 0..15 {
            let dims = if trial % 2 == 0 { Dims { d_a: 2, d_b: 2 } } else { Dims { d_a: 2, d_b: 3 } };
            let s = sampling::random_state(&mut rng, dims);
            let ba = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
            let bb = sampling::random_basis(&mut rng, Subsystem::B, dims.d_b);
            let ctx = Context::new(ba.clone(), bb.clone()).unwrap();

            let fast_d = fast_discord_objective(&s, Subsystem::A)(&ba);
            assert_abs_diff_eq!(fast_d, discord_basis(&s, &ba).unwrap().0, epsilon = 1e-11);

            let fast_sym = fast_symmetric_objective(&s)(&ba, &bb);
            assert_abs_diff_eq!(fast_sym, discord_symmetric_basis(&s, &ctx).unwrap().0, epsilon = 1e-11);

            let fast_eta = fast_eta_objective(&s)(&ba, &bb);
            assert_abs_diff_eq!(fast_eta, rbn_contextual(&s, &ctx).unwrap().0, epsilon = 1e-11);
        }
    }

    #[test]
    fn oneway_discord_reports() {
        let cfg = SearchConfig::default();

        let rep = discord_oneway(&product_02(), Subsystem::A, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, 0.0, epsilon = 1e-10);

        let bell = bell_state().to_state();
        let rep = discord_oneway(&bell, Subsystem::A, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, LN_2, epsilon = 1e-8);
        assert!(rep.diagnostics.as_ref().unwrap().flat_landscape, "Bell discord is basis-independent");

        let w5 = werner_state(0.5).unwrap();
        let rep = discord_oneway(&w5, Subsystem::A, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, 0.1819394787702306, epsilon = 1e-8);
    }

    #[test]
    fn symmetric_discord_values_and_decomposition() {
        let bell = bell_state().to_state();
        let ctx = Context::new(z_basis(Subsystem::A, 2), z_basis(Subsystem::B, 2)).unwrap();
        assert_abs_diff_eq!(discord_symmetric_basis(&bell, &ctx).unwrap().0, LN_2, epsilon = 1e-11);

        let mut rng = sampling::rng_from_seed(71);
        for trial in 0..20 {
            let dims = if trial % 2 == 0 { Dims { d_a: 2, d_b: 2 } } else { Dims { d_a: 3, d_b: 2 } };
            let s = sampling::random_state(&mut rng, dims);
            let ctx = Context::new(
                sampling::random_basis(&mut rng, Subsystem::A, dims.d_a),
                sampling::random_basis(&mut rng, Subsystem::B, dims.d_b),
            )
            .unwrap();
            let forms = discord_symmetric_forms(&s, &ctx).unwrap();
            assert_abs_diff_eq!(forms[0].0, forms[1].0, epsilon = 1e-10);
            assert_abs_diff_eq!(forms[0].0, forms[2].0, epsilon = 1e-10);
        }

        let cfg = SearchConfig::default();
        let rep = discord_symmetric(&bell, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, LN_2, epsilon = 1e-6);

        // A classically correlated state is free: the optimum finds its basis.
        let cc = channels::phi_meas(&bell, &z_basis(Subsystem::A, 2)).unwrap();
        let rep = discord_symmetric(&cc, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn irreality_values_and_decomposition() {
        let bell = bell_state().to_state();

        // Reality states carry none.
        let reality = channels::phi_meas(&bell, &z_basis(Subsystem::A, 2)).unwrap();
        assert_abs_diff_eq!(irreality(&reality, &z_basis(Subsystem::A, 2)).unwrap().0, 0.0, epsilon = 1e-11);

        // Maximal entanglement saturates ln d for every observable.
        let mut rng = sampling::rng_from_seed(37);
        for _ in 0..3 {
            let basis = sampling::random_basis(&mut rng, Subsystem::A, 2);
            assert_abs_diff_eq!(irreality(&bell, &basis).unwrap().0, LN_2, epsilon = 1e-10);
        }

        // Pure product: all of it is local coherence.
        let prod = tensor(&plus_state(), &computational_ket(Dims::single(2).unwrap(), 0).unwrap().to_state());
        assert_abs_diff_eq!(irreality(&prod, &z_basis(Subsystem::A, 2)).unwrap().0, LN_2, epsilon = 1e-11);
        assert_abs_diff_eq!(discord_basis(&prod, &z_basis(Subsystem::A, 2)).unwrap().0, 0.0, epsilon = 1e-11);

        // J_A = C_A(rho_A) + D_A(rho) on random states, and the relative
        // entropy route agrees.
        for trial in 0..25 {
            let dims = if trial % 2 == 0 { Dims { d_a: 2, d_b: 2 } } else { Dims { d_a: 2, d_b: 3 } };
            let s = sampling::random_state(&mut rng, dims);
            let basis = sampling::random_basis(&mut rng, Subsystem::A, 2);
            let total = irreality(&s, &basis).unwrap().0;
            let marginal = s.marginal(Subsystem::A).unwrap();
            let local = coherence(&marginal, &basis).unwrap().0;
            let disc = discord_basis(&s, &basis).unwrap().0;
            assert_abs_diff_eq!(total, local + disc, epsilon = 1e-10);
            assert_abs_diff_eq!(total, irreality_relative_entropy(&s, &basis).unwrap().0, epsilon = 1e-9);
        }
    }

    #[test]
    fn irreality_bound_holds_and_saturates() {
        let bell = bell_state().to_state();
        let b = z_basis(Subsystem::A, 2);
        let bound = irreality_bound(&bell, &b).unwrap().0;
        assert_abs_diff_eq!(bound, LN_2, epsilon = 1e-11);
        assert_abs_diff_eq!(irreality(&bell, &b).unwrap().0, bound, epsilon = 1e-10);

        assert_abs_diff_eq!(irreality_bound(&product_02(), &b).unwrap().0, 0.0, epsilon = 1e-12);

        let mut rng = sampling::rng_from_seed(43);
        for _ in 0..10 {
            let s = sampling::random_state(&mut rng, Dims { d_a: 2, d_b: 2 });
            let basis = sampling::random_basis(&mut rng, Subsystem::A, 2);
            let j = irreality(&s, &basis).unwrap().0;
            let bound = irreality_bound(&s, &basis).unwrap().0;
            assert!(j <= bound + 1e-9, "bound violated: {j} > {bound}");
        }
        // Purity restores equality.
        for _ in 0..10 {
            let psi = sampling::random_pure(&mut rng, Dims { d_a: 2, d_b: 2 });
            let s = psi.to_state();
            let basis = sampling::random_basis(&mut rng, Subsystem::A, 2);
            let j = irreality(&s, &basis).unwrap().0;
            let bound = irreality_bound(&s, &basis).unwrap().0;
            assert_abs_diff_eq!(j, bound, epsilon = 1e-8);
        }
    }

    #[test]
    fn contextual_nonlocality_properties() {
        let ctx_zz = Context::new(z_basis(Subsystem::A, 2), z_basis(Subsystem::B, 2)).unwrap();

        assert_abs_diff_eq!(rbn_contextual(&product_02(), &ctx_zz).unwrap().0, 0.0, epsilon = 1e-11);

        let bell = bell_state().to_state();
        assert_abs_diff_eq!(rbn_contextual(&bell, &ctx_zz).unwrap().0, LN_2, epsilon = 1e-10);

        // B-side reality states carry none for the same B.
        let mut rng = sampling::rng_from_seed(97);
        let s = sampling::random_state(&mut rng, Dims { d_a: 2, d_b: 2 });
        let reality = channels::phi_meas(&s, &ctx_zz.basis_b).unwrap();
        assert_abs_diff_eq!(rbn_contextual(&reality, &ctx_zz).unwrap().0, 0.0, epsilon = 1e-10);

        // The cross-correlated mixture reaches the two-qubit maximum at {Z, X}.
        let cc = cross_correlated();
        let ctx_zx = Context::new(z_basis(Subsystem::A, 2), x_basis(Subsystem::B)).unwrap();
        assert_abs_diff_eq!(rbn_contextual(&cc, &ctx_zx).unwrap().0, LN_2, epsilon = 1e-10);

        // Symmetry under exchanging the sides, and the route agreement.
        for trial in 0..15 {
            let dims = if trial % 2 == 0 { Dims { d_a: 2, d_b: 2 } } else { Dims { d_a: 2, d_b: 3 } };
            let s = sampling::random_state(&mut rng, dims);
            let ctx = Context::new(
                sampling::random_basis(&mut rng, Subsystem::A, dims.d_a),
                sampling::random_basis(&mut rng, Subsystem::B, dims.d_b),
            )
            .unwrap();
            let here = rbn_contextual(&s, &ctx).unwrap().0;
            let there = rbn_contextual(&s.swapped(), &ctx.swapped()).unwrap().0;
            assert_abs_diff_eq!(here, there, epsilon = 1e-10);

            let forms = rbn_contextual_forms(&s, &ctx).unwrap();
            assert_abs_diff_eq!(forms[0].0, forms[1].0, epsilon = 1e-10);
            assert_abs_diff_eq!(forms[0].0, forms[2].0, epsilon = 1e-10);
            assert!(here <= (dims.d_a.min(dims.d_b) as f64).ln() + 1e-9);
        }
    }

    #[test]
    fn optimized_nonlocality_saturates_on_bell_and_cc() {
        let cfg = SearchConfig::default();

        let bell = bell_state().to_state();
        let rep = rbn(&bell, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, LN_2, epsilon = 1e-6);
        let ctx = rep.context.unwrap();
        assert_abs_diff_eq!(rbn_contextual(&bell, &ctx).unwrap().0, LN_2, epsilon = 1e-6);

        // The optimizer must find the {Z, X}-type optimum of the
        // cross-correlated mixture, where many contexts give zero.
        let rep = rbn(&cross_correlated(), &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, LN_2, epsilon = 1e-6);

        let rep = rbn(&product_02(), &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn generic_correlation_scopes() {
        let cfg = SearchConfig::default();

        let bell = bell_state().to_state();
        let rep = generic_correlation(&bell, Scope::A, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, LN_2, epsilon = 1e-8);
        assert!(rep.diagnostics.as_ref().unwrap().flat_landscape);

        // A state's own eigenbasis is a free state: global scope finds zero.
        let rep = generic_correlation(&plus_state(), Scope::Global, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, 0.0, epsilon = 1e-10);

        // The cross-correlated state is X-real on side A.
        let rep = generic_correlation(&cross_correlated(), Scope::A, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, 0.0, epsilon = 1e-10);

        let rep = generic_correlation(&cross_correlated(), Scope::B, &cfg).unwrap();
        assert_abs_diff_eq!(rep.value.0, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn coherence_sweep_matches_the_closed_form() {
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        let report = resource_monotonicity_check(
            &plus_state(),
            MonitoredResource::Coherence,
            None,
            &grid,
            &SearchConfig::default(),
        )
        .unwrap();
        let expected = [LN_2, 0.31637701930350853, 0.130812035941137, 0.03158394240196316, 0.0];
        for (v, e) in report.values.iter().zip(expected) {
            assert_abs_diff_eq!(v.0, e, epsilon = 1e-10);
        }
        assert!(report.monotone);
        assert!(report.destroyed);
        assert_abs_diff_eq!(report.max_step_increase, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn entanglement_sweep_destroys_the_bell_state() {
        let grid: Vec<f64> = (0..=5).map(|i| i as f64 / 5.0).collect();
        let report = resource_monotonicity_check(
            &bell_state().to_state(),
            MonitoredResource::PureEntanglement,
            None,
            &grid,
            &SearchConfig::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(report.values[0].0, LN_2, epsilon = 1e-10);
        assert!(report.monotone, "step increase {}", report.max_step_increase);
        assert!(report.destroyed);

        // Mixed inputs are rejected.
        assert!(resource_monotonicity_check(
            &werner_state(0.5).unwrap(),
            MonitoredResource::PureEntanglement,
            None,
            &grid,
            &SearchConfig::default(),
        )
        .is_err());
    }

    #[test]
    fn optimized_sweeps_stay_monotone() {
        let grid = [0.0, 0.5, 1.0];
        let cfg = SearchConfig::default();
        let w7 = werner_state(0.7).unwrap();
        for resource in [
            MonitoredResource::OnewayDiscord,
            MonitoredResource::SymmetricDiscord,
            MonitoredResource::Rbn,
        ] {
            let report = resource_monotonicity_check(&w7, resource, None, &grid, &cfg).unwrap();
            assert!(
                report.monotone,
                "{} increased by {}",
                resource.label(),
                report.max_step_increase
            );
            assert!(report.destroyed, "{} kept {} at full strength", resource.label(), report.final_value.0);
        }
    }

    #[test]
    fn sweep_input_validation() {
        let s = plus_state();
        assert!(resource_monotonicity_check(
            &s,
            MonitoredResource::Coherence,
            None,
            &[],
            &SearchConfig::default()
        )
        .is_err());
        assert!(matches!(
            resource_monotonicity_check(&s, MonitoredResource::Coherence, None, &[0.0, 1.5], &SearchConfig::default()),
            Err(Error::EpsilonOutOfRange(_))
        ));
        assert!(matches!(
            MonitoredResource::parse("steering"),
            Err(Error::UnknownPairing(_))
        ));
        assert_eq!(MonitoredResource::parse("rbn").unwrap(), MonitoredResource::Rbn);
    }
}
