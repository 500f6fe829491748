//! Randomized property suites behind `qres verify`. Every property draws its
//! own deterministic RNG stream from the command seed, reports the worst
//! residual it saw, and passes iff that residual stays inside its tolerance.

use qres::channels::{self, Destroyer, MonitoringStrength};
use qres::dilation::{dilate, flow_ledger};
use qres::entropy::{information, mutual_information, relative_entropy, vn_entropy};
use qres::optimize::{self, Direction};
use qres::qstate::{max_abs_diff, maximally_mixed, tensor};
use qres::quantifiers::{
    self, coherence, discord_basis, discord_basis_forms, discord_oneway, discord_symmetric_forms,
    entanglement_pure, eof_two_qubit, irreality, irreality_bound, rbn_contextual,
    resource_monotonicity_check, Context, MonitoredResource,
};
use qres::sampling::{self, rng_from_seed};
use qres::{CMatrix, Dims, ObservableBasis, QState, SearchConfig, Subsystem, C64};

use crate::CliError;

pub const SUITES: [&str; 5] = ["entropy", "channels", "dilation", "quantifiers", "optimize"];

#[derive(Debug, Clone, serde::Serialize)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
}

struct Check {
    suite: &'static str,
    name: &'static str,
    tolerance: f64,
    run: fn(usize, u64) -> f64,
}

impl Check {
    fn execute(&self, samples: usize, seed: u64) -> PropertyResult {
        let worst = (self.run)(samples, seed);
        PropertyResult {
            suite: self.suite,
            name: self.name,
            pass: worst <= self.tolerance && worst.is_finite(),
            worst_residual: worst,
            tolerance: self.tolerance,
        }
    }
}

fn dims_cycle(k: usize) -> Dims {
    match k % 4 {
        0 => Dims { d_a: 2, d_b: 2 },
        1 => Dims { d_a: 2, d_b: 3 },
        2 => Dims { d_a: 3, d_b: 2 },
        _ => Dims { d_a: 4, d_b: 1 },
    }
}

fn bipartite_cycle(k: usize) -> Dims {
    match k % 3 {
        0 => Dims { d_a: 2, d_b: 2 },
        1 => Dims { d_a: 2, d_b: 3 },
        _ => Dims { d_a: 3, d_b: 2 },
    }
}

// --- entropy ---------------------------------------------------------------

fn entropy_bounds(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = dims_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let h = vn_entropy(&s).0;
        worst = worst.max(-h).max(h - (dims.total() as f64).ln());
    }
    worst
}

fn entropy_unitary_invariance(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = dims_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let u = sampling::random_unitary(&mut rng, dims.total());
        let rotated = QState::new(dims, &u * s.rho() * u.adjoint()).expect("unitary conjugation");
        worst = worst.max((vn_entropy(&rotated).0 - vn_entropy(&s).0).abs());
    }
    worst
}

fn entropy_relative_gap(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let basis = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
        let dephased = channels::phi_meas(&s, &basis).expect("valid basis");
        let re = relative_entropy(&s, &dephased).expect("same support").0;
        let gap = vn_entropy(&dephased).0 - vn_entropy(&s).0;
        worst = worst.max((re - gap).abs());
    }
    worst
}

fn entropy_concavity(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = dims_cycle(k);
        let a = sampling::random_state(&mut rng, dims);
        let b = sampling::random_state(&mut rng, dims);
        let w = (k as f64 + 0.5) / samples as f64;
        let mix = QState::new(dims, a.rho().scale(w) + b.rho().scale(1.0 - w)).expect("convex mix");
        let deficit = w * vn_entropy(&a).0 + (1.0 - w) * vn_entropy(&b).0 - vn_entropy(&mix).0;
        worst = worst.max(deficit);
    }
    worst
}

fn entropy_mutual_information(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        worst = worst.max(-mutual_information(&s).expect("bipartite").0);
        let a = sampling::random_state(&mut rng, Dims::single(dims.d_a).expect("d >= 1"));
        let b = sampling::random_state(&mut rng, Dims::single(dims.d_b).expect("d >= 1"));
        worst = worst.max(mutual_information(&tensor(&a, &b)).expect("bipartite").0.abs());
    }
    worst
}

// --- channels ----------------------------------------------------------------

fn channels_kraus_complete(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let side = if k % 2 == 0 { Subsystem::A } else { Subsystem::B };
        let destroyer = if k % 5 == 4 {
            Destroyer::Incompatible
        } else {
            Destroyer::Basis(sampling::random_basis(&mut rng, side, dims.dim_of(side)))
        };
        let eps = MonitoringStrength::new(((k % 10) as f64 + 1.0) / 10.0).expect("in range");
        let channel = channels::monitoring_channel(dims, &destroyer, eps).expect("valid monitoring");
        let d = dims.total();
        let mut acc = CMatrix::zeros(d, d);
        for kr in channel.kraus() {
            acc += kr.adjoint() * kr;
        }
        worst = worst.max(max_abs_diff(&acc, &CMatrix::identity(d, d)));
    }
    worst
}

fn channels_idempotent_and_commuting(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let ba = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
        let bb = sampling::random_basis(&mut rng, Subsystem::B, dims.d_b);
        let once = channels::phi_meas(&s, &ba).expect("valid basis");
        let twice = channels::phi_meas(&once, &ba).expect("valid basis");
        worst = worst.max(max_abs_diff(twice.rho(), once.rho()));
        let ab = channels::phi_meas(&once, &bb).expect("valid basis");
        let ba_first = channels::phi_meas(&channels::phi_meas(&s, &bb).expect("valid"), &ba).expect("valid");
        worst = worst.max(max_abs_diff(ab.rho(), ba_first.rho()));
    }
    worst
}

fn channels_monitoring_monotone(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = dims_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let destroyer = if dims.is_bipartite() {
            Destroyer::Basis(sampling::random_basis(&mut rng, Subsystem::A, dims.d_a))
        } else {
            Destroyer::Incompatible
        };
        let mut last = information(&s).0;
        for step in 0..=10 {
            let eps = MonitoringStrength::new(step as f64 / 10.0).expect("in range");
            let m = channels::monitoring(&s, &destroyer, eps).expect("valid monitoring");
            worst = worst.max(vn_entropy(&s).0 - vn_entropy(&m).0);
            let i = information(&m).0;
            worst = worst.max(i - last);
            last = i;
        }
    }
    worst
}

fn channels_full_scramble(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let scrambled = channels::phi_inc(&s).expect("bipartite");
        worst = worst.max(max_abs_diff(scrambled.rho(), maximally_mixed(dims).rho()));
        worst = worst.max(information(&scrambled).0.abs());
    }
    worst
}

// --- dilation ----------------------------------------------------------------

fn dilation_unitary_and_reduction(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let side = if k % 2 == 0 { Subsystem::A } else { Subsystem::B };
        let destroyer = Destroyer::Basis(sampling::random_basis(&mut rng, side, dims.dim_of(side)));
        let eps = MonitoringStrength::new(((k % 4) as f64 + 1.0) / 4.0).expect("in range");
        let channel = channels::monitoring_channel(dims, &destroyer, eps).expect("valid");
        let dil = dilate(&channel).expect("square channel");
        worst = worst.max(dil.unitarity_residual());
        let joint = dil.evolve(&s).expect("matching dims");
        let reduced = joint.marginal(Subsystem::A).expect("bipartite joint");
        let direct = channel.apply(&s).expect("matching dims");
        worst = worst.max(max_abs_diff(reduced.rho(), direct.rho()));
    }
    worst
}

fn dilation_conservation(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let side = if k % 2 == 0 { Subsystem::A } else { Subsystem::B };
        let destroyer = Destroyer::Basis(sampling::random_basis(&mut rng, side, dims.dim_of(side)));
        let eps = MonitoringStrength::new(((k % 4) as f64 + 1.0) / 4.0).expect("in range");
        let ledger = flow_ledger(&s, &destroyer, eps).expect("valid monitoring");
        worst = worst.max(ledger.residual);
        let split = ledger.delta_i_x.0 + ledger.delta_i_xs_mutual.0;
        worst = worst.max((ledger.delta_i_cond.0 - split).abs());
        worst = worst.max(-ledger.delta_i_cond.0);
    }
    worst
}

// --- quantifiers ---------------------------------------------------------------

fn quantifiers_discord_forms(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let side = if k % 2 == 0 { Subsystem::A } else { Subsystem::B };
        let basis = sampling::random_basis(&mut rng, side, dims.dim_of(side));
        let forms = discord_basis_forms(&s, &basis).expect("bipartite");
        for f in &forms[1..] {
            worst = worst.max((forms[0].0 - f.0).abs());
        }
    }
    worst
}

fn quantifiers_decompositions(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let basis = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
        let total = irreality(&s, &basis).expect("valid").0;
        let local = coherence(&s.marginal(Subsystem::A).expect("bipartite"), &basis).expect("valid").0;
        let disc = discord_basis(&s, &basis).expect("valid").0;
        worst = worst.max((total - local - disc).abs());

        let ctx = Context::new(
            basis,
            sampling::random_basis(&mut rng, Subsystem::B, dims.d_b),
        )
        .expect("tagged sides");
        let forms = discord_symmetric_forms(&s, &ctx).expect("bipartite");
        worst = worst.max((forms[0].0 - forms[1].0).abs());
        worst = worst.max((forms[0].0 - forms[2].0).abs());
    }
    worst
}

fn quantifiers_symmetry_and_bounds(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let ctx = Context::new(
            sampling::random_basis(&mut rng, Subsystem::A, dims.d_a),
            sampling::random_basis(&mut rng, Subsystem::B, dims.d_b),
        )
        .expect("tagged sides");
        let here = rbn_contextual(&s, &ctx).expect("bipartite").0;
        let there = rbn_contextual(&s.swapped(), &ctx.swapped()).expect("bipartite").0;
        worst = worst.max((here - there).abs());
        worst = worst.max(here - (dims.d_a.min(dims.d_b) as f64).ln());

        let j = irreality(&s, &ctx.basis_a).expect("valid").0;
        let bound = irreality_bound(&s, &ctx.basis_a).expect("valid").0;
        worst = worst.max(j - bound - 1e-15);

        let psi = sampling::random_pure(&mut rng, dims);
        let e = entanglement_pure(&psi).expect("bipartite").0;
        worst = worst.max(e - (dims.d_a.min(dims.d_b) as f64).ln());
    }
    worst
}

fn quantifiers_pure_eof(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let dims = Dims { d_a: 2, d_b: 2 };
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let psi = sampling::random_pure(&mut rng, dims);
        let direct = entanglement_pure(&psi).expect("bipartite").0;
        let closed = eof_two_qubit(&psi.to_state()).expect("two qubits").0;
        worst = worst.max((direct - closed).abs());
    }
    worst
}

fn quantifiers_sweeps(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let cfg = SearchConfig { seed, ..SearchConfig::default() };
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let (resource, state) = match k % 3 {
            0 => (MonitoredResource::Coherence, sampling::random_state(&mut rng, dims)),
            1 => (MonitoredResource::Irreality, sampling::random_state(&mut rng, dims)),
            _ => (
                MonitoredResource::PureEntanglement,
                sampling::random_pure(&mut rng, Dims { d_a: 2, d_b: 2 }).to_state(),
            ),
        };
        let basis = sampling::random_basis(&mut rng, Subsystem::A, state.dims().d_a);
        let report = resource_monotonicity_check(&state, resource, Some(&basis), &grid, &cfg)
            .expect("valid sweep");
        worst = worst.max(report.max_step_increase);
        worst = worst.max(report.final_value.0);
    }
    worst
}

fn quantifiers_discord_destruction(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let cfg = SearchConfig { seed, ..SearchConfig::default() };
    let mut worst = 0.0f64;
    for k in 0..samples.min(5) {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let rep = discord_oneway(&s, Subsystem::A, &cfg).expect("bipartite");
        let basis = rep.basis.expect("optimized basis");
        let dephased = channels::phi_meas(&s, &basis).expect("valid basis");
        let after = discord_oneway(&dephased, Subsystem::A, &cfg).expect("bipartite");
        worst = worst.max(after.value.0);
    }
    worst
}

// --- optimize ---------------------------------------------------------------

fn optimize_determinism(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let cfg = SearchConfig { seed, ..SearchConfig::default() };
    let mut worst = 0.0f64;
    for k in 0..samples.min(3) {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let a = discord_oneway(&s, Subsystem::A, &cfg).expect("bipartite");
        let b = discord_oneway(&s, Subsystem::A, &cfg).expect("bipartite");
        if a.value.0.to_bits() != b.value.0.to_bits() {
            worst = worst.max(1.0);
        }
    }
    worst
}

fn optimize_beats_grid(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let cfg = SearchConfig { seed, ..SearchConfig::default() };
    let mut worst = 0.0f64;
    for _ in 0..samples.min(5) {
        let dims = Dims { d_a: 2, d_b: 2 };
        let s = sampling::random_state(&mut rng, dims);
        let captured = s.clone();
        let objective = move |basis: &ObservableBasis| discord_basis(&captured, basis).expect("valid").0;
        let refined =
            optimize::optimize_basis(dims, Subsystem::A, Direction::Minimize, &cfg, &objective)
                .expect("qubit search");
        let brute = optimize::brute_force_grid(dims, Subsystem::A, Direction::Minimize, 61, 121, &objective)
            .expect("qubit grid");
        worst = worst.max(refined.value - brute.value);
    }
    worst
}

fn optimize_phase_invariance(samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let dims = bipartite_cycle(k);
        let s = sampling::random_state(&mut rng, dims);
        let basis = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
        let phases: Vec<f64> = (0..dims.d_a).map(|i| (i as f64 + 1.3) * 0.7).collect();
        let rephased = basis.rephased(&phases);
        worst = worst.max(
            (discord_basis(&s, &basis).expect("valid").0
                - discord_basis(&s, &rephased).expect("valid").0)
                .abs(),
        );
    }
    worst
}

fn optimize_known_optimum(_samples: usize, seed: u64) -> f64 {
    let cfg = SearchConfig { seed, ..SearchConfig::default() };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let dims = Dims::single(2).expect("qubit");
    let psi = qres::CVector::from_vec(vec![C64::new(h, 0.0), C64::new(h, 0.0)]);
    let plus = qres::PureState::new(dims, psi).expect("unit").to_state();
    let rep = quantifiers::generic_correlation(&plus, quantifiers::Scope::Global, &cfg)
        .expect("single qubit");
    rep.value.0.abs()
}

fn checks_for(suite: &str) -> Result<Vec<Check>, CliError> {
    let entropy = || -> Vec<Check> {
        vec![
            Check { suite: "entropy", name: "entropy-bounds", tolerance: 1e-12, run: entropy_bounds },
            Check { suite: "entropy", name: "unitary-invariance", tolerance: 1e-10, run: entropy_unitary_invariance },
            Check { suite: "entropy", name: "relative-entropy-gap", tolerance: 1e-10, run: entropy_relative_gap },
            Check { suite: "entropy", name: "concavity", tolerance: 1e-12, run: entropy_concavity },
            Check { suite: "entropy", name: "mutual-information", tolerance: 1e-10, run: entropy_mutual_information },
        ]
    };
    let channels_suite = || -> Vec<Check> {
        vec![
            Check { suite: "channels", name: "kraus-completeness", tolerance: 1e-10, run: channels_kraus_complete },
            Check { suite: "channels", name: "dephasing-idempotence", tolerance: 1e-11, run: channels_idempotent_and_commuting },
            Check { suite: "channels", name: "monitoring-monotone", tolerance: 1e-10, run: channels_monitoring_monotone },
            Check { suite: "channels", name: "full-scramble", tolerance: 1e-12, run: channels_full_scramble },
        ]
    };
    let dilation_suite = || -> Vec<Check> {
        vec![
            Check { suite: "dilation", name: "unitarity-and-reduction", tolerance: 1e-10, run: dilation_unitary_and_reduction },
            Check { suite: "dilation", name: "conservation", tolerance: 1e-10, run: dilation_conservation },
        ]
    };
    let quantifiers_suite = || -> Vec<Check> {
        vec![
            Check { suite: "quantifiers", name: "discord-four-forms", tolerance: 1e-10, run: quantifiers_discord_forms },
            Check { suite: "quantifiers", name: "decompositions", tolerance: 1e-10, run: quantifiers_decompositions },
            Check { suite: "quantifiers", name: "symmetry-and-bounds", tolerance: 1e-9, run: quantifiers_symmetry_and_bounds },
            Check { suite: "quantifiers", name: "pure-eof-consistency", tolerance: 1e-8, run: quantifiers_pure_eof },
            Check { suite: "quantifiers", name: "sweep-monotonicity", tolerance: 1e-8, run: quantifiers_sweeps },
            Check { suite: "quantifiers", name: "discord-destruction", tolerance: 1e-8, run: quantifiers_discord_destruction },
        ]
    };
    let optimize_suite = || -> Vec<Check> {
        vec![
            Check { suite: "optimize", name: "determinism", tolerance: 0.0, run: optimize_determinism },
            Check { suite: "optimize", name: "refinement-beats-grid", tolerance: 1e-9, run: optimize_beats_grid },
            Check { suite: "optimize", name: "phase-invariance", tolerance: 1e-10, run: optimize_phase_invariance },
            Check { suite: "optimize", name: "known-optimum", tolerance: 1e-9, run: optimize_known_optimum },
        ]
    };

    Ok(match suite {
        "entropy" => entropy(),
        "channels" => channels_suite(),
        "dilation" => dilation_suite(),
        "quantifiers" => quantifiers_suite(),
        "optimize" => optimize_suite(),
        "all" => {
            let mut all = entropy();
            all.extend(channels_suite());
            all.extend(dilation_suite());
            all.extend(quantifiers_suite());
            all.extend(optimize_suite());
            all
        }
        other => {
            return Err(CliError::parse(format!(
                "unknown suite {other:?} (expected one of {SUITES:?} or all)"
            )))
        }
    })
}

pub fn run_suite(suite: &str, samples: usize, seed: u64) -> Result<Vec<PropertyResult>, CliError> {
    let checks = checks_for(suite)?;
    Ok(checks
        .iter()
        .enumerate()
        .map(|(i, c)| c.execute(samples, seed.wrapping_add(i as u64)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_with_a_small_sample_count() {
        for suite in SUITES {
            for result in run_suite(suite, 6, 11).unwrap() {
                assert!(
                    result.pass,
                    "{}/{} failed: worst {} vs tol {}",
                    result.suite, result.name, result.worst_residual, result.tolerance
                );
            }
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_suite("entropy", 5, 3).unwrap();
        let b = run_suite("entropy", 5, 3).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.worst_residual.to_bits(), y.worst_residual.to_bits());
        }
    }

    #[test]
    fn unknown_suite_is_a_parse_error() {
        assert_eq!(run_suite("bogus", 5, 3).unwrap_err().code, 2);
    }
}
