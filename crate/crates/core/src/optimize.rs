//! Derivative-free searches over measurement bases and contexts.
//!
//! Qubit bases are parametrized by Bloch angles `(theta, phi)`; larger
//! dimensions use the `n^2` real parameters of a Hermitian generator `H`
//! through `U = exp(iH)`. Searches combine a deterministic scan with
//! Nelder-Mead polishing, so repeated runs with the same configuration give
//! bitwise identical results. A dense-grid evaluator is provided as a slow,
//! optimizer-free cross-check for qubit sides.

use std::collections::HashMap;

use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qstate::{eigh, CMatrix, CVector, Dims, ObservableBasis, Subsystem, C64};
use crate::sampling::rng_from_seed;

/// Whether the search looks for the smallest or the largest objective value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Minimize => 1.0,
            Direction::Maximize => -1.0,
        }
    }
}

/// Knobs for the basis and context searches. The defaults are tuned for
/// qubit sides: a 61 x 121 Bloch grid locates the basin and Nelder-Mead
/// polishes it to `refine_tol` in objective value.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Grid points along `theta in [0, pi]` (qubit sides).
    pub grid_theta: usize,
    /// Grid points along `phi in [0, 2pi)` (qubit sides).
    pub grid_phi: usize,
    /// Nelder-Mead iteration cap per start.
    pub refine_max_iter: usize,
    /// Stop when the simplex value spread falls below this.
    pub refine_tol: f64,
    /// Seeded random restarts for generator-parametrized sides (`n > 2`).
    pub restarts: usize,
    /// Seed for the restart generator.
    pub seed: u64,
    /// Coarse per-side grid used by the context search's product scan.
    pub coarse_theta: usize,
    pub coarse_phi: usize,
    /// Cap on alternating per-side refinement rounds in the context search.
    pub max_rounds: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_theta: 61,
            grid_phi: 121,
            refine_max_iter: 200,
            refine_tol: 1e-8,
            restarts: 32,
            seed: 7,
            coarse_theta: 9,
            coarse_phi: 17,
            max_rounds: 6,
        }
    }
}

/// What the search saw, for reports and sanity checks.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    /// Objective evaluations spent on scanning grids.
    pub grid_points: usize,
    /// Nelder-Mead iterations summed over all starts.
    pub refine_iterations: usize,
    /// Scan-scale difference between the best and the runner-up start.
    pub best_second_gap: f64,
    /// True when the whole scan varied by less than 1e-10; the reported
    /// optimum is then arbitrary among equivalent bases.
    pub flat_landscape: bool,
}

/// Result of a single-side basis search.
#[derive(Debug, Clone)]
pub struct BasisOptimum {
    pub value: f64,
    pub basis: ObservableBasis,
    /// Parameters that produced `basis`; reusable as a warm start.
    pub params: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// Result of a joint search over one basis per side.
#[derive(Debug, Clone)]
pub struct ContextOptimum {
    pub value: f64,
    pub basis_a: ObservableBasis,
    pub basis_b: ObservableBasis,
    pub params_a: Vec<f64>,
    pub params_b: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// Qubit basis at Bloch angles `(theta, phi)`:
/// `v0 = (cos(theta/2), e^{i phi} sin(theta/2))` and its orthogonal complement.
pub fn bloch_basis(part: Subsystem, theta: f64, phi: f64) -> ObservableBasis {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let e = C64::from_polar(1.0, phi);
    let v0 = CVector::from_vec(vec![C64::new(c, 0.0), e * s]);
    let v1 = CVector::from_vec(vec![C64::new(s, 0.0), -e * c]);
    ObservableBasis::new(part, vec![v0, v1]).expect("Bloch columns are orthonormal")
}

/// Basis given by the columns of `exp(iH)`, where the Hermitian `H` is built
/// from `n^2` real parameters: `n` diagonal entries followed by
/// `(re, im)` pairs for the strict upper triangle, row by row.
pub fn generator_basis(part: Subsystem, n: usize, params: &[f64]) -> Result<ObservableBasis> {
    if params.len() != n * n {
        return Err(Error::WrongDimensions(format!(
            "a dimension-{n} generator needs {} parameters, got {}",
            n * n,
            params.len()
        )));
    }
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(params[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = C64::new(params[k], params[k + 1]);
            k += 2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    let (vals, vecs) = eigh(&h);
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        n,
        vals.iter().map(|&l| C64::from_polar(1.0, l)),
    ));
    let u = &vecs * phases * vecs.adjoint();
    ObservableBasis::from_unitary_columns(part, &u)
}

/// Number of search parameters for a dimension-`n` side.
pub fn param_count(n: usize) -> usize {
    if n == 2 {
        2
    } else {
        n * n
    }
}

/// Maps a parameter vector (Bloch angles for `n = 2`, generator parameters
/// otherwise) to the basis it encodes. Panics on a wrong parameter count.
pub fn basis_from_params(part: Subsystem, n: usize, params: &[f64]) -> ObservableBasis {
    if n == 2 {
        assert_eq!(params.len(), 2, "a qubit basis takes two Bloch angles");
        bloch_basis(part, params[0], params[1])
    } else {
        generator_basis(part, n, params).expect("parameter count checked above")
    }
}

/// Objective wrapper that memoizes on parameters quantized at 1e-12, so
/// Nelder-Mead never pays twice for the same vertex.
struct Cached<'a, F: Fn(&ObservableBasis) -> f64 + Sync> {
    part: Subsystem,
    n: usize,
    sign: f64,
    f: &'a F,
    map: HashMap<Vec<i64>, f64>,
}

impl<F: Fn(&ObservableBasis) -> f64 + Sync> Cached<'_, F> {
    fn g(&mut self, params: &[f64]) -> f64 {
        let key: Vec<i64> = params.iter().map(|p| (p / 1e-12).round() as i64).collect();
        if let Some(&v) = self.map.get(&key) {
            return v;
        }
        let basis = basis_from_params(self.part, self.n, params);
        let v = self.sign * (self.f)(&basis);
        self.map.insert(key, v);
        v
    }
}

/// Plain deterministic Nelder-Mead (reflection 1, expansion 2, contraction
/// and shrink 1/2). Returns the best vertex, its value and iterations used.
fn nelder_mead<G: FnMut(&[f64]) -> f64>(
    mut g: G,
    start: &[f64],
    step: f64,
    max_iter: usize,
    tol: f64,
) -> (Vec<f64>, f64, usize) {
    let k = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(k + 1);
    let f0 = g(start);
    simplex.push((start.to_vec(), f0));
    for i in 0..k {
        let mut x = start.to_vec();
        x[i] += step;
        let fx = g(&x);
        simplex.push((x, fx));
    }

    let mut iters = 0;
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective returned NaN"));
        if (simplex[k].1 - simplex[0].1).abs() < tol {
            break;
        }
        iters += 1;

        let mut centroid = vec![0.0; k];
        for (x, _) in &simplex[..k] {
            for (ci, xi) in centroid.iter_mut().zip(x.iter()) {
                *ci += xi;
            }
        }
        for ci in centroid.iter_mut() {
            *ci /= k as f64;
        }
        let worst = simplex[k].clone();

        let reflected: Vec<f64> =
            centroid.iter().zip(&worst.0).map(|(c, w)| 2.0 * c - w).collect();
        let fr = g(&reflected);

        if fr < simplex[0].1 {
            let expanded: Vec<f64> =
                centroid.iter().zip(&worst.0).map(|(c, w)| 3.0 * c - 2.0 * w).collect();
            let fe = g(&expanded);
            simplex[k] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[k - 1].1 {
            simplex[k] = (reflected, fr);
        } else {
            let contracted: Vec<f64> = if fr < worst.1 {
                centroid.iter().zip(&reflected).map(|(c, r)| 0.5 * (c + r)).collect()
            } else {
                centroid.iter().zip(&worst.0).map(|(c, w)| 0.5 * (c + w)).collect()
            };
            let fc = g(&contracted);
            if fc < worst.1.min(fr) {
                simplex[k] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> =
                        best.iter().zip(&entry.0).map(|(b, xi)| 0.5 * (b + xi)).collect();
                    let fx = g(&x);
                    *entry = (x, fx);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective returned NaN"));
    (simplex[0].0.clone(), simplex[0].1, iters)
}

fn qubit_grid(n_theta: usize, n_phi: usize) -> Vec<[f64; 2]> {
    let nt = n_theta.max(2);
    let np = n_phi.max(1);
    let mut pts = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let theta = std::f64::consts::PI * i as f64 / (nt - 1) as f64;
        for j in 0..np {
            let phi = std::f64::consts::TAU * j as f64 / np as f64;
            pts.push([theta, phi]);
        }
    }
    pts
}

/// Indices of the sorted order of `vals` (ascending, ties by index).
fn ascending_order(vals: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| {
        vals[a].partial_cmp(&vals[b]).expect("objective returned NaN").then(a.cmp(&b))
    });
    order
}

fn scan_stats(vals: &[f64], order: &[usize]) -> (f64, bool) {
    let gap = if order.len() > 1 { vals[order[1]] - vals[order[0]] } else { 0.0 };
    let range = vals[order[order.len() - 1]] - vals[order[0]];
    (gap, range < 1e-10)
}

/// Seeded start points for a generator-parametrized side.
fn generator_starts(k: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut starts = vec![vec![0.0; k]];
    let mut rng = rng_from_seed(seed);
    let normal = Normal::new(0.0, 0.7).expect("valid normal parameters");
    for _ in 0..count {
        starts.push((0..k).map(|_| normal.sample(&mut rng)).collect());
    }
    starts
}

/// Optimizes the measured basis on one side of `dims`.
///
/// Qubit sides scan a `grid_theta x grid_phi` Bloch grid and polish the three
/// best cells with Nelder-Mead; larger sides use the zero generator plus
/// `restarts` seeded random generators. `warm` parameter vectors are added as
/// extra polish starts, which keeps sweeps from losing a previously found
/// optimum. Deterministic for a fixed configuration.
pub fn optimize_basis_warm<F>(
    dims: Dims,
    part: Subsystem,
    direction: Direction,
    cfg: &SearchConfig,
    warm: &[Vec<f64>],
    f: F,
) -> Result<BasisOptimum>
where
    F: Fn(&ObservableBasis) -> f64 + Sync,
{
    let n = dims.dim_of(part);
    if n < 2 {
        return Err(Error::DimensionUnsupported(n));
    }
    let k = param_count(n);
    for w in warm {
        if w.len() != k {
            return Err(Error::WrongDimensions(format!(
                "warm start has {} parameters, expected {k}",
                w.len()
            )));
        }
    }
    let sign = direction.sign();

    let mut starts: Vec<Vec<f64>> = Vec::new();
    let grid_points;
    let best_second_gap;
    let flat_landscape;

    if n == 2 {
        let pts = qubit_grid(cfg.grid_theta, cfg.grid_phi);
        let vals: Vec<f64> = pts
            .par_iter()
            .map(|p| sign * f(&bloch_basis(part, p[0], p[1])))
            .collect();
        let order = ascending_order(&vals);
        for &i in order.iter().take(3) {
            starts.push(pts[i].to_vec());
        }
        grid_points = pts.len();
        (best_second_gap, flat_landscape) = scan_stats(&vals, &order);
    } else {
        let cand = generator_starts(k, cfg.restarts, cfg.seed ^ (n as u64));
        let vals: Vec<f64> = cand
            .par_iter()
            .map(|p| sign * f(&basis_from_params(part, n, p)))
            .collect();
        let order = ascending_order(&vals);
        grid_points = cand.len();
        (best_second_gap, flat_landscape) = scan_stats(&vals, &order);
        starts = order.iter().map(|&i| cand[i].clone()).collect();
    }
    starts.extend(warm.iter().cloned());

    let mut cache = Cached { part, n, sign, f: &f, map: HashMap::new() };
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut refine_iterations = 0;
    for s in &starts {
        let (x, v, it) =
            nelder_mead(|p| cache.g(p), s, 0.15, cfg.refine_max_iter, cfg.refine_tol);
        refine_iterations += it;
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((x, v));
        }
    }
    let (params, gval) = best.expect("at least one start");

    Ok(BasisOptimum {
        value: sign * gval,
        basis: basis_from_params(part, n, &params),
        params,
        diagnostics: Diagnostics {
            grid_points,
            refine_iterations,
            best_second_gap,
            flat_landscape,
        },
    })
}

/// [`optimize_basis_warm`] without extra starts.
pub fn optimize_basis<F>(
    dims: Dims,
    part: Subsystem,
    direction: Direction,
    cfg: &SearchConfig,
    f: F,
) -> Result<BasisOptimum>
where
    F: Fn(&ObservableBasis) -> f64 + Sync,
{
    optimize_basis_warm(dims, part, direction, cfg, &[], f)
}

fn coarse_candidates(n: usize, cfg: &SearchConfig, salt: u64) -> Vec<Vec<f64>> {
    if n == 2 {
        qubit_grid(cfg.coarse_theta, cfg.coarse_phi)
            .into_iter()
            .map(|p| p.to_vec())
            .collect()
    } else {
        generator_starts(param_count(n), cfg.restarts.min(8), cfg.seed ^ salt)
    }
}

/// Jointly optimizes one basis per side. A coarse product scan picks the
/// starting pair; alternating per-side searches (each the full single-side
/// machinery, warm-started at the current parameters) then run until a full
/// round improves the value by less than `refine_tol` or `max_rounds` is hit.
pub fn optimize_context_warm<F>(
    dims: Dims,
    direction: Direction,
    cfg: &SearchConfig,
    warm: &[(Vec<f64>, Vec<f64>)],
    f: F,
) -> Result<ContextOptimum>
where
    F: Fn(&ObservableBasis, &ObservableBasis) -> f64 + Sync,
{
    if !dims.is_bipartite() {
        return Err(Error::NotBipartite(
            "a context search needs both sides nontrivial".into(),
        ));
    }
    let (na, nb) = (dims.d_a, dims.d_b);
    let sign = direction.sign();

    let cand_a = coarse_candidates(na, cfg, 1);
    let cand_b = coarse_candidates(nb, cfg, 2);
    let pairs: Vec<(usize, usize)> = (0..cand_a.len())
        .flat_map(|i| (0..cand_b.len()).map(move |j| (i, j)))
        .collect();
    let vals: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let ba = basis_from_params(Subsystem::A, na, &cand_a[i]);
            let bb = basis_from_params(Subsystem::B, nb, &cand_b[j]);
            sign * f(&ba, &bb)
        })
        .collect();
    let order = ascending_order(&vals);
    let (best_second_gap, flat_landscape) = scan_stats(&vals, &order);
    let (bi, bj) = pairs[order[0]];

    let mut grid_points = pairs.len();
    let mut refine_iterations = 0;

    let mut start_pairs: Vec<(Vec<f64>, Vec<f64>)> =
        vec![(cand_a[bi].clone(), cand_b[bj].clone())];
    start_pairs.extend(warm.iter().cloned());

    let mut best: Option<(Vec<f64>, Vec<f64>, f64)> = None;
    for (pa0, pb0) in &start_pairs {
        let mut pa = pa0.clone();
        let mut pb = pb0.clone();
        let mut current = f64::INFINITY;
        for _ in 0..cfg.max_rounds.max(1) {
            let fixed_b = basis_from_params(Subsystem::B, nb, &pb);
            let res_a = optimize_basis_warm(
                dims,
                Subsystem::A,
                direction,
                cfg,
                std::slice::from_ref(&pa),
                |ba: &ObservableBasis| f(ba, &fixed_b),
            )?;
            grid_points += res_a.diagnostics.grid_points;
            refine_iterations += res_a.diagnostics.refine_iterations;
            pa = res_a.params;

            let fixed_a = basis_from_params(Subsystem::A, na, &pa);
            let res_b = optimize_basis_warm(
                dims,
                Subsystem::B,
                direction,
                cfg,
                std::slice::from_ref(&pb),
                |bb: &ObservableBasis| f(&fixed_a, bb),
            )?;
            grid_points += res_b.diagnostics.grid_points;
            refine_iterations += res_b.diagnostics.refine_iterations;
            pb = res_b.params;

            let new = sign * res_b.value;
            if (current - new).abs() < cfg.refine_tol {
                current = new;
                break;
            }
            current = new;
        }
        if best.as_ref().is_none_or(|(_, _, bv)| current < *bv) {
            best = Some((pa, pb, current));
        }
    }
    let (params_a, params_b, gval) = best.expect("at least one start pair");

    Ok(ContextOptimum {
        value: sign * gval,
        basis_a: basis_from_params(Subsystem::A, na, &params_a),
        basis_b: basis_from_params(Subsystem::B, nb, &params_b),
        params_a,
        params_b,
        diagnostics: Diagnostics {
            grid_points,
            refine_iterations,
            best_second_gap,
            flat_landscape,
        },
    })
}

/// [`optimize_context_warm`] without extra start pairs.
pub fn optimize_context<F>(
    dims: Dims,
    direction: Direction,
    cfg: &SearchConfig,
    f: F,
) -> Result<ContextOptimum>
where
    F: Fn(&ObservableBasis, &ObservableBasis) -> f64 + Sync,
{
    optimize_context_warm(dims, direction, cfg, &[], f)
}

/// Exhaustive Bloch-grid evaluation on a qubit side; no refinement, so the
/// result is an optimizer-free reference. Errors with
/// [`Error::DimensionUnsupported`] when the side is not two-dimensional.
pub fn brute_force_grid<F>(
    dims: Dims,
    part: Subsystem,
    direction: Direction,
    n_theta: usize,
    n_phi: usize,
    f: F,
) -> Result<BasisOptimum>
where
    F: Fn(&ObservableBasis) -> f64 + Sync,
{
    let n = dims.dim_of(part);
    if n != 2 {
        return Err(Error::DimensionUnsupported(n));
    }
    let sign = direction.sign();
    let pts = qubit_grid(n_theta, n_phi);
    let vals: Vec<f64> = pts
        .par_iter()
        .map(|p| sign * f(&bloch_basis(part, p[0], p[1])))
        .collect();
    let order = ascending_order(&vals);
    let (best_second_gap, flat_landscape) = scan_stats(&vals, &order);
    let params = pts[order[0]].to_vec();

    Ok(BasisOptimum {
        value: sign * vals[order[0]],
        basis: bloch_basis(part, params[0], params[1]),
        params,
        diagnostics: Diagnostics {
            grid_points: pts.len(),
            refine_iterations: 0,
            best_second_gap,
            flat_landscape,
        },
    })
}

/// Exhaustive product-grid evaluation over both sides of a two-qubit system.
pub fn brute_force_context_grid<F>(
    dims: Dims,
    direction: Direction,
    n_theta: usize,
    n_phi: usize,
    f: F,
) -> Result<ContextOptimum>
where
    F: Fn(&ObservableBasis, &ObservableBasis) -> f64 + Sync,
{
    if dims.d_a != 2 || dims.d_b != 2 {
        return Err(Error::DimensionUnsupported(dims.d_a.max(dims.d_b)));
    }
    let sign = direction.sign();
    let pts = qubit_grid(n_theta, n_phi);
    let m = pts.len();
    let vals: Vec<f64> = (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let pa = &pts[idx / m];
            let pb = &pts[idx % m];
            sign * f(
                &bloch_basis(Subsystem::A, pa[0], pa[1]),
                &bloch_basis(Subsystem::B, pb[0], pb[1]),
            )
        })
        .collect();
    let order = ascending_order(&vals);
    let (best_second_gap, flat_landscape) = scan_stats(&vals, &order);
    let params_a = pts[order[0] / m].to_vec();
    let params_b = pts[order[0] % m].to_vec();

    Ok(ContextOptimum {
        value: sign * vals[order[0]],
        basis_a: bloch_basis(Subsystem::A, params_a[0], params_a[1]),
        basis_b: bloch_basis(Subsystem::B, params_b[0], params_b[1]),
        params_a,
        params_b,
        diagnostics: Diagnostics {
            grid_points: m * m,
            refine_iterations: 0,
            best_second_gap,
            flat_landscape,
        },
    })
}
