//! On-disk formats (states and bases as JSON with `[re, im]` complex pairs)
//! and the named state presets.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qres::qstate::{bell_state, computational_ket, maximally_mixed, tensor, werner_state};
use qres::{CMatrix, CVector, Dims, ObservableBasis, PureState, QState, Subsystem, C64};

use crate::CliError;

/// A density matrix on disk: dimensions of the bipartite split, an optional
/// label, and the full matrix as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    #[cfg_attr(not(test), allow(dead_code))] // round-trip support, exercised by the unit tests
    pub fn from_qstate(s: &QState, label: Option<String>) -> StateFile {
        let d = s.dim();
        let rho = s.rho();
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| [rho[(i, j)].re, rho[(i, j)].im]).collect())
            .collect();
        StateFile { dims: [s.dims().d_a, s.dims().d_b], label, matrix }
    }

    pub fn parse(text: &str) -> Result<StateFile, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::parse(format!("state file is not valid JSON: {e}")))
    }

    #[cfg_attr(not(test), allow(dead_code))] // round-trip support, exercised by the unit tests
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_qstate(&self) -> Result<QState, CliError> {
        let [d_a, d_b] = self.dims;
        let dims = Dims::new(d_a, d_b).map_err(CliError::from)?;
        let d = dims.total();
        if self.matrix.len() != d {
            return Err(CliError::parse(format!(
                "matrix has {} rows but dims [{d_a}, {d_b}] need {d}",
                self.matrix.len()
            )));
        }
        let mut rho = CMatrix::zeros(d, d);
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != d {
                return Err(CliError::parse(format!(
                    "matrix row {i} has {} columns, expected {d}",
                    row.len()
                )));
            }
            for (j, &[re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(CliError::parse(format!(
                        "matrix entry at row {i}, column {j} is not finite"
                    )));
                }
                rho[(i, j)] = C64::new(re, im);
            }
        }
        QState::new(dims, rho).map_err(|e| CliError::parse(format!("not a density matrix: {e}")))
    }
}

pub fn load_state(path: &Path) -> Result<(QState, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let file = StateFile::parse(&text)?;
    let label = file
        .label
        .clone()
        .unwrap_or_else(|| path.file_stem().map_or_else(|| "state".into(), |s| s.to_string_lossy().into_owned()));
    Ok((file.to_qstate()?, label))
}

fn qubit_symbol_ket(sym: &str) -> Result<QState, CliError> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let single = Dims::single(2).expect("qubit dims");
    let psi = match sym {
        "0" => return Ok(computational_ket(single, 0).expect("valid index").to_state()),
        "1" => return Ok(computational_ket(single, 1).expect("valid index").to_state()),
        "+" => CVector::from_vec(vec![C64::new(h, 0.0), C64::new(h, 0.0)]),
        "-" => CVector::from_vec(vec![C64::new(h, 0.0), C64::new(-h, 0.0)]),
        other => {
            return Err(CliError::parse(format!(
                "unknown qubit symbol {other:?} in product preset (use 0, 1, +, -)"
            )))
        }
    };
    Ok(PureState::new(single, psi).expect("unit vector").to_state())
}

/// The factor pair (p, q) of d with p <= q and p as large as possible; a
/// prime d yields the single-partite split (d, 1).
fn balanced_dims(d: usize) -> Result<Dims, CliError> {
    if d < 2 {
        return Err(CliError::parse(format!("maxmixed needs dimension >= 2, got {d}")));
    }
    let mut best = 1;
    let mut p = 1;
    while p * p <= d {
        if d % p == 0 {
            best = p;
        }
        p += 1;
    }
    if best == 1 {
        Dims::single(d).map_err(CliError::from)
    } else {
        Dims::new(best, d / best).map_err(CliError::from)
    }
}

pub fn preset_state(name: &str) -> Result<(QState, String), CliError> {
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (name, None),
    };
    let state = match (kind, arg) {
        ("bell", None) | ("ghz2", None) => bell_state().to_state(),
        ("werner", Some(p)) => {
            let w: f64 = p
                .parse()
                .map_err(|_| CliError::parse(format!("werner weight {p:?} is not a number")))?;
            werner_state(w).map_err(CliError::from)?
        }
        ("product", Some(spec)) => {
            let parts: Vec<&str> = spec.split(',').collect();
            match parts.as_slice() {
                [one] => qubit_symbol_ket(one)?,
                [a, b] => tensor(&qubit_symbol_ket(a)?, &qubit_symbol_ket(b)?),
                _ => {
                    return Err(CliError::parse(
                        "product preset takes one or two qubit symbols, e.g. product:0,+",
                    ))
                }
            }
        }
        ("maxmixed", Some(d)) => {
            let d: usize = d
                .parse()
                .map_err(|_| CliError::parse(format!("maxmixed dimension {d:?} is not an integer")))?;
            maximally_mixed(balanced_dims(d)?)
        }
        _ => {
            return Err(CliError::parse(format!(
                "unknown preset {name:?} (expected bell, ghz2, werner:p, product:a,b or maxmixed:d)"
            )))
        }
    };
    Ok((state, name.to_string()))
}

/// An orthonormal basis on disk for `--basis <file>` arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisFile {
    /// "a" or "b".
    pub subsystem: String,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

impl BasisFile {
    pub fn to_basis(&self) -> Result<ObservableBasis, CliError> {
        let side = parse_side(&self.subsystem)?;
        let vectors: Vec<CVector> = self
            .vectors
            .iter()
            .map(|v| CVector::from_iterator(v.len(), v.iter().map(|&[re, im]| C64::new(re, im))))
            .collect();
        ObservableBasis::new(side, vectors)
            .map_err(|e| CliError::parse(format!("basis file does not hold an orthonormal basis: {e}")))
    }

    pub fn from_basis(basis: &ObservableBasis) -> BasisFile {
        BasisFile {
            subsystem: basis.subsystem().label().to_lowercase(),
            vectors: basis
                .vectors()
                .iter()
                .map(|v| v.iter().map(|c| [c.re, c.im]).collect())
                .collect(),
        }
    }
}

pub fn parse_side(side: &str) -> Result<Subsystem, CliError> {
    match side.to_ascii_lowercase().as_str() {
        "a" => Ok(Subsystem::A),
        "b" => Ok(Subsystem::B),
        other => Err(CliError::parse(format!("side must be a or b, got {other:?}"))),
    }
}

/// Resolves a `--basis` argument: `z`, `x`, `fourier`, or a path to a basis
/// file. Named bases are built on `side` at that side's dimension.
pub fn resolve_basis(arg: &str, side: Subsystem, dim: usize) -> Result<ObservableBasis, CliError> {
    match arg {
        "z" => Ok(ObservableBasis::computational(side, dim)),
        "x" => {
            if dim != 2 {
                return Err(CliError::parse(format!(
                    "x names the qubit Fourier basis; side has dimension {dim}, use fourier"
                )));
            }
            Ok(ObservableBasis::fourier(side, 2))
        }
        "fourier" => Ok(ObservableBasis::fourier(side, dim)),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::parse(format!(
                    "basis {path:?} is not z, x or fourier, and reading it as a file failed: {e}"
                ))
            })?;
            let file: BasisFile = serde_json::from_str(&text)
                .map_err(|e| CliError::parse(format!("basis file is not valid JSON: {e}")))?;
            file.to_basis()
        }
    }
}
