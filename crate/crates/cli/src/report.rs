//! Machine- and human-readable output. One `Report` struct serves every
//! subcommand; JSON serialization round-trips all numbers exactly, the table
//! form shows nats alongside bits, and CSV flattens to documented columns.

use serde::{Deserialize, Serialize};

use qres::{Context, Diagnostics, FlowLedger, Nats, ObservableBasis};

use crate::statefile::BasisFile;

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsOut {
    pub grid_points: usize,
    pub refine_iterations: usize,
    pub best_second_gap: f64,
    pub flat_landscape: bool,
}

impl DiagnosticsOut {
    pub fn from_core(d: &Diagnostics) -> DiagnosticsOut {
        DiagnosticsOut {
            grid_points: d.grid_points,
            refine_iterations: d.refine_iterations,
            best_second_gap: d.best_second_gap,
            flat_landscape: d.flat_landscape,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextOut {
    pub basis_a: BasisFile,
    pub basis_b: BasisFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerOut {
    pub eps: f64,
    pub i_initial_nats: f64,
    pub i_final_nats: f64,
    pub delta_i_x_nats: f64,
    pub delta_i_mutual_nats: f64,
    pub delta_i_cond_nats: f64,
    pub conservation_residual: f64,
    pub ancilla_dim: usize,
}

impl LedgerOut {
    pub fn from_core(l: &FlowLedger) -> LedgerOut {
        LedgerOut {
            eps: l.eps,
            i_initial_nats: l.i_initial.0,
            i_final_nats: l.i_final.0,
            delta_i_x_nats: l.delta_i_x.0,
            delta_i_mutual_nats: l.delta_i_xs_mutual.0,
            delta_i_cond_nats: l.delta_i_cond.0,
            conservation_residual: l.residual,
            ancilla_dim: l.d_x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorRow {
    pub eps: f64,
    pub value_nats: f64,
    pub value_bits: f64,
    pub info_nats: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub seed: u64,
    pub command: String,
    pub state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantifier: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_nats: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_bits: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<ContextOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<LedgerOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<MonitorRow>>,
    /// Largest step increase found along a monitor sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_step_increase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monotone: Option<bool>,
}

impl Report {
    pub fn new(command: &str, state_label: &str, seed: u64) -> Report {
        Report {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            command: command.to_string(),
            state: state_label.to_string(),
            quantifier: None,
            value_nats: None,
            value_bits: None,
            basis: None,
            context: None,
            diagnostics: None,
            ledger: None,
            rows: None,
            max_step_increase: None,
            monotone: None,
        }
    }

    pub fn with_value(mut self, v: Nats) -> Report {
        self.value_nats = Some(v.0);
        self.value_bits = Some(v.0 / LN_2);
        self
    }

    pub fn with_basis(mut self, basis: &ObservableBasis) -> Report {
        self.basis = Some(BasisFile::from_basis(basis));
        self
    }

    pub fn with_context(mut self, ctx: &Context) -> Report {
        self.context = Some(ContextOut {
            basis_a: BasisFile::from_basis(&ctx.basis_a),
            basis_b: BasisFile::from_basis(&ctx.basis_b),
        });
        self
    }

    pub fn with_diagnostics(mut self, d: Option<&Diagnostics>) -> Report {
        self.diagnostics = d.map(DiagnosticsOut::from_core);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Render without a trailing newline; callers add it when printing.
    pub fn render(&self, format: Format) -> String {
        let rendered = match format {
            Format::Json => self.to_json(),
            Format::Table => self.to_table(),
            Format::Csv => self.to_csv(),
        };
        rendered.trim_end_matches('\n').to_string()
    }

    fn to_table(&self) -> String {
        fn line(out: &mut String, k: &str, v: String) {
            out.push_str(&format!("{k:<22} {v}\n"));
        }
        let mut out = String::new();
        line(&mut out, "command", self.command.clone());
        line(&mut out, "state", self.state.clone());
        if let Some(q) = &self.quantifier {
            line(&mut out, "quantifier", q.clone());
        }
        if let (Some(n), Some(b)) = (self.value_nats, self.value_bits) {
            line(&mut out, "value", format!("{n:.9} nats ({b:.9} bits)"));
        }
        if let Some(basis) = &self.basis {
            line(&mut out, "basis", format_basis(basis));
        }
        if let Some(ctx) = &self.context {
            line(&mut out, "context side a", format_basis(&ctx.basis_a));
            line(&mut out, "context side b", format_basis(&ctx.basis_b));
        }
        if let Some(d) = &self.diagnostics {
            line(
                &mut out,
                "search",
                format!(
                    "{} grid points, {} refine iterations, gap {:.3e}{}",
                    d.grid_points,
                    d.refine_iterations,
                    d.best_second_gap,
                    if d.flat_landscape { ", flat landscape" } else { "" }
                ),
            );
        }
        if let Some(l) = &self.ledger {
            line(&mut out, "eps", format!("{}", l.eps));
            line(&mut out, "ancilla dim", format!("{}", l.ancilla_dim));
            line(&mut out, "I initial", nats_bits(l.i_initial_nats));
            line(&mut out, "I final", nats_bits(l.i_final_nats));
            line(&mut out, "dI apparatus", nats_bits(l.delta_i_x_nats));
            line(&mut out, "dI mutual", nats_bits(l.delta_i_mutual_nats));
            line(&mut out, "dI conditional", nats_bits(l.delta_i_cond_nats));
            line(&mut out, "conservation residual", format!("{:.3e}", l.conservation_residual));
        }
        if let Some(rows) = &self.rows {
            out.push_str(&format!(
                "{:<10} {:<22} {:<22} {:<22}\n",
                "eps", "value (nats)", "value (bits)", "I (nats)"
            ));
            for r in rows {
                out.push_str(&format!(
                    "{:<10.4} {:<22.12} {:<22.12} {:<22.12}\n",
                    r.eps, r.value_nats, r.value_bits, r.info_nats
                ));
            }
            if let Some(inc) = self.max_step_increase {
                line(&mut out, "max step increase", format!("{inc:.3e}"));
            }
            if let Some(m) = self.monotone {
                line(&mut out, "non-increasing", format!("{m}"));
            }
        }
        line(&mut out, "version", format!("{}   seed {}", self.tool_version, self.seed));
        out
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(rows) = &self.rows {
            out.push_str("command,state,quantifier,eps,value_nats,value_bits,info_nats\n");
            let q = self.quantifier.clone().unwrap_or_default();
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    self.command, self.state, q, r.eps, r.value_nats, r.value_bits, r.info_nats
                ));
            }
        } else if let Some(l) = &self.ledger {
            out.push_str(
                "command,state,eps,ancilla_dim,i_initial_nats,i_final_nats,delta_i_x_nats,\
                 delta_i_mutual_nats,delta_i_cond_nats,conservation_residual\n",
            );
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                self.command,
                self.state,
                l.eps,
                l.ancilla_dim,
                l.i_initial_nats,
                l.i_final_nats,
                l.delta_i_x_nats,
                l.delta_i_mutual_nats,
                l.delta_i_cond_nats,
                l.conservation_residual
            ));
        } else {
            out.push_str("command,state,quantifier,value_nats,value_bits\n");
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.command,
                self.state,
                self.quantifier.clone().unwrap_or_default(),
                self.value_nats.map_or_else(String::new, |v| v.to_string()),
                self.value_bits.map_or_else(String::new, |v| v.to_string()),
            ));
        }
        out
    }
}

fn nats_bits(v: f64) -> String {
    format!("{:.9} nats ({:.9} bits)", v, v / LN_2)
}

fn format_basis(b: &BasisFile) -> String {
    let vectors: Vec<String> = b
        .vectors
        .iter()
        .map(|v| {
            let comps: Vec<String> = v
                .iter()
                .map(|[re, im]| {
                    if im.abs() < 5e-7 {
                        format!("{re:.6}")
                    } else {
                        format!("{re:.6}{}{:.6}i", if *im < 0.0 { "-" } else { "+" }, im.abs())
                    }
                })
                .collect();
            format!("[{}]", comps.join(", "))
        })
        .collect();
    format!("side {}: {}", b.subsystem, vectors.join("  "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}
