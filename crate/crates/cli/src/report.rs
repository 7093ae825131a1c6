//! Report schema. Field order is the serialized key order.

use std::fmt::Write as _;

use incompat_core::multi::Engine;
use incompat_core::{CVector, Method};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub frames: Vec<FrameInfo>,
    pub pairwise: Option<Pairwise>,
    pub constants: Option<Constants>,
    pub gj: Vec<GjEntry>,
    pub multi: Option<MultiInfo>,
    pub checks: Vec<Check>,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub trials: usize,
    pub budget: BudgetInfo,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub rel_rank_tol: f64,
    pub support_tol: f64,
    pub tight_tol: f64,
    pub povm_tol: f64,
    pub bound_slack: f64,
    pub gj_slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetInfo {
    pub max_vectors: usize,
    pub max_dim: usize,
    pub max_candidates: u64,
    pub force: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameInfo {
    pub label: String,
    pub dim: usize,
    pub size: usize,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub tight: bool,
    pub tight_constant: Option<f64>,
    /// `max |sum Q_i - I|` of the associated POVM, for tight frames.
    pub povm_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Pairwise {
    Pair(PairInfo),
    Table(TableInfo),
}

#[derive(Debug, Clone, Serialize)]
pub struct PairInfo {
    pub spark: Option<usize>,
    pub spark_witness: Option<Vec<usize>>,
    pub coherence: CoherenceInfo,
    pub order: usize,
    pub engines: Vec<EngineOrder>,
    pub t_min: usize,
    pub max_nonspanning: [Vec<usize>; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct CoherenceInfo {
    pub dictionary_mu: f64,
    pub spark_lower_bound: Option<f64>,
    pub spark_integer_bound: Option<usize>,
    pub mutual_a_b: f64,
    pub mutual_dual_a_b: Option<f64>,
    pub mutual_dual_a_a: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EngineOrder {
    pub engine: &'static str,
    pub order: usize,
    pub selection: Vec<Vec<usize>>,
    pub witness: Vec<[f64; 2]>,
    /// Support of the witness in each frame.
    pub supports: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableInfo {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<usize>>,
    pub entries: Vec<PairEntryInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairEntryInfo {
    pub i: usize,
    pub j: usize,
    pub order: usize,
    pub engines: Vec<EngineOrder>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Constants {
    pub s: usize,
    pub alpha: f64,
    pub beta: f64,
    pub c_s: f64,
    pub c: f64,
    pub selections: Vec<SelectionConstant>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelectionConstant {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GjEntry {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub product: usize,
    /// `None` when the threshold is infinite.
    pub threshold: Option<f64>,
    pub admissible: bool,
    pub constants: Option<GjConstantsInfo>,
    pub trials: usize,
    pub violations: usize,
    pub min_ratio: Option<f64>,
    pub first_violation: Option<GjViolationInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GjConstantsInfo {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub mutual_dual_a_b: f64,
    pub mutual_dual_a_a: f64,
    pub m: usize,
    pub numerator: f64,
    pub denominator: f64,
    pub c_st: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GjViolationInfo {
    pub state: Vec<[f64; 2]>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiInfo {
    pub order: usize,
    pub method: &'static str,
    pub engines: Vec<EngineOrder>,
    /// `(1/2) sum_{i<j} s_ij`.
    pub bound_lhs: f64,
    pub bound_holds: bool,
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub claim: String,
    pub paper_value: usize,
    pub computed_value: usize,
    pub engine: String,
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::SubsetRank => "subset-rank",
        Method::SupportOracle => "support-oracle",
    }
}

pub fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::SubsetRank => "subset-rank",
        Engine::SupportOracle => "support-oracle",
        Engine::Auto => "auto",
    }
}

pub fn state_entries(x: &CVector) -> Vec<[f64; 2]> {
    x.entries().iter().map(|z| [z.re, z.im]).collect()
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl Into<Value>, computed: impl Into<Value>, pass: bool) -> Self {
        Check { name: name.into(), expected: expected.into(), computed: computed.into(), pass }
    }

    pub fn equal<T: PartialEq + Into<Value> + Clone>(name: impl Into<String>, expected: T, computed: T) -> Self {
        let pass = expected == computed;
        Check::new(name, expected, computed, pass)
    }
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.meta;
        let _ = writeln!(out, "{} {} {} (seed {}, trials {})", m.tool, m.version, m.command, m.seed, m.trials);
        let _ = writeln!(
            out,
            "tolerances: rank {:e}, support {:e}, tight {:e}",
            m.tolerances.rel_rank_tol, m.tolerances.support_tol, m.tolerances.tight_tol
        );
        for f in &self.frames {
            let _ = write!(out, "frame {}: d={} m={} bounds [{}, {}]", f.label, f.dim, f.size, f.lower_bound, f.upper_bound);
            match (f.tight_constant, f.povm_residual) {
                (Some(c), Some(r)) => {
                    let _ = writeln!(out, " tight c={c} povm residual {r:e}");
                }
                _ => out.push_str(" not tight\n"),
            }
        }
        match &self.pairwise {
            Some(Pairwise::Pair(p)) => {
                let spark = p.spark.map_or("inf".to_string(), |k| k.to_string());
                let _ = writeln!(out, "spark {spark}, mu {}, M(A,B) {}", p.coherence.dictionary_mu, p.coherence.mutual_a_b);
                for e in &p.engines {
                    let _ = writeln!(out, "s = {} ({}) selection {:?} supports {:?}", e.order, e.engine, e.selection, e.supports);
                }
                let _ = writeln!(out, "t_min = {}", p.t_min);
            }
            Some(Pairwise::Table(t)) => {
                let _ = writeln!(out, "pairwise orders ({}):", t.labels.join(", "));
                for row in &t.matrix {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
                    let _ = writeln!(out, "  {}", cells.join(""));
                }
            }
            None => {}
        }
        if let Some(c) = &self.constants {
            let _ = writeln!(out, "alpha {}, beta {}, C_s {}, C {} over {} selections", c.alpha, c.beta, c.c_s, c.c, c.selections.len());
        }
        for g in &self.gj {
            match &g.constants {
                Some(k) => {
                    let _ = writeln!(out, "GJ S={:?} T={:?}: C = {}, {} violations in {} states", g.s, g.t, k.c_st, g.violations, g.trials);
                }
                None => {
                    let _ = writeln!(out, "GJ S={:?} T={:?}: inadmissible (|S||T| = {})", g.s, g.t, g.product);
                }
            }
        }
        if let Some(mu) = &self.multi {
            let _ = writeln!(
                out,
                "s = {} ({}), half pairwise sum {}, bound {}, strict {}",
                mu.order, mu.method, mu.bound_lhs, mu.bound_holds, mu.strict
            );
        }
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict} {}: expected {}, computed {}", c.name, c.expected, c.computed);
        }
        for d in &self.discrepancies {
            let _ = writeln!(out, "DISCREPANCY {}: claimed {}, computed {} ({})", d.claim, d.paper_value, d.computed_value, d.engine);
        }
        out
    }
}
