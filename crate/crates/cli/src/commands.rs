//! The `validate`, `analyze`, `multi` and `generate` subcommands.

use std::path::{Path, PathBuf};

use incompat_core::frames::{POVM_TOL, TIGHT_TOL};
use incompat_core::gj::{self, GJ_SLACK};
use incompat_core::incompat::{self, BOUND_SLACK};
use incompat_core::multi::{self, Engine};
use incompat_core::spark::{self, integer_spark_bound};
use incompat_core::{rng, Budget, CVector, Frame, IncompatibilityResult, SubsetSelection, Tolerance};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::fixtures;
use crate::format;
use crate::report::*;

/// An `(S, T)` pair requested with `--gj`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionSpec {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl std::str::FromStr for SelectionSpec {
    type Err = String;

    /// `S=0,1;T=2`; either list may be empty.
    fn from_str(text: &str) -> Result<Self, String> {
        let mut s = None;
        let mut t = None;
        for part in text.split(';') {
            let (key, list) = part.split_once('=').ok_or_else(|| format!("expected S=..;T=.., got {text:?}"))?;
            let idx = list
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<usize>().map_err(|e| format!("bad index {x:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            match key.trim() {
                "S" => s = Some(idx),
                "T" => t = Some(idx),
                k => return Err(format!("unknown key {k:?}")),
            }
        }
        match (s, t) {
            (Some(s), Some(t)) => Ok(SelectionSpec { s, t }),
            _ => Err(format!("expected S=..;T=.., got {text:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub tol: Tolerance,
    pub seed: u64,
    pub trials: usize,
    pub budget: Budget,
    pub gj: Vec<SelectionSpec>,
}

impl Default for Options {
    fn default() -> Self {
        Options { tol: Tolerance::default(), seed: 0, trials: 200, budget: Budget::default(), gj: Vec::new() }
    }
}

fn meta(command: &'static str, o: &Options) -> Meta {
    Meta {
        tool: "incompat",
        version: env!("CARGO_PKG_VERSION"),
        command,
        tolerances: Tolerances {
            rel_rank_tol: o.tol.rel_rank_tol,
            support_tol: o.tol.support_tol,
            tight_tol: TIGHT_TOL,
            povm_tol: POVM_TOL,
            bound_slack: BOUND_SLACK,
            gj_slack: GJ_SLACK,
        },
        seed: o.seed,
        trials: o.trials,
        budget: BudgetInfo {
            max_vectors: o.budget.max_vectors,
            max_dim: o.budget.max_dim,
            max_candidates: o.budget.max_candidates,
            force: o.budget.force,
        },
    }
}

fn empty_report(command: &'static str, o: &Options) -> Report {
    Report {
        meta: meta(command, o),
        frames: Vec::new(),
        pairwise: None,
        constants: None,
        gj: Vec::new(),
        multi: None,
        checks: Vec::new(),
        discrepancies: Vec::new(),
    }
}

fn frame_info(f: &Frame, tol: &Tolerance) -> CliResult<FrameInfo> {
    let b = f.frame_bounds(tol).map_err(CliError::core(f.label()))?;
    let povm_residual = match b.tight {
        true => Some(f.to_povm(tol).map_err(CliError::core(f.label()))?.residual()),
        false => None,
    };
    Ok(FrameInfo {
        label: f.label().to_string(),
        dim: f.dim(),
        size: f.len(),
        lower_bound: b.lower,
        upper_bound: b.upper,
        tight: b.tight,
        tight_constant: b.tight_constant,
        povm_residual,
    })
}

fn povm_checks(infos: &[FrameInfo]) -> Vec<Check> {
    infos
        .iter()
        .filter_map(|f| {
            let r = f.povm_residual?;
            Some(Check::new(format!("povm_residual[{}]", f.label), format!("< {POVM_TOL:e}"), r, r < POVM_TOL))
        })
        .collect()
}

fn load(paths: &[PathBuf], o: &Options) -> CliResult<Vec<Frame>> {
    let frames = paths.iter().map(|p| format::read_frame(p, &o.tol)).collect::<CliResult<Vec<_>>>()?;
    if let Some(f) = frames.iter().find(|f| f.dim() != frames[0].dim()) {
        return Err(CliError::Usage(format!(
            "dimension mismatch: {} has d={}, {} has d={}",
            frames[0].label(),
            frames[0].dim(),
            f.label(),
            f.dim()
        )));
    }
    let total = frames.iter().map(Frame::len).sum();
    o.budget
        .check_instance(total, frames[0].dim())
        .map_err(CliError::core(format!("{total} vectors in dimension {}", frames[0].dim())))?;
    Ok(frames)
}

fn engine_order(frames: &[&Frame], order: usize, selection: Vec<Vec<usize>>, witness: &CVector, method: &'static str, tol: &Tolerance) -> CliResult<EngineOrder> {
    let supports = frames
        .iter()
        .map(|f| f.support_count(witness, tol))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::core("witness support"))?;
    Ok(EngineOrder { engine: method, order, selection, witness: state_entries(witness), supports })
}

fn pair_orders(a: &Frame, b: &Frame, o: &Options) -> CliResult<[IncompatibilityResult; 2]> {
    let ctx = format!("order of ({}, {})", a.label(), b.label());
    let oracle = incompat::min_support_sum(a, b, &o.tol, &o.budget).map_err(CliError::core(&ctx))?;
    let rank = incompat::subset_rank_order(a, b, &o.tol, &o.budget).map_err(CliError::core(&ctx))?;
    Ok([oracle, rank])
}

fn pair_engines(a: &Frame, b: &Frame, results: &[IncompatibilityResult; 2], o: &Options) -> CliResult<Vec<EngineOrder>> {
    results
        .iter()
        .map(|r| {
            let sel = vec![r.selection.s().to_vec(), r.selection.t().to_vec()];
            engine_order(&[a, b], r.order, sel, &r.witness, method_name(r.method), &o.tol)
        })
        .collect()
}

fn witness_checks(prefix: &str, engines: &[EngineOrder]) -> Vec<Check> {
    engines
        .iter()
        .map(|e| {
            let sum: usize = e.supports.iter().sum();
            Check::equal(format!("{prefix}witness_attains[{}]", e.engine), e.order, sum)
        })
        .collect()
}

/// Labels for claims about ordered frame pairs, e.g. `s_AB`.
fn pair_claim(i: usize, j: usize) -> String {
    let name = |k: usize| char::from(b'A' + k as u8);
    format!("s_{}{}", name(i), name(j))
}

fn record_claim(out: &mut Vec<Discrepancy>, claim: &str, paper: usize, by_engine: &[(&str, usize)]) {
    let agreed = by_engine.windows(2).all(|w| w[0].1 == w[1].1);
    if agreed {
        let computed = by_engine[0].1;
        if computed != paper {
            let engine = by_engine.iter().map(|e| e.0).collect::<Vec<_>>().join("+");
            out.push(Discrepancy { claim: claim.into(), paper_value: paper, computed_value: computed, engine });
        }
        return;
    }
    for &(engine, computed) in by_engine {
        if computed != paper {
            out.push(Discrepancy { claim: claim.into(), paper_value: paper, computed_value: computed, engine: engine.into() });
        }
    }
}

pub fn cmd_validate(path: &Path, o: &Options) -> CliResult<Report> {
    let f = format::read_frame(path, &o.tol)?;
    let mut r = empty_report("validate", o);
    r.frames.push(frame_info(&f, &o.tol)?);
    r.checks = povm_checks(&r.frames);
    Ok(r)
}

fn gj_entry(a: &Frame, b: &Frame, spec: &SelectionSpec, idx: usize, extra: &[CVector], o: &Options) -> CliResult<(GjEntry, Option<Check>)> {
    let name = format!("gj[S={:?};T={:?}]", spec.s, spec.t);
    let sel = SubsetSelection::for_frames(spec.s.clone(), spec.t.clone(), a, b).map_err(CliError::core(&name))?;
    let adm = gj::gj_admissible(a, b, &sel, &o.tol).map_err(CliError::core(&name))?;
    if !adm.admissible {
        return Ok(gj_report(&sel, &adm, None));
    }
    let seed = rng::derive_seed(o.seed, 100 + idx as u64);
    let check = gj::verify_gj(a, b, &sel, o.trials, seed, extra, &o.tol).map_err(CliError::core(&name))?;
    Ok(gj_report(&sel, &adm, Some(&check)))
}

/// Report entry and check for one `(S, T)`; the check fails on any
/// violation or a nonpositive constant.
pub fn gj_report(sel: &SubsetSelection, adm: &gj::Admissibility, check: Option<&gj::GjCheck>) -> (GjEntry, Option<Check>) {
    let mut entry = GjEntry {
        s: sel.s().to_vec(),
        t: sel.t().to_vec(),
        product: adm.product,
        threshold: adm.threshold.is_finite().then_some(adm.threshold),
        admissible: adm.admissible,
        constants: None,
        trials: 0,
        violations: 0,
        min_ratio: None,
        first_violation: None,
    };
    let Some(check) = check else {
        return (entry, None);
    };
    let k = &check.constants;
    entry.constants = Some(GjConstantsInfo {
        alpha1: k.alpha1,
        beta1: k.beta1,
        alpha2: k.alpha2,
        beta2: k.beta2,
        mutual_dual_a_b: k.mutual_dual_a_b,
        mutual_dual_a_a: k.mutual_dual_a_a,
        m: k.m,
        numerator: k.numerator,
        denominator: k.denominator,
        c_st: k.c_st,
    });
    entry.trials = check.trials;
    entry.violations = check.violations;
    entry.min_ratio = check.min_ratio.is_finite().then_some(check.min_ratio);
    entry.first_violation =
        check.first_violation.as_ref().map(|v| GjViolationInfo { state: state_entries(&v.state), lhs: v.lhs, rhs: v.rhs });
    let name = format!("gj[S={:?};T={:?}]", sel.s(), sel.t());
    let pass = check.passed() && k.c_st > 0.0;
    let computed = json!({"c_st": k.c_st, "violations": check.violations});
    (entry, Some(Check::new(name, json!({"c_st": "> 0", "violations": 0}), computed, pass)))
}

pub fn cmd_analyze(path_a: &Path, path_b: &Path, o: &Options) -> CliResult<Report> {
    let frames = load(&[path_a.to_owned(), path_b.to_owned()], o)?;
    let (a, b) = (&frames[0], &frames[1]);
    let tol = &o.tol;
    let mut r = empty_report("analyze", o);
    r.frames = vec![frame_info(a, tol)?, frame_info(b, tol)?];
    let tight = r.frames.iter().all(|f| f.tight);
    let (m, n) = (a.len(), b.len());

    let concat = spark::concatenation(&[a, b]).map_err(CliError::core("concatenation"))?;
    let sp = spark::spark(&concat, tol, &o.budget).map_err(CliError::core("spark"))?;
    let co = spark::coherence_report(a, b, tol).map_err(CliError::core("coherence"))?;
    let orders = pair_orders(a, b, o)?;
    let engines = pair_engines(a, b, &orders, o)?;
    let s = orders[0].order;
    let rec = incompat::minimal_reconstruction_number(a, b, tol, &o.budget).map_err(CliError::core("t_min"))?;
    let spark_value = sp.value.finite();
    let int_bound = co.spark_lower_bound.map(integer_spark_bound);

    r.checks.extend(povm_checks(&r.frames));
    r.checks.push(Check::equal("engines_agree", orders[0].order, orders[1].order));
    r.checks.extend(witness_checks("", &engines));
    if let (Some(k), Some(bound)) = (spark_value, int_bound) {
        r.checks.push(Check::new("coherence_bound", format!(">= {bound}"), k, k >= bound));
    }
    if tight {
        r.checks.push(Check::equal("reconstruction_identity", m + n, s + rec.t_min));
        if let Some(k) = spark_value {
            r.checks.push(Check::new("order_at_least_spark", format!(">= {k}"), s, s >= k));
        }
        let rank = &orders[1];
        let sup = incompat::verify_support_uncertainty(a, b, rank, o.trials, rng::derive_seed(o.seed, 1), tol)
            .map_err(CliError::core("support uncertainty"))?;
        r.checks.push(Check::new(
            "support_uncertainty",
            json!({"violations": 0, "witness_sum": s}),
            json!({"violations": sup.violations, "witness_sum": sup.witness_sum, "min_observed": sup.min_observed}),
            sup.passed(),
        ));
        let consts = incompat::uncertainty_constants(a, b, s, tol, &o.budget).map_err(CliError::core("constants"))?;
        let bound = incompat::verify_uncertainty_relation(a, b, &consts, o.trials, rng::derive_seed(o.seed, 2))
            .map_err(CliError::core("uncertainty relation"))?;
        r.checks.push(Check::new(
            "uncertainty_relation",
            json!({"violations": 0}),
            json!({"violations": bound.violations, "checked": bound.checked, "worst_margin": bound.worst_margin}),
            bound.passed(),
        ));
        r.constants = Some(Constants {
            s,
            alpha: consts.alpha,
            beta: consts.beta,
            c_s: consts.c_s,
            c: consts.c,
            selections: consts
                .c_st
                .iter()
                .map(|(sel, v)| SelectionConstant { s: sel.s().to_vec(), t: sel.t().to_vec(), value: *v })
                .collect(),
        });
    }

    for (idx, spec) in o.gj.iter().enumerate() {
        let (entry, check) = gj_entry(a, b, spec, idx, &[orders[0].witness.clone()], o)?;
        r.gj.push(entry);
        r.checks.extend(check);
    }

    let claims = fixtures::paper_claims(&[a.label(), b.label()]);
    for (claim, paper) in claims {
        let by_engine: Vec<(&str, usize)> = match claim {
            "spark(A,B)" => vec![("spark", spark_value.unwrap_or(usize::MAX))],
            _ => engines.iter().map(|e| (e.engine, e.order)).collect(),
        };
        record_claim(&mut r.discrepancies, claim, paper, &by_engine);
    }

    r.pairwise = Some(Pairwise::Pair(PairInfo {
        spark: spark_value,
        spark_witness: sp.witness,
        coherence: CoherenceInfo {
            dictionary_mu: co.dictionary_mu,
            spark_lower_bound: co.spark_lower_bound,
            spark_integer_bound: int_bound,
            mutual_a_b: co.mutual,
            mutual_dual_a_b: co.mutual_dual_a_b,
            mutual_dual_a_a: co.mutual_dual_a_a,
        },
        order: s,
        engines,
        t_min: rec.t_min,
        max_nonspanning: [rec.max_nonspanning.s().to_vec(), rec.max_nonspanning.t().to_vec()],
    }));
    Ok(r)
}

pub fn cmd_multi(paths: &[PathBuf], o: &Options) -> CliResult<Report> {
    if paths.len() < 3 {
        return Err(CliError::Usage(format!("TooFewFrames: multi needs at least three frame files, got {}", paths.len())));
    }
    let owned = load(paths, o)?;
    let frames: Vec<&Frame> = owned.iter().collect();
    let tol = &o.tol;
    let mut r = empty_report("multi", o);
    r.frames = frames.iter().map(|f| frame_info(f, tol)).collect::<CliResult<_>>()?;
    r.checks.extend(povm_checks(&r.frames));

    let mut entries = Vec::new();
    for i in 0..frames.len() {
        for j in i + 1..frames.len() {
            let orders = pair_orders(frames[i], frames[j], o)?;
            let engines = pair_engines(frames[i], frames[j], &orders, o)?;
            let name = pair_claim(i, j);
            r.checks.push(Check::equal(format!("engines_agree[{name}]"), orders[0].order, orders[1].order));
            r.checks.extend(witness_checks(&format!("{name}:"), &engines));
            entries.push(PairEntryInfo { i, j, order: orders[0].order, engines });
        }
    }

    let res = multi::multi_incompatibility_order(&frames, tol, &o.budget, Engine::SupportOracle)
        .map_err(CliError::core("multi order"))?;
    let (rank_order, rank_sel, rank_witness) =
        multi::subset_rank_order(&frames, tol, &o.budget).map_err(CliError::core("multi order"))?;
    let engines = vec![
        engine_order(&frames, res.order, res.selection.subsets.clone(), &res.witness, method_name(res.method), tol)?,
        engine_order(&frames, rank_order, rank_sel.subsets, &rank_witness, "subset-rank", tol)?,
    ];
    r.checks.push(Check::equal("engines_agree[s]", res.order, rank_order));
    r.checks.extend(witness_checks("s:", &engines));
    let lhs = entries.iter().map(|e| e.order as f64).sum::<f64>() / 2.0;
    r.checks.push(Check::new("pairwise_bound", format!("<= {}", res.order), lhs, lhs <= res.order as f64));

    let labels: Vec<&str> = frames.iter().map(|f| f.label()).collect();
    for (claim, paper) in fixtures::paper_claims(&labels) {
        let by_engine: Vec<(&str, usize)> = if claim == "s" {
            engines.iter().map(|e| (e.engine, e.order)).collect()
        } else {
            let e = entries.iter().find(|e| pair_claim(e.i, e.j) == claim).expect("claims name existing pairs");
            e.engines.iter().map(|x| (x.engine, x.order)).collect()
        };
        record_claim(&mut r.discrepancies, claim, paper, &by_engine);
    }

    let n = frames.len();
    let mut matrix = vec![vec![0; n]; n];
    for e in &entries {
        matrix[e.i][e.j] = e.order;
        matrix[e.j][e.i] = e.order;
    }
    r.pairwise = Some(Pairwise::Table(TableInfo { labels: labels.iter().map(|s| s.to_string()).collect(), matrix, entries }));
    r.multi = Some(MultiInfo {
        order: res.order,
        method: method_name(res.method),
        engines,
        bound_lhs: lhs,
        bound_holds: lhs <= res.order as f64,
        strict: lhs < res.order as f64,
    });
    Ok(r)
}

/// Frame file text for `kind`; `n` defaults to `dim` where it matters.
pub fn cmd_generate(kind: &str, dim: usize, n: Option<usize>, seed: u64, tol: &Tolerance) -> CliResult<String> {
    let f = fixtures::generate(kind, dim, n.unwrap_or(dim), seed, tol)?;
    Ok(format::write_frame(&f))
}
