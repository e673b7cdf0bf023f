//! Scriptable session: named bindings for presentations, filters, internal
//! predicates and oracles, one-command-per-line execution, and a batch
//! script runner with plain or structured output.
//!
//! A command either succeeds and may bind a name, or fails and leaves the
//! session untouched. Structured mode emits one JSON record per command;
//! with a fixed seed the record stream is byte-identical across runs
//! (timings are included only when explicitly switched on, since they are
//! the one nondeterministic field).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Value};

use crate::calculus::{
    check_continuity, in_halo, standard_part, ContCertificate, StResult,
};
use crate::error::{EngineError, Result};
use crate::filter::Filter;
use crate::forcing::{check_structure_axioms, eval_term, forces, truth_index_set, Env};
use crate::formula::Formula;
use crate::internal::{saturation_witness, Chain, InternalPred};
use crate::parser::{parse_command, Command, FilterExpr, UltraSpec};
use crate::rational::show_rational;
use crate::sample::random_filter;
use crate::seq::Seq;
use crate::ultra::UltraOracle;

/// A named session value.
#[derive(Clone, Debug)]
pub enum Binding {
    Seq(Seq),
    Filter(Filter),
    Pred(InternalPred),
    Oracle(UltraOracle),
    Formula(Formula),
}

impl Binding {
    fn kind(&self) -> &'static str {
        match self {
            Binding::Seq(_) => "seq",
            Binding::Filter(_) => "filter",
            Binding::Pred(_) => "internal",
            Binding::Oracle(_) => "ultra",
            Binding::Formula(_) => "formula",
        }
    }
}

/// Session options.
#[derive(Clone, Debug)]
pub struct Options {
    pub json: bool,
    pub seed: u64,
    pub depth: usize,
    pub timings: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            json: false,
            seed: 0,
            depth: 50,
            timings: false,
        }
    }
}

/// Result of one executed command.
#[derive(Clone, Debug)]
pub struct Record {
    pub command: String,
    pub kind: &'static str,
    pub ok: bool,
    /// True for `check` commands whose report had failures.
    pub check_failed: bool,
    /// Human-readable output lines.
    pub plain: Vec<String>,
    /// Structured payload.
    pub payload: Value,
    /// Attached certificate, when the command produced one.
    pub certificate: Option<String>,
    pub timing_ms: Option<u128>,
}

impl Record {
    /// The structured line for this record.
    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "command": self.command,
            "kind": self.kind,
            "ok": self.ok,
            "verdict": self.payload,
            "certificate": self.certificate,
        });
        if self.check_failed {
            obj["check_failed"] = json!(true);
        }
        if let Some(ms) = self.timing_ms {
            obj["timing_ms"] = json!(ms as u64);
        }
        obj
    }

    pub fn render_plain(&self) -> String {
        self.plain.join("\n")
    }
}

/// Interactive or scripted engine state.
#[derive(Clone, Debug, Default)]
pub struct Session {
    bindings: BTreeMap<String, Binding>,
    pub options: Options,
}

impl Session {
    pub fn new(options: Options) -> Session {
        Session {
            bindings: BTreeMap::new(),
            options,
        }
    }

    pub fn binding(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    /// Environment view of the current bindings.
    fn env(&self) -> Env {
        let mut env = Env::new();
        for (name, b) in &self.bindings {
            match b {
                Binding::Seq(s) => {
                    env.vars.insert(name.clone(), s.clone());
                }
                Binding::Pred(p) => {
                    env.preds.insert(name.clone(), p.clone());
                }
                _ => {}
            }
        }
        env
    }

    fn resolve_filter(&self, expr: &FilterExpr) -> Result<Filter> {
        let mut filter = match &expr.base {
            None => Filter::frechet(),
            Some(name) => match self.bindings.get(name) {
                Some(Binding::Filter(f)) => f.clone(),
                Some(other) => {
                    return Err(EngineError::Argument(format!(
                        "`{name}` is a {}, not a filter",
                        other.kind()
                    )))
                }
                None => return Err(EngineError::Unbound(name.clone())),
            },
        };
        for s in &expr.extensions {
            filter = filter.extend(s)?;
        }
        Ok(filter)
    }

    /// Execute one line. Blank lines and `#` comments produce an empty
    /// success record. On error the session is unchanged.
    pub fn run_line(&mut self, line: &str) -> Record {
        let started = Instant::now();
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return Record {
                command: trimmed.to_string(),
                kind: "comment",
                ok: true,
                check_failed: false,
                plain: vec![],
                payload: Value::Null,
                certificate: None,
                timing_ms: self.options.timings.then(|| started.elapsed().as_millis()),
            };
        }
        let outcome = parse_command(trimmed).and_then(|cmd| self.execute(cmd));
        let timing = self
            .options
            .timings
            .then(|| started.elapsed().as_millis());
        match outcome {
            Ok(mut record) => {
                record.command = trimmed.to_string();
                record.timing_ms = timing;
                record
            }
            Err(e) => Record {
                command: trimmed.to_string(),
                kind: "error",
                ok: false,
                check_failed: false,
                plain: vec![format!("error: {e}")],
                payload: json!({ "error": e.to_string() }),
                certificate: None,
                timing_ms: timing,
            },
        }
    }

    fn bind(&mut self, name: String, value: Binding) -> Result<()> {
        self.bindings.insert(name, value);
        Ok(())
    }

    fn execute(&mut self, cmd: Command) -> Result<Record> {
        let mut record = Record {
            command: String::new(),
            kind: "ok",
            ok: true,
            check_failed: false,
            plain: vec![],
            payload: Value::Null,
            certificate: None,
            timing_ms: None,
        };
        match cmd {
            Command::Let { name, term } => {
                let env = self.env();
                let seq = eval_term(&term, &env)?.with_name(name.clone());
                let repairs: Vec<u64> = seq.repairs().collect();
                record.kind = "let";
                record.plain.push(format!("{name} = {seq}"));
                if !repairs.is_empty() {
                    record
                        .plain
                        .push(format!("  note: repaired to 0 at indices {repairs:?}"));
                }
                record.payload = json!({
                    "name": name,
                    "value": seq.to_string(),
                    "repaired": repairs,
                });
                self.bind(name, Binding::Seq(seq))?;
            }
            Command::FilterDef { name, expr } => {
                let filter = self.resolve_filter(&expr)?;
                record.kind = "filter";
                record
                    .plain
                    .push(format!("{name} = {filter}  [core {:?}]", filter.core().classify()));
                record.payload = json!({
                    "name": name,
                    "filter": filter.to_string(),
                    "core": filter.core().to_string(),
                });
                self.bind(name, Binding::Filter(filter))?;
            }
            Command::Force { filter, formula } => {
                let filter = self.resolve_filter(&filter)?;
                let env = self.env();
                let verdict = forces(&filter, &formula, &env)?;
                record.kind = "force";
                let mut line = format!("{}", verdict.value);
                if let Some(cert) = &verdict.certificate {
                    write!(line, "  ({cert})").unwrap();
                    record.certificate = Some(cert.to_string());
                }
                record.plain.push(line);
                record.payload = json!({
                    "filter": filter.to_string(),
                    "formula": formula.to_string(),
                    "value": verdict.value,
                    "truth_index_set": verdict.truth_index_set.as_ref().map(|s| s.to_string()),
                    "certificate": verdict.certificate.as_ref().map(|c| c.to_string()),
                });
            }
            Command::TruthSet { formula } => {
                let env = self.env();
                let set = truth_index_set(&formula, &env)?;
                record.kind = "truthset";
                record
                    .plain
                    .push(format!("{set}  [{:?}]", set.classify()));
                record.payload = json!({
                    "formula": formula.to_string(),
                    "set": set.to_string(),
                });
            }
            Command::St { term, filter } => {
                let filter = self.resolve_filter(&filter)?;
                let env = self.env();
                let seq = eval_term(&term, &env)?;
                let st = standard_part(&seq, &filter)?;
                record.kind = "st";
                record.plain.push(st.to_string());
                record.payload = match &st {
                    StResult::Unique(q) => json!({ "unique": show_rational(q) }),
                    StResult::Branches(bs) => json!({
                        "branches": bs
                            .iter()
                            .map(|(c, l)| json!({ "cell": c.to_string(), "limit": l.to_string() }))
                            .collect::<Vec<_>>(),
                    }),
                    StResult::Unbounded(cells) => json!({
                        "unbounded": cells.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    }),
                };
            }
            Command::Halo { a, b, filter } => {
                let filter = self.resolve_filter(&filter)?;
                let env = self.env();
                let sa = eval_term(&a, &env)?;
                let sb = eval_term(&b, &env)?;
                let inside = in_halo(&sb, &sa, &filter)?;
                record.kind = "halo";
                record.plain.push(format!("{inside}"));
                record.payload = json!({
                    "a": sa.to_string(),
                    "b": sb.to_string(),
                    "filter": filter.to_string(),
                    "in_halo": inside,
                });
            }
            Command::Cont { func, at } => {
                let report = check_continuity(&func, &at)?;
                record.kind = "cont";
                record.plain.push(report.to_string());
                if let ContCertificate::Counterexample { probe, side, .. } = &report.certificate {
                    record.certificate = Some(format!("counterexample from {side}: {probe}"));
                }
                record.payload = json!({
                    "point": show_rational(&report.point),
                    "continuous": report.continuous,
                    "value": show_rational(&report.value),
                    "left": report.left.to_string(),
                    "right": report.right.to_string(),
                    "certificate": match &report.certificate {
                        ContCertificate::Witness { moduli } => json!({
                            "witness": moduli
                                .iter()
                                .map(|(m, s)| json!({ "modulus": m, "set": s.to_string() }))
                                .collect::<Vec<_>>(),
                        }),
                        ContCertificate::Counterexample { probe, side, probe_in_halo, image_in_halo } => json!({
                            "counterexample": probe.to_string(),
                            "side": side.to_string(),
                            "probe_in_halo": probe_in_halo,
                            "image_in_halo": image_in_halo,
                        }),
                    },
                });
            }
            Command::Internal {
                name,
                var,
                template,
            } => {
                let env = self.env();
                let pred = InternalPred::new(var, &template, &env.vars)?.with_name(name.clone());
                record.kind = "internal";
                record.plain.push(format!("{pred}"));
                record.payload = json!({
                    "name": name,
                    "pred": pred.to_string(),
                });
                self.bind(name, Binding::Pred(pred))?;
            }
            Command::Saturate {
                chain,
                filter,
                depth,
            } => {
                let filter = self.resolve_filter(&filter)?;
                let mut links = Vec::new();
                for name in &chain {
                    match self.bindings.get(name) {
                        Some(Binding::Pred(p)) => links.push(p.clone()),
                        Some(other) => {
                            return Err(EngineError::Argument(format!(
                                "`{name}` is a {}, not an internal predicate",
                                other.kind()
                            )))
                        }
                        None => return Err(EngineError::Unbound(name.clone())),
                    }
                }
                if depth == 0 || depth > links.len() {
                    return Err(EngineError::Argument(format!(
                        "depth must be between 1 and the chain length {}",
                        links.len()
                    )));
                }
                links.truncate(depth);
                let outcome = saturation_witness(&Chain::finite(links), &filter)?;
                record.kind = "saturate";
                record
                    .plain
                    .push(format!("witness = {}", outcome.witness));
                record.plain.push(format!(
                    "verified {} of {} links",
                    outcome.checks.iter().filter(|(_, ok)| *ok).count(),
                    outcome.checks.len()
                ));
                record.check_failed = !outcome.all_verified();
                record.payload = json!({
                    "witness": outcome.witness.to_string(),
                    "checks": outcome
                        .checks
                        .iter()
                        .map(|(k, ok)| json!({ "k": k, "ok": ok }))
                        .collect::<Vec<_>>(),
                });
            }
            Command::Ultra { name, spec } => {
                let oracle = match spec {
                    UltraSpec::Zero => UltraOracle::zero(),
                    UltraSpec::Padic { base, digits } => UltraOracle::padic(base, &digits)?,
                };
                record.kind = "ultra";
                record.plain.push(format!("{name} = {oracle}"));
                record.payload = json!({
                    "name": name,
                    "oracle": oracle.tag(),
                });
                self.bind(name, Binding::Oracle(oracle))?;
            }
            Command::Quotient { name, formula } => {
                let oracle = match self.bindings.get(&name) {
                    Some(Binding::Oracle(u)) => u.clone(),
                    Some(other) => {
                        return Err(EngineError::Argument(format!(
                            "`{name}` is a {}, not an oracle",
                            other.kind()
                        )))
                    }
                    None => return Err(EngineError::Unbound(name)),
                };
                let env = self.env();
                let value = oracle.quotient_sat(&formula, &env)?;
                record.kind = "quotient";
                record.plain.push(format!("{value}"));
                record.payload = json!({
                    "oracle": oracle.tag(),
                    "formula": formula.to_string(),
                    "value": value,
                });
            }
            Command::Check { formula } => {
                let env = self.env();
                let mut rng = crate::sample::Sampler::new(self.options.seed).rng();
                let filters: Vec<Filter> = std::iter::once(Filter::frechet())
                    .chain((0..8).map(|_| random_filter(&mut rng, 12)))
                    .collect();
                let report =
                    check_structure_axioms(&formula, &env, &filters, self.options.seed)?;
                record.kind = "check";
                record.check_failed = !report.all_passed();
                for entry in &report.entries {
                    record.plain.push(format!(
                        "{}: {}",
                        entry.name,
                        if entry.passed { "pass" } else { "FAIL" }
                    ));
                }
                record.payload = json!({
                    "formula": formula.to_string(),
                    "all_passed": report.all_passed(),
                    "entries": report
                        .entries
                        .iter()
                        .map(|e| json!({ "name": e.name, "passed": e.passed, "detail": e.detail }))
                        .collect::<Vec<_>>(),
                });
            }
            Command::Set { option, value } => {
                match option.as_str() {
                    "seed" => {
                        self.options.seed = value.parse().map_err(|_| {
                            EngineError::Argument(format!("bad seed `{value}`"))
                        })?;
                    }
                    "depth" => {
                        self.options.depth = value.parse().map_err(|_| {
                            EngineError::Argument(format!("bad depth `{value}`"))
                        })?;
                    }
                    "output" => match value.as_str() {
                        "plain" => self.options.json = false,
                        "json" => self.options.json = true,
                        other => {
                            return Err(EngineError::Argument(format!(
                                "unknown output mode `{other}`"
                            )))
                        }
                    },
                    "timings" => match value.as_str() {
                        "on" => self.options.timings = true,
                        "off" => self.options.timings = false,
                        other => {
                            return Err(EngineError::Argument(format!(
                                "timings are `on` or `off`, not `{other}`"
                            )))
                        }
                    },
                    other => {
                        return Err(EngineError::Argument(format!(
                            "unknown option `{other}`"
                        )))
                    }
                }
                record.kind = "set";
                record.plain.push(format!("{option} = {value}"));
                record.payload = json!({ "option": option, "value": value });
            }
        }
        Ok(record)
    }

    /// Run a whole script (UTF-8, `#` comments). Returns every record; the
    /// script "fails" when any record errored or any check failed.
    pub fn run_script(&mut self, text: &str) -> ScriptReport {
        let mut records = Vec::new();
        for line in text.lines() {
            records.push(self.run_line(line));
        }
        ScriptReport { records }
    }
}

/// All records from one script run.
#[derive(Clone, Debug)]
pub struct ScriptReport {
    pub records: Vec<Record>,
}

impl ScriptReport {
    pub fn failed(&self) -> bool {
        self.records
            .iter()
            .any(|r| !r.ok || r.check_failed)
    }

    /// The structured output stream: one JSON line per non-comment command.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            if r.kind == "comment" {
                continue;
            }
            out.push_str(&r.to_json().to_string());
            out.push('\n');
        }
        out
    }

    /// The plain transcript: commands echoed with their outputs.
    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            if r.kind == "comment" {
                continue;
            }
            out.push_str("> ");
            out.push_str(&r.command);
            out.push('\n');
            for line in &r.plain {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}
