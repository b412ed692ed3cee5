use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::MeetIrreducibleEntry;
use crate::rainbow::CensusRow;

/// Everything one subcommand produced. The JSON layout is documented in
/// `docs/report.schema.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub command: String,
    pub group: GroupMeta,
    pub results: Results,
    pub certificates: Vec<Certificate>,
    pub budget: BudgetStatus,
    /// Wall-clock time; the only field that may differ between reruns.
    pub timing_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupMeta {
    pub spec: String,
    pub family: String,
    pub order: u64,
    pub subgroup_count: usize,
    pub subgroup_class_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completion {
    Complete,
    LowerBoundOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetStatus {
    pub budget: u64,
    pub status: Completion,
    /// Transfer systems visited, when the command enumerates.
    pub systems_visited: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertArrow {
    pub src: usize,
    pub tgt: usize,
    pub src_order: usize,
    pub tgt_order: usize,
    pub label: Option<String>,
}

/// A generating set, with the class vector of what it generates when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub label: String,
    /// `lattice` for indices into the canonical subgroup list, `dihedral-model`
    /// for the closed-form dihedral indexing.
    pub indexing: String,
    pub arrows: Vec<CertArrow>,
    pub target: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Results {
    Info(InfoResult),
    Width(WidthResult),
    Complexity(ComplexityResult),
    Enumerate(EnumerateResult),
    Audit(AuditResult),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfoResult {
    pub generators: Vec<String>,
    pub normal_subgroup_count: usize,
    pub arrow_count: usize,
    pub arrow_class_count: usize,
    pub universe_digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    /// Minimal generating size of the complete transfer system.
    pub m_complete: usize,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthResult {
    pub width: usize,
    pub meet_irreducible_classes: Vec<MeetIrreducibleEntry>,
    /// Only computed for groups of order at most 64.
    pub cross_check: Option<CrossCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Exact,
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityResult {
    pub mode: String,
    pub value: usize,
    pub bound: Bound,
    /// Class vector of the lectically least system attaining `value`.
    pub witness: Option<String>,
    /// Rank arcs of a rainbow construction.
    pub arcs: Option<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerateResult {
    pub count: u64,
    pub jsonl: Option<String>,
    /// Systems re-checked against the axioms, when requested.
    pub validated: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A conditional statement tallied over the enumeration rather than
/// asserted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub name: String,
    pub premise_seen: u64,
    pub conclusion_held: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditResult {
    pub checks: Vec<Check>,
    pub observations: Vec<Observation>,
    pub alpha_table: Vec<CensusRow>,
    pub all_passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let g = &self.group;
        let _ = writeln!(out, "group       {} ({}, order {})", g.spec, g.family, g.order);
        let _ = writeln!(
            out,
            "subgroups   {} in {} conjugacy classes",
            g.subgroup_count, g.subgroup_class_count
        );
        match &self.results {
            Results::Info(r) => {
                let _ = writeln!(out, "generators  {}", r.generators.join(", "));
                let _ = writeln!(out, "normal      {}", r.normal_subgroup_count);
                let _ = writeln!(out, "arrows      {} in {} classes", r.arrow_count, r.arrow_class_count);
                let _ = writeln!(out, "digest      {}", r.universe_digest);
            }
            Results::Width(r) => {
                let _ = writeln!(out, "width       {}", r.width);
                if let Some(c) = &r.cross_check {
                    let verdict = if c.agrees { "agrees" } else { "DISAGREES" };
                    let _ = writeln!(out, "m(complete) {} ({verdict})", c.m_complete);
                }
                let _ = writeln!(out, "meet-irreducible classes:");
                let _ = writeln!(out, "  order  class-size  cover-order");
                for e in &r.meet_irreducible_classes {
                    let _ = writeln!(out, "  {:>5}  {:>10}  {:>11}", e.order, e.class_size, e.unique_cover_order);
                }
            }
            Results::Complexity(r) => {
                let what = match (r.bound, r.mode.as_str()) {
                    (Bound::Exact, _) => "exact".to_string(),
                    (Bound::Lower, "rainbow") => "lower bound from a partial rainbow".to_string(),
                    (Bound::Lower, _) => "lower bound, enumeration incomplete".to_string(),
                };
                let _ = writeln!(out, "complexity  {} ({what})", r.value);
                if let Some(w) = &r.witness {
                    let _ = writeln!(out, "witness     {w}");
                }
                if let Some(arcs) = &r.arcs {
                    let arcs: Vec<String> = arcs.iter().map(|(j, k)| format!("({j},{k})")).collect();
                    let _ = writeln!(out, "arcs        {}", arcs.join(" "));
                }
            }
            Results::Enumerate(r) => {
                let _ = writeln!(out, "systems     {}", r.count);
                if let Some(v) = r.validated {
                    let _ = writeln!(out, "validated   {v}");
                }
                if let Some(p) = &r.jsonl {
                    let _ = writeln!(out, "jsonl       {p}");
                }
            }
            Results::Audit(r) => {
                for c in &r.checks {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    if c.detail.is_empty() {
                        let _ = writeln!(out, "{mark}  {}", c.name);
                    } else {
                        let _ = writeln!(out, "{mark}  {}: {}", c.name, c.detail);
                    }
                }
                for o in &r.observations {
                    let _ = writeln!(
                        out,
                        "NOTE  {}: premise in {} systems, conclusion held in {}",
                        o.name, o.premise_seen, o.conclusion_held
                    );
                }
                if !r.alpha_table.is_empty() {
                    let _ = writeln!(out, "alpha table:");
                    let _ = writeln!(out, "  arc      observed  closed-form");
                    for row in &r.alpha_table {
                        let cf = row.alpha_closed_form.map_or("-".to_string(), |v| v.to_string());
                        let arc = format!("({},{})", row.j, row.k);
                        let _ = writeln!(out, "  {arc:<8} {:>8}  {cf:>11}", row.alpha_observed);
                    }
                }
                let _ = writeln!(out, "all checks  {}", if r.all_passed { "passed" } else { "FAILED" });
            }
        }
        for c in &self.certificates {
            let _ = writeln!(out, "certificate {} [{} arrows]", c.label, c.arrows.len());
            for a in &c.arrows {
                let label = a.label.as_deref().map(|l| format!("  {l}")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "  {} -> {}  (orders {} -> {}){label}",
                    a.src, a.tgt, a.src_order, a.tgt_order
                );
            }
        }
        let status = match self.budget.status {
            Completion::Complete => "complete",
            Completion::LowerBoundOnly => "lower-bound-only",
        };
        match self.budget.systems_visited {
            Some(v) => {
                let _ = writeln!(out, "budget      {status} ({v} systems visited, budget {})", self.budget.budget);
            }
            None => {
                let _ = writeln!(out, "budget      {status}");
            }
        }
        let _ = writeln!(out, "time        {} ms", self.timing_ms);
        out
    }

    /// The main table of the report as CSV.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        match &self.results {
            Results::Info(r) => {
                w.write_record(["key", "value"]).map_err(csv_err)?;
                let g = &self.group;
                for (k, v) in [
                    ("spec", g.spec.clone()),
                    ("order", g.order.to_string()),
                    ("subgroups", g.subgroup_count.to_string()),
                    ("subgroup_classes", g.subgroup_class_count.to_string()),
                    ("arrows", r.arrow_count.to_string()),
                    ("arrow_classes", r.arrow_class_count.to_string()),
                    ("digest", r.universe_digest.clone()),
                ] {
                    w.write_record([k, v.as_str()]).map_err(csv_err)?;
                }
            }
            Results::Width(r) => {
                w.write_record(["order", "class_size", "unique_cover_order"]).map_err(csv_err)?;
                for e in &r.meet_irreducible_classes {
                    w.serialize((e.order, e.class_size, e.unique_cover_order)).map_err(csv_err)?;
                }
            }
            Results::Complexity(r) => {
                w.write_record(["spec", "mode", "value", "bound"]).map_err(csv_err)?;
                let bound = match r.bound {
                    Bound::Exact => "exact",
                    Bound::Lower => "lower",
                };
                w.serialize((&self.group.spec, &r.mode, r.value, bound)).map_err(csv_err)?;
            }
            Results::Enumerate(r) => {
                w.write_record(["spec", "count", "status"]).map_err(csv_err)?;
                let status = match self.budget.status {
                    Completion::Complete => "complete",
                    Completion::LowerBoundOnly => "lower-bound-only",
                };
                w.serialize((&self.group.spec, r.count, status)).map_err(csv_err)?;
            }
            Results::Audit(r) => {
                w.write_record(["j", "k", "alpha_observed", "alpha_closed_form"]).map_err(csv_err)?;
                for row in &r.alpha_table {
                    let cf = row.alpha_closed_form.map_or(String::new(), |v| v.to_string());
                    w.write_record([row.j.to_string(), row.k.to_string(), row.alpha_observed.to_string(), cf])
                        .map_err(csv_err)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
