use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::cache::{cache_path, visit_systems, Visit};
use super::config::RunConfig;
use super::report::*;
use crate::error::{Error, Result};
use crate::groups::{Family, GroupSpec};
use crate::lattice::{hasse_dot, DotOverlay, LatticeReport, SubgroupLattice, SubgroupPoset};
use crate::rainbow::{
    alpha_census, anchoring_audit, bridge_bounds_audit, build_partial_rainbow_dihedral,
    build_partial_rainbow_semidihedral, closed_form_alpha_dihedral, closed_form_alpha_semidihedral,
    dihedral_shift_embedding_check, forbidden_inclusion_audit, odd_prime_power, rank_dihedral, rank_semidihedral,
    CensusRow, DihedralFamily, DihedralModel, PartialRainbow, TableDihedral,
};
use crate::transfer::{minimal_generating_set, ArrowQuotient, ArrowUniverse, TransferSystem};

/// Sizes up to this order get the width cross-check against `m(complete)`.
const CROSS_CHECK_MAX_ORDER: usize = 64;

pub fn family_name(family: Family) -> &'static str {
    match family {
        Family::Cyclic { .. } => "cyclic",
        Family::Dihedral { .. } => "dihedral",
        Family::Semidihedral { .. } => "semidihedral",
        Family::ModularMaximalCyclic { .. } => "modular-maximal-cyclic",
        Family::GeneralizedQuaternion { .. } => "generalized-quaternion",
        Family::Agl1 { .. } => "affine",
    }
}

fn build_lattice(spec: &GroupSpec, config: &RunConfig) -> Result<SubgroupLattice> {
    SubgroupLattice::build(spec.build(config.max_order)?, config.max_subgroups)
}

fn group_meta(spec: &GroupSpec, lattice: &SubgroupLattice) -> GroupMeta {
    GroupMeta {
        spec: spec.to_string(),
        family: family_name(spec.family()).to_string(),
        order: lattice.group().order() as u64,
        subgroup_count: lattice.len(),
        subgroup_class_count: lattice.conjugacy_classes().len(),
    }
}

fn certificate<P: SubgroupPoset + ?Sized>(
    label: &str,
    indexing: &str,
    poset: &P,
    arrows: &[(usize, usize)],
    target: Option<String>,
    name: Option<&dyn Fn(usize) -> String>,
) -> Certificate {
    Certificate {
        label: label.to_string(),
        indexing: indexing.to_string(),
        arrows: arrows
            .iter()
            .map(|&(src, tgt)| CertArrow {
                src,
                tgt,
                src_order: poset.subgroup_order(src),
                tgt_order: poset.subgroup_order(tgt),
                label: name.map(|f| format!("({}, {})", f(src), f(tgt))),
            })
            .collect(),
        target,
    }
}

fn complete_budget(config: &RunConfig) -> BudgetStatus {
    BudgetStatus {
        budget: config.budget,
        status: Completion::Complete,
        systems_visited: None,
    }
}

fn walked_budget(config: &RunConfig, visit: Visit) -> BudgetStatus {
    BudgetStatus {
        budget: config.budget,
        status: if visit.complete { Completion::Complete } else { Completion::LowerBoundOnly },
        systems_visited: Some(visit.visited),
    }
}

fn report(command: &str, group: GroupMeta, results: Results, certificates: Vec<Certificate>, budget: BudgetStatus) -> Report {
    Report {
        tool: format!("tsk {}", env!("CARGO_PKG_VERSION")),
        command: command.to_string(),
        group,
        results,
        certificates,
        budget,
        timing_ms: 0,
    }
}

fn cache_file(config: &RunConfig, spec: &GroupSpec, universe: &ArrowUniverse) -> Option<PathBuf> {
    config
        .cache_dir
        .as_deref()
        .map(|dir| cache_path(dir, spec, universe.digest()))
}

fn note_cache(notes: &mut Vec<String>, path: Option<&Path>, visit: Visit) {
    if let Some(p) = path {
        let state = if visit.from_cache { "hit" } else { "miss" };
        notes.push(format!("cache {state}: {}", p.display()));
    }
}

pub fn info(spec: &GroupSpec, config: &RunConfig) -> Result<Report> {
    let lattice = build_lattice(spec, config)?;
    let universe = ArrowUniverse::new(&lattice);
    let g = lattice.group();
    let results = InfoResult {
        generators: g.generators().iter().map(|&x| g.label(x).to_string()).collect(),
        normal_subgroup_count: (0..lattice.len()).filter(|&h| lattice.is_normal(h)).count(),
        arrow_count: universe.len(),
        arrow_class_count: universe.class_count(),
        universe_digest: universe.digest().to_string(),
    };
    Ok(report(
        "info",
        group_meta(spec, &lattice),
        Results::Info(results),
        Vec::new(),
        complete_budget(config),
    ))
}

pub fn width(spec: &GroupSpec, config: &RunConfig) -> Result<Report> {
    let lattice = build_lattice(spec, config)?;
    let summary = LatticeReport::new(&lattice);
    let mut certificates = Vec::new();
    let cross_check = (lattice.group().order() <= CROSS_CHECK_MAX_ORDER).then(|| {
        let q = ArrowQuotient::build(&lattice);
        let cert = minimal_generating_set(&q, &q.full_set());
        certificates.push(certificate(
            "complete-system generators",
            "lattice",
            &lattice,
            &cert.arrows,
            Some(cert.target.clone()),
            None,
        ));
        CrossCheck {
            m_complete: cert.size,
            agrees: cert.size == summary.width,
        }
    });
    let results = WidthResult {
        width: summary.width,
        meet_irreducible_classes: summary.meet_irreducible_classes,
        cross_check,
    };
    Ok(report(
        "width",
        group_meta(spec, &lattice),
        Results::Width(results),
        certificates,
        complete_budget(config),
    ))
}

pub fn complexity_exact(spec: &GroupSpec, config: &RunConfig, notes: &mut Vec<String>) -> Result<Report> {
    let lattice = build_lattice(spec, config)?;
    let universe = ArrowUniverse::new(&lattice);
    let path = cache_file(config, spec, &universe);
    let mut best: Option<super::cache::SystemRecord> = None;
    let visit = visit_systems(universe.quotient(), path.clone(), config.budget, |r| {
        if best.as_ref().is_none_or(|b| r.m > b.m) {
            best = Some(r.clone());
        }
    })?;
    note_cache(notes, path.as_deref(), visit);
    let best = best.expect("the trivial system is always visited");
    let results = ComplexityResult {
        mode: "exact".into(),
        value: best.m,
        bound: if visit.complete { Bound::Exact } else { Bound::Lower },
        witness: Some(best.class_vector.clone()),
        arcs: None,
    };
    let cert = certificate(
        "witness generators",
        "lattice",
        &lattice,
        &best.certificate,
        Some(best.class_vector),
        None,
    );
    Ok(report(
        "complexity",
        group_meta(spec, &lattice),
        Results::Complexity(results),
        vec![cert],
        walked_budget(config, visit),
    ))
}

fn rainbow_result(rainbow: &PartialRainbow) -> Result<ComplexityResult> {
    let value = rainbow
        .certified_bound()
        .ok_or_else(|| Error::Domain(format!("rainbow construction failed verification: {:?}", rainbow.check)))?;
    Ok(ComplexityResult {
        mode: "rainbow".into(),
        value,
        bound: Bound::Lower,
        witness: None,
        arcs: Some(rainbow.plan.arcs().iter().map(|a| (a.j, a.k)).collect()),
    })
}

pub fn complexity_rainbow(spec: &GroupSpec, config: &RunConfig) -> Result<Report> {
    match spec.family() {
        Family::Dihedral { m } => {
            let (p, n) = odd_prime_power(m)
                .ok_or_else(|| Error::Domain(format!("rainbow mode needs D:p^n with p an odd prime, got {spec}")))?;
            // closed-form lattice: works past the multiplication-table cap
            let model = DihedralModel::new(p, n, config.max_subgroups)?;
            let q = ArrowQuotient::build(&model);
            let rainbow = build_partial_rainbow_dihedral(&model, &q)?;
            let results = rainbow_result(&rainbow)?;
            let name = |h: usize| model.kind(h).to_string();
            let cert = certificate("partial rainbow", "dihedral-model", &model, &rainbow.arrows, None, Some(&name));
            let group = GroupMeta {
                spec: spec.to_string(),
                family: family_name(spec.family()).to_string(),
                order: 2 * m as u64,
                subgroup_count: model.subgroup_count(),
                subgroup_class_count: q.subgroup_classes().len(),
            };
            Ok(report(
                "complexity",
                group,
                Results::Complexity(results),
                vec![cert],
                complete_budget(config),
            ))
        }
        Family::Semidihedral { .. } => {
            let lattice = build_lattice(spec, config)?;
            let q = ArrowQuotient::build(&lattice);
            let rainbow = build_partial_rainbow_semidihedral(&lattice, &q)?;
            let results = rainbow_result(&rainbow)?;
            let cert = certificate("partial rainbow", "lattice", &lattice, &rainbow.arrows, None, None);
            Ok(report(
                "complexity",
                group_meta(spec, &lattice),
                Results::Complexity(results),
                vec![cert],
                complete_budget(config),
            ))
        }
        other => Err(Error::Domain(format!(
            "rainbow mode supports D:p^n (p odd prime) and SD:n only, got {other}"
        ))),
    }
}

pub fn enumerate(
    spec: &GroupSpec,
    config: &RunConfig,
    jsonl: Option<&Path>,
    validate: bool,
    notes: &mut Vec<String>,
) -> Result<Report> {
    let lattice = build_lattice(spec, config)?;
    let universe = ArrowUniverse::new(&lattice);
    let path = cache_file(config, spec, &universe);
    let mut out = match jsonl {
        Some(p) => Some(BufWriter::new(File::create(p)?)),
        None => None,
    };
    let mut write_error = None;
    let mut validated = 0u64;
    let visit = visit_systems(universe.quotient(), path.clone(), config.budget, |r| {
        if let Some(w) = out.as_mut() {
            if let Err(e) = writeln!(w, "{}", r.to_line()) {
                write_error.get_or_insert(e);
            }
        }
        if validate {
            let ok = TransferSystem::from_hex(&r.class_vector, universe.class_count())
                .map(|t| universe.is_transfer_system(&lattice, &universe.arrows_of(&t)).is_valid())
                .unwrap_or(false);
            validated += u64::from(ok);
        }
    })?;
    if let Some(e) = write_error {
        return Err(e.into());
    }
    if let Some(mut w) = out {
        w.flush()?;
    }
    note_cache(notes, path.as_deref(), visit);
    let results = EnumerateResult {
        count: visit.visited,
        jsonl: jsonl.map(|p| p.display().to_string()),
        validated: validate.then_some(validated),
    };
    Ok(report(
        "enumerate",
        group_meta(spec, &lattice),
        Results::Enumerate(results),
        Vec::new(),
        walked_budget(config, visit),
    ))
}

fn census_check(rows: &[CensusRow]) -> Check {
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| r.alpha_closed_form != Some(r.alpha_observed))
        .map(|r| format!("({},{})", r.j, r.k))
        .collect();
    Check {
        name: "alpha census matches closed form".into(),
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{} arcs agree", rows.len())
        } else {
            format!("mismatch on {}", bad.join(" "))
        },
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

struct AuditOutput {
    checks: Vec<Check>,
    observations: Vec<Observation>,
    alpha_table: Vec<CensusRow>,
    certificates: Vec<Certificate>,
    visit: Option<Visit>,
}

fn audit_dihedral(lattice: &SubgroupLattice, config: &RunConfig, p: u32, n: u32) -> Result<AuditOutput> {
    let d = TableDihedral::new(lattice)?;
    let q = ArrowQuotient::build(&d);
    let mut checks = Vec::new();
    let rank = rank_dihedral(&d, &q)?;
    checks.push(check(
        "rank is strictly order-preserving",
        true,
        format!("ranks 0..={}", rank.max_rank()),
    ));
    let rows = alpha_census(&q, &rank).rows(|j, k| closed_form_alpha_dihedral(n as usize, j, k).ok());
    checks.push(census_check(&rows));

    let bridge = bridge_bounds_audit(&d, &q, config.budget)?;
    let over = format!("over {} systems", bridge.systems);
    for (name, max, bound) in [
        ("bridge bound C+D <= n", bridge.max_cd, bridge.bound_cd),
        ("bridge bound C+X <= n+1", bridge.max_cx, bridge.bound_cx),
        ("bridge bound D+X <= n+1", bridge.max_dx, bridge.bound_dx),
        ("total bound |S| <= floor(3n/2)+1", bridge.max_total, bridge.bound_total),
    ] {
        checks.push(check(name, max <= bound, format!("max {max}, bound {bound}, {over}")));
    }
    let observations = [
        ("C+D = n implies (c_0,c_n) and (d_0,d_n) generated", bridge.equality_cd),
        ("C+X = n+1 implies (c_0,d_n) generated", bridge.equality_cx),
        ("D+X = n+1 implies (d_0,d_n) generated", bridge.equality_dx),
    ]
    .into_iter()
    .map(|(name, c)| Observation {
        name: name.to_string(),
        premise_seen: c.premise_seen,
        conclusion_held: c.conclusion_held,
    })
    .collect();

    let anchoring = anchoring_audit(&d, &q, config.budget, n == 1);
    let scope = if n == 1 { "all minimal generating sets" } else { "canonical certificates" };
    checks.push(check(
        "left-anchored arrows obey the anchoring rules",
        anchoring.passes(),
        format!(
            "{} sets ({scope}), {} single-type and {} cross-type violations",
            anchoring.sets_checked, anchoring.violations_single, anchoring.violations_cross
        ),
    ));

    let rainbow = build_partial_rainbow_dihedral(&d, &q)?;
    let expected = 3 * n as usize / 2 + 1;
    checks.push(check(
        "partial rainbow is a minimal generating set of size floor(3n/2)+1",
        rainbow.certified_bound() == Some(expected),
        format!("size {}, expected {expected}, check {:?}", rainbow.size(), rainbow.check),
    ));
    let name = |h: usize| d.kind(h).to_string();
    let certificates = vec![certificate("partial rainbow", "lattice", lattice, &rainbow.arrows, None, Some(&name))];

    if n >= 2 {
        let smaller_spec = GroupSpec(Family::Dihedral { m: p.pow(n - 1) });
        let smaller = build_lattice(&smaller_spec, config)?;
        let shift = dihedral_shift_embedding_check(&d, &TableDihedral::new(&smaller)?)?;
        checks.push(check(
            "shift c_k -> c_(k+1), d_k -> d_(k+1) embeds the smaller lattice",
            shift.passes(),
            format!("{} class pairs compared", shift.pairs_checked),
        ));
    }

    let visit = Visit {
        visited: bridge.systems,
        complete: bridge.complete && anchoring.complete,
        from_cache: false,
    };
    Ok(AuditOutput {
        checks,
        observations,
        alpha_table: rows,
        certificates,
        visit: Some(visit),
    })
}

fn audit_semidihedral(lattice: &SubgroupLattice, n: u32) -> Result<AuditOutput> {
    let q = ArrowQuotient::build(lattice);
    let mut checks = Vec::new();
    let rank = rank_semidihedral(lattice, &q)?;
    checks.push(check(
        "rank is strictly order-preserving",
        true,
        format!("ranks 0..={}", rank.max_rank()),
    ));
    let rows = alpha_census(&q, &rank).rows(|j, k| closed_form_alpha_semidihedral(n as usize, j, k).ok());
    checks.push(census_check(&rows));

    let f = forbidden_inclusion_audit(lattice)?;
    for (name, ok) in [
        ("(i) no dihedral-type subgroup inside a cyclic one", f.clause_i),
        ("(ii) no quaternion-type subgroup inside a cyclic one", f.clause_ii),
        ("(iii) no quaternion-type subgroup inside a dihedral-type one", f.clause_iii),
        ("(iv) no dihedral-type subgroup inside a quaternion-type one", f.clause_iv),
    ] {
        checks.push(check(name, ok, String::new()));
    }
    let observed: Vec<String> = f.observed.iter().map(|(a, b)| format!("{a:?}<{b:?}")).collect();
    checks.push(check(
        "strand inclusions are exactly Cyc<Cyc, Cyc<Dih, Cyc<Qua, Dih<Dih, Qua<Qua",
        f.observed == crate::rainbow::ForbiddenInclusionAudit::ALLOWED,
        observed.join(" "),
    ));
    checks.push(check(
        "one class of each strand at every middle rank",
        f.three_classes_per_middle_rank,
        format!("ranks 2..={}", n - 1),
    ));

    let rainbow = build_partial_rainbow_semidihedral(lattice, &q)?;
    let expected = 5 * (n as usize - 1) / 2;
    checks.push(check(
        "partial rainbow is a minimal generating set of size floor(5(n-1)/2)",
        rainbow.certified_bound() == Some(expected),
        format!("size {}, expected {expected}, check {:?}", rainbow.size(), rainbow.check),
    ));
    let certificates = vec![certificate("partial rainbow", "lattice", lattice, &rainbow.arrows, None, None)];
    Ok(AuditOutput {
        checks,
        observations: Vec::new(),
        alpha_table: rows,
        certificates,
        visit: None,
    })
}

pub fn audit(spec: &GroupSpec, config: &RunConfig) -> Result<Report> {
    let lattice = build_lattice(spec, config)?;
    let mut out = match spec.family() {
        Family::Dihedral { m } => match odd_prime_power(m) {
            Some((p, n)) => audit_dihedral(&lattice, config, p, n)?,
            None => AuditOutput {
                checks: Vec::new(),
                observations: Vec::new(),
                alpha_table: Vec::new(),
                certificates: Vec::new(),
                visit: None,
            },
        },
        Family::Semidihedral { n } => audit_semidihedral(&lattice, n)?,
        _ => AuditOutput {
            checks: Vec::new(),
            observations: Vec::new(),
            alpha_table: Vec::new(),
            certificates: Vec::new(),
            visit: None,
        },
    };
    // applies to every group
    let q = ArrowQuotient::build(&lattice);
    let width = lattice.width();
    let m = minimal_generating_set(&q, &q.full_set()).size;
    out.checks.insert(
        0,
        check(
            "width equals m(complete system)",
            width == m,
            format!("width {width}, m {m}"),
        ),
    );
    let all_passed = out.checks.iter().all(|c| c.passed);
    let budget = match out.visit {
        Some(v) => walked_budget(config, v),
        None => complete_budget(config),
    };
    let results = AuditResult {
        checks: out.checks,
        observations: out.observations,
        alpha_table: out.alpha_table,
        all_passed,
    };
    Ok(report(
        "audit",
        group_meta(spec, &lattice),
        Results::Audit(results),
        out.certificates,
        budget,
    ))
}

/// Class-level Hasse diagram, optionally with a partial rainbow drawn on top.
pub fn export_dot(spec: &GroupSpec, config: &RunConfig, rainbow: bool) -> Result<String> {
    let lattice = build_lattice(spec, config)?;
    if !rainbow {
        return Ok(hasse_dot(&lattice, None));
    }
    let q = ArrowQuotient::build(&lattice);
    let r = match spec.family() {
        Family::Dihedral { .. } => {
            let d = TableDihedral::new(&lattice)?;
            build_partial_rainbow_dihedral(&d, &q)?
        }
        Family::Semidihedral { .. } => build_partial_rainbow_semidihedral(&lattice, &q)?,
        other => {
            return Err(Error::Domain(format!(
                "rainbow overlay supports D:p^n and SD:n only, got {other}"
            )))
        }
    };
    let overlay = DotOverlay {
        arrows: r
            .arrows
            .iter()
            .map(|&(k, h)| (lattice.class_of(k), lattice.class_of(h), "rainbow".to_string()))
            .collect(),
    };
    Ok(hasse_dot(&lattice, Some(&overlay)))
}

pub(super) fn finish(mut report: Report, started: Instant) -> Report {
    report.timing_ms = started.elapsed().as_millis() as u64;
    report
}
