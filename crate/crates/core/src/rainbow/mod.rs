//! Rank functions, arc censuses and partial rainbows, with the structural
//! audits for dihedral and semidihedral lattices.

mod dihedral;
mod model;
mod semidihedral;

pub use dihedral::{
    anchoring_audit, arrow_type, arrow_type_tally, bridge_bounds_audit, build_partial_rainbow_dihedral,
    dihedral_rainbow_plan, dihedral_shift_embedding_check, odd_prime_power, rank_dihedral, AnchoringAudit, ArrowType, ArrowTypeTally,
    BridgeAudit, DihedralFamily, DihedralKind, EqualityClause, ShiftEmbeddingCheck, TableDihedral,
};
pub use model::DihedralModel;
pub use semidihedral::{
    build_partial_rainbow_semidihedral, forbidden_inclusion_audit, rank_semidihedral, semidihedral_rainbow_plan,
    strand_tags, ForbiddenInclusionAudit, StrandTag,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SubgroupPoset;
use crate::transfer::{minimal_generating_set, ArrowQuotient};

/// A rank on subgroups, constant on conjugacy classes and strictly
/// increasing along proper inclusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankFunction {
    /// Indexed by subgroup conjugacy class.
    values: Vec<usize>,
    max_rank: usize,
}

impl RankFunction {
    /// Evaluates `f` on every subgroup and checks both invariants.
    pub fn from_fn(quotient: &ArrowQuotient, f: impl Fn(usize) -> usize) -> Result<Self> {
        let mut values = Vec::with_capacity(quotient.subgroup_classes().len());
        for members in quotient.subgroup_classes() {
            let r = f(members[0]);
            if let Some(&h) = members.iter().find(|&&h| f(h) != r) {
                return Err(Error::domain(format!(
                    "rank differs on conjugate subgroups {} and {h}",
                    members[0]
                )));
            }
            values.push(r);
        }
        for &(k, h) in quotient.representatives() {
            let (a, b) = (values[quotient.subgroup_class_of(k)], values[quotient.subgroup_class_of(h)]);
            if a >= b {
                return Err(Error::domain(format!(
                    "rank is not strict on {k} < {h} (ranks {a}, {b})"
                )));
            }
        }
        let max_rank = values.iter().copied().max().unwrap_or(0);
        Ok(RankFunction { values, max_rank })
    }

    pub fn class_rank(&self, class: usize) -> usize {
        self.values[class]
    }

    pub fn rank(&self, quotient: &ArrowQuotient, h: usize) -> usize {
        self.values[quotient.subgroup_class_of(h)]
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    /// Arc of arrow class `a`.
    pub fn arc(&self, quotient: &ArrowQuotient, a: usize) -> Arc {
        let (s, t) = quotient.endpoint_classes(a);
        Arc {
            j: self.values[s],
            k: self.values[t],
        }
    }
}

/// A pair of ranks `j < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub j: usize,
    pub k: usize,
}

impl Arc {
    pub fn new(j: usize, k: usize) -> Result<Self> {
        if j >= k {
            return Err(Error::domain(format!("arc ({j},{k}) needs j < k")));
        }
        Ok(Arc { j, k })
    }

    /// Strict nesting on both ends, in either direction.
    pub fn nested_with(&self, other: &Arc) -> bool {
        (self.j < other.j && other.k < self.k) || (other.j < self.j && self.k < other.k)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.k)
    }
}

/// Arcs listed outermost first: `j` strictly increasing, `k` strictly
/// decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowPlan {
    arcs: Vec<Arc>,
}

impl RainbowPlan {
    pub fn new(arcs: Vec<Arc>) -> Result<Self> {
        for w in arcs.windows(2) {
            if !(w[0].j < w[1].j && w[1].k < w[0].k) {
                return Err(Error::domain(format!("arcs {} and {} are not nested", w[0], w[1])));
            }
        }
        Ok(RainbowPlan { arcs })
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }
}

/// `alpha(j, k)`: number of arrow classes with arc `(j, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcCensus {
    pub max_rank: usize,
    pub alpha: BTreeMap<Arc, usize>,
}

impl ArcCensus {
    pub fn get(&self, j: usize, k: usize) -> usize {
        self.alpha.get(&Arc { j, k }).copied().unwrap_or(0)
    }

    /// Every arc `0 <= j < k <= max_rank`, with zero entries.
    pub fn all_arcs(&self) -> impl Iterator<Item = (Arc, usize)> + '_ {
        (0..=self.max_rank).flat_map(move |k| (0..k).map(move |j| (Arc { j, k }, self.get(j, k))))
    }

    pub fn rows(&self, closed_form: impl Fn(usize, usize) -> Option<usize>) -> Vec<CensusRow> {
        let mut rows: Vec<CensusRow> = self
            .all_arcs()
            .map(|(a, n)| CensusRow {
                j: a.j,
                k: a.k,
                alpha_observed: n,
                alpha_closed_form: closed_form(a.j, a.k),
            })
            .collect();
        rows.sort_by_key(|r| (r.j, r.k));
        rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub j: usize,
    pub k: usize,
    pub alpha_observed: usize,
    pub alpha_closed_form: Option<usize>,
}

pub fn alpha_census(quotient: &ArrowQuotient, rank: &RankFunction) -> ArcCensus {
    let mut alpha = BTreeMap::new();
    for a in 0..quotient.len() {
        *alpha.entry(rank.arc(quotient, a)).or_insert(0) += 1;
    }
    ArcCensus {
        max_rank: rank.max_rank(),
        alpha,
    }
}

fn arc_range(j: usize, k: usize, top: usize) -> Result<()> {
    if j < k && k <= top {
        Ok(())
    } else {
        Err(Error::domain(format!("arc ({j},{k}) outside 0 <= j < k <= {top}")))
    }
}

/// Arrow classes per arc in the lattice of the dihedral group of order
/// `2 p^n`, `p` odd.
pub fn closed_form_alpha_dihedral(n: usize, j: usize, k: usize) -> Result<usize> {
    arc_range(j, k, n + 1)?;
    Ok(match (j, k) {
        (0, k) if k == n + 1 => 1,
        (0, _) => 2,
        (_, k) if k == n + 1 => 2,
        _ => 3,
    })
}

/// Arrow classes per arc in the lattice of the semidihedral group of order
/// `2^n`, `n >= 4`.
pub fn closed_form_alpha_semidihedral(n: usize, j: usize, k: usize) -> Result<usize> {
    if n < 4 {
        return Err(Error::domain(format!("semidihedral degree {n} < 4")));
    }
    arc_range(j, k, n)?;
    Ok(match (j, k) {
        (0, k) if k == n => 1,
        (0, 1) => 2,
        (0, _) => 3,
        (1, k) if k == n => 2,
        (_, k) if k == n => 3,
        (1, _) => 4,
        _ => 5,
    })
}

/// All arrow classes whose arc lies in the plan, by canonical representative.
pub fn rainbow_classes(quotient: &ArrowQuotient, rank: &RankFunction, plan: &RainbowPlan) -> Vec<usize> {
    (0..quotient.len())
        .filter(|&a| plan.arcs().contains(&rank.arc(quotient, a)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RainbowCheck {
    /// All conditions hold; `m` is the minimal generating size of the closure.
    Valid { m: usize },
    Empty,
    NotNested { first: (usize, usize), second: (usize, usize) },
    SameClass { first: (usize, usize), second: (usize, usize) },
    InvalidArrow { arrow: (usize, usize) },
    NotMinimal { size: usize, m: usize },
}

impl RainbowCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, RainbowCheck::Valid { .. })
    }
}

/// Checks nesting of distinct arcs, at most one arrow per class, and that
/// the set is a minimal generating set of its closure.
pub fn verify_partial_rainbow<P: SubgroupPoset + ?Sized>(
    poset: &P,
    quotient: &ArrowQuotient,
    rank: &RankFunction,
    arrows: &[(usize, usize)],
) -> RainbowCheck {
    if arrows.is_empty() {
        return RainbowCheck::Empty;
    }
    let mut classes = Vec::with_capacity(arrows.len());
    for &(k, h) in arrows {
        match quotient.class_of_arrow(poset, k, h) {
            Some(c) => classes.push(c),
            None => return RainbowCheck::InvalidArrow { arrow: (k, h) },
        }
    }
    for x in 0..arrows.len() {
        for y in x + 1..arrows.len() {
            let (ax, ay) = (rank.arc(quotient, classes[x]), rank.arc(quotient, classes[y]));
            if ax != ay && !ax.nested_with(&ay) {
                return RainbowCheck::NotNested {
                    first: arrows[x],
                    second: arrows[y],
                };
            }
        }
    }
    for x in 0..arrows.len() {
        for y in x + 1..arrows.len() {
            if classes[x] == classes[y] {
                return RainbowCheck::SameClass {
                    first: arrows[x],
                    second: arrows[y],
                };
            }
        }
    }
    let mut seed = quotient.empty_set();
    classes.iter().for_each(|&c| seed.insert(c));
    let m = minimal_generating_set(quotient, &quotient.close(&seed)).size;
    if m != arrows.len() {
        return RainbowCheck::NotMinimal { size: arrows.len(), m };
    }
    RainbowCheck::Valid { m }
}

/// A constructed partial rainbow together with its verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialRainbow {
    pub plan: RainbowPlan,
    /// Canonical representative arrows, one per chosen class.
    pub arrows: Vec<(usize, usize)>,
    pub classes: Vec<usize>,
    pub check: RainbowCheck,
}

impl PartialRainbow {
    pub fn size(&self) -> usize {
        self.arrows.len()
    }

    /// The certified lower bound on complexity, if verification passed.
    pub fn certified_bound(&self) -> Option<usize> {
        match self.check {
            RainbowCheck::Valid { m } => Some(m),
            _ => None,
        }
    }

    pub(crate) fn build<P: SubgroupPoset + ?Sized>(
        poset: &P,
        quotient: &ArrowQuotient,
        rank: &RankFunction,
        plan: RainbowPlan,
    ) -> Self {
        let classes = rainbow_classes(quotient, rank, &plan);
        let arrows: Vec<(usize, usize)> = classes.iter().map(|&c| quotient.representative(c)).collect();
        let check = verify_partial_rainbow(poset, quotient, rank, &arrows);
        PartialRainbow {
            plan,
            arrows,
            classes,
            check,
        }
    }
}


#[cfg(test)]
mod family_tests {
    use super::*;
    use crate::groups::GroupSpec;
    use crate::lattice::{SubgroupLattice, DEFAULT_MAX_SUBGROUPS};
    use crate::transfer::{complexity, DEFAULT_BUDGET};
    use std::collections::{BTreeMap, HashSet};

    fn lattice(spec: &str) -> SubgroupLattice {
        let g = GroupSpec::parse(spec).unwrap().build(512).unwrap();
        SubgroupLattice::build(g, DEFAULT_MAX_SUBGROUPS).unwrap()
    }

    /// Orbits of nontrivial arrows under every group element, bucketed by
    /// arc; does not use the arrow quotient.
    fn brute_census(l: &SubgroupLattice, rank: impl Fn(usize) -> usize) -> BTreeMap<(usize, usize), usize> {
        let mut seen = HashSet::new();
        let mut out = BTreeMap::new();
        for k in 0..l.len() {
            for h in l.up_set(k).ones().filter(|&h| h != k) {
                if seen.contains(&(k, h)) {
                    continue;
                }
                for g in l.group().elements() {
                    seen.insert((l.conjugate(g, k), l.conjugate(g, h)));
                }
                *out.entry((rank(k), rank(h))).or_insert(0) += 1;
            }
        }
        out
    }

    #[test]
    fn dihedral_ranks() {
        let l = lattice("D:9");
        let d = TableDihedral::new(&l).unwrap();
        let q = ArrowQuotient::build(&d);
        let rank = rank_dihedral(&d, &q).unwrap();
        let s = l.generated_by_labels(&["s"]).unwrap();
        assert_eq!(rank.rank(&q, 0), 0);
        assert_eq!(rank.rank(&q, s), 1);
        assert_eq!(rank.rank(&q, l.top()), 3);
        assert!(TableDihedral::new(&lattice("D:6")).is_err());
        assert!(TableDihedral::new(&lattice("SD:4")).is_err());
    }

    #[test]
    fn semidihedral_ranks() {
        let l = lattice("SD:4");
        let q = ArrowQuotient::build(&l);
        let rank = rank_semidihedral(&l, &q).unwrap();
        assert_eq!(rank.rank(&q, 0), 0);
        for h in l.maximal_subgroups() {
            assert_eq!(rank.rank(&q, h), 3);
        }
        assert_eq!(rank.rank(&q, l.top()), 4);
        assert!(rank_semidihedral(&lattice("D:8"), &q).is_err());
    }

    #[test]
    fn dihedral_census_matches_closed_form() {
        for (p, n) in [(3u32, 1u32), (3, 2), (3, 3), (5, 1), (5, 2)] {
            let l = lattice(&format!("D:{}", p.pow(n)));
            let d = TableDihedral::new(&l).unwrap();
            let q = ArrowQuotient::build(&d);
            let rank = rank_dihedral(&d, &q).unwrap();
            let census = alpha_census(&q, &rank);
            let brute = brute_census(&l, |h| rank.rank(&q, h));
            for (arc, count) in census.all_arcs() {
                let expect = closed_form_alpha_dihedral(n as usize, arc.j, arc.k).unwrap();
                assert_eq!(count, expect, "p={p} n={n} {arc}");
                assert_eq!(brute.get(&(arc.j, arc.k)).copied().unwrap_or(0), expect);
            }
        }
    }

    #[test]
    fn semidihedral_census_matches_closed_form() {
        for n in [4u32, 5] {
            let l = lattice(&format!("SD:{n}"));
            let q = ArrowQuotient::build(&l);
            let rank = rank_semidihedral(&l, &q).unwrap();
            let census = alpha_census(&q, &rank);
            let brute = brute_census(&l, |h| rank.rank(&q, h));
            for (arc, count) in census.all_arcs() {
                let expect = closed_form_alpha_semidihedral(n as usize, arc.j, arc.k).unwrap();
                assert_eq!(count, expect, "n={n} {arc}");
                assert_eq!(brute.get(&(arc.j, arc.k)).copied().unwrap_or(0), expect);
            }
        }
    }

    #[test]
    fn dihedral_rainbows_small() {
        for (n, size) in [(1u32, 2usize), (2, 4), (3, 5)] {
            let l = lattice(&format!("D:{}", 3u32.pow(n)));
            let d = TableDihedral::new(&l).unwrap();
            let q = ArrowQuotient::build(&d);
            let r = build_partial_rainbow_dihedral(&d, &q).unwrap();
            assert_eq!(r.size(), size);
            assert_eq!(r.certified_bound(), Some(size));
            assert!(complexity(&q, DEFAULT_BUDGET).value >= size);
        }
    }

    #[test]
    fn semidihedral_rainbow_small() {
        let l = lattice("SD:4");
        let q = ArrowQuotient::build(&l);
        let r = build_partial_rainbow_semidihedral(&l, &q).unwrap();
        assert_eq!(r.certified_bound(), Some(7));
        let l = lattice("SD:5");
        let q = ArrowQuotient::build(&l);
        assert_eq!(build_partial_rainbow_semidihedral(&l, &q).unwrap().certified_bound(), Some(10));
    }

    #[test]
    fn model_rainbows_match_formula() {
        for n in 1..=6u32 {
            let m = DihedralModel::new(3, n, 1 << 22).unwrap();
            let q = ArrowQuotient::build(&m);
            let r = build_partial_rainbow_dihedral(&m, &q).unwrap();
            assert_eq!(r.certified_bound(), Some(3 * n as usize / 2 + 1), "n={n}");
        }
    }

    #[test]
    fn model_agrees_with_table() {
        for (p, n) in [(3u32, 1u32), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (7, 2)] {
            let l = lattice(&format!("D:{}", p.pow(n)));
            let d = TableDihedral::new(&l).unwrap();
            let qt = ArrowQuotient::build(&d);
            let m = DihedralModel::new(p, n, 1 << 20).unwrap();
            let qm = ArrowQuotient::build(&m);
            assert_eq!(m.subgroup_count(), l.len());
            assert_eq!(qm.len(), qt.len());
            assert_eq!(qm.subgroup_classes().len(), qt.subgroup_classes().len());
            let ct = alpha_census(&qt, &rank_dihedral(&d, &qt).unwrap());
            let cm = alpha_census(&qm, &rank_dihedral(&m, &qm).unwrap());
            assert!(ct.all_arcs().eq(cm.all_arcs()), "D:{}", p.pow(n));
            let rt = build_partial_rainbow_dihedral(&d, &qt).unwrap().certified_bound();
            assert_eq!(rt, build_partial_rainbow_dihedral(&m, &qm).unwrap().certified_bound());
        }
    }

    #[test]
    fn verify_examples() {
        let l = lattice("D:9");
        let d = TableDihedral::new(&l).unwrap();
        let q = ArrowQuotient::build(&d);
        let rank = rank_dihedral(&d, &q).unwrap();
        let s = l.generated_by_labels(&["s"]).unwrap();
        let s2 = l.generated_by_labels(&["r s"]).unwrap();
        let c1 = l.generated_by_labels(&["r^3"]).unwrap();
        let c2 = l.generated_by_labels(&["r"]).unwrap();
        let d1 = l.generated_by_labels(&["r^3", "s"]).unwrap();
        assert!(verify_partial_rainbow(&d, &q, &rank, &[(0, s)]).is_valid());
        assert!(matches!(
            verify_partial_rainbow(&d, &q, &rank, &[(0, s), (0, s2)]),
            RainbowCheck::SameClass { .. }
        ));
        // arcs (0,2) and (1,3) cross
        assert!(matches!(
            verify_partial_rainbow(&d, &q, &rank, &[(0, c2), (c1, l.top())]),
            RainbowCheck::NotNested { .. }
        ));
        assert!(matches!(verify_partial_rainbow(&d, &q, &rank, &[]), RainbowCheck::Empty));
        assert!(matches!(
            verify_partial_rainbow(&d, &q, &rank, &[(d1, c2)]),
            RainbowCheck::InvalidArrow { .. }
        ));
    }

    #[test]
    fn tally_examples() {
        let l = lattice("D:9");
        let d = TableDihedral::new(&l).unwrap();
        let s = l.generated_by_labels(&["s"]).unwrap();
        let c2 = l.generated_by_labels(&["r"]).unwrap();
        let d1 = l.generated_by_labels(&["r^3", "s"]).unwrap();
        let t = |a: &[(usize, usize)]| arrow_type_tally(&d, a).unwrap();
        assert_eq!(t(&[(0, c2)]), ArrowTypeTally { c: 1, d: 0, x: 0 });
        assert_eq!(t(&[(s, l.top())]), ArrowTypeTally { c: 0, d: 1, x: 0 });
        assert_eq!(t(&[(0, d1)]), ArrowTypeTally { c: 0, d: 0, x: 1 });
        assert!(arrow_type(&d, s, c2).is_err());
    }

    #[test]
    fn bridge_and_anchoring_audits() {
        let l = lattice("D:3");
        let d = TableDihedral::new(&l).unwrap();
        let q = ArrowQuotient::build(&d);
        let a = bridge_bounds_audit(&d, &q, DEFAULT_BUDGET).unwrap();
        assert!(a.complete && a.bounds_hold());
        assert!(a.max_cd <= 1);
        assert!(anchoring_audit(&d, &q, DEFAULT_BUDGET, true).passes());

        let l = lattice("D:9");
        let d = TableDihedral::new(&l).unwrap();
        let q = ArrowQuotient::build(&d);
        let a = bridge_bounds_audit(&d, &q, DEFAULT_BUDGET).unwrap();
        assert!(a.bounds_hold());
        assert_eq!(a.max_total, 4);
        assert!(a.max_cx <= 3);
        assert!(anchoring_audit(&d, &q, DEFAULT_BUDGET, false).passes());
    }

    #[test]
    fn shift_embedding() {
        let ls: Vec<SubgroupLattice> = [3, 9, 27].iter().map(|m| lattice(&format!("D:{m}"))).collect();
        let ds: Vec<TableDihedral> = ls.iter().map(|l| TableDihedral::new(l).unwrap()).collect();
        let check = dihedral_shift_embedding_check(&ds[1], &ds[0]).unwrap();
        assert!(check.passes());
        let check = dihedral_shift_embedding_check(&ds[2], &ds[1]).unwrap();
        assert!(check.passes());
        assert_eq!(check.pairs_checked, 36);
        assert!(dihedral_shift_embedding_check(&ds[2], &ds[0]).is_err());
    }

    #[test]
    fn forbidden_inclusions() {
        for n in [4, 5] {
            let l = lattice(&format!("SD:{n}"));
            let audit = forbidden_inclusion_audit(&l).unwrap();
            assert!(audit.passes(), "{audit:?}");
        }
        let l = lattice("SD:4");
        let tags = strand_tags(&l).unwrap();
        let ab = l.generated_by_labels(&["a b"]).unwrap();
        assert_eq!(tags[ab], Some(StrandTag::Qua));
        let b = l.generated_by_labels(&["b"]).unwrap();
        assert_eq!(tags[b], Some(StrandTag::Dih));
    }
}
