use std::collections::BTreeSet;

use serde::Serialize;

use super::{Arc, PartialRainbow, RainbowPlan, RankFunction};
use crate::error::{Error, Result};
use crate::groups::Family;
use crate::lattice::SubgroupLattice;
use crate::transfer::ArrowQuotient;

fn degree(lattice: &SubgroupLattice) -> Result<u32> {
    match lattice.group().family() {
        Family::Semidihedral { n } => Ok(n),
        other => Err(Error::domain(format!("{other} is not a semidihedral group"))),
    }
}

/// `P(H) = log2 |H|`.
pub fn rank_semidihedral(lattice: &SubgroupLattice, quotient: &ArrowQuotient) -> Result<RankFunction> {
    degree(lattice)?;
    RankFunction::from_fn(quotient, |h| lattice.subgroup(h).order().trailing_zeros() as usize)
}

/// Which of the three maximal-subgroup strands a proper subgroup belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StrandTag {
    /// Inside `<a>`.
    Cyc,
    /// Inside `<a^2, b>` but not `<a>`.
    Dih,
    /// Inside `<a^2, ab>` but not `<a>`.
    Qua,
}

/// Tag per subgroup index; `None` for the whole group.
pub fn strand_tags(lattice: &SubgroupLattice) -> Result<Vec<Option<StrandTag>>> {
    degree(lattice)?;
    let mc = lattice.generated_by_labels(&["a"])?;
    let md = lattice.generated_by_labels(&["a^2", "b"])?;
    let mq = lattice.generated_by_labels(&["a^2", "a b"])?;
    (0..lattice.len())
        .map(|h| {
            if h == lattice.top() {
                Ok(None)
            } else if lattice.leq(h, mc) {
                Ok(Some(StrandTag::Cyc))
            } else if lattice.leq(h, md) {
                Ok(Some(StrandTag::Dih))
            } else if lattice.leq(h, mq) {
                Ok(Some(StrandTag::Qua))
            } else {
                Err(Error::domain(format!("subgroup {h} lies in no maximal subgroup")))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForbiddenInclusionAudit {
    /// No dihedral-type subgroup inside a cyclic one.
    pub clause_i: bool,
    /// No quaternion-type subgroup inside a cyclic one.
    pub clause_ii: bool,
    /// No quaternion-type subgroup inside a dihedral-type one.
    pub clause_iii: bool,
    /// No dihedral-type subgroup inside a quaternion-type one.
    pub clause_iv: bool,
    /// Strand pairs `(source, target)` seen among proper inclusions of
    /// proper subgroups.
    pub observed: Vec<(StrandTag, StrandTag)>,
    /// Every rank from 2 to n-1 carries exactly one class of each tag.
    pub three_classes_per_middle_rank: bool,
}

impl ForbiddenInclusionAudit {
    pub const ALLOWED: [(StrandTag, StrandTag); 5] = [
        (StrandTag::Cyc, StrandTag::Cyc),
        (StrandTag::Cyc, StrandTag::Dih),
        (StrandTag::Cyc, StrandTag::Qua),
        (StrandTag::Dih, StrandTag::Dih),
        (StrandTag::Qua, StrandTag::Qua),
    ];

    pub fn passes(&self) -> bool {
        self.clause_i
            && self.clause_ii
            && self.clause_iii
            && self.clause_iv
            && self.observed == Self::ALLOWED
            && self.three_classes_per_middle_rank
    }
}

pub fn forbidden_inclusion_audit(lattice: &SubgroupLattice) -> Result<ForbiddenInclusionAudit> {
    let n = degree(lattice)?;
    let tags = strand_tags(lattice)?;
    let mut observed = BTreeSet::new();
    for h in 0..lattice.len() {
        for k in lattice.up_set(h).ones() {
            if k != h {
                if let (Some(a), Some(b)) = (tags[h], tags[k]) {
                    observed.insert((a, b));
                }
            }
        }
    }
    let never = |src: StrandTag, tgt: StrandTag| !observed.contains(&(src, tgt));
    let mut three = true;
    for r in 2..n {
        let mut seen: Vec<StrandTag> = lattice
            .conjugacy_classes()
            .iter()
            .filter(|c| lattice.subgroup(c[0]).order() == 1 << r)
            .filter_map(|c| tags[c[0]])
            .collect();
        seen.sort();
        three &= seen == [StrandTag::Cyc, StrandTag::Dih, StrandTag::Qua];
    }
    Ok(ForbiddenInclusionAudit {
        clause_i: never(StrandTag::Dih, StrandTag::Cyc),
        clause_ii: never(StrandTag::Qua, StrandTag::Cyc),
        clause_iii: never(StrandTag::Qua, StrandTag::Dih),
        clause_iv: never(StrandTag::Dih, StrandTag::Qua),
        observed: observed.into_iter().collect(),
        three_classes_per_middle_rank: three,
    })
}

/// Odd `n = 2m + 1`: arcs `(0, n), (1, n-1), ..., (m, m+1)`.
/// Even `n = 2m`: arcs `(1, n), (2, n-1), ..., (m, m+1)`.
pub fn semidihedral_rainbow_plan(n: u32) -> Result<RainbowPlan> {
    if n < 4 {
        return Err(Error::domain(format!("semidihedral degree {n} < 4")));
    }
    let n = n as usize;
    let m = n / 2;
    let arcs = if n % 2 == 1 {
        (0..=m).map(|i| Arc { j: i, k: n - i }).collect()
    } else {
        (1..=m).map(|i| Arc { j: i, k: n + 1 - i }).collect()
    };
    RainbowPlan::new(arcs)
}

pub fn build_partial_rainbow_semidihedral(lattice: &SubgroupLattice, quotient: &ArrowQuotient) -> Result<PartialRainbow> {
    let n = degree(lattice)?;
    let rank = rank_semidihedral(lattice, quotient)?;
    Ok(PartialRainbow::build(lattice, quotient, &rank, semidihedral_rainbow_plan(n)?))
}
