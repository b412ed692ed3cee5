use serde::Serialize;

use std::fmt;

use super::{Arc, PartialRainbow, RainbowPlan, RankFunction};
use crate::error::{Error, Result};
use crate::groups::{is_prime, Family};
use crate::lattice::{SubgroupLattice, SubgroupPoset};
use crate::transfer::{for_each_with_certificate, next_combination, ArrowQuotient};

/// Position of a subgroup of a dihedral group of order `2 p^n`: the rotation
/// subgroup `c_k` of order `p^k`, or a conjugate of `d_k` of order `2 p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DihedralKind {
    C(u32),
    D(u32),
}

impl fmt::Display for DihedralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DihedralKind::C(k) => write!(f, "c_{k}"),
            DihedralKind::D(k) => write!(f, "d_{k}"),
        }
    }
}

/// Subgroup posets of dihedral groups of order `2 p^n` with `p` odd.
pub trait DihedralFamily: SubgroupPoset {
    fn prime(&self) -> u32;

    fn exponent(&self) -> u32;

    /// Whether `h` lies in the rotation subgroup.
    fn is_rotation(&self, h: usize) -> bool;

    fn kind(&self, h: usize) -> DihedralKind {
        let order = self.subgroup_order(h);
        let p = self.prime() as usize;
        let (mut o, tag) = if self.is_rotation(h) { (order, true) } else { (order / 2, false) };
        let mut k = 0;
        while o > 1 {
            o /= p;
            k += 1;
        }
        if tag {
            DihedralKind::C(k)
        } else {
            DihedralKind::D(k)
        }
    }

    /// Some subgroup of the given kind.
    fn find_kind(&self, kind: DihedralKind) -> Option<usize> {
        (0..self.subgroup_count()).find(|&h| self.kind(h) == kind)
    }
}

/// Splits `m` as `p^n` with `p` an odd prime and `n >= 1`.
pub fn odd_prime_power(m: u32) -> Option<(u32, u32)> {
    if m < 3 || m % 2 == 0 {
        return None;
    }
    let p = (3..=m).find(|d| m % d == 0)?;
    if !is_prime(p as u64) {
        return None;
    }
    let (mut rest, mut n) = (m, 0);
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

/// A table-built dihedral lattice viewed through [`DihedralFamily`].
pub struct TableDihedral<'a> {
    lattice: &'a SubgroupLattice,
    rotation: usize,
    p: u32,
    n: u32,
}

impl<'a> TableDihedral<'a> {
    pub fn new(lattice: &'a SubgroupLattice) -> Result<Self> {
        let Family::Dihedral { m } = lattice.group().family() else {
            return Err(Error::domain(format!("{} is not a dihedral group", lattice.group().family())));
        };
        let (p, n) = odd_prime_power(m)
            .ok_or_else(|| Error::domain(format!("rotation order {m} is not a power of an odd prime")))?;
        let rotation = lattice.generated_by_labels(&["r"])?;
        Ok(TableDihedral { lattice, rotation, p, n })
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice
    }
}

impl SubgroupPoset for TableDihedral<'_> {
    fn subgroup_count(&self) -> usize {
        self.lattice.subgroup_count()
    }
    fn subgroup_order(&self, h: usize) -> usize {
        self.lattice.subgroup_order(h)
    }
    fn is_subgroup_of(&self, h: usize, k: usize) -> bool {
        self.lattice.leq(h, k)
    }
    fn meet(&self, h: usize, k: usize) -> usize {
        self.lattice.meet(h, k)
    }
    fn subgroups_below(&self, h: usize) -> Vec<usize> {
        self.lattice.subgroups_below(h)
    }
    fn subgroups_above(&self, h: usize) -> Vec<usize> {
        self.lattice.subgroups_above(h)
    }
    fn conjugator_count(&self) -> usize {
        self.lattice.conjugator_count()
    }
    fn conjugate_by(&self, gen: usize, h: usize) -> usize {
        self.lattice.conjugate_by(gen, h)
    }
}

impl DihedralFamily for TableDihedral<'_> {
    fn prime(&self) -> u32 {
        self.p
    }
    fn exponent(&self) -> u32 {
        self.n
    }
    fn is_rotation(&self, h: usize) -> bool {
        self.lattice.leq(h, self.rotation)
    }
}

/// `P(c_k) = k`, `P(d_k) = k + 1`.
pub fn rank_dihedral<D: DihedralFamily + ?Sized>(d: &D, quotient: &ArrowQuotient) -> Result<RankFunction> {
    RankFunction::from_fn(quotient, |h| match d.kind(h) {
        DihedralKind::C(k) => k as usize,
        DihedralKind::D(k) => k as usize + 1,
    })
}

/// Arcs `(0, 2m+1), (1, 2m), ..., (m, m+1)` with `m = n / 2`.
pub fn dihedral_rainbow_plan(n: u32) -> RainbowPlan {
    let m = (n / 2) as usize;
    let arcs = (0..=m).map(|i| Arc { j: i, k: 2 * m + 1 - i }).collect();
    RainbowPlan::new(arcs).expect("arcs are nested by construction")
}

pub fn build_partial_rainbow_dihedral<D: DihedralFamily + ?Sized>(
    d: &D,
    quotient: &ArrowQuotient,
) -> Result<PartialRainbow> {
    if d.exponent() < 1 {
        return Err(Error::domain("dihedral rainbow needs n >= 1"));
    }
    let rank = rank_dihedral(d, quotient)?;
    Ok(PartialRainbow::build(d, quotient, &rank, dihedral_rainbow_plan(d.exponent())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ArrowType {
    C,
    D,
    X,
}

pub fn arrow_type<D: DihedralFamily + ?Sized>(d: &D, src: usize, tgt: usize) -> Result<ArrowType> {
    match (d.kind(src), d.kind(tgt)) {
        (DihedralKind::C(_), DihedralKind::C(_)) => Ok(ArrowType::C),
        (DihedralKind::D(_), DihedralKind::D(_)) => Ok(ArrowType::D),
        (DihedralKind::C(_), DihedralKind::D(_)) => Ok(ArrowType::X),
        (DihedralKind::D(_), DihedralKind::C(_)) => Err(Error::InvalidArrow {
            src,
            tgt,
            reason: "a subgroup containing a reflection lies in no rotation subgroup",
        }),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ArrowTypeTally {
    pub c: usize,
    pub d: usize,
    pub x: usize,
}

impl ArrowTypeTally {
    pub fn total(&self) -> usize {
        self.c + self.d + self.x
    }
}

pub fn arrow_type_tally<D: DihedralFamily + ?Sized>(d: &D, arrows: &[(usize, usize)]) -> Result<ArrowTypeTally> {
    let mut t = ArrowTypeTally::default();
    for &(k, h) in arrows {
        match arrow_type(d, k, h)? {
            ArrowType::C => t.c += 1,
            ArrowType::D => t.d += 1,
            ArrowType::X => t.x += 1,
        }
    }
    Ok(t)
}

/// A conditional clause: how often its premise occurred and how often the
/// conclusion then held.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EqualityClause {
    pub premise_seen: u64,
    pub conclusion_held: u64,
}

impl EqualityClause {
    pub fn counterexamples(&self) -> u64 {
        self.premise_seen - self.conclusion_held
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeAudit {
    pub n: u32,
    pub systems: u64,
    /// False if the enumeration budget ran out.
    pub complete: bool,
    pub bound_cd: usize,
    pub bound_cx: usize,
    pub bound_dx: usize,
    pub bound_total: usize,
    pub max_cd: usize,
    pub max_cx: usize,
    pub max_dx: usize,
    pub max_total: usize,
    /// Hex class vectors of systems whose certificate breaks a bound.
    pub violations: Vec<String>,
    /// `C + D = n` implies `(c_0, c_n)` and `(d_0, d_n)` are in the system.
    pub equality_cd: EqualityClause,
    /// `C + X = n + 1` implies `(c_0, d_n)` is in the system.
    pub equality_cx: EqualityClause,
    /// `D + X = n + 1` implies `(d_0, d_n)` is in the system.
    pub equality_dx: EqualityClause,
}

impl BridgeAudit {
    pub fn bounds_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

fn kind_arrow_class<D: DihedralFamily + ?Sized>(
    d: &D,
    quotient: &ArrowQuotient,
    src: DihedralKind,
    tgt: DihedralKind,
) -> Option<usize> {
    let h = d.find_kind(tgt)?;
    let k = d
        .subgroups_below(h)
        .into_iter()
        .find(|&k| d.kind(k) == src)?;
    quotient.class_of_arrow(d, k, h)
}

/// Tallies the canonical certificate of every transfer system against the
/// three bridge bounds and the total bound.
pub fn bridge_bounds_audit<D: DihedralFamily + ?Sized>(d: &D, quotient: &ArrowQuotient, budget: u64) -> Result<BridgeAudit> {
    let n = d.exponent();
    let nn = n as usize;
    let c0cn = kind_arrow_class(d, quotient, DihedralKind::C(0), DihedralKind::C(n));
    let d0dn = kind_arrow_class(d, quotient, DihedralKind::D(0), DihedralKind::D(n));
    let c0dn = kind_arrow_class(d, quotient, DihedralKind::C(0), DihedralKind::D(n));
    let has = |t: &fixedbitset::FixedBitSet, c: Option<usize>| c.is_some_and(|c| t.contains(c));

    let mut audit = BridgeAudit {
        n,
        systems: 0,
        complete: false,
        bound_cd: nn,
        bound_cx: nn + 1,
        bound_dx: nn + 1,
        bound_total: 3 * nn / 2 + 1,
        max_cd: 0,
        max_cx: 0,
        max_dx: 0,
        max_total: 0,
        violations: Vec::new(),
        equality_cd: EqualityClause::default(),
        equality_cx: EqualityClause::default(),
        equality_dx: EqualityClause::default(),
    };
    let mut failure = None;
    let (visited, complete) = for_each_with_certificate(quotient, budget, |t, cert| {
        let tally = match arrow_type_tally(d, &cert.arrows) {
            Ok(x) => x,
            Err(e) => {
                failure.get_or_insert(e);
                return;
            }
        };
        let (cd, cx, dx, total) = (tally.c + tally.d, tally.c + tally.x, tally.d + tally.x, tally.total());
        audit.max_cd = audit.max_cd.max(cd);
        audit.max_cx = audit.max_cx.max(cx);
        audit.max_dx = audit.max_dx.max(dx);
        audit.max_total = audit.max_total.max(total);
        if cd > audit.bound_cd || cx > audit.bound_cx || dx > audit.bound_dx || total > audit.bound_total {
            audit.violations.push(t.to_hex());
        }
        let classes = t.classes();
        if cd == nn {
            audit.equality_cd.premise_seen += 1;
            if has(classes, c0cn) && has(classes, d0dn) {
                audit.equality_cd.conclusion_held += 1;
            }
        }
        if cx == nn + 1 {
            audit.equality_cx.premise_seen += 1;
            if has(classes, c0dn) {
                audit.equality_cx.conclusion_held += 1;
            }
        }
        if dx == nn + 1 {
            audit.equality_dx.premise_seen += 1;
            if has(classes, d0dn) {
                audit.equality_dx.conclusion_held += 1;
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    audit.systems = visited;
    audit.complete = complete;
    Ok(audit)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AnchoringAudit {
    pub systems: u64,
    /// Generating sets examined (more than `systems` when all minimal sets
    /// are enumerated).
    pub sets_checked: u64,
    pub complete: bool,
    /// Sets with two left-anchored arrows of one type.
    pub violations_single: u64,
    /// Sets containing `(d_0, d_k)` or `(c_0, d_k)` together with
    /// `(c_0, c_j)`, `j <= k`.
    pub violations_cross: u64,
}

impl AnchoringAudit {
    pub fn passes(&self) -> bool {
        self.violations_single == 0 && self.violations_cross == 0
    }
}

fn anchoring_violations<D: DihedralFamily + ?Sized>(d: &D, arrows: &[(usize, usize)]) -> (bool, bool) {
    let mut anchored = [0usize; 3];
    let mut c_targets = Vec::new();
    let mut other_targets = Vec::new();
    for &(k, h) in arrows {
        let (src, tgt) = (d.kind(k), d.kind(h));
        let slot = match (src, tgt) {
            (DihedralKind::C(0), DihedralKind::C(j)) => {
                c_targets.push(j);
                0
            }
            (DihedralKind::D(0), DihedralKind::D(j)) => {
                other_targets.push(j);
                1
            }
            (DihedralKind::C(0), DihedralKind::D(j)) => {
                other_targets.push(j);
                2
            }
            _ => continue,
        };
        anchored[slot] += 1;
    }
    let single = anchored.iter().any(|&c| c > 1);
    let cross = other_targets.iter().any(|&k| c_targets.iter().any(|&j| j <= k));
    (single, cross)
}

/// Checks the left-anchoring constraints on the canonical certificate of
/// every system; with `all_minimal_sets`, on every minimal generating set.
pub fn anchoring_audit<D: DihedralFamily + ?Sized>(
    d: &D,
    quotient: &ArrowQuotient,
    budget: u64,
    all_minimal_sets: bool,
) -> AnchoringAudit {
    let mut audit = AnchoringAudit::default();
    let record = |arrows: &[(usize, usize)], audit: &mut AnchoringAudit| {
        let (single, cross) = anchoring_violations(d, arrows);
        audit.sets_checked += 1;
        audit.violations_single += u64::from(single);
        audit.violations_cross += u64::from(cross);
    };
    let (visited, complete) = for_each_with_certificate(quotient, budget, |t, cert| {
        if !all_minimal_sets {
            record(&cert.arrows, &mut audit);
            return;
        }
        let members: Vec<usize> = t.classes().ones().collect();
        if cert.size == 0 {
            record(&[], &mut audit);
            return;
        }
        let mut combo: Vec<usize> = (0..cert.size).collect();
        loop {
            let mut seed = quotient.empty_set();
            combo.iter().for_each(|&i| seed.insert(members[i]));
            if &quotient.close(&seed) == t.classes() {
                let arrows: Vec<(usize, usize)> = combo.iter().map(|&i| quotient.representative(members[i])).collect();
                record(&arrows, &mut audit);
            }
            if !next_combination(&mut combo, members.len()) {
                break;
            }
        }
    });
    audit.systems = visited;
    audit.complete = complete;
    audit
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftEmbeddingCheck {
    pub pairs_checked: usize,
    /// Class comparability agrees in both directions.
    pub order_preserved: bool,
    pub class_sizes_match: bool,
    /// No image lies at rank 0.
    pub avoids_rank_zero: bool,
}

impl ShiftEmbeddingCheck {
    pub fn passes(&self) -> bool {
        self.order_preserved && self.class_sizes_match && self.avoids_rank_zero
    }
}

struct ClassView {
    kinds: Vec<DihedralKind>,
    sizes: Vec<usize>,
    /// `leq[a][b]`: some member of class `a` lies in some member of class `b`.
    leq: Vec<Vec<bool>>,
}

fn class_view<D: DihedralFamily + ?Sized>(d: &D) -> ClassView {
    let (class_of, classes) = d.conjugacy_partition();
    let kinds: Vec<DihedralKind> = classes.iter().map(|c| d.kind(c[0])).collect();
    let sizes = classes.iter().map(|c| c.len()).collect();
    let mut leq = vec![vec![false; classes.len()]; classes.len()];
    for (a, members) in classes.iter().enumerate() {
        for &k in d.subgroups_above(members[0]).iter() {
            leq[a][class_of[k]] = true;
        }
    }
    ClassView { kinds, sizes, leq }
}

/// Checks that `c_k -> c_{k+1}`, `d_k -> d_{k+1}` embeds the class poset of
/// `smaller` (exponent `n - 1`) into that of `larger` (exponent `n`).
pub fn dihedral_shift_embedding_check<A, B>(larger: &A, smaller: &B) -> Result<ShiftEmbeddingCheck>
where
    A: DihedralFamily + ?Sized,
    B: DihedralFamily + ?Sized,
{
    if larger.prime() != smaller.prime() || larger.exponent() != smaller.exponent() + 1 {
        return Err(Error::domain("shift embedding needs exponents n and n-1 over the same prime"));
    }
    let big = class_view(larger);
    let small = class_view(smaller);
    let shift = |k: DihedralKind| match k {
        DihedralKind::C(i) => DihedralKind::C(i + 1),
        DihedralKind::D(i) => DihedralKind::D(i + 1),
    };
    let image: Vec<usize> = small
        .kinds
        .iter()
        .map(|&k| {
            big.kinds
                .iter()
                .position(|&b| b == shift(k))
                .ok_or_else(|| Error::domain("missing image class"))
        })
        .collect::<Result<_>>()?;
    let mut pairs = 0;
    let mut order_preserved = true;
    for a in 0..small.kinds.len() {
        for b in 0..small.kinds.len() {
            pairs += 1;
            order_preserved &= small.leq[a][b] == big.leq[image[a]][image[b]];
        }
    }
    let class_sizes_match = (0..small.kinds.len()).all(|a| small.sizes[a] == big.sizes[image[a]]);
    let avoids_rank_zero = image.iter().all(|&i| big.kinds[i] != DihedralKind::C(0));
    Ok(ShiftEmbeddingCheck {
        pairs_checked: pairs,
        order_preserved,
        class_sizes_match,
        avoids_rank_zero,
    })
}
