//! Subgroup lattices: enumeration, inclusion order, conjugation action and
//! meet-irreducible subgroups.

mod poset;
mod report;

pub use poset::SubgroupPoset;
pub use report::{hasse_dot, DotOverlay, LatticeReport, MeetIrreducibleEntry};

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupElement};

pub const DEFAULT_MAX_SUBGROUPS: usize = 100_000;

/// A subgroup stored as a membership bitset over element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: FixedBitSet,
    order: usize,
    generators: Vec<GroupElement>,
}

impl Subgroup {
    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// A (not necessarily minimal) generating set.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.members.contains(g.index())
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.members.ones().map(|i| GroupElement(i as u32))
    }

    fn is_subset(&self, other: &Subgroup) -> bool {
        other.order % self.order == 0 && self.members.is_subset(&other.members)
    }
}

/// Least subgroup containing `seed`.
pub fn subgroup_generated_by(group: &FiniteGroup, seed: &[GroupElement]) -> Subgroup {
    let n = group.order();
    let mut members = FixedBitSet::with_capacity(n);
    members.insert(0);
    let mut stack = vec![0usize];
    let gens: Vec<usize> = seed.iter().map(|g| g.index()).filter(|&g| g != 0).collect();
    while let Some(x) = stack.pop() {
        for &g in &gens {
            let y = group.mul_idx(x, g);
            if !members.put(y) {
                stack.push(y);
            }
        }
    }
    let order = members.count_ones(..);
    let mut generators: Vec<GroupElement> = gens.into_iter().map(|g| GroupElement(g as u32)).collect();
    generators.sort_unstable();
    generators.dedup();
    Subgroup {
        members,
        order,
        generators,
    }
}

/// All subgroups of a finite group with inclusion, meet, join and the
/// conjugation action precomputed.
///
/// Subgroups are indexed in canonical order: by order, then by the sorted
/// list of member indices. Index 0 is the trivial subgroup and the last
/// index is the whole group.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group: FiniteGroup,
    subgroups: Vec<Subgroup>,
    index: HashMap<FixedBitSet, usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    /// `conj[g][h]`: index of `g H g^-1`.
    conj: Vec<Vec<u32>>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
}

impl SubgroupLattice {
    /// Enumerates all subgroups of `group`.
    ///
    /// Starts from the cyclic subgroups and closes under joins with cyclic
    /// subgroups; every subgroup is an iterated such join, so the result is
    /// complete.
    pub fn build(group: FiniteGroup, max_subgroups: usize) -> Result<Self> {
        let n = group.order();
        let mut found: Vec<Subgroup> = Vec::new();
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut push = |s: Subgroup, found: &mut Vec<Subgroup>| -> Result<bool> {
            if index.contains_key(&s.members) {
                return Ok(false);
            }
            if found.len() >= max_subgroups {
                return Err(Error::Capacity {
                    what: "subgroup count",
                    requested: found.len() + 1,
                    limit: max_subgroups,
                });
            }
            index.insert(s.members.clone(), found.len());
            found.push(s);
            Ok(true)
        };

        push(subgroup_generated_by(&group, &[]), &mut found)?;
        let mut cyclic_gens = Vec::new();
        for g in group.elements() {
            if push(subgroup_generated_by(&group, &[g]), &mut found)? {
                cyclic_gens.push(g);
            }
        }
        let mut i = 0;
        while i < found.len() {
            for &g in &cyclic_gens {
                if found[i].contains(g) {
                    continue;
                }
                let mut seed = found[i].generators.clone();
                seed.push(g);
                let joined = subgroup_generated_by(&group, &seed);
                push(joined, &mut found)?;
            }
            i += 1;
        }

        found.sort_by(|a, b| {
            a.order
                .cmp(&b.order)
                .then_with(|| a.members.ones().cmp(b.members.ones()))
        });
        let index: HashMap<FixedBitSet, usize> = found
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members.clone(), i))
            .collect();
        let count = found.len();

        let mut up = vec![FixedBitSet::with_capacity(count); count];
        let mut down = vec![FixedBitSet::with_capacity(count); count];
        for i in 0..count {
            for j in i..count {
                if found[i].is_subset(&found[j]) {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }

        let mut meet = vec![0u32; count * count];
        let mut join = vec![0u32; count * count];
        for i in 0..count {
            for j in 0..count {
                let mut lower = down[i].clone();
                lower.intersect_with(&down[j]);
                meet[i * count + j] = lower.maximum().expect("trivial subgroup is below all") as u32;
                let mut upper = up[i].clone();
                upper.intersect_with(&up[j]);
                join[i * count + j] = upper.minimum().expect("whole group is above all") as u32;
            }
        }

        let mut conj = Vec::with_capacity(n);
        for g in group.elements() {
            let ginv = group.inv(g);
            let row: Vec<u32> = found
                .iter()
                .map(|s| {
                    let mut image = FixedBitSet::with_capacity(n);
                    for x in s.members.ones() {
                        image.insert(group.mul(group.mul(g, GroupElement(x as u32)), ginv).index());
                    }
                    index[&image] as u32
                })
                .collect();
            conj.push(row);
        }

        let upper_covers = (0..count)
            .map(|i| {
                up[i]
                    .ones()
                    .filter(|&j| j != i)
                    .filter(|&j| {
                        let mut between = up[i].clone();
                        between.intersect_with(&down[j]);
                        between.count_ones(..) == 2
                    })
                    .collect()
            })
            .collect();

        let mut lattice = SubgroupLattice {
            group,
            subgroups: found,
            index,
            up,
            down,
            meet,
            join,
            conj,
            class_of: Vec::new(),
            classes: Vec::new(),
            upper_covers,
        };
        let (class_of, classes) = lattice.conjugacy_partition();
        lattice.class_of = class_of;
        lattice.classes = classes;
        Ok(lattice)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, h: usize) -> &Subgroup {
        &self.subgroups[h]
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// Index of the subgroup with exactly these members.
    pub fn index_of(&self, members: &FixedBitSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    /// Index of the subgroup generated by `seed`.
    pub fn generated(&self, seed: &[GroupElement]) -> usize {
        self.index[&subgroup_generated_by(&self.group, seed).members]
    }

    /// Index of the subgroup generated by elements given as labels.
    pub fn generated_by_labels(&self, labels: &[&str]) -> Result<usize> {
        let seed = labels
            .iter()
            .map(|l| self.group.parse_label(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.generated(&seed))
    }

    #[inline]
    pub fn leq(&self, h: usize, k: usize) -> bool {
        self.up[h].contains(k)
    }

    pub fn up_set(&self, h: usize) -> &FixedBitSet {
        &self.up[h]
    }

    pub fn down_set(&self, h: usize) -> &FixedBitSet {
        &self.down[h]
    }

    #[inline]
    pub fn meet(&self, h: usize, k: usize) -> usize {
        self.meet[h * self.len() + k] as usize
    }

    #[inline]
    pub fn join(&self, h: usize, k: usize) -> usize {
        self.join[h * self.len() + k] as usize
    }

    /// Index of `g H g^-1`.
    #[inline]
    pub fn conjugate(&self, g: GroupElement, h: usize) -> usize {
        self.conj[g.index()][h] as usize
    }

    pub fn is_normal(&self, h: usize) -> bool {
        self.conj.iter().all(|row| row[h] as usize == h)
    }

    pub fn class_of(&self, h: usize) -> usize {
        self.class_of[h]
    }

    /// Conjugacy classes of subgroups, ordered by least member; the least
    /// member is the class representative.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    /// Minimal overgroups of `h`.
    pub fn upper_covers(&self, h: usize) -> &[usize] {
        &self.upper_covers[h]
    }

    /// Proper subgroups whose only proper overgroup is the whole group.
    pub fn maximal_subgroups(&self) -> Vec<usize> {
        let top = self.top();
        (0..top).filter(|&h| self.upper_covers[h] == [top]).collect()
    }

    /// Proper subgroups with exactly one minimal overgroup.
    pub fn is_meet_irreducible(&self, h: usize) -> bool {
        h != self.top() && self.upper_covers[h].len() == 1
    }

    /// The other characterization: `h` is proper and is not the
    /// intersection of two strictly larger subgroups.
    pub fn is_meet_irreducible_by_intersections(&self, h: usize) -> bool {
        if h == self.top() {
            return false;
        }
        let strict: Vec<usize> = self.up[h].ones().filter(|&k| k != h).collect();
        !strict
            .iter()
            .enumerate()
            .any(|(i, &j)| strict[i + 1..].iter().any(|&k| self.meet(j, k) == h))
    }

    pub fn meet_irreducibles(&self) -> MeetIrreducibleReport {
        let mut classes = Vec::new();
        for (c, members) in self.classes.iter().enumerate() {
            let rep = members[0];
            if self.is_meet_irreducible(rep) {
                classes.push(FlaggedClass {
                    class: c,
                    representative: rep,
                    unique_cover: self.upper_covers[rep][0],
                });
            }
        }
        MeetIrreducibleReport {
            width: classes.len(),
            classes,
        }
    }

    /// Number of conjugacy classes of proper meet-irreducible subgroups.
    pub fn width(&self) -> usize {
        self.meet_irreducibles().width
    }
}

impl SubgroupPoset for SubgroupLattice {
    fn subgroup_count(&self) -> usize {
        self.len()
    }

    fn subgroup_order(&self, h: usize) -> usize {
        self.subgroups[h].order
    }

    fn is_subgroup_of(&self, h: usize, k: usize) -> bool {
        self.leq(h, k)
    }

    fn meet(&self, h: usize, k: usize) -> usize {
        SubgroupLattice::meet(self, h, k)
    }

    fn subgroups_below(&self, h: usize) -> Vec<usize> {
        self.down[h].ones().collect()
    }

    fn subgroups_above(&self, h: usize) -> Vec<usize> {
        self.up[h].ones().collect()
    }

    fn conjugator_count(&self) -> usize {
        self.group.generators().len()
    }

    fn conjugate_by(&self, gen: usize, h: usize) -> usize {
        self.conjugate(self.group.generators()[gen], h)
    }
}

/// One flagged conjugacy class of meet-irreducible subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlaggedClass {
    pub class: usize,
    pub representative: usize,
    /// The unique minimal overgroup of the representative.
    pub unique_cover: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeetIrreducibleReport {
    pub classes: Vec<FlaggedClass>,
    pub width: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::*;

    fn lattice(spec: &str) -> SubgroupLattice {
        let g = GroupSpec::parse(spec).unwrap().build(512).unwrap();
        SubgroupLattice::build(g, DEFAULT_MAX_SUBGROUPS).unwrap()
    }

    /// Brute force over all element subsets; only for tiny groups.
    fn all_subgroups_brute(g: &FiniteGroup) -> Vec<FixedBitSet> {
        let n = g.order();
        assert!(n <= 20);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let closed = (0..n).filter(|&x| mask >> x & 1 == 1).all(|x| {
                (0..n)
                    .filter(|&y| mask >> y & 1 == 1)
                    .all(|y| mask >> g.mul_idx(x, y) & 1 == 1)
            });
            if closed {
                let mut set = FixedBitSet::with_capacity(n);
                (0..n).filter(|&x| mask >> x & 1 == 1).for_each(|x| set.insert(x));
                out.push(set);
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for spec in ["C:12", "D:9", "D:4", "Q:3", "M:4", "SD:4", "AGL:3:1", "AGL:2:2", "C:1"] {
            let l = lattice(spec);
            let mut brute = all_subgroups_brute(l.group());
            brute.sort_by(|a, b| a.count_ones(..).cmp(&b.count_ones(..)).then_with(|| a.ones().cmp(b.ones())));
            let ours: Vec<FixedBitSet> = l.subgroups().iter().map(|s| s.members().clone()).collect();
            assert_eq!(ours, brute, "{spec}");
        }
    }

    #[test]
    fn cyclic_prime_square_is_a_chain() {
        let l = lattice("C:9");
        assert_eq!(l.len(), 3);
        assert!(l.leq(0, 1) && l.leq(1, 2));
        assert_eq!(l.maximal_subgroups(), vec![1]);
    }

    #[test]
    fn dihedral_nine_classes() {
        // classes c_0, c_1, c_2, d_0, d_1, d_2 with sizes 1, 1, 1, 9, 3, 1
        let l = lattice("D:9");
        let mut summary: Vec<(usize, usize)> = l
            .conjugacy_classes()
            .iter()
            .map(|c| (l.subgroup(c[0]).order(), c.len()))
            .collect();
        summary.sort();
        assert_eq!(summary, vec![(1, 1), (2, 9), (3, 1), (6, 3), (9, 1), (18, 1)]);
        // exactly one subgroup of order 9
        assert_eq!(l.subgroups().iter().filter(|s| s.order() == 9).count(), 1);
    }

    #[test]
    fn semidihedral_structure() {
        let l = lattice("SD:4");
        let index_two: Vec<usize> = (0..l.len()).filter(|&h| l.subgroup(h).order() == 8).collect();
        assert_eq!(index_two.len(), 3);
        assert_eq!(l.maximal_subgroups(), index_two);
        let a = l.generated_by_labels(&["a"]).unwrap();
        let md = l.generated_by_labels(&["a^2", "b"]).unwrap();
        let mq = l.generated_by_labels(&["a^2", "a b"]).unwrap();
        let a2 = l.generated_by_labels(&["a^2"]).unwrap();
        assert_eq!(l.subgroup(a).order(), 8);
        assert_eq!(l.subgroup(md).order(), 8);
        for (x, y) in [(a, md), (a, mq), (md, mq)] {
            assert_eq!(l.meet(x, y), a2);
        }
        // reflections in M_d form one class
        let b = l.generated_by_labels(&["b"]).unwrap();
        let reflections: Vec<usize> = (0..l.len())
            .filter(|&h| l.subgroup(h).order() == 2 && l.leq(h, md) && !l.leq(h, a))
            .collect();
        assert_eq!(reflections.len(), 4);
        assert!(reflections.iter().all(|&h| l.class_of(h) == l.class_of(b)));
        assert_eq!(l.generated(&[]), 0);
    }

    #[test]
    fn maximal_subgroups_examples() {
        let l = lattice("SD:5");
        let maxes = l.maximal_subgroups();
        assert_eq!(maxes.len(), 3);
        let classes: Vec<usize> = maxes.iter().map(|&h| l.class_of(h)).collect();
        assert!(classes[0] != classes[1] && classes[1] != classes[2] && classes[0] != classes[2]);
        let agl = lattice("AGL:2:3");
        assert!(agl.maximal_subgroups().iter().any(|&h| agl.subgroup(h).order() == 7));
        let m5 = lattice("M:5");
        assert_eq!(m5.subgroups().iter().filter(|s| s.order() == 16).count(), 3);
    }

    #[test]
    fn quaternion_order_four_subgroups_outside_a_are_cyclic() {
        let l = lattice("Q:4");
        let a = l.generated_by_labels(&["a"]).unwrap();
        for h in 0..l.len() {
            if l.subgroup(h).order() == 4 && !l.leq(h, a) {
                let g = l.group();
                assert!(l.subgroup(h).elements().any(|x| g.element_order(x) == 4));
            }
        }
    }

    #[test]
    fn lattice_laws() {
        for spec in ["D:9", "SD:4", "AGL:2:2"] {
            let l = lattice(spec);
            let n = l.len();
            for x in 0..n {
                assert_eq!(l.meet(x, x), x);
                assert_eq!(l.join(x, x), x);
                for y in 0..n {
                    assert_eq!(l.meet(x, y), l.meet(y, x));
                    assert_eq!(l.join(x, y), l.join(y, x));
                    assert_eq!(l.meet(x, l.join(x, y)), x);
                    assert_eq!(l.join(x, l.meet(x, y)), x);
                    let mut inter = l.subgroup(x).members().clone();
                    inter.intersect_with(l.subgroup(y).members());
                    assert_eq!(l.index_of(&inter), Some(l.meet(x, y)));
                    let mut seed: Vec<GroupElement> = l.subgroup(x).elements().collect();
                    seed.extend(l.subgroup(y).elements());
                    assert_eq!(l.generated(&seed), l.join(x, y));
                    for z in 0..n {
                        assert_eq!(l.meet(l.meet(x, y), z), l.meet(x, l.meet(y, z)));
                        assert_eq!(l.join(l.join(x, y), z), l.join(x, l.join(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_is_a_lattice_automorphism() {
        for spec in ["D:9", "SD:4", "AGL:2:2"] {
            let l = lattice(spec);
            let n = l.len();
            for g in l.group().elements() {
                for x in 0..n {
                    let gx = l.conjugate(g, x);
                    assert_eq!(l.subgroup(gx).order(), l.subgroup(x).order());
                    for y in 0..n {
                        let gy = l.conjugate(g, y);
                        assert_eq!(l.leq(x, y), l.leq(gx, gy));
                        assert_eq!(l.conjugate(g, l.meet(x, y)), l.meet(gx, gy));
                        assert_eq!(l.conjugate(g, l.join(x, y)), l.join(gx, gy));
                    }
                }
            }
            for h in 0..n {
                let singleton = l.conjugacy_classes()[l.class_of(h)].len() == 1;
                assert_eq!(l.is_normal(h), singleton);
            }
        }
    }

    #[test]
    fn meet_irreducible_characterizations_agree() {
        for spec in ["D:9", "SD:4", "SD:5", "M:4", "Q:4", "AGL:2:3", "AGL:3:2", "C:12", "D:8"] {
            let l = lattice(spec);
            for h in 0..l.len() {
                assert_eq!(l.is_meet_irreducible(h), l.is_meet_irreducible_by_intersections(h), "{spec} {h}");
            }
        }
    }

    /// Unique cover brute force, independent of the cover table.
    fn covers_brute(l: &SubgroupLattice, h: usize) -> Vec<usize> {
        (0..l.len())
            .filter(|&k| k != h && l.leq(h, k))
            .filter(|&k| !(0..l.len()).any(|m| m != h && m != k && l.leq(h, m) && l.leq(m, k)))
            .collect()
    }

    #[test]
    fn cyclic_widths_count_chain_members() {
        for (m, w) in [(2, 1), (4, 2), (8, 3), (27, 3), (32, 5)] {
            let l = lattice(&format!("C:{m}"));
            let brute = (0..l.len() - 1).filter(|&h| covers_brute(&l, h).len() == 1).count();
            assert_eq!(brute, w);
            assert_eq!(l.width(), w);
        }
    }

    #[test]
    fn width_examples() {
        assert_eq!(lattice("SD:4").width(), 6);
        assert_eq!(lattice("M:4").width(), 6);
        assert_eq!(lattice("D:8").width(), 7);
        assert_eq!(lattice("AGL:3:2").width(), 5);
        let agl = lattice("AGL:2:3");
        let report = agl.meet_irreducibles();
        assert_eq!(report.width, 3);
        let mut orders: Vec<usize> = report
            .classes
            .iter()
            .map(|c| agl.subgroup(c.representative).order())
            .collect();
        orders.sort();
        assert_eq!(orders, vec![4, 7, 8]);
        for c in &report.classes {
            assert_eq!(covers_brute(&agl, c.representative), vec![c.unique_cover]);
        }
    }

    #[test]
    fn subgroup_cap_is_enforced() {
        let g = GroupSpec::parse("D:9").unwrap().build(512).unwrap();
        assert!(matches!(SubgroupLattice::build(g, 5), Err(Error::Capacity { .. })));
    }
}
