use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::lattice::SubgroupPoset;

/// The closure operator of transfer systems pushed down to conjugacy classes
/// of nontrivial arrows.
///
/// Every transfer system is a union of arrow classes, so closure can be run
/// on class indicator vectors: restriction of a class yields a fixed set of
/// classes, and composing two classes through a common middle subgroup yields
/// another fixed set.
#[derive(Clone, Debug)]
pub struct ArrowQuotient {
    reps: Vec<(usize, usize)>,
    key: HashMap<(usize, usize), usize>,
    subgroup_class_of: Vec<usize>,
    subgroup_classes: Vec<Vec<usize>>,
    restrict: Vec<Vec<u32>>,
    /// `out_comp[a]`: `(b, classes of a;b)` for every composable `b`.
    out_comp: Vec<Vec<(u32, Vec<u32>)>>,
    /// `in_comp[a]`: `(b, classes of b;a)`.
    in_comp: Vec<Vec<(u32, Vec<u32>)>>,
    /// `decomp[c]`: pairs `(a, b)` whose composite can land in `c`.
    decomp: Vec<Vec<(u32, u32)>>,
}

impl ArrowQuotient {
    pub fn build<P: SubgroupPoset + ?Sized>(poset: &P) -> Self {
        let (subgroup_class_of, subgroup_classes) = poset.conjugacy_partition();

        let mut keys = BTreeSet::new();
        for class in &subgroup_classes {
            let h = class[0];
            for k in poset.subgroups_below(h) {
                if k != h {
                    keys.insert(poset.canonical_arrow(k, h));
                }
            }
        }
        let reps: Vec<(usize, usize)> = keys.into_iter().collect();
        let key: HashMap<(usize, usize), usize> =
            reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let class = |k: usize, h: usize| key[&poset.canonical_arrow(k, h)] as u32;

        let restrict = reps
            .iter()
            .map(|&(k, h)| {
                let mut out = BTreeSet::new();
                for l in poset.subgroups_below(h) {
                    let m = poset.meet(k, l);
                    if m != l {
                        out.insert(class(m, l));
                    }
                }
                out.into_iter().collect()
            })
            .collect();

        let n = reps.len();
        let mut comp: HashMap<(u32, u32), BTreeSet<u32>> = HashMap::new();
        for members in &subgroup_classes {
            let mid = members[0];
            let ins: Vec<(usize, u32)> = poset
                .subgroups_below(mid)
                .into_iter()
                .filter(|&l| l != mid)
                .map(|l| (l, class(l, mid)))
                .collect();
            if ins.is_empty() {
                continue;
            }
            let outs: Vec<(usize, u32)> = poset
                .subgroups_above(mid)
                .into_iter()
                .filter(|&h| h != mid)
                .map(|h| (h, class(mid, h)))
                .collect();
            for &(l, a) in &ins {
                for &(h, b) in &outs {
                    comp.entry((a, b)).or_default().insert(class(l, h));
                }
            }
        }
        let mut out_comp = vec![Vec::new(); n];
        let mut in_comp = vec![Vec::new(); n];
        let mut decomp = vec![Vec::new(); n];
        let mut pairs: Vec<_> = comp.into_iter().collect();
        pairs.sort();
        for ((a, b), cs) in pairs {
            let cs: Vec<u32> = cs.into_iter().collect();
            for &c in &cs {
                decomp[c as usize].push((a, b));
            }
            out_comp[a as usize].push((b, cs.clone()));
            in_comp[b as usize].push((a, cs));
        }

        ArrowQuotient {
            reps,
            key,
            subgroup_class_of,
            subgroup_classes,
            restrict,
            out_comp,
            in_comp,
            decomp,
        }
    }

    /// Number of arrow classes.
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Canonical representative arrow of class `a`.
    pub fn representative(&self, a: usize) -> (usize, usize) {
        self.reps[a]
    }

    pub fn representatives(&self) -> &[(usize, usize)] {
        &self.reps
    }

    /// Class of a nontrivial arrow, or `None` when `k` is not strictly below `h`.
    pub fn class_of_arrow<P: SubgroupPoset + ?Sized>(&self, poset: &P, k: usize, h: usize) -> Option<usize> {
        if k == h || !poset.is_subgroup_of(k, h) {
            return None;
        }
        self.key.get(&poset.canonical_arrow(k, h)).copied()
    }

    pub fn subgroup_class_of(&self, h: usize) -> usize {
        self.subgroup_class_of[h]
    }

    pub fn subgroup_classes(&self) -> &[Vec<usize>] {
        &self.subgroup_classes
    }

    /// Subgroup classes of the source and target of arrow class `a`.
    pub fn endpoint_classes(&self, a: usize) -> (usize, usize) {
        let (k, h) = self.reps[a];
        (self.subgroup_class_of[k], self.subgroup_class_of[h])
    }

    /// Classes of all restrictions `(K ∩ L, L)` of an arrow `(K, H)` in class
    /// `a`, including `a` itself. Restriction is transitive, so this is the
    /// full restriction orbit.
    pub fn restriction_classes(&self, a: usize) -> &[u32] {
        &self.restrict[a]
    }

    /// Classes of the closed set `t` that are not a composite of two arrows
    /// of `t`.
    pub fn indecomposable_classes(&self, t: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for c in t.ones() {
            if !self.decomp[c]
                .iter()
                .any(|&(a, b)| t.contains(a as usize) && t.contains(b as usize))
            {
                out.insert(c);
            }
        }
        out
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// Least transfer system containing the classes in `seed`.
    pub fn close(&self, seed: &FixedBitSet) -> FixedBitSet {
        let mut set = seed.clone();
        let mut stack: Vec<usize> = seed.ones().collect();
        self.saturate(&mut set, &mut stack);
        set
    }

    /// Closure of `base ∪ {extra}` where `base` is already closed.
    pub fn close_with(&self, base: &FixedBitSet, extra: usize) -> FixedBitSet {
        let mut set = base.clone();
        if !set.put(extra) {
            let mut stack = vec![extra];
            self.saturate(&mut set, &mut stack);
        }
        set
    }

    fn saturate(&self, set: &mut FixedBitSet, stack: &mut Vec<usize>) {
        while let Some(a) = stack.pop() {
            for &c in &self.restrict[a] {
                if !set.put(c as usize) {
                    stack.push(c as usize);
                }
            }
            for list in [&self.out_comp[a], &self.in_comp[a]] {
                for (b, cs) in list {
                    if set.contains(*b as usize) {
                        for &c in cs {
                            if !set.put(c as usize) {
                                stack.push(c as usize);
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn is_closed(&self, set: &FixedBitSet) -> bool {
        &self.close(set) == set
    }
}
