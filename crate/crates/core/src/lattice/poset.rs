/// Read-only view of a subgroup lattice together with a conjugation action
/// given by a generating set of conjugators.
///
/// [`SubgroupLattice`](super::SubgroupLattice) implements it from an explicit
/// multiplication table; structural models of large families implement it
/// without one.
pub trait SubgroupPoset: Sync {
    fn subgroup_count(&self) -> usize;

    fn subgroup_order(&self, h: usize) -> usize;

    fn is_subgroup_of(&self, h: usize, k: usize) -> bool;

    /// Index of `h ∩ k`.
    fn meet(&self, h: usize, k: usize) -> usize;

    /// Subgroups contained in `h`, ascending, `h` included.
    fn subgroups_below(&self, h: usize) -> Vec<usize>;

    /// Subgroups containing `h`, ascending, `h` included.
    fn subgroups_above(&self, h: usize) -> Vec<usize>;

    /// Number of conjugators in the generating set of the action.
    fn conjugator_count(&self) -> usize;

    /// Image of subgroup `h` under the `gen`-th conjugator.
    fn conjugate_by(&self, gen: usize, h: usize) -> usize;

    /// Least arrow `(k, h)` in the orbit of `(k, h)` under simultaneous
    /// conjugation, comparing source first.
    fn canonical_arrow(&self, k: usize, h: usize) -> (usize, usize) {
        let mut seen = std::collections::HashSet::new();
        seen.insert((k, h));
        let mut stack = vec![(k, h)];
        let mut best = (k, h);
        while let Some((a, b)) = stack.pop() {
            for g in 0..self.conjugator_count() {
                let next = (self.conjugate_by(g, a), self.conjugate_by(g, b));
                if seen.insert(next) {
                    best = best.min(next);
                    stack.push(next);
                }
            }
        }
        best
    }

    /// Partition into conjugacy classes: `(class_of, classes)`, with classes
    /// ordered by least member and members ascending.
    fn conjugacy_partition(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let n = self.subgroup_count();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let h = orbit[i];
                for g in 0..self.conjugator_count() {
                    let k = self.conjugate_by(g, h);
                    if class_of[k] == usize::MAX {
                        class_of[k] = id;
                        orbit.push(k);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        (class_of, classes)
    }
}
