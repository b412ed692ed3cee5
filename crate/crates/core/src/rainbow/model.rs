use super::dihedral::DihedralFamily;
use crate::error::{Error, Result};
use crate::groups::is_prime;
use crate::lattice::SubgroupPoset;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sub {
    /// `<r^{p^{n-e}}>`
    C(u32),
    /// `<r^{p^{n-e}}, r^t s>` with `0 <= t < p^{n-e}`
    D(u32, u64),
}

/// Subgroup lattice of the dihedral group of order `2 p^n` described by
/// formulas instead of a multiplication table, for exponents past the order
/// cap.
///
/// Indices: `c_0..c_n` first, then `D(e, t)` by `e` and then `t`.
#[derive(Clone, Debug)]
pub struct DihedralModel {
    p: u64,
    n: u32,
    offsets: Vec<usize>,
    count: usize,
}

impl DihedralModel {
    pub fn new(p: u32, n: u32, max_subgroups: usize) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p as u64) {
            return Err(Error::domain(format!("{p} is not an odd prime")));
        }
        if n == 0 {
            return Err(Error::domain("exponent must be positive"));
        }
        let p64 = p as u64;
        let mut offsets = Vec::with_capacity(n as usize + 2);
        let mut next = n as usize + 1;
        for e in 0..=n {
            offsets.push(next);
            let width = p64
                .checked_pow(n - e)
                .and_then(|w| usize::try_from(w).ok())
                .ok_or_else(|| Error::domain("exponent too large"))?;
            next = next.checked_add(width).ok_or_else(|| Error::domain("exponent too large"))?;
            if next > max_subgroups {
                return Err(Error::Capacity {
                    what: "subgroup count",
                    requested: next,
                    limit: max_subgroups,
                });
            }
        }
        Ok(DihedralModel {
            p: p64,
            n,
            offsets,
            count: next,
        })
    }

    fn modulus(&self, e: u32) -> u64 {
        self.p.pow(self.n - e)
    }

    fn decode(&self, h: usize) -> Sub {
        if h <= self.n as usize {
            return Sub::C(h as u32);
        }
        let e = self.offsets.partition_point(|&o| o <= h) - 1;
        Sub::D(e as u32, (h - self.offsets[e]) as u64)
    }

    fn encode(&self, s: Sub) -> usize {
        match s {
            Sub::C(e) => e as usize,
            Sub::D(e, t) => self.offsets[e as usize] + t as usize,
        }
    }

    fn d(&self, e: u32, t: u64) -> usize {
        self.encode(Sub::D(e, t % self.modulus(e)))
    }
}

impl SubgroupPoset for DihedralModel {
    fn subgroup_count(&self) -> usize {
        self.count
    }

    fn subgroup_order(&self, h: usize) -> usize {
        match self.decode(h) {
            Sub::C(e) => self.p.pow(e) as usize,
            Sub::D(e, _) => 2 * self.p.pow(e) as usize,
        }
    }

    fn is_subgroup_of(&self, h: usize, k: usize) -> bool {
        match (self.decode(h), self.decode(k)) {
            (Sub::C(a), Sub::C(b)) | (Sub::C(a), Sub::D(b, _)) => a <= b,
            (Sub::D(..), Sub::C(_)) => false,
            (Sub::D(a, t), Sub::D(b, u)) => a <= b && t % self.modulus(b) == u,
        }
    }

    fn meet(&self, h: usize, k: usize) -> usize {
        match (self.decode(h), self.decode(k)) {
            (Sub::C(a), Sub::C(b)) | (Sub::C(a), Sub::D(b, _)) | (Sub::D(a, _), Sub::C(b)) => a.min(b) as usize,
            (Sub::D(a, t), Sub::D(b, u)) => {
                let (lo, tl, hi_mod) = if a <= b { (a, t, self.modulus(b)) } else { (b, u, self.modulus(a)) };
                if t % hi_mod == u % hi_mod {
                    self.d(lo, tl)
                } else {
                    lo as usize
                }
            }
        }
    }

    fn subgroups_below(&self, h: usize) -> Vec<usize> {
        match self.decode(h) {
            Sub::C(e) => (0..=e as usize).collect(),
            Sub::D(e, t) => {
                let mut out: Vec<usize> = (0..=e as usize).collect();
                let step = self.modulus(e);
                for f in 0..=e {
                    for j in 0..self.p.pow(e - f) {
                        out.push(self.d(f, t + j * step));
                    }
                }
                out.sort_unstable();
                out
            }
        }
    }

    fn subgroups_above(&self, h: usize) -> Vec<usize> {
        match self.decode(h) {
            Sub::C(e) => {
                let mut out: Vec<usize> = (e as usize..=self.n as usize).collect();
                out.extend(self.offsets[e as usize]..self.count);
                out
            }
            Sub::D(e, t) => (e..=self.n).map(|f| self.d(f, t)).collect(),
        }
    }

    fn conjugator_count(&self) -> usize {
        2
    }

    /// Conjugator 0 is the rotation `r`, conjugator 1 the reflection `s`.
    fn conjugate_by(&self, gen: usize, h: usize) -> usize {
        match self.decode(h) {
            Sub::C(_) => h,
            Sub::D(e, t) => {
                let m = self.modulus(e);
                if gen == 0 {
                    self.d(e, t + 2)
                } else {
                    self.d(e, m - t)
                }
            }
        }
    }

    fn canonical_arrow(&self, k: usize, h: usize) -> (usize, usize) {
        // translations t -> t + 2i reach every residue since p is odd
        match (self.decode(k), self.decode(h)) {
            (Sub::C(_), Sub::C(_)) => (k, h),
            (Sub::C(_), Sub::D(b, _)) => (k, self.d(b, 0)),
            (Sub::D(a, _), Sub::D(b, _)) => (self.d(a, 0), self.d(b, 0)),
            (Sub::D(..), Sub::C(_)) => (k, h),
        }
    }
}

impl DihedralFamily for DihedralModel {
    fn prime(&self) -> u32 {
        self.p as u32
    }

    fn exponent(&self) -> u32 {
        self.n
    }

    fn is_rotation(&self, h: usize) -> bool {
        h <= self.n as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupElement, GroupSpec};
    use crate::lattice::{SubgroupLattice, DEFAULT_MAX_SUBGROUPS};
    use crate::rainbow::TableDihedral;

    /// Model index -> table index, via explicit generators.
    fn correspondence(model: &DihedralModel, lattice: &SubgroupLattice) -> Vec<usize> {
        let g = lattice.group();
        let pn = model.p.pow(model.n);
        let r = g.parse_label("r").unwrap();
        let s = g.parse_label("s").unwrap();
        (0..model.subgroup_count())
            .map(|h| {
                let (e, refl) = match model.decode(h) {
                    Sub::C(e) => (e, None),
                    Sub::D(e, t) => (e, Some(t)),
                };
                let mut seed: Vec<GroupElement> = vec![g.pow(r, (pn / model.p.pow(e)) as u32)];
                if let Some(t) = refl {
                    seed.push(g.mul(g.pow(r, t as u32), s));
                }
                lattice.generated(&seed)
            })
            .collect()
    }

    #[test]
    fn model_matches_table() {
        for (p, n) in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2)] {
            let model = DihedralModel::new(p, n, 1 << 20).unwrap();
            let g = GroupSpec::parse(&format!("D:{}", p.pow(n))).unwrap().build(512).unwrap();
            let lattice = SubgroupLattice::build(g, DEFAULT_MAX_SUBGROUPS).unwrap();
            let map = correspondence(&model, &lattice);
            let mut sorted = map.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), lattice.len(), "bijection p={p} n={n}");
            let table = TableDihedral::new(&lattice).unwrap();
            for h in 0..model.subgroup_count() {
                assert_eq!(model.subgroup_order(h), lattice.subgroup_order(map[h]));
                assert_eq!(model.kind(h), table.kind(map[h]));
                for gen in 0..2 {
                    assert_eq!(map[model.conjugate_by(gen, h)], lattice.conjugate_by(gen, map[h]));
                }
                let below: Vec<usize> = model.subgroups_below(h).iter().map(|&x| map[x]).collect();
                let mut expect = lattice.subgroups_below(map[h]);
                let mut got = below.clone();
                got.sort_unstable();
                expect.sort_unstable();
                assert_eq!(got, expect);
                let mut above: Vec<usize> = model.subgroups_above(h).iter().map(|&x| map[x]).collect();
                above.sort_unstable();
                assert_eq!(above, lattice.subgroups_above(map[h]));
                for k in 0..model.subgroup_count() {
                    assert_eq!(model.is_subgroup_of(h, k), lattice.leq(map[h], map[k]));
                    assert_eq!(map[model.meet(h, k)], lattice.meet(map[h], map[k]));
                    if model.is_subgroup_of(h, k) {
                        let (a, b) = model.canonical_arrow(h, k);
                        assert_eq!(
                            lattice.canonical_arrow(map[a], map[b]),
                            lattice.canonical_arrow(map[h], map[k])
                        );
                        // also the least arrow in the model's own index order
                        assert_eq!(
                            SubgroupPosetDefault(&model).canonical_arrow(h, k),
                            (a, b)
                        );
                    }
                }
            }
        }
    }

    /// Forces the trait's generic orbit search.
    struct SubgroupPosetDefault<'a>(&'a DihedralModel);

    impl SubgroupPoset for SubgroupPosetDefault<'_> {
        fn subgroup_count(&self) -> usize {
            self.0.subgroup_count()
        }
        fn subgroup_order(&self, h: usize) -> usize {
            self.0.subgroup_order(h)
        }
        fn is_subgroup_of(&self, h: usize, k: usize) -> bool {
            self.0.is_subgroup_of(h, k)
        }
        fn meet(&self, h: usize, k: usize) -> usize {
            self.0.meet(h, k)
        }
        fn subgroups_below(&self, h: usize) -> Vec<usize> {
            self.0.subgroups_below(h)
        }
        fn subgroups_above(&self, h: usize) -> Vec<usize> {
            self.0.subgroups_above(h)
        }
        fn conjugator_count(&self) -> usize {
            2
        }
        fn conjugate_by(&self, gen: usize, h: usize) -> usize {
            self.0.conjugate_by(gen, h)
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DihedralModel::new(2, 3, 1000).is_err());
        assert!(DihedralModel::new(9, 1, 1000).is_err());
        assert!(DihedralModel::new(3, 0, 1000).is_err());
        assert!(matches!(DihedralModel::new(3, 10, 1000), Err(Error::Capacity { .. })));
    }

    #[test]
    fn subgroup_counts() {
        // n + 1 rotation subgroups and (p^{n+1} - 1)/(p - 1) reflection-type ones
        let m = DihedralModel::new(3, 10, 1 << 20).unwrap();
        assert_eq!(m.subgroup_count(), 11 + (3usize.pow(11) - 1) / 2);
    }
}
