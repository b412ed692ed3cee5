use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use sha2::{Digest, Sha256};

use super::{ArrowQuotient, TransferSystem};
use crate::error::{Error, Result};
use crate::groups::GroupElement;
use crate::lattice::SubgroupLattice;

/// An inclusion `src ≤ tgt` between subgroup indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub src: usize,
    pub tgt: usize,
}

impl Arrow {
    pub fn new(src: usize, tgt: usize) -> Self {
        Arrow { src, tgt }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.src, self.tgt)
    }
}

/// The five axioms, used to tag validation failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Inclusion,
    Reflexivity,
    Transitivity,
    Restriction,
    Conjugation,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Inclusion => "(i) inclusion",
            Axiom::Reflexivity => "(ii) reflexivity",
            Axiom::Transitivity => "(iii) transitivity",
            Axiom::Restriction => "(iv) restriction",
            Axiom::Conjugation => "(v) conjugation",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Valid,
    /// `witness` lists the arrows in the relation that trigger the failure,
    /// followed by the arrow that is missing.
    Violation { axiom: Axiom, witness: Vec<Arrow> },
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

/// All nontrivial arrows of a subgroup lattice in `(src, tgt)` order, with
/// their conjugation orbits.
#[derive(Clone, Debug)]
pub struct ArrowUniverse {
    arrows: Vec<Arrow>,
    index: HashMap<Arrow, usize>,
    class_of: Vec<usize>,
    class_members: Vec<Vec<usize>>,
    quotient: ArrowQuotient,
    digest: String,
}

impl ArrowUniverse {
    pub fn new(lattice: &SubgroupLattice) -> Self {
        let n = lattice.len();
        let mut arrows = Vec::new();
        for k in 0..n {
            for h in lattice.up_set(k).ones() {
                if h != k {
                    arrows.push(Arrow::new(k, h));
                }
            }
        }
        let index: HashMap<Arrow, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let quotient = ArrowQuotient::build(lattice);

        let mut class_of = vec![usize::MAX; arrows.len()];
        let mut class_members = vec![Vec::new(); quotient.len()];
        for (i, a) in arrows.iter().enumerate() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = quotient.class_of_arrow(lattice, a.src, a.tgt).expect("nontrivial arrow");
            let mut orbit = vec![i];
            class_of[i] = c;
            let mut j = 0;
            while j < orbit.len() {
                let b = arrows[orbit[j]];
                for &g in lattice.group().generators() {
                    let image = Arrow::new(lattice.conjugate(g, b.src), lattice.conjugate(g, b.tgt));
                    let t = index[&image];
                    if class_of[t] == usize::MAX {
                        class_of[t] = c;
                        orbit.push(t);
                    }
                }
                j += 1;
            }
            orbit.sort_unstable();
            class_members[c] = orbit;
        }

        let mut hasher = Sha256::new();
        hasher.update(lattice.group().family().to_string().as_bytes());
        for (a, c) in arrows.iter().zip(&class_of) {
            hasher.update((a.src as u64).to_le_bytes());
            hasher.update((a.tgt as u64).to_le_bytes());
            hasher.update((*c as u64).to_le_bytes());
        }
        let digest = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();

        ArrowUniverse {
            arrows,
            index,
            class_of,
            class_members,
            quotient,
            digest,
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> Arrow {
        self.arrows[i]
    }

    pub fn index_of(&self, a: Arrow) -> Option<usize> {
        self.index.get(&a).copied()
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Arrow indices in class `c`, ascending; the first is the representative.
    pub fn class_members(&self, c: usize) -> &[usize] {
        &self.class_members[c]
    }

    pub fn class_count(&self) -> usize {
        self.class_members.len()
    }

    pub fn quotient(&self) -> &ArrowQuotient {
        &self.quotient
    }

    /// Hex SHA-256 over the group spec and the indexed arrows with their
    /// classes; changes whenever the canonical ordering changes.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    /// Expands a class indicator into an arrow indicator.
    pub fn expand(&self, classes: &FixedBitSet) -> FixedBitSet {
        let mut rel = FixedBitSet::with_capacity(self.len());
        for c in classes.ones() {
            for &i in &self.class_members[c] {
                rel.insert(i);
            }
        }
        rel
    }

    /// Class indicator of a conjugation-invariant arrow set.
    pub fn collapse(&self, rel: &FixedBitSet) -> FixedBitSet {
        let mut classes = FixedBitSet::with_capacity(self.class_count());
        for i in rel.ones() {
            classes.insert(self.class_of[i]);
        }
        classes
    }

    fn checked_arrows(&self, lattice: &SubgroupLattice, seed: &[Arrow]) -> Result<Vec<usize>> {
        let n = lattice.len();
        let mut out = Vec::new();
        for a in seed {
            if a.src >= n || a.tgt >= n {
                return Err(Error::InvalidArrow {
                    src: a.src,
                    tgt: a.tgt,
                    reason: "subgroup index out of range",
                });
            }
            if !lattice.leq(a.src, a.tgt) {
                return Err(Error::InvalidArrow {
                    src: a.src,
                    tgt: a.tgt,
                    reason: "source is not contained in target",
                });
            }
            if a.src != a.tgt {
                out.push(self.index[a]);
            }
        }
        Ok(out)
    }

    /// Least transfer system containing `seed`, computed arrow by arrow.
    /// Reflexive pairs in the seed are ignored.
    pub fn closure(&self, lattice: &SubgroupLattice, seed: &[Arrow]) -> Result<TransferSystem> {
        let ids = self.checked_arrows(lattice, seed)?;
        let rel = self.close_arrows(lattice, &ids);
        Ok(TransferSystem::from_classes(self.collapse(&rel)))
    }

    /// Arrow-level closure: saturates under conjugation, restriction and
    /// composition without using the class quotient.
    pub fn close_arrows(&self, lattice: &SubgroupLattice, seed: &[usize]) -> FixedBitSet {
        let mut rel = FixedBitSet::with_capacity(self.len());
        let mut stack = Vec::new();
        let add = |i: usize, rel: &mut FixedBitSet, stack: &mut Vec<usize>| {
            if !rel.put(i) {
                stack.push(i);
            }
        };
        for &i in seed {
            add(i, &mut rel, &mut stack);
        }
        let gens: Vec<GroupElement> = lattice.group().generators().to_vec();
        while let Some(i) = stack.pop() {
            let a = self.arrows[i];
            for &g in &gens {
                let image = Arrow::new(lattice.conjugate(g, a.src), lattice.conjugate(g, a.tgt));
                add(self.index[&image], &mut rel, &mut stack);
            }
            for l in lattice.down_set(a.tgt).ones() {
                let m = lattice.meet(a.src, l);
                if m != l {
                    add(self.index[&Arrow::new(m, l)], &mut rel, &mut stack);
                }
            }
            let current: Vec<usize> = rel.ones().collect();
            for j in current {
                let b = self.arrows[j];
                if b.tgt == a.src {
                    add(self.index[&Arrow::new(b.src, a.tgt)], &mut rel, &mut stack);
                }
                if a.tgt == b.src {
                    add(self.index[&Arrow::new(a.src, b.tgt)], &mut rel, &mut stack);
                }
            }
        }
        rel
    }

    /// All comparable nontrivial pairs.
    pub fn complete_system(&self) -> TransferSystem {
        TransferSystem::from_classes(self.quotient.full_set())
    }

    /// Checks the axioms on an explicit relation, given without reflexive
    /// pairs (they are implicit). Reports the first failure found, testing
    /// inclusion, conjugation, restriction and transitivity in that order.
    pub fn is_transfer_system(&self, lattice: &SubgroupLattice, rel: &[Arrow]) -> Validation {
        let n = lattice.len();
        for a in rel {
            if a.src >= n || a.tgt >= n || !lattice.leq(a.src, a.tgt) {
                return Validation::Violation {
                    axiom: Axiom::Inclusion,
                    witness: vec![*a],
                };
            }
        }
        let mut member = FixedBitSet::with_capacity(self.len());
        for a in rel {
            if a.src != a.tgt {
                member.insert(self.index[a]);
            }
        }
        let has = |x: Arrow| x.src == x.tgt || member.contains(self.index[&x]);
        for i in member.ones() {
            let a = self.arrows[i];
            for g in lattice.group().elements() {
                let image = Arrow::new(lattice.conjugate(g, a.src), lattice.conjugate(g, a.tgt));
                if !has(image) {
                    return Validation::Violation {
                        axiom: Axiom::Conjugation,
                        witness: vec![a, image],
                    };
                }
            }
        }
        for i in member.ones() {
            let a = self.arrows[i];
            for l in lattice.down_set(a.tgt).ones() {
                let r = Arrow::new(lattice.meet(a.src, l), l);
                if !has(r) {
                    return Validation::Violation {
                        axiom: Axiom::Restriction,
                        witness: vec![a, r],
                    };
                }
            }
        }
        for i in member.ones() {
            let a = self.arrows[i];
            for j in member.ones() {
                let b = self.arrows[j];
                if a.tgt == b.src && !has(Arrow::new(a.src, b.tgt)) {
                    return Validation::Violation {
                        axiom: Axiom::Transitivity,
                        witness: vec![a, b, Arrow::new(a.src, b.tgt)],
                    };
                }
            }
        }
        Validation::Valid
    }

    /// Explicit arrows of a system, ascending.
    pub fn arrows_of(&self, system: &TransferSystem) -> Vec<Arrow> {
        self.expand(system.classes()).ones().map(|i| self.arrows[i]).collect()
    }
}
