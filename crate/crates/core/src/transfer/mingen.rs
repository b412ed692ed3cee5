use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::system::class_vector_hex;
use super::{ArrowQuotient, LecticStream, TransferSystem};
use crate::error::{Error, Result};

/// A minimal generating set of a transfer system, one representative arrow
/// per generating class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSetCertificate {
    /// Representative arrows `(src, tgt)` of the generating classes, ascending.
    pub arrows: Vec<(usize, usize)>,
    pub size: usize,
    /// Hex class vector of the generated system.
    pub target: String,
    #[serde(skip)]
    pub classes: Vec<usize>,
}

impl GenSetCertificate {
    fn new(quotient: &ArrowQuotient, target: &FixedBitSet, mut classes: Vec<usize>) -> Self {
        classes.sort_unstable();
        let mut arrows: Vec<(usize, usize)> = classes.iter().map(|&c| quotient.representative(c)).collect();
        arrows.sort_unstable();
        GenSetCertificate {
            size: classes.len(),
            arrows,
            target: class_vector_hex(target),
            classes,
        }
    }

    /// Re-checks that the arrows generate the target and that dropping any
    /// one of them does not.
    pub fn verify<P: crate::lattice::SubgroupPoset + ?Sized>(&self, poset: &P, quotient: &ArrowQuotient) -> bool {
        let mut classes = Vec::new();
        for &(k, h) in &self.arrows {
            match quotient.class_of_arrow(poset, k, h) {
                Some(c) => classes.push(c),
                None => return false,
            }
        }
        let seed = |skip: Option<usize>| {
            let mut s = quotient.empty_set();
            for (i, &c) in classes.iter().enumerate() {
                if Some(i) != skip {
                    s.insert(c);
                }
            }
            class_vector_hex(&quotient.close(&s))
        };
        self.size == self.arrows.len()
            && seed(None) == self.target
            && (0..classes.len()).all(|i| seed(Some(i)) != self.target)
    }
}

/// Classes `a` of `t` with `a ∉ closure(t \ {a})`. Every generating set of
/// `t` meets each of their classes.
pub fn indispensable_classes(quotient: &ArrowQuotient, t: &FixedBitSet) -> Vec<usize> {
    t.ones()
        .filter(|&a| {
            let mut rest = t.clone();
            rest.set(a, false);
            !quotient.close(&rest).contains(a)
        })
        .collect()
}

/// Size and certificate of a smallest generating set of the closed set `t`;
/// among all smallest sets, the one whose sorted class list is
/// lexicographically least.
///
/// Closure is composition applied to restriction, so `S` generates `t`
/// exactly when every indecomposable class of `t` is a restriction of some
/// class of `S`. That makes this a set-cover problem, solved by branching on
/// the element with the fewest covering candidates.
pub fn minimal_generating_set(quotient: &ArrowQuotient, t: &FixedBitSet) -> GenSetCertificate {
    let targets = quotient.indecomposable_classes(t);
    let candidates: Vec<(usize, FixedBitSet)> = t
        .ones()
        .map(|s| {
            let mut cover = quotient.empty_set();
            for &c in quotient.restriction_classes(s) {
                if targets.contains(c as usize) {
                    cover.insert(c as usize);
                }
            }
            (s, cover)
        })
        .filter(|(_, cover)| !cover.is_clear())
        .collect();
    let mut k = 0;
    while !coverable(&targets, &candidates, k) {
        k += 1;
    }
    let mut chosen = Vec::with_capacity(k);
    let mut uncovered = targets;
    let mut from = 0;
    while !uncovered.is_clear() {
        let left = k - chosen.len() - 1;
        let i = (from..candidates.len())
            .find(|&i| {
                let mut rest = uncovered.clone();
                rest.difference_with(&candidates[i].1);
                coverable(&rest, &candidates[i + 1..], left)
            })
            .expect("a cover of the computed size exists");
        chosen.push(candidates[i].0);
        uncovered.difference_with(&candidates[i].1);
        from = i + 1;
    }
    GenSetCertificate::new(quotient, t, chosen)
}

/// Whether at most `k` of the candidate sets cover `uncovered`.
fn coverable(uncovered: &FixedBitSet, candidates: &[(usize, FixedBitSet)], k: usize) -> bool {
    let need = uncovered.count_ones(..);
    if need == 0 {
        return true;
    }
    if k == 0 {
        return false;
    }
    let best_gain = candidates
        .iter()
        .map(|(_, c)| c.intersection_count(uncovered))
        .max()
        .unwrap_or(0);
    if best_gain * k < need {
        return false;
    }
    let mut pivot = None;
    for e in uncovered.ones() {
        let n = candidates.iter().filter(|(_, c)| c.contains(e)).count();
        if n == 0 {
            return false;
        }
        if pivot.is_none_or(|(m, _)| n < m) {
            pivot = Some((n, e));
        }
    }
    let (_, e) = pivot.expect("uncovered is nonempty");
    let mut options: Vec<FixedBitSet> = candidates
        .iter()
        .filter(|(_, c)| c.contains(e))
        .map(|(_, c)| {
            let mut g = c.clone();
            g.intersect_with(uncovered);
            g
        })
        .collect();
    options.sort_by_key(|g| std::cmp::Reverse(g.count_ones(..)));
    options.dedup();
    for i in 0..options.len() {
        // a branch dominated by an earlier, larger one cannot do better
        if options[..i].iter().any(|o| options[i].is_subset(o)) {
            continue;
        }
        let mut rest = uncovered.clone();
        rest.difference_with(&options[i]);
        if coverable(&rest, candidates, k - 1) {
            return true;
        }
    }
    false
}

/// Advances `combo` to the next k-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complexity {
    /// Largest minimal generating size seen.
    pub value: usize,
    /// Lectically least system attaining `value`.
    pub witness: TransferSystem,
    pub certificate: GenSetCertificate,
    /// False if the budget ran out; `value` is then only a lower bound.
    pub exact: bool,
    pub systems_visited: u64,
}

const CHUNK: usize = 4096;

/// Runs `f` on a rayon pool with the given number of threads (0 means the
/// global default).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Streams systems in lectic order and hands each chunk, with the minimal
/// generating certificates computed in parallel, to `sink` in order.
pub fn for_each_with_certificate(
    quotient: &ArrowQuotient,
    budget: u64,
    mut sink: impl FnMut(&TransferSystem, &GenSetCertificate),
) -> (u64, bool) {
    let mut stream = LecticStream::new(quotient, budget);
    let mut visited = 0;
    loop {
        let chunk: Vec<TransferSystem> = stream.by_ref().take(CHUNK).map_while(|r| r.ok()).collect();
        if chunk.is_empty() {
            break;
        }
        visited += chunk.len() as u64;
        let certs: Vec<GenSetCertificate> = chunk
            .par_iter()
            .map(|t| minimal_generating_set(quotient, t.classes()))
            .collect();
        for (t, c) in chunk.iter().zip(&certs) {
            sink(t, c);
        }
        if chunk.len() < CHUNK {
            break;
        }
    }
    (visited, !stream.budget_exhausted())
}

/// Maximum minimal generating size over all transfer systems.
pub fn complexity(quotient: &ArrowQuotient, budget: u64) -> Complexity {
    let mut best: Option<(TransferSystem, GenSetCertificate)> = None;
    let (visited, exact) = for_each_with_certificate(quotient, budget, |t, c| {
        if best.as_ref().is_none_or(|(_, b)| c.size > b.size) {
            best = Some((t.clone(), c.clone()));
        }
    });
    let (witness, certificate) = best.expect("the trivial system always exists");
    Complexity {
        value: certificate.size,
        witness,
        certificate,
        exact,
        systems_visited: visited,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;
    use crate::lattice::SubgroupLattice;
    use crate::transfer::enumerate_transfer_systems;

    /// Lex-first generating subset of least size, by plain search.
    fn subset_search(q: &ArrowQuotient, t: &FixedBitSet) -> Vec<usize> {
        let classes: Vec<usize> = t.ones().collect();
        for k in 0..=classes.len() {
            let mut combo: Vec<usize> = (0..k).collect();
            loop {
                let mut s = q.empty_set();
                combo.iter().for_each(|&i| s.insert(classes[i]));
                if &q.close(&s) == t {
                    return combo.iter().map(|&i| classes[i]).collect();
                }
                if k == 0 || !next_combination(&mut combo, classes.len()) {
                    break;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn set_cover_matches_subset_search() {
        for spec in ["D:9", "C:12", "AGL:2:2", "Q:4", "D:5", "C:2"] {
            let g = GroupSpec::parse(spec).unwrap().build(512).unwrap();
            let l = SubgroupLattice::build(g, 1000).unwrap();
            let q = ArrowQuotient::build(&l);
            for t in enumerate_transfer_systems(&q, 100_000).unwrap() {
                let cert = minimal_generating_set(&q, t.classes());
                assert_eq!(cert.classes, subset_search(&q, t.classes()), "{spec} {}", t.to_hex());
            }
        }
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
