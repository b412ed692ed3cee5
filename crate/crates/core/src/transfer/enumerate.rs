use fixedbitset::FixedBitSet;

use super::{ArrowQuotient, TransferSystem};
use crate::error::Error;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Lectic stream of all transfer systems, via NextClosure over arrow-class
/// coordinates.
///
/// Yields at most `budget` systems; if more remain, the next item is
/// `Err(BudgetExhausted)` and the stream ends.
pub struct LecticStream<'q> {
    quotient: &'q ArrowQuotient,
    current: Option<FixedBitSet>,
    started: bool,
    yielded: u64,
    budget: u64,
    exhausted: bool,
}

impl<'q> LecticStream<'q> {
    pub fn new(quotient: &'q ArrowQuotient, budget: u64) -> Self {
        LecticStream {
            quotient,
            current: None,
            started: false,
            yielded: 0,
            budget,
            exhausted: false,
        }
    }

    pub fn yielded(&self) -> u64 {
        self.yielded
    }

    /// True once the stream stopped because of the budget.
    pub fn budget_exhausted(&self) -> bool {
        self.exhausted
    }

    fn successor(&self, a: &FixedBitSet) -> Option<FixedBitSet> {
        let q = self.quotient;
        let m = q.len();
        let mut prefix = a.clone();
        for i in (0..m).rev() {
            if a.contains(i) {
                prefix.set(i, false);
                continue;
            }
            // prefix = a ∩ {0..i-1}
            let b = q.close_with(&q.close(&prefix), i);
            if (0..i).all(|j| b.contains(j) == prefix.contains(j)) {
                return Some(b);
            }
        }
        None
    }
}

impl Iterator for LecticStream<'_> {
    type Item = Result<TransferSystem, Error>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.exhausted {
            return None;
        }
        let next = if !self.started {
            self.started = true;
            Some(self.quotient.close(&self.quotient.empty_set()))
        } else {
            self.successor(self.current.as_ref()?)
        };
        let next = next?;
        if self.yielded == self.budget {
            self.exhausted = true;
            return Some(Err(Error::BudgetExhausted { budget: self.budget }));
        }
        self.yielded += 1;
        self.current = Some(next.clone());
        Some(Ok(TransferSystem::from_classes(next)))
    }
}

/// Enumeration stopped by the budget; carries everything found before.
#[derive(Clone, Debug)]
pub struct PartialEnumeration {
    pub systems: Vec<TransferSystem>,
    pub budget: u64,
}

impl From<PartialEnumeration> for Error {
    fn from(p: PartialEnumeration) -> Self {
        Error::BudgetExhausted { budget: p.budget }
    }
}

/// Every transfer system exactly once, in lectic order.
pub fn enumerate_transfer_systems(
    quotient: &ArrowQuotient,
    budget: u64,
) -> Result<Vec<TransferSystem>, PartialEnumeration> {
    let mut systems = Vec::new();
    for item in LecticStream::new(quotient, budget) {
        match item {
            Ok(t) => systems.push(t),
            Err(_) => return Err(PartialEnumeration { systems, budget }),
        }
    }
    Ok(systems)
}

/// Number of transfer systems, or `None` if the budget runs out.
pub fn count_transfer_systems(quotient: &ArrowQuotient, budget: u64) -> Option<u64> {
    let mut stream = LecticStream::new(quotient, budget);
    for item in stream.by_ref() {
        item.ok()?;
    }
    Some(stream.yielded())
}
