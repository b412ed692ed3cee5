use std::cmp::Ordering;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A transfer system stored as its indicator over arrow classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransferSystem {
    classes: FixedBitSet,
}

impl TransferSystem {
    pub fn from_classes(classes: FixedBitSet) -> Self {
        TransferSystem { classes }
    }

    pub fn classes(&self) -> &FixedBitSet {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.count_ones(..)
    }

    pub fn contains_class(&self, c: usize) -> bool {
        self.classes.contains(c)
    }

    /// Hex digits of the class vector; class `4i` is the high bit of digit
    /// `i`, so string order on equal lengths is lectic order.
    pub fn to_hex(&self) -> String {
        class_vector_hex(&self.classes)
    }

    pub fn from_hex(hex: &str, class_count: usize) -> Result<Self> {
        let mut classes = FixedBitSet::with_capacity(class_count);
        if hex.len() != class_count.div_ceil(4) {
            return Err(Error::Parse {
                position: 0,
                message: format!("expected {} hex digits, got {}", class_count.div_ceil(4), hex.len()),
            });
        }
        for (i, ch) in hex.char_indices() {
            let d = ch.to_digit(16).ok_or_else(|| Error::Parse {
                position: i,
                message: format!("`{ch}` is not a hex digit"),
            })?;
            for b in 0..4 {
                if d >> (3 - b) & 1 == 1 {
                    let c = 4 * i + b;
                    if c >= class_count {
                        return Err(Error::Parse {
                            position: i,
                            message: "bit beyond the class count".into(),
                        });
                    }
                    classes.insert(c);
                }
            }
        }
        Ok(TransferSystem { classes })
    }

    /// Lectic comparison: the smaller set is the one lacking the least
    /// element on which the two differ.
    pub fn lectic_cmp(&self, other: &Self) -> Ordering {
        lectic_cmp(&self.classes, &other.classes)
    }
}

pub(crate) fn class_vector_hex(set: &FixedBitSet) -> String {
    let len = set.len();
    (0..len.div_ceil(4))
        .map(|i| {
            let d = (0..4).fold(0u32, |acc, b| {
                let c = 4 * i + b;
                acc << 1 | u32::from(c < len && set.contains(c))
            });
            char::from_digit(d, 16).unwrap()
        })
        .collect()
}

pub fn lectic_cmp(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    let mut diff = a.clone();
    diff.symmetric_difference_with(b);
    match diff.minimum() {
        None => Ordering::Equal,
        Some(i) if b.contains(i) => Ordering::Less,
        Some(_) => Ordering::Greater,
    }
}
