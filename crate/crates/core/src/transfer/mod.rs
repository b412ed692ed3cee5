//! Transfer systems: closure, validation, lectic enumeration, minimal
//! generating sets and complexity.

mod enumerate;
mod mingen;
mod quotient;
mod system;
mod universe;

pub use enumerate::{
    count_transfer_systems, enumerate_transfer_systems, LecticStream, PartialEnumeration, DEFAULT_BUDGET,
};
pub use mingen::{
    complexity, for_each_with_certificate, indispensable_classes, minimal_generating_set, with_workers,
    Complexity, GenSetCertificate,
};
pub use quotient::ArrowQuotient;
pub use system::{lectic_cmp, TransferSystem};
pub use universe::{Arrow, ArrowUniverse, Axiom, Validation};

pub(crate) use mingen::next_combination;
