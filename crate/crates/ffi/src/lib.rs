//! C ABI over `tsk`.
//!
//! Every fallible function returns a [`TskStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be read with [`tsk_last_error`]. Groups are opaque [`TskGroup`] handles,
//! created by [`tsk_group_new`] and released by [`tsk_group_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tsk::groups::{Family, GroupSpec};
use tsk::lattice::SubgroupLattice;
use tsk::rainbow::{
    build_partial_rainbow_dihedral, build_partial_rainbow_semidihedral, odd_prime_power, DihedralModel,
};
use tsk::transfer::{complexity, count_transfer_systems, ArrowQuotient, ArrowUniverse};
use tsk::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TskStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string was not valid UTF-8 or the group spec did not parse.
    Parse = 2,
    Domain = 3,
    Capacity = 4,
    /// The enumeration budget ran out; any value written is a lower bound.
    Budget = 5,
    InvalidArrow = 6,
    Io = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

/// A group together with its subgroup lattice and arrow universe.
pub struct TskGroup {
    spec: GroupSpec,
    lattice: SubgroupLattice,
    universe: ArrowUniverse,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TskStatus {
    match e {
        Error::Domain(_) => TskStatus::Domain,
        Error::Capacity { .. } => TskStatus::Capacity,
        Error::Parse { .. } => TskStatus::Parse,
        Error::BudgetExhausted { .. } => TskStatus::Budget,
        Error::InvalidArrow { .. } => TskStatus::InvalidArrow,
        Error::Io(_) => TskStatus::Io,
    }
}

fn fail(status: TskStatus, msg: impl Into<String>) -> TskStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<TskStatus, TskStatus>) -> TskStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) | Ok(Err(s)) => s,
        Err(_) => fail(TskStatus::Internal, "internal panic"),
    }
}

fn lift<T>(r: tsk::Result<T>) -> Result<T, TskStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TskStatus> {
    if s.is_null() {
        return Err(fail(TskStatus::NullPointer, "spec is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(TskStatus::Parse, "spec is not valid UTF-8"))
}

unsafe fn group<'a>(g: *const TskGroup) -> Result<&'a TskGroup, TskStatus> {
    g.as_ref().ok_or_else(|| fail(TskStatus::NullPointer, "group handle is null"))
}

fn out<T>(p: *mut T) -> Result<*mut T, TskStatus> {
    if p.is_null() {
        Err(fail(TskStatus::NullPointer, "output pointer is null"))
    } else {
        Ok(p)
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tsk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tsk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a group from a spec such as `D:9` or `AGL:2:3`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out_group` writable.
#[no_mangle]
pub unsafe extern "C" fn tsk_group_new(
    spec: *const c_char,
    max_order: usize,
    max_subgroups: usize,
    out_group: *mut *mut TskGroup,
) -> TskStatus {
    guard(|| {
        let dst = out(out_group)?;
        *dst = ptr::null_mut();
        let spec = lift(GroupSpec::parse(read_str(spec)?))?;
        let g = lift(spec.build(max_order))?;
        let lattice = lift(SubgroupLattice::build(g, max_subgroups))?;
        let universe = ArrowUniverse::new(&lattice);
        *dst = Box::into_raw(Box::new(TskGroup { spec, lattice, universe }));
        Ok(TskStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from [`tsk_group_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tsk_group_free(g: *mut TskGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out_order` writable.
#[no_mangle]
pub unsafe extern "C" fn tsk_group_order(g: *const TskGroup, out_order: *mut usize) -> TskStatus {
    guard(|| {
        *out(out_order)? = group(g)?.lattice.group().order();
        Ok(TskStatus::Ok)
    })
}

/// Number of subgroups and of their conjugacy classes.
///
/// # Safety
/// `g` must be a live handle; both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn tsk_group_subgroups(
    g: *const TskGroup,
    out_subgroups: *mut usize,
    out_classes: *mut usize,
) -> TskStatus {
    guard(|| {
        let g = group(g)?;
        *out(out_subgroups)? = g.lattice.len();
        *out(out_classes)? = g.lattice.conjugacy_classes().len();
        Ok(TskStatus::Ok)
    })
}

/// Number of conjugacy classes of meet-irreducible subgroups.
///
/// # Safety
/// `g` must be a live handle and `out_width` writable.
#[no_mangle]
pub unsafe extern "C" fn tsk_width(g: *const TskGroup, out_width: *mut usize) -> TskStatus {
    guard(|| {
        *out(out_width)? = group(g)?.lattice.width();
        Ok(TskStatus::Ok)
    })
}

/// Counts transfer systems. Returns `Budget` if more than `budget` exist.
///
/// # Safety
/// `g` must be a live handle and `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn tsk_count_systems(g: *const TskGroup, budget: u64, out_count: *mut u64) -> TskStatus {
    guard(|| {
        let dst = out(out_count)?;
        let g = group(g)?;
        match count_transfer_systems(g.universe.quotient(), budget) {
            Some(c) => {
                *dst = c;
                Ok(TskStatus::Ok)
            }
            None => Err(fail(TskStatus::Budget, format!("more than {budget} transfer systems"))),
        }
    })
}

/// Largest minimal generating size over all transfer systems. When the
/// budget runs out the value written is a lower bound and `Budget` is
/// returned.
///
/// # Safety
/// `g` must be a live handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn tsk_complexity(g: *const TskGroup, budget: u64, out_value: *mut usize) -> TskStatus {
    guard(|| {
        let dst = out(out_value)?;
        let g = group(g)?;
        let c = complexity(g.universe.quotient(), budget);
        *dst = c.value;
        if c.exact {
            Ok(TskStatus::Ok)
        } else {
            Err(fail(TskStatus::Budget, format!("budget of {budget} systems exhausted; {} is a lower bound", c.value)))
        }
    })
}

/// Certified lower bound on complexity from a partial rainbow. Supports
/// `D:p^n` with `p` an odd prime and `SD:n`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out_bound` writable.
#[no_mangle]
pub unsafe extern "C" fn tsk_rainbow_bound(
    spec: *const c_char,
    max_order: usize,
    max_subgroups: usize,
    out_bound: *mut usize,
) -> TskStatus {
    guard(|| {
        let dst = out(out_bound)?;
        let spec = lift(GroupSpec::parse(read_str(spec)?))?;
        let rainbow = match spec.family() {
            Family::Dihedral { m } => {
                let (p, n) = odd_prime_power(m)
                    .ok_or_else(|| fail(TskStatus::Domain, format!("{spec}: rotation order is not an odd prime power")))?;
                let model = lift(DihedralModel::new(p, n, max_subgroups))?;
                let q = ArrowQuotient::build(&model);
                lift(build_partial_rainbow_dihedral(&model, &q))?
            }
            Family::Semidihedral { .. } => {
                let lattice = lift(spec.build(max_order).and_then(|g| SubgroupLattice::build(g, max_subgroups)))?;
                let q = ArrowQuotient::build(&lattice);
                lift(build_partial_rainbow_semidihedral(&lattice, &q))?
            }
            other => return Err(fail(TskStatus::Domain, format!("no rainbow construction for {other}"))),
        };
        let bound = rainbow
            .certified_bound()
            .ok_or_else(|| fail(TskStatus::Internal, "rainbow failed verification"))?;
        *dst = bound;
        Ok(TskStatus::Ok)
    })
}

/// Writes the group spec in canonical form into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full length needed, excluding the NUL.
///
/// # Safety
/// `g` must be a live handle; `buf` must hold `len` bytes or be null.
#[no_mangle]
pub unsafe extern "C" fn tsk_group_spec(g: *const TskGroup, buf: *mut c_char, len: usize) -> usize {
    let Some(g) = g.as_ref() else { return 0 };
    let text = g.spec.to_string();
    if !buf.is_null() && len > 0 {
        let n = text.len().min(len - 1);
        ptr::copy_nonoverlapping(text.as_ptr().cast(), buf, n);
        *buf.add(n) = 0;
    }
    text.len()
}
