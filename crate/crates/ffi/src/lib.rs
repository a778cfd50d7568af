//! C ABI over the `twosq` library.
//!
//! Tables and colorings are opaque handles created by `*_new`/`*_load`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`TwosqStatus`]; on failure a message is available from
//! [`twosq_last_error`] until the next call on the same thread. Pattern
//! specs and witnesses cross the boundary as JSON strings, and strings
//! returned by the library must be released with [`twosq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twosq::colorings::Coloring;
use twosq::ground::{is_member, GroundTable};
use twosq::patterns::{PatternSpec, Witness};
use twosq::search::{find_witness, verify_witness, SearchBounds, SearchMode};
use twosq::semigroup::{power, star};
use twosq::Error;

/// Result codes; the numeric values match the command-line exit codes where they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwosqStatus {
    Ok = 0,
    NotFound = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Corrupt = 4,
    NullPointer = 5,
    Internal = 6,
}

/// Opaque ground table.
pub struct TwosqTable(GroundTable);

/// Opaque coloring.
pub struct TwosqColoring(Coloring);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> TwosqStatus {
    match e {
        e if e.is_out_of_range() => TwosqStatus::OutOfRange,
        Error::CorruptCache(_)
        | Error::PredicateMismatch { .. }
        | Error::MalformedWitness(_)
        | Error::Schema(_)
        | Error::Io { .. } => TwosqStatus::Corrupt,
        Error::NotMember(_) => TwosqStatus::NotFound,
        _ => TwosqStatus::InvalidArgument,
    }
}

/// Run `f`, turning errors and panics into a status plus a stored message.
fn guard(f: impl FnOnce() -> Result<TwosqStatus, Fail>) -> TwosqStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TwosqStatus::Internal
        }
    }
}

struct Fail(TwosqStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TwosqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Fail(TwosqStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or NULL. Owned by the library.
#[no_mangle]
pub extern "C" fn twosq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn twosq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[no_mangle]
pub extern "C" fn twosq_is_member(n: u64) -> bool {
    is_member(n)
}

/// Sieve a table of all sums of two squares below `limit`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_table_new(limit: u64, out: *mut *mut TwosqTable) -> TwosqStatus {
    guard(|| {
        let t = GroundTable::build(limit)?;
        unsafe { write_out(out, Box::into_raw(Box::new(TwosqTable(t))))? };
        Ok(TwosqStatus::Ok)
    })
}

/// Load a table from a binary cache file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_table_load(
    path: *const c_char,
    out: *mut *mut TwosqTable,
) -> TwosqStatus {
    guard(|| {
        let path = unsafe { read_str(path, "path")? };
        let t = GroundTable::load_cache(path)?;
        unsafe { write_out(out, Box::into_raw(Box::new(TwosqTable(t))))? };
        Ok(TwosqStatus::Ok)
    })
}

/// # Safety
/// `table` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn twosq_table_save(
    table: *const TwosqTable,
    path: *const c_char,
) -> TwosqStatus {
    guard(|| {
        let t = unsafe { deref(table, "table")? };
        let path = unsafe { read_str(path, "path")? };
        t.0.save_cache(path)?;
        Ok(TwosqStatus::Ok)
    })
}

/// # Safety
/// `table` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn twosq_table_free(table: *mut TwosqTable) {
    if !table.is_null() {
        drop(unsafe { Box::from_raw(table) });
    }
}

/// Table limit, or 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn twosq_table_limit(table: *const TwosqTable) -> u64 {
    unsafe { table.as_ref() }.map_or(0, |t| t.0.limit())
}

/// Number of members below the limit, or 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn twosq_table_len(table: *const TwosqTable) -> u64 {
    unsafe { table.as_ref() }.map_or(0, |t| t.0.len())
}

unsafe fn table_query(
    table: *const TwosqTable,
    out: *mut u64,
    f: impl FnOnce(&GroundTable) -> Result<u64, Error>,
) -> TwosqStatus {
    guard(|| {
        let t = &unsafe { deref(table, "table")? }.0;
        let v = f(t)?;
        unsafe { write_out(out, v)? };
        Ok(TwosqStatus::Ok)
    })
}

/// `s_n`.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_element(
    table: *const TwosqTable,
    n: u64,
    out: *mut u64,
) -> TwosqStatus {
    unsafe { table_query(table, out, |t| t.element(n)) }
}

/// Rank of the member `s`.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_rank(
    table: *const TwosqTable,
    s: u64,
    out: *mut u64,
) -> TwosqStatus {
    unsafe { table_query(table, out, |t| t.rank(s)) }
}

/// Number of members below `x`.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_count_below(
    table: *const TwosqTable,
    x: u64,
    out: *mut u64,
) -> TwosqStatus {
    unsafe { table_query(table, out, |t| t.count_below(x)) }
}

/// `m *_f n`.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_star(
    table: *const TwosqTable,
    m: u64,
    n: u64,
    out: *mut u64,
) -> TwosqStatus {
    unsafe { table_query(table, out, |t| star(t, m, n)) }
}

/// `x` to the `n`-th `*_f`-power.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_power(
    table: *const TwosqTable,
    x: u64,
    n: u64,
    out: *mut u64,
) -> TwosqStatus {
    unsafe { table_query(table, out, |t| power(t, x, n)) }
}

unsafe fn box_coloring(
    c: Result<Coloring, Error>,
    out: *mut *mut TwosqColoring,
) -> Result<TwosqStatus, Fail> {
    let c = c?;
    unsafe { write_out(out, Box::into_raw(Box::new(TwosqColoring(c))))? };
    Ok(TwosqStatus::Ok)
}

/// Seeded random r-coloring of `0..bound`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_coloring_random(
    seed: u64,
    r: u32,
    bound: u64,
    out: *mut *mut TwosqColoring,
) -> TwosqStatus {
    guard(|| unsafe { box_coloring(Coloring::random(seed, r, bound), out) })
}

/// `n ↦ (n mod q) mod r + 1` on `0..bound`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_coloring_periodic(
    q: u32,
    r: u32,
    bound: u64,
    out: *mut *mut TwosqColoring,
) -> TwosqStatus {
    guard(|| unsafe { box_coloring(Coloring::periodic_mod(q, r, bound), out) })
}

/// Parse a coloring document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_coloring_from_json(
    json: *const c_char,
    out: *mut *mut TwosqColoring,
) -> TwosqStatus {
    guard(|| {
        let text = unsafe { read_str(json, "json")? };
        unsafe { box_coloring(Coloring::from_json(text), out) }
    })
}

/// # Safety
/// `coloring` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_coloring_color_of(
    coloring: *const TwosqColoring,
    n: u64,
    out: *mut u32,
) -> TwosqStatus {
    guard(|| {
        let c = unsafe { deref(coloring, "coloring")? };
        let v = c.0.color_of(n)?;
        unsafe { write_out(out, v)? };
        Ok(TwosqStatus::Ok)
    })
}

/// # Safety
/// `coloring` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn twosq_coloring_free(coloring: *mut TwosqColoring) {
    if !coloring.is_null() {
        drop(unsafe { Box::from_raw(coloring) });
    }
}

/// Search `coloring` for a witness of the pattern described by `spec_json`.
///
/// On `TWOSQ_STATUS_OK`, `*witness_json` receives a witness document to be
/// released with [`twosq_string_free`]. `TWOSQ_STATUS_NOT_FOUND` means the
/// search was exhausted or ran out of budget; `*witness_json` is then NULL.
/// A `node_budget` of `UINT64_MAX` is unlimited.
///
/// # Safety
/// Handles must be live, `spec_json` NUL-terminated, `witness_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_search(
    table: *const TwosqTable,
    coloring: *const TwosqColoring,
    spec_json: *const c_char,
    generator_max: u64,
    value_bound: u64,
    node_budget: u64,
    fast: bool,
    witness_json: *mut *mut c_char,
) -> TwosqStatus {
    guard(|| {
        let t = unsafe { deref(table, "table")? };
        let c = unsafe { deref(coloring, "coloring")? };
        let spec: PatternSpec = serde_json::from_str(unsafe { read_str(spec_json, "spec")? })
            .map_err(|e| Fail(TwosqStatus::InvalidArgument, format!("spec: {e}")))?;
        unsafe { write_out(witness_json, ptr::null_mut())? };
        let bounds = SearchBounds {
            generator_max,
            value_bound,
            node_budget,
            include_one: false,
        };
        let mode = if fast {
            SearchMode::Fast
        } else {
            SearchMode::Det
        };
        let report = find_witness(&t.0, &c.0, &spec, &bounds, mode)?;
        match report.witness() {
            Some(w) => {
                unsafe { witness_json.write(into_c_string(w.to_json())) };
                Ok(TwosqStatus::Ok)
            }
            None => Ok(TwosqStatus::NotFound),
        }
    })
}

/// Re-derive a witness document and check it; `*valid` receives the verdict.
///
/// # Safety
/// Handles must be live, `witness_json` NUL-terminated, `valid` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn twosq_verify(
    table: *const TwosqTable,
    coloring: *const TwosqColoring,
    witness_json: *const c_char,
    valid: *mut bool,
) -> TwosqStatus {
    guard(|| {
        let t = unsafe { deref(table, "table")? };
        let c = unsafe { deref(coloring, "coloring")? };
        let w = Witness::from_json(unsafe { read_str(witness_json, "witness")? })?;
        let ok = verify_witness(&w, &c.0, &t.0)?;
        unsafe { write_out(valid, ok)? };
        Ok(TwosqStatus::Ok)
    })
}
