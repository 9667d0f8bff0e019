//! C ABI over `snap-core`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`SnapStatus`]; on failure the message is available from
//! [`snap_last_error`] on the same thread until the next failing call.
//! Panics never unwind into C and surface as `SNAP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use snap_core::bench::{discover, resolve_names, Algorithm};
use snap_core::ci::{ChiSquareTest, CiTester, Dataset, FisherZTest, OracleTester};
use snap_core::discovery::DiscoveryResult;
use snap_core::graph::{d_separated, parse_edge_list, EdgeList};
use snap_core::synthetic::expected_possible_ancestors;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Runtime = 4,
    Panic = 5,
}

/// Parsed graph with vertex names.
pub struct SnapGraph {
    inner: EdgeList,
}

/// Outcome of one discovery run.
pub struct SnapResult {
    inner: DiscoveryResult,
    names: Vec<String>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(SnapStatus, String);

fn fail(status: SnapStatus, msg: impl std::fmt::Display) -> Fail {
    Fail(status, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SnapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SnapStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SnapStatus::Panic
        }
    }
}

unsafe fn cstr<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(SnapStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SnapStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| fail(SnapStatus::NullPointer, format!("{what} is null")))
}

fn split_names(csv: &str) -> Vec<String> {
    csv.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

unsafe fn out_ptr<'a, T>(out: *mut T) -> Result<&'a mut T, Fail> {
    out.as_mut().ok_or_else(|| fail(SnapStatus::NullPointer, "output pointer is null"))
}

/// Last error message on this thread, or null. The pointer stays valid until
/// the next failing call on this thread.
#[no_mangle]
pub extern "C" fn snap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses an edge-list document into a new graph handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn snap_graph_parse(text: *const c_char, out: *mut *mut SnapGraph) -> SnapStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let src = cstr(text, "text")?;
        let inner = parse_edge_list(src).map_err(|e| fail(SnapStatus::Parse, e))?;
        *out = Box::into_raw(Box::new(SnapGraph { inner }));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from `snap_graph_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn snap_graph_free(graph: *mut SnapGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn snap_graph_n_vertices(graph: *const SnapGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.names.len())
}

/// Whether `x` and `y` are d-separated given the comma-separated `given`
/// names in a directed graph.
///
/// # Safety
/// String arguments must be nul-terminated; `given` may be null.
#[no_mangle]
pub unsafe extern "C" fn snap_dsep(
    graph: *const SnapGraph,
    x: *const c_char,
    y: *const c_char,
    given: *const c_char,
    out: *mut bool,
) -> SnapStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let g = &handle(graph, "graph")?.inner;
        let dag = g.to_dag().map_err(|e| fail(SnapStatus::InvalidArgument, e))?;
        let names = [cstr(x, "x")?.to_string(), cstr(y, "y")?.to_string()];
        let xy = resolve_names(&g.names, &names).map_err(|e| fail(SnapStatus::InvalidArgument, e))?.to_vec();
        let z_names = if given.is_null() { Vec::new() } else { split_names(cstr(given, "given")?) };
        let z = resolve_names(&g.names, &z_names).map_err(|e| fail(SnapStatus::InvalidArgument, e))?;
        let (xi, yi) = match xy.as_slice() {
            [a, b] => (*a, *b),
            _ => return Err(fail(SnapStatus::InvalidArgument, "x and y must differ")),
        };
        *out = d_separated(&dag, xi, yi, &z).map_err(|e| fail(SnapStatus::InvalidArgument, e))?;
        Ok(())
    })
}

fn run(algo: &str, names: Vec<String>, targets: &str, tester: &dyn CiTester) -> Result<SnapResult, Fail> {
    let algorithm: Algorithm = algo.parse().map_err(|e| fail(SnapStatus::InvalidArgument, e))?;
    let t = resolve_names(&names, &split_names(targets)).map_err(|e| fail(SnapStatus::InvalidArgument, e))?;
    let inner = discover(algorithm, &t, tester).map_err(|e| fail(SnapStatus::Runtime, e))?;
    Ok(SnapResult { inner, names })
}

/// Runs discovery with the d-separation oracle of the directed graph `dag`.
/// `algo` is `pc`, `snap-inf`, `snap-k:K` or `snap-k-pc:K`; `targets` is a
/// comma-separated name list.
///
/// # Safety
/// String arguments must be nul-terminated and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn snap_discover_oracle(
    dag: *const SnapGraph,
    algo: *const c_char,
    targets: *const c_char,
    out: *mut *mut SnapResult,
) -> SnapStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let g = &handle(dag, "dag")?.inner;
        let d = g.to_dag().map_err(|e| fail(SnapStatus::InvalidArgument, e))?;
        let tester = OracleTester::new(d);
        let r = run(cstr(algo, "algo")?, g.names.clone(), cstr(targets, "targets")?, &tester)?;
        *out = Box::into_raw(Box::new(r));
        Ok(())
    })
}

/// Runs discovery on CSV data with a header row. `tester` is `fisher-z` or
/// `chi-sq`.
///
/// # Safety
/// String arguments must be nul-terminated and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn snap_discover_csv(
    csv: *const c_char,
    tester: *const c_char,
    alpha: f64,
    algo: *const c_char,
    targets: *const c_char,
    out: *mut *mut SnapResult,
) -> SnapStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let kind = cstr(tester, "tester")?;
        let categorical = match kind {
            "fisher-z" => false,
            "chi-sq" => true,
            other => return Err(fail(SnapStatus::InvalidArgument, format!("unknown tester {other:?}"))),
        };
        let data = Dataset::read_csv(cstr(csv, "csv")?.as_bytes(), categorical).map_err(|e| fail(SnapStatus::Parse, e))?;
        let bad = |e: snap_core::ci::CiError| fail(SnapStatus::InvalidArgument, e);
        let t: Box<dyn CiTester> = if categorical {
            Box::new(ChiSquareTest::new(&data, alpha).map_err(bad)?)
        } else {
            Box::new(FisherZTest::new(&data, alpha).map_err(bad)?)
        };
        let r = run(cstr(algo, "algo")?, data.names().to_vec(), cstr(targets, "targets")?, t.as_ref())?;
        *out = Box::into_raw(Box::new(r));
        Ok(())
    })
}

/// # Safety
/// `result` must come from a discovery call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn snap_result_free(result: *mut SnapResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Distinct CI tests performed.
///
/// # Safety
/// `result` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn snap_result_total_tests(result: *const SnapResult, out: *mut u64) -> SnapStatus {
    guard(|| {
        *out_ptr(out)? = handle(result, "result")?.inner.tests.total();
        Ok(())
    })
}

/// Distinct CI tests with a conditioning set of size `order`.
///
/// # Safety
/// `result` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn snap_result_tests_at_order(result: *const SnapResult, order: usize, out: *mut u64) -> SnapStatus {
    guard(|| {
        *out_ptr(out)? = handle(result, "result")?.inner.tests.at_order(order);
        Ok(())
    })
}

/// Size of the retained vertex set.
///
/// # Safety
/// `result` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn snap_result_n_remaining(result: *const SnapResult, out: *mut usize) -> SnapStatus {
    guard(|| {
        *out_ptr(out)? = handle(result, "result")?.inner.remaining.len();
        Ok(())
    })
}

/// Learned graph as an edge-list document. Release with [`snap_string_free`].
///
/// # Safety
/// `result` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn snap_result_edge_list(result: *const SnapResult, out: *mut *mut c_char) -> SnapStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let r = handle(result, "result")?;
        let s = CString::new(r.inner.to_edge_list(&r.names)).map_err(|e| fail(SnapStatus::Runtime, e))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn snap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Expected possible-ancestor count of `t` random targets among `n` vertices.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn snap_expected_possible_ancestors(n: u64, t: u64, out: *mut f64) -> SnapStatus {
    guard(|| {
        let out = out_ptr(out)?;
        if t == 0 || t > n {
            return Err(fail(SnapStatus::InvalidArgument, "need 1 <= t <= n"));
        }
        *out = expected_possible_ancestors(n, t);
        Ok(())
    })
}
