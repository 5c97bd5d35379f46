//! C ABI for the minfb solver: opaque handles, integer status codes, and a
//! thread-local last-error message. The header is generated by cbindgen into
//! `include/minfb.h`.

use minfb::graph::{verify_solution, DeletionSet, WeightedDigraph};
use minfb::io::parse_graph;
use minfb::linsys::{parse_system, system_to_digraph};
use minfb::portfolio::{solve_portfolio, Algorithm, SolveFailure, SolveOptions};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinfbStatus {
    /// Success; for solve calls this means a blocker was found.
    MinfbOk = 0,
    /// The instance has no solution within the budget.
    MinfbNoSolution = 1,
    MinfbInputError = 2,
    MinfbResourceError = 3,
    MinfbNullPointer = 4,
    MinfbInvalidUtf8 = 5,
    MinfbPanic = 6,
}

use MinfbStatus::*;

/// Opaque instance handle.
pub struct MinfbGraph {
    inner: WeightedDigraph,
    embedded_k: Option<u32>,
}

/// Opaque solve-result handle.
pub struct MinfbSolution {
    arcs: Vec<u32>,
    algorithm: CString,
    found: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

/// Message describing the most recent error on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn minfb_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, MinfbStatus> {
    if ptr.is_null() {
        set_error("null string pointer");
        return Err(MinfbNullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        MinfbInvalidUtf8
    })
}

fn guarded(f: impl FnOnce() -> MinfbStatus + std::panic::UnwindSafe) -> MinfbStatus {
    match catch_unwind(f) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            MinfbPanic
        }
    }
}

/// Parses the graph text format (`p ndfas ...` / `a ...` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn minfb_graph_parse(
    text: *const c_char,
    out: *mut *mut MinfbGraph,
) -> MinfbStatus {
    if out.is_null() {
        set_error("null output pointer");
        return MinfbNullPointer;
    }
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guarded(AssertUnwindSafe(|| match parse_graph(text) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(MinfbGraph { inner: g, embedded_k: None }));
            MinfbOk
        }
        Err(e) => {
            set_error(&e.to_string());
            MinfbInputError
        }
    }))
}

/// Parses the JSON constraint-system document; the embedded budget is
/// available through `minfb_graph_embedded_k`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn minfb_graph_parse_system(
    json: *const c_char,
    out: *mut *mut MinfbGraph,
) -> MinfbStatus {
    if out.is_null() {
        set_error("null output pointer");
        return MinfbNullPointer;
    }
    let json = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guarded(AssertUnwindSafe(|| match parse_system(json) {
        Ok(sys) => {
            let (graph, _) = system_to_digraph(&sys);
            *out = Box::into_raw(Box::new(MinfbGraph {
                inner: graph,
                embedded_k: Some(sys.budget() as u32),
            }));
            MinfbOk
        }
        Err(e) => {
            set_error(&e.to_string());
            MinfbInputError
        }
    }))
}

/// # Safety
/// `g` must come from a parse call and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn minfb_graph_free(g: *mut MinfbGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn minfb_graph_vertex_count(g: *const MinfbGraph) -> u32 {
    if g.is_null() {
        return 0;
    }
    (*g).inner.vertex_count() as u32
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn minfb_graph_arc_count(g: *const MinfbGraph) -> u32 {
    if g.is_null() {
        return 0;
    }
    (*g).inner.arc_count() as u32
}

/// Budget embedded in a constraint-system input; `u32::MAX` when absent.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn minfb_graph_embedded_k(g: *const MinfbGraph) -> u32 {
    if g.is_null() {
        return u32::MAX;
    }
    (*g).embedded_k.unwrap_or(u32::MAX)
}

/// Solves the instance. `algorithm` may be null for automatic routing or one
/// of the solver names (`oracle`, `td-k`, `pm1-wminus`, `pm1-wplus`,
/// `dp-tw-wminus`, `dp-tw-wplus`, `dp-td`, `skew-nonzero`, `trivial`).
/// On `MinfbOk` or `MinfbNoSolution`, `out` receives a solution handle.
///
/// # Safety
/// `g` must be a live graph handle, `out` a valid pointer, `algorithm` null
/// or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn minfb_solve(
    g: *const MinfbGraph,
    k: u32,
    algorithm: *const c_char,
    minimum: bool,
    out: *mut *mut MinfbSolution,
) -> MinfbStatus {
    if g.is_null() || out.is_null() {
        set_error("null pointer");
        return MinfbNullPointer;
    }
    let algorithm = if algorithm.is_null() {
        None
    } else {
        match read_str(algorithm) {
            Ok(name) => match Algorithm::parse(name) {
                Some(a) => Some(a),
                None => {
                    set_error(&format!("unknown algorithm `{name}`"));
                    return MinfbInputError;
                }
            },
            Err(s) => return s,
        }
    };
    let graph = &(*g).inner;
    guarded(AssertUnwindSafe(|| {
        let opts = SolveOptions { algorithm, minimum, ..Default::default() };
        match solve_portfolio(graph, k as usize, &opts) {
            Ok(outcome) => {
                let found = outcome.blocker.is_some();
                let arcs = outcome.blocker.map(|s| s.iter().collect()).unwrap_or_default();
                let solution = MinfbSolution {
                    arcs,
                    algorithm: CString::new(outcome.algorithm.name()).unwrap(),
                    found,
                };
                *out = Box::into_raw(Box::new(solution));
                if found {
                    MinfbOk
                } else {
                    MinfbNoSolution
                }
            }
            Err(SolveFailure::Input(msg)) => {
                set_error(&msg);
                MinfbInputError
            }
            Err(SolveFailure::Resource { estimates }) => {
                let msg = estimates
                    .iter()
                    .map(|(n, c)| format!("{n}={c:.3e}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                set_error(&format!("estimated costs exceed the resource cap: {msg}"));
                MinfbResourceError
            }
        }
    }))
}

/// # Safety
/// `sol` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn minfb_solution_found(sol: *const MinfbSolution) -> bool {
    !sol.is_null() && (*sol).found
}

/// # Safety
/// `sol` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn minfb_solution_size(sol: *const MinfbSolution) -> usize {
    if sol.is_null() {
        return 0;
    }
    (*sol).arcs.len()
}

/// Copies up to `cap` arc ids into `buf`; returns how many were written.
///
/// # Safety
/// `sol` must be live; `buf` must point to at least `cap` u32 slots.
#[no_mangle]
pub unsafe extern "C" fn minfb_solution_arcs(
    sol: *const MinfbSolution,
    buf: *mut u32,
    cap: usize,
) -> usize {
    if sol.is_null() || buf.is_null() {
        return 0;
    }
    let arcs = &(*sol).arcs;
    let n = arcs.len().min(cap);
    ptr::copy_nonoverlapping(arcs.as_ptr(), buf, n);
    n
}

/// Name of the algorithm that produced the solution. Valid while the
/// solution handle lives.
///
/// # Safety
/// `sol` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn minfb_solution_algorithm(sol: *const MinfbSolution) -> *const c_char {
    if sol.is_null() {
        return ptr::null();
    }
    (*sol).algorithm.as_ptr()
}

/// # Safety
/// `sol` must come from `minfb_solve` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn minfb_solution_free(sol: *mut MinfbSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Checks a proposed deletion set: `out_valid` is set to whether it has size
/// at most `k` and leaves no negative cycle.
///
/// # Safety
/// `g` must be live; `ids` must point to `len` u32 values; `out_valid` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn minfb_verify(
    g: *const MinfbGraph,
    ids: *const u32,
    len: usize,
    k: u32,
    out_valid: *mut bool,
) -> MinfbStatus {
    if g.is_null() || out_valid.is_null() || (ids.is_null() && len > 0) {
        set_error("null pointer");
        return MinfbNullPointer;
    }
    let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(ids, len) };
    let set = DeletionSet::from_ids(slice.iter().copied());
    let graph = &(*g).inner;
    guarded(AssertUnwindSafe(|| match verify_solution(graph, &set, k as usize) {
        Ok(report) => {
            *out_valid = report.valid();
            MinfbOk
        }
        Err(e) => {
            set_error(&e.to_string());
            MinfbInputError
        }
    }))
}
