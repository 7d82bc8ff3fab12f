//! C ABI over `qkernel`.
//!
//! Digraphs cross the boundary as opaque `QkDigraph` handles, vertex sets as
//! `uint64_t` bitmasks (bit `v` set iff vertex `v` is a member). Every
//! fallible call returns a `QkStatus`; on failure `qk_last_error` holds a
//! message for the calling thread until its next failing call. Strings
//! returned by the library are freed with `qk_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qkernel::alpha::RationalAlpha;
use qkernel::error::Error;
use qkernel::format;
use qkernel::harness::{check, ConjectureSpec, Variant};
use qkernel::solvers;
use qkernel::{Digraph, VertexSet};

/// Opaque digraph handle.
pub struct QkDigraph(Digraph);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    NotSinkFree = 6,
    NotKernelPerfect = 7,
    NotQuasiKernel = 8,
    /// A construction failed its own guarantee.
    Postcondition = 9,
    /// A Rust panic was caught at the boundary.
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QkVariant {
    Small = 0,
    Sources = 1,
    Large = 2,
    Sharp = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QkStatus {
    match e {
        Error::Parse { .. } | Error::SelfLoop(_) | Error::DuplicateArc(..) => QkStatus::Parse,
        Error::VertexOutOfRange { .. }
        | Error::TooManyVertices { .. }
        | Error::InvalidPartition(_)
        | Error::InvalidArgument(_) => QkStatus::InvalidArgument,
        Error::BudgetExceeded(_) => QkStatus::BudgetExceeded,
        Error::NotSinkFree(_) => QkStatus::NotSinkFree,
        Error::NotKernelPerfect => QkStatus::NotKernelPerfect,
        Error::NotQuasiKernel => QkStatus::NotQuasiKernel,
        Error::Postcondition { .. } | Error::OracleViolation(_) => QkStatus::Postcondition,
    }
}

fn fail(status: QkStatus, msg: &str) -> QkStatus {
    set_error(msg);
    status
}

// Runs `f`, turning errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), QkStatus>>(f: F) -> QkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QkStatus::Internal, "internal panic"),
    }
}

fn lib<T>(r: qkernel::Result<T>) -> Result<T, QkStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

unsafe fn digraph<'a>(d: *const QkDigraph) -> Result<&'a Digraph, QkStatus> {
    d.as_ref()
        .map(|h| &h.0)
        .ok_or_else(|| fail(QkStatus::NullPointer, "null digraph handle"))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, QkStatus> {
    p.as_mut()
        .ok_or_else(|| fail(QkStatus::NullPointer, "null output pointer"))
}

fn into_handle(d: Digraph) -> *mut QkDigraph {
    Box::into_raw(Box::new(QkDigraph(d)))
}

/// Message of the calling thread's last failure; empty if none. Valid until
/// the thread's next failing call.
#[no_mangle]
pub extern "C" fn qk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn qk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses the text (`n` then `u v` lines) or JSON digraph format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out_digraph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_parse(text: *const c_char, out_digraph: *mut *mut QkDigraph) -> QkStatus {
    guard(|| {
        let slot = out(out_digraph)?;
        if text.is_null() {
            return Err(fail(QkStatus::NullPointer, "null text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(QkStatus::InvalidUtf8, "text is not UTF-8"))?;
        *slot = into_handle(lib(format::parse_any(s))?);
        Ok(())
    })
}

/// Builds a digraph from `arc_count` pairs laid out as
/// `tails_heads[2i] -> tails_heads[2i+1]`.
///
/// # Safety
/// `tails_heads` must point to `2 * arc_count` readable values (it may be
/// null when `arc_count` is 0); `out_digraph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_from_arcs(
    n: usize,
    tails_heads: *const u32,
    arc_count: usize,
    out_digraph: *mut *mut QkDigraph,
) -> QkStatus {
    guard(|| {
        let slot = out(out_digraph)?;
        let flat: &[u32] = if arc_count == 0 {
            &[]
        } else if tails_heads.is_null() {
            return Err(fail(QkStatus::NullPointer, "null arc array"));
        } else {
            std::slice::from_raw_parts(tails_heads, 2 * arc_count)
        };
        let arcs = flat.chunks(2).map(|c| (c[0] as usize, c[1] as usize));
        *slot = into_handle(lib(Digraph::from_arcs(n, arcs))?);
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `d` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_free(d: *mut QkDigraph) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Vertex count; 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_vertex_count(d: *const QkDigraph) -> usize {
    d.as_ref().map_or(0, |h| h.0.n())
}

/// Arc count; 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_arc_count(d: *const QkDigraph) -> usize {
    d.as_ref().map_or(0, |h| h.0.arc_count())
}

/// Text serialization; free the result with `qk_string_free`.
///
/// # Safety
/// `d` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_digraph_serialize(d: *const QkDigraph, out_text: *mut *mut c_char) -> QkStatus {
    guard(|| {
        let g = digraph(d)?;
        let slot = out(out_text)?;
        *slot = CString::new(format::serialize(g))
            .expect("no nul in serialization")
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Minimum-size quasi-kernel.
///
/// # Safety
/// `d` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_min_quasi_kernel(d: *const QkDigraph, out_set: *mut u64, out_size: *mut usize) -> QkStatus {
    solve(d, out_set, out_size, solvers::min_quasi_kernel)
}

/// Quasi-kernel maximising `|N⁻[Q]|`; the objective is that size.
///
/// # Safety
/// As `qk_min_quasi_kernel`.
#[no_mangle]
pub unsafe extern "C" fn qk_max_large_quasi_kernel(
    d: *const QkDigraph,
    out_set: *mut u64,
    out_objective: *mut usize,
) -> QkStatus {
    solve(d, out_set, out_objective, solvers::max_large_quasi_kernel)
}

/// Quasi-kernel maximising `|Q| + 2|N⁻(Q)|`; the objective is that value.
///
/// # Safety
/// As `qk_min_quasi_kernel`.
#[no_mangle]
pub unsafe extern "C" fn qk_max_sharp_quasi_kernel(
    d: *const QkDigraph,
    out_set: *mut u64,
    out_objective: *mut usize,
) -> QkStatus {
    solve(d, out_set, out_objective, solvers::max_sharp_quasi_kernel)
}

unsafe fn solve(
    d: *const QkDigraph,
    out_set: *mut u64,
    out_objective: *mut usize,
    f: fn(&Digraph) -> solvers::SolveResult,
) -> QkStatus {
    guard(|| {
        let g = digraph(d)?;
        let (set, obj) = (out(out_set)?, out(out_objective)?);
        let r = f(g);
        let w = r.witness.filter(|_| r.verified).ok_or_else(|| {
            fail(QkStatus::Postcondition, "solver produced no verified witness")
        })?;
        *set = w.bits();
        *obj = r.objective;
        Ok(())
    })
}

/// Minimum kernel; `*out_found` is false (and `*out_set` 0) when there is
/// none.
///
/// # Safety
/// As `qk_min_quasi_kernel`.
#[no_mangle]
pub unsafe extern "C" fn qk_find_kernel(d: *const QkDigraph, out_set: *mut u64, out_found: *mut bool) -> QkStatus {
    guard(|| {
        let g = digraph(d)?;
        let (set, found) = (out(out_set)?, out(out_found)?);
        let r = solvers::find_kernel(g);
        *found = r.witness.is_some();
        *set = r.witness.map_or(0, |w| w.bits());
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle; `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_is_quasi_kernel(d: *const QkDigraph, set: u64, out_result: *mut bool) -> QkStatus {
    guard(|| {
        let g = digraph(d)?;
        let r = out(out_result)?;
        *r = solvers::is_quasi_kernel(g, VertexSet::from_bits(set));
        Ok(())
    })
}

/// Kernel-perfect number and a certifying partition. `out_parts` receives
/// `*out_k` bitmasks and must hold `parts_capacity >= vertex count` entries.
///
/// # Safety
/// `d` must be a live handle; `out_parts` must point to `parts_capacity`
/// writable values; `out_k` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_kp_number(
    d: *const QkDigraph,
    out_k: *mut usize,
    out_parts: *mut u64,
    parts_capacity: usize,
) -> QkStatus {
    guard(|| {
        let g = digraph(d)?;
        let k_slot = out(out_k)?;
        if out_parts.is_null() && g.n() > 0 {
            return Err(fail(QkStatus::NullPointer, "null partition buffer"));
        }
        if parts_capacity < g.n() {
            return Err(fail(
                QkStatus::InvalidArgument,
                "partition buffer smaller than the vertex count",
            ));
        }
        let (k, p) = lib(solvers::kp_number(g))?;
        for (i, part) in p.parts.iter().enumerate() {
            *out_parts.add(i) = part.bits();
        }
        *k_slot = k;
        Ok(())
    })
}

/// Checks one conjecture variant at `alpha = p/q` with exact arithmetic.
/// `small` uses the sink-free version and rejects digraphs with sinks.
///
/// # Safety
/// `d` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn qk_check(
    d: *const QkDigraph,
    variant: QkVariant,
    p: u64,
    q: u64,
    out_pass: *mut bool,
    out_objective: *mut usize,
) -> QkStatus {
    guard(|| {
        let g = digraph(d)?;
        let (pass, obj) = (out(out_pass)?, out(out_objective)?);
        let alpha = lib(RationalAlpha::new(p, q))?;
        let v = match variant {
            QkVariant::Small => Variant::Small,
            QkVariant::Sources => Variant::Sources,
            QkVariant::Large => Variant::Large,
            QkVariant::Sharp => Variant::Sharp,
        };
        let r = lib(check(g, &ConjectureSpec::standard(v, alpha)))?;
        *pass = r.pass;
        *obj = r.objective;
        Ok(())
    })
}
