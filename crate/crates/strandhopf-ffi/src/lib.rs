//! C ABI over the strandhopf library.
//!
//! Graphs and theories are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns an
//! [`ShStatus`]; on failure `sh_last_error_message` describes the cause.
//! Strings handed out by the library must be released with `sh_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use strandhopf::cli_io::{self, IoError};
use strandhopf::graph_core::{GraphError, TwoGraph};
use strandhopf::models::{self, Theory};
use strandhopf::{hopf, iso, rewrite};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidGraph = 4,
    InvalidArgument = 5,
    ComputationError = 6,
    Panic = 7,
}

/// Opaque 2-graph handle.
pub struct ShGraph(TwoGraph);

/// Opaque theory handle.
pub struct ShTheory(Theory);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ShStatus, String);

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let status = match e {
            IoError::Parse(_) | IoError::Io(_) => ShStatus::ParseError,
            IoError::InvalidGraph(_) => ShStatus::InvalidGraph,
            IoError::InvalidArgument(_) | IoError::Usage(_) => ShStatus::InvalidArgument,
            IoError::Computation(_) => ShStatus::ComputationError,
        };
        Failure(status, e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::from(IoError::from(e))
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure and maps panics to `Panic`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ShStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ShStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            ShStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(ShStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(ShStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

unsafe fn graph<'a>(g: *const ShGraph) -> Result<&'a TwoGraph, Failure> {
    g.as_ref().map(|g| &g.0).ok_or_else(null)
}

unsafe fn theory<'a>(t: *const ShTheory) -> Result<&'a Theory, Failure> {
    t.as_ref().map(|t| &t.0).ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(ShStatus::ComputationError, "interior NUL in output".into()))?;
    if out.is_null() {
        return Err(null());
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn put_graph(out: *mut *mut ShGraph, g: TwoGraph) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(Box::into_raw(Box::new(ShGraph(g))));
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a graph document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_from_json(json: *const c_char, out: *mut *mut ShGraph) -> ShStatus {
    guard(|| {
        let g = cli_io::parse_graph(text(json)?)?;
        put_graph(out, g)
    })
}

/// Releases a graph handle. NULL is ignored.
///
/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_free(g: *mut ShGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Serializes a graph as a pretty-printed document.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_to_json(g: *const ShGraph, out: *mut *mut c_char) -> ShStatus {
    guard(|| put_string(out, cli_io::graph_to_json(graph(g)?)))
}

/// Checks a document against the axioms without failing on invalid graphs.
/// A malformed document is a parse error.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_validate_json(json: *const c_char, out_valid: *mut bool) -> ShStatus {
    guard(|| {
        let doc = cli_io::parse_document(text(json)?)?;
        let report = doc.to_raw().validate();
        if !report.is_valid() {
            let msg: Vec<String> =
                report.violations.iter().map(|v| format!("{}: {}", v.axiom.reason(), v.detail)).collect();
            set_error(&msg.join("; "));
        }
        put(out_valid, report.is_valid())
    })
}

/// Sizes of a graph. Any output pointer may be NULL.
///
/// # Safety
/// `g` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_counts(
    g: *const ShGraph,
    vertices: *mut usize,
    half_edges: *mut usize,
    strands: *mut usize,
    edges: *mut usize,
) -> ShStatus {
    guard(|| {
        let g = graph(g)?;
        for (p, v) in [
            (vertices, g.num_vertices()),
            (half_edges, g.num_half_edges()),
            (strands, g.num_strands()),
            (edges, g.num_edges()),
        ] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// Order of the automorphism group; `ComputationError` if it exceeds 64 bits.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_automorphism_count(g: *const ShGraph, out: *mut u64) -> ShStatus {
    guard(|| {
        let n = iso::automorphism_count(graph(g)?);
        let v = n
            .to_u64()
            .ok_or_else(|| Failure(ShStatus::ComputationError, format!("automorphism count {n} overflows")))?;
        put(out, v)
    })
}

/// Canonical code as a hex string; equal codes mean isomorphic graphs.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_canonical_code(g: *const ShGraph, out: *mut *mut c_char) -> ShStatus {
    guard(|| put_string(out, iso::canonical_form(graph(g)?).to_hex()))
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_are_isomorphic(a: *const ShGraph, b: *const ShGraph, out: *mut bool) -> ShStatus {
    guard(|| put(out, iso::are_isomorphic(graph(a)?, graph(b)?)))
}

/// Contracts a comma-separated list of edges (`e1,e2` or half-edge labels).
///
/// # Safety
/// `g` must be a live handle, `edges` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_contract_edges(
    g: *const ShGraph,
    edges: *const c_char,
    out: *mut *mut ShGraph,
) -> ShStatus {
    guard(|| {
        let ids: Vec<&str> = text(edges)?.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let q = rewrite::contract_edges(graph(g)?, &ids)?;
        put_graph(out, q)
    })
}

/// The graph with all edges contracted.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_residue(g: *const ShGraph, out: *mut *mut ShGraph) -> ShStatus {
    guard(|| put_graph(out, graph(g)?.residue()))
}

/// The graph with all edges removed.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_skeleton(g: *const ShGraph, out: *mut *mut ShGraph) -> ShStatus {
    guard(|| put_graph(out, graph(g)?.skeleton()))
}

/// Coproduct terms as a JSON array of `{left, right, coefficient}` rows.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_coproduct_json(g: *const ShGraph, out: *mut *mut c_char) -> ShStatus {
    guard(|| {
        let rows = hopf::tensor_rows(&hopf::coproduct_graph(graph(g)?));
        put_string(out, serde_json::to_string(&rows).expect("serializable"))
    })
}

/// Antipode terms as a JSON array of `{left, left_inverses?, coefficient}` rows.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_graph_antipode_json(g: *const ShGraph, out: *mut *mut c_char) -> ShStatus {
    guard(|| {
        let rows = hopf::element_rows(&hopf::antipode_graph(graph(g)?));
        put_string(out, serde_json::to_string(&rows).expect("serializable"))
    })
}

/// One of the presets `gw4`, `phi4`, `quartic3`, `bgr`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_theory_preset(name: *const c_char, out: *mut *mut ShTheory) -> ShStatus {
    guard(|| {
        let name = text(name)?;
        if !Theory::PRESETS.contains(&name) {
            return Err(Failure(ShStatus::InvalidArgument, format!("unknown theory preset `{name}`")));
        }
        let t = Theory::preset(name)?;
        if out.is_null() {
            return Err(null());
        }
        out.write(Box::into_raw(Box::new(ShTheory(t))));
        Ok(())
    })
}

/// Parses a theory document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_theory_from_json(json: *const c_char, out: *mut *mut ShTheory) -> ShStatus {
    guard(|| {
        let t = cli_io::parse_theory(text(json)?)?;
        if out.is_null() {
            return Err(null());
        }
        out.write(Box::into_raw(Box::new(ShTheory(t))));
        Ok(())
    })
}

/// Releases a theory handle. NULL is ignored.
///
/// # Safety
/// `t` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sh_theory_free(t: *mut ShTheory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Superficial degree of divergence as an exact rational string (`"p"` or `"p/q"`).
///
/// # Safety
/// `t`, `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_superficial_degree(
    t: *const ShTheory,
    g: *const ShGraph,
    out: *mut *mut c_char,
) -> ShStatus {
    guard(|| put_string(out, models::superficial_degree(theory(t)?, graph(g)?)?.to_string()))
}

/// Per-component power-counting report as JSON.
///
/// # Safety
/// `t`, `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_classify_json(t: *const ShTheory, g: *const ShGraph, out: *mut *mut c_char) -> ShStatus {
    guard(|| {
        let r = models::classify(theory(t)?, graph(g)?)?;
        put_string(out, serde_json::to_string(&r).expect("serializable"))
    })
}
