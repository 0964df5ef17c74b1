//! C ABI over `palg`.
//!
//! Algebras and posets are opaque heap handles released with
//! `palg_algebra_free` / `palg_poset_free`. Every fallible call returns a
//! [`PalgStatus`] and writes its result through an out-pointer; on failure the
//! message is kept per thread and can be fetched with `palg_last_error`.
//! Strings handed out by the library must be released with `palg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use palg::algebra::{make_bnalg, powerset_algebra, product};
use palg::congruence::is_subdirectly_irreducible;
use palg::duality::{join_irreducibles, upset_algebra};
use palg::encodings::{graph_encode, make_n, recover_graph};
use palg::fo::{eval, parse_formula, Env};
use palg::format::{parse_algebra, parse_dot, parse_poset, write_algebra, write_dot, write_poset};
use palg::morphism::find_embedding;
use palg::suites::{run_suite, Suite, SuiteOptions};
use palg::{Error, FinitePAlgebra, FinitePoset, Limits};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PalgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// The input is not a valid algebra, poset, graph or morphism.
    Invalid = 4,
    CapExceeded = 5,
    /// An element index is out of range.
    OutOfRange = 6,
    /// The search found nothing (e.g. no embedding exists).
    NotFound = 7,
    /// The operation does not apply, e.g. recovering a graph from an algebra
    /// with several atoms, or a formula with free variables.
    Unsupported = 8,
    /// Buffer too small.
    BufferTooSmall = 9,
    Panic = 10,
}

/// Opaque finite p-algebra.
pub struct PalgAlgebra(FinitePAlgebra);

/// Opaque finite poset.
pub struct PalgPoset(FinitePoset);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PalgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => PalgStatus::Parse,
            Error::CapExceeded { .. } => PalgStatus::CapExceeded,
            Error::AtomCount(_)
            | Error::UnboundVariable(_)
            | Error::UnknownConstant(_)
            | Error::UnknownPredicate { .. }
            | Error::OutOfFragment(_) => PalgStatus::Unsupported,
            _ => PalgStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = std::result::Result<T, Failure>;

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> PalgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PalgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PalgStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(PalgStatus::NullPointer, "null pointer argument".into())
}

unsafe fn deref<'a, T>(p: *const T) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char) -> FfiResult<&'a str> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(PalgStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|e| Failure(PalgStatus::Invalid, e.to_string()))?;
    write_out(out, c.into_raw())
}

// Null is checked before boxing so nothing leaks.
unsafe fn write_algebra_out(out: *mut *mut PalgAlgebra, a: FinitePAlgebra) -> FfiResult<()> {
    if out.is_null() {
        return Err(null());
    }
    write_out(out, Box::into_raw(Box::new(PalgAlgebra(a))))
}

unsafe fn write_poset_out(out: *mut *mut PalgPoset, p: FinitePoset) -> FfiResult<()> {
    if out.is_null() {
        return Err(null());
    }
    write_out(out, Box::into_raw(Box::new(PalgPoset(p))))
}

fn limits(max_size: usize) -> Limits {
    let mut l = Limits::default();
    if max_size > 0 {
        l.max_size = max_size;
    }
    l
}

fn element(a: &FinitePAlgebra, x: usize) -> FfiResult<usize> {
    if x < a.size() {
        Ok(x)
    } else {
        Err(Failure(
            PalgStatus::OutOfRange,
            format!("element {x} out of range for size {}", a.size()),
        ))
    }
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn palg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn palg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_free(a: *mut PalgAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palg_poset_free(p: *mut PalgPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The Boolean algebra with `i` atoms plus a new top.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_bnalg(i: usize, out: *mut *mut PalgAlgebra) -> PalgStatus {
    guard(|| write_algebra_out(out, make_bnalg(i)?))
}

/// The six-element algebra `0 < a < b, c < e < 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_n(out: *mut *mut PalgAlgebra) -> PalgStatus {
    guard(|| write_algebra_out(out, make_n()))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_powerset(n: usize, out: *mut *mut PalgAlgebra) -> PalgStatus {
    guard(|| write_algebra_out(out, powerset_algebra(n)?))
}

/// `a × b`. A `max_size` of zero uses the default cap.
///
/// # Safety
/// `a` and `b` must be live handles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_product(
    a: *const PalgAlgebra,
    b: *const PalgAlgebra,
    max_size: usize,
    out: *mut *mut PalgAlgebra,
) -> PalgStatus {
    guard(|| {
        let factors = [deref(a)?.0.clone(), deref(b)?.0.clone()];
        write_algebra_out(out, product(&factors, &limits(max_size))?)
    })
}

/// Reads an algebra in the TOML file format.
///
/// # Safety
/// `text` must be a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_parse(text: *const c_char, out: *mut *mut PalgAlgebra) -> PalgStatus {
    guard(|| write_algebra_out(out, parse_algebra(read_str(text)?)?))
}

/// Writes the algebra in the TOML file format. Free the result with
/// `palg_string_free`.
///
/// # Safety
/// `a` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_to_text(a: *const PalgAlgebra, out: *mut *mut c_char) -> PalgStatus {
    guard(|| write_string(out, write_algebra(&deref(a)?.0)))
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_size(a: *const PalgAlgebra) -> usize {
    a.as_ref().map_or(0, |a| a.0.size())
}

/// # Safety
/// `a` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_meet(
    a: *const PalgAlgebra,
    x: usize,
    y: usize,
    out: *mut usize,
) -> PalgStatus {
    guard(|| {
        let a = &deref(a)?.0;
        write_out(out, a.meet(element(a, x)?, element(a, y)?))
    })
}

/// # Safety
/// `a` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_join(
    a: *const PalgAlgebra,
    x: usize,
    y: usize,
    out: *mut usize,
) -> PalgStatus {
    guard(|| {
        let a = &deref(a)?.0;
        write_out(out, a.join(element(a, x)?, element(a, y)?))
    })
}

/// # Safety
/// `a` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_star(a: *const PalgAlgebra, x: usize, out: *mut usize) -> PalgStatus {
    guard(|| {
        let a = &deref(a)?.0;
        write_out(out, a.star(element(a, x)?))
    })
}

/// # Safety
/// `a` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_leq(
    a: *const PalgAlgebra,
    x: usize,
    y: usize,
    out: *mut bool,
) -> PalgStatus {
    guard(|| {
        let a = &deref(a)?.0;
        write_out(out, a.leq(element(a, x)?, element(a, y)?))
    })
}

/// # Safety
/// `a` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_is_boolean(a: *const PalgAlgebra, out: *mut bool) -> PalgStatus {
    guard(|| write_out(out, deref(a)?.0.is_boolean()))
}

/// Subdirect irreducibility.
///
/// # Safety
/// `a` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_is_si(a: *const PalgAlgebra, out: *mut bool) -> PalgStatus {
    guard(|| write_out(out, is_subdirectly_irreducible(&deref(a)?.0, &Limits::default())?))
}

/// Poset of join-irreducible elements.
///
/// # Safety
/// `a` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_algebra_dual(a: *const PalgAlgebra, out: *mut *mut PalgPoset) -> PalgStatus {
    guard(|| {
        write_poset_out(out, join_irreducibles(&deref(a)?.0))
    })
}

/// Evaluates a sentence; the standard predicate library is available.
///
/// # Safety
/// `a` must be a live handle, `formula` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_eval(a: *const PalgAlgebra, formula: *const c_char, out: *mut bool) -> PalgStatus {
    guard(|| {
        let a = &deref(a)?.0;
        let phi = parse_formula(read_str(formula)?)?;
        write_out(out, eval(a, &phi, &Env::new())?)
    })
}

/// The least embedding of `a` into `b`. `map` receives `size(a)` entries;
/// returns `NotFound` if there is none.
///
/// # Safety
/// `a`, `b` must be live handles and `map` must hold `map_len` elements.
#[no_mangle]
pub unsafe extern "C" fn palg_find_embedding(
    a: *const PalgAlgebra,
    b: *const PalgAlgebra,
    map: *mut usize,
    map_len: usize,
) -> PalgStatus {
    guard(|| {
        let (a, b) = (&deref(a)?.0, &deref(b)?.0);
        if map.is_null() {
            return Err(null());
        }
        if map_len < a.size() {
            return Err(Failure(
                PalgStatus::BufferTooSmall,
                format!("map needs {} entries", a.size()),
            ));
        }
        let h = find_embedding(a, b)
            .ok_or_else(|| Failure(PalgStatus::NotFound, "no embedding".into()))?;
        std::slice::from_raw_parts_mut(map, a.size()).copy_from_slice(h.map());
        Ok(())
    })
}

/// Reads a poset in the TOML file format.
///
/// # Safety
/// `text` must be a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_poset_parse(text: *const c_char, out: *mut *mut PalgPoset) -> PalgStatus {
    guard(|| {
        write_poset_out(out, parse_poset(read_str(text)?)?)
    })
}

/// # Safety
/// `p` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_poset_to_text(p: *const PalgPoset, out: *mut *mut c_char) -> PalgStatus {
    guard(|| write_string(out, write_poset(&deref(p)?.0)))
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palg_poset_size(p: *const PalgPoset) -> usize {
    p.as_ref().map_or(0, |p| p.0.size())
}

/// The algebra of upsets. A `max_size` of zero uses the default cap.
///
/// # Safety
/// `p` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_poset_upset_algebra(
    p: *const PalgPoset,
    max_size: usize,
    out: *mut *mut PalgAlgebra,
) -> PalgStatus {
    guard(|| write_algebra_out(out, upset_algebra(&deref(p)?.0, &limits(max_size))?))
}

/// Encodes a graph written in the DOT subset as an algebra with one atom.
///
/// # Safety
/// `dot` must be a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_encode_graph(
    dot: *const c_char,
    max_size: usize,
    out: *mut *mut PalgAlgebra,
) -> PalgStatus {
    guard(|| {
        let g = parse_dot(read_str(dot)?)?;
        let enc = graph_encode(&g, &limits(max_size))?;
        write_algebra_out(out, enc.algebra)
    })
}

/// Reads the graph off an algebra with exactly one atom, as DOT text.
///
/// # Safety
/// `a` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palg_recover_graph(a: *const PalgAlgebra, out: *mut *mut c_char) -> PalgStatus {
    guard(|| {
        let g = recover_graph(&deref(a)?.0)?;
        write_string(out, write_dot(&g))
    })
}

/// Runs a verification suite with default bounds. `passed` receives the
/// overall verdict and `report` (if not null) the report text.
///
/// # Safety
/// `suite` must be a NUL-terminated string, `passed` writable, `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn palg_check_suite(
    suite: *const c_char,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> PalgStatus {
    guard(|| {
        let suite = Suite::from_str(read_str(suite)?)?;
        let r = run_suite(suite, &SuiteOptions::default())?;
        write_out(passed, r.passed())?;
        if !report.is_null() {
            write_string(report, r.to_string())?;
        }
        Ok(())
    })
}
