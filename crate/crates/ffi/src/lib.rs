//! C interface: opaque handles for words and contracted rotations, status codes
//! matching the command-line exit codes, a thread-local last-error message, and a
//! JSON entry point that runs experiment manifests.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sturmian::cli::{run, to_json_text, ExperimentManifest};
use sturmian::kernel::RealLike;
use sturmian::rotor::ContractedRotation;
use sturmian::stutter::mismatch_set;
use sturmian::words::{fibonacci_word, subword_complexity, theta_coding, CodingSpec, Word};
use sturmian::Error;

/// Result of every fallible call. Library errors use the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StmStatus {
    Ok = 0,
    Parse = 2,
    Validation = 3,
    UnknownKind = 4,
    Io = 5,
    Precision = 10,
    Algebra = 11,
    Heights = 12,
    Words = 13,
    NotOnAttractor = 14,
    NullPointer = 20,
    InvalidUtf8 = 21,
    BufferTooSmall = 22,
    Panic = 23,
}

/// Finite word over {0, 1}.
pub struct StmWord {
    inner: Word,
}

/// Contracted rotation `x -> {lambda x + delta}` on [0, 1).
pub struct StmRotation {
    inner: ContractedRotation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Utf8(&'static str),
    Buffer { need: usize, cap: usize },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn status(&self) -> StmStatus {
        match self {
            Failure::Core(e) => match e.exit_code() {
                2 => StmStatus::Parse,
                3 => StmStatus::Validation,
                4 => StmStatus::UnknownKind,
                5 => StmStatus::Io,
                10 => StmStatus::Precision,
                11 => StmStatus::Algebra,
                12 => StmStatus::Heights,
                13 => StmStatus::Words,
                14 => StmStatus::NotOnAttractor,
                _ => StmStatus::Validation,
            },
            Failure::Null(_) => StmStatus::NullPointer,
            Failure::Utf8(_) => StmStatus::InvalidUtf8,
            Failure::Buffer { .. } => StmStatus::BufferTooSmall,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => format!("{}: {}", e.kind(), e),
            Failure::Null(what) => format!("null pointer: {}", what),
            Failure::Utf8(what) => format!("invalid UTF-8 in {}", what),
            Failure::Buffer { need, cap } => format!("buffer holds {} elements, {} needed", cap, need),
        }
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> StmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StmStatus::Ok,
        Ok(Err(fail)) => {
            set_error(fail.message());
            fail.status()
        }
        Err(_) => {
            set_error("internal panic".into());
            StmStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(what))
}

unsafe fn literal(p: *const c_char, what: &'static str) -> Result<RealLike, Failure> {
    Ok(RealLike::parse(text(p, what)?)?)
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(v);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn stm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the next
/// call into the library on the same thread.
#[no_mangle]
pub extern "C" fn stm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Free a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string returned by this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn stm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Prefix of length `n` of the Fibonacci word.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stm_fibonacci_word(n: usize, out: *mut *mut StmWord) -> StmStatus {
    guard(|| put(out, Box::into_raw(Box::new(StmWord { inner: fibonacci_word(n) })), "out"))
}

/// Coding `u_1 .. u_n` (origin 1) or `u_0 .. u_{n-1}` (origin 0) of `x` under rotation by `theta`.
///
/// # Safety
/// `theta` and `x` must be NUL-terminated strings; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stm_theta_coding(theta: *const c_char, x: *const c_char, origin: u8, n: usize, out: *mut *mut StmWord) -> StmStatus {
    guard(|| {
        let spec = CodingSpec::new(literal(theta, "theta")?, literal(x, "x")?, origin)?;
        let w = theta_coding(&spec, n)?;
        put(out, Box::into_raw(Box::new(StmWord { inner: w })), "out")
    })
}

/// Number of symbols; 0 for NULL.
///
/// # Safety
/// `w` must be NULL or a live word handle.
#[no_mangle]
pub unsafe extern "C" fn stm_word_len(w: *const StmWord) -> usize {
    w.as_ref().map_or(0, |w| w.inner.len())
}

/// Copy the symbols into `buf`, which holds `cap` bytes.
///
/// # Safety
/// `w` must be a live word handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn stm_word_symbols(w: *const StmWord, buf: *mut u8, cap: usize) -> StmStatus {
    guard(|| {
        let w = handle(w, "word")?;
        let n = w.inner.len();
        if cap < n {
            return Err(Failure::Buffer { need: n, cap });
        }
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        for (i, &s) in w.inner.symbols().iter().enumerate() {
            buf.add(i).write(s as u8);
        }
        Ok(())
    })
}

/// Release a word handle.
///
/// # Safety
/// `w` must be NULL or a live word handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn stm_word_free(w: *mut StmWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Positions `m` in `[0, s]` with `u_m != u_{m+r}`. `out_len` receives the count
/// even when the buffer is too small.
///
/// # Safety
/// `w` must be a live word handle, `buf` valid for `cap` writes, `out_len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stm_mismatch_set(w: *const StmWord, r: usize, s: usize, buf: *mut usize, cap: usize, out_len: *mut usize) -> StmStatus {
    guard(|| {
        let w = handle(w, "word")?;
        let d = mismatch_set(&w.inner, r, s)?;
        put(out_len, d.len(), "out_len")?;
        if cap < d.len() {
            return Err(Failure::Buffer { need: d.len(), cap });
        }
        if !d.is_empty() && buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        ptr::copy_nonoverlapping(d.as_ptr(), buf, d.len());
        Ok(())
    })
}

/// Number of distinct factors of length `n`.
///
/// # Safety
/// `w` must be a live word handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stm_subword_complexity(w: *const StmWord, n: usize, out: *mut usize) -> StmStatus {
    guard(|| {
        let c = subword_complexity(&handle(w, "word")?.inner, n)?;
        put(out, c.count, "out")
    })
}

/// Rotation with exact `lambda` and `delta`, `lambda + delta > 1`.
///
/// # Safety
/// `lambda` and `delta` must be NUL-terminated strings; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stm_rotation_new(lambda: *const c_char, delta: *const c_char, out: *mut *mut StmRotation) -> StmStatus {
    guard(|| {
        let cr = ContractedRotation::new(literal(lambda, "lambda")?, literal(delta, "delta")?)?;
        put(out, Box::into_raw(Box::new(StmRotation { inner: cr })), "out")
    })
}

/// Rotation whose offset is the unique one with rotation number `theta` (irrational).
///
/// # Safety
/// `lambda` and `theta` must be NUL-terminated strings; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn stm_rotation_with_rotation(lambda: *const c_char, theta: *const c_char, out: *mut *mut StmRotation) -> StmStatus {
    guard(|| {
        let cr = ContractedRotation::with_rotation(literal(lambda, "lambda")?, literal(theta, "theta")?)?;
        put(out, Box::into_raw(Box::new(StmRotation { inner: cr })), "out")
    })
}

/// `f(x)` as an exact literal and the branch taken (1 when it wraps).
///
/// # Safety
/// `h` must be a live rotation handle, `x` a NUL-terminated string, outputs valid for writes.
/// The string written to `out_value` must be released with `stm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn stm_rotation_apply(h: *const StmRotation, x: *const c_char, out_value: *mut *mut c_char, out_branch: *mut u8) -> StmStatus {
    guard(|| {
        let (y, b) = handle(h, "rotation")?.inner.apply_f(&literal(x, "x")?)?;
        put(out_branch, b, "out_branch")?;
        put(out_value, owned_string(y.to_string()), "out_value")
    })
}

/// Rotation-number enclosure after `n` steps as JSON `{mid, rad, bits}`.
///
/// # Safety
/// `h` must be a live rotation handle and `out_json` valid for writes. The string
/// must be released with `stm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn stm_rotation_number(h: *const StmRotation, n: u64, out_json: *mut *mut c_char) -> StmStatus {
    guard(|| {
        let b = handle(h, "rotation")?.inner.rotation_number(n)?.to_record();
        let s = format!("{{\"bits\":{},\"mid\":\"{}\",\"rad\":\"{}\"}}", b.bits, b.mid, b.rad);
        put(out_json, owned_string(s), "out_json")
    })
}

/// Release a rotation handle.
///
/// # Safety
/// `h` must be NULL or a live rotation handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn stm_rotation_free(h: *mut StmRotation) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Run an experiment manifest given as JSON text and return the versioned report.
/// `prec` overrides the manifest precision when nonzero. Output files named in the
/// manifest are written as by the command-line tool.
///
/// # Safety
/// `manifest` must be a NUL-terminated string and `out_json` valid for writes. The
/// string must be released with `stm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn stm_run_manifest(manifest: *const c_char, prec: u32, out_json: *mut *mut c_char) -> StmStatus {
    guard(|| {
        let m = ExperimentManifest::parse(text(manifest, "manifest")?)?;
        let v = run(&m, (prec != 0).then_some(prec))?;
        put(out_json, owned_string(to_json_text(&v)), "out_json")
    })
}
