//! C ABI over the cdga-lab engine.
//!
//! Every entry point returns a [`CdgaLabStatus`]. On failure the message is
//! available from [`cdga_lab_last_error`] on the same thread. Strings handed
//! out by the library are freed with [`cdga_lab_string_free`]; spaces with
//! [`cdga_lab_space_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cdga_lab::catalog::{self, Model};
use cdga_lab::cli::{canonical_json, formality_json, massey_report};
use cdga_lab::homology::CochainSpace;
use cdga_lab::io::{model_from_text, parse_input, InputFile};
use cdga_lab::isotopy::isotopy_verify;
use cdga_lab::lattice::{count_fixed_points, LatticeModel, Window};
use cdga_lab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdgaLabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InputError = 3,
    ComputationError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque handle: a model together with its cochain space.
pub struct CdgaLabSpace {
    model: Model,
    space: CochainSpace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CdgaLabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match e {
            Error::Parse(_) | Error::Json(_) | Error::UnknownModel(_) => CdgaLabStatus::InputError,
            _ => CdgaLabStatus::ComputationError,
        };
        Failure(status, e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> CdgaLabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CdgaLabStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CdgaLabStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(CdgaLabStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CdgaLabStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn optional_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(CdgaLabStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn space_ref<'a>(p: *const CdgaLabSpace) -> Result<&'a CdgaLabSpace, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(CdgaLabStatus::NullPointer, "space is null".into()))
}

unsafe fn emit_json(out: *mut *mut c_char, v: &serde_json::Value) -> Result<(), Failure> {
    out_ptr(out, "out")?;
    let s = CString::new(canonical_json(v)).map_err(|e| Failure(CdgaLabStatus::ComputationError, e.to_string()))?;
    *out = s.into_raw();
    Ok(())
}

unsafe fn emit_space(out: *mut *mut CdgaLabSpace, model: Model) -> Result<(), Failure> {
    let space = model.space()?;
    *out = Box::into_raw(Box::new(CdgaLabSpace { model, space }));
    Ok(())
}

/// Message of the last failure on this thread, or null. Owned by the
/// library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cdga_lab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a space from a catalog model name.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_space_from_model(name: *const c_char, out: *mut *mut CdgaLabSpace) -> CdgaLabStatus {
    guard(|| {
        out_ptr(out, "out")?;
        emit_space(out, catalog::lookup(text(name, "name")?)?)
    })
}

/// Builds a space from the JSON text of a CDGA or Lie algebra file.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_space_from_json(json: *const c_char, out: *mut *mut CdgaLabSpace) -> CdgaLabStatus {
    guard(|| {
        out_ptr(out, "out")?;
        emit_space(out, model_from_text(text(json, "json")?)?)
    })
}

/// Frees a space. Null is ignored.
///
/// # Safety
/// `space` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_space_free(space: *mut CdgaLabSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Highest degree with a nonzero cochain.
///
/// # Safety
/// `space` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_space_top_degree(space: *const CdgaLabSpace, out: *mut u32) -> CdgaLabStatus {
    guard(|| {
        let s = space_ref(space)?;
        out_ptr(out, "out")?;
        *out = s.space.top_degree();
        Ok(())
    })
}

/// Writes the Betti numbers `b_0..b_top` into `buf`. `len` receives the
/// count; if `cap` is too small nothing is written to `buf` and
/// `BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `space` must be live; `len` must be writable; `buf` must hold `cap`
/// entries.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_space_betti(
    space: *const CdgaLabSpace,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> CdgaLabStatus {
    guard(|| {
        let s = space_ref(space)?;
        out_ptr(len, "len")?;
        let betti = s.space.betti().betti;
        *len = betti.len();
        if cap < betti.len() {
            return Err(Failure(
                CdgaLabStatus::BufferTooSmall,
                format!("need {} entries, got {cap}", betti.len()),
            ));
        }
        out_ptr(buf, "buf")?;
        ptr::copy_nonoverlapping(betti.as_ptr(), buf, betti.len());
        Ok(())
    })
}

/// Massey product of comma-separated classes such as `"[x1],[x1],[x2]"`,
/// as canonical JSON. `witness` may be null; when given, `samples`
/// indeterminacy representatives are paired against it.
///
/// # Safety
/// `space` must be live; strings must be nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_massey(
    space: *const CdgaLabSpace,
    classes: *const c_char,
    witness: *const c_char,
    samples: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> CdgaLabStatus {
    guard(|| {
        let s = space_ref(space)?;
        let r = massey_report(
            &s.space,
            text(classes, "classes")?,
            optional_text(witness, "witness")?,
            samples,
            seed,
        )?;
        emit_json(out, &r.json)
    })
}

/// Formality report as canonical JSON. `up_to` of zero searches every
/// degree.
///
/// # Safety
/// `space` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_formality(
    space: *const CdgaLabSpace,
    up_to: u32,
    out: *mut *mut c_char,
) -> CdgaLabStatus {
    guard(|| {
        let s = space_ref(space)?;
        let r = formality_json(&s.model.cdga, (up_to > 0).then_some(up_to))?;
        emit_json(out, &r.json)
    })
}

/// Fixed-point count of a lattice model given by catalog name or JSON text,
/// over the window of the given radius.
///
/// # Safety
/// `source` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_fixed_points(
    source: *const c_char,
    radius: i64,
    out: *mut *mut c_char,
) -> CdgaLabStatus {
    guard(|| {
        let src = text(source, "source")?;
        let model: LatticeModel = if src.trim_start().starts_with('{') {
            match parse_input(src)? {
                InputFile::Lattice(m) => m,
                _ => return Err(Error::Parse("expected a lattice model".into()).into()),
            }
        } else {
            catalog::lookup(src)?
                .lattice
                .ok_or_else(|| Error::Parse(format!("model `{src}` has no lattice")))?
        };
        let r = count_fixed_points(
            &model,
            Window {
                radius,
                ..Window::default()
            },
        )?;
        emit_json(out, &serde_json::to_value(&r).map_err(Error::from)?)
    })
}

/// Runs the isotopy verification and returns its report as canonical JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdga_lab_isotopy_verify(
    samples: usize,
    shell_samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> CdgaLabStatus {
    guard(|| {
        if samples == 0 {
            return Err(Error::Parse("samples must be positive".into()).into());
        }
        let r = isotopy_verify(samples, shell_samples, seed)?;
        emit_json(out, &serde_json::to_value(&r).map_err(Error::from)?)
    })
}
