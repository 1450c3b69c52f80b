//! C ABI over the dieudonne engine.
//!
//! Towers and modules are opaque handles released with their `_free`
//! function. Every call returns a [`DdStatus`]; on failure the message is
//! available from [`dd_last_error`] until the next call on the same thread.
//! Strings handed out by the library are released with [`dd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use dieudonne::arith::CoeffTower;
use dieudonne::constructions::{non_rapoport_example, slope_family, superspecial, SuperspecialVariant};
use dieudonne::dieudonne::DModule;
use dieudonne::heckeprobe::run_probe;
use dieudonne::invariants::{newton_point, report, NewtonMethod};
use dieudonne::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    NotPrime = 3,
    InvalidParameter = 4,
    PrecisionPolicy = 5,
    Unsupported = 6,
    PrecisionExhausted = 7,
    VNonIntegral = 8,
    DegenerateDeterminant = 9,
    PairingIncompatible = 10,
    DegeneratePairing = 11,
    DetBudget = 12,
    NotRapoport = 13,
    Inconsistent = 14,
    SizeGuard = 15,
    KeyMismatch = 16,
    Parse = 17,
    Internal = 18,
    Panic = 19,
}

impl From<&Error> for DdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotPrime(_) => DdStatus::NotPrime,
            Error::InvalidParameter(_) => DdStatus::InvalidParameter,
            Error::PrecisionPolicy { .. } => DdStatus::PrecisionPolicy,
            Error::Unsupported(_) => DdStatus::Unsupported,
            Error::PrecisionExhausted(_) => DdStatus::PrecisionExhausted,
            Error::VNonIntegral { .. } => DdStatus::VNonIntegral,
            Error::DegenerateDeterminant { .. } => DdStatus::DegenerateDeterminant,
            Error::PairingIncompatible { .. } => DdStatus::PairingIncompatible,
            Error::DegeneratePairing { .. } => DdStatus::DegeneratePairing,
            Error::DetBudget { .. } => DdStatus::DetBudget,
            Error::NotRapoport => DdStatus::NotRapoport,
            Error::Inconsistent(_) => DdStatus::Inconsistent,
            Error::SizeGuard { .. } => DdStatus::SizeGuard,
            Error::KeyMismatch(_) => DdStatus::KeyMismatch,
            Error::Parse(_) => DdStatus::Parse,
            Error::Internal(_) => DdStatus::Internal,
        }
    }
}

/// Newton point method selector.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub enum DdMethod {
    Auto = 0,
    Fast = 1,
    Oracle = 2,
    Linearized = 3,
}

impl From<DdMethod> for NewtonMethod {
    fn from(m: DdMethod) -> Self {
        match m {
            DdMethod::Auto => NewtonMethod::Auto,
            DdMethod::Fast => NewtonMethod::Fast,
            DdMethod::Oracle => NewtonMethod::Oracle,
            DdMethod::Linearized => NewtonMethod::Linearized,
        }
    }
}

/// Coefficient ring W(F_(p^(f ext)))[pi]/(pi^e - p) at precision N.
pub struct DdTower(Arc<CoeffTower>);

/// A rank-2 Dieudonne module with its tower.
pub struct DdModule(DModule);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(DdStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(DdStatus::from(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DdStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DdStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("panic inside the library");
            DdStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(DdStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(DdStatus::NullPointer, format!("{what} is null")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn module_out(m: DModule, dst: &mut *mut DdModule) {
    *dst = Box::into_raw(Box::new(DdModule(m)));
}

/// Message of the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn dd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out_tower` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_tower_new(p: u64, f: usize, e: usize, ext: usize, n: u32, out_tower: *mut *mut DdTower) -> DdStatus {
    guard(|| {
        let dst = out(out_tower, "out_tower")?;
        let tw = CoeffTower::new(p, f, e, ext, n)?;
        *dst = Box::into_raw(Box::new(DdTower(Arc::new(tw))));
        Ok(())
    })
}

/// # Safety
/// `tower` must come from [`dd_tower_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dd_tower_free(tower: *mut DdTower) {
    if !tower.is_null() {
        drop(Box::from_raw(tower));
    }
}

/// g = e f.
///
/// # Safety
/// `tower` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dd_tower_g(tower: *const DdTower) -> u32 {
    tower.as_ref().map_or(0, |t| t.0.g())
}

/// Module of the explicit family with Newton point s(a).
///
/// # Safety
/// `tower` must be a live handle and `out_module` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_module_slope(tower: *const DdTower, a: u32, out_module: *mut *mut DdModule) -> DdStatus {
    guard(|| {
        let tw = deref(tower, "tower")?;
        let dst = out(out_module, "out_module")?;
        module_out(slope_family(&tw.0, a)?, dst);
        Ok(())
    })
}

/// Superspecial module with per-slot exponents (e1, e2); `rapoport` selects
/// the Rapoport variant.
///
/// # Safety
/// `tower` must be a live handle and `out_module` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_module_superspecial(
    tower: *const DdTower,
    e1: u32,
    e2: u32,
    rapoport: bool,
    out_module: *mut *mut DdModule,
) -> DdStatus {
    guard(|| {
        let tw = deref(tower, "tower")?;
        let dst = out(out_module, "out_module")?;
        let v = if rapoport { SuperspecialVariant::Rapoport } else { SuperspecialVariant::General };
        module_out(superspecial(&tw.0, e1, e2, v)?, dst);
        Ok(())
    })
}

/// The f = 1, e = 2 non-Rapoport example.
///
/// # Safety
/// `tower` must be a live handle and `out_module` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_module_non_rapoport_example(tower: *const DdTower, out_module: *mut *mut DdModule) -> DdStatus {
    guard(|| {
        let tw = deref(tower, "tower")?;
        let dst = out(out_module, "out_module")?;
        module_out(non_rapoport_example(&tw.0)?, dst);
        Ok(())
    })
}

/// Parse a module from its JSON form (the tower travels with it).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_module` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_module_from_json(json: *const c_char, out_module: *mut *mut DdModule) -> DdStatus {
    guard(|| {
        if json.is_null() {
            return Err(Fail(DdStatus::NullPointer, "json is null".into()));
        }
        let dst = out(out_module, "out_module")?;
        let s = CStr::from_ptr(json).to_str().map_err(|e| Fail(DdStatus::InvalidUtf8, e.to_string()))?;
        module_out(DModule::from_json_str(s)?, dst);
        Ok(())
    })
}

/// # Safety
/// `module` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_module_to_json(module: *const DdModule, out_json: *mut *mut c_char) -> DdStatus {
    guard(|| {
        let m = deref(module, "module")?;
        let dst = out(out_json, "out_json")?;
        *dst = to_c(m.0.to_json().to_string());
        Ok(())
    })
}

/// Invariant report (Lie type, a-type, Newton point, flags) as JSON.
///
/// # Safety
/// `module` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_module_invariants(module: *const DdModule, method: DdMethod, out_json: *mut *mut c_char) -> DdStatus {
    guard(|| {
        let m = deref(module, "module")?;
        let dst = out(out_json, "out_json")?;
        let r = report(&m.0, method.into())?;
        *dst = to_c(serde_json::to_string(&r).map_err(|e| Fail(DdStatus::Internal, e.to_string()))?);
        Ok(())
    })
}

/// Twice the Newton index: the Newton point is s(twice / 2).
///
/// # Safety
/// `module` must be a live handle and `out_twice` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_module_newton_twice(module: *const DdModule, method: DdMethod, out_twice: *mut u32) -> DdStatus {
    guard(|| {
        let m = deref(module, "module")?;
        let dst = out(out_twice, "out_twice")?;
        *dst = newton_point(&m.0, method.into())?.twice();
        Ok(())
    })
}

/// # Safety
/// `module` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dd_module_free(module: *mut DdModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Hecke probe report as JSON.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_hecke_probe(p: u64, s: u32, full_grassmannian: bool, size_cap: u64, out_json: *mut *mut c_char) -> DdStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        let r = run_probe(p, s, full_grassmannian, size_cap as u128)?;
        *dst = to_c(serde_json::to_string(&r).map_err(|e| Fail(DdStatus::Internal, e.to_string()))?);
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
