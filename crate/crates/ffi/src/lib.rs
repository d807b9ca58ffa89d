//! C ABI for the `motzkin` crate.
//!
//! Conventions:
//!
//! - every fallible function returns an [`MzStatus`] and writes its result
//!   through an out pointer;
//! - heap objects (`MzEngine`, `MzBigNat`, `MzResidueStream`,
//!   `MzDensityReport`) are opaque handles released with the matching
//!   `*_free` function, which accepts NULL;
//! - panics never cross the boundary; they surface as `MZ_STATUS_PANIC`.
//!
//! The header `include/motzkin.h` is regenerated by cbindgen on every build.

#![allow(clippy::missing_safety_doc)]

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use motzkin::density::{
    closed_density_s, closed_density_sprime, count_set_exact, count_t01_upto, empirical_density,
    ClassSelector, DensityReport, ExactRational,
};
use motzkin::{
    classify_div5, classify_mod3, classify_mod8, is_in_set, is_t01, Ceilings, Div5Form,
    MotzkinEngine, MotzkinError, Mod8Kind, ResidueStream, SetSpec,
};
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ResourceLimit = 3,
    Internal = 4,
    BufferTooSmall = 5,
    UnknownSelector = 6,
    Overflow = 7,
    Panic = 8,
}

impl From<&MotzkinError> for MzStatus {
    fn from(e: &MotzkinError) -> Self {
        match e {
            MotzkinError::ResourceLimit { .. } => MzStatus::ResourceLimit,
            MotzkinError::InexactDivision { .. } => MzStatus::Internal,
            MotzkinError::Domain(_) | MotzkinError::InvalidSpec(_) => MzStatus::InvalidArgument,
            MotzkinError::UnknownSelector(_) => MzStatus::UnknownSelector,
        }
    }
}

fn guard(f: impl FnOnce() -> MzStatus) -> MzStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(MzStatus::Panic)
}

macro_rules! check_null {
    ($($p:expr),+) => {
        $(if $p.is_null() { return MzStatus::NullPointer; })+
    };
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn mz_status_message(status: MzStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        MzStatus::Ok => b"ok\0",
        MzStatus::NullPointer => b"null pointer argument\0",
        MzStatus::InvalidArgument => b"invalid argument\0",
        MzStatus::ResourceLimit => b"engine ceiling exceeded\0",
        MzStatus::Internal => b"internal consistency failure\0",
        MzStatus::BufferTooSmall => b"buffer too small\0",
        MzStatus::UnknownSelector => b"unknown class selector\0",
        MzStatus::Overflow => b"value does not fit the C type\0",
        MzStatus::Panic => b"panic inside motzkin\0",
    };
    msg.as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Engine

pub struct MzEngine(MotzkinEngine);

/// Engine with explicit ceilings; 0 selects the default for that engine.
#[no_mangle]
pub extern "C" fn mz_engine_new(exact_ceiling: u64, modular_ceiling: u64) -> *mut MzEngine {
    let d = Ceilings::default();
    let ceilings = Ceilings {
        exact: if exact_ceiling == 0 { d.exact } else { exact_ceiling },
        modular: if modular_ceiling == 0 { d.modular } else { modular_ceiling },
    };
    Box::into_raw(Box::new(MzEngine(MotzkinEngine::new(ceilings))))
}

/// Engine whose ceilings come from `MOTZKIN_EXACT_CEILING` / `MOTZKIN_MOD_CEILING`.
#[no_mangle]
pub extern "C" fn mz_engine_from_env() -> *mut MzEngine {
    Box::into_raw(Box::new(MzEngine(MotzkinEngine::from_env())))
}

#[no_mangle]
pub unsafe extern "C" fn mz_engine_free(engine: *mut MzEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

pub struct MzBigNat(num_bigint::BigUint);

/// Exact `M_n` from the defining sum.
#[no_mangle]
pub unsafe extern "C" fn mz_motzkin_exact(
    engine: *const MzEngine,
    n: u64,
    out: *mut *mut MzBigNat,
) -> MzStatus {
    check_null!(engine, out);
    guard(|| match (*engine).0.exact(n) {
        Ok(v) => {
            *out = Box::into_raw(Box::new(MzBigNat(v)));
            MzStatus::Ok
        }
        Err(e) => MzStatus::from(&e),
    })
}

/// Writes the decimal expansion plus NUL into `buf`. `needed` (optional)
/// receives the required capacity including the NUL, also on
/// `MZ_STATUS_BUFFER_TOO_SMALL`.
#[no_mangle]
pub unsafe extern "C" fn mz_bignat_to_decimal(
    value: *const MzBigNat,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> MzStatus {
    check_null!(value);
    guard(|| {
        let digits = (*value).0.to_string();
        let required = digits.len() + 1;
        if !needed.is_null() {
            *needed = required;
        }
        if buf.is_null() || capacity < required {
            return MzStatus::BufferTooSmall;
        }
        ptr::copy_nonoverlapping(digits.as_ptr(), buf.cast::<u8>(), digits.len());
        *buf.add(digits.len()) = 0;
        MzStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn mz_bignat_mod(
    value: *const MzBigNat,
    modulus: u64,
    out: *mut u64,
) -> MzStatus {
    check_null!(value, out);
    if modulus == 0 {
        return MzStatus::InvalidArgument;
    }
    guard(|| {
        *out = (&(*value).0 % modulus).to_u64().expect("residue fits");
        MzStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn mz_bignat_free(value: *mut MzBigNat) {
    if !value.is_null() {
        drop(Box::from_raw(value));
    }
}

pub struct MzResidueStream(ResidueStream);

/// `M_n mod modulus` for `n < len` from the convolution recurrence.
#[no_mangle]
pub unsafe extern "C" fn mz_mod_stream(
    engine: *const MzEngine,
    modulus: u64,
    len: u64,
    out: *mut *mut MzResidueStream,
) -> MzStatus {
    check_null!(engine, out);
    guard(|| match (*engine).0.mod_stream(modulus, len) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(MzResidueStream(s)));
            MzStatus::Ok
        }
        Err(e) => MzStatus::from(&e),
    })
}

#[no_mangle]
pub unsafe extern "C" fn mz_residue_stream_len(stream: *const MzResidueStream) -> u64 {
    if stream.is_null() {
        return 0;
    }
    (*stream).0.limit()
}

#[no_mangle]
pub unsafe extern "C" fn mz_residue_stream_modulus(stream: *const MzResidueStream) -> u64 {
    if stream.is_null() {
        return 0;
    }
    (*stream).0.modulus()
}

/// Borrowed pointer to `len` residues, valid until the stream is freed.
#[no_mangle]
pub unsafe extern "C" fn mz_residue_stream_values(stream: *const MzResidueStream) -> *const u64 {
    if stream.is_null() {
        return ptr::null();
    }
    (*stream).0.values().as_ptr()
}

#[no_mangle]
pub unsafe extern "C" fn mz_residue_stream_get(
    stream: *const MzResidueStream,
    index: u64,
    out: *mut u64,
) -> MzStatus {
    check_null!(stream, out);
    match (*stream).0.get(index) {
        Some(v) => {
            *out = v;
            MzStatus::Ok
        }
        None => MzStatus::InvalidArgument,
    }
}

#[no_mangle]
pub unsafe extern "C" fn mz_residue_stream_free(stream: *mut MzResidueStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MzCrossValidation {
    pub consistent: bool,
    /// Meaningful only when `consistent` is false.
    pub first_mismatch: u64,
}

#[no_mangle]
pub unsafe extern "C" fn mz_cross_validate(
    engine: *const MzEngine,
    modulus: u64,
    len: u64,
    out: *mut MzCrossValidation,
) -> MzStatus {
    check_null!(engine, out);
    guard(|| match (*engine).0.cross_validate(modulus, len) {
        Ok(r) => {
            *out = MzCrossValidation {
                consistent: r.is_consistent(),
                first_mismatch: r.first_mismatch.unwrap_or(0),
            };
            MzStatus::Ok
        }
        Err(e) => MzStatus::from(&e),
    })
}

// ---------------------------------------------------------------------------
// Classifiers

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MzMod8Kind {
    Odd = 0,
    Residue4 = 4,
    Residue2 = 2,
    Residue6 = 6,
}

/// `n = (4i + epsilon) 4^(j+1) - delta` when `has_witness`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MzMod8Classification {
    pub kind: MzMod8Kind,
    pub has_witness: bool,
    pub epsilon: u8,
    pub delta: u8,
    pub i: u64,
    pub j: u32,
    pub has_y: bool,
    pub y: u64,
}

#[no_mangle]
pub unsafe extern "C" fn mz_classify_mod8(n: u64, out: *mut MzMod8Classification) -> MzStatus {
    check_null!(out);
    guard(|| {
        let c = classify_mod8(&n);
        let kind = match c.kind {
            Mod8Kind::Odd => MzMod8Kind::Odd,
            Mod8Kind::Residue4 => MzMod8Kind::Residue4,
            Mod8Kind::Residue2 => MzMod8Kind::Residue2,
            Mod8Kind::Residue6 => MzMod8Kind::Residue6,
        };
        let w = c.witness.as_ref();
        *out = MzMod8Classification {
            kind,
            has_witness: w.is_some(),
            epsilon: w.map_or(0, |w| w.epsilon),
            delta: w.map_or(0, |w| w.delta),
            i: w.map_or(0, |w| w.i),
            j: w.map_or(0, |w| w.j),
            has_y: c.y.is_some(),
            y: c.y.unwrap_or(0),
        };
        MzStatus::Ok
    })
}

/// `M_n mod 3`.
#[no_mangle]
pub extern "C" fn mz_classify_mod3(n: u64) -> u8 {
    classify_mod3(&n).value()
}

/// `form` is 0 when `M_n` is not divisible by 5, else 1 to 4; `j >= 1`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MzDiv5Form {
    pub form: u8,
    pub i: u64,
    pub j: u32,
}

#[no_mangle]
pub unsafe extern "C" fn mz_classify_div5(n: u64, out: *mut MzDiv5Form) -> MzStatus {
    check_null!(out);
    guard(|| {
        *out = match classify_div5(&n) {
            Div5Form::NotDivisible => MzDiv5Form::default(),
            Div5Form::Form { form, i, j } => MzDiv5Form { form, i, j },
        };
        MzStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn mz_is_t01(n: u64) -> bool {
    is_t01(&n)
}

/// `{ (q i + r) q^(s j + t) + c : i >= 0, j >= j_min }`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MzSetSpec {
    pub q: u64,
    pub r: u64,
    pub s: u32,
    pub t: u32,
    pub c: i64,
    pub j_min: u32,
}

unsafe fn read_spec(spec: *const MzSetSpec) -> Result<SetSpec, MzStatus> {
    if spec.is_null() {
        return Err(MzStatus::NullPointer);
    }
    let s = *spec;
    SetSpec::new(s.q, s.r, s.s, s.t, s.c, s.j_min).map_err(|e| MzStatus::from(&e))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MzWitness {
    pub found: bool,
    pub i: u64,
    pub j: u32,
}

#[no_mangle]
pub unsafe extern "C" fn mz_is_in_set(
    n: u64,
    spec: *const MzSetSpec,
    out: *mut MzWitness,
) -> MzStatus {
    check_null!(out);
    let spec = match read_spec(spec) {
        Ok(s) => s,
        Err(status) => return status,
    };
    guard(|| {
        *out = match is_in_set(&n, &spec) {
            Some(w) => MzWitness {
                found: true,
                i: w.i,
                j: w.j,
            },
            None => MzWitness::default(),
        };
        MzStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Densities

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MzRational {
    pub numer: u64,
    pub denom: u64,
}

fn to_c_rational(r: &ExactRational) -> Result<MzRational, MzStatus> {
    match (r.numer().to_u64(), r.denom().to_u64()) {
        (Some(numer), Some(denom)) => Ok(MzRational { numer, denom }),
        _ => Err(MzStatus::Overflow),
    }
}

unsafe fn write_rational(r: ExactRational, out: *mut MzRational) -> MzStatus {
    match to_c_rational(&r) {
        Ok(v) => {
            *out = v;
            MzStatus::Ok
        }
        Err(status) => status,
    }
}

#[no_mangle]
pub unsafe extern "C" fn mz_closed_density_s(
    q: u64,
    s: u32,
    t: u32,
    out: *mut MzRational,
) -> MzStatus {
    check_null!(out);
    if q < 2 || s == 0 {
        return MzStatus::InvalidArgument;
    }
    guard(|| write_rational(closed_density_s(q, s, t), out))
}

#[no_mangle]
pub unsafe extern "C" fn mz_closed_density_sprime(
    q: u64,
    s: u32,
    t: u32,
    out: *mut MzRational,
) -> MzStatus {
    check_null!(out);
    if q < 2 || s == 0 {
        return MzStatus::InvalidArgument;
    }
    guard(|| write_rational(closed_density_sprime(q, s, t), out))
}

/// `#{ 0 <= n <= horizon : n in spec }`.
#[no_mangle]
pub unsafe extern "C" fn mz_count_set_exact(
    horizon: u64,
    spec: *const MzSetSpec,
    out: *mut u64,
) -> MzStatus {
    check_null!(out);
    let spec = match read_spec(spec) {
        Ok(s) => s,
        Err(status) => return status,
    };
    guard(|| match u64::try_from(count_set_exact(horizon, &spec)) {
        Ok(v) => {
            *out = v;
            MzStatus::Ok
        }
        Err(_) => MzStatus::Overflow,
    })
}

/// `#{ 0 <= n <= horizon : n in T(01) }`; the count never exceeds `horizon + 1`.
#[no_mangle]
pub extern "C" fn mz_count_t01_upto(horizon: u64) -> u64 {
    count_t01_upto(horizon) as u64
}

pub struct MzDensityReport {
    report: DensityReport,
    label: CString,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MzDensitySummary {
    pub limit: MzRational,
    pub horizon: u64,
    pub observed_count: u64,
    pub observed_ratio: f64,
    pub abs_discrepancy: f64,
    pub has_error_bound: bool,
    pub error_bound: f64,
}

/// Empirical density of the class named by `selector` over `n < horizon`.
/// Selector spellings match the CLI (`even`, `mod8=4`, `div5`, `t01`, ...).
#[no_mangle]
pub unsafe extern "C" fn mz_empirical_density(
    selector: *const c_char,
    horizon: u64,
    out: *mut *mut MzDensityReport,
) -> MzStatus {
    check_null!(selector, out);
    let Ok(raw) = CStr::from_ptr(selector).to_str() else {
        return MzStatus::UnknownSelector;
    };
    guard(|| {
        let sel: ClassSelector = match raw.parse() {
            Ok(s) => s,
            Err(e) => return MzStatus::from(&e),
        };
        match empirical_density(&sel, horizon) {
            Ok(report) => {
                let label = CString::new(report.label.clone()).expect("labels contain no NUL");
                *out = Box::into_raw(Box::new(MzDensityReport { report, label }));
                MzStatus::Ok
            }
            Err(e) => MzStatus::from(&e),
        }
    })
}

/// UTF-8 label, valid until the report is freed.
#[no_mangle]
pub unsafe extern "C" fn mz_density_report_label(report: *const MzDensityReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).label.as_ptr()
}

#[no_mangle]
pub unsafe extern "C" fn mz_density_report_summary(
    report: *const MzDensityReport,
    out: *mut MzDensitySummary,
) -> MzStatus {
    check_null!(report, out);
    let r = &(*report).report;
    let limit = match to_c_rational(&r.limit) {
        Ok(l) => l,
        Err(status) => return status,
    };
    *out = MzDensitySummary {
        limit,
        horizon: r.horizon,
        observed_count: r.observed_count,
        observed_ratio: r.observed_ratio,
        abs_discrepancy: r.abs_discrepancy,
        has_error_bound: r.error_bound.is_some(),
        error_bound: r.error_bound.unwrap_or(0.0),
    };
    MzStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn mz_density_report_free(report: *mut MzDensityReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
