//! C ABI for `delcheck`.
//!
//! Models and formulas are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a [`DelStatus`]; on a
//! negative code, [`del_last_error`] describes the failure on the calling
//! thread. Strings returned to the caller are freed with
//! [`del_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use delcheck::adversary::{Adversary, AdversaryJson};
use delcheck::complex::{ComplexJson, FacetId};
use delcheck::logic::{parse_formula, Evaluator, Formula, FormulaFactory, SimplicialModel, Verdict};
use delcheck::obstruction::{
    adversary_obstruction, binary_consensus_obstruction, nishida_obstruction, verify_obstruction,
    DEFAULT_COUNTEREXAMPLE_CAP,
};
use delcheck::solvability::{find_morphism, SolvabilityStatus};
use delcheck::Error;

/// Return codes. Zero and positive values are verdicts, negative values
/// are errors.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DelStatus {
    Ok = 0,
    /// Negative verdict: counterexample found, not an obstruction, or
    /// no morphism exists.
    No = 1,
    /// The search budget ran out.
    Limit = 3,
    NullArgument = -1,
    InvalidUtf8 = -2,
    Parse = -3,
    Spec = -4,
    Model = -5,
    AgentOutOfRange = -6,
    Budget = -7,
    Json = -8,
    Io = -9,
    Panic = -10,
}

/// Opaque simplicial model.
pub struct DelModel {
    model: SimplicialModel,
}

/// Opaque formula.
pub struct DelFormula {
    formula: Formula,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> DelStatus {
    match err {
        Error::Parse { .. } => DelStatus::Parse,
        Error::Spec(_) | Error::AgreementBound { .. } | Error::NoNontrivialK { .. } => DelStatus::Spec,
        Error::AgentOutOfRange { .. } => DelStatus::AgentOutOfRange,
        Error::ZeroBudget => DelStatus::Budget,
        Error::Json(_) => DelStatus::Json,
        Error::Io(_) => DelStatus::Io,
        _ => DelStatus::Model,
    }
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<DelStatus, (DelStatus, String)>) -> DelStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DelStatus::Panic
        }
    }
}

fn fail(err: Error) -> (DelStatus, String) {
    (status_of(&err), err.to_string())
}

fn null() -> (DelStatus, String) {
    (DelStatus::NullArgument, "null argument".to_string())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (DelStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| (DelStatus::InvalidUtf8, "string is not UTF-8".to_string()))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, (DelStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), (DelStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn del_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn del_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a model from a spec such as `"I[is]"`, `"sa:1"` or `"initial"`.
/// `inputs` may be null to use the default value set; `k` of 0 means
/// unset.
///
/// # Safety
/// `spec` must be a NUL-terminated string, `inputs` must point to
/// `inputs_len` values when non-null, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn del_model_build(
    spec: *const c_char,
    n: u32,
    inputs: *const i64,
    inputs_len: usize,
    k: u32,
    out: *mut *mut DelModel,
) -> DelStatus {
    guard(|| {
        let spec = str_arg(spec)?;
        let values = if inputs.is_null() { None } else { Some(std::slice::from_raw_parts(inputs, inputs_len)) };
        let k = (k > 0).then_some(k as usize);
        let model = delcheck::cli::model_from_spec(spec, n as usize, values, k).map_err(fail)?;
        put(out, Box::into_raw(Box::new(DelModel { model })))?;
        Ok(DelStatus::Ok)
    })
}

/// Reads a model from its JSON export.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn del_model_from_json(json: *const c_char, out: *mut *mut DelModel) -> DelStatus {
    guard(|| {
        let text = str_arg(json)?;
        let parsed: ComplexJson = serde_json::from_str(text).map_err(|e| fail(e.into()))?;
        let model = SimplicialModel::from_json(&parsed).map_err(fail)?;
        put(out, Box::into_raw(Box::new(DelModel { model })))?;
        Ok(DelStatus::Ok)
    })
}

/// Writes the model JSON to `*out`; free it with [`del_string_free`].
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn del_model_to_json(model: *const DelModel, out: *mut *mut c_char) -> DelStatus {
    guard(|| {
        let m = ref_arg(model)?;
        let text = serde_json::to_string(&m.model.to_json()).map_err(|e| fail(e.into()))?;
        put(out, owned_string(text))?;
        Ok(DelStatus::Ok)
    })
}

/// Number of facets, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn del_model_facet_count(model: *const DelModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.facet_count())
}

/// Dimension `n` of the model, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn del_model_dim(model: *const DelModel) -> u32 {
    model.as_ref().map_or(0, |m| m.model.dim() as u32)
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn del_model_free(model: *mut DelModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Parses a formula in the text grammar.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn del_formula_parse(text: *const c_char, out: *mut *mut DelFormula) -> DelStatus {
    guard(|| {
        let text = str_arg(text)?;
        let formula = parse_formula(text, &mut FormulaFactory::new()).map_err(fail)?;
        put(out, Box::into_raw(Box::new(DelFormula { formula })))?;
        Ok(DelStatus::Ok)
    })
}

/// Generates an obstruction formula: `"bc"`, `"nishida:k"` or
/// `"adversary"`. The adversary generator reads `adversary_json` (same
/// format as adversary files) or uses the wait-free adversary when it is
/// null.
///
/// # Safety
/// `generator` must be a NUL-terminated string, `adversary_json` null or
/// NUL-terminated, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn del_formula_generate(
    generator: *const c_char,
    n: u32,
    adversary_json: *const c_char,
    out: *mut *mut DelFormula,
) -> DelStatus {
    guard(|| {
        let generator = str_arg(generator)?;
        let n = n as usize;
        let mut f = FormulaFactory::new();
        let formula = match generator {
            "bc" => binary_consensus_obstruction(n, &mut f),
            "adversary" => {
                let adv = if adversary_json.is_null() {
                    Adversary::wait_free(n)
                } else {
                    let json: AdversaryJson =
                        serde_json::from_str(str_arg(adversary_json)?).map_err(|e| fail(e.into()))?;
                    Adversary::from_json(&json).map_err(fail)?
                };
                adversary_obstruction(&adv, &mut f).map_err(fail)?
            }
            other => {
                let k = other
                    .strip_prefix("nishida:")
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| fail(Error::Spec(format!("unknown generator `{other}`"))))?;
                nishida_obstruction(n, k, &mut f).map_err(fail)?
            }
        };
        put(out, Box::into_raw(Box::new(DelFormula { formula })))?;
        Ok(DelStatus::Ok)
    })
}

/// Writes the formula text to `*out`; free it with [`del_string_free`].
///
/// # Safety
/// `formula` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn del_formula_to_string(formula: *const DelFormula, out: *mut *mut c_char) -> DelStatus {
    guard(|| {
        let f = ref_arg(formula)?;
        put(out, owned_string(f.formula.to_string()))?;
        Ok(DelStatus::Ok)
    })
}

/// 1 if the formula is positive, 0 otherwise (including null).
///
/// # Safety
/// `formula` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn del_formula_is_positive(formula: *const DelFormula) -> i32 {
    formula.as_ref().map_or(0, |f| f.formula.is_positive() as i32)
}

/// # Safety
/// `formula` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn del_formula_free(formula: *mut DelFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// Validity check. Returns `Ok` if the formula holds at every facet,
/// otherwise `No` with the first counterexample facet id written to
/// `counterexample` (which may be null).
///
/// # Safety
/// Handles must be live; `counterexample` null or writable.
#[no_mangle]
pub unsafe extern "C" fn del_check(
    model: *const DelModel,
    formula: *const DelFormula,
    counterexample: *mut u32,
) -> DelStatus {
    guard(|| {
        let m = ref_arg(model)?;
        let f = ref_arg(formula)?;
        match Evaluator::new(&m.model).valid(&f.formula).map_err(fail)? {
            Verdict::Valid => Ok(DelStatus::Ok),
            Verdict::Counterexample(x) => {
                if !counterexample.is_null() {
                    counterexample.write(x.0);
                }
                Ok(DelStatus::No)
            }
        }
    })
}

/// Satisfaction at one facet: `Ok` if it holds, `No` if not.
///
/// # Safety
/// Handles must be live.
#[no_mangle]
pub unsafe extern "C" fn del_satisfies(model: *const DelModel, facet: u32, formula: *const DelFormula) -> DelStatus {
    guard(|| {
        let m = ref_arg(model)?;
        let f = ref_arg(formula)?;
        if facet as usize >= m.model.facet_count() {
            return Err(fail(Error::UnknownFacet));
        }
        let holds = Evaluator::new(&m.model).satisfies(FacetId(facet), &f.formula).map_err(fail)?;
        Ok(if holds { DelStatus::Ok } else { DelStatus::No })
    })
}

/// Obstruction check: `Ok` if the formula is positive, valid in `task`
/// and falsified in `protocol`; `No` otherwise.
///
/// # Safety
/// Handles must be live.
#[no_mangle]
pub unsafe extern "C" fn del_verify_obstruction(
    task: *const DelModel,
    protocol: *const DelModel,
    formula: *const DelFormula,
) -> DelStatus {
    guard(|| {
        let t = ref_arg(task)?;
        let p = ref_arg(protocol)?;
        let f = ref_arg(formula)?;
        let report = verify_obstruction(&t.model, &p.model, &f.formula, DEFAULT_COUNTEREXAMPLE_CAP).map_err(fail)?;
        Ok(if report.is_obstruction { DelStatus::Ok } else { DelStatus::No })
    })
}

/// Morphism search from `protocol` to `task`: `Ok` when solvable, `No`
/// when provably unsolvable, `Limit` when `budget` nodes were explored.
/// The node count is written to `explored` when non-null.
///
/// # Safety
/// Handles must be live; `explored` null or writable.
#[no_mangle]
pub unsafe extern "C" fn del_solve(
    protocol: *const DelModel,
    task: *const DelModel,
    budget: u64,
    explored: *mut u64,
) -> DelStatus {
    guard(|| {
        let p = ref_arg(protocol)?;
        let t = ref_arg(task)?;
        let result = find_morphism(&p.model, &t.model, budget).map_err(fail)?;
        if !explored.is_null() {
            explored.write(result.explored);
        }
        Ok(match result.status {
            SolvabilityStatus::Solvable(_) => DelStatus::Ok,
            SolvabilityStatus::Unsolvable => DelStatus::No,
            SolvabilityStatus::ResourceLimit => DelStatus::Limit,
        })
    })
}
