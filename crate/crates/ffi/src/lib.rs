//! C interface to the templater library.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every fallible call returns a
//! [`TemplaterStatus`]; on failure the message is available from
//! [`templater_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use templater::lammps::{parse_data_file, SystemTopology};
use templater::similarity::ScoringWeights;
use templater::{run_pipeline, DotStage, Error, PipelineConfig, PipelineRun};

/// Outcome of a call. Codes 3 and up match the exit codes of the
/// `templater` binary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplaterStatus {
    Ok = 0,
    InvalidArgument = 1,
    Panic = 2,
    Io = 3,
    Parse = 4,
    Config = 5,
    Graph = 6,
    NoCommonSubgraph = 7,
    BudgetExceeded = 8,
    NoReactionDetected = 9,
    UnsupportedReaction = 10,
    InconsistentPruning = 11,
    InvalidMap = 12,
    UnknownStage = 13,
}

impl TemplaterStatus {
    fn of(e: &Error) -> Self {
        use TemplaterStatus::*;
        match e.exit_code() {
            3 => Io,
            4 => Parse,
            5 => Config,
            6 => Graph,
            7 => NoCommonSubgraph,
            8 => BudgetExceeded,
            9 => NoReactionDetected,
            10 => UnsupportedReaction,
            11 => InconsistentPruning,
            12 => InvalidMap,
            13 => UnknownStage,
            _ => Panic,
        }
    }
}

/// Text outputs of a finished run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplaterOutput {
    PreTemplate = 0,
    PostTemplate = 1,
    MapFile = 2,
    ReportText = 3,
    ReportJson = 4,
    /// Empty when every atom was placed before the similarity stage.
    SimilarityCsv = 5,
    DotReactants = 6,
    DotProducts = 7,
    DotMapped = 8,
}

/// Run settings. Start from [`templater_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemplaterConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub iterations: u32,
    pub cutoff: u32,
    pub budget: u64,
    pub hydrogen_tolerance: f64,
    pub centrality_weight: f64,
}

impl From<PipelineConfig> for TemplaterConfig {
    fn from(c: PipelineConfig) -> Self {
        TemplaterConfig {
            alpha: c.weights.alpha,
            beta: c.weights.beta,
            gamma: c.weights.gamma,
            iterations: c.iterations as u32,
            cutoff: c.cutoff as u32,
            budget: c.budget,
            hydrogen_tolerance: c.hydrogen_tolerance,
            centrality_weight: c.centrality_weight,
        }
    }
}

impl TemplaterConfig {
    fn to_pipeline(self) -> Result<PipelineConfig, Error> {
        Ok(PipelineConfig {
            weights: ScoringWeights::new(self.alpha, self.beta, self.gamma)?,
            iterations: self.iterations as usize,
            cutoff: self.cutoff as usize,
            budget: self.budget,
            hydrogen_tolerance: self.hydrogen_tolerance,
            centrality_weight: self.centrality_weight,
        })
    }
}

/// A parsed LAMMPS data file.
pub struct TemplaterTopology(SystemTopology);

/// A finished run.
pub struct TemplaterResult(PipelineRun);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(status: TemplaterStatus, message: impl Into<String>) -> TemplaterStatus {
    set_last_error(message.into());
    status
}

/// Runs `body`, turning errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), (TemplaterStatus, String)>) -> TemplaterStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TemplaterStatus::Ok,
        Ok(Err((status, message))) => fail(status, message),
        Err(_) => fail(TemplaterStatus::Panic, "internal error"),
    }
}

fn from_error(e: Error) -> (TemplaterStatus, String) {
    (TemplaterStatus::of(&e), e.to_string())
}

fn invalid(what: &str) -> (TemplaterStatus, String) {
    (TemplaterStatus::InvalidArgument, what.to_string())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn templater_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn templater_config_default() -> TemplaterConfig {
    PipelineConfig::default().into()
}

/// Parses the text of a LAMMPS data file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn templater_topology_parse(
    text: *const c_char,
    out: *mut *mut TemplaterTopology,
) -> TemplaterStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(invalid("null argument"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| invalid("input is not UTF-8"))?;
        let topo = parse_data_file(text).map_err(|e| (TemplaterStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(TemplaterTopology(topo)));
        Ok(())
    })
}

/// Number of atoms, 0 for NULL.
///
/// # Safety
/// `topology` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn templater_topology_atom_count(topology: *const TemplaterTopology) -> usize {
    topology.as_ref().map_or(0, |t| t.0.atoms.len())
}

/// # Safety
/// `topology` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn templater_topology_free(topology: *mut TemplaterTopology) {
    if !topology.is_null() {
        drop(Box::from_raw(topology));
    }
}

unsafe fn collect(
    list: *const *const TemplaterTopology,
    len: usize,
) -> Result<Vec<SystemTopology>, (TemplaterStatus, String)> {
    if len == 0 {
        return Ok(vec![]);
    }
    if list.is_null() {
        return Err(invalid("null topology list"));
    }
    std::slice::from_raw_parts(list, len)
        .iter()
        .map(|&t| {
            t.as_ref()
                .map(|t| t.0.clone())
                .ok_or_else(|| invalid("null topology handle"))
        })
        .collect()
}

/// Maps reactants onto products and builds the templates. `config` may be
/// NULL for defaults.
///
/// # Safety
/// `reactants` and `products` must point to arrays of live handles of the
/// given lengths, `config` must be NULL or valid, `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn templater_run(
    reactants: *const *const TemplaterTopology,
    reactant_count: usize,
    products: *const *const TemplaterTopology,
    product_count: usize,
    config: *const TemplaterConfig,
    out: *mut *mut TemplaterResult,
) -> TemplaterStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let reactants = collect(reactants, reactant_count)?;
        let products = collect(products, product_count)?;
        let config = match config.as_ref() {
            Some(c) => c.to_pipeline().map_err(from_error)?,
            None => PipelineConfig::default(),
        };
        let run = run_pipeline(&reactants, &products, &config).map_err(from_error)?;
        *out = Box::into_raw(Box::new(TemplaterResult(run)));
        Ok(())
    })
}

/// Copies one output into a new string, released with
/// [`templater_string_free`].
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn templater_result_output(
    result: *const TemplaterResult,
    which: TemplaterOutput,
    out: *mut *mut c_char,
) -> TemplaterStatus {
    guard(|| {
        let (Some(run), false) = (result.as_ref(), out.is_null()) else {
            return Err(invalid("null argument"));
        };
        let run = &run.0;
        let text = match which {
            TemplaterOutput::PreTemplate => run.pre_template(),
            TemplaterOutput::PostTemplate => run.post_template(),
            TemplaterOutput::MapFile => run.map_file(),
            TemplaterOutput::ReportText => run.report_text(),
            TemplaterOutput::ReportJson => run.report_json(),
            TemplaterOutput::SimilarityCsv => run.similarity_csv().unwrap_or_default(),
            TemplaterOutput::DotReactants => run.dot(DotStage::Reactants),
            TemplaterOutput::DotProducts => run.dot(DotStage::Products),
            TemplaterOutput::DotMapped => run.dot(DotStage::Mapped),
        };
        let c = CString::new(text).map_err(|_| invalid("output contains a NUL byte"))?;
        *out = c.into_raw();
        Ok(())
    })
}

/// Writes the two initiator atoms as 1-based global reactant ids.
///
/// # Safety
/// `result` must be a live handle and `out` must hold two elements.
#[no_mangle]
pub unsafe extern "C" fn templater_result_initiators(result: *const TemplaterResult, out: *mut u64) -> TemplaterStatus {
    guard(|| {
        let (Some(run), false) = (result.as_ref(), out.is_null()) else {
            return Err(invalid("null argument"));
        };
        for (i, v) in run.0.report.initiators.iter().enumerate() {
            *out.add(i) = v.0 as u64 + 1;
        }
        Ok(())
    })
}

/// # Safety
/// `result` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn templater_result_free(result: *mut TemplaterResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn templater_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
