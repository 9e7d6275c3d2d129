//! C ABI for `hft-vertex`.
//!
//! A computation returns an opaque [`HftSeries`] handle. Strings handed out
//! by this library are owned by the caller and released with
//! [`hft_string_free`]. On a non-OK status, [`hft_last_error`] describes the
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hft_vertex::cli::{cmd_compute, OutputFormat, RunConfig, RunReport, MAX_RANK};
use hft_vertex::localization::LocalizationError;
use hft_vertex::vertex::{BetaTwist, EdgeSigns, PipelineOptions};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HftStatus {
    Ok = 0,
    InvalidArgument = 2,
    /// The pipeline failed: a non-finite character, a fixed part, or no
    /// generic specialization within the retry budget.
    Numeric = 3,
    NullPointer = 4,
    Panic = 5,
}

/// Convention switches, mirroring the CLI flags.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HftOptions {
    pub include_edge: bool,
    /// 0 = symmetric, 1 = transported.
    pub beta_twist: u32,
    /// 0 = Serre-dual, 1 = printed.
    pub edge_signs: u32,
}

/// A computed series with its closed-form comparison.
pub struct HftSeries {
    report: RunReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn guard(f: impl FnOnce() -> HftStatus) -> HftStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            HftStatus::Panic
        }
    }
}

fn to_c_string(s: &str) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Default options: no edge remainder, symmetric twist, Serre-dual signs.
#[no_mangle]
pub extern "C" fn hft_options_default() -> HftOptions {
    HftOptions {
        include_edge: false,
        beta_twist: 0,
        edge_signs: 0,
    }
}

/// Computes the vertex series up to `q^max_order`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
/// `options` may be null for the defaults.
#[no_mangle]
pub unsafe extern "C" fn hft_series_compute(
    rank: u32,
    twist: u32,
    max_order: u32,
    spec_seed: u64,
    options: *const HftOptions,
    out: *mut *mut HftSeries,
) -> HftStatus {
    guard(|| {
        if out.is_null() {
            set_error("output pointer is null");
            return HftStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let o = if options.is_null() {
            hft_options_default()
        } else {
            *options
        };
        if rank == 0 || rank as usize > MAX_RANK {
            set_error(format!("rank must be between 1 and {MAX_RANK}"));
            return HftStatus::InvalidArgument;
        }
        let opts = PipelineOptions::default()
            .with_edge(o.include_edge)
            .with_beta_twist(match o.beta_twist {
                0 => BetaTwist::Symmetric,
                1 => BetaTwist::Transported,
                _ => {
                    set_error("beta_twist must be 0 or 1");
                    return HftStatus::InvalidArgument;
                }
            })
            .with_edge_signs(match o.edge_signs {
                0 => EdgeSigns::SerreDual,
                1 => EdgeSigns::Printed,
                _ => {
                    set_error("edge_signs must be 0 or 1");
                    return HftStatus::InvalidArgument;
                }
            });
        let config = RunConfig {
            rank: rank as usize,
            twist,
            max_order,
            spec_seed,
            output_format: OutputFormat::Json,
            include_edge: o.include_edge,
            diagnostic: false,
            contributions: false,
            timing: false,
            opts,
        };
        match cmd_compute(&config) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(HftSeries { report }));
                HftStatus::Ok
            }
            Err(e @ LocalizationError::RankMismatch { .. }) => {
                set_error(e.to_string());
                HftStatus::InvalidArgument
            }
            Err(e) => {
                set_error(e.to_string());
                HftStatus::Numeric
            }
        }
    })
}

/// Number of coefficients (`max_order + 1`), or 0 for a null handle.
///
/// # Safety
/// `series` must be null or a handle from [`hft_series_compute`].
#[no_mangle]
pub unsafe extern "C" fn hft_series_len(series: *const HftSeries) -> usize {
    series.as_ref().map_or(0, |s| s.report.coefficients.len())
}

/// Coefficient of `q^k` as `"p/q"` (or `"p"`); null if out of range.
///
/// # Safety
/// `series` must be null or a handle from [`hft_series_compute`].
#[no_mangle]
pub unsafe extern "C" fn hft_series_coefficient(series: *const HftSeries, k: usize) -> *mut c_char {
    series
        .as_ref()
        .and_then(|s| s.report.coefficients.get(k))
        .map_or(ptr::null_mut(), |c| to_c_string(c))
}

/// Closed-form coefficient of `q^k`; null if out of range.
///
/// # Safety
/// `series` must be null or a handle from [`hft_series_compute`].
#[no_mangle]
pub unsafe extern "C" fn hft_series_closed_form(series: *const HftSeries, k: usize) -> *mut c_char {
    series
        .as_ref()
        .and_then(|s| s.report.closed_form.get(k))
        .map_or(ptr::null_mut(), |c| to_c_string(c))
}

/// Whether every coefficient equals the closed form.
///
/// # Safety
/// `series` must be null or a handle from [`hft_series_compute`].
#[no_mangle]
pub unsafe extern "C" fn hft_series_matches_closed_form(series: *const HftSeries) -> bool {
    series.as_ref().is_some_and(|s| s.report.all_match())
}

/// The full report in the CLI's JSON schema.
///
/// # Safety
/// `series` must be null or a handle from [`hft_series_compute`].
#[no_mangle]
pub unsafe extern "C" fn hft_series_report_json(series: *const HftSeries) -> *mut c_char {
    match series.as_ref() {
        Some(s) => match serde_json::to_string(&s.report) {
            Ok(text) => to_c_string(&text),
            Err(e) => {
                set_error(e.to_string());
                ptr::null_mut()
            }
        },
        None => {
            set_error("series handle is null");
            ptr::null_mut()
        }
    }
}

/// Releases a handle. Null is accepted.
///
/// # Safety
/// `series` must be null or a handle from [`hft_series_compute`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn hft_series_free(series: *mut HftSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread. Borrowed: valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn hft_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
