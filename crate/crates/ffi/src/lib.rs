//! C interface to the wearhash tables.
//!
//! Tables are opaque `WhTable` handles created with [`wh_table_new`] and
//! released with [`wh_table_free`]. Keys and values are `uint64_t`. Every
//! fallible call returns a [`WhStatus`]; results come back through out
//! pointers. Panics never cross the boundary and surface as
//! `WH_STATUS_PANIC`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wearhash::harness::{build_table, Algo, ExperimentConfig};
use wearhash::{InsertError, InsertRule, WearDictionary, DEFAULT_MAX_KICKS};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhStatus {
    Ok = 0,
    NotFound = 1,
    DuplicateKey = 2,
    /// The displacement chain ran out of kicks; some item is now homeless.
    InsertionFailed = 3,
    TableFull = 4,
    NullPointer = 5,
    InvalidArgument = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhAlgo {
    WearCuckoo = 0,
    StdCuckoo = 1,
    LinearProbing = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhRule {
    /// Random empty choice first, otherwise displace the least-worn occupant.
    Sec3 = 0,
    /// Always the least-worn choice.
    Sec2 = 1,
}

/// Table construction parameters. Start from [`wh_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct WhOptions {
    pub algo: WhAlgo,
    pub capacity: u64,
    /// Hash choices per key; ignored by linear probing.
    pub d: u32,
    pub seed: u64,
    pub max_kicks: u64,
    pub wear_on_delete: bool,
    pub rule: WhRule,
    pub fast_forward: bool,
}

/// What an insertion did.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WhOutcome {
    pub writes_performed: u64,
    pub chain_length: u64,
    pub failed: bool,
    /// Key left without a cell when the status is `WH_STATUS_INSERTION_FAILED`.
    pub homeless_key: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WhStats {
    pub max_wear: u32,
    pub avg_wear: f64,
    pub total_wear: u64,
    pub len: u64,
    pub capacity: u64,
}

/// Opaque table handle.
pub struct WhTable {
    inner: Box<dyn WearDictionary<u64> + Send>,
}

fn guard<F: FnOnce() -> WhStatus>(f: F) -> WhStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(WhStatus::Panic)
}

unsafe fn table_ref<'a>(table: *const WhTable) -> Option<&'a WhTable> {
    table.as_ref()
}

unsafe fn table_mut<'a>(table: *mut WhTable) -> Option<&'a mut WhTable> {
    table.as_mut()
}

#[no_mangle]
pub extern "C" fn wh_options_default() -> WhOptions {
    WhOptions {
        algo: WhAlgo::WearCuckoo,
        capacity: 1024,
        d: 3,
        seed: 1,
        max_kicks: DEFAULT_MAX_KICKS as u64,
        wear_on_delete: false,
        rule: WhRule::Sec3,
        fast_forward: true,
    }
}

fn to_config(o: &WhOptions) -> Option<ExperimentConfig> {
    Some(ExperimentConfig {
        algo: match o.algo {
            WhAlgo::WearCuckoo => Algo::WearCuckoo,
            WhAlgo::StdCuckoo => Algo::StdCuckoo,
            WhAlgo::LinearProbing => Algo::LinearProbing,
        },
        capacity: usize::try_from(o.capacity).ok()?,
        d: o.d as usize,
        seed: o.seed,
        max_kicks: usize::try_from(o.max_kicks).ok()?,
        wear_on_delete: o.wear_on_delete,
        rule: match o.rule {
            WhRule::Sec3 => InsertRule::Sec3,
            WhRule::Sec2 => InsertRule::Sec2,
        },
        fast_forward: o.fast_forward,
        ..ExperimentConfig::default()
    })
}

/// Creates a table. On success `*out` owns a handle that must be passed to
/// [`wh_table_free`].
///
/// # Safety
/// `options` must be null or point to a valid `WhOptions`; `out` must be null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn wh_table_new(
    options: *const WhOptions,
    out: *mut *mut WhTable,
) -> WhStatus {
    guard(|| {
        if options.is_null() || out.is_null() {
            return WhStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let Some(config) = to_config(&*options) else {
            return WhStatus::InvalidArgument;
        };
        match build_table::<u64>(&config) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(WhTable { inner }));
                WhStatus::Ok
            }
            Err(_) => WhStatus::InvalidArgument,
        }
    })
}

/// # Safety
/// `table` must be null or a handle from [`wh_table_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wh_table_free(table: *mut WhTable) {
    if !table.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(table))));
    }
}

/// Inserts `key`. `out` may be null.
///
/// # Safety
/// `table` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn wh_table_insert(
    table: *mut WhTable,
    key: u64,
    value: u64,
    out: *mut WhOutcome,
) -> WhStatus {
    guard(|| {
        let Some(t) = table_mut(table) else {
            return WhStatus::NullPointer;
        };
        let (status, outcome) = match t.inner.insert(key, value) {
            Ok(o) => (
                WhStatus::Ok,
                WhOutcome {
                    writes_performed: o.writes_performed,
                    chain_length: o.chain_length,
                    failed: false,
                    homeless_key: 0,
                },
            ),
            Err(InsertError::DuplicateKey { .. }) => (WhStatus::DuplicateKey, WhOutcome::default()),
            Err(InsertError::TableFull { .. }) => (WhStatus::TableFull, WhOutcome::default()),
            Err(InsertError::InsertionFailed { key, outcome, .. }) => (
                WhStatus::InsertionFailed,
                WhOutcome {
                    writes_performed: outcome.writes_performed,
                    chain_length: outcome.chain_length,
                    failed: true,
                    homeless_key: key,
                },
            ),
        };
        if !out.is_null() {
            *out = outcome;
        }
        status
    })
}

/// Looks up `key`, writing its value to `*value` when found.
///
/// # Safety
/// `table` must be a live handle; `value` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn wh_table_lookup(
    table: *const WhTable,
    key: u64,
    value: *mut u64,
) -> WhStatus {
    guard(|| {
        let Some(t) = table_ref(table) else {
            return WhStatus::NullPointer;
        };
        match t.inner.get(key) {
            Some(v) => {
                if !value.is_null() {
                    *value = *v;
                }
                WhStatus::Ok
            }
            None => WhStatus::NotFound,
        }
    })
}

/// Removes `key`, writing its value to `*value` when found.
///
/// # Safety
/// `table` must be a live handle; `value` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn wh_table_remove(
    table: *mut WhTable,
    key: u64,
    value: *mut u64,
) -> WhStatus {
    guard(|| {
        let Some(t) = table_mut(table) else {
            return WhStatus::NullPointer;
        };
        match t.inner.remove(key) {
            Some(v) => {
                if !value.is_null() {
                    *value = v;
                }
                WhStatus::Ok
            }
            None => WhStatus::NotFound,
        }
    })
}

/// Number of stored items, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wh_table_len(table: *const WhTable) -> u64 {
    table_ref(table).map_or(0, |t| t.inner.len() as u64)
}

/// Number of cells, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wh_table_capacity(table: *const WhTable) -> u64 {
    table_ref(table).map_or(0, |t| t.inner.capacity() as u64)
}

/// Copies per-cell wear counters into `buf`. `*written` receives the number
/// of cells; if `len` is smaller than that, nothing is copied and the status
/// is `WH_STATUS_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `table` must be a live handle; `buf` must be valid for `len` writes (it
/// may be null when `len` is 0); `written` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn wh_table_wear(
    table: *const WhTable,
    buf: *mut u32,
    len: usize,
    written: *mut usize,
) -> WhStatus {
    guard(|| {
        let Some(t) = table_ref(table) else {
            return WhStatus::NullPointer;
        };
        let cells = t.inner.cells();
        if !written.is_null() {
            *written = cells.len();
        }
        if len < cells.len() {
            return WhStatus::BufferTooSmall;
        }
        if buf.is_null() {
            return if cells.is_empty() {
                WhStatus::Ok
            } else {
                WhStatus::NullPointer
            };
        }
        let dst = std::slice::from_raw_parts_mut(buf, cells.len());
        for (d, c) in dst.iter_mut().zip(cells) {
            *d = c.wear();
        }
        WhStatus::Ok
    })
}

/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wh_table_stats(table: *const WhTable, out: *mut WhStats) -> WhStatus {
    guard(|| {
        let Some(t) = table_ref(table) else {
            return WhStatus::NullPointer;
        };
        if out.is_null() {
            return WhStatus::NullPointer;
        }
        let cells = t.inner.cells();
        let max_wear = cells.iter().map(|c| c.wear()).max().unwrap_or(0);
        let total_wear = t.inner.total_wear();
        *out = WhStats {
            max_wear,
            avg_wear: if cells.is_empty() {
                0.0
            } else {
                total_wear as f64 / cells.len() as f64
            },
            total_wear,
            len: t.inner.len() as u64,
            capacity: cells.len() as u64,
        };
        WhStatus::Ok
    })
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn wh_status_str(status: WhStatus) -> *const c_char {
    let s: &'static CStr = match status {
        WhStatus::Ok => c"ok",
        WhStatus::NotFound => c"key not found",
        WhStatus::DuplicateKey => c"key already present",
        WhStatus::InsertionFailed => c"displacement chain exceeded max_kicks",
        WhStatus::TableFull => c"table is full",
        WhStatus::NullPointer => c"null pointer argument",
        WhStatus::InvalidArgument => c"invalid argument",
        WhStatus::BufferTooSmall => c"buffer too small",
        WhStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Library version, NUL-terminated.
#[no_mangle]
pub extern "C" fn wh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
