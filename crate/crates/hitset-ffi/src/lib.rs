//! C ABI for the hitset library: opaque handles, integer status codes, and
//! caller-provided buffers. The matching declarations live in
//! `include/hitset.h`.
//!
//! Conventions:
//! - Every fallible function returns an `hs_status` code; results travel
//!   through out-parameters.
//! - Handles are created by `*_new`/`*_build` and released by the matching
//!   `*_free`; `NULL` is accepted by the free functions and rejected (with
//!   `HS_ERR_NULL_ARGUMENT`) everywhere else.
//! - Panics never unwind across the boundary; they surface as
//!   `HS_ERR_INTERNAL`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use hitset::bbd::{validate, BbdTree};
use hitset::error::Error;
use hitset::geometry::{AxisRect, Point};
use hitset::online::HitterState;

/// Status codes mirrored in `include/hitset.h`.
pub const HS_OK: i32 = 0;
pub const HS_ERR_NULL_ARGUMENT: i32 = 1;
pub const HS_ERR_INVALID_INPUT: i32 = 2;
pub const HS_ERR_INFEASIBLE: i32 = 3;
pub const HS_ERR_VALIDATION: i32 = 4;
pub const HS_ERR_BUFFER_TOO_SMALL: i32 = 5;
pub const HS_ERR_INTERNAL: i32 = 6;

/// Opaque tree handle.
pub struct HsTree {
    tree: Arc<BbdTree>,
}

/// Opaque online-hitter handle.
pub struct HsHitter {
    state: HitterState,
}

fn status_of(e: &Error) -> i32 {
    match e {
        Error::InfeasibleObject(_) => HS_ERR_INFEASIBLE,
        _ => HS_ERR_INVALID_INPUT,
    }
}

fn guarded(f: impl FnOnce() -> i32) -> i32 {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(HS_ERR_INTERNAL)
}

/// Builds a tree over `n` points given as interleaved coordinates
/// `xy = [x0, y0, x1, y1, ...]` and stores the handle in `*out`.
///
/// # Safety
/// `xy` must point to `2 * n` readable doubles and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn hs_tree_build(
    xy: *const f64,
    n: usize,
    out: *mut *mut HsTree,
) -> i32 {
    if xy.is_null() || out.is_null() {
        return HS_ERR_NULL_ARGUMENT;
    }
    let coords = std::slice::from_raw_parts(xy, 2 * n);
    guarded(|| {
        let points: Vec<Point> = coords
            .chunks_exact(2)
            .map(|c| Point::new(c[0], c[1]))
            .collect();
        match BbdTree::build(&points) {
            Ok(tree) => {
                *out = Box::into_raw(Box::new(HsTree { tree: Arc::new(tree) }));
                HS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a tree handle. `NULL` is a no-op.
///
/// # Safety
/// `tree` must be a pointer returned by `hs_tree_build` that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn hs_tree_free(tree: *mut HsTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Stores the tree depth in `*out`.
///
/// # Safety
/// `tree` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_tree_depth(tree: *const HsTree, out: *mut usize) -> i32 {
    if tree.is_null() || out.is_null() {
        return HS_ERR_NULL_ARGUMENT;
    }
    *out = (*tree).tree.depth();
    HS_OK
}

/// Stores the node count in `*out`.
///
/// # Safety
/// `tree` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_tree_node_count(tree: *const HsTree, out: *mut usize) -> i32 {
    if tree.is_null() || out.is_null() {
        return HS_ERR_NULL_ARGUMENT;
    }
    *out = (*tree).tree.node_count();
    HS_OK
}

/// Runs the structural validator; `HS_OK` when every check passes,
/// `HS_ERR_VALIDATION` otherwise.
///
/// # Safety
/// `tree` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_tree_validate(tree: *const HsTree) -> i32 {
    if tree.is_null() {
        return HS_ERR_NULL_ARGUMENT;
    }
    guarded(|| {
        if validate(&(*tree).tree).all_pass() {
            HS_OK
        } else {
            HS_ERR_VALIDATION
        }
    })
}

/// Creates an online hitter over the tree and stores the handle in `*out`.
///
/// # Safety
/// `tree` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn hs_hitter_new(tree: *const HsTree, out: *mut *mut HsHitter) -> i32 {
    if tree.is_null() || out.is_null() {
        return HS_ERR_NULL_ARGUMENT;
    }
    let state = HitterState::init((*tree).tree.clone());
    *out = Box::into_raw(Box::new(HsHitter { state }));
    HS_OK
}

/// Releases a hitter handle. `NULL` is a no-op.
///
/// # Safety
/// `hitter` must be a pointer returned by `hs_hitter_new` that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hs_hitter_free(hitter: *mut HsHitter) {
    if !hitter.is_null() {
        drop(Box::from_raw(hitter));
    }
}

/// Processes one axis-aligned rectangle. Returns `HS_ERR_INFEASIBLE` (and
/// leaves the state unchanged) when the rectangle contains no input point.
///
/// # Safety
/// `hitter` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_hitter_process_rect(
    hitter: *mut HsHitter,
    x_lo: f64,
    y_lo: f64,
    x_hi: f64,
    y_hi: f64,
) -> i32 {
    if hitter.is_null() {
        return HS_ERR_NULL_ARGUMENT;
    }
    guarded(|| {
        let rect = match AxisRect::new(x_lo, y_lo, x_hi, y_hi) {
            Ok(r) => r,
            Err(e) => return status_of(&e),
        };
        match (*hitter).state.process(rect) {
            Ok(_) => HS_OK,
            Err(e) => status_of(&e),
        }
    })
}

/// Stores the current hitting-set size in `*out`.
///
/// # Safety
/// `hitter` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_hitter_size(hitter: *const HsHitter, out: *mut usize) -> i32 {
    if hitter.is_null() || out.is_null() {
        return HS_ERR_NULL_ARGUMENT;
    }
    *out = (*hitter).state.hitting_set().len();
    HS_OK
}

/// Copies the hitting set (point indices, insertion order) into `buf` and
/// stores the count in `*written`. Fails with `HS_ERR_BUFFER_TOO_SMALL`
/// when `cap` is insufficient; `hs_hitter_size` gives the needed capacity.
///
/// # Safety
/// `hitter` must be a live handle, `buf` must point to `cap` writable
/// `uint32_t` slots, and `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_hitter_points(
    hitter: *const HsHitter,
    buf: *mut u32,
    cap: usize,
    written: *mut usize,
) -> i32 {
    if hitter.is_null() || buf.is_null() || written.is_null() {
        return HS_ERR_NULL_ARGUMENT;
    }
    let set = (*hitter).state.hitting_set();
    if set.len() > cap {
        return HS_ERR_BUFFER_TOO_SMALL;
    }
    std::ptr::copy_nonoverlapping(set.as_ptr(), buf, set.len());
    *written = set.len();
    HS_OK
}

/// Stores in `*out` the largest number of points any single round added.
///
/// # Safety
/// `hitter` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_hitter_max_points_per_round(
    hitter: *const HsHitter,
    out: *mut usize,
) -> i32 {
    if hitter.is_null() || out.is_null() {
        return HS_ERR_NULL_ARGUMENT;
    }
    *out = (*hitter).state.max_points_per_round();
    HS_OK
}
