//! C ABI over the rggspec core: opaque graph handles, status codes, and a
//! thread-local last-error message. Every function that can fail returns an
//! `RggStatus`; outputs go through pointers that must be non-null.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rggspec::bound;
use rggspec::moments1d;
use rggspec::moments2d;
use rggspec::polytope;
use rggspec::rgg;
use rggspec::sis;
use rggspec::spectral;
use rggspec::Error;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RggStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Overflow = 3,
    SizeLimit = 4,
    Convergence = 5,
    Unsupported = 6,
    Internal = 7,
}

/// Outcome of an SIS run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RggOutcome {
    DiedOut = 0,
    Persisted = 1,
    HorizonReached = 2,
}

/// Opaque random geometric graph handle.
pub struct RggGraph {
    inner: rgg::Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> RggStatus {
    match err {
        Error::InvalidParameter(_) | Error::DimensionMismatch { .. } => RggStatus::InvalidParameter,
        Error::Overflow { .. } => RggStatus::Overflow,
        Error::SizeLimit { .. } => RggStatus::SizeLimit,
        Error::Convergence { .. } => RggStatus::Convergence,
        Error::FormulaMismatch { .. } | Error::UnsupportedOrder { .. } => RggStatus::Unsupported,
        Error::Io(_) | Error::Parse(_) => RggStatus::Internal,
    }
}

fn fail(err: Error) -> RggStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn guard(f: impl FnOnce() -> RggStatus) -> RggStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            RggStatus::Internal
        }
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(format!("null pointer argument `{}`", stringify!($p)));
            return RggStatus::NullPointer;
        })+
    };
}

/// Copies the most recent error message on this thread into `buf`
/// (NUL-terminated, truncated to `len`). Returns the full message length in
/// bytes, excluding the terminator.
#[no_mangle]
pub unsafe extern "C" fn rgg_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Builds an RGG on the unit torus and stores the handle in `out`.
#[no_mangle]
pub unsafe extern "C" fn rgg_graph_build(
    n: usize,
    d: usize,
    r: f64,
    seed: u64,
    out: *mut *mut RggGraph,
) -> RggStatus {
    nonnull!(out);
    guard(|| match rgg::build(&rgg::RggSpec { n, d, r, seed }) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(RggGraph { inner: g }));
            RggStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Frees a graph handle. A null handle is a no-op.
#[no_mangle]
pub unsafe extern "C" fn rgg_graph_free(g: *mut RggGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of nodes; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn rgg_graph_num_nodes(g: *const RggGraph) -> usize {
    if g.is_null() {
        return 0;
    }
    (*g).inner.n()
}

/// Number of undirected edges; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn rgg_graph_num_edges(g: *const RggGraph) -> usize {
    if g.is_null() {
        return 0;
    }
    (*g).inner.num_edges()
}

#[no_mangle]
pub unsafe extern "C" fn rgg_graph_mean_degree(g: *const RggGraph, out: *mut f64) -> RggStatus {
    nonnull!(g, out);
    *out = (*g).inner.mean_degree();
    RggStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn rgg_graph_count_triangles(g: *const RggGraph, out: *mut u64) -> RggStatus {
    nonnull!(g, out);
    *out = (*g).inner.count_triangles();
    RggStatus::Ok
}

/// Spectral moments `m_1..m_k_max` by exact walk counting, written to
/// `out[0..k_max]`.
#[no_mangle]
pub unsafe extern "C" fn rgg_graph_moments(
    g: *const RggGraph,
    k_max: usize,
    out: *mut f64,
) -> RggStatus {
    nonnull!(g, out);
    guard(|| match spectral::moments_by_walks(&(*g).inner, k_max) {
        Ok(m) => {
            std::ptr::copy_nonoverlapping(m.as_ptr(), out, k_max);
            RggStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Adjacency spectral radius by power iteration.
#[no_mangle]
pub unsafe extern "C" fn rgg_graph_spectral_radius(
    g: *const RggGraph,
    tol: f64,
    out: *mut f64,
) -> RggStatus {
    nonnull!(g, out);
    guard(|| match spectral::spectral_radius(&(*g).inner, tol) {
        Ok(est) => {
            *out = est.value;
            RggStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Expected degree `n V_d r^d`.
#[no_mangle]
pub unsafe extern "C" fn rgg_expected_degree(
    n: usize,
    d: usize,
    r: f64,
    out: *mut f64,
) -> RggStatus {
    nonnull!(out);
    *out = rgg::expected_degree(n, d, r);
    RggStatus::Ok
}

/// Analytic expected moment for the one-dimensional model.
#[no_mangle]
pub unsafe extern "C" fn rgg_expected_moment_1d(
    n: usize,
    r: f64,
    k: usize,
    out: *mut f64,
) -> RggStatus {
    nonnull!(out);
    guard(|| match moments1d::expected_moment_1d(n, r, k) {
        Ok(v) => {
            *out = v;
            RggStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Two-disk lens area at center distance `rho`, radius `r`.
#[no_mangle]
pub unsafe extern "C" fn rgg_lens_area(rho: f64, r: f64, out: *mut f64) -> RggStatus {
    nonnull!(out);
    match moments2d::lens_area(rho, r) {
        Ok(v) => {
            *out = v;
            RggStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Monte Carlo chain-polytope volume: estimate and standard error.
#[no_mangle]
pub unsafe extern "C" fn rgg_estimate_volume(
    k: usize,
    samples: usize,
    seed: u64,
    out_estimate: *mut f64,
    out_std_error: *mut f64,
) -> RggStatus {
    nonnull!(out_estimate, out_std_error);
    guard(|| match polytope::estimate_volume(k, samples, seed) {
        Ok(est) => {
            *out_estimate = est.estimate;
            *out_std_error = est.std_error;
            RggStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Spectral-radius bound `c_d n r^d`.
#[no_mangle]
pub unsafe extern "C" fn rgg_lambda_max_bound(
    n: usize,
    r: f64,
    d: usize,
    c_d: f64,
    out: *mut f64,
) -> RggStatus {
    nonnull!(out);
    *out = bound::lambda_max_bound(n, r, d, c_d);
    RggStatus::Ok
}

/// Largest radius keeping the bound below the epidemic threshold
/// `delta / beta`.
#[no_mangle]
pub unsafe extern "C" fn rgg_design_radius(
    n: usize,
    d: usize,
    beta: f64,
    delta: f64,
    c_d: f64,
    out: *mut f64,
) -> RggStatus {
    nonnull!(out);
    guard(|| match bound::design_radius(n, d, beta, delta, c_d) {
        Ok(res) => {
            *out = res.r_max;
            RggStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Runs the SIS dynamics from a seeded initial infection. Writes the outcome
/// and, when the epidemic died out, the step at which it did (-1 otherwise).
#[no_mangle]
pub unsafe extern "C" fn rgg_sis_simulate(
    g: *const RggGraph,
    beta: f64,
    delta: f64,
    p0_level: f64,
    steps: usize,
    seed: u64,
    out_outcome: *mut RggOutcome,
    out_die_out_step: *mut i64,
) -> RggStatus {
    nonnull!(g, out_outcome, out_die_out_step);
    guard(|| {
        let graph = &(*g).inner;
        let run = sis::seed_infection(graph.n(), p0_level, seed).and_then(|p0| {
            let params = sis::EpidemicParams {
                beta,
                delta,
                p0,
                steps,
                die_out_threshold: sis::DEFAULT_DIE_OUT_THRESHOLD,
            };
            sis::simulate(graph, &params)
        });
        match run {
            Ok(traj) => {
                *out_outcome = match traj.outcome {
                    sis::Outcome::DiedOut => RggOutcome::DiedOut,
                    sis::Outcome::Persisted => RggOutcome::Persisted,
                    sis::Outcome::HorizonReached => RggOutcome::HorizonReached,
                };
                *out_die_out_step = traj.die_out_step.map(|s| s as i64).unwrap_or(-1);
                RggStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::ptr;

    unsafe fn build(n: usize, d: usize, r: f64, seed: u64) -> *mut RggGraph {
        let mut g: *mut RggGraph = ptr::null_mut();
        assert_eq!(rgg_graph_build(n, d, r, seed, &mut g), RggStatus::Ok);
        assert!(!g.is_null());
        g
    }

    #[test]
    fn build_query_free_roundtrip() {
        unsafe {
            let g = build(200, 1, 0.02, 9);
            assert_eq!(rgg_graph_num_nodes(g), 200);
            assert!(rgg_graph_num_edges(g) > 0);
            let mut mean = 0.0;
            assert_eq!(rgg_graph_mean_degree(g, &mut mean), RggStatus::Ok);
            assert_abs_diff_eq!(
                mean,
                2.0 * rgg_graph_num_edges(g) as f64 / 200.0,
                epsilon = 1e-12
            );
            rgg_graph_free(g);
        }
    }

    #[test]
    fn invalid_radius_reports_parameter_error() {
        unsafe {
            let mut g: *mut RggGraph = ptr::null_mut();
            let status = rgg_graph_build(10, 1, 0.6, 0, &mut g);
            assert_eq!(status, RggStatus::InvalidParameter);
            assert!(g.is_null());
            let mut buf = [0i8; 256];
            let len = rgg_last_error(buf.as_mut_ptr(), buf.len());
            assert!(len > 0);
            let msg = std::ffi::CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
            assert!(msg.contains("0.5"), "message should name the limit: {msg}");
        }
    }

    #[test]
    fn null_pointers_rejected() {
        unsafe {
            assert_eq!(
                rgg_graph_build(10, 1, 0.1, 0, ptr::null_mut()),
                RggStatus::NullPointer
            );
            let mut out = 0.0;
            assert_eq!(
                rgg_graph_mean_degree(ptr::null(), &mut out),
                RggStatus::NullPointer
            );
            assert_eq!(rgg_graph_num_nodes(ptr::null()), 0);
        }
    }

    #[test]
    fn moments_match_core() {
        unsafe {
            let g = build(150, 1, 0.03, 4);
            let mut out = [0.0f64; 4];
            assert_eq!(rgg_graph_moments(g, 4, out.as_mut_ptr()), RggStatus::Ok);
            let core = rggspec::build(&rggspec::RggSpec { n: 150, d: 1, r: 0.03, seed: 4 }).unwrap();
            let expect = rggspec::moments_by_walks(&core, 4).unwrap();
            assert_eq!(&out[..], &expect[..]);
            let mut tri = 0u64;
            assert_eq!(rgg_graph_count_triangles(g, &mut tri), RggStatus::Ok);
            assert_abs_diff_eq!(out[2], 6.0 * tri as f64 / 150.0, epsilon = 1e-12);
            rgg_graph_free(g);
        }
    }

    #[test]
    fn scalar_helpers() {
        unsafe {
            let mut v = 0.0;
            assert_eq!(rgg_expected_degree(1000, 1, 0.01, &mut v), RggStatus::Ok);
            assert_abs_diff_eq!(v, 20.0, epsilon = 1e-12);
            assert_eq!(rgg_expected_moment_1d(1000, 0.01, 2, &mut v), RggStatus::Ok);
            assert_abs_diff_eq!(v, 20.0, epsilon = 1e-12);
            assert_eq!(rgg_lens_area(0.0, 1.0, &mut v), RggStatus::Ok);
            assert_abs_diff_eq!(v, std::f64::consts::PI, epsilon = 1e-12);
            assert_eq!(rgg_lambda_max_bound(1000, 0.01, 1, 1.9192, &mut v), RggStatus::Ok);
            assert_abs_diff_eq!(v, 19.192, epsilon = 1e-12);
            assert_eq!(
                rgg_design_radius(1000, 1, 0.020, 0.35, 1.9192, &mut v),
                RggStatus::Ok
            );
            assert!(v > 0.0 && v < 0.5);
            assert_eq!(rgg_lens_area(-1.0, 1.0, &mut v), RggStatus::InvalidParameter);
        }
    }

    #[test]
    fn volume_estimate_near_reference() {
        unsafe {
            let mut est = 0.0;
            let mut se = 0.0;
            assert_eq!(
                rgg_estimate_volume(2, 100_000, 3, &mut est, &mut se),
                RggStatus::Ok
            );
            assert!((est - 3.0).abs() <= 4.0 * se, "est {est} se {se}");
        }
    }

    #[test]
    fn sis_decay_below_threshold() {
        unsafe {
            // beta = 0 decays geometrically, so the epidemic must die out
            let g = build(100, 1, 0.02, 12);
            let mut outcome = RggOutcome::Persisted;
            let mut step = 0i64;
            assert_eq!(
                rgg_sis_simulate(g, 0.0, 0.5, 0.01, 200, 1, &mut outcome, &mut step),
                RggStatus::Ok
            );
            assert_eq!(outcome, RggOutcome::DiedOut);
            assert!(step >= 0);
            rgg_graph_free(g);
        }
    }
}
