//! C interface to `ravg`.
//!
//! Every function returns a [`RavgStatus`]; results are written through out
//! pointers. Objects are opaque handles released with their `_free`
//! function. After a non-OK status, [`ravg_last_error`] copies the message
//! of the most recent failure on the calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use ravg::bounds::constants;
use ravg::geometry::{c_r, lemma4_integral_reduced, measure_slice_mc, Direction4, SliceSet};
use ravg::kinetic::{
    bump_field, materialize_average, read_grid, write_grid, AverageGrid4, BumpParams, GridSpec, ScalarField7,
    SupportBox, TransportPair,
};
use ravg::norms::{fft4_padded, hs_norm_fourier, lq_norm_avg};
use ravg::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RavgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Inadmissible = 3,
    BoundaryNotVanishing = 4,
    CostGuard = 5,
    GridTooSmall = 6,
    Io = 7,
    Format = 8,
    Config = 9,
    Panic = 10,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> RavgStatus {
    match e {
        Error::InvalidArgument { .. } => RavgStatus::InvalidArgument,
        Error::GridTooSmall(_) => RavgStatus::GridTooSmall,
        Error::BoundaryNotVanishing { .. } => RavgStatus::BoundaryNotVanishing,
        Error::Inadmissible { .. } => RavgStatus::Inadmissible,
        Error::CostGuard(_) => RavgStatus::CostGuard,
        Error::Format { .. } => RavgStatus::Format,
        Error::Io { .. } => RavgStatus::Io,
        Error::Config { .. } => RavgStatus::Config,
        Error::Experiment { source, .. } => status_of(source),
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> RavgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RavgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RavgStatus::Panic
        }
    }
}

struct Failure(RavgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RavgStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn out<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| null(what))
}

unsafe fn path_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a Path, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    let s = CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(RavgStatus::InvalidArgument, format!("`{what}` is not UTF-8")))?;
    Ok(Path::new(s))
}

/// Copies the last error message (NUL-terminated, truncated to `len - 1`
/// bytes) into `buf` and returns the full message length.
#[no_mangle]
pub unsafe extern "C" fn ravg_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// NUL-terminated crate version; static storage.
#[no_mangle]
pub extern "C" fn ravg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RavgConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c_r: f64,
}

/// Constants for horizon `t`, momentum radius `r` and exponent `q ∈ (1, ∞)`.
#[no_mangle]
pub unsafe extern "C" fn ravg_constants(t: f64, r: f64, q: f64, result: *mut RavgConstants) -> RavgStatus {
    guard(|| {
        let o = out(result, "result")?;
        let c = constants(t, r, q)?;
        *o = RavgConstants {
            c1: c.c1,
            c2: c.c2,
            c3: c.c3,
            c4: c.c4,
            c5: c.c5,
            c6: c.c6,
            c_r: c.c_r,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ravg_c_r(r: f64, result: *mut f64) -> RavgStatus {
    guard(|| {
        *out(result, "result")? = c_r(r)?;
        Ok(())
    })
}

/// Monte-Carlo measure of `{p ∈ B_R : |e' + e·p/p₀| < ε}` with `n ≥ 10⁴` points.
#[no_mangle]
pub unsafe extern "C" fn ravg_measure_slice(
    e_prime: f64,
    e: *const f64,
    epsilon: f64,
    radius: f64,
    n: usize,
    seed: u64,
    value: *mut f64,
    std_error: *mut f64,
) -> RavgStatus {
    guard(|| {
        let e = e.as_ref().map(|_| std::slice::from_raw_parts(e, 3)).ok_or_else(|| null("e"))?;
        let v = out(value, "value")?;
        let se = out(std_error, "std_error")?;
        let set = SliceSet::new(Direction4::new(e_prime, [e[0], e[1], e[2]])?, epsilon, radius)?;
        let est = measure_slice_mc(&set, n, seed)?;
        *v = est.value;
        *se = est.std_error;
        Ok(())
    })
}

/// `∫ g^{-2} dp` over `{p ∈ B_R : |g| > ε}`, `g = e' + e·p/p₀`, by the
/// reduced nested quadrature.
#[no_mangle]
pub unsafe extern "C" fn ravg_weighted_slice_integral(
    e_prime: f64,
    e: *const f64,
    epsilon: f64,
    radius: f64,
    value: *mut f64,
) -> RavgStatus {
    guard(|| {
        let e = e.as_ref().map(|_| std::slice::from_raw_parts(e, 3)).ok_or_else(|| null("e"))?;
        let v = out(value, "value")?;
        let dir = Direction4::new(e_prime, [e[0], e[1], e[2]])?;
        *v = lemma4_integral_reduced(&dir, epsilon, radius)?;
        Ok(())
    })
}

/// Tensor bump `A φ(t) φ(x) φ(p)` with the given centers and radii.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RavgBump {
    pub t_center: f64,
    pub t_halfwidth: f64,
    pub x_center: [f64; 3],
    pub x_radius: f64,
    pub p_center: [f64; 3],
    pub p_radius: f64,
    pub amplitude: f64,
}

impl From<RavgBump> for BumpParams {
    fn from(b: RavgBump) -> Self {
        BumpParams {
            t_center: b.t_center,
            t_halfwidth: b.t_halfwidth,
            x_center: b.x_center,
            x_radius: b.x_radius,
            p_center: b.p_center,
            p_radius: b.p_radius,
            amplitude: b.amplitude,
        }
    }
}

/// Opaque source field.
pub struct RavgField(ScalarField7);

/// Opaque sampled momentum average.
pub struct RavgGrid(AverageGrid4);

fn cube_domain(t: f64, eps0: f64, half: f64, r: f64) -> Result<SupportBox, Failure> {
    Ok(SupportBox::cube_domain(t, eps0, half, r)?)
}

unsafe fn store<T>(result: *mut *mut T, value: T) -> Result<(), Failure> {
    let o = out(result, "result")?;
    *o = Box::into_raw(Box::new(value));
    Ok(())
}

/// Tensor bump inside the domain `[ε₀, T-ε₀] × [-a, a]³ × B_R`.
#[no_mangle]
pub unsafe extern "C" fn ravg_field_bump(
    horizon: f64,
    eps0: f64,
    half_extent: f64,
    radius: f64,
    params: *const RavgBump,
    result: *mut *mut RavgField,
) -> RavgStatus {
    guard(|| {
        let p = *params.as_ref().ok_or_else(|| null("params"))?;
        let d = cube_domain(horizon, eps0, half_extent, radius)?;
        store(result, RavgField(bump_field(&d, p.into())?.shared()))
    })
}

/// Source `∂ₜb + v·∇ₓb` of the transported bump with drift `κ ∈ [0, 1]`; its
/// solution vanishes outside the bump time window.
#[no_mangle]
pub unsafe extern "C" fn ravg_field_transport_source(
    horizon: f64,
    eps0: f64,
    half_extent: f64,
    radius: f64,
    params: *const RavgBump,
    drift: f64,
    result: *mut *mut RavgField,
) -> RavgStatus {
    guard(|| {
        let p = *params.as_ref().ok_or_else(|| null("params"))?;
        let d = cube_domain(horizon, eps0, half_extent, radius)?;
        store(result, RavgField(TransportPair::new(&d, p.into(), drift)?.source()))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ravg_field_eval(
    field: *const RavgField,
    t: f64,
    x: *const f64,
    p: *const f64,
    value: *mut f64,
) -> RavgStatus {
    guard(|| {
        let f = field.as_ref().ok_or_else(|| null("field"))?;
        if x.is_null() || p.is_null() {
            return Err(null("x/p"));
        }
        let x = std::slice::from_raw_parts(x, 3);
        let p = std::slice::from_raw_parts(p, 3);
        *out(value, "value")? = f.0.eval(t, &[x[0], x[1], x[2]], &[p[0], p[1], p[2]]);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ravg_field_free(field: *mut RavgField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RavgGridSpec {
    pub nt: usize,
    pub nx: usize,
    pub time_order: usize,
    pub time_panels: usize,
    pub ball_radial: usize,
    pub ball_polar: usize,
    pub ball_azimuthal: usize,
}

/// Samples `ũ` for the (damped when `damped != 0`) solution with source `field`.
#[no_mangle]
pub unsafe extern "C" fn ravg_grid_materialize(
    field: *const RavgField,
    spec: *const RavgGridSpec,
    damped: i32,
    result: *mut *mut RavgGrid,
) -> RavgStatus {
    guard(|| {
        let f = field.as_ref().ok_or_else(|| null("field"))?;
        let s = spec.as_ref().ok_or_else(|| null("spec"))?;
        let gs = GridSpec::cube(s.nt, s.nx)
            .with_time_rule(s.time_order, s.time_panels)
            .with_ball([s.ball_radial, s.ball_polar, s.ball_azimuthal]);
        store(result, RavgGrid(materialize_average(f.0.clone(), &gs, damped != 0)?))
    })
}

/// Node counts `(t, x₁, x₂, x₃)`.
#[no_mangle]
pub unsafe extern "C" fn ravg_grid_dims(grid: *const RavgGrid, dims: *mut usize) -> RavgStatus {
    guard(|| {
        let g = grid.as_ref().ok_or_else(|| null("grid"))?;
        if dims.is_null() {
            return Err(null("dims"));
        }
        std::slice::from_raw_parts_mut(dims, 4).copy_from_slice(&g.0.dims);
        Ok(())
    })
}

/// Copies the row-major values into `buf`, which must hold `len ≥` the node count.
#[no_mangle]
pub unsafe extern "C" fn ravg_grid_values(grid: *const RavgGrid, buf: *mut f64, len: usize) -> RavgStatus {
    guard(|| {
        let g = grid.as_ref().ok_or_else(|| null("grid"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < g.0.len() {
            return Err(Failure(
                RavgStatus::InvalidArgument,
                format!("buffer holds {len} values, grid has {}", g.0.len()),
            ));
        }
        std::slice::from_raw_parts_mut(buf, g.0.len()).copy_from_slice(&g.0.values);
        Ok(())
    })
}

/// `‖ũ‖_q`; pass `INFINITY` for the maximum.
#[no_mangle]
pub unsafe extern "C" fn ravg_grid_lq_norm(grid: *const RavgGrid, q: f64, value: *mut f64) -> RavgStatus {
    guard(|| {
        let g = grid.as_ref().ok_or_else(|| null("grid"))?;
        *out(value, "value")? = lq_norm_avg(&g.0, q)?;
        Ok(())
    })
}

/// Fourier `Hˢ` norm with zero-padding factor `padding`.
#[no_mangle]
pub unsafe extern "C" fn ravg_grid_hs_norm(grid: *const RavgGrid, s: f64, padding: usize, value: *mut f64) -> RavgStatus {
    guard(|| {
        let g = grid.as_ref().ok_or_else(|| null("grid"))?;
        *out(value, "value")? = hs_norm_fourier(&fft4_padded(&g.0, padding)?, s);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ravg_grid_write(grid: *const RavgGrid, path: *const c_char) -> RavgStatus {
    guard(|| {
        let g = grid.as_ref().ok_or_else(|| null("grid"))?;
        write_grid(&g.0, path_arg(path, "path")?)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ravg_grid_read(path: *const c_char, result: *mut *mut RavgGrid) -> RavgStatus {
    guard(|| {
        let g = read_grid(path_arg(path, "path")?)?;
        store(result, RavgGrid(g))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ravg_grid_free(grid: *mut RavgGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Runs the suite described by the TOML file at `config` and writes its
/// bundle; `all_pass` receives 1 when every check passed.
#[no_mangle]
pub unsafe extern "C" fn ravg_run_config(config: *const c_char, all_pass: *mut i32) -> RavgStatus {
    guard(|| {
        let flag = out(all_pass, "all_pass")?;
        let cfg = ravg::cli::load_config(path_arg(config, "config")?)?;
        let outcome = ravg::cli::run_suite(&cfg)?;
        ravg::cli::write_bundle(&outcome, &cfg.output)?;
        *flag = i32::from(outcome.report.all_pass());
        Ok(())
    })
}
