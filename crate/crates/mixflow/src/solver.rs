//! Cell-centered finite-volume solver for the degenerate pressure equation
//! `p_t = ∇·(K(|∇p|)∇p)` with time-dependent Dirichlet data.
//!
//! Fluxes use two-point normal differences across faces; Dirichlet values
//! enter through half-spacing differences at boundary faces, so constant
//! fields and (in 1D) affine fields with stationary matching data are exact
//! steady states. The explicit stepper is CFL-limited and preserves the
//! discrete maximum principle; the implicit stepper is backward Euler with
//! Picard-frozen conductivities. No regularization is applied on the explicit
//! path (`K(0) = 0` already gives zero flux); the implicit path smooths the
//! gradient magnitude by `ε` only inside the Picard coefficients.

use crate::boundary::BoundaryProfile;
use crate::conductivity::ConductivityModel;
use crate::error::{Error, Result};
use crate::grid::{Grid, PressureField};
use std::io::Write;

/// Time integrator choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepperKind {
    Explicit,
    Implicit,
}

/// Stepper and sampling knobs.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub stepper: StepperKind,
    /// CFL safety factor in `dt = safety·h²/(2n·K_max)`. Values at or below
    /// 2/3 also guarantee the discrete maximum principle (boundary faces
    /// carry half-spacing, which costs a factor 3/2 against the plain bound).
    pub safety: f64,
    /// Fixed step size; explicit runs reject it when it violates the CFL
    /// bound, implicit runs use it as-is.
    pub fixed_dt: Option<f64>,
    /// Picard convergence threshold on the successive-iterate max norm.
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    /// Gradient-magnitude smoothing `ε` inside the Picard coefficients.
    pub grad_regularization: f64,
    /// Diagnostics are recorded every `sample_stride` steps.
    pub sample_stride: usize,
    /// Keep the sampled fields in the solution (needed by difference runs).
    pub keep_fields: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            stepper: StepperKind::Explicit,
            safety: 0.5,
            fixed_dt: None,
            picard_tol: 1e-10,
            picard_max_iters: 100,
            grad_regularization: 1e-12,
            sample_stride: 100,
            keep_fields: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::Config(format!(
                "solver.safety must lie in (0,1], got {}",
                self.safety
            )));
        }
        if !(self.picard_tol > 0.0) {
            return Err(Error::Config("solver.picard_tol must be positive".into()));
        }
        if self.picard_max_iters == 0 {
            return Err(Error::Config("solver.picard_max_iters must be at least 1".into()));
        }
        if !(self.grad_regularization >= 0.0) {
            return Err(Error::Config("solver.grad_regularization must be nonnegative".into()));
        }
        if self.sample_stride == 0 {
            return Err(Error::Config("solver.sample_stride must be at least 1".into()));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Config(format!("solver.dt must be positive, got {dt}")));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Face gradients
// ---------------------------------------------------------------------------

/// Gradient components on the faces of a field.
///
/// `x_normal[j·(nx+1)+i]` is `∂p/∂x` on the x-face between cells `(i-1,j)`
/// and `(i,j)` (half-spacing differences against the trace at `i ∈ {0,nx}`);
/// `x_trans` holds the transverse component on the same faces (zero in 1D,
/// four-point averages of cell differences in 2D, trace differences on
/// boundary faces). `y_*` mirror this for y-faces and are empty in 1D.
#[derive(Debug, Clone)]
pub struct FaceGradients {
    grid: Grid,
    pub x_normal: Vec<f64>,
    pub x_trans: Vec<f64>,
    pub y_normal: Vec<f64>,
    pub y_trans: Vec<f64>,
}

impl FaceGradients {
    pub fn x_index(&self, i: usize, j: usize) -> usize {
        j * (self.grid.nx() + 1) + i
    }
    pub fn y_index(&self, i: usize, j: usize) -> usize {
        j * self.grid.nx() + i
    }
    pub fn x_magnitude(&self, f: usize) -> f64 {
        (self.x_normal[f] * self.x_normal[f] + self.x_trans[f] * self.x_trans[f]).sqrt()
    }
    pub fn y_magnitude(&self, f: usize) -> f64 {
        (self.y_normal[f] * self.y_normal[f] + self.y_trans[f] * self.y_trans[f]).sqrt()
    }
    /// Quadrature weight (face area × normal spacing share) of an x-face.
    pub fn x_weight(&self, i: usize, _j: usize) -> f64 {
        let [hx, hy] = self.grid.spacing();
        let wn = if i == 0 || i == self.grid.nx() { 0.5 * hx } else { hx };
        if self.grid.dimension() == 2 {
            wn * hy
        } else {
            wn
        }
    }
    pub fn y_weight(&self, _i: usize, j: usize) -> f64 {
        let [hx, hy] = self.grid.spacing();
        let wn = if j == 0 || j == self.grid.ny() { 0.5 * hy } else { hy };
        wn * hx
    }
}

/// Face gradients of `field`, with Dirichlet values taken from the trace of
/// the boundary profile at the field's time stamp.
pub fn face_gradients(field: &PressureField, profile: &BoundaryProfile) -> FaceGradients {
    let grid = field.grid();
    let t = field.time();
    let p = field.values();
    let nx = grid.nx();
    let ny = grid.ny();
    let [hx, hy] = grid.spacing();
    let [lx, ly] = grid.extents();

    let mut gx = vec![0.0; (nx + 1) * ny];
    let mut tx = vec![0.0; (nx + 1) * ny];
    for j in 0..ny {
        let yj = if grid.dimension() == 2 { (j as f64 + 0.5) * hy } else { 0.0 };
        for i in 0..=nx {
            let f = j * (nx + 1) + i;
            gx[f] = if i == 0 {
                (p[grid.idx(0, j)] - profile.psi([0.0, yj], t)) / (0.5 * hx)
            } else if i == nx {
                (profile.psi([lx, yj], t) - p[grid.idx(nx - 1, j)]) / (0.5 * hx)
            } else {
                (p[grid.idx(i, j)] - p[grid.idx(i - 1, j)]) / hx
            };
        }
    }

    let (mut gy, mut ty) = (Vec::new(), Vec::new());
    if grid.dimension() == 2 {
        // transverse component on x-faces
        let up = |ic: usize, j: usize| -> f64 {
            let xc = grid.cell_center(ic, 0)[0];
            if j + 1 < ny {
                (p[grid.idx(ic, j + 1)] - p[grid.idx(ic, j)]) / hy
            } else {
                (profile.psi([xc, ly], t) - p[grid.idx(ic, ny - 1)]) / (0.5 * hy)
            }
        };
        let down = |ic: usize, j: usize| -> f64 {
            let xc = grid.cell_center(ic, 0)[0];
            if j >= 1 {
                (p[grid.idx(ic, j)] - p[grid.idx(ic, j - 1)]) / hy
            } else {
                (p[grid.idx(ic, 0)] - profile.psi([xc, 0.0], t)) / (0.5 * hy)
            }
        };
        for j in 0..ny {
            let yj = (j as f64 + 0.5) * hy;
            for i in 0..=nx {
                let f = j * (nx + 1) + i;
                tx[f] = if i == 0 || i == nx {
                    // tangential derivative of the trace along the boundary
                    let x = if i == 0 { 0.0 } else { lx };
                    if j == 0 {
                        (profile.psi([x, yj + hy], t) - profile.psi([x, yj], t)) / hy
                    } else if j == ny - 1 {
                        (profile.psi([x, yj], t) - profile.psi([x, yj - hy], t)) / hy
                    } else {
                        (profile.psi([x, yj + hy], t) - profile.psi([x, yj - hy], t))
                            / (2.0 * hy)
                    }
                } else {
                    0.25 * (up(i - 1, j) + down(i - 1, j) + up(i, j) + down(i, j))
                };
            }
        }

        gy = vec![0.0; nx * (ny + 1)];
        ty = vec![0.0; nx * (ny + 1)];
        for j in 0..=ny {
            for i in 0..nx {
                let f = j * nx + i;
                let xc = grid.cell_center(i, 0)[0];
                gy[f] = if j == 0 {
                    (p[grid.idx(i, 0)] - profile.psi([xc, 0.0], t)) / (0.5 * hy)
                } else if j == ny {
                    (profile.psi([xc, ly], t) - p[grid.idx(i, ny - 1)]) / (0.5 * hy)
                } else {
                    (p[grid.idx(i, j)] - p[grid.idx(i, j - 1)]) / hy
                };
            }
        }
        let right = |j: usize, i: usize| -> f64 {
            let yc = (j as f64 + 0.5) * hy;
            if i + 1 < nx {
                (p[grid.idx(i + 1, j)] - p[grid.idx(i, j)]) / hx
            } else {
                (profile.psi([lx, yc], t) - p[grid.idx(nx - 1, j)]) / (0.5 * hx)
            }
        };
        let left = |j: usize, i: usize| -> f64 {
            let yc = (j as f64 + 0.5) * hy;
            if i >= 1 {
                (p[grid.idx(i, j)] - p[grid.idx(i - 1, j)]) / hx
            } else {
                (p[grid.idx(0, j)] - profile.psi([0.0, yc], t)) / (0.5 * hx)
            }
        };
        for j in 0..=ny {
            for i in 0..nx {
                let f = j * nx + i;
                let xi = (i as f64 + 0.5) * hx;
                ty[f] = if j == 0 || j == ny {
                    let y = if j == 0 { 0.0 } else { ly };
                    if i == 0 {
                        (profile.psi([xi + hx, y], t) - profile.psi([xi, y], t)) / hx
                    } else if i == nx - 1 {
                        (profile.psi([xi, y], t) - profile.psi([xi - hx, y], t)) / hx
                    } else {
                        (profile.psi([xi + hx, y], t) - profile.psi([xi - hx, y], t))
                            / (2.0 * hx)
                    }
                } else {
                    0.25 * (right(j - 1, i) + left(j - 1, i) + right(j, i) + left(j, i))
                };
            }
        }
    }

    FaceGradients { grid, x_normal: gx, x_trans: tx, y_normal: gy, y_trans: ty }
}

// ---------------------------------------------------------------------------
// Face conductivities (with warm-start cache for stepping loops)
// ---------------------------------------------------------------------------

/// Per-face speed hints reused across steps to warm-start the forward-map
/// inversion inside `K`.
#[derive(Debug, Clone, Default)]
pub struct FaceHintCache {
    x: Vec<f64>,
    y: Vec<f64>,
}

fn face_conductivities(
    model: &ConductivityModel,
    grads: &FaceGradients,
    cache: &mut FaceHintCache,
    regularization: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if cache.x.len() != grads.x_normal.len() {
        cache.x = vec![0.0; grads.x_normal.len()];
    }
    if cache.y.len() != grads.y_normal.len() {
        cache.y = vec![0.0; grads.y_normal.len()];
    }
    let reg = |m: f64| {
        if regularization > 0.0 {
            (m * m + regularization * regularization).sqrt()
        } else {
            m
        }
    };
    let mut kx = vec![0.0; grads.x_normal.len()];
    for f in 0..kx.len() {
        kx[f] = model.conductivity_warm(reg(grads.x_magnitude(f)), &mut cache.x[f])?;
    }
    let mut ky = vec![0.0; grads.y_normal.len()];
    for f in 0..ky.len() {
        ky[f] = model.conductivity_warm(reg(grads.y_magnitude(f)), &mut cache.y[f])?;
    }
    Ok((kx, ky))
}

// ---------------------------------------------------------------------------
// Steppers
// ---------------------------------------------------------------------------

/// Largest stable explicit step at the current state:
/// `safety·h_min²/(2n·K_max)` with `K_max` over all faces. Returns infinity
/// for a flux-free state (constant field).
pub fn admissible_dt(
    field: &PressureField,
    model: &ConductivityModel,
    profile: &BoundaryProfile,
    config: &SolverConfig,
) -> Result<f64> {
    let grads = face_gradients(field, profile);
    let mut cache = FaceHintCache::default();
    let (kx, ky) = face_conductivities(model, &grads, &mut cache, 0.0)?;
    let kmax = kx.iter().chain(&ky).fold(0.0f64, |a, &b| a.max(b));
    Ok(admissible_from_kmax(field.grid(), config.safety, kmax))
}

fn admissible_from_kmax(grid: Grid, safety: f64, kmax: f64) -> f64 {
    if kmax <= 0.0 {
        return f64::INFINITY;
    }
    let n = grid.dimension() as f64;
    let h = if grid.dimension() == 2 {
        grid.spacing()[0].min(grid.spacing()[1])
    } else {
        grid.spacing()[0]
    };
    safety * h * h / (2.0 * n * kmax)
}

struct StepOutcome {
    values: Vec<f64>,
    kmax: f64,
}

fn explicit_update(
    field: &PressureField,
    model: &ConductivityModel,
    profile: &BoundaryProfile,
    dt: f64,
    config: &SolverConfig,
    cache: &mut FaceHintCache,
    enforce_cfl: bool,
) -> Result<StepOutcome> {
    let grid = field.grid();
    let grads = face_gradients(field, profile);
    let (kx, ky) = face_conductivities(model, &grads, cache, 0.0)?;
    let kmax = kx.iter().chain(&ky).fold(0.0f64, |a, &b| a.max(b));
    if enforce_cfl {
        let adm = admissible_from_kmax(grid, config.safety, kmax);
        if dt > adm {
            return Err(Error::CflViolation { requested: dt, admissible: adm });
        }
    }
    let nx = grid.nx();
    let ny = grid.ny();
    let [hx, hy] = grid.spacing();
    let mut out = field.values().to_vec();
    for j in 0..ny {
        for i in 0..nx {
            let c = grid.idx(i, j);
            let fl = j * (nx + 1) + i;
            let fr = fl + 1;
            let mut div = (kx[fr] * grads.x_normal[fr] - kx[fl] * grads.x_normal[fl]) / hx;
            if grid.dimension() == 2 {
                let fd = j * nx + i;
                let fu = (j + 1) * nx + i;
                div += (ky[fu] * grads.y_normal[fu] - ky[fd] * grads.y_normal[fd]) / hy;
            }
            out[c] += dt * div;
        }
    }
    Ok(StepOutcome { values: out, kmax })
}

/// One conservative explicit Euler step. Rejects `dt` above the admissible
/// CFL bound (carrying the admissible value in the error).
pub fn step_explicit(
    field: &PressureField,
    model: &ConductivityModel,
    profile: &BoundaryProfile,
    dt: f64,
    config: &SolverConfig,
) -> Result<PressureField> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be positive and finite, got {dt}")));
    }
    let mut cache = FaceHintCache::default();
    let out = explicit_update(field, model, profile, dt, config, &mut cache, true)?;
    field.replace(out.values, field.time() + dt)
}

fn implicit_update(
    field: &PressureField,
    model: &ConductivityModel,
    profile: &BoundaryProfile,
    dt: f64,
    config: &SolverConfig,
    cache: &mut FaceHintCache,
) -> Result<Vec<f64>> {
    let grid = field.grid();
    let t_new = field.time() + dt;
    let p_old = field.values();
    let mut guess = field.replace(p_old.to_vec(), t_new)?;
    let mut last_update = f64::INFINITY;
    for _iter in 0..config.picard_max_iters {
        let grads = face_gradients(&guess, profile);
        let (kx, ky) =
            face_conductivities(model, &grads, cache, config.grad_regularization)?;
        let next = linear_dirichlet_solve(grid, profile, t_new, p_old, &kx, &ky, dt)?;
        last_update = next
            .iter()
            .zip(guess.values())
            .fold(0.0f64, |a, (n, g)| a.max((n - g).abs()));
        guess = guess.replace(next, t_new)?;
        if last_update <= config.picard_tol {
            return Ok(guess.values().to_vec());
        }
    }
    Err(Error::PicardNonConvergence { iters: config.picard_max_iters, last_update })
}

/// One backward-Euler step with Picard-frozen conductivities on the
/// regularized gradient magnitude.
pub fn step_implicit(
    field: &PressureField,
    model: &ConductivityModel,
    profile: &BoundaryProfile,
    dt: f64,
    config: &SolverConfig,
) -> Result<PressureField> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be positive and finite, got {dt}")));
    }
    let mut cache = FaceHintCache::default();
    let values = implicit_update(field, model, profile, dt, config, &mut cache)?;
    field.replace(values, field.time() + dt)
}

/// Solve `(I - dt·div(K∇·))p = p_old` with the given frozen face
/// conductivities and Dirichlet data at `t_new`. Thomas in 1D, conjugate
/// gradients (the operator is symmetric positive definite) in 2D.
fn linear_dirichlet_solve(
    grid: Grid,
    profile: &BoundaryProfile,
    t_new: f64,
    p_old: &[f64],
    kx: &[f64],
    ky: &[f64],
    dt: f64,
) -> Result<Vec<f64>> {
    let nx = grid.nx();
    let ny = grid.ny();
    let [hx, hy] = grid.spacing();
    let [lx, ly] = grid.extents();
    // transmissibility of x-face i (per unit: flux = c·Δp with Δp across δ)
    let cx = |i: usize, j: usize| -> f64 {
        let k = kx[j * (nx + 1) + i];
        let delta = if i == 0 || i == nx { 0.5 * hx } else { hx };
        k / (delta * hx)
    };
    let cy = |i: usize, j: usize| -> f64 {
        let k = ky[j * nx + i];
        let delta = if j == 0 || j == ny { 0.5 * hy } else { hy };
        k / (delta * hy)
    };

    if grid.dimension() == 1 {
        // tridiagonal backward-Euler system
        let n = nx;
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut rhs = p_old.to_vec();
        for i in 0..n {
            let cl = cx(i, 0);
            let cr = cx(i + 1, 0);
            diag[i] = 1.0 + dt * (cl + cr);
            if i == 0 {
                rhs[i] += dt * cl * profile.psi([0.0, 0.0], t_new);
            } else {
                lower[i] = -dt * cl;
            }
            if i == n - 1 {
                rhs[i] += dt * cr * profile.psi([lx, 0.0], t_new);
            } else {
                upper[i] = -dt * cr;
            }
        }
        return Ok(thomas(&lower, &diag, &upper, &rhs));
    }

    // 2D: matrix-free CG
    let n = grid.n_cells();
    let mut rhs = p_old.to_vec();
    for j in 0..ny {
        let yc = (j as f64 + 0.5) * hy;
        rhs[grid.idx(0, j)] += dt * cx(0, j) * profile.psi([0.0, yc], t_new);
        rhs[grid.idx(nx - 1, j)] += dt * cx(nx, j) * profile.psi([lx, yc], t_new);
    }
    for i in 0..nx {
        let xc = (i as f64 + 0.5) * hx;
        rhs[grid.idx(i, 0)] += dt * cy(i, 0) * profile.psi([xc, 0.0], t_new);
        rhs[grid.idx(i, ny - 1)] += dt * cy(i, ny) * profile.psi([xc, ly], t_new);
    }
    let apply = |x: &[f64], out: &mut Vec<f64>| {
        out.clear();
        out.resize(n, 0.0);
        for j in 0..ny {
            for i in 0..nx {
                let c = grid.idx(i, j);
                let (cl, cr) = (cx(i, j), cx(i + 1, j));
                let (cd, cu) = (cy(i, j), cy(i, j + 1));
                let mut v = x[c] * (1.0 + dt * (cl + cr + cd + cu));
                if i > 0 {
                    v -= dt * cl * x[grid.idx(i - 1, j)];
                }
                if i + 1 < nx {
                    v -= dt * cr * x[grid.idx(i + 1, j)];
                }
                if j > 0 {
                    v -= dt * cd * x[grid.idx(i, j - 1)];
                }
                if j + 1 < ny {
                    v -= dt * cu * x[grid.idx(i, j + 1)];
                }
                out[c] = v;
            }
        }
    };
    cg(apply, &rhs, p_old.to_vec(), 1e-13, 20 * n)
}

fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let xi = x[i] - c[i] * x[i + 1];
        x[i] = xi;
    }
    x
}

fn cg(
    apply: impl Fn(&[f64], &mut Vec<f64>),
    b: &[f64],
    x0: Vec<f64>,
    rel_tol: f64,
    max_iters: usize,
) -> Result<Vec<f64>> {
    let dot = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(x, y)| x * y).sum::<f64>();
    let bnorm = dot(b, b).sqrt().max(f64::MIN_POSITIVE);
    let mut x = x0;
    let mut ax = Vec::new();
    apply(&x, &mut ax);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let mut ap = Vec::new();
    for _ in 0..max_iters {
        if rs.sqrt() <= rel_tol * bnorm {
            return Ok(x);
        }
        apply(&p, &mut ap);
        let alpha = rs / dot(&p, &ap).max(f64::MIN_POSITIVE);
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_new = dot(&r, &r);
        let beta = rs_new / rs;
        rs = rs_new;
        for i in 0..p.len() {
            p[i] = r[i] + beta * p[i];
        }
    }
    if rs.sqrt() <= rel_tol * bnorm * 1e3 {
        return Ok(x);
    }
    Err(Error::NonConvergence { iters: max_iters, lo: rs.sqrt(), hi: bnorm })
}

// ---------------------------------------------------------------------------
// Norms, energy, forcing
// ---------------------------------------------------------------------------

/// Midpoint-rule `L^q` norm over cells: `(Σ |v|^q·vol)^{1/q}`.
pub fn lq_norm_cells(grid: Grid, values: &[f64], q: f64) -> f64 {
    assert!(q > 0.0, "norm exponent must be positive");
    let vol = grid.cell_volume();
    (values.iter().map(|v| v.abs().powf(q) * vol).sum::<f64>()).powf(1.0 / q)
}

/// `Σ v²·vol = ‖v‖²` over cells.
pub fn l2_sq_cells(grid: Grid, values: &[f64]) -> f64 {
    let vol = grid.cell_volume();
    values.iter().map(|v| v * v * vol).sum::<f64>()
}

/// `∫ |∇p|^q` by face quadrature: each face family covers the domain once,
/// so the full-magnitude sum over all families is divided by the dimension.
pub fn gradient_lq_integral(grads: &FaceGradients, q: f64) -> f64 {
    let grid = grads.grid;
    let n = grid.dimension() as f64;
    let nx = grid.nx();
    let ny = grid.ny();
    let mut acc = 0.0;
    for j in 0..ny {
        for i in 0..=nx {
            let f = j * (nx + 1) + i;
            let m = grads.x_magnitude(f);
            if m > 0.0 {
                acc += grads.x_weight(i, j) * m.powf(q);
            }
        }
    }
    if grid.dimension() == 2 {
        for j in 0..=ny {
            for i in 0..nx {
                let f = j * nx + i;
                let m = grads.y_magnitude(f);
                if m > 0.0 {
                    acc += grads.y_weight(i, j) * m.powf(q);
                }
            }
        }
    }
    acc / n
}

/// Cell-centered gradient magnitudes: arithmetic mean of the adjacent face
/// magnitudes (2 faces in 1D, 4 in 2D).
pub fn cell_gradient_magnitudes(grads: &FaceGradients) -> Vec<f64> {
    let grid = grads.grid;
    let nx = grid.nx();
    let ny = grid.ny();
    let mut out = vec![0.0; grid.n_cells()];
    for j in 0..ny {
        for i in 0..nx {
            let fl = j * (nx + 1) + i;
            let mut m = grads.x_magnitude(fl) + grads.x_magnitude(fl + 1);
            let mut count = 2.0;
            if grid.dimension() == 2 {
                m += grads.y_magnitude(j * nx + i) + grads.y_magnitude((j + 1) * nx + i);
                count = 4.0;
            }
            out[grid.idx(i, j)] = m / count;
        }
    }
    out
}

/// `p̄ = p - Ψ(·, t)` at cell centers.
pub fn pbar_values(field: &PressureField, profile: &BoundaryProfile) -> Vec<f64> {
    let grid = field.grid();
    let t = field.time();
    let mut out = field.values().to_vec();
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            out[grid.idx(i, j)] -= profile.psi(grid.cell_center(i, j), t);
        }
    }
    out
}

/// Energy `E(t) = ‖p̄‖² + Σ H(|∇p|)·vol` with cell-centered magnitudes.
pub fn energy(
    field: &PressureField,
    profile: &BoundaryProfile,
    model: &ConductivityModel,
) -> Result<f64> {
    let grid = field.grid();
    let pbar = pbar_values(field, profile);
    let grads = face_gradients(field, profile);
    let mags = cell_gradient_magnitudes(&grads);
    let h = model.energy_density_batch(&mags)?;
    Ok(l2_sq_cells(grid, &pbar) + h.iter().map(|v| v * grid.cell_volume()).sum::<f64>())
}

/// Exact discrete dissipation rate `Σ_f K_f·(normal gradient)²·w_f`; with
/// zero boundary data the explicit step satisfies
/// `Δ(½‖p‖²) + dt·dissipation = ½‖Δp‖²` identically.
pub fn dissipation_rate(
    field: &PressureField,
    profile: &BoundaryProfile,
    model: &ConductivityModel,
) -> Result<f64> {
    let grads = face_gradients(field, profile);
    let mut cache = FaceHintCache::default();
    let (kx, ky) = face_conductivities(model, &grads, &mut cache, 0.0)?;
    let grid = grads.grid;
    let nx = grid.nx();
    let ny = grid.ny();
    let mut acc = 0.0;
    for j in 0..ny {
        for i in 0..=nx {
            let f = j * (nx + 1) + i;
            acc += kx[f] * grads.x_normal[f] * grads.x_normal[f] * grads.x_weight(i, j);
        }
    }
    if grid.dimension() == 2 {
        for j in 0..=ny {
            for i in 0..nx {
                let f = j * nx + i;
                acc += ky[f] * grads.y_normal[f] * grads.y_normal[f] * grads.y_weight(i, j);
            }
        }
    }
    Ok(acc)
}

/// Boundary forcing `f(t) = ‖∇Ψ‖² + ‖Ψ_t‖^{(2-β₂)/(1-β₂)}`, plus the norms
/// `‖∇Ψ_t‖` and `‖Ψ_t‖`, all via midpoint quadrature of the closed forms.
pub fn boundary_forcing(
    profile: &BoundaryProfile,
    grid: Grid,
    beta2: f64,
    t: f64,
) -> (f64, f64, f64) {
    let vol = grid.cell_volume();
    let mut grad_sq = 0.0;
    let mut psit_sq = 0.0;
    let mut gradt_sq = 0.0;
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let x = grid.cell_center(i, j);
            let g = profile.grad(x, t);
            let gt = profile.grad_t(x, t);
            let pt = profile.psi_t(x, t);
            grad_sq += (g[0] * g[0] + g[1] * g[1]) * vol;
            gradt_sq += (gt[0] * gt[0] + gt[1] * gt[1]) * vol;
            psit_sq += pt * pt * vol;
        }
    }
    let psit_norm = psit_sq.sqrt();
    let f = grad_sq + psit_norm.powf((2.0 - beta2) / (1.0 - beta2));
    (f, gradt_sq.sqrt(), psit_norm)
}

// ---------------------------------------------------------------------------
// Diagnostics and the IBVP driver
// ---------------------------------------------------------------------------

/// One diagnostics sample. `grad_norm` is the integral `∫|∇p|^{2-β₂}`,
/// `h_integral` is `∫H(|∇p|)`, `energy = l2_pbar_sq + h_integral`, and
/// `dissipation` is the discrete rate `Σ K|∇p·n|²w`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub l2_pbar_sq: f64,
    pub grad_norm: f64,
    pub h_integral: f64,
    pub energy: f64,
    pub f: f64,
    pub env_f: f64,
    pub dissipation: f64,
}

/// Time series of diagnostics rows with the fixed CSV schema.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsSeries {
    pub rows: Vec<DiagnosticsRow>,
}

impl DiagnosticsSeries {
    pub const CSV_HEADER: &'static str =
        "t,l2_pbar_sq,grad_norm,h_integral,energy,f,env_f,dissipation";

    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.t, r.l2_pbar_sq, r.grad_norm, r.h_integral, r.energy, r.f, r.env_f,
                r.dissipation
            )?;
        }
        Ok(())
    }

    fn push_sample(
        &mut self,
        field: &PressureField,
        profile: &BoundaryProfile,
        model: &ConductivityModel,
    ) -> Result<()> {
        let grid = field.grid();
        let beta2 = model.beta2();
        let pbar = pbar_values(field, profile);
        let grads = face_gradients(field, profile);
        let mut cache = FaceHintCache::default();
        let (kx, ky) = face_conductivities(model, &grads, &mut cache, 0.0)?;
        let l2_pbar_sq = l2_sq_cells(grid, &pbar);
        let grad_norm = gradient_lq_integral(&grads, 2.0 - beta2);
        let mags = cell_gradient_magnitudes(&grads);
        let h = model.energy_density_batch(&mags)?;
        let h_integral: f64 = h.iter().map(|v| v * grid.cell_volume()).sum();
        let nx = grid.nx();
        let ny = grid.ny();
        let mut dissipation = 0.0;
        for j in 0..ny {
            for i in 0..=nx {
                let f = j * (nx + 1) + i;
                dissipation +=
                    kx[f] * grads.x_normal[f] * grads.x_normal[f] * grads.x_weight(i, j);
            }
        }
        if grid.dimension() == 2 {
            for j in 0..=ny {
                for i in 0..nx {
                    let f = j * nx + i;
                    dissipation +=
                        ky[f] * grads.y_normal[f] * grads.y_normal[f] * grads.y_weight(i, j);
                }
            }
        }
        let (fval, _, _) = boundary_forcing(profile, grid, beta2, field.time());
        let env_f = self.rows.last().map(|r| r.env_f.max(fval)).unwrap_or(fval);
        self.rows.push(DiagnosticsRow {
            t: field.time(),
            l2_pbar_sq,
            grad_norm,
            h_integral,
            energy: l2_pbar_sq + h_integral,
            f: fval,
            env_f,
            dissipation,
        });
        Ok(())
    }
}

/// Result of an IBVP integration.
#[derive(Debug, Clone)]
pub struct IbvpSolution {
    pub final_field: PressureField,
    pub diagnostics: DiagnosticsSeries,
    pub steps: usize,
    /// Largest one-step increase of `‖p‖` (meaningful for zero boundary
    /// data, where the explicit scheme must dissipate every step).
    pub max_l2_increase: f64,
    /// Sampled fields (populated when `config.keep_fields` is set).
    pub sampled_fields: Vec<PressureField>,
}

/// Integrate the IBVP to `horizon`, sampling diagnostics every
/// `config.sample_stride` steps (plus the initial and final states).
pub fn solve_ibvp(
    p0: &PressureField,
    profile: &BoundaryProfile,
    model: &ConductivityModel,
    horizon: f64,
    config: &SolverConfig,
) -> Result<IbvpSolution> {
    config.validate()?;
    if !(horizon > p0.time()) {
        return Err(Error::Domain(format!(
            "horizon {horizon} must exceed the initial time {}",
            p0.time()
        )));
    }
    let grid = p0.grid();
    let mut field = p0.clone();
    let mut cache = FaceHintCache::default();
    let mut diagnostics = DiagnosticsSeries::default();
    diagnostics.push_sample(&field, profile, model)?;
    let mut sampled_fields = if config.keep_fields { vec![field.clone()] } else { Vec::new() };
    let mut steps = 0usize;
    let mut max_l2_increase: f64 = 0.0;
    let mut l2_prev = l2_sq_cells(grid, field.values()).sqrt();
    let dt_cap = (horizon - p0.time()) / 64.0;

    while field.time() < horizon {
        let remaining = horizon - field.time();
        let (values, dt) = match config.stepper {
            StepperKind::Explicit => {
                if let Some(fixed) = config.fixed_dt {
                    let dt = fixed.min(remaining);
                    let out =
                        explicit_update(&field, model, profile, dt, config, &mut cache, true)?;
                    (out.values, dt)
                } else {
                    // probe pass: CFL from the current state, then commit
                    let probe =
                        explicit_update(&field, model, profile, 0.0, config, &mut cache, false)?;
                    let dt = admissible_from_kmax(grid, config.safety, probe.kmax)
                        .min(remaining)
                        .min(dt_cap);
                    let out =
                        explicit_update(&field, model, profile, dt, config, &mut cache, false)?;
                    (out.values, dt)
                }
            }
            StepperKind::Implicit => {
                let dt = config.fixed_dt.unwrap_or((horizon - p0.time()) / 2000.0).min(remaining);
                (implicit_update(&field, model, profile, dt, config, &mut cache)?, dt)
            }
        };
        field = field.replace(values, field.time() + dt)?;
        steps += 1;
        let l2_now = l2_sq_cells(grid, field.values()).sqrt();
        max_l2_increase = max_l2_increase.max(l2_now - l2_prev);
        l2_prev = l2_now;
        if steps % config.sample_stride == 0 || field.time() >= horizon {
            diagnostics.push_sample(&field, profile, model)?;
            if config.keep_fields {
                sampled_fields.push(field.clone());
            }
        }
    }
    Ok(IbvpSolution { final_field: field, diagnostics, steps, max_l2_increase, sampled_fields })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{SpatialShape, TimeShape};

    fn affine_profile() -> BoundaryProfile {
        BoundaryProfile::single(
            1.0,
            SpatialShape::Affine { intercept: 0.0, slope: [1.0, 0.0] },
            TimeShape::Constant,
        )
    }

    #[test]
    fn gradients_of_linear_field_1d() {
        let grid = Grid::new_1d(1.0, 10, 0.5).unwrap();
        let field = PressureField::from_fn(grid, 0.0, |x| x[0]).unwrap();
        let grads = face_gradients(&field, &affine_profile());
        for &g in &grads.x_normal {
            assert!((g - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn gradients_of_constant_field() {
        let grid = Grid::new_1d(1.0, 8, 0.5).unwrap();
        let field = PressureField::constant(grid, 5.0, 0.0).unwrap();
        let profile = BoundaryProfile::single(
            5.0,
            SpatialShape::Affine { intercept: 1.0, slope: [0.0, 0.0] },
            TimeShape::Constant,
        );
        let grads = face_gradients(&field, &profile);
        assert!(grads.x_normal.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn gradients_of_affine_field_2d_exact_including_transverse() {
        let grid = Grid::new_2d([1.0, 1.0], [6, 8], 0.5).unwrap();
        let profile = BoundaryProfile::single(
            1.0,
            SpatialShape::Affine { intercept: 0.0, slope: [1.0, 2.0] },
            TimeShape::Constant,
        );
        let field = PressureField::from_fn(grid, 0.0, |x| x[0] + 2.0 * x[1]).unwrap();
        let grads = face_gradients(&field, &profile);
        for f in 0..grads.x_normal.len() {
            assert!((grads.x_normal[f] - 1.0).abs() < 1e-12, "x normal at {f}");
            assert!((grads.x_trans[f] - 2.0).abs() < 1e-12, "x transverse at {f}");
        }
        for f in 0..grads.y_normal.len() {
            assert!((grads.y_normal[f] - 2.0).abs() < 1e-12, "y normal at {f}");
            assert!((grads.y_trans[f] - 1.0).abs() < 1e-12, "y transverse at {f}");
        }
    }

    #[test]
    fn constant_field_is_fixed_point_of_both_steppers() {
        let grid = Grid::new_1d(1.0, 16, 0.5).unwrap();
        let model = ConductivityModel::canonical_interpolated();
        let profile = BoundaryProfile::single(
            5.0,
            SpatialShape::Affine { intercept: 1.0, slope: [0.0, 0.0] },
            TimeShape::Constant,
        );
        let field = PressureField::constant(grid, 5.0, 0.0).unwrap();
        let cfg = SolverConfig::default();
        let stepped = step_explicit(&field, &model, &profile, 0.25, &cfg).unwrap();
        assert_eq!(stepped.values(), field.values());
        let stepped = step_implicit(&field, &model, &profile, 0.25, &cfg).unwrap();
        assert_eq!(stepped.values(), field.values());
    }

    #[test]
    fn linear_steady_state_is_preserved() {
        let grid = Grid::new_1d(1.0, 20, 0.5).unwrap();
        let model = ConductivityModel::canonical_interpolated();
        let profile = affine_profile();
        let mut field = PressureField::from_fn(grid, 0.0, |x| x[0]).unwrap();
        let cfg = SolverConfig::default();
        let dt = admissible_dt(&field, &model, &profile, &cfg).unwrap();
        for _ in 0..50 {
            field = step_explicit(&field, &model, &profile, dt, &cfg).unwrap();
        }
        for (i, &v) in field.values().iter().enumerate() {
            let x = grid.cell_center(i, 0)[0];
            assert!((v - x).abs() < 1e-12, "cell {i}: {v} vs {x}");
        }
        // implicit fixed point as well
        let f2 = step_implicit(&field, &model, &profile, 0.1, &cfg).unwrap();
        for (a, b) in f2.values().iter().zip(field.values()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn explicit_rejects_cfl_violation() {
        let grid = Grid::new_1d(1.0, 20, 0.5).unwrap();
        let model = ConductivityModel::canonical_interpolated();
        let profile = BoundaryProfile::zero();
        let field =
            PressureField::from_fn(grid, 0.0, |x| (std::f64::consts::PI * x[0]).sin()).unwrap();
        let cfg = SolverConfig::default();
        let adm = admissible_dt(&field, &model, &profile, &cfg).unwrap();
        let err = step_explicit(&field, &model, &profile, 10.0 * adm, &cfg);
        match err {
            Err(Error::CflViolation { admissible, .. }) => {
                assert!((admissible - adm).abs() < 1e-15)
            }
            other => panic!("expected CFL violation, got {other:?}"),
        }
    }

    #[test]
    fn explicit_decay_shrinks_norm_and_balances_energy() {
        let grid = Grid::new_1d(1.0, 100, 0.5).unwrap();
        let model = ConductivityModel::canonical_interpolated();
        let profile = BoundaryProfile::zero();
        let mut field =
            PressureField::from_fn(grid, 0.0, |x| (std::f64::consts::PI * x[0]).sin()).unwrap();
        let cfg = SolverConfig::default();
        for _ in 0..25 {
            let dt = admissible_dt(&field, &model, &profile, &cfg).unwrap();
            let before = l2_sq_cells(grid, field.values());
            let diss = dissipation_rate(&field, &profile, &model).unwrap();
            let next = step_explicit(&field, &model, &profile, dt, &cfg).unwrap();
            let after = l2_sq_cells(grid, next.values());
            assert!(after < before, "norm must decrease every explicit step");
            // exact discrete identity: Δ(½‖p‖²) + dt·D = ½‖Δp‖²
            let delta_sq: f64 = next
                .values()
                .iter()
                .zip(field.values())
                .map(|(a, b)| (a - b) * (a - b) * grid.cell_volume())
                .sum();
            // tolerance carries the cancellation error of differencing two
            // O(‖p‖²) quantities plus the relative error of the terms
            let residual = 0.5 * (after - before) + dt * diss;
            let tol = 1e-14 * before.max(1.0) + 1e-12 * (dt * diss).abs();
            assert!(
                (residual - 0.5 * delta_sq).abs() <= tol,
                "energy balance: residual {residual:e} vs half-increment {:e}",
                0.5 * delta_sq
            );
            field = next;
        }
    }

    #[test]
    fn implicit_tracks_explicit_reference() {
        let grid = Grid::new_1d(1.0, 50, 0.5).unwrap();
        let model = ConductivityModel::canonical_interpolated();
        let profile = BoundaryProfile::zero();
        let p0 =
            PressureField::from_fn(grid, 0.0, |x| (std::f64::consts::PI * x[0]).sin()).unwrap();
        let explicit_cfg = SolverConfig { sample_stride: 10_000, ..Default::default() };
        let reference = solve_ibvp(&p0, &profile, &model, 1.0, &explicit_cfg).unwrap();
        let dt0 = admissible_dt(&p0, &model, &profile, &explicit_cfg).unwrap();
        let implicit_cfg = SolverConfig {
            stepper: StepperKind::Implicit,
            fixed_dt: Some(10.0 * dt0),
            sample_stride: 10_000,
            ..Default::default()
        };
        let implicit = solve_ibvp(&p0, &profile, &model, 1.0, &implicit_cfg).unwrap();
        let n_ref = l2_sq_cells(grid, reference.final_field.values()).sqrt();
        let n_imp = l2_sq_cells(grid, implicit.final_field.values()).sqrt();
        assert!(
            (n_ref - n_imp).abs() <= 0.01 * n_ref,
            "implicit at 10x CFL within 1%: {n_imp} vs {n_ref}"
        );
    }

    #[test]
    fn implicit_constant_field_converges_in_one_iteration() {
        let grid = Grid::new_1d(1.0, 8, 0.5).unwrap();
        let model = ConductivityModel::canonical_rational();
        let profile = BoundaryProfile::single(
            2.0,
            SpatialShape::Affine { intercept: 1.0, slope: [0.0, 0.0] },
            TimeShape::Constant,
        );
        let field = PressureField::constant(grid, 2.0, 0.0).unwrap();
        let cfg = SolverConfig { picard_max_iters: 1, ..Default::default() };
        assert!(step_implicit(&field, &model, &profile, 0.5, &cfg).is_ok());
    }

    #[test]
    fn norms_and_energy_values() {
        let grid = Grid::new_1d(1.0, 64, 0.5).unwrap();
        assert!((lq_norm_cells(grid, &vec![2.0; 64], 2.0) - 2.0).abs() < 1e-14);
        // p = x: ∫|∇p|^{2-β₂} = 1 for any β₂
        let field = PressureField::from_fn(grid, 0.0, |x| x[0]).unwrap();
        let grads = face_gradients(&field, &affine_profile());
        assert!((gradient_lq_integral(&grads, 1.5) - 1.0).abs() < 1e-13);
        // ‖sin(πx)‖ → sqrt(1/2) within O(h²)
        let field =
            PressureField::from_fn(grid, 0.0, |x| (std::f64::consts::PI * x[0]).sin()).unwrap();
        let l2 = lq_norm_cells(grid, field.values(), 2.0);
        assert!((l2 - 0.5f64.sqrt()).abs() < 2e-4);
        // steady p = x with matching Ψ: E = H(1)·|U| and ‖p̄‖ = 0
        let model = ConductivityModel::canonical_interpolated();
        let field = PressureField::from_fn(grid, 0.0, |x| x[0]).unwrap();
        let e = energy(&field, &affine_profile(), &model).unwrap();
        let h1 = model.energy_density(1.0).unwrap();
        assert!((e - h1).abs() < 1e-10, "E = {e}, H(1) = {h1}");
        // constant field with matching constant boundary: E = 0
        let profile = BoundaryProfile::single(
            3.0,
            SpatialShape::Affine { intercept: 1.0, slope: [0.0, 0.0] },
            TimeShape::Constant,
        );
        let field = PressureField::constant(grid, 3.0, 0.0).unwrap();
        assert_eq!(energy(&field, &profile, &model).unwrap(), 0.0);
        // decay state at t = 0: E equals ‖p0‖² + Σ H(cell magnitude)·h with
        // H evaluated point by point (oracle for the batched path)
        let zero = BoundaryProfile::zero();
        let field =
            PressureField::from_fn(grid, 0.0, |x| (std::f64::consts::PI * x[0]).sin()).unwrap();
        let grads = face_gradients(&field, &zero);
        let mags = cell_gradient_magnitudes(&grads);
        let mut oracle = l2_sq_cells(grid, field.values());
        for &m in &mags {
            oracle += model.energy_density(m).unwrap() * grid.cell_volume();
        }
        let e = energy(&field, &zero, &model).unwrap();
        assert!((e - oracle).abs() <= 1e-10 * oracle, "batched H drifted: {e} vs {oracle}");
    }

    #[test]
    fn boundary_forcing_closed_forms() {
        let grid = Grid::new_1d(1.0, 200, 0.5).unwrap();
        // Ψ ≡ const: f = 0
        let constant = BoundaryProfile::single(
            4.0,
            SpatialShape::Affine { intercept: 1.0, slope: [0.0, 0.0] },
            TimeShape::Constant,
        );
        let (f, gt, pt) = boundary_forcing(&constant, grid, 0.5, 1.0);
        assert_eq!((f, gt, pt), (0.0, 0.0, 0.0));
        // Ψ = x·e^{-t}, β₂ = 1/2: f = e^{-2t} + (e^{-t}/√3)³
        let profile = BoundaryProfile::single(
            1.0,
            SpatialShape::Affine { intercept: 0.0, slope: [1.0, 0.0] },
            TimeShape::ExpDecay { rate: 1.0 },
        );
        let t = 0.8;
        let (f, gt, pt) = boundary_forcing(&profile, grid, 0.5, t);
        let e = (-t as f64).exp();
        assert!((pt - e / 3f64.sqrt()).abs() < 1e-5);
        // ∇Ψ_t = -e^{-t} is uniform, so its L² norm is e^{-t} exactly
        assert!((gt - e).abs() < 1e-12);
        assert!((f - (e * e + (e / 3f64.sqrt()).powi(3))).abs() < 2e-5);
    }

    #[test]
    fn solve_ibvp_steady_and_constant_scenarios() {
        let grid = Grid::new_1d(1.0, 16, 0.5).unwrap();
        let model = ConductivityModel::canonical_interpolated();
        // p0 = Ψ(·,0) with stationary affine Ψ: trajectory constant, ‖p̄‖ ≡ 0
        let profile = affine_profile();
        let p0 = PressureField::from_fn(grid, 0.0, |x| x[0]).unwrap();
        let sol = solve_ibvp(&p0, &profile, &model, 0.5, &SolverConfig::default()).unwrap();
        let k1 = model.conductivity(1.0).unwrap();
        for row in &sol.diagnostics.rows {
            assert!(row.l2_pbar_sq < 1e-24);
            assert!((row.grad_norm - 1.0).abs() < 1e-12);
            // uniform unit gradient: the dissipation stays at K(1)·|U|
            assert!((row.dissipation - k1).abs() < 1e-12);
        }
        // p0 ≡ 5 with Ψ ≡ 5
        let profile5 = BoundaryProfile::single(
            5.0,
            SpatialShape::Affine { intercept: 1.0, slope: [0.0, 0.0] },
            TimeShape::Constant,
        );
        let p0 = PressureField::constant(grid, 5.0, 0.0).unwrap();
        let sol = solve_ibvp(&p0, &profile5, &model, 2.0, &SolverConfig::default()).unwrap();
        assert!(sol.final_field.values().iter().all(|&v| v == 5.0));
    }

    #[test]
    fn env_f_column_is_nondecreasing() {
        let grid = Grid::new_1d(1.0, 32, 0.5).unwrap();
        let model = ConductivityModel::canonical_interpolated();
        // sinusoidal-in-time data: f is periodic, Env f eventually constant
        let profile = BoundaryProfile::single(
            0.3,
            SpatialShape::Affine { intercept: 0.0, slope: [1.0, 0.0] },
            TimeShape::Sinusoid { omega: 5.0 },
        );
        let p0 = PressureField::constant(grid, 0.0, 0.0).unwrap();
        let cfg = SolverConfig { sample_stride: 10, ..Default::default() };
        let sol = solve_ibvp(&p0, &profile, &model, 3.0, &cfg).unwrap();
        let env: Vec<f64> = sol.diagnostics.rows.iter().map(|r| r.env_f).collect();
        assert!(env.windows(2).all(|w| w[1] >= w[0]));
        let fmax = sol.diagnostics.rows.iter().map(|r| r.f).fold(0.0f64, f64::max);
        assert_eq!(env.last().copied().unwrap(), fmax);
    }

    #[test]
    fn max_principle_on_a_forced_run() {
        let grid = Grid::new_1d(1.0, 40, 0.5).unwrap();
        let model = ConductivityModel::canonical_piecewise();
        let profile = BoundaryProfile::single(
            0.8,
            SpatialShape::Affine { intercept: 0.2, slope: [0.5, 0.0] },
            TimeShape::Sinusoid { omega: 2.0 },
        );
        let mut field = PressureField::from_fn(grid, 0.0, |x| {
            0.5 * (3.0 * std::f64::consts::PI * x[0]).sin()
        })
        .unwrap();
        let cfg = SolverConfig::default();
        let mut lo = field.values().iter().cloned().fold(f64::INFINITY, f64::min);
        let mut hi = field.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for _ in 0..400 {
            let t = field.time();
            for &x in &[0.0, 1.0] {
                let b = profile.psi([x, 0.0], t);
                lo = lo.min(b);
                hi = hi.max(b);
            }
            let dt = admissible_dt(&field, &model, &profile, &cfg).unwrap().min(1e-3);
            field = step_explicit(&field, &model, &profile, dt, &cfg).unwrap();
            for &v in field.values() {
                assert!(v >= lo - 1e-12 && v <= hi + 1e-12, "max principle violated: {v}");
            }
        }
    }

    #[test]
    fn grid_convergence_of_decay_norm() {
        // ‖p(T)‖ at T = 0.5 under h → h/2 → h/4 refinement: observed order ≥ 1
        let model = ConductivityModel::canonical_interpolated();
        let profile = BoundaryProfile::zero();
        let mut norms = Vec::new();
        for n in [16usize, 32, 64] {
            let grid = Grid::new_1d(1.0, n, 0.5).unwrap();
            let p0 = PressureField::from_fn(grid, 0.0, |x| {
                (std::f64::consts::PI * x[0]).sin()
            })
            .unwrap();
            let cfg = SolverConfig { sample_stride: 100_000, ..Default::default() };
            let sol = solve_ibvp(&p0, &profile, &model, 0.5, &cfg).unwrap();
            norms.push(l2_sq_cells(grid, sol.final_field.values()).sqrt());
        }
        let e1 = (norms[0] - norms[1]).abs();
        let e2 = (norms[1] - norms[2]).abs();
        let order = (e1 / e2).log2();
        assert!(order >= 1.0, "observed order {order:.2} from norms {norms:?}");
    }

    #[test]
    fn csv_schema_is_stable() {
        assert_eq!(
            DiagnosticsSeries::CSV_HEADER,
            "t,l2_pbar_sq,grad_norm,h_integral,energy,f,env_f,dissipation"
        );
        let mut series = DiagnosticsSeries::default();
        series.rows.push(DiagnosticsRow {
            t: 0.0,
            l2_pbar_sq: 1.0,
            grad_norm: 2.0,
            h_integral: 3.0,
            energy: 4.0,
            f: 5.0,
            env_f: 5.0,
            dissipation: 6.0,
        });
        let mut buf = Vec::new();
        series.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,l2_pbar_sq,"));
        assert!(text.lines().nth(1).unwrap().split(',').count() == 8);
    }
}
