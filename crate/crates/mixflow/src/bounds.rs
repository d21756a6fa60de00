//! Pointwise and pairwise verification of the conductivity inequalities.
//!
//! Each check sweeps a grid (or a set of vector pairs) and returns a
//! [`CheckReport`]; inequality violations are recorded as data, never raised
//! as errors. Margins are normalized by the larger side of the inequality so
//! a single relative slack absorbs roundoff without masking real violations.

use crate::conductivity::{
    perturbation_constants, reference_kernel, CoefficientVector, ConductivityModel,
    ExponentProfile, InterpolatedModel,
};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Default relative slack for exact inequalities.
pub const DEFAULT_SLACK: f64 = 1e-12;
/// Relative tolerance for the analytic-vs-finite-difference derivative match.
pub const FD_MATCH_TOL: f64 = 1e-6;

/// A violating input retained for diagnosis (at most 10 per report).
#[derive(Debug, Clone)]
pub struct Witness {
    pub label: String,
    pub margin: f64,
}

/// Outcome of one inequality sweep.
///
/// `worst_margin` is the minimum over all observations of the normalized
/// margin `(LHS - RHS) / max(|LHS|, |RHS|)` with the inequality oriented as
/// `LHS ≥ RHS`; a point violates exactly when its margin drops below
/// `-slack`, so `n_violations == 0` iff `worst_margin >= -slack`.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub slack: f64,
    pub n_points: usize,
    pub n_violations: usize,
    pub worst_margin: f64,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, slack: f64) -> Self {
        Self {
            name: name.into(),
            slack,
            n_points: 0,
            n_violations: 0,
            worst_margin: f64::INFINITY,
            witnesses: Vec::new(),
        }
    }

    /// Record an observation with a pre-normalized margin.
    pub fn observe_normalized(&mut self, margin: f64, label: impl FnOnce() -> String) {
        self.n_points += 1;
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
        if !(margin >= -self.slack) {
            self.n_violations += 1;
            if self.witnesses.len() < 10 {
                self.witnesses.push(Witness { label: label(), margin });
            }
        }
    }

    /// Record the inequality `lhs >= rhs`, normalizing by the larger side.
    pub fn observe(&mut self, lhs: f64, rhs: f64, label: impl FnOnce() -> String) {
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        self.observe_normalized((lhs - rhs) / scale, label);
    }

    pub fn passed(&self) -> bool {
        self.n_violations == 0
    }

    /// One human-readable line per check.
    pub fn summary_line(&self) -> String {
        format!(
            "{}: {} | points={} violations={} worst_margin={:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.n_points,
            self.n_violations,
            if self.worst_margin.is_finite() { self.worst_margin } else { 0.0 },
        )
    }

    /// One machine-readable CSV record per check.
    pub fn record_line(&self) -> String {
        format!(
            "{},{},{},{:.17e},{}",
            self.name,
            self.n_points,
            self.n_violations,
            if self.worst_margin.is_finite() { self.worst_margin } else { 0.0 },
            if self.passed() { "pass" } else { "fail" },
        )
    }

    pub const RECORD_HEADER: &'static str = "check,n_points,n_violations,worst_margin,status";
}

fn merge(name: &str, slack: f64, parts: Vec<CheckReport>) -> CheckReport {
    let mut out = CheckReport::new(name, slack);
    for p in parts {
        out.n_points += p.n_points;
        out.n_violations += p.n_violations;
        out.worst_margin = out.worst_margin.min(p.worst_margin);
        for w in p.witnesses {
            if out.witnesses.len() < 10 {
                out.witnesses.push(w);
            }
        }
    }
    out
}

/// Logarithmically spaced grid of `n` points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// The 200-point log grid on `[1e-8, 1e8]` used by the verification suite,
/// with the origin prepended (every bound must also hold degenerately there).
pub fn standard_grid() -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend(log_grid(1e-8, 1e8, 200));
    g
}

// ---------------------------------------------------------------------------
// Pointwise checks
// ---------------------------------------------------------------------------

/// Sandwich `d₂K*(ξ) ≤ K(ξ) ≤ d₃K*(ξ)` on the grid.
pub fn check_sandwich(model: &ConductivityModel, xi_grid: &[f64]) -> Result<CheckReport> {
    let c = model.sandwich_constants();
    let mut report = CheckReport::new(format!("sandwich[{}]", model.name()), DEFAULT_SLACK);
    for &xi in xi_grid {
        let k = model.conductivity(xi)?;
        let ks = reference_kernel(c.beta1, c.beta2, xi);
        report.observe(k, c.d2 * ks, || format!("lower at xi={xi:e}"));
        report.observe(c.d3 * ks, k, || format!("upper at xi={xi:e}"));
    }
    Ok(report)
}

/// Derivative bounds `-β₂K/ξ ≤ K'(ξ) ≤ β₁K/ξ` on the (positive) grid.
/// Piecewise kink points are skipped: the bound is stated away from them.
pub fn check_derivative_bounds(model: &ConductivityModel, xi_grid: &[f64]) -> Result<CheckReport> {
    let b1 = model.beta1();
    let b2 = model.beta2();
    let kinks = model.kinks();
    let mut report =
        CheckReport::new(format!("derivative_bounds[{}]", model.name()), DEFAULT_SLACK);
    for &xi in xi_grid {
        if xi <= 0.0 {
            continue;
        }
        if let Some((z1, z2)) = kinks {
            if xi == z1 || xi == z2 {
                continue;
            }
        }
        let k = model.conductivity(xi)?;
        let kp = model.conductivity_prime(xi)?;
        report.observe(kp, -b2 * k / xi, || format!("lower at xi={xi:e}"));
        report.observe(b1 * k / xi, kp, || format!("upper at xi={xi:e}"));
    }
    Ok(report)
}

/// Analytic `K'` against the central difference of `K`, relative tolerance
/// [`FD_MATCH_TOL`], on smooth regions (kink neighborhoods excluded).
pub fn check_derivative_fd_match(
    model: &ConductivityModel,
    xi_grid: &[f64],
) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("derivative_fd_match[{}]", model.name()), 0.0);
    let rel_step = 6e-6;
    for &xi in xi_grid {
        if xi <= 0.0 {
            continue;
        }
        let h = xi * rel_step;
        if let Some((z1, z2)) = model.kinks() {
            // stay clear of the kinks so the stencil sees one smooth branch
            if (xi - z1).abs() <= (4.0 * h).max(1e-3 * z1)
                || (xi - z2).abs() <= (4.0 * h).max(1e-3 * z2)
            {
                continue;
            }
        }
        let fd = (model.conductivity(xi + h)? - model.conductivity(xi - h)?) / (2.0 * h);
        let exact = model.conductivity_prime(xi)?;
        let scale = exact.abs().max(model.conductivity(xi)? / xi).max(f64::MIN_POSITIVE);
        report.observe_normalized(FD_MATCH_TOL - (fd - exact).abs() / scale, || {
            format!("fd mismatch at xi={xi:e}: analytic={exact:e} fd={fd:e}")
        });
    }
    Ok(report)
}

/// `ξ^m K(ξ)` nondecreasing along the grid (checked on consecutive points).
pub fn check_weighted_increasing(
    model: &ConductivityModel,
    xi_grid: &[f64],
    m: f64,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        format!("weighted_increasing[{}][m={m}]", model.name()),
        DEFAULT_SLACK,
    );
    let mut prev: Option<(f64, f64)> = None;
    for &xi in xi_grid {
        let v = model.conductivity(xi)? * if xi == 0.0 { 0.0 } else { xi.powf(m) };
        if let Some((pxi, pv)) = prev {
            report.observe(v, pv, || format!("decrease between xi={pxi:e} and xi={xi:e}"));
        }
        prev = Some((xi, v));
    }
    Ok(report)
}

/// Two-sided growth bound on `K(ξ)ξ^m` for `m ≥ β₂`:
/// `d₂(δ/(1+δ))^{β₁+β₂}(ξ^{m-β₂} - δ^{m-β₂}) ≤ K(ξ)ξ^m ≤ d₃ξ^{m-β₂}`.
pub fn check_weighted_growth(
    model: &ConductivityModel,
    xi_grid: &[f64],
    m: f64,
    delta: f64,
) -> Result<CheckReport> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let c = model.sandwich_constants();
    let mut report = CheckReport::new(
        format!("weighted_growth[{}][m={m},delta={delta}]", model.name()),
        DEFAULT_SLACK,
    );
    let shape = (delta / (1.0 + delta)).powf(c.beta1 + c.beta2);
    for &xi in xi_grid {
        let kxm = model.conductivity(xi)? * if xi == 0.0 { 0.0 } else { xi.powf(m) };
        let pow = |x: f64| if x == 0.0 { 0.0 } else { x.powf(m - c.beta2) };
        report.observe(kxm, c.d2 * shape * (pow(xi) - pow(delta)), || {
            format!("lower at xi={xi:e}")
        });
        report.observe(c.d3 * pow(xi), kxm, || format!("upper at xi={xi:e}"));
    }
    Ok(report)
}

/// Global bound `K(ξ) ≤ d₄ = d₃K*(ξ_c)`.
pub fn check_global_bound(model: &ConductivityModel, xi_grid: &[f64]) -> Result<CheckReport> {
    let c = model.sandwich_constants();
    let mut report = CheckReport::new(format!("global_bound[{}]", model.name()), DEFAULT_SLACK);
    for &xi in xi_grid {
        let k = model.conductivity(xi)?;
        report.observe(c.d4, k, || format!("K exceeds d4 at xi={xi:e}"));
    }
    Ok(report)
}

/// Energy-density comparisons on the grid:
/// `(d₂/d₃)Kξ² - d₂K*(ξ_c)ξ_c² ≤ H(ξ) ≤ 2Kξ²` and
/// `d₂(δ/(1+δ))^{β₁+β₂}(ξ^{2-β₂} - δ^{2-β₂}) ≤ H(ξ) ≤ 2d₃ξ^{2-β₂}`.
pub fn check_energy_density_bounds(
    model: &ConductivityModel,
    xi_grid: &[f64],
    delta: f64,
) -> Result<CheckReport> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let c = model.sandwich_constants();
    let mut report = CheckReport::new(
        format!("energy_density_bounds[{}][delta={delta}]", model.name()),
        DEFAULT_SLACK,
    );
    let shape = (delta / (1.0 + delta)).powf(c.beta1 + c.beta2);
    let offset = c.d2 * c.k_star_at_xi_c * c.xi_c * c.xi_c;
    for &xi in xi_grid {
        let h = model.energy_density(xi)?;
        let kxx = model.conductivity(xi)? * xi * xi;
        let pow = |x: f64| if x == 0.0 { 0.0 } else { x.powf(2.0 - c.beta2) };
        report.observe(h, c.d2 / c.d3 * kxx - offset, || format!("K-lower at xi={xi:e}"));
        report.observe(2.0 * kxx, h, || format!("K-upper at xi={xi:e}"));
        report.observe(h, c.d2 * shape * (pow(xi) - pow(delta)), || {
            format!("power-lower at xi={xi:e}")
        });
        report.observe(2.0 * c.d3 * pow(xi), h, || format!("power-upper at xi={xi:e}"));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Pairwise (vector) checks
// ---------------------------------------------------------------------------

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Degenerate monotonicity of the flux map `y ↦ K(|y|)y`:
/// `(K(|y'|)y' - K(|y|)y)·(y'-y) ≥ d₅|y-y'|^{2+β₁}/(1+|y|+|y'|)^{β₁+β₂}`.
///
/// `d5_scale` is a fault-injection hook for mutation tests; production
/// callers pass 1.
pub fn check_monotonicity_scaled(
    model: &ConductivityModel,
    pairs: &[(Vec<f64>, Vec<f64>)],
    d5_scale: f64,
) -> Result<CheckReport> {
    let c = model.sandwich_constants();
    let d5 = c.d5 * d5_scale;
    let parts: Vec<CheckReport> = pairs
        .par_chunks(2048.max(pairs.len() / 64 + 1))
        .map(|chunk| {
            let mut rep = CheckReport::new("part", DEFAULT_SLACK);
            for (y, yp) in chunk {
                let ny = norm(y);
                let nyp = norm(yp);
                let ky = model.conductivity(ny).expect("conductivity on |y|");
                let kyp = model.conductivity(nyp).expect("conductivity on |y'|");
                let lhs: f64 = yp
                    .iter()
                    .zip(y)
                    .map(|(a, b)| (kyp * a - ky * b) * (a - b))
                    .sum();
                let diff: f64 =
                    yp.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                let rhs =
                    d5 * diff.powf(2.0 + c.beta1) / (1.0 + ny + nyp).powf(c.beta1 + c.beta2);
                rep.observe(lhs, rhs, || format!("pair y={y:?} y'={yp:?}"));
            }
            rep
        })
        .collect();
    Ok(merge(&format!("monotonicity[{}]", model.name()), DEFAULT_SLACK, parts))
}

pub fn check_monotonicity(
    model: &ConductivityModel,
    pairs: &[(Vec<f64>, Vec<f64>)],
) -> Result<CheckReport> {
    check_monotonicity_scaled(model, pairs, 1.0)
}

/// Perturbed monotonicity across two coefficient vectors (interpolated law):
/// the `y'` flux uses `ā⁽¹⁾`, the `y` flux uses `ā⁽²⁾`, and the penalty term
/// is evaluated at the coordinate-wise minimum `ā⁽¹⁾ ∧ ā⁽²⁾`:
///
/// ```text
/// (K(|y'|,ā⁽¹⁾)y' - K(|y|,ā⁽²⁾)y)·(y'-y)
///   ≥ d₆|y-y'|^{2+β₁}/(1+|y|+|y'|)^{β₁+β₂}
///   - d₇·K(|y|∨|y'|, ā⁽¹⁾∧ā⁽²⁾)·(|y|∨|y'|)·|ā⁽¹⁾-ā⁽²⁾|·|y-y'|
/// ```
pub fn check_perturbed_monotonicity(
    profile: &ExponentProfile,
    a1: &CoefficientVector,
    a2: &CoefficientVector,
    pairs: &[(Vec<f64>, Vec<f64>)],
) -> Result<CheckReport> {
    let (d6, d7) = perturbation_constants(profile, a1, a2)?;
    let model1 = InterpolatedModel::new(profile.clone(), a1.clone())?;
    let model2 = InterpolatedModel::new(profile.clone(), a2.clone())?;
    let model_min = InterpolatedModel::new(profile.clone(), a1.coordinate_min(a2)?)?;
    let dist = a1.distance(a2)?;
    let b1 = profile.beta1();
    let b2 = profile.beta2();
    let parts: Vec<CheckReport> = pairs
        .par_chunks(2048.max(pairs.len() / 64 + 1))
        .map(|chunk| {
            let mut rep = CheckReport::new("part", DEFAULT_SLACK);
            for (y, yp) in chunk {
                let ny = norm(y);
                let nyp = norm(yp);
                let k1 = model1.conductivity(nyp).expect("conductivity");
                let k2 = model2.conductivity(ny).expect("conductivity");
                let lhs: f64 = yp
                    .iter()
                    .zip(y)
                    .map(|(a, b)| (k1 * a - k2 * b) * (a - b))
                    .sum();
                let diff: f64 =
                    yp.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                let vmax = ny.max(nyp);
                let kmin = model_min.conductivity(vmax).expect("conductivity");
                let rhs = d6 * diff.powf(2.0 + b1) / (1.0 + ny + nyp).powf(b1 + b2)
                    - d7 * kmin * vmax * dist * diff;
                rep.observe(lhs, rhs, || format!("pair y={y:?} y'={yp:?}"));
            }
            rep
        })
        .collect();
    Ok(merge("perturbed_monotonicity", DEFAULT_SLACK, parts))
}

/// Uniform pairs in `[-range, range]^dim`, deterministic in the seed.
pub fn sample_pairs(seed: u64, count: usize, dim: usize, range: f64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut draw =
                || (0..dim).map(|_| rng.gen_range(-range..range)).collect::<Vec<f64>>();
            (draw(), draw())
        })
        .collect()
}

/// Adversarial pairs: collinear through the origin (the degenerate case of
/// the monotonicity argument) and near-equal pairs.
pub fn adversarial_pairs(
    seed: u64,
    count: usize,
    dim: usize,
    range: f64,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let dir: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm(&dir).max(1e-9);
        let dir: Vec<f64> = dir.iter().map(|c| c / n).collect();
        if i % 2 == 0 {
            // segment [y, y'] straddles the origin
            let t1 = rng.gen_range(0.0..range);
            let t2 = -rng.gen_range(0.0..range);
            out.push((
                dir.iter().map(|c| c * t1).collect(),
                dir.iter().map(|c| c * t2).collect(),
            ));
        } else {
            let base: Vec<f64> = (0..dim).map(|_| rng.gen_range(-range..range)).collect();
            let eps = 10f64.powf(rng.gen_range(-9.0..-3.0));
            out.push((
                base.clone(),
                base.iter().zip(&dir).map(|(b, d)| b + eps * d).collect(),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Envelope and ODE comparison
// ---------------------------------------------------------------------------

/// A nondecreasing majorant sampled on an increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Running maximum: the minimal nondecreasing majorant on the sample points.
pub fn envelope(times: &[f64], values: &[f64]) -> Result<Envelope> {
    if times.len() != values.len() {
        return Err(Error::Shape(format!(
            "times and values must have equal length ({} vs {})",
            times.len(),
            values.len()
        )));
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Shape(format!(
                "times must be strictly increasing; violated at {} -> {}",
                w[0], w[1]
            )));
        }
    }
    let mut running = f64::NEG_INFINITY;
    let out = values
        .iter()
        .map(|&v| {
            running = running.max(v);
            running
        })
        .collect();
    Ok(Envelope { times: times.to_vec(), values: out })
}

/// Upper bound `y(0) + [Env(f/h)]^{1/θ}` for solutions of
/// `y' ≤ -h(t)yᶿ + f(t)`, evaluated along sampled series.
pub fn ode_comparison_bound(
    y0: f64,
    theta: f64,
    h_series: &[f64],
    f_series: &[f64],
) -> Result<Vec<f64>> {
    if !(theta > 0.0) {
        return Err(Error::Domain(format!("theta must be positive, got {theta}")));
    }
    if h_series.len() != f_series.len() {
        return Err(Error::Shape(format!(
            "h and f series must have equal length ({} vs {})",
            h_series.len(),
            f_series.len()
        )));
    }
    let mut running = f64::NEG_INFINITY;
    h_series
        .iter()
        .zip(f_series)
        .map(|(&h, &f)| {
            if !(h > 0.0) {
                return Err(Error::Domain(format!("h(t) must be positive, got {h}")));
            }
            running = running.max(f / h);
            Ok(y0 + running.max(0.0).powf(1.0 / theta))
        })
        .collect()
}

/// Degree condition `β₂ ≤ 4/(n+2)` gating the Sobolev embedding used by the
/// energy estimates.
pub fn degree_condition(beta2: f64, dimension: usize) -> bool {
    beta2 <= 4.0 / (dimension as f64 + 2.0)
}

// ---------------------------------------------------------------------------
// Full verification suite
// ---------------------------------------------------------------------------

/// Knobs for [`run_model_suite`]. `d5_scale` is a fault-injection hook used
/// by mutation tests (production callers keep 1.0).
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub d5_scale: f64,
    pub monotonicity_pairs: usize,
    pub adversarial_pairs: usize,
    pub perturbation_pairs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            d5_scale: 1.0,
            monotonicity_pairs: 10_000,
            adversarial_pairs: 1_000,
            perturbation_pairs: 2_000,
        }
    }
}

/// Run every inequality check against one model and collect the reports.
pub fn run_model_suite(model: &ConductivityModel, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let grid = standard_grid();
    let fd_grid = log_grid(1e-4, 1e4, 120);
    let mut reports = vec![
        check_sandwich(model, &grid)?,
        check_derivative_bounds(model, &grid)?,
        check_derivative_fd_match(model, &fd_grid)?,
        check_global_bound(model, &grid)?,
    ];
    for m in [model.beta2(), 1.0, 2.0] {
        reports.push(check_weighted_increasing(model, &grid, m)?);
    }
    for delta in [0.1, 1.0] {
        reports.push(check_weighted_growth(model, &grid, 2.0, delta)?);
        reports.push(check_energy_density_bounds(model, &grid, delta)?);
    }
    let mut pairs = sample_pairs(cfg.seed, cfg.monotonicity_pairs, 2, 10.0);
    pairs.extend(adversarial_pairs(cfg.seed, cfg.adversarial_pairs, 2, 10.0));
    reports.push(check_monotonicity_scaled(model, &pairs, cfg.d5_scale)?);
    if let ConductivityModel::Interpolated(im) = model {
        // perturb the model's own coefficients by ±10% on the positive edges
        let mut a2 = im.coefficients().entries().to_vec();
        a2[0] *= 1.1;
        let last = a2.len() - 1;
        a2[last] *= 0.9;
        let a2 = CoefficientVector::new(a2)?;
        let ppairs = sample_pairs(cfg.seed ^ 0x5851_f42d, cfg.perturbation_pairs, 2, 10.0);
        reports.push(check_perturbed_monotonicity(
            im.profile(),
            im.coefficients(),
            &a2,
            &ppairs,
        )?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sandwich_canonical_clean() {
        let model = ConductivityModel::canonical_interpolated();
        let rep = check_sandwich(&model, &standard_grid()).unwrap();
        assert!(rep.passed(), "{}", rep.summary_line());
        assert_eq!(rep.n_points, 402);
        assert!(rep.worst_margin >= -DEFAULT_SLACK);
    }

    #[test]
    fn derivative_bounds_clean_for_all_models() {
        let grid = standard_grid();
        for model in [
            ConductivityModel::canonical_piecewise(),
            ConductivityModel::canonical_interpolated(),
            ConductivityModel::canonical_rational(),
            ConductivityModel::canonical_multiplicative(),
        ] {
            let rep = check_derivative_bounds(&model, &grid).unwrap();
            assert!(rep.passed(), "{}", rep.summary_line());
        }
    }

    #[test]
    fn plateau_point_has_positive_margin() {
        let model = ConductivityModel::canonical_piecewise();
        let rep = check_derivative_bounds(&model, &[4.5]).unwrap();
        assert!(rep.passed());
        assert!(rep.worst_margin > 0.0, "K' = 0 sits strictly inside the bounds");
    }

    #[test]
    fn monotonicity_examples() {
        let model = ConductivityModel::canonical_interpolated();
        // degenerate pair: both sides are exactly zero
        let rep = check_monotonicity(&model, &[(vec![1.0, 2.0], vec![1.0, 2.0])]).unwrap();
        assert!(rep.passed());
        // y = 0, y' = e1: LHS = K(1) ≈ 0.52489, RHS = d5/2^{3/2} ≈ 0.0055243
        let lhs = model.conductivity(1.0).unwrap();
        assert!((lhs - 0.5248885986564048).abs() < 1e-12);
        let rhs = 0.015625 / 2f64.powf(1.5);
        assert!((rhs - 0.005524271728019903).abs() < 1e-15);
        assert!(lhs > rhs);
        let rep =
            check_monotonicity(&model, &[(vec![0.0, 0.0], vec![1.0, 0.0])]).unwrap();
        assert!(rep.passed());
        assert!(rep.worst_margin > 0.5, "margin is wide for this pair");
    }

    #[test]
    fn monotonicity_symmetric_under_swap() {
        let model = ConductivityModel::canonical_rational();
        let pairs = sample_pairs(7, 200, 2, 10.0);
        let swapped: Vec<_> = pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        let r1 = check_monotonicity(&model, &pairs).unwrap();
        let r2 = check_monotonicity(&model, &swapped).unwrap();
        assert_eq!(r1.n_violations, r2.n_violations);
        assert_eq!(r1.worst_margin, r2.worst_margin);
    }

    #[test]
    fn monotonicity_random_sweep_all_models() {
        let mut pairs = sample_pairs(11, 2_000, 2, 10.0);
        pairs.extend(adversarial_pairs(11, 200, 2, 10.0));
        for model in [
            ConductivityModel::canonical_piecewise(),
            ConductivityModel::canonical_interpolated(),
            ConductivityModel::canonical_rational(),
            ConductivityModel::canonical_multiplicative(),
        ] {
            let rep = check_monotonicity(&model, &pairs).unwrap();
            assert!(rep.passed(), "{}", rep.summary_line());
        }
        for dim in [1usize, 3] {
            let pairs = sample_pairs(13, 500, dim, 10.0);
            let rep =
                check_monotonicity(&ConductivityModel::canonical_interpolated(), &pairs)
                    .unwrap();
            assert!(rep.passed());
        }
    }

    #[test]
    fn corrupted_d5_is_caught() {
        let model = ConductivityModel::canonical_interpolated();
        let pairs = sample_pairs(3, 2_000, 2, 10.0);
        let rep = check_monotonicity_scaled(&model, &pairs, 1e3).unwrap();
        assert!(!rep.passed(), "inflating d5 by 10^3 must produce violations");
        assert!(!rep.witnesses.is_empty() && rep.witnesses.len() <= 10);
    }

    #[test]
    fn perturbed_monotonicity_cases() {
        let profile = ExponentProfile::new(0.5, vec![1.0]).unwrap();
        let a1 = CoefficientVector::new(vec![1.0, 0.0, 1.0]).unwrap();
        let a2 = CoefficientVector::new(vec![1.1, 0.0, 0.9]).unwrap();
        // identical vectors: the penalty term vanishes
        let rep = check_perturbed_monotonicity(
            &profile,
            &a1,
            &a1,
            &[(vec![0.5, -0.25], vec![-2.0, 1.0]), (vec![1.0, 1.0], vec![1.0, 1.0])],
        )
        .unwrap();
        assert!(rep.passed());
        let pairs = sample_pairs(17, 3_000, 2, 10.0);
        let rep = check_perturbed_monotonicity(&profile, &a1, &a2, &pairs).unwrap();
        assert!(rep.passed(), "{}", rep.summary_line());
    }

    #[test]
    fn energy_density_bounds_examples() {
        let model = ConductivityModel::canonical_piecewise();
        // xi = 3: H = 2 while 2Kξ² = 6, so the upper bound holds with room
        let rep = check_energy_density_bounds(&model, &[0.0, 3.0], 1.0).unwrap();
        assert!(rep.passed(), "{}", rep.summary_line());
        let grid = log_grid(1e-6, 1e6, 60);
        for delta in [0.1, 1.0] {
            let rep = check_energy_density_bounds(
                &ConductivityModel::canonical_rational(),
                &grid,
                delta,
            )
            .unwrap();
            assert!(rep.passed(), "{}", rep.summary_line());
        }
    }

    #[test]
    fn envelope_examples() {
        let e = envelope(&[0.0, 1.0, 2.0], &[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(e.values, vec![3.0, 3.0, 3.0]);
        let e = envelope(&[0.0, 1.0, 2.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        // decaying samples stay pinned at the first value
        let times: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let vals: Vec<f64> = times.iter().map(|t| (-t).exp()).collect();
        let e = envelope(&times, &vals).unwrap();
        assert!(e.values.iter().all(|&v| v == 1.0));
        assert!(envelope(&[0.0, 0.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn ode_bound_examples() {
        // y' = -y + 1, y0 = 2: bound ≡ 3 and the exact y(t) = 1 + e^{-t} ≤ 3
        let n = 200;
        let h = vec![1.0; n];
        let f = vec![1.0; n];
        let bound = ode_comparison_bound(2.0, 1.0, &h, &f).unwrap();
        for (i, &b) in bound.iter().enumerate() {
            assert_eq!(b, 3.0);
            let t = i as f64 * 0.05;
            assert!(1.0 + (-t).exp() <= b);
        }
        let f0 = vec![0.0; n];
        let bound = ode_comparison_bound(2.0, 1.0, &h, &f0).unwrap();
        assert!(bound.iter().all(|&b| b == 2.0));
        assert!(ode_comparison_bound(1.0, 1.0, &[0.0], &[1.0]).is_err());
        assert!(ode_comparison_bound(1.0, -1.0, &[1.0], &[1.0]).is_err());
    }

    #[test]
    fn ode_bound_dominates_integrated_solution() {
        // y' = -y³ + t·e^{-t}, θ = 3, h ≡ 1, integrated by RK4 at dt = 1e-4
        let dt = 1e-4;
        let steps = 200_000;
        let rhs = |t: f64, y: f64| -y * y * y + t * (-t).exp();
        let mut y = 0.5;
        let mut t = 0.0;
        let mut times = vec![0.0];
        let mut ys = vec![y];
        for i in 1..=steps {
            let k1 = rhs(t, y);
            let k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
            let k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
            let k4 = rhs(t + dt, y + dt * k3);
            y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t = i as f64 * dt;
            if i % 1000 == 0 {
                times.push(t);
                ys.push(y);
            }
        }
        let f: Vec<f64> = times.iter().map(|&t| t * (-t).exp()).collect();
        let h = vec![1.0; times.len()];
        let bound = ode_comparison_bound(ys[0], 3.0, &h, &f).unwrap();
        for ((&yv, &bv), &tv) in ys.iter().zip(&bound).zip(&times) {
            assert!(yv <= bv + 1e-12, "y({tv}) = {yv} exceeds bound {bv}");
        }
    }

    #[test]
    fn degree_condition_cases() {
        assert!(degree_condition(0.99, 2));
        assert!(degree_condition(0.5, 3));
        assert!(!degree_condition(0.9, 3));
    }

    #[test]
    fn suite_is_clean_for_all_models_and_deterministic() {
        let cfg = SuiteConfig {
            monotonicity_pairs: 500,
            adversarial_pairs: 100,
            perturbation_pairs: 300,
            ..Default::default()
        };
        for model in [
            ConductivityModel::canonical_piecewise(),
            ConductivityModel::canonical_interpolated(),
            ConductivityModel::canonical_rational(),
            ConductivityModel::canonical_multiplicative(),
        ] {
            let r1 = run_model_suite(&model, &cfg).unwrap();
            assert!(
                r1.iter().all(|r| r.passed()),
                "{:?}",
                r1.iter().map(|r| r.summary_line()).collect::<Vec<_>>()
            );
            let r2 = run_model_suite(&model, &cfg).unwrap();
            let lines1: Vec<String> = r1.iter().map(|r| r.record_line()).collect();
            let lines2: Vec<String> = r2.iter().map(|r| r.record_line()).collect();
            assert_eq!(lines1, lines2, "fixed seed must reproduce bit-identical reports");
        }
    }

    proptest! {
        #[test]
        fn envelope_is_idempotent(vals in proptest::collection::vec(-1e6f64..1e6, 1..60)) {
            let times: Vec<f64> = (0..vals.len()).map(|i| i as f64).collect();
            let once = envelope(&times, &vals).unwrap();
            let twice = envelope(&times, &once.values).unwrap();
            prop_assert_eq!(&once.values, &twice.values);
            for w in once.values.windows(2) {
                prop_assert!(w[1] >= w[0]);
            }
        }

        #[test]
        fn ode_bound_monotone_in_y0_and_f(
            y0a in 0.0f64..5.0, dy in 0.0f64..5.0,
            fs in proptest::collection::vec(0.0f64..10.0, 2..40),
            bump in 0.0f64..3.0,
        ) {
            let h = vec![0.7; fs.len()];
            let b1 = ode_comparison_bound(y0a, 1.5, &h, &fs).unwrap();
            let b2 = ode_comparison_bound(y0a + dy, 1.5, &h, &fs).unwrap();
            let fs_up: Vec<f64> = fs.iter().map(|v| v + bump).collect();
            let b3 = ode_comparison_bound(y0a, 1.5, &h, &fs_up).unwrap();
            for i in 0..fs.len() {
                prop_assert!(b2[i] >= b1[i]);
                prop_assert!(b3[i] >= b1[i]);
            }
        }
    }
}
