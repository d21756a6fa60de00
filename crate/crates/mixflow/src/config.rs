//! TOML run configuration.
//!
//! One document drives verification, single solves, and dependence sweeps;
//! presets ship as config files so runs are reproducible by file hash.
//! Unknown keys are rejected, and derived quantities (the piecewise glue
//! constants `c₁, c₂`, the multiplicative `k̄`) cannot be supplied: they are
//! always recomputed from the free parameters.

use crate::boundary::{BoundaryProfile, ProfileTerm, SpatialShape, TimeShape};
use crate::conductivity::{
    CoefficientVector, ConductivityModel, ExponentProfile, ForchheimerKernel, InterpolatedModel,
    MultiplicativeModel, PiecewiseModel, RationalModel,
};
use crate::error::{Error, Result};
use crate::grid::{Grid, PressureField};
use crate::solver::{SolverConfig, StepperKind};
use serde::{Deserialize, Serialize};

fn path_err(path: &str, e: Error) -> Error {
    match e {
        Error::Domain(msg) | Error::Shape(msg) | Error::Config(msg) => {
            Error::Config(format!("{path}: {msg}"))
        }
        other => other,
    }
}

// ---------------------------------------------------------------------------
// Sections
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelConfig {
    Piecewise(PiecewiseSection),
    Interpolated(InterpolatedSection),
    Rational(RationalSection),
    Multiplicative(MultiplicativeSection),
}

/// Thresholds and the Forchheimer part; `c₁, c₂, Z₁, Z₂, M₁, M₂` are derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseSection {
    pub alpha: f64,
    pub s1: f64,
    pub s2: f64,
    /// `[a₀, …, a_N]`
    pub forchheimer: Vec<f64>,
    /// `[α₁, …, α_N]`
    pub exponents: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolatedSection {
    pub alpha: f64,
    /// `[α₁, …, α_N]`
    pub exponents: Vec<f64>,
    /// `[a₋₁, a₀, …, a_N]`
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalSection {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta1: f64,
    pub beta2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplicativeSection {
    pub alpha: f64,
    pub forchheimer: Vec<f64>,
    pub exponents: Vec<f64>,
    /// Small-gradient mobility scale `M₁`; `k̄ = M₁/K_F(0)` is derived.
    pub m1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub dimension: usize,
    pub extents: Vec<f64>,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeConfig {
    Affine { intercept: f64, slope: Vec<f64> },
    Sinusoid { freq: Vec<f64> },
    GaussianBump { center: Vec<f64>, width: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeConfig {
    Constant {},
    ExpDecay { rate: f64 },
    Sinusoid { omega: f64 },
    PowerDecay { q: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryTermSection {
    pub amplitude: f64,
    pub shape: ShapeConfig,
    pub time: TimeConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialConfig {
    Constant { value: f64 },
    /// `amplitude · Π_d sin(mode_d·π·x_d/L_d)` over axes with a nonzero mode.
    Sine { amplitude: f64, mode: Vec<u32> },
    /// `p₀ = Ψ(·, 0)`.
    FromBoundary {},
    /// Sine plus a triangular wave of the given uniform slope and tooth count.
    SineWithZigzag { amplitude: f64, mode: Vec<u32>, zigzag_slope: f64, teeth: u32 },
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig::Constant { value: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepperConfig {
    Explicit,
    Implicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub stepper: StepperConfig,
    pub safety: f64,
    pub dt: Option<f64>,
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    pub grad_regularization: f64,
    pub sample_stride: usize,
    pub horizon: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            stepper: StepperConfig::Explicit,
            safety: d.safety,
            dt: None,
            picard_tol: d.picard_tol,
            picard_max_iters: d.picard_max_iters,
            grad_regularization: d.grad_regularization,
            sample_stride: d.sample_stride,
            horizon: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentConfig {
    ContinuousDependence(DependenceSection),
    StructuralStability(StabilitySection),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependenceSection {
    pub ladder: Vec<f64>,
    pub horizon: f64,
    #[serde(default = "default_window_start")]
    pub window_start: f64,
    pub bump: BoundaryTermSection,
}

fn default_window_start() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySection {
    pub ladder: Vec<f64>,
    pub horizon: f64,
    /// Perturbation direction in coefficient space, length `N+2`.
    pub direction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<String>,
    pub snapshots: bool,
}

/// The whole run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub grid: GridSection,
    #[serde(default)]
    pub boundary: Vec<BoundaryTermSection>,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub experiment: Option<ExperimentConfig>,
    #[serde(default)]
    pub output: OutputSection,
}

// ---------------------------------------------------------------------------
// Parsing and building
// ---------------------------------------------------------------------------

impl RunConfig {
    /// Parse and fully validate a TOML document.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("parse error: {e}")))?;
        cfg.build()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("serialize error: {e}")))
    }

    /// Build the domain objects, validating every invariant with a
    /// field-addressed message on failure.
    pub fn build(&self) -> Result<Scenario> {
        let model = self.build_model()?;
        let grid = self.build_grid(model.beta2())?;
        let profile = self.build_profile(grid)?;
        let initial = self.build_initial(grid, &profile)?;
        let solver = self.build_solver()?;
        if let Some(ExperimentConfig::StructuralStability(_)) = &self.experiment {
            if !matches!(model, ConductivityModel::Interpolated(_)) {
                return Err(Error::Config(
                    "experiment.structural_stability: requires an interpolated model".into(),
                ));
            }
        }
        Ok(Scenario { model, grid, profile, initial, solver })
    }

    pub fn build_model(&self) -> Result<ConductivityModel> {
        match &self.model {
            ModelConfig::Piecewise(s) => {
                let kernel = ForchheimerKernel::new(s.forchheimer.clone(), s.exponents.clone())
                    .map_err(|e| path_err("model.piecewise", e))?;
                Ok(ConductivityModel::Piecewise(
                    PiecewiseModel::new(s.alpha, s.s1, s.s2, kernel)
                        .map_err(|e| path_err("model.piecewise", e))?,
                ))
            }
            ModelConfig::Interpolated(s) => {
                let profile = ExponentProfile::new(s.alpha, s.exponents.clone())
                    .map_err(|e| path_err("model.interpolated", e))?;
                let coeffs = CoefficientVector::new(s.coefficients.clone())
                    .map_err(|e| path_err("model.interpolated.coefficients", e))?;
                Ok(ConductivityModel::Interpolated(
                    InterpolatedModel::new(profile, coeffs)
                        .map_err(|e| path_err("model.interpolated", e))?,
                ))
            }
            ModelConfig::Rational(s) => Ok(ConductivityModel::Rational(
                RationalModel::new(s.a, s.b, s.c, s.beta1, s.beta2)
                    .map_err(|e| path_err("model.rational", e))?,
            )),
            ModelConfig::Multiplicative(s) => {
                let kernel = ForchheimerKernel::new(s.forchheimer.clone(), s.exponents.clone())
                    .map_err(|e| path_err("model.multiplicative", e))?;
                Ok(ConductivityModel::Multiplicative(
                    MultiplicativeModel::new(kernel, s.alpha, s.m1)
                        .map_err(|e| path_err("model.multiplicative", e))?,
                ))
            }
        }
    }

    fn build_grid(&self, beta2: f64) -> Result<Grid> {
        let g = &self.grid;
        if g.extents.len() != g.dimension || g.cells.len() != g.dimension {
            return Err(Error::Config(format!(
                "grid: extents and cells must both have {} entries",
                g.dimension
            )));
        }
        match g.dimension {
            1 => Grid::new_1d(g.extents[0], g.cells[0], beta2),
            2 => Grid::new_2d([g.extents[0], g.extents[1]], [g.cells[0], g.cells[1]], beta2),
            d => Err(Error::Domain(format!("grid dimension must be 1 or 2, got {d}"))),
        }
        .map_err(|e| path_err("grid", e))
    }

    fn build_term(term: &BoundaryTermSection, grid: Grid, path: &str) -> Result<ProfileTerm> {
        let dim = grid.dimension();
        let take2 = |v: &Vec<f64>, name: &str| -> Result<[f64; 2]> {
            if v.len() != dim {
                return Err(Error::Config(format!(
                    "{path}.{name}: expected {dim} entries, got {}",
                    v.len()
                )));
            }
            Ok([v[0], if dim == 2 { v[1] } else { 0.0 }])
        };
        let shape = match &term.shape {
            ShapeConfig::Affine { intercept, slope } => SpatialShape::Affine {
                intercept: *intercept,
                slope: take2(slope, "shape.affine.slope")?,
            },
            ShapeConfig::Sinusoid { freq } => {
                SpatialShape::Sinusoid { freq: take2(freq, "shape.sinusoid.freq")? }
            }
            ShapeConfig::GaussianBump { center, width } => {
                if !(*width > 0.0) {
                    return Err(Error::Config(format!(
                        "{path}.shape.gaussian_bump.width: must be positive, got {width}"
                    )));
                }
                SpatialShape::GaussianBump {
                    center: take2(center, "shape.gaussian_bump.center")?,
                    width: *width,
                }
            }
        };
        let time = match &term.time {
            TimeConfig::Constant {} => TimeShape::Constant,
            TimeConfig::ExpDecay { rate } => TimeShape::ExpDecay { rate: *rate },
            TimeConfig::Sinusoid { omega } => TimeShape::Sinusoid { omega: *omega },
            TimeConfig::PowerDecay { q } => TimeShape::PowerDecay { q: *q },
        };
        Ok(ProfileTerm { amplitude: term.amplitude, shape, time })
    }

    fn build_profile(&self, grid: Grid) -> Result<BoundaryProfile> {
        let mut terms = Vec::new();
        for (i, term) in self.boundary.iter().enumerate() {
            terms.push(Self::build_term(term, grid, &format!("boundary[{i}]"))?);
        }
        Ok(BoundaryProfile { terms })
    }

    fn build_initial(&self, grid: Grid, profile: &BoundaryProfile) -> Result<PressureField> {
        let pi = std::f64::consts::PI;
        let [lx, ly] = grid.extents();
        match &self.initial {
            InitialConfig::Constant { value } => PressureField::constant(grid, *value, 0.0),
            InitialConfig::Sine { amplitude, mode } => {
                if mode.len() != grid.dimension() {
                    return Err(Error::Config(format!(
                        "initial.sine.mode: expected {} entries, got {}",
                        grid.dimension(),
                        mode.len()
                    )));
                }
                let mx = mode[0] as f64;
                let my = if grid.dimension() == 2 { mode[1] as f64 } else { 0.0 };
                let a = *amplitude;
                PressureField::from_fn(grid, 0.0, move |x| {
                    let mut v = a;
                    if mx > 0.0 {
                        v *= (mx * pi * x[0] / lx).sin();
                    }
                    if my > 0.0 {
                        v *= (my * pi * x[1] / ly).sin();
                    }
                    v
                })
            }
            InitialConfig::FromBoundary {} => {
                PressureField::from_fn(grid, 0.0, |x| profile.psi(x, 0.0))
            }
            InitialConfig::SineWithZigzag { amplitude, mode, zigzag_slope, teeth } => {
                if grid.dimension() != 1 {
                    return Err(Error::Config(
                        "initial.sine_with_zigzag: only available in 1D".into(),
                    ));
                }
                let m = *mode.first().unwrap_or(&1) as f64;
                let a = *amplitude;
                let teeth = *teeth as f64;
                let amp = zigzag_slope / (4.0 * teeth / lx);
                PressureField::from_fn(grid, 0.0, move |x| {
                    let u = (x[0] / lx * teeth).fract();
                    a * (m * pi * x[0] / lx).sin() + amp * (4.0 * (u - 0.5).abs() - 1.0)
                })
            }
        }
        .map_err(|e| path_err("initial", e))
    }

    pub fn build_solver(&self) -> Result<SolverConfig> {
        let s = &self.solver;
        let cfg = SolverConfig {
            stepper: match s.stepper {
                StepperConfig::Explicit => StepperKind::Explicit,
                StepperConfig::Implicit => StepperKind::Implicit,
            },
            safety: s.safety,
            fixed_dt: s.dt,
            picard_tol: s.picard_tol,
            picard_max_iters: s.picard_max_iters,
            grad_regularization: s.grad_regularization,
            sample_stride: s.sample_stride,
            keep_fields: false,
        };
        cfg.validate().map_err(|e| path_err("solver", e))?;
        if !(s.horizon > 0.0) {
            return Err(Error::Config(format!(
                "solver.horizon: must be positive, got {}",
                s.horizon
            )));
        }
        Ok(cfg)
    }
}

/// Fully validated domain objects built from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Scenario {
    pub model: ConductivityModel,
    pub grid: Grid,
    pub profile: BoundaryProfile,
    pub initial: PressureField,
    pub solver: SolverConfig,
}

impl RunConfig {
    /// Assemble the continuous-dependence sweep from the experiment section.
    pub fn build_dependence(
        &self,
        scenario: &Scenario,
    ) -> Result<crate::experiments::DependenceSpec> {
        let section = match &self.experiment {
            Some(ExperimentConfig::ContinuousDependence(s)) => s,
            _ => {
                return Err(Error::Config(
                    "experiment.continuous_dependence: section required for this command".into(),
                ))
            }
        };
        let bump_term =
            Self::build_term(&section.bump, scenario.grid, "experiment.continuous_dependence.bump")?;
        Ok(crate::experiments::DependenceSpec {
            model: scenario.model.clone(),
            initial: scenario.initial.clone(),
            base_profile: scenario.profile.clone(),
            bump: BoundaryProfile { terms: vec![bump_term] },
            ladder: section.ladder.clone(),
            horizon: section.horizon,
            window_start: section.window_start,
            solver: scenario.solver.clone(),
        })
    }

    /// Assemble the structural-stability sweep from the experiment section.
    pub fn build_stability(
        &self,
        scenario: &Scenario,
    ) -> Result<crate::experiments::StabilitySpec> {
        let section = match &self.experiment {
            Some(ExperimentConfig::StructuralStability(s)) => s,
            _ => {
                return Err(Error::Config(
                    "experiment.structural_stability: section required for this command".into(),
                ))
            }
        };
        let im = match &scenario.model {
            ConductivityModel::Interpolated(im) => im,
            _ => {
                return Err(Error::Config(
                    "experiment.structural_stability: requires an interpolated model".into(),
                ))
            }
        };
        Ok(crate::experiments::StabilitySpec {
            profile: im.profile().clone(),
            base: im.coefficients().clone(),
            direction: section.direction.clone(),
            ladder: section.ladder.clone(),
            initial: scenario.initial.clone(),
            boundary: scenario.profile.clone(),
            horizon: section.horizon,
            solver: scenario.solver.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[model.interpolated]
alpha = 0.5
exponents = [1.0]
coefficients = [1.0, 0.0, 1.0]

[grid]
dimension = 1
extents = [1.0]
cells = [16]
"#;

    #[test]
    fn minimal_config_parses_and_builds() {
        let cfg = RunConfig::parse(MINIMAL).unwrap();
        let scenario = cfg.build().unwrap();
        assert_eq!(scenario.model.name(), "interpolated");
        assert_eq!(scenario.grid.nx(), 16);
        assert!(scenario.profile.is_zero());
        assert!(scenario.initial.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn inadmissible_coefficient_names_the_field() {
        let text = MINIMAL.replace("coefficients = [1.0, 0.0, 1.0]", "coefficients = [0.0, 0.0, 1.0]");
        let err = RunConfig::parse(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("model.interpolated.coefficients"), "{msg}");
        assert!(msg.contains("a₋₁"), "{msg}");
    }

    #[test]
    fn derived_piecewise_constant_cannot_be_supplied() {
        let text = r#"
[model.piecewise]
alpha = 0.5
s1 = 1.0
s2 = 2.0
c1 = 3.0
forchheimer = [1.0, 1.0]
exponents = [1.0]

[grid]
dimension = 1
extents = [1.0]
cells = [16]
"#;
        let err = RunConfig::parse(text).unwrap_err();
        assert!(err.to_string().contains("c1"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_top_level_key_rejected() {
        let text = format!("{MINIMAL}\nunknown_section = 3\n");
        assert!(RunConfig::parse(&text).is_err());
    }

    #[test]
    fn round_trip_is_identical() {
        let text = r#"
[model.piecewise]
alpha = 0.5
s1 = 1.0
s2 = 2.0
forchheimer = [1.0, 1.0]
exponents = [1.0]

[grid]
dimension = 1
extents = [1.0]
cells = [32]

[[boundary]]
amplitude = 0.25
shape = { affine = { intercept = 0.0, slope = [1.0] } }
time = { exp_decay = { rate = 0.5 } }

[initial.sine]
amplitude = 1.0
mode = [1]

[solver]
stepper = "explicit"
safety = 0.5
horizon = 2.0

[experiment.continuous_dependence]
ladder = [0.1, 0.01]
horizon = 2.0
bump = { amplitude = 1.0, shape = { gaussian_bump = { center = [0.5], width = 0.1 } }, time = { sinusoid = { omega = 3.0 } } }
"#;
        let cfg = RunConfig::parse(text).unwrap();
        let serialized = cfg.to_toml_string().unwrap();
        let reparsed = RunConfig::parse(&serialized).unwrap();
        assert_eq!(cfg, reparsed);
    }

    #[test]
    fn stability_requires_interpolated_model() {
        let text = r#"
[model.rational]
a = 1.0
b = 1.0
c = 1.0
beta1 = 1.0
beta2 = 0.5

[grid]
dimension = 1
extents = [1.0]
cells = [16]

[experiment.structural_stability]
ladder = [0.1]
horizon = 1.0
direction = [0.0, 1.0, 0.0]
"#;
        let err = RunConfig::parse(text).unwrap_err();
        assert!(err.to_string().contains("structural_stability"), "{err}");
    }

    #[test]
    fn from_boundary_initial_matches_profile() {
        let text = r#"
[model.interpolated]
alpha = 0.5
exponents = [1.0]
coefficients = [1.0, 0.0, 1.0]

[grid]
dimension = 1
extents = [1.0]
cells = [8]

[[boundary]]
amplitude = 2.0
shape = { affine = { intercept = 0.5, slope = [1.0] } }
time = { constant = {} }

[initial.from_boundary]
"#;
        let cfg = RunConfig::parse(text).unwrap();
        let scenario = cfg.build().unwrap();
        for (i, &v) in scenario.initial.values().iter().enumerate() {
            let x = scenario.grid.cell_center(i, 0);
            assert!((v - scenario.profile.psi(x, 0.0)).abs() < 1e-15);
        }
    }
}
