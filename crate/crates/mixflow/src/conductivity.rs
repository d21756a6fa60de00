//! Conductivity models for mixed-regime porous-media flow.
//!
//! The equation of motion `g(|v|)v = -∇p` is inverted into the generalized
//! Darcy form `v = -K(|∇p|)∇p`. Four constructions of `K` are provided:
//!
//! * [`PiecewiseModel`] — Izbash law below `s1`, constant (Darcy) plateau on
//!   `[s1, s2]`, Forchheimer kernel above `s2`, glued continuously.
//! * [`InterpolatedModel`] — one smooth law
//!   `g(s) = a₋₁s^{-α} + a₀ + a₁s^{α₁} + … + a_N s^{α_N}` covering all
//!   regimes at once; the only model that supports coefficient perturbation.
//! * [`RationalModel`] — `K` prescribed directly as
//!   `aξ^{β₁} / ((1+bξ^{β₁})(1+cξ^{β₂}))`.
//! * [`MultiplicativeModel`] — the Forchheimer conductivity multiplied by a
//!   saturating factor `k̄ξ^{β₁}/(1+k̄ξ^{β₁})` so the small-gradient
//!   degeneracy matches the piecewise model.
//!
//! Every model degenerates at both ends: `K(0) = 0` and `K(ξ) → 0` like
//! `ξ^{-β₂}` as `ξ → ∞`. All models are sandwiched between multiples of the
//! reference kernel `K*(ξ) = ξ^{β₁}/(1+ξ)^{β₁+β₂}`; the multipliers and the
//! derived monotonicity/perturbation constants are collected in
//! [`SandwichConstants`].

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, invert_increasing, INVERT_MAX_ITERS, INVERT_RTOL};

/// Reference kernel `K*(ξ) = ξ^{β₁} / (1+ξ)^{β₁+β₂}`.
///
/// Increasing on `[0, ξ_c]` and decreasing on `[ξ_c, ∞)` with
/// `ξ_c = β₁/β₂`, so its global maximum is `K*(ξ_c)`.
pub fn reference_kernel(beta1: f64, beta2: f64, xi: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    xi.powf(beta1) / (1.0 + xi).powf(beta1 + beta2)
}

/// Side selector for one-sided derivatives at the piecewise kinks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSide {
    Below,
    Above,
}

// ---------------------------------------------------------------------------
// Exponent profile and coefficient vector
// ---------------------------------------------------------------------------

/// The exponent data `(α; α₁ < … < α_N)` shared by the speed-law models.
///
/// `α ∈ (0,1)` is the pre-Darcy (Izbash) exponent; `α₁ < … < α_N` are the
/// Forchheimer exponents. The derived quantities `β₁ = α/(1-α)` and
/// `β₂ = α_N/(1+α_N)` control the degeneracy of `K` at `ξ = 0` and `ξ = ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentProfile {
    alpha: f64,
    exponents: Vec<f64>,
}

impl ExponentProfile {
    pub fn new(alpha: f64, exponents: Vec<f64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "pre-Darcy exponent alpha must lie in (0,1), got {alpha}"
            )));
        }
        if exponents.is_empty() {
            return Err(Error::Domain("at least one Forchheimer exponent required".into()));
        }
        let mut prev = 0.0;
        for (i, &e) in exponents.iter().enumerate() {
            if !(e > prev) {
                return Err(Error::Domain(format!(
                    "exponents must satisfy 0 < α₁ < … < α_N; violated at index {i} ({e})"
                )));
            }
            prev = e;
        }
        Ok(Self { alpha, exponents })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn n_terms(&self) -> usize {
        self.exponents.len()
    }

    /// `β₁ = α/(1-α) > 0`; growth rate of `K` at small gradients.
    pub fn beta1(&self) -> f64 {
        self.alpha / (1.0 - self.alpha)
    }

    /// `β₂ = α_N/(1+α_N) ∈ (0,1)`; decay rate of `K` at large gradients.
    pub fn beta2(&self) -> f64 {
        let an = *self.exponents.last().unwrap();
        an / (1.0 + an)
    }

    /// Crossover gradient `ξ_c = β₁/β₂` where the reference kernel peaks.
    pub fn xi_c(&self) -> f64 {
        self.beta1() / self.beta2()
    }
}

/// Coefficient vector `ā = (a₋₁, a₀, a₁, …, a_N)` of the interpolated law.
///
/// Admissible when `a₋₁ > 0`, `a_N > 0` and the interior entries are
/// nonnegative; the weaker interior condition permits comparison of models
/// with different active exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    a: Vec<f64>,
}

impl CoefficientVector {
    /// `entries = [a₋₁, a₀, a₁, …, a_N]`, so `entries.len() = N + 2`.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.len() < 3 {
            return Err(Error::Domain(format!(
                "coefficient vector needs at least (a₋₁, a₀, a₁); got {} entries",
                entries.len()
            )));
        }
        if !(entries[0] > 0.0) {
            return Err(Error::Domain(format!("a₋₁ must be positive, got {}", entries[0])));
        }
        if !(*entries.last().unwrap() > 0.0) {
            return Err(Error::Domain(format!(
                "a_N must be positive, got {}",
                entries.last().unwrap()
            )));
        }
        for (i, &v) in entries.iter().enumerate().skip(1).take(entries.len() - 2) {
            if !(v >= 0.0) {
                return Err(Error::Domain(format!(
                    "coefficient a_{} must be nonnegative, got {v}",
                    i as isize - 1
                )));
            }
        }
        Ok(Self { a: entries })
    }

    pub fn entries(&self) -> &[f64] {
        &self.a
    }

    pub fn a_minus1(&self) -> f64 {
        self.a[0]
    }

    pub fn a_last(&self) -> f64 {
        *self.a.last().unwrap()
    }

    pub fn n_terms(&self) -> usize {
        self.a.len() - 2
    }

    /// `ξ₀ = a₋₁ + a₀ + … + a_N`; equals the forward map evaluated at `s = 1`.
    pub fn xi0(&self) -> f64 {
        self.a.iter().sum()
    }

    /// Euclidean distance `|ā⁽¹⁾ - ā⁽²⁾|`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.a.len() != other.a.len() {
            return Err(Error::Shape(format!(
                "coefficient vectors have different lengths ({} vs {})",
                self.a.len(),
                other.a.len()
            )));
        }
        Ok(self
            .a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt())
    }

    /// Coordinate-wise minimum `ā⁽¹⁾ ∧ ā⁽²⁾` (admissible whenever both are).
    pub fn coordinate_min(&self, other: &Self) -> Result<Self> {
        if self.a.len() != other.a.len() {
            return Err(Error::Shape(format!(
                "coefficient vectors have different lengths ({} vs {})",
                self.a.len(),
                other.a.len()
            )));
        }
        CoefficientVector::new(self.a.iter().zip(&other.a).map(|(x, y)| x.min(*y)).collect())
    }
}

// ---------------------------------------------------------------------------
// Forchheimer kernel (post-Darcy part shared by Models 1 and 4)
// ---------------------------------------------------------------------------

/// Generalized Forchheimer law `g_F(s) = a₀ + a₁s^{α₁} + … + a_N s^{α_N}`
/// with `a₀, a_N > 0`, and its conductivity `K_F(ξ) = 1/g_F(G_F⁻¹(ξ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForchheimerKernel {
    coefficients: Vec<f64>,
    exponents: Vec<f64>,
}

impl ForchheimerKernel {
    /// `coefficients = [a₀, …, a_N]` (length `N+1`), `exponents = [α₁, …, α_N]`.
    pub fn new(coefficients: Vec<f64>, exponents: Vec<f64>) -> Result<Self> {
        if coefficients.len() != exponents.len() + 1 || exponents.is_empty() {
            return Err(Error::Domain(format!(
                "Forchheimer kernel needs N+1 coefficients for N exponents; got {} and {}",
                coefficients.len(),
                exponents.len()
            )));
        }
        let mut prev = 0.0;
        for &e in &exponents {
            if !(e > prev) {
                return Err(Error::Domain(
                    "Forchheimer exponents must be strictly increasing and positive".into(),
                ));
            }
            prev = e;
        }
        if !(coefficients[0] > 0.0 && *coefficients.last().unwrap() > 0.0) {
            return Err(Error::Domain("Forchheimer a₀ and a_N must be positive".into()));
        }
        for &c in &coefficients[1..coefficients.len() - 1] {
            if !(c >= 0.0) {
                return Err(Error::Domain("Forchheimer coefficients must be nonnegative".into()));
            }
        }
        Ok(Self { coefficients, exponents })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn alpha_max(&self) -> f64 {
        *self.exponents.last().unwrap()
    }

    pub fn beta2(&self) -> f64 {
        let an = self.alpha_max();
        an / (1.0 + an)
    }

    /// `σ = g_F(1) = G_F(1) = Σ aᵢ`; the forward map's value at unit speed.
    pub fn sigma(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    pub fn g(&self, s: f64) -> f64 {
        let mut v = self.coefficients[0];
        for (a, e) in self.coefficients[1..].iter().zip(&self.exponents) {
            if *a != 0.0 {
                v += a * s.powf(*e);
            }
        }
        v
    }

    pub fn g_prime(&self, s: f64) -> f64 {
        let mut v = 0.0;
        for (a, e) in self.coefficients[1..].iter().zip(&self.exponents) {
            if *a != 0.0 {
                v += a * e * s.powf(e - 1.0);
            }
        }
        v
    }

    /// `G_F(s) = s·g_F(s)`, strictly increasing from 0 to ∞.
    pub fn forward(&self, s: f64) -> f64 {
        if s == 0.0 {
            0.0
        } else {
            s * self.g(s)
        }
    }

    fn forward_prime(&self, s: f64) -> f64 {
        self.g(s) + s * self.g_prime(s)
    }

    /// Analytic bracket for `G_F(s) = ξ`: term-by-term comparison against the
    /// extreme exponents gives `σ s^{1+α_N} ≤ G_F(s) ≤ σ s` for `s ≤ 1` and
    /// `a_N s^{1+α_N} ≤ G_F(s) ≤ σ s^{1+α_N}` for `s ≥ 1`.
    fn bracket(&self, xi: f64) -> (f64, f64) {
        let sigma = self.sigma();
        let p = 1.0 + self.alpha_max();
        if xi <= sigma {
            let lo = (xi / sigma).max(f64::MIN_POSITIVE);
            let hi = (xi / sigma).powf(1.0 / p);
            (lo, hi.max(lo))
        } else {
            let lo = (xi / sigma).powf(1.0 / p);
            let hi = (xi / *self.coefficients.last().unwrap()).powf(1.0 / p);
            (lo, hi.max(lo))
        }
    }

    pub fn invert(&self, xi: f64) -> Result<f64> {
        self.invert_from(xi, None)
    }

    /// Invert with an optional warm-start speed from a previous evaluation.
    pub fn invert_from(&self, xi: f64, start: Option<f64>) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
        }
        if xi == 0.0 {
            return Ok(0.0);
        }
        let bracket = self.bracket(xi);
        invert_increasing(
            |s| self.forward(s),
            |s| self.forward_prime(s),
            xi,
            bracket,
            start,
            INVERT_RTOL,
            INVERT_MAX_ITERS,
        )
    }

    /// `K_F(ξ) = 1/g_F(s(ξ)) = s(ξ)/ξ`; equals `1/a₀` at `ξ = 0`.
    pub fn conductivity(&self, xi: f64) -> Result<f64> {
        if xi == 0.0 {
            return Ok(1.0 / self.coefficients[0]);
        }
        Ok(self.invert(xi)? / xi)
    }

    pub fn conductivity_from(&self, xi: f64, start: Option<f64>) -> Result<(f64, f64)> {
        if xi == 0.0 {
            return Ok((1.0 / self.coefficients[0], 0.0));
        }
        let s = self.invert_from(xi, start)?;
        Ok((s / xi, s))
    }

    /// `K_F'(ξ) = (K_F/ξ)(g/(g + s g') - 1)`; nonpositive everywhere.
    pub fn conductivity_prime(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::Domain(format!("derivative requires xi > 0, got {xi}")));
        }
        let s = self.invert(xi)?;
        let g = self.g(s);
        let k = 1.0 / g;
        Ok(k / xi * (g / self.forward_prime(s) - 1.0))
    }

    /// Two-sided enclosure of `r(ξ) = K_F(ξ)(1+ξ)^{β₂}`: returns `(r_lo, r_hi)`
    /// with `r_lo ≤ r(ξ) ≤ r_hi` for every `ξ ≥ 0`. Built from the same
    /// term-by-term comparisons as [`Self::bracket`], so it is valid on the
    /// whole half-line rather than on a sample grid.
    pub fn ratio_bounds(&self) -> (f64, f64) {
        let sigma = self.sigma();
        let b2 = self.beta2();
        let a0 = self.coefficients[0];
        let an = *self.coefficients.last().unwrap();
        let r_lo = (1.0 / sigma).min(sigma.powf(b2 - 1.0));
        let r_hi = ((1.0 + sigma).powf(b2) / a0)
            .max(an.powf(b2 - 1.0) * ((1.0 + sigma) / sigma).powf(b2));
        (r_lo, r_hi)
    }

    /// `d₁` with `d₁⁻¹(1+ξ)^{-β₂} ≤ K_F(ξ) ≤ d₁(1+ξ)^{-β₂}` for all `ξ ≥ 0`.
    pub fn degeneracy_bound(&self) -> f64 {
        let (r_lo, r_hi) = self.ratio_bounds();
        r_hi.max(1.0 / r_lo)
    }
}

// ---------------------------------------------------------------------------
// Model 1: piecewise Izbash / Darcy / Forchheimer
// ---------------------------------------------------------------------------

/// Piecewise speed law
/// `ḡ(s) = c₁s^{-α}` on `(0,s₁)`, `c₂` on `[s₁,s₂]`, `g_F(s)` on `(s₂,∞)`.
///
/// Only the thresholds `s₁ < s₂` and the Forchheimer part are free:
/// continuity pins `c₂ = g_F(s₂)` and `c₁ = c₂ s₁^α`, so the glue constraint
/// can never be violated by construction. The conductivity is explicit:
/// `K̄(ξ) = M₁ξ^{β₁}` on `[0,Z₁)`, `M₂` on `[Z₁,Z₂]`, `K_F(ξ)` beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseModel {
    alpha: f64,
    s1: f64,
    s2: f64,
    kernel: ForchheimerKernel,
    c1: f64,
    c2: f64,
    z1: f64,
    z2: f64,
    m1: f64,
    m2: f64,
}

impl PiecewiseModel {
    pub fn new(alpha: f64, s1: f64, s2: f64, kernel: ForchheimerKernel) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(s1 > 0.0 && s2 > s1) {
            return Err(Error::Domain(format!(
                "thresholds must satisfy 0 < s1 < s2, got s1 = {s1}, s2 = {s2}"
            )));
        }
        let c2 = kernel.g(s2);
        let c1 = c2 * s1.powf(alpha);
        let z1 = c2 * s1;
        let z2 = c2 * s2;
        let m1 = c1.powf(-1.0 / (1.0 - alpha));
        let m2 = 1.0 / c2;
        Ok(Self { alpha, s1, s2, kernel, c1, c2, z1, z2, m1, m2 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta1(&self) -> f64 {
        self.alpha / (1.0 - self.alpha)
    }
    pub fn beta2(&self) -> f64 {
        self.kernel.beta2()
    }
    pub fn kernel(&self) -> &ForchheimerKernel {
        &self.kernel
    }
    pub fn thresholds(&self) -> (f64, f64) {
        (self.s1, self.s2)
    }
    /// Gradient kinks `(Z₁, Z₂) = (c₂s₁, c₂s₂)`.
    pub fn kinks(&self) -> (f64, f64) {
        (self.z1, self.z2)
    }
    /// Derived plateau constants `(M₁, M₂) = (c₁^{-1/(1-α)}, 1/c₂)`.
    pub fn plateau_constants(&self) -> (f64, f64) {
        (self.m1, self.m2)
    }
    pub fn glue_constants(&self) -> (f64, f64) {
        (self.c1, self.c2)
    }

    pub fn g(&self, s: f64) -> f64 {
        if s < self.s1 {
            self.c1 * s.powf(-self.alpha)
        } else if s <= self.s2 {
            self.c2
        } else {
            self.kernel.g(s)
        }
    }

    pub fn forward(&self, s: f64) -> f64 {
        if s == 0.0 {
            0.0
        } else if s < self.s1 {
            self.c1 * s.powf(1.0 - self.alpha)
        } else if s <= self.s2 {
            self.c2 * s
        } else {
            self.kernel.forward(s)
        }
    }

    pub fn invert(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
        }
        if xi < self.z1 {
            Ok((xi / self.c1).powf(1.0 / (1.0 - self.alpha)))
        } else if xi <= self.z2 {
            Ok(xi / self.c2)
        } else {
            self.kernel.invert(xi)
        }
    }

    pub fn conductivity(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
        }
        if xi < self.z1 {
            Ok(self.m1 * xi.powf(self.beta1()))
        } else if xi <= self.z2 {
            Ok(self.m2)
        } else {
            self.kernel.conductivity(xi)
        }
    }

    pub fn conductivity_prime(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::Domain(format!("derivative requires xi > 0, got {xi}")));
        }
        if xi == self.z1 || xi == self.z2 {
            return Err(Error::Kink { xi });
        }
        if xi < self.z1 {
            Ok(self.m1 * self.beta1() * xi.powf(self.beta1() - 1.0))
        } else if xi < self.z2 {
            Ok(0.0)
        } else {
            self.kernel.conductivity_prime(xi)
        }
    }

    pub fn conductivity_prime_sided(&self, xi: f64, side: DerivativeSide) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::Domain(format!("derivative requires xi > 0, got {xi}")));
        }
        if xi != self.z1 && xi != self.z2 {
            return self.conductivity_prime(xi);
        }
        match (xi == self.z1, side) {
            (true, DerivativeSide::Below) => {
                Ok(self.m1 * self.beta1() * xi.powf(self.beta1() - 1.0))
            }
            (true, DerivativeSide::Above) | (false, DerivativeSide::Below) => Ok(0.0),
            (false, DerivativeSide::Above) => self.kernel.conductivity_prime(xi),
        }
    }

    /// Exact per-branch extrema of `K̄/K*`.
    fn sandwich_multipliers(&self) -> (f64, f64) {
        let b1 = self.beta1();
        let b2 = self.beta2();
        let xi_c = b1 / b2;
        // branch 1: K/K* = M₁(1+ξ)^{β₁+β₂} on [0, Z₁)
        let d2_1 = self.m1;
        let d3_1 = self.m1 * (1.0 + self.z1).powf(b1 + b2);
        // branch 2: K/K* = M₂(1+ξ)^{β₁+β₂}/ξ^{β₁}, minimized at ξ_c
        let f = |xi: f64| (1.0 + xi).powf(b1 + b2) / xi.powf(b1);
        let d2_2 = self.m2 * f(xi_c.clamp(self.z1, self.z2));
        let d3_2 = self.m2 * f(self.z1).max(f(self.z2));
        // branch 3: K/K* = r(ξ)·((1+ξ)/ξ)^{β₁} with r enclosed analytically
        let (r_lo, r_hi) = self.kernel.ratio_bounds();
        let d2_3 = r_lo;
        let d3_3 = r_hi * ((1.0 + self.z2) / self.z2).powf(b1);
        (d2_1.min(d2_2).min(d2_3), d3_1.max(d3_2).max(d3_3))
    }
}

// ---------------------------------------------------------------------------
// Model 2: smooth interpolation
// ---------------------------------------------------------------------------

/// Smooth speed law `g_I(s) = a₋₁s^{-α} + a₀ + a₁s^{α₁} + … + a_Ns^{α_N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolatedModel {
    profile: ExponentProfile,
    coefficients: CoefficientVector,
}

impl InterpolatedModel {
    pub fn new(profile: ExponentProfile, coefficients: CoefficientVector) -> Result<Self> {
        if profile.n_terms() != coefficients.n_terms() {
            return Err(Error::Shape(format!(
                "profile has {} Forchheimer exponents but coefficient vector provides {}",
                profile.n_terms(),
                coefficients.n_terms()
            )));
        }
        Ok(Self { profile, coefficients })
    }

    pub fn profile(&self) -> &ExponentProfile {
        &self.profile
    }
    pub fn coefficients(&self) -> &CoefficientVector {
        &self.coefficients
    }
    pub fn beta1(&self) -> f64 {
        self.profile.beta1()
    }
    pub fn beta2(&self) -> f64 {
        self.profile.beta2()
    }

    pub fn g(&self, s: f64) -> f64 {
        let a = self.coefficients.entries();
        let mut v = a[0] * s.powf(-self.profile.alpha()) + a[1];
        for (c, e) in a[2..].iter().zip(self.profile.exponents()) {
            if *c != 0.0 {
                v += c * s.powf(*e);
            }
        }
        v
    }

    pub fn g_prime(&self, s: f64) -> f64 {
        let a = self.coefficients.entries();
        let alpha = self.profile.alpha();
        let mut v = -alpha * a[0] * s.powf(-alpha - 1.0);
        for (c, e) in a[2..].iter().zip(self.profile.exponents()) {
            if *c != 0.0 {
                v += c * e * s.powf(e - 1.0);
            }
        }
        v
    }

    /// `G_I(s) = a₋₁s^{1-α} + a₀s + Σ aᵢ s^{1+αᵢ}`.
    pub fn forward(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let a = self.coefficients.entries();
        let mut v = a[0] * s.powf(1.0 - self.profile.alpha()) + a[1] * s;
        for (c, e) in a[2..].iter().zip(self.profile.exponents()) {
            if *c != 0.0 {
                v += c * s.powf(1.0 + e);
            }
        }
        v
    }

    fn forward_prime(&self, s: f64) -> f64 {
        let a = self.coefficients.entries();
        let alpha = self.profile.alpha();
        let mut v = (1.0 - alpha) * a[0] * s.powf(-alpha) + a[1];
        for (c, e) in a[2..].iter().zip(self.profile.exponents()) {
            if *c != 0.0 {
                v += c * (1.0 + e) * s.powf(*e);
            }
        }
        v
    }

    /// Analytic bracket from the extreme-exponent comparisons:
    /// for `ξ ≤ ξ₀` the root lies in `[(ξ/ξ₀)^{1/(1-α)}, (ξ/a₋₁)^{1/(1-α)}]`,
    /// for `ξ ≥ ξ₀` in `[(ξ/ξ₀)^{1/(1+α_N)}, (ξ/a_N)^{1/(1+α_N)}]`.
    fn bracket(&self, xi: f64) -> (f64, f64) {
        let xi0 = self.coefficients.xi0();
        if xi <= xi0 {
            let p = 1.0 / (1.0 - self.profile.alpha());
            let lo = (xi / xi0).powf(p).max(f64::MIN_POSITIVE);
            let hi = (xi / self.coefficients.a_minus1()).powf(p);
            (lo, hi.max(lo))
        } else {
            let p = 1.0 / (1.0 + self.profile.exponents().last().unwrap());
            let lo = (xi / xi0).powf(p);
            let hi = (xi / self.coefficients.a_last()).powf(p);
            (lo, hi.max(lo))
        }
    }

    pub fn invert(&self, xi: f64) -> Result<f64> {
        self.invert_from(xi, None)
    }

    pub fn invert_from(&self, xi: f64, start: Option<f64>) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
        }
        if xi == 0.0 {
            return Ok(0.0);
        }
        invert_increasing(
            |s| self.forward(s),
            |s| self.forward_prime(s),
            xi,
            self.bracket(xi),
            start,
            INVERT_RTOL,
            INVERT_MAX_ITERS,
        )
    }

    /// `K_I(ξ) = s(ξ)/ξ` for `ξ > 0`; 0 at the origin.
    pub fn conductivity(&self, xi: f64) -> Result<f64> {
        Ok(self.conductivity_from(xi, None)?.0)
    }

    /// Conductivity plus the speed `s(ξ)` for warm-starting the next call.
    pub fn conductivity_from(&self, xi: f64, start: Option<f64>) -> Result<(f64, f64)> {
        if xi == 0.0 {
            return Ok((0.0, 0.0));
        }
        let s = self.invert_from(xi, start)?;
        Ok((s / xi, s))
    }

    /// `K'(ξ) = (K/ξ)(g/(g + s g') - 1)`.
    pub fn conductivity_prime(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::Domain(format!("derivative requires xi > 0, got {xi}")));
        }
        let s = self.invert(xi)?;
        let g = self.g(s);
        let k = s / xi;
        Ok(k / xi * (g / self.forward_prime(s) - 1.0))
    }
}

// ---------------------------------------------------------------------------
// Model 3: rational conductivity
// ---------------------------------------------------------------------------

/// Directly prescribed `K̂(ξ) = aξ^{β₁} / ((1+bξ^{β₁})(1+cξ^{β₂}))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalModel {
    a: f64,
    b: f64,
    c: f64,
    beta1: f64,
    beta2: f64,
}

impl RationalModel {
    pub fn new(a: f64, b: f64, c: f64, beta1: f64, beta2: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(Error::Domain(format!(
                "rational model requires positive a, b, c; got {a}, {b}, {c}"
            )));
        }
        if !(beta1 > 0.0) {
            return Err(Error::Domain(format!("beta1 must be positive, got {beta1}")));
        }
        if !(beta2 > 0.0 && beta2 < 1.0) {
            return Err(Error::Domain(format!("beta2 must lie in (0,1), got {beta2}")));
        }
        Ok(Self { a, b, c, beta1, beta2 })
    }

    pub fn parameters(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }
    pub fn beta1(&self) -> f64 {
        self.beta1
    }
    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn conductivity(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
        }
        if xi == 0.0 {
            return Ok(0.0);
        }
        let t1 = xi.powf(self.beta1);
        let t2 = xi.powf(self.beta2);
        Ok(self.a * t1 / ((1.0 + self.b * t1) * (1.0 + self.c * t2)))
    }

    /// Logarithmic-derivative form of `K̂'`.
    pub fn conductivity_prime(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::Domain(format!("derivative requires xi > 0, got {xi}")));
        }
        let t1 = xi.powf(self.beta1);
        let t2 = xi.powf(self.beta2);
        let k = self.a * t1 / ((1.0 + self.b * t1) * (1.0 + self.c * t2));
        let log_deriv = self.beta1 / xi
            - self.b * self.beta1 * t1 / (xi * (1.0 + self.b * t1))
            - self.c * self.beta2 * t2 / (xi * (1.0 + self.c * t2));
        Ok(k * log_deriv)
    }

    /// `K̂/K*` enclosed via `min(1,2^{q-1})(1+ξ^q) ≤ (1+ξ)^q ≤ max(1,2^{q-1})(1+ξ^q)`.
    fn sandwich_multipliers(&self) -> (f64, f64) {
        let lo1 = 1f64.min(2f64.powf(self.beta1 - 1.0));
        let hi1 = 1f64.max(2f64.powf(self.beta1 - 1.0));
        let lo2 = 2f64.powf(self.beta2 - 1.0);
        let d2 = self.a * lo1 / self.b.max(1.0) * lo2 / self.c.max(1.0);
        let d3 = self.a * hi1 / self.b.min(1.0) / self.c.min(1.0);
        (d2, d3)
    }
}

// ---------------------------------------------------------------------------
// Model 4: Forchheimer kernel with saturating small-gradient factor
// ---------------------------------------------------------------------------

/// `K_M(ξ) = K_F(ξ) · k̄ξ^{β₁}/(1 + k̄ξ^{β₁})` with `k̄ = M₁/K_F(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeModel {
    kernel: ForchheimerKernel,
    alpha: f64,
    m1: f64,
    kbar: f64,
}

impl MultiplicativeModel {
    /// `m1` plays the role of the small-gradient mobility scale `M₁`;
    /// `k̄ = m1/K_F(0) = m1·a₀` is derived, never supplied.
    pub fn new(kernel: ForchheimerKernel, alpha: f64, m1: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(m1 > 0.0) {
            return Err(Error::Domain(format!("m1 must be positive, got {m1}")));
        }
        let kbar = m1 * kernel.coefficients()[0];
        Ok(Self { kernel, alpha, m1, kbar })
    }

    pub fn kernel(&self) -> &ForchheimerKernel {
        &self.kernel
    }
    pub fn kbar(&self) -> f64 {
        self.kbar
    }
    pub fn beta1(&self) -> f64 {
        self.alpha / (1.0 - self.alpha)
    }
    pub fn beta2(&self) -> f64 {
        self.kernel.beta2()
    }

    fn saturation(&self, xi: f64) -> f64 {
        let t = self.kbar * xi.powf(self.beta1());
        t / (1.0 + t)
    }

    pub fn conductivity(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
        }
        if xi == 0.0 {
            return Ok(0.0);
        }
        Ok(self.kernel.conductivity(xi)? * self.saturation(xi))
    }

    pub fn conductivity_from(&self, xi: f64, start: Option<f64>) -> Result<(f64, f64)> {
        if xi == 0.0 {
            return Ok((0.0, 0.0));
        }
        let (kf, s) = self.kernel.conductivity_from(xi, start)?;
        Ok((kf * self.saturation(xi), s))
    }

    pub fn conductivity_prime(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::Domain(format!("derivative requires xi > 0, got {xi}")));
        }
        let kf = self.kernel.conductivity(xi)?;
        let kf_prime = self.kernel.conductivity_prime(xi)?;
        let m = self.saturation(xi);
        let t = self.kbar * xi.powf(self.beta1());
        let m_prime = m * self.beta1() / (xi * (1.0 + t));
        Ok(kf_prime * m + kf * m_prime)
    }

    fn sandwich_multipliers(&self) -> (f64, f64) {
        let b1 = self.beta1();
        let (r_lo, r_hi) = self.kernel.ratio_bounds();
        let lo1 = 1f64.min(2f64.powf(b1 - 1.0));
        let hi1 = 1f64.max(2f64.powf(b1 - 1.0));
        let d2 = r_lo * self.kbar * lo1 / self.kbar.max(1.0);
        let d3 = r_hi * self.kbar * hi1 / self.kbar.min(1.0);
        (d2, d3)
    }
}

// ---------------------------------------------------------------------------
// Unified model
// ---------------------------------------------------------------------------

/// One of the four conductivity laws, exposing a common surface for
/// evaluation, inversion, derivatives, the energy density `H`, and the
/// comparison constants.
#[derive(Debug, Clone, PartialEq)]
pub enum ConductivityModel {
    Piecewise(PiecewiseModel),
    Interpolated(InterpolatedModel),
    Rational(RationalModel),
    Multiplicative(MultiplicativeModel),
}

/// Constants of the two-sided comparison `d₂K* ≤ K ≤ d₃K*` and its
/// consequences.
///
/// `d₁` bounds the Forchheimer kernel against `(1+ξ)^{-β₂}` (absent for
/// models without a Forchheimer part); `d₄ = d₃K*(ξ_c)` is the global bound
/// on `K`; `d₅ = d₂(1-β₂)/(2^{β₁+1}(β₁+1))` is the monotonicity modulus;
/// `d₆, d₇` are the perturbed-monotonicity constants of the interpolated
/// model evaluated for the pair `(ā, ā)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichConstants {
    pub beta1: f64,
    pub beta2: f64,
    pub xi_c: f64,
    pub k_star_at_xi_c: f64,
    pub d1: Option<f64>,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
    pub d6: Option<f64>,
    pub d7: Option<f64>,
}

impl ConductivityModel {
    /// Canonical smooth model `g_I(s) = s^{-1/2} + s`.
    pub fn canonical_interpolated() -> Self {
        let profile = ExponentProfile::new(0.5, vec![1.0]).unwrap();
        let coeffs = CoefficientVector::new(vec![1.0, 0.0, 1.0]).unwrap();
        ConductivityModel::Interpolated(InterpolatedModel::new(profile, coeffs).unwrap())
    }

    /// Canonical piecewise model: `α = 1/2`, `s₁ = 1`, `s₂ = 2`,
    /// `g_F(s) = 1 + s` (so `c₁ = c₂ = 3`, `Z₁ = 3`, `Z₂ = 6`, `M₁ = 1/9`).
    pub fn canonical_piecewise() -> Self {
        let kernel = ForchheimerKernel::new(vec![1.0, 1.0], vec![1.0]).unwrap();
        ConductivityModel::Piecewise(PiecewiseModel::new(0.5, 1.0, 2.0, kernel).unwrap())
    }

    /// Canonical rational model `a = b = c = 1`, `β₁ = 1`, `β₂ = 1/2`.
    pub fn canonical_rational() -> Self {
        ConductivityModel::Rational(RationalModel::new(1.0, 1.0, 1.0, 1.0, 0.5).unwrap())
    }

    /// Canonical multiplicative model: `g_F(s) = 1 + s`, `α = 1/2`, `M₁ = 1/9`.
    pub fn canonical_multiplicative() -> Self {
        let kernel = ForchheimerKernel::new(vec![1.0, 1.0], vec![1.0]).unwrap();
        ConductivityModel::Multiplicative(
            MultiplicativeModel::new(kernel, 0.5, 1.0 / 9.0).unwrap(),
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConductivityModel::Piecewise(_) => "piecewise",
            ConductivityModel::Interpolated(_) => "interpolated",
            ConductivityModel::Rational(_) => "rational",
            ConductivityModel::Multiplicative(_) => "multiplicative",
        }
    }

    pub fn beta1(&self) -> f64 {
        match self {
            ConductivityModel::Piecewise(m) => m.beta1(),
            ConductivityModel::Interpolated(m) => m.beta1(),
            ConductivityModel::Rational(m) => m.beta1(),
            ConductivityModel::Multiplicative(m) => m.beta1(),
        }
    }

    pub fn beta2(&self) -> f64 {
        match self {
            ConductivityModel::Piecewise(m) => m.beta2(),
            ConductivityModel::Interpolated(m) => m.beta2(),
            ConductivityModel::Rational(m) => m.beta2(),
            ConductivityModel::Multiplicative(m) => m.beta2(),
        }
    }

    pub fn xi_c(&self) -> f64 {
        self.beta1() / self.beta2()
    }

    /// Speed law `g(s)` for `s > 0`. Only the piecewise and interpolated
    /// models define a primary speed law; the other two prescribe `K`
    /// directly.
    pub fn eval_g(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!(
                "speed law g(s) requires s > 0 (g blows up like s^-alpha), got {s}"
            )));
        }
        match self {
            ConductivityModel::Piecewise(m) => Ok(m.g(s)),
            ConductivityModel::Interpolated(m) => Ok(m.g(s)),
            _ => Err(Error::Unsupported(format!(
                "{} model prescribes K directly and has no speed law",
                self.name()
            ))),
        }
    }

    /// Forward map `G(s) = s·g(s)` (0 at `s = 0`), strictly increasing.
    pub fn eval_forward(&self, s: f64) -> Result<f64> {
        if s < 0.0 {
            return Err(Error::Domain(format!("speed magnitude must be >= 0, got {s}")));
        }
        match self {
            ConductivityModel::Piecewise(m) => Ok(m.forward(s)),
            ConductivityModel::Interpolated(m) => Ok(m.forward(s)),
            _ => Err(Error::Unsupported(format!(
                "{} model prescribes K directly and has no forward map",
                self.name()
            ))),
        }
    }

    /// Inverse of the forward map: the speed `s` with `G(s) = ξ`.
    pub fn invert_forward(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
        }
        match self {
            ConductivityModel::Piecewise(m) => m.invert(xi),
            ConductivityModel::Interpolated(m) => m.invert(xi),
            _ => Err(Error::Unsupported(format!(
                "{} model prescribes K directly and has no forward map",
                self.name()
            ))),
        }
    }

    /// Conductivity `K(ξ)`; zero at `ξ = 0` for every model.
    pub fn conductivity(&self, xi: f64) -> Result<f64> {
        match self {
            ConductivityModel::Piecewise(m) => m.conductivity(xi),
            ConductivityModel::Interpolated(m) => m.conductivity(xi),
            ConductivityModel::Rational(m) => m.conductivity(xi),
            ConductivityModel::Multiplicative(m) => m.conductivity(xi),
        }
    }

    /// Conductivity with a warm-start speed hint, for tight evaluation loops
    /// where consecutive gradients are close (time stepping). The hint is
    /// updated to the new root when the model involves an inversion.
    pub fn conductivity_warm(&self, xi: f64, hint: &mut f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
        }
        let start = if *hint > 0.0 { Some(*hint) } else { None };
        match self {
            ConductivityModel::Interpolated(m) => {
                let (k, s) = m.conductivity_from(xi, start)?;
                *hint = s;
                Ok(k)
            }
            ConductivityModel::Multiplicative(m) => {
                let (k, s) = m.conductivity_from(xi, start)?;
                *hint = s;
                Ok(k)
            }
            ConductivityModel::Piecewise(m) => {
                let (_, z2) = m.kinks();
                if xi > z2 {
                    let (k, s) = m.kernel().conductivity_from(xi, start)?;
                    *hint = s;
                    Ok(k)
                } else {
                    m.conductivity(xi)
                }
            }
            ConductivityModel::Rational(m) => m.conductivity(xi),
        }
    }

    /// Analytic derivative `K'(ξ)` for `ξ > 0`. Fails with
    /// [`Error::Kink`] at the piecewise model's `Z₁`, `Z₂`.
    pub fn conductivity_prime(&self, xi: f64) -> Result<f64> {
        match self {
            ConductivityModel::Piecewise(m) => m.conductivity_prime(xi),
            ConductivityModel::Interpolated(m) => m.conductivity_prime(xi),
            ConductivityModel::Rational(m) => m.conductivity_prime(xi),
            ConductivityModel::Multiplicative(m) => m.conductivity_prime(xi),
        }
    }

    /// One-sided derivative; needed only at the piecewise kinks, elsewhere it
    /// agrees with [`Self::conductivity_prime`].
    pub fn conductivity_prime_sided(&self, xi: f64, side: DerivativeSide) -> Result<f64> {
        match self {
            ConductivityModel::Piecewise(m) => m.conductivity_prime_sided(xi, side),
            _ => self.conductivity_prime(xi),
        }
    }

    /// Gradient kinks of the piecewise model, if any.
    pub fn kinks(&self) -> Option<(f64, f64)> {
        match self {
            ConductivityModel::Piecewise(m) => Some(m.kinks()),
            _ => None,
        }
    }

    /// `∫_a^b K(u)·u du` by adaptive Simpson, splitting at the piecewise
    /// kinks. The integrand is nonnegative, so per-segment relative control
    /// keeps the total relative error at the same level.
    fn integrate_ku(&self, a: f64, b: f64) -> Result<f64> {
        let integrand = |u: f64| -> f64 {
            if u == 0.0 {
                0.0
            } else {
                // the models are continuous and the checks guard domains, so
                // failures cannot occur for u in (0, b]
                self.conductivity(u).expect("conductivity on (0, b]") * u
            }
        };
        let mut breaks = vec![a, b];
        if let Some((z1, z2)) = self.kinks() {
            for z in [z1, z2] {
                if z > a && z < b {
                    breaks.push(z);
                }
            }
            breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
        }
        let mut total = 0.0;
        for w in breaks.windows(2) {
            total += adaptive_simpson(&integrand, w[0], w[1], 0.0, 1e-11, 48)?;
        }
        Ok(total)
    }

    /// Energy density `H(ξ) = ∫₀^{ξ²} K(√σ) dσ = 2∫₀^ξ K(u)·u du`.
    ///
    /// Evaluated over a geometric partition of `[0, ξ]` (the integrand is a
    /// near power law across many decades); the head below `ξ·2⁻⁴⁰`
    /// contributes below rounding level and each dyadic segment is mild for
    /// the adaptive rule.
    pub fn energy_density(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 {
            return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
        }
        if xi == 0.0 {
            return Ok(0.0);
        }
        let mut total = 0.0;
        let mut lo = 0.0;
        let mut hi = xi * 2f64.powi(-40);
        while lo < xi {
            total += self.integrate_ku(lo, hi.min(xi))?;
            lo = hi;
            hi *= 2.0;
        }
        Ok(2.0 * total)
    }

    /// `H` at many points at once: the points are visited in increasing
    /// order and the integral is accumulated incrementally, so a field's
    /// worth of cell magnitudes costs one sweep instead of one quadrature
    /// per cell. Agrees with [`Self::energy_density`] to the same tolerance.
    pub fn energy_density_batch(&self, xis: &[f64]) -> Result<Vec<f64>> {
        let mut order: Vec<usize> = (0..xis.len()).collect();
        for &xi in xis {
            if !(xi >= 0.0) {
                return Err(Error::Domain(format!("gradient magnitude must be >= 0, got {xi}")));
            }
        }
        order.sort_by(|&a, &b| xis[a].partial_cmp(&xis[b]).unwrap());
        let mut out = vec![0.0; xis.len()];
        let mut prev_xi = 0.0;
        let mut prev_h = 0.0;
        for &idx in &order {
            let xi = xis[idx];
            if xi > prev_xi {
                if prev_xi == 0.0 {
                    prev_h = self.energy_density(xi)?;
                } else {
                    prev_h += 2.0 * self.integrate_ku(prev_xi, xi)?;
                }
                prev_xi = xi;
            }
            out[idx] = if xi == 0.0 { 0.0 } else { prev_h };
        }
        Ok(out)
    }

    /// All named comparison constants for this model.
    ///
    /// For the interpolated model `d₂, d₃` are the closed-form values
    /// `1/max{1,ξ₀}^{1+β₁}` and `(1+max{1,ξ₀})^{β₁+β₂}/min{1,a₋₁,a_N}^{1+β₁}`;
    /// for the other models they are assembled from exact per-branch extrema
    /// and the analytic Forchheimer enclosure.
    pub fn sandwich_constants(&self) -> SandwichConstants {
        let beta1 = self.beta1();
        let beta2 = self.beta2();
        let xi_c = beta1 / beta2;
        let k_star_at_xi_c = reference_kernel(beta1, beta2, xi_c);
        let (d2, d3) = match self {
            ConductivityModel::Piecewise(m) => m.sandwich_multipliers(),
            ConductivityModel::Interpolated(m) => {
                let xi0 = m.coefficients().xi0();
                let d2 = 1.0 / xi0.max(1.0).powf(1.0 + beta1);
                let amin = m
                    .coefficients()
                    .a_minus1()
                    .min(m.coefficients().a_last())
                    .min(1.0);
                let d3 = (1.0 + xi0.max(1.0)).powf(beta1 + beta2) / amin.powf(1.0 + beta1);
                (d2, d3)
            }
            ConductivityModel::Rational(m) => m.sandwich_multipliers(),
            ConductivityModel::Multiplicative(m) => m.sandwich_multipliers(),
        };
        let d1 = match self {
            ConductivityModel::Piecewise(m) => Some(m.kernel().degeneracy_bound()),
            ConductivityModel::Multiplicative(m) => Some(m.kernel().degeneracy_bound()),
            _ => None,
        };
        let d4 = d3 * k_star_at_xi_c;
        let d5 = d2 * (1.0 - beta2) / (2f64.powf(beta1 + 1.0) * (beta1 + 1.0));
        let (d6, d7) = match self {
            ConductivityModel::Interpolated(m) => {
                let (d6, d7) =
                    perturbation_constants(m.profile(), m.coefficients(), m.coefficients())
                        .expect("matching coefficient vectors");
                (Some(d6), Some(d7))
            }
            _ => (None, None),
        };
        SandwichConstants { beta1, beta2, xi_c, k_star_at_xi_c, d1, d2, d3, d4, d5, d6, d7 }
    }
}

/// Perturbed-monotonicity constants `(d₆, d₇)` for a pair of admissible
/// coefficient vectors sharing one exponent profile:
///
/// ```text
/// d₆ = (1-β₂) / ( (β₁+1)·[2(N+2)·max{1, aᵢ⁽ʲ⁾}]^{β₁+1} )
/// d₇ = (N+1) / ( (1-α)·min{a₋₁⁽¹⁾, a₋₁⁽²⁾, a_N⁽¹⁾, a_N⁽²⁾} )
/// ```
pub fn perturbation_constants(
    profile: &ExponentProfile,
    a1: &CoefficientVector,
    a2: &CoefficientVector,
) -> Result<(f64, f64)> {
    if a1.entries().len() != a2.entries().len() || a1.n_terms() != profile.n_terms() {
        return Err(Error::Shape(format!(
            "coefficient vectors must share the profile's shape (N = {})",
            profile.n_terms()
        )));
    }
    let beta1 = profile.beta1();
    let beta2 = profile.beta2();
    let n = profile.n_terms() as f64;
    let max_coeff = a1
        .entries()
        .iter()
        .chain(a2.entries())
        .fold(1.0f64, |acc, &v| acc.max(v));
    let d6 = (1.0 - beta2)
        / ((beta1 + 1.0) * (2.0 * (n + 2.0) * max_coeff).powf(beta1 + 1.0));
    let min_edge = a1
        .a_minus1()
        .min(a1.a_last())
        .min(a2.a_minus1())
        .min(a2.a_last());
    let d7 = (n + 1.0) / ((1.0 - profile.alpha()) * min_edge);
    Ok((d6, d7))
}
