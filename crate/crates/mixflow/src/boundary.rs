//! Dirichlet boundary data as closed-form extensions.
//!
//! The boundary pressure `ψ` is supplied through an extension `Ψ(x,t)`
//! defined on the whole closed domain as a sum of separable terms
//! `A·φ(x)·τ(t)`; its trace on the boundary is `ψ`. Keeping `Ψ` analytic
//! makes `Ψ_t`, `∇Ψ`, and `∇Ψ_t` exact, which the forcing diagnostics and
//! the dependence experiments rely on.

/// Spatial factor `φ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpatialShape {
    /// `c + g·x`
    Affine { intercept: f64, slope: [f64; 2] },
    /// `Π_d sin(freq_d · x_d)` over axes with a nonzero frequency.
    Sinusoid { freq: [f64; 2] },
    /// `exp(-|x-c|² / (2w²))`
    GaussianBump { center: [f64; 2], width: f64 },
}

impl SpatialShape {
    fn value(&self, x: [f64; 2]) -> f64 {
        match self {
            SpatialShape::Affine { intercept, slope } => {
                intercept + slope[0] * x[0] + slope[1] * x[1]
            }
            SpatialShape::Sinusoid { freq } => {
                let mut v = 1.0;
                for d in 0..2 {
                    if freq[d] != 0.0 {
                        v *= (freq[d] * x[d]).sin();
                    }
                }
                v
            }
            SpatialShape::GaussianBump { center, width } => {
                let dx = x[0] - center[0];
                let dy = x[1] - center[1];
                (-(dx * dx + dy * dy) / (2.0 * width * width)).exp()
            }
        }
    }

    fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        match self {
            SpatialShape::Affine { slope, .. } => *slope,
            SpatialShape::Sinusoid { freq } => {
                let fx = if freq[0] != 0.0 { (freq[0] * x[0]).sin() } else { 1.0 };
                let fy = if freq[1] != 0.0 { (freq[1] * x[1]).sin() } else { 1.0 };
                let dfx = if freq[0] != 0.0 { freq[0] * (freq[0] * x[0]).cos() } else { 0.0 };
                let dfy = if freq[1] != 0.0 { freq[1] * (freq[1] * x[1]).cos() } else { 0.0 };
                [dfx * fy, fx * dfy]
            }
            SpatialShape::GaussianBump { center, width } => {
                let v = self.value(x);
                let w2 = width * width;
                [-(x[0] - center[0]) / w2 * v, -(x[1] - center[1]) / w2 * v]
            }
        }
    }
}

/// Temporal factor `τ(t)` with a closed-form derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeShape {
    Constant,
    /// `e^{-λt}`
    ExpDecay { rate: f64 },
    /// `sin(ωt)`
    Sinusoid { omega: f64 },
    /// `(1+t)^{-q}`
    PowerDecay { q: f64 },
}

impl TimeShape {
    fn value(&self, t: f64) -> f64 {
        match self {
            TimeShape::Constant => 1.0,
            TimeShape::ExpDecay { rate } => (-rate * t).exp(),
            TimeShape::Sinusoid { omega } => (omega * t).sin(),
            TimeShape::PowerDecay { q } => (1.0 + t).powf(-q),
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        match self {
            TimeShape::Constant => 0.0,
            TimeShape::ExpDecay { rate } => -rate * (-rate * t).exp(),
            TimeShape::Sinusoid { omega } => omega * (omega * t).cos(),
            TimeShape::PowerDecay { q } => -q * (1.0 + t).powf(-q - 1.0),
        }
    }
}

/// One separable term `A·φ(x)·τ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTerm {
    pub amplitude: f64,
    pub shape: SpatialShape,
    pub time: TimeShape,
}

/// The boundary extension `Ψ(x,t) = Σ A·φ(x)·τ(t)`, together with its exact
/// time derivative and spatial gradients. An empty term list is `Ψ ≡ 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundaryProfile {
    pub terms: Vec<ProfileTerm>,
}

impl BoundaryProfile {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn single(amplitude: f64, shape: SpatialShape, time: TimeShape) -> Self {
        Self { terms: vec![ProfileTerm { amplitude, shape, time }] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.amplitude == 0.0)
    }

    /// Superposition `Ψ₁ + scale·Ψ₂` (used to build perturbed boundary data).
    pub fn superpose(&self, other: &Self, scale: f64) -> Self {
        let mut terms = self.terms.clone();
        for t in &other.terms {
            terms.push(ProfileTerm { amplitude: scale * t.amplitude, ..t.clone() });
        }
        Self { terms }
    }

    pub fn psi(&self, x: [f64; 2], t: f64) -> f64 {
        self.terms.iter().map(|tm| tm.amplitude * tm.shape.value(x) * tm.time.value(t)).sum()
    }

    pub fn psi_t(&self, x: [f64; 2], t: f64) -> f64 {
        self.terms.iter().map(|tm| tm.amplitude * tm.shape.value(x) * tm.time.derivative(t)).sum()
    }

    pub fn grad(&self, x: [f64; 2], t: f64) -> [f64; 2] {
        let mut g = [0.0, 0.0];
        for tm in &self.terms {
            let gv = tm.shape.gradient(x);
            let w = tm.amplitude * tm.time.value(t);
            g[0] += w * gv[0];
            g[1] += w * gv[1];
        }
        g
    }

    pub fn grad_t(&self, x: [f64; 2], t: f64) -> [f64; 2] {
        let mut g = [0.0, 0.0];
        for tm in &self.terms {
            let gv = tm.shape.gradient(x);
            let w = tm.amplitude * tm.time.derivative(t);
            g[0] += w * gv[0];
            g[1] += w * gv[1];
        }
        g
    }
}
