//! Gibbs states `rho(T) = exp(-H/T) / Z` with Boltzmann's constant set to 1.
//!
//! Two independent routes produce the state: a spectral one that
//! diagonalizes `H` (any model) and the closed-form thermal elements of the
//! longitudinal model. Both shift exponents by the largest one before
//! normalizing, so small temperatures never overflow. `T = 0` is handled only
//! by [`ground_projector`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{build_hamiltonian, ModelKind, ModelParams};
use crate::qlinalg::{BlockEigen, ComplexMatrix, I};

/// Non-negative temperature in energy units.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Temperature(f64);

impl Temperature {
    pub fn new(t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::TemperatureNotPositive(t));
        }
        Ok(Self(t))
    }

    /// Strictly positive temperature, as the Gibbs routes require.
    pub fn positive(t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::TemperatureNotPositive(t));
        }
        Ok(Self(t))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThermalPath {
    ClosedForm,
    Spectral,
    GroundProjector,
}

#[derive(Debug, Clone)]
pub struct ThermalState {
    pub rho: ComplexMatrix,
    pub temperature: Temperature,
    pub params: ModelParams,
    /// Lowest eigenvalue of `H`.
    pub ground_energy: f64,
    /// `sum_k exp(-(E_k - E_0)/T)`; the ground degeneracy at `T = 0`.
    pub shifted_partition_function: f64,
    pub path: ThermalPath,
}

impl ThermalState {
    /// `ln Z`, or `None` at `T = 0`.
    pub fn ln_partition_function(&self) -> Option<f64> {
        let t = self.temperature.value();
        (t > 0.0).then(|| self.shifted_partition_function.ln() - self.ground_energy / t)
    }

    /// `Z = Tr exp(-H/T)`; may overflow to infinity at small `T`.
    pub fn partition_function(&self) -> Option<f64> {
        self.ln_partition_function().map(f64::exp)
    }
}

/// Gibbs state of any model through the eigendecomposition of `H`.
pub fn gibbs_spectral(p: &ModelParams, t: Temperature) -> Result<ThermalState> {
    let temp = t.value();
    if temp <= 0.0 {
        return Err(Error::TemperatureNotPositive(temp));
    }
    let eig = BlockEigen::decompose(&build_hamiltonian(p)?)?;
    let e0 = eig.min_value();
    let unnormalized = eig.map_spectrum(|e| (-(e - e0) / temp).exp());
    let z_shift: f64 = eig.values().iter().map(|e| (-(e - e0) / temp).exp()).sum();
    Ok(ThermalState {
        rho: unnormalized.scale(1.0 / z_shift),
        temperature: t,
        params: *p,
        ground_energy: e0,
        shifted_partition_function: z_shift,
        path: ThermalPath::Spectral,
    })
}

/// Thermal matrix elements of the longitudinal model:
///
/// ```text
///          | m1   0      0    0  |
/// rho(T) = | 0    m2  -i n2   0  |
///          | 0  i n2     m2   0  |
///          | 0    0      0    m4 |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormElements {
    pub m1: f64,
    pub m2: f64,
    pub n2: f64,
    pub m4: f64,
}

impl ClosedFormElements {
    /// Checks `m1 + 2 m2 + m4 = 1`, `m_i >= 0` and `|n2| <= m2`.
    pub fn validate(&self) -> Result<()> {
        let Self { m1, m2, n2, m4 } = *self;
        if ![m1, m2, n2, m4].iter().all(|x| x.is_finite()) {
            return Err(Error::InvariantViolation("non-finite element".into()));
        }
        if (m1 + 2.0 * m2 + m4 - 1.0).abs() > 1e-12 {
            return Err(Error::InvariantViolation(format!(
                "m1 + 2 m2 + m4 = {} != 1",
                m1 + 2.0 * m2 + m4
            )));
        }
        if m1 < 0.0 || m2 < 0.0 || m4 < 0.0 {
            return Err(Error::InvariantViolation("negative population".into()));
        }
        if n2.abs() > m2 * (1.0 + 1e-12) {
            return Err(Error::InvariantViolation(format!(
                "|n2| = {} > m2 = {m2}",
                n2.abs()
            )));
        }
        Ok(())
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        let mut rho = ComplexMatrix::from_real_diagonal(&[self.m1, self.m2, self.m2, self.m4]);
        rho[(1, 2)] = -I * self.n2;
        rho[(2, 1)] = I * self.n2;
        rho
    }
}

/// Exponents of the four closed-form weights relative to `|00>`, and the
/// largest of them.
fn closed_form_exponents(p: &ModelParams, t: f64) -> ([f64; 4], f64) {
    let a4 = 4.0 * p.b / t;
    let x = 2.0 * (2.0 * p.j + p.b) / t;
    let y = 2.0 * p.d / t;
    let e = [0.0, a4, x + y, x - y];
    let m = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (e, m)
}

/// The closed-form thermal elements of the longitudinal model,
///
/// ```text
/// m1 = 1 / D,  m2 = e^{2(2J+B)/T} cosh(2d/T) / D,
/// n2 = e^{2(2J+B)/T} sinh(2d/T) / D,  m4 = e^{4B/T} / D,
/// D  = 1 + e^{4B/T} + 2 e^{2(2J+B)/T} cosh(2d/T),
/// ```
///
/// evaluated with the largest exponent factored out of numerator and
/// denominator.
pub fn closed_form_elements(p: &ModelParams, t: Temperature) -> Result<ClosedFormElements> {
    if p.kind != ModelKind::LongitudinalDm {
        return Err(Error::UnsupportedKind(p.kind.name()));
    }
    p.validate()?;
    let temp = t.value();
    if temp <= 0.0 {
        return Err(Error::TemperatureNotPositive(temp));
    }
    let (e, m) = closed_form_exponents(p, temp);
    let [w1, w4, wp, wm] = e.map(|x| (x - m).exp());
    let denom = w1 + w4 + wp + wm;
    Ok(ClosedFormElements {
        m1: w1 / denom,
        m2: 0.5 * (wp + wm) / denom,
        n2: 0.5 * (wp - wm) / denom,
        m4: w4 / denom,
    })
}

/// Closed-form elements assembled into a [`ThermalState`].
pub fn gibbs_closed_form(p: &ModelParams, t: Temperature) -> Result<ThermalState> {
    let elements = closed_form_elements(p, t)?;
    let temp = t.value();
    let (e, m) = closed_form_exponents(p, temp);
    // exponents are measured from E(|00>) = 2(J+B); the largest marks the ground level
    let ground_energy = 2.0 * (p.j + p.b) - m * temp;
    let shifted: f64 = e.iter().map(|x| (x - m).exp()).sum();
    Ok(ThermalState {
        rho: elements.density_matrix(),
        temperature: t,
        params: *p,
        ground_energy,
        shifted_partition_function: shifted,
        path: ThermalPath::ClosedForm,
    })
}

/// The `T -> 0+` limit: the maximally mixed state on the ground eigenspace.
/// Levels within `1e-12 * max(1, |E_0|)` of the minimum count as ground.
pub fn ground_projector(p: &ModelParams) -> Result<ThermalState> {
    let eig = BlockEigen::decompose(&build_hamiltonian(p)?)?;
    let e0 = eig.min_value();
    let tol = 1e-12 * e0.abs().max(1.0);
    let is_ground = |e: f64| e - e0 <= tol;
    let degeneracy = eig.values().iter().filter(|&&e| is_ground(e)).count();
    Ok(ThermalState {
        rho: eig.spectral_projector(is_ground, 1.0 / degeneracy as f64),
        temperature: Temperature(0.0),
        params: *p,
        ground_energy: e0,
        shifted_partition_function: degeneracy as f64,
        path: ThermalPath::GroundProjector,
    })
}
