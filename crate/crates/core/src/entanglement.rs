//! Negativity of the partial transpose.
//!
//! `N(rho)` is the sum of the magnitudes of the negative eigenvalues of
//! `rho^PT`, equivalently `(||rho^PT||_1 - 1) / 2`. It vanishes exactly on
//! separable two-qubit states and reaches 1/2 on maximally entangled ones.
//!
//! The partial transpose is taken over the second qubit. The values `mu_i`
//! reported alongside are the singular values of `rho^PT` (the magnitudes of
//! its eigenvalues), whose sum is the trace norm.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg::{hermitian_eigenvalues, norm, partial_transpose, ComplexMatrix, Subsystem};
use crate::thermal::ClosedFormElements;

/// Negativities at or below this magnitude are reported as exactly zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-14;

/// Tolerance for accepting a matrix as a density matrix.
pub const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegativityPath {
    ClosedForm,
    Oracle,
}

impl NegativityPath {
    pub fn name(self) -> &'static str {
        match self {
            NegativityPath::ClosedForm => "closed-form",
            NegativityPath::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityResult {
    pub negativity: f64,
    /// Singular values of `rho^PT`, descending.
    pub mu: [f64; 4],
    /// Eigenvalues of `rho^PT`, ascending.
    pub pt_eigenvalues: [f64; 4],
    pub path: NegativityPath,
}

impl NegativityResult {
    pub fn trace_norm(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn is_separable(&self) -> bool {
        self.negativity == 0.0
    }
}

fn clamp(n: f64) -> f64 {
    if n.abs() <= NEGATIVITY_CLAMP {
        0.0
    } else {
        n
    }
}

fn sorted_ascending(mut v: [f64; 4]) -> [f64; 4] {
    v.sort_by(f64::total_cmp);
    v
}

fn mu_from(pt_eigenvalues: &[f64; 4]) -> [f64; 4] {
    let mut mu = pt_eigenvalues.map(f64::abs);
    mu.sort_by(|a, b| b.total_cmp(a));
    mu
}

/// Verifies `rho` is a two-qubit density matrix within [`DENSITY_TOL`].
pub fn validate_density_matrix(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::NotADensityMatrix(format!(
            "expected a 4x4 matrix, got {0}x{0}",
            rho.dim()
        )));
    }
    validate_density_matrix_any(rho)
}

pub(crate) fn validate_density_matrix_any(rho: &ComplexMatrix) -> Result<()> {
    rho.check_finite()
        .map_err(|e| Error::NotADensityMatrix(e.to_string()))?;
    let dev = rho.hermiticity_deviation();
    if dev > DENSITY_TOL {
        return Err(Error::NotADensityMatrix(format!(
            "not hermitian (deviation {dev:e})"
        )));
    }
    let tr = rho.trace();
    if (tr - 1.0).norm() > DENSITY_TOL {
        return Err(Error::NotADensityMatrix(format!("trace is {tr}")));
    }
    let min = hermitian_eigenvalues(&rho.hermitian_part())?[0];
    if min < -DENSITY_TOL {
        return Err(Error::NotADensityMatrix(format!(
            "negative eigenvalue {min:e}"
        )));
    }
    Ok(())
}

/// Negativity from the eigenvalues of the numerically formed partial
/// transpose over the second qubit.
pub fn negativity_oracle(rho: &ComplexMatrix) -> Result<NegativityResult> {
    negativity_oracle_on(rho, Subsystem::Second)
}

/// [`negativity_oracle`] with the transposed subsystem chosen explicitly.
pub fn negativity_oracle_on(rho: &ComplexMatrix, subsystem: Subsystem) -> Result<NegativityResult> {
    validate_density_matrix(rho)?;
    let pt = partial_transpose(&rho.hermitian_part(), subsystem)?;
    let ev = hermitian_eigenvalues(&pt)?;
    let pt_eigenvalues = sorted_ascending([ev[0], ev[1], ev[2], ev[3]]);
    let negativity = clamp(pt_eigenvalues.iter().map(|&x| (-x).max(0.0)).sum());
    Ok(NegativityResult {
        negativity,
        mu: mu_from(&pt_eigenvalues),
        pt_eigenvalues,
        path: NegativityPath::Oracle,
    })
}

/// Negativity of the longitudinal thermal state from its four elements.
///
/// The partial transpose keeps `m2` twice on the diagonal and moves the
/// `-/+ i n2` coherence to the `{|00>, |11>}` corner, so
///
/// ```text
/// mu_{1,2} = m2
/// mu_{3,4} = sqrt((m1^2 + m4^2 + 2 n2^2 +/- (m1 + m4) sqrt((m1 - m4)^2 + 4 n2^2)) / 2)
/// N        = (mu_1 + mu_2 + mu_3 + mu_4 - 1) / 2
/// ```
///
/// The radicand of `mu_{3,4}` is the perfect square `((m1 + m4 +/- R)/2)^2`
/// with `R = sqrt((m1 - m4)^2 + 4 n2^2)`; the square root is taken
/// analytically so that `mu_4` keeps full precision near zero.
pub fn negativity_closed_form(e: &ClosedFormElements) -> Result<NegativityResult> {
    e.validate()?;
    let ClosedFormElements { m1, m2, n2, m4 } = *e;
    let s = m1 + m4;
    let r = (m1 - m4).hypot(2.0 * n2);
    let upper = 0.5 * (s + r);
    // (s - r)/2 = 2 (m1 m4 - n2^2) / (s + r), free of cancellation
    let lower = if s + r > 0.0 {
        2.0 * (m1 * m4 - n2 * n2) / (s + r)
    } else {
        0.0
    };
    let mu = [m2, m2, upper, lower.abs()];
    let trace = m1 + 2.0 * m2 + m4;
    let negativity = clamp(0.5 * (mu.iter().sum::<f64>() - trace)).max(0.0);
    let pt_eigenvalues = sorted_ascending([m2, m2, upper, lower]);
    Ok(NegativityResult {
        negativity,
        mu: mu_from(&pt_eigenvalues),
        pt_eigenvalues,
        path: NegativityPath::ClosedForm,
    })
}

/// Negativity of the pure state `|psi><psi|`.
pub fn pure_state_negativity(psi: &[Complex64]) -> Result<f64> {
    if psi.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: psi.len(),
        });
    }
    let n = norm(psi);
    if (n - 1.0).abs() > DENSITY_TOL {
        return Err(Error::NotNormalized { norm: n });
    }
    Ok(negativity_oracle(&ComplexMatrix::projector(psi))?.negativity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{analytic_spectrum, ModelParams};
    use crate::qlinalg::{ONE, ZERO};
    use crate::thermal::{closed_form_elements, Temperature};

    /// The radical form of mu_{3,4}, evaluated literally.
    fn mu_radical(e: &ClosedFormElements) -> (f64, f64) {
        let ClosedFormElements { m1, m2: _, n2, m4 } = *e;
        let r = ((m1 - m4).powi(2) + 4.0 * n2 * n2).sqrt();
        let base = m1 * m1 + m4 * m4 + 2.0 * n2 * n2;
        (
            ((base + (m1 + m4) * r) / 2.0).sqrt(),
            ((base - (m1 + m4) * r) / 2.0).max(0.0).sqrt(),
        )
    }

    #[test]
    fn maximally_mixed_is_separable() {
        let r = negativity_oracle(&ComplexMatrix::identity(4).scale(0.25)).unwrap();
        assert_eq!(r.negativity, 0.0);
        assert!(r.is_separable());
    }

    #[test]
    fn dm_doublet_is_maximally_entangled() {
        let p = ModelParams::longitudinal(1.0, 0.3, 0.2).unwrap();
        for pair in &analytic_spectrum(&p).unwrap().pairs[2..] {
            let r = negativity_oracle(&ComplexMatrix::projector(&pair.vector)).unwrap();
            assert!((r.negativity - 0.5).abs() < 1e-14);
            assert!((r.trace_norm() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn equal_mixture_of_transverse_ground_states_is_separable() {
        // hand-assembled: X2 = (|11> - |00>)/sqrt2, X4 = (|01> - |10>)/sqrt2
        let mut rho = ComplexMatrix::from_real_diagonal(&[0.25; 4]);
        rho[(0, 3)] = ONE * -0.25;
        rho[(3, 0)] = ONE * -0.25;
        rho[(1, 2)] = ONE * -0.25;
        rho[(2, 1)] = ONE * -0.25;
        let r = negativity_oracle(&rho).unwrap();
        assert_eq!(r.negativity, 0.0);
        // the two coherences swap blocks under PT: each block is 1/4 [[1, -1], [-1, 1]]
        let expected = [0.0, 0.0, 0.5, 0.5];
        for (a, b) in r.pt_eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_limits() {
        let diag = ClosedFormElements {
            m1: 0.1,
            m2: 0.3,
            n2: 0.0,
            m4: 0.3,
        };
        assert_eq!(negativity_closed_form(&diag).unwrap().negativity, 0.0);
        let bell = ClosedFormElements {
            m1: 0.0,
            m2: 0.5,
            n2: 0.5,
            m4: 0.0,
        };
        let r = negativity_closed_form(&bell).unwrap();
        assert_eq!(r.negativity, 0.5);
        assert_eq!(r.mu, [0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn closed_form_matches_oracle_at_unit_parameters() {
        let p = ModelParams::longitudinal(1.0, 1.0, 1.0).unwrap();
        let e = closed_form_elements(&p, Temperature::positive(1.0).unwrap()).unwrap();
        let cf = negativity_closed_form(&e).unwrap();
        let or = negativity_oracle(&e.density_matrix()).unwrap();
        assert!((cf.negativity - or.negativity).abs() < 1e-11);
        assert!(cf.negativity > 0.0);
        for (a, b) in cf.mu.iter().zip(&or.mu) {
            assert!((a - b).abs() < 1e-11);
        }
        // radical form agrees with the factored one
        let (hi, lo) = mu_radical(&e);
        assert!(cf.mu.iter().any(|&m| (m - hi).abs() < 1e-12));
        assert!(cf.mu.iter().any(|&m| (m - lo).abs() < 1e-8));
    }

    #[test]
    fn closed_form_rejects_malformed_elements() {
        let bad = ClosedFormElements {
            m1: 0.6,
            m2: 0.3,
            n2: 0.0,
            m4: 0.3,
        };
        assert!(matches!(
            negativity_closed_form(&bad),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn first_and_second_subsystem_agree() {
        let p = ModelParams::transverse(0.8, 0.4, 1.3).unwrap();
        let rho = crate::thermal::gibbs_spectral(&p, Temperature::positive(0.3).unwrap())
            .unwrap()
            .rho;
        let a = negativity_oracle_on(&rho, Subsystem::First).unwrap();
        let b = negativity_oracle_on(&rho, Subsystem::Second).unwrap();
        assert!(a.negativity > 0.0);
        assert!((a.negativity - b.negativity).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_density_matrices() {
        assert!(matches!(
            negativity_oracle(&ComplexMatrix::identity(4)),
            Err(Error::NotADensityMatrix(_))
        ));
        assert!(matches!(
            negativity_oracle(&ComplexMatrix::identity(2).scale(0.5)),
            Err(Error::NotADensityMatrix(_))
        ));
        let neg = ComplexMatrix::from_real_diagonal(&[0.6, 0.6, -0.2, 0.0]);
        assert!(matches!(
            negativity_oracle(&neg),
            Err(Error::NotADensityMatrix(_))
        ));
    }

    #[test]
    fn pure_states() {
        assert_eq!(
            pure_state_negativity(&[ZERO, ONE, ZERO, ZERO]).unwrap(),
            0.0
        );

        // X2 of the transverse model at J=1, B=0.5: a|00> + b|11>, a = B - sqrt(J^2+B^2), b = J
        let (a, b) = (0.5 - 1.25_f64.sqrt(), 1.0);
        let expected = (a * b).abs() / (a * a + b * b);
        let p = ModelParams::transverse(1.0, 0.5, 0.0).unwrap();
        let x2 = analytic_spectrum(&p).unwrap().pairs[1].vector;
        let n = pure_state_negativity(&x2).unwrap();
        assert!((n - expected).abs() < 1e-14);
        assert!((n - 0.4472).abs() < 1e-4);

        let p = ModelParams::longitudinal(1.0, 0.0, 1.0).unwrap();
        let x4 = analytic_spectrum(&p).unwrap().pairs[3].vector;
        assert!((pure_state_negativity(&x4).unwrap() - 0.5).abs() < 1e-14);

        assert!(matches!(
            pure_state_negativity(&[ONE, ONE, ZERO, ZERO]),
            Err(Error::NotNormalized { .. })
        ));
    }
}
