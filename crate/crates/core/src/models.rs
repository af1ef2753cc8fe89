//! Hamiltonians of the two-qubit Ising-DM models and the open N-site chain.
//!
//! Longitudinal model (field and DM vector along the Ising axis z):
//!
//! ```text
//! H = 2J sz1 sz2 + B (sz1 + sz2) + d (sx1 sy2 - sy1 sx2)
//! ```
//!
//! Transverse model (Ising axis x, field and DM vector along z):
//!
//! ```text
//! H = 2J sx1 sx2 + B (sz1 + sz2) + d (sx1 sy2 - sy1 sx2)
//! ```
//!
//! The chain model is an exploratory extension of the longitudinal model to
//! `n` sites with open boundaries: every nearest-neighbour bond carries the
//! Ising and DM terms and every site feels the field.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entanglement::pure_state_negativity;
use crate::error::{Error, Result};
use crate::qlinalg::{ComplexMatrix, I, ONE, ZERO};

pub const MAX_CHAIN_SITES: usize = 12;

/// Relative eigenvalue gap below which two levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[serde(rename = "longitudinal")]
    LongitudinalDm,
    #[serde(rename = "transverse")]
    TransverseDm,
    #[serde(rename = "chain")]
    ChainDm,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::LongitudinalDm => "longitudinal",
            ModelKind::TransverseDm => "transverse",
            ModelKind::ChainDm => "chain",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "longitudinal" => Ok(ModelKind::LongitudinalDm),
            "transverse" => Ok(ModelKind::TransverseDm),
            "chain" => Ok(ModelKind::ChainDm),
            other => Err(Error::InvalidParams(format!("unknown model '{other}'"))),
        }
    }
}

/// Physical parameters of one Hamiltonian instance. All energies share one
/// unit; `j > 0` is antiferromagnetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub kind: ModelKind,
    pub j: f64,
    pub b: f64,
    pub d: f64,
    pub n_sites: usize,
}

impl ModelParams {
    pub fn new(kind: ModelKind, j: f64, b: f64, d: f64, n_sites: usize) -> Result<Self> {
        let p = Self {
            kind,
            j,
            b,
            d,
            n_sites,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn longitudinal(j: f64, b: f64, d: f64) -> Result<Self> {
        Self::new(ModelKind::LongitudinalDm, j, b, d, 2)
    }

    pub fn transverse(j: f64, b: f64, d: f64) -> Result<Self> {
        Self::new(ModelKind::TransverseDm, j, b, d, 2)
    }

    pub fn chain(n_sites: usize, j: f64, b: f64, d: f64) -> Result<Self> {
        Self::new(ModelKind::ChainDm, j, b, d, n_sites)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("J", self.j), ("B", self.b), ("d", self.d)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        match self.kind {
            ModelKind::ChainDm => {
                if self.n_sites > MAX_CHAIN_SITES {
                    return Err(Error::SizeLimit(self.n_sites));
                }
                if self.n_sites < 2 {
                    return Err(Error::InvalidParams(format!(
                        "a chain needs at least 2 sites, got {}",
                        self.n_sites
                    )));
                }
            }
            _ if self.n_sites != 2 => {
                return Err(Error::InvalidParams(format!(
                    "{} model has exactly 2 sites, got {}",
                    self.kind, self.n_sites
                )));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn with_field(self, b: f64) -> Self {
        Self { b, ..self }
    }

    pub fn with_dm(self, d: f64) -> Self {
        Self { d, ..self }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pauli {
    X,
    Y,
    Z,
}

/// A real multiple of a Pauli string.
struct Term {
    coeff: f64,
    ops: Vec<(usize, Pauli)>,
}

impl Term {
    fn new(coeff: f64, ops: &[(usize, Pauli)]) -> Self {
        Self {
            coeff,
            ops: ops.to_vec(),
        }
    }

    /// `P|x> = phase |y>`; site 0 is the most significant bit.
    fn act(&self, x: usize, n_sites: usize) -> (usize, Complex64) {
        let mut y = x;
        let mut phase = ONE;
        for &(site, op) in &self.ops {
            let mask = 1 << (n_sites - 1 - site);
            let up = y & mask == 0;
            match op {
                Pauli::X => y ^= mask,
                Pauli::Y => {
                    y ^= mask;
                    phase *= if up { I } else { -I };
                }
                Pauli::Z => {
                    if !up {
                        phase = -phase;
                    }
                }
            }
        }
        (y, phase)
    }
}

fn terms(p: &ModelParams) -> Vec<Term> {
    use Pauli::*;
    let ising = match p.kind {
        ModelKind::TransverseDm => X,
        ModelKind::LongitudinalDm | ModelKind::ChainDm => Z,
    };
    let mut out = Vec::new();
    for i in 0..p.n_sites - 1 {
        let k = i + 1;
        out.push(Term::new(2.0 * p.j, &[(i, ising), (k, ising)]));
        out.push(Term::new(p.d, &[(i, X), (k, Y)]));
        out.push(Term::new(-p.d, &[(i, Y), (k, X)]));
    }
    for i in 0..p.n_sites {
        out.push(Term::new(p.b, &[(i, Z)]));
    }
    out
}

/// Dense Hamiltonian in the computational basis.
///
/// A two-site chain yields exactly the longitudinal matrix: both are built
/// from the same term list in the same order.
pub fn build_hamiltonian(p: &ModelParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let n = p.n_sites;
    let dim = p.dim();
    let mut h = ComplexMatrix::zeros(dim);
    for term in terms(p) {
        if term.coeff == 0.0 {
            continue;
        }
        for x in 0..dim {
            let (y, phase) = term.act(x, n);
            h[(y, x)] += phase * term.coeff;
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// Unit vector over `|00>, |01>, |10>, |11>`.
    pub vector: [Complex64; 4],
}

/// Closed-form eigenpairs of a two-qubit model, in the order
/// `lambda_1 .. lambda_4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSpectrum {
    pub pairs: [Eigenpair; 4],
}

impl AnalyticSpectrum {
    pub fn values(&self) -> [f64; 4] {
        self.pairs.map(|p| p.value)
    }

    pub fn sorted_values(&self) -> [f64; 4] {
        let mut v = self.values();
        v.sort_by(f64::total_cmp);
        v
    }
}

fn normalized(v: [Complex64; 4]) -> [Complex64; 4] {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z / n)
}

fn on_00_11(a: f64, b: f64) -> [Complex64; 4] {
    normalized([ONE * a, ZERO, ZERO, ONE * b])
}

fn basis(k: usize) -> [Complex64; 4] {
    let mut v = [ZERO; 4];
    v[k] = ONE;
    v
}

/// Eigenvalues and unit eigenvectors in closed form.
///
/// Longitudinal: `2(J+B), 2(J-B), -2(J-d), -2(J+d)` with `|00>`, `|11>`,
/// `(|01> -/+ i|10>)/sqrt(2)`.
///
/// Transverse: `+/-2 sqrt(J^2+B^2)` on `{|00>, |11>}` and
/// `+/-2 sqrt(J^2+d^2)` on `{|01>, |10>}`. The `{|00>,|11>}` vectors use
/// whichever of two proportional forms avoids cancellation for the sign of
/// `B`. The `{|01>,|10>}` pair is `(J+id)|01> + s|10>` and `s|01> - (J-id)|10>`
/// with `s = sqrt(J^2+d^2)`, the phase convention fixed by the DM term's
/// `<01|H|10> = 2(J + i d)`.
pub fn analytic_spectrum(p: &ModelParams) -> Result<AnalyticSpectrum> {
    p.validate()?;
    let (j, b, d) = (p.j, p.b, p.d);
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let pairs = match p.kind {
        ModelKind::LongitudinalDm => [
            Eigenpair {
                value: 2.0 * (j + b),
                vector: basis(0),
            },
            Eigenpair {
                value: 2.0 * (j - b),
                vector: basis(3),
            },
            Eigenpair {
                value: -2.0 * (j - d),
                vector: [ZERO, ONE * s2, -I * s2, ZERO],
            },
            Eigenpair {
                value: -2.0 * (j + d),
                vector: [ZERO, ONE * s2, I * s2, ZERO],
            },
        ],
        ModelKind::TransverseDm => {
            let r = j.hypot(b);
            let s = j.hypot(d);
            let (x1, x2) = if r == 0.0 {
                (basis(0), basis(3))
            } else if b >= 0.0 {
                (on_00_11(r + b, j), on_00_11(-j, r + b))
            } else {
                (on_00_11(j, r - b), on_00_11(b - r, j))
            };
            let (x3, x4) = if s == 0.0 {
                (basis(1), basis(2))
            } else {
                let jd = Complex64::new(j, d);
                let norm = std::f64::consts::SQRT_2 * s;
                (
                    [ZERO, jd / norm, ONE * (s / norm), ZERO],
                    [ZERO, ONE * (s / norm), -jd.conj() / norm, ZERO],
                )
            };
            [
                Eigenpair {
                    value: 2.0 * r,
                    vector: x1,
                },
                Eigenpair {
                    value: -2.0 * r,
                    vector: x2,
                },
                Eigenpair {
                    value: 2.0 * s,
                    vector: x3,
                },
                Eigenpair {
                    value: -2.0 * s,
                    vector: x4,
                },
            ]
        }
        ModelKind::ChainDm => return Err(Error::UnsupportedKind("chain")),
    };
    Ok(AnalyticSpectrum { pairs })
}

/// Negativity of the (nondegenerate) ground state of the longitudinal model:
/// 0 for the product levels `|00>, |11>`, 1/2 for the DM doublet.
pub fn ground_state_negativity_longitudinal(p: &ModelParams) -> Result<f64> {
    if p.kind != ModelKind::LongitudinalDm {
        return Err(Error::UnsupportedKind(p.kind.name()));
    }
    let spec = analytic_spectrum(p)?;
    let (k_min, ground) = spec
        .pairs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value))
        .expect("four levels");
    let gap = spec
        .pairs
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != k_min)
        .map(|(_, e)| e.value - ground.value)
        .fold(f64::INFINITY, f64::min);
    if gap < DEGENERACY_TOL * ground.value.abs().max(1.0) {
        return Err(Error::DegenerateGround { gap });
    }
    pure_state_negativity(&ground.vector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{hermitian_eigenvalues, kron, kron_all, pauli};

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    /// Independent route: assemble the two-qubit Hamiltonians from Kronecker
    /// products of Pauli matrices.
    fn kron_hamiltonian(p: &ModelParams) -> ComplexMatrix {
        let (x, y, z, id) = (pauli::x(), pauli::y(), pauli::z(), pauli::identity());
        let ising = match p.kind {
            ModelKind::TransverseDm => kron(&x, &x),
            _ => kron(&z, &z),
        };
        let field = &kron(&z, &id) + &kron(&id, &z);
        let dm = &kron(&x, &y) - &kron(&y, &x);
        &(&ising.scale(2.0 * p.j) + &field.scale(p.b)) + &dm.scale(p.d)
    }

    #[test]
    fn pure_ising_term() {
        let h = build_hamiltonian(&ModelParams::longitudinal(1.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(
            h,
            ComplexMatrix::from_real_diagonal(&[2.0, -2.0, -2.0, 2.0])
        );
    }

    #[test]
    fn longitudinal_unit_parameters() {
        let h = build_hamiltonian(&ModelParams::longitudinal(1.0, 1.0, 1.0).unwrap()).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| h[(i, i)].re).collect();
        assert_eq!(diag, vec![4.0, -2.0, -2.0, 0.0]);
        // <01|H|10> = 2 i d with sigma_y = [[0,-i],[i,0]]
        assert_eq!(h[(1, 2)], Complex64::new(0.0, 2.0));
        assert_eq!(h[(2, 1)], Complex64::new(0.0, -2.0));
    }

    #[test]
    fn builders_agree_with_kron_route() {
        for kind in [ModelKind::LongitudinalDm, ModelKind::TransverseDm] {
            for &(j, b, d) in &[(1.0, 0.5, 0.3), (-0.7, 2.0, -1.1), (0.0, 0.0, 3.0)] {
                let p = ModelParams::new(kind, j, b, d, 2).unwrap();
                let h = build_hamiltonian(&p).unwrap();
                assert!(
                    close(&h, &kron_hamiltonian(&p), 1e-15),
                    "{kind} {j} {b} {d}"
                );
                assert_eq!(h.trace(), ZERO);
            }
        }
    }

    #[test]
    fn chain_matches_kron_route_for_three_sites() {
        let p = ModelParams::chain(3, 0.8, -0.4, 0.6).unwrap();
        let (x, y, z, id) = (pauli::x(), pauli::y(), pauli::z(), pauli::identity());
        let site = |op: &ComplexMatrix, k: usize| {
            let f: Vec<&ComplexMatrix> = (0..3).map(|s| if s == k { op } else { &id }).collect();
            kron_all(f)
        };
        let mut expected = ComplexMatrix::zeros(8);
        for i in 0..2 {
            let zz = site(&z, i).matmul(&site(&z, i + 1)).unwrap();
            let xy = site(&x, i).matmul(&site(&y, i + 1)).unwrap();
            let yx = site(&y, i).matmul(&site(&x, i + 1)).unwrap();
            expected = &expected + &zz.scale(2.0 * p.j);
            expected = &expected + &(&xy - &yx).scale(p.d);
        }
        for i in 0..3 {
            expected = &expected + &site(&z, i).scale(p.b);
        }
        assert!(close(&build_hamiltonian(&p).unwrap(), &expected, 1e-15));
    }

    #[test]
    fn two_site_chain_is_longitudinal() {
        let c = build_hamiltonian(&ModelParams::chain(2, 1.0, 0.5, 0.3).unwrap()).unwrap();
        let l = build_hamiltonian(&ModelParams::longitudinal(1.0, 0.5, 0.3).unwrap()).unwrap();
        assert_eq!(c, l);
    }

    #[test]
    fn analytic_longitudinal_values() {
        let p = ModelParams::longitudinal(1.0, 2.0, 0.5).unwrap();
        assert_eq!(
            analytic_spectrum(&p).unwrap().values(),
            [6.0, -2.0, -1.0, -3.0]
        );
        let numeric = hermitian_eigenvalues(&build_hamiltonian(&p).unwrap()).unwrap();
        for (a, n) in [-3.0, -2.0, -1.0, 6.0].iter().zip(&numeric) {
            assert!((a - n).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_transverse_values() {
        let p = ModelParams::transverse(1.0, 0.0, 0.0).unwrap();
        assert_eq!(
            analytic_spectrum(&p).unwrap().values(),
            [2.0, -2.0, 2.0, -2.0]
        );
        let p = ModelParams::transverse(3.0, 4.0, 0.0).unwrap();
        let spec = analytic_spectrum(&p).unwrap();
        assert_eq!(spec.pairs[0].value, 10.0);
        assert_eq!(spec.pairs[1].value, -10.0);
        for pair in &spec.pairs[..2] {
            assert_eq!(pair.vector[1], ZERO);
            assert_eq!(pair.vector[2], ZERO);
        }
    }

    #[test]
    fn analytic_vectors_are_unit_eigenvectors() {
        for kind in [ModelKind::LongitudinalDm, ModelKind::TransverseDm] {
            for &(j, b, d) in &[
                (1.0, 0.5, 0.3),
                (-2.0, -1.5, 0.7),
                (0.0, 1.0, 0.0),
                (0.0, -1.0, -2.0),
                (0.0, 0.0, 0.0),
                (1e-9, 3.0, 1e-9),
            ] {
                let p = ModelParams::new(kind, j, b, d, 2).unwrap();
                let h = build_hamiltonian(&p).unwrap();
                for pair in analytic_spectrum(&p).unwrap().pairs {
                    let norm: f64 = pair.vector.iter().map(|z| z.norm_sqr()).sum();
                    assert!((norm - 1.0).abs() < 1e-14);
                    let hv = h.apply(&pair.vector).unwrap();
                    for (a, v) in hv.iter().zip(&pair.vector) {
                        assert!((a - v * pair.value).norm() < 1e-10, "{kind} {j} {b} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn chain_has_no_closed_form() {
        let p = ModelParams::chain(3, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(analytic_spectrum(&p), Err(Error::UnsupportedKind("chain")));
    }

    #[test]
    fn ground_state_negativity_cases() {
        let g = |b: f64, d: f64| {
            ground_state_negativity_longitudinal(&ModelParams::longitudinal(1.0, b, d).unwrap())
        };
        assert!((g(0.0, 0.1).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(g(10.0, 0.1).unwrap(), 0.0);
        // 2(J-B) = -2(J+d) at B = 2J + d
        assert!(matches!(g(3.0, 1.0), Err(Error::DegenerateGround { .. })));
    }

    #[test]
    fn parameter_validation() {
        assert!(ModelParams::longitudinal(f64::NAN, 0.0, 0.0).is_err());
        assert!(ModelParams::new(ModelKind::TransverseDm, 1.0, 0.0, 0.0, 3).is_err());
        assert_eq!(
            ModelParams::chain(13, 1.0, 0.0, 0.0),
            Err(Error::SizeLimit(13))
        );
        assert!(ModelParams::chain(1, 1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::chain(12, 1.0, 0.0, 0.0).is_ok());
    }
}
