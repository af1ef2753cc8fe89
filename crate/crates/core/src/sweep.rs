//! Parameter sweeps and threshold finders.
//!
//! A point counts as entangled while `N > threshold`. All finders bracket the
//! crossing and bisect; `N` has kinks at level crossings near `T -> 0`, where
//! derivative-based methods misbehave.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::pair_negativity;
use crate::entanglement::{
    negativity_closed_form, negativity_oracle, NegativityPath, NegativityResult,
};
use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelParams};
use crate::thermal::{closed_form_elements, gibbs_spectral, Temperature};

pub const DEFAULT_THRESHOLD: f64 = 1e-4;

/// Negativity of the Gibbs state of `p` at temperature `t`.
///
/// Longitudinal models use the closed form; transverse models the numerical
/// oracle; chains report the first bond, sites (0, 1).
pub fn evaluate_point(p: &ModelParams, t: f64) -> Result<NegativityResult> {
    let temp = Temperature::positive(t)?;
    match p.kind {
        ModelKind::LongitudinalDm => negativity_closed_form(&closed_form_elements(p, temp)?),
        ModelKind::TransverseDm => negativity_oracle(&gibbs_spectral(p, temp)?.rho),
        ModelKind::ChainDm => pair_negativity(p, temp, (0, 1)),
    }
}

fn negativity_at(p: &ModelParams, t: f64) -> Result<f64> {
    Ok(evaluate_point(p, t)?.negativity)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "T")]
    Temperature,
    #[serde(rename = "B")]
    Field,
    #[serde(rename = "d")]
    Dm,
}

impl SweepAxis {
    pub fn symbol(self) -> &'static str {
        match self {
            SweepAxis::Temperature => "T",
            SweepAxis::Field => "B",
            SweepAxis::Dm => "d",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "T" => Some(SweepAxis::Temperature),
            "B" => Some(SweepAxis::Field),
            "d" => Some(SweepAxis::Dm),
            _ => None,
        }
    }
}

/// Inclusive, evenly spaced range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (k as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Supplies the model kind, `J`, and the fixed `B` and `d`.
    pub model: ModelParams,
    /// Used when `T` is not an axis.
    pub temperature: f64,
    /// Varying axes, outermost first.
    pub axes: Vec<(SweepAxis, AxisRange)>,
    pub threshold: f64,
}

impl SweepSpec {
    pub fn new(model: ModelParams, temperature: f64) -> Self {
        Self {
            model,
            temperature,
            axes: Vec::new(),
            threshold: DEFAULT_THRESHOLD,
        }
    }

    pub fn vary(mut self, axis: SweepAxis, min: f64, max: f64, steps: usize) -> Self {
        self.axes.push((axis, AxisRange::new(min, max, steps)));
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.axes.is_empty() {
            return Err(Error::InvalidSweep("no axis varies".into()));
        }
        for (i, (axis, range)) in self.axes.iter().enumerate() {
            let name = axis.symbol();
            if self.axes[..i].iter().any(|(a, _)| a == axis) {
                return Err(Error::InvalidSweep(format!("axis {name} given twice")));
            }
            if !(range.min.is_finite() && range.max.is_finite()) {
                return Err(Error::InvalidSweep(format!(
                    "axis {name} has a non-finite bound"
                )));
            }
            if range.min >= range.max {
                return Err(Error::InvalidSweep(format!(
                    "axis {name} is empty: min {} >= max {}",
                    range.min, range.max
                )));
            }
            if range.steps < 2 {
                return Err(Error::InvalidSweep(format!(
                    "axis {name} needs at least 2 steps"
                )));
            }
            if *axis == SweepAxis::Temperature && range.min <= 0.0 {
                return Err(Error::InvalidSweep(
                    "temperature axis must start above 0".into(),
                ));
            }
        }
        let varies_t = self.axes.iter().any(|(a, _)| *a == SweepAxis::Temperature);
        if !varies_t && !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::InvalidSweep(format!(
                "fixed temperature must be positive, got {}",
                self.temperature
            )));
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::InvalidSweep(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        Ok(())
    }

    /// Grid points `(T, B, d)` with the first axis varying slowest.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut points = vec![(self.temperature, self.model.b, self.model.d)];
        for (axis, range) in &self.axes {
            let values = range.values();
            points = points
                .into_iter()
                .flat_map(|pt| {
                    values.iter().map(move |&v| {
                        let (mut t, mut b, mut d) = pt;
                        match axis {
                            SweepAxis::Temperature => t = v,
                            SweepAxis::Field => b = v,
                            SweepAxis::Dm => d = v,
                        }
                        (t, b, d)
                    })
                })
                .collect();
        }
        points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub model: ModelKind,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub d: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "N")]
    pub negativity: f64,
    #[serde(skip)]
    pub path: Option<NegativityPath>,
}

/// Evaluates every grid point, in parallel, returning records in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    spec.points()
        .into_par_iter()
        .map(|(t, b, d)| {
            let p = spec.model.with_field(b).with_dm(d);
            let r = evaluate_point(&p, t).map_err(|e| Error::SweepPoint {
                t,
                b,
                d,
                source: Box::new(e),
            })?;
            Ok(SweepRecord {
                model: p.kind,
                j: p.j,
                b,
                d,
                t,
                negativity: r.negativity,
                path: Some(r.path),
            })
        })
        .collect()
}

/// Shrinks `[lo, hi]`, where `inside(lo)` holds and `inside(hi)` does not,
/// until it is no wider than `width`.
fn bisect(
    mut lo: f64,
    mut hi: f64,
    width: f64,
    mut inside: impl FnMut(f64) -> Result<bool>,
) -> Result<(f64, f64)> {
    while (hi - lo).abs() > width {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if inside(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Minimizes a unimodal function on `[a, b]` by golden-section search.
fn golden_min(
    mut a: f64,
    mut b: f64,
    tol: f64,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalFieldResult {
    pub b0: f64,
    pub temperature: f64,
    pub d: f64,
    /// `N(bracket.0) > threshold >= N(bracket.1)`, with `b0` the midpoint.
    pub bracket: (f64, f64),
}

impl CriticalFieldResult {
    pub fn bracket_width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }
}

pub const CRITICAL_FIELD_WIDTH: f64 = 1e-6;

/// Field above which the longitudinal model stops being entangled.
pub fn find_critical_field(
    template: &ModelParams,
    t: f64,
    d: f64,
    threshold: f64,
) -> Result<CriticalFieldResult> {
    if template.kind != ModelKind::LongitudinalDm {
        return Err(Error::UnsupportedKind(template.kind.name()));
    }
    Temperature::positive(t)?;
    let p = template.with_dm(d);
    p.validate()?;
    let entangled =
        |b: f64| -> Result<bool> { Ok(negativity_at(&p.with_field(b), t)? > threshold) };

    let n0 = negativity_at(&p.with_field(0.0), t)?;
    if n0 <= threshold {
        return Err(Error::NeverEntangled {
            negativity: n0,
            threshold,
        });
    }
    let scale = 1f64.max(p.j.abs()).max(d.abs());
    let limit = 1e3 * scale;
    let mut lo = 0.0;
    let mut hi = scale;
    while entangled(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > limit {
            return Err(Error::NoVanishing {
                axis: "B",
                threshold,
                limit,
            });
        }
    }
    let (lo, hi) = bisect(lo, hi, CRITICAL_FIELD_WIDTH, entangled)?;
    Ok(CriticalFieldResult {
        b0: 0.5 * (lo + hi),
        temperature: t,
        d,
        bracket: (lo, hi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishRecoverWindow {
    /// Field where `N` first falls to the threshold.
    pub vanish: f64,
    /// Field where `N` climbs back above it.
    pub recover: f64,
}

impl VanishRecoverWindow {
    pub fn center(&self) -> f64 {
        0.5 * (self.vanish + self.recover)
    }

    pub fn width(&self) -> f64 {
        self.recover - self.vanish
    }
}

pub const WINDOW_SCAN_STEP: f64 = 1e-3;
const WINDOW_BISECT_WIDTH: f64 = 1e-9;

/// Upper end of the field scan for the vanish-recover search.
pub fn window_scan_limit(j: f64, t: f64, d: f64) -> f64 {
    2.0 * (d.abs() + 2.0 * t) + 2.0 * j.abs().max(1.0)
}

/// Locates the field interval where the transverse model's negativity dips
/// to the threshold and then recovers.
///
/// `B` is scanned upward from 0 in steps of [`WINDOW_SCAN_STEP`]. Near
/// `T -> 0` the dip is a narrow V whose bottom can fall between grid points,
/// so every grid-level local minimum is refined by golden-section search
/// before the crossings are bisected.
pub fn find_vanish_recover_window(
    template: &ModelParams,
    t: f64,
    d: f64,
    threshold: f64,
) -> Result<VanishRecoverWindow> {
    if template.kind != ModelKind::TransverseDm {
        return Err(Error::UnsupportedKind(template.kind.name()));
    }
    Temperature::positive(t)?;
    let p = template.with_dm(d);
    p.validate()?;
    let n_at = |b: f64| negativity_at(&p.with_field(b), t);
    let entangled = |b: f64| -> Result<bool> { Ok(n_at(b)? > threshold) };

    let limit = window_scan_limit(p.j, t, d);
    let steps = (limit / WINDOW_SCAN_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| k as f64 * WINDOW_SCAN_STEP).collect();
    let n: Vec<f64> = grid.par_iter().map(|&b| n_at(b)).collect::<Result<_>>()?;
    let no_window = Error::NoWindow { limit };

    let Some(start) = n.iter().position(|&x| x > threshold) else {
        return Err(no_window);
    };

    // first recovery at or after grid index `from` (from >= 1)
    let recover_after = |from: usize| -> Result<f64> {
        let m = (from..n.len())
            .find(|&m| n[m] > threshold)
            .ok_or(Error::NoWindow { limit })?;
        let (a, b) = bisect(grid[m - 1], grid[m], WINDOW_BISECT_WIDTH, |x| {
            Ok(!entangled(x)?)
        })?;
        Ok(0.5 * (a + b))
    };

    for k in (start + 1)..n.len() {
        if n[k] <= threshold {
            let (a, b) = bisect(grid[k - 1], grid[k], WINDOW_BISECT_WIDTH, entangled)?;
            let vanish = 0.5 * (a + b);
            let recover = recover_after(k + 1)?;
            return Ok(VanishRecoverWindow { vanish, recover });
        }
        let local_min = k + 1 < n.len() && n[k] < n[k - 1] && n[k] <= n[k + 1];
        if local_min {
            let (b_min, n_min) = golden_min(grid[k - 1], grid[k + 1], 1e-12, n_at)?;
            if n_min <= threshold {
                let (a, b) = bisect(grid[k - 1], b_min, WINDOW_BISECT_WIDTH, entangled)?;
                let vanish = 0.5 * (a + b);
                let (a, b) = bisect(b_min, grid[k + 1], WINDOW_BISECT_WIDTH, |x| {
                    Ok(!entangled(x)?)
                })?;
                let recover = 0.5 * (a + b);
                return Ok(VanishRecoverWindow { vanish, recover });
            }
        }
    }
    Err(no_window)
}

pub const PERSISTENCE_REFERENCE_T: f64 = 0.05;
pub const PERSISTENCE_WIDTH: f64 = 1e-4;
const PERSISTENCE_T_LIMIT: f64 = 1e4;

/// Temperature at which the negativity at fixed `(B, d)` falls to the
/// threshold.
pub fn find_persistence_temperature(
    template: &ModelParams,
    b: f64,
    d: f64,
    threshold: f64,
) -> Result<f64> {
    let p = template.with_field(b).with_dm(d);
    p.validate()?;
    let entangled = |t: f64| -> Result<bool> { Ok(negativity_at(&p, t)? > threshold) };
    let n_ref = negativity_at(&p, PERSISTENCE_REFERENCE_T)?;
    if n_ref <= threshold {
        return Err(Error::NeverEntangled {
            negativity: n_ref,
            threshold,
        });
    }
    let mut lo = PERSISTENCE_REFERENCE_T;
    let mut hi = 1.0;
    while entangled(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > PERSISTENCE_T_LIMIT {
            return Err(Error::NoVanishing {
                axis: "T",
                threshold,
                limit: PERSISTENCE_T_LIMIT,
            });
        }
    }
    let (lo, hi) = bisect(lo, hi, PERSISTENCE_WIDTH, entangled)?;
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn long(d: f64) -> ModelParams {
        ModelParams::longitudinal(1.0, 0.0, d).unwrap()
    }

    fn trans(d: f64) -> ModelParams {
        ModelParams::transverse(1.0, 0.0, d).unwrap()
    }

    #[test]
    fn axis_values_hit_both_ends() {
        let v = AxisRange::new(-2.0, 2.0, 5).values();
        assert_eq!(v, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn grid_order_outer_axis_slowest() {
        let spec = SweepSpec::new(long(1.0), 1.0)
            .vary(SweepAxis::Field, 0.0, 1.0, 2)
            .vary(SweepAxis::Temperature, 0.5, 1.0, 3);
        let pts = spec.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], (0.5, 0.0, 1.0));
        assert_eq!(pts[1], (0.75, 0.0, 1.0));
        assert_eq!(pts[3], (0.5, 1.0, 1.0));
    }

    #[test]
    fn validation_catches_bad_specs() {
        let base = SweepSpec::new(long(1.0), 1.0);
        assert!(base.validate().is_err());
        assert!(base
            .clone()
            .vary(SweepAxis::Field, 1.0, 1.0, 5)
            .validate()
            .is_err());
        assert!(base
            .clone()
            .vary(SweepAxis::Field, 0.0, 1.0, 1)
            .validate()
            .is_err());
        assert!(base
            .clone()
            .vary(SweepAxis::Temperature, 0.0, 1.0, 5)
            .validate()
            .is_err());
        assert!(base
            .clone()
            .vary(SweepAxis::Dm, 0.0, 1.0, 3)
            .vary(SweepAxis::Dm, 0.0, 2.0, 3)
            .validate()
            .is_err());
        let mut s = base.clone().vary(SweepAxis::Field, 0.0, 1.0, 3);
        s.threshold = 0.0;
        assert!(s.validate().is_err());
        let s = SweepSpec::new(long(1.0), 0.0).vary(SweepAxis::Field, 0.0, 1.0, 3);
        assert!(s.validate().is_err());
    }

    #[test]
    fn no_dm_means_no_entanglement() {
        let spec = SweepSpec::new(long(0.0), 1.0).vary(SweepAxis::Field, 0.0, 5.0, 26);
        let recs = run_sweep(&spec).unwrap();
        assert_eq!(recs.len(), 26);
        assert!(recs.iter().all(|r| r.negativity == 0.0));
        assert!(recs
            .iter()
            .all(|r| r.path == Some(NegativityPath::ClosedForm)));
    }

    #[test]
    fn low_temperature_plateau() {
        let spec = SweepSpec::new(long(1.0), 0.1).vary(SweepAxis::Temperature, 0.05, 0.2, 16);
        assert!(run_sweep(&spec)
            .unwrap()
            .iter()
            .all(|r| r.negativity >= 0.49));
    }

    #[test]
    fn transverse_dip_near_b_equal_d() {
        // oracle values at T = 0.05, J = d = 1:
        // N(0.5) = 0.49999284, N(1.0) = 0.05618622, N(1.5) = 0.27734996
        let n = |b: f64| negativity_at(&trans(1.0).with_field(b), 0.05).unwrap();
        assert!((n(0.5) - 0.499_992_841_359).abs() < 1e-9);
        assert!((n(1.0) - 0.056_186_217_848).abs() < 1e-9);
        assert!((n(1.5) - 0.277_349_959_883).abs() < 1e-9);
        assert!(n(1.0) < 0.1 && n(0.5) > 0.4 && n(1.5) > 0.2);
    }

    #[test]
    fn critical_field_low_temperature() {
        for (d, expected) in [(1.0, 3.0), (2.0, 4.0)] {
            let r = find_critical_field(&long(d), 0.01, d, DEFAULT_THRESHOLD).unwrap();
            assert!((r.b0 - expected).abs() < 0.05, "d={d}: {r:?}");
            assert!(r.bracket_width() <= CRITICAL_FIELD_WIDTH);
        }
    }

    #[test]
    fn critical_field_grows_with_temperature() {
        let r = find_critical_field(&long(1.0), 1.0, 1.0, DEFAULT_THRESHOLD).unwrap();
        assert!(r.b0 > 3.0);
    }

    #[test]
    fn critical_field_bracket_reconfirms() {
        let r = find_critical_field(&long(1.0), 0.3, 1.0, DEFAULT_THRESHOLD).unwrap();
        let n = |b: f64| negativity_at(&long(1.0).with_field(b), 0.3).unwrap();
        assert!(n(r.bracket.0) > DEFAULT_THRESHOLD);
        assert!(n(r.bracket.1) <= DEFAULT_THRESHOLD);
    }

    #[test]
    fn critical_field_errors() {
        assert!(matches!(
            find_critical_field(&long(0.0), 0.5, 0.0, DEFAULT_THRESHOLD),
            Err(Error::NeverEntangled { .. })
        ));
        assert!(matches!(
            find_critical_field(&trans(1.0), 0.5, 1.0, DEFAULT_THRESHOLD),
            Err(Error::UnsupportedKind(_))
        ));
    }

    #[test]
    fn window_low_temperature() {
        let w = find_vanish_recover_window(&trans(1.0), 0.01, 1.0, DEFAULT_THRESHOLD).unwrap();
        assert!(w.vanish < w.recover);
        assert!(
            (w.vanish - 1.0).abs() < 0.1 && (w.recover - 1.0).abs() < 0.1,
            "{w:?}"
        );
    }

    #[test]
    fn window_moves_with_temperature() {
        let w = find_vanish_recover_window(&trans(1.0), 0.2, 1.0, DEFAULT_THRESHOLD).unwrap();
        assert!((w.center() - 1.2).abs() <= 0.3, "{w:?}");
        let band = (1.0 - 2.0 * 0.2 - 0.1, 1.0 + 2.0 * 0.2 + 0.1);
        assert!(w.vanish >= band.0 && w.recover <= band.1);
    }

    #[test]
    fn window_without_dm() {
        match find_vanish_recover_window(&trans(0.0), 0.05, 0.0, DEFAULT_THRESHOLD) {
            Err(Error::NoWindow { .. }) => {}
            Ok(w) => assert!(w.center() < 0.5, "{w:?}"),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn persistence_temperature_ordering() {
        let tc =
            |d: f64| find_persistence_temperature(&long(d), 0.0, d, DEFAULT_THRESHOLD).unwrap();
        let (t1, t2) = (tc(1.0), tc(2.0));
        assert!(t2 > t1);
        assert_eq!(t1.to_bits(), tc(1.0).to_bits());
        assert!(matches!(
            find_persistence_temperature(&long(0.0), 0.0, 0.0, DEFAULT_THRESHOLD),
            Err(Error::NeverEntangled { .. })
        ));
    }
}
