//! Two-center power-exponential confinement and its structure taxonomy.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// `V(x) = -V0 { exp[-(|x+d|/R)^p] + exp[-(|x-d|/R)^p] }`, effective atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub v0: f64,
    pub d: f64,
    pub r_range: f64,
    pub p_exponent: f64,
}

impl PotentialParams {
    pub const DEFAULT_V0: f64 = 10.0;
    pub const DEFAULT_D: f64 = 8.0;

    pub fn new(v0: f64, d: f64, r_range: f64, p_exponent: f64) -> Result<Self> {
        let p = PotentialParams { v0, d, r_range, p_exponent };
        p.validate()?;
        Ok(p)
    }

    /// Default depth and separation with the given range and exponent.
    pub fn with_shape(r_range: f64, p_exponent: f64) -> Result<Self> {
        Self::new(Self::DEFAULT_V0, Self::DEFAULT_D, r_range, p_exponent)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite();
        if !(ok(self.v0) && self.v0 > 0.0) {
            return Err(invalid(format!("v0 must be positive, got {}", self.v0)));
        }
        if !(ok(self.d) && self.d >= 0.0) {
            return Err(invalid(format!("d must be non-negative, got {}", self.d)));
        }
        if !(ok(self.r_range) && self.r_range > 0.0) {
            return Err(invalid(format!("R must be positive, got {}", self.r_range)));
        }
        if !(ok(self.p_exponent) && self.p_exponent >= 1.0) {
            return Err(invalid(format!("p must be >= 1, got {}", self.p_exponent)));
        }
        Ok(())
    }

    fn well(&self, s: f64) -> f64 {
        (-s.powf(self.p_exponent)).exp()
    }

    /// Positions where the integrand changes character: the two centers,
    /// the nominal walls at `±d ± R`, and for hard walls the points where
    /// each well has dropped to 1% and to `e^-40` of its depth.
    pub fn feature_points(&self) -> Vec<f64> {
        let p = self.p_exponent;
        let inner = 0.01f64.powf(1.0 / p);
        let outer = 40f64.powf(1.0 / p);
        let mut pts = Vec::with_capacity(14);
        for c in [-self.d, self.d] {
            pts.push(c);
            for s in [inner, 1.0, outer] {
                pts.push(c - s * self.r_range);
                pts.push(c + s * self.r_range);
            }
        }
        pts
    }
}

/// Evaluates the two-center potential at `x`.
pub fn potential_value(params: &PotentialParams, x: f64) -> f64 {
    let left = ((x + params.d).abs() / params.r_range).max(0.0);
    let right = ((x - params.d).abs() / params.r_range).max(0.0);
    -params.v0 * (params.well(left) + params.well(right))
}

/// `∂V/∂R` at fixed `x`, used for Hellmann–Feynman checks.
pub fn potential_range_derivative(params: &PotentialParams, x: f64) -> f64 {
    let p = params.p_exponent;
    let r = params.r_range;
    [x + params.d, x - params.d]
        .iter()
        .map(|&u| {
            let s = u.abs() / r;
            let sp = s.powf(p);
            -params.v0 * (-sp).exp() * p * sp / r
        })
        .sum()
}

/// One-body confinement used when assembling a Hamiltonian.
///
/// Only [`Confinement::PowerExponential`] is physical; the other variants
/// exist for solver self-tests with known answers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Confinement {
    PowerExponential(PotentialParams),
    Harmonic { omega: f64 },
    Free,
}

impl Confinement {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Confinement::PowerExponential(p) => potential_value(p, x),
            Confinement::Harmonic { omega } => 0.5 * omega * omega * x * x,
            Confinement::Free => 0.0,
        }
    }

    pub fn feature_points(&self) -> Vec<f64> {
        match self {
            Confinement::PowerExponential(p) => p.feature_points(),
            _ => Vec::new(),
        }
    }

    pub fn params(&self) -> Option<&PotentialParams> {
        match self {
            Confinement::PowerExponential(p) => Some(p),
            _ => None,
        }
    }
}

impl From<PotentialParams> for Confinement {
    fn from(p: PotentialParams) -> Self {
        Confinement::PowerExponential(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureClass {
    SingleDot,
    CoreShell,
    DoubleDot,
    Intermediate,
}

impl StructureClass {
    pub fn label(self) -> &'static str {
        match self {
            StructureClass::SingleDot => "single_dot",
            StructureClass::CoreShell => "core_shell",
            StructureClass::DoubleDot => "double_dot",
            StructureClass::Intermediate => "intermediate",
        }
    }
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StructureClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single_dot" => Ok(StructureClass::SingleDot),
            "core_shell" => Ok(StructureClass::CoreShell),
            "double_dot" => Ok(StructureClass::DoubleDot),
            "intermediate" => Ok(StructureClass::Intermediate),
            other => Err(invalid(format!("unknown structure class {other:?}"))),
        }
    }
}

/// Labels `(R, p)` with the nanostructure type it models.
///
/// Band edges are sharp: double dot for `R <= 7`; core-shell for
/// `9 <= R <= 16, p > 2` or `16 < R <= 30, p >= 7`; single dot for
/// `R >= 12, p <= 2` or `R >= 20, p <= 4`. Earlier rules win on overlap.
pub fn classify_structure(params: &PotentialParams) -> StructureClass {
    let r = params.r_range;
    let p = params.p_exponent;
    if r <= 7.0 {
        StructureClass::DoubleDot
    } else if (9.0..=16.0).contains(&r) && p > 2.0 || (r > 16.0 && r <= 30.0 && p >= 7.0) {
        StructureClass::CoreShell
    } else if (r >= 12.0 && p <= 2.0) || (r >= 20.0 && p <= 4.0) {
        StructureClass::SingleDot
    } else {
        StructureClass::Intermediate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(r: f64, p: f64) -> PotentialParams {
        PotentialParams::with_shape(r, p).unwrap()
    }

    #[test]
    fn value_at_origin() {
        let v = potential_value(&params(8.0, 2.0), 0.0);
        assert!((v + 20.0 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((v + 7.357589).abs() < 1e-6);
    }

    #[test]
    fn separated_wells_have_depth_v0() {
        let v = potential_value(&params(1.0, 2.0), 8.0);
        assert!((v + 10.0).abs() < 1e-12);
    }

    #[test]
    fn vanishes_far_away() {
        // Short-range or hard wells are negligible at the default cutoff 40.
        for (r, p) in [(0.1, 200.0), (3.6, 200.0), (8.35, 200.0), (15.0, 7.0), (1.0, 2.0), (4.0, 2.0)] {
            assert!(potential_value(&params(r, p), 40.0).abs() < 1e-12 * 10.0, "R={r} p={p}");
        }
        // Soft wide wells still reach past it but decay eventually.
        assert!(potential_value(&params(30.0, 2.0), 40.0) < -1.0);
        assert!(potential_value(&params(30.0, 2.0), 250.0).abs() < 1e-12 * 10.0);
    }

    #[test]
    fn hard_walls_approach_rectangle() {
        // p = 200 at R = 8: flat bottom of depth V0 inside, zero outside.
        let hard = params(8.0, 200.0);
        assert!((potential_value(&hard, 12.0) + 10.0).abs() < 1e-6);
        assert!(potential_value(&hard, 17.0).abs() < 1e-6);
        let soft = params(8.0, 2.0);
        assert!(potential_value(&soft, 12.0) > potential_value(&hard, 12.0));
    }

    #[test]
    fn table_bands() {
        assert_eq!(classify_structure(&params(3.6, 200.0)), StructureClass::DoubleDot);
        assert_eq!(classify_structure(&params(12.0, 7.0)), StructureClass::CoreShell);
        assert_eq!(classify_structure(&params(25.0, 2.0)), StructureClass::SingleDot);
        assert_eq!(classify_structure(&params(18.0, 5.0)), StructureClass::Intermediate);
        assert_eq!(classify_structure(&params(22.0, 3.0)), StructureClass::SingleDot);
        assert_eq!(classify_structure(&params(8.0, 2.0)), StructureClass::Intermediate);
    }

    #[test]
    fn label_round_trip() {
        for c in [
            StructureClass::SingleDot,
            StructureClass::CoreShell,
            StructureClass::DoubleDot,
            StructureClass::Intermediate,
        ] {
            assert_eq!(c.label().parse::<StructureClass>().unwrap(), c);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PotentialParams::new(0.0, 8.0, 1.0, 2.0).is_err());
        assert!(PotentialParams::new(10.0, -1.0, 1.0, 2.0).is_err());
        assert!(PotentialParams::new(10.0, 8.0, 0.0, 2.0).is_err());
        assert!(PotentialParams::new(10.0, 8.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn range_derivative_matches_difference() {
        let h = 1e-6;
        for (r, p, x) in [(8.0, 2.0, 1.3), (12.0, 7.0, -4.0), (3.6, 200.0, 11.5)] {
            let a = params(r + h, p);
            let b = params(r - h, p);
            let fd = (potential_value(&a, x) - potential_value(&b, x)) / (2.0 * h);
            let an = potential_range_derivative(&params(r, p), x);
            assert!((fd - an).abs() < 1e-5 * (1.0 + an.abs()), "{fd} vs {an}");
        }
    }

    proptest! {
        #[test]
        fn even_and_bounded(r in 0.05f64..40.0, p in 1.0f64..250.0, x in -60.0f64..60.0) {
            let prm = params(r, p);
            let v = potential_value(&prm, x);
            prop_assert_eq!(v, potential_value(&prm, -x));
            prop_assert!(v >= -2.0 * prm.v0 && v <= 0.0);
        }

        #[test]
        fn hardening_matches_direct_formula(r in 8.5f64..30.0, x in -20.0f64..20.0) {
            // Pointwise comparison of p = 2 and p = 200 against the closed form.
            for p in [2.0, 200.0] {
                let prm = params(r, p);
                let direct = -10.0 * ((-((x + 8.0).abs() / r).powf(p)).exp()
                    + (-((x - 8.0).abs() / r).powf(p)).exp());
                prop_assert!((potential_value(&prm, x) - direct).abs() < 1e-12);
            }
            // At the centers a harder wall is deeper: V(d) moves toward -V0(1 + exp(-(2d/R)^p)).
            let soft = potential_value(&params(r, 2.0), 8.0);
            let hard = potential_value(&params(r, 200.0), 8.0);
            let limit = -10.0 * (1.0 + (-(16.0 / r).powf(200.0)).exp());
            prop_assert!((hard - limit).abs() < 1e-9);
            if r > 16.0 {
                prop_assert!(hard <= soft);
            }
        }

        #[test]
        fn classification_is_total(r in 0.01f64..100.0, p in 1.0f64..500.0) {
            let c = classify_structure(&params(r, p));
            prop_assert_eq!(c, classify_structure(&params(r, p)));
        }
    }
}
