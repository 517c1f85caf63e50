//! Result record for a single inequality or identity evaluation.

use serde::{Deserialize, Serialize};

/// Which source of numerical slack a tolerance accounts for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Closed-form identities; only rounding error.
    Structural,
    /// Deterministic sphere quadrature.
    Quadrature,
    /// Seeded Monte Carlo quadrature (tolerance in standard errors).
    MonteCarlo,
    /// Finite-difference derivatives.
    FiniteDifference,
    /// Recorded but never asserted.
    Informational,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Structural => "structural",
            Regime::Quadrature => "quadrature",
            Regime::MonteCarlo => "monte_carlo",
            Regime::FiniteDifference => "finite_difference",
            Regime::Informational => "informational",
        }
    }

    pub fn parse(s: &str) -> Option<Regime> {
        Some(match s {
            "structural" => Regime::Structural,
            "quadrature" => Regime::Quadrature,
            "monte_carlo" => Regime::MonteCarlo,
            "finite_difference" => Regime::FiniteDifference,
            "informational" => Regime::Informational,
            _ => return None,
        })
    }
}

/// How `lhs` and `rhs` are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Relation {
    /// `lhs <= rhs`: passes when `margin >= -tol`.
    #[default]
    AtMost,
    /// `lhs == rhs`: passes when `|margin| <= tol`.
    Equal,
    /// `lhs < rhs`: passes when `margin > tol`.
    Less,
}

/// JSON has no NaN; serde_json writes it as `null`.
fn float_or_null<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub n: usize,
    pub m: usize,
    pub point: Vec<Vec<f64>>,
    #[serde(deserialize_with = "float_or_null")]
    pub lhs: f64,
    #[serde(deserialize_with = "float_or_null")]
    pub rhs: f64,
    #[serde(deserialize_with = "float_or_null")]
    pub margin: f64,
    #[serde(deserialize_with = "float_or_null")]
    pub tol: f64,
    pub regime: Regime,
    pub pass: bool,
    pub seed: u64,
    pub trial: u64,
    #[serde(skip)]
    pub relation: Relation,
}

impl CheckReport {
    /// Report for `lhs <= rhs` with absolute slack `tol`.
    pub fn at_most(check: &str, n: usize, lhs: f64, rhs: f64, tol: f64, regime: Regime) -> Self {
        Self::build(check, n, lhs, rhs, tol, regime, Relation::AtMost)
    }

    /// Report for `lhs == rhs` with absolute slack `tol`.
    pub fn equal(check: &str, n: usize, lhs: f64, rhs: f64, tol: f64, regime: Regime) -> Self {
        Self::build(check, n, lhs, rhs, tol, regime, Relation::Equal)
    }

    /// Report for the strict inequality `lhs < rhs`; `tol` is the margin that
    /// must be exceeded.
    pub fn less_than(check: &str, n: usize, lhs: f64, rhs: f64, tol: f64, regime: Regime) -> Self {
        Self::build(check, n, lhs, rhs, tol, regime, Relation::Less)
    }

    fn build(
        check: &str,
        n: usize,
        lhs: f64,
        rhs: f64,
        tol: f64,
        regime: Regime,
        relation: Relation,
    ) -> Self {
        let mut report = Self {
            check: check.to_string(),
            n,
            m: 1,
            point: Vec::new(),
            lhs,
            rhs,
            margin: rhs - lhs,
            tol,
            regime,
            pass: false,
            seed: 0,
            trial: 0,
            relation,
        };
        report.pass = report.evaluate();
        report
    }

    fn evaluate(&self) -> bool {
        let finite = self.lhs.is_finite() && self.rhs.is_finite() && self.tol.is_finite();
        finite
            && match self.relation {
                Relation::AtMost => self.margin >= -self.tol,
                Relation::Equal => self.margin.abs() <= self.tol,
                Relation::Less => self.margin > self.tol,
            }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn with_point(mut self, x: &[f64]) -> Self {
        self.point.push(x.to_vec());
        self
    }

    pub fn with_points(mut self, pts: &[&[f64]]) -> Self {
        self.point.extend(pts.iter().map(|p| p.to_vec()));
        self
    }

    /// Replaces the tolerance and re-evaluates the verdict.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.pass = self.evaluate();
        self
    }

    pub fn with_trial(mut self, seed: u64, trial: u64) -> Self {
        self.seed = seed;
        self.trial = trial;
        self
    }

    /// Whether this report counts toward the exit status.
    pub fn is_asserting(&self) -> bool {
        self.regime != Regime::Informational
    }

    /// Asserting reports must pass; informational reports always count as ok.
    pub fn ok(&self) -> bool {
        self.pass || !self.is_asserting()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_pass_rule() {
        let r = CheckReport::at_most("x", 2, 1.0, 1.0 - 1e-13, 1e-12, Regime::Structural);
        assert!(r.pass);
        let r = CheckReport::at_most("x", 2, 1.0, 0.5, 1e-12, Regime::Structural);
        assert!(!r.pass);
        assert_eq!(r.margin, -0.5);
    }

    #[test]
    fn equality_pass_rule() {
        assert!(CheckReport::equal("x", 2, 1.0, 1.0 + 1e-13, 1e-12, Regime::Structural).pass);
        assert!(!CheckReport::equal("x", 2, 1.0, 2.0, 1e-12, Regime::Structural).pass);
    }

    #[test]
    fn strict_pass_rule() {
        assert!(CheckReport::less_than("x", 2, 1.0, 1.5, 0.0, Regime::Structural).pass);
        assert!(!CheckReport::less_than("x", 2, 1.0, 1.0, 0.0, Regime::Structural).pass);
    }

    #[test]
    fn non_finite_fails() {
        assert!(!CheckReport::at_most("x", 2, f64::NAN, 1.0, 1.0, Regime::Structural).pass);
    }

    #[test]
    fn informational_never_fails_status() {
        let r = CheckReport::at_most("probe", 4, 2.0, 1.0, 0.0, Regime::Informational);
        assert!(!r.pass);
        assert!(r.ok());
    }
}
