use serde::Serialize;

/// Direction of a checked inequality between an estimate and an analytic value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `estimate >= analytic - 3 stderr`.
    AtLeast,
    /// `estimate <= analytic + 3 stderr`.
    AtMost,
    /// `|estimate - analytic| <= 3 stderr + slack`.
    Within { slack: f64 },
}

/// Standard errors allowed between a Monte Carlo estimate and its bound.
pub const MARGIN_STDERRS: f64 = 3.0;

/// An analytic value paired with the Monte Carlo estimate that tests it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub analytic_value: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub relation: Relation,
    pub satisfied: bool,
}

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        analytic_value: f64,
        estimate: f64,
        stderr: f64,
        samples: u64,
        relation: Relation,
    ) -> Self {
        let margin = MARGIN_STDERRS * stderr;
        let satisfied = match relation {
            Relation::AtLeast => estimate >= analytic_value - margin,
            Relation::AtMost => estimate <= analytic_value + margin,
            Relation::Within { slack } => (estimate - analytic_value).abs() <= margin + slack,
        };
        Self {
            name: name.into(),
            analytic_value,
            estimate,
            stderr,
            samples,
            relation,
            satisfied,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins() {
        assert!(BoundReport::new("x", 0.5, 0.47, 0.01, 100, Relation::AtLeast).satisfied);
        assert!(!BoundReport::new("x", 0.5, 0.46, 0.01, 100, Relation::AtLeast).satisfied);
        assert!(BoundReport::new("x", 0.5, 0.53, 0.01, 100, Relation::AtMost).satisfied);
        assert!(!BoundReport::new("x", 0.5, 0.54, 0.01, 100, Relation::AtMost).satisfied);
        assert!(
            BoundReport::new("x", 0.5, 0.6, 0.01, 100, Relation::Within { slack: 0.08 }).satisfied
        );
        assert!(
            !BoundReport::new("x", 0.5, 0.6, 0.01, 100, Relation::Within { slack: 0.06 }).satisfied
        );
    }
}
