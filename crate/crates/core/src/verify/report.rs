use crate::complex::SimplexId;
use crate::geodesic::SimplexPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// The configuration behind a failure.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Witness {
    pub description: String,
    pub points: Vec<(String, SimplexPoint)>,
    pub simplices: Vec<SimplexId>,
    pub values: Vec<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub worst_violation: f64,
    pub witness: Option<Witness>,
    /// Named counters and remarks, in insertion order.
    pub details: Vec<(String, String)>,
}

impl CheckReport {
    pub fn new(check: &str, verdict: Verdict, worst_violation: f64) -> Self {
        CheckReport { check: check.to_string(), verdict, worst_violation, witness: None, details: Vec::new() }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn detail(mut self, key: &str, value: impl ToString) -> Self {
        self.details.push((key.to_string(), value.to_string()));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}
