//! Verification outcome records and input digests.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dualmodel::Field;
use crate::norms::ExponentP;

/// Default relative tolerance for inequality checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Outcome of one inequality or identity check.
///
/// `slack = rhs - lhs` for inequalities `lhs <= rhs` and `-|lhs - rhs|` for
/// identities; `passed` holds exactly when `slack >= -tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub case_id: String,
    pub p: ExponentP,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub passed: bool,
    pub inputs_digest: String,
    /// Name of the result being checked.
    pub paper_anchor: String,
}

impl CheckReport {
    /// Report for `lhs <= rhs` with `tol = tol_rel * max(1, |rhs|)`.
    pub fn inequality(anchor: &str, p: ExponentP, lhs: f64, rhs: f64, tol_rel: f64) -> Self {
        let tol = tol_rel * rhs.abs().max(1.0);
        Self::finish(anchor, p, lhs, rhs, rhs - lhs, tol)
    }

    /// Report for `lhs == rhs` with `tol = tol_rel * max(1, |lhs|, |rhs|)`.
    pub fn equality(anchor: &str, p: ExponentP, lhs: f64, rhs: f64, tol_rel: f64) -> Self {
        let tol = tol_rel * rhs.abs().max(lhs.abs()).max(1.0);
        Self::finish(anchor, p, lhs, rhs, -(lhs - rhs).abs(), tol)
    }

    fn finish(anchor: &str, p: ExponentP, lhs: f64, rhs: f64, slack: f64, tol: f64) -> Self {
        let passed = slack >= -tol;
        Self {
            suite: String::new(),
            case_id: String::new(),
            p,
            lhs,
            rhs,
            slack,
            tol,
            passed,
            inputs_digest: String::new(),
            paper_anchor: anchor.to_string(),
        }
    }

    pub fn with_suite(mut self, suite: &str, case_id: impl Into<String>) -> Self {
        self.suite = suite.to_string();
        self.case_id = case_id.into();
        self
    }

    pub fn with_digest(mut self, digest: String) -> Self {
        self.inputs_digest = digest;
        self
    }

    /// Multiplies the tolerance by `factor` and re-evaluates `passed`.
    pub fn rescale_tolerance(&mut self, factor: f64) {
        self.tol *= factor;
        self.passed = self.slack >= -self.tol;
    }

    /// Relative slack `slack / max(1, |rhs|)`.
    pub fn relative_slack(&self) -> f64 {
        self.slack / self.rhs.abs().max(1.0)
    }
}

/// SHA-256 over a canonical byte encoding of check inputs.
#[derive(Clone, Default)]
pub struct InputsDigest(Sha256);

impl InputsDigest {
    pub fn new(tag: &str) -> Self {
        let mut d = Self(Sha256::new());
        d.push_str(tag);
        d
    }

    pub fn push_str(&mut self, s: &str) -> &mut Self {
        self.push_u64(s.len() as u64);
        self.0.update(s.as_bytes());
        self
    }

    pub fn push_u64(&mut self, x: u64) -> &mut Self {
        self.0.update(x.to_le_bytes());
        self
    }

    pub fn push_f64(&mut self, x: f64) -> &mut Self {
        self.0.update(x.to_le_bytes());
        self
    }

    pub fn push_exponent(&mut self, p: ExponentP) -> &mut Self {
        self.push_f64(p.value())
    }

    pub fn push_field(&mut self, f: &Field) -> &mut Self {
        let model = f.model();
        self.push_str(model.name());
        self.push_u64(model.len() as u64);
        for (dim, block) in f.iter() {
            self.push_u64(dim as u64);
            for z in block.as_slice() {
                self.push_f64(z.re);
                self.push_f64(z.im);
            }
        }
        self
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

/// Digest of a list of fields and scalar parameters.
pub fn digest_inputs(tag: &str, fields: &[&Field], params: &[f64]) -> String {
    let mut d = InputsDigest::new(tag);
    for f in fields {
        d.push_field(f);
    }
    for &x in params {
        d.push_f64(x);
    }
    d.finish()
}
