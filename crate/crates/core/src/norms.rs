//! The Schatten and Hilbert–Schmidt ℓᵖ families over a dual model.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dualmodel::{field_abs, field_product, Field};
use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix};
use crate::report::{digest_inputs, CheckReport, DEFAULT_TOL};

/// Exponent in `[1, ∞]`.
///
/// Serializes as a JSON number, or the string `"inf"` for `∞`.
#[derive(Clone, Copy, PartialEq)]
pub struct ExponentP(f64);

impl ExponentP {
    pub const ONE: ExponentP = ExponentP(1.0);
    pub const TWO: ExponentP = ExponentP(2.0);
    pub const INFINITY: ExponentP = ExponentP(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return Err(Error::InvalidExponent(value.to_string()));
        }
        Ok(Self(value))
    }

    /// Exponent with `1/p = recip`, `recip ∈ [0, 1]`; zero maps to `∞`.
    pub fn from_recip(recip: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&recip) {
            return Err(Error::InvalidExponent(format!("1/{recip}")));
        }
        if recip == 0.0 {
            Ok(Self::INFINITY)
        } else {
            Self::new(1.0 / recip)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// `1/p` with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Self {
        if self.is_infinite() {
            Self::ONE
        } else if self.0 == 1.0 {
            Self::INFINITY
        } else {
            Self(self.0 / (self.0 - 1.0))
        }
    }

    /// True for `1 < p < ∞`.
    pub fn is_interior(self) -> bool {
        self.0 > 1.0 && self.is_finite()
    }

    pub(crate) fn require_interior(self) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(Error::ExponentOutOfRange {
                p: self.to_string(),
                range: "(1, inf)",
            })
        }
    }
}

impl fmt::Debug for ExponentP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExponentP({self})")
    }
}

impl fmt::Display for ExponentP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl PartialOrd for ExponentP {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl FromStr for ExponentP {
    type Err = Error;

    /// Accepts decimals, fractions such as `3/2`, and `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(Self::INFINITY),
            _ => {}
        }
        let bad = || Error::InvalidExponent(s.to_string());
        let value = match t.split_once('/') {
            Some((num, den)) => {
                let num: f64 = num.trim().parse().map_err(|_| bad())?;
                let den: f64 = den.trim().parse().map_err(|_| bad())?;
                num / den
            }
            None => t.parse::<f64>().map_err(|_| bad())?,
        };
        Self::new(value)
    }
}

impl Serialize for ExponentP {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExponentP {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;

        impl serde::de::Visitor<'_> for Visitor {
            type Value = ExponentP;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or \"inf\"")
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<ExponentP, E> {
                ExponentP::new(v).map_err(E::custom)
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<ExponentP, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<ExponentP, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<ExponentP, E> {
                v.parse().map_err(E::custom)
            }
        }

        d.deserialize_any(Visitor)
    }
}

/// Which ℓᵖ family a norm belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Weights `dim` on Schatten p-norms of the blocks.
    Sch,
    /// Weights `dim^{2-p/2}` on Hilbert–Schmidt norms of the blocks.
    Hs,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Sch, Family::Hs];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Sch => "sch",
            Family::Hs => "hs",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sch" => Ok(Family::Sch),
            "hs" => Ok(Family::Hs),
            _ => Err(Error::InvalidParameter(format!("unknown family '{s}'"))),
        }
    }
}

/// Schatten-family norm from per-block singular values.
pub(crate) fn sch_norm_from_singulars(blocks: &[(usize, &[f64])], p: ExponentP) -> f64 {
    let top = blocks
        .iter()
        .flat_map(|(_, s)| s.iter().copied())
        .fold(0.0, f64::max);
    if p.is_infinite() || top == 0.0 {
        return top;
    }
    let pv = p.value();
    let sum: f64 = blocks
        .iter()
        .map(|&(dim, s)| dim as f64 * matcore::schatten_pow_from_singular_scaled(s, pv, top))
        .sum();
    top * sum.powf(1.0 / pv)
}

/// `(Σ dim·‖H(ξ)‖_{Sᵖ}ᵖ)^{1/p}`, or `max ‖H(ξ)‖_op` at `p = ∞`.
pub fn lp_sch_norm(h: &Field, p: ExponentP) -> Result<f64> {
    let sigmas = h
        .blocks()
        .iter()
        .map(matcore::singular_values)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let pairs: Vec<(usize, &[f64])> = h.model().dims().zip(sigmas.iter().map(Vec::as_slice)).collect();
    Ok(sch_norm_from_singulars(&pairs, p))
}

/// `(Σ dim^{2-p/2}·‖H(ξ)‖_HSᵖ)^{1/p}`, or `max dim^{-1/2}‖H(ξ)‖_HS` at `p = ∞`.
pub fn lp_hs_norm(h: &Field, p: ExponentP) -> f64 {
    let norms: Vec<(usize, f64)> = h.iter().map(|(d, b)| (d, b.hs_norm())).collect();
    hs_norm_from_block_norms(&norms, p)
}

pub(crate) fn hs_norm_from_block_norms(blocks: &[(usize, f64)], p: ExponentP) -> f64 {
    if p.is_infinite() {
        return blocks
            .iter()
            .map(|&(d, n)| n / (d as f64).sqrt())
            .fold(0.0, f64::max);
    }
    let top = blocks.iter().map(|&(_, n)| n).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let pv = p.value();
    // dim^{2-p/2} in log space so large truncations cannot overflow
    let sum: f64 = blocks
        .iter()
        .filter(|&&(_, n)| n > 0.0)
        .map(|&(d, n)| ((2.0 - pv / 2.0) * (d as f64).ln() + pv * (n / top).ln()).exp())
        .sum();
    top * sum.powf(1.0 / pv)
}

pub fn family_norm(h: &Field, p: ExponentP, family: Family) -> Result<f64> {
    match family {
        Family::Sch => lp_sch_norm(h, p),
        Family::Hs => Ok(lp_hs_norm(h, p)),
    }
}

/// `‖h‖_sch ≤ ‖h‖_hs` for `p ≤ 2`, reversed for `p ≥ 2`.
pub fn embedding_check(h: &Field, p: ExponentP) -> Result<CheckReport> {
    let sch = lp_sch_norm(h, p)?;
    let hs = lp_hs_norm(h, p);
    let (lhs, rhs) = if p.value() <= 2.0 { (sch, hs) } else { (hs, sch) };
    Ok(CheckReport::inequality("continuous_embedding", p, lhs, rhs, DEFAULT_TOL)
        .with_digest(digest_inputs("embedding", &[h], &[p.value()])))
}

/// `‖h1 h2‖_r ≤ ‖h1‖_p ‖h2‖_q` in the Schatten family, `1/r = 1/p + 1/q`.
pub fn holder_check(h1: &Field, h2: &Field, p: ExponentP, q: ExponentP) -> Result<CheckReport> {
    let r_recip = p.recip() + q.recip();
    if r_recip > 1.0 + 1e-14 {
        return Err(Error::IncompatibleExponents(format!(
            "1/{p} + 1/{q} = {r_recip} exceeds 1"
        )));
    }
    let r = ExponentP::from_recip(r_recip.min(1.0))?;
    let prod = field_product(h1, h2)?;
    let lhs = lp_sch_norm(&prod, r)?;
    let rhs = lp_sch_norm(h1, p)? * lp_sch_norm(h2, q)?;
    Ok(CheckReport::inequality("holder_inequality", p, lhs, rhs, DEFAULT_TOL)
        .with_digest(digest_inputs("holder", &[h1, h2], &[p.value(), q.value()])))
}

/// `‖h‖ = ‖h*‖ = ‖|h|‖` in the chosen family. The report's `rhs` is
/// whichever of the two other norms lies farther from `‖h‖`.
pub fn adjoint_norm_check(h: &Field, p: ExponentP, family: Family) -> Result<CheckReport> {
    let base = family_norm(h, p, family)?;
    let adj = family_norm(&h.adjoint(), p, family)?;
    let abs = family_norm(&field_abs(h)?, p, family)?;
    let rhs = if (adj - base).abs() >= (abs - base).abs() { adj } else { abs };
    Ok(CheckReport::equality("adjoint_and_absolute_value", p, base, rhs, DEFAULT_TOL)
        .with_digest(digest_inputs("adjoint", &[h], &[p.value(), family as u8 as f64])))
}

/// Weighted direct sum `X ⊕_{r,w} X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectSumSpec {
    pub r: ExponentP,
    pub w: f64,
}

impl DirectSumSpec {
    pub fn new(r: ExponentP, w: f64) -> Result<Self> {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidParameter(format!("direct-sum weight {w} must be positive")));
        }
        Ok(Self { r, w })
    }

    /// `(a^r + w·b^r)^{1/r}`, or `max(a, w·b)` at `r = ∞`.
    pub fn combine(&self, a: f64, b: f64) -> f64 {
        if self.r.is_infinite() {
            return a.max(self.w * b);
        }
        let r = self.r.value();
        (a.powf(r) + self.w * b.powf(r)).powf(1.0 / r)
    }
}

pub fn direct_sum_norm(x: &Field, y: &Field, p: ExponentP, spec: DirectSumSpec, family: Family) -> Result<f64> {
    x.require_same_model(y)?;
    Ok(spec.combine(family_norm(x, p, family)?, family_norm(y, p, family)?))
}

/// Per-block Schatten norms, used by callers that reuse them.
pub fn block_schatten_norms(h: &Field, p: ExponentP) -> Result<Vec<f64>> {
    h.blocks()
        .iter()
        .map(|b: &CMatrix| matcore::schatten_norm(b, p).map_err(Error::from))
        .collect()
}
