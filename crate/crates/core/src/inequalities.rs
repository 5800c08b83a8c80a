//! Uniform convexity and smoothness inequalities for both ℓᵖ families.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dualmodel::{random_field, DualModel, Field, FieldDistribution};
use crate::error::{Error, Result};
use crate::matcore::C64;
use crate::norms::{family_norm, ExponentP, Family};
use crate::report::{digest_inputs, CheckReport, InputsDigest, DEFAULT_TOL};
use crate::rng::{mix_seed, rng_from_seed};

/// Largest family size accepted by [`rademacher_average`].
pub const MAX_RADEMACHER_FIELDS: usize = 20;

/// Width of the ε-bins used by [`modulus_convexity_sample`].
pub const EPS_BIN_WIDTH: f64 = 0.1;

/// Lower bin edges `0.1, 0.2, …, 1.9`.
pub fn default_eps_bins() -> Vec<f64> {
    (1..=19).map(|k| k as f64 / 10.0).collect()
}

pub fn default_smoothness_grid() -> Vec<f64> {
    vec![0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0]
}

/// Two-point constants: `C_p = 2p - 1` (used for `p ≥ 2`) and
/// `c_p = (p - 1)/(p + 1)` (used for `p ≤ 2`). At `p = 2` both inequalities
/// are the parallelogram law and the effective constants are 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPointConstants {
    pub p: ExponentP,
    pub upper_bound: f64,
    pub lower_bound: f64,
}

impl TwoPointConstants {
    pub fn new(p: ExponentP) -> Self {
        let v = p.value();
        Self {
            p,
            upper_bound: 2.0 * v - 1.0,
            lower_bound: (v - 1.0) / (v + 1.0),
        }
    }

    /// Constant on `‖H₂‖²` in the upper estimate (`p ≥ 2`).
    pub fn upper(&self) -> f64 {
        if self.p.value() == 2.0 {
            1.0
        } else {
            self.upper_bound
        }
    }

    /// Constant on `‖H₂‖²` in the lower estimate (`p ≤ 2`).
    pub fn lower(&self) -> f64 {
        if self.p.value() == 2.0 {
            1.0
        } else {
            self.lower_bound
        }
    }
}

struct PairNorms {
    half_sum: f64,
    half_diff: f64,
    first: f64,
    second: f64,
}

fn pair_norms(h1: &Field, h2: &Field, p: ExponentP, family: Family) -> Result<PairNorms> {
    let half = C64::new(0.5, 0.0);
    let sum = crate::dualmodel::field_lincomb(half, h1, half, h2)?;
    let diff = crate::dualmodel::field_lincomb(half, h1, -half, h2)?;
    Ok(PairNorms {
        half_sum: family_norm(&sum, p, family)?,
        half_diff: family_norm(&diff, p, family)?,
        first: family_norm(h1, p, family)?,
        second: family_norm(h2, p, family)?,
    })
}

/// Both sides of the Clarkson inequality from the four norms.
fn clarkson_sides(n: &PairNorms, p: f64) -> (f64, f64) {
    let q = p / (p - 1.0);
    // (i) for p ≤ 2; (ii) swaps the roles of p and q
    let (inner, outer) = if p <= 2.0 { (q, p) } else { (p, q) };
    let lhs = (n.half_sum.powf(inner) + n.half_diff.powf(inner)).powf(1.0 / inner);
    let rhs = (0.5 * (n.first.powf(outer) + n.second.powf(outer))).powf(1.0 / outer);
    (lhs, rhs)
}

/// Clarkson inequality with `q = p/(p-1)`:
/// for `p ≤ 2`, `(‖(H₁+H₂)/2‖^q + ‖(H₁−H₂)/2‖^q)^{1/q} ≤ (½(‖H₁‖^p + ‖H₂‖^p))^{1/p}`;
/// for `p ≥ 2` the same with `p` and `q` exchanged.
pub fn clarkson_check(h1: &Field, h2: &Field, p: ExponentP, family: Family) -> Result<CheckReport> {
    p.require_interior()?;
    let norms = pair_norms(h1, h2, p, family)?;
    let (lhs, rhs) = clarkson_sides(&norms, p.value());
    let anchor = match family {
        Family::Sch => "clarkson_inequality_schatten",
        Family::Hs => "clarkson_inequality_hilbert_schmidt",
    };
    Ok(CheckReport::inequality(anchor, p, lhs, rhs, DEFAULT_TOL).with_digest(digest_inputs(
        "clarkson",
        &[h1, h2],
        &[p.value(), family as u8 as f64],
    )))
}

pub fn clarkson_sch_check(h1: &Field, h2: &Field, p: ExponentP) -> Result<CheckReport> {
    clarkson_check(h1, h2, p, Family::Sch)
}

pub fn clarkson_hs_check(h1: &Field, h2: &Field, p: ExponentP) -> Result<CheckReport> {
    clarkson_check(h1, h2, p, Family::Hs)
}

/// Result of [`two_point_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPoint {
    pub report: CheckReport,
    /// `(M² − ‖H₁‖²)/‖H₂‖²` with `M` the `p`-average of `‖H₁ ± H₂‖`: the
    /// constant making this pair tight. `None` when `H₂ = 0`.
    pub critical_constant: Option<f64>,
}

/// Two-point inequality: for `p ≥ 2`,
/// `(½(‖H₁+H₂‖ᵖ + ‖H₁−H₂‖ᵖ))^{1/p} ≤ (‖H₁‖² + C_p‖H₂‖²)^{1/2}`, and for
/// `p ≤ 2` the reverse inequality with `c_p`.
pub fn two_point_check(h1: &Field, h2: &Field, p: ExponentP, family: Family) -> Result<TwoPoint> {
    p.require_interior()?;
    let pv = p.value();
    let n = pair_norms(h1, h2, p, family)?;
    // ‖H₁ ± H₂‖ = 2‖(H₁ ± H₂)/2‖
    let avg = 2.0 * (0.5 * (n.half_sum.powf(pv) + n.half_diff.powf(pv))).powf(1.0 / pv);
    let consts = TwoPointConstants::new(p);
    let critical_constant = (n.second > 0.0).then(|| (avg * avg - n.first * n.first) / (n.second * n.second));
    let report = if pv >= 2.0 {
        let bound = (n.first * n.first + consts.upper() * n.second * n.second).sqrt();
        CheckReport::inequality("two_point_upper", p, avg, bound, DEFAULT_TOL)
    } else {
        let bound = (n.first * n.first + consts.lower() * n.second * n.second).sqrt();
        CheckReport::inequality("two_point_lower", p, bound, avg, DEFAULT_TOL)
    };
    let report = report.with_digest(digest_inputs("two_point", &[h1, h2], &[pv, family as u8 as f64]));
    Ok(TwoPoint {
        report,
        critical_constant,
    })
}

/// Spread of empirical critical constants over many two-point checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalRange {
    pub min: f64,
    pub max: f64,
    pub pairs: usize,
}

/// Min and max of the defined critical constants; `None` if there are none.
pub fn critical_constant_range(outcomes: &[TwoPoint]) -> Option<CriticalRange> {
    let values: Vec<f64> = outcomes.iter().filter_map(|o| o.critical_constant).collect();
    (!values.is_empty()).then(|| CriticalRange {
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        pairs: values.len(),
    })
}

/// Lower bound on the modulus of convexity at `ε`:
/// `max(ε^q/(q2^q), c_p ε²/8)` for `p ≤ 2` and `εᵖ/(p2ᵖ)` for `p > 2`.
pub fn convexity_lower_bound(p: ExponentP, eps: f64) -> f64 {
    let pv = p.value();
    if pv <= 2.0 {
        let q = p.conjugate().value();
        let c = TwoPointConstants::new(p).lower();
        (eps.powf(q) / (q * 2f64.powf(q))).max(c * eps * eps / 8.0)
    } else {
        eps.powf(pv) / (pv * 2f64.powf(pv))
    }
}

/// Upper bound on the modulus of smoothness at `t`:
/// `tᵖ/p` for `p ≤ 2` and `min(t^q/q, C_p t²/2)` for `p ≥ 2`.
pub fn smoothness_upper_bound(p: ExponentP, t: f64) -> f64 {
    let pv = p.value();
    if pv <= 2.0 {
        t.powf(pv) / pv
    } else {
        let q = p.conjugate().value();
        let c = TwoPointConstants::new(p).upper();
        (t.powf(q) / q).min(c * t * t / 2.0)
    }
}

/// `1 − (1 − ε²/4)^{1/2}`, the modulus of convexity of a Hilbert space.
pub fn hilbert_convexity(eps: f64) -> f64 {
    1.0 - (1.0 - eps * eps / 4.0).max(0.0).sqrt()
}

/// `(1 + t²)^{1/2} − 1`, the modulus of smoothness of a Hilbert space.
pub fn hilbert_smoothness(t: f64) -> f64 {
    (1.0 + t * t).sqrt() - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusKind {
    ConvexityLower,
    SmoothnessUpper,
}

/// Sampled modulus at one `ε` bin or one `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusEstimate {
    /// Lower bin edge for convexity, `t` for smoothness.
    pub epsilon_or_t: f64,
    /// Sampled infimum (convexity) or supremum (smoothness); `None` for an
    /// empty bin.
    pub estimate: Option<f64>,
    pub bound: f64,
    pub kind: ModulusKind,
    /// Pairs that contributed.
    pub samples: usize,
}

impl ModulusEstimate {
    /// Whether the estimate respects the bound within `tol`; `None` for an
    /// empty bin.
    pub fn holds(&self, tol: f64) -> Option<bool> {
        self.estimate.map(|e| match self.kind {
            ModulusKind::ConvexityLower => e >= self.bound - tol,
            ModulusKind::SmoothnessUpper => e <= self.bound + tol,
        })
    }

    pub fn to_report(&self, p: ExponentP, tol_rel: f64) -> Option<CheckReport> {
        let e = self.estimate?;
        let (anchor, lhs, rhs) = match self.kind {
            ModulusKind::ConvexityLower => ("modulus_of_convexity_lower_bound", self.bound, e),
            ModulusKind::SmoothnessUpper => ("modulus_of_smoothness_upper_bound", e, self.bound),
        };
        Some(CheckReport::inequality(anchor, p, lhs, rhs, tol_rel))
    }
}

fn unit_field(model: &Arc<DualModel>, p: ExponentP, family: Family, seed: u64) -> Result<Field> {
    let g = random_field(model, seed, FieldDistribution::Ginibre);
    let n = family_norm(&g, p, family)?;
    Ok(g.scale_real(1.0 / n))
}

/// Samples unit pairs spread over the whole range of `‖x − y‖`, bins them by
/// that distance and records the smallest `1 − ‖(x + y)/2‖` in each bin.
///
/// `eps_bins` are lower edges of bins of width [`EPS_BIN_WIDTH`]; each bin is
/// compared with the bound at its lower edge, which is sound because the
/// modulus is non-decreasing.
pub fn modulus_convexity_sample(
    model: &Arc<DualModel>,
    p: ExponentP,
    family: Family,
    eps_bins: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<ModulusEstimate>> {
    if let Some(&bad) = eps_bins.iter().find(|&&e| !(e > 0.0 && e <= 2.0)) {
        return Err(Error::InvalidParameter(format!("epsilon bin edge {bad} outside (0, 2]")));
    }
    let mut best = vec![f64::INFINITY; eps_bins.len()];
    let mut counts = vec![0usize; eps_bins.len()];
    let half = C64::new(0.5, 0.0);
    for k in 0..samples {
        let base = mix_seed(seed, &[k as u64]);
        let x = unit_field(model, p, family, mix_seed(base, &[0]))?;
        let z = unit_field(model, p, family, mix_seed(base, &[1]))?;
        let mut rng = rng_from_seed(mix_seed(base, &[2]));
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let spread = (rng.random_range(0.01f64.ln()..10f64.ln())).exp();
        let raw = crate::dualmodel::field_lincomb(C64::new(sign, 0.0), &x, C64::new(spread, 0.0), &z)?;
        let n = family_norm(&raw, p, family)?;
        if n == 0.0 {
            continue;
        }
        let y = raw.scale_real(1.0 / n);
        let eps = family_norm(&x.sub(&y)?, p, family)?;
        let defect = 1.0 - family_norm(&crate::dualmodel::field_lincomb(half, &x, half, &y)?, p, family)?;
        for (i, &lo) in eps_bins.iter().enumerate() {
            if eps >= lo && eps < lo + EPS_BIN_WIDTH {
                best[i] = best[i].min(defect);
                counts[i] += 1;
            }
        }
    }
    Ok(eps_bins
        .iter()
        .zip(best.iter().zip(&counts))
        .map(|(&lo, (&b, &c))| ModulusEstimate {
            epsilon_or_t: lo,
            estimate: (c > 0).then_some(b),
            bound: convexity_lower_bound(p, lo),
            kind: ModulusKind::ConvexityLower,
            samples: c,
        })
        .collect())
}

/// For each `t`, the largest `(‖x + ty‖ + ‖x − ty‖)/2 − 1` over sampled
/// independent unit pairs (the same pairs for every `t`).
pub fn modulus_smoothness_sample(
    model: &Arc<DualModel>,
    p: ExponentP,
    family: Family,
    t_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<ModulusEstimate>> {
    if let Some(&bad) = t_grid.iter().find(|&&t| !(t >= 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter(format!("smoothness parameter {bad} must be non-negative")));
    }
    let mut best = vec![f64::NEG_INFINITY; t_grid.len()];
    let one = C64::new(1.0, 0.0);
    for k in 0..samples {
        let base = mix_seed(seed, &[k as u64]);
        let x = unit_field(model, p, family, mix_seed(base, &[0]))?;
        let y = unit_field(model, p, family, mix_seed(base, &[1]))?;
        for (i, &t) in t_grid.iter().enumerate() {
            let plus = crate::dualmodel::field_lincomb(one, &x, C64::new(t, 0.0), &y)?;
            let minus = crate::dualmodel::field_lincomb(one, &x, C64::new(-t, 0.0), &y)?;
            let value = 0.5 * (family_norm(&plus, p, family)? + family_norm(&minus, p, family)?) - 1.0;
            best[i] = best[i].max(value);
        }
    }
    Ok(t_grid
        .iter()
        .zip(&best)
        .map(|(&t, &b)| ModulusEstimate {
            epsilon_or_t: t,
            estimate: (samples > 0).then_some(b),
            bound: smoothness_upper_bound(p, t),
            kind: ModulusKind::SmoothnessUpper,
            samples,
        })
        .collect())
}

/// `(2^{-n} Σ_θ ‖Σ θⱼ Hⱼ‖^r)^{1/r}` over all sign patterns, exactly.
///
/// Uses `‖−S‖ = ‖S‖` to fix `θ₁ = +1` and walks the remaining patterns in
/// Gray-code order, so each step adds or removes a single field.
pub fn rademacher_average(fields: &[Field], p: ExponentP, family: Family, r: f64) -> Result<f64> {
    let n = fields.len();
    if n > MAX_RADEMACHER_FIELDS {
        return Err(Error::TooManyFields {
            n,
            max: MAX_RADEMACHER_FIELDS,
        });
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("average exponent {r} must be positive")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    for f in &fields[1..] {
        fields[0].require_same_model(f)?;
    }
    let mut signs = vec![1.0_f64; n];
    let rebuild = |signs: &[f64]| -> Result<Field> {
        let mut s = Field::zeros(fields[0].model().clone());
        for (f, &sg) in fields.iter().zip(signs) {
            s = crate::dualmodel::field_lincomb(C64::new(1.0, 0.0), &s, C64::new(sg, 0.0), f)?;
        }
        Ok(s)
    };
    let mut sum = rebuild(&signs)?;
    let mut total = family_norm(&sum, p, family)?.powf(r);
    let patterns: u64 = 1 << (n - 1);
    for k in 1..patterns {
        let j = 1 + k.trailing_zeros() as usize;
        signs[j] = -signs[j];
        if k % 1024 == 0 {
            sum = rebuild(&signs)?;
        } else {
            sum = crate::dualmodel::field_lincomb(
                C64::new(1.0, 0.0),
                &sum,
                C64::new(2.0 * signs[j], 0.0),
                &fields[j],
            )?;
        }
        total += family_norm(&sum, p, family)?.powf(r);
    }
    Ok((total / patterns as f64).powf(1.0 / r))
}

/// Both halves of the type/cotype estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeCotype {
    pub lower: CheckReport,
    pub upper: CheckReport,
}

/// With `A` the exact L²-sign-average of `Σ θⱼHⱼ`:
/// for `p ≤ 2`, `√c_p (Σ‖Hⱼ‖²)^{1/2} ≤ A ≤ (Σ‖Hⱼ‖ᵖ)^{1/p}`;
/// for `p ≥ 2`, `(Σ‖Hⱼ‖ᵖ)^{1/p} ≤ A ≤ √C_p (Σ‖Hⱼ‖²)^{1/2}`.
pub fn type_cotype_check(fields: &[Field], p: ExponentP, family: Family) -> Result<TypeCotype> {
    p.require_interior()?;
    let pv = p.value();
    let avg = rademacher_average(fields, p, family, 2.0)?;
    let norms = fields
        .iter()
        .map(|f| family_norm(f, p, family))
        .collect::<Result<Vec<_>>>()?;
    let l2 = norms.iter().map(|n| n * n).sum::<f64>().sqrt();
    let lp = norms.iter().map(|n| n.powf(pv)).sum::<f64>().powf(1.0 / pv);
    let consts = TwoPointConstants::new(p);
    let (lower, upper) = if pv <= 2.0 {
        (
            CheckReport::inequality("cotype_estimate", p, consts.lower().sqrt() * l2, avg, DEFAULT_TOL),
            CheckReport::inequality("type_estimate", p, avg, lp, DEFAULT_TOL),
        )
    } else {
        (
            CheckReport::inequality("cotype_estimate", p, lp, avg, DEFAULT_TOL),
            CheckReport::inequality("type_estimate", p, avg, consts.upper().sqrt() * l2, DEFAULT_TOL),
        )
    };
    let refs: Vec<&Field> = fields.iter().collect();
    let digest = digest_inputs("type_cotype", &refs, &[pv, family as u8 as f64]);
    Ok(TypeCotype {
        lower: lower.with_digest(digest.clone()),
        upper: upper.with_digest(digest),
    })
}

/// Rearranged Clarkson bound behind the Kadec–Klee property. For `p ≤ 2`:
/// `‖(Hₙ − H)/2‖^q ≤ (½(‖Hₙ‖ᵖ + ‖H‖ᵖ))^{q/p} − ‖(Hₙ + H)/2‖^q`, and the same
/// with `p`, `q` exchanged for `p > 2`. The report's `rhs` is the gap.
pub fn kadec_klee_gap(hn: &Field, h: &Field, p: ExponentP, family: Family) -> Result<CheckReport> {
    p.require_interior()?;
    let pv = p.value();
    let qv = p.conjugate().value();
    let n = pair_norms(hn, h, p, family)?;
    let (inner, outer) = if pv <= 2.0 { (qv, pv) } else { (pv, qv) };
    let lhs = n.half_diff.powf(inner);
    let mean = (0.5 * (n.first.powf(outer) + n.second.powf(outer))).powf(inner / outer);
    let gap = mean - n.half_sum.powf(inner);
    Ok(CheckReport::inequality("kadec_klee_gap", p, lhs, gap, DEFAULT_TOL).with_digest(digest_inputs(
        "kadec_klee",
        &[hn, h],
        &[pv, family as u8 as f64],
    )))
}

/// Result of [`unconditional_sum_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnconditionalSum {
    /// `Σ lower-term(‖Hⱼ‖) ≤ Σ δ-bound(‖Hⱼ‖)`.
    pub report: CheckReport,
    /// `Σ ‖Hⱼ‖^{max(2, p)}`.
    pub power_sum: f64,
    /// `8/c_p` for `p ≤ 2`, `p·2ᵖ` for `p > 2`; `power_sum = constant·lhs`.
    pub constant: f64,
}

/// Checks the per-term comparison `c_p‖Hⱼ‖²/8 ≤ δ-bound(‖Hⱼ‖)` (or
/// `‖Hⱼ‖ᵖ/(p2ᵖ)` for `p > 2`) summed over a sequence, the finite ingredient
/// of unconditional-convergence estimates. Norms must lie in `[0, 2]`.
pub fn unconditional_sum_bound(fields: &[Field], p: ExponentP, family: Family) -> Result<UnconditionalSum> {
    let norms = fields
        .iter()
        .map(|f| family_norm(f, p, family))
        .collect::<Result<Vec<_>>>()?;
    let mut out = unconditional_sum_from_norms(&norms, p)?;
    let refs: Vec<&Field> = fields.iter().collect();
    out.report = out
        .report
        .with_digest(digest_inputs("unconditional", &refs, &[p.value(), family as u8 as f64]));
    Ok(out)
}

/// [`unconditional_sum_bound`] on precomputed norms.
pub fn unconditional_sum_from_norms(norms: &[f64], p: ExponentP) -> Result<UnconditionalSum> {
    p.require_interior()?;
    if let Some((index, &norm)) = norms
        .iter()
        .enumerate()
        .find(|(_, &n)| !(0.0..=2.0).contains(&n))
    {
        return Err(Error::NormOutOfRange { index, norm });
    }
    let pv = p.value();
    let (term, constant): (Box<dyn Fn(f64) -> f64>, f64) = if pv <= 2.0 {
        let c = TwoPointConstants::new(p).lower();
        (Box::new(move |n| c * n * n / 8.0), 8.0 / c)
    } else {
        let k = pv * 2f64.powf(pv);
        (Box::new(move |n| n.powf(pv) / k), k)
    };
    let lhs: f64 = norms.iter().map(|&n| term(n)).sum();
    let rhs: f64 = norms.iter().map(|&n| convexity_lower_bound(p, n)).sum();
    let power_sum = norms.iter().map(|&n| n.powf(pv.max(2.0))).sum();
    let mut d = InputsDigest::new("unconditional_norms");
    d.push_exponent(p);
    for &n in norms {
        d.push_f64(n);
    }
    Ok(UnconditionalSum {
        report: CheckReport::inequality("unconditional_sum_ingredient", p, lhs, rhs, DEFAULT_TOL)
            .with_digest(d.finish()),
        power_sum,
        constant,
    })
}
