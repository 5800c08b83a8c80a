//! Trace pairing, norming functionals and weighted direct-sum duality.

use crate::dualmodel::{random_field, Field, FieldDistribution};
use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, C64};
use crate::norms::{lp_sch_norm, DirectSumSpec, ExponentP, Family};
use crate::report::{digest_inputs, CheckReport, DEFAULT_TOL};
use crate::rng::mix_seed;

/// `Σ dim·Tr(H(ξ) F(ξ))`. Bilinear: no conjugation on either side.
pub fn pairing(h: &Field, f: &Field) -> Result<C64> {
    h.require_same_model(f)?;
    let mut total = C64::new(0.0, 0.0);
    for ((dim, a), b) in h.iter().zip(f.blocks()) {
        total += trace_of_product(a, b) * dim as f64;
    }
    Ok(total)
}

/// `Tr(AB)` without forming the product.
fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.rows();
    let mut t = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            t += a[(i, k)] * b[(k, i)];
        }
    }
    t
}

/// Norming functional in `ℓ^q_sch` for `h ∈ ℓᵖ_sch`, `1 ≤ p < ∞`.
///
/// With `H(ξ) = U|H(ξ)|` this is `|H(ξ)|^{p-1} U* / ‖H‖^{p-1}`; at `p = 1`
/// it is `U*`. The result has `‖F‖_q = 1` and `pairing(h, F) = ‖h‖_p`.
pub fn dual_extremizer(h: &Field, p: ExponentP) -> Result<Field> {
    if p.is_infinite() {
        return Err(Error::ExponentOutOfRange {
            p: p.to_string(),
            range: "[1, inf)",
        });
    }
    let norm = lp_sch_norm(h, p)?;
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    let pv = p.value();
    h.map_blocks(|block| {
        // H = W Σ V*, U = W V*, so |H|^{p-1} U* = V Σ^{p-1} W*
        let s = matcore::svd(block)?;
        let v = s.vstar.adjoint();
        let mut scaled = v.clone();
        let n = scaled.cols();
        for (j, &sig) in s.sigma.iter().enumerate() {
            let factor = if pv == 1.0 {
                1.0
            } else if sig > 0.0 {
                (sig / norm).powf(pv - 1.0)
            } else {
                0.0
            };
            for i in 0..n {
                scaled[(i, j)] *= factor;
            }
        }
        Ok(&scaled * &s.u.adjoint())
    })
}

/// Random field with unit `ℓ^q_sch` norm.
pub fn random_unit_field(model: &std::sync::Arc<crate::DualModel>, q: ExponentP, seed: u64) -> Result<Field> {
    let g = random_field(model, seed, FieldDistribution::Ginibre);
    let n = lp_sch_norm(&g, q)?;
    Ok(g.scale_real(1.0 / n))
}

/// `max |pairing(h, F)|` over `trials` random unit-`q` fields, optionally
/// with the norming functional of `h` tried first.
///
/// Never exceeds `‖h‖_p` beyond rounding; with the extremizer included it
/// attains it.
pub fn dual_norm_via_search(
    h: &Field,
    p: ExponentP,
    trials: usize,
    seed: u64,
    include_extremizer: bool,
) -> Result<f64> {
    if h.is_zero() {
        return Ok(0.0);
    }
    let q = p.conjugate();
    let mut best = 0.0_f64;
    if include_extremizer && p.is_finite() {
        best = pairing(h, &dual_extremizer(h, p)?)?.norm();
    }
    for k in 0..trials {
        let f = random_unit_field(h.model(), q, mix_seed(seed, &[k as u64]))?;
        best = best.max(pairing(h, &f)?.norm());
    }
    Ok(best)
}

/// `|pairing(h, F)| ≤ ‖h‖_p ‖F‖_q`.
pub fn pairing_bound_check(h: &Field, f: &Field, p: ExponentP) -> Result<CheckReport> {
    let lhs = pairing(h, f)?.norm();
    let rhs = lp_sch_norm(h, p)? * lp_sch_norm(f, p.conjugate())?;
    Ok(CheckReport::inequality("duality_pairing_bound", p, lhs, rhs, DEFAULT_TOL)
        .with_digest(digest_inputs("pairing", &[h, f], &[p.value()])))
}

/// Checks `pairing(h, F) = ‖h‖_p` and `‖F‖_q = 1` for the norming functional.
/// `rhs` is `‖h‖_p`; `lhs` is `‖h‖_p` plus the larger of the two defects
/// `|pairing(h, F) − ‖h‖_p|` and `‖h‖_p·|‖F‖_q − 1|`.
pub fn extremizer_check(h: &Field, p: ExponentP) -> Result<CheckReport> {
    let f = dual_extremizer(h, p)?;
    let norm = lp_sch_norm(h, p)?;
    let pair_defect = (pairing(h, &f)? - C64::new(norm, 0.0)).norm();
    let unit_defect = norm * (lp_sch_norm(&f, p.conjugate())? - 1.0).abs();
    let lhs = norm + pair_defect.max(unit_defect);
    Ok(CheckReport::equality("duality_norming_functional", p, lhs, norm, 1e-9)
        .with_digest(digest_inputs("extremizer", &[h], &[p.value()])))
}

fn require_conjugate(a: ExponentP, b: ExponentP, what: &str) -> Result<()> {
    if !a.is_interior() || !b.is_interior() {
        return Err(Error::IncompatibleExponents(format!("{what}: exponents must lie in (1, inf)")));
    }
    if (a.recip() + b.recip() - 1.0).abs() > 1e-12 {
        return Err(Error::IncompatibleExponents(format!("{what}: 1/{a} + 1/{b} != 1")));
    }
    Ok(())
}

/// The functional `(f1, f2)` acting on `(h1, h2) ∈ ℓᵖ_sch ⊕_{r,w} ℓᵖ_sch` as
/// `pairing(h1, f1) + w^{1/r - 1/s}·pairing(h2, f2)`; checks it is bounded by
/// the `⊕_{s,1/w}` norm of `(f1, f2)` in `ℓ^q_sch`.
pub fn direct_sum_dual_pair_check(
    h1: &Field,
    h2: &Field,
    f1: &Field,
    f2: &Field,
    p: ExponentP,
    spec: DirectSumSpec,
) -> Result<CheckReport> {
    let q = p.conjugate();
    let s = spec.r.conjugate();
    require_conjugate(p, q, "field exponent")?;
    require_conjugate(spec.r, s, "direct-sum exponent")?;
    h1.require_same_model(f1)?;
    let dual_spec = DirectSumSpec::new(s, 1.0 / spec.w)?;
    let coupling = spec.w.powf(spec.r.recip() - s.recip());
    let lhs = (pairing(h1, f1)? + pairing(h2, f2)? * coupling).norm();
    let f_norm = crate::norms::direct_sum_norm(f1, f2, q, dual_spec, Family::Sch)?;
    let h_norm = crate::norms::direct_sum_norm(h1, h2, p, spec, Family::Sch)?;
    Ok(CheckReport::inequality("direct_sum_duality", p, lhs, f_norm * h_norm, DEFAULT_TOL).with_digest(
        digest_inputs("direct_sum_dual", &[h1, h2, f1, f2], &[p.value(), spec.r.value(), spec.w]),
    ))
}

/// Functional `(f1, f2)` attaining the bound of
/// [`direct_sum_dual_pair_check`] for the given `(h1, h2)`.
pub fn direct_sum_extremizer(h1: &Field, h2: &Field, p: ExponentP, spec: DirectSumSpec) -> Result<(Field, Field)> {
    require_conjugate(spec.r, spec.r.conjugate(), "direct-sum exponent")?;
    let r = spec.r.value();
    let s = spec.r.conjugate();
    let slot = |h: &Field, amplitude: f64| -> Result<Field> {
        if h.is_zero() {
            Ok(Field::zeros(h.model().clone()))
        } else {
            Ok(dual_extremizer(h, p)?.scale_real(amplitude))
        }
    };
    let n1 = lp_sch_norm(h1, p)?;
    let n2 = lp_sch_norm(h2, p)?;
    let a1 = n1.powf(r - 1.0);
    let a2 = spec.w.powf(s.recip()) * (spec.w.powf(spec.r.recip()) * n2).powf(r - 1.0);
    Ok((slot(h1, a1)?, slot(h2, a2)?))
}

/// `Tr((AB)^s)` for Hermitian PSD `A`, `B`, computed through the similar
/// PSD matrix `A^{1/2} B A^{1/2}`.
pub fn trace_power_of_product(a: &CMatrix, b: &CMatrix, s: f64) -> Result<f64> {
    let root = matcore::psd_power_real(a, 0.5)?;
    let m = (&(&root * b) * &root).hermitian_part()?;
    let (values, _) = matcore::eigh(&m)?;
    let top = values.iter().fold(0.0_f64, |acc, &x| acc.max(x));
    Ok(values
        .iter()
        .filter(|&&x| x > matcore::EIG_ZERO_REL * top)
        .map(|&x| x.powf(s))
        .sum())
}

/// `Tr((AB)^s) = Tr((BA)^s)` for PSD `A`, `B`.
pub fn trace_cyclicity_check(a: &CMatrix, b: &CMatrix, s: f64) -> Result<CheckReport> {
    let ab = trace_power_of_product(a, b, s)?;
    let ba = trace_power_of_product(b, a, s)?;
    let p = ExponentP::new(2.0 * s).unwrap_or(ExponentP::ONE);
    Ok(CheckReport::equality("trace_cyclicity", p, ab, ba, 1e-9))
}
