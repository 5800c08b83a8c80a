//! Complex-interpolation witnesses for the Schatten family on the strip
//! `0 ≤ Re z ≤ 1`.

use crate::dualmodel::Field;
use crate::duality::pairing;
use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, C64, EIG_ZERO_REL};
use crate::norms::{lp_sch_norm, ExponentP};
use crate::report::{digest_inputs, CheckReport};

/// Tolerance for the three-lines and boundary checks.
pub const STRIP_TOL: f64 = 1e-9;
/// Tolerance for the two-sided equal-norms check.
pub const CONSISTENCY_TOL: f64 = 1e-8;
/// Step of the central differences used by [`cr_residual`].
pub const CR_STEP: f64 = 1e-3;

/// Boundary grid `t ∈ [-2, 2]` with step 0.5.
pub fn default_t_grid() -> Vec<f64> {
    (0..=8).map(|k| -2.0 + 0.5 * k as f64).collect()
}

/// Endpoint exponents and interpolation parameter, with the derived
/// `1/p = (1-θ)/p0 + θ/p1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpSpec {
    p0: ExponentP,
    p1: ExponentP,
    theta: f64,
}

impl InterpSpec {
    /// Finite endpoints and `0 < θ < 1`.
    pub fn new(p0: ExponentP, p1: ExponentP, theta: f64) -> Result<Self> {
        if !p0.is_finite() || !p1.is_finite() {
            return Err(Error::InvalidParameter("interpolation endpoints must be finite".into()));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidParameter(format!("theta = {theta} must lie in (0, 1)")));
        }
        Ok(Self { p0, p1, theta })
    }

    /// Spec whose derived exponent is `p`; needs `p` strictly between the
    /// endpoints.
    pub fn for_target(p0: ExponentP, p1: ExponentP, p: ExponentP) -> Result<Self> {
        let span = p0.recip() - p1.recip();
        if span == 0.0 {
            return Err(Error::InvalidParameter("endpoints coincide; theta is undetermined".into()));
        }
        Self::new(p0, p1, (p0.recip() - p.recip()) / span)
    }

    /// Endpoint pair used by the batch runner for a target exponent:
    /// `(1, 2)` below 2, `(1, 4)` at 2, `(2, 4)` on `(2, 4)` and
    /// `(p/2, 2p)` from 4 on.
    pub fn standard_for(p: ExponentP) -> Result<Self> {
        p.require_interior()?;
        let v = p.value();
        let e = |x: f64| ExponentP::new(x).expect("endpoint >= 1");
        let (a, b) = if v < 2.0 {
            (1.0, 2.0)
        } else if v == 2.0 {
            (1.0, 4.0)
        } else if v < 4.0 {
            (2.0, 4.0)
        } else {
            (v / 2.0, 2.0 * v)
        };
        Self::for_target(e(a), e(b), p)
    }

    pub fn p0(&self) -> ExponentP {
        self.p0
    }

    pub fn p1(&self) -> ExponentP {
        self.p1
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn p(&self) -> ExponentP {
        let recip = (1.0 - self.theta) * self.p0.recip() + self.theta * self.p1.recip();
        ExponentP::from_recip(recip).expect("convex combination of reciprocals")
    }

    /// Conjugate endpoints with the same `θ`. Endpoints may become infinite
    /// (`p0 = 1` gives `q0 = ∞`).
    pub fn conjugate(&self) -> Self {
        Self {
            p0: self.p0.conjugate(),
            p1: self.p1.conjugate(),
            theta: self.theta,
        }
    }

    /// `p/p(z) = p·((1-z)/p0 + z/p1)`.
    pub fn exponent_ratio(&self, z: C64) -> Result<C64> {
        let p = self.p();
        if p.is_infinite() {
            return Err(Error::InvalidParameter("derived exponent is infinite".into()));
        }
        let one = C64::new(1.0, 0.0);
        Ok(((one - z) * self.p0.recip() + z * self.p1.recip()) * p.value())
    }
}

/// Witness through `h` on the strip:
/// `f(z)(ξ) = |H(ξ)*|^{p/p(z)-1} H(ξ)` with `h` first scaled to unit
/// `ℓᵖ_sch` norm, so `f(θ) = h/‖h‖_p`.
pub fn witness_f(h: &Field, spec: &InterpSpec, z: C64) -> Result<Field> {
    witness(h, spec, z)
}

/// The same construction for the dual side; `spec_dual` is normally
/// `spec.conjugate()`, whose endpoints may be infinite.
pub fn witness_g(f: &Field, spec_dual: &InterpSpec, z: C64) -> Result<Field> {
    witness(f, spec_dual, z)
}

fn witness(h: &Field, spec: &InterpSpec, z: C64) -> Result<Field> {
    let w = spec.exponent_ratio(z)?;
    let norm = lp_sch_norm(h, spec.p())?;
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    h.map_blocks(|b| Ok(block_witness(&b.scale_real(1.0 / norm), w)?))
}

/// `|B*|^{w-1} B`. With `B = W Σ V*` this is `W Σ^w V*`; singular values at
/// or below `1e-12·σ₁` are sent to zero, as in `psd_power`.
fn block_witness(b: &CMatrix, w: C64) -> std::result::Result<CMatrix, matcore::MatError> {
    let s = matcore::svd(b)?;
    let cutoff = EIG_ZERO_REL * s.sigma.first().copied().unwrap_or(0.0);
    let mut left = s.u.clone();
    for (j, &sig) in s.sigma.iter().enumerate() {
        let factor = if sig > cutoff && sig > 0.0 {
            (w * sig.ln()).exp()
        } else {
            C64::new(0.0, 0.0)
        };
        for i in 0..left.rows() {
            left[(i, j)] *= factor;
        }
    }
    Ok(&left * &s.vstar)
}

/// `h(z) = pairing(f(z), g(z))` for the witnesses of `h` and `f_dual`.
pub fn strip_value(h: &Field, f_dual: &Field, spec: &InterpSpec, z: C64) -> Result<C64> {
    let dual = spec.conjugate();
    pairing(&witness_f(h, spec, z)?, &witness_g(f_dual, &dual, z)?)
}

/// Norms of the witness on both boundary lines: `‖f(it)‖_{p0}` and
/// `‖f(1+it)‖_{p1}` for every `t` in the grid.
pub fn boundary_norms(h: &Field, spec: &InterpSpec, t_grid: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * t_grid.len());
    for &t in t_grid {
        out.push(lp_sch_norm(&witness(h, spec, C64::new(0.0, t))?, spec.p0)?);
        out.push(lp_sch_norm(&witness(h, spec, C64::new(1.0, t))?, spec.p1)?);
    }
    Ok(out)
}

/// Largest `|norm - 1|` over [`boundary_norms`].
pub fn boundary_norm_defect(h: &Field, spec: &InterpSpec, t_grid: &[f64]) -> Result<f64> {
    Ok(boundary_norms(h, spec, t_grid)?
        .into_iter()
        .map(|n| (n - 1.0).abs())
        .fold(0.0, f64::max))
}

/// `|h(it)|, |h(1+it)| ≤ 1` on the grid and `|h(θ)| ≤ 1`. The report's `lhs`
/// is the largest of these moduli.
pub fn three_lines_check(h: &Field, f_dual: &Field, spec: &InterpSpec, t_grid: &[f64]) -> Result<CheckReport> {
    let mut worst = strip_value(h, f_dual, spec, C64::new(spec.theta, 0.0))?.norm();
    for &t in t_grid {
        for x in [0.0, 1.0] {
            worst = worst.max(strip_value(h, f_dual, spec, C64::new(x, t))?.norm());
        }
    }
    let p = spec.p();
    Ok(CheckReport::inequality("three_lines_bound", p, worst, 1.0, STRIP_TOL).with_digest(
        digest_inputs(
            "three_lines",
            &[h, f_dual],
            &[spec.p0.value(), spec.p1.value(), spec.theta],
        ),
    ))
}

/// Two one-sided estimates of the interpolation norm of `h/‖h‖_p`: the
/// largest boundary witness norm (upper) and `|h(θ)|` paired with the
/// norming functional (lower). Both equal 1; the report compares them.
pub fn interp_norm_consistency(h: &Field, spec: &InterpSpec, t_grid: &[f64]) -> Result<CheckReport> {
    let p = spec.p();
    let upper = boundary_norms(h, spec, t_grid)?.into_iter().fold(0.0, f64::max);
    let norm = lp_sch_norm(h, p)?;
    let functional = crate::duality::dual_extremizer(h, p)?;
    let lower = pairing(&h.scale_real(1.0 / norm), &functional)?.norm();
    Ok(CheckReport::equality("interpolation_equal_norms", p, upper, lower, CONSISTENCY_TOL).with_digest(
        digest_inputs(
            "interp_consistency",
            &[h],
            &[spec.p0.value(), spec.p1.value(), spec.theta],
        ),
    ))
}

/// `|∂ₓh + i∂ᵧh|` at `z` from fourth-order central differences; zero for
/// holomorphic `h` up to truncation and rounding.
pub fn cr_residual(h: &Field, f_dual: &Field, spec: &InterpSpec, z: C64) -> Result<f64> {
    let eval = |w: C64| strip_value(h, f_dual, spec, w);
    let d = CR_STEP;
    let derivative = |dir: C64| -> Result<C64> {
        let step = dir * d;
        let fp1 = eval(z + step)?;
        let fm1 = eval(z - step)?;
        let fp2 = eval(z + step * 2.0)?;
        let fm2 = eval(z - step * 2.0)?;
        Ok((fm2 - fp2 + (fp1 - fm1) * 8.0) / (12.0 * d))
    };
    let dx = derivative(C64::new(1.0, 0.0))?;
    let dy = derivative(C64::new(0.0, 1.0))?;
    Ok((dx + C64::new(0.0, 1.0) * dy).norm())
}

/// Interior grid `x ∈ {0.3, …, 0.7}`, `y ∈ {-0.2, …, 0.2}` (step 0.1).
pub fn interior_grid() -> Vec<C64> {
    let mut pts = Vec::with_capacity(25);
    for i in 0..5 {
        for j in 0..5 {
            pts.push(C64::new(0.3 + 0.1 * i as f64, -0.2 + 0.1 * j as f64));
        }
    }
    pts
}

/// Largest [`cr_residual`] over [`interior_grid`].
pub fn cr_residual_grid(h: &Field, f_dual: &Field, spec: &InterpSpec) -> Result<f64> {
    interior_grid()
        .into_iter()
        .map(|z| cr_residual(h, f_dual, spec, z))
        .try_fold(0.0, |acc, r| Ok(f64::max(acc, r?)))
}
