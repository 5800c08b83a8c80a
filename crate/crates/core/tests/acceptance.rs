//! Acceptance criteria. Each test writes one PASS/FAIL line straight to stdout
//! so the summary shows up without `--nocapture`.

mod support;

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use dualnorm_core::dualmodel::random_field;
use dualnorm_core::duality::{dual_extremizer, dual_norm_via_search, extremizer_check, trace_cyclicity_check, trace_power_of_product};
use dualnorm_core::inequalities::{
    clarkson_check, critical_constant_range, default_eps_bins, default_smoothness_grid, hilbert_convexity, hilbert_smoothness, kadec_klee_gap,
    modulus_convexity_sample, modulus_smoothness_sample, rademacher_average, two_point_check, type_cotype_check,
    ModulusKind, TwoPointConstants,
};
use dualnorm_core::interpolation::{
    boundary_norm_defect, default_t_grid, strip_value, three_lines_check, witness_f, InterpSpec,
};
use dualnorm_core::matcore::schatten_norm;
use dualnorm_core::norms::{family_norm, holder_check};
use dualnorm_core::rng::{complex_normal, mix_seed, rng_from_seed};
use dualnorm_core::suite::{render_reports, resolve_dual, run_suite, FamilyChoice, ReportFormat, SuiteConfig, SuiteKind};
use dualnorm_core::{CMatrix, DualModel, ExponentP, Family, Field, FieldDistribution, C64};
use rand::Rng;

fn verdict(id: u32, name: &str, ok: bool, detail: String) {
    let line = format!(
        "acceptance criterion {id:>2} [{}] {name}: {detail}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    std::io::stdout().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn model(spec: &str) -> Arc<DualModel> {
    Arc::new(resolve_dual(spec).unwrap())
}

fn p(v: f64) -> ExponentP {
    ExponentP::new(v).unwrap()
}

fn field(m: &Arc<DualModel>, seed: u64) -> Field {
    random_field(m, seed, FieldDistribution::Ginibre)
}

fn unit(h: Field, q: ExponentP, family: Family) -> Field {
    let n = family_norm(&h, q, family).unwrap();
    h.scale_real(1.0 / n)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn criterion_01_holder() {
    let start = Instant::now();
    let inf = f64::INFINITY;
    let triples = [
        (2.0, 2.0, 1.0),
        (3.0, 1.5, 1.0),
        (4.0, 4.0, 2.0),
        (inf, 1.5, 1.5),
        (inf, 3.0, 3.0),
        (inf, inf, inf),
    ];
    let (mut checks, mut violations, mut oracle_worst) = (0, 0, 0.0_f64);
    for (di, dual) in ["torus:4", "s3", "su2:4"].iter().enumerate() {
        let m = model(dual);
        for (ti, &(pv, qv, rv)) in triples.iter().enumerate() {
            for k in 0..1000u64 {
                let seed = mix_seed(1, &[di as u64, ti as u64, k]);
                let (h1, h2) = (field(&m, seed), field(&m, seed ^ 1));
                let r = holder_check(&h1, &h2, p(pv), p(qv)).unwrap();
                checks += 1;
                violations += usize::from(!r.passed);
                if k < 10 {
                    let prod = dualnorm_core::dualmodel::field_product(&h1, &h2).unwrap();
                    let lhs = support::field_schatten_norm(&prod, rv);
                    let rhs = support::field_schatten_norm(&h1, pv) * support::field_schatten_norm(&h2, qv);
                    oracle_worst = oracle_worst.max(rel_err(lhs, r.lhs)).max(rel_err(rhs, r.rhs));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        "Holder inequality",
        violations == 0 && oracle_worst < 1e-9 && elapsed <= Duration::from_secs(30),
        format!("{violations} violations in {checks} checks at tol 1e-10, oracle rel err {oracle_worst:.1e}, {elapsed:.1?} (limit 30s)"),
    );
}

#[test]
fn criterion_02_duality_saturation() {
    let m = model("su2:4");
    let (mut worst_unit, mut worst_pair, mut over, mut failed) = (0.0_f64, 0.0_f64, 0, 0);
    for &pv in &[1.0_f64, 1.2, 1.5, 2.0, 3.0, 5.0] {
        let q = p(pv).conjugate().value();
        for k in 0..200u64 {
            let h = field(&m, mix_seed(2, &[pv.to_bits(), k]));
            let norm = support::field_schatten_norm(&h, pv);
            let f = dual_extremizer(&h, p(pv)).unwrap();
            worst_unit = worst_unit.max((support::field_schatten_norm(&f, q) - 1.0).abs());
            let pair = support::pairing(&h, &f);
            worst_pair = worst_pair.max((pair - C64::new(norm, 0.0)).norm() / norm);
            failed += usize::from(!extremizer_check(&h, p(pv)).unwrap().passed);
            let searched = dual_norm_via_search(&h, p(pv), 20, k, false).unwrap();
            over += usize::from(searched > norm * (1.0 + 1e-10));
        }
    }
    verdict(
        2,
        "duality saturation",
        worst_unit <= 1e-9 && worst_pair <= 1e-9 && over == 0 && failed == 0,
        format!(
            "max |‖F‖_q - 1| {worst_unit:.1e}, max rel pairing defect {worst_pair:.1e} (tol 1e-9), \
             {over} random functionals above ‖H‖_p, {failed} failed reports"
        ),
    );
}

#[test]
fn criterion_03_clarkson() {
    let m = model("su2:4");
    let (mut checks, mut violations, mut worst_p2) = (0, 0, 0.0_f64);
    for family in Family::ALL {
        for &pv in &[1.3_f64, 1.7, 2.0, 2.4, 4.0] {
            for k in 0..1000u64 {
                let seed = mix_seed(3, &[family as u64, pv.to_bits(), k]);
                let r = clarkson_check(&field(&m, seed), &field(&m, seed ^ 1), p(pv), family).unwrap();
                checks += 1;
                violations += usize::from(!r.passed);
                if pv == 2.0 {
                    worst_p2 = worst_p2.max(r.slack.abs() / r.rhs.abs().max(1.0));
                }
            }
        }
    }
    verdict(
        3,
        "Clarkson inequalities (sch and hs)",
        violations == 0 && worst_p2 <= 1e-11,
        format!("{violations} violations in {checks} checks, p=2 max |slack|/scale {worst_p2:.1e} (limit 1e-11)"),
    );
}

#[test]
fn criterion_04_two_point() {
    let m = model("s3");
    let mut constants_ok = true;
    for &pv in &[1.2_f64, 1.5, 3.0, 6.0] {
        let c = TwoPointConstants::new(p(pv));
        if pv >= 2.0 {
            constants_ok &= c.upper() == 2.0 * pv - 1.0;
        } else {
            constants_ok &= c.lower() == (pv - 1.0) / (pv + 1.0);
        }
    }
    let (mut checks, mut violations) = (0, 0);
    let mut ranges = Vec::new();
    for family in Family::ALL {
        for &pv in &[1.2_f64, 1.5, 3.0, 6.0] {
            let outcomes: Vec<_> = (0..1000u64)
                .map(|k| {
                    let seed = mix_seed(4, &[family as u64, pv.to_bits(), k]);
                    two_point_check(&field(&m, seed), &field(&m, seed ^ 1), p(pv), family).unwrap()
                })
                .collect();
            checks += outcomes.len();
            violations += outcomes.iter().filter(|t| !t.report.passed).count();
            let r = critical_constant_range(&outcomes).unwrap();
            let side = if pv >= 2.0 { r.max } else { r.min };
            ranges.push(format!("{}@{pv}:{side:.3}", family.as_str()));
        }
    }
    let mut worst_p2 = 0.0_f64;
    for family in Family::ALL {
        for k in 0..1000u64 {
            let seed = mix_seed(4, &[family as u64, 2, k]);
            let t = two_point_check(&field(&m, seed), &field(&m, seed ^ 1), ExponentP::TWO, family).unwrap();
            worst_p2 = worst_p2
                .max(t.report.slack.abs() / t.report.rhs.max(1.0))
                .max((t.critical_constant.unwrap() - 1.0).abs());
        }
    }
    verdict(
        4,
        "two-point inequalities",
        constants_ok && violations == 0 && worst_p2 <= 1e-10,
        format!(
            "constants C_p=2p-1, c_p=(p-1)/(p+1) {}; {violations} violations in {checks} checks; \
             p=2 worst deviation from equality with constant 1: {worst_p2:.1e}; \
             empirical extreme constants {}",
            if constants_ok { "match" } else { "MISMATCH" },
            ranges.join(" ")
        ),
    );
}

fn oracle_convexity_bound(pv: f64, eps: f64) -> f64 {
    let q = pv / (pv - 1.0);
    if pv < 2.0 {
        let c = (pv - 1.0) / (pv + 1.0);
        (eps.powf(q) / (q * 2f64.powf(q))).max(c * eps * eps / 8.0)
    } else {
        eps.powf(pv) / (pv * 2f64.powf(pv))
    }
}

fn oracle_smoothness_bound(pv: f64, t: f64) -> f64 {
    let q = pv / (pv - 1.0);
    if pv <= 2.0 {
        t.powf(pv) / pv
    } else {
        (t.powf(q) / q).min((2.0 * pv - 1.0) * t * t / 2.0)
    }
}

#[test]
fn criterion_05_moduli() {
    let start = Instant::now();
    let m = model("su2:3");
    let samples = 20_000;
    let (mut estimates, mut violations, mut empty, mut hilbert_off) = (0, 0, 0, 0);
    for family in Family::ALL {
        for &pv in &[1.5_f64, 2.0, 3.0] {
            let seed = mix_seed(5, &[family as u64, pv.to_bits()]);
            let eps = modulus_convexity_sample(&m, p(pv), family, &default_eps_bins(), samples, seed).unwrap();
            let rho =
                modulus_smoothness_sample(&m, p(pv), family, &default_smoothness_grid(), samples, seed ^ 1).unwrap();
            for est in eps.iter().chain(&rho) {
                let Some(e) = est.estimate else {
                    empty += 1;
                    continue;
                };
                estimates += 1;
                let x = est.epsilon_or_t;
                let ok = match est.kind {
                    ModulusKind::ConvexityLower => {
                        let b = oracle_convexity_bound(pv, x);
                        if pv == 2.0 {
                            let h = hilbert_convexity(x);
                            hilbert_off += usize::from(!(e >= h - 1e-10 && e <= h + 0.05));
                        }
                        e >= b - 1e-10 && (est.bound - b).abs() <= 1e-14
                    }
                    ModulusKind::SmoothnessUpper => {
                        let b = oracle_smoothness_bound(pv, x);
                        if pv == 2.0 {
                            let h = hilbert_smoothness(x);
                            hilbert_off += usize::from(!(e <= h + 1e-10 && e >= h - 0.05));
                        }
                        e <= b + 1e-10 && (est.bound - b).abs() <= 1e-14
                    }
                };
                violations += usize::from(!ok);
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        5,
        "moduli of convexity and smoothness",
        violations == 0 && empty == 0 && hilbert_off == 0 && elapsed <= Duration::from_secs(300),
        format!(
            "{violations} bound violations in {estimates} estimates ({empty} empty bins), \
             {hilbert_off} Hilbert-case estimates outside the 0.05 window, {elapsed:.1?} (limit 300s)"
        ),
    );
}

#[test]
fn criterion_06_type_cotype() {
    let m = model("su2:3");
    let (mut checks, mut violations, mut worst_p2, mut worst_enum) = (0, 0, 0.0_f64, 0.0_f64);
    for family in Family::ALL {
        for &pv in &[1.4_f64, 2.0, 3.0] {
            for k in 0..200u64 {
                let base = mix_seed(6, &[family as u64, pv.to_bits(), k]);
                let fields: Vec<Field> = (0..5).map(|j| field(&m, mix_seed(base, &[j]))).collect();
                let tc = type_cotype_check(&fields, p(pv), family).unwrap();
                checks += 2;
                violations += usize::from(!tc.lower.passed) + usize::from(!tc.upper.passed);
                let (avg, patterns) =
                    support::rademacher_by_enumeration(&fields, |f| family_norm(f, p(pv), family).unwrap(), 2.0);
                assert_eq!(patterns, 32);
                worst_enum = worst_enum.max(rel_err(avg, tc.upper.lhs.max(tc.lower.rhs)));
                if pv == 2.0 {
                    let l2 = fields
                        .iter()
                        .map(|f| family_norm(f, ExponentP::TWO, family).unwrap().powi(2))
                        .sum::<f64>()
                        .sqrt();
                    worst_p2 = worst_p2.max(rel_err(avg, l2));
                }
            }
        }
    }
    verdict(
        6,
        "type and cotype",
        violations == 0 && worst_p2 <= 1e-10 && worst_enum <= 1e-11,
        format!(
            "{violations} violations in {checks} one-sided checks, p=2 rel deviation from (Σ‖Hj‖²)^1/2 \
             {worst_p2:.1e} (tol 1e-10), 32-pattern enumeration agreement {worst_enum:.1e}"
        ),
    );
}

#[test]
fn criterion_07_interpolation() {
    let m = model("su2:3");
    let grid = default_t_grid();
    let (mut worst_boundary, mut worst_strip, mut worst_theta, mut worst_oracle) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let mut failed = 0;
    for &(p0, p1, target) in &[(1.0, 2.0, 1.5), (2.0, 4.0, 3.0)] {
        let spec = InterpSpec::for_target(p(p0), p(p1), p(target)).unwrap();
        for k in 0..200u64 {
            let h = field(&m, mix_seed(7, &[target.to_bits(), k]));
            let f = field(&m, mix_seed(7, &[target.to_bits(), k, 1]));
            worst_boundary = worst_boundary.max(boundary_norm_defect(&h, &spec, &grid).unwrap());
            let r = three_lines_check(&h, &f, &spec, &grid).unwrap();
            failed += usize::from(!r.passed);
            worst_strip = worst_strip.max(r.lhs);
            let g = dual_extremizer(&h, p(target)).unwrap();
            let at_theta = strip_value(&h, &g, &spec, C64::new(spec.theta(), 0.0)).unwrap();
            worst_theta = worst_theta.max((at_theta.norm() - 1.0).abs());
            if k < 20 {
                for &t in &grid {
                    let w0 = witness_f(&h, &spec, C64::new(0.0, t)).unwrap();
                    let w1 = witness_f(&h, &spec, C64::new(1.0, t)).unwrap();
                    worst_oracle = worst_oracle
                        .max((support::field_schatten_norm(&w0, p0) - 1.0).abs())
                        .max((support::field_schatten_norm(&w1, p1) - 1.0).abs());
                }
            }
        }
    }
    verdict(
        7,
        "complex interpolation witnesses",
        worst_boundary <= 1e-9 && worst_oracle <= 1e-9 && worst_strip <= 1.0 + 1e-9 && worst_theta <= 1e-8 && failed == 0,
        format!(
            "boundary norm defect {worst_boundary:.1e} (oracle {worst_oracle:.1e}, tol 1e-9), \
             max strip modulus {worst_strip:.12}, |h(θ)| defect {worst_theta:.1e} (tol 1e-8)"
        ),
    );
}

#[test]
fn criterion_08_kadec_klee() {
    let m = model("su2:3");
    let (mut failed, mut negative, mut worst_final) = (0, 0, 0.0_f64);
    for family in Family::ALL {
        for &pv in &[1.5_f64, 3.0] {
            for k in 0..20u64 {
                let seed = mix_seed(8, &[family as u64, pv.to_bits(), k]);
                let h = unit(field(&m, seed), p(pv), family);
                let d = unit(field(&m, seed ^ 1), p(pv), family);
                for n in 1..=50u32 {
                    let hn = h.add(&d.scale_real(1.0 / n as f64)).unwrap();
                    let r = kadec_klee_gap(&hn, &h, p(pv), family).unwrap();
                    failed += usize::from(!r.passed);
                    negative += usize::from(r.rhs < -r.tol);
                    if n == 50 {
                        worst_final = worst_final.max(r.rhs);
                    }
                }
            }
        }
    }
    verdict(
        8,
        "Kadec-Klee gap",
        failed == 0 && negative == 0 && worst_final < 1e-3,
        format!("{failed} bound failures, {negative} negative gaps, largest gap at n=50: {worst_final:.2e} (limit 1e-3)"),
    );
}

#[test]
fn criterion_09_determinism() {
    let mut mismatched = Vec::new();
    for kind in SuiteKind::REGISTRY.into_iter().chain([SuiteKind::All]) {
        let mut config = SuiteConfig::new(kind, resolve_dual("s3").unwrap(), vec![p(1.5), p(3.0)]);
        config.family = FamilyChoice::Both;
        config.trials = 2;
        config.seed = 2024;
        let a = render_reports(&run_suite(&config).unwrap(), ReportFormat::Json).unwrap();
        let b = render_reports(&run_suite(&config).unwrap(), ReportFormat::Json).unwrap();
        if a != b {
            mismatched.push(kind.as_str());
        }
    }
    verdict(
        9,
        "determinism",
        mismatched.is_empty(),
        format!("{} suites rerun, byte-identical JSON except {mismatched:?}", SuiteKind::REGISTRY.len() + 1),
    );
}

fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    let data = (0..rows * cols).map(|_| complex_normal(&mut rng)).collect();
    CMatrix::from_vec(rows, cols, data).unwrap()
}

fn random_psd(n: usize, seed: u64) -> CMatrix {
    let g = random_matrix(n, n, seed);
    &g.adjoint() * &g
}

#[test]
fn criterion_10_oracles() {
    let exponents = [1.0, 1.5, 2.0, 3.0, 4.5, f64::INFINITY];
    let mut rng = rng_from_seed(10);
    let mut worst_sch = 0.0_f64;
    for k in 0..500u64 {
        let n = rng.random_range(1..=6);
        let a = random_matrix(n, n, mix_seed(10, &[k]));
        let pv = exponents[k as usize % exponents.len()];
        worst_sch = worst_sch.max(rel_err(schatten_norm(&a, p(pv)).unwrap(), support::schatten_norm(&a, pv)));
    }

    let m = model("s3");
    let (mut worst_rad, mut counts_ok) = (0.0_f64, true);
    for k in 0..60u64 {
        let n = 1 + (k % 8) as usize;
        let pv = [1.3, 2.0, 3.5][k as usize % 3];
        let r = [1.0, 2.0, 3.0][(k / 3) as usize % 3];
        let family = Family::ALL[k as usize % 2];
        let fields: Vec<Field> = (0..n as u64).map(|j| field(&m, mix_seed(11, &[k, j]))).collect();
        let fast = rademacher_average(&fields, p(pv), family, r).unwrap();
        let (slow, visited) =
            support::rademacher_by_enumeration(&fields, |f| family_norm(f, p(pv), family).unwrap(), r);
        counts_ok &= visited == 1 << n;
        worst_rad = worst_rad.max(rel_err(fast, slow));
    }

    let (mut worst_fact_a, mut cyc_failed) = (0.0_f64, 0);
    for k in 0..500u64 {
        let n = 1 + (k % 6) as usize;
        let a = random_psd(n, mix_seed(12, &[k, 0]));
        let b = random_psd(n, mix_seed(12, &[k, 1]));
        let s = if k % 2 == 0 { 0.75 } else { 1.5 };
        let lib_ab = trace_power_of_product(&a, &b, s).unwrap();
        let lib_ba = trace_power_of_product(&b, &a, s).unwrap();
        worst_fact_a = worst_fact_a
            .max(rel_err(lib_ab, support::trace_power_of_product(&a, &b, s)))
            .max(rel_err(lib_ba, support::trace_power_of_product(&b, &a, s)));
        cyc_failed += usize::from(!trace_cyclicity_check(&a, &b, s).unwrap().passed);
    }

    // sanity on the root finder itself: a Hermitian matrix with known spectrum
    let known = CMatrix::from_real_diag(&[3.0, -1.0, 0.5]);
    let mut spec: Vec<f64> = support::eigenvalues(&support::dense(&known)).iter().map(|z| z.re).collect();
    spec.sort_by(f64::total_cmp);
    let root_ok = spec.iter().zip([-1.0, 0.5, 3.0]).all(|(a, b)| (a - b).abs() < 1e-12);

    verdict(
        10,
        "oracle equivalences",
        worst_sch <= 1e-9 && worst_rad <= 1e-11 && counts_ok && worst_fact_a <= 1e-9 && cyc_failed == 0 && root_ok,
        format!(
            "schatten vs trace-power {worst_sch:.1e} (tol 1e-9, 500 matrices); rademacher vs enumerator \
             {worst_rad:.1e} (tol 1e-11, pattern counts {}); trace cyclicity {worst_fact_a:.1e} (tol 1e-9, 500 PSD pairs)",
            if counts_ok { "exact" } else { "WRONG" }
        ),
    );
}
