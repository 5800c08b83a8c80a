//! Named verification suites and report emission.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dualmodel::{random_field, DualModel, Field, FieldDistribution, Preset};
use crate::duality::{dual_norm_via_search, extremizer_check};
use crate::error::{Error, Result};
use crate::inequalities::{
    clarkson_check, default_eps_bins, default_smoothness_grid, kadec_klee_gap, modulus_convexity_sample,
    modulus_smoothness_sample, two_point_check, type_cotype_check, ModulusEstimate, ModulusKind,
};
use crate::interpolation::{default_t_grid, interp_norm_consistency, three_lines_check, InterpSpec};
use crate::norms::{adjoint_norm_check, embedding_check, family_norm, holder_check, lp_sch_norm, ExponentP, Family};
use crate::report::{digest_inputs, CheckReport, DEFAULT_TOL};
use crate::rng::mix_seed;

/// Moduli draws per trial.
pub const MODULI_SAMPLES_PER_TRIAL: usize = 1000;
/// Fields per type/cotype draw.
pub const TYPE_COTYPE_FIELDS: usize = 5;
/// Random unit functionals tried per duality draw.
pub const DUALITY_SEARCH_TRIALS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    Norms,
    Holder,
    Adjoint,
    Duality,
    Interpolation,
    Clarkson,
    TwoPoint,
    Moduli,
    TypeCotype,
    KadecKlee,
    All,
}

impl SuiteKind {
    /// Every concrete suite, in the order `All` runs them.
    pub const REGISTRY: [SuiteKind; 10] = [
        SuiteKind::Norms,
        SuiteKind::Holder,
        SuiteKind::Adjoint,
        SuiteKind::Duality,
        SuiteKind::Interpolation,
        SuiteKind::Clarkson,
        SuiteKind::TwoPoint,
        SuiteKind::Moduli,
        SuiteKind::TypeCotype,
        SuiteKind::KadecKlee,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteKind::Norms => "norms",
            SuiteKind::Holder => "holder",
            SuiteKind::Adjoint => "adjoint",
            SuiteKind::Duality => "duality",
            SuiteKind::Interpolation => "interpolation",
            SuiteKind::Clarkson => "clarkson",
            SuiteKind::TwoPoint => "two_point",
            SuiteKind::Moduli => "moduli",
            SuiteKind::TypeCotype => "type_cotype",
            SuiteKind::KadecKlee => "kadec_klee",
            SuiteKind::All => "all",
        }
    }

    /// Stable id fed to the seed mixer.
    fn seed_id(self) -> u64 {
        match self {
            SuiteKind::Norms => 1,
            SuiteKind::Holder => 2,
            SuiteKind::Adjoint => 3,
            SuiteKind::Duality => 4,
            SuiteKind::Interpolation => 5,
            SuiteKind::Clarkson => 6,
            SuiteKind::TwoPoint => 7,
            SuiteKind::Moduli => 8,
            SuiteKind::TypeCotype => 9,
            SuiteKind::KadecKlee => 10,
            SuiteKind::All => 0,
        }
    }

    /// Whether the suite has checks for `p`.
    pub fn accepts(self, p: ExponentP) -> bool {
        match self {
            SuiteKind::Norms | SuiteKind::Holder | SuiteKind::Adjoint | SuiteKind::All => true,
            SuiteKind::Duality => p.is_finite(),
            _ => p.is_interior(),
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        SuiteKind::REGISTRY
            .into_iter()
            .chain([SuiteKind::All])
            .find(|k| k.as_str() == t)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

/// Family selection for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyChoice {
    #[default]
    Sch,
    Hs,
    Both,
}

impl FamilyChoice {
    pub fn families(self) -> &'static [Family] {
        match self {
            FamilyChoice::Sch => &[Family::Sch],
            FamilyChoice::Hs => &[Family::Hs],
            FamilyChoice::Both => &Family::ALL,
        }
    }
}

impl FromStr for FamilyChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sch" => Ok(FamilyChoice::Sch),
            "hs" => Ok(FamilyChoice::Hs),
            "both" => Ok(FamilyChoice::Both),
            _ => Err(Error::Config(format!("unknown family '{s}', expected sch, hs or both"))),
        }
    }
}

/// Loads a dual model from a preset string or, failing that, a JSON file.
pub fn resolve_dual(spec: &str) -> Result<DualModel> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        return DualModel::load(path);
    }
    spec.parse::<Preset>()?.build()
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: SuiteKind,
    pub dual: Arc<DualModel>,
    pub p_list: Vec<ExponentP>,
    pub family: FamilyChoice,
    pub trials: usize,
    pub seed: u64,
    /// Replaces the default relative tolerance; checks with looser built-in
    /// tolerances are scaled by the same factor.
    pub tol_override: Option<f64>,
}

impl SuiteConfig {
    pub fn new(suite: SuiteKind, dual: DualModel, p_list: Vec<ExponentP>) -> Self {
        Self {
            suite,
            dual: Arc::new(dual),
            p_list,
            family: FamilyChoice::default(),
            trials: 1,
            seed: 0,
            tol_override: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.p_list.is_empty() {
            return Err(Error::Config("p list must not be empty".into()));
        }
        if let Some(t) = self.tol_override {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Config(format!("tolerance {t} must be positive and finite")));
            }
        }
        if self.suite != SuiteKind::All && !self.p_list.iter().any(|&p| self.suite.accepts(p)) {
            return Err(Error::Config(format!(
                "suite '{}' has no checks for p in [{}]",
                self.suite,
                self.p_list.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
        Ok(())
    }
}

/// Runs the configured suite and returns its reports sorted by
/// `(suite, case_id)`. Exponents a suite does not cover are skipped.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let kinds: &[SuiteKind] = if config.suite == SuiteKind::All {
        &SuiteKind::REGISTRY
    } else {
        std::slice::from_ref(&config.suite)
    };
    let mut reports = Vec::new();
    for &kind in kinds {
        let runner = Runner { config, kind };
        for &p in config.p_list.iter().filter(|&&p| kind.accepts(p)) {
            runner.run(p, &mut reports)?;
        }
    }
    if let Some(t) = config.tol_override {
        for r in &mut reports {
            r.rescale_tolerance(t / DEFAULT_TOL);
        }
    }
    reports.sort_by(|a, b| (&a.suite, &a.case_id).cmp(&(&b.suite, &b.case_id)));
    Ok(reports)
}

struct Runner<'a> {
    config: &'a SuiteConfig,
    kind: SuiteKind,
}

impl Runner<'_> {
    fn seed(&self, k: usize) -> u64 {
        mix_seed(self.config.seed, &[self.kind.seed_id(), k as u64])
    }

    fn field(&self, k: usize, slot: u64) -> Field {
        random_field(&self.config.dual, mix_seed(self.seed(k), &[slot]), FieldDistribution::Ginibre)
    }

    fn unit_field(&self, k: usize, slot: u64, p: ExponentP, family: Family) -> Result<Field> {
        let f = self.field(k, slot);
        let n = family_norm(&f, p, family)?;
        Ok(f.scale_real(1.0 / n))
    }

    fn push(&self, out: &mut Vec<CheckReport>, report: CheckReport, case: String) {
        out.push(report.with_suite(self.kind.as_str(), case));
    }

    fn run(&self, p: ExponentP, out: &mut Vec<CheckReport>) -> Result<()> {
        let trials = self.config.trials;
        let families = self.config.family.families();
        match self.kind {
            SuiteKind::Norms => {
                for k in 0..trials {
                    let r = embedding_check(&self.field(k, 0), p)?;
                    self.push(out, r, case(None, p, k));
                }
            }
            SuiteKind::Holder => {
                let q = p.conjugate();
                for k in 0..trials {
                    let r = holder_check(&self.field(k, 0), &self.field(k, 1), p, q)?;
                    self.push(out, r, case(None, p, k));
                }
            }
            SuiteKind::Adjoint => {
                for &fam in families {
                    for k in 0..trials {
                        let r = adjoint_norm_check(&self.field(k, 0), p, fam)?;
                        self.push(out, r, case(Some(fam), p, k));
                    }
                }
            }
            SuiteKind::Duality => {
                for k in 0..trials {
                    let h = self.field(k, 0);
                    let r = extremizer_check(&h, p)?;
                    self.push(out, r, format!("{}/extremizer", case(None, p, k)));
                    let norm = lp_sch_norm(&h, p)?;
                    let found = dual_norm_via_search(&h, p, DUALITY_SEARCH_TRIALS, mix_seed(self.seed(k), &[1]), false)?;
                    let r = CheckReport::inequality("duality_pairing_bound", p, found, norm, DEFAULT_TOL)
                        .with_digest(digest_inputs("dual_search", &[&h], &[p.value(), DUALITY_SEARCH_TRIALS as f64]));
                    self.push(out, r, format!("{}/search", case(None, p, k)));
                }
            }
            SuiteKind::Interpolation => {
                let spec = InterpSpec::standard_for(p)?;
                let grid = default_t_grid();
                for k in 0..trials {
                    let h = self.field(k, 0);
                    let f = self.field(k, 1);
                    let r = three_lines_check(&h, &f, &spec, &grid)?;
                    self.push(out, r, format!("{}/three_lines", case(None, p, k)));
                    let r = interp_norm_consistency(&h, &spec, &grid)?;
                    self.push(out, r, format!("{}/consistency", case(None, p, k)));
                }
            }
            SuiteKind::Clarkson => {
                for &fam in families {
                    for k in 0..trials {
                        let r = clarkson_check(&self.field(k, 0), &self.field(k, 1), p, fam)?;
                        self.push(out, r, case(Some(fam), p, k));
                    }
                }
            }
            SuiteKind::TwoPoint => {
                for &fam in families {
                    for k in 0..trials {
                        let r = two_point_check(&self.field(k, 0), &self.field(k, 1), p, fam)?.report;
                        self.push(out, r, case(Some(fam), p, k));
                    }
                }
            }
            SuiteKind::Moduli => {
                let samples = trials * MODULI_SAMPLES_PER_TRIAL;
                let seed = self.seed(0);
                for &fam in families {
                    let eps = modulus_convexity_sample(&self.config.dual, p, fam, &default_eps_bins(), samples, seed)?;
                    let rho = modulus_smoothness_sample(
                        &self.config.dual,
                        p,
                        fam,
                        &default_smoothness_grid(),
                        samples,
                        mix_seed(seed, &[1]),
                    )?;
                    for est in eps.iter().chain(&rho) {
                        if let Some(r) = self.modulus_report(est, p, fam, samples) {
                            let tag = match est.kind {
                                ModulusKind::ConvexityLower => "convexity/eps",
                                ModulusKind::SmoothnessUpper => "smoothness/t",
                            };
                            self.push(out, r, format!("{}/p={p}/{tag}={:.2}", fam.as_str(), est.epsilon_or_t));
                        }
                    }
                }
            }
            SuiteKind::TypeCotype => {
                for &fam in families {
                    for k in 0..trials {
                        let fields: Vec<Field> = (0..TYPE_COTYPE_FIELDS as u64).map(|j| self.field(k, j)).collect();
                        let tc = type_cotype_check(&fields, p, fam)?;
                        self.push(out, tc.lower, format!("{}/lower", case(Some(fam), p, k)));
                        self.push(out, tc.upper, format!("{}/upper", case(Some(fam), p, k)));
                    }
                }
            }
            SuiteKind::KadecKlee => {
                for &fam in families {
                    for k in 0..trials {
                        let h = self.unit_field(k, 0, p, fam)?;
                        let d = self.unit_field(k, 1, p, fam)?;
                        let hn = h.add(&d.scale_real(1.0 / (k + 1) as f64))?;
                        let r = kadec_klee_gap(&hn, &h, p, fam)?;
                        self.push(out, r, case(Some(fam), p, k));
                    }
                }
            }
            SuiteKind::All => unreachable!("expanded by run_suite"),
        }
        Ok(())
    }

    fn modulus_report(&self, est: &ModulusEstimate, p: ExponentP, fam: Family, samples: usize) -> Option<CheckReport> {
        let kind = match est.kind {
            ModulusKind::ConvexityLower => 0.0,
            ModulusKind::SmoothnessUpper => 1.0,
        };
        let digest = digest_inputs(
            "moduli",
            &[],
            &[
                self.config.seed as f64,
                p.value(),
                fam as u8 as f64,
                kind,
                est.epsilon_or_t,
                samples as f64,
            ],
        );
        Some(est.to_report(p, DEFAULT_TOL)?.with_digest(digest))
    }
}

fn case(family: Option<Family>, p: ExponentP, k: usize) -> String {
    match family {
        Some(f) => format!("{}/p={p}/k={k:06}", f.as_str()),
        None => format!("p={p}/k={k:06}"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Config(format!("unknown report format '{s}'"))),
        }
    }
}

const CSV_HEADER: [&str; 10] = [
    "suite",
    "case_id",
    "p",
    "lhs",
    "rhs",
    "slack",
    "tol",
    "passed",
    "inputs_digest",
    "paper_anchor",
];

/// Serializes reports: a pretty JSON array, or CSV with a header row.
pub fn render_reports(reports: &[CheckReport], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(reports)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for r in reports {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv buffer: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn parse_reports(text: &str, format: ReportFormat) -> Result<Vec<CheckReport>> {
    match format {
        ReportFormat::Json => Ok(serde_json::from_str(text)?),
        ReportFormat::Csv => {
            let mut r = csv::Reader::from_reader(text.as_bytes());
            Ok(r.deserialize().collect::<std::result::Result<Vec<CheckReport>, _>>()?)
        }
    }
}

/// Writes [`render_reports`] output to `path`.
pub fn emit_report(reports: &[CheckReport], format: ReportFormat, path: &Path) -> Result<()> {
    let text = render_reports(reports, format)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
