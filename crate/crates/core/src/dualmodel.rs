//! Finite truncations of a unitary dual and matrix-valued fields over them.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, C64};
use crate::rng;

/// One representation class: a label and the dimension of its space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualEntry {
    pub label: String,
    pub dim: usize,
}

/// Ordered, finite list of representation classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DualModel {
    name: String,
    entries: Vec<DualEntry>,
}

impl<'de> Deserialize<'de> for DualModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            name: String,
            entries: Vec<DualEntry>,
        }
        let raw = Raw::deserialize(d)?;
        DualModel::new(raw.name, raw.entries).map_err(serde::de::Error::custom)
    }
}

impl DualModel {
    pub fn new(name: impl Into<String>, entries: Vec<DualEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidModel("no entries".into()));
        }
        let mut seen = HashSet::new();
        for e in &entries {
            if e.dim == 0 {
                return Err(Error::InvalidModel(format!("entry '{}' has dimension 0", e.label)));
            }
            if e.dim > matcore::MAX_DIM {
                return Err(Error::InvalidModel(format!(
                    "entry '{}' has dimension {} above {}",
                    e.label,
                    e.dim,
                    matcore::MAX_DIM
                )));
            }
            if !seen.insert(e.label.as_str()) {
                return Err(Error::InvalidModel(format!("duplicate label '{}'", e.label)));
            }
        }
        Ok(Self {
            name: name.into(),
            entries,
        })
    }

    /// Model with generated labels `xi0, xi1, ...`.
    pub fn from_dims(name: impl Into<String>, dims: &[usize]) -> Result<Self> {
        let entries = dims
            .iter()
            .enumerate()
            .map(|(i, &dim)| DualEntry {
                label: format!("xi{i}"),
                dim,
            })
            .collect();
        Self::new(name, entries)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn entries(&self) -> &[DualEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.dim)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}

/// Built-in dual models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    /// `n` one-dimensional characters of a torus.
    Torus(usize),
    /// Irreducible representations of SU(2) of dimension 1 through `max_dim`.
    Su2Trunc(usize),
    /// The symmetric group on three letters.
    S3,
    Custom(Vec<usize>),
}

impl Preset {
    pub fn build(&self) -> Result<DualModel> {
        match self {
            Preset::Torus(n) => {
                if *n == 0 {
                    return Err(Error::InvalidModel("torus needs at least one entry".into()));
                }
                let half = (*n as i64 - 1) / 2;
                let entries = (0..*n as i64)
                    .map(|k| DualEntry {
                        label: format!("e{}", k - half),
                        dim: 1,
                    })
                    .collect();
                DualModel::new(format!("torus:{n}"), entries)
            }
            Preset::Su2Trunc(max_dim) => {
                if *max_dim == 0 {
                    return Err(Error::InvalidModel("su2 truncation needs max_dim >= 1".into()));
                }
                let entries = (1..=*max_dim)
                    .map(|d| DualEntry {
                        label: spin_label(d),
                        dim: d,
                    })
                    .collect();
                DualModel::new(format!("su2:{max_dim}"), entries)
            }
            Preset::S3 => DualModel::new(
                "s3",
                vec![
                    DualEntry {
                        label: "trivial".into(),
                        dim: 1,
                    },
                    DualEntry {
                        label: "sign".into(),
                        dim: 1,
                    },
                    DualEntry {
                        label: "standard".into(),
                        dim: 2,
                    },
                ],
            ),
            Preset::Custom(dims) => {
                let name = format!(
                    "custom:{}",
                    dims.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                );
                DualModel::from_dims(name, dims)
            }
        }
    }
}

fn spin_label(dim: usize) -> String {
    let twice_spin = dim - 1;
    if twice_spin.is_multiple_of(2) {
        format!("j={}", twice_spin / 2)
    } else {
        format!("j={twice_spin}/2")
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Accepts `torus:N`, `su2:N` (or `su2_trunc:N`), `s3` and `custom:d1,d2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s, None),
        };
        let count = |a: Option<&str>| -> Result<usize> {
            let a = a.ok_or_else(|| Error::InvalidModel(format!("preset '{kind}' needs a size, e.g. '{kind}:4'")))?;
            a.parse::<usize>()
                .map_err(|_| Error::InvalidModel(format!("bad size '{a}' in preset '{s}'")))
        };
        match kind.to_ascii_lowercase().as_str() {
            "torus" => Ok(Preset::Torus(count(arg)?)),
            "su2" | "su2_trunc" => Ok(Preset::Su2Trunc(count(arg)?)),
            "s3" if arg.is_none() => Ok(Preset::S3),
            "custom" => {
                let a = arg.ok_or_else(|| Error::InvalidModel("custom preset needs dims".into()))?;
                let dims = a
                    .split(',')
                    .map(|d| {
                        d.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::InvalidModel(format!("bad dimension '{d}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Preset::Custom(dims))
            }
            _ => Err(Error::InvalidModel(format!("unknown preset '{s}'"))),
        }
    }
}

/// Convenience wrapper: parse and build a preset.
pub fn preset_dual(kind: &Preset) -> Result<DualModel> {
    kind.build()
}

/// Sampling law for [`random_field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldDistribution {
    /// i.i.d. standard complex normal entries.
    #[default]
    Ginibre,
    /// `(A + A*) / 2` of a Ginibre draw.
    Hermitian,
    /// `A* A` of a Ginibre draw.
    Psd,
}

impl FromStr for FieldDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ginibre" => Ok(Self::Ginibre),
            "hermitian" => Ok(Self::Hermitian),
            "psd" => Ok(Self::Psd),
            _ => Err(Error::InvalidParameter(format!("unknown distribution '{s}'"))),
        }
    }
}

/// One square matrix per entry of a dual model.
#[derive(Clone, PartialEq)]
pub struct Field {
    model: Arc<DualModel>,
    blocks: Vec<CMatrix>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("model", &self.model.name())
            .field("blocks", &self.blocks)
            .finish()
    }
}

impl Field {
    pub fn new(model: Arc<DualModel>, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != model.len() {
            return Err(Error::InvalidField(format!(
                "{} blocks for a model with {} entries",
                blocks.len(),
                model.len()
            )));
        }
        for (b, e) in blocks.iter().zip(model.entries()) {
            if b.shape() != (e.dim, e.dim) {
                return Err(Error::InvalidField(format!(
                    "block for '{}' is {}x{}, expected {}x{}",
                    e.label,
                    b.rows(),
                    b.cols(),
                    e.dim,
                    e.dim
                )));
            }
        }
        Ok(Self { model, blocks })
    }

    pub fn zeros(model: Arc<DualModel>) -> Self {
        let blocks = model.dims().map(|d| CMatrix::zeros(d, d)).collect();
        Self { model, blocks }
    }

    pub fn identity(model: Arc<DualModel>) -> Self {
        let blocks = model.dims().map(CMatrix::identity).collect();
        Self { model, blocks }
    }

    pub fn model(&self) -> &Arc<DualModel> {
        &self.model
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    /// `(dim, block)` pairs in model order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &CMatrix)> {
        self.model.dims().zip(&self.blocks)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.as_slice().iter().all(|z| *z == C64::new(0.0, 0.0)))
    }

    /// Applies `f` to every block, keeping the model.
    pub fn map_blocks<F>(&self, f: F) -> Result<Self>
    where
        F: FnMut(&CMatrix) -> Result<CMatrix>,
    {
        let blocks = self.blocks.iter().map(f).collect::<Result<Vec<_>>>()?;
        Field::new(self.model.clone(), blocks)
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self {
            model: self.model.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(alpha)).collect(),
        }
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        self.scale(C64::new(alpha, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            model: self.model.clone(),
            blocks: self.blocks.iter().map(CMatrix::adjoint).collect(),
        }
    }

    pub(crate) fn require_same_model(&self, other: &Field) -> Result<()> {
        if Arc::ptr_eq(&self.model, &other.model) || *self.model == *other.model {
            Ok(())
        } else {
            Err(Error::ModelMismatch {
                left: self.model.name().to_string(),
                right: other.model.name().to_string(),
            })
        }
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        field_lincomb(C64::new(1.0, 0.0), self, C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        field_lincomb(C64::new(1.0, 0.0), self, C64::new(-1.0, 0.0), other)
    }

    pub fn to_json(&self) -> Result<String> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.to_rows()
                    .into_iter()
                    .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        let wire = FieldWire {
            model: self.model.name().to_string(),
            blocks,
        };
        Ok(serde_json::to_string(&wire)?)
    }

    /// Decodes a field written by [`Field::to_json`]; the stored model name
    /// must match `model`.
    pub fn from_json(s: &str, model: Arc<DualModel>) -> Result<Field> {
        let wire: FieldWire = serde_json::from_str(s)?;
        if wire.model != model.name() {
            return Err(Error::ModelMismatch {
                left: wire.model,
                right: model.name().to_string(),
            });
        }
        let blocks = wire
            .blocks
            .into_iter()
            .map(|rows| {
                let rows: Vec<Vec<C64>> = rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect())
                    .collect();
                CMatrix::from_rows(&rows).map_err(Error::from)
            })
            .collect::<Result<Vec<_>>>()?;
        Field::new(model, blocks)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldWire {
    model: String,
    blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

/// Deterministic random field: same `(model, seed, dist)` gives the same bits.
pub fn random_field(model: &Arc<DualModel>, seed: u64, dist: FieldDistribution) -> Field {
    let mut rng = rng::rng_from_seed(seed);
    let blocks = model
        .dims()
        .map(|d| {
            let g = rng::ginibre_matrix(&mut rng, d);
            match dist {
                FieldDistribution::Ginibre => g,
                FieldDistribution::Hermitian => g.hermitian_part().expect("square"),
                FieldDistribution::Psd => &g.adjoint() * &g,
            }
        })
        .collect();
    Field {
        model: model.clone(),
        blocks,
    }
}

pub fn field_adjoint(h: &Field) -> Field {
    h.adjoint()
}

/// Blockwise `|H(ξ)| = (H(ξ)* H(ξ))^{1/2}`.
pub fn field_abs(h: &Field) -> Result<Field> {
    h.map_blocks(|b| Ok(matcore::matabs(b)?))
}

pub fn field_lincomb(alpha: C64, h1: &Field, beta: C64, h2: &Field) -> Result<Field> {
    h1.require_same_model(h2)?;
    let blocks = h1
        .blocks
        .iter()
        .zip(&h2.blocks)
        .map(|(a, b)| a.lincomb(alpha, b, beta).map_err(Error::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(Field {
        model: h1.model.clone(),
        blocks,
    })
}

/// Blockwise matrix product.
pub fn field_product(h1: &Field, h2: &Field) -> Result<Field> {
    h1.require_same_model(h2)?;
    let blocks = h1
        .blocks
        .iter()
        .zip(&h2.blocks)
        .map(|(a, b)| a.matmul(b).map_err(Error::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(Field {
        model: h1.model.clone(),
        blocks,
    })
}
