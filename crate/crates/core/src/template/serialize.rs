//! JSON template files with a version header and a SHA-256 checksum.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coefficients::{FieldDescriptor, FieldElement};
use crate::groebner::QuotientBasis;
use crate::polynomials::{Monomial, MonomialOrder, Polynomial, Ring};
use crate::template::{EliminationTemplate, MonomialPartition, RowRecipe, ShiftSets, Strategy, TemplateError};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionForm {
    pub support: Vec<Monomial>,
    pub coeffs: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RowEntry {
    Shift { gen: usize, shift: Monomial },
    Action { index: usize },
}

/// On-disk layout. Field order is the serialization order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TemplateFile {
    pub version: u64,
    pub field: String,
    pub variables: Vec<String>,
    pub order: String,
    pub strategy: Strategy,
    pub capped: bool,
    pub action: ActionForm,
    pub basis: Vec<Monomial>,
    pub generators: Vec<Vec<Monomial>>,
    pub shifts: Vec<Vec<Monomial>>,
    pub excessive: Vec<Monomial>,
    pub rows: Vec<RowEntry>,
    pub matrix: Vec<Vec<String>>,
    pub action_matrix: Vec<Vec<String>>,
    pub pivot_columns: Vec<usize>,
    pub checksum: String,
}

fn literals(rows: &[Vec<FieldElement>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(FieldElement::to_literal).collect()).collect()
}

fn digest(file: &TemplateFile) -> String {
    let mut unsigned = file.clone();
    unsigned.checksum.clear();
    let bytes = serde_json::to_vec(&unsigned).expect("template serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn corrupt(msg: impl Into<String>) -> TemplateError {
    TemplateError::CorruptTemplate(msg.into())
}

impl EliminationTemplate {
    pub fn to_file(&self) -> TemplateFile {
        let mut file = TemplateFile {
            version: FORMAT_VERSION,
            field: self.ring.field().to_string(),
            variables: self.ring.variables().to_vec(),
            order: self.ring.order().name(),
            strategy: self.strategy,
            capped: self.capped,
            action: ActionForm {
                support: self.action.support(),
                coeffs: self.action.terms().iter().map(|(_, c)| c.to_literal()).collect(),
            },
            basis: self.basis.monomials.clone(),
            generators: self.generator_supports.clone(),
            shifts: self.shifts.per_generator.clone(),
            excessive: self.partition.excessive.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| match r {
                    RowRecipe::Shift { gen, shift } => RowEntry::Shift { gen: *gen, shift: shift.clone() },
                    RowRecipe::Action { index } => RowEntry::Action { index: *index },
                })
                .collect(),
            matrix: literals(&self.matrix),
            action_matrix: literals(&self.action_matrix),
            pivot_columns: self.pivot_columns.clone(),
            checksum: String::new(),
        };
        file.checksum = digest(&file);
        file
    }

    /// Pretty-printed JSON; identical templates give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("template serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, TemplateError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| corrupt(e.to_string()))?;
        let version = value.get("version").and_then(serde_json::Value::as_u64).ok_or_else(|| corrupt("missing version"))?;
        if version != FORMAT_VERSION {
            return Err(TemplateError::FormatVersionMismatch { found: version, expected: FORMAT_VERSION });
        }
        let file: TemplateFile = serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))?;
        if digest(&file) != file.checksum {
            return Err(corrupt("checksum mismatch"));
        }
        Self::from_file(file)
    }

    pub fn from_file(file: TemplateFile) -> Result<Self, TemplateError> {
        let field: FieldDescriptor = file.field.parse().map_err(|_| corrupt(format!("field `{}`", file.field)))?;
        let order: MonomialOrder = file.order.parse().map_err(|_| corrupt(format!("order `{}`", file.order)))?;
        let ring = Ring::new(&file.variables, field, order).map_err(|e| corrupt(e.to_string()))?;
        let n = ring.nslots();
        let check = |m: &Monomial| if m.nvars() == n { Ok(()) } else { Err(corrupt("exponent vector length")) };
        let all_monos = file
            .basis
            .iter()
            .chain(file.excessive.iter())
            .chain(file.action.support.iter())
            .chain(file.generators.iter().flatten())
            .chain(file.shifts.iter().flatten());
        for m in all_monos {
            check(m)?;
        }
        let r = file.generators.len();
        let d = file.basis.len();
        if file.shifts.len() != r || file.action.support.len() != file.action.coeffs.len() {
            return Err(corrupt("inconsistent lengths"));
        }
        let parse_rows = |rows: &[Vec<String>], width: usize| -> Result<Vec<Vec<FieldElement>>, TemplateError> {
            rows.iter()
                .map(|row| {
                    if row.len() != width {
                        return Err(corrupt("row width"));
                    }
                    row.iter().map(|s| field.parse_element(s).map_err(|e| corrupt(e.to_string()))).collect()
                })
                .collect()
        };
        let ncols = file.excessive.len() + d;
        let matrix = parse_rows(&file.matrix, ncols)?;
        let action_matrix = parse_rows(&file.action_matrix, d)?;
        if matrix.len() != file.rows.len() || action_matrix.len() != d {
            return Err(corrupt("matrix dimensions"));
        }
        if file.pivot_columns.windows(2).any(|w| w[0] >= w[1]) || file.pivot_columns.iter().any(|&c| c >= file.excessive.len()) {
            return Err(corrupt("pivot columns"));
        }
        let rows = file
            .rows
            .into_iter()
            .map(|e| match e {
                RowEntry::Shift { gen, shift } if gen < r => {
                    check(&shift)?;
                    Ok(RowRecipe::Shift { gen, shift })
                }
                RowEntry::Action { index } if index < d => Ok(RowRecipe::Action { index }),
                _ => Err(corrupt("row recipe out of range")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let coeffs = file
            .action
            .coeffs
            .iter()
            .map(|s| field.parse_element(s).map_err(|e| corrupt(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let action = Polynomial::from_terms(&ring, file.action.support.into_iter().zip(coeffs).collect());
        Ok(EliminationTemplate {
            ring,
            action,
            basis: QuotientBasis { monomials: file.basis.clone() },
            strategy: file.strategy,
            capped: file.capped,
            generator_supports: file.generators,
            shifts: ShiftSets { per_generator: file.shifts },
            partition: MonomialPartition { basic: file.basis, excessive: file.excessive },
            rows,
            matrix,
            action_matrix,
            pivot_columns: file.pivot_columns,
        })
    }
}
