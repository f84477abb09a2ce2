//! Offline construction of elimination templates.

mod serialize;
mod strategy;

pub use serialize::{FORMAT_VERSION, TemplateFile};
pub use strategy::{h_default, h_greedy, h_larsson, HMatrix, Strategy, StrategyContext};

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::coefficients::{CoeffError, FieldElement};
use crate::groebner::{
    action_matrix, buchberger_tracked, quotient_basis, ActionMatrix, GroebnerError, QuotientBasis, SyzygyBasis,
    TrackedBasis,
};
use crate::polynomials::{Monomial, PolyError, Polynomial, RingRef};
use crate::solver::eliminate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("action form is zero")]
    ZeroActionForm,
    #[error("template format version {found} is not supported (expected {expected})")]
    FormatVersionMismatch { found: u64, expected: u64 },
    #[error("corrupt template: {0}")]
    CorruptTemplate(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Monomials multiplying each generator, read off the columns of `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSets {
    /// One strictly decreasing list per generator.
    pub per_generator: Vec<Vec<Monomial>>,
}

impl ShiftSets {
    pub fn from_h(h: &HMatrix, ring: &RingRef, ngens: usize) -> Self {
        let mut sets: Vec<BTreeSet<Monomial>> = vec![BTreeSet::new(); ngens];
        for row in &h.entries {
            for (k, p) in row.iter().enumerate() {
                sets[k].extend(p.support());
            }
        }
        let ord = ring.order();
        let per_generator = sets
            .into_iter()
            .map(|s| {
                let mut v: Vec<Monomial> = s.into_iter().collect();
                v.sort_by(|a, b| ord.compare(b, a));
                v
            })
            .collect();
        ShiftSets { per_generator }
    }

    /// `#S(H)`, the number of shifted generator rows.
    pub fn total(&self) -> usize {
        self.per_generator.iter().map(Vec::len).sum()
    }
}

/// Basic and excessive monomials; the reducible block `s B` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPartition {
    pub basic: Vec<Monomial>,
    pub excessive: Vec<Monomial>,
}

impl MonomialPartition {
    pub fn new(shifts: &ShiftSets, generators: &[Polynomial], action: &Polynomial, basis: &QuotientBasis) -> Self {
        let ring = action.ring();
        let mut all: BTreeSet<Monomial> = BTreeSet::new();
        for (g, set) in generators.iter().zip(&shifts.per_generator) {
            for beta in set {
                all.extend(g.support().iter().map(|m| m.mul(beta)));
            }
        }
        for b in &basis.monomials {
            all.extend(action.mul_monomial(b).support());
        }
        for b in &basis.monomials {
            all.remove(b);
        }
        let mut excessive: Vec<Monomial> = all.into_iter().collect();
        let ord = ring.order();
        excessive.sort_by(|a, b| ord.compare(b, a));
        MonomialPartition { basic: basis.monomials.clone(), excessive }
    }

    /// Template columns: excessive block then basic block.
    pub fn columns(&self) -> Vec<Monomial> {
        self.excessive.iter().chain(&self.basic).cloned().collect()
    }
}

/// How one template row is produced from generator data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowRecipe {
    /// Coefficients of `shift * f_gen`.
    Shift { gen: usize, shift: Monomial },
    /// Coefficients of `-f * b_index`.
    Action { index: usize },
}

/// An immutable elimination template.
#[derive(Debug, Clone)]
pub struct EliminationTemplate {
    pub ring: RingRef,
    /// Action form with its construction coefficients.
    pub action: Polynomial,
    pub basis: QuotientBasis,
    pub strategy: Strategy,
    pub capped: bool,
    /// Monomial support of each generator at construction time.
    pub generator_supports: Vec<Vec<Monomial>>,
    pub shifts: ShiftSets,
    pub partition: MonomialPartition,
    pub rows: Vec<RowRecipe>,
    /// Template matrix over the construction field, columns as in [`MonomialPartition::columns`].
    pub matrix: Vec<Vec<FieldElement>>,
    pub action_matrix: Vec<Vec<FieldElement>>,
    /// Excessive columns that take a pivot in the exact reduction of `matrix`.
    pub pivot_columns: Vec<usize>,
}

impl PartialEq for EliminationTemplate {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring
            && self.action == other.action
            && self.basis == other.basis
            && self.strategy == other.strategy
            && self.capped == other.capped
            && self.generator_supports == other.generator_supports
            && self.shifts == other.shifts
            && self.partition == other.partition
            && self.rows == other.rows
            && self.matrix == other.matrix
            && self.action_matrix == other.action_matrix
            && self.pivot_columns == other.pivot_columns
    }
}

impl EliminationTemplate {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.partition.excessive.len() + self.basis.len()
    }

    pub fn columns(&self) -> Vec<Monomial> {
        self.partition.columns()
    }

    pub fn column_index(&self) -> HashMap<Monomial, usize> {
        self.columns().into_iter().enumerate().map(|(i, m)| (m, i)).collect()
    }

    pub fn num_generators(&self) -> usize {
        self.generator_supports.len()
    }

    /// Size of the block formed by the shifted generator rows alone, over the
    /// columns those rows touch.
    pub fn generator_block(&self) -> (usize, usize) {
        let nshift = self.shifts.total();
        let cols = (0..self.ncols()).filter(|&c| self.matrix[..nshift].iter().any(|row| !row[c].is_zero())).count();
        (nshift, cols)
    }

    /// Rows of the three-block form `[E | sB | B]` in which the action rows
    /// `(s - f) b_j` carry an identity in the reducible block.
    pub fn full_matrix(&self) -> Vec<Vec<FieldElement>> {
        let d = self.dimension();
        let ne = self.partition.excessive.len();
        let zero = self.ring.field().zero();
        self.rows
            .iter()
            .zip(&self.matrix)
            .map(|(recipe, row)| {
                let mut out = row[..ne].to_vec();
                out.extend((0..d).map(|k| match recipe {
                    RowRecipe::Action { index } if *index == k => self.ring.field().one(),
                    _ => zero.clone(),
                }));
                out.extend_from_slice(&row[ne..]);
                out
            })
            .collect()
    }
}

/// Intermediate results of the offline pipeline.
pub struct TemplateBuild {
    pub tracked: TrackedBasis,
    /// Only computed for the strategies that search over syzygies.
    pub syzygies: Option<SyzygyBasis>,
    pub action: ActionMatrix,
    pub h: HMatrix,
    pub template: EliminationTemplate,
}

pub fn build_template(generators: &[Polynomial], action: &Polynomial, strategy: Strategy) -> Result<EliminationTemplate, TemplateError> {
    Ok(build_template_detailed(generators, action, strategy)?.template)
}

/// Gröbner basis, standard monomials, action matrix, `H` for the chosen
/// strategy and the assembled template matrix, all over the ring's field.
pub fn build_template_detailed(
    generators: &[Polynomial],
    action: &Polynomial,
    strategy: Strategy,
) -> Result<TemplateBuild, TemplateError> {
    if action.is_zero() {
        return Err(TemplateError::ZeroActionForm);
    }
    let tracked = buchberger_tracked(generators)?;
    if **action.ring() != *tracked.ring {
        return Err(PolyError::RingMismatch.into());
    }
    let basis = quotient_basis(&tracked)?;
    let am = action_matrix(action, &tracked, &basis)?;
    let h0 = h_default(&tracked, &am.cofactors);
    let (h, syzygies) = match strategy {
        Strategy::Default => (h0, None),
        Strategy::Larsson | Strategy::Greedy => {
            let syz = SyzygyBasis::new(&tracked);
            let ctx = StrategyContext { tracked: &tracked, syzygies: &syz, action, basis: &basis };
            let h = if strategy == Strategy::Larsson { h_larsson(&h0, &ctx) } else { h_greedy(&h0, &ctx) };
            (h, Some(syz))
        }
    };
    let template = assemble(&tracked, action, basis, &h, &am)?;
    Ok(TemplateBuild { tracked, syzygies, action: am, h, template })
}

fn assemble(
    tb: &TrackedBasis,
    action: &Polynomial,
    basis: QuotientBasis,
    h: &HMatrix,
    am: &ActionMatrix,
) -> Result<EliminationTemplate, TemplateError> {
    let ring = tb.ring.clone();
    let shifts = ShiftSets::from_h(h, &ring, tb.generators.len());
    let partition = MonomialPartition::new(&shifts, &tb.generators, action, &basis);
    let mut rows = Vec::with_capacity(shifts.total() + basis.len());
    for (gen, set) in shifts.per_generator.iter().enumerate() {
        rows.extend(set.iter().map(|shift| RowRecipe::Shift { gen, shift: shift.clone() }));
    }
    rows.extend((0..basis.len()).map(|index| RowRecipe::Action { index }));
    let mut template = EliminationTemplate {
        ring: ring.clone(),
        action: action.clone(),
        generator_supports: tb.generators.iter().map(Polynomial::support).collect(),
        strategy: h.strategy,
        capped: h.capped,
        shifts,
        partition,
        rows,
        matrix: Vec::new(),
        action_matrix: am.matrix.clone(),
        pivot_columns: Vec::new(),
        basis,
    };
    template.matrix = fill_matrix(&template, &tb.generators, action, ring.field())?;
    let reduced = eliminate::<FieldElement>(template.matrix.clone(), template.shifts.total(), template.partition.excessive.len(), None)
        .map_err(|e| TemplateError::CorruptTemplate(format!("template does not reduce: {e}")))?;
    if reduced.action != template.action_matrix {
        return Err(TemplateError::CorruptTemplate("template reduction disagrees with the action matrix".into()));
    }
    template.pivot_columns = reduced.report.pivot_columns;
    Ok(template)
}

/// Template rows for concrete generator and action-form coefficients, over `field`.
pub(crate) fn fill_matrix(
    t: &EliminationTemplate,
    generators: &[Polynomial],
    action: &Polynomial,
    field: crate::coefficients::FieldDescriptor,
) -> Result<Vec<Vec<FieldElement>>, TemplateError> {
    let index = t.column_index();
    let ncols = t.ncols();
    let place = |row: &mut Vec<FieldElement>, m: &Monomial, c: &FieldElement, negate: bool| -> Result<(), TemplateError> {
        let col = *index.get(m).ok_or_else(|| TemplateError::CorruptTemplate(format!("monomial {m:?} has no column")))?;
        let v = crate::coefficients::convert(c, field)?;
        row[col] = if negate { -&v } else { v };
        Ok(())
    };
    let mut out = Vec::with_capacity(t.rows.len());
    for recipe in &t.rows {
        let mut row = vec![field.zero(); ncols];
        match recipe {
            RowRecipe::Shift { gen, shift } => {
                for (m, c) in generators[*gen].terms() {
                    place(&mut row, &m.mul(shift), c, false)?;
                }
            }
            RowRecipe::Action { index } => {
                for (m, c) in action.terms() {
                    place(&mut row, &m.mul(&t.basis.monomials[*index]), c, true)?;
                }
            }
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::FieldDescriptor;
    use crate::polynomials::{parse_polynomial, MonomialOrder, Ring};

    fn family(a: i64, b: i64) -> (Vec<Polynomial>, Polynomial) {
        let r = Ring::new(&["x", "y"], FieldDescriptor::Rational, MonomialOrder::Lex).unwrap();
        let g = vec![
            parse_polynomial(&format!("x^2 + {a}*y^2 - 1"), &r).unwrap(),
            parse_polynomial(&format!("x*y - {b}"), &r).unwrap(),
        ];
        (g, parse_polynomial("x - 2*y", &r).unwrap())
    }

    #[test]
    fn family_template_shape() {
        let (g, f) = family(2, 3);
        let t = build_template(&g, &f, Strategy::Default).unwrap();
        assert_eq!(t.dimension(), 4);
        assert_eq!(t.shifts.total(), 7);
        assert_eq!(t.nrows(), 11);
        assert_eq!(t.partition.excessive.len(), 7);
        assert_eq!(t.ncols(), 11);
        assert_eq!(t.full_matrix()[0].len(), 15);
        let names = |ms: &[Monomial]| ms.iter().map(|m| t.ring.format_monomial(m)).collect::<Vec<_>>();
        assert_eq!(names(&t.shifts.per_generator[0]), ["y^2", "y"]);
        assert_eq!(names(&t.shifts.per_generator[1]), ["x*y", "x", "y^2", "y", "1"]);
    }

    #[test]
    fn linear_system_template() {
        let r = Ring::new(&["x", "y"], FieldDescriptor::Rational, MonomialOrder::GrevLex).unwrap();
        let g = vec![parse_polynomial("x - 5", &r).unwrap(), parse_polynomial("y + 7", &r).unwrap()];
        let t = build_template(&g, &parse_polynomial("x", &r).unwrap(), Strategy::Default).unwrap();
        assert_eq!(t.dimension(), 1);
        assert_eq!(t.action_matrix, vec![vec![FieldElement::rational(5, 1)]]);
        assert_eq!(t.nrows(), t.shifts.total() + 1);
    }

    #[test]
    fn zero_action_form() {
        let (g, f) = family(2, 3);
        let zero = Polynomial::zero(f.ring());
        assert_eq!(build_template(&g, &zero, Strategy::Default).unwrap_err(), TemplateError::ZeroActionForm);
    }

    #[test]
    fn strategies_share_action_matrix() {
        let (g, f) = family(2, 3);
        let ts: Vec<_> = Strategy::ALL.iter().map(|&s| build_template(&g, &f, s).unwrap()).collect();
        for t in &ts[1..] {
            assert_eq!(t.action_matrix, ts[0].action_matrix);
            assert_eq!(t.basis, ts[0].basis);
            assert_eq!(t.nrows(), t.shifts.total() + t.dimension());
            assert_eq!(t.ncols(), t.partition.excessive.len() + t.dimension());
        }
    }
}
