use num_complex::Complex64;

use crate::coefficients::FieldElement;
use crate::solver::{SolverError, TemplateInstance};

/// Entries the template elimination can run on.
pub trait Entry: Clone + std::fmt::Debug {
    /// Exact entries pivot on the first nonzero; inexact ones by magnitude.
    const EXACT: bool;
    fn from_element(x: &FieldElement) -> Self;
    fn is_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn zero_like(&self) -> Self;
    fn div(&self, other: &Self) -> Self;
    /// `self - a * b`.
    fn sub_mul(&self, a: &Self, b: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Rescale a row to unit max-magnitude; exact entries are left alone.
    fn equilibrate(_row: &mut [Self]) {}
}

impl Entry for FieldElement {
    const EXACT: bool = true;

    fn from_element(x: &FieldElement) -> Self {
        x.clone()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        FieldElement::magnitude(self)
    }
    fn zero_like(&self) -> Self {
        FieldElement::zero_like(self)
    }
    fn div(&self, other: &Self) -> Self {
        self.try_div(other).expect("nonzero pivot in one field")
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Self {
        self - &(a * b)
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Entry for Complex64 {
    const EXACT: bool = false;

    fn from_element(x: &FieldElement) -> Self {
        x.to_complex()
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Self {
        self - a * b
    }
    fn neg(&self) -> Self {
        -self
    }
    fn equilibrate(row: &mut [Self]) {
        let m = row.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m > 0.0 {
            for z in row.iter_mut() {
                *z /= m;
            }
        }
    }
}

/// Relative magnitude below which a floating pivot counts as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-12;
/// Relative size of an uncancelled excessive entry that signals a rank drop.
pub const LEFTOVER_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PivotReport {
    /// Excessive columns that received a pivot.
    pub pivot_columns: Vec<usize>,
    /// Smallest pivot magnitude relative to the largest shift-block entry.
    pub min_pivot: f64,
}

/// Result of eliminating the excessive block from the action rows.
#[derive(Debug, Clone)]
pub struct Reduction<T> {
    /// `A`, d x d.
    pub action: Vec<Vec<T>>,
    /// The full matrix after elimination; shift rows are in echelon form.
    pub rows: Vec<Vec<T>>,
    /// For each excessive column, the shift row holding its pivot.
    pub pivots: Vec<Option<usize>>,
    pub report: PivotReport,
}

/// Eliminate the excessive columns from the action rows using the shift rows.
///
/// Floating-point instances only pivot in the columns that received a pivot
/// when the template was built; elsewhere a roundoff-sized entry could be
/// taken as a pivot and wreck the result.
pub fn reduce_template<T: Entry>(inst: &TemplateInstance) -> Result<Reduction<T>, SolverError> {
    let t = inst.template;
    if T::EXACT && !inst.field.is_exact() {
        return Err(SolverError::InexactField);
    }
    let rows: Vec<Vec<T>> = inst.matrix.iter().map(|r| r.iter().map(T::from_element).collect()).collect();
    let allowed = if T::EXACT { None } else { Some(t.pivot_columns.as_slice()) };
    eliminate(rows, t.shifts.total(), t.partition.excessive.len(), allowed)
}

/// Column-by-column elimination of the first `ne` columns, pivoting among
/// the first `ns` rows. With `allowed`, only those columns take pivots and
/// each must find one.
pub(crate) fn eliminate<T: Entry>(
    mut rows: Vec<Vec<T>>,
    ns: usize,
    ne: usize,
    allowed: Option<&[usize]>,
) -> Result<Reduction<T>, SolverError> {
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows[..ns].iter().position(|r| r.iter().all(Entry::is_zero)) {
        return Err(SolverError::SpecializationFailure(format!("shift row {i} vanishes")));
    }
    // equilibrated shift rows keep the pivot choice from favouring large generators
    for row in &mut rows[..ns] {
        T::equilibrate(row);
    }
    let mut wanted = vec![allowed.is_none(); ne];
    for &c in allowed.unwrap_or(&[]) {
        wanted[c] = true;
    }
    let scale = rows.iter().flatten().map(Entry::magnitude).fold(0.0, f64::max);
    let shift_scale = rows[..ns].iter().flatten().map(Entry::magnitude).fold(0.0, f64::max);
    let mut used = vec![false; ns];
    let mut pivots = vec![None; ne];
    let mut min_pivot = f64::INFINITY;
    for c in (0..ne).filter(|&c| wanted[c]) {
        let candidates = (0..ns).filter(|&i| !used[i] && !rows[i][c].is_zero());
        let p = if T::EXACT {
            candidates.into_iter().next()
        } else {
            candidates
                .map(|i| (i, rows[i][c].magnitude()))
                .filter(|&(_, m)| m > PIVOT_TOLERANCE * shift_scale)
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(i, _)| i)
        };
        let Some(p) = p else {
            if allowed.is_some() {
                return Err(SolverError::SpecializationFailure(format!("excessive column {c} lost its pivot")));
            }
            continue;
        };
        used[p] = true;
        pivots[c] = Some(p);
        min_pivot = min_pivot.min(rows[p][c].magnitude() / shift_scale.max(f64::MIN_POSITIVE));
        let pivot_row = rows[p].clone();
        let support: Vec<usize> = (c + 1..ncols).filter(|&k| !pivot_row[k].is_zero()).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if (i < ns && used[i]) || row[c].is_zero() {
                continue;
            }
            let factor = row[c].div(&pivot_row[c]);
            for &k in &support {
                row[k] = row[k].sub_mul(&factor, &pivot_row[k]);
            }
            row[c] = row[c].zero_like();
        }
    }
    for row in &rows[ns..] {
        for c in (0..ne).filter(|&c| pivots[c].is_none()) {
            let bad = if T::EXACT { !row[c].is_zero() } else { row[c].magnitude() > LEFTOVER_TOLERANCE * scale };
            if bad {
                return Err(SolverError::SpecializationFailure(format!("excessive column {c} has no pivot")));
            }
        }
    }
    let action = rows[ns..].iter().map(|row| row[ne..ncols].iter().map(Entry::neg).collect()).collect();
    let pivot_columns = (0..ne).filter(|&c| pivots[c].is_some()).collect();
    let report = PivotReport { pivot_columns, min_pivot: if min_pivot.is_finite() { min_pivot } else { 1.0 } };
    Ok(Reduction { action, rows, pivots, report })
}
