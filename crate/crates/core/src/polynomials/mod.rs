//! Multivariate polynomials over the coefficient fields, with lex, grevlex and
//! the elimination order for an auxiliary variable.

mod monomial;
mod parse;
mod poly;
mod ring;

pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_polynomial;
pub use poly::{dot, Polynomial, Term};
pub(crate) use poly::merge_scaled;
pub use ring::{Ring, RingRef, RESERVED_VARIABLE};

use thiserror::Error;

use crate::coefficients::CoeffError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("`s` is reserved for the action variable")]
    ReservedVariable,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    BadVariableName(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Compare two monomials under an order, checking arity.
pub fn compare_monomials(a: &Monomial, b: &Monomial, order: &MonomialOrder) -> Result<std::cmp::Ordering, PolyError> {
    if a.nvars() != b.nvars() {
        return Err(PolyError::ArityMismatch { expected: a.nvars(), found: b.nvars() });
    }
    if matches!(order, MonomialOrder::ElimS(_)) && a.nvars() == 0 {
        return Err(PolyError::ArityMismatch { expected: 1, found: 0 });
    }
    Ok(order.compare(a, b))
}

/// Dense matrix of polynomials stored row-major as nested vectors.
pub type PolyMatrix = Vec<Vec<Polynomial>>;

/// `a * b` for polynomial matrices (`a` is n x k, `b` is k x m).
pub fn matmul(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>], ring: &RingRef) -> PolyMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter().zip(b).fold(Polynomial::zero(ring), |acc, (x, brow)| {
                        if x.is_zero() || brow[j].is_zero() {
                            acc
                        } else {
                            &acc + &(x * &brow[j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// `m * v` for a polynomial matrix and column vector.
pub fn matvec(m: &[Vec<Polynomial>], v: &[Polynomial], ring: &RingRef) -> Vec<Polynomial> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(Polynomial::zero(ring), |acc, (x, y)| if x.is_zero() { acc } else { &acc + &(x * y) })
        })
        .collect()
}
