//! Gröbner bases with cofactor tracking, standard monomials, action matrices
//! and Gröbner bases of syzygy modules.

mod buchberger;
mod division;
mod module;
mod quotient;

pub use buchberger::{buchberger_tracked, s_polynomial, TrackedBasis};
pub use division::{normal_form_tracked, Division};
pub use module::{module_groebner_basis, module_normal_form, LiftOrder, ModuleOrder, ModuleTerm, ModuleVector, SyzygyBasis, TermOrder};
pub use quotient::{action_matrix, quotient_basis, ActionMatrix, QuotientBasis};

use thiserror::Error;

use crate::coefficients::CoeffError;
use crate::polynomials::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("no generators")]
    EmptyInput,
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("Gröbner bases need an exact coefficient field")]
    InexactField,
    #[error("ideal is positive dimensional: no pure power of `{0}` among the leading monomials")]
    PositiveDimensional(String),
    #[error("ideal contains 1, the system has no solutions")]
    UnitIdeal,
    #[error("action form is constant")]
    ConstantActionForm,
    #[error("action form remainder leaves the standard monomials")]
    NotReduced,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}
