use crate::coefficients::FieldElement;
use crate::groebner::{normal_form_tracked, GroebnerError, TrackedBasis};
use crate::polynomials::{Monomial, PolyMatrix, Polynomial};

/// Standard monomials of a zero-dimensional ideal, sorted decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientBasis {
    pub monomials: Vec<Monomial>,
}

impl QuotientBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.monomials.iter().position(|b| b == m)
    }
}

/// Enumerate the monomials under the staircase of `LM(G)`.
pub fn quotient_basis(tb: &TrackedBasis) -> Result<QuotientBasis, GroebnerError> {
    let ring = &tb.ring;
    let leads = tb.leading_monomials();
    if leads.iter().any(Monomial::is_one) {
        return Err(GroebnerError::UnitIdeal);
    }
    let n = ring.nvars();
    for v in 0..n {
        let pure = leads.iter().any(|m| m.as_variable_power() == Some(v));
        if !pure {
            return Err(GroebnerError::PositiveDimensional(ring.variables()[v].clone()));
        }
    }
    // depth-first over exponent vectors; multiples of a leading monomial are pruned
    let mut out = Vec::new();
    let mut stack = vec![(ring.one_monomial(), 0usize)];
    while let Some((m, first)) = stack.pop() {
        out.push(m.clone());
        for v in first..n {
            let next = m.mul(&ring.variable_monomial(v));
            if !leads.iter().any(|l| l.divides(&next)) {
                stack.push((next, v));
            }
        }
    }
    let ord = ring.order();
    out.sort_by(|a, b| ord.compare(b, a));
    Ok(QuotientBasis { monomials: out })
}

/// Multiplication matrix of `f` on `C[X]/I` together with the division cofactors.
#[derive(Debug, Clone)]
pub struct ActionMatrix {
    /// `matrix[j][k]` is the coefficient of `b_k` in the normal form of `f b_j`.
    pub matrix: Vec<Vec<FieldElement>>,
    /// `H_GA`, d x t: `f b_j - sum_k A_jk b_k = sum_l H_jl g_l`.
    pub cofactors: PolyMatrix,
}

pub fn action_matrix(f: &Polynomial, tb: &TrackedBasis, basis: &QuotientBasis) -> Result<ActionMatrix, GroebnerError> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(GroebnerError::ConstantActionForm);
    }
    let mut matrix = Vec::with_capacity(basis.len());
    let mut cofactors = Vec::with_capacity(basis.len());
    for b in &basis.monomials {
        let div = normal_form_tracked(&f.mul_monomial(b), &tb.basis);
        let mut row = vec![tb.ring.field().zero(); basis.len()];
        for (m, c) in div.remainder.terms() {
            let k = basis.position(m).ok_or(GroebnerError::NotReduced)?;
            row[k] = c.clone();
        }
        matrix.push(row);
        cofactors.push(div.quotients);
    }
    Ok(ActionMatrix { matrix, cofactors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::FieldDescriptor;
    use crate::groebner::buchberger_tracked;
    use crate::polynomials::{dot, parse_polynomial, MonomialOrder, Ring, RingRef};

    fn system(vars: &[&str], order: MonomialOrder, src: &[&str]) -> (RingRef, TrackedBasis) {
        let r = Ring::new(vars, FieldDescriptor::Rational, order).unwrap();
        let f: Vec<Polynomial> = src.iter().map(|s| parse_polynomial(s, &r).unwrap()).collect();
        let tb = buchberger_tracked(&f).unwrap();
        (r, tb)
    }

    #[test]
    fn circles_have_four_standard_monomials() {
        let (_, tb) = system(&["x", "y"], MonomialOrder::GrevLex, &["x^2+y^2-1", "x^2+y^3+x*y-2"]);
        let b = quotient_basis(&tb).unwrap();
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn lex_family_action_matrix() {
        let (r, tb) = system(&["x", "y"], MonomialOrder::Lex, &["x^2+2*y^2-1", "x*y-3"]);
        let b = quotient_basis(&tb).unwrap();
        let names: Vec<String> = b.monomials.iter().map(|m| r.format_monomial(m)).collect();
        assert_eq!(names, ["y^3", "y^2", "y", "1"]);
        let f = parse_polynomial("x - 2*y", &r).unwrap();
        let a = action_matrix(&f, &tb, &b).unwrap();
        let q = |n, d| FieldElement::rational(n, d);
        let expect = [
            [q(0, 1), q(2, 1), q(0, 1), q(9, 1)],
            [q(-2, 1), q(0, 1), q(3, 1), q(0, 1)],
            [q(0, 1), q(-2, 1), q(0, 1), q(3, 1)],
            [q(-2, 3), q(0, 1), q(-5, 3), q(0, 1)],
        ];
        for (got, want) in a.matrix.iter().zip(&expect) {
            assert_eq!(got, want);
        }
        // f b_j - sum A_jk b_k = H_j . G
        for (j, bj) in b.monomials.iter().enumerate() {
            let mut lhs = f.mul_monomial(bj);
            for (k, bk) in b.monomials.iter().enumerate() {
                lhs = lhs.add_scaled(&-&a.matrix[j][k], bk, &Polynomial::one(&r));
            }
            assert_eq!(lhs, dot(&a.cofactors[j], &tb.basis));
        }
    }

    #[test]
    fn positive_dimensional() {
        let (_, tb) = system(&["x", "y"], MonomialOrder::GrevLex, &["x*y-1"]);
        assert_eq!(quotient_basis(&tb).unwrap_err(), GroebnerError::PositiveDimensional("x".into()));
    }

    #[test]
    fn unit_ideal() {
        let (_, tb) = system(&["x"], MonomialOrder::GrevLex, &["x-1", "x-2"]);
        assert_eq!(quotient_basis(&tb).unwrap_err(), GroebnerError::UnitIdeal);
    }

    #[test]
    fn constant_action_rejected() {
        let (r, tb) = system(&["x"], MonomialOrder::GrevLex, &["x^2-1"]);
        let b = quotient_basis(&tb).unwrap();
        assert_eq!(action_matrix(&Polynomial::one(&r), &tb, &b).unwrap_err(), GroebnerError::ConstantActionForm);
    }
}
