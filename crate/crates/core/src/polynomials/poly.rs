use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::coefficients::{convert, FieldDescriptor, FieldElement};
use crate::polynomials::{Monomial, MonomialOrder, PolyError, RingRef};

pub type Term = (Monomial, FieldElement);

/// Multivariate polynomial with terms sorted strictly decreasing by the
/// ring's monomial order and no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<Term>,
}

fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &RingRef) -> Self {
        Polynomial::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &RingRef, c: FieldElement) -> Self {
        Polynomial::term(ring, ring.one_monomial(), c)
    }

    pub fn term(ring: &RingRef, m: Monomial, c: FieldElement) -> Self {
        assert_eq!(m.nvars(), ring.nslots(), "monomial arity");
        assert_eq!(c.field(), ring.field(), "coefficient field");
        if c.is_zero() {
            return Polynomial::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
    }

    pub fn variable(ring: &RingRef, i: usize) -> Self {
        Polynomial::term(ring, ring.variable_monomial(i), ring.field().one())
    }

    /// Canonicalize an arbitrary term list (sort, combine, drop zeros).
    pub fn from_terms(ring: &RingRef, mut terms: Vec<Term>) -> Self {
        let ord = ring.order().clone();
        terms.sort_by(|a, b| ord.compare(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Result<&Term, PolyError> {
        self.terms.first().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&FieldElement> {
        self.terms.first().map(|t| &t.1)
    }

    /// Monomials of all terms, strictly decreasing.
    pub fn support(&self) -> Vec<Monomial> {
        self.terms.iter().map(|t| t.0.clone()).collect()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        let ord = self.ring.order();
        match self.terms.binary_search_by(|t| ord.compare(m, &t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.field().zero(),
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch);
        }
        Ok(())
    }

    /// `self + c * m * g` in one merge pass.
    pub fn add_scaled(&self, c: &FieldElement, m: &Monomial, g: &Polynomial) -> Polynomial {
        debug_assert!(same_ring(&self.ring, &g.ring));
        if c.is_zero() || g.is_zero() {
            return self.clone();
        }
        let terms = merge_scaled(&self.terms, c, m, &g.terms, self.ring.order());
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Wrap an already canonical term list.
    pub(crate) fn from_sorted_terms(ring: &RingRef, terms: Vec<Term>) -> Self {
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.add_scaled(&self.ring.field().one(), &self.ring.one_monomial(), other))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.add_scaled(&-self.ring.field().one(), &self.ring.one_monomial(), other))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() <= 2 {
            let mut acc = Polynomial::zero(&self.ring);
            for (m, c) in &small.terms {
                acc = acc.add_scaled(c, m, large);
            }
            return Ok(acc);
        }
        let mut terms = Vec::with_capacity(small.len() * large.len());
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                terms.push((m1.mul(m2), c1 * c2));
            }
        }
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// `x^beta * self`; multiplicativity of the order keeps terms sorted.
    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect() }
    }

    pub fn mul_term(&self, c: &FieldElement, m: &Monomial) -> Polynomial {
        Polynomial::zero(&self.ring).add_scaled(c, m, self)
    }

    pub fn make_monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// Same polynomial with coefficients mapped into another ring with the
    /// same variables and order.
    pub fn map_into(&self, target: &RingRef) -> Result<Polynomial, PolyError> {
        if target.variables() != self.ring.variables() || target.order() != self.ring.order() {
            return Err(PolyError::RingMismatch);
        }
        let field = target.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let c = convert(c, field)?;
            if !c.is_zero() {
                terms.push((m.clone(), c));
            }
        }
        Ok(Polynomial { ring: target.clone(), terms })
    }

    /// Evaluate at a point. Exact fields evaluate exactly; a ring over an
    /// exact field evaluated at complex points maps coefficients first.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if point.len() != self.ring.nslots() {
            return Err(PolyError::ArityMismatch { expected: self.ring.nslots(), found: point.len() });
        }
        let field: FieldDescriptor = point.first().map(|p| p.field()).unwrap_or(self.ring.field());
        if point.iter().any(|p| p.field() != field) {
            return Err(PolyError::Coeff(crate::coefficients::CoeffError::FieldMismatch(field, self.ring.field())));
        }
        let maxdeg = self.terms.iter().flat_map(|t| t.0.exponents().iter().copied()).max().unwrap_or(0) as usize;
        let powers: Vec<Vec<FieldElement>> = point
            .iter()
            .map(|p| {
                let mut pw = Vec::with_capacity(maxdeg + 1);
                pw.push(field.one());
                for k in 1..=maxdeg {
                    let next = &pw[k - 1] * p;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = convert(c, field)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Fast complex evaluation used by the online solver.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= point[i].powu(e);
                }
            }
            acc += t;
        }
        acc
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", self.ring.format_monomial(m))?;
            } else {
                write!(f, "{abs}*{}", self.ring.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// Merge `a + c * m * b` for term lists sorted decreasing under `ord`.
pub(crate) fn merge_scaled(a: &[Term], c: &FieldElement, m: &Monomial, b: &[Term], ord: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut a = a.iter().peekable();
    let mut b = b.iter().map(|(bm, bc)| (m.mul(bm), c * bc)).peekable();
    loop {
        let step = match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some(x), Some(y)) => ord.compare(&x.0, &y.0),
        };
        match step {
            Ordering::Greater => out.push(a.next().unwrap().clone()),
            Ordering::Less => out.push(b.next().unwrap()),
            Ordering::Equal => {
                let (xm, xc) = a.next().unwrap();
                let (_, yc) = b.next().unwrap();
                let s = xc + &yc;
                if !s.is_zero() {
                    out.push((xm.clone(), s));
                }
            }
        }
    }
    out
}

macro_rules! poly_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> std::ops::$tr<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

poly_op!(Add, add, try_add);
poly_op!(Sub, sub, try_sub);
poly_op!(Mul, mul, try_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

/// `sum_i row[i] * v[i]`.
pub fn dot(row: &[Polynomial], v: &[Polynomial]) -> Polynomial {
    assert_eq!(row.len(), v.len(), "dot product length");
    let ring = v.first().or(row.first()).expect("nonempty").ring().clone();
    row.iter().zip(v).fold(Polynomial::zero(&ring), |acc, (a, b)| &acc + &(a * b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{parse_polynomial, MonomialOrder, Ring};

    fn ring(order: MonomialOrder) -> RingRef {
        Ring::new(&["x", "y"], FieldDescriptor::Rational, order).unwrap()
    }

    fn p(r: &RingRef, s: &str) -> Polynomial {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(MonomialOrder::GrevLex);
        assert_eq!(&p(&r, "x+y") * &p(&r, "x-y"), p(&r, "x^2-y^2"));
    }

    #[test]
    fn monomial_shift() {
        let r = ring(MonomialOrder::Lex);
        let f = p(&r, "x*y - 5");
        assert_eq!(f.mul_monomial(&Monomial::from_exponents(&[1, 0])), p(&r, "x^2*y - 5*x"));
    }

    #[test]
    fn cancellation_yields_zero() {
        let r = ring(MonomialOrder::GrevLex);
        let f = p(&r, "3*x^2*y + y^3 - 5");
        assert!((&f + &-&f).is_zero());
        assert!((&f + &-&f).terms().is_empty());
    }

    #[test]
    fn leading_terms() {
        let r = ring(MonomialOrder::GrevLex);
        let f = p(&r, "x^2+y^3+x*y-2");
        assert_eq!(f.leading_monomial().unwrap(), &Monomial::from_exponents(&[0, 3]));
        let five = p(&r, "5");
        let lt = five.leading_term().unwrap();
        assert!(lt.0.is_one());
        assert_eq!(lt.1, FieldElement::rational(5, 1));
        assert_eq!(Polynomial::zero(&r).leading_term().unwrap_err(), PolyError::ZeroPolynomial);
        let sup = p(&r, "x^2+y^2-1").support();
        assert_eq!(sup, vec![
            Monomial::from_exponents(&[2, 0]),
            Monomial::from_exponents(&[0, 2]),
            Monomial::from_exponents(&[0, 0])
        ]);
    }

    #[test]
    fn evaluation() {
        let r = ring(MonomialOrder::GrevLex);
        let q = |n| FieldElement::rational(n, 1);
        assert!(p(&r, "x^2+y^2-1").evaluate(&[q(1), q(0)]).unwrap().is_zero());
        assert!(p(&r, "x*y-6").evaluate(&[q(2), q(3)]).unwrap().is_zero());
        let r7 = Ring::new(&["x", "y"], FieldDescriptor::Prime(7), MonomialOrder::GrevLex).unwrap();
        let two = FieldDescriptor::Prime(7).from_i64(2);
        assert!(p(&r7, "x^2+y^2-1").evaluate(&[two.clone(), two.clone()]).unwrap().is_zero());
        assert!(matches!(
            p(&r, "x").evaluate(&[q(1)]),
            Err(PolyError::ArityMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn ring_mismatch() {
        let a = ring(MonomialOrder::GrevLex);
        let b = ring(MonomialOrder::Lex);
        assert_eq!(p(&a, "x").try_add(&p(&b, "x")).unwrap_err(), PolyError::RingMismatch);
    }

    #[test]
    fn printing() {
        let r = ring(MonomialOrder::GrevLex);
        assert_eq!(p(&r, "3*x^2*y + y^3 - 5").to_string(), "3*x^2*y + y^3 - 5");
        assert_eq!(p(&r, "-1*x + 1/2*y").to_string(), "-x + 1/2*y");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy(r: RingRef) -> impl Strategy<Value = Polynomial> {
            proptest::collection::vec(((0u32..4, 0u32..4), -9i64..10, 1i64..5), 0..6).prop_map(move |ts| {
                let terms = ts
                    .into_iter()
                    .map(|((a, b), n, d)| (Monomial::from_exponents(&[a, b]), FieldElement::rational(n, d)))
                    .collect();
                Polynomial::from_terms(&r, terms)
            })
        }

        proptest! {
            #[test]
            fn print_parse_round_trip(f in poly_strategy(ring(MonomialOrder::GrevLex))) {
                let r = f.ring().clone();
                prop_assert_eq!(parse_polynomial(&f.to_string(), &r).unwrap(), f);
            }

            #[test]
            fn evaluation_is_multiplicative(
                f in poly_strategy(ring(MonomialOrder::Lex)),
                g in poly_strategy(ring(MonomialOrder::Lex)),
                a in -5i64..5, b in -5i64..5,
            ) {
                let pt = [FieldElement::rational(a, 1), FieldElement::rational(b, 3)];
                let fg = &f * &g;
                prop_assert_eq!(fg.evaluate(&pt).unwrap(), &f.evaluate(&pt).unwrap() * &g.evaluate(&pt).unwrap());
            }

            #[test]
            fn terms_stay_sorted(f in poly_strategy(ring(MonomialOrder::GrevLex)), g in poly_strategy(ring(MonomialOrder::GrevLex))) {
                let h = &(&f * &g) - &f;
                let ord = h.ring().order().clone();
                for w in h.terms().windows(2) {
                    prop_assert_eq!(ord.compare(&w[0].0, &w[1].0), Ordering::Greater);
                }
                prop_assert!(h.terms().iter().all(|t| !t.1.is_zero()));
            }
        }
    }
}
