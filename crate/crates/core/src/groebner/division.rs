use crate::coefficients::FieldElement;
use crate::polynomials::{merge_scaled, Monomial, Polynomial, Term};

/// Result of dividing a polynomial by an ordered list of divisors.
#[derive(Debug, Clone)]
pub struct Division {
    pub remainder: Polynomial,
    /// One quotient per divisor: `f = sum_k quotients[k] * g_k + remainder`.
    pub quotients: Vec<Polynomial>,
}

/// Full multivariate division with cofactor tracking.
///
/// The reducer for a term is always the lowest-index divisor whose leading
/// monomial divides it, so the quotients are deterministic.
pub fn normal_form_tracked(f: &Polynomial, divisors: &[Polynomial]) -> Division {
    divide(f, divisors, None)
}

/// Division that ignores divisor `skip` (used during interreduction).
pub(crate) fn divide(f: &Polynomial, divisors: &[Polynomial], skip: Option<usize>) -> Division {
    let ring = f.ring().clone();
    let ord = ring.order().clone();
    let leads: Vec<Option<(&Monomial, FieldElement)>> = divisors
        .iter()
        .enumerate()
        .map(|(k, g)| {
            if Some(k) == skip {
                return None;
            }
            g.leading_term().ok().map(|(m, c)| (m, c.inv().expect("nonzero leading coefficient")))
        })
        .collect();
    let mut quotient_terms: Vec<Vec<Term>> = vec![Vec::new(); divisors.len()];
    let mut remainder: Vec<Term> = Vec::new();
    let mut p: Vec<Term> = f.terms().to_vec();
    let mut start = 0usize;
    while start < p.len() {
        let (m, c) = &p[start];
        let reducer = leads.iter().enumerate().find_map(|(k, lead)| {
            let (lm, inv_lc) = lead.as_ref()?;
            lm.quotient_of(m).map(|shift| (k, shift, c * inv_lc))
        });
        match reducer {
            Some((k, shift, q)) => {
                let tail = &divisors[k].terms()[1..];
                p = merge_scaled(&p[start + 1..], &-&q, &shift, tail, &ord);
                start = 0;
                quotient_terms[k].push((shift, q));
            }
            None => {
                remainder.push(p[start].clone());
                start += 1;
            }
        }
    }
    let quotients = quotient_terms.into_iter().map(|ts| Polynomial::from_terms(&ring, ts)).collect();
    Division { remainder: Polynomial::from_sorted_terms(&ring, remainder), quotients }
}
