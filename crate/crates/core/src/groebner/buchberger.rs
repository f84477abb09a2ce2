use crate::groebner::division::normal_form_tracked;
use crate::groebner::module::{module_groebner_basis, LiftOrder, ModuleOrder, ModuleVector};
use crate::groebner::GroebnerError;
use crate::polynomials::{Monomial, MonomialOrder, PolyMatrix, Polynomial, RingRef};

/// Reduced Gröbner basis `G` of `<F>` together with change matrices
/// `v(G) = C v(F)`, `v(F) = D v(G)` and a Gröbner basis of the syzygies of `F`.
#[derive(Debug, Clone)]
pub struct TrackedBasis {
    pub ring: RingRef,
    /// The input generators `F`.
    pub generators: Vec<Polynomial>,
    /// Reduced basis, sorted by increasing leading monomial.
    pub basis: Vec<Polynomial>,
    /// `C`, t x r.
    pub to_basis: PolyMatrix,
    /// `D`, r x t.
    pub from_basis: PolyMatrix,
    pub(crate) syzygy_order: ModuleOrder,
    /// Reduced Gröbner basis of the syzygies, ascending in `syzygy_order`.
    pub(crate) syzygy_basis: Vec<ModuleVector>,
    syzygies: PolyMatrix,
}

impl TrackedBasis {
    pub fn order(&self) -> &MonomialOrder {
        self.ring.order()
    }

    /// Rows `h` with `h . v(F) = 0` generating the first syzygy module of `F`.
    pub fn syzygies(&self) -> &PolyMatrix {
        &self.syzygies
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|g| g.leading_monomial().expect("nonzero").clone()).collect()
    }
}

/// `S(f, g) = (L / lt(f)) f - (L / lt(g)) g` with `L` the lcm of the leading monomials.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, GroebnerError> {
    let (fm, fc) = f.leading_term()?;
    let (gm, gc) = g.leading_term()?;
    let l = fm.lcm(gm);
    let a = f.mul_term(&fc.inv()?, &fm.quotient_of(&l).expect("lcm"));
    let b = g.mul_term(&gc.inv()?, &gm.quotient_of(&l).expect("lcm"));
    Ok(&a - &b)
}

/// Buchberger's algorithm on the rows `(f_i, e_i)` of `R x R^r`.
///
/// Under an order where the first position dominates, the reduced basis of
/// this module splits into rows `(g, c)` with `G` the reduced basis of `<F>`
/// and `g = c . v(F)`, and rows `(0, h)` forming a Gröbner basis of the
/// syzygies of `F`. Cofactors stay reduced modulo the syzygies found so far,
/// which keeps `C` small.
pub fn buchberger_tracked(generators: &[Polynomial]) -> Result<TrackedBasis, GroebnerError> {
    let ring = generators.first().ok_or(GroebnerError::EmptyInput)?.ring().clone();
    let r = generators.len();
    for (i, f) in generators.iter().enumerate() {
        if f.is_zero() {
            return Err(GroebnerError::ZeroGenerator(i));
        }
        if **f.ring() != *ring {
            return Err(GroebnerError::Poly(crate::polynomials::PolyError::RingMismatch));
        }
    }
    if !ring.field().is_exact() {
        return Err(GroebnerError::InexactField);
    }

    let syzygy_order = ModuleOrder::new(generators.iter().map(|f| f.degree().unwrap_or(0)).collect());
    let lift = LiftOrder { head: ring.order(), tail: &syzygy_order };
    let rows: Vec<ModuleVector> = generators
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut row = vec![Polynomial::zero(&ring); r + 1];
            row[0] = f.clone();
            row[i + 1] = Polynomial::one(&ring);
            ModuleVector::from_row(&row, &lift)
        })
        .collect();
    let reduced = module_groebner_basis(&rows, &lift);

    let mut basis = Vec::new();
    let mut to_basis = Vec::new();
    let mut syzygy_basis = Vec::new();
    for v in reduced {
        if v.leading().expect("nonzero").1 == 0 {
            let mut row = v.to_row(&ring, r + 1);
            basis.push(row.remove(0));
            to_basis.push(row);
        } else {
            syzygy_basis.push(v.shifted_down());
        }
    }
    let syzygies = syzygy_basis.iter().map(|v| v.to_row(&ring, r)).collect();

    let mut from_basis: PolyMatrix = Vec::with_capacity(r);
    for f in generators {
        let div = normal_form_tracked(f, &basis);
        debug_assert!(div.remainder.is_zero());
        from_basis.push(div.quotients);
    }
    Ok(TrackedBasis {
        ring,
        generators: generators.to_vec(),
        basis,
        to_basis,
        from_basis,
        syzygy_order,
        syzygy_basis,
        syzygies,
    })
}
