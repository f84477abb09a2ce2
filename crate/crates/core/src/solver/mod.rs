//! Online phase: refill a template with new coefficients, reduce it to an
//! action matrix and read the solutions off its eigenvectors.

mod eigen;
mod recover;
mod reduce;

pub use eigen::{eigen_decompose, EigenPair};
pub use recover::{recover_solutions, RecoveryOptions, Solution, SolutionSet, SolutionStatus};
pub(crate) use reduce::eliminate;
pub use reduce::{reduce_template, Entry, PivotReport, Reduction, LEFTOVER_TOLERANCE, PIVOT_TOLERANCE};

use num_complex::Complex64;
use thiserror::Error;

use crate::coefficients::{convert, CoeffError, FieldDescriptor, FieldElement};
use crate::polynomials::{PolyError, Polynomial, Ring, RingRef};
use crate::template::{build_template, fill_matrix, EliminationTemplate, Strategy, TemplateError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("generator {generator} has monomials outside the template support: {monomials:?}")]
    SupportMismatch { generator: usize, monomials: Vec<String> },
    #[error("template expects {expected} generators, got {found}")]
    GeneratorCountMismatch { expected: usize, found: usize },
    #[error("instance variables {found:?} do not match template variables {expected:?}")]
    VariableMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("cannot map instance data into the target field: {0}")]
    FieldUnmappable(#[from] CoeffError),
    #[error("specialization failure: {0}")]
    SpecializationFailure(String),
    #[error("exact reduction requested over an inexact field")]
    InexactField,
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A template filled with one instance's coefficients.
#[derive(Debug, Clone)]
pub struct TemplateInstance<'t> {
    pub template: &'t EliminationTemplate,
    pub field: FieldDescriptor,
    /// Instance generators over `field`, in the template's ring layout.
    pub generators: Vec<Polynomial>,
    pub action: Polynomial,
    pub matrix: Vec<Vec<FieldElement>>,
}

fn rehome(p: &Polynomial, ring: &RingRef) -> Result<Polynomial, SolverError> {
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| Ok((m.clone(), convert(c, ring.field())?)))
        .collect::<Result<Vec<_>, SolverError>>()?;
    Ok(Polynomial::from_terms(ring, terms))
}

/// Fill the template layout from instance generators (and optionally new
/// action-form coefficients) by coefficient lookup alone.
pub fn specialize_template<'t>(
    t: &'t EliminationTemplate,
    generators: &[Polynomial],
    action: Option<&Polynomial>,
    field: FieldDescriptor,
) -> Result<TemplateInstance<'t>, SolverError> {
    if generators.len() != t.num_generators() {
        return Err(SolverError::GeneratorCountMismatch { expected: t.num_generators(), found: generators.len() });
    }
    let ring = Ring::new(t.ring.variables(), field, t.ring.order().clone())?;
    let check_vars = |p: &Polynomial| {
        if p.ring().variables() != t.ring.variables() {
            return Err(SolverError::VariableMismatch {
                expected: t.ring.variables().to_vec(),
                found: p.ring().variables().to_vec(),
            });
        }
        Ok(())
    };
    let mut gens = Vec::with_capacity(generators.len());
    for (i, g) in generators.iter().enumerate() {
        check_vars(g)?;
        let g = rehome(g, &ring)?;
        let support = &t.generator_supports[i];
        let outside: Vec<String> =
            g.support().iter().filter(|m| !support.contains(m)).map(|m| ring.format_monomial(m)).collect();
        if !outside.is_empty() {
            return Err(SolverError::SupportMismatch { generator: i, monomials: outside });
        }
        gens.push(g);
    }
    let action = match action {
        Some(a) => {
            check_vars(a)?;
            let a = rehome(a, &ring)?;
            let support = t.action.support();
            let outside: Vec<String> =
                a.support().iter().filter(|m| !support.contains(m)).map(|m| ring.format_monomial(m)).collect();
            if !outside.is_empty() {
                return Err(SolverError::SupportMismatch { generator: usize::MAX, monomials: outside });
            }
            a
        }
        None => rehome(&t.action, &ring)?,
    };
    let matrix = fill_matrix(t, &gens, &action, field)?;
    Ok(TemplateInstance { template: t, field, generators: gens, action, matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    pub recovery: RecoveryOptions,
}

/// Specialize onto complex data, reduce, eigen-decompose and recover.
pub fn template_solve(
    t: &EliminationTemplate,
    generators: &[Polynomial],
    action: Option<&Polynomial>,
    opts: &SolveOptions,
) -> Result<SolutionSet, SolverError> {
    let inst = specialize_template(t, generators, action, FieldDescriptor::Complex)?;
    solve_instance(&inst, opts)
}

pub fn solve_instance(inst: &TemplateInstance, opts: &SolveOptions) -> Result<SolutionSet, SolverError> {
    let red = reduce_template::<Complex64>(inst)?;
    let pairs = eigen_decompose(&red.action)?;
    Ok(recover_solutions(&pairs, inst, &red, &opts.recovery))
}

/// Build a template from `(f, F)` over their ring and solve `F` with it.
pub fn solve_system(
    generators: &[Polynomial],
    action: &Polynomial,
    strategy: Strategy,
    opts: &SolveOptions,
) -> Result<SolutionSet, SolverError> {
    let t = build_template(generators, action, strategy)?;
    template_solve(&t, generators, None, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{parse_polynomial, MonomialOrder};

    fn ring(field: FieldDescriptor, order: MonomialOrder) -> RingRef {
        Ring::new(&["x", "y"], field, order).unwrap()
    }

    fn polys(r: &RingRef, src: &[&str]) -> Vec<Polynomial> {
        src.iter().map(|s| parse_polynomial(s, r).unwrap()).collect()
    }

    #[test]
    fn family_reduction_is_exact() {
        let r = ring(FieldDescriptor::Rational, MonomialOrder::Lex);
        let g = polys(&r, &["x^2 + 2*y^2 - 1", "x*y - 3"]);
        let f = parse_polynomial("x - 2*y", &r).unwrap();
        let t = build_template(&g, &f, Strategy::Default).unwrap();
        let inst = specialize_template(&t, &g, None, FieldDescriptor::Rational).unwrap();
        assert_eq!(inst.matrix, t.matrix);
        let red = reduce_template::<FieldElement>(&inst).unwrap();
        assert_eq!(red.action, t.action_matrix);
        assert_eq!(red.action[0][1], FieldElement::rational(2, 1));
        assert_eq!(red.action[3][0], FieldElement::rational(-2, 3));
    }

    #[test]
    fn linear_system_solves_exactly() {
        let r = ring(FieldDescriptor::Rational, MonomialOrder::GrevLex);
        let g = polys(&r, &["x - 3", "y + 1/2"]);
        let sols = solve_system(&g, &parse_polynomial("x + y", &r).unwrap(), Strategy::Default, &SolveOptions::default()).unwrap();
        assert_eq!(sols.ok_count(), 1);
        let s = &sols.solutions[0];
        assert!((s.coords[0] - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        assert!((s.coords[1] - Complex64::new(-0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn circles_replay() {
        let r = ring(FieldDescriptor::Rational, MonomialOrder::GrevLex);
        let g = polys(&r, &["x^2+y^2-1", "x^2+y^3+x*y-2"]);
        let f = parse_polynomial("x + 4*y", &r).unwrap();
        let t = build_template(&g, &f, Strategy::Default).unwrap();
        let opts = SolveOptions::default();
        let first = template_solve(&t, &g, None, &opts).unwrap();
        assert_eq!(first.ok_count(), 6);
        let g2 = polys(&r, &["x^2+y^2-2", "x^2+y^3+3*x*y-5"]);
        let second = template_solve(&t, &g2, None, &opts).unwrap();
        assert_eq!(second.ok_count(), 6);
        for s in second.ok() {
            assert!(s.residual.unwrap() < 1e-6);
            let fp = s.coords[0] + 4.0 * s.coords[1];
            assert!((s.lambda - fp).norm() <= 1e-6 * (1.0 + s.lambda.norm()));
        }
    }

    #[test]
    fn support_mismatch() {
        let r = ring(FieldDescriptor::Rational, MonomialOrder::GrevLex);
        let g = polys(&r, &["x^2+y^2-1", "x^2+y^3+x*y-2"]);
        let t = build_template(&g, &parse_polynomial("x + 4*y", &r).unwrap(), Strategy::Default).unwrap();
        let bad = polys(&r, &["x^5 + x^2+y^2-1", "x^2+y^3+x*y-2"]);
        match specialize_template(&t, &bad, None, FieldDescriptor::Complex) {
            Err(SolverError::SupportMismatch { generator: 0, monomials }) => assert_eq!(monomials, ["x^5"]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            specialize_template(&t, &g[..1], None, FieldDescriptor::Complex),
            Err(SolverError::GeneratorCountMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn zero_generators_fail_specialization() {
        let r = ring(FieldDescriptor::Rational, MonomialOrder::GrevLex);
        let g = polys(&r, &["x^2+y^2-1", "x^2+y^3+x*y-2"]);
        let t = build_template(&g, &parse_polynomial("x + 4*y", &r).unwrap(), Strategy::Default).unwrap();
        let zeros = vec![Polynomial::zero(&r), Polynomial::zero(&r)];
        let err = template_solve(&t, &zeros, None, &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, SolverError::SpecializationFailure(_)), "{err:?}");
    }

    #[test]
    fn point_at_infinity_is_flagged() {
        let r = ring(FieldDescriptor::Rational, MonomialOrder::GrevLex);
        let g = polys(&r, &["x - 3", "y + 1/2"]);
        let t = build_template(&g, &parse_polynomial("x + y", &r).unwrap(), Strategy::Default).unwrap();
        let inst = specialize_template(&t, &g, None, FieldDescriptor::Complex).unwrap();
        let red = reduce_template::<Complex64>(&inst).unwrap();
        let pairs = vec![EigenPair { value: Complex64::new(1.0, 0.0), vector: vec![Complex64::new(0.0, 0.0)] }];
        let sols = recover_solutions(&pairs, &inst, &red, &RecoveryOptions::default());
        assert_eq!(sols.solutions[0].status, SolutionStatus::AtInfinity);
        assert!(sols.solutions[0].coords.is_empty());
    }
}
