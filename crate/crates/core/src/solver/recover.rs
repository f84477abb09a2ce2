use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::polynomials::{Monomial, Polynomial};
use crate::solver::eigen::EigenPair;
use crate::solver::reduce::Reduction;
use crate::solver::TemplateInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionStatus {
    Ok,
    AtInfinity,
    RecoveryFailed,
}

impl SolutionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolutionStatus::Ok => "ok",
            SolutionStatus::AtInfinity => "at_infinity",
            SolutionStatus::RecoveryFailed => "recovery_failed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// One coordinate per ring variable; empty for points at infinity.
    pub coords: Vec<Complex64>,
    pub lambda: Complex64,
    /// Largest generator magnitude at `coords`, when the point was recovered.
    pub residual: Option<f64>,
    pub status: SolutionStatus,
    /// Another eigenvalue lies within the clustering tolerance.
    pub clustered: bool,
}

impl Serialize for Solution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Solution", 4)?;
        let coords: Vec<[f64; 2]> = self.coords.iter().map(|z| [z.re, z.im]).collect();
        st.serialize_field("coords", &coords)?;
        st.serialize_field("lambda", &[self.lambda.re, self.lambda.im])?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("status", self.status.as_str())?;
        st.end()
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolutionSet {
    pub solutions: Vec<Solution>,
}

impl SolutionSet {
    pub fn ok(&self) -> impl Iterator<Item = &Solution> {
        self.solutions.iter().filter(|s| s.status == SolutionStatus::Ok)
    }

    pub fn ok_count(&self) -> usize {
        self.ok().count()
    }

    pub fn any_clustered(&self) -> bool {
        self.solutions.iter().any(|s| s.clustered)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.solutions).expect("solutions serialize")
    }

    /// One line per solution, coordinates with 17 significant digits.
    pub fn to_text(&self, variables: &[String]) -> String {
        let mut out = String::new();
        for s in &self.solutions {
            let coords: Vec<String> =
                variables.iter().zip(&s.coords).map(|(v, z)| format!("{v}={}", format_complex(*z))).collect();
            let residual = s.residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
            out.push_str(&format!(
                "{} lambda={} residual={} {}\n",
                s.status.as_str(),
                format_complex(s.lambda),
                residual,
                coords.join(" ")
            ));
        }
        out
    }
}

fn format_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryOptions {
    pub tol_inf: f64,
    pub tol_res: f64,
    /// Relative eigenvalue distance below which a pair is flagged as clustered.
    pub tol_cluster: f64,
    /// Gauss-Newton steps applied to each recovered point; a step is kept
    /// only if it lowers the residual.
    pub refine_steps: usize,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions { tol_inf: 1e-8, tol_res: 1e-6, tol_cluster: 1e-8, refine_steps: 2 }
    }
}

fn residual(generators: &[&Polynomial], p: &[Complex64]) -> f64 {
    generators.iter().map(|g| g.eval_complex(p).norm()).fold(0.0, f64::max)
}

fn jacobian_row(g: &Polynomial, p: &[Complex64]) -> Vec<Complex64> {
    let mut row = vec![Complex64::new(0.0, 0.0); p.len()];
    for (m, c) in g.terms() {
        let e = &m.exponents()[..p.len()];
        let c = c.to_complex();
        for (i, slot) in row.iter_mut().enumerate() {
            if e[i] == 0 {
                continue;
            }
            let mut t = c * e[i] as f64;
            for (k, &ek) in e.iter().enumerate() {
                let pow = if k == i { ek - 1 } else { ek };
                if pow > 0 {
                    t *= p[k].powu(pow);
                }
            }
            *slot += t;
        }
    }
    row
}

/// Least-squares Newton polish of `p` on the instance equations.
fn refine(generators: &[&Polynomial], mut p: Vec<Complex64>, steps: usize) -> (Vec<Complex64>, f64) {
    let mut res = residual(generators, &p);
    for _ in 0..steps {
        if res == 0.0 || !res.is_finite() {
            break;
        }
        let n = p.len();
        let rows: Vec<Vec<Complex64>> = generators.iter().map(|g| jacobian_row(g, &p)).collect();
        let jac = DMatrix::from_fn(generators.len(), n, |i, j| rows[i][j]);
        let rhs = DVector::from_iterator(generators.len(), generators.iter().map(|g| -g.eval_complex(&p)));
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        let Ok(delta) = svd.solve(&rhs, 1e-14 * smax) else { break };
        let next: Vec<Complex64> = p.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
        let next_res = residual(generators, &next);
        if !(next_res < res) {
            break;
        }
        p = next;
        res = next_res;
    }
    (p, res)
}

fn monomial_value(m: &Monomial, known: &[Option<Complex64>]) -> Option<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (i, &e) in m.exponents().iter().enumerate().take(known.len()) {
        if e > 0 {
            acc *= known[i]?.powu(e);
        }
    }
    Some(acc)
}

/// Turn eigenpairs of the reduced action matrix into points of the variety.
pub fn recover_solutions(
    pairs: &[EigenPair],
    inst: &TemplateInstance,
    reduction: &Reduction<Complex64>,
    opts: &RecoveryOptions,
) -> SolutionSet {
    let t = inst.template;
    let n = t.ring.nvars();
    let basis = &t.basis.monomials;
    let d = basis.len();
    let columns = t.columns();
    let ne = t.partition.excessive.len();
    let generators: Vec<_> = inst.generators.iter().collect();

    let mut solutions = Vec::with_capacity(pairs.len());
    for (idx, pair) in pairs.iter().enumerate() {
        let clustered = pairs.iter().enumerate().any(|(j, q)| {
            j != idx && (q.value - pair.value).norm() <= opts.tol_cluster * (1.0 + pair.value.norm())
        });
        let wnorm = pair.vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let last = pair.vector[d - 1];
        if last.norm() < opts.tol_inf * wnorm || last.norm() == 0.0 {
            solutions.push(Solution {
                coords: Vec::new(),
                lambda: pair.value,
                residual: None,
                status: SolutionStatus::AtInfinity,
                clustered,
            });
            continue;
        }
        let v: Vec<Complex64> = pair.vector.iter().map(|z| z / last).collect();
        let mut known: Vec<Option<Complex64>> = vec![None; n];
        for (k, b) in basis.iter().enumerate() {
            if let Some(i) = b.as_variable() {
                known[i] = Some(v[k]);
            }
        }
        let value_of_column = |c: usize, known: &[Option<Complex64>]| -> Option<Complex64> {
            if c >= ne {
                Some(v[c - ne])
            } else {
                monomial_value(&columns[c], known)
            }
        };
        // excessive variables from echelon rows whose pivot is that variable
        loop {
            let mut progress = false;
            for c in (0..ne).rev() {
                let Some(var) = columns[c].as_variable() else { continue };
                if known[var].is_some() {
                    continue;
                }
                let Some(p) = reduction.pivots[c] else { continue };
                let row = &reduction.rows[p];
                let mut rest = Complex64::new(0.0, 0.0);
                let mut ok = true;
                for (k, a) in row.iter().enumerate() {
                    if k == c || a.norm() == 0.0 {
                        continue;
                    }
                    match value_of_column(k, &known) {
                        Some(val) => rest += a * val,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    known[var] = Some(-rest / row[c]);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
        // one remaining unknown can come from lambda = f(P)
        let missing: Vec<usize> = (0..n).filter(|&i| known[i].is_none()).collect();
        if missing.len() == 1 {
            let u = missing[0];
            let mut coeff = Complex64::new(0.0, 0.0);
            let mut rest = Complex64::new(0.0, 0.0);
            let mut ok = true;
            for (m, c) in inst.action.terms() {
                let cz = c.to_complex();
                if m.exponents()[u] == 0 {
                    match monomial_value(m, &known) {
                        Some(val) => rest += cz * val,
                        None => ok = false,
                    }
                } else if m.as_variable() == Some(u) {
                    coeff += cz;
                } else {
                    ok = false;
                }
            }
            if ok && coeff.norm() > 0.0 {
                known[u] = Some((pair.value - rest) / coeff);
            }
        }
        if known.iter().any(Option::is_none) {
            solutions.push(Solution {
                coords: Vec::new(),
                lambda: pair.value,
                residual: None,
                status: SolutionStatus::RecoveryFailed,
                clustered,
            });
            continue;
        }
        let coords: Vec<Complex64> = known.into_iter().map(Option::unwrap).collect();
        let (coords, residual) = refine(&generators, coords, opts.refine_steps);
        let status = if residual <= opts.tol_res { SolutionStatus::Ok } else { SolutionStatus::RecoveryFailed };
        solutions.push(Solution { coords, lambda: pair.value, residual: Some(residual), status, clustered });
    }
    SolutionSet { solutions }
}
