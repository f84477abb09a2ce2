//! Built-in problem families with seeded synthetic data.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coefficients::{FieldDescriptor, FieldElement};
use crate::polynomials::{MonomialOrder, PolyError, Polynomial, Ring, RingRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusName {
    Circles,
    QuaternionPose,
    Essential5pt,
    FocalFundamental,
}

impl CorpusName {
    pub const ALL: [CorpusName; 4] =
        [CorpusName::Circles, CorpusName::QuaternionPose, CorpusName::Essential5pt, CorpusName::FocalFundamental];

    pub fn as_str(&self) -> &'static str {
        match self {
            CorpusName::Circles => "circles",
            CorpusName::QuaternionPose => "quaternion_pose",
            CorpusName::Essential5pt => "essential5pt",
            CorpusName::FocalFundamental => "focal_fundamental",
        }
    }

    /// Field the offline phase runs over by default.
    pub fn construction_field(&self) -> FieldDescriptor {
        match self {
            CorpusName::FocalFundamental | CorpusName::QuaternionPose => FieldDescriptor::Prime(32749),
            _ => FieldDescriptor::Rational,
        }
    }
}

impl fmt::Display for CorpusName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorpusName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CorpusName::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown corpus problem `{s}`"))
    }
}

/// One generated instance.
#[derive(Debug, Clone)]
pub struct CorpusInstance {
    pub name: CorpusName,
    pub ring: RingRef,
    pub generators: Vec<Polynomial>,
    pub action: Polynomial,
    /// Known solution, when the generator plants one.
    pub ground_truth: Option<Vec<Complex64>>,
}

impl CorpusInstance {
    /// Largest generator magnitude at the ground truth.
    pub fn ground_truth_residual(&self) -> Option<f64> {
        let p = self.ground_truth.as_ref()?;
        Some(self.generators.iter().map(|g| g.eval_complex(p).norm()).fold(0.0, f64::max))
    }

    /// The same instance with coefficients mapped into another field.
    pub fn over(&self, field: FieldDescriptor) -> Result<CorpusInstance, PolyError> {
        let ring = self.ring.with_field(field);
        Ok(CorpusInstance {
            name: self.name,
            generators: self.generators.iter().map(|g| g.map_into(&ring)).collect::<Result<_, _>>()?,
            action: self.action.map_into(&ring)?,
            ground_truth: self.ground_truth.clone(),
            ring,
        })
    }
}

/// Random rational with numerator in [-9, 9] \ {0} and denominator in [1, 9].
pub fn random_rational(rng: &mut impl Rng) -> FieldElement {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-9..=9);
    }
    FieldElement::rational(n, rng.gen_range(1..=9))
}

/// Homogeneous linear form with nonzero small integer coefficients on every variable.
pub fn random_linear_form(ring: &RingRef, rng: &mut impl Rng) -> Polynomial {
    let terms = (0..ring.nvars())
        .map(|i| {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-9..=9);
            }
            (ring.variable_monomial(i), ring.field().from_i64(c))
        })
        .collect();
    Polynomial::from_terms(ring, terms)
}

pub fn generate(name: CorpusName, seed: u64) -> CorpusInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match name {
        CorpusName::Circles => circles(seed, &mut rng),
        CorpusName::QuaternionPose => quaternion_pose(&mut rng),
        CorpusName::Essential5pt => essential(&mut rng),
        CorpusName::FocalFundamental => focal(&mut rng),
    }
}

fn q_ring(vars: &[&str], order: MonomialOrder) -> RingRef {
    Ring::new(vars, FieldDescriptor::Rational, order).expect("valid corpus ring")
}

fn parse(r: &RingRef, s: &str) -> Polynomial {
    crate::polynomials::parse_polynomial(s, r).expect("corpus polynomial")
}

/// The two-curve systems. Seed 0 is the first printed system, seed 1 the
/// second; larger seeds draw random coefficients on the same supports.
fn circles(seed: u64, rng: &mut ChaCha8Rng) -> CorpusInstance {
    let r = q_ring(&["x", "y"], MonomialOrder::GrevLex);
    let generators = match seed {
        0 => vec![parse(&r, "x^2+y^2-1"), parse(&r, "x^2+y^3+x*y-2")],
        1 => vec![parse(&r, "x^2+y^2-2"), parse(&r, "x^2+y^3+3*x*y-5")],
        _ => {
            let supports = [vec!["x^2", "y^2", "1"], vec!["x^2", "y^3", "x*y", "1"]];
            supports
                .iter()
                .map(|sup| sup.iter().fold(Polynomial::zero(&r), |acc, m| &acc + &parse(&r, m).scale(&random_rational(rng))))
                .collect()
        }
    };
    CorpusInstance { name: CorpusName::Circles, action: parse(&r, "x + 4*y"), ring: r, generators, ground_truth: None }
}

type Mat3 = [[Polynomial; 3]; 3];

fn mat3(f: impl Fn(usize, usize) -> Polynomial) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    mat3(|i, j| (0..3).fold(Polynomial::zero(a[0][0].ring()), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
}

fn transpose(a: &Mat3) -> Mat3 {
    mat3(|i, j| a[j][i].clone())
}

fn trace(a: &Mat3) -> Polynomial {
    &(&a[0][0] + &a[1][1]) + &a[2][2]
}

fn det(a: &Mat3) -> Polynomial {
    let minor = |i: usize, j: usize, k: usize, l: usize| &(&a[i][k] * &a[j][l]) - &(&a[i][l] * &a[j][k]);
    let t0 = &a[2][0] * &minor(0, 1, 1, 2);
    let t1 = &a[2][1] * &minor(0, 1, 0, 2);
    let t2 = &a[2][2] * &minor(0, 1, 0, 1);
    &(&t0 - &t1) + &t2
}

fn random_matrix(r: &RingRef, rng: &mut ChaCha8Rng) -> Mat3 {
    let mut m = mat3(|_, _| Polynomial::zero(r));
    for row in m.iter_mut() {
        for e in row.iter_mut() {
            *e = Polynomial::constant(r, random_rational(rng));
        }
    }
    m
}

/// Rotation-scaled matrix of a quaternion: `R R^T = |q|^4 I`.
pub fn quaternion_map(w: &Polynomial, x: &Polynomial, y: &Polynomial, z: &Polynomial) -> Mat3 {
    let two = |p: &Polynomial| p.scale(&p.ring().field().from_i64(2));
    let (ww, xx, yy, zz) = (w * w, x * x, y * y, z * z);
    [
        [&(&(&ww + &xx) - &yy) - &zz, two(&(&(x * y) - &(w * z))), two(&(&(w * y) + &(x * z)))],
        [two(&(&(x * y) + &(w * z))), &(&(&ww - &xx) + &yy) - &zz, two(&(&(y * z) - &(w * x)))],
        [two(&(&(x * z) - &(w * y))), two(&(&(w * x) + &(y * z))), &(&(&ww - &xx) - &yy) + &zz],
    ]
}

fn cross(a: &[FieldElement; 3], b: &[FieldElement; 3]) -> [FieldElement; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// Camera rotation and focal length from two 3D lines and their images.
fn quaternion_pose(rng: &mut ChaCha8Rng) -> CorpusInstance {
    let r = q_ring(&["w", "x", "y", "z", "f"], MonomialOrder::GrevLex);
    let point = |rng: &mut ChaCha8Rng| -> [FieldElement; 3] { std::array::from_fn(|_| random_rational(rng)) };
    // affine points a, b1, b2 (last homogeneous coordinate is 1)
    let a = point(rng);
    let b1 = point(rng);
    let b2 = point(rng);
    let truth: Vec<FieldElement> = (0..5).map(|_| random_rational(rng)).collect();

    let c = |v: &FieldElement| Polynomial::constant(&r, v.clone());
    let r0 = quaternion_map(&c(&truth[0]), &c(&truth[1]), &c(&truth[2]), &c(&truth[3]));
    let image = |p: &[FieldElement; 3]| -> [FieldElement; 3] {
        // diag(f0, f0, 1) * R0 * p; the translation column is zero
        std::array::from_fn(|i| {
            let v = (0..3).fold(FieldElement::rational(0, 1), |acc, k| &acc + &(r0[i][k].coefficient(&r.one_monomial()) * p[k].clone()));
            if i < 2 { &v * &truth[4] } else { v }
        })
    };
    let l1 = cross(&image(&a), &image(&b1));
    let l2 = cross(&image(&a), &image(&b2));

    let var = |i| Polynomial::variable(&r, i);
    let rot = quaternion_map(&var(0), &var(1), &var(2), &var(3));
    let f = var(4);
    let constraint = |l: &[FieldElement; 3], p: &[FieldElement; 3]| {
        (0..3).fold(Polynomial::zero(&r), |acc, i| {
            let rp = (0..3).fold(Polynomial::zero(&r), |s, k| &s + &rot[i][k].scale(&p[k]));
            let row = if i < 2 { &f * &rp } else { rp };
            &acc + &row.scale(&l[i])
        })
    };
    // unit-size coefficients keep the float residual at roundoff level
    let constraint = |l: &[FieldElement; 3], p: &[FieldElement; 3]| {
        let g = constraint(l, p);
        let big = g.terms().iter().map(|(_, c)| c).max_by(|a, b| a.magnitude().total_cmp(&b.magnitude())).cloned();
        big.map_or(g.clone(), |c| g.scale(&c.inv().expect("nonzero coefficient")))
    };
    let norm = parse(&r, "w^2+x^2+y^2+z^2-1");
    let generators = vec![norm, constraint(&l1, &a), constraint(&l1, &b1), constraint(&l2, &a), constraint(&l2, &b2)];

    let q: Vec<f64> = truth.iter().map(|t| t.to_complex().re).collect();
    let qn = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    let ground = vec![q[0] / qn, q[1] / qn, q[2] / qn, q[3] / qn, q[4]].into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let action = random_linear_form(&r, rng);
    CorpusInstance { name: CorpusName::QuaternionPose, ring: r, generators, action, ground_truth: Some(ground) }
}

/// `E E^T E - tr(E E^T) E / 2` and `det E` for `E = x E1 + y E2 + z E3 + E4`.
pub fn demazure(e: &Mat3) -> Vec<Polynomial> {
    let r = e[0][0].ring().clone();
    let half = FieldElement::rational(1, 2);
    let half = crate::coefficients::convert(&half, r.field()).expect("2 invertible");
    let eet = mat_mul(e, &transpose(e));
    let eete = mat_mul(&eet, e);
    let t = trace(&eet).scale(&half);
    let mut out: Vec<Polynomial> = Vec::with_capacity(10);
    for i in 0..3 {
        for j in 0..3 {
            out.push(&eete[i][j] - &(&t * &e[i][j]));
        }
    }
    out.push(det(e));
    out
}

fn essential(rng: &mut ChaCha8Rng) -> CorpusInstance {
    let r = q_ring(&["x", "y", "z"], MonomialOrder::GrevLex);
    let es: Vec<Mat3> = (0..4).map(|_| random_matrix(&r, rng)).collect();
    let vars = [Polynomial::variable(&r, 0), Polynomial::variable(&r, 1), Polynomial::variable(&r, 2)];
    let e = mat3(|i, j| (0..3).fold(es[3][i][j].clone(), |acc, k| &acc + &(&vars[k] * &es[k][i][j])));
    let generators = demazure(&e);
    let action = random_linear_form(&r, rng);
    CorpusInstance { name: CorpusName::Essential5pt, ring: r, generators, action, ground_truth: None }
}

/// `2 F Q F^T Q F - tr(F Q F^T Q) F` and `det F` for `F = F1 + y F2 + z F3`, `Q = diag(1, 1, x)`.
pub fn focal_constraints(f: &Mat3, x: &Polynomial) -> Vec<Polynomial> {
    let r = x.ring().clone();
    let q = mat3(|i, j| match (i, j) {
        (2, 2) => x.clone(),
        _ if i == j => Polynomial::one(&r),
        _ => Polynomial::zero(&r),
    });
    let fqftq = mat_mul(&mat_mul(&mat_mul(f, &q), &transpose(f)), &q);
    let big = mat_mul(&fqftq, f);
    let t = trace(&fqftq);
    let two = r.field().from_i64(2);
    let mut out = Vec::with_capacity(10);
    for i in 0..3 {
        for j in 0..3 {
            out.push(&big[i][j].scale(&two) - &(&t * &f[i][j]));
        }
    }
    out.push(det(f));
    out
}

fn focal(rng: &mut ChaCha8Rng) -> CorpusInstance {
    let r = q_ring(&["x", "y", "z"], MonomialOrder::GrevLex);
    let fs: Vec<Mat3> = (0..4).map(|_| random_matrix(&r, rng)).collect();
    let (x, y, z) = (Polynomial::variable(&r, 0), Polynomial::variable(&r, 1), Polynomial::variable(&r, 2));
    let f = mat3(|i, j| &(&fs[0][i][j] + &(&y * &fs[1][i][j])) + &(&z * &fs[2][i][j]));
    let generators = focal_constraints(&f, &x);
    CorpusInstance { name: CorpusName::FocalFundamental, action: x, ring: r, generators, ground_truth: None }
}
