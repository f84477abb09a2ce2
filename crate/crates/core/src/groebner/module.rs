//! Gröbner bases of submodules of `R^r`, used for the syzygies of `F`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use crate::coefficients::FieldElement;
use crate::groebner::TrackedBasis;
use crate::polynomials::{Monomial, MonomialOrder, PolyMatrix, Polynomial, RingRef};

/// Position-over-term order weighted by generator degrees.
///
/// `(m, i)` is compared by `deg m + w_i` first, then by grevlex on `m`, and
/// finally the smaller position counts as greater.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleOrder {
    weights: Vec<u32>,
}

impl ModuleOrder {
    pub fn new(weights: Vec<u32>) -> Self {
        ModuleOrder { weights }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weighted_degree(&self, m: &Monomial, i: usize) -> u32 {
        m.degree() + self.weights[i]
    }

    pub fn compare(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        self.weighted_degree(a.0, a.1)
            .cmp(&self.weighted_degree(b.0, b.1))
            .then_with(|| MonomialOrder::GrevLex.compare(a.0, b.0))
            .then_with(|| b.1.cmp(&a.1))
    }
}

/// A total order on the terms `(m, i)` of a free module.
pub trait TermOrder {
    fn compare(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering;
    /// Degree used for pair selection.
    fn degree(&self, m: &Monomial, i: usize) -> u32;
}

impl TermOrder for ModuleOrder {
    fn compare(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        ModuleOrder::compare(self, a, b)
    }
    fn degree(&self, m: &Monomial, i: usize) -> u32 {
        self.weighted_degree(m, i)
    }
}

/// Order on `R x R^r` for lifting: position 0 carries a polynomial under the
/// ring order and dominates every other term; positions `1..=r` follow `tail`.
#[derive(Debug, Clone)]
pub struct LiftOrder<'a> {
    pub head: &'a MonomialOrder,
    pub tail: &'a ModuleOrder,
}

impl TermOrder for LiftOrder<'_> {
    fn compare(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        match (a.1, b.1) {
            (0, 0) => self.head.compare(a.0, b.0),
            (0, _) => Ordering::Greater,
            (_, 0) => Ordering::Less,
            (i, j) => self.tail.compare((a.0, i - 1), (b.0, j - 1)),
        }
    }
    fn degree(&self, m: &Monomial, i: usize) -> u32 {
        if i == 0 { m.degree() } else { self.tail.weighted_degree(m, i - 1) }
    }
}

pub type ModuleTerm = (Monomial, usize, FieldElement);

/// Sparse element of `R^r`, terms strictly decreasing in a [`ModuleOrder`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    terms: Vec<ModuleTerm>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        ModuleVector { terms: Vec::new() }
    }

    pub fn from_row(row: &[Polynomial], ord: &impl TermOrder) -> Self {
        let mut terms: Vec<ModuleTerm> = row
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.terms().iter().map(move |(m, c)| (m.clone(), i, c.clone())))
            .collect();
        terms.sort_by(|a, b| ord.compare((&b.0, b.1), (&a.0, a.1)));
        ModuleVector { terms }
    }

    pub fn to_row(&self, ring: &RingRef, rank: usize) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(Monomial, FieldElement)>> = vec![Vec::new(); rank];
        for (m, i, c) in &self.terms {
            parts[*i].push((m.clone(), c.clone()));
        }
        parts.into_iter().map(|ts| Polynomial::from_terms(ring, ts)).collect()
    }

    pub fn terms(&self) -> &[ModuleTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&ModuleTerm> {
        self.terms.first()
    }

    /// Drop position 0 (which must be empty) and renumber the rest.
    pub(crate) fn shifted_down(&self) -> Self {
        ModuleVector { terms: self.terms.iter().map(|(m, i, c)| (m.clone(), i - 1, c.clone())).collect() }
    }

    fn scaled(&self, c: &FieldElement) -> Self {
        ModuleVector { terms: self.terms.iter().map(|(m, i, x)| (m.clone(), *i, x * c)).collect() }
    }
}

/// `a + c * m * b`, merged in one pass.
fn merge(a: &[ModuleTerm], c: &FieldElement, m: &Monomial, b: &[ModuleTerm], ord: &impl TermOrder) -> Vec<ModuleTerm> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.iter().peekable();
    let mut ib = b.iter().map(|(bm, bi, bc)| (bm.mul(m), *bi, bc * c)).peekable();
    loop {
        let step = match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some(x), Some(y)) => ord.compare((&x.0, x.1), (&y.0, y.1)),
        };
        match step {
            Ordering::Greater => out.push(ia.next().unwrap().clone()),
            Ordering::Less => out.push(ib.next().unwrap()),
            Ordering::Equal => {
                let x = ia.next().unwrap();
                let y = ib.next().unwrap();
                let s = &x.2 + &y.2;
                if !s.is_zero() {
                    out.push((y.0, y.1, s));
                }
            }
        }
    }
    out
}

/// Full reduction of `v` by `basis`, lowest-index reducer first.
pub fn module_normal_form(v: &ModuleVector, basis: &[ModuleVector], ord: &impl TermOrder) -> ModuleVector {
    reduce(v, basis, ord, true)
}

fn reduce(v: &ModuleVector, basis: &[ModuleVector], ord: &impl TermOrder, full: bool) -> ModuleVector {
    let leads: Vec<Option<(&Monomial, usize, FieldElement)>> =
        basis.iter().map(|g| g.leading().map(|(m, i, c)| (m, *i, c.inv().expect("nonzero")))).collect();
    let mut rem = Vec::new();
    let mut p = v.terms.clone();
    let mut start = 0;
    while start < p.len() {
        let (m, i, c) = &p[start];
        let red = leads.iter().enumerate().find_map(|(k, l)| {
            let (lm, li, inv) = l.as_ref()?;
            if li != i {
                return None;
            }
            lm.quotient_of(m).map(|shift| (k, shift, -&(c * inv)))
        });
        match red {
            Some((k, shift, q)) => {
                p = merge(&p[start + 1..], &q, &shift, &basis[k].terms[1..], ord);
                start = 0;
            }
            None if !full => {
                rem.extend_from_slice(&p[start..]);
                break;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    ModuleVector { terms: rem }
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
///
/// Pairs are taken by smallest sugar degree; only pairs with equal leading
/// positions are formed and the chain criterion skips redundant ones.
pub fn module_groebner_basis(gens: &[ModuleVector], ord: &impl TermOrder) -> Vec<ModuleVector> {
    let monic = |v: ModuleVector| {
        let inv = v.leading().expect("nonzero").2.inv().expect("nonzero");
        v.scaled(&inv)
    };
    let sugar_of = |v: &ModuleVector| v.terms.iter().map(|(m, i, _)| ord.degree(m, *i)).max().unwrap_or(0);
    let mut basis: Vec<ModuleVector> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    for g in gens {
        let r = reduce(g, &basis, ord, false);
        if !r.is_zero() {
            sugar.push(sugar_of(g));
            basis.push(monic(r));
        }
    }
    let lead = |v: &ModuleVector| {
        let (m, i, _) = v.leading().unwrap();
        (m.clone(), *i)
    };
    let mut pending: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    let add_pairs = |basis: &[ModuleVector], sugar: &[u32], j: usize, pending: &mut BTreeSet<_>, set: &mut HashSet<_>| {
        let (mj, ij) = lead(&basis[j]);
        for (k, b) in basis.iter().enumerate().take(j) {
            let (mk, ik) = lead(b);
            if ik == ij {
                let l = mj.lcm(&mk);
                let sj = sugar[j] + l.degree() - mj.degree();
                let sk = sugar[k] + l.degree() - mk.degree();
                pending.insert((sj.max(sk), k, j));
                set.insert((k, j));
            }
        }
    };
    for j in 0..basis.len() {
        add_pairs(&basis, &sugar, j, &mut pending, &mut pending_set);
    }
    while let Some((sug, a, b)) = pending.pop_first() {
        pending_set.remove(&(a, b));
        let (ma, ia) = lead(&basis[a]);
        let (mb, _) = lead(&basis[b]);
        let l = ma.lcm(&mb);
        let chain = (0..basis.len()).any(|k| {
            if k == a || k == b {
                return false;
            }
            let (mk, ik) = lead(&basis[k]);
            ik == ia
                && mk.divides(&l)
                && !pending_set.contains(&(a.min(k), a.max(k)))
                && !pending_set.contains(&(b.min(k), b.max(k)))
        });
        if chain {
            continue;
        }
        let one = basis[a].terms[0].2.one_like();
        let ua = ma.quotient_of(&l).unwrap();
        let ub = mb.quotient_of(&l).unwrap();
        let s = merge(&[], &one, &ua, &basis[a].terms, ord);
        let s = merge(&s, &-&one, &ub, &basis[b].terms, ord);
        let r = reduce(&ModuleVector { terms: s }, &basis, ord, false);
        if !r.is_zero() {
            basis.push(monic(r));
            sugar.push(sug);
            add_pairs(&basis, &sugar, basis.len() - 1, &mut pending, &mut pending_set);
        }
    }
    interreduce(basis, ord)
}

/// Drop non-minimal elements, reduce tails against the rest and sort ascending.
fn interreduce(basis: Vec<ModuleVector>, ord: &impl TermOrder) -> Vec<ModuleVector> {
    let lead = |v: &ModuleVector| {
        let (m, i, _) = v.leading().unwrap();
        (m.clone(), *i)
    };
    let leads: Vec<(Monomial, usize)> = basis.iter().map(lead).collect();
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&i| {
            !(0..basis.len()).any(|j| {
                j != i && leads[j].1 == leads[i].1 && leads[j].0.divides(&leads[i].0) && (leads[j].0 != leads[i].0 || j < i)
            })
        })
        .collect();
    let mut out: Vec<ModuleVector> = keep.into_iter().map(|i| basis[i].clone()).collect();
    // ascending, so each tail only needs the elements reduced before it
    out.sort_by(|x, y| {
        let (a, b) = (x.leading().unwrap(), y.leading().unwrap());
        ord.compare((&a.0, a.1), (&b.0, b.1))
    });
    for i in 0..out.len() {
        let head = out[i].terms[0].clone();
        let tail = module_normal_form(&ModuleVector { terms: out[i].terms[1..].to_vec() }, &out[..i], ord);
        let mut terms = vec![head];
        terms.extend(tail.terms);
        out[i] = ModuleVector { terms };
    }
    out
}

/// Gröbner basis of the first syzygy module of a generator list, as
/// computed alongside the tracked basis.
#[derive(Debug, Clone)]
pub struct SyzygyBasis {
    pub ring: RingRef,
    pub order: ModuleOrder,
    pub basis: Vec<ModuleVector>,
}

impl SyzygyBasis {
    pub fn new(tb: &TrackedBasis) -> Self {
        SyzygyBasis { ring: tb.ring.clone(), order: tb.syzygy_order.clone(), basis: tb.syzygy_basis.clone() }
    }

    pub fn rank(&self) -> usize {
        self.order.rank()
    }

    pub fn rows(&self) -> PolyMatrix {
        self.basis.iter().map(|v| v.to_row(&self.ring, self.rank())).collect()
    }

    /// Normal form of a cofactor row modulo the syzygies.
    pub fn reduce_row(&self, row: &[Polynomial]) -> Vec<Polynomial> {
        let v = ModuleVector::from_row(row, &self.order);
        module_normal_form(&v, &self.basis, &self.order).to_row(&self.ring, self.rank())
    }
}
