use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Dense exponent vector, one slot per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[index] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Index of the variable when this is a pure first power `x_i`.
    pub fn as_variable(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    /// Index of the variable when this is a pure power `x_i^e`, `e >= 1`.
    pub fn as_variable_power(&self) -> Option<usize> {
        let mut nz = self.0.iter().enumerate().filter(|(_, &e)| e > 0);
        match (nz.next(), nz.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub(crate) fn slot_mut(&mut self, i: usize) -> &mut u32 {
        &mut self.0[i]
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Supported monomial orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[derive(Default)]
pub enum MonomialOrder {
    Lex,
    #[serde(rename = "grevlex")]
    #[default]
    GrevLex,
    /// Elimination order for an auxiliary variable `s` stored in the last
    /// exponent slot: compare the `s` exponents first, then `inner` on the rest.
    ElimS(Box<MonomialOrder>),
}


impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        compare_exponents(self, a.exponents(), b.exponents())
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::ElimS(inner) => format!("elim_s({})", inner.name()),
        }
    }

    /// Extra exponent slots the order needs beyond the ring variables.
    pub fn extra_slots(&self) -> usize {
        match self {
            MonomialOrder::ElimS(inner) => 1 + inner.extra_slots(),
            _ => 0,
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "grevlex" => Ok(MonomialOrder::GrevLex),
            _ => {
                let inner = s
                    .strip_prefix("elim_s(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| format!("unknown monomial order `{s}`"))?;
                Ok(MonomialOrder::ElimS(Box::new(inner.parse()?)))
            }
        }
    }
}

fn compare_exponents(order: &MonomialOrder, a: &[u32], b: &[u32]) -> Ordering {
    match order {
        MonomialOrder::Lex => a.cmp(b),
        MonomialOrder::GrevLex => {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            match da.cmp(&db) {
                Ordering::Equal => {
                    // last differing slot decides; the smaller exponent is larger
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                }
                other => other,
            }
        }
        MonomialOrder::ElimS(inner) => {
            let n = a.len() - 1;
            a[n].cmp(&b[n]).then_with(|| compare_exponents(inner, &a[..n], &b[..n]))
        }
    }
}
