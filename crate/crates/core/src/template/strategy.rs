//! Choice of the cofactor matrix `H` with `f v(B) - A v(B) = H v(F)`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coefficients::FieldElement;
use crate::groebner::{QuotientBasis, SyzygyBasis, TrackedBasis};
use crate::polynomials::{matmul, Monomial, PolyMatrix, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Default,
    Larsson,
    Greedy,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Default, Strategy::Larsson, Strategy::Greedy];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Default => "default",
            Strategy::Larsson => "larsson",
            Strategy::Greedy => "greedy",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "default" => Ok(Strategy::Default),
            "larsson" => Ok(Strategy::Larsson),
            "greedy" => Ok(Strategy::Greedy),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

/// d x r cofactor matrix together with the strategy that produced it.
#[derive(Debug, Clone)]
pub struct HMatrix {
    pub entries: PolyMatrix,
    pub strategy: Strategy,
    /// Set when the greedy search stopped at its iteration cap.
    pub capped: bool,
}

impl HMatrix {
    pub fn max_degree(&self) -> u32 {
        self.entries.iter().flatten().filter_map(Polynomial::degree).max().unwrap_or(0)
    }
}

/// Everything the strategies need besides `H` itself.
pub struct StrategyContext<'a> {
    pub tracked: &'a TrackedBasis,
    pub syzygies: &'a SyzygyBasis,
    pub action: &'a Polynomial,
    pub basis: &'a QuotientBasis,
}

impl StrategyContext<'_> {
    /// `#S(H) + #E(H)`.
    pub fn cost(&self, h: &PolyMatrix) -> usize {
        CostState::new(self, h).cost()
    }
}

/// `H_0 = H_GA C`.
pub fn h_default(tb: &TrackedBasis, h_ga: &PolyMatrix) -> HMatrix {
    HMatrix { entries: matmul(h_ga, &tb.to_basis, &tb.ring), strategy: Strategy::Default, capped: false }
}

/// Rows of `H_0` replaced by their normal forms modulo the syzygy module.
///
/// Normal forms minimise the leading module term, which usually but not
/// always shrinks the template; when it would grow, `H_0` is kept.
pub fn h_larsson(h0: &HMatrix, ctx: &StrategyContext) -> HMatrix {
    let reduced: PolyMatrix = h0.entries.iter().map(|row| ctx.syzygies.reduce_row(row)).collect();
    let entries = if ctx.cost(&reduced) <= ctx.cost(&h0.entries) { reduced } else { h0.entries.clone() };
    HMatrix { entries, strategy: Strategy::Larsson, capped: false }
}

/// Local search from the Larsson matrix: keep adding monomial multiples of
/// syzygies while the template cost strictly drops.
pub fn h_greedy(h0: &HMatrix, ctx: &StrategyContext) -> HMatrix {
    let start = h_larsson(h0, ctx);
    let degree_cap = h0.max_degree();
    let r = ctx.tracked.generators.len();
    let cap = 200 * r * ctx.basis.len().max(1);
    greedy_search(start.entries, ctx, degree_cap, cap)
}

pub(crate) fn greedy_search(mut h: PolyMatrix, ctx: &StrategyContext, degree_cap: u32, cap: usize) -> HMatrix {
    let syz = ctx.syzygies.rows();
    let weights = ctx.syzygies.order.clone();
    let mut state = CostState::new(ctx, &h);
    let mut accepted = 0usize;
    let mut capped = false;
    // sweep the targets heaviest first, applying every improving move, until
    // a full sweep finds none
    'sweep: loop {
        let mut improved = false;
        let mut targets = state.pairs();
        targets.sort_by(|a, b| weights.compare((&b.1, b.0), (&a.1, a.0)));
        for (k, m) in targets {
            let rows: Vec<usize> = (0..h.len()).filter(|&j| !h[j][k].coefficient(&m).is_zero()).collect();
            if rows.is_empty() {
                continue;
            }
            'moves: for s in &syz {
                for (sm, sc) in s[k].terms() {
                    let Some(theta) = sm.quotient_of(&m) else { continue };
                    if theta.degree() > degree_cap {
                        continue;
                    }
                    let current = state.cost();
                    let inv = sc.inv().expect("nonzero");
                    let factors: Vec<(usize, FieldElement)> =
                        rows.iter().map(|&j| (j, -&(&h[j][k].coefficient(&m) * &inv))).collect();
                    // Lower bound on the cost change from pair toggles alone: a pair
                    // nobody holds is created by every touched row, one that vanishes
                    // saves itself plus the excessive monomials it might free. Only held
                    // pairs need coefficient lookups.
                    let mut bound = 0i64;
                    let mut removed = Vec::new();
                    for (kk, q) in s.iter().enumerate() {
                        for (qm, qc) in q.terms() {
                            let mu = qm.mul(&theta);
                            let held = state.pair_count.get(&(kk, mu.clone())).copied().unwrap_or(0);
                            if held == 0 {
                                bound += 1;
                                continue;
                            }
                            if held as usize > factors.len() {
                                // some untouched row keeps it
                                continue;
                            }
                            let mut after = held as i64;
                            for (j, c) in &factors {
                                let old = h[*j][kk].coefficient(&mu);
                                let new = &old + &(c * qc);
                                after += old.is_zero() as i64 - new.is_zero() as i64;
                            }
                            if after == 0 {
                                removed.push((kk, mu));
                            }
                        }
                    }
                    bound -= state.max_savings(&removed);
                    if bound >= 0 {
                        continue;
                    }
                    // exact change: pairs that appear or vanish row by row
                    let mut delta: Vec<(usize, Monomial, i32)> = Vec::new();
                    for (kk, q) in s.iter().enumerate() {
                        for (qm, qc) in q.terms() {
                            let mu = qm.mul(&theta);
                            for (j, c) in &factors {
                                let old = h[*j][kk].coefficient(&mu);
                                let new = &old + &(c * qc);
                                match (old.is_zero(), new.is_zero()) {
                                    (true, false) => delta.push((kk, mu.clone(), 1)),
                                    (false, true) => delta.push((kk, mu.clone(), -1)),
                                    _ => {}
                                }
                            }
                        }
                    }
                    for (kk, mu, d) in &delta {
                        state.bump_pair(*kk, mu.clone(), *d);
                    }
                    if state.cost() < current {
                        for (j, c) in &factors {
                            h[*j] = h[*j].iter().zip(s).map(|(p, q)| p.add_scaled(c, &theta, q)).collect();
                        }
                        accepted += 1;
                        improved = true;
                        if accepted >= cap {
                            capped = true;
                            break 'sweep;
                        }
                        // the target pair is gone from every row
                        break 'moves;
                    }
                    for (kk, mu, d) in delta.into_iter().rev() {
                        state.bump_pair(kk, mu, -d);
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    HMatrix { entries: h, strategy: Strategy::Greedy, capped }
}

/// Incremental `#S + #E` bookkeeping.
struct CostState<'a> {
    supports: Vec<Vec<Monomial>>,
    basis: &'a QuotientBasis,
    basis_set: HashSet<Monomial>,
    /// rows containing each shift pair
    pair_count: HashMap<(usize, Monomial), u32>,
    /// shift pairs (plus the fixed action supports) covering each monomial
    mono_count: HashMap<Monomial, u32>,
    excessive: usize,
}

impl<'a> CostState<'a> {
    fn new(ctx: &StrategyContext<'a>, h: &PolyMatrix) -> Self {
        let supports = ctx.tracked.generators.iter().map(Polynomial::support).collect();
        let basis_set: HashSet<Monomial> = ctx.basis.monomials.iter().cloned().collect();
        let mut st = CostState {
            supports,
            basis: ctx.basis,
            basis_set,
            pair_count: HashMap::new(),
            mono_count: HashMap::new(),
            excessive: 0,
        };
        for b in &st.basis.monomials {
            for m in ctx.action.mul_monomial(b).support() {
                st.bump_mono(m, 1);
            }
        }
        for row in h {
            st.add_row(row, 1);
        }
        st
    }

    fn cost(&self) -> usize {
        self.pair_count.len() + self.excessive
    }

    fn pairs(&self) -> Vec<(usize, Monomial)> {
        let mut out: Vec<_> = self.pair_count.keys().cloned().collect();
        out.sort();
        out
    }

    fn bump_mono(&mut self, m: Monomial, delta: i32) {
        let in_basis = self.basis_set.contains(&m);
        let e = self.mono_count.entry(m.clone()).or_insert(0);
        let before = *e;
        *e = (before as i32 + delta) as u32;
        let after = *e;
        if !in_basis {
            if before == 0 && after > 0 {
                self.excessive += 1;
            } else if before > 0 && after == 0 {
                self.excessive -= 1;
            }
        }
        if after == 0 {
            self.mono_count.remove(&m);
        }
    }

    fn bump_pair(&mut self, k: usize, m: Monomial, delta: i32) {
        let e = self.pair_count.entry((k, m.clone())).or_insert(0);
        let before = *e;
        *e = (before as i32 + delta) as u32;
        let after = *e;
        let toggled = (before == 0) != (after == 0);
        if after == 0 {
            self.pair_count.remove(&(k, m.clone()));
        }
        if toggled {
            let sign = if after > 0 { 1 } else { -1 };
            let shifted: Vec<Monomial> = self.supports[k].iter().map(|g| g.mul(&m)).collect();
            for s in shifted {
                self.bump_mono(s, sign);
            }
        }
    }

    /// Upper bound on the cost drop from removing all of `pairs`: each pair,
    /// plus each excessive monomial covered by no more pairs than are removed.
    fn max_savings(&self, pairs: &[(usize, Monomial)]) -> i64 {
        let limit = pairs.len() as u32;
        let mut freed = HashSet::new();
        for (k, m) in pairs {
            for g in &self.supports[*k] {
                let w = g.mul(m);
                if !self.basis_set.contains(&w) && self.mono_count.get(&w).is_some_and(|&c| c <= limit) {
                    freed.insert(w);
                }
            }
        }
        (pairs.len() + freed.len()) as i64
    }

    fn add_row(&mut self, row: &[Polynomial], delta: i32) {
        for (k, p) in row.iter().enumerate() {
            for (m, _) in p.terms() {
                self.bump_pair(k, m.clone(), delta);
            }
        }
    }
}
