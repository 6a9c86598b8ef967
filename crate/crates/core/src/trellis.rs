//! Trellis digraphs of inhomogeneous products.
//!
//! Layer `l` of the trellis (1 ≤ l ≤ k) carries the weights of the `l`-th
//! factor; walks `i:0 → j:k` correspond to index chains of the product, so
//! the heaviest full walk is the product entry. Initial walks end at node 0
//! and touch it only there; final walks start at node 0 and never return.
//!
//! Every DP here breaks ties the same way the brute-force enumerator does:
//! heaviest first, then shortest, then lexicographically smallest node list.

use std::cmp::Ordering;

use crate::bounds::{bound_from_parts, closed_form, BoundInputs, BoundMode, BoundReport, BoundValue};
use crate::error::{Error, Result};
use crate::family::MatrixFamily;
use crate::graph;
use crate::matrix::TropicalMatrix;
use crate::product::ProductSequence;
use crate::scalar::{Epsilon, TropicalScalar, Weight};

/// Largest node count [`enumerate_walks`] accepts.
pub const ENUMERATION_MAX_NODES: usize = 6;
/// Largest product length [`enumerate_walks`] accepts.
pub const ENUMERATION_MAX_LAYERS: usize = 12;

#[derive(Clone, Debug)]
pub struct TrellisDigraph<'a, T> {
    n: usize,
    layers: Vec<&'a TropicalMatrix<T>>,
}

/// A trellis node `(node, layer)`.
pub type TrellisNode = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkSummary<T> {
    pub weight: TropicalScalar<T>,
    /// Length of `witness`.
    pub length: usize,
    pub min_length_among_optima: usize,
    /// Heaviest, then shortest, then lexicographically smallest walk.
    /// `None` when no walk of the class exists.
    pub witness: Option<Vec<TrellisNode>>,
}

impl<T: Weight> WalkSummary<T> {
    fn none() -> Self {
        Self {
            weight: Epsilon,
            length: 0,
            min_length_among_optima: 0,
            witness: None,
        }
    }

    fn from_witness(weight: TropicalScalar<T>, witness: Vec<TrellisNode>) -> Self {
        let length = witness.len() - 1;
        Self {
            weight,
            length,
            min_length_among_optima: length,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkClass {
    Full,
    Initial,
    Final,
}

impl<'a, T: Weight> TrellisDigraph<'a, T> {
    pub fn new(family: &'a MatrixFamily<T>, seq: &ProductSequence) -> Result<Self> {
        let layers = seq
            .indices()
            .iter()
            .map(|&idx| family.member(idx))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n: family.n(),
            layers,
        })
    }

    /// Node count per layer.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of factors, i.e. edge layers.
    pub fn k(&self) -> usize {
        self.layers.len()
    }

    /// Weight of the edge `i:(l-1) → j:l`.
    pub fn edge(&self, l: usize, i: usize, j: usize) -> &TropicalScalar<T> {
        self.layers[l - 1].get(i, j)
    }

    /// Re-scores a walk given as consecutive trellis nodes.
    pub fn walk_weight(&self, walk: &[TrellisNode]) -> TropicalScalar<T> {
        walk.windows(2).fold(TropicalScalar::unit(), |acc, pair| {
            let ((u, lu), (v, lv)) = (pair[0], pair[1]);
            assert_eq!(lu + 1, lv, "walk must advance one layer per step");
            acc.otimes(self.edge(lv, u, v))
        })
    }

    /// `best[l][x]`: heaviest walk `x:l → end:to` through allowed positions.
    fn backward_table(
        &self,
        from: usize,
        to: usize,
        end: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
    ) -> Vec<Vec<TropicalScalar<T>>> {
        let mut table = vec![vec![Epsilon; self.n]; to - from + 1];
        if allowed(end, to) {
            table[to - from][end] = TropicalScalar::unit();
        }
        for l in (from..to).rev() {
            let (head, tail) = table.split_at_mut(l - from + 1);
            let (cur, next) = (&mut head[l - from], &tail[0]);
            for (x, slot) in cur.iter_mut().enumerate() {
                if !allowed(x, l) {
                    continue;
                }
                for (y, ny) in next.iter().enumerate() {
                    slot.oplus_assign(self.edge(l + 1, x, y).otimes(ny));
                }
            }
        }
        table
    }

    /// Lexicographically smallest heaviest walk `start:from → end:to`.
    fn best_walk(
        &self,
        start: usize,
        from: usize,
        end: usize,
        to: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
    ) -> WalkSummary<T> {
        let table = self.backward_table(from, to, end, allowed);
        let weight = table[0][start].clone();
        if weight.is_epsilon() {
            return WalkSummary::none();
        }
        let mut witness = vec![(start, from)];
        let mut x = start;
        for l in from..to {
            let target = &table[l - from][x];
            let next = (0..self.n)
                .find(|&y| self.edge(l + 1, x, y).otimes(&table[l - from + 1][y]) == *target)
                .expect("an optimal successor exists");
            witness.push((next, l + 1));
            x = next;
        }
        WalkSummary::from_witness(weight, witness)
    }

    /// Heaviest walk `i:0 → j:k`; its weight is the product entry `(i, j)`.
    pub fn optimal_full_walk(&self, i: usize, j: usize) -> WalkSummary<T> {
        self.best_walk(i, 0, j, self.k(), &|_, _| true)
    }

    /// Heaviest full walk `i:0 → j:k` that never visits node 0.
    pub fn optimal_avoiding_walk(&self, i: usize, j: usize) -> WalkSummary<T> {
        self.best_walk(i, 0, j, self.k(), &|x, _| x != 0)
    }

    /// Heaviest full walk `i:0 → j:k` visiting node 0 at least once.
    pub fn optimal_walk_through_first(&self, i: usize, j: usize) -> TropicalScalar<T> {
        let k = self.k();
        let into = self.forward_table(i);
        let out = self.backward_table(0, k, j, &|_, _| true);
        (0..=k).fold(Epsilon, |acc, l| acc.oplus(&into[l][0].otimes(&out[l][0])))
    }

    /// `best[l][x]`: heaviest walk `start:0 → x:l`.
    fn forward_table(&self, start: usize) -> Vec<Vec<TropicalScalar<T>>> {
        let mut table = vec![vec![Epsilon; self.n]; self.k() + 1];
        table[0][start] = TropicalScalar::unit();
        for l in 1..=self.k() {
            let (head, tail) = table.split_at_mut(l);
            let (prev, cur) = (&head[l - 1], &mut tail[0]);
            for (x, px) in prev.iter().enumerate() {
                if px.is_epsilon() {
                    continue;
                }
                for (y, slot) in cur.iter_mut().enumerate() {
                    slot.oplus_assign(px.otimes(self.edge(l, x, y)));
                }
            }
        }
        table
    }

    /// Heaviest initial walk `i:0 → 0:m`; its weight is `w*_i`.
    pub fn optimal_initial_walk(&self, i: usize) -> WalkSummary<T> {
        if i == 0 {
            return WalkSummary::from_witness(TropicalScalar::unit(), vec![(0, 0)]);
        }
        // frontier[x]: heaviest walk i:0 → x:l staying off node 0.
        let mut frontier = vec![Epsilon; self.n];
        frontier[i] = TropicalScalar::unit();
        let mut best: TropicalScalar<T> = Epsilon;
        let mut best_layer = 0;
        for l in 1..=self.k() {
            let mut arrival = Epsilon;
            let mut next = vec![Epsilon; self.n];
            for (x, fx) in frontier.iter().enumerate() {
                if fx.is_epsilon() {
                    continue;
                }
                arrival.oplus_assign(fx.otimes(self.edge(l, x, 0)));
                for (y, slot) in next.iter_mut().enumerate().skip(1) {
                    slot.oplus_assign(fx.otimes(self.edge(l, x, y)));
                }
            }
            if best.tropical_cmp(&arrival) == Ordering::Less {
                best = arrival;
                best_layer = l;
            }
            frontier = next;
        }
        if best.is_epsilon() {
            return WalkSummary::none();
        }
        let summary = self.best_walk(i, 0, 0, best_layer, &|x, l| x != 0 || l == best_layer);
        debug_assert_eq!(summary.weight, best);
        summary
    }

    /// Heaviest final walk `0:l → j:k`; its weight is `v*_j`.
    pub fn optimal_final_walk(&self, j: usize) -> WalkSummary<T> {
        let k = self.k();
        if j == 0 {
            return WalkSummary::from_witness(TropicalScalar::unit(), vec![(0, k)]);
        }
        let table = self.backward_table(0, k, j, &|x, _| x != 0);
        let mut best: TropicalScalar<T> = Epsilon;
        let mut best_layer = 0;
        for l in (0..k).rev() {
            let departure = (1..self.n).fold(Epsilon, |acc, y| {
                acc.oplus(&self.edge(l + 1, 0, y).otimes(&table[l + 1][y]))
            });
            if best.tropical_cmp(&departure) == Ordering::Less {
                best = departure;
                best_layer = l;
            }
        }
        if best.is_epsilon() {
            return WalkSummary::none();
        }
        let summary = self.best_walk(0, best_layer, j, k, &|x, l| x != 0 || l == best_layer);
        debug_assert_eq!(summary.weight, best);
        summary
    }

    /// `w*` as a column vector.
    pub fn w_star(&self) -> Vec<TropicalScalar<T>> {
        (0..self.n).map(|i| self.optimal_initial_walk(i).weight).collect()
    }

    /// `v*` as a column vector.
    pub fn v_star(&self) -> Vec<TropicalScalar<T>> {
        (0..self.n).map(|j| self.optimal_final_walk(j).weight).collect()
    }

    /// α, β, γ, λ* from `A^sup` together with `w*`, `v*` from this trellis.
    pub fn derived_inputs(&self, family: &MatrixFamily<T>) -> Result<BoundInputs<T>> {
        let a_sup = family.a_sup();
        Ok(BoundInputs {
            lambda: graph::lambda_star(a_sup)?.mean,
            alpha: graph::alpha(a_sup)?.column(0),
            beta: graph::beta(a_sup)?.column(0),
            gamma: graph::gamma(a_sup)?,
            to_first: self.w_star(),
            from_first: self.v_star(),
        })
    }
}

/// Free-function form of [`TrellisDigraph::new`].
pub fn build_trellis<'a, T: Weight>(
    family: &'a MatrixFamily<T>,
    seq: &ProductSequence,
) -> Result<TrellisDigraph<'a, T>> {
    TrellisDigraph::new(family, seq)
}

fn check_budget<T: Weight>(t: &TrellisDigraph<'_, T>) -> Result<()> {
    if t.n() > ENUMERATION_MAX_NODES || t.k() > ENUMERATION_MAX_LAYERS {
        return Err(Error::BudgetExceeded(format!(
            "walk enumeration needs n <= {ENUMERATION_MAX_NODES} and k <= {ENUMERATION_MAX_LAYERS}, got n = {}, k = {}",
            t.n(),
            t.k()
        )));
    }
    Ok(())
}

/// Running best walk under the shared tie-break order.
struct Champion<T> {
    weight: TropicalScalar<T>,
    witness: Option<Vec<TrellisNode>>,
    min_length: usize,
}

impl<T: Weight> Champion<T> {
    fn new() -> Self {
        Self {
            weight: Epsilon,
            witness: None,
            min_length: 0,
        }
    }

    fn offer(&mut self, weight: TropicalScalar<T>, walk: &[TrellisNode]) {
        let len = walk.len() - 1;
        let better = match &self.witness {
            None => true,
            Some(cur) => match weight.tropical_cmp(&self.weight) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    let cur_nodes = cur.iter().map(|p| p.0);
                    let new_nodes = walk.iter().map(|p| p.0);
                    len < cur.len() - 1 || (len == cur.len() - 1 && new_nodes.lt(cur_nodes))
                }
            },
        };
        if better {
            self.weight = weight;
            self.min_length = len;
            self.witness = Some(walk.to_vec());
        }
    }

    fn finish(self) -> WalkSummary<T> {
        match self.witness {
            None => WalkSummary::none(),
            Some(w) => WalkSummary {
                weight: self.weight,
                length: w.len() - 1,
                min_length_among_optima: self.min_length,
                witness: Some(w),
            },
        }
    }
}

fn in_class(class: WalkClass, walk: &[TrellisNode], i: usize, j: usize, k: usize) -> bool {
    let (first, last) = (walk[0], walk[walk.len() - 1]);
    match class {
        WalkClass::Full => first == (i, 0) && last == (j, k),
        WalkClass::Initial => {
            first == (i, 0) && last.0 == 0 && walk[..walk.len() - 1].iter().all(|p| p.0 != 0)
        }
        WalkClass::Final => first.0 == 0 && last == (j, k) && walk[1..].iter().all(|p| p.0 != 0),
    }
}

fn enumerate_from<T: Weight>(
    t: &TrellisDigraph<'_, T>,
    walk: &mut Vec<TrellisNode>,
    weight: TropicalScalar<T>,
    visit: &mut dyn FnMut(&[TrellisNode], &TropicalScalar<T>),
) {
    visit(walk, &weight);
    let (x, l) = *walk.last().expect("walk is never empty");
    if l == t.k() {
        return;
    }
    for y in 0..t.n() {
        let e = t.edge(l + 1, x, y);
        if e.is_epsilon() {
            continue;
        }
        walk.push((y, l + 1));
        enumerate_from(t, walk, weight.otimes(e), visit);
        walk.pop();
    }
}

/// Brute-force optimum over every walk of the class, by exhaustive listing.
///
/// For [`WalkClass::Initial`] the target `j` is ignored (it is node 0); for
/// [`WalkClass::Final`] the source `i` is ignored.
pub fn enumerate_walks<T: Weight>(
    t: &TrellisDigraph<'_, T>,
    i: usize,
    j: usize,
    class: WalkClass,
) -> Result<WalkSummary<T>> {
    check_budget(t)?;
    let k = t.k();
    let starts: Vec<TrellisNode> = match class {
        WalkClass::Full | WalkClass::Initial => vec![(i, 0)],
        WalkClass::Final => (0..=k).map(|l| (0, l)).collect(),
    };
    let mut champ = Champion::new();
    for start in starts {
        let mut walk = vec![start];
        enumerate_from(t, &mut walk, TropicalScalar::unit(), &mut |w, weight| {
            if in_class(class, w, i, j, k) {
                champ.offer(weight.clone(), w);
            }
        });
    }
    Ok(champ.finish())
}

/// Outcome of one lemma over all the indices it applies to.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaOutcome {
    pub checked: usize,
    /// Indices whose hypothesis (threshold or finiteness) was not met.
    pub skipped: usize,
    /// Failing indices as `(i, j)`; `j` is 0 for single-index lemmas.
    pub failures: Vec<(usize, usize)>,
}

impl LemmaOutcome {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, at: (usize, usize)) {
        self.checked += 1;
        if !ok {
            self.failures.push(at);
        }
    }
}

/// Lemma checks on one trellis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport<T> {
    /// Some optimal initial walk is no longer than `(w*_i - α_i)/λ* + (n-1)`.
    pub initial_length: LemmaOutcome,
    /// Some optimal final walk is no longer than `(v*_j - β_j)/λ* + (n-1)`.
    pub final_length: LemmaOutcome,
    /// Above the second threshold, the best walk through node 0 weighs `w*_i + v*_j`.
    pub through_first: LemmaOutcome,
    /// Above the first threshold, every walk avoiding node 0 is lighter than `w*_i + v*_j`.
    pub avoiding_first: LemmaOutcome,
    /// Above both thresholds, `Γ_ij = w*_i + v*_j`.
    pub entry_factorises: LemmaOutcome,
    /// Thresholds the checks were gated on.
    pub thresholds: BoundReport<T>,
}

impl<T> LemmaReport<T> {
    pub fn all_hold(&self) -> bool {
        self.initial_length.holds()
            && self.final_length.holds()
            && self.through_first.holds()
            && self.avoiding_first.holds()
            && self.entry_factorises.holds()
    }
}

fn length_within<T: Weight>(len: usize, bound: &BoundValue<T>) -> bool {
    match bound {
        BoundValue::Vacuous => true,
        BoundValue::Finite(b) => T::from_count(len) <= *b,
        BoundValue::Unbounded => true,
    }
}

/// Runs the walk-length and walk-weight lemma checks on `t`.
///
/// `derived.to_first` / `from_first` must hold `w*` / `v*` of this trellis.
pub fn check_lemma_bounds<T: Weight>(
    t: &TrellisDigraph<'_, T>,
    derived: &BoundInputs<T>,
) -> Result<LemmaReport<T>> {
    let n = t.n();
    let k = t.k();
    let thresholds = bound_from_parts(derived.clone(), BoundMode::Implicit)?;

    let n_minus_one = T::from_count(n.saturating_sub(1));
    let mut initial_length = LemmaOutcome::default();
    let mut final_length = LemmaOutcome::default();
    for i in 0..n {
        let walk = t.optimal_initial_walk(i);
        let bound = closed_form(&[&derived.to_first[i]], &[&derived.alpha[i]], &derived.lambda, &n_minus_one);
        if walk.weight.is_epsilon() {
            initial_length.skipped += 1;
        } else {
            initial_length.record(length_within(walk.min_length_among_optima, &bound), (i, 0));
        }
    }
    for j in 0..n {
        let walk = t.optimal_final_walk(j);
        let bound = closed_form(&[&derived.from_first[j]], &[&derived.beta[j]], &derived.lambda, &n_minus_one);
        if walk.weight.is_epsilon() {
            final_length.skipped += 1;
        } else {
            final_length.record(length_within(walk.min_length_among_optima, &bound), (0, j));
        }
    }

    let mut through_first = LemmaOutcome::default();
    let mut avoiding_first = LemmaOutcome::default();
    let mut entry_factorises = LemmaOutcome::default();
    for i in 0..n {
        for j in 0..n {
            let target = derived.to_first[i].otimes(&derived.from_first[j]);
            let t1 = thresholds.term1.get(i, j);
            let t2 = thresholds.term2.get(i, j);
            let (met1, met2) = (
                !matches!(t1, BoundValue::Unbounded) && t1.is_exceeded_by(k),
                !matches!(t2, BoundValue::Unbounded) && t2.is_exceeded_by(k),
            );
            if met2 {
                through_first.record(t.optimal_walk_through_first(i, j) == target, (i, j));
            } else {
                through_first.skipped += 1;
            }
            if met1 {
                let avoid = t.optimal_avoiding_walk(i, j).weight;
                avoiding_first.record(avoid.tropical_cmp(&target) == Ordering::Less, (i, j));
            } else {
                avoiding_first.skipped += 1;
            }
            if met1 && met2 {
                entry_factorises.record(t.optimal_full_walk(i, j).weight == target, (i, j));
            } else {
                entry_factorises.skipped += 1;
            }
        }
    }

    Ok(LemmaReport {
        initial_length,
        final_length,
        through_first,
        avoiding_first,
        entry_factorises,
        thresholds,
    })
}
