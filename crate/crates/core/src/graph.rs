//! Digraph view of a square max-plus matrix.
//!
//! Covers the support digraph, strong connectivity, the maximum cycle mean
//! (Karp), and the optimal path weights toward, from, and around node 0 that
//! feed the transient bounds.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::matrix::TropicalMatrix;
use crate::scalar::{Epsilon, Finite, TropicalScalar, Weight};

/// Edge set of the digraph associated with a square matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl EdgeSet {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            succ[i].push(j);
        }
        succ
    }
}

/// Result of a maximum cycle mean computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleMeanResult<T> {
    /// ε when the digraph has no cycle.
    pub mean: TropicalScalar<T>,
    /// Nodes of one attaining cycle, starting at its smallest node, without
    /// repeating the start.
    pub witness: Option<Vec<usize>>,
}

pub fn support<T: Weight>(a: &TropicalMatrix<T>) -> Result<EdgeSet> {
    let n = a.dim()?;
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j).is_finite() {
                edges.insert((i, j));
            }
        }
    }
    Ok(EdgeSet { n, edges })
}

/// Same finite-entry pattern.
pub fn geometrically_equivalent<T: Weight>(
    a: &TropicalMatrix<T>,
    b: &TropicalMatrix<T>,
) -> Result<bool> {
    let (na, nb) = (a.dim()?, b.dim()?);
    if na != nb {
        return Err(Error::DimensionMismatch {
            left_rows: na,
            left_cols: na,
            right_rows: nb,
            right_cols: nb,
        });
    }
    Ok(support(a)? == support(b)?)
}

/// Strong connectivity of the support digraph.
pub fn is_irreducible<T: Weight>(a: &TropicalMatrix<T>) -> Result<bool> {
    let s = support(a)?;
    if s.n <= 1 {
        return Ok(true);
    }
    let succ = s.successors();
    let mut pred = vec![Vec::new(); s.n];
    for &(i, j) in &s.edges {
        pred[j].push(i);
    }
    Ok(reach_all(&succ, 0) && reach_all(&pred, 0))
}

fn reach_all(adj: &[Vec<usize>], start: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Maximum cycle mean via Karp's dynamic program.
///
/// `D_k(v)` is the heaviest walk with exactly `k` edges ending at `v` from
/// any start; the mean is `max_v min_k (D_n(v) - D_k(v)) / (n - k)`.
pub fn max_cycle_mean<T: Weight>(a: &TropicalMatrix<T>) -> Result<CycleMeanResult<T>> {
    let n = a.dim()?;
    if n == 0 {
        return Ok(CycleMeanResult {
            mean: Epsilon,
            witness: None,
        });
    }
    let mut table: Vec<Vec<TropicalScalar<T>>> = Vec::with_capacity(n + 1);
    table.push(vec![TropicalScalar::unit(); n]);
    for k in 1..=n {
        let prev = &table[k - 1];
        let mut cur = vec![Epsilon; n];
        for (u, du) in prev.iter().enumerate() {
            if du.is_epsilon() {
                continue;
            }
            for (v, slot) in cur.iter_mut().enumerate() {
                slot.oplus_assign(du.otimes(a.get(u, v)));
            }
        }
        table.push(cur);
    }

    let mut best: TropicalScalar<T> = Epsilon;
    for v in 0..n {
        let Finite(dn) = &table[n][v] else { continue };
        let mut worst: Option<T> = None;
        for (k, row) in table.iter().enumerate().take(n) {
            let Finite(dk) = &row[v] else { continue };
            let ratio = (dn.clone() - dk.clone()) / T::from_count(n - k);
            if worst.as_ref().map_or(true, |w| ratio < *w) {
                worst = Some(ratio);
            }
        }
        if let Some(w) = worst {
            best.oplus_assign(Finite(w));
        }
    }

    let witness = match &best {
        Finite(mean) => critical_cycle(a, mean),
        Epsilon => None,
    };
    Ok(CycleMeanResult {
        mean: best,
        witness,
    })
}

/// Lexicographically smallest simple cycle of the critical digraph, rotated
/// to start at its smallest node. `None` if rounding hides every critical
/// edge (floating-point weights only).
fn critical_cycle<T: Weight>(a: &TropicalMatrix<T>, mean: &T) -> Option<Vec<usize>> {
    let n = a.rows();
    let shifted = a.map_finite(|v| v.clone() - mean.clone());

    // Heaviest walk weights in the reweighted digraph, which has no positive cycle.
    let mut heaviest = shifted.clone();
    for i in 0..n {
        heaviest.set(i, i, heaviest.get(i, i).oplus(&TropicalScalar::unit()));
    }
    for k in 0..n {
        for i in 0..n {
            if heaviest.get(i, k).is_epsilon() {
                continue;
            }
            for j in 0..n {
                let through = heaviest.get(i, k).otimes(heaviest.get(k, j));
                let mut cur = heaviest.get(i, j).clone();
                if cur.oplus_assign(through) {
                    heaviest.set(i, j, cur);
                }
            }
        }
    }

    let zero = T::zero();
    let mut critical = vec![Vec::new(); n];
    for (i, succ) in critical.iter_mut().enumerate() {
        for j in 0..n {
            if let Finite(w) = shifted.get(i, j).otimes(heaviest.get(j, i)) {
                if w == zero {
                    succ.push(j);
                }
            }
        }
    }

    let start = (0..n).find(|&i| !critical[i].is_empty())?;
    let mut cycle = vec![start];
    let mut on_path = vec![false; n];
    on_path[start] = true;
    loop {
        let cur = *cycle.last().expect("cycle is never empty");
        if critical[cur].contains(&start) {
            break;
        }
        let next = critical[cur]
            .iter()
            .copied()
            .find(|&v| !on_path[v] && can_return(&critical, v, start, &on_path))?;
        on_path[next] = true;
        cycle.push(next);
    }

    let weight = cycle_weight(a, &cycle)?;
    if weight / T::from_count(cycle.len()) == *mean {
        Some(cycle)
    } else {
        None
    }
}

fn can_return(adj: &[Vec<usize>], from: usize, target: usize, blocked: &[bool]) -> bool {
    let mut seen = blocked.to_vec();
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if v == target {
                return true;
            }
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// Weight of the closed walk `nodes[0] → nodes[1] → … → nodes[0]`.
pub fn cycle_weight<T: Weight>(a: &TropicalMatrix<T>, nodes: &[usize]) -> Option<T> {
    let mut total = TropicalScalar::unit();
    for (idx, &u) in nodes.iter().enumerate() {
        let v = nodes[(idx + 1) % nodes.len()];
        total = total.otimes(a.get(u, v));
    }
    total.into_value()
}

/// Maximum cycle mean of the submatrix obtained by deleting node 0.
///
/// Witness node numbers refer to the original matrix.
pub fn lambda_star<T: Weight>(a_sup: &TropicalMatrix<T>) -> Result<CycleMeanResult<T>> {
    let n = a_sup.dim()?;
    if n <= 1 {
        return Ok(CycleMeanResult {
            mean: Epsilon,
            witness: None,
        });
    }
    let mut res = max_cycle_mean(&a_sup.without_index(0)?)?;
    if let Some(w) = res.witness.as_mut() {
        w.iter_mut().for_each(|v| *v += 1);
    }
    Ok(res)
}

fn require_negative_lambda<T: Weight>(a_sup: &TropicalMatrix<T>) -> Result<()> {
    let lambda = lambda_star(a_sup)?;
    match &lambda.mean {
        Finite(m) if *m >= T::zero() => Err(Error::Assumption(format!(
            "cycles avoiding node 1 must be negative, but the maximum cycle mean is {m}"
        ))),
        _ => Ok(()),
    }
}

/// Heaviest walks `i → 0` that meet node 0 only at the end, using `n - 1`
/// relaxation rounds. Exact when every cycle avoiding node 0 is negative.
pub(crate) fn heaviest_into_first<T: Weight>(a: &TropicalMatrix<T>) -> Result<Vec<TropicalScalar<T>>> {
    let n = a.dim()?;
    let mut dist = vec![Epsilon; n];
    if n == 0 {
        return Ok(dist);
    }
    dist[0] = TropicalScalar::unit();
    for _ in 1..n {
        let mut next = dist.clone();
        for (i, slot) in next.iter_mut().enumerate().skip(1) {
            for (j, dj) in dist.iter().enumerate() {
                slot.oplus_assign(a.get(i, j).otimes(dj));
            }
        }
        if next == dist {
            break;
        }
        dist = next;
    }
    Ok(dist)
}

/// Heaviest path weights `i → 0` on the digraph of `a_sup`; entry 0 is 0.
pub fn alpha<T: Weight>(a_sup: &TropicalMatrix<T>) -> Result<TropicalMatrix<T>> {
    require_negative_lambda(a_sup)?;
    Ok(TropicalMatrix::column_vector(heaviest_into_first(a_sup)?))
}

/// Heaviest path weights `0 → j` on the digraph of `a_sup`; entry 0 is 0.
pub fn beta<T: Weight>(a_sup: &TropicalMatrix<T>) -> Result<TropicalMatrix<T>> {
    require_negative_lambda(a_sup)?;
    Ok(TropicalMatrix::column_vector(heaviest_into_first(&a_sup.transpose())?))
}

/// Heaviest walks of length ≥ 1 between nodes other than 0 that avoid node 0.
///
/// Computed as `B ⊕ B² ⊕ … ⊕ B^(n-1)` on the node-0-deleted submatrix `B`,
/// so diagonal entries are cycle weights. Row 0 and column 0 are ε.
pub fn gamma<T: Weight>(a_sup: &TropicalMatrix<T>) -> Result<TropicalMatrix<T>> {
    require_negative_lambda(a_sup)?;
    let n = a_sup.dim()?;
    let mut out = TropicalMatrix::epsilon(n, n);
    if n <= 1 {
        return Ok(out);
    }
    let b = a_sup.without_index(0)?;
    let mut acc = b.clone();
    let mut power = b.clone();
    for _ in 2..n {
        power = power.mul(&b)?;
        acc = acc.oplus(&power)?;
    }
    for i in 1..n {
        for j in 1..n {
            out.set(i, j, acc.get(i - 1, j - 1).clone());
        }
    }
    Ok(out)
}
