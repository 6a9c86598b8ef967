//! Product sequences: folding, seeded sampling, and empirical search for the
//! length after which every product is rank one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::MatrixFamily;
use crate::matrix::TropicalMatrix;
use crate::scalar::Weight;

/// Ordered member indices of a product `A_{s_1} ⊗ … ⊗ A_{s_k}`.
///
/// Stored 0-based; [`from_one_based`](Self::from_one_based) and
/// [`one_based`](Self::one_based) convert at the I/O boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductSequence {
    indices: Vec<usize>,
    seed: Option<u64>,
}

impl ProductSequence {
    pub fn new(indices: Vec<usize>) -> Self {
        Self { indices, seed: None }
    }

    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        let indices = indices
            .iter()
            .map(|&i| {
                i.checked_sub(1).ok_or(Error::IndexOutOfRange {
                    index: 0,
                    members: 0,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self::new(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    /// Seed this sequence was drawn with, if any.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Errors on the first index outside the family.
    pub fn check_against<T: Weight>(&self, family: &MatrixFamily<T>) -> Result<()> {
        match self.indices.iter().find(|&&i| i >= family.len()) {
            Some(&i) => Err(Error::IndexOutOfRange {
                index: i + 1,
                members: family.len(),
            }),
            None => Ok(()),
        }
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        Self::new(indices)
    }
}

/// Left-to-right tropical product of the sequence.
pub fn fold<T: Weight>(family: &MatrixFamily<T>, seq: &ProductSequence) -> Result<TropicalMatrix<T>> {
    let (&first, rest) = seq.indices().split_first().ok_or(Error::EmptySequence)?;
    let mut acc = family.member(first)?.clone();
    for &idx in rest {
        acc = acc.mul(family.member(idx)?)?;
    }
    Ok(acc)
}

/// Uniform i.i.d. member indices drawn from ChaCha8 seeded with `seed`.
pub fn random_sequence<T: Weight>(
    family: &MatrixFamily<T>,
    length: usize,
    seed: u64,
) -> Result<ProductSequence> {
    if length == 0 {
        return Err(Error::InvalidLength("sequence length must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seq = draw(&mut rng, family.len(), length);
    seq.seed = Some(seed);
    Ok(seq)
}

fn draw(rng: &mut ChaCha8Rng, members: usize, length: usize) -> ProductSequence {
    ProductSequence::new((0..length).map(|_| rng.gen_range(0..members)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// Every one of the `m^L` sequences of each length `L`.
    Exhaustive,
    /// A fixed number of seeded random sequences per length.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransientConfig {
    pub horizon: usize,
    pub mode: SearchMode,
    /// Ignored in exhaustive mode.
    pub samples_per_length: usize,
    pub seed: u64,
    /// Maximum number of products an exhaustive search may examine.
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for TransientConfig {
    fn default() -> Self {
        Self {
            horizon: 20,
            mode: SearchMode::Sampled,
            samples_per_length: 100,
            seed: 0,
            budget: 1 << 22,
            threads: None,
        }
    }
}

/// Horizon-bounded estimate of the rank-one transient.
///
/// This is a statement about the examined products only; it does not bound
/// the true transient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransientEstimate {
    pub mode: SearchMode,
    pub horizon: usize,
    pub seed: Option<u64>,
    /// Smallest `K` such that every examined product with length in
    /// `[K, horizon]` is rank one.
    pub first_all_rank_one: Option<usize>,
    /// Entry `L - 1` counts products of length `L`.
    pub examined_per_length: Vec<u64>,
    pub failures_per_length: Vec<u64>,
    /// Failing sequences, sorted by length then lexicographically, deduplicated.
    pub counterexamples: Vec<ProductSequence>,
}

/// Examines products of every length `1..=horizon` and records which ones
/// fail the rank-one test.
pub fn estimate_transient<T: Weight>(
    family: &MatrixFamily<T>,
    config: &TransientConfig,
) -> Result<TransientEstimate> {
    if config.horizon == 0 {
        return Err(Error::InvalidLength("horizon must be at least 1".into()));
    }
    let run = || match config.mode {
        SearchMode::Exhaustive => exhaustive(family, config),
        SearchMode::Sampled => Ok(sampled(family, config)),
    };
    let (examined, mut failures) = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::InvalidLength(format!("cannot start {threads} threads: {e}")))?
            .install(run)?,
        None => run()?,
    };

    failures.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.indices().cmp(b.indices())));
    failures.dedup();

    let mut failures_per_length = vec![0u64; config.horizon];
    for f in &failures {
        failures_per_length[f.len() - 1] += 1;
    }
    let first_all_rank_one = failures_per_length
        .iter()
        .rposition(|&c| c > 0)
        .map_or(Some(1), |last_bad| {
            (last_bad + 1 < config.horizon).then_some(last_bad + 2)
        });

    Ok(TransientEstimate {
        mode: config.mode,
        horizon: config.horizon,
        seed: (config.mode == SearchMode::Sampled).then_some(config.seed),
        first_all_rank_one,
        examined_per_length: examined,
        failures_per_length,
        counterexamples: failures,
    })
}

fn fails<T: Weight>(product: &TropicalMatrix<T>) -> bool {
    !matches!(product.rank_one_factor(), Ok(Some(_)))
}

fn sampled<T: Weight>(family: &MatrixFamily<T>, config: &TransientConfig) -> (Vec<u64>, Vec<ProductSequence>) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut sequences = Vec::with_capacity(config.horizon * config.samples_per_length);
    for length in 1..=config.horizon {
        for _ in 0..config.samples_per_length {
            sequences.push(draw(&mut rng, family.len(), length));
        }
    }
    let failures = sequences
        .into_par_iter()
        .filter(|seq| fold(family, seq).map_or(true, |p| fails(&p)))
        .collect();
    let examined = vec![config.samples_per_length as u64; config.horizon];
    (examined, failures)
}

fn exhaustive<T: Weight>(
    family: &MatrixFamily<T>,
    config: &TransientConfig,
) -> Result<(Vec<u64>, Vec<ProductSequence>)> {
    let m = family.len() as u64;
    let mut examined = Vec::with_capacity(config.horizon);
    let mut total: u64 = 0;
    let mut count: u64 = 1;
    for _ in 0..config.horizon {
        count = count.saturating_mul(m);
        total = total.saturating_add(count);
        examined.push(count);
    }
    if total > config.budget {
        return Err(Error::BudgetExceeded(format!(
            "{total} products up to length {} exceed the budget of {}",
            config.horizon, config.budget
        )));
    }
    let failures = (0..family.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut prefix = vec![first];
            let product = family.members()[first].clone();
            walk_prefixes(family, config.horizon, &mut prefix, &product, &mut out);
            out
        })
        .collect();
    Ok((examined, failures))
}

fn walk_prefixes<T: Weight>(
    family: &MatrixFamily<T>,
    horizon: usize,
    prefix: &mut Vec<usize>,
    product: &TropicalMatrix<T>,
    out: &mut Vec<ProductSequence>,
) {
    if fails(product) {
        out.push(ProductSequence::new(prefix.clone()));
    }
    if prefix.len() == horizon {
        return;
    }
    for (idx, member) in family.members().iter().enumerate() {
        let next = product.mul(member).expect("family members share a size");
        prefix.push(idx);
        walk_prefixes(family, horizon, prefix, &next, out);
        prefix.pop();
    }
}
