//! Deterministic generation of families of algebraic sets, used by the
//! scanning front end and the equivalence sweeps.

use std::collections::HashSet;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    closure, marked_signature_of_tuple, tuple_count, tuple_of_rank, AlgebraicSet,
};
use crate::group::FiniteGroup;
use crate::words::WordContext;
use crate::Result;

/// Controls for [`enumerate_closed_sets`].
#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    /// How many random subsets to close on top of the singleton sweep.
    pub random_subsets: usize,
    /// Size range the random subsets are drawn from.
    pub subset_sizes: RangeInclusive<usize>,
    pub seed: u64,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            random_subsets: 0,
            subset_sizes: 2..=4,
            seed: 0,
        }
    }
}

/// Closures of every singleton in `G^n`, plus closures of seeded random
/// subsets, deduplicated.
///
/// The closure of a singleton depends only on the marked-isomorphism class
/// of (subgroup generated by the entries, entries), so singletons are
/// grouped by that fingerprint first and each class is closed once. Output
/// order is deterministic: singleton classes by first rank, then sampled
/// subsets in draw order, duplicates dropped keeping the earliest.
pub fn enumerate_closed_sets(
    group: &Arc<FiniteGroup>,
    nvars: usize,
    config: &EnumerationConfig,
) -> Result<Vec<AlgebraicSet>> {
    let ctx = WordContext::free(nvars)?;
    let order = group.order();
    let total = tuple_count(order, nvars, "closed-set enumeration")?;

    let mut sets: Vec<AlgebraicSet> = Vec::new();
    let mut seen_signatures = HashSet::new();
    for r in 0..total {
        let tuple = tuple_of_rank(order, nvars, r);
        if !seen_signatures.insert(marked_signature_of_tuple(group, &tuple)) {
            continue;
        }
        let singleton = AlgebraicSet::from_tuples(group, &ctx, vec![tuple])?;
        sets.push(closure(&singleton)?.closed);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.random_subsets {
        let size = rng
            .gen_range(config.subset_sizes.clone())
            .clamp(1, total);
        let ranks = rand::seq::index::sample(&mut rng, total, size);
        let tuples = ranks
            .iter()
            .map(|r| tuple_of_rank(order, nvars, r))
            .collect();
        let subset = AlgebraicSet::from_tuples(group, &ctx, tuples)?;
        sets.push(closure(&subset)?.closed);
    }

    let mut seen_tuples = HashSet::new();
    sets.retain(|s| seen_tuples.insert(s.tuples().to_vec()));
    Ok(sets)
}
