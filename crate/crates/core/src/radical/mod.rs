//! Decision procedures for radical structure: the decomposition criterion
//! for fully characteristic radicals, exact and sampled invariance oracles,
//! the Nielsen-generator characteristic check, and the identity/relative
//! freeness correspondences they support.

use std::collections::HashSet;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::Error;
use crate::geometry::{
    closure, coordinate_group, tuple_of_rank, AlgebraicSet, Provenance, TupleSet,
    PAR_THRESHOLD,
};
use crate::group::{subgroup_closure, FiniteGroup, Subgroup};
use crate::words::{enumerate_words, Word};
use crate::Result;

mod characteristic;
mod corollaries;

pub use characteristic::{
    characteristic_report, is_characteristic, nielsen_generators, AutGenerator,
    AutKind, CharacteristicReport,
};
pub use corollaries::{
    identity_correspondence_check, identity_correspondence_of_set, identity_oracle,
    marked_iso, relatively_free, IdentityCorrespondence,
};

/// Default cap on extension tests for [`full_invariance_exact`].
pub const DEFAULT_EXTENSION_BUDGET: u64 = 1_000_000;

/// Above this order the exact oracle multiplies through function vectors
/// instead of materializing a `|Q|^2` table.
pub(crate) const TABLE_LIMIT: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
    BudgetExceeded,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::BudgetExceeded => "budget-exceeded",
        }
    }
}

/// A replayable counterexample: a point of `E` and where it was sent.
///
/// `images` are the variable images of the violating substitution when one
/// is known (`None` for the bare decomposition criterion, whose offending
/// tuple needs no substitution). In every case `result ∉ E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: Vec<usize>,
    pub images: Option<Vec<Word>>,
    pub result: Vec<usize>,
}

/// The outcome of a radical analysis, with whichever evidence the check
/// produces: a covering family on yes, a witness on no.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub decomposition: Option<Vec<Subgroup>>,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl Verdict {
    pub(crate) fn yes() -> Self {
        Verdict {
            outcome: Outcome::Yes,
            decomposition: None,
            witness: None,
            note: None,
        }
    }

    pub(crate) fn no(witness: Witness) -> Self {
        Verdict {
            outcome: Outcome::No,
            decomposition: None,
            witness: Some(witness),
            note: None,
        }
    }

    pub(crate) fn budget(note: String) -> Self {
        Verdict {
            outcome: Outcome::BudgetExceeded,
            decomposition: None,
            witness: None,
            note: Some(note),
        }
    }

    /// Re-derives every claim this verdict makes against `set`.
    ///
    /// A yes-verdict may carry a covering family; then each `K^n` must sit
    /// inside `E` and their union must be exactly `E`. A no-verdict must
    /// carry a witness whose point lies in `E`, whose result does not, and
    /// whose images (when present) actually map the point to the result.
    pub fn validate(&self, set: &AlgebraicSet) -> Result<()> {
        match self.outcome {
            Outcome::Yes => {
                if self.witness.is_some() {
                    return Err(Error::Internal(
                        "yes-verdict carries a witness".into(),
                    ));
                }
            }
            Outcome::No => {
                if self.witness.is_none() {
                    return Err(Error::Internal(
                        "no-verdict is missing its witness".into(),
                    ));
                }
            }
            Outcome::BudgetExceeded => {}
        }

        if let Some(family) = &self.decomposition {
            let group = set.group();
            let n = set.ctx().nvars();
            let mut union = TupleSet::new(group.order(), n)?;
            for sub in family {
                if !FiniteGroup::same_group(sub.parent(), group) {
                    return Err(Error::Internal(
                        "decomposition subgroup has a different parent".into(),
                    ));
                }
                for tuple in power_tuples(sub.elements(), n) {
                    if !set.contains(&tuple) {
                        return Err(Error::Internal(format!(
                            "decomposition member power leaves the set at {tuple:?}"
                        )));
                    }
                    union.insert(&tuple);
                }
            }
            for tuple in set.tuples() {
                if !union.contains(tuple) {
                    return Err(Error::Internal(format!(
                        "decomposition does not cover {tuple:?}"
                    )));
                }
            }
        }

        if let Some(witness) = &self.witness {
            if !set.contains(&witness.point) {
                return Err(Error::Internal(
                    "witness point is not in the set".into(),
                ));
            }
            if set.contains(&witness.result) {
                return Err(Error::Internal(
                    "witness result is in the set".into(),
                ));
            }
            if let Some(images) = &witness.images {
                let ctx = set.ctx();
                let group = set.group();
                let mapped: Vec<usize> = images
                    .iter()
                    .map(|w| w.evaluate(ctx, group, &witness.point))
                    .collect::<Result<_>>()?;
                if mapped != witness.result {
                    return Err(Error::Internal(
                        "witness images do not reproduce the result".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// All `n`-tuples over `elements`, in lexicographic order of positions.
pub(crate) fn power_tuples(
    elements: &[usize],
    n: usize,
) -> impl Iterator<Item = Vec<usize>> + '_ {
    std::iter::repeat_n(elements.iter().copied(), n).multi_cartesian_product()
}

fn require_coefficient_free(set: &AlgebraicSet, what: &str) -> Result<()> {
    if set.ctx().has_constants() {
        return Err(Error::ContextMismatch(format!(
            "{what} is a coefficient-free analysis; use the G-coefficient layer instead"
        )));
    }
    Ok(())
}

/// Errors unless `set` equals its own closure. Sets built by `solve` or
/// `closure` are closed by construction and skip the sweep.
fn require_algebraic(set: &AlgebraicSet) -> Result<()> {
    if set.provenance() != Provenance::Raw {
        return Ok(());
    }
    let out = closure(set)?;
    if out.was_algebraic {
        return Ok(());
    }
    let missing: Vec<Vec<usize>> = out
        .closed
        .tuples()
        .iter()
        .filter(|t| !set.contains(t))
        .take(5)
        .cloned()
        .collect();
    Err(Error::NotAlgebraic {
        missing_sample: missing,
    })
}

/// The decomposition criterion: the radical of `E` is fully characteristic
/// exactly when `E` is a union of `n`-th powers of subgroups, and it
/// suffices to test, for each point, the subgroup its entries generate.
///
/// Yes-verdicts carry the covering family `{K(ā)}`, deduplicated and pruned
/// to inclusion-maximal members, largest first. No-verdicts carry the first
/// point (in tuple order) whose subgroup power escapes, with the first
/// escaping tuple.
pub fn decompose(set: &AlgebraicSet) -> Result<Verdict> {
    require_coefficient_free(set, "decompose")?;
    require_algebraic(set)?;
    let group = set.group();
    let n = set.ctx().nvars();

    let mut family: Vec<Subgroup> = Vec::new();
    let mut verified: HashSet<Vec<usize>> = HashSet::new();
    for point in set.tuples() {
        if family
            .iter()
            .any(|k| point.iter().all(|&g| k.contains(g)))
        {
            continue;
        }
        let k = subgroup_closure(group, point)?;
        if !verified.insert(k.elements().to_vec()) {
            continue;
        }
        for tuple in power_tuples(k.elements(), n) {
            if !set.contains(&tuple) {
                return Ok(Verdict::no(Witness {
                    point: point.clone(),
                    images: None,
                    result: tuple,
                }));
            }
        }
        family.push(k);
    }

    family = prune_to_maximal(family);
    family.sort_by(|a, b| {
        b.order()
            .cmp(&a.order())
            .then_with(|| a.elements().cmp(b.elements()))
    });
    Ok(Verdict {
        outcome: Outcome::Yes,
        decomposition: Some(family),
        witness: None,
        note: None,
    })
}

pub(crate) fn prune_to_maximal(family: Vec<Subgroup>) -> Vec<Subgroup> {
    let keep: Vec<bool> = family
        .iter()
        .map(|k| {
            !family.iter().any(|other| {
                other.order() > k.order() && k.is_subset_of(other)
            })
        })
        .collect();
    family
        .into_iter()
        .zip(keep)
        .filter_map(|(k, keep)| keep.then_some(k))
        .collect()
}

/// The exact full-invariance oracle: sweeps every candidate image tuple
/// `q̄ ∈ Q^n` of the coordinate group's generators and asks whether
/// `x_i -> q_i` extends to an endomorphism of `Q`.
///
/// The radical is fully invariant exactly when every candidate extends. A
/// failing candidate is converted to a replayable witness: its word lifts
/// plus the first point of `E` they carry outside `E`.
pub fn full_invariance_exact(set: &AlgebraicSet, budget: u64) -> Result<Verdict> {
    require_coefficient_free(set, "full_invariance_exact")?;
    if set.is_empty() {
        return Err(Error::EmptyAlgebraicSet);
    }
    let q = coordinate_group(set)?;
    let n = set.ctx().nvars();
    let required = (q.order() as u64)
        .checked_pow(n as u32)
        .unwrap_or(u64::MAX);
    if required > budget {
        return Ok(Verdict::budget(format!(
            "exact oracle needs {required} extension tests, budget is {budget}"
        )));
    }
    let total = required as usize;

    let first_failing = if q.order() <= TABLE_LIMIT {
        let table = q.to_finite_group()?;
        first_non_extending(&q, &table, n, total, &[])
    } else {
        first_non_extending(&q, &q, n, total, &[])
    };

    let Some(rank) = first_failing else {
        return Ok(Verdict::yes());
    };
    let targets = tuple_of_rank(q.order(), n, rank);
    let images: Vec<Word> = targets.iter().map(|&t| q.lift(t).clone()).collect();
    let witness = witness_from_images(set, images)
        .expect("a non-extending candidate moves some point outside the set");
    Ok(Verdict::no(witness))
}

/// First rank whose candidate images (appended to the pinned constant
/// targets) do not extend; the coefficient layer pins its marked constants.
pub(crate) fn first_non_extending<T: crate::geometry::GroupOps + Sync>(
    q: &crate::geometry::CoordinateGroup,
    target: &T,
    n: usize,
    total: usize,
    pinned: &[usize],
) -> Option<usize> {
    let fails = |r: &usize| {
        let mut targets = tuple_of_rank(q.order(), n, *r);
        targets.extend_from_slice(pinned);
        q.hom_to_unchecked(&targets, target).is_none()
    };
    if total >= PAR_THRESHOLD {
        (0..total).into_par_iter().find_first(fails)
    } else {
        (0..total).find(fails)
    }
}

/// First point of `E` (in tuple order) that `images` map outside `E`.
pub(crate) fn witness_from_images(set: &AlgebraicSet, images: Vec<Word>) -> Option<Witness> {
    let group = set.group();
    for point in set.tuples() {
        let result: Vec<usize> = images
            .iter()
            .map(|w| w.eval_raw(group, point, None))
            .collect();
        if !set.contains(&result) {
            return Some(Witness {
                point: point.clone(),
                images: Some(images),
                result,
            });
        }
    }
    None
}

/// Sampled invariance check: applies every substitution whose images are
/// reduced words of length at most `maxlen` to every point of `E`.
///
/// Yes means no tested substitution escapes; it is evidence up to the
/// bound, not a proof. No comes with the violating substitution and point.
pub fn endo_invariance_sampled(set: &AlgebraicSet, maxlen: usize) -> Result<Verdict> {
    require_coefficient_free(set, "endo_invariance_sampled")?;
    let n = set.ctx().nvars();
    let words = enumerate_words(n, maxlen);
    let spec_count = (words.len() as u64)
        .checked_pow(n as u32)
        .unwrap_or(u64::MAX);
    if spec_count > crate::geometry::TUPLE_SWEEP_LIMIT as u64 {
        return Ok(Verdict::budget(format!(
            "{spec_count} substitutions at maxlen {maxlen} exceed the sweep limit"
        )));
    }
    let total = spec_count as usize;
    let group = set.group();

    let escapes = |r: &usize| {
        let picks = tuple_of_rank(words.len(), n, *r);
        set.tuples().iter().any(|point| {
            let result: Vec<usize> = picks
                .iter()
                .map(|&w| words[w].eval_raw(group, point, None))
                .collect();
            !set.contains(&result)
        })
    };
    let first = if total >= PAR_THRESHOLD {
        (0..total).into_par_iter().find_first(escapes)
    } else {
        (0..total).find(escapes)
    };

    let Some(rank) = first else {
        return Ok(Verdict::yes());
    };
    let picks = tuple_of_rank(words.len(), n, rank);
    let images: Vec<Word> = picks.iter().map(|&w| words[w].clone()).collect();
    let witness = witness_from_images(set, images)
        .expect("an escaping substitution moves some point outside the set");
    Ok(Verdict::no(witness))
}
