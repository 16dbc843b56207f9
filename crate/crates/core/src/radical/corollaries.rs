//! Consequences of the decomposition criterion: the radical of a
//! decomposable set is the identity set of its subgroup family, and its
//! coordinate group is the relatively free group of the variety the family
//! generates.

use std::sync::Arc;

use crate::error::Error;
use crate::geometry::{coordinate_group, solve, AlgebraicSet, CoordinateGroup, EquationSystem};
use crate::group::{FiniteGroup, Subgroup};
use crate::words::{enumerate_words, Word, WordContext};
use crate::Result;

use super::{decompose, power_tuples, Outcome};

fn shared_parent(family: &[Subgroup]) -> Result<&Arc<FiniteGroup>> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    for sub in &family[1..] {
        if !FiniteGroup::same_group(sub.parent(), first.parent()) {
            return Err(Error::MixedParents);
        }
    }
    Ok(first.parent())
}

/// Whether `w` is an identity of every subgroup in the family: it must
/// evaluate to the identity on every tuple drawn from each member.
pub fn identity_oracle(family: &[Subgroup], ctx: &WordContext, w: &Word) -> Result<bool> {
    let parent = shared_parent(family)?;
    if w.uses_constants() {
        return Err(Error::ContextMismatch(
            "identity checks are coefficient-free".into(),
        ));
    }
    w.validate_in(ctx)?;
    for sub in family {
        for tuple in power_tuples(sub.elements(), ctx.nvars()) {
            if w.eval_raw(parent, &tuple, None) != parent.identity() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Result of the radical-versus-identities sweep.
#[derive(Clone, Debug)]
pub struct IdentityCorrespondence {
    /// Whether the solution set decomposes; nothing is swept otherwise.
    pub decomposable: bool,
    pub family: Vec<Subgroup>,
    pub words_checked: usize,
    /// A word on which the radical and the identity oracle disagree. Always
    /// expected `None`; anything else falsifies the correspondence.
    pub discrepancy: Option<Word>,
}

impl IdentityCorrespondence {
    pub fn agrees(&self) -> bool {
        self.decomposable && self.discrepancy.is_none()
    }
}

/// For a decomposable solution set, the radical is exactly the set of
/// common identities of the covering family. Sweeps every reduced word up
/// to `maxlen` and compares membership in the radical against the identity
/// oracle.
pub fn identity_correspondence_check(
    group: &Arc<FiniteGroup>,
    system: &EquationSystem,
    maxlen: usize,
) -> Result<IdentityCorrespondence> {
    let set = solve(group, system)?;
    identity_correspondence_of_set(&set, maxlen)
}

/// The same sweep for a set already in hand, e.g. one drawn from an
/// enumeration.
pub fn identity_correspondence_of_set(
    set: &AlgebraicSet,
    maxlen: usize,
) -> Result<IdentityCorrespondence> {
    let verdict = decompose(set)?;
    if verdict.outcome != Outcome::Yes {
        return Ok(IdentityCorrespondence {
            decomposable: false,
            family: Vec::new(),
            words_checked: 0,
            discrepancy: None,
        });
    }
    let family = verdict
        .decomposition
        .expect("yes-verdicts carry their family");

    let ctx = set.ctx();
    let mut words_checked = 0;
    let mut discrepancy = None;
    for word in enumerate_words(ctx.nvars(), maxlen) {
        words_checked += 1;
        let in_radical = set.radical_contains_word(&word)?;
        let is_identity = identity_oracle(&family, ctx, &word)?;
        if in_radical != is_identity {
            discrepancy = Some(word);
            break;
        }
    }
    Ok(IdentityCorrespondence {
        decomposable: true,
        family,
        words_checked,
        discrepancy,
    })
}

/// The relatively free group of the variety generated by the family, on
/// `nvars` generators, realized as the coordinate group of the union of
/// member powers.
pub fn relatively_free(family: &[Subgroup], ctx: &WordContext) -> Result<CoordinateGroup> {
    let parent = Arc::clone(shared_parent(family)?);
    if ctx.has_constants() {
        return Err(Error::ContextMismatch(
            "relatively free construction is coefficient-free".into(),
        ));
    }
    let mut tuples = Vec::new();
    for sub in family {
        tuples.extend(power_tuples(sub.elements(), ctx.nvars()));
    }
    let union = AlgebraicSet::from_tuples(&parent, ctx, tuples)?;
    coordinate_group(&union)
}

/// Whether the generator correspondence `x_i -> y_i` is an isomorphism of
/// marked groups: it must extend to a homomorphism in both directions and
/// the orders must match.
pub fn marked_iso(q1: &CoordinateGroup, q2: &CoordinateGroup) -> bool {
    if q1.marked_count() != q2.marked_count() || q1.order() != q2.order() {
        return false;
    }
    let forward = q1
        .hom_to(q2.marked(), q2)
        .expect("marked counts and ranges were checked");
    let backward = q2
        .hom_to(q1.marked(), q1)
        .expect("marked counts and ranges were checked");
    forward.is_some() && backward.is_some()
}
