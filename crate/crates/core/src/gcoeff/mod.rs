//! The coefficient layer: equations with constants from `G`, solved over
//! `G` itself or over a power `H = G^k` with `G` embedded diagonally.
//!
//! Substitutions here fix the constants pointwise, so the right notion of
//! subobject is a subgroup of `H` containing the diagonal copy of `G`, and
//! the coordinate group of a solution set carries the diagonal as marked
//! constant generators. Over `H = G` the layer degenerates: the only
//! subgroup containing all of `G` is `G`, so a coefficient system is verbal
//! exactly when its solution set is the whole space.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::Error;
use crate::geometry::{
    closure_pinned, coordinate_group_marked, rank_of_tuple, solve, tuple_count,
    tuple_of_rank, AlgebraicSet, ClosureOutcome, CoordinateGroup, Equation,
    EquationSystem, GroupOps, PAR_THRESHOLD,
};
use crate::group::{subgroup_closure, FiniteGroup, Subgroup};
use crate::radical::{
    first_non_extending, power_tuples, prune_to_maximal, witness_from_images,
    Outcome, Verdict, Witness, TABLE_LIMIT,
};
use crate::words::{
    enumerate_words_with_constants, Letter, Word, WordContext,
};
use crate::Result;

use rayon::prelude::*;

/// A power `H = G^k` receiving coefficient equations, with the diagonal
/// embedding `g -> (g, ..., g)`.
#[derive(Clone)]
pub struct GTarget {
    base: Arc<FiniteGroup>,
    power: usize,
    group: Arc<FiniteGroup>,
    embed: Vec<usize>,
}

impl GTarget {
    /// Builds `G^k`; `k = 1` reuses `G` itself. Element `r` of the product
    /// encodes the tuple `tuple_of_rank(|G|, k, r)`.
    pub fn new(base: &Arc<FiniteGroup>, power: usize) -> Result<Self> {
        if power == 0 {
            return Err(Error::InvalidArgument(
                "target power must be at least 1".into(),
            ));
        }
        if power == 1 {
            return Ok(GTarget {
                base: Arc::clone(base),
                power,
                group: Arc::clone(base),
                embed: base.elements().collect(),
            });
        }
        let order = tuple_count(base.order(), power, "product target")?;
        let decoded: Vec<Vec<usize>> = (0..order)
            .map(|r| tuple_of_rank(base.order(), power, r))
            .collect();
        let mut table = Vec::with_capacity(order * order);
        for x in &decoded {
            for y in &decoded {
                let product: Vec<usize> = x
                    .iter()
                    .zip(y)
                    .map(|(&a, &b)| base.mul(a, b))
                    .collect();
                table.push(rank_of_tuple(base.order(), &product));
            }
        }
        let names = decoded
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().map(|&e| base.name(e)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let group = Arc::new(FiniteGroup::from_table_trusted(
            order,
            table,
            Some(names),
        )?);
        let embed = base
            .elements()
            .map(|g| rank_of_tuple(base.order(), &vec![g; power]))
            .collect();
        Ok(GTarget {
            base: Arc::clone(base),
            power,
            group,
            embed,
        })
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn power(&self) -> usize {
        self.power
    }

    /// The product group `H`.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// `embed[g]` is the diagonal image of `g` in `H`, ascending in `g`.
    pub fn embed(&self) -> &[usize] {
        &self.embed
    }

    /// Coefficient context over `H` for solving translated systems.
    pub fn coefficient_ctx(&self, nvars: usize) -> Result<WordContext> {
        WordContext::with_constants(nvars, Arc::clone(&self.group))
    }

    /// Rewrites a word over `G`-constants into one over `H`-constants by
    /// pushing every constant through the diagonal.
    pub fn translate_word(
        &self,
        to: &WordContext,
        word: &Word,
    ) -> Result<Word> {
        let letters = word
            .letters()
            .iter()
            .map(|&l| match l {
                Letter::Const { elem } => Letter::Const {
                    elem: self.embed[elem],
                },
                other => other,
            })
            .collect();
        Word::from_letters(to, letters)
    }

    /// Translates a whole system into the product context.
    pub fn translate_system(
        &self,
        system: &EquationSystem,
    ) -> Result<(WordContext, EquationSystem)> {
        match system.ctx().constants() {
            Some(c) if FiniteGroup::same_group(c, &self.base) => {}
            _ => {
                return Err(Error::ContextMismatch(
                    "system constants must come from the base group".into(),
                ))
            }
        }
        let ctx = self.coefficient_ctx(system.nvars())?;
        let equations = system
            .equations()
            .iter()
            .map(|eq| {
                Ok(Equation::new(
                    self.translate_word(&ctx, eq.lhs())?,
                    self.translate_word(&ctx, eq.rhs())?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let translated = EquationSystem::new(ctx.clone(), equations)?;
        Ok((ctx, translated))
    }
}

fn require_target_set(target: &GTarget, set: &AlgebraicSet) -> Result<()> {
    if !FiniteGroup::same_group(set.group(), &target.group) {
        return Err(Error::ContextMismatch(
            "set does not live over the target group".into(),
        ));
    }
    match set.ctx().constants() {
        Some(c) if FiniteGroup::same_group(c, &target.group) => Ok(()),
        _ => Err(Error::ContextMismatch(
            "coefficient context over the target group required".into(),
        )),
    }
}

/// Whether `w` holds identically over `G`: it evaluates to the identity at
/// every point of `G^n`. The word may mention constants of `G`.
pub fn g_identity_check(
    group: &Arc<FiniteGroup>,
    ctx: &WordContext,
    w: &Word,
) -> Result<bool> {
    match ctx.constants() {
        Some(c) if FiniteGroup::same_group(c, group) => {}
        _ => {
            return Err(Error::ContextMismatch(
                "identity checks over G need a coefficient context".into(),
            ))
        }
    }
    w.validate_in(ctx)?;
    let order = group.order();
    let n = ctx.nvars();
    let total = tuple_count(order, n, "identity sweep")?;
    let holds = |r: &usize| {
        let tuple = tuple_of_rank(order, n, *r);
        w.eval_raw(group, &tuple, None) == group.identity()
    };
    if total >= PAR_THRESHOLD {
        Ok((0..total).into_par_iter().all(|r| holds(&r)))
    } else {
        Ok((0..total).all(|r| holds(&r)))
    }
}

/// Closure of a coefficient solution set relative to substitutions pinning
/// the diagonal constants.
pub fn g_closure(target: &GTarget, set: &AlgebraicSet) -> Result<ClosureOutcome> {
    require_target_set(target, set)?;
    closure_pinned(set, &target.embed)
}

/// The coefficient decomposition criterion over `H`: every point must stay
/// inside the set together with the whole `n`-th power of the subgroup its
/// entries generate over the diagonal copy of `G`.
pub fn g_decompose(target: &GTarget, set: &AlgebraicSet) -> Result<Verdict> {
    require_target_set(target, set)?;
    if set.provenance() == crate::geometry::Provenance::Raw {
        let out = g_closure(target, set)?;
        if !out.was_algebraic {
            let missing: Vec<Vec<usize>> = out
                .closed
                .tuples()
                .iter()
                .filter(|t| !set.contains(t))
                .take(5)
                .cloned()
                .collect();
            return Err(Error::NotAlgebraic {
                missing_sample: missing,
            });
        }
    }
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
        let mut generators = point.clone();
        generators.extend_from_slice(&target.embed);
        let k = subgroup_closure(group, &generators)?;
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

    let mut family = prune_to_maximal(family);
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

/// Exact invariance oracle with pinned constants: sweeps every candidate
/// variable-image tuple in the coordinate group of `set`, keeping the
/// marked constants fixed, and asks for an extension.
pub fn g_full_invariance_exact(
    set: &AlgebraicSet,
    constants: &[usize],
    budget: u64,
) -> Result<Verdict> {
    if set.is_empty() {
        return Err(Error::EmptyAlgebraicSet);
    }
    let q = coordinate_group_marked(set, constants)?;
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
    let pinned = q.marked()[n..].to_vec();

    let first_failing = if q.order() <= TABLE_LIMIT {
        let table = q.to_finite_group()?;
        first_non_extending(&q, &table, n, total, &pinned)
    } else {
        first_non_extending(&q, &q, n, total, &pinned)
    };

    let Some(rank) = first_failing else {
        return Ok(Verdict::yes());
    };
    let candidate = tuple_of_rank(q.order(), n, rank);
    let images: Vec<Word> = candidate.iter().map(|&t| q.lift(t).clone()).collect();
    let witness = witness_from_images(set, images)
        .expect("a non-extending candidate moves some point outside the set");
    Ok(Verdict::no(witness))
}

/// What the verbal check over `H = G` found.
#[derive(Clone, Debug)]
pub struct GVerbalReport {
    pub solution_count: usize,
    pub space_size: usize,
    /// The verbal criterion itself: the set of solutions is all of `G^n`.
    pub whole_space: bool,
    pub degenerate_empty: bool,
    /// When the criterion holds, every equation must be a `G`-identity.
    pub identities_verified: Option<bool>,
    /// Exact-oracle outcome on the coordinate group with pinned constants.
    pub oracle: Option<Outcome>,
    pub witness: Option<Witness>,
    pub consistent: bool,
}

/// The verbal criterion for a coefficient system over `G` itself: the only
/// subgroup of `G` containing all constants is `G`, so the system is
/// verbal exactly when it solves to the whole space; then each equation is
/// a `G`-identity. A proper nonempty solution set yields a violating
/// substitution through the exact oracle.
pub fn g_verbal_check(
    group: &Arc<FiniteGroup>,
    system: &EquationSystem,
    budget: u64,
) -> Result<GVerbalReport> {
    match system.ctx().constants() {
        Some(c) if FiniteGroup::same_group(c, group) => {}
        _ => {
            return Err(Error::ContextMismatch(
                "verbal checks need a coefficient system over G".into(),
            ))
        }
    }
    let set = solve(group, system)?;
    let n = system.nvars();
    let space_size = tuple_count(group.order(), n, "solution space")?;
    let whole_space = set.len() == space_size;
    let degenerate_empty = set.is_empty();

    let identities_verified = if whole_space {
        let mut all = true;
        for word in system.unified_words() {
            if !g_identity_check(group, system.ctx(), word)? {
                all = false;
                break;
            }
        }
        Some(all)
    } else {
        None
    };

    let (oracle, witness) = if degenerate_empty {
        (None, None)
    } else {
        let constants: Vec<usize> = group.elements().collect();
        let verdict = g_full_invariance_exact(&set, &constants, budget)?;
        (Some(verdict.outcome), verdict.witness)
    };

    let consistent = if degenerate_empty {
        true
    } else if whole_space {
        identities_verified == Some(true) && oracle != Some(Outcome::No)
    } else {
        oracle != Some(Outcome::Yes)
            && (oracle != Some(Outcome::No) || witness.is_some())
    };

    Ok(GVerbalReport {
        solution_count: set.len(),
        space_size,
        whole_space,
        degenerate_empty,
        identities_verified,
        oracle,
        witness,
        consistent,
    })
}

/// A nonempty set of words over variables and `G`-constants, closed data
/// for verbal subgroup generation.
#[derive(Clone, Debug)]
pub struct VerbalData {
    ctx: WordContext,
    words: Vec<Word>,
}

impl VerbalData {
    pub fn new(ctx: WordContext, words: Vec<Word>) -> Result<Self> {
        if ctx.constants().is_none() {
            return Err(Error::ContextMismatch(
                "verbal data needs a coefficient context".into(),
            ));
        }
        if words.is_empty() {
            return Err(Error::InvalidArgument(
                "verbal data needs at least one word".into(),
            ));
        }
        for w in &words {
            w.validate_in(&ctx)?;
        }
        Ok(VerbalData { ctx, words })
    }

    pub fn ctx(&self) -> &WordContext {
        &self.ctx
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }
}

/// The verbal subgroup of `H` for the word set: the subgroup generated by
/// all values `w(h_1, ..., h_m)` with constants read through the diagonal.
pub fn verbal_subgroup(words: &VerbalData, target: &GTarget) -> Result<Subgroup> {
    match words.ctx.constants() {
        Some(c) if FiniteGroup::same_group(c, &target.base) => {}
        _ => {
            return Err(Error::ContextMismatch(
                "verbal words must use constants of the base group".into(),
            ))
        }
    }
    let h = &target.group;
    let m = words.ctx.nvars();
    let total = tuple_count(h.order(), m, "verbal value sweep")?;
    let mut values = Vec::new();
    for r in 0..total {
        let tuple = tuple_of_rank(h.order(), m, r);
        for w in &words.words {
            values.push(w.eval_raw(h, &tuple, Some(&target.embed)));
        }
    }
    values.sort_unstable();
    values.dedup();
    subgroup_closure(h, &values)
}

/// Evidence for the relative-freeness correspondence over one target.
#[derive(Clone, Debug)]
pub struct RelativeFreenessReport {
    /// Whether the solution set decomposes into powers of subgroups over
    /// the diagonal; nothing further is asserted when it does not.
    pub decomposable: bool,
    pub degenerate_empty: bool,
    pub family_orders: Vec<usize>,
    pub coordinate_order: Option<usize>,
    pub words_sampled: usize,
    pub identities_sampled: usize,
    /// Every sampled identity of the family must die in the coordinate
    /// group.
    pub identities_vanish: Option<bool>,
    /// The coordinate group against the free object built from the family.
    pub marked_iso: Option<bool>,
    pub consistent: bool,
}

/// Checks that the coordinate group of a decomposable coefficient system
/// is the relatively free object of its subgroup family: sampled identity
/// words must vanish in it, and it must be marked-isomorphic to the free
/// object constructed independently from the family.
pub fn relative_freeness_check(
    target: &GTarget,
    system: &EquationSystem,
    maxlen: usize,
) -> Result<RelativeFreenessReport> {
    let (ctx_h, translated) = target.translate_system(system)?;
    let set = solve(target.group(), &translated)?;
    let n = ctx_h.nvars();

    if set.is_empty() {
        return Ok(RelativeFreenessReport {
            decomposable: true,
            degenerate_empty: true,
            family_orders: Vec::new(),
            coordinate_order: None,
            words_sampled: 0,
            identities_sampled: 0,
            identities_vanish: None,
            marked_iso: None,
            consistent: true,
        });
    }

    let verdict = g_decompose(target, &set)?;
    if verdict.outcome != Outcome::Yes {
        return Ok(RelativeFreenessReport {
            decomposable: false,
            degenerate_empty: false,
            family_orders: Vec::new(),
            coordinate_order: None,
            words_sampled: 0,
            identities_sampled: 0,
            identities_vanish: None,
            marked_iso: None,
            consistent: true,
        });
    }
    let family = verdict
        .decomposition
        .expect("yes-verdicts carry their family");
    let family_orders: Vec<usize> = family.iter().map(|k| k.order()).collect();

    let gamma = coordinate_group_marked(&set, &target.embed)?;

    let mut union = Vec::new();
    for sub in &family {
        union.extend(power_tuples(sub.elements(), n));
    }
    let union_set = AlgebraicSet::from_tuples(target.group(), &ctx_h, union)?;
    let free = coordinate_group_marked(&union_set, &target.embed)?;
    let iso = crate::radical::marked_iso(&gamma, &free);

    let h = target.group();
    let sample = enumerate_words_with_constants(system.ctx(), maxlen);
    let mut identities_sampled = 0;
    let mut identities_vanish = true;
    for word in &sample {
        let is_identity = family.iter().all(|sub| {
            power_tuples(sub.elements(), n).all(|tuple| {
                word.eval_raw(h, &tuple, Some(&target.embed)) == h.identity()
            })
        });
        if !is_identity {
            continue;
        }
        identities_sampled += 1;
        if gamma_value(&gamma, n, word) != gamma.identity() {
            identities_vanish = false;
            break;
        }
    }

    let consistent = identities_vanish && iso;
    Ok(RelativeFreenessReport {
        decomposable: true,
        degenerate_empty: false,
        family_orders,
        coordinate_order: Some(gamma.order()),
        words_sampled: sample.len(),
        identities_sampled,
        identities_vanish: Some(identities_vanish),
        marked_iso: Some(iso),
        consistent,
    })
}

/// Evaluates a base-context word inside the coordinate group, variables at
/// the marked projections and constants at the marked diagonal generators.
fn gamma_value(gamma: &CoordinateGroup, nvars: usize, word: &Word) -> usize {
    let mut acc = gamma.identity();
    for &letter in word.letters() {
        let value = match letter {
            Letter::Var { index, exp } => {
                gamma_pow(gamma, gamma.marked()[index], exp)
            }
            Letter::Const { elem } => gamma.marked()[nvars + elem],
        };
        acc = GroupOps::mul(gamma, acc, value);
    }
    acc
}

fn gamma_pow(gamma: &CoordinateGroup, element: usize, exp: i64) -> usize {
    let base = if exp < 0 { gamma.inv(element) } else { element };
    let mut rest = exp.unsigned_abs();
    let mut acc = gamma.identity();
    let mut sq = base;
    while rest > 0 {
        if rest & 1 == 1 {
            acc = GroupOps::mul(gamma, acc, sq);
        }
        sq = GroupOps::mul(gamma, sq, sq);
        rest >>= 1;
    }
    acc
}
