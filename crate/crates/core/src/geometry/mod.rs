//! Equations over a finite group, their solution sets, radicals, closures,
//! and coordinate groups.
//!
//! The radical of a set `E` of tuples is never materialized as a word list;
//! it exists through two finite proxies that together carry all of it:
//! [`AlgebraicSet::radical_contains`] is the membership oracle, and
//! [`CoordinateGroup`] realizes the quotient of the free group by the
//! radical as a concrete subgroup of `G^E`.
//!
//! Tuple sets are kept sorted in rank order (lexicographic), and every
//! parallel sweep collects back into that order, so identical inputs give
//! identical outputs at any parallelism degree.

mod coordinate;
mod enumerate;

pub use coordinate::{
    closure, coordinate_group, is_algebraic, marked_signature_of_tuple, ClosureOutcome,
    CoordinateGroup, GroupOps,
};
pub(crate) use coordinate::{closure_pinned, coordinate_group_marked};
pub use enumerate::{enumerate_closed_sets, EnumerationConfig};

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Error;
use crate::group::FiniteGroup;
use crate::words::{Word, WordContext};
use crate::Result;

/// Sweeps over more ranks than this fail with a budget error instead of
/// running for hours.
pub(crate) const TUPLE_SWEEP_LIMIT: usize = 100_000_000;

/// Serial/parallel crossover for tuple sweeps.
pub(crate) const PAR_THRESHOLD: usize = 4096;

/// `order^nvars`, guarded against overflow and the sweep limit.
pub(crate) fn tuple_count(order: usize, nvars: usize, what: &str) -> Result<usize> {
    let required = (order as u64)
        .checked_pow(nvars.try_into().unwrap_or(u32::MAX))
        .unwrap_or(u64::MAX);
    if required > TUPLE_SWEEP_LIMIT as u64 {
        return Err(Error::BudgetExceeded {
            what: what.to_owned(),
            required,
            budget: TUPLE_SWEEP_LIMIT as u64,
        });
    }
    Ok(required as usize)
}

/// Rank `r` as a big-endian base-`order` tuple; rank order is lex order.
pub(crate) fn tuple_of_rank(order: usize, nvars: usize, mut r: usize) -> Vec<usize> {
    let mut tuple = vec![0; nvars];
    for slot in tuple.iter_mut().rev() {
        *slot = r % order;
        r /= order;
    }
    tuple
}

pub(crate) fn rank_of_tuple(order: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * order + t)
}

/// Dense bitset over tuple ranks; the membership structure for hot loops.
pub(crate) struct TupleSet {
    order: usize,
    bits: Vec<u64>,
}

impl TupleSet {
    pub(crate) fn new(order: usize, nvars: usize) -> Result<Self> {
        let total = tuple_count(order, nvars, "tuple membership bitset")?;
        Ok(TupleSet {
            order,
            bits: vec![0; total.div_ceil(64)],
        })
    }

    pub(crate) fn insert(&mut self, tuple: &[usize]) {
        let r = rank_of_tuple(self.order, tuple);
        self.bits[r / 64] |= 1 << (r % 64);
    }

    pub(crate) fn contains_rank(&self, r: usize) -> bool {
        self.bits[r / 64] & (1 << (r % 64)) != 0
    }

    pub(crate) fn contains(&self, tuple: &[usize]) -> bool {
        self.contains_rank(rank_of_tuple(self.order, tuple))
    }
}

/// A single equation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    lhs: Word,
    rhs: Word,
}

impl Equation {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Equation { lhs, rhs }
    }

    /// `w = 1`.
    pub fn from_word(lhs: Word) -> Self {
        Equation {
            lhs,
            rhs: Word::identity(),
        }
    }

    pub fn lhs(&self) -> &Word {
        &self.lhs
    }

    pub fn rhs(&self) -> &Word {
        &self.rhs
    }

    /// The single word `lhs * rhs^-1`, which vanishes exactly where the
    /// equation holds.
    pub fn unified(&self, ctx: &WordContext) -> Result<Word> {
        self.lhs.mul(ctx, &self.rhs.inverse(ctx))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rhs.is_identity() {
            write!(f, "{}", self.lhs)
        } else {
            write!(f, "{} = {}", self.lhs, self.rhs)
        }
    }
}

/// An ordered system of equations over one context.
///
/// Equations whose unified words coincide are deduplicated, keeping first
/// positions.
#[derive(Clone, Debug)]
pub struct EquationSystem {
    ctx: WordContext,
    equations: Vec<Equation>,
    unified: Vec<Word>,
}

impl EquationSystem {
    pub fn new(ctx: WordContext, equations: Vec<Equation>) -> Result<Self> {
        let mut kept = Vec::with_capacity(equations.len());
        let mut unified = Vec::with_capacity(equations.len());
        for eq in equations {
            eq.lhs.validate_in(&ctx)?;
            eq.rhs.validate_in(&ctx)?;
            let u = eq.unified(&ctx)?;
            if !unified.contains(&u) {
                unified.push(u);
                kept.push(eq);
            }
        }
        Ok(EquationSystem {
            ctx,
            equations: kept,
            unified,
        })
    }

    pub fn empty(ctx: WordContext) -> Self {
        EquationSystem {
            ctx,
            equations: Vec::new(),
            unified: Vec::new(),
        }
    }

    pub fn ctx(&self) -> &WordContext {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// The deduplicated `lhs * rhs^-1` forms, parallel to `equations`.
    pub fn unified_words(&self) -> &[Word] {
        &self.unified
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Parses the system file format:
    ///
    /// ```text
    /// vars 2
    /// coefficients      (optional; before the first equation)
    /// eq [x1,x2]
    /// eq x1^2 = x2^3
    /// ```
    ///
    /// `eq w` means `w = 1`. With a `coefficients` line, words may use
    /// `g<idx>` constants from `constants`, which must then be provided.
    pub fn parse(text: &str, constants: Option<&Arc<FiniteGroup>>) -> Result<Self> {
        let mut nvars: Option<usize> = None;
        let mut with_coefficients = false;
        let mut ctx: Option<WordContext> = None;
        let mut equations = Vec::new();

        for (line_no, raw) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fail = |msg: String| Error::SystemFormat { line: line_no, msg };

            if let Some(rest) = line.strip_prefix("vars") {
                if nvars.is_some() {
                    return Err(fail("duplicate `vars` line".into()));
                }
                let n = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| fail(format!("bad variable count `{}`", rest.trim())))?;
                nvars = Some(n);
            } else if line == "coefficients" {
                if nvars.is_none() {
                    return Err(fail("`coefficients` must follow `vars`".into()));
                }
                if ctx.is_some() {
                    return Err(fail("`coefficients` must precede equations".into()));
                }
                with_coefficients = true;
            } else if let Some(rest) = line.strip_prefix("eq") {
                let n = nvars.ok_or_else(|| fail("`eq` before `vars`".into()))?;
                if ctx.is_none() {
                    ctx = Some(if with_coefficients {
                        let group = constants.ok_or_else(|| {
                            Error::InvalidArgument(
                                "system declares coefficients but no constants group was provided"
                                    .into(),
                            )
                        })?;
                        WordContext::with_constants(n, Arc::clone(group))?
                    } else {
                        WordContext::free(n)?
                    });
                }
                let ctx = ctx.as_ref().expect("just set");
                let mut sides = rest.trim().splitn(2, '=');
                let lhs_text = sides.next().unwrap_or("").trim();
                let lhs = Word::parse(ctx, lhs_text)
                    .map_err(|e| fail(format!("left side: {e}")))?;
                let eq = match sides.next() {
                    Some(rhs_text) => {
                        let rhs = Word::parse(ctx, rhs_text.trim())
                            .map_err(|e| fail(format!("right side: {e}")))?;
                        Equation::new(lhs, rhs)
                    }
                    None => Equation::from_word(lhs),
                };
                equations.push(eq);
            } else {
                return Err(fail(format!("unrecognized line `{line}`")));
            }
        }

        let n = nvars.ok_or(Error::SystemFormat {
            line: 0,
            msg: "missing `vars` line".into(),
        })?;
        let ctx = match ctx {
            Some(c) => c,
            None if with_coefficients => {
                let group = constants.ok_or_else(|| {
                    Error::InvalidArgument(
                        "system declares coefficients but no constants group was provided".into(),
                    )
                })?;
                WordContext::with_constants(n, Arc::clone(group))?
            }
            None => WordContext::free(n)?,
        };
        EquationSystem::new(ctx, equations)
    }

    /// Coefficient systems can only be solved over their own constants group.
    pub(crate) fn check_group(&self, group: &FiniteGroup) -> Result<()> {
        if let Some(constants) = self.ctx.constants() {
            if !FiniteGroup::same_group(constants, group) {
                return Err(Error::ContextMismatch(
                    "system coefficients come from a different group".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Where a tuple set came from; raw sets are not assumed closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    SolvedFromSystem,
    ClosureOfSet,
    Raw,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::SolvedFromSystem => "solved-from-system",
            Provenance::ClosureOfSet => "closure-of-set",
            Provenance::Raw => "raw",
        }
    }
}

/// A set of `n`-tuples over a group, sorted in rank order.
#[derive(Clone, Debug)]
pub struct AlgebraicSet {
    group: Arc<FiniteGroup>,
    ctx: WordContext,
    tuples: Vec<Vec<usize>>,
    provenance: Provenance,
}

impl PartialEq for AlgebraicSet {
    /// Provenance is bookkeeping; equality is the tuple set over the same
    /// group and context.
    fn eq(&self, other: &Self) -> bool {
        FiniteGroup::same_group(&self.group, &other.group)
            && self.ctx.same_context(&other.ctx)
            && self.tuples == other.tuples
    }
}

impl Eq for AlgebraicSet {}

impl AlgebraicSet {
    pub(crate) fn from_sorted(
        group: Arc<FiniteGroup>,
        ctx: WordContext,
        tuples: Vec<Vec<usize>>,
        provenance: Provenance,
    ) -> Self {
        debug_assert!(tuples.windows(2).all(|w| w[0] < w[1]));
        AlgebraicSet {
            group,
            ctx,
            tuples,
            provenance,
        }
    }

    /// Builds a raw set from arbitrary tuples, validating, sorting, and
    /// deduplicating.
    pub fn from_tuples(
        group: &Arc<FiniteGroup>,
        ctx: &WordContext,
        mut tuples: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if let Some(constants) = ctx.constants() {
            if !FiniteGroup::same_group(constants, group) {
                return Err(Error::ContextMismatch(
                    "context constants come from a different group".into(),
                ));
            }
        }
        for tuple in &tuples {
            if tuple.len() != ctx.nvars() {
                return Err(Error::ArityMismatch {
                    got: tuple.len(),
                    expected: ctx.nvars(),
                });
            }
            for &entry in tuple {
                group.check_element(entry)?;
            }
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(AlgebraicSet {
            group: Arc::clone(group),
            ctx: ctx.clone(),
            tuples,
            provenance: Provenance::Raw,
        })
    }

    /// The whole space `G^n`.
    pub fn full(group: &Arc<FiniteGroup>, ctx: &WordContext) -> Result<Self> {
        let total = tuple_count(group.order(), ctx.nvars(), "full tuple space")?;
        let tuples = (0..total)
            .map(|r| tuple_of_rank(group.order(), ctx.nvars(), r))
            .collect();
        let mut set = Self::from_tuples(group, ctx, tuples)?;
        set.provenance = Provenance::SolvedFromSystem;
        Ok(set)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ctx(&self) -> &WordContext {
        &self.ctx
    }

    pub fn arity(&self) -> usize {
        self.ctx.nvars()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples
            .binary_search_by(|t| t.as_slice().cmp(tuple))
            .is_ok()
    }

    pub fn is_subset_of(&self, other: &AlgebraicSet) -> bool {
        self.tuples.iter().all(|t| other.contains(t))
    }

    /// Membership oracle for the radical: does `eq` hold at every tuple?
    ///
    /// The empty set satisfies everything.
    pub fn radical_contains(&self, eq: &Equation) -> Result<bool> {
        let word = eq.unified(&self.ctx)?;
        word.validate_in(&self.ctx)?;
        let id = self.group.identity();
        Ok(self
            .tuples
            .iter()
            .all(|t| word.eval_raw(&self.group, t, None) == id))
    }

    /// Radical membership for a single word `w = 1`.
    pub fn radical_contains_word(&self, word: &Word) -> Result<bool> {
        self.radical_contains(&Equation::from_word(word.clone()))
    }
}

/// The solution set of `system` inside `group^n`, by exhaustive sweep.
pub fn solve(group: &Arc<FiniteGroup>, system: &EquationSystem) -> Result<AlgebraicSet> {
    system.check_group(group)?;
    let n = system.nvars();
    let order = group.order();
    let total = tuple_count(order, n, "solution sweep")?;
    let words = system.unified_words();
    let id = group.identity();

    let keep = |r: usize| {
        let tuple = tuple_of_rank(order, n, r);
        words
            .iter()
            .all(|w| w.eval_raw(group, &tuple, None) == id)
            .then_some(tuple)
    };
    let tuples: Vec<Vec<usize>> = if total >= PAR_THRESHOLD {
        (0..total).into_par_iter().filter_map(keep).collect()
    } else {
        (0..total).filter_map(keep).collect()
    };

    Ok(AlgebraicSet::from_sorted(
        Arc::clone(group),
        system.ctx().clone(),
        tuples,
        Provenance::SolvedFromSystem,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(build_group(&GroupSpec::Symmetric(3)).unwrap())
    }

    fn free_system(nvars: usize, eqs: &[&str]) -> EquationSystem {
        let ctx = WordContext::free(nvars).unwrap();
        let equations = eqs
            .iter()
            .map(|text| Equation::from_word(Word::parse(&ctx, text).unwrap()))
            .collect();
        EquationSystem::new(ctx, equations).unwrap()
    }

    #[test]
    fn empty_system_solves_to_whole_space() {
        let g = s3();
        let system = EquationSystem::empty(WordContext::free(2).unwrap());
        let set = solve(&g, &system).unwrap();
        assert_eq!(set.len(), 36);
        assert_eq!(set, AlgebraicSet::full(&g, system.ctx()).unwrap());
    }

    #[test]
    fn cube_law_solutions_in_s3() {
        // x1^3 = 1 holds at the identity and the two 3-cycles.
        let g = s3();
        let set = solve(&g, &free_system(1, &["x1^3"])).unwrap();
        assert_eq!(set.tuples(), &[vec![0], vec![3], vec![4]]);
    }

    #[test]
    fn commuting_involution_cube_system_in_s3() {
        // [x1,x2] = 1, x1^2 = 1, x2^3 = 1: x2 is trivial or a 3-cycle, x1 in
        // its centralizer with x1^2 = 1.
        let g = s3();
        let set = solve(&g, &free_system(2, &["[x1,x2]", "x1^2", "x2^3"])).unwrap();
        let expected = [
            vec![0, 0],
            vec![0, 3],
            vec![0, 4],
            vec![1, 0],
            vec![2, 0],
            vec![5, 0],
        ];
        assert_eq!(set.tuples(), &expected);
    }

    #[test]
    fn commuting_pairs_in_s3_count() {
        let g = s3();
        let set = solve(&g, &free_system(2, &["[x1,x2]"])).unwrap();
        assert_eq!(set.len(), 18);
        for t in set.tuples() {
            assert_eq!(g.mul(t[0], t[1]), g.mul(t[1], t[0]));
        }
    }

    #[test]
    fn radical_membership_examples() {
        let g = s3();
        let ctx = WordContext::free(1).unwrap();
        let set = solve(&g, &free_system(1, &["x1^3"])).unwrap();
        let w = |text: &str| Word::parse(&ctx, text).unwrap();
        assert!(set.radical_contains_word(&w("x1^6")).unwrap());
        assert!(!set.radical_contains_word(&w("x1^2")).unwrap());
        assert!(set.radical_contains_word(&w("1")).unwrap());
    }

    #[test]
    fn empty_set_radical_contains_everything() {
        let g = s3();
        let ctx = WordContext::free(2).unwrap();
        let set = AlgebraicSet::from_tuples(&g, &ctx, vec![]).unwrap();
        let word = Word::parse(&ctx, "x1*x2^5").unwrap();
        assert!(set.radical_contains_word(&word).unwrap());
    }

    #[test]
    fn solve_respects_equation_sides() {
        let g = s3();
        let ctx = WordContext::free(2).unwrap();
        let lhs = Word::parse(&ctx, "x1^2").unwrap();
        let rhs = Word::parse(&ctx, "x2^3").unwrap();
        let system =
            EquationSystem::new(ctx.clone(), vec![Equation::new(lhs, rhs)]).unwrap();
        let set = solve(&g, &system).unwrap();
        for t in set.tuples() {
            assert_eq!(g.pow(t[0], 2), g.pow(t[1], 3));
        }
        assert!(set.contains(&[0, 0]));
    }

    #[test]
    fn duplicate_equations_are_dropped() {
        let system = free_system(2, &["[x1,x2]", "[x1,x2]", "x1^2"]);
        assert_eq!(system.equations().len(), 2);
    }

    #[test]
    fn parse_system_round_trip() {
        let text = "# commuting pair\nvars 2\neq [x1,x2]\neq x1^2 = x2^3\n";
        let system = EquationSystem::parse(text, None).unwrap();
        assert_eq!(system.nvars(), 2);
        assert_eq!(system.equations().len(), 2);
        assert_eq!(system.equations()[1].to_string(), "x1^2 = x2^3");
    }

    #[test]
    fn parse_system_with_coefficients() {
        let g = s3();
        let text = "vars 1\ncoefficients\neq x1*g1 = g1*x1\n";
        let system = EquationSystem::parse(text, Some(&g)).unwrap();
        assert!(system.ctx().has_constants());
        // Solutions are the centralizer of the transposition g1: itself and
        // the identity.
        let set = solve(&g, &system).unwrap();
        assert_eq!(set.tuples(), &[vec![0], vec![1]]);
    }

    #[test]
    fn parse_system_rejects_garbage() {
        assert!(EquationSystem::parse("eq x1\n", None).is_err());
        assert!(EquationSystem::parse("vars 2\nnonsense\n", None).is_err());
        assert!(EquationSystem::parse("vars 2\neq y9\n", None).is_err());
        assert!(EquationSystem::parse("vars 1\ncoefficients\neq x1*g1\n", None).is_err());
        assert!(EquationSystem::parse("", None).is_err());
    }

    #[test]
    fn rank_round_trip() {
        for r in 0..216 {
            let t = tuple_of_rank(6, 3, r);
            assert_eq!(rank_of_tuple(6, &t), r);
        }
    }
}
