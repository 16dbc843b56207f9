//! Group words: free reduction, evaluation, substitution, and enumeration.
//!
//! A [`Word`] is a freely reduced sequence of letters over `n` variables and,
//! in a coefficient context, constants drawn from a fixed finite group.
//! Reduction keeps three invariants: no variable letter has exponent zero,
//! adjacent letters never share a variable index, and constants are folded so
//! that no two sit next to each other and none is the identity. Two words are
//! equal as group elements of the ambient free product exactly when their
//! reduced forms are equal, so `==` on `Word` is the real word problem.
//!
//! Variables display 1-based (`x1`, `x2`, ...); constants display as `g` plus
//! the element index of the constants group (`g0` is its identity). The
//! concrete syntax accepted by [`Word::parse`] round-trips with [`Display`].

mod enumerate;
mod parse;

pub use enumerate::{
    enumerate_words, enumerate_words_with_constants, left_normed_commutators, reduced_word_count,
    WordStream,
};

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::group::FiniteGroup;
use crate::Result;

/// Hard cap on reduced word length; [`Word::pow`] and substitution refuse to
/// build anything longer.
pub const MAX_WORD_LETTERS: usize = 1 << 16;

/// The ambient signature words live in: a variable count plus an optional
/// constants group.
#[derive(Clone, Debug)]
pub struct WordContext {
    nvars: usize,
    constants: Option<Arc<FiniteGroup>>,
}

impl WordContext {
    /// Coefficient-free context with variables `x1 ... x{nvars}`.
    pub fn free(nvars: usize) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::NoVariables);
        }
        Ok(WordContext {
            nvars,
            constants: None,
        })
    }

    /// Context whose words may also use constants from `group`.
    pub fn with_constants(nvars: usize, group: Arc<FiniteGroup>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::NoVariables);
        }
        Ok(WordContext {
            nvars,
            constants: Some(group),
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn constants(&self) -> Option<&Arc<FiniteGroup>> {
        self.constants.as_ref()
    }

    pub fn has_constants(&self) -> bool {
        self.constants.is_some()
    }

    /// Same variable count and, when present, the same constants group.
    pub fn same_context(&self, other: &WordContext) -> bool {
        self.nvars == other.nvars
            && match (&self.constants, &other.constants) {
                (None, None) => true,
                (Some(a), Some(b)) => FiniteGroup::same_group(a, b),
                _ => false,
            }
    }
}

impl PartialEq for WordContext {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other)
    }
}

/// One letter of a reduced word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// `x_{index+1}` raised to `exp`; `exp` is never zero in a reduced word.
    Var { index: usize, exp: i64 },
    /// A constant, by element index in the context's constants group.
    Const { elem: usize },
}

/// A freely reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

fn validate_letters(ctx: &WordContext, letters: &[Letter]) -> Result<()> {
    for &letter in letters {
        match letter {
            Letter::Var { index, exp } => {
                if index >= ctx.nvars {
                    return Err(Error::VarOutOfRange {
                        display: index + 1,
                        nvars: ctx.nvars,
                    });
                }
                if exp == i64::MIN {
                    return Err(Error::ExponentOverflow);
                }
            }
            Letter::Const { elem } => match &ctx.constants {
                None => return Err(Error::ConstantWithoutCoefficients { index: elem }),
                Some(group) => {
                    if elem >= group.order() {
                        return Err(Error::ConstantOutOfRange {
                            index: elem,
                            order: group.order(),
                        });
                    }
                }
            },
        }
    }
    Ok(())
}

/// Pushes `letter` onto a reduced letter stack, keeping it reduced.
fn push_reduced(ctx: &WordContext, out: &mut Vec<Letter>, letter: Letter) -> Result<()> {
    match letter {
        Letter::Var { exp: 0, .. } => Ok(()),
        Letter::Var { index, exp } => {
            if let Some(&Letter::Var {
                index: top,
                exp: top_exp,
            }) = out.last()
            {
                if top == index {
                    let merged = top_exp.checked_add(exp).ok_or(Error::ExponentOverflow)?;
                    out.pop();
                    if merged != 0 {
                        out.push(Letter::Var { index, exp: merged });
                    }
                    return Ok(());
                }
            }
            out.push(Letter::Var { index, exp });
            Ok(())
        }
        Letter::Const { elem } => {
            let group = ctx
                .constants
                .as_ref()
                .ok_or(Error::ConstantWithoutCoefficients { index: elem })?;
            let mut value = elem;
            if let Some(&Letter::Const { elem: top }) = out.last() {
                out.pop();
                value = group.mul(top, elem);
            }
            if value != group.identity() {
                out.push(Letter::Const { elem: value });
            }
            Ok(())
        }
    }
}

impl Word {
    /// The empty word.
    pub fn identity() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    /// The single variable `x_{index+1}`.
    pub fn var(ctx: &WordContext, index: usize) -> Result<Self> {
        Self::from_letters(ctx, vec![Letter::Var { index, exp: 1 }])
    }

    /// A single constant letter.
    pub fn constant(ctx: &WordContext, elem: usize) -> Result<Self> {
        Self::from_letters(ctx, vec![Letter::Const { elem }])
    }

    /// Validates the letters against `ctx` and freely reduces them.
    pub fn from_letters(ctx: &WordContext, letters: Vec<Letter>) -> Result<Self> {
        validate_letters(ctx, &letters)?;
        let mut out = Vec::with_capacity(letters.len());
        for letter in letters {
            push_reduced(ctx, &mut out, letter)?;
        }
        Ok(Word { letters: out })
    }

    /// Checks that every letter fits `ctx`; words cross module boundaries,
    /// so consumers re-validate before unchecked evaluation.
    pub fn validate_in(&self, ctx: &WordContext) -> Result<()> {
        validate_letters(ctx, &self.letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of letters in reduced form.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// True when the reduced form has no letters, i.e. the word is the identity.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn uses_constants(&self) -> bool {
        self.letters
            .iter()
            .any(|l| matches!(l, Letter::Const { .. }))
    }

    /// Product of two reduced words, reduced.
    pub fn mul(&self, ctx: &WordContext, other: &Word) -> Result<Word> {
        let mut out = self.letters.clone();
        for &letter in &other.letters {
            push_reduced(ctx, &mut out, letter)?;
        }
        Ok(Word { letters: out })
    }

    /// The inverse word: letters reversed, exponents negated, constants
    /// inverted.
    pub fn inverse(&self, ctx: &WordContext) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|&l| match l {
                Letter::Var { index, exp } => Letter::Var { index, exp: -exp },
                Letter::Const { elem } => Letter::Const {
                    elem: ctx
                        .constants
                        .as_ref()
                        .expect("constants validated at construction")
                        .inv(elem),
                },
            })
            .collect();
        // Reversing a reduced word keeps it reduced.
        Word { letters }
    }

    /// `self^k` by square and multiply, refusing results longer than
    /// [`MAX_WORD_LETTERS`].
    pub fn pow(&self, ctx: &WordContext, k: i64) -> Result<Word> {
        let too_long = |w: &Word| w.letters.len() > MAX_WORD_LETTERS;
        let mut base = if k < 0 { self.inverse(ctx) } else { self.clone() };
        let mut rest = k.unsigned_abs();
        let mut acc = Word::identity();
        while rest > 0 {
            if rest & 1 == 1 {
                acc = acc.mul(ctx, &base)?;
            }
            rest >>= 1;
            if rest > 0 {
                base = base.mul(ctx, &base)?;
            }
            if too_long(&acc) || too_long(&base) {
                return Err(Error::ExponentTooLarge {
                    exp: k,
                    limit: MAX_WORD_LETTERS,
                });
            }
        }
        Ok(acc)
    }

    /// `[a, b] = a^-1 b^-1 a b`, reduced.
    pub fn commutator(ctx: &WordContext, a: &Word, b: &Word) -> Result<Word> {
        a.inverse(ctx)
            .mul(ctx, &b.inverse(ctx))?
            .mul(ctx, a)?
            .mul(ctx, b)
    }

    /// Replaces each variable `x_i` by `images[i-1]`, leaving constants in
    /// place. This is the action of the endomorphism the images define.
    pub fn substitute(&self, ctx: &WordContext, images: &[Word]) -> Result<Word> {
        if images.len() != ctx.nvars {
            return Err(Error::BadImageCount {
                got: images.len(),
                expected: ctx.nvars,
            });
        }
        let mut acc = Word::identity();
        for &letter in &self.letters {
            match letter {
                Letter::Var { index, exp } => {
                    acc = acc.mul(ctx, &images[index].pow(ctx, exp)?)?;
                }
                Letter::Const { .. } => {
                    let mut out = acc.letters;
                    push_reduced(ctx, &mut out, letter)?;
                    acc = Word { letters: out };
                }
            }
            if acc.letters.len() > MAX_WORD_LETTERS {
                return Err(Error::ExponentTooLarge {
                    exp: 0,
                    limit: MAX_WORD_LETTERS,
                });
            }
        }
        Ok(acc)
    }

    /// Evaluates at `point`, one group element per variable.
    ///
    /// In a coefficient context the target must be the constants group
    /// itself; use [`Word::evaluate_embedded`] to evaluate into a larger
    /// group along an embedding of the constants.
    pub fn evaluate(&self, ctx: &WordContext, group: &FiniteGroup, point: &[usize]) -> Result<usize> {
        self.check_point(ctx, group, point)?;
        if self.uses_constants() {
            let constants = ctx
                .constants
                .as_ref()
                .expect("constants validated at construction");
            if !FiniteGroup::same_group(constants, group) {
                return Err(Error::ContextMismatch(
                    "evaluation target differs from the constants group".into(),
                ));
            }
        }
        Ok(self.eval_raw(group, point, None))
    }

    /// Evaluates at `point` in `target`, sending constant `c` to `embed[c]`.
    pub fn evaluate_embedded(
        &self,
        ctx: &WordContext,
        target: &FiniteGroup,
        embed: &[usize],
        point: &[usize],
    ) -> Result<usize> {
        self.check_point(ctx, target, point)?;
        if let Some(constants) = &ctx.constants {
            if embed.len() != constants.order() {
                return Err(Error::ContextMismatch(format!(
                    "embedding lists {} elements, constants group has {}",
                    embed.len(),
                    constants.order()
                )));
            }
            for &img in embed {
                target.check_element(img)?;
            }
        } else if self.uses_constants() {
            return Err(Error::ConstantWithoutCoefficients { index: 0 });
        }
        Ok(self.eval_raw(target, point, Some(embed)))
    }

    fn check_point(&self, ctx: &WordContext, group: &FiniteGroup, point: &[usize]) -> Result<()> {
        if point.len() != ctx.nvars {
            return Err(Error::ArityMismatch {
                got: point.len(),
                expected: ctx.nvars,
            });
        }
        for &p in point {
            group.check_element(p)?;
        }
        Ok(())
    }

    /// Evaluation loop without validation; hot path for solvers.
    ///
    /// `embed` maps constants group elements into `group`; `None` means
    /// constants are already elements of `group`.
    pub(crate) fn eval_raw(
        &self,
        group: &FiniteGroup,
        point: &[usize],
        embed: Option<&[usize]>,
    ) -> usize {
        let mut acc = group.identity();
        for &letter in &self.letters {
            let value = match letter {
                Letter::Var { index, exp } => group.pow(point[index], exp),
                Letter::Const { elem } => match embed {
                    Some(map) => map[elem],
                    None => elem,
                },
            };
            acc = group.mul(acc, value);
        }
        acc
    }

    /// Parses the concrete syntax; see the module docs for the grammar.
    pub fn parse(ctx: &WordContext, text: &str) -> Result<Word> {
        parse::parse(ctx, text)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match letter {
                Letter::Var { index, exp: 1 } => write!(f, "x{}", index + 1)?,
                Letter::Var { index, exp } => write!(f, "x{}^{}", index + 1, exp)?,
                Letter::Const { elem } => write!(f, "g{elem}")?,
            }
        }
        Ok(())
    }
}

/// A substitution `x_i -> images[i-1]`, applied to words over the same
/// context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(ctx: &WordContext, images: Vec<Word>) -> Result<Self> {
        if images.len() != ctx.nvars() {
            return Err(Error::BadImageCount {
                got: images.len(),
                expected: ctx.nvars(),
            });
        }
        Ok(Endomorphism { images })
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, ctx: &WordContext, word: &Word) -> Result<Word> {
        word.substitute(ctx, &self.images)
    }

    /// The induced map on points of `group^nvars`: coordinate `i` of the
    /// result is `images[i]` evaluated at the point.
    pub fn map_point(&self, group: &FiniteGroup, point: &[usize]) -> Vec<usize> {
        self.images
            .iter()
            .map(|w| w.eval_raw(group, point, None))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};

    fn free2() -> WordContext {
        WordContext::free(2).unwrap()
    }

    fn s3_ctx() -> WordContext {
        let g = Arc::new(build_group(&GroupSpec::Symmetric(3)).unwrap());
        WordContext::with_constants(2, g).unwrap()
    }

    fn w(ctx: &WordContext, text: &str) -> Word {
        Word::parse(ctx, text).unwrap()
    }

    #[test]
    fn reduction_cancels_across_gaps() {
        let ctx = free2();
        let word = Word::from_letters(
            &ctx,
            vec![
                Letter::Var { index: 0, exp: 1 },
                Letter::Var { index: 1, exp: 2 },
                Letter::Var { index: 1, exp: -2 },
                Letter::Var { index: 0, exp: -1 },
            ],
        )
        .unwrap();
        assert!(word.is_identity());
    }

    #[test]
    fn constants_fold_through_cancellation() {
        let ctx = s3_ctx();
        // g1 x1 x1^-1 g1 = g1 g1 = e for the transposition g1.
        let word = w(&ctx, "g1 * x1 * x1^-1 * g1");
        assert!(word.is_identity());
        // Transposition times a different transposition is a 3-cycle.
        let word = w(&ctx, "g1 * x1 * x1^-1 * g2");
        assert_eq!(word.letters(), &[Letter::Const { elem: 4 }]);
    }

    #[test]
    fn inverse_and_mul_satisfy_group_laws() {
        let ctx = s3_ctx();
        for text in ["x1", "x1^3*x2^-2", "g3*x1*g2", "[x1,x2]", "x2^-1*g1*x1"] {
            let word = w(&ctx, text);
            assert!(word.mul(&ctx, &word.inverse(&ctx)).unwrap().is_identity());
            assert!(word.inverse(&ctx).mul(&ctx, &word).unwrap().is_identity());
        }
    }

    #[test]
    fn pow_agrees_with_repeated_mul() {
        let ctx = free2();
        let word = w(&ctx, "x1*x2^-1");
        let mut acc = Word::identity();
        for k in 0..8i64 {
            assert_eq!(word.pow(&ctx, k).unwrap(), acc);
            assert_eq!(word.pow(&ctx, -k).unwrap(), acc.inverse(&ctx));
            acc = acc.mul(&ctx, &word).unwrap();
        }
    }

    #[test]
    fn pow_of_single_letter_stays_single() {
        let ctx = free2();
        let word = w(&ctx, "x1").pow(&ctx, 1 << 40).unwrap();
        assert_eq!(word.len(), 1);
    }

    #[test]
    fn pow_refuses_huge_expansions() {
        let ctx = free2();
        let word = w(&ctx, "x1*x2");
        assert!(matches!(
            word.pow(&ctx, 1 << 40),
            Err(Error::ExponentTooLarge { .. })
        ));
    }

    #[test]
    fn evaluate_commutator_in_s3() {
        // [(12), (123)] = (132): indices [2, 3] -> 4.
        let ctx = free2();
        let g = build_group(&GroupSpec::Symmetric(3)).unwrap();
        let word = w(&ctx, "[x1,x2]");
        assert_eq!(word.evaluate(&ctx, &g, &[2, 3]).unwrap(), 4);
        // Commuting entries kill every commutator.
        assert_eq!(word.evaluate(&ctx, &g, &[3, 4]).unwrap(), 0);
    }

    #[test]
    fn evaluate_is_a_homomorphism() {
        let ctx = free2();
        let g = build_group(&GroupSpec::Symmetric(3)).unwrap();
        let a = w(&ctx, "x1^2*x2");
        let b = w(&ctx, "x2^-1*x1");
        let ab = a.mul(&ctx, &b).unwrap();
        for p in 0..g.order() {
            for q in 0..g.order() {
                let point = [p, q];
                assert_eq!(
                    ab.evaluate(&ctx, &g, &point).unwrap(),
                    g.mul(
                        a.evaluate(&ctx, &g, &point).unwrap(),
                        b.evaluate(&ctx, &g, &point).unwrap()
                    )
                );
            }
        }
    }

    #[test]
    fn evaluate_checks_arity_and_range() {
        let ctx = free2();
        let g = build_group(&GroupSpec::Symmetric(3)).unwrap();
        let word = w(&ctx, "x1");
        assert!(matches!(
            word.evaluate(&ctx, &g, &[1]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            word.evaluate(&ctx, &g, &[1, 9]),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn embedded_evaluation_maps_constants() {
        let ctx = s3_ctx();
        let g = ctx.constants().unwrap().clone();
        let word = w(&ctx, "g3*x1");
        // Identity embedding first.
        let embed: Vec<usize> = (0..g.order()).collect();
        for a in 0..g.order() {
            assert_eq!(
                word.evaluate_embedded(&ctx, &g, &embed, &[a, 0]).unwrap(),
                g.mul(3, a)
            );
        }
    }

    #[test]
    fn substitution_composes_with_evaluation() {
        let ctx = free2();
        let g = build_group(&GroupSpec::Symmetric(3)).unwrap();
        let word = w(&ctx, "x1^2*x2^-1");
        let images = [w(&ctx, "[x1,x2]"), w(&ctx, "x2^2*x1")];
        let substituted = word.substitute(&ctx, &images).unwrap();
        for p in 0..g.order() {
            for q in 0..g.order() {
                let mapped = [
                    images[0].evaluate(&ctx, &g, &[p, q]).unwrap(),
                    images[1].evaluate(&ctx, &g, &[p, q]).unwrap(),
                ];
                assert_eq!(
                    substituted.evaluate(&ctx, &g, &[p, q]).unwrap(),
                    word.evaluate(&ctx, &g, &mapped).unwrap()
                );
            }
        }
    }

    #[test]
    fn context_rejects_constants_when_free() {
        let ctx = free2();
        assert!(matches!(
            Word::constant(&ctx, 1),
            Err(Error::ConstantWithoutCoefficients { .. })
        ));
    }

    #[test]
    fn display_forms() {
        let ctx = s3_ctx();
        assert_eq!(w(&ctx, "1").to_string(), "1");
        assert_eq!(w(&ctx, "x1 x2").to_string(), "x1*x2");
        assert_eq!(w(&ctx, "x1^-2 * g4").to_string(), "x1^-2*g4");
        assert_eq!(
            w(&ctx, "[x1, x2]").to_string(),
            "x1^-1*x2^-1*x1*x2"
        );
    }
}
