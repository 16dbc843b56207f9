//! Invariance under automorphisms, decided through the Nielsen generating
//! set of the automorphism group of the free group.
//!
//! A radical is characteristic exactly when its solution set is stable
//! under the induced point action of every automorphism. Stability under
//! each generator (the set carries its own inverses) composes to stability
//! under the whole group, so the check never enumerates automorphisms.

use std::fmt;

use crate::geometry::AlgebraicSet;
use crate::group::nilpotency_class;
use crate::words::{left_normed_commutators, Endomorphism, Word, WordContext};
use crate::Result;

use super::{decompose, Outcome, Verdict, Witness};

/// The Nielsen generators: a transposition of two variables, inversion of
/// one, and right multiplication `x_i -> x_i x_j^±1` for `i ≠ j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutKind {
    Swap(usize, usize),
    Invert(usize),
    RightMultiply(usize, usize),
    RightMultiplyInverse(usize, usize),
}

impl fmt::Display for AutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AutKind::Swap(i, j) => write!(f, "x{} <-> x{}", i + 1, j + 1),
            AutKind::Invert(i) => write!(f, "x{0} -> x{0}^-1", i + 1),
            AutKind::RightMultiply(i, j) => {
                write!(f, "x{0} -> x{0}*x{1}", i + 1, j + 1)
            }
            AutKind::RightMultiplyInverse(i, j) => {
                write!(f, "x{0} -> x{0}*x{1}^-1", i + 1, j + 1)
            }
        }
    }
}

/// One automorphism generator together with its variable images.
#[derive(Clone, Debug)]
pub struct AutGenerator {
    kind: AutKind,
    endo: Endomorphism,
}

impl AutGenerator {
    fn new(ctx: &WordContext, kind: AutKind) -> Result<Self> {
        let nvars = ctx.nvars();
        let mut images: Vec<Word> = (0..nvars)
            .map(|i| Word::var(ctx, i))
            .collect::<Result<_>>()?;
        match kind {
            AutKind::Swap(i, j) => images.swap(i, j),
            AutKind::Invert(i) => images[i] = images[i].inverse(ctx),
            AutKind::RightMultiply(i, j) => {
                images[i] = images[i].mul(ctx, &Word::var(ctx, j)?)?;
            }
            AutKind::RightMultiplyInverse(i, j) => {
                images[i] = images[i].mul(ctx, &Word::var(ctx, j)?.inverse(ctx))?;
            }
        }
        Ok(AutGenerator {
            kind,
            endo: Endomorphism::new(ctx, images)?,
        })
    }

    pub fn kind(&self) -> AutKind {
        self.kind
    }

    pub fn images(&self) -> &[Word] {
        self.endo.images()
    }
}

/// The inverse-closed Nielsen generating set, in a fixed order: swaps,
/// inversions, right multiplications, then their inverses. One variable
/// leaves only the inversion.
pub fn nielsen_generators(ctx: &WordContext) -> Result<Vec<AutGenerator>> {
    let n = ctx.nvars();
    let mut kinds = Vec::new();
    if n == 1 {
        kinds.push(AutKind::Invert(0));
    } else {
        for i in 0..n {
            for j in i + 1..n {
                kinds.push(AutKind::Swap(i, j));
            }
        }
        for i in 0..n {
            kinds.push(AutKind::Invert(i));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    kinds.push(AutKind::RightMultiply(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    kinds.push(AutKind::RightMultiplyInverse(i, j));
                }
            }
        }
    }
    kinds
        .into_iter()
        .map(|kind| AutGenerator::new(ctx, kind))
        .collect()
}

/// Whether the radical of `set` is a characteristic subgroup: stability of
/// `set` under the induced action of every Nielsen generator.
pub fn is_characteristic(set: &AlgebraicSet) -> Result<Verdict> {
    super::require_coefficient_free(set, "is_characteristic")?;
    super::require_algebraic(set)?;
    let group = set.group();
    for generator in nielsen_generators(set.ctx())? {
        for point in set.tuples() {
            let result = generator.endo.map_point(group, point);
            if !set.contains(&result) {
                return Ok(Verdict {
                    outcome: Outcome::No,
                    decomposition: None,
                    witness: Some(Witness {
                        point: point.clone(),
                        images: Some(generator.images().to_vec()),
                        result,
                    }),
                    note: Some(format!("violated by {}", generator.kind())),
                });
            }
        }
    }
    Ok(Verdict {
        outcome: Outcome::Yes,
        decomposition: None,
        witness: None,
        note: Some(
            "stable under every Nielsen generator; generator stability composes \
             to stability under the full automorphism group"
                .into(),
        ),
    })
}

/// The nilpotency-based picture around one algebraic set.
///
/// `gamma_vanishes` is the hypothesis the decomposition equivalence needs:
/// every weight-`n` left-normed commutator of generators dies on `set`,
/// i.e. the `n`-th lower central term of the free group sits inside the
/// radical. The class bounds of the base group are reported next to it so
/// the relationship between the two readings stays observable: class at
/// most `n - 1` forces the hypothesis for every set, class exactly `n` does
/// not.
#[derive(Clone, Debug)]
pub struct CharacteristicReport {
    pub nilpotency_class: Option<usize>,
    pub class_at_most_n: bool,
    pub class_at_most_n_minus_1: bool,
    pub gamma_vanishes: bool,
    pub characteristic: Verdict,
    pub decomposition: Verdict,
    /// Hypothesis under which characteristic ⟺ fully characteristic is
    /// asserted.
    pub equivalence_applicable: bool,
    /// False would mean the equivalence failed: applicable + characteristic
    /// but not decomposable, or decomposable but not characteristic.
    pub consistent: bool,
}

/// Runs the characteristic check and the decomposition criterion side by
/// side and evaluates the equivalence hypothesis on `set`.
pub fn characteristic_report(set: &AlgebraicSet) -> Result<CharacteristicReport> {
    super::require_coefficient_free(set, "characteristic_report")?;
    let n = set.ctx().nvars();
    let class = nilpotency_class(set.group());

    let mut gamma_vanishes = true;
    for word in left_normed_commutators(n, n) {
        if !set.radical_contains_word(&word)? {
            gamma_vanishes = false;
            break;
        }
    }

    let characteristic = is_characteristic(set)?;
    let decomposition = decompose(set)?;

    let equivalence_applicable = gamma_vanishes;
    let char_yes = characteristic.outcome == Outcome::Yes;
    let decomp_yes = decomposition.outcome == Outcome::Yes;
    let forward = !(equivalence_applicable && char_yes) || decomp_yes;
    let backward = !decomp_yes || char_yes;
    let consistent = forward && backward;

    Ok(CharacteristicReport {
        nilpotency_class: class,
        class_at_most_n: class.is_some_and(|c| c <= n),
        class_at_most_n_minus_1: class.is_some_and(|c| c < n),
        gamma_vanishes,
        characteristic,
        decomposition,
        equivalence_applicable,
        consistent,
    })
}
