//! Systematic word enumeration in length-then-lex order.
//!
//! The alphabet order is `x1 < x1^-1 < x2 < x2^-1 < ...`; every reduced word
//! appears exactly once, shortest first. This order is part of the crate's
//! determinism contract: whenever an operation reports "the first witness",
//! it means first in this order.

use std::collections::HashSet;

use super::{Letter, Word, WordContext};

/// Iterator over all freely reduced variable words of length at most
/// `max_len`, in length-then-lex order, starting with the empty word.
pub struct WordStream {
    nvars: usize,
    max_len: usize,
    // Current layer as reduced symbol sequences; symbol 2i is x_{i+1},
    // symbol 2i+1 its inverse.
    layer: Vec<Vec<u32>>,
    next_index: usize,
    length: usize,
}

impl WordStream {
    pub fn new(nvars: usize, max_len: usize) -> Self {
        WordStream {
            nvars,
            max_len,
            layer: vec![Vec::new()],
            next_index: 0,
            length: 0,
        }
    }

    fn advance_layer(&mut self) -> bool {
        if self.length >= self.max_len {
            return false;
        }
        let symbols = 2 * self.nvars as u32;
        let mut next = Vec::with_capacity(self.layer.len() * symbols as usize);
        for seq in &self.layer {
            for s in 0..symbols {
                // Appending the inverse of the final symbol would cancel.
                if seq.last().is_none_or(|&t| t ^ 1 != s) {
                    let mut extended = Vec::with_capacity(seq.len() + 1);
                    extended.extend_from_slice(seq);
                    extended.push(s);
                    next.push(extended);
                }
            }
        }
        self.layer = next;
        self.next_index = 0;
        self.length += 1;
        !self.layer.is_empty()
    }
}

impl Iterator for WordStream {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.next_index >= self.layer.len() && !self.advance_layer() {
            return None;
        }
        let seq = &self.layer[self.next_index];
        self.next_index += 1;
        Some(seq_to_word(seq))
    }
}

/// Runs of one symbol merge into a single letter; a reduced symbol sequence
/// never mixes signs within a run, so exponents stay nonzero.
fn seq_to_word(seq: &[u32]) -> Word {
    let mut letters: Vec<Letter> = Vec::new();
    for &s in seq {
        let index = (s / 2) as usize;
        let delta: i64 = if s % 2 == 0 { 1 } else { -1 };
        match letters.last_mut() {
            Some(Letter::Var { index: top, exp }) if *top == index => *exp += delta,
            _ => letters.push(Letter::Var { index, exp: delta }),
        }
    }
    Word { letters }
}

/// All reduced variable words of length at most `max_len`.
pub fn enumerate_words(nvars: usize, max_len: usize) -> Vec<Word> {
    WordStream::new(nvars, max_len).collect()
}

/// How many words [`WordStream`] yields: `1 + sum_k 2n (2n-1)^(k-1)`,
/// saturating at `u64::MAX`.
pub fn reduced_word_count(nvars: usize, max_len: usize) -> u64 {
    let n = nvars as u64;
    if n == 0 {
        return 1;
    }
    let mut total: u64 = 1;
    let mut layer: u64 = 2 * n;
    for k in 1..=max_len {
        total = total.saturating_add(layer);
        if k < max_len {
            layer = layer.saturating_mul(2 * n - 1);
        }
    }
    total
}

/// All distinct reduced words of a coefficient context whose raw spelling
/// uses at most `max_len` symbols drawn from the variables, their inverses,
/// and the nonidentity constants.
///
/// Constant folding can shorten a spelling, so words are deduped after
/// reduction; each keeps its first position in generation order. Cost is
/// `(2 nvars + order - 1)^max_len`, so keep `max_len` small.
pub fn enumerate_words_with_constants(ctx: &WordContext, max_len: usize) -> Vec<Word> {
    let mut alphabet: Vec<Letter> = Vec::new();
    for index in 0..ctx.nvars() {
        alphabet.push(Letter::Var { index, exp: 1 });
        alphabet.push(Letter::Var { index, exp: -1 });
    }
    if let Some(group) = ctx.constants() {
        for elem in group.elements().filter(|&e| e != group.identity()) {
            alphabet.push(Letter::Const { elem });
        }
    }

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for len in 0..=max_len {
        for seq in &layer {
            let word =
                Word::from_letters(ctx, seq.clone()).expect("enumerated letters are valid");
            if seen.insert(word.clone()) {
                out.push(word);
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for seq in &layer {
            for &letter in &alphabet {
                let mut extended = Vec::with_capacity(seq.len() + 1);
                extended.extend_from_slice(seq);
                extended.push(letter);
                next.push(extended);
            }
        }
        layer = next;
    }
    out
}

/// Left-normed commutators `[x_{i1}, x_{i2}, ..., x_{iw}]` of the given
/// weight, with `i1 != i2` and the rest unrestricted, in lex order of the
/// index tuple.
///
/// Weight 1 is the generators themselves. A group generated by `n` elements
/// has trivial `w`-th lower central term exactly when every one of these
/// words evaluates to the identity at the generators: weight-`w` left-normed
/// generator commutators generate it, and if they all vanish so does every
/// deeper one.
pub fn left_normed_commutators(nvars: usize, weight: usize) -> Vec<Word> {
    if nvars == 0 || weight == 0 {
        return Vec::new();
    }
    let ctx = WordContext::free(nvars).expect("nvars checked above");
    let vars: Vec<Word> = (0..nvars)
        .map(|i| Word::var(&ctx, i).expect("index in range"))
        .collect();
    if weight == 1 {
        return vars;
    }

    let mut out = Vec::new();
    let mut indices = vec![0usize; weight];
    loop {
        if indices[0] != indices[1] {
            let mut word = Word::commutator(&ctx, &vars[indices[0]], &vars[indices[1]])
                .expect("variable words never overflow");
            for &i in &indices[2..] {
                word = Word::commutator(&ctx, &word, &vars[i])
                    .expect("variable words never overflow");
            }
            out.push(word);
        }
        // Lex increment.
        let mut pos = weight;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < nvars {
                break;
            }
            indices[pos] = 0;
        }
    }
}
