//! Coordinate groups `Q = F_n / Rad(E)` realized inside `G^E`, and the
//! homomorphism-extension machinery built on them.
//!
//! `Q` is generated by the coordinate projections (and, with coefficients,
//! the constant functions). Elements are discovered by breadth-first
//! multiplication in a fixed generator order, so element ids, successor
//! tables, and word lifts are all canonical: two marked-isomorphic
//! coordinate groups build byte-identical successor tables.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Error;
use crate::geometry::{tuple_count, tuple_of_rank, AlgebraicSet, Provenance};
use crate::group::FiniteGroup;
use crate::words::{Letter, Word, WordContext};
use crate::Result;

/// The group structure needed by extension targets.
pub trait GroupOps {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
}

impl GroupOps for FiniteGroup {
    fn order(&self) -> usize {
        FiniteGroup::order(self)
    }

    fn identity(&self) -> usize {
        FiniteGroup::identity(self)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        FiniteGroup::mul(self, a, b)
    }
}

/// The coordinate group of a nonempty tuple set, as functions `E -> G`
/// stored densely.
///
/// Marked generator `k` is the projection onto coordinate `k` for
/// `k < nvars`; in coefficient mode, generator `nvars + c` is the constant
/// function with value `c`.
pub struct CoordinateGroup {
    base: Arc<FiniteGroup>,
    ctx: WordContext,
    points: Vec<Vec<usize>>,
    vectors: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    marked: Vec<usize>,
    succ: Vec<Vec<usize>>,
    lifts: Vec<Word>,
}

impl GroupOps for CoordinateGroup {
    fn order(&self) -> usize {
        self.vectors.len()
    }

    fn identity(&self) -> usize {
        0
    }

    /// General product via function vectors; `O(|E|)` per call. Hot loops
    /// use the successor table instead.
    fn mul(&self, a: usize, b: usize) -> usize {
        let vector: Vec<usize> = self.vectors[a]
            .iter()
            .zip(&self.vectors[b])
            .map(|(&x, &y)| self.base.mul(x, y))
            .collect();
        self.index[&vector]
    }
}

impl CoordinateGroup {
    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn ctx(&self) -> &WordContext {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.vectors.len()
    }

    /// The tuples of `E`, in rank order; vector entries are indexed by
    /// position in this list.
    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    /// Element ids of the marked generators: `nvars` projections, then one
    /// constant per element of `G` in coefficient mode.
    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    pub fn vector(&self, element: usize) -> &[usize] {
        &self.vectors[element]
    }

    pub fn element_of_vector(&self, vector: &[usize]) -> Option<usize> {
        self.index.get(vector).copied()
    }

    /// One reduced positive word evaluating to the element on every point.
    pub fn lift(&self, element: usize) -> &Word {
        &self.lifts[element]
    }

    /// `element * marked[k]`.
    pub fn succ(&self, element: usize, k: usize) -> usize {
        self.succ[element][k]
    }

    /// Pointwise inverse, resolved through the vector index.
    pub fn inv(&self, element: usize) -> usize {
        let vector: Vec<usize> =
            self.vectors[element].iter().map(|&x| self.base.inv(x)).collect();
        self.index[&vector]
    }

    /// Whether `x_i -> targets[i]` (variables first, then constants in
    /// coefficient mode) extends to a homomorphism into `target`, and the
    /// full element map when it does.
    ///
    /// Walks the successor table from the identity, forcing
    /// `f(x * g_k) = f(x) * targets[k]`; a conflict is a relation of `Q`
    /// that the targets break. Every edge is checked, so a conflict-free
    /// completion is a homomorphism on all of `Q`.
    pub fn hom_to<T: GroupOps + ?Sized>(
        &self,
        targets: &[usize],
        target: &T,
    ) -> Result<Option<Vec<usize>>> {
        if targets.len() != self.marked.len() {
            return Err(Error::BadTargetCount {
                got: targets.len(),
                expected: self.marked.len(),
            });
        }
        for &t in targets {
            if t >= target.order() {
                return Err(Error::ElementOutOfRange {
                    value: t,
                    order: target.order(),
                });
            }
        }
        Ok(self.hom_to_unchecked(targets, target))
    }

    pub(crate) fn hom_to_unchecked<T: GroupOps + ?Sized>(
        &self,
        targets: &[usize],
        target: &T,
    ) -> Option<Vec<usize>> {
        const UNSET: usize = usize::MAX;
        let mut image = vec![UNSET; self.order()];
        image[0] = target.identity();
        let mut queue = Vec::with_capacity(self.order());
        queue.push(0);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let fx = image[x];
            for (k, &t) in targets.iter().enumerate() {
                let y = self.succ[x][k];
                let fy = target.mul(fx, t);
                if image[y] == UNSET {
                    image[y] = fy;
                    queue.push(y);
                } else if image[y] != fy {
                    return None;
                }
            }
        }
        debug_assert_eq!(queue.len(), self.order());
        Some(image)
    }

    /// The same group as an explicit multiplication table, named by word
    /// lifts. Intended for small cross-checks.
    pub fn to_finite_group(&self) -> Result<FiniteGroup> {
        let order = self.order();
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(self.mul(a, b));
            }
        }
        let names = self.lifts.iter().map(|w| w.to_string()).collect();
        FiniteGroup::from_table_trusted(order, table, Some(names))
    }

    /// Canonical fingerprint of the marked group: the successor table is
    /// already in breadth-first discovery order, which depends only on the
    /// abstract marked structure, so two coordinate groups are
    /// marked-isomorphic exactly when their signatures match.
    pub fn marked_signature(&self) -> Vec<usize> {
        let mut sig = vec![self.order(), self.marked.len()];
        for row in &self.succ {
            sig.extend_from_slice(row);
        }
        sig
    }
}

/// Builds the coordinate group of a nonempty set. With constants in the
/// context, every element of the group becomes a marked constant generator.
pub fn coordinate_group(set: &AlgebraicSet) -> Result<CoordinateGroup> {
    if set.ctx().has_constants() {
        let constants: Vec<usize> = set.group().elements().collect();
        coordinate_group_marked(set, &constants)
    } else {
        coordinate_group_marked(set, &[])
    }
}

/// Coordinate group marking only the given constants (in the given order)
/// after the projections. Product targets mark the diagonal copy of the
/// base group rather than every element.
pub(crate) fn coordinate_group_marked(
    set: &AlgebraicSet,
    constants: &[usize],
) -> Result<CoordinateGroup> {
    if set.is_empty() {
        return Err(Error::EmptyAlgebraicSet);
    }
    let base = Arc::clone(set.group());
    let ctx = set.ctx().clone();
    if !constants.is_empty() && !ctx.has_constants() {
        return Err(Error::ContextMismatch(
            "constant generators need a coefficient context".into(),
        ));
    }
    let points: Vec<Vec<usize>> = set.tuples().to_vec();
    let npoints = points.len();

    // Generator vectors with their lift letters, marked order.
    let mut generators: Vec<(Vec<usize>, Letter)> = Vec::new();
    for i in 0..ctx.nvars() {
        let vector = points.iter().map(|t| t[i]).collect();
        generators.push((vector, Letter::Var { index: i, exp: 1 }));
    }
    for &c in constants {
        base.check_element(c)?;
        generators.push((vec![c; npoints], Letter::Const { elem: c }));
    }

    let identity_vector = vec![base.identity(); npoints];
    let mut vectors = vec![identity_vector.clone()];
    let mut index = HashMap::new();
    index.insert(identity_vector, 0usize);
    let mut lifts = vec![Word::identity()];
    let mut succ: Vec<Vec<usize>> = Vec::new();

    let mut head = 0;
    while head < vectors.len() {
        let current = vectors[head].clone();
        let mut row = Vec::with_capacity(generators.len());
        for (gvec, letter) in &generators {
            let product: Vec<usize> = current
                .iter()
                .zip(gvec)
                .map(|(&x, &y)| base.mul(x, y))
                .collect();
            let id = match index.get(&product) {
                Some(&id) => id,
                None => {
                    let id = vectors.len();
                    index.insert(product.clone(), id);
                    vectors.push(product);
                    let letter_word = Word::from_letters(&ctx, vec![*letter])?;
                    lifts.push(lifts[head].mul(&ctx, &letter_word)?);
                    id
                }
            };
            row.push(id);
        }
        succ.push(row);
        head += 1;
    }

    let marked = generators
        .iter()
        .map(|(gvec, _)| index[gvec])
        .collect();

    Ok(CoordinateGroup {
        base,
        ctx,
        points,
        vectors,
        index,
        marked,
        succ,
        lifts,
    })
}

/// The closure result: the closed set plus whether the input already was.
pub struct ClosureOutcome {
    pub closed: AlgebraicSet,
    pub was_algebraic: bool,
}

/// `cl(E) = V(Rad(E))`: all tuples every consequence of `E` also admits.
///
/// A tuple lies in the closure exactly when sending the projections to its
/// entries (constants staying fixed) extends to a homomorphism `Q -> G`.
///
/// The empty set is algebraic only with coefficients; the coefficient-free
/// empty set has no closure since every solution set contains the identity
/// tuple.
pub fn closure(set: &AlgebraicSet) -> Result<ClosureOutcome> {
    if set.ctx().has_constants() {
        let constants: Vec<usize> = set.group().elements().collect();
        closure_pinned(set, &constants)
    } else {
        closure_pinned(set, &[])
    }
}

/// Closure relative to the substitutions fixing the given constants; the
/// plain closure pins every element, product targets pin the diagonal.
pub(crate) fn closure_pinned(
    set: &AlgebraicSet,
    constants: &[usize],
) -> Result<ClosureOutcome> {
    if set.is_empty() {
        if set.ctx().has_constants() {
            return Ok(ClosureOutcome {
                closed: AlgebraicSet::from_sorted(
                    Arc::clone(set.group()),
                    set.ctx().clone(),
                    Vec::new(),
                    Provenance::ClosureOfSet,
                ),
                was_algebraic: true,
            });
        }
        return Err(Error::EmptyClosureUndefined);
    }

    let q = coordinate_group_marked(set, constants)?;
    let group = set.group();
    let order = group.order();
    let n = set.ctx().nvars();
    let total = tuple_count(order, n, "closure sweep")?;

    let keep = |r: usize| {
        let tuple = tuple_of_rank(order, n, r);
        let mut targets = tuple.clone();
        targets.extend_from_slice(constants);
        q.hom_to_unchecked(&targets, group.as_ref())
            .is_some()
            .then_some(tuple)
    };
    let tuples: Vec<Vec<usize>> = if total >= super::PAR_THRESHOLD {
        (0..total).into_par_iter().filter_map(keep).collect()
    } else {
        (0..total).filter_map(keep).collect()
    };

    let closed = AlgebraicSet::from_sorted(
        Arc::clone(group),
        set.ctx().clone(),
        tuples,
        Provenance::ClosureOfSet,
    );
    let was_algebraic = closed.tuples() == set.tuples();
    Ok(ClosureOutcome { closed, was_algebraic })
}

/// Whether `E` is its own closure.
pub fn is_algebraic(set: &AlgebraicSet) -> Result<bool> {
    if set.is_empty() {
        return Ok(set.ctx().has_constants());
    }
    Ok(closure(set)?.was_algebraic)
}

/// The marked signature of the coordinate group of the singleton `{tuple}`,
/// computed directly in `G`: breadth-first closure of the entries.
///
/// Singleton coordinate groups are exactly `(⟨entries⟩, entries)` as marked
/// groups, so this fingerprint deduplicates singleton closures without
/// building any of the heavier machinery.
pub fn marked_signature_of_tuple(group: &FiniteGroup, tuple: &[usize]) -> Vec<usize> {
    let mut relabel = vec![usize::MAX; group.order()];
    relabel[group.identity()] = 0;
    let mut elements = vec![group.identity()];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head];
        let mut row = Vec::with_capacity(tuple.len());
        for &g in tuple {
            let y = group.mul(x, g);
            if relabel[y] == usize::MAX {
                relabel[y] = elements.len();
                elements.push(y);
            }
            row.push(relabel[y]);
        }
        succ.push(row);
        head += 1;
    }
    let mut sig = vec![elements.len(), tuple.len()];
    for row in &succ {
        sig.extend_from_slice(row);
    }
    sig
}
