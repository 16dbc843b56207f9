//! Finite groups given by full multiplication tables, and their subgroups.
//!
//! Elements are dense indices `0..order`. Construction through
//! [`FiniteGroup::from_table`] validates every group axiom exhaustively and
//! reports the first violation with witness indices. Tables assembled by the
//! crate itself (direct products, coordinate groups) are associative by
//! construction and may skip the cubic associativity sweep above a size
//! threshold; identity and inverses are always recomputed and checked.

mod builders;
mod series;

pub use builders::{build_group, GroupSpec};
pub use series::{lower_central_series, nilpotency_class};

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::Result;

/// Orders up to this bound always get the full associativity sweep, even for
/// tables that are associative by construction.
const FULL_VALIDATION_LIMIT: usize = 256;

/// A finite group presented by its multiplication table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    names: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}

impl FiniteGroup {
    /// Builds a group from a square table, checking every axiom.
    ///
    /// `names` are optional display labels; indices are the real element
    /// identities everywhere in the crate.
    pub fn from_table(rows: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let flat = Self::flatten(rows)?;
        Self::finalize(flat.0, flat.1, names, true)
    }

    /// Builds a group from a table that is associative by construction.
    ///
    /// Identity and inverse axioms are still verified; the associativity
    /// sweep runs only below [`FULL_VALIDATION_LIMIT`].
    pub(crate) fn from_table_trusted(
        order: usize,
        table: Vec<usize>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let check_assoc = order <= FULL_VALIDATION_LIMIT;
        Self::finalize(order, table, names, check_assoc)
    }

    fn flatten(rows: Vec<Vec<usize>>) -> Result<(usize, Vec<usize>)> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::EmptyGroup);
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::BadRowLength {
                    row: i,
                    len: row.len(),
                    order,
                });
            }
            table.extend_from_slice(row);
        }
        Ok((order, table))
    }

    fn finalize(
        order: usize,
        table: Vec<usize>,
        names: Option<Vec<String>>,
        check_assoc: bool,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyGroup);
        }
        debug_assert_eq!(table.len(), order * order);
        for (idx, &value) in table.iter().enumerate() {
            if value >= order {
                return Err(Error::EntryOutOfRange {
                    row: idx / order,
                    col: idx % order,
                    value,
                    order,
                });
            }
        }

        let id = |a: usize, b: usize| table[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| id(e, x) == x && id(x, e) == x))
            .ok_or(Error::NoIdentity)?;

        let mut inverse = Vec::with_capacity(order);
        for x in 0..order {
            let mut found = None;
            for y in 0..order {
                if id(x, y) == identity && id(y, x) == identity {
                    match found {
                        None => found = Some(y),
                        Some(first) => {
                            return Err(Error::AmbiguousInverse {
                                element: x,
                                first,
                                second: y,
                            })
                        }
                    }
                }
            }
            inverse.push(found.ok_or(Error::NoInverse { element: x })?);
        }

        if check_assoc {
            for a in 0..order {
                for b in 0..order {
                    let ab = id(a, b);
                    for c in 0..order {
                        if id(ab, c) != id(a, id(b, c)) {
                            return Err(Error::NotAssociative { a, b, c });
                        }
                    }
                }
            }
        }

        let names = match names {
            Some(n) => {
                if n.len() != order {
                    return Err(Error::BadNameCount {
                        order,
                        got: n.len(),
                    });
                }
                n
            }
            None => (0..order).map(|i| i.to_string()).collect(),
        };

        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverse,
            names,
        })
    }

    /// Parses the text table format:
    ///
    /// ```text
    /// order N
    /// <N rows of N element indices>
    /// names <N labels>     (optional)
    /// ```
    ///
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line_no, header) = lines.next().ok_or(Error::TableFormat {
            line: 0,
            msg: "empty file".into(),
        })?;
        let order: usize = header
            .strip_prefix("order")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::TableFormat {
                line: line_no,
                msg: format!("expected `order N`, got `{header}`"),
            })?;

        let mut rows = Vec::with_capacity(order);
        for _ in 0..order {
            let (line_no, line) = lines.next().ok_or_else(|| Error::TableFormat {
                line: 0,
                msg: format!("expected {order} table rows"),
            })?;
            let row: Vec<usize> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::TableFormat {
                        line: line_no,
                        msg: format!("bad element index `{tok}`"),
                    })
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }

        let mut names = None;
        if let Some((line_no, line)) = lines.next() {
            let rest = line.strip_prefix("names").ok_or_else(|| Error::TableFormat {
                line: line_no,
                msg: format!("unexpected trailing line `{line}`"),
            })?;
            let labels: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
            names = Some(labels);
            if let Some((line_no, line)) = lines.next() {
                return Err(Error::TableFormat {
                    line: line_no,
                    msg: format!("unexpected trailing line `{line}`"),
                });
            }
        }

        if rows.len() != order {
            return Err(Error::BadRowCount {
                rows: rows.len(),
                order,
            });
        }
        Self::from_table(rows, names)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `a^k` for any integer `k`, by square and multiply.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let (mut base, mut k) = if k < 0 {
            (self.inv(a), k.unsigned_abs())
        } else {
            (a, k as u64)
        };
        let mut acc = self.identity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let x = self.mul(self.inv(a), self.inv(b));
        let y = self.mul(a, b);
        self.mul(x, y)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn name(&self, element: usize) -> &str {
        &self.names[element]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub(crate) fn check_element(&self, value: usize) -> Result<()> {
        if value < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                value,
                order: self.order,
            })
        }
    }

    /// Structural equality fast path: pointer identity, then table compare.
    pub(crate) fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
        std::ptr::eq(a, b) || (a.order == b.order && a.table == b.table)
    }
}

/// A subgroup of a [`FiniteGroup`], kept as a sorted element list together
/// with the generators it was built from.
///
/// Equality is element-set equality in the same parent; the generating set is
/// bookkeeping only.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
            && (Arc::ptr_eq(&self.parent, &other.parent)
                || FiniteGroup::same_group(&self.parent, &other.parent))
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Closes `generators` under the group operation.
    ///
    /// Breadth-first from the identity, multiplying on the right by the
    /// generators in the given order; in a finite group this reaches inverses
    /// as well.
    pub fn generate(parent: Arc<FiniteGroup>, generators: &[usize]) -> Result<Self> {
        for &g in generators {
            parent.check_element(g)?;
        }
        let elements = closure_elements(&parent, std::iter::once(parent.identity()), generators);
        Ok(Subgroup {
            parent,
            elements,
            generators: generators.to_vec(),
        })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, element: usize) -> bool {
        self.elements.binary_search(&element).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    /// Verifies closure under product and inverse; used by tests.
    pub fn verify_closed(&self) -> bool {
        self.elements.iter().all(|&a| {
            self.contains(self.parent.inv(a))
                && self
                    .elements
                    .iter()
                    .all(|&b| self.contains(self.parent.mul(a, b)))
        })
    }
}

/// Spec-level entry point: the subgroup generated by `generators` in `parent`.
pub fn subgroup_closure(parent: &Arc<FiniteGroup>, generators: &[usize]) -> Result<Subgroup> {
    Subgroup::generate(Arc::clone(parent), generators)
}

/// Sorted closure of `seed` under right multiplication by `generators`.
pub(crate) fn closure_elements(
    group: &FiniteGroup,
    seed: impl IntoIterator<Item = usize>,
    generators: &[usize],
) -> Vec<usize> {
    let mut member = vec![false; group.order()];
    let mut queue: Vec<usize> = Vec::new();
    for s in seed {
        if !member[s] {
            member[s] = true;
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &g in generators {
            let y = group.mul(x, g);
            if !member[y] {
                member[y] = true;
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    queue
}
