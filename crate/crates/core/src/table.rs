//! Finite multiplication tables shared by groups and loops.
//!
//! Every concrete structure in the crate is a square table over `0..order`
//! with element `0` as the identity. [`Magma`] is the minimal read interface
//! the checkers and searches are written against.

use thiserror::Error;

/// A finite binary operation on `0..order`.
pub trait Magma {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
}

impl<M: Magma + ?Sized> Magma for &M {
    fn order(&self) -> usize {
        (**self).order()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        (**self).mul(a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    RaggedRow { row: usize, len: usize, order: usize },
    #[error("entry ({row},{col}) = {value} is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("row {0} is not a permutation")]
    RowNotPermutation(usize),
    #[error("column {0} is not a permutation")]
    ColumnNotPermutation(usize),
    #[error("element 0 is not a two-sided identity (fails at {0})")]
    IdentityNotZero(usize),
    #[error("product is not associative at ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} is not a valid generator index")]
    BadGenerator(usize),
    #[error("generators do not generate the whole table ({reached} of {order} reached)")]
    NotGenerating { reached: usize, order: usize },
}

/// An unvalidated square table. Used for inputs that may fail the loop axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    order: usize,
    product: Vec<u32>,
}

impl RawTable {
    /// Builds a table from rows, checking only shape and range.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, TableError> {
        let order = rows.len();
        if order == 0 {
            return Err(TableError::Empty);
        }
        let mut product = Vec::with_capacity(order * order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(TableError::RaggedRow {
                    row: r,
                    len: row.len(),
                    order,
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(TableError::EntryOutOfRange {
                        row: r,
                        col: c,
                        value: v,
                        order,
                    });
                }
                product.push(v as u32);
            }
        }
        Ok(Self { order, product })
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        rows_of(self)
    }
}

impl Magma for RawTable {
    fn order(&self) -> usize {
        self.order
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b] as usize
    }
}

pub(crate) fn rows_of<M: Magma>(m: &M) -> Vec<Vec<usize>> {
    let n = m.order();
    (0..n).map(|a| (0..n).map(|b| m.mul(a, b)).collect()).collect()
}

/// Checks that every row and column is a permutation, returning the first
/// offending row or column.
pub(crate) fn check_latin<M: Magma>(m: &M) -> Result<(), TableError> {
    let n = m.order();
    let mut seen = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let v = m.mul(a, b);
            if seen[v] == a {
                return Err(TableError::RowNotPermutation(a));
            }
            seen[v] = a;
        }
    }
    seen.iter_mut().for_each(|s| *s = usize::MAX);
    for b in 0..n {
        for a in 0..n {
            let v = m.mul(a, b);
            if seen[v] == b {
                return Err(TableError::ColumnNotPermutation(b));
            }
            seen[v] = b;
        }
    }
    Ok(())
}

pub(crate) fn check_identity_zero<M: Magma>(m: &M) -> Result<(), TableError> {
    for x in 0..m.order() {
        if m.mul(0, x) != x || m.mul(x, 0) != x {
            return Err(TableError::IdentityNotZero(x));
        }
    }
    Ok(())
}

/// Lexicographically smallest non-associating triple, if any.
pub(crate) fn associativity_witness<M: Magma>(m: &M) -> Option<(usize, usize, usize)> {
    let n = m.order();
    for x in 0..n {
        for y in 0..n {
            let xy = m.mul(x, y);
            for z in 0..n {
                if m.mul(xy, z) != m.mul(x, m.mul(y, z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// Quasigroup: every row and column of the table is a permutation.
pub fn is_quasigroup<M: Magma>(m: &M) -> bool {
    m.order() > 0 && check_latin(m).is_ok()
}

/// Loop: quasigroup with a two-sided identity (not necessarily element 0).
pub fn is_loop<M: Magma>(m: &M) -> bool {
    is_quasigroup(m) && two_sided_identity(m).is_some()
}

pub fn two_sided_identity<M: Magma>(m: &M) -> Option<usize> {
    let n = m.order();
    (0..n).find(|&e| (0..n).all(|x| m.mul(e, x) == x && m.mul(x, e) == x))
}

pub fn is_commutative<M: Magma>(m: &M) -> bool {
    let n = m.order();
    (0..n).all(|a| (a + 1..n).all(|b| m.mul(a, b) == m.mul(b, a)))
}

/// Order of `x` under left powers `x, x·x, x·(x·x), …`; `None` if the
/// sequence never reaches the identity `0` within `order` steps.
pub fn power_order<M: Magma>(m: &M, x: usize) -> Option<usize> {
    let mut p = x;
    for k in 1..=m.order() {
        if p == 0 {
            return Some(k);
        }
        p = m.mul(x, p);
    }
    None
}

/// A closure computation that records how each element was first reached.
///
/// `steps[k] = (y, a, b)` means `y = a·b` with `a`, `b` reached earlier.
/// Seeds are recorded with `a = b = usize::MAX`.
#[derive(Debug, Clone)]
pub(crate) struct ClosureTrace {
    pub members: Vec<usize>,
    pub steps: Vec<(usize, usize, usize)>,
}

pub(crate) const SEED: usize = usize::MAX;

/// Smallest subset containing `seeds` and `0` closed under the product, with
/// the discovery trace. Discovery order is deterministic.
pub(crate) fn closure_trace<M: Magma>(m: &M, seeds: &[usize]) -> ClosureTrace {
    let n = m.order();
    let mut inside = vec![false; n];
    let mut members = Vec::new();
    let mut steps = Vec::new();
    inside[0] = true;
    members.push(0);
    steps.push((0, SEED, SEED));
    for &s in seeds {
        if !inside[s] {
            inside[s] = true;
            members.push(s);
            steps.push((s, SEED, SEED));
        }
    }
    let mut i = 0;
    while i < members.len() {
        // pair the new element with everything before it, both sides
        let a = members[i];
        for j in 0..=i {
            let b = members[j];
            for (p, q) in [(a, b), (b, a)] {
                let y = m.mul(p, q);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    steps.push((y, p, q));
                }
            }
        }
        i += 1;
    }
    ClosureTrace { members, steps }
}

/// Greedy generating set: repeatedly adds the smallest element outside the
/// closure of the elements chosen so far.
pub fn greedy_generators<M: Magma>(m: &M) -> Vec<usize> {
    let n = m.order();
    let mut gens = Vec::new();
    let mut inside = vec![false; n];
    inside[0] = true;
    for x in 1..n {
        if !inside[x] {
            gens.push(x);
            for y in closure_trace(m, &gens).members {
                inside[y] = true;
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> RawTable {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        RawTable::from_rows(&rows).unwrap()
    }

    #[test]
    fn cyclic_tables_are_loops() {
        for n in 1..8 {
            let t = cyclic(n);
            assert!(is_loop(&t));
            assert_eq!(associativity_witness(&t), None);
        }
    }

    #[test]
    fn repeated_row_is_not_quasigroup() {
        let t = RawTable::from_rows(&[vec![0, 1], vec![0, 1]]).unwrap();
        assert!(!is_quasigroup(&t));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = RawTable::from_rows(&[vec![0, 1], vec![1]]).unwrap_err();
        assert!(matches!(err, TableError::RaggedRow { row: 1, .. }));
    }

    #[test]
    fn greedy_generators_of_cyclic_group() {
        assert_eq!(greedy_generators(&cyclic(6)), vec![1]);
        assert_eq!(greedy_generators(&cyclic(1)), Vec::<usize>::new());
    }

    #[test]
    fn power_orders() {
        let t = cyclic(6);
        let orders: Vec<_> = (0..6).map(|x| power_order(&t, x).unwrap()).collect();
        assert_eq!(orders, vec![1, 6, 3, 2, 3, 6]);
    }
}
