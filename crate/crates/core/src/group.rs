//! Finite groups stored as dense multiplication tables.
//!
//! Elements are the indices `0..order`. Every table in this crate has at
//! most [`MAX_ORDER`] elements, so entries fit in a byte and subsets fit in
//! a fixed 256-bit set.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the order of any table.
pub const MAX_ORDER: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty multiplication table")]
    Empty,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("order {0} is not a power of two")]
    NotTwoPower(usize),
    #[error("row {row} has length {len}, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry ({row}, {col}) = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("no identity element")]
    NoIdentity,
    #[error("{kind} {index} is not a permutation of the elements")]
    NotLatin { kind: &'static str, index: usize },
    #[error("associativity fails on ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("subgroup is not central")]
    NotCentral,
    #[error("matching is not an isomorphism: {0}")]
    MatchingNotIso(String),
    #[error("subgroup is not normal")]
    NotNormal,
}

/// Subset of `0..256`, used for subgroups and element sets.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ElemSet([u64; 4]);

impl ElemSet {
    pub const fn new() -> Self {
        ElemSet([0; 4])
    }

    pub fn full(order: usize) -> Self {
        let mut s = ElemSet::new();
        for x in 0..order {
            s.insert(x);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::new();
        for x in iter {
            s.insert(x);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x >> 6, 1u64 << (x & 63));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.0[x >> 6] &= !(1u64 << (x & 63));
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.0[x >> 6] >> (x & 63) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut out = [0u64; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i] & other.0[i];
        }
        ElemSet(out)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut out = [0u64; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i] | other.0[i];
        }
        ElemSet(out)
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut out = [0u64; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i] & !other.0[i];
        }
        ElemSet(out)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        (0..4).all(|i| self.0[i] & !other.0[i] == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).flat_map(move |w| {
            let mut word = self.0[w];
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the ascending element sequences.
    pub fn lex_cmp(&self, other: &ElemSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A subgroup of some parent [`GroupTable`], stored as its element set.
///
/// The parent is not stored; every operation takes the parent table
/// explicitly. Use [`GroupTable::is_subgroup`] to validate sets built by hand.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subgroup {
    set: ElemSet,
}

impl Subgroup {
    pub fn from_set_unchecked(set: ElemSet) -> Self {
        Subgroup { set }
    }

    pub fn set(&self) -> &ElemSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.set.contains(x)
    }

    /// Strictly increasing element indices.
    pub fn elems(&self) -> Vec<usize> {
        self.set.to_vec()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.set.iter()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.set.is_subset(&other.set)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            set: self.set.intersection(&other.set),
        }
    }

    pub fn lex_cmp(&self, other: &Subgroup) -> Ordering {
        self.set.lex_cmp(&other.set)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.set)
    }
}

/// Immutable finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mult: Vec<u8>,
    identity: usize,
    inv: Vec<u8>,
    elem_order: Vec<u16>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

fn check_order(order: usize) -> Result<(), GroupError> {
    if order == 0 {
        return Err(GroupError::Empty);
    }
    if order > MAX_ORDER {
        return Err(GroupError::TooLarge(order));
    }
    if !order.is_power_of_two() {
        return Err(GroupError::NotTwoPower(order));
    }
    Ok(())
}

struct RawTable {
    order: usize,
    mult: Vec<u8>,
    identity: usize,
}

impl RawTable {
    fn new(order: usize, flat: &[usize]) -> Result<RawTable, GroupError> {
        let mut mult = Vec::with_capacity(order * order);
        for (k, &v) in flat.iter().enumerate() {
            if v >= order {
                return Err(GroupError::OutOfRange {
                    row: k / order,
                    col: k % order,
                    value: v,
                });
            }
            mult.push(v as u8);
        }
        let identity = (0..order)
            .find(|&e| {
                (0..order).all(|x| mult[e * order + x] as usize == x && mult[x * order + e] as usize == x)
            })
            .ok_or(GroupError::NoIdentity)?;
        Ok(RawTable {
            order,
            mult,
            identity,
        })
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    fn check_latin(&self) -> Result<(), GroupError> {
        let n = self.order;
        for r in 0..n {
            let mut seen = ElemSet::new();
            for c in 0..n {
                if !seen.insert(self.mul(r, c)) {
                    return Err(GroupError::NotLatin { kind: "row", index: r });
                }
            }
        }
        for c in 0..n {
            let mut seen = ElemSet::new();
            for r in 0..n {
                if !seen.insert(self.mul(r, c)) {
                    return Err(GroupError::NotLatin { kind: "column", index: c });
                }
            }
        }
        Ok(())
    }

    fn check_associative_full(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    // The right factors c with (ab)c = a(bc) for all a, b form a set closed
    // under products, so generators suffice once they generate everything
    // by right multiplication.
    fn check_associative_on(&self, gens: &[usize]) -> Result<(), GroupError> {
        let n = self.order;
        for &c in gens {
            if c >= n {
                return Err(GroupError::BadParameters(format!("generator {c} out of range")));
            }
            for a in 0..n {
                for b in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let mut set = ElemSet::from_iter([self.identity]);
        let mut queue = vec![self.identity];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        if queue.len() != n {
            return Err(GroupError::BadParameters(
                "generators do not generate the table".into(),
            ));
        }
        Ok(())
    }

    /// Only valid once the table is known to be a group.
    fn finish(self) -> GroupTable {
        let order = self.order;
        let mut inv = vec![0u8; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| self.mul(a, b) == self.identity)
                .expect("group element has an inverse");
            inv[a] = b as u8;
        }
        let mut elem_order = vec![0u16; order];
        for (a, slot) in elem_order.iter_mut().enumerate() {
            let mut k = 1u16;
            let mut p = a;
            while p != self.identity {
                p = self.mul(p, a);
                k += 1;
            }
            *slot = k;
        }
        GroupTable {
            order,
            mult: self.mult,
            identity: self.identity,
            inv,
            elem_order,
        }
    }
}

impl GroupTable {
    /// Validates a square table: entry range, identity, associativity over
    /// all triples, then the Latin property.
    pub fn verify_table(rows: &[Vec<usize>]) -> Result<GroupTable, GroupError> {
        let order = rows.len();
        check_order(order)?;
        let mut flat = Vec::with_capacity(order * order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::NotSquare {
                    row: r,
                    len: row.len(),
                    order,
                });
            }
            flat.extend_from_slice(row);
        }
        let raw = RawTable::new(order, &flat)?;
        raw.check_associative_full()?;
        raw.check_latin()?;
        Ok(raw.finish())
    }

    /// Builds a table from a normal-form product rule. Instead of the cubic
    /// associativity scan, associativity is checked with the right factor
    /// ranging over `gens`, together with the requirement that `gens`
    /// generate the whole table. Both conditions together imply full
    /// associativity.
    pub fn from_rule<F>(order: usize, gens: &[usize], rule: F) -> Result<GroupTable, GroupError>
    where
        F: Fn(usize, usize) -> usize,
    {
        check_order(order)?;
        let mut flat = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                flat.push(rule(a, b));
            }
        }
        let raw = RawTable::new(order, &flat)?;
        raw.check_latin()?;
        raw.check_associative_on(gens)?;
        Ok(raw.finish())
    }

    /// Re-runs the cubic associativity scan on an existing table.
    pub fn check_associative_full(&self) -> Result<(), GroupError> {
        RawTable {
            order: self.order,
            mult: self.mult.clone(),
            identity: self.identity,
        }
        .check_associative_full()
    }

    /// Builds a table already known to be a group (products, quotients,
    /// tables derived from verified ones). Only range and identity are checked.
    pub(crate) fn from_trusted(order: usize, flat: &[usize]) -> GroupTable {
        RawTable::new(order, flat)
            .expect("trusted table is well formed")
            .finish()
    }

    pub fn trivial() -> GroupTable {
        GroupTable {
            order: 1,
            mult: vec![0],
            identity: 0,
            inv: vec![0],
            elem_order: vec![1],
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// `log2` of the order.
    pub fn log_order(&self) -> u32 {
        self.order.trailing_zeros()
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    #[inline]
    pub fn elem_order(&self, a: usize) -> usize {
        self.elem_order[a] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let ord = self.elem_order(a) as i64;
        let k = k.rem_euclid(ord);
        let mut r = self.identity;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[a, b] = a b a^-1 b^-1`.
    #[inline]
    pub fn comm(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn mult_flat(&self) -> Vec<usize> {
        self.mult.iter().map(|&v| v as usize).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> usize {
        self.elem_order.iter().copied().max().unwrap_or(1) as usize
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            set: ElemSet::full(self.order),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            set: ElemSet::from_iter([self.identity]),
        }
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated<I: IntoIterator<Item = usize>>(&self, gens: I) -> Subgroup {
        let gens: Vec<usize> = gens.into_iter().collect();
        self.closure_from(ElemSet::from_iter([self.identity]), &gens)
    }

    /// Smallest subgroup containing `base` and `extra`.
    pub fn join(&self, base: &Subgroup, extra: &[usize]) -> Subgroup {
        let mut gens: Vec<usize> = extra.to_vec();
        gens.extend(base.iter());
        self.closure_from(base.set, &gens)
    }

    pub fn join_subgroups(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        if a.is_subgroup_of(b) {
            return *b;
        }
        if b.is_subgroup_of(a) {
            return *a;
        }
        let gens: Vec<usize> = a.iter().chain(b.iter()).collect();
        self.closure_from(a.set.union(&b.set), &gens)
    }

    fn closure_from(&self, start: ElemSet, gens: &[usize]) -> Subgroup {
        let mut set = start;
        set.insert(self.identity);
        let mut queue: Vec<usize> = set.to_vec();
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        Subgroup { set }
    }

    /// Validates an element set as a subgroup (contains the identity and is
    /// closed under multiplication).
    pub fn is_subgroup(&self, set: &ElemSet) -> bool {
        if !set.contains(self.identity) {
            return false;
        }
        let elems = set.to_vec();
        elems
            .iter()
            .all(|&a| elems.iter().all(|&b| set.contains(self.mul(a, b))))
    }

    pub fn subgroup_from_elems(&self, elems: &[usize]) -> Option<Subgroup> {
        let set = ElemSet::from_iter(elems.iter().copied());
        if elems.iter().any(|&x| x >= self.order) || !self.is_subgroup(&set) {
            return None;
        }
        Some(Subgroup { set })
    }

    pub fn conjugate(&self, g: usize, s: &Subgroup) -> Subgroup {
        let ginv = self.inv(g);
        let mut set = ElemSet::new();
        for x in s.iter() {
            set.insert(self.mul(self.mul(g, x), ginv));
        }
        Subgroup { set }
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        (0..self.order).all(|g| s.iter().all(|x| s.contains(self.conj(g, x))))
    }

    /// Size of the product set `AB`.
    pub fn product_set_size(&self, a: &Subgroup, b: &Subgroup) -> usize {
        a.len() * b.len() / a.intersection(b).len()
    }

    /// The subgroup as a standalone table, together with the embedding
    /// (new index -> parent index). Elements keep their relative order.
    pub fn subgroup_table(&self, s: &Subgroup) -> (GroupTable, Vec<usize>) {
        let emb = s.elems();
        let mut pos = vec![usize::MAX; self.order];
        for (i, &x) in emb.iter().enumerate() {
            pos[x] = i;
        }
        let n = emb.len();
        let mut mult = Vec::with_capacity(n * n);
        for &a in &emb {
            for &b in &emb {
                mult.push(pos[self.mul(a, b)] as u8);
            }
        }
        let inv = emb.iter().map(|&a| pos[self.inv(a)] as u8).collect();
        let elem_order = emb.iter().map(|&a| self.elem_order[a]).collect();
        let table = GroupTable {
            order: n,
            mult,
            identity: pos[self.identity],
            inv,
            elem_order,
        };
        (table, emb)
    }

    /// Applies a relabeling: element `x` of `self` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> GroupTable {
        let n = self.order;
        let mut back = vec![0usize; n];
        for (x, &p) in perm.iter().enumerate() {
            back[p] = x;
        }
        let mut mult = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b] = perm[self.mul(back[a], back[b])] as u8;
            }
        }
        let inv = (0..n).map(|a| perm[self.inv(back[a])] as u8).collect();
        let elem_order = (0..n).map(|a| self.elem_order[back[a]]).collect();
        GroupTable {
            order: n,
            mult,
            identity: perm[self.identity],
            inv,
            elem_order,
        }
    }
}

/// On-disk form of a group: a versioned JSON record.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupFile {
    pub version: u32,
    pub order: usize,
    /// Row-major multiplication table.
    pub mult: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub const GROUP_FILE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum GroupFileError {
    #[error("unsupported group file version {0}")]
    Version(u32),
    #[error("table length {len} does not match order {order}")]
    Shape { len: usize, order: usize },
    #[error("labels length {0} does not match order")]
    Labels(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GroupFile {
    pub fn from_table(g: &GroupTable, labels: Option<Vec<String>>) -> GroupFile {
        GroupFile {
            version: GROUP_FILE_VERSION,
            order: g.order(),
            mult: g.mult_flat(),
            labels,
        }
    }

    pub fn to_table(&self) -> Result<GroupTable, GroupFileError> {
        if self.version != GROUP_FILE_VERSION {
            return Err(GroupFileError::Version(self.version));
        }
        if self.mult.len() != self.order * self.order {
            return Err(GroupFileError::Shape {
                len: self.mult.len(),
                order: self.order,
            });
        }
        if let Some(l) = &self.labels {
            if l.len() != self.order {
                return Err(GroupFileError::Labels(l.len()));
            }
        }
        let rows: Vec<Vec<usize>> = self.mult.chunks(self.order.max(1)).map(|c| c.to_vec()).collect();
        Ok(GroupTable::verify_table(&rows)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("group file serializes")
    }

    pub fn from_json(text: &str) -> Result<GroupFile, GroupFileError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_rows(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn trivial_table() {
        let g = GroupTable::verify_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.elem_order(0), 1);
    }

    #[test]
    fn klein_four_by_xor() {
        let rows: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        let g = GroupTable::verify_table(&rows).unwrap();
        assert!((1..4).all(|x| g.elem_order(x) == 2));
        assert!(g.is_abelian());
    }

    #[test]
    fn corrupted_c4_is_not_associative() {
        let mut rows = cyclic_rows(4);
        rows[2][2] = 1;
        assert!(matches!(
            GroupTable::verify_table(&rows),
            Err(GroupError::NotAssociative { .. })
        ));
    }

    #[test]
    fn latin_failure_named() {
        // associative but not a group: a null semigroup with an identity adjoined
        let rows = vec![vec![0, 1, 2, 3], vec![1, 2, 2, 2], vec![2, 2, 2, 2], vec![3, 2, 2, 2]];
        assert!(matches!(
            GroupTable::verify_table(&rows),
            Err(GroupError::NotLatin { kind: "row", index: 1 })
        ));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(GroupTable::verify_table(&[]), Err(GroupError::Empty));
        assert_eq!(
            GroupTable::verify_table(&cyclic_rows(3)),
            Err(GroupError::NotTwoPower(3))
        );
        let rows = vec![vec![0, 1], vec![1]];
        assert!(matches!(
            GroupTable::verify_table(&rows),
            Err(GroupError::NotSquare { row: 1, .. })
        ));
        let rows = vec![vec![0, 5], vec![1, 0]];
        assert!(matches!(
            GroupTable::verify_table(&rows),
            Err(GroupError::OutOfRange { .. })
        ));
        let rows = vec![vec![1, 1], vec![0, 0]];
        assert_eq!(GroupTable::verify_table(&rows), Err(GroupError::NoIdentity));
    }

    #[test]
    fn generated_subgroups() {
        let g = GroupTable::verify_table(&cyclic_rows(8)).unwrap();
        assert_eq!(g.generated([2]).len(), 4);
        assert_eq!(g.generated([]).elems(), vec![0]);
        assert_eq!(g.generated([3]).len(), 8);
    }

    #[test]
    fn group_file_round_trip() {
        let g = GroupTable::verify_table(&cyclic_rows(8)).unwrap();
        let f = GroupFile::from_table(&g, None);
        let back = GroupFile::from_json(&f.to_json()).unwrap().to_table().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn lex_order_of_sets() {
        let a = ElemSet::from_iter([0, 1, 5]);
        let b = ElemSet::from_iter([0, 2, 3]);
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
    }
}
