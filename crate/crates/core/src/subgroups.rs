//! Subgroup lattices and conjugacy classes of subgroups.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::group::{ElemSet, GroupTable, Subgroup};
use crate::invariants::normalizer;

pub const DEFAULT_BUDGET: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("more than {0} subgroups")]
    BudgetExceeded(usize),
}

#[derive(Debug, Clone)]
pub struct SubgroupClass {
    /// Lexicographically least member.
    pub representative: Subgroup,
    /// Members in lexicographic order.
    pub members: Vec<Subgroup>,
}

#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    /// Subgroups of each order, in lexicographic order.
    pub by_order: BTreeMap<usize, Vec<Subgroup>>,
    /// Ordered by subgroup order, then representative.
    pub classes: Vec<SubgroupClass>,
}

impl SubgroupLattice {
    pub fn count(&self) -> usize {
        self.by_order.values().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subgroup> {
        self.by_order.values().flatten()
    }
}

/// Every subgroup, built layer by layer: each subgroup of order `2^(k+1)`
/// is `<H, g>` for some `H` of order `2^k` and `g` in `N(H) \ H` with
/// `g^2` in `H`.
pub fn all_subgroups(g: &GroupTable, budget: usize) -> Result<SubgroupLattice, SubgroupError> {
    let mut by_order = BTreeMap::new();
    let mut layer = vec![g.trivial_subgroup()];
    let mut total = 1;
    while !layer.is_empty() {
        let size = layer[0].len();
        let mut next: HashSet<ElemSet> = HashSet::new();
        if size < g.order() {
            for h in &layer {
                let n = normalizer(g, h);
                let mut covered = *h.set();
                for x in n.iter() {
                    if covered.contains(x) || !h.contains(g.mul(x, x)) {
                        continue;
                    }
                    let mut set = *h.set();
                    for y in h.iter() {
                        set.insert(g.mul(x, y));
                    }
                    // the other elements of the coset give the same subgroup
                    covered = covered.union(&set);
                    if next.insert(set) {
                        total += 1;
                        if total > budget {
                            return Err(SubgroupError::BudgetExceeded(budget));
                        }
                    }
                }
            }
        }
        layer.sort_by(|a, b| a.lex_cmp(b));
        by_order.insert(size, layer);
        let mut v: Vec<Subgroup> = next.into_iter().map(Subgroup::from_set_unchecked).collect();
        v.sort_by(|a, b| a.lex_cmp(b));
        layer = v;
    }
    let classes = subgroup_conjugacy_classes(g, &by_order);
    Ok(SubgroupLattice { by_order, classes })
}

pub fn subgroup_conjugacy_classes(g: &GroupTable, by_order: &BTreeMap<usize, Vec<Subgroup>>) -> Vec<SubgroupClass> {
    let mut classes = Vec::new();
    for layer in by_order.values() {
        let mut assigned: HashMap<ElemSet, usize> = HashMap::new();
        for s in layer {
            if assigned.contains_key(s.set()) {
                continue;
            }
            let mut members: Vec<Subgroup> = Vec::new();
            let mut seen = HashSet::new();
            for x in g.elements() {
                let c = g.conjugate(x, s);
                if seen.insert(*c.set()) {
                    members.push(c);
                }
            }
            members.sort_by(|a, b| a.lex_cmp(b));
            for m in &members {
                assigned.insert(*m.set(), classes.len());
            }
            classes.push(SubgroupClass {
                representative: members[0],
                members,
            });
        }
    }
    classes
}
