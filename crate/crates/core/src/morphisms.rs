//! Fingerprints, isomorphism testing and automorphism groups.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{ElemSet, GroupTable};
use crate::invariants::{self, frattini};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    /// `(element order, count)` pairs.
    pub element_orders: Vec<(usize, usize)>,
    pub center_size: usize,
    pub derived_series_sizes: Vec<usize>,
    pub omega_sizes: Vec<usize>,
    pub agemo_sizes: Vec<usize>,
    /// `(class size, number of classes)` pairs.
    pub class_sizes: Vec<(usize, usize)>,
    /// For each class `C`: `(|C|, order of its elements, #{x : x^2 in C}),`
    /// sorted.
    pub power_profile: Vec<(usize, usize, usize)>,
}

/// Bijection `G -> H`, as the image of each element of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutGroup {
    pub order: u64,
    pub generators: Vec<Vec<usize>>,
    pub is_2_group: bool,
    /// All automorphisms, kept when there are at most [`AUT_STORE_LIMIT`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<usize>>>,
}

pub const AUT_STORE_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("group rank {0} exceeds 3")]
    RankTooHigh(u32),
}

/// Conjugacy class index of every element, classes numbered by least
/// member.
pub fn conjugacy_classes(g: &GroupTable) -> (Vec<usize>, Vec<usize>) {
    let n = g.order();
    let mut class = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for x in 0..n {
        if class[x] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut seen = ElemSet::new();
        for y in 0..n {
            let c = g.conj(y, x);
            if seen.insert(c) {
                class[c] = id;
            }
        }
        sizes.push(seen.len());
    }
    (class, sizes)
}

fn tally<T: Ord + Clone>(mut v: Vec<T>) -> Vec<(T, usize)> {
    v.sort();
    let mut out: Vec<(T, usize)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

pub fn fingerprint(g: &GroupTable) -> Fingerprint {
    let inv = invariants::structural_invariants(g);
    let (class, sizes) = conjugacy_classes(g);
    let mut rep = vec![0usize; sizes.len()];
    for x in g.elements().rev() {
        rep[class[x]] = x;
    }
    let mut sq_hits = vec![0usize; sizes.len()];
    for x in g.elements() {
        sq_hits[class[g.mul(x, x)]] += 1;
    }
    let mut power_profile: Vec<(usize, usize, usize)> = (0..sizes.len())
        .map(|c| (sizes[c], g.elem_order(rep[c]), sq_hits[c]))
        .collect();
    power_profile.sort_unstable();
    Fingerprint {
        order: g.order(),
        element_orders: tally(g.elements().map(|x| g.elem_order(x)).collect()),
        center_size: inv.center_size,
        derived_series_sizes: inv.derived_series_sizes,
        omega_sizes: inv.omega_sizes,
        agemo_sizes: inv.agemo_sizes,
        class_sizes: tally(sizes),
        power_profile,
    }
}

/// Generating tuple of length `rank(G)`: elements taken by descending order
/// then index, each outside the span of the previous ones and `Phi(G)`.
pub fn minimal_generators(g: &GroupTable) -> Vec<usize> {
    let mut elems: Vec<usize> = g.elements().collect();
    elems.sort_by_key(|&x| (std::cmp::Reverse(g.elem_order(x)), x));
    let mut span = frattini(g);
    let mut gens = Vec::new();
    for x in elems {
        if span.len() == g.order() {
            break;
        }
        if !span.contains(x) {
            gens.push(x);
            span = g.join(&span, &[x]);
        }
    }
    gens
}

/// Per-element data that any isomorphism must preserve.
pub fn local_signature(g: &GroupTable) -> Vec<(usize, usize, usize)> {
    let (class, sizes) = conjugacy_classes(g);
    g.elements()
        .map(|x| (g.elem_order(x), sizes[class[x]], sizes[class[g.mul(x, x)]]))
        .collect()
}

/// Backtracking over images of `gens`. `allowed[k]` lists the candidate
/// images of `gens[k]`. `visit` receives each full isomorphism `G -> H` and
/// returns false to stop.
fn search_maps<F>(g: &GroupTable, h: &GroupTable, gens: &[usize], allowed: &[Vec<usize>], visit: &mut F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    let mut imgs = vec![0usize; gens.len()];
    let mut map = vec![usize::MAX; g.order()];
    descend(g, h, gens, allowed, 0, &mut imgs, &mut map, visit)
}

#[allow(clippy::too_many_arguments)]
fn descend<F>(
    g: &GroupTable,
    h: &GroupTable,
    gens: &[usize],
    allowed: &[Vec<usize>],
    k: usize,
    imgs: &mut Vec<usize>,
    map: &mut Vec<usize>,
    visit: &mut F,
) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if k == gens.len() {
        return visit(map);
    }
    for &c in &allowed[k] {
        imgs[k] = c;
        if extend_map(g, h, &gens[..=k], &imgs[..=k], map) && !descend(g, h, gens, allowed, k + 1, imgs, map, visit) {
            return false;
        }
    }
    true
}

/// Defines `map` on `<gens>` by `map(x s) = map(x) img(s)`. Fails on a
/// conflict or a collision; success means `map` is an injective
/// homomorphism on `<gens>`.
fn extend_map(g: &GroupTable, h: &GroupTable, gens: &[usize], imgs: &[usize], map: &mut [usize]) -> bool {
    map.iter_mut().for_each(|m| *m = usize::MAX);
    let mut used = ElemSet::new();
    map[g.identity()] = h.identity();
    used.insert(h.identity());
    let mut queue = vec![g.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let im = h.mul(map[x], t);
            if map[y] == usize::MAX {
                if !used.insert(im) {
                    return false;
                }
                map[y] = im;
                queue.push(y);
            } else if map[y] != im {
                return false;
            }
        }
    }
    true
}

/// Checks a bijection against the full multiplication tables.
pub fn verify_witness(g: &GroupTable, h: &GroupTable, map: &[usize]) -> bool {
    if g.order() != h.order() || map.len() != g.order() {
        return false;
    }
    let mut seen = ElemSet::new();
    if !map.iter().all(|&y| y < h.order() && seen.insert(y)) {
        return false;
    }
    g.elements()
        .all(|a| g.elements().all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b])))
}

/// An isomorphism `G -> H`, if one exists.
pub fn isomorphic(g: &GroupTable, h: &GroupTable) -> Option<IsoWitness> {
    if g.order() != h.order() {
        return None;
    }
    if fingerprint(g) != fingerprint(h) {
        return None;
    }
    isomorphic_unfiltered(g, h)
}

/// Isomorphism search without the fingerprint filter, for callers that
/// already compared fingerprints.
pub fn isomorphic_unfiltered(g: &GroupTable, h: &GroupTable) -> Option<IsoWitness> {
    if g.order() != h.order() {
        return None;
    }
    let gens = minimal_generators(g);
    let sg = local_signature(g);
    let sh = local_signature(h);
    let allowed: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| h.elements().filter(|&y| sh[y] == sg[x]).collect())
        .collect();
    let mut found = None;
    search_maps(g, h, &gens, &allowed, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    let map = found?;
    assert!(verify_witness(g, h, &map), "isomorphism search returned a non-isomorphism");
    Some(IsoWitness { map })
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // apply q, then p
    q.iter().map(|&x| p[x]).collect()
}

/// The full automorphism group by generator-image search.
pub fn automorphisms(g: &GroupTable) -> Result<AutGroup, MorphismError> {
    let gens = minimal_generators(g);
    if gens.len() > 3 {
        return Err(MorphismError::RankTooHigh(gens.len() as u32));
    }
    let sig = local_signature(g);
    let allowed: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| g.elements().filter(|&y| sig[y] == sig[x]).collect())
        .collect();
    let mut order = 0u64;
    let mut stored: Vec<Vec<usize>> = Vec::new();
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut closure: HashSet<Vec<usize>> = HashSet::new();
    closure.insert(g.elements().collect());
    search_maps(g, g, &gens, &allowed, &mut |m| {
        order += 1;
        if order <= AUT_STORE_LIMIT {
            stored.push(m.to_vec());
        }
        if !closure.contains(m) {
            generators.push(m.to_vec());
            close_under(&mut closure, &generators);
        }
        true
    });
    debug_assert_eq!(closure.len() as u64, order);
    Ok(AutGroup {
        order,
        is_2_group: order.is_power_of_two(),
        generators,
        elements: (order <= AUT_STORE_LIMIT).then_some(stored),
    })
}

fn close_under(set: &mut HashSet<Vec<usize>>, gens: &[Vec<usize>]) {
    let mut queue: Vec<Vec<usize>> = set.iter().cloned().collect();
    while let Some(p) = queue.pop() {
        for s in gens {
            let q = compose(&p, s);
            if set.insert(q.clone()) {
                queue.push(q);
            }
        }
    }
}

pub fn perm_order(p: &[usize]) -> u64 {
    let id: Vec<usize> = (0..p.len()).collect();
    let mut q = p.to_vec();
    let mut k = 1;
    while q != id {
        q = compose(p, &q);
        k += 1;
    }
    k
}

pub fn perm_pow(p: &[usize], e: u64) -> Vec<usize> {
    let mut r: Vec<usize> = (0..p.len()).collect();
    for _ in 0..e {
        r = compose(p, &r);
    }
    r
}

/// Coordinates in `G / Phi(G) = GF(2)^r` relative to a generating tuple that
/// is independent modulo `Phi(G)`.
pub fn frattini_coords(g: &GroupTable, gens: &[usize]) -> Vec<u32> {
    let mut coord = vec![u32::MAX; g.order()];
    coord[g.identity()] = 0;
    let mut queue = vec![g.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if coord[y] == u32::MAX {
                coord[y] = coord[x] ^ (1 << k);
                queue.push(y);
            }
        }
    }
    coord
}

/// A square matrix over GF(2); entry `k` is the image of basis vector `k`.
pub type Gf2Matrix = Vec<u32>;

pub fn mat_apply(m: &[u32], v: u32) -> u32 {
    m.iter()
        .enumerate()
        .filter(|(k, _)| v >> k & 1 == 1)
        .fold(0, |acc, (_, &c)| acc ^ c)
}

/// `a * b` (apply `b` first).
pub fn mat_mul(a: &[u32], b: &[u32]) -> Gf2Matrix {
    b.iter().map(|&c| mat_apply(a, c)).collect()
}

pub fn mat_identity(r: usize) -> Gf2Matrix {
    (0..r).map(|k| 1 << k).collect()
}

pub fn mat_order(m: &[u32]) -> u32 {
    let id = mat_identity(m.len());
    let mut p = m.to_vec();
    let mut k = 1;
    while p != id {
        p = mat_mul(m, &p);
        k += 1;
        if k > 1 << 12 {
            return 0;
        }
    }
    k
}

/// All invertible `r x r` matrices over GF(2).
pub fn gl2_elements(r: usize) -> Vec<Gf2Matrix> {
    let mut out = Vec::new();
    let total = 1u64 << (r * r);
    for code in 0..total {
        let m: Gf2Matrix = (0..r).map(|k| ((code >> (k * r)) & ((1 << r) - 1)) as u32).collect();
        if is_invertible(&m) {
            out.push(m);
        }
    }
    out
}

pub fn is_invertible(m: &[u32]) -> bool {
    let mut rows: Vec<u32> = m.to_vec();
    let mut rank = 0;
    for bit in 0..m.len() {
        if let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) {
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i] >> bit & 1 == 1 {
                    rows[i] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank == m.len()
}

/// Matrix of an automorphism on `G / Phi(G)`.
pub fn induced_matrix(gens: &[usize], coords: &[u32], auto: &[usize]) -> Gf2Matrix {
    gens.iter().map(|&s| coords[auto[s]]).collect()
}

/// An automorphism of `G` inducing `target` on `G / Phi(G)`, if any.
pub fn lift_matrix(
    g: &GroupTable,
    gens: &[usize],
    coords: &[u32],
    sig: &[(usize, usize, usize)],
    target: &[u32],
) -> Option<Vec<usize>> {
    let allowed: Vec<Vec<usize>> = gens
        .iter()
        .zip(target)
        .map(|(&s, &t)| g.elements().filter(|&y| coords[y] == t && sig[y] == sig[s]).collect())
        .collect();
    let mut found = None;
    search_maps(g, g, gens, &allowed, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// Turns an automorphism whose induced matrix has order 3 into an
/// automorphism of order exactly 3 with the same induced matrix.
pub fn order_three_power(auto: &[usize]) -> Vec<usize> {
    let o = perm_order(auto);
    let two_part = o & o.wrapping_neg();
    debug_assert_eq!(o / two_part, 3);
    // two_part * t = 1 (mod 3)
    let t = if two_part % 3 == 1 { 1 } else { 2 };
    perm_pow(auto, two_part * t)
}

/// Whether `Aut(G)` has an element of odd order, decided on
/// `G / Phi(G)`: the kernel of the action there is a 2-group, so an odd
/// automorphism exists iff some odd-order matrix lifts.
pub fn aut_has_odd_element(g: &GroupTable) -> Result<bool, MorphismError> {
    let gens = minimal_generators(g);
    let r = gens.len();
    if r > 3 {
        return Err(MorphismError::RankTooHigh(r as u32));
    }
    if r <= 1 {
        return Ok(false);
    }
    let coords = frattini_coords(g, &gens);
    let sig = local_signature(g);
    let mut tried: HashMap<Gf2Matrix, bool> = HashMap::new();
    for m in gl2_elements(r) {
        let o = mat_order(&m);
        if o == 1 || o % 2 == 0 || tried.contains_key(&m) {
            continue;
        }
        let ok = lift_matrix(g, &gens, &coords, &sig, &m).is_some();
        // powers generating the same cyclic group lift together
        let mut p = m.clone();
        for _ in 1..o {
            tried.insert(p.clone(), ok);
            p = mat_mul(&m, &p);
        }
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{metacyclic, FamilySpec};

    #[test]
    fn aut_orders() {
        let q8 = FamilySpec::Quaternion { n: 3 }.build().unwrap();
        let a = automorphisms(&q8).unwrap();
        assert_eq!(a.order, 24);
        assert!(!a.is_2_group);
        let e8 = FamilySpec::DirectC2mXC2sq { m: 1 }.build().unwrap();
        assert_eq!(automorphisms(&e8).unwrap().order, 168);
        let c4c2 = metacyclic(2, 1, 1, 0).unwrap();
        let a = automorphisms(&c4c2).unwrap();
        assert_eq!(a.order, 8);
        assert!(a.is_2_group);
        assert!(!aut_has_odd_element(&c4c2).unwrap());
        assert!(aut_has_odd_element(&q8).unwrap());
    }

    #[test]
    fn d8_not_q8() {
        let d8 = FamilySpec::Dihedral { n: 3 }.build().unwrap();
        let q8 = FamilySpec::Quaternion { n: 3 }.build().unwrap();
        assert_ne!(fingerprint(&d8), fingerprint(&q8));
        assert!(isomorphic_unfiltered(&d8, &q8).is_none());
        assert!(isomorphic(&d8, &d8).is_some());
    }

    #[test]
    fn gl32() {
        let all = gl2_elements(3);
        assert_eq!(all.len(), 168);
    }
}
