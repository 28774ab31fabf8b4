//! Structural invariants and recognition predicates.

use serde::{Deserialize, Serialize};

use crate::families::FamilySpec;
use crate::gf2::{solve_homogeneous, BitVec};
use crate::group::{ElemSet, GroupTable, Subgroup};
use crate::morphisms;
pub use crate::product::center;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub order: usize,
    pub center_size: usize,
    pub derived_series_sizes: Vec<usize>,
    pub lower_central_sizes: Vec<usize>,
    pub frattini_size: usize,
    pub omega_sizes: Vec<usize>,
    pub agemo_sizes: Vec<usize>,
    pub rank: u32,
    pub two_rank: u32,
    pub exponent: usize,
    pub nilpotency_class: u32,
    pub derived_is_cyclic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ShapeTags {
    pub abelian: bool,
    pub cyclic: bool,
    pub homocyclic: bool,
    pub elementary_abelian: bool,
    pub dihedral: bool,
    pub semidihedral: bool,
    pub quaternion: bool,
    pub maximal_class: bool,
    pub metacyclic: bool,
    pub bicyclic: bool,
    /// `C_(2^n) wr C_2` with `n >= 2`; `C_2 wr C_2` is reported as dihedral.
    #[serde(rename = "wreath_C2n_C2")]
    pub wreath_c2n_c2: bool,
    pub min_nonabelian: Option<(u32, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Localizers {
    pub centralizer: Subgroup,
    pub normalizer: Subgroup,
    pub core: Subgroup,
}

/// A small generating set, each element outside the span of the previous.
pub fn generating_set(g: &GroupTable) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.trivial_subgroup();
    for x in g.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = g.join(&span, &[x]);
            if span.len() == g.order() {
                break;
            }
        }
    }
    gens
}

/// `[A, B]`, generated by the commutators `[a, b]`.
pub fn commutator(g: &GroupTable, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut set = ElemSet::new();
    for x in a.iter() {
        for y in b.iter() {
            set.insert(g.comm(x, y));
        }
    }
    g.generated(set.iter())
}

pub fn derived_subgroup(g: &GroupTable) -> Subgroup {
    let w = g.whole();
    commutator(g, &w, &w)
}

pub fn derived_series(g: &GroupTable) -> Vec<Subgroup> {
    let mut out = vec![g.whole()];
    loop {
        let last = *out.last().unwrap();
        let next = commutator(g, &last, &last);
        if next == last {
            return out;
        }
        out.push(next);
    }
}

pub fn lower_central_series(g: &GroupTable) -> Vec<Subgroup> {
    let w = g.whole();
    let mut out = vec![w];
    loop {
        let last = *out.last().unwrap();
        let next = commutator(g, &last, &w);
        if next == last {
            return out;
        }
        out.push(next);
    }
}

/// `<x : x^(2^i) = 1>`.
pub fn omega(g: &GroupTable, i: u32) -> Subgroup {
    g.generated(g.elements().filter(|&x| g.elem_order(x) <= 1 << i))
}

/// `<x^(2^i)>`.
pub fn agemo(g: &GroupTable, i: u32) -> Subgroup {
    g.generated(g.elements().map(|x| g.pow(x, 1 << i)))
}

/// `P' * agemo_1(P)`.
pub fn frattini(g: &GroupTable) -> Subgroup {
    g.join_subgroups(&derived_subgroup(g), &agemo(g, 1))
}

/// Basis of `Hom(G, C_2)`, each vector listing the values on all elements.
pub fn homs_to_c2(g: &GroupTable) -> Vec<BitVec> {
    let gens = generating_set(g);
    let e = g.identity();
    let mut eqs: Vec<Vec<usize>> = vec![vec![e]];
    for x in g.elements() {
        for &s in &gens {
            eqs.push(vec![x, s, g.mul(x, s)]);
        }
    }
    solve_homogeneous(g.order(), eqs)
}

/// `log2 |G : Phi(G)|`, computed as the dimension of `Hom(G, C_2)`.
pub fn rank(g: &GroupTable) -> u32 {
    homs_to_c2(g).len() as u32
}

/// Rank through the squares: `log2 |G : agemo_1(G)|`.
pub fn rank_by_squares(g: &GroupTable) -> u32 {
    (g.order() / agemo(g, 1).len()).trailing_zeros()
}

/// Rank of a subgroup, through its squares.
pub fn subgroup_rank(g: &GroupTable, s: &Subgroup) -> u32 {
    let sq = g.generated(s.iter().map(|x| g.mul(x, x)));
    (s.len() / sq.len()).trailing_zeros()
}

/// Kernels of the nonzero homomorphisms to `C_2`.
pub fn maximal_subgroups(g: &GroupTable) -> Vec<Subgroup> {
    let basis = homs_to_c2(g);
    let r = basis.len();
    let mut out = Vec::new();
    for mask in 1u64..(1 << r) {
        let mut v = BitVec::zeros(g.order());
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                v.xor_assign(b);
            }
        }
        let set = ElemSet::from_iter(g.elements().filter(|&x| !v.get(x)));
        out.push(Subgroup::from_set_unchecked(set));
    }
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

/// Largest `r` with `C_2^r <= G`.
pub fn two_rank(g: &GroupTable) -> u32 {
    let invs: Vec<usize> = g.elements().filter(|&x| g.elem_order(x) == 2).collect();
    let mut best = 0;
    extend_elementary(g, &invs, 0, &g.trivial_subgroup(), 0, &mut best);
    best
}

fn extend_elementary(g: &GroupTable, invs: &[usize], from: usize, cur: &Subgroup, r: u32, best: &mut u32) {
    *best = (*best).max(r);
    let max_more = (g.order() / cur.len()).trailing_zeros();
    if r + max_more <= *best {
        return;
    }
    for k in from..invs.len() {
        let x = invs[k];
        if cur.contains(x) || !cur.iter().all(|y| g.mul(x, y) == g.mul(y, x)) {
            continue;
        }
        let next = g.join(cur, &[x]);
        extend_elementary(g, invs, k + 1, &next, r + 1, best);
    }
}

pub fn is_cyclic(g: &GroupTable) -> bool {
    g.elements().any(|x| g.elem_order(x) == g.order())
}

pub fn is_cyclic_subgroup(g: &GroupTable, s: &Subgroup) -> bool {
    s.iter().any(|x| g.elem_order(x) == s.len())
}

pub fn nilpotency_class(g: &GroupTable) -> u32 {
    let lcs = lower_central_series(g);
    debug_assert_eq!(lcs.last().unwrap().len(), 1, "2-groups are nilpotent");
    (lcs.len() - 1) as u32
}

pub fn structural_invariants(g: &GroupTable) -> InvariantRecord {
    let sizes = |v: Vec<Subgroup>| v.iter().map(|s| s.len()).collect::<Vec<_>>();
    let mut omega_sizes = Vec::new();
    for i in 1.. {
        let s = omega(g, i).len();
        omega_sizes.push(s);
        if s == g.order() {
            break;
        }
    }
    let mut agemo_sizes = Vec::new();
    for i in 1.. {
        let s = agemo(g, i).len();
        agemo_sizes.push(s);
        if s == 1 {
            break;
        }
    }
    let derived = derived_subgroup(g);
    InvariantRecord {
        order: g.order(),
        center_size: center(g).len(),
        derived_series_sizes: sizes(derived_series(g)),
        lower_central_sizes: sizes(lower_central_series(g)),
        frattini_size: frattini(g).len(),
        omega_sizes,
        agemo_sizes,
        rank: rank(g),
        two_rank: two_rank(g),
        exponent: g.exponent(),
        nilpotency_class: nilpotency_class(g),
        derived_is_cyclic: is_cyclic_subgroup(g, &derived),
    }
}

pub fn subgroup_invariants(g: &GroupTable, s: &Subgroup) -> InvariantRecord {
    structural_invariants(&g.subgroup_table(s).0)
}

/// Distinct cyclic subgroups, each with a generator.
pub fn cyclic_subgroups(g: &GroupTable) -> Vec<(usize, Subgroup)> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for x in g.elements() {
        let s = g.generated([x]);
        if seen.insert(s) {
            out.push((x, s));
        }
    }
    out
}

pub fn is_metacyclic(g: &GroupTable) -> bool {
    if is_cyclic(g) {
        return true;
    }
    if rank(g) > 2 {
        return false;
    }
    for (_, n) in cyclic_subgroups(g) {
        if !g.is_normal(&n) {
            continue;
        }
        let idx = g.order() / n.len();
        let found = g.elements().any(|h| {
            let mut p = h;
            let mut k = 1;
            while !n.contains(p) {
                p = g.mul(p, h);
                k += 1;
            }
            k == idx
        });
        if found {
            return true;
        }
    }
    false
}

/// Cyclic subgroups not properly contained in another cyclic subgroup.
pub fn maximal_cyclic_subgroups(g: &GroupTable) -> Vec<Subgroup> {
    let all: Vec<Subgroup> = cyclic_subgroups(g).into_iter().map(|(_, s)| s).collect();
    all.iter()
        .filter(|s| !all.iter().any(|t| t.len() > s.len() && s.is_subgroup_of(t)))
        .copied()
        .collect()
}

/// `G = AB` for cyclic `A`, `B`.
pub fn is_bicyclic(g: &GroupTable) -> bool {
    if is_cyclic(g) {
        return true;
    }
    if rank(g) > 2 {
        return false;
    }
    let mc = maximal_cyclic_subgroups(g);
    for (k, a) in mc.iter().enumerate() {
        for b in &mc[k..] {
            if a.len() * b.len() >= g.order() && g.product_set_size(a, b) == g.order() {
                return true;
            }
        }
    }
    false
}

fn involution_count(g: &GroupTable) -> usize {
    g.elements().filter(|&x| g.elem_order(x) == 2).count()
}

/// Type `(r, s)` when `G` is minimal nonabelian with the two-generator
/// presentation `x^(2^r) = y^(2^s) = 1`, `[x, y]` central of order 2.
pub fn min_nonabelian_type(g: &GroupTable) -> Option<(u32, u32)> {
    if g.is_abelian() {
        return None;
    }
    let maxes = maximal_subgroups(g);
    if maxes.len() != 3 || !maxes.iter().all(|m| is_abelian_subgroup(g, m)) {
        return None;
    }
    let (ab, _) = crate::product::quotient(g, &derived_subgroup(g)).ok()?;
    let mut ords: Vec<usize> = abelian_invariants(&ab);
    ords.sort_unstable_by(|a, b| b.cmp(a));
    if ords.len() != 2 {
        return None;
    }
    let (r, s) = (ords[0].trailing_zeros(), ords[1].trailing_zeros());
    if g.order() != 1 << (r + s + 1) {
        return None;
    }
    let phi = frattini(g);
    let z = center(g);
    for x in g.elements().filter(|&x| g.elem_order(x) == 1 << r && !phi.contains(x)) {
        for y in g.elements().filter(|&y| g.elem_order(y) == 1 << s && !phi.contains(y)) {
            if phi.contains(g.mul(x, y)) {
                continue;
            }
            let c = g.comm(x, y);
            if g.elem_order(c) == 2 && z.contains(c) {
                return Some((r, s));
            }
        }
    }
    None
}

fn is_abelian_subgroup(g: &GroupTable, s: &Subgroup) -> bool {
    let e: Vec<usize> = s.elems();
    e.iter()
        .all(|&a| e.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

/// Orders of the cyclic factors of an abelian 2-group, largest first.
pub fn abelian_invariants(g: &GroupTable) -> Vec<usize> {
    debug_assert!(g.is_abelian());
    // |Omega_i| / |Omega_(i-1)| = 2^(number of factors of order >= 2^i)
    let mut counts = Vec::new();
    let mut prev = 1;
    for i in 1.. {
        let o = omega(g, i).len();
        if o == prev {
            break;
        }
        counts.push((o / prev).trailing_zeros() as usize);
        prev = o;
    }
    let mut out = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        let next = counts.get(i + 1).copied().unwrap_or(0);
        for _ in 0..c - next {
            out.push(1usize << (i + 1));
        }
    }
    out.reverse();
    out
}

pub fn classify_shape(g: &GroupTable) -> ShapeTags {
    let order = g.order();
    let log = g.log_order();
    let abelian = g.is_abelian();
    let cyclic = is_cyclic(g);
    let r = rank(g);
    let exponent = g.exponent();
    let maximal_class = order >= 8 && nilpotency_class(g) == log - 1;
    let inv = involution_count(g);
    let (mut dihedral, mut semidihedral, mut quaternion) = (false, false, false);
    if maximal_class {
        if inv == 1 {
            quaternion = true;
        } else if inv == order / 2 + 1 {
            dihedral = true;
        } else if inv == order / 4 + 1 {
            semidihedral = true;
        }
    }
    let metacyclic = is_metacyclic(g);
    let bicyclic = metacyclic || is_bicyclic(g);
    let wreath = !abelian && log % 2 == 1 && log >= 5 && {
        let spec = FamilySpec::Wreath { n: (log - 1) / 2 };
        let w = spec.build().expect("wreath reference");
        morphisms::isomorphic(g, &w).is_some()
    };
    ShapeTags {
        abelian,
        cyclic,
        homocyclic: abelian && r == 2 && exponent * exponent == order,
        elementary_abelian: abelian && exponent <= 2,
        dihedral,
        semidihedral,
        quaternion,
        maximal_class,
        metacyclic,
        bicyclic,
        wreath_c2n_c2: wreath,
        min_nonabelian: min_nonabelian_type(g),
    }
}

pub fn centralizer(g: &GroupTable, s: &Subgroup) -> Subgroup {
    let set = ElemSet::from_iter(
        g.elements()
            .filter(|&x| s.iter().all(|y| g.mul(x, y) == g.mul(y, x))),
    );
    Subgroup::from_set_unchecked(set)
}

pub fn normalizer(g: &GroupTable, s: &Subgroup) -> Subgroup {
    let set = ElemSet::from_iter(
        g.elements()
            .filter(|&x| s.iter().all(|y| s.contains(g.conj(x, y)))),
    );
    Subgroup::from_set_unchecked(set)
}

pub fn core(g: &GroupTable, s: &Subgroup) -> Subgroup {
    let mut set = *s.set();
    for x in g.elements() {
        set = set.intersection(g.conjugate(x, s).set());
    }
    Subgroup::from_set_unchecked(set)
}

pub fn localizers(g: &GroupTable, s: &Subgroup) -> Localizers {
    Localizers {
        centralizer: centralizer(g, s),
        normalizer: normalizer(g, s),
        core: core(g, s),
    }
}
