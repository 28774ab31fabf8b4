//! Direct products, central products and quotients.

use crate::group::{ElemSet, GroupError, GroupTable, Subgroup, MAX_ORDER};

/// `G x H` with `(g, h)` stored at index `g * |H| + h`.
pub fn direct(g: &GroupTable, h: &GroupTable) -> GroupTable {
    let (ng, nh) = (g.order(), h.order());
    let order = ng * nh;
    assert!(order <= MAX_ORDER, "direct product of order {order} too large");
    let mut flat = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            flat.push(g.mul(a / nh, b / nh) * nh + h.mul(a % nh, b % nh));
        }
    }
    GroupTable::from_trusted(order, &flat)
}

pub fn center(g: &GroupTable) -> Subgroup {
    let set = ElemSet::from_iter(
        g.elements()
            .filter(|&z| g.elements().all(|x| g.mul(z, x) == g.mul(x, z))),
    );
    Subgroup::from_set_unchecked(set)
}

/// Least-index involution of the center, if any.
pub fn central_involution(g: &GroupTable) -> Option<usize> {
    center(g).iter().find(|&z| g.elem_order(z) == 2)
}

fn is_central(g: &GroupTable, s: &Subgroup) -> bool {
    s.iter()
        .all(|z| g.elements().all(|x| g.mul(z, x) == g.mul(x, z)))
}

/// Central product `G * H` identifying `zg <= Z(G)` with `zh <= Z(H)` along
/// `matching`, a list of pairs `(x, phi(x))` covering `zg`.
pub fn central(
    g: &GroupTable,
    h: &GroupTable,
    zg: &Subgroup,
    zh: &Subgroup,
    matching: &[(usize, usize)],
) -> Result<GroupTable, GroupError> {
    if !is_central(g, zg) || !is_central(h, zh) {
        return Err(GroupError::NotCentral);
    }
    if zg.len() != zh.len() || matching.len() != zg.len() {
        return Err(GroupError::MatchingNotIso("sizes differ".into()));
    }
    let mut phi = vec![usize::MAX; g.order()];
    let mut image = ElemSet::new();
    for &(x, y) in matching {
        if !zg.contains(x) || !zh.contains(y) || phi[x] != usize::MAX || !image.insert(y) {
            return Err(GroupError::MatchingNotIso(format!("pair ({x}, {y}) is not a bijection step")));
        }
        phi[x] = y;
    }
    for a in zg.iter() {
        for b in zg.iter() {
            if phi[g.mul(a, b)] != h.mul(phi[a], phi[b]) {
                return Err(GroupError::MatchingNotIso(format!("not multiplicative at ({a}, {b})")));
            }
        }
    }
    // (a, b) ~ (a x, b phi(x)^-1); each class keeps the pair with least index
    let nh = h.order();
    let zs: Vec<usize> = zg.iter().collect();
    let normal = |a: usize, b: usize| -> (usize, usize) {
        zs.iter()
            .map(|&x| (g.mul(a, x), h.mul(b, h.inv(phi[x]))))
            .min_by_key(|&(a, b)| a * nh + b)
            .expect("zg is nonempty")
    };
    let order = g.order() * nh / zs.len();
    if order > MAX_ORDER {
        return Err(GroupError::TooLarge(order));
    }
    let mut index = std::collections::HashMap::new();
    let mut reps = Vec::with_capacity(order);
    for a in g.elements() {
        for b in h.elements() {
            let n = normal(a, b);
            if !index.contains_key(&n) {
                index.insert(n, reps.len());
                reps.push(n);
            }
        }
    }
    let mut flat = Vec::with_capacity(order * order);
    for &(a1, b1) in &reps {
        for &(a2, b2) in &reps {
            flat.push(index[&normal(g.mul(a1, a2), h.mul(b1, b2))]);
        }
    }
    Ok(GroupTable::from_trusted(order, &flat))
}

/// `G / N` with cosets numbered by their least element, plus the
/// projection `G -> G/N`.
pub fn quotient(g: &GroupTable, n: &Subgroup) -> Result<(GroupTable, Vec<usize>), GroupError> {
    if !g.is_normal(n) {
        return Err(GroupError::NotNormal);
    }
    let mut proj = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if proj[x] != usize::MAX {
            continue;
        }
        let k = reps.len();
        reps.push(x);
        for y in n.iter() {
            proj[g.mul(x, y)] = k;
        }
    }
    let m = reps.len();
    let mut flat = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            flat.push(proj[g.mul(a, b)]);
        }
    }
    Ok((GroupTable::from_trusted(m, &flat), proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{metacyclic, FamilySpec};

    #[test]
    fn klein_as_direct() {
        let c2 = metacyclic(1, 0, 1, 0).unwrap();
        let v = direct(&c2, &c2);
        assert_eq!(v.order(), 4);
        assert!(v.elements().all(|x| v.mul(x, x) == v.identity()));
    }

    #[test]
    fn quotients_of_order_eight() {
        for spec in [FamilySpec::Quaternion { n: 3 }, FamilySpec::Dihedral { n: 3 }] {
            let g = spec.build().unwrap();
            let (q, proj) = quotient(&g, &center(&g)).unwrap();
            assert_eq!(q.order(), 4);
            assert!(q.elements().all(|x| q.mul(x, x) == q.identity()));
            for a in g.elements() {
                for b in g.elements() {
                    assert_eq!(proj[g.mul(a, b)], q.mul(proj[a], proj[b]));
                }
            }
            let (t, _) = quotient(&g, &g.whole()).unwrap();
            assert_eq!(t.order(), 1);
        }
    }

    #[test]
    fn non_normal_quotient_rejected() {
        let d8 = FamilySpec::Dihedral { n: 3 }.build().unwrap();
        let refl = d8.elements().find(|&x| d8.elem_order(x) == 2 && !center(&d8).contains(x)).unwrap();
        assert_eq!(quotient(&d8, &d8.generated([refl])).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn central_product_center() {
        let q8 = FamilySpec::Quaternion { n: 3 }.build().unwrap();
        let c4 = metacyclic(2, 0, 1, 0).unwrap();
        let g = FamilySpec::CentralC2mQ8 { m: 2 }.build().unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(center(&g).len(), 4);
        let zq = center(&q8);
        let bad = c4.generated([1]);
        assert!(central(&q8, &c4, &zq, &bad, &[(0, 0), (1, 1)]).is_err());
    }
}
