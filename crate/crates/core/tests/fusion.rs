use bicyclic::fusion::{self, IsoType, Reason};
use bicyclic::invariants;
use bicyclic::morphisms::{self, perm_order};
use bicyclic::FamilySpec;

#[test]
fn wreath_candidates() {
    let g = FamilySpec::Wreath { n: 2 }.build().unwrap();
    let v = fusion::fs_multiplicity(&g).unwrap();
    let mut types: Vec<IsoType> = v.candidate_classes.iter().map(|c| c.iso_type.unwrap()).collect();
    types.sort_by_key(|t| format!("{t:?}"));
    assert_eq!(types, vec![IsoType::C2mAstQ8(2), IsoType::Homocyclic(2)]);
    assert_eq!(v.fs_count, 3);
    assert_eq!(v.reason, Reason::EssentialCandidateExists);
}

#[test]
fn cyclic_sixteen_admits_nothing() {
    let g = FamilySpec::Cyclic { n: 4 }.build().unwrap();
    let v = fusion::admits_nonnilpotent(&g).unwrap();
    assert!(!v.admits_nonnilpotent);
    assert_eq!(v.reason, Reason::None);
}

#[test]
fn homocyclic_is_controlled() {
    let g = FamilySpec::Homocyclic { n: 2 }.build().unwrap();
    let v = fusion::fs_multiplicity(&g).unwrap();
    assert_eq!(v.reason, Reason::AutNot2Group);
    assert_eq!(v.fs_count, 1);
}

#[test]
fn essential_families_have_order_three_automorphisms() {
    let specs = [
        FamilySpec::DirectC2mXC2sq { m: 1 },
        FamilySpec::DirectC2mXC2sq { m: 2 },
        FamilySpec::DirectC2mXQ8 { m: 1 },
        FamilySpec::CentralC2mQ8 { m: 2 },
        FamilySpec::CentralC2mQ8 { m: 3 },
    ];
    for spec in specs {
        let q = spec.build().unwrap();
        let aut = morphisms::automorphisms(&q).unwrap();
        assert_eq!(aut.order % 3, 0, "{spec}");
        assert!(!aut.is_2_group);
        if let FamilySpec::CentralC2mQ8 { .. } = spec {
            let center = invariants::center(&q);
            for a in aut.elements.as_ref().unwrap().iter().filter(|a| perm_order(a) == 3) {
                let fixed: Vec<usize> = q.elements().filter(|&x| a[x] == x).collect();
                assert_eq!(fixed, center.elems(), "{spec}");
            }
        }
    }
}

#[test]
fn central_products_agree() {
    let c4 = FamilySpec::Cyclic { n: 2 }.build().unwrap();
    let q8 = FamilySpec::Quaternion { n: 3 }.build().unwrap();
    let d8 = FamilySpec::Dihedral { n: 3 }.build().unwrap();
    let a = bicyclic::families::central_over_involution(&q8, &c4).unwrap();
    let b = bicyclic::families::central_over_involution(&d8, &c4).unwrap();
    assert!(morphisms::isomorphic(&a, &b).is_some());
    assert!(morphisms::isomorphic(&q8, &d8).is_none());
}

#[test]
fn janko_parameters_distinguish() {
    let j = |i| FamilySpec::Janko { n: 3, m: 2, i, x_sq: 0, a_pow: 0 }.build().unwrap();
    assert!(morphisms::isomorphic(&j(2), &j(3)).is_none());
}

#[test]
fn not_bicyclic_is_an_error() {
    let g = FamilySpec::DirectC2mXC2sq { m: 1 }.build().unwrap();
    assert_eq!(fusion::admits_nonnilpotent(&g).unwrap_err(), fusion::FusionError::NotBicyclic);
}
