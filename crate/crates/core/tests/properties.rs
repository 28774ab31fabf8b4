use bicyclic::cohomology::central_extensions;
use bicyclic::group::GroupFile;
use bicyclic::morphisms::{self, fingerprint};
use bicyclic::subgroups::all_subgroups;
use bicyclic::{invariants, FamilySpec, GroupTable};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (1u32..=6).prop_map(|n| FamilySpec::Cyclic { n }),
        (1u32..=3).prop_map(|n| FamilySpec::Homocyclic { n }),
        (3u32..=6).prop_map(|n| FamilySpec::Dihedral { n }),
        (3u32..=6).prop_map(|n| FamilySpec::Quaternion { n }),
        (4u32..=6).prop_map(|n| FamilySpec::Semidihedral { n }),
        (4u32..=6).prop_map(|n| FamilySpec::Modular { n }),
        (1u32..=2).prop_map(|n| FamilySpec::Wreath { n }),
        (2u32..=3).prop_map(|m| FamilySpec::CentralC2mQ8 { m }),
        (1u32..=3, 1u32..=2).prop_filter_map("r >= s", |(r, s)| (r >= s).then_some(FamilySpec::MinNonabelian { r, s })),
    ]
}

fn shuffle(g: &GroupTable, seed: u64) -> GroupTable {
    let n = g.order();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut state = seed | 1;
    for k in (1..n).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        perm.swap(k, (state % (k as u64 + 1)) as usize);
    }
    g.relabel(&perm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeling_preserves_isomorphism_class(spec in spec_strategy(), seed in any::<u64>()) {
        let g = spec.build().unwrap();
        let h = shuffle(&g, seed);
        prop_assert_eq!(fingerprint(&g), fingerprint(&h));
        let w = morphisms::isomorphic(&g, &h).expect("relabeled copy is isomorphic");
        prop_assert!(morphisms::verify_witness(&g, &h, &w.map));
        prop_assert_eq!(invariants::structural_invariants(&g), invariants::structural_invariants(&h));
        prop_assert_eq!(invariants::classify_shape(&g), invariants::classify_shape(&h));
    }

    #[test]
    fn group_file_round_trip(spec in spec_strategy()) {
        let g = spec.build().unwrap();
        let text = GroupFile::from_table(&g, None).to_json();
        let back = GroupFile::from_json(&text).unwrap().to_table().unwrap();
        prop_assert_eq!(g.mult_flat(), back.mult_flat());
    }

    #[test]
    fn shape_implications(spec in spec_strategy()) {
        let g = spec.build().unwrap();
        let s = invariants::classify_shape(&g);
        prop_assert!(!s.cyclic || s.metacyclic);
        prop_assert!(!s.metacyclic || s.bicyclic);
        prop_assert!(invariants::rank(&g) <= 2 || !s.bicyclic);
        prop_assert_eq!(invariants::rank(&g), invariants::rank_by_squares(&g));
    }

    #[test]
    fn subgroups_have_two_power_order_and_close(spec in spec_strategy()) {
        let g = spec.build().unwrap();
        let lat = all_subgroups(&g, 50_000).unwrap();
        for s in lat.iter() {
            prop_assert!(s.len().is_power_of_two());
            prop_assert!(g.is_subgroup(s.set()));
        }
        let members: usize = lat.classes.iter().map(|c| c.members.len()).sum();
        prop_assert_eq!(members, lat.count());
    }
}

#[test]
fn extensions_double_the_order_and_contain_the_split_one() {
    for spec in [FamilySpec::Dihedral { n: 3 }, FamilySpec::Homocyclic { n: 1 }, FamilySpec::Cyclic { n: 3 }] {
        let g = spec.build().unwrap();
        let exts = central_extensions(&g, 16).unwrap();
        assert!(exts.iter().all(|e| e.order() == 2 * g.order()));
        let split = bicyclic::product::direct(&g, &FamilySpec::Cyclic { n: 1 }.build().unwrap());
        assert_eq!(exts.iter().filter(|e| morphisms::isomorphic(e, &split).is_some()).count(), 1);
    }
}
