use std::fs;

use bicyclic::census::{bicyclic_census, count_table, verify_suite, CensusError, CensusOptions};
use bicyclic::FamilySpec;

#[test]
fn order_eight_records() {
    let c = bicyclic_census(3, &CensusOptions::default()).unwrap();
    let mut names: Vec<String> = c.level(3).iter().map(|r| r.name()).collect();
    names.sort();
    assert_eq!(names, vec!["C4xC2", "C8", "D8", "Q8"].iter().map(|s| s.to_string()).collect::<Vec<_>>());
    let t = count_table(&c, 3);
    assert_eq!((t[2].f_empirical, t[2].f_formula), (2, 2));
}

#[test]
fn suite_is_clean_to_thirty_two() {
    let c = bicyclic_census(5, &CensusOptions::default()).unwrap();
    let rep = verify_suite(&c);
    assert!(rep.is_clean(), "{:?}", rep.violations);
    assert!(rep.checks.iter().any(|x| x.check == "order32_klein_derived"));
}

#[test]
fn flipped_derived_flag_is_one_violation() {
    let mut c = bicyclic_census(5, &CensusOptions::default()).unwrap();
    let rec = c
        .levels
        .get_mut(&5)
        .unwrap()
        .iter_mut()
        .find(|r| !r.derived_cyclic)
        .expect("a group with noncyclic P'");
    rec.derived_cyclic = true;
    let rep = verify_suite(&c);
    assert_eq!(rep.count("cycliccom"), 1);
    assert_eq!(rep.violations.len(), 1);
}

#[test]
fn every_record_is_bicyclic_and_named_families_build() {
    let c = bicyclic_census(5, &CensusOptions::default()).unwrap();
    for r in c.records() {
        assert!(r.shape.bicyclic);
        if let Some(spec) = r.matched_family {
            assert_eq!(spec.build().unwrap().order(), r.canonical_rep.order());
        }
    }
    let wreath = FamilySpec::Wreath { n: 2 }.build().unwrap();
    assert_eq!(c.find(&wreath).len(), 1);
}

#[test]
fn swapped_cache_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let opts = CensusOptions {
        cache: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let cold = bicyclic_census(4, &opts).unwrap();
    let warm = bicyclic_census(4, &opts).unwrap();
    for (a, b) in cold.records().zip(warm.records()) {
        assert_eq!(a.canonical_rep.mult_flat(), b.canonical_rep.mult_flat());
        assert_eq!(a.summary().fingerprint, b.summary().fingerprint);
    }
    let p0 = dir.path().join("order16_idx0.json");
    let p1 = dir.path().join("order16_idx1.json");
    let (a, b) = (fs::read(&p0).unwrap(), fs::read(&p1).unwrap());
    fs::write(&p0, b).unwrap();
    fs::write(&p1, a).unwrap();
    match bicyclic_census(4, &opts) {
        Err(CensusError::CorruptedCache(msg)) => assert!(msg.contains("fingerprint")),
        other => panic!("expected a corrupted-cache error, got {:?}", other.map(|c| c.levels.len())),
    }
}

#[test]
fn h2_cap_is_enforced() {
    let opts = CensusOptions {
        h2_cap: 1,
        ..Default::default()
    };
    assert!(matches!(bicyclic_census(3, &opts), Err(CensusError::H2TooLarge { .. })));
}
