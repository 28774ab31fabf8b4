use bicyclic::numtheory::{self, ExponentFamily};
use num_bigint::BigUint;
use num_traits::One;

#[test]
fn cyclotomic_products() {
    for i in 1..=64u32 {
        let prod = numtheory::divisors(i).into_iter().fold(BigUint::one(), |a, d| a * numtheory::phi_at_2(d));
        assert_eq!(prod, (BigUint::one() << i) - 1u32, "i = {i}");
    }
    for n in 1..=32 {
        assert!(numtheory::phi_at_2(2 * n) > BigUint::one());
    }
}

#[test]
fn phi_six_n_lower_bound() {
    for n in (3..=21).step_by(2) {
        assert!(numtheory::phi6n_lower_bound_holds(n), "n = {n}");
    }
}

#[test]
fn largest_unobstructed_respects_bounds() {
    for fam in [ExponentFamily::SL2, ExponentFamily::Sz, ExponentFamily::PSU3] {
        let rep = numtheory::section_bound_verify(fam, 24);
        assert!(rep.failures.is_empty(), "{fam:?}: {:?}", rep.failures);
        for &(r, n) in &rep.largest_unobstructed {
            assert!(n == 0 || !numtheory::violates_bound(fam, r, n), "{fam:?} r = {r} n = {n}");
        }
    }
}

#[test]
fn sl2_example_rows() {
    let rep = numtheory::section_bound_verify(ExponentFamily::SL2, 4);
    let row = |r, n| rep.rows.iter().find(|x| x.r == r && x.n == n).unwrap().clone();
    assert!(row(3, 2).obstructed && row(3, 2).violates_bound);
    assert!(!row(4, 2).obstructed && !row(4, 2).violates_bound);
}

#[test]
fn exponents_and_ranges() {
    let v = |f, n| numtheory::group_exponent(f, n).unwrap();
    assert_eq!(v(ExponentFamily::GL2, 3).value, BigUint::from(84u32));
    assert_eq!(v(ExponentFamily::SL2, 2).value, BigUint::from(30u32));
    assert_eq!(v(ExponentFamily::Sz, 2).value, BigUint::from(1820u32));
    assert!(v(ExponentFamily::PSU3, 3).divisor_only);
    assert!(numtheory::group_exponent(ExponentFamily::GL2, 0).is_err());
    let json = serde_json::to_string(&v(ExponentFamily::Sz, 20)).unwrap();
    assert!(json.contains("\"value\":\""));
    assert!("psu3".parse::<ExponentFamily>().is_ok() && "e8".parse::<ExponentFamily>().is_err());
}
