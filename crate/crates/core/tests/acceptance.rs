//! One line per acceptance criterion. All tolerances are exact: counts and
//! violation totals must match with zero slack.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bicyclic::census::{self, bicyclic_census, count_table, verify_metacyclic, verify_suite, Census, CensusOptions};
use bicyclic::fusion::{self, IsoType, NormalizerType};
use bicyclic::morphisms;
use bicyclic::numtheory::{self, ExponentFamily};
use bicyclic::FamilySpec;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

const RUNTIME_LIMIT: Duration = Duration::from_secs(300);
const STRETCH_LIMIT: Duration = Duration::from_secs(3600);
const F: [u64; 5] = [1, 2, 5, 7, 14];
const G: [u64; 5] = [1, 3, 9, 14, 20];

struct Line {
    id: u32,
    pass: bool,
    detail: String,
}

fn counts_ok(c: &Census, n: u32, f: &[u64], g: &[u64]) -> (bool, String) {
    let t = count_table(c, n);
    let fe: Vec<u64> = t[1..].iter().map(|r| r.f_empirical).collect();
    let ge: Vec<u64> = t[1..].iter().map(|r| r.g_empirical).collect();
    let formulas = t.iter().all(|r| r.f_formula == census::f_formula(r.n) && r.g_formula == census::g_formula(r.n));
    (fe == f && ge == g && formulas, format!("f = {fe:?}, g = {ge:?}"))
}

fn criterion1(c6: &Census, t6: Duration) -> Line {
    let (ok6, d6) = counts_ok(c6, 6, &F, &G);
    let start = Instant::now();
    let c7 = bicyclic_census(7, &CensusOptions::default()).expect("census to 128");
    let t7 = start.elapsed();
    let mut f7 = F.to_vec();
    f7.push(19);
    let mut g7 = G.to_vec();
    g7.push(28);
    let (ok7, _) = counts_ok(&c7, 7, &f7, &g7);
    Line {
        id: 1,
        pass: ok6 && t6 < RUNTIME_LIMIT,
        detail: format!(
            "N=2..6 {d6} in {:.1}s (limit {}s); stretch N=7 f=19 g=28 {} in {:.1}s (limit {}s)",
            t6.as_secs_f64(),
            RUNTIME_LIMIT.as_secs(),
            if ok7 { "matched" } else { "MISMATCH" },
            t7.as_secs_f64(),
            STRETCH_LIMIT.as_secs(),
        ),
    }
}

fn criterion2(c: &Census) -> Line {
    let mut checked = 0;
    let mut bad = 0;
    for r in c.records().filter(|r| !r.derived_cyclic) {
        checked += 1;
        let odd = morphisms::aut_has_odd_element(&r.canonical_rep).expect("rank 2");
        if !r.verdict.candidate_classes.is_empty() || odd {
            bad += 1;
        }
    }
    let suite = verify_suite(c).count("cycliccom");
    Line {
        id: 2,
        pass: bad == 0 && suite == 0 && checked > 0,
        detail: format!("{checked} groups with noncyclic P', {bad} with candidates or odd automorphisms, {suite} suite violations"),
    }
}

fn criterion3(c: &Census) -> Line {
    let rep = verify_suite(c);
    let eval = |name: &str| rep.checks.iter().find(|x| x.check == name).map_or(0, |x| x.evaluated);
    let (b, r) = (rep.count("biess"), rep.count("rank2ess"));
    Line {
        id: 3,
        pass: b == 0 && r == 0 && eval("biess") > 0 && eval("rank2ess") > 0,
        detail: format!(
            "{} rank-3 candidates ({b} exceptions), {} rank-2 candidates in nonmetacyclic groups ({r} exceptions)",
            eval("biess"),
            eval("rank2ess")
        ),
    }
}

fn candidate_types(spec: FamilySpec) -> (Vec<IsoType>, u32) {
    let g = spec.build().unwrap();
    let v = fusion::fs_multiplicity(&g).unwrap();
    let mut t: Vec<IsoType> = v.candidate_classes.iter().map(|c| c.iso_type.unwrap()).collect();
    t.sort_by_key(|x| format!("{x:?}"));
    (t, v.fs_count)
}

fn criterion4() -> Line {
    use IsoType::*;
    let cases: Vec<(FamilySpec, Vec<IsoType>, Option<u32>)> = vec![
        (FamilySpec::Dihedral { n: 4 }, vec![C2sq, C2sq], None),
        (FamilySpec::Quaternion { n: 4 }, vec![Q8Small, Q8Small], None),
        (FamilySpec::Semidihedral { n: 4 }, vec![C2sq, Q8Small], None),
        (FamilySpec::Wreath { n: 2 }, vec![C2mAstQ8(2), Homocyclic(2)], None),
        (FamilySpec::MinNonabelian { r: 2, s: 1 }, vec![C2mXC2sq(1)], None),
        (
            FamilySpec::Janko {
                n: 2,
                m: 2,
                i: 2,
                x_sq: 0,
                a_pow: 0,
            },
            vec![C2mXC2sq(1)],
            Some(2),
        ),
    ];
    let mut fails = Vec::new();
    for (spec, want, fs) in cases {
        let (mut got, count) = candidate_types(spec);
        let mut want = want;
        got.sort_by_key(|x| format!("{x:?}"));
        want.sort_by_key(|x| format!("{x:?}"));
        if got != want || fs.is_some_and(|f| f != count) {
            fails.push(format!("{spec}: {got:?} fs={count}"));
        }
    }
    Line {
        id: 4,
        pass: fails.is_empty(),
        detail: if fails.is_empty() {
            "D16, Q16, SD16, C4wrC2, MNA(2,1), J(2,2,2,0,0) as stated".into()
        } else {
            fails.join("; ")
        },
    }
}

fn criterion5(c: &Census) -> Line {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut bad = 0;
    for r in c.records() {
        for q in r.verdict.candidate_classes.iter().filter(|q| !q.is_normal_in_p) {
            let t = q.normalizer_type.unwrap();
            let name = match t {
                NormalizerType::D8XC2m(_) => "D8xC",
                NormalizerType::Q16XC2m(_) => "Q16xC",
                NormalizerType::Q16AstC2m(_) => "Q16*C",
                _ => {
                    bad += 1;
                    "other"
                }
            };
            *seen.entry(name.into()).or_default() += 1;
        }
    }
    let core_entries: Vec<_> = c.records().flat_map(|r| r.structural.iter()).filter(|e| e.check == "b").collect();
    let core_fail = core_entries.iter().filter(|e| !e.passed).count();
    Line {
        id: 5,
        pass: bad == 0 && core_fail == 0 && !core_entries.is_empty(),
        detail: format!(
            "non-normal candidate normalizers {seen:?}, {bad} outside the allowed set; core decomposition {}/{} hold",
            core_entries.len() - core_fail,
            core_entries.len()
        ),
    }
}

fn criterion6(c: &Census) -> Line {
    let rep = verify_suite(c);
    let meta = verify_metacyclic(7);
    let n_meta = meta.checks.first().map_or(0, |x| x.evaluated);
    let v = rep.count("janko") + rep.count("metanormal") + meta.violations.len();
    Line {
        id: 6,
        pass: v == 0 && n_meta > 0,
        detail: format!("census to 64 plus {n_meta} metacyclic non-maximal-class groups to 128: {v} violations"),
    }
}

fn criterion7() -> Line {
    let cyclo = (1..=64u32).all(|i| {
        let prod = numtheory::divisors(i).into_iter().fold(BigUint::one(), |a, d| a * numtheory::phi_at_2(d));
        prod == (BigUint::one() << i) - 1u32
    });
    let failures: usize = [ExponentFamily::SL2, ExponentFamily::Sz, ExponentFamily::PSU3]
        .into_iter()
        .map(|f| numtheory::section_bound_verify(f, 24).failures.len())
        .sum();
    let formula = numtheory::group_exponent(ExponentFamily::GL2, 3).unwrap().value;
    let brute = morphisms::gl2_elements(3)
        .iter()
        .map(|m| morphisms::mat_order(m) as u64)
        .fold(1u64, |a, o| a.lcm(&o));
    let pass = cyclo && failures == 0 && formula == BigUint::from(84u32) && brute == 84;
    Line {
        id: 7,
        pass,
        detail: format!("cyclotomic products to 64 {}, {failures} unobstructed violations for r <= 24, GL(3,2) exponent {formula} (brute force {brute})", if cyclo { "exact" } else { "WRONG" }),
    }
}

fn criterion8(c: &Census) -> Line {
    let mut specs = 0;
    let mut clashes = 0;
    for n in 2..=6 {
        let groups: Vec<_> = bicyclic::families::classification_specs(n)
            .into_iter()
            .map(|(_, s)| (s, s.build().unwrap()))
            .collect();
        specs += groups.len();
        for (k, (_, a)) in groups.iter().enumerate() {
            for (_, b) in &groups[k + 1..] {
                if morphisms::isomorphic(a, b).is_some() {
                    clashes += 1;
                }
            }
        }
    }
    let rep = verify_suite(c);
    let unmatched = rep.count("distinct_parameters") + rep.count("completeness");
    Line {
        id: 8,
        pass: clashes == 0 && unmatched == 0,
        detail: format!("{specs} specs of order 4..64, {clashes} isomorphic pairs, {unmatched} without exactly one census record"),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let c6 = bicyclic_census(6, &CensusOptions::default()).expect("census to 64");
    let t6 = start.elapsed();
    let lines = vec![
        criterion1(&c6, t6),
        criterion2(&c6),
        criterion3(&c6),
        criterion4(),
        criterion5(&c6),
        criterion6(&c6),
        criterion7(),
        criterion8(&c6),
    ];
    let mut all = true;
    for l in &lines {
        all &= l.pass;
        println!("criterion {}: {} - {}", l.id, if l.pass { "PASS" } else { "FAIL" }, l.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
