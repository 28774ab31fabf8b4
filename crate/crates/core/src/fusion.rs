//! Essential-subgroup candidates and fusion-system verdicts.
//!
//! A subgroup `Q < P` is a candidate when
//! E1: `C_P(Q) <= Q`,
//! E2: `|N_P(Q) : Q| = 2`,
//! E3: every `x` in `N_P(Q) \ Q` acts nontrivially on `Q / Phi(Q)`,
//! E4: some automorphism of `Q` of order 3 and the action of `N_P(Q)`
//! generate `S_3` on `Q / Phi(Q)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{self, classification_specs, metacyclic, FamilySpec};
use crate::group::{GroupTable, Subgroup};
use crate::invariants::{self, center, centralizer, core, frattini, normalizer};
use crate::morphisms::{self, fingerprint, Fingerprint, MorphismError};
use crate::product;
use crate::subgroups::{all_subgroups, SubgroupError, SubgroupLattice, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsoType {
    C2sq,
    #[serde(rename = "Q8_small")]
    Q8Small,
    #[serde(rename = "C2m_x_C2sq")]
    C2mXC2sq(u32),
    #[serde(rename = "C2m_x_Q8")]
    C2mXQ8(u32),
    #[serde(rename = "C2m_ast_Q8")]
    C2mAstQ8(u32),
    #[serde(rename = "homocyclic")]
    Homocyclic(u32),
    #[serde(rename = "other")]
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormalizerType {
    #[serde(rename = "whole_group")]
    WholeGroup,
    #[serde(rename = "D8_x_C2m")]
    D8XC2m(u32),
    #[serde(rename = "Q16_x_C2m")]
    Q16XC2m(u32),
    #[serde(rename = "SD16_x_C2m")]
    SD16XC2m(u32),
    #[serde(rename = "Q16_ast_C2m")]
    Q16AstC2m(u32),
    #[serde(rename = "other")]
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Conditions {
    pub self_centralizing: bool,
    pub norm_index_two: bool,
    pub faithful_on_frattini_quotient: bool,
    /// Only evaluated when the first three hold; false otherwise.
    pub s3_realizable: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.self_centralizing && self.norm_index_two && self.faithful_on_frattini_quotient && self.s3_realizable
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EssentialReport {
    /// Elements of the class representative.
    pub class_rep: Vec<usize>,
    pub class_size: usize,
    pub order: usize,
    pub rank_of_q: u32,
    pub is_normal_in_p: bool,
    pub conditions: Conditions,
    pub candidate: bool,
    /// Set for candidates only.
    pub iso_type: Option<IsoType>,
    /// Set for candidates only.
    pub normalizer_type: Option<NormalizerType>,
    /// An automorphism of `Q` of order 3, as the image of each element of
    /// `class_rep` (parent indices).
    pub alpha_witness: Option<Vec<usize>>,
}

impl EssentialReport {
    pub fn subgroup(&self) -> Subgroup {
        Subgroup::from_set_unchecked(crate::group::ElemSet::from_iter(self.class_rep.iter().copied()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    EssentialCandidateExists,
    AutNot2Group,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedCase {
    pub case: u8,
    pub spec: FamilySpec,
}

/// Generator of a possible center of the fusion system, with whether it is
/// a square in `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterCandidate {
    pub element: usize,
    pub is_square: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FusionVerdict {
    pub admits_nonnilpotent: bool,
    pub reason: Reason,
    pub candidate_classes: Vec<EssentialReport>,
    pub matched_case: Option<MatchedCase>,
    pub fs_count: u32,
    /// Filled in the two-system case: the elements `a^2` and `a^2 z`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub center_candidates: Vec<CenterCandidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FusionError {
    #[error("group is not bicyclic")]
    NotBicyclic,
    #[error("group admits a nonnilpotent fusion system but matches no classification case")]
    UnmatchedGroup,
    #[error("subgroup of rank {0} exceeds rank 3")]
    RankTooHigh(u32),
    #[error(transparent)]
    Subgroups(#[from] SubgroupError),
}

impl From<MorphismError> for FusionError {
    fn from(e: MorphismError) -> Self {
        match e {
            MorphismError::RankTooHigh(r) => FusionError::RankTooHigh(r),
        }
    }
}

type Reference = Arc<(GroupTable, Fingerprint)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum RefKey {
    Spec(FamilySpec),
    D8Times(u32),
    Q16Times(u32),
    SD16Times(u32),
    Q16Ast(u32),
}

fn build_reference(key: RefKey) -> GroupTable {
    match key {
        RefKey::Spec(s) => s.build().expect("reference spec"),
        RefKey::D8Times(m) => product::direct(&FamilySpec::Dihedral { n: 3 }.build().unwrap(), &metacyclic(m, 0, 1, 0).unwrap()),
        RefKey::Q16Times(m) => product::direct(&FamilySpec::Quaternion { n: 4 }.build().unwrap(), &metacyclic(m, 0, 1, 0).unwrap()),
        RefKey::SD16Times(m) => {
            product::direct(&FamilySpec::Semidihedral { n: 4 }.build().unwrap(), &metacyclic(m, 0, 1, 0).unwrap())
        }
        RefKey::Q16Ast(m) => {
            families::central_over_involution(&FamilySpec::Quaternion { n: 4 }.build().unwrap(), &metacyclic(m, 0, 1, 0).unwrap())
                .expect("central product")
        }
    }
}

/// Reference groups are built once per key and shared.
fn reference(key: RefKey) -> Reference {
    static CACHE: OnceLock<Mutex<HashMap<RefKey, Reference>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return r.clone();
    }
    let g = build_reference(key);
    let fp = fingerprint(&g);
    let r = Arc::new((g, fp));
    cache.lock().unwrap().insert(key, r.clone());
    r
}

fn matches(g: &GroupTable, fp: &Fingerprint, key: RefKey) -> bool {
    let r = reference(key);
    r.0.order() == g.order() && r.1 == *fp && morphisms::isomorphic_unfiltered(g, &r.0).is_some()
}

pub fn classify_iso_type(q: &GroupTable) -> IsoType {
    let k = q.log_order();
    let fp = fingerprint(q);
    if k == 2 && q.exponent() == 2 {
        return IsoType::C2sq;
    }
    if k == 3 && matches(q, &fp, RefKey::Spec(FamilySpec::Quaternion { n: 3 })) {
        return IsoType::Q8Small;
    }
    if k >= 4 && k % 2 == 0 && matches(q, &fp, RefKey::Spec(FamilySpec::Homocyclic { n: k / 2 })) {
        return IsoType::Homocyclic(k / 2);
    }
    if k >= 3 && matches(q, &fp, RefKey::Spec(FamilySpec::DirectC2mXC2sq { m: k - 2 })) {
        return IsoType::C2mXC2sq(k - 2);
    }
    if k >= 4 && matches(q, &fp, RefKey::Spec(FamilySpec::DirectC2mXQ8 { m: k - 3 })) {
        return IsoType::C2mXQ8(k - 3);
    }
    if k >= 4 && matches(q, &fp, RefKey::Spec(FamilySpec::CentralC2mQ8 { m: k - 2 })) {
        return IsoType::C2mAstQ8(k - 2);
    }
    IsoType::Other
}

/// Type of `N_P(Q)`, or `whole_group` when it is all of `P`.
pub fn classify_normalizer(p: &GroupTable, n: &Subgroup) -> NormalizerType {
    if n.len() == p.order() {
        return NormalizerType::WholeGroup;
    }
    let (t, _) = p.subgroup_table(n);
    let fp = fingerprint(&t);
    let k = t.log_order();
    if k >= 3 && matches(&t, &fp, RefKey::D8Times(k - 3)) {
        return NormalizerType::D8XC2m(k - 3);
    }
    if k >= 4 && matches(&t, &fp, RefKey::Q16Times(k - 4)) {
        return NormalizerType::Q16XC2m(k - 4);
    }
    if k >= 4 && matches(&t, &fp, RefKey::SD16Times(k - 4)) {
        return NormalizerType::SD16XC2m(k - 4);
    }
    if k >= 5 && matches(&t, &fp, RefKey::Q16Ast(k - 3)) {
        return NormalizerType::Q16AstC2m(k - 3);
    }
    NormalizerType::Other
}

/// Evaluates E1-E4 on one subgroup.
pub fn evaluate_subgroup(p: &GroupTable, q: &Subgroup, class_size: usize) -> Result<EssentialReport, FusionError> {
    let mut cond = Conditions::default();
    let n = normalizer(p, q);
    cond.self_centralizing = centralizer(p, q).is_subgroup_of(q);
    cond.norm_index_two = n.len() == 2 * q.len();
    let (qt, emb) = p.subgroup_table(q);
    let mut pos = vec![usize::MAX; p.order()];
    for (i, &x) in emb.iter().enumerate() {
        pos[x] = i;
    }
    let phi_local = frattini(&qt);
    let outside: Vec<usize> = n.iter().filter(|&x| !q.contains(x)).collect();
    cond.faithful_on_frattini_quotient = !outside.is_empty()
        && outside.iter().all(|&x| {
            emb.iter().any(|&s| {
                let moved = pos[p.mul(p.conj(x, s), p.inv(s))];
                !phi_local.contains(moved)
            })
        });
    let gens = morphisms::minimal_generators(&qt);
    let rank_of_q = gens.len() as u32;
    let mut alpha_witness = None;
    if cond.self_centralizing && cond.norm_index_two && cond.faithful_on_frattini_quotient {
        if rank_of_q > 3 {
            return Err(FusionError::RankTooHigh(rank_of_q));
        }
        let x = outside[0];
        let coords = morphisms::frattini_coords(&qt, &gens);
        let conj_x: Vec<usize> = emb.iter().map(|&s| pos[p.conj(x, s)]).collect();
        let xbar = morphisms::induced_matrix(&gens, &coords, &conj_x);
        let sig = morphisms::local_signature(&qt);
        for a in morphisms::gl2_elements(gens.len()) {
            if morphisms::mat_order(&a) != 3 {
                continue;
            }
            let a_inv = morphisms::mat_mul(&a, &a);
            if morphisms::mat_mul(&morphisms::mat_mul(&xbar, &a), &xbar) != a_inv {
                continue;
            }
            if let Some(lift) = morphisms::lift_matrix(&qt, &gens, &coords, &sig, &a) {
                let alpha = morphisms::order_three_power(&lift);
                alpha_witness = Some(alpha.iter().map(|&y| emb[y]).collect());
                cond.s3_realizable = true;
                break;
            }
        }
    }
    let candidate = cond.all();
    Ok(EssentialReport {
        class_rep: q.elems(),
        class_size,
        order: q.len(),
        rank_of_q,
        is_normal_in_p: n.len() == p.order(),
        conditions: cond,
        candidate,
        iso_type: candidate.then(|| classify_iso_type(&qt)),
        normalizer_type: candidate.then(|| classify_normalizer(p, &n)),
        alpha_witness,
    })
}

/// One report per conjugacy class of proper subgroups, in lattice order.
pub fn essential_reports(p: &GroupTable, lattice: &SubgroupLattice) -> Result<Vec<EssentialReport>, FusionError> {
    lattice
        .classes
        .par_iter()
        .filter(|c| c.representative.len() < p.order())
        .map(|c| evaluate_subgroup(p, &c.representative, c.members.len()))
        .collect()
}

/// Reports of the candidate classes only.
pub fn essential_candidates(p: &GroupTable, lattice: &SubgroupLattice) -> Result<Vec<EssentialReport>, FusionError> {
    Ok(essential_reports(p, lattice)?
        .into_iter()
        .filter(|r| r.candidate)
        .collect())
}

pub fn admits_nonnilpotent(p: &GroupTable) -> Result<FusionVerdict, FusionError> {
    let lattice = all_subgroups(p, DEFAULT_BUDGET)?;
    admits_nonnilpotent_with(p, &lattice)
}

pub fn admits_nonnilpotent_with(p: &GroupTable, lattice: &SubgroupLattice) -> Result<FusionVerdict, FusionError> {
    if !invariants::is_bicyclic(p) {
        return Err(FusionError::NotBicyclic);
    }
    let candidates = essential_candidates(p, lattice)?;
    let reason = if !candidates.is_empty() {
        Reason::EssentialCandidateExists
    } else if morphisms::aut_has_odd_element(p)? {
        Reason::AutNot2Group
    } else {
        Reason::None
    };
    Ok(FusionVerdict {
        admits_nonnilpotent: reason != Reason::None,
        reason,
        candidate_classes: candidates,
        matched_case: None,
        fs_count: 0,
        center_candidates: Vec::new(),
    })
}

/// The classification case whose presentation is isomorphic to `p`.
pub fn match_case(p: &GroupTable) -> Option<(MatchedCase, morphisms::IsoWitness)> {
    let fp = fingerprint(p);
    for (case, spec) in classification_specs(p.log_order()) {
        let r = reference(RefKey::Spec(spec));
        if r.1 != fp {
            continue;
        }
        if let Some(w) = morphisms::isomorphic_unfiltered(&r.0, p) {
            return Some((MatchedCase { case, spec }, w));
        }
    }
    None
}

pub fn fs_multiplicity(p: &GroupTable) -> Result<FusionVerdict, FusionError> {
    let lattice = all_subgroups(p, DEFAULT_BUDGET)?;
    fs_multiplicity_with(p, &lattice)
}

pub fn fs_multiplicity_with(p: &GroupTable, lattice: &SubgroupLattice) -> Result<FusionVerdict, FusionError> {
    let mut v = admits_nonnilpotent_with(p, lattice)?;
    let matched = match_case(p);
    if v.admits_nonnilpotent {
        let Some((mc, w)) = matched else {
            return Err(FusionError::UnmatchedGroup);
        };
        v.fs_count = families::case_fs_count(mc.case, &mc.spec);
        if v.fs_count == 2 && mc.case == 10 {
            v.center_candidates = center_candidates(p, &mc.spec, &w.map);
        }
        v.matched_case = Some(mc);
    } else if let Some((mc, _)) = matched {
        v.matched_case = Some(mc);
    }
    Ok(v)
}

fn center_candidates(p: &GroupTable, spec: &FamilySpec, map: &[usize]) -> Vec<CenterCandidate> {
    let FamilySpec::Janko { n, m, .. } = *spec else {
        return Vec::new();
    };
    // normal form index e * 2^(m+1) + f * 2^m + g
    let na = 1usize << m;
    let z_e = 1usize << (n - 1);
    [2usize, z_e * 2 * na + 2]
        .into_iter()
        .map(|local| {
            let element = map[local];
            CenterCandidate {
                element,
                is_square: p.elements().any(|y| p.mul(y, y) == element),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructuralEntry {
    pub class_rep: Vec<usize>,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

/// Checks (a)-(d) on every rank-3 candidate:
/// (a) `N/Phi(Q)` is `D8 x C2` or minimal nonabelian of type (2,1);
/// (b) `K = Core_P(Q) != 1`, `N/K = Q/K x Z(P/K)` and `|Z(P/K)| = 2`;
/// (c) `Q` normal implies `P'` cyclic;
/// (d) `Q` not normal implies `N` is `D8 x C`, `Q16 x C` or `Q16 * C`.
pub fn structural_checks(p: &GroupTable, candidates: &[EssentialReport]) -> Vec<StructuralEntry> {
    let mut out = Vec::new();
    let derived_cyclic = invariants::is_cyclic_subgroup(p, &invariants::derived_subgroup(p));
    for r in candidates.iter().filter(|r| r.candidate && r.rank_of_q == 3) {
        let q = r.subgroup();
        let n = normalizer(p, &q);
        let entry = |check: &str, passed: bool, detail: String| StructuralEntry {
            class_rep: r.class_rep.clone(),
            check: check.to_string(),
            passed,
            detail,
        };

        let (nt, n_emb) = p.subgroup_table(&n);
        let mut npos = vec![usize::MAX; p.order()];
        for (i, &x) in n_emb.iter().enumerate() {
            npos[x] = i;
        }
        let (qt, q_emb) = p.subgroup_table(&q);
        let phi_q = frattini(&qt);
        let phi_in_n = Subgroup::from_set_unchecked(crate::group::ElemSet::from_iter(phi_q.iter().map(|x| npos[q_emb[x]])));
        let (nq, _) = product::quotient(&nt, &phi_in_n).expect("Phi(Q) is normal in N");
        let fp = fingerprint(&nq);
        let a_ok = matches(&nq, &fp, RefKey::D8Times(1)) || matches(&nq, &fp, RefKey::Spec(FamilySpec::MinNonabelian { r: 2, s: 1 }));
        out.push(entry("a", a_ok, format!("|N/Phi(Q)| = {}", nq.order())));

        let k = core(p, &q);
        let (pk, proj) = product::quotient(p, &k).expect("core is normal");
        let z = center(&pk);
        let image = |s: &Subgroup| crate::group::ElemSet::from_iter(s.iter().map(|x| proj[x]));
        let nk = image(&n);
        let qk = image(&q);
        let b_ok = k.len() > 1
            && z.len() == 2
            && z.set().is_subset(&nk)
            && qk.intersection(z.set()).len() == 1
            && qk.len() * z.len() == nk.len();
        out.push(entry("b", b_ok, format!("|K| = {}, |Z(P/K)| = {}", k.len(), z.len())));

        if r.is_normal_in_p {
            out.push(entry("c", derived_cyclic, format!("P' cyclic: {derived_cyclic}")));
        } else {
            let nt = r.normalizer_type.unwrap_or(NormalizerType::Other);
            let d_ok = matches!(nt, NormalizerType::D8XC2m(_) | NormalizerType::Q16XC2m(_) | NormalizerType::Q16AstC2m(_));
            out.push(entry("d", d_ok, format!("{nt:?}")));
        }
    }
    out
}
