//! Census of bicyclic 2-groups by iterated central `C_2`-extensions, and the
//! checks run over it.
//!
//! Every bicyclic group of order `2^(k+1)` is a central extension of its
//! quotient by a central involution, and that quotient is again bicyclic, so
//! extending every level-`k` record by every class in `H^2(-, C_2)` reaches
//! all of level `k + 1`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{central_extensions, CohomologyError, DEFAULT_H2_CAP};
use crate::families::{classification_specs, metacyclic, FamilySpec};
use crate::fusion::{self, EssentialReport, FusionError, FusionVerdict, IsoType, NormalizerType, Reason, StructuralEntry};
use crate::group::{GroupFile, GroupTable, Subgroup};
use crate::invariants::{self, InvariantRecord, ShapeTags};
use crate::morphisms::{self, fingerprint, Fingerprint};
use crate::product;
use crate::subgroups::{all_subgroups, SubgroupError, DEFAULT_BUDGET};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("H^2 of record {index} at order 2^{log} has dimension {dim}, above the cap {cap}")]
    H2TooLarge { log: u32, index: usize, dim: usize, cap: usize },
    #[error("corrupted cache: {0}")]
    CorruptedCache(String),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Subgroups(#[from] SubgroupError),
}

#[derive(Debug, Clone)]
pub struct CensusRecord {
    pub log_order: u32,
    pub index: usize,
    pub canonical_rep: GroupTable,
    pub fingerprint: Fingerprint,
    pub invariants: InvariantRecord,
    pub shape: ShapeTags,
    pub derived_cyclic: bool,
    pub matched_family: Option<FamilySpec>,
    pub verdict: FusionVerdict,
    /// Admits a nonnilpotent system but no classification case matched.
    pub unmatched: bool,
    pub subgroup_count: usize,
    pub max_subgroup_rank: u32,
    pub max_quotient_rank: u32,
    /// Every homocyclic subgroup is some `Omega_i`.
    pub homocyclic_subgroups_are_omegas: bool,
    pub structural: Vec<StructuralEntry>,
}

/// Serializable view of a record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordSummary {
    pub order: usize,
    pub index: usize,
    pub name: String,
    pub fingerprint: Fingerprint,
    pub invariants: InvariantRecord,
    pub shape: ShapeTags,
    pub derived_cyclic: bool,
    pub matched_family: Option<FamilySpec>,
    pub verdict: FusionVerdict,
}

impl CensusRecord {
    pub fn name(&self) -> String {
        match &self.matched_family {
            Some(s) => s.to_string(),
            None if self.canonical_rep.is_abelian() => invariants::abelian_invariants(&self.canonical_rep)
                .iter()
                .map(|k| format!("C{k}"))
                .collect::<Vec<_>>()
                .join("x"),
            None => format!("G{}_{}", self.canonical_rep.order(), self.index),
        }
    }

    pub fn summary(&self) -> RecordSummary {
        RecordSummary {
            order: self.canonical_rep.order(),
            index: self.index,
            name: self.name(),
            fingerprint: self.fingerprint.clone(),
            invariants: self.invariants.clone(),
            shape: self.shape,
            derived_cyclic: self.derived_cyclic,
            matched_family: self.matched_family,
            verdict: self.verdict.clone(),
        }
    }
}

fn extra_specs(log: u32) -> Vec<FamilySpec> {
    let mut v = vec![FamilySpec::Cyclic { n: log }];
    if log >= 4 {
        v.push(FamilySpec::Modular { n: log });
    }
    for s in 1..log {
        let r = log - 1 - s;
        if r >= s {
            v.push(FamilySpec::MinNonabelian { r, s });
        }
    }
    v
}

/// Every spec of order `2^log` the builders can produce.
pub fn constructible_specs(log: u32) -> Vec<FamilySpec> {
    let mut v: Vec<FamilySpec> = classification_specs(log).into_iter().map(|(_, s)| s).collect();
    v.extend(extra_specs(log));
    if log >= 3 {
        v.push(FamilySpec::DirectC2mXC2sq { m: log - 2 });
    }
    if log >= 4 {
        v.push(FamilySpec::DirectC2mXQ8 { m: log - 3 });
        v.push(FamilySpec::CentralC2mQ8 { m: log - 2 });
    }
    if log % 2 == 1 && log >= 3 {
        v.push(FamilySpec::Wreath { n: (log - 1) / 2 });
    }
    v.sort();
    v.dedup();
    v
}

fn identify_family(g: &GroupTable, verdict: &FusionVerdict) -> Option<FamilySpec> {
    if let Some(mc) = verdict.matched_case {
        return Some(mc.spec);
    }
    let fp = fingerprint(g);
    for spec in constructible_specs(g.log_order()) {
        let h = spec.build().ok()?;
        if fingerprint(&h) == fp && morphisms::isomorphic_unfiltered(&h, g).is_some() {
            return Some(spec);
        }
    }
    None
}

fn is_homocyclic_subgroup(g: &GroupTable, s: &Subgroup) -> bool {
    if s.len() < 4 {
        return false;
    }
    let e: Vec<usize> = s.elems();
    let abelian = e.iter().all(|&a| e.iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
    let exp = e.iter().map(|&x| g.elem_order(x)).max().unwrap_or(1);
    abelian && exp * exp == s.len() && invariants::subgroup_rank(g, s) == 2
}

/// Full analysis of one bicyclic group.
pub fn analyze_record(table: GroupTable, log_order: u32, index: usize, budget: usize) -> Result<CensusRecord, CensusError> {
    let lattice = all_subgroups(&table, budget)?;
    let (verdict, unmatched) = match fusion::fs_multiplicity_with(&table, &lattice) {
        Ok(v) => (v, false),
        Err(FusionError::UnmatchedGroup) => (fusion::admits_nonnilpotent_with(&table, &lattice)?, true),
        Err(e) => return Err(e.into()),
    };
    let inv = invariants::structural_invariants(&table);
    let shape = invariants::classify_shape(&table);
    let mut max_subgroup_rank = 0;
    let mut max_quotient_rank = 0;
    let phi = invariants::frattini(&table);
    let omegas: Vec<Subgroup> = (1..=table.log_order()).map(|i| invariants::omega(&table, i)).collect();
    let mut homocyclic_ok = true;
    for s in lattice.iter() {
        max_subgroup_rank = max_subgroup_rank.max(invariants::subgroup_rank(&table, s));
        if table.is_normal(s) {
            let joined = table.join_subgroups(&phi, s);
            max_quotient_rank = max_quotient_rank.max((table.order() / joined.len()).trailing_zeros());
        }
        if is_homocyclic_subgroup(&table, s) && !omegas.contains(s) {
            homocyclic_ok = false;
        }
    }
    let structural = fusion::structural_checks(&table, &verdict.candidate_classes);
    let matched_family = identify_family(&table, &verdict);
    Ok(CensusRecord {
        log_order,
        index,
        fingerprint: fingerprint(&table),
        derived_cyclic: inv.derived_is_cyclic,
        invariants: inv,
        shape,
        matched_family,
        verdict,
        unmatched,
        subgroup_count: lattice.count(),
        max_subgroup_rank,
        max_quotient_rank,
        homocyclic_subgroups_are_omegas: homocyclic_ok,
        structural,
        canonical_rep: table,
    })
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub h2_cap: usize,
    /// Subgroup-count budget per record.
    pub budget: usize,
    pub cache: Option<PathBuf>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            h2_cap: DEFAULT_H2_CAP,
            budget: DEFAULT_BUDGET,
            cache: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Census {
    /// Records by `log2` of the order.
    pub levels: BTreeMap<u32, Vec<CensusRecord>>,
    /// Rank-2 extensions that failed the bicyclic test, up to isomorphism.
    pub rejected: BTreeMap<u32, Vec<GroupTable>>,
}

impl Census {
    pub fn records(&self) -> impl Iterator<Item = &CensusRecord> {
        self.levels.values().flatten()
    }

    pub fn level(&self, n: u32) -> &[CensusRecord] {
        self.levels.get(&n).map_or(&[], |v| v.as_slice())
    }

    pub fn max_level(&self) -> u32 {
        self.levels.keys().copied().max().unwrap_or(0)
    }

    /// The record isomorphic to `g`, if any.
    pub fn find(&self, g: &GroupTable) -> Vec<usize> {
        let fp = fingerprint(g);
        self.level(g.log_order())
            .iter()
            .filter(|r| r.fingerprint == fp && morphisms::isomorphic_unfiltered(g, &r.canonical_rep).is_some())
            .map(|r| r.index)
            .collect()
    }
}

struct Dedupe {
    tables: Vec<GroupTable>,
    buckets: HashMap<Fingerprint, Vec<usize>>,
}

impl Dedupe {
    fn new() -> Self {
        Dedupe {
            tables: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    fn offer(&mut self, g: GroupTable, fp: Fingerprint) -> bool {
        let bucket = self.buckets.entry(fp).or_default();
        if bucket
            .iter()
            .any(|&k| morphisms::isomorphic_unfiltered(&g, &self.tables[k]).is_some())
        {
            return false;
        }
        bucket.push(self.tables.len());
        self.tables.push(g);
        true
    }
}

/// An extension, whether it is bicyclic, and its fingerprint.
type Screened = (GroupTable, bool, Fingerprint);

/// Bicyclic tables and rejected rank-2 tables of one level.
type Level = (Vec<GroupTable>, Vec<GroupTable>);

/// Bicyclic groups and rejected rank-2 groups among the central extensions
/// of `bases`, each deduplicated, in deterministic order.
fn next_level(bases: &[GroupTable], log: u32, cap: usize) -> Result<Level, CensusError> {
    let per_base: Vec<Result<Vec<Screened>, CensusError>> = bases
        .par_iter()
        .enumerate()
        .map(|(index, base)| {
            let exts = central_extensions(base, cap).map_err(|e| match e {
                CohomologyError::H2TooLarge { dim, cap } => CensusError::H2TooLarge { log, index, dim, cap },
                other => other.into(),
            })?;
            Ok(exts
                .into_par_iter()
                .filter(|e| invariants::rank_by_squares(e) <= 2)
                .map(|e| {
                    let bic = invariants::is_bicyclic(&e);
                    let fp = fingerprint(&e);
                    (e, bic, fp)
                })
                .collect())
        })
        .collect();
    let mut good = Dedupe::new();
    let mut bad = Dedupe::new();
    for batch in per_base {
        for (g, bic, fp) in batch? {
            if bic {
                good.offer(g, fp);
            } else {
                bad.offer(g, fp);
            }
        }
    }
    Ok((good.tables, bad.tables))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ManifestEntry {
    log_order: u32,
    index: usize,
    file: String,
    fingerprint: Fingerprint,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
struct Manifest {
    version: u32,
    complete_levels: Vec<u32>,
    records: Vec<ManifestEntry>,
    rejected: Vec<ManifestEntry>,
}

const MANIFEST: &str = "manifest.json";
const CACHE_VERSION: u32 = 1;

fn load_manifest(dir: &Path) -> Result<Option<Manifest>, CensusError> {
    let path = dir.join(MANIFEST);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path)?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| CensusError::CorruptedCache(format!("manifest: {e}")))?;
    if m.version != CACHE_VERSION {
        return Err(CensusError::CorruptedCache(format!("manifest version {}", m.version)));
    }
    Ok(Some(m))
}

fn load_entry(dir: &Path, e: &ManifestEntry) -> Result<GroupTable, CensusError> {
    let text = fs::read_to_string(dir.join(&e.file))?;
    let gf = GroupFile::from_json(&text).map_err(|err| CensusError::CorruptedCache(format!("{}: {err}", e.file)))?;
    let g = gf
        .to_table()
        .map_err(|err| CensusError::CorruptedCache(format!("{}: {err}", e.file)))?;
    if fingerprint(&g) != e.fingerprint {
        return Err(CensusError::CorruptedCache(format!("{}: fingerprint mismatch", e.file)));
    }
    Ok(g)
}

/// Tables of cached levels, verified against the manifest fingerprints.
fn load_cache(dir: &Path) -> Result<BTreeMap<u32, Level>, CensusError> {
    let mut out = BTreeMap::new();
    let Some(m) = load_manifest(dir)? else {
        return Ok(out);
    };
    for &lvl in &m.complete_levels {
        let mut recs: Vec<&ManifestEntry> = m.records.iter().filter(|e| e.log_order == lvl).collect();
        recs.sort_by_key(|e| e.index);
        let mut rej: Vec<&ManifestEntry> = m.rejected.iter().filter(|e| e.log_order == lvl).collect();
        rej.sort_by_key(|e| e.index);
        let tables = recs.iter().map(|e| load_entry(dir, e)).collect::<Result<Vec<_>, _>>()?;
        let rejected = rej.iter().map(|e| load_entry(dir, e)).collect::<Result<Vec<_>, _>>()?;
        out.insert(lvl, (tables, rejected));
    }
    Ok(out)
}

fn save_cache(dir: &Path, census: &Census) -> Result<(), CensusError> {
    fs::create_dir_all(dir)?;
    let mut m = Manifest {
        version: CACHE_VERSION,
        ..Default::default()
    };
    for (&lvl, recs) in &census.levels {
        m.complete_levels.push(lvl);
        for r in recs {
            let file = format!("order{}_idx{}.json", 1u64 << lvl, r.index);
            fs::write(dir.join(&file), GroupFile::from_table(&r.canonical_rep, None).to_json())?;
            m.records.push(ManifestEntry {
                log_order: lvl,
                index: r.index,
                file,
                fingerprint: r.fingerprint.clone(),
            });
        }
    }
    for (&lvl, rej) in &census.rejected {
        for (k, g) in rej.iter().enumerate() {
            let file = format!("order{}_rejected{}.json", 1u64 << lvl, k);
            fs::write(dir.join(&file), GroupFile::from_table(g, None).to_json())?;
            m.rejected.push(ManifestEntry {
                log_order: lvl,
                index: k,
                file,
                fingerprint: fingerprint(g),
            });
        }
    }
    let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    fs::write(dir.join(MANIFEST), text)?;
    Ok(())
}

/// All bicyclic groups of order `2^n` for `1 <= n <= max_n`.
pub fn bicyclic_census(max_n: u32, opts: &CensusOptions) -> Result<Census, CensusError> {
    let cached = match &opts.cache {
        Some(dir) => load_cache(dir)?,
        None => BTreeMap::new(),
    };
    let mut tables: BTreeMap<u32, Vec<GroupTable>> = BTreeMap::new();
    let mut rejected: BTreeMap<u32, Vec<GroupTable>> = BTreeMap::new();
    tables.insert(1, vec![metacyclic(1, 0, 1, 0).expect("C2")]);
    rejected.insert(1, Vec::new());
    for lvl in 2..=max_n {
        if let Some((t, r)) = cached.get(&lvl) {
            tables.insert(lvl, t.clone());
            rejected.insert(lvl, r.clone());
            continue;
        }
        let (good, bad) = next_level(&tables[&(lvl - 1)], lvl, opts.h2_cap)?;
        tables.insert(lvl, good);
        rejected.insert(lvl, bad);
    }
    let mut census = Census::default();
    for (lvl, ts) in tables {
        let recs = ts
            .into_par_iter()
            .enumerate()
            .map(|(k, t)| analyze_record(t, lvl, k, opts.budget))
            .collect::<Result<Vec<_>, _>>()?;
        census.levels.insert(lvl, recs);
    }
    census.rejected = rejected;
    if let Some(dir) = &opts.cache {
        save_cache(dir, &census)?;
    }
    Ok(census)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: u32,
    pub f_empirical: u64,
    pub f_formula: u64,
    pub g_empirical: u64,
    pub g_formula: u64,
}

pub type CountTable = Vec<CountRow>;

/// Number of bicyclic groups of order `2^n` admitting a nonnilpotent
/// fusion system, by the closed formula.
pub fn f_formula(n: u32) -> u64 {
    let n = n as u64;
    match n {
        0 | 1 => 0,
        2 => 1,
        3 => 2,
        _ if n % 2 == 0 => 3 * n * n / 4 + 5 - 3 * n,
        _ => (3 * n * n + 1) / 4 + 3 - 3 * n,
    }
}

/// Number of nonnilpotent fusion systems on bicyclic groups of order `2^n`.
pub fn g_formula(n: u32) -> u64 {
    let n = n as u64;
    match n {
        0 | 1 => 0,
        2 => 1,
        3 => 3,
        _ if n % 2 == 0 => 3 * n * n / 4 + 5 - 2 * n,
        _ => (3 * n * n + 1) / 4 + 5 - 2 * n,
    }
}

pub fn count_table(census: &Census, max_n: u32) -> CountTable {
    (1..=max_n)
        .map(|n| {
            let recs = census.level(n);
            CountRow {
                n,
                f_empirical: recs.iter().filter(|r| r.verdict.admits_nonnilpotent).count() as u64,
                f_formula: f_formula(n),
                g_empirical: recs.iter().map(|r| r.verdict.fs_count as u64).sum(),
                g_formula: g_formula(n),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub order: usize,
    pub index: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    pub evaluated: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub checks: Vec<CheckSummary>,
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, check: &str) -> usize {
        self.violations.iter().filter(|v| v.check == check).count()
    }

    fn run<F>(&mut self, check: &str, f: F)
    where
        F: FnOnce(&mut Vec<Violation>) -> usize,
    {
        let mut found = Vec::new();
        let evaluated = f(&mut found);
        for v in &mut found {
            v.check = check.to_string();
        }
        self.checks.push(CheckSummary {
            check: check.to_string(),
            evaluated,
            violations: found.len(),
        });
        self.violations.extend(found);
    }
}

fn violation(r: &CensusRecord, detail: impl Into<String>) -> Violation {
    Violation {
        check: String::new(),
        order: r.canonical_rep.order(),
        index: Some(r.index),
        detail: detail.into(),
    }
}

/// `bicyclic <=> metacyclic or (rank 2 and exactly one nonmetacyclic
/// maximal subgroup)`, with the left side supplied by the caller.
pub fn janko_criterion(g: &GroupTable) -> bool {
    if invariants::is_metacyclic(g) {
        return true;
    }
    if invariants::rank(g) != 2 {
        return false;
    }
    invariants::maximal_subgroups(g)
        .iter()
        .filter(|m| !invariants::is_metacyclic(&g.subgroup_table(m).0))
        .count()
        == 1
}

/// Every check over the census. An empty violation list is a pass.
pub fn verify_suite(census: &Census) -> ViolationReport {
    let mut rep = ViolationReport::default();
    let recs: Vec<&CensusRecord> = census.records().collect();

    rep.run("cycliccom", |out| {
        for r in &recs {
            let v = &r.verdict;
            if !r.derived_cyclic && (!v.candidate_classes.is_empty() || v.reason == Reason::AutNot2Group) {
                out.push(violation(r, "noncyclic P' with a nonnilpotent verdict"));
            } else if !r.shape.metacyclic && v.admits_nonnilpotent != r.derived_cyclic {
                out.push(violation(
                    r,
                    format!("admits = {} but P' cyclic = {}", v.admits_nonnilpotent, r.derived_cyclic),
                ));
            }
        }
        recs.len()
    });

    rep.run("janko", |out| {
        let mut n = 0;
        for r in &recs {
            n += 1;
            if !janko_criterion(&r.canonical_rep) {
                out.push(violation(r, "bicyclic record fails the criterion"));
            }
        }
        for (&lvl, rej) in &census.rejected {
            for (k, g) in rej.iter().enumerate() {
                n += 1;
                if janko_criterion(g) {
                    out.push(Violation {
                        check: String::new(),
                        order: 1 << lvl,
                        index: None,
                        detail: format!("rejected extension {k} satisfies the criterion"),
                    });
                }
            }
        }
        n
    });

    rep.run("metanormal", |out| {
        let mut n = 0;
        for r in recs.iter().filter(|r| r.shape.metacyclic && !r.shape.maximal_class) {
            n += 1;
            if !r.homocyclic_subgroups_are_omegas {
                out.push(violation(r, "homocyclic subgroup not of the form Omega_i"));
            }
        }
        n
    });

    rep.run("biaut", |out| {
        for r in &recs {
            let odd = morphisms::aut_has_odd_element(&r.canonical_rep).unwrap_or(true);
            let allowed = r.shape.homocyclic || (r.shape.quaternion && r.canonical_rep.order() == 8);
            if odd && !allowed {
                out.push(violation(r, "Aut is not a 2-group"));
            }
        }
        recs.len()
    });

    let candidates = |r: &'_ CensusRecord| r.verdict.candidate_classes.clone();

    rep.run("biess", |out| {
        let mut n = 0;
        for r in &recs {
            for c in candidates(r).iter().filter(|c| c.rank_of_q == 3) {
                n += 1;
                if !matches!(c.iso_type, Some(IsoType::C2mXC2sq(_) | IsoType::C2mXQ8(_) | IsoType::C2mAstQ8(_))) {
                    out.push(violation(r, format!("rank-3 candidate of type {:?}", c.iso_type)));
                }
            }
        }
        n
    });

    rep.run("rank2ess", |out| {
        let mut n = 0;
        for r in recs.iter().filter(|r| !r.shape.metacyclic) {
            for c in candidates(r).iter().filter(|c| c.rank_of_q == 2) {
                n += 1;
                let wreath_n = match r.matched_family {
                    Some(FamilySpec::Wreath { n }) => Some(n),
                    _ => None,
                };
                let ok = r.shape.wreath_c2n_c2 && wreath_n.is_some() && c.iso_type == wreath_n.map(IsoType::Homocyclic);
                if !ok {
                    out.push(violation(r, format!("rank-2 candidate {:?} in a non-wreath group", c.iso_type)));
                }
            }
        }
        n
    });

    rep.run("sd16_normalizer", |out| {
        let mut n = 0;
        for r in &recs {
            for c in candidates(r).iter().filter(|c| c.rank_of_q == 3 && !c.is_normal_in_p) {
                n += 1;
                if matches!(c.normalizer_type, Some(NormalizerType::SD16XC2m(_))) {
                    out.push(violation(r, "normalizer SD16 x C"));
                }
            }
        }
        n
    });

    rep.run("structural", |out| {
        let mut n = 0;
        for r in &recs {
            for e in &r.structural {
                n += 1;
                if !e.passed {
                    out.push(violation(r, format!("check ({}) failed: {}", e.check, e.detail)));
                }
            }
        }
        n
    });

    rep.run("maxclass", |out| {
        let mut n = 0;
        for r in &recs {
            for c in candidates(r) {
                let q = c.subgroup();
                let small = c.order <= 4 || (c.order == 8 && !is_abelian(&r.canonical_rep, &q));
                if small {
                    n += 1;
                    if !r.shape.maximal_class {
                        out.push(violation(r, format!("candidate of order {} in a group not of maximal class", c.order)));
                    }
                }
            }
        }
        n
    });

    rep.run("section_rank", |out| {
        for r in &recs {
            if r.max_subgroup_rank > 3 || r.max_quotient_rank > 3 {
                out.push(violation(
                    r,
                    format!("section ranks {} / {}", r.max_subgroup_rank, r.max_quotient_rank),
                ));
            }
        }
        recs.len()
    });

    rep.run("centerfree", |out| {
        let mut n = 0;
        for r in recs.iter().filter(|r| !r.shape.metacyclic) {
            let cands = candidates(r);
            if cands.is_empty()
                || !cands
                    .iter()
                    .all(|c| matches!(c.iso_type, Some(IsoType::C2mXQ8(_) | IsoType::C2mAstQ8(_))))
            {
                continue;
            }
            n += 1;
            if !central_involution_fixed(&r.canonical_rep, &cands) {
                out.push(violation(r, "no central involution fixed by every candidate automorphism"));
            }
        }
        n
    });

    if census.max_level() >= 5 {
        rep.run("order32_klein_derived", |out| {
            let hits: Vec<&CensusRecord> = census
                .level(5)
                .iter()
                .filter(|r| {
                    let d = invariants::derived_subgroup(&r.canonical_rep);
                    d.len() == 4 && d.iter().all(|x| r.canonical_rep.elem_order(x) <= 2) && r.invariants.two_rank <= 2
                })
                .collect();
            if hits.len() != 1 {
                out.push(Violation {
                    check: String::new(),
                    order: 32,
                    index: None,
                    detail: format!("{} groups with P' = C2^2 and no C2^3", hits.len()),
                });
            }
            for r in hits {
                if !r.verdict.candidate_classes.is_empty() {
                    out.push(violation(r, "has essential candidates"));
                }
            }
            1
        });
    }

    rep.run("fs_consistency", |out| {
        for r in &recs {
            let v = &r.verdict;
            if r.unmatched {
                out.push(violation(r, "admits a nonnilpotent system but matches no case"));
            }
            if v.admits_nonnilpotent != (v.reason != Reason::None) || v.admits_nonnilpotent != (v.fs_count >= 1) {
                out.push(violation(r, "verdict fields disagree"));
            }
            if !v.admits_nonnilpotent && v.matched_case.is_some() {
                out.push(violation(r, format!("matches case {:?} but admits nothing", v.matched_case)));
            }
        }
        recs.len()
    });

    rep.run("quotient_closure", |out| {
        let mut n = 0;
        for r in recs.iter().filter(|r| r.log_order >= 2) {
            let g = &r.canonical_rep;
            for z in invariants::center(g).iter().filter(|&z| g.elem_order(z) == 2) {
                n += 1;
                let (q, _) = product::quotient(g, &g.generated([z])).expect("central subgroup is normal");
                if census.find(&q).len() != 1 {
                    out.push(violation(r, format!("quotient by central involution {z} not in the census")));
                }
            }
        }
        n
    });

    rep.run("completeness", |out| {
        let mut n = 0;
        for lvl in 2..=census.max_level() {
            for spec in constructible_specs(lvl) {
                let Ok(g) = spec.build() else { continue };
                n += 1;
                let expected = invariants::is_bicyclic(&g) as usize;
                let found = census.find(&g).len();
                if found != expected {
                    out.push(Violation {
                        check: String::new(),
                        order: 1 << lvl,
                        index: None,
                        detail: format!("{spec} matches {found} records, expected {expected}"),
                    });
                }
            }
        }
        n
    });

    rep.run("distinct_parameters", |out| {
        let mut n = 0;
        for lvl in 2..=census.max_level() {
            let mut seen: HashMap<usize, FamilySpec> = HashMap::new();
            for (_, spec) in classification_specs(lvl) {
                n += 1;
                let g = spec.build().expect("classification spec builds");
                let found = census.find(&g);
                if found.len() != 1 {
                    out.push(Violation {
                        check: String::new(),
                        order: 1 << lvl,
                        index: None,
                        detail: format!("{spec} matches {} records", found.len()),
                    });
                    continue;
                }
                if let Some(prev) = seen.insert(found[0], spec) {
                    out.push(Violation {
                        check: String::new(),
                        order: 1 << lvl,
                        index: Some(found[0]),
                        detail: format!("{prev} and {spec} are isomorphic"),
                    });
                }
            }
        }
        n
    });

    rep.run("counts", |out| {
        let max = census.max_level();
        for row in count_table(census, max).iter().filter(|r| r.n >= 2) {
            if row.f_empirical != row.f_formula || row.g_empirical != row.g_formula {
                out.push(Violation {
                    check: String::new(),
                    order: 1 << row.n,
                    index: None,
                    detail: format!(
                        "f = {} (formula {}), g = {} (formula {})",
                        row.f_empirical, row.f_formula, row.g_empirical, row.g_formula
                    ),
                });
            }
        }
        max as usize
    });

    rep
}

fn is_abelian(g: &GroupTable, s: &Subgroup) -> bool {
    let e = s.elems();
    e.iter().all(|&a| e.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

fn central_involution_fixed(g: &GroupTable, cands: &[EssentialReport]) -> bool {
    invariants::center(g)
        .iter()
        .filter(|&z| g.elem_order(z) == 2)
        .any(|z| {
            cands.iter().all(|c| {
                let Some(alpha) = &c.alpha_witness else {
                    return false;
                };
                match c.class_rep.iter().position(|&x| x == z) {
                    Some(k) => alpha[k] == z,
                    None => false,
                }
            })
        })
}

/// Metacyclic groups `<a, b | a^(2^n), b^(2^k) = a^t, b a b^-1 = a^r>` of
/// order at most `2^max_log`, up to isomorphism.
pub fn metacyclic_groups(max_log: u32) -> Vec<GroupTable> {
    let mut out = Vec::new();
    for log in 1..=max_log {
        let mut dd = Dedupe::new();
        for k in 0..=log {
            let n = log - k;
            let na = 1u64 << n;
            for r in (1..na.max(2)).step_by(2) {
                for t in 0..na.max(1) {
                    if let Ok(g) = metacyclic(n, k, r, t) {
                        if g.order() == 1 << log {
                            let fp = fingerprint(&g);
                            dd.offer(g, fp);
                        }
                    }
                }
            }
        }
        out.extend(dd.tables);
    }
    out
}

/// Janko's criterion and the homocyclic-subgroup property over metacyclic
/// groups not of maximal class.
pub fn verify_metacyclic(max_log: u32) -> ViolationReport {
    let mut rep = ViolationReport::default();
    let groups: Vec<GroupTable> = metacyclic_groups(max_log)
        .into_iter()
        .filter(|g| !(g.order() >= 8 && invariants::nilpotency_class(g) == g.log_order() - 1))
        .collect();
    let results: Vec<(usize, bool, bool, bool)> = groups
        .par_iter()
        .map(|g| {
            let bic = invariants::is_bicyclic(g);
            let janko = janko_criterion(g);
            let lattice = all_subgroups(g, DEFAULT_BUDGET).expect("metacyclic lattice within budget");
            let omegas: Vec<Subgroup> = (1..=g.log_order()).map(|i| invariants::omega(g, i)).collect();
            let homo = lattice
                .iter()
                .filter(|s| is_homocyclic_subgroup(g, s))
                .all(|s| omegas.contains(s));
            (g.order(), bic, janko, homo)
        })
        .collect();
    rep.run("janko_metacyclic", |out| {
        for (k, &(order, bic, janko, _)) in results.iter().enumerate() {
            if !(bic && janko) {
                out.push(Violation {
                    check: String::new(),
                    order,
                    index: Some(k),
                    detail: format!("bicyclic = {bic}, criterion = {janko}"),
                });
            }
        }
        results.len()
    });
    rep.run("metanormal_metacyclic", |out| {
        for (k, &(order, _, _, homo)) in results.iter().enumerate() {
            if !homo {
                out.push(Violation {
                    check: String::new(),
                    order,
                    index: Some(k),
                    detail: "homocyclic subgroup not of the form Omega_i".into(),
                });
            }
        }
        results.len()
    });
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        let f: Vec<u64> = (2..=7).map(f_formula).collect();
        let g: Vec<u64> = (2..=7).map(g_formula).collect();
        assert_eq!(f, vec![1, 2, 5, 7, 14, 19]);
        assert_eq!(g, vec![1, 3, 9, 14, 20, 28]);
    }

    #[test]
    fn order_eight() {
        let c = bicyclic_census(3, &CensusOptions::default()).unwrap();
        assert_eq!(c.level(3).len(), 4);
        assert_eq!(c.level(2).len(), 2);
        let t = count_table(&c, 3);
        assert_eq!((t[2].f_empirical, t[2].g_empirical), (2, 3));
    }
}
