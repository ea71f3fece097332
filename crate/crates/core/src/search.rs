//! Exhaustive maximization over L-initial ID tuples and enumeration oracles.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::count::{add, sub, CountScalar};
use crate::error::{invalid, Error, Result};
use crate::families::{
    classify, construction1_ids, construction2_ids, f23_iter, range_bounds, Instance, Params, Regime,
    SystemIds,
};
use crate::lexset::{ksets, lex_le, pred, Ground, KRange, KSet, DEFAULT_MEMBER_CAP};
use crate::objective::{f_general, f_nonmixed, g_mixed};
use crate::partner::{cross_lex, max_cross_id};

pub const NAIVE_BUDGET: f64 = 1e8;
pub const SMART_BUDGET: f64 = 1e7;
pub const SCAN_BUDGET: f64 = 1e7;

fn bits(s: &KSet) -> u64 {
    s.mask().expect("oracle sets live in [n] with n <= 64")
}

/// Members of `𝓛(a, |a|)` as bitmasks.
fn member_masks(a: &KSet, cap: usize) -> Result<Vec<u64>> {
    if a.n() > 64 {
        return invalid(format!("enumeration oracle supports n <= 64, got {}", a.n()));
    }
    let g = Ground::<u64>::new(a.n());
    Ok(g.members(a.len(), a, cap)?.iter().map(bits).collect())
}

fn all_pairs_meet(xs: &[u64], ys: &[u64]) -> bool {
    xs.iter().all(|&x| ys.iter().all(|&y| x & y != 0))
}

/// Whether `𝓛(a)` and `𝓛(b)` cross-intersect, by listing both families.
pub fn oracle_cross(a: &KSet, b: &KSet) -> Result<bool> {
    oracle_cross_capped(a, b, DEFAULT_MEMBER_CAP)
}

pub fn oracle_cross_capped(a: &KSet, b: &KSet, cap: usize) -> Result<bool> {
    if a.n() != b.n() {
        return invalid("ground sets differ");
    }
    if a.is_empty() || b.is_empty() {
        return invalid("oracle needs nonempty IDs");
    }
    Ok(all_pairs_meet(&member_masks(a, cap)?, &member_masks(b, cap)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// Every ID tuple, pairs tested with the partner characterization.
    Naive,
    /// Enumerate the first two IDs, derive the rest from their caps.
    Smart,
    /// Every ID tuple, pairs tested by listing both families.
    NaiveOracle,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Naive => "naive",
            SearchMode::Smart => "smart",
            SearchMode::NaiveOracle => "naive-oracle",
        })
    }
}

impl Serialize for SearchMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult<C> {
    pub max_sum: C,
    /// All maximizing systems, sorted.
    pub extremal: Vec<SystemIds>,
    pub evaluated: u64,
    pub mode: SearchMode,
}

/// Running maximum with every tie kept.
#[derive(Clone, Debug)]
struct Best<C> {
    value: Option<C>,
    systems: Vec<Vec<KSet>>,
    evaluated: u64,
}

impl<C: CountScalar> Best<C> {
    fn new() -> Self {
        Best { value: None, systems: Vec::new(), evaluated: 0 }
    }

    /// Whether `bound` can still reach the current maximum.
    fn admits(&self, bound: &C) -> bool {
        self.value.as_ref().is_none_or(|v| bound >= v)
    }

    fn offer(&mut self, value: C, ids: Vec<KSet>) {
        match &self.value {
            Some(v) if &value < v => {}
            Some(v) if &value == v => self.systems.push(ids),
            _ => {
                self.value = Some(value);
                self.systems = vec![ids];
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.evaluated += other.evaluated;
        match (&self.value, &other.value) {
            (_, None) => self,
            (None, _) => Best { evaluated: self.evaluated, ..other },
            (Some(a), Some(b)) => {
                if b > a {
                    Best { evaluated: self.evaluated, ..other }
                } else {
                    if a == b {
                        self.systems.extend(other.systems);
                    }
                    self
                }
            }
        }
    }

    fn finish(self, p: &Params, mode: SearchMode) -> Result<SearchResult<C>> {
        let max_sum = self
            .value
            .ok_or_else(|| Error::NotFound(format!("no feasible system for {p}")))?;
        let mut extremal: Vec<SystemIds> = self
            .systems
            .into_iter()
            .map(|ids| SystemIds { params: p.clone(), ids })
            .collect();
        extremal.sort();
        extremal.dedup();
        Ok(SearchResult { max_sum, extremal, evaluated: self.evaluated, mode })
    }
}

fn binom_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Estimated work of a search, in the units its budget is stated in.
pub fn estimated_work(p: &Params, mode: SearchMode) -> f64 {
    let lead = if p.t() >= 3 { 2 } else { 1 };
    match mode {
        SearchMode::Smart => p.ks[..lead].iter().map(|&k| binom_f64(p.n, k)).product(),
        _ => p.ks.iter().map(|&k| binom_f64(p.n, k)).product(),
    }
}

fn guard(p: &Params, mode: SearchMode) -> Result<()> {
    let budget = match mode {
        SearchMode::Smart => SMART_BUDGET,
        _ => NAIVE_BUDGET,
    };
    let work = estimated_work(p, mode);
    if work > budget {
        return Err(Error::SizeGuard(format!(
            "{mode} search of {p} needs about {work:.3e} evaluations (budget {budget:.0e})"
        )));
    }
    Ok(())
}

fn lex_min(a: KSet, b: KSet) -> KSet {
    if lex_le(&a, &b) {
        a
    } else {
        b
    }
}

/// Largest admissible ID for family `i` given the assigned ones, or
/// `None` when an assigned family leaves no room.
fn cap_for(p: &Params, assigned: &[Option<KSet>], i: usize) -> Result<Option<KSet>> {
    let mut cap = KSet::last(p.n, p.k(i))?;
    for (j, a) in assigned.iter().enumerate() {
        let Some(a) = a else { continue };
        if !p.constrained(i, j) {
            continue;
        }
        match max_cross_id(a, p.k(i)) {
            Ok(m) => cap = lex_min(cap, m),
            Err(Error::NotFound(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(cap))
}

/// Maximizes over all completions of `assigned`, offering every optimum.
fn complete<C: CountScalar>(
    inst: &Instance<C>,
    assigned: &mut Vec<Option<KSet>>,
    base: &C,
    best: &mut Best<C>,
) -> Result<()> {
    let p = &inst.params;
    let open: Vec<usize> = (0..p.t()).filter(|&i| assigned[i].is_none()).collect();
    let mut caps = Vec::with_capacity(open.len());
    for &i in &open {
        match cap_for(p, assigned, i)? {
            Some(c) => caps.push(c),
            None => return Ok(()),
        }
    }
    let mut cap_ranks = Vec::with_capacity(open.len());
    for (&i, c) in open.iter().zip(&caps) {
        cap_ranks.push(inst.rank(i, c)?);
    }
    let mut bound = base.clone();
    for r in &cap_ranks {
        bound = add(&bound, r)?;
    }
    best.evaluated += 1;
    if !best.admits(&bound) {
        return Ok(());
    }
    let feasible = open.iter().enumerate().all(|(x, &i)| {
        open.iter()
            .enumerate()
            .skip(x + 1)
            .all(|(y, &j)| !p.constrained(i, j) || cross_lex(&caps[x], &caps[y]))
    });
    if feasible {
        let ids = (0..p.t())
            .map(|i| match &assigned[i] {
                Some(a) => a.clone(),
                None => caps[open.iter().position(|&o| o == i).unwrap()].clone(),
            })
            .collect();
        best.offer(bound, ids);
        return Ok(());
    }
    // branch on the first open family, walking down from its cap
    let i = open[0];
    let rest = sub(&bound, &cap_ranks[0])?;
    let mut x = Some(caps[0].clone());
    let mut rx = cap_ranks[0].clone();
    let one = C::one();
    while let Some(cur) = x {
        let b = add(&rest, &rx)?;
        if !best.admits(&b) {
            break;
        }
        assigned[i] = Some(cur.clone());
        complete(inst, assigned, &add(base, &rx)?, best)?;
        assigned[i] = None;
        x = pred(&cur);
        if x.is_some() {
            rx = sub(&rx, &one)?;
        }
    }
    Ok(())
}

fn smart_shard<C: CountScalar>(inst: &Instance<C>, i1: &KSet) -> Result<Best<C>> {
    let p = &inst.params;
    let mut best = Best::new();
    let mut assigned = vec![None; p.t()];
    assigned[0] = Some(i1.clone());
    let r1 = inst.rank(0, i1)?;
    if p.t() < 3 {
        complete(inst, &mut assigned, &r1, &mut best)?;
        return Ok(best);
    }
    let Some(hi) = cap_for(p, &assigned, 1)? else { return Ok(best) };
    for i2 in KRange::new(KSet::first(p.n, p.k(1))?, hi) {
        let base = add(&r1, &inst.rank(1, &i2)?)?;
        assigned[1] = Some(i2);
        complete(inst, &mut assigned, &base, &mut best)?;
    }
    Ok(best)
}

fn naive_dfs<C: CountScalar, F: Fn(&KSet, &KSet) -> bool>(
    inst: &Instance<C>,
    check: &F,
    ids: &mut Vec<KSet>,
    base: &C,
    best: &mut Best<C>,
) -> Result<()> {
    let p = &inst.params;
    let i = ids.len();
    if i == p.t() {
        best.offer(base.clone(), ids.clone());
        return Ok(());
    }
    for (pos, x) in ksets(p.n, p.k(i)).enumerate() {
        best.evaluated += 1;
        if (0..i).all(|j| !p.constrained(i, j) || check(&ids[j], &x)) {
            let r = crate::count::from_usize::<C>(pos + 1)?;
            ids.push(x);
            naive_dfs(inst, check, ids, &add(base, &r)?, best)?;
            ids.pop();
        }
    }
    Ok(())
}

/// Prefix oracle: family of an ID is the first `rank` sets of its size.
struct OracleTable {
    masks: Vec<Vec<u64>>,
    ground: Ground<u64>,
}

impl OracleTable {
    fn new(p: &Params) -> Result<Self> {
        if p.n > 64 {
            return invalid("enumeration oracle supports n <= 64");
        }
        let masks = (0..=p.n).map(|k| ksets(p.n, k).map(|s| bits(&s)).collect()).collect();
        Ok(OracleTable { masks, ground: Ground::new(p.n) })
    }

    fn cross(&self, a: &KSet, b: &KSet) -> bool {
        let ra = self.ground.rank(a.len(), a).expect("rank of a valid ID") as usize;
        let rb = self.ground.rank(b.len(), b).expect("rank of a valid ID") as usize;
        all_pairs_meet(&self.masks[a.len()][..ra], &self.masks[b.len()][..rb])
    }
}

/// Exact `M(n, k_1, ..., k_t)` with every maximizing ID tuple.
pub fn brute_force_m<C: CountScalar>(inst: &Instance<C>, mode: SearchMode) -> Result<SearchResult<C>> {
    guard(&inst.params, mode)?;
    let p = &inst.params;
    let leads: Vec<KSet> = ksets(p.n, p.k(0)).collect();
    let best = match mode {
        SearchMode::Smart => leads
            .par_iter()
            .map(|i1| smart_shard(inst, i1))
            .try_reduce(Best::new, |a, b| Ok(a.merge(b)))?,
        SearchMode::Naive | SearchMode::NaiveOracle => {
            let table = if mode == SearchMode::NaiveOracle { Some(OracleTable::new(p)?) } else { None };
            let check = |a: &KSet, b: &KSet| match &table {
                Some(t) => t.cross(a, b),
                None => cross_lex(a, b),
            };
            leads
                .par_iter()
                .enumerate()
                .map(|(pos, i1)| {
                    let mut best = Best::new();
                    best.evaluated += 1;
                    let r = crate::count::from_usize::<C>(pos + 1)?;
                    let mut ids = vec![i1.clone()];
                    naive_dfs(inst, &check, &mut ids, &r, &mut best)?;
                    Ok(best)
                })
                .try_reduce(Best::new, |a, b| Ok(a.merge(b)))?
        }
    };
    best.finish(p, mode)
}

/// Best system total over completions of a partial assignment, with
/// every optimal completion.
pub fn constrained_search<C: CountScalar>(
    inst: &Instance<C>,
    fixed: &[Option<KSet>],
) -> Result<SearchResult<C>> {
    let p = &inst.params;
    if fixed.len() != p.t() {
        return invalid(format!("assignment has {} slots, expected {}", fixed.len(), p.t()));
    }
    for (i, f) in fixed.iter().enumerate() {
        if let Some(f) = f {
            if f.len() != p.k(i) || f.n() != p.n {
                return invalid(format!("{f:?} is not a {}-subset of [{}]", p.k(i), p.n));
            }
        }
    }
    for i in 0..p.t() {
        for j in i + 1..p.t() {
            if let (Some(a), Some(b)) = (&fixed[i], &fixed[j]) {
                if p.constrained(i, j) && !cross_lex(a, b) {
                    return Err(Error::NotFound(format!("fixed IDs {a:?} and {b:?} do not cross-intersect")));
                }
            }
        }
    }
    if fixed.iter().all(|f| f.is_none()) {
        return brute_force_m(inst, SearchMode::Smart);
    }
    let mut base = C::zero();
    for (i, f) in fixed.iter().enumerate() {
        if let Some(f) = f {
            base = add(&base, &inst.rank(i, f)?)?;
        }
    }
    let mut assigned = fixed.to_vec();
    let mut best = Best::new();
    complete(inst, &mut assigned, &base, &mut best)?;
    if best.value.is_none() {
        return Err(Error::NotFound(format!("no feasible completion for {p}")));
    }
    best.finish(p, SearchMode::Smart)
}

/// Sum of the open family sizes in the best completion of `fixed`.
///
/// With nothing fixed this is `M` itself.
pub fn constrained_best<C: CountScalar>(inst: &Instance<C>, fixed: &[Option<KSet>]) -> Result<C> {
    let all_open = fixed.iter().all(|f| f.is_none());
    let r = constrained_search(inst, fixed)?;
    if all_open {
        return Ok(r.max_sum);
    }
    let mut fixed_sum = C::zero();
    for (i, f) in fixed.iter().enumerate() {
        if let Some(f) = f {
            fixed_sum = add(&fixed_sum, &inst.rank(i, f)?)?;
        }
    }
    sub(&r.max_sum, &fixed_sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtremalClass {
    C1Only,
    C2Only,
    Both,
    Other,
}

impl fmt::Display for ExtremalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtremalClass::C1Only => "C1-only",
            ExtremalClass::C2Only => "C2-only",
            ExtremalClass::Both => "both",
            ExtremalClass::Other => "other",
        })
    }
}

impl Serialize for ExtremalClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Compares an extremal set against the two constructions.
pub fn class_of(p: &Params, extremal: &[SystemIds]) -> Result<ExtremalClass> {
    let c1 = construction1_ids(p)?;
    let c2 = construction2_ids(p)?;
    let has1 = extremal.contains(&c1);
    let has2 = extremal.contains(&c2);
    let others = extremal.iter().any(|s| *s != c1 && *s != c2);
    Ok(match (others, has1, has2) {
        (false, true, false) => ExtremalClass::C1Only,
        (false, false, true) => ExtremalClass::C2Only,
        (false, true, true) => ExtremalClass::Both,
        _ => ExtremalClass::Other,
    })
}

pub fn classify_extremal<C: CountScalar>(inst: &Instance<C>) -> Result<(ExtremalClass, SearchResult<C>)> {
    if inst.regime() != Regime::Mixed {
        return invalid(format!("{} is {}, classification needs the mixed regime", inst.params, inst.regime()));
    }
    let r = brute_force_m(inst, SearchMode::Smart)?;
    Ok((class_of(&inst.params, &r.extremal)?, r))
}

/// Whether every family of an extremal system is maximal: stepping any
/// single ID forward breaks some constrained pair.
pub fn is_locally_maximal(system: &SystemIds) -> bool {
    let p = &system.params;
    (0..p.t()).all(|i| match crate::lexset::succ(&system.ids[i]) {
        None => true,
        Some(next) => (0..p.t()).any(|j| p.constrained(i, j) && !cross_lex(&next, &system.ids[j])),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    G,
    F,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::G => "g",
            Target::F => "f",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow<C> {
    pub id: KSet,
    pub value: C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanTable<C> {
    pub target: Target,
    pub rows: Vec<ScanRow<C>>,
    pub max: C,
    pub argmax: Vec<KSet>,
}

/// Evaluates `g` over the maximal-pair family (mixed) or `f` over the
/// first range (nonmixed, mixed or general split), in order.
pub fn scan<C: CountScalar>(inst: &Instance<C>, target: Target) -> Result<ScanTable<C>> {
    let p = &inst.params;
    let regime = classify(p);
    let ids: Vec<KSet> = match (target, regime) {
        (Target::G, Regime::Mixed) => f23_iter(p)?,
        (Target::F, Regime::Nonmixed) => first_range(p, 1)?,
        (Target::F, r) if r.s().is_some() => first_range(p, r.s().unwrap())?,
        _ => return invalid(format!("no {target} scan in the {regime} regime")),
    };
    let mut rows = Vec::with_capacity(ids.len());
    for id in ids {
        let value = match (target, regime) {
            (Target::G, _) => g_mixed(inst, &id)?,
            (Target::F, Regime::Nonmixed) => f_nonmixed(inst, &id)?,
            (Target::F, r) => f_general(inst, r.s().unwrap(), &id)?,
        };
        rows.push(ScanRow { id, value });
    }
    let max = rows
        .iter()
        .map(|r| r.value.clone())
        .max()
        .ok_or_else(|| Error::NotFound(format!("empty {target} domain for {p}")))?;
    let argmax = rows.iter().filter(|r| r.value == max).map(|r| r.id.clone()).collect();
    Ok(ScanTable { target, rows, max, argmax })
}

fn first_range(p: &Params, s: usize) -> Result<Vec<KSet>> {
    let bounds = range_bounds(p, s, 0)?;
    let g = Ground::<u64>::new(p.n);
    let lo = g.rank(p.k(0), &bounds.0)?;
    let hi = g.rank(p.k(0), &bounds.1)?;
    if hi.saturating_sub(lo) as f64 > SCAN_BUDGET {
        return Err(Error::SizeGuard(format!("first range of {p} has {} IDs", hi - lo + 1)));
    }
    Ok(KRange::new(bounds.0, bounds.1).collect())
}
