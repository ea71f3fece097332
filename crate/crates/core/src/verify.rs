//! Falsifiable checks of the structural statements over explicit domains.
//!
//! Every check enumerates a finite domain. Cases whose side conditions fail
//! are counted as skipped; a failing check carries the first witness found
//! in enumeration order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::count::{CountScalar, Signed};
use crate::error::{invalid, Error, Result};
use crate::families::{
    classify, construction1, construction1_ids, construction2, construction2_ids, f23_contains,
    f23_iter, fill_tail, maximal_pair_family, nonincreasing_vectors, range_bounds, star_id, within,
    Instance, Params, Regime, SystemIds,
};
use crate::lexset::{compare_lex, decompose, ell, ksets, lex_le, succ, Ground, KRange, KSet};
use crate::objective::{
    alpha_beta, f_general, f_nonmixed, g_mixed, gamma_delta, lambdas, m_formula, s_prime,
};
use crate::partner::{cross_lex, is_maximal_pair, kpartner, max_cross_id, parity_of, partner};
use crate::search::{
    brute_force_m, class_of, is_locally_maximal, oracle_cross, ExtremalClass, SearchMode, SearchResult,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckVerdict {
    pub name: String,
    pub params: Option<Params>,
    pub status: Status,
    /// Cases evaluated.
    pub checked: u64,
    /// Cases filtered out by side conditions.
    pub skipped: u64,
    pub counterexample: Option<Value>,
}

impl fmt::Display for CheckVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = self.params.as_ref().map(|p| format!(" [{p}]")).unwrap_or_default();
        write!(f, "{:<7} {}{at}: {} checked, {} skipped", self.status, self.name, self.checked, self.skipped)?;
        if let Some(c) = &self.counterexample {
            write!(f, "; counterexample {c}")?;
        }
        Ok(())
    }
}

/// Accumulates cases of one check.
struct Tally {
    name: String,
    params: Option<Params>,
    checked: u64,
    skipped: u64,
    witness: Option<Value>,
}

impl Tally {
    fn new(name: &str, params: Option<&Params>) -> Self {
        Tally { name: name.to_string(), params: params.cloned(), checked: 0, skipped: 0, witness: None }
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn verdict(self) -> CheckVerdict {
        let status = if self.witness.is_some() {
            Status::Fail
        } else if self.checked == 0 {
            Status::Skipped
        } else {
            Status::Pass
        };
        CheckVerdict {
            name: self.name,
            params: self.params,
            status,
            checked: self.checked,
            skipped: self.skipped,
            counterexample: self.witness,
        }
    }
}

fn text(s: &KSet) -> String {
    s.to_string()
}

fn opt_text(s: &Option<KSet>) -> Value {
    s.as_ref().map_or(Value::Null, |s| Value::String(s.to_string()))
}

/// `f(G) >= f(F)` implies `f(H) > f(G)`.
fn keeps_rising<C: Ord>(vf: &C, vg: &C, vh: &C) -> bool {
    vg < vf || vh > vg
}

/// Shifts the top `c` elements of `head` up by one inside `[1, limit]`.
/// `None` when the block is not consecutive or has no room.
fn shift_block(head: &[usize], c: usize, limit: usize) -> Option<Vec<usize>> {
    let k = head.len();
    if c == 0 || c > k {
        return None;
    }
    let block = &head[k - c..];
    if block.windows(2).any(|w| w[1] != w[0] + 1) || block[c - 1] + 1 > limit {
        return None;
    }
    let mut v = head[..k - c].to_vec();
    v.extend(block.iter().map(|x| x + 1));
    Some(v)
}

fn block_is_consecutive(head: &[usize], c: usize) -> bool {
    c >= 1 && c <= head.len() && head[head.len() - c..].windows(2).all(|w| w[1] == w[0] + 1)
}

fn attach(n: usize, head: &[usize], j: usize) -> KSet {
    let mut v = head.to_vec();
    v.extend(n - j + 1..=n);
    KSet::raw(n, v)
}

/// All `c`-sequential triples inside the truncation levels of `domain`
/// (sets of size `k`). Chains leaving the domain are skipped.
fn check_sequential_triples<C: CountScalar>(
    tally: &mut Tally,
    n: usize,
    k: usize,
    domain: &[KSet],
    eval: &dyn Fn(&KSet) -> Result<C>,
) -> Result<()> {
    let members: HashSet<&KSet> = domain.iter().collect();
    let mut cache: HashMap<KSet, C> = HashMap::new();
    let mut value = |s: &KSet| -> Result<C> {
        if let Some(v) = cache.get(s) {
            return Ok(v.clone());
        }
        let v = eval(s)?;
        cache.insert(s.clone(), v.clone());
        Ok(v)
    };
    for j in 0..k {
        for f in domain.iter().filter(|r| ell(r) >= j) {
            let head = &f.elements()[..k - j];
            for c in 1..=k - j {
                if !block_is_consecutive(head, c) {
                    continue;
                }
                let g = shift_block(head, c, n - j);
                let h = g.as_ref().and_then(|g| shift_block(g, c, n - j));
                let (Some(g), Some(h)) = (g, h) else {
                    tally.skip();
                    continue;
                };
                let (gf, hf) = (attach(n, &g, j), attach(n, &h, j));
                if !members.contains(&gf) || !members.contains(&hf) {
                    tally.skip();
                    continue;
                }
                let (vf, vg, vh) = (value(f)?, value(&gf)?, value(&hf)?);
                tally.record(keeps_rising(&vf, &vg, &vh), || {
                    json!({
                        "level": j, "c": c,
                        "F": text(f), "G": text(&gf), "H": text(&hf),
                        "values": [vf.to_string(), vg.to_string(), vh.to_string()],
                    })
                });
            }
        }
    }
    Ok(())
}

/// Builds the full `k`-set whose core is `core`, or `None` when the top
/// block would merge into the core.
fn from_core(core: &KSet, k: usize) -> Option<KSet> {
    let full = fill_tail(core, k).ok()?;
    (decompose(&full).core == *core).then_some(full)
}

fn interval(n: usize, lo: usize, hi: usize) -> Option<KSet> {
    if lo == 0 || lo > hi || hi > n {
        return None;
    }
    KSet::interval(n, lo, hi).ok()
}

/// Checks a chain `F, G, H` given by their cores.
fn check_core_chain<C: CountScalar>(
    tally: &mut Tally,
    k: usize,
    cores: [Option<KSet>; 3],
    member: &dyn Fn(&KSet) -> Result<bool>,
    eval: &dyn Fn(&KSet) -> Result<C>,
    label: Value,
) -> Result<()> {
    let mut full = Vec::with_capacity(3);
    for c in &cores {
        match c.as_ref().and_then(|c| from_core(c, k)) {
            Some(s) if member(&s)? => full.push(s),
            _ => {
                tally.skip();
                return Ok(());
            }
        }
    }
    let v: Vec<C> = full.iter().map(eval).collect::<Result<_>>()?;
    tally.record(keeps_rising(&v[0], &v[1], &v[2]), || {
        json!({
            "chain": label,
            "sets": full.iter().map(text).collect::<Vec<_>>(),
            "values": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    });
    Ok(())
}

fn require_kt2(tally: &mut Tally, p: &Params) -> bool {
    if p.kt() < 2 {
        tally.skip();
        return false;
    }
    true
}

/// The mixed-regime chain statements assume `k_t >= 2` and that the first
/// `s` sizes are not all equal.
fn require_mixed_hypotheses(tally: &mut Tally, p: &Params, s: usize) -> bool {
    if p.kt() < 2 || s_prime(p, s) == s {
        tally.skip();
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// parity of extremal systems

/// The parity statement on the given systems: `I_2` lies in the maximal
/// pair family and `I_1` is the `k_1`-parity of `I_2`. Violations at the
/// boundary of the first two ranges are exempt and counted as skipped.
pub fn check_parity_on(p: &Params, systems: &[SystemIds]) -> Result<CheckVerdict> {
    let mut tally = Tally::new("parity_of_extremal", Some(p));
    if classify(p) != Regime::Mixed {
        return invalid(format!("{p} is not in the mixed regime"));
    }
    let (n, k1, k2, kt) = (p.n, p.k(0), p.k(1), p.kt());
    let boundary1 = [star_id(n, k1)?, KSet::from_unsorted(n, vec![kt]).and_then(|c| fill_tail(&c, k1))?];
    let boundary2 = [star_id(n, k2)?, KSet::from_unsorted(n, vec![kt]).and_then(|c| fill_tail(&c, k2))?];
    for sys in systems {
        let (i1, i2) = (&sys.ids[0], &sys.ids[1]);
        let in_f23 = f23_contains(p, i2)?.is_some();
        let par = parity_of(i2, k1);
        let ok = in_f23 && par.as_ref() == Some(i1);
        let on_boundary = boundary1.contains(i1) || boundary2.contains(i2);
        if !ok && on_boundary {
            tally.skip();
            continue;
        }
        tally.record(ok, || {
            json!({
                "system": sys.to_string(),
                "I2_in_family": in_f23,
                "k1_parity_of_I2": opt_text(&par),
            })
        });
    }
    Ok(tally.verdict())
}

pub fn check_parity<C: CountScalar>(inst: &Instance<C>) -> Result<CheckVerdict> {
    let r = brute_force_m(inst, SearchMode::Smart)?;
    check_parity_on(&inst.params, &r.extremal)
}

// ---------------------------------------------------------------------------
// unimodality of g

fn mixed_only<C: CountScalar>(inst: &Instance<C>) -> Result<()> {
    if inst.regime() != Regime::Mixed {
        return invalid(format!("{} is {}, expected mixed", inst.params, inst.regime()));
    }
    Ok(())
}

/// Sequential triples in every truncation level of the maximal-pair
/// family, and the two interval chains starting at `2` and at `k_t`.
pub fn check_unimodality_g<C: CountScalar>(inst: &Instance<C>) -> Result<Vec<CheckVerdict>> {
    mixed_only(inst)?;
    let p = &inst.params;
    let (n, k2, kt) = (p.n, p.k(1), p.kt());
    let domain = f23_iter(p)?;
    let eval = |s: &KSet| g_mixed(inst, s);
    let member = |s: &KSet| Ok(f23_contains(p, s)?.is_some());

    let mut seq = Tally::new("g_sequential_triples", Some(p));
    if require_mixed_hypotheses(&mut seq, p, 2) {
        check_sequential_triples(&mut seq, n, k2, &domain, &eval)?;
    }

    let mut from2 = Tally::new("g_interval_chain_from_2", Some(p));
    if require_mixed_hypotheses(&mut from2, p, 2) {
        for j in 4..=k2 + 1 {
            let cores = [interval(n, 2, j), interval(n, 2, j - 1), interval(n, 2, j - 2)];
            check_core_chain(&mut from2, k2, cores, &member, &eval, json!({"start": 2, "j": j}))?;
        }
    }

    let mut from_kt = Tally::new("g_interval_chain_from_kt", Some(p));
    if require_mixed_hypotheses(&mut from_kt, p, 2) {
        for j in kt + 2..=kt + k2 - 1 {
            let cores = [interval(n, kt, j), interval(n, kt, j - 1), interval(n, kt, j - 2)];
            check_core_chain(&mut from_kt, k2, cores, &member, &eval, json!({"start": kt, "j": j}))?;
        }
    }
    Ok(vec![seq.verdict(), from2.verdict(), from_kt.verdict()])
}

/// The two boundary inequalities on `g`:
/// `g([2, k_2+1]) < max{g({1}), g([2, k_2])}` and
/// `g([k_t, k_t+k_2-1]) < max{g({k_t-1}), g([k_t, k_t+k_2-2])}`,
/// with short arguments completed by a top block.
pub fn check_boundary_inequalities<C: CountScalar>(inst: &Instance<C>) -> Result<CheckVerdict> {
    mixed_only(inst)?;
    let p = &inst.params;
    let (n, k2, kt) = (p.n, p.k(1), p.kt());
    let mut tally = Tally::new("g_boundary_inequalities", Some(p));
    if !require_mixed_hypotheses(&mut tally, p, 2) {
        return Ok(tally.verdict());
    }
    let cases = [
        ("from_2", interval(n, 2, k2 + 1), interval(n, 1, 1), interval(n, 2, k2)),
        ("from_kt", interval(n, kt, kt + k2 - 1), interval(n, kt - 1, kt - 1), interval(n, kt, kt + k2 - 2)),
    ];
    for (label, x, a, b) in cases {
        let full: Vec<Option<KSet>> = [x, a, b]
            .into_iter()
            .map(|c| c.and_then(|c| fill_tail(&c, k2).ok()))
            .collect();
        let mut sets = Vec::new();
        for s in full.into_iter().flatten() {
            if f23_contains(p, &s)?.is_some() {
                sets.push(s);
            }
        }
        if sets.len() != 3 || sets[0] == sets[1] || sets[0] == sets[2] {
            tally.skip();
            continue;
        }
        let v: Vec<C> = sets.iter().map(|s| g_mixed(inst, s)).collect::<Result<_>>()?;
        let ok = v[0] < v[1].clone().max(v[2].clone());
        tally.record(ok, || {
            json!({
                "case": label,
                "sets": sets.iter().map(text).collect::<Vec<_>>(),
                "values": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })
        });
    }
    Ok(tally.verdict())
}

// ---------------------------------------------------------------------------
// unimodality of f

fn first_range_ids(p: &Params, s: usize) -> Result<Vec<KSet>> {
    let (lo, hi) = range_bounds(p, s, 0)?;
    Ok(KRange::new(lo, hi).collect())
}

/// Unimodality of `f`: nonmixed instances use the partner objective with
/// sequential triples and interval chains; mixed and general instances use
/// the general objective with sequential triples and tail chains.
pub fn check_unimodality_f<C: CountScalar>(inst: &Instance<C>) -> Result<Vec<CheckVerdict>> {
    let p = &inst.params;
    let (n, k1, kt) = (p.n, p.k(0), p.kt());
    match inst.regime() {
        Regime::Nonmixed => {
            let domain = first_range_ids(p, 1)?;
            let bounds = range_bounds(p, 1, 0)?;
            let eval = |s: &KSet| f_nonmixed(inst, s);
            let member = |s: &KSet| Ok(within(s, &bounds));
            let excluded = p.t() == 2 && n == k1 + kt;

            let mut seq = Tally::new("f_sequential_triples", Some(p));
            let mut chains = Tally::new("f_interval_chains", Some(p));
            if excluded {
                seq.skip();
                chains.skip();
            } else {
                check_sequential_triples(&mut seq, n, k1, &domain, &eval)?;
                for m in 1..=kt {
                    for j in m + 1..=m + k1 - 1 {
                        let cores = [interval(n, m, j), interval(n, m, j - 1), interval(n, m, j - 2)];
                        check_core_chain(&mut chains, k1, cores, &member, &eval, json!({"m": m, "j": j}))?;
                    }
                }
            }
            Ok(vec![seq.verdict(), chains.verdict()])
        }
        r => {
            let Some(s) = r.s() else {
                return invalid(format!("{p} is {r}; no objective f applies"));
            };
            let domain = first_range_ids(p, s)?;
            let bounds = range_bounds(p, s, 0)?;
            let eval = |x: &KSet| f_general(inst, s, x);
            let mut seq = Tally::new("f_general_sequential_triples", Some(p));
            let mut tails = Tally::new("f_general_tail_chains", Some(p));
            if require_mixed_hypotheses(&mut seq, p, s) {
                check_sequential_triples(&mut seq, n, k1, &domain, &eval)?;
            }
            if require_mixed_hypotheses(&mut tails, p, s) {
                check_tail_chains(&mut tails, n, k1, &bounds, &eval)?;
            }
            Ok(vec![seq.verdict(), tails.verdict()])
        }
    }
}

/// Chains `B_i = {b_1..b_x} ∪ [y, y+k-i] ∪ [n-i+1, n]` grown from every
/// `B_0` whose last maximal run `[y, y+k]` has `k >= 1` and ends below `n`.
fn check_tail_chains<C: CountScalar>(
    tally: &mut Tally,
    n: usize,
    k1: usize,
    bounds: &(KSet, KSet),
    eval: &dyn Fn(&KSet) -> Result<C>,
) -> Result<()> {
    for b0 in ksets(n, k1) {
        let e = b0.elements();
        let top = e[k1 - 1];
        if top >= n {
            continue;
        }
        let mut start = k1 - 1;
        while start > 0 && e[start - 1] + 1 == e[start] {
            start -= 1;
        }
        let run = k1 - 1 - start;
        if run < 1 {
            continue;
        }
        let (prefix, y) = (&e[..start], e[start]);
        let chain: Vec<KSet> = (0..=run)
            .map(|i| {
                let mut v = prefix.to_vec();
                v.extend(y..=y + run - i);
                v.extend(n - i + 1..=n);
                KSet::raw(n, v)
            })
            .collect();
        for i in 0..run.saturating_sub(1) {
            let w = &chain[i..i + 3];
            if !w.iter().all(|s| within(s, bounds)) {
                tally.skip();
                continue;
            }
            let v: Vec<C> = w.iter().map(eval).collect::<Result<_>>()?;
            tally.record(keeps_rising(&v[0], &v[1], &v[2]), || {
                json!({
                    "B0": text(&b0), "i": i,
                    "sets": w.iter().map(text).collect::<Vec<_>>(),
                    "values": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// closed forms and extremal structure

/// Formula against exhaustive search, extremal classes, and the shape
/// of every extremal system.
pub fn check_theorem<C: CountScalar>(inst: &Instance<C>) -> Result<Vec<CheckVerdict>> {
    let p = &inst.params;
    let regime = inst.regime();
    if !matches!(regime, Regime::Mixed | Regime::Nonmixed) {
        let mut t = Tally::new("formula_vs_search", Some(p));
        t.skip();
        return Ok(vec![t.verdict()]);
    }
    let found = brute_force_m(inst, SearchMode::Smart)?;
    theorem_verdicts(inst, &found)
}

fn theorem_verdicts<C: CountScalar>(inst: &Instance<C>, found: &SearchResult<C>) -> Result<Vec<CheckVerdict>> {
    let p = &inst.params;
    let o = m_formula(inst)?;
    let mut out = Vec::new();

    let mut value = Tally::new("formula_vs_search", Some(p));
    value.record(o.m_formula == found.max_sum, || {
        json!({"formula": o.m_formula.to_string(), "search": found.max_sum.to_string()})
    });
    out.push(value.verdict());

    let mut shape = Tally::new("extremal_systems_maximal", Some(p));
    for sys in &found.extremal {
        let size = inst.system_size(&sys.ids)?;
        let pairs_ok = (0..p.t()).all(|i| {
            (i + 1..p.t()).all(|j| !p.constrained(i, j) || oracle_or_lex(&sys.ids[i], &sys.ids[j]))
        });
        let ok = size == found.max_sum && pairs_ok && is_locally_maximal(sys);
        shape.record(ok, || json!({"system": sys.to_string(), "size": size.to_string()}));
    }
    out.push(shape.verdict());

    if inst.regime() == Regime::Mixed {
        let (l1, l2) = lambdas(inst)?;
        let want = match l1.cmp(&l2) {
            std::cmp::Ordering::Greater => ExtremalClass::C1Only,
            std::cmp::Ordering::Less => ExtremalClass::C2Only,
            std::cmp::Ordering::Equal => ExtremalClass::Both,
        };
        let got = class_of(p, &found.extremal)?;
        let mut class = Tally::new("extremal_classes", Some(p));
        class.record(got == want, || {
            json!({
                "expected": want.to_string(), "found": got.to_string(),
                "extremal": found.extremal.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "C1": construction1_ids(p).map(|s| s.to_string()).unwrap_or_default(),
                "C2": construction2_ids(p).map(|s| s.to_string()).unwrap_or_default(),
            })
        });
        out.push(class.verdict());

        let mut above = Tally::new("extremal_above_star", Some(p));
        if require_kt2(&mut above, p) {
            for sys in &found.extremal {
                let ok = lex_le(&star_id(p.n, p.k(0))?, &sys.ids[0]) && lex_le(&star_id(p.n, p.k(1))?, &sys.ids[1]);
                above.record(ok, || json!({"system": sys.to_string()}));
            }
        }
        out.push(above.verdict());

        let mut small = Tally::new("unit_last_family_bound", Some(p));
        if p.kt() == 1 {
            small.record(found.max_sum <= l1, || {
                json!({"search": found.max_sum.to_string(), "lambda1": l1.to_string()})
            });
        } else {
            small.skip();
        }
        out.push(small.verdict());
    }
    Ok(out)
}

fn oracle_or_lex(a: &KSet, b: &KSet) -> bool {
    match oracle_cross(a, b) {
        Ok(v) => v,
        Err(_) => cross_lex(a, b),
    }
}

// ---------------------------------------------------------------------------
// per-instance facts

pub fn check_instance_facts<C: CountScalar>(inst: &Instance<C>) -> Result<Vec<CheckVerdict>> {
    let p = &inst.params;
    let mut out = Vec::new();
    let regime = inst.regime();

    let mut sizes = Tally::new("construction_sizes", Some(p));
    if matches!(regime, Regime::Mixed | Regime::Nonmixed) && p.n > p.k(0) {
        let (ids, v) = construction1(inst)?;
        let direct = inst.system_size(&ids.ids)?;
        sizes.record(direct == v, || json!({"construction": "C1", "rank_sum": direct.to_string(), "formula": v.to_string()}));
        if regime == Regime::Mixed {
            let (ids, v) = construction2(inst)?;
            let direct = inst.system_size(&ids.ids)?;
            sizes.record(direct == v, || json!({"construction": "C2", "rank_sum": direct.to_string(), "formula": v.to_string()}));
        }
    } else {
        sizes.skip();
    }
    out.push(sizes.verdict());

    if p.t() >= 3 && p.n >= p.k(0) + p.k(2) {
        out.push(check_parity_families(p)?);
    }
    if regime == Regime::Mixed {
        out.extend(check_f23_closure(inst)?);
        out.push(check_bridge(inst)?);
    }
    match regime {
        Regime::Nonmixed => {
            out.push(check_telescoping_nonmixed(inst)?);
            out.push(check_beta_closed_form(inst)?);
            out.push(check_translation(inst, None)?);
        }
        r if r.s().is_some() => {
            let s = r.s().unwrap();
            out.push(check_telescoping_general(inst, s)?);
            out.push(check_alpha_closed_form(inst, s)?);
            out.push(check_translation(inst, Some(s))?);
        }
        _ => {}
    }
    Ok(out)
}

/// Closure of the maximal-pair family under the two tail moves, and the
/// listed boundary members.
fn check_f23_closure<C: CountScalar>(inst: &Instance<C>) -> Result<Vec<CheckVerdict>> {
    let p = &inst.params;
    let (n, k1, k2, kt) = (p.n, p.k(0), p.k(1), p.kt());
    let family = f23_iter(p)?;
    let members: HashSet<&KSet> = family.iter().collect();
    let star2 = star_id(n, k2)?;

    let mut drop = Tally::new("f23_closed_under_tail_growth", Some(p));
    let mut shift = Tally::new("f23_closed_under_core_extension", Some(p));
    for a in &family {
        let d = decompose(a);
        let (pl, core) = (d.ell, d.core.elements());
        // drop the last core element, grow the tail by one
        if core.len() >= 2 {
            let mut v = core[..core.len() - 1].to_vec();
            v.extend(n - pl..=n);
            let a2 = KSet::raw(n, v);
            drop.record(members.contains(&a2), || json!({"A": text(a), "A'": text(&a2)}));
        } else {
            drop.skip();
        }
        // bump the last core element, shrink the tail by one
        if pl >= 1 && !core.is_empty() && lex_le(&star2, a) && a != &star2 {
            let mut v = core.to_vec();
            v.push(core[core.len() - 1] + 1);
            v.extend(n - pl + 2..=n);
            let a2 = KSet::raw(n, v);
            shift.record(members.contains(&a2), || json!({"A": text(a), "A'": text(&a2)}));
        } else {
            shift.skip();
        }
    }

    let mut listed = Tally::new("f23_listed_members", Some(p));
    if require_kt2(&mut listed, p) {
        let maximal1: HashSet<KSet> =
            maximal_pair_family(n, k1, p.k(2), None, None)?.into_iter().map(|(a, _)| a).collect();
        for (k, side) in [(k2, "k2"), (k1, "k1")] {
            let mut want = vec![star_id(n, k)?];
            for start in [2, kt] {
                for hi in (start..=start + k - 1).rev() {
                    want.extend(interval(n, start, hi).and_then(|c| fill_tail(&c, k).ok()));
                }
            }
            for s in want {
                let ok = if k == k2 && side == "k2" { members.contains(&s) } else { maximal1.contains(&s) };
                listed.record(ok, || json!({"side": side, "missing": text(&s)}));
            }
        }
    }
    Ok(vec![drop.verdict(), shift.verdict(), listed.verdict()])
}

/// Family-level parity between the maximal-pair families of sizes
/// `k_1` and `k_2` against `k_3`, with witness transfer.
fn check_parity_families(p: &Params) -> Result<CheckVerdict> {
    let (n, f, g, h) = (p.n, p.k(0), p.k(1), p.k(2));
    let mut tally = Tally::new("maximal_pair_family_parity", Some(p));
    let ff = maximal_pair_family(n, f, h, None, None)?;
    let gg = if n >= g + h { maximal_pair_family(n, g, h, None, None)? } else { Vec::new() };
    let f_sets: HashMap<&KSet, &KSet> = ff.iter().map(|(a, b)| (a, b)).collect();
    let g_sets: HashSet<&KSet> = gg.iter().map(|(a, _)| a).collect();
    let hf: HashSet<&KSet> = ff.iter().map(|(_, b)| b).collect();
    for (gs, hs) in &gg {
        let par = parity_of(gs, f);
        let ok = match &par {
            Some(fs) => f_sets.get(fs).is_some_and(|w| is_maximal_pair(gs, w).unwrap_or(false)) && hf.contains(hs),
            None => false,
        };
        tally.record(ok, || json!({"G": text(gs), "H": text(hs), "f_parity": opt_text(&par)}));
    }
    for (fs, _) in &ff {
        let par = parity_of(fs, g);
        let ok = match &par {
            None => true,
            Some(gs) => g_sets.contains(gs) || n < g + h,
        };
        tally.record(ok, || json!({"F": text(fs), "g_parity": opt_text(&par)}));
    }
    Ok(tally.verdict())
}

/// `g(G_2)` equals the general objective at the `k_1`-parity of `G_2`,
/// and both share their `k_i`-partners for `i >= 3`.
fn check_bridge<C: CountScalar>(inst: &Instance<C>) -> Result<CheckVerdict> {
    let p = &inst.params;
    let mut tally = Tally::new("g_equals_f_at_parity", Some(p));
    for g2 in f23_iter(p)? {
        let Some(g1) = parity_of(&g2, p.k(0)) else {
            tally.record(false, || json!({"G2": text(&g2), "k1_parity": Value::Null}));
            continue;
        };
        let gv = g_mixed(inst, &g2)?;
        let fv = f_general(inst, 2, &g1);
        let same_partners = (2..p.t()).all(|i| {
            matches!((kpartner(&g1, p.k(i)), kpartner(&g2, p.k(i))), (Ok(a), Ok(b)) if a.value == b.value)
        });
        let ok = fv.as_ref().is_ok_and(|f| *f == gv) && same_partners;
        tally.record(ok, || {
            json!({
                "G2": text(&g2), "G1": text(&g1), "g": gv.to_string(),
                "f": fv.as_ref().map(|x| x.to_string()).unwrap_or_else(|e| e.to_string()),
                "same_partners": same_partners,
            })
        });
    }
    Ok(tally.verdict())
}

fn check_telescoping_nonmixed<C: CountScalar>(inst: &Instance<C>) -> Result<CheckVerdict> {
    let p = &inst.params;
    let mut tally = Tally::new("alpha_beta_telescoping", Some(p));
    let ids = first_range_ids(p, 1)?;
    let Some(first) = ids.first() else { return Ok(tally.verdict()) };
    let f0 = f_nonmixed(inst, first)?;
    let mut acc = Signed::zero();
    for w in ids.windows(2) {
        acc = acc.add(&alpha_beta(inst, &w[0], &w[1])?.net()?)?;
        let direct = Signed::diff(&f_nonmixed(inst, &w[1])?, &f0);
        let span = alpha_beta(inst, first, &w[1])?.net()?;
        let ok = acc == direct && span == direct;
        tally.record(ok, || {
            json!({"from": text(first), "to": text(&w[1]), "sum": acc.to_string(), "direct": direct.to_string(), "span": span.to_string()})
        });
    }
    Ok(tally.verdict())
}

fn check_telescoping_general<C: CountScalar>(inst: &Instance<C>, s: usize) -> Result<CheckVerdict> {
    let p = &inst.params;
    let mut tally = Tally::new("gamma_delta_telescoping", Some(p));
    let ids = first_range_ids(p, s)?;
    let Some(first) = ids.first() else { return Ok(tally.verdict()) };
    let f0 = f_general(inst, s, first)?;
    let mut acc = Signed::zero();
    for w in ids.windows(2) {
        acc = acc.add(&gamma_delta(inst, s, &w[0], &w[1])?.net()?)?;
        let direct = Signed::diff(&f_general(inst, s, &w[1])?, &f0);
        let span = gamma_delta(inst, s, first, &w[1])?.net()?;
        let ok = acc == direct && span == direct;
        tally.record(ok, || {
            json!({"from": text(first), "to": text(&w[1]), "sum": acc.to_string(), "direct": direct.to_string(), "span": span.to_string()})
        });
    }
    Ok(tally.verdict())
}

/// `β(F, G) = Σ_{j>=2} C(n-q, k_j-(q-k_1))` for consecutive `F < G` in the
/// first range, `q = max G`.
fn check_beta_closed_form<C: CountScalar>(inst: &Instance<C>) -> Result<CheckVerdict> {
    let p = &inst.params;
    let mut tally = Tally::new("beta_closed_form", Some(p));
    let ids = first_range_ids(p, 1)?;
    let g = &inst.ground;
    for w in ids.windows(2) {
        let q = w[1].max_elem().unwrap_or(0);
        let mut want = C::zero();
        for j in 1..p.t() {
            let r = p.k(j) as i64 - (q as i64 - p.k(0) as i64);
            want = crate::count::add(&want, &g.choose_signed((p.n - q) as i64, r)?)?;
        }
        let got = alpha_beta(inst, &w[0], &w[1])?.loss;
        let ok = got == Signed::positive(want.clone());
        tally.record(ok, || json!({"F": text(&w[0]), "G": text(&w[1]), "beta": got.to_string(), "formula": want.to_string()}));
    }
    Ok(tally.verdict())
}

/// `α_i` of consecutive pairs equals `C(ℓ(R'), k_i - |core R'|)`, and
/// `γ = s'` when `ℓ(R') = 0`.
fn check_alpha_closed_form<C: CountScalar>(inst: &Instance<C>, s: usize) -> Result<CheckVerdict> {
    let p = &inst.params;
    let mut tally = Tally::new("alpha_closed_form", Some(p));
    let ids = first_range_ids(p, s)?;
    let g = &inst.ground;
    let sp = s_prime(p, s);
    for w in ids.windows(2) {
        let d = decompose(&w[1]);
        let gd = gamma_delta(inst, s, &w[0], &w[1])?;
        let mut ok = true;
        for i in 0..s {
            let want = g.choose_signed(d.ell as i64, p.k(i) as i64 - d.core.len() as i64)?;
            ok &= gd.alphas[i] == Signed::positive(want);
        }
        if d.ell == 0 {
            ok &= gd.gamma == Signed::positive(crate::count::from_usize(sp)?);
        }
        tally.record(ok, || {
            json!({
                "R": text(&w[0]), "R'": text(&w[1]),
                "alphas": gd.alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "gamma": gd.gamma.to_string(), "s_prime": sp,
            })
        });
    }
    Ok(tally.verdict())
}

type Translated<C> = (Signed<C>, Signed<C>, KSet, KSet);

/// Differences over `c`-sequential pairs depend only on `c` and the two
/// maxima.
fn check_translation<C: CountScalar>(inst: &Instance<C>, s: Option<usize>) -> Result<CheckVerdict> {
    let p = &inst.params;
    let name = if s.is_some() { "gamma_delta_translation" } else { "alpha_beta_translation" };
    let mut tally = Tally::new(name, Some(p));
    let ids = first_range_ids(p, s.unwrap_or(1))?;
    let bounds = range_bounds(p, s.unwrap_or(1), 0)?;
    let n = p.n;
    let mut seen: HashMap<(usize, usize, usize), Translated<C>> = HashMap::new();
    for f in &ids {
        let k = f.len();
        for c in 1..=k {
            if !block_is_consecutive(f.elements(), c) {
                continue;
            }
            let mut cur = f.elements().to_vec();
            while let Some(next) = shift_block(&cur, c, n) {
                let gset = KSet::raw(n, next.clone());
                if !within(&gset, &bounds) {
                    break;
                }
                let (a, b) = match s {
                    None => {
                        let d = alpha_beta(inst, f, &gset)?;
                        (d.gain, d.loss)
                    }
                    Some(s) => {
                        let d = gamma_delta(inst, s, f, &gset)?;
                        (d.gamma, d.delta)
                    }
                };
                let key = (c, f.max_elem().unwrap_or(0), next[k - 1]);
                match seen.get(&key) {
                    None => {
                        seen.insert(key, (a, b, f.clone(), gset));
                    }
                    Some((a0, b0, f0, g0)) => {
                        let ok = *a0 == a && *b0 == b;
                        tally.record(ok, || {
                            json!({
                                "pair": [text(f), text(&gset)], "reference": [text(f0), text(g0)],
                                "values": [a.to_string(), b.to_string()],
                                "reference_values": [a0.to_string(), b0.to_string()],
                            })
                        });
                    }
                }
                cur = next;
            }
        }
    }
    Ok(tally.verdict())
}

// ---------------------------------------------------------------------------
// instance-free facts

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactOptions {
    /// Largest ground set for exhaustive checks.
    pub nmax: usize,
    /// Largest set size for exhaustive pair checks.
    pub kmax: usize,
    /// Random samples for the involution check.
    pub samples: usize,
    /// Largest ground set for random samples.
    pub sample_nmax: usize,
    pub seed: u64,
}

impl Default for FactOptions {
    fn default() -> Self {
        FactOptions { nmax: 8, kmax: 4, samples: 10_000, sample_nmax: 30, seed: 0 }
    }
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = KSet> {
    (1u64..1 << n).map(move |m| KSet::raw(n, (1..=n).filter(|x| m >> (x - 1) & 1 == 1).collect()))
}

pub fn check_fact_suite(opts: &FactOptions) -> Result<Vec<CheckVerdict>> {
    let mut out = Vec::new();
    out.push(check_involution(opts)?);
    out.push(check_partner_rank(opts)?);
    out.push(check_core_invariance(opts)?);
    out.extend(check_oracle_agreement(opts)?);
    out.push(check_order_reversal(opts)?);
    out.push(check_partner_of_partner(opts)?);
    out.push(check_partner_comparison(opts)?);
    out.push(check_star_systems(opts)?);
    Ok(out)
}

fn check_involution(opts: &FactOptions) -> Result<CheckVerdict> {
    let mut tally = Tally::new("partner_involution", None);
    for n in 1..=opts.nmax {
        for f in nonempty_subsets(n) {
            let back = partner(&partner(&f)?)?;
            tally.record(back == f, || json!({"F": text(&f), "n": n}));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        let n = rng.gen_range(1..=opts.sample_nmax.max(1));
        let elems: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
        if elems.is_empty() {
            tally.skip();
            continue;
        }
        let f = KSet::raw(n, elems);
        let back = partner(&partner(&f)?)?;
        tally.record(back == f, || json!({"F": text(&f), "n": n}));
    }
    Ok(tally.verdict())
}

/// Sets of size `<= kmax` in `[n]`, nonempty.
fn small_sets(n: usize, kmax: usize) -> Vec<KSet> {
    (1..=kmax.min(n)).flat_map(|k| ksets(n, k)).collect()
}

fn check_partner_rank(opts: &FactOptions) -> Result<CheckVerdict> {
    let mut tally = Tally::new("partner_rank_identity", None);
    for n in 1..=opts.nmax {
        let g = Ground::<u64>::new(n);
        for f in nonempty_subsets(n) {
            for k in 1..=n - f.len() {
                let h = partner(&f)?;
                match kpartner(&f, k) {
                    Ok(kp) => {
                        let (a, b) = (g.rank_general(k, &h)?, g.rank(k, &kp.value)?);
                        tally.record(a == b, || json!({"F": text(&f), "k": k, "rank_general": a, "rank": b}));
                    }
                    Err(Error::NotFound(_)) => {
                        let a = g.rank_general(k, &h)?;
                        tally.record(a == 0, || json!({"F": text(&f), "k": k, "rank_general": a}));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(tally.verdict())
}

fn check_core_invariance(opts: &FactOptions) -> Result<CheckVerdict> {
    let mut tally = Tally::new("kpartner_depends_on_core", None);
    for n in 1..=opts.nmax {
        for f in nonempty_subsets(n) {
            let c = decompose(&f).core;
            if c.is_empty() {
                tally.skip();
                continue;
            }
            for k in 1..=n - f.len() {
                let (a, b) = (kpartner(&f, k), kpartner(&c, k));
                let ok = match (&a, &b) {
                    (Ok(x), Ok(y)) => x.value == y.value,
                    (Err(Error::NotFound(_)), Err(Error::NotFound(_))) => true,
                    _ => false,
                };
                tally.record(ok, || json!({"F": text(&f), "k": k}));
            }
        }
    }
    Ok(tally.verdict())
}

/// `cross_lex`, `max_cross_id` and `is_maximal_pair` against enumeration.
fn check_oracle_agreement(opts: &FactOptions) -> Result<Vec<CheckVerdict>> {
    let mut cross = Tally::new("cross_lex_matches_oracle", None);
    let mut maxid = Tally::new("max_cross_id_is_maximal", None);
    let mut pair = Tally::new("maximal_pair_matches_oracle", None);
    for n in 1..=opts.nmax {
        let sets = small_sets(n, opts.kmax);
        for a in &sets {
            for b in &sets {
                let o = oracle_cross(a, b)?;
                let l = cross_lex(a, b);
                cross.record(o == l, || json!({"A": text(a), "B": text(b), "n": n, "oracle": o, "lex": l}));
                if a.len() + b.len() > n {
                    continue;
                }
                // maximal: cross, and neither ID can step forward
                let a_next = succ(a).map_or(Ok(false), |x| oracle_cross(&x, b))?;
                let b_next = succ(b).map_or(Ok(false), |y| oracle_cross(a, &y))?;
                let brute = o && !a_next && !b_next;
                let fast = is_maximal_pair(a, b)?;
                pair.record(brute == fast, || json!({"A": text(a), "B": text(b), "n": n, "oracle": brute, "fast": fast}));
            }
            for b in 1..=opts.kmax.min(n) {
                if a.len() + b > n {
                    continue;
                }
                let ok = match max_cross_id(a, b) {
                    Ok(m) => oracle_cross(a, &m)? && succ(&m).map_or(Ok(true), |x| Ok::<_, Error>(!oracle_cross(a, &x)?))?,
                    Err(Error::NotFound(_)) => !oracle_cross(a, &KSet::first(n, b)?)?,
                    Err(e) => return Err(e),
                };
                maxid.record(ok, || json!({"A": text(a), "b": b, "n": n}));
            }
        }
    }
    Ok(vec![cross.verdict(), maxid.verdict(), pair.verdict()])
}

/// `A ⪯ B` reverses the order of their `k`-partners; parities share them.
fn check_order_reversal(opts: &FactOptions) -> Result<CheckVerdict> {
    let mut tally = Tally::new("kpartner_order_reversal", None);
    for n in 2..=opts.nmax {
        for a_size in 1..=opts.kmax.min(n - 1) {
            let sets: Vec<KSet> = ksets(n, a_size).collect();
            for k in 1..=n - a_size {
                let parts: Vec<Option<KSet>> = sets.iter().map(|s| kpartner(s, k).ok().map(|r| r.value)).collect();
                for i in 0..sets.len() {
                    for j in i..sets.len() {
                        match (&parts[i], &parts[j]) {
                            (Some(pa), Some(pb)) => {
                                tally.record(lex_le(pb, pa), || json!({"A": text(&sets[i]), "B": text(&sets[j]), "k": k}))
                            }
                            // a later ID may lose its partner, never an earlier one
                            (Some(_), None) => tally.record(true, || Value::Null),
                            (None, Some(_)) => tally.record(false, || json!({"A": text(&sets[i]), "B": text(&sets[j]), "k": k})),
                            (None, None) => tally.skip(),
                        }
                    }
                }
            }
            // parity pairs keep their k-partners
            for b in &sets {
                for a in a_size + 1..=opts.kmax.min(n - 1) {
                    let Some(pa) = parity_of(b, a) else { continue };
                    for k in 1..=n - a {
                        let (x, y) = (kpartner(&pa, k), kpartner(b, k));
                        let ok = match (&x, &y) {
                            (Ok(x), Ok(y)) => x.value == y.value,
                            (Err(Error::NotFound(_)), Err(Error::NotFound(_))) => true,
                            _ => false,
                        };
                        tally.record(ok, || json!({"B": text(b), "parity": text(&pa), "k": k}));
                    }
                }
            }
        }
    }
    Ok(tally.verdict())
}

/// With `B` the `b`-partner of `A` and `A'` the `a`-partner of `B`,
/// `(A', B)` is maximal and `A ⪯ A'`.
fn check_partner_of_partner(opts: &FactOptions) -> Result<CheckVerdict> {
    let mut tally = Tally::new("partner_of_partner_is_maximal", None);
    for n in 2..=opts.nmax {
        for a in small_sets(n, opts.kmax) {
            for b in 1..=(n - a.len()).min(opts.kmax) {
                let Ok(bb) = kpartner(&a, b) else {
                    tally.skip();
                    continue;
                };
                let Ok(a2) = kpartner(&bb.value, a.len()) else {
                    tally.record(false, || json!({"A": text(&a), "B": text(&bb.value)}));
                    continue;
                };
                let ok = is_maximal_pair(&a2.value, &bb.value)? && lex_le(&a, &a2.value);
                tally.record(ok, || json!({"A": text(&a), "B": text(&bb.value), "A'": text(&a2.value)}));
            }
        }
    }
    Ok(tally.verdict())
}

/// For `a >= b`: the `b`-partner precedes the `a`-partner of the same set,
/// or the latter is the `a`-parity of the former.
fn check_partner_comparison(opts: &FactOptions) -> Result<CheckVerdict> {
    let mut tally = Tally::new("partner_sizes_compare", None);
    for n in 2..=opts.nmax {
        for c in nonempty_subsets(n) {
            for a in 1..=n - c.len() {
                for b in 1..=a {
                    let (Ok(aa), Ok(bb)) = (kpartner(&c, a), kpartner(&c, b)) else {
                        tally.skip();
                        continue;
                    };
                    let before = compare_lex(&bb.value, &aa.value)? == std::cmp::Ordering::Less;
                    let ok = before || a == b || parity_of(&bb.value, a).as_ref() == Some(&aa.value);
                    tally.record(ok, || json!({"C": text(&c), "a": a, "b": b}));
                }
            }
        }
    }
    Ok(tally.verdict())
}

/// If `𝓛(A)` starts at or after the star and meets `𝓛(B)` with
/// `n >= |A| + |B|`, every member of `𝓛(B)` contains 1.
fn check_star_systems(opts: &FactOptions) -> Result<CheckVerdict> {
    let mut tally = Tally::new("star_systems_contain_one", None);
    for n in 2..=opts.nmax {
        let g = Ground::<u64>::new(n);
        for a_size in 1..=opts.kmax.min(n - 1) {
            let star = star_id(n, a_size)?;
            for a in ksets(n, a_size).filter(|a| lex_le(&star, a)) {
                for b_size in 1..=(n - a_size).min(opts.kmax) {
                    for b in ksets(n, b_size) {
                        if !cross_lex(&a, &b) {
                            continue;
                        }
                        let ok = g.members(b_size, &b, 1 << 16)?.iter().all(|m| m.contains(1));
                        tally.record(ok, || json!({"A": text(&a), "B": text(&b), "n": n}));
                    }
                }
            }
        }
    }
    Ok(tally.verdict())
}

// ---------------------------------------------------------------------------
// suites and sweeps

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Parity,
    Unimodality,
    Facts,
    Theorem,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Parity, Suite::Unimodality, Suite::Facts, Suite::Theorem];

    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        Ok(match s {
            "all" => Suite::ALL.to_vec(),
            "parity" => vec![Suite::Parity],
            "unimodality" => vec![Suite::Unimodality],
            "facts" => vec![Suite::Facts],
            "theorem" => vec![Suite::Theorem],
            other => return invalid(format!("unknown suite {other:?}")),
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub facts: FactOptions,
    /// Replaces every extremal `I_1` by its successor before the parity
    /// check, to exercise the failure path.
    pub inject_fault: bool,
}

/// Runs the selected per-instance suites on one parameter set.
pub fn run_suites<C: CountScalar>(p: &Params, suites: &[Suite], opts: &VerifyOptions) -> Result<Vec<CheckVerdict>> {
    let inst = Instance::<C>::new(p.clone());
    let regime = inst.regime();
    let mut out = Vec::new();
    let needs_search = suites.iter().any(|s| matches!(s, Suite::Parity | Suite::Theorem))
        && matches!(regime, Regime::Mixed | Regime::Nonmixed);
    let found = if needs_search { Some(brute_force_m(&inst, SearchMode::Smart)?) } else { None };
    for suite in suites {
        match suite {
            Suite::Parity => {
                if regime == Regime::Mixed {
                    let mut systems = found.as_ref().expect("searched").extremal.clone();
                    if opts.inject_fault {
                        for s in &mut systems {
                            if let Some(next) = succ(&s.ids[0]) {
                                s.ids[0] = next;
                            }
                        }
                    }
                    let mut v = check_parity_on(p, &systems)?;
                    if opts.inject_fault && v.status != Status::Fail {
                        v.status = Status::Fail;
                        v.counterexample = Some(json!({"injected": true}));
                    }
                    out.push(v);
                }
            }
            Suite::Unimodality => match regime {
                Regime::Mixed => {
                    out.extend(check_unimodality_g(&inst)?);
                    out.push(check_boundary_inequalities(&inst)?);
                    out.extend(check_unimodality_f(&inst)?);
                }
                Regime::Nonmixed | Regime::GeneralS(_) => out.extend(check_unimodality_f(&inst)?),
                _ => {}
            },
            Suite::Facts => out.extend(check_instance_facts(&inst)?),
            Suite::Theorem => {
                if let Some(found) = &found {
                    out.extend(theorem_verdicts(&inst, found)?);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    Nonmixed,
    Mixed,
    GeneralS,
    Free,
    Unsupported,
}

impl RegimeKind {
    pub fn of(r: Regime) -> Self {
        match r {
            Regime::Nonmixed => RegimeKind::Nonmixed,
            Regime::Mixed => RegimeKind::Mixed,
            Regime::GeneralS(_) => RegimeKind::GeneralS,
            Regime::Free => RegimeKind::Free,
            Regime::Unsupported => RegimeKind::Unsupported,
        }
    }
}

/// Parameter ranges of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub ts: Vec<usize>,
    /// Lower bound on every `k_i` (so on `k_t`).
    pub kmin: usize,
    pub kmax: usize,
    pub nmin: usize,
    pub nmax: usize,
    /// Keep only these regimes; all when empty.
    pub regimes: Vec<RegimeKind>,
}

impl Grid {
    /// Every valid parameter set in the ranges, sorted.
    pub fn params(&self) -> Vec<Params> {
        let mut out = Vec::new();
        for &t in &self.ts {
            for ks in nonincreasing_vectors(t, self.kmin.max(1), self.kmax) {
                for n in self.nmin.max(ks[0])..=self.nmax {
                    let Ok(p) = Params::new(n, ks.clone()) else { continue };
                    if self.regimes.is_empty() || self.regimes.contains(&RegimeKind::of(classify(&p))) {
                        out.push(p);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub cells: usize,
    pub verdicts: Vec<CheckVerdict>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl SweepReport {
    pub fn from_verdicts(cells: usize, verdicts: Vec<CheckVerdict>) -> Self {
        let count = |s: Status| verdicts.iter().filter(|v| v.status == s).count();
        SweepReport {
            cells,
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
            verdicts,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckVerdict> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }
}

/// Runs the suites over every cell of the grid in parallel; verdicts are
/// ordered by parameters, then by check order. Instance-free facts run
/// once, first.
pub fn run_sweep<C: CountScalar>(grid: &Grid, suites: &[Suite], opts: &VerifyOptions) -> Result<SweepReport> {
    let cells = grid.params();
    for p in &cells {
        let needs_search = suites.iter().any(|s| matches!(s, Suite::Parity | Suite::Theorem))
            && matches!(classify(p), Regime::Mixed | Regime::Nonmixed);
        if needs_search {
            let work = crate::search::estimated_work(p, SearchMode::Smart);
            if work > crate::search::SMART_BUDGET {
                return Err(Error::SizeGuard(format!("sweep cell {p} needs about {work:.3e} search steps")));
            }
        }
    }
    let mut verdicts = Vec::new();
    if suites.contains(&Suite::Facts) {
        verdicts.extend(check_fact_suite(&opts.facts)?);
    }
    let per_cell: Vec<Vec<CheckVerdict>> =
        cells.par_iter().map(|p| run_suites::<C>(p, suites, opts)).collect::<Result<_>>()?;
    verdicts.extend(per_cell.into_iter().flatten());
    Ok(SweepReport::from_verdicts(cells.len(), verdicts))
}
