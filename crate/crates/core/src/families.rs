//! Parameters, regimes, constructions, ID ranges and maximal-pair families.

use std::fmt;

use serde::Serialize;

use crate::count::{add, from_usize, sub, CountScalar};
use crate::error::{invalid, Result};
use crate::lexset::{decompose, lex_le, Ground, KRange, KSet};
use crate::partner::{is_maximal_pair, partner};

/// Ground-set size and nonincreasing family sizes `k_1 >= ... >= k_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Params {
    pub n: usize,
    pub ks: Vec<usize>,
}

impl Params {
    pub fn new(n: usize, ks: Vec<usize>) -> Result<Self> {
        if ks.len() < 2 {
            return invalid(format!("need at least two families, got {}", ks.len()));
        }
        if ks.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("sizes {ks:?} are not nonincreasing"));
        }
        if ks[ks.len() - 1] == 0 {
            return invalid("family sizes must be positive");
        }
        if ks[0] > n {
            return invalid(format!("k_1 = {} exceeds n = {n}", ks[0]));
        }
        Ok(Params { n, ks })
    }

    /// Sorts `ks` nonincreasing first; the flag reports whether it moved.
    pub fn sorted(n: usize, mut ks: Vec<usize>) -> Result<(Self, bool)> {
        let before = ks.clone();
        ks.sort_unstable_by(|a, b| b.cmp(a));
        let moved = before != ks;
        Ok((Params::new(n, ks)?, moved))
    }

    pub fn t(&self) -> usize {
        self.ks.len()
    }

    /// Size of family `i` (0-based).
    pub fn k(&self, i: usize) -> usize {
        self.ks[i]
    }

    pub fn kt(&self) -> usize {
        self.ks[self.ks.len() - 1]
    }

    /// Whether families `i` and `j` must cross-intersect nontrivially.
    pub fn constrained(&self, i: usize, j: usize) -> bool {
        i != j && self.n >= self.ks[i] + self.ks[j]
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.ks.iter().map(|k| k.to_string()).collect();
        write!(f, "n={} k=({})", self.n, ks.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    Nonmixed,
    Mixed,
    /// `k_1 + k_{s+1} <= n < k_{s-1} + k_s` for `s >= 3`.
    GeneralS(usize),
    Free,
    Unsupported,
}

impl Regime {
    /// The `s` of the general range definition, when it applies.
    pub fn s(&self) -> Option<usize> {
        match self {
            Regime::Mixed => Some(2),
            Regime::GeneralS(s) => Some(*s),
            _ => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Nonmixed => f.write_str("nonmixed"),
            Regime::Mixed => f.write_str("mixed"),
            Regime::GeneralS(s) => write!(f, "general_s({s})"),
            Regime::Free => f.write_str("free"),
            Regime::Unsupported => f.write_str("unsupported"),
        }
    }
}

impl Serialize for Regime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn classify(p: &Params) -> Regime {
    let (n, k, t) = (p.n, &p.ks, p.t());
    if n >= k[0] + k[1] {
        return Regime::Nonmixed;
    }
    if t >= 3 && k[0] + k[2] <= n {
        return Regime::Mixed;
    }
    // 1-based s in [3, t-1]: k_1 + k_{s+1} <= n < k_{s-1} + k_s
    for s in 3..t {
        if k[0] + k[s] <= n && n < k[s - 2] + k[s - 1] {
            return Regime::GeneralS(s);
        }
    }
    if n < k[0] + k[t - 1] {
        return Regime::Free;
    }
    Regime::Unsupported
}

/// A parameter set bundled with ranking arithmetic over its ground set.
#[derive(Clone, Debug)]
pub struct Instance<C> {
    pub params: Params,
    pub ground: Ground<C>,
}

impl<C: CountScalar> Instance<C> {
    pub fn new(params: Params) -> Self {
        let ground = Ground::new(params.n);
        Instance { params, ground }
    }

    pub fn regime(&self) -> Regime {
        classify(&self.params)
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn k(&self, i: usize) -> usize {
        self.params.k(i)
    }

    pub fn t(&self) -> usize {
        self.params.t()
    }

    /// Rank of `id` as an ID of family `i`.
    pub fn rank(&self, i: usize, id: &KSet) -> Result<C> {
        self.ground.rank(self.params.k(i), id)
    }

    /// Total size of the system with the given IDs.
    pub fn system_size(&self, ids: &[KSet]) -> Result<C> {
        let mut acc = C::zero();
        for (i, id) in ids.iter().enumerate() {
            acc = add(&acc, &self.rank(i, id)?)?;
        }
        Ok(acc)
    }
}

/// An L-initial family `𝓛(id, k)` kept as its ID.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LFamily {
    pub k: usize,
    pub id: KSet,
}

impl LFamily {
    pub fn new(k: usize, id: KSet) -> Result<Self> {
        if id.len() != k {
            return invalid(format!("ID {id:?} does not have size {k}"));
        }
        Ok(LFamily { k, id })
    }

    pub fn size<C: CountScalar>(&self, g: &Ground<C>) -> Result<C> {
        g.rank(self.k, &self.id)
    }

    pub fn members<C: CountScalar>(&self, g: &Ground<C>, cap: usize) -> Result<Vec<KSet>> {
        g.members(self.k, &self.id, cap)
    }
}

/// The IDs of an L-initial system, one per family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SystemIds {
    pub params: Params,
    pub ids: Vec<KSet>,
}

impl fmt::Display for SystemIds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ids.iter().map(|s| format!("{{{s}}}")).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    /// Every family is a star at 1.
    Star,
    /// Families meet or contain `[k_t]`.
    Cover,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Star => f.write_str("C1"),
            Construction::Cover => f.write_str("C2"),
        }
    }
}

impl Serialize for Construction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `{1, n-k+2, ..., n}`.
pub fn star_id(n: usize, k: usize) -> Result<KSet> {
    if k == 0 || k > n {
        return invalid(format!("no star {k}-set in [{n}]"));
    }
    KSet::new(n, std::iter::once(1).chain(n - k + 2..=n).collect())
}

/// `{x, n-k+2, ..., n}`.
fn meet_id(n: usize, x: usize, k: usize) -> Result<KSet> {
    if k == 0 || x + k - 1 > n {
        return invalid(format!("no {k}-set starting at {x} in [{n}]"));
    }
    KSet::new(n, std::iter::once(x).chain(n - k + 2..=n).collect())
}

/// `[m] ∪ [n-k+m+1, n]`, the last `k`-set containing `[m]`.
fn contain_id(n: usize, m: usize, k: usize) -> Result<KSet> {
    if m > k || k > n {
        return invalid(format!("no {k}-set containing [{m}] in [{n}]"));
    }
    KSet::new(n, (1..=m).chain(n - k + m + 1..=n).collect())
}

pub fn construction1_ids(p: &Params) -> Result<SystemIds> {
    if p.n < p.k(0) + 1 {
        return invalid(format!("star construction needs n > k_1 ({p})"));
    }
    let ids = p.ks.iter().map(|&k| star_id(p.n, k)).collect::<Result<_>>()?;
    Ok(SystemIds { params: p.clone(), ids })
}

/// IDs where the first `m` families meet `[k_t]` and the rest contain it.
fn cover_ids(p: &Params, m: usize) -> Result<SystemIds> {
    let kt = p.kt();
    let ids = p
        .ks
        .iter()
        .enumerate()
        .map(|(i, &k)| if i < m { meet_id(p.n, kt, k) } else { contain_id(p.n, kt, k) })
        .collect::<Result<_>>()?;
    Ok(SystemIds { params: p.clone(), ids })
}

pub fn construction2_ids(p: &Params) -> Result<SystemIds> {
    if classify(p) != Regime::Mixed {
        return invalid(format!("covering construction is defined for the mixed regime ({p})"));
    }
    cover_ids(p, 2)
}

/// The covering system of the nonmixed regime: the first family meets
/// `[k_t]`, all others contain it.
pub fn nonmixed_cover_ids(p: &Params) -> Result<SystemIds> {
    if classify(p) != Regime::Nonmixed {
        return invalid(format!("nonmixed covering system requested for {p}"));
    }
    cover_ids(p, 1)
}

pub fn construction1<C: CountScalar>(inst: &Instance<C>) -> Result<(SystemIds, C)> {
    let ids = construction1_ids(&inst.params)?;
    let mut acc = C::zero();
    for &k in &inst.params.ks {
        acc = add(&acc, &inst.ground.choose(inst.n() - 1, k - 1)?)?;
    }
    Ok((ids, acc))
}

fn cover_value<C: CountScalar>(inst: &Instance<C>, m: usize) -> Result<C> {
    let (n, kt) = (inst.n(), inst.params.kt());
    let g = &inst.ground;
    let mut acc = C::zero();
    for (i, &k) in inst.params.ks.iter().enumerate() {
        let term = if i < m {
            sub(&g.choose(n, k)?, &g.choose(n - kt, k)?)?
        } else {
            g.choose(n - kt, k - kt)?
        };
        acc = add(&acc, &term)?;
    }
    Ok(acc)
}

pub fn construction2<C: CountScalar>(inst: &Instance<C>) -> Result<(SystemIds, C)> {
    let ids = construction2_ids(&inst.params)?;
    Ok((ids, cover_value(inst, 2)?))
}

pub fn nonmixed_cover<C: CountScalar>(inst: &Instance<C>) -> Result<(SystemIds, C)> {
    let ids = nonmixed_cover_ids(&inst.params)?;
    Ok((ids, cover_value(inst, 1)?))
}

/// Bounds of the ID range of family `i` (0-based) in the mixed regime.
///
/// Families 0 and 1 range between the star and the `[k_t]`-meeting ID;
/// the others range from the `[k_t]`-containing ID up to the star.
pub fn ri_bounds(p: &Params, i: usize) -> Result<(KSet, KSet)> {
    if classify(p) != Regime::Mixed {
        return invalid(format!("ranges are defined for the mixed regime ({p})"));
    }
    if i >= p.t() {
        return invalid(format!("family index {i} outside [0, {})", p.t()));
    }
    let (n, k, kt) = (p.n, p.k(i), p.kt());
    if i < 2 {
        Ok((star_id(n, k)?, meet_id(n, kt, k)?))
    } else {
        Ok((contain_id(n, kt, k)?, star_id(n, k)?))
    }
}

/// Bounds of the general ID range of family `i` (0-based) for a given `s`.
///
/// The first `s` families range between the star and the `[k_t]`-meeting
/// ID; the others over all sets containing `[k_t]`.
pub fn range_bounds(p: &Params, s: usize, i: usize) -> Result<(KSet, KSet)> {
    if i >= p.t() || s == 0 || s >= p.t() {
        return invalid(format!("range ({s}, {i}) invalid for {p}"));
    }
    let (n, k, kt) = (p.n, p.k(i), p.kt());
    if i < s {
        Ok((star_id(n, k)?, meet_id(n, kt, k)?))
    } else {
        Ok((KSet::first(n, k)?, contain_id(n, kt, k)?))
    }
}

pub fn within(x: &KSet, bounds: &(KSet, KSet)) -> bool {
    lex_le(&bounds.0, x) && lex_le(x, &bounds.1)
}

/// Membership of `r` in the maximal-pair family of the second range.
/// Returns the paired ID of the third family on success.
pub fn f23_contains(p: &Params, r: &KSet) -> Result<Option<KSet>> {
    if r.len() != p.k(1) {
        return invalid(format!("{r:?} does not have size k_2 = {}", p.k(1)));
    }
    if !within(r, &ri_bounds(p, 1)?) {
        return Ok(None);
    }
    let c = decompose(r).core;
    if c.is_empty() {
        return Ok(None);
    }
    let tt = partner(&c)?;
    let (n, k3) = (p.n, p.k(2));
    if tt.len() > k3 {
        return Ok(None);
    }
    let b = tt.union(&KSet::interval(n, n - k3 + tt.len() + 1, n)?);
    if !within(&b, &ri_bounds(p, 2)?) || !is_maximal_pair(r, &b)? {
        return Ok(None);
    }
    Ok(Some(b))
}

/// Members of the maximal-pair family of the second range, in order.
pub fn f23_iter(p: &Params) -> Result<Vec<KSet>> {
    let (lo, hi) = ri_bounds(p, 1)?;
    let mut out = Vec::new();
    for r in KRange::new(lo, hi) {
        if f23_contains(p, &r)?.is_some() {
            out.push(r);
        }
    }
    Ok(out)
}

/// Members containing `[n-j+1, n]`, with that block removed.
pub fn f23_level(p: &Params, j: usize) -> Result<Vec<KSet>> {
    if j >= p.k(1) {
        return invalid(format!("level {j} outside [0, k_2 - 1]"));
    }
    let n = p.n;
    let mut out = Vec::new();
    for r in f23_iter(p)? {
        if r.elements()[r.len() - j..].iter().zip(n - j + 1..=n).all(|(&a, b)| a == b) {
            out.push(KSet::raw(n, r.elements()[..r.len() - j].to_vec()));
        }
    }
    Ok(out)
}

/// Restores a truncated ID to size `k` by appending the top block.
pub fn fill_tail(r: &KSet, k: usize) -> Result<KSet> {
    let n = r.n();
    if r.len() > k {
        return invalid(format!("{r:?} is longer than {k}"));
    }
    let j = k - r.len();
    if r.max_elem().unwrap_or(0) + j > n {
        return invalid(format!("{r:?} does not fit under a top block of {j}"));
    }
    Ok(r.union(&KSet::interval(n, n - j + 1, n)?))
}

/// All maximal pairs `(A, B)` with `|A| = a`, `|B| = b`, optionally
/// restricted to ranges for `A` and `B`.
pub fn maximal_pair_family(
    n: usize,
    a: usize,
    b: usize,
    a_bounds: Option<(KSet, KSet)>,
    b_bounds: Option<(KSet, KSet)>,
) -> Result<Vec<(KSet, KSet)>> {
    if a == 0 || b == 0 || a + b > n {
        return invalid(format!("maximal pairs need 1 <= a, b and a + b <= n (a={a}, b={b}, n={n})"));
    }
    let (lo, hi) = match a_bounds {
        Some(bd) => bd,
        None => (KSet::first(n, a)?, KSet::last(n, a)?),
    };
    let mut out = Vec::new();
    for x in KRange::new(lo, hi) {
        let c = decompose(&x).core;
        if c.is_empty() {
            continue;
        }
        let tt = partner(&c)?;
        if tt.len() > b {
            continue;
        }
        let y = tt.union(&KSet::interval(n, n - b + tt.len() + 1, n)?);
        if !is_maximal_pair(&x, &y)? {
            continue;
        }
        if let Some(bd) = &b_bounds {
            if !within(&y, bd) {
                continue;
            }
        }
        out.push((x, y));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionMatch {
    C1,
    C2,
    Both,
    Neither,
}

impl fmt::Display for ConstructionMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionMatch::C1 => "C1",
            ConstructionMatch::C2 => "C2",
            ConstructionMatch::Both => "both",
            ConstructionMatch::Neither => "neither",
        })
    }
}

pub fn matches_construction(system: &SystemIds) -> Result<ConstructionMatch> {
    let c1 = construction1_ids(&system.params)?;
    let c2 = construction2_ids(&system.params)?;
    Ok(match (system.ids == c1.ids, system.ids == c2.ids) {
        (true, true) => ConstructionMatch::Both,
        (true, false) => ConstructionMatch::C1,
        (false, true) => ConstructionMatch::C2,
        (false, false) => ConstructionMatch::Neither,
    })
}

/// Number of sets in `[lo, hi]` as a count.
pub fn range_len<C: CountScalar>(g: &Ground<C>, bounds: &(KSet, KSet)) -> Result<C> {
    let k = bounds.0.len();
    let hi = g.rank(k, &bounds.1)?;
    let lo = g.rank(k, &bounds.0)?;
    if hi < lo {
        return Ok(C::zero());
    }
    add(&sub(&hi, &lo)?, &from_usize(1)?)
}

/// All nonincreasing vectors of length `t` with entries in `[lo, hi]`.
pub fn nonincreasing_vectors(t: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    fn go(t: usize, lo: usize, top: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for k in (lo..=top).rev() {
            cur.push(k);
            go(t, lo, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= hi {
        go(t, lo, hi, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexset::ksets;
    use num_bigint::BigUint;

    fn s(n: usize, v: &[usize]) -> KSet {
        KSet::new(n, v.to_vec()).unwrap()
    }

    fn p(n: usize, ks: &[usize]) -> Params {
        Params::new(n, ks.to_vec()).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(6, vec![3]).is_err());
        assert!(Params::new(6, vec![2, 3]).is_err());
        assert!(Params::new(6, vec![7, 3]).is_err());
        assert!(Params::new(6, vec![3, 0]).is_err());
        let (q, moved) = Params::sorted(6, vec![2, 4, 3]).unwrap();
        assert_eq!((q.ks, moved), (vec![4, 3, 2], true));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&p(6, &[4, 3, 2])), Regime::Mixed);
        assert_eq!(classify(&p(5, &[2, 2, 2])), Regime::Nonmixed);
        assert_eq!(classify(&p(4, &[3, 2, 2])), Regime::Free);
        assert_eq!(classify(&p(7, &[5, 4, 4, 2])), Regime::GeneralS(3));
        assert_eq!(classify(&p(7, &[5, 3, 3, 2])), Regime::Unsupported);
    }

    #[test]
    fn construction_examples() {
        let inst = Instance::<BigUint>::new(p(6, &[4, 3, 2]));
        let (ids, l1) = construction1(&inst).unwrap();
        assert_eq!(ids.ids, vec![s(6, &[1, 4, 5, 6]), s(6, &[1, 5, 6]), s(6, &[1, 6])]);
        assert_eq!(l1, 25u32.into());
        assert_eq!(inst.system_size(&ids.ids).unwrap(), l1);
        let (ids, l2) = construction2(&inst).unwrap();
        assert_eq!(ids.ids, vec![s(6, &[2, 4, 5, 6]), s(6, &[2, 5, 6]), s(6, &[1, 2])]);
        assert_eq!(l2, 31u32.into());
        assert_eq!(inst.system_size(&ids.ids).unwrap(), l2);
        assert_eq!(inst.rank(0, &s(6, &[2, 4, 5, 6])).unwrap(), 14u32.into());

        let inst = Instance::<u64>::new(p(7, &[5, 3, 2]));
        assert_eq!(construction1(&inst).unwrap().1, 36);
        assert_eq!(construction2(&inst).unwrap().1, 46);
        assert!(construction2(&Instance::<u64>::new(p(5, &[2, 2, 2]))).is_err());
    }

    #[test]
    fn constructions_materialize_to_their_formulas() {
        for (n, ks) in [(6, vec![4, 3, 2]), (7, vec![5, 3, 2]), (8, vec![5, 4, 3, 2])] {
            let inst = Instance::<u64>::new(Params::new(n, ks.clone()).unwrap());
            let (c1, l1) = construction1(&inst).unwrap();
            let star_total: usize = c1
                .ids
                .iter()
                .zip(&ks)
                .map(|(id, &k)| ksets(n, k).filter(|f| lex_le(f, id)).inspect(|f| assert!(f.contains(1))).count())
                .sum();
            assert_eq!(star_total as u64, l1);
            let (c2, l2) = construction2(&inst).unwrap();
            let kt = *ks.last().unwrap();
            let cover = KSet::interval(n, 1, kt).unwrap();
            let mut total = 0;
            for (i, (id, &k)) in c2.ids.iter().zip(&ks).enumerate() {
                let fam: Vec<_> = ksets(n, k).filter(|f| lex_le(f, id)).collect();
                for f in &fam {
                    if i < 2 {
                        assert!(f.intersects(&cover));
                    } else {
                        assert!(cover.is_subset(f));
                    }
                }
                total += fam.len();
            }
            assert_eq!(total as u64, l2);
        }
    }

    #[test]
    fn ri_bounds_examples() {
        let q = p(6, &[4, 3, 2]);
        assert_eq!(ri_bounds(&q, 1).unwrap(), (s(6, &[1, 5, 6]), s(6, &[2, 5, 6])));
        assert_eq!(ri_bounds(&q, 2).unwrap(), (s(6, &[1, 2]), s(6, &[1, 6])));
        assert_eq!(ri_bounds(&q, 0).unwrap(), (s(6, &[1, 4, 5, 6]), s(6, &[2, 4, 5, 6])));
        assert!(ri_bounds(&q, 3).is_err());
        let q4 = p(8, &[5, 4, 3, 2]);
        assert_eq!(ri_bounds(&q4, 2).unwrap(), (s(8, &[1, 2, 8]), s(8, &[1, 7, 8])));
        assert_eq!(range_bounds(&q4, 2, 2).unwrap(), (s(8, &[1, 2, 3]), s(8, &[1, 2, 8])));
    }

    #[test]
    fn f23_examples() {
        let q = p(6, &[4, 3, 2]);
        assert_eq!(f23_contains(&q, &s(6, &[2, 5, 6])).unwrap(), Some(s(6, &[1, 2])));
        assert_eq!(f23_contains(&q, &s(6, &[3, 4, 5])).unwrap(), None);
        let q2 = p(7, &[5, 4, 2]);
        assert_eq!(f23_contains(&q2, &s(7, &[2, 3, 5, 7])).unwrap(), None);
        let all = f23_iter(&q).unwrap();
        for x in [&[1, 5, 6][..], &[2, 3, 4], &[2, 3, 6], &[2, 5, 6]] {
            assert!(all.contains(&s(6, x)), "{x:?}");
        }
        let lvl = f23_level(&q, 1).unwrap();
        assert!(lvl.contains(&s(6, &[2, 3])));
        assert!(lvl.contains(&s(6, &[2, 5])));
        assert!(f23_level(&q, 3).is_err());
    }

    #[test]
    fn f23_first_member_is_the_star() {
        for (n, ks) in [(6, vec![4, 3, 2]), (8, vec![5, 4, 3]), (9, vec![5, 5, 4, 2])] {
            let q = Params::new(n, ks.clone()).unwrap();
            if classify(&q) != Regime::Mixed {
                continue;
            }
            let first = f23_iter(&q).unwrap()[0].clone();
            assert_eq!(first, star_id(n, ks[1]).unwrap());
            assert_eq!(f23_contains(&q, &first).unwrap(), Some(star_id(n, ks[2]).unwrap()));
        }
    }

    #[test]
    fn maximal_pair_family_examples() {
        let pairs = maximal_pair_family(9, 3, 4, None, None).unwrap();
        assert!(pairs.contains(&(s(9, &[2, 4, 9]), s(9, &[1, 3, 4, 9]))));
        let mut firsts: Vec<_> = pairs.iter().map(|x| x.0.clone()).collect();
        firsts.dedup();
        assert_eq!(firsts.len(), pairs.len());
    }

    #[test]
    fn maximal_pair_family_pairs_are_unique_per_id() {
        for n in 3..=8 {
            for a in 1..n {
                for b in 1..=n - a {
                    let pairs = maximal_pair_family(n, a, b, None, None).unwrap();
                    for (x, y) in &pairs {
                        let hits: Vec<_> =
                            ksets(n, b).filter(|z| is_maximal_pair(x, z).unwrap()).collect();
                        assert_eq!(hits, vec![y.clone()]);
                    }
                    let covered = ksets(n, a)
                        .filter(|x| ksets(n, b).any(|z| is_maximal_pair(x, &z).unwrap()))
                        .count();
                    assert_eq!(covered, pairs.len());
                }
            }
        }
    }

    #[test]
    fn construction_matching() {
        let q = p(6, &[4, 3, 2]);
        let c1 = construction1_ids(&q).unwrap();
        let c2 = construction2_ids(&q).unwrap();
        assert_eq!(matches_construction(&c1).unwrap(), ConstructionMatch::C1);
        assert_eq!(matches_construction(&c2).unwrap(), ConstructionMatch::C2);
        let other = SystemIds {
            params: q,
            ids: vec![s(6, &[1, 4, 5, 6]), s(6, &[2, 5, 6]), s(6, &[1, 2])],
        };
        assert_eq!(matches_construction(&other).unwrap(), ConstructionMatch::Neither);
    }
}
