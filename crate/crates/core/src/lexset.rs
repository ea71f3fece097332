//! Subsets of `[n]` under the lexicographic order, with ranking arithmetic.
//!
//! `A` precedes `B` when `min(A \ B) < min(B \ A)`, taking `min ∅ = +∞`.
//! For sets of equal size this is ordinary lexicographic order on the sorted
//! element sequences; a proper superset precedes its subsets.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::count::{add, from_usize, sub, Binomials, CountScalar};
use crate::error::{invalid, Error, Result};

/// Default cap on materialized family sizes.
pub const DEFAULT_MEMBER_CAP: usize = 1_000_000;

/// A subset of `[n]` stored as a strictly increasing element list.
///
/// A bitmask mirror is kept for `n <= 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KSet {
    n: usize,
    elems: Vec<usize>,
    mask: Option<u64>,
}

impl KSet {
    /// Builds a set from strictly increasing elements in `[1, n]`.
    pub fn new(n: usize, elems: Vec<usize>) -> Result<Self> {
        for w in elems.windows(2) {
            if w[0] >= w[1] {
                return invalid(format!("elements not strictly increasing: {elems:?}"));
            }
        }
        if let (Some(&lo), Some(&hi)) = (elems.first(), elems.last()) {
            if lo == 0 || hi > n {
                return invalid(format!("elements {elems:?} outside [1, {n}]"));
            }
        }
        Ok(Self::raw(n, elems))
    }

    /// Builds a set from arbitrary elements, sorting and deduplicating.
    pub fn from_unsorted(n: usize, mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        Self::new(n, elems)
    }

    pub(crate) fn raw(n: usize, elems: Vec<usize>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.iter().all(|&x| x >= 1 && x <= n));
        let mask = (n <= 64).then(|| elems.iter().fold(0u64, |m, &x| m | 1u64 << (x - 1)));
        KSet { n, elems, mask }
    }

    pub fn empty(n: usize) -> Self {
        Self::raw(n, Vec::new())
    }

    /// The interval `[lo, hi]`, empty when `lo > hi`.
    pub fn interval(n: usize, lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Ok(Self::empty(n));
        }
        Self::new(n, (lo..=hi).collect())
    }

    /// The first `k`-set `[k]`.
    pub fn first(n: usize, k: usize) -> Result<Self> {
        Self::interval(n, 1, k)
    }

    /// The last `k`-set `[n-k+1, n]`.
    pub fn last(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return invalid(format!("no {k}-subset of [{n}]"));
        }
        Self::interval(n, n - k + 1, n)
    }

    /// Parses a comma-separated element list such as `2,4,7`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('{').trim_end_matches('}');
        if text.trim().is_empty() {
            return Ok(Self::empty(n));
        }
        let elems = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad element {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, elems)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn min_elem(&self) -> Option<usize> {
        self.elems.first().copied()
    }

    pub fn max_elem(&self) -> Option<usize> {
        self.elems.last().copied()
    }

    pub fn mask(&self) -> Option<u64> {
        self.mask
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &KSet) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn intersects(&self, other: &KSet) -> bool {
        match (self.mask, other.mask) {
            (Some(a), Some(b)) => a & b != 0,
            _ => self.elems.iter().any(|&x| other.contains(x)),
        }
    }

    pub fn union(&self, other: &KSet) -> KSet {
        let mut v: Vec<usize> = self.elems.iter().chain(&other.elems).copied().collect();
        v.sort_unstable();
        v.dedup();
        KSet::raw(self.n.max(other.n), v)
    }

    pub fn difference(&self, other: &KSet) -> KSet {
        let v = self.elems.iter().copied().filter(|&x| !other.contains(x)).collect();
        KSet::raw(self.n, v)
    }

    /// Same elements over a different ground set.
    pub fn with_n(&self, n: usize) -> Result<KSet> {
        KSet::new(n, self.elems.clone())
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in &self.elems {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl Serialize for KSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Orders by ground-set size first, then by the lexicographic order.
impl Ord for KSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| lex_cmp(&self.elems, &other.elems))
    }
}

impl PartialOrd for KSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn lex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x.cmp(y);
        }
    }
    b.len().cmp(&a.len())
}

/// Lexicographic comparison; `Less` means `a` precedes `b`.
pub fn compare_lex(a: &KSet, b: &KSet) -> Result<Ordering> {
    if a.n != b.n {
        return invalid(format!("ground sets differ: {} vs {}", a.n, b.n));
    }
    Ok(lex_cmp(&a.elems, &b.elems))
}

/// `a ⪯ b`, assuming a shared ground set.
pub fn lex_le(a: &KSet, b: &KSet) -> bool {
    lex_cmp(&a.elems, &b.elems) != Ordering::Greater
}

/// Ranking arithmetic over a fixed ground set `[n]`.
#[derive(Clone, Debug)]
pub struct Ground<C> {
    n: usize,
    binom: Binomials<C>,
}

impl<C: CountScalar> Ground<C> {
    pub fn new(n: usize) -> Self {
        Ground { n, binom: Binomials::new(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn binomials(&self) -> &Binomials<C> {
        &self.binom
    }

    pub fn choose(&self, m: usize, r: usize) -> Result<C> {
        self.binom.get(m, r)
    }

    pub fn choose_signed(&self, m: i64, r: i64) -> Result<C> {
        self.binom.get_signed(m, r)
    }

    /// Number of `k`-subsets of `[n]`.
    pub fn size(&self, k: usize) -> Result<C> {
        self.binom.get(self.n, k)
    }

    fn check(&self, s: &KSet) -> Result<()> {
        if s.n != self.n {
            return invalid(format!("set {s:?} has ground {} but expected {}", s.n, self.n));
        }
        Ok(())
    }

    /// Counts `k`-sets that agree with `s` before position `i` and are
    /// smaller there, summed over `i < limit`.
    fn count_diverging_below(&self, k: usize, s: &[usize], limit: usize) -> Result<C> {
        let mut acc = C::zero();
        let mut prev = 0usize;
        for (i, &y) in s.iter().take(limit).enumerate() {
            // values v in (prev, y) at position i + 1, followed by k - i - 1 elements above v
            let m = k - i;
            let hi = self.binom.get(self.n - prev, m)?;
            let lo = self.binom.get(self.n + 1 - y, m)?;
            acc = add(&acc, &sub(&hi, &lo)?)?;
            prev = y;
        }
        Ok(acc)
    }

    /// Size of `𝓛(R, k)`: one plus the number of `k`-sets preceding `R`.
    pub fn rank(&self, k: usize, r: &KSet) -> Result<C> {
        self.check(r)?;
        if r.len() != k {
            return invalid(format!("rank: |{r:?}| != {k}"));
        }
        let before = self.count_diverging_below(k, &r.elems, k)?;
        add(&before, &C::one())
    }

    /// Number of `k`-sets `F` with `F ⪯ h`; `|h|` may differ from `k`.
    pub fn rank_general(&self, k: usize, h: &KSet) -> Result<C> {
        self.check(h)?;
        if k > self.n {
            return Ok(C::zero());
        }
        let m = k.min(h.len());
        let mut acc = self.count_diverging_below(k, &h.elems, m)?;
        match k.cmp(&h.len()) {
            Ordering::Equal => acc = add(&acc, &C::one())?,
            Ordering::Greater => {
                let top = h.max_elem().unwrap_or(0);
                acc = add(&acc, &self.binom.get(self.n - top, k - h.len())?)?;
            }
            Ordering::Less => {}
        }
        Ok(acc)
    }

    /// The `k`-set of rank `r`.
    pub fn unrank(&self, k: usize, r: &C) -> Result<KSet> {
        let total = self.size(k)?;
        if r.is_zero() || *r > total {
            return invalid(format!("rank {r} outside [1, {total}]"));
        }
        let mut remaining = sub(r, &C::one())?;
        let mut elems = Vec::with_capacity(k);
        let mut v = 1usize;
        for i in 0..k {
            loop {
                let block = self.binom.get(self.n - v, k - i - 1)?;
                if remaining >= block {
                    remaining = sub(&remaining, &block)?;
                    v += 1;
                } else {
                    break;
                }
            }
            elems.push(v);
            v += 1;
        }
        Ok(KSet::raw(self.n, elems))
    }

    /// All members of `𝓛(r, k)` in order, refusing families above `cap`.
    pub fn members(&self, k: usize, r: &KSet, cap: usize) -> Result<Vec<KSet>> {
        let size = self.rank(k, r)?;
        if size > from_usize::<C>(cap)? {
            return Err(Error::SizeGuard(format!("|L({r:?},{k})| = {size} exceeds cap {cap}")));
        }
        Ok(KRange::new(KSet::first(self.n, k)?, r.clone()).collect())
    }
}

/// Rank without a prebuilt ground.
pub fn rank<C: CountScalar>(n: usize, k: usize, r: &KSet) -> Result<C> {
    Ground::<C>::new(n).rank(k, r)
}

pub fn rank_general<C: CountScalar>(n: usize, k: usize, h: &KSet) -> Result<C> {
    Ground::<C>::new(n).rank_general(k, h)
}

pub fn unrank<C: CountScalar>(n: usize, k: usize, r: &C) -> Result<KSet> {
    Ground::<C>::new(n).unrank(k, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Succ,
    Pred,
}

/// Neighbour of `r` among sets of the same size; `None` at either end.
pub fn step(r: &KSet, dir: Direction) -> Option<KSet> {
    match dir {
        Direction::Succ => succ(r),
        Direction::Pred => pred(r),
    }
}

pub fn succ(r: &KSet) -> Option<KSet> {
    let (n, k) = (r.n, r.len());
    let i = (0..k).rev().find(|&i| r.elems[i] < n - k + i + 1)?;
    let mut v = r.elems[..i].to_vec();
    let start = r.elems[i] + 1;
    v.extend(start..start + (k - i));
    Some(KSet::raw(n, v))
}

pub fn pred(r: &KSet) -> Option<KSet> {
    let (n, k) = (r.n, r.len());
    let i = (0..k).rev().find(|&i| {
        let below = if i == 0 { 0 } else { r.elems[i - 1] };
        r.elems[i] > below + 1
    })?;
    let mut v = r.elems[..i].to_vec();
    v.push(r.elems[i] - 1);
    v.extend(n - (k - i - 1) + 1..=n);
    Some(KSet::raw(n, v))
}

/// Iterator over same-size sets from `lo` to `hi` inclusive.
#[derive(Clone, Debug)]
pub struct KRange {
    next: Option<KSet>,
    hi: KSet,
}

impl KRange {
    pub fn new(lo: KSet, hi: KSet) -> Self {
        let next = lex_le(&lo, &hi).then_some(lo);
        KRange { next, hi }
    }
}

impl Iterator for KRange {
    type Item = KSet;

    fn next(&mut self) -> Option<KSet> {
        let cur = self.next.take()?;
        if cur != self.hi {
            self.next = succ(&cur);
        }
        Some(cur)
    }
}

/// All `k`-subsets of `[n]` in order.
pub fn ksets(n: usize, k: usize) -> KRange {
    match (KSet::first(n, k), KSet::last(n, k)) {
        (Ok(lo), Ok(hi)) => KRange::new(lo, hi),
        _ => KRange { next: None, hi: KSet::empty(n) },
    }
}

/// Split of a set into its maximal suffix run `[n-ℓ+1, n]` and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub ell: usize,
    pub tail: KSet,
    pub core: KSet,
}

pub fn decompose(f: &KSet) -> Decomposition {
    let n = f.n;
    let mut ell = 0;
    for &x in f.elems.iter().rev() {
        if x == n - ell {
            ell += 1;
        } else {
            break;
        }
    }
    let split = f.len() - ell;
    Decomposition {
        ell,
        tail: KSet::raw(n, f.elems[split..].to_vec()),
        core: KSet::raw(n, f.elems[..split].to_vec()),
    }
}

pub fn ell(f: &KSet) -> usize {
    decompose(f).ell
}

pub fn core(f: &KSet) -> KSet {
    decompose(f).core
}

/// Shifts the consecutive top block of size `c` up by one.
pub fn seq_step(f: &KSet, c: usize) -> Result<Option<KSet>> {
    let k = f.len();
    if c == 0 || c > k {
        return invalid(format!("block size {c} outside [1, {k}]"));
    }
    let block = &f.elems[k - c..];
    if block.windows(2).any(|w| w[1] != w[0] + 1) {
        return invalid(format!("last {c} elements of {f:?} are not consecutive"));
    }
    let top = block[c - 1];
    if top + 1 > f.n {
        return Ok(None);
    }
    let mut v = f.elems[..k - c].to_vec();
    v.extend(block.iter().map(|x| x + 1));
    Ok(Some(KSet::raw(f.n, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn s(n: usize, v: &[usize]) -> KSet {
        KSet::new(n, v.to_vec()).unwrap()
    }

    fn all_subsets(n: usize) -> Vec<KSet> {
        (0u32..1 << n)
            .map(|m| KSet::raw(n, (1..=n).filter(|x| m >> (x - 1) & 1 == 1).collect()))
            .collect()
    }

    /// Order by the min-difference rule directly.
    fn oracle_precedes(a: &KSet, b: &KSet) -> bool {
        let ab = a.difference(b).min_elem().unwrap_or(usize::MAX);
        let ba = b.difference(a).min_elem().unwrap_or(usize::MAX);
        ab < ba
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare_lex(&s(9, &[2, 4, 7]), &s(9, &[2, 4, 9])).unwrap(), Ordering::Less);
        assert_eq!(compare_lex(&s(4, &[1, 2, 3]), &s(4, &[1, 2])).unwrap(), Ordering::Less);
        assert_eq!(compare_lex(&s(4, &[1, 3]), &s(4, &[1, 2, 4])).unwrap(), Ordering::Greater);
        assert!(compare_lex(&s(4, &[1]), &s(5, &[1])).is_err());
    }

    #[test]
    fn compare_matches_min_rule() {
        let all = all_subsets(6);
        for a in &all {
            for b in &all {
                let c = compare_lex(a, b).unwrap();
                assert_eq!(c == Ordering::Less, oracle_precedes(a, b), "{a:?} {b:?}");
                assert_eq!(c == Ordering::Equal, a == b);
            }
        }
    }

    #[test]
    fn rank_examples() {
        let g = Ground::<BigUint>::new(4);
        let r = |v: &[usize]| g.rank(v.len(), &s(4, v)).unwrap();
        assert_eq!(r(&[1, 2]), 1u32.into());
        assert_eq!(r(&[3, 4]), 6u32.into());
        assert_eq!(r(&[2, 3]), 4u32.into());
        assert!(g.rank(3, &s(4, &[1, 2])).is_err());
    }

    #[test]
    fn rank_general_examples() {
        let g = Ground::<u64>::new(5);
        assert_eq!(g.rank_general(2, &s(5, &[2, 3, 4, 5])).unwrap(), 4);
        // an initial segment longer than k is preceded by nothing of size k
        let g4 = Ground::<u64>::new(4);
        assert_eq!(g4.rank_general(2, &s(4, &[1, 2, 3])).unwrap(), 0);
        let g9 = Ground::<u64>::new(9);
        assert_eq!(
            g9.rank_general(3, &s(9, &[1, 3, 5, 6, 7])).unwrap(),
            g9.rank(3, &s(9, &[1, 3, 4])).unwrap()
        );
    }

    #[test]
    fn rank_general_matches_enumeration() {
        for n in 1..=8 {
            let g = Ground::<u64>::new(n);
            for h in all_subsets(n) {
                for k in 0..=n {
                    let brute = ksets(n, k).filter(|f| lex_le(f, &h)).count() as u64;
                    assert_eq!(g.rank_general(k, &h).unwrap(), brute, "n={n} k={k} h={h:?}");
                }
            }
        }
    }

    #[test]
    fn rank_matches_enumeration_and_members() {
        for n in 1..=8 {
            let g = Ground::<u64>::new(n);
            for k in 0..=n.min(4) {
                for (i, r) in ksets(n, k).enumerate() {
                    assert_eq!(g.rank(k, &r).unwrap(), i as u64 + 1);
                    assert_eq!(g.unrank(k, &(i as u64 + 1)).unwrap(), r);
                    assert_eq!(g.members(k, &r, 1000).unwrap().len(), i + 1);
                }
            }
        }
    }

    #[test]
    fn unrank_examples_and_errors() {
        let g = Ground::<u64>::new(4);
        assert_eq!(g.unrank(2, &1).unwrap(), s(4, &[1, 2]));
        assert_eq!(g.unrank(2, &6).unwrap(), s(4, &[3, 4]));
        assert_eq!(g.unrank(2, &4).unwrap(), s(4, &[2, 3]));
        assert!(g.unrank(2, &0).is_err());
        assert!(g.unrank(2, &7).is_err());
    }

    #[test]
    fn step_examples() {
        assert_eq!(succ(&s(4, &[1, 4])), Some(s(4, &[2, 3])));
        assert_eq!(pred(&s(4, &[1, 2])), None);
        assert_eq!(succ(&s(9, &[1, 3, 4, 9])), Some(s(9, &[1, 3, 5, 6])));
        assert_eq!(succ(&s(4, &[3, 4])), None);
        assert_eq!(step(&s(4, &[2, 3]), Direction::Pred), Some(s(4, &[1, 4])));
    }

    #[test]
    fn step_walks_the_order() {
        for n in 1..=7 {
            for k in 1..=n {
                let all: Vec<_> = ksets(n, k).collect();
                let mut sorted = all.clone();
                sorted.sort();
                assert_eq!(all, sorted);
                for w in all.windows(2) {
                    assert_eq!(pred(&w[1]).as_ref(), Some(&w[0]));
                }
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&s(9, &[2, 4, 9]));
        assert_eq!((d.ell, d.tail, d.core), (1, s(9, &[9]), s(9, &[2, 4])));
        let d = decompose(&s(9, &[2, 4, 7]));
        assert_eq!((d.ell, d.tail, d.core), (0, KSet::empty(9), s(9, &[2, 4, 7])));
        let d = decompose(&s(6, &[4, 5, 6]));
        assert_eq!((d.ell, d.tail, d.core), (3, s(6, &[4, 5, 6]), KSet::empty(6)));
    }

    #[test]
    fn seq_step_examples() {
        assert_eq!(seq_step(&s(9, &[2, 3, 4]), 2).unwrap(), Some(s(9, &[2, 4, 5])));
        assert_eq!(seq_step(&s(4, &[1, 3]), 1).unwrap(), Some(s(4, &[1, 4])));
        assert_eq!(seq_step(&s(5, &[2, 4, 5]), 2).unwrap(), None);
        assert!(seq_step(&s(9, &[2, 4, 7]), 2).is_err());
        assert!(seq_step(&s(9, &[2, 4, 7]), 4).is_err());
    }

    #[test]
    fn members_examples() {
        let g = Ground::<u64>::new(4);
        assert_eq!(g.members(2, &s(4, &[1, 3]), 10).unwrap(), vec![s(4, &[1, 2]), s(4, &[1, 3])]);
        assert_eq!(g.members(2, &s(4, &[1, 2]), 10).unwrap(), vec![s(4, &[1, 2])]);
        let g6 = Ground::<u64>::new(6);
        let star: Vec<_> = (2..=6).map(|x| s(6, &[1, x])).collect();
        assert_eq!(g6.members(2, &s(6, &[1, 6]), 10).unwrap(), star);
        assert!(matches!(g6.members(2, &s(6, &[5, 6]), 10), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn parse_and_display() {
        let a = KSet::parse(9, "2, 4,7").unwrap();
        assert_eq!(a.to_string(), "2,4,7");
        assert_eq!(format!("{a:?}"), "{2,4,7}");
        assert!(KSet::parse(9, "4,2").is_err());
        assert!(KSet::parse(9, "0,2").is_err());
        assert!(KSet::parse(9, "2,10").is_err());
        assert!(KSet::parse(9, "").unwrap().is_empty());
    }
}
