//! Partners, k-partners, parities and the maximal cross-intersecting ID.

use crate::error::{invalid, not_found, Error, Result};
use crate::lexset::{decompose, lex_le, KSet};

/// Which branch produced a k-partner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartnerKind {
    /// `k = |H|`
    Exact,
    /// `k > |H|`
    Padded,
    /// `k < |H|`
    Predecessor,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartnerResult {
    pub value: KSet,
    pub kind: PartnerKind,
}

/// `([q-1] \ F) ∪ {q}` with `q = max F`.
pub fn partner(f: &KSet) -> Result<KSet> {
    let q = match f.max_elem() {
        Some(q) => q,
        None => return invalid("partner of the empty set"),
    };
    let mut v: Vec<usize> = (1..q).filter(|&x| !f.contains(x)).collect();
    v.push(q);
    Ok(KSet::raw(f.n(), v))
}

/// The last `k`-set `K` with `K ⪯ h`, if any.
pub fn last_at_or_before(h: &KSet, k: usize) -> Option<KSet> {
    let n = h.n();
    let y = h.elements();
    let len = y.len();
    if k > n {
        return None;
    }
    if k == len {
        return Some(h.clone());
    }
    if k > len {
        let top = h.max_elem().unwrap_or(0);
        if n - top >= k - len {
            let mut v = y.to_vec();
            v.extend(n - (k - len) + 1..=n);
            return Some(KSet::raw(n, v));
        }
    }
    // diverge at position j below y_j, keeping room for k - j larger elements
    for j in (1..=k.min(len)).rev() {
        let below = if j == 1 { 0 } else { y[j - 2] };
        let cap = n - (k - j);
        let v_j = (y[j - 1] - 1).min(cap);
        if v_j > below {
            let mut v = y[..j - 1].to_vec();
            v.push(v_j);
            v.extend(n - (k - j) + 1..=n);
            return Some(KSet::raw(n, v));
        }
    }
    None
}

/// The `k`-partner of `f`: the ID of the largest `k`-uniform L-initial
/// family cross-intersecting `𝓛(f, |f|)`.
pub fn kpartner(f: &KSet, k: usize) -> Result<PartnerResult> {
    let n = f.n();
    if f.is_empty() {
        return invalid("k-partner of the empty set");
    }
    if k > n - f.len() {
        return invalid(format!("k = {k} exceeds n - |F| = {}", n - f.len()));
    }
    let h = partner(f)?;
    let kind = match k.cmp(&h.len()) {
        std::cmp::Ordering::Equal => PartnerKind::Exact,
        std::cmp::Ordering::Greater => PartnerKind::Padded,
        std::cmp::Ordering::Less => PartnerKind::Predecessor,
    };
    match last_at_or_before(&h, k) {
        Some(value) => Ok(PartnerResult { value, kind }),
        None => not_found(format!("no {k}-set precedes {h:?}")),
    }
}

/// The `h`-set with the same core as `f` whose tail length differs from
/// `ℓ(f)` by `h - |f|`.
pub fn parity_of(f: &KSet, h: usize) -> Option<KSet> {
    let n = f.n();
    if f.is_empty() || h == 0 {
        return None;
    }
    if h == f.len() {
        return Some(f.clone());
    }
    let d = decompose(f);
    let new_ell = d.ell as i64 + h as i64 - f.len() as i64;
    if new_ell < 0 {
        return None;
    }
    let new_ell = new_ell as usize;
    let fits = match d.core.max_elem() {
        Some(top) => top + new_ell < n,
        None => new_ell <= n,
    };
    if !fits {
        return None;
    }
    let mut v = d.core.elements().to_vec();
    v.extend(n - new_ell + 1..=n);
    Some(KSet::raw(n, v))
}

/// The `ki`-parity of `r1` when it exists, otherwise the last `ki`-set
/// preceding `r1`.
pub fn corresponding_set(r1: &KSet, ki: usize) -> Result<KSet> {
    if ki > r1.len() {
        return invalid(format!("ki = {ki} exceeds |R1| = {}", r1.len()));
    }
    if let Some(p) = parity_of(r1, ki) {
        return Ok(p);
    }
    match last_at_or_before(r1, ki) {
        Some(k) => Ok(k),
        None => not_found(format!("no corresponding {ki}-set for {r1:?}")),
    }
}

/// Whether `𝓛(a)` and `𝓛(b)` form a maximal cross-intersecting pair.
pub fn is_maximal_pair(a: &KSet, b: &KSet) -> Result<bool> {
    if a.n() != b.n() {
        return invalid("ground sets differ");
    }
    if a.is_empty() || b.is_empty() {
        return invalid("maximal pair with an empty ID");
    }
    if a.len() + b.len() > a.n() {
        return invalid(format!("|A| + |B| = {} exceeds n = {}", a.len() + b.len(), a.n()));
    }
    let ca = decompose(a).core;
    let cb = decompose(b).core;
    if ca.is_empty() || cb.is_empty() {
        return Ok(false);
    }
    Ok(ca == partner(&cb)?)
}

/// ID of the largest L-initial `b`-family cross-intersecting `𝓛(a, |a|)`.
///
/// Returns `NotFound` when no nonempty such family exists.
pub fn max_cross_id(a: &KSet, b: usize) -> Result<KSet> {
    let n = a.n();
    if a.is_empty() || b == 0 {
        return invalid("max_cross_id needs a nonempty A and b >= 1");
    }
    if b > n {
        return invalid(format!("b = {b} exceeds n = {n}"));
    }
    if n < a.len() + b {
        return KSet::last(n, b);
    }
    let c = decompose(a).core;
    if c.is_empty() {
        return not_found(format!("{a:?} is the last set; every {b}-set misses a member"));
    }
    Ok(kpartner(&c, b)?.value)
}

/// Whether `𝓛(a, |a|)` and `𝓛(b, |b|)` are cross-intersecting.
pub fn cross_lex(a: &KSet, b: &KSet) -> bool {
    if a.len() + b.len() > a.n() {
        return true;
    }
    match max_cross_id(a, b.len()) {
        Ok(m) => lex_le(b, &m),
        Err(Error::NotFound(_)) => false,
        Err(e) => panic!("cross_lex on validated input failed: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexset::{core, ksets, Ground};

    fn s(n: usize, v: &[usize]) -> KSet {
        KSet::new(n, v.to_vec()).unwrap()
    }

    fn nonempty_subsets(n: usize) -> impl Iterator<Item = KSet> {
        (1u32..1 << n)
            .map(move |m| KSet::raw(n, (1..=n).filter(|x| m >> (x - 1) & 1 == 1).collect()))
    }

    fn family(n: usize, id: &KSet) -> Vec<KSet> {
        ksets(n, id.len()).take_while(|f| lex_le(f, id)).collect()
    }

    fn oracle_cross(n: usize, a: &KSet, b: &KSet) -> bool {
        let fb = family(n, b);
        family(n, a).iter().all(|x| fb.iter().all(|y| x.intersects(y)))
    }

    #[test]
    fn partner_examples() {
        assert_eq!(partner(&s(9, &[2, 4, 7])).unwrap(), s(9, &[1, 3, 5, 6, 7]));
        assert_eq!(partner(&s(9, &[1])).unwrap(), s(9, &[1]));
        assert_eq!(partner(&s(9, &[2, 4])).unwrap(), s(9, &[1, 3, 4]));
        assert!(partner(&KSet::empty(9)).is_err());
    }

    #[test]
    fn partner_is_involution() {
        for f in nonempty_subsets(9) {
            let h = partner(&f).unwrap();
            assert_eq!(partner(&h).unwrap(), f);
            let q = f.max_elem().unwrap();
            assert_eq!(f.union(&h), KSet::interval(9, 1, q).unwrap());
            assert_eq!(f.len() + h.len(), q + 1);
        }
    }

    #[test]
    fn kpartner_examples() {
        let f = s(9, &[2, 4, 7]);
        let r = kpartner(&f, 4).unwrap();
        assert_eq!((r.value, r.kind), (s(9, &[1, 3, 4, 9]), PartnerKind::Predecessor));
        let r = kpartner(&f, 5).unwrap();
        assert_eq!((r.value, r.kind), (s(9, &[1, 3, 5, 6, 7]), PartnerKind::Exact));
        let r = kpartner(&f, 6).unwrap();
        assert_eq!((r.value, r.kind), (s(9, &[1, 3, 5, 6, 7, 9]), PartnerKind::Padded));
        assert!(matches!(kpartner(&f, 7), Err(Error::InvalidInput(_))));
        // partner {1,2,3,4} starts with [2]
        assert!(matches!(kpartner(&s(9, &[4]), 2), Err(Error::NotFound(_))));
    }

    #[test]
    fn last_at_or_before_matches_unrank() {
        for n in 1..=8 {
            let g = Ground::<u64>::new(n);
            for h in nonempty_subsets(n) {
                for k in 1..=n {
                    let r = g.rank_general(k, &h).unwrap();
                    let want = (r > 0).then(|| g.unrank(k, &r).unwrap());
                    assert_eq!(last_at_or_before(&h, k), want, "h={h:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn kpartner_depends_only_on_core() {
        for n in 2..=8 {
            for f in nonempty_subsets(n) {
                let c = core(&f);
                for k in 1..=n - f.len() {
                    let full = kpartner(&f, k).map(|r| r.value);
                    let via_core = if c.is_empty() {
                        Err(Error::NotFound(String::new()))
                    } else {
                        kpartner(&c, k).map(|r| r.value)
                    };
                    match (full, via_core) {
                        (Ok(a), Ok(b)) => assert_eq!(a, b),
                        (Err(Error::NotFound(_)), Err(Error::NotFound(_))) => {}
                        (a, b) => panic!("{f:?} k={k}: {a:?} vs {b:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_of(&s(9, &[2, 4, 9]), 4), Some(s(9, &[2, 4, 8, 9])));
        assert_eq!(parity_of(&s(9, &[6, 8, 9]), 5), None);
        assert_eq!(parity_of(&s(9, &[2, 8, 9]), 1), Some(s(9, &[2])));
        assert_eq!(parity_of(&s(9, &[2, 4, 7]), 2), None);
        // empty core: max treated as 0
        assert_eq!(parity_of(&s(6, &[5, 6]), 5), Some(s(6, &[2, 3, 4, 5, 6])));
        assert_eq!(parity_of(&s(6, &[5, 6]), 6), Some(s(6, &[1, 2, 3, 4, 5, 6])));
    }

    #[test]
    fn parity_is_the_unique_same_core_set() {
        for n in 1..=8 {
            for f in nonempty_subsets(n) {
                let d = decompose(&f);
                for h in 1..=n {
                    let brute: Vec<KSet> = ksets(n, h)
                        .filter(|x| {
                            let e = decompose(x);
                            e.core == d.core
                                && e.ell as i64 - d.ell as i64 == h as i64 - f.len() as i64
                        })
                        .collect();
                    assert!(brute.len() <= 1);
                    assert_eq!(parity_of(&f, h), brute.into_iter().next(), "{f:?} h={h}");
                }
            }
        }
    }

    #[test]
    fn corresponding_examples() {
        assert_eq!(corresponding_set(&s(9, &[2, 4, 8, 9]), 3).unwrap(), s(9, &[2, 4, 9]));
        assert_eq!(corresponding_set(&s(9, &[2, 4, 5, 7]), 3).unwrap(), s(9, &[2, 3, 9]));
        assert_eq!(corresponding_set(&s(9, &[2, 4, 5, 7]), 4).unwrap(), s(9, &[2, 4, 5, 7]));
        assert!(corresponding_set(&s(9, &[2, 4]), 3).is_err());
    }

    #[test]
    fn maximal_pair_examples() {
        assert!(is_maximal_pair(&s(9, &[2, 4, 9]), &s(9, &[1, 3, 4, 9])).unwrap());
        assert!(!is_maximal_pair(&s(9, &[2, 4, 7]), &s(9, &[1, 3, 4, 9])).unwrap());
        for n in 2..=10 {
            for a in 1..n {
                for b in 1..=n - a {
                    let sa = KSet::new(n, std::iter::once(1).chain(n - a + 2..=n).collect()).unwrap();
                    let sb = KSet::new(n, std::iter::once(1).chain(n - b + 2..=n).collect()).unwrap();
                    assert!(is_maximal_pair(&sa, &sb).unwrap());
                }
            }
        }
        assert!(is_maximal_pair(&s(4, &[1, 2, 3]), &s(4, &[1, 2])).is_err());
    }

    #[test]
    fn max_cross_examples() {
        assert_eq!(max_cross_id(&s(9, &[2, 4, 7]), 4).unwrap(), s(9, &[1, 3, 4, 9]));
        assert_eq!(max_cross_id(&s(5, &[2, 4, 5]), 3).unwrap(), s(5, &[3, 4, 5]));
        assert_eq!(max_cross_id(&s(5, &[1, 5]), 2).unwrap(), s(5, &[1, 5]));
        assert!(matches!(max_cross_id(&s(5, &[4, 5]), 2), Err(Error::NotFound(_))));
    }

    #[test]
    fn cross_lex_examples() {
        assert!(cross_lex(&s(9, &[2, 4, 9]), &s(9, &[1, 3, 4, 9])));
        assert!(cross_lex(&s(9, &[2, 4, 7]), &s(9, &[1, 3, 4, 9])));
        assert!(!cross_lex(&s(9, &[1, 3, 5, 6]), &s(9, &[2, 4, 7])));
        assert!(cross_lex(&s(5, &[2, 4, 5]), &s(5, &[3, 4, 5])));
    }

    #[test]
    fn cross_lex_matches_oracle_small() {
        for n in 2..=7 {
            for a in 1..=3.min(n) {
                for b in 1..=3.min(n) {
                    for x in ksets(n, a) {
                        for y in ksets(n, b) {
                            assert_eq!(cross_lex(&x, &y), oracle_cross(n, &x, &y), "{x:?} {y:?}");
                        }
                    }
                }
            }
        }
    }
}
