use std::cmp::Ordering;

use crossfam::lexset::{compare_lex, decompose, pred, seq_step, succ, Ground};
use crossfam::partner::{cross_lex, kpartner, max_cross_id, parity_of, partner};
use crossfam::{Count, Error, KSet};
use proptest::prelude::*;

fn kset(nmax: usize, kmax: usize) -> impl Strategy<Value = KSet> {
    (1..=nmax)
        .prop_flat_map(move |n| {
            let pool: Vec<usize> = (1..=n).collect();
            (Just(n), proptest::sample::subsequence(pool, 1..=kmax.min(n)))
        })
        .prop_map(|(n, v)| KSet::new(n, v).unwrap())
}

fn pair_same_n(nmax: usize, kmax: usize) -> impl Strategy<Value = (KSet, KSet)> {
    (2..=nmax).prop_flat_map(move |n| {
        let pool: Vec<usize> = (1..=n).collect();
        let k = kmax.min(n);
        (
            proptest::sample::subsequence(pool.clone(), 1..=k),
            proptest::sample::subsequence(pool, 1..=k),
        )
            .prop_map(move |(a, b)| (KSet::new(n, a).unwrap(), KSet::new(n, b).unwrap()))
    })
}

fn pair_same_size(nmax: usize, kmax: usize) -> impl Strategy<Value = (KSet, KSet)> {
    (2..=nmax)
        .prop_flat_map(move |n| (Just(n), 1..=kmax.min(n)))
        .prop_flat_map(|(n, k)| {
            let pool: Vec<usize> = (1..=n).collect();
            (proptest::sample::subsequence(pool.clone(), k), proptest::sample::subsequence(pool, k))
                .prop_map(move |(a, b)| (KSet::new(n, a).unwrap(), KSet::new(n, b).unwrap()))
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn unrank_inverts_rank(s in kset(30, 10)) {
        let g = Ground::<Count>::new(s.n());
        let r = g.rank(s.len(), &s).unwrap();
        prop_assert_eq!(g.unrank(s.len(), &r).unwrap(), s.clone());
        let fast = Ground::<u64>::new(s.n());
        prop_assert_eq!(Count::from(fast.rank(s.len(), &s).unwrap()), r);
    }

    #[test]
    fn successor_adds_one(s in kset(20, 8)) {
        let g = Ground::<u64>::new(s.n());
        let r = g.rank(s.len(), &s).unwrap();
        match succ(&s) {
            Some(t) => {
                prop_assert_eq!(g.rank(s.len(), &t).unwrap(), r + 1);
                prop_assert_eq!(pred(&t), Some(s.clone()));
            }
            None => prop_assert_eq!(r, g.size(s.len()).unwrap()),
        }
    }

    #[test]
    fn rank_is_monotone((a, b) in pair_same_size(16, 6)) {
        let g = Ground::<u64>::new(a.n());
        let (ra, rb) = (g.rank(a.len(), &a).unwrap(), g.rank(b.len(), &b).unwrap());
        prop_assert_eq!(compare_lex(&a, &b).unwrap(), ra.cmp(&rb));
    }

    #[test]
    fn rank_general_matches_rank_at_equal_size(s in kset(20, 8)) {
        let g = Ground::<u64>::new(s.n());
        prop_assert_eq!(g.rank_general(s.len(), &s).unwrap(), g.rank(s.len(), &s).unwrap());
    }

    #[test]
    fn partner_is_an_involution(s in kset(30, 30)) {
        prop_assert_eq!(partner(&partner(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn decomposition_splits_the_set(s in kset(24, 12)) {
        let d = decompose(&s);
        let n = s.n();
        prop_assert_eq!(d.tail.len(), d.ell);
        prop_assert!(d.tail.elements().iter().copied().eq(n - d.ell + 1..=n));
        prop_assert_eq!(d.core.union(&d.tail), s.clone());
        prop_assert!(d.core.max_elem().is_none_or(|m| m + 1 < n - d.ell + 1));
    }

    #[test]
    fn sequential_steps_reach_the_top(s in kset(20, 8), c in 1usize..4) {
        prop_assume!(c <= s.len());
        let e = s.elements();
        let block = &e[e.len() - c..];
        prop_assume!(block.windows(2).all(|w| w[1] == w[0] + 1));
        let mut cur = s.clone();
        let mut steps = 0;
        while let Some(next) = seq_step(&cur, c).unwrap() {
            prop_assert_eq!(&next.elements()[..s.len() - c], &e[..s.len() - c]);
            prop_assert_eq!(compare_lex(&cur, &next).unwrap(), Ordering::Less);
            cur = next;
            steps += 1;
        }
        prop_assert_eq!(steps, s.n() - block[c - 1]);
    }

    #[test]
    fn kpartner_depends_only_on_core(s in kset(20, 8), k in 1usize..8) {
        prop_assume!(k + s.len() <= s.n());
        let c = decompose(&s).core;
        prop_assume!(!c.is_empty());
        let (a, b) = (kpartner(&s, k), kpartner(&c, k));
        match (a, b) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x.value, y.value),
            (Err(Error::NotFound(_)), Err(Error::NotFound(_))) => {}
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn kpartner_crosses_and_is_last((a, b) in pair_same_n(12, 5)) {
        prop_assume!(a.len() + b.len() <= a.n());
        if let Ok(m) = max_cross_id(&a, b.len()) {
            prop_assert!(cross_lex(&a, &m));
            prop_assert_eq!(cross_lex(&a, &b), compare_lex(&b, &m).unwrap() != Ordering::Greater);
        }
    }

    #[test]
    fn parity_round_trips(s in kset(20, 6), h in 1usize..10) {
        prop_assume!(h < s.n());
        if let Some(p) = parity_of(&s, h) {
            prop_assert_eq!(p.len(), h);
            prop_assert_eq!(decompose(&p).core, decompose(&s).core);
            prop_assert_eq!(parity_of(&p, s.len()), Some(s.clone()));
        }
    }
}
