//! Closed-form maxima, objective functions and their difference functionals.

use serde::Serialize;

use crate::count::{add, CountScalar, Signed};
use crate::error::{invalid, Error, Result};
use crate::families::{
    classify, construction1, construction2, f23_contains, fill_tail, nonmixed_cover, range_bounds,
    star_id, within, Construction, Instance, Params, Regime,
};
use crate::lexset::{lex_le, KSet};
use crate::partner::{corresponding_set, kpartner, parity_of, partner};

/// Values of the two constructions and the resulting closed-form maximum.
///
/// In the nonmixed regime `lambda2` is the value of the system whose first
/// family meets `[k_t]` and whose other families contain it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Objectives<C> {
    pub lambda1: C,
    pub lambda2: C,
    pub m_formula: C,
    pub argmax: Vec<Construction>,
}

/// `(λ1, λ2)` in the mixed regime.
pub fn lambdas<C: CountScalar>(inst: &Instance<C>) -> Result<(C, C)> {
    if inst.regime() != Regime::Mixed {
        return invalid(format!("lambdas are defined for the mixed regime ({})", inst.params));
    }
    Ok((construction1(inst)?.1, construction2(inst)?.1))
}

pub fn m_formula<C: CountScalar>(inst: &Instance<C>) -> Result<Objectives<C>> {
    let (lambda1, lambda2) = match inst.regime() {
        Regime::Mixed => lambdas(inst)?,
        Regime::Nonmixed => (construction1(inst)?.1, nonmixed_cover(inst)?.1),
        r => return invalid(format!("no closed form for the {r} regime; use search")),
    };
    let mut argmax = Vec::new();
    if lambda1 >= lambda2 {
        argmax.push(Construction::Star);
    }
    if lambda2 >= lambda1 {
        argmax.push(Construction::Cover);
    }
    let m_formula = lambda1.clone().max(lambda2.clone());
    Ok(Objectives { lambda1, lambda2, m_formula, argmax })
}

fn require_regime<C: CountScalar>(inst: &Instance<C>, want: Regime) -> Result<()> {
    let r = inst.regime();
    if r != want {
        return invalid(format!("{} is {r}, expected {want}", inst.params));
    }
    Ok(())
}

fn check_nonmixed_id<C: CountScalar>(inst: &Instance<C>, r: &KSet) -> Result<()> {
    let (n, k1) = (inst.n(), inst.k(0));
    if r.len() != k1 || r.n() != n {
        return invalid(format!("{r:?} is not a {k1}-subset of [{n}]"));
    }
    if !lex_le(&star_id(n, k1)?, r) {
        return invalid(format!("{r:?} precedes the star ID"));
    }
    Ok(())
}

/// `|𝓛(R, k_1)| + Σ_{j>=2} |𝓛(T, k_j)|` with `T` the partner of `R`.
pub fn f_nonmixed<C: CountScalar>(inst: &Instance<C>, r: &KSet) -> Result<C> {
    require_regime(inst, Regime::Nonmixed)?;
    check_nonmixed_id(inst, r)?;
    let tt = partner(r)?;
    let mut acc = inst.rank(0, r)?;
    for j in 1..inst.t() {
        acc = add(&acc, &inst.ground.rank_general(inst.k(j), &tt)?)?;
    }
    Ok(acc)
}

/// The mixed-regime objective on the maximal-pair family of the second
/// range. Truncated IDs are restored with a top block first.
pub fn g_mixed<C: CountScalar>(inst: &Instance<C>, g2: &KSet) -> Result<C> {
    require_regime(inst, Regime::Mixed)?;
    let g2 = fill_tail(g2, inst.k(1))?;
    if f23_contains(&inst.params, &g2)?.is_none() {
        return invalid(format!("{g2:?} is not in the maximal-pair family"));
    }
    let g1 = parity_of(&g2, inst.k(0))
        .ok_or_else(|| Error::InvalidInput(format!("{g2:?} has no k_1-parity")))?;
    let mut acc = add(&inst.rank(0, &g1)?, &inst.rank(1, &g2)?)?;
    for i in 2..inst.t() {
        let ti = kpartner(&g2, inst.k(i))?.value;
        acc = add(&acc, &inst.rank(i, &ti)?)?;
    }
    Ok(acc)
}

/// A difference of objective values split as `gain - loss`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffPair<C> {
    pub gain: Signed<C>,
    pub loss: Signed<C>,
}

impl<C: CountScalar> DiffPair<C> {
    pub fn net(&self) -> Result<Signed<C>> {
        self.gain.sub(&self.loss)
    }
}

pub fn alpha_beta<C: CountScalar>(inst: &Instance<C>, r: &KSet, r2: &KSet) -> Result<DiffPair<C>> {
    require_regime(inst, Regime::Nonmixed)?;
    check_nonmixed_id(inst, r)?;
    check_nonmixed_id(inst, r2)?;
    if !lex_le(r, r2) {
        return invalid(format!("{r:?} comes after {r2:?}"));
    }
    let gain = Signed::diff(&inst.rank(0, r2)?, &inst.rank(0, r)?);
    let (t1, t2) = (partner(r)?, partner(r2)?);
    let mut loss = Signed::zero();
    for j in 1..inst.t() {
        let k = inst.k(j);
        let d = Signed::diff(&inst.ground.rank_general(k, &t1)?, &inst.ground.rank_general(k, &t2)?);
        loss = loss.add(&d)?;
    }
    Ok(DiffPair { gain, loss })
}

/// Number of indices among the first `s` with `k_i = k_1`.
pub fn s_prime(p: &Params, s: usize) -> usize {
    p.ks.iter().take(s).filter(|&&k| k == p.ks[0]).count()
}

fn general_id<C: CountScalar>(inst: &Instance<C>, s: usize, r1: &KSet) -> Result<KSet> {
    if inst.regime().s() != Some(s) {
        return invalid(format!("{} is {}, not the range split s = {s}", inst.params, inst.regime()));
    }
    let r1 = fill_tail(r1, inst.k(0))?;
    if !within(&r1, &range_bounds(&inst.params, s, 0)?) {
        return invalid(format!("{r1:?} lies outside the first range"));
    }
    Ok(r1)
}

/// The sets `R_1, ..., R_t` attached to `r1`: corresponding sets for the
/// first `s` families and `k_i`-partners for the rest.
pub fn general_components<C: CountScalar>(inst: &Instance<C>, s: usize, r1: &KSet) -> Result<Vec<KSet>> {
    let r1 = general_id(inst, s, r1)?;
    (0..inst.t())
        .map(|i| {
            if i < s {
                corresponding_set(&r1, inst.k(i))
            } else {
                Ok(kpartner(&r1, inst.k(i))?.value)
            }
        })
        .collect()
}

/// The general-range objective.
pub fn f_general<C: CountScalar>(inst: &Instance<C>, s: usize, r1: &KSet) -> Result<C> {
    let comps = general_components(inst, s, r1)?;
    let ranks = comps.iter().enumerate().map(|(i, c)| inst.rank(i, c)).collect::<Result<Vec<C>>>()?;
    crate::count::sum(&ranks)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaDelta<C> {
    /// Per-family gains for the first `s` families.
    pub alphas: Vec<Signed<C>>,
    pub gamma: Signed<C>,
    pub delta: Signed<C>,
}

impl<C: CountScalar> GammaDelta<C> {
    pub fn net(&self) -> Result<Signed<C>> {
        self.gamma.sub(&self.delta)
    }
}

pub fn gamma_delta<C: CountScalar>(
    inst: &Instance<C>,
    s: usize,
    r1: &KSet,
    r1b: &KSet,
) -> Result<GammaDelta<C>> {
    let a = general_id(inst, s, r1)?;
    let b = general_id(inst, s, r1b)?;
    if !lex_le(&a, &b) {
        return invalid(format!("{a:?} comes after {b:?}"));
    }
    let ca = general_components(inst, s, &a)?;
    let cb = general_components(inst, s, &b)?;
    let mut alphas = Vec::with_capacity(s);
    let mut gamma = Signed::zero();
    let mut delta = Signed::zero();
    for i in 0..inst.t() {
        let (ra, rb) = (inst.rank(i, &ca[i])?, inst.rank(i, &cb[i])?);
        if i < s {
            let d = Signed::diff(&rb, &ra);
            gamma = gamma.add(&d)?;
            alphas.push(d);
        } else {
            delta = delta.add(&Signed::diff(&ra, &rb))?;
        }
    }
    Ok(GammaDelta { alphas, gamma, delta })
}

/// Regime check shared by callers that need an `s`.
pub fn split_of(p: &Params) -> Option<usize> {
    classify(p).s()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::f23_iter;
    use crate::lexset::ksets;
    use num_bigint::BigUint;

    fn s(n: usize, v: &[usize]) -> KSet {
        KSet::new(n, v.to_vec()).unwrap()
    }

    fn inst(n: usize, ks: &[usize]) -> Instance<u64> {
        Instance::new(Params::new(n, ks.to_vec()).unwrap())
    }

    #[test]
    fn lambdas_and_formula() {
        let i = inst(6, &[4, 3, 2]);
        assert_eq!(lambdas(&i).unwrap(), (25, 31));
        let o = m_formula(&i).unwrap();
        assert_eq!((o.m_formula, o.argmax), (31, vec![Construction::Cover]));
        assert_eq!(lambdas(&inst(7, &[5, 3, 2])).unwrap(), (36, 46));
        let o = m_formula(&inst(5, &[2, 2, 2])).unwrap();
        assert_eq!((o.lambda1, o.lambda2, o.m_formula), (12, 9, 12));
        assert!(lambdas(&inst(5, &[2, 2, 2])).is_err());
        assert!(m_formula(&inst(4, &[3, 2, 2])).is_err());
    }

    #[test]
    fn argmax_follows_lambda_order() {
        // search mixed parameters for a tie and check the argmax set
        let mut found = 0;
        for n in 4..=20 {
            for p in small_params(n, 4) {
                if classify(&p) != Regime::Mixed {
                    continue;
                }
                let o = m_formula(&Instance::<BigUint>::new(p)).unwrap();
                match o.lambda1.cmp(&o.lambda2) {
                    std::cmp::Ordering::Equal => {
                        assert_eq!(o.argmax, vec![Construction::Star, Construction::Cover]);
                        found += 1;
                    }
                    std::cmp::Ordering::Greater => assert_eq!(o.argmax, vec![Construction::Star]),
                    std::cmp::Ordering::Less => assert_eq!(o.argmax, vec![Construction::Cover]),
                }
            }
        }
        assert!(found > 0);
    }

    fn small_params(n: usize, tmax: usize) -> Vec<Params> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (1..=n).map(|k| vec![k]).collect();
        while let Some(ks) = stack.pop() {
            if ks.len() >= 2 {
                if let Ok(p) = Params::new(n, ks.clone()) {
                    out.push(p);
                }
            }
            if ks.len() < tmax {
                for k in 1..=*ks.last().unwrap() {
                    let mut next = ks.clone();
                    next.push(k);
                    stack.push(next);
                }
            }
        }
        out
    }

    #[test]
    fn f_nonmixed_examples() {
        let i = inst(5, &[2, 2, 2]);
        assert_eq!(f_nonmixed(&i, &s(5, &[1, 5])).unwrap(), 12);
        assert_eq!(f_nonmixed(&i, &s(5, &[2, 3])).unwrap(), 9);
        assert!(f_nonmixed(&i, &s(5, &[1, 4])).is_err());
        assert!(f_nonmixed(&inst(6, &[4, 3, 2]), &s(6, &[2, 3, 4, 5])).is_err());
    }

    #[test]
    fn g_mixed_examples() {
        let i = inst(6, &[4, 3, 2]);
        assert_eq!(g_mixed(&i, &s(6, &[1, 5, 6])).unwrap(), 25);
        assert_eq!(g_mixed(&i, &s(6, &[2, 5, 6])).unwrap(), 31);
        let g = &i.ground;
        let want = g.rank(4, &s(6, &[2, 3, 4, 6])).unwrap()
            + g.rank(3, &s(6, &[2, 3, 4])).unwrap()
            + g.rank(2, &kpartner(&s(6, &[2, 3, 4]), 2).unwrap().value).unwrap();
        assert_eq!(g_mixed(&i, &s(6, &[2, 3, 4])).unwrap(), want);
        // truncated inputs
        assert_eq!(g_mixed(&i, &s(6, &[2])).unwrap(), 31);
        assert_eq!(g_mixed(&i, &s(6, &[1])).unwrap(), 25);
        assert!(g_mixed(&i, &s(6, &[3, 4, 5])).is_err());
    }

    #[test]
    fn alpha_beta_examples() {
        let i = inst(5, &[2, 2, 2]);
        let d = alpha_beta(&i, &s(5, &[1, 5]), &s(5, &[2, 3])).unwrap();
        assert_eq!((d.gain.to_string(), d.loss.to_string()), ("1".into(), "4".into()));
        assert_eq!(d.net().unwrap().to_string(), "-3");
        let z = alpha_beta(&i, &s(5, &[2, 4]), &s(5, &[2, 4])).unwrap();
        assert!(z.gain.is_zero() && z.loss.is_zero());
        assert!(alpha_beta(&i, &s(5, &[2, 3]), &s(5, &[1, 5])).is_err());
    }

    #[test]
    fn s_prime_examples() {
        assert_eq!(s_prime(&Params::new(6, vec![4, 3, 2]).unwrap(), 2), 1);
        assert_eq!(s_prime(&Params::new(9, vec![4, 4, 3, 2]).unwrap(), 2), 2);
        assert_eq!(s_prime(&Params::new(9, vec![5, 5, 5, 2]).unwrap(), 3), 3);
    }

    #[test]
    fn gamma_delta_example() {
        let i = inst(6, &[4, 3, 2]);
        let gd = gamma_delta(&i, 2, &s(6, &[2, 3, 4, 6]), &s(6, &[2, 3, 5, 6])).unwrap();
        let alphas: Vec<String> = gd.alphas.iter().map(|a| a.to_string()).collect();
        assert_eq!(alphas, vec!["1", "2"]);
        assert_eq!((gd.gamma.to_string(), gd.delta.to_string()), ("3".into(), "1".into()));
        let fa = f_general(&i, 2, &s(6, &[2, 3, 4, 6])).unwrap();
        let fb = f_general(&i, 2, &s(6, &[2, 3, 5, 6])).unwrap();
        assert_eq!(gd.net().unwrap(), Signed::diff(&fb, &fa));
    }

    #[test]
    fn f_general_examples() {
        let i = inst(6, &[4, 3, 2]);
        assert_eq!(f_general(&i, 2, &s(6, &[2, 4, 5, 6])).unwrap(), 31);
        assert_eq!(f_general(&i, 2, &s(6, &[1, 4, 5, 6])).unwrap(), 25);
        assert!(f_general(&i, 3, &s(6, &[1, 4, 5, 6])).is_err());
        assert!(f_general(&i, 2, &s(6, &[3, 4, 5, 6])).is_err());
    }

    #[test]
    fn bridge_on_small_instances() {
        for (n, ks) in [(6, vec![4, 3, 2]), (7, vec![5, 3, 2]), (8, vec![5, 4, 3, 2]), (8, vec![6, 3, 2])] {
            let i = Instance::<u64>::new(Params::new(n, ks).unwrap());
            for g2 in f23_iter(&i.params).unwrap() {
                let g1 = parity_of(&g2, i.k(0)).unwrap();
                assert_eq!(g_mixed(&i, &g2).unwrap(), f_general(&i, 2, &g1).unwrap(), "{g2:?}");
            }
        }
    }

    #[test]
    fn partner_rank_equals_kpartner_rank() {
        let i = inst(7, &[3, 3, 2]);
        for x in ksets(7, 3) {
            let tt = partner(&x).unwrap();
            for j in 1..3 {
                let k = i.k(j);
                let direct = i.ground.rank_general(k, &tt).unwrap();
                match kpartner(&x, k) {
                    Ok(kp) => assert_eq!(direct, i.rank(j, &kp.value).unwrap()),
                    Err(Error::NotFound(_)) => assert_eq!(direct, 0),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}
