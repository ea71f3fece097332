//! Count scalars, binomial tables and signed differences.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A nonnegative integer type able to hold family sizes.
///
/// Fixed-width types report [`Error::Overflow`] instead of wrapping.
pub trait CountScalar:
    Clone
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> CountScalar for T where
    T: Clone
        + Ord
        + Hash
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

pub(crate) fn add<C: CountScalar>(a: &C, b: &C) -> Result<C> {
    a.checked_add(b)
        .ok_or_else(|| Error::Overflow(format!("{a} + {b}")))
}

pub(crate) fn sub<C: CountScalar>(a: &C, b: &C) -> Result<C> {
    a.checked_sub(b)
        .ok_or_else(|| Error::Overflow(format!("{a} - {b} is negative")))
}

pub(crate) fn sum<'a, C: CountScalar>(items: impl IntoIterator<Item = &'a C>) -> Result<C> {
    let mut acc = C::zero();
    for x in items {
        acc = add(&acc, x)?;
    }
    Ok(acc)
}

pub(crate) fn from_usize<C: CountScalar>(x: usize) -> Result<C> {
    C::from_usize(x).ok_or_else(|| Error::Overflow(format!("{x} does not fit")))
}

/// Pascal triangle with rows `0..=n`. Entries that overflow `C` are `None`.
#[derive(Clone, Debug)]
pub struct Binomials<C> {
    rows: Vec<Vec<Option<C>>>,
}

impl<C: CountScalar> Binomials<C> {
    pub fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<Option<C>>> = Vec::with_capacity(n + 1);
        rows.push(vec![Some(C::one())]);
        for m in 1..=n {
            let prev = &rows[m - 1];
            let mut row = Vec::with_capacity(m + 1);
            row.push(Some(C::one()));
            for r in 1..m {
                let v = match (&prev[r - 1], &prev[r]) {
                    (Some(a), Some(b)) => a.checked_add(b),
                    _ => None,
                };
                row.push(v);
            }
            row.push(Some(C::one()));
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn max_row(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(m, r)`, zero when `r > m`.
    pub fn get(&self, m: usize, r: usize) -> Result<C> {
        if r > m {
            return Ok(C::zero());
        }
        let row = self.rows.get(m).ok_or_else(|| {
            Error::InvalidInput(format!("binomial row {m} exceeds table size {}", self.max_row()))
        })?;
        row[r]
            .clone()
            .ok_or_else(|| Error::Overflow(format!("C({m},{r})")))
    }

    /// `C(m, r)` for signed arguments, zero outside `0 <= r <= m`.
    pub fn get_signed(&self, m: i64, r: i64) -> Result<C> {
        if m < 0 || r < 0 || r > m {
            return Ok(C::zero());
        }
        self.get(m as usize, r as usize)
    }
}

/// A signed quantity stored as sign and magnitude over a count scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signed<C> {
    negative: bool,
    magnitude: C,
}

impl<C: CountScalar> Signed<C> {
    pub fn zero() -> Self {
        Signed { negative: false, magnitude: C::zero() }
    }

    pub fn positive(magnitude: C) -> Self {
        Signed { negative: false, magnitude }
    }

    pub fn negative(magnitude: C) -> Self {
        let negative = !magnitude.is_zero();
        Signed { negative, magnitude }
    }

    /// `a - b`.
    pub fn diff(a: &C, b: &C) -> Self {
        if a >= b {
            Signed::positive(a.checked_sub(b).expect("a >= b"))
        } else {
            Signed::negative(b.checked_sub(a).expect("b > a"))
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_zero(&self) -> bool {
        self.magnitude.is_zero()
    }

    pub fn magnitude(&self) -> &C {
        &self.magnitude
    }

    pub fn neg(&self) -> Self {
        if self.negative {
            Signed::positive(self.magnitude.clone())
        } else {
            Signed::negative(self.magnitude.clone())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self.negative, other.negative) {
            (false, false) => Ok(Signed::positive(add(&self.magnitude, &other.magnitude)?)),
            (true, true) => Ok(Signed::negative(add(&self.magnitude, &other.magnitude)?)),
            (false, true) => Ok(Signed::diff(&self.magnitude, &other.magnitude)),
            (true, false) => Ok(Signed::diff(&other.magnitude, &self.magnitude)),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }
}

impl<C: CountScalar> PartialOrd for Signed<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: CountScalar> Ord for Signed<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.negative, other.negative) {
            (false, false) => self.magnitude.cmp(&other.magnitude),
            (true, true) => other.magnitude.cmp(&self.magnitude),
            (false, true) => Ordering::Greater,
            (true, false) => Ordering::Less,
        }
    }
}

impl<C: CountScalar> fmt::Display for Signed<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-{}", self.magnitude)
        } else {
            write!(f, "{}", self.magnitude)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn pascal_small() {
        let b = Binomials::<u64>::new(10);
        assert_eq!(b.get(10, 3).unwrap(), 120);
        assert_eq!(b.get(3, 5).unwrap(), 0);
        assert_eq!(b.get_signed(4, -1).unwrap(), 0);
        assert_eq!(b.get_signed(-2, 0).unwrap(), 0);
        assert!(b.get(11, 0).is_err());
    }

    #[test]
    fn fixed_width_overflow_is_reported() {
        let b = Binomials::<u8>::new(12);
        assert_eq!(b.get(12, 2).unwrap(), 66);
        assert!(matches!(b.get(12, 6), Err(Error::Overflow(_))));
    }

    #[test]
    fn big_rows_agree_with_u64() {
        let a = Binomials::<u64>::new(60);
        let b = Binomials::<BigUint>::new(60);
        for m in 0..=60 {
            for r in 0..=m {
                assert_eq!(BigUint::from(a.get(m, r).unwrap()), b.get(m, r).unwrap());
            }
        }
    }

    #[test]
    fn signed_arithmetic() {
        let a = Signed::<u32>::diff(&3, &7);
        assert_eq!(a.to_string(), "-4");
        let b = Signed::positive(4u32);
        assert!(a.add(&b).unwrap().is_zero());
        assert!(!a.add(&b).unwrap().is_negative());
        assert!(a < Signed::zero());
        assert_eq!(b.sub(&a).unwrap(), Signed::positive(8));
    }
}
