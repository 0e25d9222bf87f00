use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Arbitrary-precision nonnegative integer with an inline fast path.
///
/// Values that fit in a `u64` are stored inline; anything larger spills to a
/// [`BigUint`]. The representation is canonical (`Big` is only used above
/// `u64::MAX`), so derived equality and hashing are value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Natural {
    Small(u64),
    Big(BigUint),
}

impl Natural {
    pub const ZERO: Natural = Natural::Small(0);
    pub const ONE: Natural = Natural::Small(1);

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Natural::Small(0))
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            Natural::Small(v) => BigUint::from(*v),
            Natural::Big(b) => b.clone(),
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Natural::Small(v) => Some(*v),
            Natural::Big(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Natural::Small(v) => *v as f64,
            Natural::Big(b) => b.to_f64().unwrap_or(f64::INFINITY),
        }
    }

    fn from_u128(v: u128) -> Natural {
        match u64::try_from(v) {
            Ok(s) => Natural::Small(s),
            Err(_) => Natural::Big(BigUint::from(v)),
        }
    }

    fn normalize(b: BigUint) -> Natural {
        match b.to_u64() {
            Some(s) => Natural::Small(s),
            None => Natural::Big(b),
        }
    }

    /// `self += a * b` without materializing the product when it fits inline.
    #[inline]
    pub fn add_mul(&mut self, a: &Natural, b: &Natural) {
        if let (Natural::Small(acc), Natural::Small(x), Natural::Small(y)) = (&*self, a, b) {
            let prod = (*x as u128) * (*y as u128);
            if let Some(sum) = prod.checked_add(*acc as u128) {
                *self = Natural::from_u128(sum);
                return;
            }
        }
        if a.is_zero() || b.is_zero() {
            return;
        }
        let prod = a * b;
        *self += &prod;
    }

    /// Exact division; `None` when `divisor` is zero or does not divide `self`.
    pub fn div_exact(&self, divisor: u64) -> Option<Natural> {
        if divisor == 0 {
            return None;
        }
        match self {
            Natural::Small(v) => (v % divisor == 0).then(|| Natural::Small(v / divisor)),
            Natural::Big(b) => {
                let d = BigUint::from(divisor);
                (b % &d).is_zero().then(|| Natural::normalize(b / d))
            }
        }
    }

    pub fn mul_u64(&self, factor: u64) -> Natural {
        self * &Natural::Small(factor)
    }
}

impl Default for Natural {
    fn default() -> Self {
        Natural::ZERO
    }
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural::Small(v)
    }
}

impl From<u32> for Natural {
    fn from(v: u32) -> Self {
        Natural::Small(v as u64)
    }
}

impl From<usize> for Natural {
    fn from(v: usize) -> Self {
        Natural::Small(v as u64)
    }
}

impl From<BigUint> for Natural {
    fn from(b: BigUint) -> Self {
        Natural::normalize(b)
    }
}

impl From<&Natural> for BigUint {
    fn from(n: &Natural) -> Self {
        n.to_biguint()
    }
}

impl FromStr for Natural {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s).map(Natural::normalize)
    }
}

impl<'a> AddAssign<&'a Natural> for Natural {
    #[inline]
    fn add_assign(&mut self, rhs: &'a Natural) {
        match (&mut *self, rhs) {
            (Natural::Small(a), Natural::Small(b)) => match a.checked_add(*b) {
                Some(s) => *a = s,
                None => *self = Natural::Big(BigUint::from(*a) + *b),
            },
            (Natural::Big(a), Natural::Small(b)) => *a += *b,
            (Natural::Small(a), Natural::Big(b)) => *self = Natural::Big(b + *a),
            (Natural::Big(a), Natural::Big(b)) => *a += b,
        }
    }
}

impl AddAssign for Natural {
    fn add_assign(&mut self, rhs: Natural) {
        *self += &rhs;
    }
}

impl<'a> Add<&'a Natural> for &'a Natural {
    type Output = Natural;

    fn add(self, rhs: &'a Natural) -> Natural {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Natural {
    type Output = Natural;

    fn add(mut self, rhs: Natural) -> Natural {
        self += &rhs;
        self
    }
}

impl<'a> Mul<&'a Natural> for &'a Natural {
    type Output = Natural;

    #[inline]
    fn mul(self, rhs: &'a Natural) -> Natural {
        match (self, rhs) {
            (Natural::Small(a), Natural::Small(b)) => {
                Natural::from_u128((*a as u128) * (*b as u128))
            }
            _ if self.is_zero() || rhs.is_zero() => Natural::ZERO,
            (Natural::Small(a), Natural::Big(b)) | (Natural::Big(b), Natural::Small(a)) => {
                Natural::Big(b * *a)
            }
            (Natural::Big(a), Natural::Big(b)) => Natural::Big(a * b),
        }
    }
}

impl Mul for Natural {
    type Output = Natural;

    fn mul(self, rhs: Natural) -> Natural {
        &self * &rhs
    }
}

impl Sum for Natural {
    fn sum<I: Iterator<Item = Natural>>(iter: I) -> Self {
        let mut acc = Natural::ZERO;
        for v in iter {
            acc += &v;
        }
        acc
    }
}

impl<'a> Sum<&'a Natural> for Natural {
    fn sum<I: Iterator<Item = &'a Natural>>(iter: I) -> Self {
        let mut acc = Natural::ZERO;
        for v in iter {
            acc += v;
        }
        acc
    }
}

impl Ord for Natural {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Natural::Small(a), Natural::Small(b)) => a.cmp(b),
            (Natural::Small(_), Natural::Big(_)) => Ordering::Less,
            (Natural::Big(_), Natural::Small(_)) => Ordering::Greater,
            (Natural::Big(a), Natural::Big(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Natural {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Natural::Small(v) => write!(f, "{v}"),
            Natural::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spills_past_u64() {
        let a = Natural::from(u64::MAX);
        let b = &a + &Natural::ONE;
        assert!(matches!(b, Natural::Big(_)));
        assert_eq!(b.to_string(), "18446744073709551616");
        let sq = &a * &a;
        assert_eq!(sq.to_biguint(), BigUint::from(u64::MAX) * BigUint::from(u64::MAX));
    }

    #[test]
    fn div_exact_rejects_remainders() {
        assert_eq!(Natural::from(12u64).div_exact(4), Some(Natural::from(3u64)));
        assert_eq!(Natural::from(13u64).div_exact(4), None);
        assert_eq!(Natural::from(13u64).div_exact(0), None);
    }

    fn big(n: &Natural) -> BigUint {
        n.to_biguint()
    }

    proptest! {
        #[test]
        fn matches_biguint(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let (na, nb, nc) = (Natural::from(a), Natural::from(b), Natural::from(c));
            let mut acc = na.clone();
            acc.add_mul(&nb, &nc);
            acc.add_mul(&acc.clone(), &nb);
            let mut expect = BigUint::from(a) + BigUint::from(b) * BigUint::from(c);
            expect = &expect + &expect * BigUint::from(b);
            prop_assert_eq!(big(&acc), expect.clone());
            prop_assert_eq!(Natural::from(expect.clone()), acc);
        }
    }
}
