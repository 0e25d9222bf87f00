//! Exact commutative-ring weights used by every counting engine.

mod natural;
mod poly;

pub use natural::Natural;
pub use poly::TruncPoly;

/// A commutative semiring of exact weights.
///
/// Engines are generic over this trait so the same code counts plain
/// homomorphisms ([`Natural`]) and length-resolved walk sums ([`TruncPoly`]).
pub trait RingWeight: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;

    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self) {
        let p = a.mul(b);
        self.add_assign(&p);
    }
}

impl RingWeight for Natural {
    fn zero() -> Self {
        Natural::ZERO
    }

    fn one() -> Self {
        Natural::ONE
    }

    #[inline]
    fn is_zero(&self) -> bool {
        Natural::is_zero(self)
    }

    #[inline]
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    #[inline]
    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    #[inline]
    fn add_mul(&mut self, a: &Self, b: &Self) {
        Natural::add_mul(self, a, b);
    }
}
