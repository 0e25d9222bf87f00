use std::fmt;

use super::{Natural, RingWeight};

/// Polynomial in one variable `z` with [`Natural`] coefficients, truncated
/// above a fixed degree.
///
/// The coefficient of `z^(low + i)` is `coeffs[i]`; the vector is trimmed at
/// both ends so the zero polynomial has no coefficients. `cap` is the largest
/// retained degree. Constants produced by [`RingWeight::zero`] and
/// [`RingWeight::one`] carry an unbounded cap, so they act as identities for
/// any truncation bound; every operation keeps the smaller cap of its inputs.
#[derive(Clone)]
pub struct TruncPoly {
    low: usize,
    coeffs: Vec<Natural>,
    cap: usize,
}

impl TruncPoly {
    pub const UNBOUNDED: usize = usize::MAX;

    /// Builds `sum_i coeffs[i] * z^i`, dropping every term above `cap`.
    pub fn from_coeffs(coeffs: Vec<Natural>, cap: usize) -> TruncPoly {
        let mut p = TruncPoly { low: 0, coeffs, cap };
        if cap != Self::UNBOUNDED && p.coeffs.len() > cap + 1 {
            p.coeffs.truncate(cap + 1);
        }
        p.trim();
        p
    }

    pub fn monomial(degree: usize, coefficient: Natural, cap: usize) -> TruncPoly {
        if degree > cap || coefficient.is_zero() {
            return TruncPoly { low: 0, coeffs: Vec::new(), cap };
        }
        TruncPoly { low: degree, coeffs: vec![coefficient], cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Coefficient of `z^degree`.
    pub fn coeff(&self, degree: usize) -> Natural {
        if degree < self.low {
            return Natural::ZERO;
        }
        self.coeffs.get(degree - self.low).cloned().unwrap_or(Natural::ZERO)
    }

    /// Lowest degree with a nonzero coefficient, `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<usize> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    pub fn max_degree(&self) -> Option<usize> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() - 1)
    }

    /// Value at `z = 1`, i.e. the sum of the retained coefficients.
    pub fn eval_one(&self) -> Natural {
        self.coeffs.iter().sum()
    }

    /// `(degree, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Natural)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i, c))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Natural::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    fn hi(&self) -> usize {
        self.low + self.coeffs.len() - 1
    }

    /// Grows the coefficient window to cover `[low, hi]`.
    fn widen(&mut self, low: usize, hi: usize) {
        if self.coeffs.is_empty() {
            self.low = low;
            self.coeffs = vec![Natural::ZERO; hi - low + 1];
            return;
        }
        if low < self.low {
            let pad = self.low - low;
            self.coeffs.splice(0..0, std::iter::repeat_n(Natural::ZERO, pad));
            self.low = low;
        }
        let cur_hi = self.hi();
        if hi > cur_hi {
            self.coeffs.resize(self.coeffs.len() + (hi - cur_hi), Natural::ZERO);
        }
    }
}

impl RingWeight for TruncPoly {
    fn zero() -> Self {
        TruncPoly { low: 0, coeffs: Vec::new(), cap: Self::UNBOUNDED }
    }

    fn one() -> Self {
        TruncPoly { low: 0, coeffs: vec![Natural::ONE], cap: Self::UNBOUNDED }
    }

    #[inline]
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        let cap = self.cap.min(other.cap);
        self.cap = cap;
        if other.coeffs.is_empty() {
            return;
        }
        if other.low > cap {
            return;
        }
        let hi = other.hi().min(cap);
        let low = if self.coeffs.is_empty() { other.low } else { self.low.min(other.low) };
        self.widen(low, hi.max(if self.coeffs.is_empty() { hi } else { self.hi() }));
        for d in other.low..=hi {
            self.coeffs[d - self.low] += &other.coeffs[d - other.low];
        }
        if self.hi() > cap {
            let keep = cap + 1 - self.low;
            self.coeffs.truncate(keep);
        }
        self.trim();
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = TruncPoly::zero();
        out.cap = self.cap.min(other.cap);
        out.add_mul(self, other);
        out
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        let cap = self.cap.min(a.cap).min(b.cap);
        self.cap = cap;
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return;
        }
        let low = a.low + b.low;
        if low > cap {
            return;
        }
        let hi = (a.hi() + b.hi()).min(cap);
        let new_low = if self.coeffs.is_empty() { low } else { self.low.min(low) };
        let new_hi = if self.coeffs.is_empty() { hi } else { self.hi().max(hi) };
        self.widen(new_low, new_hi);
        let base = low - self.low;
        let span = hi - low;
        for (i, x) in a.coeffs.iter().enumerate() {
            if i > span {
                break;
            }
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(span - i + 1) {
                self.coeffs[base + i + j].add_mul(x, y);
            }
        }
        self.trim();
    }
}

impl PartialEq for TruncPoly {
    /// Compares coefficients only; the truncation bound is not part of the value.
    fn eq(&self, other: &Self) -> bool {
        self.low == other.low && self.coeffs == other.coeffs
    }
}

impl Eq for TruncPoly {}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}z")?,
                _ => write!(f, "{c}z^{d}")?,
            }
        }
        Ok(())
    }
}
