use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Unsigned integer type used for node positions.
///
/// `u64` and `u128` are the fast paths; [`BigUint`] has no level limit.
pub trait Position: Clone + Eq + Ord + Hash + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_u64(v: u64) -> Self;
    /// `(self div b, self mod b)`.
    fn div_rem_small(&self, b: u32) -> (Self, u32);
    /// `self * b + i`, `None` on overflow.
    fn mul_add_small(&self, b: u32, i: u32) -> Option<Self>;
    fn to_biguint(&self) -> BigUint;
    fn from_biguint(v: &BigUint) -> Option<Self>;
    fn is_zero(&self) -> bool;

    /// `b^level`, `None` if it does not fit.
    fn power(b: u32, level: u32) -> Option<Self> {
        let mut acc = Self::from_u64(1);
        for _ in 0..level {
            acc = acc.mul_add_small(b, 0)?;
        }
        Some(acc)
    }

    /// True if every position on `level` (that is, `b^level - 1`) is representable.
    fn fits(b: u32, level: u32) -> bool {
        let mut max = Self::zero();
        for _ in 0..level {
            match max.mul_add_small(b, b - 1) {
                Some(m) => max = m,
                None => return false,
            }
        }
        true
    }
}

macro_rules! prim_position {
    ($t:ty) => {
        impl Position for $t {
            #[inline]
            fn zero() -> Self {
                0
            }
            #[inline]
            fn from_u64(v: u64) -> Self {
                v as $t
            }
            #[inline]
            fn div_rem_small(&self, b: u32) -> (Self, u32) {
                (self / b as $t, (self % b as $t) as u32)
            }
            #[inline]
            fn mul_add_small(&self, b: u32, i: u32) -> Option<Self> {
                self.checked_mul(b as $t)?.checked_add(i as $t)
            }
            fn to_biguint(&self) -> BigUint {
                BigUint::from(*self)
            }
            fn from_biguint(v: &BigUint) -> Option<Self> {
                <$t as TryFrom<&BigUint>>::try_from(v).ok()
            }
            #[inline]
            fn is_zero(&self) -> bool {
                *self == 0
            }
        }
    };
}

prim_position!(u64);
prim_position!(u128);

impl Position for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn div_rem_small(&self, b: u32) -> (Self, u32) {
        let (q, r) = self.div_rem(&BigUint::from(b));
        (q, r.to_u32().expect("remainder below b"))
    }
    fn mul_add_small(&self, b: u32, i: u32) -> Option<Self> {
        Some(self * b + i)
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
    fn from_biguint(v: &BigUint) -> Option<Self> {
        Some(v.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn power(b: u32, level: u32) -> Option<Self> {
        let mut acc = BigUint::one();
        for _ in 0..level {
            acc *= b;
        }
        Some(acc)
    }
}

/// Base-`b` digits of `j` on `level`, most significant first (`level` digits).
pub fn digits<P: Position>(j: &P, b: u32, level: u32) -> Vec<u32> {
    let mut out = vec![0; level as usize];
    let mut x = j.clone();
    for slot in out.iter_mut().rev() {
        let (q, r) = x.div_rem_small(b);
        *slot = r;
        x = q;
    }
    out
}

/// Inverse of [`digits`].
pub fn from_digits<P: Position>(d: &[u32], b: u32) -> Option<P> {
    d.iter().try_fold(P::zero(), |acc, &x| acc.mul_add_small(b, x))
}
