use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number. Serialized as `"p/q"` (or `"p"` when integral).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Rational(BigRational::new(num, den))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    /// Decimal string rounded (half away from zero) to `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let num = self.0.numer().abs();
        let den = self.0.denom().clone();
        // exponent e with 10^e <= |x| < 10^(e+1)
        let ten = BigInt::from(10);
        let mut e: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
        let cmp_pow = |e: i64| -> bool {
            // |x| >= 10^e ?
            if e >= 0 {
                num >= &den * ten.pow(e as u32)
            } else {
                &num * ten.pow((-e) as u32) >= den
            }
        };
        while !cmp_pow(e) {
            e -= 1;
        }
        while cmp_pow(e + 1) {
            e += 1;
        }
        // scaled = |x| * 10^(sig-1-e), rounded
        let shift = sig as i64 - 1 - e;
        let (n, d) = if shift >= 0 {
            (&num * ten.pow(shift as u32), den.clone())
        } else {
            (num.clone(), &den * ten.pow((-shift) as u32))
        };
        let (q, r) = n.div_rem(&d);
        let mut digits = if &r * 2 >= d { q + 1 } else { q };
        let mut shift = shift;
        if digits.to_string().len() > sig {
            // rounding carried into a new digit
            digits /= 10;
            shift -= 1;
        }
        let s = digits.to_string();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if shift <= 0 {
            out.push_str(&s);
            for _ in 0..(-shift) {
                out.push('0');
            }
        } else {
            let shift = shift as usize;
            if s.len() > shift {
                let (a, b) = s.split_at(s.len() - shift);
                out.push_str(a);
                let b = b.trim_end_matches('0');
                if !b.is_empty() {
                    out.push('.');
                    out.push_str(b);
                }
            } else {
                let frac = format!("{}{}", "0".repeat(shift - s.len()), s);
                let frac = frac.trim_end_matches('0');
                out.push('0');
                if !frac.is_empty() {
                    out.push('.');
                    out.push_str(frac);
                }
            }
        }
        out
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseRationalError(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Rational::from_int(v)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}
