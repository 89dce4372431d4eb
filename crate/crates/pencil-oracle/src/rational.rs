//! Exact Gaussian-rational scalars: numbers `re + im·i` with arbitrary-
//! precision rational parts. This is the coefficient field for every exact
//! computation in this crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An element of `Q(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qi {
    pub re: BigRational,
    pub im: BigRational,
}

impl Qi {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Qi { re, im }
    }

    pub fn zero() -> Self {
        Qi { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Qi { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Qi {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    /// `num_re/den + (num_im/den) i`, exact.
    pub fn from_ratio(num_re: i64, num_im: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let d = BigInt::from(den);
        Qi {
            re: BigRational::new(BigInt::from(num_re), d.clone()),
            im: BigRational::new(BigInt::from(num_im), d),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Qi { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|^2 = re^2 + im^2` as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(i)");
        let d = self.norm_sqr();
        Qi { re: &self.re / &d, im: -(&self.im / &d) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    // Adequate for desk-scale magnitudes: split into quotient and remainder
    // so huge intermediates cannot overflow the conversion.
    let n = r.numer();
    let d = r.denom();
    let (q, rem) = (n / d, n % d);
    let qf = big_to_f64(&q);
    let remf = big_to_f64(&rem) / big_to_f64(d);
    qf + remf
}

fn big_to_f64(b: &BigInt) -> f64 {
    let s = b.to_string();
    s.parse::<f64>().unwrap_or(if b.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

impl fmt::Display for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait for &Qi {
            type Output = Qi;
            fn $method(self, other: &Qi) -> Qi {
                let $a = self;
                let $b = other;
                $body
            }
        }
        impl $trait for Qi {
            type Output = Qi;
            fn $method(self, other: Qi) -> Qi {
                (&self).$method(&other)
            }
        }
    };
}

binop!(Add, add, |a, b| Qi { re: &a.re + &b.re, im: &a.im + &b.im });
binop!(Sub, sub, |a, b| Qi { re: &a.re - &b.re, im: &a.im - &b.im });
binop!(Mul, mul, |a, b| Qi {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});
binop!(Div, div, |a, b| a * &b.inv());

impl Neg for &Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        -&self
    }
}
