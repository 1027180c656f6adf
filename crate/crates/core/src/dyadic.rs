//! Exact dyadic rationals `numerator / 2^exponent`.
//!
//! Every vertex height in the construction is dyadic, so positions are kept
//! exact and compared by value. Values are normalized on construction
//! (odd numerator or zero with exponent 0), which makes the derived
//! `Eq`/`Hash` value-based.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    numerator: i64,
    exponent: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic {
        numerator: 0,
        exponent: 0,
    };

    pub fn new(numerator: i64, exponent: u32) -> Self {
        let mut d = Dyadic {
            numerator,
            exponent,
        };
        d.normalize();
        d
    }

    pub fn integer(value: i64) -> Self {
        Dyadic {
            numerator: value,
            exponent: 0,
        }
    }

    fn normalize(&mut self) {
        if self.numerator == 0 {
            self.exponent = 0;
            return;
        }
        let shift = self.numerator.trailing_zeros().min(self.exponent);
        self.numerator >>= shift;
        self.exponent -= shift;
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / (self.exponent as f64).exp2()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    /// Numerators of `self` and `other` scaled to the common exponent.
    fn aligned(&self, other: &Dyadic) -> (i128, i128, u32) {
        let e = self.exponent.max(other.exponent);
        let a = (self.numerator as i128) << (e - self.exponent);
        let b = (other.numerator as i128) << (e - other.exponent);
        (a, b, e)
    }

    fn from_wide(numerator: i128, exponent: u32) -> Self {
        let mut n = numerator;
        let mut e = exponent;
        while e > 0 && n % 2 == 0 {
            n /= 2;
            e -= 1;
        }
        Dyadic::new(
            i64::try_from(n).expect("dyadic numerator overflow"),
            e,
        )
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(&rhs);
        Dyadic::from_wide(a + b, e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            numerator: -self.numerator,
            exponent: self.exponent,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equality_is_value_based() {
        assert_eq!(Dyadic::new(2, 2), Dyadic::new(1, 1));
        assert_eq!(Dyadic::new(0, 7), Dyadic::ZERO);
        assert_eq!(Dyadic::new(8, 3), Dyadic::integer(1));
        assert_ne!(Dyadic::new(3, 2), Dyadic::new(1, 1));
    }

    #[test]
    fn arithmetic() {
        let a = Dyadic::new(3, 3); // 3/8
        let b = Dyadic::new(1, 2); // 1/4
        assert_eq!(a + b, Dyadic::new(5, 3));
        assert_eq!(a - b, Dyadic::new(1, 3));
        assert_eq!(b + Dyadic::integer(1), Dyadic::new(5, 2));
        assert_eq!((a + b).to_f64(), 0.625);
        assert!(b < a);
    }

    proptest! {
        #[test]
        fn ordering_matches_f64(n1 in -1000i64..1000, e1 in 0u32..12, n2 in -1000i64..1000, e2 in 0u32..12) {
            let a = Dyadic::new(n1, e1);
            let b = Dyadic::new(n2, e2);
            prop_assert_eq!(a.cmp(&b), a.to_f64().partial_cmp(&b.to_f64()).unwrap());
            prop_assert_eq!((a + b).to_f64(), a.to_f64() + b.to_f64());
        }
    }
}
