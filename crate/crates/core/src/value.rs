//! Signed arbitrary-precision integers with an inline fast path.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
enum Repr {
    Small(i64),
    Big(Box<BigInt>),
}

/// An integer in ℤ. Values that fit in an `i64` are stored inline.
#[derive(Clone)]
pub struct Value(Repr);

impl Value {
    pub const ZERO: Value = Value(Repr::Small(0));
    pub const ONE: Value = Value(Repr::Small(1));

    pub fn small(v: i64) -> Value {
        Value(Repr::Small(v))
    }

    fn from_big(b: BigInt) -> Value {
        match b.to_i64() {
            Some(v) => Value(Repr::Small(v)),
            None => Value(Repr::Big(Box::new(b))),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(v) => Some(*v),
            Repr::Big(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(v) if *v >= 0 => Some(*v as u64),
            Repr::Small(_) => None,
            Repr::Big(b) => b.to_u64(),
        }
    }

    pub fn to_usize(&self) -> Option<usize> {
        self.to_u64().and_then(|v| usize::try_from(v).ok())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => *v < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => *v > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    /// `Some(b)` when the value is 0 or 1.
    pub fn as_bool(&self) -> Option<bool> {
        match self.0 {
            Repr::Small(0) => Some(false),
            Repr::Small(1) => Some(true),
            _ => None,
        }
    }

    pub fn from_bool(b: bool) -> Value {
        Value::small(b as i64)
    }

    /// Bit length of |self|; ℓ(0) = 0.
    pub fn len(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => 64 - v.unsigned_abs().leading_zeros() as u64,
            Repr::Big(b) => b.bits(),
        }
    }

    pub fn sg(&self) -> Value {
        Value::from_bool(self.is_positive())
    }

    /// Bit `i` of |self|.
    pub fn magnitude_bit(&self, i: u64) -> bool {
        match &self.0 {
            Repr::Small(v) => i < 64 && (v.unsigned_abs() >> i) & 1 == 1,
            Repr::Big(b) => b.magnitude().bit(i),
        }
    }

    /// 2^e.
    pub fn pow2(e: u64) -> Value {
        if e < 62 {
            Value::small(1 << e)
        } else {
            Value::from_big(BigInt::one() << e)
        }
    }

    /// α(u) = 2^u − 1.
    pub fn alpha(u: u64) -> Value {
        if u < 62 {
            Value::small((1 << u) - 1)
        } else {
            Value::from_big((BigInt::one() << u) - 1)
        }
    }

    /// self · 2^e.
    pub fn shl(&self, e: u64) -> Value {
        if let Repr::Small(v) = self.0 {
            if v == 0 {
                return Value::ZERO;
            }
            if e < 63 && (v.unsigned_abs().leading_zeros() as u64) > e + 1 {
                return Value::small(v << e);
            }
        }
        Value::from_big(self.to_bigint() << e)
    }

    /// ⌊self / 2^e⌋.
    pub fn shr_floor(&self, e: u64) -> Value {
        match &self.0 {
            Repr::Small(v) => {
                if e >= 63 {
                    Value::small(if *v < 0 { -1 } else { 0 })
                } else {
                    Value::small(v >> e)
                }
            }
            Repr::Big(b) => Value::from_big(b.div_floor(&(BigInt::one() << e))),
        }
    }

    /// ⌊self / 2⌋.
    pub fn div2(&self) -> Value {
        self.shr_floor(1)
    }

    /// ⌈self / 2^e⌉.
    pub fn shr_ceil(&self, e: u64) -> Value {
        -&(-self).shr_floor(e)
    }

    pub fn abs(&self) -> Value {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Builds a nonnegative value from bits, least significant first.
    pub fn from_bits_lsb(bits: &[bool]) -> Value {
        if bits.len() < 63 {
            let mut v = 0i64;
            for (i, b) in bits.iter().enumerate() {
                if *b {
                    v |= 1 << i;
                }
            }
            return Value::small(v);
        }
        let mut digits = vec![0u64; bits.len().div_ceil(64)];
        for (i, b) in bits.iter().enumerate() {
            if *b {
                digits[i / 64] |= 1 << (i % 64);
            }
        }
        let mag = num_bigint::BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        Value::from_big(BigInt::from_biguint(BigSign::Plus, mag))
    }

    pub fn pow(&self, e: u32) -> Value {
        Value::from_big(num_traits::pow(self.to_bigint(), e as usize))
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Value {
        Value::small(v)
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Value {
        Value::small(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Value {
        match i64::try_from(v) {
            Ok(s) => Value::small(s),
            Err(_) => Value::from_big(BigInt::from(v)),
        }
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Value {
        Value::from(v as u64)
    }
}

impl From<BigInt> for Value {
    fn from(b: BigInt) -> Value {
        Value::from_big(b)
    }
}

impl From<&Value> for BigInt {
    fn from(v: &Value) -> BigInt {
        v.to_bigint()
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Value {}

impl std::hash::Hash for Value {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(v) => v.hash(state),
            Repr::Big(b) => b.hash(state),
        }
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Value) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Value) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq<i64> for Value {
    fn eq(&self, other: &i64) -> bool {
        matches!(self.0, Repr::Small(v) if v == *other)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $op:tt) => {
        impl std::ops::$trait<&Value> for &Value {
            type Output = Value;
            fn $method(self, rhs: &Value) -> Value {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = a.$checked(*b) {
                        return Value::small(r);
                    }
                }
                Value::from_big(self.to_bigint() $op rhs.to_bigint())
            }
        }
        impl std::ops::$trait<Value> for Value {
            type Output = Value;
            fn $method(self, rhs: Value) -> Value {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Value> for Value {
            type Output = Value;
            fn $method(self, rhs: &Value) -> Value {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<i64> for &Value {
            type Output = Value;
            fn $method(self, rhs: i64) -> Value {
                self.$method(&Value::small(rhs))
            }
        }
        impl std::ops::$trait<i64> for Value {
            type Output = Value;
            fn $method(self, rhs: i64) -> Value {
                (&self).$method(&Value::small(rhs))
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl std::ops::Neg for &Value {
    type Output = Value;
    fn neg(self) -> Value {
        if let Repr::Small(v) = self.0 {
            if let Some(r) = v.checked_neg() {
                return Value::small(r);
            }
        }
        Value::from_big(-self.to_bigint())
    }
}

impl std::ops::Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        -&self
    }
}

impl std::iter::Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Value {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Value, Self::Err> {
        Ok(Value::from_big(s.trim().parse::<BigInt>()?))
    }
}

impl Default for Value {
    fn default() -> Value {
        Value::ZERO
    }
}

impl Zero for Value {
    fn zero() -> Value {
        Value::ZERO
    }
    fn is_zero(&self) -> bool {
        Value::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &Value) -> BigInt {
        v.to_bigint()
    }

    #[test]
    fn length_of_small_and_large() {
        assert_eq!(Value::ZERO.len(), 0);
        assert_eq!(Value::ONE.len(), 1);
        assert_eq!(Value::small(-5).len(), 3);
        assert_eq!(Value::pow2(100).len(), 101);
        assert_eq!(Value::small(i64::MIN).len(), 64);
    }

    #[test]
    fn floor_division_rounds_down() {
        assert_eq!(Value::small(-3).div2(), -2);
        assert_eq!(Value::small(3).div2(), 1);
        assert_eq!((-Value::pow2(80) - Value::ONE).shr_floor(80), -2);
        assert_eq!(Value::small(-1).shr_floor(200), -1);
        assert_eq!(Value::small(5).shr_ceil(1), 3);
    }

    #[test]
    fn big_values_normalize_back_to_small() {
        let v = Value::pow2(70) - Value::pow2(70) + Value::small(3);
        assert!(v.as_i64() == Some(3));
    }

    proptest! {
        #[test]
        fn arithmetic_matches_bigint(a in any::<i64>(), b in any::<i64>(), e in 0u64..130) {
            let (va, vb) = (Value::small(a), Value::small(b));
            let (ba, bb) = (BigInt::from(a), BigInt::from(b));
            prop_assert_eq!(big(&(&va + &vb)), &ba + &bb);
            prop_assert_eq!(big(&(&va - &vb)), &ba - &bb);
            prop_assert_eq!(big(&(&va * &vb)), &ba * &bb);
            prop_assert_eq!(big(&va.shl(e)), &ba << e);
            prop_assert_eq!(big(&va.shr_floor(e)), ba.div_floor(&(BigInt::one() << e)));
            prop_assert_eq!(va.len(), ba.bits());
        }

        #[test]
        fn bits_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let v = Value::from_bits_lsb(&bits);
            for (i, b) in bits.iter().enumerate() {
                prop_assert_eq!(v.magnitude_bit(i as u64), *b);
            }
        }
    }
}
