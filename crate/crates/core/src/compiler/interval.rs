use crate::value::Value;

use super::CompileError;

/// Widest number the compiler will lay out, in magnitude bits.
pub const MAX_WIDTH: u64 = 1 << 14;

/// A closed integer range known to contain every value of a wire bundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Value,
    pub hi: Value,
}

fn min2(a: Value, b: Value) -> Value {
    if a <= b {
        a
    } else {
        b
    }
}

fn max2(a: Value, b: Value) -> Value {
    if a >= b {
        a
    } else {
        b
    }
}

impl Interval {
    pub fn new(lo: Value, hi: Value) -> Interval {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(v: Value) -> Interval {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn boolean() -> Interval {
        Interval::new(Value::ZERO, Value::ONE)
    }

    /// Values representable in `w` magnitude bits, with or without a sign.
    pub fn of_width(w: u64, signed: bool) -> Interval {
        let hi = Value::alpha(w);
        let lo = if signed { -hi.clone() } else { Value::ZERO };
        Interval::new(lo, hi)
    }

    pub fn as_point(&self) -> Option<&Value> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn nonneg(&self) -> bool {
        !self.lo.is_negative()
    }

    pub fn nonpos(&self) -> bool {
        !self.hi.is_positive()
    }

    /// Magnitude bits needed for every member.
    pub fn width(&self) -> u64 {
        self.lo.len().max(self.hi.len())
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval::new(min2(self.lo.clone(), o.lo.clone()), max2(self.hi.clone(), o.hi.clone()))
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    fn from_corners(c: [Value; 4]) -> Interval {
        let [a, b, x, y] = c;
        Interval::new(
            min2(min2(a.clone(), b.clone()), min2(x.clone(), y.clone())),
            max2(max2(a, b), max2(x, y)),
        )
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        Interval::from_corners([
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ])
    }

    pub fn div2(&self) -> Interval {
        Interval::new(self.lo.div2(), self.hi.div2())
    }

    pub fn sg(&self) -> Interval {
        Interval::new(self.lo.sg(), self.hi.sg())
    }

    /// Range of |v|.
    pub fn abs(&self) -> (Value, Value) {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        if self.lo.is_negative() && self.hi.is_positive() || self.lo.is_zero() || self.hi.is_zero() {
            (Value::ZERO, max2(a, b))
        } else {
            (min2(a.clone(), b.clone()), max2(a, b))
        }
    }

    /// Range of ℓ(v).
    pub fn len_range(&self) -> (u64, u64) {
        let (a, b) = self.abs();
        (a.len(), b.len())
    }

    pub fn len(&self) -> Interval {
        let (a, b) = self.len_range();
        Interval::new(Value::from(a), Value::from(b))
    }

    /// Members times 2^e for e ∈ [elo, ehi].
    pub fn shl_range(&self, elo: u64, ehi: u64) -> Result<Interval, CompileError> {
        guard(self.width() + ehi)?;
        Ok(Interval::from_corners([
            self.lo.shl(elo),
            self.lo.shl(ehi),
            self.hi.shl(elo),
            self.hi.shl(ehi),
        ]))
    }

    /// ⌊v / 2^e⌋ for e ∈ [elo, ehi].
    pub fn shr_range(&self, elo: u64, ehi: u64) -> Interval {
        Interval::from_corners([
            self.lo.shr_floor(elo),
            self.lo.shr_floor(ehi),
            self.hi.shr_floor(elo),
            self.hi.shr_floor(ehi),
        ])
    }
}

pub fn guard(bits: u64) -> Result<(), CompileError> {
    if bits > MAX_WIDTH {
        Err(CompileError::WidthLimit { bits })
    } else {
        Ok(())
    }
}
