//! Runtime values for the expression evaluator.
//!
//! Arithmetic is exact (big rationals) rather than IEEE floating point, with
//! a magnitude budget standing in for the machine limits a real interpreter
//! runs into. Values still carry the int-vs-float type distinction because it
//! is observable: a tuple can be repeated by `2` but not by `2/1`. Complex
//! results (negative base raised to a non-integral power) are tracked as an
//! opaque marker: their only observable effects here are that ordering
//! comparisons fail and equality tests are (almost surely) false.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Why evaluation failed. Every variant maps to an invalid verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// Division or modulo by zero, or zero raised to a negative power.
    ZeroDivision,
    /// Unsupported operand types, e.g. ordering a tuple against an integer.
    TypeError,
    /// Shifting by a negative count.
    NegativeShift,
    /// Magnitude or step budget exhausted.
    Budget,
    /// The float-typed power path left the representable range.
    Overflow,
}

impl EvalError {
    pub fn reason(&self) -> &'static str {
        match self {
            EvalError::ZeroDivision => "division by zero",
            EvalError::TypeError => "type error",
            EvalError::NegativeShift => "negative shift count",
            EvalError::Budget => "budget",
            EvalError::Overflow => "overflow",
        }
    }
}

/// Caps on evaluation work. `max_digits` bounds the decimal magnitude of any
/// intermediate numerator or denominator; `max_steps` bounds operation count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    pub max_digits: u32,
    pub max_steps: u64,
}

impl Default for EvalBudget {
    fn default() -> Self {
        Self { max_digits: 4096, max_steps: 100_000 }
    }
}

impl EvalBudget {
    pub(crate) fn max_bits(&self) -> u64 {
        // log2(10) = 3.3219...; round up so 10^max_digits itself fits
        (self.max_digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(Num),
    /// Opaque complex marker.
    Complex,
    /// The empty tuple, the only tuple this grammar can build.
    Tuple,
}

/// An exact rational tagged with whether it is int-typed or float-typed.
#[derive(Debug, Clone, PartialEq)]
pub struct Num {
    pub value: BigRational,
    pub float_typed: bool,
}

impl Num {
    pub fn int(v: BigInt) -> Self {
        Self { value: BigRational::from_integer(v), float_typed: false }
    }

    fn float(value: BigRational) -> Self {
        Self { value, float_typed: true }
    }

    fn promoted(value: BigRational, a: &Num, b: &Num) -> Self {
        Self { value, float_typed: a.float_typed || b.float_typed }
    }
}

impl Value {
    pub fn int(v: i64) -> Self {
        Value::Num(Num::int(BigInt::from(v)))
    }

    pub fn bool(b: bool) -> Self {
        // Python booleans are integers; fold immediately
        Value::int(b as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    FloorDiv,
    Mod,
    Pow,
    Shl,
    Shr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

pub struct Machine {
    budget: EvalBudget,
    max_bits: u64,
    steps: u64,
}

impl Machine {
    pub fn new(budget: EvalBudget) -> Self {
        Self { budget, max_bits: budget.max_bits(), steps: 0 }
    }

    fn step(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Err(EvalError::Budget);
        }
        Ok(())
    }

    fn check_magnitude(&self, v: &BigRational) -> Result<(), EvalError> {
        if v.numer().bits() > self.max_bits || v.denom().bits() > self.max_bits {
            return Err(EvalError::Budget);
        }
        Ok(())
    }

    fn checked(&self, n: Num) -> Result<Value, EvalError> {
        self.check_magnitude(&n.value)?;
        Ok(Value::Num(n))
    }

    pub fn unary_neg(&mut self, v: Value) -> Result<Value, EvalError> {
        self.step()?;
        match v {
            Value::Num(n) => Ok(Value::Num(Num { value: -n.value, ..n })),
            Value::Complex => Ok(Value::Complex),
            Value::Tuple => Err(EvalError::TypeError),
        }
    }

    pub fn unary_pos(&mut self, v: Value) -> Result<Value, EvalError> {
        self.step()?;
        match v {
            Value::Tuple => Err(EvalError::TypeError),
            other => Ok(other),
        }
    }

    pub fn binary(&mut self, op: BinOp, a: Value, b: Value) -> Result<Value, EvalError> {
        self.step()?;
        match (a, b) {
            (Value::Num(a), Value::Num(b)) => self.num_binary(op, a, b),
            (Value::Tuple, Value::Tuple) => match op {
                BinOp::Add => Ok(Value::Tuple),
                _ => Err(EvalError::TypeError),
            },
            // sequence repetition needs an int-typed operand
            (Value::Tuple, Value::Num(n)) | (Value::Num(n), Value::Tuple) => match op {
                BinOp::Mul if !n.float_typed => Ok(Value::Tuple),
                _ => Err(EvalError::TypeError),
            },
            (Value::Num(base), Value::Complex) if op == BinOp::Pow => {
                if base.value.is_zero() {
                    // zero to a complex power raises
                    Err(EvalError::ZeroDivision)
                } else {
                    Ok(Value::Complex)
                }
            }
            (Value::Complex, Value::Num(_))
            | (Value::Num(_), Value::Complex)
            | (Value::Complex, Value::Complex) => match op {
                BinOp::FloorDiv | BinOp::Mod => Err(EvalError::TypeError),
                _ => Ok(Value::Complex),
            },
            _ => Err(EvalError::TypeError),
        }
    }

    fn num_binary(&mut self, op: BinOp, a: Num, b: Num) -> Result<Value, EvalError> {
        match op {
            BinOp::Add => self.checked(Num::promoted(&a.value + &b.value, &a, &b)),
            BinOp::Sub => self.checked(Num::promoted(&a.value - &b.value, &a, &b)),
            BinOp::Mul => self.checked(Num::promoted(&a.value * &b.value, &a, &b)),
            BinOp::Div => {
                if b.value.is_zero() {
                    return Err(EvalError::ZeroDivision);
                }
                self.checked(Num::float(&a.value / &b.value))
            }
            BinOp::FloorDiv => {
                if b.value.is_zero() {
                    return Err(EvalError::ZeroDivision);
                }
                let q = (&a.value / &b.value).floor();
                self.checked(Num::promoted(q, &a, &b))
            }
            BinOp::Mod => {
                if b.value.is_zero() {
                    return Err(EvalError::ZeroDivision);
                }
                let q = (&a.value / &b.value).floor();
                self.checked(Num::promoted(&a.value - &b.value * q, &a, &b))
            }
            BinOp::Pow => self.num_pow(a, b),
            BinOp::Shl | BinOp::Shr => self.num_shift(op, a, b),
        }
    }

    /// Bit shifts require int-typed operands and a non-negative count.
    fn num_shift(&mut self, op: BinOp, a: Num, b: Num) -> Result<Value, EvalError> {
        if a.float_typed || b.float_typed {
            return Err(EvalError::TypeError);
        }
        let v = a.value.to_integer();
        let count = b.value.to_integer();
        if count.is_negative() {
            return Err(EvalError::NegativeShift);
        }
        let shifted = match op {
            BinOp::Shl => {
                if v.is_zero() {
                    BigInt::zero()
                } else {
                    let count = count.to_u64().ok_or(EvalError::Budget)?;
                    if v.bits().saturating_add(count) > self.max_bits {
                        return Err(EvalError::Budget);
                    }
                    v << count
                }
            }
            BinOp::Shr => match count.to_u64() {
                Some(c) if c <= v.bits() => v >> c,
                // shifted past every bit: 0 for non-negative, -1 for negative
                _ => {
                    if v.is_negative() {
                        BigInt::from(-1)
                    } else {
                        BigInt::zero()
                    }
                }
            },
            _ => unreachable!(),
        };
        Ok(Value::Num(Num::int(shifted)))
    }

    fn num_pow(&mut self, base: Num, exp: Num) -> Result<Value, EvalError> {
        if exp.value.is_integer() {
            let e = exp.value.to_integer();
            if e.is_negative() {
                if base.value.is_zero() {
                    return Err(EvalError::ZeroDivision);
                }
                let r = self.rational_pow(&base.value, &BigInt::from(e.magnitude().clone()))?;
                // a negative exponent always produces a float in Python
                return self.checked(Num::float(r.recip()));
            }
            let r = self.rational_pow(&base.value, &e)?;
            return self.checked(Num::promoted(r, &base, &exp));
        }
        // non-integral exponent: the float power path
        if base.value.is_negative() {
            return Ok(Value::Complex);
        }
        if base.value.is_zero() {
            return if exp.value.is_negative() {
                Err(EvalError::ZeroDivision)
            } else {
                self.checked(Num::float(BigRational::zero()))
            };
        }
        let bf = to_finite_f64(&base.value)?;
        let ef = rational_to_f64_saturating(&exp.value);
        let r = bf.powf(ef);
        if !r.is_finite() {
            return Err(EvalError::Overflow);
        }
        let r = BigRational::from_float(r).ok_or(EvalError::Overflow)?;
        self.checked(Num::float(r))
    }

    /// Exact integer-exponent power with a pre-check so astronomically large
    /// results fail the budget before being materialized.
    fn rational_pow(&mut self, base: &BigRational, exp: &BigInt) -> Result<BigRational, EvalError> {
        debug_assert!(!exp.is_negative());
        if base.is_zero() {
            return Ok(if exp.is_zero() { BigRational::one() } else { BigRational::zero() });
        }
        if base.numer().magnitude() == base.denom().magnitude() {
            // |base| == 1
            let negative = base.is_negative() && exp.is_odd();
            return Ok(if negative { -BigRational::one() } else { BigRational::one() });
        }
        let width = base.numer().bits().max(base.denom().bits()) as u128;
        let e = match exp.to_u128() {
            Some(e) => e,
            None => return Err(EvalError::Budget),
        };
        if width.saturating_mul(e) > self.max_bits as u128 {
            return Err(EvalError::Budget);
        }
        let e = u32::try_from(e).map_err(|_| EvalError::Budget)?;
        let numer = base.numer().pow(e);
        let denom = base.denom().pow(e);
        Ok(BigRational::new(numer, denom))
    }

    pub fn compare(&mut self, op: CmpOp, a: &Value, b: &Value) -> Result<bool, EvalError> {
        self.step()?;
        match (a, b) {
            (Value::Num(a), Value::Num(b)) => Ok(match op {
                CmpOp::Eq => a.value == b.value,
                CmpOp::Ne => a.value != b.value,
                CmpOp::Lt => a.value < b.value,
                CmpOp::Le => a.value <= b.value,
                CmpOp::Gt => a.value > b.value,
                CmpOp::Ge => a.value >= b.value,
            }),
            (Value::Tuple, Value::Tuple) => Ok(match op {
                CmpOp::Eq | CmpOp::Le | CmpOp::Ge => true,
                CmpOp::Ne | CmpOp::Lt | CmpOp::Gt => false,
            }),
            // mixed types: equality is defined (and false), ordering is not
            _ => match op {
                CmpOp::Eq => Ok(false),
                CmpOp::Ne => Ok(true),
                _ => Err(EvalError::TypeError),
            },
        }
    }
}

fn to_finite_f64(v: &BigRational) -> Result<f64, EvalError> {
    let f = rational_to_f64_saturating(v);
    if f.is_finite() {
        Ok(f)
    } else {
        Err(EvalError::Overflow)
    }
}

fn rational_to_f64_saturating(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(if v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine() -> Machine {
        Machine::new(EvalBudget::default())
    }

    fn num(v: i64) -> Value {
        Value::int(v)
    }

    #[test]
    fn floor_div_and_mod_follow_divisor_sign() {
        let mut m = machine();
        let q = m.binary(BinOp::FloorDiv, num(7), num(-2)).unwrap();
        assert_eq!(q, num(-4));
        let r = m.binary(BinOp::Mod, num(7), num(-3)).unwrap();
        assert_eq!(r, num(-2));
        let r = m.binary(BinOp::Mod, num(-7), num(3)).unwrap();
        assert_eq!(r, num(2));
    }

    #[test]
    fn true_division_is_float_typed() {
        let mut m = machine();
        let v = m.binary(BinOp::Div, num(4), num(2)).unwrap();
        match v {
            Value::Num(n) => {
                assert!(n.float_typed);
                assert_eq!(n.value, BigRational::from_integer(2.into()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tuple_repetition_needs_int_type() {
        let mut m = machine();
        assert_eq!(m.binary(BinOp::Mul, Value::Tuple, num(3)).unwrap(), Value::Tuple);
        let two_float = m.binary(BinOp::Div, num(4), num(2)).unwrap();
        assert_eq!(
            m.binary(BinOp::Mul, Value::Tuple, two_float),
            Err(EvalError::TypeError)
        );
    }

    #[test]
    fn zero_pow_negative_raises() {
        let mut m = machine();
        assert_eq!(m.binary(BinOp::Pow, num(0), num(-1)), Err(EvalError::ZeroDivision));
        assert_eq!(m.binary(BinOp::Pow, num(0), num(0)).unwrap(), num(1));
    }

    #[test]
    fn negative_base_fractional_exponent_is_complex() {
        let mut m = machine();
        let half = m.binary(BinOp::Div, num(1), num(2)).unwrap();
        let v = m.binary(BinOp::Pow, num(-2), half).unwrap();
        assert_eq!(v, Value::Complex);
        assert_eq!(m.compare(CmpOp::Lt, &v, &num(1)), Err(EvalError::TypeError));
        assert_eq!(m.compare(CmpOp::Eq, &v, &num(1)), Ok(false));
    }

    #[test]
    fn huge_power_hits_budget() {
        let mut m = machine();
        assert_eq!(m.binary(BinOp::Pow, num(9), num(99_999)), Err(EvalError::Budget));
        // |base| == 1 shortcuts regardless of exponent size
        assert_eq!(m.binary(BinOp::Pow, num(1), num(i64::MAX)).unwrap(), num(1));
        assert_eq!(m.binary(BinOp::Pow, num(-1), num(3)).unwrap(), num(-1));
    }

    #[test]
    fn pow_within_budget_is_exact() {
        let mut m = machine();
        let v = m.binary(BinOp::Pow, num(2), num(999)).unwrap();
        match v {
            Value::Num(n) => assert_eq!(n.value.numer().bits(), 1000),
            other => panic!("unexpected {other:?}"),
        }
    }
}
