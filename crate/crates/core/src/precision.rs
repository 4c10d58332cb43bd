//! Working precision and the error budget shared by every evaluator.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Precision contract for one evaluation.
///
/// `target_digits` is the absolute accuracy promised to callers,
/// `guard_digits` the slack reserved for rounding, and `working_digits`
/// the precision actually carried by every intermediate value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    working_digits: u32,
    target_digits: u32,
    guard_digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            working_digits: 65,
            target_digits: 50,
            guard_digits: 15,
        }
    }
}

impl PrecisionContext {
    pub const MIN_GUARD_DIGITS: u32 = 10;

    pub fn new(target_digits: u32, guard_digits: u32, working_digits: u32) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::InvalidContext(
                "target_digits must be positive".into(),
            ));
        }
        if guard_digits < Self::MIN_GUARD_DIGITS {
            return Err(Error::InvalidContext(format!(
                "guard_digits = {guard_digits} is below the minimum of {}",
                Self::MIN_GUARD_DIGITS
            )));
        }
        if working_digits < target_digits + guard_digits {
            return Err(Error::InvalidContext(format!(
                "working_digits = {working_digits} < target_digits + guard_digits = {}",
                target_digits + guard_digits
            )));
        }
        Ok(PrecisionContext {
            working_digits,
            target_digits,
            guard_digits,
        })
    }

    /// Context with the default 15 guard digits.
    pub fn with_target(target_digits: u32) -> Self {
        PrecisionContext {
            working_digits: target_digits + 15,
            target_digits,
            guard_digits: 15,
        }
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Binary precision carried by `Float` values.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.working_digits)
    }

    /// Same guard margin at twice the target.
    pub fn doubled(&self) -> Self {
        PrecisionContext {
            working_digits: 2 * self.target_digits + self.guard_digits,
            target_digits: 2 * self.target_digits,
            guard_digits: self.guard_digits,
        }
    }

    /// Same target, twice the working precision.
    pub fn refined(&self) -> Self {
        PrecisionContext {
            working_digits: 2 * self.working_digits,
            target_digits: self.target_digits,
            guard_digits: self.guard_digits + self.working_digits,
        }
    }

    /// `10^(-target_digits)` at working precision.
    pub fn tolerance(&self) -> Float {
        pow10(-(self.target_digits as i32), self.bits())
    }

    /// `10^(-working_digits)` at working precision.
    pub fn epsilon(&self) -> Float {
        pow10(-(self.working_digits as i32), self.bits())
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * BITS_PER_DIGIT).ceil() as u32 + 8
}

pub fn pow10(exp: i32, bits: u32) -> Float {
    let ten = Float::with_val(bits, 10);
    ten.pow(exp)
}

/// Number of decimal digits on which `a` and `b` agree in absolute terms,
/// capped at `cap`.
pub fn agreed_digits(diff: &Float, cap: u32) -> f64 {
    if diff.is_zero() {
        return cap as f64;
    }
    let d = -diff.clone().abs().log10().to_f64();
    d.clamp(0.0, cap as f64)
}

/// Ulp-style error accounting: each arithmetic step consumes a relative
/// rounding error of `2^-bits` scaled by the magnitude it touched.
#[derive(Debug, Clone)]
pub struct ErrorBudget {
    bits: u32,
    ops: u64,
    max_magnitude_log2: i64,
}

impl ErrorBudget {
    pub fn new(bits: u32) -> Self {
        ErrorBudget {
            bits,
            ops: 0,
            max_magnitude_log2: 0,
        }
    }

    pub fn charge(&mut self, magnitude: &Float) {
        self.ops += 1;
        if magnitude.is_normal() {
            let e = magnitude.get_exp().unwrap_or(0) as i64;
            self.max_magnitude_log2 = self.max_magnitude_log2.max(e);
        }
    }

    pub fn absorb(&mut self, other: &ErrorBudget) {
        self.ops += other.ops;
        self.max_magnitude_log2 = self.max_magnitude_log2.max(other.max_magnitude_log2);
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// log10 of the accumulated absolute error bound.
    pub fn error_log10(&self) -> f64 {
        let ops = (self.ops.max(1)) as f64;
        (ops.log2() + self.max_magnitude_log2 as f64 - self.bits as f64) / BITS_PER_DIGIT
    }

    pub fn check(&self, ctx: &PrecisionContext) -> Result<()> {
        let err = self.error_log10();
        if err > -(ctx.target_digits() as f64) {
            Err(Error::PrecisionExhausted(format!(
                "accumulated error 1e{err:.1} exceeds 1e-{} after {} operations",
                ctx.target_digits(),
                self.ops
            )))
        } else {
            Ok(())
        }
    }
}
