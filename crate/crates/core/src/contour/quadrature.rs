//! Double-exponential quadrature on `[0, ∞)` and trapezoidal quadrature
//! over a full period.
//!
//! Both rules refine by halving the step, reusing every earlier node, from
//! `2^MIN_LEVEL` to `2^MAX_LEVEL` intervals. They stop once two successive
//! levels agree to the requested number of digits.

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

pub const MIN_LEVEL: u32 = 6;
pub const MAX_LEVEL: u32 = 14;

#[derive(Debug, Clone)]
pub struct Quadrature {
    pub value: Float,
    /// intervals at the accepted level
    pub intervals: usize,
    /// `log₁₀ |I_m − I_{m−1}|` at acceptance
    pub last_change_log10: f64,
}

/// `∫₀^∞ f(X) dX`, folded at `X = 1` into `∫₀¹ [f(u) + f(1/u)/u²] du` and
/// integrated with the tanh-sinh rule `u = 1/(1 + e^{−π sinh t})`.
///
/// The fold puts `X = 1` at an endpoint, where nodes cluster doubly
/// exponentially; every half-line family in this crate peaks there.
/// `f` must decay at least like `X^{−2}` at infinity and be integrable at 0.
pub fn half_line<F>(f: F, prec: u32, digits: u32) -> Result<Quadrature>
where
    F: Fn(&Float) -> Result<Float> + Sync,
{
    let wp = prec + 24;
    let pi = Float::with_val(wp, Constant::Pi);
    // e^{−π sinh T} below 2^{−prec−32}
    let reach = ((prec + 32) as f64 * std::f64::consts::LN_2 / std::f64::consts::PI).asinh() + 0.25;
    let span = Float::with_val(wp, 2.0 * reach);
    let node = |t: &Float| -> Result<Float> {
        let s = Float::with_val(wp, t.sinh_ref()) * &pi;
        let e = Float::with_val(wp, (-s).exp_ref());
        let big = Float::with_val(wp, &e + 1u32);
        let u = Float::with_val(wp, big.recip_ref());
        let jac = Float::with_val(wp, t.cosh_ref()) * &pi * &u * (e / &big);
        let g = f(&u)? + f(&big)? * Float::with_val(wp, big.square_ref());
        Ok(g * jac)
    };
    refine(node, -reach, span, wp, prec, digits, false)
}

/// `(1/2π) ∫₀^{2π} g(θ) dθ` for an even, `2π`-periodic `g`, using the
/// trapezoid rule on `[0, π]`.
pub fn periodic_even<F>(g: F, prec: u32, digits: u32) -> Result<Quadrature>
where
    F: Fn(&Float) -> Result<Float> + Sync,
{
    let wp = prec + 24;
    let pi = Float::with_val(wp, Constant::Pi);
    let mut q = refine(g, 0.0, pi.clone(), wp, prec, digits, true)?;
    q.value /= &pi;
    Ok(q)
}

fn refine<F>(
    node: F,
    start: f64,
    span: Float,
    wp: u32,
    prec: u32,
    digits: u32,
    halve_ends: bool,
) -> Result<Quadrature>
where
    F: Fn(&Float) -> Result<Float> + Sync,
{
    let a = Float::with_val(wp, start);
    let at = |j: usize, n: usize| -> Float {
        let step = Float::with_val(wp, &span / n as u32);
        Float::with_val(wp, &a + &(step * j as u32))
    };
    let eval_all = |idx: Vec<usize>, n: usize| -> Result<Vec<Float>> {
        idx.into_par_iter().map(|j| node(&at(j, n))).collect()
    };
    let mut n = 1usize << MIN_LEVEL;
    let mut sum = Float::with_val(wp, 0);
    for (j, v) in eval_all((0..=n).collect(), n)?.into_iter().enumerate() {
        if halve_ends && (j == 0 || j == n) {
            sum += v / 2u32;
        } else {
            sum += v;
        }
    }
    let mut prev = Float::with_val(wp, &sum * &span) / n as u32;
    let tol = Float::with_val(wp, 10).pow(-(digits as i32));
    let mut last = f64::INFINITY;
    for _ in MIN_LEVEL..MAX_LEVEL {
        n *= 2;
        let fresh = eval_all((1..n).step_by(2).collect(), n)?;
        for v in fresh {
            sum += v;
        }
        let cur = Float::with_val(wp, &sum * &span) / n as u32;
        let change = Float::with_val(wp, &cur - &prev).abs();
        last = log10(&change);
        let scale = Float::with_val(wp, cur.abs_ref()).max(&Float::with_val(wp, 1));
        if change <= Float::with_val(wp, &tol * &scale) {
            return Ok(Quadrature {
                value: Float::with_val(prec, &cur),
                intervals: n,
                last_change_log10: last,
            });
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergent(format!(
        "successive levels still differ by 10^{last:.1} at 2^{MAX_LEVEL} intervals"
    )))
}

fn log10(x: &Float) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        Float::with_val(64, x.log10_ref()).to_f64()
    }
}
