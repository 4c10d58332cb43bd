//! Summation with a certified truncation point.
//!
//! After term `k` the remainder is bounded by
//! `|c_k| P_k U_k Σ_{j≥1} ρ^j (1 + j/k)^D`, where `ρ` bounds every later
//! coefficient ratio, `P_k` and `U_k` bound the `s`-factor and the weight
//! at `k`, and `D` is the polynomial degree of their growth.

use rug::ops::Pow;
use rug::Float;

use super::harmonic::{HarmonicKey, HarmonicState};
use super::spec::{Binomial, Factor, SeriesSpec};
use crate::complex::Complex;
use crate::constants::resolve_bits;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

const MAX_TERMS: u64 = 5_000_000;

/// Value together with the truncation data that certified it.
#[derive(Debug, Clone)]
pub struct SeriesEval {
    pub value: Complex,
    /// number of terms summed
    pub terms: u64,
    /// `log₂` of the remainder bound
    pub tail_log2: f64,
}

pub fn eval_series(spec: &SeriesSpec, ctx: &PrecisionContext) -> Result<Complex> {
    eval_series_detailed(spec, ctx).map(|e| e.value)
}

pub fn eval_series_detailed(spec: &SeriesSpec, ctx: &PrecisionContext) -> Result<SeriesEval> {
    let mut wp = ctx.bits() + 48;
    for _ in 0..3 {
        let (eval, loss) = run(spec, ctx, wp, None)?;
        if loss <= 40 {
            return Ok(eval);
        }
        wp += loss as u32;
    }
    Err(Error::PrecisionExhausted(
        "cancellation between series terms exceeds the precision schedule".into(),
    ))
}

/// Sum of exactly `n` terms, from the start index on.
pub fn eval_series_terms(spec: &SeriesSpec, n: u64, ctx: &PrecisionContext) -> Result<Complex> {
    let wp = ctx.bits() + 48;
    run(spec, ctx, wp, Some(n)).map(|(e, _)| e.value)
}

fn run(
    spec: &SeriesSpec,
    ctx: &PrecisionContext,
    wp: u32,
    fixed: Option<u64>,
) -> Result<(SeriesEval, i64)> {
    spec.validate()?;
    let mut w = Walker::new(spec, ctx, wp)?;
    let target = -(ctx.bits() as f64) - 4.0;
    let mut acc = Float::with_val(wp, 0);
    let mut max_exp = i64::MIN;
    let mut count = 0u64;
    let tail_log2 = loop {
        let t = w.term();
        if let Some(e) = t.get_exp() {
            max_exp = max_exp.max(e as i64);
        }
        acc += &t;
        count += 1;
        if let Some(n) = fixed {
            if count >= n {
                break f64::NAN;
            }
        } else if w.k >= 1 {
            let tail = w.tail_log2();
            if tail < target {
                break tail;
            }
        }
        if count >= MAX_TERMS {
            return Err(Error::PrecisionExhausted(format!(
                "series did not reach the tail target within {MAX_TERMS} terms"
            )));
        }
        w.step();
    };
    let loss = match acc.get_exp() {
        Some(e) if max_exp > e as i64 => max_exp - e as i64,
        _ => 0,
    };
    let value = Complex::from_real(Float::with_val(ctx.bits(), &acc));
    Ok((
        SeriesEval {
            value,
            terms: count,
            tail_log2,
        },
        loss,
    ))
}

struct Walker {
    binom: Binomial,
    power: i32,
    odd: bool,
    s: i32,
    x: Float,
    x_abs: f64,
    wp: u32,
    k: u64,
    /// `C^n x^k` at the current `k`
    c: Float,
    hs: HarmonicState,
    terms: Vec<(Float, f64, Vec<Factor>)>,
    log3: Float,
}

impl Walker {
    fn new(spec: &SeriesSpec, ctx: &PrecisionContext, wp: u32) -> Result<Self> {
        let x = Float::with_val(wp, spec.argument_value(ctx)?);
        let binom = spec.kind.binomial();
        let power = spec.kind.binomial_power();
        let limit = Float::with_val(wp, binom.growth()).pow(power) * x.clone().abs();
        if limit >= 1 {
            return Err(Error::DivergentSpec(format!(
                "limiting term ratio {:.6} is not below 1",
                limit.to_f64()
            )));
        }
        let mut hs = HarmonicState::new(wp);
        let mut terms = Vec::new();
        for t in spec.weight_terms() {
            let mut coeff = Float::with_val(wp, &t.coeff.0);
            if let Some(sym) = &t.constant {
                let v = resolve_bits(sym, wp)?;
                if !v.is_real() {
                    return Err(Error::DomainError(format!(
                        "weight constant {sym} is not real"
                    )));
                }
                coeff *= &v.re;
            }
            let bound = coeff.to_f64().abs();
            for f in &t.factors {
                match f {
                    Factor::H(key) => hs.register(*key),
                    Factor::Hbar => {
                        for m in 1..=3 {
                            hs.register(HarmonicKey {
                                mult: m,
                                offset: 0,
                                order: 1,
                            });
                        }
                    }
                    Factor::K(_) | Factor::Odd(_) => {}
                }
            }
            terms.push((coeff, bound, t.factors.clone()));
        }
        let mut c = Float::with_val(wp, 1);
        for k in 0..spec.start as u64 {
            c *= binom.ratio(k).pow(power);
            c *= &x;
        }
        hs.advance_to(spec.start as u64);
        let x_abs = x.to_f64().abs();
        Ok(Walker {
            binom,
            power,
            odd: spec.kind.odd_denominator(),
            s: spec.s,
            x,
            x_abs,
            wp,
            k: spec.start as u64,
            c,
            hs,
            terms,
            log3: Float::with_val(wp, 3).ln(),
        })
    }

    fn base(&self) -> u64 {
        if self.odd {
            2 * self.k + 1
        } else {
            self.k
        }
    }

    fn term(&self) -> Float {
        let wp = self.wp;
        let mut weight = Float::with_val(wp, 0);
        for (coeff, _, factors) in &self.terms {
            let mut v = coeff.clone();
            for f in factors {
                v *= self.factor_value(f);
            }
            weight += v;
        }
        let p = pow_int(self.base(), -self.s, wp);
        weight * p * &self.c
    }

    fn factor_value(&self, f: &Factor) -> Float {
        let get = |m: u32| {
            self.hs
                .get(HarmonicKey {
                    mult: m,
                    offset: 0,
                    order: 1,
                })
                .expect("registered")
                .clone()
        };
        match f {
            Factor::H(key) => self.hs.get(*key).expect("registered").clone(),
            Factor::Hbar => {
                get(3) * 3u32 - get(2) * 2u32 - get(1) - Float::with_val(self.wp, &self.log3 * 3u32)
            }
            Factor::K(p) => pow_int(self.k, *p, self.wp),
            Factor::Odd(p) => pow_int(2 * self.k + 1, *p, self.wp),
        }
    }

    fn step(&mut self) {
        self.c *= self.binom.ratio(self.k).pow(self.power);
        self.c *= &self.x;
        self.k += 1;
        self.hs.advance_to(self.k);
    }

    /// Bound on `Σ_{i>k} |term_i|`, as `log₂`.
    fn tail_log2(&self) -> f64 {
        let Some(ce) = self.c.get_exp() else {
            return f64::NEG_INFINITY;
        };
        let k = self.k as f64;
        let rho = if self.power >= 0 {
            self.binom.growth().powi(self.power) * self.x_abs
        } else {
            // ratios decrease toward the limit, so the current one dominates
            let r = self.binom.ratio(self.k).to_f64();
            r.powi(self.power) * self.x_abs
        };
        let base = self.base() as f64;
        let p_log2 = -(self.s as f64) * base.log2();
        let p_deg = (-self.s).max(0);
        let (u, u_deg) = self.weight_bound();
        if u == 0.0 {
            return f64::NEG_INFINITY;
        }
        let d = p_deg + u_deg;
        let sum = geometric_poly_sum(rho, k, d);
        ce as f64 + p_log2 + u.log2() + sum.log2()
    }

    fn weight_bound(&self) -> (f64, i32) {
        let k = self.k as f64;
        let mut total = 0.0;
        let mut deg = 0;
        for (_, coeff, factors) in &self.terms {
            let mut b = *coeff;
            let mut d = 0;
            for f in factors {
                let (fb, fd) = match f {
                    Factor::H(key) if key.order == 1 => {
                        (1.0 + (key.mult as f64 * k + key.offset as f64).ln(), 1)
                    }
                    Factor::H(_) => (1.65, 0),
                    Factor::Hbar => (6.0 * (1.0 + (3.0 * k).ln()) + 3.3, 1),
                    Factor::K(p) => (k.powi(*p), (*p).max(0)),
                    Factor::Odd(p) => ((2.0 * k + 1.0).powi(*p), (*p).max(0)),
                };
                b *= fb;
                d += fd;
            }
            total += b;
            deg = deg.max(d);
        }
        (total, deg)
    }
}

/// `Σ_{j≥1} ρ^j (1 + j/k)^d`, bounded by an explicit partial sum plus a
/// geometric remainder once the term ratio drops below 1.
fn geometric_poly_sum(rho: f64, k: f64, d: i32) -> f64 {
    let mut sum = 0.0;
    let mut t = 1.0;
    let mut j = 1.0;
    loop {
        t *= rho * ((k + j) / (k + j - 1.0)).powi(d);
        sum += t;
        let q = rho * ((k + j + 1.0) / (k + j)).powi(d);
        if q < 1.0 {
            return sum + t * q / (1.0 - q);
        }
        j += 1.0;
        if j > 1e6 || !sum.is_finite() {
            return f64::INFINITY;
        }
    }
}

fn pow_int(base: u64, p: i32, prec: u32) -> Float {
    if p == 0 {
        return Float::with_val(prec, 1);
    }
    Float::with_val(prec, base).pow(p)
}
