//! Classical polylogarithms `Li_k(z)` on the principal sheet, with the
//! one-sided limits across the cut `(1, ∞)`.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

const GUARD_BITS: u32 = 24;

/// Which sheet to read a value from when the argument sits on the cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    Principal,
    AboveCut,
    BelowCut,
}

/// A fully specified polylogarithm evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct PolylogQuery {
    pub k: u32,
    pub z: Complex,
    pub side: Side,
}

impl PolylogQuery {
    pub fn new(k: u32, z: Complex, side: Side) -> Result<Self> {
        let q = PolylogQuery { k, z, side };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::DomainError("polylog weight must be positive".into()));
        }
        match self.side {
            Side::Principal => {
                if on_cut(self.k, &self.z) {
                    return Err(cut_error(self.k, &self.z));
                }
            }
            Side::AboveCut | Side::BelowCut => {
                if !self.z.im.is_zero() || self.z.re <= 1 {
                    return Err(Error::DomainError(format!(
                        "one-sided evaluation needs a real argument above 1, got {}",
                        self.z.to_string_digits(12)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, ctx: &PrecisionContext) -> Result<Complex> {
        self.validate()?;
        match self.side {
            Side::Principal => li(self.k, &self.z, ctx),
            side => li_side(self.k, &self.z.re, side, ctx),
        }
    }
}

fn on_cut(k: u32, z: &Complex) -> bool {
    z.im.is_zero() && if k == 1 { z.re >= 1 } else { z.re > 1 }
}

fn cut_error(k: u32, z: &Complex) -> Error {
    Error::OnBranchCut {
        k,
        detail: format!("z = {}", z.to_string_digits(12)),
    }
}

/// `Li_k(z)` to `ctx.target_digits`, principal branch.
pub fn li(k: u32, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    li_prec(k, z, ctx.bits())
}

/// `Li_k(z)` carried at `prec` bits.
pub fn li_prec(k: u32, z: &Complex, prec: u32) -> Result<Complex> {
    if k == 0 {
        return Err(Error::DomainError("polylog weight must be positive".into()));
    }
    if on_cut(k, z) {
        return Err(cut_error(k, z));
    }
    if z.im.is_zero() {
        let x = Float::with_val(prec, &z.re);
        return li_real(k, &x, prec).map(Complex::from_real);
    }
    let wp = prec + GUARD_BITS;
    let v = li_complex(k, &z.with_prec(wp), wp, Side::Principal);
    Ok(v.with_prec(prec))
}

/// `Li_k(x)` for real `x ≤ 1` (`x < 1` when `k = 1`).
pub fn li_real(k: u32, x: &Float, prec: u32) -> Result<Float> {
    if k == 0 {
        return Err(Error::DomainError("polylog weight must be positive".into()));
    }
    if (k == 1 && *x >= 1) || *x > 1 {
        return Err(Error::OnBranchCut {
            k,
            detail: format!("x = {}", x.to_string_radix(10, Some(12))),
        });
    }
    let wp = prec + GUARD_BITS;
    let x = Float::with_val(wp, x);
    let mut v = li_real_inner(k, &x, wp);
    v.set_prec(prec);
    Ok(v)
}

fn li_real_inner(k: u32, x: &Float, wp: u32) -> Float {
    if x.is_zero() {
        return Float::new(wp);
    }
    if k == 1 {
        let one_minus = Float::with_val(wp, 1 - x);
        return -one_minus.ln();
    }
    if *x == 1 {
        return zeta(k, wp);
    }
    let ax = Float::with_val(wp, x.abs_ref());
    if ax <= 0.5 {
        return direct_real(k, x, wp);
    }
    if *x > 0 {
        return log_series_real(k, x, wp);
    }
    if *x >= -1 {
        // Li_k(-y) = 2^{1-k} Li_k(y^2) - Li_k(y)
        let y = ax;
        let y2 = Float::with_val(wp, y.square_ref());
        let a = li_real_inner(k, &y2, wp) >> (k - 1);
        return a - li_real_inner(k, &y, wp);
    }
    li_complex(k, &Complex::from_real(x.clone()), wp, Side::Principal).re
}

fn direct_real(k: u32, x: &Float, wp: u32) -> Float {
    let mut sum = Float::new(wp);
    let mut pow = x.clone();
    let stop = -(wp as i32) - 8;
    let mut n: u32 = 1;
    loop {
        let denom = Float::with_val(wp, n).pow(k);
        let term = Float::with_val(wp, &pow / &denom);
        if term.is_zero() || term.get_exp().unwrap_or(i32::MIN) < stop {
            break;
        }
        sum += &term;
        pow *= x;
        n += 1;
    }
    sum
}

fn direct_complex(k: u32, z: &Complex, wp: u32) -> Complex {
    let mut sum = Complex::zero(wp);
    let mut pow = z.clone();
    let stop = -(wp as f64) - 8.0;
    let mut n: u32 = 1;
    loop {
        let denom = Float::with_val(wp, n).pow(k);
        let term = Complex::new(
            Float::with_val(wp, &pow.re / &denom),
            Float::with_val(wp, &pow.im / &denom),
        );
        if term.is_zero() || term.log2_abs() < stop {
            break;
        }
        sum += &term;
        pow = &pow * z;
        n += 1;
    }
    sum
}

fn harmonic_float(n: u32, wp: u32) -> Float {
    let mut h = Rational::new();
    for j in 1..=n {
        h += Rational::from((1, j));
    }
    Float::with_val(wp, &h)
}

/// `ζ(s - j)` for `j ≥ 0`, `s - j ≠ 1`.
fn zeta_shifted(s: u32, j: u32, table: &ZetaTable) -> &Float {
    let arg = s as i64 - j as i64;
    if arg >= 0 {
        &table.pos[arg as usize]
    } else {
        &table.neg[(-arg) as usize]
    }
}

fn log_series_real(k: u32, x: &Float, wp: u32) -> Float {
    let mu = Float::with_val(wp, x.ln_ref());
    let neg_mu = Float::with_val(wp, -&mu);
    let table = zeta_table(wp, k + 2 * wp.max(64));
    let mut sum = Float::new(wp);
    let mut pow = Float::with_val(wp, 1);
    let mut fact = Float::with_val(wp, 1);
    let stop = -(wp as i32) - 8;
    let mut j: u32 = 0;
    loop {
        if j == k - 1 {
            let h = harmonic_float(k - 1, wp);
            let l = Float::with_val(wp, neg_mu.ln_ref());
            sum += Float::with_val(wp, &pow / &fact) * (h - l);
        } else {
            let z = zeta_shifted(k, j, &table);
            let term = Float::with_val(wp, &pow / &fact) * z;
            if j > k + 2 && !term.is_zero() && term.get_exp().unwrap_or(i32::MIN) < stop {
                break;
            }
            sum += &term;
        }
        j += 1;
        pow *= &mu;
        fact *= j;
        if j as usize >= table.neg.len() + k as usize - 1 {
            break;
        }
    }
    sum
}

fn ln_neg(w: &Complex, side: Side) -> Complex {
    let neg = -w;
    if neg.im.is_zero() && neg.re < 0 {
        let prec = w.prec();
        let re = Float::with_val(prec, neg.re.abs_ref()).ln();
        let pi = Float::with_val(prec, Constant::Pi);
        return match side {
            Side::AboveCut => Complex::new(re, -pi),
            _ => Complex::new(re, pi),
        };
    }
    neg.ln()
}

fn log_series_complex(k: u32, z: &Complex, wp: u32, side: Side) -> Complex {
    let mu = z.ln();
    let table = zeta_table(wp, k + 2 * wp.max(64));
    let mut sum = Complex::zero(wp);
    let mut pow = Complex::one(wp);
    let mut fact = Float::with_val(wp, 1);
    let stop = -(wp as f64) - 8.0;
    let mut j: u32 = 0;
    loop {
        let scaled = Complex::new(
            Float::with_val(wp, &pow.re / &fact),
            Float::with_val(wp, &pow.im / &fact),
        );
        if j == k - 1 {
            let h = Complex::from_real(harmonic_float(k - 1, wp));
            let l = ln_neg(&mu, side);
            sum += &(&scaled * &(&h - &l));
        } else {
            let zv = zeta_shifted(k, j, &table);
            let term = scaled.scale(zv);
            if j > k + 2 && !term.is_zero() && term.log2_abs() < stop {
                break;
            }
            sum += &term;
        }
        j += 1;
        pow = &pow * &mu;
        fact *= j;
        if j as usize >= table.neg.len() + k as usize - 1 {
            break;
        }
    }
    sum
}

fn li_complex(k: u32, z: &Complex, wp: u32, side: Side) -> Complex {
    if z.is_zero() {
        return Complex::zero(wp);
    }
    if k == 1 {
        let w = &Complex::one(wp) - z;
        if w.im.is_zero() && w.re < 0 {
            let re = -Float::with_val(wp, w.re.abs_ref()).ln();
            let pi = Float::with_val(wp, Constant::Pi);
            return match side {
                Side::BelowCut => Complex::new(re, -pi),
                _ => Complex::new(re, pi),
            };
        }
        return -w.ln();
    }
    if z.im.is_zero() && z.re == 1 {
        return Complex::from_real(zeta(k, wp));
    }
    let r = z.abs();
    if r <= 0.5 {
        return direct_complex(k, z, wp);
    }
    if r >= 2 {
        return inversion(k, z, wp, side);
    }
    log_series_complex(k, z, wp, side)
}

/// `Li_s(z) = -(-1)^s Li_s(1/z) - (2πi)^s/s! B_s(1/2 + ln(-z)/(2πi))`.
fn inversion(k: u32, z: &Complex, wp: u32, side: Side) -> Complex {
    let inv = &Complex::one(wp) / z;
    let inner = li_complex(k, &inv, wp, Side::Principal);
    let two_pi_i = Complex::new(Float::new(wp), Float::with_val(wp, Constant::Pi) << 1u32);
    let l = ln_neg(z, side);
    let arg = &Complex::from_real(Float::with_val(wp, 0.5)) + &(&l / &two_pi_i);
    let b = bernoulli_poly(k, &arg);
    let fact = Float::with_val(wp, Float::factorial(k));
    let corr = (&two_pi_i.powi(k as i32) * &b).scale(&fact.recip());
    let signed = if k.is_multiple_of(2) { -inner } else { inner };
    &signed - &corr
}

fn bernoulli_poly(n: u32, x: &Complex) -> Complex {
    let wp = x.prec();
    let bs = bernoulli_numbers(n);
    let mut acc = Complex::zero(wp);
    let mut pow = Complex::one(wp);
    // Horner-free: accumulate from the highest power of x downwards
    for j in (0..=n).rev() {
        let c = Rational::from(Integer::from(Integer::binomial_u(n, j))) * &bs[j as usize];
        if c != 0 {
            acc += &pow.scale_rational(&c);
        }
        pow = &pow * x;
    }
    acc
}

static BERNOULLI: LazyLock<RwLock<Vec<Rational>>> =
    LazyLock::new(|| RwLock::new(vec![Rational::from(1)]));

/// `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: u32) -> Vec<Rational> {
    {
        let cache = BERNOULLI.read().expect("bernoulli cache poisoned");
        if cache.len() > n as usize {
            return cache[..=n as usize].to_vec();
        }
    }
    let mut cache = BERNOULLI.write().expect("bernoulli cache poisoned");
    while cache.len() <= n as usize {
        let m = cache.len() as u32;
        let mut s = Rational::new();
        for (j, b) in cache.iter().enumerate() {
            s += Rational::from(Integer::from(Integer::binomial_u(m + 1, j as u32))) * b;
        }
        let b = -s / Rational::from(m + 1);
        cache.push(b);
    }
    cache[..=n as usize].to_vec()
}

/// `ζ(n)` and `ζ(-n)` for `0 ≤ n ≤ len`; the `ζ(1)` slot holds zero.
#[derive(Debug)]
pub struct ZetaTable {
    pub pos: Vec<Float>,
    pub neg: Vec<Float>,
}

type ZetaCache = RwLock<HashMap<u32, Arc<ZetaTable>>>;
static ZETA: LazyLock<ZetaCache> = LazyLock::new(|| RwLock::new(HashMap::new()));

pub fn zeta_table(prec: u32, n: u32) -> Arc<ZetaTable> {
    {
        let cache = ZETA.read().expect("zeta cache poisoned");
        if let Some(t) = cache.get(&prec) {
            if t.pos.len() > n as usize {
                return Arc::clone(t);
            }
        }
    }
    let mut pos = vec![Float::with_val(prec, -0.5), Float::new(prec)];
    for j in 2..=n {
        pos.push(Float::with_val(prec, Float::zeta_u(j)));
    }
    // ζ(1-2m) = (-1)^m 2 (2m-1)! ζ(2m) / (2π)^{2m}
    let mut neg = vec![Float::with_val(prec, -0.5)];
    let two_pi = Float::with_val(prec, Constant::Pi) << 1u32;
    let inv_tp2 = Float::with_val(prec, two_pi.square_ref()).recip();
    let mut f = Float::with_val(prec, 2) * &inv_tp2;
    let mut m: u32 = 1;
    while 2 * m <= n {
        if m > 1 {
            f *= (2 * m - 2) * (2 * m - 1);
            f *= &inv_tp2;
        }
        let v = Float::with_val(prec, &f * &pos[(2 * m) as usize]);
        neg.push(if m % 2 == 1 { -v } else { v });
        neg.push(Float::new(prec));
        m += 1;
    }
    neg.truncate(n as usize);
    let t = Arc::new(ZetaTable { pos, neg });
    ZETA.write()
        .expect("zeta cache poisoned")
        .insert(prec, Arc::clone(&t));
    t
}

pub fn zeta(n: u32, prec: u32) -> Float {
    Float::with_val(prec, Float::zeta_u(n))
}

/// Value on a chosen side of the cut: real principal value plus or minus
/// half the jump.
pub fn li_side(k: u32, x: &Float, side: Side, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.bits();
    if side == Side::Principal {
        return li(k, &Complex::from_real(x.clone()), ctx);
    }
    if *x <= 1 {
        return Err(Error::DomainError(
            "one-sided evaluation needs x > 1".into(),
        ));
    }
    let wp = prec + GUARD_BITS;
    let z = Complex::from_real(Float::with_val(wp, x));
    let re = li_complex(k, &z, wp, Side::AboveCut).re;
    let half = half_jump(k, &Float::with_val(wp, x), wp);
    let im = match side {
        Side::AboveCut => half,
        _ => -half,
    };
    Ok(Complex::new(re, im).with_prec(prec))
}

fn half_jump(k: u32, x: &Float, wp: u32) -> Float {
    let l = Float::with_val(wp, x.ln_ref());
    let pi = Float::with_val(wp, Constant::Pi);
    let fact = Float::with_val(wp, Float::factorial(k - 1));
    pi * l.pow(k - 1) / fact
}

/// `Li_k(x + i0) - Li_k(x - i0) = 2πi log^{k-1}(x)/(k-1)!` for `x > 1`.
pub fn li_jump(k: u32, x: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    if k == 0 {
        return Err(Error::DomainError("polylog weight must be positive".into()));
    }
    if *x <= 1 {
        return Err(Error::DomainError(format!(
            "jump is defined for x > 1, got {}",
            x.to_string_radix(10, Some(12))
        )));
    }
    let prec = ctx.bits();
    let im = half_jump(k, &Float::with_val(prec, x), prec) << 1u32;
    Ok(Complex::new(Float::new(prec), im))
}
