//! Minimal complex arithmetic over MPFR floats.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::{Assign, Float, Rational};

/// A complex number with explicit real and imaginary MPFR parts that
/// share one precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::from_real(Float::with_val(prec, 1))
    }

    pub fn i(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Complex::new(re, Float::new(prec))
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Complex::from_real(Float::with_val(prec, q))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    /// `e^{iπν}` for rational `ν`, exact at the quarter turns.
    pub fn unit_root(nu: &Rational, prec: u32) -> Self {
        let half = Rational::from(nu / 2u32).floor();
        let t = nu - half * 2u32;
        if t == 0 {
            return Complex::one(prec);
        }
        if t == 1 {
            return Complex::from_real(Float::with_val(prec, -1));
        }
        if t == (1, 2) {
            return Complex::i(prec);
        }
        if t == (3, 2) {
            return -Complex::i(prec);
        }
        let theta = Float::with_val(prec, Constant::Pi) * Float::with_val(prec, &t);
        let (s, c) = theta.sin_cos(Float::new(prec));
        Complex::new(c, s)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let prec = self.prec();
        Float::with_val(prec, self.re.square_ref()) + Float::with_val(prec, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        let prec = self.prec();
        Float::with_val(prec, self.re.hypot_ref(&self.im))
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> Float {
        let prec = self.prec();
        Float::with_val(prec, self.im.atan2_ref(&self.re))
    }

    /// Principal logarithm, imaginary part in `(-π, π]`.
    pub fn ln(&self) -> Self {
        let prec = self.prec();
        if self.im.is_zero() && self.re > 0 {
            return Complex::from_real(Float::with_val(prec, self.re.ln_ref()));
        }
        let re = Float::with_val(prec, self.norm_sqr().ln()) / 2u32;
        let mut im = self.arg();
        // atan2(-0, negative) yields -π; the principal branch keeps +π
        if self.im.is_zero() {
            im = im.abs();
        }
        Complex::new(re, im)
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let m = Float::with_val(prec, self.re.exp_ref());
        if self.im.is_zero() {
            return Complex::from_real(m);
        }
        let (s, c) = self.im.clone().sin_cos(Float::new(prec));
        Complex::new(c * &m, s * m)
    }

    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        if self.im.is_zero() && self.re >= 0 {
            return Complex::from_real(Float::with_val(prec, self.re.sqrt_ref()));
        }
        let r = self.abs();
        let mut re = Float::with_val(prec, &r + &self.re) / 2u32;
        re.sqrt_mut();
        let mut im = Float::with_val(prec, &r - &self.re) / 2u32;
        im.sqrt_mut();
        if self.im < 0 {
            im = -im;
        }
        Complex::new(re, im)
    }

    pub fn powi(&self, n: i32) -> Self {
        let prec = self.prec();
        if n == 0 {
            return Complex::one(prec);
        }
        let mut base = if n < 0 {
            Complex::one(prec) / self
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one(prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, f: &Float) -> Self {
        let prec = self.prec();
        Complex::new(
            Float::with_val(prec, &self.re * f),
            Float::with_val(prec, &self.im * f),
        )
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let prec = self.prec();
        let f = Float::with_val(prec, q);
        self.scale(&f)
    }

    pub fn div_u(&self, d: u32) -> Self {
        Complex::new(self.re.clone() / d, self.im.clone() / d)
    }

    pub fn mul_i(&self) -> Self {
        Complex::new(-self.im.clone(), self.re.clone())
    }

    pub fn set_prec(&mut self, prec: u32) {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let mut c = self.clone();
        c.set_prec(prec);
        c
    }

    /// `max(|re|, |im|)` as an f64, convenient for magnitude tests.
    pub fn max_abs_f64(&self) -> f64 {
        self.re.to_f64().abs().max(self.im.to_f64().abs())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// log2 of `|z|` as f64; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let e = self
            .re
            .get_exp()
            .unwrap_or(i32::MIN)
            .max(self.im.get_exp().unwrap_or(i32::MIN));
        let scale = Float::with_val(64, Float::i_exp(1, -e));
        let re = Float::with_val(64, &self.re * &scale).to_f64();
        let im = Float::with_val(64, &self.im * &scale).to_f64();
        re.hypot(im).log2() + e as f64
    }

    /// Decimal rendering with `digits` significant digits per part.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = self.re.to_string_radix(10, Some(digits));
        if self.im.is_zero() {
            return re;
        }
        let im = self.im.to_string_radix(10, Some(digits));
        match im.strip_prefix('-') {
            Some(mag) => format!("{re} - {mag}i"),
            None => format!("{re} + {im}i"),
        }
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec() as f64 / std::f64::consts::LOG2_10) as usize;
        write!(f, "{}", self.to_string_digits(digits.max(5)))
    }
}

impl From<Float> for Complex {
    fn from(re: Float) -> Self {
        Complex::from_real(re)
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &'a Complex) -> Complex {
        let prec = self.prec();
        Complex::new(
            Float::with_val(prec, &self.re + &rhs.re),
            Float::with_val(prec, &self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &'a Complex) -> Complex {
        let prec = self.prec();
        Complex::new(
            Float::with_val(prec, &self.re - &rhs.re),
            Float::with_val(prec, &self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &'a Complex) -> Complex {
        let prec = self.prec();
        if self.im.is_zero() && rhs.im.is_zero() {
            return Complex::from_real(Float::with_val(prec, &self.re * &rhs.re));
        }
        let ac = Float::with_val(prec, &self.re * &rhs.re);
        let bd = Float::with_val(prec, &self.im * &rhs.im);
        let ad = Float::with_val(prec, &self.re * &rhs.im);
        let bc = Float::with_val(prec, &self.im * &rhs.re);
        Complex::new(ac - bd, ad + bc)
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &'a Complex) -> Complex {
        let prec = self.prec();
        if rhs.im.is_zero() {
            return Complex::new(
                Float::with_val(prec, &self.re / &rhs.re),
                Float::with_val(prec, &self.im / &rhs.re),
            );
        }
        let d = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Complex::new(num.re / &d, num.im / &d)
    }
}

impl Div<&Complex> for Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        &self / rhs
    }
}

impl Mul<&Complex> for Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        &self * rhs
    }
}

impl Add<&Complex> for Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        &self + rhs
    }
}

impl Sub<&Complex> for Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        &self - rhs
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, rhs: &Complex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, rhs: &Complex) {
        let p = &*self * rhs;
        self.re.assign(&p.re);
        self.im.assign(&p.im);
    }
}
