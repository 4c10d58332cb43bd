//! Integral representations of the binomial-harmonic series.
//!
//! Each family is parameterized by the argument `x` of its series
//! counterpart, and the kernel `Li_r(u)/(1−u)` (or `1/(1−u)` when `r` is
//! absent) is evaluated at a real `u` with `|u| < 1` along the whole path.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::quadrature::{half_line, periodic_even};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::polylog::li_real;
use crate::precision::PrecisionContext;
use crate::series::{Argument, Factor, SeriesKind, SeriesSpec, WeightTerm};
use crate::util::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// `|z| = 1`, parameterized by `θ ∈ [0, 2π]`
    UnitCircle,
    /// `X ∈ [0, ∞)`
    HalfLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralFamily {
    /// `∮ K(x(1+z)²/z) dz/(2πiz)`, `u = 4x cos²(θ/2)`
    Chi,
    /// `∮ [K(u) + K(−u)] dz/(4πiz)`, `u = 2√x cos θ`
    Upsilon,
    /// `(3√3/2π) ∫ K(27x X³/(1+X³)²) dX/(1+X³)`
    Cubic,
    /// `(3√3/2π) ∫ [K(u) + K(−u)] x dx/(1+x⁶)`, `u = √(27x) x³/(1+x⁶)`
    Sextic,
    /// `(2√2/π) ∫ K(64x X⁴/(1+X⁴)²) X² dX/(1+X⁴)`
    Quartic,
}

impl IntegralFamily {
    pub fn geometry(self) -> Geometry {
        match self {
            IntegralFamily::Chi | IntegralFamily::Upsilon => Geometry::UnitCircle,
            _ => Geometry::HalfLine,
        }
    }

    pub fn measure(self) -> &'static str {
        match self {
            IntegralFamily::Chi => "dz/(2πi z)",
            IntegralFamily::Upsilon => "dz/(4πi z)",
            IntegralFamily::Cubic => "dX/(1+X³)",
            IntegralFamily::Sextic => "x dx/(1+x⁶)",
            IntegralFamily::Quartic => "X² dX/(1+X⁴)",
        }
    }

    /// Largest `|u|/|x|`-type amplitude: the kernel argument is bounded by
    /// `amplitude(x)` along the path.
    fn amplitude(self, x: &Float) -> Result<Float> {
        let p = x.prec();
        let ax = Float::with_val(p, x.abs_ref());
        Ok(match self {
            IntegralFamily::Chi => ax * 4u32,
            IntegralFamily::Cubic => ax * 27u32 / 4u32,
            IntegralFamily::Quartic => ax * 16u32,
            IntegralFamily::Upsilon | IntegralFamily::Sextic => {
                if *x < 0 {
                    return Err(Error::DomainError(format!("{self:?} family needs x ≥ 0")));
                }
                let s = Float::with_val(p, x.sqrt_ref());
                if self == IntegralFamily::Upsilon {
                    s * 2u32
                } else {
                    s * Float::with_val(p, 27).sqrt() / 2u32
                }
            }
        })
    }
}

/// A named integral with exact parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralSpec {
    pub family: IntegralFamily,
    /// polylog order; absent means the kernel `1/(1−u)`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    /// extra factor `log(X³/(1+X³)²)`, cubic family only
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub log: bool,
    pub x: Argument,
}

impl IntegralSpec {
    pub fn new(family: IntegralFamily, r: Option<u32>, x: Argument) -> Self {
        IntegralSpec {
            family,
            r,
            log: false,
            x,
        }
    }

    pub fn with_log(mut self) -> Self {
        self.log = true;
        self
    }

    pub fn geometry(&self) -> Geometry {
        self.family.geometry()
    }

    pub fn validate(&self) -> Result<()> {
        if self.log && self.family != IntegralFamily::Cubic {
            return Err(Error::DomainError(
                "the logarithmic factor exists only for the cubic family".into(),
            ));
        }
        if self.r == Some(0) {
            return Err(Error::DomainError("polylog order must be positive".into()));
        }
        Ok(())
    }

    /// The series this integral represents.
    pub fn counterpart_series(&self) -> SeriesSpec {
        let (kind, mult) = match self.family {
            IntegralFamily::Chi => (SeriesKind::Central, 1),
            IntegralFamily::Upsilon => (SeriesKind::Central, 2),
            IntegralFamily::Cubic => (SeriesKind::Forward3k, 1),
            IntegralFamily::Sextic => (SeriesKind::Forward3k, 2),
            IntegralFamily::Quartic => (SeriesKind::Forward4k, 1),
        };
        let mut factors = Vec::new();
        if let Some(r) = self.r {
            factors.push(Factor::h(mult, 0, r));
        }
        if self.log {
            factors.push(Factor::Hbar);
        }
        let weight = if factors.is_empty() {
            vec![]
        } else {
            vec![WeightTerm::new(Q::int(1), factors)]
        };
        SeriesSpec::new(kind, 0, Some(self.x.clone()))
            .with_start(0)
            .with_weight(weight)
    }
}

struct Kernel {
    r: Option<u32>,
    wp: u32,
}

impl Kernel {
    fn at(&self, u: &Float) -> Result<Float> {
        let den = Float::with_val(self.wp, 1u32 - u);
        match self.r {
            None => Ok(den.recip()),
            Some(r) => Ok(li_real(r, u, self.wp)? / den),
        }
    }

    fn even(&self, u: &Float) -> Result<Float> {
        Ok(self.at(u)? + self.at(&Float::with_val(self.wp, -u))?)
    }
}

pub fn eval_integral(spec: &IntegralSpec, ctx: &PrecisionContext) -> Result<Complex> {
    spec.validate()?;
    let prec = ctx.bits();
    let wp = prec + 24;
    let digits = ctx.working_digits().saturating_sub(5);
    let x = Float::with_val(wp, spec.x.eval(ctx)?);
    let amp = spec.family.amplitude(&x)?;
    // within rounding of 1 counts as touching the branch point
    let slack = Float::with_val(wp, 1) - ctx.epsilon();
    if amp >= slack {
        return Err(Error::SingularOnPath(format!(
            "kernel argument reaches {:.6} on the path",
            amp.to_f64()
        )));
    }
    let k = Kernel { r: spec.r, wp };
    let pi = Float::with_val(wp, Constant::Pi);
    let sqrt3 = Float::with_val(wp, 3).sqrt();
    let value = match spec.family {
        IntegralFamily::Chi => {
            let c = Float::with_val(wp, &x * 4u32);
            periodic_even(
                |t| {
                    let h = Float::with_val(wp, t / 2u32).cos();
                    k.at(&(h.square() * &c))
                },
                prec,
                digits,
            )?
            .value
        }
        IntegralFamily::Upsilon => {
            let a = Float::with_val(wp, x.sqrt_ref()) * 2u32;
            periodic_even(
                |t| Ok(k.even(&(Float::with_val(wp, t.cos_ref()) * &a))? / 2u32),
                prec,
                digits,
            )?
            .value
        }
        IntegralFamily::Cubic => {
            let c = Float::with_val(wp, &x * 27u32);
            let log = spec.log;
            let q = half_line(
                |t| {
                    let t3 = Float::with_val(wp, t.square_ref()) * t;
                    let one_p = Float::with_val(wp, &t3 + 1u32);
                    let base = Float::with_val(wp, &t3 / &one_p.clone().square());
                    let mut v = k.at(&Float::with_val(wp, &base * &c))? / &one_p;
                    if log {
                        v *= base.ln();
                    }
                    Ok(v)
                },
                prec,
                digits,
            )?;
            q.value * &sqrt3 * 3u32 / (pi.clone() * 2u32)
        }
        IntegralFamily::Sextic => {
            let a = Float::with_val(wp, &x * 27u32).sqrt();
            let q = half_line(
                |t| {
                    let t3 = Float::with_val(wp, t.square_ref()) * t;
                    let one_p = Float::with_val(wp, t3.square_ref()) + 1u32;
                    let u = Float::with_val(wp, &t3 * &a) / &one_p;
                    Ok(k.even(&u)? * t / one_p)
                },
                prec,
                digits,
            )?;
            q.value * &sqrt3 * 3u32 / (pi.clone() * 2u32)
        }
        IntegralFamily::Quartic => {
            let c = Float::with_val(wp, &x * 64u32);
            let q = half_line(
                |t| {
                    let t2 = Float::with_val(wp, t.square_ref());
                    let t4 = Float::with_val(wp, t2.square_ref());
                    let one_p = Float::with_val(wp, &t4 + 1u32);
                    let u = Float::with_val(wp, &t4 * &c) / one_p.clone().square();
                    Ok(k.at(&u)? * t2 / one_p)
                },
                prec,
                digits,
            )?;
            q.value * Float::with_val(wp, 2).sqrt() * 2u32 / pi.clone()
        }
    };
    Ok(Complex::from_real(Float::with_val(prec, value)))
}

/// `χ/(1+χ)²`
pub fn x_from_chi(chi: &Rational) -> Rational {
    let d = Rational::from(chi + 1u32);
    chi / d.square()
}

/// `(υ/(1+υ²))²`
pub fn x_from_upsilon(u: &Rational) -> Rational {
    let d = Rational::from(u.square_ref()) + 1u32;
    (u / d).square()
}

/// `(1+Ξ³)²/(27Ξ³)`
pub fn x_from_xi_cubic(xi: &Rational) -> Rational {
    let c = Rational::from(xi.pow(3u32));
    Rational::from(&c + 1u32).square() / (c * 27u32)
}

/// `((1+ξ⁶)/ξ³)²/27`
pub fn x_from_xi_sextic(xi: &Rational) -> Rational {
    let c = Rational::from(xi.pow(3u32));
    let r = (Rational::from(c.square_ref()) + 1u32) / c;
    r.square() / 27u32
}

/// `(1+Ξ⁴)²/(64Ξ⁴)`
pub fn x_from_xi_quartic(xi: &Rational) -> Rational {
    let c = Rational::from(xi.pow(4u32));
    Rational::from(&c + 1u32).square() / (c * 64u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaKind {
    /// `∫ [X³/(1+X³)²]^k dX/(1+X³)`
    #[serde(rename = "3k")]
    ThreeK,
    /// `∫ (x³/(1+x⁶))^{2k} x dx/(1+x⁶)`
    #[serde(rename = "3k_prime")]
    ThreeKPrime,
    /// `∫ [X³/(1+X³)²]^k log(X³/(1+X³)²) dX/(1+X³)`
    #[serde(rename = "3k_log")]
    ThreeKLog,
    /// `∫ [X⁴/(1+X⁴)²]^k X² dX/(1+X⁴)`
    #[serde(rename = "4k")]
    FourK,
}

/// `(quadrature, expected)`, the latter from gamma and digamma values so
/// that non-integer `k` is covered.
pub fn beta_moment(kind: BetaKind, k: &Q, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    if k.0 < 0 {
        return Err(Error::DomainError(
            "moment index must be nonnegative".into(),
        ));
    }
    let prec = ctx.bits();
    let wp = prec + 24;
    let digits = ctx.working_digits().saturating_sub(5);
    let kf = Float::with_val(wp, &k.0);
    let pi = Float::with_val(wp, Constant::Pi);
    let gamma = |a: u32, b: u32, c: u32| {
        // Γ(ak+1) / (Γ(bk+1) Γ(ck+1))
        let g = |m: u32| (Float::with_val(wp, &kf * m) + 1u32).gamma();
        g(a) / g(b) / g(c)
    };
    let sqrt3 = Float::with_val(wp, 3).sqrt();
    let cubic_base = |t: &Float| {
        let t3 = Float::with_val(wp, t.square_ref()) * t;
        let one_p = Float::with_val(wp, &t3 + 1u32);
        (Float::with_val(wp, &t3 / &one_p.clone().square()), one_p)
    };
    let (quad, expected) = match kind {
        BetaKind::ThreeK | BetaKind::ThreeKLog => {
            let log = kind == BetaKind::ThreeKLog;
            let q = half_line(
                |t| {
                    let (b, one_p) = cubic_base(t);
                    let mut v = Float::with_val(wp, (&b).pow(&kf)) / one_p;
                    if log {
                        v *= b.ln();
                    }
                    Ok(v)
                },
                prec,
                digits,
            )?;
            let base =
                gamma(3, 1, 2) / Float::with_val(wp, 27).pow(&kf) * &pi * 2u32 / (sqrt3 * 3u32);
            let expected = if log {
                let psi = |m: u32| (Float::with_val(wp, &kf * m) + 1u32).digamma();
                let hbar =
                    psi(3) * 3u32 - psi(2) * 2u32 - psi(1) - Float::with_val(wp, 3).ln() * 3u32;
                base * hbar
            } else {
                base
            };
            (q.value, expected)
        }
        BetaKind::ThreeKPrime => {
            let two_k = Float::with_val(wp, &kf * 2u32);
            let q = half_line(
                |t| {
                    let t3 = Float::with_val(wp, t.square_ref()) * t;
                    let one_p = Float::with_val(wp, t3.square_ref()) + 1u32;
                    let b = Float::with_val(wp, &t3 / &one_p);
                    Ok(Float::with_val(wp, (&b).pow(&two_k)) * t / one_p)
                },
                prec,
                digits,
            )?;
            let expected = gamma(3, 1, 2) / Float::with_val(wp, 27).pow(&kf) * &pi / (sqrt3 * 3u32);
            (q.value, expected)
        }
        BetaKind::FourK => {
            let q = half_line(
                |t| {
                    let t2 = Float::with_val(wp, t.square_ref());
                    let t4 = Float::with_val(wp, t2.square_ref());
                    let one_p = Float::with_val(wp, &t4 + 1u32);
                    let b = Float::with_val(wp, &t4 / &one_p.clone().square());
                    Ok(Float::with_val(wp, (&b).pow(&kf)) * t2 / one_p)
                },
                prec,
                digits,
            )?;
            let expected = gamma(4, 2, 2) / Float::with_val(wp, 64).pow(&kf) * &pi
                / (Float::with_val(wp, 2).sqrt() * 2u32);
            (q.value, expected)
        }
    };
    Ok((Float::with_val(prec, quad), Float::with_val(prec, expected)))
}
