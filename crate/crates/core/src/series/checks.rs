//! Two-sided identities: generating functions, the parametric logarithmic
//! families and the `C(4k,2k)` ↔ `C(2k,k)` symmetry.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::eval::eval_series;
use super::spec::{Argument, Factor, SeriesKind, SeriesSpec, WeightTerm};
use crate::complex::Complex;
use crate::constants::{trig_pi, Trig};
use crate::error::{Error, Result};
use crate::polylog::li;
use crate::precision::PrecisionContext;
use crate::util::Q;

/// Which generating function to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GfVariant {
    /// `Σ_{k≥1} w^k H_k^{(r)} = Li_r(w)/(1−w)`
    Plain,
    /// `Σ_{k≥1} w^{2k} H_{2k}^{(r)} = ½[Li_r(w)/(1−w) + Li_r(−w)/(1+w)]`
    Even,
}

/// Returns `(series side, closed side)`, computed independently.
pub fn eval_generating_function_check(
    w: &Complex,
    r: u32,
    variant: GfVariant,
    ctx: &PrecisionContext,
) -> Result<(Complex, Complex)> {
    if r == 0 {
        return Err(Error::DomainError("harmonic order must be positive".into()));
    }
    let prec = ctx.bits();
    if w.abs() >= 1 {
        return Err(Error::DomainError(format!(
            "|w| = {:.6} is not below 1",
            w.abs().to_f64()
        )));
    }
    let wp = prec + 32;
    let w = w.with_prec(wp);
    let closed = {
        let f = |v: &Complex| -> Result<Complex> {
            let l = li(r, v, &ctx.refined())?.with_prec(wp);
            Ok(&l / &(&Complex::one(wp) - v))
        };
        match variant {
            GfVariant::Plain => f(&w)?,
            GfVariant::Even => (&f(&w)? + &f(&-w.clone())?).scale_rational(&Rational::from((1, 2))),
        }
    };
    let series = gf_series(&w, r, variant, prec)?;
    Ok((series.with_prec(prec), closed.with_prec(prec)))
}

fn gf_series(w: &Complex, r: u32, variant: GfVariant, prec: u32) -> Result<Complex> {
    let wp = w.prec();
    if w.is_zero() {
        return Ok(Complex::zero(wp));
    }
    let (step, mult) = match variant {
        GfVariant::Plain => (w.clone(), 1u64),
        GfVariant::Even => (w * w, 2u64),
    };
    let rho = step.abs().to_f64();
    let target = -(prec as f64) - 4.0;
    let mut pw = Complex::one(wp);
    let mut h = Float::with_val(wp, 0);
    let mut idx = 0u64;
    let mut acc = Complex::zero(wp);
    for k in 1..=5_000_000u64 {
        pw = &pw * &step;
        while idx < mult * k {
            idx += 1;
            h += Float::with_val(wp, idx).pow(r).recip();
        }
        acc += &pw.scale(&h);
        // |w^{mk}| ρ^j (1 + j/k)^d with H bounded by 1 + ln(mk) or ζ(2)
        let (u, d) = if r == 1 {
            (1.0 + ((mult * k) as f64).ln(), 1)
        } else {
            (1.65, 0)
        };
        let tail = pw.log2_abs() + u.log2() + tail_factor(rho, k as f64, d).log2();
        if tail < target {
            return Ok(acc);
        }
    }
    Err(Error::PrecisionExhausted(
        "generating-function series did not converge".into(),
    ))
}

fn tail_factor(rho: f64, k: f64, d: i32) -> f64 {
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
        if j > 1e6 {
            return f64::INFINITY;
        }
    }
}

/// Closed-form families in a trigonometric angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ParametricFamily {
    /// `Σ C(3k,k) x^k H_k`, `x = 4cos²(3φ/2)/27`
    ThreeKHk,
    /// `Σ C(3k,k) x^k ħ_k`
    ThreeKHbar,
    /// `Σ C(3k,k) x^k H_{2k}`
    ThreeKH2k,
    /// `Σ C(3k,k) x^k (H_{3k} − H_{2k})`
    ThreeKH3kMinusH2k,
    /// `Σ C(3k,k) x^k`
    ThreeKPlain,
    /// `Σ C(4k,2k) x^k H_k`, `x = cos²(2ψ)/16`
    FourKHk,
    /// `Σ C(2k,k) x^k H_k`, `x = cos²(2ψ)/4`
    Boyadzhiev,
}

impl ParametricFamily {
    pub const ALL: [ParametricFamily; 7] = [
        ParametricFamily::ThreeKHk,
        ParametricFamily::ThreeKHbar,
        ParametricFamily::ThreeKH2k,
        ParametricFamily::ThreeKH3kMinusH2k,
        ParametricFamily::ThreeKPlain,
        ParametricFamily::FourKHk,
        ParametricFamily::Boyadzhiev,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParametricFamily::ThreeKHk => "3k_Hk",
            ParametricFamily::ThreeKHbar => "3k_hbar",
            ParametricFamily::ThreeKH2k => "3k_H2k",
            ParametricFamily::ThreeKH3kMinusH2k => "3k_H3k_minus_H2k",
            ParametricFamily::ThreeKPlain => "3k_plain",
            ParametricFamily::FourKHk => "4k_Hk",
            ParametricFamily::Boyadzhiev => "boyadzhiev",
        }
    }

    /// Upper end `u` of the open angle interval `(0, uπ)`.
    pub fn interval_end(self) -> Rational {
        match self {
            ParametricFamily::FourKHk | ParametricFamily::Boyadzhiev => Rational::from((1, 4)),
            _ => Rational::from((1, 3)),
        }
    }

    /// The series side at angle `νπ`.
    pub fn series_spec(self, nu: &Q) -> SeriesSpec {
        let h = |m: u32| Factor::h(m, 0, 1);
        let three_k = |weight: Vec<WeightTerm>| {
            SeriesSpec::new(
                SeriesKind::Forward3k,
                0,
                Some(Argument::Parametric {
                    coeff: Q::new(4, 27),
                    mult: Q::new(3, 2),
                    angle: nu.clone(),
                }),
            )
            .with_start(0)
            .with_weight(weight)
        };
        let one = |f: Factor| vec![WeightTerm::new(Q::int(1), vec![f])];
        match self {
            ParametricFamily::ThreeKHk => three_k(one(h(1))),
            ParametricFamily::ThreeKHbar => three_k(one(Factor::Hbar)),
            ParametricFamily::ThreeKH2k => three_k(one(h(2))),
            ParametricFamily::ThreeKH3kMinusH2k => three_k(vec![
                WeightTerm::new(Q::int(1), vec![h(3)]),
                WeightTerm::new(Q::int(-1), vec![h(2)]),
            ]),
            ParametricFamily::ThreeKPlain => three_k(vec![]),
            ParametricFamily::FourKHk => SeriesSpec::new(
                SeriesKind::Forward4k,
                0,
                Some(Argument::Parametric {
                    coeff: Q::new(1, 16),
                    mult: Q::int(2),
                    angle: nu.clone(),
                }),
            )
            .with_weight(one(h(1))),
            ParametricFamily::Boyadzhiev => SeriesSpec::new(
                SeriesKind::Central,
                0,
                Some(Argument::Parametric {
                    coeff: Q::new(1, 4),
                    mult: Q::int(2),
                    angle: nu.clone(),
                }),
            )
            .with_weight(one(h(1))),
        }
    }

    /// The trigonometric-logarithmic right-hand side at angle `νπ`.
    pub fn closed_side(self, nu: &Rational, prec: u32) -> Float {
        let c = |q: Rational| trig_pi(Trig::Cos, &q, prec);
        let s = |q: Rational| trig_pi(Trig::Sin, &q, prec);
        let half = Rational::from(nu / 2u32);
        let r3 = Float::with_val(prec, 3).sqrt();
        let r2 = Float::with_val(prec, 2).sqrt();
        match self {
            ParametricFamily::FourKHk => {
                let (sn, cs) = (s(nu.clone()), c(nu.clone()));
                let left = {
                    let num = Float::with_val(prec, sn.clone().recip() + &r2).square();
                    let den = (Float::with_val(prec, &cs / &sn) + 1u32) * 4u32;
                    (num / den).ln() / Float::with_val(prec, &r2 * &sn)
                };
                let right = {
                    let num = Float::with_val(prec, cs.clone().recip() + &r2).square();
                    let den = (Float::with_val(prec, &sn / &cs) + 1u32) * 4u32;
                    (num / den).ln() / Float::with_val(prec, &r2 * &cs)
                };
                left + right
            }
            ParametricFamily::Boyadzhiev => {
                let s2 = s(Rational::from(nu * 2u32));
                let arg = Float::with_val(prec, &s2 + 1u32) / Float::with_val(prec, &s2 * 2u32);
                arg.ln() * 2u32 / s2
            }
            _ => {
                let third = Rational::from((1, 3));
                let a = c(half.clone());
                let b = c(Rational::from(&half - &third));
                let s3 = s(nu * Rational::from((3, 2)));
                let sin_phi = s(nu.clone());
                let sin_comp = s(Rational::from((2, 3)) - nu);
                match self {
                    ParametricFamily::ThreeKHk => {
                        let l1 = (Float::with_val(prec, b.clone().square() * 2u32)
                            / Float::with_val(prec, &r3 * &sin_phi))
                        .ln();
                        let l2 = (Float::with_val(prec, a.clone().square() * 2u32)
                            / Float::with_val(prec, &r3 * &sin_comp))
                        .ln();
                        (a * l1 + b * l2) * &r3 / s3
                    }
                    ParametricFamily::ThreeKHbar => {
                        let l1 = Float::with_val(prec, &b * 2u32).ln();
                        let l2 = Float::with_val(prec, &a * 2u32).ln();
                        -(a * l1 + b * l2) * &r3 * 2u32 / s3
                    }
                    ParametricFamily::ThreeKH2k => {
                        let num = Float::with_val(prec, &a * &b) * 2u32;
                        let l1 = (Float::with_val(prec, &num)
                            / Float::with_val(prec, &r3 * &sin_phi))
                        .ln();
                        let l2 = (num / Float::with_val(prec, &r3 * &sin_comp)).ln();
                        (a * l1 + b * l2) * &r3 / s3
                    }
                    ParametricFamily::ThreeKH3kMinusH2k => {
                        let l = (Float::with_val(prec, 3)
                            / (Float::with_val(prec, &a * &b) * 4u32))
                            .ln();
                        (a + b) * l / (r3 * s3)
                    }
                    ParametricFamily::ThreeKPlain => s(Rational::from(&half + &third)) / s3,
                    ParametricFamily::FourKHk | ParametricFamily::Boyadzhiev => unreachable!(),
                }
            }
        }
    }
}

impl FromStr for ParametricFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParametricFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::DomainError(format!("unknown parametric family `{s}`")))
    }
}

impl TryFrom<String> for ParametricFamily {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ParametricFamily> for String {
    fn from(f: ParametricFamily) -> String {
        f.name().to_string()
    }
}

impl fmt::Display for ParametricFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `(series side, closed side)` at the angle `νπ`, which must lie strictly
/// inside the family's interval.
pub fn eval_parametric_log_identity(
    family: ParametricFamily,
    nu: &Q,
    ctx: &PrecisionContext,
) -> Result<(Complex, Complex)> {
    let end = family.interval_end();
    if nu.0 <= 0 || nu.0 >= end {
        return Err(Error::AngleOutOfRange {
            angle: format!("{}π", nu.0),
            interval: format!("(0, {}π)", end),
        });
    }
    let series = eval_series(&family.series_spec(nu), ctx)?;
    let closed = family.closed_side(&nu.0, ctx.bits() + 32);
    Ok((
        series,
        Complex::from_real(Float::with_val(ctx.bits(), closed)),
    ))
}

/// Which half of the `C(4k,2k)` symmetry to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry4k {
    /// `H_{2k}` on the left, `H_k` on the right
    Half,
    /// `H_{4k}` on the left, `H_{2k}` on the right
    Full,
}

/// `Σ C(4k,2k) z^{2k} H_{(2|4)k}^{(r)}` against
/// `½ Σ C(2k,k)[z^k + (−z)^k] H_{(1|2)k}^{(r)}`.
pub fn symmetry_4k2k(
    z: &Q,
    r: u32,
    which: Symmetry4k,
    ctx: &PrecisionContext,
) -> Result<(Complex, Complex)> {
    let (left_m, right_m) = match which {
        Symmetry4k::Half => (2, 1),
        Symmetry4k::Full => (4, 2),
    };
    let z2 = Q(Rational::from(&z.0 * &z.0));
    let weight = |m: u32| vec![WeightTerm::new(Q::int(1), vec![Factor::h(m, 0, r)])];
    let lhs = eval_series(
        &SeriesSpec::new(SeriesKind::Forward4k, 0, Some(Argument::Rational(z2)))
            .with_weight(weight(left_m)),
        ctx,
    )?;
    let side = |arg: Rational| {
        eval_series(
            &SeriesSpec::new(SeriesKind::Central, 0, Some(Argument::Rational(Q(arg))))
                .with_weight(weight(right_m)),
            ctx,
        )
    };
    let plus = side(z.0.clone())?;
    let minus = side(Rational::from(-&z.0))?;
    let rhs = (&plus + &minus).scale_rational(&Rational::from((1, 2)));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diff(a: &Complex, b: &Complex) -> f64 {
        (a - b).abs().to_f64()
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_target(40)
    }

    #[test]
    fn gf_half_gives_two_log2() {
        let ctx = ctx();
        let w = Complex::from_rational(&Rational::from((1, 2)), ctx.bits());
        let (s, c) = eval_generating_function_check(&w, 1, GfVariant::Plain, &ctx).unwrap();
        let want = Float::with_val(ctx.bits(), 2).ln() * 2u32;
        assert!(diff(&s, &c) < 1e-40);
        assert!(Float::with_val(ctx.bits(), &c.re - &want).abs() < 1e-40);
    }

    #[test]
    fn gf_zero_and_domain() {
        let ctx = ctx();
        let (s, c) =
            eval_generating_function_check(&Complex::zero(ctx.bits()), 3, GfVariant::Even, &ctx)
                .unwrap();
        assert!(s.is_zero());
        assert!(c.abs() < 1e-60);
        let w = Complex::from_f64(0.6, 0.8, ctx.bits());
        assert!(matches!(
            eval_generating_function_check(&w, 2, GfVariant::Plain, &ctx),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn gf_direct_oracle() {
        // oracle: plain partial sums of w^k H_k^{(2)} at w = −1/3
        let ctx = ctx();
        let p = ctx.bits() + 40;
        let w = Rational::from((-1, 3));
        let (s, c) = eval_generating_function_check(
            &Complex::from_rational(&w, ctx.bits()),
            2,
            GfVariant::Plain,
            &ctx,
        )
        .unwrap();
        let mut acc = Float::with_val(p, 0);
        let mut h = Float::with_val(p, 0);
        let mut pw = Float::with_val(p, 1);
        for k in 1..200u32 {
            h += Float::with_val(p, k * k).recip();
            pw *= &w;
            acc += Float::with_val(p, &pw * &h);
        }
        assert!(diff(&s, &c) < 1e-40);
        assert!(Float::with_val(p, &c.re - &acc).abs() < 1e-40);
    }

    #[test]
    fn gf_even_variant_complex() {
        let ctx = ctx();
        let w = Complex::from_f64(0.3, -0.45, ctx.bits());
        for r in 1..4 {
            let (s, c) = eval_generating_function_check(&w, r, GfVariant::Even, &ctx).unwrap();
            assert!(diff(&s, &c) < 1e-40, "r={r}");
        }
    }

    #[test]
    fn golden_angle_value() {
        let ctx = ctx();
        let p = ctx.bits();
        let nu = Q::new(2, 15);
        let (s, c) =
            eval_parametric_log_identity(ParametricFamily::ThreeKH3kMinusH2k, &nu, &ctx).unwrap();
        let phi = (Float::with_val(p, 5).sqrt() + 1u32) / 2u32;
        let want =
            Float::with_val(p, &phi) * (Float::with_val(p, 3).ln() - phi.clone().ln() * 2u32);
        assert!(diff(&s, &c) < 1e-40);
        assert!(Float::with_val(p, &c.re - &want).abs() < 1e-40);
        // argument is (3+√5)/54
        let x = ParametricFamily::ThreeKH3kMinusH2k
            .series_spec(&nu)
            .argument_value(&ctx)
            .unwrap();
        let want_x = (Float::with_val(p, 5).sqrt() + 3u32) / 54u32;
        assert!(Float::with_val(p, x - want_x).abs() < 1e-40);
    }

    #[test]
    fn all_families_on_grids() {
        let ctx = PrecisionContext::with_target(30);
        for fam in ParametricFamily::ALL {
            let den = if fam.interval_end() == (1, 4) { 40 } else { 30 };
            for j in 1..=9 {
                let (s, c) = eval_parametric_log_identity(fam, &Q::new(j, den), &ctx).unwrap();
                assert!(diff(&s, &c) < 1e-30, "{fam} j={j}: {} vs {}", s.re, c.re);
            }
        }
    }

    #[test]
    fn four_k_at_pi_over_six_oracle() {
        // oracle: 10⁴ plain terms of C(4k,2k) x^k H_k in f64-free big floats
        let ctx = PrecisionContext::with_target(30);
        let p = 200;
        let nu = Q::new(1, 6);
        let (_, c) = eval_parametric_log_identity(ParametricFamily::FourKHk, &nu, &ctx).unwrap();
        let x = Float::with_val(p, trig_pi(Trig::Cos, &Rational::from((1, 3)), p).square()) / 16u32;
        let mut acc = Float::with_val(p, 0);
        let mut b = Float::with_val(p, 1);
        let mut h = Float::with_val(p, 0);
        for k in 1..10_000u64 {
            b *= super::super::spec::Binomial::FourK.ratio(k - 1);
            b *= &x;
            h += Float::with_val(p, k).recip();
            acc += Float::with_val(p, &b * &h);
        }
        assert!(Float::with_val(p, &c.re - &acc).abs() < 1e-30);
    }

    #[test]
    fn angle_bounds() {
        let ctx = ctx();
        for (fam, nu) in [
            (ParametricFamily::ThreeKHk, Q::new(1, 3)),
            (ParametricFamily::ThreeKHk, Q::int(0)),
            (ParametricFamily::FourKHk, Q::new(1, 4)),
            (ParametricFamily::Boyadzhiev, Q::new(-1, 8)),
        ] {
            assert!(matches!(
                eval_parametric_log_identity(fam, &nu, &ctx),
                Err(Error::AngleOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn family_names_parse() {
        for f in ParametricFamily::ALL {
            assert_eq!(f.name().parse::<ParametricFamily>().unwrap(), f);
        }
        assert!("3k_nope".parse::<ParametricFamily>().is_err());
    }

    #[test]
    fn four_k_two_k_symmetry() {
        let ctx = ctx();
        for z in [Q::new(1, 8), Q::new(1, 10)] {
            for r in 1..=3 {
                for which in [Symmetry4k::Half, Symmetry4k::Full] {
                    let (l, rr) = symmetry_4k2k(&z, r, which, &ctx).unwrap();
                    assert!(diff(&l, &rr) < 1e-40, "z={} r={r} {which:?}", z.0);
                }
            }
        }
    }
}
