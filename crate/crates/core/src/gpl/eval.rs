//! Numeric evaluation of GPLs with constant letters.
//!
//! Two independent engines:
//! * nested MPL sums, with the `p = 2` Hölder convolution for endpoints on
//!   or near the letter circle, and shuffle regularization for trailing
//!   zeros;
//! * a power-log series `Σⱼ logʲx Σₙ c_{j,n} xⁿ` built by integrating
//!   letter by letter, valid when `|z|` is below every nonzero letter.

use rug::Float;

use super::letter::Letter;
use super::mpl::{gpl_to_mpl, mpl_sum, truncation_order};
use super::word::{Word, WordCombination};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

const DIRECT_RATE: f64 = 0.75;
const HOELDER_RATE: f64 = 0.9;
const EXTRA_BITS: u32 = 32;

#[derive(Debug, Clone)]
struct NumLetter {
    v: Complex,
    exact: Option<Letter>,
    zero: bool,
}

impl NumLetter {
    fn from_letter(l: &Letter, prec: u32) -> Self {
        NumLetter {
            v: l.value(prec),
            exact: Some(l.clone()),
            zero: l.is_zero(),
        }
    }

    fn from_complex(v: &Complex) -> Self {
        NumLetter {
            zero: v.is_zero(),
            v: v.clone(),
            exact: None,
        }
    }

    fn same(&self, other: &NumLetter) -> bool {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return a == b;
        }
        if self.zero || other.zero {
            return self.zero && other.zero;
        }
        let prec = self.v.prec();
        let d = (&self.v - &other.v).log2_abs();
        let scale = self.v.log2_abs();
        d < scale - (prec as f64) * 0.75
    }

    fn div(&self, z: &NumLetter) -> NumLetter {
        let exact = match (&self.exact, &z.exact) {
            (Some(a), Some(b)) => a.div(b).ok(),
            _ => None,
        };
        NumLetter {
            v: &self.v / &z.v,
            exact,
            zero: self.zero,
        }
    }

    /// `1 − b`, with exactness kept for rational letters.
    fn one_minus(&self) -> NumLetter {
        let prec = self.v.prec();
        let one = NumLetter::from_letter(&Letter::one(), prec);
        let zero = self.same(&one);
        let exact = self
            .exact
            .as_ref()
            .and_then(Letter::as_rational)
            .map(|q| Letter::rational(1 - q));
        let v = if zero {
            Complex::zero(prec)
        } else {
            &one.v - &self.v
        };
        NumLetter { v, exact, zero }
    }
}

fn factorial(n: usize, prec: u32) -> Float {
    Float::with_val(prec, Float::factorial(n as u32))
}

fn eval_numeric(
    word: &[NumLetter],
    z: &NumLetter,
    prec: u32,
    allow_hoelder: bool,
) -> Result<Complex> {
    let n = word.len();
    if n == 0 {
        return Ok(Complex::one(prec));
    }
    let all_zero = word.iter().all(|l| l.zero);
    if z.zero {
        if all_zero {
            return Err(Error::DomainError("G(0,…,0; 0) involves log 0".into()));
        }
        return Ok(Complex::zero(prec));
    }
    if all_zero {
        let l = z.v.ln();
        return Ok(l.powi(n as i32).scale(&factorial(n, prec).recip()));
    }
    let m = word.iter().rev().take_while(|l| l.zero).count();
    if m > 0 {
        return regularize_trailing(word, m, z, prec, allow_hoelder);
    }
    if word[0].same(z) {
        return Err(Error::DivergentWord);
    }
    let rho = direct_rate(word, &z.v);
    if rho <= DIRECT_RATE || (!allow_hoelder && rho < 1.0) {
        return direct(word, z, prec);
    }
    if allow_hoelder {
        match hoelder(word, z, prec) {
            Err(Error::OutsideConvergence(_)) if rho < 1.0 => return direct(word, z, prec),
            other => return other,
        }
    }
    Err(Error::OutsideConvergence(format!("direct rate {rho:.4}")))
}

fn direct_rate(word: &[NumLetter], z: &Complex) -> f64 {
    let lz = z.log2_abs();
    word.iter()
        .filter(|l| !l.zero)
        .map(|l| (lz - l.v.log2_abs()).exp2())
        .fold(0.0, f64::max)
}

fn direct(word: &[NumLetter], z: &NumLetter, prec: u32) -> Result<Complex> {
    let mut indices = Vec::new();
    let mut alphas: Vec<&NumLetter> = Vec::new();
    let mut run = 1u32;
    for l in word {
        if l.zero {
            run += 1;
        } else {
            indices.push(run);
            alphas.push(l);
            run = 1;
        }
    }
    let mut args = Vec::with_capacity(alphas.len());
    args.push(&z.v / &alphas[0].v);
    for w in alphas.windows(2) {
        let r = match (&w[0].exact, &w[1].exact) {
            (Some(a), Some(b)) => a.div(b)?.value(prec),
            _ => &w[0].v / &w[1].v,
        };
        args.push(r);
    }
    let v = mpl_sum(&indices, &args, prec)?;
    Ok(if alphas.len() % 2 == 1 { -v } else { v })
}

/// `m·G(u, 0^m; z) = log z · G(u, 0^{m−1}; z) − Σ_p G(u₍<p₎, 0, u₍≥p₎, 0^{m−1}; z)`.
fn regularize_trailing(
    word: &[NumLetter],
    m: usize,
    z: &NumLetter,
    prec: u32,
    allow_hoelder: bool,
) -> Result<Complex> {
    let n = word.len();
    let u = &word[..n - m];
    let zero = word[n - 1].clone();
    let shorter: Vec<NumLetter> = word[..n - 1].to_vec();
    let mut acc = &z.v.ln() * &eval_numeric(&shorter, z, prec, allow_hoelder)?;
    for p in 0..u.len() {
        let mut w: Vec<NumLetter> = Vec::with_capacity(n);
        w.extend_from_slice(&u[..p]);
        w.push(zero.clone());
        w.extend_from_slice(&u[p..]);
        w.extend(std::iter::repeat_n(zero.clone(), m - 1));
        acc -= &eval_numeric(&w, z, prec, allow_hoelder)?;
    }
    Ok(acc.div_u(m as u32))
}

/// `G(a; 1) = Σₖ (−1)ᵏ G(1−aₖ, …, 1−a₁; ½) G(a_{k+1}, …, aₙ; ½)` after
/// rescaling the endpoint to 1.
fn hoelder(word: &[NumLetter], z: &NumLetter, prec: u32) -> Result<Complex> {
    let b: Vec<NumLetter> = word.iter().map(|l| l.div(z)).collect();
    let refl: Vec<NumLetter> = b.iter().map(NumLetter::one_minus).collect();
    let half = Letter::rational(rug::Rational::from((1, 2)));
    let zh = NumLetter::from_letter(&half, prec);
    let rate = |ls: &[NumLetter]| direct_rate(ls, &zh.v);
    let r = rate(&b).max(rate(&refl));
    if r >= HOELDER_RATE {
        return Err(Error::OutsideConvergence(format!("Hölder rate {r:.4}")));
    }
    let n = b.len();
    let mut acc = Complex::zero(prec);
    for k in 0..=n {
        let left: Vec<NumLetter> = refl[..k].iter().rev().cloned().collect();
        let right = &b[k..];
        let lv = eval_numeric(&left, &zh, prec, false)?;
        let rv = eval_numeric(right, &zh, prec, false)?;
        let t = &lv * &rv;
        if k % 2 == 0 {
            acc += &t;
        } else {
            acc -= &t;
        }
    }
    Ok(acc)
}

/// `G(w; z)` at the working precision of `ctx`.
pub fn gpl_eval(w: &Word, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    gpl_eval_prec(w, z, ctx.bits())
}

pub fn gpl_eval_prec(w: &Word, z: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + EXTRA_BITS;
    let letters: Vec<NumLetter> = w
        .letters()
        .iter()
        .map(|l| NumLetter::from_letter(l, wp))
        .collect();
    let zn = NumLetter::from_complex(&z.with_prec(wp));
    eval_numeric(&letters, &zn, wp, true).map(|v| v.with_prec(prec))
}

/// `G(w; z)` for an exact endpoint, so that letter coincidences are
/// detected symbolically.
pub fn gpl_eval_exact(w: &Word, z: &Letter, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.bits();
    let wp = prec + EXTRA_BITS;
    let letters: Vec<NumLetter> = w
        .letters()
        .iter()
        .map(|l| NumLetter::from_letter(l, wp))
        .collect();
    let zn = NumLetter::from_letter(z, wp);
    eval_numeric(&letters, &zn, wp, true).map(|v| v.with_prec(prec))
}

/// Sign and MPL evaluation of a word with nonzero last letter; mirrors
/// the dictionary used by the nested-sum engine.
pub fn gpl_via_mpl(w: &Word, z: &Complex, prec: u32) -> Result<Complex> {
    let m = gpl_to_mpl(w)?;
    let args = m.arguments(&z.with_prec(prec + EXTRA_BITS));
    let v = mpl_sum(&m.indices, &args, prec + EXTRA_BITS)?;
    let v = if m.sign < 0 { -v } else { v };
    Ok(v.with_prec(prec))
}

/// Power-log series engine; needs `|z|` below every nonzero letter modulus.
pub fn gpl_eval_series(w: &Word, z: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + EXTRA_BITS;
    let n = w.weight();
    if n == 0 {
        return Ok(Complex::one(prec));
    }
    if z.is_zero() {
        return if w.is_all_zero() {
            Err(Error::DomainError("G(0,…,0; 0) involves log 0".into()))
        } else {
            Ok(Complex::zero(prec))
        };
    }
    let z = z.with_prec(wp);
    let letters: Vec<Complex> = w.letters().iter().map(|l| l.value(wp)).collect();
    let lz = z.log2_abs();
    let rho = w
        .letters()
        .iter()
        .zip(&letters)
        .filter(|(l, _)| !l.is_zero())
        .map(|(_, v)| (lz - v.log2_abs()).exp2())
        .fold(0.0, f64::max);
    if rho >= 1.0 {
        return Err(Error::OutsideConvergence(format!(
            "power-log series needs |z| below every letter (rate {rho:.4})"
        )));
    }
    let order = truncation_order(rho, n + 1, wp) + 4 * n + 8;
    // c[j][k]: coefficient of log^j(x) x^k
    let mut c: Vec<Vec<Complex>> = vec![vec![Complex::zero(wp); order + 1]];
    c[0][0] = Complex::one(wp);
    for (l, a) in w.letters().iter().zip(&letters).rev() {
        let jmax = c.len();
        let mut g: Vec<Vec<Complex>> = vec![vec![Complex::zero(wp); order + 1]; jmax + 1];
        for j in 0..jmax {
            // h: coefficients of x^k log^j x in f/(x − a), or f/x for a = 0
            let h: Vec<Complex> = if l.is_zero() {
                let ck = &c[j][0];
                if !ck.is_zero() {
                    let add = ck.div_u(j as u32 + 1);
                    g[j + 1][0] += &add;
                }
                c[j][1..].to_vec()
            } else {
                let inv = &Complex::one(wp) / a;
                let mut e = Complex::zero(wp);
                let mut out = Vec::with_capacity(order + 1);
                for ck in &c[j] {
                    e = &(&e - ck) * &inv;
                    out.push(e.clone());
                }
                out
            };
            for (k, hk) in h.iter().enumerate() {
                if hk.is_zero() || k + 1 > order {
                    continue;
                }
                integrate_monomial(hk, k, j, &mut g, wp);
            }
        }
        while g.len() > 1 && g.last().is_some_and(|row| row.iter().all(Complex::is_zero)) {
            g.pop();
        }
        c = g;
    }
    let logz = z.ln();
    let mut total = Complex::zero(wp);
    let mut lp = Complex::one(wp);
    for row in &c {
        let mut s = Complex::zero(wp);
        let mut zp = Complex::one(wp);
        for ck in row {
            if !ck.is_zero() {
                s += &(ck * &zp);
            }
            zp = &zp * &z;
        }
        total += &(&s * &lp);
        lp = &lp * &logz;
    }
    Ok(total.with_prec(prec))
}

/// `∫₀ˣ yᵏ logʲy dy = Σᵢ (−1)^{j−i} j!/i! · x^{k+1} logⁱx / (k+1)^{j−i+1}`
fn integrate_monomial(coef: &Complex, k: usize, j: usize, g: &mut [Vec<Complex>], wp: u32) {
    let m = Float::with_val(wp, k as u32 + 1);
    let mut factor = Float::with_val(wp, 1) / &m;
    // i runs from j down to 0; factor = j!/i! / m^{j−i+1} with alternating sign
    for i in (0..=j).rev() {
        let t = coef.scale(&factor);
        if (j - i).is_multiple_of(2) {
            g[i][k + 1] += &t;
        } else {
            g[i][k + 1] -= &t;
        }
        if i > 0 {
            factor *= i as u32;
            factor /= &m;
        }
    }
}

impl WordCombination {
    /// `Σ c_w G(w; z)`, times `log^{scalar_logs} z`.
    pub fn eval(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        let prec = ctx.bits();
        let mut acc = Complex::zero(prec + EXTRA_BITS);
        for (w, c) in self.iter() {
            let v = gpl_eval_prec(w, z, prec + EXTRA_BITS)?;
            acc += &v.scale_rational(c);
        }
        if self.scalar_logs > 0 {
            acc = &acc
                * &z.with_prec(prec + EXTRA_BITS)
                    .ln()
                    .powi(self.scalar_logs as i32);
        }
        Ok(acc.with_prec(prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polylog;
    use rug::float::Constant;
    use rug::Rational;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn boundary_settings() {
        let p = ctx().bits();
        let v = gpl_eval(&Word::empty(), &Complex::from_f64(2.0, 0.0, p), &ctx()).unwrap();
        assert_eq!(v, Complex::one(p));
        let e = Complex::from_real(Float::with_val(p, 1).exp());
        let v = gpl_eval(&Word::zeros(2), &e, &ctx()).unwrap();
        assert!(close(&v, &Complex::from_f64(0.5, 0.0, p), 1e-55));
    }

    #[test]
    fn g01_at_one_is_minus_zeta2() {
        let p = ctx().bits();
        let v = gpl_eval_exact(&Word::from_ints(&[0, 1]), &Letter::one(), &ctx()).unwrap();
        let want = -Float::with_val(p, Constant::Pi).square() / 6u32;
        assert!(close(&v, &Complex::from_real(want), 1e-55));
    }

    #[test]
    fn depth_one_words() {
        let p = ctx().bits();
        let one = Complex::one(p);
        let v = gpl_eval(&Word::from_ints(&[2]), &one, &ctx()).unwrap();
        let l2 = Float::with_val(p, Constant::Log2);
        assert!(close(&v, &Complex::from_real(-l2), 1e-55));
        let v = gpl_eval(&Word::new(vec![Letter::i()]), &one, &ctx()).unwrap();
        let w = polylog::li_prec(1, &(&one / &Letter::i().value(p)), p).unwrap();
        assert!(close(&v, &-w, 1e-55));
    }

    #[test]
    fn divergent_configuration() {
        let r = gpl_eval_exact(&Word::from_ints(&[1, 0, 2]), &Letter::one(), &ctx());
        assert_eq!(r, Err(Error::DivergentWord));
        let p = ctx().bits();
        let r = gpl_eval(
            &Word::from_ints(&[3]),
            &Complex::from_f64(3.0, 0.0, p),
            &ctx(),
        );
        assert_eq!(r, Err(Error::DivergentWord));
    }

    #[test]
    fn engines_agree_inside_the_disk() {
        let p = ctx().bits();
        let z = Complex::from_f64(0.31, 0.17, p);
        let words = [
            Word::from_ints(&[2, 0, -1]),
            Word::new(vec![
                Letter::i(),
                Letter::one(),
                Letter::Zero,
                Letter::minus_i(),
            ]),
            Word::from_ints(&[0, 0, 3]),
            Word::new(vec![Letter::surd("1_plus_sqrt2").unwrap(), Letter::int(-2)]),
        ];
        for w in &words {
            let a = gpl_eval_prec(w, &z, p).unwrap();
            let b = gpl_eval_series(w, &z, p).unwrap();
            let c = gpl_via_mpl(w, &z, p).unwrap();
            assert!(close(&a, &b, 1e-55), "{w}");
            assert!(close(&a, &c, 1e-55), "{w}");
        }
    }

    #[test]
    fn trailing_zeros_match_series_engine() {
        let p = ctx().bits();
        let z = Complex::from_f64(0.4, -0.2, p);
        for w in [
            Word::from_ints(&[2, 0]),
            Word::from_ints(&[-1, 3, 0, 0]),
            Word::new(vec![Letter::Zero, Letter::i(), Letter::Zero]),
        ] {
            let a = gpl_eval_prec(&w, &z, p).unwrap();
            let b = gpl_eval_series(&w, &z, p).unwrap();
            assert!(close(&a, &b, 1e-55), "{w}");
        }
    }

    #[test]
    fn hoelder_route_matches_known_values() {
        let p = ctx().bits();
        // G(-1; 1) = log 2, G(0,-1; 1) = -Li2(-1) = π²/12
        let v = gpl_eval_exact(&Word::from_ints(&[-1]), &Letter::one(), &ctx()).unwrap();
        assert!(close(
            &v,
            &Complex::from_real(Float::with_val(p, Constant::Log2)),
            1e-55
        ));
        let v = gpl_eval_exact(&Word::from_ints(&[0, -1]), &Letter::one(), &ctx()).unwrap();
        let want = Float::with_val(p, Constant::Pi).square() / 12u32;
        assert!(close(&v, &Complex::from_real(want), 1e-55));
        // G(0, i; 1) = -Li2(-i)
        let v = gpl_eval_exact(
            &Word::new(vec![Letter::Zero, Letter::i()]),
            &Letter::one(),
            &ctx(),
        )
        .unwrap();
        let want = -polylog::li_prec(2, &-Complex::i(p), p).unwrap();
        assert!(close(&v, &want, 1e-55));
        // G(0,0,1;1) = -ζ(3) through the weight-3 Hölder split
        let v = gpl_eval_exact(&Word::from_ints(&[0, 0, 1]), &Letter::one(), &ctx()).unwrap();
        assert!(close(&v, &Complex::from_real(-polylog::zeta(3, p)), 1e-55));
    }

    #[test]
    fn combination_eval_with_logs() {
        let p = ctx().bits();
        let z = Complex::from_f64(0.3, 0.0, p);
        let mut c = WordCombination::single(Word::from_ints(&[2]), Rational::from(3));
        c.scalar_logs = 1;
        let v = c.eval(&z, &ctx()).unwrap();
        let g = gpl_eval(&Word::from_ints(&[2]), &z, &ctx()).unwrap();
        let want = (&g * &z.ln()).scale(&Float::with_val(p, 3));
        assert!(close(&v, &want, 1e-55));
    }
}
