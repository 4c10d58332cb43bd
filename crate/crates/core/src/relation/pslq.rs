//! Ferguson–Bailey PSLQ with the one-level partial-sum-of-squares update.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::digits_to_bits;

/// A target value to be expressed over a labelled basis.
#[derive(Debug, Clone)]
pub struct RelationProblem {
    pub target: Float,
    pub basis: Vec<(String, Float)>,
    pub max_coeff_digits: u32,
    pub precision_digits: u32,
}

/// Integer vector `(c₀, c₁, …, c_m)` with `c₀·target + Σ cᵢ·basisᵢ ≈ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    #[serde(with = "integer_strings")]
    pub coeffs: Vec<Integer>,
    /// `log₁₀ |c₀·target + Σ cᵢ·basisᵢ|` at detection precision
    pub residual_log10: f64,
}

mod integer_strings {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|i| i.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<Integer>().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Smallest detection precision allowed for `basis_len` elements.
pub fn required_digits(max_coeff_digits: u32, basis_len: usize) -> u32 {
    20 + max_coeff_digits * (basis_len as u32 + 1)
}

impl RelationProblem {
    pub fn validate(&self) -> Result<()> {
        if self.basis.is_empty() {
            return Err(Error::InvalidProblem("basis is empty".into()));
        }
        if self.max_coeff_digits == 0 {
            return Err(Error::InvalidProblem(
                "coefficient bound must be positive".into(),
            ));
        }
        let need = required_digits(self.max_coeff_digits, self.basis.len());
        if self.precision_digits < need {
            return Err(Error::PrecisionTooLow(format!(
                "{} digits for {} basis elements with {}-digit coefficients; need {need}",
                self.precision_digits,
                self.basis.len(),
                self.max_coeff_digits
            )));
        }
        let eps = Float::with_val(64, 10).pow(-(self.precision_digits as i32 - 10));
        if self.target.is_zero() || Float::with_val(64, self.target.abs_ref()) < eps {
            return Err(Error::InvalidProblem(
                "target is zero at working precision".into(),
            ));
        }
        for (i, (li, vi)) in self.basis.iter().enumerate() {
            if vi.is_zero() || Float::with_val(64, vi.abs_ref()) < eps {
                return Err(Error::InvalidProblem(format!(
                    "basis element `{li}` vanishes"
                )));
            }
            for (lj, vj) in &self.basis[i + 1..] {
                let d = Float::with_val(vi.prec().max(vj.prec()), vi - vj).abs();
                if d < eps {
                    return Err(Error::InvalidProblem(format!(
                        "basis elements `{li}` and `{lj}` coincide"
                    )));
                }
            }
        }
        Ok(())
    }

    fn values(&self) -> Vec<Float> {
        std::iter::once(&self.target)
            .chain(self.basis.iter().map(|(_, v)| v))
            .cloned()
            .collect()
    }
}

/// `|Σ cᵢ·vᵢ|` evaluated at the precision of the inputs.
pub fn residual(coeffs: &[Integer], values: &[Float]) -> Float {
    let prec = values.iter().map(Float::prec).max().unwrap_or(64) + 32;
    let mut acc = Float::with_val(prec, 0);
    for (c, v) in coeffs.iter().zip(values) {
        acc += Float::with_val(prec, v * c);
    }
    acc.abs()
}

/// Runs PSLQ on `problem`; `Ok(None)` when no relation within the bound
/// exists at this precision.
pub fn pslq(problem: &RelationProblem) -> Result<Option<Relation>> {
    problem.validate()?;
    let values = problem.values();
    let bound = Integer::from(10).pow(problem.max_coeff_digits);
    let Some(raw) = pslq_vector(&values, &bound, problem.precision_digits) else {
        return Ok(None);
    };
    let coeffs = normalize(raw);
    if coeffs.iter().all(|c| *c == 0) || coeffs.iter().any(|c| Integer::from(c.abs_ref()) > bound) {
        return Ok(None);
    }
    let r = residual(&coeffs, &values);
    let limit = Float::with_val(64, 10).pow(-(problem.precision_digits as i32 - 10));
    if r >= limit {
        return Ok(None);
    }
    let residual_log10 = if r.is_zero() {
        f64::NEG_INFINITY
    } else {
        r.log10().to_f64()
    };
    Ok(Some(Relation {
        coeffs,
        residual_log10,
    }))
}

/// Divides out the content and makes the first nonzero entry positive.
fn normalize(mut v: Vec<Integer>) -> Vec<Integer> {
    let g = v.iter().fold(Integer::new(), |g, c| g.gcd(c));
    if g > 1 {
        for c in &mut v {
            c.div_exact_mut(&g);
        }
    }
    if v.iter().find(|c| **c != 0).is_some_and(|c| *c < 0) {
        for c in &mut v {
            *c = Integer::from(-&*c);
        }
    }
    v
}

fn round_int(x: &Float) -> Integer {
    let mut r = x.clone();
    r.round_mut();
    r.to_integer_round(Round::Nearest)
        .map(|(i, _)| i)
        .unwrap_or_default()
}

#[allow(clippy::needless_range_loop)]
fn pslq_vector(x: &[Float], bound: &Integer, digits: u32) -> Option<Vec<Integer>> {
    let n = x.len();
    let prec = digits_to_bits(digits) + 32;
    let f = |v: &Float| Float::with_val(prec, v);
    let zero = || Float::with_val(prec, 0);
    let gamma = Float::with_val(prec, 4u32) / 3u32;
    let gamma = gamma.sqrt() + Float::with_val(prec, 1e-3);
    let detect = Float::with_val(prec, 10).pow(-(digits as i32 - 10));

    // s_j = ‖x_j..x_n‖
    let mut s: Vec<Float> = vec![zero(); n];
    let mut acc = zero();
    for j in (0..n).rev() {
        acc += Float::with_val(prec, x[j].square_ref());
        s[j] = Float::with_val(prec, acc.sqrt_ref());
    }
    let norm = s[0].clone();
    let mut y: Vec<Float> = x.iter().map(|v| f(v) / &norm).collect();
    for sj in &mut s {
        *sj /= &norm;
    }
    let mut h: Vec<Vec<Float>> = vec![vec![zero(); n - 1]; n];
    for i in 0..n {
        for j in 0..(n - 1).min(i + 1) {
            h[i][j] = if i == j {
                Float::with_val(prec, &s[j + 1] / &s[j])
            } else {
                let den = Float::with_val(prec, &s[j] * &s[j + 1]);
                -Float::with_val(prec, &y[i] * &y[j]) / den
            };
        }
    }
    let mut a: Vec<Vec<Integer>> = (0..n)
        .map(|i| (0..n).map(|j| Integer::from((i == j) as u32)).collect())
        .collect();
    let mut b = a.clone();

    let reduce = |h: &mut Vec<Vec<Float>>,
                  y: &mut Vec<Float>,
                  a: &mut Vec<Vec<Integer>>,
                  b: &mut Vec<Vec<Integer>>,
                  from: usize| {
        for i in from..n {
            for j in (0..i.min(n - 1)).rev() {
                if h[j][j].is_zero() {
                    continue;
                }
                let t = round_int(&Float::with_val(prec, &h[i][j] / &h[j][j]));
                if t == 0 {
                    continue;
                }
                let tf = Float::with_val(prec, &t);
                let delta = Float::with_val(prec, &tf * &y[i]);
                y[j] += delta;
                for k in 0..=j {
                    let d = Float::with_val(prec, &tf * &h[j][k]);
                    h[i][k] -= d;
                }
                for k in 0..n {
                    let d = Integer::from(&t * &a[j][k]);
                    a[i][k] -= d;
                    let d = Integer::from(&t * &b[k][i]);
                    b[k][j] += d;
                }
            }
        }
    };
    reduce(&mut h, &mut y, &mut a, &mut b, 1);

    let max_iter = 2000 * n;
    for _ in 0..max_iter {
        // exchange step
        let mut m = 0;
        let mut best = zero();
        let mut gp = Float::with_val(prec, 1);
        for i in 0..n - 1 {
            gp *= &gamma;
            let v = Float::with_val(prec, h[i][i].abs_ref()) * &gp;
            if v > best {
                best = v;
                m = i;
            }
        }
        y.swap(m, m + 1);
        a.swap(m, m + 1);
        h.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }
        if m + 2 < n {
            let t0 = Float::with_val(prec, h[m][m].square_ref())
                + Float::with_val(prec, h[m][m + 1].square_ref());
            let t0 = t0.sqrt();
            let t1 = Float::with_val(prec, &h[m][m] / &t0);
            let t2 = Float::with_val(prec, &h[m][m + 1] / &t0);
            for row in h.iter_mut().skip(m) {
                let t3 = row[m].clone();
                let t4 = row[m + 1].clone();
                row[m] = Float::with_val(prec, &t1 * &t3) + Float::with_val(prec, &t2 * &t4);
                row[m + 1] = Float::with_val(prec, &t1 * &t4) - Float::with_val(prec, &t2 * &t3);
            }
        }
        reduce(&mut h, &mut y, &mut a, &mut b, m + 1);

        // a relation shows up as a tiny entry of y; its column of B
        for j in 0..n {
            if Float::with_val(prec, y[j].abs_ref()) < detect {
                let col: Vec<Integer> = (0..n).map(|i| b[i][j].clone()).collect();
                return Some(col);
            }
        }
        // every relation has norm ≥ 1/max|H_jj|
        let hmax = (0..n - 1)
            .map(|j| Float::with_val(prec, h[j][j].abs_ref()))
            .fold(zero(), |acc, v| if v > acc { v } else { acc });
        if hmax.is_zero() {
            return None;
        }
        let lower = Float::with_val(prec, hmax.recip_ref());
        if lower > Float::with_val(prec, bound) * (n as u32) {
            return None;
        }
        // entries of A beyond the available digits mean precision is spent
        let amax = a
            .iter()
            .flatten()
            .map(|v| v.significant_bits())
            .max()
            .unwrap_or(0);
        if amax as f64 > digits as f64 * std::f64::consts::LOG2_10 {
            return None;
        }
    }
    None
}
