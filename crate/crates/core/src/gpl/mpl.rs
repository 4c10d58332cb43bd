//! Multiple polylogarithms and the word ↔ MPL dictionary.
//!
//! `G(0^{a₁−1}, α₁, …, 0^{aₙ−1}, αₙ; z) = (−1)ⁿ Li_{a₁,…,aₙ}(z/α₁, α₁/α₂, …, α_{n−1}/αₙ)`

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::letter::Letter;
use super::word::Word;
use crate::complex::Complex;
use crate::error::{Error, Result};

/// MPL data attached to a word with nonzero last letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MplForm {
    pub indices: Vec<u32>,
    /// the nonzero letters `α₁, …, αₙ`
    pub alphas: Vec<Letter>,
    /// `(−1)ⁿ`
    pub sign: i8,
}

impl MplForm {
    pub fn weight(&self) -> u32 {
        self.indices.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.indices.len()
    }

    /// `α_{j−1}/α_j` for `j ≥ 2`; the first argument is `z/α₁`.
    pub fn exact_ratios(&self) -> Vec<Letter> {
        self.alphas
            .windows(2)
            .map(|w| w[0].div(&w[1]).expect("alphas are nonzero"))
            .collect()
    }

    pub fn arguments(&self, z: &Complex) -> Vec<Complex> {
        let prec = z.prec();
        let mut out = Vec::with_capacity(self.alphas.len());
        if let Some(a1) = self.alphas.first() {
            out.push(z / &a1.value(prec));
        }
        for r in self.exact_ratios() {
            out.push(r.value(prec));
        }
        out
    }
}

pub fn gpl_to_mpl(w: &Word) -> Result<MplForm> {
    if w.is_empty() {
        return Ok(MplForm {
            indices: vec![],
            alphas: vec![],
            sign: 1,
        });
    }
    if w.last().is_some_and(Letter::is_zero) {
        return Err(Error::InvalidWord(format!("{w} ends in a zero letter")));
    }
    let mut indices = Vec::new();
    let mut alphas = Vec::new();
    let mut run = 1u32;
    for l in w.letters() {
        if l.is_zero() {
            run += 1;
        } else {
            indices.push(run);
            alphas.push(l.clone());
            run = 1;
        }
    }
    let sign = if alphas.len() % 2 == 0 { 1 } else { -1 };
    Ok(MplForm {
        indices,
        alphas,
        sign,
    })
}

pub fn mpl_to_gpl(m: &MplForm) -> Result<Word> {
    if m.indices.len() != m.alphas.len() {
        return Err(Error::InvalidWord(
            "index and letter lists differ in length".into(),
        ));
    }
    let mut letters = Vec::with_capacity(m.weight() as usize);
    for (a, alpha) in m.indices.iter().zip(&m.alphas) {
        if *a == 0 {
            return Err(Error::InvalidWord("MPL indices must be positive".into()));
        }
        if alpha.is_zero() {
            return Err(Error::InvalidWord("MPL letters must be nonzero".into()));
        }
        letters.extend(std::iter::repeat_n(Letter::Zero, *a as usize - 1));
        letters.push(alpha.clone());
    }
    Ok(Word::new(letters))
}

/// Truncation order for a depth-`depth` nested sum with geometric rate
/// `rho`: the tail is bounded by `N^{depth−1} ρ^N / (1 − ρ)`.
pub fn truncation_order(rho: f64, depth: usize, bits: u32) -> usize {
    if rho <= 0.0 {
        return 1;
    }
    let l = rho.log2();
    let target = -(bits as f64) - 10.0 + (1.0 - rho).log2();
    let mut n: usize = 1;
    loop {
        let bound = (depth.saturating_sub(1)) as f64 * (n as f64).log2() + n as f64 * l;
        if bound < target {
            return n;
        }
        n += 1;
        if n > 2_000_000 {
            return n;
        }
    }
}

/// `Li_{a₁,…,aₖ}(x₁,…,xₖ) = Σ_{n₁>…>nₖ≥1} Π xⱼ^{nⱼ}/nⱼ^{aⱼ}`, summed
/// in `O(kN)` with `N` from the geometric tail bound.
pub fn mpl_sum(indices: &[u32], args: &[Complex], prec: u32) -> Result<Complex> {
    let k = indices.len();
    if k == 0 {
        return Ok(Complex::one(prec));
    }
    if args.len() != k {
        return Err(Error::InvalidWord(
            "argument count differs from depth".into(),
        ));
    }
    // rate: the largest partial product modulus
    let mut rho: f64 = 0.0;
    let mut run = 0.0f64;
    for a in args {
        run += a.log2_abs();
        rho = rho.max(run.exp2());
    }
    if rho >= 1.0 {
        return Err(Error::OutsideConvergence(format!(
            "nested sum has rate {rho:.6} ≥ 1"
        )));
    }
    let n_max = truncation_order(rho, k, prec);
    let wp = prec + 16 + (k as u32) * 4;
    let xs: Vec<Complex> = args.iter().map(|a| a.with_prec(wp)).collect();
    let mut pows: Vec<Complex> = vec![Complex::one(wp); k];
    // t[j] = partial sum of the j-th level over n_j ≤ n
    let mut t: Vec<Complex> = vec![Complex::zero(wp); k + 1];
    t[k] = Complex::one(wp);
    for n in 1..=n_max {
        for j in 0..k {
            pows[j] = &pows[j] * &xs[j];
            let denom = Float::with_val(wp, n as u32).pow(indices[j]);
            let inner = if j + 1 == k {
                Complex::one(wp)
            } else {
                t[j + 1].clone()
            };
            let term = (&pows[j] * &inner).scale(&denom.recip());
            t[j] += &term;
        }
    }
    Ok(t[0].with_prec(prec))
}
