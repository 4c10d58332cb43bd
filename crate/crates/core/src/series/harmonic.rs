//! Generalized harmonic numbers `H_m^{(r)} = Σ_{j=1}^m j^{−r}`.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::precision::PrecisionContext;

/// `H_m^{(r)}` summed at the working precision of `ctx`.
pub fn harmonic(m: u64, r: u32, ctx: &PrecisionContext) -> Float {
    harmonic_prec(m, r, ctx.bits() + 16)
}

pub fn harmonic_prec(m: u64, r: u32, prec: u32) -> Float {
    let wp = prec + 8 + 64 - m.leading_zeros();
    let mut acc = Float::with_val(wp, 0);
    // smallest terms first
    for j in (1..=m).rev() {
        acc += inv_pow(j, r, wp);
    }
    Float::with_val(prec, acc)
}

/// Exact rational value, for oracles and small `m`.
pub fn harmonic_exact(m: u64, r: u32) -> Rational {
    let mut acc = Rational::new();
    for j in 1..=m {
        acc += Rational::from((Integer::from(1), Integer::from(j).pow(r)));
    }
    acc
}

fn inv_pow(j: u64, r: u32, prec: u32) -> Float {
    let d = Float::with_val(prec, j).pow(r);
    d.recip()
}

/// Index map `k ↦ mult·k + offset` with order `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HarmonicKey {
    pub mult: u32,
    pub offset: u32,
    pub order: u32,
}

/// Running values of `H_{mk+o}^{(r)}` for the keys in use, advanced one
/// block of `m` reciprocal powers per step of `k`.
#[derive(Debug, Clone)]
pub struct HarmonicState {
    prec: u32,
    k: u64,
    entries: BTreeMap<HarmonicKey, (u64, Float)>,
}

impl HarmonicState {
    pub fn new(prec: u32) -> Self {
        HarmonicState {
            prec,
            k: 0,
            entries: BTreeMap::new(),
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Starts tracking `key`, initialized at the current `k`.
    pub fn register(&mut self, key: HarmonicKey) {
        if self.entries.contains_key(&key) {
            return;
        }
        let idx = key.mult as u64 * self.k + key.offset as u64;
        let v = harmonic_prec(idx, key.order, self.prec);
        self.entries.insert(key, (idx, v));
    }

    /// Moves every tracked value to index `k`; `k` must not decrease.
    pub fn advance_to(&mut self, k: u64) {
        assert!(k >= self.k, "harmonic state cannot move backwards");
        for (key, (idx, v)) in self.entries.iter_mut() {
            let target = key.mult as u64 * k + key.offset as u64;
            for j in *idx + 1..=target {
                *v += inv_pow(j, key.order, self.prec);
            }
            *idx = target;
        }
        self.k = k;
    }

    pub fn get(&self, key: HarmonicKey) -> Option<&Float> {
        self.entries.get(&key).map(|(_, v)| v)
    }

    /// `H_k^{(r)}` at the current index, if registered.
    pub fn value(&self, r: u32) -> Option<&Float> {
        self.get(HarmonicKey {
            mult: 1,
            offset: 0,
            order: r,
        })
    }
}
