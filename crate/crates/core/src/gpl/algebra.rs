//! Shuffle algebra and exact word transformations.

use std::collections::BTreeMap;

use rug::{Integer, Rational};

use super::letter::Letter;
use super::word::{Word, WordCombination};
use crate::error::{Error, Result};

/// Shuffle product `u ⧢ v` with multiplicities.
pub fn shuffle(u: &Word, v: &Word) -> WordCombination {
    let mut memo = BTreeMap::new();
    let table = shuffle_rec(u.letters(), v.letters(), &mut memo);
    let mut out = WordCombination::new();
    for (w, c) in table {
        out.add_term(Word::new(w), Rational::from(c));
    }
    out
}

type ShuffleMemo = BTreeMap<(usize, usize), BTreeMap<Vec<Letter>, Integer>>;

fn shuffle_rec(
    u: &[Letter],
    v: &[Letter],
    memo: &mut ShuffleMemo,
) -> BTreeMap<Vec<Letter>, Integer> {
    let key = (u.len(), v.len());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let mut out = BTreeMap::new();
    if u.is_empty() || v.is_empty() {
        let w: Vec<Letter> = u.iter().chain(v.iter()).cloned().collect();
        out.insert(w, Integer::from(1));
    } else {
        for (head, rest_u, rest_v) in [(&u[0], &u[1..], v), (&v[0], u, &v[1..])] {
            for (tail, c) in shuffle_rec(rest_u, rest_v, memo) {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(head.clone());
                w.extend(tail);
                *out.entry(w).or_insert_with(Integer::new) += c;
            }
        }
    }
    memo.insert(key, out.clone());
    out
}

/// `(μα₁, …, μαₙ)`; pairs with the endpoint `μz` under the scaling identity.
pub fn scale(w: &Word, mu: &Letter) -> Result<Word> {
    if mu.is_zero() {
        return Err(Error::DomainError("scaling factor must be nonzero".into()));
    }
    if w.last().is_some_and(Letter::is_zero) {
        return Err(Error::InvalidWord(format!("{w} ends in a zero letter")));
    }
    Ok(Word::new(w.letters().iter().map(|l| l.mul(mu)).collect()))
}

/// `G(0, β₁, …, β_{r−1}, 2; 1) = (−1)^{r+1} G(−1, 1−β_{r−1}, …, 1−β₁, 1; 1)`
/// for `βⱼ ∈ {0, 1}`.
pub fn hoelder_reflect(w: &Word) -> Result<(Word, i32)> {
    let ls = w.letters();
    let shape_err = || {
        Error::ShapeError(format!(
            "{w} is not of the form (0, β…, 2) with β ∈ {{0,1}}"
        ))
    };
    if ls.len() < 2 || !ls[0].is_zero() || ls[ls.len() - 1] != Letter::int(2) {
        return Err(shape_err());
    }
    let betas = &ls[1..ls.len() - 1];
    let one = Letter::one();
    let mut out = vec![Letter::int(-1)];
    for b in betas.iter().rev() {
        if b.is_zero() {
            out.push(one.clone());
        } else if *b == one {
            out.push(Letter::Zero);
        } else {
            return Err(shape_err());
        }
    }
    out.push(one);
    let r = betas.len() + 1;
    let sign = if (r + 1).is_multiple_of(2) { 1 } else { -1 };
    Ok((Word::new(out), sign))
}

/// Words whose combination equals `Li_r(t(1−t)²/2)` as a function of `t`.
pub fn fibrate_li_family(r: u32) -> WordCombination {
    assert!(r >= 1, "fibration depth must be positive");
    let mut comb = WordCombination::new();
    for l in [Letter::int(2), Letter::i(), Letter::minus_i()] {
        comb.add_term(Word::new(vec![l]), Rational::from(-1));
    }
    for _ in 1..r {
        let mut next = WordCombination::new();
        for (w, c) in comb.iter() {
            next.add_term(w.prepend(Letter::Zero), c.clone());
            next.add_term(w.prepend(Letter::one()), Rational::from(c * 2u32));
        }
        comb = next;
    }
    comb
}

/// Membership of `G(w; 1)` in the level-`N` CMZV generating set.
pub fn level_membership(w: &Word, n: u32) -> bool {
    if w.is_empty() {
        return true;
    }
    if w.first().is_some_and(Letter::is_one) || w.last().is_some_and(Letter::is_zero) {
        return false;
    }
    w.letters().iter().all(|l| l.in_level(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> Integer {
        Integer::from(Integer::binomial_u(n as u32, k as u32))
    }

    #[test]
    fn shuffle_counts_and_identity() {
        let u = Word::from_ints(&[1, 2]);
        let v = Word::from_ints(&[3, 4, 5]);
        let s = shuffle(&u, &v);
        assert_eq!(s.total_multiplicity(), Rational::from(binom(5, 2)));
        assert_eq!(s.len(), 10);
        let e = shuffle(&Word::empty(), &v);
        assert_eq!(e.len(), 1);
        assert_eq!(e.coefficient(&v), 1);
        let s = shuffle(&Word::from_ints(&[7]), &v);
        assert_eq!(s.len(), 4);
        // repeated letters merge with multiplicity
        let s = shuffle(&Word::from_ints(&[1]), &Word::from_ints(&[1]));
        assert_eq!(s.coefficient(&Word::from_ints(&[1, 1])), 2);
    }

    #[test]
    fn scaling_examples() {
        let w = Word::new(vec![Letter::i(), Letter::minus_i()]);
        let s = scale(&w, &Letter::i()).unwrap();
        assert_eq!(s, Word::from_ints(&[-1, 1]));
        assert_eq!(scale(&w, &Letter::one()).unwrap(), w);
        assert!(scale(&Word::from_ints(&[1, 0]), &Letter::i()).is_err());
    }

    #[test]
    fn hoelder_shapes() {
        assert_eq!(
            hoelder_reflect(&Word::from_ints(&[0, 2])).unwrap(),
            (Word::from_ints(&[-1, 1]), 1)
        );
        assert_eq!(
            hoelder_reflect(&Word::from_ints(&[0, 1, 2])).unwrap(),
            (Word::from_ints(&[-1, 0, 1]), -1)
        );
        assert_eq!(
            hoelder_reflect(&Word::from_ints(&[0, 0, 2])).unwrap(),
            (Word::from_ints(&[-1, 1, 1]), -1)
        );
        assert!(matches!(
            hoelder_reflect(&Word::from_ints(&[1, 2])),
            Err(Error::ShapeError(_))
        ));
        assert!(hoelder_reflect(&Word::from_ints(&[0, 3, 2])).is_err());
    }

    #[test]
    fn fibration_structure() {
        let c1 = fibrate_li_family(1);
        assert_eq!(c1.len(), 3);
        assert!(c1.iter().all(|(_, c)| *c == -1));
        for r in 1..6 {
            let c = fibrate_li_family(r);
            assert_eq!(c.len(), 3 * (1 << (r - 1)));
            for (w, _) in c.iter() {
                assert_eq!(w.weight(), r as usize);
                let ls = w.letters();
                assert!(ls[..ls.len() - 1].iter().all(|l| l.is_zero() || l.is_one()));
                let last = &ls[ls.len() - 1];
                assert!([Letter::int(2), Letter::i(), Letter::minus_i()].contains(last));
            }
        }
        assert_eq!(fibrate_li_family(2).len(), 6);
    }

    #[test]
    fn level_examples() {
        let w = Word::new(vec![Letter::i(), Letter::Zero, Letter::int(-1)]);
        assert!(level_membership(&w, 4));
        assert!(!level_membership(&Word::from_ints(&[2]), 4));
        assert!(!level_membership(
            &Word::new(vec![Letter::one(), Letter::Zero, Letter::i()]),
            4
        ));
        assert!(!level_membership(&Word::from_ints(&[-1, 0]), 2));
    }
}
