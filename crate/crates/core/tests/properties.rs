//! Property tests over the library's invariants.

use cmzv_core::catalog::{bundled_catalog, verify, Status};
use cmzv_core::closed_form::eval_closed_form;
use cmzv_core::constants::{compute_constant, registry, resolve_bits};
use cmzv_core::gpl::{
    fibrate_li_family, gpl_eval_prec, gpl_to_mpl, hoelder_reflect, mpl_to_gpl, shuffle, Letter,
    Word,
};
use cmzv_core::polylog::{li_jump, li_prec};
use cmzv_core::relation::{pslq, RelationProblem};
use cmzv_core::series::{
    eval_series, eval_series_detailed, eval_series_terms, Argument, Factor, SeriesKind, SeriesSpec,
    WeightTerm,
};
use cmzv_core::util::Q;
use cmzv_core::{Complex, PrecisionContext};
use proptest::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

fn tiny(digits: i32, prec: u32) -> Float {
    Float::with_val(prec, 10).pow(-digits)
}

fn close(a: &Complex, b: &Complex, digits: i32) -> bool {
    (a - b).abs() < tiny(digits, a.prec())
}

fn word(ix: &[usize], alphabet: &[Letter]) -> Word {
    Word::new(
        ix.iter()
            .map(|&i| alphabet[i % alphabet.len()].clone())
            .collect(),
    )
}

fn roots(n: u32) -> Vec<Letter> {
    (0..n as i64).map(|k| Letter::root_of_unity(k, n)).collect()
}

fn level4() -> Vec<Letter> {
    vec![
        Letter::Zero,
        Letter::one(),
        Letter::int(-1),
        Letter::i(),
        Letter::minus_i(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shuffle_is_a_homomorphism(
        u in prop::collection::vec(0usize..20, 1..3),
        v in prop::collection::vec(0usize..20, 1..3),
        level in prop::sample::select(vec![8u32, 12]),
        re in -5i32..=5,
        im in -5i32..=5,
    ) {
        let prec = 120;
        let alphabet = roots(level);
        let (u, v) = (word(&u, &alphabet), word(&v, &alphabet));
        let z = Complex::from_rational(&Rational::from((re, 10)), prec)
            + &Complex::i(prec).scale(&Float::with_val(prec, Rational::from((im, 10))));
        prop_assume!(!z.is_zero());
        let lhs = &gpl_eval_prec(&u, &z, prec).unwrap() * &gpl_eval_prec(&v, &z, prec).unwrap();
        let s = shuffle(&u, &v);
        let total: Integer = Integer::binomial_u((u.weight() + v.weight()) as u32, u.weight() as u32).into();
        prop_assert_eq!(s.total_multiplicity(), Rational::from(total));
        let mut rhs = Complex::zero(prec);
        for (w, c) in s.iter() {
            rhs += &gpl_eval_prec(w, &z, prec).unwrap().scale(&Float::with_val(prec, c));
        }
        prop_assert!(close(&lhs, &rhs, 30));
    }

    #[test]
    fn word_mpl_round_trip(
        ix in prop::collection::vec(0usize..40, 1..7),
        last in 1usize..40,
    ) {
        let mut alphabet = roots(12);
        alphabet.extend([Letter::int(2), Letter::int(-3), Letter::rational(Rational::from((1, 2)))]);
        alphabet.push(Letter::Zero);
        let mut w = word(&ix, &alphabet).letters().to_vec();
        w.push(alphabet[last % (alphabet.len() - 1)].clone());
        let w = Word::new(w);
        let m = gpl_to_mpl(&w).unwrap();
        prop_assert_eq!(m.weight() as usize, w.weight());
        prop_assert_eq!(mpl_to_gpl(&m).unwrap(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn zero_insertion_sum_vanishes(betas in prop::collection::vec(0usize..5, 1..4)) {
        let prec = 110;
        let alphabet = level4();
        let mut b = word(&betas, &alphabet).letters().to_vec();
        if b[0].is_one() {
            b[0] = Letter::int(-1);
        }
        let last = b.len() - 1;
        if b[last].is_zero() {
            b[last] = Letter::i();
        }
        let one = Complex::one(prec);
        let mut sum = Complex::zero(prec);
        for pos in 0..=b.len() {
            let mut w = b.clone();
            w.insert(pos, Letter::Zero);
            sum += &gpl_eval_prec(&Word::new(w), &one, prec).unwrap();
        }
        prop_assert!(sum.abs() < tiny(25, prec), "{:?}", b);
    }

    #[test]
    fn dilog_inversion_on_circle(num in 1i64..200) {
        let prec = 200;
        let nu = Rational::from((num, 100));
        prop_assume!(nu != 1);
        let z = Complex::unit_root(&nu, prec);
        let zi = z.conj();
        let lhs = &li_prec(2, &z, prec).unwrap() + &li_prec(2, &zi, prec).unwrap();
        let pi2 = Float::with_val(prec, Constant::Pi).square() / 6u32;
        let l = (-z.clone()).ln();
        let rhs = -(Complex::from_real(pi2) + &(&l * &l).scale(&Float::with_val(prec, 0.5)));
        prop_assert!(close(&lhs, &rhs, 50));
    }

    #[test]
    fn derivative_law(k in 1u32..5, re in -8i32..=8, im in -8i32..=8) {
        let prec = 260;
        let z = Complex::from_rational(&Rational::from((re, 10)), prec)
            + &Complex::i(prec).scale(&Float::with_val(prec, Rational::from((im, 10))));
        prop_assume!(!z.is_zero() && z.abs() < 0.9);
        let want = &li_prec(k, &z, prec).unwrap() / &z;
        let mut last = f64::INFINITY;
        for e in [10, 15, 20] {
            let h = tiny(e, prec);
            let zh = z.scale(&(Float::with_val(prec, 1) + &h));
            let dq = &(&li_prec(k + 1, &zh, prec).unwrap() - &li_prec(k + 1, &z, prec).unwrap()) / &z.scale(&h);
            let err = (&dq - &want).abs().to_f64();
            prop_assert!(err < 1e3 * 10f64.powi(-e));
            prop_assert!(err < last);
            last = err;
        }
    }

    #[test]
    fn tail_bound_sound(
        num in -9i64..=9,
        s in 0i32..3,
        r in 1u32..4,
        kind in prop::sample::select(vec![SeriesKind::Central, SeriesKind::Forward3k, SeriesKind::Forward4k]),
    ) {
        prop_assume!(num != 0);
        let lim = match kind { SeriesKind::Central => 40, SeriesKind::Forward3k => 68, _ => 160 };
        let ctx = PrecisionContext::with_target(40);
        let spec = SeriesSpec::new(kind, s, Some(Argument::Rational(Q::new(num, lim * 10 / 9 + 1))))
            .with_weight(vec![WeightTerm::new(Q::int(1), vec![Factor::h(1, 0, r)])]);
        let d = eval_series_detailed(&spec, &ctx).unwrap();
        let more = eval_series_terms(&spec, d.terms + d.terms / 4 + 1, &ctx).unwrap();
        prop_assert!(close(&d.value, &more, 40));
    }

    #[test]
    fn closed_forms_stable_under_refinement(i in 0usize..47) {
        let cat = bundled_catalog();
        let rec = &cat.records[i % cat.records.len()];
        prop_assume!(rec.closed_form.is_some());
        let cf = rec.closed_form.as_ref().unwrap();
        let a = eval_closed_form(cf, &PrecisionContext::with_target(50)).unwrap();
        let b = eval_closed_form(cf, &PrecisionContext::with_target(100)).unwrap();
        prop_assert!(close(&a.with_prec(b.prec()), &b, 50));
    }

    #[test]
    fn coefficient_nudge_fails(i in 0usize..47, j in 0usize..20) {
        let cat = bundled_catalog();
        let rec = &cat.records[i % cat.records.len()];
        prop_assume!(rec.mutation_count() > 0);
        let j = j % rec.mutation_count();
        let m = rec.mutated(j, |q| Q(&q.0 + Rational::from((1, 1_000_000)))).unwrap();
        prop_assert_eq!(verify(&m, &PrecisionContext::with_target(50)).status, Status::Fail);
    }

    #[test]
    fn pslq_vectors_are_primitive(a in 1i64..50, b in -50i64..50, c in -50i64..50) {
        prop_assume!(b != 0 || c != 0);
        let prec = 300;
        let pi = Float::with_val(prec, Constant::Pi);
        let l = Float::with_val(prec, Constant::Log2);
        let t = (Float::with_val(prec, &pi * b) + Float::with_val(prec, &l * c)) / a;
        prop_assume!(!t.is_zero());
        let p = RelationProblem {
            target: t,
            basis: vec![("pi".into(), pi), ("lambda".into(), l)],
            max_coeff_digits: 3,
            precision_digits: 60,
        };
        let r = pslq(&p).unwrap().expect("planted relation");
        let g = r.coeffs.iter().fold(Integer::new(), |g, c| g.gcd(c));
        prop_assert_eq!(g, 1);
        // proportional to (a, −b, −c)
        let scale = Rational::from((r.coeffs[0].clone(), Integer::from(a)));
        prop_assert_eq!(Rational::from(&r.coeffs[1]), Rational::from(-b) * &scale);
        prop_assert_eq!(Rational::from(&r.coeffs[2]), Rational::from(-c) * &scale);
    }
}

#[test]
fn constants_cache_consistent() {
    let prec = 200;
    for sym in registry().symbols() {
        let a = resolve_bits(sym, prec).unwrap();
        let b = resolve_bits(sym, prec).unwrap();
        let c = compute_constant(sym, prec).unwrap();
        assert_eq!(a, b, "{sym}");
        assert!(close(&a, &c, 55), "{sym}");
    }
}

#[test]
fn surd_values_satisfy_definitions() {
    let prec = 200;
    let v = |s: &str| resolve_bits(s, prec).unwrap().re;
    let sq = |x: Float| x.square();
    let check = |x: Float, want: Float, name: &str| {
        assert!(
            Float::with_val(prec, &x - &want).abs() < tiny(55, prec),
            "{name}"
        );
    };
    for (s, n) in [("sqrt2", 2), ("sqrt3", 3), ("sqrt5", 5), ("sqrt6", 6)] {
        check(sq(v(s)), Float::with_val(prec, n), s);
    }
    check(
        sq(v("sqrt2_minus_1") + 1u32),
        Float::with_val(prec, 2),
        "sqrt2_minus_1",
    );
    check(
        sq(Float::with_val(prec, 2) - v("2_minus_sqrt3")),
        Float::with_val(prec, 3),
        "2_minus_sqrt3",
    );
    let phi = v("golden_ratio");
    check(sq(phi.clone()), phi + 1u32, "golden_ratio");
    let inv = Float::with_val(prec, 2).sqrt().recip();
    check(
        sq(v("sqrt_1_plus_inv_sqrt2")),
        Float::with_val(prec, &inv + 1u32),
        "sqrt_1_plus_inv_sqrt2",
    );
    check(
        sq(v("sqrt_1_minus_inv_sqrt2")),
        Float::with_val(prec, 1u32 - &inv),
        "sqrt_1_minus_inv_sqrt2",
    );
}

#[test]
fn fibration_matches_polylog() {
    let prec = 180;
    for r in 1..=4 {
        let comb = fibrate_li_family(r);
        for (n, d) in [(1, 5), (1, 3), (1, 2), (4, 5)] {
            let t = Rational::from((n, d));
            let tz = Complex::from_rational(&t, prec);
            let mut sum = Complex::zero(prec);
            for (w, c) in comb.iter() {
                sum += &gpl_eval_prec(w, &tz, prec)
                    .unwrap()
                    .scale(&Float::with_val(prec, c));
            }
            let one_minus: Rational = 1 - t.clone();
            let arg = Rational::from(&t * &one_minus.clone().square()) / 2u32;
            let want = li_prec(r, &Complex::from_rational(&arg, prec), prec).unwrap();
            assert!(close(&sum, &want, 40), "r={r} t={t}");
        }
    }
}

#[test]
fn hoelder_reflection_numeric() {
    let prec = 150;
    let one = Complex::one(prec);
    for r in 1..=3usize {
        for mask in 0..(1u32 << (r - 1)) {
            let mut letters = vec![Letter::Zero];
            letters.extend((0..r - 1).map(|j| {
                if mask >> j & 1 == 1 {
                    Letter::one()
                } else {
                    Letter::Zero
                }
            }));
            letters.push(Letter::int(2));
            let w = Word::new(letters);
            let (rw, sign) = hoelder_reflect(&w).unwrap();
            let lhs = gpl_eval_prec(&w, &one, prec).unwrap();
            let rhs = gpl_eval_prec(&rw, &one, prec)
                .unwrap()
                .scale(&Float::with_val(prec, sign));
            assert!(close(&lhs, &rhs, 35), "{w}");
        }
    }
}

#[test]
fn jump_law_finite_epsilon() {
    let prec = 400;
    let ctx = PrecisionContext::with_target(100);
    for k in 1..=3u32 {
        for x in [
            Rational::from((3, 2)),
            Rational::from(3),
            Rational::from((11, 10)),
        ] {
            let xf = Float::with_val(prec, &x);
            let jump = li_jump(k, &xf, &ctx).unwrap();
            let mut last = f64::INFINITY;
            for e in [10, 20, 30] {
                let eps = tiny(e, prec);
                let up = Complex::new(xf.clone(), eps.clone());
                let dn = Complex::new(xf.clone(), -eps);
                let d = &li_prec(k, &up, prec).unwrap() - &li_prec(k, &dn, prec).unwrap();
                let err = (&d - &jump.with_prec(prec)).abs().to_f64();
                assert!(err < 10f64.powi(2 - e), "k={k} x={x} eps=1e-{e}: {err}");
                assert!(err < last);
                last = err;
            }
        }
        if k >= 2 {
            let mut last = f64::INFINITY;
            for e in [2, 4, 8] {
                let x = Float::with_val(prec, 1) + tiny(e, prec);
                let m = li_jump(k, &x, &ctx).unwrap().abs().to_f64();
                assert!(m < last);
                last = m;
            }
            assert!(last < 1e-7);
        }
    }
}

#[test]
fn three_way_closure() {
    let cat = bundled_catalog();
    let ctx = PrecisionContext::with_target(50);
    for rec in cat
        .records
        .iter()
        .filter(|r| r.sides().len() == 3 && r.angle_grid.is_none())
    {
        let rep = verify(rec, &ctx);
        assert_eq!(rep.checks.len(), 3, "{}", rec.id);
        assert!(
            rep.checks.iter().all(|c| c.digits >= 45.0),
            "{}: {:?}",
            rec.id,
            rep.checks
        );
    }
}

#[test]
fn series_and_integrals_agree_at_45_digits() {
    let cat = bundled_catalog();
    let ctx = PrecisionContext::with_target(45);
    let mut seen = 0;
    for rec in cat
        .records
        .iter()
        .filter(|r| r.integral.is_some() && r.angle_grid.is_none())
    {
        let s = eval_series(&rec.series, &ctx).unwrap();
        let i = cmzv_core::contour::eval_integral(rec.integral.as_ref().unwrap(), &ctx).unwrap();
        assert!(close(&s, &i, 30), "{}", rec.id);
        seen += 1;
    }
    assert!(seen >= 15);
}
