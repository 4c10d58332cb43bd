//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use cmzv_core::catalog::{
    bundled_catalog, verify, verify_with, Catalog, Side, Status, VerifyOptions,
};
use cmzv_core::complex::Complex;
use cmzv_core::gpl::{
    fibrate_li_family, gpl_eval_prec, gpl_to_mpl, hoelder_reflect, mpl_to_gpl, shuffle, Letter,
    Word,
};
use cmzv_core::polylog::{li_jump, li_prec};
use cmzv_core::relation::{
    canonical_terms, hunt_reduction, hunt_value, preset, pslq, RelationProblem,
};
use cmzv_core::series::{
    eval_generating_function_check, eval_series, symmetry_4k2k, GfVariant, Symmetry4k,
};
use cmzv_core::util::Q;
use cmzv_core::{Error, PrecisionContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn ctx50() -> PrecisionContext {
    PrecisionContext::with_target(50)
}

/// Minimum agreement of the `a`–`b` pair over `ids`, or an error line.
fn pair_min(
    cat: &Catalog,
    ids: &[&str],
    a: Side,
    b: Side,
    ctx: &PrecisionContext,
) -> Result<f64, String> {
    let mut min = f64::INFINITY;
    for id in ids {
        let rec = cat.get(id).ok_or_else(|| format!("missing record {id}"))?;
        let rep = verify(rec, ctx);
        if let Some(e) = rep.error {
            return Err(format!("{id}: {e}"));
        }
        let d = rep
            .checks
            .iter()
            .filter(|c| c.a == a && c.b == b)
            .map(|c| c.digits)
            .reduce(f64::min)
            .ok_or_else(|| format!("{id} has no {a}/{b} pair"))?;
        min = min.min(d);
    }
    Ok(min)
}

fn digits_gate(r: Result<f64, String>, need: f64, count: usize) -> Outcome {
    match r {
        Ok(d) => outcome(
            d >= need,
            format!("{count} identities, min {d:.1} digits (need {need})"),
        ),
        Err(e) => outcome(false, e),
    }
}

const CENTRAL: [&str; 8] = [
    "sun-2k8-Hk2",
    "sun-2k8-Hk3",
    "sun-2k8-H2k2",
    "sun-2k8-H2k3",
    "sun-2k16-Hk2",
    "sun-2k16-Hk3",
    "sun-2k16-H2k2",
    "sun-2k16-H2k3",
];

fn c1(cat: &Catalog) -> Outcome {
    let t = Instant::now();
    let r = pair_min(cat, &CENTRAL, Side::Series, Side::Closed, &ctx50());
    let secs = t.elapsed().as_secs_f64();
    let mut o = digits_gate(r, 45.0, 8);
    o.ok &= secs < 300.0;
    o.detail.push_str(&format!(", {secs:.1}s"));
    o
}

fn c2(cat: &Catalog) -> Outcome {
    digits_gate(
        pair_min(cat, &CENTRAL, Side::Series, Side::Integral, &ctx50()),
        30.0,
        8,
    )
}

fn c3(cat: &Catalog) -> Outcome {
    let ids = [
        "sun-3k-s2",
        "sun-3k-s3",
        "sun-3k-s4",
        "sun-3k-s1-H3k-Hk",
        "sun-3k-s2-H3k-Hk",
        "sun-3k-s3-H3k-Hk",
        "sun-3k-s1-H2k-Hk",
        "sun-3k-s2-H2k-Hk",
        "sun-3k-s3-H2k-Hk",
        "sun-3k-s1",
        "sun-3k-s1-w1",
        "sun-3k-s1-w2",
    ];
    digits_gate(
        pair_min(cat, &ids, Side::Series, Side::Closed, &ctx50()),
        45.0,
        ids.len(),
    )
}

fn c4(cat: &Catalog) -> Outcome {
    let closed = [
        "sun-3k27-Hk",
        "sun-3k27-Hk2",
        "sun-3k27-H2k",
        "sun-3k27-hbar",
        "sun-3k27-hbar-Hk",
    ];
    let a = digits_gate(
        pair_min(cat, &closed, Side::Series, Side::Closed, &ctx50()),
        45.0,
        closed.len(),
    );
    let ints = [
        "sun-3k27-Hk",
        "sun-3k27-Hk2",
        "sun-3k27-H2k",
        "sun-3k27-H2k2",
    ];
    let b = digits_gate(
        pair_min(cat, &ints, Side::Series, Side::Integral, &ctx50()),
        30.0,
        ints.len(),
    );
    outcome(
        a.ok && b.ok,
        format!("closed: {}; integrals: {}", a.detail, b.detail),
    )
}

fn c5(cat: &Catalog) -> Outcome {
    let ctx = ctx50();
    let mut min = f64::INFINITY;
    let mut angles = 0;
    for id in [
        "param-3k-Hk",
        "param-3k-hbar",
        "param-3k-H2k",
        "param-4k-Hk",
    ] {
        let rep = verify_with(
            cat.get(id).unwrap(),
            &ctx,
            &VerifyOptions { angles: Some(9) },
        );
        if let Some(e) = rep.error {
            return outcome(false, format!("{id}: {e}"));
        }
        angles += rep
            .checks
            .iter()
            .filter(|c| c.a == Side::Series && c.b == Side::Closed)
            .count();
        min = min.min(rep.min_digits.unwrap_or(0.0));
    }
    let specials = ["sun-3k-golden", "sun-4k32-Hk", "sun-4k64-Hk"];
    let s = pair_min(cat, &specials, Side::Series, Side::Closed, &ctx);
    let s_ok = matches!(s, Ok(d) if d >= 45.0);
    outcome(
        min >= 30.0 && angles == 36 && s_ok,
        format!("4 families x 9 angles, min {min:.1} digits; specializations {s:.1?}"),
    )
}

fn c6(cat: &Catalog) -> Outcome {
    let ids = [
        "level5-odd3",
        "level5-odd-H",
        "charlton-14zeta3",
        "sun-3k-25k-3",
    ];
    digits_gate(
        pair_min(cat, &ids, Side::Series, Side::Closed, &ctx50()),
        45.0,
        ids.len(),
    )
}

fn c7(cat: &Catalog) -> Outcome {
    let ids = ["zr18-Hk", "zr9-Hk", "zr18-Hk2", "zr9-Hk2"];
    digits_gate(
        pair_min(cat, &ids, Side::Series, Side::Closed, &ctx50()),
        40.0,
        ids.len(),
    )
}

fn tiny(digits: i32, prec: u32) -> Float {
    Float::with_val(prec, 10).pow(-digits)
}

fn close(a: &Complex, b: &Complex, digits: i32) -> bool {
    (a - b).abs() < tiny(digits, a.prec().min(b.prec()))
}

fn cz(re: (i64, i64), im: (i64, i64), prec: u32) -> Complex {
    Complex::from_rational(&Rational::from(re), prec)
        + &Complex::i(prec).scale(&Float::with_val(prec, Rational::from(im)))
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut fails: Vec<String> = Vec::new();
    let mut note = |ok: bool, what: &str| {
        if !ok {
            fails.push(what.to_string());
        }
    };

    // shuffle homomorphism, 200 pairs over the level-8 and level-12 alphabets
    let prec = 120;
    for n in 0..200 {
        let level = if n % 2 == 0 { 8 } else { 12 };
        let mut w = |len: usize| {
            Word::new(
                (0..len)
                    .map(|_| Letter::root_of_unity(rng.gen_range(0..level as i64), level))
                    .collect(),
            )
        };
        let (u, v) = (w(1 + n % 2), w(1 + (n / 2) % 2));
        let z = cz(
            (rng.gen_range(-5..=5), 10),
            (rng.gen_range(1..=5), 10),
            prec,
        );
        let lhs = &gpl_eval_prec(&u, &z, prec).unwrap() * &gpl_eval_prec(&v, &z, prec).unwrap();
        let mut rhs = Complex::zero(prec);
        for (word, c) in shuffle(&u, &v).iter() {
            rhs += &gpl_eval_prec(word, &z, prec)
                .unwrap()
                .scale(&Float::with_val(prec, c));
        }
        note(close(&lhs, &rhs, 30), "shuffle");
    }

    // zero-insertion nullity at z = 1, 50 words
    let level4 = [
        Letter::Zero,
        Letter::one(),
        Letter::int(-1),
        Letter::i(),
        Letter::minus_i(),
    ];
    let one = Complex::one(110);
    for _ in 0..50 {
        let r = rng.gen_range(1..=3);
        let mut b: Vec<Letter> = (0..r)
            .map(|_| level4[rng.gen_range(0..5)].clone())
            .collect();
        if b[0].is_one() {
            b[0] = Letter::int(-1);
        }
        if b[r - 1].is_zero() {
            b[r - 1] = Letter::minus_i();
        }
        let mut sum = Complex::zero(110);
        for pos in 0..=r {
            let mut w = b.clone();
            w.insert(pos, Letter::Zero);
            sum += &gpl_eval_prec(&Word::new(w), &one, 110).unwrap();
        }
        note(sum.abs() < tiny(25, 110), "zero insertion");
    }

    // GPL/MPL round trip, 500 words
    let mut alphabet: Vec<Letter> = (0..12).map(|k| Letter::root_of_unity(k, 12)).collect();
    alphabet.extend([Letter::int(2), Letter::int(-3)]);
    for _ in 0..500 {
        let len = rng.gen_range(1..=6);
        let mut ls: Vec<Letter> = (0..len - 1)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    Letter::Zero
                } else {
                    alphabet[rng.gen_range(0..alphabet.len())].clone()
                }
            })
            .collect();
        ls.push(alphabet[rng.gen_range(0..alphabet.len())].clone());
        let w = Word::new(ls);
        note(
            gpl_to_mpl(&w).and_then(|m| mpl_to_gpl(&m)).as_ref() == Ok(&w),
            "mpl round trip",
        );
    }

    // fibration family against Li_r(t(1−t)²/2)
    let prec = 180;
    for r in 1..=4 {
        let comb = fibrate_li_family(r);
        for t in [(1, 5), (1, 3), (1, 2), (4, 5)] {
            let t = Rational::from(t);
            let tz = Complex::from_rational(&t, prec);
            let mut sum = Complex::zero(prec);
            for (w, c) in comb.iter() {
                sum += &gpl_eval_prec(w, &tz, prec)
                    .unwrap()
                    .scale(&Float::with_val(prec, c));
            }
            let arg = (&t * Rational::from(1 - &t).square()) / 2u32;
            let want = li_prec(r, &Complex::from_rational(&arg, prec), prec).unwrap();
            note(close(&sum, &want, 40), "fibration");
        }
    }

    // Hölder reflection, r ≤ 3
    let one = Complex::one(150);
    for r in 1..=3usize {
        for mask in 0..(1u32 << (r - 1)) {
            let mut ls = vec![Letter::Zero];
            ls.extend((0..r - 1).map(|j| {
                if mask >> j & 1 == 1 {
                    Letter::one()
                } else {
                    Letter::Zero
                }
            }));
            ls.push(Letter::int(2));
            let w = Word::new(ls);
            let (rw, sign) = hoelder_reflect(&w).unwrap();
            let lhs = gpl_eval_prec(&w, &one, 150).unwrap();
            let rhs = gpl_eval_prec(&rw, &one, 150)
                .unwrap()
                .scale(&Float::with_val(150, sign));
            note(close(&lhs, &rhs, 35), "hoelder");
        }
    }

    // jump law: Li_k(x+iε) − Li_k(x−iε) approaches the jump as ε shrinks
    let prec = 400;
    let jctx = PrecisionContext::with_target(100);
    for k in 1..=3u32 {
        let x = Float::with_val(prec, 2.5);
        let jump = li_jump(k, &x, &jctx).unwrap().with_prec(prec);
        let mut last = f64::INFINITY;
        for e in [10, 20, 30] {
            let eps = tiny(e, prec);
            let d = &li_prec(k, &Complex::new(x.clone(), eps.clone()), prec).unwrap()
                - &li_prec(k, &Complex::new(x.clone(), -eps), prec).unwrap();
            let err = (&d - &jump).abs().to_f64();
            note(err < last && err < 10f64.powi(2 - e), "jump");
            last = err;
        }
    }

    // generating functions at 5 arguments, both variants
    let gctx = PrecisionContext::with_target(50);
    for w in [
        cz((1, 2), (0, 1), 200),
        cz((-1, 3), (0, 1), 200),
        cz((1, 5), (1, 4), 200),
        cz((0, 1), (3, 5), 200),
        cz((-7, 10), (-1, 10), 200),
    ] {
        for variant in [GfVariant::Plain, GfVariant::Even] {
            for r in 1..=3 {
                let (s, c) = eval_generating_function_check(&w, r, variant, &gctx).unwrap();
                note(close(&s, &c, 45), "generating function");
            }
        }
    }

    // C(4k,2k) against C(2k,k) symmetry, 2 arguments × 3 orders
    for z in [Q::new(1, 8), Q::new(1, 10)] {
        for r in 1..=3 {
            for which in [Symmetry4k::Half, Symmetry4k::Full] {
                let (a, b) = symmetry_4k2k(&z, r, which, &gctx).unwrap();
                note(close(&a, &b, 45), "4k/2k symmetry");
            }
        }
    }

    let detail = if fails.is_empty() {
        "0 failures across 200 shuffles, 50 nullity words, 500 round trips, 16 fibrations, 7 reflections, 9 jumps, 30 gf, 12 symmetry".to_string()
    } else {
        format!("{} failures: {:?}", fails.len(), fails)
    };
    outcome(fails.is_empty(), detail)
}

fn c9(cat: &Catalog) -> Outcome {
    let ctx = ctx50();
    let jobs = [
        ("sun-3k-s1", "level4-w1"),
        ("sun-3k-s2", "level2-w2"),
        ("sun-3k-s1-w1", "level4-w2"),
        ("sun-3k-s1-w2", "level4-w2"),
        ("sun-3k-s1-H3k-Hk", "level4-w2"),
        ("sun-3k-s1-H2k-Hk", "level4-w2"),
        ("sun-3k-s3", "level4-w3"),
        ("sun-3k-s2-H3k-Hk", "level4-w3"),
        ("sun-3k-s2-H2k-Hk", "level4-w3"),
        ("sun-3k-s4", "level4-w4"),
        ("sun-3k-s3-H3k-Hk", "level4-w4"),
        ("sun-3k-s3-H2k-Hk", "level4-w4"),
        ("sun-3k-25k-3", "level4-mixed"),
        ("level5-odd3", "level5-w3"),
        ("level5-odd-H", "level5-w3"),
        ("charlton-14zeta3", "level5-w3"),
        ("sun-2k8-Hk2", "level8-w2"),
        ("sun-2k8-H2k2", "level8-w2"),
        ("sun-2k16-Hk2", "level12-w2"),
        ("sun-2k16-H2k2", "level12-w2"),
        ("sun-3k27-Hk", "level12-w1"),
        ("sun-3k27-H2k", "level12-w1"),
        ("sun-3k27-hbar", "level12-w1"),
        ("zr18-Hk", "level9-w1"),
        ("zr9-Hk", "level9-w1"),
    ];
    let mut hits = 0;
    let mut misses = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for (id, p) in jobs {
        let rec = cat.get(id).unwrap();
        match hunt_reduction(&rec.series, &preset(p).unwrap().basis(), &ctx) {
            Ok(out)
                if canonical_terms(&out.closed_form)
                    == canonical_terms(rec.closed_form.as_ref().unwrap())
                    && out.confirm_residual_log10 < -70.0 =>
            {
                hits += 1;
                worst = worst.max(out.confirm_residual_log10);
            }
            Ok(_) => misses.push(format!("{id}: different vector")),
            Err(e) => misses.push(format!("{id}: {e}")),
        }
    }

    let s2 = hunt_reduction(
        &cat.get("sun-3k-s2").unwrap().series,
        &preset("level2-w2").unwrap().basis(),
        &ctx,
    );
    let vec_ok = s2.is_ok_and(|o| {
        o.relation.coeffs == [Integer::from(24), Integer::from(-1), Integer::from(12)]
    });

    // the (2, 3, 1, 2) vector over {λ, √3λ, √3Λ̃}
    let bits = 300;
    let hbar = eval_series(
        &cat.get("sun-3k27-hbar").unwrap().series,
        &PrecisionContext::with_target(70),
    )
    .unwrap();
    let l2 = Float::with_val(bits, rug::float::Constant::Log2);
    let r3 = Float::with_val(bits, 3).sqrt();
    let lt = (Float::with_val(bits, 2) + &r3).ln();
    let problem = RelationProblem {
        target: hbar.re,
        basis: vec![
            ("lambda".into(), l2.clone()),
            ("sqrt3·lambda".into(), Float::with_val(bits, &r3 * &l2)),
            ("sqrt3·Lambda_t".into(), Float::with_val(bits, &r3 * &lt)),
        ],
        max_coeff_digits: 3,
        precision_digits: 60,
    };
    let hbar_ok = pslq(&problem)
        .ok()
        .flatten()
        .is_some_and(|r| r.coeffs == [2, 3, 1, 2].map(Integer::from));

    let spec = cat.get("sun-3k-s3").unwrap().series.clone();
    let nudged = |c: &PrecisionContext| Ok(eval_series(&spec, c)?.re + tiny(15, c.bits()));
    let perturbed = matches!(
        hunt_value(nudged, &preset("level4-w3").unwrap().basis(), &ctx),
        Err(Error::NoRelationFound(_))
    );

    outcome(
        hits >= 10 && misses.is_empty() && vec_ok && hbar_ok && perturbed,
        format!(
            "{hits}/{} rediscovered (worst confirmation 10^{worst:.0}); (24,-1,12) {vec_ok}; (2,3,1,2) {hbar_ok}; perturbed rejected {perturbed}{}",
            jobs.len(),
            if misses.is_empty() { String::new() } else { format!("; misses {misses:?}") }
        ),
    )
}

fn c10(cat: &Catalog) -> Outcome {
    let ctx = ctx50();
    let mut flips = 0;
    let mut survivors = Vec::new();
    for rec in &cat.records {
        for j in 0..rec.mutation_count() {
            let m = rec.mutated(j, |q| Q(Rational::from(-&q.0))).unwrap();
            flips += 1;
            if verify(&m, &ctx).status != Status::Fail {
                survivors.push(format!("{}#{j}", rec.id));
            }
        }
    }
    outcome(
        survivors.is_empty() && flips > 0,
        format!(
            "{flips} sign flips, {} survived {:?}",
            survivors.len(),
            survivors
        ),
    )
}

fn main() -> ExitCode {
    let cat = bundled_catalog();
    let criteria: [(&str, &dyn Fn() -> Outcome); 10] = [
        ("1 central binomial closed forms", &|| c1(&cat)),
        ("2 central binomial integrals", &|| c2(&cat)),
        ("3 inverse C(3k,k) family", &|| c3(&cat)),
        ("4 forward C(3k,k) at 2/27", &|| c4(&cat)),
        ("5 parametric grids and specializations", &|| c5(&cat)),
        ("6 level-5 and weighted exemplars", &|| c6(&cat)),
        ("7 level-9/18 block", &|| c7(&cat)),
        ("8 property suites", &c8),
        ("9 relation hunter", &|| c9(&cat)),
        ("10 mutation soundness", &|| c10(&cat)),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let t = Instant::now();
        let o = run();
        all &= o.ok;
        println!(
            "{} criterion {name}: {} [{:.1}s]",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
