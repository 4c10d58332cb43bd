use std::io::Write;

use clap::ValueEnum;
use cmzv_core::contour::{eval_integral, IntegralSpec};
use cmzv_core::gpl::{gpl_eval_exact, Letter, Word};
use cmzv_core::polylog::{PolylogQuery, Side};
use cmzv_core::series::{eval_series_detailed, SeriesSpec};
use cmzv_core::util::Q;
use cmzv_core::{Complex, PrecisionContext};
use serde::Deserialize;
use serde_json::{json, Value};

use super::csv_table;
use crate::cache::{Cache, Entry};
use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::input::{parse, spec_text};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Series,
    Gpl,
    Li,
    Integral,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Series => "series",
            Kind::Gpl => "gpl",
            Kind::Li => "li",
            Kind::Integral => "integral",
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiSpec {
    k: u32,
    z: Value,
    #[serde(default)]
    side: Side,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CartesianZ {
    re: Q,
    #[serde(default)]
    im: Q,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GplSpec {
    letters: Word,
    z: Value,
}

enum Parsed {
    Series(SeriesSpec),
    Integral(IntegralSpec),
    Li { k: u32, z: ZArg, side: Side },
    Gpl { word: Word, z: Letter },
}

enum ZArg {
    Letter(Letter),
    Cartesian(CartesianZ),
}

impl ZArg {
    fn read(v: &Value) -> CliResult<ZArg> {
        if v.get("re").is_some() {
            return Ok(ZArg::Cartesian(serde_json::from_value(v.clone())?));
        }
        Ok(ZArg::Letter(Letter::from_descriptor(v)?))
    }

    fn descriptor(&self) -> Value {
        match self {
            ZArg::Letter(l) => l.to_descriptor(),
            ZArg::Cartesian(c) => json!({"re": c.re, "im": c.im}),
        }
    }

    fn value(&self, prec: u32) -> Complex {
        match self {
            ZArg::Letter(l) => l.value(prec),
            ZArg::Cartesian(c) => Complex::new(
                rug::Float::with_val(prec, &c.re.0),
                rug::Float::with_val(prec, &c.im.0),
            ),
        }
    }
}

impl Parsed {
    fn read(kind: Kind, text: &str) -> CliResult<Parsed> {
        Ok(match kind {
            Kind::Series => {
                let s: SeriesSpec = parse(text)?;
                s.validate()?;
                Parsed::Series(s)
            }
            Kind::Integral => {
                let s: IntegralSpec = parse(text)?;
                s.validate()?;
                Parsed::Integral(s)
            }
            Kind::Li => {
                let s: LiSpec = parse(text)?;
                let z = ZArg::read(&s.z)?;
                PolylogQuery::new(s.k, z.value(128), s.side)?;
                Parsed::Li {
                    k: s.k,
                    z,
                    side: s.side,
                }
            }
            Kind::Gpl => {
                let s: GplSpec = parse(text)?;
                Parsed::Gpl {
                    word: s.letters,
                    z: Letter::from_descriptor(&s.z)?,
                }
            }
        })
    }

    /// Normalized spec used as the cache key material.
    fn canonical(&self) -> CliResult<Value> {
        Ok(match self {
            Parsed::Series(s) => serde_json::to_value(s)?,
            Parsed::Integral(s) => serde_json::to_value(s)?,
            Parsed::Li { k, z, side } => json!({"k": k, "z": z.descriptor(), "side": side}),
            Parsed::Gpl { word, z } => json!({"letters": word, "z": z.to_descriptor()}),
        })
    }

    fn eval(&self, ctx: &PrecisionContext) -> CliResult<(Complex, Value)> {
        Ok(match self {
            Parsed::Series(s) => {
                let e = eval_series_detailed(s, ctx)?;
                (e.value, json!({"terms": e.terms, "tail_log2": e.tail_log2}))
            }
            Parsed::Integral(s) => (eval_integral(s, ctx)?, Value::Null),
            Parsed::Li { k, z, side } => {
                let q = PolylogQuery::new(*k, z.value(ctx.bits() + 64), *side)?;
                (q.eval(ctx)?, Value::Null)
            }
            Parsed::Gpl { word, z } => (gpl_eval_exact(word, z, ctx)?, Value::Null),
        })
    }
}

pub struct EvalArgs<'a> {
    pub kind: Kind,
    pub spec: &'a str,
    pub use_cache: bool,
}

pub fn run(args: EvalArgs<'_>, cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let parsed = Parsed::read(args.kind, &spec_text(args.spec)?)?;
    let spec = parsed.canonical()?;
    let ctx = cfg.context();
    let name = args.kind.name();
    let wd = ctx.working_digits();
    let cache = Cache::new(&cfg.cache_dir);
    let key = Cache::key(name, &spec, wd);

    let hit = if args.use_cache {
        cache.get(&key, name, &spec, wd)
    } else {
        None
    };
    let (value, extra) = match hit.and_then(|e| Some((e.value()?, e.extra))) {
        Some(v) => v,
        None => {
            let (v, extra) = parsed.eval(&ctx)?;
            if args.use_cache {
                cache.put(&key, &Entry::new(name, &spec, wd, &v, extra.clone()))?;
            }
            (v, extra)
        }
    };

    let bound = format!("1e-{}", cfg.digits);
    let text = match cfg.output {
        Format::Pretty => {
            let mut s = format!(
                "value  {}\nerror  < {bound}\n",
                value.to_string_digits(cfg.digits as usize)
            );
            if let (Some(n), Some(t)) = (
                extra.get("terms"),
                extra.get("tail_log2").and_then(Value::as_f64),
            ) {
                s.push_str(&format!("terms  {n} (tail < 2^{t:.1})\n"));
            }
            s
        }
        Format::Json => {
            let mut v = json!({
                "kind": name,
                "spec": spec,
                "digits": cfg.digits,
                "working_digits": wd,
                "re": value.re.to_string_radix(10, Some(wd as usize)),
                "im": value.im.to_string_radix(10, Some(wd as usize)),
                "error_bound": bound,
            });
            if let Value::Object(m) = extra {
                v.as_object_mut().expect("object").extend(m);
            }
            format!("{v}\n")
        }
        Format::Csv => csv_table(
            &["kind", "digits", "re", "im", "error_bound"],
            [vec![
                name.to_string(),
                cfg.digits.to_string(),
                value.re.to_string_radix(10, Some(wd as usize)),
                value.im.to_string_radix(10, Some(wd as usize)),
                bound,
            ]],
        )?,
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}
