//! Binomial-harmonic series with certified truncation.

mod checks;
mod eval;
mod harmonic;
mod spec;

pub use checks::{
    eval_generating_function_check, eval_parametric_log_identity, symmetry_4k2k, GfVariant,
    ParametricFamily, Symmetry4k,
};
pub use eval::{eval_series, eval_series_detailed, eval_series_terms, SeriesEval};
pub use harmonic::{harmonic, harmonic_exact, harmonic_prec, HarmonicKey, HarmonicState};
pub use spec::{
    binom_stream, Argument, BinomStream, Binomial, Factor, SeriesKind, SeriesSpec, WeightTerm,
};
