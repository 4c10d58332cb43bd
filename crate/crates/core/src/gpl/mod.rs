//! Generalized polylogarithms `G(α₁, …, αₙ; z)` over exact letters.

pub mod algebra;
pub mod eval;
pub mod letter;
pub mod mpl;
pub mod word;

pub use algebra::{fibrate_li_family, hoelder_reflect, level_membership, scale, shuffle};
pub use eval::{gpl_eval, gpl_eval_exact, gpl_eval_prec, gpl_eval_series, gpl_via_mpl};
pub use letter::Letter;
pub use mpl::{gpl_to_mpl, mpl_sum, mpl_to_gpl, MplForm};
pub use word::{Word, WordCombination};
