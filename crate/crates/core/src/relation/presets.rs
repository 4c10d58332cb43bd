//! Named constant pools, one per (level, weight) slice, with surd
//! prefactors folded into the elements.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub max_coeff_digits: u32,
    /// each element is a product `s₁^e₁ s₂^e₂ ⋯`, written as in closed forms
    pub elements: &'static [&'static [&'static str]],
}

macro_rules! preset {
    ($name:expr, $desc:expr, $digits:expr, [$([$($f:expr),+]),+ $(,)?]) => {
        Preset { name: $name, description: $desc, max_coeff_digits: $digits, elements: &[$(&[$($f),+]),+] }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!(
        "level2-w2",
        "weight 2, level 2",
        3,
        [["pi^2"], ["lambda^2"]]
    ),
    preset!("level4-w1", "weight 1, level 4", 3, [["pi"], ["lambda"]]),
    preset!(
        "level4-w2",
        "weight 2, level 4",
        3,
        [["catalan"], ["lambda^2"], ["pi", "lambda"], ["pi^2"]]
    ),
    preset!(
        "level4-w3",
        "weight 3, level 4",
        3,
        [
            ["zeta3"],
            ["pi", "catalan"],
            ["lambda^3"],
            ["pi^2", "lambda"]
        ]
    ),
    preset!(
        "level4-w4",
        "weight 4, level 4",
        5,
        [
            ["li4_half"],
            ["pi", "im_li3_1pi_2"],
            ["zeta3", "lambda"],
            ["catalan^2"],
            ["pi", "catalan", "lambda"],
            ["lambda^4"],
            ["pi^2", "lambda^2"],
            ["pi^4"]
        ]
    ),
    preset!(
        "level4-mixed",
        "weights 1 and 2, level 4",
        5,
        [
            ["catalan"],
            ["lambda^2"],
            ["pi", "lambda"],
            ["pi^2"],
            ["lambda"],
            ["pi"]
        ]
    ),
    preset!(
        "level5-w3",
        "weight 3, level 5",
        3,
        [["re_li3_e_2pi5"], ["zeta3"]]
    ),
    preset!(
        "level8-w2",
        "weight 2, level 8, times sqrt2",
        3,
        [
            ["sqrt2", "li2_sqrt2m1"],
            ["sqrt2", "lambda_t^2"],
            ["sqrt2", "pi^2"]
        ]
    ),
    preset!(
        "level8-w3",
        "weight 3, level 8, times sqrt2",
        4,
        [
            ["sqrt2", "re_li3_e_pi4"],
            ["sqrt2", "li3_inv_sqrt2"],
            ["sqrt2", "li3_sqrt2m1"],
            ["sqrt2", "zeta3"],
            ["sqrt2", "lambda", "li2_sqrt2m1"],
            ["sqrt2", "lambda_t", "li2_sqrt2m1"],
            ["sqrt2", "pi^2", "lambda"],
            ["sqrt2", "lambda^3"],
            ["sqrt2", "lambda_t^3"],
            ["sqrt2", "lambda", "lambda_t^2"],
            ["sqrt2", "lambda^2", "lambda_t"],
            ["sqrt2", "pi^2", "lambda_t"],
            ["sqrt2", "pi", "catalan"]
        ]
    ),
    preset!(
        "level9-w1",
        "weight 1, level 9/18, cosine-weighted",
        3,
        [
            ["c_2_9", "lbar_1_9"],
            ["c_4_9", "lbar_1_9"],
            ["c_2_9", "lbar_2_9"],
            ["c_4_9", "lbar_2_9"],
            ["c_2_9", "lbar_1_3"],
            ["c_4_9", "lbar_1_3"]
        ]
    ),
    preset!(
        "level12-w1",
        "weight 1, level 12, with sqrt3",
        3,
        [
            ["lambda"],
            ["sqrt3", "lambda"],
            ["Lambda"],
            ["sqrt3", "Lambda"],
            ["Lambda_t"],
            ["sqrt3", "Lambda_t"]
        ]
    ),
    preset!(
        "level12-w2",
        "weight 2, level 12, times sqrt3",
        3,
        [
            ["sqrt3", "li2_2msqrt3"],
            ["sqrt3", "Lambda_t^2"],
            ["sqrt3", "pi^2"]
        ]
    ),
];

impl Preset {
    pub fn basis(&self) -> Basis {
        Basis {
            name: self.name.to_string(),
            max_coeff_digits: self.max_coeff_digits,
            elements: self
                .elements
                .iter()
                .map(|e| e.iter().map(|f| f.to_string()).collect())
                .collect(),
        }
    }
}

/// An owned constant pool: a preset or a user-supplied list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Basis {
    pub name: String,
    pub max_coeff_digits: u32,
    pub elements: Vec<Vec<String>>,
}

impl Basis {
    /// Parses `"pi^2, lambda^2, pi*catalan"`: elements split on commas,
    /// factors on `*`.
    pub fn parse(text: &str, max_coeff_digits: u32) -> Basis {
        let elements = text
            .split(',')
            .map(str::trim)
            .filter(|e| !e.is_empty())
            .map(|e| e.split('*').map(|f| f.trim().to_string()).collect())
            .collect();
        Basis {
            name: "custom".into(),
            max_coeff_digits,
            elements,
        }
    }
}

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
