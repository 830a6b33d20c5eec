//! Built-in models. Every fixture uses the middle-thirds Cantor map
//! `k(y) = 3y` on `[0, 1/3]`, `k(y) = 3 - 3y` on `[2/3, 1]`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{CantorMap, Family, ToyModel};

fn with_base(family: Family) -> ToyModel {
    ToyModel::new(family, CantorMap::middle_thirds())
}

/// Full tent map `1 - 2|x|`.
pub fn tent2() -> ToyModel {
    with_base(Family::tent(2.0))
}

pub fn tent(s: f64) -> ToyModel {
    with_base(Family::tent(s))
}

/// `c(1 - x²) - 1`.
pub fn quad(c: f64) -> ToyModel {
    with_base(Family::quadratic(c))
}

pub fn example3_q() -> ToyModel {
    with_base(Family::Example3Q)
}

pub fn example3_f() -> ToyModel {
    with_base(Family::Example3F)
}

pub fn example3_g() -> ToyModel {
    with_base(Family::Example3G)
}

/// Quadratic family with fiber-dependent parameter `c(y) = 1.5 + 0.4y`.
pub fn coupled() -> ToyModel {
    with_base(Family::Quadratic { c0: 1.5, c1: 0.4 })
}

pub const NAMES: [&str; 7] = [
    "tent2",
    "quad2",
    "quad1.2",
    "example3-q",
    "example3-f",
    "example3-g",
    "coupled",
];

/// Resolves a fixture name. Besides [`NAMES`], `tent<s>` and `quad<c>` build
/// the tent and quadratic maps with the given constant parameter.
pub fn by_name(name: &str) -> Option<ToyModel> {
    match name {
        "example3-q" => return Some(example3_q()),
        "example3-f" => return Some(example3_f()),
        "example3-g" => return Some(example3_g()),
        "coupled" => return Some(coupled()),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("quad") {
        let c: f64 = rest.parse().ok()?;
        return (c > 0.0 && c <= 2.0).then(|| quad(c));
    }
    if let Some(rest) = name.strip_prefix("tent") {
        let s: f64 = rest.parse().ok()?;
        return (s > 0.0 && s <= 2.0).then(|| tent(s));
    }
    None
}

/// Every named fixture, in [`NAMES`] order.
pub fn all() -> Vec<(String, ToyModel)> {
    let mut out = vec![];
    for name in NAMES {
        out.push((String::from(name), by_name(name).expect("builtin fixture")));
    }
    out
}
