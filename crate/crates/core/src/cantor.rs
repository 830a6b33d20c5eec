//! Binary coding of the base Cantor set and the base conjugacy `ψ`.
//!
//! A base point `y` is coded by the branches of `k` its forward orbit
//! visits: symbol `0` for `[0, a]` (inverse branch `K₊`) and `1` for
//! `[b, 1]` (inverse branch `K₋`). Points of the Cantor set have infinite
//! codes; every other point falls into the central gap `(a, b)` after
//! finitely many steps. `ψ` sends a coded point of one Cantor set to the
//! point of the other with the same code, and is extended over the gaps by
//! pulling back a fixed homeomorphism of the central gaps.

use alloc::string::String;
use alloc::vec::Vec;

use crate::coord::Branch;
use crate::model::CantorMap;
use crate::{Error, Result};

/// Depth used for `ψ` when it is computed as part of another operation.
pub const PSI_DEPTH: usize = 40;

/// Cylinder length below which forward coding is no longer meaningful in
/// double precision: rounding in `k` is amplified by the expansion, so a
/// point that seems to enter the gap this deep is treated as coded.
const CODE_RESOLUTION: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeTerminal {
    InSet,
    /// The orbit lies in the gap `(a, b)` after this many steps.
    EntersGapAt(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CantorCode {
    /// Branches visited, `Plus` for `[0, a]` and `Minus` for `[b, 1]`.
    pub word: Vec<Branch>,
    pub terminal: CodeTerminal,
    /// `k` applied along `word` to the starting point.
    pub remainder: f64,
}

impl CantorCode {
    /// The code as a `0`/`1` string.
    pub fn digits(&self) -> String {
        self.word
            .iter()
            .map(|j| match j {
                Branch::Plus => '0',
                Branch::Minus => '1',
            })
            .collect()
    }
}

/// Minimal branch word carrying a gap of the Cantor set onto `(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapDescriptor {
    pub word: Vec<Branch>,
    pub image_interval: (f64, f64),
}

pub fn cantor_code(spec: &CantorMap, y: f64, depth: usize) -> CantorCode {
    let mut word = Vec::with_capacity(depth);
    let mut v = y;
    let mut width = 1.0;
    for step in 0..depth {
        match spec.branch_of(v) {
            Some(j) => {
                word.push(j);
                width *= spec.inverse_deriv(j).abs();
                v = spec.forward(j, v).clamp(0.0, 1.0);
            }
            None if width <= CODE_RESOLUTION => break,
            None => {
                return CantorCode {
                    word,
                    terminal: CodeTerminal::EntersGapAt(step),
                    remainder: v,
                }
            }
        }
    }
    CantorCode {
        word,
        terminal: CodeTerminal::InSet,
        remainder: v,
    }
}

/// The gap word of `y`, if `y` reaches the central gap within `depth` steps.
pub fn gap_descriptor(spec: &CantorMap, y: f64, depth: usize) -> Option<GapDescriptor> {
    let code = cantor_code(spec, y, depth);
    match code.terminal {
        CodeTerminal::EntersGapAt(_) => Some(GapDescriptor {
            word: code.word,
            image_interval: (spec.a, spec.b),
        }),
        CodeTerminal::InSet => None,
    }
}

/// Applies the inverse branches of `spec` along `word` to `t`, innermost
/// last letter first: `K_{w₁} ∘ ⋯ ∘ K_{w_d}(t)`.
pub fn pull_back(spec: &CantorMap, word: &[Branch], t: f64) -> f64 {
    word.iter().rev().fold(t, |acc, &j| spec.inverse(j, acc))
}

/// A value of `ψ` with a certified enclosure width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiEstimate {
    pub value: f64,
    /// Length of the interval known to contain the exact value.
    pub certified_width: f64,
}

/// `ψ` on a point coded to `depth`: the midpoint of the depth-`depth`
/// interval of the target Cantor set with the same code. Points whose orbit
/// lands exactly on `0` or `1` are preimages of the fixed point `0` and are
/// mapped exactly.
pub fn psi_on_cantor(from: &CantorMap, to: &CantorMap, y: f64, depth: usize) -> Result<PsiEstimate> {
    check_unit(y)?;
    let code = cantor_code(from, y, depth);
    if let CodeTerminal::EntersGapAt(gap_step) = code.terminal {
        return Err(Error::NotInCantorSet { y, gap_step });
    }
    Ok(coded_estimate(to, &code))
}

fn coded_estimate(to: &CantorMap, code: &CantorCode) -> PsiEstimate {
    if code.remainder == 0.0 || code.remainder == 1.0 {
        return PsiEstimate {
            value: pull_back(to, &code.word, code.remainder),
            certified_width: 0.0,
        };
    }
    let lo = pull_back(to, &code.word, 0.0);
    let hi = pull_back(to, &code.word, 1.0);
    PsiEstimate {
        value: 0.5 * (lo + hi),
        certified_width: (hi - lo).abs(),
    }
}

/// `ψ` on all of `[0, 1]` with the affine gap homeomorphism.
pub fn psi_extended(from: &CantorMap, to: &CantorMap, y: f64, depth: usize) -> Result<PsiEstimate> {
    psi_extended_with(from, to, y, depth, |t| t)
}

/// `ψ` on all of `[0, 1]`. The gap homeomorphism is given in normalized
/// form: `h` must be a strictly increasing bijection of `(0, 1)`; it is
/// conjugated onto `(a_from, b_from) → (a_to, b_to)`.
pub fn psi_extended_with(
    from: &CantorMap,
    to: &CantorMap,
    y: f64,
    depth: usize,
    h: impl Fn(f64) -> f64,
) -> Result<PsiEstimate> {
    check_unit(y)?;
    let code = cantor_code(from, y, depth);
    match code.terminal {
        CodeTerminal::InSet => Ok(coded_estimate(to, &code)),
        CodeTerminal::EntersGapAt(_) => {
            let t = (code.remainder - from.a) / (from.b - from.a);
            let landed = to.a + h(t) * (to.b - to.a);
            Ok(PsiEstimate {
                value: pull_back(to, &code.word, landed),
                certified_width: 0.0,
            })
        }
    }
}

/// Worst violation of `ψ ∘ K^from_j = K^to_j ∘ ψ` over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugacyResidual {
    pub max_residual: f64,
    pub worst_y: f64,
    pub worst_branch: Branch,
}

pub fn verify_psi_conjugacy(
    from: &CantorMap,
    to: &CantorMap,
    grid: &[f64],
    depth: usize,
) -> Result<ConjugacyResidual> {
    let mut worst = ConjugacyResidual {
        max_residual: 0.0,
        worst_y: grid.first().copied().unwrap_or(0.0),
        worst_branch: Branch::Minus,
    };
    for &y in grid {
        let psi_y = psi_extended(from, to, y, depth)?.value;
        for j in Branch::BOTH {
            let lhs = psi_extended(from, to, from.inverse(j, y), depth)?.value;
            let rhs = to.inverse(j, psi_y);
            let r = (lhs - rhs).abs();
            if r > worst.max_residual {
                worst = ConjugacyResidual {
                    max_residual: r,
                    worst_y: y,
                    worst_branch: j,
                };
            }
        }
    }
    Ok(worst)
}

fn check_unit(y: f64) -> Result<()> {
    if (0.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::InvalidInput("base coordinate outside [0, 1]"))
    }
}
