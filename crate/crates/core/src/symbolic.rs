//! Addresses, itineraries and kneading sequences.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::cantor::{psi_extended, PSI_DEPTH};
use crate::coord::{Branch, Point};
use crate::model::{ToyModel, UnimodalFamily};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AddressSymbol {
    L,
    ZeroMinus,
    ZeroPlus,
    R,
}

impl AddressSymbol {
    pub fn as_str(self) -> &'static str {
        match self {
            AddressSymbol::L => "L",
            AddressSymbol::ZeroMinus => "0-",
            AddressSymbol::ZeroPlus => "0+",
            AddressSymbol::R => "R",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "L" => Some(AddressSymbol::L),
            "0-" => Some(AddressSymbol::ZeroMinus),
            "0+" => Some(AddressSymbol::ZeroPlus),
            "R" => Some(AddressSymbol::R),
            _ => None,
        }
    }
}

impl fmt::Display for AddressSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Finite prefix of an itinerary; the depth is the number of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Itinerary {
    pub symbols: Vec<AddressSymbol>,
}

impl Itinerary {
    pub fn depth(&self) -> usize {
        self.symbols.len()
    }

    /// Symbols joined by commas, e.g. `0+,R,L,L`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(s.as_str());
        }
        out
    }

    pub fn parse(s: &str) -> Option<Self> {
        let symbols = s
            .split(',')
            .map(|t| AddressSymbol::parse(t.trim()))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { symbols })
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn address(p: &Point) -> AddressSymbol {
    match p.x.zero_sign() {
        Some(Branch::Minus) => AddressSymbol::ZeroMinus,
        Some(Branch::Plus) => AddressSymbol::ZeroPlus,
        None if p.x.value() < 0.0 => AddressSymbol::L,
        None => AddressSymbol::R,
    }
}

pub fn itinerary<F: UnimodalFamily>(model: &ToyModel<F>, p: Point, depth: usize) -> Result<Itinerary> {
    if depth == 0 {
        return Err(Error::InvalidInput("itinerary depth must be at least 1"));
    }
    let mut symbols = Vec::with_capacity(depth);
    let mut current = p;
    symbols.push(address(&current));
    for _ in 1..depth {
        current = model.eval_step(current);
        symbols.push(address(&current));
    }
    Ok(Itinerary { symbols })
}

/// Itinerary of the turning point `(0^side, y)`.
pub fn kneading<F: UnimodalFamily>(
    model: &ToyModel<F>,
    y: f64,
    side: Branch,
    depth: usize,
) -> Result<Itinerary> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::InvalidInput("base coordinate outside [0, 1]"));
    }
    itinerary(model, Point::critical(side, y), depth)
}

/// First disagreement found by [`kneading_equal`].
#[derive(Debug, Clone, PartialEq)]
pub struct KneadingMismatch {
    pub y: f64,
    pub psi_y: f64,
    pub side: Branch,
    pub index: usize,
    pub symbol_a: AddressSymbol,
    pub symbol_b: AddressSymbol,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceVerdict {
    pub all_equal: bool,
    pub depth: usize,
    /// Number of `(y, side)` pairs compared before stopping.
    pub compared: usize,
    pub first_mismatch: Option<KneadingMismatch>,
}

/// Compares `T_A(0^±, y)` with `T_B(0^±, ψ(y))` on a finite grid and depth.
///
/// Pairs are visited in `(grid index, side)` order with `0⁻` before `0⁺`,
/// and the first differing symbol is reported.
pub fn kneading_equal<F: UnimodalFamily, G: UnimodalFamily>(
    a: &ToyModel<F>,
    b: &ToyModel<G>,
    y_grid: &[f64],
    depth: usize,
) -> Result<EquivalenceVerdict> {
    let mut compared = 0;
    for &y in y_grid {
        let psi_y = psi_extended(&a.cantor, &b.cantor, y, PSI_DEPTH)?.value;
        for side in Branch::BOTH {
            let ka = kneading(a, y, side, depth)?;
            let kb = kneading(b, psi_y, side, depth)?;
            compared += 1;
            if let Some(index) = (0..depth).find(|&i| ka.symbols[i] != kb.symbols[i]) {
                return Ok(EquivalenceVerdict {
                    all_equal: false,
                    depth,
                    compared,
                    first_mismatch: Some(KneadingMismatch {
                        y,
                        psi_y,
                        side,
                        index,
                        symbol_a: ka.symbols[index],
                        symbol_b: kb.symbols[index],
                    }),
                });
            }
        }
    }
    Ok(EquivalenceVerdict {
        all_equal: true,
        depth,
        compared,
        first_mismatch: None,
    })
}
