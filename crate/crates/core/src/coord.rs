//! Signed coordinates on the doubled interval `[-1, 0⁻] ∪ [0⁺, 1]`.

use core::cmp::Ordering;
use core::fmt;

/// One of the two monotone branches of a fiber map, or equivalently one of
/// the two inverse branches of the Cantor map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Minus, Branch::Plus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Minus => -1.0,
            Branch::Plus => 1.0,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Branch::Minus => '-',
            Branch::Plus => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '-' | '−' => Some(Branch::Minus),
            '+' => Some(Branch::Plus),
            _ => None,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Branch::Minus => Branch::Plus,
            Branch::Plus => Branch::Minus,
        }
    }

    /// The endpoint of the branch domain away from the turning point.
    pub fn outer_end(self) -> f64 {
        self.sign()
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Minus => "-",
            Branch::Plus => "+",
        })
    }
}

/// A real `x ∈ [-1, 1]` that carries a side tag exactly when `x = 0`.
///
/// The order is the one of the doubled interval: every negative value,
/// then `0⁻`, then `0⁺`, then every positive value.
#[derive(Debug, Clone, Copy)]
pub struct SignedCoordinate {
    value: f64,
    zero: Option<Branch>,
}

impl SignedCoordinate {
    pub const ZERO_MINUS: Self = Self {
        value: 0.0,
        zero: Some(Branch::Minus),
    };
    pub const ZERO_PLUS: Self = Self {
        value: 0.0,
        zero: Some(Branch::Plus),
    };

    /// Builds a coordinate, checking the tag/zero invariant and the range.
    pub fn new(value: f64, zero: Option<Branch>) -> crate::Result<Self> {
        if !(-1.0..=1.0).contains(&value) {
            return Err(crate::Error::InvalidInput("coordinate outside [-1, 1]"));
        }
        match (value == 0.0, zero) {
            (true, Some(side)) => Ok(Self::zero(side)),
            (false, None) => Ok(Self { value, zero: None }),
            (true, None) => Err(crate::Error::InvalidInput("zero coordinate needs a side tag")),
            (false, Some(_)) => Err(crate::Error::InvalidInput(
                "side tag is only allowed on a zero coordinate",
            )),
        }
    }

    pub const fn zero(side: Branch) -> Self {
        Self {
            value: 0.0,
            zero: Some(side),
        }
    }

    /// A real value, tagged with `side` if it is exactly zero.
    pub fn from_real(value: f64, side: Branch) -> Self {
        if value == 0.0 {
            Self::zero(side)
        } else {
            Self { value, zero: None }
        }
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn zero_sign(self) -> Option<Branch> {
        self.zero
    }

    pub fn is_critical(self) -> bool {
        self.zero.is_some()
    }

    /// Branch whose domain contains this coordinate.
    pub fn branch(self) -> Branch {
        match self.zero {
            Some(side) => side,
            None if self.value < 0.0 => Branch::Minus,
            None => Branch::Plus,
        }
    }

    fn rank(self) -> i8 {
        match self.zero {
            Some(Branch::Minus) => -1,
            Some(Branch::Plus) => 1,
            None => 0,
        }
    }
}

impl PartialEq for SignedCoordinate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for SignedCoordinate {}

impl PartialOrd for SignedCoordinate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignedCoordinate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.rank().cmp(&other.rank()))
    }
}

impl fmt::Display for SignedCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.zero {
            Some(side) => write!(f, "0{side}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// A point `(x, y)` of the doubled domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: SignedCoordinate,
    pub y: f64,
}

impl Point {
    pub fn new(x: SignedCoordinate, y: f64) -> Self {
        Self { x, y }
    }

    /// Turning point `(0^side, y)` on the critical line.
    pub fn critical(side: Branch, y: f64) -> Self {
        Self {
            x: SignedCoordinate::zero(side),
            y,
        }
    }

    /// A point off the critical line; a zero `x` is tagged `0⁺`.
    pub fn real(x: f64, y: f64) -> Self {
        Self {
            x: SignedCoordinate::from_real(x, Branch::Plus),
            y,
        }
    }

    pub fn on_critical_line(&self) -> bool {
        self.x.is_critical()
    }
}
