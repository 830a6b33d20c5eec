//! Toy models: fiber families, Cantor maps, one-step evaluation, branch
//! inverses and model validation.

use alloc::vec::Vec;

use crate::coord::{Branch, Point, SignedCoordinate};
use crate::{Error, Result};

/// A one-parameter family `y ↦ f(y)` of unimodal maps of `[-1, 1]` with
/// turning point `0` and `f(y)(±1) = -1`.
///
/// `x`-derivatives take a [`SignedCoordinate`] so that piecewise families
/// can return the one-sided derivative at `0⁻`/`0⁺`. Families that do not
/// know a derivative return `None`.
pub trait UnimodalFamily {
    fn eval(&self, y: f64, x: f64) -> f64;

    fn deriv_x(&self, _y: f64, _x: SignedCoordinate) -> Option<f64> {
        None
    }

    fn deriv_x2(&self, _y: f64, _x: SignedCoordinate) -> Option<f64> {
        None
    }

    fn deriv_x3(&self, _y: f64, _x: SignedCoordinate) -> Option<f64> {
        None
    }

    fn deriv_y(&self, _y: f64, _x: f64) -> Option<f64> {
        None
    }
}

/// The built-in analytic families.
///
/// Parameters of `Tent` and `Quadratic` may depend affinely on the fiber,
/// `s(y) = s0 + s1·y` and `c(y) = c0 + c1·y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `f(x) = (s - 1) - s·|x|`.
    Tent { s0: f64, s1: f64 },
    /// `f(x) = c·(1 - x²) - 1`.
    Quadratic { c0: f64, c1: f64 },
    /// `q(x) = -x²`.
    Example3Q,
    /// `f(x) = -|x|`.
    Example3F,
    /// `g(x) = -√|x|`.
    Example3G,
}

impl Family {
    pub fn tent(s: f64) -> Self {
        Family::Tent { s0: s, s1: 0.0 }
    }

    pub fn quadratic(c: f64) -> Self {
        Family::Quadratic { c0: c, c1: 0.0 }
    }

    /// True when `f(y)` does not depend on `y`.
    pub fn is_fiber_independent(&self) -> bool {
        match *self {
            Family::Tent { s1, .. } => s1 == 0.0,
            Family::Quadratic { c1, .. } => c1 == 0.0,
            _ => true,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Family::Tent { .. } => "tent",
            Family::Quadratic { .. } => "quadratic",
            Family::Example3Q => "example3-q",
            Family::Example3F => "example3-f",
            Family::Example3G => "example3-g",
        }
    }
}

impl UnimodalFamily for Family {
    fn eval(&self, y: f64, x: f64) -> f64 {
        match *self {
            Family::Tent { s0, s1 } => {
                let s = s0 + s1 * y;
                (s - 1.0) - s * x.abs()
            }
            Family::Quadratic { c0, c1 } => {
                let c = c0 + c1 * y;
                c * (1.0 - x * x) - 1.0
            }
            Family::Example3Q => -(x * x),
            Family::Example3F => -x.abs(),
            Family::Example3G => -libm::sqrt(x.abs()),
        }
    }

    fn deriv_x(&self, y: f64, x: SignedCoordinate) -> Option<f64> {
        let sign = x.branch().sign();
        let v = x.value();
        Some(match *self {
            Family::Tent { s0, s1 } => -(s0 + s1 * y) * sign,
            Family::Quadratic { c0, c1 } => -2.0 * (c0 + c1 * y) * v,
            Family::Example3Q => -2.0 * v,
            Family::Example3F => -sign,
            Family::Example3G => -sign / (2.0 * libm::sqrt(v.abs())),
        })
    }

    fn deriv_x2(&self, y: f64, x: SignedCoordinate) -> Option<f64> {
        let u = x.value().abs();
        Some(match *self {
            Family::Tent { .. } | Family::Example3F => 0.0,
            Family::Quadratic { c0, c1 } => -2.0 * (c0 + c1 * y),
            Family::Example3Q => -2.0,
            Family::Example3G => 1.0 / (4.0 * u * libm::sqrt(u)),
        })
    }

    fn deriv_x3(&self, _y: f64, x: SignedCoordinate) -> Option<f64> {
        let sign = x.branch().sign();
        let u = x.value().abs();
        Some(match *self {
            Family::Tent { .. } | Family::Example3F | Family::Quadratic { .. } | Family::Example3Q => 0.0,
            Family::Example3G => -sign * 3.0 / (8.0 * u * u * libm::sqrt(u)),
        })
    }

    fn deriv_y(&self, _y: f64, x: f64) -> Option<f64> {
        Some(match *self {
            Family::Tent { s1, .. } => s1 * (1.0 - x.abs()),
            Family::Quadratic { c1, .. } => c1 * (1.0 - x * x),
            Family::Example3Q | Family::Example3F | Family::Example3G => 0.0,
        })
    }
}

/// Affine Cantor map `k(y) = y/a` on `[0, a]`, `k(y) = (1 - y)/(1 - b)` on
/// `[b, 1]`, with inverse branches `K₊(y) = a·y` and `K₋(y) = 1 - (1 - b)·y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorMap {
    pub a: f64,
    pub b: f64,
}

impl CantorMap {
    pub fn affine(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    /// The Cantor map of the middle-thirds set, `k(y) = 3y` / `3 - 3y`.
    pub fn middle_thirds() -> Self {
        Self::affine(1.0 / 3.0, 2.0 / 3.0)
    }

    /// Inverse branch `K_j`.
    pub fn inverse(&self, j: Branch, y: f64) -> f64 {
        match j {
            Branch::Plus => self.a * y,
            Branch::Minus => 1.0 - (1.0 - self.b) * y,
        }
    }

    /// Derivative of the inverse branch `K_j` (constant for affine maps).
    pub fn inverse_deriv(&self, j: Branch) -> f64 {
        match j {
            Branch::Plus => self.a,
            Branch::Minus => -(1.0 - self.b),
        }
    }

    /// The forward branch `k_j`, defined on `[0, a]` for `+` and on `[b, 1]`
    /// for `-`. Evaluated algebraically outside those intervals.
    pub fn forward(&self, j: Branch, y: f64) -> f64 {
        match j {
            Branch::Plus => y / self.a,
            Branch::Minus => (1.0 - y) / (1.0 - self.b),
        }
    }

    pub fn forward_deriv(&self, j: Branch) -> f64 {
        1.0 / self.inverse_deriv(j)
    }

    /// Branch domain containing `y`, or `None` when `y` is in the gap `(a, b)`.
    pub fn branch_of(&self, y: f64) -> Option<Branch> {
        if y <= self.a {
            Some(Branch::Plus)
        } else if y >= self.b {
            Some(Branch::Minus)
        } else {
            None
        }
    }

    /// Lower bound `γ` on `|k'|`.
    pub fn expansion(&self) -> f64 {
        (1.0 / self.a).min(1.0 / (1.0 - self.b))
    }

    /// Largest contraction factor of the inverse branches.
    pub fn contraction(&self) -> f64 {
        self.a.max(1.0 - self.b)
    }
}

/// Numerical knobs shared by every operation on a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Images with `|x| ≤ zero_epsilon` are snapped onto the critical line.
    pub zero_epsilon: f64,
    /// Bisection stopping width for branch inverses.
    pub root_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_epsilon: 1e-12,
            root_tol: 1e-13,
        }
    }
}

/// A toy model `F(x, y) = (f(y)(x), K_sign(x)(y))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyModel<F = Family> {
    pub family: F,
    pub cantor: CantorMap,
    pub tol: Tolerances,
}

/// Orbit segment together with the branch word that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub points: Vec<Point>,
    pub word: Vec<Branch>,
}

impl<F: UnimodalFamily> ToyModel<F> {
    pub fn new(family: F, cantor: CantorMap) -> Self {
        Self {
            family,
            cantor,
            tol: Tolerances::default(),
        }
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    /// `f(y)(0)`, the top of both branch images on fiber `y`.
    pub fn fiber_top(&self, y: f64) -> f64 {
        self.family.eval(y, 0.0)
    }

    /// `f_j(y)(x)` with the result tagged with `j` when it lands on zero.
    pub fn apply_branch(&self, j: Branch, y: f64, x: f64) -> SignedCoordinate {
        let image = self.family.eval(y, x);
        if image.abs() <= self.tol.zero_epsilon {
            SignedCoordinate::zero(j)
        } else {
            SignedCoordinate::from_real(image, j)
        }
    }

    /// One application of `F`; also returns the branch that was used.
    pub fn step_with_branch(&self, p: Point) -> (Point, Branch) {
        let j = p.x.branch();
        let x = self.apply_branch(j, p.y, p.x.value());
        (Point::new(x, self.cantor.inverse(j, p.y)), j)
    }

    pub fn eval_step(&self, p: Point) -> Point {
        self.step_with_branch(p).0
    }

    /// `p, F(p), …, Fⁿ(p)` and the branch word `j₁…jₙ`.
    pub fn eval_orbit(&self, p: Point, n: usize) -> Orbit {
        let mut points = Vec::with_capacity(n + 1);
        let mut word = Vec::with_capacity(n);
        let mut current = p;
        points.push(current);
        for _ in 0..n {
            let (next, j) = self.step_with_branch(current);
            word.push(j);
            points.push(next);
            current = next;
        }
        Orbit { points, word }
    }

    /// Preimage of `x` under `f_j(y)` in the branch domain of `j`, or `None`
    /// when `x` is outside the branch image `[-1, f(y)(0)]`.
    pub fn try_branch_inverse(&self, j: Branch, x: f64, y: f64) -> Option<SignedCoordinate> {
        let top = self.fiber_top(y);
        let slack = self.tol.root_tol;
        if !(x >= -1.0 - slack && x <= top + slack) {
            return None;
        }
        if x >= top - self.tol.zero_epsilon {
            return Some(SignedCoordinate::zero(j));
        }
        if x <= -1.0 {
            return Some(SignedCoordinate::from_real(j.outer_end(), j));
        }
        // f(y)(t) - x is positive at the turning point and negative at the
        // outer end of either branch.
        let mut inner = 0.0_f64;
        let mut outer = j.outer_end();
        while (outer - inner).abs() > self.tol.root_tol {
            let mid = 0.5 * (inner + outer);
            let v = self.family.eval(y, mid) - x;
            if v == 0.0 {
                inner = mid;
                outer = mid;
                break;
            }
            if v > 0.0 {
                inner = mid;
            } else {
                outer = mid;
            }
        }
        let t = 0.5 * (inner + outer);
        if t.abs() <= self.tol.zero_epsilon {
            Some(SignedCoordinate::zero(j))
        } else {
            Some(SignedCoordinate::from_real(t, j))
        }
    }

    /// The total inverse `ξ_j(x, y)`: the branch preimage when it exists,
    /// `0^j` otherwise.
    pub fn branch_inverse(&self, j: Branch, x: f64, y: f64) -> SignedCoordinate {
        self.try_branch_inverse(j, x, y)
            .unwrap_or(SignedCoordinate::zero(j))
    }

    /// Grid check of the standing hypotheses on the family and the Cantor map.
    pub fn validate(&self, grid_density: usize) -> Result<ValidationReport> {
        if grid_density < 16 {
            return Err(Error::InvalidInput("grid_density must be at least 16"));
        }
        let n = grid_density;
        let ys: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let xs_left: Vec<f64> = (0..=n).map(|i| -1.0 + i as f64 / n as f64).collect();
        let xs_right: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let f = |y: f64, x: f64| self.family.eval(y, x);

        let mut checks = Vec::new();
        let mut endpoint = 0.0_f64;
        let mut range = 0.0_f64;
        let mut left_violation = 0.0_f64;
        let mut right_violation = 0.0_f64;
        let mut finite = true;
        for &y in &ys {
            endpoint = endpoint.max((f(y, -1.0) + 1.0).abs()).max((f(y, 1.0) + 1.0).abs());
            for w in xs_left.windows(2) {
                let (a, b) = (f(y, w[0]), f(y, w[1]));
                finite &= a.is_finite() && b.is_finite();
                range = range.max(a.abs() - 1.0).max(b.abs() - 1.0);
                // strictly increasing: b - a > 0
                left_violation = left_violation.max(a - b);
                if b <= a {
                    left_violation = left_violation.max(f64::MIN_POSITIVE);
                }
            }
            for w in xs_right.windows(2) {
                let (a, b) = (f(y, w[0]), f(y, w[1]));
                finite &= a.is_finite() && b.is_finite();
                range = range.max(a.abs() - 1.0).max(b.abs() - 1.0);
                right_violation = right_violation.max(b - a);
                if b >= a {
                    right_violation = right_violation.max(f64::MIN_POSITIVE);
                }
            }
        }
        checks.push(Check::new("family.endpoints", endpoint <= 1e-12, endpoint));
        checks.push(Check::new("family.range", finite && range <= 1e-12, range.max(0.0)));
        checks.push(Check::new(
            "family.increasing_left",
            left_violation == 0.0,
            left_violation,
        ));
        checks.push(Check::new(
            "family.decreasing_right",
            right_violation == 0.0,
            right_violation,
        ));

        let mut lipschitz = 0.0_f64;
        for w in ys.windows(2) {
            let dy = w[1] - w[0];
            for &x in xs_left.iter().chain(xs_right.iter()) {
                lipschitz = lipschitz.max((f(w[1], x) - f(w[0], x)).abs() / dy);
            }
        }
        checks.push(Check::new("family.y_continuity", lipschitz.is_finite(), lipschitz));

        let CantorMap { a, b } = self.cantor;
        let params_ok = 0.0 < a && a < b && b < 1.0;
        checks.push(Check::new("cantor.order", params_ok, if params_ok { 0.0 } else { a - b }));
        let c = &self.cantor;
        let boundary = c
            .forward(Branch::Plus, 0.0)
            .abs()
            .max(c.forward(Branch::Minus, 1.0).abs())
            .max((c.forward(Branch::Plus, a) - 1.0).abs())
            .max((c.forward(Branch::Minus, b) - 1.0).abs());
        checks.push(Check::new("cantor.boundary", boundary <= 1e-12, boundary));
        // affine branches: |k'| is constant on each branch domain
        let min_slope = c
            .forward_deriv(Branch::Plus)
            .abs()
            .min(c.forward_deriv(Branch::Minus).abs());
        let gamma = if params_ok { min_slope } else { f64::NAN };
        checks.push(Check::new(
            "cantor.expansion",
            params_ok && min_slope > 1.0,
            min_slope,
        ));
        let contraction = c.contraction();
        checks.push(Check::new(
            "cantor.inverse_contraction",
            params_ok && contraction * min_slope <= 1.0 + 1e-12 && contraction < 1.0,
            contraction,
        ));

        let passed = checks.iter().all(|c| c.passed);
        Ok(ValidationReport {
            checks,
            gamma,
            passed,
        })
    }
}

/// Outcome of one validation check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst-case residual or, for estimates, the estimated quantity.
    pub residual: f64,
}

impl Check {
    fn new(name: &'static str, passed: bool, residual: f64) -> Self {
        Self {
            name,
            passed,
            residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Estimated expansion bound of the Cantor map.
    pub gamma: f64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
