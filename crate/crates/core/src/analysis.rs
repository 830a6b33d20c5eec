//! Derivative cocycle, Schwarzian derivative, periodic orbits and the basin
//! check for attracting orbits.

use alloc::vec::Vec;
use core::fmt;

use crate::coord::{Branch, Point, SignedCoordinate};
use crate::equivalence::BranchWord;
use crate::grid;
use crate::model::{ToyModel, UnimodalFamily};
use crate::{Error, Result};

/// Entries of `DFᵐ = [[A, B], [0, D]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocycleEntries {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub m: usize,
    /// The orbit met the critical line before step `m`; the fiber
    /// derivative there is taken as `0`.
    pub critical_hit: bool,
}

impl CocycleEntries {
    pub const IDENTITY: CocycleEntries = CocycleEntries {
        a: 1.0,
        b: 0.0,
        d: 1.0,
        m: 0,
        critical_hit: false,
    };

    /// `self · earlier`, i.e. the entries of the longer orbit segment when
    /// `self` is evaluated at the end of `earlier`.
    pub fn compose(&self, earlier: &CocycleEntries) -> CocycleEntries {
        CocycleEntries {
            a: self.a * earlier.a,
            b: self.a * earlier.b + self.b * earlier.d,
            d: self.d * earlier.d,
            m: self.m + earlier.m,
            critical_hit: self.critical_hit || earlier.critical_hit,
        }
    }
}

pub fn cocycle<F: UnimodalFamily>(model: &ToyModel<F>, p: Point, m: usize) -> Result<CocycleEntries> {
    let mut acc = CocycleEntries::IDENTITY;
    let mut current = p;
    for _ in 0..m {
        let j = current.x.branch();
        let y = current.y;
        let critical = current.on_critical_line();
        let fx = if critical {
            0.0
        } else {
            model
                .family
                .deriv_x(y, current.x)
                .ok_or(Error::MissingDerivative("d/dx"))?
        };
        let fy = model
            .family
            .deriv_y(y, current.x.value())
            .ok_or(Error::MissingDerivative("d/dy"))?;
        let step = CocycleEntries {
            a: fx,
            b: fy,
            d: model.cantor.inverse_deriv(j),
            m: 1,
            critical_hit: critical,
        };
        acc = step.compose(&acc);
        current = model.eval_step(current);
    }
    Ok(acc)
}

/// Central finite-difference Jacobian of `Fᵐ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdJacobian {
    /// Row-major `[[∂x'/∂x, ∂x'/∂y], [∂y'/∂x, ∂y'/∂y]]`.
    pub matrix: [[f64; 2]; 2],
    /// Some perturbed orbit used a different branch word than `p`.
    pub cell_violation: bool,
}

/// `Fᵐ` on real coordinates; the tag of `p.x` decides the first branch when
/// it sits on the turning point.
fn iterate_real<F: UnimodalFamily>(
    model: &ToyModel<F>,
    x: f64,
    y: f64,
    first_side: Branch,
    m: usize,
) -> (f64, f64, Vec<Branch>) {
    let (mut x, mut y) = (x, y);
    let mut word = Vec::with_capacity(m);
    for step in 0..m {
        let j = if x == 0.0 && step == 0 {
            first_side
        } else if x < 0.0 {
            Branch::Minus
        } else {
            Branch::Plus
        };
        word.push(j);
        x = model.family.eval(y, x);
        y = model.cantor.inverse(j, y);
    }
    (x, y, word)
}

pub fn jacobian_fd<F: UnimodalFamily>(model: &ToyModel<F>, p: Point, m: usize, h: f64) -> Result<FdJacobian> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput("finite-difference step must be positive"));
    }
    let side = p.x.branch();
    let (x, y) = (p.x.value(), p.y);
    let (_, _, base) = iterate_real(model, x, y, side, m);
    let mut violation = false;
    let mut column = |dx: f64, dy: f64| {
        let (xp, yp, wp) = iterate_real(model, x + dx, y + dy, side, m);
        let (xm, ym, wm) = iterate_real(model, x - dx, y - dy, side, m);
        violation |= wp != base || wm != base;
        [(xp - xm) / (2.0 * h), (yp - ym) / (2.0 * h)]
    };
    let cx = column(h, 0.0);
    let cy = column(0.0, h);
    Ok(FdJacobian {
        matrix: [[cx[0], cy[0]], [cx[1], cy[1]]],
        cell_violation: violation,
    })
}

fn derivatives<F: UnimodalFamily>(family: &F, y: f64, x: SignedCoordinate) -> Result<[f64; 3]> {
    Ok([
        family.deriv_x(y, x).ok_or(Error::MissingDerivative("d/dx"))?,
        family.deriv_x2(y, x).ok_or(Error::MissingDerivative("d2/dx2"))?,
        family.deriv_x3(y, x).ok_or(Error::MissingDerivative("d3/dx3"))?,
    ])
}

fn tagged(x: f64) -> SignedCoordinate {
    SignedCoordinate::from_real(x, if x < 0.0 { Branch::Minus } else { Branch::Plus })
}

fn schwarzian_from(d: [f64; 3]) -> f64 {
    if d[0] == 0.0 || !d[0].is_finite() {
        return f64::NEG_INFINITY;
    }
    let r = d[1] / d[0];
    d[2] / d[0] - 1.5 * r * r
}

/// `Sf = f'''/f' - (3/2)(f''/f')²`, and `-∞` where `f' = 0` or at the
/// turning point.
pub fn schwarzian<F: UnimodalFamily>(family: &F, y: f64, x: f64) -> Result<f64> {
    let d = derivatives(family, y, tagged(x))?;
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(schwarzian_from(d))
}

/// Compares `S(fₖ ∘ ⋯ ∘ f₁)` computed from the derivatives of the
/// composition with the value given by the composition rule
/// `S(g ∘ f) = (Sg ∘ f)·(f')² + Sf`, where `fᵢ = f(y_chain[i-1])`.
///
/// Returns the largest relative residual `|l - r| / max(1, |r|)`. Points
/// whose orbit passes within `1e-6` of the turning point are skipped.
pub fn schwarzian_composition_check<F: UnimodalFamily>(
    family: &F,
    y_chain: &[f64],
    x_grid: &[f64],
) -> Result<f64> {
    let mut worst = 0.0_f64;
    'points: for &x0 in x_grid {
        // derivatives of the partial composition u, and S(u) by the rule
        let (mut u, mut d1, mut d2, mut d3) = (x0, 1.0, 0.0, 0.0);
        let mut s_rule = 0.0;
        for &y in y_chain {
            if u.abs() < 1e-6 {
                continue 'points;
            }
            let f = derivatives(family, y, tagged(u))?;
            s_rule += schwarzian_from(f) * d1 * d1;
            let n1 = f[0] * d1;
            let n2 = f[1] * d1 * d1 + f[0] * d2;
            let n3 = f[2] * d1 * d1 * d1 + 3.0 * f[1] * d1 * d2 + f[0] * d3;
            (d1, d2, d3) = (n1, n2, n3);
            u = family.eval(y, u);
        }
        let s_direct = schwarzian_from([d1, d2, d3]);
        if !(s_direct.is_finite() && s_rule.is_finite()) {
            continue;
        }
        worst = worst.max((s_direct - s_rule).abs() / s_rule.abs().max(1.0));
    }
    Ok(worst)
}

/// Outcome of checking `Sf < 0` off the turning point on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzianGate {
    pub passed: bool,
    /// Largest value of `Sf` seen.
    pub max_value: f64,
    pub worst_y: f64,
    pub worst_x: f64,
}

/// The negative-Schwarzian hypothesis of the basin check, verified on
/// `x_count` points of `[-1, 1]` (the turning point excluded) per fiber.
pub fn negative_schwarzian_gate<F: UnimodalFamily>(
    family: &F,
    y_grid: &[f64],
    x_count: usize,
) -> Result<SchwarzianGate> {
    let mut gate = SchwarzianGate {
        passed: true,
        max_value: f64::NEG_INFINITY,
        worst_y: f64::NAN,
        worst_x: f64::NAN,
    };
    for &y in y_grid {
        for x in grid::uniform(-1.0, 1.0, x_count) {
            if x == 0.0 {
                continue;
            }
            let s = schwarzian(family, y, x)?;
            if gate.worst_x.is_nan() || s > gate.max_value {
                gate.max_value = s;
                gate.worst_y = y;
                gate.worst_x = x;
            }
        }
    }
    gate.passed = gate.max_value < 0.0;
    Ok(gate)
}

/// Fibers `y, K_{j₁}(y), …` visited along `word` (one per letter).
fn fiber_chain<F: UnimodalFamily>(model: &ToyModel<F>, word: &[Branch], y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(word.len());
    let mut v = y;
    for &j in word {
        out.push(v);
        v = model.cantor.inverse(j, v);
    }
    out
}

/// `(g_w(x), Dg_w(x), intermediate points)` along a fixed fiber chain.
fn compose_with_derivative<F: UnimodalFamily>(
    model: &ToyModel<F>,
    chain: &[f64],
    x: f64,
) -> Result<(f64, f64, Vec<f64>)> {
    let mut u = x;
    let mut d = 1.0;
    let mut path = Vec::with_capacity(chain.len());
    for &y in chain {
        path.push(u);
        d *= model
            .family
            .deriv_x(y, tagged(u))
            .ok_or(Error::MissingDerivative("d/dx"))?;
        u = model.family.eval(y, u);
    }
    Ok((u, d, path))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimumPrincipleVerdict {
    pub holds: bool,
    pub endpoint_min: f64,
    pub interior_min: f64,
    pub worst_x: f64,
}

/// Checks `|Dg(x)| > min(|Dg(a)|, |Dg(b)|)` at the interior points of a
/// `grid_count`-point grid of `[a, b]`, for the fiber composition `g` along
/// `word` starting on fiber `y`.
///
/// Fails with a precondition error when `Dg` vanishes on the interval,
/// detected as a zero at a grid point or a sign change of an intermediate
/// point between grid neighbours.
pub fn minimum_principle_check<F: UnimodalFamily>(
    model: &ToyModel<F>,
    word: &BranchWord,
    y: f64,
    interval: (f64, f64),
    grid_count: usize,
) -> Result<MinimumPrincipleVerdict> {
    let (a, b) = interval;
    if !(a < b) || grid_count < 3 || word.is_empty() {
        return Err(Error::InvalidInput("minimum principle needs a < b, a non-empty word and 3+ grid points"));
    }
    let chain = fiber_chain(model, word.letters(), y);
    let xs = grid::uniform(a, b, grid_count);
    let mut derivs = Vec::with_capacity(xs.len());
    let mut prev_path: Option<Vec<f64>> = None;
    for &x in &xs {
        let (_, d, path) = compose_with_derivative(model, &chain, x)?;
        if d.abs() <= model.tol.zero_epsilon || path.contains(&0.0) {
            return Err(Error::Precondition("derivative of the composition vanishes on the interval"));
        }
        if let Some(prev) = &prev_path {
            if prev.iter().zip(&path).any(|(p, q)| (*p < 0.0) != (*q < 0.0)) {
                return Err(Error::Precondition("derivative of the composition vanishes on the interval"));
            }
        }
        prev_path = Some(path);
        derivs.push(d.abs());
    }
    let endpoint_min = derivs[0].min(derivs[derivs.len() - 1]);
    let mut verdict = MinimumPrincipleVerdict {
        holds: true,
        endpoint_min,
        interior_min: f64::INFINITY,
        worst_x: xs[1],
    };
    for (i, &d) in derivs.iter().enumerate().take(derivs.len() - 1).skip(1) {
        if d < verdict.interior_min {
            verdict.interior_min = d;
            verdict.worst_x = xs[i];
        }
    }
    verdict.holds = verdict.interior_min > endpoint_min;
    Ok(verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    StronglyAttracting,
    Repelling,
    Neutral,
    OnCriticalLine,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::StronglyAttracting => "strongly_attracting",
            Classification::Repelling => "repelling",
            Classification::Neutral => "neutral",
            Classification::OnCriticalLine => "on_critical_line",
        }
    }

    /// Classification from the fiber multiplier alone.
    pub fn from_multiplier(a: f64) -> Self {
        let m = a.abs();
        if (m - 1.0).abs() <= NEUTRAL_BAND {
            Classification::Neutral
        } else if m < 1.0 {
            Classification::StronglyAttracting
        } else {
            Classification::Repelling
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const NEUTRAL_BAND: f64 = 1e-9;
const FIXED_POINT_GRID: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbitRecord {
    pub word: BranchWord,
    pub y_star: f64,
    pub x_star: SignedCoordinate,
    /// `Aᵐ` along the orbit, with one-sided derivatives at `0±`.
    pub multiplier_a: f64,
    pub multiplier_d: f64,
    pub classification: Classification,
}

impl PeriodicOrbitRecord {
    pub fn period(&self) -> usize {
        self.word.len()
    }

    pub fn point(&self) -> Point {
        Point::new(self.x_star, self.y_star)
    }

    /// Classification from the multiplier, ignoring the critical-line flag.
    pub fn stability(&self) -> Classification {
        Classification::from_multiplier(self.multiplier_a)
    }
}

/// Lexicographically least rotation of `w`.
pub fn canonical_rotation(w: &[Branch]) -> Vec<Branch> {
    (0..w.len().max(1))
        .map(|r| {
            let mut v = w[r.min(w.len())..].to_vec();
            v.extend_from_slice(&w[..r.min(w.len())]);
            v
        })
        .min()
        .unwrap_or_default()
}

/// Canonical representatives of all words of length `1..=m_max`, shortest
/// first, then lexicographic.
pub fn canonical_words(m_max: usize) -> Vec<BranchWord> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        for bits in 0..(1usize << m) {
            let w: Vec<Branch> = (0..m)
                .map(|i| {
                    if bits >> (m - 1 - i) & 1 == 0 {
                        Branch::Minus
                    } else {
                        Branch::Plus
                    }
                })
                .collect();
            if canonical_rotation(&w) == w {
                out.push(BranchWord(w));
            }
        }
    }
    out
}

/// Shortest `r` with `w = r^k`.
fn primitive_root(w: &[Branch]) -> &[Branch] {
    let m = w.len();
    (1..=m)
        .filter(|d| m.is_multiple_of(*d))
        .find(|&d| (d..m).all(|i| w[i] == w[i - d]))
        .map_or(w, |d| &w[..d])
}

/// Fixed point of `K_{jₘ} ∘ ⋯ ∘ K_{j₁}`. The composition is affine,
/// `y ↦ αy + β`, so the fixed point is `β / (1 - α)`.
pub fn base_fixed_point<F: UnimodalFamily>(model: &ToyModel<F>, word: &[Branch]) -> f64 {
    let k = |y: f64| word.iter().fold(y, |v, &j| model.cantor.inverse(j, v));
    let beta = k(0.0);
    let alpha = k(1.0) - beta;
    (beta / (1.0 - alpha)).clamp(0.0, 1.0)
}

/// Periodic orbits whose branch word is `word` (taken as given, not
/// canonicalized). For a non-primitive word, orbits of the primitive root
/// are omitted.
pub fn periodic_orbits_for_word<F: UnimodalFamily>(
    model: &ToyModel<F>,
    word: &BranchWord,
) -> Result<Vec<PeriodicOrbitRecord>> {
    let letters = word.letters();
    if letters.is_empty() {
        return Err(Error::InvalidInput("orbit word must be non-empty"));
    }
    let y_star = base_fixed_point(model, letters);
    let chain = fiber_chain(model, letters, y_star);
    let g = |x: f64| chain.iter().fold(x, |u, &y| model.family.eval(y, u));
    let root = primitive_root(letters);
    let root_chain = if root.len() < letters.len() {
        Some(fiber_chain(model, root, y_star))
    } else {
        None
    };

    let xs = grid::uniform(-1.0, 1.0, FIXED_POINT_GRID + 1);
    let hs: Vec<f64> = xs.iter().map(|&x| g(x) - x).collect();
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..xs.len() {
        if hs[i] == 0.0 {
            // keep only the ends of a run of exact zeros
            let inner_run = i > 0 && i + 1 < xs.len() && hs[i - 1] == 0.0 && hs[i + 1] == 0.0;
            if !inner_run {
                roots.push(xs[i]);
            }
            continue;
        }
        if i + 1 < xs.len() && hs[i + 1] != 0.0 && (hs[i] < 0.0) != (hs[i + 1] < 0.0) {
            let (mut lo, mut hi) = (xs[i], xs[i + 1]);
            let lo_neg = hs[i] < 0.0;
            while hi - lo > model.tol.root_tol {
                let mid = 0.5 * (lo + hi);
                let h = g(mid) - mid;
                if h == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (h < 0.0) == lo_neg {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= 10.0 * model.tol.root_tol);

    let mut out = Vec::new();
    for x in roots {
        if let Some(rc) = &root_chain {
            let gr = rc.iter().fold(x, |u, &y| model.family.eval(y, u));
            if (gr - x).abs() <= 1e-9 {
                continue;
            }
        }
        let x_star = if x.abs() <= model.tol.zero_epsilon {
            SignedCoordinate::zero(letters[0])
        } else {
            SignedCoordinate::from_real(x, letters[0])
        };
        let start = Point::new(x_star, y_star);
        let orbit = model.eval_orbit(start, letters.len());
        if orbit.word != letters {
            continue;
        }
        let entries = cocycle_one_sided(model, &orbit.points[..letters.len()])?;
        let on_line = orbit.points.iter().any(|p| p.on_critical_line());
        let classification = if on_line {
            Classification::OnCriticalLine
        } else {
            Classification::from_multiplier(entries.0)
        };
        out.push(PeriodicOrbitRecord {
            word: word.clone(),
            y_star,
            x_star,
            multiplier_a: entries.0,
            multiplier_d: entries.1,
            classification,
        });
    }
    Ok(out)
}

/// `(∏ f_x, ∏ K')` along the given points, one-sided at `0±`.
fn cocycle_one_sided<F: UnimodalFamily>(model: &ToyModel<F>, points: &[Point]) -> Result<(f64, f64)> {
    let mut a = 1.0;
    let mut d = 1.0;
    for p in points {
        a *= model
            .family
            .deriv_x(p.y, p.x)
            .ok_or(Error::MissingDerivative("d/dx"))?;
        d *= model.cantor.inverse_deriv(p.x.branch());
    }
    Ok((a, d))
}

/// All periodic orbits with canonical words of length `1..=m_max`.
pub fn find_periodic_orbits<F: UnimodalFamily>(model: &ToyModel<F>, m_max: usize) -> Result<Vec<PeriodicOrbitRecord>> {
    if m_max == 0 {
        return Err(Error::InvalidInput("m_max must be at least 1"));
    }
    let mut out = Vec::new();
    for w in canonical_words(m_max) {
        out.extend(periodic_orbits_for_word(model, &w)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Touches {
    pub critical_line: bool,
    pub boundary: bool,
}

impl Touches {
    pub fn any(&self) -> bool {
        self.critical_line || self.boundary
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinReport {
    pub orbit: PeriodicOrbitRecord,
    /// Closure of the basin component on fiber `y_star`.
    pub fiber_interval: (SignedCoordinate, SignedCoordinate),
    pub touches: Touches,
    /// Probe points iterated, bisection steps included.
    pub probes: usize,
    /// Probes that failed to converge.
    pub failed_probes: usize,
    /// No probe next to the orbit point converged on either side.
    pub inconclusive: bool,
}

pub const PROBES_PER_ROUND: usize = 64;
pub const DEFAULT_EXPANSION_STEPS: usize = 10_000;
const CONVERGENCE_TOL: f64 = 1e-9;

/// Grows the basin of a strongly attracting orbit on the fiber `y_star`.
///
/// A probe converges if iterating the return map along the orbit word,
/// with every step on the branch the word prescribes, brings it within
/// `1e-9` of `x_star` within `expansion_steps` returns. From `x_star`,
/// each direction is probed at 64 equally spaced points up to the end of
/// the branch domain (the turning point or `±1`); the first failing probe
/// is refined by bisection.
pub fn singer_check<F: UnimodalFamily>(
    model: &ToyModel<F>,
    orbit: &PeriodicOrbitRecord,
    expansion_steps: usize,
) -> Result<BasinReport> {
    match orbit.classification {
        Classification::StronglyAttracting => {}
        Classification::OnCriticalLine => {
            return Err(Error::Precondition("orbit meets the critical line"));
        }
        _ => return Err(Error::Precondition("orbit is not strongly attracting")),
    }
    let letters = orbit.word.letters();
    let chain = fiber_chain(model, letters, orbit.y_star);
    let target = orbit.x_star.value();
    let side = orbit.x_star.branch();

    let converges = |start: SignedCoordinate| -> bool {
        let mut x = start;
        for _ in 0..expansion_steps {
            for (&j, &y) in letters.iter().zip(&chain) {
                if x.branch() != j {
                    return false;
                }
                x = model.apply_branch(j, y, x.value());
            }
            if x.branch() == side && (x.value() - target).abs() <= CONVERGENCE_TOL {
                return true;
            }
        }
        false
    };
    let at = |v: f64| -> SignedCoordinate {
        if v == 0.0 {
            SignedCoordinate::zero(side)
        } else {
            SignedCoordinate::from_real(v, side)
        }
    };

    let mut probes = 0;
    let mut failed = 0;
    let mut first_probe_failed = [false; 2];
    let mut ends = [0.0; 2];
    for (k, end) in [0.0, side.outer_end()].into_iter().enumerate() {
        let mut good = target;
        let mut bad = None;
        for i in 1..=PROBES_PER_ROUND {
            let t = if i == PROBES_PER_ROUND {
                end
            } else {
                target + (end - target) * i as f64 / PROBES_PER_ROUND as f64
            };
            probes += 1;
            if converges(at(t)) {
                good = t;
            } else {
                failed += 1;
                if i == 1 {
                    first_probe_failed[k] = true;
                }
                bad = Some(t);
                break;
            }
        }
        if let Some(mut bad) = bad {
            while (bad - good).abs() > model.tol.zero_epsilon {
                let mid = 0.5 * (good + bad);
                if mid == good || mid == bad {
                    break;
                }
                probes += 1;
                if converges(at(mid)) {
                    good = mid;
                } else {
                    failed += 1;
                    bad = mid;
                }
            }
        }
        ends[k] = good;
    }

    let eps = model.tol.zero_epsilon;
    let (lo, hi) = if ends[0] < ends[1] { (ends[0], ends[1]) } else { (ends[1], ends[0]) };
    let touches = Touches {
        critical_line: ends.iter().any(|e| e.abs() <= eps),
        boundary: ends.iter().any(|e| (1.0 - e.abs()) <= eps),
    };
    Ok(BasinReport {
        orbit: orbit.clone(),
        fiber_interval: (at(lo), at(hi)),
        touches,
        probes,
        failed_probes: failed,
        inconclusive: first_probe_failed[0] && first_probe_failed[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn word(s: &str) -> BranchWord {
        BranchWord::parse(s).unwrap()
    }

    #[test]
    fn cocycle_tent_one_step() {
        let e = cocycle(&fixtures::tent2(), Point::real(0.5, 0.2), 1).unwrap();
        assert_eq!((e.a, e.b, e.d), (-2.0, 0.0, 1.0 / 3.0));
        let e = cocycle(&fixtures::tent2(), Point::real(0.5, 0.2), 0).unwrap();
        assert_eq!(e, CocycleEntries::IDENTITY);
    }

    #[test]
    fn cocycle_matches_finite_differences() {
        let m = fixtures::coupled();
        for steps in 1..=3 {
            let p = Point::real(0.37, 0.11);
            let e = cocycle(&m, p, steps).unwrap();
            let j = jacobian_fd(&m, p, steps, 1e-6).unwrap();
            assert!(!j.cell_violation);
            let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1e-12);
            assert!(rel(e.a, j.matrix[0][0]) < 1e-5);
            assert!(rel(e.b, j.matrix[0][1]) < 1e-5);
            assert!(rel(e.d, j.matrix[1][1]) < 1e-5);
            assert!(j.matrix[1][0].abs() < 1e-9);
        }
    }

    #[test]
    fn cocycle_flags_critical_hit() {
        let e = cocycle(&fixtures::quad(2.0), Point::critical(Branch::Plus, 0.5), 2).unwrap();
        assert!(e.critical_hit);
        assert_eq!(e.a, 0.0);
    }

    #[test]
    fn schwarzian_values() {
        let q = fixtures::quad(1.3).family;
        for x in [-0.9, -0.2, 0.35, 0.8] {
            let s = schwarzian(&q, 0.4, x).unwrap();
            assert!((s + 1.5 / (x * x)).abs() < 1e-9);
        }
        assert_eq!(schwarzian(&q, 0.4, 0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(schwarzian(&fixtures::tent2().family, 0.4, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn composition_rule() {
        let q = fixtures::quad(1.2);
        let chain = fiber_chain(&q, &[Branch::Plus, Branch::Plus], 0.3);
        let xs = grid::uniform(-1.0, 1.0, 33);
        assert!(schwarzian_composition_check(&q.family, &chain, &xs).unwrap() < 1e-8);
        assert_eq!(schwarzian_composition_check(&q.family, &[0.3], &xs).unwrap(), 0.0);
        let c = fixtures::coupled();
        let chain = fiber_chain(&c, &[Branch::Minus, Branch::Plus, Branch::Plus], 0.8);
        assert!(schwarzian_composition_check(&c.family, &chain, &xs).unwrap() < 1e-8);
    }

    #[test]
    fn schwarzian_gate() {
        let ys = grid::uniform(0.0, 1.0, 5);
        assert!(negative_schwarzian_gate(&fixtures::quad(1.2).family, &ys, 65).unwrap().passed);
        assert!(!negative_schwarzian_gate(&fixtures::tent2().family, &ys, 65).unwrap().passed);
    }

    #[test]
    fn minimum_principle() {
        let v = minimum_principle_check(&fixtures::quad(1.2), &word("+"), 0.0, (0.2, 0.6), 33).unwrap();
        assert!(v.holds);
        assert!((v.endpoint_min - 0.48).abs() < 1e-12);
        let err = minimum_principle_check(&fixtures::quad(1.2), &word("+"), 0.0, (-0.2, 0.6), 33).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let v = minimum_principle_check(&fixtures::tent2(), &word("+"), 0.0, (0.1, 0.4), 33).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn canonical_words_are_necklaces() {
        let w = canonical_words(3);
        let s: Vec<_> = w.iter().map(|w| alloc::format!("{w}")).collect();
        assert_eq!(s, ["-", "+", "--", "-+", "++", "---", "--+", "-++", "+++"]);
    }

    #[test]
    fn fixed_point_examples() {
        let o = periodic_orbits_for_word(&fixtures::tent2(), &word("+")).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].y_star, 0.0);
        assert!((o[0].x_star.value() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(o[0].multiplier_a, -2.0);
        assert_eq!(o[0].classification, Classification::Repelling);

        let o = periodic_orbits_for_word(&fixtures::quad(1.2), &word("+")).unwrap();
        assert_eq!(o.len(), 1);
        assert!((o[0].x_star.value() - 1.0 / 6.0).abs() < 1e-12);
        assert!((o[0].multiplier_a + 0.4).abs() < 1e-12);
        assert_eq!(o[0].classification, Classification::StronglyAttracting);

        let o = periodic_orbits_for_word(&fixtures::example3_f(), &word("+")).unwrap();
        assert_eq!(o[0].x_star, SignedCoordinate::ZERO_PLUS);
        assert_eq!(o[0].classification, Classification::OnCriticalLine);
        assert_eq!(o[0].multiplier_a.abs(), 1.0);
    }

    #[test]
    fn example3_multipliers_at_turning_point() {
        let at_zero = |m: &ToyModel| {
            let o = periodic_orbits_for_word(m, &word("+")).unwrap();
            o.into_iter().find(|r| r.x_star.is_critical()).unwrap().multiplier_a.abs()
        };
        assert_eq!(at_zero(&fixtures::example3_q()), 0.0);
        assert_eq!(at_zero(&fixtures::example3_f()), 1.0);
        assert!(at_zero(&fixtures::example3_g()) > 1e6);
    }

    #[test]
    fn orbit_invariants() {
        for (name, m) in fixtures::all() {
            for o in find_periodic_orbits(&m, 3).unwrap() {
                let letters = o.word.letters();
                let y = letters.iter().fold(o.y_star, |v, &j| m.cantor.inverse(j, v));
                assert!((y - o.y_star).abs() < 1e-12, "{name}");
                let orbit = m.eval_orbit(o.point(), letters.len());
                assert_eq!(orbit.word, letters, "{name}");
                let back = orbit.points.last().unwrap().x.value();
                assert!((back - o.x_star.value()).abs() < 1e-9, "{name} {}", o.word);
            }
        }
    }

    #[test]
    fn basin_quadratic_1_2() {
        let m = fixtures::quad(1.2);
        let o = &periodic_orbits_for_word(&m, &word("+")).unwrap()[0];
        let r = singer_check(&m, o, DEFAULT_EXPANSION_STEPS).unwrap();
        assert!(r.touches.critical_line);
        assert_eq!(r.fiber_interval.0, SignedCoordinate::ZERO_PLUS);
        // g(x) = 0 at x = sqrt(1/6); beyond it the orbit leaves the + branch
        assert!((r.fiber_interval.1.value() - libm::sqrt(1.0 / 6.0)).abs() < 1e-9);
    }

    #[test]
    fn basin_preconditions() {
        let m = fixtures::quad(1.0);
        let o = periodic_orbits_for_word(&m, &word("+")).unwrap();
        let on_line = o.iter().find(|r| r.x_star.is_critical()).unwrap();
        assert!(singer_check(&m, on_line, 100).is_err());
        let t = fixtures::tent2();
        let o = &periodic_orbits_for_word(&t, &word("+")).unwrap()[0];
        assert!(singer_check(&t, o, 100).is_err());
    }
}
