//! Labeled turning-point preimages and the finite-depth combinatorial
//! equivalence between two toy models.
//!
//! On a fiber `y` the set `𝒞ₙ(y)` holds every point whose orbit meets the
//! critical line within `n - 1` steps. A point that reaches it after `k ≥ 1`
//! steps is labeled by the branch word `j₁…jₖ` it follows, and lands on
//! `0^{jₖ}`; the turning points themselves carry the labels `0⁻`, `0⁺`.
//! Points are produced by pulling the turning point back through the branch
//! inverses along the forward base orbit `y, K_{j₁}(y), …`.
//!
//! When two models have the same kneading sequences, identically labeled
//! points on the fibers `y` and `ψ(y)` appear in the same order. Pairing
//! them gives `Hₙ`, and interpolating the pairing linearly gives `H̃ₙ`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::cantor::{psi_extended, PSI_DEPTH};
use crate::coord::{Branch, Point, SignedCoordinate};
use crate::hausdorff::hausdorff_distance;
use crate::model::{ToyModel, UnimodalFamily};
use crate::symbolic::kneading;
use crate::{Error, Result};

/// A finite word over `{-, +}`, compared lexicographically with `- < +`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchWord(pub Vec<Branch>);

impl BranchWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Branch] {
        &self.0
    }

    pub fn parse(s: &str) -> Option<Self> {
        let letters = s.chars().map(Branch::from_char).collect::<Option<Vec<_>>>()?;
        Some(Self(letters))
    }

    /// Tail `j₂…jₖ`.
    pub fn tail(&self) -> BranchWord {
        BranchWord(self.0.get(1..).unwrap_or_default().to_vec())
    }

    /// Shorter words first, then lexicographic.
    fn preference_key(&self) -> (usize, &[Branch]) {
        (self.0.len(), &self.0)
    }
}

impl fmt::Display for BranchWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in &self.0 {
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

/// Label of a point of a fiber partition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// The fiber endpoints `-1` and `1`; not part of `𝒞ₙ`.
    Boundary(Branch),
    /// The turning point `0^side` itself.
    Critical(Branch),
    /// A preimage reaching the critical line along this word.
    Word(BranchWord),
}

impl Label {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "-1" => Some(Label::Boundary(Branch::Minus)),
            "1" | "+1" => Some(Label::Boundary(Branch::Plus)),
            "0-" => Some(Label::Critical(Branch::Minus)),
            "0+" => Some(Label::Critical(Branch::Plus)),
            _ => BranchWord::parse(s).filter(|w| !w.is_empty()).map(Label::Word),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Boundary(Branch::Minus) => f.write_str("-1"),
            Label::Boundary(Branch::Plus) => f.write_str("1"),
            Label::Critical(side) => write!(f, "0{side}"),
            Label::Word(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPreimage {
    pub label: Label,
    pub x: SignedCoordinate,
    pub y: f64,
}

/// The points of `𝒞ₙ(y)` in increasing order, framed by the boundary
/// markers `-1` and `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberPartition {
    pub y: f64,
    pub n: usize,
    pub points: Vec<LabeledPreimage>,
}

impl FiberPartition {
    /// Points of `𝒞ₙ(y)`, without the boundary markers.
    pub fn preimages(&self) -> impl Iterator<Item = &LabeledPreimage> {
        self.points
            .iter()
            .filter(|p| !matches!(p.label, Label::Boundary(_)))
    }

    /// The intervals of the partition, as index pairs into `points`. The
    /// pair `(0⁻, 0⁺)` is not an interval: the two sides of the turning
    /// point are separate components of the fiber.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        (0..self.points.len().saturating_sub(1))
            .filter(|&i| {
                !(self.points[i].label == Label::Critical(Branch::Minus)
                    && self.points[i + 1].label == Label::Critical(Branch::Plus))
            })
            .map(|i| (i, i + 1))
            .collect()
    }

    /// Length of the longest interval.
    pub fn max_gap(&self) -> f64 {
        self.intervals()
            .into_iter()
            .map(|(i, k)| self.points[k].x.value() - self.points[i].x.value())
            .fold(0.0, f64::max)
    }

    /// Sorted, deduplicated `x`-projection of `𝒞ₙ(y)`.
    pub fn x_values(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.preimages().map(|p| p.x.value()).collect();
        xs.dedup();
        xs
    }

    pub fn get(&self, label: &Label) -> Option<&LabeledPreimage> {
        self.points.iter().find(|p| &p.label == label)
    }

    /// The partition at a smaller depth `m ≤ n`.
    pub fn truncate(&self, m: usize) -> FiberPartition {
        FiberPartition {
            y: self.y,
            n: m,
            points: self
                .points
                .iter()
                .filter(|p| match &p.label {
                    Label::Word(w) => w.len() < m,
                    _ => true,
                })
                .cloned()
                .collect(),
        }
    }
}

/// Labeled preimages `(word, x)` on fiber `y` for words of length
/// `1..=max_len`, built from the fiber `K_j(y)` one level down.
fn word_preimages<F: UnimodalFamily>(
    model: &ToyModel<F>,
    y: f64,
    max_len: usize,
) -> Vec<(Vec<Branch>, f64)> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    for j in Branch::BOTH {
        let below = word_preimages(model, model.cantor.inverse(j, y), max_len - 1);
        let targets = core::iter::once((Vec::new(), 0.0)).chain(below);
        for (tail, target) in targets {
            // None: target outside the branch image. A critical result means
            // the chain meets the critical line earlier, under a shorter word.
            match model.try_branch_inverse(j, target, y) {
                Some(x) if !x.is_critical() => {
                    let mut word = Vec::with_capacity(tail.len() + 1);
                    word.push(j);
                    word.extend(tail);
                    out.push((word, x.value()));
                }
                _ => {}
            }
        }
    }
    out
}

/// `𝒞ₙ(y)` with labels, framed by the fiber endpoints.
pub fn preimage_set<F: UnimodalFamily>(model: &ToyModel<F>, y: f64, n: usize) -> Result<FiberPartition> {
    if n == 0 {
        return Err(Error::InvalidInput("partition depth must be at least 1"));
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::InvalidInput("base coordinate outside [0, 1]"));
    }
    let mut raw = word_preimages(model, y, n - 1);
    raw.sort_by(|a, b| a.1.total_cmp(&b.1));

    let dedup_tol = 10.0 * model.tol.root_tol;
    let mut merged: Vec<(BranchWord, f64)> = Vec::with_capacity(raw.len());
    for (word, x) in raw {
        let word = BranchWord(word);
        match merged.last_mut() {
            Some(last) if (x - last.1).abs() <= dedup_tol => {
                if word.preference_key() < last.0.preference_key() {
                    *last = (word, x);
                }
            }
            _ => merged.push((word, x)),
        }
    }

    let mut points = Vec::with_capacity(merged.len() + 4);
    let at = |label, x| LabeledPreimage { label, x, y };
    points.push(at(Label::Boundary(Branch::Minus), SignedCoordinate::from_real(-1.0, Branch::Minus)));
    let split = merged.partition_point(|(_, x)| *x < 0.0);
    for (word, x) in &merged[..split] {
        points.push(at(Label::Word(word.clone()), SignedCoordinate::from_real(*x, Branch::Minus)));
    }
    points.push(at(Label::Critical(Branch::Minus), SignedCoordinate::ZERO_MINUS));
    points.push(at(Label::Critical(Branch::Plus), SignedCoordinate::ZERO_PLUS));
    for (word, x) in &merged[split..] {
        points.push(at(Label::Word(word.clone()), SignedCoordinate::from_real(*x, Branch::Plus)));
    }
    points.push(at(Label::Boundary(Branch::Plus), SignedCoordinate::from_real(1.0, Branch::Plus)));
    Ok(FiberPartition { y, n, points })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TablePair {
    pub label: Label,
    pub x_f: SignedCoordinate,
    pub x_g: SignedCoordinate,
}

/// `Hₙ(y)`: identically labeled points of `𝒞ₙ^F(y)` and `𝒞ₙ^G(ψ(y))`,
/// ordered by `x_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyTable {
    pub y: f64,
    pub psi_y: f64,
    pub n: usize,
    pub pairs: Vec<TablePair>,
}

impl ConjugacyTable {
    /// `H̃ₙ(y)(x)`: linear between consecutive table points on each side of
    /// the turning point, with `±1 ↦ ±1`.
    pub fn interpolate(&self, x: SignedCoordinate) -> f64 {
        let side = x.branch();
        let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(self.pairs.len() + 1);
        if side == Branch::Minus {
            nodes.push((-1.0, -1.0));
        }
        nodes.extend(
            self.pairs
                .iter()
                .filter(|p| p.x_f.branch() == side)
                .map(|p| (p.x_f.value(), p.x_g.value())),
        );
        if side == Branch::Plus {
            nodes.push((1.0, 1.0));
        }
        let v = x.value();
        let i = nodes.partition_point(|&(xf, _)| xf < v);
        if i < nodes.len() && nodes[i].0 == v {
            return nodes[i].1;
        }
        if i == 0 {
            return nodes[0].1;
        }
        if i == nodes.len() {
            return nodes[i - 1].1;
        }
        let (x0, g0) = nodes[i - 1];
        let (x1, g1) = nodes[i];
        g0 + (v - x0) / (x1 - x0) * (g1 - g0)
    }

    pub fn get(&self, label: &Label) -> Option<&TablePair> {
        self.pairs.iter().find(|p| &p.label == label)
    }
}

/// Builds `Hₙ(y)` between `F` and `G`.
///
/// Fails with a combinatorial-inequivalence error when the label sets
/// differ, when the pairing is not strictly increasing, or when the
/// kneading sequences on the fiber differ to depth `n`.
pub fn build_hn<F: UnimodalFamily, G: UnimodalFamily>(
    f: &ToyModel<F>,
    g: &ToyModel<G>,
    y: f64,
    n: usize,
) -> Result<ConjugacyTable> {
    let psi_y = psi_extended(&f.cantor, &g.cantor, y, PSI_DEPTH)?.value;
    let pf = preimage_set(f, y, n)?;
    let pg = preimage_set(g, psi_y, n)?;
    table_from_partitions(f, g, &pf, &pg, psi_y)
}

fn table_from_partitions<F: UnimodalFamily, G: UnimodalFamily>(
    f: &ToyModel<F>,
    g: &ToyModel<G>,
    pf: &FiberPartition,
    pg: &FiberPartition,
    psi_y: f64,
) -> Result<ConjugacyTable> {
    let g_points: BTreeMap<&Label, SignedCoordinate> = pg.preimages().map(|p| (&p.label, p.x)).collect();
    let mut pairs = Vec::with_capacity(g_points.len());
    for p in pf.preimages() {
        match g_points.get(&p.label) {
            Some(&x_g) => pairs.push(TablePair {
                label: p.label.clone(),
                x_f: p.x,
                x_g,
            }),
            None => return Err(Error::LabelMismatch { label: p.label.to_string() }),
        }
    }
    if pairs.len() != g_points.len() {
        let f_labels: BTreeMap<&Label, ()> = pf.preimages().map(|p| (&p.label, ())).collect();
        let missing = g_points
            .keys()
            .find(|l| !f_labels.contains_key(*l))
            .map(|l| l.to_string())
            .unwrap_or_default();
        return Err(Error::LabelMismatch { label: missing });
    }
    for w in pairs.windows(2) {
        if w[1].x_g <= w[0].x_g {
            return Err(Error::OrderMismatch {
                label: w[1].label.to_string(),
            });
        }
    }
    for side in Branch::BOTH {
        let kf = kneading(f, pf.y, side, pf.n)?;
        let kg = kneading(g, psi_y, side, pf.n)?;
        if let Some(index) = (0..pf.n).find(|&i| kf.symbols[i] != kg.symbols[i]) {
            return Err(Error::KneadingMismatch { y: pf.y, side, index });
        }
    }
    Ok(ConjugacyTable {
        y: pf.y,
        psi_y,
        n: pf.n,
        pairs,
    })
}

/// `H̃ₙ(y)(x)`.
pub fn pl_conjugacy<F: UnimodalFamily, G: UnimodalFamily>(
    f: &ToyModel<F>,
    g: &ToyModel<G>,
    y: f64,
    n: usize,
    x: SignedCoordinate,
) -> Result<f64> {
    Ok(build_hn(f, g, y, n)?.interpolate(x))
}

/// Caches `Hₙ` tables by fiber.
struct TableCache<'a, F, G> {
    f: &'a ToyModel<F>,
    g: &'a ToyModel<G>,
    n: usize,
    tables: BTreeMap<u64, ConjugacyTable>,
}

impl<'a, F: UnimodalFamily, G: UnimodalFamily> TableCache<'a, F, G> {
    fn new(f: &'a ToyModel<F>, g: &'a ToyModel<G>, n: usize) -> Self {
        Self {
            f,
            g,
            n,
            tables: BTreeMap::new(),
        }
    }

    fn table(&mut self, y: f64) -> Result<&ConjugacyTable> {
        let key = y.to_bits();
        if !self.tables.contains_key(&key) {
            let t = build_hn(self.f, self.g, y, self.n)?;
            self.tables.insert(key, t);
        }
        Ok(&self.tables[&key])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupDifference {
    pub sup: f64,
    pub worst: Option<Point>,
}

/// `sup |H̃ₙ - H̃ₘ|` over a grid of points.
pub fn convergence_estimate<F: UnimodalFamily, G: UnimodalFamily>(
    f: &ToyModel<F>,
    g: &ToyModel<G>,
    n: usize,
    m: usize,
    grid: &[Point],
) -> Result<SupDifference> {
    if !(m > n && n >= 1) {
        return Err(Error::InvalidInput("convergence estimate needs m > n >= 1"));
    }
    let mut coarse = TableCache::new(f, g, n);
    let mut fine = TableCache::new(f, g, m);
    let mut out = SupDifference { sup: 0.0, worst: None };
    for p in grid {
        let a = coarse.table(p.y)?.interpolate(p.x);
        let b = fine.table(p.y)?.interpolate(p.x);
        let d = (a - b).abs();
        if out.worst.is_none() || d > out.sup {
            out = SupDifference { sup: d, worst: Some(*p) };
        }
    }
    Ok(out)
}

/// `sup |H̃ₙ(F(p)) - G(H̃ₙ(p))|` in the fiber coordinate, over a grid.
pub fn semiconjugacy_residual<F: UnimodalFamily, G: UnimodalFamily>(
    f: &ToyModel<F>,
    g: &ToyModel<G>,
    n: usize,
    grid: &[Point],
) -> Result<SupDifference> {
    let mut tables = TableCache::new(f, g, n);
    let mut out = SupDifference { sup: 0.0, worst: None };
    for p in grid {
        let (h_x, psi_y) = {
            let t = tables.table(p.y)?;
            (t.interpolate(p.x), t.psi_y)
        };
        let side = p.x.branch();
        let g_image = g.family.eval(psi_y, h_x);
        let fp = f.eval_step(*p);
        let h_fp = tables.table(fp.y)?.interpolate(fp.x);
        let _ = side;
        let d = (h_fp - g_image).abs();
        if out.worst.is_none() || d > out.sup {
            out = SupDifference { sup: d, worst: Some(*p) };
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub w: f64,
    pub x: SignedCoordinate,
    /// Some inverse along the word did not exist and the `0^j` fallback
    /// was used.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreimageCurve {
    pub word: BranchWord,
    pub samples: Vec<CurveSample>,
}

/// `w ↦ ξ_{j₁}(ξ_{j₂}(⋯ξ_{jₖ}(0, w_{jₖ₋₁⋯j₁})⋯, w_{j₁}), w)`, the curve of
/// points labeled by `word` across fibers.
pub fn trace_curve<F: UnimodalFamily>(
    model: &ToyModel<F>,
    word: &BranchWord,
    w_grid: &[f64],
) -> Result<PreimageCurve> {
    if word.is_empty() {
        return Err(Error::InvalidInput("curve word must be non-empty"));
    }
    let samples = w_grid
        .iter()
        .map(|&w| {
            let mut fibers = Vec::with_capacity(word.len());
            let mut v = w;
            for &j in word.letters() {
                fibers.push(v);
                v = model.cantor.inverse(j, v);
            }
            let mut x = 0.0;
            let mut fallback = false;
            let mut last = SignedCoordinate::ZERO_PLUS;
            for (&j, &fy) in word.letters().iter().zip(fibers.iter()).rev() {
                last = match model.try_branch_inverse(j, x, fy) {
                    Some(p) => p,
                    None => {
                        fallback = true;
                        SignedCoordinate::zero(j)
                    }
                };
                x = last.value();
            }
            CurveSample { w, x: last, fallback }
        })
        .collect();
    Ok(PreimageCurve {
        word: word.clone(),
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusRow {
    pub delta: f64,
    pub modulus: f64,
}

/// For each `δ`, the largest Hausdorff distance between the `x`-projections
/// of `𝒞ₙ(y₁)` and `𝒞ₙ(y₂)` over grid pairs with `|y₁ - y₂| ≤ δ` and
/// `1 ≤ n ≤ n_max`.
pub fn equicontinuity_modulus<F: UnimodalFamily>(
    model: &ToyModel<F>,
    n_max: usize,
    delta_grid: &[f64],
    y_grid: &[f64],
) -> Result<Vec<ModulusRow>> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1"));
    }
    let deepest: Vec<FiberPartition> = y_grid
        .iter()
        .map(|&y| preimage_set(model, y, n_max))
        .collect::<Result<_>>()?;
    let projections: Vec<Vec<Vec<f64>>> = deepest
        .iter()
        .map(|p| (1..=n_max).map(|n| p.truncate(n).x_values()).collect())
        .collect();
    // pair distance: max over n
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for i in 0..y_grid.len() {
        for k in i + 1..y_grid.len() {
            let d = (0..n_max)
                .map(|n| hausdorff_distance(&projections[i][n], &projections[k][n]))
                .fold(0.0, f64::max);
            pairs.push(((y_grid[i] - y_grid[k]).abs(), d));
        }
    }
    Ok(delta_grid
        .iter()
        .map(|&delta| ModulusRow {
            delta,
            modulus: pairs
                .iter()
                .filter(|(dy, _)| *dy <= delta)
                .map(|&(_, d)| d)
                .fold(0.0, f64::max),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRow {
    pub n: usize,
    pub max_gap: f64,
    pub points: usize,
}

/// Largest interval of `𝒫ₙ(y)` for each requested depth.
pub fn density_report<F: UnimodalFamily>(model: &ToyModel<F>, y: f64, n_list: &[usize]) -> Result<Vec<GapRow>> {
    let Some(&deepest) = n_list.iter().max() else {
        return Ok(Vec::new());
    };
    let full = preimage_set(model, y, deepest.max(1))?;
    n_list
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::InvalidInput("partition depth must be at least 1"));
            }
            let p = full.truncate(n);
            Ok(GapRow {
                n,
                max_gap: p.max_gap(),
                points: p.preimages().count(),
            })
        })
        .collect()
}

/// Renders a partition's word labels, e.g. for diagnostics.
pub fn label_list(p: &FiberPartition) -> Vec<String> {
    p.points.iter().map(|q| q.label.to_string()).collect()
}
