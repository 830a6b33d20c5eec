use kneadlab_core::analysis::{self, Classification, DEFAULT_EXPANSION_STEPS};
use kneadlab_core::cantor::{self, cantor_code, psi_extended};
use kneadlab_core::equivalence::{self, BranchWord};
use kneadlab_core::symbolic::{kneading, kneading_equal};
use kneadlab_core::{grid, Branch, CantorMap, Point, SignedCoordinate, ToyModel};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{float_json, Cell, Table};
use crate::{Body, Command, Report};

const CODE_PREFIX: usize = 16;

fn table(t: Table) -> Report {
    Report {
        body: Body::Table(t),
        status: 0,
    }
}

fn positive(value: usize, name: &str) -> Result<usize, CliError> {
    if value == 0 {
        Err(CliError::config(name, "must be at least 1"))
    } else {
        Ok(value)
    }
}

fn unit(value: f64, name: &str) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(CliError::config(name, "must lie in [0, 1]"))
    }
}

fn model(cfg: &RunConfig, flag: &Option<String>, key: &str) -> Result<ToyModel, CliError> {
    let flag_name = format!("--{}", key.replace('_', "-"));
    let name: String = cfg.require(flag.clone(), key, &flag_name)?;
    cfg.resolve_model(&name, &flag_name)
}

fn parse_word(s: &str, name: &str) -> Result<BranchWord, CliError> {
    BranchWord::parse(s)
        .filter(|w| !w.is_empty())
        .ok_or_else(|| CliError::config(name, format!("'{s}' is not a word over '-' and '+'")))
}

fn parse_x(s: &str) -> Result<SignedCoordinate, CliError> {
    let bad = || CliError::config("--x", format!("'{s}' is not a fiber coordinate"));
    match s {
        "0-" => Ok(SignedCoordinate::ZERO_MINUS),
        "0+" => Ok(SignedCoordinate::ZERO_PLUS),
        _ => {
            let v: f64 = s.parse().map_err(|_| bad())?;
            if !(-1.0..=1.0).contains(&v) {
                return Err(bad());
            }
            let side = if v < 0.0 { Branch::Minus } else { Branch::Plus };
            Ok(SignedCoordinate::from_real(v, side))
        }
    }
}

fn real_x(v: f64) -> SignedCoordinate {
    SignedCoordinate::from_real(v, if v < 0.0 { Branch::Minus } else { Branch::Plus })
}

pub fn dispatch(command: &Command, cfg: &RunConfig, explicit_format: bool) -> Result<Report, CliError> {
    match command {
        Command::Validate(a) => {
            let m = model(cfg, &a.model, "model")?;
            let density = positive(cfg.pick(a.grid_density, "grid_density", 64)?, "--grid-density")?;
            let report = m.validate(density)?;
            let mut t = Table::new(&["check", "passed", "residual", "gamma"]);
            for c in &report.checks {
                t.push(vec![c.name.into(), c.passed.into(), c.residual.into(), report.gamma.into()]);
            }
            Ok(Report {
                body: Body::Table(t),
                status: if report.passed { 0 } else { 1 },
            })
        }
        Command::Kneading(a) => {
            let m = model(cfg, &a.model, "model")?;
            let depth = positive(cfg.pick(a.depth, "depth", 32)?, "--depth")?;
            let ys = match cfg.pick_opt(a.y, "y")? {
                None => grid::base_grid(&m.cantor, positive(cfg.pick(a.grid, "grid", 33)?, "--grid")?),
                Some(y) => vec![unit(y, "--y")?],
            };
            let mut t = Table::new(&["y", "side", "depth", "sequence"]);
            for y in ys {
                for side in Branch::BOTH {
                    let k = kneading(&m, y, side, depth)?;
                    t.push(vec![y.into(), side.to_string().into(), depth.into(), k.render().into()]);
                }
            }
            Ok(table(t))
        }
        Command::Equiv(a) => {
            let ma = model(cfg, &a.model_a, "model_a")?;
            let mb = model(cfg, &a.model_b, "model_b")?;
            let depth = positive(cfg.pick(a.depth, "depth", 32)?, "--depth")?;
            let ys = grid::base_grid(&ma.cantor, positive(cfg.pick(a.grid, "grid", 33)?, "--grid")?);
            let v = kneading_equal(&ma, &mb, &ys, depth)?;
            let status = if v.all_equal { 0 } else { 1 };
            if !explicit_format {
                let text = match &v.first_mismatch {
                    None => format!("equivalent to depth {depth}"),
                    Some(m) => format!(
                        "not equivalent: kneading of 0{} at y = {} (psi(y) = {}) differs at index {}: {} vs {}",
                        m.side,
                        crate::format_g17(m.y),
                        crate::format_g17(m.psi_y),
                        m.index,
                        m.symbol_a,
                        m.symbol_b
                    ),
                };
                return Ok(Report {
                    body: Body::Text(text),
                    status,
                });
            }
            let mut t = Table::new(&[
                "equivalent", "depth", "compared", "y", "psi_y", "side", "index", "symbol_a", "symbol_b",
            ]);
            let row = match &v.first_mismatch {
                None => vec![
                    true.into(),
                    depth.into(),
                    v.compared.into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                ],
                Some(m) => vec![
                    false.into(),
                    depth.into(),
                    v.compared.into(),
                    m.y.into(),
                    m.psi_y.into(),
                    m.side.to_string().into(),
                    m.index.into(),
                    m.symbol_a.as_str().into(),
                    m.symbol_b.as_str().into(),
                ],
            };
            t.push(row);
            Ok(Report {
                body: Body::Table(t),
                status,
            })
        }
        Command::Psi(a) => {
            let spec = |pair: &Option<Vec<f64>>, flag: &Option<String>, key: &str| -> Result<CantorMap, CliError> {
                match pair {
                    Some(v) => {
                        let &[x, y] = v.as_slice() else {
                            return Err(CliError::config(format!("--{key}"), "expected a,b"));
                        };
                        if !(0.0 < x && x < y && y < 1.0) {
                            return Err(CliError::config(format!("--{key}"), "need 0 < a < b < 1"));
                        }
                        Ok(CantorMap::affine(x, y))
                    }
                    None => Ok(model(cfg, flag, if key == "from" { "model_a" } else { "model_b" })?.cantor),
                }
            };
            let from = spec(&a.from, &a.model_a, "from")?;
            let to = spec(&a.to, &a.model_b, "to")?;
            let depth = positive(cfg.pick(a.depth, "depth", cantor::PSI_DEPTH)?, "--depth")?;
            let count = positive(cfg.pick(a.grid, "grid", 65)?, "--grid")?;
            let mut t = Table::new(&["y", "psi_y", "certified_width", "code_prefix"]);
            for y in grid::uniform(0.0, 1.0, count) {
                let est = psi_extended(&from, &to, y, depth)?;
                let code = cantor_code(&from, y, depth.min(CODE_PREFIX));
                t.push(vec![y.into(), est.value.into(), est.certified_width.into(), code.digits().into()]);
            }
            Ok(table(t))
        }
        Command::Partition(a) => {
            let m = model(cfg, &a.model, "model")?;
            let y = unit(cfg.pick(a.y, "y", 0.0)?, "--y")?;
            let n = positive(cfg.pick(a.depth, "depth", 4)?, "--depth")?;
            let p = equivalence::preimage_set(&m, y, n)?;
            let mut t = Table::new(&["y", "n", "word", "x"]);
            for q in p.preimages() {
                t.push(vec![y.into(), n.into(), q.label.to_string().into(), q.x.value().into()]);
            }
            Ok(table(t))
        }
        Command::Curve(a) => {
            let m = model(cfg, &a.model, "model")?;
            let word: String = cfg.require(a.word.clone(), "word", "--word")?;
            let word = parse_word(&word, "--word")?;
            let count = positive(cfg.pick(a.grid, "grid", 33)?, "--grid")?;
            let c = equivalence::trace_curve(&m, &word, &grid::uniform(0.0, 1.0, count))?;
            let mut t = Table::new(&["word", "w", "x", "fallback"]);
            for s in &c.samples {
                t.push(vec![word.to_string().into(), s.w.into(), s.x.value().into(), s.fallback.into()]);
            }
            Ok(table(t))
        }
        Command::Conjugacy(a) => {
            let ma = model(cfg, &a.model_a, "model_a")?;
            let mb = model(cfg, &a.model_b, "model_b")?;
            let y = unit(cfg.pick(a.y, "y", 0.0)?, "--y")?;
            let n = positive(cfg.pick(a.depth, "depth", 4)?, "--depth")?;
            let samples = cfg.pick(a.samples, "samples", 33)?;
            let h = equivalence::build_hn(&ma, &mb, y, n)?;
            let mut t = Table::new(&["label", "x_F", "x_G", "psi_y"]);
            for p in &h.pairs {
                t.push(vec![p.label.to_string().into(), p.x_f.value().into(), p.x_g.value().into(), h.psi_y.into()]);
            }
            for x in grid::uniform(-1.0, 1.0, samples) {
                let v = h.interpolate(real_x(x));
                t.push(vec!["pl".into(), x.into(), v.into(), h.psi_y.into()]);
            }
            Ok(table(t))
        }
        Command::Converge(a) => {
            let ma = model(cfg, &a.model_a, "model_a")?;
            let mb = model(cfg, &a.model_b, "model_b")?;
            let n = positive(cfg.pick(a.n, "n", 4)?, "--n")?;
            let m = cfg.pick(a.m, "m", 8)?;
            if m <= n {
                return Err(CliError::config("--m", "must exceed --n"));
            }
            let gx = positive(cfg.pick(a.grid_x, "grid_x", 65)?, "--grid-x")?;
            let gy = positive(cfg.pick(a.grid_y, "grid_y", 9)?, "--grid-y")?;
            let pts = point_grid(gx, gy);
            let est = equivalence::convergence_estimate(&ma, &mb, n, m, &pts)?;
            let (wx, wy) = est.worst.map_or((f64::NAN, f64::NAN), |p| (p.x.value(), p.y));
            let mut t = Table::new(&["n", "m", "sup", "worst_x", "worst_y"]);
            t.push(vec![n.into(), m.into(), est.sup.into(), wx.into(), wy.into()]);
            Ok(table(t))
        }
        Command::Equicont(a) => {
            let m = model(cfg, &a.model, "model")?;
            let n_max = positive(cfg.pick(a.n_max, "n_max", 6)?, "--n-max")?;
            let count = positive(cfg.pick(a.grid, "grid", 17)?, "--grid")?;
            let default = vec![0.0, 1.0 / 64.0, 1.0 / 32.0, 1.0 / 16.0, 0.125, 0.25, 0.5, 1.0];
            let deltas = cfg.pick(a.deltas.clone(), "deltas", default)?;
            if deltas.iter().any(|d| !(*d >= 0.0)) {
                return Err(CliError::config("--deltas", "must be non-negative"));
            }
            let rows = equivalence::equicontinuity_modulus(&m, n_max, &deltas, &grid::uniform(0.0, 1.0, count))?;
            let mut t = Table::new(&["delta", "modulus"]);
            for r in rows {
                t.push(vec![r.delta.into(), r.modulus.into()]);
            }
            Ok(table(t))
        }
        Command::Density(a) => {
            let m = model(cfg, &a.model, "model")?;
            let y = unit(cfg.pick(a.y, "y", 0.0)?, "--y")?;
            let depths = cfg.pick(a.depths.clone(), "depths", (1..=12).collect::<Vec<usize>>())?;
            for &d in &depths {
                positive(d, "--depths")?;
            }
            let mut t = Table::new(&["n", "max_gap", "points"]);
            for r in equivalence::density_report(&m, y, &depths)? {
                t.push(vec![r.n.into(), r.max_gap.into(), r.points.into()]);
            }
            Ok(table(t))
        }
        Command::Orbits(a) => {
            let m = model(cfg, &a.model, "model")?;
            let m_max = positive(cfg.pick(a.m_max, "m_max", 3)?, "--m-max")?;
            let mut t = Table::new(&["word", "period", "y_star", "x_star", "A", "D", "classification"]);
            for o in analysis::find_periodic_orbits(&m, m_max)? {
                t.push(vec![
                    o.word.to_string().into(),
                    o.period().into(),
                    o.y_star.into(),
                    o.x_star.value().into(),
                    o.multiplier_a.into(),
                    o.multiplier_d.into(),
                    o.classification.as_str().into(),
                ]);
            }
            Ok(table(t))
        }
        Command::Singer(a) => {
            let m = model(cfg, &a.model, "model")?;
            let m_max = positive(cfg.pick(a.m_max, "m_max", 3)?, "--m-max")?;
            let steps = positive(cfg.pick(a.expansion_steps, "expansion_steps", DEFAULT_EXPANSION_STEPS)?, "--expansion-steps")?;
            let word: Option<String> = cfg.pick_opt(a.word.clone(), "word")?;
            let orbits = match &word {
                Some(w) => analysis::periodic_orbits_for_word(&m, &parse_word(w, "--word")?)?,
                None => analysis::find_periodic_orbits(&m, m_max)?,
            };
            let mut t = Table::new(&[
                "word", "y_star", "x_star", "a_x", "b_x", "touches", "probes", "failed_probes", "inconclusive",
            ]);
            let mut docs = Vec::new();
            let mut status = 0;
            for o in orbits.iter().filter(|o| o.classification == Classification::StronglyAttracting) {
                let r = analysis::singer_check(&m, o, steps)?;
                let mut touches = Vec::new();
                if r.touches.critical_line {
                    touches.push("critical_line");
                }
                if r.touches.boundary {
                    touches.push("boundary");
                }
                if touches.is_empty() || r.inconclusive {
                    status = 1;
                }
                let (lo, hi) = r.fiber_interval;
                t.push(vec![
                    o.word.to_string().into(),
                    o.y_star.into(),
                    o.x_star.value().into(),
                    Cell::Str(coordinate(lo)),
                    Cell::Str(coordinate(hi)),
                    touches.join(";").into(),
                    r.probes.into(),
                    r.failed_probes.into(),
                    r.inconclusive.into(),
                ]);
                docs.push(json!({
                    "word": o.word.to_string(),
                    "y_star": float_json(o.y_star),
                    "x_star": float_json(o.x_star.value()),
                    "multiplier_a": float_json(o.multiplier_a),
                    "interval": [coordinate_json(lo), coordinate_json(hi)],
                    "touches": touches,
                    "probes": {
                        "count": r.probes,
                        "failed": r.failed_probes,
                        "inconclusive": r.inconclusive,
                        "expansion_steps": steps,
                    },
                }));
            }
            t.json = Some(Value::Array(docs));
            Ok(Report {
                body: Body::Table(t),
                status,
            })
        }
        Command::Cocycle(a) => {
            let m = model(cfg, &a.model, "model")?;
            let x: String = cfg.require(a.x.clone(), "x", "--x")?;
            let x = parse_x(&x)?;
            let y = unit(cfg.require(a.y, "y", "--y")?, "--y")?;
            let steps: usize = cfg.pick(a.m, "m", 1)?;
            let e = analysis::cocycle(&m, Point::new(x, y), steps)?;
            let mut t = Table::new(&["x", "y", "m", "A", "B", "D", "critical_hit"]);
            t.push(vec![
                Cell::Str(coordinate(x)),
                y.into(),
                steps.into(),
                e.a.into(),
                e.b.into(),
                e.d.into(),
                e.critical_hit.into(),
            ]);
            Ok(table(t))
        }
    }
}

/// `0-`/`0+` for turning points, the number otherwise.
fn coordinate(x: SignedCoordinate) -> String {
    if x.is_critical() {
        x.to_string()
    } else {
        crate::format_g17(x.value())
    }
}

fn coordinate_json(x: SignedCoordinate) -> Value {
    if x.is_critical() {
        Value::String(x.to_string())
    } else {
        float_json(x.value())
    }
}

/// `gx` cell midpoints of `[-1, 1]` on each of `gy` uniform fibers.
fn point_grid(gx: usize, gy: usize) -> Vec<Point> {
    let xs = grid::midpoints(-1.0, 1.0, gx);
    grid::uniform(0.0, 1.0, gy)
        .into_iter()
        .flat_map(|y| xs.iter().map(move |&x| Point::new(real_x(x), y)))
        .collect()
}
