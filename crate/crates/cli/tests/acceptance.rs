//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::Command;

use kneadlab_core::analysis::{
    cocycle, find_periodic_orbits, jacobian_fd, minimum_principle_check, negative_schwarzian_gate,
    schwarzian, schwarzian_composition_check, singer_check, Classification, DEFAULT_EXPANSION_STEPS,
};
use kneadlab_core::cantor::{psi_extended, verify_psi_conjugacy};
use kneadlab_core::equivalence::{build_hn, density_report, preimage_set, semiconjugacy_residual, BranchWord, Label};
use kneadlab_core::{fixtures, grid, Branch, CantorMap, Error, Point, SignedCoordinate, ToyModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kneadlab"))
}

fn criterion_1() -> Outcome {
    let pairs = [("example3-q", "example3-f"), ("example3-f", "example3-g"), ("example3-g", "example3-q")];
    for (a, b) in pairs {
        let out = bin()
            .args(["equiv", "--model-a", a, "--model-b", b, "--depth", "32", "--grid", "33"])
            .output()
            .map_err(|e| e.to_string())?;
        let text = String::from_utf8_lossy(&out.stdout);
        ensure(out.status.code() == Some(0) && text.trim() == "equivalent to depth 32", || {
            format!("equiv {a} {b}: exit {:?}, output {text:?}", out.status.code())
        })?;
        let (ma, mb) = (fixtures::by_name(a).unwrap(), fixtures::by_name(b).unwrap());
        for y in [0.0, 0.25, 0.5, 2.0 / 3.0, 1.0] {
            for n in 1..=6 {
                let t = build_hn(&ma, &mb, y, n).map_err(|e| format!("build_Hn {a} {b} y={y} n={n}: {e}"))?;
                let monotone = t.pairs.windows(2).all(|w| w[0].x_f < w[1].x_f && w[0].x_g < w[1].x_g);
                ensure(monotone, || format!("pairing not monotone for {a} {b} y={y} n={n}"))?;
            }
        }
    }
    Ok("3 pairs equivalent to depth 32; H_n monotone for n = 1..6 on 5 fibers".into())
}

fn criterion_2() -> Outcome {
    let mut seen = Vec::new();
    for (name, expect) in [("example3-q", 0.0), ("example3-f", 1.0), ("example3-g", f64::INFINITY)] {
        let m = fixtures::by_name(name).unwrap();
        let orbits = find_periodic_orbits(&m, 1).map_err(|e| e.to_string())?;
        let at_turn: Vec<_> = orbits.iter().filter(|o| o.x_star.is_critical()).collect();
        ensure(at_turn.len() == 2, || format!("{name}: expected 0- and 0+ fixed points, found {}", at_turn.len()))?;
        for o in at_turn {
            let a = o.multiplier_a.abs();
            ensure(o.classification == Classification::OnCriticalLine, || format!("{name}: not flagged"))?;
            let ok = if expect.is_infinite() { a > 1e6 } else { a == expect };
            ensure(ok, || format!("{name} word {}: |A| = {a}", o.word))?;
            seen.push(a);
        }
    }
    Ok(format!("|A| at turning point: q = {}, f = {}, g = {}", seen[0], seen[2], seen[4]))
}

fn criterion_3() -> Outcome {
    let (f, g) = (CantorMap::middle_thirds(), CantorMap::affine(0.25, 0.5));
    let ys = grid::uniform(0.0, 1.0, 65);
    let r = verify_psi_conjugacy(&f, &g, &ys, 40).map_err(|e| e.to_string())?;
    ensure(r.max_residual < 1e-9, || format!("residual {}", r.max_residual))?;
    let psi: Vec<f64> = ys
        .iter()
        .map(|&y| psi_extended(&f, &g, y, 40).map(|p| p.value))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(psi.windows(2).all(|w| w[0] < w[1]), || "psi not strictly increasing".into())?;
    ensure(psi[0] == 0.0 && psi[64] == 1.0, || format!("psi(0) = {}, psi(1) = {}", psi[0], psi[64]))?;
    Ok(format!("residual {:.3e}, strictly increasing, exact endpoints", r.max_residual))
}

fn word_tail_shift(m: &ToyModel, y: f64, n: usize) -> Result<(), String> {
    let part = preimage_set(m, y, n).map_err(|e| e.to_string())?;
    for p in part.preimages() {
        let Label::Word(w) = &p.label else { continue };
        let image = m.eval_step(Point::new(p.x, y));
        let j = w.letters()[0];
        if w.len() == 1 {
            ensure(image.x.value().abs() < 1e-9, || format!("{w} at y={y} maps to {}", image.x))?;
            continue;
        }
        let below = preimage_set(m, m.cantor.inverse(j, y), n).map_err(|e| e.to_string())?;
        let target = below
            .get(&Label::Word(w.tail()))
            .ok_or_else(|| format!("tail of {w} missing at y={y}"))?;
        ensure((image.x.value() - target.x.value()).abs() < 1e-9 && image.y == target.y, || {
            format!("{w} at y={y}: image {} vs tail point {}", image.x, target.x)
        })?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let (t, q) = (fixtures::tent2(), fixtures::quad(2.0));
    for y in [0.0, 0.3, 0.75] {
        let h = build_hn(&t, &q, y, 2).map_err(|e| e.to_string())?;
        for (word, xf, xg) in [("-", -0.5, -FRAC_1_SQRT_2), ("+", 0.5, FRAC_1_SQRT_2)] {
            let p = h
                .get(&Label::Word(BranchWord::parse(word).unwrap()))
                .ok_or_else(|| format!("label {word} missing"))?;
            ensure((p.x_f.value() - xf).abs() < 1e-9 && (p.x_g.value() - xg).abs() < 1e-9, || {
                format!("pair {word}: {} <-> {}", p.x_f, p.x_g)
            })?;
        }
    }
    for m in [&t, &q] {
        for y in [0.0, 0.2, 0.5, 0.9, 1.0] {
            word_tail_shift(m, y, 6)?;
        }
    }
    let xs = grid::midpoints(-1.0, 1.0, 65);
    let pts: Vec<Point> = grid::uniform(0.0, 1.0, 9)
        .into_iter()
        .flat_map(|y| {
            xs.iter().map(move |&x| {
                Point::new(SignedCoordinate::from_real(x, if x < 0.0 { Branch::Minus } else { Branch::Plus }), y)
            })
        })
        .collect();
    let residuals: Vec<f64> = [2, 4, 6, 8]
        .iter()
        .map(|&n| semiconjugacy_residual(&t, &q, n, &pts).map(|r| r.sup))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(residuals.windows(2).all(|w| w[1] < w[0]), || format!("residuals {residuals:?}"))?;
    Ok(format!(
        "n=2 pairs exact; tail shift to depth 6; residuals {}",
        residuals.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join(" > ")
    ))
}

fn criterion_5() -> Outcome {
    let m = fixtures::coupled();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_517);
    let mut points = Vec::new();
    while points.len() < 20 {
        let x: f64 = rng.gen_range(-0.95..0.95);
        let y: f64 = rng.gen_range(0.0..1.0);
        let p = Point::real(x, y);
        let clean = (1..=3).all(|k| !jacobian_fd(&m, p, k, 1e-6).unwrap().cell_violation);
        if x.abs() > 0.05 && clean {
            points.push(p);
        }
    }
    let mut worst_rel = 0.0_f64;
    let mut worst_chain = 0.0_f64;
    for &p in &points {
        for k in 1..=3 {
            let e = cocycle(&m, p, k).map_err(|e| e.to_string())?;
            let fd = jacobian_fd(&m, p, k, 1e-6).map_err(|e| e.to_string())?;
            for (exact, approx) in [(e.a, fd.matrix[0][0]), (e.b, fd.matrix[0][1]), (e.d, fd.matrix[1][1])] {
                worst_rel = worst_rel.max((exact - approx).abs() / exact.abs().max(1e-6));
            }
            // the base factor is exactly 1/3 per step for this Cantor map;
            // the bound is checked up to rounding of 1/3 and 1 - 2/3
            let bound = 3f64.powi(-(k as i32));
            ensure(e.d.abs() <= bound * (1.0 + 1e-12), || format!("|D^{k}| = {} > {bound}", e.d.abs()))?;
        }
        for a in 0..=4 {
            for b in 0..=4 {
                let whole = cocycle(&m, p, a + b).map_err(|e| e.to_string())?;
                let first = cocycle(&m, p, a).map_err(|e| e.to_string())?;
                let q = m.eval_orbit(p, a).points[a];
                let second = cocycle(&m, q, b).map_err(|e| e.to_string())?;
                let c = second.compose(&first);
                for (u, v) in [(whole.a, c.a), (whole.b, c.b), (whole.d, c.d)] {
                    worst_chain = worst_chain.max((u - v).abs());
                }
            }
        }
    }
    ensure(worst_rel < 1e-5, || format!("relative error {worst_rel:.3e}"))?;
    ensure(worst_chain < 1e-9, || format!("chain rule residual {worst_chain:.3e}"))?;
    Ok(format!("FD relative error {worst_rel:.3e}, chain rule residual {worst_chain:.3e}, |D^m| <= 3^-m"))
}

fn criterion_6() -> Outcome {
    let xs: Vec<f64> = grid::uniform(-1.0, 1.0, 65).into_iter().filter(|&x| x != 0.0).collect();
    let mut worst = 0.0_f64;
    for m in [fixtures::quad(0.8), fixtures::quad(1.2), fixtures::quad(2.0), fixtures::coupled()] {
        for y in [0.0, 0.5, 1.0] {
            for &x in &xs {
                let s = schwarzian(&m.family, y, x).map_err(|e| e.to_string())?;
                worst = worst.max((s + 1.5 / (x * x)).abs());
            }
        }
    }
    ensure(worst < 1e-9, || format!("Schwarzian deviates by {worst:.3e}"))?;
    let mut comp = 0.0_f64;
    for (m, word, y) in [
        (fixtures::quad(1.2), "++", 0.3),
        (fixtures::coupled(), "-+-", 0.8),
        (fixtures::coupled(), "++++", 0.1),
    ] {
        let mut chain = Vec::new();
        let mut v = y;
        for j in BranchWord::parse(word).unwrap().letters() {
            chain.push(v);
            v = m.cantor.inverse(*j, v);
        }
        comp = comp.max(schwarzian_composition_check(&m.family, &chain, &grid::uniform(-1.0, 1.0, 33)).map_err(|e| e.to_string())?);
    }
    ensure(comp < 1e-8, || format!("composition residual {comp:.3e}"))?;
    let ys = grid::uniform(0.0, 1.0, 9);
    let tent_gate = negative_schwarzian_gate(&fixtures::tent2().family, &ys, 65).map_err(|e| e.to_string())?;
    ensure(!tent_gate.passed, || "tent passed the negative-Schwarzian gate".into())?;
    let quad_gate = negative_schwarzian_gate(&fixtures::quad(1.2).family, &ys, 65).map_err(|e| e.to_string())?;
    ensure(quad_gate.passed, || "quadratic failed the negative-Schwarzian gate".into())?;
    Ok(format!("max |S + 3/(2x^2)| = {worst:.3e}, composition residual {comp:.3e}, tent gate fails"))
}

fn criterion_7() -> Outcome {
    let mut summary = Vec::new();
    for c in [0.8, 1.2, 1.4] {
        let m = fixtures::quad(c);
        let orbits = find_periodic_orbits(&m, 3).map_err(|e| e.to_string())?;
        let attracting: Vec<_> = orbits
            .iter()
            .filter(|o| o.classification == Classification::StronglyAttracting)
            .collect();
        ensure(!attracting.is_empty(), || format!("c={c}: no strongly attracting orbit"))?;
        for o in attracting {
            let r = singer_check(&m, o, DEFAULT_EXPANSION_STEPS).map_err(|e| e.to_string())?;
            ensure(r.touches.any() && !r.inconclusive, || format!("c={c} word {}: {:?}", o.word, r.touches))?;
            if c == 1.2 {
                let (lo, hi) = r.fiber_interval;
                ensure(lo.value() <= 0.0 && 0.0 <= hi.value(), || format!("c=1.2 closure ({lo}, {hi}) misses 0"))?;
            }
            summary.push(format!("c={c} {}: [{}, {}]", o.word, r.fiber_interval.0, r.fiber_interval.1));
        }
    }
    Ok(summary.join("; "))
}

fn criterion_8() -> Outcome {
    let m = fixtures::quad(1.2);
    let plus = BranchWord::parse("+").unwrap();
    let v = minimum_principle_check(&m, &plus, 0.0, (0.2, 0.6), 65).map_err(|e| e.to_string())?;
    ensure(v.holds, || format!("{v:?}"))?;
    match minimum_principle_check(&m, &plus, 0.0, (-0.1, 0.6), 65) {
        Err(Error::Precondition(_)) => {}
        other => return Err(format!("interval containing 0: {other:?}")),
    }
    Ok(format!("holds on [0.2, 0.6] (endpoint min {:.2}); precondition failure across 0", v.endpoint_min))
}

fn criterion_9() -> Outcome {
    let depths: Vec<usize> = (1..=12).collect();
    for y in [0.0, 0.4, 1.0] {
        for r in density_report(&fixtures::tent2(), y, &depths).map_err(|e| e.to_string())? {
            let bound = 2.0 * 0.5f64.powi(r.n as i32) + 1e-9;
            ensure(r.max_gap <= bound, || format!("tent y={y} n={}: gap {}", r.n, r.max_gap))?;
        }
    }
    let f = density_report(&fixtures::example3_f(), 0.4, &depths).map_err(|e| e.to_string())?;
    Ok(format!("tent gaps within 2^(1-n); example3-f gap at n=12: {} (stalls, reported)", f[11].max_gap))
}

fn subcommand_args(name: &str) -> Vec<Vec<String>> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let pair = |cmd: &str, rest: &[&str]| {
        let mut v = s(&[cmd, "--model-a", name, "--model-b", name]);
        v.extend(s(rest));
        v
    };
    let one = |cmd: &str, rest: &[&str]| {
        let mut v = s(&[cmd, "--model", name]);
        v.extend(s(rest));
        v
    };
    vec![
        one("validate", &[]),
        one("kneading", &["--depth", "16", "--grid", "9"]),
        pair("equiv", &["--depth", "16", "--grid", "9"]),
        pair("psi", &["--grid", "17"]),
        one("partition", &["--y", "0.3", "--depth", "5"]),
        one("curve", &["--word", "+-", "--grid", "9"]),
        pair("conjugacy", &["--y", "0.3", "--depth", "4", "--samples", "9"]),
        pair("converge", &["--n", "2", "--m", "4", "--grid-x", "9", "--grid-y", "3"]),
        one("equicont", &["--n-max", "4", "--grid", "5"]),
        one("density", &["--y", "0.3", "--depths", "1,2,3,4,5,6"]),
        one("orbits", &["--m-max", "3"]),
        one("singer", &["--m-max", "2", "--expansion-steps", "2000"]),
        one("cocycle", &["--x", "0.3", "--y", "0.2", "--m", "3"]),
    ]
}

fn criterion_10() -> Outcome {
    let mut runs = 0;
    for name in fixtures::NAMES {
        for args in subcommand_args(name) {
            for format in ["csv", "json"] {
                let mut outputs = Vec::new();
                for _ in 0..2 {
                    let out = bin()
                        .args(&args)
                        .args(["--format", format])
                        .output()
                        .map_err(|e| e.to_string())?;
                    ensure(matches!(out.status.code(), Some(0) | Some(1)), || {
                        format!("{args:?}: exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
                    })?;
                    outputs.push((out.status.code(), out.stdout));
                }
                ensure(outputs[0] == outputs[1], || format!("{args:?} --format {format} differs between runs"))?;
                ensure(!outputs[0].1.is_empty(), || format!("{args:?} produced no output"))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} subcommand/fixture/format combinations byte-identical across runs"))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("example-3 kneading equivalence", criterion_1),
        ("example-3 turning-point multipliers", criterion_2),
        ("base conjugacy residual", criterion_3),
        ("H_n on tent vs quadratic", criterion_4),
        ("cocycle vs finite differences", criterion_5),
        ("Schwarzian suite", criterion_6),
        ("basin touches critical line or boundary", criterion_7),
        ("minimum principle", criterion_8),
        ("density of turning-point preimages", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("acceptance {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
