//! TOML run configuration: `[model.<name>]` tables and a `[run]` table of
//! parameter defaults. Command-line flags take precedence over `[run]`.

use std::collections::BTreeMap;
use std::path::Path;

use kneadlab_core::{fixtures, CantorMap, Family, Tolerances, ToyModel};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: BTreeMap<String, ModelSpec>,
    #[serde(default)]
    pub run: toml::Table,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub family: String,
    pub s: Option<f64>,
    pub s0: Option<f64>,
    pub s1: Option<f64>,
    pub c: Option<f64>,
    pub c0: Option<f64>,
    pub c1: Option<f64>,
    pub cantor: Option<CantorSpec>,
    pub zero_epsilon: Option<f64>,
    pub root_tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorSpec {
    pub kind: String,
    pub a: f64,
    pub b: f64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let location = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(&location, e.to_string()))?;
        toml::from_str(&text).map_err(|e| CliError::config(&location, e.to_string()))
    }

    /// `flag` if given, else `[run].key`, else `default`.
    pub fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.run.get(key) {
            Some(value) => value
                .clone()
                .try_into()
                .map_err(|e: toml::de::Error| CliError::config(format!("run.{key}"), e.message().to_string())),
            None => Ok(default),
        }
    }

    /// `flag` if given, else `[run].key` if present.
    pub fn pick_opt<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match (flag, self.run.contains_key(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, true) => self.require(None, key, key).map(Some),
            (None, false) => Ok(None),
        }
    }

    /// Like [`pick`](Self::pick) without a default.
    pub fn require<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, flag_name: &str) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.run.get(key) {
            Some(value) => value
                .clone()
                .try_into()
                .map_err(|e: toml::de::Error| CliError::config(format!("run.{key}"), e.message().to_string())),
            None => Err(CliError::config(flag_name, "required")),
        }
    }

    /// A model defined in the config file, or a built-in fixture.
    pub fn resolve_model(&self, name: &str, flag_name: &str) -> Result<ToyModel, CliError> {
        if let Some(spec) = self.model.get(name) {
            return spec.build(&format!("model.{name}"));
        }
        fixtures::by_name(name).ok_or_else(|| {
            CliError::config(
                flag_name,
                format!("unknown model '{name}' (built-in: {})", fixtures::NAMES.join(", ")),
            )
        })
    }
}

fn affine(loc: &str, base: Option<f64>, b0: Option<f64>, b1: Option<f64>, what: &str) -> Result<(f64, f64), CliError> {
    match (base, b0, b1) {
        (Some(v), None, None) => Ok((v, 0.0)),
        (None, Some(v0), v1) => Ok((v0, v1.unwrap_or(0.0))),
        _ => Err(CliError::config(
            loc,
            format!("give either {what} or {what}0 (with optional {what}1)"),
        )),
    }
}

fn in_range(loc: &str, key: &str, p0: f64, p1: f64) -> Result<(), CliError> {
    for v in [p0, p0 + p1] {
        if !(v > 0.0 && v <= 2.0) {
            return Err(CliError::config(format!("{loc}.{key}"), "parameter must lie in (0, 2] for y in [0, 1]"));
        }
    }
    Ok(())
}

impl ModelSpec {
    pub fn build(&self, loc: &str) -> Result<ToyModel, CliError> {
        let unused = |fields: &[(&str, Option<f64>)]| -> Result<(), CliError> {
            match fields.iter().find(|(_, v)| v.is_some()) {
                Some((k, _)) => Err(CliError::config(format!("{loc}.{k}"), "not a parameter of this family")),
                None => Ok(()),
            }
        };
        let tent_fields = [("s", self.s), ("s0", self.s0), ("s1", self.s1)];
        let quad_fields = [("c", self.c), ("c0", self.c0), ("c1", self.c1)];
        let family = match self.family.as_str() {
            "tent" => {
                unused(&quad_fields)?;
                let (s0, s1) = affine(loc, self.s, self.s0, self.s1, "s")?;
                in_range(loc, "s", s0, s1)?;
                Family::Tent { s0, s1 }
            }
            "quadratic" => {
                unused(&tent_fields)?;
                let (c0, c1) = affine(loc, self.c, self.c0, self.c1, "c")?;
                in_range(loc, "c", c0, c1)?;
                Family::Quadratic { c0, c1 }
            }
            "example3-q" | "example3-f" | "example3-g" => {
                unused(&tent_fields)?;
                unused(&quad_fields)?;
                match self.family.as_str() {
                    "example3-q" => Family::Example3Q,
                    "example3-f" => Family::Example3F,
                    _ => Family::Example3G,
                }
            }
            other => {
                return Err(CliError::config(
                    format!("{loc}.family"),
                    format!("unknown family '{other}' (tent, quadratic, example3-q, example3-f, example3-g)"),
                ))
            }
        };
        let cantor = match &self.cantor {
            None => CantorMap::middle_thirds(),
            Some(c) => {
                if c.kind != "affine" {
                    return Err(CliError::config(format!("{loc}.cantor.kind"), "only 'affine' is supported"));
                }
                if !(0.0 < c.a && c.a < c.b && c.b < 1.0) {
                    return Err(CliError::config(format!("{loc}.cantor"), "need 0 < a < b < 1"));
                }
                CantorMap::affine(c.a, c.b)
            }
        };
        let defaults = Tolerances::default();
        let tol = Tolerances {
            zero_epsilon: self.zero_epsilon.unwrap_or(defaults.zero_epsilon),
            root_tol: self.root_tol.unwrap_or(defaults.root_tol),
        };
        if !(tol.zero_epsilon > 0.0 && tol.root_tol > 0.0) {
            return Err(CliError::config(loc, "tolerances must be positive"));
        }
        Ok(ToyModel::new(family, cantor).with_tolerances(tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> RunConfig {
        toml::from_str(s).unwrap()
    }

    #[test]
    fn models_and_run_table() {
        let cfg = parse(
            r#"
            [model.steep]
            family = "quadratic"
            c0 = 1.5
            c1 = 0.4
            cantor = { kind = "affine", a = 0.25, b = 0.5 }

            [run]
            depth = 12
            "#,
        );
        let m = cfg.resolve_model("steep", "--model").unwrap();
        assert_eq!(m.family, Family::Quadratic { c0: 1.5, c1: 0.4 });
        assert_eq!(m.cantor, CantorMap::affine(0.25, 0.5));
        assert_eq!(cfg.pick(None, "depth", 32usize).unwrap(), 12);
        assert_eq!(cfg.pick(Some(5usize), "depth", 32).unwrap(), 5);
        assert_eq!(cfg.pick(None, "grid", 33usize).unwrap(), 33);
        assert!(cfg.resolve_model("quad1.2", "--model").is_ok());
    }

    #[test]
    fn bad_values_are_config_errors() {
        let cfg = parse("[model.x]\nfamily = \"tent\"\ns = 2.5\n");
        let err = cfg.resolve_model("x", "--model").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("model.x.s"));

        let cfg = parse("[run]\ndepth = \"deep\"\n");
        let err = cfg.pick(None, "depth", 1usize).unwrap_err();
        assert!(err.to_string().contains("run.depth"));

        assert!(toml::from_str::<RunConfig>("[model.x]\nfamily = \"tent\"\nslope = 2\n").is_err());
        assert!(RunConfig::default().resolve_model("nope", "--model").is_err());
    }
}
