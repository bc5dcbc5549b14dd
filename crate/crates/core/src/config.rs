//! Flat `key = value` run configuration.
//!
//! Unknown keys, duplicate keys and unparsable values are configuration
//! errors. Missing keys take the defaults of the chosen model, so an empty
//! file is a valid H³ configuration. Floats are written in shortest
//! round-trip form, which makes `parse(render(c)) == c` exact.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::GridSpec;
use crate::models::Model;

/// Geometry of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunModel {
    Flat,
    H2,
    H3,
}

impl RunModel {
    pub fn name(self) -> &'static str {
        match self {
            RunModel::Flat => "flat",
            RunModel::H2 => "h2",
            RunModel::H3 => "h3",
        }
    }

    pub fn curved(self) -> Option<Model> {
        match self {
            RunModel::Flat => None,
            RunModel::H2 => Some(Model::H2),
            RunModel::H3 => Some(Model::H3),
        }
    }
}

/// Normalization constant of the Plancherel measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CxSetting {
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: RunModel,
    pub t: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub lambda: f64,
    pub n_mu: usize,
    pub cx: CxSetting,
    pub seed: u64,
    /// Size of the test-function family.
    pub count: usize,
    /// Strip half-width for the flat obstruction.
    pub gamma: f64,
    pub out: PathBuf,
}

const KEYS: [&str; 13] =
    ["model", "t", "r_max", "n_r", "n_theta", "n_phi", "lambda", "n_mu", "cx", "seed", "count", "gamma", "out"];

impl RunConfig {
    pub fn defaults(model: RunModel) -> Self {
        let grid = GridSpec::default_for(model.curved().unwrap_or(Model::H2));
        Self {
            model,
            t: 0.25,
            r_max: grid.r_max,
            n_r: grid.n_r,
            n_theta: grid.n_theta,
            n_phi: grid.n_phi,
            lambda: grid.lambda,
            n_mu: grid.n_mu,
            cx: CxSetting::Auto,
            seed: 7,
            count: 3,
            gamma: 1.0,
            out: PathBuf::from("out"),
        }
    }

    /// Grid of a curved model.
    pub fn grid(&self) -> Result<GridSpec> {
        let model = self
            .model
            .curved()
            .ok_or_else(|| Error::Config("this command needs model = h2 or h3".into()))?;
        let g = GridSpec {
            model,
            r_max: self.r_max,
            n_r: self.n_r,
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            lambda: self.lambda,
            n_mu: self.n_mu,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Config(format!("t = {} must be positive", self.t)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config(format!("gamma = {} must be positive", self.gamma)));
        }
        if self.count == 0 {
            return Err(Error::Config("count must be at least 1".into()));
        }
        if let CxSetting::Value(v) = self.cx {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("cx = {v} must be positive")));
            }
        }
        if self.model != RunModel::Flat {
            self.grid()?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("line {}: unknown key `{k}`", no + 1)));
            }
            if pairs.iter().any(|(p, _)| *p == k) {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", no + 1)));
            }
            pairs.push((k, v));
        }
        let model = match pairs.iter().find(|(k, _)| k == "model").map(|(_, v)| v.as_str()) {
            None | Some("h3") => RunModel::H3,
            Some("h2") => RunModel::H2,
            Some("flat") => RunModel::Flat,
            Some(other) => return Err(Error::Config(format!("unknown model `{other}`"))),
        };
        let mut c = Self::defaults(model);
        for (k, v) in &pairs {
            match k.as_str() {
                "model" => {}
                "t" => c.t = num(k, v)?,
                "r_max" => c.r_max = num(k, v)?,
                "n_r" => c.n_r = num(k, v)?,
                "n_theta" => c.n_theta = num(k, v)?,
                "n_phi" => c.n_phi = num(k, v)?,
                "lambda" => c.lambda = num(k, v)?,
                "n_mu" => c.n_mu = num(k, v)?,
                "cx" => c.cx = if v == "auto" { CxSetting::Auto } else { CxSetting::Value(num(k, v)?) },
                "seed" => c.seed = num(k, v)?,
                "count" => c.count = num(k, v)?,
                "gamma" => c.gamma = num(k, v)?,
                "out" => c.out = PathBuf::from(v),
                _ => unreachable!("key list checked above"),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| writeln!(s, "{k} = {v}").expect("writing to a String");
        line("model", self.model.name().into());
        line("t", self.t.to_string());
        line("r_max", self.r_max.to_string());
        line("n_r", self.n_r.to_string());
        line("n_theta", self.n_theta.to_string());
        line("n_phi", self.n_phi.to_string());
        line("lambda", self.lambda.to_string());
        line("n_mu", self.n_mu.to_string());
        line(
            "cx",
            match self.cx {
                CxSetting::Auto => "auto".into(),
                CxSetting::Value(v) => v.to_string(),
            },
        );
        line("seed", self.seed.to_string());
        line("count", self.count.to_string());
        line("gamma", self.gamma.to_string());
        line("out", self.out.display().to_string());
        s
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("cannot parse `{v}` for `{key}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_h3_defaults() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::defaults(RunModel::H3));
    }

    #[test]
    fn round_trip_is_exact() {
        let mut c = RunConfig::defaults(RunModel::H2);
        c.t = 0.1 + 0.2;
        c.cx = CxSetting::Value(1.0 / (2.0 * std::f64::consts::PI.powi(2)));
        c.out = PathBuf::from("runs/a b");
        assert_eq!(RunConfig::parse(&c.render()).unwrap(), c);
    }

    #[test]
    fn malformed_input_is_rejected() {
        for bad in ["t 0.5", "colour = red", "t = 0.5\nt = 0.6", "t = -1", "model = h4", "n_r = 1.5", "count = 0"] {
            assert!(matches!(RunConfig::parse(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = RunConfig::parse("# run\n\nmodel = flat  # line\nt = 2\n").unwrap();
        assert_eq!(c.model, RunModel::Flat);
        assert_eq!(c.t, 2.0);
    }
}
