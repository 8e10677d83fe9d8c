//! Experiment configuration: flat `key = value` text with dotted keys.
//!
//! ```text
//! # cat map, cosine scenery
//! model.variant = torus_direct
//! model.matrix = 2,1,1,1
//! model.f = cos(1,0)
//! run.n = 16384
//! run.reps = 4000
//! ```
//!
//! Observables are sums of terms `c*cos(k1,...,kd;phase)`, `cos(k...)` or a
//! bare constant, e.g. `0.5 + 0.5*cos(1,0)`. Lists are comma separated;
//! `model.fs` separates observables with `|`. An empty value means "unset".

use crate::dynsys::{Observable, TorusMap};
use crate::error::{Error, Result};
use crate::limitlaw::{DeltaRoute, VMethod};
use crate::scenery::SceneryModel;
use crate::stats::moments::MomentMode;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// One `c * cos(2 pi k.x + phase)` term.
#[derive(Debug, Clone, PartialEq)]
pub struct ObsTerm {
    pub coef: f64,
    pub freq: Vec<i64>,
    pub phase: f64,
}

/// Textual observable: a constant plus cosine terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObservableSpec {
    pub constant: f64,
    pub terms: Vec<ObsTerm>,
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| cfg_err(format!("{what}: cannot parse '{}' as a number", s.trim())))?;
    if !v.is_finite() {
        return Err(cfg_err(format!("{what}: value must be finite")));
    }
    Ok(v)
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| cfg_err(format!("{what}: cannot parse '{}'", s.trim())))
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_num(x, what)).collect()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Splits at top-level `+`/`-` signs that start a new term.
fn split_terms(s: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let after_exponent = matches!(prev, Some('e') | Some('E')) && cur.trim_end().chars().rev().nth(1).is_some_and(|c| c.is_ascii_digit() || c == '.');
        if depth == 0 && (ch == '+' || ch == '-') && !cur.trim().is_empty() && !after_exponent && !cur.trim_end().ends_with('*') {
            terms.push(std::mem::take(&mut cur));
            if ch == '-' {
                cur.push('-');
            }
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    terms.push(cur);
    terms.into_iter().map(|t| t.trim().to_string()).collect()
}

impl FromStr for ObservableSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = ObservableSpec::default();
        if s.trim().is_empty() {
            return Err(cfg_err("empty observable"));
        }
        for term in split_terms(s) {
            let compact: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            let Some(pos) = compact.find("cos(") else {
                spec.constant += parse_f64(&compact, "observable constant")?;
                continue;
            };
            let head = &compact[..pos];
            let coef = match head.strip_suffix('*').unwrap_or(head) {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => parse_f64(c, "observable coefficient")?,
            };
            let inner = compact[pos + 4..].strip_suffix(')').ok_or_else(|| cfg_err(format!("unclosed cos( in '{term}'")))?;
            let (freq, phase) = match inner.split_once(';') {
                Some((f, p)) => (f, parse_f64(p, "observable phase")?),
                None => (inner, 0.0),
            };
            let freq: Vec<i64> = parse_list(freq, "frequency")?;
            if freq.is_empty() {
                return Err(cfg_err(format!("empty frequency in '{term}'")));
            }
            spec.terms.push(ObsTerm { coef, freq, phase });
        }
        let dims: Vec<usize> = spec.terms.iter().map(|t| t.freq.len()).collect();
        if dims.windows(2).any(|w| w[0] != w[1]) {
            return Err(cfg_err("observable terms have different dimensions"));
        }
        Ok(spec)
    }
}

impl std::fmt::Display for ObservableSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.constant != 0.0 || self.terms.is_empty() {
            parts.push(self.constant.to_string());
        }
        for t in &self.terms {
            let mut s = format!("{}*cos({}", t.coef, join(&t.freq));
            if t.phase != 0.0 {
                write!(s, ";{}", t.phase)?;
            }
            s.push(')');
            parts.push(s);
        }
        f.write_str(&parts.join(" + "))
    }
}

impl ObservableSpec {
    pub fn to_observable(&self, dim: usize) -> Result<Observable> {
        if let Some(t) = self.terms.iter().find(|t| t.freq.len() != dim) {
            return Err(Error::InvalidModel(format!("frequency {:?} does not match torus dimension {dim}", t.freq)));
        }
        if self.terms.iter().all(|t| t.phase == 0.0) {
            let mut terms = vec![(vec![0; dim], self.constant)];
            terms.extend(self.terms.iter().map(|t| (t.freq.clone(), t.coef)));
            return Observable::polynomial(terms);
        }
        let modes = self.terms.iter().map(|t| Ok((t.coef, Observable::mode(t.freq.clone(), t.phase)?))).collect::<Result<Vec<_>>>()?;
        Observable::affine(self.constant, modes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    IidRademacher,
    IidGaussian,
    TorusDirect,
    TorusCoin,
    TorusMulti,
}

impl Variant {
    const NAMES: [(&'static str, Variant); 5] = [
        ("iid_rademacher", Variant::IidRademacher),
        ("iid_gaussian", Variant::IidGaussian),
        ("torus_direct", Variant::TorusDirect),
        ("torus_coin", Variant::TorusCoin),
        ("torus_multi", Variant::TorusMulti),
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(_, v)| *v == self).map(|(n, _)| *n).unwrap()
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES.iter().find(|(n, _)| *n == s).map(|(_, v)| *v).ok_or_else(|| cfg_err(format!("unknown model.variant '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub variant: Variant,
    pub sd: f64,
    /// Row-major square matrix.
    pub matrix: Vec<i64>,
    pub f: ObservableSpec,
    pub fs: Vec<ObservableSpec>,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub n: usize,
    pub n_grid: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VMethodKind {
    Walk,
    Brownian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisSpec {
    pub lags: usize,
    pub half_width: Option<usize>,
    /// `(lo, hi, count)`
    pub t_grid: (f64, f64, usize),
    pub v_method: VMethodKind,
    pub m: usize,
    pub eps: f64,
    pub delta_route: DeltaRoute,
    pub sigma2: Option<f64>,
    pub moment_n_grid: Vec<usize>,
    pub moment_reps: usize,
    pub moment_window: usize,
    pub moment_mode: MomentMode,
    pub decay_g: ObservableSpec,
    pub decay_h: ObservableSpec,
    pub decay_n_max: usize,
    pub decay_reps: usize,
    pub charcov_block: usize,
    pub charcov_gaps: Vec<usize>,
    pub charcov_reps: usize,
}

impl AnalysisSpec {
    pub fn v_method(&self) -> VMethod {
        match self.v_method {
            VMethodKind::Walk => VMethod::Walk { m: self.m },
            VMethodKind::Brownian => VMethod::Brownian { m: self.m, eps: self.eps },
        }
    }

    pub fn t_values(&self) -> Vec<f64> {
        let (lo, hi, count) = self.t_grid;
        crate::stats::ecf::linear_grid(lo, hi, count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub run: RunSpec,
    pub analysis: AnalysisSpec,
    pub output_dir: PathBuf,
    pub compare_a: Option<PathBuf>,
    pub compare_b: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let cos: ObservableSpec = "cos(1,0)".parse().unwrap();
        ExperimentConfig {
            model: ModelSpec { variant: Variant::IidRademacher, sd: 1.0, matrix: vec![2, 1, 1, 1], f: cos.clone(), fs: Vec::new(), theta: Vec::new() },
            run: RunSpec { n: 1024, n_grid: vec![1024, 4096, 16384, 65536], reps: 1000, seed: 0, threads: None },
            analysis: AnalysisSpec {
                lags: crate::stats::autocov::DEFAULT_LAGS,
                half_width: None,
                t_grid: (-3.0, 3.0, 61),
                v_method: VMethodKind::Walk,
                m: 10_000,
                eps: 0.05,
                delta_route: DeltaRoute::Conditional,
                sigma2: None,
                moment_n_grid: vec![8, 16, 32, 48],
                moment_reps: 200,
                moment_window: 8192,
                moment_mode: MomentMode::MonteCarlo,
                decay_g: cos.clone(),
                decay_h: cos,
                decay_n_max: 10,
                decay_reps: 100_000,
                charcov_block: 4,
                charcov_gaps: vec![1, 2, 4, 8],
                charcov_reps: 20_000,
            },
            output_dir: PathBuf::from("out"),
            compare_a: None,
            compare_b: None,
        }
    }
}

fn opt<T: FromStr>(v: &str, what: &str) -> Result<Option<T>> {
    if v.trim().is_empty() {
        Ok(None)
    } else {
        parse_num(v, what).map(Some)
    }
}

fn opt_str<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = ExperimentConfig::default();
        let mut seen = std::collections::HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| cfg_err(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let (key, v) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(cfg_err(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
            c.set(key, v).map_err(|e| match e {
                Error::Config(m) => cfg_err(format!("line {}: {m}", lineno + 1)),
                other => other,
            })?;
        }
        Ok(c)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let a = &mut self.analysis;
        match key {
            "model.variant" => self.model.variant = v.parse()?,
            "model.sd" => self.model.sd = parse_f64(v, key)?,
            "model.matrix" => self.model.matrix = parse_list(v, key)?,
            "model.f" => self.model.f = v.parse()?,
            "model.fs" => self.model.fs = if v.is_empty() { Vec::new() } else { v.split('|').map(str::parse).collect::<Result<_>>()? },
            "model.theta" => self.model.theta = parse_list(v, key)?,
            "run.n" => self.run.n = parse_num(v, key)?,
            "run.n_grid" => self.run.n_grid = parse_list(v, key)?,
            "run.reps" => self.run.reps = parse_num(v, key)?,
            "run.seed" => self.run.seed = parse_num(v, key)?,
            "run.threads" => self.run.threads = opt(v, key)?,
            "analysis.lags" => a.lags = parse_num(v, key)?,
            "analysis.half_width" => a.half_width = opt(v, key)?,
            "analysis.t_grid" => {
                let parts: Vec<&str> = v.split(',').collect();
                if parts.len() != 3 {
                    return Err(cfg_err("analysis.t_grid must be 'lo,hi,count'"));
                }
                a.t_grid = (parse_f64(parts[0], key)?, parse_f64(parts[1], key)?, parse_num(parts[2], key)?);
            }
            "analysis.v_method" => {
                a.v_method = match v {
                    "walk" => VMethodKind::Walk,
                    "brownian" => VMethodKind::Brownian,
                    _ => return Err(cfg_err(format!("unknown analysis.v_method '{v}'"))),
                }
            }
            "analysis.m" => a.m = parse_num(v, key)?,
            "analysis.eps" => a.eps = parse_f64(v, key)?,
            "analysis.delta_route" => {
                a.delta_route = match v {
                    "conditional" => DeltaRoute::Conditional,
                    "direct" => DeltaRoute::DirectIntegral,
                    _ => return Err(cfg_err(format!("unknown analysis.delta_route '{v}'"))),
                }
            }
            "analysis.sigma2" => a.sigma2 = if v.is_empty() { None } else { Some(parse_f64(v, key)?) },
            "analysis.moment_n_grid" => a.moment_n_grid = parse_list(v, key)?,
            "analysis.moment_reps" => a.moment_reps = parse_num(v, key)?,
            "analysis.moment_window" => a.moment_window = parse_num(v, key)?,
            "analysis.moment_mode" => {
                a.moment_mode = match v {
                    "monte_carlo" => MomentMode::MonteCarlo,
                    "analytic" => MomentMode::Analytic,
                    _ => return Err(cfg_err(format!("unknown analysis.moment_mode '{v}'"))),
                }
            }
            "analysis.decay_g" => a.decay_g = v.parse()?,
            "analysis.decay_h" => a.decay_h = v.parse()?,
            "analysis.decay_n_max" => a.decay_n_max = parse_num(v, key)?,
            "analysis.decay_reps" => a.decay_reps = parse_num(v, key)?,
            "analysis.charcov_block" => a.charcov_block = parse_num(v, key)?,
            "analysis.charcov_gaps" => a.charcov_gaps = parse_list(v, key)?,
            "analysis.charcov_reps" => a.charcov_reps = parse_num(v, key)?,
            "output.dir" => self.output_dir = PathBuf::from(v),
            "compare.a" => self.compare_a = if v.is_empty() { None } else { Some(PathBuf::from(v)) },
            "compare.b" => self.compare_b = if v.is_empty() { None } else { Some(PathBuf::from(v)) },
            _ => return Err(cfg_err(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Canonical text form; `parse(serialize(c)) == c`.
    pub fn serialize(&self) -> String {
        let m = &self.model;
        let r = &self.run;
        let a = &self.analysis;
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let entries: Vec<(&str, String)> = vec![
            ("model.variant", m.variant.name().into()),
            ("model.sd", m.sd.to_string()),
            ("model.matrix", join(&m.matrix)),
            ("model.f", m.f.to_string()),
            ("model.fs", m.fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | ")),
            ("model.theta", join(&m.theta)),
            ("run.n", r.n.to_string()),
            ("run.n_grid", join(&r.n_grid)),
            ("run.reps", r.reps.to_string()),
            ("run.seed", r.seed.to_string()),
            ("run.threads", opt_str(&r.threads)),
            ("analysis.lags", a.lags.to_string()),
            ("analysis.half_width", opt_str(&a.half_width)),
            ("analysis.t_grid", format!("{},{},{}", a.t_grid.0, a.t_grid.1, a.t_grid.2)),
            ("analysis.v_method", if a.v_method == VMethodKind::Walk { "walk" } else { "brownian" }.into()),
            ("analysis.m", a.m.to_string()),
            ("analysis.eps", a.eps.to_string()),
            ("analysis.delta_route", if a.delta_route == DeltaRoute::Conditional { "conditional" } else { "direct" }.into()),
            ("analysis.sigma2", opt_str(&a.sigma2)),
            ("analysis.moment_n_grid", join(&a.moment_n_grid)),
            ("analysis.moment_reps", a.moment_reps.to_string()),
            ("analysis.moment_window", a.moment_window.to_string()),
            ("analysis.moment_mode", if a.moment_mode == MomentMode::Analytic { "analytic" } else { "monte_carlo" }.into()),
            ("analysis.decay_g", a.decay_g.to_string()),
            ("analysis.decay_h", a.decay_h.to_string()),
            ("analysis.decay_n_max", a.decay_n_max.to_string()),
            ("analysis.decay_reps", a.decay_reps.to_string()),
            ("analysis.charcov_block", a.charcov_block.to_string()),
            ("analysis.charcov_gaps", join(&a.charcov_gaps)),
            ("analysis.charcov_reps", a.charcov_reps.to_string()),
            ("output.dir", self.output_dir.display().to_string()),
            ("compare.a", path(&self.compare_a)),
            ("compare.b", path(&self.compare_b)),
        ];
        let mut out = String::new();
        for (k, v) in entries {
            if v.is_empty() {
                let _ = writeln!(out, "{k} =");
            } else {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    /// SHA-256 of the canonical form, ignoring the thread hint and the
    /// output directory (neither affects results).
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.run.threads = None;
        c.output_dir = PathBuf::new();
        Sha256::digest(c.serialize().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn map(&self) -> Result<TorusMap> {
        TorusMap::from_row_major(&self.model.matrix)
    }

    /// Builds and validates the scenery model.
    pub fn scenery_model(&self) -> Result<SceneryModel> {
        let m = &self.model;
        match m.variant {
            Variant::IidRademacher => Ok(SceneryModel::rademacher()),
            Variant::IidGaussian => SceneryModel::gaussian(m.sd),
            Variant::TorusDirect => {
                let map = self.map()?;
                let f = m.f.to_observable(map.dim())?;
                SceneryModel::torus_direct(map, f)
            }
            Variant::TorusCoin => {
                let map = self.map()?;
                let f = m.f.to_observable(map.dim())?;
                SceneryModel::torus_coin(map, f)
            }
            Variant::TorusMulti => {
                let map = self.map()?;
                let fs = m.fs.iter().map(|f| f.to_observable(map.dim())).collect::<Result<Vec<_>>>()?;
                SceneryModel::torus_multi(map, m.theta.clone(), fs)
            }
        }
    }

    /// Checks the analysis settings that do not depend on the command.
    pub fn validate_analysis(&self) -> Result<()> {
        let a = &self.analysis;
        self.analysis.v_method().validate()?;
        if a.t_grid.2 == 0 {
            return Err(cfg_err("analysis.t_grid needs at least one point"));
        }
        if let Some(s) = a.sigma2 {
            if s < 0.0 {
                return Err(Error::NegativeVariance(s));
            }
        }
        if self.run.reps == 0 {
            return Err(cfg_err("run.reps must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_round_trip() {
        let c = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::parse(&c.serialize()).unwrap(), c);
    }

    #[test]
    fn parses_a_file() {
        let text = "# comment\nmodel.variant = torus_multi\nmodel.fs = 0.5 + 0.25*cos(1,0) | 0.5 - 0.25*cos(1,0)\nmodel.theta = 1,-1\nrun.n = 77\nrun.threads = 3\nanalysis.sigma2 = 0.5\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.run.n, 77);
        assert_eq!(c.run.threads, Some(3));
        assert_eq!(c.model.fs[1].terms[0].coef, -0.25);
        assert!(c.scenery_model().is_ok());
        let again = ExperimentConfig::parse(&c.serialize()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.serialize(), c.serialize());
    }

    #[test]
    fn observable_syntax() {
        let o: ObservableSpec = "0.5+0.5*cos(1,0)".parse().unwrap();
        assert_eq!(o.constant, 0.5);
        assert_eq!(o.terms, vec![ObsTerm { coef: 0.5, freq: vec![1, 0], phase: 0.0 }]);
        let o: ObservableSpec = "-cos(1,1;0.25) + 1e-3*cos(2,1) - 2".parse().unwrap();
        assert_eq!(o.constant, -2.0);
        assert_eq!(o.terms[0].coef, -1.0);
        assert_eq!(o.terms[0].phase, 0.25);
        assert_eq!(o.terms[1].coef, 1e-3);
        let o: ObservableSpec = "2.5e-1".parse().unwrap();
        assert_eq!(o.constant, 0.25);
        assert!("cos(1,0".parse::<ObservableSpec>().is_err());
        assert!("cos(1,0) + cos(1)".parse::<ObservableSpec>().is_err());
        let obs = "0.5*cos(1,0;1.5)".parse::<ObservableSpec>().unwrap().to_observable(2).unwrap();
        assert_eq!(obs.declared_mean(), 0.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(ExperimentConfig::parse("bogus.key = 1"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("run.n = x"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("run.n = 1\nrun.n = 2"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("just text"), Err(Error::Config(_))));
        let c = ExperimentConfig::parse("model.variant = torus_direct\nmodel.matrix = 1,0,0,1").unwrap();
        assert_eq!(c.scenery_model(), Err(Error::RootOfUnitySpectrum(1)));
    }

    #[test]
    fn hash_ignores_threads_and_output() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        b.run.threads = Some(8);
        b.output_dir = PathBuf::from("/tmp/x");
        assert_eq!(a.hash(), b.hash());
        b.run.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    fn term() -> impl Strategy<Value = ObsTerm> {
        (-1e3f64..1e3, prop::collection::vec(-5i64..5, 2), prop_oneof![Just(0.0), -3.0f64..3.0]).prop_map(|(coef, freq, phase)| ObsTerm { coef, freq, phase })
    }

    proptest! {
        #[test]
        fn observable_round_trip(constant in prop_oneof![Just(0.0), -10f64..10.0], terms in prop::collection::vec(term(), 0..4)) {
            let spec = ObservableSpec { constant, terms };
            let back: ObservableSpec = spec.to_string().parse().unwrap();
            prop_assert_eq!(&back, &spec);
        }

        #[test]
        fn config_round_trip(n in 1usize..1_000_000, seed in any::<u64>(), eps in 1e-6f64..1.0, sigma2 in prop::option::of(0f64..10.0), grid in prop::collection::vec(1usize..100, 0..5)) {
            let mut c = ExperimentConfig::default();
            c.run.n = n;
            c.run.seed = seed;
            c.analysis.eps = eps;
            c.analysis.sigma2 = sigma2;
            c.analysis.moment_n_grid = grid;
            let text = c.serialize();
            let back = ExperimentConfig::parse(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.serialize(), text);
        }
    }
}
