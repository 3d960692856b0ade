//! Experiment configuration: TOML with sections, validated at load time.
//!
//! Every problem is reported with the line of the offending key. A resolved
//! config has every geometry-specific default filled in, so its echo is a
//! complete record of the run and parses back to the same value.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use fracwave::forward::{Phantom, PlaneGrid, TimeGrid};
use fracwave::harmonics::{num_harmonics, SphereGrid};
use fracwave::invert::{Cutoff, Regularization, SphereOptions};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryName {
    Sphere,
    Hyperplane,
}

impl fmt::Display for GeometryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometryName::Sphere => "sphere",
            GeometryName::Hyperplane => "hyperplane",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "PhantomSpec::is_empty")]
    pub phantom: PhantomSpec,
    #[serde(default)]
    pub detector: DetectorSpec,
    #[serde(default)]
    pub time: TimeSpec,
    #[serde(default)]
    pub inversion: InversionSpec,
    #[serde(default)]
    pub noise: NoiseSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub geometry: GeometryName,
    pub n: usize,
    pub alpha: f64,
    /// Seeds the optional data noise.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhantomSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blob: Vec<BlobSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mode: Vec<ModeSpec>,
}

impl PhantomSpec {
    pub fn is_empty(&self) -> bool {
        self.blob.is_empty() && self.mode.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlobSpec {
    pub center: Vec<f64>,
    pub sigma: f64,
    #[serde(default = "one")]
    pub amp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub l: usize,
    pub k: usize,
    pub sigma: f64,
    #[serde(default = "one")]
    pub amp: f64,
}

fn one() -> f64 {
    1.0
}

/// Sphere keys: `max_degree`, `shape`, `weights`. Hyperplane keys: `count`,
/// `spacing`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum CutoffSpec {
    #[default]
    Auto,
    Off,
    Value(f64),
}

impl FromStr for CutoffSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "auto" => Ok(CutoffSpec::Auto),
            "off" => Ok(CutoffSpec::Off),
            v => v
                .parse::<f64>()
                .map(CutoffSpec::Value)
                .map_err(|_| format!("cutoff must be a number, 'auto' or 'off', got '{v}'")),
        }
    }
}

impl Serialize for CutoffSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CutoffSpec::Auto => s.serialize_str("auto"),
            CutoffSpec::Off => s.serialize_str("off"),
            CutoffSpec::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for CutoffSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(CutoffSpec::Value(v)),
            Raw::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}


/// Shared keys plus the sphere-only wavenumber and output-grid keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub cutoff: CutoffSpec,
    #[serde(default = "default_sharpness")]
    pub sharpness: u32,
    #[serde(default = "default_amplification")]
    pub amplification: f64,
    #[serde(default = "default_zero_guard")]
    pub zero_guard: f64,
    #[serde(default = "default_band_resolution")]
    pub band_resolution: f64,
    #[serde(default)]
    pub strict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_step: Option<f64>,
    /// Wavenumber range scored by the profile error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_band: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial_count: Option<usize>,
}

fn default_sharpness() -> u32 {
    Regularization::default().sharpness
}

fn default_amplification() -> f64 {
    Regularization::default().amplification
}

fn default_zero_guard() -> f64 {
    Regularization::default().zero_guard
}

fn default_band_resolution() -> f64 {
    Regularization::default().band_resolution
}

impl Default for InversionSpec {
    fn default() -> Self {
        Self {
            gamma: None,
            cutoff: CutoffSpec::Auto,
            sharpness: default_sharpness(),
            amplification: default_amplification(),
            zero_guard: default_zero_guard(),
            band_resolution: default_band_resolution(),
            strict: false,
            lambda_min: None,
            lambda_max: None,
            lambda_step: None,
            error_band: None,
            extent: None,
            count: None,
            radial_count: None,
        }
    }
}

/// Additive Gaussian noise on the simulated data, standard deviation
/// `level` times the peak magnitude.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default)]
    pub level: f64,
}

/// Command-line overrides, applied before validation.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output: Option<String>,
    pub strict: bool,
    pub cutoff: Option<CutoffSpec>,
    pub gamma: Option<f64>,
}

/// Where each key of a config file sits, for diagnostics.
pub struct Source<'a> {
    pub path: &'a str,
    lines: HashMap<String, usize>,
}

impl<'a> Source<'a> {
    pub fn new(path: &'a str, text: &'a str) -> Self {
        Self {
            path,
            lines: key_lines(text),
        }
    }

    /// Line of `key` (dotted, array tables indexed from 0), falling back to
    /// the enclosing section.
    pub fn line_of(&self, key: &str) -> Option<usize> {
        let mut k = key;
        loop {
            if let Some(&l) = self.lines.get(k) {
                return Some(l);
            }
            k = &k[..k.rfind('.')?];
        }
    }

    fn error(&self, key: &str, msg: impl Into<String>) -> CliError {
        CliError::Config {
            path: self.path.to_string(),
            line: self.line_of(key),
            msg: msg.into(),
        }
    }
}

fn key_lines(text: &str) -> HashMap<String, usize> {
    let mut out = HashMap::new();
    let mut counts: HashMap<String, usize> = HashMap::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let ln = i + 1;
        if let Some(name) = line.strip_prefix("[[").and_then(|r| r.strip_suffix("]]")) {
            let name = name.trim().to_string();
            let c = counts.entry(name.clone()).or_insert(0);
            section = format!("{name}.{c}");
            *c += 1;
            out.entry(name).or_insert(ln);
            out.insert(section.clone(), ln);
        } else if let Some(name) = line.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            section = name.trim().to_string();
            out.insert(section.clone(), ln);
        } else if let Some((key, _)) = line.split_once('=') {
            let key = key.trim().trim_matches('"');
            if !key.is_empty() && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                let full = if section.is_empty() {
                    key.to_string()
                } else {
                    format!("{section}.{key}")
                };
                out.insert(full, ln);
            }
        }
    }
    out
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl ExperimentConfig {
    /// Parse, apply overrides, validate and resolve defaults.
    pub fn load(path: &str, text: &str, over: &Overrides) -> CliResult<Self> {
        let src = Source::new(path, text);
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config {
            path: path.to_string(),
            line: e.span().map(|s| line_at(text, s.start)),
            msg: e.message().trim().to_string(),
        })?;
        if let Some(o) = &over.output {
            cfg.experiment.output = Some(o.clone());
        }
        if over.strict {
            cfg.inversion.strict = true;
        }
        if let Some(c) = over.cutoff {
            cfg.inversion.cutoff = c;
        }
        if let Some(g) = over.gamma {
            cfg.inversion.gamma = Some(g);
        }
        cfg.resolve(&src)?;
        cfg.validate(&src)?;
        Ok(cfg)
    }

    /// TOML echo of the resolved config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn is_sphere(&self) -> bool {
        self.experiment.geometry == GeometryName::Sphere
    }

    fn resolve(&mut self, src: &Source) -> CliResult<()> {
        let n = self.experiment.n;
        let alpha = self.experiment.alpha;
        let sphere = self.is_sphere();
        let d = &mut self.detector;
        let inv = &mut self.inversion;
        if sphere {
            let defaults = SphereOptions::default();
            let lmax = *d.max_degree.get_or_insert(defaults.max_degree);
            if d.shape.is_none() {
                let g = SphereGrid::for_degree(n, lmax).map_err(|e| src.error("experiment.n", e.to_string()))?;
                d.shape = Some(g.shape);
            }
            d.weights.get_or_insert([1.0, 0.0]);
            let lo = *inv.lambda_min.get_or_insert(defaults.lambda_min);
            let hi = *inv.lambda_max.get_or_insert(defaults.lambda_max);
            inv.lambda_step.get_or_insert(defaults.lambda_step);
            inv.error_band.get_or_insert([lo, hi]);
            inv.extent.get_or_insert(defaults.extent);
            inv.count.get_or_insert(defaults.count);
            inv.radial_count.get_or_insert(defaults.radial_count);
        } else {
            d.count.get_or_insert(64);
            d.spacing.get_or_insert(0.25);
        }
        let t = if sphere { TimeGrid::standard(alpha) } else { TimeGrid::plane(alpha) };
        self.time.tau_min.get_or_insert(t.tau_min);
        self.time.tau_max.get_or_insert(t.tau_max);
        self.time.count.get_or_insert(t.count);
        Ok(())
    }

    fn validate(&self, src: &Source) -> CliResult<()> {
        let check = |ok: bool, key: &str, msg: &str| if ok { Ok(()) } else { Err(src.error(key, msg)) };
        let e = &self.experiment;
        let (n, alpha) = (e.n, e.alpha);
        check(n == 2 || n == 3, "experiment.n", "n must be 2 or 3")?;
        check(alpha > 1.0 && alpha <= 2.0, "experiment.alpha", "alpha must lie in (1, 2]")?;
        let sphere = self.is_sphere();

        let d = &self.detector;
        let only = |set: bool, key: &str, geo: &str| {
            check(!set, key, &format!("{key} applies to the {geo} geometry only"))
        };
        if sphere {
            only(d.count.is_some(), "detector.count", "hyperplane")?;
            only(d.spacing.is_some(), "detector.spacing", "hyperplane")?;
            let lmax = d.max_degree.unwrap_or_default();
            let shape = d.shape.clone().unwrap_or_default();
            let grid = SphereGrid::from_shape(n, &shape).map_err(|err| src.error("detector.shape", err.to_string()))?;
            check(
                grid.exact_degree >= lmax,
                "detector.shape",
                &format!(
                    "detector grid {shape:?} resolves degree {} only; max_degree is {lmax}",
                    grid.exact_degree
                ),
            )?;
            let w = d.weights.unwrap_or([1.0, 0.0]);
            check(
                w.iter().all(|v| v.is_finite()) && (w[0] != 0.0 || w[1] != 0.0),
                "detector.weights",
                "weights [c1, c2] must be finite and not both zero",
            )?;
        } else {
            only(d.max_degree.is_some(), "detector.max_degree", "sphere")?;
            only(d.shape.is_some(), "detector.shape", "sphere")?;
            only(d.weights.is_some(), "detector.weights", "sphere")?;
            self.plane_grid().map_err(|err| src.error("detector.count", err.to_string()))?;
        }

        self.time_grid().map_err(|err| src.error("time", err.to_string()))?;

        let inv = &self.inversion;
        if let Some(g) = inv.gamma {
            check(g > 0.0 && g < alpha, "inversion.gamma", &format!("gamma must lie inside the strip (0, {alpha})"))?;
        }
        if let CutoffSpec::Value(c) = inv.cutoff {
            check(c > 0.0 && c.is_finite(), "inversion.cutoff", "cutoff must be positive")?;
        }
        check(inv.sharpness >= 1, "inversion.sharpness", "sharpness must be at least 1")?;
        check(inv.amplification > 1.0, "inversion.amplification", "amplification bound must exceed 1")?;
        check(
            inv.zero_guard > 0.0 && inv.zero_guard < 1.0,
            "inversion.zero_guard",
            "zero_guard must lie in (0, 1)",
        )?;
        check(inv.band_resolution >= 0.0, "inversion.band_resolution", "band_resolution must be non-negative")?;
        if sphere {
            let opts = self.sphere_options();
            opts.lambdas().map_err(|err| src.error("inversion.lambda_min", err.to_string()))?;
            let [lo, hi] = inv.error_band.unwrap_or_default();
            check(
                lo >= opts.lambda_min && hi <= opts.lambda_max && lo < hi,
                "inversion.error_band",
                "error_band must be an increasing pair inside [lambda_min, lambda_max]",
            )?;
            check(opts.extent > 0.0, "inversion.extent", "extent must be positive")?;
            check(opts.count >= 2, "inversion.count", "count must be at least 2")?;
            check(opts.radial_count >= 16, "inversion.radial_count", "radial_count must be at least 16")?;
        } else {
            for key in ["lambda_min", "lambda_max", "lambda_step", "error_band", "extent", "count", "radial_count"] {
                let set = match key {
                    "lambda_min" => inv.lambda_min.is_some(),
                    "lambda_max" => inv.lambda_max.is_some(),
                    "lambda_step" => inv.lambda_step.is_some(),
                    "error_band" => inv.error_band.is_some(),
                    "extent" => inv.extent.is_some(),
                    "count" => inv.count.is_some(),
                    _ => inv.radial_count.is_some(),
                };
                only(set, &format!("inversion.{key}"), "sphere")?;
            }
        }

        check(
            self.noise.level >= 0.0 && self.noise.level.is_finite(),
            "noise.level",
            "noise level must be non-negative",
        )?;
        self.validate_phantom(src)
    }

    fn validate_phantom(&self, src: &Source) -> CliResult<()> {
        let n = self.experiment.n;
        let mut p = Phantom::new(n).map_err(|e| src.error("experiment.n", e.to_string()))?;
        for (i, b) in self.phantom.blob.iter().enumerate() {
            let key = format!("phantom.blob.{i}");
            if b.center.len() != n {
                return Err(src.error(&format!("{key}.center"), format!("blob center needs {n} coordinates")));
            }
            p = p
                .with_blob(b.center.clone(), b.sigma, b.amp)
                .map_err(|e| src.error(&format!("{key}.sigma"), e.to_string()))?;
        }
        for (i, m) in self.phantom.mode.iter().enumerate() {
            let key = format!("phantom.mode.{i}");
            if let Some(lmax) = self.detector.max_degree {
                if m.l > lmax {
                    return Err(src.error(
                        &format!("{key}.l"),
                        format!("mode degree {} exceeds detector.max_degree = {lmax}", m.l),
                    ));
                }
            }
            let count = num_harmonics(n, m.l);
            if m.k == 0 || m.k > count {
                return Err(src.error(
                    &format!("{key}.k"),
                    format!("k must lie in 1..={count} for degree {} in dimension {n}", m.l),
                ));
            }
            p = p
                .with_mode(m.l, m.k, m.sigma, m.amp)
                .map_err(|e| src.error(&format!("{key}.sigma"), e.to_string()))?;
        }
        if !self.is_sphere() && !p.is_empty() {
            let plane = self.plane_grid().map_err(|e| src.error("detector", e.to_string()))?;
            fracwave::forward::check_aliasing(&p, &plane).map_err(|e| src.error("detector.spacing", e.to_string()))?;
        }
        Ok(())
    }

    /// The phantom, or `None` when the config describes none.
    pub fn phantom(&self) -> fracwave::Result<Option<Phantom>> {
        if self.phantom.is_empty() {
            return Ok(None);
        }
        let mut p = Phantom::new(self.experiment.n)?;
        for b in &self.phantom.blob {
            p = p.with_blob(b.center.clone(), b.sigma, b.amp)?;
        }
        for m in &self.phantom.mode {
            p = p.with_mode(m.l, m.k, m.sigma, m.amp)?;
        }
        Ok(Some(p))
    }

    pub fn time_grid(&self) -> fracwave::Result<TimeGrid> {
        let t = &self.time;
        TimeGrid::new(
            t.tau_min.unwrap_or_default(),
            t.tau_max.unwrap_or_default(),
            t.count.unwrap_or_default(),
        )
    }

    pub fn plane_grid(&self) -> fracwave::Result<PlaneGrid> {
        let d = &self.detector;
        PlaneGrid::new(
            self.experiment.n - 1,
            d.count.unwrap_or_default(),
            d.spacing.unwrap_or_default(),
        )
    }

    pub fn sphere_grid(&self) -> fracwave::Result<SphereGrid> {
        SphereGrid::from_shape(self.experiment.n, self.detector.shape.as_deref().unwrap_or_default())
    }

    pub fn weights(&self) -> (f64, f64) {
        let [a, b] = self.detector.weights.unwrap_or([1.0, 0.0]);
        (a, b)
    }

    pub fn sphere_options(&self) -> SphereOptions {
        let d = SphereOptions::default();
        let inv = &self.inversion;
        SphereOptions {
            max_degree: self.detector.max_degree.unwrap_or(d.max_degree),
            lambda_min: inv.lambda_min.unwrap_or(d.lambda_min),
            lambda_max: inv.lambda_max.unwrap_or(d.lambda_max),
            lambda_step: inv.lambda_step.unwrap_or(d.lambda_step),
            extent: inv.extent.unwrap_or(d.extent),
            count: inv.count.unwrap_or(d.count),
            radial_count: inv.radial_count.unwrap_or(d.radial_count),
        }
    }

    pub fn error_band(&self) -> (f64, f64) {
        let o = self.sphere_options();
        let [lo, hi] = self.inversion.error_band.unwrap_or([o.lambda_min, o.lambda_max]);
        (lo, hi)
    }

    pub fn regularization(&self) -> Regularization {
        let inv = &self.inversion;
        Regularization {
            gamma: inv.gamma,
            cutoff: match inv.cutoff {
                CutoffSpec::Auto => Cutoff::Auto,
                CutoffSpec::Off => Cutoff::Off,
                CutoffSpec::Value(v) => Cutoff::Fixed(v),
            },
            sharpness: inv.sharpness,
            zero_guard: inv.zero_guard,
            amplification: inv.amplification,
            band_resolution: inv.band_resolution,
            strict: inv.strict,
            ..Regularization::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SPHERE: &str = r#"
[experiment]
geometry = "sphere"
n = 2
alpha = 1.5

[[phantom.mode]]
l = 2
k = 1
sigma = 0.3

[[phantom.mode]]
l = 1
k = 2
sigma = 0.3
amp = 0.5
"#;

    fn load(text: &str) -> CliResult<ExperimentConfig> {
        ExperimentConfig::load("test.toml", text, &Overrides::default())
    }

    fn line_of_error(text: &str) -> Option<usize> {
        match load(text) {
            Err(CliError::Config { line, .. }) => line,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_are_resolved() {
        let c = load(SPHERE).unwrap();
        assert_eq!(c.detector.max_degree, Some(6));
        assert_eq!(c.detector.shape, Some(vec![14]));
        assert_eq!(c.time.count, Some(2048));
        assert_eq!(c.phantom.mode[0].amp, 1.0);
        assert!(c.detector.count.is_none());
    }

    #[test]
    fn echo_reparses_to_the_same_config() {
        let c = load(SPHERE).unwrap();
        let again = load(&c.to_toml()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn errors_carry_the_line_of_the_key() {
        let bad_alpha = SPHERE.replace("alpha = 1.5", "alpha = 2.5");
        assert_eq!(line_of_error(&bad_alpha), Some(5));
        let bad_k = SPHERE.replace("k = 2", "k = 3");
        assert_eq!(line_of_error(&bad_k), Some(14));
        let syntax = SPHERE.replace("n = 2", "n = = 2");
        assert_eq!(line_of_error(&syntax), Some(4));
        let unknown = SPHERE.replace("alpha = 1.5", "alpha = 1.5\nbeta = 1");
        assert_eq!(line_of_error(&unknown), Some(6));
    }

    #[test]
    fn geometry_specific_keys_are_checked() {
        let t = SPHERE.replace("alpha = 1.5", "alpha = 1.5\n\n[detector]\nspacing = 0.5");
        let err = load(&t).unwrap_err().to_string();
        assert!(err.contains("hyperplane geometry only"), "{err}");
        let coarse = SPHERE.replace("alpha = 1.5", "alpha = 1.5\n\n[detector]\nshape = [6]");
        assert!(load(&coarse).unwrap_err().to_string().contains("resolves degree 2"));
    }

    #[test]
    fn overrides_win() {
        let over = Overrides {
            output: Some("elsewhere".into()),
            strict: true,
            cutoff: Some(CutoffSpec::Value(9.0)),
            gamma: Some(0.6),
        };
        let c = ExperimentConfig::load("t", SPHERE, &over).unwrap();
        assert_eq!(c.experiment.output.as_deref(), Some("elsewhere"));
        let r = c.regularization();
        assert!(r.strict);
        assert_eq!(r.cutoff, Cutoff::Fixed(9.0));
        assert_eq!(r.gamma, Some(0.6));
        let bad = Overrides {
            gamma: Some(1.5),
            ..Default::default()
        };
        assert!(ExperimentConfig::load("t", SPHERE, &bad).is_err());
    }

    #[test]
    fn cutoff_words_and_numbers() {
        assert_eq!("auto".parse::<CutoffSpec>(), Ok(CutoffSpec::Auto));
        assert_eq!("off".parse::<CutoffSpec>(), Ok(CutoffSpec::Off));
        assert_eq!("12.5".parse::<CutoffSpec>(), Ok(CutoffSpec::Value(12.5)));
        assert!("sharp".parse::<CutoffSpec>().is_err());
        let t = SPHERE.replace("alpha = 1.5", "alpha = 1.5\n\n[inversion]\ncutoff = 20");
        assert_eq!(load(&t).unwrap().inversion.cutoff, CutoffSpec::Value(20.0));
    }

    #[test]
    fn hyperplane_config_resolves_its_own_grid() {
        let t = "[experiment]\ngeometry = \"hyperplane\"\nn = 2\nalpha = 2\n\n[[phantom.blob]]\ncenter = [0.0, 0.0]\nsigma = 0.5\n";
        let c = load(t).unwrap();
        assert_eq!(c.time_grid().unwrap(), TimeGrid::plane(2.0));
        assert_eq!(c.plane_grid().unwrap(), PlaneGrid::new(1, 64, 0.25).unwrap());
        let wrong = t.replace("[0.0, 0.0]", "[0.0]");
        assert_eq!(line_of_error(&wrong), Some(7));
    }

    proptest! {
        #[test]
        fn echo_round_trips(
            alpha in 1.01f64..2.0,
            seed in any::<u64>(),
            sigma in 0.5f64..1.0,
            amp in -5.0f64..5.0,
            cutoff in prop::option::of(1.0f64..60.0),
            noise in 0.0f64..0.1,
            sphere in any::<bool>(),
        ) {
            let geo = if sphere { "sphere" } else { "hyperplane" };
            let mut text = format!(
                "[experiment]\ngeometry = \"{geo}\"\nn = 2\nalpha = {alpha:?}\nseed = {seed}\n\n\
                 [[phantom.blob]]\ncenter = [0.0, 0.25]\nsigma = {sigma:?}\namp = {amp:?}\n\n\
                 [noise]\nlevel = {noise:?}\n"
            );
            if let Some(c) = cutoff {
                text.push_str(&format!("\n[inversion]\ncutoff = {c:?}\n"));
            }
            let c = load(&text).unwrap();
            prop_assert_eq!(&c, &load(&c.to_toml()).unwrap());
        }
    }
}
