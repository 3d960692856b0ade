use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fracwave::forward::{forward_directional, forward_hyperplane, DetectorSeries, Geometry};
use fracwave::invert::{invert_hyperplane, invert_spherical, HyperplaneInversion, InversionReport};
use fracwave::selftest::{self, Faults};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::Normal;

use crate::config::{ExperimentConfig, GeometryName};
use crate::error::{CliError, CliResult};

pub const DEFAULT_OUTPUT: &str = "fracwave-out";

pub struct Ctx {
    pub quiet: bool,
}

impl Ctx {
    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    PathBuf::from(cfg.experiment.output.as_deref().unwrap_or(DEFAULT_OUTPUT))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(CliError::io(path))
}

fn prepare(cfg: &ExperimentConfig) -> CliResult<PathBuf> {
    let dir = output_dir(cfg);
    fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
    write(&dir.join("config.toml"), &cfg.to_toml())?;
    Ok(dir)
}

/// Additive Gaussian noise with standard deviation `level` times the peak
/// magnitude, drawn node by node in time order.
pub fn add_noise(data: &mut DetectorSeries, level: f64, seed: u64) {
    if level == 0.0 {
        return;
    }
    let peak = data.values.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    if peak == 0.0 {
        return;
    }
    let dist = Normal::new(0.0, level * peak).expect("positive standard deviation");
    let mut rng = StdRng::seed_from_u64(seed);
    for v in data.values.iter_mut().flatten() {
        *v += rng.sample(dist);
    }
}

pub fn simulate(cfg: &ExperimentConfig, ctx: &Ctx) -> CliResult<(PathBuf, DetectorSeries)> {
    let start = Instant::now();
    let dir = prepare(cfg)?;
    let p = cfg
        .phantom()
        .map_err(CliError::core("phantom"))?
        .ok_or_else(|| CliError::Usage("simulate needs a [phantom] section with at least one blob or mode".into()))?;
    let alpha = cfg.experiment.alpha;
    let time = cfg.time_grid().map_err(CliError::core("time grid"))?;
    let strict = cfg.inversion.strict;
    let mut data = match cfg.experiment.geometry {
        GeometryName::Sphere => {
            let grid = cfg.sphere_grid().map_err(CliError::core("detector grid"))?;
            let (c1, c2) = cfg.weights();
            let lmax = cfg.sphere_options().max_degree;
            forward_directional(&p, alpha, c1, c2, &grid, &time, lmax).map_err(CliError::core("forward model"))?
        }
        GeometryName::Hyperplane => {
            let plane = cfg.plane_grid().map_err(CliError::core("detector grid"))?;
            forward_hyperplane(&p, alpha, &plane, &time, strict).map_err(CliError::core("forward model"))?
        }
    };
    add_noise(&mut data, cfg.noise.level, cfg.experiment.seed);
    let path = dir.join("data.csv");
    write(&path, &data.to_csv())?;
    ctx.say(format!(
        "simulate: {} nodes x {} samples -> {} ({:.1} s)",
        data.grid.len(),
        data.time.count + 1,
        path.display(),
        start.elapsed().as_secs_f64()
    ));
    Ok((path, data))
}

pub fn read_data(path: &Path) -> CliResult<DetectorSeries> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    DetectorSeries::from_csv(&text).map_err(CliError::core(path.display().to_string()))
}

fn check_consistent(cfg: &ExperimentConfig, data: &DetectorSeries) -> CliResult<()> {
    let geo = match data.geometry() {
        Geometry::Sphere => GeometryName::Sphere,
        Geometry::Hyperplane => GeometryName::Hyperplane,
    };
    let e = &cfg.experiment;
    if geo != e.geometry || data.n != e.n || data.alpha != e.alpha {
        return Err(CliError::Usage(format!(
            "data is {geo} n = {} alpha = {} but the config says {} n = {} alpha = {}",
            data.n, data.alpha, e.geometry, e.n, e.alpha
        )));
    }
    Ok(())
}

fn spectrum_csv(inv: &HyperplaneInversion) -> String {
    let mut s = String::new();
    let dim = inv.eta_star.first().map_or(0, Vec::len);
    let mut head: Vec<String> = (0..dim).map(|i| format!("eta{i}")).collect();
    head.extend(["eta_n", "re", "im", "band"].map(String::from));
    s.push_str(&head.join(","));
    s.push('\n');
    for ((es, row), band) in inv.eta_star.iter().zip(&inv.spectrum).zip(&inv.band) {
        for ((en, v), b) in inv.eta_n.iter().zip(row).zip(band) {
            for c in es {
                let _ = write!(s, "{c:.16e},");
            }
            let _ = writeln!(s, "{en:.16e},{:.16e},{:.16e},{}", v.re, v.im, u8::from(*b));
        }
    }
    s
}

fn report_text(cfg: &ExperimentConfig, data_path: &Path, data: &DetectorSeries, inv: &InversionReport) -> String {
    let mut s = String::from("fracwave reconstruction report\n\n");
    let _ = writeln!(s, "data                {}", data_path.display());
    let _ = writeln!(s, "detector nodes      {}", data.grid.len());
    let _ = writeln!(s, "time samples        {}", data.time.count + 1);
    let _ = writeln!(
        s,
        "time range          [{:.6e}, {:.6e}]",
        data.time.tau_min.exp(),
        data.time.tau_max.exp()
    );
    if data.geometry() == Geometry::Sphere {
        let o = cfg.sphere_options();
        let (lo, hi) = cfg.error_band();
        let _ = writeln!(s, "max degree          {}", o.max_degree);
        let _ = writeln!(s, "direction weights   ({}, {})", data.weights.0, data.weights.1);
        let _ = writeln!(s, "wavenumbers         [{}, {}] step {}", o.lambda_min, o.lambda_max, o.lambda_step);
        if inv.profile_error.is_some() {
            let _ = writeln!(s, "profile error band  [{lo}, {hi}]");
        }
    }
    let _ = writeln!(s, "truth               {}", if cfg.phantom.is_empty() { "none" } else { "phantom from config" });
    s.push('\n');
    s.push_str(&inv.to_text());
    s
}

pub fn reconstruct(cfg: &ExperimentConfig, data_path: &Path, ctx: &Ctx) -> CliResult<()> {
    let start = Instant::now();
    let data = read_data(data_path)?;
    check_consistent(cfg, &data)?;
    let dir = prepare(cfg)?;
    let reg = cfg.regularization();
    let truth = cfg.phantom().map_err(CliError::core("phantom"))?;
    let (recon, report, extra) = match data.geometry() {
        Geometry::Sphere => {
            let mut inv =
                invert_spherical(&data, &cfg.sphere_options(), &reg).map_err(CliError::core("sphere inversion"))?;
            if let Some(p) = &truth {
                inv.attach_truth(p, cfg.error_band()).map_err(CliError::core("error summary"))?;
            }
            (inv.recon, inv.report, ("profiles.csv", inv.profiles.to_csv()))
        }
        Geometry::Hyperplane => {
            let mut inv = invert_hyperplane(&data, &reg).map_err(CliError::core("hyperplane inversion"))?;
            if let Some(p) = &truth {
                inv.attach_truth(p).map_err(CliError::core("error summary"))?;
            }
            let csv = spectrum_csv(&inv);
            (inv.recon, inv.report, ("spectrum.csv", csv))
        }
    };
    write(&dir.join("recon.csv"), &recon.to_csv())?;
    let title = format!("{} n = {} alpha = {}", cfg.experiment.geometry, cfg.experiment.n, cfg.experiment.alpha);
    write(&dir.join("recon.svg"), &recon.to_svg(&title))?;
    write(&dir.join(extra.0), &extra.1)?;
    let text = report_text(cfg, data_path, &data, &report);
    write(&dir.join("report.txt"), &text)?;
    if !ctx.quiet {
        print!("{text}");
    }
    ctx.say(format!(
        "reconstruct: wrote {} ({:.1} s)",
        dir.display(),
        start.elapsed().as_secs_f64()
    ));
    Ok(())
}

pub fn roundtrip(cfg: &ExperimentConfig, ctx: &Ctx) -> CliResult<()> {
    if cfg.phantom.is_empty() {
        return Err(CliError::Usage("roundtrip needs a [phantom] section".into()));
    }
    let (path, _) = simulate(cfg, ctx)?;
    reconstruct(cfg, &path, ctx)
}

pub fn list_suites() -> String {
    let mut s = String::new();
    for suite in selftest::suites() {
        let _ = writeln!(s, "{:<12}{}", suite.name, suite.about);
    }
    s
}

pub fn run_selftest(only: &[String], faults: &Faults, ctx: &Ctx) -> CliResult<()> {
    let report = selftest::run(only, faults).map_err(CliError::core("selftest"))?;
    if !ctx.quiet {
        print!("{}", report.to_text());
    }
    let failed = report.failures().len();
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Selftest(failed.max(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracwave::forward::{DetectorGrid, PlaneGrid, TimeGrid};

    fn series() -> DetectorSeries {
        DetectorSeries {
            n: 2,
            alpha: 1.5,
            grid: DetectorGrid::Plane(PlaneGrid::new(1, 4, 0.5).unwrap()),
            time: TimeGrid::new(-1.0, 1.0, 16).unwrap(),
            weights: (1.0, 0.0),
            values: vec![vec![1.0; 17]; 4],
        }
    }

    #[test]
    fn noise_is_seeded_and_scaled() {
        let mut a = series();
        let mut b = series();
        add_noise(&mut a, 0.1, 7);
        add_noise(&mut b, 0.1, 7);
        assert_eq!(a, b);
        let mut c = series();
        add_noise(&mut c, 0.1, 8);
        assert_ne!(a, c);
        let dev: Vec<f64> = a.values.iter().flatten().map(|v| v - 1.0).collect();
        let sd = (dev.iter().map(|d| d * d).sum::<f64>() / dev.len() as f64).sqrt();
        assert!(sd > 0.05 && sd < 0.15, "{sd}");
        let mut d = series();
        add_noise(&mut d, 0.0, 7);
        assert_eq!(d, series());
    }

    #[test]
    fn suites_are_listed() {
        let s = list_suites();
        for name in ["specfun", "mellin", "multipliers", "harmonics", "fraccalc", "inversion"] {
            assert!(s.contains(name));
        }
    }
}
