//! Files read and written by the command-line tool: scenario configs and
//! state files (JSON), metric series (CSV) and figure manifests.
//!
//! Every output file is written to a temporary sibling first and renamed
//! into place, so readers never see a half-written file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dynamics::{DensityMatrix, EvolutionSpec};
use crate::error::{Error, Result};
use crate::matrix::{Complex, ComplexMatrix};
use crate::metrics::{StateReport, CHSH_CLASSICAL_BOUND, STEERING_CLASSICAL_BOUND};
use crate::scenarios::{
    bell_phi_plus, figure_preset, run_scenario, FigureId, InitialState, Metric, MetricsRecord,
    ScenarioConfig, DEFAULT_SAMPLES,
};

/// Header of every series file.
pub const CSV_HEADER: &str = "t_prime,trace_raw,concurrence,bell_max,s2,s3,purity";

/// Significant digits of every number in a series file.
pub const CSV_DIGITS: usize = 12;

/// Column order of [`CSV_HEADER`] after `t_prime`.
const CSV_COLUMNS: [Metric; 6] = [
    Metric::TraceRaw,
    Metric::Concurrence,
    Metric::BellMax,
    Metric::S2,
    Metric::S3,
    Metric::Purity,
];

/// A 4x4 matrix as rows of `[re, im]` pairs.
pub type MatrixRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub matrix: MatrixRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix, label: Option<&str>) -> Self {
        let m = rho.matrix();
        Self {
            matrix: (0..4)
                .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
            label: label.map(str::to_string),
        }
    }

    /// Validates the matrix as a density matrix.
    pub fn to_state(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(rows_to_matrix(&self.matrix)?)
    }
}

fn rows_to_matrix(rows: &MatrixRows) -> Result<ComplexMatrix> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Error::InvalidDimension {
            expected: "4x4 matrix of [re, im] pairs".into(),
            found: rows.len(),
        });
    }
    let rows: Vec<Vec<Complex>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

pub fn parse_state(text: &str) -> Result<StateFile> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("state file: {e}")))
}

pub fn read_state(path: &Path) -> Result<(DensityMatrix, Option<String>)> {
    let text = read_to_string(path)?;
    let file = parse_state(&text)?;
    Ok((file.to_state()?, file.label))
}

pub fn write_state(path: &Path, rho: &DensityMatrix, label: Option<&str>) -> Result<()> {
    let text = serde_json::to_string_pretty(&StateFile::from_state(rho, label))
        .map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(path, format!("{text}\n").as_bytes())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    BellPhiPlus,
    Damped { t_c: f64, gamma: f64 },
    Explicit { matrix: MatrixRows },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EvolutionConfig {
    Rabi { g: f64 },
    Pt { s: f64, alpha: f64 },
    Nonpt { s: f64, alpha: f64, epsilon: f64 },
    Damping { gamma: f64 },
}

fn default_initial() -> InitialConfig {
    InitialConfig::BellPhiPlus
}

fn default_t_max() -> f64 {
    2.0 * std::f64::consts::PI
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_metrics() -> Vec<String> {
    Metric::ALL.iter().map(|m| m.name().to_string()).collect()
}

fn default_dt() -> f64 {
    crate::dynamics::DEFAULT_DT
}

/// On-disk form of a [`ScenarioConfig`]; field names match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default = "default_initial")]
    pub initial: InitialConfig,
    pub evolution: EvolutionConfig,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<String>,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

/// Command-line values that replace the ones in a config file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub s: Option<f64>,
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub t_max: Option<f64>,
    pub n_samples: Option<usize>,
    pub dt: Option<f64>,
}

fn not_applicable(name: &str, evolution: &EvolutionConfig) -> Error {
    let kind = match evolution {
        EvolutionConfig::Rabi { .. } => "rabi",
        EvolutionConfig::Pt { .. } => "pt",
        EvolutionConfig::Nonpt { .. } => "nonpt",
        EvolutionConfig::Damping { .. } => "damping",
    };
    Error::Config(format!("override {name} does not apply to a {kind} run"))
}

impl ConfigFile {
    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(v) = o.alpha {
            match &mut self.evolution {
                EvolutionConfig::Pt { alpha, .. } | EvolutionConfig::Nonpt { alpha, .. } => {
                    *alpha = v
                }
                e => return Err(not_applicable("alpha", e)),
            }
        }
        if let Some(v) = o.s {
            match &mut self.evolution {
                EvolutionConfig::Pt { s, .. } | EvolutionConfig::Nonpt { s, .. } => *s = v,
                e => return Err(not_applicable("s", e)),
            }
        }
        if let Some(v) = o.epsilon {
            match &mut self.evolution {
                EvolutionConfig::Nonpt { epsilon, .. } => *epsilon = v,
                e => return Err(not_applicable("epsilon", e)),
            }
        }
        if let Some(v) = o.gamma {
            // Sets the damping rate wherever one appears.
            let mut used = false;
            if let InitialConfig::Damped { gamma, .. } = &mut self.initial {
                *gamma = v;
                used = true;
            }
            if let EvolutionConfig::Damping { gamma } = &mut self.evolution {
                *gamma = v;
                used = true;
            }
            if !used {
                return Err(not_applicable("gamma", &self.evolution));
            }
        }
        if let Some(v) = o.t_max {
            self.t_max = v;
        }
        if let Some(v) = o.n_samples {
            self.n_samples = v;
        }
        if let Some(v) = o.dt {
            self.dt = v;
        }
        Ok(())
    }

    pub fn to_scenario(&self) -> Result<ScenarioConfig> {
        let initial = match &self.initial {
            InitialConfig::BellPhiPlus => InitialState::BellPhiPlus,
            &InitialConfig::Damped { t_c, gamma } => InitialState::Damped { t_c, gamma },
            InitialConfig::Explicit { matrix } => {
                InitialState::Explicit(DensityMatrix::new(rows_to_matrix(matrix)?)?)
            }
        };
        let evolution = match self.evolution {
            EvolutionConfig::Rabi { g } => EvolutionSpec::rabi(g)?,
            EvolutionConfig::Pt { s, alpha } => EvolutionSpec::pt(s, alpha)?,
            EvolutionConfig::Nonpt { s, alpha, epsilon } => {
                EvolutionSpec::non_pt(s, alpha, epsilon)?
            }
            EvolutionConfig::Damping { gamma } => EvolutionSpec::amplitude_damping(gamma)?,
        };
        let mut metrics = self
            .metrics
            .iter()
            .map(|m| m.parse())
            .collect::<Result<Vec<Metric>>>()?;
        metrics.sort();
        metrics.dedup();
        let cfg = ScenarioConfig {
            initial,
            evolution,
            t_max: self.t_max,
            n_samples: self.n_samples,
            metrics,
            dt: self.dt,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
}

/// Reads a config, applies the overrides and validates the result.
pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ScenarioConfig> {
    let mut file = parse_config(&read_to_string(path)?)?;
    file.apply(overrides)?;
    file.to_scenario()
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `v` with [`CSV_DIGITS`] significant digits, in plain notation for
/// moderate magnitudes and scientific otherwise. Trailing zeros are dropped.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", CSV_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..CSV_DIGITS as i32).contains(&exp) {
        let decimals = (CSV_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Renders a series with [`CSV_HEADER`]; absent metrics become empty fields.
pub fn series_csv(records: &[MetricsRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 96);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format_number(r.t_prime));
        for m in CSV_COLUMNS {
            out.push(',');
            if let Some(v) = r.get(m) {
                out.push_str(&format_number(v));
            }
        }
        out.push('\n');
    }
    out
}

/// Writes `bytes` to a temporary file next to `path` and renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

pub fn write_series(path: &Path, records: &[MetricsRecord]) -> Result<()> {
    write_atomic(path, series_csv(records).as_bytes())
}

fn evolution_json(spec: &EvolutionSpec) -> serde_json::Value {
    match *spec {
        EvolutionSpec::Rabi { g } => json!({ "type": "rabi", "g": g }),
        EvolutionSpec::Pt(p) => json!({ "type": "pt", "s": p.s(), "alpha": p.alpha() }),
        EvolutionSpec::NonPt { params, epsilon } => json!({
            "type": "nonpt", "s": params.s(), "alpha": params.alpha(), "epsilon": epsilon
        }),
        EvolutionSpec::AmplitudeDamping { gamma } => json!({ "type": "damping", "gamma": gamma }),
    }
}

fn initial_json(initial: &InitialState) -> serde_json::Value {
    match *initial {
        InitialState::BellPhiPlus => json!("bell_phi_plus"),
        InitialState::Damped { t_c, gamma } => json!({ "damped": { "t_c": t_c, "gamma": gamma } }),
        InitialState::Explicit(rho) => json!({ "explicit": StateFile::from_state(&rho, None) }),
    }
}

/// Runs every curve of a figure (concurrently) and writes
/// `<id>_<label>.csv` per curve plus `<id>_manifest.json` into `out_dir`.
/// Returns the written paths, manifest last.
pub fn write_figure(id: FigureId, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))?;
    let curves = figure_preset(id);
    let results: Vec<Result<Vec<MetricsRecord>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = curves
            .iter()
            .map(|c| scope.spawn(|| run_scenario(&c.config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    });

    let mut paths = Vec::new();
    let mut entries = Vec::new();
    for (curve, records) in curves.iter().zip(results) {
        let file = format!("{id}_{}.csv", curve.label);
        let path = out_dir.join(&file);
        write_series(&path, &records?)?;
        paths.push(path);
        let c = &curve.config;
        entries.push(json!({
            "label": curve.label,
            "file": file,
            "initial": initial_json(&c.initial),
            "evolution": evolution_json(&c.evolution),
            "t_max": c.t_max,
            "n_samples": c.n_samples,
            "dt": c.dt,
            "metrics": c.metrics.iter().map(|m| m.name()).collect::<Vec<_>>(),
        }));
    }
    let manifest = json!({ "figure": id.name(), "curves": entries });
    let path = out_dir.join(format!("{id}_manifest.json"));
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(&path, format!("{text}\n").as_bytes())?;
    paths.push(path);
    Ok(paths)
}

/// Names accepted by [`preset_state`].
pub const STATE_PRESETS: [&str; 5] = ["bell", "mixed", "is1", "is2", "is3"];

/// Built-in states: the Bell state, the maximally mixed state and the three
/// damped states (`t_c` = 0.5, 1, 1.6 at `gamma` = 1).
pub fn preset_state(name: &str) -> Option<DensityMatrix> {
    let damped = |t_c| crate::dynamics::damped_state(t_c, 1.0).ok();
    match name {
        "bell" => Some(bell_phi_plus()),
        "mixed" => DensityMatrix::new(ComplexMatrix::identity(4).ok()?.scale_re(0.25)).ok(),
        "is1" => damped(0.5),
        "is2" => damped(1.0),
        "is3" => damped(1.6),
        _ => None,
    }
}

fn format_matrix_2x2(out: &mut String, m: &ComplexMatrix) {
    for i in 0..2 {
        out.push_str("    [");
        for j in 0..2 {
            let z = m[(i, j)];
            let sep = if j == 0 { "" } else { ", " };
            let _ = write!(
                out,
                "{sep}{} {} {}i",
                format_number(z.re),
                sign(z.im),
                format_number(z.im.abs())
            );
        }
        out.push_str("]\n");
    }
}

fn sign(x: f64) -> char {
    if x.is_sign_negative() && x != 0.0 {
        '-'
    } else {
        '+'
    }
}

fn verdict(value: f64, bound: f64, violated: &str, holds: &str) -> String {
    if value > bound {
        format!("> {} ({violated})", format_number(bound))
    } else {
        format!("<= {} ({holds})", format_number(bound))
    }
}

/// Plain-text report printed by the `metrics` command.
pub fn format_report(report: &StateReport, label: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(l) = label {
        let _ = writeln!(out, "state: {l}");
    }
    let _ = writeln!(out, "concurrence: {}", format_number(report.concurrence));
    let _ = writeln!(
        out,
        "bell_max: {} {}",
        format_number(report.bell_max),
        verdict(
            report.bell_max,
            CHSH_CLASSICAL_BOUND,
            "violates CHSH",
            "no CHSH violation"
        )
    );
    let _ = writeln!(out, "s2: {}", format_number(report.s2));
    let _ = writeln!(
        out,
        "s3: {} {}",
        format_number(report.s3),
        verdict(
            report.s3,
            STEERING_CLASSICAL_BOUND,
            "violates steering",
            "no steering violation"
        )
    );
    let _ = writeln!(out, "purity: {}", format_number(report.purity));
    for (name, m) in [
        ("qubit 1", &report.reduced_1),
        ("qubit 2", &report.reduced_2),
    ] {
        let _ = writeln!(out, "reduced state of {name}:");
        format_matrix_2x2(&mut out, m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::analyze;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(2.0 * 2f64.sqrt()), "2.82842712475");
        assert_eq!(format_number(std::f64::consts::PI * 2.0), "6.28318530718");
        assert_eq!(format_number(0.999_999_999_999_9), "1");
        assert_eq!(format_number(-1.5e-7), "-1.5e-7");
        assert_eq!(format_number(1.234e15), "1.234e15");
        assert_eq!(format_number(0.000_012_5), "0.0000125");
    }

    #[test]
    fn csv_layout() {
        let recs = [
            MetricsRecord {
                t_prime: 0.0,
                concurrence: Some(1.0),
                ..Default::default()
            },
            MetricsRecord {
                t_prime: 0.5,
                concurrence: Some(0.25),
                purity: Some(1.0),
                ..Default::default()
            },
        ];
        let text = series_csv(&recs);
        assert_eq!(text, format!("{CSV_HEADER}\n0,,1,,,,\n0.5,,0.25,,,,1\n"));
    }

    #[test]
    fn config_defaults_and_overrides() {
        let mut cfg =
            parse_config(r#"{"evolution": {"type": "pt", "s": 1, "alpha": 0.5}}"#).unwrap();
        assert_eq!(cfg.initial, InitialConfig::BellPhiPlus);
        assert_eq!(cfg.n_samples, 501);
        cfg.apply(&Overrides {
            alpha: Some(0.2),
            n_samples: Some(11),
            ..Default::default()
        })
        .unwrap();
        let sc = cfg.to_scenario().unwrap();
        assert_eq!(sc.n_samples, 11);
        assert!(matches!(sc.evolution, EvolutionSpec::Pt(p) if p.alpha() == 0.2));
        assert_eq!(sc.metrics, Metric::ALL.to_vec());

        let err = cfg
            .clone()
            .apply(&Overrides {
                epsilon: Some(0.1),
                ..Default::default()
            })
            .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn malformed_configs() {
        for text in [
            "{",
            r#"{"evolution": {"type": "warp"}}"#,
            r#"{"evolution": {"type": "rabi", "g": 1}, "colour": 3}"#,
            r#"{"evolution": {"type": "rabi", "g": 1}, "metrics": ["entropy"]}"#,
        ] {
            let r = parse_config(text).and_then(|c| c.to_scenario());
            assert!(matches!(r, Err(Error::Config(_))), "{text}");
        }
        let bad = parse_config(r#"{"evolution": {"type": "pt", "s": 1, "alpha": 1.6}}"#).unwrap();
        assert!(matches!(
            bad.to_scenario(),
            Err(Error::InvalidParameter { name: "alpha", .. })
        ));
    }

    #[test]
    fn damped_config() {
        let text = r#"{
            "initial": {"damped": {"t_c": 1.6, "gamma": 1}},
            "evolution": {"type": "nonpt", "s": 1, "alpha": 0.7, "epsilon": 0.01},
            "metrics": ["s3", "concurrence", "s3"]
        }"#;
        let sc = parse_config(text).unwrap().to_scenario().unwrap();
        assert_eq!(sc.metrics, vec![Metric::Concurrence, Metric::S3]);
        assert_eq!(
            sc.initial,
            InitialState::Damped {
                t_c: 1.6,
                gamma: 1.0
            }
        );
    }

    #[test]
    fn state_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("is3.json");
        let rho = preset_state("is3").unwrap();
        write_state(&path, &rho, Some("is3")).unwrap();
        let (back, label) = read_state(&path).unwrap();
        assert_eq!(back, rho);
        assert_eq!(label.as_deref(), Some("is3"));
        let a = format_report(&analyze(&rho).unwrap(), None);
        let b = format_report(&analyze(&back).unwrap(), None);
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_state_names_invariant() {
        let not_psd = r#"{"matrix": [
            [[1,0],[0,0],[0,0],[0,0]],
            [[0,0],[-0.5,0],[0,0],[0,0]],
            [[0,0],[0,0],[0.25,0],[0,0]],
            [[0,0],[0,0],[0,0],[0.25,0]]]}"#;
        let err = parse_state(not_psd).unwrap().to_state().unwrap_err();
        assert!(err.to_string().contains("positive semidefinite"));
        assert!(err.to_string().contains("-5e-1"));

        let not_herm = r#"{"matrix": [
            [[0.5,0],[0.1,0],[0,0],[0,0]],
            [[0,0],[0.5,0],[0,0],[0,0]],
            [[0,0],[0,0],[0,0],[0,0]],
            [[0,0],[0,0],[0,0],[0,0]]]}"#;
        let err = parse_state(not_herm).unwrap().to_state().unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));

        let short = r#"{"matrix": [[[1,0]]]}"#;
        assert!(matches!(
            parse_state(short).unwrap().to_state(),
            Err(Error::InvalidDimension { .. })
        ));
    }

    #[test]
    fn presets_resolve() {
        for name in STATE_PRESETS {
            assert!(preset_state(name).is_some(), "{name}");
        }
        assert!(preset_state("ghz").is_none());
    }

    #[test]
    fn report_text() {
        let text = format_report(&analyze(&bell_phi_plus()).unwrap(), Some("bell"));
        assert!(text.contains("bell_max: 2.82842712475 > 2 (violates CHSH)"));
        assert!(text.contains("s3: 3 > 1 (violates steering)"));
        assert!(text.contains("reduced state of qubit 1:\n    [0.5 + 0i, 0 + 0i]"));
        let mixed = format_report(&analyze(&preset_state("mixed").unwrap()).unwrap(), None);
        assert!(mixed.contains("concurrence: 0\n"));
        assert!(mixed.contains("bell_max: 0 <= 2 (no CHSH violation)"));
        assert!(mixed.contains("purity: 0.25\n"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
