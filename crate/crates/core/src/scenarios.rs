//! Experiment pipelines: prepare an initial state, evolve it, and sample
//! the measures on a uniform time grid.
//!
//! Times are reported as `t'`. For PT and non-PT evolutions that is
//! `delta_e * t`; for Rabi and damping runs it is plain time.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::dynamics::{
    damped_state, propagate_raw, DensityMatrix, EvolutionSpec, Generator, DEFAULT_DT, MIN_TRACE,
};
use crate::error::{Error, Result};
use crate::matrix::{Complex, ComplexMatrix};
use crate::metrics::{
    bell_max, concurrence, purity, steering_parameter, CHSH_CLASSICAL_BOUND,
    STEERING_CLASSICAL_BOUND,
};

/// Grid size used by the figure presets.
pub const DEFAULT_SAMPLES: usize = 501;

/// Non-Hermiticity used by the figure presets.
pub const DEFAULT_ALPHA: f64 = FRAC_PI_4;

/// Symmetry-breaking strength of the non-PT presets.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Damping rate used to prepare the mixed initial states.
pub const DEFAULT_GAMMA: f64 = 1.0;

/// Cut-off times of the three damped initial states.
pub const DAMPING_CUTOFFS: [f64; 3] = [0.5, 1.0, 1.6];

/// Width in `t'` at which the peak search stops refining.
pub const PEAK_TOL: f64 = 1e-6;

/// `(|00> + |11>)/sqrt 2`.
pub fn bell_phi_plus() -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4).expect("4x4");
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = Complex::new(0.5, 0.0);
    }
    DensityMatrix::new(m).expect("Bell state is valid")
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum InitialState {
    BellPhiPlus,
    /// Bell state after qubit 1 was amplitude-damped for `t_c` at `gamma`.
    Damped {
        t_c: f64,
        gamma: f64,
    },
    Explicit(DensityMatrix),
}

impl InitialState {
    /// The prepared state, normalized.
    pub fn prepare(&self) -> Result<DensityMatrix> {
        match *self {
            Self::BellPhiPlus => Ok(bell_phi_plus()),
            Self::Damped { t_c, gamma } => damped_state(t_c, gamma),
            Self::Explicit(rho) => rho.normalized(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Concurrence,
    BellMax,
    S2,
    S3,
    Purity,
    TraceRaw,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Concurrence,
        Metric::BellMax,
        Metric::S2,
        Metric::S3,
        Metric::Purity,
        Metric::TraceRaw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Concurrence => "concurrence",
            Metric::BellMax => "bell_max",
            Metric::S2 => "s2",
            Metric::S3 => "s3",
            Metric::Purity => "purity",
            Metric::TraceRaw => "trace_raw",
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown metric {s:?}")))
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub initial: InitialState,
    pub evolution: EvolutionSpec,
    /// End of the grid, in `t'`.
    pub t_max: f64,
    pub n_samples: usize,
    /// Sorted, without duplicates.
    pub metrics: Vec<Metric>,
    /// RK4 step, in `t'`.
    pub dt: f64,
}

impl ScenarioConfig {
    /// A run sampling every metric with the default grid and step.
    pub fn new(initial: InitialState, evolution: EvolutionSpec) -> Self {
        Self {
            initial,
            evolution,
            t_max: 2.0 * PI,
            n_samples: DEFAULT_SAMPLES,
            metrics: Metric::ALL.to_vec(),
            dt: DEFAULT_DT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.evolution.validate()?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidParameter {
                name: "t_max",
                value: self.t_max,
                reason: "must be finite and positive",
            });
        }
        if self.n_samples < 2 {
            return Err(Error::InvalidParameter {
                name: "n_samples",
                value: self.n_samples as f64,
                reason: "need at least two samples",
            });
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: self.dt,
                reason: "step must be finite and positive",
            });
        }
        if self.metrics.is_empty() {
            return Err(Error::Config("metric set is empty".into()));
        }
        Ok(())
    }

    pub fn has(&self, metric: Metric) -> bool {
        self.metrics.contains(&metric)
    }

    /// `t'` of sample `k`.
    pub fn sample_time(&self, k: usize) -> f64 {
        if k + 1 == self.n_samples {
            self.t_max
        } else {
            self.t_max * k as f64 / (self.n_samples - 1) as f64
        }
    }
}

/// One sample of a series; metrics not requested are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricsRecord {
    pub t_prime: f64,
    pub trace_raw: Option<f64>,
    pub concurrence: Option<f64>,
    pub bell_max: Option<f64>,
    pub s2: Option<f64>,
    pub s3: Option<f64>,
    pub purity: Option<f64>,
}

impl MetricsRecord {
    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Concurrence => self.concurrence,
            Metric::BellMax => self.bell_max,
            Metric::S2 => self.s2,
            Metric::S3 => self.s3,
            Metric::Purity => self.purity,
            Metric::TraceRaw => self.trace_raw,
        }
    }
}

/// States along a run, before the measures are taken.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Normalized states.
    pub states: Vec<DensityMatrix>,
    /// Trace the unnormalized evolution would have, relative to the start.
    pub raw_traces: Vec<f64>,
}

struct Stepper {
    generator: Generator,
    unit: f64,
    dt_abs: f64,
    renormalize: bool,
}

impl Stepper {
    fn new(cfg: &ScenarioConfig) -> Result<Self> {
        let unit = cfg.evolution.time_unit();
        Ok(Self {
            generator: Generator::new(&cfg.evolution)?,
            unit,
            dt_abs: cfg.dt / unit,
            renormalize: cfg.evolution.needs_renormalization(),
        })
    }

    /// Advances a normalized state by `dt_prime`; returns the new normalized
    /// state and the factor by which the raw trace changed.
    fn advance(&self, rho: &DensityMatrix, dt_prime: f64) -> Result<(DensityMatrix, f64)> {
        let raw = propagate_raw(
            rho.matrix(),
            &self.generator,
            dt_prime / self.unit,
            self.dt_abs,
        )?;
        let factor = raw.trace().re;
        let state = if self.renormalize {
            DensityMatrix::new(raw.scale_re(1.0 / factor))?
        } else {
            DensityMatrix::new(raw)?
        };
        Ok((state, factor))
    }
}

/// Evolves the initial state across the grid of `cfg`.
///
/// The state is renormalized at every sample for PT and non-PT runs. The
/// dynamics is linear, so this gives the same states as one raw run while
/// keeping the numbers bounded.
pub fn run_trajectory(cfg: &ScenarioConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let stepper = Stepper::new(cfg)?;
    let mut state = cfg.initial.prepare()?;
    let mut raw = 1.0;
    let mut out = Trajectory {
        times: vec![0.0],
        states: vec![state],
        raw_traces: vec![raw],
    };
    for k in 1..cfg.n_samples {
        let t = cfg.sample_time(k);
        let (next, factor) = stepper.advance(&state, t - out.times[k - 1])?;
        raw *= factor;
        if !raw.is_finite() {
            return Err(Error::Numerical(format!(
                "raw trace overflowed at t' = {t}"
            )));
        }
        if raw <= MIN_TRACE {
            return Err(Error::TraceCollapse { trace: raw });
        }
        state = next;
        out.times.push(t);
        out.states.push(state);
        out.raw_traces.push(raw);
    }
    Ok(out)
}

/// Computes the requested measures for one normalized state.
pub fn measure(
    rho: &DensityMatrix,
    t_prime: f64,
    trace_raw: f64,
    metrics: &[Metric],
) -> Result<MetricsRecord> {
    let mut rec = MetricsRecord {
        t_prime,
        ..Default::default()
    };
    for &m in metrics {
        let v = match m {
            Metric::Concurrence => concurrence(rho, false)?,
            Metric::BellMax => bell_max(rho)?,
            Metric::S2 => steering_parameter(rho, 2)?.0,
            Metric::S3 => steering_parameter(rho, 3)?.0,
            Metric::Purity => purity(rho)?,
            Metric::TraceRaw => trace_raw,
        };
        if !v.is_finite() {
            return Err(Error::Numerical(format!(
                "{m} is not finite at t' = {t_prime}"
            )));
        }
        let slot = match m {
            Metric::Concurrence => &mut rec.concurrence,
            Metric::BellMax => &mut rec.bell_max,
            Metric::S2 => &mut rec.s2,
            Metric::S3 => &mut rec.s3,
            Metric::Purity => &mut rec.purity,
            Metric::TraceRaw => &mut rec.trace_raw,
        };
        *slot = Some(v);
    }
    Ok(rec)
}

/// Samples the requested measures on `n_samples` uniform points of
/// `[0, t_max]`. Record 0 is the prepared initial state itself.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<MetricsRecord>> {
    let traj = run_trajectory(cfg)?;
    traj.times
        .iter()
        .zip(&traj.states)
        .zip(&traj.raw_traces)
        .map(|((&t, rho), &raw)| measure(rho, t, raw, &cfg.metrics))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 3] = [FigureId::Fig2, FigureId::Fig4, FigureId::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One curve of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureCurve {
    pub label: String,
    pub config: ScenarioConfig,
}

fn cutoff_label(t_c: f64) -> String {
    format!("tc{t_c}")
}

/// The runs behind each figure, all with `s = 1` and `alpha = pi/4`:
///
/// * `fig2`: Rabi (`g = 1`) and PT evolution of the Bell state,
/// * `fig4`: PT evolution of the three damped states,
/// * `fig5`: non-PT evolution (`epsilon = 0.01`) of the same states.
pub fn figure_preset(id: FigureId) -> Vec<FigureCurve> {
    let pt = EvolutionSpec::pt(1.0, DEFAULT_ALPHA).expect("valid preset");
    let damped = |evolution: EvolutionSpec| {
        DAMPING_CUTOFFS
            .iter()
            .map(|&t_c| FigureCurve {
                label: cutoff_label(t_c),
                config: ScenarioConfig::new(
                    InitialState::Damped {
                        t_c,
                        gamma: DEFAULT_GAMMA,
                    },
                    evolution,
                ),
            })
            .collect()
    };
    match id {
        FigureId::Fig2 => vec![
            FigureCurve {
                label: "rabi".into(),
                config: ScenarioConfig::new(
                    InitialState::BellPhiPlus,
                    EvolutionSpec::rabi(1.0).expect("valid preset"),
                ),
            },
            FigureCurve {
                label: "pt".into(),
                config: ScenarioConfig::new(InitialState::BellPhiPlus, pt),
            },
        ],
        FigureId::Fig4 => damped(pt),
        FigureId::Fig5 => damped(
            EvolutionSpec::non_pt(1.0, DEFAULT_ALPHA, DEFAULT_EPSILON).expect("valid preset"),
        ),
    }
}

/// A stretch of the grid where a measure sits above its classical bound.
/// `enter` is 0 if the series starts above the bound and `exit` is `t_max`
/// if it ends above it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub enter: f64,
    pub exit: f64,
}

/// Intervals where `values > bound`, with the boundaries placed by linear
/// interpolation between neighbouring samples.
pub fn crossings(times: &[f64], values: &[f64], bound: f64) -> Vec<Crossing> {
    let mut out = Vec::new();
    let mut enter = None;
    if let (Some(&t0), Some(&v0)) = (times.first(), values.first()) {
        if v0 > bound {
            enter = Some(t0);
        }
    }
    for k in 1..times.len().min(values.len()) {
        let (v0, v1) = (values[k - 1], values[k]);
        let above0 = v0 > bound;
        let above1 = v1 > bound;
        if above0 == above1 {
            continue;
        }
        let t = times[k - 1] + (bound - v0) / (v1 - v0) * (times[k] - times[k - 1]);
        if above1 {
            enter = Some(t);
        } else if let Some(e) = enter.take() {
            out.push(Crossing { enter: e, exit: t });
        }
    }
    if let (Some(e), Some(&t_end)) = (enter, times.last()) {
        out.push(Crossing {
            enter: e,
            exit: t_end,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncreaseReport {
    pub c_initial: f64,
    pub c_max: f64,
    pub t_at_max: f64,
    pub increased: bool,
    /// `None` when `bell_max` was not sampled.
    pub bell_crossings: Option<Vec<Crossing>>,
    /// `None` when `s3` was not sampled.
    pub steering_crossings: Option<Vec<Crossing>>,
}

fn golden_max(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > PEAK_TOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Whether the run raises the concurrence above its starting value, and
/// where `bell_max` and `s3` cross their classical bounds.
///
/// The maximum is taken over the grid, then refined by a golden-section
/// search over the two grid cells around the best sample.
pub fn entanglement_increase_report(cfg: &ScenarioConfig) -> Result<IncreaseReport> {
    if !cfg.has(Metric::Concurrence) {
        return Err(Error::Config(
            "the increase report needs the concurrence metric".into(),
        ));
    }
    let traj = run_trajectory(cfg)?;
    let records = traj
        .times
        .iter()
        .zip(&traj.states)
        .zip(&traj.raw_traces)
        .map(|((&t, rho), &raw)| measure(rho, t, raw, &cfg.metrics))
        .collect::<Result<Vec<_>>>()?;
    let series = |m: Metric| -> Option<Vec<f64>> {
        cfg.has(m)
            .then(|| records.iter().map(|r| r.get(m).expect("sampled")).collect())
    };
    let c = series(Metric::Concurrence).expect("checked above");

    let (best, _) = c
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    let mut c_max = c[best];
    let mut t_at_max = traj.times[best];

    let lo = best.saturating_sub(1);
    let hi = (best + 1).min(c.len() - 1);
    let stepper = Stepper::new(cfg)?;
    let start = traj.states[lo];
    let t_lo = traj.times[lo];
    let (t_ref, c_ref) = golden_max(
        |t| {
            let (rho, _) = stepper.advance(&start, t - t_lo)?;
            concurrence(&rho, false)
        },
        t_lo,
        traj.times[hi],
    )?;
    if c_ref > c_max {
        c_max = c_ref;
        t_at_max = t_ref;
    }

    Ok(IncreaseReport {
        c_initial: c[0],
        c_max,
        t_at_max,
        increased: c_max > c[0] + 1e-9,
        bell_crossings: series(Metric::BellMax)
            .map(|v| crossings(&traj.times, &v, CHSH_CLASSICAL_BOUND)),
        steering_crossings: series(Metric::S3)
            .map(|v| crossings(&traj.times, &v, STEERING_CLASSICAL_BOUND)),
    })
}
