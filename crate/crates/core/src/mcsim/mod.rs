//! Langevin Monte Carlo for excursions.
//!
//! Paths of `dx = -D U0 x/(x0² + x²) dt + √(2D) dW` start at `x_start` and
//! end at the first crossing of `b = x_start/2`. A path counts as an excursion
//! of duration `τ` when `τ ∈ [T(1-δ), T]`; its area above `b` is rescaled
//! to duration `T` by `(T/τ)^{3/2}`.
//!
//! A path confined to `[b, h]` with `h = 0.3 √(DT)` survives for `T/2` with
//! probability about `e^{-55}`, so no accepted path falls back to `b` before
//! reaching `h`. The launch is therefore simulated
//! conditioned on reaching `h` first (the Doob transform with the scale
//! function of the regularized drift) and each conditioned path stands for
//! `1/p` raw launches, `p` being the probability of reaching `h`.
//!
//! For `U0 < -1` the process is transient, and after the launch paths are
//! conditioned to fall back to `b` eventually. Drifts are integrated with a
//! Heun predictor-corrector; the noise is the plain Euler increment.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::DistributionTable;
use crate::error::{Error, Result};
use crate::moments::moment_quadrature;
use crate::params::{BoundaryMode, ExcursionParams};

const KAPPA: f64 = 0.2;
const KAPPA_LAUNCH: f64 = 0.2;
const LAUNCH_HEIGHT: f64 = 0.3;
const BATCH: usize = 256;
const WAVE: usize = 16;
const PROBE_LAUNCHES: f64 = 1e6;
const MIN_ACCEPTANCE: f64 = 1e-6;
const SCALE_NODES: usize = 2048;
const RETURN_TOP: f64 = 100.0;

/// Simulation settings. Lengths are physical; `dt` is the largest step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub params: ExcursionParams,
    pub dt: f64,
    pub x_start: f64,
    pub return_window: f64,
    pub n_target: usize,
    pub seed: u64,
    pub x0_reg: f64,
}

impl McConfig {
    /// `dt = 1e-4 T`, `x_start = 0.0005 √(DT)`, `δ = 1/2`, `x0 = x_start/4`.
    pub fn new(params: ExcursionParams, n_target: usize, seed: u64) -> Result<Self> {
        let x_start = 0.0005 * (params.d * params.t).sqrt();
        let cfg = McConfig {
            params,
            dt: 1e-4 * params.t,
            x_start,
            return_window: 0.5,
            n_target,
            seed,
            x0_reg: 0.25 * x_start,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if p.mode == BoundaryMode::Continued {
            return bad("the continued law is not the law of a process; use absorbing mode".into());
        }
        if !(self.dt > 0.0 && self.dt <= 1e-2 * p.t) {
            return bad(format!("dt must be in (0, T/100], got {}", self.dt));
        }
        if !(self.x_start > 0.0 && self.x_start <= 0.1 * (p.d * p.t).sqrt()) {
            return bad(format!("x_start must be in (0, 0.1 √(DT)], got {}", self.x_start));
        }
        if !(self.return_window > 0.0 && self.return_window < 1.0) {
            return bad(format!("return window must be in (0, 1), got {}", self.return_window));
        }
        if !(self.x0_reg >= 0.0 && self.x0_reg <= 0.5 * self.x_start) {
            return bad(format!("x0_reg must be in [0, x_start/2], got {}", self.x0_reg));
        }
        if self.n_target == 0 {
            return bad("n_target must be positive".into());
        }
        Ok(())
    }

    fn return_level(&self) -> f64 {
        0.5 * self.x_start
    }
}

/// Accepted excursions, sorted by area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEnsemble {
    /// Areas rescaled to duration `T`.
    pub areas: Vec<f64>,
    /// Raw first-return times.
    pub durations: Vec<f64>,
    /// Accepted excursions per simulated (conditioned) launch.
    pub acceptance_rate: f64,
    /// Probability that a raw launch reaches the launch height; accepted
    /// excursions per raw launch are `acceptance_rate · launch_probability`.
    pub launch_probability: f64,
    pub seed: u64,
    pub config: McConfig,
}

impl McEnsemble {
    /// Areas in units of `A0`.
    pub fn a_hat(&self) -> Vec<f64> {
        let a0 = self.config.params.a0();
        self.areas.iter().map(|a| a / a0).collect()
    }

    pub fn len(&self) -> usize {
        self.areas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.areas.is_empty()
    }

    /// Rows `area,duration` after a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["area", "duration"])?;
        for (a, t) in self.areas.iter().zip(&self.durations) {
            w.write_record([format!("{a:.17e}"), format!("{t:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    /// The configuration as JSON, the sidecar of the CSV.
    pub fn config_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.config)?)
    }
}

/// `S(x) = ∫_b^x s'(y) dy` with `s'(y) = (x0² + y²)^{U0/2}`, tabulated in
/// `v = ln(x/b)` and interpolated by cubic Hermite.
struct Scale {
    b: f64,
    x0sq: f64,
    half_u0: f64,
    dv: f64,
    s: Vec<f64>,
    m: Vec<f64>,
}

impl Scale {
    fn new(b: f64, h: f64, x0: f64, u0: f64) -> Self {
        let mut sc = Scale { b, x0sq: x0 * x0, half_u0: 0.5 * u0, dv: (h / b).ln() / (SCALE_NODES - 1) as f64, s: vec![0.0; SCALE_NODES], m: Vec::new() };
        // three-point Gauss-Legendre per cell
        let r = (0.6f64).sqrt();
        let (nodes, weights) = ([-r, 0.0, r], [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0]);
        for i in 1..SCALE_NODES {
            let mid = (i as f64 - 0.5) * sc.dv;
            let cell: f64 = nodes.iter().zip(&weights).map(|(z, w)| w * sc.dsdv(mid + 0.5 * sc.dv * z)).sum();
            sc.s[i] = sc.s[i - 1] + 0.5 * sc.dv * cell;
        }
        sc.m = (0..SCALE_NODES).map(|i| sc.dsdv(i as f64 * sc.dv) * sc.dv).collect();
        sc
    }

    fn slope(&self, x: f64) -> f64 {
        (self.x0sq + x * x).powf(self.half_u0)
    }

    fn dsdv(&self, v: f64) -> f64 {
        let x = self.b * v.exp();
        x * self.slope(x)
    }

    fn value(&self, x: f64) -> f64 {
        let v = (x / self.b).ln().max(0.0);
        let u = v / self.dv;
        let i = (u as usize).min(SCALE_NODES - 2);
        let t = u - i as f64;
        let (y0, y1, m0, m1) = (self.s[i], self.s[i + 1], self.m[i], self.m[i + 1]);
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1
    }

    fn h(&self) -> f64 {
        self.s[SCALE_NODES - 1]
    }
}

struct Sim<'a> {
    cfg: &'a McConfig,
    d: f64,
    u0: f64,
    x0sq: f64,
    b: f64,
    h: f64,
    scale: &'a Scale,
    ret: Option<&'a Return>,
}

/// `R(x) = ∫_x^∞ s'(y) dy`, finite for `U0 < -1`: the chance of ever
/// falling back to `b` is `R(x)/R(b)`.
struct Return {
    scale: Scale,
    top: f64,
    beyond: f64,
}

impl Return {
    fn new(b: f64, top: f64, x0: f64, u0: f64) -> Option<Self> {
        (u0 < -1.0).then(|| Return { scale: Scale::new(b, top, x0, u0), top, beyond: top.powf(u0 + 1.0) / (-u0 - 1.0) })
    }

    fn tail(&self, x: f64) -> f64 {
        if x >= self.top {
            let p = 2.0 * self.scale.half_u0 + 1.0;
            x.powf(p) / -p
        } else {
            self.scale.h() - self.scale.value(x) + self.beyond
        }
    }
}

enum Outcome {
    Accepted { area: f64, duration: f64 },
    Rejected,
}

impl Sim<'_> {
    fn drift(&self, x: f64) -> f64 {
        -self.d * self.u0 * x / (self.x0sq + x * x)
    }

    /// Drift after the launch; transient paths are conditioned to come back.
    fn free_drift(&self, x: f64) -> f64 {
        match self.ret {
            None => self.drift(x),
            Some(r) => self.drift(x) - 2.0 * self.d * r.scale.slope(x) / r.tail(x),
        }
    }

    /// Drift of the paths conditioned to reach `h` before `b`.
    fn launch_drift(&self, x: f64) -> f64 {
        self.drift(x) + 2.0 * self.d * self.scale.slope(x) / self.scale.value(x)
    }

    /// Area is measured above the return level `b`.
    fn run(&self, rng: &mut ChaCha8Rng) -> Outcome {
        let (d, b, t_end) = (self.d, self.b, self.cfg.params.t);
        let (mut x, mut t, mut area) = (self.cfg.x_start, 0.0, 0.0);
        while x < self.h {
            let dt = (KAPPA_LAUNCH * KAPPA_LAUNCH * (x - b) * (x - b) / (2.0 * d)).min(self.cfg.dt);
            let z: f64 = rng.sample(StandardNormal);
            let (mu, noise) = (self.launch_drift(x), (2.0 * d * dt).sqrt() * z);
            let guess = x + mu * dt + noise;
            let mut next = if guess > b { x + 0.5 * (mu + self.launch_drift(guess)) * dt + noise } else { guess };
            if next <= b {
                next = 2.0 * b - next;
            }
            area += (0.5 * (x + next) - b) * dt;
            t += dt;
            x = next;
        }
        let dt_max = self.cfg.dt;
        let sigma_max = (2.0 * d * dt_max).sqrt();
        // below this height the step shrinks as x²
        let x_full = (2.0 * d * dt_max).sqrt() / KAPPA;
        while t < t_end {
            let (dt, sigma) = if x >= x_full {
                (dt_max, sigma_max)
            } else {
                let dt = KAPPA * KAPPA * x * x / (2.0 * d);
                (dt, KAPPA * x)
            };
            let z: f64 = rng.sample(StandardNormal);
            let (mu, noise) = (self.free_drift(x), sigma * z);
            let guess = x + mu * dt + noise;
            let next = if guess > b { x + 0.5 * (mu + self.free_drift(guess)) * dt + noise } else { guess };
            let gap = (x - b) * (next - b);
            let crossed = next <= b || (gap < 40.0 * d * dt && rng.gen::<f64>() < (-gap / (d * dt)).exp());
            if crossed {
                let frac = (x - b) / ((x - b) + (next - b).abs());
                let step = frac * dt;
                area += 0.5 * (x - b) * step;
                t += step;
                let lo = t_end * (1.0 - self.cfg.return_window);
                return if t >= lo && t <= t_end {
                    Outcome::Accepted { area: area * (t_end / t).powf(1.5), duration: t }
                } else {
                    Outcome::Rejected
                };
            }
            area += (0.5 * (x + next) - b) * dt;
            t += dt;
            x = next;
        }
        Outcome::Rejected
    }
}

/// Simulates until `n_target` excursions are accepted.
///
/// Batches of launches use independent ChaCha8 streams indexed by batch, and
/// are merged in batch order, so the result does not depend on the number of
/// threads.
pub fn sample_excursions(config: &McConfig) -> Result<McEnsemble> {
    config.validate()?;
    let p = &config.params;
    let b = config.return_level();
    let h = LAUNCH_HEIGHT * (p.d * p.t).sqrt();
    let scale = Scale::new(b, h, config.x0_reg, p.u0);
    let launch_p = scale.value(config.x_start) / scale.h();
    let ret = Return::new(b, RETURN_TOP * (p.d * p.t).sqrt(), config.x0_reg, p.u0);
    let sim = Sim { cfg: config, d: p.d, u0: p.u0, x0sq: config.x0_reg * config.x0_reg, b, h, scale: &scale, ret: ret.as_ref() };

    let mut accepted: Vec<(f64, f64)> = Vec::with_capacity(config.n_target);
    let mut launched = 0usize;
    let mut wave = 0u64;
    while accepted.len() < config.n_target {
        let batches: Vec<Vec<(f64, f64)>> = (0..WAVE as u64)
            .into_par_iter()
            .map(|j| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(wave * WAVE as u64 + j);
                (0..BATCH)
                    .filter_map(|_| match sim.run(&mut rng) {
                        Outcome::Accepted { area, duration } => Some((area, duration)),
                        Outcome::Rejected => None,
                    })
                    .collect()
            })
            .collect();
        launched += WAVE * BATCH;
        wave += 1;
        accepted.extend(batches.into_iter().flatten());
        if launched as f64 >= PROBE_LAUNCHES && (accepted.len() as f64) < MIN_ACCEPTANCE * launched as f64 {
            return Err(Error::Starvation(format!("{} excursions accepted out of {launched} launches", accepted.len())));
        }
    }
    let acceptance_rate = accepted.len() as f64 / launched as f64;
    accepted.truncate(config.n_target);
    accepted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    Ok(McEnsemble {
        areas: accepted.iter().map(|a| a.0).collect(),
        durations: accepted.iter().map(|a| a.1).collect(),
        acceptance_rate,
        launch_probability: launch_p,
        seed: config.seed,
        config: *config,
    })
}

/// Kolmogorov statistic of sorted `samples` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value `1.628/√n_eff` of the Kolmogorov statistic.
pub fn ks_critical_1pct(n_eff: f64) -> f64 {
    1.627_62 / n_eff.sqrt()
}

/// Two-sample Kolmogorov-Smirnov distance and its 1% critical value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("empty sample".into()));
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < n && j < m {
        let v = x[i].min(y[j]);
        while i < n && x[i] <= v {
            i += 1;
        }
        while j < m && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let n_eff = (n * m) as f64 / (n + m) as f64;
    Ok((d, ks_critical_1pct(n_eff)))
}

/// Normalized cumulative trapezoid of a table, interpolated linearly.
pub struct TableCdf {
    grid: Vec<f64>,
    cum: Vec<f64>,
}

impl TableCdf {
    pub fn new(table: &DistributionTable) -> Result<Self> {
        let g = &table.a_hat_grid;
        if g.len() < 2 {
            return Err(Error::Coverage("table has fewer than two points".into()));
        }
        let mut cum = vec![0.0; g.len()];
        for i in 1..g.len() {
            cum[i] = cum[i - 1] + 0.5 * (g[i] - g[i - 1]) * (table.pdf_scaled[i] + table.pdf_scaled[i - 1]);
        }
        let total = cum[g.len() - 1];
        cum.iter_mut().for_each(|c| *c /= total);
        Ok(TableCdf { grid: g.clone(), cum })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        if x <= g[0] {
            return 0.0;
        }
        if x >= g[g.len() - 1] {
            return 1.0;
        }
        let i = g.partition_point(|&v| v <= x) - 1;
        let w = (x - g[i]) / (g[i + 1] - g[i]);
        self.cum[i] + w * (self.cum[i + 1] - self.cum[i])
    }

    pub fn range(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }
}

/// Monte Carlo against a tabulated density, in units of `A0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub n: usize,
    pub ks: f64,
    pub ks_critical: f64,
    pub m1_mc: f64,
    pub m1_table: f64,
    pub z_m1: f64,
    pub m2_mc: f64,
    pub m2_table: f64,
    pub z_m2: f64,
}

impl McReport {
    pub fn ks_pass(&self) -> bool {
        self.ks < self.ks_critical
    }
}

/// Largest fraction of samples allowed outside the table's range.
pub const OUTSIDE_FRACTION: f64 = 1e-3;

/// KS distance and moment z-scores of `ensemble` against `table`.
pub fn mc_vs_analytic(ensemble: &McEnsemble, table: &DistributionTable) -> Result<McReport> {
    let a_hat = ensemble.a_hat();
    if a_hat.is_empty() {
        return Err(Error::InvalidParameter("empty ensemble".into()));
    }
    let cdf = TableCdf::new(table)?;
    let (lo, hi) = cdf.range();
    let outside = a_hat.iter().filter(|&&x| x < lo || x > hi).count();
    let n = a_hat.len() as f64;
    if outside as f64 > OUTSIDE_FRACTION * n {
        return Err(Error::Coverage(format!("{outside} of {n} samples outside [{lo}, {hi}]")));
    }
    let ks = ks_statistic(&a_hat, |x| cdf.eval(x));
    let z = |p: i32, target: f64| {
        let vals: Vec<f64> = a_hat.iter().map(|x| x.powi(p)).collect();
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        (mean, (mean - target) / (var / n).sqrt())
    };
    let m1_table = moment_quadrature(table, 1.0)?;
    let m2_table = moment_quadrature(table, 2.0)?;
    let (m1_mc, z_m1) = z(1, m1_table);
    let (m2_mc, z_m2) = z(2, m2_table);
    Ok(McReport { n: a_hat.len(), ks, ks_critical: ks_critical_1pct(n), m1_mc, m1_table, z_m1, m2_mc, m2_table, z_m2 })
}

/// Rows `a_hat,ecdf,table_cdf` at every sample.
pub fn write_comparison_csv<W: Write>(ensemble: &McEnsemble, table: &DistributionTable, out: W) -> Result<()> {
    let cdf = TableCdf::new(table)?;
    let a_hat = ensemble.a_hat();
    let n = a_hat.len() as f64;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a_hat", "ecdf", "table_cdf"])?;
    for (i, x) in a_hat.iter().enumerate() {
        w.write_record([format!("{x:.17e}"), format!("{:.17e}", (i + 1) as f64 / n), format!("{:.17e}", cdf.eval(*x))])?;
    }
    w.flush()?;
    Ok(())
}
