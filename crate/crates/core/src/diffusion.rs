//! Diffusion LMS adaptation over a communication graph.
//!
//! Each node keeps a local estimate of the signal's GFT coefficients. At
//! every instant a node that sampled (d_i[n] = 1) performs an LMS correction
//! along its regression row, and every node averages estimates over its
//! neighborhood with combination weights. Adapt-then-combine (ATC) runs the
//! correction first; combine-then-adapt (CTA) reverses the order.
//!
//! Monte Carlo drivers draw sampling decisions, observation noise, and the
//! signal process from per-(replica, node, purpose) streams of a
//! [`SeedSplitter`], so a master seed pins a whole experiment bit-for-bit.

use crate::graph::{FrequencySupport, Graph};
use crate::rng::{Purpose, SeedSplitter};
use crate::sampling::SamplingDesign;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiffusionError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("combination matrix invalid: {0}")]
    NotStochastic(String),
    #[error("step size {value} invalid at node {node}")]
    InvalidStepSize { node: usize, value: f64 },
    #[error("expected sampling set is empty")]
    EmptySamplingSet,
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("all {0} replicas diverged")]
    AllReplicasDiverged(usize),
}

/// Nonnegative combination weights supported on the extended neighborhood
/// (neighbors plus self) with unit row sums.
#[derive(Debug, Clone)]
pub struct CombinationMatrix {
    w: DMatrix<f64>,
    doubly_stochastic: bool,
}

impl CombinationMatrix {
    /// Metropolis weights on the communication graph: for neighbors,
    /// w_ij = 1 / (1 + max(deg_i, deg_j)) with unit link weights; the
    /// diagonal absorbs the remainder. Symmetric and doubly stochastic.
    pub fn metropolis(g: &Graph) -> Result<Self, DiffusionError> {
        if !g.is_connected() {
            return Err(DiffusionError::Disconnected);
        }
        let n = g.n_nodes();
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            let mut off = 0.0;
            for &j in g.neighbors(i) {
                let weight = 1.0 / (1.0 + g.degree(i).max(g.degree(j)) as f64);
                w[(i, j)] = weight;
                off += weight;
            }
            w[(i, i)] = 1.0 - off;
        }
        Ok(Self { w, doubly_stochastic: true })
    }

    pub fn identity(n: usize) -> Self {
        Self { w: DMatrix::identity(n, n), doubly_stochastic: true }
    }

    /// Validate caller-supplied weights against the communication graph.
    pub fn from_matrix(w: DMatrix<f64>, g: &Graph) -> Result<Self, DiffusionError> {
        let n = g.n_nodes();
        if w.nrows() != n || w.ncols() != n {
            return Err(DiffusionError::DimensionMismatch { expected: n, got: w.nrows() });
        }
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                let v = w[(i, j)];
                if v < 0.0 || !v.is_finite() {
                    return Err(DiffusionError::NotStochastic(format!(
                        "negative or non-finite weight at ({i},{j})"
                    )));
                }
                if v != 0.0 && i != j && !g.neighbors(i).contains(&j) {
                    return Err(DiffusionError::NotStochastic(format!(
                        "weight at ({i},{j}) outside the extended neighborhood"
                    )));
                }
                row_sum += v;
            }
            if (row_sum - 1.0).abs() > 1e-12 {
                return Err(DiffusionError::NotStochastic(format!("row {i} sums to {row_sum}")));
            }
        }
        let doubly_stochastic = (0..n).all(|j| (w.column(j).sum() - 1.0).abs() <= 1e-12);
        Ok(Self { w, doubly_stochastic })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn n_nodes(&self) -> usize {
        self.w.nrows()
    }

    /// Whether 1^T W = 1^T also holds (the Theorem-1 hypothesis).
    pub fn is_doubly_stochastic(&self) -> bool {
        self.doubly_stochastic
    }
}

/// Update ordering of the diffusion recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffusionMode {
    Atc,
    Cta,
}

/// Step sizes, combination weights, and update ordering.
#[derive(Debug, Clone)]
pub struct DiffusionConfig {
    step_sizes: Vec<f64>,
    combination: CombinationMatrix,
    mode: DiffusionMode,
}

impl DiffusionConfig {
    pub fn new(
        step_sizes: Vec<f64>,
        combination: CombinationMatrix,
        mode: DiffusionMode,
    ) -> Result<Self, DiffusionError> {
        if step_sizes.len() != combination.n_nodes() {
            return Err(DiffusionError::DimensionMismatch {
                expected: combination.n_nodes(),
                got: step_sizes.len(),
            });
        }
        for (node, &mu) in step_sizes.iter().enumerate() {
            if !mu.is_finite() || mu <= 0.0 {
                return Err(DiffusionError::InvalidStepSize { node, value: mu });
            }
        }
        Ok(Self { step_sizes, combination, mode })
    }

    /// One step size for every node.
    pub fn uniform(
        mu: f64,
        combination: CombinationMatrix,
        mode: DiffusionMode,
    ) -> Result<Self, DiffusionError> {
        let n = combination.n_nodes();
        Self::new(vec![mu; n], combination, mode)
    }

    pub fn step_sizes(&self) -> &[f64] {
        &self.step_sizes
    }

    pub fn combination(&self) -> &CombinationMatrix {
        &self.combination
    }

    pub fn mode(&self) -> DiffusionMode {
        self.mode
    }

    pub fn n_nodes(&self) -> usize {
        self.step_sizes.len()
    }
}

/// Per-node GFT estimates; column i holds s_i.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeStates {
    estimates: DMatrix<f64>,
    iteration: usize,
}

impl NodeStates {
    pub fn zeros(n_nodes: usize, bandwidth: usize) -> Self {
        Self { estimates: DMatrix::zeros(bandwidth, n_nodes), iteration: 0 }
    }

    /// Every node starts from the same spectrum estimate.
    pub fn constant(n_nodes: usize, s: &DVector<f64>) -> Self {
        let mut estimates = DMatrix::zeros(s.len(), n_nodes);
        for i in 0..n_nodes {
            estimates.set_column(i, s);
        }
        Self { estimates, iteration: 0 }
    }

    pub fn from_estimates(estimates: DMatrix<f64>) -> Self {
        Self { estimates, iteration: 0 }
    }

    pub fn n_nodes(&self) -> usize {
        self.estimates.ncols()
    }

    pub fn bandwidth(&self) -> usize {
        self.estimates.nrows()
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn estimate(&self, node: usize) -> DVector<f64> {
        self.estimates.column(node).clone_owned()
    }

    pub fn estimates(&self) -> &DMatrix<f64> {
        &self.estimates
    }

    /// Reconstructed signal values x_i = c_i^T s_i.
    pub fn reconstruction(&self, support: &FrequencySupport) -> DVector<f64> {
        DVector::from_fn(self.n_nodes(), |i, _| {
            support.columns().row(i).transpose().dot(&self.estimates.column(i).clone_owned())
        })
    }
}

/// Sampling decisions and readings for one time instant. `readings[i]` is
/// meaningful only where `sampled[i]` holds.
#[derive(Debug, Clone)]
pub struct Observation {
    pub sampled: Vec<bool>,
    pub readings: Vec<f64>,
}

fn check_step_dims(
    states: &NodeStates,
    config: &DiffusionConfig,
    obs: &Observation,
    support: &FrequencySupport,
) -> Result<(), DiffusionError> {
    let n = states.n_nodes();
    for got in [config.n_nodes(), obs.sampled.len(), obs.readings.len(), support.n_nodes()] {
        if got != n {
            return Err(DiffusionError::DimensionMismatch { expected: n, got });
        }
    }
    if states.bandwidth() != support.bandwidth() {
        return Err(DiffusionError::DimensionMismatch {
            expected: support.bandwidth(),
            got: states.bandwidth(),
        });
    }
    Ok(())
}

/// LMS correction applied to sampling nodes' columns in place.
fn adapt(
    estimates: &mut DMatrix<f64>,
    config: &DiffusionConfig,
    obs: &Observation,
    support: &FrequencySupport,
) {
    for i in 0..estimates.ncols() {
        if !obs.sampled[i] {
            continue;
        }
        let c = support.row(i);
        let innovation = obs.readings[i] - c.dot(&estimates.column(i).clone_owned());
        let gain = config.step_sizes()[i] * innovation;
        estimates.column_mut(i).axpy(gain, &c, 1.0);
    }
}

/// Neighborhood averaging: column i becomes sum_j w_ij (column j).
fn combine(estimates: &DMatrix<f64>, config: &DiffusionConfig) -> DMatrix<f64> {
    estimates * config.combination().matrix().transpose()
}

/// Adapt-then-combine update for one instant.
pub fn atc_step(
    states: &mut NodeStates,
    config: &DiffusionConfig,
    obs: &Observation,
    support: &FrequencySupport,
) -> Result<(), DiffusionError> {
    check_step_dims(states, config, obs, support)?;
    adapt(&mut states.estimates, config, obs, support);
    states.estimates = combine(&states.estimates, config);
    states.iteration += 1;
    Ok(())
}

/// Combine-then-adapt update for one instant.
pub fn cta_step(
    states: &mut NodeStates,
    config: &DiffusionConfig,
    obs: &Observation,
    support: &FrequencySupport,
) -> Result<(), DiffusionError> {
    check_step_dims(states, config, obs, support)?;
    states.estimates = combine(&states.estimates, config);
    adapt(&mut states.estimates, config, obs, support);
    states.iteration += 1;
    Ok(())
}

/// Dispatch on the configured mode.
pub fn diffusion_step(
    states: &mut NodeStates,
    config: &DiffusionConfig,
    obs: &Observation,
    support: &FrequencySupport,
) -> Result<(), DiffusionError> {
    match config.mode() {
        DiffusionMode::Atc => atc_step(states, config, obs, support),
        DiffusionMode::Cta => cta_step(states, config, obs, support),
    }
}

/// Step-size stability bound 2 / [(1/N) sum_{i in S} p_i ||c_i||^2].
pub fn step_size_bound(
    support: &FrequencySupport,
    design: &SamplingDesign,
) -> Result<f64, DiffusionError> {
    if design.n_nodes() != support.n_nodes() {
        return Err(DiffusionError::DimensionMismatch {
            expected: support.n_nodes(),
            got: design.n_nodes(),
        });
    }
    let set = design.expected_set();
    if set.is_empty() {
        return Err(DiffusionError::EmptySamplingSet);
    }
    let n = support.n_nodes() as f64;
    let mean: f64 = set
        .iter()
        .map(|&i| design.probability(i) * support.row(i).norm_squared())
        .sum::<f64>()
        / n;
    Ok(2.0 / mean)
}

/// What the truth signal does over time.
#[derive(Debug, Clone)]
pub enum SignalSource {
    /// Fixed GFT coefficients s° on the support.
    StaticSpectrum(DVector<f64>),
    /// Fixed vertex-domain signal x° (not necessarily bandlimited).
    StaticVertex(DVector<f64>),
    /// First-order autoregression on the spectrum with a sinusoidal drive:
    /// s°[n+1] = theta s°[n] + sin(2 pi freq n) 1 + w[n], w[n] ~ N(0, I),
    /// started from s°[0] = 0.
    ArSpectrum { theta: f64, freq: f64 },
    /// Vertex-domain maps cycled every `period` instants.
    PiecewiseVertex { maps: Vec<DVector<f64>>, period: usize },
}

/// Sampling design plus the signal the network observes.
#[derive(Debug, Clone)]
pub struct ObservationModel {
    pub design: SamplingDesign,
    pub source: SignalSource,
}

/// Per-replica realization of the truth sequence x°[n].
enum RealizedSignal {
    Constant(DVector<f64>),
    Sequence(Vec<DVector<f64>>),
    Piecewise { maps: Vec<DVector<f64>>, period: usize },
}

impl RealizedSignal {
    fn at(&self, n: usize) -> &DVector<f64> {
        match self {
            RealizedSignal::Constant(x) => x,
            RealizedSignal::Sequence(xs) => &xs[n],
            RealizedSignal::Piecewise { maps, period } => &maps[(n / period) % maps.len()],
        }
    }
}

impl ObservationModel {
    pub fn new(design: SamplingDesign, source: SignalSource) -> Self {
        Self { design, source }
    }

    fn realize(
        &self,
        support: &FrequencySupport,
        splitter: &SeedSplitter,
        replica: u32,
        horizon: usize,
    ) -> Result<RealizedSignal, DiffusionError> {
        let n = support.n_nodes();
        let expect_len = |len: usize, expected: usize| {
            if len == expected {
                Ok(())
            } else {
                Err(DiffusionError::DimensionMismatch { expected, got: len })
            }
        };
        match &self.source {
            SignalSource::StaticSpectrum(s) => {
                expect_len(s.len(), support.bandwidth())?;
                Ok(RealizedSignal::Constant(support.columns() * s))
            }
            SignalSource::StaticVertex(x) => {
                expect_len(x.len(), n)?;
                Ok(RealizedSignal::Constant(x.clone()))
            }
            SignalSource::ArSpectrum { theta, freq } => {
                let f = support.bandwidth();
                let mut rng = splitter.global_stream(replica, Purpose::Signal);
                let mut s = DVector::zeros(f);
                let mut xs = Vec::with_capacity(horizon + 1);
                xs.push(support.columns() * &s);
                for t in 0..horizon {
                    let drive = (2.0 * std::f64::consts::PI * freq * t as f64).sin();
                    let noise = DVector::from_fn(f, |_, _| StandardNormal.sample(&mut rng));
                    s = *theta * s + DVector::from_element(f, drive) + noise;
                    xs.push(support.columns() * &s);
                }
                Ok(RealizedSignal::Sequence(xs))
            }
            SignalSource::PiecewiseVertex { maps, period } => {
                if maps.is_empty() || *period == 0 {
                    return Err(DiffusionError::ConfigInvalid(
                        "piecewise source needs maps and a positive period".into(),
                    ));
                }
                for m in maps {
                    expect_len(m.len(), n)?;
                }
                Ok(RealizedSignal::Piecewise { maps: maps.clone(), period: *period })
            }
        }
    }
}

/// How node estimates are initialized at n = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initialization {
    /// All-zero estimates (the reproducible default).
    Zeros,
    /// Independent N(0, scale^2) entries from each node's Init stream.
    Seeded { scale: f64 },
}

#[derive(Debug, Clone)]
pub struct SimulationOptions {
    pub horizon: usize,
    pub replicas: usize,
    pub seed: u64,
    /// Record replica-averaged per-node squared errors.
    pub per_node: bool,
    pub init: Initialization,
    /// Trajectories whose network error exceeds this are flagged diverged
    /// and excluded from averages.
    pub divergence_threshold: f64,
}

impl SimulationOptions {
    pub fn new(horizon: usize, replicas: usize, seed: u64) -> Self {
        Self {
            horizon,
            replicas,
            seed,
            per_node: false,
            init: Initialization::Zeros,
            divergence_threshold: 1e12,
        }
    }

    pub fn with_per_node(mut self) -> Self {
        self.per_node = true;
        self
    }

    pub fn with_init(mut self, init: Initialization) -> Self {
        self.init = init;
        self
    }
}

/// Replica-averaged error trajectories.
#[derive(Debug, Clone)]
pub struct SimResult {
    /// ||x[n] - x°[n]||^2 averaged over surviving replicas; length horizon+1.
    pub network_error: Vec<f64>,
    /// Per-node squared errors, same averaging, when requested.
    pub per_node_error: Option<Vec<Vec<f64>>>,
    /// Replicas excluded by the divergence guard.
    pub diverged: usize,
    pub replicas_used: usize,
}

impl SimResult {
    /// Mean network error over the trailing `window` iterations.
    pub fn steady_state(&self, window: usize) -> f64 {
        let len = self.network_error.len();
        let w = window.min(len);
        self.network_error[len - w..].iter().sum::<f64>() / w as f64
    }

    /// Mean per-node error over the trailing `window` iterations.
    pub fn steady_state_per_node(&self, window: usize) -> Option<Vec<f64>> {
        let per = self.per_node_error.as_ref()?;
        let len = per.len();
        let w = window.min(len);
        let n = per[0].len();
        let mut out = vec![0.0; n];
        for row in &per[len - w..] {
            for (acc, &v) in out.iter_mut().zip(row) {
                *acc += v;
            }
        }
        for acc in &mut out {
            *acc /= w as f64;
        }
        Some(out)
    }
}

/// Run `opts.replicas` independent trajectories and average their error
/// curves. Replica r derives all of its randomness from streams keyed by r
/// under `opts.seed`; accumulation follows replica order, so the result is
/// reproducible bit-for-bit.
pub fn run_simulation(
    support: &FrequencySupport,
    model: &ObservationModel,
    config: &DiffusionConfig,
    opts: &SimulationOptions,
) -> Result<SimResult, DiffusionError> {
    let n = support.n_nodes();
    if model.design.n_nodes() != n {
        return Err(DiffusionError::DimensionMismatch { expected: n, got: model.design.n_nodes() });
    }
    if config.n_nodes() != n {
        return Err(DiffusionError::DimensionMismatch { expected: n, got: config.n_nodes() });
    }
    if opts.replicas == 0 {
        return Err(DiffusionError::ConfigInvalid("replica count must be positive".into()));
    }
    let splitter = SeedSplitter::new(opts.seed);
    let horizon = opts.horizon;
    let mut network_sum = vec![0.0; horizon + 1];
    let mut per_node_sum = opts.per_node.then(|| vec![vec![0.0; n]; horizon + 1]);
    let mut diverged = 0usize;

    let mut network_buf = vec![0.0; horizon + 1];
    let mut per_node_buf = opts.per_node.then(|| vec![vec![0.0; n]; horizon + 1]);

    for replica in 0..opts.replicas {
        let replica = replica as u32;
        let truth = model.realize(support, &splitter, replica, horizon)?;
        let mut states = match opts.init {
            Initialization::Zeros => NodeStates::zeros(n, support.bandwidth()),
            Initialization::Seeded { scale } => {
                let mut estimates = DMatrix::zeros(support.bandwidth(), n);
                for i in 0..n {
                    let mut rng = splitter.stream(replica, i as u32, Purpose::Init);
                    for k in 0..support.bandwidth() {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        estimates[(k, i)] = scale * z;
                    }
                }
                NodeStates::from_estimates(estimates)
            }
        };
        let mut sampling_rngs: Vec<_> =
            (0..n).map(|i| splitter.stream(replica, i as u32, Purpose::Sampling)).collect();
        let mut noise_rngs: Vec<_> =
            (0..n).map(|i| splitter.stream(replica, i as u32, Purpose::Noise)).collect();

        let mut obs = Observation { sampled: vec![false; n], readings: vec![0.0; n] };
        let mut ok = true;
        record_errors(&states, support, truth.at(0), &mut network_buf, per_node_buf.as_mut(), 0);
        for t in 0..horizon {
            let x_truth = truth.at(t);
            for i in 0..n {
                // one draw per stream per instant keeps streams aligned
                // across parameter changes
                let u: f64 = sampling_rngs[i].random();
                let z: f64 = StandardNormal.sample(&mut noise_rngs[i]);
                obs.sampled[i] = u < model.design.probability(i);
                obs.readings[i] = x_truth[i] + model.design.noise_variance(i).sqrt() * z;
            }
            diffusion_step(&mut states, config, &obs, support)?;
            record_errors(
                &states,
                support,
                truth.at(t + 1),
                &mut network_buf,
                per_node_buf.as_mut(),
                t + 1,
            );
            if network_buf[t + 1] > opts.divergence_threshold {
                ok = false;
                break;
            }
        }
        if !ok {
            diverged += 1;
            continue;
        }
        for (acc, &v) in network_sum.iter_mut().zip(&network_buf) {
            *acc += v;
        }
        if let (Some(sum), Some(buf)) = (per_node_sum.as_mut(), per_node_buf.as_ref()) {
            for (acc_row, row) in sum.iter_mut().zip(buf) {
                for (acc, &v) in acc_row.iter_mut().zip(row) {
                    *acc += v;
                }
            }
        }
    }

    let used = opts.replicas - diverged;
    if used == 0 {
        return Err(DiffusionError::AllReplicasDiverged(opts.replicas));
    }
    let scale = 1.0 / used as f64;
    for v in &mut network_sum {
        *v *= scale;
    }
    if let Some(sum) = per_node_sum.as_mut() {
        for row in sum.iter_mut() {
            for v in row.iter_mut() {
                *v *= scale;
            }
        }
    }
    Ok(SimResult {
        network_error: network_sum,
        per_node_error: per_node_sum,
        diverged,
        replicas_used: used,
    })
}

fn record_errors(
    states: &NodeStates,
    support: &FrequencySupport,
    x_truth: &DVector<f64>,
    network: &mut [f64],
    per_node: Option<&mut Vec<Vec<f64>>>,
    slot: usize,
) {
    let x = states.reconstruction(support);
    let mut total = 0.0;
    if let Some(per) = per_node {
        for i in 0..x.len() {
            let e = x[i] - x_truth[i];
            let sq = e * e;
            per[slot][i] = sq;
            total += sq;
        }
    } else {
        for i in 0..x.len() {
            let e = x[i] - x_truth[i];
            total += e * e;
        }
    }
    network[slot] = total;
}

/// Trajectory CSV: `iteration,mean_sq_error,mean_sq_error_db` plus one
/// column per node when per-node errors were recorded.
pub fn trajectory_csv(result: &SimResult) -> String {
    use std::fmt::Write as _;
    let mut out = String::from("iteration,mean_sq_error,mean_sq_error_db");
    if let Some(per) = &result.per_node_error {
        for i in 0..per[0].len() {
            write!(out, ",node_{i}").unwrap();
        }
    }
    out.push('\n');
    for (t, &err) in result.network_error.iter().enumerate() {
        let db = 10.0 * err.log10();
        write!(out, "{t},{err},{db}").unwrap();
        if let Some(per) = &result.per_node_error {
            for &v in &per[t] {
                write!(out, ",{v}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}
