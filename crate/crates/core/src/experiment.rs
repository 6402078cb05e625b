//! Message-complexity sweeps over random topologies, written as CSV.
//!
//! Configuration files use the same line format as networks:
//!
//! ```text
//! experiment 1
//! n 40 80 120 160 200
//! mode constant-density      # or: mode fixed-range 5
//! channels 10
//! per-node 4                 # several values sweep the channel count
//! trials 30
//! seed 1
//! weightmode unit
//! side 50
//! policy fifo
//! verify off                 # `on` also runs the centralized search with
//!                            # the dual certificate and compares weights
//! output results.csv
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::MAX_CHANNELS;
use crate::dist::{run_distributed, DeliveryPolicy, SchedulerConfig};
use crate::error::{ExperimentError, ParseError};
use crate::format::{expect_len, parse_field};
use crate::network::{random_topology, NodeId, RangeMode, TopologyConfig, Weight, WeightMode};
use crate::search::{shortest_cdc, SearchOptions};

/// Header of the CSV output, in [`ResultRow`] field order.
pub const CSV_HEADER: &str = "n,n_exp,C_total,channels_per_node,mode,messages_total,blossoms,\
path_found,path_weight,msg_ratio,blossom_ratio";

/// Attempts at drawing a connected `(s, d)` before settling for any pair.
pub const PAIR_RETRIES: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub mode: RangeMode,
    pub channel_count: u8,
    /// One entry per sweep point; more than one sweeps the channel count.
    pub channels_per_node: Vec<u8>,
    pub trials: usize,
    pub seed: u64,
    pub weight_mode: WeightMode,
    pub region_side: f64,
    pub policy: DeliveryPolicy,
    pub verify: bool,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_values: vec![40, 80, 120, 160, 200],
            mode: RangeMode::ConstantDensity,
            channel_count: 10,
            channels_per_node: vec![4],
            trials: 30,
            seed: 1,
            weight_mode: WeightMode::Unit,
            region_side: 50.0,
            policy: DeliveryPolicy::Fifo,
            verify: false,
            output: None,
        }
    }
}

/// Largest `n` the simulator is run with.
pub const MAX_EXPERIMENT_NODES: usize = 2000;

pub fn mode_label(mode: RangeMode) -> String {
    match mode {
        RangeMode::ConstantDensity => "constant-density".to_string(),
        RangeMode::FixedRange(r) => format!("fixed-range-{r}"),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut cfg = ExperimentConfig::default();
        let mut header = false;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !header {
                if fields != ["experiment", "1"] {
                    return Err(ParseError::at(line_no, "expected header `experiment 1`"));
                }
                header = true;
                continue;
            }
            match fields[0] {
                "n" => {
                    cfg.n_values = list(&fields, line_no, "node count")?;
                }
                "mode" => {
                    cfg.mode = match fields.get(1).copied() {
                        Some("constant-density") => {
                            expect_len(&fields, 2, line_no)?;
                            RangeMode::ConstantDensity
                        }
                        Some("fixed-range") => {
                            expect_len(&fields, 3, line_no)?;
                            let r: f64 = parse_field(&fields, 2, line_no, "range")?;
                            if !(r.is_finite() && r > 0.0) {
                                return Err(ParseError::at(line_no, "range must be positive"));
                            }
                            RangeMode::FixedRange(r)
                        }
                        _ => {
                            return Err(ParseError::at(
                                line_no,
                                "mode is `constant-density` or `fixed-range <R>`",
                            ))
                        }
                    };
                }
                "channels" => {
                    expect_len(&fields, 2, line_no)?;
                    cfg.channel_count = parse_field(&fields, 1, line_no, "channel count")?;
                }
                "per-node" => {
                    cfg.channels_per_node = list(&fields, line_no, "channels per node")?;
                }
                "trials" => {
                    expect_len(&fields, 2, line_no)?;
                    cfg.trials = parse_field(&fields, 1, line_no, "trial count")?;
                }
                "seed" => {
                    expect_len(&fields, 2, line_no)?;
                    cfg.seed = parse_field(&fields, 1, line_no, "seed")?;
                }
                "weightmode" => {
                    expect_len(&fields, 2, line_no)?;
                    cfg.weight_mode = match fields[1] {
                        "unit" => WeightMode::Unit,
                        "euclid" => WeightMode::Euclidean,
                        other => {
                            return Err(ParseError::at(
                                line_no,
                                format!("unknown weight mode `{other}`"),
                            ))
                        }
                    };
                }
                "side" => {
                    expect_len(&fields, 2, line_no)?;
                    cfg.region_side = parse_field(&fields, 1, line_no, "region side")?;
                }
                "policy" => {
                    expect_len(&fields, 2, line_no)?;
                    cfg.policy = parse_field(&fields, 1, line_no, "delivery policy")?;
                }
                "verify" => {
                    expect_len(&fields, 2, line_no)?;
                    cfg.verify = match fields[1] {
                        "on" => true,
                        "off" => false,
                        _ => return Err(ParseError::at(line_no, "verify is `on` or `off`")),
                    };
                }
                "output" => {
                    expect_len(&fields, 2, line_no)?;
                    cfg.output = Some(PathBuf::from(fields[1]));
                }
                other => {
                    return Err(ParseError::at(line_no, format!("unknown keyword `{other}`")))
                }
            }
        }
        if !header {
            return Err(ParseError::at(last_line.max(1), "missing header `experiment 1`"));
        }
        cfg.validate().map_err(|msg| ParseError::at(last_line, msg))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.trials == 0 {
            return Err("trials must be at least 1".into());
        }
        if self.n_values.is_empty() || self.channels_per_node.is_empty() {
            return Err("need at least one node count and one channels-per-node value".into());
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| !(2..=MAX_EXPERIMENT_NODES).contains(&n)) {
            return Err(format!("node count {n} outside 2..={MAX_EXPERIMENT_NODES}"));
        }
        if self.channel_count == 0 || self.channel_count > MAX_CHANNELS {
            return Err(format!("channel count must be in 1..={MAX_CHANNELS}"));
        }
        if let Some(&p) = self
            .channels_per_node
            .iter()
            .find(|&&p| p == 0 || p > self.channel_count)
        {
            return Err(format!("cannot pick {p} of {} channels", self.channel_count));
        }
        if !(self.region_side.is_finite() && self.region_side > 0.0) {
            return Err("region side must be positive".into());
        }
        Ok(())
    }
}

fn list<T: std::str::FromStr>(fields: &[&str], line: usize, what: &str) -> Result<Vec<T>, ParseError> {
    if fields.len() < 2 {
        return Err(ParseError::at(line, format!("`{}` needs at least one value", fields[0])));
    }
    (1..fields.len()).map(|i| parse_field(fields, i, line, what)).collect()
}

/// One trial.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub n_exp: usize,
    pub c_total: u8,
    pub channels_per_node: u8,
    pub mode: String,
    pub messages_total: u64,
    pub blossoms: usize,
    pub path_found: bool,
    pub path_weight: Option<Weight>,
    pub msg_ratio: f64,
    pub blossom_ratio: f64,
}

impl ResultRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:.9},{:.9}",
            self.n,
            self.n_exp,
            self.c_total,
            self.channels_per_node,
            self.mode,
            self.messages_total,
            self.blossoms,
            self.path_found,
            self.path_weight.map(|w| w.to_string()).unwrap_or_default(),
            self.msg_ratio,
            self.blossom_ratio
        )
    }
}

/// Per-point averages over trials. `path_found` is the fraction of trials
/// that found a path and `path_weight` averages over those only.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanRow {
    pub n: usize,
    pub n_exp: f64,
    pub c_total: u8,
    pub channels_per_node: u8,
    pub mode: String,
    pub messages_total: f64,
    pub blossoms: f64,
    pub path_found: f64,
    pub path_weight: Option<f64>,
    pub msg_ratio: f64,
    pub blossom_ratio: f64,
}

impl MeanRow {
    fn from_rows(rows: &[ResultRow]) -> MeanRow {
        let k = rows.len() as f64;
        let mean = |f: &dyn Fn(&ResultRow) -> f64| rows.iter().map(f).sum::<f64>() / k;
        let weights: Vec<f64> = rows.iter().filter_map(|r| r.path_weight).map(|w| w as f64).collect();
        MeanRow {
            n: rows[0].n,
            n_exp: mean(&|r| r.n_exp as f64),
            c_total: rows[0].c_total,
            channels_per_node: rows[0].channels_per_node,
            mode: format!("mean:{}", rows[0].mode),
            messages_total: mean(&|r| r.messages_total as f64),
            blossoms: mean(&|r| r.blossoms as f64),
            path_found: mean(&|r| r.path_found as u8 as f64),
            path_weight: (!weights.is_empty()).then(|| weights.iter().sum::<f64>() / weights.len() as f64),
            msg_ratio: mean(&|r| r.msg_ratio),
            blossom_ratio: mean(&|r| r.blossom_ratio),
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{:.3},{},{},{},{:.3},{:.3},{:.3},{},{:.9},{:.9}",
            self.n,
            self.n_exp,
            self.c_total,
            self.channels_per_node,
            self.mode,
            self.messages_total,
            self.blossoms,
            self.path_found,
            self.path_weight.map(|w| format!("{w:.3}")).unwrap_or_default(),
            self.msg_ratio,
            self.blossom_ratio
        )
    }
}

/// A trial where the distributed and centralized searches disagreed, or the
/// certificate reported a violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub n: usize,
    pub channels_per_node: u8,
    pub trial: usize,
    pub s: NodeId,
    pub d: NodeId,
    pub what: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentResult {
    /// In `(channels_per_node, n, trial)` order.
    pub rows: Vec<ResultRow>,
    /// One per `(channels_per_node, n)`, same order.
    pub means: Vec<MeanRow>,
    pub discrepancies: Vec<Discrepancy>,
    /// Largest certificate violation seen (only with `verify`).
    pub max_violation: Option<i128>,
}

impl ExperimentResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(96 * (self.rows.len() + self.means.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.to_csv());
        }
        for row in &self.means {
            let _ = writeln!(out, "{}", row.to_csv());
        }
        out
    }

    /// Mean rows for one channels-per-node value, in `n` order.
    pub fn means_for(&self, channels_per_node: u8) -> Vec<&MeanRow> {
        self.means
            .iter()
            .filter(|m| m.channels_per_node == channels_per_node)
            .collect()
    }
}

/// Seed for the topology of one trial. Independent of the channel
/// parameters, so a channel sweep shares geometry across sweep points.
pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    let mut h = seed;
    for x in [n as u64, trial as u64] {
        h = splitmix64(h ^ x.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform random distinct pair, retried up to [`PAIR_RETRIES`] times until
/// the pair is connected.
pub fn pick_pair(network: &crate::network::Network, seed: u64) -> (NodeId, NodeId) {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x5d));
    let n = network.len();
    let mut pair = (0, 1);
    for _ in 0..PAIR_RETRIES {
        let s = rng.gen_range(0..n);
        let mut d = rng.gen_range(0..n - 1);
        if d >= s {
            d += 1;
        }
        pair = (s, d);
        if network.connected(s, d) {
            break;
        }
    }
    pair
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, ExperimentError> {
    cfg.validate().map_err(ExperimentError::Config)?;
    let mode = mode_label(cfg.mode);
    let mut result = ExperimentResult {
        max_violation: cfg.verify.then_some(0),
        ..Default::default()
    };
    for &per_node in &cfg.channels_per_node {
        for &n in &cfg.n_values {
            let first = result.rows.len();
            for trial in 0..cfg.trials {
                let seed = trial_seed(cfg.seed, n, trial);
                let topo = TopologyConfig::new(n, cfg.mode, cfg.channel_count, per_node, seed)
                    .weight_mode(cfg.weight_mode)
                    .region_side(cfg.region_side);
                let network = random_topology(&topo)?;
                let (s, d) = pick_pair(&network, seed);
                let run = run_distributed(&network, s, d, false, SchedulerConfig::new(seed, cfg.policy))?;
                let weight = run.path.as_ref().map(|p| p.total_weight);
                if cfg.verify {
                    let central = shortest_cdc(
                        &network,
                        s,
                        d,
                        SearchOptions {
                            reduced: false,
                            verify_certificate: true,
                        },
                    )?;
                    let mut problems = Vec::new();
                    if central.weight() != weight {
                        problems.push(format!(
                            "weights differ: centralized {:?}, distributed {weight:?}",
                            central.weight()
                        ));
                    }
                    if central.trace != run.trace {
                        problems.push("traces differ".to_string());
                    }
                    let violation = central.max_violation.unwrap_or(0);
                    if violation != 0 {
                        problems.push(format!("certificate violation {violation}"));
                    }
                    if let Some(worst) = result.max_violation.as_mut() {
                        *worst = (*worst).max(violation);
                    }
                    for what in problems {
                        result.discrepancies.push(Discrepancy {
                            n,
                            channels_per_node: per_node,
                            trial,
                            s,
                            d,
                            what,
                        });
                    }
                }
                let n_exp = run.expanded_size;
                let blossoms = run.blossom_count();
                result.rows.push(ResultRow {
                    n,
                    n_exp,
                    c_total: cfg.channel_count,
                    channels_per_node: per_node,
                    mode: mode.clone(),
                    messages_total: run.log.total,
                    blossoms,
                    path_found: weight.is_some(),
                    path_weight: weight,
                    msg_ratio: run.log.total as f64 / (n_exp * n_exp) as f64,
                    blossom_ratio: blossoms as f64 / n_exp as f64,
                });
            }
            let mean = MeanRow::from_rows(&result.rows[first..]);
            result.means.push(mean);
        }
    }
    Ok(result)
}

/// Runs the experiment and writes the CSV to `cfg.output` when set.
pub fn run_and_write(cfg: &ExperimentConfig) -> Result<ExperimentResult, ExperimentError> {
    let result = run_experiment(cfg)?;
    if let Some(path) = &cfg.output {
        write_csv(path, &result)?;
    }
    Ok(result)
}

pub fn write_csv(path: &Path, result: &ExperimentResult) -> std::io::Result<()> {
    std::fs::write(path, result.to_csv())
}

/// Kendall's tau-b. `NaN` when either side is constant.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let (mut concordant, mut discordant, mut ties_x, mut ties_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let dx = x[i].partial_cmp(&x[j]).expect("finite");
            let dy = y[i].partial_cmp(&y[j]).expect("finite");
            use std::cmp::Ordering::Equal;
            match (dx, dy) {
                (Equal, Equal) => {}
                (Equal, _) => ties_x += 1,
                (_, Equal) => ties_y += 1,
                _ if dx == dy => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let n1 = (concordant + discordant + ties_x) as f64;
    let n2 = (concordant + discordant + ties_y) as f64;
    (concordant - discordant) as f64 / (n1 * n2).sqrt()
}

/// Ranks with ties sharing their average rank (1-based).
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).expect("finite"));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rank correlation (Pearson on average ranks).
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&average_ranks(x), &average_ranks(y))
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Least-squares slope of `ln y` against `ln x`. Points with a
/// non-positive coordinate are skipped.
pub fn fit_exponent(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = ExperimentConfig::parse(
            "experiment 1\nn 10 20\nmode fixed-range 5\nchannels 6\nper-node 2 3\n\
             trials 4\nseed 9\nweightmode euclid\nside 30\npolicy random-permute\n\
             verify on\noutput out.csv\n",
        )
        .unwrap();
        assert_eq!(cfg.n_values, vec![10, 20]);
        assert_eq!(cfg.mode, RangeMode::FixedRange(5.0));
        assert_eq!(cfg.channels_per_node, vec![2, 3]);
        assert_eq!(cfg.trials, 4);
        assert_eq!(cfg.weight_mode, WeightMode::Euclidean);
        assert_eq!(cfg.policy, DeliveryPolicy::RandomPermute);
        assert!(cfg.verify);
        assert_eq!(cfg.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "n 10\n",
            "experiment 1\ntrials 0\n",
            "experiment 1\nn 1\n",
            "experiment 1\nchannels 4\nper-node 5\n",
            "experiment 1\nmode fixed-range\n",
            "experiment 1\nbogus 3\n",
            "",
        ] {
            assert!(ExperimentConfig::parse(text).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn rank_statistics() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall_tau(&x, &[2.0, 4.0, 6.0, 8.0]), 1.0);
        assert_eq!(kendall_tau(&x, &[8.0, 6.0, 4.0, 2.0]), -1.0);
        assert_eq!(average_ranks(&[5.0, 1.0, 5.0, 3.0]), vec![3.5, 1.0, 3.5, 2.0]);
        assert!((spearman(&x, &[1.0, 4.0, 9.0, 16.0]) - 1.0).abs() < 1e-12);
        // one discordant pair out of six
        let tau = kendall_tau(&x, &[1.0, 3.0, 2.0, 4.0]);
        assert!((tau - 4.0 / 6.0).abs() < 1e-12);
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(2.5)).collect();
        assert!((fit_exponent(&x, &y) - 2.5).abs() < 1e-9);
    }

    #[test]
    fn tau_b_with_ties() {
        // x ties one pair, y ties none: (C - D) / sqrt((n0 - 1) * n0)
        let tau = kendall_tau(&[1.0, 1.0, 2.0], &[1.0, 2.0, 3.0]);
        assert!((tau - 2.0 / (2.0f64 * 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let cfg = ExperimentConfig {
            n_values: vec![12, 24],
            channels_per_node: vec![2, 3],
            channel_count: 4,
            trials: 3,
            region_side: 20.0,
            verify: true,
            ..Default::default()
        };
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.rows.len(), 12);
        assert_eq!(a.means.len(), 4);
        assert!(a.discrepancies.is_empty(), "{:?}", a.discrepancies);
        assert_eq!(a.max_violation, Some(0));
        let csv = a.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 1 + 12 + 4);
        for row in &a.rows {
            assert_eq!(row.msg_ratio, row.messages_total as f64 / (row.n_exp * row.n_exp) as f64);
            assert!(row.messages_total <= 8 * (row.n_exp * row.n_exp) as u64);
        }
    }

    #[test]
    fn channel_sweep_shares_geometry() {
        assert_ne!(trial_seed(1, 40, 0), trial_seed(1, 40, 1));
        assert_ne!(trial_seed(1, 40, 0), trial_seed(1, 80, 0));
        let net = |per| {
            random_topology(&TopologyConfig::new(30, RangeMode::ConstantDensity, 6, per, trial_seed(3, 30, 2)))
                .unwrap()
        };
        let (a, b) = (net(2), net(5));
        for (x, y) in a.nodes().iter().zip(b.nodes()) {
            assert_eq!(x.pos, y.pos);
        }
    }
}
