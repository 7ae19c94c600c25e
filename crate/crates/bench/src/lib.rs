//! Benchmark driver: runs seeded trials of one or more operations and reports
//! exact round and bit counts from the cost meter, wall time and error rate.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use tripartite::harness::{run_trial, Op, OpParams};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Protocol(#[from] tripartite::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self> {
        <Format as ValueEnum>::from_str(s, true).map_err(BenchError::Usage)
    }
}

/// Command-line flags. Every option may also come from a `key=value` file
/// given with `--config`, using the flag name without dashes; flags win.
#[derive(Parser, Debug, Clone, Default)]
#[command(name = "tripartite-bench", version, about = "Round, bit and error-rate benchmarks of the three-party protocols")]
pub struct Cli {
    /// Operations, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub op: Vec<String>,
    /// Ring widths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub bits: Vec<u32>,
    #[arg(long)]
    pub keybits: Option<u32>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub base: Option<u32>,
    #[arg(long)]
    pub nt: Option<u32>,
    #[arg(long)]
    pub ne: Option<u32>,
    #[arg(long)]
    pub ns: Option<u32>,
    #[arg(long)]
    pub np: Option<u32>,
    #[arg(long)]
    pub deterministic_carry: bool,
    #[arg(long)]
    pub unsafe_reveal: bool,
    #[arg(long)]
    pub meter_preshared: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plain `key=value` file with defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fail unless every record has at most this many rounds.
    #[arg(long)]
    pub max_rounds: Option<u32>,
    /// Fail unless every record has exactly this many rounds.
    #[arg(long)]
    pub exact_rounds: Option<u32>,
    /// Fail unless every record sends at most this many bits per operation.
    #[arg(long)]
    pub max_bits: Option<u64>,
    /// Fail unless every record's error rate is at most this.
    #[arg(long)]
    pub max_error_rate: Option<f64>,
}

/// Acceptance thresholds; unset ones are not checked.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Thresholds {
    pub max_rounds: Option<u32>,
    pub exact_rounds: Option<u32>,
    pub max_bits: Option<u64>,
    pub max_error_rate: Option<f64>,
}

impl Thresholds {
    /// Descriptions of every threshold `record` misses.
    pub fn violations(&self, record: &BenchRecord) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(max) = self.max_rounds.filter(|&m| record.rounds > m) {
            out.push(format!("{}: {} rounds > {max}", record.op, record.rounds));
        }
        if let Some(exact) = self.exact_rounds.filter(|&e| record.rounds != e) {
            out.push(format!("{}: {} rounds != {exact}", record.op, record.rounds));
        }
        if let Some(max) = self.max_bits.filter(|&m| record.bits_total > m) {
            out.push(format!("{}: {} bits > {max}", record.op, record.bits_total));
        }
        if let Some(max) = self.max_error_rate.filter(|&m| record.error_rate > m) {
            out.push(format!("{}: error rate {} > {max}", record.op, record.error_rate));
        }
        out
    }
}

/// Fully resolved benchmark request.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ops: Vec<Op>,
    pub bits: Vec<u32>,
    pub trials: u64,
    pub seed: u64,
    pub format: Format,
    pub params: OpParams,
    pub thresholds: Thresholds,
    pub out: Option<PathBuf>,
}

/// Reads a `key=value` file; blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<HashMap<String, String>> {
    parse_config(&fs::read_to_string(path)?)
}

pub fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| BenchError::Usage(format!("config line {}: expected key=value", n + 1)))?;
        map.insert(key.trim().replace('_', "-"), value.trim().to_string());
    }
    Ok(map)
}

fn from_file<T: FromStr>(file: &HashMap<String, String>, key: &str) -> Result<Option<T>> {
    file.get(key)
        .map(|v| v.parse().map_err(|_| BenchError::Usage(format!("config `{key}`: cannot parse `{v}`"))))
        .transpose()
}

fn pick<T: FromStr>(flag: Option<T>, file: &HashMap<String, String>, key: &str) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => from_file(file, key),
    }
}

fn pick_list<T: FromStr>(flag: Vec<T>, file: &HashMap<String, String>, key: &str) -> Result<Vec<T>> {
    if !flag.is_empty() {
        return Ok(flag);
    }
    match file.get(key) {
        None => Ok(Vec::new()),
        Some(v) => v
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| BenchError::Usage(format!("config `{key}`: cannot parse `{s}`"))))
            .collect(),
    }
}

fn pick_flag(flag: bool, file: &HashMap<String, String>, key: &str) -> Result<bool> {
    Ok(flag || from_file::<bool>(file, key)?.unwrap_or(false))
}

impl Cli {
    /// Merges the flags with the optional config file and validates them.
    pub fn resolve(self) -> Result<BenchConfig> {
        let file = match &self.config {
            Some(path) => read_config_file(path)?,
            None => HashMap::new(),
        };
        let names = pick_list(self.op, &file, "op")?;
        if names.is_empty() {
            return Err(BenchError::Usage("--op is required".into()));
        }
        let ops = names
            .iter()
            .map(|n: &String| n.parse::<Op>().map_err(|e| BenchError::Usage(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let mut bits = pick_list(self.bits, &file, "bits")?;
        if bits.is_empty() {
            bits.push(32);
        }
        let defaults = OpParams::default();
        let params = OpParams {
            key_bits: pick(self.keybits, &file, "keybits")?,
            base: pick(self.base, &file, "base")?.unwrap_or(defaults.base),
            n_t: pick(self.nt, &file, "nt")?.unwrap_or(defaults.n_t),
            n_e: pick(self.ne, &file, "ne")?.unwrap_or(defaults.n_e),
            n_s: pick(self.ns, &file, "ns")?.unwrap_or(defaults.n_s),
            n_p: pick(self.np, &file, "np")?.unwrap_or(defaults.n_p),
            deterministic_carry: pick_flag(self.deterministic_carry, &file, "deterministic-carry")?,
            unsafe_reveal: pick_flag(self.unsafe_reveal, &file, "unsafe-reveal")?,
            meter_preshared: pick_flag(self.meter_preshared, &file, "meter-preshared")?,
            ..defaults
        };
        let trials = pick(self.trials, &file, "trials")?.unwrap_or(100);
        if trials == 0 {
            return Err(BenchError::Usage("--trials must be positive".into()));
        }
        for &l in &bits {
            if !(4..=tripartite::ring::MAX_BITS).contains(&l) {
                return Err(BenchError::Usage(format!("--bits {l} outside [4, {}]", tripartite::ring::MAX_BITS)));
            }
        }
        Ok(BenchConfig {
            ops,
            bits,
            trials,
            seed: pick(self.seed, &file, "seed")?.unwrap_or(0),
            format: pick(self.format, &file, "format")?.unwrap_or_default(),
            params,
            thresholds: Thresholds {
                max_rounds: pick(self.max_rounds, &file, "max-rounds")?,
                exact_rounds: pick(self.exact_rounds, &file, "exact-rounds")?,
                max_bits: pick(self.max_bits, &file, "max-bits")?,
                max_error_rate: pick(self.max_error_rate, &file, "max-error-rate")?,
            },
            out: pick(self.out, &file, "out")?,
        })
    }
}

/// One row of output: one operation at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub op: String,
    pub l: u32,
    pub key_bits: u32,
    pub trials: u64,
    /// Largest round count over the trials.
    pub rounds: u32,
    /// Largest bit count of one operation over the trials.
    pub bits_total: u64,
    /// Mean wall time of one trial, all parties together.
    pub wall_us_per_op: f64,
    pub error_rate: f64,
    pub seed: u64,
    /// Bits per directed party pair of the costliest trial.
    #[serde(skip)]
    pub bits_by_pair: Vec<(String, String, u64)>,
    /// Trials in which some party held both halves of a secret.
    #[serde(skip)]
    pub runs_with_violations: u64,
}

/// Seed of trial `j`: a SplitMix64 step away from the run seed.
pub fn trial_seed(seed: u64, j: u64) -> u64 {
    let mut z = seed.wrapping_add(j.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `trials` seeded trials of `op` with `params` and summarises them.
pub fn bench_point(op: Op, params: &OpParams, trials: u64, seed: u64) -> Result<BenchRecord> {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|j| {
            let start = Instant::now();
            let trial = run_trial(op, params, trial_seed(seed, j))?;
            Ok((trial, start.elapsed().as_secs_f64()))
        })
        .collect::<Result<Vec<_>>>()?;
    let errors = outcomes.iter().filter(|(t, _)| !t.correct()).count();
    let costliest = outcomes
        .iter()
        .map(|(t, _)| &t.meter)
        .max_by_key(|m| m.total_bits())
        .expect("at least one trial");
    let elapsed: f64 = outcomes.iter().map(|(_, s)| s).sum();
    Ok(BenchRecord {
        op: op.name().into(),
        l: params.l,
        key_bits: params.key_bits(),
        trials,
        rounds: outcomes.iter().map(|(t, _)| t.meter.rounds).max().unwrap_or(0),
        bits_total: costliest.total_bits(),
        wall_us_per_op: elapsed * 1e6 / trials as f64,
        error_rate: errors as f64 / trials as f64,
        seed,
        bits_by_pair: costliest.by_pair().into_iter().map(|(f, t, b)| (f.to_string(), t.to_string(), b)).collect(),
        runs_with_violations: outcomes.iter().filter(|(t, _)| !t.violations.is_empty()).count() as u64,
    })
}

/// One record per (op, width), in request order.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::with_capacity(cfg.ops.len() * cfg.bits.len());
    for &op in &cfg.ops {
        for &l in &cfg.bits {
            let params = OpParams { l, ..cfg.params };
            records.push(bench_point(op, &params, cfg.trials, cfg.seed)?);
        }
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r)?;
    }
    if records.is_empty() {
        writer.write_record(CSV_HEADER.split(','))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[BenchRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)?;
    Ok(())
}

pub const CSV_HEADER: &str = "op,l,key_bits,trials,rounds,bits_total,wall_us_per_op,error_rate,seed";

pub fn emit<W: Write>(records: &[BenchRecord], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => write_json(records, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::parse_from(std::iter::once("tripartite-bench").chain(args.iter().copied()))
    }

    #[test]
    fn csv_header_is_exact() {
        let cfg = cli(&["--op", "mul", "--bits", "8", "--trials", "3"]).resolve().unwrap();
        let records = run_bench(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn json_carries_the_same_values() {
        let cfg = cli(&["--op", "and2", "--bits", "8", "--trials", "4", "--seed", "9"]).resolve().unwrap();
        let records = run_bench(&cfg).unwrap();
        let mut buf = Vec::new();
        write_json(&records, &mut buf).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let row = &parsed[0];
        assert_eq!(row["op"], "and2");
        assert_eq!(row["rounds"], records[0].rounds);
        assert_eq!(row["bits_total"], records[0].bits_total);
        let keys: Vec<&str> = row.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected: Vec<&str> = CSV_HEADER.split(',').collect();
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let cfg = cli(&["--op", "less_zero", "--bits", "12", "--trials", "50", "--seed", "4"]).resolve().unwrap();
        let strip = |mut r: Vec<BenchRecord>| {
            r.iter_mut().for_each(|r| r.wall_us_per_op = 0.0);
            r
        };
        assert_eq!(strip(run_bench(&cfg).unwrap()), strip(run_bench(&cfg).unwrap()));
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let file = parse_config("# defaults\nop = mul\nbits=8,12\ntrials = 5\nns = 4\n").unwrap();
        assert_eq!(file["bits"], "8,12");
        let dir = std::env::temp_dir().join(format!("tripartite-bench-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bench.conf");
        fs::write(&path, "op = mul\nbits = 8,12\ntrials = 5\nns = 4\n").unwrap();
        let cfg = cli(&["--config", path.to_str().unwrap(), "--trials", "2"]).resolve().unwrap();
        assert_eq!(cfg.ops, vec![Op::Mul]);
        assert_eq!(cfg.bits, vec![8, 12]);
        assert_eq!(cfg.trials, 2);
        assert_eq!(cfg.params.n_s, 4);
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(cli(&["--op", "nope"]).resolve(), Err(BenchError::Usage(_))));
        assert!(matches!(cli(&["--op", "mul", "--bits", "99"]).resolve(), Err(BenchError::Usage(_))));
        assert!(matches!(cli(&[]).resolve(), Err(BenchError::Usage(_))));
        assert!(parse_config("no equals sign").is_err());
    }

    #[test]
    fn thresholds_flag_misses() {
        let record = BenchRecord {
            op: "sine".into(),
            l: 16,
            key_bits: 16,
            trials: 1,
            rounds: 5,
            bits_total: 300,
            wall_us_per_op: 1.0,
            error_rate: 0.0,
            seed: 0,
            bits_by_pair: Vec::new(),
            runs_with_violations: 0,
        };
        let pass = Thresholds { exact_rounds: Some(5), max_bits: Some(400), ..Default::default() };
        assert!(pass.violations(&record).is_empty());
        let fail = Thresholds { max_rounds: Some(4), max_error_rate: Some(0.0), ..Default::default() };
        assert_eq!(fail.violations(&record).len(), 1);
    }
}
