//! Verification campaigns: evaluate `det M(d)` for every `d` in a range,
//! cross-check engines and compare with `(-1)^d`.
//!
//! Work is distributed one `d` at a time over a fixed pool of workers. The
//! aggregator (the calling thread) consumes results in `d` order, appends one
//! JSON line per finished `d` to the checkpoint, and builds the report, so
//! the output does not depend on the worker count.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bfile;
use crate::engines::{
    conjectured_value, det_bareiss, det_crt, det_laplace, det_structural, CrtMode, DetResult,
    Engine, StructuralSweep,
};
use crate::error::{Error, Result};
use crate::matrix::{build_m, SparseColMatrix};

/// Number of primes a probabilistic run uses unless told otherwise.
pub const DEFAULT_PROBABILISTIC_PRIMES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Mode {
    Certified,
    Probabilistic { k: usize },
}

impl Mode {
    fn crt_mode(self, seed: u64, d: u64) -> CrtMode {
        match self {
            Mode::Certified => CrtMode::Certified,
            Mode::Probabilistic { k } => CrtMode::Probabilistic {
                k,
                seed: member_seed(seed, d),
            },
        }
    }
}

/// Per-`d` sampling seed, independent of scheduling.
pub fn member_seed(seed: u64, d: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ d.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub d_min: u64,
    pub d_max: u64,
    pub engines: Vec<Engine>,
    pub mode: Mode,
    pub parallelism: usize,
    pub checkpoint_path: Option<PathBuf>,
    pub seed: u64,
}

impl CampaignConfig {
    pub fn new(d_min: u64, d_max: u64, engines: &[Engine], mode: Mode) -> Self {
        Self {
            d_min,
            d_max,
            engines: engines.to_vec(),
            mode,
            parallelism: 1,
            checkpoint_path: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.d_min == 0 {
            return bad("d_min must be at least 1");
        }
        if self.d_min > self.d_max {
            return bad("d_min must not exceed d_max");
        }
        if self.engines.is_empty() {
            return bad("at least one engine is required");
        }
        if self.engines.contains(&Engine::Laplace) {
            return bad("campaigns run bareiss, modular_crt or structural; laplace is oracle-only");
        }
        let mut seen = HashSet::new();
        if !self.engines.iter().all(|e| seen.insert(*e)) {
            return bad("engines must not repeat");
        }
        if self.mode == Mode::Certified
            && !self.engines.iter().any(|e| matches!(e, Engine::Bareiss | Engine::ModularCrt))
        {
            return bad("certified mode requires bareiss or modular_crt");
        }
        if let Mode::Probabilistic { k: 0 } = self.mode {
            return bad("probabilistic mode needs at least one prime");
        }
        if self.parallelism == 0 {
            return bad("parallelism must be positive");
        }
        Ok(())
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            d_min: self.d_min,
            d_max: self.d_max,
            engines: self.engines.clone(),
            mode: self.mode,
            seed: self.seed,
        }
    }
}

/// The part of the config that determines results. Worker count and
/// checkpoint location are left out so they cannot change report bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub d_min: u64,
    pub d_max: u64,
    pub engines: Vec<Engine>,
    pub mode: Mode,
    pub seed: u64,
}

/// Outcome for a single `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DRecord {
    pub d: u64,
    #[serde(with = "crate::bigint_string")]
    pub value: BigInt,
    pub conjectured: i32,
    pub pass: bool,
    pub engines: Vec<Engine>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Engine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_trace: Option<Vec<(u64, u64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_seconds: Option<f64>,
}

impl DRecord {
    fn check_consistent(&self) -> std::result::Result<(), String> {
        let expected = conjectured_value(self.d).map_err(|e| e.to_string())?;
        if self.conjectured != expected {
            return Err(format!("conjectured value {} wrong for d={}", self.conjectured, self.d));
        }
        if self.pass != (self.value == BigInt::from(expected)) {
            return Err(format!("pass flag inconsistent for d={}", self.d));
        }
        if self.engines.is_empty() {
            return Err(format!("no engines recorded for d={}", self.d));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignReport {
    pub config: ConfigEcho,
    pub records: Vec<DRecord>,
    pub all_pass: bool,
    pub total_seconds: f64,
}

#[derive(Serialize)]
struct ReportView<'a> {
    config: &'a ConfigEcho,
    records: Vec<DRecord>,
    all_pass: bool,
    total_seconds: Option<f64>,
}

impl CampaignReport {
    pub fn failures(&self) -> impl Iterator<Item = &DRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    /// JSON report. Without `timings` every wall-clock field is dropped
    /// (`total_seconds` becomes `null`) and the output is a pure function
    /// of the config.
    pub fn to_json(&self, timings: bool) -> String {
        let records = self
            .records
            .iter()
            .map(|r| DRecord {
                wall_seconds: if timings { r.wall_seconds } else { None },
                ..r.clone()
            })
            .collect();
        let view = ReportView {
            config: &self.config,
            records,
            all_pass: self.all_pass,
            total_seconds: timings.then_some(self.total_seconds),
        };
        serde_json::to_string(&view).expect("report serializes")
    }

    pub fn write_json(&self, path: &Path, timings: bool) -> Result<()> {
        let mut s = self.to_json(timings);
        s.push('\n');
        fs::write(path, s)?;
        Ok(())
    }
}

/// Runs one engine on one matrix. Campaigns go through this trait so a
/// harness can substitute or wrap engines.
pub trait Evaluator: Sync {
    fn evaluate(&self, engine: Engine, m: &SparseColMatrix, mode: CrtMode) -> Result<DetResult>;

    /// Whether structural-only campaigns may use the incremental sweep
    /// instead of evaluating each `d` separately.
    fn incremental_structural(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StandardEvaluator;

impl Evaluator for StandardEvaluator {
    fn evaluate(&self, engine: Engine, m: &SparseColMatrix, mode: CrtMode) -> Result<DetResult> {
        match engine {
            Engine::Laplace => det_laplace(&m.to_dense()),
            Engine::Bareiss => Ok(det_bareiss(&m.to_dense())),
            Engine::ModularCrt => Ok(det_crt(m, mode)),
            Engine::Structural => det_structural(m),
        }
    }

    fn incremental_structural(&self) -> bool {
        true
    }
}

/// Builds `M(d)`, runs every engine, checks agreement and compares with
/// `(-1)^d`.
pub fn verify_one(d: u64, engines: &[Engine], mode: Mode, seed: u64) -> Result<DRecord> {
    verify_one_with(&StandardEvaluator, d, engines, mode, seed)
}

pub fn verify_one_with(
    evaluator: &dyn Evaluator,
    d: u64,
    engines: &[Engine],
    mode: Mode,
    seed: u64,
) -> Result<DRecord> {
    let start = Instant::now();
    let m = build_m(d)?;
    let crt_mode = mode.crt_mode(seed, d);
    let mut results = Vec::with_capacity(engines.len());
    let mut skipped = Vec::new();
    let mut mismatch = None;
    for &engine in engines {
        match evaluator.evaluate(engine, &m, crt_mode) {
            Ok(r) => results.push(r),
            Err(Error::StructuralMismatch(msg)) => {
                skipped.push(engine);
                mismatch = Some(msg);
            }
            Err(e) => return Err(e),
        }
    }
    let Some(first) = results.first() else {
        return Err(Error::StructuralMismatch(
            mismatch.unwrap_or_else(|| "no engine produced a value".into()),
        ));
    };
    if results.iter().any(|r| r.value != first.value) {
        let details = results
            .iter()
            .map(|r| match &r.prime_trace {
                Some(t) => format!("{}={} (primes/residues {:?})", r.engine, r.value, t),
                None => format!("{}={}", r.engine, r.value),
            })
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::EngineDisagreement { d, details });
    }
    let conjectured = conjectured_value(d)?;
    let value = first.value.clone();
    Ok(DRecord {
        d,
        pass: value == BigInt::from(conjectured),
        value,
        conjectured,
        engines: results.iter().map(|r| r.engine).collect(),
        skipped,
        prime_trace: results.iter().find_map(|r| r.prime_trace.clone()),
        wall_seconds: Some(start.elapsed().as_secs_f64()),
    })
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    run_campaign_with(cfg, &StandardEvaluator)
}

pub fn run_campaign_with(cfg: &CampaignConfig, evaluator: &dyn Evaluator) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Instant::now();

    let mut done = match &cfg.checkpoint_path {
        Some(p) if p.exists() => read_checkpoint(p, cfg.d_min, cfg.d_max)?,
        _ => BTreeMap::new(),
    };
    let mut sink = match &cfg.checkpoint_path {
        Some(p) => Some(CheckpointWriter::open(p)?),
        None => None,
    };
    let pending: Vec<u64> = (cfg.d_min..=cfg.d_max).filter(|d| !done.contains_key(d)).collect();

    let fresh = if evaluator.incremental_structural() && cfg.engines == [Engine::Structural] {
        sweep_structural(&pending, sink.as_mut())?
    } else {
        run_pool(cfg, evaluator, &pending, sink.as_mut())?
    };
    for r in fresh {
        done.insert(r.d, r);
    }

    let records: Vec<DRecord> = done.into_values().collect();
    Ok(CampaignReport {
        config: cfg.echo(),
        all_pass: records.iter().all(|r| r.pass),
        records,
        total_seconds: start.elapsed().as_secs_f64(),
    })
}

fn run_pool(
    cfg: &CampaignConfig,
    evaluator: &dyn Evaluator,
    pending: &[u64],
    mut sink: Option<&mut CheckpointWriter>,
) -> Result<Vec<DRecord>> {
    let workers = cfg.parallelism.min(pending.len()).max(1);
    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<DRecord>)>();

    thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, abort) = (&next, &abort);
            scope.spawn(move || loop {
                if abort.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&d) = pending.get(i) else { break };
                let r = verify_one_with(evaluator, d, &cfg.engines, cfg.mode, cfg.seed);
                if tx.send((i, r)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut aggregate = || {
            let mut out = Vec::with_capacity(pending.len());
            let mut parked = BTreeMap::new();
            for (i, r) in rx.iter() {
                parked.insert(i, r);
                while let Some(r) = parked.remove(&out.len()) {
                    let rec = r?;
                    if let Some(w) = sink.as_deref_mut() {
                        w.append(&rec)?;
                    }
                    out.push(rec);
                }
            }
            Ok(out)
        };
        let result = aggregate();
        if result.is_err() {
            abort.store(true, Ordering::Relaxed);
        }
        result
    })
}

fn sweep_structural(
    pending: &[u64],
    mut sink: Option<&mut CheckpointWriter>,
) -> Result<Vec<DRecord>> {
    let Some(&last) = pending.last() else {
        return Ok(Vec::new());
    };
    let mut wanted = pending.iter().copied().peekable();
    let mut sweep = StructuralSweep::new();
    let mut out = Vec::with_capacity(pending.len());
    let mut clock = Instant::now();
    loop {
        let (d, v) = sweep.step()?;
        if wanted.next_if_eq(&d).is_some() {
            let conjectured = conjectured_value(d)?;
            let rec = DRecord {
                d,
                value: BigInt::from(v),
                conjectured,
                pass: i32::from(v) == conjectured,
                engines: vec![Engine::Structural],
                skipped: Vec::new(),
                prime_trace: None,
                wall_seconds: Some(clock.elapsed().as_secs_f64()),
            };
            if let Some(w) = sink.as_deref_mut() {
                w.append(&rec)?;
            }
            out.push(rec);
            clock = Instant::now();
        }
        if d == last {
            break;
        }
    }
    Ok(out)
}

struct CheckpointWriter {
    file: File,
}

impl CheckpointWriter {
    fn open(path: &Path) -> Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self { file })
    }

    /// One line per record, written with a single `write_all`.
    fn append(&mut self, rec: &DRecord) -> Result<()> {
        let mut line = serde_json::to_string(rec)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        Ok(())
    }
}

/// Reads a checkpoint. Any malformed line, duplicate, out-of-range `d` or
/// internally inconsistent record is an error.
pub fn read_checkpoint(path: &Path, d_min: u64, d_max: u64) -> Result<BTreeMap<u64, DRecord>> {
    let text = fs::read_to_string(path)?;
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(Error::CheckpointCorrupt {
            line: text.lines().count(),
            reason: "truncated final line".into(),
        });
    }
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let corrupt = |reason: String| Error::CheckpointCorrupt { line: i + 1, reason };
        let rec: DRecord = serde_json::from_str(line).map_err(|e| corrupt(e.to_string()))?;
        rec.check_consistent().map_err(corrupt)?;
        if !(d_min..=d_max).contains(&rec.d) {
            return Err(corrupt(format!("d={} outside [{d_min}, {d_max}]", rec.d)));
        }
        let d = rec.d;
        if out.insert(d, rec).is_some() {
            return Err(corrupt(format!("duplicate record for d={d}")));
        }
    }
    Ok(out)
}

/// Writes `d a(d)` lines for a report covering a contiguous range.
pub fn export_bfile(report: &CampaignReport, path: &Path) -> Result<()> {
    let Some(first) = report.records.first() else {
        return Err(Error::Export("report has no records".into()));
    };
    if first.d == 0 {
        return Err(Error::Export("indices must start at 1 or later".into()));
    }
    for (i, r) in report.records.iter().enumerate() {
        if r.d != first.d + i as u64 {
            return Err(Error::Export(format!("report is not contiguous at d={}", r.d)));
        }
    }
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(bfile::format_bfile(report.records.iter().map(|r| (r.d, &r.value))).as_bytes())?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let ok = CampaignConfig::new(1, 3, &[Engine::Bareiss], Mode::Certified);
        assert!(ok.validate().is_ok());
        let cases = [
            CampaignConfig::new(0, 3, &[Engine::Bareiss], Mode::Certified),
            CampaignConfig::new(4, 3, &[Engine::Bareiss], Mode::Certified),
            CampaignConfig::new(1, 3, &[], Mode::Certified),
            CampaignConfig::new(1, 3, &[Engine::Structural], Mode::Certified),
            CampaignConfig::new(1, 3, &[Engine::Laplace], Mode::Probabilistic { k: 5 }),
            CampaignConfig::new(1, 3, &[Engine::Bareiss, Engine::Bareiss], Mode::Certified),
            CampaignConfig::new(1, 3, &[Engine::ModularCrt], Mode::Probabilistic { k: 0 }),
            CampaignConfig {
                parallelism: 0,
                ..ok.clone()
            },
        ];
        for c in cases {
            assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))), "{c:?}");
        }
        assert!(CampaignConfig::new(1, 3, &[Engine::Structural], Mode::Probabilistic { k: 5 })
            .validate()
            .is_ok());
    }

    #[test]
    fn verify_small() {
        let r = verify_one(1, &[Engine::Bareiss], Mode::Certified, 0).unwrap();
        assert_eq!(r.value, BigInt::from(-1));
        assert!(r.pass);
        let r = verify_one(2, &[Engine::Bareiss, Engine::Structural], Mode::Certified, 0).unwrap();
        assert_eq!(r.value, BigInt::from(1));
        assert_eq!(r.engines, vec![Engine::Bareiss, Engine::Structural]);
        assert!(r.pass);
    }

    #[test]
    fn record_json_shape() {
        let r = verify_one(3, &[Engine::ModularCrt], Mode::Certified, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(v["value"], "-1");
        assert_eq!(v["conjectured"], -1);
        assert_eq!(v["engines"][0], "modular_crt");
        assert!(v["prime_trace"].is_array());
    }

    #[test]
    fn member_seeds_differ() {
        assert_ne!(member_seed(0, 1), member_seed(0, 2));
        assert_ne!(member_seed(0, 1), member_seed(1, 1));
    }
}
