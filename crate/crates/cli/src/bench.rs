//! Median timings of every weight-binding scheme on one model.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use anyhow::Result;
use artemis_core::artemis::ExternalCommitmentSet;
use artemis_core::commit::CommitKey;
use artemis_core::zkml::pipeline::{max_degree, prepare, prove_inference, verify_inference, Prepared, Scheme};
use artemis_core::zkml::{commit_model, native_infer, ModelSpec};
use artemis_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::files::PROTOCOL;

pub const SCHEMA: &str = "artemis-bench/1";

#[derive(Debug, Serialize)]
pub struct SchemeReport {
    pub scheme: String,
    pub prover_ms: f64,
    pub verifier_ms: f64,
    pub proof_bytes: usize,
    pub rows: usize,
    pub advice_columns: usize,
    pub fixed_columns: usize,
    /// Prover time relative to `none`, when it was measured.
    pub prover_overhead: Option<f64>,
    pub verifier_overhead: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Skipped {
    pub scheme: String,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub schema: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub committed_weights: usize,
    pub layers: usize,
    pub results: Vec<SchemeReport>,
    pub skipped: Vec<Skipped>,
}

struct Run {
    prepared: Prepared<Point>,
    prove_t: Vec<Duration>,
    verify_t: Vec<Duration>,
    proof_bytes: usize,
}

impl Run {
    fn trial(
        &mut self,
        ck: &CommitKey<Point>,
        model: &ModelSpec,
        input: &[i64],
        ext: &ExternalCommitmentSet<Point>,
        public: &ExternalCommitmentSet<Point>,
        rng: &mut ChaCha20Rng,
    ) -> Result<()> {
        let scheme = self.prepared.scheme;
        let start = Instant::now();
        let proof = prove_inference(ck, &self.prepared, model, input, Some(ext), PROTOCOL, rng)?;
        self.prove_t.push(start.elapsed());
        let start = Instant::now();
        let ok = verify_inference(ck, &self.prepared, &proof, Some(public), PROTOCOL);
        self.verify_t.push(start.elapsed());
        anyhow::ensure!(ok, "{scheme} proof did not verify");
        self.proof_bytes = proof.body_len();
        Ok(())
    }
}

fn median(mut xs: Vec<Duration>) -> f64 {
    xs.sort();
    xs[xs.len() / 2].as_secs_f64() * 1e3
}

/// Runs each named scheme `trials` times on one input derived from `seed`.
/// Unknown or failing schemes are reported as skipped.
pub fn run(model: &ModelSpec, schemes: &[String], trials: usize, seed: u64) -> Result<BenchReport> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let unit = 1i64 << model.scale_bits;
    let input: Vec<i64> = (0..model.input_dim()).map(|_| rng.gen_range(-unit..=unit)).collect();
    native_infer(model, &input)?;
    let ck = CommitKey::<Point>::setup(format!("artemis-bench-{seed}").as_bytes(), max_degree(model))?;
    let ext = commit_model(&ck, model, &mut rng)?;
    let public = ext.public();

    let mut skipped = Vec::new();
    let mut runs = Vec::new();
    for name in schemes {
        let prepared = name
            .parse::<Scheme>()
            .map_err(anyhow::Error::from)
            .and_then(|scheme| Ok(prepare(&ck, model, scheme)?));
        match prepared {
            Ok(p) => runs.push(Run {
                prepared: p,
                prove_t: Vec::new(),
                verify_t: Vec::new(),
                proof_bytes: 0,
            }),
            Err(e) => skipped.push(Skipped {
                scheme: name.clone(),
                reason: format!("{e:#}"),
            }),
        }
    }

    // Interleave the schemes so drift in machine load hits all of them alike.
    for _ in 0..trials {
        let mut failed = Vec::new();
        for (i, run) in runs.iter_mut().enumerate() {
            if let Err(e) = run.trial(&ck, model, &input, &ext, &public, &mut rng) {
                failed.push((i, e));
            }
        }
        for (i, e) in failed.into_iter().rev() {
            let run = runs.remove(i);
            skipped.push(Skipped {
                scheme: run.prepared.scheme.name().into(),
                reason: format!("{e:#}"),
            });
        }
    }

    let mut results: Vec<SchemeReport> = runs
        .into_iter()
        .map(|run| {
            let (rows, advice_columns, fixed_columns) = run.prepared.grid();
            SchemeReport {
                scheme: run.prepared.scheme.name().into(),
                prover_ms: median(run.prove_t),
                verifier_ms: median(run.verify_t),
                proof_bytes: run.proof_bytes,
                rows,
                advice_columns,
                fixed_columns,
                prover_overhead: None,
                verifier_overhead: None,
            }
        })
        .collect();
    if let Some((p, v)) = results.iter().find(|r| r.scheme == "none").map(|r| (r.prover_ms, r.verifier_ms)) {
        for r in &mut results {
            r.prover_overhead = Some(r.prover_ms / p);
            r.verifier_overhead = Some(r.verifier_ms / v);
        }
    }
    Ok(BenchReport {
        schema: SCHEMA,
        seed,
        trials,
        committed_weights: model.num_weights(),
        layers: model.layers.len(),
        results,
        skipped,
    })
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<9} {:>11} {:>11} {:>9} {:>7} {:>7} {:>9}",
            "scheme", "prove ms", "verify ms", "bytes", "rows", "advice", "overhead"
        );
        for r in &self.results {
            let overhead = r.prover_overhead.map_or("-".to_string(), |o| format!("{o:.2}x"));
            let _ = writeln!(
                out,
                "{:<9} {:>11.1} {:>11.1} {:>9} {:>7} {:>7} {:>9}",
                r.scheme, r.prover_ms, r.verifier_ms, r.proof_bytes, r.rows, r.advice_columns, overhead
            );
        }
        for s in &self.skipped {
            let _ = writeln!(out, "{:<9} skipped: {}", s.scheme, s.reason);
        }
        out
    }
}
