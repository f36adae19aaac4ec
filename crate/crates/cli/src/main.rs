//! `artemis`: set up parameters, commit to a model, prove and verify
//! committed inference, and benchmark the weight-binding schemes.

mod bench;
mod files;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use artemis_core::commit::CommitKey;
use artemis_core::zkml::pipeline::{max_degree, prepare, prove_inference, verify_inference, Scheme, SchemeProof};
use artemis_core::zkml::{commit_model, ModelSpec};
use artemis_core::Point;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use files::{Params, PROTOCOL};

#[derive(Parser)]
#[command(name = "artemis", version, about = "Commit-and-prove inference with Horner-gate linking")]
struct Cli {
    /// RNG seed; the ARTEMIS_SEED environment variable takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive a commitment key and record the domain size.
    Setup {
        #[arg(long)]
        k: u32,
        /// Minimum commitment-key degree; raised to 2^k − 1 if smaller.
        #[arg(long, default_value_t = 0)]
        max_degree: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a random model with the given layer widths.
    GenModel {
        /// Comma-separated widths, input first, e.g. `4,8,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        scale_bits: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Commit to every layer of a model.
    Commit {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        params: PathBuf,
        /// Public commitments.
        #[arg(long)]
        out: PathBuf,
        /// Commitment randomness; defaults to `<out>.secret`.
        #[arg(long)]
        secrets: Option<PathBuf>,
    },
    /// Prove inference on an input file (`input = [..]`).
    Prove {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value = "artemis")]
        scheme: Scheme,
        /// Required for the linked schemes.
        #[arg(long)]
        commitments: Option<PathBuf>,
        #[arg(long)]
        secrets: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a proof; exits 0 iff it is accepted. Only the model's shape is
    /// read.
    Verify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        #[arg(long)]
        commitments: Option<PathBuf>,
    },
    /// Time each scheme on a model and write a JSON report.
    Bench {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "none,artemis,strawman,hash")]
        schemes: Vec<String>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn seed(cli_seed: u64) -> Result<u64> {
    match std::env::var("ARTEMIS_SEED") {
        Ok(v) => v.parse().with_context(|| format!("ARTEMIS_SEED={v:?} is not an integer")),
        Err(_) => Ok(cli_seed),
    }
}

fn load_params_for(path: &Path, model: &ModelSpec) -> Result<CommitKey<Point>> {
    let params = Params::load(path)?;
    let needed = max_degree(model);
    if params.ck.max_degree() < needed {
        bail!(
            "parameters support degree {}, the model needs {needed}; rerun setup with a larger --k or --max-degree",
            params.ck.max_degree()
        );
    }
    Ok(params.ck)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let seed = seed(cli.seed)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    match cli.command {
        Command::Setup { k, max_degree, out } => {
            let params = Params::setup(seed, k, max_degree)?;
            files::write(&out, &params.to_bytes())?;
            println!("domain 2^{k} = {} rows, key degree {}", 1usize << k, params.ck.max_degree());
        }
        Command::GenModel { dims, scale_bits, out } => {
            if dims.len() < 2 {
                bail!("--dims needs at least an input and an output width");
            }
            let model = ModelSpec::random(&mut rng, &dims, scale_bits);
            model.validate()?;
            files::write(&out, model.to_toml().as_bytes())?;
        }
        Command::Commit { model, params, out, secrets } => {
            let model = files::load_model(&model)?;
            let ck = load_params_for(&params, &model)?;
            let set = commit_model(&ck, &model, &mut rng)?;
            files::write(&out, &files::commitments_to_bytes(&set))?;
            let secrets = secrets.unwrap_or_else(|| files::with_suffix(&out, "secret"));
            files::write(&secrets, &files::secrets_to_bytes(&set))?;
            println!("{} layer commitments written", set.len());
        }
        Command::Prove {
            model,
            input,
            params,
            scheme,
            commitments,
            secrets,
            out,
        } => {
            let model = files::load_model(&model)?;
            let input = files::load_input(&input)?;
            let ck = load_params_for(&params, &model)?;
            let ext = match (scheme.is_linked(), commitments) {
                (false, _) => None,
                (true, None) => bail!("scheme {scheme} needs --commitments"),
                (true, Some(path)) => {
                    let secrets = secrets.unwrap_or_else(|| files::with_suffix(&path, "secret"));
                    Some(files::load_commitments_with_secrets(&path, &secrets, &model)?)
                }
            };
            let prepared = prepare(&ck, &model, scheme)?;
            let proof = prove_inference(&ck, &prepared, &model, &input, ext.as_ref(), PROTOCOL, &mut rng)?;
            files::write(&out, &proof.to_bytes())?;
            println!("{}", files::outputs_json(&proof, &model)?);
        }
        Command::Verify {
            model,
            params,
            proof,
            commitments,
        } => {
            let model = files::load_model(&model)?;
            let ck = load_params_for(&params, &model)?;
            let proof = SchemeProof::<Point>::from_bytes(&files::read(&proof)?)?;
            let ext = commitments.map(|p| files::load_commitments(&p)).transpose()?;
            let prepared = prepare(&ck, &model, proof.scheme)?;
            if verify_inference(&ck, &prepared, &proof, ext.as_ref(), PROTOCOL) {
                println!("{}", files::outputs_json(&proof, &model)?);
                return Ok(ExitCode::SUCCESS);
            }
            eprintln!("{}", serde_json::json!({ "verified": false, "scheme": proof.scheme.name() }));
            return Ok(ExitCode::from(1));
        }
        Command::Bench {
            model,
            schemes,
            trials,
            out,
        } => {
            let model = files::load_model(&model)?;
            let report = bench::run(&model, &schemes, trials.max(1), seed)?;
            files::write(&out, serde_json::to_string_pretty(&report)?.as_bytes())?;
            print!("{}", report.table());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": format!("{e:#}") }));
            ExitCode::from(2)
        }
    }
}
