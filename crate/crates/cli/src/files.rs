//! On-disk formats: binary containers from the core codec for keys,
//! commitments and proofs; TOML for models and inputs.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use artemis_core::algebra::{EvaluationDomain, Polynomial};
use artemis_core::artemis::{CommitmentSecrets, ExternalCommitmentSet};
use artemis_core::codec::{Reader, Writer};
use artemis_core::commit::CommitKey;
use artemis_core::zkml::pipeline::SchemeProof;
use artemis_core::zkml::{model_coefficients, ModelSpec};
use artemis_core::{Point, Scalar};
use serde::Deserialize;

pub const PROTOCOL: &[u8] = b"artemis-cli-v1";

pub fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

/// A domain size and the commitment key derived for it.
pub struct Params {
    pub k: u32,
    pub ck: CommitKey<Point>,
}

impl Params {
    pub fn setup(seed: u64, k: u32, max_degree: usize) -> Result<Self> {
        EvaluationDomain::<Scalar>::new(k).with_context(|| format!("invalid k = {k}"))?;
        if k < artemis_core::plonkish::MIN_LOG_SIZE {
            bail!("k must be at least {}", artemis_core::plonkish::MIN_LOG_SIZE);
        }
        let degree = max_degree.max((1usize << k) - 1);
        let ck = CommitKey::setup(format!("artemis-params-{seed}").as_bytes(), degree)?;
        Ok(Params { k, ck })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.section(b"APRM", |s| {
            s.put_u32(self.k);
            self.ck.write(s);
        });
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let mut s = r.section(b"APRM")?;
        let k = s.get_u32()?;
        let ck = CommitKey::read(&mut s)?;
        s.finish()?;
        r.finish()?;
        Ok(Params { k, ck })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&read(path)?).with_context(|| format!("decoding parameters {}", path.display()))
    }
}

pub fn load_model(path: &Path) -> Result<ModelSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ModelSpec::from_toml(&text).with_context(|| format!("parsing model {}", path.display()))
}

#[derive(Deserialize)]
struct InputFile {
    input: Vec<i64>,
}

pub fn load_input(path: &Path) -> Result<Vec<i64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: InputFile = toml::from_str(&text).with_context(|| format!("parsing input {}", path.display()))?;
    Ok(file.input)
}

pub fn commitments_to_bytes(set: &ExternalCommitmentSet<Point>) -> Vec<u8> {
    let mut w = Writer::new();
    set.write(&mut w);
    w.into_bytes()
}

pub fn load_commitments(path: &Path) -> Result<ExternalCommitmentSet<Point>> {
    let bytes = read(path)?;
    let mut r = Reader::new(&bytes);
    let set = ExternalCommitmentSet::read(&mut r).with_context(|| format!("decoding commitments {}", path.display()))?;
    r.finish()?;
    Ok(set)
}

pub fn secrets_to_bytes(set: &ExternalCommitmentSet<Point>) -> Vec<u8> {
    let mut w = Writer::new();
    let blinds = set.secrets.as_ref().map(|s| s.blinds.clone()).unwrap_or_default();
    w.section(b"XSEC", |s| s.put_scalars(&blinds));
    w.into_bytes()
}

/// Public commitments plus the prover's randomness; the committed
/// polynomials are re-derived from the model.
pub fn load_commitments_with_secrets(
    path: &Path,
    secrets: &Path,
    model: &ModelSpec,
) -> Result<ExternalCommitmentSet<Point>> {
    let mut set = load_commitments(path)?;
    let bytes = read(secrets)?;
    let mut r = Reader::new(&bytes);
    let mut s = r.section(b"XSEC")?;
    let blinds: Vec<Scalar> = s.get_scalars()?;
    s.finish()?;
    r.finish()?;
    if blinds.len() != set.len() {
        bail!("{} blinds for {} commitments", blinds.len(), set.len());
    }
    let polys = model_coefficients::<Scalar>(model).into_iter().map(Polynomial::from_vec).collect();
    set.secrets = Some(CommitmentSecrets { polys, blinds });
    Ok(set)
}

/// The proof's public input and output as signed integers.
pub fn outputs_json(proof: &SchemeProof<Point>, model: &ModelSpec) -> Result<String> {
    let decode = |v: &Scalar| -> Result<i64> {
        artemis_core::zkml::pipeline::scalar_to_i64(*v).context("public value outside the signed 64-bit range")
    };
    let column = proof.instance.first().context("proof carries no instance")?;
    if column.len() < model.input_dim() + model.output_dim() {
        bail!("proof instance is shorter than the model's input and output");
    }
    let input = column[..model.input_dim()].iter().map(decode).collect::<Result<Vec<_>>>()?;
    let output = column[model.input_dim()..model.input_dim() + model.output_dim()]
        .iter()
        .map(decode)
        .collect::<Result<Vec<_>>>()?;
    Ok(serde_json::json!({ "scheme": proof.scheme.name(), "input": input, "output": output }).to_string())
}
