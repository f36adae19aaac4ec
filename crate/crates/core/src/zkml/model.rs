use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bits available to a rescaled quotient; intermediate values above this
/// are rejected as overflow.
pub const QUOTIENT_BITS: u32 = 32;
/// Largest supported fixed-point fraction.
pub const MAX_SCALE_BITS: u32 = 16;
/// Bound on the magnitude of weights and biases.
pub const MAX_PARAM_BITS: u32 = 24;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Identity,
    Square,
}

/// A dense layer in fixed-point units: `weights[o·in_dim + i]` connects
/// input `i` to output `o`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub in_dim: usize,
    pub out_dim: usize,
    pub weights: Vec<i64>,
    pub bias: Vec<i64>,
    #[serde(default)]
    pub activation: Activation,
}

/// A feed-forward network of [`LayerSpec`]s sharing one fixed-point scale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub scale_bits: u32,
    pub layers: Vec<LayerSpec>,
}

impl ModelSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let model: ModelSpec = toml::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("model serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if self.scale_bits > MAX_SCALE_BITS {
            return bad(format!("scale_bits {} exceeds {MAX_SCALE_BITS}", self.scale_bits));
        }
        if self.layers.is_empty() {
            return bad("no layers".into());
        }
        let limit = 1i64 << MAX_PARAM_BITS;
        for (l, layer) in self.layers.iter().enumerate() {
            if layer.in_dim == 0 || layer.out_dim == 0 {
                return bad(format!("layer {l} has an empty dimension"));
            }
            if l > 0 && layer.in_dim != self.layers[l - 1].out_dim {
                return bad(format!("layer {l} expects {} inputs, previous layer gives {}", layer.in_dim, self.layers[l - 1].out_dim));
            }
            if layer.weights.len() != layer.in_dim * layer.out_dim {
                return bad(format!("layer {l} has {} weights, expected {}", layer.weights.len(), layer.in_dim * layer.out_dim));
            }
            if layer.bias.len() != layer.out_dim {
                return bad(format!("layer {l} has {} biases, expected {}", layer.bias.len(), layer.out_dim));
            }
            if let Some(v) = layer.weights.iter().chain(&layer.bias).find(|v| v.abs() >= limit) {
                return bad(format!("layer {l} parameter {v} exceeds 2^{MAX_PARAM_BITS}"));
            }
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("validated").out_dim
    }

    pub fn num_weights(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len()).sum()
    }

    /// A random model with parameters in `±2^scale_bits` (one unit).
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], scale_bits: u32) -> Self {
        let unit = 1i64 << scale_bits;
        let layers = dims
            .windows(2)
            .map(|d| LayerSpec {
                in_dim: d[0],
                out_dim: d[1],
                weights: (0..d[0] * d[1]).map(|_| rng.gen_range(-unit..=unit)).collect(),
                bias: (0..d[1]).map(|_| rng.gen_range(-unit..=unit)).collect(),
                activation: if rng.gen_bool(0.5) { Activation::Square } else { Activation::Identity },
            })
            .collect();
        ModelSpec { scale_bits, layers }
    }
}

/// Intermediate values of one neuron, as the circuit lays them out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct NeuronTrace {
    /// `Σ w·x + bias·2^s`.
    pub acc: i128,
    /// `acc` rescaled.
    pub linear: i128,
    /// `linear²` rescaled, for square activations.
    pub squared: Option<i128>,
}

impl NeuronTrace {
    pub fn output(&self) -> i128 {
        self.squared.unwrap_or(self.linear)
    }
}

/// Division by `2^s` truncating toward zero, rejecting quotients wider
/// than [`QUOTIENT_BITS`].
pub(crate) fn rescale(v: i128, s: u32) -> Result<i128> {
    let q = v.unsigned_abs() >> s;
    if q >> QUOTIENT_BITS != 0 {
        return Err(Error::FixedPointOverflow(v));
    }
    Ok(if v < 0 { -(q as i128) } else { q as i128 })
}

pub(crate) fn trace(model: &ModelSpec, input: &[i64]) -> Result<Vec<Vec<NeuronTrace>>> {
    model.validate()?;
    if input.len() != model.input_dim() {
        return Err(Error::InvalidModel(format!(
            "input has {} values, model expects {}",
            input.len(),
            model.input_dim()
        )));
    }
    if let Some(&v) = input.iter().find(|v| v.unsigned_abs() >> QUOTIENT_BITS != 0) {
        return Err(Error::FixedPointOverflow(v as i128));
    }
    let s = model.scale_bits;
    let mut x: Vec<i128> = input.iter().map(|&v| v as i128).collect();
    let mut out = Vec::with_capacity(model.layers.len());
    for layer in &model.layers {
        let mut neurons = Vec::with_capacity(layer.out_dim);
        for o in 0..layer.out_dim {
            let row = &layer.weights[o * layer.in_dim..(o + 1) * layer.in_dim];
            let acc = row.iter().zip(&x).map(|(&w, &v)| w as i128 * v).sum::<i128>() + ((layer.bias[o] as i128) << s);
            let linear = rescale(acc, s)?;
            let squared = match layer.activation {
                Activation::Identity => None,
                Activation::Square => Some(rescale(linear * linear, s)?),
            };
            neurons.push(NeuronTrace { acc, linear, squared });
        }
        x = neurons.iter().map(NeuronTrace::output).collect();
        out.push(neurons);
    }
    Ok(out)
}

/// Fixed-point inference: each layer computes `Σ w·x + bias·2^s`, divides
/// by `2^s` truncating toward zero, then squares and rescales again if the
/// activation is [`Activation::Square`].
pub fn native_infer(model: &ModelSpec, input: &[i64]) -> Result<Vec<i64>> {
    let t = trace(model, input)?;
    Ok(t.last()
        .expect("validated")
        .iter()
        .map(|n| n.output() as i64)
        .collect())
}
