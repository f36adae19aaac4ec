use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::plonkish::{Assignment, Cell, CircuitBuilder, CircuitIndex, Column, CommitIndexSet, Expression};

use super::model::{trace, Activation, ModelSpec, QUOTIENT_BITS};

/// Products accumulated per dot-product row.
pub const LANES: usize = 4;
const LIMB_BITS: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Columns {
    x: [Column; LANES],
    w: [Column; LANES],
    bias: Column,
    sum: Column,
    a: Column,
    sigma: Column,
    abs: Column,
    qa: Column,
    r: Column,
    q: Column,
    limbs: [Column; 2],
    r_bits: Vec<Column>,
    q_bits: Vec<Column>,
    instance: Column,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Neuron {
    start: usize,
    dot_rows: usize,
    /// Rows holding a rescale: the linear one, then the squared one.
    rescale_rows: Vec<usize>,
}

/// The inference circuit for one model shape. Weight values are witness
/// data, so the index only depends on dimensions, activations and scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferenceCircuit<F> {
    pub index: CircuitIndex<F>,
    /// One list per layer: weights row-major, then biases.
    pub icom: CommitIndexSet,
    pub scale_bits: u32,
    cols: Columns,
    neurons: Vec<Vec<Neuron>>,
    input_dim: usize,
}

/// Active rows the inference circuit occupies for `model`.
pub fn required_rows(model: &ModelSpec) -> usize {
    model
        .layers
        .iter()
        .map(|l| l.out_dim * (l.in_dim.div_ceil(LANES) + 1 + usize::from(l.activation == Activation::Square)))
        .sum::<usize>()
        .max(model.input_dim() + model.output_dim())
}

/// Smallest domain exponent fitting `model` plus `extra_rows`.
pub fn min_k(model: &ModelSpec, extra_rows: usize) -> u32 {
    let mut k = 3;
    while (1usize << k) < required_rows(model) + extra_rows + crate::plonkish::BLINDING_RESERVE {
        k += 1;
    }
    k
}

fn pow2<F: PrimeField>(bits: u32) -> F {
    F::from_u64(2).pow_u64(bits as u64)
}

fn weighted_bits<F: PrimeField>(bits: &[Column]) -> Expression<F> {
    let mut acc = Expression::constant(F::ZERO);
    for (k, b) in bits.iter().enumerate() {
        acc = acc + b.cur() * pow2::<F>(k as u32);
    }
    acc
}

/// Lays the model out row by row on a `2^k` domain.
///
/// Each neuron uses `⌈in/4⌉` dot rows accumulating `Σ w·x` onto
/// `bias·2^s`, a rescale row and, for square activations, a second rescale
/// row on the squared output. Rescaling divides by `2^s` toward zero with a
/// hinted sign, remainder and quotient, range-checked by bit decomposition
/// (remainder: `s` bits; quotient: two 16-bit limbs).
pub fn build_inference_circuit<F: PrimeField>(model: &ModelSpec, k: u32) -> Result<InferenceCircuit<F>> {
    model.validate()?;
    let mut b = CircuitBuilder::<F>::new(k)?;
    let needed = required_rows(model);
    if needed > b.usable_rows() {
        return Err(Error::ModelTooLargeForDomain {
            needed,
            available: b.usable_rows(),
        });
    }
    let s = model.scale_bits;
    let cols = Columns {
        x: std::array::from_fn(|_| b.advice_column(0)),
        w: std::array::from_fn(|_| b.advice_column(0)),
        bias: b.advice_column(0),
        sum: b.advice_column(0),
        a: b.advice_column(0),
        sigma: b.advice_column(0),
        abs: b.advice_column(0),
        qa: b.advice_column(0),
        r: b.advice_column(0),
        q: b.advice_column(0),
        limbs: std::array::from_fn(|_| b.advice_column(0)),
        r_bits: (0..s).map(|_| b.advice_column(0)).collect(),
        q_bits: (0..QUOTIENT_BITS).map(|_| b.advice_column(0)).collect(),
        instance: b.instance_column(),
    };
    let q_dot = b.fixed_column();
    let mask: [Column; LANES] = std::array::from_fn(|_| b.fixed_column());
    let q_start = b.fixed_column();
    let q_lin = b.fixed_column();
    let q_sq = b.fixed_column();
    let q_rs = b.fixed_column();

    let c = &cols;
    let mut products = q_dot.cur() * (c.sum.next() - c.sum.cur());
    for l in 0..LANES {
        products = products - mask[l].cur() * c.x[l].cur() * c.w[l].cur();
    }
    b.gate("dot", products);
    b.gate("bias", q_start.cur() * (c.sum.cur() - c.bias.cur() * pow2::<F>(s)));
    b.gate("linear-input", q_lin.cur() * (c.a.cur() - c.sum.cur()));
    b.gate("square-input", q_sq.cur() * (c.a.cur() - c.q.prev() * c.q.prev()));

    let one = || Expression::constant(F::ONE);
    let signed = |e: Expression<F>| e * (one() - c.sigma.cur() * F::from_u64(2));
    let rs = |e: Expression<F>| q_rs.cur() * e;
    b.gate("sign-bit", rs(c.sigma.cur() * (one() - c.sigma.cur())));
    b.gate("absolute", rs(c.abs.cur() - signed(c.a.cur())));
    b.gate("divide", rs(c.abs.cur() - c.qa.cur() * pow2::<F>(s) - c.r.cur()));
    b.gate("remainder-bits", rs(c.r.cur() - weighted_bits(&c.r_bits)));
    b.gate("quotient-limbs", rs(c.qa.cur() - c.limbs[0].cur() - c.limbs[1].cur() * pow2::<F>(LIMB_BITS)));
    for (i, limb) in c.limbs.iter().enumerate() {
        let bits = &c.q_bits[i * LIMB_BITS as usize..(i + 1) * LIMB_BITS as usize];
        b.gate(format!("limb-{i}-bits"), rs(limb.cur() - weighted_bits(bits)));
    }
    for bit in c.r_bits.iter().chain(&c.q_bits) {
        b.gate("boolean", rs(bit.cur() * (one() - bit.cur())));
    }
    b.gate("quotient-sign", rs(c.q.cur() - signed(c.qa.cur())));

    let mut row = 0;
    let mut neurons = Vec::with_capacity(model.layers.len());
    let mut lists = Vec::with_capacity(model.layers.len());
    let mut prev_outputs: Vec<Cell> = (0..model.input_dim()).map(|i| c.instance.at(i)).collect();
    for layer in &model.layers {
        let mut layer_neurons = Vec::with_capacity(layer.out_dim);
        let mut weights = Vec::with_capacity(layer.weights.len());
        let mut biases = Vec::with_capacity(layer.out_dim);
        let dot_rows = layer.in_dim.div_ceil(LANES);
        for _ in 0..layer.out_dim {
            let start = row;
            b.set_fixed(q_start, start, F::ONE);
            biases.push(c.bias.at(start));
            for (i, src) in prev_outputs.iter().enumerate() {
                let (r, l) = (start + i / LANES, i % LANES);
                b.set_fixed(mask[l], r, F::ONE);
                b.copy(*src, c.x[l].at(r));
                weights.push(c.w[l].at(r));
            }
            for r in start..start + dot_rows {
                b.set_fixed(q_dot, r, F::ONE);
            }
            let mut rescale_rows = vec![start + dot_rows];
            b.set_fixed(q_lin, start + dot_rows, F::ONE);
            if layer.activation == Activation::Square {
                rescale_rows.push(start + dot_rows + 1);
                b.set_fixed(q_sq, start + dot_rows + 1, F::ONE);
            }
            for &r in &rescale_rows {
                b.set_fixed(q_rs, r, F::ONE);
            }
            row = rescale_rows.last().expect("one rescale") + 1;
            layer_neurons.push(Neuron {
                start,
                dot_rows,
                rescale_rows,
            });
        }
        prev_outputs = layer_neurons
            .iter()
            .map(|n| c.q.at(*n.rescale_rows.last().expect("one rescale")))
            .collect();
        weights.extend(biases);
        lists.push(weights);
        neurons.push(layer_neurons);
    }
    for (o, cell) in prev_outputs.iter().enumerate() {
        b.copy(*cell, c.instance.at(model.input_dim() + o));
    }

    Ok(InferenceCircuit {
        index: b.build()?,
        icom: CommitIndexSet::new(lists),
        scale_bits: s,
        cols,
        neurons,
        input_dim: model.input_dim(),
    })
}

/// A filled grid with its public instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferenceWitness<F> {
    pub assignment: Assignment<F>,
    /// One column: the input followed by the output.
    pub instance: Vec<Vec<F>>,
    pub output: Vec<i64>,
}

impl<F: PrimeField> InferenceCircuit<F> {
    /// Runs the model on `input` and fills every advice cell.
    pub fn witness(&self, model: &ModelSpec, input: &[i64]) -> Result<InferenceWitness<F>> {
        if model.layers.len() != self.neurons.len()
            || model.scale_bits != self.scale_bits
            || model.layers.iter().zip(&self.neurons).any(|(l, n)| l.out_dim != n.len())
        {
            return Err(Error::LayoutMismatch("model does not match the circuit's shape".into()));
        }
        let t = trace(model, input)?;
        let s = self.scale_bits;
        let c = &self.cols;
        let mut asg = Assignment::new(&self.index);
        let mut x: Vec<i128> = input.iter().map(|&v| v as i128).collect();
        for ((layer, plan), values) in model.layers.iter().zip(&self.neurons).zip(&t) {
            for (o, (n, v)) in plan.iter().zip(values).enumerate() {
                asg.set(c.bias.at(n.start), F::from_i64(layer.bias[o]));
                let mut sum = (layer.bias[o] as i128) << s;
                for d in 0..n.dot_rows {
                    asg.set(c.sum.at(n.start + d), F::from_i128(sum));
                    for l in 0..LANES {
                        let i = d * LANES + l;
                        if i < layer.in_dim {
                            let w = layer.weights[o * layer.in_dim + i];
                            asg.set(c.x[l].at(n.start + d), F::from_i128(x[i]));
                            asg.set(c.w[l].at(n.start + d), F::from_i64(w));
                            sum += w as i128 * x[i];
                        }
                    }
                }
                asg.set(c.sum.at(n.start + n.dot_rows), F::from_i128(sum));
                debug_assert_eq!(sum, v.acc);
                let mut input = sum;
                for &r in &n.rescale_rows {
                    input = self.fill_rescale(&mut asg, r, input);
                    input *= input;
                }
            }
            x = values.iter().map(|v| v.output()).collect();
        }
        let output: Vec<i64> = x.iter().map(|&v| v as i64).collect();
        let mut public: Vec<F> = input.iter().map(|&v| F::from_i64(v)).collect();
        public.extend(output.iter().map(|&v| F::from_i64(v)));
        debug_assert_eq!(public.len(), self.input_dim + output.len());
        Ok(InferenceWitness {
            assignment: asg,
            instance: vec![public],
            output,
        })
    }

    /// Writes one rescale row for input `a` and returns the quotient.
    fn fill_rescale(&self, asg: &mut Assignment<F>, row: usize, a: i128) -> i128 {
        let c = &self.cols;
        let s = self.scale_bits;
        let abs = a.unsigned_abs();
        let qa = abs >> s;
        let r = abs & ((1u128 << s) - 1);
        let q = if a < 0 { -(qa as i128) } else { qa as i128 };
        let set = |asg: &mut Assignment<F>, col: Column, v: u128| asg.set(col.at(row), F::from_i128(v as i128));
        asg.set(c.a.at(row), F::from_i128(a));
        set(asg, c.sigma, u128::from(a < 0));
        set(asg, c.abs, abs);
        set(asg, c.qa, qa);
        set(asg, c.r, r);
        asg.set(c.q.at(row), F::from_i128(q));
        set(asg, c.limbs[0], qa & 0xffff);
        set(asg, c.limbs[1], qa >> LIMB_BITS);
        for (k, bit) in c.r_bits.iter().enumerate() {
            set(asg, *bit, (r >> k) & 1);
        }
        for (k, bit) in c.q_bits.iter().enumerate() {
            set(asg, *bit, (qa >> k) & 1);
        }
        q
    }

    /// The output cells, for callers inspecting the grid.
    pub fn output_cells(&self) -> Vec<Cell> {
        self.neurons
            .last()
            .expect("at least one layer")
            .iter()
            .map(|n| self.cols.q.at(*n.rescale_rows.last().expect("one rescale")))
            .collect()
    }

    /// Cells of the rescale quotient for every neuron, layer by layer.
    pub fn quotient_cells(&self) -> Vec<Cell> {
        self.neurons
            .iter()
            .flatten()
            .flat_map(|n| n.rescale_rows.iter().map(|&r| self.cols.qa.at(r)))
            .collect()
    }
}
