use artemis_core::algebra::{Polynomial, PrimeField};
use artemis_core::artemis::{artemis_prove, artemis_verify, horner_index_transform, ExternalCommitmentSet};
use artemis_core::commit::CommitKey;
use artemis_core::piop::{index, Transcript};
use artemis_core::plonkish::check_satisfiability;
use artemis_core::zkml::{
    build_inference_circuit, commit_model, min_k, model_coefficients, native_infer, Activation, LayerSpec, ModelSpec,
};
use artemis_core::{Error, Point, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Straightforward fixed-point inference; `/` on integers truncates
/// toward zero.
fn oracle(model: &ModelSpec, input: &[i64]) -> Vec<i64> {
    let unit = 1i128 << model.scale_bits;
    let mut x: Vec<i128> = input.iter().map(|&v| v as i128).collect();
    for l in &model.layers {
        x = (0..l.out_dim)
            .map(|o| {
                let mut acc = l.bias[o] as i128 * unit;
                for i in 0..l.in_dim {
                    acc += l.weights[o * l.in_dim + i] as i128 * x[i];
                }
                let y = acc / unit;
                match l.activation {
                    Activation::Identity => y,
                    Activation::Square => y * y / unit,
                }
            })
            .collect();
    }
    x.into_iter().map(|v| v as i64).collect()
}

fn layer(in_dim: usize, out_dim: usize, weights: Vec<i64>, bias: Vec<i64>, activation: Activation) -> LayerSpec {
    LayerSpec {
        in_dim,
        out_dim,
        weights,
        bias,
        activation,
    }
}

fn single(weights: Vec<i64>, bias: i64, scale_bits: u32, activation: Activation) -> ModelSpec {
    ModelSpec {
        scale_bits,
        layers: vec![layer(weights.len(), 1, weights, vec![bias], activation)],
    }
}

#[test]
fn hand_computed_examples() {
    assert_eq!(native_infer(&single(vec![1], 0, 0, Activation::Identity), &[17]).unwrap(), [17]);
    assert_eq!(native_infer(&single(vec![3, 5], 0, 0, Activation::Identity), &[2, 4]).unwrap(), [26]);
    // Zero input leaves the bias.
    assert_eq!(native_infer(&single(vec![3, 5], -7, 4, Activation::Identity), &[0, 0]).unwrap(), [-7]);
    // −3/2 truncates to −1; 3/2 to 1; (−1)² = 1, 1/2 → 0.
    assert_eq!(native_infer(&single(vec![1], 0, 1, Activation::Identity), &[-3]).unwrap(), [-1]);
    assert_eq!(native_infer(&single(vec![1], 0, 1, Activation::Identity), &[3]).unwrap(), [1]);
    assert_eq!(native_infer(&single(vec![1], 0, 1, Activation::Square), &[-3]).unwrap(), [0]);
    // Identity matrix at scale 4 passes inputs through.
    let eye = ModelSpec {
        scale_bits: 4,
        layers: vec![layer(3, 3, vec![16, 0, 0, 0, 16, 0, 0, 0, 16], vec![0; 3], Activation::Identity)],
    };
    assert_eq!(native_infer(&eye, &[5, -9, 100]).unwrap(), [5, -9, 100]);
}

#[test]
fn overflow_and_invalid_models_are_rejected() {
    let big = single(vec![1 << 20, 1 << 20], 0, 0, Activation::Square);
    assert!(matches!(native_infer(&big, &[1 << 20, 1 << 20]), Err(Error::FixedPointOverflow(_))));
    assert!(matches!(native_infer(&single(vec![1], 0, 0, Activation::Identity), &[1 << 40]), Err(Error::FixedPointOverflow(_))));
    let mut bad = single(vec![1, 2], 0, 0, Activation::Identity);
    bad.layers[0].weights.pop();
    assert!(matches!(bad.validate(), Err(Error::InvalidModel(_))));
    let chained = ModelSpec {
        scale_bits: 0,
        layers: vec![layer(1, 2, vec![1, 1], vec![0, 0], Activation::Identity), layer(3, 1, vec![1; 3], vec![0], Activation::Identity)],
    };
    assert!(matches!(chained.validate(), Err(Error::InvalidModel(_))));
    assert!(matches!(
        ModelSpec::from_toml("scale_bits = 40\n[[layers]]\nin_dim=1\nout_dim=1\nweights=[1]\nbias=[0]\n"),
        Err(Error::InvalidModel(_))
    ));
}

#[test]
fn toml_round_trip() {
    let text = r#"
scale_bits = 4

[[layers]]
in_dim = 2
out_dim = 1
activation = "square"
weights = [3, -5]
bias = [2]
"#;
    let m = ModelSpec::from_toml(text).unwrap();
    assert_eq!(m.layers[0].activation, Activation::Square);
    assert_eq!(m.layers[0].weights, [3, -5]);
    assert_eq!(ModelSpec::from_toml(&m.to_toml()).unwrap(), m);
}

fn random_case(rng: &mut ChaCha20Rng) -> (ModelSpec, Vec<i64>) {
    loop {
        let depth = rng.gen_range(1..=3);
        let dims: Vec<usize> = (0..=depth).map(|_| rng.gen_range(1..=8)).collect();
        let s = rng.gen_range(0..=6);
        let model = ModelSpec::random(rng, &dims, s);
        let unit = 1i64 << s;
        let input: Vec<i64> = (0..dims[0]).map(|_| rng.gen_range(-2 * unit..=2 * unit)).collect();
        if native_infer(&model, &input).is_ok() {
            return (model, input);
        }
    }
}

#[test]
fn circuit_matches_native_inference() {
    let mut rng = ChaCha20Rng::seed_from_u64(40);
    for _ in 0..100 {
        let (model, input) = random_case(&mut rng);
        let expected = oracle(&model, &input);
        assert_eq!(native_infer(&model, &input).unwrap(), expected);
        let circuit = build_inference_circuit::<Scalar>(&model, min_k(&model, 0)).unwrap();
        let wit = circuit.witness(&model, &input).unwrap();
        assert_eq!(wit.output, expected);
        assert!(check_satisfiability(&circuit.index, &wit.instance, &wit.assignment));
        let public: Vec<Scalar> = input.iter().chain(&expected).map(|&v| Scalar::from_i64(v)).collect();
        assert_eq!(wit.instance, vec![public]);
        // The committed lists read back as the model's coefficients.
        assert_eq!(circuit.icom.values(&wit.assignment.advice), model_coefficients::<Scalar>(&model));
    }
}

#[test]
fn wrong_outputs_and_quotients_are_unsatisfiable() {
    let mut rng = ChaCha20Rng::seed_from_u64(41);
    for _ in 0..20 {
        let (model, input) = random_case(&mut rng);
        let circuit = build_inference_circuit::<Scalar>(&model, min_k(&model, 0)).unwrap();
        let wit = circuit.witness(&model, &input).unwrap();
        let mut inst = wit.instance.clone();
        let last = inst[0].len() - 1;
        inst[0][last] += Scalar::ONE;
        assert!(!check_satisfiability(&circuit.index, &inst, &wit.assignment));
        for cell in circuit.quotient_cells() {
            let mut bad = wit.assignment.clone();
            bad.set(cell, bad.get(cell) + Scalar::ONE);
            assert!(!check_satisfiability(&circuit.index, &wit.instance, &bad));
        }
    }
}

#[test]
fn too_small_domain_is_reported() {
    let model = ModelSpec::random(&mut ChaCha20Rng::seed_from_u64(42), &[8, 8, 8], 2);
    assert!(matches!(
        build_inference_circuit::<Scalar>(&model, 4),
        Err(Error::ModelTooLargeForDomain { .. })
    ));
}

#[test]
fn model_commitments_open_per_layer() {
    let mut rng = ChaCha20Rng::seed_from_u64(43);
    let model = ModelSpec::random(&mut rng, &[4, 3, 2], 3);
    let ck = CommitKey::<Point>::setup(b"zkml-tests", 15).unwrap();
    let set = commit_model(&ck, &model, &mut rng).unwrap();
    assert_eq!(set.len(), model.layers.len());
    let secrets = set.secrets.clone().unwrap();
    let coeffs = model_coefficients::<Scalar>(&model);
    for ((c, blind), w) in set.commitments.iter().zip(&secrets.blinds).zip(&coeffs) {
        let poly = Polynomial::from_vec(w.clone());
        assert!(ck.verify_open(c, &poly, w.len() - 1, *blind));
    }
    let again = ExternalCommitmentSet::commit_with(&ck, &coeffs, secrets.blinds.clone()).unwrap();
    assert_eq!(again, set);
    let tiny = CommitKey::<Point>::setup(b"zkml-tests", 7).unwrap();
    assert!(matches!(commit_model(&tiny, &model, &mut rng), Err(Error::DegreeBoundExceeded { .. })));
}

#[test]
fn committed_inference_proves_and_rejects_forged_weights() {
    let mut rng = ChaCha20Rng::seed_from_u64(44);
    let model = ModelSpec::random(&mut rng, &[4, 4, 2], 2);
    let input = vec![3, -1, 2, 4];
    let circuit = build_inference_circuit::<Scalar>(&model, min_k(&model, 8)).unwrap();
    let (idx, layout) = horner_index_transform(&circuit.index, &circuit.icom).unwrap();
    let k = idx.k();
    let ck = CommitKey::<Point>::setup(b"zkml-tests", (1 << k) - 1).unwrap();
    let ck_ext = CommitKey::<Point>::setup(b"zkml-tests-ext", 31).unwrap();
    let (pk, vk) = index(&ck, &idx).unwrap();
    let ext = commit_model(&ck_ext, &model, &mut rng).unwrap();
    let public = ext.public();

    let mut wit = circuit.witness(&model, &input).unwrap();
    let out = artemis_prove(&ck, &pk, &layout, &ck_ext, &wit.instance, &mut wit.assignment, &ext, &mut Transcript::new(b"z"), &mut rng)
        .unwrap();
    assert!(artemis_verify(&ck, &vk, &layout, &ck_ext, &wit.instance, &public, &out.proof, &mut Transcript::new(b"z")));

    let mut accepted = 0;
    for _ in 0..50 {
        let mut forged = model.clone();
        let l = rng.gen_range(0..forged.layers.len());
        let i = rng.gen_range(0..forged.layers[l].weights.len());
        forged.layers[l].weights[i] += rng.gen_range(1..=3);
        let Ok(mut fw) = circuit.witness(&forged, &input) else { continue };
        let mut set = ext.clone();
        set.secrets.as_mut().unwrap().polys =
            model_coefficients::<Scalar>(&forged).into_iter().map(Polynomial::from_vec).collect();
        let Ok(fo) = artemis_prove(&ck, &pk, &layout, &ck_ext, &fw.instance, &mut fw.assignment, &set, &mut Transcript::new(b"z"), &mut rng)
        else {
            continue;
        };
        if artemis_verify(&ck, &vk, &layout, &ck_ext, &fw.instance, &public, &fo.proof, &mut Transcript::new(b"z")) {
            accepted += 1;
        }
    }
    assert_eq!(accepted, 0);
}

#[test]
fn every_scheme_proves_and_round_trips() {
    use artemis_core::zkml::pipeline::{max_degree, prepare, prove_inference, verify_inference, Scheme, SchemeProof};
    let mut rng = ChaCha20Rng::seed_from_u64(45);
    let model = ModelSpec::random(&mut rng, &[3, 2, 2], 2);
    let input = vec![1, -2, 3];
    let ck = CommitKey::<Point>::setup(b"zkml-tests", max_degree(&model)).unwrap();
    let ext = commit_model(&ck, &model, &mut rng).unwrap();
    let expected: Vec<Scalar> = native_infer(&model, &input).unwrap().into_iter().map(Scalar::from_i64).collect();
    for scheme in Scheme::ALL {
        let prepared = prepare(&ck, &model, scheme).unwrap();
        let proof = prove_inference(&ck, &prepared, &model, &input, Some(&ext), b"p", &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
        assert_eq!(proof.outputs(&model), &expected[..]);
        let again = prove_inference(&ck, &prepared, &model, &input, Some(&ext), b"p", &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
        assert_eq!(proof.to_bytes(), again.to_bytes(), "{scheme}");
        let decoded = SchemeProof::<Point>::from_bytes(&proof.to_bytes()).unwrap();
        assert!(verify_inference(&ck, &prepared, &decoded, Some(&ext.public()), b"p"), "{scheme}");
        assert!(!verify_inference(&ck, &prepared, &decoded, Some(&ext.public()), b"q"), "{scheme}");
        assert_eq!(scheme.name().parse::<Scheme>().unwrap(), scheme);
    }
}

#[test]
fn tiny_models_leave_room_for_linking() {
    use artemis_core::zkml::pipeline::{max_degree, prepare, prove_inference, verify_inference, Scheme};
    let model = single(vec![2], 1, 0, Activation::Identity);
    let ck = CommitKey::<Point>::setup(b"zkml-tests", max_degree(&model)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(46);
    let ext = commit_model(&ck, &model, &mut rng).unwrap();
    for scheme in [Scheme::Artemis, Scheme::Strawman] {
        let prepared = prepare(&ck, &model, scheme).unwrap();
        let proof = prove_inference(&ck, &prepared, &model, &[3], Some(&ext), b"t", &mut rng).unwrap();
        assert_eq!(proof.outputs(&model), &[Scalar::from_u64(7)]);
        assert!(verify_inference(&ck, &prepared, &proof, Some(&ext.public()), b"t"));
    }
}
