//! Analytic loss gradients against central finite differences.

use gaussmap::training::{loss, loss_and_gradients, Gradients};
use gaussmap::{all_pairs, knn_pairs, ModelParams, PairSet, Points};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP: f64 = 1e-5;
const REL_TOL: f64 = 1e-4;
const ABS_TOL: f64 = 1e-7;

struct Instance {
    data: Points,
    model: ModelParams,
    pairs: PairSet,
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize, d1: usize, d2: usize) -> Instance {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d1).map(|_| rng.random_range(-1.5..1.5)).collect())
        .collect();
    let data = Points::from_rows(&rows).unwrap();
    let centers = (0..m)
        .map(|_| (0..d1).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let sigmas = (0..m).map(|_| rng.random_range(0.6..2.0)).collect();
    let matrices = (0..m)
        .map(|_| {
            (0..d2)
                .map(|_| (0..d1).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect()
        })
        .collect();
    let model = ModelParams::new(centers, sigmas, matrices, 1e-8).unwrap();
    let pairs = if rng.random_bool(0.5) {
        all_pairs(&data).unwrap()
    } else {
        knn_pairs(&data, rng.random_range(1..n)).unwrap()
    };
    Instance { data, model, pairs }
}

/// Rebuilds the model with one parameter replaced.
#[derive(Clone, Copy, Debug)]
enum Param {
    Matrix(usize, usize, usize),
    Sigma(usize),
    Center(usize, usize),
}

fn perturbed(model: &ModelParams, param: Param, delta: f64) -> ModelParams {
    let m = model.num_units();
    let mut centers: Vec<Vec<f64>> = (0..m).map(|i| model.center(i).to_vec()).collect();
    let mut sigmas = model.sigmas().to_vec();
    let mut matrices: Vec<Vec<Vec<f64>>> = (0..m).map(|i| model.matrix_rows(i)).collect();
    match param {
        Param::Matrix(i, k, j) => matrices[i][k][j] += delta,
        Param::Sigma(i) => sigmas[i] += delta,
        Param::Center(i, j) => centers[i][j] += delta,
    }
    ModelParams::new(centers, sigmas, matrices, model.epsilon()).unwrap()
}

fn value_of(model: &ModelParams, param: Param) -> f64 {
    match param {
        Param::Matrix(i, k, j) => model.matrix(i)[k * model.input_dim() + j],
        Param::Sigma(i) => model.sigma(i),
        Param::Center(i, j) => model.center(i)[j],
    }
}

fn analytic(grads: &Gradients, model: &ModelParams, param: Param) -> f64 {
    let d1 = model.input_dim();
    let block = model.output_dim() * d1;
    match param {
        Param::Matrix(i, k, j) => grads.matrices[i * block + k * d1 + j],
        Param::Sigma(i) => grads.sigmas[i],
        Param::Center(i, j) => grads.centers.as_ref().unwrap()[i * d1 + j],
    }
}

fn central_difference(inst: &Instance, param: Param) -> f64 {
    let h = STEP * value_of(&inst.model, param).abs().max(1.0);
    let plus = loss(&perturbed(&inst.model, param, h), &inst.data, &inst.pairs).unwrap();
    let minus = loss(&perturbed(&inst.model, param, -h), &inst.data, &inst.pairs).unwrap();
    (plus - minus) / (2.0 * h)
}

fn all_params(model: &ModelParams, with_centers: bool) -> Vec<Param> {
    let (m, d1, d2) = (model.num_units(), model.input_dim(), model.output_dim());
    let mut out = Vec::new();
    for i in 0..m {
        for k in 0..d2 {
            for j in 0..d1 {
                out.push(Param::Matrix(i, k, j));
            }
        }
        out.push(Param::Sigma(i));
        if with_centers {
            for j in 0..d1 {
                out.push(Param::Center(i, j));
            }
        }
    }
    out
}

/// Worst relative error over every parameter, counting entries that agree
/// to `ABS_TOL` as exact.
fn worst_error(inst: &Instance, with_centers: bool) -> f64 {
    let (_, grads) = loss_and_gradients(&inst.model, &inst.data, &inst.pairs, with_centers).unwrap();
    assert_eq!(grads.centers.is_some(), with_centers);
    let mut worst: f64 = 0.0;
    for param in all_params(&inst.model, with_centers) {
        let a = analytic(&grads, &inst.model, param);
        let n = central_difference(inst, param);
        let diff = (a - n).abs();
        if diff <= ABS_TOL {
            continue;
        }
        let rel = diff / a.abs().max(n.abs());
        assert!(
            rel <= REL_TOL,
            "{param:?}: analytic {a:e} vs numeric {n:e} (relative {rel:e})"
        );
        worst = worst.max(rel);
    }
    worst
}

#[test]
fn matches_finite_differences_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..24 {
        let n = rng.random_range(3..=10);
        let d1 = rng.random_range(2..=5);
        let d2 = rng.random_range(1..d1.min(4));
        let m = rng.random_range(1..=4);
        let inst = random_instance(&mut rng, n, m, d1, d2);
        let with_centers = case % 2 == 0;
        worst_error(&inst, with_centers);
    }
}

#[test]
fn reference_instance() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let inst = random_instance(&mut rng, 8, 3, 4, 2);
    worst_error(&inst, true);
    worst_error(&inst, false);
}

#[test]
fn zero_loss_model_has_zero_gradient() {
    // Points on the plane z = 0 with every unit mapping (x, y, z) -> (x, y).
    let data = Points::from_rows(&[[0.0, 0.0, 0.0], [1.0, 0.5, 0.0], [-0.5, 2.0, 0.0], [0.3, -1.0, 0.0]])
        .unwrap();
    let ident = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
    let model = ModelParams::new(
        vec![vec![0.0; 3], vec![1.0, 0.5, 0.0]],
        vec![1.0, 0.7],
        vec![ident.clone(), ident],
        0.0,
    )
    .unwrap();
    let pairs = all_pairs(&data).unwrap();
    let (l, g) = loss_and_gradients(&model, &data, &pairs, true).unwrap();
    assert!(l < 1e-28);
    assert!(g.max_abs() < 1e-12, "max gradient {}", g.max_abs());
}
