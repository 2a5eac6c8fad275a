//! L2-regularized logistic regression fitted by damped Newton steps.

use nalgebra::{DMatrix, DVector};

use super::ModelError;

pub const GRADIENT_TOLERANCE: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 10_000;

/// Relative size of objective changes treated as rounding noise.
const OBJECTIVE_NOISE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn margin(row: &[f64], w: &[f64], b: f64) -> f64 {
    row.iter().zip(w).map(|(x, w)| x * w).sum::<f64>() + b
}

/// Mean logistic loss plus `lambda * |w|^2 / 2`; the intercept is not penalized.
pub fn objective(x: &[Vec<f64>], y: &[u8], w: &[f64], b: f64, lambda: f64) -> f64 {
    let n = x.len() as f64;
    let loss: f64 = x
        .iter()
        .zip(y)
        .map(|(row, &yi)| {
            let z = margin(row, w, b);
            softplus(z) - f64::from(yi) * z
        })
        .sum();
    loss / n + 0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>()
}

/// Gradient of [`objective`] with respect to `(w, b)`.
pub fn gradient(x: &[Vec<f64>], y: &[u8], w: &[f64], b: f64, lambda: f64) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut gw = vec![0.0; w.len()];
    let mut gb = 0.0;
    for (row, &yi) in x.iter().zip(y) {
        let r = sigmoid(margin(row, w, b)) - f64::from(yi);
        for (g, v) in gw.iter_mut().zip(row) {
            *g += r * v;
        }
        gb += r;
    }
    for (g, wj) in gw.iter_mut().zip(w) {
        *g = *g / n + lambda * wj;
    }
    (gw, gb / n)
}

fn hessian(x: &[Vec<f64>], w: &[f64], b: f64, lambda: f64) -> DMatrix<f64> {
    let d = w.len();
    let n = x.len() as f64;
    let mut h = DMatrix::<f64>::zeros(d + 1, d + 1);
    for row in x {
        let p = sigmoid(margin(row, w, b));
        let s = p * (1.0 - p);
        for i in 0..d {
            let si = s * row[i];
            for j in 0..=i {
                h[(i, j)] += si * row[j];
            }
            h[(d, i)] += si;
        }
        h[(d, d)] += s;
    }
    for i in 0..=d {
        for j in 0..=i {
            let v = h[(i, j)] / n;
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    for i in 0..d {
        h[(i, i)] += lambda;
    }
    h
}

fn newton_direction(h: DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
    let mut jitter = 0.0;
    loop {
        let mut m = h.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += jitter;
        }
        if let Some(chol) = m.cholesky() {
            return -chol.solve(g);
        }
        // saturated or collinear data: fall back toward gradient descent
        jitter = if jitter == 0.0 { 1e-10 } else { jitter * 10.0 };
        if jitter > 1e6 {
            return -g.clone();
        }
    }
}

/// Minimize [`objective`] to gradient norm [`GRADIENT_TOLERANCE`] or [`MAX_ITERATIONS`].
pub fn train_logreg(x: &[Vec<f64>], y: &[u8], lambda: f64) -> Result<LogisticFit, ModelError> {
    if x.is_empty() {
        return Err(ModelError::EmptyData);
    }
    if x.len() != y.len() {
        return Err(ModelError::InvalidArgument(format!("{} rows but {} labels", x.len(), y.len())));
    }
    let positives = y.iter().filter(|&&v| v == 1).count();
    if positives == 0 || positives == y.len() {
        return Err(ModelError::SingleClass);
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(ModelError::InvalidArgument(format!("lambda must be a finite non-negative number, got {lambda}")));
    }
    let d = x[0].len();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut f = objective(x, y, &w, b, lambda);
    let mut iterations = 0;
    let mut gnorm;
    loop {
        let (gw, gb) = gradient(x, y, &w, b, lambda);
        gnorm = (gw.iter().map(|v| v * v).sum::<f64>() + gb * gb).sqrt();
        if gnorm <= GRADIENT_TOLERANCE || iterations >= MAX_ITERATIONS {
            break;
        }
        let g = DVector::from_iterator(d + 1, gw.iter().copied().chain(std::iter::once(gb)));
        let step = newton_direction(hessian(x, &w, b, lambda), &g);
        let slope = g.dot(&step);
        // Armijo backtracking
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let w_new: Vec<f64> = w.iter().zip(step.iter()).map(|(wj, s)| wj + t * s).collect();
            let b_new = b + t * step[d];
            let f_new = objective(x, y, &w_new, b_new, lambda);
            if f_new <= f + 1e-4 * t * slope {
                accepted = Some((w_new, b_new, f_new));
                break;
            }
            // Close to the optimum the predicted decrease falls below the
            // rounding noise of the summed loss; judge the full step by the
            // gradient instead.
            if t == 1.0 && (f_new - f).abs() <= OBJECTIVE_NOISE * f.abs().max(1.0) {
                let (gw_new, gb_new) = gradient(x, y, &w_new, b_new, lambda);
                let norm_new = (gw_new.iter().map(|v| v * v).sum::<f64>() + gb_new * gb_new).sqrt();
                if norm_new < gnorm {
                    accepted = Some((w_new, b_new, f_new));
                    break;
                }
            }
            t *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some((w_new, b_new, f_new)) => {
                w = w_new;
                b = b_new;
                f = f_new;
            }
            // no representable decrease left
            None => break,
        }
    }
    Ok(LogisticFit {
        weights: w,
        intercept: b,
        iterations,
        gradient_norm: gnorm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separable_pair() {
        let x = vec![vec![-1.0], vec![1.0]];
        let fit = train_logreg(&x, &[0, 1], 1.0).unwrap();
        assert!(fit.weights[0] > 0.0);
        assert!(fit.intercept.abs() < 1e-9);
        assert!(fit.gradient_norm <= GRADIENT_TOLERANCE);
        assert!(sigmoid(margin(&x[1], &fit.weights, fit.intercept)) > 0.5);
        assert!(sigmoid(margin(&x[0], &fit.weights, fit.intercept)) < 0.5);
    }

    #[test]
    fn sigmoid_is_stable() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(-800.0) >= 0.0);
        assert_eq!(sigmoid(800.0), 1.0);
        assert!((softplus(800.0) - 800.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x: Vec<Vec<f64>> = (0..20).map(|_| (0..61).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let y: Vec<u8> = (0..20).map(|i| (i % 2) as u8).collect();
        let w: Vec<f64> = (0..61).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let b = 0.3;
        let lambda = 0.7;
        let (gw, gb) = gradient(&x, &y, &w, b, lambda);
        let h = 1e-5;
        for j in 0..61 {
            let mut up = w.clone();
            let mut down = w.clone();
            up[j] += h;
            down[j] -= h;
            let fd = (objective(&x, &y, &up, b, lambda) - objective(&x, &y, &down, b, lambda)) / (2.0 * h);
            assert!((fd - gw[j]).abs() < 1e-5, "coordinate {j}");
        }
        let fd = (objective(&x, &y, &w, b + h, lambda) - objective(&x, &y, &w, b - h, lambda)) / (2.0 * h);
        assert!((fd - gb).abs() < 1e-5);
    }

    #[test]
    fn reaches_tolerance_on_noisy_labels() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..40 {
            let x: Vec<Vec<f64>> = (0..230).map(|_| vec![rng.gen_range(-1.7..1.7)]).collect();
            let y: Vec<u8> = (0..230).map(|_| rng.gen_range(0..2)).collect();
            let fit = train_logreg(&x, &y, 1.0).unwrap();
            assert!(fit.gradient_norm <= GRADIENT_TOLERANCE, "{fit:?}");
            assert!(fit.iterations < 50);
        }
    }

    #[test]
    fn single_class_rejected() {
        assert!(matches!(train_logreg(&[vec![1.0], vec![2.0]], &[1, 1], 1.0), Err(ModelError::SingleClass)));
    }
}
