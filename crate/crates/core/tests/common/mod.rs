#![allow(dead_code)]

use infoaging::ArModel;
use rand::Rng;

/// Expands `Π (z - r_i)` for the given real roots and conjugate pairs
/// `(ρ, θ)` into AR coefficients `a_k` of `z^p - a_1 z^{p-1} - ... - a_p`.
pub fn coeffs_from_roots(real: &[f64], pairs: &[(f64, f64)]) -> Vec<f64> {
    // monic polynomial, highest power first
    let mut poly = vec![1.0];
    let mul = |poly: &[f64], factor: &[f64]| {
        let mut out = vec![0.0; poly.len() + factor.len() - 1];
        for (i, p) in poly.iter().enumerate() {
            for (j, f) in factor.iter().enumerate() {
                out[i + j] += p * f;
            }
        }
        out
    };
    for &r in real {
        poly = mul(&poly, &[1.0, -r]);
    }
    for &(rho, theta) in pairs {
        poly = mul(&poly, &[1.0, -2.0 * rho * theta.cos(), rho * rho]);
    }
    poly[1..].iter().map(|c| -c).collect()
}

/// Random stationary AR(p): roots drawn with modulus at most `max_root`.
pub fn random_stationary_ar(rng: &mut impl Rng, p: usize, max_root: f64) -> ArModel {
    let n_pairs = rng.random_range(0..=p / 2);
    let n_real = p - 2 * n_pairs;
    let real: Vec<f64> = (0..n_real).map(|_| rng.random_range(-max_root..max_root)).collect();
    let pairs: Vec<(f64, f64)> = (0..n_pairs)
        .map(|_| (rng.random_range(0.05..max_root), rng.random_range(0.1..3.0)))
        .collect();
    let coeffs = coeffs_from_roots(&real, &pairs);
    let sigma2_w = rng.random_range(0.01..2.0);
    let sigma2_n = rng.random_range(0.0..0.5);
    ArModel::new(coeffs, sigma2_w, sigma2_n).unwrap()
}

pub fn max_abs_diff(a: impl IntoIterator<Item = f64>, b: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
