//! Floating-point root approximation, used only for numeric sanity bounds
//! (never for any exact decision).

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::IntPolynomial;

const MAX_ITERATIONS: usize = 500;

/// Approximates all complex roots (with multiplicity) by the Aberth–Ehrlich
/// iteration followed by Newton polishing.
pub fn approximate_roots(f: &IntPolynomial) -> Vec<Complex64> {
    let Some(n) = f.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let lead = f.leading().and_then(|l| l.to_f64()).expect("finite leading coefficient");
    let coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().expect("finite coefficient") / lead)
        .collect();

    // Cauchy bound on the root moduli.
    let radius = 1.0 + coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, angle)
        })
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for root in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&coeffs, *root);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *root -= step;
        }
    }
    z
}

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}
