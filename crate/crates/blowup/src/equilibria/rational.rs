use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// First continued-fraction convergent `p/q` (with `q ≤ denominator_bound`)
/// lying within `tol` of `lambda`, as a coprime pair with `q > 0`.
pub fn rational_spectral_quotient(lambda: f64, tol: f64, denominator_bound: u64) -> Option<(i64, i64)> {
    if !lambda.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = lambda;
    for _ in 0..64 {
        let a = x.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > denominator_bound as i128 {
            return None;
        }
        if (lambda - h2 as f64 / k2 as f64).abs() < tol {
            return Some((h2 as i64, k2 as i64));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a;
        if frac <= 0.0 {
            return None;
        }
        x = 1.0 / frac;
    }
    None
}

/// One row of a small-divisor scan: the smallest `|λ_ι − α·λ|` at `|α| = order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallDivisor {
    pub order: u32,
    pub minimum: f64,
    pub alpha: (u32, u32),
    pub iota: usize,
}

/// Finite scan of the divisors `λ_ι − α₁λ₁ − α₂λ₂` over `2 ≤ |α| ≤ max_order`.
pub fn small_divisor_scan(eigenvalues: [Complex64; 2], max_order: u32) -> Vec<SmallDivisor> {
    (2..=max_order)
        .map(|n| {
            let mut best = SmallDivisor { order: n, minimum: f64::INFINITY, alpha: (0, 0), iota: 0 };
            for a1 in 0..=n {
                let a2 = n - a1;
                let dot = eigenvalues[0] * a1 as f64 + eigenvalues[1] * a2 as f64;
                for (iota, lam) in eigenvalues.iter().enumerate() {
                    let d = (lam - dot).norm();
                    if d < best.minimum {
                        best = SmallDivisor { order: n, minimum: d, alpha: (a1, a2), iota };
                    }
                }
            }
            best
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half() {
        assert_eq!(rational_spectral_quotient(0.5, 1e-12, 10), Some((1, 2)));
    }

    #[test]
    fn third_perturbed() {
        assert_eq!(rational_spectral_quotient(1.0 / 3.0 + 1e-12, 1e-9, 100), Some((1, 3)));
    }

    #[test]
    fn golden_mean() {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        assert_eq!(rational_spectral_quotient(g, 1e-9, 50), None);
    }

    #[test]
    fn negatives_and_integers() {
        assert_eq!(rational_spectral_quotient(-1.0, 1e-12, 10), Some((-1, 1)));
        assert_eq!(rational_spectral_quotient(-2.0 / 3.0, 1e-12, 10), Some((-2, 3)));
        assert_eq!(rational_spectral_quotient(3.0, 1e-12, 10), Some((3, 1)));
    }

    #[test]
    fn scan_finds_resonance() {
        // λ1 = -1, λ2 = -1/2: λ1 = 2 λ2
        let s = small_divisor_scan([Complex64::new(-1.0, 0.0), Complex64::new(-0.5, 0.0)], 5);
        assert!(s[0].minimum < 1e-15);
        assert_eq!(s[0].alpha, (0, 2));
        assert_eq!(s[0].iota, 0);
    }
}
