//! Discrete Fourier transform on `alloc` buffers.
//!
//! Convention: `forward` computes `X_k = sum_j x_j exp(-2 pi i j k / n)` and
//! `inverse` computes `x_j = (1/n) sum_k X_k exp(+2 pi i j k / n)`. Lengths
//! that are powers of two use an iterative radix-2 transform; other lengths
//! fall back to the direct O(n^2) sum.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math;

pub(crate) fn forward(data: &mut [Complex64]) {
    transform(data, -1.0);
}

pub(crate) fn inverse(data: &mut [Complex64]) {
    transform(data, 1.0);
    let scale = 1.0 / data.len() as f64;
    for z in data.iter_mut() {
        *z *= scale;
    }
}

fn transform(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, sign);
    } else {
        direct(data, sign);
    }
}

fn radix2(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        // twiddles recomputed per stage from cos/sin to avoid drift
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| math::polar(1.0, sign * 2.0 * PI * k as f64 / len as f64))
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = data[start + k];
                let v = data[start + k + half] * twiddles[k];
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}

fn direct(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    let out: Vec<Complex64> = (0..n)
        .map(|k| {
            data.iter()
                .enumerate()
                .map(|(j, x)| {
                    let angle = sign * 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    x * math::polar(1.0, angle)
                })
                .sum()
        })
        .collect();
    data.copy_from_slice(&out);
}

/// Signed frequency index of bin `k` in a length-`n` transform.
pub(crate) fn signed_index(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn naive(x: &[Complex64]) -> Vec<Complex64> {
        let mut y = x.to_vec();
        direct(&mut y, -1.0);
        y
    }

    #[test]
    fn radix2_matches_direct_sum() {
        let x: Vec<Complex64> = (0..64)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 1.1).cos()))
            .collect();
        let mut y = x.clone();
        forward(&mut y);
        for (a, b) in y.iter().zip(naive(&x)) {
            assert!((a - b).norm() < 1e-11);
        }
        inverse(&mut y);
        for (a, b) in y.iter().zip(&x) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn non_power_of_two_round_trip() {
        let x: Vec<Complex64> = (0..12).map(|j| Complex64::new(j as f64, -(j as f64) / 3.0)).collect();
        let mut y = x.clone();
        forward(&mut y);
        inverse(&mut y);
        for (a, b) in y.iter().zip(&x) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn delta_transforms_to_constant() {
        let mut x = vec![Complex64::new(0.0, 0.0); 8];
        x[0] = Complex64::new(1.0, 0.0);
        forward(&mut x);
        assert!(x.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }
}
