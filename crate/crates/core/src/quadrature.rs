//! Adaptive Gauss–Kronrod (7/15) quadrature and the WKB action integral.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub const MAX_SUBDIVISIONS: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

impl std::ops::Add for QuadResult {
    type Output = QuadResult;

    fn add(self, rhs: Self) -> Self {
        QuadResult {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
            evaluations: self.evaluations + rhs.evaluations,
        }
    }
}

impl Default for QuadResult {
    fn default() -> Self {
        QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        }
    }
}

/// One G7/K15 panel on `[a, b]`; error is the QUADPACK-style estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).abs();
    if error > 0.0 {
        let scale = (200.0 * error / value.abs().max(f64::MIN_POSITIVE)).powf(1.5).min(1.0);
        error = error.max(value.abs() * scale);
    }
    let floor = 50.0 * f64::EPSILON * value.abs();
    (value, error.max(floor))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Bisects the worst panel until the summed error estimate drops below
/// `abs_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult::default());
    }
    let (value, error) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total_error = error;
    let mut evaluations = 15;
    let mut subdivisions = 0;
    while total_error > abs_tol {
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                iterations: subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(f, worst.a, mid);
        let (rv, re) = gk15(f, mid, worst.b);
        evaluations += 30;
        subdivisions += 1;
        total_error += le + re - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
    }
    // re-sum to shed the drift of the running error total
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

/// `∫ f` over `[left, right]` where `f` behaves like `√(x − left)` and
/// `√(right − x)` at the ends.
///
/// The end segments (10% of the width each, shortened to the nearest
/// breakpoint) are mapped through `x = turn ± u²`, which turns the square
/// root into a smooth integrand. The interior is split at `breakpoints` and
/// integrated adaptively. `abs_tol` is shared in proportion to length.
pub fn endpoint_singular_integral<F: Fn(f64) -> f64>(
    f: &F,
    left: f64,
    right: f64,
    breakpoints: &[f64],
    abs_tol: f64,
) -> Result<QuadResult> {
    let width = right - left;
    if !(width > 0.0) {
        return Ok(QuadResult::default());
    }
    let inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > left && x < right)
        .collect();
    let mut left_len = 0.1 * width;
    let mut right_len = 0.1 * width;
    if let (Some(&first), Some(&last)) = (inner.first(), inner.last()) {
        left_len = left_len.min(first - left);
        right_len = right_len.min(right - last);
    }
    let tol_per_length = abs_tol / width;

    let near_left = |u: f64| 2.0 * u * f(left + u * u);
    let near_right = |u: f64| 2.0 * u * f(right - u * u);
    let mut total = integrate_adaptive(&near_left, 0.0, left_len.sqrt(), tol_per_length * left_len)?;
    total = total + integrate_adaptive(&near_right, 0.0, right_len.sqrt(), tol_per_length * right_len)?;

    let mut edges = vec![left + left_len];
    edges.extend(inner.iter().copied().filter(|&x| x > left + left_len && x < right - right_len));
    edges.push(right - right_len);
    for w in edges.windows(2) {
        if w[1] > w[0] {
            total = total + integrate_adaptive(f, w[0], w[1], tol_per_length * (w[1] - w[0]))?;
        }
    }
    Ok(total)
}
