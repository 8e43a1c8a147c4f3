//! Gauss-Legendre nodes and composite panel rules.

use std::f64::consts::PI;

use super::QuadValue;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite rule on [a, b] with panels of the given width and `points` nodes
/// per panel.
pub fn integrate_panels<V, F>(f: F, a: f64, b: f64, width: f64, points: usize) -> V
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let (xs, ws) = gauss_legendre(points);
    let panels = ((b - a) / width).abs().ceil().max(1.0) as usize;
    let step = (b - a) / panels as f64;
    let mut acc = V::default();
    for p in 0..panels {
        let lo = a + p as f64 * step;
        let mid = lo + 0.5 * step;
        for (x, w) in xs.iter().zip(&ws) {
            acc += f(mid + 0.5 * step * x) * (w * 0.5 * step);
        }
    }
    acc
}

/// Gauss-Kronrod 7-15 abscissae on [0, 1] (the rule is symmetric).
const GK15_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK15_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
/// Gauss weights for the odd-indexed abscissae (and the centre).
const GK15_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 nodes of the Gauss-Kronrod rule on [a, b] with Kronrod and
/// embedded Gauss weights (zero off the Gauss nodes).
pub fn gauss_kronrod15(a: f64, b: f64) -> [(f64, f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { GK15_WG[i / 2] * h } else { 0.0 };
        out[i] = (c - h * GK15_X[i], GK15_WK[i] * h, wg);
        out[14 - i] = (c + h * GK15_X[i], GK15_WK[i] * h, wg);
    }
    out[7] = (c, GK15_WK[7] * h, GK15_WG[3] * h);
    out
}
