//! Quadrature rules shared by the transforms.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for i in 0..n.div_ceil(2) {
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
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    if n == 1 {
        nodes[0] = mid;
        weights[0] = b - a;
    }
    (nodes, weights)
}

/// Panel edges on [a, b] graded geometrically towards each end. `scale_a`
/// and `scale_b` are the widths of the first panel at each end; panels
/// double in width until they reach the midpoint.
pub fn graded_edges(a: f64, b: f64, scale_a: f64, scale_b: f64) -> Vec<f64> {
    let half = 0.5 * (b - a);
    let offsets = |scale: f64| {
        let mut out = vec![0.0];
        let mut h = scale.max(1e-300).min(half);
        while out.last().unwrap() + h < half {
            out.push(out.last().unwrap() + h);
            h *= 2.0;
        }
        out.push(half);
        out
    };
    let mut edges: Vec<f64> = offsets(scale_a).iter().map(|o| a + o).collect();
    edges.pop();
    let mut right: Vec<f64> = offsets(scale_b).iter().map(|o| b - o).collect();
    right.reverse();
    edges.extend(right);
    edges
}

/// Composite Gauss–Legendre rule on [a, b] with panels from [`graded_edges`]
/// and `per_panel` nodes in each.
pub fn graded_gauss_legendre(
    a: f64,
    b: f64,
    scale_a: f64,
    scale_b: f64,
    per_panel: usize,
) -> (Vec<f64>, Vec<f64>) {
    composite_gauss_legendre(&graded_edges(a, b, scale_a, scale_b), |_| per_panel)
}

/// Composite Gauss–Legendre rule over consecutive panels; `count` gives the
/// number of nodes for a panel from its width.
pub fn composite_gauss_legendre(edges: &[f64], count: impl Fn(f64) -> usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in edges.windows(2) {
        let (x, wt) = gauss_legendre(count(w[1] - w[0]), w[0], w[1]);
        nodes.extend(x);
        weights.extend(wt);
    }
    (nodes, weights)
}

/// Trapezoid weights for `n` equispaced points on [a, b].
pub fn trapezoid_weights(n: usize, a: f64, b: f64) -> Vec<f64> {
    assert!(n >= 2, "trapezoid rule needs two points");
    let h = (b - a) / (n - 1) as f64;
    let mut w = vec![h; n];
    w[0] *= 0.5;
    w[n - 1] *= 0.5;
    w
}

/// Equispaced points on [a, b] including both ends.
pub fn linspace(n: usize, a: f64, b: f64) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + i as f64 * h).collect()
}

/// Legendre polynomials P_0..=P_lmax at x.
pub fn legendre_polys(lmax: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; lmax + 1];
    p[0] = 1.0;
    if lmax >= 1 {
        p[1] = x;
    }
    for l in 2..=lmax {
        let lf = l as f64;
        p[l] = ((2.0 * lf - 1.0) * x * p[l - 1] - (lf - 1.0) * p[l - 2]) / lf;
    }
    p
}
