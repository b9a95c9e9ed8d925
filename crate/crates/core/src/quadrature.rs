//! Composite Gauss–Legendre rules and deterministic summation.

use rayon::prelude::*;
use serde::Serialize;

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on the three-term recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for k in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for m in 2..=order {
                let m = m as f64;
                let p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            deriv = n * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / deriv;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        nodes[k] = -x;
        nodes[order - 1 - k] = x;
        weights[k] = w;
        weights[order - 1 - k] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

/// One axis of a tensor grid: nodes with positive weights.
#[derive(Clone, Debug, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Axis {
    /// `panels` equal panels on `[lo, hi]`, each with an `order`-point rule.
    pub fn panels(lo: f64, hi: f64, panels: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let h = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * h * xi);
                weights.push(0.5 * h * wi);
            }
        }
        Self { lo, hi, nodes, weights }
    }

    /// Panels whose widths shrink geometrically towards `lo` (ratio `q`).
    pub fn graded(lo: f64, hi: f64, levels: usize, q: f64, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let mut edges = vec![hi];
        let mut width = hi - lo;
        for _ in 0..levels {
            width *= q;
            edges.push(lo + width);
        }
        edges.push(lo);
        edges.reverse();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(0.5 * (a + b) + 0.5 * (b - a) * xi);
                weights.push(0.5 * (b - a) * wi);
            }
        }
        Self { lo, hi, nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).collect();
        pairwise_sum(&terms)
    }
}

/// Pairwise (cascade) summation in a fixed order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `∫∫∫ f` over a tensor grid. The outer axis is evaluated in parallel; every
/// partial sum is formed in a fixed order, so the result does not depend on
/// the thread count.
pub fn integrate_3d<F>(axes: [&Axis; 3], f: F) -> f64
where
    F: Fn(f64, f64, f64) -> f64 + Sync,
{
    let [a0, a1, a2] = axes;
    let slabs: Vec<f64> = (0..a0.len())
        .into_par_iter()
        .map(|i| {
            let x = a0.nodes[i];
            let mut row = Vec::with_capacity(a1.len());
            let mut inner = Vec::with_capacity(a2.len());
            for (y, wy) in a1.nodes.iter().zip(&a1.weights) {
                inner.clear();
                inner.extend(a2.nodes.iter().zip(&a2.weights).map(|(z, wz)| wz * f(x, *y, *z)));
                row.push(wy * pairwise_sum(&inner));
            }
            a0.weights[i] * pairwise_sum(&row)
        })
        .collect();
    pairwise_sum(&slabs)
}

/// `∫∫ f` over a tensor grid, same summation contract as [`integrate_3d`].
pub fn integrate_2d<F>(axes: [&Axis; 2], f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let [a0, a1] = axes;
    let rows: Vec<f64> = (0..a0.len())
        .into_par_iter()
        .map(|i| {
            let x = a0.nodes[i];
            let inner: Vec<f64> = a1.nodes.iter().zip(&a1.weights).map(|(y, w)| w * f(x, *y)).collect();
            a0.weights[i] * pairwise_sum(&inner)
        })
        .collect();
    pairwise_sum(&rows)
}
