//! Gauss–Legendre rules, composite panels and tensor products.

use std::f64::consts::PI;

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss–Legendre order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_order
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre: equal panels no wider than `panel_width`, each
/// with an `order`-point rule.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CompositeRule {
    pub panel_width: f64,
    pub order: usize,
}

impl Default for CompositeRule {
    fn default() -> Self {
        Self {
            panel_width: 1.0,
            order: 10,
        }
    }
}

impl CompositeRule {
    /// Same order, panels half as wide.
    pub fn refined(self) -> Self {
        Self {
            panel_width: 0.5 * self.panel_width,
            order: self.order,
        }
    }

    pub fn panels(&self, lo: f64, hi: f64) -> usize {
        ((hi - lo) / self.panel_width).ceil().max(1.0) as usize
    }

    pub fn nodes(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let (x, w) = gauss_legendre(self.order);
        let panels = self.panels(lo, hi);
        let width = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * self.order);
        let mut weights = Vec::with_capacity(panels * self.order);
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * width;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * width * xi);
                weights.push(0.5 * width * wi);
            }
        }
        (nodes, weights)
    }
}

/// Tensor-product rule over a box; one composite rule per axis.
#[derive(Debug, Clone)]
pub struct TensorRule {
    axes: Vec<(Vec<f64>, Vec<f64>)>,
}

impl TensorRule {
    pub fn new(rule: CompositeRule, bounds: &[(f64, f64)]) -> Self {
        Self {
            axes: bounds.iter().map(|(lo, hi)| rule.nodes(*lo, *hi)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|(x, _)| x.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes_per_axis(&self) -> Vec<usize> {
        self.axes.iter().map(|(x, _)| x.len()).collect()
    }

    /// Calls `f(point, weight)` for every tensor node.
    pub fn for_each(&self, mut f: impl FnMut(&[f64], f64)) {
        let dims = self.axes.len();
        if self.is_empty() {
            return;
        }
        let mut idx = vec![0usize; dims];
        let mut point: Vec<f64> = self.axes.iter().map(|(x, _)| x[0]).collect();
        loop {
            let w: f64 = idx
                .iter()
                .zip(&self.axes)
                .map(|(i, (_, ws))| ws[*i])
                .product();
            f(&point, w);
            let mut axis = 0;
            loop {
                if axis == dims {
                    return;
                }
                idx[axis] += 1;
                if idx[axis] < self.axes[axis].0.len() {
                    point[axis] = self.axes[axis].0[idx[axis]];
                    break;
                }
                idx[axis] = 0;
                point[axis] = self.axes[axis].0[0];
                axis += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for order in 1..30 {
            let (x, w) = gauss_legendre(order);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "order {order}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let (x, w) = gauss_legendre(6);
        // ∫ x^10 over [−1, 1] = 2/11, degree ≤ 11 is exact
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((v - 2.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn composite_gaussian() {
        let (x, w) = CompositeRule::default().nodes(-10.0, 10.0);
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * (-x * x).exp()).sum();
        assert!((v - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn tensor_volume() {
        let t = TensorRule::new(CompositeRule { panel_width: 0.7, order: 3 }, &[(0.0, 2.0), (-1.0, 0.5)]);
        let mut vol = 0.0;
        t.for_each(|_, w| vol += w);
        assert!((vol - 3.0).abs() < 1e-14);
        assert_eq!(t.len(), 9 * 9);
    }
}
