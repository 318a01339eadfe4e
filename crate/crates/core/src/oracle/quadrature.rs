//! Quadrature rules for the oracle, built on Gauss-Legendre nodes.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Gauss-Legendre rule of `order` points on `[a, b]`. Orders below two
    /// fall back to the midpoint rule.
    pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Self {
        Self::composite(order, 1, a, b)
    }

    /// `panels` equal sub-intervals of `[a, b]`, each carrying a
    /// Gauss-Legendre rule of `order` points.
    pub fn composite(order: usize, panels: usize, a: f64, b: f64) -> Self {
        let base: Vec<(f64, f64)> = match GaussLegendre::new(order) {
            Ok(rule) => rule.as_node_weight_pairs().to_vec(),
            Err(_) => vec![(0.0, 2.0)],
        };
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(base.len() * panels);
        let mut weights = Vec::with_capacity(base.len() * panels);
        for p in 0..panels {
            let lo = a + h * p as f64;
            for &(x, w) in &base {
                nodes.push(lo + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Self { nodes, weights }
    }

    /// Equally spaced periodic rule on `[0, 2 pi)`.
    pub fn periodic(points: usize) -> Self {
        let n = points.max(1);
        let w = 2.0 * PI / n as f64;
        Self { nodes: (0..n).map(|i| w * (i as f64 + 0.5)).collect(), weights: vec![w; n] }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Product rule over the unit sphere: Gauss-Legendre in `cos(theta)` times
/// a periodic rule in `phi`. Weights sum to `4 pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub cos_theta: Rule,
    pub phi: Rule,
}

impl SphereRule {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        Self { cos_theta: Rule::gauss_legendre(n_theta, -1.0, 1.0), phi: Rule::periodic(n_phi) }
    }

    /// Unit vector for node `(i, j)`.
    pub fn direction(&self, i: usize, j: usize) -> [f64; 3] {
        let c = self.cos_theta.nodes[i];
        let s = (1.0 - c * c).max(0.0).sqrt();
        let (sp, cp) = self.phi.nodes[j].sin_cos();
        [s * cp, s * sp, c]
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.cos_theta.weights[i] * self.phi.weights[j]
    }
}
