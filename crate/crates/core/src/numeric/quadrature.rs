//! Composite Gauss–Legendre quadrature on panels of bounded length.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral of `f` over [a, b] with this rule.
    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Result<Complex64>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x)? * w;
        }
        Ok(acc * half)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Panel layout for an integral over [a, b].
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct PanelSpec {
    /// Upper bound on the panel length.
    pub max_len: f64,
    /// Gauss–Legendre nodes per panel.
    pub order: usize,
    /// Refuse layouts with more panels than this.
    pub budget: usize,
}

impl Default for PanelSpec {
    fn default() -> Self {
        Self {
            max_len: 1.0,
            order: 8,
            budget: 5_000_000,
        }
    }
}

impl PanelSpec {
    /// Panels short enough to resolve `e^{i t ω}` with a quarter period per
    /// panel, capped at unit length.
    pub fn for_frequency(omega: f64) -> Self {
        let quarter = if omega.abs() > 0.0 {
            std::f64::consts::PI / (2.0 * omega.abs())
        } else {
            f64::INFINITY
        };
        Self {
            max_len: quarter.min(1.0),
            ..Self::default()
        }
    }

    pub fn halved(self) -> Self {
        Self {
            max_len: self.max_len / 2.0,
            ..self
        }
    }
}

/// Composite rule: [a, b] split into equal panels no longer than
/// `spec.max_len`, each integrated with a `spec.order`-point rule.
pub fn integrate_panels<F>(a: f64, b: f64, spec: PanelSpec, mut f: F) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if b <= a {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let panels = ((b - a) / spec.max_len).ceil().max(1.0);
    if !panels.is_finite() || panels > spec.budget as f64 {
        return Err(Error::Quadrature {
            panels: if panels.is_finite() {
                panels as usize
            } else {
                usize::MAX
            },
            budget: spec.budget,
        });
    }
    let panels = panels as usize;
    let rule = GaussLegendre::new(spec.order);
    let h = (b - a) / panels as f64;
    let mut re = crate::numeric::CompensatedSum::new();
    let mut im = crate::numeric::CompensatedSum::new();
    for j in 0..panels {
        let lo = a + j as f64 * h;
        let hi = if j + 1 == panels { b } else { lo + h };
        let v = rule.integrate(lo, hi, &mut f)?;
        re.add(v.re);
        im.add(v.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}
