//! Tensor-product quadrature over the well, split into sub-rectangles along
//! caller-supplied lines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, WellGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    GaussLegendreTensor,
    CompositeSimpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    /// Gauss–Legendre order, or Simpson panels, per axis per sub-rectangle.
    pub order_or_panels: usize,
    pub split_at_patch_edges: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: QuadratureRule::GaussLegendreTensor,
            order_or_panels: 64,
            split_at_patch_edges: true,
        }
    }
}

impl QuadratureSpec {
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        let q = QuadratureSpec {
            order_or_panels: order,
            ..Default::default()
        };
        q.validate()?;
        Ok(q)
    }

    pub fn simpson(panels: usize) -> Result<Self> {
        let q = QuadratureSpec {
            rule: QuadratureRule::CompositeSimpson,
            order_or_panels: panels,
            split_at_patch_edges: true,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        match self.rule {
            QuadratureRule::GaussLegendreTensor if self.order_or_panels < 8 => Err(Error::validation(
                "quad",
                format!("Gauss-Legendre order must be >= 8, got {}", self.order_or_panels),
            )),
            QuadratureRule::CompositeSimpson if self.order_or_panels < 64 => Err(Error::validation(
                "quad",
                format!("Simpson needs >= 64 panels per axis, got {}", self.order_or_panels),
            )),
            _ => Ok(()),
        }
    }

    /// The next refinement: doubled order or doubled panel count.
    pub fn refined(&self) -> Self {
        QuadratureSpec {
            order_or_panels: self.order_or_panels * 2,
            ..*self
        }
    }

    /// Nodes and weights on [−1, 1].
    pub fn rule_1d(&self) -> Rule1d {
        match self.rule {
            QuadratureRule::GaussLegendreTensor => Rule1d::gauss_legendre(self.order_or_panels),
            QuadratureRule::CompositeSimpson => Rule1d::simpson(self.order_or_panels),
        }
    }
}

/// A 1D rule on the reference interval [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    /// Gauss–Legendre nodes by Newton iteration on P_n.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Rule1d { nodes, weights }
    }

    /// Composite Simpson with `panels` rounded up to an even count.
    pub fn simpson(panels: usize) -> Self {
        let m = panels.max(2) + panels % 2;
        let h = 2.0 / m as f64;
        let nodes = (0..=m).map(|i| -1.0 + h * i as f64).collect();
        let weights = (0..=m)
            .map(|i| {
                let c = if i == 0 || i == m {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * h / 3.0
            })
            .collect();
        Rule1d { nodes, weights }
    }

    /// Nodes and weights mapped onto [lo, hi].
    pub fn mapped(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        (
            self.nodes.iter().map(|t| mid + half * t).collect(),
            self.weights.iter().map(|w| w * half).collect(),
        )
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Sorted, deduplicated breakpoints over [−half, half] including the ends.
fn breakpoints(half: f64, splits: &[f64], field: &'static str) -> Result<Vec<f64>> {
    let mut pts = vec![-half, half];
    for &s in splits {
        if !s.is_finite() || s.abs() > half {
            return Err(Error::validation(field, format!("split line {s:e} m lies outside the well")));
        }
        pts.push(s);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    Ok(pts)
}

/// ∬ f dx dy over the well.
///
/// The well is cut along `split_x` and `split_y`; each sub-rectangle gets its
/// own tensor rule. Sub-rectangles are visited in ascending y then x and the
/// partial sums are accumulated left to right, so the result is independent
/// of how callers parallelize around it.
pub fn integrate_well<F>(f: F, geom: &WellGeometry, quad: &QuadratureSpec, split_x: &[f64], split_y: &[f64]) -> Result<f64>
where
    F: Fn(Point) -> f64,
{
    geom.validate()?;
    quad.validate()?;
    let bx = breakpoints(geom.lx, split_x, "split_x")?;
    let by = breakpoints(geom.ly, split_y, "split_y")?;
    let rule = quad.rule_1d();
    let xs: Vec<_> = bx.windows(2).map(|w| rule.mapped(w[0], w[1])).collect();
    let mut total = 0.0;
    for wy in by.windows(2) {
        let (ny, wys) = rule.mapped(wy[0], wy[1]);
        for (nx, wxs) in &xs {
            let mut cell = 0.0;
            for (&y, &w_y) in ny.iter().zip(&wys) {
                let mut row = 0.0;
                for (&x, &w_x) in nx.iter().zip(wxs) {
                    let v = f(Point::new(x, y));
                    if !v.is_finite() {
                        return Err(Error::NonFinite { value: v, x, y });
                    }
                    row += w_x * v;
                }
                cell += w_y * row;
            }
            total += cell;
        }
    }
    Ok(total)
}

/// Well average (1/(4LxLy))∬ f.
pub fn average_over_well<F>(f: F, geom: &WellGeometry, quad: &QuadratureSpec, split_x: &[f64], split_y: &[f64]) -> Result<f64>
where
    F: Fn(Point) -> f64,
{
    Ok(integrate_well(f, geom, quad, split_x, split_y)? / geom.area())
}
