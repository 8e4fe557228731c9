//! Gauss–Legendre panels, adaptive bisection, and cumulative integration.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values the quadrature routines can accumulate.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
        GaussLegendre { nodes, weights }
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

    /// Nodes mapped onto `[a, b]`.
    pub fn mapped_nodes(&self, a: f64, b: f64) -> impl Iterator<Item = f64> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().map(move |x| mid + half * x)
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Fallible variant of [`GaussLegendre::integrate`].
    pub fn try_integrate<V, F>(&self, a: f64, b: f64, mut f: F) -> Result<V>
    where
        V: QuadValue,
        F: FnMut(f64) -> Result<V>,
    {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = V::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x)? * *w;
        }
        Ok(acc * half)
    }

    /// Matrix `S[j][k] = integral from -1 to x_j of the k-th Lagrange basis
    /// polynomial on the nodes`. Applying it to node values integrates the
    /// interpolant from the left end of the panel up to every node.
    pub fn cumulative_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let lagrange = |k: usize, x: f64| -> f64 {
            let mut v = 1.0;
            for (m, xm) in self.nodes.iter().enumerate() {
                if m != k {
                    v *= (x - xm) / (self.nodes[k] - xm);
                }
            }
            v
        };
        (0..n)
            .map(|j| {
                let upper = self.nodes[j];
                (0..n)
                    .map(|k| self.integrate(-1.0, upper, |x| lagrange(k, x)))
                    .collect()
            })
            .collect()
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of integrating one panel adaptively.
#[derive(Debug, Clone, Copy)]
pub struct PanelResult<V = f64> {
    pub value: V,
    pub error: f64,
}

/// Integrates `f` over `[a, b]`, bisecting until the whole-panel rule and the
/// two half-panel rules agree to `tol` (scaled by panel length).
pub fn adaptive<V, F>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: usize,
    op: &'static str,
    f: &F,
) -> Result<PanelResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V>,
{
    let whole = rule.try_integrate(a, b, f)?;
    adaptive_inner(rule, a, b, whole, tol, max_depth, op, f)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_inner<V, F>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: V,
    tol: f64,
    depth: usize,
    op: &'static str,
    f: &F,
) -> Result<PanelResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V>,
{
    let mid = 0.5 * (a + b);
    let left: V = rule.try_integrate(a, mid, f)?;
    let right: V = rule.try_integrate(mid, b, f)?;
    let err = (left + right - whole).magnitude();
    if err <= tol {
        return Ok(PanelResult {
            value: left + right,
            error: err,
        });
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure {
            op,
            lo: a,
            hi: b,
            error: err,
            tol,
        });
    }
    let l = adaptive_inner(rule, a, mid, left, 0.5 * tol, depth - 1, op, f)?;
    let r = adaptive_inner(rule, mid, b, right, 0.5 * tol, depth - 1, op, f)?;
    Ok(PanelResult {
        value: l.value + r.value,
        error: l.error + r.error,
    })
}

/// Sums in a fixed pairwise order so reductions do not depend on scheduling.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (l, r) = values.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}
