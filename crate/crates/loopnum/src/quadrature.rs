//! Tensor quadrature on the disk and the cylinder, and Gauss–Legendre rules.
//!
//! Polar grids use the midpoint rule in `r` (so `r = 0` is never sampled), the
//! trapezoid rule in `θ`, and the midpoint rule in `t`. Slices are evaluated in
//! parallel and reduced by a fixed pairwise tree, so results do not depend on scheduling.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{LoopError, Result};

pub const MIN_RESOLUTION: usize = 8;

fn check(n: usize) -> Result<()> {
    if n < MIN_RESOLUTION {
        Err(LoopError::GridTooSmall {
            got: n,
            min: MIN_RESOLUTION,
        })
    } else {
        Ok(())
    }
}

/// Pairwise sum over a tree whose shape depends only on the length.
fn ordered_sum(parts: Vec<f64>) -> f64 {
    fn go(x: &[f64]) -> f64 {
        match x.len() {
            0 => 0.0,
            1 => x[0],
            n => go(&x[..n / 2]) + go(&x[n / 2..]),
        }
    }
    go(&parts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiskGrid {
    pub nr: usize,
    pub ntheta: usize,
}

impl DiskGrid {
    pub fn new(nr: usize, ntheta: usize) -> Result<Self> {
        check(nr)?;
        check(ntheta)?;
        Ok(DiskGrid { nr, ntheta })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    /// Mesh width used for convergence orders.
    pub fn h(&self) -> f64 {
        1.0 / self.nr as f64
    }

    /// `∫_D f dx dy`, with `f` called on `(x, y, 0)`.
    pub fn integrate<F: Fn([f64; 3]) -> f64 + Sync>(&self, f: F) -> f64 {
        let dr = 1.0 / self.nr as f64;
        let dth = 2.0 * PI / self.ntheta as f64;
        let parts = (0..self.nr)
            .into_par_iter()
            .map(|i| {
                let r = (i as f64 + 0.5) * dr;
                let mut s = 0.0;
                for j in 0..self.ntheta {
                    let th = j as f64 * dth;
                    s += f([r * th.cos(), r * th.sin(), 0.0]);
                }
                s * r * dr * dth
            })
            .collect();
        ordered_sum(parts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CylinderGrid {
    pub nr: usize,
    pub ntheta: usize,
    pub nt: usize,
}

impl CylinderGrid {
    pub fn new(nr: usize, ntheta: usize, nt: usize) -> Result<Self> {
        check(nr)?;
        check(ntheta)?;
        check(nt)?;
        Ok(CylinderGrid { nr, ntheta, nt })
    }

    pub fn cube(n: usize) -> Result<Self> {
        Self::new(n, n, n)
    }

    /// `∫_{D x [0,1]} f dx dy dt`.
    pub fn integrate<F: Fn([f64; 3]) -> f64 + Sync>(&self, f: F) -> f64 {
        let dr = 1.0 / self.nr as f64;
        let dth = 2.0 * PI / self.ntheta as f64;
        let dt = 1.0 / self.nt as f64;
        let parts = (0..self.nt * self.nr)
            .into_par_iter()
            .map(|k| {
                let (l, i) = (k / self.nr, k % self.nr);
                let t = (l as f64 + 0.5) * dt;
                let r = (i as f64 + 0.5) * dr;
                let mut s = 0.0;
                for j in 0..self.ntheta {
                    let th = j as f64 * dth;
                    s += f([r * th.cos(), r * th.sin(), t]);
                }
                s * r * dr * dth * dt
            })
            .collect();
        ordered_sum(parts)
    }
}

/// Trapezoid rule for `∫_0^{2π} f`; spectrally accurate for smooth periodic `f`.
pub fn circle_trapezoid<F: Fn(f64) -> f64>(n: usize, f: F) -> f64 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|j| f(j as f64 * h)).sum::<f64>() * h
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // P_n and P_n' by the three-term recurrence
    let legendre = |x: f64| {
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let (p, pm1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
        (p, n as f64 * (x * p - pm1) / (x * x - 1.0))
    };
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `∫_a^b f` by composite Gauss–Legendre with `panels` panels of `n` points.
pub fn gauss_composite<F: Fn(f64) -> f64>(n: usize, panels: usize, a: f64, b: f64, f: F) -> f64 {
    let (x, w) = gauss_legendre(n);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        total += x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * f(mid + 0.5 * h * xi))
            .sum::<f64>()
            * 0.5
            * h;
    }
    total
}
