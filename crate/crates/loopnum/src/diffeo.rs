//! Lifts of orientation-preserving circle diffeomorphisms to `ℝ` and the two
//! real cocycles on them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};
use crate::quadrature::{circle_trapezoid, gauss_composite};

/// `h: ℝ -> ℝ` with `h(x + 2π) = h(x) + 2π`. Composition is `Compose([f, g]) = f ∘ g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiffeoLift {
    Rotation {
        a: f64,
    },
    /// `x + a sin(k x + φ)`; monotone iff `|a k| < 1`.
    Sine {
        a: f64,
        k: u32,
        #[serde(default)]
        phase: f64,
    },
    Compose {
        maps: Vec<DiffeoLift>,
    },
}

const MONOTONE_SAMPLES: usize = 1024;

impl DiffeoLift {
    pub fn rotation(a: f64) -> Self {
        DiffeoLift::Rotation { a }
    }

    pub fn sine(a: f64, k: u32) -> Self {
        DiffeoLift::Sine { a, k, phase: 0.0 }
    }

    pub fn then(&self, inner: &DiffeoLift) -> Self {
        DiffeoLift::Compose {
            maps: vec![self.clone(), inner.clone()],
        }
    }

    /// `(h, h', h'')` at `x`.
    pub fn jet(&self, x: f64) -> (f64, f64, f64) {
        match self {
            DiffeoLift::Rotation { a } => (x + a, 1.0, 0.0),
            DiffeoLift::Sine { a, k, phase } => {
                let k = *k as f64;
                let u = k * x + phase;
                (x + a * u.sin(), 1.0 + a * k * u.cos(), -a * k * k * u.sin())
            }
            DiffeoLift::Compose { maps } => {
                maps.iter().rev().fold((x, 1.0, 0.0), |(g, g1, g2), f| {
                    let (f0, f1, f2) = f.jet(g);
                    (f0, f1 * g1, f2 * g1 * g1 + f1 * g2)
                })
            }
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.jet(x).0
    }

    pub fn check_monotone(&self) -> Result<()> {
        for j in 0..MONOTONE_SAMPLES {
            let x = 2.0 * PI * j as f64 / MONOTONE_SAMPLES as f64;
            if self.jet(x).1 <= 0.0 {
                return Err(LoopError::NotMonotone(x));
            }
        }
        Ok(())
    }
}

/// Gauss–Legendre settings for the non-periodic integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussRule {
    pub points: usize,
    pub panels: usize,
}

impl Default for GaussRule {
    fn default() -> Self {
        GaussRule {
            points: 20,
            panels: 16,
        }
    }
}

/// `χ(h₁, h₂) = (1/4π²) ∫_0^{2π} (h₁∘h₂ - h₁ - h₂) dx`.
pub fn diffeo_cover_cocycle(h1: &DiffeoLift, h2: &DiffeoLift, rule: GaussRule) -> f64 {
    gauss_composite(rule.points, rule.panels, 0.0, 2.0 * PI, |x| {
        h1.value(h2.value(x)) - h1.value(x) - h2.value(x)
    }) / (4.0 * PI * PI)
}

/// `δχ(h₁,h₂,h₃)`.
pub fn delta_chi(h1: &DiffeoLift, h2: &DiffeoLift, h3: &DiffeoLift, rule: GaussRule) -> f64 {
    diffeo_cover_cocycle(h2, h3, rule) - diffeo_cover_cocycle(&h1.then(h2), h3, rule)
        + diffeo_cover_cocycle(h1, &h2.then(h3), rule)
        - diffeo_cover_cocycle(h1, h2, rule)
}

/// `½ ∫_{S¹} log(f'∘g) d log(g')` with `n` trapezoid nodes, not reduced.
pub fn bott_virasoro_raw(f: &DiffeoLift, g: &DiffeoLift, n: usize) -> Result<f64> {
    f.check_monotone()?;
    g.check_monotone()?;
    Ok(0.5
        * circle_trapezoid(n, |x| {
            let (gx, g1, g2) = g.jet(x);
            f.jet(gx).1.ln() * g2 / g1
        }))
}

/// The Bott–Virasoro cocycle reduced to `[0, 1)`.
pub fn bott_virasoro(f: &DiffeoLift, g: &DiffeoLift, n: usize) -> Result<f64> {
    Ok(bott_virasoro_raw(f, g, n)?.rem_euclid(1.0))
}

/// `δB(f,g,h)` before reduction mod ℤ.
pub fn delta_bott_virasoro(
    f: &DiffeoLift,
    g: &DiffeoLift,
    h: &DiffeoLift,
    n: usize,
) -> Result<f64> {
    Ok(
        bott_virasoro_raw(g, h, n)? - bott_virasoro_raw(&f.then(g), h, n)?
            + bott_virasoro_raw(f, &g.then(h), n)?
            - bott_virasoro_raw(f, g, n)?,
    )
}

/// Max over samples of `|ℓ(f∘g) - ℓ(f)∘g - ℓ(g)|` with `ℓ(h) = log h'`.
pub fn log_derivative_defect(f: &DiffeoLift, g: &DiffeoLift, samples: usize) -> f64 {
    (0..samples)
        .map(|j| {
            let x = 2.0 * PI * j as f64 / samples as f64;
            let lhs = f.then(g).jet(x).1.ln();
            let (gx, g1, _) = g.jet(x);
            (lhs - f.jet(gx).1.ln() - g1.ln()).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_give_minus_half() {
        let v = diffeo_cover_cocycle(
            &DiffeoLift::rotation(0.7),
            &DiffeoLift::rotation(-1.9),
            GaussRule::default(),
        );
        assert!((v + 0.5).abs() < 1e-12, "{v}");
    }

    #[test]
    fn lift_shift_leaves_value_unchanged() {
        let h1 = DiffeoLift::sine(0.3, 2);
        let h2 = DiffeoLift::sine(-0.5, 1);
        let shifted = DiffeoLift::rotation(2.0 * PI).then(&h1);
        let rule = GaussRule::default();
        assert!(
            (diffeo_cover_cocycle(&h1, &h2, rule) - diffeo_cover_cocycle(&shifted, &h2, rule))
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn composed_derivatives_match_finite_differences() {
        let h = DiffeoLift::sine(0.3, 2).then(&DiffeoLift::Sine {
            a: -0.4,
            k: 1,
            phase: 0.5,
        });
        let x = 0.8;
        let e = 1e-5;
        let (_, d1, d2) = h.jet(x);
        assert!(((h.value(x + e) - h.value(x - e)) / (2.0 * e) - d1).abs() < 1e-8);
        assert!(((h.jet(x + e).1 - h.jet(x - e).1) / (2.0 * e) - d2).abs() < 1e-8);
    }

    #[test]
    fn bott_virasoro_vanishes_on_rotations() {
        assert_eq!(
            bott_virasoro(&DiffeoLift::rotation(1.0), &DiffeoLift::rotation(2.0), 16).unwrap(),
            0.0
        );
        assert!(bott_virasoro(&DiffeoLift::sine(1.5, 1), &DiffeoLift::rotation(2.0), 16).is_err());
    }

    #[test]
    fn log_derivative_is_a_cocycle() {
        let d = log_derivative_defect(&DiffeoLift::sine(0.3, 2), &DiffeoLift::sine(-0.6, 1), 256);
        assert!(d < 1e-13, "{d}");
    }
}
