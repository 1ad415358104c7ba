//! Scalar fields on `(x, y, t)` with exact first partials, evaluated in forward mode.

use serde::{Deserialize, Serialize};

/// Value and gradient `(∂x, ∂y, ∂t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: [f64; 3],
}

impl Dual {
    pub fn constant(v: f64) -> Self {
        Dual { v, d: [0.0; 3] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Const(f64),
    /// Coordinate 0 = x, 1 = y, 2 = t.
    Var(usize),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

impl Expr {
    pub fn x() -> Expr {
        Expr::Var(0)
    }
    pub fn y() -> Expr {
        Expr::Var(1)
    }
    pub fn t() -> Expr {
        Expr::Var(2)
    }

    pub fn scaled(self, c: f64) -> Expr {
        Expr::Product(vec![Expr::Const(c), self])
    }

    /// `(1 - x² - y²)²`: vanishes with its first derivatives on the unit circle.
    pub fn disk_bump() -> Expr {
        let one_minus = Expr::Sum(vec![
            Expr::Const(1.0),
            Expr::Product(vec![Expr::Const(-1.0), Expr::x(), Expr::x()]),
            Expr::Product(vec![Expr::Const(-1.0), Expr::y(), Expr::y()]),
        ]);
        Expr::Product(vec![one_minus.clone(), one_minus])
    }

    /// `3t² - 2t³`: 0 at `t = 0`, 1 at `t = 1`, flat at both ends.
    pub fn smoothstep_t() -> Expr {
        Expr::Sum(vec![
            Expr::Product(vec![Expr::Const(3.0), Expr::t(), Expr::t()]),
            Expr::Product(vec![Expr::Const(-2.0), Expr::t(), Expr::t(), Expr::t()]),
        ])
    }

    /// Affine in `(x, y, t)` plus an offset.
    pub fn linear(kx: f64, ky: f64, kt: f64, c: f64) -> Expr {
        Expr::Sum(vec![
            Expr::x().scaled(kx),
            Expr::y().scaled(ky),
            Expr::t().scaled(kt),
            Expr::Const(c),
        ])
    }

    pub fn eval(&self, p: [f64; 3]) -> Dual {
        match self {
            Expr::Const(c) => Dual::constant(*c),
            Expr::Var(i) => {
                let mut d = [0.0; 3];
                d[*i] = 1.0;
                Dual { v: p[*i], d }
            }
            Expr::Sum(terms) => terms.iter().fold(Dual::constant(0.0), |acc, e| {
                let x = e.eval(p);
                Dual {
                    v: acc.v + x.v,
                    d: [acc.d[0] + x.d[0], acc.d[1] + x.d[1], acc.d[2] + x.d[2]],
                }
            }),
            Expr::Product(terms) => terms.iter().fold(Dual::constant(1.0), |acc, e| {
                let x = e.eval(p);
                Dual {
                    v: acc.v * x.v,
                    d: std::array::from_fn(|i| acc.d[i] * x.v + acc.v * x.d[i]),
                }
            }),
            Expr::Sin(e) => {
                let x = e.eval(p);
                let c = x.v.cos();
                Dual {
                    v: x.v.sin(),
                    d: x.d.map(|g| g * c),
                }
            }
            Expr::Cos(e) => {
                let x = e.eval(p);
                let s = -x.v.sin();
                Dual {
                    v: x.v.cos(),
                    d: x.d.map(|g| g * s),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_matches_finite_differences() {
        let e = Expr::Product(vec![
            Expr::Sin(Box::new(Expr::linear(1.3, -0.4, 0.2, 0.1))),
            Expr::disk_bump(),
            Expr::smoothstep_t(),
        ]);
        let p = [0.2, -0.3, 0.6];
        let d = e.eval(p);
        for i in 0..3 {
            let h = 1e-6;
            let (mut a, mut b) = (p, p);
            a[i] += h;
            b[i] -= h;
            let fd = (e.eval(a).v - e.eval(b).v) / (2.0 * h);
            assert!((fd - d.d[i]).abs() < 1e-8, "{i}");
        }
    }

    #[test]
    fn bump_vanishes_on_the_circle() {
        let b = Expr::disk_bump().eval([0.6, 0.8, 0.0]);
        assert!(b.v.abs() < 1e-15 && b.d.iter().all(|g| g.abs() < 1e-14));
    }
}
