//! Closed-form SU(2)-valued maps on the circle, the unit disk and the cylinder
//! `D x [0,1]`, carrying exact first partials in the Cartesian coordinates `(x, y, t)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};
use crate::expr::{Dual, Expr};
use crate::su2::{sinc, Quat, Vec3};

/// A group element with its three partial derivatives.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub q: Quat,
    pub d: [Quat; 3],
}

impl Jet {
    pub fn constant(q: Quat) -> Self {
        Jet {
            q,
            d: [Quat::ZERO; 3],
        }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        Jet {
            q: self.q * o.q,
            d: std::array::from_fn(|i| self.d[i] * o.q + self.q * o.d[i]),
        }
    }

    pub fn inv(&self) -> Jet {
        let qi = self.q.inv();
        Jet {
            q: qi,
            d: self.d.map(|di| -(qi * di * qi)),
        }
    }

    /// Components of `q^-1 dq`.
    pub fn left_log(&self) -> [Vec3; 3] {
        let qi = self.q.inv();
        self.d.map(|di| (qi * di).v)
    }

    /// Components of `dq q^-1`.
    pub fn right_log(&self) -> [Vec3; 3] {
        let qi = self.q.inv();
        self.d.map(|di| (di * qi).v)
    }

    /// `exp(v)` for a vector field given with its gradients.
    pub fn exp(v: [Dual; 3]) -> Jet {
        let vv = Vec3([v[0].v, v[1].v, v[2].v]);
        let th = vv.norm();
        let s = sinc(th);
        let sp = sinc_prime_over_x(th);
        let d = std::array::from_fn(|i| {
            let dv = Vec3([v[0].d[i], v[1].d[i], v[2].d[i]]);
            let vdv = vv.dot(dv);
            Quat {
                w: -s * vdv,
                v: vv.scale(sp * vdv) + dv.scale(s),
            }
        });
        Jet {
            q: Quat::exp(vv),
            d,
        }
    }
}

/// `sinc'(x) / x`.
fn sinc_prime_over_x(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        -1.0 / 3.0 + x * x / 30.0
    } else {
        (x * x.cos() - x.sin()) / (x * x * x)
    }
}

/// Quintic smoothstep on `[0, 1]` and its derivative.
fn smoothstep5(r: f64) -> (f64, f64) {
    let r = r.clamp(0.0, 1.0);
    (
        r * r * r * (10.0 - 15.0 * r + 6.0 * r * r),
        30.0 * r * r * (1.0 - r) * (1.0 - r),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapFamily {
    Const(Quat),
    /// `exp(v(x,y,t))` for a vector field `v`.
    Exp(Box<[Expr; 3]>),
    Product(Vec<MapFamily>),
    Inverse(Box<MapFamily>),
    /// `by^-1 · map · by`.
    Conjugate {
        by: Box<MapFamily>,
        map: Box<MapFamily>,
    },
    /// Degree-one map of a ball inside the cylinder onto SU(2), identically 1 outside it.
    Suspension {
        center: [f64; 3],
        radius: f64,
    },
    /// `map(x, y, t0)`, constant in `t`.
    Slice {
        map: Box<MapFamily>,
        t: f64,
    },
    /// `map(x, y, τ(t))` with the cubic smoothstep `τ`; same endpoints, same top slice.
    Retimed(Box<MapFamily>),
}

impl MapFamily {
    pub fn identity() -> Self {
        MapFamily::Const(Quat::ONE)
    }

    /// `exp(u · axis)` for a scalar field `u`.
    pub fn torus(axis: Vec3, u: Expr) -> Self {
        let comp = |a: f64| Expr::Product(vec![Expr::Const(a), u.clone()]);
        MapFamily::Exp(Box::new([
            comp(axis.0[0]),
            comp(axis.0[1]),
            comp(axis.0[2]),
        ]))
    }

    pub fn exp_field(field: [Expr; 3]) -> Self {
        MapFamily::Exp(Box::new(field))
    }

    pub fn times(self, other: MapFamily) -> Self {
        MapFamily::Product(vec![self, other])
    }

    pub fn inverse(self) -> Self {
        MapFamily::Inverse(Box::new(self))
    }

    pub fn conjugated_by(self, by: MapFamily) -> Self {
        MapFamily::Conjugate {
            by: Box::new(by),
            map: Box::new(self),
        }
    }

    pub fn retimed(self) -> Self {
        MapFamily::Retimed(Box::new(self))
    }

    /// The top slice `t = 1` of a cylinder map.
    pub fn top(&self) -> Self {
        MapFamily::Slice {
            map: Box::new(self.clone()),
            t: 1.0,
        }
    }

    /// Constant in `t`.
    pub fn is_static(&self) -> bool {
        match self {
            MapFamily::Const(_) | MapFamily::Slice { .. } => true,
            MapFamily::Exp(f) => f.iter().all(|e| !mentions_t(e)),
            MapFamily::Product(fs) => fs.iter().all(|f| f.is_static()),
            MapFamily::Inverse(f) => f.is_static(),
            MapFamily::Conjugate { by, map } => by.is_static() && map.is_static(),
            MapFamily::Suspension { .. } => false,
            MapFamily::Retimed(f) => f.is_static(),
        }
    }

    pub fn eval(&self, p: [f64; 3]) -> Jet {
        match self {
            MapFamily::Const(q) => Jet::constant(*q),
            MapFamily::Exp(f) => Jet::exp([f[0].eval(p), f[1].eval(p), f[2].eval(p)]),
            MapFamily::Product(fs) => fs
                .iter()
                .fold(Jet::constant(Quat::ONE), |acc, f| acc.mul(&f.eval(p))),
            MapFamily::Inverse(f) => f.eval(p).inv(),
            MapFamily::Conjugate { by, map } => {
                let b = by.eval(p);
                b.inv().mul(&map.eval(p)).mul(&b)
            }
            MapFamily::Suspension { center, radius } => suspension(p, *center, *radius),
            MapFamily::Slice { map, t } => {
                let mut j = map.eval([p[0], p[1], *t]);
                j.d[2] = Quat::ZERO;
                j
            }
            MapFamily::Retimed(map) => {
                let t = p[2];
                let mut j = map.eval([p[0], p[1], t * t * (3.0 - 2.0 * t)]);
                j.d[2] = j.d[2].scale(6.0 * t * (1.0 - t));
                j
            }
        }
    }

    /// Value only.
    pub fn value(&self, p: [f64; 3]) -> Quat {
        self.eval(p).q
    }

    /// Checks `K(·,0) = 1` and `K = 1` on `∂D x [0,1]` at sample points.
    pub fn check_relative(&self) -> Result<()> {
        const TOL: f64 = 1e-10;
        let n = 64;
        for i in 0..n {
            let th = 2.0 * PI * i as f64 / n as f64;
            for j in 0..=8 {
                let t = j as f64 / 8.0;
                let side = [th.cos(), th.sin(), t];
                if self.value(side).dist(Quat::ONE) > TOL {
                    return Err(LoopError::NotRelative(format!(
                        "K(cos {th:.3}, sin {th:.3}, {t}) != 1"
                    )));
                }
                let r = j as f64 / 8.0;
                let bottom = [r * th.cos(), r * th.sin(), 0.0];
                if self.value(bottom).dist(Quat::ONE) > TOL {
                    return Err(LoopError::NotRelative(format!(
                        "K at r = {r}, θ = {th:.3}, t = 0 differs from 1"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn mentions_t(e: &Expr) -> bool {
    match e {
        Expr::Const(_) => false,
        Expr::Var(i) => *i == 2,
        Expr::Sum(v) | Expr::Product(v) => v.iter().any(mentions_t),
        Expr::Sin(b) | Expr::Cos(b) => mentions_t(b),
    }
}

/// `-(cos φ, sin φ · d/|d|)` with `φ = π S(|d|/R)`, `d = p - center`.
fn suspension(p: [f64; 3], c: [f64; 3], big_r: f64) -> Jet {
    let d = Vec3([p[0] - c[0], p[1] - c[1], p[2] - c[2]]);
    let s = d.norm();
    if s >= big_r {
        return Jet::constant(Quat::ONE);
    }
    if s < 1e-12 {
        return Jet::constant(-Quat::ONE);
    }
    let (st, stp) = smoothstep5(s / big_r);
    let phi = PI * st;
    let phip = PI * stp / big_r;
    let k = phi.sin() / s;
    let kp = (phi.cos() * phip * s - phi.sin()) / (s * s);
    let q = -Quat {
        w: phi.cos(),
        v: d.scale(k),
    };
    let deriv = std::array::from_fn(|i| {
        let dsi = d.0[i] / s;
        let mut e = Vec3::ZERO;
        e.0[i] = 1.0;
        -Quat {
            w: -phi.sin() * phip * dsi,
            v: d.scale(kp * dsi) + e.scale(k),
        }
    });
    Jet { q, d: deriv }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Circle,
    Disk,
    Cylinder,
}

/// TOML description of a map family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub kind: Kind,
}

fn one() -> f64 {
    1.0
}

fn default_center() -> [f64; 3] {
    [0.0, 0.0, 0.5]
}

fn default_radius() -> f64 {
    0.45
}

fn default_degree() -> i32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kind {
    /// `exp(u · axis)` with `u = slope · (x, y, t) + offset + Σ a sin(kx x + ky y + φ)`.
    Torus {
        axis: [f64; 3],
        #[serde(default)]
        slope: [f64; 3],
        #[serde(default)]
        offset: f64,
        /// Rows `[a, kx, ky, φ]`.
        #[serde(default)]
        fourier: Vec<[f64; 4]>,
    },
    /// `exp(amplitude · β(x,y) · τ(t) · (constant + x·gradient_x + y·gradient_y))` with
    /// `β = (1 - r²)²`, and `τ` the cubic smoothstep on the cylinder (1 on the disk).
    /// With a seed the three vectors are drawn uniformly from `[-1, 1]³`.
    Bump {
        #[serde(default)]
        constant: [f64; 3],
        #[serde(default)]
        gradient_x: [f64; 3],
        #[serde(default)]
        gradient_y: [f64; 3],
        #[serde(default = "one")]
        amplitude: f64,
    },
    Product {
        factors: Vec<FamilySpec>,
    },
    /// `by^-1 · map · by`.
    Conjugate {
        by: Box<FamilySpec>,
        map: Box<FamilySpec>,
    },
    Suspension {
        #[serde(default = "default_center")]
        center: [f64; 3],
        #[serde(default = "default_radius")]
        radius: f64,
        #[serde(default = "default_degree")]
        degree: i32,
    },
}

impl FamilySpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| LoopError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("family specs serialize")
    }

    /// Builds the family; `domain` is inherited by nested specs without one.
    pub fn build(&self) -> Result<MapFamily> {
        self.build_in(self.domain.unwrap_or(Domain::Disk))
    }

    fn build_in(&self, parent: Domain) -> Result<MapFamily> {
        let domain = self.domain.unwrap_or(parent);
        let fam = match &self.kind {
            Kind::Torus {
                axis,
                slope,
                offset,
                fourier,
            } => {
                let mut terms = vec![Expr::linear(slope[0], slope[1], slope[2], *offset)];
                for &[a, kx, ky, ph] in fourier {
                    terms.push(Expr::Sin(Box::new(Expr::linear(kx, ky, 0.0, ph))).scaled(a));
                }
                let axis = Vec3(*axis);
                if axis.norm() == 0.0 {
                    return Err(LoopError::Config("torus axis must be nonzero".into()));
                }
                MapFamily::torus(axis, Expr::Sum(terms))
            }
            Kind::Bump {
                constant,
                gradient_x,
                gradient_y,
                amplitude,
            } => {
                let (c, gx, gy) = match self.seed {
                    Some(seed) => {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        let mut draw =
                            || -> [f64; 3] { std::array::from_fn(|_| rng.gen_range(-1.0..1.0)) };
                        (draw(), draw(), draw())
                    }
                    None => (*constant, *gradient_x, *gradient_y),
                };
                bump_field(domain, c, gx, gy, *amplitude)
            }
            Kind::Product { factors } => MapFamily::Product(
                factors
                    .iter()
                    .map(|f| f.build_in(domain))
                    .collect::<Result<_>>()?,
            ),
            Kind::Conjugate { by, map } => {
                map.build_in(domain)?.conjugated_by(by.build_in(domain)?)
            }
            Kind::Suspension {
                center,
                radius,
                degree,
            } => {
                if domain != Domain::Cylinder {
                    return Err(LoopError::Config(
                        "suspension maps live on the cylinder".into(),
                    ));
                }
                let base = MapFamily::Suspension {
                    center: *center,
                    radius: *radius,
                };
                match degree {
                    1 => base,
                    -1 => base.inverse(),
                    d => {
                        return Err(LoopError::Config(format!(
                            "suspension degree must be ±1, got {d}"
                        )))
                    }
                }
            }
        };
        Ok(fam)
    }
}

/// The bump family described in [`Kind::Bump`].
pub fn bump_field(
    domain: Domain,
    c: [f64; 3],
    gx: [f64; 3],
    gy: [f64; 3],
    amplitude: f64,
) -> MapFamily {
    let comp = |i: usize| {
        let mut factors = vec![
            Expr::Const(amplitude),
            Expr::disk_bump(),
            Expr::Sum(vec![
                Expr::Const(c[i]),
                Expr::x().scaled(gx[i]),
                Expr::y().scaled(gy[i]),
            ]),
        ];
        if domain == Domain::Cylinder {
            factors.push(Expr::smoothstep_t());
        }
        Expr::Product(factors)
    };
    MapFamily::exp_field([comp(0), comp(1), comp(2)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: &MapFamily, p: [f64; 3]) {
        let j = f.eval(p);
        for i in 0..3 {
            let h = 1e-6;
            let (mut a, mut b) = (p, p);
            a[i] += h;
            b[i] -= h;
            let fd = (f.value(a) - f.value(b)).scale(0.5 / h);
            assert!(
                fd.dist(j.d[i]) < 1e-7,
                "partial {i}: {fd:?} vs {:?}",
                j.d[i]
            );
        }
    }

    #[test]
    fn partials_match_finite_differences() {
        let g = bump_field(
            Domain::Cylinder,
            [0.3, -0.2, 0.9],
            [0.5, 0.1, 0.0],
            [0.0, -0.7, 0.4],
            1.5,
        );
        let t = MapFamily::torus(Vec3::new(0.0, 0.0, 1.0), Expr::linear(2.0, -1.0, 0.0, 0.3));
        let fam = g
            .clone()
            .times(t.clone())
            .conjugated_by(t.inverse())
            .retimed();
        for p in [[0.1, 0.2, 0.3], [-0.5, 0.4, 0.9], [0.0, 0.0, 0.5]] {
            fd_check(&fam, p);
        }
        let l1 = MapFamily::Suspension {
            center: [0.0, 0.0, 0.5],
            radius: 0.45,
        };
        for p in [[0.1, 0.05, 0.45], [0.2, -0.1, 0.7], [0.01, 0.0, 0.5]] {
            fd_check(&l1, p);
        }
    }

    #[test]
    fn values_are_unit_quaternions() {
        let l1 = MapFamily::Suspension {
            center: [0.0, 0.0, 0.5],
            radius: 0.45,
        };
        for k in 0..50 {
            let s = k as f64 / 50.0;
            let q = l1.value([0.3 * s, -0.2 * s, 0.5 + 0.1 * s]);
            assert!(q.is_unit());
        }
    }

    #[test]
    fn bump_and_suspension_are_relative() {
        let g = bump_field(
            Domain::Cylinder,
            [0.3, -0.2, 0.9],
            [0.5, 0.1, 0.0],
            [0.0, -0.7, 0.4],
            1.5,
        );
        assert!(g.check_relative().is_ok());
        assert!(MapFamily::Suspension {
            center: [0.0, 0.0, 0.5],
            radius: 0.45
        }
        .check_relative()
        .is_ok());
        let t = MapFamily::torus(Vec3::new(1.0, 0.0, 0.0), Expr::x());
        assert!(t.check_relative().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
domain = "cylinder"
kind = "product"

[[factors]]
kind = "bump"
seed = 3

[[factors]]
kind = "suspension"
degree = -1
"#;
        let spec = FamilySpec::from_toml(text).unwrap();
        let again = FamilySpec::from_toml(&spec.to_toml()).unwrap();
        assert_eq!(spec, again);
        assert!(spec.build().unwrap().check_relative().is_ok());
    }
}
