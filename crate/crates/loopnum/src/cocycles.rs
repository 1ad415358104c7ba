//! The disk 2-cocycle `C`, the 3-dimensional cochain `Λ` on relative maps, and the
//! Lie algebra cocycle on `Map(D, su(2))`.
//!
//! Conventions: `D` carries `dx∧dy = r dr∧dθ`, the cylinder `D x [0,1]` carries
//! `dx∧dy∧dt`, and a relative map `K` (equal to 1 at `t = 0` and on `∂D x [0,1]`)
//! represents its top slice `K(·,1)`.

use std::f64::consts::PI;

use crate::error::{LoopError, Result};
use crate::expr::Expr;
use crate::family::MapFamily;
use crate::quadrature::{circle_trapezoid, CylinderGrid, DiskGrid};
use crate::su2::{trace_pairing, Quat, Vec3};

/// A map `D -> su(2)` given by three scalar fields.
pub type LieField = [Expr; 3];

fn field_jet(f: &LieField, p: [f64; 3]) -> (Vec3, [Vec3; 3]) {
    let c = [f[0].eval(p), f[1].eval(p), f[2].eval(p)];
    (
        Vec3([c[0].v, c[1].v, c[2].v]),
        std::array::from_fn(|i| Vec3([c[0].d[i], c[1].d[i], c[2].d[i]])),
    )
}

pub fn scale_field(f: &LieField, s: f64) -> LieField {
    f.clone().map(|e| e.scaled(s))
}

/// `exp(ε X)` as a map family.
pub fn exp_of(x: &LieField, eps: f64) -> MapFamily {
    MapFamily::exp_field(scale_field(x, eps))
}

/// How the first derivatives inside `C` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluator {
    /// Exact partials.
    Analytic,
    /// Central link logarithms with step equal to the radial mesh width,
    /// `f^-1 ∂f ≈ log(f(p - h/2)^-1 f(p + h/2)) / h`; second order in `h`.
    Lattice,
}

/// `(1/8π²) ∫_D tr(f^-1 df ∧ dg g^-1)`.
pub fn mickelsson_c(f: &MapFamily, g: &MapFamily, grid: &DiskGrid) -> f64 {
    grid.integrate(|p| {
        let a = f.eval(p).left_log();
        let b = g.eval(p).right_log();
        trace_pairing(a[0], b[1]) - trace_pairing(a[1], b[0])
    }) / (8.0 * PI * PI)
}

fn link(q: Quat, p: [f64; 3]) -> Result<Vec3> {
    q.log()
        .ok_or_else(|| LoopError::Antipode(format!("({:.4}, {:.4})", p[0], p[1])))
}

/// `C` with lattice derivatives.
pub fn mickelsson_c_lattice(f: &MapFamily, g: &MapFamily, grid: &DiskGrid) -> Result<f64> {
    let h = grid.h();
    let failed = std::sync::Mutex::new(None);
    let total = grid.integrate(|p| {
        let shifted = |i: usize, s: f64| {
            let mut q = p;
            q[i] += s * h;
            q
        };
        let mut a = [Vec3::ZERO; 2];
        let mut b = [Vec3::ZERO; 2];
        for i in 0..2 {
            let (lo, hi) = (shifted(i, -0.5), shifted(i, 0.5));
            let la = link(f.value(lo).inv() * f.value(hi), p);
            let lb = link(g.value(hi) * g.value(lo).inv(), p);
            match (la, lb) {
                (Ok(x), Ok(y)) => {
                    a[i] = x.scale(1.0 / h);
                    b[i] = y.scale(1.0 / h);
                }
                (Err(e), _) | (_, Err(e)) => {
                    failed.lock().unwrap().get_or_insert(e);
                    return 0.0;
                }
            }
        }
        trace_pairing(a[0], b[1]) - trace_pairing(a[1], b[0])
    }) / (8.0 * PI * PI);
    match failed.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

pub fn c_with(ev: Evaluator, f: &MapFamily, g: &MapFamily, grid: &DiskGrid) -> Result<f64> {
    match ev {
        Evaluator::Analytic => Ok(mickelsson_c(f, g, grid)),
        Evaluator::Lattice => mickelsson_c_lattice(f, g, grid),
    }
}

/// `δC(f,g,h) = C(g,h) - C(fg,h) + C(f,gh) - C(f,g)`.
pub fn delta_c(
    ev: Evaluator,
    f: &MapFamily,
    g: &MapFamily,
    h: &MapFamily,
    grid: &DiskGrid,
) -> Result<f64> {
    let fg = f.clone().times(g.clone());
    let gh = g.clone().times(h.clone());
    Ok(
        c_with(ev, g, h, grid)? - c_with(ev, &fg, h, grid)? + c_with(ev, f, &gh, grid)?
            - c_with(ev, f, g, grid)?,
    )
}

/// `Λ(K) = -(1/24π²) ∫ tr((K^-1 dK)^3) = (1/2π²) ∫ det(a_x, a_y, a_t)`.
pub fn wzw_lambda(k: &MapFamily, grid: &CylinderGrid) -> f64 {
    grid.integrate(|p| {
        let a = k.eval(p).left_log();
        Vec3::det(a[0], a[1], a[2])
    }) / (2.0 * PI * PI)
}

/// `C` between the top slices of two cylinder maps.
pub fn c_on_top(k: &MapFamily, l: &MapFamily, grid: &DiskGrid) -> f64 {
    mickelsson_c(&k.top(), &l.top(), grid)
}

/// `c(X,Y) = (1/4π²) ∫_D tr(dX ∧ dY)`.
pub fn lie_cocycle_disk(x: &LieField, y: &LieField, grid: &DiskGrid) -> f64 {
    grid.integrate(|p| {
        let (_, dx) = field_jet(x, p);
        let (_, dy) = field_jet(y, p);
        trace_pairing(dx[0], dy[1]) - trace_pairing(dx[1], dy[0])
    }) / (4.0 * PI * PI)
}

/// The same cocycle as `(1/4π²) ∮ tr(X dY)` with `n` trapezoid nodes.
pub fn lie_cocycle_boundary(x: &LieField, y: &LieField, n: usize) -> f64 {
    circle_trapezoid(n, |th| {
        let p = [th.cos(), th.sin(), 0.0];
        let (xv, _) = field_jet(x, p);
        let (_, dy) = field_jet(y, p);
        // ∂θ = -y ∂x + x ∂y
        trace_pairing(xv, dy[0].scale(-p[1]) + dy[1].scale(p[0]))
    }) / (4.0 * PI * PI)
}

/// `Σ ± C(e^{±εX}, e^{±εY}) / 4ε²` minus the same with `X` and `Y` swapped.
/// Tends to `+c(X,Y)` with error `O(ε²)`.
pub fn infinitesimal_limit(x: &LieField, y: &LieField, eps: f64, grid: &DiskGrid) -> f64 {
    let mixed = |u: &LieField, v: &LieField| {
        let mut s = 0.0;
        for (su, sv) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            s += su * sv * mickelsson_c(&exp_of(u, su * eps), &exp_of(v, sv * eps), grid);
        }
        s / (4.0 * eps * eps)
    };
    mixed(x, y) - mixed(y, x)
}

/// `(Re, Im)` of `(x + iy)^m` as expressions.
pub fn harmonic(m: u32) -> (Expr, Expr) {
    let (mut re, mut im) = (Expr::Const(1.0), Expr::Const(0.0));
    for _ in 0..m {
        let next_re = Expr::Sum(vec![
            Expr::Product(vec![re.clone(), Expr::x()]),
            Expr::Product(vec![Expr::Const(-1.0), im.clone(), Expr::y()]),
        ]);
        let next_im = Expr::Sum(vec![
            Expr::Product(vec![re, Expr::y()]),
            Expr::Product(vec![im, Expr::x()]),
        ]);
        re = next_re;
        im = next_im;
    }
    (re, im)
}

/// `X = axis r^m cos mθ`, `Y = axis r^m sin mθ`; `c(X,Y) = -m|axis|²/2π`.
pub fn harmonic_pair(m: u32, axis: Vec3) -> (LieField, LieField) {
    let (re, im) = harmonic(m);
    let along = |e: &Expr| std::array::from_fn(|i| e.clone().scaled(axis.0[i]));
    (along(&re), along(&im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{bump_field, Domain};

    fn torus_pair() -> (MapFamily, MapFamily) {
        let z = Vec3::new(0.0, 0.0, 1.0);
        (
            MapFamily::torus(z, Expr::x().scaled(2.0 * PI)),
            MapFamily::torus(z, Expr::y().scaled(2.0)),
        )
    }

    #[test]
    fn torus_pair_gives_minus_one() {
        let (f, g) = torus_pair();
        let c = mickelsson_c(&f, &g, &DiskGrid::square(128).unwrap());
        assert!((c + 1.0).abs() < 1e-3, "{c}");
    }

    #[test]
    fn analytic_coboundary_vanishes_pointwise() {
        let f = bump_field(
            Domain::Disk,
            [0.4, 0.1, -0.3],
            [0.2, 0.0, 0.5],
            [0.0, 0.3, 0.1],
            1.0,
        );
        let g = MapFamily::torus(Vec3::new(1.0, 0.0, 0.0), Expr::linear(0.7, -0.4, 0.0, 0.2));
        let h = MapFamily::torus(Vec3::new(0.0, 1.0, 0.0), Expr::linear(-0.3, 0.9, 0.0, 0.0));
        let r = delta_c(
            Evaluator::Analytic,
            &f,
            &g,
            &h,
            &DiskGrid::square(32).unwrap(),
        )
        .unwrap();
        assert!(r.abs() < 1e-12, "{r}");
    }

    #[test]
    fn lattice_agrees_with_analytic() {
        let (f, g) = torus_pair();
        let grid = DiskGrid::square(64).unwrap();
        let a = mickelsson_c(&f, &g, &grid);
        let l = mickelsson_c_lattice(&f, &g, &grid).unwrap();
        assert!((a - l).abs() < 1e-3, "{a} {l}");
    }

    #[test]
    fn harmonic_oracle() {
        for m in 1..=3 {
            let (x, y) = harmonic_pair(m, Vec3::new(0.0, 1.0, 0.0));
            let exact = -(m as f64) / (2.0 * PI);
            let bd = lie_cocycle_boundary(&x, &y, 64);
            assert!((bd - exact).abs() < 1e-13, "{m}: {bd}");
            let disk = lie_cocycle_disk(&x, &y, &DiskGrid::square(128).unwrap());
            assert!((disk - exact).abs() < 1e-3, "{m}: {disk}");
        }
    }

    #[test]
    fn polar_top_slice_of_relative_maps() {
        let k = bump_field(
            Domain::Cylinder,
            [0.3, -0.2, 0.9],
            [0.5, 0.1, 0.0],
            [0.0, -0.7, 0.4],
            1.5,
        );
        assert!(wzw_lambda(&MapFamily::identity(), &CylinderGrid::cube(8).unwrap()) == 0.0);
        let grid = CylinderGrid::cube(32).unwrap();
        // Λ(K K^-1) = 0 = Λ(K) + Λ(K^-1) + C(k, k^-1), and C(k, k^-1) = 0
        let a = wzw_lambda(&k, &grid);
        let b = wzw_lambda(&k.clone().inverse(), &grid);
        assert!((a + b).abs() < 1e-10, "{a} {b}");
    }
}
