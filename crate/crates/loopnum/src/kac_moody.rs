//! Pairs `(g, λ)` with `g: D -> SU(2)` and `λ ∈ ℝ/ℤ`, multiplied through `C`, and
//! the equivalence move by relative maps that turns them into the loop group extension.

use serde::Serialize;

use crate::cocycles::{mickelsson_c, wzw_lambda};
use crate::family::MapFamily;
use crate::quadrature::{CylinderGrid, DiskGrid};

#[derive(Clone, Debug)]
pub struct Pair {
    pub map: MapFamily,
    /// In `[0, 1)`.
    pub phase: f64,
}

pub fn frac(x: f64) -> f64 {
    x.rem_euclid(1.0)
}

/// Distance from `x` to the nearest integer.
pub fn nearest_int_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

impl Pair {
    pub fn new(map: MapFamily, phase: f64) -> Self {
        Pair {
            map,
            phase: frac(phase),
        }
    }

    pub fn identity() -> Self {
        Pair::new(MapFamily::identity(), 0.0)
    }
}

/// `(g, λ)(h, μ) = (gh, λ + μ + C(g, h))`.
pub fn product(a: &Pair, b: &Pair, grid: &DiskGrid) -> Pair {
    Pair::new(
        a.map.clone().times(b.map.clone()),
        a.phase + b.phase + mickelsson_c(&a.map, &b.map, grid),
    )
}

/// `(g, λ) ~ (gh, λ + C(g,h) + Λ(h))` for `h` the top slice of the relative map `k`.
pub fn change_representative(a: &Pair, k: &MapFamily, disk: &DiskGrid, cyl: &CylinderGrid) -> Pair {
    let h = k.top();
    Pair::new(
        a.map.clone().times(h.clone()),
        a.phase + mickelsson_c(&a.map, &h, disk) + wzw_lambda(k, cyl),
    )
}

/// Phase of `((ab)c)` minus phase of `(a(bc))`, and `-δC(a,b,c)`, both reduced to `(-½, ½]`.
pub fn associativity_defect(a: &Pair, b: &Pair, c: &Pair, grid: &DiskGrid) -> (f64, f64) {
    let left = product(&product(a, b, grid), c, grid);
    let right = product(a, &product(b, c, grid), grid);
    let (f, g, h) = (&a.map, &b.map, &c.map);
    let delta = mickelsson_c(g, h, grid) - mickelsson_c(&f.clone().times(g.clone()), h, grid)
        + mickelsson_c(f, &g.clone().times(h.clone()), grid)
        - mickelsson_c(f, g, grid);
    let centre = |x: f64| x - x.round();
    (centre(left.phase - right.phase), centre(-delta))
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentativeAudit {
    /// Phase difference between `[a'][b]` and `[ab]'` for the matching moves, mod ℤ.
    pub discrepancy: f64,
    /// Sum of the residuals that bound it.
    pub bound: f64,
    pub pass: bool,
}

/// Moves `a` by `h` before multiplying by `b`, and moves `ab` by `b⁻¹hb` after, and compares.
/// Both land on `gh·b`; the phases agree iff the conjugation-corrected four-term relation holds,
/// so the discrepancy is bounded by that residual plus two `δC` residuals.
pub fn representative_audit(
    a: &Pair,
    b: &Pair,
    k: &MapFamily,
    disk: &DiskGrid,
    cyl: &CylinderGrid,
) -> RepresentativeAudit {
    let before = product(&change_representative(a, k, disk, cyl), b, disk);
    let conj = k.clone().conjugated_by(b.map.clone());
    let after = change_representative(&product(a, b, disk), &conj, disk, cyl);
    let discrepancy = nearest_int_distance(before.phase - after.phase);

    let (g, h, kk) = (&a.map, &k.top(), &b.map);
    let c = |x: &MapFamily, y: &MapFamily| mickelsson_c(x, y, disk);
    let t = |x: &MapFamily, y: &MapFamily| x.clone().times(y.clone());
    let hk = t(h, kk);
    let conj_top = conj.top();
    let delta1 = c(h, kk) - c(&t(g, h), kk) + c(g, &hk) - c(g, h);
    let delta2 = c(kk, &conj_top) - c(&t(g, kk), &conj_top) + c(g, &hk) - c(g, kk);
    let corrected = wzw_lambda(&conj, cyl) - wzw_lambda(k, cyl) + c(kk, &conj_top) - c(h, kk);
    let bound = nearest_int_distance(corrected) + delta1.abs() + delta2.abs();
    RepresentativeAudit {
        discrepancy,
        bound,
        pass: discrepancy <= bound + 1e-12,
    }
}
