//! Pages of the spectral sequence of a group extension, computed directly from
//! the filtration of the normalized bar complex of `G`.
//!
//! `C_p^n` is spanned by the normalized `n`-cochains vanishing whenever at least
//! `n - p + 1` arguments lie in `N`. Then
//! `Z_r^{p,q} = { c in C_p^{p+q} : δc in C_{p+r} }` and
//! `E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + δ Z_{r-1}^{p-r+1,q+r-2})`.

use serde::Serialize;

use crate::cochain::{decode, Cochain, CochainSpace};
use crate::cohomology::CohomologyGroup;
use crate::error::{Error, Result};
use crate::extension_data::ExtensionData;
use crate::linalg::{kernel, AbelianGroup, Hom, Matrix, Subquotient};
use crate::module::CyclicModule;

/// Normalized bar complex of `G` with the extension filtration.
pub struct FilteredComplex<'a> {
    ext: &'a ExtensionData,
    module: &'a CyclicModule,
    spaces: Vec<CochainSpace>,
    /// `delta[n]` maps `spaces[n]` to `spaces[n + 1]`.
    delta: Vec<Matrix>,
    /// Number of arguments in `N`, per coordinate.
    in_normal: Vec<Vec<usize>>,
}

/// `E_r^{p,q}` as a subquotient of `C_p^{p+q}`.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    pub p: i64,
    pub q: i64,
    /// Coordinates of `spaces[p + q]` spanning `C_p^{p+q}`.
    level: Vec<usize>,
    quotient: Subquotient,
}

impl Page {
    pub fn group(&self) -> &AbelianGroup {
        self.quotient.group()
    }

    pub fn order(&self) -> u128 {
        self.quotient.order()
    }
}

impl<'a> FilteredComplex<'a> {
    /// Precomputes coboundaries up to `δ: C^{max_degree} -> C^{max_degree + 1}`.
    pub fn new(ext: &'a ExtensionData, module: &'a CyclicModule, max_degree: usize) -> Self {
        let g = &ext.group;
        let spaces: Vec<CochainSpace> = (0..=max_degree + 1)
            .map(|n| CochainSpace::new(g, n, true))
            .collect();
        let delta = (0..=max_degree)
            .map(|n| crate::cochain::coboundary_matrix(g, module, &spaces[n], &spaces[n + 1]))
            .collect();
        let in_normal = spaces
            .iter()
            .map(|s| {
                let mut args = vec![0; s.degree];
                s.tuples
                    .iter()
                    .map(|&t| {
                        decode(t, s.n, s.degree, &mut args);
                        args.iter().filter(|&&x| ext.in_normal(x)).count()
                    })
                    .collect()
            })
            .collect();
        Self {
            ext,
            module,
            spaces,
            delta,
            in_normal,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.module.modulus()
    }

    pub fn max_degree(&self) -> usize {
        self.delta.len() - 1
    }

    pub fn space(&self, n: usize) -> &CochainSpace {
        &self.spaces[n]
    }

    /// Coordinates of `spaces[n]` lying in `C_p^n`.
    pub fn level(&self, n: usize, p: i64) -> Vec<usize> {
        let allowed = n as i64 - p;
        (0..self.spaces[n].dim())
            .filter(|&i| self.in_normal[n][i] as i64 <= allowed)
            .collect()
    }

    /// Whether a normalized cochain lies in `C_p`.
    pub fn in_level(&self, c: &Cochain, p: i64) -> bool {
        let n = c.degree();
        let allowed = n as i64 - p;
        let s = &self.spaces[n];
        s.contains(c)
            && s.tuples
                .iter()
                .enumerate()
                .all(|(i, &t)| c.values()[t] == 0 || self.in_normal[n][i] as i64 <= allowed)
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(Error::DegreeCap {
                degree: n,
                cap: self.max_degree(),
            });
        }
        Ok(())
    }

    /// `δ` restricted to the columns `cols` and to the rows outside `C_{target}^{n+1}`.
    fn obstruction(&self, n: usize, cols: &[usize], target: i64) -> Matrix {
        let keep = self.level(n + 1, target);
        let mut inside = vec![false; self.spaces[n + 1].dim()];
        for &i in &keep {
            inside[i] = true;
        }
        let d = &self.delta[n];
        let rows: Vec<Vec<u64>> = (0..d.rows())
            .filter(|&i| !inside[i])
            .map(|i| cols.iter().map(|&j| d.get(i, j)).collect())
            .collect();
        Matrix::from_rows(cols.len(), &rows)
    }

    /// Generators of `Z_s^{a, n-a}` in full coordinates of `spaces[n]`.
    fn z_generators(&self, s: i64, a: i64, n: usize) -> Vec<Vec<u64>> {
        let cols = self.level(n, a);
        if cols.is_empty() {
            return Vec::new();
        }
        let k = kernel(self.modulus(), &self.obstruction(n, &cols, a + s));
        let dim = self.spaces[n].dim();
        k.columns()
            .into_iter()
            .map(|v| {
                let mut full = vec![0u64; dim];
                for (&j, &x) in cols.iter().zip(&v) {
                    full[j] = x;
                }
                full
            })
            .collect()
    }

    /// `E_r^{p,q}` for `r >= 0`. Outside the first quadrant the page is zero.
    pub fn page(&self, r: usize, p: i64, q: i64) -> Result<Page> {
        let m = self.modulus();
        if p < 0 || q < 0 {
            return Ok(Page {
                r,
                p,
                q,
                level: Vec::new(),
                quotient: Subquotient::kernel_of(m, &Matrix::zeros(0, 0)),
            });
        }
        let n = (p + q) as usize;
        self.check_degree(n)?;
        let ri = r as i64;
        let level = self.level(n, p);
        let mut pos = vec![None; self.spaces[n].dim()];
        for (k, &i) in level.iter().enumerate() {
            pos[i] = Some(k);
        }
        let project = |full: &[u64]| -> Result<Vec<u64>> {
            let mut out = vec![0u64; level.len()];
            for (i, &x) in full.iter().enumerate() {
                if x % m == 0 {
                    continue;
                }
                match pos[i] {
                    Some(k) => out[k] = x % m,
                    None => {
                        return Err(Error::Consistency(
                            "relation leaves the filtration level".into(),
                        ))
                    }
                }
            }
            Ok(out)
        };
        let d = self.obstruction(n, &level, p + ri);
        let mut rel = Vec::new();
        for v in self.z_generators(ri - 1, p + 1, n) {
            rel.push(project(&v)?);
        }
        if n >= 1 {
            for v in self.z_generators(ri - 1, p - ri + 1, n - 1) {
                rel.push(project(&self.delta[n - 1].mul_vec(&v, m))?);
            }
        }
        let t = Matrix::from_columns(level.len(), &rel);
        Ok(Page {
            r,
            p,
            q,
            level: level.clone(),
            quotient: Subquotient::new(m, &d, &t),
        })
    }

    /// Full-coordinate representative of generator `i` of a page.
    fn page_representative(&self, page: &Page, i: usize) -> Vec<u64> {
        let n = (page.p + page.q) as usize;
        let mut full = vec![0u64; self.spaces[n].dim()];
        for (&j, &x) in page.level.iter().zip(&page.quotient.representative(i)) {
            full[j] = x;
        }
        full
    }

    /// Representative cochain of generator `i` of a page.
    pub fn representative(&self, page: &Page, i: usize) -> Cochain {
        let n = (page.p + page.q) as usize;
        let v = self.page_representative(page, i);
        self.spaces[n].cochain(&self.ext.group, self.modulus(), &v)
    }

    /// Class of a cochain in a page, if it lies in the numerator.
    pub fn reduce(&self, page: &Page, c: &Cochain) -> Result<Vec<u64>> {
        if !self.in_level(c, page.p) {
            return Err(Error::Mismatch(
                "cochain is not in the filtration level of the page".into(),
            ));
        }
        let n = (page.p + page.q) as usize;
        let coords = self.spaces[n].coords(c);
        let local: Vec<u64> = page.level.iter().map(|&j| coords[j]).collect();
        page.quotient.reduce(&local).map_err(|_| Error::NotCocycle)
    }

    /// `d_r: E_r^{p,q} -> E_r^{p+r, q-r+1}` induced by `δ`.
    pub fn differential(&self, source: &Page) -> Result<(Hom, Page)> {
        let r = source.r as i64;
        let target = self.page(source.r, source.p + r, source.q - r + 1)?;
        let mut images = Vec::new();
        if target.order() > 1 {
            let n = (source.p + source.q) as usize;
            self.check_degree(n)?;
            for i in 0..source.group().rank() {
                let dv =
                    self.delta[n].mul_vec(&self.page_representative(source, i), self.modulus());
                let c = self.spaces[n + 1].cochain(&self.ext.group, self.modulus(), &dv);
                images.push(self.reduce(&target, &c)?);
            }
        } else {
            images = vec![Vec::new(); source.group().rank()];
        }
        Ok((
            Hom::new(source.group().clone(), target.group().clone(), images),
            target,
        ))
    }

    /// `|F^p H^n| / |F^{p+1} H^n|` for `p = 0..=n`, where `F^p H^n` is the image of
    /// the cocycles in `C_p^n`.
    pub fn filtration_quotients(&self, n: usize) -> Result<Vec<u128>> {
        self.check_degree(n)?;
        let h = cohomology_any_degree(&self.ext.group, self.module, n)?;
        let mut orders = Vec::new();
        for p in 0..=n as i64 + 1 {
            let gens: Vec<Vec<u64>> = self
                .z_generators(n as i64 + 2, p, n)
                .iter()
                .map(|v| h.reduce(&self.spaces[n].cochain(&self.ext.group, self.modulus(), v)))
                .collect::<Result<_>>()?;
            orders.push(h.group().span_order(&gens));
        }
        Ok(orders.windows(2).map(|w| w[0] / w[1]).collect())
    }
}

fn cohomology_any_degree(
    g: &crate::group::FiniteGroup,
    a: &CyclicModule,
    n: usize,
) -> Result<CohomologyGroup> {
    let opts = crate::cohomology::CohomologyOptions {
        degree_cap: n.max(crate::cohomology::DEFAULT_DEGREE_CAP),
        normalized: true,
    };
    crate::cohomology::cohomology_with(g, a, n, opts)
}

/// `H^q(N; A)` as a module over `Q` through `(c.g)(n_1..n_q) = c(g n_1 g^-1, ...).g`.
#[derive(Clone, Debug)]
pub struct FiberCohomology {
    pub degree: usize,
    pub h: CohomologyGroup,
    /// Action of each `q` on class coordinates, as images of the generators.
    pub action: Vec<Hom>,
}

impl FiberCohomology {
    pub fn new(ext: &ExtensionData, module: &CyclicModule, degree: usize) -> Result<Self> {
        let a_n = ext.restrict_module(module);
        let h = cohomology_any_degree(&ext.sub, &a_n, degree)?;
        let mut action = Vec::new();
        for q in 0..ext.quotient.order() {
            let g = ext.lift(q);
            let images = h
                .representatives(&ext.sub)
                .iter()
                .map(|c| h.reduce(&act_on_fiber(ext, module, c, g)))
                .collect::<Result<Vec<_>>>()?;
            action.push(Hom::new(h.group().clone(), h.group().clone(), images));
        }
        Ok(Self { degree, h, action })
    }

    pub fn order(&self) -> u128 {
        self.h.order()
    }

    /// The same group as `Z/d` with a cyclic `Q`-action, when it is cyclic.
    pub fn as_cyclic_module(
        &self,
        quotient: &crate::group::FiniteGroup,
    ) -> Result<(CyclicModule, CyclicCoords)> {
        let coords = CyclicCoords::new(self.h.group()).ok_or_else(|| {
            Error::NonCyclicCoefficients(format!("H^{}(N;A) = {}", self.degree, self.h.group()))
        })?;
        let gen = coords.to_coords(1);
        let mult = self
            .action
            .iter()
            .map(|hom| coords.to_int(&hom.apply(&gen)))
            .collect();
        Ok((
            CyclicModule::from_multipliers(quotient, coords.order, mult)?,
            coords,
        ))
    }
}

/// `(c.g)(n_1, ..., n_q) = c(g n_1 g^-1, ..., g n_q g^-1).g` for a cochain on `N`.
pub fn act_on_fiber(ext: &ExtensionData, module: &CyclicModule, c: &Cochain, g: usize) -> Cochain {
    let grp = &ext.group;
    let gi = grp.inv(g);
    let conj: Vec<usize> = ext
        .normal
        .iter()
        .map(|&x| {
            ext.normal_index(grp.mul(grp.mul(g, x), gi))
                .expect("N is normal")
        })
        .collect();
    Cochain::from_fn(&ext.sub, c.modulus(), c.degree(), |args| {
        let moved: Vec<usize> = args.iter().map(|&a| conj[a]).collect();
        module.act(c.get(&moved), g)
    })
}

/// Identification of a cyclic group given by prime-power factors with `Z/d`.
#[derive(Clone, Debug)]
pub struct CyclicCoords {
    pub order: u64,
    moduli: Vec<u64>,
}

impl CyclicCoords {
    /// `None` if two factors share a prime.
    pub fn new(g: &AbelianGroup) -> Option<Self> {
        let mut primes: Vec<u64> = g.factors.iter().map(|f| f.0).collect();
        primes.sort_unstable();
        if primes.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let moduli: Vec<u64> = (0..g.rank()).map(|i| g.modulus(i)).collect();
        Some(Self {
            order: moduli.iter().product(),
            moduli,
        })
    }

    pub fn to_coords(&self, k: u64) -> Vec<u64> {
        self.moduli.iter().map(|&q| k % q).collect()
    }

    pub fn to_int(&self, coords: &[u64]) -> u64 {
        // brute force CRT; orders here are small
        (0..self.order)
            .find(|&k| self.to_coords(k) == coords)
            .expect("coordinates in range")
    }
}

/// One row of the page comparison table.
#[derive(Clone, Debug, Serialize)]
pub struct PageComparison {
    pub r: usize,
    pub p: i64,
    pub q: i64,
    pub page_order: u64,
    pub expected_order: u64,
    pub agree: bool,
}

/// `|E_1^{p,q}|` against `|H^q(N;A)|^{(|Q|-1)^p}` and `|E_2^{p,q}|` against
/// `|H^p(Q; H^q(N;A))|`, for `p + q <= max_total`.
pub fn compare_e1_e2(
    ext: &ExtensionData,
    module: &CyclicModule,
    max_total: usize,
) -> Result<Vec<PageComparison>> {
    let fc = FilteredComplex::new(ext, module, max_total);
    let mut rows = Vec::new();
    let k = ext.quotient.order() as u32 - 1;
    for total in 0..=max_total as i64 {
        for p in 0..=total {
            let q = total - p;
            let fiber = FiberCohomology::new(ext, module, q as usize)?;
            let e1 = fc.page(1, p, q)?.order();
            let expected1 = fiber.order().pow(k.pow(p as u32));
            rows.push(row(1, p, q, e1, expected1));
            let (mq, _) = fiber.as_cyclic_module(&ext.quotient)?;
            let e2 = fc.page(2, p, q)?.order();
            let expected2 = cohomology_any_degree(&ext.quotient, &mq, p as usize)?.order();
            rows.push(row(2, p, q, e2, expected2));
        }
    }
    Ok(rows)
}

fn row(r: usize, p: i64, q: i64, got: u128, want: u128) -> PageComparison {
    PageComparison {
        r,
        p,
        q,
        page_order: got as u64,
        expected_order: want as u64,
        agree: got == want,
    }
}

/// Stabilized pages against the filtration quotients of `H^n(G;A)`.
pub fn convergence_check(
    ext: &ExtensionData,
    module: &CyclicModule,
    max_total: usize,
) -> Result<Vec<PageComparison>> {
    let fc = FilteredComplex::new(ext, module, max_total);
    let mut rows = Vec::new();
    for n in 0..=max_total {
        let quotients = fc.filtration_quotients(n)?;
        for (p, &want) in quotients.iter().enumerate() {
            let r = n + 2;
            let got = fc.page(r, p as i64, (n - p) as i64)?.order();
            rows.push(row(r, p as i64, (n - p) as i64, got, want));
        }
    }
    Ok(rows)
}

/// Reads a 2-cochain on `G` as a function `Q -> C^1(N;A)`:
/// `φ(c)(q)(n) = c(s(q), s(q)^-1 n s(q)) - c(n, s(q))`.
pub fn shuffle_transform(ext: &ExtensionData, c: &Cochain) -> Vec<Cochain> {
    let g = &ext.group;
    let m = c.modulus();
    (0..ext.quotient.order())
        .map(|q| {
            let b = ext.lift(q);
            Cochain::from_fn(&ext.sub, m, 1, |args| {
                let n = ext.normal[args[0]];
                let first = c.get(&[b, g.conj(n, b)]);
                let second = c.get(&[n, b]);
                (first + m - second) % m
            })
        })
        .collect()
}

/// Whether the shuffle transform induces an isomorphism `E_1^{1,1} -> C^1(Q; H^1(N;A))`.
#[derive(Clone, Debug, Serialize)]
pub struct ShuffleCheck {
    /// Relations of `E_1^{1,1}` map to zero.
    pub descends: bool,
    pub injective: bool,
    pub surjective: bool,
}

pub fn shuffle_check(ext: &ExtensionData, module: &CyclicModule) -> Result<ShuffleCheck> {
    let fc = FilteredComplex::new(ext, module, 2);
    let page = fc.page(1, 1, 1)?;
    let fiber = FiberCohomology::new(ext, module, 1)?;
    let nq = ext.quotient.order();
    let qs: Vec<usize> = (0..nq).filter(|&q| q != ext.quotient.identity()).collect();
    // target: one copy of H^1(N;A) per nonidentity q
    let mut factors = Vec::new();
    for _ in &qs {
        factors.extend(fiber.h.group().factors.iter().copied());
    }
    let target = AbelianGroup { factors };
    let classes = |c: &Cochain| -> Result<Vec<u64>> {
        let phi = shuffle_transform(ext, c);
        let mut out = Vec::new();
        for &q in &qs {
            out.extend(fiber.h.reduce(&phi[q])?);
        }
        Ok(out)
    };
    let images = (0..page.group().rank())
        .map(|i| classes(&fc.representative(&page, i)))
        .collect::<Result<Vec<_>>>()?;
    let hom = Hom::new(page.group().clone(), target.clone(), images);
    // relations: Z_0^{2,0} and δ Z_0^{1,0}
    let mut descends = true;
    for v in fc.z_generators(0, 2, 2) {
        let c = fc.space(2).cochain(&ext.group, fc.modulus(), &v);
        descends &= classes(&c)
            .map(|x| x.iter().all(|&y| y == 0))
            .unwrap_or(false);
    }
    for v in fc.z_generators(0, 1, 1) {
        let dv = fc.delta[1].mul_vec(&v, fc.modulus());
        let c = fc.space(2).cochain(&ext.group, fc.modulus(), &dv);
        descends &= classes(&c)
            .map(|x| target.normalize(&x).iter().all(|&y| y == 0))
            .unwrap_or(false);
    }
    Ok(ShuffleCheck {
        descends,
        injective: hom.kernel_order() == 1,
        surjective: hom.image_order() == target.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension_data::corpus;

    #[test]
    fn e1_and_e2_match_on_z4() {
        let e = corpus::z4_over_z2();
        let a = CyclicModule::trivial(&e.group, 2);
        for row in compare_e1_e2(&e, &a, 2).unwrap() {
            assert!(row.agree, "{row:?}");
        }
    }

    #[test]
    fn pages_converge_on_klein() {
        let e = corpus::klein_over_z2();
        let a = CyclicModule::trivial(&e.group, 2);
        for row in convergence_check(&e, &a, 2).unwrap() {
            assert!(row.agree, "{row:?}");
        }
    }

    #[test]
    fn d2_is_onto_for_z4() {
        // for Z/4 over Z/2 with Z/2 coefficients, d_2: E_2^{0,1} -> E_2^{2,0} is onto
        let e = corpus::z4_over_z2();
        let a = CyclicModule::trivial(&e.group, 2);
        let fc = FilteredComplex::new(&e, &a, 2);
        let src = fc.page(2, 0, 1).unwrap();
        let (d, _) = fc.differential(&src).unwrap();
        assert_eq!(d.image_order(), 2);
    }

    #[test]
    fn shuffle_is_an_isomorphism_on_klein() {
        let e = corpus::klein_over_z2();
        let a = CyclicModule::trivial(&e.group, 2);
        let s = shuffle_check(&e, &a).unwrap();
        assert!(s.descends && s.injective && s.surjective, "{s:?}");
    }
}
