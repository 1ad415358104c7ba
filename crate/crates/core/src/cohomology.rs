//! Cohomology of finite groups with cyclic coefficients.

use crate::cochain::{coboundary_matrix, Cochain, CochainSpace};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{AbelianGroup, Matrix, Subquotient};
use crate::module::CyclicModule;

pub const DEFAULT_DEGREE_CAP: usize = 3;

#[derive(Clone, Copy, Debug)]
pub struct CohomologyOptions {
    pub degree_cap: usize,
    /// Use the normalized subcomplex (default) or the full bar complex.
    pub normalized: bool,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        Self {
            degree_cap: DEFAULT_DEGREE_CAP,
            normalized: true,
        }
    }
}

/// `H^p(G; A)` with a reduction map from cocycles to coordinates.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    degree: usize,
    modulus: u64,
    space: CochainSpace,
    quotient: Subquotient,
}

pub fn cohomology(
    group: &FiniteGroup,
    module: &CyclicModule,
    degree: usize,
) -> Result<CohomologyGroup> {
    cohomology_with(group, module, degree, CohomologyOptions::default())
}

pub fn cohomology_with(
    group: &FiniteGroup,
    module: &CyclicModule,
    degree: usize,
    opts: CohomologyOptions,
) -> Result<CohomologyGroup> {
    if degree > opts.degree_cap {
        return Err(Error::DegreeCap {
            degree,
            cap: opts.degree_cap,
        });
    }
    let m = module.modulus();
    let space = CochainSpace::new(group, degree, opts.normalized);
    let next = CochainSpace::new(group, degree + 1, opts.normalized);
    let d = coboundary_matrix(group, module, &space, &next);
    let t = if degree == 0 {
        Matrix::zeros(space.dim(), 0)
    } else {
        let prev = CochainSpace::new(group, degree - 1, opts.normalized);
        coboundary_matrix(group, module, &prev, &space)
    };
    let quotient = Subquotient::new(m, &d, &t);
    Ok(CohomologyGroup {
        degree,
        modulus: m,
        space,
        quotient,
    })
}

impl CohomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &AbelianGroup {
        self.quotient.group()
    }

    pub fn order(&self) -> u128 {
        self.quotient.order()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.group().invariant_factors()
    }

    pub fn space(&self) -> &CochainSpace {
        &self.space
    }

    /// Coordinates of the class of a cocycle.
    pub fn reduce(&self, c: &Cochain) -> Result<Vec<u64>> {
        if c.degree() != self.degree {
            return Err(Error::Mismatch(format!(
                "degree {} cochain for H^{}",
                c.degree(),
                self.degree
            )));
        }
        if !self.space.contains(c) {
            return Err(Error::Mismatch("cochain is not normalized".into()));
        }
        self.quotient
            .reduce(&self.space.coords(c))
            .map_err(|_| Error::NotCocycle)
    }

    pub fn is_cocycle(&self, c: &Cochain) -> bool {
        self.space.contains(c) && self.quotient.contains(&self.space.coords(c))
    }

    /// Whether a cocycle is a coboundary.
    pub fn is_trivial_class(&self, c: &Cochain) -> Result<bool> {
        Ok(self.reduce(c)?.iter().all(|&x| x == 0))
    }

    pub fn representative(&self, group: &FiniteGroup, i: usize) -> Cochain {
        self.space
            .cochain(group, self.modulus, &self.quotient.representative(i))
    }

    pub fn representatives(&self, group: &FiniteGroup) -> Vec<Cochain> {
        (0..self.group().rank())
            .map(|i| self.representative(group, i))
            .collect()
    }

    /// Cocycle with the given class coordinates.
    pub fn element(&self, group: &FiniteGroup, coords: &[u64]) -> Cochain {
        self.space
            .cochain(group, self.modulus, &self.quotient.element(coords))
    }

    /// Every class, as coordinate vectors.
    pub fn all_classes(&self) -> Vec<Vec<u64>> {
        let g = self.group();
        let mut out = vec![vec![]];
        for i in 0..g.rank() {
            let md = g.modulus(i);
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..md).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h1_of_z2_is_z2() {
        let g = FiniteGroup::cyclic(2);
        let a = CyclicModule::trivial(&g, 2);
        let h = cohomology(&g, &a, 1).unwrap();
        assert_eq!(h.order(), 2);
    }

    #[test]
    fn h2_of_z2_is_z2() {
        let g = FiniteGroup::cyclic(2);
        let a = CyclicModule::trivial(&g, 2);
        let h = cohomology(&g, &a, 2).unwrap();
        assert_eq!(h.order(), 2);
        // the one free normalized entry c(1,1) = 1 is the nontrivial class
        let c = Cochain::from_fn(&g, 2, 2, |x| u64::from(x == [1, 1]));
        assert!(!h.is_trivial_class(&c).unwrap());
    }

    #[test]
    fn h0_is_invariants() {
        let s3 = FiniteGroup::symmetric(3);
        let mult: Vec<u64> = (0..6)
            .map(|x| if s3.element_order(x) == 2 { 2 } else { 1 })
            .collect();
        let a = CyclicModule::from_multipliers(&s3, 3, mult).unwrap();
        assert_eq!(cohomology(&s3, &a, 0).unwrap().order(), 1);
        let t = CyclicModule::trivial(&s3, 3);
        assert_eq!(cohomology(&s3, &t, 0).unwrap().order(), 3);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let g = FiniteGroup::cyclic(2);
        let a = CyclicModule::trivial(&g, 2);
        assert!(matches!(
            cohomology(&g, &a, 4),
            Err(Error::DegreeCap { degree: 4, cap: 3 })
        ));
        let opts = CohomologyOptions {
            degree_cap: 4,
            ..Default::default()
        };
        assert_eq!(cohomology_with(&g, &a, 4, opts).unwrap().order(), 2);
    }

    #[test]
    fn representatives_reduce_to_unit_vectors() {
        let q8 = FiniteGroup::quaternion();
        let a = CyclicModule::trivial(&q8, 2);
        let h = cohomology(&q8, &a, 2).unwrap();
        assert_eq!(h.order(), 4);
        for (i, r) in h.representatives(&q8).iter().enumerate() {
            let mut e = vec![0; h.group().rank()];
            e[i] = 1;
            assert_eq!(h.reduce(r).unwrap(), e);
        }
    }
}
