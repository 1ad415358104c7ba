//! Short exact sequences `1 -> N -> G -> Q -> 1` of finite groups.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::module::CyclicModule;

/// A group with a normal subgroup, its quotient, the projection and a set-theoretic section.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub group: FiniteGroup,
    /// Elements of `N` in increasing index order; `N` as a group is indexed by position here.
    pub normal: Vec<usize>,
    pub sub: FiniteGroup,
    pub quotient: FiniteGroup,
    /// `G -> Q`
    pub proj: Vec<usize>,
    /// `Q -> G`, with `section[id] = id`.
    pub section: Vec<usize>,
    /// Position of each element of `G` inside `normal`.
    npos: Vec<Option<usize>>,
}

impl ExtensionData {
    /// Builds the quotient by cosets of `normal`, choosing the smallest index in
    /// each coset as section value.
    pub fn new(group: FiniteGroup, normal: &[usize]) -> Result<Self> {
        let mut normal: Vec<usize> = normal.to_vec();
        normal.sort_unstable();
        normal.dedup();
        if !group.is_normal(&normal) {
            return Err(Error::InvalidSubgroup(
                "subset is not a normal subgroup".into(),
            ));
        }
        let n = group.order();
        let sub = group.subgroup(&normal)?;
        // cosets gN, keyed by their smallest element
        let mut coset_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &x in &normal {
                coset_of[group.mul(g, x)] = idx;
            }
        }
        // put the identity coset first
        let id_coset = coset_of[group.identity()];
        reps.swap(0, id_coset);
        let mut renum = BTreeMap::new();
        for (i, &r) in reps.iter().enumerate() {
            renum.insert(coset_of[r], i);
        }
        let proj: Vec<usize> = coset_of.iter().map(|c| renum[c]).collect();
        let labels: Vec<String> = reps
            .iter()
            .map(|&r| format!("[{}]", group.label(r)))
            .collect();
        let quotient = FiniteGroup::from_fn(labels, |a, b| proj[group.mul(reps[a], reps[b])])?;
        let mut npos = vec![None; n];
        for (i, &x) in normal.iter().enumerate() {
            npos[x] = Some(i);
        }
        Ok(Self {
            group,
            normal,
            sub,
            quotient,
            proj,
            section: reps,
            npos,
        })
    }

    /// Replaces the section; it must split the projection and fix the identity.
    pub fn with_section(&self, section: Vec<usize>) -> Result<Self> {
        if section.len() != self.quotient.order() {
            return Err(Error::Mismatch("section has the wrong length".into()));
        }
        if section[self.quotient.identity()] != self.group.identity() {
            return Err(Error::Mismatch(
                "section must send the identity to the identity".into(),
            ));
        }
        if section.iter().enumerate().any(|(q, &g)| self.proj[g] != q) {
            return Err(Error::Mismatch(
                "section does not split the projection".into(),
            ));
        }
        Ok(Self {
            section,
            ..self.clone()
        })
    }

    /// Same extension with a section drawn at random from each coset.
    pub fn random_section(&self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut section = vec![self.group.identity(); self.quotient.order()];
        for (q, slot) in section.iter_mut().enumerate() {
            if q == self.quotient.identity() {
                continue;
            }
            let coset: Vec<usize> = (0..self.group.order())
                .filter(|&g| self.proj[g] == q)
                .collect();
            *slot = *coset.choose(&mut rng).unwrap();
        }
        self.with_section(section)
            .expect("random coset representatives split the projection")
    }

    #[inline]
    pub fn in_normal(&self, g: usize) -> bool {
        self.npos[g].is_some()
    }

    /// Index of `g` inside `N`, if `g ∈ N`.
    #[inline]
    pub fn normal_index(&self, g: usize) -> Option<usize> {
        self.npos[g]
    }

    /// Lift of `q` through the section.
    #[inline]
    pub fn lift(&self, q: usize) -> usize {
        self.section[q]
    }

    /// `A` restricted to `N`.
    pub fn restrict_module(&self, module: &CyclicModule) -> CyclicModule {
        let mult = self.normal.iter().map(|&g| module.multiplier(g)).collect();
        CyclicModule::from_multipliers(&self.sub, module.modulus(), mult)
            .expect("restriction of a module")
    }

    /// `A^N` as a `Q`-module, with the generator `a0` of its inclusion into `A`.
    pub fn invariant_module(&self, module: &CyclicModule) -> (CyclicModule, u64) {
        module.invariants(&self.normal, &self.quotient, &self.section)
    }

    /// Whether `N` lies in the center of `G`.
    pub fn is_central(&self) -> bool {
        self.normal
            .iter()
            .all(|&x| (0..self.group.order()).all(|g| self.group.mul(x, g) == self.group.mul(g, x)))
    }
}

/// Named corpus extensions used throughout the verification suites.
pub mod corpus {
    use super::*;

    /// `Z/4` over its subgroup of order 2.
    pub fn z4_over_z2() -> ExtensionData {
        ExtensionData::new(FiniteGroup::cyclic(4), &[0, 2]).unwrap()
    }

    /// `Z/2 x Z/2` over the first factor.
    pub fn klein_over_z2() -> ExtensionData {
        let z2 = FiniteGroup::cyclic(2);
        let v = FiniteGroup::direct_product(&z2, &z2);
        // elements (a,b) -> 2a + b; the first factor is {(0,0), (1,0)}
        ExtensionData::new(v, &[0, 2]).unwrap()
    }

    /// `Q8` over its center `{±1}`.
    pub fn q8_over_center() -> ExtensionData {
        let q8 = FiniteGroup::quaternion();
        let center = q8.center();
        ExtensionData::new(q8, &center).unwrap()
    }

    /// `S3` over `A3 = Z/3`.
    pub fn s3_over_a3() -> ExtensionData {
        let s3 = FiniteGroup::symmetric(3);
        let a3: Vec<usize> = (0..6).filter(|&g| s3.element_order(g) != 2).collect();
        ExtensionData::new(s3, &a3).unwrap()
    }

    pub fn by_name(name: &str) -> Option<ExtensionData> {
        match name {
            "z4" | "z4-z2" => Some(z4_over_z2()),
            "klein" | "z2xz2-z2" => Some(klein_over_z2()),
            "q8" | "q8-center" => Some(q8_over_center()),
            "s3" | "s3-z3" => Some(s3_over_a3()),
            _ => None,
        }
    }

    pub const NAMES: [&str; 4] = ["z4-z2", "z2xz2-z2", "q8-center", "s3-z3"];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotients_have_expected_orders() {
        assert_eq!(corpus::z4_over_z2().quotient.order(), 2);
        assert_eq!(corpus::klein_over_z2().quotient.order(), 2);
        assert_eq!(corpus::q8_over_center().quotient.order(), 4);
        assert_eq!(corpus::s3_over_a3().quotient.order(), 2);
        let q = corpus::q8_over_center().quotient;
        assert!(q.is_abelian());
        assert_eq!(q.order_fingerprint(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn projection_is_a_homomorphism_with_kernel_n() {
        for name in corpus::NAMES {
            let e = corpus::by_name(name).unwrap();
            let g = &e.group;
            for a in 0..g.order() {
                for b in 0..g.order() {
                    assert_eq!(e.proj[g.mul(a, b)], e.quotient.mul(e.proj[a], e.proj[b]));
                }
                assert_eq!(e.proj[a] == e.quotient.identity(), e.in_normal(a));
            }
            for q in 0..e.quotient.order() {
                assert_eq!(e.proj[e.section[q]], q);
            }
            assert_eq!(e.section[e.quotient.identity()], g.identity());
        }
    }

    #[test]
    fn non_normal_subgroup_rejected() {
        let s3 = FiniteGroup::symmetric(3);
        let t = (0..6).find(|&g| s3.element_order(g) == 2).unwrap();
        assert!(ExtensionData::new(s3, &[0, t]).is_err());
    }

    #[test]
    fn random_sections_split() {
        let e = corpus::q8_over_center();
        let r = e.random_section(7);
        for q in 0..r.quotient.order() {
            assert_eq!(r.proj[r.section[q]], q);
        }
    }
}
