//! Cyclic coefficient modules `Z/m` with a right group action.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::gcd;

/// `Z/m` with a right action `a.g`. Every automorphism of `Z/m` is multiplication
/// by a unit, so the action is stored as one multiplier per group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicModule {
    modulus: u64,
    multiplier: Vec<u64>,
}

/// On-disk module description; a missing action means the trivial one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleFile {
    pub modulus: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<u64>>>,
}

impl CyclicModule {
    pub fn trivial(group: &FiniteGroup, modulus: u64) -> Self {
        assert!(modulus >= 1);
        Self {
            modulus,
            multiplier: vec![1 % modulus; group.order()],
        }
    }

    /// Builds the module from an `m x n` table `act[a][g] = a.g`, checking the module axioms.
    pub fn from_action_table(group: &FiniteGroup, modulus: u64, act: &[Vec<u64>]) -> Result<Self> {
        let n = group.order();
        let m = modulus as usize;
        if modulus == 0 || act.len() != m || act.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidModule(format!(
                "action table must be {m} x {n}"
            )));
        }
        let multiplier: Vec<u64> = (0..n).map(|g| act[1 % m][g] % modulus).collect();
        for g in 0..n {
            for a in 0..m {
                if act[a][g] % modulus != (a as u64 * multiplier[g]) % modulus {
                    return Err(Error::InvalidModule(format!("a -> a.{g} is not additive")));
                }
            }
        }
        Self::from_multipliers(group, modulus, multiplier)
    }

    /// `a.g = a * mult[g]`.
    pub fn from_multipliers(
        group: &FiniteGroup,
        modulus: u64,
        multiplier: Vec<u64>,
    ) -> Result<Self> {
        let n = group.order();
        if multiplier.len() != n {
            return Err(Error::InvalidModule(
                "one multiplier per group element required".into(),
            ));
        }
        let multiplier: Vec<u64> = multiplier.into_iter().map(|u| u % modulus).collect();
        for (g, &u) in multiplier.iter().enumerate() {
            if gcd(u, modulus) != 1 && modulus > 1 {
                return Err(Error::InvalidModule(format!(
                    "action of element {g} is not invertible"
                )));
            }
        }
        if multiplier[group.identity()] != 1 % modulus {
            return Err(Error::InvalidModule("identity acts nontrivially".into()));
        }
        for g in 0..n {
            for h in 0..n {
                // (a.g).h = a.(gh)
                if (multiplier[g] * multiplier[h]) % modulus != multiplier[group.mul(g, h)] {
                    return Err(Error::InvalidModule(format!("(a.{g}).{h} != a.({g}{h})")));
                }
            }
        }
        Ok(Self {
            modulus,
            multiplier,
        })
    }

    pub fn from_file(group: &FiniteGroup, file: &ModuleFile) -> Result<Self> {
        match &file.action {
            None => Ok(Self::trivial(group, file.modulus)),
            Some(act) => Self::from_action_table(group, file.modulus, act),
        }
    }

    pub fn load(group: &FiniteGroup, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let file: ModuleFile =
            serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(group, &file)
    }

    pub fn to_file(&self) -> ModuleFile {
        let action = if self.is_trivial() {
            None
        } else {
            Some(
                (0..self.modulus)
                    .map(|a| {
                        self.multiplier
                            .iter()
                            .map(|&u| a * u % self.modulus)
                            .collect()
                    })
                    .collect(),
            )
        };
        ModuleFile {
            modulus: self.modulus,
            action,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn act(&self, a: u64, g: usize) -> u64 {
        (a * self.multiplier[g]) % self.modulus
    }

    #[inline]
    pub fn multiplier(&self, g: usize) -> u64 {
        self.multiplier[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.multiplier.iter().all(|&u| u == 1 % self.modulus)
    }

    /// Elements fixed by every element of `subset`.
    pub fn fixed_points(&self, subset: &[usize]) -> Vec<u64> {
        (0..self.modulus)
            .filter(|&a| subset.iter().all(|&g| self.act(a, g) == a))
            .collect()
    }

    /// The invariant submodule under `subset` (normal in the acting group) as a
    /// cyclic module `Z/m'` for `action_group`, together with the generator
    /// `a0` of the inclusion `k -> k * a0`.
    ///
    /// `lift` maps indices of `action_group` to elements of the original group.
    pub fn invariants(
        &self,
        subset: &[usize],
        action_group: &FiniteGroup,
        lift: &[usize],
    ) -> (CyclicModule, u64) {
        let fixed = self.fixed_points(subset);
        // subgroup of Z/m: generated by its smallest positive element
        let a0 = fixed
            .iter()
            .copied()
            .find(|&a| a > 0)
            .unwrap_or(self.modulus);
        let order = self.modulus / a0;
        let mult: Vec<u64> = (0..action_group.order())
            .map(|q| {
                if order == 1 {
                    return 0;
                }
                let img = self.act(a0 % self.modulus, lift[q]);
                (img / a0) % order
            })
            .collect();
        let module = CyclicModule::from_multipliers(action_group, order, mult)
            .expect("invariants form a module");
        (module, a0 % self.modulus.max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_module() {
        let g = FiniteGroup::cyclic(4);
        let a = CyclicModule::trivial(&g, 4);
        assert!(a.is_trivial());
        assert_eq!(a.act(3, 2), 3);
    }

    #[test]
    fn sign_action_of_s3() {
        let s3 = FiniteGroup::symmetric(3);
        // sign character: transpositions have order 2
        let mult: Vec<u64> = (0..6)
            .map(|g| if s3.element_order(g) == 2 { 2 } else { 1 })
            .collect();
        let a = CyclicModule::from_multipliers(&s3, 3, mult).unwrap();
        assert!(!a.is_trivial());
        let file = a.to_file();
        let back = CyclicModule::from_file(&s3, &file).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn non_homomorphic_action_rejected() {
        let z2 = FiniteGroup::cyclic(2);
        assert!(CyclicModule::from_multipliers(&z2, 5, vec![1, 2]).is_err());
        assert!(CyclicModule::from_multipliers(&z2, 4, vec![1, 2]).is_err());
    }

    #[test]
    fn invariants_of_sign_module() {
        let z2 = FiniteGroup::cyclic(2);
        let a = CyclicModule::from_multipliers(&z2, 4, vec![1, 3]).unwrap();
        assert_eq!(a.fixed_points(&[1]), vec![0, 2]);
        let trivial = FiniteGroup::cyclic(1);
        let (inv, a0) = a.invariants(&[0, 1], &trivial, &[0]);
        assert_eq!(inv.modulus(), 2);
        assert_eq!(a0, 2);
    }
}
