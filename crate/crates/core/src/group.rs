//! Finite groups given by Cayley tables.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group stored as a multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<usize>,
    n: usize,
    id: usize,
    inv: Vec<usize>,
    labels: Vec<String>,
}

/// On-disk Cayley table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CayleyTable {
    pub labels: Vec<String>,
    pub mul: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Checks the group axioms and builds the group. Errors name the offending elements.
    pub fn validate(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidGroup(format!(
                "{} labels for a table of order {n}",
                labels.len()
            )));
        }
        let unique: BTreeSet<&String> = labels.iter().collect();
        if unique.len() != n {
            return Err(Error::InvalidGroup("labels are not unique".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {a} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!(
                    "row {a} contains out-of-range index {bad}"
                )));
            }
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| mul[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        let mut inv = vec![0; n];
        for (g, slot) in inv.iter_mut().enumerate() {
            *slot = (0..n)
                .find(|&h| at(g, h) == id && at(h, g) == id)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
        }
        Ok(Self {
            mul,
            n,
            id,
            inv,
            labels,
        })
    }

    /// Builds a group from a closed multiplication law on `0..n`, validating it.
    pub fn from_fn(labels: Vec<String>, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = labels.len();
        let table = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        Self::validate(labels, table)
    }

    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::from_fn(labels, |a, b| (a + b) % n).expect("cyclic group")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let nb = b.order();
        let labels = (0..a.order() * nb)
            .map(|k| format!("({},{})", a.label(k / nb), b.label(k % nb)))
            .collect();
        Self::from_fn(labels, |x, y| {
            a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
        })
        .expect("direct product")
    }

    /// The quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion() -> Self {
        // element index = 2 * unit + sign, unit in {1, i, j, k}
        const UNIT_MUL: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let names = ["1", "i", "j", "k"];
        let labels = (0..8)
            .map(|x| format!("{}{}", if x % 2 == 1 { "-" } else { "" }, names[x / 2]))
            .collect();
        Self::from_fn(labels, |x, y| {
            let (u, neg) = UNIT_MUL[x / 2][y / 2];
            let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
            2 * u + usize::from(sign)
        })
        .expect("quaternion group")
    }

    /// Symmetric group on `k` letters, elements in lexicographic permutation order.
    pub fn symmetric(k: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..k {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    let free: Vec<usize> = (0..k).filter(|x| !p.contains(x)).collect();
                    free.into_iter().map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let index: HashMap<Vec<usize>, usize> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let labels = perms.iter().map(|p| format!("{p:?}")).collect();
        // (a * b)(x) = a(b(x))
        Self::from_fn(labels, |a, b| {
            let c: Vec<usize> = (0..k).map(|x| perms[a][perms[b][x]]).collect();
            index[&c]
        })
        .expect("symmetric group")
    }

    /// `Z/n ⋊ Z/k` where the generator of `Z/k` acts by multiplication with `r`.
    pub fn semidirect_cyclic(n: usize, k: usize, r: usize) -> Result<Self> {
        let labels = (0..n * k)
            .map(|x| format!("({},{})", x / k, x % k))
            .collect();
        let pow = |b: usize| (0..b).fold(1usize, |acc, _| acc * r % n);
        Self::from_fn(labels, |x, y| {
            let (a1, b1) = (x / k, x % k);
            let (a2, b2) = (y / k, y % k);
            let a = (a1 + pow(b1) * a2) % n;
            a * k + (b1 + b2) % k
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.id
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `g^{-1} h g`
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.id {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders.
    pub fn order_fingerprint(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.n).map(|g| self.element_order(g)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&z| (0..self.n).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Subgroup generated by the given elements, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.id]);
        let mut frontier = vec![self.id];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        s.contains(&self.id)
            && s.iter()
                .all(|&a| s.iter().all(|&b| s.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        self.is_subgroup(set)
            && s.iter()
                .all(|&h| (0..self.n).all(|g| s.contains(&self.conj(h, g))))
    }

    /// Restriction of the table to a subgroup, re-indexed in the order of `elements`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<FiniteGroup> {
        if !self.is_subgroup(elements) {
            return Err(Error::InvalidSubgroup(
                "subset is not closed under the group law".into(),
            ));
        }
        let pos: HashMap<usize, usize> =
            elements.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let labels = elements.iter().map(|&g| self.labels[g].clone()).collect();
        FiniteGroup::from_fn(labels, |a, b| pos[&self.mul(elements[a], elements[b])])
    }

    pub fn to_table(&self) -> CayleyTable {
        CayleyTable {
            labels: self.labels.clone(),
            mul: (0..self.n)
                .map(|a| (0..self.n).map(|b| self.mul(a, b)).collect())
                .collect(),
        }
    }

    pub fn from_table(table: CayleyTable) -> Result<Self> {
        Self::validate(table.labels, table.mul)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let table: CayleyTable =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_table(table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_table()).expect("serializable table")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Searches for an isomorphism `self -> other` by backtracking on generator images.
    pub fn find_isomorphism(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.n != other.n || self.order_fingerprint() != other.order_fingerprint() {
            return None;
        }
        // greedy generating set
        let mut gens = Vec::new();
        let mut span = vec![self.id];
        for g in 0..self.n {
            if !span.contains(&g) {
                gens.push(g);
                span = self.generated(&gens);
            }
        }
        let mut images = Vec::new();
        self.extend_iso(other, &gens, &mut images)
    }

    fn extend_iso(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if images.len() == gens.len() {
            return self.hom_from_generators(other, gens, images).filter(|map| {
                let img: BTreeSet<usize> = map.iter().copied().collect();
                img.len() == self.n
            });
        }
        let g = gens[images.len()];
        let ord = self.element_order(g);
        for cand in 0..other.n {
            if other.element_order(cand) != ord || images.contains(&cand) {
                continue;
            }
            images.push(cand);
            if let Some(m) = self.extend_iso(other, gens, images) {
                return Some(m);
            }
            images.pop();
        }
        None
    }

    /// Extends generator images to a homomorphism if consistent.
    fn hom_from_generators(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &[usize],
    ) -> Option<Vec<usize>> {
        let mut map: Vec<Option<usize>> = vec![None; self.n];
        map[self.id] = Some(other.identity());
        let mut frontier = vec![self.id];
        while let Some(x) = frontier.pop() {
            let fx = map[x].unwrap();
            for (&g, &fg) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = other.mul(fx, fg);
                match map[y] {
                    None => {
                        map[y] = Some(fy);
                        frontier.push(y);
                    }
                    Some(v) if v != fy => return None,
                    _ => {}
                }
            }
        }
        let map: Vec<usize> = map.into_iter().collect::<Option<_>>()?;
        for a in 0..self.n {
            for b in 0..self.n {
                if map[self.mul(a, b)] != other.mul(map[a], map[b]) {
                    return None;
                }
            }
        }
        Some(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_validate() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(z2.order(), 2);
        assert_eq!(z2.identity(), 0);
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.inv(1), 3);
        assert!(z4.is_abelian());
    }

    #[test]
    fn broken_table_names_the_triple() {
        let mut t = FiniteGroup::cyclic(3).to_table();
        t.mul[1][1] = 0;
        match FiniteGroup::from_table(t) {
            Err(Error::NotAssociative { a, b, c }) => {
                assert!(a < 3 && b < 3 && c < 3);
            }
            Err(Error::InvalidGroup(_)) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // commutative loop of order 3 without associativity (a Latin square with identity 0)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let labels = (0..5).map(|i| i.to_string()).collect();
        assert!(matches!(
            FiniteGroup::validate(labels, t),
            Err(Error::NotAssociative { .. })
        ));
    }

    #[test]
    fn quaternion_group_structure() {
        let q8 = FiniteGroup::quaternion();
        assert_eq!(q8.order(), 8);
        assert!(!q8.is_abelian());
        assert_eq!(q8.center().len(), 2);
        assert_eq!(q8.order_fingerprint(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn symmetric_group_structure() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.order_fingerprint(), vec![1, 2, 2, 2, 3, 3]);
        let a3: Vec<usize> = (0..6).filter(|&g| s3.element_order(g) != 2).collect();
        assert!(s3.is_normal(&a3));
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroup::quaternion();
        let back = FiniteGroup::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn isomorphism_search() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        let v4 = FiniteGroup::direct_product(&z2, &z2);
        assert!(z4.find_isomorphism(&v4).is_none());
        let z6 = FiniteGroup::cyclic(6);
        let z2z3 = FiniteGroup::direct_product(&z2, &FiniteGroup::cyclic(3));
        let iso = z6.find_isomorphism(&z2z3).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(iso[z6.mul(a, b)], z2z3.mul(iso[a], iso[b]));
            }
        }
    }

    #[test]
    fn semidirect_product_is_nonabelian() {
        let g = FiniteGroup::semidirect_cyclic(7, 3, 2).unwrap();
        assert_eq!(g.order(), 21);
        assert!(!g.is_abelian());
    }
}
