//! Group cochains with values in a cyclic module, stored as dense tables.

use rayon::prelude::*;

use crate::group::FiniteGroup;
use crate::linalg::Matrix;
use crate::module::CyclicModule;

/// A `p`-cochain `G^p -> Z/m`. Values are indexed by argument tuples in
/// row-major order: `(g_1, ..., g_p) -> sum g_i n^(p-i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    n: usize,
    modulus: u64,
    normalized: bool,
    values: Vec<u64>,
}

/// Decodes a flat index into an argument tuple.
pub fn decode(mut index: usize, n: usize, degree: usize, out: &mut [usize]) {
    for slot in out[..degree].iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
}

pub fn encode(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &g| acc * n + g)
}

impl Cochain {
    pub fn zero(group: &FiniteGroup, modulus: u64, degree: usize) -> Self {
        let n = group.order();
        Self {
            degree,
            n,
            modulus,
            normalized: true,
            values: vec![0; n.pow(degree as u32)],
        }
    }

    /// Tabulates `f`. The normalized flag is set when the result vanishes on
    /// every tuple containing the identity.
    pub fn from_fn(
        group: &FiniteGroup,
        modulus: u64,
        degree: usize,
        f: impl Fn(&[usize]) -> u64,
    ) -> Self {
        let n = group.order();
        let mut args = vec![0usize; degree];
        let values = (0..n.pow(degree as u32))
            .map(|i| {
                decode(i, n, degree, &mut args);
                f(&args) % modulus
            })
            .collect();
        let mut c = Self {
            degree,
            n,
            modulus,
            normalized: false,
            values,
        };
        c.normalized = c.vanishes_on_identity(group.identity());
        c
    }

    pub fn from_values(group: &FiniteGroup, modulus: u64, degree: usize, values: Vec<u64>) -> Self {
        let n = group.order();
        assert_eq!(
            values.len(),
            n.pow(degree as u32),
            "value table has the wrong size"
        );
        let mut c = Self {
            degree,
            n,
            modulus,
            normalized: false,
            values: values.into_iter().map(|v| v % modulus).collect(),
        };
        c.normalized = c.vanishes_on_identity(group.identity());
        c
    }

    fn vanishes_on_identity(&self, id: usize) -> bool {
        let mut args = vec![0usize; self.degree];
        self.values.iter().enumerate().all(|(i, &v)| {
            if v == 0 {
                return true;
            }
            decode(i, self.n, self.degree, &mut args);
            !args.contains(&id)
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn group_order(&self) -> usize {
        self.n
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, args: &[usize]) -> u64 {
        self.values[encode(args, self.n)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(
            (self.degree, self.n, self.modulus),
            (other.degree, other.n, other.modulus)
        );
        let values: Vec<u64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a + b) % self.modulus)
            .collect();
        Cochain {
            normalized: self.normalized && other.normalized,
            values,
            ..*self
        }
    }

    pub fn scale(&self, k: u64) -> Cochain {
        let values = self
            .values
            .iter()
            .map(|a| a * (k % self.modulus) % self.modulus)
            .collect();
        Cochain { values, ..*self }
    }

    pub fn neg(&self) -> Cochain {
        self.scale(self.modulus - 1)
    }

    /// The bar coboundary
    /// `dc(g_1..g_{p+1}) = c(g_2..) + sum_i (-1)^i c(.., g_i g_{i+1}, ..) + (-1)^{p+1} c(g_1..g_p).g_{p+1}`.
    pub fn coboundary(&self, group: &FiniteGroup, module: &CyclicModule) -> Cochain {
        assert_eq!(group.order(), self.n);
        assert_eq!(module.modulus(), self.modulus);
        let p = self.degree;
        let n = self.n;
        let m = self.modulus;
        let size = n.pow(p as u32 + 1);
        let values: Vec<u64> = (0..size)
            .into_par_iter()
            .map_init(
                || (vec![0usize; p + 1], vec![0usize; p]),
                |(args, sub), idx| {
                    decode(idx, n, p + 1, args);
                    let mut acc = self.get(&args[1..]);
                    for i in 0..p {
                        sub[..i].copy_from_slice(&args[..i]);
                        sub[i] = group.mul(args[i], args[i + 1]);
                        sub[i + 1..].copy_from_slice(&args[i + 2..]);
                        let v = self.get(sub);
                        acc += if (i + 1) % 2 == 0 { v } else { m - v };
                    }
                    let last = module.act(self.get(&args[..p]), args[p]);
                    acc += if (p + 1) % 2 == 0 { last } else { m - last };
                    acc % m
                },
            )
            .collect();
        Cochain {
            degree: p + 1,
            n,
            modulus: m,
            normalized: self.normalized,
            values,
        }
    }

    /// `(c ∪ c')(g_1..g_{p+q}) = pairing(c(g_1..g_p).(g_{p+1}...g_{p+q}), c'(g_{p+1}..g_{p+q}))`.
    pub fn cup(
        &self,
        other: &Cochain,
        group: &FiniteGroup,
        module: &CyclicModule,
        pairing: impl Fn(u64, u64) -> u64 + Sync,
    ) -> Cochain {
        let (p, q) = (self.degree, other.degree);
        let n = self.n;
        let m = self.modulus;
        let size = n.pow((p + q) as u32);
        let values: Vec<u64> = (0..size)
            .into_par_iter()
            .map_init(
                || vec![0usize; p + q],
                |args, idx| {
                    decode(idx, n, p + q, args);
                    let tail = args[p..]
                        .iter()
                        .fold(group.identity(), |acc, &g| group.mul(acc, g));
                    let left = module.act(self.get(&args[..p]), tail);
                    pairing(left, other.get(&args[p..])) % m
                },
            )
            .collect();
        let mut c = Cochain {
            degree: p + q,
            n,
            modulus: m,
            normalized: false,
            values,
        };
        c.normalized = c.vanishes_on_identity(group.identity());
        c
    }

    /// Restriction along an injective map `H -> G` given by `embed[h]`.
    pub fn pullback(&self, target: &FiniteGroup, embed: &[usize]) -> Cochain {
        let mut c = Cochain::from_fn(target, self.modulus, self.degree, |args| {
            let mapped: Vec<usize> = args.iter().map(|&h| embed[h]).collect();
            self.get(&mapped)
        });
        c.normalized = c.vanishes_on_identity(target.identity());
        c
    }

    /// Composes every value with a homomorphism `Z/m -> Z/m'`, `a -> a * factor`.
    pub fn map_values(&self, modulus: u64, factor: u64) -> Cochain {
        let values = self
            .values
            .iter()
            .map(|&a| (a % modulus) * (factor % modulus) % modulus)
            .collect();
        Cochain {
            modulus,
            values,
            ..*self
        }
    }
}

/// Coordinates on the space of (normalized or full) `p`-cochains.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    pub n: usize,
    pub degree: usize,
    pub normalized: bool,
    /// Flat tuple index of each coordinate.
    pub tuples: Vec<usize>,
    /// Inverse of `tuples`.
    pub position: Vec<Option<usize>>,
}

impl CochainSpace {
    pub fn new(group: &FiniteGroup, degree: usize, normalized: bool) -> Self {
        Self::restricted(
            group,
            degree,
            |args| !normalized || !args.contains(&group.identity()),
            normalized,
        )
    }

    /// Coordinates on tuples satisfying `keep`.
    pub fn restricted(
        group: &FiniteGroup,
        degree: usize,
        keep: impl Fn(&[usize]) -> bool,
        normalized: bool,
    ) -> Self {
        let n = group.order();
        let size = n.pow(degree as u32);
        let mut args = vec![0usize; degree];
        let mut tuples = Vec::new();
        let mut position = vec![None; size];
        for idx in 0..size {
            decode(idx, n, degree, &mut args);
            if keep(&args) {
                position[idx] = Some(tuples.len());
                tuples.push(idx);
            }
        }
        Self {
            n,
            degree,
            normalized,
            tuples,
            position,
        }
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn coords(&self, c: &Cochain) -> Vec<u64> {
        self.tuples.iter().map(|&t| c.values[t]).collect()
    }

    /// Whether `c` vanishes off this coordinate subspace.
    pub fn contains(&self, c: &Cochain) -> bool {
        c.values
            .iter()
            .enumerate()
            .all(|(i, &v)| v == 0 || self.position[i].is_some())
    }

    pub fn cochain(&self, group: &FiniteGroup, modulus: u64, coords: &[u64]) -> Cochain {
        let mut values = vec![0u64; self.n.pow(self.degree as u32)];
        for (&t, &v) in self.tuples.iter().zip(coords) {
            values[t] = v % modulus;
        }
        Cochain::from_values(group, modulus, self.degree, values)
    }
}

/// Matrix of `δ: source -> target` where `target` coordinates are a subset of
/// tuples of degree `source.degree + 1`.
pub fn coboundary_matrix(
    group: &FiniteGroup,
    module: &CyclicModule,
    source: &CochainSpace,
    target: &CochainSpace,
) -> Matrix {
    assert_eq!(target.degree, source.degree + 1);
    let p = source.degree;
    let n = group.order();
    let m = module.modulus();
    let rows: Vec<Vec<u64>> = target
        .tuples
        .par_iter()
        .map(|&idx| {
            let mut row = vec![0u64; source.dim()];
            let mut args = vec![0usize; p + 1];
            decode(idx, n, p + 1, &mut args);
            let mut add = |tuple: &[usize], coeff: u64| {
                if let Some(col) = source.position[encode(tuple, n)] {
                    row[col] = (row[col] + coeff) % m;
                }
            };
            add(&args[1..], 1);
            let mut sub = vec![0usize; p];
            for i in 0..p {
                sub[..i].copy_from_slice(&args[..i]);
                sub[i] = group.mul(args[i], args[i + 1]);
                sub[i + 1..].copy_from_slice(&args[i + 2..]);
                add(&sub, if (i + 1) % 2 == 0 { 1 } else { m - 1 });
            }
            let u = module.multiplier(args[p]);
            add(&args[..p], if (p + 1) % 2 == 0 { u } else { (m - u) % m });
            row
        })
        .collect();
    Matrix::from_rows(source.dim(), &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cochain_has_zero_coboundary() {
        let g = FiniteGroup::cyclic(3);
        let a = CyclicModule::trivial(&g, 3);
        let c = Cochain::zero(&g, 3, 2);
        assert!(c.coboundary(&g, &a).is_zero());
    }

    #[test]
    fn nontrivial_character_is_a_cocycle() {
        let g = FiniteGroup::cyclic(2);
        let a = CyclicModule::trivial(&g, 2);
        let c = Cochain::from_fn(&g, 2, 1, |x| x[0] as u64);
        let dc = c.coboundary(&g, &a);
        assert!(dc.is_zero());
        // direct evaluation: dc(x,x) = c(x) - c(0) + c(x) = 0
        assert_eq!(dc.get(&[1, 1]), 0);
    }

    #[test]
    fn coboundary_preserves_normalization() {
        let g = FiniteGroup::cyclic(4);
        let a = CyclicModule::trivial(&g, 4);
        let c = Cochain::from_fn(&g, 4, 2, |x| {
            if x.contains(&0) {
                0
            } else {
                (x[0] * 3 + x[1]) as u64
            }
        });
        assert!(c.is_normalized());
        assert!(c.coboundary(&g, &a).is_normalized());
    }

    #[test]
    fn matrix_agrees_with_table() {
        let g = FiniteGroup::symmetric(3);
        let mult: Vec<u64> = (0..6)
            .map(|x| if g.element_order(x) == 2 { 2 } else { 1 })
            .collect();
        let a = CyclicModule::from_multipliers(&g, 3, mult).unwrap();
        let src = CochainSpace::new(&g, 2, false);
        let dst = CochainSpace::new(&g, 3, false);
        let mat = coboundary_matrix(&g, &a, &src, &dst);
        let c = Cochain::from_fn(&g, 3, 2, |x| ((x[0] * 7 + x[1] * 5) % 3) as u64);
        let via_matrix = mat.mul_vec(&src.coords(&c), 3);
        assert_eq!(via_matrix, dst.coords(&c.coboundary(&g, &a)));
    }
}
