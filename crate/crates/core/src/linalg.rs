//! Exact linear algebra over `Z/m`.
//!
//! Every computation is split along the primary decomposition
//! `Z/m = prod Z/p^e`. Over the local ring `Z/p^e` every element is a unit
//! times a power of `p`, so Smith reduction with minimal-valuation pivots
//! never needs a gcd step and never grows coefficients. Results are glued
//! back together with CRT idempotents.

use std::fmt;

/// Dense row-major matrix with entries reduced modulo some ring modulus.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn reduce(&self, modulus: u64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v % modulus).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[u64], modulus: u64) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc: u128 = 0;
                for (a, b) in self.row(i).iter().zip(x) {
                    acc += (*a as u128) * (*b as u128);
                }
                (acc % modulus as u128) as u64
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix, modulus: u64) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % modulus;
                }
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for j in 0..c {
            self.data.swap(a * c + j, b * c + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for i in 0..self.rows {
            self.data.swap(i * c + a, i * c + b);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: u64, q: u64) {
        if f == 0 {
            return;
        }
        let c = self.cols;
        for j in 0..c {
            let s = self.data[src * c + j];
            if s != 0 {
                let d = &mut self.data[dst * c + j];
                *d = (*d + f * s) % q;
            }
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: u64, q: u64) {
        if f == 0 {
            return;
        }
        let c = self.cols;
        for i in 0..self.rows {
            let s = self.data[i * c + src];
            if s != 0 {
                let d = &mut self.data[i * c + dst];
                *d = (*d + f * s) % q;
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: u64, q: u64) {
        let c = self.cols;
        for v in &mut self.data[r * c..(r + 1) * c] {
            *v = (*v * f) % q;
        }
    }

    fn scale_col(&mut self, col: usize, f: u64, q: u64) {
        let c = self.cols;
        for i in 0..self.rows {
            let v = &mut self.data[i * c + col];
            *v = (*v * f) % q;
        }
    }
}

/// Prime-power factorization of `m`, in increasing prime order.
pub fn prime_powers(m: u64) -> Vec<(u64, u32)> {
    assert!(m >= 1, "modulus must be positive");
    let mut out = Vec::new();
    let mut n = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// The local ring `Z/p^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalRing {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl LocalRing {
    pub fn new(p: u64, e: u32) -> Self {
        Self { p, e, q: p.pow(e) }
    }

    /// p-adic valuation of a residue; `e` for zero.
    pub fn val(&self, a: u64) -> u32 {
        let mut a = a % self.q;
        if a == 0 {
            return self.e;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        if k >= self.e {
            0
        } else {
            self.p.pow(k)
        }
    }

    fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }
}

/// Outcome of Smith reduction: `L * A * R = diag(p^v_0, ..., p^v_{rank-1}, 0, ...)`.
pub struct LocalSmith {
    pub ring: LocalRing,
    pub rows: usize,
    pub cols: usize,
    /// Valuations of the nonzero diagonal entries, nondecreasing.
    pub vals: Vec<u32>,
    pub left: Option<Matrix>,
    pub left_inv: Option<Matrix>,
    pub right: Option<Matrix>,
    pub right_inv: Option<Matrix>,
}

#[derive(Clone, Copy, Default)]
pub struct Track {
    pub left: bool,
    pub right: bool,
}

/// Smith reduction over `Z/p^e`. `a` must already be reduced mod `p^e`.
pub fn local_smith(ring: LocalRing, mut a: Matrix, track: Track) -> LocalSmith {
    let q = ring.q;
    let (rows, cols) = (a.rows, a.cols);
    let mut left = track.left.then(|| Matrix::identity(rows));
    let mut left_inv = track.left.then(|| Matrix::identity(rows));
    let mut right = track.right.then(|| Matrix::identity(cols));
    let mut right_inv = track.right.then(|| Matrix::identity(cols));
    let mut vals = Vec::new();

    let mut t = 0;
    while t < rows.min(cols) {
        // minimal valuation pivot in the trailing block
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for i in t..rows {
            let row = &a.data[i * cols..(i + 1) * cols];
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x == 0 {
                    continue;
                }
                let v = ring.val(x);
                if best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((pi, pj, v)) = best else { break };

        a.swap_rows(t, pi);
        if let Some(l) = left.as_mut() {
            l.swap_rows(t, pi);
        }
        if let Some(li) = left_inv.as_mut() {
            li.swap_cols(t, pi);
        }
        a.swap_cols(t, pj);
        if let Some(r) = right.as_mut() {
            r.swap_cols(t, pj);
        }
        if let Some(ri) = right_inv.as_mut() {
            ri.swap_rows(t, pj);
        }

        // normalize the pivot to exactly p^v
        let pv = ring.p.pow(v);
        let unit = a.get(t, t) / pv;
        let unit_inv = mod_inverse(unit, q).expect("pivot cofactor is a unit");
        if unit != 1 {
            a.scale_row(t, unit_inv, q);
            if let Some(l) = left.as_mut() {
                l.scale_row(t, unit_inv, q);
            }
            if let Some(li) = left_inv.as_mut() {
                li.scale_col(t, unit % q, q);
            }
        }

        for i in t + 1..rows {
            let x = a.get(i, t);
            if x == 0 {
                continue;
            }
            let f = x / pv;
            let nf = ring.neg(f);
            a.add_row(i, t, nf, q);
            if let Some(l) = left.as_mut() {
                l.add_row(i, t, nf, q);
            }
            if let Some(li) = left_inv.as_mut() {
                li.add_col(t, i, f, q);
            }
        }
        for j in t + 1..cols {
            let x = a.get(t, j);
            if x == 0 {
                continue;
            }
            let f = x / pv;
            a.set(t, j, 0);
            if let Some(r) = right.as_mut() {
                r.add_col(j, t, ring.neg(f), q);
            }
            if let Some(ri) = right_inv.as_mut() {
                ri.add_row(t, j, f, q);
            }
        }
        vals.push(v);
        t += 1;
    }

    LocalSmith {
        ring,
        rows,
        cols,
        vals,
        left,
        left_inv,
        right,
        right_inv,
    }
}

impl LocalSmith {
    pub fn rank(&self) -> usize {
        self.vals.len()
    }
}

/// CRT idempotent: `1 mod p^e`, `0 mod m / p^e`.
pub fn idempotent(m: u64, q: u64) -> u64 {
    let rest = m / q;
    if rest == 1 {
        return 1 % m;
    }
    let inv = mod_inverse(rest % q, q).expect("coprime parts");
    ((rest as u128 * inv as u128) % m as u128) as u64
}

/// Order of the `Z/m`-submodule generated by the columns of `gens`.
pub fn span_order(m: u64, gens: &Matrix) -> u128 {
    let mut order: u128 = 1;
    for (p, e) in prime_powers(m) {
        let ring = LocalRing::new(p, e);
        let s = local_smith(ring, gens.reduce(ring.q), Track::default());
        for v in s.vals {
            order *= (p as u128).pow(e - v);
        }
    }
    order
}

/// Generators (as columns) of the kernel of `a` over `Z/m`.
pub fn kernel(m: u64, a: &Matrix) -> Matrix {
    let n = a.cols;
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for (p, e) in prime_powers(m) {
        let ring = LocalRing::new(p, e);
        let idem = idempotent(m, ring.q);
        let s = local_smith(
            ring,
            a.reduce(ring.q),
            Track {
                left: false,
                right: true,
            },
        );
        let r = s.right.as_ref().unwrap();
        for t in 0..n {
            let scale = if t < s.rank() {
                let v = s.vals[t];
                if v == 0 {
                    continue;
                }
                ring.pow_p(e - v)
            } else {
                1
            };
            let col: Vec<u64> = (0..n)
                .map(|i| {
                    let local = (r.get(i, t) * scale) % ring.q;
                    ((local as u128 * idem as u128) % m as u128) as u64
                })
                .collect();
            if col.iter().any(|&x| x != 0) {
                gens.push(col);
            }
        }
    }
    Matrix::from_columns(n, &gens)
}

/// A matrix `E` over `Z/m` whose kernel is exactly the span of the columns of `gens`.
pub fn span_equations(m: u64, gens: &Matrix) -> Matrix {
    let n = gens.rows;
    let mut eqs: Vec<Vec<u64>> = Vec::new();
    for (p, e) in prime_powers(m) {
        let ring = LocalRing::new(p, e);
        let idem = idempotent(m, ring.q);
        let s = local_smith(
            ring,
            gens.reduce(ring.q),
            Track {
                left: true,
                right: false,
            },
        );
        let l = s.left.as_ref().unwrap();
        // x in span  <=>  (L x)_t divisible by p^{v_t} (t < rank), (L x)_t = 0 otherwise
        for t in 0..n {
            let scale = if t < s.rank() {
                let v = s.vals[t];
                if v == 0 {
                    continue;
                }
                ring.pow_p(e - v)
            } else {
                1
            };
            let row: Vec<u64> = (0..n)
                .map(|j| {
                    let local = (l.get(t, j) * scale) % ring.q;
                    ((local as u128 * idem as u128) % m as u128) as u64
                })
                .collect();
            if row.iter().any(|&x| x != 0) {
                eqs.push(row);
            }
        }
    }
    Matrix::from_rows(n, &eqs)
}

/// Some solution `x` of `a x = b` over `Z/m`, or `None` if the system is inconsistent.
pub fn solve(m: u64, a: &Matrix, b: &[u64]) -> Option<Vec<u64>> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let mut x = vec![0u64; n];
    for (p, e) in prime_powers(m) {
        let ring = LocalRing::new(p, e);
        let idem = idempotent(m, ring.q);
        let s = local_smith(
            ring,
            a.reduce(ring.q),
            Track {
                left: true,
                right: true,
            },
        );
        let bl: Vec<u64> = b.iter().map(|v| v % ring.q).collect();
        let lb = s.left.as_ref().unwrap().mul_vec(&bl, ring.q);
        let mut y = vec![0u64; n];
        for (t, &val) in lb.iter().enumerate() {
            if t < s.rank() {
                let pv = ring.p.pow(s.vals[t]);
                if val % pv != 0 {
                    return None;
                }
                // any solution of p^v y = val works; take val / p^v
                y[t] = val / pv;
            } else if val != 0 {
                return None;
            }
        }
        let xl = s.right.as_ref().unwrap().mul_vec(&y, ring.q);
        for (xi, li) in x.iter_mut().zip(xl) {
            *xi = ((*xi as u128 + li as u128 * idem as u128) % m as u128) as u64;
        }
    }
    Some(x)
}

/// Elementary-divisor description of a finite abelian group: each coordinate
/// lives in `Z/p^k` for the recorded prime power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    /// (prime, exponent) for each coordinate; exponents are positive.
    pub factors: Vec<(u64, u32)>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self {
            factors: prime_powers(n),
        }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn modulus(&self, i: usize) -> u64 {
        let (p, k) = self.factors[i];
        p.pow(k)
    }

    pub fn order(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, k)| (p as u128).pow(k))
            .product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Invariant factors `d_1 | d_2 | ... ` (all > 1).
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
        for &(p, k) in &self.factors {
            by_prime.entry(p).or_default().push(k);
        }
        for ks in by_prime.values_mut() {
            ks.sort_unstable_by(|a, b| b.cmp(a));
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out: Vec<u64> = (0..len)
            .map(|i| {
                by_prime
                    .iter()
                    .map(|(p, ks)| ks.get(i).map_or(1, |&k| p.pow(k)))
                    .product()
            })
            .collect();
        out.reverse();
        out
    }

    /// Reduces a coordinate vector into canonical residues.
    pub fn normalize(&self, coords: &[u64]) -> Vec<u64> {
        coords
            .iter()
            .enumerate()
            .map(|(i, &c)| c % self.modulus(i))
            .collect()
    }

    /// Order of the subgroup generated by the given coordinate vectors.
    pub fn span_order(&self, gens: &[Vec<u64>]) -> u128 {
        let mut primes: Vec<u64> = self.factors.iter().map(|f| f.0).collect();
        primes.sort_unstable();
        primes.dedup();
        let mut order: u128 = 1;
        for p in primes {
            let idx: Vec<usize> = (0..self.rank())
                .filter(|&i| self.factors[i].0 == p)
                .collect();
            let emax = idx.iter().map(|&i| self.factors[i].1).max().unwrap();
            let ring = LocalRing::new(p, emax);
            // embed Z/p^k into Z/p^emax by multiplication with p^(emax-k)
            let cols: Vec<Vec<u64>> = gens
                .iter()
                .map(|g| {
                    idx.iter()
                        .map(|&i| {
                            let k = self.factors[i].1;
                            (g[i] % p.pow(k)) * p.pow(emax - k) % ring.q
                        })
                        .collect()
                })
                .collect();
            let mat = Matrix::from_columns(idx.len(), &cols);
            let s = local_smith(ring, mat, Track::default());
            for v in s.vals {
                order *= (p as u128).pow(emax - v);
            }
        }
        order
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = self.invariant_factors();
        if inv.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = inv.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homomorphism between finite abelian groups in elementary-divisor coordinates.
/// Column `j` holds the image of the `j`-th source generator.
#[derive(Clone, Debug)]
pub struct Hom {
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    pub images: Vec<Vec<u64>>,
}

impl Hom {
    pub fn new(source: AbelianGroup, target: AbelianGroup, images: Vec<Vec<u64>>) -> Self {
        assert_eq!(images.len(), source.rank());
        let images = images.iter().map(|v| target.normalize(v)).collect();
        Self {
            source,
            target,
            images,
        }
    }

    pub fn image_order(&self) -> u128 {
        self.target.span_order(&self.images)
    }

    pub fn kernel_order(&self) -> u128 {
        self.source.order() / self.image_order()
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &Hom) -> Hom {
        assert_eq!(self.target, after.source);
        let images = self
            .images
            .iter()
            .map(|v| {
                (0..after.target.rank())
                    .map(|k| {
                        let md = after.target.modulus(k) as u128;
                        let mut acc: u128 = 0;
                        for (i, &c) in v.iter().enumerate() {
                            acc += c as u128 * after.images[i][k] as u128;
                        }
                        (acc % md) as u64
                    })
                    .collect()
            })
            .collect();
        Hom::new(self.source.clone(), after.target.clone(), images)
    }

    /// Applies the map to a coordinate vector of the source.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        (0..self.target.rank())
            .map(|k| {
                let md = self.target.modulus(k) as u128;
                let mut acc: u128 = 0;
                for (i, &c) in x.iter().enumerate() {
                    acc += c as u128 * self.images[i][k] as u128;
                }
                (acc % md) as u64
            })
            .collect()
    }
}

/// Local piece of a subquotient over `Z/p^e`.
#[derive(Clone, Debug)]
struct LocalPiece {
    ring: LocalRing,
    /// Ambient-to-`y` change of basis (`R^{-1}` of the kernel matrix).
    right_inv: Matrix,
    right: Matrix,
    /// Valuation of each diagonal pivot of the kernel matrix.
    pivot_vals: Vec<u32>,
    /// Kernel slots: (y index, w) with `y_t = p^(e-w) z`, `z in Z/p^w`.
    slots: Vec<(usize, u32)>,
    /// Left transform of the relation matrix (slots x slots) and its inverse.
    rel_left: Matrix,
    rel_left_inv: Matrix,
    /// (row of `rel_left`, exponent) for nontrivial cyclic factors.
    factors: Vec<(usize, u32)>,
}

/// Error when an ambient vector is not in the numerator of a subquotient.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("vector is not in the kernel defining the subquotient")]
pub struct NotInKernel;

/// The finite abelian group `ker(D) / span(T)` over `Z/m`, with a reduction map
/// sending kernel elements to coordinates and representatives for each generator.
#[derive(Clone, Debug)]
pub struct Subquotient {
    modulus: u64,
    ambient: usize,
    pieces: Vec<LocalPiece>,
    group: AbelianGroup,
    /// (piece index, factor index within piece) per global coordinate.
    index: Vec<(usize, usize)>,
}

impl Subquotient {
    /// `ker(d) / span(columns of t)`. Every column of `t` must lie in `ker(d)`.
    pub fn new(modulus: u64, d: &Matrix, t: &Matrix) -> Self {
        let ambient = d.cols;
        assert_eq!(
            t.rows, ambient,
            "relation vectors must live in the ambient space"
        );
        let mut pieces = Vec::new();
        let mut factors = Vec::new();
        let mut index = Vec::new();
        for (p, e) in prime_powers(modulus) {
            let ring = LocalRing::new(p, e);
            let piece = LocalPiece::build(ring, &d.reduce(ring.q), &t.reduce(ring.q));
            for (k, &(_, f)) in piece.factors.iter().enumerate() {
                factors.push((p, f));
                index.push((pieces.len(), k));
            }
            pieces.push(piece);
        }
        Self {
            modulus,
            ambient,
            pieces,
            group: AbelianGroup { factors },
            index,
        }
    }

    /// `ker(d)` with nothing quotiented out.
    pub fn kernel_of(modulus: u64, d: &Matrix) -> Self {
        Self::new(modulus, d, &Matrix::zeros(d.cols, 0))
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Coordinates of the class of `x`.
    pub fn reduce(&self, x: &[u64]) -> Result<Vec<u64>, NotInKernel> {
        assert_eq!(x.len(), self.ambient);
        let mut local_coords = Vec::with_capacity(self.pieces.len());
        for piece in &self.pieces {
            local_coords.push(piece.reduce(x)?);
        }
        Ok(self
            .index
            .iter()
            .map(|&(pi, k)| local_coords[pi][k])
            .collect())
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.pieces.iter().all(|p| p.reduce(x).is_ok())
    }

    /// An ambient representative of the `i`-th generator.
    pub fn representative(&self, i: usize) -> Vec<u64> {
        let (pi, k) = self.index[i];
        let piece = &self.pieces[pi];
        let idem = idempotent(self.modulus, piece.ring.q);
        piece
            .representative(k)
            .into_iter()
            .map(|v| ((v as u128 * idem as u128) % self.modulus as u128) as u64)
            .collect()
    }

    pub fn representatives(&self) -> Vec<Vec<u64>> {
        (0..self.group.rank())
            .map(|i| self.representative(i))
            .collect()
    }

    /// Ambient element with the given coordinates.
    pub fn element(&self, coords: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.ambient];
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let r = self.representative(i);
            for (o, v) in out.iter_mut().zip(r) {
                *o = ((*o as u128 + c as u128 * v as u128) % self.modulus as u128) as u64;
            }
        }
        out
    }
}

impl LocalPiece {
    fn build(ring: LocalRing, d: &Matrix, t: &Matrix) -> Self {
        let q = ring.q;
        let n = d.cols;
        let s = local_smith(
            ring,
            d.clone(),
            Track {
                left: false,
                right: true,
            },
        );
        let right = s.right.unwrap();
        let right_inv = s.right_inv.unwrap();
        let mut slots = Vec::new();
        for idx in 0..n {
            if idx < s.vals.len() {
                let v = s.vals[idx];
                if v > 0 {
                    slots.push((idx, v));
                }
            } else {
                slots.push((idx, ring.e));
            }
        }
        // relations: p^w on each slot plus the z-coordinates of T
        let ns = slots.len();
        let y = right_inv.mul(t, q);
        let mut rel = Matrix::zeros(ns, ns + t.cols);
        for (si, &(yi, w)) in slots.iter().enumerate() {
            rel.set(si, si, ring.pow_p(w));
            let div = ring.p.pow(ring.e - w);
            for j in 0..t.cols {
                let val = y.get(yi, j);
                assert!(val % div == 0, "relation vector outside the kernel");
                rel.set(si, ns + j, val / div);
            }
        }
        for (idx, &v) in s.vals.iter().enumerate() {
            if v == 0 {
                for j in 0..t.cols {
                    assert_eq!(y.get(idx, j), 0, "relation vector outside the kernel");
                }
            }
        }
        let rs = local_smith(
            ring,
            rel,
            Track {
                left: true,
                right: false,
            },
        );
        let mut factors = Vec::new();
        for i in 0..ns {
            let f = if i < rs.vals.len() {
                rs.vals[i]
            } else {
                ring.e
            };
            if f > 0 {
                factors.push((i, f));
            }
        }
        Self {
            ring,
            right_inv,
            right,
            pivot_vals: s.vals,
            slots,
            rel_left: rs.left.unwrap(),
            rel_left_inv: rs.left_inv.unwrap(),
            factors,
        }
    }

    fn reduce(&self, x: &[u64]) -> Result<Vec<u64>, NotInKernel> {
        let ring = self.ring;
        let xl: Vec<u64> = x.iter().map(|v| v % ring.q).collect();
        let y = self.right_inv.mul_vec(&xl, ring.q);
        for (idx, &v) in self.pivot_vals.iter().enumerate() {
            if (y[idx] * ring.pow_p(v)) % ring.q != 0 {
                return Err(NotInKernel);
            }
        }
        let z: Vec<u64> = self
            .slots
            .iter()
            .map(|&(yi, w)| y[yi] / ring.p.pow(ring.e - w))
            .collect();
        let wv = self.rel_left.mul_vec(&z, ring.q);
        Ok(self
            .factors
            .iter()
            .map(|&(row, f)| wv[row] % ring.p.pow(f))
            .collect())
    }

    fn representative(&self, k: usize) -> Vec<u64> {
        let ring = self.ring;
        let (row, _) = self.factors[k];
        let n = self.right.rows;
        let mut y = vec![0u64; n];
        for (si, &(yi, w)) in self.slots.iter().enumerate() {
            let z = self.rel_left_inv.get(si, row);
            y[yi] = (z * ring.p.pow(ring.e - w)) % ring.q;
        }
        self.right.mul_vec(&y, ring.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_span(m: u64, gens: &[Vec<u64>], n: usize) -> usize {
        let mut seen = std::collections::HashSet::new();
        seen.insert(vec![0u64; n]);
        let mut frontier = vec![vec![0u64; n]];
        while let Some(v) = frontier.pop() {
            for g in gens {
                let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
                if seen.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        seen.len()
    }

    fn all_vectors(m: u64, n: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..m).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_powers(12), vec![(2, 2), (3, 1)]);
        assert_eq!(prime_powers(1), vec![]);
        assert_eq!(prime_powers(49), vec![(7, 2)]);
    }

    #[test]
    fn smith_transforms_are_consistent() {
        let ring = LocalRing::new(2, 3);
        let a = Matrix::from_rows(
            3,
            &[vec![2, 4, 6], vec![4, 0, 2], vec![1, 3, 5], vec![6, 6, 6]],
        );
        let s = local_smith(
            ring,
            a.clone(),
            Track {
                left: true,
                right: true,
            },
        );
        let l = s.left.as_ref().unwrap();
        let r = s.right.as_ref().unwrap();
        let d = l.mul(&a, 8).mul(r, 8);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j && i < s.rank() {
                    1u64 << s.vals[i]
                } else {
                    0
                };
                assert_eq!(d.get(i, j), expect % 8, "entry ({i},{j})");
            }
        }
        assert_eq!(l.mul(s.left_inv.as_ref().unwrap(), 8), Matrix::identity(4));
        assert_eq!(r.mul(s.right_inv.as_ref().unwrap(), 8), Matrix::identity(3));
    }

    #[test]
    fn span_order_matches_enumeration() {
        for m in [2u64, 4, 6, 9, 12] {
            let gens = vec![
                vec![2 % m, 3 % m, 0],
                vec![0, 2 % m, 4 % m],
                vec![6 % m, 0, 1],
            ];
            let mat = Matrix::from_columns(3, &gens);
            assert_eq!(
                span_order(m, &mat),
                brute_span(m, &gens, 3) as u128,
                "m={m}"
            );
        }
    }

    #[test]
    fn kernel_matches_enumeration() {
        for m in [4u64, 6, 8] {
            let a = Matrix::from_rows(3, &[vec![2, 1 % m, 3 % m], vec![0, 2, 4 % m]]);
            let count = all_vectors(m, 3)
                .into_iter()
                .filter(|x| a.mul_vec(x, m).iter().all(|&v| v == 0))
                .count();
            let k = kernel(m, &a);
            assert_eq!(span_order(m, &k), count as u128, "m={m}");
            assert!(a.mul(&k, m).is_zero());
        }
    }

    #[test]
    fn span_equations_cut_out_the_span() {
        let m = 12;
        let gens = vec![vec![2, 4, 6], vec![3, 0, 9]];
        let mat = Matrix::from_columns(3, &gens);
        let eqs = span_equations(m, &mat);
        let span: std::collections::HashSet<Vec<u64>> = all_vectors(m, 3)
            .into_iter()
            .filter(|x| eqs.mul_vec(x, m).iter().all(|&v| v == 0))
            .collect();
        assert_eq!(span.len(), brute_span(m, &gens, 3));
    }

    #[test]
    fn solve_finds_solutions_and_detects_inconsistency() {
        let m = 8;
        let a = Matrix::from_rows(2, &[vec![2, 4], vec![0, 2]]);
        let x = solve(m, &a, &[6, 2]).unwrap();
        assert_eq!(a.mul_vec(&x, m), vec![6, 2]);
        assert!(solve(m, &a, &[1, 0]).is_none());
    }

    #[test]
    fn subquotient_of_cyclic_relations() {
        // ker(0) in (Z/4)^2 modulo <(2,0)> is Z/2 + Z/4
        let d = Matrix::zeros(1, 2);
        let t = Matrix::from_columns(2, &[vec![2, 0]]);
        let sq = Subquotient::new(4, &d, &t);
        assert_eq!(sq.order(), 8);
        assert_eq!(sq.group().invariant_factors(), vec![2, 4]);
        assert_eq!(sq.reduce(&[2, 0]).unwrap(), vec![0; 2]);
        for i in 0..sq.group().rank() {
            let r = sq.representative(i);
            let c = sq.reduce(&r).unwrap();
            let mut e = vec![0; sq.group().rank()];
            e[i] = 1;
            assert_eq!(c, e);
        }
    }

    #[test]
    fn subquotient_with_composite_modulus() {
        // kernel of (x,y) -> 2x + 3y over Z/6, modulo nothing
        let d = Matrix::from_rows(2, &[vec![2, 3]]);
        let sq = Subquotient::kernel_of(6, &d);
        let count = all_vectors(6, 2)
            .into_iter()
            .filter(|x| (2 * x[0] + 3 * x[1]) % 6 == 0)
            .count();
        assert_eq!(sq.order(), count as u128);
        assert!(sq.reduce(&[1, 0]).is_err());
        let r = sq.element(&vec![1; sq.group().rank()]);
        assert!(sq.contains(&r));
    }

    #[test]
    fn invariant_factor_display() {
        let g = AbelianGroup {
            factors: vec![(2, 1), (3, 1), (2, 2)],
        };
        assert_eq!(g.invariant_factors(), vec![2, 12]);
        assert_eq!(g.to_string(), "Z/2 + Z/12");
        assert_eq!(g.order(), 24);
    }
}
