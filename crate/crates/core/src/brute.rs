//! Independent cohomology orders by enumerating every normalized cochain. Only
//! usable for tiny groups; it shares no code with the Smith-form engine beyond
//! the group table and the module action.

use std::collections::HashSet;

use crate::group::FiniteGroup;
use crate::module::CyclicModule;

/// Refuses enumerations above this many cochains.
pub const MAX_ENUMERATION: u128 = 1 << 22;

fn tuples(n: usize, degree: usize, id: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..degree {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).filter(move |&g| g != id).map(move |g| {
                    let mut u = t.clone();
                    u.push(g);
                    u
                })
            })
            .collect();
    }
    out
}

/// Value of `δc` at `args`, with `c` given on the normalized tuples of its degree.
fn coboundary_at(
    g: &FiniteGroup,
    a: &CyclicModule,
    c: &dyn Fn(&[usize]) -> u64,
    args: &[usize],
) -> u64 {
    let m = a.modulus();
    let p = args.len() - 1;
    let mut acc = c(&args[1..]);
    for i in 0..p {
        let mut t: Vec<usize> = args[..i].to_vec();
        t.push(g.mul(args[i], args[i + 1]));
        t.extend_from_slice(&args[i + 2..]);
        let v = c(&t);
        acc = if i % 2 == 0 { acc + m - v } else { acc + v };
    }
    let last = a.act(c(&args[..p]), args[p]);
    acc = if p % 2 == 0 {
        acc + m - last
    } else {
        acc + last
    };
    acc % m
}

/// All normalized cochains of a degree, each as a value vector over `tuples`.
fn all_cochains(count: usize, m: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (m as u128).pow(count as u32);
    (0..total).map(move |mut k| {
        (0..count)
            .map(|_| {
                let v = (k % m as u128) as u64;
                k /= m as u128;
                v
            })
            .collect()
    })
}

/// `|Z^p| / |B^p|` by exhaustive enumeration, or `None` if too large.
pub fn cohomology_order(g: &FiniteGroup, a: &CyclicModule, degree: usize) -> Option<u128> {
    let n = g.order();
    let id = g.identity();
    let m = a.modulus();
    let here = tuples(n, degree, id);
    let next = tuples(n, degree + 1, id);
    if (m as u128).checked_pow(here.len() as u32)? > MAX_ENUMERATION {
        return None;
    }
    let lookup = |tup: &[Vec<usize>], vals: &[u64], args: &[usize]| -> u64 {
        if args.contains(&id) {
            return 0;
        }
        tup.iter().position(|t| t == args).map_or(0, |i| vals[i])
    };
    let cocycles = all_cochains(here.len(), m)
        .filter(|vals| {
            let c = |x: &[usize]| lookup(&here, vals, x);
            next.iter().all(|t| coboundary_at(g, a, &c, t) == 0)
        })
        .count() as u128;
    let boundaries: HashSet<Vec<u64>> = if degree == 0 {
        std::iter::once(vec![0; here.len()]).collect()
    } else {
        let prev = tuples(n, degree - 1, id);
        if (m as u128).checked_pow(prev.len() as u32)? > MAX_ENUMERATION {
            return None;
        }
        all_cochains(prev.len(), m)
            .map(|vals| {
                let b = |x: &[usize]| lookup(&prev, &vals, x);
                here.iter().map(|t| coboundary_at(g, a, &b, t)).collect()
            })
            .collect()
    };
    Some(cocycles / boundaries.len() as u128)
}

/// Number of homomorphisms `G -> Z/m`.
pub fn hom_count(g: &FiniteGroup, m: u64) -> u128 {
    let n = g.order();
    all_cochains(n, m)
        .filter(|f| (0..n).all(|x| (0..n).all(|y| f[g.mul(x, y)] == (f[x] + f[y]) % m)))
        .count() as u128
}
