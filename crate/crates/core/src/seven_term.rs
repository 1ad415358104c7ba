//! Inflation, restriction, the transgressions and the map `ρ`, assembled into the
//! five- and seven-term exact sequences
//!
//! `0 -> H1(Q;A^N) -> H1(G;A) -> H1(N;A)^G -> H2(Q;A^N) -> Ker(res) -> H1(Q;H1(N;A)) -> H3(Q;A^N)`.
//!
//! `H1(N;A)` carries the right action `(c.g)(n) = c(g n g^-1).g` throughout. With
//! that convention the component of a `Q`-cochain at `q` is read off at the
//! representative `s(q)^-1` of the coset `q^-1`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cochain::{coboundary_matrix, Cochain, CochainSpace};
use crate::cohomology::{cohomology, CohomologyGroup};
use crate::error::{Error, Result};
use crate::extension_data::ExtensionData;
use crate::linalg::{solve, span_equations, AbelianGroup, Hom, Matrix, Subquotient};
use crate::module::CyclicModule;
use crate::spectral::{CyclicCoords, FiberCohomology};

/// `c(q_1..q_p) -> c(π g_1 .. π g_p) * a0`, from `Q`-cochains valued in `A^N = <a0>`.
pub fn inflate(ext: &ExtensionData, c: &Cochain, a0: u64, modulus: u64) -> Cochain {
    Cochain::from_fn(&ext.group, modulus, c.degree(), |args| {
        let qs: Vec<usize> = args.iter().map(|&g| ext.proj[g]).collect();
        (c.get(&qs) * a0) % modulus
    })
}

/// Restriction of a cochain on `G` to `N`.
pub fn restrict(ext: &ExtensionData, c: &Cochain) -> Cochain {
    c.pullback(&ext.sub, &ext.normal)
}

fn invariant_generator(module: &CyclicModule, a0: u64) -> u64 {
    if a0 == 0 {
        module.modulus()
    } else {
        a0
    }
}

/// Reads an inflated cochain on `G` valued in `A^N` back on `Q`.
fn deflate(ext: &ExtensionData, z: &Cochain, a0: u64, an_modulus: u64) -> Result<Cochain> {
    let q = &ext.quotient;
    let out = Cochain::from_fn(q, an_modulus, z.degree(), |args| {
        let lifted: Vec<usize> = args.iter().map(|&x| ext.lift(x)).collect();
        (z.get(&lifted) / a0) % an_modulus
    });
    let back = inflate(ext, &out, a0, z.modulus());
    if back.values() != z.values() {
        return Err(Error::Consistency(
            "coboundary of the lift is not inflated from the quotient".into(),
        ));
    }
    Ok(out)
}

/// `d2: H1(N;A)^G -> H2(Q;A^N)`. Lifts `a` to a 1-cochain `f` on `G` with
/// `f|_N = a + δb` and `δf` vanishing whenever an argument lies in `N`, then reads
/// `δf` on the quotient.
pub fn transgression_d2(
    ext: &ExtensionData,
    module: &CyclicModule,
    a: &Cochain,
) -> Result<Cochain> {
    let g = &ext.group;
    let m = module.modulus();
    let a_n = ext.restrict_module(module);
    if a.degree() != 1 || !a.coboundary(&ext.sub, &a_n).is_zero() {
        return Err(Error::NotCocycle);
    }
    let (an, a0) = ext.invariant_module(module);
    let a0 = invariant_generator(module, a0);
    let src = CochainSpace::new(g, 1, true);
    let id = g.identity();
    let touches_n = CochainSpace::restricted(
        g,
        2,
        |x| !x.contains(&id) && x.iter().any(|&y| ext.in_normal(y)),
        true,
    );
    let d = coboundary_matrix(g, module, &src, &touches_n);
    let cols = src.dim() + 1;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut rhs = Vec::new();
    for (i, &x) in ext.normal.iter().enumerate() {
        if x == id {
            continue;
        }
        let mut row = vec![0u64; cols];
        row[src.position[x].unwrap()] = 1;
        // -(δb)(x) = -(b - b.x)
        row[cols - 1] = (module.multiplier(x) + m - 1) % m;
        rows.push(row);
        rhs.push(a.get(&[i]));
    }
    for r in 0..d.rows() {
        let mut row = d.row(r).to_vec();
        row.push(0);
        rows.push(row);
        rhs.push(0);
    }
    let sol = solve(m, &Matrix::from_rows(cols, &rows), &rhs).ok_or_else(|| {
        Error::Consistency("class does not lift to the first filtration level".into())
    })?;
    let f = src.cochain(g, m, &sol[..src.dim()]);
    deflate(ext, &f.coboundary(g, module), a0, an.modulus())
}

fn require_trivial(module: &CyclicModule) -> Result<()> {
    if !module.is_trivial() {
        return Err(Error::InvalidModule(
            "this map is implemented for trivial coefficients".into(),
        ));
    }
    Ok(())
}

/// A 1-cochain `Λ` on `N` with `C|_N = -δΛ`.
pub fn compatible_lambda(
    ext: &ExtensionData,
    module: &CyclicModule,
    c: &Cochain,
) -> Result<Cochain> {
    let n = &ext.sub;
    let m = module.modulus();
    let a_n = ext.restrict_module(module);
    let s1 = CochainSpace::new(n, 1, true);
    let s2 = CochainSpace::new(n, 2, true);
    let d = coboundary_matrix(n, &a_n, &s1, &s2);
    let rhs: Vec<u64> = s2
        .coords(&restrict(ext, c))
        .iter()
        .map(|&v| (m - v) % m)
        .collect();
    let sol = solve(m, &d, &rhs)
        .ok_or_else(|| Error::Consistency("restriction to N is not a coboundary".into()))?;
    Ok(s1.cochain(n, m, &sol))
}

/// `ρ(C, Λ)` as a 1-cochain on `Q` valued in `H1(N;A) = Z/d`. The component at `q`
/// is the class of `n -> Λ(g n g^-1) - Λ(n) + C(g^-1, g n g^-1) - C(n, g^-1)`
/// for any `g` in the coset of `s(q)`; independence of `g` is checked.
pub fn rho(
    ext: &ExtensionData,
    module: &CyclicModule,
    c: &Cochain,
    lambda: &Cochain,
    fiber: &FiberCohomology,
    coords: &CyclicCoords,
) -> Result<Cochain> {
    require_trivial(module)?;
    let g = &ext.group;
    let m = module.modulus();
    for (i, &x) in ext.normal.iter().enumerate() {
        for (j, &y) in ext.normal.iter().enumerate() {
            let k = ext.normal_index(g.mul(x, y)).unwrap();
            let dl = (lambda.get(&[j]) + m - lambda.get(&[k]) + lambda.get(&[i])) % m;
            if (c.get(&[x, y]) + dl) % m != 0 {
                return Err(Error::Compatibility(x, y));
            }
        }
    }
    let mut value = vec![None; ext.quotient.order()];
    for h in 0..g.order() {
        let hi = g.inv(h);
        let comp = Cochain::from_fn(&ext.sub, m, 1, |args| {
            let x = ext.normal[args[0]];
            let conj = g.mul(g.mul(h, x), hi);
            let l = lambda.get(&[ext.normal_index(conj).unwrap()]) + m - lambda.get(&args[..1]);
            (l + c.get(&[hi, conj]) + m - c.get(&[x, hi])) % m
        });
        let class = fiber.h.reduce(&comp).map_err(|_| {
            Error::Consistency(format!(
                "component of ρ at {} is not a cocycle on N",
                g.label(h)
            ))
        })?;
        let k = coords.to_int(&class);
        let slot = &mut value[ext.proj[h]];
        match *slot {
            None => *slot = Some(k),
            Some(prev) if prev != k => {
                return Err(Error::Consistency(format!(
                    "ρ depends on the coset representative {}",
                    g.label(h)
                )))
            }
            _ => {}
        }
    }
    Ok(Cochain::from_fn(&ext.quotient, coords.order, 1, |args| {
        value[args[0]].unwrap()
    }))
}

/// `d2: H1(Q; H1(N;A)) -> H3(Q;A^N)`. Lifts `x` to a 2-cochain `c` on `G` vanishing on
/// `N x N` whose shuffle components reproduce `x` and whose coboundary vanishes
/// whenever an argument lies in `N`, then reads `δc` on the quotient.
pub fn transgression_d2_fiber(
    ext: &ExtensionData,
    module: &CyclicModule,
    x: &Cochain,
    fiber: &FiberCohomology,
    coords: &CyclicCoords,
) -> Result<Cochain> {
    require_trivial(module)?;
    let g = &ext.group;
    let m = module.modulus();
    let id = g.identity();
    let (an, a0) = ext.invariant_module(module);
    let a0 = invariant_generator(module, a0);
    let src = CochainSpace::restricted(
        g,
        2,
        |t| !t.contains(&id) && !t.iter().all(|&y| ext.in_normal(y)),
        true,
    );
    let touches_n = CochainSpace::restricted(
        g,
        3,
        |t| !t.contains(&id) && t.iter().any(|&y| ext.in_normal(y)),
        true,
    );
    let d = coboundary_matrix(g, module, &src, &touches_n);
    let n = g.order();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut rhs = Vec::new();
    for q in 0..ext.quotient.order() {
        if q == ext.quotient.identity() {
            continue;
        }
        let rep = fiber.h.element(&ext.sub, &coords.to_coords(x.get(&[q])));
        let gi = g.inv(ext.lift(q));
        for (i, &y) in ext.normal.iter().enumerate() {
            if y == id {
                continue;
            }
            let mut row = vec![0u64; src.dim()];
            let conj = g.conj(y, gi);
            if let Some(col) = src.position[gi * n + conj] {
                row[col] = (row[col] + 1) % m;
            }
            if let Some(col) = src.position[y * n + gi] {
                row[col] = (row[col] + m - 1) % m;
            }
            rows.push(row);
            rhs.push(rep.get(&[i]));
        }
    }
    for r in 0..d.rows() {
        rows.push(d.row(r).to_vec());
        rhs.push(0);
    }
    let sol = solve(m, &Matrix::from_rows(src.dim(), &rows), &rhs)
        .ok_or_else(|| Error::Consistency("class does not lift to the second page".into()))?;
    let c = src.cochain(g, m, &sol);
    deflate(ext, &c.coboundary(g, module), a0, an.modulus())
}

/// `Ker(res: H2(G;A) -> H2(N;A))` as cocycles restricting to coboundaries, modulo coboundaries.
#[derive(Clone, Debug)]
pub struct RestrictionKernel {
    space: CochainSpace,
    quotient: Subquotient,
    modulus: u64,
}

impl RestrictionKernel {
    pub fn new(ext: &ExtensionData, module: &CyclicModule) -> Self {
        let g = &ext.group;
        let m = module.modulus();
        let a_n = ext.restrict_module(module);
        let s1 = CochainSpace::new(g, 1, true);
        let s2 = CochainSpace::new(g, 2, true);
        let s3 = CochainSpace::new(g, 3, true);
        let d = coboundary_matrix(g, module, &s2, &s3);
        let n1 = CochainSpace::new(&ext.sub, 1, true);
        let n2 = CochainSpace::new(&ext.sub, 2, true);
        let eq = span_equations(m, &coboundary_matrix(&ext.sub, &a_n, &n1, &n2));
        // E * Res, with Res selecting the N x N coordinates
        let nn = ext.sub.order();
        let mut rows: Vec<Vec<u64>> = (0..d.rows()).map(|r| d.row(r).to_vec()).collect();
        for r in 0..eq.rows() {
            let mut row = vec![0u64; s2.dim()];
            for (k, &t) in n2.tuples.iter().enumerate() {
                let (i, j) = (t / nn, t % nn);
                let col = s2.position[ext.normal[i] * g.order() + ext.normal[j]].unwrap();
                row[col] = (row[col] + eq.get(r, k)) % m;
            }
            rows.push(row);
        }
        let t = coboundary_matrix(g, module, &s1, &s2);
        let quotient = Subquotient::new(m, &Matrix::from_rows(s2.dim(), &rows), &t);
        Self {
            space: s2,
            quotient,
            modulus: m,
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        self.quotient.group()
    }

    pub fn reduce(&self, c: &Cochain) -> Result<Vec<u64>> {
        self.quotient
            .reduce(&self.space.coords(c))
            .map_err(|_| Error::NotCocycle)
    }

    pub fn representative(&self, g: &crate::group::FiniteGroup, i: usize) -> Cochain {
        self.space
            .cochain(g, self.modulus, &self.quotient.representative(i))
    }
}

/// Exactness verdict at one node of an exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub node: String,
    pub term_order: u64,
    pub image_order: u64,
    pub kernel_order: u64,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermSummary {
    pub name: String,
    pub group: String,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SevenTermReport {
    pub terms: Vec<TermSummary>,
    pub nodes: Vec<NodeReport>,
    pub five_term: Vec<NodeReport>,
    /// Map images agree under a second, randomly chosen section.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section_independent: Option<bool>,
}

impl SevenTermReport {
    pub fn all_exact(&self) -> bool {
        self.nodes.iter().chain(&self.five_term).all(|n| n.exact)
            && self.section_independent != Some(false)
    }
}

fn elements(g: &AbelianGroup) -> Vec<Vec<u64>> {
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

fn node(name: &str, term: &AbelianGroup, incoming: Option<&Hom>, outgoing: &Hom) -> NodeReport {
    let image_order = incoming.map_or(1, |f| f.image_order());
    let kernel_order = outgoing.kernel_order();
    let mut counterexample = None;
    if let Some(f) = incoming {
        let gf = f.then(outgoing);
        if let Some(i) = gf.images.iter().position(|v| v.iter().any(|&x| x != 0)) {
            counterexample = Some(format!(
                "generator {i} of the previous term does not map to zero two steps on"
            ));
        }
    }
    if counterexample.is_none() && image_order != kernel_order {
        let image: BTreeSet<Vec<u64>> = match incoming {
            Some(f) => elements(&f.source)
                .iter()
                .map(|x| term.normalize(&f.apply(x)))
                .collect(),
            None => std::iter::once(vec![0; term.rank()]).collect(),
        };
        let witness = elements(term)
            .into_iter()
            .find(|x| outgoing.apply(x).iter().all(|&v| v == 0) && !image.contains(x));
        counterexample =
            witness.map(|x| format!("class {x:?} lies in the kernel but not in the image"));
    }
    NodeReport {
        node: name.into(),
        term_order: term.order() as u64,
        image_order: image_order as u64,
        kernel_order: kernel_order as u64,
        exact: counterexample.is_none() && image_order == kernel_order,
        counterexample,
    }
}

fn hom_from(
    source: &CohomologyGroup,
    target: &AbelianGroup,
    q: &crate::group::FiniteGroup,
    f: impl Fn(&Cochain) -> Result<Vec<u64>>,
) -> Result<Hom> {
    let images = source
        .representatives(q)
        .iter()
        .map(f)
        .collect::<Result<Vec<_>>>()?;
    Ok(Hom::new(source.group().clone(), target.clone(), images))
}

/// All six maps of the sequence as homomorphisms between the computed terms.
struct Maps {
    terms: Vec<(String, AbelianGroup)>,
    h2g: AbelianGroup,
    inf1: Hom,
    res: Hom,
    d2: Hom,
    inf2: Hom,
    inf2_full: Hom,
    rho: Hom,
    d2_fiber: Hom,
}

fn compute_maps(ext: &ExtensionData, module: &CyclicModule) -> Result<Maps> {
    require_trivial(module)?;
    let g = &ext.group;
    let q = &ext.quotient;
    let m = module.modulus();
    let (an, a0) = ext.invariant_module(module);
    let a0 = invariant_generator(module, a0);
    let fiber = FiberCohomology::new(ext, module, 1)?;
    let (mq, cc) = fiber.as_cyclic_module(q)?;

    let h1q = cohomology(q, &an, 1)?;
    let h1g = cohomology(g, module, 1)?;
    let h0m = cohomology(q, &mq, 0)?;
    let h2q = cohomology(q, &an, 2)?;
    let kres = RestrictionKernel::new(ext, module);
    let h1m = cohomology(q, &mq, 1)?;
    let h3q = cohomology(q, &an, 3)?;
    let h2g = cohomology(g, module, 2)?;

    let inf1 = hom_from(&h1q, h1g.group(), q, |c| {
        h1g.reduce(&inflate(ext, c, a0, m))
    })?;
    let res = hom_from(&h1g, h0m.group(), g, |z| {
        let k = cc.to_int(&fiber.h.reduce(&restrict(ext, z))?);
        h0m.reduce(&Cochain::from_fn(q, cc.order, 0, |_| k))
    })?;
    let d2 = hom_from(&h0m, h2q.group(), q, |c| {
        let a = fiber.h.element(&ext.sub, &cc.to_coords(c.get(&[])));
        h2q.reduce(&transgression_d2(ext, module, &a)?)
    })?;
    let inf2 = hom_from(&h2q, kres.group(), q, |c| {
        kres.reduce(&inflate(ext, c, a0, m))
    })?;
    let inf2_full = hom_from(&h2q, h2g.group(), q, |c| {
        h2g.reduce(&inflate(ext, c, a0, m))
    })?;
    let rho_images = (0..kres.group().rank())
        .map(|i| {
            let c = kres.representative(g, i);
            let lambda = compatible_lambda(ext, module, &c)?;
            h1m.reduce(&rho(ext, module, &c, &lambda, &fiber, &cc)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let rho_hom = Hom::new(kres.group().clone(), h1m.group().clone(), rho_images);
    let d2_fiber = hom_from(&h1m, h3q.group(), q, |x| {
        h3q.reduce(&transgression_d2_fiber(ext, module, x, &fiber, &cc)?)
    })?;

    let terms = vec![
        ("H1(Q;A^N)".to_string(), h1q.group().clone()),
        ("H1(G;A)".to_string(), h1g.group().clone()),
        ("H1(N;A)^G".to_string(), h0m.group().clone()),
        ("H2(Q;A^N)".to_string(), h2q.group().clone()),
        ("Ker(H2(G;A)->H2(N;A))".to_string(), kres.group().clone()),
        ("H1(Q;H1(N;A))".to_string(), h1m.group().clone()),
        ("H3(Q;A^N)".to_string(), h3q.group().clone()),
    ];
    Ok(Maps {
        terms,
        h2g: h2g.group().clone(),
        inf1,
        res,
        d2,
        inf2,
        inf2_full,
        rho: rho_hom,
        d2_fiber,
    })
}

/// Exactness of the five- and seven-term sequences at every interior node.
pub fn seven_term_report(ext: &ExtensionData, module: &CyclicModule) -> Result<SevenTermReport> {
    let maps = compute_maps(ext, module)?;
    let t = &maps.terms;
    let nodes = vec![
        node(&t[0].0, &t[0].1, None, &maps.inf1),
        node(&t[1].0, &t[1].1, Some(&maps.inf1), &maps.res),
        node(&t[2].0, &t[2].1, Some(&maps.res), &maps.d2),
        node(&t[3].0, &t[3].1, Some(&maps.d2), &maps.inf2),
        node(&t[4].0, &t[4].1, Some(&maps.inf2), &maps.rho),
        node(&t[5].0, &t[5].1, Some(&maps.rho), &maps.d2_fiber),
    ];
    let mut five_term = nodes[..3].to_vec();
    five_term.push(node(&t[3].0, &t[3].1, Some(&maps.d2), &maps.inf2_full));
    let mut terms: Vec<TermSummary> = t
        .iter()
        .map(|(name, grp)| TermSummary {
            name: name.clone(),
            group: grp.to_string(),
            order: grp.order() as u64,
        })
        .collect();
    terms.push(TermSummary {
        name: "H2(G;A)".into(),
        group: maps.h2g.to_string(),
        order: maps.h2g.order() as u64,
    });
    Ok(SevenTermReport {
        terms,
        nodes,
        five_term,
        section_independent: None,
    })
}

/// The report, re-checked with a random section: every section-dependent map
/// must produce the same images.
pub fn seven_term_report_checked(
    ext: &ExtensionData,
    module: &CyclicModule,
    seed: u64,
) -> Result<SevenTermReport> {
    let mut report = seven_term_report(ext, module)?;
    let a = compute_maps(ext, module)?;
    let b = compute_maps(&ext.random_section(seed), module)?;
    let same = a.d2.images == b.d2.images
        && a.rho.images == b.rho.images
        && a.d2_fiber.images == b.d2_fiber.images;
    report.section_independent = Some(same);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension_data::corpus;

    #[test]
    fn z4_identity_character_transgresses_nontrivially() {
        let e = corpus::z4_over_z2();
        let a = CyclicModule::trivial(&e.group, 2);
        let id_char = Cochain::from_fn(&e.sub, 2, 1, |x| x[0] as u64);
        let z = transgression_d2(&e, &a, &id_char).unwrap();
        let h2 = cohomology(&e.quotient, &CyclicModule::trivial(&e.quotient, 2), 2).unwrap();
        assert!(!h2.is_trivial_class(&z).unwrap());
    }

    #[test]
    fn extendable_class_transgresses_to_zero() {
        // Z/2 x Z/2: the character of N extends to G
        let e = corpus::klein_over_z2();
        let a = CyclicModule::trivial(&e.group, 2);
        let ch = Cochain::from_fn(&e.sub, 2, 1, |x| x[0] as u64);
        let z = transgression_d2(&e, &a, &ch).unwrap();
        let h2 = cohomology(&e.quotient, &CyclicModule::trivial(&e.quotient, 2), 2).unwrap();
        assert!(h2.is_trivial_class(&z).unwrap());
    }

    #[test]
    fn rho_vanishes_on_zero_and_inflated_cocycles() {
        let e = corpus::q8_over_center();
        let a = CyclicModule::trivial(&e.group, 2);
        let fiber = FiberCohomology::new(&e, &a, 1).unwrap();
        let (_, cc) = fiber.as_cyclic_module(&e.quotient).unwrap();
        let zero = Cochain::zero(&e.group, 2, 2);
        let lz = Cochain::zero(&e.sub, 2, 1);
        assert!(rho(&e, &a, &zero, &lz, &fiber, &cc).unwrap().is_zero());
        let h2q = cohomology(&e.quotient, &CyclicModule::trivial(&e.quotient, 2), 2).unwrap();
        for c in h2q.representatives(&e.quotient) {
            let inf = inflate(&e, &c, 1, 2);
            assert!(rho(&e, &a, &inf, &lz, &fiber, &cc).unwrap().is_zero());
        }
    }

    #[test]
    fn rho_rejects_incompatible_pairs() {
        let e = corpus::z4_over_z2();
        let a = CyclicModule::trivial(&e.group, 2);
        let fiber = FiberCohomology::new(&e, &a, 1).unwrap();
        let (_, cc) = fiber.as_cyclic_module(&e.quotient).unwrap();
        let c = Cochain::from_fn(&e.group, 2, 2, |x| u64::from(x == [2, 2]));
        let l = Cochain::zero(&e.sub, 2, 1);
        assert!(matches!(
            rho(&e, &a, &c, &l, &fiber, &cc),
            Err(Error::Compatibility(2, 2))
        ));
    }

    #[test]
    fn z4_sequence_is_exact() {
        let e = corpus::z4_over_z2();
        for m in [2, 4] {
            let a = CyclicModule::trivial(&e.group, m);
            let r = seven_term_report_checked(&e, &a, 11).unwrap();
            assert!(r.all_exact(), "{r:#?}");
        }
    }
}
