//! Central extensions of a finite group by `Z/m` and their classes in `H^2`.

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::extension_data::ExtensionData;
use crate::group::FiniteGroup;

/// `Q x Z/m` with `(q,a)(q',a') = (qq', a + a' + χ(q,q'))`. Element `(q,a)` has index `q*m + a`.
#[derive(Clone, Debug)]
pub struct CentralExtensionPresentation {
    pub base: FiniteGroup,
    pub modulus: u64,
    /// Normalized cocycle actually used for the product.
    pub cocycle: Cochain,
    pub group: FiniteGroup,
}

/// First triple where the cocycle identity fails, for trivial coefficients.
pub fn cocycle_failure(q: &FiniteGroup, chi: &Cochain) -> Option<(usize, usize, usize)> {
    let n = q.order();
    let m = chi.modulus();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = (chi.get(&[b, c]) + chi.get(&[a, q.mul(b, c)])) % m;
                let rhs = (chi.get(&[q.mul(a, b), c]) + chi.get(&[a, b])) % m;
                if lhs != rhs {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Builds the extension group of a 2-cocycle with trivial action. A cocycle with
/// `χ(1,1) = k != 0` is first shifted by the coboundary of the constant `k`.
pub fn build_extension(base: &FiniteGroup, chi: &Cochain) -> Result<CentralExtensionPresentation> {
    if chi.degree() != 2 || chi.group_order() != base.order() {
        return Err(Error::Mismatch(
            "expected a 2-cochain on the base group".into(),
        ));
    }
    if let Some((a, b, c)) = cocycle_failure(base, chi) {
        return Err(Error::CocycleFailure(a, b, c));
    }
    let m = chi.modulus();
    let e = base.identity();
    let shift = chi.get(&[e, e]);
    let cocycle = Cochain::from_fn(base, m, 2, |x| (chi.get(x) + m - shift) % m);
    let mu = m as usize;
    let labels = (0..base.order() * mu)
        .map(|k| format!("({},{})", base.label(k / mu), k % mu))
        .collect();
    let group = FiniteGroup::from_fn(labels, |x, y| {
        let (q1, a1) = (x / mu, (x % mu) as u64);
        let (q2, a2) = (y / mu, (y % mu) as u64);
        let a = (a1 + a2 + cocycle.get(&[q1, q2])) % m;
        base.mul(q1, q2) * mu + a as usize
    })?;
    Ok(CentralExtensionPresentation {
        base: base.clone(),
        modulus: m,
        cocycle,
        group,
    })
}

impl CentralExtensionPresentation {
    pub fn element(&self, q: usize, a: u64) -> usize {
        q * self.modulus as usize + (a % self.modulus) as usize
    }

    /// The fiber `{(1, a)}`.
    pub fn fiber(&self) -> Vec<usize> {
        (0..self.modulus)
            .map(|a| self.element(self.base.identity(), a))
            .collect()
    }

    /// `1 -> Z/m -> E -> Q -> 1` with fiber generator `(1, 1)`.
    pub fn extension_data(&self) -> Result<(ExtensionData, usize)> {
        let ext = ExtensionData::new(self.group.clone(), &self.fiber())?;
        Ok((ext, self.element(self.base.identity(), 1)))
    }

    /// Index in the quotient of `ExtensionData` of each base element.
    pub fn base_to_quotient(&self, ext: &ExtensionData) -> Vec<usize> {
        (0..self.base.order())
            .map(|q| ext.proj[self.element(q, 0)])
            .collect()
    }

    /// The class of the presentation, read back through `extension_class` and
    /// transported to the base group.
    pub fn extracted_cocycle(&self) -> Result<Cochain> {
        let (ext, gen) = self.extension_data()?;
        let chi = extension_class(&ext, gen)?;
        let to_q = self.base_to_quotient(&ext);
        Ok(Cochain::from_fn(&self.base, self.modulus, 2, |x| {
            chi.get(&[to_q[x[0]], to_q[x[1]]])
        }))
    }
}

/// `χ(q1,q2) = s(q1) s(q2) s(q1 q2)^-1`, written additively in the cyclic central
/// subgroup `N = <gen>`.
pub fn extension_class(ext: &ExtensionData, gen: usize) -> Result<Cochain> {
    if !ext.is_central() {
        return Err(Error::NotCentral);
    }
    let g = &ext.group;
    let m = ext.normal.len();
    let mut log = vec![None; g.order()];
    let mut x = g.identity();
    for k in 0..m {
        log[x] = Some(k as u64);
        x = g.mul(x, gen);
    }
    if log.iter().filter(|v| v.is_some()).count() != m {
        return Err(Error::InvalidSubgroup(
            "the given element does not generate N".into(),
        ));
    }
    let q = &ext.quotient;
    Ok(Cochain::from_fn(q, m as u64, 2, |args| {
        let (a, b) = (args[0], args[1]);
        let prod = g.mul(
            g.mul(ext.lift(a), ext.lift(b)),
            g.inv(ext.lift(q.mul(a, b))),
        );
        log[prod].expect("section values multiply into N")
    }))
}

/// The map `(q, a) -> (q, a - f(q))`, an isomorphism from the extension of `χ`
/// to the extension of `χ + δf`.
pub fn explicit_isomorphism(from: &CentralExtensionPresentation, f: &[u64]) -> Vec<usize> {
    let m = from.modulus;
    let mu = m as usize;
    (0..from.group.order())
        .map(|x| {
            let (q, a) = (x / mu, (x % mu) as u64);
            from.element(q, (a + m - f[q] % m) % m)
        })
        .collect()
}

/// Whether `map` is a bijective homomorphism `a -> b`.
pub fn is_isomorphism(a: &FiniteGroup, b: &FiniteGroup, map: &[usize]) -> bool {
    let n = a.order();
    if map.len() != n || b.order() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in map {
        if y >= n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    (0..n).all(|x| (0..n).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])))
}

/// One class of `H^2(Q; Z/m)` sent through `build_extension` and back.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RoundTrip {
    pub class: Vec<u64>,
    pub extracted: Vec<u64>,
    pub extension_order: usize,
    pub pass: bool,
}

/// Round trip over every class of `H^2(Q; Z/m)` with trivial action.
pub fn round_trip_all(base: &FiniteGroup, m: u64) -> Result<Vec<RoundTrip>> {
    let h2 =
        crate::cohomology::cohomology(base, &crate::module::CyclicModule::trivial(base, m), 2)?;
    h2.all_classes()
        .into_iter()
        .map(|class| {
            let p = build_extension(base, &h2.element(base, &class))?;
            let extracted = h2.reduce(&p.extracted_cocycle()?)?;
            Ok(RoundTrip {
                pass: extracted == class,
                extension_order: p.group.order(),
                class,
                extracted,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology;
    use crate::module::CyclicModule;

    #[test]
    fn zero_cocycle_gives_direct_product() {
        let z2 = FiniteGroup::cyclic(2);
        let p = build_extension(&z2, &Cochain::zero(&z2, 2, 2)).unwrap();
        let v = FiniteGroup::direct_product(&z2, &z2);
        assert!(p.group.find_isomorphism(&v).is_some());
    }

    #[test]
    fn nontrivial_cocycle_on_z2_gives_z4() {
        let z2 = FiniteGroup::cyclic(2);
        let chi = Cochain::from_fn(&z2, 2, 2, |x| u64::from(x == [1, 1]));
        let p = build_extension(&z2, &chi).unwrap();
        assert_eq!(
            p.group.order_fingerprint(),
            FiniteGroup::cyclic(4).order_fingerprint()
        );
    }

    #[test]
    fn non_cocycle_rejected_with_triple() {
        let z2 = FiniteGroup::cyclic(2);
        let chi = Cochain::from_fn(&z2, 2, 2, |x| u64::from(x == [1, 0]));
        assert!(matches!(
            build_extension(&z2, &chi),
            Err(Error::CocycleFailure(..))
        ));
    }

    #[test]
    fn non_normalized_cocycle_is_shifted() {
        let z3 = FiniteGroup::cyclic(3);
        let chi = Cochain::from_fn(&z3, 3, 2, |_| 2);
        let p = build_extension(&z3, &chi).unwrap();
        assert!(p.cocycle.is_zero());
    }

    #[test]
    fn z4_over_z2_has_nontrivial_class() {
        let ext = crate::extension_data::corpus::z4_over_z2();
        let chi = extension_class(&ext, 2).unwrap();
        let h2 = cohomology(&ext.quotient, &CyclicModule::trivial(&ext.quotient, 2), 2).unwrap();
        assert!(!h2.is_trivial_class(&chi).unwrap());
        let other = extension_class(&ext.with_section(vec![0, 3]).unwrap(), 2).unwrap();
        assert_eq!(h2.reduce(&chi).unwrap(), h2.reduce(&other).unwrap());
    }

    #[test]
    fn non_central_rejected() {
        let ext = crate::extension_data::corpus::s3_over_a3();
        assert!(matches!(
            extension_class(&ext, ext.normal[1]),
            Err(Error::NotCentral)
        ));
    }

    #[test]
    fn round_trip_on_klein_four() {
        let v = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let rt = round_trip_all(&v, 2).unwrap();
        assert_eq!(rt.len(), 8);
        assert!(rt.iter().all(|r| r.pass));
    }
}
