//! One-off evaluations on user-supplied group tables and map families.

use std::path::Path;

use cocycle_core::{cohomology, CyclicModule, FiniteGroup};
use cocycle_loop::cocycles::{mickelsson_c, wzw_lambda};
use cocycle_loop::quadrature::{CylinderGrid, DiskGrid};
use cocycle_loop::{Domain, FamilySpec};
use serde::Serialize;

use crate::error::{CliError, Result};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
pub struct CohomologyOut {
    pub order: u128,
    pub invariant_factors: Vec<u64>,
}

/// `H^degree(G; A)` for a group table in JSON and either a trivial `Z/m` or a module file.
pub fn cohomology_of(
    group: &Path,
    modulus: Option<u64>,
    module: Option<&Path>,
    degree: usize,
) -> Result<CohomologyOut> {
    let g = FiniteGroup::from_json(&read(group)?).map_err(|e| CliError::Config(e.to_string()))?;
    let a = match (modulus, module) {
        (_, Some(p)) => CyclicModule::load(&g, p).map_err(|e| CliError::Config(e.to_string()))?,
        (Some(m), None) if m >= 2 => CyclicModule::trivial(&g, m),
        _ => {
            return Err(CliError::Config(
                "give --modulus (at least 2) or --module".into(),
            ))
        }
    };
    let h = cohomology(&g, &a, degree)?;
    Ok(CohomologyOut {
        order: h.order(),
        invariant_factors: h.invariant_factors(),
    })
}

#[derive(Debug, Default, Serialize)]
pub struct FamilyOut {
    pub domain: Option<Domain>,
    pub relative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_with_second: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct GridFlags {
    pub nr: usize,
    pub ntheta: usize,
    pub nt: usize,
}

/// `Λ` of a relative cylinder family, and `C(f, g)` on the disk (top slices for cylinder families).
pub fn family(path: &Path, second: Option<&Path>, grid: GridFlags) -> Result<FamilyOut> {
    let spec = FamilySpec::from_toml(&read(path)?)?;
    let f = spec.build()?;
    let disk = DiskGrid::new(grid.nr, grid.ntheta)?;
    let mut out = FamilyOut {
        domain: spec.domain,
        relative: f.check_relative().is_ok(),
        ..FamilyOut::default()
    };
    let is_cyl = |s: &FamilySpec| s.domain == Some(Domain::Cylinder);
    if is_cyl(&spec) && out.relative {
        out.lambda = Some(wzw_lambda(
            &f,
            &CylinderGrid::new(grid.nr, grid.ntheta, grid.nt)?,
        ));
    }
    if let Some(p) = second {
        let spec2 = FamilySpec::from_toml(&read(p)?)?;
        let g = spec2.build()?;
        let slice =
            |s: &FamilySpec, m: cocycle_loop::MapFamily| if is_cyl(s) { m.top() } else { m };
        out.c_with_second = Some(mickelsson_c(&slice(&spec, f), &slice(&spec2, g), &disk));
    }
    Ok(out)
}
