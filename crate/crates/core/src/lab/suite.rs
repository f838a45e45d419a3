//! Batch runs of the lab identities and the Euler/index comparison over a
//! family of modules, one independent job per module or pair.

use serde::Serialize;

use super::algebra::LabAlgebra;
use super::dirac::{check_dirac_operator, dirac_cohomology, verify_dsquared_scalar, verify_parthasarathy};
use super::ext::{conjecture_check, perturbation_export, verify_split};
use super::hom::verify_st;
use super::module::MatrixHCModule;
use super::spinor::{build_spinor_matrices, SpinorMatrices};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::fredholm::suite::PerturbationInstance;
use crate::linalg::format_q;
use crate::spin::{dirac_pairing, ep_terms};

/// Named modules of a lab preset: F_0..F_max for sl2R, and ℂ, the standard
/// representation and its dual for su21.
pub fn lab_modules(alg: &LabAlgebra, max: usize) -> Result<Vec<(String, MatrixHCModule)>> {
    match alg.name() {
        "sl2R" => (0..=max).map(|n| Ok((format!("F{n}"), MatrixHCModule::sl2_irreducible(alg, n)?))).collect(),
        "su21" => Ok(vec![
            ("C".into(), MatrixHCModule::trivial(alg)),
            ("std".into(), MatrixHCModule::standard(alg)?),
            ("std*".into(), MatrixHCModule::dual_standard(alg)?),
        ]),
        other => Err(Error::InvalidParameter(format!("no module family for lab algebra {other}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleIdentityRow {
    pub module: String,
    pub dimension: usize,
    /// ‖ρ_c‖² − ‖ρ‖².
    pub parthasarathy_constant: Option<String>,
    pub isotypic_components: usize,
    pub dirac_cohomology: (usize, usize),
    pub error: Option<String>,
}

impl ModuleIdentityRow {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairIdentityRow {
    pub x: String,
    pub y: String,
    pub hom_dims: (usize, usize),
    pub ext_dims: Vec<usize>,
    pub index_st: Option<i64>,
    pub dirac_pairing: Option<i64>,
    pub error: Option<String>,
}

impl PairIdentityRow {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub group: String,
    pub modules: Vec<ModuleIdentityRow>,
    pub pairs: Vec<PairIdentityRow>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.modules.iter().all(ModuleIdentityRow::ok) && self.pairs.iter().all(PairIdentityRow::ok)
    }
}

fn module_row(alg: &LabAlgebra, sp: &SpinorMatrices, (name, x): &(String, MatrixHCModule)) -> ModuleIdentityRow {
    let mut row = ModuleIdentityRow {
        module: name.clone(),
        dimension: x.dimension,
        parthasarathy_constant: None,
        isotypic_components: 0,
        dirac_cohomology: (0, 0),
        error: None,
    };
    let run = |row: &mut ModuleIdentityRow| -> Result<()> {
        check_dirac_operator(alg, x, sp)?;
        row.parthasarathy_constant = Some(format_q(&verify_parthasarathy(alg, x, sp)?.constant));
        row.isotypic_components = verify_dsquared_scalar(alg, x, sp)?.len();
        let h = dirac_cohomology(alg, x, sp)?;
        row.dirac_cohomology = (h.dim_plus, h.dim_minus);
        Ok(())
    };
    if let Err(e) = run(&mut row) {
        row.error = Some(e.to_string());
    }
    row
}

fn pair_row(alg: &LabAlgebra, sp: &SpinorMatrices, x: &(String, MatrixHCModule), y: &(String, MatrixHCModule)) -> PairIdentityRow {
    let mut row = PairIdentityRow {
        x: x.0.clone(),
        y: y.0.clone(),
        hom_dims: (0, 0),
        ext_dims: Vec::new(),
        index_st: None,
        dirac_pairing: None,
        error: None,
    };
    let run = |row: &mut PairIdentityRow| -> Result<()> {
        let st = verify_st(alg, &x.1, &y.1, sp)?;
        row.hom_dims = (st.dim_even, st.dim_odd);
        row.index_st = Some(st.index.index);
        row.dirac_pairing = Some(st.dirac_pairing);
        row.ext_dims = verify_split(alg, &x.1, &y.1, sp)?.dims;
        Ok(())
    };
    if let Err(e) = run(&mut row) {
        row.error = Some(e.to_string());
    }
    row
}

fn pairs<T: Clone>(items: &[T]) -> Vec<(T, T)> {
    items.iter().flat_map(|a| items.iter().map(move |b| (a.clone(), b.clone()))).collect()
}

/// Parthasarathy, the isotypic D² scalars, basis independence of D, the S/T
/// identities and the A/B split identities over every module and pair.
pub fn lab_identities(group: &str, max: usize, exec: Execution) -> Result<IdentityReport> {
    let alg = LabAlgebra::preset(group)?;
    let mods = lab_modules(&alg, max)?;
    lab_identities_for(&alg, &mods, exec)
}

/// [`lab_identities`] over an explicit list of named modules.
pub fn lab_identities_for(alg: &LabAlgebra, mods: &[(String, MatrixHCModule)], exec: Execution) -> Result<IdentityReport> {
    let sp = build_spinor_matrices(alg)?;
    let modules = exec::map(exec, mods, |m| module_row(alg, &sp, m));
    let pairs = exec::map(exec, &pairs(mods), |(x, y)| pair_row(alg, &sp, x, y));
    Ok(IdentityReport { group: alg.name().to_string(), modules, pairs })
}

/// Five routes to the same integer for a pair of finite-dimensional modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub x: String,
    pub y: String,
    /// Σ(−1)^i dim Hom_K(∧^i p ⊗ X, Y) from characters.
    pub ep_pairing: i64,
    /// Euler characteristic of the explicit complex.
    pub euler: i64,
    pub index_d: i64,
    pub index_dirac_part: i64,
    /// Pairing of the Dirac indices read off the explicit Dirac cohomology.
    pub dirac_pairing: i64,
    /// Chain dimensions of the explicit complex agree with the character count.
    pub chain_dims_match: bool,
    pub all_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureTable {
    pub group: String,
    pub rows: Vec<ConjectureRow>,
}

impl ConjectureTable {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.all_equal && r.chain_dims_match)
    }
}

fn highest_weight(alg: &LabAlgebra, x: &MatrixHCModule) -> crate::weights::Weight {
    &x.infinitesimal_character - &alg.rho()
}

pub fn lab_conjecture(group: &str, max: usize, exec: Execution) -> Result<ConjectureTable> {
    let alg = LabAlgebra::preset(group)?;
    let mods = lab_modules(&alg, max)?;
    lab_conjecture_for(&alg, &mods, exec)
}

/// [`lab_conjecture`] over an explicit list of named modules.
pub fn lab_conjecture_for(alg: &LabAlgebra, mods: &[(String, MatrixHCModule)], exec: Execution) -> Result<ConjectureTable> {
    let sp = build_spinor_matrices(alg)?;
    let indices = exec::map(exec, mods, |(_, x)| dirac_cohomology(alg, x, &sp).map(|h| h.index))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = pairs(&(0..mods.len()).collect::<Vec<_>>());
    let rows = exec::map(exec, &jobs, |&(i, j)| -> Result<ConjectureRow> {
        let (x, y) = (&mods[i], &mods[j]);
        let c = conjecture_check(alg, &x.1, &y.1)?;
        let terms = ep_terms(alg.datum(), &highest_weight(alg, &x.1), &highest_weight(alg, &y.1))?;
        let ep_pairing = terms.iter().enumerate().map(|(k, d)| if k % 2 == 0 { *d } else { -d }).sum();
        let dirac = dirac_pairing(&indices[i], &indices[j])?.value;
        let dims: Vec<i64> = c.dims.iter().map(|&d| d as i64).collect();
        Ok(ConjectureRow {
            x: x.0.clone(),
            y: y.0.clone(),
            ep_pairing,
            euler: c.euler,
            index_d: c.index_d,
            index_dirac_part: c.index_dirac_part,
            dirac_pairing: dirac,
            chain_dims_match: dims == terms,
            all_equal: c.equal && ep_pairing == c.euler && dirac == c.euler,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(ConjectureTable { group: alg.name().to_string(), rows })
}

/// (Hom_K(∧p ⊗ X, Y), 2d, δ) for the diagonal pairs X = Y of the module family.
pub fn lab_perturbation_instances(group: &str, max: usize) -> Result<Vec<PerturbationInstance>> {
    let alg = LabAlgebra::preset(group)?;
    lab_modules(&alg, max)?
        .iter()
        .map(|(name, x)| perturbation_export(&alg, x, x, &format!("{group}:{name}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_small_table() {
        let r = lab_identities("sl2R", 2, Execution::Sequential).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.pairs.len(), 9);
        let t = lab_conjecture("sl2R", 2, Execution::Sequential).unwrap();
        assert!(t.ok());
        for row in &t.rows {
            assert_eq!(row.euler, if row.x == row.y { 2 } else { 0 });
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let a = lab_conjecture("su21", 0, Execution::Sequential).unwrap();
        let b = lab_conjecture("su21", 0, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.ok(), "{a:?}");
    }

    #[test]
    fn unknown_group() {
        assert!(lab_identities("so5", 1, Execution::Sequential).is_err());
    }
}
