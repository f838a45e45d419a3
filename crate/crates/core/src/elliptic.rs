//! Character numerators of (limits of) discrete series on the compact Cartan,
//! and the elliptic pairing as exact Fourier orthogonality on T.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::linalg::{ExactMatrix, Q};
use crate::spin::{dirac_index_limits, dirac_pairing, HCParameter};
use crate::weights::{LaurentElement, RootDatum, WeylKind};

/// Σ_{w∈W_k} sgn(w) e^{wχ}, with the chamber sign ε(b).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterNumerator {
    #[serde(skip)]
    pub num: LaurentElement,
    pub global_sign: i8,
    pub parameter: HCParameter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticPairingValue {
    #[serde(serialize_with = "crate::linalg::ser_q")]
    pub value: Q,
}

pub fn ds_numerator(datum: &RootDatum, p: &HCParameter) -> Result<CharacterNumerator> {
    if p.chi.rank() == datum.rank() && p.on_compact_wall(datum) {
        return Err(Error::SingularOnCompactWall(p.chi.0.clone()));
    }
    p.validate(datum)?;
    let num = LaurentElement::from_terms(
        datum.weyl_group(WeylKind::Compact).iter().map(|w| (w.apply(&p.chi), i64::from(w.sign))),
    );
    Ok(CharacterNumerator { num, global_sign: datum.chamber(p.chamber)?.sign, parameter: p.clone() })
}

/// (ε_a ε_b / |W_k|)·⟨num_a, num_b⟩.
pub fn elliptic_pairing(
    datum: &RootDatum,
    a: &CharacterNumerator,
    b: &CharacterNumerator,
) -> Result<EllipticPairingValue> {
    let (ca, cb) = (&a.parameter.chi, &b.parameter.chi);
    if ca.rank() != datum.rank() || cb.rank() != datum.rank() || !datum.on_k_lattice(&(ca - cb)) {
        return Err(Error::LatticeMismatch);
    }
    let order = datum.weyl_group(WeylKind::Compact).len() as i64;
    let sign = i64::from(a.global_sign) * i64::from(b.global_sign);
    let value = Q::new((sign * a.num.dot(&b.num)).into(), order.into());
    if !value.is_integer() {
        return Err(Error::IdentityFailed(format!("elliptic pairing {value} is not an integer")));
    }
    Ok(EllipticPairingValue { value })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticReport {
    pub params: Vec<HCParameter>,
    pub gram_dirac: Vec<Vec<i64>>,
    pub gram_elliptic: ExactMatrix,
    pub equal: bool,
    pub mismatches: Vec<(usize, usize)>,
    /// Parameters with nontrivial stabilizer in W, where a 1/|W_χ| normalization would differ.
    pub singular: Vec<usize>,
}

/// Gram matrices from the Dirac and elliptic pairings, compared entrywise.
pub fn verify_dirac_equals_elliptic(
    datum: &RootDatum,
    params: &[HCParameter],
    exec: Execution,
) -> Result<EllipticReport> {
    let indices = exec::map(exec, params, |p| dirac_index_limits(datum, p)).into_iter().collect::<Result<Vec<_>>>()?;
    let numerators = exec::map(exec, params, |p| ds_numerator(datum, p)).into_iter().collect::<Result<Vec<_>>>()?;
    let n = params.len();
    let cells = exec::grid(exec, n, n, |i, j| -> Result<(i64, Q)> {
        let d = dirac_pairing(&indices[i], &indices[j])?.value;
        let e = elliptic_pairing(datum, &numerators[i], &numerators[j])?.value;
        Ok((d, e))
    });
    let mut gram_dirac = vec![vec![0; n]; n];
    let mut gram_elliptic = ExactMatrix::zeros(n, n);
    let mut mismatches = Vec::new();
    for (i, row) in cells.into_iter().enumerate() {
        for (j, cell) in row.into_iter().enumerate() {
            let (d, e) = cell?;
            if Q::from_integer(d.into()) != e {
                mismatches.push((i, j));
            }
            gram_dirac[i][j] = d;
            gram_elliptic[(i, j)] = e;
        }
    }
    let singular = params.iter().enumerate().filter(|(_, p)| p.stabilizer_order(datum) > 1).map(|(i, _)| i).collect();
    Ok(EllipticReport {
        params: params.to_vec(),
        gram_dirac,
        gram_elliptic,
        equal: mismatches.is_empty(),
        mismatches,
        singular,
    })
}

/// True when `num` is W_k-alternating.
pub fn is_alternating(datum: &RootDatum, num: &LaurentElement) -> bool {
    datum
        .weyl_group(WeylKind::Compact)
        .iter()
        .all(|s| num.map_weights(|w| s.apply(w)) == num.scale(i64::from(s.sign)))
}
