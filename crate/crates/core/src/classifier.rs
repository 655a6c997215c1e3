//! Which `b₂ = 1` flag varieties of an ADE group carry an invariant contact
//! structure.
//!
//! A contact structure on `G/P_S` forces its contact line bundle to be `𝓛(λ)`
//! for the highest root `λ`, hence `λ = k·ω_α` with `S = Π∖{α}`. This can only
//! happen when exactly one simple root pairs nontrivially with `λ`; the
//! resulting `G/P_Λ` is the projectivized minimal nilpotent orbit. Sufficiency
//! (nondegeneracy of the bracket form) is certified in [`crate::chevalley`].

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parabolic::ParabolicData;
use crate::rootsys::{CartanKind, Root, RootSystem, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Exists,
    NoneExists,
}

/// Classification outcome for one Cartan kind. Node indices are 0-based
/// (node `i` is the Bourbaki simple root `α_{i+1}`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactReport {
    pub kind: CartanKind,
    pub verdict: Verdict,
    /// Simple roots not orthogonal to `λ`; the witness set when no structure exists.
    pub non_orthogonal_nodes: Vec<usize>,
    pub contact_node: Option<usize>,
    /// `Λ`: the simple roots orthogonal to `λ`.
    pub lambda_subset: Option<Vec<usize>>,
    pub dim: Option<usize>,
    pub n: Option<usize>,
    /// `λ` in fundamental coordinates.
    pub line_bundle_weight: Option<Weight>,
    /// `k` with `λ = k·ω_α`.
    pub line_bundle_coefficient: Option<i64>,
    /// `μ_Λ`, the anticanonical weight.
    pub anticanonical_weight: Option<Weight>,
    /// `(n+1)·λ = μ_Λ` holds.
    pub identity_checked: bool,
    /// `λ` lies in the `W_Λ`-invariant weight lattice.
    pub lambda_invariant: bool,
}

/// Nodes `β` with `(λ, β) ≠ 0`.
pub fn non_orthogonal_simple_roots(rs: &RootSystem) -> Vec<usize> {
    (0..rs.rank())
        .filter(|&i| rs.inner_product(rs.highest(), &rs.simple_root(i)) != 0)
        .collect()
}

/// `Λ`: the nodes orthogonal to the highest root.
pub fn orthogonal_simple_roots(rs: &RootSystem) -> BTreeSet<usize> {
    let non: BTreeSet<usize> = non_orthogonal_simple_roots(rs).into_iter().collect();
    (0..rs.rank()).filter(|i| !non.contains(i)).collect()
}

/// Checks `(n+1)·λ = μ_S` where `dim G/P_S = 2n+1`.
pub fn verify_line_bundle_identity(pd: &ParabolicData<'_>, lambda: &Weight) -> Result<bool> {
    let dim = pd.dim();
    if dim.is_multiple_of(2) {
        return Err(Error::DimensionNotOdd(dim));
    }
    let n = (dim - 1) / 2;
    Ok(&lambda.scale(n as i64 + 1) == pd.mu())
}

/// Maps each nilradical weight (the quotient line-bundle weight obtained by
/// discarding it) to the discarded root.
///
/// Every torus weight space of `g/p_S` is one-dimensional, so distinct
/// corank-1 invariant subspaces give distinct quotient weights. Panics if two
/// nilradical roots share a weight, which cannot happen in a root system.
pub fn certify_corank_one_uniqueness(pd: &ParabolicData<'_>) -> BTreeMap<Weight, Root> {
    let rs = pd.root_system();
    let map: BTreeMap<Weight, Root> = pd
        .nilradical()
        .iter()
        .map(|g| (rs.to_fundamental_basis(g), g.clone()))
        .collect();
    assert_eq!(
        map.len(),
        pd.dim(),
        "nilradical weights of {} are not pairwise distinct",
        rs.kind()
    );
    map
}

pub fn classify(kind: CartanKind) -> ContactReport {
    classify_system(&RootSystem::new(kind))
}

pub fn classify_system(rs: &RootSystem) -> ContactReport {
    let non = non_orthogonal_simple_roots(rs);
    let mut report = ContactReport {
        kind: rs.kind(),
        verdict: Verdict::NoneExists,
        non_orthogonal_nodes: non.clone(),
        contact_node: None,
        lambda_subset: None,
        dim: None,
        n: None,
        line_bundle_weight: None,
        line_bundle_coefficient: None,
        anticanonical_weight: None,
        identity_checked: false,
        lambda_invariant: false,
    };
    let [alpha] = non[..] else {
        return report;
    };

    let lambda_nodes = orthogonal_simple_roots(rs);
    let pd = ParabolicData::new(rs, lambda_nodes.iter().copied())
        .expect("orthogonal nodes are valid");
    let lambda = rs.to_fundamental_basis(rs.highest());
    let dim = pd.dim();

    report.verdict = Verdict::Exists;
    report.contact_node = Some(alpha);
    report.lambda_subset = Some(lambda_nodes.into_iter().collect());
    report.dim = Some(dim);
    report.n = (dim % 2 == 1).then_some((dim - 1) / 2);
    report.line_bundle_coefficient = Some(lambda.0[alpha]);
    report.anticanonical_weight = Some(pd.mu().clone());
    report.identity_checked = verify_line_bundle_identity(&pd, &lambda).unwrap_or(false);
    report.lambda_invariant = pd.is_in_invariant_lattice(&lambda);
    report.line_bundle_weight = Some(lambda);
    report
}

/// Classifies every ADE kind of rank at most `max_rank`, in
/// [`CartanKind::all_up_to`] order.
pub fn classify_all(max_rank: usize) -> Vec<ContactReport> {
    CartanKind::all_up_to(max_rank)
        .into_iter()
        .map(classify)
        .collect()
}
