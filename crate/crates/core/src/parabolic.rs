//! Standard parabolics `P_S` and the weights of `g/p_S`.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::rootsys::{Root, RootSystem, Weight};

/// Combinatorial data of the standard parabolic attached to a node subset `S`.
///
/// The nilradical weights `Δ⁺ ∖ Δ_S⁺` are the torus weights of the tangent
/// space `g/p_S` of `G/P_S` at the base point.
#[derive(Debug, Clone)]
pub struct ParabolicData<'a> {
    rs: &'a RootSystem,
    s: BTreeSet<usize>,
    levi_positive: Vec<Root>,
    nilradical: Vec<Root>,
    mu: Weight,
}

impl<'a> ParabolicData<'a> {
    pub fn new(rs: &'a RootSystem, s: impl IntoIterator<Item = usize>) -> Result<Self> {
        let s: BTreeSet<usize> = s.into_iter().collect();
        for &i in &s {
            rs.check_node(i)?;
        }
        let (levi_positive, nilradical): (Vec<Root>, Vec<Root>) = rs
            .positive_roots()
            .iter()
            .cloned()
            .partition(|r| r.support().all(|i| s.contains(&i)));
        let mu = nilradical
            .iter()
            .map(|r| rs.to_fundamental_basis(r))
            .fold(Weight::zero(rs.rank()), |acc, w| acc.add(&w));
        Ok(ParabolicData {
            rs,
            s,
            levi_positive,
            nilradical,
            mu,
        })
    }

    /// Maximal parabolic `P_{Π∖{node}}`.
    pub fn maximal(rs: &'a RootSystem, node: usize) -> Result<Self> {
        rs.check_node(node)?;
        Self::new(rs, (0..rs.rank()).filter(|&i| i != node))
    }

    pub fn root_system(&self) -> &'a RootSystem {
        self.rs
    }

    pub fn subset(&self) -> &BTreeSet<usize> {
        &self.s
    }

    /// `Δ_S⁺`: positive roots supported on `S`.
    pub fn levi_positive(&self) -> &[Root] {
        &self.levi_positive
    }

    /// `Δ⁺ ∖ Δ_S⁺`, in the root system's enumeration order.
    pub fn nilradical(&self) -> &[Root] {
        &self.nilradical
    }

    /// `μ_S`, the sum of the nilradical weights; the weight of `K^∨`.
    pub fn mu(&self) -> &Weight {
        &self.mu
    }

    /// `dim G/P_S`.
    pub fn dim(&self) -> usize {
        self.nilradical.len()
    }

    /// Second Betti number: one codimension-1 Schubert cell per node outside `S`.
    pub fn betti2(&self) -> usize {
        self.rs.rank() - self.s.len()
    }

    /// `{ω_β : β ∈ Π∖S}`, a ℤ-basis of the `W_S`-invariant weights.
    pub fn invariant_lattice_basis(&self) -> Vec<Weight> {
        let n = self.rs.rank();
        (0..n)
            .filter(|i| !self.s.contains(i))
            .map(|i| Weight::fundamental(n, i))
            .collect()
    }

    /// A weight is `W_S`-fixed iff it is orthogonal to every simple root in `S`,
    /// i.e. its fundamental coordinates vanish on `S`.
    pub fn is_in_invariant_lattice(&self, w: &Weight) -> bool {
        self.s.iter().all(|&i| w.0[i] == 0)
    }
}
