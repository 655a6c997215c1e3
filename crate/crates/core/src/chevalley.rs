//! Simply-laced Lie algebras in a Chevalley basis, and the bracket form on the
//! contact distribution of `G/P_Λ`.
//!
//! Structure constants come from a bimultiplicative sign function on the root
//! lattice, fixed by orienting every Dynkin edge from the smaller to the larger
//! node index:
//!
//! ```text
//! ε(α_i, α_j) = −1  if i = j or i → j,   +1 otherwise
//! ```
//!
//! With `E_β` the basis vectors for which `[E_β, E_γ] = ε(β,γ) E_{β+γ}` and
//! `[E_β, E_{−β}] = −h_β`, we use `e_β = E_β` for positive and `e_β = −E_β` for
//! negative roots. Then `[e_β, e_{−β}] = h_β` for every root `β` and
//! `[h_i, e_β] = ⟨β, α_i^∨⟩ e_β`.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::orthogonal_simple_roots;
use crate::error::{Error, Result};
use crate::exact;
use crate::parabolic::ParabolicData;
use crate::rootsys::{CartanKind, Root, RootSystem};

/// Triples checked when an algebra is built.
const BUILD_JACOBI_SAMPLES: u64 = 2_000;
const BUILD_JACOBI_SEED: u64 = 0x5eed_cafe;

/// Integer coordinates over the basis `h_1..h_r, e_{β_1}..e_{β_N}, e_{−β_1}..e_{−β_N}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<i64>);

impl Element {
    pub fn zero(dim: usize) -> Element {
        Element(vec![0; dim])
    }

    pub fn basis(dim: usize, i: usize) -> Element {
        let mut v = vec![0; dim];
        v[i] = 1;
        Element(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Element) -> Element {
        Element(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Element {
        Element(self.0.iter().map(|c| k * c).collect())
    }
}

type Sparse = Vec<(usize, i64)>;

#[derive(Debug, Clone)]
pub struct ChevalleyAlgebra {
    rs: RootSystem,
    /// Positive roots followed by their negatives.
    roots: Vec<Root>,
    root_index: HashMap<Root, usize>,
    /// `⟨roots[k], α_i^∨⟩`, row-major by `k`.
    pairings: Vec<i64>,
    /// `N_{β,γ}` for root indices, 0 when `β+γ` is not a root.
    n_const: Vec<i8>,
    /// Index of `β+γ` in `roots`, or `u32::MAX`.
    sum_index: Vec<u32>,
}

impl ChevalleyAlgebra {
    /// Builds the algebra and spot-checks the Jacobi identity on a fixed sample.
    pub fn new(rs: RootSystem) -> Result<Self> {
        let alg = Self::build_unchecked(rs);
        let summary = alg.jacobi_sampled(BUILD_JACOBI_SAMPLES, BUILD_JACOBI_SEED);
        match summary.first_violation {
            Some((i, j, k)) => Err(Error::JacobiFailure(i, j, k)),
            None => Ok(alg),
        }
    }

    pub fn for_kind(kind: CartanKind) -> Result<Self> {
        Self::new(RootSystem::new(kind))
    }

    fn build_unchecked(rs: RootSystem) -> Self {
        let r = rs.rank();
        let mut roots: Vec<Root> = rs.positive_roots().to_vec();
        roots.extend(rs.positive_roots().iter().map(Root::neg));
        let root_index: HashMap<Root, usize> =
            roots.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let pairings = roots
            .iter()
            .flat_map(|b| (0..r).map(|i| rs.root_pairing(b, i)).collect::<Vec<_>>())
            .collect();

        let mut oriented = vec![vec![false; r]; r];
        for (i, j) in rs.kind().dynkin_edges() {
            oriented[i][j] = true;
        }
        let epsilon = |b: &Root, g: &Root| -> i64 {
            let mut e = 0;
            for i in 0..r {
                e += b.0[i] * g.0[i];
                for j in 0..r {
                    if oriented[i][j] {
                        e += b.0[i] * g.0[j];
                    }
                }
            }
            if e.rem_euclid(2) == 0 {
                1
            } else {
                -1
            }
        };
        let sign = |b: &Root| if b.is_positive() { 1 } else { -1 };

        let m = roots.len();
        let mut n_const = vec![0i8; m * m];
        let mut sum_index = vec![u32::MAX; m * m];
        for (a, b) in roots.iter().enumerate() {
            for (c, g) in roots.iter().enumerate() {
                if let Some(&s) = root_index.get(&b.add(g)) {
                    let n = sign(b) * sign(g) * sign(&roots[s]) * epsilon(b, g);
                    n_const[a * m + c] = n as i8;
                    sum_index[a * m + c] = s as u32;
                }
            }
        }

        ChevalleyAlgebra {
            rs,
            roots,
            root_index,
            pairings,
            n_const,
            sum_index,
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// `rank + |Δ|`.
    pub fn dim(&self) -> usize {
        self.rank() + self.roots.len()
    }

    /// Basis position of `e_β`.
    pub fn root_basis_index(&self, b: &Root) -> Option<usize> {
        self.root_index.get(b).map(|&k| self.rank() + k)
    }

    /// Root attached to a basis position, `None` for Cartan elements.
    pub fn basis_root(&self, i: usize) -> Option<&Root> {
        i.checked_sub(self.rank()).map(|k| &self.roots[k])
    }

    pub fn e(&self, b: &Root) -> Element {
        let i = self
            .root_basis_index(b)
            .unwrap_or_else(|| panic!("{b} is not a root of {}", self.rs.kind()));
        Element::basis(self.dim(), i)
    }

    pub fn h(&self, i: usize) -> Element {
        assert!(i < self.rank());
        Element::basis(self.dim(), i)
    }

    /// The coroot `h_β = Σ β_i h_i`.
    pub fn coroot(&self, b: &Root) -> Element {
        let mut v = vec![0; self.dim()];
        v[..self.rank()].copy_from_slice(&b.0);
        Element(v)
    }

    /// `N_{β,γ}`; zero unless `β + γ` is a root.
    pub fn structure_constant(&self, b: &Root, g: &Root) -> i64 {
        match (self.root_index.get(b), self.root_index.get(g)) {
            (Some(&a), Some(&c)) => self.n_const[a * self.roots.len() + c] as i64,
            _ => 0,
        }
    }

    fn pairing(&self, k: usize, i: usize) -> i64 {
        self.pairings[k * self.rank() + i]
    }

    fn bracket_basis(&self, i: usize, j: usize, out: &mut Sparse) {
        let r = self.rank();
        let m = self.roots.len();
        match (i < r, j < r) {
            (true, true) => {}
            (true, false) => {
                let c = self.pairing(j - r, i);
                if c != 0 {
                    out.push((j, c));
                }
            }
            (false, true) => {
                let c = self.pairing(i - r, j);
                if c != 0 {
                    out.push((i, -c));
                }
            }
            (false, false) => {
                let (a, b) = (i - r, j - r);
                if (a + m / 2) % m == b {
                    for (t, &c) in self.roots[a].0.iter().enumerate() {
                        if c != 0 {
                            out.push((t, c));
                        }
                    }
                } else {
                    let s = self.sum_index[a * m + b];
                    if s != u32::MAX {
                        out.push((r + s as usize, self.n_const[a * m + b] as i64));
                    }
                }
            }
        }
    }

    fn bracket_sparse(&self, x: &[(usize, i64)], y: &[(usize, i64)]) -> Sparse {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        let mut tmp = Vec::new();
        for &(i, a) in x {
            for &(j, b) in y {
                tmp.clear();
                self.bracket_basis(i, j, &mut tmp);
                for &(k, c) in &tmp {
                    *acc.entry(k).or_insert(0) += a * b * c;
                }
            }
        }
        acc.into_iter().filter(|&(_, c)| c != 0).collect()
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        let sparse = |e: &Element| -> Sparse {
            e.0.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect()
        };
        let mut out = Element::zero(self.dim());
        for (k, c) in self.bracket_sparse(&sparse(x), &sparse(y)) {
            out.0[k] = c;
        }
        out
    }

    /// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` on basis vectors.
    pub fn jacobiator_basis(&self, i: usize, j: usize, k: usize) -> Sparse {
        let one = |t: usize| vec![(t, 1i64)];
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            let inner = self.bracket_sparse(&one(b), &one(c));
            for (t, v) in self.bracket_sparse(&one(a), &inner) {
                *acc.entry(t).or_insert(0) += v;
            }
        }
        acc.into_iter().filter(|&(_, c)| c != 0).collect()
    }

    /// Jacobi identity on every unordered basis triple (with repetition).
    pub fn jacobi_exhaustive(&self) -> JacobiSummary {
        let d = self.dim();
        let mut summary = JacobiSummary::new(JacobiMode::Exhaustive);
        for i in 0..d {
            for j in i..d {
                for k in j..d {
                    summary.record((i, j, k), self.jacobiator_basis(i, j, k).is_empty());
                }
            }
        }
        summary
    }

    /// Jacobi identity on `count` uniformly random basis triples.
    pub fn jacobi_sampled(&self, count: u64, seed: u64) -> JacobiSummary {
        let d = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut summary = JacobiSummary::new(JacobiMode::Sampled { seed });
        for _ in 0..count {
            let t = (
                rng.random_range(0..d),
                rng.random_range(0..d),
                rng.random_range(0..d),
            );
            summary.record(t, self.jacobiator_basis(t.0, t.1, t.2).is_empty());
        }
        summary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JacobiMode {
    Exhaustive,
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiSummary {
    pub mode: JacobiMode,
    pub triples: u64,
    pub violations: u64,
    pub first_violation: Option<(usize, usize, usize)>,
}

impl JacobiSummary {
    fn new(mode: JacobiMode) -> Self {
        JacobiSummary {
            mode,
            triples: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn record(&mut self, t: (usize, usize, usize), ok: bool) {
        self.triples += 1;
        if !ok {
            self.violations += 1;
            self.first_violation.get_or_insert(t);
        }
    }
}

/// The `e_λ`-component of the bracket on the weights of `(g_{−λ})^⊥ / p_Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactFormMatrix {
    pub highest: Root,
    pub weights: Vec<Root>,
    pub entries: Vec<Vec<i64>>,
}

impl ContactFormMatrix {
    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == -self.entries[j][i]))
    }

    /// `M[i][j] ≠ 0` exactly when `β_i + β_j = λ`.
    pub fn has_pairing_structure(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (self.entries[i][j] != 0) == (self.weights[i].add(&self.weights[j]) == self.highest)
            })
        })
    }

    /// `β ↦ λ − β` permutes the weights without fixed points.
    pub fn involution_fixed_point_free(&self) -> bool {
        self.weights.iter().all(|b| {
            let partner = self.highest.sub(b);
            &partner != b && self.weights.contains(&partner)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nondegeneracy {
    pub size: usize,
    pub rank: usize,
    pub nondegenerate: bool,
}

/// Weights `Δ⁺ ∖ ({λ} ∪ Δ_Λ⁺)` of the contact fibre at the base point.
pub fn perp_complement_weights(pd: &ParabolicData<'_>) -> Result<Vec<Root>> {
    let rs = pd.root_system();
    let lambda_nodes = orthogonal_simple_roots(rs);
    if pd.subset() != &lambda_nodes {
        return Err(Error::NotContactParabolic(format!(
            "{}: S = {:?} but the nodes orthogonal to the highest root are {:?}",
            rs.kind(),
            pd.subset(),
            lambda_nodes
        )));
    }
    if !pd.nilradical().contains(rs.highest()) {
        return Err(Error::NotContactParabolic(format!(
            "{}: highest root lies in the Levi factor",
            rs.kind()
        )));
    }
    Ok(pd
        .nilradical()
        .iter()
        .filter(|&b| b != rs.highest())
        .cloned()
        .collect())
}

pub fn contact_form_matrix(
    alg: &ChevalleyAlgebra,
    pd: &ParabolicData<'_>,
) -> Result<ContactFormMatrix> {
    if pd.root_system().kind() != alg.root_system().kind() {
        return Err(Error::NotContactParabolic(format!(
            "parabolic of {} used with algebra of {}",
            pd.root_system().kind(),
            alg.root_system().kind()
        )));
    }
    let weights = perp_complement_weights(pd)?;
    let highest = alg.root_system().highest().clone();
    let top = alg.root_basis_index(&highest).expect("highest root is a root");
    let basis: Vec<Element> = weights.iter().map(|b| alg.e(b)).collect();
    let entries = basis
        .iter()
        .map(|x| basis.iter().map(|y| alg.bracket(x, y).0[top]).collect())
        .collect();
    Ok(ContactFormMatrix {
        highest,
        weights,
        entries,
    })
}

/// Exact rank over the rationals; nondegenerate iff the rank is full.
pub fn certify_nondegenerate(m: &ContactFormMatrix) -> Nondegeneracy {
    let rank = exact::rank(&m.entries);
    Nondegeneracy {
        size: m.size(),
        rank,
        nondegenerate: rank == m.size(),
    }
}

/// Everything the contact certificate checks for one kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactCertificate {
    pub kind: CartanKind,
    pub dim: usize,
    pub n: usize,
    pub matrix_size: usize,
    pub rank: usize,
    pub nondegenerate: bool,
    pub antisymmetric: bool,
    pub pairing_structure: bool,
    pub involution_fixed_point_free: bool,
    /// `Σ β = n·λ` over the fibre weights.
    pub weight_balance: bool,
    pub jacobi: JacobiSummary,
}

impl ContactCertificate {
    pub fn passed(&self) -> bool {
        self.nondegenerate
            && self.rank == 2 * self.n
            && self.antisymmetric
            && self.pairing_structure
            && self.involution_fixed_point_free
            && self.weight_balance
            && self.jacobi.violations == 0
    }
}

/// Builds the contact form matrix of `alg` and runs every check on it.
/// `jacobi` is the Jacobi summary to attach (exhaustive or sampled).
pub fn certify_algebra(alg: &ChevalleyAlgebra, jacobi: JacobiSummary) -> Result<(ContactCertificate, ContactFormMatrix)> {
    let rs = alg.root_system();
    let pd = ParabolicData::new(rs, orthogonal_simple_roots(rs))?;
    let m = contact_form_matrix(alg, &pd)?;
    let nd = certify_nondegenerate(&m);
    let dim = pd.dim();
    let n = (dim - 1) / 2;

    let mut sum = Root(vec![0; rs.rank()]);
    for b in &m.weights {
        sum = sum.add(b);
    }
    let lambda = rs.to_fundamental_basis(rs.highest());
    let weight_balance = rs.to_fundamental_basis(&sum) == lambda.scale(n as i64);

    let cert = ContactCertificate {
        kind: rs.kind(),
        dim,
        n,
        matrix_size: m.size(),
        rank: nd.rank,
        nondegenerate: nd.nondegenerate,
        antisymmetric: m.is_antisymmetric(),
        pairing_structure: m.has_pairing_structure(),
        involution_fixed_point_free: m.involution_fixed_point_free(),
        weight_balance,
        jacobi,
    };
    Ok((cert, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Weight;

    fn alg(s: &str) -> ChevalleyAlgebra {
        ChevalleyAlgebra::for_kind(s.parse().unwrap()).unwrap()
    }

    fn contact_pd(a: &ChevalleyAlgebra) -> ParabolicData<'_> {
        let rs = a.root_system();
        ParabolicData::new(rs, orthogonal_simple_roots(rs)).unwrap()
    }

    #[test]
    fn sl2_relations() {
        let a = alg("A1");
        let (p, m) = (Root(vec![1]), Root(vec![-1]));
        assert_eq!(a.bracket(&a.e(&p), &a.e(&m)), a.h(0));
        assert_eq!(a.bracket(&a.h(0), &a.e(&p)), a.e(&p).scale(2));
        assert_eq!(a.bracket(&a.h(0), &a.e(&m)), a.e(&m).scale(-2));
    }

    #[test]
    fn a2_antisymmetry() {
        let a = alg("A2");
        let (x, y) = (Root(vec![1, 0]), Root(vec![0, 1]));
        let s = Root(vec![1, 1]);
        let xy = a.bracket(&a.e(&x), &a.e(&y));
        let yx = a.bracket(&a.e(&y), &a.e(&x));
        assert!(xy == a.e(&s) || xy == a.e(&s).scale(-1));
        assert_eq!(yx, xy.scale(-1));
    }

    #[test]
    fn bracket_basics() {
        let a = alg("D4");
        let lam = a.root_system().highest().clone();
        let x = a.e(&Root(vec![0, 1, 1, 0])).add(&a.h(2).scale(3));
        assert!(a.bracket(&x, &x).is_zero());
        for g in a.root_system().positive_roots() {
            for i in 0..4 {
                let c = a.root_system().root_pairing(g, i);
                assert_eq!(a.bracket(&a.h(i), &a.e(g)), a.e(g).scale(c));
            }
            let partner = lam.sub(g);
            if a.root_system().positive_index(&partner).is_some() {
                let b = a.bracket(&a.e(g), &a.e(&partner));
                assert!(b == a.e(&lam) || b == a.e(&lam).scale(-1));
            }
        }
    }

    #[test]
    fn coroots_from_root_pairs() {
        let a = alg("E6");
        for b in a.root_system().positive_roots() {
            assert_eq!(a.bracket(&a.e(b), &a.e(&b.neg())), a.coroot(b));
            assert_eq!(a.bracket(&a.e(&b.neg()), &a.e(b)), a.coroot(&b.neg()));
        }
    }

    #[test]
    fn structure_constants_are_units_and_antisymmetric() {
        for s in ["A3", "D4", "E6"] {
            let a = alg(s);
            let rs = a.root_system();
            let all: Vec<Root> = rs
                .positive_roots()
                .iter()
                .cloned()
                .chain(rs.positive_roots().iter().map(Root::neg))
                .collect();
            for b in &all {
                for g in &all {
                    let n = a.structure_constant(b, g);
                    assert_eq!(n, -a.structure_constant(g, b));
                    let is_root = rs.is_root(&b.add(g));
                    assert_eq!(n.abs() == 1, is_root, "{s} {b} {g}");
                }
            }
        }
    }

    #[test]
    fn exhaustive_jacobi_small() {
        for s in ["A1", "A2", "A3", "D4"] {
            let j = alg(s).jacobi_exhaustive();
            assert_eq!(j.violations, 0, "{s}: {:?}", j.first_violation);
        }
    }

    #[test]
    fn broken_sign_table_is_caught() {
        let mut a = ChevalleyAlgebra::build_unchecked(RootSystem::new("A3".parse().unwrap()));
        let m = a.roots.len();
        let (x, y) = (0, 1);
        let (ix, iy) = (a.root_index[&a.rs.simple_root(x)], a.root_index[&a.rs.simple_root(y)]);
        a.n_const[ix * m + iy] *= -1;
        a.n_const[iy * m + ix] *= -1;
        assert!(a.jacobi_exhaustive().violations > 0);
    }

    #[test]
    fn perp_weights() {
        let a1 = alg("A1");
        assert!(perp_complement_weights(&contact_pd(&a1)).unwrap().is_empty());
        assert_eq!(perp_complement_weights(&contact_pd(&alg("D4"))).unwrap().len(), 8);
        assert_eq!(perp_complement_weights(&contact_pd(&alg("E6"))).unwrap().len(), 20);

        let d4 = alg("D4");
        let wrong = ParabolicData::maximal(d4.root_system(), 0).unwrap();
        assert!(matches!(
            perp_complement_weights(&wrong),
            Err(Error::NotContactParabolic(_))
        ));
    }

    #[test]
    fn a1_matrix_is_empty() {
        let a = alg("A1");
        let m = contact_form_matrix(&a, &contact_pd(&a)).unwrap();
        assert_eq!(m.size(), 0);
        let nd = certify_nondegenerate(&m);
        assert_eq!((nd.rank, nd.nondegenerate), (0, true));
    }

    #[test]
    fn d4_matrix_shape() {
        let a = alg("D4");
        let m = contact_form_matrix(&a, &contact_pd(&a)).unwrap();
        assert_eq!(m.size(), 8);
        assert!(m.is_antisymmetric());
        assert!(m.has_pairing_structure());
        assert!(m.involution_fixed_point_free());
        for row in &m.entries {
            let nz: Vec<_> = row.iter().filter(|&&c| c != 0).collect();
            assert_eq!(nz.len(), 1);
            assert_eq!(nz[0].abs(), 1);
        }
    }

    #[test]
    fn exact_ranks() {
        for (s, size) in [("D5", 12), ("E7", 32)] {
            let a = alg(s);
            let m = contact_form_matrix(&a, &contact_pd(&a)).unwrap();
            let nd = certify_nondegenerate(&m);
            assert_eq!((nd.size, nd.rank, nd.nondegenerate), (size, size, true));
        }
    }

    #[test]
    fn zeroed_pair_drops_rank_by_two() {
        let a = alg("D4");
        let mut m = contact_form_matrix(&a, &contact_pd(&a)).unwrap();
        let j = m.entries[0].iter().position(|&c| c != 0).unwrap();
        m.entries[0][j] = 0;
        m.entries[j][0] = 0;
        let nd = certify_nondegenerate(&m);
        assert_eq!((nd.rank, nd.nondegenerate), (6, false));
        assert!(m.is_antisymmetric());
        assert!(!m.has_pairing_structure());
    }

    #[test]
    fn mismatched_algebra_is_rejected() {
        let a = alg("D4");
        let other = RootSystem::new("D5".parse().unwrap());
        let pd = ParabolicData::new(&other, orthogonal_simple_roots(&other)).unwrap();
        assert!(contact_form_matrix(&a, &pd).is_err());
    }

    #[test]
    fn certificates_for_small_kinds() {
        for s in ["A1", "D4", "D5", "D6", "E6"] {
            let a = alg(s);
            let j = a.jacobi_sampled(500, 1);
            let (c, _) = certify_algebra(&a, j).unwrap();
            assert!(c.passed(), "{s}: {c:?}");
            assert_eq!(c.rank, c.dim - 1);
        }
    }

    #[test]
    fn weight_balance_d4() {
        let a = alg("D4");
        let w = perp_complement_weights(&contact_pd(&a)).unwrap();
        let sum = w.iter().fold(Root(vec![0; 4]), |acc, b| acc.add(b));
        assert_eq!(
            a.root_system().to_fundamental_basis(&sum),
            Weight(vec![0, 4, 0, 0])
        );
    }
}
