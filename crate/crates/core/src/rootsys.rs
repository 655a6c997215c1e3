//! Simply-laced root systems over the integers.
//!
//! Dynkin nodes are indexed from 0 and follow the Bourbaki labelling, with
//! node `i` carrying the simple root `α_{i+1}`:
//!
//! | series | edges (0-based)                                   | highest root |
//! |--------|---------------------------------------------------|--------------|
//! | `A_n`  | `(i, i+1)` for `0 <= i < n-1`                      | `ω_1 + ω_n` (`2ω_1` for `A_1`) |
//! | `D_n`  | `(i, i+1)` for `0 <= i < n-2`, plus `(n-3, n-1)`    | `ω_2`        |
//! | `E_n`  | `(0, 2)`, `(1, 3)`, `(i, i+1)` for `2 <= i < n-1`    | `ω_2` (E6), `ω_1` (E7), `ω_8` (E8) |
//!
//! For `D_n` realized on the rotation torus of `SO_{2n}` this is the usual
//! labelling `α_j = θ_j − θ_{j+1}` for `j < n` and `α_n = θ_{n−1} + θ_n`, so the
//! highest root `θ_1 + θ_2` is attached to node 1 (`α_2`).
//!
//! Roots are stored in the simple-root basis, weights in the fundamental-weight
//! basis. With every root normalized to `(α, α) = 2` the Gram matrix of the
//! simple roots is the Cartan matrix itself.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    D,
    E,
}

/// A simply-laced Cartan type; only valid ranks can be constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CartanKind {
    series: Series,
    rank: usize,
}

impl CartanKind {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(Self { series, rank })
        } else {
            Err(Error::InvalidKind(format!("{series:?}{rank}")))
        }
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Every ADE kind of rank at most `max_rank`, in the order A, D, E and by rank.
    pub fn all_up_to(max_rank: usize) -> Vec<CartanKind> {
        let mut out = Vec::new();
        for (series, lo) in [(Series::A, 1), (Series::D, 4), (Series::E, 6)] {
            for rank in lo..=max_rank {
                if let Ok(k) = CartanKind::new(series, rank) {
                    out.push(k);
                }
            }
        }
        out
    }

    /// Undirected Dynkin edges `(i, j)` with `i < j`.
    pub fn dynkin_edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.series {
            Series::A => (0..n - 1).map(|i| (i, i + 1)).collect(),
            Series::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                e
            }
            Series::E => {
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                e
            }
        }
    }
}

impl fmt::Display for CartanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

impl FromStr for CartanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidKind(s.to_string());
        let mut chars = t.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('D') => Series::D,
            Some('E') => Series::E,
            _ => return Err(bad()),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let rank: usize = digits.parse().map_err(|_| bad())?;
        CartanKind::new(series, rank).map_err(|_| bad())
    }
}

impl TryFrom<String> for CartanKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CartanKind> for String {
    fn from(k: CartanKind) -> String {
        k.to_string()
    }
}

/// Coefficients in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i64>);

/// Coefficients in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Root {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.neg().is_positive()
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Node indices with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
    }
}

impl Weight {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn zero(rank: usize) -> Weight {
        Weight(vec![0; rank])
    }

    /// The fundamental weight `ω_i`.
    pub fn fundamental(rank: usize, i: usize) -> Weight {
        let mut w = vec![0; rank];
        w[i] = 1;
        Weight(w)
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| k * c).collect())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.0)
    }
}

fn write_coords(f: &mut fmt::Formatter<'_>, c: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in c.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// An ADE root system with its positive roots enumerated.
#[derive(Debug, Clone)]
pub struct RootSystem {
    kind: CartanKind,
    cartan: Vec<Vec<i64>>,
    positive: Vec<Root>,
    highest: Root,
    index: HashMap<Root, usize>,
}

impl RootSystem {
    /// Builds the root system of `kind`. Positive roots are ordered by height,
    /// then by simple-root coordinates in descending lexicographic order, so the
    /// simple roots come first in node order.
    pub fn new(kind: CartanKind) -> RootSystem {
        let n = kind.rank();
        let mut cartan = vec![vec![0i64; n]; n];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j) in kind.dynkin_edges() {
            cartan[i][j] = -1;
            cartan[j][i] = -1;
        }

        let positive = enumerate_positive_roots(&cartan);
        let top = positive.iter().map(Root::height).max().unwrap();
        let tops: Vec<&Root> = positive.iter().filter(|r| r.height() == top).collect();
        assert_eq!(tops.len(), 1, "{kind}: highest root is not unique");
        let highest = tops[0].clone();
        let index = positive
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();

        RootSystem {
            kind,
            cartan,
            positive,
            highest,
            index,
        }
    }

    pub fn kind(&self) -> CartanKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn highest(&self) -> &Root {
        &self.highest
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        Root(c)
    }

    /// Position of a positive root in [`positive_roots`](Self::positive_roots).
    pub fn positive_index(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r) || self.index.contains_key(&r.neg())
    }

    /// `δ(h_β)` for the simple coroot at `beta_index`, i.e. the `β`-th
    /// fundamental coordinate of `δ`.
    pub fn pairing(&self, delta: &Weight, beta_index: usize) -> Result<i64> {
        self.check_node(beta_index)?;
        Ok(delta.0[beta_index])
    }

    /// `⟨r, α_i^∨⟩` for a root given in simple-root coordinates.
    pub fn root_pairing(&self, r: &Root, i: usize) -> i64 {
        (0..self.rank()).map(|j| r.0[j] * self.cartan[j][i]).sum()
    }

    pub fn to_fundamental_basis(&self, r: &Root) -> Weight {
        Weight((0..self.rank()).map(|i| self.root_pairing(r, i)).collect())
    }

    /// Inverse of [`to_fundamental_basis`](Self::to_fundamental_basis); `None`
    /// when the weight is not in the root lattice.
    pub fn to_root_basis(&self, w: &Weight) -> Option<Root> {
        let at: Vec<Vec<i64>> = (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| self.cartan[j][i]).collect())
            .collect();
        let x = exact::solve(&at, &w.0)?;
        x.into_iter()
            .map(|q| {
                if q.denom().is_one() {
                    i64::try_from(q.numer()).ok()
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(Root)
    }

    pub fn inner_product(&self, x: &Root, y: &Root) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += x.0[i] * self.cartan[i][j] * y.0[j];
            }
        }
        s
    }

    /// Simple reflection `s_i(r) = r − ⟨r, α_i^∨⟩ α_i`.
    pub fn reflect(&self, r: &Root, i: usize) -> Root {
        let mut c = r.0.clone();
        c[i] -= self.root_pairing(r, i);
        Root(c)
    }

    /// `1 + height(λ)`; for simply-laced types this is the (dual) Coxeter number.
    pub fn dual_coxeter_number(&self) -> i64 {
        1 + self.highest.height()
    }

    pub(crate) fn check_node(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                index: i,
                rank: self.rank(),
            })
        }
    }
}

/// Closed-form number of positive roots.
pub fn positive_root_count(kind: CartanKind) -> usize {
    let n = kind.rank();
    match kind.series() {
        Series::A => n * (n + 1) / 2,
        Series::D => n * (n - 1),
        Series::E => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
    }
}

/// Breadth-first by height using `α_i`-strings: `β + α_i` is a root exactly when
/// `p − ⟨β, α_i^∨⟩ > 0`, where `p` is how far the string extends below `β`.
fn enumerate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Root> {
    let n = cartan.len();
    let simple: Vec<Root> = (0..n)
        .map(|i| {
            let mut c = vec![0; n];
            c[i] = 1;
            Root(c)
        })
        .collect();
    let pairing = |r: &Root, i: usize| -> i64 { (0..n).map(|j| r.0[j] * cartan[j][i]).sum() };

    let mut known: HashSet<Root> = simple.iter().cloned().collect();
    let mut out = simple.clone();
    let mut layer = simple;
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for beta in &layer {
            for i in 0..n {
                if beta.0.iter().enumerate().all(|(j, &c)| c == (i == j) as i64) {
                    continue;
                }
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down.0[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing(beta, i) > 0 {
                    let mut up = beta.clone();
                    up.0[i] += 1;
                    next.insert(up);
                }
            }
        }
        layer = next.into_iter().rev().collect();
        known.extend(layer.iter().cloned());
        out.extend(layer.iter().cloned());
    }
    out
}
