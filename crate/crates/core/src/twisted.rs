//! Twisted affine types, diagram automorphisms, level-l weight sets and the
//! orbit-collapse map from fixed weights to the orbit Lie algebra.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{longest_element_dual, FiniteType, Series, Weight};

/// An affine Kac-Moody type `X_N^(m)`. Twisted variants carry the rank `n`
/// of the horizontal subalgebra.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TwistedAffineType {
    Untwisted(FiniteType),
    /// `A_{2n}^(2)`, horizontal `C_n` (`A_1` when `n = 1`).
    A2n_2 {
        n: usize,
    },
    /// `A_{2n-1}^(2)`, horizontal `C_n`.
    A2nm1_2 {
        n: usize,
    },
    /// `D_{n+1}^(2)`, horizontal `B_n`.
    Dnp1_2 {
        n: usize,
    },
    E6_2,
    D4_3,
}

fn ft(series: Series, rank: usize) -> FiniteType {
    FiniteType::new(series, rank).expect("rank validated by caller")
}

impl TwistedAffineType {
    pub fn a2n_2(n: usize) -> Result<Self> {
        if n >= 1 {
            Ok(Self::A2n_2 { n })
        } else {
            Err(Error::InvalidType("A0~2".into()))
        }
    }

    pub fn a2nm1_2(n: usize) -> Result<Self> {
        if n >= 2 {
            Ok(Self::A2nm1_2 { n })
        } else {
            Err(Error::InvalidType(format!("A{}~2", 2 * n as i64 - 1)))
        }
    }

    pub fn dnp1_2(n: usize) -> Result<Self> {
        if n >= 2 {
            Ok(Self::Dnp1_2 { n })
        } else {
            Err(Error::InvalidType(format!("D{}~2", n + 1)))
        }
    }

    pub fn is_twisted(&self) -> bool {
        !matches!(self, Self::Untwisted(_))
    }

    pub fn horizontal(&self) -> FiniteType {
        match *self {
            Self::Untwisted(g) => g,
            Self::A2n_2 { n: 1 } => ft(Series::A, 1),
            Self::A2n_2 { n } | Self::A2nm1_2 { n } => ft(Series::C, n),
            Self::Dnp1_2 { n } => ft(Series::B, n),
            Self::E6_2 => ft(Series::F, 4),
            Self::D4_3 => ft(Series::G, 2),
        }
    }

    pub fn rank(&self) -> usize {
        self.horizontal().rank()
    }

    /// Coxeter labels `a_1..a_n` of the horizontal vertices.
    pub fn labels(&self) -> Vec<i64> {
        match *self {
            Self::Untwisted(g) => g.highest_root(),
            Self::A2n_2 { n } => {
                let mut a = vec![2; n];
                a[n - 1] = 1;
                a
            }
            Self::A2nm1_2 { n } => {
                let mut a = vec![2; n];
                a[0] = 1;
                a[n - 1] = 1;
                a
            }
            Self::Dnp1_2 { n } => vec![1; n],
            Self::E6_2 => vec![1, 2, 3, 2],
            Self::D4_3 => vec![1, 2],
        }
    }

    /// Dual Coxeter labels `a_1^vee..a_n^vee`; the level of `sum b_i omega_i`
    /// is `sum a_i^vee b_i`.
    pub fn dual_labels(&self) -> Vec<i64> {
        match *self {
            Self::Untwisted(g) => g.dual_labels(),
            Self::A2n_2 { n } => vec![2; n],
            Self::A2nm1_2 { n } => {
                let mut a = vec![2; n];
                a[0] = 1;
                a
            }
            Self::Dnp1_2 { n } => {
                let mut a = vec![2; n];
                a[n - 1] = 1;
                a
            }
            Self::E6_2 => vec![2, 4, 3, 2],
            Self::D4_3 => vec![3, 2],
        }
    }

    /// Label of the affine vertex.
    pub fn a0(&self) -> i64 {
        match self {
            Self::A2n_2 { .. } => 2,
            _ => 1,
        }
    }

    pub fn dual_coxeter_number(&self) -> i64 {
        1 + self.dual_labels().iter().sum::<i64>()
    }

    pub fn coxeter_number(&self) -> i64 {
        self.a0() + self.labels().iter().sum::<i64>()
    }

    /// The type whose level-l weights index the columns of the twisted
    /// S-matrix.
    pub fn paired(&self) -> Self {
        match *self {
            Self::A2nm1_2 { n } => Self::Dnp1_2 { n },
            Self::Dnp1_2 { n } => Self::A2nm1_2 { n },
            other => other,
        }
    }

    /// Column vertex `j` corresponds to row vertex `column_perm()[j]`.
    pub fn column_perm(&self) -> Vec<usize> {
        match self {
            Self::E6_2 => vec![3, 2, 1, 0],
            Self::D4_3 => vec![1, 0],
            _ => (0..self.rank()).collect(),
        }
    }

    /// The simple Lie algebra and diagram automorphism this type comes from.
    pub fn unfolded(&self) -> Option<(FiniteType, DiagramAutomorphism)> {
        let g = match *self {
            Self::Untwisted(_) => return None,
            Self::A2n_2 { n } => ft(Series::A, 2 * n),
            Self::A2nm1_2 { n } => ft(Series::A, 2 * n - 1),
            Self::Dnp1_2 { n } => ft(Series::D, n + 1),
            Self::E6_2 => ft(Series::E, 6),
            Self::D4_3 => return Some((ft(Series::D, 4), DiagramAutomorphism::triality())),
        };
        DiagramAutomorphism::standard(g, 2).ok().map(|s| (g, s))
    }

    /// Untwisted partner with transposed Cartan matrix, and the map from row
    /// vertices to its vertices. `A_{2n}^(2)` has none.
    pub fn transpose_partner(&self) -> Option<(FiniteType, Vec<usize>)> {
        match *self {
            Self::A2nm1_2 { n } => Some((ft(Series::B, n), (0..n).collect())),
            Self::Dnp1_2 { n } => Some((ft(Series::C, n), (0..n).collect())),
            Self::D4_3 => Some((ft(Series::G, 2), vec![1, 0])),
            Self::E6_2 => Some((ft(Series::F, 4), vec![3, 2, 1, 0])),
            _ => None,
        }
    }
}

impl fmt::Display for TwistedAffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Untwisted(g) => write!(f, "{g}"),
            Self::A2n_2 { n } => write!(f, "A{}~2", 2 * n),
            Self::A2nm1_2 { n } => write!(f, "A{}~2", 2 * n - 1),
            Self::Dnp1_2 { n } => write!(f, "D{}~2", n + 1),
            Self::E6_2 => write!(f, "E6~2"),
            Self::D4_3 => write!(f, "D4~3"),
        }
    }
}

impl FromStr for TwistedAffineType {
    type Err = Error;

    /// Accepts `A3`, `A3~1`, `A3~2`, `A4~2`, `D5~2`, `E6~2`, `D4~3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidType(s.to_string());
        let (base, m) = match s.split_once('~') {
            Some((b, m)) => (b, m.parse::<u32>().map_err(|_| bad())?),
            None => (s, 1),
        };
        let g: FiniteType = base.parse().map_err(|_| bad())?;
        let r = g.rank();
        match (g.series(), m) {
            (_, 1) => Ok(Self::Untwisted(g)),
            (Series::A, 2) if r.is_multiple_of(2) => Self::a2n_2(r / 2),
            (Series::A, 2) if r >= 3 => Self::a2nm1_2(r.div_ceil(2)),
            (Series::D, 2) => Self::dnp1_2(r - 1),
            (Series::E, 2) if r == 6 => Ok(Self::E6_2),
            (Series::D, 3) if r == 4 => Ok(Self::D4_3),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for TwistedAffineType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TwistedAffineType> for String {
    fn from(t: TwistedAffineType) -> String {
        t.to_string()
    }
}

/// A Dynkin diagram symmetry of a simply laced type (or the identity).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramAutomorphism {
    ty: FiniteType,
    order: u32,
    perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(ty: FiniteType) -> Self {
        DiagramAutomorphism {
            ty,
            order: 1,
            perm: (0..ty.rank()).collect(),
        }
    }

    /// The order-3 rotation of the three outer vertices of D4.
    pub fn triality() -> Self {
        DiagramAutomorphism {
            ty: ft(Series::D, 4),
            order: 3,
            perm: vec![2, 1, 3, 0],
        }
    }

    /// The standard automorphism of the given order: the identity, the
    /// diagram flip of A_n / D_n / E6, or D4 triality.
    pub fn standard(ty: FiniteType, order: u32) -> Result<Self> {
        let n = ty.rank();
        let unsupported =
            || Error::InvalidType(format!("{ty} has no diagram automorphism of order {order}"));
        match order {
            1 => Ok(Self::identity(ty)),
            2 => {
                let mut perm: Vec<usize> = (0..n).collect();
                match ty.series() {
                    Series::A if n >= 2 => perm.reverse(),
                    Series::D => perm.swap(n - 2, n - 1),
                    Series::E if n == 6 => {
                        perm.swap(0, 4);
                        perm.swap(1, 3);
                    }
                    _ => return Err(unsupported()),
                }
                Ok(DiagramAutomorphism { ty, order: 2, perm })
            }
            3 if ty == ft(Series::D, 4) => Ok(Self::triality()),
            _ => Err(unsupported()),
        }
    }

    /// Builds an automorphism from an explicit vertex permutation.
    pub fn from_perm(ty: FiniteType, perm: Vec<usize>) -> Result<Self> {
        let n = ty.rank();
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidType(format!(
                "{perm:?} is not a permutation of {n} vertices"
            )));
        }
        let c = ty.cartan_matrix();
        for i in 0..n {
            for j in 0..n {
                if c[perm[i]][perm[j]] != c[i][j] {
                    return Err(Error::InvalidType(format!(
                        "{perm:?} is not a symmetry of {ty}"
                    )));
                }
            }
        }
        let mut order = 1;
        let mut p = perm.clone();
        while p.iter().enumerate().any(|(i, &x)| i != x) {
            p = p.iter().map(|&x| perm[x]).collect();
            order += 1;
        }
        Ok(DiagramAutomorphism { ty, order, perm })
    }

    pub fn ty(&self) -> FiniteType {
        self.ty
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn power(&self, k: u32) -> Self {
        let mut p: Vec<usize> = (0..self.ty.rank()).collect();
        for _ in 0..k % self.order {
            p = p.iter().map(|&x| self.perm[x]).collect();
        }
        Self::from_perm(self.ty, p).expect("powers of a symmetry are symmetries")
    }

    pub fn name(&self) -> &'static str {
        match self.order {
            1 => "id",
            2 => "flip",
            _ => "triality",
        }
    }

    pub fn fixes(&self, coeffs: &[i64]) -> bool {
        (0..coeffs.len()).all(|i| coeffs[self.perm[i]] == coeffs[i])
    }

    /// Vertex orbits, sorted by their smallest vertex. Orbit `k` is vertex `k`
    /// of the orbit Lie algebra.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.ty.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![i];
            seen[i] = true;
            let mut j = self.perm[i];
            while j != i {
                seen[j] = true;
                orbit.push(j);
                j = self.perm[j];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Twisted affine type of the diagram class; `None` for the identity.
    pub fn twisted_type(&self) -> Option<TwistedAffineType> {
        if self.is_trivial() {
            return None;
        }
        let n = self.ty.rank();
        match (self.ty.series(), self.order) {
            (Series::A, 2) if n.is_multiple_of(2) => Some(TwistedAffineType::A2n_2 { n: n / 2 }),
            (Series::A, 2) => Some(TwistedAffineType::A2nm1_2 { n: n.div_ceil(2) }),
            (Series::D, 2) => Some(TwistedAffineType::Dnp1_2 { n: n - 1 }),
            (Series::E, 2) => Some(TwistedAffineType::E6_2),
            (Series::D, 3) => Some(TwistedAffineType::D4_3),
            _ => None,
        }
    }

    /// The orbit Lie algebra, which carries the column weights of the crossed
    /// S-matrix.
    pub fn orbit_type(&self) -> FiniteType {
        match self.twisted_type() {
            Some(t) => t.paired().horizontal(),
            None => self.ty,
        }
    }
}

/// An ordered set of weights of one finite type, tagged with what it indexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightList {
    label: String,
    ty: FiniteType,
    level: u32,
    weights: Vec<Weight>,
}

impl WeightList {
    pub fn new(label: String, ty: FiniteType, level: u32, weights: Vec<Weight>) -> Self {
        WeightList {
            label,
            ty,
            level,
            weights,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ty(&self) -> FiniteType {
        self.ty
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Weight> {
        self.weights.iter()
    }

    pub fn index_of(&self, coeffs: &[i64]) -> Option<usize> {
        self.weights
            .binary_search_by(|w| w.coeffs().cmp(coeffs))
            .ok()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        w.ty() == self.ty && self.index_of(w.coeffs()).is_some()
    }
}

/// All `b >= 0` with `sum c_i b_i <= budget`, in lexicographic order.
fn bounded_vectors(c: &[i64], budget: i64) -> Vec<Vec<i64>> {
    fn rec(c: &[i64], budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == c.len() {
            out.push(prefix.clone());
            return;
        }
        let ci = c[prefix.len()];
        let mut b = 0;
        while b * ci <= budget {
            prefix.push(b);
            rec(c, budget - b * ci, prefix, out);
            prefix.pop();
            b += 1;
        }
    }
    let mut out = Vec::new();
    rec(c, budget, &mut Vec::with_capacity(c.len()), &mut out);
    out
}

/// `P^l(t)`: dominant weights of level at most `l`.
pub fn enumerate_twisted_level_weights(t: &TwistedAffineType, level: u32) -> WeightList {
    let ty = t.horizontal();
    let weights = bounded_vectors(&t.dual_labels(), i64::from(level))
        .into_iter()
        .map(|b| Weight::new(ty, b).expect("length matches rank"))
        .collect();
    WeightList::new(t.to_string(), ty, level, weights)
}

pub fn enumerate_untwisted_level_weights(g: FiniteType, level: u32) -> WeightList {
    enumerate_twisted_level_weights(&TwistedAffineType::Untwisted(g), level)
}

/// `P_l(g)^sigma`: level-l weights of `g` fixed by `sigma`.
pub fn fixed_weights(g: FiniteType, sigma: &DiagramAutomorphism, level: u32) -> Result<WeightList> {
    if sigma.ty() != g {
        return Err(Error::TypeMismatch {
            expected: g.to_string(),
            found: sigma.ty().to_string(),
        });
    }
    let all = enumerate_untwisted_level_weights(g, level);
    let weights = all
        .weights
        .into_iter()
        .filter(|w| sigma.fixes(w.coeffs()))
        .collect();
    Ok(WeightList::new(
        format!("{g}^{}", sigma.name()),
        g,
        level,
        weights,
    ))
}

/// Collapses a fixed weight to the orbit Lie algebra: one coefficient per
/// vertex orbit.
pub fn iota(sigma: &DiagramAutomorphism, lambda: &Weight) -> Result<Weight> {
    if lambda.ty() != sigma.ty() {
        return Err(Error::TypeMismatch {
            expected: sigma.ty().to_string(),
            found: lambda.ty().to_string(),
        });
    }
    if !sigma.fixes(lambda.coeffs()) {
        return Err(Error::InvalidWeight {
            weight: lambda.coeffs().to_vec(),
            reason: format!("not fixed by the {} of {}", sigma.name(), sigma.ty()),
        });
    }
    let coeffs = sigma
        .orbits()
        .iter()
        .map(|o| lambda.coeffs()[o[0]])
        .collect();
    Weight::new(sigma.orbit_type(), coeffs)
}

/// The dual weight `lambda*`. Horizontal algebras of twisted types are
/// self-dual, so only untwisted types act nontrivially.
pub fn dual_weight(t: &TwistedAffineType, lambda: &Weight) -> Result<Weight> {
    let ty = t.horizontal();
    if lambda.ty() != ty {
        return Err(Error::TypeMismatch {
            expected: ty.to_string(),
            found: lambda.ty().to_string(),
        });
    }
    if !lambda.is_dominant() {
        return Err(Error::InvalidWeight {
            weight: lambda.coeffs().to_vec(),
            reason: "not dominant".into(),
        });
    }
    Ok(match t {
        TwistedAffineType::Untwisted(g) => longest_element_dual(*g, lambda),
        _ => lambda.clone(),
    })
}
