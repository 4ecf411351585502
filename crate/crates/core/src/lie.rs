//! Finite root systems: Cartan matrices in Kac's numbering, normalized
//! bilinear forms, Weyl groups in fundamental-weight coordinates.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::twisted::TwistedAffineType;

/// Largest rank for which [`weyl_group`] enumerates elements. E6 has 51840.
pub const DEFAULT_WEYL_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }
}

/// A simple Lie algebra of finite type, e.g. `A3` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FiniteType {
    series: Series,
    rank: usize,
}

impl FiniteType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(FiniteType { series, rank })
        } else {
            Err(Error::InvalidType(format!("{}{}", series.letter(), rank)))
        }
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.series, Series::A | Series::D | Series::E)
    }

    /// Cartan matrix with `a_ij = <alpha_i^vee, alpha_j>`. For B_n the last
    /// root is short, for C_n it is long; G2 has alpha_1 long.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let link = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match self.series {
            Series::A => (0..n - 1).for_each(|i| link(&mut c, i, i + 1)),
            Series::B => {
                (0..n - 1).for_each(|i| link(&mut c, i, i + 1));
                c[n - 1][n - 2] = -2;
            }
            Series::C => {
                (0..n - 1).for_each(|i| link(&mut c, i, i + 1));
                c[n - 2][n - 1] = -2;
            }
            Series::D => {
                (0..n - 2).for_each(|i| link(&mut c, i, i + 1));
                link(&mut c, n - 3, n - 1);
            }
            Series::E => {
                (0..n - 2).for_each(|i| link(&mut c, i, i + 1));
                let branch = if n == 8 { 4 } else { 2 };
                link(&mut c, branch, n - 1);
            }
            Series::F => {
                (0..3).for_each(|i| link(&mut c, i, i + 1));
                c[2][1] = -2;
            }
            Series::G => {
                link(&mut c, 0, 1);
                c[1][0] = -3;
            }
        }
        c
    }

    /// `d_i = |alpha_i|^2 / 2` with long roots normalized to 1.
    pub fn symmetrizer(&self) -> Vec<Rational64> {
        let c = self.cartan_matrix();
        let n = self.rank;
        let mut d: Vec<Option<Rational64>> = vec![None; n];
        d[0] = Some(Rational64::one());
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                for j in 0..n {
                    if c[i][j] != 0 && d[j].is_none() {
                        if let Some(di) = d[i] {
                            d[j] = Some(di * Rational64::new(c[i][j], c[j][i]));
                            changed = true;
                        }
                    }
                }
            }
        }
        let d: Vec<Rational64> = d
            .into_iter()
            .map(|x| x.expect("connected diagram"))
            .collect();
        let max = d
            .iter()
            .copied()
            .fold(Rational64::zero(), |a, b| if b > a { b } else { a });
        d.into_iter().map(|x| x / max).collect()
    }

    /// Positive roots in simple-root coordinates, ordered by height.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let c = self.cartan_matrix();
        let n = self.rank;
        let simple: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut seen: HashSet<Vec<i64>> = simple.iter().cloned().collect();
        let mut roots = simple.clone();
        let mut frontier = simple;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..n {
                    let mut p = 0;
                    loop {
                        let mut gamma = beta.clone();
                        gamma[i] -= p + 1;
                        if seen.contains(&gamma) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..n).map(|j| beta[j] * c[i][j]).sum();
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if seen.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            next.sort();
            roots.extend(next.iter().cloned());
            frontier = next;
        }
        roots
    }

    /// Coefficients of the highest root over the simple roots.
    pub fn highest_root(&self) -> Vec<i64> {
        self.positive_roots()
            .into_iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .expect("nonempty root system")
    }

    /// Dual Coxeter labels `a_i^vee = a_i |alpha_i|^2 / 2`.
    pub fn dual_labels(&self) -> Vec<i64> {
        let d = self.symmetrizer();
        self.highest_root()
            .iter()
            .zip(&d)
            .map(|(&a, &di)| (di * a).to_integer())
            .collect()
    }

    pub fn dual_coxeter_number(&self) -> i64 {
        1 + self.dual_labels().iter().sum::<i64>()
    }

    pub fn coxeter_number(&self) -> i64 {
        1 + self.highest_root().iter().sum::<i64>()
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots().len()
    }

    /// Classical order formula, used to validate enumeration.
    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.series {
            Series::A => fact(n + 1),
            Series::B | Series::C => (1u64 << n) * fact(n),
            Series::D => (1u64 << (n - 1)) * fact(n),
            Series::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Series::F => 1152,
            Series::G => 12,
        }
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for FiniteType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = chars
            .next()
            .and_then(Series::from_letter)
            .ok_or_else(|| Error::InvalidType(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        FiniteType::new(series, rank)
    }
}

impl TryFrom<String> for FiniteType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FiniteType> for String {
    fn from(t: FiniteType) -> String {
        t.to_string()
    }
}

/// An integral weight `sum b_i omega_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    ty: FiniteType,
    coeffs: Vec<i64>,
}

impl Weight {
    pub fn new(ty: FiniteType, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != ty.rank() {
            return Err(Error::InvalidWeight {
                weight: coeffs,
                reason: format!("{ty} needs {} coefficients", ty.rank()),
            });
        }
        Ok(Weight { ty, coeffs })
    }

    pub fn zero(ty: FiniteType) -> Self {
        Weight {
            ty,
            coeffs: vec![0; ty.rank()],
        }
    }

    pub fn fundamental(ty: FiniteType, i: usize) -> Self {
        let mut coeffs = vec![0; ty.rank()];
        coeffs[i] = 1;
        Weight { ty, coeffs }
    }

    pub fn ty(&self) -> FiniteType {
        self.ty
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_dominant(&self) -> bool {
        self.coeffs.iter().all(|&b| b >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&b| b == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Weight {
            ty: self.ty,
            coeffs: self.coeffs.iter().map(|b| b * k).collect(),
        }
    }

    pub fn plus(&self, other: &Weight) -> Self {
        Weight {
            ty: self.ty,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &b) in self.coeffs.iter().enumerate() {
            if b == 0 {
                continue;
            }
            if b < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if b.abs() != 1 {
                write!(f, "{}", b.abs())?;
            }
            write!(f, "ω{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

/// `rho` in the fundamental-weight basis: every coefficient is one.
pub fn weyl_vector(ty: FiniteType) -> Weight {
    Weight {
        ty,
        coeffs: vec![1; ty.rank()],
    }
}

/// Normalized invariant form on the horizontal subalgebra of an affine type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramData {
    ty: FiniteType,
    labels: Vec<i64>,
    dual_labels: Vec<i64>,
    gram_roots: RatMatrix,
    gram_weights: RatMatrix,
}

impl GramData {
    /// `kappa(alpha_i, alpha_j) = a_ij a_i^vee / a_i`, then conjugated by the
    /// inverse Cartan matrix to get the form on fundamental weights.
    pub fn from_labels(ty: FiniteType, labels: Vec<i64>, dual_labels: Vec<i64>) -> Self {
        let c = ty.cartan_matrix();
        let n = ty.rank();
        let gram_roots: RatMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Rational64::new(c[i][j] * dual_labels[i], labels[i]))
                    .collect()
            })
            .collect();
        let cinv = linalg::inverse(&linalg::from_int(&c));
        let gram_weights = linalg::mul(&linalg::mul(&linalg::transpose(&cinv), &gram_roots), &cinv);
        GramData {
            ty,
            labels,
            dual_labels,
            gram_roots,
            gram_weights,
        }
    }

    pub fn untwisted(ty: FiniteType) -> Self {
        GramData::from_labels(ty, ty.highest_root(), ty.dual_labels())
    }

    pub fn ty(&self) -> FiniteType {
        self.ty
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn dual_labels(&self) -> &[i64] {
        &self.dual_labels
    }

    pub fn gram_roots(&self) -> &RatMatrix {
        &self.gram_roots
    }

    pub fn gram_weights(&self) -> &RatMatrix {
        &self.gram_weights
    }

    pub fn pairing(&self, lambda: &Weight, mu: &Weight) -> Result<Rational64> {
        for w in [lambda, mu] {
            if w.ty != self.ty {
                return Err(Error::TypeMismatch {
                    expected: self.ty.to_string(),
                    found: w.ty.to_string(),
                });
            }
        }
        Ok(self.pairing_coeffs(&lambda.coeffs, &mu.coeffs))
    }

    pub fn pairing_coeffs(&self, x: &[i64], y: &[i64]) -> Rational64 {
        let mut acc = Rational64::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                acc += self.gram_weights[i][j] * (xi * yj);
            }
        }
        acc
    }

    /// Gram matrix of the simple coroots,
    /// `(alpha_i^vee, alpha_j^vee) = 4 kappa(alpha_i, alpha_j) / (|alpha_i|^2 |alpha_j|^2)`.
    pub fn coroot_gram(&self) -> RatMatrix {
        let n = self.ty.rank();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.gram_roots[i][j] * Rational64::from_integer(4)
                            / (self.gram_roots[i][i] * self.gram_roots[j][j])
                    })
                    .collect()
            })
            .collect()
    }
}

/// The normalized form of an untwisted or twisted affine type.
pub fn gram_data(affine: &TwistedAffineType) -> GramData {
    GramData::from_labels(affine.horizontal(), affine.labels(), affine.dual_labels())
}

/// A Weyl group element acting on fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    rank: usize,
    matrix: Vec<i64>,
    sign: i8,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut matrix = vec![0; rank * rank];
        for i in 0..rank {
            matrix[i * rank + i] = 1;
        }
        WeylElement {
            rank,
            matrix,
            sign: 1,
        }
    }

    pub fn simple_reflection(ty: FiniteType, i: usize) -> Self {
        let c = ty.cartan_matrix();
        let mut s = WeylElement::identity(ty.rank());
        let n = ty.rank();
        for (k, row) in c.iter().enumerate() {
            s.matrix[k * n + i] -= row[i];
        }
        s.sign = -1;
        s
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.matrix.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix
            .chunks(self.rank)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.rank;
        let mut matrix = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.matrix[i * n + k];
                if a != 0 {
                    for j in 0..n {
                        matrix[i * n + j] += a * other.matrix[k * n + j];
                    }
                }
            }
        }
        WeylElement {
            rank: n,
            matrix,
            sign: self.sign * other.sign,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    ty: FiniteType,
    elements: Vec<WeylElement>,
}

impl WeylGroup {
    pub fn ty(&self) -> FiniteType {
        self.ty
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Image of `x` under every element, paired with the element's sign.
    pub fn orbit_with_signs(&self, x: &[i64]) -> Vec<(Vec<i64>, i8)> {
        self.elements.iter().map(|w| (w.apply(x), w.sign)).collect()
    }
}

pub fn weyl_group(ty: FiniteType) -> Result<WeylGroup> {
    weyl_group_with_cap(ty, DEFAULT_WEYL_CAP)
}

/// Breadth-first closure under simple reflections, deduplicated on the matrix.
pub fn weyl_group_with_cap(ty: FiniteType, cap: usize) -> Result<WeylGroup> {
    if ty.rank() > cap {
        return Err(Error::GroupTooLarge {
            ty: ty.to_string(),
            rank: ty.rank(),
            cap,
        });
    }
    let gens: Vec<WeylElement> = (0..ty.rank())
        .map(|i| WeylElement::simple_reflection(ty, i))
        .collect();
    let id = WeylElement::identity(ty.rank());
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(id.matrix.clone());
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for s in &gens {
            let next = s.compose(&w);
            if seen.insert(next.matrix.clone()) {
                elements.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(WeylGroup { ty, elements })
}

/// `-w_0(lambda)`: a diagram flip for A_n, D_odd and E6, the identity otherwise.
pub fn longest_element_dual(ty: FiniteType, lambda: &Weight) -> Weight {
    let n = ty.rank();
    let mut coeffs = lambda.coeffs.clone();
    match ty.series() {
        Series::A => coeffs.reverse(),
        Series::D if n % 2 == 1 => coeffs.swap(n - 2, n - 1),
        Series::E if n == 6 => {
            coeffs.swap(0, 4);
            coeffs.swap(1, 3);
        }
        _ => {}
    }
    Weight { ty, coeffs }
}
