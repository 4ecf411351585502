//! Untwisted and twisted Kac-Moody S-matrices and the crossed S-matrix.
//!
//! Every entry is a signed Weyl sum of `exp(-2 pi i kappa(w x, y) / k)`. The
//! pairing `kappa(w x, y)` is exact, so the terms are bucketed by the residue
//! of the exponent modulo one and only the distinct residues are evaluated.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{gram_data, weyl_group, FiniteType, GramData, WeylGroup};
use crate::linalg::{self, RatMatrix};
use crate::twisted::{
    enumerate_twisted_level_weights, enumerate_untwisted_level_weights, fixed_weights, iota,
    DiagramAutomorphism, TwistedAffineType, WeightList,
};

/// Constructors refuse to return a matrix further than this from unitary.
pub const UNITARITY_GUARD: f64 = 1e-6;

/// Below this a 0-column entry is treated as zero or as non-real.
pub const PHASE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaTag {
    Untwisted,
    TwistedDirect,
    TwistedTranspose,
    Crossed,
}

impl FormulaTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaTag::Untwisted => "untwisted",
            FormulaTag::TwistedDirect => "twisted_direct",
            FormulaTag::TwistedTranspose => "twisted_transpose",
            FormulaTag::Crossed => "crossed",
        }
    }
}

/// The scalar a raw Weyl sum is divided by (or, for the transpose route,
/// the lattice index factor it is multiplied by).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConstant {
    pub value: f64,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SMatrixMeta {
    pub formula: FormulaTag,
    pub type_label: String,
    pub level: u32,
    pub normalization: NormalizationConstant,
    pub normalized: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SMatrixTable {
    rows: WeightList,
    cols: WeightList,
    entries: Vec<Vec<Complex64>>,
    meta: SMatrixMeta,
}

impl SMatrixTable {
    pub fn from_parts(
        rows: WeightList,
        cols: WeightList,
        entries: Vec<Vec<Complex64>>,
        meta: SMatrixMeta,
    ) -> Result<Self> {
        if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::Unsupported(format!(
                "entries do not match {} rows x {} columns",
                rows.len(),
                cols.len()
            )));
        }
        Ok(SMatrixTable {
            rows,
            cols,
            entries,
            meta,
        })
    }

    pub fn rows(&self) -> &WeightList {
        &self.rows
    }

    pub fn cols(&self) -> &WeightList {
        &self.cols
    }

    pub fn entries(&self) -> &[Vec<Complex64>] {
        &self.entries
    }

    pub fn meta(&self) -> &SMatrixMeta {
        &self.meta
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    /// Entry addressed by weight coefficients.
    pub fn at(&self, row: &[i64], col: &[i64]) -> Option<Complex64> {
        Some(self.entries[self.rows.index_of(row)?][self.cols.index_of(col)?])
    }

    pub fn dim(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    /// `max |(S S^dagger - I)_{ij}|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.rows.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = self.entries[i]
                    .iter()
                    .zip(&self.entries[j])
                    .map(|(a, b)| a * b.conj())
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// `max |S_ij - S_ji|`, meaningful when rows and columns share labels.
    pub fn symmetry_deviation(&self) -> f64 {
        let n = self.rows.len().min(self.cols.len());
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[i][j] - self.entries[j][i]).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &SMatrixTable) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Each row multiplied by the sign that makes its first entry positive.
    pub fn phase_fixed(&self) -> SMatrixTable {
        let mut out = self.clone();
        for row in &mut out.entries {
            if row[0].re < 0.0 {
                row.iter_mut().for_each(|z| *z = -*z);
            }
        }
        out
    }

    /// A copy with one entry replaced. Used for negative controls.
    pub fn with_entry(&self, i: usize, j: usize, z: Complex64) -> SMatrixTable {
        let mut out = self.clone();
        out.entries[i][j] = z;
        out
    }

    fn check_unitary(self) -> Result<Self> {
        let deviation = self.unitarity_deviation();
        if deviation > UNITARITY_GUARD {
            return Err(Error::NotUnitary {
                label: format!(
                    "{} S-matrix of {} at level {}",
                    self.meta.formula.as_str(),
                    self.meta.type_label,
                    self.meta.level
                ),
                deviation,
            });
        }
        Ok(self)
    }
}

fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    if terms.len() <= 8 {
        return terms.iter().sum();
    }
    let (a, b) = terms.split_at(terms.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `exp(-2 pi i j / m)` with `j` already reduced into `[0, m)`.
fn root_of_unity(j: i64, m: i64) -> Complex64 {
    let mut t = j as f64 / m as f64;
    if t > 0.5 {
        t -= 1.0;
    }
    let (s, c) = (-2.0 * std::f64::consts::PI * t).sin_cos();
    Complex64::new(c, s)
}

fn i_power(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Column data: `G y` scaled to integers, with the common denominator.
struct Column {
    ints: Vec<i64>,
    modulus: i64,
}

impl Column {
    fn new(gram: &RatMatrix, y: &[Rational64], k: i64) -> Self {
        let v = linalg::mul_vec(gram, y);
        let denom = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
        let ints = v.iter().map(|x| (x * denom).to_integer()).collect();
        Column {
            ints,
            modulus: denom * k,
        }
    }
}

/// `[sum_w eps(w) exp(-2 pi i kappa(w x, y) / k)]` over rows `x` and columns `y`.
fn weyl_sums(
    group: &WeylGroup,
    gram: &RatMatrix,
    rows: &[Vec<i64>],
    cols: &[Vec<Rational64>],
    k: i64,
) -> Vec<Vec<Complex64>> {
    let orbits: Vec<Vec<(Vec<i64>, i8)>> =
        rows.par_iter().map(|x| group.orbit_with_signs(x)).collect();
    let columns: Vec<Column> = cols.iter().map(|y| Column::new(gram, y, k)).collect();
    let cells: Vec<Complex64> = (0..rows.len() * cols.len())
        .into_par_iter()
        .map(|cell| {
            let (orbit, col) = (&orbits[cell / cols.len()], &columns[cell % cols.len()]);
            let m = col.modulus;
            let mut hist = vec![0i64; m as usize];
            for (wx, sign) in orbit {
                let q: i64 = wx.iter().zip(&col.ints).map(|(a, b)| a * b).sum();
                hist[q.rem_euclid(m) as usize] += i64::from(*sign);
            }
            let terms: Vec<Complex64> = hist
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(j, &c)| root_of_unity(j as i64, m) * c as f64)
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    cells
        .chunks(cols.len().max(1))
        .map(|c| c.to_vec())
        .collect()
}

fn shifted(coeffs: &[i64]) -> Vec<i64> {
    coeffs.iter().map(|b| b + 1).collect()
}

fn as_rational(v: &[i64]) -> Vec<Rational64> {
    v.iter().map(|&x| Rational64::from_integer(x)).collect()
}

fn rat_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The untwisted Kac-Peterson S-matrix on `P_l(g)`.
pub fn untwisted_smatrix(g: FiniteType, level: u32) -> Result<SMatrixTable> {
    let group = weyl_group(g)?;
    let gram = GramData::untwisted(g);
    let weights = enumerate_untwisted_level_weights(g, level);
    let k = i64::from(level) + g.dual_coxeter_number();
    let xs: Vec<Vec<i64>> = weights.iter().map(|w| shifted(w.coeffs())).collect();
    let ys: Vec<Vec<Rational64>> = xs.iter().map(|x| as_rational(x)).collect();
    let sums = weyl_sums(&group, gram.gram_weights(), &xs, &ys, k);

    let index = rat_to_f64(linalg::det(&gram.coroot_gram()));
    let n = g.rank() as i32;
    let norm = ((k as f64).powi(n) * index).sqrt();
    let phase = i_power(g.num_positive_roots());
    let entries = scale(sums, phase / norm);
    SMatrixTable {
        rows: weights.clone(),
        cols: weights,
        entries,
        meta: SMatrixMeta {
            formula: FormulaTag::Untwisted,
            type_label: g.to_string(),
            level,
            normalization: NormalizationConstant {
                value: norm,
                description: format!(
                    "((l+h^vee)^{n} [P:Q^vee])^(1/2), l+h^vee = {k}, [P:Q^vee] = {index}"
                ),
            },
            normalized: true,
        },
    }
    .check_unitary()
}

fn scale(m: Vec<Vec<Complex64>>, f: Complex64) -> Vec<Vec<Complex64>> {
    m.into_iter()
        .map(|r| r.into_iter().map(|z| z * f).collect())
        .collect()
}

fn require_twisted(t: &TwistedAffineType) -> Result<()> {
    if t.is_twisted() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{t} is untwisted; use the untwisted S-matrix"
        )))
    }
}

/// `tau_kappa(mu + rho)` in row coordinates.
fn tau_kappa(t: &TwistedAffineType, mu: &[i64]) -> Vec<Rational64> {
    if matches!(t, TwistedAffineType::A2n_2 { .. }) {
        return as_rational(&shifted(mu));
    }
    let (a, av, perm) = (t.labels(), t.dual_labels(), t.column_perm());
    let mut y = vec![Rational64::zero(); mu.len()];
    for (j, &m) in mu.iter().enumerate() {
        let i = perm[j];
        y[i] = Rational64::new(a[i], av[i]) * (m + 1);
    }
    y
}

/// The twisted Kac-Moody S-matrix, rows `P^l(t)` and columns `P^l` of the
/// paired type, by direct Weyl summation over the horizontal Weyl group.
pub fn twisted_km_smatrix(t: &TwistedAffineType, level: u32) -> Result<SMatrixTable> {
    require_twisted(t)?;
    let ty = t.horizontal();
    let group = weyl_group(ty)?;
    let gram = gram_data(t);
    let rows = enumerate_twisted_level_weights(t, level);
    let cols = enumerate_twisted_level_weights(&t.paired(), level);
    let k = i64::from(level) + t.dual_coxeter_number();
    let xs: Vec<Vec<i64>> = rows.iter().map(|w| shifted(w.coeffs())).collect();
    let ys: Vec<Vec<Rational64>> = cols.iter().map(|w| tau_kappa(t, w.coeffs())).collect();
    let sums = weyl_sums(&group, gram.gram_weights(), &xs, &ys, k);

    let n = ty.rank() as i32;
    let (norm, description) = match t {
        TwistedAffineType::A2n_2 { .. } => {
            let norm = (k as f64).powf(f64::from(n) / 2.0);
            (norm, format!("(l+h^vee)^({n}/2), l+h^vee = {k}"))
        }
        _ => {
            let c2: i64 = if matches!(t, TwistedAffineType::D4_3) {
                3
            } else {
                2
            };
            let index = linalg::int_det(&ty.cartan_matrix());
            let norm = ((k as f64).powi(n) * index as f64).sqrt();
            (
                norm,
                format!(
                    "|M*/(l+h^vee)Q|^(1/2) / c = (c^2 (l+h^vee)^{n} [P:Q])^(1/2) / c, c^2 = {c2}, l+h^vee = {k}, [P:Q] = {index}"
                ),
            )
        }
    };
    let phase = i_power(ty.num_positive_roots());
    SMatrixTable {
        rows,
        cols,
        entries: scale(sums, phase / norm),
        meta: SMatrixMeta {
            formula: FormulaTag::TwistedDirect,
            type_label: t.to_string(),
            level,
            normalization: NormalizationConstant {
                value: norm,
                description,
            },
            normalized: true,
        },
    }
    .check_unitary()
}

/// `[nu(Q^vee) : Q]^(1/2)`, the factor relating a twisted S-matrix to the
/// untwisted S-matrix of the transposed type.
pub fn transpose_index_factor(t: &TwistedAffineType) -> f64 {
    (transpose_lattice_index(t) as f64).sqrt()
}

/// `[nu(Q^vee) : Q]`. The ratio of the Gram determinants of the two lattices
/// is the square of the index.
pub fn transpose_lattice_index(t: &TwistedAffineType) -> i64 {
    let gram = gram_data(t);
    let ratio = linalg::det(gram.gram_roots()) / linalg::det(&gram.coroot_gram());
    let squared = ratio.to_integer();
    let index = (squared as f64).sqrt().round() as i64;
    debug_assert!(ratio.is_integer() && index * index == squared);
    index
}

/// `tau(lambda + rho) - rho^t`: a row weight moved to the transposed type.
pub fn transpose_row_map(t: &TwistedAffineType, lambda: &[i64]) -> Option<Vec<i64>> {
    let (_, relabel) = t.transpose_partner()?;
    let (a, av) = (t.labels(), t.dual_labels());
    let mut out = vec![0; lambda.len()];
    for (i, &b) in lambda.iter().enumerate() {
        out[relabel[i]] = av[i] / a[i] * (b + 1) - 1;
    }
    Some(out)
}

/// `tau(tau_kappa(mu))` on column weights, which lands on the same
/// coefficients in the transposed type's labeling.
pub fn transpose_col_map(t: &TwistedAffineType, mu: &[i64]) -> Option<Vec<i64>> {
    let (_, relabel) = t.transpose_partner()?;
    let perm = t.column_perm();
    let mut out = vec![0; mu.len()];
    for (j, &m) in mu.iter().enumerate() {
        out[relabel[perm[j]]] = m;
    }
    Some(out)
}

/// The twisted S-matrix read off the untwisted S-matrix of the transposed
/// type at the shifted level `l + h^vee - h`.
pub fn twisted_km_smatrix_via_transpose(t: &TwistedAffineType, level: u32) -> Result<SMatrixTable> {
    let (partner, _) = t
        .transpose_partner()
        .ok_or_else(|| Error::Unsupported(format!("{t} has no transpose route")))?;
    let shift = t.dual_coxeter_number() - t.coxeter_number();
    let partner_level = level + shift as u32;
    let st = untwisted_smatrix(partner, partner_level)?;
    let factor = transpose_index_factor(t);
    let rows = enumerate_twisted_level_weights(t, level);
    let cols = enumerate_twisted_level_weights(&t.paired(), level);

    let mut entries = Vec::with_capacity(rows.len());
    for lambda in rows.iter() {
        let r = transpose_row_map(t, lambda.coeffs()).expect("partner exists");
        let ri = st.rows().index_of(&r).ok_or_else(|| Error::InvalidWeight {
            weight: r.clone(),
            reason: format!("not a level-{partner_level} weight of {partner}"),
        })?;
        let mut row = Vec::with_capacity(cols.len());
        for mu in cols.iter() {
            let c = transpose_col_map(t, mu.coeffs()).expect("partner exists");
            let ci = st.cols().index_of(&c).ok_or_else(|| Error::InvalidWeight {
                weight: c.clone(),
                reason: format!("not a level-{partner_level} weight of {partner}"),
            })?;
            row.push(st.get(ri, ci) * factor);
        }
        entries.push(row);
    }
    SMatrixTable {
        rows,
        cols,
        entries,
        meta: SMatrixMeta {
            formula: FormulaTag::TwistedTranspose,
            type_label: t.to_string(),
            level,
            normalization: NormalizationConstant {
                value: factor,
                description: format!(
                    "[nu(Q^vee):Q]^(1/2) times S({partner}) at level {partner_level}"
                ),
            },
            normalized: true,
        },
    }
    .check_unitary()
}

/// The sign making `S_{row, zero_col}` a positive real.
pub fn row_phase(s: &SMatrixTable, row: usize, zero_col: usize) -> Result<i8> {
    let z = s.get(row, zero_col);
    if z.im.abs() >= PHASE_TOL || z.re.abs() < PHASE_TOL {
        return Err(Error::AmbiguousPhase {
            weight: s.rows().get(row).coeffs().to_vec(),
            re: z.re,
            im: z.im,
        });
    }
    Ok(if z.re > 0.0 { 1 } else { -1 })
}

/// Product of the signs of `sin(pi kappa(alpha, lambda + rho) / k)` over the
/// positive roots, i.e. the phase of the Weyl denominator at the torus element
/// attached to `lambda`. Only defined here for `A_{2n}^(2)`.
pub fn denominator_phase(t: &TwistedAffineType, level: u32, lambda: &[i64]) -> Result<i8> {
    if !matches!(t, TwistedAffineType::A2n_2 { .. }) {
        return Err(Error::Unsupported(format!(
            "denominator phase is only evaluated for A_2n^(2), not {t}"
        )));
    }
    let gram = gram_data(t);
    let k = i64::from(level) + t.dual_coxeter_number();
    let x = shifted(lambda);
    let mut sign = 1i8;
    for alpha in t.horizontal().positive_roots() {
        let mut q = Rational64::zero();
        for (i, &c) in alpha.iter().enumerate() {
            q += gram.gram_roots()[i][i] / 2 * (c * x[i]);
        }
        let q = q / k;
        if q.is_integer() {
            return Err(Error::AmbiguousPhase {
                weight: lambda.to_vec(),
                re: 0.0,
                im: 0.0,
            });
        }
        if q.floor().to_integer().rem_euclid(2) == 1 {
            sign = -sign;
        }
    }
    Ok(sign)
}

/// `S^sigma_{lambda,mu} = eps(lambda) conj(S_{lambda, iota(mu)})`, with rows
/// `P^l` of the twisted type and columns the sigma-fixed level-l weights.
pub fn crossed_smatrix(
    g: FiniteType,
    sigma: &DiagramAutomorphism,
    level: u32,
) -> Result<SMatrixTable> {
    if sigma.ty() != g {
        return Err(Error::TypeMismatch {
            expected: g.to_string(),
            found: sigma.ty().to_string(),
        });
    }
    let Some(t) = sigma.twisted_type() else {
        return untwisted_smatrix(g, level);
    };
    let s = twisted_km_smatrix(&t, level)?;
    let cols = fixed_weights(g, sigma, level)?;
    let col_index: Vec<usize> = cols
        .iter()
        .map(|mu| {
            let image = iota(sigma, mu)?;
            s.cols()
                .index_of(image.coeffs())
                .ok_or_else(|| Error::InvalidWeight {
                    weight: mu.coeffs().to_vec(),
                    reason: format!(
                        "orbit image is not a level-{level} weight of {}",
                        t.paired()
                    ),
                })
        })
        .collect::<Result<_>>()?;
    let zero = col_index[0];
    let mut entries = Vec::with_capacity(s.rows().len());
    for (i, row) in s.entries().iter().enumerate() {
        let eps = f64::from(row_phase(&s, i, zero)?);
        entries.push(col_index.iter().map(|&j| row[j].conj() * eps).collect());
    }
    SMatrixTable {
        rows: s.rows().clone(),
        cols,
        entries,
        meta: SMatrixMeta {
            formula: FormulaTag::Crossed,
            type_label: format!("{g}^{}", sigma.name()),
            level,
            normalization: s.meta().normalization.clone(),
            normalized: true,
        },
    }
    .check_unitary()
}
