//! Fusion rings from character tables: the untwisted Verlinde ring and the
//! twisted fusion ring of a diagram automorphism.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::FiniteType;
use crate::smatrix::{crossed_smatrix, untwisted_smatrix, SMatrixTable, PHASE_TOL};
use crate::twisted::{DiagramAutomorphism, WeightList};

/// Tolerance for integrality and for the Frobenius checks.
pub const FUSION_TOL: f64 = 1e-6;

/// Associativity is checked on all triples drawn from this many basis elements.
pub const ASSOCIATIVITY_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "ring", rename_all = "snake_case")]
pub enum RingTag {
    Untwisted,
    Twisted { order: u32 },
}

/// Where structure constants are expected to live.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lattice {
    /// The integers.
    Integers,
    /// `Z[omega]` with `omega = exp(2 pi i / 3)`.
    Eisenstein,
}

impl RingTag {
    pub fn lattice(&self) -> Lattice {
        match self {
            RingTag::Twisted { order: 3 } => Lattice::Eisenstein,
            _ => Lattice::Integers,
        }
    }
}

/// A point `a + b omega` of the lattice (`b = 0` for the integers).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub fn to_complex(self) -> Complex64 {
        let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        Complex64::new(self.a as f64, 0.0) + omega * self.b as f64
    }
}

/// The lattice point closest to `z` and its distance.
pub fn nearest_lattice_point(z: Complex64, lattice: Lattice) -> (LatticePoint, f64) {
    match lattice {
        Lattice::Integers => {
            let p = LatticePoint {
                a: z.re.round() as i64,
                b: 0,
            };
            (p, (z - p.to_complex()).norm())
        }
        Lattice::Eisenstein => {
            let b = z.im / (3f64.sqrt() / 2.0);
            let a = z.re + b / 2.0;
            let (a0, b0) = (a.floor() as i64, b.floor() as i64);
            let mut best = (LatticePoint { a: a0, b: b0 }, f64::INFINITY);
            for da in 0..=1 {
                for db in 0..=1 {
                    let p = LatticePoint {
                        a: a0 + da,
                        b: b0 + db,
                    };
                    let d = (z - p.to_complex()).norm();
                    if d < best.1 {
                        best = (p, d);
                    }
                }
            }
            best
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FusionTable {
    basis: WeightList,
    constants: Vec<Complex64>,
    ring: RingTag,
    characters: SMatrixTable,
}

impl FusionTable {
    pub fn basis(&self) -> &WeightList {
        &self.basis
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    /// The normalized character table the constants were computed from.
    pub fn characters(&self) -> &SMatrixTable {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `N_{lambda mu}^nu` by basis index.
    pub fn get(&self, lambda: usize, mu: usize, nu: usize) -> Complex64 {
        let n = self.len();
        self.constants[(lambda * n + mu) * n + nu]
    }

    /// `N_{lambda mu}^nu` by weight coefficients.
    pub fn at(&self, lambda: &[i64], mu: &[i64], nu: &[i64]) -> Option<Complex64> {
        let b = &self.basis;
        Some(self.get(b.index_of(lambda)?, b.index_of(mu)?, b.index_of(nu)?))
    }

    /// A copy with one constant replaced. Used for negative controls.
    pub fn with_constant(&self, lambda: usize, mu: usize, nu: usize, z: Complex64) -> FusionTable {
        let n = self.len();
        let mut out = self.clone();
        out.constants[(lambda * n + mu) * n + nu] = z;
        out
    }

    /// Every constant rounded to the ring's lattice; fails if any constant is
    /// further than [`FUSION_TOL`] from it.
    pub fn rounded(&self) -> Result<Vec<LatticePoint>> {
        let lattice = self.ring.lattice();
        self.constants
            .iter()
            .map(|&z| {
                let (p, residual) = nearest_lattice_point(z, lattice);
                if residual < FUSION_TOL {
                    Ok(p)
                } else {
                    Err(Error::NonIntegralConstant {
                        re: z.re,
                        im: z.im,
                        residual,
                    })
                }
            })
            .collect()
    }

    /// Largest distance from a constant to the lattice.
    pub fn integrality_residual(&self) -> f64 {
        let lattice = self.ring.lattice();
        self.constants
            .iter()
            .map(|&z| nearest_lattice_point(z, lattice).1)
            .fold(0.0, f64::max)
    }
}

/// `N_{lambda mu}^nu = sum_t S_{t lambda} S_{t mu} conj(S_{t nu}) / S_{t 0}`.
fn verlinde_constants(s: &SMatrixTable) -> Result<Vec<Complex64>> {
    let (rows, n) = s.dim();
    for t in 0..rows {
        if s.get(t, 0).norm() < PHASE_TOL {
            return Err(Error::ZeroColumn { row: t });
        }
    }
    let constants = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let (lambda, mu, nu) = (idx / (n * n), (idx / n) % n, idx % n);
            (0..rows)
                .map(|t| s.get(t, lambda) * s.get(t, mu) * s.get(t, nu).conj() / s.get(t, 0))
                .sum()
        })
        .collect();
    Ok(constants)
}

pub fn untwisted_fusion(g: FiniteType, level: u32) -> Result<FusionTable> {
    let s = untwisted_smatrix(g, level)?;
    Ok(FusionTable {
        basis: s.cols().clone(),
        constants: verlinde_constants(&s)?,
        ring: RingTag::Untwisted,
        characters: s,
    })
}

/// The twisted fusion ring on the sigma-fixed weights, with the crossed
/// S-matrix as its normalized character table.
pub fn twisted_fusion(
    g: FiniteType,
    sigma: &DiagramAutomorphism,
    level: u32,
) -> Result<FusionTable> {
    if sigma.is_trivial() {
        return Err(Error::Unsupported(
            "twisted fusion needs a nontrivial automorphism".into(),
        ));
    }
    let s = crossed_smatrix(g, sigma, level)?;
    Ok(FusionTable {
        basis: s.cols().clone(),
        constants: verlinde_constants(&s)?,
        ring: RingTag::Twisted {
            order: sigma.order(),
        },
        characters: s,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub indices: Vec<usize>,
    pub deviation: f64,
}

/// Outcome of one Frobenius-algebra check.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckResult {
    pub checked: usize,
    pub violations: usize,
    pub max_deviation: f64,
    /// The first few violations, for locating a bug.
    pub examples: Vec<Violation>,
}

impl CheckResult {
    fn record(&mut self, indices: &[usize], deviation: f64) {
        self.checked += 1;
        self.max_deviation = self.max_deviation.max(deviation);
        if deviation >= FUSION_TOL {
            self.violations += 1;
            if self.examples.len() < 8 {
                self.examples.push(Violation {
                    indices: indices.to_vec(),
                    deviation,
                });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrobeniusReport {
    pub commutativity: CheckResult,
    pub associativity: CheckResult,
    pub unit: CheckResult,
    pub orthogonality: CheckResult,
    pub integrality_residual: f64,
}

impl FrobeniusReport {
    pub fn passed(&self) -> bool {
        self.commutativity.passed()
            && self.associativity.passed()
            && self.unit.passed()
            && self.orthogonality.passed()
            && self.integrality_residual < FUSION_TOL
    }
}

/// Commutativity, associativity, unit and character orthogonality
/// `sum_lambda chi_t(lambda) conj(chi_t'(lambda)) = delta_tt' / |S_{t0}|^2`.
pub fn verify_frobenius(table: &FusionTable) -> FrobeniusReport {
    let n = table.len();
    let mut commutativity = CheckResult::default();
    let mut unit = CheckResult::default();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                commutativity.record(&[i, j, k], (table.get(i, j, k) - table.get(j, i, k)).norm());
            }
            let delta = if i == j { 1.0 } else { 0.0 };
            unit.record(&[0, i, j], (table.get(0, i, j) - delta).norm());
            unit.record(&[i, 0, j], (table.get(i, 0, j) - delta).norm());
        }
    }

    let m = n.min(ASSOCIATIVITY_LIMIT);
    let mut associativity = CheckResult::default();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..n {
                    let left: Complex64 = (0..n)
                        .map(|k| table.get(a, b, k) * table.get(k, c, d))
                        .sum();
                    let right: Complex64 = (0..n)
                        .map(|k| table.get(b, c, k) * table.get(a, k, d))
                        .sum();
                    associativity.record(&[a, b, c, d], (left - right).norm());
                }
            }
        }
    }

    let s = table.characters();
    let rows = s.dim().0;
    let mut orthogonality = CheckResult::default();
    for t in 0..rows {
        for u in 0..rows {
            let inner: Complex64 = (0..n)
                .map(|l| (s.get(t, l) / s.get(t, 0)) * (s.get(u, l) / s.get(u, 0)).conj())
                .sum();
            let expected = if t == u {
                1.0 / s.get(t, 0).norm_sqr()
            } else {
                0.0
            };
            orthogonality.record(&[t, u], (inner - expected).norm());
        }
    }

    FrobeniusReport {
        commutativity,
        associativity,
        unit,
        orthogonality,
        integrality_residual: table.integrality_residual(),
    }
}
