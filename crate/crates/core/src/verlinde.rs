//! The crossed Verlinde formula for ranks of twisted conformal blocks over a
//! cyclic cover, plus the factorization and propagation identities.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{FiniteType, Weight};
use crate::smatrix::{crossed_smatrix, untwisted_smatrix, SMatrixTable};
use crate::twisted::{
    dual_weight, enumerate_twisted_level_weights, fixed_weights, DiagramAutomorphism,
    TwistedAffineType,
};

/// A rank is accepted when the formula lands this close to an integer.
pub const RANK_TOL: f64 = 1e-6;

/// Data of an admissible cyclic cover: `Gamma = Z/N` generated by `sigma`,
/// marked points with monodromy residues and weights, and the holonomy
/// subgroup `<d>` of the generic locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    pub algebra: FiniteType,
    pub sigma: DiagramAutomorphism,
    pub order: u32,
    pub level: u32,
    pub genus: u32,
    pub monodromies: Vec<u32>,
    pub weights: Vec<Weight>,
    pub holonomy: u32,
}

impl CoverSpec {
    /// The affine type attached to residue `m`: twisted for a nontrivial
    /// diagram class, untwisted otherwise.
    pub fn class_type(&self, m: u32) -> TwistedAffineType {
        self.sigma
            .power(m)
            .twisted_type()
            .unwrap_or(TwistedAffineType::Untwisted(self.algebra))
    }

    pub fn num_points(&self) -> usize {
        self.monodromies.len()
    }

    fn in_holonomy(&self, m: u32) -> bool {
        m.is_multiple_of(self.holonomy)
    }

    /// Checks every invariant of an admissible cover.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.sigma.ty() != self.algebra {
            return bad(format!(
                "automorphism of {} given for {}",
                self.sigma.ty(),
                self.algebra
            ));
        }
        if self.order == 0 || !self.order.is_multiple_of(self.sigma.order()) {
            return bad(format!(
                "group order {} is not a multiple of the automorphism order {}",
                self.order,
                self.sigma.order()
            ));
        }
        if self.holonomy == 0 || !self.order.is_multiple_of(self.holonomy) {
            return bad(format!(
                "holonomy generator {} does not divide {}",
                self.holonomy, self.order
            ));
        }
        if self.level == 0 {
            return bad("level must be positive".into());
        }
        if self.weights.len() != self.monodromies.len() {
            return bad(format!(
                "{} weights for {} monodromies",
                self.weights.len(),
                self.monodromies.len()
            ));
        }
        let n = self.num_points() as i64;
        if !(2 * i64::from(self.genus) - 2 + n > 0 || (self.genus >= 1 && n == 0)) {
            return bad(format!("unstable: genus {} with {n} points", self.genus));
        }
        let total: u64 = self.monodromies.iter().map(|&m| u64::from(m)).sum();
        if !total.is_multiple_of(u64::from(self.order)) {
            return bad(format!(
                "monodromies sum to {total}, not 0 mod {}",
                self.order
            ));
        }
        for &m in &self.monodromies {
            if m >= self.order {
                return bad(format!("monodromy {m} is not a residue mod {}", self.order));
            }
            if !self.in_holonomy(m) {
                return bad(format!(
                    "monodromy {m} is outside the holonomy subgroup <{}>",
                    self.holonomy
                ));
            }
        }
        if self.genus == 0 {
            let generated = self.monodromies.iter().fold(self.order, |g, &m| g.gcd(&m));
            if generated != self.holonomy {
                return bad(format!(
                    "on a genus-0 base the monodromies generate <{generated}>, but the holonomy is <{}>",
                    self.holonomy
                ));
            }
        }
        for (&m, w) in self.monodromies.iter().zip(&self.weights) {
            let t = self.class_type(m);
            let set = enumerate_twisted_level_weights(&t, self.level);
            if !set.contains(w) {
                return bad(format!(
                    "{w} ({:?}) is not a level-{} weight of {t}",
                    w.coeffs(),
                    self.level
                ));
            }
        }
        Ok(())
    }

    /// A copy with one more point appended.
    pub fn with_point(&self, m: u32, w: Weight) -> CoverSpec {
        let mut out = self.clone();
        out.monodromies.push(m);
        out.weights.push(w);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankResult {
    pub complex_value: (f64, f64),
    pub rank: u64,
    pub residual: f64,
}

/// Holds the S-matrices a batch of evaluations needs, so each one is built
/// once. Safe to share across threads.
#[derive(Debug)]
pub struct Evaluator {
    tolerance: f64,
    cache: Mutex<HashMap<(String, u32), Arc<SMatrixTable>>>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Self::with_tolerance(RANK_TOL)
    }

    pub fn with_tolerance(tolerance: f64) -> Self {
        Evaluator {
            tolerance,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// The S-matrix used at a point with residue `m`. All nontrivial residues
    /// of one diagram class share a matrix.
    pub fn smatrix_for(&self, spec: &CoverSpec, m: u32) -> Result<Arc<SMatrixTable>> {
        let sigma = spec.sigma.power(m);
        let key = (
            format!("{}/{}", spec.algebra, spec.class_type(m)),
            spec.level,
        );
        if let Some(s) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(s));
        }
        let s = Arc::new(if sigma.is_trivial() {
            untwisted_smatrix(spec.algebra, spec.level)?
        } else {
            crossed_smatrix(spec.algebra, &sigma, spec.level)?
        });
        self.cache
            .lock()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| Arc::clone(&s));
        Ok(s)
    }

    /// The unrounded value of the crossed Verlinde formula.
    pub fn value(&self, spec: &CoverSpec) -> Result<Complex64> {
        spec.validate()?;
        let untwisted = self.smatrix_for(spec, 0)?;
        let fixed = fixed_weights(spec.algebra, &spec.sigma.power(spec.holonomy), spec.level)?;
        let mats: Vec<Arc<SMatrixTable>> = spec
            .monodromies
            .iter()
            .map(|&m| self.smatrix_for(spec, m))
            .collect::<Result<_>>()?;
        let rows: Vec<usize> = spec
            .weights
            .iter()
            .zip(&mats)
            .map(|(w, s)| s.rows().index_of(w.coeffs()).expect("validated weight"))
            .collect();
        let exponent = spec.num_points() as i32 + 2 * spec.genus as i32 - 2;
        let zero = vec![0; spec.algebra.rank()];

        let mut total = Complex64::new(0.0, 0.0);
        for mu in fixed.iter() {
            let s0 = untwisted
                .at(&zero, mu.coeffs())
                .expect("fixed weights are level-l weights");
            let mut term = s0.powi(-exponent);
            for (s, &r) in mats.iter().zip(&rows) {
                let col = s
                    .cols()
                    .index_of(mu.coeffs())
                    .ok_or_else(|| Error::InvalidWeight {
                        weight: mu.coeffs().to_vec(),
                        reason: "missing from a crossed S-matrix column set".into(),
                    })?;
                term *= s.get(r, col);
            }
            total += term;
        }
        Ok(total)
    }

    pub fn rank(&self, spec: &CoverSpec) -> Result<RankResult> {
        let z = self.value(spec)?;
        let rounded = z.re.round();
        let residual = (z - Complex64::new(rounded, 0.0)).norm();
        if residual >= self.tolerance {
            return Err(Error::NonIntegralRank {
                re: z.re,
                im: z.im,
                residual,
            });
        }
        if rounded < 0.0 {
            return Err(Error::NegativeRank(rounded as i64));
        }
        Ok(RankResult {
            complex_value: (z.re, z.im),
            rank: rounded as u64,
            residual,
        })
    }

    /// Compares the rank with the sum over edge labels of the degenerate
    /// ranks.
    pub fn verify_factorization(
        &self,
        spec: &CoverSpec,
        degeneration: &Degeneration,
    ) -> Result<FactorizationReport> {
        spec.validate()?;
        let lhs = self.rank(spec)?.rank;
        let n = spec.order;
        match degeneration {
            Degeneration::NonSeparating { edge_class } => {
                let k = edge_class % n;
                if spec.genus == 0 {
                    return Err(Error::InvalidSpec(
                        "a non-separating node needs genus at least 1".into(),
                    ));
                }
                if !spec.in_holonomy(k) {
                    return Err(Error::InvalidSpec(format!(
                        "edge class {k} is outside <{}>",
                        spec.holonomy
                    )));
                }
                let t = spec.class_type(k);
                let mut base = spec.clone();
                base.genus -= 1;
                let mut rhs = 0;
                let labels = enumerate_twisted_level_weights(&t, spec.level);
                for mu in labels.iter() {
                    let glued = base
                        .with_point(k, mu.clone())
                        .with_point((n - k) % n, dual_weight(&t, mu)?);
                    rhs += self.rank(&glued)?.rank;
                }
                Ok(FactorizationReport {
                    kind: "non-separating".into(),
                    edge_class: k,
                    lhs,
                    rhs,
                    terms: labels.len(),
                    holds: lhs == rhs,
                })
            }
            Degeneration::Separating { first, first_genus } => {
                if *first_genus > spec.genus || first.iter().any(|&i| i >= spec.num_points()) {
                    return Err(Error::InvalidSpec(
                        "bipartition does not match the spec".into(),
                    ));
                }
                let mut one = spec.clone();
                one.genus = *first_genus;
                one.monodromies.clear();
                one.weights.clear();
                let mut two = one.clone();
                two.genus = spec.genus - first_genus;
                for i in 0..spec.num_points() {
                    let part = if first.contains(&i) {
                        &mut one
                    } else {
                        &mut two
                    };
                    part.monodromies.push(spec.monodromies[i]);
                    part.weights.push(spec.weights[i].clone());
                }
                let sum_one: u32 = one.monodromies.iter().sum::<u32>() % n;
                let k = (n - sum_one) % n;
                let t = spec.class_type(k);
                let set_holonomy = |part: &mut CoverSpec| {
                    if part.genus == 0 {
                        part.holonomy = part.monodromies.iter().fold(n, |g, &m| g.gcd(&m)).gcd(&k);
                    }
                };
                let labels = enumerate_twisted_level_weights(&t, spec.level);
                let mut rhs = 0;
                for mu in labels.iter() {
                    let mut a = one.with_point(k, mu.clone());
                    let mut b = two.with_point((n - k) % n, dual_weight(&t, mu)?);
                    set_holonomy(&mut a);
                    set_holonomy(&mut b);
                    if a.holonomy.gcd(&b.holonomy) != spec.holonomy {
                        return Err(Error::InvalidSpec(format!(
                            "the parts have holonomy <{}> and <{}>, which do not generate <{}>",
                            a.holonomy, b.holonomy, spec.holonomy
                        )));
                    }
                    rhs += self.rank(&a)?.rank * self.rank(&b)?.rank;
                }
                Ok(FactorizationReport {
                    kind: "separating".into(),
                    edge_class: k,
                    lhs,
                    rhs,
                    terms: labels.len(),
                    holds: lhs == rhs,
                })
            }
        }
    }

    /// Appends an unramified vacuum point and compares ranks.
    pub fn verify_propagation(&self, spec: &CoverSpec) -> Result<PropagationReport> {
        let before = self.rank(spec)?.rank;
        let padded = spec.with_point(0, Weight::zero(spec.algebra));
        let after = self.rank(&padded)?.rank;
        Ok(PropagationReport {
            before,
            after,
            holds: before == after,
        })
    }
}

/// How the base curve degenerates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneration {
    /// Pinch a non-separating cycle; the node has monodromy `edge_class` on
    /// one branch and its inverse on the other.
    NonSeparating { edge_class: u32 },
    /// Split into the points listed in `first` on a curve of genus
    /// `first_genus`, and the remaining points on the complementary genus.
    Separating { first: Vec<usize>, first_genus: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub kind: String,
    pub edge_class: u32,
    pub lhs: u64,
    pub rhs: u64,
    pub terms: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropagationReport {
    pub before: u64,
    pub after: u64,
    pub holds: bool,
}

pub fn rank(spec: &CoverSpec) -> Result<RankResult> {
    Evaluator::new().rank(spec)
}

pub fn verify_factorization(
    spec: &CoverSpec,
    degeneration: &Degeneration,
) -> Result<FactorizationReport> {
    Evaluator::new().verify_factorization(spec, degeneration)
}

pub fn verify_propagation(spec: &CoverSpec) -> Result<PropagationReport> {
    Evaluator::new().verify_propagation(spec)
}

/// The automorphism field of a cover document: a name or a 1-based vertex
/// permutation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigmaDoc {
    Named(String),
    Permutation(Vec<usize>),
}

/// JSON form of a [`CoverSpec`]. Weight coordinates are taken in the type of
/// each point's diagram class.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpecDoc {
    pub algebra: String,
    pub sigma: SigmaDoc,
    #[serde(default)]
    pub order: Option<u32>,
    pub level: u32,
    pub genus: u32,
    pub monodromies: Vec<u32>,
    pub weights: Vec<Vec<i64>>,
    #[serde(default)]
    pub holonomy: Option<u32>,
}

impl CoverSpecDoc {
    pub fn into_spec(self) -> Result<CoverSpec> {
        let algebra: FiniteType = self.algebra.parse()?;
        let sigma = match &self.sigma {
            SigmaDoc::Named(name) => match name.as_str() {
                "id" | "identity" | "trivial" => DiagramAutomorphism::identity(algebra),
                "flip" => DiagramAutomorphism::standard(algebra, 2)?,
                "triality" => DiagramAutomorphism::standard(algebra, 3)?,
                other => {
                    return Err(Error::InvalidSpec(format!(
                        "unknown automorphism {other:?}"
                    )))
                }
            },
            SigmaDoc::Permutation(p) => {
                if p.contains(&0) {
                    return Err(Error::InvalidSpec("vertex permutations are 1-based".into()));
                }
                DiagramAutomorphism::from_perm(algebra, p.iter().map(|i| i - 1).collect())?
            }
        };
        let order = self.order.unwrap_or(sigma.order());
        let holonomy = self.holonomy.unwrap_or_else(|| {
            if self.genus == 0 {
                self.monodromies.iter().fold(order, |g, &m| g.gcd(&m))
            } else {
                1
            }
        });
        let mut spec = CoverSpec {
            algebra,
            sigma,
            order,
            level: self.level,
            genus: self.genus,
            monodromies: self.monodromies,
            weights: Vec::new(),
            holonomy,
        };
        if order == 0 {
            return Err(Error::InvalidSpec("group order must be positive".into()));
        }
        let weights = self
            .weights
            .into_iter()
            .enumerate()
            .map(|(i, coeffs)| {
                let m = spec.monodromies.get(i).copied().unwrap_or(0) % order;
                Weight::new(spec.class_type(m).horizontal(), coeffs)
            })
            .collect::<Result<_>>()?;
        spec.weights = weights;
        spec.validate()?;
        Ok(spec)
    }
}

impl From<&CoverSpec> for CoverSpecDoc {
    fn from(spec: &CoverSpec) -> Self {
        CoverSpecDoc {
            algebra: spec.algebra.to_string(),
            sigma: SigmaDoc::Permutation(spec.sigma.perm().iter().map(|i| i + 1).collect()),
            order: Some(spec.order),
            level: spec.level,
            genus: spec.genus,
            monodromies: spec.monodromies.clone(),
            weights: spec.weights.iter().map(|w| w.coeffs().to_vec()).collect(),
            holonomy: Some(spec.holonomy),
        }
    }
}

pub fn parse_cover_spec(json: &str) -> Result<CoverSpec> {
    let doc: CoverSpecDoc = serde_json::from_str(json)?;
    doc.into_spec()
}
