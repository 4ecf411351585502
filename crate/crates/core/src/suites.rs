//! Built-in verification grids shared by the command line and the test suite.

use num_complex::Complex64;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{twisted_fusion, untwisted_fusion, verify_frobenius};
use crate::lie::{FiniteType, Weight};
use crate::smatrix::{
    crossed_smatrix, twisted_km_smatrix, twisted_km_smatrix_via_transpose, untwisted_smatrix,
    SMatrixTable,
};
use crate::twisted::{enumerate_twisted_level_weights, DiagramAutomorphism, TwistedAffineType};
use crate::verlinde::{CoverSpec, Degeneration, Evaluator};

/// Tolerance for unitarity, symmetry and dual-route agreement.
pub const MATRIX_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Unitarity,
    DualRoute,
    Factorization,
    Propagation,
    Frobenius,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Unitarity,
        Suite::DualRoute,
        Suite::Factorization,
        Suite::Propagation,
        Suite::Frobenius,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Unitarity => "unitarity",
            Suite::DualRoute => "dualroute",
            Suite::Factorization => "factorization",
            Suite::Propagation => "propagation",
            Suite::Frobenius => "frobenius",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// A deliberate corruption applied to every crossed S-matrix before it is
/// checked, so a suite can demonstrate that it catches sign errors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Negate the bottom-right entry.
    FlipSign,
}

impl Fault {
    fn apply(&self, s: SMatrixTable) -> SMatrixTable {
        match self {
            Fault::None => s,
            Fault::FlipSign => {
                let (r, c) = s.dim();
                let z = s.get(r - 1, c - 1);
                s.with_entry(r - 1, c - 1, -z)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub passed: bool,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    fn new(suite: Suite, cases: Vec<CaseReport>) -> Self {
        SuiteReport {
            suite: suite.name(),
            passed: cases.iter().all(|c| c.passed),
            cases,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

fn case(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CaseReport {
    CaseReport {
        case: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn failed(name: impl Into<String>, e: &Error) -> CaseReport {
    case(name, false, e.to_string())
}

pub fn ft(s: &str) -> FiniteType {
    s.parse().expect("built-in type")
}

pub fn tt(s: &str) -> TwistedAffineType {
    s.parse().expect("built-in type")
}

/// Untwisted types and level bound of the unitarity grid.
pub fn untwisted_grid() -> Vec<(FiniteType, u32)> {
    [
        "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2",
    ]
    .iter()
    .map(|s| (ft(s), 4))
    .collect()
}

/// Twisted types and level bound: every family at small rank.
pub fn twisted_grid() -> Vec<(TwistedAffineType, u32)> {
    let mut out: Vec<(TwistedAffineType, u32)> = [
        "A3~2", "A5~2", "A7~2", "D3~2", "D4~2", "D5~2", "A2~2", "A4~2", "A6~2", "D4~3",
    ]
    .iter()
    .map(|s| (tt(s), 4))
    .collect();
    out.push((tt("E6~2"), 3));
    out
}

/// Finite types with their nontrivial diagram automorphisms.
pub fn automorphism_grid() -> Vec<(FiniteType, DiagramAutomorphism)> {
    let mut out: Vec<(FiniteType, DiagramAutomorphism)> =
        ["A2", "A3", "A4", "A5", "A6", "D4", "D5", "E6"]
            .iter()
            .map(|s| {
                let g = ft(s);
                (g, DiagramAutomorphism::standard(g, 2).expect("has a flip"))
            })
            .collect();
    out.push((ft("D4"), DiagramAutomorphism::triality()));
    out
}

fn unitarity_case(
    name: String,
    s: Result<SMatrixTable>,
    symmetric: bool,
    fault: Fault,
    crossed: bool,
) -> CaseReport {
    match s {
        Ok(s) => {
            let s = if crossed { fault.apply(s) } else { s };
            let dev = s.unitarity_deviation();
            let sym = if symmetric {
                s.symmetry_deviation()
            } else {
                0.0
            };
            let zero_col_ok = !crossed
                || (0..s.dim().0)
                    .all(|i| s.get(i, 0).re > 0.0 && s.get(i, 0).im.abs() < MATRIX_TOL);
            let passed = dev < MATRIX_TOL && sym < MATRIX_TOL && zero_col_ok;
            let mut detail = format!("|SS*-I| = {dev:.3e}");
            if symmetric {
                detail.push_str(&format!(", |S-S^T| = {sym:.3e}"));
            }
            if !zero_col_ok {
                detail.push_str(", 0-column not positive");
            }
            case(name, passed, detail)
        }
        Err(e) => failed(name, &e),
    }
}

pub fn run_unitarity(fault: Fault) -> SuiteReport {
    let mut cases = Vec::new();
    for (g, max) in untwisted_grid() {
        for l in 1..=max {
            cases.push(unitarity_case(
                format!("untwisted {g} l={l}"),
                untwisted_smatrix(g, l),
                true,
                fault,
                false,
            ));
        }
    }
    for (t, max) in twisted_grid() {
        let symmetric = matches!(t, TwistedAffineType::A2n_2 { .. });
        for l in 1..=max {
            cases.push(unitarity_case(
                format!("twisted {t} l={l}"),
                twisted_km_smatrix(&t, l),
                symmetric,
                fault,
                false,
            ));
        }
    }
    for (g, sigma) in automorphism_grid() {
        for l in 1..=3 {
            let name = format!("crossed {g} {} l={l}", sigma.name());
            cases.push(unitarity_case(
                name,
                crossed_smatrix(g, &sigma, l),
                false,
                fault,
                true,
            ));
        }
    }
    SuiteReport::new(Suite::Unitarity, cases)
}

/// Types and levels on which the direct and transpose routes are compared.
pub fn dual_route_grid() -> Vec<(TwistedAffineType, u32)> {
    let mut out = Vec::new();
    for t in ["A3~2", "A5~2", "D3~2", "D4~3"] {
        for l in 1..=3 {
            out.push((tt(t), l));
        }
    }
    out.push((tt("E6~2"), 1));
    out
}

pub fn run_dual_route() -> SuiteReport {
    let cases = dual_route_grid()
        .into_iter()
        .map(|(t, l)| {
            let name = format!("{t} l={l}");
            match (
                twisted_km_smatrix(&t, l),
                twisted_km_smatrix_via_transpose(&t, l),
            ) {
                (Ok(a), Ok(b)) => {
                    let d = a.phase_fixed().max_abs_diff(&b.phase_fixed());
                    case(
                        name,
                        d < MATRIX_TOL,
                        format!("|direct - transpose| = {d:.3e}"),
                    )
                }
                (Err(e), _) | (_, Err(e)) => failed(name, &e),
            }
        })
        .collect();
    SuiteReport::new(Suite::DualRoute, cases)
}

fn spec(
    algebra: &str,
    sigma: DiagramAutomorphism,
    level: u32,
    genus: u32,
    monodromies: Vec<u32>,
    weights: Vec<Vec<i64>>,
) -> CoverSpec {
    let g = ft(algebra);
    let order = sigma.order();
    let holonomy = if genus == 0 {
        monodromies.iter().fold(order, |a, &m| a.gcd(&m))
    } else {
        1
    };
    let mut s = CoverSpec {
        algebra: g,
        sigma,
        order,
        level,
        genus,
        monodromies,
        weights: Vec::new(),
        holonomy,
    };
    s.weights = weights
        .into_iter()
        .zip(&s.monodromies)
        .map(|(c, &m)| Weight::new(s.class_type(m).horizontal(), c).expect("built-in weight"))
        .collect();
    s
}

/// A named cover together with its expected rank.
#[derive(Clone, Debug)]
pub struct RankExample {
    pub name: String,
    pub spec: CoverSpec,
    pub expected: u64,
}

/// Level-one double covers of `A_{2r-1}` with all weights zero:
/// `2^g r^(g+n-1)` for `2n` ramified points.
pub fn double_cover_examples() -> Vec<RankExample> {
    let mut out = Vec::new();
    for r in [2u64, 3] {
        let a = format!("A{}", 2 * r - 1);
        let flip = DiagramAutomorphism::standard(ft(&a), 2).expect("flip");
        for g in 0..=2u32 {
            for n in 0..=3u32 {
                if 2 * g + 2 * n < 3 {
                    continue;
                }
                let pts = (2 * n) as usize;
                let s = spec(
                    &a,
                    flip.clone(),
                    1,
                    g,
                    vec![1; pts],
                    vec![vec![0; r as usize]; pts],
                );
                let expected = 2u64.pow(g) * r.pow(g + n - 1);
                out.push(RankExample {
                    name: format!("double cover {a} g={g} 2n={pts}"),
                    spec: s,
                    expected,
                });
            }
        }
    }
    out
}

/// Genus-0 triality covers of D4 with three vacuum points.
pub fn triality_examples() -> Vec<RankExample> {
    let tri = DiagramAutomorphism::triality();
    let mut out = Vec::new();
    for (l, expected) in [(1, 2), (2, 3)] {
        let s = spec("D4", tri.clone(), l, 0, vec![1, 1, 1], vec![vec![0, 0]; 3]);
        out.push(RankExample {
            name: format!("D4 triality (1,1,1) l={l}"),
            spec: s,
            expected,
        });
    }
    for l in [1, 2] {
        let s = spec(
            "D4",
            tri.clone(),
            l,
            0,
            vec![1, 2, 0],
            vec![vec![0, 0], vec![0, 0], vec![0, 0, 0, 0]],
        );
        out.push(RankExample {
            name: format!("D4 triality (1,2,0) l={l}"),
            spec: s,
            expected: 1,
        });
    }
    out
}

/// Double covers of `A_{2r}` with two ramified vacuum points and one
/// unramified level-one fundamental weight.
pub fn a2r_examples() -> Vec<RankExample> {
    let mut out = Vec::new();
    for r in 1..=3usize {
        let a = format!("A{}", 2 * r);
        let flip = DiagramAutomorphism::standard(ft(&a), 2).expect("flip");
        for i in 0..2 * r {
            let mut w = vec![0; 2 * r];
            w[i] = 1;
            let s = spec(
                &a,
                flip.clone(),
                1,
                0,
                vec![1, 1, 0],
                vec![vec![0; r], vec![0; r], w],
            );
            out.push(RankExample {
                name: format!("{a} flip (1,1,0) with omega_{}", i + 1),
                spec: s,
                expected: 1,
            });
        }
    }
    out
}

/// Unramified connected double covers at level one. The expected rank is
/// `|P_1^sigma| |Z|^(g-1)` where `|Z| = det C` is the number of level-one
/// weights.
pub fn etale_examples() -> Vec<RankExample> {
    let cases: [(&str, u64); 7] = [
        ("A2", 1),
        ("A3", 2),
        ("A4", 1),
        ("A5", 2),
        ("D4", 2),
        ("D5", 2),
        ("E6", 1),
    ];
    let mut out = Vec::new();
    for (a, fixed) in cases {
        let g = ft(a);
        let centre = crate::linalg::int_det(&g.cartan_matrix()) as u64;
        let flip = DiagramAutomorphism::standard(g, 2).expect("flip");
        for genus in 1..=3u32 {
            let s = spec(a, flip.clone(), 1, genus, vec![], vec![]);
            let expected = fixed * centre.pow(genus - 1);
            out.push(RankExample {
                name: format!("etale {a} g={genus}"),
                spec: s,
                expected,
            });
        }
    }
    out
}

pub fn tabulated_rank_examples() -> Vec<RankExample> {
    let mut out = double_cover_examples();
    out.extend(triality_examples());
    out.extend(a2r_examples());
    out.extend(etale_examples());
    out
}

pub fn run_propagation(eval: &Evaluator) -> SuiteReport {
    let cases = tabulated_rank_examples()
        .into_iter()
        .map(|ex| match eval.verify_propagation(&ex.spec) {
            Ok(r) => case(
                ex.name,
                r.holds && r.before == ex.expected,
                format!(
                    "rank {} -> {} with a vacuum point (expected {})",
                    r.before, r.after, ex.expected
                ),
            ),
            Err(e) => failed(ex.name, &e),
        })
        .collect();
    SuiteReport::new(Suite::Propagation, cases)
}

/// `(algebra, automorphism)` pairs for randomized covers.
fn random_pool() -> Vec<(FiniteType, DiagramAutomorphism)> {
    let mut out = automorphism_grid();
    out.retain(|(g, _)| g.rank() <= 5 || g == &ft("E6"));
    for a in ["A1", "A2", "B2", "G2"] {
        out.push((ft(a), DiagramAutomorphism::identity(ft(a))));
    }
    out
}

/// A random admissible cover with level at most `max_level`, genus at most
/// 2 and at most 4 points.
pub fn random_cover_spec(rng: &mut StdRng, max_level: u32) -> CoverSpec {
    let pool = random_pool();
    loop {
        let (g, sigma) = pool.choose(rng).expect("nonempty pool").clone();
        if g == ft("E6") && max_level > 2 {
            continue;
        }
        let order = sigma.order() * if rng.gen_bool(0.2) { 2 } else { 1 };
        let divisors: Vec<u32> = (1..=order).filter(|d| order % d == 0).collect();
        let holonomy = *divisors.choose(rng).expect("1 divides");
        let genus = rng.gen_range(0..=2);
        let n = rng.gen_range(0..=4usize);
        if !(2 * genus as i64 - 2 + n as i64 > 0 || (genus >= 1 && n == 0)) {
            continue;
        }
        let steps = order / holonomy;
        let mut monodromies: Vec<u32> =
            (0..n).map(|_| holonomy * rng.gen_range(0..steps)).collect();
        if n > 0 {
            let rest: u32 = monodromies[..n - 1].iter().sum::<u32>() % order;
            monodromies[n - 1] = (order - rest) % order;
        }
        if genus == 0 && monodromies.iter().fold(order, |a, &m| a.gcd(&m)) != holonomy {
            continue;
        }
        let level = rng.gen_range(1..=max_level);
        let mut s = CoverSpec {
            algebra: g,
            sigma,
            order,
            level,
            genus,
            monodromies,
            weights: Vec::new(),
            holonomy,
        };
        s.weights = s
            .monodromies
            .iter()
            .map(|&m| {
                let set = enumerate_twisted_level_weights(&s.class_type(m), level);
                set.weights().choose(rng).expect("0 is a weight").clone()
            })
            .collect();
        return s;
    }
}

/// A random degeneration of a random cover that keeps the holonomy.
pub fn random_degeneration(rng: &mut StdRng, max_level: u32) -> (CoverSpec, Degeneration) {
    loop {
        let s = random_cover_spec(rng, max_level);
        let n = s.num_points();
        if s.genus >= 1 && (rng.gen_bool(0.6) || n < 4) {
            let classes: Vec<u32> = (0..s.order).filter(|k| k % s.holonomy == 0).collect();
            let k = *classes.choose(rng).expect("0 is in every subgroup");
            if s.genus == 1 {
                let generated = s
                    .monodromies
                    .iter()
                    .fold(s.order, |a, &m| a.gcd(&m))
                    .gcd(&k);
                if generated != s.holonomy || n + 2 < 3 {
                    continue;
                }
            }
            return (s, Degeneration::NonSeparating { edge_class: k });
        }
        if n >= 4 {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            let cut = rng.gen_range(2..=n - 2);
            let mut first = idx[..cut].to_vec();
            first.sort_unstable();
            let first_genus = rng.gen_range(0..=s.genus);
            return (s, Degeneration::Separating { first, first_genus });
        }
    }
}

pub const SWEEP_SEED: u64 = 0x7466_7665;

pub fn run_factorization(eval: &Evaluator, samples: usize) -> SuiteReport {
    let mut rng = StdRng::seed_from_u64(SWEEP_SEED);
    let mut cases = Vec::new();
    while cases.len() < samples {
        let (s, d) = random_degeneration(&mut rng, 2);
        let name = format!(
            "{} {} N={} l={} g={} m={:?} {:?}",
            s.algebra,
            s.sigma.name(),
            s.order,
            s.level,
            s.genus,
            s.monodromies,
            d
        );
        match eval.verify_factorization(&s, &d) {
            Ok(r) => cases.push(case(
                name,
                r.holds,
                format!("{} = {} over {} labels", r.lhs, r.rhs, r.terms),
            )),
            // The sampled bipartition changed the holonomy; draw another.
            Err(Error::InvalidSpec(_)) => continue,
            Err(e) => cases.push(failed(name, &e)),
        }
    }
    SuiteReport::new(Suite::Factorization, cases)
}

/// Twisted fusion rings checked for integrality and the Frobenius axioms.
pub fn frobenius_grid() -> Vec<(FiniteType, DiagramAutomorphism, u32)> {
    let mut out = Vec::new();
    for (g, sigma) in automorphism_grid() {
        let max = if g == ft("E6") { 2 } else { 3 };
        for l in 1..=max {
            out.push((g, sigma.clone(), l));
        }
    }
    out
}

pub fn run_frobenius(fault: Fault) -> SuiteReport {
    let mut cases = Vec::new();
    for g in ["A1", "A2"] {
        for l in 1..=3 {
            let name = format!("untwisted {g} l={l}");
            match untwisted_fusion(ft(g), l) {
                Ok(f) => {
                    let r = verify_frobenius(&f);
                    cases.push(case(
                        name,
                        r.passed(),
                        format!("integrality residual {:.3e}", r.integrality_residual),
                    ));
                }
                Err(e) => cases.push(failed(name, &e)),
            }
        }
    }
    for (g, sigma, l) in frobenius_grid() {
        let name = format!("twisted {g} {} l={l}", sigma.name());
        let table = twisted_fusion(g, &sigma, l).map(|f| match fault {
            Fault::None => f,
            Fault::FlipSign => {
                let n = f.len() - 1;
                let z = f.get(n, n, n);
                f.with_constant(n, n, n, z - Complex64::new(1.0, 0.0))
            }
        });
        match table {
            Ok(f) => {
                let r = verify_frobenius(&f);
                let mut detail = format!(
                    "basis {}, integrality residual {:.3e}, associativity {:.3e}, orthogonality {:.3e}",
                    f.len(),
                    r.integrality_residual,
                    r.associativity.max_deviation,
                    r.orthogonality.max_deviation
                );
                if let Some(v) = r.associativity.examples.first().or(r.unit.examples.first()) {
                    detail.push_str(&format!(", first violation at {:?}", v.indices));
                }
                cases.push(case(name, r.passed(), detail));
            }
            Err(e) => cases.push(failed(name, &e)),
        }
    }
    SuiteReport::new(Suite::Frobenius, cases)
}

pub fn run(suite: Suite, fault: Fault, eval: &Evaluator) -> SuiteReport {
    match suite {
        Suite::Unitarity => run_unitarity(fault),
        Suite::DualRoute => run_dual_route(),
        Suite::Factorization => run_factorization(eval, 20),
        Suite::Propagation => run_propagation(eval),
        Suite::Frobenius => run_frobenius(fault),
    }
}
