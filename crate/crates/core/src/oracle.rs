//! Ground truth for the attacks: exhaustive solving, solution-set
//! comparison, degree audits and the oil/vinegar shape check.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{FieldMatrix, PrimeField};
use crate::mpoly::{compose_affine, monomials_up_to, Monomial, MonomialBasis, PolyError, Polynomial, TermOrder};
use crate::scheme::SecretKey;

/// Largest `q^n` the exhaustive solver accepts unless overridden.
pub const DEFAULT_SCALE_GUARD: u64 = 10_000_000;

pub const SCALE_GUARD_ENV: &str = "PESTO_LAB_SCALE_GUARD";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive search over {q}^{n} points exceeds the bound {limit}; raise {SCALE_GUARD_ENV} to at least {required}")]
    ScaleGuard { q: u32, n: usize, limit: u64, required: u64 },
    #[error("empty system")]
    EmptySystem,
    #[error("expected a system of degree at most 2, found degree {degree}")]
    NotQuadratic { degree: u32 },
    #[error("solution sets over different spaces: F_{q1}^{n1} vs F_{q2}^{n2}")]
    DimensionMismatch { q1: u32, n1: usize, q2: u32, n2: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Bound on the number of points the exhaustive solver visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleGuard {
    pub limit: u64,
}

impl Default for ScaleGuard {
    fn default() -> Self {
        ScaleGuard {
            limit: DEFAULT_SCALE_GUARD,
        }
    }
}

impl ScaleGuard {
    /// Reads `PESTO_LAB_SCALE_GUARD`, falling back to the default when unset
    /// or unparsable.
    pub fn from_env() -> Self {
        std::env::var(SCALE_GUARD_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|limit| ScaleGuard { limit })
            .unwrap_or_default()
    }

    /// `q^n` if it fits under the bound.
    pub fn check(&self, q: u32, n: usize) -> Result<u64, OracleError> {
        let required = (q as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if required > self.limit {
            return Err(OracleError::ScaleGuard {
                q,
                n,
                limit: self.limit,
                required,
            });
        }
        Ok(required)
    }
}

/// Sorted, duplicate-free set of points of `F_q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    q: u32,
    n: usize,
    solutions: Vec<Vec<u32>>,
}

impl SolutionSet {
    pub fn new(q: u32, n: usize, solutions: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let set: BTreeSet<Vec<u32>> = solutions.into_iter().collect();
        SolutionSet {
            q,
            n,
            solutions: set.into_iter().collect(),
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn solutions(&self) -> &[Vec<u32>] {
        &self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn contains(&self, z: &[u32]) -> bool {
        self.solutions.binary_search_by(|s| s.as_slice().cmp(z)).is_ok()
    }

    /// One header line `# q=.. n=..` followed by one comma-separated vector
    /// per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# q={} n={}\n", self.q, self.n);
        for s in &self.solutions {
            let line: Vec<String> = s.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, OracleError> {
        let mut lines = text.lines().enumerate();
        let err = |line: usize, message: &str| OracleError::Parse {
            line: line + 1,
            message: message.to_string(),
        };
        let (_, header) = lines.next().ok_or_else(|| err(0, "missing header"))?;
        let mut q = None;
        let mut n = None;
        for field in header.trim_start_matches('#').split_whitespace() {
            match field.split_once('=') {
                Some(("q", v)) => q = v.parse().ok(),
                Some(("n", v)) => n = v.parse().ok(),
                _ => return Err(err(0, "expected `# q=<q> n=<n>`")),
            }
        }
        let (q, n): (u32, usize) = q.zip(n).ok_or_else(|| err(0, "expected `# q=<q> n=<n>`"))?;
        let mut solutions = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: Vec<u32> = line
                .split(',')
                .map(|c| c.trim().parse::<u32>().ok().filter(|&x| x < q))
                .collect::<Option<_>>()
                .ok_or_else(|| err(i, "expected residues below q"))?;
            if v.len() != n {
                return Err(err(i, "wrong vector length"));
            }
            solutions.push(v);
        }
        Ok(SolutionSet::new(q, n, solutions))
    }
}

fn point_of(mut index: u64, q: u32, n: usize) -> Vec<u32> {
    let mut z = vec![0u32; n];
    for slot in z.iter_mut().rev() {
        *slot = (index % q as u64) as u32;
        index /= q as u64;
    }
    z
}

/// All common zeros of `system` in `F_q^n`, bounded by [`ScaleGuard::from_env`].
pub fn brute_force_solutions(system: &[Polynomial], field: PrimeField, n: usize) -> Result<SolutionSet, OracleError> {
    brute_force_solutions_with(system, field, n, ScaleGuard::from_env())
}

/// Enumerates `F_q^n` in lexicographic order. The range is split across
/// threads but the collected output keeps index order, so it comes out
/// sorted.
pub fn brute_force_solutions_with(
    system: &[Polynomial],
    field: PrimeField,
    n: usize,
    guard: ScaleGuard,
) -> Result<SolutionSet, OracleError> {
    let q = field.modulus();
    let total = guard.check(q, n)?;
    if let Some(p) = system.iter().find(|p| p.nvars() != n) {
        return Err(PolyError::ArityMismatch {
            expected: n,
            got: p.nvars(),
        }
        .into());
    }
    let solutions: Vec<Vec<u32>> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let z = point_of(i, q, n);
            system
                .iter()
                .all(|p| p.evaluate(&z) == Ok(0))
                .then_some(z)
        })
        .collect();
    Ok(SolutionSet { q, n, solutions })
}

fn same_space(a: &SolutionSet, b: &SolutionSet) -> Result<(), OracleError> {
    if a.q != b.q || a.n != b.n {
        return Err(OracleError::DimensionMismatch {
            q1: a.q,
            n1: a.n,
            q2: b.q,
            n2: b.n,
        });
    }
    Ok(())
}

pub fn solution_set_equal(a: &SolutionSet, b: &SolutionSet) -> Result<bool, OracleError> {
    same_space(a, b)?;
    Ok(a.solutions == b.solutions)
}

/// Which side of a comparison a differing point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    OnlyLeft,
    OnlyRight,
}

/// The lexicographically first point in exactly one of the two sets.
pub fn first_difference(a: &SolutionSet, b: &SolutionSet) -> Result<Option<(Vec<u32>, Side)>, OracleError> {
    same_space(a, b)?;
    let left: BTreeSet<&Vec<u32>> = a.solutions.iter().collect();
    let right: BTreeSet<&Vec<u32>> = b.solutions.iter().collect();
    let l = left.difference(&right).next().map(|v| ((*v).clone(), Side::OnlyLeft));
    let r = right.difference(&left).next().map(|v| ((*v).clone(), Side::OnlyRight));
    Ok(match (l, r) {
        (Some(x), Some(y)) => Some(if x.0 < y.0 { x } else { y }),
        (x, y) => x.or(y),
    })
}

/// Highest total degree in a nonempty system; zero polynomials count as
/// degree 0.
pub fn max_degree(system: &[Polynomial]) -> Result<u32, OracleError> {
    if system.is_empty() {
        return Err(OracleError::EmptySystem);
    }
    Ok(system.iter().filter_map(Polynomial::degree).max().unwrap_or(0))
}

/// True iff no polynomial has a quadratic monomial with both variables in
/// `oil` (squares of an oil variable included).
pub fn ov_shape_check(system: &[Polynomial], oil: &[usize]) -> bool {
    let is_oil = |i: usize| oil.contains(&i);
    system.iter().all(|p| {
        p.terms().all(|(mon, _)| {
            mon.degree() != 2 || !mon.support().all(|(i, _)| is_oil(i))
        })
    })
}

/// Rewrites a system in `z` into the secret coordinates `(x, y) = A2(z)`.
pub fn to_secret_coordinates(sk: &SecretKey, system: &[Polynomial]) -> Result<Vec<Polynomial>, OracleError> {
    let back = sk.a2().inverse();
    Ok(system
        .iter()
        .map(|p| compose_affine(p, &back))
        .collect::<Result<_, _>>()?)
}

/// Basis of the polynomials in the span of a degree ≤ 2 system that do not
/// involve the first `t` variables.
pub fn eliminate_leading_variables(system: &[Polynomial], t: usize) -> Result<Vec<Polynomial>, OracleError> {
    let Some(first) = system.first() else {
        return Ok(Vec::new());
    };
    let (field, nvars) = (first.field(), first.nvars());
    let touches = |m: &Monomial| m.exponents()[..t].iter().any(|&e| e > 0);
    let mut cols = monomials_up_to(nvars, 2, TermOrder::Grevlex);
    cols.sort_by_key(|m| !touches(m));
    let split = cols.iter().take_while(|m| touches(m)).count();
    let basis = MonomialBasis::new(cols);
    let rows: Vec<Vec<u32>> = system
        .iter()
        .map(|p| {
            basis.row_of(p).ok_or(OracleError::NotQuadratic {
                degree: p.degree().unwrap_or(0),
            })
        })
        .collect::<Result<_, _>>()?;
    let rref = FieldMatrix::from_rows_with_cols(field, basis.len(), &rows)
        .expect("row width")
        .rref();
    Ok(rref
        .pivots
        .iter()
        .enumerate()
        .filter(|(_, &p)| p >= split)
        .map(|(i, _)| basis.polynomial_of(field, nvars, rref.matrix.row(i)))
        .collect())
}

/// White-box realization of the oil/vinegar view of a reduced system: move
/// it to secret coordinates, keep the part free of `x`, and check that no
/// oil×oil monomial survives.
pub fn ov_white_box_check(sk: &SecretKey, system: &[Polynomial]) -> Result<bool, OracleError> {
    let secret = to_secret_coordinates(sk, system)?;
    let xfree = eliminate_leading_variables(&secret, sk.params().t)?;
    Ok(!xfree.is_empty() && ov_shape_check(&xfree, &sk.params().oil_indices()))
}
