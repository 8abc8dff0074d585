//! Reduction of the quartic public system to quadrics by linear algebra on
//! degree-bounded Macaulay matrices.
//!
//! Columns are the monomials of degree at most `D` in decreasing order for a
//! degree-compatible term order, so in reduced row echelon form every row's
//! degree is the degree of its pivot column and rows are sorted by degree.
//! The mutant loop appends all monomial multiples (up to degree `D`) of every
//! row of degree below `D` the first time it shows up, and stops when a pass
//! produces no such row that has not already been expanded.

use std::collections::HashSet;

use thiserror::Error;

use crate::gf::{FieldMatrix, PrimeField, Rref};
use crate::mpoly::{monomials_up_to, Monomial, MonomialBasis, PolyError, Polynomial, TermOrder};
use crate::scheme::PublicKey;

/// Closure degree for one CCZ twist of quadratic maps.
pub const CLOSURE_DEGREE: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("empty polynomial system")]
    EmptySystem,
    #[error("polynomial {index} has degree {degree}, above the matrix degree {bound}")]
    DegreeTooHigh { index: usize, degree: u32, bound: u32 },
    #[error("target has length {got}, expected {expected}")]
    TargetLength { expected: usize, got: usize },
    #[error("the public span contains no polynomial of degree ≤ 2")]
    NoQuadraticSubspace,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Which generator and multiplier produced a Macaulay row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSource {
    pub generator: usize,
    pub multiplier: Monomial,
}

#[derive(Debug, Clone)]
pub struct MacaulayMatrix {
    basis: MonomialBasis,
    matrix: FieldMatrix,
    provenance: Vec<RowSource>,
    generators: Vec<Polynomial>,
}

impl MacaulayMatrix {
    pub fn columns(&self) -> &[Monomial] {
        self.basis.columns()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> &[RowSource] {
        &self.provenance
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn row_polynomial(&self, i: usize) -> Polynomial {
        let g = &self.generators[0];
        self.basis.polynomial_of(g.field(), g.nvars(), self.matrix.row(i))
    }
}

fn system_ring(system: &[Polynomial]) -> Result<(PrimeField, usize), GroebnerError> {
    let first = system.first().ok_or(GroebnerError::EmptySystem)?;
    let (field, nvars) = (first.field(), first.nvars());
    for p in system {
        if p.field() != field {
            return Err(PolyError::FieldMismatch(field.modulus(), p.field().modulus()).into());
        }
        if p.nvars() != nvars {
            return Err(PolyError::ArityMismatch {
                expected: nvars,
                got: p.nvars(),
            }
            .into());
        }
    }
    Ok((field, nvars))
}

/// Rows `mu * g` for every generator `g` and monomial `mu` with
/// `deg(mu * g) <= degree`. Zero generators contribute no rows.
pub fn build_degree_matrix(
    system: &[Polynomial],
    degree: u32,
    order: TermOrder,
) -> Result<MacaulayMatrix, GroebnerError> {
    let (field, nvars) = system_ring(system)?;
    for (index, p) in system.iter().enumerate() {
        if let Some(d) = p.degree() {
            if d > degree {
                return Err(GroebnerError::DegreeTooHigh {
                    index,
                    degree: d,
                    bound: degree,
                });
            }
        }
    }
    let basis = MonomialBasis::up_to(nvars, degree, order);
    let mut matrix = FieldMatrix::zeros(field, 0, basis.len());
    let mut provenance = Vec::new();
    for (gi, g) in system.iter().enumerate() {
        let Some(d) = g.degree() else { continue };
        let row = basis.row_of(g).expect("degree bounded");
        for mu in monomials_up_to(nvars, degree - d, order) {
            let shifted = basis.shifted_row(&row, &mu).expect("degree bounded");
            matrix.push_row(&shifted).expect("row width");
            provenance.push(RowSource {
                generator: gi,
                multiplier: mu,
            });
        }
    }
    Ok(MacaulayMatrix {
        basis,
        matrix,
        provenance,
        generators: system.to_vec(),
    })
}

/// Bookkeeping for one round of the mutant loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassStats {
    pub pass: usize,
    /// Rows fed into this pass's elimination.
    pub rows: usize,
    pub rank: usize,
    /// Rows of degree below the closure degree seen for the first time.
    pub new_low_degree: usize,
    /// Multiples appended for the next pass.
    pub appended: usize,
    /// Rank split by row degree, index = degree.
    pub rank_by_degree: Vec<usize>,
}

/// Output of either Gröbner-style pipeline.
#[derive(Debug, Clone)]
pub struct GroebnerReduction {
    /// Reduced-row-echelon basis of the degree ≤ 2 part, canonical for the
    /// term order.
    pub quadratics: Vec<Polynomial>,
    /// Rows of degree ≥ 3 that the quadrics do not generate. Empty for
    /// genuine Pesto keys; anything here means the structural assumption
    /// failed.
    pub residual: Vec<Polynomial>,
    pub passes: Vec<PassStats>,
    pub columns: usize,
    pub final_rank: usize,
}

impl GroebnerReduction {
    pub fn is_structural_failure(&self) -> bool {
        !self.residual.is_empty()
    }

    /// Quadrics followed by any residual rows.
    pub fn system(&self) -> Vec<Polynomial> {
        self.quadratics.iter().chain(&self.residual).cloned().collect()
    }
}

struct Closure {
    rref: Rref,
    passes: Vec<PassStats>,
}

/// Runs the mutant loop on `rows` and returns the final reduced matrix
/// (zero rows removed).
fn mutant_closure(field: PrimeField, basis: &MonomialBasis, rows: Vec<Vec<u32>>, degree: u32) -> Closure {
    let nvars = basis.columns().first().map_or(0, Monomial::nvars);
    let multipliers: Vec<Vec<Monomial>> = (0..=degree)
        .map(|k| {
            monomials_up_to(nvars, k, TermOrder::Grevlex)
                .into_iter()
                .filter(|m| !m.is_one())
                .collect()
        })
        .collect();
    let mut matrix = FieldMatrix::from_rows_with_cols(field, basis.len(), &rows).expect("row width");
    let mut expanded: HashSet<Vec<u32>> = HashSet::new();
    let mut passes = Vec::new();
    loop {
        let fed = matrix.rows();
        let Rref { matrix: reduced, pivots } = matrix.rref();
        let reduced = reduced.nonzero_rows();
        let mut rank_by_degree = vec![0usize; degree as usize + 1];
        let mut fresh = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            let d = basis.columns()[p].degree();
            rank_by_degree[d as usize] += 1;
            if d < degree && !expanded.contains(reduced.row(i)) {
                fresh.push((i, d));
            }
        }
        let mut next = reduced.clone();
        let mut appended = 0;
        for &(i, d) in &fresh {
            let row = reduced.row(i).to_vec();
            for mu in &multipliers[(degree - d) as usize] {
                let shifted = basis.shifted_row(&row, mu).expect("degree bounded");
                next.push_row(&shifted).expect("row width");
                appended += 1;
            }
            expanded.insert(row);
        }
        passes.push(PassStats {
            pass: passes.len() + 1,
            rows: fed,
            rank: pivots.len(),
            new_low_degree: fresh.len(),
            appended,
            rank_by_degree,
        });
        if fresh.is_empty() {
            return Closure {
                rref: Rref {
                    matrix: reduced,
                    pivots,
                },
                passes,
            };
        }
        matrix = next;
    }
}

fn rows_with_degree(basis: &MonomialBasis, rref: &Rref, keep: impl Fn(u32) -> bool) -> Vec<Vec<u32>> {
    rref.pivots
        .iter()
        .enumerate()
        .filter(|(_, &p)| keep(basis.columns()[p].degree()))
        .map(|(i, _)| rref.matrix.row(i).to_vec())
        .collect()
}

fn to_polys(field: PrimeField, nvars: usize, basis: &MonomialBasis, rows: &[Vec<u32>]) -> Vec<Polynomial> {
    rows.iter().map(|r| basis.polynomial_of(field, nvars, r)).collect()
}

fn canonical_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Rref {
    let m = FieldMatrix::from_rows_with_cols(field, cols, rows).expect("row width");
    let r = m.rref();
    Rref {
        matrix: r.matrix.nonzero_rows(),
        pivots: r.pivots,
    }
}

/// Rows of `high` not generated (at degree `degree`) by `quadratic_rows`,
/// reduced and in echelon form.
fn residual_rows(
    field: PrimeField,
    basis: &MonomialBasis,
    quadratic_rows: &[Vec<u32>],
    high: &[Vec<u32>],
    degree: u32,
) -> Vec<Vec<u32>> {
    if high.is_empty() {
        return Vec::new();
    }
    let closure = mutant_closure(field, basis, quadratic_rows.to_vec(), degree);
    let leftovers: Vec<Vec<u32>> = high
        .iter()
        .filter_map(|r| {
            let mut v = r.clone();
            closure.rref.reduce(&mut v);
            v.iter().any(|&c| c != 0).then_some(v)
        })
        .collect();
    let canon = canonical_rows(field, basis.len(), &leftovers);
    canon.matrix.row_vecs()
}

fn shifted_system(pk: &PublicKey, c: &[u32]) -> Result<Vec<Polynomial>, GroebnerError> {
    let m = pk.params().m;
    if c.len() != m {
        return Err(GroebnerError::TargetLength { expected: m, got: c.len() });
    }
    let field = pk.field();
    let n = pk.params().n;
    pk.polynomials()
        .iter()
        .zip(c)
        .map(|(g, &ci)| Ok(g.sub(&Polynomial::constant(field, n, ci))?))
        .collect()
}

/// Basis of the degree ≤ 2 polynomials in the linear span of the public
/// polynomials: the low-degree rows of the reduced coefficient matrix.
pub fn extract_quadratic_subspace(pk: &PublicKey) -> Vec<Polynomial> {
    quadratic_subspace_of(pk.polynomials(), TermOrder::Grevlex).expect("public keys are nonempty")
}

pub fn quadratic_subspace_of(system: &[Polynomial], order: TermOrder) -> Result<Vec<Polynomial>, GroebnerError> {
    let (field, nvars) = system_ring(system)?;
    let top = system.iter().filter_map(Polynomial::degree).max().unwrap_or(0).max(2);
    let basis = MonomialBasis::up_to(nvars, top, order);
    let rows: Vec<Vec<u32>> = system.iter().map(|p| basis.row_of(p).expect("degree bounded")).collect();
    let rref = canonical_rows(field, basis.len(), &rows);
    let low = rows_with_degree(&basis, &rref, |d| d <= 2);
    Ok(to_polys(field, nvars, &basis, &low))
}

/// Degree-4 Macaulay elimination with the mutant strategy on `G_pub - c`.
pub fn mutant_elimination(pk: &PublicKey, c: &[u32]) -> Result<GroebnerReduction, GroebnerError> {
    let system = shifted_system(pk, c)?;
    reduce_system(&system, CLOSURE_DEGREE, TermOrder::Grevlex)
}

/// Mutant elimination on an arbitrary system of degree at most `degree`.
pub fn reduce_system(system: &[Polynomial], degree: u32, order: TermOrder) -> Result<GroebnerReduction, GroebnerError> {
    let (field, nvars) = system_ring(system)?;
    let mac = build_degree_matrix(system, degree, order)?;
    let basis = mac.basis;
    let closure = mutant_closure(field, &basis, mac.matrix.row_vecs(), degree);
    let quad_rows = rows_with_degree(&basis, &closure.rref, |d| d <= 2);
    let high_rows = rows_with_degree(&basis, &closure.rref, |d| d > 2);
    let residual = residual_rows(field, &basis, &quad_rows, &high_rows, degree);
    Ok(GroebnerReduction {
        quadratics: to_polys(field, nvars, &basis, &quad_rows),
        residual: to_polys(field, nvars, &basis, &residual),
        passes: closure.passes,
        columns: basis.len(),
        final_rank: closure.rref.rank(),
    })
}

/// The two-stage pipeline: take the quadrics in the span of `G_pub - c`,
/// close them under multiplication up to degree four, and replace each
/// remaining cubic/quartic generator by its normal form modulo that closure.
pub fn reduce_with_known_quadrics(pk: &PublicKey, c: &[u32]) -> Result<GroebnerReduction, GroebnerError> {
    let system = shifted_system(pk, c)?;
    let (field, nvars) = system_ring(&system)?;
    let degree = CLOSURE_DEGREE;
    let basis = MonomialBasis::up_to(nvars, degree, TermOrder::Grevlex);
    let rows: Vec<Vec<u32>> = system
        .iter()
        .map(|p| basis.row_of(p).expect("public degree ≤ 4"))
        .collect();
    let span = canonical_rows(field, basis.len(), &rows);
    let quadrics = rows_with_degree(&basis, &span, |d| d <= 2);
    if quadrics.is_empty() {
        return Err(GroebnerError::NoQuadraticSubspace);
    }
    let remaining = rows_with_degree(&basis, &span, |d| d > 2);
    let closure = mutant_closure(field, &basis, quadrics.clone(), degree);
    let mut combined = quadrics;
    for r in &remaining {
        let mut v = r.clone();
        closure.rref.reduce(&mut v);
        if v.iter().any(|&x| x != 0) {
            combined.push(v);
        }
    }
    let out = canonical_rows(field, basis.len(), &combined);
    let quad_rows = rows_with_degree(&basis, &out, |d| d <= 2);
    let high_rows = rows_with_degree(&basis, &out, |d| d > 2);
    let residual = residual_rows(field, &basis, &quad_rows, &high_rows, degree);
    Ok(GroebnerReduction {
        quadratics: to_polys(field, nvars, &basis, &quad_rows),
        residual: to_polys(field, nvars, &basis, &residual),
        passes: closure.passes,
        columns: basis.len(),
        final_rank: closure.rref.rank(),
    })
}
