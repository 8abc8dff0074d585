//! Recovery of quadratic input/output relations of the public map from
//! sampled evaluations, and their specialization at a target output.
//!
//! Relations live in the ring with variables `w1..wm, z1..zn` (outputs
//! first). The coefficient columns follow the block layout
//!
//! ```text
//! w_i w_j (i <= j) | w_i z_j | z_i z_j (i <= j) | w_i | z_j | 1
//! ```
//!
//! so that in reduced row echelon form the relations free of `w·w` and `w·z`
//! monomials are exactly the trailing rows.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{FieldMatrix, PrimeField};
use crate::mpoly::{Monomial, MonomialBasis, PolyError, Polynomial, TermOrder};
use crate::scheme::{public_eval, PublicKey, SchemeError};

/// Extra samples on top of the monomial count.
pub const SAMPLE_MARGIN: usize = 20;

#[derive(Debug, Error)]
pub enum HoleError {
    #[error("no samples given")]
    NoSamples,
    #[error("sample {index} has shape ({input}, {output}), expected ({n}, {m})")]
    SampleShape {
        index: usize,
        input: usize,
        output: usize,
        n: usize,
        m: usize,
    },
    #[error("target has length {got}, expected {expected}")]
    TargetLength { expected: usize, got: usize },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn binomial(n: usize, k: usize) -> usize {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

/// Number of monomials of degree at most two in `n + m` variables.
pub fn relation_monomial_count(n: usize, m: usize) -> usize {
    binomial(n + m + 2, 2)
}

pub fn default_sample_count(n: usize, m: usize) -> usize {
    relation_monomial_count(n, m) + SAMPLE_MARGIN
}

/// Relation columns in block order, as monomials over `w1..wm, z1..zn`.
pub fn relation_monomials(n: usize, m: usize) -> Vec<Monomial> {
    let nv = n + m;
    let pair = |a: usize, b: usize| {
        let mut e = vec![0u16; nv];
        e[a] += 1;
        e[b] += 1;
        Monomial::new(e)
    };
    let mut cols = Vec::with_capacity(relation_monomial_count(n, m));
    for i in 0..m {
        for j in i..m {
            cols.push(pair(i, j));
        }
    }
    for i in 0..m {
        for j in 0..n {
            cols.push(pair(i, m + j));
        }
    }
    for i in 0..n {
        for j in i..n {
            cols.push(pair(m + i, m + j));
        }
    }
    cols.extend((0..nv).map(|i| Monomial::var(nv, i)));
    cols.push(Monomial::one(nv));
    cols
}

/// Index of the first `z·z` column; columns before it involve an output
/// variable in a quadratic monomial.
pub fn short_block_start(m: usize, n: usize) -> usize {
    m * (m + 1) / 2 + m * n
}

/// A valid input/output pair of the public map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub input: Vec<u32>,
    pub output: Vec<u32>,
}

/// Draws `count` uniform inputs from `seed` and evaluates the public map on
/// them. Inputs are drawn sequentially so the list is the same however the
/// evaluations are scheduled.
pub fn collect_samples(pk: &PublicKey, count: usize, seed: u64) -> Result<Vec<Sample>, HoleError> {
    let field = pk.field();
    let n = pk.params().n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Vec<u32>> = (0..count).map(|_| field.random_vector(n, &mut rng)).collect();
    let samples = inputs
        .into_par_iter()
        .map(|input| {
            let output = public_eval(pk, &input)?;
            Ok(Sample { input, output })
        })
        .collect::<Result<Vec<_>, SchemeError>>()?;
    Ok(samples)
}

/// Basis of the quadratic relations satisfied by a set of samples.
#[derive(Debug, Clone)]
pub struct RelationSpace {
    field: PrimeField,
    n: usize,
    m: usize,
    /// Reduced-row-echelon basis in the block column order.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    sample_count: usize,
    /// Set when fewer samples than the safe default were used.
    pub warning: Option<String>,
}

impl RelationSpace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    /// Shape of the evaluation matrix: samples × relation monomials.
    pub fn matrix_shape(&self) -> (usize, usize) {
        (self.sample_count, relation_monomial_count(self.n, self.m))
    }

    fn basis_columns(&self) -> MonomialBasis {
        MonomialBasis::new(relation_monomials(self.n, self.m))
    }

    /// Relations as polynomials over `w1..wm, z1..zn`.
    pub fn basis(&self) -> Vec<Polynomial> {
        let cols = self.basis_columns();
        self.rows
            .iter()
            .map(|r| cols.polynomial_of(self.field, self.n + self.m, r))
            .collect()
    }

    /// Whether every relation vanishes on `sample`.
    pub fn vanishes_on(&self, sample: &Sample) -> bool {
        let point: Vec<u32> = sample.output.iter().chain(&sample.input).copied().collect();
        self.basis().iter().all(|r| r.evaluate(&point) == Ok(0))
    }
}

fn monomial_row(cols: &[Monomial], field: PrimeField, point: &[u32]) -> Vec<u32> {
    cols.iter()
        .map(|mon| {
            mon.support()
                .fold(1u32, |acc, (i, e)| field.mul(acc, field.pow(point[i], e as u64)))
        })
        .collect()
}

/// Nullspace of the evaluation matrix whose rows are the relation monomials
/// evaluated at each sample.
pub fn find_quadratic_relations(
    samples: &[Sample],
    n: usize,
    m: usize,
    field: PrimeField,
) -> Result<RelationSpace, HoleError> {
    if samples.is_empty() {
        return Err(HoleError::NoSamples);
    }
    for (index, s) in samples.iter().enumerate() {
        if s.input.len() != n || s.output.len() != m {
            return Err(HoleError::SampleShape {
                index,
                input: s.input.len(),
                output: s.output.len(),
                n,
                m,
            });
        }
    }
    let cols = relation_monomials(n, m);
    let rows: Vec<Vec<u32>> = samples
        .par_iter()
        .map(|s| {
            let point: Vec<u32> = s.output.iter().chain(&s.input).copied().collect();
            monomial_row(&cols, field, &point)
        })
        .collect();
    let eval = FieldMatrix::from_rows_with_cols(field, cols.len(), &rows).expect("row width");
    let kernel = eval.nullspace();
    let canon = FieldMatrix::from_rows_with_cols(field, cols.len(), &kernel)
        .expect("row width")
        .rref();
    let warning = if samples.len() < cols.len() {
        Some(format!(
            "only {} samples for {} relation monomials; spurious relations are likely",
            samples.len(),
            cols.len()
        ))
    } else if samples.len() < cols.len() + SAMPLE_MARGIN {
        Some(format!(
            "{} samples is below the safe count {}; spurious relations are possible",
            samples.len(),
            cols.len() + SAMPLE_MARGIN
        ))
    } else {
        None
    };
    Ok(RelationSpace {
        field,
        n,
        m,
        rows: canon.matrix.row_vecs().into_iter().take(canon.pivots.len()).collect(),
        pivots: canon.pivots,
        sample_count: samples.len(),
        warning,
    })
}

/// Relations without `w·w` or `w·z` monomials: the trailing rows of the
/// reduced basis whose pivot lies in the `z·z` block or later.
pub fn isolate_short_relations(rs: &RelationSpace) -> Vec<Polynomial> {
    let start = short_block_start(rs.m, rs.n);
    let cols = rs.basis_columns();
    rs.rows
        .iter()
        .zip(&rs.pivots)
        .filter(|(_, &p)| p >= start)
        .map(|(r, _)| cols.polynomial_of(rs.field, rs.n + rs.m, r))
        .collect()
}

/// Substitutes `w = target` into every relation and returns a reduced basis
/// of the resulting polynomials in `z1..zn`.
pub fn specialize_at_output(rs: &RelationSpace, target: &[u32]) -> Result<Vec<Polynomial>, HoleError> {
    if target.len() != rs.m {
        return Err(HoleError::TargetLength {
            expected: rs.m,
            got: target.len(),
        });
    }
    let assignment: Vec<Option<u32>> = target
        .iter()
        .map(|&v| Some(v % rs.field.modulus()))
        .chain(std::iter::repeat_n(None, rs.n))
        .collect();
    let specialized = rs
        .basis()
        .iter()
        .map(|r| r.specialize(&assignment))
        .collect::<Result<Vec<_>, _>>()?;
    let cols = MonomialBasis::up_to(rs.n, 2, TermOrder::Grevlex);
    let rows: Vec<Vec<u32>> = specialized
        .iter()
        .map(|p| cols.row_of(p).expect("degree ≤ 2"))
        .collect();
    let rref = FieldMatrix::from_rows_with_cols(rs.field, cols.len(), &rows)
        .expect("row width")
        .rref();
    Ok((0..rref.rank())
        .map(|i| cols.polynomial_of(rs.field, rs.n, rref.matrix.row(i)))
        .collect())
}

/// Everything produced by one run of the relation attack.
#[derive(Debug, Clone)]
pub struct HoleReduction {
    pub relations: RelationSpace,
    pub short_relations: Vec<Polynomial>,
    pub system: Vec<Polynomial>,
}

impl HoleReduction {
    /// No short relations means the public map did not have the expected
    /// structure.
    pub fn is_structural_failure(&self) -> bool {
        self.short_relations.is_empty()
    }
}

/// Samples, recovers relations, isolates the short ones and specializes at
/// `target`. `samples` defaults to the monomial count plus [`SAMPLE_MARGIN`].
pub fn hole_attack(
    pk: &PublicKey,
    target: &[u32],
    samples: Option<usize>,
    seed: u64,
) -> Result<HoleReduction, HoleError> {
    let (n, m) = (pk.params().n, pk.params().m);
    if target.len() != m {
        return Err(HoleError::TargetLength {
            expected: m,
            got: target.len(),
        });
    }
    let count = samples.unwrap_or_else(|| default_sample_count(n, m));
    let pairs = collect_samples(pk, count, seed)?;
    let relations = find_quadratic_relations(&pairs, n, m, pk.field())?;
    let short_relations = isolate_short_relations(&relations);
    let system = specialize_at_output(&relations, target)?;
    Ok(HoleReduction {
        relations,
        short_relations,
        system,
    })
}
