//! Parameter sweeps timing either attack on freshly generated keys.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::groebner::{mutant_elimination, GroebnerError};
use crate::hole::{hole_attack, HoleError};
use crate::scheme::{keygen, public_eval, PestoParams, SchemeError};

pub const CSV_HEADER: &str = "n,m,method,wall_ms,matrix_rows,matrix_cols,relation_dim";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("bad sweep entry `{entry}`: {reason}")]
    Sweep { entry: String, reason: String },
    #[error("unknown method `{0}` (expected groebner or hole)")]
    Method(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Hole(#[from] HoleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Groebner,
    Hole,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Groebner => "groebner",
            Method::Hole => "hole",
        })
    }
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "groebner" => Ok(Method::Groebner),
            "hole" => Ok(Method::Hole),
            other => Err(BenchError::Method(other.to_string())),
        }
    }
}

/// One `(n, m, t, s)` point of a sweep. When `t` or `s` is omitted it
/// defaults to `ceil(m / 3)` and `max(1, (n - t) / 3)`, which gives the toy
/// shape `(6, 5, 2, 1)` and `(9, 7, 3, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepPoint {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub s: usize,
}

impl SweepPoint {
    pub fn params(&self, q: u32) -> Result<PestoParams, SchemeError> {
        PestoParams::new(self.n, self.m, self.t, self.s, q)
    }
}

impl FromStr for SweepPoint {
    type Err = BenchError;

    /// `N:M[:T[:S]]`
    fn from_str(entry: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| BenchError::Sweep {
            entry: entry.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<usize> = entry
            .split(':')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("expected N:M[:T[:S]] with nonnegative integers"))?;
        let (n, m) = match parts[..] {
            [n, m, ..] if parts.len() <= 4 => (n, m),
            _ => return Err(bad("expected N:M[:T[:S]]")),
        };
        let t = parts.get(2).copied().unwrap_or(m.div_ceil(3));
        let s = parts
            .get(3)
            .copied()
            .unwrap_or_else(|| (n.saturating_sub(t) / 3).max(1));
        Ok(SweepPoint { n, m, t, s })
    }
}

/// Comma-separated sweep points; a blank string is the empty sweep.
pub fn parse_sweep(text: &str) -> Result<Vec<SweepPoint>, BenchError> {
    text.split(',')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub method: Method,
    pub wall_ms: u128,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    /// Relation-space dimension; only defined for the relation attack.
    pub relation_dim: Option<usize>,
}

/// Generates a key from `seed`, picks a target as the image of a random
/// input, and times one attack. Key generation is not timed.
pub fn bench_point(point: SweepPoint, q: u32, method: Method, seed: u64) -> Result<BenchRow, BenchError> {
    let params = point.params(q)?;
    let (_, pk) = keygen(params, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a5c_e11e);
    let z = params.field().random_vector(params.n, &mut rng);
    let target = public_eval(&pk, &z)?;
    let start = Instant::now();
    let (matrix_rows, matrix_cols, relation_dim) = match method {
        Method::Groebner => {
            let red = mutant_elimination(&pk, &target)?;
            let rows = red.passes.iter().map(|p| p.rows).max().unwrap_or(0);
            (rows, red.columns, None)
        }
        Method::Hole => {
            let red = hole_attack(&pk, &target, None, seed)?;
            let (rows, cols) = red.relations.matrix_shape();
            (rows, cols, Some(red.relations.dim()))
        }
    };
    Ok(BenchRow {
        n: params.n,
        m: params.m,
        method,
        wall_ms: start.elapsed().as_millis(),
        matrix_rows,
        matrix_cols,
        relation_dim,
    })
}

pub fn run_sweep(points: &[SweepPoint], q: u32, method: Method, seed: u64) -> Result<Vec<BenchRow>, BenchError> {
    points.iter().map(|&p| bench_point(p, q, method, seed)).collect()
}

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let dim = r.relation_dim.map(|d| d.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n, r.m, r.method, r.wall_ms, r.matrix_rows, r.matrix_cols, dim
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        assert_eq!(parse_sweep("").unwrap(), vec![]);
        assert_eq!(parse_sweep(" , ").unwrap(), vec![]);
        let pts = parse_sweep("6:5, 9:7,15:12:4:3").unwrap();
        assert_eq!(pts[0], SweepPoint { n: 6, m: 5, t: 2, s: 1 });
        assert_eq!(pts[1], SweepPoint { n: 9, m: 7, t: 3, s: 2 });
        assert_eq!(pts[2], SweepPoint { n: 15, m: 12, t: 4, s: 3 });
        assert!(parse_sweep("6").is_err());
        assert!(parse_sweep("6:5:2:1:0").is_err());
        assert!(parse_sweep("a:b").is_err());
        assert!("newton".parse::<Method>().is_err());
        assert_eq!("hole".parse::<Method>().unwrap(), Method::Hole);
    }

    #[test]
    fn empty_sweep_is_header_only() {
        assert_eq!(rows_to_csv(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn hole_matrix_sizes_follow_the_binomial() {
        let pts = parse_sweep("6:5,9:7").unwrap();
        let rows = run_sweep(&pts, 3, Method::Hole, 1).unwrap();
        let binom2 = |k: usize| k * (k - 1) / 2;
        for (r, p) in rows.iter().zip(&pts) {
            assert_eq!(r.matrix_cols, binom2(p.n + p.m + 2));
            assert_eq!(r.matrix_rows, r.matrix_cols + 20);
            assert!(r.relation_dim.unwrap() >= p.m);
        }
        let csv = rows_to_csv(&rows);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().starts_with("6,5,hole,"));
    }

    #[test]
    fn groebner_columns_follow_the_binomial() {
        let row = bench_point("6:5".parse().unwrap(), 3, Method::Groebner, 4).unwrap();
        assert_eq!(row.matrix_cols, 210);
        assert_eq!(row.relation_dim, None);
        assert!(rows_to_csv(&[row]).lines().nth(1).unwrap().ends_with(",210,"));
    }
}
