//! The Pesto scheme: key generation, public-key assembly, public evaluation
//! and trapdoor inversion.
//!
//! Internal variables are ordered `x1..xt, y1..y(n-t)`. The vinegar set is
//! `x1..xt, y1..ys` and the oil set is `y(s+1)..y(n-t)`. The secret map is
//!
//! ```text
//! G(x, y) = (x - qmap(y), U(x - qmap(y), y))
//! ```
//!
//! and the public key is `A1 ∘ G ∘ A2`, a system of `m` polynomials of degree
//! at most four in `n` variables.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{solve_affine, FieldError, FieldMatrix, PrimeField};
use crate::mpoly::{apply_affine_to_system, AffineMap, Monomial, PolyError, Polynomial};

/// Vinegar resamples attempted by [`secret_invert`] before giving up.
pub const DEFAULT_RETRIES: usize = 64;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("no preimage found after {attempts} vinegar samples")]
    NotFound { attempts: usize },
    #[error("fixture `{name}`: {reason}")]
    Fixture { name: String, reason: String },
    #[error("key file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PestoParams {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub s: usize,
    pub q: u32,
}

impl PestoParams {
    pub fn new(n: usize, m: usize, t: usize, s: usize, q: u32) -> Result<Self, SchemeError> {
        let p = Self { n, m, t, s, q };
        p.validate()?;
        Ok(p)
    }

    /// The toy instance over GF(3): `(n, m, t, s) = (6, 5, 2, 1)`.
    pub fn toy() -> Self {
        Self {
            n: 6,
            m: 5,
            t: 2,
            s: 1,
            q: 3,
        }
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        let bad = |msg: String| Err(SchemeError::InvalidParams(msg));
        if self.n == 0 || self.m == 0 || self.t == 0 || self.s == 0 {
            return bad(format!(
                "n, m, t, s must be positive (got n={}, m={}, t={}, s={})",
                self.n, self.m, self.t, self.s
            ));
        }
        if self.t > self.n.min(self.m) {
            return bad(format!("t ≤ min(n,m) violated: t={}, n={}, m={}", self.t, self.n, self.m));
        }
        if self.s > self.n - self.t {
            return bad(format!("0 < s ≤ n − t violated: s={}, n−t={}", self.s, self.n - self.t));
        }
        PrimeField::new(self.q).map_err(|e| SchemeError::InvalidParams(e.to_string()))?;
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.q).expect("validated modulus")
    }

    pub fn vinegar_count(&self) -> usize {
        self.t + self.s
    }

    pub fn oil_count(&self) -> usize {
        self.n - self.t - self.s
    }

    /// Oil variable indices in the internal `(x, y)` ordering.
    pub fn oil_indices(&self) -> Vec<usize> {
        (self.t + self.s..self.n).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    params: PestoParams,
    qmap: Vec<Polynomial>,
    u: Vec<Polynomial>,
    a1: AffineMap,
    a2: AffineMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: PestoParams,
    gpub: Vec<Polynomial>,
}

fn has_oil_square(mon: &Monomial, oil_start: usize) -> bool {
    let oil_degree: u32 = mon.exponents()[oil_start..].iter().map(|&e| e as u32).sum();
    oil_degree >= 2
}

impl SecretKey {
    /// Assembles a secret key from its parts, checking every structural
    /// invariant: `qmap` has `t` components of degree exactly two in the
    /// `n - t` y-variables, `U` has `m - t` components of degree at most two in
    /// all `n` variables with no oil×oil monomial, and the affine maps have
    /// dimensions `m` and `n`.
    pub fn from_parts(
        params: PestoParams,
        qmap: Vec<Polynomial>,
        u: Vec<Polynomial>,
        a1: AffineMap,
        a2: AffineMap,
    ) -> Result<Self, SchemeError> {
        params.validate()?;
        let field = params.field();
        let invalid = |msg: String| Err(SchemeError::InvalidKey(msg));
        if qmap.len() != params.t {
            return invalid(format!("qmap has {} components, expected t={}", qmap.len(), params.t));
        }
        for (i, p) in qmap.iter().enumerate() {
            if p.field() != field || p.nvars() != params.n - params.t {
                return invalid(format!("qmap[{i}] is not over GF({}) in n−t variables", params.q));
            }
            if p.degree() != Some(2) {
                return invalid(format!("qmap[{i}] must have degree exactly 2"));
            }
        }
        if u.len() != params.m - params.t {
            return invalid(format!("U has {} components, expected m−t={}", u.len(), params.m - params.t));
        }
        let oil_start = params.vinegar_count();
        for (i, p) in u.iter().enumerate() {
            if p.field() != field || p.nvars() != params.n {
                return invalid(format!("U[{i}] is not over GF({}) in n variables", params.q));
            }
            if p.degree().unwrap_or(0) > 2 {
                return invalid(format!("U[{i}] has degree above 2"));
            }
            if p.terms().any(|(m, _)| has_oil_square(m, oil_start)) {
                return invalid(format!("U[{i}] contains an oil×oil monomial"));
            }
        }
        if a1.dim() != params.m || a1.field() != field {
            return invalid(format!("A1 must act on GF({})^{}", params.q, params.m));
        }
        if a2.dim() != params.n || a2.field() != field {
            return invalid(format!("A2 must act on GF({})^{}", params.q, params.n));
        }
        Ok(Self { params, qmap, u, a1, a2 })
    }

    pub fn params(&self) -> &PestoParams {
        &self.params
    }

    pub fn qmap(&self) -> &[Polynomial] {
        &self.qmap
    }

    pub fn u(&self) -> &[Polynomial] {
        &self.u
    }

    pub fn a1(&self) -> &AffineMap {
        &self.a1
    }

    pub fn a2(&self) -> &AffineMap {
        &self.a2
    }

    /// `S_i = x_i - qmap_i(y)` as polynomials in the internal variables.
    fn twist_components(&self) -> Vec<Polynomial> {
        let PestoParams { n, t, .. } = self.params;
        let field = self.params.field();
        self.qmap
            .iter()
            .enumerate()
            .map(|(i, qi)| {
                Polynomial::var(field, n, i)
                    .sub(&qi.embed(n, t))
                    .expect("same ring")
            })
            .collect()
    }

    /// The secret map `G(x, y) = (x - qmap(y), U(x - qmap(y), y))`.
    pub fn internal_map(&self) -> Vec<Polynomial> {
        let PestoParams { n, t, .. } = self.params;
        let field = self.params.field();
        let mut images = self.twist_components();
        images.extend((t..n).map(|i| Polynomial::var(field, n, i)));
        let mut g = images[..t].to_vec();
        for uj in &self.u {
            g.push(uj.substitute(&images).expect("arity checked at construction"));
        }
        g
    }

    pub fn public_key(&self) -> PublicKey {
        assemble_public(self)
    }
}

impl PublicKey {
    pub fn new(params: PestoParams, gpub: Vec<Polynomial>) -> Result<Self, SchemeError> {
        params.validate()?;
        let field = params.field();
        if gpub.len() != params.m {
            return Err(SchemeError::InvalidKey(format!(
                "public key has {} polynomials, expected m={}",
                gpub.len(),
                params.m
            )));
        }
        for (i, p) in gpub.iter().enumerate() {
            if p.field() != field || p.nvars() != params.n {
                return Err(SchemeError::InvalidKey(format!(
                    "gpub[{i}] is not over GF({}) in n={} variables",
                    params.q, params.n
                )));
            }
            if p.degree().unwrap_or(0) > 4 {
                return Err(SchemeError::InvalidKey(format!("gpub[{i}] has degree above 4")));
            }
        }
        Ok(Self { params, gpub })
    }

    /// A "public key" made of arbitrary polynomials, for control experiments
    /// on systems without Pesto structure. Only shape is checked.
    pub fn from_system(params: PestoParams, gpub: Vec<Polynomial>) -> Result<Self, SchemeError> {
        Self::new(params, gpub)
    }

    pub fn params(&self) -> &PestoParams {
        &self.params
    }

    pub fn field(&self) -> PrimeField {
        self.params.field()
    }

    pub fn polynomials(&self) -> &[Polynomial] {
        &self.gpub
    }

    pub fn eval(&self, z: &[u32]) -> Result<Vec<u32>, SchemeError> {
        public_eval(self, z)
    }
}

fn sample_quadratic_part(
    field: PrimeField,
    nvars: usize,
    pairs: &[(usize, usize)],
    rng: &mut ChaCha8Rng,
) -> Polynomial {
    let terms = pairs.iter().map(|&(i, j)| {
        let mut e = vec![0u16; nvars];
        e[i] += 1;
        e[j] += 1;
        (Monomial::new(e), field.random(rng))
    });
    Polynomial::from_terms(field, nvars, terms.collect::<Vec<_>>())
}

fn sample_affine_part(field: PrimeField, nvars: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let mut p = Polynomial::zero(field, nvars);
    for i in 0..nvars {
        p.add_term(Monomial::var(nvars, i), field.random(rng));
    }
    p.add_term(Monomial::one(nvars), field.random(rng));
    p
}

/// Samples a key pair deterministically from `seed`.
///
/// Coefficients are uniform in GF(q), zero included. The quadratic part of
/// each `qmap` component is resampled until it is nonzero so that every
/// component has degree exactly two.
pub fn keygen(params: PestoParams, seed: u64) -> Result<(SecretKey, PublicKey), SchemeError> {
    params.validate()?;
    let field = params.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let PestoParams { n, m, t, .. } = params;
    let ny = n - t;

    let y_pairs: Vec<(usize, usize)> = (0..ny).flat_map(|i| (i..ny).map(move |j| (i, j))).collect();
    let qmap = (0..t)
        .map(|_| {
            let quad = loop {
                let p = sample_quadratic_part(field, ny, &y_pairs, &mut rng);
                if !p.is_zero() {
                    break p;
                }
            };
            quad.add(&sample_affine_part(field, ny, &mut rng)).expect("same ring")
        })
        .collect();

    let v = params.vinegar_count();
    let mut u_pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i..v).map(move |j| (i, j))).collect();
    u_pairs.extend((0..v).flat_map(|i| (v..n).map(move |j| (i, j))));
    let u = (0..m - t)
        .map(|_| {
            sample_quadratic_part(field, n, &u_pairs, &mut rng)
                .add(&sample_affine_part(field, n, &mut rng))
                .expect("same ring")
        })
        .collect();

    let a1 = AffineMap::random(field, m, &mut rng);
    let a2 = AffineMap::random(field, n, &mut rng);
    let sk = SecretKey::from_parts(params, qmap, u, a1, a2)?;
    let pk = assemble_public(&sk);
    Ok((sk, pk))
}

/// `G_pub = A1 ∘ G ∘ A2`.
///
/// `A2` is pushed through the quadratic pieces first (`x - qmap(y)` and the
/// plain `y` coordinates) and `U` is then evaluated on those, which avoids
/// composing a quartic with a linear substitution.
pub fn assemble_public(sk: &SecretKey) -> PublicKey {
    let params = sk.params;
    let t = params.t;
    let a2 = sk.a2.component_polynomials();
    let (xs, ys) = a2.split_at(t);
    let mut images: Vec<Polynomial> = xs
        .iter()
        .zip(&sk.qmap)
        .map(|(x, qi)| x.sub(&qi.substitute(ys).expect("n−t images")).expect("same ring"))
        .collect();
    images.extend_from_slice(ys);
    let mut g = images[..t].to_vec();
    for uj in &sk.u {
        g.push(uj.substitute(&images).expect("n images"));
    }
    let gpub = apply_affine_to_system(&sk.a1, &g).expect("m components");
    PublicKey { params, gpub }
}

pub fn public_eval(pk: &PublicKey, z: &[u32]) -> Result<Vec<u32>, SchemeError> {
    if z.len() != pk.params.n {
        return Err(PolyError::ArityMismatch {
            expected: pk.params.n,
            got: z.len(),
        }
        .into());
    }
    pk.gpub.iter().map(|p| Ok(p.evaluate(z)?)).collect()
}

/// Finds some `z` with `G_pub(z) = w` using the trapdoor.
///
/// With `(a, b) = A1^{-1}(w)` the system splits into `x - qmap(y) = a` and
/// `U(a, y) = b`. Fixing random vinegar values `y1..ys` makes the second part
/// linear in the oil variables; each sample that yields a consistent system
/// gives a preimage `A2^{-1}(a + qmap(y), y)`.
pub fn secret_invert(sk: &SecretKey, w: &[u32], seed: u64, retries: usize) -> Result<Vec<u32>, SchemeError> {
    let params = sk.params;
    let PestoParams { n, m, t, s, .. } = params;
    if w.len() != m {
        return Err(PolyError::ArityMismatch { expected: m, got: w.len() }.into());
    }
    let field = params.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ab = sk.a1.inverse().apply(w)?;
    let (a, b) = ab.split_at(t);
    let oil = params.oil_count();
    let a2_inv = sk.a2.inverse();

    for _ in 0..retries {
        let vinegar = field.random_vector(s, &mut rng);
        let free_fill = field.random_vector(oil.max(1), &mut rng);
        let mut assignment: Vec<Option<u32>> = Vec::with_capacity(n);
        assignment.extend(a.iter().map(|&v| Some(v)));
        assignment.extend(vinegar.iter().map(|&v| Some(v)));
        assignment.extend(std::iter::repeat_n(None, oil));

        let mut rows = Vec::with_capacity(m - t);
        let mut rhs = Vec::with_capacity(m - t);
        for (uj, &bj) in sk.u.iter().zip(b) {
            let lin = uj.specialize(&assignment)?;
            let (coeffs, c) = lin
                .affine_parts()
                .ok_or_else(|| SchemeError::InvalidKey("U is not linear in the oil variables".into()))?;
            rows.push(coeffs);
            rhs.push(field.sub(bj, c));
        }
        let matrix = FieldMatrix::from_rows_with_cols(field, oil, &rows)?;
        let Some(oil_values) = solve_affine(&matrix, &rhs, &free_fill)? else {
            continue;
        };
        let y: Vec<u32> = vinegar.into_iter().chain(oil_values).collect();
        let mut xy = Vec::with_capacity(n);
        for (qi, &ai) in sk.qmap.iter().zip(a) {
            xy.push(field.add(ai, qi.evaluate(&y)?));
        }
        xy.extend_from_slice(&y);
        return Ok(a2_inv.apply(&xy)?);
    }
    Err(SchemeError::NotFound { attempts: retries })
}

/// A bundled example instance.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub secret_key: SecretKey,
    pub public_key: PublicKey,
    pub ipt: Vec<u32>,
    pub opt: Vec<u32>,
}

#[derive(Deserialize)]
struct FixtureFile {
    secret_key: serde_json::Value,
    ipt: Vec<u32>,
    opt: Vec<u32>,
}

const TOY_FIXTURE: &str = include_str!("../fixtures/toy.json");

/// Loads a bundled fixture by name. The only bundled instance is `"toy"`,
/// the six-variable example over GF(3).
pub fn load_fixture(name: &str) -> Result<Fixture, SchemeError> {
    let text = match name {
        "toy" => TOY_FIXTURE,
        _ => {
            return Err(SchemeError::Fixture {
                name: name.to_string(),
                reason: "no such fixture".into(),
            })
        }
    };
    parse_fixture(name, text)
}

pub fn parse_fixture(name: &str, text: &str) -> Result<Fixture, SchemeError> {
    let corrupt = |reason: String| SchemeError::Fixture {
        name: name.to_string(),
        reason,
    };
    let file: FixtureFile = serde_json::from_str(text).map_err(|e| corrupt(e.to_string()))?;
    let sk_text = serde_json::to_string(&file.secret_key).map_err(|e| corrupt(e.to_string()))?;
    let secret_key = crate::keyfile::secret_key_from_json(&sk_text).map_err(|e| corrupt(e.to_string()))?;
    let public_key = assemble_public(&secret_key);
    let out = public_eval(&public_key, &file.ipt).map_err(|e| corrupt(e.to_string()))?;
    if out != file.opt {
        return Err(corrupt(format!("G_pub(ipt) = {:?} but the fixture records {:?}", out, file.opt)));
    }
    Ok(Fixture {
        secret_key,
        public_key,
        ipt: file.ipt,
        opt: file.opt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::compose_affine;
    use rand::Rng;

    #[test]
    fn parameter_validation() {
        assert!(PestoParams::new(6, 5, 2, 1, 3).is_ok());
        let err = PestoParams::new(6, 5, 7, 1, 3).unwrap_err().to_string();
        assert!(err.contains("t ≤ min(n,m)"), "{err}");
        assert!(PestoParams::new(6, 5, 2, 5, 3).unwrap_err().to_string().contains("s ≤ n − t"));
        assert!(PestoParams::new(6, 5, 2, 0, 3).is_err());
        assert!(PestoParams::new(6, 5, 2, 1, 4).is_err());
        assert!(keygen(PestoParams { n: 6, m: 5, t: 7, s: 1, q: 3 }, 0).is_err());
    }

    #[test]
    fn keygen_shape_and_invariants() {
        let (sk, pk) = keygen(PestoParams::toy(), 11).unwrap();
        assert_eq!(pk.polynomials().len(), 5);
        assert!(pk.polynomials().iter().all(|p| p.nvars() == 6));
        assert_eq!(pk.polynomials().iter().filter_map(Polynomial::degree).max(), Some(4));
        assert!(sk.qmap().iter().all(|p| p.degree() == Some(2)));
        let g = sk.internal_map();
        for gi in &g[..2] {
            assert_eq!(gi.degree(), Some(2));
        }
        for gi in &g[2..] {
            assert!(gi.degree().unwrap_or(0) <= 4);
        }
        // x appears only through the linear x_i terms of the twist part
        for (i, gi) in g[..2].iter().enumerate() {
            for (mon, _) in gi.terms() {
                let x_deg: u16 = mon.exponents()[..2].iter().sum();
                assert!(x_deg == 0 || (mon.degree() == 1 && mon.exponents()[i] == 1));
            }
        }
    }

    #[test]
    fn keygen_is_deterministic() {
        let a = keygen(PestoParams::toy(), 5).unwrap();
        let b = keygen(PestoParams::toy(), 5).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        let c = keygen(PestoParams::toy(), 6).unwrap();
        assert_ne!(a.1, c.1);
    }

    #[test]
    fn assembly_matches_generic_composition() {
        // oracle: compose the quartic G with A2 directly, then push through A1
        for seed in 0..5 {
            let (sk, pk) = keygen(PestoParams::toy(), seed).unwrap();
            let g_a2: Vec<Polynomial> = sk
                .internal_map()
                .iter()
                .map(|gi| compose_affine(gi, sk.a2()).unwrap())
                .collect();
            let expected = apply_affine_to_system(sk.a1(), &g_a2).unwrap();
            assert_eq!(pk.polynomials(), &expected[..]);
        }
    }

    #[test]
    fn public_eval_matches_stepwise_evaluation() {
        let (sk, pk) = keygen(PestoParams::toy(), 21).unwrap();
        let g = sk.internal_map();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let z = pk.field().random_vector(6, &mut rng);
            let xy = sk.a2().apply(&z).unwrap();
            let gv: Vec<u32> = g.iter().map(|p| p.evaluate(&xy).unwrap()).collect();
            assert_eq!(public_eval(&pk, &z).unwrap(), sk.a1().apply(&gv).unwrap());
        }
        assert!(public_eval(&pk, &[0, 1]).is_err());
        let zero = PublicKey::new(PestoParams::toy(), vec![Polynomial::zero(pk.field(), 6); 5]).unwrap();
        assert_eq!(public_eval(&zero, &[1, 2, 0, 1, 2, 0]).unwrap(), vec![0; 5]);
    }

    #[test]
    fn zero_u_and_identity_maps() {
        let params = PestoParams::toy();
        let f = params.field();
        let (sk, _) = keygen(params, 3).unwrap();
        let zero_u = vec![Polynomial::zero(f, 6); 3];
        let plain = SecretKey::from_parts(
            params,
            sk.qmap().to_vec(),
            zero_u.clone(),
            AffineMap::identity(f, 5),
            AffineMap::identity(f, 6),
        )
        .unwrap();
        let pk = plain.public_key();
        assert_eq!(&pk.polynomials()[..2], &plain.internal_map()[..2]);
        assert!(pk.polynomials()[2..].iter().all(Polynomial::is_zero));

        // with the original affine maps, A1^{-1}(G_pub) has constant U rows
        let hooked = SecretKey::from_parts(params, sk.qmap().to_vec(), zero_u, sk.a1().clone(), sk.a2().clone()).unwrap();
        let pk = hooked.public_key();
        let back = apply_affine_to_system(&sk.a1().inverse(), pk.polynomials()).unwrap();
        assert!(back[2..].iter().all(|p| p.degree().unwrap_or(0) == 0));
    }

    #[test]
    fn rejects_structurally_broken_keys() {
        let params = PestoParams::toy();
        let f = params.field();
        let (sk, _) = keygen(params, 4).unwrap();
        let mut u = sk.u().to_vec();
        // y2*y3 sits in the oil block
        let mut e = vec![0u16; 6];
        e[3] = 1;
        e[4] = 1;
        u[0].add_term(Monomial::new(e), 1);
        let err = SecretKey::from_parts(params, sk.qmap().to_vec(), u, sk.a1().clone(), sk.a2().clone());
        assert!(matches!(err, Err(SchemeError::InvalidKey(_))));

        let linear_q = vec![Polynomial::var(f, 4, 0); 2];
        let err = SecretKey::from_parts(params, linear_q, sk.u().to_vec(), sk.a1().clone(), sk.a2().clone());
        assert!(matches!(err, Err(SchemeError::InvalidKey(_))));
    }

    #[test]
    fn inversion_roundtrip() {
        let mut ok = 0;
        for seed in 0..100 {
            let (sk, pk) = keygen(PestoParams::toy(), 1000 + seed).unwrap();
            let z0 = pk.field().random_vector(6, &mut ChaCha8Rng::seed_from_u64(seed));
            let w = public_eval(&pk, &z0).unwrap();
            if let Ok(z) = secret_invert(&sk, &w, seed, DEFAULT_RETRIES) {
                assert_eq!(public_eval(&pk, &z).unwrap(), w);
                ok += 1;
            }
        }
        assert!(ok >= 99, "{ok} of 100 inversions succeeded");
    }

    #[test]
    fn inversion_reports_unreachable_targets() {
        // m > n: most targets have no preimage
        let params = PestoParams::new(3, 5, 2, 1, 3).unwrap();
        let (sk, pk) = keygen(params, 8).unwrap();
        let mut image = std::collections::HashSet::new();
        for i in 0..27u32 {
            image.insert(public_eval(&pk, &[i / 9, (i / 3) % 3, i % 3]).unwrap());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = loop {
            let w: Vec<u32> = (0..5).map(|_| rng.gen_range(0..3)).collect();
            if !image.contains(&w) {
                break w;
            }
        };
        assert!(matches!(
            secret_invert(&sk, &w, 0, DEFAULT_RETRIES),
            Err(SchemeError::NotFound { attempts: 64 })
        ));
    }

    #[test]
    fn thousand_seed_property_run() {
        for seed in 0..1000u64 {
            let (sk, pk) = keygen(PestoParams::toy(), seed).unwrap();
            assert!(pk.polynomials().iter().all(|p| p.degree().unwrap_or(0) <= 4));
            let z0 = pk.field().random_vector(6, &mut ChaCha8Rng::seed_from_u64(seed ^ 0xabc));
            let w = public_eval(&pk, &z0).unwrap();
            match secret_invert(&sk, &w, seed, DEFAULT_RETRIES) {
                Ok(z) => assert_eq!(public_eval(&pk, &z).unwrap(), w),
                Err(e) => panic!("seed {seed}: {e}"),
            }
        }
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(load_fixture("nope"), Err(SchemeError::Fixture { .. })));
        let bad = r#"{"secret_key": {}, "ipt": [], "opt": []}"#;
        assert!(parse_fixture("bad", bad).is_err());
    }
}
