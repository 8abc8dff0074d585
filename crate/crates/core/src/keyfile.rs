//! JSON key files.
//!
//! Secret keys: `{params, qmap, U, A1: {matrix, translation}, A2: {...}}` with
//! `qmap` over `y1..y(n-t)` and `U` over `x1..xt, y1..y(n-t)`.
//! Public keys: `{params, gpub}` with `gpub` over `z1..zn`.
//! Polynomial systems (attack output): a `# q=<q> n=<n>` header, then one
//! polynomial over `z1..zn` per line; other `#` lines are comments.
//! Polynomials are stored in the canonical text form, so writing the same key
//! twice gives byte-identical files.

use serde::{Deserialize, Serialize};

use crate::gf::{FieldMatrix, PrimeField};
use crate::mpoly::{AffineMap, Polynomial, VarNames};
use crate::scheme::{PestoParams, PublicKey, SchemeError, SecretKey};

#[derive(Debug, Serialize, Deserialize)]
struct AffineJson {
    matrix: Vec<Vec<u32>>,
    translation: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SecretKeyJson {
    params: PestoParams,
    qmap: Vec<String>,
    #[serde(rename = "U")]
    u: Vec<String>,
    #[serde(rename = "A1")]
    a1: AffineJson,
    #[serde(rename = "A2")]
    a2: AffineJson,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PublicKeyJson {
    params: PestoParams,
    gpub: Vec<String>,
}

fn affine_to_json(a: &AffineMap) -> AffineJson {
    AffineJson {
        matrix: a.linear().row_vecs(),
        translation: a.translation().to_vec(),
    }
}

fn affine_from_json(params: &PestoParams, a: &AffineJson, label: &str) -> Result<AffineMap, SchemeError> {
    let field = params.field();
    if a.matrix.iter().flatten().chain(&a.translation).any(|&v| v >= params.q) {
        return Err(SchemeError::InvalidKey(format!("{label} has entries outside [0, {})", params.q)));
    }
    let linear = FieldMatrix::from_rows(field, &a.matrix)?;
    AffineMap::new(linear, a.translation.clone())
        .map_err(|e| SchemeError::InvalidKey(format!("{label}: {e}")))
}

fn parse_all(texts: &[String], params: &PestoParams, names: &VarNames) -> Result<Vec<Polynomial>, SchemeError> {
    texts
        .iter()
        .map(|t| Ok(Polynomial::parse(t, params.field(), names)?))
        .collect()
}

pub fn secret_key_to_json(sk: &SecretKey) -> String {
    let p = sk.params();
    let ynames = VarNames::indexed("y", p.n - p.t);
    let names = VarNames::scheme(p.n, p.t);
    let doc = SecretKeyJson {
        params: *p,
        qmap: sk.qmap().iter().map(|q| q.render(&ynames)).collect(),
        u: sk.u().iter().map(|u| u.render(&names)).collect(),
        a1: affine_to_json(sk.a1()),
        a2: affine_to_json(sk.a2()),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn secret_key_from_json(text: &str) -> Result<SecretKey, SchemeError> {
    let doc: SecretKeyJson = serde_json::from_str(text)?;
    let p = doc.params;
    p.validate()?;
    let qmap = parse_all(&doc.qmap, &p, &VarNames::indexed("y", p.n - p.t))?;
    let u = parse_all(&doc.u, &p, &VarNames::scheme(p.n, p.t))?;
    let a1 = affine_from_json(&p, &doc.a1, "A1")?;
    let a2 = affine_from_json(&p, &doc.a2, "A2")?;
    SecretKey::from_parts(p, qmap, u, a1, a2)
}

pub fn public_key_to_json(pk: &PublicKey) -> String {
    let p = pk.params();
    let names = VarNames::inputs(p.n);
    let doc = PublicKeyJson {
        params: *p,
        gpub: pk.polynomials().iter().map(|g| g.render(&names)).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn public_key_from_json(text: &str) -> Result<PublicKey, SchemeError> {
    let doc: PublicKeyJson = serde_json::from_str(text)?;
    doc.params.validate()?;
    let gpub = parse_all(&doc.gpub, &doc.params, &VarNames::inputs(doc.params.n))?;
    PublicKey::new(doc.params, gpub)
}

/// Checks that `pk` is exactly the public key assembled from `sk`.
pub fn check_consistency(sk: &SecretKey, pk: &PublicKey) -> Result<(), SchemeError> {
    if sk.public_key() != *pk {
        return Err(SchemeError::InvalidKey(
            "public key does not match the one assembled from the secret key".into(),
        ));
    }
    Ok(())
}

/// A polynomial system together with its ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFile {
    pub field: PrimeField,
    pub nvars: usize,
    pub polynomials: Vec<Polynomial>,
}

pub fn system_to_text(field: PrimeField, nvars: usize, system: &[Polynomial]) -> String {
    let names = VarNames::inputs(nvars);
    let mut out = format!("# q={} n={}\n", field.modulus(), nvars);
    for p in system {
        out.push_str(&p.render(&names));
        out.push('\n');
    }
    out
}

pub fn system_from_text(text: &str) -> Result<SystemFile, SchemeError> {
    let bad = |msg: String| SchemeError::InvalidKey(format!("system file: {msg}"));
    let mut ring = None;
    let mut polynomials = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if ring.is_none() {
                let mut q = None;
                let mut n = None;
                for kv in comment.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("q", v)) => q = v.parse::<u32>().ok(),
                        Some(("n", v)) => n = v.parse::<usize>().ok(),
                        _ => {}
                    }
                }
                if let (Some(q), Some(n)) = (q, n) {
                    ring = Some((PrimeField::new(q)?, n));
                }
            }
            continue;
        }
        let (field, n) = ring.ok_or_else(|| bad("missing `# q=<q> n=<n>` header".into()))?;
        let p = Polynomial::parse(line, field, &VarNames::inputs(n))
            .map_err(|e| bad(format!("line {}: {e}", i + 1)))?;
        polynomials.push(p);
    }
    let (field, nvars) = ring.ok_or_else(|| bad("missing `# q=<q> n=<n>` header".into()))?;
    Ok(SystemFile {
        field,
        nvars,
        polynomials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::keygen;

    #[test]
    fn roundtrip_and_byte_stability() {
        let (sk, pk) = keygen(PestoParams::new(7, 5, 2, 2, 5).unwrap(), 77).unwrap();
        let sk_text = secret_key_to_json(&sk);
        let pk_text = public_key_to_json(&pk);
        let sk2 = secret_key_from_json(&sk_text).unwrap();
        let pk2 = public_key_from_json(&pk_text).unwrap();
        assert_eq!(sk2, sk);
        assert_eq!(pk2, pk);
        assert_eq!(secret_key_to_json(&sk2), sk_text);
        assert_eq!(public_key_to_json(&pk2), pk_text);
        check_consistency(&sk2, &pk2).unwrap();
    }

    #[test]
    fn detects_mismatch_and_corruption() {
        let (sk, _) = keygen(PestoParams::toy(), 1).unwrap();
        let (_, other) = keygen(PestoParams::toy(), 2).unwrap();
        assert!(check_consistency(&sk, &other).is_err());

        let text = secret_key_to_json(&sk).replacen("\"A1\"", "\"B1\"", 1);
        assert!(secret_key_from_json(&text).is_err());
        let singular = r#"{"params":{"n":1,"m":1,"t":1,"s":1,"q":3},"gpub":["z1"]}"#;
        // s > n - t
        assert!(public_key_from_json(singular).is_err());
    }

    #[test]
    fn system_text_roundtrip() {
        let (_, pk) = keygen(PestoParams::toy(), 3).unwrap();
        let f = pk.field();
        let text = system_to_text(f, 6, &pk.polynomials()[..2]);
        assert!(text.starts_with("# q=3 n=6\n"));
        let with_comments = format!("# produced by a test\n{text}\n# trailing\n");
        let parsed = system_from_text(&with_comments).unwrap();
        assert_eq!(parsed.field, f);
        assert_eq!(parsed.nvars, 6);
        assert_eq!(parsed.polynomials, pk.polynomials()[..2].to_vec());
        let empty = system_from_text("# q=5 n=2\n").unwrap();
        assert!(empty.polynomials.is_empty());
        assert!(system_from_text("z1 + 1\n").is_err());
        assert!(system_from_text("# q=3 n=2\nz3\n").is_err());
        assert!(system_from_text("# q=4 n=2\n").is_err());
    }
}
