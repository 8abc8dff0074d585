//! Line-oriented `key=value` attack logs. They carry no timings, so equal
//! inputs give byte-identical transcripts.

use std::fmt::{self, Display};

use crate::groebner::GroebnerReduction;
use crate::hole::HoleReduction;
use crate::oracle::max_degree;
use crate::scheme::PestoParams;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<(String, String)>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

fn header(t: &mut Transcript, method: &str, params: &PestoParams) {
    t.push("method", method);
    t.push("n", params.n);
    t.push("m", params.m);
    t.push("q", params.q);
}

fn degree_of(system: &[crate::mpoly::Polynomial]) -> String {
    max_degree(system).map_or_else(|_| "none".to_string(), |d| d.to_string())
}

pub fn groebner_transcript(params: &PestoParams, red: &GroebnerReduction) -> Transcript {
    let mut t = Transcript::new();
    header(&mut t, "groebner", params);
    t.push("matrix_cols", red.columns);
    t.push("passes", red.passes.len());
    for p in &red.passes {
        let k = p.pass;
        t.push(format!("pass{k}.rows"), p.rows);
        t.push(format!("pass{k}.rank"), p.rank);
        t.push(format!("pass{k}.new_low_degree"), p.new_low_degree);
        t.push(format!("pass{k}.appended"), p.appended);
    }
    t.push("final_rank", red.final_rank);
    t.push("quadratics", red.quadratics.len());
    t.push("residual_rows", red.residual.len());
    t.push("max_degree", degree_of(&red.system()));
    t.push(
        "status",
        if red.is_structural_failure() { "structural_failure" } else { "ok" },
    );
    t
}

pub fn hole_transcript(params: &PestoParams, red: &HoleReduction) -> Transcript {
    let mut t = Transcript::new();
    header(&mut t, "hole", params);
    let (rows, cols) = red.relations.matrix_shape();
    t.push("samples", red.relations.sample_count());
    t.push("matrix_rows", rows);
    t.push("matrix_cols", cols);
    t.push("relation_dim", red.relations.dim());
    t.push("short_relations", red.short_relations.len());
    t.push("output_polynomials", red.system.len());
    t.push("max_degree", degree_of(&red.system));
    if let Some(w) = &red.relations.warning {
        t.push("warning", w);
    }
    t.push(
        "status",
        if red.is_structural_failure() { "structural_failure" } else { "ok" },
    );
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::mutant_elimination;
    use crate::hole::hole_attack;
    use crate::scheme::load_fixture;

    #[test]
    fn render_and_lookup() {
        let mut t = Transcript::new();
        t.push("a", 1);
        t.push("b", "x y");
        assert_eq!(t.to_string(), "a=1\nb=x y\n");
        assert_eq!(t.get("b"), Some("x y"));
        assert_eq!(t.get("c"), None);
        assert_eq!(Transcript::new().to_string(), "");
    }

    #[test]
    fn toy_transcripts() {
        let fx = load_fixture("toy").unwrap();
        let params = *fx.public_key.params();
        let h = hole_attack(&fx.public_key, &fx.opt, None, 2).unwrap();
        let th = hole_transcript(&params, &h);
        assert_eq!(th.get("matrix_rows"), Some("98"));
        assert_eq!(th.get("matrix_cols"), Some("78"));
        assert_eq!(th.get("max_degree"), Some("2"));
        assert_eq!(th.get("status"), Some("ok"));
        assert_eq!(th, hole_transcript(&params, &hole_attack(&fx.public_key, &fx.opt, None, 2).unwrap()));

        let g = mutant_elimination(&fx.public_key, &fx.opt).unwrap();
        let tg = groebner_transcript(&params, &g);
        assert_eq!(tg.get("matrix_cols"), Some("210"));
        assert_eq!(tg.get("residual_rows"), Some("0"));
        assert!(tg.get("pass1.rows").is_some());
    }
}
