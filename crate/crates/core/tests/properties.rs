use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pesto_lab::gf::FieldMatrix;
use pesto_lab::groebner::{
    extract_quadratic_subspace, mutant_elimination, quadratic_subspace_of, reduce_with_known_quadrics,
};
use pesto_lab::hole::{collect_samples, hole_attack};
use pesto_lab::mpoly::{MonomialBasis, Polynomial, TermOrder};
use pesto_lab::oracle::{brute_force_solutions, max_degree, solution_set_equal};
use pesto_lab::scheme::{keygen, public_eval};
use pesto_lab::{PestoParams, PublicKey};

fn random_target(pk: &PublicKey, seed: u64) -> Vec<u32> {
    let p = pk.params();
    let z = p.field().random_vector(p.n, &mut ChaCha8Rng::seed_from_u64(seed));
    public_eval(pk, &z).unwrap()
}

fn rank(polys: &[Polynomial], n: usize) -> usize {
    let basis = MonomialBasis::up_to(n, 4, TermOrder::Grevlex);
    let rows: Vec<Vec<u32>> = polys.iter().map(|p| basis.row_of(p).unwrap()).collect();
    FieldMatrix::from_rows_with_cols(polys[0].field(), basis.len(), &rows).unwrap().rank()
}

fn contains(big: &[Polynomial], small: &[Polynomial]) -> bool {
    let mut both = big.to_vec();
    both.extend_from_slice(small);
    rank(&both, big[0].nvars()) == rank(big, big[0].nvars())
}

#[test]
fn both_groebner_pipelines_agree_on_random_keys() {
    for seed in 0..20 {
        let (_, pk) = keygen(PestoParams::toy(), seed).unwrap();
        let c = random_target(&pk, seed);
        let full = mutant_elimination(&pk, &c).unwrap();
        let two = reduce_with_known_quadrics(&pk, &c).unwrap();
        assert!(!full.is_structural_failure() && !two.is_structural_failure(), "seed {seed}");
        let f = pk.field();
        let a = brute_force_solutions(&full.quadratics, f, 6).unwrap();
        let b = brute_force_solutions(&two.quadratics, f, 6).unwrap();
        assert!(solution_set_equal(&a, &b).unwrap(), "seed {seed}");
        assert!(contains(&full.quadratics, &two.quadratics), "seed {seed}");
        // the quadratic subspace of the shifted span embeds into the output
        let shifted: Vec<Polynomial> = pk
            .polynomials()
            .iter()
            .zip(&c)
            .map(|(g, &ci)| g.sub(&Polynomial::constant(f, 6, ci)).unwrap())
            .collect();
        let q = quadratic_subspace_of(&shifted, TermOrder::Grevlex).unwrap();
        assert!(q.len() >= 2);
        assert!(contains(&two.quadratics, &q), "seed {seed}");
    }
}

#[test]
fn groebner_output_is_deterministic() {
    let (_, pk) = keygen(PestoParams::new(7, 6, 2, 2, 3).unwrap(), 3).unwrap();
    let c = random_target(&pk, 1);
    let a = mutant_elimination(&pk, &c).unwrap();
    let b = mutant_elimination(&pk, &c).unwrap();
    assert_eq!(a.quadratics, b.quadratics);
    assert_eq!(a.passes, b.passes);
}

#[test]
fn already_quadratic_keys_pass_through() {
    let params = PestoParams::toy();
    let f = params.field();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let system: Vec<Polynomial> = (0..5).map(|_| Polynomial::random(f, 6, 2, &mut rng)).collect();
    let pk = PublicKey::from_system(params, system.clone()).unwrap();
    let c = vec![0; 5];
    let sub = extract_quadratic_subspace(&pk);
    assert_eq!(sub.len(), rank(&system, 6));
    let two = reduce_with_known_quadrics(&pk, &c).unwrap();
    assert_eq!(rank(&two.quadratics, 6), rank(&system, 6));
    assert!(contains(&two.quadratics, &system));
}

#[test]
fn random_quartics_leave_residual_rows() {
    let params = PestoParams::toy();
    let f = params.field();
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let system: Vec<Polynomial> = (0..5).map(|_| Polynomial::random(f, 6, 4, &mut rng)).collect();
        let pk = PublicKey::from_system(params, system).unwrap();
        let c = random_target(&pk, seed);
        let red = mutant_elimination(&pk, &c).unwrap();
        assert!(red.is_structural_failure(), "seed {seed}");
        assert!(red.residual.iter().all(|p| p.degree().unwrap() >= 3));
        assert!(hole_attack(&pk, &c, None, seed).unwrap().is_structural_failure());
    }
}

#[test]
fn relation_space_bounds_on_random_keys() {
    let params = PestoParams::toy();
    for seed in 0..50 {
        let (_, pk) = keygen(params, 200 + seed).unwrap();
        let c = random_target(&pk, seed);
        let red = hole_attack(&pk, &c, None, seed).unwrap();
        assert!(red.relations.dim() >= params.m, "seed {seed}");
        assert!(red.short_relations.len() >= params.t, "seed {seed}");
        assert!(max_degree(&red.system).unwrap() <= 2);
    }
}

#[test]
fn recovered_relations_vanish_on_fresh_pairs() {
    for seed in 0..5 {
        let (_, pk) = keygen(PestoParams::new(9, 7, 3, 2, 3).unwrap(), seed).unwrap();
        let red = hole_attack(&pk, &random_target(&pk, seed), None, seed).unwrap();
        let fresh = collect_samples(&pk, 200, 10_000 + seed).unwrap();
        assert!(fresh.iter().all(|s| red.relations.vanishes_on(s)), "seed {seed}");
    }
}

#[test]
fn sample_order_does_not_depend_on_thread_count() {
    let (_, pk) = keygen(PestoParams::toy(), 9).unwrap();
    let parallel = collect_samples(&pk, 64, 4).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| collect_samples(&pk, 64, 4).unwrap());
    assert_eq!(parallel, serial);
}
