//! Group-level properties that back the benchmarking protocol: orders,
//! 2-design certificates, subset chain, and closure/homomorphism checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rb422_core::clifford::CliffordElement;
use rb422_core::gates;
use rb422_core::group::GroupCatalog;

fn realizable() -> GroupCatalog {
    GroupCatalog::generate(gates::code_gate_set(), 1_000).unwrap()
}

fn real_clifford() -> GroupCatalog {
    GroupCatalog::generate(gates::real_clifford_generators(), 2_000).unwrap()
}

fn full_clifford() -> GroupCatalog {
    GroupCatalog::generate(gates::bare_generators(), 12_000).unwrap()
}

#[test]
fn group_orders() {
    assert_eq!(realizable().order(), 576);
    assert_eq!(real_clifford().order(), 1_152);
    assert_eq!(full_clifford().order(), 11_520);
}

#[test]
fn subset_chain() {
    let r = realizable();
    let cr = real_clifford();
    let c = full_clifford();
    assert!(r.is_subset_of(&cr));
    assert!(cr.is_subset_of(&c));
    assert!(!cr.is_subset_of(&r));
}

#[test]
fn frame_potentials() {
    // Orthogonal 2-design certificate for the realizable group.
    let p_r = realizable().frame_potential().unwrap();
    assert!((p_r - 3.0).abs() < 1e-9, "P(R) = {p_r}");
    // The full Clifford group is a unitary 2-design.
    let p_c = full_clifford().frame_potential().unwrap();
    assert!((p_c - 2.0).abs() < 1e-9, "P(C) = {p_c}");
}

#[test]
fn mean_word_lengths() {
    let mean_r = realizable().mean_word_length();
    assert!(mean_r > 4.0 && mean_r < 5.0, "realizable mean = {mean_r}");
    let mean_c = full_clifford().mean_word_length();
    assert!(mean_c > 7.0 && mean_c < 8.0, "clifford mean = {mean_c}");
    println!("mean word lengths: realizable {mean_r:.4}, clifford {mean_c:.4}");
}

#[test]
fn closure_under_composition_exhaustive() {
    let r = realizable();
    for a in 0..r.order() as u32 {
        for b in (0..r.order() as u32).step_by(7) {
            let _ = r.compose_ids(a, b);
        }
    }
}

#[test]
fn inverses_close_over_catalog() {
    let r = realizable();
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    for _ in 0..100 {
        let id = rng.gen_range(0..r.order() as u32);
        let g = r.element(id);
        let prod = g.compose(&g.inverse()).unwrap();
        assert_eq!(prod, CliffordElement::identity(2));
    }
}

#[test]
fn unitary_representation_is_homomorphism() {
    // to_unitary(a * b) = to_unitary(a) to_unitary(b) up to global phase.
    let r = realizable();
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    for _ in 0..1_000 {
        let a = r.element(rng.gen_range(0..r.order() as u32));
        let b = r.element(rng.gen_range(0..r.order() as u32));
        let ab = a.compose(b).unwrap();
        let dense = a.to_unitary().unwrap().mul(&b.to_unitary().unwrap());
        assert!(ab.to_unitary().unwrap().approx_eq_up_to_phase(&dense, 1e-10));
    }
}

#[test]
fn minimal_words_reproduce_elements() {
    let r = realizable();
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    for _ in 0..200 {
        let id = rng.gen_range(0..r.order() as u32);
        assert_eq!(&r.compose_word(r.word(id)), r.element(id));
    }
}
