use proptest::prelude::*;
use reeblock_core::gf3field::{poly, FieldSpec};
use reeblock_core::reegroup::{ClassPartition, Normaliser};

fn field(k: u32) -> FieldSpec {
    FieldSpec::new(k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mul_agrees_with_polynomial_reduction(k in 1u32..=3, a in 0u32..2187, b in 0u32..2187) {
        let f = field(k);
        let (a, b) = (f.from_code(a % f.order()).unwrap(), f.from_code(b % f.order()).unwrap());
        let prod = poly::rem(&poly::mul(&f.coeffs(a), &f.coeffs(b)), f.modulus());
        prop_assert_eq!(f.coeffs(f.mul(a, b)), poly::trim(prod.clone()).into_iter().chain(std::iter::repeat(0)).take(f.degree() as usize).collect::<Vec<_>>());
    }

    #[test]
    fn twist_squares_to_frobenius(k in 1u32..=3, a in 0u32..2187) {
        // θ = 3^k, so θ∘θ∘(x ↦ x³) = x ↦ x^q = id
        let f = field(k);
        let a = f.from_code(a % f.order()).unwrap();
        let back = f.pow(f.theta(f.theta(a)), 3);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn group_axioms(t1 in 0u32..27, u1 in 0u32..27, v1 in 0u32..27, w1 in 1u32..27,
                    t2 in 0u32..27, u2 in 0u32..27, v2 in 0u32..27, w2 in 1u32..27,
                    t3 in 0u32..27, u3 in 0u32..27, v3 in 0u32..27, w3 in 1u32..27) {
        let f = field(1);
        let g = Normaliser::new(&f);
        let e = |t, u, v, w| g.element(f.from_code(t).unwrap(), f.from_code(u).unwrap(),
                                       f.from_code(v).unwrap(), f.from_code(w).unwrap()).unwrap();
        let (a, b, c) = (e(t1, u1, v1, w1), e(t2, u2, v2, w2), e(t3, u3, v3, w3));
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.decode(g.encode(a)), a);
        // order divides |N|
        prop_assert_eq!(g.order() % g.element_order(a), 0);
    }
}

#[test]
fn modulus_is_least_irreducible_in_code_order() {
    for k in 1..=2 {
        let f = field(k);
        let n = f.degree() as usize;
        let code = |p: &[u8]| p.iter().rev().fold(0u64, |acc, &c| acc * 3 + c as u64);
        let target = code(f.modulus());
        // every monic polynomial of degree n with a smaller code is reducible
        for c in 0..3u64.pow(n as u32) {
            let mut p: Vec<u8> = (0..n).map(|i| (c / 3u64.pow(i as u32) % 3) as u8).collect();
            p.push(1);
            if code(&p) < target {
                assert!(!poly::is_irreducible(&p), "{p:?}");
            }
        }
    }
}

#[test]
fn class_count_and_sizes_k1() {
    let f = field(1);
    let p = ClassPartition::enumerate(&f, false).unwrap();
    assert_eq!(p.class_count(), 34);
    let total: u64 = p.classes().iter().map(|c| c.size).sum();
    assert_eq!(total, 27u64.pow(3) * 26);
    for c in p.classes() {
        assert_eq!(c.size * c.centralizer_order, p.group().order());
    }
}
