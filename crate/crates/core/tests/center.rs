use reeblock_core::center::{CenterAlgebra, CenterElement, StructureMod3};
use reeblock_core::constants;
use reeblock_core::gf3field::FieldSpec;
use reeblock_core::gtable::{GConfig, GData, GEngine, ProductExpectations};
use reeblock_core::ntable::NCharTable;
use reeblock_core::reegroup::NLabel;
use reeblock_core::verify;

fn table(k: u32, eps: i8) -> NCharTable {
    NCharTable::build(&FieldSpec::new(k).unwrap(), eps).unwrap()
}

fn engine(k: u32, config: GConfig) -> GEngine {
    GEngine::new(GData::build(k, config).unwrap()).unwrap()
}

#[test]
fn normaliser_residues_do_not_depend_on_sign() {
    for k in 1..=2 {
        let a = constants::burnside_residues(&table(k, 1)).unwrap();
        let b = constants::burnside_residues(&table(k, -1)).unwrap();
        assert!(a == b, "k={k}");
    }
}

#[test]
fn normaliser_loewy_length_two() {
    for k in 1..=2 {
        for eps in [1, -1] {
            let t = table(k, eps);
            let r = verify::normaliser_loewy(&t).unwrap();
            assert!(r.certified, "{r:?}");
            assert_eq!(r.loewy_length, 2);
            assert_eq!(r.radical_dims, vec![t.q() as usize + 6, 0]);
            assert_eq!(r.center_dim, t.q() as usize + 7);
        }
    }
}

#[test]
fn normaliser_x_generator_squares_to_zero() {
    let t = table(1, -1);
    let (alg, _) = verify::normaliser_center(&t).unwrap();
    let g = alg
        .class_sum("1")
        .unwrap()
        .add(&alg.class_sum("X").unwrap());
    assert!(alg.multiply_center(&g, &g).is_zero());
}

#[test]
fn normaliser_loewy_invariant_under_yt_swap() {
    let t = table(1, -1);
    let q = t.q();
    let (alg, gens) = verify::normaliser_center(&t).unwrap();
    let n = alg.dim();
    let (a, b) = (NLabel::YT.index(q), NLabel::YTinv.index(q));
    let perm = |i: usize| {
        if i == a {
            b
        } else if i == b {
            a
        } else {
            i
        }
    };
    let mut swapped = vec![0u8; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for (z, &c) in alg.structure().class_product(x, y).iter().enumerate() {
                swapped[(perm(x) * n + perm(y)) * n + perm(z)] = c;
            }
        }
    }
    let labels = alg.labels().to_vec();
    let alg2 = CenterAlgebra::new(StructureMod3::new(labels, swapped).unwrap(), None).unwrap();
    let gens2: Vec<CenterElement> = gens
        .iter()
        .map(|g| CenterElement::from_coeffs((0..n).map(|i| g.coeffs[perm(i)]).collect()))
        .collect();
    let r = alg2.radical_filtration(&gens2, 1).unwrap();
    assert!(r.certified);
    assert_eq!(r.loewy_length, 2);
}

#[test]
fn ree_loewy_length_three() {
    for k in 1..=2 {
        let eng = engine(k, GConfig::default());
        let r = verify::ree_loewy(&eng).unwrap();
        let q = 3usize.pow(2 * k + 1);
        assert!(r.radical.certified, "{:?}", r.radical.ideal_violations);
        assert_eq!(r.radical.loewy_length, 3);
        assert_eq!(r.radical.radical_dims, vec![q + 6, 1, 0]);
        assert_eq!(r.radical.center_dim, q + 7);
        assert!(r.square_is_beta && r.square_avoids_x_t_s);
    }
}

#[test]
fn ree_x_generator_squares_into_beta_line() {
    let eng = engine(1, GConfig::default());
    let (alg, _) = verify::ree_center(&eng).unwrap();
    let g = alg
        .class_sum("1")
        .unwrap()
        .add(&alg.class_sum("X").unwrap());
    let sq = alg.multiply_center(&g, &g);
    let beta = CenterElement::from_coeffs(ProductExpectations::new(&eng).unwrap().beta());
    assert!(!sq.is_zero());
    assert!(sq == beta || sq == beta.scale(2));
    // Ĉ(Y)e0 is killed by the whole radical
    let y = alg.project(&alg.class_sum("Y").unwrap());
    assert!(alg.multiply_center(&g, &y).is_zero());
}

#[test]
fn ree_loewy_invariant_under_relabelling() {
    for swap_yt in [false, true] {
        for conjugate_constants in [false, true] {
            let eng = engine(
                1,
                GConfig {
                    swap_yt,
                    conjugate_constants,
                },
            );
            let r = verify::ree_loewy(&eng).unwrap();
            assert_eq!(r.radical.loewy_length, 3);
            assert!(r.square_is_beta);
        }
    }
}
