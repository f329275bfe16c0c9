use num_bigint::BigInt;
use reeblock_core::constants::{self, NProductTable};
use reeblock_core::cyclo::QSqrtM3;
use reeblock_core::gf3field::FieldSpec;
use reeblock_core::ntable::{self, NCharTable};
use reeblock_core::reegroup::{ClassPartition, NLabel};
use reeblock_core::Error;

fn table(k: u32, eps: i8) -> NCharTable {
    NCharTable::build(&FieldSpec::new(k).unwrap(), eps).unwrap()
}

fn aligned_k1() -> (ClassPartition, NProductTable, NProductTable) {
    let f = FieldSpec::new(1).unwrap();
    let t = table(1, -1);
    let mut p = ClassPartition::enumerate(&f, false).unwrap();
    let (_, burnside) = ntable::align_labels(&t, &mut p).unwrap();
    let brute = constants::bruteforce_tensor(&p);
    (p, brute, burnside)
}

#[test]
fn orthogonality_both_signs() {
    for k in 1..=2 {
        for eps in [1, -1] {
            let t = table(k, eps);
            let r = t.verify_orthogonality();
            assert!(r.passed, "k={k} eps={eps}: {:?}", r.failures);
            let q = t.q();
            assert_eq!(
                t.sum_of_squared_degrees(),
                BigInt::from(q * q * q * (q - 1))
            );
        }
    }
    assert_eq!(table(1, 1).sum_of_squared_degrees(), BigInt::from(511_758));
}

#[test]
fn positive_sign_gives_negative_counts() {
    let t = table(1, 1);
    let q = t.q();
    let (j, y) = (NLabel::J.index(q), NLabel::Y.index(q));
    assert_eq!(
        constants::burnside_exact(&t, j, j, y),
        QSqrtM3::from_int(-27)
    );
    assert_eq!(
        constants::burnside_exact(&t, y, j, j),
        QSqrtM3::from_int(-234)
    );
    assert!(matches!(
        constants::burnside_tensor(&t),
        Err(Error::NonIntegral { .. })
    ));

    let mut p = ClassPartition::enumerate(&FieldSpec::new(1).unwrap(), false).unwrap();
    assert!(matches!(
        ntable::align_labels(&t, &mut p),
        Err(Error::NoConsistentLabeling)
    ));
}

#[test]
fn negative_sign_matches_enumeration() {
    let (_, brute, burnside) = aligned_k1();
    let (diff, examples) = burnside.compare(&brute);
    assert_eq!(diff, 0, "{examples:?}");
    assert_eq!(brute.dim(), 34);
}

#[test]
fn labeling_is_determined_up_to_conjugation() {
    let f = FieldSpec::new(1).unwrap();
    let mut p = ClassPartition::enumerate(&f, false).unwrap();
    let (rep, _) = ntable::align_labels(&table(1, -1), &mut p).unwrap();
    assert_eq!(rep.passing.len(), 2);
    assert!(rep.ambiguous);
    assert_eq!(rep.chosen, rep.passing[0]);
}

#[test]
fn single_cell_counts_agree_with_tensor() {
    let (p, brute, _) = aligned_k1();
    let labels = brute.labels().to_vec();
    for (i, &x) in labels.iter().enumerate().step_by(5) {
        for &y in labels.iter().skip(i % 3).step_by(4) {
            for &z in labels.iter().step_by(3) {
                assert_eq!(
                    constants::bruteforce_constant(&p, x, y, z),
                    brute.get(x, y, z),
                    "a({x},{y},{z})"
                );
            }
        }
    }
}

#[test]
fn counts_bounded_by_class_sizes() {
    use NLabel::*;
    let (_, brute, _) = aligned_k1();
    let n = brute.dim();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let bound = brute.class_size(x).min(brute.class_size(y));
                assert!(brute.get_idx(x, y, z) <= bound);
            }
        }
    }
    assert_eq!(brute.get(J, J, One), 729);
    assert_eq!(brute.class_size(J.index(27)), 729);
    // so a(T,J,JT) can never reach 756 inside N
    assert_eq!(brute.get(T, J, JT), 0);
    assert_eq!(brute.get(J, T, JTinv), 27);
}

#[test]
fn laws_hold_exhaustively_k1() {
    let (_, brute, burnside) = aligned_k1();
    for t in [&brute, &burnside] {
        for r in constants::verify_symmetries(t) {
            assert!(r.passed(), "{}: {:?}", r.law, r.examples);
        }
        assert!(constants::verify_column_sum(t).passed());
        assert!(constants::verify_defect_divisibility(t).passed());
    }
}

#[test]
fn laws_hold_on_burnside_values_k2() {
    let t = constants::burnside_tensor(&table(2, -1)).unwrap();
    assert_eq!(t.dim(), 250);
    for r in constants::verify_symmetries(&t) {
        assert!(r.passed(), "{}: {:?}", r.law, r.examples);
    }
    assert!(constants::verify_column_sum(&t).passed());
    assert!(constants::verify_defect_divisibility(&t).passed());
}

#[test]
fn enumeration_beyond_k1_is_gated() {
    let f = FieldSpec::new(2).unwrap();
    assert!(matches!(
        ClassPartition::enumerate(&f, false),
        Err(Error::ResourceLimit(_))
    ));
}
