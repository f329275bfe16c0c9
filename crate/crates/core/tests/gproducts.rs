use reeblock_core::gtable::{GConfig, GData, GEngine, GKind, ProductExpectations, Tier};

fn engine(k: u32, config: GConfig) -> GEngine {
    GEngine::new(GData::build(k, config).unwrap()).unwrap()
}

fn check_products(eng: &GEngine) {
    let d = eng.data();
    let exp = ProductExpectations::new(eng).unwrap();
    let mut bad = Vec::new();
    for &x in d.basis() {
        for &y in d.basis() {
            let got = eng.product_mod3(x, y).unwrap();
            let (name, want) = exp.expected(x, y);
            if got != want {
                bad.push(format!("{x}*{y}: expected {name}"));
            }
        }
    }
    assert!(
        bad.is_empty(),
        "{} mismatches, first {:?}",
        bad.len(),
        &bad[..bad.len().min(5)]
    );
}

#[test]
fn class_sum_products_k1() {
    check_products(&engine(1, GConfig::default()));
}

#[test]
fn class_sum_products_k2() {
    check_products(&engine(2, GConfig::default()));
}

#[test]
fn products_stable_under_relabelling() {
    for swap_yt in [false, true] {
        for conjugate_constants in [false, true] {
            check_products(&engine(
                1,
                GConfig {
                    swap_yt,
                    conjugate_constants,
                },
            ));
        }
    }
}

#[test]
fn column_sums_consistent() {
    for k in 1..=2 {
        let bad = engine(k, GConfig::default())
            .column_sum_consistency()
            .unwrap();
        assert!(bad.is_empty(), "{bad:?}");
    }
}

#[test]
fn deferred_cells_have_x_and_two_families() {
    let eng = engine(1, GConfig::default());
    for x in GKind::ALL {
        for y in GKind::ALL {
            for z in GKind::ALL {
                if eng.tier(x, y, z) == Tier::Deferred {
                    assert!(x == GKind::X || y == GKind::X);
                    assert!(z.is_family());
                }
            }
        }
    }
}

#[test]
fn residues_symmetric() {
    // a(x,y,z) = a(y,x,z) and a(x,y,z) = a(x⁻¹,y⁻¹,z⁻¹) on the engine output
    let eng = engine(1, GConfig::default());
    let d = eng.data();
    let inv = |c: reeblock_core::gtable::GClass| reeblock_core::gtable::GClass {
        kind: c.kind.inverse(),
        ..c
    };
    for &x in d.basis() {
        for &y in d.basis() {
            for &z in d.basis() {
                let a = eng.coefficient(x, y, z).unwrap().residue;
                assert_eq!(
                    a,
                    eng.coefficient(y, x, z).unwrap().residue,
                    "a({x},{y},{z})"
                );
                assert_eq!(
                    a,
                    eng.coefficient(inv(x), inv(y), inv(z)).unwrap().residue,
                    "a({x},{y},{z})"
                );
            }
        }
    }
}

#[test]
fn exact_tier_rotation_laws() {
    use num_bigint::BigInt;
    for k in 1..=2 {
        let eng = engine(k, GConfig::default());
        let d = eng.data();
        let exact =
            |x, y, z| (eng.tier(x, y, z) == Tier::Exact).then(|| eng.exact_constant(x, y, z));
        let mut checked = 0;
        for x in GKind::ALL {
            for y in GKind::ALL {
                for z in GKind::ALL {
                    if [x, y, z].contains(&GKind::One) {
                        continue;
                    }
                    let Some(a) = exact(x, y, z) else { continue };
                    let a: BigInt = a.unwrap();
                    if let Some(b) = exact(x.inverse(), z, y) {
                        assert_eq!(
                            &a * d.centralizer(y),
                            b.unwrap() * d.centralizer(z),
                            "a({x},{y},{z})"
                        );
                        checked += 1;
                    }
                    if let Some(b) = exact(z.inverse(), y, x.inverse()) {
                        assert_eq!(
                            &a * d.centralizer(x),
                            b.unwrap() * d.centralizer(z),
                            "a({x},{y},{z})"
                        );
                    }
                }
            }
        }
        assert!(checked > 1000);
    }
}

#[test]
fn exact_tier_column_sums_over_unipotent_rows() {
    // Σ_x a(x,y,z) = |class(y)| for singleton y, z, with family rows
    // summed member by member
    use num_bigint::BigInt;
    let eng = engine(1, GConfig::default());
    let d = eng.data();
    let singles: Vec<GKind> = GKind::ALL
        .iter()
        .copied()
        .filter(|k| !k.is_family() && *k != GKind::One)
        .collect();
    for &y in &singles {
        for &z in &singles {
            let mut s = BigInt::from(u8::from(y == z));
            for x in GKind::ALL.iter().copied().filter(|&k| k != GKind::One) {
                s += eng.exact_constant(x, y, z).unwrap() * BigInt::from(d.count(x));
            }
            assert_eq!(s, d.class_size(y), "y={y} z={z}");
        }
    }
}
