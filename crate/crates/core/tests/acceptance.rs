//! Acceptance suite: one PASS/FAIL line per criterion, each with a pinned
//! wall-clock limit. All comparisons are exact (zero tolerance).
//!
//! One sub-check is known to be unattainable and is listed in
//! `UNATTAINABLE` with the reason; it is still evaluated and printed, and
//! the run fails if it ever starts passing (the list would be stale) or if
//! anything else fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use reeblock_core::constants;
use reeblock_core::gf3field::FieldSpec;
use reeblock_core::gtable::{GConfig, GData, GEngine, GKind};
use reeblock_core::ntable::{self, NCharTable};
use reeblock_core::reegroup::{ClassPartition, NLabel};
use reeblock_core::verify::{self, Config};

/// Sub-checks that cannot pass, with the reason.
const UNATTAINABLE: &[(u32, &str, &str)] = &[(
    3,
    "a(T,J,JT) = 756",
    "in N every a(x,y,z) is at most |class(J)| = q^2 = 729 < 756; the value 756 = 9m^4 + 3m^2 \
     is the structure constant of G, checked under criterion 6",
)];

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    checks: Vec<(String, bool)>,
    elapsed: Duration,
}

impl Criterion {
    fn run(
        id: u32,
        title: &'static str,
        limit_secs: u64,
        f: impl FnOnce(&mut Vec<(String, bool)>),
    ) -> Self {
        let start = Instant::now();
        let mut checks = Vec::new();
        f(&mut checks);
        Criterion {
            id,
            title,
            limit: Duration::from_secs(limit_secs),
            checks,
            elapsed: start.elapsed(),
        }
    }

    fn within_limit(&self) -> bool {
        self.elapsed <= self.limit
    }

    fn passed(&self) -> bool {
        self.within_limit() && self.checks.iter().all(|(_, ok)| *ok)
    }

    fn print(&self) {
        println!(
            "criterion {}: {} - {} [{:.1}s of {}s]",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        );
        for (name, ok) in &self.checks {
            let note = UNATTAINABLE
                .iter()
                .find(|(id, n, _)| *id == self.id && n == name)
                .map(|(_, _, why)| format!(" (unattainable: {why})"))
                .unwrap_or_default();
            if name.starts_with("note: ") {
                println!("    {name}");
            } else {
                println!("    [{}] {name}{note}", if *ok { "ok" } else { "FAIL" });
            }
        }
    }
}

fn check(out: &mut Vec<(String, bool)>, name: impl Into<String>, ok: bool) {
    out.push((name.into(), ok));
}

/// Informational line; never fails.
fn note(out: &mut Vec<(String, bool)>, text: String) {
    out.push((format!("note: {text}"), true));
}

/// Class census of N at q = 27: (size, element order, centralizer, defect) ↦ count.
fn census_q27() -> HashMap<(u64, u64, u64, u32), usize> {
    let mut m = HashMap::new();
    let mut add = |size, order, cent, defect, count| {
        *m.entry((size, order, cent, defect)).or_insert(0) += count;
    };
    add(1, 1, 511_758, 9, 1);
    add(26, 3, 19_683, 9, 1);
    add(351, 3, 1_458, 6, 2);
    add(6_318, 9, 81, 4, 3);
    add(729, 2, 702, 3, 1);
    add(9_477, 6, 54, 3, 2);
    add(19_683, 13, 26, 0, 12);
    add(19_683, 26, 26, 0, 12);
    m
}

fn field(k: u32) -> FieldSpec {
    FieldSpec::new(k).unwrap()
}

fn table(k: u32, eps: i8) -> NCharTable {
    NCharTable::build(&field(k), eps).unwrap()
}

fn engine(k: u32, config: GConfig) -> GEngine {
    GEngine::new(GData::build(k, config).unwrap()).unwrap()
}

fn main() -> ExitCode {
    let mut results = Vec::new();

    results.push(Criterion::run(1, "class census of N at k = 1", 60, |c| {
        match ClassPartition::enumerate(&field(1), false) {
            Ok(p) => {
                check(
                    c,
                    format!("{} classes (expected 34)", p.class_count()),
                    p.class_count() == 34,
                );
                check(
                    c,
                    "census multiset matches the tabulated census",
                    p.census() == census_q27(),
                );
            }
            Err(e) => check(c, format!("enumeration: {e}"), false),
        }
    }));

    results.push(Criterion::run(
        2,
        "character table of N: orthogonality for both signs, k = 1 and 2",
        1810,
        |c| {
            for k in 1..=2u32 {
                let start = Instant::now();
                for eps in [1i8, -1] {
                    let t = table(k, eps);
                    let r = t.verify_orthogonality();
                    check(c, format!("k={k} eps={eps:+}: orthogonality"), r.passed);
                    let q = BigInt::from(t.q());
                    let want = if k == 1 {
                        BigInt::from(511_758)
                    } else {
                        &q * &q * &q * (&q - 1)
                    };
                    check(
                        c,
                        format!("k={k} eps={eps:+}: sum of squared degrees = {want}"),
                        t.sum_of_squared_degrees() == want,
                    );
                }
                let limit = if k == 1 { 10 } else { 1800 };
                check(
                    c,
                    format!("k={k} within {limit}s"),
                    start.elapsed() <= Duration::from_secs(limit),
                );
            }
        },
    ));

    let mut g1: Option<GEngine> = None;
    let mut brute_k1 = None;
    results.push(Criterion::run(3, "oracle equivalence at k = 1", 300, |c| {
        let t = table(1, -1);
        let mut p = ClassPartition::enumerate(&field(1), false).unwrap();
        match ntable::align_labels(&t, &mut p) {
            Ok((rep, burnside)) => {
                let brute = constants::bruteforce_tensor(&p);
                let (diff, _) = burnside.compare(&brute);
                let triples = brute.dim().pow(3);
                check(
                    c,
                    format!("Burnside = enumeration on all {triples} triples ({diff} mismatches)"),
                    diff == 0 && triples == 39_304,
                );
                check(
                    c,
                    "all values are non-negative integers",
                    constants::burnside_tensor(&t).is_ok(),
                );
                check(
                    c,
                    format!(
                        "labeling fixed up to conjugation ({} candidates pass)",
                        rep.passing.len()
                    ),
                    !rep.passing.is_empty(),
                );
                check(
                    c,
                    format!(
                        "a(J,J,1) = 729 (got {})",
                        brute.get(NLabel::J, NLabel::J, NLabel::One)
                    ),
                    brute.get(NLabel::J, NLabel::J, NLabel::One) == 729,
                );
                let tjjt = burnside.get(NLabel::T, NLabel::J, NLabel::JT);
                note(c, format!("a_N(T,J,JT) = {tjjt}"));
                check(c, "a(T,J,JT) = 756", tjjt == 756);
                brute_k1 = Some(brute);
            }
            Err(e) => check(c, format!("alignment: {e}"), false),
        }
        let eng = engine(1, GConfig::default());
        note(
            c,
            format!(
                "a_G(T,J,JT) = {}",
                eng.exact_constant(GKind::T, GKind::J, GKind::JT).unwrap()
            ),
        );
        g1 = Some(eng);
    }));

    results.push(Criterion::run(
        4,
        "law suites: symmetries, column sums, defect divisibility",
        600,
        |c| {
            let run = |c: &mut Vec<(String, bool)>, name: &str, t: &constants::NProductTable| {
                let mut reports = constants::verify_symmetries(t);
                reports.push(constants::verify_column_sum(t));
                reports.push(constants::verify_defect_divisibility(t));
                for r in reports {
                    check(
                        c,
                        format!(
                            "{name}: {} ({} checked, {} violations)",
                            r.law, r.checked, r.violations
                        ),
                        r.passed(),
                    );
                }
            };
            if let Some(b) = &brute_k1 {
                run(c, "k=1 enumeration", b);
            } else {
                check(c, "k=1 enumeration tensor available", false);
            }
            run(
                c,
                "k=1 Burnside",
                &constants::burnside_tensor(&table(1, -1)).unwrap(),
            );
            run(
                c,
                "k=2 Burnside",
                &constants::burnside_tensor(&table(2, -1)).unwrap(),
            );
        },
    ));

    results.push(Criterion::run(
        5,
        "TI congruence a_G = a_N mod 3 on 3-elements, k = 1",
        300,
        |c| match (&brute_k1, &g1) {
            (Some(n), Some(g)) => {
                let r = verify::verify_ti_congruence(n, g, false, false).unwrap();
                check(
                    c,
                    format!("{} triples, {} violations", r.triples, r.violations_mod3),
                    r.violations_mod3 == 0 && r.triples == 216,
                );
            }
            _ => check(c, "inputs available", false),
        },
    ));

    results.push(Criterion::run(
        6,
        "class-sum products of G and the idempotent e_xi3, k = 1 and 2",
        60,
        |c| {
            for k in 1..=2 {
                let eng = engine(k, GConfig::default());
                let (ok, detail) = verify::verify_g_products(&eng).unwrap();
                check(
                    c,
                    format!(
                        "k={k}: every product matches ({} pairs)",
                        detail["class_pairs"]
                    ),
                    ok,
                );
                let (ok, _) = verify::ree_spot_values(&eng).unwrap();
                check(
                    c,
                    format!("k={k}: a(T,J,JT), a(T,J,JT^-1), a(T,J,JR), a(T,J,JS) exact values"),
                    ok,
                );
                let r = verify::verify_ree(&Config::new(k)).unwrap();
                let idem = r
                    .checks
                    .iter()
                    .find(|x| x.name == "steinberg-idempotent")
                    .unwrap()
                    .passed;
                check(c, format!("k={k}: e_xi3 is idempotent"), idem);
            }
        },
    ));

    results.push(Criterion::run(
        7,
        "Loewy lengths LL(Z(kN)) = 2, LL(Z(kGe0)) = 3",
        600,
        |c| {
            for k in 1..=2 {
                let n = verify::normaliser_loewy(&table(k, -1)).unwrap();
                check(
                    c,
                    format!("k={k}: LL(N) = {} (certified radical)", n.loewy_length),
                    n.loewy_length == 2 && n.certified,
                );
                let g = verify::ree_loewy(&engine(k, GConfig::default())).unwrap();
                check(
                    c,
                    format!(
                        "k={k}: LL(G e0) = {} (certified radical)",
                        g.radical.loewy_length
                    ),
                    g.radical.loewy_length == 3 && g.radical.certified,
                );
                check(
                    c,
                    format!("k={k}: dim J^2 = {}", g.radical.radical_dims[1]),
                    g.radical.radical_dims[1] == 1,
                );
                check(
                    c,
                    format!(
                        "k={k}: J^2 spanned by {}",
                        g.square_generator.clone().unwrap_or_default()
                    ),
                    g.square_is_beta,
                );
                let r = verify::verify_ree(&Config::new(k)).unwrap();
                check(
                    c,
                    format!("k={k}: verdict \"{}\"", r.verdict),
                    r.isomorphic == Some(false),
                );
            }
        },
    ));

    results.push(Criterion::run(8, "criteria 6-7 under both signs and the YT relabeling; deferred cells resolved", 600, |c| {
        let needed = ["class-sum-products", "steinberg-idempotent", "deferred-completion", "loewy-length-g", "loewy-length-n"];
        for k in 1..=2 {
            for eps in [1i8, -1] {
                for swap_yt in [false, true] {
                    let cfg = Config { k, epsilon: eps, allow_big: false };
                    let r = verify::verify_ree_with(&cfg, GConfig { swap_yt, conjugate_constants: false }).unwrap();
                    let ok = needed.iter().all(|n| r.checks.iter().any(|x| x.name == *n && x.passed));
                    check(c, format!("k={k} eps={eps:+} swap_yt={swap_yt}: LL {:?}/{:?}, products and idempotent", r.loewy_g, r.loewy_n), ok && r.loewy_g == Some(3) && r.loewy_n == Some(2));
                }
            }
            let a = constants::burnside_residues(&table(k, 1)).unwrap();
            let b = constants::burnside_residues(&table(k, -1)).unwrap();
            check(c, format!("k={k}: N structure constants agree mod 3 for both signs"), a == b);
            let eng = engine(k, GConfig { swap_yt: false, conjugate_constants: true });
            check(c, format!("k={k}: conjugated constants give the same products"), verify::verify_g_products(&eng).unwrap().0);
            match engine(k, GConfig::default()).full_structure() {
                Ok((_, tally)) => {
                    let d = tally.get(&reeblock_core::gtable::Tier::Deferred).copied().unwrap_or(0);
                    check(c, format!("k={k}: all cells resolved ({d} by completion)"), d > 0);
                }
                Err(e) => check(c, format!("k={k}: {e}"), false),
            }
        }
    }));

    let mut ok = true;
    for r in &results {
        r.print();
        for (name, passed) in &r.checks {
            let listed = UNATTAINABLE
                .iter()
                .any(|(id, n, _)| *id == r.id && n == name);
            if listed && *passed {
                println!(
                    "criterion {}: sub-check \"{name}\" now passes; update the unattainable list",
                    r.id
                );
                ok = false;
            }
            if !listed && !passed {
                ok = false;
            }
        }
        ok &= r.within_limit();
    }
    println!(
        "acceptance: {} of {} criteria pass; {}",
        results.iter().filter(|r| r.passed()).count(),
        results.len(),
        if ok {
            "only the listed unattainable sub-check fails"
        } else {
            "unexpected failures"
        }
    );
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
