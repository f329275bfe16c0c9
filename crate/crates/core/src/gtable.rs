//! Class and character data of the small Ree group `²G₂(q)` and a mod-3
//! evaluator for products of class sums.
//!
//! The group is never constructed. Six class families and six character
//! families are indexed symbolically; the character values of a family
//! row on its own family columns are unknown and may only be consumed
//! through the member sums recorded in [`SumRule`]s. Structure constants
//! are evaluated in three tiers:
//!
//! 1. **exact**: at most one of `x, y, z` is a family class, so every
//!    family row enters through one known member sum;
//! 2. **valuation**: two or more family classes, but the prefactor
//!    `|G|/(|C(x)||C(y)|)` is divisible by 3, so the family rows (whose
//!    degrees are prime to 3 and whose member sums are integers) vanish
//!    mod 3;
//! 3. **deferred**: the remaining cells, all of the form `a(X, F, F')`,
//!    closed by the column sum `Σ_x a(x,y,z) = |C(y)|`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::{mod3, val3, QSqrtM3};
use crate::error::{Error, Result};

/// Column kinds, in character-table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GKind {
    One,
    R,
    S,
    V,
    W,
    X,
    Y,
    T,
    Tinv,
    YT,
    YTinv,
    JT,
    JTinv,
    JR,
    JS,
    J,
}

impl GKind {
    pub const ALL: [GKind; 16] = [
        GKind::One,
        GKind::R,
        GKind::S,
        GKind::V,
        GKind::W,
        GKind::X,
        GKind::Y,
        GKind::T,
        GKind::Tinv,
        GKind::YT,
        GKind::YTinv,
        GKind::JT,
        GKind::JTinv,
        GKind::JR,
        GKind::JS,
        GKind::J,
    ];

    pub const FAMILIES: [GKind; 6] = [GKind::R, GKind::S, GKind::V, GKind::W, GKind::JR, GKind::JS];

    pub fn pos(self) -> usize {
        self as usize
    }

    pub fn is_family(self) -> bool {
        Self::FAMILIES.contains(&self)
    }

    /// Kind of the inverse class; family classes are real.
    pub fn inverse(self) -> GKind {
        match self {
            GKind::T => GKind::Tinv,
            GKind::Tinv => GKind::T,
            GKind::YT => GKind::YTinv,
            GKind::YTinv => GKind::YT,
            GKind::JT => GKind::JTinv,
            GKind::JTinv => GKind::JT,
            k => k,
        }
    }

    /// Display name with a generic family index, e.g. `R^a`.
    pub fn generic_name(self) -> &'static str {
        match self {
            GKind::One => "1",
            GKind::R => "R^a",
            GKind::S => "S^a",
            GKind::V => "V_i",
            GKind::W => "W_i",
            GKind::X => "X",
            GKind::Y => "Y",
            GKind::T => "T",
            GKind::Tinv => "T^-1",
            GKind::YT => "YT",
            GKind::YTinv => "YT^-1",
            GKind::JT => "JT",
            GKind::JTinv => "JT^-1",
            GKind::JR => "JR^a",
            GKind::JS => "JS^a",
            GKind::J => "J",
        }
    }
}

impl Serialize for GKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.generic_name())
    }
}

impl fmt::Display for GKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.generic_name())
    }
}

impl FromStr for GKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bare = s.trim_end_matches("^a").trim_end_matches("_i");
        GKind::ALL
            .iter()
            .copied()
            .find(|k| {
                k.generic_name() == s
                    || k.generic_name()
                        .trim_end_matches("^a")
                        .trim_end_matches("_i")
                        == bare
            })
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// A single conjugacy class: a kind plus a 1-based member index for
/// families (0 for singleton kinds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GClass {
    pub kind: GKind,
    pub member: u32,
}

impl GClass {
    pub fn single(kind: GKind) -> Self {
        GClass { kind, member: 0 }
    }
}

impl fmt::Display for GClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_family() {
            let base = self.kind.generic_name();
            let stem = &base[..base.len() - 2];
            let sep = &base[base.len() - 2..base.len() - 1];
            write!(f, "{stem}{sep}{}", self.member)
        } else {
            write!(f, "{}", self.kind)
        }
    }
}

/// Variants of the data that must not change any verified result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct GConfig {
    /// Exchange the names `YT` and `YT^-1`.
    pub swap_yt: bool,
    /// Replace the irrational table constants by their complex conjugates.
    pub conjugate_constants: bool,
}

/// One character row. Family rows carry `None` on their own family columns.
#[derive(Debug, Clone)]
pub struct GChar {
    pub name: String,
    pub degree: BigInt,
    /// Number of characters described by the row.
    pub count: u64,
    pub is_family: bool,
    pub values: Vec<Option<QSqrtM3>>,
}

/// `Σ_members θ(F) = value` for a family row `θ` at a family column `F`.
#[derive(Debug, Clone, Serialize)]
pub struct SumRule {
    pub row: String,
    pub column: GKind,
    pub value: i64,
}

#[derive(Debug, Clone)]
pub struct GData {
    k: u32,
    q: BigInt,
    m: BigInt,
    order: BigInt,
    config: GConfig,
    counts: [u64; 16],
    centralizers: Vec<BigInt>,
    rows: Vec<GChar>,
    sum_rules: Vec<SumRule>,
    basis: Vec<GClass>,
    offsets: [usize; 17],
}

impl GData {
    /// Builds the data and checks the build-time invariants: class count
    /// `q + 8`, class equation, character count, `Σ θ(1)² = |G|` and the
    /// family-count congruences.
    pub fn build(k: u32, config: GConfig) -> Result<Self> {
        if k == 0 {
            return Err(Error::FieldTooSmall { k: 0 });
        }
        let q = BigInt::from(3u64).pow(2 * k + 1);
        let m = BigInt::from(3u64).pow(k);
        let qi = q
            .to_i64()
            .ok_or_else(|| Error::ResourceLimit("q too large".into()))?;
        let mi = m.to_i64().unwrap();
        let q3: BigInt = &q * &q * &q;
        let order: BigInt = &q3 * (&q3 + BigInt::from(1)) * (&q - BigInt::from(1));

        let cnt = |num: i64, den: i64| (num / den) as u64;
        let mut counts = [1u64; 16];
        counts[GKind::R.pos()] = cnt(qi - 3, 4);
        counts[GKind::S.pos()] = cnt(qi - 3, 24);
        counts[GKind::V.pos()] = cnt(qi - 3 * mi, 6);
        counts[GKind::W.pos()] = cnt(qi + 3 * mi, 6);
        counts[GKind::JR.pos()] = cnt(qi - 3, 4);
        counts[GKind::JS.pos()] = cnt(qi - 3, 8);

        let b = |n: i64| BigInt::from(n);
        let centralizers: Vec<BigInt> = GKind::ALL
            .iter()
            .map(|kind| match kind {
                GKind::One => order.clone(),
                GKind::R | GKind::JR => b(qi - 1),
                GKind::S | GKind::JS => b(qi + 1),
                GKind::V => b(qi + 1 - 3 * mi),
                GKind::W => b(qi + 1 + 3 * mi),
                GKind::X => &q * &q * &q,
                GKind::Y | GKind::YT | GKind::YTinv => b(3 * qi),
                GKind::T | GKind::Tinv => b(2) * &q * &q,
                GKind::JT | GKind::JTinv => b(2 * qi),
                GKind::J => b((qi + 1) * qi * (qi - 1)),
            })
            .collect();

        let int = QSqrtM3::from_int;
        let fr = |a: i64, d: i64| QSqrtM3::from_ints(a, 0, d);
        let cj = |x: QSqrtM3| {
            if config.conjugate_constants {
                x.conj()
            } else {
                x
            }
        };
        let al = cj(QSqrtM3::from_ints(-mi, mi * mi, 2));
        let be = cj(QSqrtM3::from_ints(-mi, -mi, 2));
        let ga = cj(QSqrtM3::from_ints(1, -mi, 2));
        let de = cj(QSqrtM3::from_ints(-mi, mi * mi, 1));
        let ep = cj(QSqrtM3::from_ints(mi, mi, 2));
        let (alb, beb, gab, deb, epb) = (al.conj(), be.conj(), ga.conj(), de.conj(), ep.conj());
        let u: Option<QSqrtM3> = None;
        let s = |v: QSqrtM3| Some(v);

        // column order: 1 R S V W X Y T T^-1 YT YT^-1 JT JT^-1 JR JS J
        let deg5 = (qi - 1) * mi * (qi + 1 + 3 * mi) / 2;
        let deg6 = (qi - 1) * mi * (qi + 1 - 3 * mi) / 2;
        let row = |name: &str, degree: BigInt, count: u64, vals: Vec<Option<QSqrtM3>>| GChar {
            name: name.into(),
            is_family: vals.iter().any(Option::is_none),
            degree,
            count,
            values: vals,
        };
        let all = |v: [QSqrtM3; 16]| v.into_iter().map(Some).collect::<Vec<_>>();
        let z = QSqrtM3::zero;
        let mut rows = vec![
            row("xi1", b(1), 1, all(std::array::from_fn(|_| int(1)))),
            row(
                "xi2",
                b(qi * qi - qi + 1),
                1,
                all([
                    int(qi * qi - qi + 1),
                    int(1),
                    int(3),
                    z(),
                    z(),
                    int(1 - qi),
                    int(1),
                    int(1),
                    int(1),
                    int(1),
                    int(1),
                    int(-1),
                    int(-1),
                    int(-1),
                    int(-1),
                    int(-1),
                ]),
            ),
            row(
                "xi3",
                q3.clone(),
                1,
                all([
                    QSqrtM3::from_bigint(q3.clone()),
                    int(1),
                    int(-1),
                    int(-1),
                    int(-1),
                    z(),
                    z(),
                    z(),
                    z(),
                    z(),
                    z(),
                    z(),
                    z(),
                    int(1),
                    int(-1),
                    int(qi),
                ]),
            ),
            row(
                "xi4",
                b(qi * (qi * qi - qi + 1)),
                1,
                all([
                    int(qi * (qi * qi - qi + 1)),
                    int(1),
                    int(-3),
                    z(),
                    z(),
                    int(qi),
                    z(),
                    z(),
                    z(),
                    z(),
                    z(),
                    z(),
                    z(),
                    int(-1),
                    int(1),
                    int(-qi),
                ]),
            ),
        ];
        // ξ₅..ξ₈: the degree of ξ₆, ξ₈ and their value on X follow from
        // orthogonality, see `xi6_x_value_is_forced` in the tests
        let xi58 = |name: &str, deg: i64, sgn: i64, a: &QSqrtM3, bb: &QSqrtM3, g: &QSqrtM3| {
            let (ab, bbb, gb) = (a.conj(), bb.conj(), g.conj());
            let x_val = if sgn > 0 {
                fr(-(qi + mi), 2)
            } else {
                fr(qi - mi, 2)
            };
            row(
                name,
                b(deg),
                1,
                all([
                    int(deg),
                    z(),
                    int(sgn),
                    if sgn > 0 { int(-1) } else { z() },
                    if sgn > 0 { z() } else { int(1) },
                    x_val,
                    int(mi),
                    a.clone(),
                    ab,
                    bb.clone(),
                    bbb,
                    if sgn > 0 { g.clone() } else { -g },
                    if sgn > 0 { gb } else { -gb },
                    z(),
                    int(sgn),
                    fr(-sgn * (qi - 1), 2),
                ]),
            )
        };
        rows.push(xi58("xi5", deg5, 1, &al, &be, &ga));
        rows.push(xi58("xi6", deg6, -1, &al, &be, &ga));
        rows.push(xi58("xi7", deg5, 1, &alb, &beb, &gab));
        rows.push(xi58("xi8", deg6, -1, &alb, &beb, &gab));
        let xi910 = |name: &str, d: &QSqrtM3, e: &QSqrtM3| {
            row(
                name,
                b(mi * (qi * qi - 1)),
                1,
                all([
                    int(mi * (qi * qi - 1)),
                    z(),
                    z(),
                    int(-1),
                    int(1),
                    int(-mi),
                    int(-mi),
                    d.clone(),
                    d.conj(),
                    e.clone(),
                    e.conj(),
                    z(),
                    z(),
                    z(),
                    z(),
                    z(),
                ]),
            )
        };
        rows.push(xi910("xi9", &de, &ep));
        rows.push(xi910("xi10", &deb, &epb));

        let eta_r_deg: BigInt = &q3 + BigInt::from(1);
        let eta_t_deg = b((qi - 1) * (qi * qi - qi + 1));
        let o = |v: i64| s(int(v));
        rows.push(row(
            "eta_r",
            eta_r_deg.clone(),
            counts[GKind::R.pos()],
            vec![
                s(QSqrtM3::from_bigint(eta_r_deg.clone())),
                u.clone(),
                o(0),
                o(0),
                o(0),
                o(1),
                o(1),
                o(1),
                o(1),
                o(1),
                o(1),
                o(1),
                o(1),
                u.clone(),
                o(0),
                o(qi + 1),
            ],
        ));
        rows.push(row(
            "eta_r'",
            eta_r_deg.clone(),
            counts[GKind::R.pos()],
            vec![
                s(QSqrtM3::from_bigint(eta_r_deg)),
                u.clone(),
                o(0),
                o(0),
                o(0),
                o(1),
                o(1),
                o(1),
                o(1),
                o(1),
                o(1),
                o(-1),
                o(-1),
                u.clone(),
                o(0),
                o(-(qi + 1)),
            ],
        ));
        rows.push(row(
            "eta_t",
            eta_t_deg.clone(),
            counts[GKind::S.pos()],
            vec![
                s(QSqrtM3::from_bigint(eta_t_deg.clone())),
                o(0),
                u.clone(),
                o(0),
                o(0),
                o(2 * qi - 1),
                o(-1),
                o(-1),
                o(-1),
                o(-1),
                o(-1),
                o(-3),
                o(-3),
                o(0),
                u.clone(),
                o(3 * (qi - 1)),
            ],
        ));
        rows.push(row(
            "eta_t'",
            eta_t_deg.clone(),
            counts[GKind::JS.pos()],
            vec![
                s(QSqrtM3::from_bigint(eta_t_deg)),
                o(0),
                u.clone(),
                o(0),
                o(0),
                o(2 * qi - 1),
                o(-1),
                o(-1),
                o(-1),
                o(-1),
                o(-1),
                o(1),
                o(1),
                o(0),
                u.clone(),
                o(-(qi - 1)),
            ],
        ));
        let em_deg = (qi * qi - 1) * (qi + 1 + 3 * mi);
        rows.push(row(
            "eta-",
            b(em_deg),
            counts[GKind::V.pos()],
            vec![
                o(em_deg),
                o(0),
                o(0),
                u.clone(),
                o(0),
                o(-qi - 1 - 3 * mi),
                o(-1),
                o(-3 * mi - 1),
                o(-3 * mi - 1),
                o(-1),
                o(-1),
                o(0),
                o(0),
                o(0),
                o(0),
                o(0),
            ],
        ));
        // degree (q²-1)(q+1-3m), as in the degree list
        let ep_deg = (qi * qi - 1) * (qi + 1 - 3 * mi);
        rows.push(row(
            "eta+",
            b(ep_deg),
            counts[GKind::W.pos()],
            vec![
                o(ep_deg),
                o(0),
                o(0),
                o(0),
                u,
                o(-qi - 1 + 3 * mi),
                o(-1),
                o(3 * mi - 1),
                o(3 * mi - 1),
                o(-1),
                o(-1),
                o(0),
                o(0),
                o(0),
                o(0),
                o(0),
            ],
        ));

        if config.swap_yt {
            let (a, bb) = (GKind::YT.pos(), GKind::YTinv.pos());
            for r in rows.iter_mut() {
                r.values.swap(a, bb);
            }
        }

        let rule = |row: &str, column: GKind, value: i64| SumRule {
            row: row.into(),
            column,
            value,
        };
        let sum_rules = vec![
            rule("eta_r", GKind::R, -1),
            rule("eta_r'", GKind::R, -1),
            rule("eta_t", GKind::S, 1),
            rule("eta_t'", GKind::S, 3),
            rule("eta-", GKind::V, 1),
            rule("eta+", GKind::W, 1),
            rule("eta_r", GKind::JR, -1),
            rule("eta_r'", GKind::JR, 1),
            rule("eta_t", GKind::JS, 1),
            rule("eta_t'", GKind::JS, -1),
        ];

        let mut basis = Vec::new();
        let mut offsets = [0usize; 17];
        for (i, kind) in GKind::ALL.iter().enumerate() {
            offsets[i] = basis.len();
            if kind.is_family() {
                basis.extend((1..=counts[i] as u32).map(|member| GClass {
                    kind: *kind,
                    member,
                }));
            } else {
                basis.push(GClass::single(*kind));
            }
        }
        offsets[16] = basis.len();

        let data = GData {
            k,
            q,
            m,
            order,
            config,
            counts,
            centralizers,
            rows,
            sum_rules,
            basis,
            offsets,
        };
        data.check_invariants()?;
        Ok(data)
    }

    fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Certification(msg));
        let q = self.q.to_u64().unwrap();
        if self.basis.len() as u64 != q + 8 {
            return fail(format!("class count {} != q + 8", self.basis.len()));
        }
        if self.class_equation() != self.order {
            return fail("class sizes do not sum to |G|".into());
        }
        if self.character_count() != q + 8 {
            return fail(format!(
                "character count {} != q + 8",
                self.character_count()
            ));
        }
        if self.sum_of_squared_degrees() != self.order {
            return fail("sum of squared degrees differs from |G|".into());
        }
        let residues: Vec<u64> = GKind::FAMILIES.iter().map(|f| self.count(*f) % 3).collect();
        if residues != [0, 1, 0, 0, 0, 0] {
            return fail(format!("family counts mod 3 are {residues:?}"));
        }
        for r in &self.rows {
            for (kind, v) in GKind::ALL.iter().zip(&r.values) {
                if v.is_none() && !kind.is_family() {
                    return fail(format!("{} has an unknown value on {kind}", r.name));
                }
            }
        }
        Ok(())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    /// `|G| = q³(q³+1)(q-1)`.
    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn config(&self) -> GConfig {
        self.config
    }

    /// Number of classes of the kind.
    pub fn count(&self, kind: GKind) -> u64 {
        self.counts[kind.pos()]
    }

    pub fn family_counts(&self) -> Vec<(GKind, u64)> {
        GKind::FAMILIES
            .iter()
            .map(|f| (*f, self.count(*f)))
            .collect()
    }

    pub fn centralizer(&self, kind: GKind) -> &BigInt {
        &self.centralizers[kind.pos()]
    }

    pub fn class_size(&self, kind: GKind) -> BigInt {
        &self.order / self.centralizer(kind)
    }

    /// 3-adic valuation of the centralizer order.
    pub fn defect(&self, kind: GKind) -> i64 {
        val3(&BigRational::from_integer(self.centralizer(kind).clone())).unwrap()
    }

    pub fn rows(&self) -> &[GChar] {
        &self.rows
    }

    pub fn row(&self, name: &str) -> Option<&GChar> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn sum_rules(&self) -> &[SumRule] {
        &self.sum_rules
    }

    /// Expanded class basis (`q + 8` classes).
    pub fn basis(&self) -> &[GClass] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Position of a class in [`Self::basis`].
    pub fn index(&self, c: GClass) -> usize {
        let p = c.kind.pos();
        if c.kind.is_family() {
            self.offsets[p] + c.member as usize - 1
        } else {
            self.offsets[p]
        }
    }

    /// Range of basis positions belonging to a kind.
    pub fn range(&self, kind: GKind) -> std::ops::Range<usize> {
        self.offsets[kind.pos()]..self.offsets[kind.pos() + 1]
    }

    /// A known value; reading an unknown family entry is an error.
    pub fn value<'r>(&self, row: &'r GChar, kind: GKind) -> Result<&'r QSqrtM3> {
        row.values[kind.pos()]
            .as_ref()
            .ok_or_else(|| Error::UnknownValue(format!("{} on {kind}", row.name)))
    }

    /// `Σ_members θ(F)` for one class `F` of the column kind.
    pub fn member_sum(&self, row: &GChar, kind: GKind) -> Result<QSqrtM3> {
        match &row.values[kind.pos()] {
            Some(v) => Ok(v.scale(&BigRational::from_integer(row.count.into()))),
            None => self
                .sum_rules
                .iter()
                .find(|r| r.row == row.name && r.column == kind)
                .map(|r| QSqrtM3::from_int(r.value))
                .ok_or_else(|| {
                    Error::UnknownValue(format!("no sum rule for {} on {kind}", row.name))
                }),
        }
    }

    pub fn class_equation(&self) -> BigInt {
        GKind::ALL
            .iter()
            .map(|k| self.class_size(*k) * BigInt::from(self.count(*k)))
            .sum()
    }

    pub fn character_count(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn sum_of_squared_degrees(&self) -> BigInt {
        self.rows
            .iter()
            .map(|r| &r.degree * &r.degree * BigInt::from(r.count))
            .sum()
    }

    /// Column orthogonality among singleton columns, and between each
    /// family column and each singleton column through the member sums.
    pub fn verify_orthogonality(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let singles: Vec<GKind> = GKind::ALL
            .iter()
            .copied()
            .filter(|k| !k.is_family())
            .collect();
        for &a in &singles {
            for &b in &singles {
                let mut s = QSqrtM3::zero();
                for r in &self.rows {
                    let term = r.values[a.pos()].as_ref().unwrap()
                        * &r.values[b.pos()].as_ref().unwrap().conj();
                    s = &s + &term.scale(&BigRational::from_integer(r.count.into()));
                }
                let expected = if a == b {
                    QSqrtM3::from_bigint(self.centralizer(a).clone())
                } else {
                    QSqrtM3::zero()
                };
                if s != expected {
                    bad.push(format!("columns {a},{b}: {s}, expected {expected}"));
                }
            }
        }
        for &f in &GKind::FAMILIES {
            for &b in &singles {
                let mut s = QSqrtM3::zero();
                for r in &self.rows {
                    let ms = match self.member_sum(r, f) {
                        Ok(v) => v,
                        Err(e) => {
                            bad.push(e.to_string());
                            continue;
                        }
                    };
                    s = &s + &(&ms * &r.values[b.pos()].as_ref().unwrap().conj());
                }
                if !s.is_zero() {
                    bad.push(format!("columns {f},{b}: {s}, expected 0"));
                }
            }
        }
        bad
    }
}

/// How a structure constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    Exact,
    Valuation,
    Deferred,
}

/// A structure constant modulo 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub residue: u8,
    pub tier: Tier,
    /// 3-adic valuation of `|G|/(|C(x)||C(y)|)` for valuation-tier cells.
    pub prefactor_valuation: Option<i64>,
}

/// The mod-3 product engine over the expanded class basis.
#[derive(Debug, Clone)]
pub struct GEngine {
    data: GData,
    /// Kind-level residues for the exact and valuation tiers.
    kind_cells: HashMap<(GKind, GKind, GKind), Cell>,
}

impl GEngine {
    pub fn new(data: GData) -> Result<Self> {
        let triples: Vec<(GKind, GKind, GKind)> = GKind::ALL
            .iter()
            .flat_map(|&x| {
                GKind::ALL
                    .iter()
                    .flat_map(move |&y| GKind::ALL.iter().map(move |&z| (x, y, z)))
            })
            .collect();
        let cells: Vec<((GKind, GKind, GKind), Option<Cell>)> = triples
            .par_iter()
            .map(|&(x, y, z)| Ok(((x, y, z), kind_cell(&data, x, y, z)?)))
            .collect::<Result<_>>()?;
        let kind_cells = cells
            .into_iter()
            .filter_map(|(key, c)| c.map(|c| (key, c)))
            .collect();
        Ok(GEngine { data, kind_cells })
    }

    pub fn data(&self) -> &GData {
        &self.data
    }

    /// Tier of a kind triple.
    pub fn tier(&self, x: GKind, y: GKind, z: GKind) -> Tier {
        tier_of(&self.data, x, y, z)
    }

    /// Exact `a(x,y,z)` for a kind triple in the exact tier.
    pub fn exact_constant(&self, x: GKind, y: GKind, z: GKind) -> Result<BigInt> {
        if tier_of(&self.data, x, y, z) != Tier::Exact {
            return Err(Error::UnresolvableCell(format!(
                "a({x},{y},{z}) is not in the exact tier"
            )));
        }
        exact_value(&self.data, x, y, z)
    }

    /// `a(x,y,z) mod 3` for concrete classes.
    pub fn coefficient(&self, x: GClass, y: GClass, z: GClass) -> Result<Cell> {
        let one = GClass::single(GKind::One);
        if x == one || y == one || z == one {
            let v = if z == one {
                if x.kind.inverse() == y.kind && x.member == y.member {
                    residue(&self.data.class_size(x.kind))
                } else {
                    0
                }
            } else {
                u8::from((x == one && y == z) || (y == one && x == z))
            };
            return Ok(Cell {
                residue: v,
                tier: Tier::Exact,
                prefactor_valuation: None,
            });
        }
        if let Some(c) = self.kind_cells.get(&(x.kind, y.kind, z.kind)) {
            return Ok(*c);
        }
        // deferred: a(X, F, F') or a(F, X, F')
        let (xx, yy) = if x.kind == GKind::X { (x, y) } else { (y, x) };
        if xx.kind != GKind::X {
            return Err(Error::UnresolvableCell(format!("a({x},{y},{z})")));
        }
        self.complete(yy, z)
    }

    /// `a(X,y,z) ≡ |C(y)| - Σ_{x ≠ X} a(x,y,z) (mod 3)`, with the identity
    /// row contributing `δ_{y,z}`.
    fn complete(&self, y: GClass, z: GClass) -> Result<Cell> {
        let d = &self.data;
        let mut s = residue(&d.class_size(y.kind)) as i64;
        if y == z {
            s -= 1;
        }
        for &kind in GKind::ALL
            .iter()
            .filter(|&&k| k != GKind::X && k != GKind::One)
        {
            let c = self
                .kind_cells
                .get(&(kind, y.kind, z.kind))
                .ok_or_else(|| {
                    Error::UnresolvableCell(format!(
                        "completing a(X,{y},{z}) needs the deferred cell a({kind},{y},{z})"
                    ))
                })?;
            s -= c.residue as i64 * d.count(kind) as i64;
        }
        Ok(Cell {
            residue: s.rem_euclid(3) as u8,
            tier: Tier::Deferred,
            prefactor_valuation: None,
        })
    }

    /// `Ĉ(x)·Ĉ(y)` mod 3 as a coefficient vector over the basis.
    pub fn product_mod3(&self, x: GClass, y: GClass) -> Result<Vec<u8>> {
        self.data
            .basis
            .iter()
            .map(|&z| self.coefficient(x, y, z).map(|c| c.residue))
            .collect()
    }

    /// The whole tensor `a(x,y,z) mod 3` over the expanded basis, with the
    /// number of cells resolved by each tier.
    pub fn full_structure(&self) -> Result<(Vec<u8>, HashMap<Tier, u64>)> {
        let b = &self.data.basis;
        let n = b.len();
        let rows: Vec<(Vec<u8>, HashMap<Tier, u64>)> = (0..n * n)
            .into_par_iter()
            .map(|xy| {
                let (x, y) = (b[xy / n], b[xy % n]);
                let mut tally = HashMap::new();
                let mut row = Vec::with_capacity(n);
                for &z in b {
                    let c = self.coefficient(x, y, z)?;
                    *tally.entry(c.tier).or_insert(0) += 1;
                    row.push(c.residue);
                }
                Ok((row, tally))
            })
            .collect::<Result<_>>()?;
        let mut table = Vec::with_capacity(n * n * n);
        let mut tally = HashMap::new();
        for (row, t) in rows {
            table.extend(row);
            for (k, v) in t {
                *tally.entry(k).or_insert(0) += v;
            }
        }
        Ok((table, tally))
    }

    /// `e_ξ₃ mod 3`: coefficient `ξ₃(1)ξ₃(z⁻¹)/|G|` on each class sum.
    pub fn steinberg_idempotent(&self) -> Result<Vec<u8>> {
        let d = &self.data;
        let xi3 = d.row("xi3").expect("xi3 row");
        d.basis
            .iter()
            .map(|c| {
                let v = d
                    .value(xi3, c.kind.inverse())?
                    .rational_part()
                    .expect("xi3 is rational");
                let coef = BigRational::from_integer(xi3.degree.clone()) * v
                    / BigRational::from_integer(d.order.clone());
                mod3(&coef)
            })
            .collect()
    }

    /// For every `(y, z)` with `y ≠ 1`, recompute `Σ_x a(x,y,z)` over the
    /// engine output and compare with `|C(y)| mod 3`.
    pub fn column_sum_consistency(&self) -> Result<Vec<String>> {
        let d = &self.data;
        let mut bad = Vec::new();
        for &y in &d.basis {
            for &z in &d.basis {
                let mut s: i64 = 0;
                for &x in &d.basis {
                    s += if x.kind == GKind::One {
                        i64::from(y == z)
                    } else {
                        self.coefficient(x, y, z)?.residue as i64
                    };
                }
                let expected = residue(&d.class_size(y.kind)) as i64;
                if s.rem_euclid(3) != expected {
                    bad.push(format!(
                        "sum_x a(x,{y},{z}) = {s} mod 3, expected {expected}"
                    ));
                }
            }
        }
        Ok(bad)
    }
}

fn residue(v: &BigInt) -> u8 {
    let r = v % BigInt::from(3);
    (if r.is_negative() { r + 3 } else { r }).to_u8().unwrap()
}

fn prefactor(d: &GData, x: GKind, y: GKind) -> BigRational {
    BigRational::new(d.order.clone(), d.centralizer(x) * d.centralizer(y))
}

fn tier_of(d: &GData, x: GKind, y: GKind, z: GKind) -> Tier {
    let families = [x, y, z].iter().filter(|k| k.is_family()).count();
    if families <= 1 || [x, y, z].contains(&GKind::One) {
        Tier::Exact
    } else if val3(&prefactor(d, x, y)).unwrap() >= 1 {
        Tier::Valuation
    } else {
        Tier::Deferred
    }
}

/// Exact Burnside evaluation when at most one column is a family column.
fn exact_value(d: &GData, x: GKind, y: GKind, z: GKind) -> Result<BigInt> {
    let mut total = QSqrtM3::zero();
    for r in &d.rows {
        let family_col = [x, y, z].iter().position(|k| r.values[k.pos()].is_none());
        let term = match family_col {
            None => {
                let p = &(d.value(r, x)? * d.value(r, y)?) * &d.value(r, z)?.conj();
                p.scale(&BigRational::from_integer(r.count.into()))
            }
            Some(i) => {
                let cols = [x, y, z];
                let mut p = d.member_sum(r, cols[i])?;
                if i == 2 {
                    p = p.conj();
                }
                for (j, &c) in cols.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let v = d.value(r, c)?;
                    p = if j == 2 { &p * &v.conj() } else { &p * v };
                }
                p
            }
        };
        total = &total + &term.div_rational(&BigRational::from_integer(r.degree.clone()))?;
    }
    let v = total.scale(&prefactor(d, x, y));
    match v.to_integer() {
        Some(n) if !n.is_negative() => Ok(n),
        _ => Err(Error::NonIntegral {
            cell: format!("a({x},{y},{z})"),
            value: v.to_string(),
        }),
    }
}

/// Valuation-tier value: the family rows are dropped, which is exact mod 3
/// because their degrees are prime to 3, their member sums are integers
/// and the prefactor is divisible by 3.
fn valuation_value(d: &GData, x: GKind, y: GKind, z: GKind) -> Result<Cell> {
    let pre = prefactor(d, x, y);
    let v = val3(&pre).unwrap();
    let mut total = QSqrtM3::zero();
    for r in d.rows.iter().filter(|r| !r.is_family) {
        let p = &(d.value(r, x)? * d.value(r, y)?) * &d.value(r, z)?.conj();
        total = &total + &p.div_rational(&BigRational::from_integer(r.degree.clone()))?;
    }
    for r in d.rows.iter().filter(|r| r.is_family) {
        if val3(&BigRational::from_integer(r.degree.clone())) != Some(0) {
            return Err(Error::Certification(format!(
                "{} has degree divisible by 3",
                r.name
            )));
        }
    }
    let s = total.scale(&pre);
    let rational = s.rational_part().ok_or_else(|| Error::NonIntegral {
        cell: format!("a({x},{y},{z})"),
        value: s.to_string(),
    })?;
    let residue = mod3(&rational).map_err(|_| Error::NonIntegral {
        cell: format!("a({x},{y},{z})"),
        value: rational.to_string(),
    })?;
    Ok(Cell {
        residue,
        tier: Tier::Valuation,
        prefactor_valuation: Some(v),
    })
}

fn kind_cell(d: &GData, x: GKind, y: GKind, z: GKind) -> Result<Option<Cell>> {
    // identity cells depend on member identity and are resolved per class
    if [x, y, z].contains(&GKind::One) {
        return Ok(None);
    }
    match tier_of(d, x, y, z) {
        Tier::Exact => {
            let v = exact_value(d, x, y, z)?;
            Ok(Some(Cell {
                residue: residue(&v),
                tier: Tier::Exact,
                prefactor_valuation: None,
            }))
        }
        Tier::Valuation => valuation_value(d, x, y, z).map(Some),
        Tier::Deferred => Ok(None),
    }
}

/// Names used for the recurring products of class sums.
#[derive(Debug, Clone, Serialize)]
pub struct LegendEntry {
    pub name: String,
    pub value: Vec<u8>,
}

/// Expected class-sum products, built from named combinations of class sums.
pub struct ProductExpectations<'a> {
    data: &'a GData,
    e: Vec<u8>,
}

impl<'a> ProductExpectations<'a> {
    pub fn new(engine: &'a GEngine) -> Result<Self> {
        Ok(ProductExpectations {
            data: engine.data(),
            e: engine.steinberg_idempotent()?,
        })
    }

    fn unit(&self, c: GClass, coef: u8) -> Vec<u8> {
        let mut v = vec![0u8; self.data.dim()];
        v[self.data.index(c)] = coef % 3;
        v
    }

    fn sum_kind(&self, kind: GKind, coef: u8) -> Vec<u8> {
        let mut v = vec![0u8; self.data.dim()];
        for i in self.data.range(kind) {
            v[i] = coef % 3;
        }
        v
    }

    fn add(a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(x, y)| (x + y) % 3).collect()
    }

    fn sub(a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(x, y)| (x + 3 - y) % 3).collect()
    }

    /// `2ΣR + ΣJR + 2ΣJS`.
    pub fn beta(&self) -> Vec<u8> {
        let v = Self::add(&self.sum_kind(GKind::R, 2), &self.sum_kind(GKind::JR, 1));
        Self::add(&v, &self.sum_kind(GKind::JS, 2))
    }

    /// `2 + Ĉ(X) + ΣR + ΣS + ΣV + ΣW`.
    pub fn alpha(&self) -> Vec<u8> {
        let mut v = self.unit(GClass::single(GKind::One), 2);
        v = Self::add(&v, &self.unit(GClass::single(GKind::X), 1));
        for k in [GKind::R, GKind::S, GKind::V, GKind::W] {
            v = Self::add(&v, &self.sum_kind(k, 1));
        }
        v
    }

    /// Expected `Ĉ(x)·Ĉ(y)` with its name.
    pub fn expected(&self, x: GClass, y: GClass) -> (String, Vec<u8>) {
        use GKind::*;
        let (x, y) = if (x.kind, x.member) <= (y.kind, y.member) {
            (x, y)
        } else {
            (y, x)
        };
        let zero = vec![0u8; self.data.dim()];
        let e = self.e.clone();
        let gamma = |c: GClass| Self::sub(&e, &self.unit(c, 1));
        let gamma_idx = |k: GKind| match k {
            R => 1,
            S => 2,
            V => 3,
            W => 4,
            JR => 5,
            JS => 6,
            _ => 7,
        };
        let delta_idx = |k: GKind| match k {
            Y => 1,
            YT => 2,
            YTinv => 3,
            JT => 4,
            _ => 5,
        };
        if x.kind == One {
            return (format!("C({y})"), self.unit(y, 1));
        }
        let fam_or_j = |k: GKind| k.is_family() || k == J;
        match (x.kind, y.kind) {
            (a, b) if fam_or_j(a) && fam_or_j(b) => ("e_xi3".into(), e),
            (X, X) => ("alpha".into(), self.alpha()),
            (a, X) | (X, a) if fam_or_j(a) => {
                let other = if x.kind == X { y } else { x };
                (format!("gamma_{}", gamma_idx(a)), gamma(other))
            }
            (X, b) | (b, X) if matches!(b, Y | YT | YTinv | JT | JTinv) => {
                let other = if x.kind == X { y } else { x };
                (format!("delta_{}", delta_idx(b)), self.unit(other, 2))
            }
            (X, T) | (T, X) => (
                "mu".into(),
                Self::add(&self.unit(GClass::single(T), 2), &self.beta()),
            ),
            (X, Tinv) | (Tinv, X) => (
                "nu".into(),
                Self::add(&self.unit(GClass::single(Tinv), 2), &self.beta()),
            ),
            (T | Tinv, T | Tinv) => ("beta".into(), self.beta()),
            _ => ("-".into(), zero),
        }
    }
}

/// Renders a coefficient vector, collapsing families with a constant
/// coefficient into `ΣC(F)`.
pub fn render_center(data: &GData, v: &[u8]) -> String {
    let mut terms = Vec::new();
    for kind in GKind::ALL {
        let r = data.range(kind);
        let coeffs = &v[r.clone()];
        let coef_str = |c: u8| {
            if c == 1 {
                String::new()
            } else {
                format!("{c}*")
            }
        };
        if kind.is_family() && coeffs.iter().all(|&c| c == coeffs[0]) {
            if coeffs[0] != 0 {
                terms.push(format!("{}sum C({})", coef_str(coeffs[0]), kind));
            }
            continue;
        }
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let cls = data.basis()[r.start + i];
            if kind == GKind::One {
                terms.push(c.to_string());
            } else {
                terms.push(format!("{}C({cls})", coef_str(c)));
            }
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Representative members used when exporting kind-level products:
/// the first member, and the second member when a kind meets itself.
pub fn representatives(data: &GData, x: GKind, y: GKind) -> (GClass, GClass) {
    let first = |k: GKind| GClass {
        kind: k,
        member: u32::from(k.is_family()),
    };
    let mut b = first(y);
    if x == y && x.is_family() && data.count(x) >= 2 {
        b.member = 2;
    }
    (first(x), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(k: u32) -> GData {
        GData::build(k, GConfig::default()).unwrap()
    }

    #[test]
    fn family_sizes_k1() {
        let d = data(1);
        let counts: Vec<u64> = d.family_counts().iter().map(|(_, c)| *c).collect();
        assert_eq!(counts, vec![6, 1, 3, 6, 6, 3]);
        assert_eq!(d.dim(), 35);
        assert_eq!(data(2).dim(), 251);
    }

    #[test]
    fn squared_degrees_k1() {
        let d = data(1);
        assert_eq!(d.sum_of_squared_degrees(), BigInt::from(10_073_444_472u64));
        assert_eq!(d.order(), &BigInt::from(10_073_444_472u64));
        assert_eq!(d.row("xi5").unwrap().degree, BigInt::from(1443));
    }

    #[test]
    fn orthogonality_with_sum_rules() {
        for k in 1..=2 {
            let bad = data(k).verify_orthogonality();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn xi6_x_value_is_forced() {
        // with X-value (q+m)/2 on the two smaller degree-(q-1)m/2 rows,
        // columns 1 and X are no longer orthogonal
        let mut d = data(1);
        for name in ["xi6", "xi8"] {
            let pos = d.rows.iter().position(|r| r.name == name).unwrap();
            d.rows[pos].values[GKind::X.pos()] = Some(QSqrtM3::from_ints(27 + 3, 0, 2));
        }
        assert!(!d.verify_orthogonality().is_empty());
    }

    #[test]
    fn unknown_values_are_guarded() {
        let d = data(1);
        let eta = d.row("eta_r").unwrap();
        assert!(matches!(
            d.value(eta, GKind::R),
            Err(Error::UnknownValue(_))
        ));
        assert_eq!(d.member_sum(eta, GKind::R).unwrap(), QSqrtM3::from_int(-1));
        assert_eq!(d.member_sum(eta, GKind::S).unwrap(), QSqrtM3::zero());
    }

    #[test]
    fn exact_tier_spot_values_k1() {
        let eng = GEngine::new(data(1)).unwrap();
        let v = |x, y, z| eng.exact_constant(x, y, z).unwrap();
        // 9m^4 + 3m^2, 0, (9m^4 - 3m^2)/2, (9m^4 + 3m^2)/2 with m = 3
        assert_eq!(v(GKind::T, GKind::J, GKind::JT), BigInt::from(756));
        assert_eq!(v(GKind::T, GKind::J, GKind::JTinv), BigInt::from(0));
        assert_eq!(v(GKind::T, GKind::J, GKind::JR), BigInt::from(351));
        assert_eq!(v(GKind::T, GKind::J, GKind::JS), BigInt::from(378));
    }

    #[test]
    fn steinberg_coefficients() {
        let eng = GEngine::new(data(1)).unwrap();
        let e = eng.steinberg_idempotent().unwrap();
        let d = eng.data();
        for (c, &coef) in d.basis().iter().zip(&e) {
            let expected = match c.kind {
                GKind::R | GKind::JR => 2,
                GKind::S | GKind::V | GKind::W | GKind::JS => 1,
                _ => 0,
            };
            assert_eq!(coef, expected, "{c}");
        }
    }

    #[test]
    fn class_display() {
        assert_eq!(
            GClass {
                kind: GKind::R,
                member: 3
            }
            .to_string(),
            "R^3"
        );
        assert_eq!(
            GClass {
                kind: GKind::V,
                member: 2
            }
            .to_string(),
            "V_2"
        );
        assert_eq!(
            GClass {
                kind: GKind::JS,
                member: 1
            }
            .to_string(),
            "JS^1"
        );
        assert_eq!(GClass::single(GKind::Tinv).to_string(), "T^-1");
        assert_eq!("JR^a".parse::<GKind>().unwrap(), GKind::JR);
        assert_eq!("T^-1".parse::<GKind>().unwrap(), GKind::Tinv);
    }
}
