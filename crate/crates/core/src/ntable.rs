//! The character table of the Sylow 3-normaliser `N`, its exact
//! orthogonality checks, and the alignment of its column labels with an
//! enumerated class partition.
//!
//! Rows are the linear family `α_0 … α_(q-2)` plus eight singletons
//! `λ, μ₁, μ₂, μ̄₁, μ̄₂, χ, χ̄, ψ`. The singletons take values in `Q(√-3)`
//! and vanish on every `Ph` column; the linear characters are never
//! materialised, since every sum over `i` of a product of their values is
//! a geometric sum with a closed form.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{self, NProductTable};
use crate::cyclo::{CycField, CycNumber, QSqrtM3};
use crate::error::{Error, Result};
use crate::gf3field::FieldSpec;
use crate::reegroup::{ClassPartition, NLabel, Relabel};

/// A character row: either one character with explicit values, or a
/// family described by a value rule.
#[derive(Debug, Clone)]
pub enum Row {
    Singleton {
        name: String,
        values: Vec<QSqrtM3>,
    },
    Family {
        name: String,
        count: u64,
        rule: String,
    },
}

#[derive(Debug, Clone)]
pub struct NCharTable {
    k: u32,
    q: u64,
    epsilon: i8,
    columns: Vec<NLabel>,
    centralizers: Vec<u64>,
    rows: Vec<Row>,
}

/// Names of the singleton rows, in table order.
pub const SINGLETON_NAMES: [&str; 8] = [
    "lambda", "mu1", "mu2", "mu1bar", "mu2bar", "chi", "chibar", "psi",
];

impl NCharTable {
    /// Builds the table for the given field and sign `ε ∈ {±1}`.
    pub fn build(field: &FieldSpec, epsilon: i8) -> Result<Self> {
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::Parse(format!(
                "epsilon must be +1 or -1, got {epsilon}"
            )));
        }
        let k = field.k();
        let q = field.order() as u64;
        let m = 3i64.pow(k);
        let qi = q as i64;
        let columns = NLabel::all(q);
        let centralizers = columns
            .iter()
            .map(|l| centralizer_order(*l, q))
            .collect::<Vec<_>>();

        let eps = epsilon as i64;
        let int = QSqrtM3::from_int;
        let w = QSqrtM3::omega();
        let wb = w.conj();
        let em = int(eps * m);
        // μ₁(T) = (-m + m²√-3)/2, b = μ₁(JT) = (-1 - m√-3)/2
        let mu_t = QSqrtM3::from_ints(-m, m * m, 2);
        let b = QSqrtM3::from_ints(-1, -m, 2);
        let chi_t = QSqrtM3::from_ints(-m, m * m, 1);
        let half = QSqrtM3::from_ints(qi - 1, 0, 2);
        let mdeg = QSqrtM3::from_ints(m * (qi - 1), 0, 2);

        let row = |vals: [QSqrtM3; 10]| -> Vec<QSqrtM3> {
            let mut out: Vec<QSqrtM3> = vals.to_vec();
            out.resize(columns.len(), QSqrtM3::zero());
            out
        };
        let z = QSqrtM3::zero;
        // column order: 1 X T T^-1 Y YT YT^-1 J JT JT^-1
        let lambda = row([
            int(qi - 1),
            int(qi - 1),
            int(qi - 1),
            int(qi - 1),
            int(-1),
            int(-1),
            int(-1),
            z(),
            z(),
            z(),
        ]);
        let mu1 = row([
            mdeg.clone(),
            mdeg.clone(),
            mu_t.clone(),
            mu_t.conj(),
            -&em,
            -(&em * &wb),
            -(&em * &w),
            half.clone(),
            b.clone(),
            b.conj(),
        ]);
        let mu2 = row([
            mdeg.clone(),
            mdeg.clone(),
            mu_t.clone(),
            mu_t.conj(),
            -&em,
            -(&em * &wb),
            -(&em * &w),
            -&half,
            -&b,
            -b.conj(),
        ]);
        let chi = row([
            int(m * (qi - 1)),
            int(m * (qi - 1)),
            chi_t.clone(),
            chi_t.conj(),
            em.clone(),
            &em * &wb,
            &em * &w,
            z(),
            z(),
            z(),
        ]);
        let psi = row([
            int(qi * (qi - 1)),
            int(-qi),
            z(),
            z(),
            z(),
            z(),
            z(),
            z(),
            z(),
            z(),
        ]);
        let conj_row = |r: &Vec<QSqrtM3>| r.iter().map(QSqrtM3::conj).collect::<Vec<_>>();
        let singles = [
            lambda.clone(),
            mu1.clone(),
            mu2.clone(),
            conj_row(&mu1),
            conj_row(&mu2),
            chi.clone(),
            conj_row(&chi),
            psi,
        ];
        let mut rows = vec![Row::Family {
            name: "alpha".into(),
            count: q - 1,
            rule: "alpha_i = 1 on 1,X,T,T^-1,Y,YT,YT^-1; (-1)^i on J,JT,JT^-1; xi^(i*j) on Ph{j}"
                .into(),
        }];
        rows.extend(
            SINGLETON_NAMES
                .iter()
                .zip(singles)
                .map(|(n, values)| Row::Singleton {
                    name: n.to_string(),
                    values,
                }),
        );
        Ok(NCharTable {
            k,
            q,
            epsilon,
            columns,
            centralizers,
            rows,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    /// `|N| = q³(q-1)`.
    pub fn group_order(&self) -> u64 {
        self.q * self.q * self.q * (self.q - 1)
    }

    pub fn columns(&self) -> &[NLabel] {
        &self.columns
    }

    pub fn centralizers(&self) -> &[u64] {
        &self.centralizers
    }

    pub fn class_size(&self, col: usize) -> u64 {
        self.group_order() / self.centralizers[col]
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Singleton rows as `(name, values)`.
    pub fn singletons(&self) -> impl Iterator<Item = (&str, &[QSqrtM3])> {
        self.rows.iter().filter_map(|r| match r {
            Row::Singleton { name, values } => Some((name.as_str(), values.as_slice())),
            Row::Family { .. } => None,
        })
    }

    pub fn singleton(&self, name: &str) -> Option<&[QSqrtM3]> {
        self.singletons().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    /// Value of a singleton at a label.
    pub fn value(&self, name: &str, l: NLabel) -> Option<&QSqrtM3> {
        self.singleton(name).map(|v| &v[l.index(self.q)])
    }

    /// Image of column `col` in `C_(q-1)`, as used by the linear characters.
    pub fn torus_exponent(&self, col: usize) -> u64 {
        self.columns[col].torus_exponent(self.q)
    }

    /// `Σ_i α_i(a)·α_i(b)·conj(α_i(c))` in closed form.
    pub fn alpha_triple_sum(&self, a: usize, b: usize, c: usize) -> u64 {
        let n = self.q - 1;
        let e = (self.torus_exponent(a) + self.torus_exponent(b) + n - self.torus_exponent(c)) % n;
        if e == 0 {
            n
        } else {
            0
        }
    }

    /// `Σ_i α_i(a)·conj(α_i(b))` in closed form.
    pub fn alpha_pair_sum(&self, a: usize, b: usize) -> u64 {
        if self.torus_exponent(a) == self.torus_exponent(b) {
            self.q - 1
        } else {
            0
        }
    }

    /// `α_i(col)` as an element of `Q(ζ_M)`, `ξ = ζ_M^(M/(q-1))`.
    pub fn alpha_value(&self, field: &Arc<CycField>, i: u64, col: usize) -> CycNumber {
        let step = (field.conductor() / (self.q - 1)) as i64;
        CycNumber::zeta_pow(field, step * (i * self.torus_exponent(col)) as i64)
    }

    /// Full value (including the linear rows) of row `r`, member `i`.
    pub fn cyc_value(
        &self,
        field: &Arc<CycField>,
        r: usize,
        i: u64,
        col: usize,
    ) -> Result<CycNumber> {
        match &self.rows[r] {
            Row::Family { .. } => Ok(self.alpha_value(field, i, col)),
            Row::Singleton { values, .. } => values[col].embed(field),
        }
    }

    /// `Σ_i α_i(a)·conj(α_i(b))` summed term by term in `Q(ζ_M)`.
    pub fn alpha_pair_sum_explicit(&self, field: &Arc<CycField>, a: usize, b: usize) -> CycNumber {
        let n = self.q - 1;
        let step = field.conductor() / n;
        let mut hist = vec![0i64; n as usize];
        let d = (self.torus_exponent(a) + n - self.torus_exponent(b)) % n;
        for i in 0..n {
            hist[((i * d) % n) as usize] += 1;
        }
        hist.iter().enumerate().filter(|(_, &c)| c != 0).fold(
            CycNumber::zero(field),
            |acc, (e, &c)| {
                &acc + &CycNumber::zeta_pow(field, (e as u64 * step) as i64)
                    .scale(&BigRational::from_integer(c.into()))
            },
        )
    }

    /// Degrees with multiplicity.
    pub fn degrees(&self) -> Vec<(String, BigInt, u64)> {
        self.rows
            .iter()
            .map(|r| match r {
                Row::Family { name, count, .. } => (name.clone(), BigInt::one(), *count),
                Row::Singleton { name, values } => (
                    name.clone(),
                    values[0].to_integer().expect("degrees are integers"),
                    1,
                ),
            })
            .collect()
    }

    /// `Σ θ(1)²` over all irreducible characters.
    pub fn sum_of_squared_degrees(&self) -> BigInt {
        self.degrees()
            .into_iter()
            .map(|(_, d, c)| &d * &d * BigInt::from(c))
            .sum()
    }

    /// Number of irreducible characters.
    pub fn character_count(&self) -> u64 {
        self.degrees().iter().map(|(_, _, c)| c).sum()
    }

    /// Exact first and second orthogonality.
    pub fn verify_orthogonality(&self) -> OrthogonalityReport {
        let n = self.columns.len();
        let order = BigInt::from(self.group_order());
        let sizes: Vec<BigRational> = (0..n)
            .map(|c| BigRational::from_integer(self.class_size(c).into()))
            .collect();
        let singles: Vec<(&str, &[QSqrtM3])> = self.singletons().collect();
        let mut failures = Vec::new();
        let mut row_pairs = 0u64;

        // singleton vs singleton
        for (i, (ni, vi)) in singles.iter().enumerate() {
            for (j, (nj, vj)) in singles.iter().enumerate() {
                let mut s = QSqrtM3::zero();
                for c in 0..n {
                    if !vi[c].is_zero() && !vj[c].is_zero() {
                        s = &s + &(&vi[c] * &vj[c].conj()).scale(&sizes[c]);
                    }
                }
                let expected = if i == j {
                    QSqrtM3::from_bigint(order.clone())
                } else {
                    QSqrtM3::zero()
                };
                row_pairs += 1;
                if s != expected {
                    failures.push(format!("<{ni},{nj}>·|N| = {s}, expected {expected}"));
                }
            }
        }
        // linear family vs singletons: α_i restricted to the support of a
        // singleton depends only on the parity of i
        for parity in [0u64, 1] {
            for (name, v) in &singles {
                let mut s = QSqrtM3::zero();
                for c in 0..n {
                    if v[c].is_zero() {
                        continue;
                    }
                    let sign = if self.torus_exponent(c) != 0 && parity == 1 {
                        -1
                    } else {
                        1
                    };
                    s = &s
                        + &v[c]
                            .conj()
                            .scale(&(&sizes[c] * BigRational::from_integer(sign.into())));
                }
                row_pairs += 1;
                if !s.is_zero() {
                    failures.push(format!(
                        "<alpha_(i odd={parity}),{name}>·|N| = {s}, expected 0"
                    ));
                }
            }
        }
        // linear family vs itself, by difference d = i - j
        let qm1 = self.q - 1;
        let q3 = BigInt::from(self.q * self.q * self.q);
        for d in 0..qm1 {
            let sign = if d % 2 == 0 { 1 } else { -1 };
            let mut s = BigInt::zero();
            for c in 0..n {
                if self.columns[c].is_ph() {
                    continue;
                }
                let sz = BigInt::from(self.class_size(c));
                s += if self.torus_exponent(c) != 0 {
                    sz * sign
                } else {
                    sz
                };
            }
            // Σ over Ph columns of ξ^(d j) = Σ_all - 1 - (-1)^d
            let geo = if d == 0 { qm1 as i64 } else { 0 } - 1 - sign;
            s += &q3 * BigInt::from(geo);
            let expected = if d == 0 {
                order.clone()
            } else {
                BigInt::zero()
            };
            row_pairs += 1;
            if s != expected {
                failures.push(format!(
                    "<alpha_i,alpha_(i-{d})>·|N| = {s}, expected {expected}"
                ));
            }
        }

        // column orthogonality, parallel over the first column
        let col_failures: Vec<String> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut out = Vec::new();
                for b in 0..n {
                    let mut s = QSqrtM3::from_int(self.alpha_pair_sum(a, b) as i64);
                    for (_, v) in &singles {
                        if !v[a].is_zero() && !v[b].is_zero() {
                            s = &s + &(&v[a] * &v[b].conj());
                        }
                    }
                    let expected = if a == b { self.centralizers[a] } else { 0 };
                    if s != QSqrtM3::from_int(expected as i64) {
                        out.push(format!(
                            "column {} vs {}: {s}, expected {expected}",
                            self.columns[a], self.columns[b]
                        ));
                    }
                }
                out
            })
            .collect();
        failures.extend(col_failures);

        OrthogonalityReport {
            epsilon: self.epsilon,
            row_pairs_checked: row_pairs,
            column_pairs_checked: (n * n) as u64,
            sum_of_squared_degrees: self.sum_of_squared_degrees().to_string(),
            group_order: self.group_order(),
            passed: failures.is_empty() && self.sum_of_squared_degrees() == order,
            failures,
        }
    }

    /// Checks `conj(θ(g)) = θ(g⁻¹)` for every singleton and column, using
    /// the supplied inverse-class map.
    pub fn verify_inverse_conjugation(&self, inverse: impl Fn(NLabel) -> NLabel) -> Vec<String> {
        let mut bad = Vec::new();
        for (name, v) in self.singletons() {
            for (c, l) in self.columns.iter().enumerate() {
                let ic = inverse(*l).index(self.q);
                if v[c].conj() != v[ic] {
                    bad.push(format!("{name} at {l}"));
                }
            }
        }
        bad
    }

    /// CSV export: header of labels with centralizer orders, one row per
    /// singleton and one symbolic row for the linear family.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("character");
        for (l, c) in self.columns.iter().zip(&self.centralizers) {
            out.push_str(&format!(",{l} [{c}]"));
        }
        out.push('\n');
        for r in &self.rows {
            match r {
                Row::Family { name, count, rule } => {
                    out.push_str(&format!("{name} (x{count}),\"{rule}\"\n"));
                }
                Row::Singleton { name, values } => {
                    out.push_str(name);
                    for v in values {
                        out.push_str(&format!(",{v}"));
                    }
                    out.push('\n');
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cols: Vec<_> = self
            .columns
            .iter()
            .zip(&self.centralizers)
            .map(|(l, c)| serde_json::json!({"label": l.to_string(), "centralizer": c}))
            .collect();
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| match r {
                Row::Family { name, count, rule } => {
                    serde_json::json!({"name": name, "count": count, "rule": rule})
                }
                Row::Singleton { name, values } => serde_json::json!({
                    "name": name,
                    "values": values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                }),
            })
            .collect();
        serde_json::json!({"k": self.k, "q": self.q, "epsilon": self.epsilon, "columns": cols, "rows": rows})
    }
}

/// `|C_N(g)|` for a class label, per the class census of `N`.
pub fn centralizer_order(l: NLabel, q: u64) -> u64 {
    match l {
        NLabel::One => q * q * q * (q - 1),
        NLabel::X => q * q * q,
        NLabel::T | NLabel::Tinv => 2 * q * q,
        NLabel::Y | NLabel::YT | NLabel::YTinv => 3 * q,
        NLabel::J => q * (q - 1),
        NLabel::JT | NLabel::JTinv => 2 * q,
        NLabel::Ph(_) => q - 1,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityReport {
    pub epsilon: i8,
    pub row_pairs_checked: u64,
    pub column_pairs_checked: u64,
    pub sum_of_squared_degrees: String,
    pub group_order: u64,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlignmentReport {
    pub chosen: Relabel,
    /// Every candidate under which Burnside equals brute force.
    pub passing: Vec<Relabel>,
    pub candidates_tried: usize,
    pub ambiguous: bool,
}

/// Finds the relabeling of the ambiguous classes under which every Burnside
/// constant equals the brute-force count. Candidates are tried with the
/// identity first; the first passing one is applied to the partition.
pub fn align_labels(
    table: &NCharTable,
    partition: &mut ClassPartition,
) -> Result<(AlignmentReport, NProductTable)> {
    partition.apply_relabel(Relabel::IDENTITY);
    let brute = constants::bruteforce_tensor(partition);
    let (report, burnside) = align_with_tensor(table, &brute)?;
    partition.apply_relabel(report.chosen);
    Ok((report, burnside))
}

/// Alignment against a brute-force tensor computed under the
/// representative-based (identity) labels.
pub fn align_with_tensor(
    table: &NCharTable,
    brute: &NProductTable,
) -> Result<(AlignmentReport, NProductTable)> {
    let lenient = constants::burnside_values_lenient(table);
    let q = table.q();
    let labels = NLabel::all(q);
    let n = labels.len();
    let candidates = Relabel::all();
    let passing: Vec<Relabel> = candidates
        .par_iter()
        .filter(|r| {
            let idx: Vec<usize> = labels.iter().map(|l| r.apply(*l).index(q)).collect();
            (0..n).all(|x| {
                (0..n).all(|y| {
                    (0..n).all(|z| {
                        lenient[(idx[x] * n + idx[y]) * n + idx[z]] == Some(brute.get_idx(x, y, z))
                    })
                })
            })
        })
        .copied()
        .collect();
    let chosen = *passing.first().ok_or(Error::NoConsistentLabeling)?;
    let strict = constants::burnside_tensor(table)?;
    Ok((
        AlignmentReport {
            chosen,
            ambiguous: passing.len() > 1,
            passing,
            candidates_tried: candidates.len(),
        },
        strict,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(k: u32, eps: i8) -> NCharTable {
        NCharTable::build(&FieldSpec::new(k).unwrap(), eps).unwrap()
    }

    #[test]
    fn spot_values_k1() {
        let t = table(1, 1);
        assert_eq!(t.value("mu1", NLabel::J).unwrap(), &QSqrtM3::from_int(13));
        assert_eq!(
            t.value("chi", NLabel::T).unwrap(),
            &QSqrtM3::from_ints(-3, 9, 1)
        );
        assert_eq!(
            t.value("chi", NLabel::Tinv).unwrap(),
            &QSqrtM3::from_ints(-3, -9, 1)
        );
        assert_eq!(
            t.value("psi", NLabel::One).unwrap(),
            &QSqrtM3::from_int(702)
        );
        assert_eq!(t.value("psi", NLabel::X).unwrap(), &QSqrtM3::from_int(-27));
        assert_eq!(
            t.value("lambda", NLabel::T).unwrap(),
            &QSqrtM3::from_int(26)
        );
        assert_eq!(
            t.value("mu1", NLabel::JT).unwrap(),
            &QSqrtM3::from_ints(-1, -3, 2)
        );
        assert_eq!(
            t.value("mu1", NLabel::T).unwrap(),
            &QSqrtM3::from_ints(-3, 9, 2)
        );
    }

    #[test]
    fn degree_inventory() {
        for k in 1..=2 {
            let t = table(k, 1);
            let q = t.q();
            let m = 3u64.pow(k);
            let mut degs: Vec<(u64, u64)> = t
                .degrees()
                .into_iter()
                .map(|(_, d, c)| (d.try_into().unwrap(), c))
                .collect();
            degs.sort();
            let mut expected = vec![
                (1, q - 1),
                (q - 1, 1),
                (m * (q - 1) / 2, 1),
                (m * (q - 1) / 2, 1),
                (m * (q - 1) / 2, 1),
                (m * (q - 1) / 2, 1),
                (m * (q - 1), 1),
                (m * (q - 1), 1),
                (q * (q - 1), 1),
            ];
            expected.sort();
            assert_eq!(degs, expected);
            assert_eq!(t.character_count(), q + 7);
            assert_eq!(t.sum_of_squared_degrees(), BigInt::from(t.group_order()));
        }
        assert_eq!(
            table(1, 1).sum_of_squared_degrees(),
            BigInt::from(511_758u64)
        );
    }

    #[test]
    fn orthogonality_both_signs_k1() {
        for eps in [1, -1] {
            let r = table(1, eps).verify_orthogonality();
            assert!(r.passed, "{:?}", r.failures);
        }
    }

    #[test]
    fn column_sums_j_and_jt() {
        let t = table(1, 1);
        let (j, jt) = (NLabel::J.index(27), NLabel::JT.index(27));
        let col = |a: usize, b: usize| {
            let mut s = QSqrtM3::from_int(t.alpha_pair_sum(a, b) as i64);
            for (_, v) in t.singletons() {
                s = &s + &(&v[a] * &v[b].conj());
            }
            s
        };
        assert_eq!(col(j, j), QSqrtM3::from_int(27 * 26));
        assert_eq!(col(jt, j), QSqrtM3::zero());
    }

    #[test]
    fn closed_form_alpha_sums_match_explicit_sums() {
        let t = table(1, 1);
        let f = CycField::for_field_order(27);
        let n = t.columns().len();
        for a in 0..n {
            for b in 0..n {
                let explicit = t.alpha_pair_sum_explicit(&f, a, b);
                assert_eq!(
                    explicit.rational_part(),
                    Some(BigRational::from_integer(t.alpha_pair_sum(a, b).into()))
                );
            }
        }
        // spot check of individual values
        let ph1 = NLabel::Ph(1).index(27);
        let xi = t.alpha_value(&f, 1, ph1);
        assert_eq!(xi, CycNumber::zeta_pow(&f, 6));
        assert_eq!(
            t.alpha_value(&f, 3, NLabel::J.index(27)),
            CycNumber::from_int(&f, -1)
        );
    }

    #[test]
    fn inverse_conjugation_by_label_convention() {
        let t = table(1, -1);
        assert!(t.verify_inverse_conjugation(|l| l.inverse(27)).is_empty());
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(NCharTable::build(&FieldSpec::new(1).unwrap(), 0).is_err());
    }
}
