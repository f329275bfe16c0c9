//! Class-algebra structure constants `a(x,y,z)` of `N`, computed both from
//! the character table and by direct counting, together with the general
//! laws they must satisfy.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::QSqrtM3;
use crate::error::{Error, Result};
use crate::ntable::NCharTable;
use crate::reegroup::{three_adic, ClassPartition, NLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Burnside,
    Bruteforce,
    ColumnSumCompletion,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Burnside => "burnside",
            Provenance::Bruteforce => "bruteforce",
            Provenance::ColumnSumCompletion => "column-sum-completion",
        };
        write!(f, "{s}")
    }
}

/// Dense tensor of exact structure constants of `N`, indexed by canonical
/// column positions.
#[derive(Debug, Clone)]
pub struct NProductTable {
    q: u64,
    labels: Vec<NLabel>,
    centralizers: Vec<u64>,
    values: Vec<u64>,
    provenance: Provenance,
}

impl NProductTable {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn labels(&self) -> &[NLabel] {
        &self.labels
    }

    pub fn centralizers(&self) -> &[u64] {
        &self.centralizers
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn group_order(&self) -> u64 {
        self.centralizers[0]
    }

    pub fn class_size(&self, i: usize) -> u64 {
        self.group_order() / self.centralizers[i]
    }

    #[inline]
    pub fn get_idx(&self, x: usize, y: usize, z: usize) -> u64 {
        let n = self.labels.len();
        self.values[(x * n + y) * n + z]
    }

    pub fn get(&self, x: NLabel, y: NLabel, z: NLabel) -> u64 {
        self.get_idx(x.index(self.q), y.index(self.q), z.index(self.q))
    }

    /// Index of the inverse class of column `i`.
    pub fn inverse_idx(&self, i: usize) -> usize {
        self.labels[i].inverse(self.q).index(self.q)
    }

    /// Number of entries where two tensors disagree, with a few examples.
    pub fn compare(&self, other: &NProductTable) -> (u64, Vec<String>) {
        let n = self.dim();
        let mut count = 0;
        let mut examples = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (a, b) = (self.get_idx(x, y, z), other.get_idx(x, y, z));
                    if a != b {
                        count += 1;
                        if examples.len() < 10 {
                            examples.push(format!(
                                "a({},{},{}): {} = {a}, {} = {b}",
                                self.labels[x],
                                self.labels[y],
                                self.labels[z],
                                self.provenance,
                                other.provenance
                            ));
                        }
                    }
                }
            }
        }
        (count, examples)
    }

    /// CSV dump `(x, y, z, value, provenance)`; zero entries are kept.
    pub fn to_csv(&self) -> String {
        let n = self.dim();
        let mut out = String::with_capacity(n * n * n * 16);
        out.push_str("x,y,z,value,provenance\n");
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        self.labels[x],
                        self.labels[y],
                        self.labels[z],
                        self.get_idx(x, y, z),
                        self.provenance
                    ));
                }
            }
        }
        out
    }
}

/// Exact Burnside value
/// `|N|/(|C(x)||C(y)|) · Σ_θ θ(x)θ(y)conj(θ(z))/θ(1)` as an element of
/// `Q(√-3)`, with the linear family summed in closed form.
pub fn burnside_exact(table: &NCharTable, x: usize, y: usize, z: usize) -> QSqrtM3 {
    let cent = table.centralizers();
    let coef = BigRational::new(
        BigInt::from(table.group_order()),
        BigInt::from(cent[x]) * BigInt::from(cent[y]),
    );
    let mut s = QSqrtM3::from_int(table.alpha_triple_sum(x, y, z) as i64);
    for (_, v) in table.singletons() {
        if v[x].is_zero() || v[y].is_zero() || v[z].is_zero() {
            continue;
        }
        let deg = v[0].rational_part().expect("degrees are rational");
        let term = (&(&v[x] * &v[y]) * &v[z].conj())
            .div_rational(&deg)
            .expect("degrees are nonzero");
        s = &s + &term;
    }
    s.scale(&coef)
}

/// Fast path for triples involving a `Ph` column, where only the linear
/// characters contribute. Returns `None` if the value is not an integer.
fn burnside_ph(table: &NCharTable, x: usize, y: usize, z: usize) -> Option<u64> {
    let cent = table.centralizers();
    let num = table.group_order() as u128 * table.alpha_triple_sum(x, y, z) as u128;
    let den = cent[x] as u128 * cent[y] as u128;
    num.is_multiple_of(den).then(|| (num / den) as u64)
}

fn to_u64(v: &QSqrtM3) -> Option<u64> {
    let r = v.rational_part()?;
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    r.to_integer().to_u64()
}

/// Burnside value with the integrality postcondition enforced.
pub fn burnside_constant(table: &NCharTable, x: NLabel, y: NLabel, z: NLabel) -> Result<u64> {
    let q = table.q();
    let (ix, iy, iz) = (x.index(q), y.index(q), z.index(q));
    let v = burnside_exact(table, ix, iy, iz);
    to_u64(&v).ok_or_else(|| Error::NonIntegral {
        cell: format!("a({x},{y},{z})"),
        value: v.to_string(),
    })
}

/// Every Burnside value, `None` where it fails to be a non-negative integer.
pub fn burnside_values_lenient(table: &NCharTable) -> Vec<Option<u64>> {
    let n = table.columns().len();
    let ph: Vec<bool> = table.columns().iter().map(|l| l.is_ph()).collect();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|x| {
            let ph = &ph;
            (0..n).flat_map(move |y| {
                (0..n).map(move |z| {
                    if ph[x] || ph[y] || ph[z] {
                        burnside_ph(table, x, y, z)
                    } else {
                        to_u64(&burnside_exact(table, x, y, z))
                    }
                })
            })
        })
        .collect()
}

/// Every Burnside value reduced mod 3. Negative integers are accepted, so
/// this is defined for either sign choice of the table; a non-integral
/// value is an error.
pub fn burnside_residues(table: &NCharTable) -> Result<Vec<u8>> {
    let n = table.columns().len();
    let ph: Vec<bool> = table.columns().iter().map(|l| l.is_ph()).collect();
    (0..n * n * n)
        .into_par_iter()
        .map(|pos| {
            let (x, y, z) = (pos / (n * n), (pos / n) % n, pos % n);
            if ph[x] || ph[y] || ph[z] {
                if let Some(v) = burnside_ph(table, x, y, z) {
                    return Ok((v % 3) as u8);
                }
            }
            let v = burnside_exact(table, x, y, z);
            match v.to_integer() {
                Some(i) => Ok(residue3(&i)),
                None => Err(Error::NonIntegral {
                    cell: format!(
                        "a({},{},{})",
                        table.columns()[x],
                        table.columns()[y],
                        table.columns()[z]
                    ),
                    value: v.to_string(),
                }),
            }
        })
        .collect()
}

/// The full Burnside tensor; any non-integral or negative value is a hard
/// error naming the first offending cell.
pub fn burnside_tensor(table: &NCharTable) -> Result<NProductTable> {
    let lenient = burnside_values_lenient(table);
    let n = table.columns().len();
    if let Some(pos) = lenient.iter().position(Option::is_none) {
        let (x, y, z) = (pos / (n * n), (pos / n) % n, pos % n);
        return Err(Error::NonIntegral {
            cell: format!(
                "a({},{},{})",
                table.columns()[x],
                table.columns()[y],
                table.columns()[z]
            ),
            value: burnside_exact(table, x, y, z).to_string(),
        });
    }
    Ok(NProductTable {
        q: table.q(),
        labels: table.columns().to_vec(),
        centralizers: table.centralizers().to_vec(),
        values: lenient.into_iter().map(Option::unwrap).collect(),
        provenance: Provenance::Burnside,
    })
}

/// Direct count of pairs `(x', y') ∈ C(x) × C(y)` with `x'y' = z₀` for
/// the class representative `z₀`, iterating over the smaller class.
pub fn bruteforce_constant(part: &ClassPartition, x: NLabel, y: NLabel, z: NLabel) -> u64 {
    let g = part.group();
    let q = part.q();
    let z0 = part.info(z).representative;
    let (xi, yi) = (x.index(q), y.index(q));
    if part.members(x).len() <= part.members(y).len() {
        part.members(x)
            .iter()
            .filter(|&&c| {
                let y1 = g.mul(g.inv(g.decode(c as u64)), z0);
                part.column_of_code(g.encode(y1)) == yi
            })
            .count() as u64
    } else {
        part.members(y)
            .iter()
            .filter(|&&c| {
                let x1 = g.mul(z0, g.inv(g.decode(c as u64)));
                part.column_of_code(g.encode(x1)) == xi
            })
            .count() as u64
    }
}

/// The full tensor by counting. For each `(x, z)` every `x' ∈ C(x)` is
/// visited once and `x'⁻¹z₀` is classified, filling a whole `y`-fibre at
/// a time.
pub fn bruteforce_tensor(part: &ClassPartition) -> NProductTable {
    let g = part.group();
    let q = part.q();
    let labels = NLabel::all(q);
    let n = labels.len();
    let fibres: Vec<Vec<u64>> = (0..n * n)
        .into_par_iter()
        .map(|task| {
            let (x, z) = (task / n, task % n);
            let z0 = part.info(labels[z]).representative;
            let mut counts = vec![0u64; n];
            for &c in part.members(labels[x]) {
                let y1 = g.mul(g.inv(g.decode(c as u64)), z0);
                counts[part.column_of_code(g.encode(y1))] += 1;
            }
            counts
        })
        .collect();
    let mut values = vec![0u64; n * n * n];
    for (task, counts) in fibres.iter().enumerate() {
        let (x, z) = (task / n, task % n);
        for (y, &c) in counts.iter().enumerate() {
            values[(x * n + y) * n + z] = c;
        }
    }
    NProductTable {
        q,
        centralizers: labels
            .iter()
            .map(|&l| part.info(l).centralizer_order)
            .collect(),
        labels,
        values,
        provenance: Provenance::Bruteforce,
    }
}

/// Outcome of one law suite.
#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub law: String,
    pub checked: u64,
    pub violations: u64,
    pub examples: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn run_law<F>(t: &NProductTable, law: &str, check: F) -> LawReport
where
    F: Fn(usize, usize, usize) -> Option<String> + Sync,
{
    let n = t.dim();
    let (checked, bad): (u64, Vec<String>) = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut bad = Vec::new();
            let mut checked = 0u64;
            for y in 0..n {
                for z in 0..n {
                    checked += 1;
                    if let Some(msg) = check(x, y, z) {
                        bad.push(msg);
                    }
                }
            }
            (checked, bad)
        })
        .reduce(
            || (0, Vec::new()),
            |(c1, mut b1), (c2, b2)| {
                b1.extend(b2);
                (c1 + c2, b1)
            },
        );
    LawReport {
        law: law.into(),
        checked,
        violations: bad.len() as u64,
        examples: bad.into_iter().take(10).collect(),
    }
}

/// The symmetry laws: swap of the first two slots, simultaneous inversion,
/// and the two centralizer-weighted rotations
/// `a(x,y,z)|C(y)| = a(x⁻¹,z,y)|C(z)|` and
/// `a(x,y,z)|C(x)| = a(z⁻¹,y,x⁻¹)|C(z)|`.
pub fn verify_symmetries(t: &NProductTable) -> Vec<LawReport> {
    let l = |i: usize| t.labels[i];
    let c = |i: usize| t.centralizers[i] as u128;
    vec![
        run_law(t, "a(x,y,z) = a(y,x,z)", |x, y, z| {
            (t.get_idx(x, y, z) != t.get_idx(y, x, z))
                .then(|| format!("a({},{},{})", l(x), l(y), l(z)))
        }),
        run_law(t, "a(x,y,z) = a(x^-1,y^-1,z^-1)", |x, y, z| {
            let (xi, yi, zi) = (t.inverse_idx(x), t.inverse_idx(y), t.inverse_idx(z));
            (t.get_idx(x, y, z) != t.get_idx(xi, yi, zi))
                .then(|| format!("a({},{},{})", l(x), l(y), l(z)))
        }),
        run_law(t, "a(x,y,z)|C(y)| = a(x^-1,z,y)|C(z)|", |x, y, z| {
            let lhs = t.get_idx(x, y, z) as u128 * c(y);
            let rhs = t.get_idx(t.inverse_idx(x), z, y) as u128 * c(z);
            (lhs != rhs).then(|| format!("a({},{},{})", l(x), l(y), l(z)))
        }),
        run_law(t, "a(x,y,z)|C(x)| = a(z^-1,y,x^-1)|C(z)|", |x, y, z| {
            let lhs = t.get_idx(x, y, z) as u128 * c(x);
            let rhs = t.get_idx(t.inverse_idx(z), y, t.inverse_idx(x)) as u128 * c(z);
            (lhs != rhs).then(|| format!("a({},{},{})", l(x), l(y), l(z)))
        }),
    ]
}

/// `Σ_x a(x,y,z) = |C(y)|` (class size) for every `(y, z)`.
pub fn verify_column_sum(t: &NProductTable) -> LawReport {
    let n = t.dim();
    let mut bad = Vec::new();
    for y in 0..n {
        for z in 0..n {
            let s: u64 = (0..n).map(|x| t.get_idx(x, y, z)).sum();
            if s != t.class_size(y) {
                bad.push(format!(
                    "sum_x a(x,{},{}) = {s}, expected {}",
                    t.labels[y],
                    t.labels[z],
                    t.class_size(y)
                ));
            }
        }
    }
    LawReport {
        law: "sum_x a(x,y,z) = |class(y)|".into(),
        checked: (n * n) as u64,
        violations: bad.len() as u64,
        examples: bad.into_iter().take(10).collect(),
    }
}

/// `3 | a(x,y,z)` whenever `d_x < d_z` or `d_y < d_z`.
pub fn verify_defect_divisibility(t: &NProductTable) -> LawReport {
    let d: Vec<u32> = t.centralizers.iter().map(|&c| three_adic(c)).collect();
    let mut r = run_law(t, "3 | a(x,y,z) if d_x < d_z or d_y < d_z", |x, y, z| {
        let applies = d[x] < d[z] || d[y] < d[z];
        (applies && !t.get_idx(x, y, z).is_multiple_of(3)).then(|| {
            format!(
                "a({},{},{}) = {}",
                t.labels[x],
                t.labels[y],
                t.labels[z],
                t.get_idx(x, y, z)
            )
        })
    });
    let n = t.dim();
    r.checked = (0..n)
        .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
        .filter(|&(x, y, z)| d[x] < d[z] || d[y] < d[z])
        .count() as u64;
    r
}

/// Residue of an integer in `{0,1,2}`.
pub fn residue3(v: &BigInt) -> u8 {
    let r = v % BigInt::from(3);
    let r = if r.is_negative() { r + 3 } else { r };
    r.to_u8().unwrap()
}

/// Returns `true` when `v` is zero modulo `3^e`.
pub fn divisible_by_power_of_three(v: &BigInt, e: u32) -> bool {
    (v % BigInt::from(3u64.pow(e))).is_zero()
}
