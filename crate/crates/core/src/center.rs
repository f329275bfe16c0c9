//! Centres of group algebras over `F_3`, given by structure constants of
//! class sums reduced mod 3, and their radical filtrations.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// Class-sum structure constants mod 3; `table[(x*dim + y)*dim + z]` is
/// the coefficient of `Ĉ(z)` in `Ĉ(x)Ĉ(y)`.
#[derive(Debug, Clone)]
pub struct StructureMod3 {
    labels: Vec<String>,
    table: Vec<u8>,
}

impl StructureMod3 {
    pub fn new(labels: Vec<String>, table: Vec<u8>) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n * n {
            return Err(Error::InvalidElement(format!(
                "structure table has {} entries for {n} classes",
                table.len()
            )));
        }
        if table.iter().any(|&c| c > 2) {
            return Err(Error::InvalidElement(
                "structure table is not reduced mod 3".into(),
            ));
        }
        Ok(StructureMod3 { labels, table })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Coefficients of `Ĉ(x)Ĉ(y)`.
    pub fn class_product(&self, x: usize, y: usize) -> &[u8] {
        let n = self.dim();
        &self.table[(x * n + y) * n..(x * n + y + 1) * n]
    }
}

/// An element of the centre in the class-sum basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CenterElement {
    pub coeffs: Vec<u8>,
}

impl CenterElement {
    pub fn zero(dim: usize) -> Self {
        CenterElement {
            coeffs: vec![0; dim],
        }
    }

    /// The class sum `Ĉ(i)`.
    pub fn class_sum(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coeffs[i] = 1;
        e
    }

    pub fn from_coeffs(coeffs: Vec<u8>) -> Self {
        CenterElement {
            coeffs: coeffs.into_iter().map(|c| c % 3).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        CenterElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a + b) % 3)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CenterElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a + 3 - b) % 3)
                .collect(),
        }
    }

    pub fn scale(&self, c: u8) -> Self {
        CenterElement {
            coeffs: self.coeffs.iter().map(|a| (a * (c % 3)) % 3).collect(),
        }
    }

    /// Nonzero `(position, coefficient)` pairs.
    pub fn support(&self) -> Vec<(usize, u8)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect()
    }

    pub fn render(&self, labels: &[String]) -> String {
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .map(|(i, c)| {
                let l = &labels[i];
                match (c, l.as_str()) {
                    (c, "1") => c.to_string(),
                    (1, _) => format!("C({l})"),
                    (c, _) => format!("{c}*C({l})"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Incrementally maintained reduced row echelon form over `F_3`.
#[derive(Debug, Clone)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

fn inv3(a: u8) -> u8 {
    // 1 and 2 are their own inverses
    a
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = CenterElement> + '_ {
        self.rows
            .iter()
            .map(|r| CenterElement { coeffs: r.clone() })
    }

    fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = (*a + 3 * 3 - c * b) % 3;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &CenterElement) -> bool {
        self.reduce(&v.coeffs).iter().all(|&c| c == 0)
    }

    /// Adds a vector; returns whether the rank grew.
    pub fn insert(&mut self, v: &CenterElement) -> bool {
        debug_assert_eq!(v.coeffs.len(), self.dim);
        let mut r = self.reduce(&v.coeffs);
        let Some(p) = r.iter().position(|&c| c != 0) else {
            return false;
        };
        let s = inv3(r[p]);
        for a in r.iter_mut() {
            *a = (*a * s) % 3;
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (a, b) in row.iter_mut().zip(&r) {
                    *a = (*a + 9 - c * b) % 3;
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}

/// The centre of a group algebra, or of a block `Z·e` for an idempotent
/// `e` of the centre.
#[derive(Debug, Clone)]
pub struct CenterAlgebra {
    structure: StructureMod3,
    idempotent: Option<CenterElement>,
    /// `Ĉ(z)·e` for each class `z`.
    projections: Option<Vec<Vec<u8>>>,
}

impl CenterAlgebra {
    pub fn new(structure: StructureMod3, idempotent: Option<CenterElement>) -> Result<Self> {
        let mut alg = CenterAlgebra {
            structure,
            idempotent: None,
            projections: None,
        };
        if let Some(e) = idempotent {
            let n = alg.dim();
            if alg.multiply(&e, &e) != e {
                return Err(Error::Certification(
                    "cut-off element is not idempotent".into(),
                ));
            }
            let proj = (0..n)
                .map(|z| alg.multiply(&CenterElement::class_sum(n, z), &e).coeffs)
                .collect();
            alg.idempotent = Some(e);
            alg.projections = Some(proj);
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn structure(&self) -> &StructureMod3 {
        &self.structure
    }

    pub fn labels(&self) -> &[String] {
        self.structure.labels()
    }

    pub fn idempotent(&self) -> Option<&CenterElement> {
        self.idempotent.as_ref()
    }

    pub fn class_sum(&self, label: &str) -> Result<CenterElement> {
        let i = self
            .structure
            .position(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        Ok(CenterElement::class_sum(self.dim(), i))
    }

    /// Product in the centre of the whole group algebra.
    pub fn multiply(&self, a: &CenterElement, b: &CenterElement) -> CenterElement {
        let n = self.dim();
        let mut acc = vec![0u32; n];
        for (x, ca) in a.support() {
            for (y, cb) in b.support() {
                let c = (ca * cb) as u32;
                for (s, &t) in acc.iter_mut().zip(self.structure.class_product(x, y)) {
                    *s += c * t as u32;
                }
            }
        }
        CenterElement {
            coeffs: acc.into_iter().map(|s| (s % 3) as u8).collect(),
        }
    }

    /// `v·e`, or `v` when there is no idempotent.
    pub fn project(&self, v: &CenterElement) -> CenterElement {
        let Some(proj) = &self.projections else {
            return v.clone();
        };
        let mut acc = vec![0u32; self.dim()];
        for (z, c) in v.support() {
            for (s, &t) in acc.iter_mut().zip(&proj[z]) {
                *s += c as u32 * t as u32;
            }
        }
        CenterElement {
            coeffs: acc.into_iter().map(|s| (s % 3) as u8).collect(),
        }
    }

    /// Product in the block `Z·e`.
    pub fn multiply_center(&self, a: &CenterElement, b: &CenterElement) -> CenterElement {
        self.project(&self.multiply(a, b))
    }

    /// Span of `{Ĉ(z)·e}`: the centre of the block.
    pub fn block_center(&self) -> RowSpace {
        let n = self.dim();
        let mut s = RowSpace::new(n);
        for z in 0..n {
            s.insert(&self.project(&CenterElement::class_sum(n, z)));
        }
        s
    }

    /// Powers of the ideal spanned by `{g·e : g ∈ generators}`, with the
    /// certificate that it is the radical of the block centre: it is an
    /// ideal, it is nilpotent, and its codimension equals `blocks`.
    pub fn radical_filtration(
        &self,
        generators: &[CenterElement],
        blocks: usize,
    ) -> Result<RadicalReport> {
        let n = self.dim();
        let mut first = RowSpace::new(n);
        for g in generators {
            first.insert(&self.project(g));
        }
        let center = self.block_center();

        // ideal: (g·Ĉ(z))·e ∈ J for every generator and class
        let mut seen = HashSet::new();
        let mut ideal_violations = Vec::new();
        for g in generators {
            for z in 0..n {
                let p = self.multiply(g, &CenterElement::class_sum(n, z));
                if seen.insert(p.clone()) && !first.contains(&self.project(&p)) {
                    ideal_violations.push(format!(
                        "{} * C({})",
                        g.render(self.labels()),
                        self.labels()[z]
                    ));
                }
            }
        }

        // J^2 = span{(g_i g_j)·e}, deduplicated before projecting
        let mut raw = RowSpace::new(n);
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i..] {
                raw.insert(&self.multiply(a, b));
            }
        }
        let mut powers = vec![first];
        let mut second = RowSpace::new(n);
        for v in raw.basis() {
            second.insert(&self.project(&v));
        }
        powers.push(second);
        // J^{i+1} = span{s·g} for s in a basis of J^i, since s·e = s
        while powers.last().unwrap().rank() > 0 {
            if powers.len() > n + 1 {
                return Err(Error::Certification("radical is not nilpotent".into()));
            }
            let prev = powers.last().unwrap();
            let mut next = RowSpace::new(n);
            for s in prev.basis() {
                for g in generators {
                    next.insert(&self.multiply(&s, g));
                }
            }
            powers.push(next);
        }
        let dims: Vec<usize> = powers.iter().map(RowSpace::rank).collect();
        let codimension = center.rank() as i64 - dims[0] as i64;
        let certified = ideal_violations.is_empty() && codimension == blocks as i64;
        Ok(RadicalReport {
            center_dim: center.rank(),
            radical_dims: dims.clone(),
            loewy_length: dims.iter().position(|&d| d == 0).unwrap() + 1,
            codimension,
            expected_codimension: blocks,
            ideal_violations,
            certified,
            powers: powers.iter().map(|p| p.basis().collect()).collect(),
        })
    }
}

/// Dimensions of `J, J², …` ending with the first zero power.
#[derive(Debug, Clone, Serialize)]
pub struct RadicalReport {
    pub center_dim: usize,
    pub radical_dims: Vec<usize>,
    /// Least `n` with `J^n = 0`.
    pub loewy_length: usize,
    pub codimension: i64,
    pub expected_codimension: usize,
    pub ideal_violations: Vec<String>,
    pub certified: bool,
    #[serde(skip)]
    pub powers: Vec<Vec<CenterElement>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Centre of F_3[C_3]: classes 1, g, g².
    fn cyclic3() -> CenterAlgebra {
        let mut t = vec![0u8; 27];
        for x in 0..3 {
            for y in 0..3 {
                t[(x * 3 + y) * 3 + (x + y) % 3] = 1;
            }
        }
        let labels = vec!["1".into(), "g".into(), "g2".into()];
        CenterAlgebra::new(StructureMod3::new(labels, t).unwrap(), None).unwrap()
    }

    #[test]
    fn cyclic_group_of_order_three() {
        // radical spanned by g - 1 and (g - 1)^2; Loewy length 3
        let alg = cyclic3();
        let one = CenterElement::class_sum(3, 0);
        let g = CenterElement::class_sum(3, 1);
        let rep = alg.radical_filtration(&[g.sub(&one)], 1).unwrap();
        assert_eq!(rep.radical_dims, vec![1, 1, 0]);
        assert_eq!(rep.loewy_length, 3);
        assert!(
            !rep.certified,
            "one generator spans only part of the radical"
        );
        let g2 = CenterElement::class_sum(3, 2);
        let rep = alg
            .radical_filtration(&[g.sub(&one), g2.sub(&one)], 1)
            .unwrap();
        assert_eq!(rep.radical_dims, vec![2, 1, 0]);
        assert!(rep.certified);
    }

    #[test]
    fn row_space_rank() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(&CenterElement::from_coeffs(vec![1, 2, 0])));
        assert!(s.insert(&CenterElement::from_coeffs(vec![0, 1, 1])));
        assert!(!s.insert(&CenterElement::from_coeffs(vec![2, 2, 1])));
        assert!(s.contains(&CenterElement::from_coeffs(vec![1, 0, 1])));
        assert!(!s.contains(&CenterElement::from_coeffs(vec![0, 0, 1])));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn non_idempotent_rejected() {
        let alg = cyclic3();
        let g = CenterElement::class_sum(3, 1);
        assert!(CenterAlgebra::new(alg.structure().clone(), Some(g)).is_err());
    }
}
