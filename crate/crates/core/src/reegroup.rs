//! The Sylow 3-normaliser `N = P ⋊ C_(q-1)` of `²G₂(q)`, realised through
//! the explicit coordinates `x(t,u,v)h(w)`, and its conjugacy classes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf3field::{FieldElement, FieldSpec};

/// `x(t,u,v)h(w)`; lies in `P` iff `w = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub t: FieldElement,
    pub u: FieldElement,
    pub v: FieldElement,
    pub w: FieldElement,
}

/// Group law and element encoding for a fixed field.
#[derive(Debug, Clone)]
pub struct Normaliser {
    field: FieldSpec,
    q: u64,
    /// `t^(3θ)`, `t^(3θ+1)`, `t^(3θ+2)` indexed by field code.
    pow_s: Vec<FieldElement>,
    pow_s1: Vec<FieldElement>,
    pow_s2: Vec<FieldElement>,
    /// Conjugation multipliers `w^(2-3θ)` and `w^(3θ-1)`, indexed by `log w`.
    twist_t: Vec<FieldElement>,
    twist_u: Vec<FieldElement>,
}

impl Normaliser {
    pub fn new(field: &FieldSpec) -> Self {
        let s = field.three_theta();
        let q = field.order() as u64;
        let pow_s: Vec<_> = field.elements().map(|t| field.pow(t, s)).collect();
        let pow_s1: Vec<_> = field.elements().map(|t| field.pow(t, s + 1)).collect();
        let pow_s2: Vec<_> = field.elements().map(|t| field.pow(t, s + 2)).collect();
        let s = s as i64;
        let (twist_t, twist_u) = (0..q - 1)
            .map(|l| {
                let w = field.exp(l);
                (
                    field.pow_signed(w, 2 - s).expect("w is nonzero"),
                    field.pow_signed(w, s - 1).expect("w is nonzero"),
                )
            })
            .unzip();
        Normaliser {
            field: field.clone(),
            q,
            pow_s,
            pow_s1,
            pow_s2,
            twist_t,
            twist_u,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// `|N| = q³(q-1)`.
    pub fn order(&self) -> u64 {
        self.q * self.q * self.q * (self.q - 1)
    }

    /// `|P| = q³`.
    pub fn sylow_order(&self) -> u64 {
        self.q * self.q * self.q
    }

    pub fn identity(&self) -> GroupElement {
        let f = &self.field;
        GroupElement {
            t: f.zero(),
            u: f.zero(),
            v: f.zero(),
            w: f.one(),
        }
    }

    /// `x(t,u,v)h(1)`.
    pub fn x(&self, t: FieldElement, u: FieldElement, v: FieldElement) -> GroupElement {
        GroupElement {
            t,
            u,
            v,
            w: self.field.one(),
        }
    }

    /// `x(0,0,0)h(w)`.
    pub fn h(&self, w: FieldElement) -> GroupElement {
        let z = self.field.zero();
        GroupElement {
            t: z,
            u: z,
            v: z,
            w,
        }
    }

    pub fn element(
        &self,
        t: FieldElement,
        u: FieldElement,
        v: FieldElement,
        w: FieldElement,
    ) -> Result<GroupElement> {
        let e = GroupElement { t, u, v, w };
        self.check(&e)?;
        Ok(e)
    }

    /// Rejects elements with out-of-range coordinates or `w = 0`.
    pub fn check(&self, e: &GroupElement) -> Result<()> {
        let f = &self.field;
        if ![e.t, e.u, e.v, e.w].iter().all(|&c| f.contains(c)) {
            return Err(Error::MixedField);
        }
        if e.w.is_zero() {
            return Err(Error::NotInGroup("h(0) is not defined".into()));
        }
        Ok(())
    }

    #[inline]
    fn p_mul(
        &self,
        (t1, u1, v1): (FieldElement, FieldElement, FieldElement),
        (t2, u2, v2): (FieldElement, FieldElement, FieldElement),
    ) -> (FieldElement, FieldElement, FieldElement) {
        let f = &self.field;
        let t2s = self.pow_s[t2.code() as usize];
        let t2s1 = self.pow_s1[t2.code() as usize];
        let t = f.add(t1, t2);
        let u = f.sub(f.add(u1, u2), f.mul(t1, t2s));
        let mut v = f.add(v1, v2);
        v = f.sub(v, f.mul(t2, u1));
        v = f.add(v, f.mul(t1, t2s1));
        v = f.sub(v, f.mul(f.mul(t1, t1), t2s));
        (t, u, v)
    }

    /// `h(w)·x(t,u,v)·h(w)⁻¹ = x(w^(2-3θ)t, w^(3θ-1)u, wv)`.
    #[inline]
    pub fn twist(&self, w: FieldElement, e: GroupElement) -> GroupElement {
        let f = &self.field;
        let l = f.log(w).expect("w is nonzero") as usize;
        GroupElement {
            t: f.mul(self.twist_t[l], e.t),
            u: f.mul(self.twist_u[l], e.u),
            v: f.mul(w, e.v),
            w: e.w,
        }
    }

    #[inline]
    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        let b = self.twist(a.w, b);
        let (t, u, v) = self.p_mul((a.t, a.u, a.v), (b.t, b.u, b.v));
        GroupElement {
            t,
            u,
            v,
            w: self.field.mul(a.w, b.w),
        }
    }

    /// Multiplication with validation of both operands.
    pub fn try_mul(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(self.mul(a, b))
    }

    #[inline]
    pub fn inv(&self, a: GroupElement) -> GroupElement {
        let f = &self.field;
        let tu = f.mul(a.t, a.u);
        let p = GroupElement {
            t: f.neg(a.t),
            u: f.sub(f.neg(a.u), self.pow_s1[a.t.code() as usize]),
            v: f.add(f.sub(f.neg(a.v), tu), self.pow_s2[a.t.code() as usize]),
            w: f.one(),
        };
        let winv = f.inv(a.w).expect("w is nonzero");
        GroupElement {
            w: winv,
            ..self.twist(winv, p)
        }
    }

    /// `g·a·g⁻¹`.
    pub fn conjugate(&self, g: GroupElement, a: GroupElement) -> GroupElement {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn pow(&self, a: GroupElement, mut e: u64) -> GroupElement {
        let mut base = a;
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: GroupElement) -> u64 {
        let id = self.identity();
        let mut x = a;
        let mut n = 1;
        while x != id {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Dense code `((t·q + u)·q + v)·(q-1) + log w`.
    #[inline]
    pub fn encode(&self, a: GroupElement) -> u64 {
        let q = self.q;
        let l = self.field.log(a.w).expect("w is nonzero") as u64;
        ((a.t.code() as u64 * q + a.u.code() as u64) * q + a.v.code() as u64) * (q - 1) + l
    }

    #[inline]
    pub fn decode(&self, code: u64) -> GroupElement {
        let q = self.q;
        let l = code % (q - 1);
        let mut rest = code / (q - 1);
        let v = (rest % q) as u32;
        rest /= q;
        let u = (rest % q) as u32;
        let t = (rest / q) as u32;
        let f = &self.field;
        GroupElement {
            t: f.from_code(t).expect("in range"),
            u: f.from_code(u).expect("in range"),
            v: f.from_code(v).expect("in range"),
            w: f.exp(l),
        }
    }

    /// `{x(1,0,0), x(0,1,0), x(0,0,1), h(g)}` with `g` the primitive root.
    pub fn generators(&self) -> Vec<GroupElement> {
        let f = &self.field;
        let (z, o) = (f.zero(), f.one());
        vec![
            self.x(o, z, z),
            self.x(z, o, z),
            self.x(z, z, o),
            self.h(f.generator()),
        ]
    }

    pub fn render(&self, a: GroupElement) -> String {
        let f = &self.field;
        format!(
            "x({},{},{})h({})",
            f.render(a.t),
            f.render(a.u),
            f.render(a.v),
            f.render(a.w)
        )
    }
}

/// Column label of a conjugacy class of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NLabel {
    One,
    X,
    T,
    Tinv,
    Y,
    YT,
    YTinv,
    J,
    JT,
    JTinv,
    /// Class of `h(g^j)`, `j ∉ {0, (q-1)/2}`.
    Ph(u32),
}

impl NLabel {
    pub const SINGLETONS: [NLabel; 10] = [
        NLabel::One,
        NLabel::X,
        NLabel::T,
        NLabel::Tinv,
        NLabel::Y,
        NLabel::YT,
        NLabel::YTinv,
        NLabel::J,
        NLabel::JT,
        NLabel::JTinv,
    ];

    /// All `q + 7` labels in canonical column order.
    pub fn all(q: u64) -> Vec<NLabel> {
        let half = ((q - 1) / 2) as u32;
        Self::SINGLETONS
            .iter()
            .copied()
            .chain((1..(q - 1) as u32).filter(|&j| j != half).map(NLabel::Ph))
            .collect()
    }

    /// Position in [`NLabel::all`].
    pub fn index(self, q: u64) -> usize {
        match self {
            NLabel::Ph(j) => {
                let half = ((q - 1) / 2) as u32;
                10 + (j as usize - 1) - usize::from(j > half)
            }
            s => Self::SINGLETONS.iter().position(|&x| x == s).unwrap(),
        }
    }

    /// Label of the inverse class (as fixed by the labeling conventions).
    pub fn inverse(self, q: u64) -> NLabel {
        match self {
            NLabel::T => NLabel::Tinv,
            NLabel::Tinv => NLabel::T,
            NLabel::YT => NLabel::YTinv,
            NLabel::YTinv => NLabel::YT,
            NLabel::JT => NLabel::JTinv,
            NLabel::JTinv => NLabel::JT,
            NLabel::Ph(j) => NLabel::Ph(((q - 1) as u32 - j) % (q - 1) as u32),
            s => s,
        }
    }

    pub fn is_ph(self) -> bool {
        matches!(self, NLabel::Ph(_))
    }

    /// Image of the class in `N/P ≅ C_(q-1)` as an exponent of `g`.
    pub fn torus_exponent(self, q: u64) -> u64 {
        match self {
            NLabel::Ph(j) => j as u64,
            NLabel::J | NLabel::JT | NLabel::JTinv => (q - 1) / 2,
            _ => 0,
        }
    }
}

impl fmt::Display for NLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NLabel::One => write!(f, "1"),
            NLabel::X => write!(f, "X"),
            NLabel::T => write!(f, "T"),
            NLabel::Tinv => write!(f, "T^-1"),
            NLabel::Y => write!(f, "Y"),
            NLabel::YT => write!(f, "YT"),
            NLabel::YTinv => write!(f, "YT^-1"),
            NLabel::J => write!(f, "J"),
            NLabel::JT => write!(f, "JT"),
            NLabel::JTinv => write!(f, "JT^-1"),
            NLabel::Ph(j) => write!(f, "Ph{j}"),
        }
    }
}

impl FromStr for NLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "1" => NLabel::One,
            "X" => NLabel::X,
            "T" => NLabel::T,
            "T^-1" => NLabel::Tinv,
            "Y" => NLabel::Y,
            "YT" => NLabel::YT,
            "YT^-1" => NLabel::YTinv,
            "J" => NLabel::J,
            "JT" => NLabel::JT,
            "JT^-1" => NLabel::JTinv,
            _ => {
                let j = s
                    .strip_prefix("Ph")
                    .and_then(|j| j.parse().ok())
                    .ok_or_else(|| Error::UnknownLabel(s.to_string()))?;
                NLabel::Ph(j)
            }
        })
    }
}

impl Serialize for NLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Per-class data of the partition.
#[derive(Debug, Clone, Serialize)]
pub struct ClassInfo {
    pub label: NLabel,
    pub size: u64,
    pub element_order: u64,
    pub centralizer_order: u64,
    /// 3-adic valuation of the centralizer order.
    pub defect: u32,
    #[serde(skip)]
    pub representative: GroupElement,
    #[serde(rename = "representative")]
    pub representative_text: String,
}

/// A relabeling of the ambiguous classes, applied on top of the
/// representative-based conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Relabel {
    pub swap_t: bool,
    pub swap_jt: bool,
    /// Which of the three order-9 classes (in initial label order
    /// Y, YT, YT^-1) is called `Y`; the other two keep their relative
    /// order unless `swap_yt` is set.
    pub y_choice: u8,
    pub swap_yt: bool,
}

impl Relabel {
    pub const IDENTITY: Relabel = Relabel {
        swap_t: false,
        swap_jt: false,
        y_choice: 0,
        swap_yt: false,
    };

    /// Maps an initial label to its new name.
    pub fn apply(&self, l: NLabel) -> NLabel {
        use NLabel::*;
        let trio = [Y, YT, YTinv];
        match l {
            T | Tinv if self.swap_t => l.swap_pair(T, Tinv),
            JT | JTinv if self.swap_jt => l.swap_pair(JT, JTinv),
            Y | YT | YTinv => {
                let pos = trio.iter().position(|&x| x == l).unwrap();
                let y = self.y_choice as usize;
                if pos == y {
                    return Y;
                }
                let mut rest: Vec<usize> = (0..3).filter(|&i| i != y).collect();
                if self.swap_yt {
                    rest.swap(0, 1);
                }
                if rest[0] == pos {
                    YT
                } else {
                    YTinv
                }
            }
            other => other,
        }
    }

    /// All 24 inverse-respecting relabelings. Candidates that keep the
    /// representative-based names of `T` and `JT` come first, then those
    /// keeping `Y`.
    pub fn all() -> Vec<Relabel> {
        let mut out = Vec::new();
        for swap_t in [false, true] {
            for swap_jt in [false, true] {
                for y_choice in 0..3u8 {
                    for swap_yt in [false, true] {
                        out.push(Relabel {
                            swap_t,
                            swap_jt,
                            y_choice,
                            swap_yt,
                        });
                    }
                }
            }
        }
        out
    }
}

impl NLabel {
    fn swap_pair(self, a: NLabel, b: NLabel) -> NLabel {
        if self == a {
            b
        } else {
            a
        }
    }
}

/// The conjugacy classes of `N`, with an element-to-class index.
#[derive(Debug, Clone)]
pub struct ClassPartition {
    group: Normaliser,
    class_of: Vec<u16>,
    classes: Vec<ClassInfo>,
    /// Element codes grouped by class: class `c` owns
    /// `members[offsets[c]..offsets[c+1]]`.
    members: Vec<u32>,
    offsets: Vec<usize>,
    /// Class id for each canonical column index.
    by_label: Vec<usize>,
    inverse_class: Vec<usize>,
    relabel: Relabel,
}

impl ClassPartition {
    /// Orbit closure under conjugation by [`Normaliser::generators`].
    ///
    /// `k = 1` always runs; larger `k` needs `allow_big`.
    pub fn enumerate(field: &FieldSpec, allow_big: bool) -> Result<Self> {
        let group = Normaliser::new(field);
        let total = group.order();
        if field.k() >= 2 && !allow_big {
            return Err(Error::ResourceLimit(format!(
                "enumerating N at k = {} visits {} elements and needs about {} MiB; \
                 pass the allow-big opt-in to proceed",
                field.k(),
                total,
                total * 6 / (1 << 20)
            )));
        }
        if total > u32::MAX as u64 {
            return Err(Error::ResourceLimit(format!(
                "|N| = {total} exceeds the 32-bit element index"
            )));
        }

        const UNSET: u16 = u16::MAX;
        let mut class_of = vec![UNSET; total as usize];
        let gens: Vec<(GroupElement, GroupElement)> = group
            .generators()
            .into_iter()
            .map(|g| (g, group.inv(g)))
            .collect();
        let mut members: Vec<u32> = Vec::with_capacity(total as usize);
        let mut offsets = vec![0usize];
        let mut stack = Vec::new();
        let mut n_classes: u16 = 0;
        for start in 0..total {
            if class_of[start as usize] != UNSET {
                continue;
            }
            if n_classes == UNSET {
                return Err(Error::ResourceLimit("too many classes".into()));
            }
            let c = n_classes;
            n_classes += 1;
            class_of[start as usize] = c;
            stack.push(start);
            while let Some(code) = stack.pop() {
                members.push(code as u32);
                let e = group.decode(code);
                for &(g, gi) in &gens {
                    let f = group.encode(group.mul(group.mul(g, e), gi));
                    if class_of[f as usize] == UNSET {
                        class_of[f as usize] = c;
                        stack.push(f);
                    }
                }
            }
            offsets.push(members.len());
        }
        let n_classes = n_classes as usize;
        for c in 0..n_classes {
            members[offsets[c]..offsets[c + 1]].sort_unstable();
        }

        let class_at = |e: GroupElement| class_of[group.encode(e) as usize] as usize;
        let inverse_class: Vec<usize> = (0..n_classes)
            .map(|c| class_at(group.inv(group.decode(members[offsets[c]] as u64))))
            .collect();

        // representative-based labels
        let f = field;
        let (z, o, m1) = (f.zero(), f.one(), f.minus_one());
        let mut labels: Vec<Option<NLabel>> = vec![None; n_classes];
        fn assign(labels: &mut [Option<NLabel>], c: usize, l: NLabel) -> Result<()> {
            match labels[c] {
                Some(prev) if prev != l => Err(Error::Certification(format!(
                    "class receives two labels {prev} and {l}"
                ))),
                _ => {
                    labels[c] = Some(l);
                    Ok(())
                }
            }
        }
        assign(&mut labels, class_at(group.identity()), NLabel::One)?;
        assign(&mut labels, class_at(group.x(z, z, o)), NLabel::X)?;
        let t_rep = group.x(z, o, z);
        assign(&mut labels, class_at(t_rep), NLabel::T)?;
        assign(&mut labels, class_at(group.inv(t_rep)), NLabel::Tinv)?;
        let y_class = class_at(group.x(o, z, z));
        assign(&mut labels, y_class, NLabel::Y)?;
        assign(&mut labels, class_at(group.h(m1)), NLabel::J)?;
        let jt_rep = GroupElement {
            t: z,
            u: m1,
            v: z,
            w: m1,
        };
        assign(&mut labels, class_at(jt_rep), NLabel::JT)?;
        assign(&mut labels, class_at(group.inv(jt_rep)), NLabel::JTinv)?;
        let q = f.order() as u64;
        let half = (q - 1) / 2;
        for j in (1..q - 1).filter(|&j| j != half) {
            assign(
                &mut labels,
                class_at(group.h(f.exp(j))),
                NLabel::Ph(j as u32),
            )?;
        }
        // the two remaining order-9 classes, ordered by smallest member code
        let mut rest: Vec<usize> = (0..n_classes).filter(|&c| labels[c].is_none()).collect();
        rest.sort_by_key(|&c| members[offsets[c]]);
        if rest.len() != 2 {
            return Err(Error::Certification(format!(
                "expected two unlabeled order-9 classes, found {}",
                rest.len()
            )));
        }
        assign(&mut labels, rest[0], NLabel::YT)?;
        assign(&mut labels, rest[1], NLabel::YTinv)?;
        let labels: Vec<NLabel> = labels.into_iter().map(Option::unwrap).collect();

        let all = NLabel::all(q);
        if n_classes != all.len() {
            return Err(Error::Certification(format!(
                "found {n_classes} classes, expected {}",
                all.len()
            )));
        }
        let mut by_label = vec![usize::MAX; all.len()];
        for (c, l) in labels.iter().enumerate() {
            by_label[l.index(q)] = c;
        }

        let classes = (0..n_classes)
            .map(|c| {
                let rep = group.decode(members[offsets[c]] as u64);
                let size = (offsets[c + 1] - offsets[c]) as u64;
                let centralizer_order = total / size;
                ClassInfo {
                    label: labels[c],
                    size,
                    element_order: group.element_order(rep),
                    centralizer_order,
                    defect: three_adic(centralizer_order),
                    representative: rep,
                    representative_text: group.render(rep),
                }
            })
            .collect();

        Ok(ClassPartition {
            group,
            class_of,
            classes,
            members,
            offsets,
            by_label,
            inverse_class,
            relabel: Relabel::IDENTITY,
        })
    }

    pub fn group(&self) -> &Normaliser {
        &self.group
    }

    pub fn q(&self) -> u64 {
        self.group.field().order() as u64
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Classes in canonical label order.
    pub fn classes(&self) -> Vec<&ClassInfo> {
        self.by_label.iter().map(|&c| &self.classes[c]).collect()
    }

    pub fn info(&self, l: NLabel) -> &ClassInfo {
        &self.classes[self.by_label[l.index(self.q())]]
    }

    /// Class id (internal) of the class carrying `l`.
    pub fn class_id(&self, l: NLabel) -> usize {
        self.by_label[l.index(self.q())]
    }

    /// Canonical column index of the class containing the element code.
    #[inline]
    pub fn column_of_code(&self, code: u64) -> usize {
        let c = self.class_of[code as usize] as usize;
        self.classes[c].label.index(self.q())
    }

    /// Member element codes of the class labelled `l`.
    pub fn members(&self, l: NLabel) -> &[u32] {
        let c = self.class_id(l);
        &self.members[self.offsets[c]..self.offsets[c + 1]]
    }

    pub fn classify(&self, a: GroupElement) -> Result<NLabel> {
        self.group.check(&a)?;
        let c = self.class_of[self.group.encode(a) as usize] as usize;
        Ok(self.classes[c].label)
    }

    /// Label of the inverse class, read off the partition.
    pub fn inverse_label(&self, l: NLabel) -> NLabel {
        self.classes[self.inverse_class[self.class_id(l)]].label
    }

    pub fn relabel(&self) -> Relabel {
        self.relabel
    }

    /// Applies a relabeling relative to the representative-based labels.
    pub fn apply_relabel(&mut self, r: Relabel) {
        let q = self.q();
        let initial: Vec<NLabel> = self
            .classes
            .iter()
            .map(|c| self.relabel.invert(c.label))
            .collect();
        for (c, l0) in self.classes.iter_mut().zip(initial) {
            c.label = r.apply(l0);
        }
        for (id, c) in self.classes.iter().enumerate() {
            self.by_label[c.label.index(q)] = id;
        }
        self.relabel = r;
    }

    /// Dump as CSV rows `(label, size, element_order, centralizer_order,
    /// defect, representative)`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("label,size,element_order,centralizer_order,defect,representative\n");
        for c in self.classes() {
            out.push_str(&format!(
                "{},{},{},{},{},\"{}\"\n",
                c.label,
                c.size,
                c.element_order,
                c.centralizer_order,
                c.defect,
                c.representative_text
            ));
        }
        out
    }

    /// Multiset of `(size, element order, centralizer order, defect)`.
    pub fn census(&self) -> HashMap<(u64, u64, u64, u32), usize> {
        let mut m = HashMap::new();
        for c in &self.classes {
            *m.entry((c.size, c.element_order, c.centralizer_order, c.defect))
                .or_insert(0) += 1;
        }
        m
    }
}

impl Relabel {
    /// Inverse map from current labels back to initial labels.
    pub fn invert(&self, l: NLabel) -> NLabel {
        use NLabel::*;
        for l0 in [T, Tinv, JT, JTinv, Y, YT, YTinv] {
            if self.apply(l0) == l {
                return l0;
            }
        }
        l
    }
}

/// Exponent of 3 in `n > 0`.
pub fn three_adic(mut n: u64) -> u32 {
    let mut d = 0;
    while n.is_multiple_of(3) {
        n /= 3;
        d += 1;
    }
    d
}

/// Expected class census `(size, order, centralizer, defect) ↦ count`.
pub fn expected_census(field: &FieldSpec) -> HashMap<(u64, u64, u64, u32), usize> {
    let q = field.order() as u64;
    let n = q * q * q * (q - 1);
    let mut m: HashMap<(u64, u64, u64, u32), usize> = HashMap::new();
    let mut add = |size: u64, order: u64, count: usize| {
        let cent = n / size;
        *m.entry((size, order, cent, three_adic(cent))).or_insert(0) += count;
    };
    add(1, 1, 1);
    add(q - 1, 3, 1);
    add(q * (q - 1) / 2, 3, 2);
    add(q * q * (q - 1) / 3, 9, 3);
    add(q * q, 2, 1);
    add(q * q * (q - 1) / 2, 6, 2);
    let half = (q - 1) / 2;
    for j in (1..q - 1).filter(|&j| j != half) {
        let order = field.multiplicative_order(field.exp(j)).unwrap();
        add(q * q * q, order, 1);
    }
    m
}
