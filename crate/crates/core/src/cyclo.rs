//! Exact arithmetic in cyclotomic fields `Q(ζ_M)` and in the quadratic
//! subfield `Q(√-3)`, plus 3-adic valuations of rationals.
//!
//! [`QSqrtM3`] is the fast path used by every character value outside the
//! linear characters of `N`; [`CycNumber`] is the general representation,
//! kept for the linear characters and for cross-checking the fast path.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// 3-adic valuation of a rational; `None` stands for `+∞` (the value 0).
pub fn val3(x: &BigRational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let three = BigInt::from(3);
    let count = |mut n: BigInt| {
        let mut v = 0i64;
        while (&n % &three).is_zero() {
            n /= &three;
            v += 1;
        }
        v
    };
    Some(count(x.numer().abs()) - count(x.denom().abs()))
}

/// Residue of a 3-integral rational in `{0, 1, 2}`.
pub fn mod3(x: &BigRational) -> Result<u8> {
    if x.is_zero() {
        return Ok(0);
    }
    if val3(x).unwrap_or(0) < 0 {
        return Err(Error::NonIntegral {
            cell: "reduction mod 3".into(),
            value: x.to_string(),
        });
    }
    let three = BigInt::from(3);
    let n = x.numer().mod_floor(&three).to_u8().unwrap();
    let d = x.denom().mod_floor(&three).to_u8().unwrap();
    // d is 1 or 2 and each is its own inverse mod 3
    Ok((n * d) % 3)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Splits `-3+9*s-1/2*z^4` into signed terms, treating `+`/`-` after `*`,
/// `/` or `^` as part of the current term.
fn split_terms(s: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        let boundary = (ch == '+' || ch == '-')
            && !cur.is_empty()
            && !matches!(prev, Some('*') | Some('/') | Some('^'));
        if boundary {
            terms.push(std::mem::take(&mut cur));
        }
        if ch != '+' || !cur.is_empty() {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    terms
}

/// `a + b·√-3` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrtM3 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrtM3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrtM3 { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        QSqrtM3::new(rat(n), BigRational::zero())
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QSqrtM3::new(BigRational::from_integer(n), BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        QSqrtM3::new(r, BigRational::zero())
    }

    /// `(a + b√-3) / d` for integers.
    pub fn from_ints(a: i64, b: i64, d: i64) -> Self {
        QSqrtM3::new(
            BigRational::new(a.into(), d.into()),
            BigRational::new(b.into(), d.into()),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt_m3() -> Self {
        QSqrtM3::new(BigRational::zero(), rat(1))
    }

    /// `ω = (-1 + √-3)/2`.
    pub fn omega() -> Self {
        Self::from_ints(-1, 1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QSqrtM3::new(self.a.clone(), -self.b.clone())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QSqrtM3::new(&self.a * r, &self.b * r)
    }

    pub fn div_rational(&self, r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QSqrtM3::new(&self.a / r, &self.b / r))
    }

    pub fn rational_part(&self) -> Option<BigRational> {
        self.b.is_zero().then(|| self.a.clone())
    }

    pub fn is_rational_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// Value as an integer, when it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_rational_integer().then(|| self.a.to_integer())
    }

    /// Field norm `a² + 3b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + rat(3) * &self.b * &self.b
    }

    /// Image in `Q(ζ_M)` under `√-3 ↦ 1 + 2ζ^(M/3)`; needs `3 | M`.
    pub fn embed(&self, field: &Arc<CycField>) -> Result<CycNumber> {
        let m = field.conductor();
        if !m.is_multiple_of(3) {
            return Err(Error::ConductorMismatch { left: m, right: 3 });
        }
        let omega = CycNumber::zeta_pow(field, (m / 3) as i64);
        let root = &CycNumber::from_rational(field, rat(1)) + &omega.scale(&rat(2));
        Ok(&CycNumber::from_rational(field, self.a.clone()) + &root.scale(&self.b))
    }
}

impl fmt::Display for QSqrtM3 {
    /// Renders as `a/b + c/d*sqrt(-3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt(-3)", self.b),
            (false, false) if self.b.is_negative() => {
                write!(f, "{} - {}*sqrt(-3)", self.a, -self.b.clone())
            }
            (false, false) => write!(f, "{} + {}*sqrt(-3)", self.a, self.b),
        }
    }
}

impl FromStr for QSqrtM3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.replace("sqrt(-3)", "s").split_whitespace().collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        let mut out = QSqrtM3::zero();
        for term in split_terms(&compact) {
            if let Some(coef) = term.strip_suffix("*s") {
                out.b += parse_rational(coef)?;
            } else if term == "s" || term == "-s" {
                out.b += rat(if term == "s" { 1 } else { -1 });
            } else {
                out.a += parse_rational(&term)?;
            }
        }
        Ok(out)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $ty:ty) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
    };
}

impl<'b> Add<&'b QSqrtM3> for &QSqrtM3 {
    type Output = QSqrtM3;
    fn add(self, rhs: &'b QSqrtM3) -> QSqrtM3 {
        QSqrtM3::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'b> Sub<&'b QSqrtM3> for &QSqrtM3 {
    type Output = QSqrtM3;
    fn sub(self, rhs: &'b QSqrtM3) -> QSqrtM3 {
        QSqrtM3::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'b> Mul<&'b QSqrtM3> for &QSqrtM3 {
    type Output = QSqrtM3;
    fn mul(self, rhs: &'b QSqrtM3) -> QSqrtM3 {
        QSqrtM3::new(
            &self.a * &rhs.a - rat(3) * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for QSqrtM3 {
    type Output = QSqrtM3;
    fn neg(self) -> QSqrtM3 {
        QSqrtM3::new(-self.a, -self.b)
    }
}

impl Neg for &QSqrtM3 {
    type Output = QSqrtM3;
    fn neg(self) -> QSqrtM3 {
        QSqrtM3::new(-self.a.clone(), -self.b.clone())
    }
}

forward_binop!(Add, add, QSqrtM3);
forward_binop!(Sub, sub, QSqrtM3);
forward_binop!(Mul, mul, QSqrtM3);

/// The field `Q(ζ_M)`: conductor and the cyclotomic polynomial `Φ_M`.
#[derive(Debug, PartialEq, Eq)]
pub struct CycField {
    m: u64,
    /// Monic `Φ_M`, low degree first.
    phi_poly: Vec<BigInt>,
}

/// Exact division of integer polynomials by a monic divisor.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut quo = vec![BigInt::zero(); r.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = r[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            r[i + j] -= &c * d;
        }
        quo[i] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    quo
}

fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    // Φ_m = (x^m - 1) / Π_{d | m, d < m} Φ_d
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = poly_div_exact(&num, &cyclotomic_poly(d));
    }
    num
}

impl CycField {
    pub fn new(m: u64) -> Arc<Self> {
        assert!(m >= 1, "conductor must be positive");
        Arc::new(CycField {
            m,
            phi_poly: cyclotomic_poly(m),
        })
    }

    /// The conventional conductor `lcm(q - 1, 12)`.
    pub fn for_field_order(q: u64) -> Arc<Self> {
        Self::new((q - 1).lcm(&12))
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    /// `φ(M)`, the dimension over `Q`.
    pub fn dimension(&self) -> usize {
        self.phi_poly.len() - 1
    }

    pub fn cyclotomic_polynomial(&self) -> &[BigInt] {
        &self.phi_poly
    }

    fn reduce(&self, mut c: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.dimension();
        for i in (d..c.len()).rev() {
            let lead = std::mem::take(&mut c[i]);
            if lead.is_zero() {
                continue;
            }
            for (j, p) in self.phi_poly.iter().enumerate().take(d) {
                if !p.is_zero() {
                    c[i - d + j] -= &lead * BigRational::from_integer(p.clone());
                }
            }
        }
        c.truncate(d);
        c.resize(d, BigRational::zero());
        c
    }
}

/// An element of `Q(ζ_M)` in the reduced power basis `1, ζ, …, ζ^(φ(M)-1)`.
#[derive(Debug, Clone)]
pub struct CycNumber {
    field: Arc<CycField>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.m == other.field.m && self.coeffs == other.coeffs
    }
}

impl Eq for CycNumber {}

impl CycNumber {
    pub fn zero(field: &Arc<CycField>) -> Self {
        CycNumber {
            field: field.clone(),
            coeffs: vec![BigRational::zero(); field.dimension()],
        }
    }

    pub fn from_rational(field: &Arc<CycField>, r: BigRational) -> Self {
        let mut z = Self::zero(field);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(field: &Arc<CycField>, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    /// `ζ_M^e` for any integer `e`.
    pub fn zeta_pow(field: &Arc<CycField>, e: i64) -> Self {
        let m = field.m as i64;
        let e = e.rem_euclid(m) as usize;
        let mut c = vec![BigRational::zero(); e.max(field.dimension()) + 1];
        c[e] = BigRational::one();
        CycNumber {
            field: field.clone(),
            coeffs: field.reduce(c),
        }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.field.m, other.field.m,
            "cyclotomic operands must share a conductor"
        );
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.field.m != other.field.m {
            return Err(Error::ConductorMismatch {
                left: self.field.m,
                right: other.field.m,
            });
        }
        Ok(self + other)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn div_rational(&self, r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&r.recip()))
    }

    /// Complex conjugation, the ring map `ζ ↦ ζ^(M-1)`.
    pub fn conj(&self) -> Self {
        let m = self.field.m as usize;
        let mut c = vec![BigRational::zero(); m];
        for (i, x) in self.coeffs.iter().enumerate() {
            if !x.is_zero() {
                c[(m - i) % m] += x;
            }
        }
        if c.len() < self.field.dimension() + 1 {
            c.resize(self.field.dimension() + 1, BigRational::zero());
        }
        CycNumber {
            field: self.field.clone(),
            coeffs: self.field.reduce(c),
        }
    }

    /// The rational value, or `None` if a non-constant coefficient survives.
    pub fn rational_part(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    pub fn is_rational_integer(&self) -> bool {
        self.rational_part().is_some_and(|r| r.is_integer())
    }
}

impl<'b> Add<&'b CycNumber> for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &'b CycNumber) -> CycNumber {
        self.check_same(rhs);
        CycNumber {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'b> Sub<&'b CycNumber> for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &'b CycNumber) -> CycNumber {
        self.check_same(rhs);
        CycNumber {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'b> Mul<&'b CycNumber> for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &'b CycNumber) -> CycNumber {
        self.check_same(rhs);
        let d = self.field.dimension();
        let mut c = vec![BigRational::zero(); 2 * d];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        CycNumber {
            field: self.field.clone(),
            coeffs: self.field.reduce(c),
        }
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        self.scale(&rat(-1))
    }
}

forward_binop!(Add, add, CycNumber);
forward_binop!(Sub, sub, CycNumber);
forward_binop!(Mul, mul, CycNumber);

impl fmt::Display for CycNumber {
    /// Renders as a sum of `c*zeta{M}^e` terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if i == 0 {
                    c.to_string()
                } else {
                    format!("{}*zeta{}^{}", c, self.field.m, i)
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl CycNumber {
    /// Parses the rendering produced by `Display`. Exponents may be any
    /// non-negative integer; the result is reduced.
    pub fn parse(field: &Arc<CycField>, s: &str) -> Result<Self> {
        let compact: String = s.split_whitespace().collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        let tag = format!("zeta{}^", field.m);
        let mut out = CycNumber::zero(field);
        for term in split_terms(&compact) {
            let (coef, exp) = match term.find(&tag) {
                Some(pos) => {
                    let exp: i64 = term[pos + tag.len()..]
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?;
                    let head = &term[..pos];
                    let coef = match head.strip_suffix('*') {
                        Some(c) => parse_rational(c)?,
                        None if head.is_empty() => rat(1),
                        None if head == "-" => rat(-1),
                        None => return Err(Error::Parse(format!("bad term '{term}'"))),
                    };
                    (coef, exp)
                }
                None if term.contains("zeta") => {
                    return Err(Error::Parse(format!(
                        "term '{term}' does not use conductor {}",
                        field.m
                    )))
                }
                None => (parse_rational(&term)?, 0),
            };
            out = &out + &CycNumber::zeta_pow(field, exp).scale(&coef);
        }
        Ok(out)
    }
}
