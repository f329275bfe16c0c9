//! Arithmetic in `F_q`, `q = 3^(2k+1)`, together with the twisting
//! automorphism `θ: λ ↦ λ^(3^k)` used by the Sylow normaliser group law.
//!
//! Elements are stored as their residue polynomial modulo a fixed monic
//! irreducible polynomial of degree `n = 2k+1`. The coefficient vector is
//! packed into a single integer code, `Σ c_i 3^i`, which doubles as the
//! canonical ordering of field elements (low-degree coefficients are the
//! least significant digits).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest field order for which an addition table is materialised.
const ADD_TABLE_LIMIT: u32 = 2187;

/// Dense polynomials over `F_3`, coefficients low-degree first.
pub mod poly {
    pub fn trim(mut p: Vec<u8>) -> Vec<u8> {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    pub fn degree(p: &[u8]) -> Option<usize> {
        p.iter().rposition(|&c| c != 0)
    }

    pub fn sub(a: &[u8], b: &[u8]) -> Vec<u8> {
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + 3 - y) % 3
            })
            .collect();
        trim(out)
    }

    pub fn mul(a: &[u8], b: &[u8]) -> Vec<u8> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u8; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % 3;
            }
        }
        trim(out)
    }

    /// Remainder of `a` modulo a nonzero polynomial `m`.
    pub fn rem(a: &[u8], m: &[u8]) -> Vec<u8> {
        let dm = degree(m).expect("division by the zero polynomial");
        // leading coefficient is 1 or 2, and each is its own inverse mod 3
        let lead_inv = m[dm];
        let mut r = trim(a.to_vec());
        while let Some(dr) = degree(&r) {
            if dr < dm {
                break;
            }
            let factor = (r[dr] * lead_inv) % 3;
            let shift = dr - dm;
            for (i, &c) in m.iter().enumerate().take(dm + 1) {
                r[i + shift] = (r[i + shift] + 3 * 3 - factor * c) % 3;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        // normalise to monic
        if let Some(d) = degree(&a) {
            let inv = a[d];
            for c in a.iter_mut() {
                *c = (*c * inv) % 3;
            }
        }
        a
    }

    /// `x^(3^e) mod m`, by `e` successive cubings.
    pub fn x_pow_three_pow(e: u32, m: &[u8]) -> Vec<u8> {
        let mut acc = rem(&[0, 1], m);
        for _ in 0..e {
            let sq = rem(&mul(&acc, &acc), m);
            acc = rem(&mul(&sq, &acc), m);
        }
        acc
    }

    /// Rabin-style irreducibility test for a monic polynomial of degree `n`.
    pub fn is_irreducible(f: &[u8]) -> bool {
        let n = match degree(f) {
            Some(d) if d >= 1 => d as u32,
            _ => return false,
        };
        if x_pow_three_pow(n, f) != rem(&[0, 1], f) {
            return false;
        }
        (1..n).filter(|d| n % d == 0).all(|d| {
            let h = sub(&x_pow_three_pow(d, f), &[0, 1]);
            degree(&gcd(&h, f)) == Some(0)
        })
    }
}

/// An element of `F_q`, stored as its packed coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    /// The packed coefficient code `Σ c_i 3^i`.
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    k: u32,
    n: u32,
    q: u32,
    modulus: Vec<u8>,
    generator: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// Parameters and lookup tables for `F_(3^(2k+1))`.
///
/// Immutable after construction and cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("k", &self.0.k)
            .field("q", &self.0.q)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.k == other.0.k && self.0.modulus == other.0.modulus
    }
}

impl Eq for FieldSpec {}

/// Output of [`FieldSpec::primitive_root`].
#[derive(Debug, Clone)]
pub struct PrimitiveRoot {
    pub generator: FieldElement,
    /// Distinct primes dividing `q - 1`.
    pub order_primes: Vec<u64>,
    /// All `w` with `w^(3θ-1) = 1`.
    pub twist_fixed_u: Vec<FieldElement>,
    /// All `w` with `w^(2-3θ) = 1`.
    pub twist_fixed_t: Vec<FieldElement>,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// Builds `F_(3^(2k+1))` with the lexicographically smallest monic
    /// irreducible modulus.
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::FieldTooSmall { k: 0 });
        }
        let n = 2 * k + 1;
        if n > 19 {
            return Err(Error::ResourceLimit(format!(
                "k = {k} gives a field too large for packed 32-bit codes"
            )));
        }
        let q = 3u32.pow(n);
        let modulus = smallest_irreducible(n as usize);

        let to_poly = |code: u32| -> Vec<u8> {
            let mut c = code;
            let mut v = Vec::with_capacity(n as usize);
            for _ in 0..n {
                v.push((c % 3) as u8);
                c /= 3;
            }
            poly::trim(v)
        };
        let from_poly =
            |p: &[u8]| -> u32 { p.iter().rev().fold(0u32, |acc, &c| acc * 3 + c as u32) };
        let slow_mul = |a: u32, b: u32| -> u32 {
            from_poly(&poly::rem(&poly::mul(&to_poly(a), &to_poly(b)), &modulus))
        };
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };

        let group_order = (q - 1) as u64;
        let primes = prime_factors(group_order);
        let generator = (1..q)
            .find(|&g| primes.iter().all(|p| slow_pow(g, group_order / p) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut acc = 1u32;
        for i in 0..(q - 1) {
            exp.push(acc);
            log[acc as usize] = i;
            acc = slow_mul(acc, generator);
        }
        debug_assert_eq!(acc, 1);

        let digit_neg = |code: u32| -> u32 {
            let mut c = code;
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..n {
                out += ((3 - c % 3) % 3) * place;
                c /= 3;
                place *= 3;
            }
            out
        };
        let neg: Vec<u32> = (0..q).map(digit_neg).collect();
        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut table = vec![0u32; (q as usize) * (q as usize)];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = digit_add(a, b, n);
                }
            }
            table
        });

        Ok(FieldSpec(Arc::new(Inner {
            k,
            n,
            q,
            modulus,
            generator: FieldElement(generator),
            exp,
            log,
            neg,
            add,
        })))
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    /// Extension degree `n = 2k+1`.
    pub fn degree(&self) -> u32 {
        self.0.n
    }

    /// Field size `q`.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus, coefficients low-degree first.
    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The class of the indeterminate `x`.
    pub fn x(&self) -> FieldElement {
        FieldElement(3)
    }

    /// `-1`, i.e. the constant polynomial 2.
    pub fn minus_one(&self) -> FieldElement {
        FieldElement(2)
    }

    /// Embeds an element of the prime field.
    pub fn from_int(&self, c: i64) -> FieldElement {
        FieldElement(c.rem_euclid(3) as u32)
    }

    pub fn from_code(&self, code: u32) -> Result<FieldElement> {
        if code < self.0.q {
            Ok(FieldElement(code))
        } else {
            Err(Error::InvalidElement(format!(
                "code {code} out of range for F_{}",
                self.0.q
            )))
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u8]) -> Result<FieldElement> {
        if coeffs.len() != self.0.n as usize || coeffs.iter().any(|&c| c > 2) {
            return Err(Error::InvalidElement(format!(
                "expected {} coefficients in {{0,1,2}}, got {coeffs:?}",
                self.0.n
            )));
        }
        Ok(FieldElement(
            coeffs.iter().rev().fold(0u32, |acc, &c| acc * 3 + c as u32),
        ))
    }

    /// Coefficient vector of length `n`, low degree first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u8> {
        let mut c = a.0;
        (0..self.0.n)
            .map(|_| {
                let d = (c % 3) as u8;
                c /= 3;
                d
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.0.q
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.0.add {
            Some(t) => FieldElement(t[(a.0 * self.0.q + b.0) as usize]),
            None => FieldElement(digit_add(a.0, b.0, self.0.n)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let s = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        let m = self.0.q - 1;
        FieldElement(self.0.exp[(if s >= m { s - m } else { s }) as usize])
    }

    /// Reference multiplication by polynomial product and reduction.
    pub fn mul_schoolbook(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let pa = poly::trim(self.coeffs(a));
        let pb = poly::trim(self.coeffs(b));
        let r = poly::rem(&poly::mul(&pa, &pb), &self.0.modulus);
        FieldElement(r.iter().rev().fold(0u32, |acc, &c| acc * 3 + c as u32))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let m = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        Ok(FieldElement(self.0.exp[((m - l) % m) as usize]))
    }

    /// `a^e` by square-and-multiply.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for an arbitrary-precision exponent.
    pub fn pow_big(&self, a: FieldElement, e: &BigUint) -> FieldElement {
        if a.is_zero() {
            return if e.bits() == 0 {
                self.one()
            } else {
                self.zero()
            };
        }
        let reduced = (e % BigUint::from(self.0.q - 1))
            .to_u64()
            .expect("reduced exponent fits in u64");
        self.pow(a, reduced)
    }

    /// `a^e` for a signed exponent; `a` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, a: FieldElement, e: i64) -> Result<FieldElement> {
        if a.is_zero() {
            return if e < 0 {
                Err(Error::DivisionByZero)
            } else {
                Ok(self.pow(a, e as u64))
            };
        }
        let m = (self.0.q - 1) as i64;
        Ok(self.pow(a, e.rem_euclid(m) as u64))
    }

    /// `3^(k+1)`, the exponent written `3θ` in the group law.
    pub fn three_theta(&self) -> u64 {
        3u64.pow(self.0.k + 1)
    }

    /// The automorphism `θ: a ↦ a^(3^k)`.
    pub fn theta(&self, a: FieldElement) -> FieldElement {
        self.pow(a, 3u64.pow(self.0.k))
    }

    /// Discrete logarithm with respect to [`Self::generator`].
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    /// `g^i` for the fixed generator `g`.
    pub fn exp(&self, i: u64) -> FieldElement {
        FieldElement(self.0.exp[(i % (self.0.q as u64 - 1)) as usize])
    }

    pub fn generator(&self) -> FieldElement {
        self.0.generator
    }

    /// The smallest primitive element together with the solution sets of
    /// the two twisted unit equations used to describe centralisers in the
    /// normaliser.
    pub fn primitive_root(&self) -> PrimitiveRoot {
        let m = (self.0.q - 1) as i64;
        let tt = self.three_theta() as i64;
        let solutions = |e: i64| -> Vec<FieldElement> {
            self.elements()
                .filter(|w| !w.is_zero())
                .filter(|&w| self.pow(w, e.rem_euclid(m) as u64) == self.one())
                .collect()
        };
        PrimitiveRoot {
            generator: self.0.generator,
            order_primes: prime_factors(m as u64),
            twist_fixed_u: solutions(tt - 1),
            twist_fixed_t: solutions(2 - tt),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u64> {
        let l = self.log(a)? as u64;
        let m = (self.0.q - 1) as u64;
        Some(m / l.gcd(&m))
    }

    /// Renders an element as a polynomial in `x`, e.g. `x^2+2`.
    pub fn render(&self, a: FieldElement) -> String {
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "x".to_string(),
                (1, d) => format!("{d}x"),
                (i, 1) => format!("x^{i}"),
                (i, d) => format!("{d}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

fn digit_add(a: u32, b: u32, n: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..n {
        out += ((a % 3 + b % 3) % 3) * place;
        a /= 3;
        b /= 3;
        place *= 3;
    }
    out
}

/// Smallest monic irreducible of degree `n`, ordering candidates by the
/// base-3 value of their lower coefficients (constant term least
/// significant).
fn smallest_irreducible(n: usize) -> Vec<u8> {
    let count = 3u64.pow(n as u32);
    (0..count)
        .map(|v| {
            let mut c = v;
            let mut f: Vec<u8> = (0..n)
                .map(|_| {
                    let d = (c % 3) as u8;
                    c /= 3;
                    d
                })
                .collect();
            f.push(1);
            f
        })
        .find(|f| poly::is_irreducible(f))
        .expect("irreducible polynomials exist in every degree")
}
