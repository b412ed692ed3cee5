//! Arithmetic in the finite field `F_{p^n}`.
//!
//! Elements are stored as their coordinate vector over `F_p`, packed into a
//! single integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`. The defining modulus
//! is the first monic irreducible polynomial of degree `n` when monic
//! polynomials are ordered by the same packing of their lower coefficients.

use crate::error::{Error, Result};

/// A field element, packed as base-`p` digits of its coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u32);

/// `F_{p^n}` with precomputed addition and multiplication tables.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    n: u32,
    q: u32,
    /// Coefficients `c_0..c_{n-1}` of the monic modulus (leading 1 implicit).
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    primitive: FieldElement,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(poly: &mut Vec<u32>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

/// Remainder of `num` modulo the monic polynomial `den` over `F_p`.
/// Polynomials are little-endian coefficient vectors.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    trim(&mut r);
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        for (i, &c) in den.iter().enumerate() {
            let v = (r[shift + i] + p * p - (lead * c) % p) % p;
            r[shift + i] = v;
        }
        trim(&mut r);
    }
    r
}

fn unpack(mut v: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Monic polynomial of degree `deg` whose lower coefficients pack to `code`.
fn monic(code: u32, p: u32, deg: usize) -> Vec<u32> {
    let mut poly = unpack(code, p, deg);
    poly.push(1);
    poly
}

/// Trial division against every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            if poly_rem(poly, &monic(code, p, d), p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `n` over `F_p`, as lower coefficients.
pub fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let n = n as usize;
    for code in 0..p.pow(n as u32) {
        let poly = monic(code, p, n);
        if is_irreducible(&poly, p) {
            return poly[..n].to_vec();
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

impl GaloisField {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::domain("field degree must be positive"));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= 1 << 16)
            .ok_or_else(|| Error::domain(format!("field of order {p}^{n} is too large")))?;
        let modulus = smallest_irreducible(p, n);
        let mut full = modulus.clone();
        full.push(1);

        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for x in 0..q {
            let xc = unpack(x, p, n as usize);
            for y in 0..q {
                let yc = unpack(y, p, n as usize);
                let sum: Vec<u32> = xc.iter().zip(&yc).map(|(a, b)| (a + b) % p).collect();
                add[(x * q + y) as usize] = pack(&sum, p);
                let mut prod = vec![0; 2 * n as usize];
                for (i, a) in xc.iter().enumerate() {
                    for (j, b) in yc.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + a * b) % p;
                    }
                }
                mul[(x * q + y) as usize] = pack(&poly_rem(&prod, &full, p), p);
            }
        }
        let mut field = GaloisField {
            p,
            n,
            q,
            modulus,
            add,
            mul,
            primitive: FieldElement(1),
        };
        field.primitive = (1..q)
            .map(FieldElement)
            .find(|&x| field.multiplicative_order(x) == q - 1)
            .expect("the multiplicative group of a finite field is cyclic");
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Lower coefficients `c_0..c_{n-1}` of the monic defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Least (by packed value) generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        self.primitive
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.add[(x.0 * self.q + y.0) as usize])
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.mul[(x.0 * self.q + y.0) as usize])
    }

    pub fn pow(&self, x: FieldElement, mut e: u32) -> FieldElement {
        let mut acc = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Order of a nonzero element in the multiplicative group; 0 for zero.
    pub fn multiplicative_order(&self, x: FieldElement) -> u32 {
        if x.0 == 0 {
            return 0;
        }
        let mut k = 1;
        let mut y = x;
        while y != self.one() {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        unpack(x.0, self.p, self.n as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        FieldElement(pack(coeffs, self.p))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }
}
