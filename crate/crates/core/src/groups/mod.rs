//! Finite groups as explicit multiplication tables.
//!
//! Every family enumerates its elements in a normal form (`r^i s^j`,
//! `a^i b^j`, or affine maps `x -> w^k x + c`) with the identity at index 0,
//! and the full product table is filled in at construction.

mod field;
mod spec;

pub use field::{is_prime, smallest_irreducible, FieldElement, GaloisField};
pub use spec::GroupSpec;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ORDER: usize = 512;

/// An element of a [`FiniteGroup`], identified by its table index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement(pub u32);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Constructor tag of a group family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Cyclic group of order `m`.
    Cyclic { m: u32 },
    /// Dihedral group of order `2m` (rotation subgroup of order `m`).
    Dihedral { m: u32 },
    /// Semidihedral group of order `2^n`.
    Semidihedral { n: u32 },
    /// Modular maximal-cyclic group `M_n(2)` of order `2^n`.
    ModularMaximalCyclic { n: u32 },
    /// Generalized quaternion group of order `2^n`.
    GeneralizedQuaternion { n: u32 },
    /// Affine group `x -> ax + b` over `F_{p^n}`.
    Agl1 { p: u32, n: u32 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Cyclic { m } => write!(f, "C:{m}"),
            Family::Dihedral { m } => write!(f, "D:{m}"),
            Family::Semidihedral { n } => write!(f, "SD:{n}"),
            Family::ModularMaximalCyclic { n } => write!(f, "M:{n}"),
            Family::GeneralizedQuaternion { n } => write!(f, "Q:{n}"),
            Family::Agl1 { p, n } => write!(f, "AGL:{p}:{n}"),
        }
    }
}

impl Family {
    /// Group order, or `None` on overflow.
    pub fn order(&self) -> Option<usize> {
        let pow2 = |n: u32| 1usize.checked_shl(n);
        match *self {
            Family::Cyclic { m } => Some(m as usize),
            Family::Dihedral { m } => (m as usize).checked_mul(2),
            Family::Semidihedral { n }
            | Family::ModularMaximalCyclic { n }
            | Family::GeneralizedQuaternion { n } => pow2(n),
            Family::Agl1 { p, n } => {
                let q = (p as usize).checked_pow(n)?;
                q.checked_mul(q - 1)
            }
        }
    }

    /// Checks parameter ranges without building anything.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Cyclic { m } | Family::Dihedral { m } if m < 1 => {
                Err(Error::domain("rotation order must be at least 1"))
            }
            Family::Semidihedral { n } if n < 4 => {
                Err(Error::domain(format!("semidihedral groups need n >= 4, got {n}")))
            }
            Family::ModularMaximalCyclic { n } if n < 4 => Err(Error::domain(format!(
                "modular maximal-cyclic groups need n >= 4, got {n}"
            ))),
            Family::GeneralizedQuaternion { n } if n < 3 => Err(Error::domain(format!(
                "generalized quaternion groups need n >= 3, got {n}"
            ))),
            Family::Agl1 { p, .. } if !is_prime(p as u64) => {
                Err(Error::domain(format!("{p} is not prime")))
            }
            Family::Agl1 { n, .. } if n < 1 => Err(Error::domain("field degree must be positive")),
            _ => Ok(()),
        }
    }
}

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    family: Family,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
    generators: Vec<GroupElement>,
    generator_names: Vec<&'static str>,
    field: Option<GaloisField>,
}

fn check_order(family: Family, max_order: usize) -> Result<usize> {
    family.validate()?;
    let order = family.order().ok_or(Error::Capacity {
        what: "group order",
        requested: usize::MAX,
        limit: max_order,
    })?;
    if order > max_order {
        return Err(Error::Capacity {
            what: "group order",
            requested: order,
            limit: max_order,
        });
    }
    Ok(order)
}

fn word(parts: &[(&str, u32)]) -> String {
    let s: Vec<String> = parts
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|&(g, e)| if e == 1 { g.to_string() } else { format!("{g}^{e}") })
        .collect();
    if s.is_empty() {
        "e".to_string()
    } else {
        s.join(" ")
    }
}

struct Table {
    family: Family,
    order: usize,
    product: Box<dyn Fn(usize, usize) -> usize>,
    label: Box<dyn Fn(usize) -> String>,
    generators: Vec<u32>,
    generator_names: Vec<&'static str>,
    field: Option<GaloisField>,
}

impl Table {
    fn build(self) -> FiniteGroup {
        let n = self.order;
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[x * n + y] = (self.product)(x, y) as u32;
            }
        }
        let inv = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| mul[x * n + y] == 0)
                    .expect("every element has an inverse") as u32
            })
            .collect();
        FiniteGroup {
            family: self.family,
            order: n,
            mul,
            inv,
            labels: (0..n).map(&self.label).collect(),
            generators: self.generators.into_iter().map(GroupElement).collect(),
            generator_names: self.generator_names,
            field: self.field,
        }
    }
}

/// Cyclic group `C_m = <r>`; element `r^i` has index `i`.
pub fn make_cyclic(m: u32, max_order: usize) -> Result<FiniteGroup> {
    let family = Family::Cyclic { m };
    let order = check_order(family, max_order)?;
    let mm = m as usize;
    Ok(Table {
        family,
        order,
        product: Box::new(move |x, y| (x + y) % mm),
        label: Box::new(|i| word(&[("r", i as u32)])),
        generators: if m > 1 { vec![1] } else { vec![] },
        generator_names: if m > 1 { vec!["r"] } else { vec![] },
        field: None,
    }
    .build())
}

/// Dihedral group of order `2m`: `r^m = s^2 = 1`, `s r s^-1 = r^-1`.
/// Element `r^i s^j` has index `i + m j`.
pub fn make_dihedral(m: u32, max_order: usize) -> Result<FiniteGroup> {
    let family = Family::Dihedral { m };
    let order = check_order(family, max_order)?;
    let mm = m as usize;
    let product = move |x: usize, y: usize| {
        let (i, j) = (x % mm, x / mm);
        let (k, l) = (y % mm, y / mm);
        let k = if j == 1 { (mm - k) % mm } else { k };
        (i + k) % mm + mm * ((j + l) % 2)
    };
    let mut generators = vec![];
    let mut names = vec![];
    if m > 1 {
        generators.push(1);
        names.push("r");
    }
    generators.push(m);
    names.push("s");
    Ok(Table {
        family,
        order,
        product: Box::new(product),
        label: Box::new(move |x| word(&[("r", (x % mm) as u32), ("s", (x / mm) as u32)])),
        generators,
        generator_names: names,
        field: None,
    }
    .build())
}

/// Groups `<a, b>` with `|a| = N = 2^{n-1}` of index two, elements `a^i b^j`
/// at index `i + N j`. `twist` is the automorphism exponent of conjugation by
/// `b`, and `b_square` is the exponent `e` with `b^2 = a^e`.
fn metacyclic_two_group(family: Family, twist: usize, b_square: usize, max_order: usize) -> Result<FiniteGroup> {
    let order = check_order(family, max_order)?;
    let big_n = order / 2;
    let product = move |x: usize, y: usize| {
        let (i, j) = (x % big_n, x / big_n);
        let (k, l) = (y % big_n, y / big_n);
        // a^i b^j a^k b^l = a^{i + twist^j k} b^j b^l
        let k = if j == 1 { (k * twist) % big_n } else { k };
        let mut e = i + k;
        if j == 1 && l == 1 {
            e += b_square;
        }
        e % big_n + big_n * ((j + l) % 2)
    };
    Ok(Table {
        family,
        order,
        product: Box::new(product),
        label: Box::new(move |x| word(&[("a", (x % big_n) as u32), ("b", (x / big_n) as u32)])),
        generators: vec![1, big_n as u32],
        generator_names: vec!["a", "b"],
        field: None,
    }
    .build())
}

/// Semidihedral group `SD_{2^n}`: `a^{2^{n-1}} = b^2 = 1`, `b a b = a^{2^{n-2}-1}`.
pub fn make_semidihedral(n: u32, max_order: usize) -> Result<FiniteGroup> {
    let family = Family::Semidihedral { n };
    family.validate()?;
    let big_n = 1usize << (n - 1);
    metacyclic_two_group(family, big_n / 2 - 1, 0, max_order)
}

/// Modular maximal-cyclic group `M_n(2)`: `b a b^-1 = a^{1 + 2^{n-2}}`.
pub fn make_modular_maximal_cyclic(n: u32, max_order: usize) -> Result<FiniteGroup> {
    let family = Family::ModularMaximalCyclic { n };
    family.validate()?;
    let big_n = 1usize << (n - 1);
    metacyclic_two_group(family, 1 + big_n / 2, 0, max_order)
}

/// Generalized quaternion group of order `2^n`: `b^2 = a^{2^{n-2}}`,
/// `b a b^-1 = a^-1`.
pub fn make_generalized_quaternion(n: u32, max_order: usize) -> Result<FiniteGroup> {
    let family = Family::GeneralizedQuaternion { n };
    family.validate()?;
    let big_n = 1usize << (n - 1);
    metacyclic_two_group(family, big_n - 1, big_n / 2, max_order)
}

/// Affine group of `F_{p^n}`. The map `x -> w^k x + c` (with `w` the field's
/// primitive element and `c` a packed field element) has index `c + q k`;
/// products compose maps, `(f g)(x) = f(g(x))`.
pub fn make_agl1(p: u32, n: u32, max_order: usize) -> Result<FiniteGroup> {
    let family = Family::Agl1 { p, n };
    let order = check_order(family, max_order)?;
    let field = GaloisField::new(p, n)?;
    let q = field.order() as usize;
    let w = field.primitive_element();
    let powers: Vec<FieldElement> = (0..q - 1).map(|k| field.pow(w, k as u32)).collect();
    let f = field.clone();
    let product = move |x: usize, y: usize| {
        let (b1, k1) = (x % q, x / q);
        let (b2, k2) = (y % q, y / q);
        let alpha1 = powers[k1];
        let c = f.add(f.mul(alpha1, FieldElement(b2 as u32)), FieldElement(b1 as u32));
        c.0 as usize + q * ((k1 + k2) % (q - 1))
    };
    let label = move |x: usize| {
        let (b, k) = (x % q, x / q);
        match (k, b) {
            (0, 0) => "e".to_string(),
            (0, b) => format!("x+{b}"),
            (k, 0) => format!("w^{k}x"),
            (k, b) => format!("w^{k}x+{b}"),
        }
    };
    let mut generators = vec![1];
    let mut names = vec!["t"];
    if q > 2 {
        generators.push(q as u32);
        names.push("m");
    }
    Ok(Table {
        family,
        order,
        product: Box::new(product),
        label: Box::new(label),
        generators,
        generator_names: names,
        field: Some(field),
    }
    .build())
}

impl FiniteGroup {
    /// Builds any family member, enforcing `max_order`.
    pub fn from_family(family: Family, max_order: usize) -> Result<Self> {
        match family {
            Family::Cyclic { m } => make_cyclic(m, max_order),
            Family::Dihedral { m } => make_dihedral(m, max_order),
            Family::Semidihedral { n } => make_semidihedral(n, max_order),
            Family::ModularMaximalCyclic { n } => make_modular_maximal_cyclic(n, max_order),
            Family::GeneralizedQuaternion { n } => make_generalized_quaternion(n, max_order),
            Family::Agl1 { p, n } => make_agl1(p, n, max_order),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        GroupElement(self.mul[x.index() * self.order + y.index()])
    }

    #[inline]
    pub(crate) fn mul_idx(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: GroupElement) -> GroupElement {
        GroupElement(self.inv[x.index()])
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conjugate(&self, g: GroupElement, x: GroupElement) -> GroupElement {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, x: GroupElement, e: u32) -> GroupElement {
        (0..e).fold(GroupElement::IDENTITY, |acc, _| self.mul(acc, x))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order as u32).map(GroupElement)
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[&'static str] {
        &self.generator_names
    }

    pub fn label(&self, x: GroupElement) -> &str {
        &self.labels[x.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The field underlying an affine group.
    pub fn field(&self) -> Option<&GaloisField> {
        self.field.as_ref()
    }

    /// Least `k >= 1` with `g^k = e`.
    pub fn element_order(&self, g: GroupElement) -> usize {
        let mut k = 1;
        let mut y = g;
        while y != GroupElement::IDENTITY {
            y = self.mul(y, g);
            k += 1;
        }
        k
    }

    pub fn is_central(&self, g: GroupElement) -> bool {
        self.elements().all(|x| self.mul(g, x) == self.mul(x, g))
    }

    pub fn center(&self) -> Vec<GroupElement> {
        self.elements().filter(|&g| self.is_central(g)).collect()
    }

    /// Evaluates a label back to an element.
    ///
    /// Word families accept any product of generator powers separated by
    /// spaces (`"a^3 b"`, `"b a b"`); affine groups accept `e`, `x+c`,
    /// `w^kx` and `w^kx+c`.
    pub fn parse_label(&self, text: &str) -> Result<GroupElement> {
        let err = |position: usize, message: &str| Error::Parse {
            position,
            message: message.to_string(),
        };
        let text = text.trim();
        if text == "e" {
            return Ok(GroupElement::IDENTITY);
        }
        if let Some(field) = &self.field {
            let q = field.order();
            let (lin, shift) = match text.split_once('+') {
                Some((l, c)) => (l, c.parse::<u32>().map_err(|_| err(l.len() + 1, "bad translation"))?),
                None => (text, 0),
            };
            let k = if lin == "x" {
                0
            } else {
                lin.strip_prefix("w^")
                    .and_then(|s| s.strip_suffix('x'))
                    .and_then(|s| s.parse::<u32>().ok())
                    .ok_or_else(|| err(0, "expected `x` or `w^kx`"))?
            };
            if shift >= q || k >= q - 1 {
                return Err(err(0, "affine coefficient out of range"));
            }
            return Ok(GroupElement(shift + q * k));
        }
        let mut acc = GroupElement::IDENTITY;
        let mut pos = 0;
        for token in text.split(' ') {
            if token.is_empty() {
                pos += 1;
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((g, e)) => (
                    g,
                    e.parse::<u32>()
                        .map_err(|_| err(pos + g.len() + 1, "bad exponent"))?,
                ),
                None => (token, 1),
            };
            let gi = self
                .generator_names
                .iter()
                .position(|&g| g == name)
                .ok_or_else(|| err(pos, "unknown generator"))?;
            acc = self.mul(acc, self.pow(self.generators[gi], exp));
            pos += token.len() + 1;
        }
        Ok(acc)
    }

    /// Size of the subgroup generated by the distinguished generators.
    pub fn generated_order(&self) -> usize {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for g in &self.generators {
                let y = self.mul_idx(x, g.index());
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
}
