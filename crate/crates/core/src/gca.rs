//! Free graded-commutative algebras on named graded generators.
//!
//! A monomial is stored as the sorted sequence of its generator indices,
//! with an even-degree generator repeated once per power. Monomials compare
//! lexicographically on that sequence, which fixes the order of every basis
//! the engine produces.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub index: usize,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

#[derive(Debug)]
struct AlgebraData {
    field: Field,
    generators: Vec<Generator>,
    by_name: HashMap<String, usize>,
    cap: Option<u32>,
}

/// Shared descriptor of a free graded-commutative algebra.
#[derive(Clone, Debug)]
pub struct Algebra(Arc<AlgebraData>);

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.generators == other.0.generators && self.0.cap == other.0.cap)
    }
}
impl Eq for Algebra {}

impl Algebra {
    pub fn new<S: Into<String>>(
        field: Field,
        generators: impl IntoIterator<Item = (S, u32)>,
        cap: Option<u32>,
    ) -> Result<Algebra> {
        let mut gens = Vec::new();
        let mut by_name = HashMap::new();
        for (index, (name, degree)) in generators.into_iter().enumerate() {
            let name = name.into();
            if degree == 0 {
                return Err(Error::InvalidAlgebra(format!("generator `{name}` has degree 0")));
            }
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidAlgebra(format!("bad generator name `{name}`")));
            }
            if by_name.insert(name.clone(), index).is_some() {
                return Err(Error::InvalidAlgebra(format!("duplicate generator `{name}`")));
            }
            gens.push(Generator { name, degree, index });
        }
        Ok(Algebra(Arc::new(AlgebraData {
            field,
            generators: gens,
            by_name,
            cap,
        })))
    }

    /// Exterior algebra on degree-1 generators.
    pub fn exterior<S: Into<String>>(field: Field, names: impl IntoIterator<Item = S>) -> Result<Algebra> {
        Algebra::new(field, names.into_iter().map(|n| (n, 1)), None)
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0.generators
    }

    pub fn num_generators(&self) -> usize {
        self.0.generators.len()
    }

    pub fn generator_info(&self, index: usize) -> Result<&Generator> {
        self.0.generators.get(index).ok_or(Error::GeneratorIndex(index))
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn cap(&self) -> Option<u32> {
        self.0.cap
    }

    pub fn has_even_generators(&self) -> bool {
        self.0.generators.iter().any(|g| !g.is_odd())
    }

    /// Highest degree considered: the top exterior degree when every
    /// generator is odd, otherwise the configured cap.
    pub fn top_degree(&self) -> Result<u32> {
        if let Some(cap) = self.0.cap {
            return Ok(cap);
        }
        if self.has_even_generators() {
            return Err(Error::Uncapped);
        }
        Ok(self.0.generators.iter().map(|g| g.degree).sum())
    }

    /// Sorts a word of generator indices into a canonical monomial. The
    /// sign is the parity of the odd-odd inversions, and 0 when an odd
    /// generator repeats.
    pub fn normalize(&self, word: &[usize]) -> Result<(i8, Monomial)> {
        for &i in word {
            self.generator_info(i)?;
        }
        let odd = |i: usize| self.0.generators[i].is_odd();
        let mut inversions = 0usize;
        for a in 0..word.len() {
            if !odd(word[a]) {
                continue;
            }
            for b in a + 1..word.len() {
                if !odd(word[b]) {
                    continue;
                }
                if word[a] == word[b] {
                    return Ok((0, Monomial::one()));
                }
                if word[a] > word[b] {
                    inversions += 1;
                }
            }
        }
        let mut sorted = word.to_vec();
        sorted.sort_unstable();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Ok((sign, Monomial(sorted)))
    }

    /// All degree-`k` monomials in lexicographic index order.
    pub fn basis(&self, k: u32) -> Result<Vec<Monomial>> {
        if self.has_even_generators() && self.0.cap.is_none() {
            return Err(Error::Uncapped);
        }
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.basis_rec(0, k, &mut cur, &mut out);
        Ok(out)
    }

    fn basis_rec(&self, start: usize, remaining: u32, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(Monomial(cur.clone()));
            return;
        }
        for i in start..self.0.generators.len() {
            let g = &self.0.generators[i];
            if g.degree > remaining {
                continue;
            }
            cur.push(i);
            let next = if g.is_odd() { i + 1 } else { i };
            self.basis_rec(next, remaining - g.degree, cur, out);
            cur.pop();
        }
    }

    pub fn zero(&self) -> Element {
        Element {
            algebra: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> Element {
        self.scalar(self.field().one())
    }

    pub fn scalar(&self, c: Scalar) -> Element {
        self.term(c, Monomial::one())
    }

    pub fn term(&self, c: Scalar, m: Monomial) -> Element {
        let mut e = self.zero();
        e.add_term(m, c);
        e
    }

    pub fn monomial(&self, m: Monomial) -> Element {
        self.term(self.field().one(), m)
    }

    pub fn generator(&self, index: usize) -> Element {
        assert!(index < self.num_generators(), "generator index out of range");
        self.monomial(Monomial(vec![index]))
    }

    pub fn named(&self, name: &str) -> Result<Element> {
        Ok(self.generator(self.index_of(name)?))
    }

    /// Wedge product of the named generators, in the given order.
    pub fn word(&self, names: &[&str]) -> Result<Element> {
        let idx = names.iter().map(|n| self.index_of(n)).collect::<Result<Vec<_>>>()?;
        self.word_indices(&idx)
    }

    /// Wedge product of the indexed generators, in the given order.
    pub fn word_indices(&self, idx: &[usize]) -> Result<Element> {
        let (sign, m) = self.normalize(idx)?;
        Ok(self.term(self.field().from_int(sign as i64), m))
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter().map(|&i| self.0.generators[i].degree).sum()
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.0.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < m.0.len() {
            let g = m.0[i];
            let mut e = 1;
            while i + e < m.0.len() && m.0[i + e] == g {
                e += 1;
            }
            let name = &self.0.generators[g].name;
            parts.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
            i += e;
        }
        parts.join("∧")
    }
}

/// Canonical monomial: sorted generator indices, even generators repeated
/// once per power.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(&index)
    }

    /// Grouped `(index, exponent)` pairs.
    pub fn factors(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for &i in &self.0 {
            match out.last_mut() {
                Some((j, e)) if *j == i => *e += 1,
                _ => out.push((i, 1)),
            }
        }
        out
    }
}

/// Finite linear combination of monomials with nonzero coefficients.
#[derive(Clone)]
pub struct Element {
    algebra: Algebra,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.terms == other.terms
    }
}
impl Eq for Element {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(u32),
    Mixed,
}

impl Element {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.algebra.field().zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let c = if c.field() == self.algebra.field() {
            c
        } else {
            self.algebra.field().one() * c
        };
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> Degree {
        let mut it = self.terms.keys().map(|m| self.algebra.monomial_degree(m));
        let Some(first) = it.next() else {
            return Degree::Zero;
        };
        if it.all(|d| d == first) {
            Degree::Homogeneous(first)
        } else {
            Degree::Mixed
        }
    }

    /// Degree of a homogeneous element; `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        match self.degree() {
            Degree::Homogeneous(d) => Some(d),
            _ => None,
        }
    }

    /// True when the element is zero or homogeneous of degree `k`.
    pub fn has_degree(&self, k: u32) -> bool {
        matches!(self.degree(), Degree::Zero) || self.degree() == Degree::Homogeneous(k)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = self.algebra.zero();
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn wedge(&self, other: &Element) -> Result<Element> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = self.algebra.zero();
        let mut word = Vec::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                word.clear();
                word.extend_from_slice(&ma.0);
                word.extend_from_slice(&mb.0);
                let (sign, m) = self.algebra.normalize(&word)?;
                if sign == 0 {
                    continue;
                }
                let c = ca * cb;
                out.add_term(m, if sign < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Element {
        let mut acc = self.algebra.one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Applies the algebra homomorphism determined by generator images
    /// (given in some target algebra, all homogeneous).
    pub fn substitute(&self, images: &[Element], target: &Algebra) -> Result<Element> {
        if images.len() != self.algebra.num_generators() {
            return Err(Error::Dimension(format!(
                "{} generator images for {} generators",
                images.len(),
                self.algebra.num_generators()
            )));
        }
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut prod = target.scalar(c.clone());
            for &i in &m.0 {
                prod = prod.wedge(&images[i])?;
                if prod.is_zero() {
                    break;
                }
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Element {
        let mut out = self.algebra.zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Coordinates against a list of monomials (all other terms must vanish).
    pub fn coordinates(&self, monomials: &[Monomial]) -> Option<Vec<Scalar>> {
        let field = self.algebra.field();
        let mut v = vec![field.zero(); monomials.len()];
        let mut seen = 0;
        for (i, m) in monomials.iter().enumerate() {
            if let Some(c) = self.terms.get(m) {
                v[i] = c.clone();
                seen += 1;
            }
        }
        (seen == self.terms.len()).then_some(v)
    }

    pub fn from_coordinates(algebra: &Algebra, monomials: &[Monomial], coords: &[Scalar]) -> Element {
        let mut out = algebra.zero();
        for (m, c) in monomials.iter().zip(coords) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.clone(),
                monomial: monomial_to_json(&self.algebra, m),
            })
            .collect()
    }

    pub fn from_json(algebra: &Algebra, terms: &[TermJson]) -> Result<Element> {
        let mut out = algebra.zero();
        for t in terms {
            let mut word = Vec::new();
            for f in &t.monomial {
                match f {
                    FactorJson::Name(n) => word.push(algebra.index_of(n)?),
                    FactorJson::Power(n, e) => {
                        let i = algebra.index_of(n)?;
                        word.extend(std::iter::repeat_n(i, *e as usize));
                    }
                }
            }
            let (sign, m) = algebra.normalize(&word)?;
            let c = algebra.field().embed(&t.coeff)?;
            out.add_term(m, c.scale(&crate::scalar::rational_int(sign as i64)));
        }
        Ok(out)
    }
}

fn monomial_to_json(algebra: &Algebra, m: &Monomial) -> Vec<FactorJson> {
    m.factors()
        .into_iter()
        .map(|(i, e)| {
            let name = algebra.generators()[i].name.clone();
            if e == 1 {
                FactorJson::Name(name)
            } else {
                FactorJson::Power(name, e)
            }
        })
        .collect()
}

/// One factor of a JSON monomial: `"x1"` or `["y", 2]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FactorJson {
    Name(String),
    Power(String, u32),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub coeff: Scalar,
    pub monomial: Vec<FactorJson>,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mono = self.algebra.format_monomial(m);
            let cs = c.to_string();
            let (neg, body) = match c.as_rational() {
                Some(r) if num::Signed::is_negative(r) => (true, (-c).to_string()),
                Some(_) => (false, cs),
                None => (false, format!("({cs})")),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if m.0.is_empty() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{body}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert!(self.algebra == rhs.algebra, "adding elements of different algebras");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.map_coefficients(|c| -c)
    }
}

/// Wedge product; panics on an algebra mismatch (use [`Element::wedge`] for
/// a checked product).
impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.wedge(rhs).expect("wedge of elements from different algebras")
    }
}

macro_rules! forward_element {
    ($tr:ident, $m:ident) => {
        impl $tr for Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Element> for Element {
            type Output = Element;
            fn $m(self, rhs: &Element) -> Element {
                (&self).$m(rhs)
            }
        }
    };
}
forward_element!(Add, add);
forward_element!(Sub, sub);
forward_element!(Mul, mul);

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}
