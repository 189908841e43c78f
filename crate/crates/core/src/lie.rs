//! Elements of free graded Lie algebras, realised as primitive elements of the
//! tensor algebra.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::qlinalg::Scalar;

pub type GenId = u16;

/// A tensor word: a sequence of generator ids.
pub type Word = Vec<GenId>;

/// A homogeneous element of the tensor algebra on the generators. Every
/// element built from generators by brackets and linear combinations lies in
/// the free Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieElement {
    degree: i64,
    terms: BTreeMap<Word, Scalar>,
}

impl LieElement {
    pub fn zero(degree: i64) -> Self {
        LieElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(id: GenId, degree: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![id], Scalar::one());
        LieElement { degree, terms }
    }

    /// Builds an element from raw terms, dropping zero coefficients. The
    /// caller guarantees every word has total degree `degree`.
    pub fn from_terms(degree: i64, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut out = LieElement::zero(degree);
        for (w, c) in terms {
            out.add_term(w, &c);
        }
        out
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, w: &[GenId]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    fn check_degree(&self, other: &LieElement) {
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "adding elements of degrees {} and {}",
            self.degree,
            other.degree
        );
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &LieElement, c: &Scalar) {
        self.check_degree(other);
        if self.is_zero() {
            self.degree = other.degree;
        }
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), &(x * c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> LieElement {
        if c.is_zero() {
            return LieElement::zero(self.degree);
        }
        LieElement {
            degree: self.degree,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Concatenation product in the tensor algebra (no signs).
    pub fn tensor_mul(&self, other: &LieElement) -> LieElement {
        let mut out = LieElement::zero(self.degree + other.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = Vec::with_capacity(a.len() + b.len());
                w.extend_from_slice(a);
                w.extend_from_slice(b);
                out.add_term(w, &(x * y));
            }
        }
        out
    }

    /// The graded commutator `ab - (-1)^{|a||b|} ba`.
    pub fn bracket(&self, other: &LieElement) -> LieElement {
        let mut out = self.tensor_mul(other);
        let ba = other.tensor_mul(self);
        let sign = Scalar::sign(self.degree * other.degree);
        out.add_scaled(&ba, &-sign);
        out
    }

    /// Splits into components by word length.
    pub fn by_word_length(&self) -> BTreeMap<usize, LieElement> {
        let mut out: BTreeMap<usize, LieElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len())
                .or_insert_with(|| LieElement::zero(self.degree))
                .add_term(w.clone(), c);
        }
        out
    }

    /// Lexicographically smallest word.
    pub fn min_word(&self) -> Option<&Word> {
        self.terms.keys().next()
    }
}

impl Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        self.scale(&-Scalar::one())
    }
}

/// Right-normed bracketing `[w1, [w2, [..., wn]]]` of a word, expanded.
pub fn right_normed(word: &[GenId], degree_of: impl Fn(GenId) -> i64) -> LieElement {
    let mut it = word.iter().rev();
    let last = *it.next().expect("nonempty word");
    let mut acc = LieElement::generator(last, degree_of(last));
    for &g in it {
        acc = LieElement::generator(g, degree_of(g)).bracket(&acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(id: GenId, d: i64) -> LieElement {
        LieElement::generator(id, d)
    }

    #[test]
    fn bracket_sign_rules() {
        let v1 = g(0, 2);
        let v2 = g(1, 2);
        let b = v1.bracket(&v2);
        assert_eq!(b.coeff(&[0, 1]), Scalar::one());
        assert_eq!(b.coeff(&[1, 0]), -Scalar::one());
        let x = g(2, 3);
        assert_eq!(x.bracket(&x).coeff(&[2, 2]), Scalar::from_int(2));
        assert!(v1.bracket(&v1).is_zero());
    }

    #[test]
    fn antisymmetry() {
        let a = g(0, 1);
        let b = g(1, 3);
        let ab = a.bracket(&b);
        let ba = b.bracket(&a);
        // [a,b] = -(-1)^{|a||b|}[b,a] with both degrees odd
        assert_eq!(ab, ba);
        let c = g(2, 2);
        assert_eq!(a.bracket(&c), -&c.bracket(&a));
    }
}
