//! Quillen chains and the coalgebra form of an L∞ structure on homology.
//!
//! Wedge words are products of suspended letters. A letter `(n, j)` stands
//! for the suspension of the `j`-th basis element in degree `n` (of `L` or of
//! `H`), so its suspended degree is `n + 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::dgl::{FreeDgl, HomologyClass};
use crate::error::{Error, Result};
use crate::qlinalg::{self, Scalar};
use crate::transfer::{epsilon_sign, LInftyTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    /// degree before suspension
    pub degree: i64,
    pub index: usize,
}

impl Letter {
    pub fn new(degree: i64, index: usize) -> Self {
        Letter { degree, index }
    }

    pub fn suspended_degree(&self) -> i64 {
        self.degree + 1
    }
}

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn sign_of(odd_exponent: bool) -> i64 {
    if odd_exponent {
        -1
    } else {
        1
    }
}

/// A graded-commutative product of letters, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgeWord(Vec<Letter>);

impl WedgeWord {
    /// Sorts the letters, returning the Koszul sign of the reordering, or
    /// `None` when an odd letter repeats.
    pub fn canonical(mut letters: Vec<Letter>) -> Option<(i64, WedgeWord)> {
        let mut sign = 1;
        for i in 1..letters.len() {
            let mut j = i;
            while j > 0 && letters[j - 1] > letters[j] {
                let (a, b) = (letters[j - 1], letters[j]);
                if odd(a.suspended_degree()) && odd(b.suspended_degree()) {
                    sign = -sign;
                }
                letters.swap(j - 1, j);
                j -= 1;
            }
        }
        if letters.windows(2).any(|w| w[0] == w[1] && odd(w[0].suspended_degree())) {
            return None;
        }
        Some((sign, WedgeWord(letters)))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total suspended degree.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(Letter::suspended_degree).sum()
    }
}

impl fmt::Display for WedgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| format!("s{}_{}", l.degree, l.index)).collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("∧"))
        }
    }
}

/// A linear combination of wedge words.
pub type WedgeSum = BTreeMap<WedgeWord, Scalar>;

fn add_letters(sum: &mut WedgeSum, letters: Vec<Letter>, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let Some((sign, w)) = WedgeWord::canonical(letters) else { return };
    let entry = sum.entry(w.clone()).or_insert_with(Scalar::zero);
    *entry = &*entry + &(c * &Scalar::from_int(sign));
    if entry.is_zero() {
        sum.remove(&w);
    }
}

fn add_sum(acc: &mut WedgeSum, other: &WedgeSum, c: &Scalar) {
    for (w, x) in other {
        add_letters(acc, w.0.clone(), &(x * c));
    }
}

/// `(-1)^{n_ij}` with `w = (-1)^{n_ij} w_i ∧ w_j ∧ rest`.
fn extraction_sign(letters: &[Letter], chosen: &[usize]) -> i64 {
    let mut sign = 1;
    for &c in chosen {
        // letters before c that were not already moved to the front
        let before: i64 = letters[..c]
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen.contains(i))
            .map(|(_, l)| l.suspended_degree())
            .sum();
        if odd(before * letters[c].suspended_degree()) {
            sign = -sign;
        }
    }
    sign
}

fn coordinate_letters(dgl: &FreeDgl, x: &crate::lie::LieElement, degree: i64) -> Result<Vec<(Letter, Scalar)>> {
    if x.is_zero() || degree < 1 {
        return Ok(Vec::new());
    }
    let coords = dgl.coordinates(x)?;
    Ok(coords
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (Letter::new(degree, j), c))
        .collect())
}

/// The Quillen differential `δ_1 + δ_2` on a wedge word over the Lie basis
/// of `L`.
pub fn quillen_delta(dgl: &FreeDgl, w: &WedgeWord) -> Result<WedgeSum> {
    let letters = w.letters();
    let mut elements = Vec::with_capacity(letters.len());
    for l in letters {
        let space = dgl.space(l.degree)?;
        let x = space
            .elements()
            .get(l.index)
            .ok_or_else(|| Error::InvalidArgument(format!("no basis element {} in degree {}", l.index, l.degree)))?;
        elements.push(x.clone());
    }
    let mut out = WedgeSum::new();
    // δ_1
    let mut n_i = 0i64;
    for (i, l) in letters.iter().enumerate() {
        let dx = dgl.apply_differential(&elements[i]);
        let c = Scalar::from_int(-sign_of(odd(n_i)));
        for (m, a) in coordinate_letters(dgl, &dx, l.degree - 1)? {
            let mut new = letters.to_vec();
            new[i] = m;
            add_letters(&mut out, new, &(&c * &a));
        }
        n_i += l.suspended_degree();
    }
    // δ_2
    for i in 0..letters.len() {
        for j in i + 1..letters.len() {
            let b = dgl.bracket(&elements[i], &elements[j])?;
            let degree = letters[i].degree + letters[j].degree;
            let sign = -extraction_sign(letters, &[i, j]) * sign_of(odd(letters[i].degree));
            let rest: Vec<Letter> = letters
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != i && t != j)
                .map(|(_, l)| *l)
                .collect();
            for (m, a) in coordinate_letters(dgl, &b, degree)? {
                let mut new = vec![m];
                new.extend_from_slice(&rest);
                add_letters(&mut out, new, &(&a * &Scalar::from_int(sign)));
            }
        }
    }
    Ok(out)
}

/// Applies `delta` linearly to a sum.
pub fn apply_linear<F>(sum: &WedgeSum, mut delta: F) -> Result<WedgeSum>
where
    F: FnMut(&WedgeWord) -> Result<WedgeSum>,
{
    let mut out = WedgeSum::new();
    for (w, c) in sum {
        add_sum(&mut out, &delta(w)?, c);
    }
    Ok(out)
}

/// Nonzero wedge words of length `1..=max_len` over a graded basis with the
/// given dimensions, with unsuspended degrees summing to at most `max_degree`.
pub fn enumerate_words(dims: &BTreeMap<i64, usize>, max_len: usize, max_degree: i64) -> Vec<WedgeWord> {
    let letters: Vec<Letter> = dims
        .iter()
        .flat_map(|(&n, &d)| (0..d).map(move |j| Letter::new(n, j)))
        .collect();
    fn rec(letters: &[Letter], start: usize, left: i64, max_len: usize, cur: &mut Vec<Letter>, out: &mut Vec<WedgeWord>) {
        if !cur.is_empty() {
            if let Some((_, w)) = WedgeWord::canonical(cur.clone()) {
                out.push(w);
            }
        }
        if cur.len() == max_len {
            return;
        }
        for (g, l) in letters.iter().enumerate().skip(start) {
            if l.degree > left {
                break;
            }
            cur.push(*l);
            rec(letters, g, left - l.degree, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&letters, 0, max_degree, max_len, &mut Vec::new(), &mut out);
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSquaredReport {
    pub words_checked: usize,
    pub failures: Vec<WedgeWord>,
}

impl DeltaSquaredReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `δ² = 0` on the Quillen chains of `L` for every word of length at
/// most `max_len` whose letters have total degree at most `max_degree`.
pub fn check_quillen_delta_squared(dgl: &FreeDgl, max_len: usize, max_degree: i64) -> Result<DeltaSquaredReport> {
    if max_degree > dgl.cap() as i64 {
        return Err(Error::DegreeCap {
            needed: max_degree,
            cap: dgl.cap(),
            context: "words of the Quillen chains".into(),
        });
    }
    let mut dims = BTreeMap::new();
    for n in 1..=max_degree {
        dims.insert(n, dgl.dim(n)?);
    }
    let words = enumerate_words(&dims, max_len, max_degree);
    let mut failures = Vec::new();
    for w in &words {
        let once = quillen_delta(dgl, w)?;
        let twice = apply_linear(&once, |v| quillen_delta(dgl, v))?;
        if !twice.is_empty() {
            failures.push(w.clone());
        }
    }
    Ok(DeltaSquaredReport {
        words_checked: words.len(),
        failures,
    })
}

/// The corestriction `h_k: Λ^k sH → sH` of one bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coderivation {
    arity: usize,
    /// `h_k(w) = s y` is stored as `y`
    values: BTreeMap<WedgeWord, HomologyClass>,
    cap: u32,
}

impl Coderivation {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `y` with `h_k(w) = s y`; `None` when the value lies beyond the cap.
    pub fn value(&self, w: &WedgeWord) -> Result<Option<&HomologyClass>> {
        if w.len() != self.arity {
            return Err(Error::InvalidArgument(format!(
                "word of length {} for a coderivation of arity {}",
                w.len(),
                self.arity
            )));
        }
        Ok(self.values.get(w))
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(HomologyClass::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&WedgeWord, &HomologyClass)> {
        self.values.iter()
    }
}

fn table_letter(table: &LInftyTable, g: usize) -> Letter {
    let (n, j) = table.basis()[g];
    Letter::new(n, j)
}

/// `h_k = (-1)^{k(k-1)/2} s ∘ ℓ_k ∘ (s^{-1})^{⊗k}`. Moving the `k`
/// desuspensions past the arguments costs `(-1)^{Σ (k-i)|sx_i|}`, so on a
/// sorted word the total sign is `ε(x_1, .., x_k)`.
pub fn bracket_to_coderivation(table: &LInftyTable, k: usize) -> Result<Coderivation> {
    if k < 2 || k > table.max_arity() {
        return Err(Error::InvalidArgument(format!(
            "the table covers arities 2..={}, not {k}",
            table.max_arity()
        )));
    }
    let mut values = BTreeMap::new();
    for (arity, tuple, v) in table.entries() {
        if arity != k {
            continue;
        }
        let letters: Vec<Letter> = tuple.iter().map(|&g| table_letter(table, g)).collect();
        // tuples with a repeated odd suspended letter vanish in the wedge
        let Some((sign, w)) = WedgeWord::canonical(letters.clone()) else { continue };
        debug_assert_eq!(sign, 1);
        let eps = epsilon_sign(&letters.iter().map(|l| l.degree).collect::<Vec<_>>());
        values.insert(w, v.scale(&Scalar::from_int(eps)));
    }
    Ok(Coderivation {
        arity: k,
        values,
        cap: table.cap(),
    })
}

/// `ℓ_k = s^{-1} ∘ h_k ∘ s^{⊗k}` on a tuple of table basis indices, in any
/// order.
pub fn coderivation_to_bracket(cod: &Coderivation, table: &LInftyTable, tuple: &[usize]) -> Result<Option<HomologyClass>> {
    let letters: Vec<Letter> = tuple.iter().map(|&g| table_letter(table, g)).collect();
    let degrees: Vec<i64> = letters.iter().map(|l| l.degree).collect();
    let out_degree = degrees.iter().sum::<i64>() + tuple.len() as i64 - 2;
    let dim = table.homology_dims().get(&out_degree).copied().unwrap_or(0);
    // s^{⊗k}(x_1 ⊗ .. ⊗ x_k) = (-1)^{Σ (k-i)|x_i|} sx_1 ∧ .. ∧ sx_k
    let eps = epsilon_sign(&degrees);
    let Some((sign, w)) = WedgeWord::canonical(letters) else {
        return Ok(Some(HomologyClass::zero(out_degree, dim)));
    };
    if out_degree > cod.cap as i64 - 1 {
        return Ok(None);
    }
    Ok(cod
        .value(&w)?
        .map(|y| y.scale(&Scalar::from_int(eps * sign))))
}

/// `Σ_k δ_k` on a word over `sH`, with `δ_k` extended from `h_k` by
/// extracting each `k`-subset of letters to the front. Errors if a needed
/// value lies beyond the cap.
pub fn delta_on_wedge(cods: &[Coderivation], w: &WedgeWord) -> Result<WedgeSum> {
    let letters = w.letters();
    let p = letters.len();
    let mut out = WedgeSum::new();
    for cod in cods {
        let k = cod.arity;
        if k > p {
            continue;
        }
        for chosen in crate::signs::combinations(p, k) {
            let picked: Vec<Letter> = chosen.iter().map(|&i| letters[i]).collect();
            let Some((s0, sub)) = WedgeWord::canonical(picked) else { continue };
            let y = cod.value(&sub)?.ok_or_else(|| Error::DegreeCap {
                needed: sub.degree() - 2 + 1,
                cap: cod.cap,
                context: format!("value of h_{k} on {sub}"),
            })?;
            let sign = s0 * extraction_sign(letters, &chosen);
            let rest: Vec<Letter> = (0..p).filter(|i| !chosen.contains(i)).map(|i| letters[i]).collect();
            for (j, c) in y.coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut new = vec![Letter::new(y.degree, j)];
                new.extend_from_slice(&rest);
                add_letters(&mut out, new, &(c * &Scalar::from_int(sign)));
            }
        }
    }
    Ok(out)
}

/// All coderivations of a table, arities `2..=max_arity`.
pub fn coderivations(table: &LInftyTable) -> Result<Vec<Coderivation>> {
    (2..=table.max_arity()).map(|k| bracket_to_coderivation(table, k)).collect()
}

/// Checks `(Σ δ_k)² = 0` on `ΛsH` for words of length at most `max_len` whose
/// values all lie below the cap and which need no arity above the table's.
pub fn check_transferred_delta_squared(table: &LInftyTable, max_len: usize) -> Result<DeltaSquaredReport> {
    let cods = coderivations(table)?;
    let top = table.cap() as i64 - 1;
    let max_len = max_len.min(table.max_arity());
    let mut words_checked = 0;
    let mut failures = Vec::new();
    for w in enumerate_words(table.homology_dims(), max_len, top) {
        // the largest output degree reached is Σ|x_i| + p - 2
        if w.degree() - 2 > top || w.len() < 2 {
            continue;
        }
        words_checked += 1;
        let once = delta_on_wedge(&cods, &w)?;
        let twice = apply_linear(&once, |v| delta_on_wedge(&cods, v))?;
        if !twice.is_empty() {
            failures.push(w);
        }
    }
    Ok(DeltaSquaredReport { words_checked, failures })
}

/// A solution `Φ ∈ Λ^{≤k-1} sH` of `δ(sx_1 ∧ .. ∧ sx_k + Φ) = sx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCertificate {
    pub phi: WedgeSum,
    /// number of unknowns (wedge words of length `2..k`)
    pub unknowns: usize,
    /// number of equations (target words)
    pub equations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiOutcome {
    Solved(PhiCertificate),
    NoSolution { unknowns: usize, equations: usize },
    /// `x` has the wrong degree for the arguments.
    DegreeMismatch,
}

/// `sx_1 ∧ .. ∧ sx_k` expanded multilinearly over the homology basis.
fn wedge_of_classes(args: &[HomologyClass]) -> WedgeSum {
    let mut acc: Vec<(Vec<Letter>, Scalar)> = vec![(Vec::new(), Scalar::one())];
    for x in args {
        let mut next = Vec::new();
        for (letters, c) in &acc {
            for (j, a) in x.coords.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut l = letters.clone();
                l.push(Letter::new(x.degree, j));
                next.push((l, c * a));
            }
        }
        acc = next;
    }
    let mut out = WedgeSum::new();
    for (letters, c) in acc {
        add_letters(&mut out, letters, &c);
    }
    out
}

fn suspended_class(x: &HomologyClass) -> WedgeSum {
    let mut out = WedgeSum::new();
    for (j, c) in x.coords.iter().enumerate() {
        add_letters(&mut out, vec![Letter::new(x.degree, j)], c);
    }
    out
}

/// Solves `δ(sx_1 ∧ .. ∧ sx_k + Φ) = sx` exactly over the wedge words of
/// `ΛsH` of the right degree.
pub fn solve_phi(table: &LInftyTable, args: &[HomologyClass], x: &HomologyClass) -> Result<PhiOutcome> {
    let k = args.len();
    if k < 2 || k > table.max_arity() {
        return Err(Error::InvalidArgument(format!(
            "{k} arguments for a table of arity up to {}",
            table.max_arity()
        )));
    }
    let in_degree: i64 = args.iter().map(|a| a.degree).sum();
    if x.degree != in_degree + k as i64 - 2 {
        return Ok(PhiOutcome::DegreeMismatch);
    }
    if x.degree > table.cap() as i64 - 1 {
        return Err(Error::DegreeCap {
            needed: x.degree + 1,
            cap: table.cap(),
            context: "target class of the certificate".into(),
        });
    }
    let cods = coderivations(table)?;
    let total = in_degree + k as i64; // suspended degree of the word
    // Σ c_w δ(w) = sx - δ(sx_1 ∧ .. ∧ sx_k)
    let mut rhs = suspended_class(x);
    let top = apply_linear(&wedge_of_classes(args), |w| delta_on_wedge(&cods, w))?;
    add_sum(&mut rhs, &top, &-Scalar::one());

    let unknowns: Vec<WedgeWord> = enumerate_words(table.homology_dims(), k - 1, total)
        .into_iter()
        .filter(|w| w.len() >= 2 && w.degree() == total)
        .collect();
    let images: Vec<WedgeSum> = unknowns.iter().map(|w| delta_on_wedge(&cods, w)).collect::<Result<_>>()?;
    let mut rows: BTreeMap<WedgeWord, usize> = BTreeMap::new();
    for w in images.iter().flat_map(|s| s.keys()).chain(rhs.keys()) {
        let n = rows.len();
        rows.entry(w.clone()).or_insert(n);
    }
    let columns: Vec<Vec<Scalar>> = images
        .iter()
        .map(|s| {
            let mut col = vec![Scalar::zero(); rows.len()];
            for (w, c) in s {
                col[rows[w]] = c.clone();
            }
            col
        })
        .collect();
    let mut b = vec![Scalar::zero(); rows.len()];
    for (w, c) in &rhs {
        b[rows[w]] = c.clone();
    }
    let equations = rows.len();
    if unknowns.is_empty() {
        return Ok(if b.iter().all(Scalar::is_zero) {
            PhiOutcome::Solved(PhiCertificate {
                phi: WedgeSum::new(),
                unknowns: 0,
                equations,
            })
        } else {
            PhiOutcome::NoSolution { unknowns: 0, equations }
        });
    }
    match qlinalg::solve_raw(&columns, equations, &b) {
        None => Ok(PhiOutcome::NoSolution {
            unknowns: unknowns.len(),
            equations,
        }),
        Some(sol) => {
            let mut phi = WedgeSum::new();
            for (w, c) in unknowns.iter().zip(sol) {
                add_letters(&mut phi, w.0.clone(), &c);
            }
            Ok(PhiOutcome::Solved(PhiCertificate {
                phi,
                unknowns: unknowns.len(),
                equations,
            }))
        }
    }
}

/// Checks a certificate: `δ(sx_1 ∧ .. ∧ sx_k + Φ) = sx`.
pub fn check_phi(table: &LInftyTable, args: &[HomologyClass], x: &HomologyClass, phi: &WedgeSum) -> Result<bool> {
    let cods = coderivations(table)?;
    let mut chain = wedge_of_classes(args);
    add_sum(&mut chain, phi, &Scalar::one());
    let d = apply_linear(&chain, |w| delta_on_wedge(&cods, w))?;
    Ok(d == suspended_class(x))
}

/// Length of the longest word in a sum, used to check the word-length
/// filtration.
pub fn max_length(sum: &WedgeSum) -> usize {
    sum.keys().map(WedgeWord::len).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::retract::Retract;
    use crate::signs::{koszul_sign, Permutation};
    use crate::transfer::{TableValue, Transfer};
    use proptest::prelude::*;

    fn known(v: TableValue) -> Option<HomologyClass> {
        match v {
            TableValue::Known(c) => Some(c),
            TableValue::BeyondCap => None,
        }
    }

    fn l(d: i64, j: usize) -> Letter {
        Letter::new(d, j)
    }

    #[test]
    fn odd_letters_anticommute() {
        // suspended degree 3
        let (s, w) = WedgeWord::canonical(vec![l(2, 1), l(2, 0)]).unwrap();
        assert_eq!(s, -1);
        assert_eq!(w.letters(), &[l(2, 0), l(2, 1)]);
        assert!(WedgeWord::canonical(vec![l(2, 0), l(2, 0)]).is_none());
        // suspended degree 2 letters commute and may repeat
        let (s, _) = WedgeWord::canonical(vec![l(1, 1), l(1, 0)]).unwrap();
        assert_eq!(s, 1);
        assert!(WedgeWord::canonical(vec![l(1, 0), l(1, 0)]).is_some());
    }

    #[test]
    fn quillen_delta_on_two_letters() {
        let dgl = fixtures::example37(None).unwrap();
        let v1 = Letter::new(2, 0);
        let v2 = Letter::new(2, 1);
        let w = WedgeWord::canonical(vec![v1, v2]).unwrap().1;
        let d = quillen_delta(&dgl, &w).unwrap();
        // -(-1)^{|v1|} s[v1, v2] with |v1| = 2
        let b = dgl
            .bracket(&dgl.generator_by_name("v1").unwrap(), &dgl.generator_by_name("v2").unwrap())
            .unwrap();
        let mut want = WedgeSum::new();
        for (m, c) in coordinate_letters(&dgl, &b, 4).unwrap() {
            add_letters(&mut want, vec![m], &-c);
        }
        assert_eq!(d, want);
        // a length-1 cycle goes to zero
        let single = WedgeWord::canonical(vec![v1]).unwrap().1;
        assert!(quillen_delta(&dgl, &single).unwrap().is_empty());
    }

    #[test]
    fn quillen_delta_squares_to_zero() {
        let t1 = fixtures::t1(None).unwrap();
        assert!(check_quillen_delta_squared(&t1, 3, 8).unwrap().passed());
        let t0 = fixtures::t0(None).unwrap();
        assert!(check_quillen_delta_squared(&t0, 3, 7).unwrap().passed());
        let m = crate::whitehead::build_fat_wedge(&[3, 3, 3], None).unwrap();
        let r = check_quillen_delta_squared(m.dgl(), 3, 8).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        assert!(r.words_checked > 100);
    }

    #[test]
    fn coderivation_round_trip_and_global_sign() {
        let dgl = fixtures::example37(None).unwrap();
        let r = fixtures::example37_table_retract(dgl).unwrap();
        let table = Transfer::new(&r).table(4).unwrap();
        for k in 2..=4 {
            let cod = bracket_to_coderivation(&table, k).unwrap();
            for (arity, tuple, v) in table.entries() {
                if arity != k {
                    continue;
                }
                let mut rev = tuple.to_vec();
                rev.reverse();
                let back = coderivation_to_bracket(&cod, &table, &rev).unwrap().unwrap();
                assert_eq!(known(table.get(&rev).unwrap()).unwrap(), back);
                assert_eq!(&coderivation_to_bracket(&cod, &table, tuple).unwrap().unwrap(), v);
            }
        }
        // k = 2 with |x| = 2: ε = (-1)^2 = 1, so h_2(sv1 ∧ sv2) = s ℓ_2(v1, v2)
        let cod = bracket_to_coderivation(&table, 2).unwrap();
        let z = table.global_index(5, 0).unwrap();
        let w = WedgeWord::canonical(vec![table_letter(&table, z), table_letter(&table, z)]).unwrap().1;
        let v = known(table.get(&[z, z]).unwrap()).unwrap();
        assert_eq!(cod.value(&w).unwrap().unwrap(), &v.scale(&Scalar::from_int(epsilon_sign(&[5, 5]))));
    }

    #[test]
    fn transferred_delta_squares_to_zero() {
        let dgl = fixtures::example37(None).unwrap();
        let r = fixtures::example37_table_retract(dgl).unwrap();
        let table = Transfer::new(&r).table(4).unwrap();
        let report = check_transferred_delta_squared(&table, 4).unwrap();
        assert!(report.passed(), "{:?}", report.failures.first());
        assert!(report.words_checked > 10);
    }

    #[test]
    fn filtration_and_small_cases() {
        let t1 = fixtures::t1(None).unwrap();
        let r = Retract::standard(t1).unwrap();
        let table = Transfer::new(&r).table(3).unwrap();
        let cods = coderivations(&table).unwrap();
        let a = table.global_index(2, 0).unwrap();
        let b = table.global_index(2, 1).unwrap();
        let la = table_letter(&table, a);
        let lb = table_letter(&table, b);
        let w = WedgeWord::canonical(vec![la, lb]).unwrap().1;
        let d = delta_on_wedge(&cods[..1], &w).unwrap();
        assert!(max_length(&d) <= 1);
        // ℓ_2(a, b) = 0 in S^3 x S^3, so Φ = 0 solves for x = 0
        let x = HomologyClass::zero(2 + 2, table.homology_dims().get(&4).copied().unwrap_or(0));
        let args = [HomologyClass::unit(2, 2, 0), HomologyClass::unit(2, 2, 1)];
        let PhiOutcome::Solved(c) = solve_phi(&table, &args, &x).unwrap() else { panic!() };
        assert!(c.phi.is_empty());
        assert!(check_phi(&table, &args, &x, &c.phi).unwrap());
        let wrong = HomologyClass::zero(3, 0);
        assert_eq!(solve_phi(&table, &args, &wrong).unwrap(), PhiOutcome::DegreeMismatch);
    }

    #[test]
    fn extraction_sign_of_two_odd_letters() {
        // word sa ∧ sb with odd suspended degrees: moving b to the front
        let letters = [l(2, 0), l(2, 1)];
        assert_eq!(extraction_sign(&letters, &[1]), -1);
        assert_eq!(extraction_sign(&letters, &[0, 1]), 1);
    }

    proptest! {
        #[test]
        fn canonical_sign_is_koszul(mut degrees in proptest::collection::vec(1i64..5, 1..6), seed in any::<u64>()) {
            degrees.sort();
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let letters: Vec<Letter> = degrees.iter().enumerate().map(|(j, &d)| Letter::new(d, j)).collect();
            let mut order: Vec<usize> = (0..letters.len()).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let perm = Permutation::new(order).unwrap();
            let shuffled = perm.apply(&letters);
            let (s1, w1) = WedgeWord::canonical(letters.clone()).unwrap();
            let (s2, w2) = WedgeWord::canonical(shuffled.clone()).unwrap();
            prop_assert_eq!(&w1, &w2);
            prop_assert_eq!(s1, 1);
            let susp: Vec<i64> = letters.iter().map(Letter::suspended_degree).collect();
            prop_assert_eq!(s2, koszul_sign(&perm, &susp).unwrap());
            // normalising again is the identity
            let (s3, w3) = WedgeWord::canonical(w2.letters().to_vec()).unwrap();
            prop_assert_eq!(s3, 1);
            prop_assert_eq!(w3, w2);
        }
    }
}
