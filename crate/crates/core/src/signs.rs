//! Koszul signs, permutations and shuffles.

use std::fmt;

use crate::error::{Error, Result};
use crate::qlinalg::Scalar;

/// A permutation of `{0..n}` stored by images: position `i` of the permuted
/// sequence holds the element originally at `image[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() || seen[x] {
                return Err(Error::NotAPermutation(image));
            }
            seen[x] = true;
        }
        Ok(Permutation(image))
    }

    /// Builds from one-based images, as permutations are usually written.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::NotAPermutation(image.to_vec()));
        }
        Permutation::new(image.iter().map(|x| x - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// Rearranges `items` so that slot `i` receives `items[self(i)]`.
    pub fn apply<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.0.iter().map(|&i| items[i].clone()).collect()
    }

    pub fn signature(&self) -> i64 {
        if self.inversions().count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Pairs of original elements `a < b` that end up in reversed order.
    fn inversions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).flat_map(move |i| {
            (i + 1..n).filter_map(move |j| {
                let (a, b) = (self.0[i], self.0[j]);
                (a > b).then_some((b, a))
            })
        })
    }

    /// Every permutation of `n` elements in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Sign acquired by rearranging graded symbols `x_0 .. x_{n-1}` of the given
/// degrees into `x_{σ(0)} .. x_{σ(n-1)}`: each inverted pair contributes
/// `(-1)^{|x_a||x_b|}`.
pub fn koszul_sign(perm: &Permutation, degrees: &[i64]) -> Result<i64> {
    if perm.len() != degrees.len() {
        return Err(Error::LengthMismatch {
            perm: perm.len(),
            degrees: degrees.len(),
        });
    }
    Ok(koszul_unchecked(perm, degrees))
}

pub(crate) fn koszul_unchecked(perm: &Permutation, degrees: &[i64]) -> i64 {
    let odd = perm
        .inversions()
        .filter(|&(a, b)| (degrees[a] * degrees[b]).rem_euclid(2) == 1)
        .count();
    if odd % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `signature(σ) · koszul_sign(σ, degrees)`, the sign of graded
/// skew-symmetrisation.
pub fn signed_koszul(perm: &Permutation, degrees: &[i64]) -> Result<i64> {
    Ok(perm.signature() * koszul_sign(perm, degrees)?)
}

/// `signed_koszul` as an exact scalar.
pub fn signed_koszul_scalar(perm: &Permutation, degrees: &[i64]) -> Result<Scalar> {
    Ok(Scalar::from_int(signed_koszul(perm, degrees)?))
}

/// All `(p, q)` shuffles: permutations increasing on the first `p` and on the
/// last `q` slots, in lexicographic order of the first block.
pub fn shuffles(p: usize, q: usize) -> Vec<Permutation> {
    let n = p + q;
    let mut out = Vec::new();
    for first in combinations(n, p) {
        let mut image = first.clone();
        image.extend((0..n).filter(|x| !first.contains(x)));
        out.push(Permutation(image));
    }
    out
}

/// The `(p, q)` shuffles fixing the first element.
pub fn anchored_shuffles(p: usize, q: usize) -> Result<Vec<Permutation>> {
    if p == 0 {
        return Err(Error::InvalidArgument(
            "anchored shuffles need a nonempty first block".into(),
        ));
    }
    Ok(shuffles(p, q).into_iter().filter(|s| s.0[0] == 0).collect())
}

/// All `k`-subsets of `{0..n}` as increasing vectors, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Stable sorting permutation of `keys`: slot `i` of the sorted sequence holds
/// `keys[perm(i)]`.
pub fn sorting_permutation<T: Ord>(keys: &[T]) -> Permutation {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    Permutation(idx)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent route: bubble-sort the arrangement back into place with
    /// adjacent transpositions, multiplying `(-1)^{pq}` per swap.
    fn koszul_by_transpositions(perm: &Permutation, degrees: &[i64]) -> i64 {
        let mut seq: Vec<usize> = perm.image().to_vec();
        let mut sign = 1;
        let n = seq.len();
        for i in 0..n {
            for j in 0..n - 1 - i {
                if seq[j] > seq[j + 1] {
                    if degrees[seq[j]] * degrees[seq[j + 1]] % 2 != 0 {
                        sign = -sign;
                    }
                    seq.swap(j, j + 1);
                }
            }
        }
        sign
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&Permutation::identity(3), &[1, 3, 5]).unwrap(), 1);
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(koszul_sign(&swap, &[1, 1]).unwrap(), -1);
        let cyc = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        // inverted pairs: (x1,x2) degrees 1*2 even, (x1,x3) degrees 1*1 odd
        assert_eq!(koszul_sign(&cyc, &[1, 2, 1]).unwrap(), -1);
        assert_eq!(koszul_by_transpositions(&cyc, &[1, 2, 1]), -1);
        assert!(koszul_sign(&swap, &[1]).is_err());
    }

    #[test]
    fn signed_koszul_examples() {
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(signed_koszul(&Permutation::identity(2), &[1, 1]).unwrap(), 1);
        assert_eq!(signed_koszul(&swap, &[2, 4]).unwrap(), -1);
        assert_eq!(signed_koszul(&swap, &[1, 3]).unwrap(), 1);
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 1).len(), 2);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert_eq!(shuffles(0, 3), vec![Permutation::identity(3)]);
        assert_eq!(anchored_shuffles(1, 1).unwrap(), vec![Permutation::identity(2)]);
        assert_eq!(anchored_shuffles(2, 2).unwrap().len(), 3);
        assert_eq!(anchored_shuffles(1, 0).unwrap(), vec![Permutation::identity(1)]);
        assert!(anchored_shuffles(0, 2).is_err());
    }

    #[test]
    fn shuffles_are_increasing_on_blocks() {
        for p in 0..5 {
            for q in 0..5 {
                let all = shuffles(p, q);
                assert_eq!(all.len() as u64, binomial((p + q) as u64, p as u64));
                for s in &all {
                    assert!(s.image()[..p].windows(2).all(|w| w[0] < w[1]));
                    assert!(s.image()[p..].windows(2).all(|w| w[0] < w[1]));
                }
                if p >= 1 {
                    let anchored = anchored_shuffles(p, q).unwrap();
                    assert_eq!(anchored.len() as u64, binomial((p + q - 1) as u64, (p - 1) as u64));
                    assert!(anchored.iter().all(|s| all.contains(s)));
                }
            }
        }
    }

    #[test]
    fn all_permutations() {
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(0).len(), 1);
        let sig: i64 = Permutation::all(4).iter().map(Permutation::signature).sum();
        assert_eq!(sig, 0);
    }

    fn perm_and_degrees() -> impl Strategy<Value = (Permutation, Permutation, Vec<i64>)> {
        (1usize..=7).prop_flat_map(|n| {
            (
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(0i64..6, n),
            )
                .prop_map(|(a, b, d)| (Permutation(a), Permutation(b), d))
        })
    }

    proptest! {
        #[test]
        fn koszul_composition((s, t, d) in perm_and_degrees()) {
            // rearranging by t, then rearranging the result by s
            let total = t.compose(&s);
            let dt = t.apply(&d);
            prop_assert_eq!(
                koszul_sign(&total, &d).unwrap(),
                koszul_sign(&s, &dt).unwrap() * koszul_sign(&t, &d).unwrap()
            );
        }

        #[test]
        fn koszul_matches_transpositions((s, _t, d) in perm_and_degrees()) {
            prop_assert_eq!(koszul_sign(&s, &d).unwrap(), koszul_by_transpositions(&s, &d));
        }
    }
}
