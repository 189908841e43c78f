//! Exact linear algebra over the rationals on finite, labelled bases.
//!
//! Elimination always pivots on the leftmost nonzero entry and scans rows in
//! index order, so every result (particular solutions, kernel bases,
//! complements) is a deterministic function of the input and the basis order.

mod echelon;
mod scalar;

use std::fmt;
use std::sync::Arc;

pub use echelon::{Echelon, Reduction};
pub use scalar::Scalar;

use crate::error::{Error, Result};

/// An ordered ambient basis with stable string labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    name: String,
    labels: Vec<String>,
}

impl Basis {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Arc<Self> {
        Arc::new(Basis {
            name: name.into(),
            labels,
        })
    }

    /// A basis labelled `e1..en`.
    pub fn standard(name: impl Into<String>, dim: usize) -> Arc<Self> {
        Basis::new(name, (1..=dim).map(|i| format!("e{i}")).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

fn same_basis(a: &Arc<Basis>, b: &Arc<Basis>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::BasisMismatch {
            left: a.name.clone(),
            right: b.name.clone(),
        })
    }
}

/// A coordinate vector in a fixed ambient basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    basis: Arc<Basis>,
    coeffs: Vec<Scalar>,
}

impl Vector {
    pub fn new(basis: Arc<Basis>, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: coeffs.len(),
            });
        }
        Ok(Vector { basis, coeffs })
    }

    pub fn from_ints(basis: Arc<Basis>, xs: &[i64]) -> Result<Self> {
        Vector::new(basis, xs.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn zero(basis: Arc<Basis>) -> Self {
        let coeffs = vec![Scalar::zero(); basis.dim()];
        Vector { basis, coeffs }
    }

    pub fn unit(basis: Arc<Basis>, j: usize) -> Self {
        let mut v = Vector::zero(basis);
        v.coeffs[j] = Scalar::one();
        v
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A linear map stored by columns: column `j` is the image of domain basis
/// vector `j`, written in the codomain basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    domain: Arc<Basis>,
    codomain: Arc<Basis>,
    columns: Vec<Vec<Scalar>>,
}

impl LinearMap {
    pub fn new(domain: Arc<Basis>, codomain: Arc<Basis>, columns: Vec<Vec<Scalar>>) -> Result<Self> {
        if columns.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: columns.len(),
            });
        }
        for c in &columns {
            if c.len() != codomain.dim() {
                return Err(Error::DimensionMismatch {
                    expected: codomain.dim(),
                    found: c.len(),
                });
            }
        }
        Ok(LinearMap {
            domain,
            codomain,
            columns,
        })
    }

    /// Builds a map from a row-major integer matrix.
    pub fn from_rows(domain: Arc<Basis>, codomain: Arc<Basis>, rows: &[Vec<i64>]) -> Result<Self> {
        let mut columns = vec![vec![Scalar::zero(); codomain.dim()]; domain.dim()];
        if rows.len() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                found: rows.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != domain.dim() {
                return Err(Error::DimensionMismatch {
                    expected: domain.dim(),
                    found: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                columns[j][i] = Scalar::from_int(x);
            }
        }
        LinearMap::new(domain, codomain, columns)
    }

    pub fn identity(basis: Arc<Basis>) -> Self {
        let n = basis.dim();
        let columns = (0..n)
            .map(|j| {
                let mut c = vec![Scalar::zero(); n];
                c[j] = Scalar::one();
                c
            })
            .collect();
        LinearMap {
            domain: basis.clone(),
            codomain: basis,
            columns,
        }
    }

    pub fn zero(domain: Arc<Basis>, codomain: Arc<Basis>) -> Self {
        let columns = vec![vec![Scalar::zero(); codomain.dim()]; domain.dim()];
        LinearMap {
            domain,
            codomain,
            columns,
        }
    }

    pub fn domain(&self) -> &Arc<Basis> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Basis> {
        &self.codomain
    }

    pub fn columns(&self) -> &[Vec<Scalar>] {
        &self.columns
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        same_basis(&self.domain, &x.basis)?;
        let out = apply_columns(&self.columns, self.codomain.dim(), &x.coeffs);
        Ok(Vector {
            basis: self.codomain.clone(),
            coeffs: out,
        })
    }

    pub fn rank(&self) -> usize {
        let mut rows = to_rows(&self.columns, self.codomain.dim());
        rref(&mut rows).len()
    }
}

pub(crate) fn apply_columns(columns: &[Vec<Scalar>], out_dim: usize, x: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); out_dim];
    for (c, col) in x.iter().zip(columns) {
        if c.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(col) {
            if !y.is_zero() {
                *o += &(c * y);
            }
        }
    }
    out
}

fn to_rows(columns: &[Vec<Scalar>], rows: usize) -> Vec<Vec<Scalar>> {
    (0..rows)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect()
}

/// In-place reduced row echelon form. Returns the pivot column of each
/// nonzero row, in order; rows past the rank are zero afterwards.
pub fn rref(rows: &mut [Vec<Scalar>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut().skip(c) {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Some `x` with `M x = b`, or `None` when `b` is outside the image. The
/// returned solution is the reduced-echelon particular solution (free
/// variables set to zero).
pub fn solve(m: &LinearMap, b: &Vector) -> Result<Option<Vector>> {
    same_basis(&m.codomain, &b.basis)?;
    Ok(solve_raw(&m.columns, m.codomain.dim(), &b.coeffs).map(|coeffs| Vector {
        basis: m.domain.clone(),
        coeffs,
    }))
}

pub(crate) fn solve_raw(columns: &[Vec<Scalar>], rows: usize, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = columns.len();
    let mut aug: Vec<Vec<Scalar>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Scalar> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][n].clone();
    }
    Some(x)
}

/// A basis of `ker M` in reduced echelon form: one vector per free column,
/// with a one in that column.
pub fn kernel_basis(m: &LinearMap) -> Vec<Vector> {
    kernel_raw(&m.columns, m.codomain.dim())
        .into_iter()
        .map(|coeffs| Vector {
            basis: m.domain.clone(),
            coeffs,
        })
        .collect()
}

pub(crate) fn kernel_raw(columns: &[Vec<Scalar>], rows: usize) -> Vec<Vec<Scalar>> {
    let n = columns.len();
    let mut mat = to_rows(columns, rows);
    let pivots = rref(&mut mat);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&mat[r][f];
            }
            v
        })
        .collect()
}

/// Extends `span` to a basis of the ambient space by greedily adding ambient
/// basis vectors in index order.
pub fn complement(span: &[Vector], within: &Arc<Basis>) -> Result<Vec<Vector>> {
    for v in span {
        same_basis(within, &v.basis)?;
    }
    let raw: Vec<Vec<Scalar>> = span.iter().map(|v| v.coeffs.clone()).collect();
    let idx = complement_units(&raw, within.dim())?;
    Ok(idx.into_iter().map(|j| Vector::unit(within.clone(), j)).collect())
}

/// Indices `j` of the unit vectors chosen by [`complement`].
pub(crate) fn complement_units(span: &[Vec<Scalar>], dim: usize) -> Result<Vec<usize>> {
    let mut e = Echelon::new(dim);
    for v in span {
        e.insert(v).map_err(|_| Error::DependentVectors)?;
    }
    let mut out = Vec::new();
    for j in 0..dim {
        if e.rank() == dim {
            break;
        }
        let mut u = vec![Scalar::zero(); dim];
        u[j] = Scalar::one();
        if e.insert(&u).is_ok() {
            out.push(j);
        }
    }
    Ok(out)
}

/// Rank of a list of vectors in the same ambient space.
pub fn rank_of(vectors: &[Vec<Scalar>], dim: usize) -> usize {
    let mut e = Echelon::new(dim);
    for v in vectors {
        let _ = e.insert(v);
    }
    e.rank()
}

/// Determinant by fraction-free elimination over the rationals.
pub fn determinant(columns: &[Vec<Scalar>]) -> Scalar {
    let n = columns.len();
    let mut rows = to_rows(columns, n);
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            rows.swap(p, c);
            det = -det;
        }
        let piv = rows[c][c].clone();
        det *= &piv;
        let inv = piv.inv().expect("nonzero pivot");
        for i in c + 1..n {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] * &inv;
            let pr = rows[c].clone();
            for (x, y) in rows[i].iter_mut().zip(&pr).skip(c) {
                *x -= &(&f * y);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d).unwrap()
    }

    #[test]
    fn solve_identity() {
        let b3 = Basis::standard("V", 3);
        let m = LinearMap::identity(b3.clone());
        let b = Vector::from_ints(b3.clone(), &[1, -2, 0]).unwrap();
        assert_eq!(solve(&m, &b).unwrap().unwrap(), b);
    }

    #[test]
    fn solve_zero_map_nonzero_rhs() {
        let b2 = Basis::standard("V", 2);
        let m = LinearMap::zero(b2.clone(), b2.clone());
        let b = Vector::from_ints(b2, &[0, 1]).unwrap();
        assert!(solve(&m, &b).unwrap().is_none());
    }

    #[test]
    fn solve_one_by_two_particular_solution() {
        // hand elimination: [2 3 | 7] -> [1 3/2 | 7/2], free variable zero
        let dom = Basis::standard("V", 2);
        let cod = Basis::standard("W", 1);
        let m = LinearMap::from_rows(dom, cod.clone(), &[vec![2, 3]]).unwrap();
        let x = solve(&m, &Vector::from_ints(cod, &[7]).unwrap()).unwrap().unwrap();
        assert_eq!(x.coeffs(), &[q(7, 2), q(0, 1)]);
    }

    #[test]
    fn solve_rejects_wrong_basis() {
        let dom = Basis::standard("V", 2);
        let cod = Basis::standard("W", 1);
        let m = LinearMap::from_rows(dom.clone(), cod, &[vec![2, 3]]).unwrap();
        let b = Vector::from_ints(dom, &[1, 1]).unwrap();
        assert!(matches!(solve(&m, &b), Err(Error::BasisMismatch { .. })));
        assert!(Vector::from_ints(Basis::standard("W", 1), &[1, 2]).is_err());
    }

    #[test]
    fn kernel_examples() {
        let b3 = Basis::standard("V", 3);
        assert!(kernel_basis(&LinearMap::identity(b3)).is_empty());
        let b2 = Basis::standard("V", 2);
        assert_eq!(kernel_basis(&LinearMap::zero(b2.clone(), b2.clone())).len(), 2);
        let cod = Basis::standard("W", 1);
        let m = LinearMap::from_rows(b2, cod, &[vec![1, 1]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].coeffs(), &[q(-1, 1), q(1, 1)]);
    }

    #[test]
    fn complement_examples() {
        let b2 = Basis::standard("V", 2);
        let c = complement(&[], &b2).unwrap();
        assert_eq!(c, vec![Vector::unit(b2.clone(), 0), Vector::unit(b2.clone(), 1)]);
        let s = Vector::from_ints(b2.clone(), &[1, 1]).unwrap();
        assert_eq!(complement(&[s], &b2).unwrap(), vec![Vector::unit(b2.clone(), 0)]);
        let full = vec![Vector::unit(b2.clone(), 0), Vector::unit(b2.clone(), 1)];
        assert!(complement(&full, &b2).unwrap().is_empty());
        let dep = vec![Vector::unit(b2.clone(), 0), Vector::unit(b2.clone(), 0)];
        assert_eq!(complement(&dep, &b2), Err(Error::DependentVectors));
    }

    #[test]
    fn determinant_small() {
        let cols = vec![vec![q(1, 1), q(3, 1)], vec![q(2, 1), q(4, 1)]];
        assert_eq!(determinant(&cols), q(-2, 1));
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            // sparse-ish integer entries keep ranks varied
            (Just(r), Just(c), proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], r * c))
        })
    }

    fn build(r: usize, c: usize, xs: &[i64]) -> LinearMap {
        let rows: Vec<Vec<i64>> = xs.chunks(c).map(|ch| ch.to_vec()).collect();
        LinearMap::from_rows(Basis::standard("D", c), Basis::standard("C", r), &rows).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_nullity((r, c, xs) in small_matrix(40)) {
            let m = build(r, c, &xs);
            let k = kernel_basis(&m);
            prop_assert_eq!(k.len() + m.rank(), c);
            for v in &k {
                prop_assert!(m.apply(v).unwrap().is_zero());
            }
        }

        #[test]
        fn solve_hits_rhs((r, c, xs) in small_matrix(12), ys in proptest::collection::vec(-4i64..=4, 12)) {
            let m = build(r, c, &xs);
            let x0 = Vector::from_ints(m.domain().clone(), &ys[..c]).unwrap();
            let b = m.apply(&x0).unwrap();
            let x = solve(&m, &b).unwrap().expect("b is in the image");
            prop_assert_eq!(m.apply(&x).unwrap(), b);
        }

        #[test]
        fn complement_completes_basis(n in 1usize..8, xs in proptest::collection::vec(-2i64..=2, 64)) {
            let b = Basis::standard("V", n);
            let mut e = Echelon::new(n);
            let span: Vec<Vector> = xs.chunks(n).take(n)
                .map(|ch| Vector::from_ints(b.clone(), ch).unwrap())
                .filter(|v| e.insert(v.coeffs()).is_ok())
                .collect();
            let comp = complement(&span, &b).unwrap();
            let cols: Vec<Vec<Scalar>> = span.iter().chain(&comp).map(|v| v.coeffs().to_vec()).collect();
            prop_assert_eq!(cols.len(), n);
            prop_assert!(!determinant(&cols).is_zero());
        }
    }
}
