use std::collections::BTreeMap;

use super::Scalar;

/// Incremental row echelon form over a fixed ambient dimension.
///
/// Rows are keyed by their pivot (leftmost nonzero position) and normalised
/// so the pivot entry is one. Every stored row remembers which combination of
/// the inserted vectors produced it, so membership queries can also report
/// coefficients with respect to the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: BTreeMap<usize, Row>,
    inserted: usize,
}

#[derive(Clone, Debug)]
struct Row {
    values: Vec<Scalar>,
    combo: BTreeMap<usize, Scalar>,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub residual: Vec<Scalar>,
    /// `v = residual + sum combo[j] * inserted[j]`
    pub combo: BTreeMap<usize, Scalar>,
}

impl Reduction {
    pub fn is_member(&self) -> bool {
        self.residual.iter().all(Scalar::is_zero)
    }
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: BTreeMap::new(),
            inserted: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors passed to [`Echelon::insert`], including rejected ones.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn reduce(&self, v: &[Scalar]) -> Reduction {
        assert_eq!(v.len(), self.dim, "echelon dimension mismatch");
        let mut residual = v.to_vec();
        let mut combo: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (&p, row) in &self.rows {
            if residual[p].is_zero() {
                continue;
            }
            let c = residual[p].clone();
            for (j, x) in row.values.iter().enumerate().skip(p) {
                if !x.is_zero() {
                    residual[j] -= &(&c * x);
                }
            }
            for (id, w) in &row.combo {
                let e = combo.entry(*id).or_insert_with(Scalar::zero);
                *e += &(&c * w);
            }
        }
        combo.retain(|_, x| !x.is_zero());
        Reduction { residual, combo }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).is_member()
    }

    /// Coefficients of `v` with respect to the inserted vectors, when `v`
    /// lies in their span.
    pub fn express(&self, v: &[Scalar]) -> Option<BTreeMap<usize, Scalar>> {
        let r = self.reduce(v);
        if r.is_member() {
            Some(r.combo)
        } else {
            None
        }
    }

    /// Inserts `v` under the next insertion id. Returns `Ok(id)` when `v` was
    /// independent, otherwise `Err(combo)` with `v = sum combo[j] * inserted[j]`.
    pub fn insert(&mut self, v: &[Scalar]) -> Result<usize, BTreeMap<usize, Scalar>> {
        let id = self.inserted;
        self.inserted += 1;
        let Reduction { mut residual, combo } = self.reduce(v);
        let pivot = match residual.iter().position(|x| !x.is_zero()) {
            Some(p) => p,
            None => return Err(combo),
        };
        let inv = residual[pivot].inv().expect("nonzero pivot");
        for x in residual.iter_mut().skip(pivot) {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        // residual = v - sum combo_j inserted_j
        let mut row_combo: BTreeMap<usize, Scalar> = combo
            .into_iter()
            .map(|(j, c)| (j, -(c * &inv)))
            .collect();
        row_combo.insert(id, inv);
        self.rows.insert(
            pivot,
            Row {
                values: residual,
                combo: row_combo,
            },
        );
        Ok(id)
    }
}
