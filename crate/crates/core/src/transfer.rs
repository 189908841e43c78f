//! Transferred L-infinity brackets on homology.
//!
//! `ℓ_k = Σ_T q ℓ_T / |Aut T|` over isomorphism classes of binary trees with
//! `k` leaves, where `ℓ_T` is the tree operation (leaves `i`, vertices the
//! bracket, internal edges `K`) precomposed with the signed symmetrisation.

use std::collections::{BTreeMap, HashMap};

use crate::dgl::{FreeDgl, HomologyClass};
use crate::error::{Error, Result};
use crate::lie::LieElement;
use crate::qlinalg::{Echelon, Scalar};
use crate::retract::HomotopyData;
use crate::signs::{self, Permutation};
use crate::trees::{enumerate_trees, BinaryTree};

/// `(-1)^{Σ_{i<k} (k - i) d_i}` for degrees `d_1 .. d_k`.
pub fn epsilon_sign(degrees: &[i64]) -> i64 {
    let k = degrees.len() as i64;
    let e: i64 = degrees
        .iter()
        .enumerate()
        .map(|(i, d)| (k - 1 - i as i64) * d)
        .sum();
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// How a tree operation picks up signs from its graded inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeSigns {
    /// Evaluate on the suspension, where the bracket `m(sa, sb) = (-1)^|a| s[a, b]`
    /// and `sKs⁻¹` compose without passing signs, then desuspend: each
    /// vertex costs `(-1)^{e + m}` with `e` the input degree and `m` the
    /// internal vertex count of its left subtree, and the root value is
    /// multiplied by [`epsilon_sign`] of the inputs.
    Suspended,
    /// Moving a composite of `m` homotopies past inputs of total degree `e`
    /// costs `(-1)^{me}`. Agrees with `Suspended` up to a sign depending on
    /// the arity, which breaks the Jacobi identity in arity 5.
    Passage,
    /// No signs.
    Plain,
}

/// Sign choices in the tree operations. `negate_homotopy` uses `-K` on
/// internal edges, multiplying `ℓ_k` by `(-1)^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignConvention {
    pub signs: TreeSigns,
    pub negate_homotopy: bool,
}

/// The convention used throughout. See the test `convention_is_pinned` for
/// what fixes it.
pub const CONVENTION: SignConvention = SignConvention {
    signs: TreeSigns::Suspended,
    negate_homotopy: false,
};

/// Version tag of [`CONVENTION`], embedded in reports.
pub const CONVENTION_VERSION: &str = "suspended-tree-signs/1";

impl Default for SignConvention {
    fn default() -> Self {
        CONVENTION
    }
}

/// Tree weights: `1/|Aut T|` unless overridden by canonical tree key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeWeights {
    overrides: BTreeMap<String, Scalar>,
}

impl TreeWeights {
    pub fn standard() -> Self {
        TreeWeights::default()
    }

    pub fn with_override(mut self, tree: &BinaryTree, weight: Scalar) -> Self {
        self.overrides.insert(tree.key().to_string(), weight);
        self
    }

    pub fn weight(&self, t: &BinaryTree) -> Scalar {
        self.overrides
            .get(t.key())
            .cloned()
            .unwrap_or_else(|| Scalar::new(1, t.aut_order() as i64).expect("nonzero order"))
    }
}

/// The transfer engine over a retract.
pub struct Transfer<'a, R: HomotopyData + ?Sized> {
    retract: &'a R,
    convention: SignConvention,
    weights: TreeWeights,
}

struct Eval<'r, R: HomotopyData + ?Sized> {
    retract: &'r R,
    convention: SignConvention,
    leaves: Vec<LieElement>,
    degrees: Vec<i64>,
    memo: HashMap<(String, Vec<usize>), LieElement>,
}

fn with_tree_context(e: Error, t: &BinaryTree) -> Error {
    match e {
        Error::DegreeCap { needed, cap, context } => Error::DegreeCap {
            needed,
            cap,
            context: format!("{context} in tree {t}"),
        },
        other => other,
    }
}

impl<R: HomotopyData + ?Sized> Eval<'_, R> {
    fn dgl(&self) -> &FreeDgl {
        self.retract.dgl()
    }

    /// Value of the subtree on the given inputs, before the edge above it.
    fn eval(&mut self, t: &BinaryTree, idx: &[usize]) -> Result<LieElement> {
        let Some((l, r)) = t.children() else {
            return Ok(self.leaves[idx[0]].clone());
        };
        let split = l.leaf_count();
        let left = self.edge(l, &idx[..split])?;
        let right = self.edge(r, &idx[split..])?;
        let mut out = self.dgl().bracket(&left, &right).map_err(|e| with_tree_context(e, t))?;
        let passed: i64 = idx[..split].iter().map(|&j| self.degrees[j]).sum();
        let flip = match self.convention.signs {
            TreeSigns::Suspended => passed + l.internal_count() as i64,
            TreeSigns::Passage => r.internal_count() as i64 * passed,
            TreeSigns::Plain => 0,
        };
        if flip.rem_euclid(2) == 1 {
            out = -&out;
        }
        Ok(out)
    }

    /// Value of the whole tree on the inputs in the given order.
    fn root(&mut self, t: &BinaryTree, idx: &[usize]) -> Result<LieElement> {
        let out = self.eval(t, idx)?;
        if self.convention.signs == TreeSigns::Suspended {
            let degrees: Vec<i64> = idx.iter().map(|&j| self.degrees[j]).collect();
            if epsilon_sign(&degrees) == -1 {
                return Ok(-&out);
            }
        }
        Ok(out)
    }

    /// Value including the edge above the subtree (`K` unless it is a leaf).
    fn edge(&mut self, t: &BinaryTree, idx: &[usize]) -> Result<LieElement> {
        if t.is_leaf() {
            return Ok(self.leaves[idx[0]].clone());
        }
        let key = (t.key().to_string(), idx.to_vec());
        if let Some(x) = self.memo.get(&key) {
            return Ok(x.clone());
        }
        let inner = self.eval(t, idx)?;
        let mut out = self.retract.homotopy(&inner).map_err(|e| with_tree_context(e, t))?;
        if self.convention.negate_homotopy {
            out = -&out;
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

impl<'a, R: HomotopyData + ?Sized> Transfer<'a, R> {
    pub fn new(retract: &'a R) -> Self {
        Transfer {
            retract,
            convention: CONVENTION,
            weights: TreeWeights::standard(),
        }
    }

    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_weights(mut self, weights: TreeWeights) -> Self {
        self.weights = weights;
        self
    }

    pub fn retract(&self) -> &R {
        self.retract
    }

    fn evaluator(&self, args: &[HomologyClass]) -> Result<Eval<'a, R>> {
        let leaves = args.iter().map(|h| self.retract.include(h)).collect::<Result<Vec<_>>>()?;
        Ok(Eval {
            retract: self.retract,
            convention: self.convention,
            leaves,
            degrees: args.iter().map(|h| h.degree).collect(),
            memo: HashMap::new(),
        })
    }

    fn check_leaves(t: &BinaryTree, args: &[HomologyClass]) -> Result<()> {
        if t.leaf_count() != args.len() {
            return Err(Error::InvalidArgument(format!(
                "tree {t} has {} leaves but {} inputs were given",
                t.leaf_count(),
                args.len()
            )));
        }
        Ok(())
    }

    /// The tree operation on inputs assigned to the leaves left to right in
    /// the canonical planar presentation.
    pub fn tree_evaluate(&self, t: &BinaryTree, args: &[HomologyClass]) -> Result<LieElement> {
        Self::check_leaves(t, args)?;
        let idx: Vec<usize> = (0..args.len()).collect();
        self.evaluator(args)?.root(t, &idx)
    }

    fn symmetrized_with(&self, ev: &mut Eval<'a, R>, t: &BinaryTree) -> Result<LieElement> {
        let k = t.leaf_count();
        let degree = ev.degrees.iter().sum::<i64>() + k as i64 - 2;
        let mut out = LieElement::zero(degree);
        for sigma in Permutation::all(k) {
            let sign = signs::signed_koszul_scalar(&sigma, &ev.degrees)?;
            let value = ev.root(t, sigma.image())?;
            out.add_scaled(&value, &sign);
        }
        Ok(out)
    }

    /// `Σ_σ χ(σ) ℓ̃_T(x_σ(1), .., x_σ(k))` with `χ` the signed Koszul sign.
    pub fn symmetrized_tree(&self, t: &BinaryTree, args: &[HomologyClass]) -> Result<LieElement> {
        Self::check_leaves(t, args)?;
        let mut ev = self.evaluator(args)?;
        self.symmetrized_with(&mut ev, t)
    }

    /// `Σ_T w_T ℓ_T(args)` in `L`, before projecting to homology.
    pub fn ell_element(&self, args: &[HomologyClass]) -> Result<LieElement> {
        let k = args.len();
        if k < 2 {
            return Err(Error::InvalidArgument("transferred brackets start at arity 2".into()));
        }
        let degree = args.iter().map(|h| h.degree).sum::<i64>() + k as i64 - 2;
        let cap = self.retract.dgl().cap() as i64;
        if degree > cap {
            return Err(Error::DegreeCap {
                needed: degree,
                cap: cap as u32,
                context: format!("bracket of arity {k}"),
            });
        }
        let mut ev = self.evaluator(args)?;
        let mut out = LieElement::zero(degree);
        for t in enumerate_trees(k)?.iter() {
            let s = self.symmetrized_with(&mut ev, t)?;
            out.add_scaled(&s, &self.weights.weight(t));
        }
        Ok(out)
    }

    /// The transferred bracket `ℓ_k(args)` with `k = args.len()`.
    pub fn ell(&self, args: &[HomologyClass]) -> Result<HomologyClass> {
        let x = self.ell_element(args)?;
        self.retract.project(&x)
    }

    /// Values of `ℓ_2 .. ℓ_max_arity` on every non-decreasing tuple of
    /// homology basis elements whose value lies below the cap.
    pub fn table(&self, max_arity: usize) -> Result<LInftyTable> {
        let dgl = self.retract.dgl();
        let dims = dgl.homology_dims()?;
        let basis: Vec<(i64, usize)> = dims
            .iter()
            .flat_map(|(&n, &d)| (0..d).map(move |j| (n, j)))
            .collect();
        let top = dgl.cap() as i64 - 1;
        let mut table = LInftyTable {
            max_arity,
            cap: dgl.cap(),
            dims: dims.clone(),
            basis,
            values: BTreeMap::new(),
        };
        for k in 2..=max_arity {
            for tuple in table.tuples(k, top - k as i64 + 2) {
                let degree = table.output_degree(&tuple);
                let out_dim = dims.get(&degree).copied().unwrap_or(0);
                let value = if out_dim == 0 {
                    HomologyClass::zero(degree, 0)
                } else {
                    let args: Vec<HomologyClass> = tuple.iter().map(|&g| table.unit(g)).collect();
                    self.ell(&args)?
                };
                table.values.insert((k, tuple), value);
            }
        }
        Ok(table)
    }
}

/// `tree_evaluate` with the standard convention.
pub fn tree_evaluate<R: HomotopyData + ?Sized>(t: &BinaryTree, r: &R, args: &[HomologyClass]) -> Result<LieElement> {
    Transfer::new(r).tree_evaluate(t, args)
}

/// `symmetrized_tree` with the standard convention.
pub fn symmetrized_tree<R: HomotopyData + ?Sized>(t: &BinaryTree, r: &R, args: &[HomologyClass]) -> Result<LieElement> {
    Transfer::new(r).symmetrized_tree(t, args)
}

/// `ℓ_k(args)` with the standard convention and weights.
pub fn ell<R: HomotopyData + ?Sized>(k: usize, r: &R, args: &[HomologyClass]) -> Result<HomologyClass> {
    if args.len() != k {
        return Err(Error::InvalidArgument(format!("arity {k} but {} inputs", args.len())));
    }
    Transfer::new(r).ell(args)
}

/// Lookup result for a tuple of basis classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableValue {
    Known(HomologyClass),
    /// The value lies in a degree at or above the cap, where homology is not
    /// computed.
    BeyondCap,
}

/// The transferred brackets on homology basis tuples.
#[derive(Clone, Debug)]
pub struct LInftyTable {
    max_arity: usize,
    cap: u32,
    dims: BTreeMap<i64, usize>,
    /// global basis: `(degree, index in H_degree)`
    basis: Vec<(i64, usize)>,
    values: BTreeMap<(usize, Vec<usize>), HomologyClass>,
}

impl LInftyTable {
    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn homology_dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    /// Homology basis in global order, as `(degree, index)`.
    pub fn basis(&self) -> &[(i64, usize)] {
        &self.basis
    }

    /// Stored values keyed by arity and non-decreasing global indices.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &[usize], &HomologyClass)> {
        self.values.iter().map(|((k, t), v)| (*k, t.as_slice(), v))
    }

    pub fn global_index(&self, degree: i64, j: usize) -> Option<usize> {
        self.basis.iter().position(|&b| b == (degree, j))
    }

    fn unit(&self, g: usize) -> HomologyClass {
        let (n, j) = self.basis[g];
        HomologyClass::unit(n, self.dims[&n], j)
    }

    fn output_degree(&self, tuple: &[usize]) -> i64 {
        tuple.iter().map(|&g| self.basis[g].0).sum::<i64>() + tuple.len() as i64 - 2
    }

    /// Non-decreasing tuples of length `k` with total input degree at most
    /// `budget`.
    fn tuples(&self, k: usize, budget: i64) -> Vec<Vec<usize>> {
        fn rec(t: &LInftyTable, k: usize, start: usize, left: i64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for g in start..t.basis.len() {
                let d = t.basis[g].0;
                // the remaining slots need at least this degree each
                if d * (k - cur.len()) as i64 > left {
                    break;
                }
                cur.push(g);
                rec(t, k, g, left - d, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self, k, 0, budget, &mut Vec::new(), &mut out);
        out
    }

    /// `ℓ_k` on basis classes in any order, using graded skew-symmetry.
    pub fn get(&self, tuple: &[usize]) -> Result<TableValue> {
        let k = tuple.len();
        if k < 2 || k > self.max_arity {
            return Err(Error::InvalidArgument(format!(
                "arity {k} outside the table range 2..={}",
                self.max_arity
            )));
        }
        let degree = self.output_degree(tuple);
        if degree > self.cap as i64 - 1 {
            return Ok(TableValue::BeyondCap);
        }
        let sigma = signs::sorting_permutation(tuple);
        let sorted = sigma.apply(tuple);
        let degrees: Vec<i64> = tuple.iter().map(|&g| self.basis[g].0).collect();
        let sign = signs::signed_koszul_scalar(&sigma, &degrees)?;
        let v = self
            .values
            .get(&(k, sorted))
            .expect("every tuple below the cap is tabulated");
        Ok(TableValue::Known(v.scale(&sign)))
    }

    /// `ℓ_k(h, rest..)` for a class `h` (expanded by linearity) and basis
    /// classes `rest`. `None` when beyond the cap.
    fn apply_first(&self, h: &HomologyClass, rest: &[usize], out_degree: i64) -> Result<Option<HomologyClass>> {
        let dim = self.dims.get(&out_degree).copied().unwrap_or(0);
        let mut acc = HomologyClass::zero(out_degree, dim);
        for (j, c) in h.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = self.global_index(h.degree, j).expect("class in the table basis");
            let mut tuple = vec![g];
            tuple.extend_from_slice(rest);
            match self.get(&tuple)? {
                TableValue::Known(v) => acc.add_scaled(&v, c),
                TableValue::BeyondCap => return Ok(None),
            }
        }
        Ok(Some(acc))
    }
}

/// Span of the values of `ℓ_j` landing in `H_n`, as an echelon basis.
pub fn bracket_image_span(table: &LInftyTable, j: usize, n: i64) -> Result<Vec<HomologyClass>> {
    if j < 2 || j > table.max_arity {
        return Err(Error::InvalidArgument(format!(
            "the table covers arities 2..={}, not {j}",
            table.max_arity
        )));
    }
    if n > table.cap as i64 - 1 {
        return Err(Error::DegreeCap {
            needed: n + 1,
            cap: table.cap,
            context: format!("image of the arity {j} bracket in degree {n}"),
        });
    }
    let dim = table.dims.get(&n).copied().unwrap_or(0);
    let mut e = Echelon::new(dim);
    let mut out = Vec::new();
    for ((k, tuple), v) in &table.values {
        if *k == j && table.output_degree(tuple) == n && e.insert(&v.coords).is_ok() {
            out.push(v.clone());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub arity: usize,
    pub tuples_checked: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// The generalized Jacobi identity in arity `n` on every basis tuple below
/// the cap:
/// `Σ_{i+j=n+1} Σ_{σ ∈ Sh(i,n-i)} χ(σ) (-1)^{i(j-1)} ℓ_j(ℓ_i(x_σ(1..i)), x_σ(i+1..n)) = 0`.
/// The terms with `ℓ_1` vanish since the structure is minimal.
pub fn verify_generalized_jacobi(table: &LInftyTable, n: usize) -> Result<JacobiReport> {
    if n < 3 || n > table.max_arity + 1 {
        return Err(Error::InvalidArgument(format!(
            "Jacobi in arity {n} needs brackets up to arity {}, the table has {}",
            n - 1,
            table.max_arity
        )));
    }
    let top = table.cap as i64 - 1;
    let mut report = JacobiReport {
        arity: n,
        tuples_checked: 0,
        violations: 0,
        first_violation: None,
    };
    // output degree is Σ|x| + n - 3
    'tuples: for tuple in table.tuples(n, top - n as i64 + 3) {
        let degrees: Vec<i64> = tuple.iter().map(|&g| table.basis[g].0).collect();
        let out_degree = degrees.iter().sum::<i64>() + n as i64 - 3;
        let dim = table.dims.get(&out_degree).copied().unwrap_or(0);
        let mut total = HomologyClass::zero(out_degree, dim);
        for i in 2..n {
            let j = n + 1 - i;
            for sigma in signs::shuffles(i, n - i) {
                let img = sigma.apply(&tuple);
                let mut sign = signs::signed_koszul(&sigma, &degrees)?;
                if (i * (j - 1)) % 2 == 1 {
                    sign = -sign;
                }
                let inner = match table.get(&img[..i])? {
                    TableValue::Known(v) => v,
                    TableValue::BeyondCap => continue 'tuples,
                };
                match table.apply_first(&inner, &img[i..], out_degree)? {
                    Some(v) => total.add_scaled(&v, &Scalar::from_int(sign)),
                    None => continue 'tuples,
                }
            }
        }
        report.tuples_checked += 1;
        if !total.is_zero() {
            report.violations += 1;
            if report.first_violation.is_none() {
                report.first_violation = Some(format!("basis tuple {tuple:?} gives {total}"));
            }
        }
    }
    Ok(report)
}
