//! Free differential graded Lie algebras truncated at a degree cap.
//!
//! Each degree `n <= cap` gets a basis of the degree `n` part of the free Lie
//! algebra. Basis elements are grouped by *content* (the multiset of
//! generators occurring in every word), since the tensor algebra splits as a
//! direct sum over contents and brackets add contents. Inside one content
//! block the candidates `[g, b]` (with `b` running over the block of the
//! content minus `g`) are row reduced with the lexicographically smallest word
//! as pivot, so the coordinates of an element are read off at pivot words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lie::{right_normed, GenId, LieElement, Word};
use crate::qlinalg::{self, Basis, Echelon, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }
}

/// Basis of one degree of the free Lie algebra.
#[derive(Debug)]
pub struct DegreeSpace {
    degree: i64,
    elements: Vec<LieElement>,
    pivots: HashMap<Word, usize>,
    blocks: HashMap<Vec<GenId>, (usize, usize)>,
    /// Right-normed words `[w1,[w2,...]]` spanning the same blocks, aligned
    /// with `elements` block by block.
    monomials: Vec<Word>,
    basis: Arc<Basis>,
}

impl DegreeSpace {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[LieElement] {
        &self.elements
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    /// Coordinates of `x`, assuming it lies in this space.
    fn coordinates_unchecked(&self, x: &LieElement) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (w, c) in x.terms() {
            if let Some(&j) = self.pivots.get(w) {
                out[j] = c.clone();
            }
        }
        out
    }

    /// Element with the given coordinates.
    pub fn combine(&self, coords: &[Scalar]) -> LieElement {
        let mut out = LieElement::zero(self.degree);
        for (c, e) in coords.iter().zip(&self.elements) {
            if !c.is_zero() {
                out.add_scaled(e, c);
            }
        }
        out
    }

    /// Writes `x` as a combination of right-normed bracket monomials of
    /// generators, block by block.
    pub fn monomial_expansion(&self, x: &LieElement, degree_of: impl Fn(GenId) -> i64) -> Result<Vec<(Word, Scalar)>> {
        let coords = self.coordinates(x)?;
        let mut ranges: Vec<(usize, usize)> = self.blocks.values().copied().collect();
        ranges.sort();
        let mut out = Vec::new();
        for (lo, hi) in ranges {
            if coords[lo..hi].iter().all(Scalar::is_zero) {
                continue;
            }
            let mut e = Echelon::new(hi - lo);
            for w in &self.monomials[lo..hi] {
                let m = right_normed(w, &degree_of);
                let c = self.coordinates_unchecked(&m);
                e.insert(&c[lo..hi]).map_err(|_| Error::NotLie(self.degree))?;
            }
            let combo = e.express(&coords[lo..hi]).ok_or(Error::NotLie(self.degree))?;
            for (j, c) in combo {
                out.push((self.monomials[lo + j].clone(), c));
            }
        }
        Ok(out)
    }

    /// Coordinates of `x`, failing when `x` is not a Lie element of this degree.
    pub fn coordinates(&self, x: &LieElement) -> Result<Vec<Scalar>> {
        if x.is_zero() {
            return Ok(vec![Scalar::zero(); self.dim()]);
        }
        if x.degree() != self.degree {
            return Err(Error::NotLie(x.degree()));
        }
        let coords = self.coordinates_unchecked(x);
        if &self.combine(&coords) != x {
            return Err(Error::NotLie(self.degree));
        }
        Ok(coords)
    }
}

/// Differential `L_n -> L_{n-1}` in coordinates.
#[derive(Debug)]
struct BoundaryMap {
    columns: Vec<Vec<Scalar>>,
    target_dim: usize,
}

/// A homology class in the chosen basis of `H_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    pub degree: i64,
    pub coords: Vec<Scalar>,
}

impl HomologyClass {
    pub fn zero(degree: i64, dim: usize) -> Self {
        HomologyClass {
            degree,
            coords: vec![Scalar::zero(); dim],
        }
    }

    pub fn unit(degree: i64, dim: usize, j: usize) -> Self {
        let mut h = HomologyClass::zero(degree, dim);
        h.coords[j] = Scalar::one();
        h
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        HomologyClass {
            degree: self.degree,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &HomologyClass, c: &Scalar) {
        assert_eq!(self.coords.len(), other.coords.len(), "homology dimension mismatch");
        for (x, y) in self.coords.iter_mut().zip(&other.coords) {
            *x += &(y * c);
        }
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Homology in one degree with canonical representative cycles.
#[derive(Debug)]
pub struct Homology {
    degree: i64,
    cycles: Arc<Vec<Vec<Scalar>>>,
    boundaries: Vec<Vec<Scalar>>,
    representatives: Vec<LieElement>,
    rep_coords: Vec<Vec<Scalar>>,
    classifier: Echelon,
    rep_slots: HashMap<usize, usize>,
}

impl Homology {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Representative cycles, one per basis class.
    pub fn representatives(&self) -> &[LieElement] {
        &self.representatives
    }

    pub fn representative_coords(&self) -> &[Vec<Scalar>] {
        &self.rep_coords
    }

    /// Coordinates of a basis of the cycles `Z_n`.
    pub fn cycle_basis(&self) -> &[Vec<Scalar>] {
        &self.cycles
    }

    pub fn cycle_dim(&self) -> usize {
        self.cycles.len()
    }

    pub fn boundary_dim(&self) -> usize {
        self.boundaries.len()
    }

    /// Coordinates of a basis of the boundaries `B_n`.
    pub fn boundary_basis(&self) -> &[Vec<Scalar>] {
        &self.boundaries
    }

    /// Class of a cycle given by coordinates; fails when it is not a cycle.
    pub fn classify_coords(&self, coords: &[Scalar]) -> Result<HomologyClass> {
        let combo = self.classifier.express(coords).ok_or_else(|| {
            Error::InvalidArgument(format!("element of degree {} is not a cycle", self.degree))
        })?;
        let mut out = HomologyClass::zero(self.degree, self.dim());
        for (id, c) in combo {
            if let Some(&slot) = self.rep_slots.get(&id) {
                out.coords[slot] = c;
            }
        }
        Ok(out)
    }

    /// Whether the cycle with these coordinates is a boundary.
    pub fn is_boundary_coords(&self, coords: &[Scalar]) -> Result<bool> {
        Ok(self.classify_coords(coords)?.is_zero())
    }
}

/// Outcome of the structural checks run by [`FreeDgl::check`].
#[derive(Clone, Debug, Default)]
pub struct StructureReport {
    pub d_squared_failures: Vec<String>,
    pub jacobi_samples: usize,
    pub jacobi_failures: Vec<String>,
    pub derivation_samples: usize,
    pub derivation_failures: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.d_squared_failures.is_empty()
            && self.jacobi_failures.is_empty()
            && self.derivation_failures.is_empty()
    }
}

/// A free DGL `(L(V), d)` with finitely many generators.
#[derive(Debug)]
pub struct FreeDgl {
    generators: Vec<Generator>,
    differential: Vec<LieElement>,
    cap: u32,
    spaces: Vec<OnceLock<Arc<DegreeSpace>>>,
    boundaries: Vec<OnceLock<Arc<BoundaryMap>>>,
    cycles: Vec<OnceLock<Arc<Vec<Vec<Scalar>>>>>,
    homology: Vec<OnceLock<Arc<Homology>>>,
}

impl FreeDgl {
    /// Builds the DGL from generators and the differential of each generator
    /// (same order). Checks degrees, name uniqueness and that every
    /// differential is a Lie element.
    pub fn new(generators: Vec<Generator>, differential: Vec<LieElement>, cap: u32) -> Result<Self> {
        if generators.len() != differential.len() {
            return Err(Error::InvalidDgl(format!(
                "{} generators but {} differentials",
                generators.len(),
                differential.len()
            )));
        }
        if generators.len() > GenId::MAX as usize {
            return Err(Error::InvalidDgl("too many generators".into()));
        }
        let mut names = HashMap::new();
        for (j, g) in generators.iter().enumerate() {
            if g.degree < 1 {
                return Err(Error::InvalidDgl(format!(
                    "generator `{}` has degree {}; degrees must be positive",
                    g.name, g.degree
                )));
            }
            if names.insert(g.name.clone(), j).is_some() {
                return Err(Error::InvalidDgl(format!("duplicate generator `{}`", g.name)));
            }
        }
        for (g, d) in generators.iter().zip(&differential) {
            if !d.is_zero() && d.degree() != g.degree - 1 {
                return Err(Error::InvalidDgl(format!(
                    "d{} has degree {} but should have degree {}",
                    g.name,
                    d.degree(),
                    g.degree - 1
                )));
            }
            for w in d.terms().keys() {
                if w.iter().any(|&x| x as usize >= generators.len()) {
                    return Err(Error::InvalidDgl(format!("d{} uses an unknown generator", g.name)));
                }
                let total: i64 = w.iter().map(|&x| generators[x as usize].degree).sum();
                if total != g.degree - 1 {
                    return Err(Error::InvalidDgl(format!("d{} is not homogeneous", g.name)));
                }
            }
        }
        let slots = cap as usize + 2;
        let dgl = FreeDgl {
            generators,
            differential,
            cap,
            spaces: (0..slots).map(|_| OnceLock::new()).collect(),
            boundaries: (0..slots).map(|_| OnceLock::new()).collect(),
            cycles: (0..slots).map(|_| OnceLock::new()).collect(),
            homology: (0..slots).map(|_| OnceLock::new()).collect(),
        };
        for (g, d) in dgl.generators.iter().zip(&dgl.differential) {
            if !d.is_zero() && d.degree() <= cap as i64 {
                dgl.space(d.degree())?
                    .coordinates(d)
                    .map_err(|_| Error::InvalidDgl(format!("d{} is not a Lie element", g.name)))?;
            }
        }
        Ok(dgl)
    }

    /// The same DGL with a different degree cap.
    pub fn with_cap(&self, cap: u32) -> Result<Self> {
        FreeDgl::new(self.generators.clone(), self.differential.clone(), cap)
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_id(&self, name: &str) -> Option<GenId> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|j| j as GenId)
    }

    pub fn generator(&self, id: GenId) -> LieElement {
        LieElement::generator(id, self.generators[id as usize].degree)
    }

    pub fn generator_by_name(&self, name: &str) -> Option<LieElement> {
        self.generator_id(name).map(|id| self.generator(id))
    }

    pub fn generator_degree(&self, id: GenId) -> i64 {
        self.generators[id as usize].degree
    }

    /// Differential of a generator.
    pub fn generator_differential(&self, id: GenId) -> &LieElement {
        &self.differential[id as usize]
    }

    pub fn word_degree(&self, w: &[GenId]) -> i64 {
        w.iter().map(|&g| self.generator_degree(g)).sum()
    }

    fn check_cap(&self, needed: i64, context: &str) -> Result<()> {
        if needed > self.cap as i64 {
            Err(Error::DegreeCap {
                needed,
                cap: self.cap,
                context: context.to_string(),
            })
        } else {
            Ok(())
        }
    }

    /// Bracket of two elements, refusing results above the cap.
    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        self.check_cap(a.degree() + b.degree(), "bracket")?;
        Ok(a.bracket(b))
    }

    /// The differential extended as a derivation of the tensor algebra.
    pub fn apply_differential(&self, x: &LieElement) -> LieElement {
        let mut out = LieElement::zero(x.degree() - 1);
        for (w, c) in x.terms() {
            let mut prefix = 0i64;
            for (i, &g) in w.iter().enumerate() {
                let d = &self.differential[g as usize];
                if !d.is_zero() {
                    let coef = c * &Scalar::sign(prefix);
                    for (dw, dc) in d.terms() {
                        let mut nw = Vec::with_capacity(w.len() + dw.len() - 1);
                        nw.extend_from_slice(&w[..i]);
                        nw.extend_from_slice(dw);
                        nw.extend_from_slice(&w[i + 1..]);
                        out.add_term(nw, &(&coef * dc));
                    }
                }
                prefix += self.generator_degree(g);
            }
        }
        out
    }

    /// Generators whose differential does not square to zero.
    pub fn check_d_squared(&self) -> Vec<String> {
        self.generators
            .iter()
            .zip(&self.differential)
            .filter(|(_, d)| !self.apply_differential(d).is_zero())
            .map(|(g, _)| g.name.clone())
            .collect()
    }

    /// The basis of `L_n`.
    pub fn space(&self, n: i64) -> Result<Arc<DegreeSpace>> {
        self.check_cap(n, "Lie basis")?;
        if n < 0 {
            return Err(Error::InvalidArgument(format!("negative degree {n}")));
        }
        let slot = &self.spaces[n as usize];
        if let Some(s) = slot.get() {
            return Ok(s.clone());
        }
        let built = Arc::new(self.build_space(n)?);
        Ok(slot.get_or_init(|| built).clone())
    }

    /// Basis elements of `L_n`.
    pub fn lie_basis(&self, n: i64) -> Result<Vec<LieElement>> {
        Ok(self.space(n)?.elements().to_vec())
    }

    pub fn dim(&self, n: i64) -> Result<usize> {
        if n <= 0 {
            return Ok(0);
        }
        Ok(self.space(n)?.dim())
    }

    /// Coordinates of `x` in the basis of its degree.
    pub fn coordinates(&self, x: &LieElement) -> Result<Vec<Scalar>> {
        self.space(x.degree())?.coordinates(x)
    }

    /// Multisets of generator ids (sorted) of total degree `n`.
    fn contents(&self, n: i64) -> Vec<Vec<GenId>> {
        fn rec(dgl: &FreeDgl, start: usize, left: i64, cur: &mut Vec<GenId>, out: &mut Vec<Vec<GenId>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for g in start..dgl.generators.len() {
                let d = dgl.generators[g].degree;
                if d <= left {
                    cur.push(g as GenId);
                    rec(dgl, g, left - d, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(self, 0, n, &mut Vec::new(), &mut out);
        }
        out
    }

    fn build_space(&self, n: i64) -> Result<DegreeSpace> {
        let mut elements = Vec::new();
        let mut monomials = Vec::new();
        let mut pivots = HashMap::new();
        let mut blocks = HashMap::new();
        for content in self.contents(n) {
            let (block, words) = if content.len() == 1 {
                (vec![self.generator(content[0])], vec![content.clone()])
            } else {
                let mut candidates = Vec::new();
                let mut words = Vec::new();
                let mut distinct = content.clone();
                distinct.dedup();
                for &g in &distinct {
                    let mut rest = content.clone();
                    let pos = rest.iter().position(|&x| x == g).expect("present");
                    rest.remove(pos);
                    let lower = self.space(self.word_degree(&rest))?;
                    if let Some(&(lo, hi)) = lower.blocks.get(&rest) {
                        for m in &lower.monomials[lo..hi] {
                            let mut w = vec![g];
                            w.extend_from_slice(m);
                            candidates.push(right_normed(&w, |x| self.generator_degree(x)));
                            words.push(w);
                        }
                    }
                }
                let (rows, independent) = reduce_block(candidates);
                (rows, independent.into_iter().map(|j| words[j].clone()).collect())
            };
            if block.is_empty() {
                continue;
            }
            let lo = elements.len();
            for e in block {
                let w = e.min_word().expect("nonzero").clone();
                pivots.insert(w, elements.len());
                elements.push(e);
            }
            monomials.extend(words);
            blocks.insert(content, (lo, elements.len()));
        }
        let labels = elements.iter().map(|e| self.pivot_label(e)).collect();
        Ok(DegreeSpace {
            degree: n,
            elements,
            pivots,
            blocks,
            monomials,
            basis: Basis::new(format!("L{n}"), labels),
        })
    }

    fn pivot_label(&self, e: &LieElement) -> String {
        let w = e.min_word().expect("nonzero");
        w.iter()
            .map(|&g| self.generators[g as usize].name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    fn boundary_map(&self, n: i64) -> Result<Arc<BoundaryMap>> {
        self.check_cap(n, "differential")?;
        let slot = &self.boundaries[n as usize];
        if let Some(b) = slot.get() {
            return Ok(b.clone());
        }
        let source = self.space(n)?;
        let target_dim = self.dim(n - 1)?;
        let mut columns = Vec::with_capacity(source.dim());
        for e in source.elements() {
            let d = self.apply_differential(e);
            if n - 1 <= 0 {
                columns.push(Vec::new());
            } else {
                columns.push(self.space(n - 1)?.coordinates(&d)?);
            }
        }
        let built = Arc::new(BoundaryMap { columns, target_dim });
        Ok(slot.get_or_init(|| built).clone())
    }

    /// Coordinates of `d(b_j)` for the basis of `L_n`, in the basis of `L_{n-1}`.
    pub fn differential_columns(&self, n: i64) -> Result<Vec<Vec<Scalar>>> {
        Ok(self.boundary_map(n)?.columns.clone())
    }

    /// Homology `H_n`; needs `n + 1 <= cap` so boundaries are known.
    pub fn homology(&self, n: i64) -> Result<Arc<Homology>> {
        if n < 1 {
            return Err(Error::InvalidArgument(format!("homology is reduced; degree {n} is empty")));
        }
        self.check_cap(n + 1, &format!("homology in degree {n}"))?;
        let slot = &self.homology[n as usize];
        if let Some(h) = slot.get() {
            return Ok(h.clone());
        }
        let built = Arc::new(self.build_homology(n)?);
        Ok(slot.get_or_init(|| built).clone())
    }

    /// Coordinates of a basis of the cycles `Z_n` (reduced echelon kernel
    /// basis of the differential), for `n <= cap`.
    pub fn cycles(&self, n: i64) -> Result<Arc<Vec<Vec<Scalar>>>> {
        self.check_cap(n, "cycles")?;
        if n < 1 {
            return Ok(Arc::new(Vec::new()));
        }
        let slot = &self.cycles[n as usize];
        if let Some(z) = slot.get() {
            return Ok(z.clone());
        }
        let dim = self.dim(n)?;
        let z = if n == 1 {
            (0..dim)
                .map(|j| {
                    let mut v = vec![Scalar::zero(); dim];
                    v[j] = Scalar::one();
                    v
                })
                .collect()
        } else {
            let dn = self.boundary_map(n)?;
            qlinalg::kernel_raw(&dn.columns, dn.target_dim)
        };
        Ok(slot.get_or_init(|| Arc::new(z)).clone())
    }

    fn build_homology(&self, n: i64) -> Result<Homology> {
        let space = self.space(n)?;
        let cycles = self.cycles(n)?;
        let up = self.boundary_map(n + 1)?;
        let mut classifier = Echelon::new(space.dim());
        let mut boundaries = Vec::new();
        for col in &up.columns {
            if classifier.insert(col).is_ok() {
                boundaries.push(col.clone());
            }
        }
        let mut representatives = Vec::new();
        let mut rep_coords = Vec::new();
        let mut rep_slots = HashMap::new();
        for z in cycles.iter() {
            if let Ok(id) = classifier.insert(z) {
                rep_slots.insert(id, representatives.len());
                representatives.push(space.combine(z));
                rep_coords.push(z.clone());
            }
        }
        Ok(Homology {
            degree: n,
            cycles,
            boundaries,
            representatives,
            rep_coords,
            classifier,
            rep_slots,
        })
    }

    /// Class of a cycle.
    pub fn classify(&self, x: &LieElement) -> Result<HomologyClass> {
        let h = self.homology(x.degree())?;
        if x.is_zero() {
            return Ok(HomologyClass::zero(x.degree(), h.dim()));
        }
        h.classify_coords(&self.coordinates(x)?)
    }

    /// Representative cycle of a class.
    pub fn represent(&self, h: &HomologyClass) -> Result<LieElement> {
        let hom = self.homology(h.degree)?;
        let mut out = LieElement::zero(h.degree);
        for (c, r) in h.coords.iter().zip(hom.representatives()) {
            out.add_scaled(r, c);
        }
        Ok(out)
    }

    /// Dimensions of `H_n` for `1 <= n <= cap - 1`.
    pub fn homology_dims(&self) -> Result<BTreeMap<i64, usize>> {
        let mut out = BTreeMap::new();
        for n in 1..self.cap as i64 {
            out.insert(n, self.homology(n)?.dim());
        }
        Ok(out)
    }

    /// Checks `d^2 = 0` on generators, graded Jacobi and the derivation rule
    /// on random triples and pairs of basis elements within the cap.
    pub fn check(&self, samples: usize, seed: u64) -> Result<StructureReport> {
        let mut report = StructureReport {
            d_squared_failures: self.check_d_squared(),
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cap = self.cap as i64;
        let mut pools: Vec<Arc<DegreeSpace>> = Vec::new();
        for n in 1..=cap {
            let s = self.space(n)?;
            if s.dim() > 0 {
                pools.push(s);
            }
        }
        let pick = |rng: &mut ChaCha8Rng, max: i64| -> Option<LieElement> {
            let fits: Vec<&Arc<DegreeSpace>> = pools.iter().filter(|s| s.degree() <= max).collect();
            if fits.is_empty() {
                return None;
            }
            let s = fits[rng.gen_range(0..fits.len())];
            Some(s.elements()[rng.gen_range(0..s.dim())].clone())
        };
        for _ in 0..samples {
            let Some(a) = pick(&mut rng, cap) else { break };
            let Some(b) = pick(&mut rng, cap - a.degree()) else { continue };
            report.derivation_samples += 1;
            let lhs = self.apply_differential(&a.bracket(&b));
            let mut rhs = self.apply_differential(&a).bracket(&b);
            rhs.add_scaled(&a.bracket(&self.apply_differential(&b)), &Scalar::sign(a.degree()));
            if lhs != rhs {
                report
                    .derivation_failures
                    .push(format!("{} / {}", self.pivot_label(&a), self.pivot_label(&b)));
            }
            let Some(c) = pick(&mut rng, cap - a.degree() - b.degree()) else { continue };
            report.jacobi_samples += 1;
            if !jacobi_sum(&a, &b, &c).is_zero() {
                report.jacobi_failures.push(format!(
                    "{} / {} / {}",
                    self.pivot_label(&a),
                    self.pivot_label(&b),
                    self.pivot_label(&c)
                ));
            }
        }
        Ok(report)
    }
}

/// `(-1)^{|a||c|}[a,[b,c]] + (-1)^{|b||a|}[b,[c,a]] + (-1)^{|c||b|}[c,[a,b]]`
pub fn jacobi_sum(a: &LieElement, b: &LieElement, c: &LieElement) -> LieElement {
    let (da, db, dc) = (a.degree(), b.degree(), c.degree());
    let mut out = a.bracket(&b.bracket(c)).scale(&Scalar::sign(da * dc));
    out.add_scaled(&b.bracket(&c.bracket(a)), &Scalar::sign(db * da));
    out.add_scaled(&c.bracket(&a.bracket(b)), &Scalar::sign(dc * db));
    out
}

/// Reduced row echelon form of a list of homogeneous elements, pivoting on
/// the smallest word; rows come out sorted by pivot. Also returns the
/// indices of the candidates that were independent of the earlier ones.
fn reduce_block(candidates: Vec<LieElement>) -> (Vec<LieElement>, Vec<usize>) {
    let mut rows: Vec<LieElement> = Vec::new();
    let mut independent = Vec::new();
    let mut pivots: HashMap<Word, usize> = HashMap::new();
    for (idx, mut x) in candidates.into_iter().enumerate() {
        let hits: Vec<(usize, Scalar)> = x
            .terms()
            .iter()
            .filter_map(|(w, c)| pivots.get(w).map(|&i| (i, c.clone())))
            .collect();
        for (i, c) in hits {
            x.add_scaled(&rows[i], &-c);
        }
        let Some(p) = x.min_word().cloned() else {
            continue;
        };
        let inv = x.coeff(&p).inv().expect("nonzero");
        x = x.scale(&inv);
        for r in rows.iter_mut() {
            let c = r.coeff(&p);
            if !c.is_zero() {
                r.add_scaled(&x, &-c);
            }
        }
        pivots.insert(p, rows.len());
        rows.push(x);
        independent.push(idx);
    }
    rows.sort_by(|a, b| a.min_word().cmp(&b.min_word()));
    (rows, independent)
}
