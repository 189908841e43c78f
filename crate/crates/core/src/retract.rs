//! Homotopy retracts `(L, i, q, K)` induced by decompositions
//! `L_n = A_n ⊕ ∂A_{n+1} ⊕ C_n`.
//!
//! `A_n` is a complement of the cycles, `C_n` a complement of the boundaries
//! inside the cycles. The homology `H_n` carries the basis of
//! [`FreeDgl::homology`]; `i` sends a class to its unique representative in
//! `C_n`, `q` reads off the class of the `C` component and `K` inverts the
//! differential on the `∂A` component and kills `A` and `C`.
//!
//! The maps `i`, `q` are defined up to degree `cap - 1` and `K` on degrees
//! `n` with `n + 1 <= cap`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dgl::{FreeDgl, HomologyClass};
use crate::error::{Error, Result};
use crate::lie::LieElement;
use crate::qlinalg::{self, Basis, Echelon, LinearMap, Scalar};
use crate::syntax::{self, Part, RetractDocument, RetractEntry};

/// Anything that provides the maps of a homotopy retract.
pub trait HomotopyData {
    fn dgl(&self) -> &FreeDgl;
    /// `i: H_n -> L_n`
    fn include(&self, h: &HomologyClass) -> Result<LieElement>;
    /// `q: L_n -> H_n`
    fn project(&self, x: &LieElement) -> Result<HomologyClass>;
    /// `K: L_n -> L_{n+1}`
    fn homotopy(&self, x: &LieElement) -> Result<LieElement>;
    /// The complements `(A_n, C_n)` when the data comes from a decomposition.
    fn parts(&self, _n: i64) -> Option<(&[LieElement], &[LieElement])> {
        None
    }
}

/// A per-degree choice of elements for `A` and `C`.
///
/// In strict mode every listed degree must be complete; degrees that are not
/// listed are always filled in greedily from the Lie basis (for `A`) and the
/// standard homology representatives (for `C`).
#[derive(Clone, Debug, Default)]
pub struct Decomposition {
    pub a: BTreeMap<i64, Vec<LieElement>>,
    pub c: BTreeMap<i64, Vec<LieElement>>,
    /// Complete partial lists greedily instead of rejecting them.
    pub complete_partial: bool,
}

impl Decomposition {
    /// Reads a decomposition written in the retract file format.
    pub fn from_document(dgl: &FreeDgl, doc: &RetractDocument) -> Result<Self> {
        let mut out = Decomposition::default();
        for e in &doc.entries {
            let x = syntax::eval_in(dgl, &e.expr)?;
            if !x.is_zero() && x.degree() != e.degree {
                return Err(Error::InvalidDecomposition {
                    degree: e.degree,
                    reason: format!("`{}` has degree {}", e.expr, x.degree()),
                });
            }
            let slot = match e.part {
                Part::A => &mut out.a,
                Part::C => &mut out.c,
            };
            slot.entry(e.degree).or_default().push(x);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
struct Level {
    a: Vec<LieElement>,
    /// echelon of the coordinates of `∂a_j` in `L_{n-1}`, inserted in order
    lift: Echelon,
    c: Vec<LieElement>,
    /// `i` of the standard basis classes of `H_n`
    include: Vec<LieElement>,
}

/// A homotopy retract built from a decomposition. Immutable once built.
#[derive(Clone, Debug)]
pub struct Retract {
    dgl: Arc<FreeDgl>,
    levels: Vec<Level>,
}

fn cap_error(needed: i64, dgl: &FreeDgl, context: &str) -> Error {
    Error::DegreeCap {
        needed,
        cap: dgl.cap(),
        context: context.to_string(),
    }
}

fn coords_or_empty(dgl: &FreeDgl, x: &LieElement, degree: i64) -> Result<Vec<Scalar>> {
    if degree < 1 {
        return Ok(Vec::new());
    }
    if x.is_zero() {
        return Ok(vec![Scalar::zero(); dgl.dim(degree)?]);
    }
    dgl.space(degree)?.coordinates(x)
}

fn combination(elements: &[LieElement], combo: &BTreeMap<usize, Scalar>, degree: i64) -> LieElement {
    let mut out = LieElement::zero(degree);
    for (&j, c) in combo {
        out.add_scaled(&elements[j], c);
    }
    out
}

/// Builds the retract of a decomposition, completing unlisted degrees.
pub fn retract_from_decomposition(dgl: Arc<FreeDgl>, choice: &Decomposition) -> Result<Retract> {
    let cap = dgl.cap() as i64;
    for &n in choice.a.keys().chain(choice.c.keys()) {
        if n > cap {
            return Err(cap_error(n, &dgl, "decomposition"));
        }
        if n < 1 {
            return Err(Error::InvalidDecomposition {
                degree: n,
                reason: "degrees start at 1".into(),
            });
        }
    }
    let mut levels = vec![Level {
        a: Vec::new(),
        lift: Echelon::new(0),
        c: Vec::new(),
        include: Vec::new(),
    }];
    for n in 1..=cap {
        let space = dgl.space(n)?;
        let target = space.dim() - dgl.cycles(n)?.len();
        let mut lift = Echelon::new(dgl.dim(n - 1)?);
        let mut a: Vec<LieElement> = Vec::new();
        let given = choice.a.get(&n);
        for x in given.into_iter().flatten() {
            if !x.is_zero() && x.degree() != n {
                return Err(Error::InvalidDecomposition {
                    degree: n,
                    reason: format!("element {} has degree {}", syntax::format_element(&dgl, x), x.degree()),
                });
            }
            space.coordinates(x)?;
            let d = dgl.apply_differential(x);
            let dc = coords_or_empty(&dgl, &d, n - 1)?;
            if let Some(combo) = lift.express(&dc) {
                let mut cycle = x.clone();
                cycle.add_scaled(&combination(&a, &combo, n), &-Scalar::one());
                return Err(Error::InvalidDecomposition {
                    degree: n,
                    reason: format!(
                        "A meets the cycles: {} is a cycle",
                        syntax::format_element(&dgl, &cycle)
                    ),
                });
            }
            lift.insert(&dc).expect("checked independent");
            a.push(x.clone());
        }
        if given.is_some() && a.len() < target && !choice.complete_partial {
            return Err(Error::InvalidDecomposition {
                degree: n,
                reason: format!("A has {} elements, a complement of the cycles needs {target}", a.len()),
            });
        }
        for e in space.elements() {
            if a.len() == target {
                break;
            }
            let dc = coords_or_empty(&dgl, &dgl.apply_differential(e), n - 1)?;
            if !lift.contains(&dc) {
                lift.insert(&dc).expect("checked independent");
                a.push(e.clone());
            }
        }
        debug_assert_eq!(a.len(), target);

        let (c, include) = if n < cap {
            build_c(&dgl, n, choice)?
        } else {
            (Vec::new(), Vec::new())
        };
        levels.push(Level { a, lift, c, include });
    }
    Ok(Retract { dgl, levels })
}

fn build_c(dgl: &FreeDgl, n: i64, choice: &Decomposition) -> Result<(Vec<LieElement>, Vec<LieElement>)> {
    let hom = dgl.homology(n)?;
    let dim = hom.dim();
    let mut classes = Echelon::new(dim);
    let mut c: Vec<LieElement> = Vec::new();
    let given = choice.c.get(&n);
    for x in given.into_iter().flatten() {
        let h = dgl.classify(x).map_err(|_| Error::InvalidDecomposition {
            degree: n,
            reason: format!("C element {} is not a cycle", syntax::format_element(dgl, x)),
        })?;
        if classes.insert(&h.coords).is_err() {
            return Err(Error::InvalidDecomposition {
                degree: n,
                reason: format!(
                    "C element {} is dependent on the others modulo boundaries",
                    syntax::format_element(dgl, x)
                ),
            });
        }
        c.push(x.clone());
    }
    if given.is_some() && c.len() < dim && !choice.complete_partial {
        return Err(Error::InvalidDecomposition {
            degree: n,
            reason: format!("C has {} elements, homology has dimension {dim}", c.len()),
        });
    }
    for (j, r) in hom.representatives().iter().enumerate() {
        if c.len() == dim {
            break;
        }
        let unit = HomologyClass::unit(n, dim, j).coords;
        if !classes.contains(&unit) {
            classes.insert(&unit).expect("checked independent");
            c.push(r.clone());
        }
    }
    let include = (0..dim)
        .map(|j| {
            let unit = HomologyClass::unit(n, dim, j).coords;
            let combo = classes.express(&unit).expect("C spans homology");
            combination(&c, &combo, n)
        })
        .collect();
    Ok((c, include))
}

/// Adds up to `SHIFTS` random multiples of random elements of `pool`.
fn perturb(x: &mut LieElement, pool: &[LieElement], rng: &mut ChaCha8Rng) {
    const SHIFTS: usize = 3;
    if pool.is_empty() {
        return;
    }
    for _ in 0..SHIFTS {
        let c = [-2, -1, 0, 1, 2][rng.gen_range(0..5)];
        let z = &pool[rng.gen_range(0..pool.len())];
        x.add_scaled(z, &Scalar::from_int(c));
    }
}

/// A retract whose complements are random: `A_n` is the graph of a random
/// sparse small-integer map from the standard complement of `Z_n` into
/// `Z_n`, and `C_n` moves each standard representative by a random boundary.
/// Reproducible for a fixed seed.
pub fn random_retract(dgl: Arc<FreeDgl>, seed: u64) -> Result<Retract> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = dgl.cap() as i64;
    let mut choice = Decomposition::default();
    for n in 1..=cap {
        let space = dgl.space(n)?;
        let cycles = dgl.cycles(n)?;
        let cycle_elems: Vec<LieElement> = cycles.iter().map(|z| space.combine(z)).collect();
        let units = qlinalg::complement_units(&cycles, space.dim())?;
        let mut a = Vec::with_capacity(units.len());
        for j in units {
            let mut x = space.elements()[j].clone();
            perturb(&mut x, &cycle_elems, &mut rng);
            a.push(x);
        }
        choice.a.insert(n, a);
        if n < cap {
            let hom = dgl.homology(n)?;
            let boundaries: Vec<LieElement> = hom.boundary_basis().iter().map(|b| space.combine(b)).collect();
            let mut c = Vec::with_capacity(hom.dim());
            for r in hom.representatives() {
                let mut x = r.clone();
                perturb(&mut x, &boundaries, &mut rng);
                c.push(x);
            }
            choice.c.insert(n, c);
        }
    }
    retract_from_decomposition(dgl, &choice)
}

impl Retract {
    /// The retract with all complements chosen greedily.
    pub fn standard(dgl: Arc<FreeDgl>) -> Result<Self> {
        retract_from_decomposition(dgl, &Decomposition::default())
    }

    pub fn dgl_arc(&self) -> &Arc<FreeDgl> {
        &self.dgl
    }

    fn level(&self, n: i64, context: &str) -> Result<&Level> {
        if n > self.dgl.cap() as i64 {
            return Err(cap_error(n, &self.dgl, context));
        }
        if n < 1 {
            return Err(Error::InvalidArgument(format!("{context}: degree {n} is empty")));
        }
        Ok(&self.levels[n as usize])
    }

    pub fn a_part(&self, n: i64) -> Result<&[LieElement]> {
        Ok(&self.level(n, "A")?.a)
    }

    pub fn c_part(&self, n: i64) -> Result<&[LieElement]> {
        if n >= self.dgl.cap() as i64 {
            return Err(cap_error(n + 1, &self.dgl, "C"));
        }
        Ok(&self.level(n, "C")?.c)
    }

    /// The unique `a` in `A_n` with `∂a = y`, for a boundary `y` of degree `n - 1`.
    fn lift(&self, y: &LieElement, n: i64) -> Result<LieElement> {
        if y.is_zero() {
            return Ok(LieElement::zero(n));
        }
        let level = self.level(n, "homotopy")?;
        let coords = self.dgl.coordinates(y)?;
        let combo = level.lift.express(&coords).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "{} is not a boundary",
                syntax::format_element(&self.dgl, y)
            ))
        })?;
        Ok(combination(&level.a, &combo, n))
    }

    /// Splits `x` into its `A` component and the rest (a cycle).
    fn split_a(&self, x: &LieElement) -> Result<LieElement> {
        let n = x.degree();
        if n <= 1 {
            return Ok(LieElement::zero(n));
        }
        self.lift(&self.dgl.apply_differential(x), n)
    }

    /// Matrix of `K: L_n -> L_{n+1}` in the Lie bases.
    pub fn homotopy_map(&self, n: i64) -> Result<LinearMap> {
        let src = self.dgl.space(n)?;
        let dst = self.dgl.space(n + 1)?;
        let mut cols = Vec::with_capacity(src.dim());
        for e in src.elements() {
            cols.push(dst.coordinates(&self.homotopy(e)?)?);
        }
        LinearMap::new(src.basis().clone(), dst.basis().clone(), cols)
    }

    /// Matrix of `q: L_n -> H_n`.
    pub fn projection_map(&self, n: i64) -> Result<LinearMap> {
        let src = self.dgl.space(n)?;
        let h = self.dgl.homology(n)?;
        let mut cols = Vec::with_capacity(src.dim());
        for e in src.elements() {
            cols.push(self.project(e)?.coords);
        }
        LinearMap::new(src.basis().clone(), Basis::standard(format!("H{n}"), h.dim()), cols)
    }

    /// Matrix of `i: H_n -> L_n`.
    pub fn inclusion_map(&self, n: i64) -> Result<LinearMap> {
        let dst = self.dgl.space(n)?;
        let level = &self.levels[n as usize];
        let cols = level
            .include
            .iter()
            .map(|x| dst.coordinates(x))
            .collect::<Result<Vec<_>>>()?;
        LinearMap::new(Basis::standard(format!("H{n}"), cols.len()), dst.basis().clone(), cols)
    }

    /// Writes the decomposition in the retract file format, every degree
    /// listed, so that reading it back gives the same retract.
    pub fn to_document(&self) -> RetractDocument {
        let mut doc = RetractDocument::default();
        for (n, level) in self.levels.iter().enumerate().skip(1) {
            for (part, xs) in [(Part::A, &level.a), (Part::C, &level.c)] {
                for x in xs {
                    doc.entries.push(RetractEntry {
                        part,
                        degree: n as i64,
                        expr: syntax::element_to_expr(&self.dgl, x),
                    });
                }
            }
        }
        doc
    }

    /// The decomposition that reproduces this retract.
    pub fn decomposition(&self) -> Decomposition {
        let mut out = Decomposition::default();
        for (n, level) in self.levels.iter().enumerate().skip(1) {
            out.a.insert(n as i64, level.a.clone());
            if n < self.dgl.cap() as usize {
                out.c.insert(n as i64, level.c.clone());
            }
        }
        out
    }
}

impl PartialEq for Retract {
    fn eq(&self, other: &Self) -> bool {
        self.levels.len() == other.levels.len()
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(x, y)| x.a == y.a && x.c == y.c)
    }
}

impl HomotopyData for Retract {
    fn dgl(&self) -> &FreeDgl {
        &self.dgl
    }

    fn include(&self, h: &HomologyClass) -> Result<LieElement> {
        let n = h.degree;
        if n >= self.dgl.cap() as i64 {
            return Err(cap_error(n + 1, &self.dgl, "inclusion"));
        }
        let level = self.level(n, "inclusion")?;
        if h.coords.len() != level.include.len() {
            return Err(Error::DimensionMismatch {
                expected: level.include.len(),
                found: h.coords.len(),
            });
        }
        let mut out = LieElement::zero(n);
        for (c, x) in h.coords.iter().zip(&level.include) {
            out.add_scaled(x, c);
        }
        Ok(out)
    }

    fn project(&self, x: &LieElement) -> Result<HomologyClass> {
        let n = x.degree();
        if n >= self.dgl.cap() as i64 {
            return Err(cap_error(n + 1, &self.dgl, "projection"));
        }
        if n < 1 {
            return Err(Error::InvalidArgument(format!("projection: degree {n} is empty")));
        }
        let a = self.split_a(x)?;
        self.dgl.classify(&(x - &a))
    }

    fn homotopy(&self, x: &LieElement) -> Result<LieElement> {
        let n = x.degree();
        if n + 1 > self.dgl.cap() as i64 {
            return Err(cap_error(n + 1, &self.dgl, "homotopy"));
        }
        if n < 1 {
            return Ok(LieElement::zero(n + 1));
        }
        let a = self.split_a(x)?;
        let c = self.include(&self.project(x)?)?;
        let mut b = x - &a;
        b.add_scaled(&c, &-Scalar::one());
        self.lift(&b, n + 1)
    }

    fn parts(&self, n: i64) -> Option<(&[LieElement], &[LieElement])> {
        if n < 1 || n >= self.dgl.cap() as i64 {
            return None;
        }
        let level = &self.levels[n as usize];
        Some((&level.a, &level.c))
    }
}

/// Outcome of one identity in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub degree: i64,
    pub samples: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Default)]
pub struct RetractReport {
    pub checks: Vec<IdentityCheck>,
}

impl RetractReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    /// Whether every degree of the named identity passed.
    pub fn identity_passed(&self, identity: &str) -> bool {
        self.checks
            .iter()
            .filter(|c| c.identity == identity)
            .all(|c| c.failures == 0)
    }

    pub fn failing(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| c.failures > 0)
    }
}

pub const ID_QI: &str = "qi = id";
pub const ID_HOMOTOPY: &str = "id - iq = dK + Kd";
pub const ID_DKD: &str = "dKd = d";
pub const ID_KK: &str = "KK = 0";
pub const ID_QK: &str = "qK = 0";
pub const ID_KI: &str = "Ki = 0";
pub const ID_KA: &str = "KA = 0";
pub const ID_KC: &str = "KC = 0";
pub const ID_DI: &str = "di = 0";
pub const ID_QD: &str = "qd = 0";

/// Checks the retract identities on basis elements, degree by degree, as far
/// as the cap allows.
pub fn verify_retract<R: HomotopyData + ?Sized>(r: &R) -> Result<RetractReport> {
    let dgl = r.dgl();
    let cap = dgl.cap() as i64;
    let mut report = RetractReport::default();
    let mut record = |identity: &'static str, degree: i64, outcomes: Vec<bool>| {
        report.checks.push(IdentityCheck {
            identity,
            degree,
            samples: outcomes.len(),
            failures: outcomes.iter().filter(|ok| !**ok).count(),
        });
    };
    let zero_or_k = |x: &LieElement| -> Result<LieElement> {
        if x.degree() < 1 {
            Ok(LieElement::zero(x.degree() + 1))
        } else {
            r.homotopy(x)
        }
    };
    for n in 1..=cap {
        let basis = dgl.lie_basis(n)?;
        if n < cap {
            let hdim = dgl.homology(n)?.dim();
            let mut qi = Vec::new();
            let mut di = Vec::new();
            let mut ki = Vec::new();
            for j in 0..hdim {
                let h = HomologyClass::unit(n, hdim, j);
                let x = r.include(&h)?;
                qi.push(r.project(&x)? == h);
                di.push(dgl.apply_differential(&x).is_zero());
                ki.push(r.homotopy(&x)?.is_zero());
            }
            record(ID_QI, n, qi);
            record(ID_DI, n, di);
            record(ID_KI, n, ki);

            let mut hom = Vec::new();
            for x in &basis {
                let lhs = x - &r.include(&r.project(x)?)?;
                let mut rhs = dgl.apply_differential(&r.homotopy(x)?);
                rhs.add_scaled(&zero_or_k(&dgl.apply_differential(x))?, &Scalar::one());
                hom.push(lhs == rhs);
            }
            record(ID_HOMOTOPY, n, hom);

            let mut qd = Vec::new();
            for x in dgl.lie_basis(n + 1)? {
                qd.push(r.project(&dgl.apply_differential(&x))?.is_zero());
            }
            record(ID_QD, n, qd);

            if let Some((a, c)) = r.parts(n) {
                let ka = a.iter().map(|x| Ok(r.homotopy(x)?.is_zero())).collect::<Result<Vec<_>>>()?;
                let kc = c.iter().map(|x| Ok(r.homotopy(x)?.is_zero())).collect::<Result<Vec<_>>>()?;
                record(ID_KA, n, ka);
                record(ID_KC, n, kc);
            }
        }
        if n >= 2 {
            let mut dkd = Vec::new();
            for x in &basis {
                let dx = dgl.apply_differential(x);
                dkd.push(dgl.apply_differential(&zero_or_k(&dx)?) == dx);
            }
            record(ID_DKD, n, dkd);
        }
        if n + 2 <= cap {
            let mut kk = Vec::new();
            let mut qk = Vec::new();
            for x in &basis {
                let k = r.homotopy(x)?;
                kk.push(r.homotopy(&k)?.is_zero());
                qk.push(r.project(&k)?.is_zero());
            }
            record(ID_KK, n, kk);
            record(ID_QK, n, qk);
        }
    }
    Ok(report)
}

/// Why no retract can contain the given images in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedObstruction {
    pub degree: i64,
    /// Coefficients of the named images whose sum is a cycle.
    pub combination: Vec<(String, Scalar)>,
    /// The resulting cycle (zero when the images are linearly dependent).
    pub cycle: LieElement,
}

/// A retract with prescribed elements in `A`.
#[derive(Clone, Debug)]
pub struct AdaptedRetract {
    pub retract: Retract,
    /// Prescribed `C` elements that had to be left out because their classes
    /// were dependent on earlier ones.
    pub skipped_in_c: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum AdaptedOutcome {
    Adapted(Box<AdaptedRetract>),
    Obstructed(AdaptedObstruction),
}

/// Searches for a retract with every `images` element in `A`, and the
/// `cycles` (when their classes are independent) in `C`. `A` is completed
/// greedily. On success `K∂x = x` is checked for every prescribed `x`.
pub fn adapted_retract(
    dgl: Arc<FreeDgl>,
    images: &[(String, LieElement)],
    cycles: &[(String, LieElement)],
) -> Result<AdaptedOutcome> {
    let mut by_degree: BTreeMap<i64, Vec<&(String, LieElement)>> = BTreeMap::new();
    for item in images {
        by_degree.entry(item.1.degree()).or_default().push(item);
    }
    let mut choice = Decomposition {
        complete_partial: true,
        ..Default::default()
    };
    for (&n, items) in &by_degree {
        if n > dgl.cap() as i64 {
            return Err(cap_error(n, &dgl, "adapted retract"));
        }
        let mut e = Echelon::new(dgl.dim(n - 1)?);
        for (k, (name, x)) in items.iter().enumerate() {
            let dc = coords_or_empty(&dgl, &dgl.apply_differential(x), n - 1)?;
            if let Err(combo) = e.insert(&dc) {
                let mut combination = vec![(name.clone(), Scalar::one())];
                let mut cycle = x.clone();
                for (j, c) in combo {
                    combination.push((items[j].0.clone(), -&c));
                    cycle.add_scaled(&items[j].1, &-&c);
                }
                debug_assert!(k > 0 || dc.iter().all(Scalar::is_zero));
                return Ok(AdaptedOutcome::Obstructed(AdaptedObstruction {
                    degree: n,
                    combination,
                    cycle,
                }));
            }
        }
        choice.a.insert(n, items.iter().map(|(_, x)| x.clone()).collect());
    }
    let mut skipped_in_c = Vec::new();
    let mut chosen: BTreeMap<i64, Echelon> = BTreeMap::new();
    for (name, x) in cycles {
        let n = x.degree();
        let h = dgl.classify(x)?;
        let e = chosen.entry(n).or_insert_with(|| Echelon::new(h.coords.len()));
        if e.insert(&h.coords).is_ok() {
            choice.c.entry(n).or_default().push(x.clone());
        } else {
            skipped_in_c.push(name.clone());
        }
    }
    let retract = retract_from_decomposition(dgl, &choice)?;
    for (name, x) in images {
        let back = retract.homotopy(&retract.dgl.apply_differential(x))?;
        if &back != x {
            return Err(Error::InvalidDecomposition {
                degree: x.degree(),
                reason: format!("K d fails to fix the image of {name}"),
            });
        }
    }
    Ok(AdaptedOutcome::Adapted(Box::new(AdaptedRetract { retract, skipped_in_c })))
}
