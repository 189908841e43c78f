//! Fat-wedge models, extensions of sphere classes over them, and the higher
//! Whitehead bracket classes they produce.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalgebra::{check_phi, solve_phi, PhiOutcome};
use crate::dgl::{FreeDgl, Generator, HomologyClass};
use crate::error::{Error, Result};
use crate::lie::{GenId, LieElement};
use crate::qlinalg::{self, Echelon, Scalar};
use crate::retract::{adapted_retract, AdaptedObstruction, AdaptedOutcome, HomotopyData, Retract};
use crate::signs::{self, Permutation};
use crate::syntax::{self, ExtensionDocument};
use crate::transfer::{bracket_image_span, epsilon_sign, LInftyTable, Transfer};

/// The free model of a fat wedge of spheres, with the top cell `ω`.
#[derive(Clone, Debug)]
pub struct WedgeModel {
    spheres: Vec<i64>,
    /// index sets of the generators, in generator order
    subsets: Vec<Vec<usize>>,
    dgl: Arc<FreeDgl>,
    product: Arc<FreeDgl>,
    omega: LieElement,
}

/// Sign of the term `[u_J, u_{I∖J}]` in `∂u_I`: the Koszul sign of
/// reordering `I` into `(J, I∖J)` with the sphere dimensions as degrees,
/// times `-(-1)^{Σ_{j∈J} n_j}`.
fn split_sign(spheres: &[i64], whole: &[usize], part: &[usize]) -> i64 {
    let rest: Vec<usize> = whole.iter().copied().filter(|i| !part.contains(i)).collect();
    let order: Vec<usize> = part
        .iter()
        .chain(&rest)
        .map(|i| whole.iter().position(|j| j == i).expect("subset"))
        .collect();
    let perm = Permutation::new(order).expect("reordering of a set");
    let degrees: Vec<i64> = whole.iter().map(|&i| spheres[i]).collect();
    let kappa = signs::koszul_sign(&perm, &degrees).expect("lengths agree");
    let nj: i64 = part.iter().map(|&i| spheres[i]).sum();
    -kappa * if nj % 2 == 0 { 1 } else { -1 }
}

/// Generator name of an index set: `u` followed by the one-based indices.
pub fn subset_name(set: &[usize]) -> String {
    let digits: String = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("u{digits}")
}

/// Builds the fat-wedge model on spheres of the given dimensions. The cap
/// defaults to `N - 1` with `N` the sum of the dimensions, the least cap at
/// which the class of `ω` is computed.
pub fn build_fat_wedge(spheres: &[i64], cap: Option<u32>) -> Result<WedgeModel> {
    let k = spheres.len();
    if !(2..=9).contains(&k) {
        return Err(Error::InvalidArgument(format!("fat wedges need 2 to 9 spheres, got {k}")));
    }
    if let Some(n) = spheres.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!("sphere dimension {n} is below 2")));
    }
    let total: i64 = spheres.iter().sum();
    let cap = cap.unwrap_or((total - 1) as u32);
    if (cap as i64) < total - 2 {
        return Err(Error::DegreeCap {
            needed: total - 2,
            cap,
            context: "attaching element of the fat wedge".into(),
        });
    }
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for s in 1..=k {
        subsets.extend(signs::combinations(k, s));
    }
    let id_of: BTreeMap<Vec<usize>, GenId> = subsets
        .iter()
        .enumerate()
        .map(|(j, s)| (s.clone(), j as GenId))
        .collect();
    let degree = |set: &[usize]| set.iter().map(|&i| spheres[i]).sum::<i64>() - 1;
    let mut generators = Vec::new();
    let mut differential = Vec::new();
    for set in &subsets {
        generators.push(Generator::new(subset_name(set), degree(set)));
        let mut d = LieElement::zero(degree(set) - 1);
        for p in 1..set.len() {
            for part in signs::combinations(set.len(), p) {
                if part[0] != 0 {
                    continue;
                }
                let j: Vec<usize> = part.iter().map(|&x| set[x]).collect();
                let rest: Vec<usize> = set.iter().copied().filter(|i| !j.contains(i)).collect();
                let a = LieElement::generator(id_of[&j], degree(&j));
                let b = LieElement::generator(id_of[&rest], degree(&rest));
                d.add_scaled(&a.bracket(&b), &Scalar::from_int(split_sign(spheres, set, &j)));
            }
        }
        differential.push(d);
    }
    let omega = differential.last().expect("top generator").clone();
    let product = FreeDgl::new(generators.clone(), differential.clone(), cap)?;
    generators.pop();
    differential.pop();
    subsets.pop();
    let dgl = FreeDgl::new(generators, differential, cap)?;
    Ok(WedgeModel {
        spheres: spheres.to_vec(),
        subsets,
        dgl: Arc::new(dgl),
        product: Arc::new(product),
        omega,
    })
}

impl WedgeModel {
    pub fn k(&self) -> usize {
        self.spheres.len()
    }

    pub fn spheres(&self) -> &[i64] {
        &self.spheres
    }

    /// The fat-wedge model itself.
    pub fn dgl(&self) -> &Arc<FreeDgl> {
        &self.dgl
    }

    /// The product model: the fat wedge plus the top generator with `∂ = ω`.
    pub fn product(&self) -> &Arc<FreeDgl> {
        &self.product
    }

    /// The attaching element, of degree `N - 2`.
    pub fn omega(&self) -> &LieElement {
        &self.omega
    }

    /// Index sets of the generators in generator order.
    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn generator_id(&self, set: &[usize]) -> Option<GenId> {
        self.subsets.iter().position(|s| s == set).map(|j| j as GenId)
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.dgl.generators()[id as usize].name
    }

    /// Generator ids with index sets of size `s`.
    pub fn stage(&self, s: usize) -> impl Iterator<Item = GenId> + '_ {
        self.subsets
            .iter()
            .enumerate()
            .filter(move |(_, set)| set.len() == s)
            .map(|(j, _)| j as GenId)
    }

    /// `∂u_I` for a proper index set, or `ω` for the full set.
    pub fn boundary_of(&self, set: &[usize]) -> Result<LieElement> {
        if set.len() == self.k() {
            return Ok(self.omega.clone());
        }
        let id = self
            .generator_id(set)
            .ok_or_else(|| Error::InvalidArgument(format!("no generator for {set:?}")))?;
        Ok(self.dgl.generator_differential(id).clone())
    }
}

/// A partial or total DGL map from a fat-wedge model into a target.
#[derive(Clone, Debug)]
pub struct Extension {
    target: Arc<FreeDgl>,
    images: Vec<Option<LieElement>>,
}

impl PartialEq for Extension {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && self.target.generators() == other.target.generators()
    }
}

impl Extension {
    pub fn new(model: &WedgeModel, target: Arc<FreeDgl>) -> Self {
        Extension {
            target,
            images: vec![None; model.subsets.len()],
        }
    }

    /// The identity of the fat-wedge model.
    pub fn identity(model: &WedgeModel) -> Self {
        let target = model.dgl.clone();
        let images = (0..model.subsets.len())
            .map(|j| Some(model.dgl.generator(j as GenId)))
            .collect();
        Extension { target, images }
    }

    pub fn target(&self) -> &Arc<FreeDgl> {
        &self.target
    }

    pub fn image(&self, id: GenId) -> Option<&LieElement> {
        self.images[id as usize].as_ref()
    }

    pub fn assign(&mut self, model: &WedgeModel, id: GenId, x: LieElement) -> Result<()> {
        let want = model.dgl.generator_degree(id);
        if !x.is_zero() && x.degree() != want {
            return Err(Error::InvalidArgument(format!(
                "image of {} has degree {}, expected {want}",
                model.name(id),
                x.degree()
            )));
        }
        self.images[id as usize] = Some(if x.is_zero() { LieElement::zero(want) } else { x });
        Ok(())
    }

    /// Largest `s` such that every generator with at most `s` indices has
    /// an image.
    pub fn stage(&self, model: &WedgeModel) -> usize {
        let mut s = 0;
        while s + 1 < model.k() && model.stage(s + 1).all(|id| self.images[id as usize].is_some()) {
            s += 1;
        }
        s
    }

    pub fn is_total(&self, model: &WedgeModel) -> bool {
        self.stage(model) + 1 == model.k()
    }

    /// Image of an element of the model under the algebra map.
    pub fn apply(&self, x: &LieElement) -> Result<LieElement> {
        let mut out: Option<LieElement> = None;
        for (w, c) in x.terms() {
            let mut term: Option<LieElement> = None;
            for &g in w {
                let img = self.images[g as usize]
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument(format!("generator {g} has no image yet")))?;
                term = Some(match term {
                    None => img.clone(),
                    Some(t) => t.tensor_mul(img),
                });
            }
            let term = term.expect("nonempty word").scale(c);
            match &mut out {
                None => out = Some(term),
                Some(o) => o.add_scaled(&term, &Scalar::one()),
            }
        }
        Ok(out.unwrap_or_else(|| LieElement::zero(x.degree())))
    }

    /// Checks that sphere images are cycles and that `∂φ(u) = φ(∂u)` on every
    /// assigned generator.
    pub fn validate(&self, model: &WedgeModel) -> Result<()> {
        for (j, img) in self.images.iter().enumerate() {
            let Some(img) = img else { continue };
            let id = j as GenId;
            if !img.is_zero() {
                self.target.coordinates(img).map_err(|_| {
                    Error::InvalidArgument(format!("image of {} is not a Lie element below the cap", model.name(id)))
                })?;
            }
            let lhs = self.target.apply_differential(img);
            let du = model.dgl.generator_differential(id);
            let rhs = match self.apply(du) {
                Ok(x) => x,
                Err(_) => continue,
            };
            if !(lhs.is_zero() && rhs.is_zero()) && lhs != rhs {
                return Err(Error::NotChainMap(model.name(id).to_string()));
            }
        }
        Ok(())
    }

    /// Reads an extension file: sphere dimensions must match the model and
    /// every assignment names a model generator.
    pub fn from_document(model: &WedgeModel, target: Arc<FreeDgl>, doc: &ExtensionDocument) -> Result<Self> {
        if doc.spheres != model.spheres {
            return Err(Error::InvalidArgument(format!(
                "extension is for spheres {:?}, the model has {:?}",
                doc.spheres, model.spheres
            )));
        }
        let mut ext = Extension::new(model, target.clone());
        for (name, expr) in &doc.assignments {
            let id = model
                .dgl
                .generator_id(name)
                .ok_or_else(|| Error::InvalidArgument(format!("`{name}` is not a generator of the fat wedge")))?;
            let x = syntax::eval_in(&target, expr)?;
            ext.assign(model, id, x)?;
        }
        ext.validate(model)?;
        Ok(ext)
    }

    pub fn to_document(&self, model: &WedgeModel) -> ExtensionDocument {
        ExtensionDocument {
            spheres: model.spheres.clone(),
            assignments: self
                .images
                .iter()
                .enumerate()
                .filter_map(|(j, img)| {
                    img.as_ref().map(|x| {
                        (model.name(j as GenId).to_string(), syntax::element_to_expr(&self.target, x))
                    })
                })
                .collect(),
        }
    }
}

/// How to choose `φ(u)` with `∂φ(u) = φ(∂u)` once the right side bounds.
#[derive(Clone, Copy)]
pub enum Strategy<'a> {
    /// The reduced echelon solution of the linear system.
    Echelon,
    /// `K φ(∂u)` for the homotopy of a retract.
    HomotopyImage(&'a dyn HomotopyData),
}

/// A stage where `φ(∂u)` is a cycle but not a boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionObstruction {
    pub generator: String,
    pub element: LieElement,
    pub class: HomologyClass,
}

#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    Extended(Extension),
    Obstructed(ExtensionObstruction),
}

/// One solution of `∂y = b` for a boundary `b`.
fn solve_boundary(target: &FreeDgl, b: &LieElement, degree: i64, strategy: Strategy<'_>) -> Result<Option<LieElement>> {
    if b.is_zero() {
        return Ok(Some(LieElement::zero(degree)));
    }
    match strategy {
        Strategy::Echelon => {
            let coords = target.coordinates(b)?;
            let cols = target.differential_columns(degree)?;
            Ok(qlinalg::solve_raw(&cols, coords.len(), &coords).map(|y| target.space(degree).map(|s| s.combine(&y))).transpose()?)
        }
        Strategy::HomotopyImage(r) => {
            let y = r.homotopy(b)?;
            Ok((target.apply_differential(&y) == *b).then_some(y))
        }
    }
}

/// Extends sphere representatives over the fat wedge stage by stage.
pub fn extend(model: &WedgeModel, target: Arc<FreeDgl>, reps: &[LieElement], strategy: Strategy<'_>) -> Result<ExtendOutcome> {
    extend_perturbed(model, target, reps, strategy, &BTreeMap::new())
}

/// As [`extend`], adding `perturbation[u]` (a cycle) to each solution.
fn extend_perturbed(
    model: &WedgeModel,
    target: Arc<FreeDgl>,
    reps: &[LieElement],
    strategy: Strategy<'_>,
    perturbation: &BTreeMap<GenId, LieElement>,
) -> Result<ExtendOutcome> {
    if reps.len() != model.k() {
        return Err(Error::InvalidArgument(format!(
            "{} representatives for {} spheres",
            reps.len(),
            model.k()
        )));
    }
    let mut ext = Extension::new(model, target.clone());
    for (i, rep) in reps.iter().enumerate() {
        let id = model.generator_id(&[i]).expect("sphere generator");
        if !target.apply_differential(rep).is_zero() {
            return Err(Error::InvalidArgument(format!("representative {} is not a cycle", i + 1)));
        }
        ext.assign(model, id, rep.clone())?;
    }
    for s in 2..model.k() {
        for id in model.stage(s).collect::<Vec<_>>() {
            let degree = model.dgl.generator_degree(id);
            let b = ext.apply(model.dgl.generator_differential(id))?;
            if !target.apply_differential(&b).is_zero() {
                return Err(Error::NotChainMap(model.name(id).to_string()));
            }
            let class = target.classify(&b)?;
            if !class.is_zero() {
                return Ok(ExtendOutcome::Obstructed(ExtensionObstruction {
                    generator: model.name(id).to_string(),
                    element: b,
                    class,
                }));
            }
            let mut y = solve_boundary(&target, &b, degree, strategy)?.ok_or_else(|| {
                Error::InvalidArgument(format!("no solution for the image of {}", model.name(id)))
            })?;
            if let Some(p) = perturbation.get(&id) {
                y.add_scaled(p, &Scalar::one());
            }
            ext.assign(model, id, y)?;
        }
    }
    Ok(ExtendOutcome::Extended(ext))
}

/// `φ(ω)` and its class for a total extension.
pub fn whitehead_element(model: &WedgeModel, ext: &Extension) -> Result<(LieElement, HomologyClass)> {
    if !ext.is_total(model) {
        return Err(Error::InvalidArgument("the extension is not defined on every generator".into()));
    }
    let x = ext.apply(&model.omega)?;
    if !ext.target.apply_differential(&x).is_zero() {
        return Err(Error::NotChainMap("ω".into()));
    }
    let class = ext.target.classify(&x)?;
    Ok((x, class))
}

/// Classes of the sphere images.
pub fn sphere_classes(model: &WedgeModel, ext: &Extension) -> Result<Vec<HomologyClass>> {
    (0..model.k())
        .map(|i| {
            let id = model.generator_id(&[i]).expect("sphere generator");
            let x = ext.image(id).ok_or_else(|| Error::InvalidArgument("sphere image missing".into()))?;
            ext.target.classify(x)
        })
        .collect()
}

// ---------------------------------------------------------------- probing

pub const PROBE_GRID: [(i64, i64); 6] = [(-2, 1), (-1, 1), (-1, 2), (1, 2), (1, 1), (2, 1)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeDirection {
    pub generator: String,
    pub degree: i64,
    pub class_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    /// Extension found whose class is the target; coefficients per direction.
    Member(Vec<Scalar>),
    NotFound,
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    pub directions: Vec<ProbeDirection>,
    pub samples: usize,
    pub obstructed: usize,
    /// Distinct classes reached, in order of discovery.
    pub reached: Vec<HomologyClass>,
    /// Basis of the differences of reached classes from the first one.
    pub affine_span: Vec<HomologyClass>,
    /// `(class(+1) - class(-1)) / 2` per direction, spanned.
    pub first_order: Vec<HomologyClass>,
}

/// Samples extensions perturbed by homology representatives and looks for
/// one whose Whitehead class is `target_class`. Never concludes
/// non-membership.
pub fn membership_probe(
    model: &WedgeModel,
    target: Arc<FreeDgl>,
    reps: &[LieElement],
    target_class: &HomologyClass,
    budget: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let mut directions = Vec::new();
    let mut cycles: Vec<(GenId, LieElement)> = Vec::new();
    for s in 2..model.k() {
        for id in model.stage(s) {
            let degree = model.dgl.generator_degree(id);
            if degree >= target.cap() as i64 {
                continue;
            }
            let hom = target.homology(degree)?;
            for (j, r) in hom.representatives().iter().enumerate() {
                directions.push(ProbeDirection {
                    generator: model.name(id).to_string(),
                    degree,
                    class_index: j,
                });
                cycles.push((id, r.clone()));
            }
        }
    }
    let grid: Vec<Scalar> = PROBE_GRID.iter().map(|&(p, q)| Scalar::new(p, q).expect("grid")).collect();
    let top = model.omega.degree();
    let hdim = target.homology(top)?.dim();

    let mut report = ProbeReport {
        verdict: ProbeVerdict::NotFound,
        directions,
        samples: 0,
        obstructed: 0,
        reached: Vec::new(),
        affine_span: Vec::new(),
        first_order: Vec::new(),
    };
    let mut seen: BTreeSet<Vec<Scalar>> = BTreeSet::new();
    let mut span = Echelon::new(hdim);

    let mut run = |coeffs: &[Scalar], report: &mut ProbeReport| -> Result<Option<HomologyClass>> {
        let mut perturbation: BTreeMap<GenId, LieElement> = BTreeMap::new();
        for ((id, z), c) in cycles.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            let e = perturbation.entry(*id).or_insert_with(|| LieElement::zero(z.degree()));
            e.add_scaled(z, c);
        }
        report.samples += 1;
        let out = extend_perturbed(model, target.clone(), reps, Strategy::Echelon, &perturbation)?;
        let ExtendOutcome::Extended(ext) = out else {
            report.obstructed += 1;
            return Ok(None);
        };
        let (_, class) = whitehead_element(model, &ext)?;
        if seen.insert(class.coords.clone()) {
            if let Some(first) = report.reached.first() {
                let diff: Vec<Scalar> = class.coords.iter().zip(&first.coords).map(|(a, b)| a - b).collect();
                if span.insert(&diff).is_ok() {
                    report.affine_span.push(HomologyClass {
                        degree: top,
                        coords: diff,
                    });
                }
            }
            report.reached.push(class.clone());
        }
        Ok(Some(class))
    };

    let n = cycles.len();
    let zero = vec![Scalar::zero(); n];
    let check = |class: &Option<HomologyClass>| class.as_ref().is_some_and(|c| c == target_class);
    if budget == 0 {
        return Ok(report);
    }
    let base = run(&zero, &mut report)?;
    if check(&base) {
        report.verdict = ProbeVerdict::Member(zero);
        return Ok(report);
    }
    let mut first_order = Echelon::new(hdim);
    // single directions over the grid
    for d in 0..n {
        let mut plus_minus: Vec<Option<HomologyClass>> = Vec::new();
        for c in &grid {
            if report.samples >= budget {
                break;
            }
            let mut coeffs = zero.clone();
            coeffs[d] = c.clone();
            let got = run(&coeffs, &mut report)?;
            if check(&got) {
                report.verdict = ProbeVerdict::Member(coeffs);
                return Ok(report);
            }
            if c.is_one() || *c == -Scalar::one() {
                plus_minus.push(got);
            }
        }
        if let [Some(minus), Some(plus)] = plus_minus.as_slice() {
            let half = Scalar::new(1, 2).expect("half");
            let diff: Vec<Scalar> = plus.coords.iter().zip(&minus.coords).map(|(a, b)| &(a - b) * &half).collect();
            if first_order.insert(&diff).is_ok() {
                report.first_order.push(HomologyClass {
                    degree: top,
                    coords: diff,
                });
            }
        }
    }
    // random combinations
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while report.samples < budget && n > 1 {
        let coeffs: Vec<Scalar> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    grid[rng.gen_range(0..grid.len())].clone()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        let got = run(&coeffs, &mut report)?;
        if check(&got) {
            report.verdict = ProbeVerdict::Member(coeffs);
            return Ok(report);
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------- theorems

/// How `ε ℓ_k` relates to a Whitehead class `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedComparison {
    /// `ε ℓ_k = x`
    pub equal: bool,
    /// `ε ℓ_k = -x`
    pub opposite: bool,
}

impl SignedComparison {
    fn new(eps: i64, bracket: &HomologyClass, x: &HomologyClass) -> Self {
        let e = bracket.scale(&Scalar::from_int(eps));
        SignedComparison {
            equal: &e == x,
            opposite: e == x.scale(&-Scalar::one()),
        }
    }

    /// `+1` or `-1` when `ε ℓ_k = ±x`, `+1` when both are zero.
    pub fn realized_sign(&self) -> Option<i64> {
        if self.equal {
            Some(1)
        } else if self.opposite {
            Some(-1)
        } else {
            None
        }
    }
}

/// Is `v` in the span of `ℓ_2 .. ℓ_{k-1}` images in its degree? Returns the
/// coefficients over the spanning classes when it is.
fn in_lower_images(table: &LInftyTable, k: usize, v: &HomologyClass) -> Result<(bool, Vec<HomologyClass>, Option<Vec<Scalar>>)> {
    let mut spanning = Vec::new();
    for j in 2..k {
        spanning.extend(bracket_image_span(table, j, v.degree)?);
    }
    let mut e = Echelon::new(v.coords.len());
    for s in &spanning {
        let _ = e.insert(&s.coords);
    }
    let combo = e.express(&v.coords).map(|c| {
        let mut w = vec![Scalar::zero(); spanning.len()];
        for (j, x) in c {
            w[j] = x;
        }
        w
    });
    Ok((combo.is_some(), spanning, combo))
}

#[derive(Clone, Debug)]
pub struct ElprimeReport {
    pub arity: usize,
    pub epsilon: i64,
    pub bracket: HomologyClass,
    pub whitehead_class: HomologyClass,
    pub comparison: SignedComparison,
    /// `ε ℓ_k - x` lies in the images of the lower brackets.
    pub difference_in_lower_images: bool,
    /// `ε ℓ_k + x` lies in the images of the lower brackets.
    pub sum_in_lower_images: bool,
    /// Classes spanning the lower images in the degree of `x`.
    pub spanning: Vec<HomologyClass>,
    /// Coefficients over `spanning` expressing `ε ℓ_k - x`.
    pub witness: Option<Vec<Scalar>>,
    /// Exact solve of `δ(sx_1 ∧ .. ∧ sx_k + Φ) = sx`.
    pub certificate: PhiOutcome,
    /// The same with `-x` on the right.
    pub certificate_negated: PhiOutcome,
    /// Every certificate found passes an independent recheck.
    pub certificates_checked: bool,
}

impl ElprimeReport {
    /// `+1` or `-1` for the orientation of `x` in which a certificate exists
    /// (`+1` if both).
    pub fn certificate_sign(&self) -> Option<i64> {
        match (&self.certificate, &self.certificate_negated) {
            (PhiOutcome::Solved(_), _) => Some(1),
            (_, PhiOutcome::Solved(_)) => Some(-1),
            _ => None,
        }
    }
}

/// Checks `ε ℓ_k(x_1..x_k) - x ∈ Σ_{j<k} im ℓ_j` for the class `x` of a
/// total extension, and solves for the coalgebra certificate. `table` must
/// cover arities up to `k`.
pub fn verify_elprime<R: HomotopyData + ?Sized>(
    model: &WedgeModel,
    ext: &Extension,
    r: &R,
    table: &LInftyTable,
) -> Result<ElprimeReport> {
    let k = model.k();
    let xs = sphere_classes(model, ext)?;
    let (_, x) = whitehead_element(model, ext)?;
    let bracket = Transfer::new(r).ell(&xs)?;
    let eps = epsilon_sign(&xs.iter().map(|h| h.degree).collect::<Vec<_>>());
    let mut diff = bracket.scale(&Scalar::from_int(eps));
    diff.add_scaled(&x, &-Scalar::one());
    let (ok, spanning, witness) = in_lower_images(table, k, &diff)?;
    let mut sum = bracket.scale(&Scalar::from_int(eps));
    sum.add_scaled(&x, &Scalar::one());
    let (sum_ok, _, _) = in_lower_images(table, k, &sum)?;
    if table.max_arity() < k {
        return Err(Error::InvalidArgument(format!("the table must cover arity {k}")));
    }
    let neg = x.scale(&-Scalar::one());
    let certificate = solve_phi(table, &xs, &x)?;
    let certificate_negated = solve_phi(table, &xs, &neg)?;
    let mut certificates_checked = true;
    for (cert, target) in [(&certificate, &x), (&certificate_negated, &neg)] {
        if let PhiOutcome::Solved(c) = cert {
            certificates_checked &= check_phi(table, &xs, target, &c.phi)?;
        }
    }
    Ok(ElprimeReport {
        certificate,
        certificate_negated,
        certificates_checked,
        sum_in_lower_images: sum_ok,
        arity: k,
        epsilon: eps,
        comparison: SignedComparison::new(eps, &bracket, &x),
        bracket,
        whitehead_class: x,
        difference_in_lower_images: ok,
        spanning,
        witness,
    })
}

/// One instance of the induction identity `φ(∂u_I) = ε Σ_T ℓ_T(x_I)/|Aut T|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionCheck {
    pub generator: String,
    pub size: usize,
    pub holds: bool,
    /// Holds after negating the right side.
    pub holds_negated: bool,
}

#[derive(Clone, Debug)]
pub enum Main1Outcome {
    NotAdapted(AdaptedObstruction),
    Adapted {
        retract: Box<Retract>,
        /// sphere images that could not be put in `C`
        skipped_in_c: Vec<String>,
        bracket: HomologyClass,
        epsilon: i64,
        whitehead_class: HomologyClass,
        comparison: SignedComparison,
        induction: Vec<InductionCheck>,
    },
}

impl Main1Outcome {
    /// `ε ℓ_k = x` and every induction identity holds.
    pub fn holds(&self) -> bool {
        match self {
            Main1Outcome::NotAdapted(_) => false,
            Main1Outcome::Adapted {
                comparison, induction, ..
            } => comparison.equal && induction.iter().all(|c| c.holds),
        }
    }
}

/// Searches for a retract adapted to the extension and, when found, checks
/// `ε ℓ_k(x_1..x_k) = x` together with the induction identity for every
/// index set of size at least two.
pub fn verify_main1(model: &WedgeModel, ext: &Extension) -> Result<Main1Outcome> {
    ext.validate(model)?;
    let target = ext.target.clone();
    let mut images = Vec::new();
    let mut cycles = Vec::new();
    for (j, set) in model.subsets.iter().enumerate() {
        let id = j as GenId;
        let img = ext.image(id).ok_or_else(|| Error::InvalidArgument("extension is not total".into()))?;
        let named = (model.name(id).to_string(), img.clone());
        if set.len() == 1 {
            cycles.push(named);
        } else {
            images.push(named);
        }
    }
    let adapted = match adapted_retract(target, &images, &cycles)? {
        AdaptedOutcome::Obstructed(ob) => return Ok(Main1Outcome::NotAdapted(ob)),
        AdaptedOutcome::Adapted(a) => *a,
    };
    let r = adapted.retract;
    let xs = sphere_classes(model, ext)?;
    let transfer = Transfer::new(&r);
    let mut induction = Vec::new();
    let mut all_sets: Vec<Vec<usize>> = model.subsets.iter().filter(|s| s.len() >= 2).cloned().collect();
    all_sets.push((0..model.k()).collect());
    for set in all_sets {
        let args: Vec<HomologyClass> = set.iter().map(|&i| xs[i].clone()).collect();
        let eps = epsilon_sign(&args.iter().map(|h| h.degree).collect::<Vec<_>>());
        let rhs = transfer.ell_element(&args)?.scale(&Scalar::from_int(eps));
        let lhs = ext.apply(&model.boundary_of(&set)?)?;
        let name = if set.len() == model.k() {
            "ω".to_string()
        } else {
            subset_name(&set)
        };
        induction.push(InductionCheck {
            generator: name,
            size: set.len(),
            holds: lhs == rhs,
            holds_negated: lhs == -&rhs,
        });
    }
    let bracket = transfer.ell(&xs)?;
    let eps = epsilon_sign(&xs.iter().map(|h| h.degree).collect::<Vec<_>>());
    let (_, x) = whitehead_element(model, ext)?;
    Ok(Main1Outcome::Adapted {
        comparison: SignedComparison::new(eps, &bracket, &x),
        retract: Box::new(r),
        skipped_in_c: adapted.skipped_in_c,
        bracket,
        epsilon: eps,
        whitehead_class: x,
        induction,
    })
}

#[derive(Clone, Debug)]
pub struct ElsegundoReport {
    pub arity: usize,
    /// `ℓ_i = 0` for `2 <= i <= k - 2` on every tuple below the cap.
    pub hypothesis: bool,
    /// First nonvanishing lower bracket, as `(arity, tuple of table indices)`.
    pub hypothesis_failure: Option<(usize, Vec<usize>)>,
    /// `ℓ_{k-1}` vanishes on every `(k-1)`-subtuple of the classes.
    pub subtuples_vanish: Option<bool>,
    pub extension: Option<std::result::Result<HomologyClass, ExtensionObstruction>>,
    pub bracket: Option<HomologyClass>,
    pub comparison: Option<SignedComparison>,
}

impl ElsegundoReport {
    /// The conclusion holds, or the hypothesis fails (theorem not applicable).
    pub fn consistent(&self) -> bool {
        !self.hypothesis
            || (self.subtuples_vanish == Some(true)
                && self.comparison.as_ref().is_some_and(|c| c.equal))
    }
}

/// Checks the vanishing hypothesis on the table and, when it holds, builds
/// the extension with `φ(u) = K φ(∂u)` and compares its class with `ε ℓ_k`.
pub fn verify_elsegundo(
    model: &WedgeModel,
    reps: &[LieElement],
    r: &Retract,
    table: &LInftyTable,
) -> Result<ElsegundoReport> {
    let k = model.k();
    let mut report = ElsegundoReport {
        arity: k,
        hypothesis: true,
        hypothesis_failure: None,
        subtuples_vanish: None,
        extension: None,
        bracket: None,
        comparison: None,
    };
    for (arity, tuple, v) in table.entries() {
        if arity + 2 <= k && !v.is_zero() {
            report.hypothesis = false;
            report.hypothesis_failure = Some((arity, tuple.to_vec()));
            break;
        }
    }
    if !report.hypothesis {
        return Ok(report);
    }
    let dgl = r.dgl();
    let xs: Vec<HomologyClass> = reps.iter().map(|x| dgl.classify(x)).collect::<Result<_>>()?;
    let transfer = Transfer::new(r);
    let mut vanish = true;
    for skip in 0..k {
        let sub: Vec<HomologyClass> = (0..k).filter(|&i| i != skip).map(|i| xs[i].clone()).collect();
        if !transfer.ell(&sub)?.is_zero() {
            vanish = false;
        }
    }
    report.subtuples_vanish = Some(vanish);
    let target = r.dgl_arc().clone();
    match extend(model, target, reps, Strategy::HomotopyImage(r))? {
        ExtendOutcome::Obstructed(ob) => report.extension = Some(Err(ob)),
        ExtendOutcome::Extended(ext) => {
            let (_, x) = whitehead_element(model, &ext)?;
            let bracket = transfer.ell(&xs)?;
            let eps = epsilon_sign(&xs.iter().map(|h| h.degree).collect::<Vec<_>>());
            report.comparison = Some(SignedComparison::new(eps, &bracket, &x));
            report.bracket = Some(bracket);
            report.extension = Some(Ok(x));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_element;

    #[test]
    fn binary_model() {
        let m = build_fat_wedge(&[3, 3], None).unwrap();
        assert_eq!(m.subsets().len(), 2);
        let u1 = m.dgl().generator_by_name("u1").unwrap();
        let u2 = m.dgl().generator_by_name("u2").unwrap();
        assert_eq!(m.omega(), &u1.bracket(&u2));
        assert_eq!(m.omega().degree(), 4);
    }

    #[test]
    fn ternary_model_shape() {
        let m = build_fat_wedge(&[3, 3, 3], None).unwrap();
        let w = parse_element(m.dgl(), "[u1, u23] - [u12, u3] - [u2, u13]").unwrap();
        assert_eq!(m.omega(), &w);
        assert_eq!(m.omega().degree(), 7);
    }

    #[test]
    fn attaching_elements_are_cycles() {
        for spheres in [vec![2, 2], vec![2, 3, 4], vec![3, 3, 3, 3], vec![2, 2, 3, 2]] {
            let m = build_fat_wedge(&spheres, None).unwrap();
            assert!(m.product().check_d_squared().is_empty(), "{spheres:?}");
            assert!(m.dgl().apply_differential(m.omega()).is_zero(), "{spheres:?}");
            assert_eq!(m.omega().degree(), spheres.iter().sum::<i64>() - 2);
        }
        assert!(build_fat_wedge(&[1, 3], None).is_err());
        assert!(build_fat_wedge(&[3], None).is_err());
        assert!(build_fat_wedge(&[3, 3, 3], Some(5)).is_err());
    }

    #[test]
    fn binary_obstruction_is_the_bracket() {
        let target = Arc::new(
            crate::syntax::parse_dgl("dgl { cap 8 gen a:2 gen b:2 gen c:2 gen u:5 d u = [a, b] }")
                .unwrap()
                .build(None, 8)
                .unwrap(),
        );
        let m = build_fat_wedge(&[3, 3, 3], None).unwrap();
        let a = target.generator_by_name("a").unwrap();
        let b = target.generator_by_name("b").unwrap();
        let c = target.generator_by_name("c").unwrap();
        let out = extend(&m, target.clone(), &[a.clone(), b.clone(), c.clone()], Strategy::Echelon).unwrap();
        let ExtendOutcome::Obstructed(ob) = out else { panic!("[a, c] does not bound") };
        assert_eq!(ob.generator, "u13");
        assert_eq!(ob.class, target.classify(&a.bracket(&c)).unwrap());
    }

    #[test]
    fn identity_extension() {
        let m = build_fat_wedge(&[3, 3, 3], None).unwrap();
        let ext = Extension::identity(&m);
        ext.validate(&m).unwrap();
        assert!(ext.is_total(&m));
        let (x, class) = whitehead_element(&m, &ext).unwrap();
        assert_eq!(&x, m.omega());
        assert!(!class.is_zero());
        let reps: Vec<LieElement> = (0..3).map(|i| m.dgl().generator(i)).collect();
        let ExtendOutcome::Extended(e2) = extend(&m, m.dgl().clone(), &reps, Strategy::Echelon).unwrap() else {
            panic!()
        };
        assert_eq!(e2, ext);
    }

    #[test]
    fn broken_chain_map_is_rejected() {
        let m = build_fat_wedge(&[3, 3, 3], None).unwrap();
        let mut ext = Extension::identity(&m);
        let u12 = m.generator_id(&[0, 1]).unwrap();
        ext.assign(&m, u12, m.dgl().generator(m.generator_id(&[0, 2]).unwrap())).unwrap();
        assert!(matches!(ext.validate(&m), Err(Error::NotChainMap(_))));
    }

    #[test]
    fn extension_document_round_trip() {
        let m = build_fat_wedge(&[3, 3, 3], None).unwrap();
        let ext = Extension::identity(&m);
        let text = ext.to_document(&m).to_string();
        let doc = crate::syntax::parse_extension(&text).unwrap();
        assert_eq!(Extension::from_document(&m, m.dgl().clone(), &doc).unwrap(), ext);
    }

    #[test]
    fn probe_finds_the_base_class() {
        let m = build_fat_wedge(&[3, 3, 3], None).unwrap();
        let reps: Vec<LieElement> = (0..3).map(|i| m.dgl().generator(i)).collect();
        let (_, class) = whitehead_element(&m, &Extension::identity(&m)).unwrap();
        let report = membership_probe(&m, m.dgl().clone(), &reps, &class, 10, 1).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::Member(vec![Scalar::zero(); report.directions.len()]));
    }
}
