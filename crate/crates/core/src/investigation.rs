//! The twisted four-sphere example: its degree-10 homology, the Whitehead
//! class of the bundled extension, and the transferred `ℓ_4` under several
//! retracts.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgl::{FreeDgl, HomologyClass};
use crate::error::Result;
use crate::fixtures;
use crate::lie::LieElement;
use crate::qlinalg::Scalar;
use crate::retract::{random_retract, retract_from_decomposition, verify_retract, HomotopyData, Retract};
use crate::syntax::{self, parse_element};
use crate::transfer::Transfer;
use crate::whitehead::{
    build_fat_wedge, sphere_classes, verify_elprime, verify_main1, whitehead_element, ElprimeReport, Extension,
    InductionCheck, Main1Outcome, WedgeModel,
};

/// Degree cap used for the example.
pub const EXAMPLE37_CAP: u32 = 11;

/// One bracket coefficient of the computed and the listed element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermComparison {
    pub term: String,
    pub computed: Scalar,
    pub listed: Scalar,
}

/// `ℓ_4(v̄_1, .., v̄_4)` under one retract.
#[derive(Clone, Debug)]
pub struct RetractCase {
    pub label: String,
    pub retract_valid: bool,
    pub bracket: HomologyClass,
    /// `ε ℓ_4` equals the Whitehead class
    pub equals_class: bool,
    /// `ε ℓ_4` equals minus the Whitehead class
    pub equals_negated_class: bool,
    pub elprime: ElprimeReport,
}

impl RetractCase {
    /// `ε ℓ_4 - x` lies in the lower images.
    pub fn elprime_holds(&self) -> bool {
        self.elprime.difference_in_lower_images
    }
}

#[derive(Clone, Debug)]
pub struct AdaptedCase {
    pub found: bool,
    /// the obstruction when no adapted retract exists
    pub obstruction: Option<String>,
    pub induction: Vec<InductionCheck>,
    pub case: Option<RetractCase>,
}

#[derive(Clone, Debug)]
pub struct Example37Report {
    pub homology_dims: BTreeMap<i64, usize>,
    pub h10_representatives: Vec<String>,
    pub whitehead_element: String,
    pub whitehead_class: HomologyClass,
    /// `H_10` is one-dimensional and spanned by the Whitehead class.
    pub class_generates_h10: bool,
    pub listed_is_cycle: bool,
    /// `∂` of the listed element, printed.
    pub listed_boundary: String,
    pub terms: Vec<TermComparison>,
    /// The listed element equals `±φ(ω)`.
    pub listed_matches: Option<i64>,
    pub cases: Vec<RetractCase>,
    pub adapted: AdaptedCase,
}

impl Example37Report {
    /// Whether some retract gives `ℓ_4 = ±[φ(ω)]`.
    pub fn bracket_realizes_class(&self) -> bool {
        self.all_cases().any(|c| c.equals_class || c.equals_negated_class)
    }

    pub fn all_cases(&self) -> impl Iterator<Item = &RetractCase> {
        self.cases.iter().chain(self.adapted.case.iter())
    }
}

/// Coefficients of the length-two bracket terms `[a, b]`, keyed by generator
/// ids with `a <= b`.
fn bracket_terms(x: &LieElement) -> BTreeMap<(u16, u16), Scalar> {
    let mut out = BTreeMap::new();
    for (w, c) in x.terms() {
        if w.len() != 2 || w[0] > w[1] {
            continue;
        }
        let c = if w[0] == w[1] {
            // [a, a] = 2 aa for odd a
            c * &Scalar::new(1, 2).expect("half")
        } else {
            c.clone()
        };
        out.insert((w[0], w[1]), c);
    }
    out
}

fn case<R: HomotopyData + ?Sized>(
    label: &str,
    r: &R,
    model: &WedgeModel,
    ext: &Extension,
    x: &HomologyClass,
) -> Result<RetractCase> {
    let retract_valid = verify_retract(r)?.passed();
    let transfer = Transfer::new(r);
    let xs = sphere_classes(model, ext)?;
    let bracket = transfer.ell(&xs)?;
    let table = transfer.table(4)?;
    let elprime = verify_elprime(model, ext, r, &table)?;
    let eps = Scalar::from_int(elprime.epsilon);
    let e = bracket.scale(&eps);
    Ok(RetractCase {
        label: label.to_string(),
        retract_valid,
        equals_class: &e == x,
        equals_negated_class: e == x.scale(&-Scalar::one()),
        bracket,
        elprime,
    })
}

/// The table decomposition with `v12` replaced by `v12 + z` in degree 5.
pub fn twisted_table_retract(dgl: Arc<FreeDgl>) -> Result<Retract> {
    let doc = syntax::parse_retract(fixtures::EXAMPLE37_TABLE)?;
    let mut choice = crate::retract::Decomposition::from_document(&dgl, &doc)?;
    let v12 = parse_element(&dgl, "v12")?;
    let twisted = parse_element(&dgl, "v12 + z")?;
    if let Some(a5) = choice.a.get_mut(&5) {
        for x in a5.iter_mut() {
            if *x == v12 {
                *x = twisted.clone();
            }
        }
    }
    retract_from_decomposition(dgl, &choice)
}

/// Runs the investigation with random retracts for the given seeds.
pub fn investigate_example37(seeds: &[u64]) -> Result<Example37Report> {
    let dgl = fixtures::example37(Some(EXAMPLE37_CAP))?;
    let model = build_fat_wedge(&[3, 3, 3, 3], Some(EXAMPLE37_CAP))?;
    let ext = Extension::from_document(&model, dgl.clone(), &fixtures::example37_phi()?)?;
    let (phi_omega, x) = whitehead_element(&model, &ext)?;
    let h10 = dgl.homology(10)?;
    let mut homology_dims = BTreeMap::new();
    for n in 1..EXAMPLE37_CAP as i64 {
        homology_dims.insert(n, dgl.homology(n)?.dim());
    }

    let listed = parse_element(&dgl, fixtures::EXAMPLE37_LISTED_CLASS)?;
    let listed_boundary = dgl.apply_differential(&listed);
    let ours = bracket_terms(&phi_omega);
    let theirs = bracket_terms(&listed);
    let mut keys: Vec<(u16, u16)> = ours.keys().chain(theirs.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let terms = keys
        .into_iter()
        .map(|(a, b)| TermComparison {
            term: format!("[{}, {}]", dgl.generators()[a as usize].name, dgl.generators()[b as usize].name),
            computed: ours.get(&(a, b)).cloned().unwrap_or_else(Scalar::zero),
            listed: theirs.get(&(a, b)).cloned().unwrap_or_else(Scalar::zero),
        })
        .collect();
    let listed_matches = if listed == phi_omega {
        Some(1)
    } else if listed == -&phi_omega {
        Some(-1)
    } else {
        None
    };

    let mut cases = Vec::new();
    let table = fixtures::example37_table_retract(dgl.clone())?;
    cases.push(case("table", &table, &model, &ext, &x)?);
    for &seed in seeds {
        let r = random_retract(dgl.clone(), seed)?;
        cases.push(case(&format!("random seed {seed}"), &r, &model, &ext, &x)?);
    }
    let twisted = twisted_table_retract(dgl.clone())?;
    cases.push(case("table with v12 + z in A", &twisted, &model, &ext, &x)?);

    let adapted = match verify_main1(&model, &ext)? {
        Main1Outcome::NotAdapted(ob) => AdaptedCase {
            found: false,
            obstruction: Some(syntax::format_element(&dgl, &ob.cycle)),
            induction: Vec::new(),
            case: None,
        },
        Main1Outcome::Adapted { retract, induction, .. } => AdaptedCase {
            found: true,
            obstruction: None,
            induction,
            case: Some(case("adapted to the extension", retract.as_ref(), &model, &ext, &x)?),
        },
    };

    Ok(Example37Report {
        h10_representatives: h10.representatives().iter().map(|r| syntax::format_element(&dgl, r)).collect(),
        class_generates_h10: h10.dim() == 1 && !x.is_zero(),
        homology_dims,
        whitehead_element: syntax::format_element(&dgl, &phi_omega),
        whitehead_class: x,
        listed_is_cycle: listed_boundary.is_zero(),
        listed_boundary: syntax::format_element(&dgl, &listed_boundary),
        terms,
        listed_matches,
        cases,
        adapted,
    })
}
