//! Bundled example inputs.

use std::sync::Arc;

use crate::dgl::FreeDgl;
use crate::error::Result;
use crate::retract::{retract_from_decomposition, Decomposition, Retract};
use crate::syntax::{self, ExtensionDocument};

/// Four 2-spheres glued along a fat wedge, plus a 6-cell attached by `z`.
pub const EXAMPLE37_DGL: &str = include_str!("../fixtures/example37.dgl");
/// Hand-chosen decomposition of [`EXAMPLE37_DGL`] up to degree 8.
pub const EXAMPLE37_TABLE: &str = include_str!("../fixtures/example37_table.retract");
/// Extension of the four-fold fat wedge of 3-spheres into [`EXAMPLE37_DGL`].
pub const EXAMPLE37_PHI: &str = include_str!("../fixtures/example37_phi.ext");
/// Free Lie algebra on `a, b` (degree 2) and `x` (degree 3), zero differential.
pub const T0_DGL: &str = include_str!("../fixtures/t0.dgl");
/// Model of `S^3 x S^3`: `a, b` in degree 2 and `du = [a, b]`.
pub const T1_DGL: &str = include_str!("../fixtures/t1.dgl");

fn load(text: &str, cap: Option<u32>) -> Result<Arc<FreeDgl>> {
    Ok(Arc::new(syntax::parse_dgl(text)?.build(cap, 10)?))
}

pub fn example37(cap: Option<u32>) -> Result<Arc<FreeDgl>> {
    load(EXAMPLE37_DGL, cap)
}

pub fn t0(cap: Option<u32>) -> Result<Arc<FreeDgl>> {
    load(T0_DGL, cap)
}

pub fn t1(cap: Option<u32>) -> Result<Arc<FreeDgl>> {
    load(T1_DGL, cap)
}

/// The decomposition of the bundled table, completed in the other degrees.
pub fn example37_table_retract(dgl: Arc<FreeDgl>) -> Result<Retract> {
    let doc = syntax::parse_retract(EXAMPLE37_TABLE)?;
    let choice = Decomposition::from_document(&dgl, &doc)?;
    retract_from_decomposition(dgl, &choice)
}

pub fn example37_phi() -> Result<ExtensionDocument> {
    syntax::parse_extension(EXAMPLE37_PHI)
}

/// Degree-10 element listed alongside [`EXAMPLE37_PHI`] as the value of the
/// extension on the attaching element.
pub const EXAMPLE37_LISTED_CLASS: &str =
    "[w123, v4] - [w124, v3] + [v12, v34] + [z, v34] + [v14, v23] + [v1, v234] - [v13, v24] + [v134, v2]";
