use std::sync::Arc;

use whitehead_core::fixtures;
use whitehead_core::retract::{
    random_retract, retract_from_decomposition, verify_retract, Decomposition, HomotopyData, Retract,
};
use whitehead_core::syntax::parse_element;

fn assert_valid(r: &Retract, what: &str) {
    let report = verify_retract(r).unwrap();
    let failing: Vec<_> = report.failing().collect();
    assert!(failing.is_empty(), "{what}: {failing:?}");
}

#[test]
fn example37_table_is_a_decomposition() {
    let dgl = fixtures::example37(None).unwrap();
    let r = fixtures::example37_table_retract(dgl.clone()).unwrap();
    assert_valid(&r, "table");
    let v12 = dgl.generator_by_name("v12").unwrap();
    let v1v2 = parse_element(&dgl, "[v1, v2]").unwrap();
    assert_eq!(r.homotopy(&v1v2).unwrap(), v12);
}

#[test]
fn example37_twisted_generator_fits_in_a() {
    let dgl = fixtures::example37(None).unwrap();
    let twisted = parse_element(&dgl, "v12 + z").unwrap();
    assert!(!dgl.apply_differential(&twisted).is_zero());
    let mut a5 = vec![twisted.clone()];
    for name in ["v13", "v14", "v23", "v24", "v34"] {
        a5.push(dgl.generator_by_name(name).unwrap());
    }
    let mut choice = Decomposition::default();
    choice.a.insert(5, a5);
    let r = retract_from_decomposition(dgl.clone(), &choice).unwrap();
    assert_valid(&r, "twisted");
    let boundary = dgl.apply_differential(&twisted);
    assert_eq!(r.homotopy(&boundary).unwrap(), twisted);
}

#[test]
fn example37_random_retracts() {
    let dgl: Arc<_> = fixtures::example37(None).unwrap();
    for seed in 1..=20 {
        let r = random_retract(dgl.clone(), seed).unwrap();
        assert_valid(&r, &format!("seed {seed}"));
    }
}

