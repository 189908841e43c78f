use whitehead_core::retract::random_retract;
use whitehead_core::transfer::Transfer;
use whitehead_core::whitehead::{build_fat_wedge, verify_elsegundo, verify_main1, Extension, Main1Outcome};

fn adapted_identity(spheres: &[i64], cap: Option<u32>) {
    let m = build_fat_wedge(spheres, cap).unwrap();
    let ext = Extension::identity(&m);
    let out = verify_main1(&m, &ext).unwrap();
    let Main1Outcome::Adapted { comparison, induction, .. } = &out else {
        panic!("{spheres:?}: no adapted retract");
    };
    assert_eq!(comparison.realized_sign(), Some(1), "{spheres:?}");
    for c in induction {
        assert!(c.holds && !c.holds_negated, "{spheres:?} {}", c.generator);
    }
    assert!(out.holds());
}

#[test]
fn bracket_of_three_spheres_is_the_whitehead_class() {
    adapted_identity(&[2, 2, 2], None);
    adapted_identity(&[3, 3, 3], None);
    adapted_identity(&[2, 3, 4], None);
}

#[test]
fn bracket_of_four_spheres_is_the_whitehead_class() {
    adapted_identity(&[2, 2, 2, 2], None);
    adapted_identity(&[3, 3, 3, 3], None);
}

fn k_image_extension(spheres: &[i64], seeds: &[u64]) {
    let m = build_fat_wedge(spheres, None).unwrap();
    let reps: Vec<_> = (0..spheres.len()).map(|i| m.dgl().generator(i as u16)).collect();
    for &seed in seeds {
        let r = random_retract(m.dgl().clone(), seed).unwrap();
        let table = Transfer::new(&r).table(spheres.len() - 1).unwrap();
        let report = verify_elsegundo(&m, &reps, &r, &table).unwrap();
        assert!(report.hypothesis, "{spheres:?} seed {seed}: {:?}", report.hypothesis_failure);
        assert_eq!(report.subtuples_vanish, Some(true), "{spheres:?} seed {seed}");
        assert!(matches!(report.extension, Some(Ok(_))), "{spheres:?} seed {seed}");
        assert_eq!(report.comparison.as_ref().unwrap().realized_sign(), Some(1), "{spheres:?} seed {seed}");
        assert!(report.consistent());
    }
}

#[test]
fn k_image_extension_realizes_the_bracket() {
    k_image_extension(&[3, 3, 3], &[1, 2, 3]);
    k_image_extension(&[3, 3, 3, 3], &[1, 2]);
}
