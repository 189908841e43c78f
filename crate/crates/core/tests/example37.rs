use whitehead_core::investigation::investigate_example37;

#[test]
fn example37_findings() {
    let r = investigate_example37(&[1, 2, 3, 4, 5, 6]).unwrap();
    let dims: Vec<(i64, usize)> = r.homology_dims.iter().filter(|(_, &d)| d > 0).map(|(&n, &d)| (n, d)).collect();
    assert_eq!(dims, vec![(2, 4), (5, 1), (7, 4), (9, 10), (10, 2)]);
    // H_10 also holds the class of [z, z]
    assert!(!r.class_generates_h10);
    assert!(!r.whitehead_class.is_zero());
    assert!(!r.listed_is_cycle);
    assert_eq!(r.listed_matches, None);
    let disagree: Vec<&str> = r.terms.iter().filter(|t| t.computed != t.listed).map(|t| t.term.as_str()).collect();
    assert_eq!(disagree.len(), 4, "{disagree:?}");
    for c in r.all_cases() {
        assert!(c.retract_valid, "{}", c.label);
        assert!(c.elprime.difference_in_lower_images, "{}", c.label);
        assert_eq!(c.elprime.certificate_sign(), Some(1), "{}", c.label);
        assert!(c.elprime.certificates_checked, "{}", c.label);
    }
    assert!(r.adapted.found);
    assert!(r.adapted.induction.iter().all(|c| c.holds));
    let adapted = r.adapted.case.as_ref().unwrap();
    assert!(adapted.equals_class);
    assert!(r.bracket_realizes_class());
    let table = &r.cases[0];
    assert!(table.bracket.is_zero());
}
