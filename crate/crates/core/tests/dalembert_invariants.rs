mod support;

#[test]
fn lift_consistency() {
    support::dalembert_lift_consistency().unwrap();
}

#[test]
fn reciprocity_forced() {
    support::dalembert_reciprocity_forced().unwrap();
}

#[test]
fn defect_symmetry() {
    support::dalembert_defect_symmetry().unwrap();
}

#[test]
fn zero_branch() {
    support::dalembert_zero_branch().unwrap();
}

#[test]
fn identities_iff_zero_defect() {
    support::dalembert_identities_iff_zero_defect().unwrap();
}
