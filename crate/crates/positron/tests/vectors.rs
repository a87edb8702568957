use positron::vectors::run_text;

#[test]
fn bundled_vector_file_passes() {
    let passed = run_text(include_str!("data/vectors.txt")).unwrap();
    assert_eq!(passed, 15);
}
