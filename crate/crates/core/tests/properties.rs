mod props;

#[test]
fn saturation() {
    props::saturation(props::CASES).unwrap();
}

#[test]
fn projection_roundtrip() {
    props::projection_roundtrip(props::CASES).unwrap();
}

#[test]
fn radius_rate_branches() {
    props::radius_rate_branches(props::CASES).unwrap();
}

#[test]
fn radius_monotone() {
    props::radius_monotone(props::CASES).unwrap();
}

#[test]
fn min_distance_oracle() {
    props::min_distance_oracle(props::CASES).unwrap();
}
