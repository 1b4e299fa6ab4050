use etacert::npa::{export_sdp, MomentStructure, NpaLevel};
use etacert::quantum::{min_efficiency_qr, BisectionResult, QuantumRealization, SearchConfig};
use etacert::sdp::SdpInterchange;
use etacert::validate::LEVEL_TWO_EQUALITIES;
use etacert::Behavior;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn angles() -> impl Strategy<Value = [f64; 5]> {
    prop::array::uniform5(-10.0f64..10.0)
}

proptest! {
    #[test]
    fn behavior_json_round_trip_is_exact(v in angles()) {
        let b = QuantumRealization::from_angles(v).probabilities().with_label("witness");
        let back = Behavior::from_json(&b.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, b);
    }

    #[test]
    fn interchange_round_trip(eta in 0.0f64..=1.0, xi in 0.0f64..0.5, which in 0usize..3) {
        let level = NpaLevel::ALL[which];
        let sdp = export_sdp(level, eta, xi).unwrap();
        let back = SdpInterchange::from_json(&sdp.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.to_json().unwrap(), sdp.to_json().unwrap());
        let dense = back.to_dense().unwrap();
        prop_assert_eq!(dense.dim, MomentStructure::new(level).dim());
    }
}

#[test]
fn behavior_json_layout() {
    let b = Behavior::uniform();
    let v: serde_json::Value = serde_json::from_str(&b.to_json().unwrap()).unwrap();
    let rows = v["p"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 4));
}

#[test]
fn bisection_result_json() {
    let r = min_efficiency_qr(0.05, 0.0, 1e-6, &SearchConfig::default()).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        BTreeSet::from([
            "eta",
            "angles",
            "achieved_value",
            "iterations",
            "e_obs",
            "xi"
        ])
    );
    let back: BisectionResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

#[test]
fn level_two_equalities_golden() {
    let s = MomentStructure::new(NpaLevel::Two);
    let generated: BTreeSet<BTreeSet<(usize, usize)>> = s
        .equality_groups()
        .into_iter()
        .map(|g| g.into_iter().collect())
        .collect();
    let golden: BTreeSet<BTreeSet<(usize, usize)>> = LEVEL_TWO_EQUALITIES
        .iter()
        .map(|g| g.iter().copied().collect())
        .collect();
    assert_eq!(generated, golden);
    assert_eq!(s.equality_count(), 40);
}
