//! Potential documents survive serialization and parse to the same potential.

use hill::potential_file::{parse_potential, InterpolationName, PotentialDocument};
use proptest::prelude::*;
use serde_json::Value;

fn document() -> impl Strategy<Value = PotentialDocument> {
    prop_oneof![
        (-10.0..10.0f64).prop_map(|value| PotentialDocument::Constant { value }),
        prop::collection::vec(-5.0..5.0f64, 1..6)
            .prop_map(|coefficients| PotentialDocument::FourierCosine { coefficients }),
        prop::collection::vec(-5.0..5.0f64, 1..5).prop_map(|values| {
            let n = values.len();
            let breakpoints = (0..=n).map(|i| i as f64 / n as f64).collect();
            PotentialDocument::PiecewiseConstant { breakpoints, values }
        }),
        (prop::collection::vec(-5.0..5.0f64, 4..9), any::<bool>()).prop_map(|(q, linear)| {
            let n = q.len();
            PotentialDocument::Tabulated {
                samples: q.into_iter().enumerate().map(|(i, v)| (i as f64 / n as f64, v)).collect(),
                interpolation: if linear { InterpolationName::Linear } else { InterpolationName::CubicPeriodic },
            }
        }),
    ]
}

/// Positions in a document span one declared period.
fn over_period(doc: PotentialDocument, t: f64) -> PotentialDocument {
    match doc {
        PotentialDocument::PiecewiseConstant { breakpoints, values } => {
            let mut breakpoints: Vec<f64> = breakpoints.into_iter().map(|x| x * t).collect();
            *breakpoints.last_mut().unwrap() = t;
            PotentialDocument::PiecewiseConstant { breakpoints, values }
        }
        PotentialDocument::Tabulated { samples, interpolation } => PotentialDocument::Tabulated {
            samples: samples.into_iter().map(|(x, v)| (x * t, v)).collect(),
            interpolation,
        },
        other => other,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn documents_round_trip(doc in document(), period in prop::option::of(0.1..10.0f64)) {
        let doc = over_period(doc, period.unwrap_or(1.0));
        let mut value = serde_json::to_value(&doc).unwrap();
        if let Some(t) = period {
            value.as_object_mut().unwrap().insert("declared_period".into(), Value::from(t));
        }
        let text = serde_json::to_string(&value).unwrap();
        let back: PotentialDocument = {
            let mut v: Value = serde_json::from_str(&text).unwrap();
            v.as_object_mut().unwrap().remove("declared_period");
            serde_json::from_value(v).unwrap()
        };
        prop_assert_eq!(&back, &doc);
        let q = parse_potential(&text).unwrap();
        prop_assert_eq!(q.declared_period(), period.unwrap_or(1.0));
        prop_assert_eq!(q, parse_potential(&text).unwrap());
    }

    #[test]
    fn unknown_fields_are_rejected(doc in document(), name in "[a-z]{3,8}") {
        let mut value = serde_json::to_value(&doc).unwrap();
        let known = ["kind", "value", "coefficients", "breakpoints", "values", "samples", "interpolation", "declared_period"];
        prop_assume!(!known.contains(&name.as_str()));
        value.as_object_mut().unwrap().insert(name, Value::from(1));
        prop_assert!(parse_potential(&value.to_string()).is_err());
    }
}
