use pertinv::formats::{curves_to_json, parse_charges, parse_complex, parse_curves, ComplexInputError};
use pertinv::hodge::HodgeError;
use pertinv::rational::{fmt_q, parse_q, q, qf};
use pertinv::Q;
use proptest::prelude::*;

#[test]
fn malformed_json_reports_a_byte_offset() {
    let text = "{\"curves\": [\n  {\"id\": \"a\", \"vertices\": [[0, 0], [1 0]]}\n]}";
    let err = parse_curves(text, 2).unwrap_err();
    let offset = err.offset.expect("syntax errors carry an offset");
    assert!(offset > 20 && offset <= text.len(), "{offset}");
    assert!(err.to_string().starts_with(&format!("byte {offset}:")));
}

#[test]
fn wrong_dimension_is_rejected() {
    let text = r#"{"curves": [{"id": 1, "vertices": [[0, 0, 0], [1, 0]]}]}"#;
    assert!(parse_curves(text, 3).is_err());
}

#[test]
fn curve_documents_round_trip() {
    let curves = vec![("a".to_string(), vec![vec![qf(1, 3), q(2)], vec![q(-1), qf(5, 7)], vec![q(0), q(0)]])];
    let back = parse_curves(&curves_to_json(&curves), 2).unwrap();
    assert_eq!(back[0].id, "a");
    assert_eq!(back[0].vertices, curves[0].1);
}

#[test]
fn charges_must_use_a_symmetric_form() {
    let ok = r#"{"dim": 2, "tr": [[1, 0], [0, 2]], "charges": [[1, 0], [0, "1/2"]]}"#;
    let c = parse_charges(ok).unwrap();
    assert_eq!(c.pair(1, 1), qf(1, 2));
    let bad = r#"{"dim": 2, "tr": [[1, 1], [0, 2]], "charges": [[1, 0]]}"#;
    assert!(parse_charges(bad).is_err());
}

#[test]
fn explicit_complex_is_validated() {
    let ok = r#"{"dims": [2, 1], "d": [[[-1, 1]]], "b": [3]}"#;
    let input = parse_complex(ok).unwrap();
    assert_eq!(input.complex.dims(), &[2, 1]);
    let not_complex = r#"{"dims": [1, 1, 1], "d": [[[1]], [[1]]]}"#;
    assert!(matches!(parse_complex(not_complex), Err(ComplexInputError::Complex(HodgeError::NotAComplex { .. }))));
    let both = r#"{"dims": [1], "facets": [[0]]}"#;
    assert!(matches!(parse_complex(both), Err(ComplexInputError::Input(_))));
}

#[test]
fn facets_with_cup() {
    let input = parse_complex(r#"{"facets": [[0, 1, 2]], "cup": true, "b": [1]}"#).unwrap();
    assert_eq!(input.complex.dims(), &[3, 3, 1]);
    assert_eq!(input.ops.len(), 1);
}

proptest! {
    #[test]
    fn rationals_round_trip_through_text(n in -1000i64..1000, d in 1i64..1000) {
        let x: Q = qf(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }
}
