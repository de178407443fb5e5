use locmat::formats::{
    descriptor_from_json, descriptor_to_json, matrix_from_json, matrix_to_json, word_from_json,
    word_to_json, MatrixFile,
};
use locmat::sample::{standard_fields, Sampler};
use locmat::verify::random_descriptor;
use locmat_core::{decompose_gl, Field};

#[test]
fn random_matrices_round_trip_in_every_field() {
    let mut s = Sampler::new(17);
    for f in standard_fields() {
        for n in 1..=6 {
            let a = s.matrix(&f, n);
            let text = matrix_to_json(&a);
            let back = matrix_from_json(&text).unwrap();
            assert_eq!(back, a);
            assert_eq!(matrix_to_json(&back), text);
        }
    }
}

#[test]
fn bare_payloads_load_like_full_literals() {
    let full = r#"{"field": "Q", "period": 2, "block": [["Q:1/2", "Q:-3"], ["Q:0", "Q:1"]]}"#;
    let bare = r#"{"field": "Q", "period": 2, "block": [["1/2", "-3"], ["0", "1"]]}"#;
    assert_eq!(matrix_from_json(full).unwrap(), matrix_from_json(bare).unwrap());
    let ext = r#"{"field": "GF(5,2)", "period": 1, "block": [["[1,2]"]]}"#;
    let a = matrix_from_json(ext).unwrap();
    let file: MatrixFile = serde_json::from_str(&matrix_to_json(&a)).unwrap();
    assert_eq!(file.block[0][0], "GF(5,2):[1,2]");
}

#[test]
fn custom_modulus_survives_the_round_trip() {
    let f = Field::extension(5, 2, Some(vec![2, 0, 1])).unwrap();
    let a = Sampler::new(1).invertible(&f, 2);
    let text = matrix_to_json(&a);
    assert!(text.contains("GF(5,2);mod=[2,0,1]"), "{text}");
    assert_eq!(matrix_from_json(&text).unwrap(), a);
}

#[test]
fn words_and_descriptors_round_trip() {
    let mut s = Sampler::new(5);
    for f in standard_fields() {
        for m in [2, 3, 4] {
            let a = s.invertible(&f, m);
            let w = decompose_gl(&a, m).unwrap();
            let back = word_from_json(&word_to_json(&w)).unwrap();
            assert_eq!(back, w);
            assert_eq!(back.evaluate(), a);
        }
        for _ in 0..10 {
            let d = random_descriptor(&mut s, &f);
            assert_eq!(descriptor_from_json(&descriptor_to_json(&d)).unwrap(), d);
        }
    }
}
