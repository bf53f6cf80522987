use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use serde_json::Value;
use workbench_cli::{
    dump, load_config, normalize, parse_config, validate, CliError, BUNDLED_TABLE1,
};

fn bundled_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/ca40_table1.json")
}

fn edited(edit: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(BUNDLED_TABLE1).unwrap();
    edit(&mut v);
    serde_json::to_string_pretty(&v).unwrap()
}

fn load_text(text: &str) -> Result<workbench_cli::LoadedConfig, CliError> {
    validate(parse_config(text, Path::new("test.json"))?)
}

#[test]
fn bundled_config_loads() {
    let cfg = load_config(&bundled_path()).unwrap();
    assert_eq!(cfg.s.layer1.omega, TAU * 10_002_090.0);
    assert_eq!(cfg.d.layer1.omega, TAU * 5_994_834.0);
    assert!((cfg.s.static_field.larmor - TAU * 1e7).abs() < 1e-6);
    assert!(
        (cfg.d.static_field.larmor / cfg.s.static_field.larmor - 1.200334 / 2.00225664).abs()
            < 1e-15
    );
    assert!((cfg.s.layer1.amp - TAU * 46_805.0 * 2.00225664).abs() < 1e-6);
    assert!(cfg.double_layer());
    assert!(cfg.mode.is_some());
    assert_eq!(cfg.oracle.tolerance, 1e-10);
}

#[test]
fn amp_includes_g_is_honoured() {
    let text = edited(|v| {
        for m in v["manifolds"].as_array_mut().unwrap() {
            for l in m["layers"].as_array_mut().unwrap() {
                l["amp_includes_g"] = Value::Bool(true);
            }
        }
    });
    let cfg = load_text(&text).unwrap();
    assert!((cfg.s.layer1.amp - TAU * 46_805.0).abs() < 1e-9);
}

#[test]
fn missing_amp_includes_g_is_a_hard_error() {
    let text = edited(|v| {
        v["manifolds"][1]["layers"][0]
            .as_object_mut()
            .unwrap()
            .remove("amp_includes_g");
    });
    match load_text(&text) {
        Err(CliError::Validation(msg)) => {
            assert!(
                msg.contains("manifolds[1].layers[0].amp_includes_g"),
                "{msg}"
            );
            assert!(msg.contains("g-factor"), "{msg}");
        }
        other => panic!("expected validation error, got {other:?}"),
    }
}

#[test]
fn negative_amplitude_rejected() {
    let text = edited(|v| v["manifolds"][0]["layers"][0]["amp_hz"] = Value::from(-5.0));
    let err = load_text(&text).unwrap_err();
    assert!(matches!(err, CliError::Validation(_)), "{err:?}");
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn schema_errors_name_field_and_line() {
    let text = edited(|v| v["manifolds"][1]["layers"][1]["omega_hz"] = Value::from("fast"));
    match load_text(&text) {
        Err(CliError::Schema { field, line, .. }) => {
            assert_eq!(field, "manifolds[1].layers[1].omega_hz");
            assert!(line > 1);
        }
        other => panic!("expected schema error, got {other:?}"),
    }
    let text = edited(|v| v["oracle"]["tolerence"] = Value::from(1e-9));
    let err = load_text(&text).unwrap_err();
    assert!(matches!(err, CliError::Schema { .. }), "{err:?}");
}

#[test]
fn static_field_needs_exactly_one_form() {
    let text = edited(|v| v["static_field"]["b_tesla"] = Value::from(0.3));
    assert!(matches!(load_text(&text), Err(CliError::Validation(_))));
    let text = edited(|v| v["static_field"] = serde_json::json!({}));
    assert!(matches!(load_text(&text), Err(CliError::Validation(_))));
}

#[test]
fn field_in_tesla_matches_larmor_form() {
    let cfg = load_config(&bundled_path()).unwrap();
    let b = cfg.s.static_field.b_tesla.unwrap();
    let text = edited(|v| v["static_field"] = serde_json::json!({ "b_tesla": b }));
    let other = load_text(&text).unwrap();
    assert!((other.s.static_field.larmor / cfg.s.static_field.larmor - 1.0).abs() < 1e-12);
    assert!((other.d.static_field.larmor / cfg.d.static_field.larmor - 1.0).abs() < 1e-12);
}

#[test]
fn coupling_list_and_unknown_preset() {
    let text = edited(|v| {
        v["laser"]["couplings"] = serde_json::json!([{ "m": -0.5, "M": -1.5, "re_hz": 1000.0 }]);
    });
    let cfg = load_text(&text).unwrap();
    assert_eq!(cfg.coupling.nonzero_pairs().len(), 1);
    let text = edited(|v| v["laser"]["couplings"] = Value::from("uniformish"));
    assert!(matches!(load_text(&text), Err(CliError::Validation(_))));
    let text = edited(|v| {
        v["laser"]["couplings"] = serde_json::json!([{ "m": -0.5, "M": 2.5, "re_hz": 1.0 }]);
    });
    assert!(matches!(load_text(&text), Err(CliError::Validation(_))));
}

#[test]
fn single_layer_config() {
    let text = edited(|v| {
        for m in v["manifolds"].as_array_mut().unwrap() {
            m["layers"].as_array_mut().unwrap().truncate(1);
        }
    });
    let cfg = load_text(&text).unwrap();
    assert!(!cfg.double_layer());
}

#[test]
fn wrong_schema_version_rejected() {
    let text = edited(|v| v["schema_version"] = Value::from(7));
    assert!(matches!(load_text(&text), Err(CliError::Validation(_))));
}

#[test]
fn bundled_round_trip() {
    let cfg = load_config(&bundled_path()).unwrap();
    assert_eq!(dump(&cfg.raw).unwrap(), normalize(BUNDLED_TABLE1).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dump_of_load_is_normalized_input(
        larmor in 1e5..1e8f64,
        amp in 1.0..1e5f64,
        omega in 1e3..1e8f64,
        alpha in -3.0..3.0f64,
        with_mode in any::<bool>(),
        explicit_oracle in any::<bool>(),
    ) {
        let text = edited(|v| {
            v["static_field"]["larmor_hz"] = Value::from(larmor);
            v["manifolds"][0]["layers"][0]["amp_hz"] = Value::from(amp);
            v["manifolds"][1]["layers"][1]["omega_hz"] = Value::from(omega);
            v["manifolds"][1]["layers"][0]["alpha_rad"] = Value::from(alpha);
            if !with_mode {
                v.as_object_mut().unwrap().remove("mode");
            }
            if !explicit_oracle {
                v.as_object_mut().unwrap().remove("oracle");
            }
        });
        let raw = parse_config(&text, Path::new("p.json")).unwrap();
        let normalized = normalize(&text).unwrap();
        prop_assert_eq!(dump(&raw).unwrap(), normalized.clone());
        prop_assert_eq!(normalize(&normalized).unwrap(), normalized);
    }
}
