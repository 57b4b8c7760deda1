mod common;

use std::process::Command;

use common::*;
use serde_json::{json, Value};

fn ontoforms(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ontoforms"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .unwrap()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn form_matches_http_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("form.json");
    let onto = fixture_path("wine-food.ttl");
    let meal = food("Meal");
    let o = ontoforms(&["form", "--onto", path_str(&onto), "--class", &meal, "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let form: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_golden("meal-default-form.json", &form);

    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        json!({
            "hiddenProperties": [wine("hasMaker"), wine("madeIntoWine"), wine("producesWine")],
            "inlinePairs": [{"contextClass": food("Meal"), "rangeClass": food("MealCourse")}]
        })
        .to_string(),
    )
    .unwrap();
    let o = ontoforms(&["form", "--onto", path_str(&onto), "--class", &meal, "--config", path_str(&config)]);
    assert!(o.status.success());
    let form: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_golden("meal-inline-form.json", &form);
}

#[test]
fn populate_writes_turtle_and_names_minted() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        json!({"inlinePairs": [{"contextClass": food("Meal"), "rangeClass": food("MealCourse")}]}).to_string(),
    )
    .unwrap();
    let sub = dir.path().join("sub.json");
    std::fs::write(
        &sub,
        json!({
            "chosenClass": food("Meal"),
            "displayLabel": "Friday dinner",
            "values": [{"property": food("course"), "creations": [{
                "chosenClass": food("MealCourse"),
                "values": [{"property": food("hasFood"), "individuals": [food("Tuna")]}]
            }]}]
        })
        .to_string(),
    )
    .unwrap();
    let out = dir.path().join("abox.ttl");
    let onto = fixture_path("wine-food.ttl");
    let o = ontoforms(&[
        "populate", "--onto", path_str(&onto), "--class", &food("Meal"), "--submission", path_str(&sub),
        "--config", path_str(&config), "--out", path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().collect::<Vec<_>>(), [food("Friday_dinner_1"), food("MealCourse_1")]);
    let abox = ontoforms_core::parse_turtle(&std::fs::read_to_string(&out).unwrap()).unwrap();
    // 2 types, label, course link, marker, hasFood
    assert_eq!(abox.len(), 6);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ttl");
    std::fs::write(&bad, "@prefix : <http://x/> .\n:a :b").unwrap();
    let o = ontoforms(&["inspect", "--onto", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let onto = fixture_path("wine-food.ttl");
    let sub = dir.path().join("sub.json");
    std::fs::write(
        &sub,
        json!({"chosenClass": food("Meal"), "values": [{"property": wine("hasSugar"), "individuals": [wine("Dry"), wine("Sweet")]}]})
            .to_string(),
    )
    .unwrap();
    let out = dir.path().join("abox.ttl");
    let o = ontoforms(&[
        "populate", "--onto", path_str(&onto), "--class", &food("Meal"), "--submission", path_str(&sub),
        "--out", path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());

    let o = ontoforms(&["form", "--onto", path_str(&onto), "--class", &food("Nope")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inspect_prints_detail() {
    let onto = fixture_path("wine-food.ttl");
    let o = ontoforms(&["inspect", "--onto", path_str(&onto)]);
    assert!(o.status.success());
    let detail: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_golden("wine-detail.json", &detail);
}
