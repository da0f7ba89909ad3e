use std::path::Path;
use std::process::{Command, Output};

fn scenegen(store: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scenegen"))
        .args(args)
        .env("SCENEGEN_STORE", store)
        .env_remove("SCENEGEN_CONFIG")
        .output()
        .unwrap()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(scenegen(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(scenegen(dir.path(), &["generate"]).status.code(), Some(1));
    assert_eq!(scenegen(dir.path(), &["generate", "--prompt", "x", "--graph", "g.json"]).status.code(), Some(1));
    assert_eq!(scenegen(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn generate_eval_validate() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    let o = scenegen(
        &store,
        &["generate", "--prompt", "generate me 3 difficulty levels of an office environment", "--seed", "4"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let ids: Vec<String> = serde_json::from_value(stdout_json(&o)["worldIds"].clone()).unwrap();
    assert_eq!(ids.len(), 3);

    let again = scenegen(
        &store,
        &["generate", "--prompt", "generate me 3 difficulty levels of an office environment", "--seed", "4"],
    );
    assert_eq!(stdout_json(&again)["worldIds"], serde_json::json!(ids));

    let o = scenegen(&store, &["eval", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    for id in &ids {
        assert!(csv.contains(id.as_str()));
    }
    assert!(csv.contains("# summary") && csv.contains("# linearity"));

    let mut args = vec!["validate"];
    args.extend(ids.iter().map(String::as_str));
    let o = scenegen(&store, &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));

    // a damaged bundle is a validation failure
    let copy = dir.path().join("damaged");
    std::fs::create_dir(&copy).unwrap();
    for e in std::fs::read_dir(store.join(&ids[0])).unwrap() {
        let e = e.unwrap();
        std::fs::copy(e.path(), copy.join(e.file_name())).unwrap();
    }
    std::fs::write(copy.join("placements.json"), b"[{").unwrap();
    let o = scenegen(&store, &["validate", copy.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("placements.json"));
}

#[test]
fn db_seed_build_query() {
    let dir = tempfile::tempdir().unwrap();
    let manifests = dir.path().join("manifests");
    let bundle = dir.path().join("models.amb");
    let o = scenegen(dir.path(), &["db", "seed", "--out", manifests.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let build = |out: &Path| {
        scenegen(
            dir.path(),
            &["db", "build", "--manifest", manifests.to_str().unwrap(), "--out", out.to_str().unwrap()],
        )
    };
    assert_eq!(build(&bundle).status.code(), Some(0));
    let second = dir.path().join("again.amb");
    assert_eq!(build(&second).status.code(), Some(0));
    assert_eq!(std::fs::read(&bundle).unwrap(), std::fs::read(&second).unwrap());

    let o = scenegen(
        dir.path(),
        &["db", "query", "red chair", "--bundle", bundle.to_str().unwrap(), "--k", "3", "--color", "red"],
    );
    assert_eq!(o.status.code(), Some(0));
    let rows = stdout_json(&o);
    let rows = rows.as_array().unwrap();
    assert!(!rows.is_empty() && rows.len() <= 3);
    for r in rows {
        assert!(r["record"]["color_materials"].as_array().unwrap().iter().any(|cm| cm[0] == "red"));
    }
}

#[test]
fn extract_writes_a_scene_graph() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("seg.json");
    std::fs::write(
        &input,
        r#"{"rooms":[{"id":"a","category":"office","polygon":[[0,0],[4,0],[4,3],[0,3]]},
                     {"id":"b","category":"office","polygon":[[4,0],[8,0],[8,3],[4,3]]}],
            "assets":[{"category":"desk","box":{"min":[1,1],"max":[2,1.6]}}],
            "doorways":[{"segment":[[4,1],[4,1.9]],"width":0.9},{"segment":[[0,1],[0,1.9]],"width":0.9}]}"#,
    )
    .unwrap();
    let o = scenegen(dir.path(), &["extract", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let g = scenegen_core::parse_scene_graph(&o.stdout).unwrap();
    assert_eq!(g.edges().len(), 1);

    std::fs::write(&input, r#"{"rooms":[{"id":"a","category":"office","polygon":[[0,0],[4,0],[4,3],[0,3]]}],"assets":[{"category":"spaceship","box":{"min":[1,1],"max":[2,2]}}],"doorways":[{"segment":[[0,1],[0,1.9]],"width":0.9}]}"#).unwrap();
    assert_eq!(scenegen(dir.path(), &["extract", input.to_str().unwrap()]).status.code(), Some(2));
}
