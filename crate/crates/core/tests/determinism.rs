use std::path::Path;

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn demo_plan_is_byte_identical_across_runs() {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/run.json");
    let tmp = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let code = ocs_planner::cli::run([
            "ocs-plan",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            "2023",
            "plan",
        ]);
        assert_eq!(code, 0);
        outputs.push(files(&out));
    }
    assert!(outputs[0].len() > 3);
    assert!(outputs[0] == outputs[1]);
}
