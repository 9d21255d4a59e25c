//! Runs every entry of `corpus/commands.txt` and compares the structured
//! report with `corpus/<name>.expected`. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;
use std::process::Command;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn corpus_matches_expected_output() {
    let dir = corpus();
    let manifest = std::fs::read_to_string(dir.join("commands.txt")).unwrap();
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let lines: Vec<String> = manifest
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect();
    let runs: Vec<_> = lines
        .iter()
        .map(|line| {
            let (line, dir) = (line.clone(), dir.clone());
            std::thread::spawn(move || {
                let mut words = line.split_whitespace();
                let file = words.next().unwrap();
                let cmd = words.next().unwrap();
                let out = Command::new(env!("CARGO_BIN_EXE_wcausal"))
                    .current_dir(&dir)
                    .arg(cmd)
                    .args(["--format", "structured", file])
                    .args(words)
                    .output()
                    .unwrap();
                assert!(out.status.success(), "{line}: {}", String::from_utf8_lossy(&out.stderr));
                (dir.join(file.replace(".w", ".expected")), String::from_utf8(out.stdout).unwrap())
            })
        })
        .collect();
    let mut failures = Vec::new();
    for (line, run) in lines.iter().zip(runs) {
        let (path, got) = run.join().unwrap();
        if update {
            std::fs::write(&path, &got).unwrap();
        } else if std::fs::read_to_string(&path).ok().as_deref() != Some(got.as_str()) {
            failures.push(format!("{line}\n{got}"));
        }
    }
    let entries = std::fs::read_dir(&dir).unwrap().filter(|e| {
        e.as_ref().unwrap().path().extension().is_some_and(|x| x == "w")
    });
    assert_eq!(lines.len(), entries.count(), "every corpus entry needs a command");
    assert!(failures.is_empty(), "golden mismatch:\n{}", failures.join("\n"));
}
