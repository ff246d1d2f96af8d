//! Golden corpus: every `tests/golden/*.opd` script normalizes to its
//! `.expected` file byte for byte, and the normalized text parses back to
//! itself. Scripts under `errors/` carry their expected exit code and
//! diagnostic in a `# expect CODE MESSAGE` first line.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use operad_forge::cli;
use operad_forge::dsl::{self, Value};

fn corpus(dir: &str) -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(dir);
    let mut files: Vec<PathBuf> = fs::read_dir(&root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "opd"))
        .collect();
    files.sort();
    files
}

fn collect_types(v: &Value, into: &mut BTreeSet<&'static str>) {
    into.insert(v.type_name());
    if let Value::List(xs) = v {
        for x in xs {
            collect_types(x, into);
        }
    }
}

#[test]
fn corpus_normalizes_to_expected_and_round_trips() {
    let files = corpus("");
    assert!(files.len() >= 25, "only {} golden scripts", files.len());
    let mut types = BTreeSet::new();
    for f in &files {
        let src = fs::read_to_string(f).unwrap();
        let env = dsl::run_source(&src, None).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        let printed = env.print();
        let expected = fs::read_to_string(f.with_extension("expected")).unwrap();
        assert_eq!(printed, expected, "{}", f.display());

        let again = dsl::run_source(&printed, None).unwrap_or_else(|e| panic!("{} reprint: {e}", f.display()));
        assert_eq!(again.print(), printed, "{} does not round-trip", f.display());
        assert_eq!(again.bindings, env.bindings, "{}", f.display());
        for (_, v) in &env.bindings {
            collect_types(v, &mut types);
        }
    }
    let all = [
        "integer",
        "boolean",
        "list",
        "permutation",
        "cube",
        "cubes element",
        "overlap element",
        "forest",
        "diagram",
        "link",
        "alphabet",
    ];
    for t in all {
        assert!(types.contains(t), "no golden script produces a {t}");
    }
}

#[test]
fn error_scripts_report_expected_diagnostics() {
    let files = corpus("errors");
    assert!(files.len() >= 5);
    for f in &files {
        let src = fs::read_to_string(f).unwrap();
        let header = src.lines().next().unwrap();
        let rest = header.strip_prefix("# expect ").expect("expect header");
        let (code, message) = rest.split_once(' ').unwrap();
        let out = cli::run_args(["operad-forge", "check", f.to_str().unwrap()]);
        assert_eq!(out.code, code.parse::<i32>().unwrap(), "{}: {}", f.display(), out.stderr);
        assert_eq!(out.stderr, format!("{}:{message}\n", f.display()));
        assert!(out.stdout.is_empty());
    }
}
