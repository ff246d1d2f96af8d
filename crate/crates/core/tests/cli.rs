use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use operad_forge::cli::run_args;
use operad_forge::diskforest::DiskRelation;
use operad_forge::dsl::{self, Value};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_operad-forge")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn attr<'a>(tag: &'a str, name: &str) -> Option<&'a str> {
    let key = format!(" {name}=\"");
    let start = tag.find(&key)? + key.len();
    let len = tag[start..].find('"')?;
    Some(&tag[start..start + len])
}

fn num(tag: &str, name: &str) -> f64 {
    attr(tag, name).unwrap().parse().unwrap()
}

#[test]
fn exit_codes() {
    let id = golden("15_identities.opd");
    let (code, out, _) = bin(&["check", id.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("i2: diagram ok"));

    let bad = golden("errors/constraint_violation.opd");
    let (code, _, err) = bin(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("mufflers (1, 2)"), "{err}");

    let syntax = golden("errors/bad_rational.opd");
    assert_eq!(bin(&["check", syntax.to_str().unwrap()]).0, 2);
    assert_eq!(bin(&["frobnicate"]).0, 2);
    assert_eq!(bin(&["check"]).0, 2);
    assert_eq!(bin(&["check", "/nonexistent/file.opd"]).0, 2);
    assert_eq!(bin(&["fuzz", "--laws", "assoc,commute"]).0, 2);
    assert_eq!(bin(&["--help"]).0, 0);
}

#[test]
fn empty_file_checks_clean() {
    let out = run_args(["operad-forge", "check", golden("01_empty.opd").to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "0 bindings checked\n");
}

#[test]
fn fuzz_reports_are_byte_identical() {
    let args = ["fuzz", "--ops", "300", "--seed", "7"];
    let (c1, a, _) = bin(&args);
    let (c2, b, _) = bin(&args);
    assert_eq!((c1, c2), (0, 0), "{a}");
    assert_eq!(a, b);
    assert!(a.starts_with("fuzz seed=7 ops=300\n"));
    assert!(a.ends_with("status: ok\n"));
    let other = bin(&["fuzz", "--ops", "300", "--seed", "8"]).1;
    assert_ne!(a, other, "the seed should matter");
}

#[test]
fn fuzz_law_selection() {
    let out = run_args(["operad-forge", "fuzz", "--ops", "20", "--laws", "ident,action"]);
    assert_eq!(out.code, 0);
    let laws: Vec<&str> = out.stdout.lines().skip(2).filter_map(|l| l.split_whitespace().next()).collect();
    assert_eq!(laws, ["ident", "ident", "ident", "action", "status:"]);
}

#[test]
fn command_outputs() {
    let act = run_args(["operad-forge", "act", golden("25_act.opd").to_str().unwrap()]);
    assert_eq!(act.code, 0);
    assert_eq!(
        act.stdout,
        "let same = link2{ twist=0; central=[]; body=[X] };\n\
         let xy = link2{ twist=0; central=[]; body=[X, Y] };\n\
         let k = link1{ knots=[trefoil] };\n"
    );

    let compose = run_args(["operad-forge", "compose", golden("07_cubes_compose.opd").to_str().unwrap()]);
    assert_eq!(compose.stdout.lines().count(), 2);
    assert!(compose.stdout.starts_with("let quarters = cubes{ dim=1; cubes=[cube[(0,1/4)]"));

    let swap = run_args(["operad-forge", "swap-check", golden("29_swapcheck.opd").to_str().unwrap()]);
    assert_eq!(swap.stdout, "let noncentral = false;\nlet central = true;\n");

    let dec = run_args(["operad-forge", "decompose", golden("23_links_color2.opd").to_str().unwrap()]);
    assert_eq!(dec.code, 0);
    assert!(dec.stdout.contains("# w has central letters, so it lies outside S2"));
    assert!(dec.stdout.contains("let plain_s2 = [diagram{ sig=(;2);"));
}

#[test]
fn normalize_output_is_a_fixed_point() {
    let f = golden("20_compose_diagrams.opd");
    let once = run_args(["operad-forge", "normalize", f.to_str().unwrap()]).stdout;
    let dir = std::env::temp_dir().join(format!("operad-forge-norm-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let g = dir.join("n.opd");
    std::fs::write(&g, &once).unwrap();
    let twice = run_args(["operad-forge", "normalize", g.to_str().unwrap()]).stdout;
    assert_eq!(once, twice);
}

#[test]
fn render_is_stable_and_writes_files() {
    let f = golden("18_nested_mufflers.opd");
    let a = bin(&["render", f.to_str().unwrap()]);
    let b = bin(&["render", f.to_str().unwrap()]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert!(a.1.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\""));

    let ascii = bin(&["render", f.to_str().unwrap(), "--ascii"]).1;
    assert!(ascii.starts_with("cross-section"));

    let dir = std::env::temp_dir().join(format!("operad-forge-render-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.svg");
    let (code, out, _) = bin(&["render", f.to_str().unwrap(), "-o", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), a.1);

    let named = bin(&["render", golden("05_stacking_three.opd").to_str().unwrap(), "--name", "s"]);
    assert_eq!(named.1.matches("data-slot=").count(), 3);
    assert_eq!(bin(&["render", f.to_str().unwrap(), "--name", "f"]).0, 2);
}

/// The circles drawn for a nested diagram reproduce the forest: a disk
/// inside another gets a circle inside the other's circle, disjoint disks get
/// disjoint circles; each hole rectangle sits inside its muffler rectangle.
#[test]
fn rendered_nesting_matches_forest() {
    for name in ["18_nested_mufflers.opd", "26_act_hole_kinds.opd", "30_forest_three_colors.opd"] {
        let path = golden(name);
        let env = dsl::run_source(&std::fs::read_to_string(&path).unwrap(), None).unwrap();
        let d = env
            .bindings
            .iter()
            .rev()
            .find_map(|(_, v)| match v {
                Value::Diagram(d) => Some(d.clone()),
                _ => None,
            })
            .unwrap();
        let svg = run_args(["operad-forge", "render", path.to_str().unwrap()]).stdout;
        let circles: HashMap<String, (f64, f64, f64)> = svg
            .lines()
            .filter(|l| l.starts_with("<circle"))
            .map(|l| (attr(l, "data-node").unwrap().to_string(), (num(l, "cx"), num(l, "cy"), num(l, "r"))))
            .collect();
        let forest = d.forest();
        assert_eq!(circles.len(), forest.len());
        for a in forest.nodes() {
            for b in forest.nodes() {
                if a == b {
                    continue;
                }
                let (ax, ay, ar) = circles[forest.name(a)];
                let (bx, by, br) = circles[forest.name(b)];
                let dist = ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt();
                match forest.relation(a, b).unwrap() {
                    DiskRelation::StrictlyInside => assert!(dist + ar < br, "{name}: {} in {}", forest.name(a), forest.name(b)),
                    DiskRelation::Disjoint => assert!(dist > ar + br, "{name}: {} apart from {}", forest.name(a), forest.name(b)),
                    _ => {}
                }
            }
        }
        let mut current: Option<(f64, f64)> = None;
        let mut mufflers = 0;
        for l in svg.lines() {
            if l.starts_with("<rect data-muffler") {
                mufflers += 1;
                current = Some((num(l, "x"), num(l, "x") + num(l, "width")));
            } else if l.starts_with("<rect data-hole") {
                let (lo, hi) = current.unwrap();
                let (x, w) = (num(l, "x"), num(l, "width"));
                assert!(lo < x && x + w < hi, "{name}: hole outside its muffler");
            }
        }
        assert_eq!(mufflers, d.arity());
    }
}
