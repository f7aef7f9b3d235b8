use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pinchip::formats::layout_json;
use pinchip_core::layout::{generate_layout, LayoutConfig};

fn default_config_text() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/default.toml")).unwrap()
}

fn default_tree() -> toml::Table {
    default_config_text().parse().unwrap()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pinchip"));
    cmd.current_dir(dir).args(args).env_remove("PINCHIP_MATERIALS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    Run {
        code: status.code().unwrap(),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn config(&self, tree: &toml::Table) -> String {
        self.write("design.toml", &toml::to_string(tree).unwrap());
        "design.toml".into()
    }

    fn run(&self, args: &[&str]) -> Run {
        run_in(self.dir.path(), args, &[])
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.dir.path().join(name)).unwrap()
    }
}

fn set(tree: &mut toml::Table, path: &str, value: toml::Value) {
    let mut parts: Vec<&str> = path.split('.').collect();
    let last = parts.pop().unwrap();
    let mut node = tree;
    for p in parts {
        node = node.get_mut(p).unwrap().as_table_mut().unwrap();
    }
    node.insert(last.into(), value);
}

fn s(v: &str) -> toml::Value {
    toml::Value::String(v.into())
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = rows[0]
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows[1..].iter().map(|r| r[i].clone()).collect()
}

#[test]
fn scale_reports_vertical_count() {
    let ws = Workspace::new();
    let cfg = ws.config(&default_tree());
    let r = ws.run(&["scale", "-c", &cfg, "-f", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = csv_rows(&r.stdout);
    let names = column(&rows, "name");
    let qubits = column(&rows, "qubits");
    let vertical = names.iter().position(|n| n == "pin-chip").unwrap();
    assert_eq!(qubits[vertical], "160000");
    assert_eq!(column(&rows, "logical_qubits")[vertical], "80");
    let lateral = names.iter().position(|n| n == "flip-chip-bonds").unwrap();
    assert_eq!(column(&rows, "wires")[lateral], "14285");
}

#[test]
fn empty_sweep_is_a_validation_error() {
    let ws = Workspace::new();
    let mut tree = default_tree();
    tree["sweep"].as_array_mut().unwrap()[0]
        .as_table_mut()
        .unwrap()
        .insert("steps".into(), toml::Value::Integer(0));
    let cfg = ws.config(&tree);
    for cmd in ["scale", "sweep"] {
        let r = ws.run(&[cmd, "-c", &cfg, "--name", "pin-impedance"][..if cmd == "scale" { 3 } else { 5 }]);
        assert_eq!(r.code, 1, "{cmd}: {}", r.stderr);
        assert!(r.stderr.contains("sweep[0].steps"), "{}", r.stderr);
    }
}

#[test]
fn errors_name_the_field() {
    let cases: Vec<(&str, Box<dyn Fn(&mut toml::Table)>, &str)> = vec![
        (
            "missing unit",
            Box::new(|t| set(t, "array.qubit_pitch", s("500"))),
            "array.qubit_pitch",
        ),
        (
            "wrong dimension",
            Box::new(|t| set(t, "array.chip_side", s("200GHz"))),
            "array.chip_side",
        ),
        (
            "unknown field",
            Box::new(|t| set(t, "layout.hole_size", s("1mm"))),
            "layout",
        ),
        (
            "negative pitch",
            Box::new(|t| set(t, "array.qubit_pitch", s("-5um"))),
            "array.qubit_pitch",
        ),
        (
            "unknown dielectric",
            Box::new(|t| {
                t["lines"].as_array_mut().unwrap()[1]
                    .as_table_mut()
                    .unwrap()
                    .insert("dielectric".into(), s("unobtainium"));
            }),
            "lines[1].dielectric",
        ),
        (
            "unknown sweep parameter",
            Box::new(|t| {
                t["sweep"].as_array_mut().unwrap()[1]
                    .as_table_mut()
                    .unwrap()
                    .insert("parameter".into(), s("array.chip_width"));
            }),
            "sweep[1].parameter",
        ),
        (
            "unknown stage",
            Box::new(|t| {
                t["thermal"]["controllers"].as_array_mut().unwrap()[0]
                    .as_table_mut()
                    .unwrap()
                    .insert("stage".into(), s("4K"));
            }),
            "thermal.controllers[0].stage",
        ),
    ];
    for (label, mutate, field) in cases {
        let ws = Workspace::new();
        let mut tree = default_tree();
        mutate(&mut tree);
        let cfg = ws.config(&tree);
        let r = ws.run(&["scale", "-c", &cfg]);
        assert_eq!(r.code, 1, "{label}: {}", r.stderr);
        assert!(r.stderr.contains(field), "{label}: `{}` lacks {field}", r.stderr.trim());
    }
}

#[test]
fn unsupported_format_and_usage_errors_exit_one() {
    let ws = Workspace::new();
    let cfg = ws.config(&default_tree());
    assert_eq!(ws.run(&["rf", "-c", &cfg, "-f", "svg"]).code, 1);
    assert_eq!(ws.run(&["scale"]).code, 1);
    assert_eq!(ws.run(&["frobnicate"]).code, 1);
    assert_eq!(ws.run(&["--help"]).code, 0);
    assert_eq!(ws.run(&["scale", "-c", "missing.toml"]).code, 2);
}

#[test]
fn pitch_violation_is_an_analysis_error() {
    let ws = Workspace::new();
    let mut tree = default_tree();
    tree["wiring"].as_array_mut().unwrap()[1]
        .as_table_mut()
        .unwrap()
        .insert("wire_pitch".into(), s("1mm"));
    let cfg = ws.config(&tree);
    let r = ws.run(&["scale", "-c", &cfg]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert!(r.stderr.contains("pin-chip"), "{}", r.stderr);
}

#[test]
fn layout_with_drc_errors_still_writes_the_artifact() {
    let ws = Workspace::new();
    let mut tree = default_tree();
    set(&mut tree, "layout.tip_tolerance", s("5um"));
    let cfg = ws.config(&tree);
    let r = ws.run(&["layout", "-c", &cfg, "-f", "drc", "-o", "drc.txt"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("R5"), "{}", r.stderr);
    assert!(ws.read("drc.txt").contains("R5"));
}

fn svg_counts(svg: &str) -> std::collections::BTreeMap<String, usize> {
    let doc = roxmltree::Document::parse(svg).unwrap();
    let mut counts = std::collections::BTreeMap::new();
    for n in doc.descendants().filter(|n| n.is_element()) {
        if let Some(class) = n.attribute("class") {
            *counts.entry(format!("{}.{class}", n.tag_name().name())).or_insert(0) += 1;
        }
    }
    counts
}

#[test]
fn svg_is_well_formed_and_counts_match() {
    for n in [1i64, 3, 7] {
        let ws = Workspace::new();
        let mut tree = default_tree();
        set(&mut tree, "layout.array_side_count", toml::Value::Integer(n));
        let cfg = ws.config(&tree);
        let r = ws.run(&["layout", "-c", &cfg, "-f", "svg"]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let c = svg_counts(&r.stdout);
        let sites = (n * n) as usize;
        assert_eq!(c.get("circle.hole"), Some(&sites), "{c:?}");
        assert_eq!(c.get("circle.pad"), Some(&sites));
        assert_eq!(c.get("rect.channel"), Some(&(n as usize)));
        assert_eq!(c.get("line.ribbon"), Some(&(n as usize)));
        assert_eq!(c.get("circle.violation"), None);
    }
}

#[test]
fn layout_json_round_trips() {
    let ws = Workspace::new();
    let cfg = ws.config(&default_tree());
    let r = ws.run(&["layout", "-c", &cfg, "-o", "layout.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = layout_json::import(&ws.read("layout.json")).unwrap();
    let mut cfg = LayoutConfig::nominal(16);
    cfg.pad_diameter = 200e-6;
    cfg.hole_diameter = 300e-6;
    cfg.channel_width = 300e-6;
    let expected = generate_layout(&cfg).unwrap();
    assert_eq!(doc.layout, expected);
    assert_eq!(
        layout_json::export(&doc.layout, doc.drc.as_ref()).unwrap(),
        ws.read("layout.json")
    );
}

#[test]
fn chip_side_sweep_flips_limiting_factor_once() {
    let ws = Workspace::new();
    let cfg = ws.config(&default_tree());
    let r = ws.run(&["sweep", "-c", &cfg, "--name", "chip-side"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = csv_rows(&r.stdout);
    let factor = column(&rows, "flip-chip-bonds.limiting_factor");
    let sides: Vec<f64> = column(&rows, "array.chip_side")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    let flips: Vec<usize> = (1..factor.len()).filter(|&i| factor[i] != factor[i - 1]).collect();
    assert_eq!(flips.len(), 1, "{factor:?}");
    // Bisection oracle on (ℓ/p_q)² − 4ℓ/p_w with p_w = 56 µm.
    let g = |l: f64| (l / 500e-6).powi(2) - 4.0 * l / 56e-6;
    let (mut lo, mut hi) = (1e-3, 0.1);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    let i = flips[0];
    assert!(
        sides[i - 1] < lo && lo < sides[i],
        "{} .. {} vs {lo}",
        sides[i - 1],
        sides[i]
    );
    assert_eq!(factor[i - 1], "qubit_size");
    assert_eq!(factor[i], "wire_count");
}

#[test]
fn pin_impedance_sweep_descends() {
    let ws = Workspace::new();
    let cfg = ws.config(&default_tree());
    let r = ws.run(&["sweep", "-c", &cfg, "--name", "pin-impedance"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let z: Vec<f64> = column(&csv_rows(&r.stdout), "pin-small.impedance_ohm")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(z.len(), 11);
    assert!(z.windows(2).all(|w| w[1] < w[0]));
    assert!((z[0] - 24.0).abs() < 0.5 && (z[10] - 14.0).abs() < 0.5);
}

#[test]
fn single_point_sweep_equals_direct_run() {
    let ws = Workspace::new();
    let mut tree = default_tree();
    let sweep = tree["sweep"].as_array_mut().unwrap()[0].as_table_mut().unwrap();
    sweep.insert("start".into(), s("250um"));
    sweep.insert("stop".into(), s("250um"));
    sweep.insert("steps".into(), toml::Value::Integer(1));
    sweep.remove("linked");
    let cfg = ws.config(&tree);
    let swept = csv_rows(&ws.run(&["sweep", "-c", &cfg, "--name", "pin-impedance"]).stdout);
    assert_eq!(swept.len(), 2);

    let mut direct_tree = default_tree();
    direct_tree["lines"].as_array_mut().unwrap()[0]
        .as_table_mut()
        .unwrap()
        .insert("outer_diameter".into(), s("250um"));
    let cfg = ws.config(&direct_tree);
    let direct = csv_rows(&ws.run(&["impedance", "-c", &cfg, "-f", "csv"]).stdout);
    for (i, name) in column(&direct, "name").iter().enumerate() {
        assert_eq!(
            column(&swept, &format!("{name}.impedance_ohm"))[0],
            column(&direct, "impedance_ohm")[i]
        );
    }
}

#[test]
fn paper_check_exit_matches_rows() {
    let ws = Workspace::new();
    let cfg = ws.config(&default_tree());
    for extra in [
        vec![],
        vec!["--properties", "0"],
        vec!["--seed", "99", "--properties", "50"],
    ] {
        let mut args = vec!["paper-check", "-c", &cfg, "-f", "csv"];
        args.extend(extra.iter().copied());
        let r = ws.run(&args);
        let status = column(&csv_rows(&r.stdout), "status");
        let failures = status.iter().filter(|s| *s == "FAIL").count();
        assert_eq!(r.code, if failures == 0 { 0 } else { 2 });
        assert!(r.stderr.contains(&format!("{failures} golden value(s)")) || failures == 0);
        assert_eq!(status.len(), if extra.contains(&"0") { 37 } else { 41 });
    }
}

#[test]
fn catalog_override_by_flag_and_environment() {
    let ws = Workspace::new();
    let cfg = ws.config(&default_tree());
    let catalog = pinchip_core::materials::DEFAULT_CATALOG_TOML.replace(
        "name = \"STYCAST-1266\"\nkind = \"dielectric\"\nrelative_permittivity = 3.0",
        "name = \"STYCAST-1266\"\nkind = \"dielectric\"\nrelative_permittivity = 12.0",
    );
    let path = ws.write("materials.toml", &catalog);
    let z = |r: Run| -> f64 {
        assert_eq!(r.code, 0, "{}", r.stderr);
        column(&csv_rows(&r.stdout), "impedance_ohm")[0].parse().unwrap()
    };
    let base = z(ws.run(&["impedance", "-c", &cfg, "-f", "csv"]));
    let flag = z(ws.run(&[
        "--materials",
        path.to_str().unwrap(),
        "impedance",
        "-c",
        &cfg,
        "-f",
        "csv",
    ]));
    let env = z(run_in(
        ws.dir.path(),
        &["impedance", "-c", &cfg, "-f", "csv"],
        &[("PINCHIP_MATERIALS", path.to_str().unwrap())],
    ));
    assert!((flag - base / 2.0).abs() < 1e-9);
    assert_eq!(flag, env);

    let broken = ws.write("broken.toml", "[[material]]\nname = \"Nb\"\nkind = \"conductor\"\n");
    let r = ws.run(&["--materials", broken.to_str().unwrap(), "scale", "-c", &cfg]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("missing required materials"), "{}", r.stderr);
}

#[test]
fn run_report_hashes_outputs() {
    let ws = Workspace::new();
    let cfg = ws.config(&default_tree());
    let r = ws.run(&[
        "rf",
        "-c",
        &cfg,
        "-f",
        "touchstone",
        "-o",
        "path.s2p",
        "--report",
        "run.json",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report: serde_json::Value = serde_json::from_str(&ws.read("run.json")).unwrap();
    assert_eq!(report["command"], "rf");
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    let bytes = std::fs::read(ws.dir.path().join("path.s2p")).unwrap();
    assert_eq!(report["outputs"][0]["sha256"], pinchip::report::sha256_hex(&bytes));
    let text = String::from_utf8(bytes).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with(['!', '#'])).count(), 1001);
}

#[test]
fn budget_flags_overloaded_stage() {
    let ws = Workspace::new();
    let cfg = ws.config(&default_tree());
    let r = ws.run(&["budget", "-c", &cfg, "-f", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let three_k = rows.iter().find(|r| r["stage"] == "3K").unwrap();
    assert!((three_k["dissipation"].as_f64().unwrap() - 160_000.0 * 100e-9).abs() < 1e-12);
    let mxc = rows.iter().find(|r| r["stage"] == "mixing-chamber").unwrap();
    assert_eq!(mxc["feasible"], false);
    assert!(r.stderr.contains("mixing-chamber"));
}
