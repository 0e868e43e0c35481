use std::path::Path;
use std::process::Command as Process;

use clap::Parser;
use smartlap::cli::{cmd_bench, cmd_gen, cmd_quality, cmd_smooth, run, Cli, Command};
use smartlap::prelude::{read_triangle_files, write_triangle_files, LayoutKind, MeshStorage, Point};

fn parse(args: &[&str]) -> Command {
    let mut full = vec!["smartlap"];
    full.extend_from_slice(args);
    Cli::try_parse_from(full).unwrap().command
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut out = Vec::new();
    for stem in ["a", "b"] {
        let s = dir.path().join(stem);
        let Command::Gen(args) = parse(&["gen", "--kind", "delaunay", "--n", "1000", "--seed", "42", "-o", p(&s)]) else {
            unreachable!()
        };
        let m = cmd_gen(&args, &mut out).unwrap();
        assert_eq!(m.n_vert(), 1000);
    }
    for ext in ["node", "ele"] {
        let a = std::fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(a, b);
    }
    assert!(String::from_utf8(out).unwrap().contains("1000 vertices"));
}

#[test]
fn gen_grid_counts() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("g");
    let Command::Gen(args) =
        parse(&["gen", "--kind", "grid", "--rows", "50", "--cols", "50", "--perturb", "0.3", "--seed", "7", "-o", p(&s)])
    else {
        unreachable!()
    };
    let m = cmd_gen(&args, &mut Vec::new()).unwrap();
    assert_eq!((m.n_vert(), m.n_trgl()), (2500, 2 * 49 * 49));
    assert_eq!(read_triangle_files(&s, LayoutKind::Aos).unwrap().n_vert(), 2500);
}

fn grid_fixture(dir: &Path) -> (String, String) {
    let m = smartlap::meshgen::GenSpec::grid(20, 20, 0.3, 3).build(LayoutKind::Soa).unwrap();
    let (n, e) = write_triangle_files(&m, dir.join("in")).unwrap();
    (p(&n).to_owned(), p(&e).to_owned())
}

#[test]
fn smooth_keeps_boundary_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (node, ele) = grid_fixture(dir.path());
    let out_stem = dir.path().join("out");
    let Command::Smooth(args) =
        parse(&["smooth", &node, &ele, "--form", "b", "--layout", "aos", "--backend", "serial", "-o", p(&out_stem)])
    else {
        unreachable!()
    };
    let mut text = Vec::new();
    let stats = cmd_smooth(&args, &mut text).unwrap();
    let input = read_triangle_files(dir.path().join("in"), LayoutKind::Soa).unwrap();
    let output = read_triangle_files(&out_stem, LayoutKind::Soa).unwrap();
    for v in 0..input.n_vert() {
        if smartlap::meshgen::grid_is_boundary(20, 20, v) {
            assert_eq!(input.point(v), output.point(v));
        }
    }
    assert_eq!(input.triangles(), output.triangles());
    assert!(stats.after.mean > stats.before.mean);
    let text = String::from_utf8(text).unwrap();
    assert!(text.contains("iterations:") && text.contains("alpha after"), "{text}");
}

#[test]
fn max_iters_one_reports_one_iteration_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let (node, ele) = grid_fixture(dir.path());
    let out = dir.path().join("o");
    let Command::Smooth(args) = parse(&["smooth", &node, &ele, "--max-iters", "1", "--json", "-o", p(&out)]) else {
        unreachable!()
    };
    let mut buf = Vec::new();
    cmd_smooth(&args, &mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v["iterations"], 1);
    assert_eq!(v["stop_reason"], "max-iters");
}

#[test]
fn forms_compared_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let m = smartlap::meshgen::GenSpec::delaunay(3000, 5).build(LayoutKind::Soa).unwrap();
    let (n, e) = write_triangle_files(&m, dir.path().join("d")).unwrap();
    let mut iters = Vec::new();
    for form in ["a", "b"] {
        let Command::Smooth(args) = parse(&["smooth", p(&n), p(&e), "--form", form, "-o", p(&dir.path().join(form))])
        else {
            unreachable!()
        };
        iters.push(cmd_smooth(&args, &mut Vec::new()).unwrap().iterations);
    }
    assert!(iters[1] <= iters[0], "form B {} vs form A {}", iters[1], iters[0]);
}

#[test]
fn quality_of_single_equilateral_and_inverted() {
    let dir = tempfile::tempdir().unwrap();
    let eq = [Point::new(0., 0.), Point::new(1., 0.), Point::new(0.5, 3f64.sqrt() / 2.)];
    let m = MeshStorage::build(&eq, &[[0, 1, 2]], LayoutKind::Soa).unwrap();
    let (n, e) = write_triangle_files(&m, dir.path().join("eq")).unwrap();
    let Command::Quality(args) = parse(&["quality", p(&n), p(&e)]) else { unreachable!() };
    let r = cmd_quality(&args, &mut Vec::new()).unwrap();
    assert!((r.alpha.min - 1.0).abs() < 1e-12 && (r.alpha.max - 1.0).abs() < 1e-12);
    assert!((r.alpha.mean - 1.0).abs() < 1e-12);
    assert_eq!(r.boundary_vertices, 3);

    let (mut pts, tris) = smartlap::meshgen::perturbed_grid(3, 3, 0.0, 0).unwrap();
    pts[4] = Point::new(1.2, 0.5); // pushes the centre outside, flipping one triangle
    let m = MeshStorage::build(&pts, &tris, LayoutKind::Soa).unwrap();
    let (n, e) = write_triangle_files(&m, dir.path().join("inv")).unwrap();
    let Command::Quality(args) = parse(&["quality", p(&n), p(&e), "--json"]) else { unreachable!() };
    let mut buf = Vec::new();
    let r = cmd_quality(&args, &mut buf).unwrap();
    let expect = smartlap::quality::evaluate_qualities(&m).iter().filter(|&&a| a <= 0.0).count();
    assert_eq!(r.alpha.non_positive, expect);
    assert!(expect >= 1);
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v["alpha"]["non_positive"], expect);
}

#[test]
fn quality_improves_after_smoothing() {
    let dir = tempfile::tempdir().unwrap();
    let (node, ele) = grid_fixture(dir.path());
    let out = dir.path().join("s");
    let Command::Smooth(args) = parse(&["smooth", &node, &ele, "-o", p(&out)]) else { unreachable!() };
    cmd_smooth(&args, &mut Vec::new()).unwrap();
    let q = |n: &str, e: &str| {
        let Command::Quality(a) = parse(&["quality", n, e]) else { unreachable!() };
        cmd_quality(&a, &mut Vec::new()).unwrap().alpha
    };
    let before = q(&node, &ele);
    let after = q(p(&out.with_extension("node")), p(&out.with_extension("ele")));
    assert!(after.mean >= before.mean);
}

#[test]
fn bench_writes_documented_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("r.csv");
    let json_path = dir.path().join("r.json");
    let Command::Bench(args) = parse(&[
        "bench", "--sizes", "300,400", "--repeats", "1", "--workers", "2", "--csv", p(&csv_path), "--json", p(&json_path),
        "--fixtures", p(&dir.path().join("fx")),
    ]) else {
        unreachable!()
    };
    let report = cmd_bench(&args, &mut Vec::new(), &mut Vec::new()).unwrap();
    assert!(report.failures.is_empty(), "{:?}", report.failures);
    assert_eq!(report.records.len(), 32);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().next().unwrap(), smartlap::bench::CSV_HEADER.join(","));
    assert_eq!(csv.lines().count(), 33);
    let back: smartlap::bench::BenchReport = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(back, report);
    assert!(dir.path().join("fx").read_dir().unwrap().count() >= 4);
}

#[test]
fn invalid_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.node");
    std::fs::write(&bad, "3 2 0 0\n0 0 0\n1 x 0\n2 0 1\n").unwrap();
    std::fs::write(dir.path().join("bad.ele"), "1 3 0\n0 0 1 2\n").unwrap();
    let cli = Cli::try_parse_from(["smartlap", "quality", p(&bad), p(&dir.path().join("bad.ele"))]).unwrap();
    let err = run(cli, &mut Vec::new(), &mut Vec::new()).unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
}

#[test]
fn binary_runs_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_smartlap");
    let stem = dir.path().join("m");
    let status = Process::new(exe).args(["gen", "--kind", "grid", "--rows", "8", "--cols", "9", "-o", p(&stem)]).status().unwrap();
    assert!(status.success());
    let out = Process::new(exe)
        .args(["smooth", p(&stem.with_extension("node")), p(&stem.with_extension("ele")), "-o", p(&dir.path().join("s"))])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("iterations"));
    let bad = Process::new(exe).args(["smooth", "missing.node", "missing.ele", "-o", "x"]).output().unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}
