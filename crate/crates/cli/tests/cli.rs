use std::process::{Command, Output};

use tempfile::tempdir;

fn tessgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tessgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn kind_count(text: &str, kind: &str) -> usize {
    text.lines()
        .filter(|l| l.split('\t').nth(7) == Some(kind))
        .count()
}

#[test]
fn generate_counts_levels() {
    let o = tessgraph(&["generate", "--variant", "half-period", "--depth", "3", "--mode", "unit"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let even = kind_count(&text, "even");
    let odd = kind_count(&text, "odd") + kind_count(&text, "boundary");
    assert_eq!(even, 1 + 2 + 4 + 8);
    assert_eq!(odd, 3 + 5 + 9);
}

#[test]
fn generate_writes_file_and_reparses() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let o = tessgraph(&[
        "generate", "--variant", "period", "--depth", "3", "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let g = tessgraph::serialize::parse_graph(&text).unwrap();
    let direct = tessgraph::build_period(3, true, tessgraph::Mode::Geometric).unwrap();
    assert_eq!(g.labels(), direct.labels());
    assert_eq!(g.edges(), direct.edges());
}

#[test]
fn dot_motif() {
    let o = tessgraph(&["generate", "--depth", "1", "--format", "dot"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.matches(" -- ").count(), 7);
    assert_eq!(text.matches("pos=").count(), 6);
}

#[test]
fn dot_refuses_large_graphs() {
    let o = tessgraph(&["generate", "--depth", "8", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_constants() {
    let o = tessgraph(&["verify", "--depth", "8", "--levels-m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# overall = pass"));
    assert!(text.contains("\nalpha = "));
    assert!(text.contains("\nbeta = "));
    assert!(text.starts_with("# depth = 8\n# levels_m = 3\n# margin = 2\n"));
}

#[test]
fn verify_json_round_trips() {
    let o = tessgraph(&["verify", "--depth", "7", "--levels-m", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let reports = tessgraph::verification::reports_from_json(&stdout(&o)).unwrap();
    assert!(reports.iter().all(|r| r.pass));
    assert!(reports.iter().any(|r| r.lemma == "dist_levels"));
}

#[test]
fn delta_curves_flat_and_growing() {
    let run = |variant: &str| -> Vec<f64> {
        let o = tessgraph(&[
            "delta", "--variant", variant, "--depth", "8", "--strips", "1", "--radii", "4,8,12",
        ]);
        assert!(o.status.success());
        let text = stdout(&o);
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("radius,vertices,delta,witness_x,witness_y,witness_z,flagged")
        );
        lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect()
    };
    let w = run("tessellation");
    let t = run("tri-short");
    assert_eq!(w.len(), 3);
    assert!(w[2] - w[1] <= w[0]);
    assert!(t.windows(2).all(|p| p[1] > p[0]));
}

#[test]
fn budget_exit_code() {
    let o = tessgraph(&[
        "delta", "--depth", "6", "--radii", "20", "--subset", "all", "--budget", "10",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_exit_codes() {
    assert_eq!(tessgraph(&["generate", "--variant", "hexagonal"]).status.code(), Some(2));
    assert_eq!(tessgraph(&["generate", "--bogus-flag"]).status.code(), Some(2));
    assert_eq!(tessgraph(&["generate", "--depth", "0"]).status.code(), Some(2));
    assert_eq!(
        tessgraph(&["generate", "--variant", "tri-long", "--mode", "unit"]).status.code(),
        Some(2)
    );
    assert_eq!(tessgraph(&["delta", "--format", "dot"]).status.code(), Some(2));
    assert_eq!(tessgraph(&["verify", "--depth", "3"]).status.code(), Some(2));
}

#[test]
fn unit_triangulation_with_diagonal_length() {
    let o = tessgraph(&[
        "generate", "--variant", "tri-short", "--mode", "unit", "--depth", "2",
        "--diagonal-length", "1",
    ]);
    assert!(o.status.success());
}

#[test]
fn config_file_and_override() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# comment\nvariant = half-period\ndepth=2\nmode=unit\n").unwrap();
    let from_file = tessgraph(&["generate", "--config", cfg.to_str().unwrap()]);
    assert!(from_file.status.success());
    assert!(stdout(&from_file).starts_with("# vertices 15\n"));
    let overridden = tessgraph(&["generate", "--config", cfg.to_str().unwrap(), "--depth", "1"]);
    assert!(stdout(&overridden).starts_with("# vertices 6\n"));

    std::fs::write(&cfg, "depth\n").unwrap();
    let bad = tessgraph(&["generate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn tiles_table() {
    let o = tessgraph(&["tiles", "--depth", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[tiles]"));
    assert!(text.contains("min_area = 0.0625"));
    let rows: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("# face_id"))
        .skip(1)
        .collect();
    assert!(!rows.is_empty());
    for row in rows {
        let cols: Vec<&str> = row.split(' ').collect();
        let k: usize = cols[1].parse().unwrap();
        assert!(k == 3 || k == 4);
        assert_eq!(cols.len(), 2 + k + 4);
        assert_eq!(*cols.last().unwrap(), "true");
    }
}

#[test]
fn crossing_csv_has_both_variants() {
    let o = tessgraph(&["crossing", "--depth", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("variant,x,distance\n"));
    assert!(text.contains("\nperiod,1,2.23606797749979\n"));
    assert!(text.contains("\ntri-short,7,1\n"));
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let args = |w: &'static str| ["verify", "--depth", "7", "--levels-m", "2", "--workers", w];
    let one = tessgraph(&args("1"));
    let many = tessgraph(&args("4"));
    assert_eq!(one.stdout, many.stdout);
    let delta = |w: &'static str| {
        tessgraph(&["delta", "--depth", "7", "--radii", "3,6,9", "--workers", w]).stdout
    };
    assert_eq!(delta("1"), delta("8"));
}
