//! End-to-end checks of the command-line interface.

use std::path::Path;
use std::process::Command;

fn onionflow() -> Command {
    Command::new(env!("CARGO_BIN_EXE_onionflow"))
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("onionflow-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn peel_quadrant_emits_known_sequence() {
    const EXPECTED: [u32; 32] = [
        1, 2, 2, 3, 4, 4, 3, 4, 6, 6, 5, 4, 6, 6, 8, 7, 6, 6, 6, 8, 9, 10, 10, 8, 8, 7, 8, 10, 10,
        12, 13, 12,
    ];
    let dir = tempdir("quadrant");
    let output = onionflow()
        .args(["peel-quadrant", "--n", "32", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let csv = std::fs::read_to_string(dir.join("quadrant.csv")).unwrap();
    let sizes: Vec<u32> = csv
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(sizes, EXPECTED);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn peel_square_reports_three_layers() {
    let output = onionflow()
        .args(["peel-square", "--m", "3"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    // every run echoes its full resolved configuration
    assert!(
        stdout.contains("config: peel-square m=3"),
        "stdout: {stdout}"
    );
    assert!(stdout.contains("3 layers"), "stdout: {stdout}");
}

#[test]
fn acsf_disk_matches_closed_form_within_one_percent() {
    let output = onionflow()
        .args([
            "acsf",
            "--region",
            "disk",
            "--r0",
            "0.5",
            "--stop-area-fraction",
            "0.75",
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    let grab = |prefix: &str| -> f64 {
        stdout
            .lines()
            .find_map(|l| l.split_once(prefix).map(|(_, v)| v.trim().parse().unwrap()))
            .unwrap_or_else(|| panic!("missing '{prefix}' in: {stdout}"))
    };
    let t = grab("t = ");
    let closed = grab("closed-form circle time:");
    assert!(
        (t - closed).abs() / closed < 0.01,
        "simulated {t} vs closed form {closed}"
    );
}

#[test]
fn identical_invocations_write_identical_files() {
    let run = |dir: &Path| {
        let output = onionflow()
            .args(["peel-quadrant", "--n", "64", "--alpha", "0.1", "--out"])
            .arg(dir)
            .env("ONIONFLOW_THREADS", "3")
            .output()
            .unwrap();
        assert!(output.status.success());
        (
            std::fs::read(dir.join("quadrant.csv")).unwrap(),
            std::fs::read(dir.join("profile.txt")).unwrap(),
        )
    };
    let d1 = tempdir("det1");
    let d2 = tempdir("det2");
    let (a_csv, a_prof) = run(&d1);
    let (b_csv, b_prof) = run(&d2);
    assert_eq!(a_csv, b_csv);
    assert_eq!(a_prof, b_prof);
    std::fs::remove_dir_all(&d1).unwrap();
    std::fs::remove_dir_all(&d2).unwrap();
}

#[test]
fn compare_output_has_fixed_header_and_is_thread_invariant() {
    let run = |threads: &str, dir: &Path| {
        let output = onionflow()
            .args([
                "compare",
                "--region",
                "disk",
                "--n",
                "40",
                "--n",
                "80",
                "--fractions",
                "0.9,0.8",
                "--out",
            ])
            .arg(dir)
            .env("ONIONFLOW_THREADS", threads)
            .output()
            .unwrap();
        assert!(output.status.success(), "{output:?}");
        std::fs::read_to_string(dir.join("compare.csv")).unwrap()
    };
    let d1 = tempdir("cmp1");
    let d2 = tempdir("cmp2");
    let one = run("1", &d1);
    let four = run("4", &d2);
    assert_eq!(one, four, "thread count changed the output bytes");
    assert!(
        one.starts_with("region,n,fraction,m_layers,t_flow,hausdorff,initial_hausdorff,c_est\n")
    );
    // ascending n, and within each n the fractions descend
    let rows: Vec<Vec<&str>> = one
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][1], "40");
    assert_eq!(rows[2][1], "80");
    assert!(rows[0][2].parse::<f64>().unwrap() > rows[1][2].parse::<f64>().unwrap());
    std::fs::remove_dir_all(&d1).unwrap();
    std::fs::remove_dir_all(&d2).unwrap();
}

#[test]
fn regions_file_round_trip() {
    let dir = tempdir("regions");
    let file = dir.join("regions.cfg");
    std::fs::write(
        &file,
        "# custom shapes\n[halfmoon]\nkind = half-disk\ncx = 0.5\ncy = 0\ndiameter = 1\n",
    )
    .unwrap();
    let output = onionflow()
        .args([
            "peel-shape",
            "--region",
            "halfmoon",
            "--n",
            "40",
            "--regions-file",
        ])
        .arg(&file)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("half-disk"), "stdout: {stdout}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2_and_runtime_errors_exit_1() {
    let bad_flag = onionflow()
        .args(["peel-square", "--m", "3", "--bogus"])
        .output()
        .unwrap();
    assert_eq!(bad_flag.status.code(), Some(2));

    let missing = onionflow().args(["peel-square"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let unknown_region = onionflow()
        .args(["peel-shape", "--region", "r9", "--n", "10"])
        .output()
        .unwrap();
    assert_eq!(unknown_region.status.code(), Some(1));
    let stderr = String::from_utf8(unknown_region.stderr).unwrap();
    assert!(stderr.contains("error"), "stderr: {stderr}");
}

#[test]
fn svg_output_is_wellformed() {
    let dir = tempdir("svg");
    let output = onionflow()
        .args(["peel-shape", "--region", "disk", "--n", "60", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(output.status.success());
    let svg = std::fs::read_to_string(dir.join("layers.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("<polygon"));
    std::fs::remove_dir_all(&dir).unwrap();
}
