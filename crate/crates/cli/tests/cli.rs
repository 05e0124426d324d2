use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn soliton(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soliton")).args(args).current_dir(dir).output().expect("spawn soliton")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

fn write_example(dir: &Path, name: &str) -> PathBuf {
    let o = soliton(&["example", name], dir);
    assert_eq!(code(&o), 0);
    let path = dir.join(format!("{name}.toml"));
    std::fs::write(&path, o.stdout).unwrap();
    path
}

fn reaper_height(x: f64) -> f64 {
    -x.cos().ln()
}

#[test]
fn shoot_follows_the_grim_reaper() {
    let dir = tempfile::tempdir().unwrap();
    let o = soliton(&["geodesic", "shoot", "--metric", "r3", "--c", "1", "--from", "0,0", "--angle", "0", "--len", "2"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("x,t\n"));
    let pts = rows(&out);
    assert!(pts.len() > 100);
    let worst = pts.iter().map(|p| (p[1] - reaper_height(p[0])).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "sup error {worst}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("termination: length reached"));
}

#[test]
fn connect_recovers_the_symmetric_arc() {
    let dir = tempfile::tempdir().unwrap();
    let t = reaper_height(0.3);
    let (from, to) = (format!("-0.3,{t}"), format!("0.3,{t}"));
    let o = soliton(&["geodesic", "connect", "--metric", "r3", "--c", "1", "--from", &from, "--to", &to, "--out", "arc.csv"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let pts = rows(&std::fs::read_to_string(dir.path().join("arc.csv")).unwrap());
    let worst = pts.iter().map(|p| (p[1] - reaper_height(p[0])).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "sup error {worst}");

    let o = soliton(&["flength", "--metric", "r3", "--c", "1", "--curve", "arc.csv"], dir.path());
    assert_eq!(code(&o), 0);
    let l: f64 = stdout(&o).trim().strip_prefix("f_length: ").unwrap().parse().unwrap();
    assert!((l - 2.0 * 0.3f64.tan()).abs() < 1e-5, "{l}");
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let o = soliton(&["geodesic", "shoot", "--c", "1", "--from", "0,0", "--angle", "0", "--len", "2"], dir.path());
    assert_eq!(code(&o), 64);
    assert_eq!(code(&soliton(&["geodesic", "shoot", "--metric", "s2", "--c", "1", "--from", "0,0", "--angle", "0", "--len", "2"], dir.path())), 64);
    assert_eq!(code(&soliton(&["frobnicate"], dir.path())), 64);
    assert_eq!(code(&soliton(&["example", "nope"], dir.path())), 64);
    std::fs::write(dir.path().join("bad.toml"), "[metric\nname = ").unwrap();
    assert_eq!(code(&soliton(&["check", "bad.toml"], dir.path())), 64);
    std::fs::write(dir.path().join("caps.toml"), "[metric]\nname = \"r3\"\nc = 1\n[domain]\nconstructor = \"scherk\"\na = 0\nb = 1\nr = 0.3\ns = -0.3\n[solver]\ncaps = [4, 2, 8]\n").unwrap();
    assert_eq!(code(&soliton(&["check", "caps.toml"], dir.path())), 64);
    assert_eq!(code(&soliton(&["check", "missing.toml"], dir.path())), 64);
    assert_eq!(code(&soliton(&["--help"], dir.path())), 0);
}

#[test]
fn check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let narrow = write_example(dir.path(), "r3-scherk");
    let o = soliton(&["check", narrow.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: case (a)"));

    let wide = write_example(dir.path(), "r3-scherk-wide");
    let o = soliton(&["check", wide.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 2);
    let out = stdout(&o);
    assert!(out.contains("verdict: fails"));
    assert!(out.contains("witness: E0 E1 E2 E3"), "{out}");

    let h2 = write_example(dir.path(), "h2xr-scherk");
    assert_eq!(code(&soliton(&["check", h2.to_str().unwrap()], dir.path())), 0);

    let o = soliton(&["flength", "--config", narrow.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn solve_writes_fields_and_rising_flux_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_example(dir.path(), "r3-scherk");
    let o = soliton(&["solve", cfg.to_str().unwrap(), "--h", "0.04", "--out", "run"], dir.path());
    assert_eq!(code(&o), 0, "{}\n{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let run = dir.path().join("run");
    let manifest = std::fs::read_to_string(run.join("MANIFEST")).unwrap();
    assert!(manifest.contains("status: complete"));
    for f in ["fields.csv", "flux.csv", "divergence.csv", "mesh.vtk", "structure.txt"] {
        assert!(manifest.contains(&format!("file: {f}")), "{manifest}");
        assert!(run.join(f).is_file());
    }
    let fields = std::fs::read_to_string(run.join("fields.csv")).unwrap();
    assert_eq!(fields.lines().next().unwrap(), "vertex,x,t,u_cap_2,u_cap_4,u_cap_8,u_cap_16");

    let flux = std::fs::read_to_string(run.join("flux.csv")).unwrap();
    let mut a_ratios: Vec<Vec<f64>> = vec![Vec::new(); 4];
    for line in flux.lines().skip(1) {
        let c: Vec<&str> = line.split(',').collect();
        if c[2] == "A" {
            a_ratios[c[1].parse::<usize>().unwrap()].push(c[5].parse().unwrap());
        }
    }
    for r in a_ratios.iter().filter(|r| !r.is_empty()) {
        assert_eq!(r.len(), 4);
        assert!(r.windows(2).all(|w| w[1] > w[0]), "{r:?}");
    }
}

#[test]
fn solve_refuses_classification_with_too_few_caps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_example(dir.path(), "r3-scherk");
    let o = soliton(&["solve", cfg.to_str().unwrap(), "--caps", "2", "--out", "few"], dir.path());
    assert_eq!(code(&o), 65);
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least 3"));
    assert!(!dir.path().join("few").exists());
}

#[test]
fn single_threaded_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_example(dir.path(), "r3-scherk");
    for out in ["one", "two"] {
        let o = soliton(&["--threads", "1", "solve", cfg.to_str().unwrap(), "--h", "0.04", "--out", out], dir.path());
        assert_eq!(code(&o), 0);
    }
    for f in ["fields.csv", "flux.csv", "divergence.csv", "interfaces.csv", "triangles.csv", "mesh.vtk", "MANIFEST"] {
        let a = std::fs::read(dir.path().join("one").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("two").join(f)).unwrap();
        assert!(a == b, "{f} differs");
    }
}

#[test]
fn flux_command_reports_every_cap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_example(dir.path(), "r3-scherk");
    std::fs::write(dir.path().join("mid.csv"), "x,t\n-0.29,0.3\n0.29,0.3\n").unwrap();
    let o = soliton(&["flux", cfg.to_str().unwrap(), "--h", "0.04", "--curve", "mid.csv"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.matches("curve_flux: ").count(), 4);
    assert!(out.contains("infinite_edge_ratios_rising: true"));
    for line in out.lines().filter(|l| l.starts_with("curve_flux")) {
        let v: f64 = line.split(": ").nth(1).unwrap().parse().unwrap();
        assert!(v.abs() < 0.7829, "{v}");
    }

    std::fs::write(dir.path().join("out.csv"), "x,t\n-1,0.3\n1,0.3\n").unwrap();
    let o = soliton(&["flux", cfg.to_str().unwrap(), "--h", "0.04", "--curve", "out.csv"], dir.path());
    assert_eq!(code(&o), 65);
}
