use std::process::{Command, Output};

const E1: [&str; 6] = ["--q", "2", "--curve", "a1=T;a6=T^2", "--n", "T^3"];
const E2: [&str; 6] = ["--q", "3", "--curve", "a2=T^2+T;a4=T^2", "--n", "T^3-T^2"];

fn modpar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modpar")).args(args).env_remove("MODPAR_CACHE_DIR").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = modpar(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn with<'a>(cmd: &'a [&'a str], curve: &'a [&'a str]) -> Vec<&'a str> {
    cmd.iter().chain(curve).copied().collect()
}

#[test]
fn cusps_of_the_first_level() {
    let out = stdout(&["cusps", "--q", "2", "--n", "T^3"]);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["inf", "0", "1/T", "1/T^2"]);
}

#[test]
fn graph_dot_is_well_formed() {
    let out = stdout(&["graph", "--q", "3", "--n", "T^3-T^2", "--dot"]);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches('{').count(), out.matches('}').count());
    let declared: Vec<&str> =
        out.lines().filter(|l| l.contains("[label=") && !l.contains("->")).map(|l| l.split_whitespace().next().unwrap()).collect();
    for line in out.lines().filter(|l| l.contains("->")) {
        let mut parts = line.split_whitespace();
        let (a, _, b) = (parts.next().unwrap(), parts.next(), parts.next().unwrap());
        assert!(declared.contains(&a) && declared.contains(&b), "undeclared node in {line}");
    }
    assert_eq!(out, stdout(&["graph", "--q", "3", "--n", "T^3-T^2", "--format", "dot"]));
}

#[test]
fn first_example_report() {
    let out = stdout(&with(&["analyze", "--depth", "15"], &E1));
    for line in [
        "deg Phi = 1",
        "torsion bound 16 (primes of degree <= 15)",
        "Phi(0) = pi + O(pi^7) : order 4 (divides bound 16)",
        "Phi(1/T) = pi^-1 + O(pi^5) : order 4 (divides bound 16)",
        "Phi(1/T^2) = pi^2 + O(pi^8) : order 2 (divides bound 16)",
    ] {
        assert!(out.contains(line), "missing {line:?} in\n{out}");
    }
}

#[test]
fn eval_cusp_on_the_second_example() {
    let out = stdout(&with(&["eval-cusp", "--s", "1/T", "--eps", "2"], &E2));
    assert!(out.starts_with("Phi(1/T) = pi^-1 + 1 + pi + O(pi^2)"), "{out}");
    assert!(out.contains("certificate"));
}

#[test]
fn torsion_bound_and_newform() {
    let out = stdout(&with(&["torsion-bound", "--depth", "10"], &E2));
    assert!(out.starts_with("torsion bound 8"), "{out}");
    let out = stdout(&with(&["newform"], &E1));
    assert!(out.contains("<phi, phi> = 4") && out.contains("c(1) = 1"), "{out}");
}

#[test]
fn json_output_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("modpar-cli-cache-{}", std::process::id()));
    let base = with(&["--format", "json", "analyze", "--depth", "8"], &E1);
    let cached: Vec<&str> = base.iter().copied().chain(["--cache-dir", dir.to_str().unwrap()]).collect();
    let a = stdout(&base);
    let b = stdout(&cached);
    let c = stdout(&cached);
    let seq: Vec<&str> = base.iter().copied().chain(["--sequential"]).collect();
    let d = stdout(&seq);
    assert_eq!(a, b);
    assert_eq!(b, c);
    assert_eq!(a, d);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["degree"], 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    // usage error
    let out = modpar(&["analyze", "--q", "2", "--curve", "a1=T;a6=T^2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
    // invalid input
    assert_eq!(modpar(&["cusps", "--q", "4", "--n", "T"]).status.code(), Some(3));
    assert_eq!(modpar(&["analyze", "--q", "2", "--curve", "a1=T;a6=T^2", "--n", "T^4"]).status.code(), Some(3));
    // too few primes for a torsion bound
    assert_eq!(modpar(&with(&["torsion-bound", "--depth", "2"], &E2)).status.code(), Some(2));
    assert!(modpar(&["--help"]).status.success());
}
