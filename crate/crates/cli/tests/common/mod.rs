#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use varisat::dimacs::DimacsParser;
use varisat::Solver;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    /// Value of the first `key: value` line.
    pub fn field(&self, key: &str) -> Option<&str> {
        let prefix = format!("{key}: ");
        self.stdout.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
    }
}

pub fn hwm(args: &[&str]) -> Run {
    hwm_env(args, &[])
}

pub fn hwm_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hwm"));
    cmd.args(args).env_remove("HWM_SOLVER");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

/// Solves a DIMACS file; the model is returned in solver output form.
pub fn solve_dimacs(text: &str) -> Option<String> {
    let formula = DimacsParser::parse(text.as_bytes()).expect("valid DIMACS");
    let mut solver = Solver::new();
    solver.add_formula(&formula);
    if !solver.solve().unwrap() {
        return None;
    }
    let lits: Vec<String> = solver
        .model()
        .unwrap()
        .iter()
        .map(|l| l.to_dimacs().to_string())
        .collect();
    Some(format!("s SATISFIABLE\nv {} 0\n", lits.join(" ")))
}

/// A stand-in solver executable that prints a fixed answer.
pub fn fake_solver(dir: &Path, answer: &str) -> PathBuf {
    use std::os::unix::fs::PermissionsExt;
    let out = dir.join("answer.txt");
    std::fs::write(&out, answer).unwrap();
    let script = dir.join("solver.sh");
    std::fs::write(&script, format!("#!/bin/sh\ncat '{}'\n", out.display())).unwrap();
    std::fs::set_permissions(&script, std::fs::Permissions::from_mode(0o755)).unwrap();
    script
}
