//! Drives the command line front end in-process: generate, check, decompose.
use std::path::Path;

use gdmd::cli::main_with_args;

fn run(args: &[&str]) -> i32 {
    let argv = std::iter::once("gdmd").chain(args.iter().copied());
    let code = main_with_args(argv.map(std::ffi::OsString::from));
    println!("gdmd {} -> exit {code}", args.join(" "));
    code
}

fn main() {
    let dir = std::env::temp_dir().join(format!("gdmd-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let data = s(&dir.join("wave.csv"));
    let out = s(&dir.join("out"));

    run(&["gen", "--kind", "standing-wave", "--theta", "0.5", "--q", "1,2,3", "--steps", "20", "--output", &data]);
    run(&["check", "-i", &data]);
    run(&["dmd", "-i", &data, "--delay", "2", "--scaling", "amplitude-qr", "--out", &out]);
    print!("{}", std::fs::read_to_string(dir.join("out/eigenvalues.csv")).unwrap());
    run(&["dmd", "-i", &data, "--rank", "1", "--rank-tol", "1e-8", "--out", &out]);

    std::fs::remove_dir_all(&dir).unwrap();
}
