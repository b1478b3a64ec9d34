//! Drive the command line in-process on a small experiment file.

use std::fs;

pub fn run_example() -> std::io::Result<(i32, String)> {
    let dir = std::env::temp_dir().join(format!("phasebench-example-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, "[sim]\nR0 = 2\nN1 = 32\nN2 = 32\ndt = 0.05\nt_end = 1\ninit = bump\noutput_every = 5\n")?;
    let code = phasebench::cli::run_cli([
        "phasebench".as_ref(),
        "simulate".as_ref(),
        "--config".as_ref(),
        cfg.as_os_str(),
        "--out".as_ref(),
        dir.join("out").as_os_str(),
    ]);
    let report = fs::read_to_string(dir.join("out").join("report.txt"))?;
    fs::remove_dir_all(&dir)?;
    Ok((code, report))
}

fn main() -> std::io::Result<()> {
    let (code, report) = run_example()?;
    println!("exit code {code}\n{report}");
    Ok(())
}
