fn main() {
    std::process::exit(phasebench::cli::run_cli(std::env::args_os()));
}
