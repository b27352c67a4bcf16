fn main() {
    std::process::exit(ravg::cli::run_cli(std::env::args_os()));
}
