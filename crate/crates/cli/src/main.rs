fn main() {
    std::process::exit(logjac_cli::run_from(std::env::args_os().skip(1)));
}
