fn main() {
    std::process::exit(irs_af::experiments::cli::run_cli(std::env::args_os()));
}
