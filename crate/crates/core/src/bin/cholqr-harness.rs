fn main() {
    std::process::exit(cholqr::harness::cli::main_with_args(std::env::args_os()));
}
