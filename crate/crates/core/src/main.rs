fn main() {
    std::process::exit(motsplit::cli::run_from(std::env::args_os()));
}
