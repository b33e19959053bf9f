fn main() {
    std::process::exit(fca_core::cli::run(std::env::args_os()));
}
