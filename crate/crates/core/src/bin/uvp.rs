fn main() {
    std::process::exit(uvp::cli::run(std::env::args_os()));
}
