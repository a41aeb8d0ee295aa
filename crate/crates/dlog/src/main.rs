fn main() {
    std::process::exit(dlog::cli::run(std::env::args_os()));
}
