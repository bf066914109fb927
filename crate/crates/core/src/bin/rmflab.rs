fn main() {
    std::process::exit(rmflab::cli::run(std::env::args_os()));
}
