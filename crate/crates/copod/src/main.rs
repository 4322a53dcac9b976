fn main() {
    std::process::exit(copod::cli::run(std::env::args_os()));
}
