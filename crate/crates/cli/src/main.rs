fn main() {
    std::process::exit(ietforge_cli::run(std::env::args_os()));
}
