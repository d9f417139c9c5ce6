fn main() {
    std::process::exit(specrig::cli::run(std::env::args().collect()));
}
