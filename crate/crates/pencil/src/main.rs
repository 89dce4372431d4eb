fn main() {
    std::process::exit(pencil::cli::run(std::env::args()));
}
