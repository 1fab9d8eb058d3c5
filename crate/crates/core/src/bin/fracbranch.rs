fn main() {
    std::process::exit(fracbranch::cli::run(std::env::args()));
}
