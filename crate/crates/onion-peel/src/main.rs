fn main() {
    std::process::exit(onion_peel::cli::run());
}
