fn main() {
    std::process::exit(ccb::cli::run());
}
