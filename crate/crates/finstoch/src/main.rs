fn main() {
    std::process::exit(finstoch::cli::run());
}
