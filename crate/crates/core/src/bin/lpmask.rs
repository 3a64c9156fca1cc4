fn main() {
    std::process::exit(lpmask::cli::main());
}
