fn main() {
    std::process::exit(packed::cli::main());
}
