fn main() {
    std::process::exit(sametype::cli::main());
}
