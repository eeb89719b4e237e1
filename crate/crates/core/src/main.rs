fn main() {
    std::process::exit(bipareto::cli::main());
}
