fn main() {
    std::process::exit(infoaging::cli::main());
}
