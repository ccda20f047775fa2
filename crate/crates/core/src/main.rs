fn main() {
    std::process::exit(dvlab::cli::main());
}
