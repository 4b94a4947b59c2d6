fn main() {
    std::process::exit(curvemesh::cli::run());
}
