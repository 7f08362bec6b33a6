fn main() {
    std::process::exit(sfc_core::cli::main());
}
