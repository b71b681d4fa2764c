fn main() {
    std::process::exit(morsepres::cli::main());
}
