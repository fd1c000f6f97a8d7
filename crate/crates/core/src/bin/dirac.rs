fn main() {
    std::process::exit(dirac_core::cli::main_entry());
}
