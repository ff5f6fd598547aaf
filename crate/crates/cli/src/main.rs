fn main() {
    std::process::exit(pst_cli::main_entry());
}
