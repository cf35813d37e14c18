fn main() {
    std::process::exit(qforest::cli::main_entry(std::env::args_os()));
}
