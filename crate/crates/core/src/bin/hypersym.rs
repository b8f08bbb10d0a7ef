fn main() {
    std::process::exit(hypersym::cli::main_with_args(std::env::args_os()));
}
