fn main() {
    std::process::exit(bergman_bloch::cli::main_with_args(std::env::args_os()));
}
