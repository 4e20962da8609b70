fn main() {
    std::process::exit(qsprep::cli::main_with_args(std::env::args_os()));
}
