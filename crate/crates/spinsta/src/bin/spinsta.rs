fn main() {
    std::process::exit(spinsta::cli::main_with_args(std::env::args_os()));
}
