fn main() {
    std::process::exit(conediag_cli::main_with_args(std::env::args_os()));
}
