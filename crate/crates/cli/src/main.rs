fn main() {
    std::process::exit(specflow_cli::main_with_args(std::env::args_os()));
}
