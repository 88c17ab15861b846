fn main() {
    std::process::exit(curvediff_cli::main_with_args(std::env::args_os()));
}
