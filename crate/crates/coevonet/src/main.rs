fn main() {
    std::process::exit(coevonet::cli::main_with_args(std::env::args_os()));
}
