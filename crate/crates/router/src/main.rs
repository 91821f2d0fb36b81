fn main() {
    std::process::exit(codar_router::cli::main_with_args(std::env::args_os()));
}
