fn main() {
    std::process::exit(orbitex::cli::main_with_args(std::env::args_os()));
}
