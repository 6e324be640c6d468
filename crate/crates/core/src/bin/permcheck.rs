fn main() {
    std::process::exit(permcheck::cli::main_with(std::env::args_os()));
}
