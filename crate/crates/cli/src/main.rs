fn main() {
    std::process::exit(eprwmr_cli::main_with(std::env::args_os()));
}
