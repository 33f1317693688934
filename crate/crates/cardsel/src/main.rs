fn main() {
    std::process::exit(cardsel::cli::run_cli(std::env::args_os()));
}
