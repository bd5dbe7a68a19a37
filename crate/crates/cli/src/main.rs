fn main() {
    std::process::exit(hopfcross_cli::run_command(std::env::args_os()));
}
