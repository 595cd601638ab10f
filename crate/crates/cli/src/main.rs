fn main() {
    std::process::exit(tcmnn_cli::run_cli(std::env::args_os()));
}
