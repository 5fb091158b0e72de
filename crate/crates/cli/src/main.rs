fn main() {
    std::process::exit(landau1d_cli::run(std::env::args_os()));
}
