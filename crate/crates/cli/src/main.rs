fn main() {
    std::process::exit(cantorloop_cli::run(std::env::args_os()));
}
