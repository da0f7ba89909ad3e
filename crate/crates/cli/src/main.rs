fn main() {
    std::process::exit(scenegen_cli::run(std::env::args_os()));
}
