fn main() {
    std::process::exit(bellnoise_cli::run(std::env::args_os()));
}
