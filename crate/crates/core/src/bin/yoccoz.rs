fn main() {
    std::process::exit(yoccoz::cli::run(std::env::args_os()));
}
