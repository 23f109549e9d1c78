fn main() {
    std::process::exit(tauberian::cli::run(std::env::args_os()));
}
