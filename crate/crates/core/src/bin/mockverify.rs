fn main() {
    std::process::exit(mockverify::cli::run(std::env::args_os()));
}
