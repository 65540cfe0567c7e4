fn main() {
    std::process::exit(nnverify::cli::run(std::env::args_os()));
}
