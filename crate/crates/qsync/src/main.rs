fn main() {
    std::process::exit(qsync::cli::run(std::env::args_os()));
}
